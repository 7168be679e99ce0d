//! Seeded generators and standard fixtures: random complexes, chain maps,
//! DGLAs built as `g ⊗ A`, and DGLA morphisms between them.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::artin::{ArtinAlgebra, LTensor};
use crate::dgla::{BracketTable, Dgla, DglaMorphism};
use crate::graded::{contraction, ChainMap, CochainComplex, GradedMap, GradedSpace};
use crate::linalg::{SparseMatrix, SparseVec};
use crate::scalar::{Field, Rat, Scalar};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_scalar(rng: &mut impl Rng, field: Field) -> Scalar {
    let re = rng.gen_range(-3..=3);
    match field {
        Field::GaussianRationals if rng.gen_bool(0.3) => {
            Scalar::gaussian(Rat::from_int(re), Rat::from_int(rng.gen_range(-2..=2)))
        }
        _ => field.from_int(re),
    }
}

pub fn random_vector(rng: &mut impl Rng, len: usize, field: Field) -> SparseVec {
    (0..len).map(|i| (i, small_scalar(rng, field))).collect()
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, field: Field) -> SparseMatrix {
    let rows = (0..rows).map(|_| random_vector(rng, cols, field)).collect();
    SparseMatrix::from_rows(rows, cols, field).expect("row lengths match")
}

/// Unit lower times unit upper triangular: always invertible.
pub fn random_invertible(rng: &mut impl Rng, n: usize, field: Field) -> SparseMatrix {
    let mut l = SparseMatrix::identity(n, field);
    let mut u = SparseMatrix::identity(n, field);
    for r in 0..n {
        for c in 0..n {
            if c < r {
                l.set(r, c, small_scalar(rng, field));
            } else if c > r {
                u.set(r, c, small_scalar(rng, field));
            }
        }
    }
    l.mul(&u).expect("square")
}

/// Random vector of degree `k` in `l`.
pub fn random_homogeneous(l: &Dgla, k: i32, seed: u64) -> SparseVec {
    let mut r = rng(seed);
    l.space().embed_local(&random_vector(&mut r, l.space().dim(k), l.field()), k)
}

/// Random element of `L^deg ⊗ m`.
pub fn random_tensor(l: &Dgla, alg: &ArtinAlgebra, deg: i32, seed: u64) -> LTensor {
    let mut t = LTensor::new();
    for (i, m) in alg.monomials().iter().enumerate() {
        t.add_term(m.clone(), &random_homogeneous(l, deg, seed * 97 + i as u64));
    }
    t
}

/// Random complex in the given degrees with every `C^k` of dimension at most
/// `max_dim`: a split `B ⊕ H ⊕ W` model conjugated by random basis changes.
pub fn random_complex(seed: u64, degrees: RangeInclusive<i32>, max_dim: usize, field: Field) -> CochainComplex {
    random_complex_with(&mut rng(seed), degrees, max_dim, field)
}

pub fn random_complex_with(
    rng: &mut impl Rng,
    degrees: RangeInclusive<i32>,
    max_dim: usize,
    field: Field,
) -> CochainComplex {
    let top = *degrees.end();
    let mut dims = BTreeMap::new();
    let mut w_prev = 0;
    let mut parts = BTreeMap::new();
    for k in degrees {
        let b = w_prev;
        let room = max_dim.saturating_sub(b);
        let w = if k == top { 0 } else { rng.gen_range(0..=room.min(2)) };
        let h = rng.gen_range(0..=room - w);
        dims.insert(k, b + h + w);
        parts.insert(k, (b, h, w));
        w_prev = w;
    }
    let space = GradedSpace::new(field, &dims);
    let changes: BTreeMap<i32, (SparseMatrix, SparseMatrix)> = dims
        .iter()
        .map(|(&k, &n)| {
            let p = random_invertible(rng, n, field);
            let pinv = p.inverse().expect("invertible");
            (k, (p, pinv))
        })
        .collect();
    let mut blocks = BTreeMap::new();
    for (&k, &(_, _, w)) in &parts {
        if w == 0 {
            continue;
        }
        let (n0, n1) = (dims[&k], dims[&(k + 1)]);
        // W^k (last w coordinates) maps isomorphically onto B^{k+1} (first w)
        let mut d = SparseMatrix::zeros(n1, n0, field);
        for t in 0..w {
            d.set(t, n0 - w + t, field.one());
        }
        let conj = changes[&(k + 1)].0.mul(&d).unwrap().mul(&changes[&k].1).unwrap();
        blocks.insert(k, conj);
    }
    CochainComplex::from_blocks(space, &blocks).expect("blocks have matching shapes")
}

/// A small complex together with a nonzero cocycle that may mix degrees.
pub fn random_complex_with_cocycle(seed: u64, field: Field) -> (CochainComplex, SparseVec) {
    let mut r = rng(seed);
    loop {
        let c = random_complex_with(&mut r, 0..=2, 2, field);
        let mut v = SparseVec::new();
        for k in c.space.degrees() {
            let d = c.d_block(k);
            for z in d.kernel_basis() {
                if r.gen_bool(0.6) {
                    v.add_scaled(&c.space.embed_local(&z, k), &small_scalar(&mut r, field));
                }
            }
        }
        if !v.is_zero() {
            return (c, v);
        }
    }
}

/// Random chain map `i_W φ p_V + d s + s d` between random complexes.
pub fn random_chain_map(seed: u64, field: Field) -> ChainMap {
    let mut r = rng(seed);
    let v = random_complex_with(&mut r, 0..=3, 3, field);
    let w = random_complex_with(&mut r, 0..=3, 3, field);
    let hv = contraction(&v).expect("complex");
    let hw = contraction(&w).expect("complex");
    let mut phi = BTreeMap::new();
    for k in hv.target.degrees() {
        let rows = hw.target.dim(k);
        if rows > 0 {
            phi.insert(k, random_matrix(&mut r, rows, hv.target.dim(k), field));
        }
    }
    let phi = GradedMap::from_blocks(hv.target.clone(), hw.target.clone(), 0, &phi).unwrap();
    let mut s = BTreeMap::new();
    for k in v.space.degrees() {
        let rows = w.space.dim(k - 1);
        if rows > 0 {
            s.insert(k, random_matrix(&mut r, rows, v.space.dim(k), field));
        }
    }
    let s = GradedMap::from_blocks(v.space.clone(), w.space.clone(), -1, &s).unwrap();
    let core = hw.incl.compose(&phi).unwrap().compose(&hv.proj).unwrap();
    let dw = &w.differential;
    let dv = &v.differential;
    let map = core.add(&dw.compose(&s).unwrap()).unwrap().add(&s.compose(dv).unwrap()).unwrap();
    ChainMap::new(v, w, map).expect("homotopic to a chain map")
}

/// Ordinary Lie algebra with structure constants.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    pub name: &'static str,
    pub dim: usize,
    pub table: BTreeMap<(usize, usize), Vec<(usize, i64)>>,
}

impl LieAlgebra {
    fn from_brackets(name: &'static str, dim: usize, brackets: &[(usize, usize, &[(usize, i64)])]) -> Self {
        let mut table = BTreeMap::new();
        for &(i, j, v) in brackets {
            table.insert((i, j), v.to_vec());
            table.insert((j, i), v.iter().map(|&(k, c)| (k, -c)).collect());
        }
        LieAlgebra { name, dim, table }
    }

    pub fn abelian(dim: usize) -> Self {
        Self::from_brackets("abelian", dim, &[])
    }

    /// `[x, y] = y`
    pub fn aff2() -> Self {
        Self::from_brackets("aff2", 2, &[(0, 1, &[(1, 1)])])
    }

    /// `[x, y] = z`
    pub fn heis3() -> Self {
        Self::from_brackets("heis3", 3, &[(0, 1, &[(2, 1)])])
    }

    /// Basis `h, e, f`.
    pub fn sl2() -> Self {
        Self::from_brackets("sl2", 3, &[(0, 1, &[(1, 2)]), (0, 2, &[(2, -2)]), (1, 2, &[(0, 1)])])
    }

    pub fn bracket(&self, i: usize, j: usize) -> &[(usize, i64)] {
        self.table.get(&(i, j)).map_or(&[], |v| v.as_slice())
    }

    pub fn to_dgla(&self, field: Field) -> Dgla {
        tensor_dgla(self, &Cdga::ground(field))
    }
}

/// Finite-dimensional graded-commutative DGA; the unit is the first degree-0 basis vector.
#[derive(Clone, Debug)]
pub struct Cdga {
    pub name: &'static str,
    pub complex: CochainComplex,
    pub mult: BTreeMap<(usize, usize), SparseVec>,
}

impl Cdga {
    fn build(
        name: &'static str,
        field: Field,
        degrees: &[i32],
        d: &[(usize, usize, i64)],
        products: &[(usize, usize, usize, i64)],
    ) -> Self {
        // callers list the basis already sorted by degree
        debug_assert!(degrees.windows(2).all(|w| w[0] <= w[1]));
        let mut dims = BTreeMap::new();
        for &k in degrees {
            *dims.entry(k).or_insert(0) += 1;
        }
        let space = GradedSpace::new(field, &dims);
        let n = degrees.len();
        let mut dm = SparseMatrix::zeros(n, n, field);
        for &(r, c, x) in d {
            dm.set(r, c, field.from_int(x));
        }
        let complex = CochainComplex::new(space, dm).expect("degree one differential");
        let mut mult = BTreeMap::new();
        let unit = degrees.iter().position(|&k| k == 0).expect("unit in degree 0");
        for i in 0..n {
            mult.insert((unit, i), SparseVec::unit(i));
            mult.insert((i, unit), SparseVec::unit(i));
        }
        for &(i, j, k, c) in products {
            mult.insert((i, j), SparseVec::from_pairs([(k, field.from_int(c))]));
            let s = if degrees[i] * degrees[j] % 2 == 0 { c } else { -c };
            mult.insert((j, i), SparseVec::from_pairs([(k, field.from_int(s))]));
        }
        Cdga { name, complex, mult }
    }

    pub fn ground(field: Field) -> Self {
        Self::build("F", field, &[0], &[], &[])
    }

    /// `Λ(ε)`, `|ε| = 1`.
    pub fn exterior1(field: Field) -> Self {
        Self::build("Λ(ε)", field, &[0, 1], &[], &[])
    }

    /// `Λ(ε1, ε2)` with zero differential.
    pub fn exterior2(field: Field) -> Self {
        Self::build("Λ(ε1,ε2)", field, &[0, 1, 1, 2], &[], &[(1, 2, 3, 1)])
    }

    /// `Λ(η)`, `|η| = -1`.
    pub fn exterior_neg(field: Field) -> Self {
        Self::build("Λ(η)", field, &[-1, 0], &[], &[])
    }

    /// Dual numbers `F[s]/s²`, `|s| = 0`.
    pub fn dual_numbers(field: Field) -> Self {
        Self::build("F[s]/s²", field, &[0, 0], &[], &[])
    }

    /// `F ⊕ ⟨u, v⟩` with square-zero ideal, `|u| = k`, `|v| = k + 1`, `du = v`.
    pub fn square_zero_pair(field: Field, k: i32) -> Self {
        let degs = [0, k, k + 1];
        assert!(k >= 0);
        Self::build("F⊕⟨u,du⟩", field, &degs, &[(2, 1, 1)], &[])
    }

    /// `F ⊕ ⟨a, b, c⟩`, `|a| = |b| = 1`, `|c| = 2`, `ab = c`, `da = 0`.
    pub fn odd_pair(field: Field) -> Self {
        Self::build("F⊕⟨a,b,ab⟩", field, &[0, 1, 1, 2], &[], &[(1, 2, 3, 1)])
    }

    pub fn unit(&self) -> usize {
        self.complex.space.offset(0)
    }

    pub fn field(&self) -> Field {
        self.complex.field()
    }

    pub fn dim(&self) -> usize {
        self.complex.space.total_dim()
    }

    pub fn degree_of(&self, i: usize) -> i32 {
        self.complex.space.degree_of(i)
    }

    pub fn product(&self, i: usize, j: usize) -> SparseVec {
        self.mult.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Augmentation `A -> F` killing everything but the unit.
    pub fn augmentation(&self) -> SparseMatrix {
        let mut m = SparseMatrix::zeros(1, self.dim(), self.field());
        m.set(0, self.unit(), self.field().one());
        m
    }

    /// Unit map `F -> A`.
    pub fn unit_map(&self) -> SparseMatrix {
        let mut m = SparseMatrix::zeros(self.dim(), 1, self.field());
        m.set(self.unit(), 0, self.field().one());
        m
    }
}

/// Global basis of `g ⊗ A`: within each degree, ordered by `(A index, g index)`.
pub fn tensor_index(g: &LieAlgebra, a: &Cdga) -> Vec<(usize, usize)> {
    let mut idx = Vec::new();
    for k in a.complex.space.degrees() {
        for j in a.complex.space.range(k) {
            for i in 0..g.dim {
                idx.push((i, j));
            }
        }
    }
    idx
}

/// `g ⊗ A` with `[x ⊗ a, y ⊗ b] = [x, y] ⊗ ab` and `d(x ⊗ a) = x ⊗ da`.
pub fn tensor_dgla(g: &LieAlgebra, a: &Cdga) -> Dgla {
    let field = a.field();
    let idx = tensor_index(g, a);
    let pos: BTreeMap<(usize, usize), usize> = idx.iter().enumerate().map(|(n, &p)| (p, n)).collect();
    let mut dims = BTreeMap::new();
    let mut labels = Vec::new();
    for &(i, j) in &idx {
        *dims.entry(a.degree_of(j)).or_insert(0) += 1;
        labels.push(format!("x{i}⊗{}", a.complex.space.label(j)));
    }
    let space = GradedSpace::with_labels(field, &dims, labels);
    let n = idx.len();
    let mut d = SparseMatrix::zeros(n, n, field);
    for (col, &(i, j)) in idx.iter().enumerate() {
        for (r, x) in a.complex.d(&SparseVec::unit(j)).iter() {
            d.set(pos[&(i, r)], col, x.clone());
        }
    }
    let complex = CochainComplex::new(space, d).expect("degree one");
    let mut table = BracketTable::new();
    for (p, &(i1, j1)) in idx.iter().enumerate() {
        for (q, &(i2, j2)) in idx.iter().enumerate() {
            let ab = a.product(j1, j2);
            let br = g.bracket(i1, i2);
            if ab.is_zero() || br.is_empty() {
                continue;
            }
            let mut v = SparseVec::new();
            for &(k, c) in br {
                for (l, y) in ab.iter() {
                    v.add_at(pos[&(k, l)], &y.mul_ref(&field.from_int(c)));
                }
            }
            table.insert((p, q), v);
        }
    }
    Dgla::from_table(complex, table)
}

/// `φ ⊗ ψ : g ⊗ A -> g' ⊗ A'` from a Lie morphism and a CDGA morphism
/// (matrices in the respective bases).
pub fn tensor_morphism(
    g: &LieAlgebra,
    a: &Cdga,
    phi: &SparseMatrix,
    g2: &LieAlgebra,
    a2: &Cdga,
    psi: &SparseMatrix,
) -> DglaMorphism {
    let source = Arc::new(tensor_dgla(g, a));
    let target = Arc::new(tensor_dgla(g2, a2));
    let idx = tensor_index(g, a);
    let pos2: BTreeMap<(usize, usize), usize> =
        tensor_index(g2, a2).into_iter().enumerate().map(|(n, p)| (p, n)).collect();
    let field = a.field();
    let mut m = SparseMatrix::zeros(target.dim(), source.dim(), field);
    let phicols = phi.columns();
    let psicols = psi.columns();
    for (col, &(i, j)) in idx.iter().enumerate() {
        for (k, x) in phicols[i].iter() {
            for (l, y) in psicols[j].iter() {
                m.add_at(pos2[&(k, l)], col, &x.mul_ref(y));
            }
        }
    }
    let map = GradedMap::new(source.space().clone(), target.space().clone(), 0, m).expect("degree zero");
    DglaMorphism::new(source, target, map)
}

/// Transports a DGLA along a degree-preserving invertible change of basis
/// `p` (new coordinates to old). Returns the new algebra, `p` and `p⁻¹`.
pub fn change_basis(l: &Dgla, p: &GradedMap) -> (Dgla, GradedMap, GradedMap) {
    let pinv = GradedMap::new(
        p.target.clone(),
        p.source.clone(),
        0,
        p.matrix.inverse().expect("basis change must be invertible"),
    )
    .unwrap();
    let n = l.dim();
    let cols: Vec<SparseVec> = p.matrix.columns();
    let d = pinv.compose(&l.complex.differential).unwrap().compose(p).unwrap();
    let complex = CochainComplex::new(p.source.clone(), d.matrix).unwrap();
    let mut table = BracketTable::new();
    for i in 0..n {
        for j in 0..n {
            let v = pinv.apply(&l.bracket(&cols[i], &cols[j]));
            if !v.is_zero() {
                table.insert((i, j), v);
            }
        }
    }
    (Dgla::from_table(complex, table), p.clone(), pinv)
}

pub fn random_basis_change(rng: &mut impl Rng, space: &GradedSpace) -> GradedMap {
    let blocks = space.degrees().map(|k| (k, random_invertible(rng, space.dim(k), space.field()))).collect();
    GradedMap::from_blocks(space.clone(), space.clone(), 0, &blocks).unwrap()
}

/// Pre- and post-composes a morphism with random basis changes.
pub fn scramble_morphism(rng: &mut impl Rng, f: &DglaMorphism) -> DglaMorphism {
    let ps = random_basis_change(rng, f.source.space());
    let pt = random_basis_change(rng, f.target.space());
    let (s, ps, _) = change_basis(&f.source, &ps);
    let (t, _, pt_inv) = change_basis(&f.target, &pt);
    let map = pt_inv.compose(&f.map).unwrap().compose(&ps).unwrap();
    DglaMorphism::new(Arc::new(s), Arc::new(t), map)
}

pub fn sl2(field: Field) -> Dgla {
    LieAlgebra::sl2().to_dgla(field)
}

fn mat(field: Field, rows: &[&[i64]]) -> SparseMatrix {
    SparseMatrix::from_ints(rows, field)
}

/// Cartan subalgebra `⟨h⟩ ⊂ sl2`.
pub fn cartan_in_sl2(field: Field) -> DglaMorphism {
    let f = Cdga::ground(field);
    tensor_morphism(&LieAlgebra::abelian(1), &f, &mat(field, &[&[1], &[0], &[0]]), &LieAlgebra::sl2(), &f, &mat(field, &[&[1]]))
}

/// Lie algebra morphisms used by the random morphism generator:
/// `(source, target, matrix)`.
fn lie_morphisms() -> Vec<(LieAlgebra, LieAlgebra, Vec<Vec<i64>>)> {
    vec![
        (LieAlgebra::aff2(), LieAlgebra::aff2(), vec![vec![1, 0], vec![0, 1]]),
        (LieAlgebra::aff2(), LieAlgebra::aff2(), vec![vec![1, 0], vec![3, 2]]),
        (LieAlgebra::aff2(), LieAlgebra::abelian(1), vec![vec![1, 0]]),
        (LieAlgebra::heis3(), LieAlgebra::heis3(), vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]),
        (LieAlgebra::heis3(), LieAlgebra::abelian(2), vec![vec![1, 0, 0], vec![0, 1, 0]]),
        (LieAlgebra::abelian(1), LieAlgebra::sl2(), vec![vec![1], vec![0], vec![0]]),
        (LieAlgebra::abelian(1), LieAlgebra::heis3(), vec![vec![0], vec![0], vec![1]]),
        (LieAlgebra::sl2(), LieAlgebra::sl2(), vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]),
    ]
}

/// CDGA morphisms `(source, target, matrix)`.
fn cdga_morphisms(field: Field) -> Vec<(Cdga, Cdga, SparseMatrix)> {
    let l1 = Cdga::exterior1(field);
    let l2 = Cdga::exterior2(field);
    let sz = Cdga::square_zero_pair(field, 0);
    let sz1 = Cdga::square_zero_pair(field, 1);
    let odd = Cdga::odd_pair(field);
    let eta = Cdga::exterior_neg(field);
    let dual = Cdga::dual_numbers(field);
    let id = |a: &Cdga| (a.clone(), a.clone(), SparseMatrix::identity(a.dim(), field));
    vec![
        id(&l1),
        id(&l2),
        id(&sz),
        id(&sz1),
        id(&odd),
        id(&eta),
        id(&dual),
        (l1.clone(), l2.clone(), mat(field, &[&[1, 0], &[0, 1], &[0, 0], &[0, 0]])),
        (l2.clone(), l1.clone(), mat(field, &[&[1, 0, 0, 0], &[0, 1, 0, 0]])),
        (l1.clone(), odd.clone(), mat(field, &[&[1, 0], &[0, 1], &[0, 1], &[0, 0]])),
        (sz1.clone(), Cdga::ground(field), sz1.augmentation()),
        (Cdga::ground(field), sz.clone(), sz.unit_map()),
        (eta.clone(), Cdga::ground(field), mat(field, &[&[0, 1]])),
        (dual.clone(), l1.clone(), mat(field, &[&[1, 0], &[0, 0]])),
    ]
}

/// Random DGLA morphism `φ ⊗ ψ` followed by random basis changes.
pub fn random_morphism(seed: u64, field: Field) -> DglaMorphism {
    let mut r = rng(seed);
    let lies = lie_morphisms();
    let cdgas = cdga_morphisms(field);
    let (g, g2, phi) = &lies[r.gen_range(0..lies.len())];
    let (a, a2, psi) = &cdgas[r.gen_range(0..cdgas.len())];
    let phi_rows: Vec<&[i64]> = phi.iter().map(|v| v.as_slice()).collect();
    let phi = mat(field, &phi_rows);
    let f = tensor_morphism(g, a, &phi, g2, a2, psi);
    scramble_morphism(&mut r, &f)
}

/// Random DGLA morphism whose source and target live in `degrees` with every
/// graded piece of dimension at most `max_dim`.
pub fn random_bounded_morphism(seed: u64, field: Field, degrees: RangeInclusive<i32>, max_dim: usize) -> DglaMorphism {
    let fits = |s: &GradedSpace| s.dims().iter().all(|(k, &d)| d == 0 || (degrees.contains(k) && d <= max_dim));
    let mut r = rng(seed);
    loop {
        let f = random_morphism(r.gen(), field);
        if fits(f.source.space()) && fits(f.target.space()) {
            return f;
        }
    }
}

/// Random DGLA `g ⊗ A` in a random basis.
pub fn random_dgla(seed: u64, field: Field) -> Dgla {
    let mut r = rng(seed);
    let lies = [LieAlgebra::aff2(), LieAlgebra::heis3(), LieAlgebra::sl2(), LieAlgebra::abelian(2)];
    let cdgas = [
        Cdga::exterior1(field),
        Cdga::exterior2(field),
        Cdga::square_zero_pair(field, 0),
        Cdga::square_zero_pair(field, 1),
        Cdga::odd_pair(field),
        Cdga::exterior_neg(field),
    ];
    let g = &lies[r.gen_range(0..lies.len())];
    let a = &cdgas[r.gen_range(0..cdgas.len())];
    let l = tensor_dgla(g, a);
    let p = random_basis_change(&mut r, l.space());
    change_basis(&l, &p).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgla::{check_dgla, check_morphism};
    use crate::graded::check_complex;

    #[test]
    fn random_complexes_square_to_zero() {
        for seed in 0..20 {
            let c = random_complex(seed, -1..=3, 4, Field::Rationals);
            assert!(check_complex(&c).is_ok());
            assert!(c.space.dims().values().all(|&n| n <= 4));
        }
    }

    #[test]
    fn generators_are_deterministic() {
        let a = random_morphism(5, Field::Rationals);
        let b = random_morphism(5, Field::Rationals);
        assert_eq!(a.map, b.map);
        assert_eq!(a.source.table(), b.source.table());
    }

    #[test]
    fn fixtures_are_dglas() {
        let q = Field::Rationals;
        for l in [sl2(q), LieAlgebra::aff2().to_dgla(q), LieAlgebra::heis3().to_dgla(q)] {
            assert!(check_dgla(&l).is_ok());
        }
        assert!(check_morphism(&cartan_in_sl2(q)).is_ok());
    }

    #[test]
    fn random_dglas_and_morphisms_satisfy_axioms() {
        for field in [Field::Rationals, Field::Prime(7)] {
            for seed in 0..12 {
                let l = random_dgla(seed, field);
                assert!(check_dgla(&l).is_ok(), "dgla seed {seed}");
                let f = random_morphism(seed, field);
                assert!(check_dgla(&f.source).is_ok(), "source seed {seed}");
                assert!(check_dgla(&f.target).is_ok(), "target seed {seed}");
                assert!(check_morphism(&f).is_ok(), "morphism seed {seed}");
            }
        }
    }

    #[test]
    fn every_listed_morphism_is_valid() {
        let q = Field::Rationals;
        for (g, g2, phi) in lie_morphisms() {
            let rows: Vec<&[i64]> = phi.iter().map(|v| v.as_slice()).collect();
            let phi = mat(q, &rows);
            for (a, a2, psi) in cdga_morphisms(q) {
                let f = tensor_morphism(&g, &a, &phi, &g2, &a2, &psi);
                assert!(check_morphism(&f).is_ok(), "{} -> {} / {} -> {}", g.name, g2.name, a.name, a2.name);
            }
        }
    }

    #[test]
    fn bounded_morphisms_respect_bounds() {
        for seed in 0..30 {
            let f = random_bounded_morphism(seed, Field::Rationals, -1..=3, 4);
            for s in [f.source.space(), f.target.space()] {
                assert!(s.dims().iter().all(|(k, &d)| d == 0 || ((-1..=3).contains(k) && d <= 4)));
            }
            assert!(check_morphism(&f).is_ok());
        }
    }

    #[test]
    fn random_chain_maps_commute() {
        for seed in 0..10 {
            let f = random_chain_map(seed, Field::Rationals);
            let lhs = f.map.compose(&f.source.differential).unwrap();
            let rhs = f.target.differential.compose(&f.map).unwrap();
            assert_eq!(lhs.matrix, rhs.matrix);
        }
    }
}
