//! Differential graded Lie algebras given by finite data.
//!
//! A [`Dgla`] is a cochain complex plus a bracket on basis pairs. Small
//! algebras store explicit structure constants; large ones (endomorphisms,
//! derivations, subalgebras) compute brackets from a rule on demand, so the
//! same operations work on both.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graded::{check_complex, CochainComplex, GradedMap, GradedSpace};
use crate::linalg::{SparseMatrix, SparseVec};
use crate::scalar::{Field, Scalar};

/// Bracket of two basis vectors, for algebras whose structure constants are
/// computed rather than stored.
pub trait BracketRule: Send + Sync + fmt::Debug {
    fn bracket_basis(&self, i: usize, j: usize) -> SparseVec;
}

/// Structure constants: `[e_i, e_j]` for every ordered pair with a nonzero bracket.
pub type BracketTable = BTreeMap<(usize, usize), SparseVec>;

#[derive(Clone, Debug)]
enum Bracket {
    Table(Arc<BracketTable>),
    Rule(Arc<dyn BracketRule>),
}

#[derive(Clone, Debug)]
pub struct Dgla {
    pub complex: CochainComplex,
    bracket: Bracket,
}

impl Dgla {
    pub fn from_table(complex: CochainComplex, table: BracketTable) -> Self {
        let table = table.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Dgla { complex, bracket: Bracket::Table(Arc::new(table)) }
    }

    pub fn from_rule(complex: CochainComplex, rule: Arc<dyn BracketRule>) -> Self {
        Dgla { complex, bracket: Bracket::Rule(rule) }
    }

    pub fn abelian(complex: CochainComplex) -> Self {
        Self::from_table(complex, BracketTable::new())
    }

    pub fn space(&self) -> &GradedSpace {
        &self.complex.space
    }

    pub fn field(&self) -> Field {
        self.complex.field()
    }

    pub fn dim(&self) -> usize {
        self.space().total_dim()
    }

    pub fn degree_of(&self, i: usize) -> i32 {
        self.space().degree_of(i)
    }

    pub fn d(&self, x: &SparseVec) -> SparseVec {
        self.complex.d(x)
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> SparseVec {
        match &self.bracket {
            Bracket::Table(t) => t.get(&(i, j)).cloned().unwrap_or_default(),
            Bracket::Rule(r) => r.bracket_basis(i, j),
        }
    }

    pub fn bracket(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                let br = self.bracket_basis(i, j);
                if !br.is_zero() {
                    out.add_scaled(&br, &a.mul_ref(b));
                }
            }
        }
        out
    }

    /// `ad_x^n (y)`
    pub fn ad_power(&self, x: &SparseVec, y: &SparseVec, n: usize) -> SparseVec {
        let mut out = y.clone();
        for _ in 0..n {
            if out.is_zero() {
                break;
            }
            out = self.bracket(x, &out);
        }
        out
    }

    /// Explicit structure constants (computes every pair for rule-based brackets).
    pub fn table(&self) -> BracketTable {
        match &self.bracket {
            Bracket::Table(t) => (**t).clone(),
            Bracket::Rule(r) => {
                let n = self.dim();
                let rows: Vec<Vec<((usize, usize), SparseVec)>> = (0..n)
                    .into_par_iter()
                    .map(|i| {
                        (0..n)
                            .filter(|&j| self.bracket_target_exists(i, j))
                            .map(|j| ((i, j), r.bracket_basis(i, j)))
                            .filter(|(_, v)| !v.is_zero())
                            .collect()
                    })
                    .collect();
                rows.into_iter().flatten().collect()
            }
        }
    }

    fn bracket_target_exists(&self, i: usize, j: usize) -> bool {
        self.space().dim(self.degree_of(i) + self.degree_of(j)) > 0
    }

    /// Materializes a rule-based bracket into a table.
    pub fn materialized(&self) -> Dgla {
        Dgla::from_table(self.complex.clone(), self.table())
    }

    pub fn is_table(&self) -> bool {
        matches!(self.bracket, Bracket::Table(_))
    }

    /// Graded pieces of a degree: `(global index range)`.
    pub fn range(&self, degree: i32) -> std::ops::Range<usize> {
        self.space().range(degree)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DglaAxiom {
    DifferentialSquare,
    Antisymmetry,
    Leibniz,
    Jacobi,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DglaWitness {
    pub axiom: DglaAxiom,
    /// Basis indices of the failing tuple.
    pub indices: Vec<usize>,
    pub defect: SparseVec,
}

impl fmt::Display for DglaWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} fails on basis {:?} (defect {})", self.axiom, self.indices, self.defect)
    }
}

fn sign(k: i32) -> Scalar {
    Scalar::sign(k as i64)
}

/// Checks `d² = 0`, graded antisymmetry, the Leibniz rule and the graded
/// Jacobi identity on all basis tuples.
pub fn check_dgla(l: &Dgla) -> std::result::Result<(), DglaWitness> {
    if let Err(w) = check_complex(&l.complex) {
        return Err(DglaWitness {
            axiom: DglaAxiom::DifferentialSquare,
            indices: vec![w.row, w.col],
            defect: SparseVec::from_pairs([(w.row, w.value)]),
        });
    }
    let n = l.dim();
    let basis: Vec<SparseVec> = (0..n).map(SparseVec::unit).collect();
    let deg: Vec<i32> = (0..n).map(|i| l.degree_of(i)).collect();
    let brackets: Vec<Vec<SparseVec>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| if l.bracket_target_exists(i, j) { l.bracket_basis(i, j) } else { SparseVec::new() })
                .collect()
        })
        .collect();
    let br = |x: &SparseVec, y: &SparseVec| -> SparseVec {
        let mut out = SparseVec::new();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                out.add_scaled(&brackets[i][j], &a.mul_ref(b));
            }
        }
        out
    };
    for i in 0..n {
        for j in 0..n {
            let defect = brackets[i][j].add(&brackets[j][i].scaled(&sign(deg[i] * deg[j])));
            if !defect.is_zero() {
                return Err(DglaWitness { axiom: DglaAxiom::Antisymmetry, indices: vec![i, j], defect });
            }
        }
    }
    let dbasis: Vec<SparseVec> = basis.iter().map(|b| l.d(b)).collect();
    for i in 0..n {
        for j in 0..n {
            let lhs = l.d(&brackets[i][j]);
            let rhs = br(&dbasis[i], &basis[j]).add(&br(&basis[i], &dbasis[j]).scaled(&sign(deg[i])));
            let defect = lhs.sub(&rhs);
            if !defect.is_zero() {
                return Err(DglaWitness { axiom: DglaAxiom::Leibniz, indices: vec![i, j], defect });
            }
        }
    }
    let space = l.space();
    let failure = (0..n).into_par_iter().find_map_first(|i| {
        for j in 0..n {
            for k in 0..n {
                if space.dim(deg[i] + deg[j] + deg[k]) == 0 {
                    continue;
                }
                let lhs = br(&basis[i], &brackets[j][k]);
                let rhs = br(&brackets[i][j], &basis[k])
                    .add(&br(&basis[j], &brackets[i][k]).scaled(&sign(deg[i] * deg[j])));
                let defect = lhs.sub(&rhs);
                if !defect.is_zero() {
                    return Some(DglaWitness { axiom: DglaAxiom::Jacobi, indices: vec![i, j, k], defect });
                }
            }
        }
        None
    });
    match failure {
        Some(w) => Err(w),
        None => Ok(()),
    }
}

#[derive(Clone, Debug)]
pub struct DglaMorphism {
    pub source: Arc<Dgla>,
    pub target: Arc<Dgla>,
    pub map: GradedMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorphismWitness {
    /// `f(d e_i) != d f(e_i)`
    Differential { index: usize, defect: SparseVec },
    /// `f[e_i, e_j] != [f e_i, f e_j]`
    Bracket { indices: (usize, usize), defect: SparseVec },
    Shape(String),
}

impl fmt::Display for MorphismWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorphismWitness::Differential { index, defect } => {
                write!(f, "does not commute with d on basis {index} (defect {defect})")
            }
            MorphismWitness::Bracket { indices, defect } => {
                write!(f, "does not preserve the bracket on basis {indices:?} (defect {defect})")
            }
            MorphismWitness::Shape(s) => f.write_str(s),
        }
    }
}

impl DglaMorphism {
    pub fn new(source: Arc<Dgla>, target: Arc<Dgla>, map: GradedMap) -> Self {
        DglaMorphism { source, target, map }
    }

    pub fn identity(l: Arc<Dgla>) -> Self {
        let map = GradedMap::identity(l.space());
        DglaMorphism { source: l.clone(), target: l, map }
    }

    pub fn apply(&self, x: &SparseVec) -> SparseVec {
        self.map.apply(x)
    }

    pub fn is_injective(&self) -> bool {
        self.map.matrix.rank() == self.source.dim()
    }

    pub fn validated(self) -> Result<Self> {
        match check_morphism(&self) {
            Ok(()) => Ok(self),
            Err(w) => Err(Error::Morphism(w.to_string())),
        }
    }
}

/// Checks that `f` is degree zero, commutes with the differentials and
/// preserves brackets on all basis pairs.
pub fn check_morphism(f: &DglaMorphism) -> std::result::Result<(), MorphismWitness> {
    if f.map.degree != 0 || &f.map.source != f.source.space() || &f.map.target != f.target.space() {
        return Err(MorphismWitness::Shape("map is not a degree-0 map between the underlying spaces".into()));
    }
    let n = f.source.dim();
    let images: Vec<SparseVec> = (0..n).map(|i| f.apply(&SparseVec::unit(i))).collect();
    for (i, img) in images.iter().enumerate() {
        let defect = f.apply(&f.source.d(&SparseVec::unit(i))).sub(&f.target.d(img));
        if !defect.is_zero() {
            return Err(MorphismWitness::Differential { index: i, defect });
        }
    }
    let failure = (0..n).into_par_iter().find_map_first(|i| {
        for j in 0..n {
            let lhs = f.apply(&f.source.bracket_basis(i, j));
            let rhs = f.target.bracket(&images[i], &images[j]);
            let defect = lhs.sub(&rhs);
            if !defect.is_zero() {
                return Some(MorphismWitness::Bracket { indices: (i, j), defect });
            }
        }
        None
    });
    failure.map_or(Ok(()), Err)
}

/// `L' = L ⊕ ⟨Δ⟩` with `dΔ = 0`, `[Δ, l] = dl`, `[Δ, Δ] = 0`.
#[derive(Clone, Debug)]
pub struct DeltaExtension {
    pub base: Arc<Dgla>,
    pub extended: Dgla,
    /// Index of Δ in the extended basis.
    pub delta: usize,
    to_ext: Vec<usize>,
    from_ext: Vec<Option<usize>>,
}

#[derive(Debug)]
struct DeltaRule {
    base: Arc<Dgla>,
    delta: usize,
    to_ext: Vec<usize>,
    from_ext: Vec<Option<usize>>,
}

impl DeltaRule {
    fn lift(&self, v: &SparseVec) -> SparseVec {
        v.remap(|i| Some(self.to_ext[i]))
    }
}

impl BracketRule for DeltaRule {
    fn bracket_basis(&self, i: usize, j: usize) -> SparseVec {
        match (self.from_ext[i], self.from_ext[j]) {
            (Some(a), Some(b)) => self.lift(&self.base.bracket_basis(a, b)),
            (None, Some(b)) => self.lift(&self.base.d(&SparseVec::unit(b))),
            (Some(a), None) => {
                // [l, Δ] = -(-1)^{|l|} [Δ, l]
                let s = sign(self.base.degree_of(a) + 1);
                self.lift(&self.base.d(&SparseVec::unit(a))).scaled(&s)
            }
            (None, None) => {
                debug_assert_eq!(i, self.delta);
                SparseVec::new()
            }
        }
    }
}

impl DeltaExtension {
    pub fn lift(&self, v: &SparseVec) -> SparseVec {
        v.remap(|i| Some(self.to_ext[i]))
    }

    /// Drops the Δ-component and returns base coordinates.
    pub fn restrict(&self, v: &SparseVec) -> SparseVec {
        v.remap(|i| self.from_ext[i])
    }

    pub fn delta_vec(&self) -> SparseVec {
        SparseVec::unit(self.delta)
    }
}

/// Adjoins a degree-one element whose bracket realizes the differential.
pub fn adjoin_delta(l: Arc<Dgla>) -> Result<DeltaExtension> {
    if let Err(w) = check_dgla(&l) {
        return Err(Error::Axiom(w.to_string()));
    }
    Ok(adjoin_delta_unchecked(l))
}

/// As [`adjoin_delta`], trusting that `l` is a DGLA.
pub fn adjoin_delta_unchecked(l: Arc<Dgla>) -> DeltaExtension {
    let space = l.space();
    let mut dims = space.dims();
    *dims.entry(1).or_insert(0) += 1;
    let delta = space.offset(1) + space.dim(1);
    let mut labels = space.labels().to_vec();
    labels.insert(delta, "Δ".to_string());
    let ext_space = GradedSpace::with_labels(space.field(), &dims, labels);
    let to_ext: Vec<usize> = (0..l.dim()).map(|i| if i < delta { i } else { i + 1 }).collect();
    let mut from_ext = vec![None; l.dim() + 1];
    for (i, &e) in to_ext.iter().enumerate() {
        from_ext[e] = Some(i);
    }
    let n = ext_space.total_dim();
    let mut d = SparseMatrix::zeros(n, n, space.field());
    for (r, c, x) in l.complex.differential.matrix.entries() {
        d.set(to_ext[r], to_ext[c], x.clone());
    }
    let complex = CochainComplex::new(ext_space, d).expect("degrees are preserved");
    let rule = DeltaRule { base: l.clone(), delta, to_ext: to_ext.clone(), from_ext: from_ext.clone() };
    let mut extended = Dgla::from_rule(complex, Arc::new(rule));
    if l.is_table() {
        extended = extended.materialized();
    }
    DeltaExtension { base: l, extended, delta, to_ext, from_ext }
}

/// Index of the graded endomorphism basis `E_{a←b}` (maps `e_b` to `e_a`).
#[derive(Debug)]
pub struct EndBasis {
    pub pairs: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
}

impl EndBasis {
    pub fn index(&self, a: usize, b: usize) -> usize {
        self.index[&(a, b)]
    }
}

#[derive(Debug)]
struct CommutatorRule {
    basis: Arc<EndBasis>,
    degree_of: Vec<i32>,
}

impl BracketRule for CommutatorRule {
    fn bracket_basis(&self, i: usize, j: usize) -> SparseVec {
        let (a, b) = self.basis.pairs[i];
        let (c, d) = self.basis.pairs[j];
        let mut out = SparseVec::new();
        if b == c {
            out.add_at(self.basis.index(a, d), &Scalar::one());
        }
        if d == a {
            let s = sign(self.degree_of[i] * self.degree_of[j]);
            out.add_at(self.basis.index(c, b), &s.neg_ref());
        }
        out
    }
}

/// Endomorphism DGLA with its basis bookkeeping.
#[derive(Clone, Debug)]
pub struct EndAlgebra {
    pub dgla: Arc<Dgla>,
    pub basis: Arc<EndBasis>,
    pub complex: CochainComplex,
}

impl EndAlgebra {
    /// Matrix of an endomorphism given in End coordinates.
    pub fn to_matrix(&self, e: &SparseVec) -> SparseMatrix {
        let n = self.complex.space.total_dim();
        let mut m = SparseMatrix::zeros(n, n, self.complex.field());
        for (i, x) in e.iter() {
            let (a, b) = self.basis.pairs[i];
            m.add_at(a, b, x);
        }
        m
    }

    /// End coordinates of a (degree-respecting) matrix.
    pub fn from_matrix(&self, m: &SparseMatrix) -> SparseVec {
        m.entries().map(|(a, b, x)| (self.basis.index(a, b), x.clone())).collect()
    }

    /// Evaluates an endomorphism on a vector of the underlying complex.
    pub fn evaluate(&self, e: &SparseVec, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, x) in e.iter() {
            let (a, b) = self.basis.pairs[i];
            let vb = v.get(b);
            if !vb.is_zero() {
                out.add_at(a, &x.mul_ref(&vb));
            }
        }
        out
    }
}

/// Graded endomorphisms of `c` with the graded commutator and `D ↦ dD - (-1)^{|D|} Dd`.
///
/// Small algebras get materialized structure constants.
pub fn end_algebra(c: &CochainComplex) -> EndAlgebra {
    let space = &c.space;
    let n = space.total_dim();
    let mut by_degree: BTreeMap<i32, Vec<(usize, usize)>> = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            by_degree.entry(space.degree_of(a) - space.degree_of(b)).or_default().push((a, b));
        }
    }
    let mut pairs = Vec::new();
    let mut dims = BTreeMap::new();
    let mut labels = Vec::new();
    for (k, ps) in by_degree {
        dims.insert(k, ps.len());
        for &(a, b) in &ps {
            labels.push(format!("E[{}<-{}]", space.label(a), space.label(b)));
        }
        pairs.extend(ps);
    }
    let index = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let basis = Arc::new(EndBasis { pairs, index });
    let end_space = GradedSpace::with_labels(space.field(), &dims, labels);
    let dm = &c.differential.matrix;
    let dcols = dm.columns();
    let m = basis.pairs.len();
    let mut diff = SparseMatrix::zeros(m, m, space.field());
    for (i, &(a, b)) in basis.pairs.iter().enumerate() {
        let k = end_space.degree_of(i);
        // d ∘ E_{a←b} = Σ_r d[r][a] E_{r←b}
        for (r, x) in dcols[a].iter() {
            diff.add_at(basis.index(r, b), i, x);
        }
        // E_{a←b} ∘ d = Σ_c d[b][c] E_{a←c}
        let s = sign(k + 1);
        for (cc, x) in dm.row(b).iter() {
            diff.add_at(basis.index(a, cc), i, &x.mul_ref(&s));
        }
    }
    let complex = CochainComplex::new(end_space.clone(), diff).expect("degrees are preserved");
    let degree_of = (0..m).map(|i| end_space.degree_of(i)).collect();
    let rule = CommutatorRule { basis: basis.clone(), degree_of };
    let mut dgla = Dgla::from_rule(complex, Arc::new(rule));
    if m <= 400 {
        dgla = dgla.materialized();
    }
    EndAlgebra { dgla: Arc::new(dgla), basis, complex: c.clone() }
}

/// The endomorphism DGLA of a complex.
pub fn end_dgla(c: &CochainComplex) -> Dgla {
    (*end_algebra(c).dgla).clone()
}

/// Sub-DGLA spanned by a set of homogeneous vectors, with brackets and
/// differential computed in the ambient algebra.
#[derive(Debug)]
struct SubRule {
    ambient: Arc<Dgla>,
    basis: Vec<SparseVec>,
    pivots: Vec<usize>,
}

impl SubRule {
    fn coords(&self, v: &SparseVec) -> SparseVec {
        self.pivots.iter().enumerate().map(|(r, &p)| (r, v.get(p))).collect()
    }
}

impl BracketRule for SubRule {
    fn bracket_basis(&self, i: usize, j: usize) -> SparseVec {
        self.coords(&self.ambient.bracket(&self.basis[i], &self.basis[j]))
    }
}

/// A sub-DGLA together with its inclusion.
#[derive(Clone, Debug)]
pub struct SubDgla {
    pub dgla: Arc<Dgla>,
    pub inclusion: DglaMorphism,
    /// Ambient coordinates of the basis.
    pub basis: Vec<SparseVec>,
}

impl SubDgla {
    /// Spans the given vectors degree by degree; fails unless the span is
    /// closed under the differential.
    pub fn new(ambient: Arc<Dgla>, spanning: &BTreeMap<i32, Vec<SparseVec>>) -> Result<Self> {
        let field = ambient.field();
        let n = ambient.dim();
        let mut basis = Vec::new();
        let mut pivots = Vec::new();
        let mut dims = BTreeMap::new();
        let mut labels = Vec::new();
        for (&k, vecs) in spanning {
            if vecs.iter().any(|v| !ambient.space().is_homogeneous(v, k)) {
                return Err(Error::Invalid(format!("spanning vector not homogeneous of degree {k}")));
            }
            // rows of the reduced matrix form a basis with unit pivots
            let rr = SparseMatrix::from_rows(vecs.clone(), n, field)?.rref();
            let r = rr.pivots.len();
            dims.insert(k, r);
            for (row, &p) in rr.pivots.iter().enumerate() {
                basis.push(rr.reduced.row(row).clone());
                pivots.push(p);
                labels.push(format!("s{}", basis.len() - 1));
            }
        }
        let space = GradedSpace::with_labels(field, &dims, labels);
        let rule = SubRule { ambient: ambient.clone(), basis: basis.clone(), pivots };
        let m = basis.len();
        let mut diff = SparseMatrix::zeros(m, m, field);
        for (i, b) in basis.iter().enumerate() {
            let db = ambient.d(b);
            let c = rule.coords(&db);
            if rebuild(&basis, &c) != db {
                return Err(Error::Invalid(format!("span is not closed under d (basis {i})")));
            }
            for (r, x) in c.iter() {
                diff.set(r, i, x.clone());
            }
        }
        let complex = CochainComplex::new(space.clone(), diff)?;
        let mut incl = SparseMatrix::zeros(n, m, field);
        for (j, b) in basis.iter().enumerate() {
            for (i, x) in b.iter() {
                incl.set(i, j, x.clone());
            }
        }
        let map = GradedMap::new(space, ambient.space().clone(), 0, incl)?;
        let mut dgla = Dgla::from_rule(complex, Arc::new(rule));
        if ambient.is_table() && m <= 400 {
            dgla = dgla.materialized();
        }
        let dgla = Arc::new(dgla);
        let inclusion = DglaMorphism::new(dgla.clone(), ambient, map);
        Ok(SubDgla { dgla, inclusion, basis })
    }

    /// Checks `[S, S] ⊆ S` on all basis pairs.
    pub fn verify_bracket_closure(&self) -> Result<()> {
        let ambient = &self.inclusion.target;
        let rule = SubRule {
            ambient: ambient.clone(),
            basis: self.basis.clone(),
            pivots: self.basis.iter().map(|b| b.indices().next().unwrap()).collect(),
        };
        let m = self.basis.len();
        let bad = (0..m).into_par_iter().find_map_first(|i| {
            (0..m).find_map(|j| {
                let br = ambient.bracket(&self.basis[i], &self.basis[j]);
                (rebuild(&self.basis, &rule.coords(&br)) != br).then_some((i, j))
            })
        });
        match bad {
            Some((i, j)) => Err(Error::Invalid(format!("bracket of basis {i} and {j} leaves the subalgebra"))),
            None => Ok(()),
        }
    }
}

fn rebuild(basis: &[SparseVec], coords: &SparseVec) -> SparseVec {
    let mut out = SparseVec::new();
    for (r, c) in coords.iter() {
        out.add_scaled(&basis[r], c);
    }
    out
}

/// `Ann(v) = {E ∈ End(C) : E(v) = 0}` for closed, possibly non-homogeneous
/// vectors `v` (all of them are annihilated), with its inclusion into `End(C)`.
pub fn ann_subalgebra(c: &CochainComplex, vectors: &[SparseVec]) -> Result<(SubDgla, EndAlgebra)> {
    for v in vectors {
        let dv = c.d(v);
        if !dv.is_zero() {
            return Err(Error::NotClosed(format!("dv = {dv}")));
        }
    }
    let end = end_algebra(c);
    let sub = annihilator_in(&end, vectors)?;
    Ok((sub, end))
}

/// Annihilator of `vectors` inside an already built endomorphism algebra.
pub fn annihilator_in(end: &EndAlgebra, vectors: &[SparseVec]) -> Result<SubDgla> {
    let space = end.dgla.space().clone();
    let field = space.field();
    let n = end.complex.space.total_dim();
    let mut spanning = BTreeMap::new();
    for k in space.degrees() {
        let range = space.range(k);
        // evaluation End^k -> C^{⊕ vectors}
        let mut ev = SparseMatrix::zeros(n * vectors.len().max(1), range.len(), field);
        for (col, i) in range.clone().enumerate() {
            let (a, b) = end.basis.pairs[i];
            for (t, v) in vectors.iter().enumerate() {
                let x = v.get(b);
                if !x.is_zero() {
                    ev.add_at(t * n + a, col, &x);
                }
            }
        }
        let ker: Vec<SparseVec> = ev.kernel_basis().into_iter().map(|v| space.embed_local(&v, k)).collect();
        if !ker.is_empty() {
            spanning.insert(k, ker);
        }
    }
    SubDgla::new(end.dgla.clone(), &spanning)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn abelian_and_sl2_pass() {
        let c = samples::random_complex(1, 0..=2, 2, q());
        assert!(check_dgla(&Dgla::abelian(c)).is_ok());
        assert!(check_dgla(&samples::sl2(q())).is_ok());
    }

    #[test]
    fn corrupted_sl2_fails_with_witness() {
        let l = samples::sl2(q());
        let mut t = l.table();
        // [h, e] = 2e becomes 3e (and antisymmetric partner)
        t.insert((0, 1), SparseVec::from_pairs([(1, Scalar::from_int(3))]));
        t.insert((1, 0), SparseVec::from_pairs([(1, Scalar::from_int(-3))]));
        let bad = Dgla::from_table(l.complex.clone(), t);
        let w = check_dgla(&bad).unwrap_err();
        assert_eq!(w.axiom, DglaAxiom::Jacobi);
        assert_eq!(w.indices.len(), 3);
    }

    #[test]
    fn delta_extension_relations() {
        for seed in [9, 10, 11] {
            let l = Arc::new(samples::random_dgla(seed, q()));
            let ext = adjoin_delta(l.clone()).unwrap();
            assert!(check_dgla(&ext.extended).is_ok(), "seed {seed}");
            let delta = ext.delta_vec();
            assert!(ext.extended.d(&delta).is_zero());
            assert!(ext.extended.bracket(&delta, &delta).is_zero());
            for i in 0..l.dim() {
                let e = SparseVec::unit(i);
                let lhs = ext.restrict(&ext.extended.bracket(&delta, &ext.lift(&e)));
                assert_eq!(lhs, l.d(&e));
                for j in 0..l.dim() {
                    let b = ext.extended.bracket(&ext.lift(&e), &ext.lift(&SparseVec::unit(j)));
                    assert_eq!(ext.restrict(&b), l.bracket_basis(i, j));
                }
            }
        }
    }

    #[test]
    fn delta_central_for_abelian_zero_differential() {
        let c = crate::graded::CochainComplex::zero(GradedSpace::from_dims(q(), &[(0, 1), (1, 2)]));
        let ext = adjoin_delta(Arc::new(Dgla::abelian(c))).unwrap();
        assert!(ext.extended.table().is_empty());
    }

    #[test]
    fn end_of_line_and_of_acyclic_pair() {
        let c = CochainComplex::zero(GradedSpace::from_dims(q(), &[(0, 1)]));
        let e = end_dgla(&c);
        assert_eq!(e.space().dims(), BTreeMap::from([(0, 1)]));
        assert!(e.table().is_empty());

        let space = GradedSpace::from_dims(q(), &[(0, 1), (1, 1)]);
        let c = CochainComplex::from_blocks(space, &BTreeMap::from([(0, SparseMatrix::identity(1, q()))])).unwrap();
        let e = end_dgla(&c);
        assert_eq!(e.space().dims(), BTreeMap::from([(-1, 1), (0, 2), (1, 1)]));
        assert!(check_dgla(&e).is_ok());
    }

    #[test]
    fn end_bracket_is_graded_commutator() {
        let c = samples::random_complex(4, 0..=2, 2, q());
        let end = end_algebra(&c);
        assert!(check_dgla(&end.dgla).is_ok());
        let d = &c.differential.matrix;
        for k1 in end.dgla.space().degrees() {
            for k2 in end.dgla.space().degrees() {
                let x = samples::random_homogeneous(&end.dgla, k1, (k1 + 37) as u64);
                let y = samples::random_homogeneous(&end.dgla, k2, (k2 + 59) as u64);
                let (mx, my) = (end.to_matrix(&x), end.to_matrix(&y));
                let comm = mx.mul(&my).unwrap().sub(&my.mul(&mx).unwrap().scaled(&sign(k1 * k2))).unwrap();
                assert_eq!(end.to_matrix(&end.dgla.bracket(&x, &y)), comm);
                let dx = d.mul(&mx).unwrap().sub(&mx.mul(d).unwrap().scaled(&sign(k1))).unwrap();
                assert_eq!(end.to_matrix(&end.dgla.d(&x)), dx);
            }
        }
    }

    #[test]
    fn ann_examples() {
        let c = CochainComplex::zero(GradedSpace::from_dims(q(), &[(0, 2)]));
        let (ann, end) = ann_subalgebra(&c, &[SparseVec::unit(0)]).unwrap();
        assert_eq!(ann.dgla.space().dims(), BTreeMap::from([(0, 2)]));
        assert!(check_morphism(&ann.inclusion).is_ok());
        let (all, _) = ann_subalgebra(&c, &[SparseVec::new()]).unwrap();
        assert_eq!(all.dgla.dim(), end.dgla.dim());

        let space = GradedSpace::from_dims(q(), &[(0, 1), (1, 1)]);
        let c = CochainComplex::from_blocks(space, &BTreeMap::from([(0, SparseMatrix::identity(1, q()))])).unwrap();
        assert!(matches!(ann_subalgebra(&c, &[SparseVec::unit(0)]), Err(Error::NotClosed(_))));
    }

    #[test]
    fn ann_closure_on_random_instances() {
        for seed in 13..18 {
            let (c, v) = samples::random_complex_with_cocycle(seed, q());
            let (ann, _) = ann_subalgebra(&c, &[v]).unwrap();
            ann.verify_bracket_closure().unwrap();
            assert!(check_morphism(&ann.inclusion).is_ok());
            assert!(check_dgla(&ann.dgla).is_ok());
        }
    }

    #[test]
    fn morphism_examples() {
        let l = Arc::new(samples::sl2(q()));
        assert!(check_morphism(&DglaMorphism::identity(l.clone())).is_ok());
        let a = Arc::new(Dgla::abelian(CochainComplex::zero(GradedSpace::from_dims(q(), &[(0, 2)]))));
        let b = Arc::new(Dgla::abelian(CochainComplex::zero(GradedSpace::from_dims(q(), &[(0, 1), (1, 1)]))));
        let z = GradedMap::zero(a.space().clone(), b.space().clone(), 0);
        assert!(check_morphism(&DglaMorphism::new(a, b, z)).is_ok());
        // scaling by 2 is not a Lie morphism of sl2
        let two = GradedMap::identity(l.space()).scaled(&Scalar::from_int(2));
        let w = check_morphism(&DglaMorphism::new(l.clone(), l, two)).unwrap_err();
        assert!(matches!(w, MorphismWitness::Bracket { .. }));
    }

    #[test]
    fn delta_residual_expansion() {
        // [Δ + x, Δ + x] = 2 (dx + ½[x, x])
        for seed in 0..5 {
            let l = Arc::new(samples::random_dgla(seed, q()));
            let ext = adjoin_delta(l.clone()).unwrap();
            let x = samples::random_homogeneous(&l, 1, seed);
            let dx = ext.delta_vec().add(&ext.lift(&x));
            let lhs = ext.restrict(&ext.extended.bracket(&dx, &dx));
            let rhs = l.d(&x).scaled(&Scalar::from_int(2)).add(&l.bracket(&x, &x));
            assert_eq!(lhs, rhs);
        }
    }
}
