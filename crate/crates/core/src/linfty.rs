//! L∞-algebras given by structure constants up to an arity cap, the
//! mapping-cone L∞ structure of a DGLA morphism, homotopy transfer and
//! L∞ Maurer–Cartan residuals.
//!
//! Brackets `⟨x_1, …, x_n⟩_n` have degree `2 - n` and are graded symmetric
//! for the Koszul rule in which a basis vector of degree `k` has parity
//! `k - 1`. The generalized Jacobi identity then reads
//! `Σ ε(S, T) ⟨⟨x_S⟩, x_T⟩ = 0`, summed over nonempty `S` with the inner
//! output placed first.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;

use crate::artin::{ArtinAlgebra, LTensor};
use crate::dgla::{check_morphism, Dgla, DglaMorphism};
use crate::error::{Error, Result};
use crate::graded::{
    check_complex, cone_complex, contraction, ChainMap, CochainComplex, ConeLayout, ContractionData, GradedMap,
    GradedSpace,
};
use crate::linalg::{SparseMatrix, SparseVec};
use crate::scalar::{inv_factorial, Field, Rat, Scalar};

/// Bernoulli number `B_n` with `B_1 = -1/2`, memoized.
pub fn bernoulli(n: usize) -> Rat {
    static CACHE: OnceLock<Mutex<Vec<Rat>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![Rat::one()]));
    let mut values = cache.lock().expect("bernoulli cache");
    while values.len() <= n {
        // Σ_{k=0}^{m} C(m+1, k) B_k = 0
        let m = values.len();
        let mut sum = Rat::zero();
        let mut binom = Rat::one();
        for (k, b) in values.iter().enumerate() {
            sum = sum.add_ref(&binom.mul_ref(b));
            binom = binom.mul_ref(&Rat::new((m + 1 - k) as i64, (k + 1) as i64));
        }
        // binom is now C(m+1, m) = m + 1
        let next = sum.mul_ref(&binom.recip()).mul_ref(&Rat::from_int(-1));
        values.push(next);
    }
    values[n].clone()
}

/// Sorts basis indices, returning the Koszul sign of the permutation for the
/// given parities.
fn koszul_sort(indices: &[usize], odd: &[bool]) -> (Vec<usize>, bool) {
    let mut v = indices.to_vec();
    let mut negative = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            if odd[v[j - 1]] && odd[v[j]] {
                negative = !negative;
            }
            v.swap(j - 1, j);
            j -= 1;
        }
    }
    (v, negative)
}

#[derive(Clone, Debug)]
pub struct LInfinityAlgebra {
    pub space: GradedSpace,
    cap: usize,
    /// `brackets[n]` maps sorted index tuples to `⟨e_{i_1}, …, e_{i_n}⟩`.
    brackets: Vec<BTreeMap<Vec<usize>, SparseVec>>,
    odd: Vec<bool>,
    active: Vec<HashSet<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinftyWitness {
    pub arity: usize,
    pub indices: Vec<usize>,
    pub defect: SparseVec,
}

impl fmt::Display for LinftyWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jacobi identity of arity {} fails on basis {:?} (defect {})", self.arity, self.indices, self.defect)
    }
}

impl LInfinityAlgebra {
    pub fn new(space: GradedSpace, cap: usize) -> Result<Self> {
        if cap < 1 {
            return Err(Error::Invalid("arity cap must be at least 1".into()));
        }
        let odd = (0..space.total_dim()).map(|i| (space.degree_of(i) - 1).rem_euclid(2) == 1).collect();
        Ok(LInfinityAlgebra {
            space,
            cap,
            brackets: vec![BTreeMap::new(); cap + 1],
            odd,
            active: vec![HashSet::new(); cap + 1],
        })
    }

    /// Abelian L∞ structure with `⟨-⟩_1 = d`.
    pub fn abelian(c: &CochainComplex, cap: usize) -> Result<Self> {
        let mut l = Self::new(c.space.clone(), cap)?;
        l.set_differential(&c.differential.matrix)?;
        Ok(l)
    }

    /// A DGLA as an L∞-algebra: `⟨x⟩_1 = dx`, `⟨x, y⟩_2 = -(-1)^{|x|}[x, y]`.
    ///
    /// With this sign its Maurer–Cartan residual is `dx + ½[x, x]`.
    pub fn from_dgla(l: &Dgla, cap: usize) -> Result<Self> {
        let mut out = Self::abelian(&l.complex, cap.max(2))?;
        out.cap = cap;
        let n = l.dim();
        for i in 0..n {
            for j in i..n {
                let br = l.bracket_basis(i, j);
                if !br.is_zero() {
                    let s = Scalar::sign(l.degree_of(i) as i64 + 1);
                    out.set_bracket(&[i, j], br.scaled(&s))?;
                }
            }
        }
        out.brackets.truncate(cap + 1);
        out.active.truncate(cap + 1);
        Ok(out)
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn field(&self) -> Field {
        self.space.field()
    }

    pub fn dim(&self) -> usize {
        self.space.total_dim()
    }

    pub fn degree_of(&self, i: usize) -> i32 {
        self.space.degree_of(i)
    }

    /// Parity of a basis vector in the Koszul rule of the brackets.
    pub fn is_odd(&self, i: usize) -> bool {
        self.odd[i]
    }

    fn set_differential(&mut self, d: &SparseMatrix) -> Result<()> {
        for (c, col) in d.columns().into_iter().enumerate() {
            if !col.is_zero() {
                self.set_bracket(&[c], col)?;
            }
        }
        Ok(())
    }

    /// Sets `⟨e_{i_1}, …, e_{i_n}⟩` for indices in any order.
    pub fn set_bracket(&mut self, indices: &[usize], value: SparseVec) -> Result<()> {
        let n = indices.len();
        if n == 0 || n > self.cap {
            return Err(Error::Invalid(format!("bracket arity {n} outside 1..={}", self.cap)));
        }
        let deg: i32 = indices.iter().map(|&i| self.degree_of(i)).sum::<i32>() + 2 - n as i32;
        if !self.space.is_homogeneous(&value, deg) {
            return Err(Error::Invalid(format!("bracket on {indices:?} must have degree {deg}")));
        }
        let (key, negative) = koszul_sort(indices, &self.odd);
        let value = if negative { value.neg() } else { value };
        if value.is_zero() {
            self.brackets[n].remove(&key);
        } else {
            self.active[n].extend(key.iter().copied());
            self.brackets[n].insert(key, value);
        }
        Ok(())
    }

    /// `⟨e_{i_1}, …, e_{i_n}⟩` for indices in any order.
    pub fn bracket_basis(&self, indices: &[usize]) -> SparseVec {
        let n = indices.len();
        if n == 0 || n > self.cap {
            return SparseVec::new();
        }
        let (key, negative) = koszul_sort(indices, &self.odd);
        match self.brackets[n].get(&key) {
            Some(v) if negative => v.neg(),
            Some(v) => v.clone(),
            None => SparseVec::new(),
        }
    }

    /// Multilinear extension to arbitrary input vectors.
    pub fn bracket(&self, inputs: &[&SparseVec]) -> SparseVec {
        let n = inputs.len();
        let mut out = SparseVec::new();
        if n == 0 || n > self.cap || self.brackets[n].is_empty() {
            return out;
        }
        let active = &self.active[n];
        let filtered: Vec<Vec<(usize, &Scalar)>> =
            inputs.iter().map(|v| v.iter().filter(|(i, _)| active.contains(i)).collect()).collect();
        if filtered.iter().any(|f| f.is_empty()) {
            return out;
        }
        let mut idx = vec![0usize; n];
        let mut pos = vec![0usize; n];
        loop {
            let mut coeff = Scalar::one();
            for (k, &p) in pos.iter().enumerate() {
                let (i, c) = filtered[k][p];
                idx[k] = i;
                coeff = coeff.mul_ref(c);
            }
            let v = self.bracket_basis(&idx);
            if !v.is_zero() {
                out.add_scaled(&v, &coeff);
            }
            // odometer
            let mut k = n;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                pos[k] += 1;
                if pos[k] < filtered[k].len() {
                    break;
                }
                pos[k] = 0;
            }
        }
    }

    /// Stored brackets of arity `n` on sorted index tuples.
    pub fn entries(&self, n: usize) -> impl Iterator<Item = (&Vec<usize>, &SparseVec)> {
        self.brackets.get(n).into_iter().flat_map(|m| m.iter())
    }

    pub fn entry_count(&self, n: usize) -> usize {
        self.brackets.get(n).map_or(0, |m| m.len())
    }

    pub fn differential(&self) -> SparseMatrix {
        let n = self.dim();
        let mut d = SparseMatrix::zeros(n, n, self.field());
        for (k, v) in self.entries(1) {
            for (r, x) in v.iter() {
                d.set(r, k[0], x.clone());
            }
        }
        d
    }

    pub fn complex(&self) -> Result<CochainComplex> {
        CochainComplex::new(self.space.clone(), self.differential())
    }

    /// Same structure with `⟨…⟩_n` dropped above a new cap.
    pub fn truncated(&self, cap: usize) -> Self {
        let mut out = self.clone();
        out.cap = cap.min(self.cap);
        out.brackets.truncate(out.cap + 1);
        out.active.truncate(out.cap + 1);
        out
    }

    /// Left-hand side of the generalized Jacobi identity on a basis tuple.
    pub fn jacobi_defect(&self, indices: &[usize]) -> SparseVec {
        let n = indices.len();
        let mut out = SparseVec::new();
        for mask in 1u32..(1 << n) {
            let inner_n = mask.count_ones() as usize;
            let outer_n = n - inner_n + 1;
            if inner_n > self.cap || outer_n > self.cap {
                continue;
            }
            let mut s = Vec::with_capacity(inner_n);
            let mut t = Vec::with_capacity(n - inner_n);
            let mut negative = false;
            for (p, &i) in indices.iter().enumerate() {
                if mask & (1 << p) != 0 {
                    // moves left past every T element seen so far
                    if self.odd[i] && t.iter().filter(|&&j: &&usize| self.odd[j]).count() % 2 == 1 {
                        negative = !negative;
                    }
                    s.push(i);
                } else {
                    t.push(i);
                }
            }
            let inner = self.bracket_basis(&s);
            if inner.is_zero() {
                continue;
            }
            let mut term = SparseVec::new();
            let mut key = Vec::with_capacity(outer_n);
            for (k, c) in inner.iter() {
                key.clear();
                key.push(k);
                key.extend_from_slice(&t);
                let v = self.bracket_basis(&key);
                if !v.is_zero() {
                    term.add_scaled(&v, c);
                }
            }
            if negative {
                term = term.neg();
            }
            out = out.add(&term);
        }
        out
    }
}

/// All sorted index tuples of length `n` (with repetition) whose Jacobi
/// expression can be nonzero for degree reasons.
fn jacobi_tuples(l: &LInfinityAlgebra, n: usize) -> Vec<Vec<usize>> {
    let dim = l.dim();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(l: &LInfinityAlgebra, n: usize, dim: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            let deg: i32 = cur.iter().map(|&i| l.degree_of(i)).sum::<i32>() + 3 - n as i32;
            if l.space.dim(deg) > 0 {
                out.push(cur.clone());
            }
            return;
        }
        for i in start..dim {
            // odd elements cannot repeat without the tuple vanishing identically
            if cur.last() == Some(&i) && l.is_odd(i) {
                continue;
            }
            cur.push(i);
            rec(l, n, dim, i, cur, out);
            cur.pop();
        }
    }
    rec(l, n, dim, 0, &mut cur, &mut out);
    out
}

/// Verifies the generalized Jacobi identities for every total arity up to
/// `arity` on all basis tuples.
pub fn check_linfty(l: &LInfinityAlgebra, arity: usize) -> std::result::Result<(), LinftyWitness> {
    for n in 1..=arity {
        check_linfty_arity(l, n)?;
    }
    Ok(())
}

/// Jacobi identity of exactly one total arity.
pub fn check_linfty_arity(l: &LInfinityAlgebra, n: usize) -> std::result::Result<(), LinftyWitness> {
    let tuples = jacobi_tuples(l, n);
    let bad = tuples.par_iter().find_map_first(|t| {
        let defect = l.jacobi_defect(t);
        (!defect.is_zero()).then(|| LinftyWitness { arity: n, indices: t.clone(), defect })
    });
    bad.map_or(Ok(()), Err)
}

/// The mapping-cone L∞-algebra of a DGLA morphism with its index layout.
#[derive(Clone, Debug)]
pub struct FmCone {
    pub algebra: LInfinityAlgebra,
    pub layout: ConeLayout,
}

/// Construction options for [`fm_cone_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FmOptions {
    /// Uses `B_1 = +1/2` in the mixed binary bracket (negative control).
    pub flip_b1: bool,
    /// Skips re-validating the morphism.
    pub trusted: bool,
}

pub fn fm_cone(f: &DglaMorphism, cap: usize) -> Result<FmCone> {
    fm_cone_with(f, cap, FmOptions::default())
}

/// Builds `Cone(f)` with
/// `⟨(l, m)⟩_1 = (-dl, -f(l) + dm)`,
/// `⟨l_1, l_2⟩_2 = (-1)^{|l_1|}[l_1, l_2]`,
/// `⟨m, l⟩_2 = (-1)^{|m|} B_1 [m, f(l)]`,
/// `⟨m_1, …, m_n, l⟩_{n+1} = -(-1)^{Σ|m_i|} B_n/n! Σ_σ ε(σ) [m_σ(1), [… [m_σ(n), f(l)]]]`
/// and all other brackets zero (degrees `|m|` taken in `M`).
pub fn fm_cone_with(f: &DglaMorphism, cap: usize, opts: FmOptions) -> Result<FmCone> {
    if cap < 2 {
        return Err(Error::Invalid("cone arity cap must be at least 2".into()));
    }
    let field = f.source.field();
    field.require_factorials(cap)?;
    if !opts.trusted {
        if let Err(w) = check_morphism(f) {
            return Err(Error::Morphism(w.to_string()));
        }
    }
    let (l, m) = (&f.source, &f.target);
    let chain = ChainMap { source: l.complex.clone(), target: m.complex.clone(), map: f.map.clone() };
    let (complex, layout) = cone_complex(&chain)?;
    let mut alg = LInfinityAlgebra::new(complex.space.clone(), cap)?;
    alg.set_differential(&complex.differential.matrix)?;

    for a in 0..l.dim() {
        for b in a..l.dim() {
            let br = l.bracket_basis(a, b);
            if !br.is_zero() {
                let s = Scalar::sign(l.degree_of(a) as i64);
                alg.set_bracket(&[layout.from_v(a), layout.from_v(b)], layout.embed_v(&br).scaled(&s))?;
            }
        }
    }

    let images: Vec<SparseVec> = (0..l.dim()).map(|i| f.apply(&SparseVec::unit(i))).collect();
    let b1 = if opts.flip_b1 { Rat::new(1, 2) } else { bernoulli(1) };
    let b1 = field.embed(&b1);
    for (li, fl) in images.iter().enumerate() {
        if fl.is_zero() {
            continue;
        }
        for mi in 0..m.dim() {
            let br = m.bracket(&SparseVec::unit(mi), fl);
            if br.is_zero() {
                continue;
            }
            let s = Scalar::sign(m.degree_of(mi) as i64).mul_ref(&b1);
            alg.set_bracket(&[layout.from_w(mi), layout.from_v(li)], layout.embed_w(&br).scaled(&s))?;
        }
    }

    for n in 2..cap {
        let bn = bernoulli(n);
        if bn.is_zero() {
            continue;
        }
        let coeff = field.embed(&bn).mul_ref(&inv_factorial(n).coerce(field));
        let m_odd: Vec<bool> = (0..m.dim()).map(|i| m.degree_of(i).rem_euclid(2) == 1).collect();
        let tuples = multisets(m.dim(), n);
        let perms = permutations(n);
        let results: Vec<(Vec<usize>, usize, SparseVec)> = tuples
            .par_iter()
            .flat_map_iter(|ms| {
                let deg_m: i32 = ms.iter().map(|&i| m.degree_of(i)).sum();
                let mut local = Vec::new();
                for (li, fl) in images.iter().enumerate() {
                    if fl.is_zero() || m.space().dim(deg_m + l.degree_of(li)) == 0 {
                        continue;
                    }
                    let mut total = SparseVec::new();
                    for p in &perms {
                        let order: Vec<usize> = p.iter().map(|&k| ms[k]).collect();
                        let mut v = fl.clone();
                        for &mi in order.iter().rev() {
                            if v.is_zero() {
                                break;
                            }
                            v = m.bracket(&SparseVec::unit(mi), &v);
                        }
                        if v.is_zero() {
                            continue;
                        }
                        let negative = permutation_sign(p, |k| m_odd[ms[k]]);
                        total = if negative { total.sub(&v) } else { total.add(&v) };
                    }
                    if !total.is_zero() {
                        let s = Scalar::sign(deg_m as i64 + 1).mul_ref(&coeff);
                        local.push((ms.clone(), li, total.scaled(&s)));
                    }
                }
                local
            })
            .collect();
        for (ms, li, v) in results {
            let mut idx: Vec<usize> = ms.iter().map(|&i| layout.from_w(i)).collect();
            idx.push(layout.from_v(li));
            alg.set_bracket(&idx, layout.embed_w(&v))?;
        }
    }
    Ok(FmCone { algebra: alg, layout })
}

/// Koszul sign of the arrangement `(x_{p(0)}, x_{p(1)}, …)`; true when negative.
fn permutation_sign(p: &[usize], odd: impl Fn(usize) -> bool) -> bool {
    let mut negative = false;
    for a in 0..p.len() {
        for b in a + 1..p.len() {
            if p[a] > p[b] && odd(p[a]) && odd(p[b]) {
                negative = !negative;
            }
        }
    }
    negative
}

fn multisets(dim: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(dim: usize, n: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..dim {
            cur.push(i);
            rec(dim, n, i, cur, out);
            cur.pop();
        }
    }
    rec(dim, n, 0, &mut cur, &mut out);
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Set partitions of `0..n` into at least two blocks, blocks ordered by
/// their smallest element.
fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    fn rec(i: usize, n: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            if blocks.len() >= 2 {
                out.push(blocks.clone());
            }
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            rec(i + 1, n, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        rec(i + 1, n, blocks, out);
        blocks.pop();
    }
    rec(0, n, &mut blocks, &mut out);
    out
}

/// Transferred L∞ structure on the target of a contraction of `⟨-⟩_1`:
/// `λ_1 = ι`, `λ_n = -h Σ ε ⟨λ(x_{B_1}), …, λ(x_{B_k})⟩_k` over set partitions
/// into `k ≥ 2` blocks, and `⟨…⟩'_n = p Σ ε ⟨λ(x_{B_1}), …⟩_k`.
pub fn transfer(l: &LInfinityAlgebra, c: &ContractionData, cap: usize) -> Result<LInfinityAlgebra> {
    l.field().require_factorials(cap.min(l.cap()))?;
    let complex = l.complex()?;
    if check_complex(&complex).is_err() {
        return Err(Error::NotComplex("arity-one bracket does not square to zero".into()));
    }
    c.verify(&complex)?;
    let mut t = Transfer::new(l, c);
    let mut out = LInfinityAlgebra::new(c.target.clone(), cap)?;
    for n in 2..=cap {
        for tuple in multisets(c.target.total_dim(), n) {
            let v = t.transferred(&tuple);
            if !v.is_zero() {
                out.set_bracket(&tuple, v)?;
            }
        }
    }
    Ok(out)
}

struct Transfer<'a> {
    l: &'a LInfinityAlgebra,
    c: &'a ContractionData,
    odd: Vec<bool>,
    lambda: HashMap<Vec<usize>, SparseVec>,
}

impl<'a> Transfer<'a> {
    fn new(l: &'a LInfinityAlgebra, c: &'a ContractionData) -> Self {
        let h = &c.target;
        let odd = (0..h.total_dim()).map(|i| (h.degree_of(i) - 1).rem_euclid(2) == 1).collect();
        Transfer { l, c, odd, lambda: HashMap::new() }
    }

    /// `Σ ε ⟨λ(x_{B_1}), …, λ(x_{B_k})⟩_k` over partitions into ≥ 2 blocks.
    fn tree_sum(&mut self, tuple: &[usize]) -> SparseVec {
        let n = tuple.len();
        let deg: i32 = tuple.iter().map(|&i| self.c.target.degree_of(i)).sum::<i32>() + 2 - n as i32;
        let mut out = SparseVec::new();
        if self.l.space.dim(deg) == 0 {
            return out;
        }
        for blocks in set_partitions(n) {
            if blocks.len() > self.l.cap() {
                continue;
            }
            let order: Vec<usize> = blocks.iter().flatten().map(|&p| tuple[p]).collect();
            // sign of moving the inputs into block order
            let positions: Vec<usize> = blocks.iter().flatten().copied().collect();
            let mut negative = false;
            for a in 0..n {
                for b in a + 1..n {
                    if positions[a] > positions[b] && self.odd[order[a]] && self.odd[order[b]] {
                        negative = !negative;
                    }
                }
            }
            let mut inputs = Vec::with_capacity(blocks.len());
            let mut zero = false;
            for b in &blocks {
                let sub: Vec<usize> = b.iter().map(|&p| tuple[p]).collect();
                let v = self.lambda(&sub);
                if v.is_zero() {
                    zero = true;
                    break;
                }
                inputs.push(v);
            }
            if zero {
                continue;
            }
            let refs: Vec<&SparseVec> = inputs.iter().collect();
            let v = self.l.bracket(&refs);
            out = if negative { out.sub(&v) } else { out.add(&v) };
        }
        out
    }

    fn lambda(&mut self, tuple: &[usize]) -> SparseVec {
        if tuple.len() == 1 {
            return self.c.incl.apply(&SparseVec::unit(tuple[0]));
        }
        if let Some(v) = self.lambda.get(tuple) {
            return v.clone();
        }
        let s = self.tree_sum(tuple);
        let v = self.c.homotopy.apply(&s).neg();
        self.lambda.insert(tuple.to_vec(), v.clone());
        v
    }

    fn transferred(&mut self, tuple: &[usize]) -> SparseVec {
        let s = self.tree_sum(tuple);
        self.c.proj.apply(&s)
    }
}

/// Outcome of [`homotopy_abelian_report`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianReport {
    pub arity: usize,
    pub cohomology_dims: BTreeMap<i32, usize>,
    /// First nonvanishing transferred bracket, if any: `(arity, tuple)`.
    pub witness: Option<(usize, Vec<usize>)>,
}

impl AbelianReport {
    pub fn is_abelian(&self) -> bool {
        self.witness.is_none()
    }
}

/// Transfers to cohomology and looks for a nonzero bracket of arity `2..=arity`.
pub fn homotopy_abelian_report(l: &LInfinityAlgebra, arity: usize) -> Result<AbelianReport> {
    let complex = l.complex()?;
    let c = contraction(&complex)?;
    let mut t = Transfer::new(l, &c);
    let hdims = c.target.dims();
    for n in 2..=arity {
        for tuple in multisets(c.target.total_dim(), n) {
            if n > 1 && tuple.windows(2).any(|w| w[0] == w[1] && t.odd[w[0]]) {
                continue;
            }
            if !t.transferred(&tuple).is_zero() {
                return Ok(AbelianReport { arity, cohomology_dims: hdims, witness: Some((n, tuple)) });
            }
        }
    }
    Ok(AbelianReport { arity, cohomology_dims: hdims, witness: None })
}

/// True iff all transferred brackets of arity `2..=arity` vanish.
pub fn is_homotopy_abelian_up_to(l: &LInfinityAlgebra, arity: usize) -> Result<bool> {
    Ok(homotopy_abelian_report(l, arity)?.is_abelian())
}

/// Square `g ∘ i = j ∘ f` of DGLA morphisms `f: L → M`, `g: N → K`,
/// `i: L → N`, `j: M → K`.
#[derive(Clone, Copy, Debug)]
pub struct CommutingSquare<'a> {
    pub f: &'a DglaMorphism,
    pub g: &'a DglaMorphism,
    pub i: &'a DglaMorphism,
    pub j: &'a DglaMorphism,
}

/// Linear part of the induced cone morphism with cohomology data.
#[derive(Clone, Debug)]
pub struct InducedConeMap {
    pub map: ChainMap,
    pub source_layout: ConeLayout,
    pub target_layout: ConeLayout,
    pub source_cohomology: BTreeMap<i32, usize>,
    pub target_cohomology: BTreeMap<i32, usize>,
    /// Rank of the induced map on cohomology per degree.
    pub ranks: BTreeMap<i32, usize>,
}

impl InducedConeMap {
    pub fn is_injective_on_cohomology(&self) -> bool {
        self.source_cohomology.iter().all(|(k, &d)| self.ranks.get(k).copied().unwrap_or(0) == d)
    }

    pub fn is_quasi_isomorphism(&self) -> bool {
        self.is_injective_on_cohomology()
            && self.target_cohomology.iter().all(|(k, &d)| self.ranks.get(k).copied().unwrap_or(0) == d)
    }
}

/// `(l, m) ↦ (i(l), j(m))` between `Cone(f)` and `Cone(g)`.
pub fn induced_cone_map(sq: CommutingSquare<'_>) -> Result<InducedConeMap> {
    let CommutingSquare { f, g, i, j } = sq;
    let gi = g.map.compose(&i.map)?;
    let jf = j.map.compose(&f.map)?;
    if gi.matrix != jf.matrix {
        let (r, c, _) = gi.matrix.sub(&jf.matrix)?.entries().next().map(|(r, c, x)| (r, c, x.clone())).unwrap();
        return Err(Error::NotCommuting(format!("g∘i and j∘f differ at entry ({r}, {c})")));
    }
    let chain = |h: &DglaMorphism| ChainMap { source: h.source.complex.clone(), target: h.target.complex.clone(), map: h.map.clone() };
    let (cf, lf) = cone_complex(&chain(f))?;
    let (cg, lg) = cone_complex(&chain(g))?;
    let mut m = SparseMatrix::zeros(cg.space.total_dim(), cf.space.total_dim(), cf.field());
    for (r, c, x) in i.map.matrix.entries() {
        m.set(lg.from_v(r), lf.from_v(c), x.clone());
    }
    for (r, c, x) in j.map.matrix.entries() {
        m.set(lg.from_w(r), lf.from_w(c), x.clone());
    }
    let map = GradedMap::new(cf.space.clone(), cg.space.clone(), 0, m)?;
    let map = ChainMap::new(cf, cg, map)?;
    let hs = contraction(&map.source)?;
    let ht = contraction(&map.target)?;
    let mut ranks = BTreeMap::new();
    for k in hs.target.degrees() {
        ranks.insert(k, map.cohomology_map(&hs, &ht, k).rank());
    }
    Ok(InducedConeMap {
        source_cohomology: hs.target.dims(),
        target_cohomology: ht.target.dims(),
        map,
        source_layout: lf,
        target_layout: lg,
        ranks,
    })
}

/// `Σ_{n ≥ 1} ⟨x, …, x⟩_n / n!` for `x` of degree 1 in `L ⊗ m`.
pub fn linfty_mc_residual(l: &LInfinityAlgebra, alg: &ArtinAlgebra, x: &LTensor) -> Result<LTensor> {
    let top = l.cap().min(alg.order().saturating_sub(1));
    l.field().require_factorials(top.max(1))?;
    for (_, v) in x.terms() {
        if !l.space.is_homogeneous(v, 1) {
            return Err(Error::Invalid("Maurer-Cartan input must have degree 1".into()));
        }
    }
    let coeffs = x.by_basis();
    let mut out = LTensor::new();
    for n in 1..=top {
        for (key, value) in l.entries(n) {
            if !key.iter().all(|i| coeffs.contains_key(i)) {
                continue;
            }
            // Π x_{k_j} / Π mult!; degree-1 inputs are even, so no signs
            let mut prod = coeffs[&key[0]].clone();
            for k in &key[1..] {
                prod = alg.mul_elems(&prod, &coeffs[k]);
                if prod.is_empty() {
                    break;
                }
            }
            if prod.is_empty() {
                continue;
            }
            let mut denom = Rat::one();
            let mut run = 1;
            for w in 1..=key.len() {
                if w < key.len() && key[w] == key[w - 1] {
                    run += 1;
                } else {
                    denom = denom.mul_ref(&crate::scalar::factorial(run));
                    run = 1;
                }
            }
            let scale = l.field().embed(&denom.recip());
            for (mono, c) in prod {
                out.add_scaled_term(mono, value, &c.mul_ref(&scale));
            }
        }
    }
    Ok(out)
}
