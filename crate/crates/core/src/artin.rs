//! Truncated polynomial algebras `F[t_1..t_k]/m^N` and elements of `L ⊗ m`:
//! Maurer–Cartan residuals, the gauge action and the BCH product.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::dgla::{adjoin_delta_unchecked, DeltaExtension, Dgla};
use crate::error::{Error, Result};
use crate::linalg::SparseVec;
use crate::scalar::{factorial, inv_factorial, Field, Rat, Scalar};

/// Exponent vector of a monomial in the Artin variables.
pub type Monomial = Vec<u8>;

pub fn monomial_degree(m: &[u8]) -> usize {
    m.iter().map(|&e| e as usize).sum()
}

pub fn monomial_label(m: &[u8]) -> String {
    if m.len() == 1 {
        return match m[0] {
            0 => "1".into(),
            1 => "t".into(),
            e => format!("t^{e}"),
        };
    }
    let parts: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { format!("t{}", i + 1) } else { format!("t{}^{e}", i + 1) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// `F[t_1..t_k] / m^N`: the maximal ideal is spanned by the monomials of
/// degree `1..N-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArtinAlgebra {
    field: Field,
    vars: usize,
    order: usize,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl ArtinAlgebra {
    /// `k ≥ 1` variables with `m^N = 0`. `N = 1` gives the field itself.
    pub fn truncated(k: usize, n: usize, field: Field) -> Result<Self> {
        if k == 0 || n == 0 {
            return Err(Error::Invalid(format!("truncated algebra needs k >= 1 and N >= 1, got k={k}, N={n}")));
        }
        if n > u8::MAX as usize {
            return Err(Error::Invalid(format!("truncation order {n} too large")));
        }
        let mut monomials = Vec::new();
        for deg in 1..n {
            let mut cur = vec![0u8; k];
            push_monomials(&mut monomials, &mut cur, 0, deg);
        }
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Ok(ArtinAlgebra { field, vars: k, order: n, monomials, index })
    }

    /// `F[t]/t^N`
    pub fn univariate(n: usize, field: Field) -> Result<Self> {
        Self::truncated(1, n, field)
    }

    pub fn dual_numbers(field: Field) -> Self {
        Self::truncated(1, 2, field).expect("valid")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    /// Nilpotency index `N` (`m^N = 0`).
    pub fn order(&self) -> usize {
        self.order
    }

    /// Basis of `m`, ordered by degree and then reverse-lexicographically.
    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn dim_m(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomial_index(&self, m: &[u8]) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn monomials_of_degree(&self, d: usize) -> impl Iterator<Item = &Monomial> + '_ {
        self.monomials.iter().filter(move |m| monomial_degree(m) == d)
    }

    /// `t_i` as a monomial.
    pub fn variable(&self, i: usize) -> Monomial {
        let mut m = vec![0; self.vars];
        m[i] = 1;
        m
    }

    /// Product of two monomials, or `None` when it lies in `m^N`.
    pub fn multiply(&self, a: &[u8], b: &[u8]) -> Option<Monomial> {
        if monomial_degree(a) + monomial_degree(b) >= self.order {
            return None;
        }
        Some(a.iter().zip(b).map(|(x, y)| x + y).collect())
    }

    /// Elements of `m` as coefficient maps.
    pub fn mul_elems(&self, a: &AElem, b: &AElem) -> AElem {
        let mut out = AElem::new();
        for (ma, x) in a {
            for (mb, y) in b {
                if let Some(m) = self.multiply(ma, mb) {
                    add_coeff(&mut out, m, &x.mul_ref(y));
                }
            }
        }
        out
    }
}

fn push_monomials(out: &mut Vec<Monomial>, cur: &mut Vec<u8>, var: usize, left: usize) {
    if var + 1 == cur.len() {
        cur[var] = left as u8;
        out.push(cur.clone());
        cur[var] = 0;
        return;
    }
    for e in (0..=left).rev() {
        cur[var] = e as u8;
        push_monomials(out, cur, var + 1, left - e);
    }
    cur[var] = 0;
}

/// An element of `m` as monomial coefficients.
pub type AElem = BTreeMap<Monomial, Scalar>;

fn add_coeff(e: &mut AElem, m: Monomial, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    match e.get_mut(&m) {
        Some(x) => {
            *x = x.add_ref(c);
            if x.is_zero() {
                e.remove(&m);
            }
        }
        None => {
            e.insert(m, c.clone());
        }
    }
}

/// Element of `V ⊗ m` for a graded space `V`, stored per monomial.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LTensor {
    terms: BTreeMap<Monomial, SparseVec>,
}

impl LTensor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, SparseVec)>>(terms: I) -> Self {
        let mut t = Self::new();
        for (m, v) in terms {
            t.add_term(m, &v);
        }
        t
    }

    /// `v ⊗ m`
    pub fn monomial(m: Monomial, v: SparseVec) -> Self {
        Self::from_terms([(m, v)])
    }

    pub fn add_term(&mut self, m: Monomial, v: &SparseVec) {
        if v.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_default();
        *entry = entry.add(v);
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add_scaled_term(&mut self, m: Monomial, v: &SparseVec, c: &Scalar) {
        if !c.is_zero() {
            self.add_term(m, &v.scaled(c));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &SparseVec)> {
        self.terms.iter()
    }

    pub fn term(&self, m: &[u8]) -> SparseVec {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &LTensor) -> LTensor {
        let mut out = self.clone();
        for (m, v) in &other.terms {
            out.add_term(m.clone(), v);
        }
        out
    }

    pub fn sub(&self, other: &LTensor) -> LTensor {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LTensor {
        self.scaled(&Scalar::from_int(-1))
    }

    pub fn scaled(&self, c: &Scalar) -> LTensor {
        if c.is_zero() {
            return LTensor::new();
        }
        LTensor { terms: self.terms.iter().map(|(m, v)| (m.clone(), v.scaled(c))).collect() }
    }

    /// Applies a linear map to every coefficient vector.
    pub fn map(&self, f: impl Fn(&SparseVec) -> SparseVec) -> LTensor {
        LTensor::from_terms(self.terms.iter().map(|(m, v)| (m.clone(), f(v))))
    }

    /// Part whose monomials have degree exactly `d`.
    pub fn homogeneous_part(&self, d: usize) -> LTensor {
        LTensor { terms: self.terms.iter().filter(|(m, _)| monomial_degree(m) == d).map(|(m, v)| (m.clone(), v.clone())).collect() }
    }

    /// Reduction modulo `m^{d+1}`.
    pub fn truncate(&self, d: usize) -> LTensor {
        LTensor { terms: self.terms.iter().filter(|(m, _)| monomial_degree(m) <= d).map(|(m, v)| (m.clone(), v.clone())).collect() }
    }

    /// Lowest monomial degree with a nonzero term.
    pub fn valuation(&self) -> Option<usize> {
        self.terms.keys().map(|m| monomial_degree(m)).min()
    }

    /// Coefficient form: basis index to element of `m`.
    pub fn by_basis(&self) -> BTreeMap<usize, AElem> {
        let mut out: BTreeMap<usize, AElem> = BTreeMap::new();
        for (m, v) in &self.terms {
            for (i, c) in v.iter() {
                out.entry(i).or_default().insert(m.clone(), c.clone());
            }
        }
        out
    }
}

impl fmt::Display for LTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, v)| format!("{}*({v})", monomial_label(m))).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `[x, y]` in `L ⊗ m` (coefficients in `m` commute and have degree 0).
pub fn tensor_bracket(l: &Dgla, a: &ArtinAlgebra, x: &LTensor, y: &LTensor) -> LTensor {
    let mut out = LTensor::new();
    for (mx, vx) in x.terms() {
        for (my, vy) in y.terms() {
            if let Some(m) = a.multiply(mx, my) {
                out.add_term(m, &l.bracket(vx, vy));
            }
        }
    }
    out
}

pub fn tensor_d(l: &Dgla, x: &LTensor) -> LTensor {
    x.map(|v| l.d(v))
}

fn require_char_not_two(field: Field) -> Result<()> {
    if field.characteristic() == 2 {
        return Err(Error::Characteristic { p: 2, needed: 2 });
    }
    Ok(())
}

/// `dx + ½[x, x]`
pub fn mc_residual(l: &Dgla, a: &ArtinAlgebra, x: &LTensor) -> Result<LTensor> {
    require_char_not_two(l.field())?;
    let half = Scalar::ratio(1, 2).coerce(l.field());
    Ok(tensor_d(l, x).add(&tensor_bracket(l, a, x, x).scaled(&half)))
}

/// `Σ_{n ≥ 0} ad_a^n(y) / n!`, finite because `a ∈ L ⊗ m`.
pub fn exp_ad(l: &Dgla, alg: &ArtinAlgebra, a: &LTensor, y: &LTensor) -> Result<LTensor> {
    alg.field().require_factorials(alg.order())?;
    let mut out = y.clone();
    let mut term = y.clone();
    for n in 1..alg.order() + 1 {
        term = tensor_bracket(l, alg, a, &term);
        if term.is_zero() {
            break;
        }
        out = out.add(&term.scaled(&inv_factorial(n).coerce(alg.field())));
    }
    Ok(out)
}

/// Gauge action `e^a * x = e^{ad a}(x + Δ) - Δ`, computed in the Δ-extension.
///
/// `ext` must be the Δ-extension of the algebra `a` and `x` live in.
pub fn gauge_act(ext: &DeltaExtension, alg: &ArtinAlgebra, a: &LTensor, x: &LTensor) -> Result<LTensor> {
    let field = alg.field();
    field.require_factorials(alg.order())?;
    let ea = a.map(|v| ext.lift(v));
    let mut out = x.map(|v| ext.lift(v));
    let mut term_x = out.clone();
    // ad_a(Δ), one term per monomial of a; Δ itself carries the unit
    let delta = ext.delta_vec();
    let mut term_d = LTensor::new();
    for (m, v) in ea.terms() {
        term_d.add_term(m.clone(), &ext.extended.bracket(v, &delta));
    }
    for n in 1..=alg.order() {
        if n > 1 {
            term_d = tensor_bracket(&ext.extended, alg, &ea, &term_d);
        }
        term_x = tensor_bracket(&ext.extended, alg, &ea, &term_x);
        if term_x.is_zero() && term_d.is_zero() {
            break;
        }
        let c = inv_factorial(n).coerce(field);
        out = out.add(&term_x.scaled(&c)).add(&term_d.scaled(&c));
    }
    Ok(out.map(|v| ext.restrict(v)))
}

/// Convenience wrapper building the Δ-extension on the fly.
pub fn gauge_act_in(l: &std::sync::Arc<Dgla>, alg: &ArtinAlgebra, a: &LTensor, x: &LTensor) -> Result<LTensor> {
    gauge_act(&adjoin_delta_unchecked(l.clone()), alg, a, x)
}

/// Closed form `e^{ad a} x - Σ_{n ≥ 1} ad_a^{n-1}(da) / n!` of the gauge action.
pub fn gauge_act_formula(l: &Dgla, alg: &ArtinAlgebra, a: &LTensor, x: &LTensor) -> Result<LTensor> {
    let mut out = exp_ad(l, alg, a, x)?;
    let mut term = tensor_d(l, a);
    let mut n = 1;
    while !term.is_zero() {
        out = out.sub(&term.scaled(&inv_factorial(n).coerce(alg.field())));
        term = tensor_bracket(l, alg, a, &term);
        n += 1;
    }
    Ok(out)
}

/// `log(e^a e^b)` by the Dynkin formula, exact modulo `m^N`.
pub fn bch(l: &Dgla, alg: &ArtinAlgebra, a: &LTensor, b: &LTensor) -> Result<LTensor> {
    let field = alg.field();
    let max_len = alg.order().saturating_sub(1);
    field.require_factorials(max_len.max(1))?;
    if a.is_zero() {
        return Ok(b.clone());
    }
    if b.is_zero() {
        return Ok(a.clone());
    }
    let mut out = LTensor::new();
    // words of exponents ((r_1, s_1), ..., (r_n, s_n)) with r_i + s_i > 0
    let mut stack: Vec<(usize, usize)> = Vec::new();
    dynkin_words(max_len, &mut stack, &mut |word| {
        let n = word.len();
        let len: usize = word.iter().map(|(r, s)| r + s).sum();
        let mut letters = Vec::with_capacity(len);
        let mut denom = Rat::from_int(len as i64);
        for &(r, s) in word {
            letters.extend(std::iter::repeat(a).take(r));
            letters.extend(std::iter::repeat(b).take(s));
            denom = denom.mul_ref(&factorial(r)).mul_ref(&factorial(s));
        }
        denom = denom.mul_ref(&Rat::from_int(n as i64));
        let sign = if n % 2 == 1 { 1 } else { -1 };
        let coeff = field.embed(&Rat::from_int(sign)).mul_ref(&field.embed(&denom.recip()));
        let mut val = letters[len - 1].clone();
        for x in letters[..len - 1].iter().rev() {
            if val.is_zero() {
                break;
            }
            val = tensor_bracket(l, alg, x, &val);
        }
        if !val.is_zero() {
            out = out.add(&val.scaled(&coeff));
        }
    });
    Ok(out)
}

fn dynkin_words(budget: usize, stack: &mut Vec<(usize, usize)>, f: &mut impl FnMut(&[(usize, usize)])) {
    for r in 0..=budget {
        for s in 0..=(budget - r) {
            if r + s == 0 {
                continue;
            }
            // words ending in [.., x, x] or [.., a^r] with r > 1 vanish
            stack.push((r, s));
            if valid_tail(stack) {
                f(stack);
            }
            dynkin_words(budget - r - s, stack, f);
            stack.pop();
        }
    }
}

fn valid_tail(word: &[(usize, usize)]) -> bool {
    let &(r, s) = word.last().unwrap();
    if s > 1 || (s == 0 && r > 1) {
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgla::adjoin_delta;
    use crate::linalg::SparseMatrix;
    use crate::samples::{self, LieAlgebra};
    use std::sync::Arc;

    fn q() -> Field {
        Field::Rationals
    }

    fn random_tensor(l: &Dgla, alg: &ArtinAlgebra, deg: i32, seed: u64) -> LTensor {
        let mut t = LTensor::new();
        for (i, m) in alg.monomials().iter().enumerate() {
            t.add_term(m.clone(), &samples::random_homogeneous(l, deg, seed * 101 + i as u64));
        }
        t
    }

    #[test]
    fn truncated_algebra_examples() {
        let a = ArtinAlgebra::truncated(1, 2, q()).unwrap();
        assert_eq!(a.monomials(), &[vec![1]]);
        assert_eq!(a.multiply(&[1], &[1]), None);
        let a = ArtinAlgebra::truncated(1, 4, q()).unwrap();
        assert_eq!(a.monomials(), &[vec![1], vec![2], vec![3]]);
        assert_eq!(a.multiply(&[1], &[2]), Some(vec![3]));
        assert_eq!(a.multiply(&[2], &[2]), None);
        let a = ArtinAlgebra::truncated(2, 3, q()).unwrap();
        assert_eq!(a.dim_m(), 5);
        assert_eq!(a.monomials(), &[vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
        let f = ArtinAlgebra::truncated(1, 1, q()).unwrap();
        assert_eq!(f.dim_m(), 0);
    }

    #[test]
    fn dim_m_is_binomial() {
        for k in 1..4 {
            for n in 1..6 {
                let a = ArtinAlgebra::truncated(k, n, q()).unwrap();
                let binom = (1..=k).fold(1usize, |acc, i| acc * (k + n - 1 - k + i) / i);
                assert_eq!(a.dim_m() + 1, binom, "k={k} N={n}");
            }
        }
    }

    #[test]
    fn residual_examples() {
        let alg = ArtinAlgebra::univariate(4, q()).unwrap();
        let l = samples::random_dgla(3, q());
        assert!(mc_residual(&l, &alg, &LTensor::new()).unwrap().is_zero());
        let ab = Dgla::abelian(l.complex.clone());
        let x = random_tensor(&ab, &alg, 1, 5);
        assert_eq!(mc_residual(&ab, &alg, &x).unwrap(), tensor_d(&ab, &x));
        let sl2 = samples::sl2(q());
        assert_eq!(sl2.space().dim(1), 0);
    }

    #[test]
    fn residual_matches_delta_extension() {
        for seed in 0..6 {
            let l = Arc::new(samples::random_dgla(seed, q()));
            let alg = ArtinAlgebra::univariate(3, q()).unwrap();
            let ext = adjoin_delta(l.clone()).unwrap();
            let x = random_tensor(&l, &alg, 1, seed);
            // [Δ + x, Δ + x] = 2 dx + [x, x]
            let ex = x.map(|v| ext.lift(v));
            let mut sq = tensor_bracket(&ext.extended, &alg, &ex, &ex);
            for (m, v) in ex.terms() {
                let cross = ext.extended.bracket(&ext.delta_vec(), v).add(&ext.extended.bracket(v, &ext.delta_vec()));
                sq.add_term(m.clone(), &cross);
            }
            let lhs = sq.map(|v| ext.restrict(v));
            let rhs = mc_residual(&l, &alg, &x).unwrap().scaled(&Scalar::from_int(2));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn gauge_identity_and_abelian() {
        let alg = ArtinAlgebra::univariate(4, q()).unwrap();
        let l = Arc::new(Dgla::abelian(samples::random_complex(8, -1..=2, 3, q())));
        let x = random_tensor(&l, &alg, 1, 2);
        assert_eq!(gauge_act_in(&l, &alg, &LTensor::new(), &x).unwrap(), x);
        let a = random_tensor(&l, &alg, 0, 3);
        let expect = x.sub(&tensor_d(&l, &a));
        assert_eq!(gauge_act_in(&l, &alg, &a, &x).unwrap(), expect);
    }

    #[test]
    fn gauge_matches_closed_formula() {
        for seed in 0..8 {
            let l = Arc::new(samples::random_dgla(seed, q()));
            let alg = ArtinAlgebra::truncated(2, 3, q()).unwrap();
            let a = random_tensor(&l, &alg, 0, seed + 40);
            let x = random_tensor(&l, &alg, 1, seed + 80);
            assert_eq!(gauge_act_in(&l, &alg, &a, &x).unwrap(), gauge_act_formula(&l, &alg, &a, &x).unwrap());
        }
    }

    #[test]
    fn bch_examples() {
        let q = q();
        let heis = Arc::new(LieAlgebra::heis3().to_dgla(q));
        let alg = ArtinAlgebra::univariate(3, q).unwrap();
        let a = LTensor::monomial(vec![1], SparseVec::unit(0));
        let b = LTensor::monomial(vec![1], SparseVec::unit(1));
        assert_eq!(bch(&heis, &alg, &a, &LTensor::new()).unwrap(), a);
        let expect = a.add(&b).add(&tensor_bracket(&heis, &alg, &a, &b).scaled(&Scalar::ratio(1, 2)));
        assert_eq!(bch(&heis, &alg, &a, &b).unwrap(), expect);
        let ab = Arc::new(LieAlgebra::abelian(2).to_dgla(q));
        assert_eq!(bch(&ab, &alg, &a, &b).unwrap(), a.add(&b));
    }

    /// `t`-adic matrices: coefficient list of `Σ t^k M_k`.
    fn mat_mul(a: &[SparseMatrix], b: &[SparseMatrix], n: usize) -> Vec<SparseMatrix> {
        let dim = a[0].rows();
        let mut out = vec![SparseMatrix::zeros(dim, dim, Field::Rationals); n];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                if i + j < n {
                    out[i + j] = out[i + j].add(&x.mul(y).unwrap()).unwrap();
                }
            }
        }
        out
    }

    fn mat_exp(a: &[SparseMatrix], n: usize) -> Vec<SparseMatrix> {
        let dim = a[0].rows();
        let mut out = vec![SparseMatrix::zeros(dim, dim, Field::Rationals); n];
        out[0] = SparseMatrix::identity(dim, Field::Rationals);
        let mut pow = out.clone();
        for k in 1..n {
            pow = mat_mul(&pow, a, n);
            for (o, p) in out.iter_mut().zip(&pow) {
                *o = o.add(&p.scaled(&inv_factorial(k))).unwrap();
            }
        }
        out
    }

    #[test]
    fn bch_agrees_with_matrix_exponentials() {
        // gl(V) in degree 0 via End of a complex concentrated in degree 0
        let n = 4;
        let q = q();
        let c = crate::graded::CochainComplex::zero(crate::graded::GradedSpace::from_dims(q, &[(0, 2)]));
        let end = crate::dgla::end_algebra(&c);
        let alg = ArtinAlgebra::univariate(n, q).unwrap();
        for seed in 0..5 {
            let a = random_tensor(&end.dgla, &alg, 0, seed);
            let b = random_tensor(&end.dgla, &alg, 0, seed + 9);
            let as_series = |x: &LTensor| {
                let mut s = vec![SparseMatrix::zeros(2, 2, q); n];
                for (m, v) in x.terms() {
                    s[m[0] as usize] = end.to_matrix(v);
                }
                s
            };
            let lhs = mat_exp(&as_series(&bch(&end.dgla, &alg, &a, &b).unwrap()), n);
            let rhs = mat_mul(&mat_exp(&as_series(&a), n), &mat_exp(&as_series(&b), n), n);
            assert_eq!(lhs, rhs, "seed {seed}");
        }
    }

    #[test]
    fn bch_associative_and_inverse() {
        for seed in 0..6 {
            let l = Arc::new(samples::random_dgla(seed, q()));
            let alg = ArtinAlgebra::univariate(4, q()).unwrap();
            let a = random_tensor(&l, &alg, 0, seed);
            let b = random_tensor(&l, &alg, 0, seed + 1);
            let c = random_tensor(&l, &alg, 0, seed + 2);
            let left = bch(&l, &alg, &bch(&l, &alg, &a, &b).unwrap(), &c).unwrap();
            let right = bch(&l, &alg, &a, &bch(&l, &alg, &b, &c).unwrap()).unwrap();
            assert_eq!(left, right);
            assert!(bch(&l, &alg, &a, &a.neg()).unwrap().is_zero());
        }
    }

    #[test]
    fn labels() {
        assert_eq!(monomial_label(&[3]), "t^3");
        assert_eq!(monomial_label(&[1, 2]), "t1*t2^2");
    }
}
