//! Order-by-order Maurer–Cartan lifting with obstruction classes, relative
//! Maurer–Cartan pairs for a morphism, and exhaustive enumeration of
//! deformation functors over finite fields.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rand::Rng;

use crate::artin::{bch, gauge_act, mc_residual, tensor_d, ArtinAlgebra, LTensor, Monomial};
use crate::dgla::{adjoin_delta_unchecked, check_morphism, DeltaExtension, Dgla, DglaMorphism};
use crate::error::{Error, Result};
use crate::graded::GradedSpace;
use crate::linalg::{cohomology_data, CohomologyData, SparseMatrix, SparseVec};
use crate::linfty::{linfty_mc_residual, LInfinityAlgebra};
use crate::samples;
use crate::scalar::Field;

/// A deformation problem linearized around zero: unknowns `C¹`, residuals in
/// `C²`, with `C⁰ → C¹ → C² → C³` a complex.
pub trait LiftProblem {
    fn field(&self) -> Field;
    /// Residual of a candidate given in local `C¹` coordinates.
    fn residual(&self, alg: &ArtinAlgebra, x: &LTensor) -> Result<LTensor>;
    /// `C¹ → C²`
    fn linear(&self) -> &SparseMatrix;
    /// `C² → C³`
    fn next(&self) -> &SparseMatrix;
    /// `C⁰ → C¹`
    fn previous(&self) -> &SparseMatrix;
}

fn block(space: &GradedSpace, d: &SparseMatrix, k: i32) -> SparseMatrix {
    let rows: Vec<usize> = space.range(k + 1).collect();
    let cols: Vec<usize> = space.range(k).collect();
    d.select(&rows, &cols)
}

/// Maurer–Cartan equation of a DGLA.
pub struct DglaProblem<'a> {
    pub dgla: &'a Dgla,
    maps: [SparseMatrix; 3],
}

impl<'a> DglaProblem<'a> {
    pub fn new(dgla: &'a Dgla) -> Self {
        let d = &dgla.complex.differential.matrix;
        let s = dgla.space();
        DglaProblem { dgla, maps: [block(s, d, 0), block(s, d, 1), block(s, d, 2)] }
    }
}

impl LiftProblem for DglaProblem<'_> {
    fn field(&self) -> Field {
        self.dgla.field()
    }
    fn residual(&self, alg: &ArtinAlgebra, x: &LTensor) -> Result<LTensor> {
        let s = self.dgla.space();
        let r = mc_residual(self.dgla, alg, &x.map(|v| s.embed_local(v, 1)))?;
        Ok(r.map(|v| s.local_part(v, 2)))
    }
    fn linear(&self) -> &SparseMatrix {
        &self.maps[1]
    }
    fn next(&self) -> &SparseMatrix {
        &self.maps[2]
    }
    fn previous(&self) -> &SparseMatrix {
        &self.maps[0]
    }
}

/// Maurer–Cartan equation of an L∞-algebra.
pub struct LinftyProblem<'a> {
    pub algebra: &'a LInfinityAlgebra,
    maps: [SparseMatrix; 3],
}

impl<'a> LinftyProblem<'a> {
    pub fn new(algebra: &'a LInfinityAlgebra) -> Self {
        let d = algebra.differential();
        let s = &algebra.space;
        LinftyProblem { algebra, maps: [block(s, &d, 0), block(s, &d, 1), block(s, &d, 2)] }
    }
}

impl LiftProblem for LinftyProblem<'_> {
    fn field(&self) -> Field {
        self.algebra.field()
    }
    fn residual(&self, alg: &ArtinAlgebra, x: &LTensor) -> Result<LTensor> {
        let s = &self.algebra.space;
        let r = linfty_mc_residual(self.algebra, alg, &x.map(|v| s.embed_local(v, 1)))?;
        Ok(r.map(|v| s.local_part(v, 2)))
    }
    fn linear(&self) -> &SparseMatrix {
        &self.maps[1]
    }
    fn next(&self) -> &SparseMatrix {
        &self.maps[2]
    }
    fn previous(&self) -> &SparseMatrix {
        &self.maps[0]
    }
}

/// Obstruction to lifting from order `order - 1` to `order`, per monomial
/// of degree `order`, in the coordinates of the cohomology representatives
/// chosen by [`cohomology_data`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionClass {
    pub order: usize,
    pub h_dim: usize,
    pub components: BTreeMap<Monomial, SparseVec>,
}

impl ObstructionClass {
    pub fn is_zero(&self) -> bool {
        self.components.values().all(|v| v.is_zero())
    }
}

#[derive(Clone, Debug)]
pub enum LiftOutcome {
    Lifted(LTensor),
    Obstructed(ObstructionClass),
}

/// Order-by-order solver for a [`LiftProblem`].
pub struct Lifter<'a, P: LiftProblem> {
    pub problem: &'a P,
    pub alg: &'a ArtinAlgebra,
    h2: CohomologyData,
    cocycles: Vec<SparseVec>,
    tangent: CohomologyData,
}

impl<'a, P: LiftProblem> Lifter<'a, P> {
    pub fn new(problem: &'a P, alg: &'a ArtinAlgebra) -> Result<Self> {
        let h2 = cohomology_data(problem.linear(), problem.next())?;
        let tangent = cohomology_data(problem.previous(), problem.linear())?;
        let cocycles = problem.linear().kernel_basis();
        Ok(Lifter { problem, alg, h2, cocycles, tangent })
    }

    /// `dim H²`
    pub fn obstruction_space_dim(&self) -> usize {
        self.h2.h_dim
    }

    /// Cocycles in `C²` (local coordinates) representing the basis of `H²`
    /// in which obstruction classes are expressed.
    pub fn obstruction_basis(&self) -> &[SparseVec] {
        &self.h2.reps
    }

    /// `dim H¹`
    pub fn tangent_dim(&self) -> usize {
        self.tangent.h_dim
    }

    /// Obstruction of a candidate that solves the equation modulo `m^order`.
    pub fn obstruction(&self, x: &LTensor, order: usize) -> Result<ObstructionClass> {
        let r = self.problem.residual(self.alg, x)?;
        if !r.truncate(order - 1).is_zero() {
            return Err(Error::NotMaurerCartan { order: order - 1 });
        }
        let top = r.homogeneous_part(order);
        let mut components = BTreeMap::new();
        for m in self.alg.monomials_of_degree(order) {
            let v = top.term(m);
            if !self.problem.next().apply(&v).is_zero() {
                return Err(Error::Invalid(format!("residual at order {order} is not a cocycle")));
            }
            components.insert(m.clone(), self.h2.proj.apply(&v));
        }
        Ok(ObstructionClass { order, h_dim: self.h2.h_dim, components })
    }

    /// Lifts a solution modulo `m^order` to one modulo `m^{order+1}`.
    pub fn step(&self, x: &LTensor, order: usize) -> Result<LiftOutcome> {
        let class = self.obstruction(x, order)?;
        if !class.is_zero() {
            return Ok(LiftOutcome::Obstructed(class));
        }
        let top = self.problem.residual(self.alg, x)?.homogeneous_part(order);
        let mut out = x.clone();
        for m in self.alg.monomials_of_degree(order) {
            let r = top.term(m);
            if r.is_zero() {
                continue;
            }
            let y = self
                .problem
                .linear()
                .solve(&r.neg())?
                .ok_or_else(|| Error::Invalid("zero obstruction class but no solution".into()))?;
            out.add_term(m.clone(), &y);
        }
        Ok(LiftOutcome::Lifted(out))
    }

    /// Random element of `ker(C¹ → C²) ⊗ (monomials of degree order)`.
    pub fn random_cocycle(&self, rng: &mut impl Rng, order: usize) -> LTensor {
        let field = self.problem.field();
        let mut out = LTensor::new();
        for m in self.alg.monomials_of_degree(order) {
            let mut v = SparseVec::new();
            for z in &self.cocycles {
                v.add_scaled(z, &samples::small_scalar(rng, field));
            }
            out.add_term(m.clone(), &v);
        }
        out
    }

    /// Starts from `first` (a first-order solution) and lifts through every
    /// order of the algebra. With `rng`, a random cocycle is added at each
    /// order so that arbitrary choices of lift are exercised.
    pub fn lift_all(&self, first: &LTensor, mut rng: Option<&mut dyn rand::RngCore>) -> Result<LiftReport> {
        let mut x = first.truncate(1);
        let mut orders = Vec::new();
        for order in 2..self.alg.order() {
            match self.step(&x, order)? {
                LiftOutcome::Lifted(next) => {
                    x = next;
                    if let Some(r) = rng.as_deref_mut() {
                        let mut r = RngAdapter(r);
                        x = x.add(&self.random_cocycle(&mut r, order));
                    }
                    orders.push(self.obstruction_zero(order));
                }
                LiftOutcome::Obstructed(class) => {
                    orders.push(class);
                    return Ok(LiftReport { solution: x, orders, complete: false });
                }
            }
        }
        Ok(LiftReport { solution: x, orders, complete: true })
    }

    fn obstruction_zero(&self, order: usize) -> ObstructionClass {
        let components = self.alg.monomials_of_degree(order).map(|m| (m.clone(), SparseVec::new())).collect();
        ObstructionClass { order, h_dim: self.h2.h_dim, components }
    }
}

struct RngAdapter<'a>(&'a mut dyn rand::RngCore);

impl rand::RngCore for RngAdapter<'_> {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.0.fill_bytes(dest)
    }
    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand::Error> {
        self.0.try_fill_bytes(dest)
    }
}

/// Result of lifting through all orders of an Artin algebra.
#[derive(Clone, Debug)]
pub struct LiftReport {
    pub solution: LTensor,
    /// Obstruction classes for orders `2, 3, …` (order 1 is free).
    pub orders: Vec<ObstructionClass>,
    pub complete: bool,
}

impl LiftReport {
    pub fn unobstructed(&self) -> bool {
        self.complete && self.orders.iter().all(|o| o.is_zero())
    }
}

/// Lifts a DGLA Maurer–Cartan element modulo `m^{order}` one step, in global
/// coordinates of `l`.
pub fn mc_lift_step(l: &Dgla, alg: &ArtinAlgebra, x: &LTensor, order: usize) -> Result<LiftOutcome> {
    let p = DglaProblem::new(l);
    let lifter = Lifter::new(&p, alg)?;
    let s = l.space();
    let local = x.map(|v| s.local_part(v, 1));
    if local.map(|v| s.embed_local(v, 1)) != *x {
        return Err(Error::Invalid("Maurer-Cartan candidate must have degree 1".into()));
    }
    Ok(match lifter.step(&local, order)? {
        LiftOutcome::Lifted(y) => LiftOutcome::Lifted(y.map(|v| s.embed_local(v, 1))),
        o => o,
    })
}

/// A DGLA morphism with the Δ-extensions needed for gauge actions on both sides.
pub struct RelativeContext {
    pub f: DglaMorphism,
    pub source_ext: DeltaExtension,
    pub target_ext: DeltaExtension,
}

impl RelativeContext {
    pub fn new(f: DglaMorphism) -> Result<Self> {
        if let Err(w) = check_morphism(&f) {
            return Err(Error::Morphism(w.to_string()));
        }
        let source_ext = adjoin_delta_unchecked(f.source.clone());
        let target_ext = adjoin_delta_unchecked(f.target.clone());
        Ok(RelativeContext { f, source_ext, target_ext })
    }

    /// Skips the morphism check, for inclusions that hold by construction.
    pub fn new_unchecked(f: DglaMorphism) -> Self {
        let source_ext = adjoin_delta_unchecked(f.source.clone());
        let target_ext = adjoin_delta_unchecked(f.target.clone());
        RelativeContext { f, source_ext, target_ext }
    }

    pub fn source(&self) -> &Arc<Dgla> {
        &self.f.source
    }

    pub fn target(&self) -> &Arc<Dgla> {
        &self.f.target
    }

    pub fn push(&self, x: &LTensor) -> LTensor {
        x.map(|v| self.f.apply(v))
    }

    /// `(dx + ½[x, x], e^g * f(x))`; both vanish iff `(x, e^g)` is a relative
    /// Maurer–Cartan pair.
    pub fn residual(&self, alg: &ArtinAlgebra, x: &LTensor, g: &LTensor) -> Result<(LTensor, LTensor)> {
        let first = mc_residual(self.source(), alg, x)?;
        let second = gauge_act(&self.target_ext, alg, g, &self.push(x))?;
        Ok((first, second))
    }

    /// `(x, g) ↦ (e^a * x, log(e^{db} e^g e^{-f(a)}))`.
    pub fn gauge(&self, alg: &ArtinAlgebra, a: &LTensor, b: &LTensor, x: &LTensor, g: &LTensor) -> Result<(LTensor, LTensor)> {
        let x2 = gauge_act(&self.source_ext, alg, a, x)?;
        let db = tensor_d(self.target(), b);
        let g2 = bch(self.target(), alg, &db, &bch(self.target(), alg, g, &self.push(a).neg())?)?;
        Ok((x2, g2))
    }
}

/// `(mc_residual(x), e^g * f(x))` for a morphism `f`.
pub fn relative_mc_residual(f: &DglaMorphism, alg: &ArtinAlgebra, x: &LTensor, g: &LTensor) -> Result<(LTensor, LTensor)> {
    RelativeContext::new(f.clone())?.residual(alg, x, g)
}

/// Relative gauge action `(e^a * x, log(e^{db} e^g e^{-f(a)}))`.
pub fn relative_gauge_act(
    f: &DglaMorphism,
    alg: &ArtinAlgebra,
    a: &LTensor,
    b: &LTensor,
    x: &LTensor,
    g: &LTensor,
) -> Result<(LTensor, LTensor)> {
    RelativeContext::new(f.clone())?.gauge(alg, a, b, x, g)
}

/// Default guard on the number of enumerated candidates.
pub const ENUMERATION_GUARD: u64 = 10_000_000;

/// Exhaustive description of `Def_L(A)` over a finite field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefEnumeration {
    pub candidates: u64,
    pub mc_count: usize,
    pub orbit_count: usize,
    /// One representative per orbit (the first in enumeration order) with its orbit size.
    pub orbits: Vec<(LTensor, usize)>,
}

/// Enumerates all degree-1 elements of `L ⊗ m`, keeps the Maurer–Cartan
/// ones and partitions them into gauge orbits.
///
/// Orbits are found by closing under `e^{c b ⊗ μ}` for basis vectors `b` of
/// `L⁰` and monomials `μ`; these one-parameter subgroups generate the whole
/// unipotent gauge group.
pub fn enumerate_def(l: &Dgla, alg: &ArtinAlgebra) -> Result<DefEnumeration> {
    enumerate_def_with_guard(l, alg, ENUMERATION_GUARD)
}

pub fn enumerate_def_with_guard(l: &Dgla, alg: &ArtinAlgebra, guard: u64) -> Result<DefEnumeration> {
    let p = match l.field() {
        Field::Prime(p) => p,
        other => return Err(Error::Field(format!("enumeration needs a prime field, got {}", other.name()))),
    };
    if alg.field() != l.field() {
        return Err(Error::Field("Artin algebra and DGLA are over different fields".into()));
    }
    if (p as usize) <= alg.order() {
        return Err(Error::Characteristic { p, needed: alg.order() });
    }
    let s = l.space();
    let n1 = s.dim(1) * alg.dim_m();
    let candidates = (p as u128).checked_pow(n1 as u32).filter(|&c| c <= guard as u128);
    let Some(candidates) = candidates.map(|c| c as u64) else {
        return Err(Error::Guard(format!("{p}^{n1} candidates exceed the limit of {guard}")));
    };
    let slots: Vec<(Monomial, usize)> =
        alg.monomials().iter().flat_map(|m| s.range(1).map(move |i| (m.clone(), i))).collect();
    let field = l.field();
    let decode = |mut code: u64| {
        let mut x = LTensor::new();
        for (m, i) in &slots {
            let c = code % p;
            code /= p;
            if c != 0 {
                x.add_term(m.clone(), &SparseVec::unit(*i).scaled(&field.from_int(c as i64)));
            }
        }
        x
    };
    let encode = |x: &LTensor| {
        let mut code = 0u64;
        for (m, i) in slots.iter().rev() {
            let c = x.term(m).get(*i).coerce(field);
            let v = match c {
                crate::scalar::Scalar::Fp(v, _) => v,
                _ => unreachable!("prime field"),
            };
            code = code * p + v;
        }
        code
    };
    use rayon::prelude::*;
    let mc: Vec<u64> = (0..candidates)
        .into_par_iter()
        .filter(|&c| mc_residual(l, alg, &decode(c)).map(|r| r.is_zero()).unwrap_or(false))
        .collect();
    let index: HashMap<u64, usize> = mc.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let ext = adjoin_delta_unchecked(Arc::new(l.clone()));
    let generators: Vec<LTensor> = alg
        .monomials()
        .iter()
        .flat_map(|m| s.range(0).map(move |i| LTensor::monomial(m.clone(), SparseVec::unit(i))))
        .collect();
    let mut orbit_of = vec![usize::MAX; mc.len()];
    let mut orbits = Vec::new();
    for start in 0..mc.len() {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        orbit_of[start] = id;
        let mut queue = vec![start];
        let mut size = 0;
        while let Some(cur) = queue.pop() {
            size += 1;
            let x = decode(mc[cur]);
            for g in &generators {
                let y = gauge_act(&ext, alg, g, &x)?;
                let j = *index
                    .get(&encode(&y))
                    .ok_or_else(|| Error::Invalid("gauge action left the Maurer-Cartan set".into()))?;
                if orbit_of[j] == usize::MAX {
                    orbit_of[j] = id;
                    queue.push(j);
                }
            }
        }
        orbits.push((decode(mc[start]), size));
    }
    Ok(DefEnumeration { candidates, mc_count: mc.len(), orbit_count: orbits.len(), orbits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin::{gauge_act_in, tensor_bracket};
    use crate::dgla::ann_subalgebra;
    use crate::graded::{CochainComplex, GradedMap};
    use crate::linfty::fm_cone;
    use crate::samples::{self, LieAlgebra};
    use crate::scalar::Scalar;
    use rand::SeedableRng;

    fn q() -> Field {
        Field::Rationals
    }

    /// A Maurer–Cartan element obtained by gauging zero.
    fn gauge_of_zero(l: &Arc<Dgla>, alg: &ArtinAlgebra, seed: u64) -> LTensor {
        gauge_act_in(l, alg, &samples::random_tensor(l, alg, 0, seed), &LTensor::new()).unwrap()
    }

    #[test]
    fn abelian_lifts_with_zero_correction() {
        let c = samples::random_complex(6, 0..=2, 3, q());
        let l = Dgla::abelian(c);
        let alg = ArtinAlgebra::univariate(5, q()).unwrap();
        let p = DglaProblem::new(&l);
        let lifter = Lifter::new(&p, &alg).unwrap();
        let mut r = samples::rng(1);
        let first = lifter.random_cocycle(&mut r, 1);
        let rep = lifter.lift_all(&first, None).unwrap();
        assert!(rep.unobstructed());
        assert_eq!(rep.solution, first);
    }

    #[test]
    fn vanishing_h2_always_lifts() {
        for seed in 0..10 {
            let l = samples::random_dgla(seed, q());
            let p = DglaProblem::new(&l);
            let alg = ArtinAlgebra::univariate(4, q()).unwrap();
            let lifter = Lifter::new(&p, &alg).unwrap();
            if lifter.obstruction_space_dim() != 0 {
                continue;
            }
            let mut r = samples::rng(seed);
            let first = lifter.random_cocycle(&mut r, 1);
            assert!(lifter.lift_all(&first, Some(&mut r)).unwrap().unobstructed());
        }
    }

    #[test]
    fn obstructed_example() {
        // sl2 ⊗ Λ(ε1, ε2): H¹ = sl2 ⊗ ⟨ε1, ε2⟩, H² = sl2 ⊗ ε1ε2, and
        // x = e ⊗ ε1 t + f ⊗ ε2 t has [x, x] = 2 h ⊗ ε1ε2 t², which is not exact
        let g = LieAlgebra::sl2();
        let a = samples::Cdga::exterior2(q());
        let l = samples::tensor_dgla(&g, &a);
        let alg = ArtinAlgebra::univariate(3, q()).unwrap();
        let idx = samples::tensor_index(&g, &a);
        let pos = |i: usize, j: usize| idx.iter().position(|&p| p == (i, j)).unwrap();
        let x = LTensor::monomial(vec![1], SparseVec::unit(pos(1, 1)).add(&SparseVec::unit(pos(2, 2))));
        match mc_lift_step(&l, &alg, &x, 2).unwrap() {
            LiftOutcome::Obstructed(c) => assert!(!c.is_zero()),
            LiftOutcome::Lifted(_) => panic!("expected an obstruction"),
        }
    }

    #[test]
    fn obstruction_independent_of_lift() {
        let g = LieAlgebra::sl2();
        let a = samples::Cdga::exterior2(q());
        let l = samples::tensor_dgla(&g, &a);
        let alg = ArtinAlgebra::univariate(4, q()).unwrap();
        let p = DglaProblem::new(&l);
        let lifter = Lifter::new(&p, &alg).unwrap();
        let mut r = samples::rng(3);
        let first = lifter.random_cocycle(&mut r, 1);
        // any set-theoretic extension: add arbitrary order-2 terms
        let s = l.space();
        let mut other = first.clone();
        other.add_term(vec![2], &s.local_part(&samples::random_homogeneous(&l, 1, 8), 1));
        let c1 = lifter.obstruction(&first, 2).unwrap();
        let c2 = lifter.obstruction(&other, 2).unwrap();
        assert_eq!(c1, c2);
    }

    #[test]
    fn not_mc_is_rejected() {
        let l = samples::sl2(q());
        let c = samples::random_complex(1, 0..=2, 2, q());
        let ab = Dgla::abelian(c);
        let alg = ArtinAlgebra::univariate(3, q()).unwrap();
        let p = DglaProblem::new(&ab);
        let lifter = Lifter::new(&p, &alg).unwrap();
        let x = LTensor::monomial(vec![1], SparseVec::from_dense(&vec![Scalar::one(); ab.space().dim(1)]));
        let r = lifter.obstruction(&x, 2);
        if ab.complex.d_block(1).apply(&x.term(&[1])).is_zero() {
            assert!(r.is_ok());
        } else {
            assert!(matches!(r, Err(Error::NotMaurerCartan { order: 1 })));
        }
        let _ = l;
    }

    #[test]
    fn gauge_group_law_and_mc_preservation() {
        for seed in 0..10 {
            let l = Arc::new(samples::random_dgla(seed, q()));
            let alg = ArtinAlgebra::univariate(4, q()).unwrap();
            let x = gauge_of_zero(&l, &alg, seed + 100);
            assert!(mc_residual(&l, &alg, &x).unwrap().is_zero());
            let a = samples::random_tensor(&l, &alg, 0, seed + 1);
            let b = samples::random_tensor(&l, &alg, 0, seed + 2);
            let ab = bch(&l, &alg, &a, &b).unwrap();
            let lhs = gauge_act_in(&l, &alg, &ab, &x).unwrap();
            let rhs = gauge_act_in(&l, &alg, &a, &gauge_act_in(&l, &alg, &b, &x).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "seed {seed}");
            assert!(mc_residual(&l, &alg, &lhs).unwrap().is_zero());
        }
    }

    #[test]
    fn relative_pairs() {
        for seed in 0..8 {
            let f = samples::random_morphism(seed, q());
            let ctx = RelativeContext::new(f.clone()).unwrap();
            let alg = ArtinAlgebra::univariate(4, q()).unwrap();
            let (r1, r2) = ctx.residual(&alg, &LTensor::new(), &LTensor::new()).unwrap();
            assert!(r1.is_zero() && r2.is_zero());
            // x MC in L, g with e^g * f(x) = 0: take x = e^c * 0, g = -f(c)
            let c = samples::random_tensor(ctx.source(), &alg, 0, seed + 7);
            let x = gauge_act(&ctx.source_ext, &alg, &c, &LTensor::new()).unwrap();
            let g = ctx.push(&c).neg();
            let (r1, r2) = ctx.residual(&alg, &x, &g).unwrap();
            assert!(r1.is_zero() && r2.is_zero(), "seed {seed}");
            // relative gauge action preserves the pair condition
            let a = samples::random_tensor(ctx.source(), &alg, 0, seed + 11);
            let b = samples::random_tensor(ctx.target(), &alg, -1, seed + 13);
            let (x2, g2) = ctx.gauge(&alg, &a, &b, &x, &g).unwrap();
            let (r1, r2) = ctx.residual(&alg, &x2, &g2).unwrap();
            assert!(r1.is_zero() && r2.is_zero(), "seed {seed}");
            // identity
            let z0 = LTensor::new();
            assert_eq!(ctx.gauge(&alg, &z0, &z0, &x, &g).unwrap(), (x.clone(), g.clone()));
        }
    }

    #[test]
    fn relative_gauge_with_plus_sign_fails_somewhere() {
        // the group element must be e^{db} e^g e^{-f(a)}; using +f(a) breaks the condition
        let mut broken = 0;
        for seed in 0..8 {
            let f = samples::random_morphism(seed, q());
            let ctx = RelativeContext::new(f).unwrap();
            let alg = ArtinAlgebra::univariate(3, q()).unwrap();
            let a = samples::random_tensor(ctx.source(), &alg, 0, seed + 3);
            let x = LTensor::new();
            let g = LTensor::new();
            let x2 = gauge_act(&ctx.source_ext, &alg, &a, &x).unwrap();
            let g2 = bch(ctx.target(), &alg, &g, &ctx.push(&a)).unwrap();
            let (_, r2) = ctx.residual(&alg, &x2, &g2).unwrap();
            if !r2.is_zero() {
                broken += 1;
            }
        }
        assert!(broken > 0);
    }

    #[test]
    fn relative_stabilizer_fixed() {
        let f = samples::cartan_in_sl2(q());
        let alg = ArtinAlgebra::univariate(3, q()).unwrap();
        let z = LTensor::new();
        let out = relative_gauge_act(&f, &alg, &z, &z, &z, &z).unwrap();
        assert_eq!(out, (z.clone(), z));
    }

    #[test]
    fn enumeration_examples() {
        let f3 = Field::Prime(3);
        let alg = ArtinAlgebra::dual_numbers(f3);
        // abelian, d = 0: every element is MC, gauge trivial
        let l = Dgla::abelian(CochainComplex::zero(GradedSpace::from_dims(f3, &[(0, 1), (1, 2)])));
        let e = enumerate_def(&l, &alg).unwrap();
        assert_eq!(e.orbit_count, 9);
        // acyclic: d: L⁰ → L¹ invertible
        let space = GradedSpace::from_dims(f3, &[(0, 1), (1, 1)]);
        let c = CochainComplex::from_blocks(space, &BTreeMap::from([(0, SparseMatrix::identity(1, f3))])).unwrap();
        let e = enumerate_def(&Dgla::abelian(c), &alg).unwrap();
        assert_eq!((e.mc_count, e.orbit_count), (3, 1));
        // guards
        assert!(matches!(enumerate_def(&l, &ArtinAlgebra::univariate(3, f3).unwrap()), Err(Error::Characteristic { .. })));
        let big = Dgla::abelian(CochainComplex::zero(GradedSpace::from_dims(Field::Prime(5), &[(1, 12)])));
        let a5 = ArtinAlgebra::univariate(3, Field::Prime(5)).unwrap();
        assert!(matches!(enumerate_def(&big, &a5), Err(Error::Guard(_))));
    }

    #[test]
    fn enumeration_orbits_match_full_group() {
        // orbits under all gauge elements equal orbits under the generators
        let f5 = Field::Prime(5);
        let g = LieAlgebra::aff2();
        let a = samples::Cdga::square_zero_pair(f5, 0);
        let l = samples::tensor_dgla(&g, &a);
        let alg = ArtinAlgebra::univariate(3, f5).unwrap();
        let e = enumerate_def(&l, &alg).unwrap();
        let ext = adjoin_delta_unchecked(Arc::new(l.clone()));
        let s = l.space();
        let slots: Vec<(Monomial, usize)> =
            alg.monomials().iter().flat_map(|m| s.range(0).map(move |i| (m.clone(), i))).collect();
        let total = 5u64.pow(slots.len() as u32);
        for (rep, size) in &e.orbits {
            let mut orbit = std::collections::BTreeSet::new();
            for code in 0..total {
                let mut a = LTensor::new();
                let mut c = code;
                for (m, i) in &slots {
                    a.add_term(m.clone(), &SparseVec::unit(*i).scaled(&f5.from_int((c % 5) as i64)));
                    c /= 5;
                }
                let y = gauge_act(&ext, &alg, &a, rep).unwrap();
                let key: Vec<String> = alg
                    .monomials()
                    .iter()
                    .flat_map(|m| s.range(1).map(move |i| (m, i)))
                    .map(|(m, i)| y.term(m).get(i).coerce(f5).to_string())
                    .collect();
                orbit.insert(key);
            }
            assert_eq!(orbit.len(), *size);
        }
    }

    #[test]
    fn enumeration_invariant_under_relabeling() {
        let f5 = Field::Prime(5);
        let l = samples::tensor_dgla(&LieAlgebra::aff2(), &samples::Cdga::square_zero_pair(f5, 0));
        let alg = ArtinAlgebra::univariate(3, f5).unwrap();
        let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let p = samples::random_basis_change(&mut r, l.space());
        let (l2, _, _) = samples::change_basis(&l, &p);
        let e1 = enumerate_def(&l, &alg).unwrap();
        let e2 = enumerate_def(&l2, &alg).unwrap();
        assert_eq!((e1.mc_count, e1.orbit_count), (e2.mc_count, e2.orbit_count));
    }

    #[test]
    fn ann_end_cone_lifts() {
        let (c, v) = samples::random_complex_with_cocycle(21, q());
        let (ann, _) = ann_subalgebra(&c, &[v]).unwrap();
        let cone = fm_cone(&ann.inclusion, 4).unwrap();
        let alg = ArtinAlgebra::univariate(5, q()).unwrap();
        let p = LinftyProblem::new(&cone.algebra);
        let lifter = Lifter::new(&p, &alg).unwrap();
        let mut r = samples::rng(21);
        let first = lifter.random_cocycle(&mut r, 1);
        let rep = lifter.lift_all(&first, Some(&mut r)).unwrap();
        assert!(rep.unobstructed());
        let s = &cone.algebra.space;
        let x = rep.solution.map(|v| s.embed_local(v, 1));
        assert!(linfty_mc_residual(&cone.algebra, &alg, &x).unwrap().is_zero());
    }

    #[test]
    fn bracket_of_heisenberg_pair() {
        let heis = LieAlgebra::heis3().to_dgla(q());
        let alg = ArtinAlgebra::univariate(3, q()).unwrap();
        let a = LTensor::monomial(vec![1], SparseVec::unit(0));
        let b = LTensor::monomial(vec![1], SparseVec::unit(1));
        assert_eq!(tensor_bracket(&heis, &alg, &a, &b), LTensor::monomial(vec![2], SparseVec::unit(2)));
        let _ = GradedMap::identity(heis.space());
    }
}
