//! Acceptance suite. Every check prints one `PASS`/`FAIL` line; a check
//! listed in `KNOWN_UNATTAINABLE` prints its honest verdict without failing
//! the test run.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::sync::Arc;
use std::time::{Duration, Instant};

use mcdef::artin::{bch, gauge_act_in, gauge_act_formula, mc_residual, ArtinAlgebra, LTensor};
use mcdef::dgla::{BracketTable, SubDgla};
use mcdef::geom::{
    build_preset, der_dgla, form_residual, goto_complex, injectivity_check, relative_j_vanishes, stab_dgla, GotoLift,
    InjectivityOptions, Preset,
};
use mcdef::graded::{cone_complex, contraction};
use mcdef::linfty::{check_linfty, check_linfty_arity, fm_cone, fm_cone_with, homotopy_abelian_report, FmOptions};
use mcdef::mc::{enumerate_def, DglaProblem, Lifter, LinftyProblem, RelativeContext};
use mcdef::samples::{self, Cdga, LieAlgebra};
use mcdef::{
    check_dgla, check_morphism, ChainMap, CochainComplex, Dgla, DglaMorphism, Field, GradedMap, GradedSpace,
    SparseMatrix, SparseVec,
};

/// The flipped-sign control cannot fail at arity 3 alone: the arity-2
/// identity on two source elements already detects the flip, and the
/// arity-3 identity depends on the sign only through its square.
const KNOWN_UNATTAINABLE: &[u32] = &[2];

fn q() -> Field {
    Field::Rationals
}

fn line(n: u32, pass: bool, text: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    let note = if !pass && KNOWN_UNATTAINABLE.contains(&n) { " (known unattainable)" } else { "" };
    // written past the test harness capture so the lines show in plain `cargo test` output
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{tag} [{n}] {text}{note}");
}

fn settle(n: u32, pass: bool, text: &str) {
    line(n, pass, text);
    if !KNOWN_UNATTAINABLE.contains(&n) {
        assert!(pass, "criterion {n} failed: {text}");
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2} s", d.as_secs_f64())
}

#[test]
fn fm_cone_is_linfty_on_random_morphisms() {
    let start = Instant::now();
    let mut ok = 0;
    let mut max_dim = 0;
    for seed in 0..50 {
        let f = samples::random_bounded_morphism(seed, q(), -1..=3, 4);
        assert!(check_morphism(&f).is_ok());
        max_dim = max_dim.max(f.source.dim() + f.target.dim());
        let cone = fm_cone(&f, 4).unwrap();
        if check_linfty(&cone.algebra, 4).is_ok() {
            ok += 1;
        }
    }
    let t = start.elapsed();
    settle(
        1,
        ok == 50 && t < Duration::from_secs(60),
        &format!("fm_cone passes check_linfty to arity 4 on {ok}/50 morphisms (cones up to dim {max_dim}) in {}", secs(t)),
    );
}

fn failing_arities(f: &DglaMorphism, flip_b1: bool) -> BTreeSet<usize> {
    let cone = fm_cone_with(f, 4, FmOptions { flip_b1, trusted: false }).unwrap();
    (1..=4).filter(|&n| check_linfty_arity(&cone.algebra, n).is_err()).collect()
}

#[test]
fn flipped_bernoulli_sign_control() {
    let f = samples::random_morphism(0, q());
    assert!(failing_arities(&f, false).is_empty());
    let flipped = failing_arities(&f, true);
    let exactly_three = flipped == BTreeSet::from([3]);
    // what does hold: the flip is detected, first at arity 2, and no seed isolates arity 3
    assert_eq!(flipped.iter().next(), Some(&2));
    let mut patterns = BTreeSet::new();
    for seed in 0..40 {
        let g = samples::random_morphism(seed, q());
        let p = failing_arities(&g, true);
        assert_ne!(p, BTreeSet::from([3]), "seed {seed}");
        if !p.is_empty() {
            assert!(p.contains(&2), "seed {seed}: {p:?}");
        }
        patterns.insert(p.into_iter().collect::<Vec<_>>());
    }
    settle(
        2,
        exactly_three,
        &format!("flipping B1 on seed 0 fails arities {flipped:?}, not exactly {{3}}; patterns over 40 seeds: {patterns:?}"),
    );
}

#[test]
fn annihilator_cone_is_unobstructed() {
    let start = Instant::now();
    let alg = ArtinAlgebra::univariate(5, q()).unwrap();
    let mut ok = 0;
    let mut nontrivial = 0;
    for seed in 0..20 {
        let (c, v) = samples::random_complex_with_cocycle(seed, q());
        let (ann, _) = mcdef::dgla::ann_subalgebra(&c, &[v]).unwrap();
        let cone = fm_cone(&ann.inclusion, 4).unwrap();
        let problem = LinftyProblem::new(&cone.algebra);
        let lifter = Lifter::new(&problem, &alg).unwrap();
        if lifter.tangent_dim() > 0 {
            nontrivial += 1;
        }
        let mut r = samples::rng(seed + 1000);
        let first = lifter.random_cocycle(&mut r, 1);
        let rep = lifter.lift_all(&first, Some(&mut r)).unwrap();
        let s = &cone.algebra.space;
        let x = rep.solution.map(|v| s.embed_local(v, 1));
        let residual = mcdef::linfty::linfty_mc_residual(&cone.algebra, &alg, &x).unwrap();
        if rep.unobstructed() && rep.orders.len() == 3 && residual.is_zero() {
            ok += 1;
        }
    }
    let t = start.elapsed();
    settle(
        3,
        ok == 20 && t < Duration::from_secs(120),
        &format!(
            "relative lifting for Ann(v) -> End(V) over Q[t]/t^5 unobstructed at orders 1-4 on {ok}/20 pairs ({nontrivial} with nonzero tangent space) in {}",
            secs(t)
        ),
    );
}

/// Smallest graded subalgebra containing `gens`.
fn generated_subalgebra(m: &Arc<Dgla>, gens: Vec<(i32, SparseVec)>) -> SubDgla {
    let space = m.space();
    let field = m.field();
    let mut spans: BTreeMap<i32, Vec<SparseVec>> = BTreeMap::new();
    let in_span = |vs: &[SparseVec], v: &SparseVec| {
        let base = SparseMatrix::from_rows(vs.to_vec(), space.total_dim(), field).unwrap().rank();
        let mut more = vs.to_vec();
        more.push(v.clone());
        SparseMatrix::from_rows(more, space.total_dim(), field).unwrap().rank() == base
    };
    let mut queue = gens;
    while let Some((k, v)) = queue.pop() {
        let vs = spans.entry(k).or_default();
        if v.is_zero() || in_span(vs, &v) {
            continue;
        }
        vs.push(v.clone());
        let current: Vec<(i32, SparseVec)> = spans.iter().flat_map(|(&a, ws)| ws.iter().map(move |w| (a, w.clone()))).collect();
        for (a, w) in current {
            queue.push((k + a, m.bracket(&v, &w)));
        }
    }
    spans.retain(|_, vs| !vs.is_empty());
    SubDgla::new(m.clone(), &spans).unwrap()
}

#[test]
fn zero_differential_inclusions_are_homotopy_abelian() {
    let start = Instant::now();
    let lies = [LieAlgebra::aff2(), LieAlgebra::heis3(), LieAlgebra::sl2()];
    let cdgas = [Cdga::ground(q()), Cdga::exterior1(q()), Cdga::exterior_neg(q()), Cdga::dual_numbers(q()), Cdga::exterior2(q())];
    let mut ok = 0;
    let mut proper = 0;
    let mut max_h = 0;
    for seed in 0..20u64 {
        let mut r = samples::rng(seed);
        let g = &lies[seed as usize % lies.len()];
        let a = &cdgas[(seed as usize / lies.len()) % cdgas.len()];
        let l = samples::tensor_dgla(g, a);
        let p = samples::random_basis_change(&mut r, l.space());
        let m = Arc::new(samples::change_basis(&l, &p).0);
        assert!(m.complex.differential.is_zero());
        let degrees: Vec<i32> = m.space().degrees().filter(|&k| m.space().dim(k) > 0).collect();
        let gens = (0..1 + seed % 2)
            .map(|i| {
                let k = degrees[(seed + i) as usize % degrees.len()];
                (k, samples::random_homogeneous(&m, k, seed * 31 + i))
            })
            .collect();
        let sub = generated_subalgebra(&m, gens);
        sub.verify_bracket_closure().unwrap();
        if sub.dgla.dim() < m.dim() {
            proper += 1;
        }
        let cone = fm_cone(&sub.inclusion, 4).unwrap();
        let rep = homotopy_abelian_report(&cone.algebra, 4).unwrap();
        max_h = max_h.max(rep.cohomology_dims.values().sum::<usize>());
        if rep.is_abelian() {
            ok += 1;
        }
    }
    settle(
        4,
        ok == 20,
        &format!(
            "transferred brackets on H(Cone) vanish to arity 4 on {ok}/20 inclusions ({proper} proper, H up to dim {max_h}) in {}",
            secs(start.elapsed())
        ),
    );
}

/// `L × ⟨u, du⟩` with `|u| = k` and the inclusion of `L`.
fn with_acyclic_factor(l: &Arc<Dgla>, k: i32) -> DglaMorphism {
    let field = l.field();
    let old = l.space();
    let mut dims = old.dims();
    *dims.entry(k).or_insert(0) += 1;
    *dims.entry(k + 1).or_insert(0) += 1;
    let new = GradedSpace::new(field, &dims);
    let pos = |i: usize| {
        let (deg, local) = old.local(i);
        new.global(deg, local)
    };
    let u = new.global(k, old.dim(k));
    let du = new.global(k + 1, old.dim(k + 1));
    let n = new.total_dim();
    let mut d = SparseMatrix::zeros(n, n, field);
    for (r, c, x) in l.complex.differential.matrix.entries() {
        d.set(pos(r), pos(c), x.clone());
    }
    d.set(du, u, field.one());
    let table: BracketTable = l.table().into_iter().map(|((i, j), v)| ((pos(i), pos(j)), v.remap(|t| Some(pos(t))))).collect();
    let target = Arc::new(Dgla::from_table(CochainComplex::new(new.clone(), d).unwrap(), table));
    let mut m = SparseMatrix::zeros(n, l.dim(), field);
    for i in 0..l.dim() {
        m.set(pos(i), i, field.one());
    }
    DglaMorphism::new(l.clone(), target, GradedMap::new(old.clone(), new, 0, m).unwrap())
}

fn is_quasi_isomorphism(f: &DglaMorphism) -> bool {
    let chain = ChainMap::new(f.source.complex.clone(), f.target.complex.clone(), f.map.clone()).unwrap();
    let (cone, _) = cone_complex(&chain).unwrap();
    cone.cohomology_dims().unwrap().values().all(|&h| h == 0)
}

#[test]
fn quasi_isomorphic_pairs_have_equal_orbit_counts() {
    let start = Instant::now();
    let f5 = Field::Prime(5);
    let alg = ArtinAlgebra::univariate(3, f5).unwrap();
    let mut r = samples::rng(5);
    let tensor = |g: LieAlgebra, a: Cdga| Arc::new(samples::tensor_dgla(&g, &a));
    let mut pairs = vec![
        ("heis3⊗Λ(ε) × acyclic(0)", with_acyclic_factor(&tensor(LieAlgebra::heis3(), Cdga::exterior1(f5)), 0)),
        ("aff2⊗Λ(ε) × acyclic(1)", with_acyclic_factor(&tensor(LieAlgebra::aff2(), Cdga::exterior1(f5)), 1)),
        ("sl2⊗Λ(ε) × acyclic(0)", with_acyclic_factor(&tensor(LieAlgebra::sl2(), Cdga::exterior1(f5)), 0)),
        ("ab2⊗Λ(ε) × acyclic(1)", with_acyclic_factor(&tensor(LieAlgebra::abelian(2), Cdga::exterior1(f5)), 1)),
        ("ab1⊗Λ(ε) × acyclic(0)", with_acyclic_factor(&tensor(LieAlgebra::abelian(1), Cdga::exterior1(f5)), 0)),
    ];
    let sz = Cdga::square_zero_pair(f5, 0);
    let unit = samples::tensor_morphism(
        &LieAlgebra::aff2(),
        &Cdga::ground(f5),
        &SparseMatrix::identity(2, f5),
        &LieAlgebra::aff2(),
        &sz,
        &sz.unit_map(),
    );
    pairs.push(("aff2 -> aff2⊗(F⊕⟨u,du⟩)", unit));
    let pairs: Vec<_> = pairs.into_iter().map(|(name, f)| (name, samples::scramble_morphism(&mut r, &f))).collect();
    let mut ok = 0;
    let mut counts = Vec::new();
    for (name, f) in &pairs {
        assert!(check_morphism(f).is_ok(), "{name}");
        assert!(check_dgla(&f.target).is_ok(), "{name}");
        assert!(is_quasi_isomorphism(f), "{name}");
        let a = enumerate_def(&f.source, &alg).unwrap();
        let b = enumerate_def(&f.target, &alg).unwrap();
        assert!(b.candidates <= 10_000_000);
        if a.orbit_count == b.orbit_count {
            ok += 1;
        }
        counts.push(format!("{}={}/{}", name, a.orbit_count, b.orbit_count));
    }
    let t = start.elapsed();
    settle(
        5,
        ok == pairs.len() && t < Duration::from_secs(300),
        &format!("equal orbit counts over F5[t]/t^3 on {ok}/{} quasi-isomorphic pairs [{}] in {}", pairs.len(), counts.join(", "), secs(t)),
    );
}

#[test]
fn gauge_group_law_and_mc_preservation() {
    let start = Instant::now();
    let mut ok = 0;
    for seed in 0..50u64 {
        let l = Arc::new(samples::random_dgla(seed, q()));
        let alg = if seed % 2 == 0 { ArtinAlgebra::univariate(4, q()) } else { ArtinAlgebra::truncated(2, 3, q()) }.unwrap();
        let problem = DglaProblem::new(&l);
        let lifter = Lifter::new(&problem, &alg).unwrap();
        let mut r = samples::rng(seed);
        let first = lifter.random_cocycle(&mut r, 1);
        let lift = lifter.lift_all(&first, Some(&mut r)).unwrap();
        let x = if lift.unobstructed() {
            lift.solution.map(|v| l.space().embed_local(v, 1))
        } else {
            gauge_act_in(&l, &alg, &samples::random_tensor(&l, &alg, 0, seed + 500), &LTensor::new()).unwrap()
        };
        assert!(mc_residual(&l, &alg, &x).unwrap().is_zero(), "seed {seed}");
        let a = samples::random_tensor(&l, &alg, 0, seed + 1);
        let b = samples::random_tensor(&l, &alg, 0, seed + 2);
        let c = samples::random_tensor(&l, &alg, 0, seed + 3);
        let assoc = bch(&l, &alg, &bch(&l, &alg, &a, &b).unwrap(), &c).unwrap() == bch(&l, &alg, &a, &bch(&l, &alg, &b, &c).unwrap()).unwrap();
        let inverse = bch(&l, &alg, &a, &a.neg()).unwrap().is_zero();
        let ab = bch(&l, &alg, &a, &b).unwrap();
        let lhs = gauge_act_in(&l, &alg, &ab, &x).unwrap();
        let rhs = gauge_act_in(&l, &alg, &a, &gauge_act_in(&l, &alg, &b, &x).unwrap()).unwrap();
        let formula = gauge_act_formula(&l, &alg, &a, &x).unwrap() == gauge_act_in(&l, &alg, &a, &x).unwrap();
        let preserved = mc_residual(&l, &alg, &lhs).unwrap().is_zero();
        if assoc && inverse && lhs == rhs && formula && preserved {
            ok += 1;
        }
    }
    settle(
        6,
        ok == 50,
        &format!("bch associativity, gauge group law and MC preservation on {ok}/50 seeds in {}", secs(start.elapsed())),
    );
}

/// Kernel dimension of `gl(n) → ⊕ Λ`, `A ↦ A·φ` for each form, built from
/// wedge products alone.
fn linearized_stabilizer_dim(forms: &mcdef::geom::FormAlgebra, phis: &[SparseVec]) -> usize {
    let n = forms.n();
    let field = forms.field();
    let mut columns = Vec::new();
    for i in 0..n {
        for j in 0..n {
            // derivation e^i ↦ e^j
            let mut col = SparseVec::new();
            for (p, phi) in phis.iter().enumerate() {
                let mut image = SparseVec::new();
                for (idx, c) in phi.iter() {
                    let mask = forms.mask(idx);
                    let gens: Vec<usize> = (0..n).filter(|b| mask >> b & 1 == 1).collect();
                    for (slot, &g) in gens.iter().enumerate() {
                        if g != i {
                            continue;
                        }
                        let mut term = forms.unit();
                        for (s, &h) in gens.iter().enumerate() {
                            let factor = if s == slot { forms.generator(j) } else { forms.generator(h) };
                            term = forms.wedge(&term, &factor);
                        }
                        image.add_scaled(&term, c);
                    }
                }
                col = col.add(&image.remap(|t| Some(t + p * forms.dim())));
            }
            columns.push(col);
        }
    }
    let m = SparseMatrix::from_columns(&columns, phis.len() * forms.dim(), field).unwrap();
    n * n - m.rank()
}

#[test]
fn stabilizer_ranks() {
    let start = Instant::now();
    let mut results = Vec::new();
    for (preset, expected) in [(Preset::Torus2n(2), 10), (Preset::G2Seven, 14)] {
        let pm = build_preset(preset).unwrap();
        let n = pm.model.n() as i32;
        let der = der_dgla(&pm.model, -1..=n - 1).unwrap();
        let stab = stab_dgla(&der, &pm.phi).unwrap();
        let rank = stab.dims().get(&0).copied().unwrap_or(0);
        let forms: Vec<SparseVec> = pm.forms.iter().map(|(_, v)| v.clone()).collect();
        let oracle = linearized_stabilizer_dim(&pm.model.forms, &forms);
        results.push((preset.name(), rank, oracle, expected));
    }
    let t = start.elapsed();
    let pass = results.iter().all(|&(_, r, o, e)| r == e && o == e) && t < Duration::from_secs(30);
    let text: Vec<String> = results.iter().map(|(n, r, o, e)| format!("{n}: {r} (direct {o}, expected {e})")).collect();
    settle(7, pass, &format!("stabilizer ranks {} in {}", text.join(", "), secs(t)));
}

#[test]
fn injectivity_pipeline_on_presets() {
    let start = Instant::now();
    let mut verdicts = Vec::new();
    for p in Preset::all() {
        let pm = build_preset(p).unwrap();
        assert!(pm.valid(), "{p:?}");
        let rep = injectivity_check(&pm.model, &pm.phi, &InjectivityOptions::default()).unwrap();
        let ok = rep.injective && rep.lifting.unobstructed() && rep.lift_order == 5 && rep.passed();
        verdicts.push((p.name(), ok));
    }
    let pass = verdicts.iter().all(|v| v.1);
    let text: Vec<String> = verdicts.iter().map(|(n, ok)| format!("{n}={}", if *ok { "ok" } else { "fail" })).collect();
    settle(8, pass, &format!("injective and unobstructed to order 5: {} in {}", text.join(", "), secs(start.elapsed())));
}

#[test]
fn stabilizer_residual_matches_form_equation() {
    let start = Instant::now();
    let mut agree = 0;
    let mut total = 0;
    let mut both = [0usize; 2];
    let mut details = Vec::new();
    for p in Preset::all() {
        let pm = build_preset(p).unwrap();
        let n = pm.model.n() as i32;
        let field = pm.model.field();
        let der = der_dgla(&pm.model, -1..=n - 1).unwrap();
        let stab = stab_dgla(&der, &pm.phi).unwrap();
        let goto = goto_complex(&der, &pm.phi).unwrap();
        let ctx = RelativeContext::new_unchecked(stab.j().clone());
        let alg = ArtinAlgebra::univariate(5, field).unwrap();
        let problem = GotoLift::new(&der, &pm.phi, &goto).unwrap();
        let lifter = Lifter::new(&problem, &alg).unwrap();
        let mut r = samples::rng(77);
        let mut preset_agree = 0;
        for seed in 0..20u64 {
            let m = match seed % 3 {
                0 => problem.global(&lifter.lift_all(&lifter.random_cocycle(&mut r, 1), Some(&mut r)).unwrap().solution),
                1 => {
                    let first = lifter.random_cocycle(&mut r, 1);
                    let sol = lifter.lift_all(&first, Some(&mut r)).unwrap().solution;
                    let mut m = problem.global(&sol.truncate(1 + (seed as usize / 3) % 3));
                    let k = 2 + (seed as usize / 3) % 3;
                    m.add_term(vec![k as u8], &samples::random_homogeneous(&der.dgla, 0, seed));
                    m
                }
                _ => samples::random_tensor(&der.dgla, &alg, 0, seed),
            };
            for k in 1..alg.order() {
                let a = relative_j_vanishes(&ctx, &stab, &alg, &m, k).unwrap();
                let b = form_residual(&der, &alg, &m, &pm.phi.value).truncate(k).is_zero();
                total += 1;
                both[a as usize] += 1;
                if a == b {
                    agree += 1;
                    preset_agree += 1;
                }
            }
        }
        details.push(format!("{}={preset_agree}/80", p.name()));
    }
    settle(
        9,
        agree == total && both[0] > 0 && both[1] > 0,
        &format!(
            "relative residual for j vanishes iff d(e^m Φ) vanishes: {agree}/{total} (gauge elements x orders; {} vanishing, {} not) [{}] in {}",
            both[1],
            both[0],
            details.join(", "),
            secs(start.elapsed())
        ),
    );
}

#[test]
fn cone_long_exact_sequence_ranks() {
    let mut ok = 0;
    let mut nonzero_maps = 0;
    for seed in 0..50 {
        let f = samples::random_chain_map(seed, q());
        let cv = contraction(&f.source).unwrap();
        let cw = contraction(&f.target).unwrap();
        let (cone, _) = cone_complex(&f).unwrap();
        let hc = cone.cohomology_dims().unwrap();
        let hv = cv.target.dims();
        let hw = cw.target.dims();
        let rank = |k: i32| if hv.contains_key(&k) && hw.contains_key(&k) { f.cohomology_map(&cv, &cw, k).rank() } else { 0 };
        let degrees: BTreeSet<i32> = hc.keys().chain(hv.keys()).copied().chain(hw.keys().map(|k| k + 1)).collect();
        if (0..5).any(|k| rank(k) > 0) {
            nonzero_maps += 1;
        }
        let holds = degrees.iter().all(|&k| {
            let get = |m: &BTreeMap<i32, usize>, k: i32| m.get(&k).copied().unwrap_or(0);
            get(&hc, k) == get(&hv, k) - rank(k) + get(&hw, k - 1) - rank(k - 1)
        });
        if holds {
            ok += 1;
        }
    }
    settle(10, ok == 50, &format!("dim H^k(Cone) = dim ker H^k(f) + dim coker H^(k-1)(f) on {ok}/50 chain maps ({nonzero_maps} with H(f) ≠ 0)"));
}

