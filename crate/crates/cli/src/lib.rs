//! `mcdef` command-line front end. Every subcommand produces a [`Report`];
//! exit code 0 means every verdict passed, 1 that a mathematical check
//! failed and 2 an input or usage error.

pub mod report;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mcdef::artin::ArtinAlgebra;
use mcdef::format::{parse_algebra_file_with, Bundle, ModelBundle};
use mcdef::geom::{
    build_preset, der_dgla, goto_complex, injectivity_check, stab_dgla, AbelianStatus, InjectivityOptions, Preset,
};
use mcdef::linfty::{check_linfty_arity, fm_cone_with, homotopy_abelian_report, FmOptions};
use mcdef::mc::{enumerate_def_with_guard, DglaProblem, LiftProblem, Lifter, LinftyProblem, ENUMERATION_GUARD};
use mcdef::{check_dgla, check_morphism, Dgla, Error, Field, SparseVec};
use rand::SeedableRng;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub use report::Report;
use report::{coords, dims, labelled_cohomology, tensor, vector, vector_text};

#[derive(Parser, Debug)]
#[command(name = "mcdef", version, about = "Exact checks for DGLAs, L-infinity cones, Maurer-Cartan lifting and geometric models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Print a short human-readable summary instead of JSON.
    #[arg(long, global = true)]
    pub text: bool,
    /// Record wall-clock time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// Algebra file (JSON).
    pub file: Option<PathBuf>,
    /// Use a shipped preset model instead of a file.
    #[arg(long, value_enum, conflicts_with = "file")]
    pub preset: Option<PresetName>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PresetName {
    #[value(name = "torus2n")]
    Torus2n,
    #[value(name = "kt4")]
    Kt4,
    #[value(name = "torus-su3")]
    TorusSu3,
    #[value(name = "g2-7")]
    G2Seven,
}

impl PresetName {
    pub fn file_name(self) -> &'static str {
        match self {
            PresetName::Torus2n => "torus2n.json",
            PresetName::Kt4 => "kt4.json",
            PresetName::TorusSu3 => "torus-su3.json",
            PresetName::G2Seven => "g2-7.json",
        }
    }

    pub fn text(self) -> &'static str {
        match self {
            PresetName::Torus2n => include_str!("../presets/torus2n.json"),
            PresetName::Kt4 => include_str!("../presets/kt4.json"),
            PresetName::TorusSu3 => include_str!("../presets/torus-su3.json"),
            PresetName::G2Seven => include_str!("../presets/g2-7.json"),
        }
    }

    pub fn preset(self) -> Preset {
        match self {
            PresetName::Torus2n => Preset::Torus2n(2),
            PresetName::Kt4 => Preset::Kt4,
            PresetName::TorusSu3 => Preset::TorusSu3,
            PresetName::G2Seven => Preset::G2Seven,
        }
    }

    pub fn all() -> [PresetName; 4] {
        [PresetName::Torus2n, PresetName::Kt4, PresetName::TorusSu3, PresetName::G2Seven]
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verify DGLA and morphism axioms, or the structure form of a model.
    Check {
        #[command(flatten)]
        input: Input,
    },
    /// Build the mapping-cone L-infinity algebra of a morphism and check its Jacobi identities.
    Cone {
        #[command(flatten)]
        input: Input,
        /// Highest bracket arity to build and check.
        #[arg(long, default_value_t = 4)]
        arity: usize,
        /// Use the wrong sign for the mixed binary bracket.
        #[arg(long)]
        flip_b1: bool,
        /// Also test homotopy abelianness up to this arity.
        #[arg(long)]
        abelian: Option<usize>,
    },
    /// Lift a random first-order Maurer-Cartan element order by order.
    McLift {
        #[command(flatten)]
        input: Input,
        /// Lift through this order (the algebra is F[t]/t^(N+1)).
        #[arg(long)]
        order: usize,
        /// Number of deformation parameters.
        #[arg(long, default_value_t = 1)]
        vars: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Lift in the cone of the file's morphism instead of its source DGLA.
        #[arg(long)]
        cone: bool,
    },
    /// Count gauge orbits of Maurer-Cartan elements over a finite field.
    Enumerate {
        #[command(flatten)]
        input: Input,
        /// Prime field, as `Fp:5` or `5`.
        #[arg(long)]
        field: String,
        /// Truncation order (the algebra is F[t1..tk]/m^(N+1)).
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[arg(long, default_value_t = 1)]
        vars: usize,
        /// Maximum number of candidates to examine.
        #[arg(long, default_value_t = ENUMERATION_GUARD)]
        guard: u64,
        /// Second algebra file whose orbit count must agree.
        #[arg(long)]
        compare: Option<PathBuf>,
    },
    /// Build a preset model and report its forms and cohomology.
    Model {
        #[arg(long, value_enum)]
        preset: PresetName,
        /// Print the preset file itself.
        #[arg(long)]
        emit: bool,
    },
    /// Derivations, stabilizer and orbit complex of a model.
    GotoComplex {
        #[command(flatten)]
        input: Input,
    },
    /// Cohomological injectivity and unobstructedness of the stabilizer inclusion.
    Injectivity {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 5)]
        order: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Build both cones explicitly for models with at most this many generators.
        #[arg(long, default_value_t = 4)]
        explicit_limit: usize,
        /// Run the homotopy-abelian test when the endomorphism cone has at most this dimension.
        #[arg(long, default_value_t = 48)]
        abelian_limit: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Cone { .. } => "cone",
            Command::McLift { .. } => "mc-lift",
            Command::Enumerate { .. } => "enumerate",
            Command::Model { .. } => "model",
            Command::GotoComplex { .. } => "goto-complex",
            Command::Injectivity { .. } => "injectivity",
        }
    }
}

/// Failure to produce a report at all.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn is_usage(e: &Error) -> bool {
    matches!(e, Error::Parse(_) | Error::Invalid(_) | Error::Guard(_) | Error::Characteristic { .. } | Error::Field(_))
}

struct Loaded {
    source: String,
    text: String,
}

impl Loaded {
    fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.text.as_bytes()))
    }
}

fn read_input(input: &Input) -> Result<Loaded, UsageError> {
    match (&input.file, input.preset) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
            Ok(Loaded { source: path.display().to_string(), text })
        }
        (None, Some(p)) => Ok(Loaded { source: format!("preset:{}", p.file_name().trim_end_matches(".json")), text: p.text().into() }),
        _ => Err(UsageError("give an algebra file or --preset".into())),
    }
}

fn parse(loaded: &Loaded, field: Option<Field>) -> Result<Bundle, UsageError> {
    parse_algebra_file_with(&loaded.text, field).map_err(|e| UsageError(format!("{}: {e}", loaded.source)))
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_command<I, T>(argv: I) -> Result<Report, UsageError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| UsageError(e.to_string()))?;
    run(&cli, Vec::new())
}

/// Runs a parsed command; `args` is echoed in the report.
pub fn run(cli: &Cli, args: Vec<String>) -> Result<Report, UsageError> {
    let start = Instant::now();
    let mut report = Report::new(cli.command.name(), args);
    let outcome = match &cli.command {
        Command::Check { input } => with_input(&mut report, input, None, check),
        Command::Cone { input, arity, flip_b1, abelian } => {
            with_input(&mut report, input, None, |r, b| cone(r, b, *arity, *flip_b1, *abelian))
        }
        Command::McLift { input, order, vars, seed, cone } => {
            with_input(&mut report, input, None, |r, b| mc_lift(r, b, *order, *vars, *seed, *cone))
        }
        Command::Enumerate { input, field, order, vars, guard, compare } => {
            let field = parse_prime_field(field)?;
            let other = match compare {
                Some(path) => {
                    let loaded = read_input(&Input { file: Some(path.clone()), preset: None })?;
                    Some(parse(&loaded, Some(field))?)
                }
                None => None,
            };
            with_input(&mut report, input, Some(field), |r, b| enumerate(r, b, other.as_ref(), *order, *vars, *guard))
        }
        Command::Model { preset, .. } => {
            with_input(&mut report, &Input { file: None, preset: Some(*preset) }, None, |r, b| model(r, b, *preset))
        }
        Command::GotoComplex { input } => with_input(&mut report, input, None, goto),
        Command::Injectivity { input, order, seed, explicit_limit, abelian_limit } => {
            let opts = InjectivityOptions {
                order: *order,
                seed: *seed,
                explicit_limit: *explicit_limit,
                abelian_limit: *abelian_limit,
                ..InjectivityOptions::default()
            };
            with_input(&mut report, input, None, |r, b| injectivity(r, b, &opts))
        }
    };
    match outcome? {
        Err(e) if is_usage(&e) => return Err(UsageError(e.to_string())),
        Err(e) => report.verdict("evaluation", false, Some(e.to_string())),
        Ok(()) => {}
    }
    if cli.timing {
        report.timing_ms = Some(start.elapsed().as_millis());
    }
    Ok(report)
}

fn with_input(
    report: &mut Report,
    input: &Input,
    field: Option<Field>,
    body: impl FnOnce(&mut Report, &Bundle) -> mcdef::Result<()>,
) -> Result<mcdef::Result<()>, UsageError> {
    let loaded = read_input(input)?;
    let bundle = parse(&loaded, field)?;
    report.input = Some((loaded.source.clone(), loaded.digest()));
    report.field = Some(bundle.field);
    Ok(body(report, &bundle))
}

fn parse_prime_field(s: &str) -> Result<Field, UsageError> {
    let field: Field = if s.starts_with("Fp:") { s.parse() } else { format!("Fp:{s}").parse() }
        .map_err(|e: Error| UsageError(format!("--field: {e}")))?;
    Ok(field)
}

fn need<'a, T>(x: &'a Option<T>, what: &str) -> mcdef::Result<&'a T> {
    x.as_ref().ok_or_else(|| Error::Parse(format!("input has no {what} section")))
}

fn label_of(l: &Dgla) -> impl Fn(usize) -> String + '_ {
    |i| l.space().label(i).to_string()
}

fn check(report: &mut Report, b: &Bundle) -> mcdef::Result<()> {
    let field = b.field;
    if let Some(l) = &b.dgla {
        let res = check_dgla(l);
        let detail = res.as_ref().err().map(|w| {
            let names: Vec<&str> = w.indices.iter().map(|&i| l.space().label(i)).collect();
            format!("{:?} fails on ({}), defect {}", w.axiom, names.join(", "), vector_text(&w.defect, field, label_of(l)))
        });
        report.verdict("dgla axioms", res.is_ok(), detail);
        report.set("dims", dims(&l.space().dims()));
        if res.is_ok() {
            report.set("cohomology", labelled_cohomology(&l.complex)?);
        }
    }
    if let Some(f) = &b.morphism {
        let t = &f.target;
        let res = check_dgla(t);
        report.verdict("target dgla axioms", res.is_ok(), res.err().map(|w| format!("{:?} fails on basis {:?}", w.axiom, w.indices)));
        let res = check_morphism(f);
        let detail = res.as_ref().err().map(|w| match w {
            mcdef::dgla::MorphismWitness::Differential { index, defect } => format!(
                "does not commute with d on {}, defect {}",
                f.source.space().label(*index),
                vector_text(defect, field, label_of(t))
            ),
            mcdef::dgla::MorphismWitness::Bracket { indices: (i, j), defect } => format!(
                "does not preserve [{}, {}], defect {}",
                f.source.space().label(*i),
                f.source.space().label(*j),
                vector_text(defect, field, label_of(t))
            ),
            mcdef::dgla::MorphismWitness::Shape(s) => s.clone(),
        });
        report.verdict("morphism", res.is_ok(), detail);
        report.set("target_dims", dims(&t.space().dims()));
        report.set("injective", json!(f.is_injective()));
    }
    if let Some(m) = &b.model {
        model_summary(report, m)?;
    }
    Ok(())
}

fn cone(report: &mut Report, b: &Bundle, arity: usize, flip_b1: bool, abelian: Option<usize>) -> mcdef::Result<()> {
    let f = need(&b.morphism, "morphism")?;
    if let Err(w) = check_morphism(f) {
        report.verdict("morphism", false, Some(w.to_string()));
        return Ok(());
    }
    let cone = fm_cone_with(f, arity, FmOptions { flip_b1, trusted: true })?;
    let l = &cone.algebra;
    let space = &l.space;
    report.set("flip_b1", json!(flip_b1));
    report.set("arity", json!(arity));
    report.set("dims", dims(&space.dims()));
    let counts: Vec<Value> = (1..=arity).map(|n| json!([n, l.entry_count(n)])).collect();
    report.set("bracket_entries", Value::Array(counts));
    let mut first_failure = None;
    for n in 1..=arity {
        let res = check_linfty_arity(l, n);
        let detail = res.as_ref().err().map(|w| {
            let names: Vec<&str> = w.indices.iter().map(|&i| space.label(i)).collect();
            format!("fails on ({}), defect {}", names.join(", "), vector_text(&w.defect, b.field, |i| space.label(i).to_string()))
        });
        if res.is_err() && first_failure.is_none() {
            first_failure = Some(n);
        }
        report.verdict(format!("jacobi arity {n}"), res.is_ok(), detail);
    }
    report.set("first_failing_arity", json!(first_failure));
    let complex = l.complex()?;
    report.set("cohomology", labelled_cohomology(&complex)?);
    if let Some(k) = abelian {
        let a = homotopy_abelian_report(l, k)?;
        let detail = a.witness.as_ref().map(|(n, t)| format!("transferred bracket of arity {n} nonzero on cohomology basis {t:?}"));
        report.verdict(format!("homotopy abelian up to arity {k}"), a.is_abelian(), detail);
    }
    Ok(())
}

fn lift_table<P: LiftProblem>(
    report: &mut Report,
    lifter: &Lifter<'_, P>,
    seed: u64,
    order: usize,
    field: Field,
    obstruction_label: impl Fn(&SparseVec) -> Value,
    solution_label: impl Fn(usize) -> String,
) -> mcdef::Result<()> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let first = lifter.random_cocycle(&mut rng, 1);
    let lift = lifter.lift_all(&first, Some(&mut rng))?;
    report.set("tangent_dim", json!(lifter.tangent_dim()));
    report.set("obstruction_dim", json!(lifter.obstruction_space_dim()));
    let basis: Vec<Value> = lifter.obstruction_basis().iter().map(&obstruction_label).collect();
    report.set("obstruction_basis", Value::Array(basis));
    let h = lifter.obstruction_space_dim();
    let rows: Vec<Value> = lift
        .orders
        .iter()
        .map(|o| {
            let comps: Vec<Value> = o
                .components
                .iter()
                .map(|(m, v)| json!([mcdef::artin::monomial_label(m), coords(v, h, field)]))
                .collect();
            json!({ "order": o.order, "zero": o.is_zero(), "components": comps })
        })
        .collect();
    report.set("obstructions", Value::Array(rows));
    report.set("solution", tensor(&lift.solution, field, solution_label));
    let detail = lift.orders.iter().find(|o| !o.is_zero()).map(|o| format!("nonzero obstruction at order {}", o.order));
    report.verdict(format!("unobstructed to order {order}"), lift.unobstructed(), detail);
    Ok(())
}

fn mc_lift(report: &mut Report, b: &Bundle, order: usize, vars: usize, seed: u64, use_cone: bool) -> mcdef::Result<()> {
    if order < 1 {
        return Err(Error::Invalid("--order must be at least 1".into()));
    }
    let field = b.field;
    let alg = ArtinAlgebra::truncated(vars, order + 1, field)?;
    report.set("algebra", json!({ "vars": vars, "nilpotency": order + 1 }));
    report.set("seed", json!(seed));
    if use_cone {
        let f = need(&b.morphism, "morphism")?;
        let cone = fm_cone_with(f, order.max(2), FmOptions::default())?;
        let space = cone.algebra.space.clone();
        let problem = LinftyProblem::new(&cone.algebra);
        let lifter = Lifter::new(&problem, &alg)?;
        let label = |k: i32| {
            let s = space.clone();
            move |i: usize| s.label(s.global(k, i)).to_string()
        };
        return lift_table(report, &lifter, seed, order, field, |v| vector(v, field, label(2)), label(1));
    }
    let l = need(&b.dgla, "dgla")?;
    if let Err(w) = check_dgla(l) {
        report.verdict("dgla axioms", false, Some(w.to_string()));
        return Ok(());
    }
    let problem = DglaProblem::new(l);
    let lifter = Lifter::new(&problem, &alg)?;
    let space = l.space();
    let label = |k: i32| move |i: usize| space.label(space.global(k, i)).to_string();
    lift_table(report, &lifter, seed, order, field, |v| vector(v, field, label(2)), label(1))
}

fn enumerate(report: &mut Report, b: &Bundle, other: Option<&Bundle>, order: usize, vars: usize, guard: u64) -> mcdef::Result<()> {
    let l = need(&b.dgla, "dgla")?;
    let field = b.field;
    let alg = ArtinAlgebra::truncated(vars, order + 1, field)?;
    report.set("algebra", json!({ "vars": vars, "nilpotency": order + 1 }));
    if let Err(w) = check_dgla(l) {
        report.verdict("dgla axioms", false, Some(w.to_string()));
        return Ok(());
    }
    let e = enumerate_def_with_guard(l, &alg, guard)?;
    report.set("candidates", json!(e.candidates));
    report.set("mc_count", json!(e.mc_count));
    report.set("orbit_count", json!(e.orbit_count));
    let orbits: Vec<Value> = e
        .orbits
        .iter()
        .map(|(rep, size)| json!({ "size": size, "representative": tensor(rep, field, label_of(l)) }))
        .collect();
    report.set("orbits", Value::Array(orbits));
    report.verdict("orbit sizes sum to the Maurer-Cartan count", e.orbits.iter().map(|o| o.1).sum::<usize>() == e.mc_count, None);
    if let Some(o) = other {
        let m = need(&o.dgla, "dgla")?;
        let e2 = enumerate_def_with_guard(m, &alg, guard)?;
        report.set("compare", json!({ "candidates": e2.candidates, "mc_count": e2.mc_count, "orbit_count": e2.orbit_count }));
        report.verdict(
            "orbit counts agree",
            e.orbit_count == e2.orbit_count,
            Some(format!("{} vs {}", e.orbit_count, e2.orbit_count)),
        );
    }
    Ok(())
}

fn model_summary(report: &mut Report, m: &ModelBundle) -> mcdef::Result<()> {
    let field = m.model.field();
    let forms = &m.model.forms;
    let label = |i: usize| forms.space().label(i).to_string();
    report.set("generators", json!(m.model.n()));
    let named: Vec<Value> = m
        .forms
        .iter()
        .map(|(name, v, s)| json!({ "name": name, "structure": s, "value": vector(v, field, label) }))
        .collect();
    report.set("forms", Value::Array(named));
    let degrees: Vec<i32> = m.phi.degrees();
    report.set("structure_degrees", json!(degrees));
    report.set("model_cohomology", labelled_cohomology(&m.model.complex)?);
    for (name, v, _) in &m.forms {
        report.verdict(format!("{name} is closed"), m.model.d(v).is_zero(), None);
    }
    report.verdict("structure form is nonzero", !m.phi.value.is_zero(), None);
    Ok(())
}

fn model(report: &mut Report, b: &Bundle, preset: PresetName) -> mcdef::Result<()> {
    let m = need(&b.model, "model")?;
    model_summary(report, m)?;
    let built = build_preset(preset.preset())?;
    for (name, ok) in &built.checks {
        report.verdict(name.clone(), *ok, None);
    }
    let same = built.phi == m.phi && built.model.de == m.model.de;
    report.verdict("file matches the built-in construction", same, None);
    Ok(())
}

fn goto(report: &mut Report, b: &Bundle) -> mcdef::Result<()> {
    let m = need(&b.model, "model")?;
    let model = &m.model;
    let field = model.field();
    let der = der_dgla(model, -1..=model.n() as i32 - 1)?;
    let stab = stab_dgla(&der, &m.phi)?;
    report.set("der_dims", dims(&der.dgla.space().dims()));
    report.set("stab_dims", dims(&stab.dims()));
    report.set("warnings", json!(stab.warnings));
    let g = match goto_complex(&der, &m.phi) {
        Ok(g) => g,
        Err(e @ Error::Model(_)) => {
            report.verdict("d preserves the orbit image", false, Some(e.to_string()));
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    report.verdict("d preserves the orbit image", true, None);
    report.set("goto_dims", dims(&g.dims()));
    let forms = &model.forms;
    let h = report::cohomology(&g.complex, |k, r| {
        let v = g.term(k).map(|t| t.vector(r)).unwrap_or_default();
        vector(&v, field, |i| forms.space().label(i).to_string())
    })?;
    report.set("goto_cohomology", h);
    Ok(())
}

fn injectivity(report: &mut Report, b: &Bundle, opts: &InjectivityOptions) -> mcdef::Result<()> {
    let m = need(&b.model, "model")?;
    let field = m.model.field();
    if !m.phi.is_closed(&m.model) {
        report.verdict("structure form is closed", false, None);
        return Ok(());
    }
    let r = injectivity_check(&m.model, &m.phi, opts)?;
    report.set("order", json!(opts.order));
    report.set("seed", json!(opts.seed));
    report.set("der_dims", dims(&r.der_dims));
    report.set("stab_dims", dims(&r.stab_dims));
    report.set("goto_dims", dims(&r.goto_dims));
    report.set("source_cohomology", dims(&r.source_cohomology));
    report.set("target_cohomology", dims(&r.target_cohomology));
    report.set("ranks", dims(&r.ranks));
    report.set("warnings", json!(r.warnings));
    let detail = r
        .source_cohomology
        .iter()
        .find(|(k, d)| r.ranks.get(k) != Some(d))
        .map(|(k, d)| format!("degree {k}: rank {} < {d}", r.ranks.get(k).copied().unwrap_or(0)));
    report.verdict("injective on cone cohomology", r.injective, detail);
    if let Some(e) = &r.explicit_ranks {
        report.set("explicit_ranks", dims(e));
    }
    if let Some(ok) = r.explicit_agrees() {
        report.verdict("explicit cone ranks agree", ok, None);
    }
    match &r.abelian {
        AbelianStatus::Verified { arity } => report.verdict(format!("endomorphism cone homotopy abelian to arity {arity}"), true, None),
        AbelianStatus::Failed { arity } => report.verdict(format!("endomorphism cone homotopy abelian to arity {arity}"), false, None),
        AbelianStatus::Skipped { reason } => report.set("abelian_skipped", json!(reason)),
    }
    let forms = &m.model.forms;
    let label = |i: usize| forms.space().label(i).to_string();
    let basis: Vec<Value> = r.obstruction_basis.iter().map(|v| vector(v, field, label)).collect();
    report.set("obstruction_basis", Value::Array(basis));
    let h = r.obstruction_basis.len();
    let rows: Vec<Value> = r
        .lifting
        .orders
        .iter()
        .map(|o| {
            let comps: Vec<Value> =
                o.components.iter().map(|(mono, v)| json!([mcdef::artin::monomial_label(mono), coords(v, h, field)])).collect();
            json!({ "order": o.order, "zero": o.is_zero(), "components": comps })
        })
        .collect();
    report.set("obstructions", Value::Array(rows));
    let der = der_dgla(&m.model, -1..=m.model.n() as i32 - 1)?;
    let dlabel = |i: usize| der.basis.space.label(der.basis.space.global(0, i)).to_string();
    report.set("solution", tensor(&r.lifting.solution, field, dlabel));
    report.verdict(format!("unobstructed to order {}", opts.order), r.lifting.unobstructed(), None);
    Ok(())
}

/// Runs the command and renders the report; returns the exit code and text.
pub fn execute(cli: &Cli, args: Vec<String>) -> (i32, Result<String, String>) {
    if let Command::Model { preset, emit: true } = &cli.command {
        return (0, Ok(preset.text().to_string()));
    }
    match run(cli, args) {
        Ok(report) => {
            let code = if report.passed() { 0 } else { 1 };
            let text = if cli.text { report.render_text() } else { report.render_json() };
            (code, Ok(text))
        }
        Err(e) => (2, Err(e.0)),
    }
}
