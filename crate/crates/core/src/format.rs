//! JSON algebra files: DGLAs, morphisms and Chevalley–Eilenberg models with
//! exact coefficients written as strings (`"3/7"`, `"1+2i"`, `"4"`).

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dgla::{BracketTable, Dgla, DglaMorphism};
use crate::error::{Error, Result};
use crate::geom::{CdgaModel, FormAlgebra, GeometricForm, PresetModel};
use crate::graded::{CochainComplex, GradedMap, GradedSpace};
use crate::linalg::{SparseMatrix, SparseVec};
use crate::scalar::{Field, Scalar};

/// A coefficient: an integer or an exact scalar string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coef {
    Int(i64),
    Text(String),
}

impl Coef {
    fn parse(&self, field: Field) -> Result<Scalar> {
        match self {
            Coef::Int(n) => Ok(field.from_int(*n)),
            Coef::Text(s) => field.parse_scalar(s),
        }
    }

    fn of(c: &Scalar, field: Field) -> Coef {
        Coef::Text(c.coerce(field).to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DglaSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// `[degree, dimension]`
    pub dims: Vec<(i32, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    /// `[degree, row, col, c]`: `d x^k_col` has coefficient `c` on `x^{k+1}_row`.
    #[serde(default)]
    pub differential: Vec<(i32, usize, usize, Coef)>,
    /// `[a, b, i, j, k, c]`: `[x^a_i, x^b_j]` has coefficient `c` on `x^{a+b}_k`.
    /// Pairs listed in one order only are completed by graded antisymmetry.
    #[serde(default)]
    pub brackets: Vec<(i32, i32, usize, usize, usize, Coef)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    pub target: DglaSpec,
    /// `[degree, row, col, c]`: `f x^k_col` has coefficient `c` on `y^k_row`.
    pub map: Vec<(i32, usize, usize, Coef)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormSpec {
    pub name: String,
    /// `[[i, j, …], c]` with 1-based generator indices.
    pub terms: Vec<(Vec<usize>, Coef)>,
    /// Whether the form is a summand of the structure form `Φ`.
    #[serde(default = "yes")]
    pub structure: bool,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub generators: usize,
    /// `[g, [i, j], c]`: `d e^g` has coefficient `c` on `e^i ∧ e^j` (1-based).
    #[serde(default)]
    pub differentials: Vec<(usize, (usize, usize), Coef)>,
    #[serde(default)]
    pub forms: Vec<FormSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dgla: Option<DglaSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub morphism: Option<MorphismSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
}

/// A model with its named forms and the structure form.
#[derive(Clone, Debug)]
pub struct ModelBundle {
    pub model: Arc<CdgaModel>,
    pub forms: Vec<(String, SparseVec, bool)>,
    pub phi: GeometricForm,
}

/// Validated contents of an algebra file.
#[derive(Clone, Debug)]
pub struct Bundle {
    pub field: Field,
    pub dgla: Option<Arc<Dgla>>,
    pub morphism: Option<DglaMorphism>,
    pub model: Option<ModelBundle>,
}

fn at(path: &str, e: Error) -> Error {
    Error::Parse(format!("{path}: {}", e.to_string().trim_start_matches("parse error: ")))
}

fn local_index(space: &GradedSpace, path: &str, degree: i32, i: usize) -> Result<usize> {
    let dim = space.dim(degree);
    if i >= dim {
        return Err(Error::Parse(format!("{path}: index {i} out of range for degree {degree} (dimension {dim})")));
    }
    Ok(space.offset(degree) + i)
}

fn build_space(spec: &DglaSpec, field: Field, path: &str) -> Result<GradedSpace> {
    let mut dims = BTreeMap::new();
    for (n, &(k, d)) in spec.dims.iter().enumerate() {
        if dims.insert(k, d).is_some() {
            return Err(Error::Parse(format!("{path}.dims[{n}]: degree {k} listed twice")));
        }
    }
    match &spec.labels {
        Some(labels) => {
            let total: usize = dims.values().sum();
            if labels.len() != total {
                return Err(Error::Parse(format!("{path}.labels: {} labels for dimension {total}", labels.len())));
            }
            Ok(GradedSpace::with_labels(field, &dims, labels.clone()))
        }
        None => Ok(GradedSpace::new(field, &dims)),
    }
}

fn build_dgla(spec: &DglaSpec, field: Field, path: &str) -> Result<Dgla> {
    let space = build_space(spec, field, path)?;
    let n = space.total_dim();
    let mut d = SparseMatrix::zeros(n, n, field);
    for (e, (k, row, col, c)) in spec.differential.iter().enumerate() {
        let p = format!("{path}.differential[{e}]");
        let r = local_index(&space, &p, k + 1, *row)?;
        let cl = local_index(&space, &p, *k, *col)?;
        d.add_at(r, cl, &c.parse(field).map_err(|e| at(&p, e))?);
    }
    let complex = CochainComplex::new(space.clone(), d).map_err(|e| at(&format!("{path}.differential"), e))?;
    let mut given: BracketTable = BTreeMap::new();
    for (e, (a, b, i, j, k, c)) in spec.brackets.iter().enumerate() {
        let p = format!("{path}.brackets[{e}]");
        let gi = local_index(&space, &p, *a, *i)?;
        let gj = local_index(&space, &p, *b, *j)?;
        let gk = local_index(&space, &p, a + b, *k)?;
        given.entry((gi, gj)).or_default().add_at(gk, &c.parse(field).map_err(|e| at(&p, e))?);
    }
    let mut table = given.clone();
    for (&(i, j), v) in &given {
        if !given.contains_key(&(j, i)) {
            let s = Scalar::sign((space.degree_of(i) * space.degree_of(j)) as i64 + 1);
            table.insert((j, i), v.scaled(&s));
        }
    }
    table.retain(|_, v| !v.is_zero());
    Ok(Dgla::from_table(complex, table))
}

fn build_model(spec: &ModelSpec, field: Field) -> Result<ModelBundle> {
    let n = spec.generators;
    let forms = FormAlgebra::new(n, field).map_err(|e| at("model.generators", e))?;
    let gen = |p: &str, g: usize| {
        if g == 0 || g > n {
            Err(Error::Parse(format!("{p}: generator e{g} out of range 1..={n}")))
        } else {
            Ok(g - 1)
        }
    };
    let mut de = vec![SparseVec::new(); n];
    for (e, (g, (i, j), c)) in spec.differentials.iter().enumerate() {
        let p = format!("model.differentials[{e}]");
        let g = gen(&p, *g)?;
        let mono = forms.monomial(&[gen(&p, *i)?, gen(&p, *j)?]);
        if mono.is_zero() {
            return Err(Error::Parse(format!("{p}: e{i}∧e{j} vanishes")));
        }
        de[g].add_scaled(&mono, &c.parse(field).map_err(|e| at(&p, e))?);
    }
    let name = spec.name.clone().unwrap_or_else(|| "model".into());
    let model = CdgaModel::from_differentials(&name, field, de).map_err(|e| at("model.differentials", e))?;
    let mut out = Vec::new();
    let mut phi = SparseVec::new();
    for (e, f) in spec.forms.iter().enumerate() {
        let mut v = SparseVec::new();
        for (t, (gens, c)) in f.terms.iter().enumerate() {
            let p = format!("model.forms[{e}].terms[{t}]");
            let idx: Vec<usize> = gens.iter().map(|&g| gen(&p, g)).collect::<Result<_>>()?;
            v.add_scaled(&model.forms.monomial(&idx), &c.parse(field).map_err(|e| at(&p, e))?);
        }
        if f.structure {
            phi = phi.add(&v);
        }
        out.push((f.name.clone(), v, f.structure));
    }
    let phi = GeometricForm::new(&model, phi);
    Ok(ModelBundle { model: Arc::new(model), forms: out, phi })
}

/// Parses and validates an algebra file.
pub fn parse_algebra_file(text: &str) -> Result<Bundle> {
    parse_algebra_file_with(text, None)
}

/// As [`parse_algebra_file`], reading every coefficient in `field` instead
/// of the declared one (rational coefficients reduce modulo `p`).
pub fn parse_algebra_file_with(text: &str, field: Option<Field>) -> Result<Bundle> {
    let file: AlgebraFile = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
    let declared: Field = file.field.parse().map_err(|e| at("field", e))?;
    let field = field.unwrap_or(declared);
    let dgla = match &file.dgla {
        Some(spec) => Some(Arc::new(build_dgla(spec, field, "dgla")?)),
        None => None,
    };
    let morphism = match &file.morphism {
        Some(spec) => {
            let source = dgla.clone().ok_or_else(|| Error::Parse("morphism: needs a source dgla section".into()))?;
            let target = Arc::new(build_dgla(&spec.target, field, "morphism.target")?);
            let (s, t) = (source.space(), target.space());
            let mut m = SparseMatrix::zeros(t.total_dim(), s.total_dim(), field);
            for (e, (k, row, col, c)) in spec.map.iter().enumerate() {
                let p = format!("morphism.map[{e}]");
                let r = local_index(t, &p, *k, *row)?;
                let cl = local_index(s, &p, *k, *col)?;
                m.add_at(r, cl, &c.parse(field).map_err(|e| at(&p, e))?);
            }
            let map = GradedMap::new(s.clone(), t.clone(), 0, m).map_err(|e| at("morphism.map", e))?;
            Some(DglaMorphism::new(source, target, map))
        }
        None => None,
    };
    let model = match &file.model {
        Some(spec) => Some(build_model(spec, field)?),
        None => None,
    };
    if dgla.is_none() && model.is_none() {
        return Err(Error::Parse("file has neither a dgla nor a model section".into()));
    }
    Ok(Bundle { field, dgla, morphism, model })
}

/// File representation of a DGLA; bracket pairs are written once when the
/// reverse order follows by antisymmetry.
pub fn dgla_spec(l: &Dgla, name: Option<&str>) -> DglaSpec {
    let space = l.space();
    let field = l.field();
    let local = |i: usize| i - space.offset(space.degree_of(i));
    let mut differential = Vec::new();
    for (r, c, x) in l.complex.differential.matrix.entries() {
        differential.push((space.degree_of(c), local(r), local(c), Coef::of(x, field)));
    }
    differential.sort_by(|a, b| (a.0, a.2, a.1).cmp(&(b.0, b.2, b.1)));
    let table = l.table();
    let mut brackets = Vec::new();
    for (&(i, j), v) in &table {
        if i > j {
            let s = Scalar::sign((space.degree_of(i) * space.degree_of(j)) as i64 + 1);
            if table.get(&(j, i)).map(|w| w.scaled(&s)) == Some(v.clone()) {
                continue;
            }
        }
        let (a, b) = (space.degree_of(i), space.degree_of(j));
        for (k, c) in v.iter() {
            brackets.push((a, b, local(i), local(j), local(k), Coef::of(c, field)));
        }
    }
    let labels = space.labels().to_vec();
    let default = GradedSpace::new(field, &space.dims());
    DglaSpec {
        name: name.map(str::to_string),
        dims: space.dims().into_iter().collect(),
        labels: (labels != default.labels()).then_some(labels),
        differential,
        brackets,
    }
}

pub fn morphism_spec(f: &DglaMorphism, target_name: Option<&str>) -> MorphismSpec {
    let (s, t) = (f.source.space(), f.target.space());
    let field = s.field();
    let mut map: Vec<_> = f
        .map
        .matrix
        .entries()
        .map(|(r, c, x)| {
            let k = s.degree_of(c);
            (k, r - t.offset(k), c - s.offset(k), Coef::of(x, field))
        })
        .collect();
    map.sort_by(|a, b| (a.0, a.2, a.1).cmp(&(b.0, b.2, b.1)));
    MorphismSpec { target: dgla_spec(&f.target, target_name), map }
}

pub fn model_spec(model: &CdgaModel, forms: &[(String, SparseVec, bool)]) -> ModelSpec {
    let f = &model.forms;
    let field = model.field();
    let gens = |i: usize| -> Vec<usize> { (0..f.n()).filter(|b| f.mask(i) >> b & 1 == 1).map(|b| b + 1).collect() };
    let mut differentials = Vec::new();
    for (g, v) in model.de.iter().enumerate() {
        for (i, c) in v.iter() {
            let ij = gens(i);
            differentials.push((g + 1, (ij[0], ij[1]), Coef::of(c, field)));
        }
    }
    let forms = forms
        .iter()
        .map(|(name, v, structure)| FormSpec {
            name: name.clone(),
            terms: v.iter().map(|(i, c)| (gens(i), Coef::of(c, field))).collect(),
            structure: *structure,
        })
        .collect();
    ModelSpec { name: Some(model.name.clone()), generators: f.n(), differentials, forms }
}

impl AlgebraFile {
    pub fn from_dgla(l: &Dgla) -> Self {
        AlgebraFile { field: l.field().name(), dgla: Some(dgla_spec(l, None)), morphism: None, model: None }
    }

    pub fn from_morphism(f: &DglaMorphism) -> Self {
        AlgebraFile {
            field: f.source.field().name(),
            dgla: Some(dgla_spec(&f.source, Some("source"))),
            morphism: Some(morphism_spec(f, Some("target"))),
            model: None,
        }
    }

    pub fn from_preset(p: &PresetModel) -> Self {
        let forms: Vec<_> = p.forms.iter().map(|(n, v)| (n.clone(), v.clone(), true)).collect();
        AlgebraFile { field: p.model.field().name(), dgla: None, morphism: None, model: Some(model_spec(&p.model, &forms)) }
    }

    pub fn to_json(&self) -> String {
        render_json(&serde_json::to_value(self).expect("serializable"))
    }
}

/// Indented JSON that keeps arrays and objects on one line when they fit.
pub fn render_json(v: &Value) -> String {
    let mut s = String::new();
    write_value(&mut s, v, 0);
    s.push('\n');
    s
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let compact = v.to_string();
    let pad = "  ".repeat(indent + 1);
    match v {
        Value::Array(items) if !items.is_empty() && indent * 2 + compact.len() > 100 => {
            out.push_str("[\n");
            for (n, item) in items.iter().enumerate() {
                out.push_str(&pad);
                write_value(out, item, indent + 1);
                out.push_str(if n + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        Value::Object(map) if !map.is_empty() && (indent == 0 || indent * 2 + compact.len() > 100) => {
            out.push_str("{\n");
            for (n, (k, item)) in map.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(out, item, indent + 1);
                out.push_str(if n + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
        _ => out.push_str(&compact),
    }
}
