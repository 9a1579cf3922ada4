//! JSON problem files: schema, ingestion into validated models, and the
//! canonical JSON form of cochains.
//!
//! Polynomials and forms are written as strings in the grammar accepted by
//! [`LocalizedPoly::parse`] and [`DiffForm::parse`]. Every error names the
//! offending field by JSON pointer.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::cech::OmegaCochain;
use crate::chern::EndoCochain;
use crate::cover::{validate_cover, CoverBuilder, CoverModel, GlobalMF, LocalConnections, Simplex};
use crate::exactring::{LocalizedPoly, Ring, RingMap};
use crate::forms::DiffForm;
use crate::matrix::{FormMatrix, Matrix, PolyMatrix};
use crate::mfcore::{Connection, GradedMatrix, MatrixFactorization};

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error("invalid value at {pointer}: {message}")]
    Field { pointer: String, message: String },
    #[error("validation failed:\n{0}")]
    Validation(String),
}

impl ProblemError {
    /// Whether the input was readable but rejected.
    pub fn is_invalid_input(&self) -> bool {
        !matches!(self, ProblemError::Io { .. })
    }
}

fn field(pointer: impl Into<String>) -> impl FnOnce(&dyn Display) -> ProblemError {
    let pointer = pointer.into();
    move |e| ProblemError::Field {
        pointer,
        message: e.to_string(),
    }
}

fn escape(token: &str) -> String {
    token.replace('~', "~0").replace('/', "~1")
}

/// Matrix of poly or form strings, row-major.
pub type StringMatrix = Vec<Vec<String>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSpec {
    pub name: String,
    pub variables: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inverted: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverlapSpec {
    pub members: Vec<String>,
    pub variables: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inverted: Vec<String>,
    /// Keyed by a member chart, or by a comma-separated face of several members;
    /// each map sends the face's variables to poly strings in the overlap ring.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub restrictions: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationSpec {
    pub e0: StringMatrix,
    pub e1: StringMatrix,
}

/// `g0`, `g1` over the ring of the pair overlap, with `e(from) = g e(to) g⁻¹`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionSpec {
    pub from: String,
    pub to: String,
    pub g0: StringMatrix,
    pub g1: StringMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MfSpec {
    pub rank0: usize,
    pub rank1: usize,
    pub charts: BTreeMap<String, PresentationSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub transitions: Vec<TransitionSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionSpec {
    #[serde(rename = "A0")]
    pub a0: StringMatrix,
    #[serde(rename = "A1")]
    pub a1: StringMatrix,
}

/// One entry of an endomorphism cochain, written in the frame of the tuple's
/// first chart. Omitted blocks are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndoEntrySpec {
    pub tuple: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b00: Option<StringMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b01: Option<StringMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b10: Option<StringMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b11: Option<StringMatrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub charts: Vec<ChartSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub overlaps: Vec<OverlapSpec>,
    /// Charts left out get the potential transported along restriction maps.
    pub potential: BTreeMap<String, String>,
    pub mf: MfSpec,
    /// Charts left out get the trivial connection.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub connections: BTreeMap<String, ConnectionSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub endo: BTreeMap<String, Vec<EndoEntrySpec>>,
}

fn deserialize_at<T: serde::de::DeserializeOwned>(value: Value) -> Result<T, ProblemError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let mut pointer = String::new();
        for seg in e.path().iter() {
            use serde_path_to_error::Segment;
            match seg {
                Segment::Seq { index } => pointer.push_str(&format!("/{index}")),
                Segment::Map { key } => pointer.push_str(&format!("/{}", escape(key))),
                Segment::Enum { variant } => pointer.push_str(&format!("/{}", escape(variant))),
                Segment::Unknown => {}
            }
        }
        ProblemError::Schema {
            pointer: if pointer.is_empty() { "/".into() } else { pointer },
            message: e.into_inner().to_string(),
        }
    })
}

impl ProblemFile {
    pub fn from_json_str(src: &str) -> Result<Self, ProblemError> {
        let value: Value = serde_json::from_str(src).map_err(|e| ProblemError::Schema {
            pointer: "/".into(),
            message: e.to_string(),
        })?;
        deserialize_at(value)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

/// A validated model with everything the commands operate on.
#[derive(Debug, Clone)]
pub struct Problem {
    pub model: CoverModel,
    pub mf: GlobalMF,
    pub connections: LocalConnections,
    pub endos: BTreeMap<String, EndoCochain>,
}

fn poly_matrix(ring: &Arc<Ring>, rows: &StringMatrix, shape: (usize, usize), at: &str) -> Result<PolyMatrix, ProblemError> {
    if rows.len() != shape.0 {
        return Err(field(at)(&format!("expected {} rows, found {}", shape.0, rows.len())));
    }
    let mut parsed = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (j, s) in row.iter().enumerate() {
            out.push(LocalizedPoly::parse(ring, s).map_err(|e| field(format!("{at}/{i}/{j}"))(&e))?);
        }
        parsed.push(out);
    }
    Matrix::from_rows(ring, parsed, shape.1).map_err(|e| field(at)(&e))
}

fn form_matrix(ring: &Arc<Ring>, rows: &StringMatrix, shape: (usize, usize), at: &str) -> Result<FormMatrix, ProblemError> {
    if rows.len() != shape.0 {
        return Err(field(at)(&format!("expected {} rows, found {}", shape.0, rows.len())));
    }
    let mut parsed = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (j, s) in row.iter().enumerate() {
            out.push(DiffForm::parse(ring, s).map_err(|e| field(format!("{at}/{i}/{j}"))(&e))?);
        }
        parsed.push(out);
    }
    Matrix::from_rows(ring, parsed, shape.1).map_err(|e| field(at)(&e))
}

fn tuple_of(model: &CoverModel, names: &[String], at: &str) -> Result<Simplex, ProblemError> {
    let mut idx = Vec::with_capacity(names.len());
    for (k, n) in names.iter().enumerate() {
        idx.push(model.chart_index(n).map_err(|e| field(format!("{at}/{k}"))(&e))?);
    }
    Simplex::new(idx).ok_or_else(|| field(at)(&"tuple must list distinct charts"))
}

impl Problem {
    pub fn load(path: &Path) -> Result<Self, ProblemError> {
        let src = std::fs::read_to_string(path).map_err(|e| ProblemError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_json_str(&src)
    }

    pub fn from_json_str(src: &str) -> Result<Self, ProblemError> {
        Self::from_spec(&ProblemFile::from_json_str(src)?)
    }

    /// Builds the model, runs factorization and cover validation, and parses
    /// connections and endomorphism cochains.
    pub fn from_spec(spec: &ProblemFile) -> Result<Self, ProblemError> {
        let model = build_model(spec)?;
        let (r0, r1) = (spec.mf.rank0, spec.mf.rank1);

        for name in spec.mf.charts.keys() {
            model.chart_index(name).map_err(|e| field(format!("/mf/charts/{}", escape(name)))(&e))?;
        }
        let mut presentations = Vec::with_capacity(model.num_charts());
        for (i, chart) in model.charts().iter().enumerate() {
            let at = format!("/mf/charts/{}", escape(&chart.name));
            let p = spec
                .mf
                .charts
                .get(&chart.name)
                .ok_or_else(|| field(at.clone())(&"missing presentation for this chart"))?;
            let e0 = poly_matrix(&chart.ring, &p.e0, (r1, r0), &format!("{at}/e0"))?;
            let e1 = poly_matrix(&chart.ring, &p.e1, (r0, r1), &format!("{at}/e1"))?;
            let mf = MatrixFactorization::new(e0, e1, model.chart_potential(i).clone()).map_err(|e| field(at)(&e))?;
            presentations.push(mf);
        }

        let mut transitions = Vec::with_capacity(spec.mf.transitions.len());
        for (k, t) in spec.mf.transitions.iter().enumerate() {
            let at = format!("/mf/transitions/{k}");
            let i = model.chart_index(&t.from).map_err(|e| field(format!("{at}/from"))(&e))?;
            let j = model.chart_index(&t.to).map_err(|e| field(format!("{at}/to"))(&e))?;
            let pair = Simplex::new(vec![i, j]).ok_or_else(|| field(at.clone())(&"transition needs two distinct charts"))?;
            let ring = model.ring_of(&pair).map_err(|e| field(at.clone())(&e))?;
            let g0 = poly_matrix(ring, &t.g0, (r0, r0), &format!("{at}/g0"))?;
            let g1 = poly_matrix(ring, &t.g1, (r1, r1), &format!("{at}/g1"))?;
            transitions.push(((i, j), g0, g1));
        }
        let mf = GlobalMF::new(&model, presentations, transitions).map_err(|e| field("/mf")(&e))?;
        validate_cover(&model, &mf).map_err(|report| ProblemError::Validation(report.to_string()))?;

        for name in spec.connections.keys() {
            model.chart_index(name).map_err(|e| field(format!("/connections/{}", escape(name)))(&e))?;
        }
        let mut conns = Vec::with_capacity(model.num_charts());
        for chart in model.charts() {
            let Some(c) = spec.connections.get(&chart.name) else {
                conns.push(Connection::trivial(&chart.ring, r0, r1));
                continue;
            };
            let at = format!("/connections/{}", escape(&chart.name));
            let a0 = form_matrix(&chart.ring, &c.a0, (r0, r0), &format!("{at}/A0"))?;
            let a1 = form_matrix(&chart.ring, &c.a1, (r1, r1), &format!("{at}/A1"))?;
            conns.push(Connection::new(a0, a1).map_err(|e| field(at)(&e))?);
        }
        let connections = LocalConnections::new(&model, &mf, conns).map_err(|e| field("/connections")(&e))?;

        let mut endos = BTreeMap::new();
        for (key, entries) in &spec.endo {
            let base = format!("/endo/{}", escape(key));
            let mut cochain = EndoCochain::new();
            for (k, entry) in entries.iter().enumerate() {
                let at = format!("{base}/{k}");
                let s = tuple_of(&model, &entry.tuple, &format!("{at}/tuple"))?;
                let ring = model.ring_of(&s).map_err(|e| field(format!("{at}/tuple"))(&e))?;
                let block = |b: &Option<StringMatrix>, name: &str, shape| match b {
                    Some(rows) => form_matrix(ring, rows, shape, &format!("{at}/{name}")),
                    None => Ok(Matrix::zeros(ring, shape.0, shape.1)),
                };
                let f = GradedMatrix::from_blocks(
                    block(&entry.b00, "b00", (r0, r0))?,
                    block(&entry.b01, "b01", (r0, r1))?,
                    block(&entry.b10, "b10", (r1, r0))?,
                    block(&entry.b11, "b11", (r1, r1))?,
                )
                .map_err(|e| field(at.clone())(&e))?;
                cochain.insert(&model, &mf, s, f).map_err(|e| field(at)(&e))?;
            }
            endos.insert(key.clone(), cochain);
        }

        Ok(Problem {
            model,
            mf,
            connections,
            endos,
        })
    }
}

fn build_model(spec: &ProblemFile) -> Result<CoverModel, ProblemError> {
    let mut b = CoverBuilder::new();
    for (k, c) in spec.charts.iter().enumerate() {
        let at = format!("/charts/{k}");
        let ring = Ring::new(c.variables.iter().cloned(), &c.inverted).map_err(|e| field(format!("{at}/variables"))(&e))?;
        b.chart(&c.name, ring).map_err(|e| field(format!("{at}/name"))(&e))?;
    }
    for (k, o) in spec.overlaps.iter().enumerate() {
        let at = format!("/overlaps/{k}");
        let mut members = Vec::with_capacity(o.members.len());
        for (m, name) in o.members.iter().enumerate() {
            members.push(b.chart_index(name).map_err(|e| field(format!("{at}/members/{m}"))(&e))?);
        }
        let ring = Ring::new(o.variables.iter().cloned(), &o.inverted).map_err(|e| field(format!("{at}/variables"))(&e))?;
        let mut maps = Vec::with_capacity(o.restrictions.len());
        for (face_key, images) in &o.restrictions {
            let rat = format!("{at}/restrictions/{}", escape(face_key));
            let mut face = Vec::new();
            for name in face_key.split(',').map(str::trim) {
                let idx = b.chart_index(name).map_err(|e| field(rat.clone())(&e))?;
                if !members.contains(&idx) {
                    return Err(field(rat)(&format!("`{name}` is not a member of this overlap")));
                }
                face.push(idx);
            }
            let face = Simplex::new(face).ok_or_else(|| field(rat.clone())(&"face lists a chart twice"))?;
            let source = if face.degree() == 0 {
                b.chart_ring(face.first()).map_err(|e| field(rat.clone())(&e))?.clone()
            } else {
                let listed = spec.overlaps.iter().find(|other| {
                    let mut idx: Vec<usize> = other.members.iter().filter_map(|n| b.chart_index(n).ok()).collect();
                    idx.sort_unstable();
                    idx == face.members()
                });
                let other = listed.ok_or_else(|| field(rat.clone())(&"face overlap is not listed"))?;
                Ring::new(other.variables.iter().cloned(), &other.inverted).map_err(|e| field(rat.clone())(&e))?
            };
            let mut parsed = Vec::with_capacity(images.len());
            for (var, img) in images {
                let p = LocalizedPoly::parse(&ring, img).map_err(|e| field(format!("{rat}/{}", escape(var)))(&e))?;
                parsed.push((var.as_str(), p));
            }
            let map = RingMap::from_named(&source, &ring, parsed).map_err(|e| field(rat)(&e))?;
            maps.push((face, map));
        }
        b.overlap(&members, ring, maps).map_err(|e| field(at)(&e))?;
    }
    for (name, w) in &spec.potential {
        let at = format!("/potential/{}", escape(name));
        let idx = b.chart_index(name).map_err(|e| field(at.clone())(&e))?;
        let ring = b.chart_ring(idx).map_err(|e| field(at.clone())(&e))?.clone();
        let w = LocalizedPoly::parse(&ring, w).map_err(|e| field(at)(&e))?;
        b.potential(idx, w);
    }
    b.build().map_err(|e| ProblemError::Validation(e.to_string()))
}

/// Canonical JSON of a cochain: `{"entries": [[[tuple names, form degree], form string], ...]}`,
/// ordered by tuple and then by form degree.
pub fn cochain_to_json(model: &CoverModel, c: &OmegaCochain) -> Value {
    let entries: Vec<Value> = c
        .components()
        .into_iter()
        .map(|(s, q, f)| {
            let names: Vec<&str> = s.members().iter().map(|&i| model.chart_name(i)).collect();
            json!([[names, q], f.to_string()])
        })
        .collect();
    json!({ "entries": entries })
}

pub fn cochain_from_json(model: &CoverModel, value: &Value) -> Result<OmegaCochain, ProblemError> {
    let entries = value
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| ProblemError::Schema {
            pointer: "/entries".into(),
            message: "expected an array of [[tuple, degree], form] pairs".into(),
        })?;
    let mut out = OmegaCochain::new();
    for (k, entry) in entries.iter().enumerate() {
        let at = format!("/entries/{k}");
        let schema = |pointer: String| ProblemError::Schema {
            pointer,
            message: "expected [[[chart names], degree], form string]".into(),
        };
        let (key, form) = match entry.as_array().map(Vec::as_slice) {
            Some([key, Value::String(form)]) => (key, form),
            _ => return Err(schema(at)),
        };
        let (names, degree) = match key.as_array().map(Vec::as_slice) {
            Some([Value::Array(names), Value::Number(q)]) => (names, q.as_u64()),
            _ => return Err(schema(format!("{at}/0"))),
        };
        let names: Vec<String> = names
            .iter()
            .map(|n| n.as_str().map(str::to_string))
            .collect::<Option<_>>()
            .ok_or_else(|| schema(format!("{at}/0/0")))?;
        let s = tuple_of(model, &names, &format!("{at}/0/0"))?;
        let ring = model.ring_of(&s).map_err(|e| field(format!("{at}/0/0"))(&e))?;
        let f = DiffForm::parse(ring, form).map_err(|e| field(format!("{at}/1"))(&e))?;
        if let Some(q) = degree {
            if !f.is_zero() && f.homogeneous_degree() != Some(q as usize) {
                return Err(field(format!("{at}/1"))(&format!("form is not of degree {q}")));
            }
        }
        out.add_at(s, f);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chern::cech_chern;

    const KOSZUL: &str = r#"{
        "charts": [{"name": "U0", "variables": ["x", "y"]}],
        "potential": {"U0": "x*y"},
        "mf": {"rank0": 1, "rank1": 1, "charts": {"U0": {"e0": [["x"]], "e1": [["y"]]}}}
    }"#;

    #[test]
    fn minimal_koszul_file_loads() {
        let p = Problem::from_json_str(KOSZUL).unwrap();
        assert_eq!(p.model.num_charts(), 1);
        let ch = cech_chern(&p.model, &p.mf, &p.connections).unwrap();
        assert_eq!(
            serde_json::to_string(&cochain_to_json(&p.model, &ch)).unwrap(),
            r#"{"entries":[[[["U0"],2],"-1 dx^dy"]]}"#
        );
    }

    #[test]
    fn unknown_variable_names_the_field() {
        let src = KOSZUL.replace(r#"[["y"]]"#, r#"[["z"]]"#);
        match Problem::from_json_str(&src).unwrap_err() {
            ProblemError::Field { pointer, message } => {
                assert_eq!(pointer, "/mf/charts/U0/e1/0/0");
                assert!(message.contains('z'));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn schema_errors_carry_a_pointer() {
        let src = KOSZUL.replace(r#""rank0": 1"#, r#""rank0": "one""#);
        match Problem::from_json_str(&src).unwrap_err() {
            ProblemError::Schema { pointer, .. } => assert_eq!(pointer, "/mf/rank0"),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn invalid_factorization_is_rejected() {
        let src = KOSZUL.replace(r#""x*y""#, r#""x*y + 1""#);
        assert!(Problem::from_json_str(&src).unwrap_err().is_invalid_input());
    }

    #[test]
    fn serialize_round_trips() {
        let spec = ProblemFile::from_json_str(KOSZUL).unwrap();
        let again = ProblemFile::from_json_str(&spec.to_json_string()).unwrap();
        assert_eq!(spec, again);
        let (a, b) = (Problem::from_spec(&spec).unwrap(), Problem::from_spec(&again).unwrap());
        assert_eq!(
            cech_chern(&a.model, &a.mf, &a.connections).unwrap(),
            cech_chern(&b.model, &b.mf, &b.connections).unwrap()
        );
    }

    #[test]
    fn cochain_json_round_trips() {
        let p = Problem::from_json_str(KOSZUL).unwrap();
        let ch = cech_chern(&p.model, &p.mf, &p.connections).unwrap();
        let back = cochain_from_json(&p.model, &cochain_to_json(&p.model, &ch)).unwrap();
        assert_eq!(back, ch);
    }
}
