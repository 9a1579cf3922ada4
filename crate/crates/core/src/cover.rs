//! Čech covers given chart-wise: chart rings, overlap rings with restriction
//! maps, per-chart presentations of one global factorization glued by
//! transition matrices, and per-chart connections.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::exactring::{LocalizedPoly, Ring, RingError, RingMap};
use crate::forms::DiffForm;
use crate::matrix::{Entry, Matrix, MatrixError, PolyMatrix};
use crate::mfcore::{Connection, FrameChange, GradedMatrix, MatrixFactorization, MfError};

/// Strictly increasing tuple of chart indices `i0 < .. < ip`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    pub fn new(mut members: Vec<usize>) -> Option<Simplex> {
        members.sort_unstable();
        let distinct = members.windows(2).all(|w| w[0] < w[1]);
        (distinct && !members.is_empty()).then_some(Simplex(members))
    }

    pub fn vertex(i: usize) -> Simplex {
        Simplex(vec![i])
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    /// Čech degree `p` of a `(p+1)`-tuple.
    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        *self.0.last().unwrap()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    /// The face with the `k`-th vertex removed, or `None` for a vertex.
    pub fn face(&self, k: usize) -> Option<Simplex> {
        if self.0.len() < 2 {
            return None;
        }
        let mut v = self.0.clone();
        v.remove(k);
        Some(Simplex(v))
    }

    /// Vertices `from..=to` (by position).
    pub fn slice(&self, from: usize, to: usize) -> Simplex {
        Simplex(self.0[from..=to].to_vec())
    }

    /// All nonempty proper faces, largest first.
    pub fn proper_faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        let mut out: Vec<Simplex> = (1u32..(1 << n) - 1)
            .map(|mask| Simplex((0..n).filter(|k| mask & (1 << k) != 0).map(|k| self.0[k]).collect()))
            .collect();
        out.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.cmp(b)));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Mf(#[from] MfError),
    #[error("unknown chart `{0}`")]
    UnknownChart(String),
    #[error("chart index {0} out of range")]
    ChartIndex(usize),
    #[error("duplicate chart `{0}`")]
    DuplicateChart(String),
    #[error("invalid chart tuple {0:?}")]
    BadTuple(Vec<usize>),
    #[error("overlap {0} is given twice")]
    DuplicateOverlap(String),
    #[error("overlap {0} is missing")]
    MissingOverlap(String),
    #[error("no restriction map from {from} to {to}")]
    NoRestriction { from: String, to: String },
    #[error("potential on chart {0} is neither given nor determined by restriction")]
    PotentialUndetermined(String),
    #[error("no transition for {0}")]
    MissingTransition(String),
    #[error("{0}")]
    Shape(String),
}

impl From<MatrixError> for CoverError {
    fn from(e: MatrixError) -> Self {
        CoverError::Mf(e.into())
    }
}

impl From<crate::matrix::ShapeError> for CoverError {
    fn from(e: crate::matrix::ShapeError) -> Self {
        CoverError::Mf(e.into())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub name: String,
    pub ring: Arc<Ring>,
}

/// Ring of an intersection together with the restriction maps into it from
/// each of its faces (and the identity from itself).
#[derive(Debug, Clone, PartialEq)]
pub struct Overlap {
    pub ring: Arc<Ring>,
    restrictions: BTreeMap<Simplex, RingMap>,
}

impl Overlap {
    pub fn restriction_from(&self, face: &Simplex) -> Option<&RingMap> {
        self.restrictions.get(face)
    }

    pub fn restrictions(&self) -> impl Iterator<Item = (&Simplex, &RingMap)> {
        self.restrictions.iter()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverModel {
    charts: Vec<Chart>,
    overlaps: BTreeMap<Simplex, Overlap>,
    /// `w` on every simplex, restricted from the simplex's first chart.
    potentials: BTreeMap<Simplex, LocalizedPoly>,
    /// Maps as supplied by the user (before completion), for serialization.
    given_maps: BTreeMap<Simplex, Vec<Simplex>>,
    given_potentials: Vec<bool>,
    max_depth: usize,
}

#[derive(Debug, Default)]
pub struct CoverBuilder {
    charts: Vec<Chart>,
    overlaps: Vec<(Simplex, Arc<Ring>, Vec<(Simplex, RingMap)>)>,
    potentials: BTreeMap<usize, LocalizedPoly>,
    max_depth: Option<usize>,
}

impl CoverBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn chart(&mut self, name: &str, ring: Arc<Ring>) -> Result<usize, CoverError> {
        if self.charts.iter().any(|c| c.name == name) {
            return Err(CoverError::DuplicateChart(name.to_string()));
        }
        self.charts.push(Chart {
            name: name.to_string(),
            ring,
        });
        Ok(self.charts.len() - 1)
    }

    pub fn chart_index(&self, name: &str) -> Result<usize, CoverError> {
        self.charts
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| CoverError::UnknownChart(name.to_string()))
    }

    pub fn chart_ring(&self, idx: usize) -> Result<&Arc<Ring>, CoverError> {
        self.charts
            .get(idx)
            .map(|c| &c.ring)
            .ok_or(CoverError::ChartIndex(idx))
    }

    /// Register the intersection of `members` with restriction maps from some of its faces.
    pub fn overlap(
        &mut self,
        members: &[usize],
        ring: Arc<Ring>,
        maps: Vec<(Simplex, RingMap)>,
    ) -> Result<(), CoverError> {
        let simplex = Simplex::new(members.to_vec()).ok_or_else(|| CoverError::BadTuple(members.to_vec()))?;
        if simplex.0.len() < 2 || simplex.0.iter().any(|&i| i >= self.charts.len()) {
            return Err(CoverError::BadTuple(members.to_vec()));
        }
        for (face, map) in &maps {
            if !face.is_face_of(&simplex) || face == &simplex {
                return Err(CoverError::BadTuple(face.0.clone()));
            }
            if !crate::exactring::same_ring(map.target(), &ring) {
                return Err(RingError::RingMismatch(map.target().to_string(), ring.to_string()).into());
            }
        }
        self.overlaps.push((simplex, ring, maps));
        Ok(())
    }

    pub fn potential(&mut self, chart: usize, w: LocalizedPoly) -> &mut Self {
        self.potentials.insert(chart, w);
        self
    }

    pub fn max_depth(&mut self, depth: usize) -> &mut Self {
        self.max_depth = Some(depth);
        self
    }

    pub fn build(self) -> Result<CoverModel, CoverError> {
        let CoverBuilder {
            charts,
            overlaps: mut pending,
            potentials,
            max_depth,
        } = self;
        let label_of = |s: &Simplex| label(s, |i| charts.get(i).map(|c| c.name.as_str()).unwrap_or("?"));
        let n = charts.len();
        let max_depth = max_depth.unwrap_or(n).max(1);
        let mut overlaps: BTreeMap<Simplex, Overlap> = BTreeMap::new();
        let mut given_maps: BTreeMap<Simplex, Vec<Simplex>> = BTreeMap::new();
        for (i, c) in charts.iter().enumerate() {
            let v = Simplex::vertex(i);
            let mut restrictions = BTreeMap::new();
            restrictions.insert(v.clone(), RingMap::identity(&c.ring));
            overlaps.insert(
                v,
                Overlap {
                    ring: c.ring.clone(),
                    restrictions,
                },
            );
        }
        pending.sort_by(|a, b| a.0 .0.len().cmp(&b.0 .0.len()).then_with(|| a.0.cmp(&b.0)));
        for (simplex, ring, maps) in pending {
            if simplex.0.len() > max_depth {
                continue;
            }
            if overlaps.contains_key(&simplex) {
                return Err(CoverError::DuplicateOverlap(label_of(&simplex)));
            }
            given_maps.insert(simplex.clone(), maps.iter().map(|(f, _)| f.clone()).collect());
            let mut known: BTreeMap<Simplex, RingMap> = maps.into_iter().collect();
            for face in simplex.proper_faces() {
                let face_overlap = overlaps
                    .get(&face)
                    .ok_or_else(|| CoverError::MissingOverlap(label_of(&face)))?;
                if let Some(m) = known.get(&face) {
                    crate::exactring::check_ring(m.source(), &face_overlap.ring)?;
                    continue;
                }
                // compose through a larger face whose map is already known
                let via = known
                    .iter()
                    .filter(|(g, _)| face.is_face_of(g) && *g != &face)
                    .find_map(|(g, g_to_t)| {
                        overlaps[g].restrictions.get(&face).map(|f_to_g| f_to_g.then(g_to_t))
                    });
                let map = match via {
                    Some(m) => m?,
                    None => RingMap::inclusion(&face_overlap.ring, &ring).map_err(|_| {
                        CoverError::NoRestriction {
                            from: label_of(&face),
                            to: label_of(&simplex),
                        }
                    })?,
                };
                known.insert(face, map);
            }
            known.insert(simplex.clone(), RingMap::identity(&ring));
            overlaps.insert(
                simplex,
                Overlap {
                    ring,
                    restrictions: known,
                },
            );
        }

        let given_potentials = (0..n).map(|i| potentials.contains_key(&i)).collect();
        let mut model = CoverModel {
            charts,
            overlaps,
            potentials: BTreeMap::new(),
            given_maps,
            given_potentials,
            max_depth,
        };
        let chart_w = model.propagate_potentials(potentials)?;
        for (s, _) in model.overlaps.iter() {
            let w = model.restrict_poly(&chart_w[s.first()], &Simplex::vertex(s.first()), s)?;
            model.potentials.insert(s.clone(), w);
        }
        Ok(model)
    }
}

fn label<'a>(s: &Simplex, name: impl Fn(usize) -> &'a str) -> String {
    let names: Vec<&str> = s.0.iter().map(|&i| name(i)).collect();
    let indexed = names
        .iter()
        .all(|n| n.len() > 1 && n.starts_with('U') && n[1..].chars().all(|c| c.is_ascii_digit()));
    if indexed {
        format!("U{}", names.iter().map(|n| &n[1..]).collect::<String>())
    } else {
        names.join("∩")
    }
}

impl CoverModel {
    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn num_charts(&self) -> usize {
        self.charts.len()
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    pub fn chart_index(&self, name: &str) -> Result<usize, CoverError> {
        self.charts
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| CoverError::UnknownChart(name.to_string()))
    }

    pub fn chart_name(&self, idx: usize) -> &str {
        &self.charts[idx].name
    }

    /// Human-readable name of a chart tuple, e.g. `U01` or `A∩B`.
    pub fn label(&self, s: &Simplex) -> String {
        label(s, |i| self.charts[i].name.as_str())
    }

    /// All present tuples, sorted lexicographically.
    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.overlaps.keys()
    }

    pub fn simplices_of_degree(&self, p: usize) -> Vec<Simplex> {
        self.overlaps.keys().filter(|s| s.degree() == p).cloned().collect()
    }

    pub fn overlap(&self, s: &Simplex) -> Result<&Overlap, CoverError> {
        self.overlaps
            .get(s)
            .ok_or_else(|| CoverError::MissingOverlap(self.label(s)))
    }

    pub fn has_overlap(&self, s: &Simplex) -> bool {
        self.overlaps.contains_key(s)
    }

    pub fn ring_of(&self, s: &Simplex) -> Result<&Arc<Ring>, CoverError> {
        Ok(&self.overlap(s)?.ring)
    }

    pub fn potential_on(&self, s: &Simplex) -> Result<&LocalizedPoly, CoverError> {
        self.potentials
            .get(s)
            .ok_or_else(|| CoverError::MissingOverlap(self.label(s)))
    }

    pub fn chart_potential(&self, i: usize) -> &LocalizedPoly {
        &self.potentials[&Simplex::vertex(i)]
    }

    pub fn potential_was_given(&self, i: usize) -> bool {
        self.given_potentials[i]
    }

    pub fn given_restrictions(&self, s: &Simplex) -> &[Simplex] {
        self.given_maps.get(s).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn restriction(&self, from: &Simplex, to: &Simplex) -> Result<&RingMap, CoverError> {
        self.overlap(to)?
            .restrictions
            .get(from)
            .ok_or_else(|| CoverError::NoRestriction {
                from: self.label(from),
                to: self.label(to),
            })
    }

    pub fn restrict_poly(&self, p: &LocalizedPoly, from: &Simplex, to: &Simplex) -> Result<LocalizedPoly, CoverError> {
        Ok(p.substitute(self.restriction(from, to)?)?)
    }

    /// Restrict a form: coefficients by substitution, `dv` to `d(image of v)`.
    pub fn restrict_form(&self, a: &DiffForm, from: &Simplex, to: &Simplex) -> Result<DiffForm, CoverError> {
        Ok(a.pullback(self.restriction(from, to)?)?)
    }

    pub fn restrict_matrix<T: Entry>(&self, m: &Matrix<T>, from: &Simplex, to: &Simplex) -> Result<Matrix<T>, CoverError> {
        Ok(m.pullback(self.restriction(from, to)?)?)
    }

    pub fn restrict_graded(&self, g: &GradedMatrix, from: &Simplex, to: &Simplex) -> Result<GradedMatrix, CoverError> {
        Ok(g.pullback(self.restriction(from, to)?)?)
    }

    /// Fill in potentials for charts that were not given one, by pulling back
    /// along invertible monomial restriction maps.
    fn propagate_potentials(&self, given: BTreeMap<usize, LocalizedPoly>) -> Result<Vec<LocalizedPoly>, CoverError> {
        let n = self.charts.len();
        let mut known: Vec<Option<LocalizedPoly>> = (0..n).map(|i| given.get(&i).cloned()).collect();
        for (i, w) in &given {
            crate::exactring::check_ring(w.ring(), &self.charts[*i].ring)?;
        }
        loop {
            let mut progress = false;
            for i in 0..n {
                if known[i].is_some() {
                    continue;
                }
                for j in 0..n {
                    let Some(wj) = known[j].clone() else { continue };
                    let Some(pair) = Simplex::new(vec![i, j]) else { continue };
                    if !self.has_overlap(&pair) {
                        continue;
                    }
                    if let Some(wi) = self.pull_back_to_chart(&wj, j, i, &pair)? {
                        known[i] = Some(wi);
                        progress = true;
                        break;
                    }
                }
            }
            if !progress {
                break;
            }
        }
        known
            .into_iter()
            .enumerate()
            .map(|(i, w)| w.ok_or_else(|| CoverError::PotentialUndetermined(self.charts[i].name.clone())))
            .collect()
    }

    fn pull_back_to_chart(
        &self,
        w: &LocalizedPoly,
        from: usize,
        to: usize,
        pair: &Simplex,
    ) -> Result<Option<LocalizedPoly>, CoverError> {
        let on_pair = self.restrict_poly(w, &Simplex::vertex(from), pair)?;
        let ring = &self.charts[to].ring;
        let everything_inverted = Ring::new(ring.variables().to_vec(), ring.variables())?;
        let Some(inverse) = self
            .restriction(&Simplex::vertex(to), pair)?
            .monomial_inverse(&everything_inverted)
        else {
            return Ok(None);
        };
        let candidate = on_pair.substitute(&inverse)?;
        let Ok(candidate) = LocalizedPoly::from_terms(
            ring,
            candidate.terms().map(|(m, c)| (m.clone(), c.clone())),
        ) else {
            return Ok(None);
        };
        let check = self.restrict_poly(&candidate, &Simplex::vertex(to), pair)?;
        Ok((check == on_pair).then_some(candidate))
    }
}

/// A factorization on the whole cover, given by chart presentations and
/// transitions. `g_ij` (on `U_ij`) maps the `j`-frame to the `i`-frame:
/// `e^(i) = g_ij e^(j) g_ij⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalMF {
    charts: Vec<MatrixFactorization>,
    transitions: BTreeMap<(usize, usize), FrameChange>,
    given: Vec<(usize, usize)>,
}

impl GlobalMF {
    /// `transitions` lists `((i, j), g0, g1)` over the ring of `U_ij`. Pairs
    /// given in only one order get the inverse for the other; pairs not given
    /// at all use the identity.
    pub fn new(
        model: &CoverModel,
        charts: Vec<MatrixFactorization>,
        transitions: Vec<((usize, usize), PolyMatrix, PolyMatrix)>,
    ) -> Result<Self, CoverError> {
        if charts.len() != model.num_charts() {
            return Err(CoverError::Shape(format!(
                "{} chart presentations for {} charts",
                charts.len(),
                model.num_charts()
            )));
        }
        let ranks = charts.first().map(MatrixFactorization::ranks).unwrap_or((0, 0));
        for (i, mf) in charts.iter().enumerate() {
            if mf.ranks() != ranks {
                return Err(CoverError::Shape(format!(
                    "chart {} has ranks {:?}, expected {:?}",
                    model.chart_name(i),
                    mf.ranks(),
                    ranks
                )));
            }
            crate::exactring::check_ring(mf.ring(), &model.charts[i].ring)?;
        }
        let mut table = BTreeMap::new();
        let mut given = Vec::new();
        for ((i, j), g0, g1) in transitions {
            let pair = Simplex::new(vec![i, j]).ok_or(CoverError::BadTuple(vec![i, j]))?;
            let ring = model.ring_of(&pair)?;
            crate::exactring::check_ring(g0.ring(), ring)?;
            crate::exactring::check_ring(g1.ring(), ring)?;
            if g0.shape() != (ranks.0, ranks.0) || g1.shape() != (ranks.1, ranks.1) {
                return Err(CoverError::Shape(format!(
                    "transition {} has shapes {:?}, {:?}",
                    model.label(&pair),
                    g0.shape(),
                    g1.shape()
                )));
            }
            table.insert((i, j), FrameChange::new(g0, g1)?);
            given.push((i, j));
        }
        for &(i, j) in &given {
            if !table.contains_key(&(j, i)) {
                let inv = table[&(i, j)].inverse();
                table.insert((j, i), inv);
            }
        }
        Ok(GlobalMF {
            charts,
            transitions: table,
            given,
        })
    }

    /// Same presentation on every chart with identity transitions; the charts must share one ring.
    pub fn on_charts(model: &CoverModel, mfs: Vec<MatrixFactorization>) -> Result<Self, CoverError> {
        Self::new(model, mfs, Vec::new())
    }

    pub fn chart(&self, i: usize) -> &MatrixFactorization {
        &self.charts[i]
    }

    pub fn charts(&self) -> &[MatrixFactorization] {
        &self.charts
    }

    pub fn ranks(&self) -> (usize, usize) {
        self.charts.first().map(MatrixFactorization::ranks).unwrap_or((0, 0))
    }

    pub fn given_transitions(&self) -> impl Iterator<Item = ((usize, usize), &FrameChange)> {
        self.given.iter().map(|k| (*k, &self.transitions[k]))
    }

    /// `g_ij` over the ring of `U_ij` (the chart ring when `i == j`).
    pub fn transition(&self, model: &CoverModel, i: usize, j: usize) -> Result<FrameChange, CoverError> {
        if let Some(g) = self.transitions.get(&(i, j)) {
            return Ok(g.clone());
        }
        let s = Simplex::new(vec![i, j]).ok_or(CoverError::BadTuple(vec![i, j]))?;
        let (r0, r1) = self.ranks();
        Ok(FrameChange::identity(model.ring_of(&s)?, r0, r1))
    }

    /// `g_ij` restricted to a tuple containing both charts.
    pub fn transition_on(&self, model: &CoverModel, i: usize, j: usize, on: &Simplex) -> Result<FrameChange, CoverError> {
        let pair = Simplex::new(vec![i, j]).ok_or(CoverError::BadTuple(vec![i, j]))?;
        let g = self.transition(model, i, j)?;
        Ok(g.pullback(model.restriction(&pair, on)?)?)
    }

    /// The presentation of chart `frame`, restricted to `on`.
    pub fn presentation_on(&self, model: &CoverModel, frame: usize, on: &Simplex) -> Result<MatrixFactorization, CoverError> {
        Ok(self.charts[frame].pullback(model.restriction(&Simplex::vertex(frame), on)?)?)
    }

    pub fn direct_sum(&self, model: &CoverModel, other: &Self) -> Result<Self, CoverError> {
        let charts = self
            .charts
            .iter()
            .zip(&other.charts)
            .map(|(a, b)| a.direct_sum(b))
            .collect::<Result<Vec<_>, _>>()?;
        let mut keys: Vec<(usize, usize)> = self.given.iter().chain(&other.given).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        let mut transitions = Vec::new();
        for (i, j) in keys {
            let a = self.transition(model, i, j)?;
            let b = other.transition(model, i, j)?;
            transitions.push(((i, j), a.g0.direct_sum(&b.g0), a.g1.direct_sum(&b.g1)));
        }
        GlobalMF::new(model, charts, transitions)
    }

    pub fn shift(&self, model: &CoverModel) -> Result<Self, CoverError> {
        let charts = self.charts.iter().map(MatrixFactorization::shift).collect();
        let transitions = self
            .given
            .iter()
            .map(|k| {
                let g = &self.transitions[k];
                (*k, g.g1.clone(), g.g0.clone())
            })
            .collect();
        GlobalMF::new(model, charts, transitions)
    }
}

/// One connection per chart, each in its chart's frame.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalConnections(pub Vec<Connection>);

impl LocalConnections {
    pub fn new(model: &CoverModel, mf: &GlobalMF, conns: Vec<Connection>) -> Result<Self, CoverError> {
        if conns.len() != model.num_charts() {
            return Err(CoverError::Shape(format!(
                "{} connections for {} charts",
                conns.len(),
                model.num_charts()
            )));
        }
        for (i, c) in conns.iter().enumerate() {
            crate::exactring::check_ring(c.ring(), &model.charts[i].ring)?;
            if c.ranks() != mf.ranks() {
                return Err(CoverError::Shape(format!(
                    "connection on {} has ranks {:?}, expected {:?}",
                    model.chart_name(i),
                    c.ranks(),
                    mf.ranks()
                )));
            }
        }
        Ok(LocalConnections(conns))
    }

    pub fn trivial(model: &CoverModel, mf: &GlobalMF) -> Self {
        let (r0, r1) = mf.ranks();
        LocalConnections(
            model
                .charts
                .iter()
                .map(|c| Connection::trivial(&c.ring, r0, r1))
                .collect(),
        )
    }

    pub fn get(&self, i: usize) -> &Connection {
        &self.0[i]
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        LocalConnections(self.0.iter().zip(&other.0).map(|(a, b)| a.direct_sum(b)).collect())
    }

    pub fn shift(&self) -> Self {
        LocalConnections(self.0.iter().map(Connection::shift).collect())
    }
}

/// `∇_j` expressed in the `i`-frame over `U_ij`.
pub fn transport_connection(
    model: &CoverModel,
    mf: &GlobalMF,
    conn: &Connection,
    i: usize,
    j: usize,
) -> Result<Connection, CoverError> {
    let pair = Simplex::new(vec![i, j]).ok_or(CoverError::BadTuple(vec![i, j]))?;
    connection_in_frame(model, mf, conn, j, i, &pair)
}

/// `∇_j` (a connection on chart `j`) restricted to `on` and expressed in the `frame`-chart frame.
pub fn connection_in_frame(
    model: &CoverModel,
    mf: &GlobalMF,
    conn: &Connection,
    j: usize,
    frame: usize,
    on: &Simplex,
) -> Result<Connection, CoverError> {
    let restricted = conn.pullback(model.restriction(&Simplex::vertex(j), on)?)?;
    if j == frame {
        return Ok(restricted);
    }
    let g = mf.transition_on(model, frame, j, on)?;
    Ok(restricted.gauge(&g)?)
}

/// Itemized list of everything that fails to hold on a cover.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoverReport {
    pub items: Vec<String>,
}

impl fmt::Display for CoverReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, item) in self.items.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "- {item}")?;
        }
        Ok(())
    }
}

impl std::error::Error for CoverReport {}

/// Check every compatibility the cover and the factorization must satisfy.
pub fn validate_cover(model: &CoverModel, mf: &GlobalMF) -> Result<(), CoverReport> {
    let checks: Vec<Vec<String>> = model
        .overlaps
        .par_iter()
        .map(|(s, ov)| check_simplex(model, mf, s, ov).unwrap_or_else(|e| vec![format!("{}: {e}", model.label(s))]))
        .collect();
    let items: Vec<String> = checks.into_iter().flatten().collect();
    if items.is_empty() {
        Ok(())
    } else {
        Err(CoverReport { items })
    }
}

fn check_simplex(model: &CoverModel, mf: &GlobalMF, s: &Simplex, ov: &Overlap) -> Result<Vec<String>, CoverError> {
    let mut items = Vec::new();
    let label = model.label(s);
    match s.members() {
        [i] => {
            let chart_mf = mf.chart(*i);
            if let Err(v) = chart_mf.validate() {
                items.push(format!("factorization on {label}: {v}"));
            }
            if chart_mf.potential() != model.chart_potential(*i) {
                items.push(format!(
                    "factorization on {label} has potential {} but the chart potential is {}",
                    chart_mf.potential(),
                    model.chart_potential(*i)
                ));
            }
        }
        [i, j] => {
            let wi = model.restrict_poly(model.chart_potential(*i), &Simplex::vertex(*i), s)?;
            let wj = model.restrict_poly(model.chart_potential(*j), &Simplex::vertex(*j), s)?;
            if wi != wj {
                items.push(format!("potential disagreement on {label}: {wi} vs {wj}"));
            }
            let ei = mf.presentation_on(model, *i, s)?;
            let ej = mf.presentation_on(model, *j, s)?.change_frame(&mf.transition(model, *i, *j)?)?;
            if let Some((r, c)) = ei.e0().first_difference(ej.e0()) {
                items.push(format!("transition {label} does not carry e0 at entry ({r},{c})"));
            }
            if let Some((r, c)) = ei.e1().first_difference(ej.e1()) {
                items.push(format!("transition {label} does not carry e1 at entry ({r},{c})"));
            }
        }
        members => {
            for (a, b, c) in triples(members) {
                let gac = mf.transition_on(model, a, c, s)?;
                let gab = mf.transition_on(model, a, b, s)?;
                let gbc = mf.transition_on(model, b, c, s)?;
                let composite = gab.compose(&gbc)?;
                if composite.g0 != gac.g0 || composite.g1 != gac.g1 {
                    items.push(format!(
                        "cocycle condition fails on {label} for charts {}, {}, {}",
                        model.chart_name(a),
                        model.chart_name(b),
                        model.chart_name(c)
                    ));
                }
            }
        }
    }
    // nesting: chart -> face -> s agrees with chart -> s
    for face in s.proper_faces() {
        if face.members().len() < 2 {
            continue;
        }
        let face_to_s = model.restriction(&face, s)?;
        for &c in face.members() {
            let v = Simplex::vertex(c);
            let direct = model.restriction(&v, s)?;
            let composite = model.restriction(&v, &face)?.then(face_to_s)?;
            if &composite != direct {
                items.push(format!(
                    "restriction {} -> {} -> {label} differs from {} -> {label}",
                    model.chart_name(c),
                    model.label(&face),
                    model.chart_name(c)
                ));
            }
        }
    }
    let _ = ov;
    Ok(items)
}

fn triples(members: &[usize]) -> Vec<(usize, usize, usize)> {
    let n = members.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                out.push((members[a], members[b], members[c]));
            }
        }
    }
    out
}
