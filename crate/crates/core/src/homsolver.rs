//! Truncated exact linear algebra on the total complex `(Čech(Ω•), D)`:
//! monomial bases, cohomology dimensions and exactness witnesses.
//!
//! A truncation keeps monomials whose positive exponents sum to at most
//! `maxdeg` and whose negative exponents (on inverted variables only) are at
//! least `-maxinv`. The differential is applied to truncated cochains exactly
//! and its image is kept in full, so nothing is lost on the codomain side.
//! Cohomology is `Z_S / (B ∩ S)` with `S` the truncated cochain space and `B`
//! the image of the slightly wider [`primitive_truncation`].

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cech::{check_closed, total_d, total_d_entry, NotClosed, OmegaCochain};
use crate::cover::{CoverError, CoverModel, Simplex};
use crate::exactring::{Coeff, LocalizedPoly, Monomial, Ring};
use crate::forms::{DiffForm, Wedge};
use crate::linalg::{rank, Echelon};
use crate::mfcore::Parity;

/// Largest cochain basis the solver will assemble.
pub const MAX_BASIS: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error("input is not closed: {0}")]
    NotClosed(String),
    #[error("truncated basis has {size} elements, above the limit of {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("witness failed re-verification")]
    WitnessRejected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TruncationSpec {
    pub maxdeg: u32,
    pub maxinv: u32,
}

/// `x^m dx_I` on the overlap of `simplex`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BasisElement {
    pub simplex: Simplex,
    pub wedge: Wedge,
    pub monomial: Monomial,
}

impl BasisElement {
    pub fn form(&self, ring: &std::sync::Arc<Ring>) -> DiffForm {
        DiffForm::term(LocalizedPoly::monomial(ring, self.monomial.clone(), Coeff::from_integer(1.into())), self.wedge)
    }
}

/// Exponent vectors of `ring` inside the truncation, in ascending monomial order.
pub fn truncated_monomials(ring: &Ring, trunc: TruncationSpec) -> Vec<Monomial> {
    fn go(ring: &Ring, trunc: TruncationSpec, i: usize, budget: i64, cur: &mut Vec<i32>, out: &mut Vec<Monomial>) {
        if i == ring.nvars() {
            out.push(Monomial(cur.clone()));
            return;
        }
        let low = if ring.is_inverted(i) { -(trunc.maxinv as i64) } else { 0 };
        for e in low..=budget {
            cur.push(e as i32);
            go(ring, trunc, i + 1, budget - e.max(0), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(ring, trunc, 0, trunc.maxdeg as i64, &mut Vec::new(), &mut out);
    out.sort();
    out
}

fn count_monomials(ring: &Ring, trunc: TruncationSpec) -> usize {
    // positive parts: compositions of at most maxdeg into nvars parts
    let n = ring.nvars();
    let d = trunc.maxdeg as usize;
    let mut binom = 1usize;
    for k in 0..n {
        binom = binom.saturating_mul(d + n - k) / (k + 1);
    }
    let inverted = (0..n).filter(|&i| ring.is_inverted(i)).count() as u32;
    binom.saturating_mul((trunc.maxinv as usize + 1).saturating_pow(inverted))
}

/// Ordered basis of truncated cochains in Čech degree `p` and form degree `q`.
pub fn basis(model: &CoverModel, trunc: TruncationSpec, p: usize, q: usize) -> Vec<BasisElement> {
    let mut out = Vec::new();
    for s in model.simplices_of_degree(p) {
        let ring = model.ring_of(&s).expect("listed simplex");
        if q > ring.nvars() {
            continue;
        }
        let monomials = truncated_monomials(ring, trunc);
        for wedge in Wedge::all_of_degree(ring.nvars(), q) {
            for m in &monomials {
                out.push(BasisElement {
                    simplex: s.clone(),
                    wedge,
                    monomial: m.clone(),
                });
            }
        }
    }
    out
}

fn estimated_size(model: &CoverModel, trunc: TruncationSpec) -> usize {
    model
        .simplices()
        .map(|s| {
            let ring = model.ring_of(s).expect("listed simplex");
            count_monomials(ring, trunc).saturating_mul(1usize << ring.nvars())
        })
        .fold(0usize, usize::saturating_add)
}

/// All basis elements whose total degree `p + q` has the given parity and
/// which pass `select`.
fn basis_of_parity(
    model: &CoverModel,
    trunc: TruncationSpec,
    parity: Parity,
    select: &dyn Fn(usize, usize) -> bool,
) -> Vec<BasisElement> {
    let top_p = model.simplices().map(Simplex::degree).max().unwrap_or(0);
    let top_q = model.simplices().map(|s| model.ring_of(s).expect("listed").nvars()).max().unwrap_or(0);
    let mut out = Vec::new();
    for p in 0..=top_p {
        for q in 0..=top_q {
            if (p + q) % 2 == parity.bit() && select(p, q) {
                out.extend(basis(model, trunc, p, q));
            }
        }
    }
    out.sort();
    out
}

type Coords = BTreeMap<BasisElement, Coeff>;

fn coords_of(pieces: impl IntoIterator<Item = (Simplex, DiffForm)>) -> Coords {
    let mut out = Coords::new();
    for (s, form) in pieces {
        for (wedge, coeff) in form.components() {
            for (m, c) in coeff.terms() {
                let key = BasisElement {
                    simplex: s.clone(),
                    wedge: *wedge,
                    monomial: m.clone(),
                };
                let entry = out.entry(key).or_insert_with(|| Coeff::from_integer(0.into()));
                *entry += c;
            }
        }
    }
    out.retain(|_, c| *c != Coeff::from_integer(0.into()));
    out
}

fn images(model: &CoverModel, elements: &[BasisElement]) -> Result<Vec<Coords>, CoverError> {
    elements
        .par_iter()
        .map(|b| {
            let ring = model.ring_of(&b.simplex)?;
            Ok(coords_of(total_d_entry(model, &b.simplex, &b.form(ring))?))
        })
        .collect()
}

fn indexed(v: &Coords, index: &BTreeMap<BasisElement, usize>) -> BTreeMap<usize, Coeff> {
    v.iter().map(|(k, c)| (index[k], c.clone())).collect()
}

fn index_of<'a>(vectors: impl IntoIterator<Item = &'a Coords>) -> BTreeMap<BasisElement, usize> {
    let keys: BTreeSet<&BasisElement> = vectors.into_iter().flat_map(|v| v.keys()).collect();
    keys.into_iter().cloned().enumerate().map(|(i, k)| (k, i)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub dim: usize,
    /// Size of the truncated cochain space `S`.
    pub cochains: usize,
    /// `dim ker(D) ∩ S`.
    pub cocycles: usize,
    /// `dim im(D) ∩ S`.
    pub boundaries: usize,
    pub primitives: TruncationSpec,
}

fn guard(model: &CoverModel, trunc: TruncationSpec) -> Result<(), SolverError> {
    let size = estimated_size(model, trunc);
    if size > MAX_BASIS {
        return Err(SolverError::TooLarge { size, limit: MAX_BASIS });
    }
    Ok(())
}

/// Truncation searched for primitives: `trunc` widened by `deg(w) - 1` in both
/// bounds, `deg` being the largest numerator degree of a chart potential.
/// Without it, cocycles on the inverted-exponent edge of the truncation whose
/// primitives sit one step further out are reported as classes.
pub fn primitive_truncation(model: &CoverModel, trunc: TruncationSpec) -> TruncationSpec {
    let deg = (0..model.num_charts())
        .flat_map(|i| model.chart_potential(i).terms().map(|(m, _)| m.numerator_degree()).collect::<Vec<_>>())
        .max()
        .unwrap_or(0);
    let widen = u32::try_from((deg - 1).max(0)).unwrap_or(u32::MAX);
    TruncationSpec {
        maxdeg: trunc.maxdeg.saturating_add(widen),
        maxinv: trunc.maxinv.saturating_add(widen),
    }
}

/// Truncated cohomology of the total complex in the given parity, restricted
/// to the bidegrees `(p, q)` accepted by `select`.
pub fn cohomology(
    model: &CoverModel,
    trunc: TruncationSpec,
    parity: Parity,
    select: &dyn Fn(usize, usize) -> bool,
) -> Result<CohomologyReport, SolverError> {
    let wide = primitive_truncation(model, trunc);
    guard(model, wide)?;
    let source = basis_of_parity(model, trunc, parity, select);
    let other = match parity {
        Parity::Even => Parity::Odd,
        Parity::Odd => Parity::Even,
    };
    let previous = basis_of_parity(model, wide, other, &|_, _| true);
    let source_images = images(model, &source)?;
    let previous_images = images(model, &previous)?;

    let index = index_of(source_images.iter().chain(&previous_images));
    let cocycles = source.len() - rank(source_images.iter().map(|v| indexed(v, &index)));

    let in_source: BTreeSet<&BasisElement> = source.iter().collect();
    let boundary_rank = rank(previous_images.iter().map(|v| indexed(v, &index)));
    let outside_rank = rank(previous_images.iter().map(|v| {
        let outside: Coords = v.iter().filter(|(k, _)| !in_source.contains(k)).map(|(k, c)| (k.clone(), c.clone())).collect();
        indexed(&outside, &index)
    }));
    let boundaries = boundary_rank - outside_rank;
    Ok(CohomologyReport {
        dim: cocycles - boundaries,
        cochains: source.len(),
        cocycles,
        boundaries,
        primitives: wide,
    })
}

/// Dimension of truncated two-periodic cohomology in the given parity.
pub fn hh_dim(model: &CoverModel, trunc: TruncationSpec, parity: Parity) -> Result<usize, SolverError> {
    Ok(cohomology(model, trunc, parity, &|_, _| true)?.dim)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    ExactWithWitness,
    NoWitnessWithinTruncation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub outcome: Outcome,
    /// Satisfies `D(witness) = input` exactly whenever present.
    pub witness: Option<OmegaCochain>,
    pub unknowns: usize,
    pub rank: usize,
    pub primitives: TruncationSpec,
}

/// Searches the [`primitive_truncation`] of `trunc` for `x` with `D(x) = c`.
pub fn exact_witness(model: &CoverModel, c: &OmegaCochain, trunc: TruncationSpec) -> Result<SolveReport, SolverError> {
    if let Err(NotClosed { tuple, degree, value }) = check_closed(model, c)? {
        return Err(SolverError::NotClosed(format!("{tuple}, form degree {degree}: {value}")));
    }
    let wide = primitive_truncation(model, trunc);
    guard(model, wide)?;
    let target = coords_of(c.iter().map(|(s, f)| (s.clone(), f.clone())));
    let needed: BTreeSet<usize> = c.components().iter().map(|(s, q, _)| (s.degree() + q + 1) % 2).collect();
    let mut unknowns = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        if needed.contains(&parity.bit()) {
            unknowns.extend(basis_of_parity(model, wide, parity, &|_, _| true));
        }
    }
    let unknown_images = images(model, &unknowns)?;
    let index = index_of(unknown_images.iter().chain(std::iter::once(&target)));
    let mut echelon = Echelon::new();
    for (j, v) in unknown_images.iter().enumerate() {
        echelon.insert(j, &indexed(v, &index));
    }
    let solution = echelon.solve(&indexed(&target, &index));
    let report = |outcome, witness| SolveReport {
        outcome,
        witness,
        unknowns: unknowns.len(),
        rank: echelon.rank(),
        primitives: wide,
    };
    let Some(solution) = solution else {
        return Ok(report(Outcome::NoWitnessWithinTruncation, None));
    };
    let mut witness = OmegaCochain::new();
    for (j, coeff) in solution {
        let b = &unknowns[j];
        let ring = model.ring_of(&b.simplex)?;
        witness.add_at(b.simplex.clone(), b.form(ring).scale(&coeff));
    }
    if &total_d(model, &witness)? != c {
        return Err(SolverError::WitnessRejected);
    }
    Ok(report(Outcome::ExactWithWitness, Some(witness)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::CoverBuilder;
    use crate::exactring::{LocalizedPoly, RingMap};

    fn single_chart(vars: &[&str], w: &str) -> CoverModel {
        let r = Ring::polynomial(vars.iter().copied()).unwrap();
        let mut b = CoverBuilder::new();
        b.chart("U0", r.clone()).unwrap();
        b.potential(0, LocalizedPoly::parse(&r, w).unwrap());
        b.build().unwrap()
    }

    fn p1() -> CoverModel {
        let kx = Ring::polynomial(["x"]).unwrap();
        let ky = Ring::polynomial(["y"]).unwrap();
        let lx = Ring::new(["x"], ["x"]).unwrap();
        let mut b = CoverBuilder::new();
        b.chart("U0", kx.clone()).unwrap();
        b.chart("U1", ky.clone()).unwrap();
        let m1 = RingMap::from_named(&ky, &lx, [("y", LocalizedPoly::parse(&lx, "x^-1").unwrap())]).unwrap();
        b.overlap(&[0, 1], lx, vec![(Simplex::vertex(1), m1)]).unwrap();
        b.potential(0, LocalizedPoly::zero(&kx));
        b.build().unwrap()
    }

    fn t(maxdeg: u32, maxinv: u32) -> TruncationSpec {
        TruncationSpec { maxdeg, maxinv }
    }

    fn shown(model: &CoverModel, elements: &[BasisElement]) -> BTreeSet<String> {
        elements
            .iter()
            .map(|b| b.form(model.ring_of(&b.simplex).unwrap()).to_string())
            .collect()
    }

    #[test]
    fn basis_examples() {
        let model = single_chart(&["x", "y"], "x*y");
        let expected: BTreeSet<String> = ["1 dx^dy", "x dx^dy", "y dx^dy"].iter().map(|s| s.to_string()).collect();
        assert_eq!(shown(&model, &basis(&model, t(1, 0), 0, 2)), expected);
        assert!(basis(&model, t(3, 0), 0, 3).is_empty());
        let model = p1();
        let expected: BTreeSet<String> = ["x^-2 dx", "x^-1 dx", "1 dx", "x dx"].iter().map(|s| s.to_string()).collect();
        assert_eq!(shown(&model, &basis(&model, t(1, 2), 1, 1)), expected);
    }

    #[test]
    fn koszul_even_dimension() {
        let model = single_chart(&["x", "y"], "x*y");
        assert_eq!(hh_dim(&model, t(4, 0), Parity::Even).unwrap(), 1);
    }

    #[test]
    fn x_squared_dimensions() {
        let model = single_chart(&["x"], "x^2");
        assert_eq!(hh_dim(&model, t(4, 0), Parity::Even).unwrap(), 0);
        assert_eq!(hh_dim(&model, t(4, 0), Parity::Odd).unwrap(), 1);
    }

    #[test]
    fn zero_potential_counts_everything() {
        let model = single_chart(&["x", "y"], "0");
        // Ω⁰ ⊕ Ω² truncated at degree 2: 6 + 6
        assert_eq!(hh_dim(&model, t(2, 0), Parity::Even).unwrap(), 12);
    }

    #[test]
    fn p1_first_cohomology_of_one_forms() {
        let model = p1();
        let report = cohomology(&model, t(2, 2), Parity::Even, &|p, q| p == 1 && q == 1).unwrap();
        assert_eq!(report.dim, 1);
    }

    #[test]
    fn constructed_exact_input_has_witness() {
        let model = single_chart(&["x", "y"], "x*y");
        let r = model.charts()[0].ring.clone();
        let x = DiffForm::parse(&r, "x").unwrap();
        let c: OmegaCochain = total_d(&model, &[(Simplex::vertex(0), x)].into_iter().collect()).unwrap();
        let report = exact_witness(&model, &c, t(2, 0)).unwrap();
        assert_eq!(report.outcome, Outcome::ExactWithWitness);
        assert_eq!(&total_d(&model, report.witness.as_ref().unwrap()).unwrap(), &c);
    }

    #[test]
    fn koszul_class_has_no_witness() {
        let model = single_chart(&["x", "y"], "x*y");
        let r = model.charts()[0].ring.clone();
        let c: OmegaCochain = [(Simplex::vertex(0), DiffForm::parse(&r, "-1 dx^dy").unwrap())].into_iter().collect();
        let report = exact_witness(&model, &c, t(6, 0)).unwrap();
        assert_eq!(report.outcome, Outcome::NoWitnessWithinTruncation);
    }

    #[test]
    fn non_closed_input_is_rejected() {
        let model = single_chart(&["x", "y"], "x*y");
        let r = model.charts()[0].ring.clone();
        let c: OmegaCochain = [(Simplex::vertex(0), DiffForm::parse(&r, "dx").unwrap())].into_iter().collect();
        assert!(matches!(exact_witness(&model, &c, t(2, 0)), Err(SolverError::NotClosed(_))));
    }

    #[test]
    fn oversized_truncation_is_refused() {
        let model = single_chart(&["x", "y", "z"], "x*y*z");
        assert!(matches!(
            hh_dim(&model, t(60, 0), Parity::Even),
            Err(SolverError::TooLarge { .. })
        ));
    }
}
