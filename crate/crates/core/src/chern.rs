//! Chern character and boundary-bulk map: the local supertrace formula, the
//! Čech family built from connection differences, and its assembly into an
//! `Ω_dw`-valued Čech cocycle.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use thiserror::Error;

use crate::cech::{total_d, OmegaCochain};
use crate::cover::{connection_in_frame, CoverError, CoverModel, GlobalMF, LocalConnections, Simplex};
use crate::exactring::Coeff;
use crate::forms::DiffForm;
use crate::mfcore::{hom_differential, supercommutator, Connection, GradedMatrix, MatrixFactorization, MfError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChernError {
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Mf(#[from] MfError),
    #[error("endomorphism cochain is not closed: {0}")]
    NotClosed(String),
    #[error("{0}")]
    Shape(String),
}

impl From<crate::exactring::RingError> for ChernError {
    fn from(e: crate::exactring::RingError) -> Self {
        ChernError::Mf(e.into())
    }
}

/// Endomorphism-valued Čech cochain; the entry on `(i0..ip)` is written in
/// the `i0`-frame over the overlap ring.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EndoCochain {
    entries: BTreeMap<Simplex, GradedMatrix>,
}

impl EndoCochain {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, model: &CoverModel, mf: &GlobalMF, s: Simplex, f: GradedMatrix) -> Result<(), ChernError> {
        crate::exactring::check_ring(f.ring(), model.ring_of(&s)?)?;
        if f.ranks() != mf.ranks() {
            return Err(ChernError::Shape(format!(
                "endomorphism on {} has ranks {:?}, expected {:?}",
                model.label(&s),
                f.ranks(),
                mf.ranks()
            )));
        }
        if f.parity().is_none() {
            return Err(MfError::MixedParity.into());
        }
        self.entries.insert(s, f);
        Ok(())
    }

    /// The identity as a 0-cochain.
    pub fn identity(model: &CoverModel, mf: &GlobalMF) -> Self {
        let (r0, r1) = mf.ranks();
        EndoCochain {
            entries: (0..model.num_charts())
                .map(|i| (Simplex::vertex(i), GradedMatrix::identity(&model.charts()[i].ring, r0, r1)))
                .collect(),
        }
    }

    pub fn get(&self, s: &Simplex) -> Option<&GradedMatrix> {
        self.entries.get(s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Simplex, &GradedMatrix)> {
        self.entries.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn factorial(n: usize) -> Coeff {
    BigRational::from_integer((1..=n).map(BigInt::from).product::<BigInt>().max(BigInt::one()))
}

/// `str(Σ_{i≤n} θ^i / i!)` with `θ = [∇, e]` and `n` the number of variables.
pub fn local_chern(mf: &MatrixFactorization, conn: &Connection) -> Result<DiffForm, ChernError> {
    let theta = supercommutator(mf, conn)?;
    let (r0, r1) = mf.ranks();
    let n = mf.ring().nvars();
    let mut power = GradedMatrix::identity(mf.ring(), r0, r1);
    let mut total = power.supertrace();
    for i in 1..=n {
        power = power.gmul(&theta)?;
        total = &total + &power.supertrace().scale(&(Coeff::one() / factorial(i)));
    }
    Ok(total)
}

/// Ingredients for the family on one tuple, all in the frame of one chart
/// and over the tuple's overlap ring.
struct TupleData {
    /// `[∇_{i_j}, e]` for each member.
    thetas: Vec<GradedMatrix>,
    /// `∇_{i_j} - ∇_{i_{j+1}}` as even matrices of 1-forms.
    diffs: Vec<GradedMatrix>,
    ring_vars: usize,
    identity: GradedMatrix,
}

fn tuple_data(
    model: &CoverModel,
    mf: &GlobalMF,
    conns: &LocalConnections,
    s: &Simplex,
    frame: usize,
) -> Result<TupleData, ChernError> {
    if !s.contains(frame) {
        return Err(ChernError::Shape(format!(
            "frame chart {} is not a member of {}",
            model.chart_name(frame),
            model.label(s)
        )));
    }
    let e = mf.presentation_on(model, frame, s)?;
    let transported: Vec<Connection> = s
        .members()
        .iter()
        .map(|&j| connection_in_frame(model, mf, conns.get(j), j, frame, s))
        .collect::<Result<_, _>>()?;
    let thetas = transported
        .iter()
        .map(|c| supercommutator(&e, c))
        .collect::<Result<Vec<_>, _>>()?;
    let diffs = transported
        .windows(2)
        .map(|w| w[0].as_graded().sub(&w[1].as_graded()))
        .collect::<Result<Vec<_>, _>>()?;
    let (r0, r1) = mf.ranks();
    let ring = model.ring_of(s)?;
    Ok(TupleData {
        thetas,
        diffs,
        ring_vars: ring.nvars(),
        identity: GradedMatrix::identity(ring, r0, r1),
    })
}

/// Visits every `k = (k0..kp)` with `Σk + p ≤ n` (so `budget = n - p`), passing the product
/// `θ_0^{k0} Δ_1 θ_1^{k1} .. Δ_p θ_p^{kp}`.
fn for_each_word(
    data: &TupleData,
    visit: &mut dyn FnMut(&[usize], &GradedMatrix) -> Result<(), ChernError>,
) -> Result<(), ChernError> {
    fn go(
        data: &TupleData,
        j: usize,
        prefix: &GradedMatrix,
        budget: usize,
        ks: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize], &GradedMatrix) -> Result<(), ChernError>,
    ) -> Result<(), ChernError> {
        let p = data.thetas.len() - 1;
        let mut current = prefix.clone();
        for k in 0..=budget {
            if k > 0 {
                current = current.gmul(&data.thetas[j])?;
                if current.is_zero() {
                    break;
                }
            }
            ks.push(k);
            if j == p {
                visit(ks, &current)?;
            } else {
                let next = current.gmul(&data.diffs[j])?;
                if !next.is_zero() {
                    go(data, j + 1, &next, budget - k, ks, visit)?;
                }
            }
            ks.pop();
        }
        Ok(())
    }
    let p = data.thetas.len() - 1;
    if p > data.ring_vars {
        return Ok(());
    }
    let mut ks = Vec::with_capacity(p + 1);
    go(data, 0, &data.identity, data.ring_vars - p, &mut ks, visit)
}

/// `τ_p(k) = (-1)^{Σ j (k_j + 1)}`; `true` means negative.
fn tau_sign(ks: &[usize]) -> bool {
    ks.iter().enumerate().map(|(j, k)| j * (k + 1)).sum::<usize>() % 2 == 1
}

/// `Σ_k τ_p(k) θ_0^{k0} (∇_{i0} - ∇_{i1}) θ_1^{k1} .. θ_p^{kp}` on the tuple,
/// in the frame of chart `frame`.
pub fn cech_components_in_frame(
    model: &CoverModel,
    mf: &GlobalMF,
    conns: &LocalConnections,
    s: &Simplex,
    frame: usize,
) -> Result<GradedMatrix, ChernError> {
    let data = tuple_data(model, mf, conns, s, frame)?;
    let mut total = GradedMatrix::zero(data.identity.ring(), mf.ranks().0, mf.ranks().1);
    for_each_word(&data, &mut |ks, word| {
        total = if tau_sign(ks) { total.sub(word)? } else { total.add(word)? };
        Ok(())
    })?;
    Ok(total)
}

/// [`cech_components_in_frame`] in the frame of the tuple's first chart.
pub fn cech_components(
    model: &CoverModel,
    mf: &GlobalMF,
    conns: &LocalConnections,
    s: &Simplex,
) -> Result<GradedMatrix, ChernError> {
    cech_components_in_frame(model, mf, conns, s, s.first())
}

/// `Σ_k τ_p(k) / (Σk + p)! · word(k)` on one tuple, before the supertrace.
/// With the alternating Čech differential and `γ = (-1)^(p+1)` this is the
/// sign pattern whose supertrace is `D`-closed; the variant carrying an extra
/// `(-1)^(p(p-1)/2)` is not.
fn weighted_family(data: &TupleData, ranks: (usize, usize)) -> Result<GradedMatrix, ChernError> {
    let p = data.thetas.len() - 1;
    let mut total = GradedMatrix::zero(data.identity.ring(), ranks.0, ranks.1);
    for_each_word(data, &mut |ks, word| {
        let weight = Coeff::one() / factorial(ks.iter().sum::<usize>() + p);
        let term = word.scale(&if tau_sign(ks) { -weight } else { weight });
        total = total.add(&term)?;
        Ok(())
    })?;
    Ok(total)
}

fn chern_on_tuple(
    model: &CoverModel,
    mf: &GlobalMF,
    conns: &LocalConnections,
    s: &Simplex,
    frame: usize,
) -> Result<DiffForm, ChernError> {
    let data = tuple_data(model, mf, conns, s, frame)?;
    Ok(weighted_family(&data, mf.ranks())?.supertrace())
}

/// The Chern character as an `Ω_dw`-valued Čech cochain.
pub fn cech_chern(model: &CoverModel, mf: &GlobalMF, conns: &LocalConnections) -> Result<OmegaCochain, ChernError> {
    cech_chern_in_frames(model, mf, conns, |s| s.first())
}

/// Like [`cech_chern`], evaluating each tuple in the frame chosen by `frame`.
pub fn cech_chern_in_frames(
    model: &CoverModel,
    mf: &GlobalMF,
    conns: &LocalConnections,
    frame: impl Fn(&Simplex) -> usize + Sync,
) -> Result<OmegaCochain, ChernError> {
    let simplices: Vec<Simplex> = model.simplices().cloned().collect();
    let values: Vec<DiffForm> = simplices
        .par_iter()
        .map(|s| chern_on_tuple(model, mf, conns, s, frame(s)))
        .collect::<Result<_, _>>()?;
    Ok(simplices.into_iter().zip(values).collect())
}

/// `D_Hom f = č f + (-1)^p ∂f`, with every entry in the frame of its tuple's first chart.
pub fn endo_total_d(model: &CoverModel, mf: &GlobalMF, f: &EndoCochain) -> Result<EndoCochain, ChernError> {
    let mut out: BTreeMap<Simplex, GradedMatrix> = BTreeMap::new();
    let mut accumulate = |t: Simplex, m: GradedMatrix| -> Result<(), ChernError> {
        let next = match out.remove(&t) {
            Some(old) => old.add(&m)?,
            None => m,
        };
        out.insert(t, next);
        Ok(())
    };
    for (s, fs) in &f.entries {
        let e = mf.presentation_on(model, s.first(), s)?;
        let dfs = hom_differential(fs, &e)?;
        accumulate(s.clone(), if s.degree() % 2 == 0 { dfs } else { dfs.neg() })?;
        for c in 0..model.num_charts() {
            if s.contains(c) {
                continue;
            }
            let mut members = s.members().to_vec();
            members.push(c);
            let t = Simplex::new(members).expect("distinct members");
            if !model.has_overlap(&t) {
                continue;
            }
            let k = t.members().iter().position(|&m| m == c).expect("member");
            let mut restricted = model.restrict_graded(fs, s, &t)?;
            if s.first() != t.first() {
                restricted = restricted.conjugate(&mf.transition_on(model, t.first(), s.first(), &t)?)?;
            }
            accumulate(t, if k % 2 == 0 { restricted } else { restricted.neg() })?;
        }
    }
    Ok(EndoCochain {
        entries: out.into_iter().filter(|(_, m)| !m.is_zero()).collect(),
    })
}

/// Warnings produced when the input endomorphism is not closed.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryBulk {
    pub cochain: OmegaCochain,
    pub warnings: Vec<String>,
}

/// `τ(f)`: on each output tuple `(i0..i(p+q))`, the supertrace of the weighted
/// family on the front face `(i0..ip)` composed with `f` on the back face
/// `(ip..i(p+q))`, both restricted to the tuple and written in the `i0`-frame.
/// With `strict`, a non-closed `f` is an error; otherwise it is reported in
/// the warnings.
pub fn boundary_bulk(
    model: &CoverModel,
    mf: &GlobalMF,
    conns: &LocalConnections,
    f: &EndoCochain,
    strict: bool,
) -> Result<BoundaryBulk, ChernError> {
    let mut warnings = Vec::new();
    let df = endo_total_d(model, mf, f)?;
    if let Some((s, _)) = df.iter().next() {
        let msg = format!("D(f) is nonzero on {}", model.label(s));
        if strict {
            return Err(ChernError::NotClosed(msg));
        }
        warnings.push(msg);
    }
    let simplices: Vec<Simplex> = model.simplices().cloned().collect();
    let values: Vec<DiffForm> = simplices
        .par_iter()
        .map(|t| tau_on_tuple(model, mf, conns, f, t))
        .collect::<Result<_, _>>()?;
    Ok(BoundaryBulk {
        cochain: simplices.into_iter().zip(values).collect(),
        warnings,
    })
}

fn tau_on_tuple(
    model: &CoverModel,
    mf: &GlobalMF,
    conns: &LocalConnections,
    f: &EndoCochain,
    t: &Simplex,
) -> Result<DiffForm, ChernError> {
    let r = t.degree();
    let mut total = DiffForm::zero(model.ring_of(t)?);
    for p in 0..=r {
        let back = t.slice(p, r);
        let Some(fb) = f.get(&back) else { continue };
        let front = t.slice(0, p);
        let data = tuple_data(model, mf, conns, &front, front.first())?;
        let family = model.restrict_graded(&weighted_family(&data, mf.ranks())?, &front, t)?;
        let mut endo = model.restrict_graded(fb, &back, t)?;
        if back.first() != t.first() {
            endo = endo.conjugate(&mf.transition_on(model, t.first(), back.first(), t)?)?;
        }
        total = &total + &family.gmul(&endo)?.supertrace();
    }
    Ok(total)
}

/// Sanity check used by tests and the CLI: `D(ch) = 0`.
pub fn chern_is_closed(model: &CoverModel, mf: &GlobalMF, conns: &LocalConnections) -> Result<bool, ChernError> {
    Ok(total_d(model, &cech_chern(model, mf, conns)?)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::CoverBuilder;
    use crate::exactring::{LocalizedPoly, Ring, RingMap};
    use crate::matrix::{FormMatrix, PolyMatrix};

    fn poly(r: &std::sync::Arc<Ring>, s: &str) -> LocalizedPoly {
        LocalizedPoly::parse(r, s).unwrap()
    }

    fn form(r: &std::sync::Arc<Ring>, s: &str) -> DiffForm {
        DiffForm::parse(r, s).unwrap()
    }

    #[test]
    fn koszul_local_chern() {
        let r = Ring::polynomial(["x", "y"]).unwrap();
        let mf = MatrixFactorization::koszul(&poly(&r, "x"), &poly(&r, "y")).unwrap();
        let ch = local_chern(&mf, &Connection::trivial(&r, 1, 1)).unwrap();
        assert_eq!(ch, form(&r, "-1 dx^dy"));
    }

    #[test]
    fn contractible_local_chern_vanishes() {
        let r = Ring::polynomial(["x", "y"]).unwrap();
        for w in ["x*y", "x^2 + y^3"] {
            let mf = MatrixFactorization::koszul(&poly(&r, "1"), &poly(&r, w)).unwrap();
            assert!(local_chern(&mf, &Connection::trivial(&r, 1, 1)).unwrap().is_zero());
        }
    }

    #[test]
    fn one_variable_equal_ranks_vanishes() {
        let r = Ring::polynomial(["x"]).unwrap();
        let mf = MatrixFactorization::koszul(&poly(&r, "x^2"), &poly(&r, "x + 1")).unwrap();
        let a0 = FormMatrix::from_rows(&r, vec![vec![form(&r, "x dx")]], 1).unwrap();
        let conn = Connection::new(a0, FormMatrix::zeros(&r, 1, 1)).unwrap();
        assert!(local_chern(&mf, &conn).unwrap().is_zero());
    }

    fn p1_o1() -> (CoverModel, GlobalMF) {
        let kx = Ring::polynomial(["x"]).unwrap();
        let ky = Ring::polynomial(["y"]).unwrap();
        let lx = Ring::new(["x"], ["x"]).unwrap();
        let mut b = CoverBuilder::new();
        b.chart("U0", kx.clone()).unwrap();
        b.chart("U1", ky.clone()).unwrap();
        let m1 = RingMap::from_named(&ky, &lx, [("y", poly(&lx, "x^-1"))]).unwrap();
        b.overlap(&[0, 1], lx.clone(), vec![(Simplex::vertex(1), m1)]).unwrap();
        b.potential(0, LocalizedPoly::zero(&kx));
        let model = b.build().unwrap();
        let charts = [&kx, &ky]
            .iter()
            .map(|r| {
                MatrixFactorization::new(PolyMatrix::zeros(r, 0, 1), PolyMatrix::zeros(r, 1, 0), LocalizedPoly::zero(r))
                    .unwrap()
            })
            .collect();
        let g0 = PolyMatrix::from_rows(&lx, vec![vec![poly(&lx, "x")]], 1).unwrap();
        let mf = GlobalMF::new(&model, charts, vec![((0, 1), g0, PolyMatrix::zeros(&lx, 0, 0))]).unwrap();
        (model, mf)
    }

    #[test]
    fn p1_line_bundle_first_chern_class() {
        let (model, mf) = p1_o1();
        let conns = LocalConnections::trivial(&model, &mf);
        let ch = cech_chern(&model, &mf, &conns).unwrap();
        let pair = Simplex::new(vec![0, 1]).unwrap();
        let lx = model.ring_of(&pair).unwrap();
        assert_eq!(ch.get(&Simplex::vertex(0)).unwrap(), &DiffForm::one(&model.charts()[0].ring));
        assert_eq!(ch.get(&Simplex::vertex(1)).unwrap(), &DiffForm::one(&model.charts()[1].ring));
        assert_eq!(ch.get(&pair).unwrap(), &form(lx, "-x^-1 dx"));
        assert!(total_d(&model, &ch).unwrap().is_zero());
    }

    #[test]
    fn identity_boundary_bulk_is_chern() {
        let (model, mf) = p1_o1();
        let conns = LocalConnections::trivial(&model, &mf);
        let id = EndoCochain::identity(&model, &mf);
        let tau = boundary_bulk(&model, &mf, &conns, &id, true).unwrap();
        assert!(tau.warnings.is_empty());
        assert_eq!(tau.cochain, cech_chern(&model, &mf, &conns).unwrap());
    }

    #[test]
    fn odd_boundary_bulk_on_x_squared() {
        let r = Ring::polynomial(["x"]).unwrap();
        let mut b = CoverBuilder::new();
        b.chart("U0", r.clone()).unwrap();
        b.potential(0, poly(&r, "x^2"));
        let model = b.build().unwrap();
        let mf = GlobalMF::on_charts(
            &model,
            vec![MatrixFactorization::koszul(&poly(&r, "x"), &poly(&r, "x")).unwrap()],
        )
        .unwrap();
        let conns = LocalConnections::trivial(&model, &mf);
        let one = FormMatrix::identity(&r, 1);
        let f = GradedMatrix::odd(one.neg(), one).unwrap();
        let mut endo = EndoCochain::new();
        endo.insert(&model, &mf, Simplex::vertex(0), f).unwrap();
        let tau = boundary_bulk(&model, &mf, &conns, &endo, true).unwrap();
        assert_eq!(tau.cochain.get(&Simplex::vertex(0)).unwrap(), &form(&r, "2 dx"));
    }

    #[test]
    fn non_closed_endo_rejected_when_strict() {
        let r = Ring::polynomial(["x"]).unwrap();
        let mut b = CoverBuilder::new();
        b.chart("U0", r.clone()).unwrap();
        b.potential(0, poly(&r, "x^2"));
        let model = b.build().unwrap();
        let mf = GlobalMF::on_charts(
            &model,
            vec![MatrixFactorization::koszul(&poly(&r, "x"), &poly(&r, "x")).unwrap()],
        )
        .unwrap();
        let conns = LocalConnections::trivial(&model, &mf);
        let one = FormMatrix::identity(&r, 1);
        let f = GradedMatrix::odd(one.clone(), one).unwrap();
        let mut endo = EndoCochain::new();
        endo.insert(&model, &mf, Simplex::vertex(0), f).unwrap();
        assert!(matches!(
            boundary_bulk(&model, &mf, &conns, &endo, true),
            Err(ChernError::NotClosed(_))
        ));
        let lenient = boundary_bulk(&model, &mf, &conns, &endo, false).unwrap();
        assert_eq!(lenient.warnings.len(), 1);
    }

    /// `A^n \ 0` covered by the coordinate charts `x_i ≠ 0`, with the rank-(1,1)
    /// factorization `(e0, e1)` written in the frame `frames[i]` on chart `i`.
    fn coordinate_cover(
        vars: &[&str],
        w: &str,
        e: (&str, &str),
        frames: &[(&str, &str)],
        conn_forms: &[(&str, &str)],
    ) -> (CoverModel, GlobalMF, LocalConnections) {
        let n = vars.len();
        let ring_inverting = |inv: &[usize]| Ring::new(vars.iter().copied(), inv.iter().map(|&i| vars[i])).unwrap();
        let mut b = CoverBuilder::new();
        for i in 0..n {
            b.chart(&format!("U{i}"), ring_inverting(&[i])).unwrap();
        }
        for mask in 1u32..(1 << n) {
            let s: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            if s.len() > 1 {
                b.overlap(&s, ring_inverting(&s), vec![]).unwrap();
            }
        }
        b.potential(0, poly(&ring_inverting(&[0]), w));
        let model = b.build().unwrap();
        let one = |r: &std::sync::Arc<Ring>, s: &str| PolyMatrix::from_rows(r, vec![vec![poly(r, s)]], 1).unwrap();
        let frame = |r: &std::sync::Arc<Ring>, i: usize| {
            crate::mfcore::FrameChange::new(one(r, frames[i].0), one(r, frames[i].1)).unwrap()
        };
        let charts = (0..n)
            .map(|i| {
                let r = &model.charts()[i].ring;
                let base = MatrixFactorization::koszul(&poly(r, e.0), &poly(r, e.1)).unwrap();
                base.change_frame(&frame(r, i)).unwrap()
            })
            .collect();
        let mut transitions = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let r = model.ring_of(&Simplex::new(vec![i, j]).unwrap()).unwrap();
                let gij = frame(r, i).compose(&frame(r, j).inverse()).unwrap();
                transitions.push(((i, j), gij.g0, gij.g1));
            }
        }
        let mf = GlobalMF::new(&model, charts, transitions).unwrap();
        let conns = (0..n)
            .map(|i| {
                let r = &model.charts()[i].ring;
                let a0 = FormMatrix::from_rows(r, vec![vec![form(r, conn_forms[i].0)]], 1).unwrap();
                let a1 = FormMatrix::from_rows(r, vec![vec![form(r, conn_forms[i].1)]], 1).unwrap();
                Connection::new(a0, a1).unwrap()
            })
            .collect();
        let conns = LocalConnections::new(&model, &mf, conns).unwrap();
        crate::cover::validate_cover(&model, &mf).unwrap();
        (model, mf, conns)
    }

    fn assert_closed(model: &CoverModel, ch: &OmegaCochain) {
        let d = total_d(model, ch).unwrap();
        let shown: Vec<String> = d.components().iter().map(|(s, q, f)| format!("{} {q} {f}", model.label(s))).collect();
        assert!(d.is_zero(), "{shown:?}");
    }

    #[test]
    fn three_chart_chern_is_closed() {
        let vars = ["x", "y", "z"];
        let frames = [("x", "1"), ("1", "y"), ("z", "z^2")];
        for conns in [
            [("0", "0"), ("0", "0"), ("0", "0")],
            [("y dx + z dz", "x*z dy"), ("dx - y dz", "x^2 dz"), ("x*y dy", "3 dx + z dy")],
        ] {
            let (model, mf, conns) = coordinate_cover(&vars, "x*y*z", ("x", "y*z"), &frames, &conns);
            let ch = cech_chern(&model, &mf, &conns).unwrap();
            assert!(ch.get(&Simplex::new(vec![0, 1, 2]).unwrap()).is_some());
            assert_closed(&model, &ch);
        }
    }

    #[test]
    fn four_chart_chern_is_closed() {
        let vars = ["x", "y", "z", "u"];
        let frames = [("x", "1"), ("1", "y"), ("z", "z^2"), ("u^-1", "u*1")];
        let conns = [("y dx + u dz", "x*z dy"), ("dx - y du", "x^2 dz"), ("x*y dy", "3 dx + z du"), ("du", "z dx")];
        let (model, mf, conns) = coordinate_cover(&vars, "x*y*z*u", ("x*u", "y*z"), &frames, &conns);
        let ch = cech_chern(&model, &mf, &conns).unwrap();
        assert!(ch.get(&Simplex::new(vec![0, 1, 2, 3]).unwrap()).is_some());
        assert_closed(&model, &ch);
    }
}
