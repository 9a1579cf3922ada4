//! Random-input strategies shared by the integration suites. Strategies
//! produce plain data; `build_*` turns it into values over a given ring.

#![allow(dead_code)]

pub mod suites;

use std::sync::Arc;

use mfchern_core::forms::Wedge;
use mfchern_core::mfcore::FrameChange;
use mfchern_core::{
    Coeff, Connection, DiffForm, FormMatrix, GradedMatrix, LocalizedPoly, MatrixFactorization, Monomial, PolyMatrix,
    Ring,
};

use proptest::collection::vec;
use proptest::prelude::*;

/// `(exponents, coefficient)` pairs; exponents on non-inverted variables are
/// folded to their absolute value when built.
pub type Terms = Vec<(Vec<i8>, i8)>;

/// `(index into the wedges of the chosen degree, coefficient)` pairs.
pub type FormSpec = Vec<(usize, Terms)>;

pub fn terms(nvars: usize, max_terms: usize, max_exp: i8) -> impl Strategy<Value = Terms> {
    vec((vec(-max_exp..=max_exp, nvars), -3i8..=3), 0..=max_terms)
}

pub fn form_spec(nvars: usize, max_terms: usize) -> impl Strategy<Value = FormSpec> {
    vec((0usize..64, terms(nvars, max_terms, 2)), 0..=3)
}

pub fn build_poly(ring: &Arc<Ring>, t: &Terms) -> LocalizedPoly {
    let mut p = LocalizedPoly::zero(ring);
    for (exps, c) in t {
        let exps: Vec<i32> = (0..ring.nvars())
            .map(|i| {
                let e = i32::from(exps.get(i).copied().unwrap_or(0));
                if ring.is_inverted(i) {
                    e
                } else {
                    e.abs()
                }
            })
            .collect();
        let term = LocalizedPoly::monomial(ring, Monomial(exps), mfchern_core::exactring::integer(i64::from(*c)));
        p = &p + &term;
    }
    p
}

/// A form of degree `q`, or of mixed degree when `q` is `None`.
pub fn build_form(ring: &Arc<Ring>, spec: &FormSpec, q: Option<usize>) -> DiffForm {
    let n = ring.nvars();
    let mut out = DiffForm::zero(ring);
    for (idx, t) in spec {
        let wedge = match q {
            Some(q) => {
                let all = Wedge::all_of_degree(n, q);
                if all.is_empty() {
                    continue;
                }
                all[idx % all.len()]
            }
            None => Wedge((*idx % (1 << n)) as u32),
        };
        out = &out + &DiffForm::term(build_poly(ring, t), wedge);
    }
    out
}

pub fn build_poly_matrix(ring: &Arc<Ring>, rows: usize, cols: usize, specs: &[Terms]) -> PolyMatrix {
    let entries = (0..rows)
        .map(|i| (0..cols).map(|j| build_poly(ring, &specs[(i * cols + j) % specs.len()])).collect())
        .collect();
    PolyMatrix::from_rows(ring, entries, cols).unwrap()
}

pub fn build_form_matrix(ring: &Arc<Ring>, rows: usize, cols: usize, specs: &[FormSpec], q: Option<usize>) -> FormMatrix {
    let entries = (0..rows)
        .map(|i| (0..cols).map(|j| build_form(ring, &specs[(i * cols + j) % specs.len()], q)).collect())
        .collect();
    FormMatrix::from_rows(ring, entries, cols).unwrap()
}

/// Data for a valid factorization of rank 1 or 2.
#[derive(Debug, Clone)]
pub struct MfSpec {
    pub a: Terms,
    pub b: Terms,
    /// `Some((f, h))` gives rank 2: `{a,b} ⊕ {b,a}` in the frame of the
    /// unipotent changes `[[1,f],[0,1]]` and `[[1,0],[h,1]]`.
    pub rank2: Option<(Terms, Terms)>,
}

pub fn mf_spec(nvars: usize) -> impl Strategy<Value = MfSpec> {
    let t = move || terms(nvars, 3, 2);
    (t(), t(), proptest::option::of((t(), t()))).prop_map(|(a, b, rank2)| MfSpec { a, b, rank2 })
}

pub fn build_mf(ring: &Arc<Ring>, spec: &MfSpec) -> MatrixFactorization {
    let (a, b) = (build_poly(ring, &spec.a), build_poly(ring, &spec.b));
    let k = MatrixFactorization::koszul(&a, &b).unwrap();
    let Some((f, h)) = &spec.rank2 else { return k };
    let sum = k.direct_sum(&MatrixFactorization::koszul(&b, &a).unwrap()).unwrap();
    let one = LocalizedPoly::one(ring);
    let zero = LocalizedPoly::zero(ring);
    let g0 = PolyMatrix::from_rows(ring, vec![vec![one.clone(), build_poly(ring, f)], vec![zero.clone(), one.clone()]], 2).unwrap();
    let g1 = PolyMatrix::from_rows(ring, vec![vec![one.clone(), zero], vec![build_poly(ring, h), one]], 2).unwrap();
    sum.change_frame(&FrameChange::new(g0, g1).unwrap()).unwrap()
}

pub fn one_forms(nvars: usize) -> impl Strategy<Value = Vec<FormSpec>> {
    vec(form_spec(nvars, 2), 4)
}

pub fn build_connection(ring: &Arc<Ring>, ranks: (usize, usize), specs: &[FormSpec]) -> Connection {
    let (a0s, a1s) = specs.split_at(specs.len() / 2);
    Connection::new(
        build_form_matrix(ring, ranks.0, ranks.0, a0s, Some(1)),
        build_form_matrix(ring, ranks.1, ranks.1, a1s, Some(1)),
    )
    .unwrap()
}

/// Homogeneous graded matrix: matrix parity, form degree, entries.
#[derive(Debug, Clone)]
pub struct GradedSpec {
    pub odd: bool,
    pub q: usize,
    pub entries: Vec<FormSpec>,
}

pub fn graded_spec(nvars: usize) -> impl Strategy<Value = GradedSpec> {
    (any::<bool>(), 0..=nvars, vec(form_spec(nvars, 2), 4)).prop_map(|(odd, q, entries)| GradedSpec { odd, q, entries })
}

pub fn build_graded(ring: &Arc<Ring>, ranks: (usize, usize), spec: &GradedSpec) -> GradedMatrix {
    let (r0, r1) = ranks;
    let block = |k: usize, rows, cols| build_form_matrix(ring, rows, cols, &spec.entries[k..=k], Some(spec.q));
    if spec.odd {
        GradedMatrix::odd(block(1, r0, r1), block(2, r1, r0)).unwrap()
    } else {
        GradedMatrix::even(block(0, r0, r0), block(3, r1, r1)).unwrap()
    }
}

pub fn ring3() -> Arc<Ring> {
    Ring::polynomial(["x", "y", "z"]).unwrap()
}

pub fn coeff(n: i64) -> Coeff {
    mfchern_core::exactring::integer(n)
}
