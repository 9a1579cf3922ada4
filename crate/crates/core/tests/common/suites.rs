//! Randomized invariant suites: graded algebra, the factorization identities,
//! `D² = 0` on cover models, and the behaviour of the Chern character under
//! direct sums, shifts, frame changes and tensor products. Each suite runs a
//! given number of random cases and reports the first failure.

use std::sync::Arc;

use mfchern_core::cech::{total_d, OmegaCochain};
use mfchern_core::chern::{cech_chern, cech_chern_in_frames, cech_components_in_frame, local_chern};
use mfchern_core::cover::{LocalConnections, Simplex};
use mfchern_core::forms::d_function;
use mfchern_core::mfcore::{hom_differential, supercommutator};
use mfchern_core::problem::Problem;
use mfchern_core::{corpus, DiffForm, FormMatrix, GradedMatrix, Ring};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use super::*;

fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn corpus_problem(name: &str) -> Problem {
    corpus::load(name).unwrap().unwrap()
}

fn ranks_strategy() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=2, 0usize..=2)
}

fn random_connections(p: &Problem, specs: &[Vec<FormSpec>]) -> LocalConnections {
    let conns = p
        .model
        .charts()
        .iter()
        .zip(specs)
        .map(|(c, s)| build_connection(&c.ring, p.mf.ranks(), s))
        .collect();
    LocalConnections::new(&p.model, &p.mf, conns).unwrap()
}

fn scalar_identity(ring: &Arc<Ring>, ranks: (usize, usize), form: &DiffForm) -> GradedMatrix {
    let scaled = |n| FormMatrix::identity(ring, n).map(ring, |e: &DiffForm| e.wedge(form));
    GradedMatrix::even(scaled(ranks.0), scaled(ranks.1)).unwrap()
}

pub fn ring_axioms(cases: u32) -> Result<(), String> {
    run(cases, (terms(3, 4, 3), terms(3, 4, 3), terms(3, 4, 3)), |(a, b, c)| {
        let r = Ring::new(["x", "y", "z"], ["x"]).unwrap();
        let (a, b, c) = (build_poly(&r, &a), build_poly(&r, &b), build_poly(&r, &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        let x = build_poly(&r, &vec![(vec![1, 0, 0], 1)]);
        prop_assert!((&x * &x.inverse().unwrap()).constant_value() == Some(coeff(1)));
        Ok(())
    })
}

pub fn wedge_is_graded_commutative(cases: u32) -> Result<(), String> {
    run(cases, (form_spec(3, 3), form_spec(3, 3), 0usize..=3, 0usize..=3), |(a, b, qa, qb)| {
        let r = ring3();
        let (a, b) = (build_form(&r, &a, Some(qa)), build_form(&r, &b, Some(qb)));
        let ba = b.wedge(&a);
        let expected = if qa * qb % 2 == 1 { -&ba } else { ba };
        prop_assert_eq!(a.wedge(&b), expected);
        Ok(())
    })
}

pub fn d_squares_to_zero(cases: u32) -> Result<(), String> {
    run(cases, form_spec(3, 4), |a| {
        let r = ring3();
        prop_assert!(build_form(&r, &a, None).exterior_d().exterior_d().is_zero());
        Ok(())
    })
}

pub fn dw_wedge_squares_to_zero(cases: u32) -> Result<(), String> {
    run(cases, (form_spec(3, 4), terms(3, 4, 3)), |(a, w)| {
        let r = ring3();
        let w = build_poly(&r, &w);
        let a = build_form(&r, &a, None);
        prop_assert!(a.dw_wedge(&w).unwrap().dw_wedge(&w).unwrap().is_zero());
        Ok(())
    })
}

pub fn supertrace_is_graded_cyclic(cases: u32) -> Result<(), String> {
    run(cases, (ranks_strategy(), graded_spec(3), graded_spec(3)), |(ranks, a, b)| {
        let r = ring3();
        let (fa, fb) = (build_graded(&r, ranks, &a), build_graded(&r, ranks, &b));
        let ab = fa.gmul(&fb).unwrap().supertrace();
        let ba = fb.gmul(&fa).unwrap().supertrace();
        let odd = (usize::from(a.odd) * usize::from(b.odd) + a.q * b.q) % 2 == 1;
        prop_assert_eq!(ab, if odd { -&ba } else { ba });
        Ok(())
    })
}

pub fn factorization_curvature_identity(cases: u32) -> Result<(), String> {
    run(cases, (mf_spec(3), one_forms(3)), |(mf, conn)| {
        let r = ring3();
        let mf = build_mf(&r, &mf);
        prop_assert!(mf.validate().is_ok());
        let s = supercommutator(&mf, &build_connection(&r, mf.ranks(), &conn)).unwrap();
        let e = mf.e();
        let lhs = e.gmul(&s).unwrap().add(&s.gmul(&e).unwrap()).unwrap();
        prop_assert_eq!(lhs, scalar_identity(&r, mf.ranks(), &d_function(mf.potential())));
        Ok(())
    })
}

pub fn hom_differential_squares_to_zero(cases: u32) -> Result<(), String> {
    run(cases, (mf_spec(3), graded_spec(3)), |(mf, f)| {
        let r = ring3();
        let mf = build_mf(&r, &mf);
        let f = build_graded(&r, mf.ranks(), &f);
        let df = hom_differential(&f, &mf).unwrap();
        prop_assert!(df.is_zero() || hom_differential(&df, &mf).unwrap().is_zero());
        Ok(())
    })
}

pub fn local_chern_is_dw_closed(cases: u32) -> Result<(), String> {
    run(cases, (mf_spec(3), one_forms(3)), |(mf, conn)| {
        let r = ring3();
        let mf = build_mf(&r, &mf);
        let ch = local_chern(&mf, &build_connection(&r, mf.ranks(), &conn)).unwrap();
        prop_assert!(ch.dw_wedge(mf.potential()).unwrap().is_zero());
        Ok(())
    })
}

pub fn local_chern_is_additive(cases: u32) -> Result<(), String> {
    run(cases, (terms(3, 3, 2), terms(3, 3, 2), terms(3, 3, 2), one_forms(3), one_forms(3)), |(a, b, c, ca, cb)| {
        // two rank-1 factorizations of the same potential, so the sum stays rank ≤ 2
        let r = ring3();
        let (pa, pb, pc) = (build_poly(&r, &a), build_poly(&r, &b), build_poly(&r, &c));
        let m = mfchern_core::MatrixFactorization::koszul(&(&pa * &pb), &pc).unwrap();
        let n = mfchern_core::MatrixFactorization::koszul(&pa, &(&pb * &pc)).unwrap();
        let (cm, cn) = (build_connection(&r, (1, 1), &ca), build_connection(&r, (1, 1), &cb));
        let sum = local_chern(&m.direct_sum(&n).unwrap(), &cm.direct_sum(&cn)).unwrap();
        prop_assert_eq!(sum, &local_chern(&m, &cm).unwrap() + &local_chern(&n, &cn).unwrap());
        Ok(())
    })
}

pub fn shift_negates_local_chern(cases: u32) -> Result<(), String> {
    run(cases, (mf_spec(3), one_forms(3)), |(mf, conn)| {
        let r = ring3();
        let mf = build_mf(&r, &mf);
        let conn = build_connection(&r, mf.ranks(), &conn);
        let ch = local_chern(&mf, &conn).unwrap();
        prop_assert_eq!(local_chern(&mf.shift(), &conn.shift()).unwrap(), -&ch);
        Ok(())
    })
}

pub fn tensor_of_koszul_pairs_is_wedge_of_factors(cases: u32) -> Result<(), String> {
    run(cases, ((terms(2, 3, 2), terms(2, 3, 2)), (terms(2, 3, 2), terms(2, 3, 2)), proptest::collection::vec(form_spec(2, 2), 2), proptest::collection::vec(form_spec(2, 2), 2)), |(ab, cd, ca, cb)| {
        let r = Ring::polynomial(["x", "y", "u", "v"]).unwrap();
        // factor one lives in x, y; factor two in u, v
        let lift = |t: &Terms, second: bool| -> Terms {
            t.iter().map(|(e, c)| {
                let mut full = vec![0i8; 4];
                let off = if second { 2 } else { 0 };
                full[off] = e[0];
                full[off + 1] = e[1];
                (full, *c)
            }).collect()
        };
        let lift_form = |s: &FormSpec, second: bool| -> DiffForm {
            let r2 = Ring::polynomial(["a", "b"]).unwrap();
            let local = build_form(&r2, s, Some(1));
            let mut out = DiffForm::zero(&r);
            for (w, coeff) in local.components() {
                let idx = w.indices()[0] + if second { 2 } else { 0 };
                let terms: Terms = coeff.terms().map(|(m, c)| {
                    (vec![m.0[0] as i8, m.0[1] as i8], c.to_integer().try_into().unwrap())
                }).collect();
                out = &out + &DiffForm::term(build_poly(&r, &lift(&terms, second)), mfchern_core::Wedge::single(idx));
            }
            out
        };
        let m = mfchern_core::MatrixFactorization::koszul(&build_poly(&r, &lift(&ab.0, false)), &build_poly(&r, &lift(&ab.1, false))).unwrap();
        let n = mfchern_core::MatrixFactorization::koszul(&build_poly(&r, &lift(&cd.0, true)), &build_poly(&r, &lift(&cd.1, true))).unwrap();
        let one = |f: DiffForm| FormMatrix::from_rows(&r, vec![vec![f]], 1).unwrap();
        let cm = mfchern_core::Connection::new(one(lift_form(&ca[0], false)), one(lift_form(&ca[1], false))).unwrap();
        let cn = mfchern_core::Connection::new(one(lift_form(&cb[0], true)), one(lift_form(&cb[1], true))).unwrap();
        let t = m.tensor(&n).unwrap();
        prop_assert!(t.validate().is_ok());
        let lhs = local_chern(&t, &cm.tensor(&cn)).unwrap();
        prop_assert_eq!(lhs, local_chern(&m, &cm).unwrap().wedge(&local_chern(&n, &cn).unwrap()));
        Ok(())
    })
}

pub fn total_d_squares_to_zero(cases: u32) -> Result<(), String> {
    run(cases, (prop_oneof![Just("p1_o1"), Just("punctured_plane"), Just("punctured_space")], proptest::collection::vec((0usize..16, form_spec(3, 3)), 1..6)), |(model, entries)| {
        let p = corpus_problem(model);
        let simplices: Vec<Simplex> = p.model.simplices().cloned().collect();
        let c: OmegaCochain = entries.iter().map(|(k, spec)| {
            let s = simplices[k % simplices.len()].clone();
            let ring = p.model.ring_of(&s).unwrap().clone();
            (s, build_form(&ring, spec, None))
        }).collect();
        let d = total_d(&p.model, &c).unwrap();
        prop_assert!(total_d(&p.model, &d).unwrap().is_zero());
        Ok(())
    })
}

pub fn cech_chern_is_additive(cases: u32) -> Result<(), String> {
    run(cases, (proptest::collection::vec(one_forms(2), 2), proptest::collection::vec(one_forms(2), 2)), |(ca, cb)| {
        let p = corpus_problem("punctured_plane");
        let (na, nb) = (random_connections(&p, &ca), random_connections(&p, &cb));
        let sum = p.mf.direct_sum(&p.model, &p.mf).unwrap();
        let lhs = cech_chern(&p.model, &sum, &na.direct_sum(&nb)).unwrap();
        let rhs = cech_chern(&p.model, &p.mf, &na).unwrap().add(&cech_chern(&p.model, &p.mf, &nb).unwrap());
        prop_assert_eq!(lhs, rhs);
        Ok(())
    })
}

pub fn cech_components_are_frame_independent(cases: u32) -> Result<(), String> {
    run(cases, proptest::collection::vec(one_forms(3), 3), |specs| {
        let p = corpus_problem("punctured_space");
        let conns = random_connections(&p, &specs);
        for s in p.model.simplices() {
            let reference = cech_components_in_frame(&p.model, &p.mf, &conns, s, s.first()).unwrap().supertrace();
            for &frame in &s.members()[1..] {
                let other = cech_components_in_frame(&p.model, &p.mf, &conns, s, frame).unwrap().supertrace();
                prop_assert_eq!(&other, &reference);
            }
        }
        prop_assert_eq!(
            cech_chern_in_frames(&p.model, &p.mf, &conns, |s| s.last()).unwrap(),
            cech_chern(&p.model, &p.mf, &conns).unwrap()
        );
        Ok(())
    })
}

/// Every suite, by name.
pub const ALL: &[(&str, fn(u32) -> Result<(), String>)] = &[
    ("ring_axioms", ring_axioms),
    ("wedge_is_graded_commutative", wedge_is_graded_commutative),
    ("d_squares_to_zero", d_squares_to_zero),
    ("dw_wedge_squares_to_zero", dw_wedge_squares_to_zero),
    ("supertrace_is_graded_cyclic", supertrace_is_graded_cyclic),
    ("factorization_curvature_identity", factorization_curvature_identity),
    ("hom_differential_squares_to_zero", hom_differential_squares_to_zero),
    ("local_chern_is_dw_closed", local_chern_is_dw_closed),
    ("local_chern_is_additive", local_chern_is_additive),
    ("shift_negates_local_chern", shift_negates_local_chern),
    ("tensor_of_koszul_pairs_is_wedge_of_factors", tensor_of_koszul_pairs_is_wedge_of_factors),
    ("total_d_squares_to_zero", total_d_squares_to_zero),
    ("cech_chern_is_additive", cech_chern_is_additive),
    ("cech_components_are_frame_independent", cech_components_are_frame_independent),
];
