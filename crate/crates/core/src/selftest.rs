//! Invariant checks over the built-in corpus.

use serde::Serialize;

use crate::cech::{check_closed, total_d, OmegaCochain};
use crate::chern::{boundary_bulk, cech_chern, cech_chern_in_frames, EndoCochain};
use crate::corpus::CORPUS;
use crate::homsolver::{basis, TruncationSpec};
use crate::problem::Problem;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub model: String,
    pub property: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub passed: bool,
    pub checks: Vec<Check>,
}

type Outcome = Result<Option<String>, String>;

fn verdict(ok: bool, failure: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(None)
    } else {
        Err(failure())
    }
}

fn square_vanishes(p: &Problem) -> Outcome {
    let trunc = TruncationSpec { maxdeg: 1, maxinv: 1 };
    let top = p.model.simplices().map(|s| s.degree()).max().unwrap_or(0);
    let nvars = p.model.charts().iter().map(|c| c.ring.nvars()).max().unwrap_or(0);
    let mut tried = 0;
    for deg in 0..=top {
        for q in 0..=nvars {
            for b in basis(&p.model, trunc, deg, q) {
                let ring = p.model.ring_of(&b.simplex).map_err(|e| e.to_string())?;
                let c: OmegaCochain = [(b.simplex.clone(), b.form(ring))].into_iter().collect();
                let dd = total_d(&p.model, &total_d(&p.model, &c).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
                if !dd.is_zero() {
                    return Err(format!("D² of {} on {} is nonzero", b.form(ring), p.model.label(&b.simplex)));
                }
                tried += 1;
            }
        }
    }
    Ok(Some(format!("{tried} basis cochains")))
}

fn checks_for(p: &Problem) -> Vec<(String, Outcome)> {
    let mut out: Vec<(String, Outcome)> = Vec::new();
    let ch = match cech_chern(&p.model, &p.mf, &p.connections) {
        Ok(ch) => ch,
        Err(e) => return vec![("chern".into(), Err(e.to_string()))],
    };
    let run = |f: &dyn Fn() -> Result<Outcome, String>| f().unwrap_or_else(Err);

    out.push((
        "chern cocycle is closed".into(),
        run(&|| {
            Ok(match check_closed(&p.model, &ch).map_err(|e| e.to_string())? {
                Ok(()) => Ok(None),
                Err(nc) => Err(nc.to_string()),
            })
        }),
    ));
    out.push((
        "boundary-bulk at the identity equals chern".into(),
        run(&|| {
            let id = EndoCochain::identity(&p.model, &p.mf);
            let tau = boundary_bulk(&p.model, &p.mf, &p.connections, &id, true).map_err(|e| e.to_string())?;
            Ok(verdict(tau.cochain == ch, || "outputs differ".into()))
        }),
    ));
    out.push((
        "frame independence".into(),
        run(&|| {
            let last = cech_chern_in_frames(&p.model, &p.mf, &p.connections, |s| s.last()).map_err(|e| e.to_string())?;
            Ok(verdict(last == ch, || "last-chart frame gives a different cochain".into()))
        }),
    ));
    out.push((
        "shift negates chern".into(),
        run(&|| {
            let shifted = p.mf.shift(&p.model).map_err(|e| e.to_string())?;
            let got = cech_chern(&p.model, &shifted, &p.connections.shift()).map_err(|e| e.to_string())?;
            Ok(verdict(got == ch.neg(), || "ch(E[1]) != -ch(E)".into()))
        }),
    ));
    out.push((
        "chern is additive under direct sum".into(),
        run(&|| {
            let sum = p.mf.direct_sum(&p.model, &p.mf).map_err(|e| e.to_string())?;
            let conns = p.connections.direct_sum(&p.connections);
            let got = cech_chern(&p.model, &sum, &conns).map_err(|e| e.to_string())?;
            Ok(verdict(got == ch.add(&ch), || "ch(E+E) != 2 ch(E)".into()))
        }),
    ));
    out.push(("D squares to zero".into(), square_vanishes(p)));
    for (key, f) in &p.endos {
        out.push((
            format!("boundary-bulk of `{key}` is closed"),
            run(&|| {
                let tau = boundary_bulk(&p.model, &p.mf, &p.connections, f, true).map_err(|e| e.to_string())?;
                Ok(match check_closed(&p.model, &tau.cochain).map_err(|e| e.to_string())? {
                    Ok(()) => Ok(None),
                    Err(nc) => Err(nc.to_string()),
                })
            }),
        ));
    }
    out
}

/// Loads every corpus problem and checks closedness, identity-at-identity,
/// frame independence, shift, additivity, `D² = 0` and closedness of every
/// listed boundary-bulk image.
pub fn run() -> SelftestReport {
    let mut checks = Vec::new();
    for entry in CORPUS {
        let results = match Problem::from_json_str(entry.source) {
            Ok(p) => checks_for(&p),
            Err(e) => vec![("loads and validates".to_string(), Err(e.to_string()))],
        };
        for (property, outcome) in results {
            let (passed, detail) = match outcome {
                Ok(detail) => (true, detail),
                Err(msg) => (false, Some(msg)),
            };
            checks.push(Check {
                model: entry.name.to_string(),
                property,
                passed,
                detail,
            });
        }
    }
    SelftestReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}
