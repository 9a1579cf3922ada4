//! Čech cochains with values in the two-periodic `(Ω•, dw∧)` complex, the
//! Čech differential and the total differential `D = č + γ·dw∧` with
//! `γ = (-1)^(p+1)` on Čech degree `p`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::cover::{CoverError, CoverModel, Simplex};
use crate::forms::DiffForm;

/// Sparse cochain: one (possibly mixed-degree) form per chart tuple, living
/// in that tuple's overlap ring. Zero entries are never stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OmegaCochain {
    entries: BTreeMap<Simplex, DiffForm>,
}

impl OmegaCochain {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `form` to the entry at `s`; the caller guarantees it lives in the ring of `s`.
    pub fn add_at(&mut self, s: Simplex, form: DiffForm) {
        if form.is_zero() {
            return;
        }
        match self.entries.remove(&s) {
            Some(old) => {
                let sum = &old + &form;
                if !sum.is_zero() {
                    self.entries.insert(s, sum);
                }
            }
            None => {
                self.entries.insert(s, form);
            }
        }
    }

    /// Like [`add_at`](Self::add_at) but checks the ring against the model.
    pub fn insert(&mut self, model: &CoverModel, s: Simplex, form: DiffForm) -> Result<(), CoverError> {
        crate::exactring::check_ring(form.ring(), model.ring_of(&s)?)?;
        self.add_at(s, form);
        Ok(())
    }

    pub fn get(&self, s: &Simplex) -> Option<&DiffForm> {
        self.entries.get(s)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Simplex, &DiffForm)> {
        self.entries.iter()
    }

    /// `(tuple, form degree, homogeneous part)` in canonical order.
    pub fn components(&self) -> Vec<(Simplex, usize, DiffForm)> {
        self.entries
            .iter()
            .flat_map(|(s, form)| {
                form.degrees()
                    .into_iter()
                    .map(move |q| (s.clone(), q, form.degree_part(q)))
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (s, form) in &other.entries {
            out.add_at(s.clone(), form.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        OmegaCochain {
            entries: self.entries.iter().map(|(s, f)| (s.clone(), -f)).collect(),
        }
    }

    pub fn scale(&self, c: &crate::exactring::Coeff) -> Self {
        let mut out = OmegaCochain::new();
        for (s, f) in &self.entries {
            out.add_at(s.clone(), f.scale(c));
        }
        out
    }

    /// Keeps only components of total degree `p + q` with the given parity.
    pub fn parity_part(&self, odd: bool) -> Self {
        let mut out = OmegaCochain::new();
        for (s, q, f) in self.components() {
            if (s.degree() + q) % 2 == usize::from(odd) {
                out.add_at(s, f);
            }
        }
        out
    }
}

impl FromIterator<(Simplex, DiffForm)> for OmegaCochain {
    fn from_iter<I: IntoIterator<Item = (Simplex, DiffForm)>>(iter: I) -> Self {
        let mut out = OmegaCochain::new();
        for (s, f) in iter {
            out.add_at(s, f);
        }
        out
    }
}

/// Sign of the `dw∧` part of `D` on Čech degree `p`. Alternation gives
/// `D² = 0`; the overall sign is the one under which the Chern cocycle is closed.
pub fn gamma(p: usize) -> i64 {
    if p % 2 == 0 {
        -1
    } else {
        1
    }
}

/// Contribution of one entry at `s` to `č`: `(-1)^k` times its restriction to
/// every coface `t` with `s = t` minus its `k`-th vertex.
pub fn cech_d_entry(model: &CoverModel, s: &Simplex, form: &DiffForm) -> Result<Vec<(Simplex, DiffForm)>, CoverError> {
    let mut out = Vec::new();
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
        let restricted = model.restrict_form(form, s, &t)?;
        out.push((t, if k % 2 == 0 { restricted } else { -&restricted }));
    }
    Ok(out)
}

/// Contribution of one entry at `s` to `D`.
pub fn total_d_entry(model: &CoverModel, s: &Simplex, form: &DiffForm) -> Result<Vec<(Simplex, DiffForm)>, CoverError> {
    let mut out = cech_d_entry(model, s, form)?;
    let dw = form.dw_wedge(model.potential_on(s)?)?;
    out.push((s.clone(), if gamma(s.degree()) > 0 { dw } else { -&dw }));
    Ok(out)
}

fn apply_entrywise(
    c: &OmegaCochain,
    f: impl Fn(&Simplex, &DiffForm) -> Result<Vec<(Simplex, DiffForm)>, CoverError> + Sync,
) -> Result<OmegaCochain, CoverError> {
    let pieces: Vec<Vec<(Simplex, DiffForm)>> = c
        .entries
        .par_iter()
        .map(|(s, form)| f(s, form))
        .collect::<Result<_, _>>()?;
    Ok(pieces.into_iter().flatten().collect())
}

/// Čech differential: `(čc)_{i0..i(p+1)} = Σ_k (-1)^k c_{..î_k..}|`.
pub fn cech_d(model: &CoverModel, c: &OmegaCochain) -> Result<OmegaCochain, CoverError> {
    apply_entrywise(c, |s, f| cech_d_entry(model, s, f))
}

/// `D = č - (-1)^p dw∧`, using the model's potential on each overlap.
pub fn total_d(model: &CoverModel, c: &OmegaCochain) -> Result<OmegaCochain, CoverError> {
    apply_entrywise(c, |s, f| total_d_entry(model, s, f))
}

/// First nonzero component of `D(c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NotClosed {
    pub tuple: String,
    pub degree: usize,
    pub value: String,
}

impl fmt::Display for NotClosed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D(c) is nonzero on {} in form degree {}: {}", self.tuple, self.degree, self.value)
    }
}

pub fn check_closed(model: &CoverModel, c: &OmegaCochain) -> Result<Result<(), NotClosed>, CoverError> {
    let dc = total_d(model, c)?;
    Ok(match dc.components().into_iter().next() {
        None => Ok(()),
        Some((s, q, f)) => Err(NotClosed {
            tuple: model.label(&s),
            degree: q,
            value: f.to_string(),
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::CoverBuilder;
    use crate::exactring::{LocalizedPoly, Ring, RingMap};

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

    #[test]
    fn cech_d_of_zero_cochain_is_difference() {
        let model = p1();
        let kx = model.charts()[0].ring.clone();
        let ky = model.charts()[1].ring.clone();
        let c: OmegaCochain = [
            (Simplex::vertex(0), DiffForm::parse(&kx, "x").unwrap()),
            (Simplex::vertex(1), DiffForm::parse(&ky, "y^2").unwrap()),
        ]
        .into_iter()
        .collect();
        let d = cech_d(&model, &c).unwrap();
        let pair = Simplex::new(vec![0, 1]).unwrap();
        let lx = model.ring_of(&pair).unwrap();
        assert_eq!(d.get(&pair).unwrap(), &DiffForm::parse(lx, "x^-2 - x").unwrap());
        assert!(cech_d(&model, &d).unwrap().is_zero());
    }

    #[test]
    fn constant_cochain_is_cech_closed() {
        let model = p1();
        let c: OmegaCochain = (0..2)
            .map(|i| (Simplex::vertex(i), DiffForm::one(&model.charts()[i].ring)))
            .collect();
        assert!(cech_d(&model, &c).unwrap().is_zero());
    }

    #[test]
    fn single_chart_total_d_is_dw_wedge() {
        let r = Ring::polynomial(["x", "y"]).unwrap();
        let mut b = CoverBuilder::new();
        b.chart("U0", r.clone()).unwrap();
        b.potential(0, LocalizedPoly::parse(&r, "x*y").unwrap());
        let model = b.build().unwrap();
        let c: OmegaCochain = [(Simplex::vertex(0), DiffForm::parse(&r, "dx").unwrap())].into_iter().collect();
        let d = total_d(&model, &c).unwrap();
        assert_eq!(d.get(&Simplex::vertex(0)).unwrap(), &DiffForm::parse(&r, "x dx^dy").unwrap());
        let closed: OmegaCochain = [(Simplex::vertex(0), DiffForm::parse(&r, "-1 dx^dy").unwrap())]
            .into_iter()
            .collect();
        assert!(check_closed(&model, &closed).unwrap().is_ok());
        let err = check_closed(&model, &c).unwrap().unwrap_err();
        assert_eq!((err.tuple.as_str(), err.degree), ("U0", 2));
    }
}
