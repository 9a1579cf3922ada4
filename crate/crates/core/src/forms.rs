//! Exterior algebra over a chart ring.
//!
//! Forms are stored expanded over the basis `dx_I` with `I` strictly
//! increasing, so that every form has canonical coordinates.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use crate::exactring::{check_ring, same_ring, Coeff, LocalizedPoly, Ring, RingError, RingMap};

/// Basis element `dx_I`, stored as a bit set of variable indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Wedge(pub u32);

impl Wedge {
    pub const ONE: Wedge = Wedge(0);

    pub fn single(idx: usize) -> Wedge {
        Wedge(1 << idx)
    }

    pub fn from_indices(indices: &[usize]) -> Option<Wedge> {
        let mut bits = 0u32;
        for &i in indices {
            if bits & (1 << i) != 0 {
                return None;
            }
            bits |= 1 << i;
        }
        Some(Wedge(bits))
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|i| self.0 & (1 << i) != 0).collect()
    }

    /// `dx_self ∧ dx_other = sign · dx_(self ∪ other)`, or `None` if they share an index.
    pub fn wedge(self, other: Wedge) -> Option<(Wedge, bool)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut swaps = 0u32;
        let mut b = other.0;
        while b != 0 {
            let j = b.trailing_zeros();
            swaps += (self.0 >> j >> 1).count_ones();
            b &= b - 1;
        }
        Some((Wedge(self.0 | other.0), swaps % 2 == 1))
    }

    /// All basis elements of degree `q` in `n` variables, in canonical order.
    pub fn all_of_degree(n: usize, q: usize) -> Vec<Wedge> {
        let mut out: Vec<Wedge> = (0u32..(1u32 << n))
            .map(Wedge)
            .filter(|w| w.degree() == q)
            .collect();
        out.sort();
        out
    }
}

impl Ord for Wedge {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.indices().cmp(&other.indices()))
    }
}

impl PartialOrd for Wedge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone)]
pub struct DiffForm {
    ring: Arc<Ring>,
    comps: BTreeMap<Wedge, LocalizedPoly>,
}

impl PartialEq for DiffForm {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.comps == other.comps
    }
}

impl Eq for DiffForm {}

impl From<LocalizedPoly> for DiffForm {
    fn from(p: LocalizedPoly) -> Self {
        DiffForm::term(p, Wedge::ONE)
    }
}

impl DiffForm {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        DiffForm {
            ring: ring.clone(),
            comps: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        LocalizedPoly::one(ring).into()
    }

    /// `coeff · dx_I`.
    pub fn term(coeff: LocalizedPoly, basis: Wedge) -> Self {
        assert!(
            basis.0 >> coeff.ring().nvars() == 0,
            "basis element outside {}",
            coeff.ring()
        );
        let ring = coeff.ring().clone();
        let mut comps = BTreeMap::new();
        if !coeff.is_zero() {
            comps.insert(basis, coeff);
        }
        DiffForm { ring, comps }
    }

    /// The 1-form `dx_idx`.
    pub fn dvar(ring: &Arc<Ring>, idx: usize) -> Self {
        Self::term(LocalizedPoly::one(ring), Wedge::single(idx))
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> impl DoubleEndedIterator<Item = (&Wedge, &LocalizedPoly)> {
        self.comps.iter()
    }

    pub fn coefficient(&self, basis: Wedge) -> LocalizedPoly {
        self.comps
            .get(&basis)
            .cloned()
            .unwrap_or_else(|| LocalizedPoly::zero(&self.ring))
    }

    fn add_component(&mut self, basis: Wedge, coeff: LocalizedPoly) {
        if coeff.is_zero() {
            return;
        }
        let sum = match self.comps.remove(&basis) {
            Some(old) => &old + &coeff,
            None => coeff,
        };
        if !sum.is_zero() {
            self.comps.insert(basis, sum);
        }
    }

    /// Degrees present, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.comps.keys().map(|w| w.degree()).collect();
        d.dedup();
        d
    }

    /// `Some(q)` if every component has degree `q`; zero is homogeneous of any degree and reports `None`.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        match self.degrees().as_slice() {
            [q] => Some(*q),
            _ => None,
        }
    }

    pub fn degree_part(&self, q: usize) -> DiffForm {
        DiffForm {
            ring: self.ring.clone(),
            comps: self
                .comps
                .iter()
                .filter(|(w, _)| w.degree() == q)
                .map(|(w, c)| (*w, c.clone()))
                .collect(),
        }
    }

    /// The coefficient if this is a 0-form.
    pub fn as_function(&self) -> Option<LocalizedPoly> {
        match self.degrees().as_slice() {
            [] => Some(LocalizedPoly::zero(&self.ring)),
            [0] => Some(self.coefficient(Wedge::ONE)),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Coeff) -> DiffForm {
        let mut out = DiffForm::zero(&self.ring);
        for (w, p) in &self.comps {
            out.add_component(*w, p.scale(c));
        }
        out
    }

    pub fn mul_function(&self, f: &LocalizedPoly) -> DiffForm {
        let mut out = DiffForm::zero(&self.ring);
        for (w, p) in &self.comps {
            out.add_component(*w, p * f);
        }
        out
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, RingError> {
        check_ring(&self.ring, &other.ring)?;
        Ok(self + other)
    }

    pub fn try_wedge(&self, other: &Self) -> Result<Self, RingError> {
        check_ring(&self.ring, &other.ring)?;
        Ok(self.wedge(other))
    }

    /// Exterior product. Panics on ring mismatch; see [`DiffForm::try_wedge`].
    pub fn wedge(&self, other: &Self) -> Self {
        assert!(
            same_ring(&self.ring, &other.ring),
            "ring mismatch: {} vs {}",
            self.ring,
            other.ring
        );
        let mut out = DiffForm::zero(&self.ring);
        for (wa, ca) in &self.comps {
            for (wb, cb) in &other.comps {
                if let Some((w, negative)) = wa.wedge(*wb) {
                    let prod = ca * cb;
                    out.add_component(w, if negative { -&prod } else { prod });
                }
            }
        }
        out
    }

    pub fn exterior_d(&self) -> DiffForm {
        let n = self.ring.nvars();
        let mut out = DiffForm::zero(&self.ring);
        for (w, c) in &self.comps {
            for v in 0..n {
                if let Some((w2, negative)) = Wedge::single(v).wedge(*w) {
                    let dc = c.partial(v).expect("index in range");
                    out.add_component(w2, if negative { -&dc } else { dc });
                }
            }
        }
        out
    }

    /// `dw ∧ self`, with `dw` in the first slot.
    pub fn dw_wedge(&self, w: &LocalizedPoly) -> Result<DiffForm, RingError> {
        check_ring(&self.ring, w.ring())?;
        Ok(d_function(w).wedge(self))
    }

    /// Pull back along a ring map: coefficients are substituted and `dv` goes to `d(image of v)`.
    pub fn pullback(&self, map: &RingMap) -> Result<DiffForm, RingError> {
        check_ring(&self.ring, map.source())?;
        let target = map.target();
        let dimages: Vec<DiffForm> = map.images().iter().map(d_function).collect();
        let mut out = DiffForm::zero(target);
        for (w, c) in &self.comps {
            let mut piece: DiffForm = c.substitute(map)?.into();
            for i in w.indices() {
                piece = piece.wedge(&dimages[i]);
                if piece.is_zero() {
                    break;
                }
            }
            out = &out + &piece;
        }
        Ok(out)
    }

    pub fn parse(ring: &Arc<Ring>, src: &str) -> Result<Self, RingError> {
        crate::parse::parse_form(ring, src)
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        assert!(
            same_ring(&self.ring, &other.ring),
            "ring mismatch: {} vs {}",
            self.ring,
            other.ring
        );
        let mut out = self.clone();
        for (w, c) in &other.comps {
            out.add_component(*w, if negate { -c } else { c.clone() });
        }
        out
    }
}

/// Exterior derivative of a function.
pub fn d_function(f: &LocalizedPoly) -> DiffForm {
    DiffForm::from(f.clone()).exterior_d()
}

impl<'a> Add<&'a DiffForm> for &'a DiffForm {
    type Output = DiffForm;
    fn add(self, rhs: &DiffForm) -> DiffForm {
        self.combine(rhs, false)
    }
}

impl<'a> Sub<&'a DiffForm> for &'a DiffForm {
    type Output = DiffForm;
    fn sub(self, rhs: &DiffForm) -> DiffForm {
        self.combine(rhs, true)
    }
}

impl Neg for &DiffForm {
    type Output = DiffForm;
    fn neg(self) -> DiffForm {
        DiffForm {
            ring: self.ring.clone(),
            comps: self.comps.iter().map(|(w, c)| (*w, -c)).collect(),
        }
    }
}

pub(crate) fn fmt_wedge(ring: &Ring, w: Wedge) -> String {
    w.indices()
        .iter()
        .map(|&i| format!("d{}", ring.variable(i)))
        .collect::<Vec<_>>()
        .join("^")
}

/// Canonical string, e.g. `-1 dx^dy` or `(x + 1) dx + y dz`. Components are
/// listed in canonical basis order; multi-term coefficients are parenthesized.
impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.comps.iter().enumerate() {
            let mut coeff = c.to_string();
            let mut sep = " + ";
            if c.num_terms() > 1 {
                coeff = format!("({coeff})");
            } else if k > 0 && coeff.starts_with('-') {
                sep = " - ";
                coeff.remove(0);
            }
            if k > 0 {
                write!(f, "{sep}")?;
            }
            if w.degree() == 0 {
                write!(f, "{coeff}")?;
            } else {
                write!(f, "{coeff} {}", fmt_wedge(&self.ring, *w))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kxy() -> Arc<Ring> {
        Ring::polynomial(["x", "y"]).unwrap()
    }

    fn f(r: &Arc<Ring>, s: &str) -> DiffForm {
        DiffForm::parse(r, s).unwrap()
    }

    #[test]
    fn wedge_examples() {
        let r = kxy();
        assert_eq!(f(&r, "dx").wedge(&f(&r, "dy")), f(&r, "dx^dy"));
        assert_eq!(f(&r, "dy").wedge(&f(&r, "dx")), f(&r, "-1 dx^dy"));
        assert!(f(&r, "dx").wedge(&f(&r, "dx")).is_zero());
        assert_eq!(f(&r, "x dy").wedge(&f(&r, "y dx")), f(&r, "-x*y dx^dy"));
    }

    #[test]
    fn exterior_d_examples() {
        let r = kxy();
        assert_eq!(f(&r, "x*y").exterior_d(), f(&r, "y dx + x dy"));
        assert!(f(&r, "dx").exterior_d().is_zero());
        let l = Ring::new(["x"], ["x"]).unwrap();
        assert_eq!(f(&l, "x^-1").exterior_d(), f(&l, "-x^-2 dx"));
    }

    #[test]
    fn dw_wedge_examples() {
        let r = kxy();
        let w = LocalizedPoly::parse(&r, "x*y").unwrap();
        assert_eq!(DiffForm::one(&r).dw_wedge(&w).unwrap(), f(&r, "y dx + x dy"));
        assert_eq!(f(&r, "dx").dw_wedge(&w).unwrap(), f(&r, "-x dx^dy"));
        let a = f(&r, "x^2 + y dx - 3 dy");
        assert!(a.dw_wedge(&w).unwrap().dw_wedge(&w).unwrap().is_zero());
    }

    #[test]
    fn pullback_applies_chain_rule() {
        let ky = Ring::polynomial(["y"]).unwrap();
        let lx = Ring::new(["x"], ["x"]).unwrap();
        let m = RingMap::from_named(&ky, &lx, [("y", LocalizedPoly::parse(&lx, "x^-1").unwrap())])
            .unwrap();
        assert_eq!(f(&ky, "dy").pullback(&m).unwrap(), f(&lx, "-x^-2 dx"));
        assert_eq!(f(&ky, "y^3").pullback(&m).unwrap(), f(&lx, "x^-3"));
    }

    #[test]
    fn display_round_trips() {
        let r = Ring::polynomial(["x", "y", "z"]).unwrap();
        let a = f(&r, "3 + (x+1) dx - y dz + 2*x dx^dy^dz");
        assert_eq!(a.to_string(), "3 + (x + 1) dx - y dz + 2*x dx^dy^dz");
        assert_eq!(f(&r, &a.to_string()), a);
    }

    #[test]
    fn wedge_order_is_by_degree_then_lex() {
        let all = Wedge::all_of_degree(3, 2);
        let idx: Vec<Vec<usize>> = all.iter().map(|w| w.indices()).collect();
        assert_eq!(idx, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }
}
