//! Fraction-free sparse elimination over the integers.
//!
//! Rows are reduced against an echelon basis keyed by leading column, with
//! the fixed rule "eliminate the leading entry with the pivot owning that
//! column", and every row is divided by the gcd of its entries after each
//! step. Rational input is cleared of denominators on entry.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Sparse integer vector; zero entries are never stored.
pub type IntRow = BTreeMap<usize, BigInt>;

/// Scales a rational vector to a primitive integer vector. Returns the
/// vector and the factor it was multiplied by.
pub fn to_primitive(v: &BTreeMap<usize, BigRational>) -> (IntRow, BigRational) {
    let lcm = v.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut row: IntRow = v
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(&k, c)| (k, c.numer() * (&lcm / c.denom())))
        .collect();
    let g = content(row.values());
    let mut factor = BigRational::from_integer(lcm);
    if !g.is_zero() && !g.is_one() {
        for c in row.values_mut() {
            *c /= &g;
        }
        factor /= BigRational::from_integer(g);
    }
    (row, factor)
}

fn content<'a>(values: impl Iterator<Item = &'a BigInt>) -> BigInt {
    values.fold(BigInt::zero(), |acc, c| acc.gcd(c))
}

/// `a·x - b·y`, dropping zeros.
fn combine(a: &BigInt, x: &IntRow, b: &BigInt, y: &IntRow) -> IntRow {
    let mut out = IntRow::new();
    for (&k, v) in x {
        out.insert(k, a * v);
    }
    for (&k, v) in y {
        let entry = out.entry(k).or_insert_with(BigInt::zero);
        *entry -= b * v;
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// A row together with the integer combination of inserted vectors it equals.
#[derive(Debug, Clone)]
struct Tracked {
    row: IntRow,
    combo: IntRow,
}

impl Tracked {
    fn eliminate(&mut self, pivot: &Tracked, col: usize) -> BigInt {
        let a = pivot.row[&col].clone();
        let b = self.row[&col].clone();
        let g = a.gcd(&b);
        let (a, b) = (&a / &g, &b / &g);
        self.row = combine(&a, &self.row, &b, &pivot.row);
        self.combo = combine(&a, &self.combo, &b, &pivot.combo);
        a
    }

    /// Divides by the common content; returns the divisor.
    fn normalize(&mut self, extra: &BigInt) -> BigInt {
        let g = content(self.row.values().chain(self.combo.values())).gcd(extra);
        if g.is_zero() || g.is_one() {
            return BigInt::one();
        }
        for v in self.row.values_mut().chain(self.combo.values_mut()) {
            *v /= &g;
        }
        g
    }

    fn lead(&self) -> Option<usize> {
        self.row.keys().next().copied()
    }
}

/// Incremental row echelon form over the integers.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, Tracked>,
    /// Generator `id` entered as its primitive integer multiple by this factor.
    factors: BTreeMap<usize, BigRational>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Inserts the `id`-th generator; returns whether it was independent.
    pub fn insert(&mut self, id: usize, generator: &BTreeMap<usize, BigRational>) -> bool {
        let (row, factor) = to_primitive(generator);
        self.factors.insert(id, factor);
        let mut t = Tracked {
            row,
            combo: IntRow::from([(id, BigInt::one())]),
        };
        while let Some(col) = t.lead() {
            match self.pivots.get(&col) {
                Some(p) => {
                    t.eliminate(p, col);
                    t.normalize(&BigInt::zero());
                }
                None => {
                    if t.row[&col].is_negative() {
                        for v in t.row.values_mut().chain(t.combo.values_mut()) {
                            *v = -&*v;
                        }
                    }
                    self.pivots.insert(col, t);
                    return true;
                }
            }
        }
        false
    }

    /// Expresses `target` as a rational combination of the inserted
    /// generators (keyed by id), or `None` if it is not in their span.
    pub fn solve(&self, target: &BTreeMap<usize, BigRational>) -> Option<BTreeMap<usize, BigRational>> {
        let (row, factor) = to_primitive(target);
        // invariant: scale·factor·target = row - Σ combo·G, G the primitive generators
        let mut t = Tracked {
            row,
            combo: IntRow::new(),
        };
        let mut scale = BigInt::one();
        while let Some(col) = t.lead() {
            let p = self.pivots.get(&col)?;
            let a = t.eliminate(p, col);
            scale *= a;
            let g = t.normalize(&scale);
            scale /= g;
        }
        let denom = BigRational::from_integer(scale) * factor;
        Some(
            t.combo
                .into_iter()
                .map(|(id, c)| {
                    let coeff = -BigRational::from_integer(c) * &self.factors[&id] / &denom;
                    (id, coeff)
                })
                .collect(),
        )
    }
}

/// Rank of a family of rational vectors.
pub fn rank(rows: impl IntoIterator<Item = BTreeMap<usize, BigRational>>) -> usize {
    let mut e = Echelon::new();
    for (id, r) in rows.into_iter().enumerate() {
        e.insert(id, &r);
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::rational;

    fn v(entries: &[(usize, i64, i64)]) -> BTreeMap<usize, BigRational> {
        entries.iter().map(|&(k, n, d)| (k, rational(n, d))).collect()
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![
            v(&[(0, 1, 1), (1, 2, 1)]),
            v(&[(0, 2, 1), (1, 4, 1)]),
            v(&[(1, 1, 3), (2, 1, 1)]),
        ];
        assert_eq!(rank(rows), 2);
    }

    #[test]
    fn solve_recovers_combination() {
        let gens = [
            v(&[(0, 2, 1), (1, 1, 1)]),
            v(&[(1, 3, 1), (2, 1, 2)]),
            v(&[(0, 1, 1), (2, -1, 1)]),
        ];
        let mut e = Echelon::new();
        for (id, g) in gens.iter().enumerate() {
            e.insert(id, g);
        }
        let target = v(&[(0, 5, 1), (1, 7, 3), (2, -1, 4)]);
        let x = e.solve(&target).unwrap();
        let mut recombined: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (id, c) in &x {
            for (k, g) in &gens[*id] {
                *recombined.entry(*k).or_insert_with(BigRational::zero) += c * g;
            }
        }
        recombined.retain(|_, c| !c.is_zero());
        assert_eq!(recombined, target);
    }

    #[test]
    fn solve_rejects_vector_outside_span() {
        let mut e = Echelon::new();
        e.insert(0, &v(&[(0, 1, 1), (1, 1, 1)]));
        assert!(e.solve(&v(&[(0, 1, 1)])).is_none());
        assert_eq!(e.solve(&BTreeMap::new()).unwrap(), BTreeMap::new());
    }
}
