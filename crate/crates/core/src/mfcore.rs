//! Matrix factorizations and the Z/2-graded matrix calculus built on them.
//!
//! A [`GradedMatrix`] is an endomorphism-valued form of `E = E_0 ⊕ E_1`,
//! stored as four blocks; block `ij` maps `E_j` to `E_i`. Composition
//! multiplies blocks with the left factor's forms wedged on the left, and no
//! other sign is inserted.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::exactring::{check_ring, Coeff, LocalizedPoly, Ring, RingError, RingMap};
use crate::forms::DiffForm;
use crate::matrix::{FormMatrix, MatrixError, PolyMatrix, ShapeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MfError {
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("graded matrix has mixed parity")]
    MixedParity,
    #[error("connection entry ({row},{col}) of block {block} is not a 1-form: {entry}")]
    NotOneForm {
        block: usize,
        row: usize,
        col: usize,
        entry: String,
    },
    #[error("{0}")]
    Invalid(#[from] Violation),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> i64 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }

    pub fn bit(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradedMatrix {
    ring: Arc<Ring>,
    ranks: [usize; 2],
    /// Blocks 00, 01, 10, 11.
    blocks: [FormMatrix; 4],
}

impl GradedMatrix {
    pub fn zero(ring: &Arc<Ring>, rank0: usize, rank1: usize) -> Self {
        let r = [rank0, rank1];
        GradedMatrix {
            ring: ring.clone(),
            ranks: r,
            blocks: [0, 1, 2, 3].map(|k| FormMatrix::zeros(ring, r[k / 2], r[k % 2])),
        }
    }

    pub fn identity(ring: &Arc<Ring>, rank0: usize, rank1: usize) -> Self {
        let mut g = Self::zero(ring, rank0, rank1);
        g.blocks[0] = FormMatrix::identity(ring, rank0);
        g.blocks[3] = FormMatrix::identity(ring, rank1);
        g
    }

    pub fn from_blocks(
        b00: FormMatrix,
        b01: FormMatrix,
        b10: FormMatrix,
        b11: FormMatrix,
    ) -> Result<Self, MfError> {
        let ring = b00.ring().clone();
        let (r0, r1) = (b00.rows(), b11.rows());
        let expected = [(r0, r0), (r0, r1), (r1, r0), (r1, r1)];
        let blocks = [b00, b01, b10, b11];
        for (k, b) in blocks.iter().enumerate() {
            check_ring(&ring, b.ring())?;
            if b.shape() != expected[k] {
                return Err(ShapeError(format!(
                    "block {}{} has shape {:?}, expected {:?}",
                    k / 2,
                    k % 2,
                    b.shape(),
                    expected[k]
                ))
                .into());
            }
        }
        Ok(GradedMatrix {
            ring,
            ranks: [r0, r1],
            blocks,
        })
    }

    /// Block-diagonal matrix.
    pub fn even(b00: FormMatrix, b11: FormMatrix) -> Result<Self, MfError> {
        let ring = b00.ring().clone();
        let (r0, r1) = (b00.rows(), b11.rows());
        Self::from_blocks(
            b00,
            FormMatrix::zeros(&ring, r0, r1),
            FormMatrix::zeros(&ring, r1, r0),
            b11,
        )
    }

    /// Off-diagonal matrix; `b10: E_0 -> E_1`, `b01: E_1 -> E_0`.
    pub fn odd(b01: FormMatrix, b10: FormMatrix) -> Result<Self, MfError> {
        let ring = b01.ring().clone();
        let (r0, r1) = (b01.rows(), b10.rows());
        Self::from_blocks(
            FormMatrix::zeros(&ring, r0, r0),
            b01,
            b10,
            FormMatrix::zeros(&ring, r1, r1),
        )
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn ranks(&self) -> (usize, usize) {
        (self.ranks[0], self.ranks[1])
    }

    pub fn block(&self, i: usize, j: usize) -> &FormMatrix {
        &self.blocks[2 * i + j]
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(FormMatrix::is_zero)
    }

    /// `None` for mixed parity. The zero matrix is reported even.
    pub fn parity(&self) -> Option<Parity> {
        let off = self.blocks[1].is_zero() && self.blocks[2].is_zero();
        let diag = self.blocks[0].is_zero() && self.blocks[3].is_zero();
        if off {
            Some(Parity::Even)
        } else if diag {
            Some(Parity::Odd)
        } else {
            None
        }
    }

    pub fn even_part(&self) -> Self {
        let mut g = self.clone();
        g.blocks[1] = FormMatrix::zeros(&self.ring, self.ranks[0], self.ranks[1]);
        g.blocks[2] = FormMatrix::zeros(&self.ring, self.ranks[1], self.ranks[0]);
        g
    }

    pub fn odd_part(&self) -> Self {
        self.sub(&self.even_part()).expect("same shape")
    }

    fn same_shape(&self, other: &Self) -> Result<(), MfError> {
        check_ring(&self.ring, &other.ring)?;
        if self.ranks != other.ranks {
            return Err(ShapeError(format!(
                "graded ranks {:?} vs {:?}",
                self.ranks, other.ranks
            ))
            .into());
        }
        Ok(())
    }

    fn zip(&self, other: &Self, f: impl Fn(&FormMatrix, &FormMatrix) -> Result<FormMatrix, ShapeError>) -> Result<Self, MfError> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for k in 0..4 {
            out.blocks[k] = f(&self.blocks[k], &other.blocks[k])?;
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self, MfError> {
        self.zip(other, FormMatrix::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MfError> {
        self.zip(other, FormMatrix::sub)
    }

    pub fn neg(&self) -> Self {
        self.map_blocks(|b| b.neg())
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        self.map_blocks(|b| b.scale(c))
    }

    fn map_blocks(&self, f: impl Fn(&FormMatrix) -> FormMatrix) -> Self {
        GradedMatrix {
            ring: self.ring.clone(),
            ranks: self.ranks,
            blocks: [0, 1, 2, 3].map(|k| f(&self.blocks[k])),
        }
    }

    /// Composition `self ∘ other`.
    pub fn gmul(&self, other: &Self) -> Result<Self, MfError> {
        self.same_shape(other)?;
        let mut out = Self::zero(&self.ring, self.ranks[0], self.ranks[1]);
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = out.blocks[2 * i + j].clone();
                for k in 0..2 {
                    let a = &self.blocks[2 * i + k];
                    let b = &other.blocks[2 * k + j];
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b)?)?;
                }
                out.blocks[2 * i + j] = acc;
            }
        }
        Ok(out)
    }

    /// `tr(block 00) - tr(block 11)`.
    pub fn supertrace(&self) -> DiffForm {
        let t0 = self.blocks[0].trace().expect("diagonal blocks are square");
        let t1 = self.blocks[3].trace().expect("diagonal blocks are square");
        &t0 - &t1
    }

    /// Keep only the form-degree-`q` part of every entry.
    pub fn degree_part(&self, q: usize) -> Self {
        self.map_blocks(|b| b.map(b.ring(), |e| e.degree_part(q)))
    }

    pub fn pullback(&self, map: &RingMap) -> Result<Self, RingError> {
        check_ring(&self.ring, map.source())?;
        let mut blocks = Vec::with_capacity(4);
        for b in &self.blocks {
            blocks.push(b.pullback(map)?);
        }
        let blocks: [FormMatrix; 4] = blocks.try_into().expect("four blocks");
        Ok(GradedMatrix {
            ring: map.target().clone(),
            ranks: self.ranks,
            blocks,
        })
    }

    /// `g · self · g⁻¹` for an even change of frame given by 0-form matrices.
    pub fn conjugate(&self, frame: &FrameChange) -> Result<Self, MfError> {
        let g = [frame.g0.to_forms(), frame.g1.to_forms()];
        let gi = [frame.g0_inv.to_forms(), frame.g1_inv.to_forms()];
        let mut out = self.clone();
        for i in 0..2 {
            for j in 0..2 {
                out.blocks[2 * i + j] = g[i].mul(&self.blocks[2 * i + j])?.mul(&gi[j])?;
            }
        }
        Ok(out)
    }

    /// Block-diagonal sum `self ⊕ other` on `(E ⊕ F)_0 = E_0 ⊕ F_0`, `(E ⊕ F)_1 = E_1 ⊕ F_1`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        GradedMatrix {
            ring: self.ring.clone(),
            ranks: [self.ranks[0] + other.ranks[0], self.ranks[1] + other.ranks[1]],
            blocks: [0, 1, 2, 3].map(|k| self.blocks[k].direct_sum(&other.blocks[k])),
        }
    }
}

impl fmt::Display for GradedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{00: {}, 01: {}, 10: {}, 11: {}}}",
            self.blocks[0], self.blocks[1], self.blocks[2], self.blocks[3]
        )
    }
}

/// Even invertible change of frame `(g0, g1)` together with its inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameChange {
    pub g0: PolyMatrix,
    pub g1: PolyMatrix,
    pub g0_inv: PolyMatrix,
    pub g1_inv: PolyMatrix,
}

impl FrameChange {
    pub fn new(g0: PolyMatrix, g1: PolyMatrix) -> Result<Self, MfError> {
        let g0_inv = g0.inverse()?;
        let g1_inv = g1.inverse()?;
        Ok(FrameChange {
            g0,
            g1,
            g0_inv,
            g1_inv,
        })
    }

    pub fn identity(ring: &Arc<Ring>, rank0: usize, rank1: usize) -> Self {
        let i0 = PolyMatrix::identity(ring, rank0);
        let i1 = PolyMatrix::identity(ring, rank1);
        FrameChange {
            g0: i0.clone(),
            g1: i1.clone(),
            g0_inv: i0,
            g1_inv: i1,
        }
    }

    pub fn inverse(&self) -> Self {
        FrameChange {
            g0: self.g0_inv.clone(),
            g1: self.g1_inv.clone(),
            g0_inv: self.g0.clone(),
            g1_inv: self.g1.clone(),
        }
    }

    /// `self ∘ other`: first apply `other`, then `self`.
    pub fn compose(&self, other: &Self) -> Result<Self, MfError> {
        Ok(FrameChange {
            g0: self.g0.mul(&other.g0)?,
            g1: self.g1.mul(&other.g1)?,
            g0_inv: other.g0_inv.mul(&self.g0_inv)?,
            g1_inv: other.g1_inv.mul(&self.g1_inv)?,
        })
    }

    pub fn pullback(&self, map: &RingMap) -> Result<Self, RingError> {
        Ok(FrameChange {
            g0: self.g0.pullback(map)?,
            g1: self.g1.pullback(map)?,
            g0_inv: self.g0_inv.pullback(map)?,
            g1_inv: self.g1_inv.pullback(map)?,
        })
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.g0.ring()
    }
}

/// Failure of `e0·e1 = w·I` or `e1·e0 = w·I`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{identity} fails at entry ({row},{col}): expected {expected}, found {found}")]
pub struct Violation {
    pub identity: String,
    pub row: usize,
    pub col: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFactorization {
    ring: Arc<Ring>,
    rank0: usize,
    rank1: usize,
    /// `E_0 -> E_1`, shape `rank1 x rank0`.
    e0: PolyMatrix,
    /// `E_1 -> E_0`, shape `rank0 x rank1`.
    e1: PolyMatrix,
    w: LocalizedPoly,
}

impl MatrixFactorization {
    /// Checks shapes and rings only; call [`MatrixFactorization::validate`] for the factorization identities.
    pub fn new(e0: PolyMatrix, e1: PolyMatrix, w: LocalizedPoly) -> Result<Self, MfError> {
        let ring = w.ring().clone();
        check_ring(&ring, e0.ring())?;
        check_ring(&ring, e1.ring())?;
        let (rank1, rank0) = e0.shape();
        if e1.shape() != (rank0, rank1) {
            return Err(ShapeError(format!(
                "e0 is {:?} so e1 must be {:?}, got {:?}",
                e0.shape(),
                (rank0, rank1),
                e1.shape()
            ))
            .into());
        }
        Ok(MatrixFactorization {
            ring,
            rank0,
            rank1,
            e0,
            e1,
            w,
        })
    }

    /// Rank-(1,1) factorization `e0 = a`, `e1 = b` of `w = ab`.
    pub fn koszul(a: &LocalizedPoly, b: &LocalizedPoly) -> Result<Self, MfError> {
        check_ring(a.ring(), b.ring())?;
        let ring = a.ring();
        Self::new(
            PolyMatrix::from_rows(ring, vec![vec![a.clone()]], 1)?,
            PolyMatrix::from_rows(ring, vec![vec![b.clone()]], 1)?,
            a * b,
        )
    }

    /// The factorization with no summands.
    pub fn zero_object(ring: &Arc<Ring>, w: &LocalizedPoly) -> Self {
        MatrixFactorization {
            ring: ring.clone(),
            rank0: 0,
            rank1: 0,
            e0: PolyMatrix::zeros(ring, 0, 0),
            e1: PolyMatrix::zeros(ring, 0, 0),
            w: w.clone(),
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn ranks(&self) -> (usize, usize) {
        (self.rank0, self.rank1)
    }

    pub fn e0(&self) -> &PolyMatrix {
        &self.e0
    }

    pub fn e1(&self) -> &PolyMatrix {
        &self.e1
    }

    pub fn potential(&self) -> &LocalizedPoly {
        &self.w
    }

    pub fn validate(&self) -> Result<(), Violation> {
        if !self.w.is_zero() && self.rank0 != self.rank1 {
            return Err(Violation {
                identity: "rank0 = rank1 for nonzero w".into(),
                row: 0,
                col: 0,
                expected: self.rank0.to_string(),
                found: self.rank1.to_string(),
            });
        }
        let checks = [
            ("e0*e1 = w*I", &self.e0, &self.e1, self.rank1),
            ("e1*e0 = w*I", &self.e1, &self.e0, self.rank0),
        ];
        for (name, a, b, n) in checks {
            let prod = a.mul(b).expect("shapes checked at construction");
            let target = PolyMatrix::scalar(&self.ring, n, &self.w);
            if let Some((i, j)) = prod.first_difference(&target) {
                return Err(Violation {
                    identity: name.into(),
                    row: i,
                    col: j,
                    expected: target.get(i, j).to_string(),
                    found: prod.get(i, j).to_string(),
                });
            }
        }
        Ok(())
    }

    /// The curved differential as an odd graded matrix of 0-forms.
    pub fn e(&self) -> GradedMatrix {
        GradedMatrix::odd(self.e1.to_forms(), self.e0.to_forms()).expect("shapes checked")
    }

    /// `E^∨` with potential `-w`: `e0^∨ = -e1ᵀ`, `e1^∨ = e0ᵀ`.
    pub fn dual(&self) -> Self {
        MatrixFactorization {
            ring: self.ring.clone(),
            rank0: self.rank0,
            rank1: self.rank1,
            e0: self.e1.transpose().neg(),
            e1: self.e0.transpose(),
            w: -&self.w,
        }
    }

    /// `E[1]`: graded pieces swapped and differential negated.
    pub fn shift(&self) -> Self {
        MatrixFactorization {
            ring: self.ring.clone(),
            rank0: self.rank1,
            rank1: self.rank0,
            e0: self.e1.neg(),
            e1: self.e0.neg(),
            w: self.w.clone(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, MfError> {
        check_ring(&self.ring, &other.ring)?;
        if self.w != other.w {
            return Err(MfError::Invalid(Violation {
                identity: "equal potentials in a direct sum".into(),
                row: 0,
                col: 0,
                expected: self.w.to_string(),
                found: other.w.to_string(),
            }));
        }
        Ok(MatrixFactorization {
            ring: self.ring.clone(),
            rank0: self.rank0 + other.rank0,
            rank1: self.rank1 + other.rank1,
            e0: self.e0.direct_sum(&other.e0),
            e1: self.e1.direct_sum(&other.e1),
            w: self.w.clone(),
        })
    }

    /// `self ⊗ other`, a factorization of `w_self + w_other` on
    /// `E_0 = M0⊗N0 ⊕ M1⊗N1`, `E_1 = M0⊗N1 ⊕ M1⊗N0`. The differential is
    /// `e_M ⊗ 1 + ε ⊗ e_N` with `ε = ±1` on `M_0`/`M_1`.
    pub fn tensor(&self, other: &Self) -> Result<Self, MfError> {
        check_ring(&self.ring, &other.ring)?;
        let r = &self.ring;
        let (m0, m1) = (self.rank0, self.rank1);
        let (n0, n1) = (other.rank0, other.rank1);
        let id = |n| PolyMatrix::identity(r, n);
        let e0 = PolyMatrix::blocks(
            &id(m0).kron(&other.e0),
            &self.e1.kron(&id(n1)),
            &self.e0.kron(&id(n0)),
            &id(m1).kron(&other.e1).neg(),
        )?;
        let e1 = PolyMatrix::blocks(
            &id(m0).kron(&other.e1),
            &self.e1.kron(&id(n0)),
            &self.e0.kron(&id(n1)),
            &id(m1).kron(&other.e0).neg(),
        )?;
        Self::new(e0, e1, &self.w + &other.w)
    }

    /// Re-express the presentation in another ring.
    pub fn pullback(&self, map: &RingMap) -> Result<Self, RingError> {
        Ok(MatrixFactorization {
            ring: map.target().clone(),
            rank0: self.rank0,
            rank1: self.rank1,
            e0: self.e0.pullback(map)?,
            e1: self.e1.pullback(map)?,
            w: self.w.substitute(map)?,
        })
    }

    /// Presentation in the frame `s' = g s`: `e0 ↦ g1 e0 g0⁻¹`, `e1 ↦ g0 e1 g1⁻¹`.
    pub fn change_frame(&self, frame: &FrameChange) -> Result<Self, MfError> {
        Ok(MatrixFactorization {
            ring: self.ring.clone(),
            rank0: self.rank0,
            rank1: self.rank1,
            e0: frame.g1.mul(&self.e0)?.mul(&frame.g0_inv)?,
            e1: frame.g0.mul(&self.e1)?.mul(&frame.g1_inv)?,
            w: self.w.clone(),
        })
    }
}

/// `∇ = d + A` on each graded piece, with `A0`, `A1` matrices of 1-forms.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    pub a0: FormMatrix,
    pub a1: FormMatrix,
}

impl Connection {
    pub fn new(a0: FormMatrix, a1: FormMatrix) -> Result<Self, MfError> {
        check_ring(a0.ring(), a1.ring())?;
        for (block, m) in [(0usize, &a0), (1, &a1)] {
            if m.rows() != m.cols() {
                return Err(ShapeError(format!("A{block} is not square: {:?}", m.shape())).into());
            }
            for (row, col, e) in m.entries() {
                if !e.is_zero() && e.homogeneous_degree() != Some(1) {
                    return Err(MfError::NotOneForm {
                        block,
                        row,
                        col,
                        entry: e.to_string(),
                    });
                }
            }
        }
        Ok(Connection { a0, a1 })
    }

    pub fn trivial(ring: &Arc<Ring>, rank0: usize, rank1: usize) -> Self {
        Connection {
            a0: FormMatrix::zeros(ring, rank0, rank0),
            a1: FormMatrix::zeros(ring, rank1, rank1),
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.a0.ring()
    }

    pub fn ranks(&self) -> (usize, usize) {
        (self.a0.rows(), self.a1.rows())
    }

    /// The connection form `A` as an even graded matrix.
    pub fn as_graded(&self) -> GradedMatrix {
        GradedMatrix::even(self.a0.clone(), self.a1.clone()).expect("square blocks")
    }

    /// Connection in the frame `s' = g s`: `A' = g A g⁻¹ + g d(g⁻¹)`.
    pub fn gauge(&self, frame: &FrameChange) -> Result<Self, MfError> {
        let transform = |a: &FormMatrix, g: &PolyMatrix, gi: &PolyMatrix| -> Result<FormMatrix, MfError> {
            let gf = g.to_forms();
            let conj = gf.mul(a)?.mul(&gi.to_forms())?;
            Ok(conj.add(&gf.mul(&gi.d())?)?)
        };
        Ok(Connection {
            a0: transform(&self.a0, &frame.g0, &frame.g0_inv)?,
            a1: transform(&self.a1, &frame.g1, &frame.g1_inv)?,
        })
    }

    pub fn pullback(&self, map: &RingMap) -> Result<Self, RingError> {
        Ok(Connection {
            a0: self.a0.pullback(map)?,
            a1: self.a1.pullback(map)?,
        })
    }

    pub fn shift(&self) -> Self {
        Connection {
            a0: self.a1.clone(),
            a1: self.a0.clone(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Connection {
            a0: self.a0.direct_sum(&other.a0),
            a1: self.a1.direct_sum(&other.a1),
        }
    }

    /// `∇_M ⊗ 1 + 1 ⊗ ∇_N` in the layout of [`MatrixFactorization::tensor`].
    pub fn tensor(&self, other: &Self) -> Self {
        let r = self.ring();
        let (m0, m1) = self.ranks();
        let (n0, n1) = other.ranks();
        let piece = |am: &FormMatrix, mr: usize, an: &FormMatrix, nr: usize| {
            am.kron(&FormMatrix::identity(r, nr))
                .add(&FormMatrix::identity(r, mr).kron(an))
                .expect("same shape")
        };
        Connection {
            a0: piece(&self.a0, m0, &other.a0, n0).direct_sum(&piece(&self.a1, m1, &other.a1, n1)),
            a1: piece(&self.a0, m0, &other.a1, n1).direct_sum(&piece(&self.a1, m1, &other.a0, n0)),
        }
    }
}

/// `∂f = e∘f - (-1)^{|f|} f∘e` for an endomorphism `f` of homogeneous parity.
pub fn hom_differential(f: &GradedMatrix, mf: &MatrixFactorization) -> Result<GradedMatrix, MfError> {
    let parity = f.parity().ok_or(MfError::MixedParity)?;
    let e = mf.e();
    let ef = e.gmul(f)?;
    let fe = f.gmul(&e)?;
    match parity {
        Parity::Even => Ok(ef.sub(&fe)?),
        Parity::Odd => Ok(ef.add(&fe)?),
    }
}

/// `[∇, e]`: block 10 is `d(e0) + A1·e0 - e0·A0`, block 01 is `d(e1) + A0·e1 - e1·A1`.
pub fn supercommutator(mf: &MatrixFactorization, conn: &Connection) -> Result<GradedMatrix, MfError> {
    check_ring(mf.ring(), conn.ring())?;
    if conn.ranks() != mf.ranks() {
        return Err(ShapeError(format!(
            "connection ranks {:?} vs factorization ranks {:?}",
            conn.ranks(),
            mf.ranks()
        ))
        .into());
    }
    let e0 = mf.e0.to_forms();
    let e1 = mf.e1.to_forms();
    let b10 = mf.e0.d().add(&conn.a1.mul(&e0)?)?.sub(&e0.mul(&conn.a0)?)?;
    let b01 = mf.e1.d().add(&conn.a0.mul(&e1)?)?.sub(&e1.mul(&conn.a1)?)?;
    GradedMatrix::odd(b01, b10)
}
