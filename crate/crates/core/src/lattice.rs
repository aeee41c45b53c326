//! The Picard lattice of a Del Pezzo surface `S_r` (the blowup of the
//! projective plane at `r` general points, `1 <= r <= 8`).
//!
//! `Pic(S_r)` is free on `l, e_1, .., e_r` with intersection form
//! `diag(1, -1, .., -1)`. A class is stored as `(a; b_1, .., b_r)` and
//! denotes `a*l - sum b_i e_i`, so the exceptional curve `e_i` itself is
//! `(0; .., -1, ..)`.
//!
//! Coefficients are `i64`. Every operation in this crate is exact for
//! coefficients with absolute value up to [`MAX_COEFF`] (the worst case is a
//! pairing of nine products, far below `i64::MAX`). The class literal parser
//! refuses anything larger; overflow beyond that range panics in builds with
//! overflow checks enabled.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest number of blown-up points handled.
pub const MAX_RANK: usize = 8;

/// Guaranteed-exact coefficient range.
pub const MAX_COEFF: i64 = 1_000_000;

/// Number of blown-up points, always in `1..=8`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rank(u8);

impl Rank {
    pub fn new(r: usize) -> Result<Self> {
        if (1..=MAX_RANK).contains(&r) {
            Ok(Rank(r as u8))
        } else {
            Err(Error::RankOutOfRange(r as i64))
        }
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }

    /// All ranks `1..=8`.
    pub fn all() -> impl Iterator<Item = Rank> {
        (1..=MAX_RANK as u8).map(Rank)
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A divisor class `a*l - sum b_i e_i` on `S_r`.
///
/// Entries of `b` past `r` are always zero, so the derived equality and
/// ordering only ever compare meaningful coordinates.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PicardClass {
    rank: Rank,
    a: i64,
    b: [i64; MAX_RANK],
}

impl PicardClass {
    /// Builds a class from `a` and exactly `r` subtracted coefficients.
    pub fn new(a: i64, b: &[i64]) -> Result<Self> {
        let rank = Rank::new(b.len())?;
        Ok(Self::from_parts(rank, a, b))
    }

    /// Builds a class on `S_rank`; `b` must have length `rank`.
    pub fn with_rank(rank: Rank, a: i64, b: &[i64]) -> Result<Self> {
        if b.len() != rank.get() {
            return Err(Error::LengthMismatch {
                expected: rank.get(),
                found: b.len(),
            });
        }
        Ok(Self::from_parts(rank, a, b))
    }

    pub(crate) fn from_parts(rank: Rank, a: i64, b: &[i64]) -> Self {
        debug_assert_eq!(b.len(), rank.get());
        let mut coeffs = [0; MAX_RANK];
        coeffs[..b.len()].copy_from_slice(b);
        PicardClass { rank, a, b: coeffs }
    }

    pub fn zero(rank: Rank) -> Self {
        PicardClass {
            rank,
            a: 0,
            b: [0; MAX_RANK],
        }
    }

    /// The pullback `l` of a line.
    pub fn line(rank: Rank) -> Self {
        PicardClass {
            a: 1,
            ..Self::zero(rank)
        }
    }

    /// The exceptional curve `e_i` over the `i`-th point (zero-based).
    pub fn exceptional(rank: Rank, i: usize) -> Self {
        assert!(
            i < rank.get(),
            "point index {i} out of range for r = {rank}"
        );
        let mut class = Self::zero(rank);
        class.b[i] = -1;
        class
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> &[i64] {
        &self.b[..self.rank.get()]
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b().iter().all(|&x| x == 0)
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.rank == other.rank {
            Ok(())
        } else {
            Err(Error::RankMismatch {
                left: self.rank.get(),
                right: other.rank.get(),
            })
        }
    }

    /// Intersection number `a a' - sum b_i b'_i`.
    pub fn intersect(&self, other: &Self) -> Result<i64> {
        self.check_rank(other)?;
        Ok(self.dot(other))
    }

    /// Intersection number for classes already known to share a rank.
    #[inline]
    pub(crate) fn dot(&self, other: &Self) -> i64 {
        debug_assert_eq!(self.rank, other.rank);
        let mut acc = self.a * other.a;
        for i in 0..self.rank.get() {
            acc -= self.b[i] * other.b[i];
        }
        acc
    }

    /// Self-intersection `L^2`.
    pub fn degree(&self) -> i64 {
        self.dot(self)
    }

    /// `K . L` where `K` is the canonical class; equals `-3a + sum b_i`.
    pub fn canonical_degree(&self) -> i64 {
        -3 * self.a + self.b().iter().sum::<i64>()
    }

    /// `-K . L`, positive on every nonzero effective class.
    pub fn anticanonical_degree(&self) -> i64 {
        -self.canonical_degree()
    }

    /// Sectional genus, from `2g - 2 = L^2 + K.L`.
    pub fn sectional_genus(&self) -> i64 {
        let twice = self.degree() + self.canonical_degree();
        // a^2 - 3a and b_i^2 + b_i are all even.
        assert!(twice % 2 == 0, "odd L^2 + K.L for {self}");
        twice / 2 + 1
    }

    /// The adjoint class `K + L`.
    pub fn adjoint(&self) -> Self {
        *self + canonical_class(self.rank)
    }

    /// Applies a permutation of the points: coordinate `i` moves to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.rank.get());
        let mut out = *self;
        for (i, &p) in perm.iter().enumerate() {
            out.b[p] = self.b[i];
        }
        out
    }

    /// Copy with `b` sorted ascending.
    pub fn sorted_ascending(&self) -> Self {
        let mut out = *self;
        out.b[..self.rank.get()].sort_unstable();
        out
    }

    pub fn type_pattern(&self) -> TypePattern {
        TypePattern::of(self)
    }
}

/// Canonical class `K = -3l + sum e_i`, i.e. `(-3; -1, .., -1)`.
pub fn canonical_class(rank: Rank) -> PicardClass {
    let mut class = PicardClass::zero(rank);
    class.a = -3;
    for x in &mut class.b[..rank.get()] {
        *x = -1;
    }
    class
}

/// Anticanonical class `-K = 3l - sum e_i`.
pub fn anticanonical_class(rank: Rank) -> PicardClass {
    -canonical_class(rank)
}

impl Add for PicardClass {
    type Output = PicardClass;

    fn add(mut self, rhs: PicardClass) -> PicardClass {
        assert_eq!(self.rank, rhs.rank, "adding classes of different rank");
        self.a += rhs.a;
        for i in 0..MAX_RANK {
            self.b[i] += rhs.b[i];
        }
        self
    }
}

impl Sub for PicardClass {
    type Output = PicardClass;

    fn sub(self, rhs: PicardClass) -> PicardClass {
        self + (-rhs)
    }
}

impl Neg for PicardClass {
    type Output = PicardClass;

    fn neg(mut self) -> PicardClass {
        self.a = -self.a;
        for x in &mut self.b {
            *x = -*x;
        }
        self
    }
}

impl Mul<PicardClass> for i64 {
    type Output = PicardClass;

    fn mul(self, mut rhs: PicardClass) -> PicardClass {
        rhs.a *= self;
        for x in &mut rhs.b {
            *x *= self;
        }
        rhs
    }
}

/// Renders in the literal grammar `a;b1,..,br`.
impl fmt::Display for PicardClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.a)?;
        for (i, x) in self.b().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PicardClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PicardClass({self})")
    }
}

impl Serialize for PicardClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Permutation-invariant shape `(a0; m1^n1, m2^n2, ..)` of a class, with
/// multiplicities listed in descending order and zeros dropped.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypePattern {
    pub a0: i64,
    /// `(multiplicity, count)` pairs, multiplicities strictly descending.
    pub multiplicities: Vec<(i64, usize)>,
}

impl TypePattern {
    pub fn of(class: &PicardClass) -> Self {
        let mut b: Vec<i64> = class.b().iter().copied().filter(|&x| x != 0).collect();
        b.sort_unstable_by(|x, y| y.cmp(x));
        let mut multiplicities: Vec<(i64, usize)> = Vec::new();
        for x in b {
            match multiplicities.last_mut() {
                Some((m, n)) if *m == x => *n += 1,
                _ => multiplicities.push((x, 1)),
            }
        }
        TypePattern {
            a0: class.a(),
            multiplicities,
        }
    }

    /// Set when some multiplicity is negative, as for `e_i = (0; -1)`.
    pub fn has_negative(&self) -> bool {
        self.multiplicities.iter().any(|&(m, _)| m < 0)
    }

    /// Number of points with nonzero multiplicity.
    pub fn support(&self) -> usize {
        self.multiplicities.iter().map(|&(_, n)| n).sum()
    }

    /// Multiplicities in descending order, one entry per point.
    pub fn expanded(&self) -> Vec<i64> {
        self.multiplicities
            .iter()
            .flat_map(|&(m, n)| std::iter::repeat_n(m, n))
            .collect()
    }

    /// The class with this shape on `S_rank`, multiplicities descending then
    /// zero padding.
    pub fn to_class(&self, rank: Rank) -> Result<PicardClass> {
        let mut b = self.expanded();
        if b.len() > rank.get() {
            return Err(Error::PatternTooLong {
                support: b.len(),
                rank: rank.get(),
            });
        }
        b.resize(rank.get(), 0);
        Ok(PicardClass::from_parts(rank, self.a0, &b))
    }
}

/// `(a0;m1^n1,m2^n2,..)` with `^1` omitted, e.g. `(6;3,2^7)`.
impl fmt::Display for TypePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", self.a0)?;
        for (i, &(m, n)) in self.multiplicities.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if n == 1 {
                write!(f, "{m}")?;
            } else {
                write!(f, "{m}^{n}")?;
            }
        }
        f.write_str(")")
    }
}

impl Serialize for TypePattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(a: i64, b: &[i64]) -> PicardClass {
        PicardClass::new(a, b).unwrap()
    }

    #[test]
    fn intersection_examples() {
        let r2 = Rank::new(2).unwrap();
        let l = PicardClass::line(r2);
        assert_eq!(l.intersect(&l).unwrap(), 1);
        let conic_line = class(1, &[1, 1]);
        assert_eq!(conic_line.intersect(&conic_line).unwrap(), -1);
        let r6 = Rank::new(6).unwrap();
        let minus_k = anticanonical_class(r6);
        assert_eq!(minus_k.intersect(&minus_k).unwrap(), 3);
    }

    #[test]
    fn mismatched_ranks_are_rejected() {
        let x = class(1, &[1]);
        let y = class(1, &[1, 0]);
        assert!(matches!(
            x.intersect(&y),
            Err(Error::RankMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn rank_bounds() {
        assert!(Rank::new(0).is_err());
        assert!(Rank::new(9).is_err());
        assert!(PicardClass::new(1, &[]).is_err());
        assert!(PicardClass::new(1, &[0; 9]).is_err());
    }

    #[test]
    fn degree_and_genus() {
        for r in Rank::all() {
            let minus_k = anticanonical_class(r);
            assert_eq!(minus_k.degree(), 9 - r.get() as i64);
            assert_eq!(minus_k.sectional_genus(), 1);
            assert_eq!(PicardClass::line(r).sectional_genus(), 0);
            assert_eq!(PicardClass::line(r).degree(), 1);
            assert_eq!(PicardClass::exceptional(r, 0).degree(), -1);
            assert_eq!(PicardClass::exceptional(r, 0).sectional_genus(), 0);
        }
    }

    #[test]
    fn canonical_class_coordinates() {
        assert_eq!(canonical_class(Rank::new(1).unwrap()), class(-3, &[-1]));
        assert_eq!(canonical_class(Rank::new(8).unwrap()), class(-3, &[-1; 8]));
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(class(3, &[1, 1]).adjoint(), class(0, &[0, 0]));
        assert_eq!(class(6, &[2, 2]).adjoint(), class(3, &[1, 1]));
        let l = class(7, &[3, -2]);
        let k = canonical_class(l.rank());
        assert_eq!(l.adjoint().adjoint(), l + 2 * k);
    }

    #[test]
    fn type_pattern_examples() {
        assert_eq!(class(1, &[1, 1, 0]).type_pattern().to_string(), "(1;1^2)");
        assert_eq!(
            class(6, &[3, 2, 2, 2, 2, 2, 2, 2])
                .type_pattern()
                .to_string(),
            "(6;3,2^7)"
        );
        let e = class(0, &[-1]).type_pattern();
        assert_eq!(e.multiplicities, vec![(-1, 1)]);
        assert!(e.has_negative());
        assert_eq!(e.to_string(), "(0;-1)");
    }

    #[test]
    fn pattern_to_class_pads_and_rejects_overlong() {
        let r8 = Rank::new(8).unwrap();
        let p = class(2, &[1, 1, 1, 1, 1, 0, 0, 0]).type_pattern();
        assert_eq!(p.to_class(r8).unwrap(), class(2, &[1, 1, 1, 1, 1, 0, 0, 0]));
        assert!(p.to_class(Rank::new(4).unwrap()).is_err());
    }

    #[test]
    fn display_round_trips_through_coordinates() {
        assert_eq!(class(-3, &[-1, 0, 12]).to_string(), "-3;-1,0,12");
    }
}
