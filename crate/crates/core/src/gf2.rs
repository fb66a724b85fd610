//! Bit strings and dense linear algebra over GF(2).
//!
//! Bit convention used throughout the crate: a [`BitString`] of width `w`
//! is an unsigned integer whose bit `i` is coordinate `i`. Concatenation
//! `hi ‖ lo` places `hi` in the high bits, so the flag bit of `b ‖ a` sits at
//! index `w - 1`, and the first block of a multi-block message is the most
//! significant. Textual forms (parsing, `Display`) are written most
//! significant bit first, the way binary literals are.

use std::fmt;
use std::ops::BitXor;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_WIDTH: usize = 32;

#[inline]
pub(crate) fn mask(width: usize) -> u32 {
    if width >= 32 {
        u32::MAX
    } else {
        (1u32 << width) - 1
    }
}

/// A fixed-width bit vector of at most 32 bits.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BitString {
    width: u8,
    bits: u32,
}

impl BitString {
    pub fn new(width: usize, bits: u32) -> Result<Self> {
        check_width(width)?;
        if bits & !mask(width) != 0 {
            return Err(Error::ValueOutOfRange {
                value: bits as u64,
                width,
            });
        }
        Ok(Self {
            width: width as u8,
            bits,
        })
    }

    /// Builds a bit string without range checks. Callers guarantee
    /// `1 <= width <= 32` and that `bits` fits.
    #[inline]
    pub(crate) fn from_raw(width: usize, bits: u32) -> Self {
        debug_assert!((1..=MAX_WIDTH).contains(&width));
        debug_assert_eq!(bits & !mask(width), 0);
        Self {
            width: width as u8,
            bits,
        }
    }

    pub fn zero(width: usize) -> Result<Self> {
        Self::new(width, 0)
    }

    /// Parses a string of `0`/`1` characters, most significant bit first.
    /// Underscores are ignored.
    pub fn parse(s: &str) -> Result<Self> {
        let digits: Vec<char> = s.chars().filter(|c| *c != '_').collect();
        check_width(digits.len())?;
        let mut bits = 0u32;
        for c in &digits {
            bits <<= 1;
            match c {
                '0' => {}
                '1' => bits |= 1,
                other => {
                    return Err(Error::Format(format!("invalid bit character {other:?}")));
                }
            }
        }
        Ok(Self::from_raw(digits.len(), bits))
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width as usize
    }

    #[inline]
    pub fn bits(&self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn bit(&self, index: usize) -> bool {
        index < self.width() && (self.bits >> index) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn count_ones(&self) -> u32 {
        self.bits.count_ones()
    }

    /// `self ‖ low`: `self` occupies the high bits.
    pub fn concat(&self, low: BitString) -> Result<BitString> {
        let width = self.width() + low.width();
        check_width(width)?;
        Ok(Self::from_raw(
            width,
            (self.bits << low.width()) | low.bits,
        ))
    }

    /// Splits into `(high, low)` where `low` has `low_width` bits.
    pub fn split(&self, low_width: usize) -> Result<(BitString, BitString)> {
        if low_width == 0 || low_width >= self.width() {
            return Err(Error::DimensionMismatch(format!(
                "cannot split {} bits with a {low_width}-bit low part",
                self.width()
            )));
        }
        let high = self.bits >> low_width;
        let low = self.bits & mask(low_width);
        Ok((
            Self::from_raw(self.width() - low_width, high),
            Self::from_raw(low_width, low),
        ))
    }

    pub fn xor(&self, other: BitString) -> Result<BitString> {
        same_width(self, &other)?;
        Ok(Self::from_raw(self.width(), self.bits ^ other.bits))
    }

    /// Lowercase hex, zero padded to `ceil(width / 4)` digits.
    pub fn to_hex(&self) -> String {
        let digits = self.width().div_ceil(4);
        format!("{:0digits$x}", self.bits)
    }
}

impl BitXor for BitString {
    type Output = BitString;

    /// Panics on width mismatch; use [`BitString::xor`] for a checked form.
    fn bitxor(self, rhs: BitString) -> BitString {
        assert_eq!(self.width, rhs.width, "xor of bit strings with different widths");
        Self::from_raw(self.width(), self.bits ^ rhs.bits)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0w$b}", self.bits, w = self.width())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

fn check_width(width: usize) -> Result<()> {
    if (1..=MAX_WIDTH).contains(&width) {
        Ok(())
    } else {
        Err(Error::WidthOutOfRange {
            width,
            min: 1,
            max: MAX_WIDTH,
        })
    }
}

fn same_width(a: &BitString, b: &BitString) -> Result<()> {
    if a.width == b.width {
        Ok(())
    } else {
        Err(Error::WidthMismatch {
            expected: a.width(),
            actual: b.width(),
        })
    }
}

/// Inner product over GF(2): parity of `a AND b`.
pub fn dot(a: BitString, b: BitString) -> Result<bool> {
    same_width(&a, &b)?;
    Ok(parity(a.bits & b.bits))
}

#[inline]
pub(crate) fn parity(x: u32) -> bool {
    x.count_ones() & 1 == 1
}

/// Dense row-major GF(2) matrix with at most 32 columns; each row is one word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gf2Matrix {
    cols: usize,
    rows: Vec<u32>,
}

impl Gf2Matrix {
    pub fn new(cols: usize) -> Result<Self> {
        check_width(cols)?;
        Ok(Self {
            cols,
            rows: Vec::new(),
        })
    }

    pub fn from_rows(cols: usize, rows: &[BitString]) -> Result<Self> {
        let mut m = Self::new(cols)?;
        for r in rows {
            m.push_row(*r)?;
        }
        Ok(m)
    }

    pub fn identity(size: usize) -> Result<Self> {
        check_width(size)?;
        Ok(Self {
            cols: size,
            rows: (0..size).map(|i| 1u32 << (size - 1 - i)).collect(),
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        check_width(cols)?;
        Ok(Self {
            cols,
            rows: vec![0; rows],
        })
    }

    pub fn push_row(&mut self, row: BitString) -> Result<()> {
        if row.width() != self.cols {
            return Err(Error::WidthMismatch {
                expected: self.cols,
                actual: row.width(),
            });
        }
        self.rows.push(row.bits());
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> BitString {
        BitString::from_raw(self.cols, self.rows[i])
    }

    pub fn row_words(&self) -> &[u32] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        let mut basis = [0u32; MAX_WIDTH];
        let mut rank = 0;
        for &r in &self.rows {
            if insert_reduced(&mut basis, r) {
                rank += 1;
            }
        }
        rank
    }
}

/// Reduces `v` against a basis indexed by leading bit and inserts it if
/// anything remains. Returns whether `v` was independent.
fn insert_reduced(basis: &mut [u32; MAX_WIDTH], mut v: u32) -> bool {
    while v != 0 {
        let lead = 31 - v.leading_zeros() as usize;
        if basis[lead] == 0 {
            basis[lead] = v;
            return true;
        }
        v ^= basis[lead];
    }
    false
}

/// Result of [`solve_affine`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Solved(BitString),
    Underdetermined,
    Inconsistent,
}

/// Solves `lhs · s = rhs` over GF(2), where row `i` of `lhs` holds the
/// coefficients of equation `i` (coefficient of `s_c` is bit `c`).
///
/// Inconsistency is reported ahead of rank deficiency.
pub fn solve_affine(lhs: &Gf2Matrix, rhs: &[bool]) -> Result<SolveOutcome> {
    if lhs.rows() != rhs.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} equations but {} right-hand-side bits",
            lhs.rows(),
            rhs.len()
        )));
    }
    let cols = lhs.cols;
    let rhs_bit = 1u64 << cols;
    let mut aug: Vec<u64> = lhs
        .rows
        .iter()
        .zip(rhs)
        .map(|(&r, &b)| r as u64 | if b { rhs_bit } else { 0 })
        .collect();

    // Gauss-Jordan, pivot on the first row with a nonzero entry in the column.
    let mut pivot_row = 0;
    let mut pivots = Vec::with_capacity(cols);
    for col in (0..cols).rev() {
        let bit = 1u64 << col;
        let Some(found) = (pivot_row..aug.len()).find(|&i| aug[i] & bit != 0) else {
            continue;
        };
        aug.swap(pivot_row, found);
        let p = aug[pivot_row];
        for (i, row) in aug.iter_mut().enumerate() {
            if i != pivot_row && *row & bit != 0 {
                *row ^= p;
            }
        }
        pivots.push((col, pivot_row));
        pivot_row += 1;
    }

    if aug[pivot_row..].contains(&rhs_bit) {
        return Ok(SolveOutcome::Inconsistent);
    }
    if pivots.len() < cols {
        return Ok(SolveOutcome::Underdetermined);
    }
    let mut s = 0u32;
    for (col, row) in pivots {
        if aug[row] & rhs_bit != 0 {
            s |= 1 << col;
        }
    }
    Ok(SolveOutcome::Solved(BitString::from_raw(cols, s)))
}

/// Row basis that only accepts vectors outside its current span.
///
/// Keeps the accepted rows verbatim alongside a reduced copy indexed by
/// leading bit, so each insertion costs one pass over at most `cols` words.
#[derive(Clone, Debug)]
pub struct Gf2Basis {
    accepted: Gf2Matrix,
    reduced: [u32; MAX_WIDTH],
}

impl Gf2Basis {
    pub fn new(cols: usize) -> Result<Self> {
        Ok(Self {
            accepted: Gf2Matrix::new(cols)?,
            reduced: [0; MAX_WIDTH],
        })
    }

    pub fn add_if_independent(&mut self, v: BitString) -> Result<bool> {
        if v.width() != self.accepted.cols {
            return Err(Error::WidthMismatch {
                expected: self.accepted.cols,
                actual: v.width(),
            });
        }
        let added = insert_reduced(&mut self.reduced, v.bits());
        if added {
            self.accepted.rows.push(v.bits());
        }
        Ok(added)
    }

    pub fn rank(&self) -> usize {
        self.accepted.rows()
    }

    pub fn cols(&self) -> usize {
        self.accepted.cols
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.cols()
    }

    pub fn matrix(&self) -> &Gf2Matrix {
        &self.accepted
    }
}

/// Unnormalized Walsh-Hadamard transform in place:
/// `v[j] <- sum_u (-1)^(u·j) v[u]`.
pub fn walsh_hadamard_in_place(v: &mut [i64]) -> Result<()> {
    let len = v.len();
    if !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    let mut half = 1;
    while half < len {
        for block in v.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        half *= 2;
    }
    Ok(())
}

pub fn walsh_hadamard(v: &[i64]) -> Result<Vec<i64>> {
    let mut out = v.to_vec();
    walsh_hadamard_in_place(&mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    #[test]
    fn dot_examples() {
        assert!(!dot(b("0000"), b("1011")).unwrap());
        assert!(dot(b("1011"), b("1011")).unwrap());
        assert!(dot(b("110"), b("011")).unwrap());
        assert!(matches!(
            dot(b("11"), b("110")),
            Err(Error::WidthMismatch { .. })
        ));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Gf2Matrix::identity(3).unwrap().rank(), 3);
        assert_eq!(Gf2Matrix::zeros(4, 3).unwrap().rank(), 0);
        let m = Gf2Matrix::from_rows(3, &[b("110"), b("011"), b("101")]).unwrap();
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn solve_examples() {
        let id = Gf2Matrix::identity(2).unwrap();
        assert_eq!(
            solve_affine(&id, &[true, false]).unwrap(),
            SolveOutcome::Solved(b("10"))
        );
        let dup = Gf2Matrix::from_rows(2, &[b("10"), b("10")]).unwrap();
        assert_eq!(
            solve_affine(&dup, &[true, true]).unwrap(),
            SolveOutcome::Underdetermined
        );
        let tri = Gf2Matrix::from_rows(2, &[b("11"), b("01")]).unwrap();
        assert_eq!(
            solve_affine(&tri, &[false, true]).unwrap(),
            SolveOutcome::Solved(b("11"))
        );
        assert_eq!(
            solve_affine(&dup, &[true, false]).unwrap(),
            SolveOutcome::Inconsistent
        );
        assert!(solve_affine(&dup, &[true]).is_err());
    }

    #[test]
    fn basis_examples() {
        let mut basis = Gf2Basis::new(3).unwrap();
        assert!(!basis.add_if_independent(b("000")).unwrap());
        assert!(basis.add_if_independent(b("101")).unwrap());

        let mut basis = Gf2Basis::new(3).unwrap();
        assert!(basis.add_if_independent(b("110")).unwrap());
        assert!(basis.add_if_independent(b("011")).unwrap());
        assert!(!basis.add_if_independent(b("101")).unwrap());
        assert_eq!(basis.rank(), 2);
        assert!(basis.add_if_independent(b("10")).is_err());
    }

    #[test]
    fn walsh_examples() {
        assert_eq!(walsh_hadamard(&[1, 1, 1, 1]).unwrap(), vec![4, 0, 0, 0]);
        assert_eq!(walsh_hadamard(&[1, 0, 0, 0]).unwrap(), vec![1, 1, 1, 1]);
        // Support {00, 01}: the transform is twice the indicator of its
        // annihilator {00, 10}.
        assert_eq!(walsh_hadamard(&[1, 1, 0, 0]).unwrap(), vec![2, 0, 2, 0]);
        assert!(matches!(
            walsh_hadamard(&[1, 2, 3]),
            Err(Error::NotPowerOfTwo(3))
        ));
    }

    #[test]
    fn walsh_matches_definition() {
        let v: Vec<i64> = vec![3, -1, 4, 1, -5, 9, 2, -6];
        let fast = walsh_hadamard(&v).unwrap();
        for (j, &got) in fast.iter().enumerate() {
            let direct: i64 = v
                .iter()
                .enumerate()
                .map(|(u, &x)| if parity((u & j) as u32) { -x } else { x })
                .sum();
            assert_eq!(got, direct);
        }
    }

    #[test]
    fn concat_and_split() {
        let s = b("1").concat(b("10")).unwrap();
        assert_eq!(s, b("110"));
        assert_eq!(s.split(2).unwrap(), (b("1"), b("10")));
        assert_eq!(s.to_string(), "110");
        assert_eq!(b("1010_0001").to_hex(), "a1");
        assert!(BitString::new(3, 8).is_err());
        assert!(BitString::new(0, 0).is_err());
        assert!(BitString::new(33, 0).is_err());
    }

    fn same_width_triple() -> impl Strategy<Value = (BitString, BitString, BitString)> {
        (1usize..=32).prop_flat_map(|w| {
            let m = mask(w);
            (any::<u32>(), any::<u32>(), any::<u32>()).prop_map(move |(x, y, z)| {
                (
                    BitString::from_raw(w, x & m),
                    BitString::from_raw(w, y & m),
                    BitString::from_raw(w, z & m),
                )
            })
        })
    }

    proptest! {
        #[test]
        fn dot_is_bilinear((x, y, z) in same_width_triple()) {
            let lhs = dot(x ^ y, z).unwrap();
            prop_assert_eq!(lhs, dot(x, z).unwrap() ^ dot(y, z).unwrap());
            prop_assert_eq!((x ^ y).bits() & !mask(x.width()), 0);
        }

        #[test]
        fn walsh_is_self_inverse_and_parseval(m in 0usize..=8, seed in any::<u64>()) {
            let len = 1usize << m;
            let v: Vec<i64> = (0..len)
                .map(|i| ((seed.wrapping_mul(i as u64 + 1) >> 17) % 21) as i64 - 10)
                .collect();
            let w = walsh_hadamard(&v).unwrap();
            let ww = walsh_hadamard(&w).unwrap();
            prop_assert!(ww.iter().zip(&v).all(|(a, b)| *a == (len as i64) * b));
            let lhs: i64 = w.iter().map(|x| x * x).sum();
            let rhs: i64 = (len as i64) * v.iter().map(|x| x * x).sum::<i64>();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn solve_substitutes_back(cols in 1usize..=12, rows in proptest::collection::vec(any::<u32>(), 0..20), rhs_seed in any::<u32>()) {
            let m = mask(cols);
            let rows: Vec<BitString> = rows.iter().map(|r| BitString::from_raw(cols, r & m)).collect();
            let rhs: Vec<bool> = (0..rows.len()).map(|i| (rhs_seed >> (i % 32)) & 1 == 1).collect();
            let lhs = Gf2Matrix::from_rows(cols, &rows).unwrap();
            if let SolveOutcome::Solved(s) = solve_affine(&lhs, &rhs).unwrap() {
                for (r, want) in rows.iter().zip(&rhs) {
                    prop_assert_eq!(dot(*r, s).unwrap(), *want);
                }
            }
        }

        #[test]
        fn rank_equals_retained_rows(cols in 1usize..=16, rows in proptest::collection::vec(any::<u32>(), 0..24)) {
            let m = mask(cols);
            let rows: Vec<BitString> = rows.iter().map(|r| BitString::from_raw(cols, r & m)).collect();
            let matrix = Gf2Matrix::from_rows(cols, &rows).unwrap();
            let mut basis = Gf2Basis::new(cols).unwrap();
            for r in &rows {
                basis.add_if_independent(*r).unwrap();
            }
            prop_assert_eq!(matrix.rank(), basis.rank());
            prop_assert!(matrix.rank() <= cols.min(rows.len()));
        }
    }
}
