//! Overflow-checked exact rational arithmetic over a generic integer scalar.
//!
//! Every operation returns `None` (surfaced as [`Error::Overflow`]) instead of
//! wrapping. Instantiate with `i64`/`i128` for speed or `BigInt` when the
//! coefficients must never overflow.

use std::fmt;

use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, FromPrimitive, Signed};

use crate::error::{Error, Result};

/// Integer scalars usable as the base of [`Frac`].
pub trait ExactInt:
    Clone + Ord + fmt::Debug + fmt::Display + Signed + Integer + CheckedAdd + CheckedSub + CheckedMul + CheckedDiv + FromPrimitive
{
}

impl<T> ExactInt for T where
    T: Clone + Ord + fmt::Debug + fmt::Display + Signed + Integer + CheckedAdd + CheckedSub + CheckedMul + CheckedDiv + FromPrimitive
{
}

/// A reduced fraction `num / den` with `den > 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Frac<T> {
    num: T,
    den: T,
}

fn checked_neg<T: ExactInt>(x: &T) -> Option<T> {
    T::zero().checked_sub(x)
}

impl<T: ExactInt> Frac<T> {
    pub fn new(num: T, den: T) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_zero() { (num, den) } else { (num / g.clone(), den / g) };
        if den.is_negative() {
            num = checked_neg(&num)?;
            den = checked_neg(&den)?;
        }
        Some(Frac { num, den })
    }

    pub fn from_int(x: T) -> Self {
        Frac { num: x, den: T::one() }
    }

    pub fn from_i64(x: i64) -> Option<Self> {
        T::from_i64(x).map(Self::from_int)
    }

    pub fn zero() -> Self {
        Self::from_int(T::zero())
    }

    pub fn one() -> Self {
        Self::from_int(T::one())
    }

    pub fn numer(&self) -> &T {
        &self.num
    }

    pub fn denom(&self) -> &T {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn checked_add(&self, rhs: &Self) -> Option<Self> {
        let g = self.den.gcd(&rhs.den);
        let ld = self.den.checked_div(&g)?;
        let rd = rhs.den.checked_div(&g)?;
        let num = self.num.checked_mul(&rd)?.checked_add(&rhs.num.checked_mul(&ld)?)?;
        let den = ld.checked_mul(&rhs.den)?;
        Self::new(num, den)
    }

    pub fn checked_neg(&self) -> Option<Self> {
        Some(Frac { num: checked_neg(&self.num)?, den: self.den.clone() })
    }

    pub fn checked_sub(&self, rhs: &Self) -> Option<Self> {
        self.checked_add(&rhs.checked_neg()?)
    }

    pub fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let div = |a: &T, g: &T| if g.is_zero() { Some(a.clone()) } else { a.checked_div(g) };
        let num = div(&self.num, &g1)?.checked_mul(&div(&rhs.num, &g2)?)?;
        let den = div(&self.den, &g2)?.checked_mul(&div(&rhs.den, &g1)?)?;
        Self::new(num, den)
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let recip = Self::new(rhs.den.clone(), rhs.num.clone())?;
        self.checked_mul(&recip)
    }
}

impl<T: fmt::Display + num_traits::One + PartialEq> fmt::Display for Frac<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == T::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl<T: fmt::Display + num_traits::One + PartialEq> fmt::Debug for Frac<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<T: ExactInt + std::str::FromStr> std::str::FromStr for Frac<T> {
    type Err = Error;

    /// `p` or `p/q`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("bad rational {s:?}"));
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        let p: T = p.parse().map_err(|_| bad())?;
        let q: T = q.parse().map_err(|_| bad())?;
        Frac::new(p, q).ok_or_else(bad)
    }
}

pub(crate) fn lift<T: ExactInt>(v: &[i64]) -> Result<Vec<Frac<T>>> {
    v.iter().map(|&x| Frac::from_i64(x).ok_or(Error::Overflow)).collect()
}

/// Finds `λ` with `Σ λ_j · basis[j] = target`, or `None` if `target` is not in
/// the rational span. Free coefficients are set to zero.
pub fn express_in_span<T: ExactInt>(basis: &[Vec<i64>], target: &[i64]) -> Result<Option<Vec<Frac<T>>>> {
    let dim = target.len();
    let cols = basis.len();
    debug_assert!(basis.iter().all(|v| v.len() == dim));

    // Augmented matrix, one row per coordinate.
    let mut m: Vec<Vec<Frac<T>>> = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut row: Vec<i64> = basis.iter().map(|v| v[i]).collect();
        row.push(target[i]);
        m.push(lift(&row)?);
    }

    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..dim).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = Frac::one().checked_div(&m[r][c]).ok_or(Error::Overflow)?;
        for j in c..=cols {
            m[r][j] = m[r][j].checked_mul(&inv).ok_or(Error::Overflow)?;
        }
        for i in 0..dim {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].clone();
            for j in c..=cols {
                let delta = factor.checked_mul(&m[r][j]).ok_or(Error::Overflow)?;
                m[i][j] = m[i][j].checked_sub(&delta).ok_or(Error::Overflow)?;
            }
        }
        pivots.push(c);
        r += 1;
        if r == dim {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return Ok(None);
    }
    let mut coeffs = vec![Frac::zero(); cols];
    for (row, &c) in pivots.iter().enumerate() {
        coeffs[c] = m[row][cols].clone();
    }
    Ok(Some(coeffs))
}

/// `Σ coeffs[j] · vectors[j]`, exactly.
pub fn combine<T: ExactInt>(vectors: &[Vec<i64>], coeffs: &[Frac<T>], dim: usize) -> Result<Vec<Frac<T>>> {
    let mut acc = vec![Frac::zero(); dim];
    for (v, c) in vectors.iter().zip(coeffs) {
        for (a, &x) in acc.iter_mut().zip(v) {
            let term = c.checked_mul(&Frac::from_i64(x).ok_or(Error::Overflow)?).ok_or(Error::Overflow)?;
            *a = a.checked_add(&term).ok_or(Error::Overflow)?;
        }
    }
    Ok(acc)
}
