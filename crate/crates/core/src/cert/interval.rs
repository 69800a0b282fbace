use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A closed interval `[lo, hi]` of reals.
///
/// Every operation rounds to nearest and then steps each bound one ulp
/// outward, so results enclose the exact real result without touching the
/// FPU rounding mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::domain(format!("invalid interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    /// The degenerate interval `[v, v]`.
    pub fn point(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    fn widened(lo: f64, hi: f64) -> Self {
        Self {
            lo: lo.next_down(),
            hi: hi.next_up(),
        }
    }

    pub fn width(self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn contains_interval(self, other: Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Strictly positive: every member is `> 0`.
    pub fn is_positive(self) -> bool {
        self.lo > 0.0
    }

    /// Smallest interval containing both.
    pub fn hull(self, other: Interval) -> Self {
        Self {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// `[max lo, max hi]`: encloses `max(a, b)` for `a` in `self`, `b` in `other`.
    pub fn max(self, other: Interval) -> Self {
        Self {
            lo: self.lo.max(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn sqr(self) -> Self {
        let (a, b) = (self.lo * self.lo, self.hi * self.hi);
        if self.lo >= 0.0 {
            Self::widened(a, b)
        } else if self.hi <= 0.0 {
            Self::widened(b, a)
        } else {
            Self {
                lo: 0.0,
                hi: a.max(b).next_up(),
            }
        }
    }

    /// Square root of the non-negative part; negative lower bounds (rounding
    /// debris around an exact zero) are cut at zero.
    pub fn sqrt(self) -> Result<Self> {
        if self.hi < 0.0 {
            return Err(Error::domain(format!(
                "square root of negative interval [{}, {}]",
                self.lo, self.hi
            )));
        }
        let lo = if self.lo <= 0.0 {
            0.0
        } else {
            self.lo.sqrt().next_down().max(0.0)
        };
        Ok(Self {
            lo,
            hi: self.hi.sqrt().next_up(),
        })
    }

    /// Encloses `self / d` for a positive scalar `d`.
    pub fn div_positive(self, d: f64) -> Self {
        debug_assert!(d > 0.0);
        Self::widened(self.lo / d, self.hi / d)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        Interval::widened(self.lo + o.lo, self.hi + o.hi)
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        Interval::widened(self.lo - o.hi, self.hi - o.lo)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let c = [
            self.lo * o.lo,
            self.lo * o.hi,
            self.hi * o.lo,
            self.hi * o.hi,
        ];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::widened(lo, hi)
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    fn mul(self, s: f64) -> Interval {
        self * Interval::point(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_three_quarters_is_tight() {
        let x = Interval::point(0.5);
        let y = (Interval::point(1.0) - x.sqr()).sqrt().unwrap();
        let r = 3f64.sqrt() / 2.0;
        assert!(y.contains(r));
        let ulp = r.next_up() - r;
        assert!(y.width() <= 4.0 * ulp, "width {} ulps", y.width() / ulp);
    }

    #[test]
    fn boundary_sqrt() {
        let y = (Interval::point(1.0) - Interval::point(1.0).sqr()).sqrt().unwrap();
        assert_eq!(y.lo, 0.0);
        assert!(y.hi > 0.0 && y.hi < 1e-7);
        assert!(Interval::point(-1.0).sqrt().is_err());
    }

    #[test]
    fn sign_cases() {
        let a = Interval::new(-2.0, 3.0).unwrap();
        let s = a.sqr();
        assert_eq!(s.lo, 0.0);
        assert!(s.contains(9.0));
        let p = a * Interval::new(-1.0, 0.5).unwrap();
        assert!(p.contains(-3.0) && p.contains(2.0) && p.contains(-1.5));
        assert!(Interval::new(1.0, 0.0).is_err());
        assert!((-a).contains(-3.0));
    }
}
