use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign};

use crate::scalar::Real;

/// Path cost: a nonnegative real or the `+∞` sentinel.
///
/// Addition saturates at `+∞`, and comparison is total (NaN is rejected at
/// construction).
#[derive(Clone, Copy, Default, PartialEq)]
pub struct Cost<T>(T);

impl<T: Real> Cost<T> {
    pub fn new(value: T) -> Self {
        assert!(!value.is_nan(), "cost must not be NaN");
        Cost(value)
    }

    pub fn zero() -> Self {
        Cost(T::zero())
    }

    pub fn infinity() -> Self {
        Cost(T::infinity())
    }

    #[inline]
    pub fn value(self) -> T {
        self.0
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// `self - other` as a plain scalar. `∞ - finite = ∞`; `∞ - ∞` is treated as `0`.
    pub fn margin_over(self, other: Self) -> T {
        if !self.0.is_finite() && !other.0.is_finite() {
            T::zero()
        } else {
            self.0 - other.0
        }
    }
}

impl<T: Real> Add for Cost<T> {
    type Output = Cost<T>;

    #[inline]
    fn add(self, rhs: Self) -> Self {
        Cost(self.0 + rhs.0)
    }
}

impl<T: Real> AddAssign for Cost<T> {
    fn add_assign(&mut self, rhs: Self) {
        self.0 = self.0 + rhs.0;
    }
}

impl<T: Real> Eq for Cost<T> {}

impl<T: Real> PartialOrd for Cost<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Real> Ord for Cost<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .partial_cmp(&other.0)
            .expect("costs are never NaN")
    }
}

impl<T: Real> fmt::Debug for Cost<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_finite() {
            write!(f, "Cost({})", self.0)
        } else {
            write!(f, "Cost(inf)")
        }
    }
}

impl<T: Real> fmt::Display for Cost<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_absorbs_addition() {
        let inf = Cost::<f64>::infinity();
        assert_eq!(inf + Cost::new(3.0), inf);
        assert!(Cost::new(1e300) < inf);
        assert_eq!(inf.margin_over(Cost::new(2.0)), f64::INFINITY);
        assert_eq!(inf.margin_over(inf), 0.0);
    }

    #[test]
    fn ordering_is_total() {
        let mut v = vec![Cost::new(3.0), Cost::infinity(), Cost::new(-0.0), Cost::new(1.5)];
        v.sort();
        assert_eq!(v[0].value(), 0.0);
        assert!(!v[3].is_finite());
    }

    #[test]
    #[should_panic]
    fn nan_is_rejected() {
        let _ = Cost::new(f64::NAN);
    }
}
