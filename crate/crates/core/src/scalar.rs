//! Exact scalar abstraction.
//!
//! Every quantity the solver touches (edge costs, penalties, moat durations,
//! flow values) is compared for exact equality, so the algorithms are generic
//! over an *exact* ordered field rather than over floats.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, NumAssignRef, NumRef, Signed};

/// An exact, totally ordered field element.
///
/// Implemented for every `Ratio<I>` over a signed integer type. Floating point
/// types are deliberately not supported: tightness is an equality test.
pub trait Scalar:
    Clone + Ord + Hash + Debug + Display + Signed + NumRef + NumAssignRef + Send + Sync + 'static
{
    fn from_usize(n: usize) -> Self;

    /// Builds `numer / denom`; `denom` must be nonzero.
    fn from_fraction(numer: i64, denom: i64) -> Self;

    fn is_integer(&self) -> bool;
}

impl<I> Scalar for Ratio<I>
where
    I: Integer + Signed + Clone + Hash + Debug + Display + FromPrimitive + Send + Sync + 'static,
    Ratio<I>: NumRef + NumAssignRef,
{
    fn from_usize(n: usize) -> Self {
        Ratio::from_integer(I::from_usize(n).expect("integer type too narrow"))
    }

    fn from_fraction(numer: i64, denom: i64) -> Self {
        Ratio::new(
            I::from_i64(numer).expect("integer type too narrow"),
            I::from_i64(denom).expect("integer type too narrow"),
        )
    }

    fn is_integer(&self) -> bool {
        Ratio::is_integer(self)
    }
}

/// A scalar extended with `+∞`, used for uncapacitated arcs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Extended<T> {
    Finite(T),
    Infinity,
}

impl<T: Scalar> Extended<T> {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinity)
    }

    pub fn finite(&self) -> Option<&T> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinity => None,
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// `self - amount`, saturating nothing: infinity stays infinity.
    pub fn minus(&self, amount: &T) -> Self {
        match self {
            Extended::Finite(v) => Extended::Finite(v.clone() - amount),
            Extended::Infinity => Extended::Infinity,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Extended::Finite(v) => v.is_positive(),
            Extended::Infinity => true,
        }
    }
}

impl<T: Scalar> From<T> for Extended<T> {
    fn from(v: T) -> Self {
        Extended::Finite(v)
    }
}

impl<T: Scalar> PartialOrd for Extended<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Ord for Extended<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.cmp(b),
            (Extended::Finite(_), Extended::Infinity) => Ordering::Less,
            (Extended::Infinity, Extended::Finite(_)) => Ordering::Greater,
            (Extended::Infinity, Extended::Infinity) => Ordering::Equal,
        }
    }
}

impl<T: Display> Display for Extended<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinity => f.write_str("inf"),
        }
    }
}

/// Sums an iterator of borrowed scalars.
pub fn sum<'a, T: Scalar>(items: impl IntoIterator<Item = &'a T>) -> T {
    let mut total = T::zero();
    for v in items {
        total += v;
    }
    total
}
