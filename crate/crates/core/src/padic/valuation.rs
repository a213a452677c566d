use std::cmp::Ordering;
use std::fmt;

/// A p-adic valuation as known to the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    /// Exactly this value.
    Finite(i64),
    /// The value is an exact zero.
    Infinite,
    /// Indistinguishable from zero at the available precision: the
    /// valuation is at least this bound.
    AtLeast(i64),
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// A certified lower bound, `None` meaning `+∞`.
    pub fn lower_bound(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_certified(self) -> bool {
        !matches!(self, Valuation::AtLeast(_))
    }

    /// Whether the valuation is provably `≥ bound`. `None` when undecidable.
    pub fn at_least(self, bound: i64) -> Option<bool> {
        match self {
            Valuation::Finite(v) => Some(v >= bound),
            Valuation::Infinite => Some(true),
            Valuation::AtLeast(v) if v >= bound => Some(true),
            Valuation::AtLeast(_) => None,
        }
    }


    pub fn shift(self, by: i64) -> Valuation {
        match self {
            Valuation::Finite(v) => Valuation::Finite(v + by),
            Valuation::AtLeast(v) => Valuation::AtLeast(v + by),
            Valuation::Infinite => Valuation::Infinite,
        }
    }

    /// Minimum of two certified valuations; `None` if either is uncertified
    /// and could be the smaller one.
    pub fn min(self, other: Valuation) -> Option<Valuation> {
        use Valuation::*;
        match (self, other) {
            (Infinite, x) | (x, Infinite) => Some(x),
            (Finite(a), Finite(b)) => Some(Finite(a.min(b))),
            (Finite(a), AtLeast(b)) | (AtLeast(b), Finite(a)) => {
                if a <= b {
                    Some(Finite(a))
                } else {
                    None
                }
            }
            (AtLeast(a), AtLeast(b)) => Some(AtLeast(a.min(b))),
        }
    }

    /// Total order used for sorting and comparisons of certified values;
    /// `AtLeast(v)` sorts as `v`.
    pub fn key(self) -> (i64, u8) {
        match self {
            Valuation::Finite(v) => (v, 0),
            Valuation::AtLeast(v) => (v, 1),
            Valuation::Infinite => (i64::MAX, 2),
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        use Valuation::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Some(a.cmp(b)),
            (Infinite, Infinite) => Some(Ordering::Equal),
            (Infinite, Finite(_)) => Some(Ordering::Greater),
            (Finite(_), Infinite) => Some(Ordering::Less),
            _ => None,
        }
    }
}

/// Valuation of a product.
impl std::ops::Add for Valuation {
    type Output = Valuation;

    fn add(self, other: Valuation) -> Valuation {
        use Valuation::*;
        match (self, other) {
            (Infinite, _) | (_, Infinite) => Infinite,
            (Finite(a), Finite(b)) => Finite(a + b),
            (Finite(a), AtLeast(b)) | (AtLeast(a), Finite(b)) | (AtLeast(a), AtLeast(b)) => {
                AtLeast(a + b)
            }
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
            Valuation::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}
