//! Clock regions with respect to a constant `K`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::rational::Rational;

/// A `K`-region: the point `{n}`, the open interval `(n, n+1)`, or `(K, ∞)`.
///
/// Regions are ordered by position on the real line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    Point(u32),
    Open(u32),
    AboveK,
}

impl Region {
    fn key(self) -> (u8, u64) {
        match self {
            Region::Point(n) => (0, 2 * n as u64),
            Region::Open(n) => (0, 2 * n as u64 + 1),
            Region::AboveK => (1, 0),
        }
    }

    /// Number of regions for constant `k`.
    pub fn count(k: u32) -> usize {
        2 * k as usize + 2
    }

    /// All regions for `k`, in increasing order.
    pub fn all(k: u32) -> Vec<Region> {
        (0..Region::count(k)).map(|i| Region::from_index(i, k)).collect()
    }

    /// Position among the regions of `k`; `Point(n)` is `2n`, `Open(n)` is `2n+1`.
    pub fn index(self, k: u32) -> usize {
        match self {
            Region::Point(n) => 2 * n as usize,
            Region::Open(n) => 2 * n as usize + 1,
            Region::AboveK => 2 * k as usize + 1,
        }
    }

    pub fn from_index(i: usize, k: u32) -> Region {
        let top = 2 * k as usize + 1;
        assert!(i <= top, "region index out of range");
        if i == top {
            Region::AboveK
        } else if i.is_multiple_of(2) {
            Region::Point((i / 2) as u32)
        } else {
            Region::Open((i / 2) as u32)
        }
    }

    pub fn is_valid(self, k: u32) -> bool {
        match self {
            Region::Point(n) => n <= k,
            Region::Open(n) => n < k,
            Region::AboveK => true,
        }
    }

    /// The region of clock value `v`.
    pub fn of(v: &Rational, k: u32) -> Region {
        if *v > k as u64 {
            return Region::AboveK;
        }
        // v <= k, so the integer part fits
        let n = v.floor_u64().unwrap_or(u64::MAX) as u32;
        if v.is_integer() {
            Region::Point(n)
        } else {
            Region::Open(n)
        }
    }

    /// The region of `halves / 2`.
    pub fn of_halves(halves: u64, k: u32) -> Region {
        if halves > 2 * k as u64 {
            Region::AboveK
        } else if halves.is_multiple_of(2) {
            Region::Point((halves / 2) as u32)
        } else {
            Region::Open((halves / 2) as u32)
        }
    }

    /// The unique half-integral value inside the region (`K + 1/2` above `K`).
    pub fn representative_halves(self, k: u32) -> u64 {
        match self {
            Region::Point(n) => 2 * n as u64,
            Region::Open(n) => 2 * n as u64 + 1,
            Region::AboveK => 2 * k as u64 + 1,
        }
    }

    pub fn representative(self, k: u32) -> Rational {
        Rational::halves(self.representative_halves(k))
    }

    pub fn contains(self, v: &Rational, k: u32) -> bool {
        Region::of(v, k) == self
    }

    /// Smallest constant at which this region is still expressible as itself.
    pub fn min_constant(self) -> u32 {
        match self {
            Region::Point(n) => n,
            Region::Open(n) => n + 1,
            Region::AboveK => 0,
        }
    }

    /// Guard text: `x=N`, `N<x<N+1` or `x>K`.
    pub fn guard_string(self, k: u32) -> String {
        match self {
            Region::Point(n) => format!("x={n}"),
            Region::Open(n) => format!("{}<x<{}", n, n + 1),
            Region::AboveK => format!("x>{k}"),
        }
    }
}

impl PartialOrd for Region {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Region {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Point(n) => write!(f, "{{{n}}}"),
            Region::Open(n) => write!(f, "({}, {})", n, n + 1),
            Region::AboveK => write!(f, "(K, inf)"),
        }
    }
}
