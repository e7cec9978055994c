//! Mather's `σ(n, p)`, the nice dimensions and their boundary.

use std::fmt;

use serde::{Serialize, Serializer};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sigma {
    Finite(u64),
    Infinite,
}

impl Sigma {
    pub fn finite(self) -> Option<u64> {
        match self {
            Sigma::Finite(v) => Some(v),
            Sigma::Infinite => None,
        }
    }
}

impl fmt::Display for Sigma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sigma::Finite(v) => write!(f, "{v}"),
            Sigma::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Sigma {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Sigma::Finite(v) => s.serialize_u64(*v),
            Sigma::Infinite => s.serialize_str("inf"),
        }
    }
}

/// `σ(n, p)`. For `n = 3` the `6(p-n) + 9` branch is used for every `p`.
pub fn sigma(n: u64, p: u64) -> Sigma {
    assert!(n >= 1 && p >= 1, "dimensions are positive");
    if n <= p {
        let d = p - n;
        match n {
            1 => Sigma::Infinite,
            2 => Sigma::Finite(7 * d + 10),
            3 => Sigma::Finite(6 * d + 9),
            _ if d >= 4 => Sigma::Finite(6 * d + 8),
            _ => Sigma::Finite(6 * d + 9),
        }
    } else {
        match n - p {
            1 => Sigma::Finite(9),
            2 => Sigma::Finite(8),
            d => Sigma::Finite(d + 7),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum NiceClass {
    Nice,
    BoundaryNice,
    BeyondNice,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct PairClass {
    pub n: u64,
    pub p: u64,
    pub sigma: Sigma,
    pub class: NiceClass,
    /// The pair carries a bimodular stratum.
    pub exceptional: bool,
}

/// Whether `(n, p)` lies in the explicit boundary lists.
pub fn in_bnd_lists(n: u64, p: u64) -> bool {
    matches!((n, p), (9, 9) | (15, 16) | (21, 23) | (27, 30) | (9, 8) | (8, 6))
        || (n >= 32 && (n - 2).is_multiple_of(6) && p == 7 * ((n - 2) / 6) + 1)
        || (p == 7 && n >= 10)
}

pub fn classify_pair(n: u64, p: u64) -> PairClass {
    let s = sigma(n, p);
    let class = match s {
        Sigma::Infinite => NiceClass::Nice,
        Sigma::Finite(v) if n < v => NiceClass::Nice,
        Sigma::Finite(v) if n == v => NiceClass::BoundaryNice,
        Sigma::Finite(_) => NiceClass::BeyondNice,
    };
    debug_assert_eq!(class == NiceClass::BoundaryNice, in_bnd_lists(n, p));
    PairClass { n, p, sigma: s, class, exceptional: (n, p) == (10, 7) }
}

/// All pairs with `n <= n_max`, `p <= n_max + 10` and `σ(n, p) = n`,
/// ordered by `n` then `p`.
pub fn enumerate_bnd(n_max: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        for p in 1..=n_max + 10 {
            if sigma(n, p) == Sigma::Finite(n) {
                out.push((n, p));
            }
        }
    }
    out
}

/// The boundary of the extra-nice dimensions.
pub fn extra_nice_boundary(n: u64, p: u64) -> bool {
    if n <= p {
        4 * p + 5 == 5 * n && p >= 5
    } else {
        matches!((n, p), (5, 4) | (7, 5)) || (p == 6 && n >= 9)
    }
}

/// Number of cusps `d1² + d2² + 3 d1 d2 - 6 d1 - 6 d2 + 7` of a generic
/// polynomial plane map of degrees `(d1, d2)`.
pub fn cusp_count(d1: i64, d2: i64) -> i64 {
    d1 * d1 + d2 * d2 + 3 * d1 * d2 - 6 * d1 - 6 * d2 + 7
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values() {
        assert_eq!(sigma(9, 9), Sigma::Finite(9));
        assert_eq!(sigma(2, 5), Sigma::Finite(31));
        assert_eq!(sigma(10, 7), Sigma::Finite(10));
        assert_eq!(sigma(1, 4), Sigma::Infinite);
        assert_eq!(sigma(3, 20), Sigma::Finite(6 * 17 + 9));
    }

    #[test]
    fn classes() {
        assert_eq!(classify_pair(8, 8).class, NiceClass::Nice);
        assert_eq!(classify_pair(9, 9).class, NiceClass::BoundaryNice);
        let e = classify_pair(10, 7);
        assert_eq!(e.class, NiceClass::BoundaryNice);
        assert!(e.exceptional);
        assert_eq!(classify_pair(1, 1).class, NiceClass::Nice);
        assert_eq!(classify_pair(10, 10).class, NiceClass::BeyondNice);
    }

    #[test]
    fn bnd_enumeration() {
        assert!(enumerate_bnd(7).is_empty());
        let b9 = enumerate_bnd(9);
        assert_eq!(b9, vec![(8, 6), (9, 8), (9, 9)]);
        assert!(enumerate_bnd(32).contains(&(32, 36)));
    }

    #[test]
    fn extra_nice_and_cusps() {
        assert!(extra_nice_boundary(5, 5));
        assert!(extra_nice_boundary(7, 5));
        assert!(extra_nice_boundary(12, 6));
        assert!(!extra_nice_boundary(8, 8));
        assert!(!extra_nice_boundary(6, 4));
        assert_eq!(cusp_count(1, 3), 2);
        assert_eq!(cusp_count(1, 1), 0);
        assert_eq!(cusp_count(2, 2), 3);
    }
}
