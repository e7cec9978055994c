//! Exact multivariate polynomials over `Q` or `Q(λ)`.

mod monomial;
mod parse;
mod polynomial;
mod ring;
mod scalar;
mod upoly;

pub use monomial::{count_up_to, Monomial};
pub use parse::{parse_factors, parse_polynomial, parse_vector_field};
pub use polynomial::Polynomial;
pub(crate) use polynomial::PowerCache;
pub use ring::{ExcludedLocus, RingSpec};
pub use scalar::{lcm_denominators, RatFunc, Scalar};
pub use upoly::ZPoly;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier '{name}' at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("negative exponent at byte {offset}")]
    NegativeExponent { offset: usize },
    #[error("operands belong to different rings")]
    RingMismatch,
    #[error("expected {expected} substitutions, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("substituted polynomial has a nonzero constant term")]
    ConstantTerm,
    #[error("denominator vanishes at the requested parameter value")]
    DenominatorVanishes,
    #[error("'{0}' is not a valid name")]
    BadName(String),
    #[error("name '{0}' is used twice")]
    DuplicateName(String),
    #[error("excluded locus must be a nonzero polynomial")]
    ZeroExcludedLocus,
    #[error("excluded locus given without a parameter")]
    LocusWithoutParameter,
}

impl PolyError {
    /// Shift reported byte offsets by `by` (for parsing substrings).
    pub fn shifted(self, by: usize) -> Self {
        match self {
            PolyError::Syntax { offset, message } => PolyError::Syntax { offset: offset + by, message },
            PolyError::UnknownIdentifier { name, offset } => PolyError::UnknownIdentifier { name, offset: offset + by },
            PolyError::NegativeExponent { offset } => PolyError::NegativeExponent { offset: offset + by },
            e => e,
        }
    }
}

/// Parameter-only polynomial from a scalar polynomial (all terms constant
/// monomials), cleared of denominators.
pub fn as_param_poly(p: &Polynomial) -> Option<ZPoly> {
    if p.terms().keys().any(|m| !m.is_one()) {
        return None;
    }
    let c = p.constant_term();
    let (n, _d) = c.to_fraction();
    Some(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_examples() {
        let r = RingSpec::with_param(&["x", "y", "z"], "l");
        let f = parse_polynomial("x^2 + l*y*z", &r).unwrap();
        assert_eq!(f.partial_derivative(0), parse_polynomial("2*x", &r).unwrap());
        assert_eq!(f.partial_derivative(1), parse_polynomial("l*z", &r).unwrap());
        let a = parse_polynomial("x*y", &r).unwrap();
        let b = parse_polynomial("x^3", &r).unwrap();
        assert_eq!(&a * &b, parse_polynomial("x^4*y", &r).unwrap());
    }

    #[test]
    fn truncation_examples() {
        let r = RingSpec::rational(&["x", "y"]);
        let p = |s| parse_polynomial(s, &r).unwrap();
        assert_eq!(p("x^4+x^2+x").truncate(2), p("x^2+x"));
        assert!(p("x^3 + y").truncate(0).is_zero());
        assert!(p("(x+y)^3").truncate(2).is_zero());
    }

    #[test]
    fn composition_examples() {
        let src = RingSpec::with_param(&["x", "y", "z"], "l");
        let tgt = RingSpec::with_param(&["Y1", "Y2", "Y3"], "l");
        let f: Vec<_> = ["x^2+l*y*z", "y^2+l*x*z", "z^2+l*x*y"]
            .iter()
            .map(|s| parse_polynomial(s, &src).unwrap())
            .collect();
        let g = parse_polynomial("Y1^2", &tgt).unwrap();
        assert!(g.compose_truncated(&f, 3).unwrap().is_zero());
        let g1 = parse_polynomial("Y1", &tgt).unwrap();
        assert_eq!(g1.compose_truncated(&f, 5).unwrap(), f[0]);

        let s2 = RingSpec::rational(&["x", "y"]);
        let t2 = RingSpec::rational(&["Y1", "Y2"]);
        let f2 = vec![parse_polynomial("x^2", &s2).unwrap(), parse_polynomial("y", &s2).unwrap()];
        let g2 = parse_polynomial("Y1*Y2", &t2).unwrap();
        assert_eq!(g2.compose_truncated(&f2, 4).unwrap(), parse_polynomial("x^2*y", &s2).unwrap());
        assert!(matches!(g2.compose_truncated(&f2[..1], 4), Err(PolyError::ArityMismatch { .. })));
    }

    #[test]
    fn ring_mismatch_reported() {
        let a = RingSpec::rational(&["x"]);
        let b = RingSpec::rational(&["y"]);
        let p = parse_polynomial("x", &a).unwrap();
        let q = parse_polynomial("y", &b).unwrap();
        assert_eq!(p.try_add(&q), Err(PolyError::RingMismatch));
    }
}
