//! Coefficients: exact rationals, or rational functions in the modulus.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::upoly::ZPoly;

/// An exact coefficient.
///
/// `Func` is only used for genuinely non-constant rational functions;
/// constants always collapse to `Rat`, so derived equality is semantic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Func(RatFunc),
}

/// `num / den` with `gcd(num, den) = 1` in `Z[λ]` and `lc(den) > 0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: ZPoly,
    den: ZPoly,
}

impl RatFunc {
    pub fn num(&self) -> &ZPoly {
        &self.num
    }
    pub fn den(&self) -> &ZPoly {
        &self.den
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(BigRational::one())
    }

    pub fn from_int(v: i64) -> Self {
        Scalar::Rat(BigRational::from_integer(v.into()))
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Scalar::Rat(BigRational::from_integer(v))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::Rat(BigRational::new(n.into(), d.into()))
    }

    /// The formal parameter itself.
    pub fn param() -> Self {
        Self::from_fraction(ZPoly::var(), ZPoly::one())
    }

    pub fn from_zpoly(p: ZPoly) -> Self {
        Self::from_fraction(p, ZPoly::one())
    }

    /// Canonicalize `num / den`. Panics if `den` is zero.
    pub fn from_fraction(num: ZPoly, den: ZPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        if d.lc().is_negative() {
            n = n.neg();
            d = d.neg();
        }
        if n.is_constant() && d.is_constant() {
            return Scalar::Rat(BigRational::new(n.constant_term(), d.constant_term()));
        }
        Scalar::Func(RatFunc { num: n, den: d })
    }

    /// Numerator and denominator as integer polynomials (denominator
    /// positive-leading, coprime to the numerator).
    pub fn to_fraction(&self) -> (ZPoly, ZPoly) {
        match self {
            Scalar::Rat(r) => (ZPoly::constant(r.numer().clone()), ZPoly::constant(r.denom().clone())),
            Scalar::Func(f) => (f.num.clone(), f.den.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_one())
    }

    /// True when the value does not depend on the parameter.
    pub fn is_constant(&self) -> bool {
        matches!(self, Scalar::Rat(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Func(_) => None,
        }
    }

    /// Value at `param = v`; `None` if the denominator vanishes there.
    pub fn eval(&self, v: &BigRational) -> Option<BigRational> {
        match self {
            Scalar::Rat(r) => Some(r.clone()),
            Scalar::Func(f) => {
                let d = f.den.eval(v);
                if d.is_zero() {
                    None
                } else {
                    Some(f.num.eval(v) / d)
                }
            }
        }
    }

    /// Derivative with respect to the parameter.
    pub fn param_derivative(&self) -> Self {
        match self {
            Scalar::Rat(_) => Self::zero(),
            Scalar::Func(f) => Self::from_fraction(
                f.num.derivative().mul(&f.den).sub(&f.num.mul(&f.den.derivative())),
                f.den.mul(&f.den),
            ),
        }
    }

    pub fn inv(&self) -> Self {
        match self {
            Scalar::Rat(r) => {
                assert!(!r.is_zero(), "inverse of zero");
                Scalar::Rat(r.recip())
            }
            Scalar::Func(f) => Self::from_fraction(f.den.clone(), f.num.clone()),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Sign of a rational scalar; `None` for parameter-dependent values.
    pub fn sign(&self) -> Option<Ordering> {
        self.as_rational().map(|r| r.cmp(&BigRational::zero()))
    }

    /// Render using `param` as the parameter name. Compound values are
    /// parenthesized so the result can be embedded in a product.
    pub fn display_with(&self, param: &str) -> String {
        match self {
            Scalar::Rat(r) => {
                if r.is_integer() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Func(f) => {
                let n = f.num.display_with(param);
                let n = if f.num.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                    format!("({n})")
                } else {
                    n
                };
                if f.den.is_one() {
                    n
                } else if f.den.is_constant() {
                    format!("{n}/{}", f.den.constant_term())
                } else {
                    format!("{n}/({})", f.den.display_with(param))
                }
            }
        }
    }
}

fn combine(a: &Scalar, b: &Scalar, op: impl Fn(&ZPoly, &ZPoly, &ZPoly, &ZPoly) -> (ZPoly, ZPoly)) -> Scalar {
    let (an, ad) = a.to_fraction();
    let (bn, bd) = b.to_fraction();
    let (n, d) = op(&an, &ad, &bn, &bd);
    Scalar::from_fraction(n, d)
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            _ if self.is_zero() => o.clone(),
            _ if o.is_zero() => self.clone(),
            _ => combine(self, o, |an, ad, bn, bd| {
                if ad == bd {
                    (an.add(bn), ad.clone())
                } else {
                    (an.mul(bd).add(&bn.mul(ad)), ad.mul(bd))
                }
            }),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            _ if self.is_zero() || o.is_zero() => Scalar::zero(),
            _ => combine(self, o, |an, ad, bn, bd| (an.mul(bn), ad.mul(bd))),
        }
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        self * &o.inv()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Func(f) => Scalar::Func(RatFunc { num: f.num.neg(), den: f.den.clone() }),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -(&self)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

impl From<BigRational> for Scalar {
    fn from(v: BigRational) -> Self {
        Scalar::Rat(v)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("t"))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.display_with("t"))
    }
}

/// Least common multiple of the denominators of a rational slice.
pub fn lcm_denominators<'a>(it: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms_collapse() {
        let l = Scalar::param();
        let a = &(&l * &l) - &Scalar::one(); // l^2 - 1
        let b = &l + &Scalar::one();
        let q = &a / &b;
        assert_eq!(q, &l - &Scalar::one());
        assert_eq!(&q / &q, Scalar::one());
        assert!((&l - &l).is_zero());
    }

    #[test]
    fn eval_and_derivative() {
        let l = Scalar::param();
        let f = &Scalar::one() / &(&l + &Scalar::from_int(2));
        assert_eq!(f.eval(&BigRational::from_integer(0.into())), Some(BigRational::new(1.into(), 2.into())));
        assert_eq!(f.eval(&BigRational::from_integer((-2).into())), None);
        let d = f.param_derivative();
        assert_eq!(d.eval(&BigRational::from_integer(0.into())), Some(BigRational::new((-1).into(), 4.into())));
    }

    #[test]
    fn display() {
        let l = Scalar::param();
        assert_eq!((&l * &Scalar::from_int(3)).display_with("l"), "3*l");
        assert_eq!((&(&l + &Scalar::one()) / &Scalar::from_int(2)).display_with("l"), "(l + 1)/2");
        assert_eq!(Scalar::ratio(-3, 6).display_with("l"), "-1/2");
    }
}
