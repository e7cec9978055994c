//! Dense univariate polynomials with integer coefficients.
//!
//! These carry the formal modulus: numerators and denominators of parameter
//! scalars, pivot leads in parametric elimination, and excluded loci.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Polynomial in one variable over `Z`, coefficients stored low degree first
/// with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ZPoly {
    coeffs: Vec<BigInt>,
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The variable itself.
    pub fn var() -> Self {
        Self::from_coeffs(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Self::from_coeffs(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// True for the zero polynomial and for nonzero constants.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeffs.first().cloned().unwrap_or_default()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i);
            let b = o.coeffs.get(i);
            c.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Self::from_coeffs(c)
    }

    pub fn neg(&self) -> Self {
        ZPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.coeffs.len() == 1 {
            return o.scale(&self.coeffs[0]);
        }
        if o.coeffs.len() == 1 {
            return self.scale(&o.coeffs[0]);
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::from_coeffs(c)
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        ZPoly { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Nonnegative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divide out the content and make the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        self.div_scalar_exact(&g)
    }

    pub fn div_scalar_exact(&self, s: &BigInt) -> Self {
        if s.is_one() {
            return self.clone();
        }
        ZPoly { coeffs: self.coeffs.iter().map(|c| c / s).collect() }
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect(),
        )
    }

    /// Exact quotient over `Z`, or `None` when `d` does not divide `self`
    /// in `Z[λ]`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() - 1 < dd {
            return None;
        }
        let lcd = d.lc();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let top = &r[i + dd];
            if top.is_zero() {
                continue;
            }
            let (qi, rem) = top.div_rem(&lcd);
            if !rem.is_zero() {
                return None;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i + j] -= &qi * dc;
            }
            q[i] = qi;
        }
        if r.iter().all(Zero::is_zero) {
            Some(Self::from_coeffs(q))
        } else {
            None
        }
    }

    /// Pseudo-remainder: `lc(d)^(deg self - deg d + 1) * self mod d`.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        assert!(!d.is_zero());
        let dd = d.coeffs.len() - 1;
        let mut r = self.clone();
        let lcd = d.lc();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let lcr = r.lc();
            let shift = dr - dd;
            let mut c = r.scale(&lcd).coeffs;
            for (j, dc) in d.coeffs.iter().enumerate() {
                c[shift + j] -= &lcr * dc;
            }
            r = Self::from_coeffs(c);
        }
        r
    }

    /// Greatest common divisor in `Z[λ]`, normalized to positive leading
    /// coefficient.
    pub fn gcd(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.primitive_with_content_sign();
        }
        if o.is_zero() {
            return self.primitive_with_content_sign();
        }
        let cg = self.content().gcd(&o.content());
        let (mut a, mut b) = (self.primitive(), o.primitive());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive();
        }
        a.scale(&cg)
    }

    fn primitive_with_content_sign(&self) -> Self {
        if self.lc().is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn eval(&self, v: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * v + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// True when every irreducible factor of `self` divides `target`.
    pub fn factors_divide(&self, target: &Self) -> bool {
        if self.is_constant() {
            return true;
        }
        let sf = self.squarefree_part();
        let mut t = target.clone();
        let deg = sf.degree().unwrap_or(0);
        for _ in 1..deg.max(1) {
            t = t.mul(target);
        }
        // sf is squarefree of degree `deg`, so it divides target^deg exactly
        // when each of its irreducible factors divides target.
        t.scale(&sf.lc().pow(deg as u32 + 1)).pseudo_rem(&sf).is_zero()
    }

    /// The product of the distinct irreducible factors (up to content).
    pub fn squarefree_part(&self) -> Self {
        if self.is_constant() {
            return Self::one();
        }
        let p = self.primitive();
        let g = p.gcd(&p.derivative());
        if g.is_constant() {
            p
        } else {
            p.div_exact(&g.primitive())
                .map(|q| q.primitive())
                .unwrap_or_else(|| unreachable!("gcd divides its argument"))
        }
    }

    /// Rational roots, each listed once.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        let mut roots = Vec::new();
        if self.is_constant() {
            return roots;
        }
        let mut p = self.primitive();
        // strip factors of the variable
        let mut zero_root = false;
        while p.constant_term().is_zero() {
            zero_root = true;
            p = Self::from_coeffs(p.coeffs[1..].to_vec());
        }
        if zero_root {
            roots.push(BigRational::zero());
        }
        if p.is_constant() {
            return roots;
        }
        let a0 = p.constant_term().abs();
        let an = p.lc().abs();
        let num_divs = divisors(&a0);
        let den_divs = divisors(&an);
        let mut seen = std::collections::BTreeSet::new();
        for q in &den_divs {
            for n in &num_divs {
                for s in [1i32, -1] {
                    let r = BigRational::new(BigInt::from(s) * n, q.clone());
                    if seen.insert(r.clone()) && p.eval(&r).is_zero() {
                        roots.push(r);
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    /// Split into distinct factors: linear factors for rational roots and a
    /// remaining squarefree cofactor with no rational roots.
    pub fn factor_candidates(&self) -> Vec<ZPoly> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let mut rest = self.squarefree_part();
        for r in self.rational_roots() {
            let lin = ZPoly::from_coeffs(vec![-r.numer().clone(), r.denom().clone()]).primitive();
            if let Some(q) = rest.div_exact(&lin) {
                rest = q.primitive();
            }
            out.push(lin);
        }
        if !rest.is_constant() {
            out.push(rest.primitive());
        }
        out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.coeffs.cmp(&b.coeffs)));
        out.dedup();
        out
    }

    /// Render with the given variable name, highest degree first.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() {
                s.push_str(&a.to_string());
            } else if a.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{a}*{mono}"));
            }
        }
        s
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    // small coefficients only arise in practice; trial division is enough
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let q = n / &d;
            if q != d {
                out.push(q);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

impl fmt::Debug for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZPoly({})", self.display_with("t"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> ZPoly {
        ZPoly::from_i64s(c)
    }

    #[test]
    fn gcd_of_products() {
        let a = p(&[-1, 1]).mul(&p(&[2, 1])); // (t-1)(t+2)
        let b = p(&[-1, 1]).mul(&p(&[3, 0, 1])); // (t-1)(t^2+3)
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        assert_eq!(p(&[4, 6]).gcd(&p(&[6, 9])), p(&[2, 3]));
    }

    #[test]
    fn exact_division() {
        let a = p(&[-1, 0, 0, 1]);
        assert_eq!(a.div_exact(&p(&[-1, 1])), Some(p(&[1, 1, 1])));
        assert_eq!(a.div_exact(&p(&[1, 2])), None);
    }

    #[test]
    fn thom_locus_factors() {
        // t (t^3 + 8) (t^3 - 1)
        let t = p(&[0, 1]).mul(&p(&[8, 0, 0, 1])).mul(&p(&[-1, 0, 0, 1]));
        let f = t.factor_candidates();
        let degs: Vec<_> = f.iter().map(|x| x.degree().unwrap()).collect();
        assert_eq!(degs, vec![1, 1, 1, 4]);
        assert!(f.contains(&p(&[2, 1])) && f.contains(&p(&[-1, 1])) && f.contains(&p(&[0, 1])));
        assert!(p(&[2, 1]).factors_divide(&t));
        assert!(p(&[-1, 1]).pow(3).factors_divide(&t));
        assert!(!p(&[1, 1]).factors_divide(&t));
    }

    #[test]
    fn rational_roots_found() {
        let a = p(&[-1, 2]).mul(&p(&[3, 1]));
        let r = a.rational_roots();
        assert_eq!(r.len(), 2);
        assert!(r.contains(&BigRational::new(1.into(), 2.into())));
    }
}
