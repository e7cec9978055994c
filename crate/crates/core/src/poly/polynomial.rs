use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;

use super::monomial::Monomial;
use super::ring::{same_ring, RingSpec};
use super::scalar::Scalar;
use super::PolyError;

/// Polynomial with exact coefficients in a fixed ring.
#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<RingSpec>,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for Polynomial {
    fn eq(&self, o: &Self) -> bool {
        same_ring(&self.ring, &o.ring) && self.terms == o.terms
    }
}
impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ring: &Arc<RingSpec>) -> Self {
        Polynomial { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Arc<RingSpec>, c: Scalar) -> Self {
        Self::term(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn one(ring: &Arc<RingSpec>) -> Self {
        Self::constant(ring, Scalar::one())
    }

    pub fn var(ring: &Arc<RingSpec>, i: usize) -> Self {
        Self::term(ring, Monomial::var(ring.nvars(), i), Scalar::one())
    }

    pub fn monomial(ring: &Arc<RingSpec>, m: Monomial) -> Self {
        Self::term(ring, m, Scalar::one())
    }

    pub fn term(ring: &Arc<RingSpec>, m: Monomial, c: Scalar) -> Self {
        assert_eq!(m.nvars(), ring.nvars(), "monomial arity");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { ring: ring.clone(), terms }
    }

    /// Build from terms; repeated monomials are summed, zeros dropped.
    pub fn from_terms(ring: &Arc<RingSpec>, it: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for (m, c) in it {
            assert_eq!(m.nvars(), ring.nvars(), "monomial arity");
            if c.is_zero() {
                continue;
            }
            match acc.get_mut(&m) {
                Some(v) => *v = &*v + &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Polynomial { ring: ring.clone(), terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Scalar> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one(self.ring.nvars()))
    }

    /// Total degree; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Lowest degree of a nonzero term; `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.order() == self.degree()
    }

    /// True when every coefficient is free of the parameter.
    pub fn is_rational(&self) -> bool {
        self.terms.values().all(Scalar::is_constant)
    }

    fn check(&self, o: &Self) -> Result<(), PolyError> {
        if same_ring(&self.ring, &o.ring) {
            Ok(())
        } else {
            Err(PolyError::RingMismatch)
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self, PolyError> {
        self.check(o)?;
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            add_into(&mut terms, m, c);
        }
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self, PolyError> {
        self.try_add(&-o)
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, PolyError> {
        self.check(o)?;
        Ok(self.mul_impl(o, None))
    }

    /// Product with all terms of degree `> k` dropped, without forming them.
    pub fn mul_truncated(&self, o: &Self, k: u32) -> Self {
        assert!(same_ring(&self.ring, &o.ring), "ring mismatch");
        self.mul_impl(o, Some(k))
    }

    fn mul_impl(&self, o: &Self, k: Option<u32>) -> Self {
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for (ma, ca) in &self.terms {
            if k.is_some_and(|k| ma.degree() > k) {
                break;
            }
            for (mb, cb) in &o.terms {
                if k.is_some_and(|k| ma.degree() + mb.degree() > k) {
                    break;
                }
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(v) => *v = &*v + &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Polynomial { ring: self.ring.clone(), terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn scalar_mul(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zero(&self.ring);
        }
        Polynomial { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    pub fn monomial_mul(&self, m: &Monomial) -> Self {
        Polynomial { ring: self.ring.clone(), terms: self.terms.iter().map(|(a, c)| (a.mul(m), c.clone())).collect() }
    }

    /// `self * m`, dropping terms of degree `> k`.
    pub fn monomial_mul_truncated(&self, m: &Monomial, k: u32) -> Self {
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .take_while(|(a, _)| a.degree() + m.degree() <= k)
                .map(|(a, c)| (a.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn pow_truncated(&self, e: u32, k: u32) -> Self {
        let mut acc = Self::one(&self.ring).truncate(k);
        for _ in 0..e {
            acc = acc.mul_truncated(self, k);
        }
        acc
    }

    pub fn partial_derivative(&self, var: usize) -> Self {
        assert!(var < self.ring.nvars(), "variable index out of range");
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponents()[var];
            if e == 0 {
                continue;
            }
            let dm = m.div_var(var).expect("exponent positive");
            terms.insert(dm, c * &Scalar::from_int(e as i64));
        }
        Polynomial { ring: self.ring.clone(), terms }
    }

    /// Derivative of the coefficients with respect to the parameter.
    pub fn param_derivative(&self) -> Self {
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.param_derivative()))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// Drop all terms of degree `> k`.
    pub fn truncate(&self, k: u32) -> Self {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().take_while(|(m, _)| m.degree() <= k).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Terms of degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Specialize the parameter to `v`, landing in `target` (which must have
    /// the same variables).
    pub fn specialize(&self, v: &BigRational, target: &Arc<RingSpec>) -> Result<Self, PolyError> {
        assert_eq!(target.nvars(), self.ring.nvars());
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let val = c.eval(v).ok_or(PolyError::DenominatorVanishes)?;
            if !num_traits::Zero::is_zero(&val) {
                terms.insert(m.clone(), Scalar::Rat(val));
            }
        }
        Ok(Polynomial { ring: target.clone(), terms })
    }

    /// Rename into another ring: variable `i` of `self` becomes variable
    /// `map[i]` of `target`.
    pub fn embed(&self, target: &Arc<RingSpec>, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.ring.nvars());
        let n = target.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0u16; n];
                for (i, &x) in m.exponents().iter().enumerate() {
                    e[map[i]] += x;
                }
                (Monomial::new(e), c.clone())
            })
            .collect();
        Polynomial { ring: target.clone(), terms }
    }

    /// Same terms, a ring with identical variables (for ring identity after
    /// re-parsing or relabelling the locus).
    pub fn with_ring(&self, target: &Arc<RingSpec>) -> Self {
        assert_eq!(target.variables(), self.ring.variables());
        Polynomial { ring: target.clone(), terms: self.terms.clone() }
    }

    /// `self(subs_1, ..., subs_n)` truncated at degree `k`. The substituted
    /// polynomials must have zero constant term so that degrees only grow.
    pub fn compose_truncated(&self, subs: &[Polynomial], k: u32) -> Result<Polynomial, PolyError> {
        if subs.len() != self.ring.nvars() {
            return Err(PolyError::ArityMismatch { expected: self.ring.nvars(), found: subs.len() });
        }
        let target = match subs.first() {
            Some(s) => s.ring.clone(),
            None => {
                return Ok(Polynomial::constant(&self.ring, self.constant_term()));
            }
        };
        for s in subs {
            if !same_ring(&s.ring, &target) {
                return Err(PolyError::RingMismatch);
            }
            if !s.constant_term().is_zero() {
                return Err(PolyError::ConstantTerm);
            }
        }
        let mut powers = PowerCache::new(subs, k);
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for (m, c) in &self.terms {
            if m.degree() > k {
                break;
            }
            let p = powers.monomial(m);
            for (pm, pc) in p.terms.iter() {
                let v = pc * c;
                match acc.get_mut(pm) {
                    Some(x) => *x = &*x + &v,
                    None => {
                        acc.insert(pm.clone(), v);
                    }
                }
            }
        }
        Ok(Polynomial { ring: target, terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() })
    }

    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let names = self.ring.variables();
        let pname = self.ring.param_name();
        let mut out = String::new();
        for (m, c) in self.terms.iter() {
            let neg = c.sign() == Some(std::cmp::Ordering::Less);
            let a = if neg { -c } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let cs = a.display_with(pname);
            if m.is_one() {
                out.push_str(&cs);
            } else if a.is_one() {
                out.push_str(&m.display_with(names));
            } else {
                out.push_str(&format!("{}*{}", cs, m.display_with(names)));
            }
        }
        out
    }
}

fn add_into(terms: &mut BTreeMap<Monomial, Scalar>, m: &Monomial, c: &Scalar) {
    match terms.get_mut(m) {
        Some(v) => {
            let s = &*v + c;
            if s.is_zero() {
                terms.remove(m);
            } else {
                *v = s;
            }
        }
        None => {
            if !c.is_zero() {
                terms.insert(m.clone(), c.clone());
            }
        }
    }
}

/// Memoized truncated products of the substituted polynomials.
pub(crate) struct PowerCache<'a> {
    subs: &'a [Polynomial],
    k: u32,
    cache: HashMap<Vec<u16>, Polynomial>,
}

impl<'a> PowerCache<'a> {
    pub(crate) fn new(subs: &'a [Polynomial], k: u32) -> Self {
        PowerCache { subs, k, cache: HashMap::new() }
    }

    /// Truncation of `prod subs_i^{e_i}`.
    pub(crate) fn monomial(&mut self, m: &Monomial) -> Polynomial {
        self.get(m.exponents())
    }

    fn get(&mut self, e: &[u16]) -> Polynomial {
        if let Some(p) = self.cache.get(e) {
            return p.clone();
        }
        let p = match e.iter().position(|&x| x > 0) {
            None => Polynomial::one(&self.subs[0].ring).truncate(self.k),
            Some(i) => {
                let mut smaller = e.to_vec();
                smaller[i] -= 1;
                let base = self.get(&smaller);
                base.mul_truncated(&self.subs[i], self.k)
            }
        };
        self.cache.insert(e.to_vec(), p.clone());
        p
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

// Operators panic on ring mismatch; the `try_*` methods report it instead.
impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        self.try_add(o).expect("ring mismatch in polynomial addition")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        self.try_sub(o).expect("ring mismatch in polynomial subtraction")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        self.try_mul(o).expect("ring mismatch in polynomial multiplication")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, o: Polynomial) -> Polynomial {
        &self + &o
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, o: Polynomial) -> Polynomial {
        &self - &o
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, o: Polynomial) -> Polynomial {
        &self * &o
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
