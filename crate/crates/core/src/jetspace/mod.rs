//! Truncated modules of vector fields as finite-dimensional spaces.
//!
//! A [`JetBasis`] fixes the coordinates `x^α e_j` with
//! `min_degree <= |α| <= k`; a [`Subspace`] is an exact row space inside it.

mod echelon;
mod special;

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use thiserror::Error;

pub use echelon::{Domain, Echelon, Row};

use crate::poly::{count_up_to, Monomial, Polynomial, RingSpec, Scalar, ZPoly};

pub const DEFAULT_BASIS_CAP: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JetError {
    #[error("jet basis would have {size} elements, above the cap of {cap}")]
    BasisTooLarge { size: u128, cap: usize },
    #[error("invalid jet window: n={n}, p={p}, k={k}, min_degree={min_degree}")]
    InvalidWindow { n: usize, p: usize, k: u32, min_degree: u32 },
    #[error("vector does not belong to this ambient space")]
    AmbientMismatch,
}

/// Ordered basis `(x^α, e_j)` of a jet window.
#[derive(Debug)]
pub struct JetBasis {
    n: usize,
    p: usize,
    k: u32,
    min_degree: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, u32>,
}

impl JetBasis {
    pub fn enumerate(n: usize, p: usize, k: u32, min_degree: u32) -> Result<Arc<Self>, JetError> {
        Self::enumerate_with_cap(n, p, k, min_degree, DEFAULT_BASIS_CAP)
    }

    pub fn enumerate_with_cap(n: usize, p: usize, k: u32, min_degree: u32, cap: usize) -> Result<Arc<Self>, JetError> {
        if p == 0 || min_degree > 1 || k < min_degree {
            return Err(JetError::InvalidWindow { n, p, k, min_degree });
        }
        let nmon = count_up_to(n, k) - min_degree as u128;
        let size = nmon.saturating_mul(p as u128);
        if size > cap as u128 || size > u32::MAX as u128 {
            return Err(JetError::BasisTooLarge { size, cap });
        }
        let monomials = Monomial::up_to(n, min_degree, k);
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect();
        Ok(Arc::new(JetBasis { n, p, k, min_degree, monomials, index }))
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn p(&self) -> usize {
        self.p
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn min_degree(&self) -> u32 {
        self.min_degree
    }

    pub fn size(&self) -> usize {
        self.monomials.len() * self.p
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    /// Column of `x^α e_j`, if inside the window.
    pub fn column(&self, m: &Monomial, j: usize) -> Option<u32> {
        self.index.get(m).map(|&i| i * self.p as u32 + j as u32)
    }

    /// `(x^α, j)` for a column.
    pub fn entry(&self, col: u32) -> (&Monomial, usize) {
        let p = self.p as u32;
        (&self.monomials[(col / p) as usize], (col % p) as usize)
    }

    /// Iterate over all `(column, monomial, target)` in order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, &Monomial, usize)> + '_ {
        self.monomials
            .iter()
            .enumerate()
            .flat_map(move |(i, m)| (0..self.p).map(move |j| ((i * self.p + j) as u32, m, j)))
    }

    /// True if both describe the same window.
    pub fn same_window(&self, o: &JetBasis) -> bool {
        self.n == o.n && self.p == o.p && self.k == o.k && self.min_degree == o.min_degree
    }
}

/// A truncated element of `Θ_f`: `p` component polynomials.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VectorFieldJet {
    pub components: Vec<Polynomial>,
}

impl VectorFieldJet {
    pub fn new(components: Vec<Polynomial>) -> Self {
        VectorFieldJet { components }
    }

    pub fn zero(ring: &Arc<RingSpec>, p: usize) -> Self {
        VectorFieldJet { components: vec![Polynomial::zero(ring); p] }
    }

    /// `g e_j`.
    pub fn unit(g: Polynomial, j: usize, p: usize) -> Self {
        let mut components = vec![Polynomial::zero(g.ring()); p];
        components[j] = g;
        VectorFieldJet { components }
    }

    pub fn p(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    pub fn truncate(&self, k: u32) -> Self {
        VectorFieldJet { components: self.components.iter().map(|c| c.truncate(k)).collect() }
    }

    pub fn scalar_mul(&self, s: &Scalar) -> Self {
        VectorFieldJet { components: self.components.iter().map(|c| c.scalar_mul(s)).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        VectorFieldJet { components: self.components.iter().zip(&o.components).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        VectorFieldJet { components: self.components.iter().zip(&o.components).map(|(a, b)| a - b).collect() }
    }

    /// `g * self`, truncated at `k`.
    pub fn mul_poly_truncated(&self, g: &Polynomial, k: u32) -> Self {
        VectorFieldJet { components: self.components.iter().map(|c| c.mul_truncated(g, k)).collect() }
    }

    pub fn display(&self) -> String {
        let parts: Vec<String> = self.components.iter().map(|c| c.display()).collect();
        format!("({})", parts.join(", "))
    }

    /// Render as a combination of basis symbols, `y*z*e1 + x*z*e2`.
    pub fn display_basis(&self) -> String {
        let mut parts = Vec::new();
        for (j, c) in self.components.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = c.display();
            if c.nterms() == 1 {
                let (m, coef) = c.terms().iter().next().expect("one term");
                if m.is_one() {
                    parts.push(if coef.is_one() { format!("e{}", j + 1) } else { format!("{s}*e{}", j + 1) });
                } else {
                    parts.push(format!("{s}*e{}", j + 1));
                }
            } else {
                parts.push(format!("({s})*e{}", j + 1));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

#[derive(Clone, Debug)]
enum Engine {
    Int(Echelon<BigInt>),
    Poly(Echelon<ZPoly>),
}

/// Exact subspace of a jet window.
#[derive(Clone, Debug)]
pub struct Subspace {
    basis: Arc<JetBasis>,
    ring: Arc<RingSpec>,
    engine: Engine,
    denominators: Vec<ZPoly>,
}

/// Sparse entries `(column, scalar)` of a vector, terms above the window
/// dropped. Panics on terms below the window.
fn to_entries(basis: &JetBasis, v: &VectorFieldJet) -> Vec<(u32, Scalar)> {
    let mut out = Vec::new();
    for (j, c) in v.components.iter().enumerate() {
        for (m, s) in c.terms() {
            if m.degree() > basis.k {
                break;
            }
            assert!(
                m.degree() >= basis.min_degree,
                "vector has a term of degree {} below the window minimum {}",
                m.degree(),
                basis.min_degree
            );
            out.push((basis.column(m, j).expect("monomial in window"), s.clone()));
        }
    }
    out.sort_unstable_by_key(|e| e.0);
    out
}

fn int_row(entries: Vec<(u32, Scalar)>) -> Row<BigInt> {
    let l = entries.iter().fold(<BigInt as One>::one(), |acc, (_, s)| {
        acc.lcm(s.as_rational().expect("rational scalar in rational ring").denom())
    });
    entries
        .into_iter()
        .map(|(c, s)| {
            let r = s.as_rational().expect("rational").clone();
            (c, r.numer() * (&l / r.denom()))
        })
        .collect()
}

fn poly_row(entries: Vec<(u32, Scalar)>, dens: &mut Vec<ZPoly>) -> Row<ZPoly> {
    let fr: Vec<(u32, ZPoly, ZPoly)> = entries
        .into_iter()
        .map(|(c, s)| {
            let (n, d) = s.to_fraction();
            (c, n, d)
        })
        .collect();
    let mut l = ZPoly::one();
    for (_, _, d) in &fr {
        if !d.is_constant() {
            let z = d.primitive();
            if !dens.contains(&z) {
                dens.push(z);
            }
        }
        let g = l.gcd(d);
        l = l.mul(d).div_exact(&g).expect("gcd divides");
    }
    fr.into_iter()
        .map(|(c, n, d)| (c, n.mul(&l.div_exact(&d).expect("lcm multiple"))))
        .collect()
}

impl Subspace {
    /// The zero subspace.
    pub fn zero(basis: &Arc<JetBasis>, ring: &Arc<RingSpec>) -> Self {
        let engine = if ring.parameter().is_some() {
            Engine::Poly(Echelon::default())
        } else {
            Engine::Int(Echelon::default())
        };
        Subspace { basis: basis.clone(), ring: ring.clone(), engine, denominators: Vec::new() }
    }

    pub fn span<'a>(
        basis: &Arc<JetBasis>,
        ring: &Arc<RingSpec>,
        vectors: impl IntoIterator<Item = &'a VectorFieldJet>,
    ) -> Self {
        let mut s = Self::zero(basis, ring);
        for v in vectors {
            s.insert(v).expect("vector in ambient");
        }
        s
    }

    pub fn basis(&self) -> &Arc<JetBasis> {
        &self.basis
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    fn check(&self, v: &VectorFieldJet) -> Result<(), JetError> {
        if v.p() != self.basis.p || v.components.iter().any(|c| !Arc::ptr_eq(c.ring(), &self.ring) && **c.ring() != *self.ring) {
            return Err(JetError::AmbientMismatch);
        }
        Ok(())
    }

    /// Add a vector; returns whether the dimension grew.
    pub fn insert(&mut self, v: &VectorFieldJet) -> Result<bool, JetError> {
        self.check(v)?;
        let e = to_entries(&self.basis, v);
        Ok(self.insert_entries(e))
    }

    /// Add a vector given by sparse `(column, scalar)` entries sorted by column.
    pub fn insert_entries(&mut self, e: Vec<(u32, Scalar)>) -> bool {
        match &mut self.engine {
            Engine::Int(ech) => ech.insert(int_row(e)),
            Engine::Poly(ech) => ech.insert(poly_row(e, &mut self.denominators)),
        }
    }

    /// Add the basis vector of a column.
    pub fn insert_column(&mut self, col: u32) -> bool {
        self.insert_entries(vec![(col, Scalar::one())])
    }

    pub fn contains(&self, v: &VectorFieldJet) -> Result<bool, JetError> {
        self.check(v)?;
        Ok(self.contains_entries(to_entries(&self.basis, v)))
    }

    pub fn contains_entries(&self, e: Vec<(u32, Scalar)>) -> bool {
        match &self.engine {
            Engine::Int(ech) => ech.contains(int_row(e)),
            Engine::Poly(ech) => ech.contains(poly_row(e, &mut Vec::new())),
        }
    }

    pub fn contains_column(&self, col: u32) -> bool {
        match &self.engine {
            Engine::Int(ech) => ech.contains(vec![(col, <BigInt as One>::one())]),
            Engine::Poly(ech) => ech.contains(vec![(col, ZPoly::one())]),
        }
    }

    pub fn dim(&self) -> usize {
        match &self.engine {
            Engine::Int(e) => e.rank(),
            Engine::Poly(e) => e.rank(),
        }
    }

    /// Dimension of the ambient window minus the dimension of `self`.
    pub fn codim(&self) -> usize {
        self.basis.size() - self.dim()
    }

    pub fn is_pivot(&self, col: u32) -> bool {
        match &self.engine {
            Engine::Int(e) => e.is_pivot(col),
            Engine::Poly(e) => e.is_pivot(col),
        }
    }

    pub fn pivot_columns(&self) -> Vec<u32> {
        match &self.engine {
            Engine::Int(e) => e.pivot_columns(),
            Engine::Poly(e) => e.pivot_columns(),
        }
    }

    /// Parameter polynomials whose vanishing may lower the rank: pivot leads,
    /// divided-out contents and coefficient denominators.
    pub fn exceptional_polys(&self) -> Vec<ZPoly> {
        let mut out = self.denominators.clone();
        if let Engine::Poly(e) = &self.engine {
            for p in e.recorded() {
                if !out.contains(p) {
                    out.push(p.clone());
                }
            }
        }
        out
    }

    pub fn sum(&self, o: &Subspace) -> Result<Subspace, JetError> {
        if !self.basis.same_window(&o.basis) || *self.ring != *o.ring {
            return Err(JetError::AmbientMismatch);
        }
        let mut s = self.clone();
        for v in o.rows() {
            s.insert(&v)?;
        }
        Ok(s)
    }

    fn row_to_vector(&self, entries: impl Iterator<Item = (u32, Scalar)>) -> VectorFieldJet {
        let mut comps: Vec<Vec<(Monomial, Scalar)>> = vec![Vec::new(); self.basis.p];
        for (c, s) in entries {
            let (m, j) = self.basis.entry(c);
            comps[j].push((m.clone(), s));
        }
        VectorFieldJet { components: comps.into_iter().map(|t| Polynomial::from_terms(&self.ring, t)).collect() }
    }

    /// Reduced echelon rows, each scaled to leading coefficient one.
    pub fn rows(&self) -> Vec<VectorFieldJet> {
        match self.engine.clone() {
            Engine::Int(mut e) => e
                .reduced_rows()
                .into_iter()
                .map(|r| {
                    let lead = Scalar::from_bigint(r[0].1.clone());
                    self.row_to_vector(r.into_iter().map(|(c, x)| (c, &Scalar::from_bigint(x) / &lead)))
                })
                .collect(),
            Engine::Poly(mut e) => e
                .reduced_rows()
                .into_iter()
                .map(|r| {
                    let lead = Scalar::from_zpoly(r[0].1.clone());
                    self.row_to_vector(r.into_iter().map(|(c, x)| (c, &Scalar::from_zpoly(x) / &lead)))
                })
                .collect(),
        }
    }

    /// Normal form of `v`: the unique representative modulo `self`
    /// supported on non-pivot columns.
    pub fn normal_form(&self, v: &VectorFieldJet) -> Result<VectorFieldJet, JetError> {
        self.check(v)?;
        let e = to_entries(&self.basis, v);
        Ok(match &self.engine {
            Engine::Int(ech) => {
                let (w, s) = ech.normal_form(int_row(e.clone()));
                let l = int_row_scale(&e);
                let s = Scalar::from_bigint(s * l);
                self.row_to_vector(w.into_iter().map(|(c, x)| (c, &Scalar::from_bigint(x) / &s)))
            }
            Engine::Poly(ech) => {
                let row = poly_row(e.clone(), &mut Vec::new());
                let l = lcm_scale(&e);
                let (w, s) = ech.normal_form(row);
                let s = Scalar::from_zpoly(s.mul(&l));
                self.row_to_vector(w.into_iter().map(|(c, x)| (c, &Scalar::from_zpoly(x) / &s)))
            }
        })
    }
}

impl Subspace {
    /// Factors of the candidate polynomials on whose zeros the span of
    /// `gens` (which must span `self`) has smaller dimension, together with
    /// the coefficient denominators. Empty without a parameter.
    pub fn exceptional_factors(&self, gens: &[VectorFieldJet], candidates: &[ZPoly]) -> Result<Vec<ZPoly>, JetError> {
        if !matches!(self.engine, Engine::Poly(_)) {
            return Ok(Vec::new());
        }
        let mut rows = Vec::with_capacity(gens.len());
        let mut dens = Vec::new();
        for v in gens {
            self.check(v)?;
            let r = poly_row(to_entries(&self.basis, v), &mut dens);
            if !r.is_empty() {
                rows.push(r);
            }
        }
        let rank = self.dim();
        let mut out: Vec<ZPoly> = Vec::new();
        for d in self.denominators.iter().chain(&dens) {
            let z = d.primitive();
            if !out.contains(&z) {
                out.push(z);
            }
        }
        for c in candidates {
            if c.is_constant() {
                continue;
            }
            for (q, r) in special::ranks_on_factors(&rows, &c.squarefree_part()) {
                if r < rank && !out.contains(&q) {
                    out.push(q);
                }
            }
        }
        Ok(out)
    }
}

fn int_row_scale(entries: &[(u32, Scalar)]) -> BigInt {
    entries.iter().fold(<BigInt as One>::one(), |acc, (_, s)| acc.lcm(s.as_rational().expect("rational").denom()))
}

fn lcm_scale(entries: &[(u32, Scalar)]) -> ZPoly {
    let mut l = ZPoly::one();
    for (_, s) in entries {
        let (_, d) = s.to_fraction();
        let g = l.gcd(&d);
        l = l.mul(&d).div_exact(&g).expect("gcd divides");
    }
    l
}
