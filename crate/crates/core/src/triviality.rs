//! Ideal-power containments, infinitesimal triviality of one-parameter
//! families and control-function systems.
//!
//! All certificates are finite-order algebraic identities. Each one is
//! re-checked by expansion before it is returned.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{is_positive_definite, solve_many};
use crate::poly::{Monomial, Polynomial, RingSpec, Scalar, ZPoly};
use crate::tangent::{GroupKind, MapGerm};

fn index_of(monos: &[Monomial]) -> BTreeMap<&Monomial, usize> {
    monos.iter().enumerate().map(|(i, m)| (m, i)).collect()
}

fn scatter(p: &Polynomial, index: &BTreeMap<&Monomial, usize>, offset: usize, out: &mut [Scalar]) {
    for (m, c) in p.terms() {
        if let Some(&i) = index.get(m) {
            out[offset + i] = c.clone();
        }
    }
}

fn display_polys(ps: &[Polynomial]) -> Vec<String> {
    ps.iter().map(Polynomial::display).collect()
}

/// Expressions `m = Σ h_j g_j + O(d + 1)` for every degree-`d` monomial `m`.
#[derive(Clone, Debug)]
pub struct IdealCertificate {
    pub degree: u32,
    pub generators: Vec<Polynomial>,
    pub expressions: Vec<(Monomial, Vec<Polynomial>)>,
}

impl IdealCertificate {
    pub fn verify(&self) -> bool {
        let Some(ring) = self.generators.first().map(|g| g.ring().clone()) else {
            return false;
        };
        self.expressions.iter().all(|(m, hs)| {
            hs.len() == self.generators.len() && {
                let s = hs.iter().zip(&self.generators).fold(Polynomial::zero(&ring), |acc, (h, g)| &acc + &h.mul_truncated(g, self.degree));
                s.truncate(self.degree) == Polynomial::monomial(&ring, m.clone())
            }
        })
    }

    /// Denominators of certificate coefficients, as factors in the modulus.
    pub fn denominators(&self) -> Vec<ZPoly> {
        let mut out: Vec<ZPoly> = Vec::new();
        for (_, hs) in &self.expressions {
            for h in hs {
                for c in h.terms().values() {
                    let (_, d) = c.to_fraction();
                    for f in d.factor_candidates() {
                        if !f.is_constant() && !out.contains(&f) {
                            out.push(f);
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct PowerContainment {
    pub holds: bool,
    pub degree: u32,
    pub certificate: Option<IdealCertificate>,
    /// Degree-`d` monomials outside the graded piece of the ideal.
    pub missing: Vec<Monomial>,
}

/// Whether `M^d` is contained in the ideal generated by `gens`.
///
/// Checked in the degree-`d` piece: every degree-`d` monomial must be a
/// combination of products `x^α g_j` modulo `M^{d+1}`, which by Nakayama gives
/// the full containment. Over a formal modulus the answer is the generic one.
pub fn power_subset_ideal(gens: &[Polynomial], d: u32) -> Result<PowerContainment> {
    let ring = gens.first().ok_or(Error::EmptyMap)?.ring().clone();
    for (j, g) in gens.iter().enumerate() {
        if !g.constant_term().is_zero() {
            return Err(Error::ConstantTerm { component: j });
        }
    }
    let n = ring.nvars();
    let rows = Monomial::up_to(n, 1, d);
    let index = index_of(&rows);
    let mut cols = Vec::new();
    let mut labels = Vec::new();
    for (j, g) in gens.iter().enumerate() {
        let Some(o) = g.order() else { continue };
        if o > d {
            continue;
        }
        for a in Monomial::up_to(n, 0, d - o) {
            let mut v = vec![Scalar::zero(); rows.len()];
            scatter(&g.monomial_mul_truncated(&a, d), &index, 0, &mut v);
            cols.push(v);
            labels.push((j, a));
        }
    }
    let targets = Monomial::of_degree(n, d);
    let rhs: Vec<Vec<Scalar>> = targets
        .iter()
        .map(|m| {
            let mut v = vec![Scalar::zero(); rows.len()];
            v[index[m]] = Scalar::one();
            v
        })
        .collect();
    let sols = solve_many(&cols, &rhs, rows.len());
    let mut missing = Vec::new();
    let mut expressions = Vec::new();
    for (m, s) in targets.iter().zip(sols) {
        match s {
            None => missing.push(m.clone()),
            Some(x) => {
                let mut hs = vec![Polynomial::zero(&ring); gens.len()];
                for ((j, a), c) in labels.iter().zip(x) {
                    if !c.is_zero() {
                        hs[*j] = &hs[*j] + &Polynomial::term(&ring, a.clone(), c);
                    }
                }
                expressions.push((m.clone(), hs));
            }
        }
    }
    let holds = missing.is_empty();
    let certificate = holds.then(|| IdealCertificate { degree: d, generators: gens.to_vec(), expressions });
    if let Some(c) = &certificate {
        if !c.verify() {
            return Err(Error::Invariant("ideal certificate does not verify".into()));
        }
    }
    Ok(PowerContainment { holds, degree: d, certificate, missing })
}

/// Generators `x^α g_j`, `|α| = e`, of `I·M^e`.
pub fn ideal_times_power(gens: &[Polynomial], e: u32) -> Vec<Polynomial> {
    let mut out = Vec::new();
    for g in gens {
        for a in Monomial::of_degree(g.ring().nvars(), e) {
            out.push(g.monomial_mul(&a));
        }
    }
    out
}

/// Whether `I·M^e = M^{d+e}` for homogeneous generators of degree `d`.
pub fn ideal_power_product_equals(gens: &[Polynomial], e: u32) -> Result<bool> {
    let d = gens.first().and_then(Polynomial::order).ok_or(Error::EmptyMap)?;
    if gens.iter().any(|g| !g.is_homogeneous() || g.order().is_some_and(|o| o != d)) {
        return Err(Error::GradingMismatch("generators must be homogeneous of one degree".into()));
    }
    let prods = ideal_times_power(gens, e);
    let ring = gens[0].ring().clone();
    let n = ring.nvars();
    let rows = Monomial::of_degree(n, d + e);
    let index = index_of(&rows);
    let cols: Vec<Vec<Scalar>> = prods
        .iter()
        .map(|p| {
            let mut v = vec![Scalar::zero(); rows.len()];
            scatter(p, &index, 0, &mut v);
            v
        })
        .collect();
    Ok(crate::linalg::rank(&cols) == rows.len())
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Deformation {
    /// The formal modulus of the ring.
    Modulus,
    /// A source variable playing the role of time.
    Variable(usize),
}

/// A one-parameter family `F(x, t)`.
#[derive(Clone, Debug)]
pub struct Family {
    germ: MapGerm,
    t: Deformation,
}

impl Family {
    pub fn modulus(germ: MapGerm) -> Result<Family> {
        if !germ.has_parameter() {
            return Err(Error::InvalidInput("the family has no modulus".into()));
        }
        Ok(Family { germ, t: Deformation::Modulus })
    }

    pub fn variable(germ: MapGerm, t: usize) -> Result<Family> {
        if t >= germ.n() {
            return Err(Error::InvalidInput(format!("no source variable with index {t}")));
        }
        Ok(Family { germ, t: Deformation::Variable(t) })
    }

    /// The family in a new time variable `t` with `λ = at + t`; the
    /// coefficients must be polynomial in the modulus.
    pub fn around(f: &MapGerm, at: &BigRational) -> Result<Family> {
        let ring = f.ring();
        let mut names = ring.variables().to_vec();
        let mut t = String::from("t");
        while names.contains(&t) {
            t.push('_');
        }
        names.push(t);
        let n = names.len();
        let target = RingSpec::new(names, None, None)?;
        let shift = &Polynomial::constant(&target, Scalar::from(at.clone())) + &Polynomial::var(&target, n - 1);
        let map: Vec<usize> = (0..n - 1).collect();
        let mut comps = Vec::new();
        for c in f.components() {
            let mut out = Polynomial::zero(&target);
            for (m, s) in c.terms() {
                let (num, den) = s.to_fraction();
                if !den.is_constant() {
                    return Err(Error::InvalidInput("coefficients must be polynomial in the modulus".into()));
                }
                let inv = BigRational::new(BigInt::one(), den.lc());
                let mut value = Polynomial::zero(&target);
                for a in num.coeffs().iter().rev() {
                    value = &(&value * &shift) + &Polynomial::constant(&target, Scalar::from(BigRational::from_integer(a.clone()) * &inv));
                }
                let mono = Polynomial::monomial(ring, m.clone()).embed(&target, &map);
                out = &out + &(&value * &mono);
            }
            comps.push(out);
        }
        Family::variable(MapGerm::new(&target, comps)?, n - 1)
    }

    pub fn germ(&self) -> &MapGerm {
        &self.germ
    }

    pub fn deformation(&self) -> Deformation {
        self.t
    }

    /// `∂F/∂t`.
    pub fn derivative(&self) -> Vec<Polynomial> {
        self.germ
            .components()
            .iter()
            .map(|c| match self.t {
                Deformation::Modulus => c.param_derivative(),
                Deformation::Variable(i) => c.partial_derivative(i),
            })
            .collect()
    }
}

/// A solution of `∂F/∂t = Σ ∂F/∂x_i v_i + A·F + w(F, t)` modulo degree
/// `jet_order + 1` in all variables. Unused parts are zero.
#[derive(Clone, Debug)]
pub struct TrivialityCertificate {
    pub group: GroupKind,
    pub jet_order: u32,
    /// One entry per source variable; the entry of `t` is zero.
    pub v: Vec<Polynomial>,
    pub a: Vec<Vec<Polynomial>>,
    /// Polynomials in `Y_1, ..., Y_p, t`.
    pub w: Vec<Polynomial>,
}

#[derive(Serialize)]
struct TrivialityJson {
    group: GroupKind,
    jet_order: u32,
    v: Vec<String>,
    a: Vec<Vec<String>>,
    w: Vec<String>,
}

impl Serialize for TrivialityCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TrivialityJson {
            group: self.group,
            jet_order: self.jet_order,
            v: display_polys(&self.v),
            a: self.a.iter().map(|r| display_polys(r)).collect(),
            w: display_polys(&self.w),
        }
        .serialize(s)
    }
}

fn w_ring(fam: &Family, t: usize) -> Result<Arc<RingSpec>> {
    let src = fam.germ.ring();
    let mut names: Vec<String> = (1..=fam.germ.p()).map(|j| format!("Y{j}")).collect();
    names.push(src.variables()[t].clone());
    Ok(RingSpec::new(names, src.parameter().map(str::to_string), None)?)
}

fn time_index(fam: &Family) -> Result<usize> {
    match fam.t {
        Deformation::Variable(t) => Ok(t),
        Deformation::Modulus => Err(Error::InvalidInput("expected a family in a time variable".into())),
    }
}

impl TrivialityCertificate {
    /// Substitutes the solution and compares with `∂F/∂t` to order `jet_order`.
    pub fn verify(&self, fam: &Family) -> Result<bool> {
        let t = time_index(fam)?;
        let f = &fam.germ;
        let (n, p, k) = (f.n(), f.p(), self.jet_order);
        let ring = f.ring();
        if self.v.len() != n || self.a.len() != p || self.w.len() != p {
            return Ok(false);
        }
        if !self.v[t].is_zero() || self.v.iter().any(|v| v.terms().keys().any(|m| m.exponents().iter().enumerate().all(|(i, &e)| i == t || e == 0))) {
            return Ok(false);
        }
        if self.w.iter().any(|w| w.terms().keys().any(|m| m.exponents()[..p].iter().all(|&e| e == 0))) {
            return Ok(false);
        }
        let mut subs: Vec<Polynomial> = f.components().to_vec();
        subs.push(Polynomial::var(ring, t));
        let jac = f.jacobian();
        let d = fam.derivative();
        for j in 0..p {
            let mut lhs = Polynomial::zero(ring);
            for i in 0..n {
                lhs = &lhs + &jac[j][i].mul_truncated(&self.v[i], k);
            }
            for (a, fj) in self.a[j].iter().zip(f.components()) {
                lhs = &lhs + &a.mul_truncated(fj, k);
            }
            lhs = &lhs + &self.w[j].compose_truncated(&subs, k)?;
            if lhs.truncate(k) != d[j].truncate(k) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Solves the infinitesimal triviality equation of `group` at order `k`.
///
/// Unknowns are polynomials of total degree at most `k` in `(x, t)` with
/// `v_i(0, t) = 0` and `w(0, t) = 0`. `None` means no solution of this shape
/// at this order. `R` uses `v`, `C` uses `A`, `K` uses `v` and `A`, `L` uses
/// `w` and `A` uses `v` and `w`.
pub fn thom_levine_certificate(fam: &Family, group: GroupKind, k: u32) -> Result<Option<TrivialityCertificate>> {
    if k == 0 {
        return Err(Error::InvalidInput("the jet order must be positive".into()));
    }
    let t = time_index(fam)?;
    let f = &fam.germ;
    let (n, p) = (f.n(), f.p());
    let ring = f.ring().clone();
    let wr = w_ring(fam, t)?;
    let rows = Monomial::up_to(n, 0, k);
    let index = index_of(&rows);
    let dim = rows.len() * p;
    let use_v = matches!(group, GroupKind::R | GroupKind::K | GroupKind::A);
    let use_a = matches!(group, GroupKind::C | GroupKind::K);
    let use_w = matches!(group, GroupKind::L | GroupKind::A);

    enum Unknown {
        V(usize, Monomial),
        A(usize, usize, Monomial),
        W(usize, Monomial),
    }
    let mut cols = Vec::new();
    let mut labels = Vec::new();
    let jac = f.jacobian();
    if use_v {
        for i in (0..n).filter(|&i| i != t) {
            for m in rows.iter().filter(|m| m.exponents().iter().enumerate().any(|(l, &e)| l != t && e > 0)) {
                let mut v = vec![Scalar::zero(); dim];
                for j in 0..p {
                    scatter(&jac[j][i].monomial_mul_truncated(m, k), &index, j * rows.len(), &mut v);
                }
                cols.push(v);
                labels.push(Unknown::V(i, m.clone()));
            }
        }
    }
    if use_a {
        for (i, row) in (0..p).map(|i| (i, i * rows.len())) {
            for (j, fj) in f.components().iter().enumerate() {
                for m in &rows {
                    let mut v = vec![Scalar::zero(); dim];
                    scatter(&fj.monomial_mul_truncated(m, k), &index, row, &mut v);
                    cols.push(v);
                    labels.push(Unknown::A(i, j, m.clone()));
                }
            }
        }
    }
    if use_w {
        let mut subs: Vec<Polynomial> = f.components().to_vec();
        subs.push(Polynomial::var(&ring, t));
        for m in Monomial::up_to(p + 1, 1, k).into_iter().filter(|m| m.exponents()[..p].iter().any(|&e| e > 0)) {
            let comp = Polynomial::monomial(&wr, m.clone()).compose_truncated(&subs, k)?;
            if comp.is_zero() {
                continue;
            }
            for j in 0..p {
                let mut v = vec![Scalar::zero(); dim];
                scatter(&comp, &index, j * rows.len(), &mut v);
                cols.push(v);
                labels.push(Unknown::W(j, m.clone()));
            }
        }
    }
    let mut rhs = vec![Scalar::zero(); dim];
    for (j, d) in fam.derivative().iter().enumerate() {
        scatter(&d.truncate(k), &index, j * rows.len(), &mut rhs);
    }
    let Some(x) = solve_many(&cols, &[rhs], dim).pop().flatten() else {
        return Ok(None);
    };
    let mut cert = TrivialityCertificate {
        group,
        jet_order: k,
        v: vec![Polynomial::zero(&ring); n],
        a: vec![vec![Polynomial::zero(&ring); p]; p],
        w: vec![Polynomial::zero(&wr); p],
    };
    for (u, c) in labels.into_iter().zip(x) {
        if c.is_zero() {
            continue;
        }
        match u {
            Unknown::V(i, m) => cert.v[i] = &cert.v[i] + &Polynomial::term(&ring, m, c),
            Unknown::A(i, j, m) => cert.a[i][j] = &cert.a[i][j] + &Polynomial::term(&ring, m, c),
            Unknown::W(j, m) => cert.w[j] = &cert.w[j] + &Polynomial::term(&wr, m, c),
        }
    }
    if !cert.verify(fam)? {
        return Err(Error::Invariant("triviality certificate does not verify".into()));
    }
    Ok(Some(cert))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Positivity {
    Certified,
    Inconclusive,
}

/// `ρ² = z^T G z` for the vector `z` of degree-`m` monomials, with `G`
/// positive definite.
#[derive(Clone, Debug)]
pub struct GramCertificate {
    pub monomials: Vec<Monomial>,
    pub matrix: Vec<Vec<BigRational>>,
}

impl GramCertificate {
    pub fn verify(&self, rho_sq: &Polynomial) -> bool {
        let ring = rho_sq.ring();
        let mut q = Polynomial::zero(ring);
        for (a, ma) in self.monomials.iter().enumerate() {
            for (b, mb) in self.monomials.iter().enumerate() {
                let c = &self.matrix[a][b];
                if !c.is_zero() {
                    q = &q + &Polynomial::term(ring, ma.mul(mb), Scalar::from(c.clone()));
                }
            }
        }
        let sym = (0..self.matrix.len()).all(|a| (0..a).all(|b| self.matrix[a][b] == self.matrix[b][a]));
        let m: Vec<Vec<Scalar>> = self.matrix.iter().map(|r| r.iter().cloned().map(Scalar::from).collect()).collect();
        sym && q == *rho_sq && is_positive_definite(&m) == Some(true)
    }
}

/// `ρ² ∂F/∂t = A·F` with `ρ² = Σ F_i²` and entries of `A` homogeneous of
/// degree `entry_degree = 2m`.
#[derive(Clone, Debug)]
pub struct ControlCertificate {
    pub rho_sq: Polynomial,
    pub matrix: Vec<Vec<Polynomial>>,
    pub entry_degree: u32,
    pub sample: Option<BigRational>,
    pub gram: Option<GramCertificate>,
    pub positivity: Positivity,
}

#[derive(Serialize)]
struct ControlJson {
    rho_sq: String,
    matrix: Vec<Vec<String>>,
    entry_degree: u32,
    sample: Option<String>,
    gram: Option<Vec<Vec<String>>>,
    positivity: Positivity,
}

impl Serialize for ControlCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ControlJson {
            rho_sq: self.rho_sq.display(),
            matrix: self.matrix.iter().map(|r| display_polys(r)).collect(),
            entry_degree: self.entry_degree,
            sample: self.sample.as_ref().map(|v| v.to_string()),
            gram: self.gram.as_ref().map(|g| g.matrix.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect()),
            positivity: self.positivity,
        }
        .serialize(s)
    }
}

impl ControlCertificate {
    /// Entry membership in `M^{entry_degree}` and the exact identity.
    pub fn verify(&self, comps: &[Polynomial], deriv: &[Polynomial]) -> bool {
        let ring = self.rho_sq.ring();
        let rho = comps.iter().fold(Polynomial::zero(ring), |acc, c| &acc + &(c * c));
        if rho != self.rho_sq || self.matrix.len() != comps.len() {
            return false;
        }
        if self.matrix.iter().flatten().any(|a| a.order().is_some_and(|o| o < self.entry_degree)) {
            return false;
        }
        self.matrix.iter().zip(deriv).all(|(row, d)| {
            let lhs = row.iter().zip(comps).fold(Polynomial::zero(ring), |acc, (a, c)| &acc + &(a * c));
            lhs == &rho * d
        })
    }
}

/// Solves `ρ² ∂F/∂t = A·F` for a family that is homogeneous of degree `m` in
/// the source variables, at `sample` if given.
///
/// The norm bounds on `ρ` are replaced by the sufficient condition that `ρ²`
/// has a positive definite Gram matrix in the degree-`m` monomials; this is
/// only attempted when the coefficients are rational.
pub fn lipschitz_control_certificate(fam: &Family, sample: Option<&BigRational>) -> Result<Option<ControlCertificate>> {
    let f = &fam.germ;
    let mut comps = f.components().to_vec();
    let mut deriv = fam.derivative();
    let m = comps.first().and_then(Polynomial::order).ok_or(Error::EmptyMap)?;
    let graded = |p: &Polynomial| p.is_zero() || (p.is_homogeneous() && p.order() == Some(m));
    if !comps.iter().all(graded) || !deriv.iter().all(graded) {
        return Err(Error::GradingMismatch(format!("components and their derivative must be homogeneous of degree {m}")));
    }
    let mut ring = f.ring().clone();
    if let Some(v) = sample {
        if fam.t != Deformation::Modulus {
            return Err(Error::InvalidInput("a sample needs a family in the modulus".into()));
        }
        let r = ring.without_parameter();
        comps = comps.iter().map(|c| c.specialize(v, &r)).collect::<std::result::Result<_, _>>()?;
        deriv = deriv.iter().map(|c| c.specialize(v, &r)).collect::<std::result::Result<_, _>>()?;
        ring = r;
    }
    let n = ring.nvars();
    let p = comps.len();
    let rho_sq = comps.iter().fold(Polynomial::zero(&ring), |acc, c| &acc + &(c * c));
    let entry = Monomial::of_degree(n, 2 * m);
    let rows = Monomial::of_degree(n, 3 * m);
    let index = index_of(&rows);
    let mut cols = Vec::new();
    for c in &comps {
        for e in &entry {
            let mut v = vec![Scalar::zero(); rows.len()];
            scatter(&c.monomial_mul(e), &index, 0, &mut v);
            cols.push(v);
        }
    }
    let rhs: Vec<Vec<Scalar>> = deriv
        .iter()
        .map(|d| {
            let mut v = vec![Scalar::zero(); rows.len()];
            scatter(&(&rho_sq * d), &index, 0, &mut v);
            v
        })
        .collect();
    let mut matrix = Vec::with_capacity(p);
    for s in solve_many(&cols, &rhs, rows.len()) {
        let Some(x) = s else { return Ok(None) };
        let row: Vec<Polynomial> = (0..p)
            .map(|j| Polynomial::from_terms(&ring, entry.iter().cloned().zip(x[j * entry.len()..(j + 1) * entry.len()].iter().cloned())))
            .collect();
        matrix.push(row);
    }
    let gram = if comps.iter().all(Polynomial::is_rational) { gram_certificate(&rho_sq, m) } else { None };
    let positivity = if gram.is_some() { Positivity::Certified } else { Positivity::Inconclusive };
    let cert = ControlCertificate { rho_sq, matrix, entry_degree: 2 * m, sample: sample.cloned(), gram, positivity };
    if !cert.verify(&comps, &deriv) || cert.gram.as_ref().is_some_and(|g| !g.verify(&cert.rho_sq)) {
        return Err(Error::Invariant("control certificate does not verify".into()));
    }
    Ok(Some(cert))
}

const ASCENT_STEPS: usize = 4000;

fn rat(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// Searches the affine space of Gram matrices of the form `rho_sq` (of degree
/// `2m`) for a positive definite member by ascent on the smallest eigenvalue,
/// then rounds and checks exactly.
fn gram_certificate(rho_sq: &Polynomial, m: u32) -> Option<GramCertificate> {
    let n = rho_sq.ring().nvars();
    let monos = Monomial::of_degree(n, m);
    let size = monos.len();
    let mut by_product: BTreeMap<Monomial, Vec<(usize, usize)>> = BTreeMap::new();
    for a in 0..size {
        for b in a..size {
            by_product.entry(monos[a].mul(&monos[b])).or_default().push((a, b));
        }
    }
    let mut g0 = vec![vec![BigRational::zero(); size]; size];
    for (prod, pairs) in &by_product {
        let c = rho_sq.coeff(prod).as_rational()?.clone();
        let (a, b) = pairs[0];
        if a == b {
            g0[a][a] = c;
        } else {
            let h = c / BigRational::from_integer(2.into());
            g0[a][b] = h.clone();
            g0[b][a] = h;
        }
    }
    // directions moving weight between two representations of one product
    let mut rels: Vec<[(usize, usize); 2]> = Vec::new();
    for pairs in by_product.values() {
        for q in &pairs[1..] {
            rels.push([pairs[0], *q]);
        }
    }
    let unit = |(a, b): (usize, usize), s: f64, g: &mut DMatrix<f64>| {
        if a == b {
            g[(a, a)] += s;
        } else {
            g[(a, b)] += s / 2.0;
            g[(b, a)] += s / 2.0;
        }
    };
    let base = DMatrix::from_fn(size, size, |i, j| rat(&g0[i][j]));
    let build = |t: &[f64]| {
        let mut g = base.clone();
        for (r, &s) in rels.iter().zip(t) {
            unit(r[0], s, &mut g);
            unit(r[1], -s, &mut g);
        }
        g
    };
    let scale = base.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(1.0);
    let mut t = vec![0.0; rels.len()];
    let mut best = (f64::NEG_INFINITY, t.clone());
    for step in 0..ASCENT_STEPS {
        let e = SymmetricEigen::new(build(&t));
        let (i, &lmin) = e.eigenvalues.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1))?;
        if lmin > best.0 {
            best = (lmin, t.clone());
        }
        let u = e.eigenvectors.column(i);
        let grad: Vec<f64> = rels
            .iter()
            .map(|r| {
                let q = |(a, b): (usize, usize)| if a == b { u[a] * u[a] } else { u[a] * u[b] };
                q(r[0]) - q(r[1])
            })
            .collect();
        let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if norm < 1e-12 {
            break;
        }
        let eta = scale / (1.0 + step as f64).sqrt();
        for (x, g) in t.iter_mut().zip(&grad) {
            *x += eta * g / norm;
        }
    }
    if best.0 <= 0.0 {
        return None;
    }
    for bits in [6u32, 12, 20, 30] {
        let den = BigInt::from(1u64 << bits);
        let mut g = g0.clone();
        for (r, s) in rels.iter().zip(&best.1) {
            let q = BigRational::new(BigInt::from((s * (1u64 << bits) as f64).round() as i64), den.clone());
            for ((a, b), sign) in [(r[0], 1), (r[1], -1)] {
                let q = &q * BigRational::from_integer(sign.into());
                if a == b {
                    g[a][a] += q;
                } else {
                    let h = q / BigRational::from_integer(2.into());
                    g[a][b] += h.clone();
                    g[b][a] += h;
                }
            }
        }
        let exact: Vec<Vec<Scalar>> = g.iter().map(|r| r.iter().cloned().map(Scalar::from).collect()).collect();
        if is_positive_definite(&exact) == Some(true) {
            return Some(GramCertificate { monomials: monos, matrix: g });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    fn polys(r: &Arc<RingSpec>, s: &[&str]) -> Vec<Polynomial> {
        s.iter().map(|t| parse_polynomial(t, r).unwrap()).collect()
    }

    #[test]
    fn containments() {
        let r = RingSpec::with_param(&["x", "y", "z"], "l");
        let i1 = polys(&r, &["x^2+l*y*z", "y^2+l*x*z", "z^2+l*x*y", "x*y*z"]);
        assert!(power_subset_ideal(&i1, 3).unwrap().holds);
        let thom = &i1[..3];
        assert!(ideal_power_product_equals(thom, 2).unwrap());
        let r2 = RingSpec::rational(&["x", "y"]);
        let j = polys(&r2, &["4*x^3+6*x*y^2", "4*y^3+6*x^2*y"]);
        assert!(power_subset_ideal(&j, 5).unwrap().holds);
        let res = power_subset_ideal(&polys(&r2, &["x^2", "y^3"]), 3).unwrap();
        assert!(!res.holds);
        assert_eq!(res.missing.len(), 1);
        assert!(power_subset_ideal(&polys(&r2, &["x^2", "y^3"]), 4).unwrap().holds);
        assert!(matches!(power_subset_ideal(&polys(&r2, &["1+x"]), 2), Err(Error::ConstantTerm { .. })));
    }

    #[test]
    fn thom_levine() {
        let r = RingSpec::rational(&["x", "t"]);
        let c = Family::variable(MapGerm::parse(&r, &["x^2"]).unwrap(), 1).unwrap();
        let cert = thom_levine_certificate(&c, GroupKind::A, 3).unwrap().unwrap();
        assert!(cert.v.iter().chain(&cert.w).all(Polynomial::is_zero));
        let fam = Family::variable(MapGerm::parse(&r, &["x^2+t*x^3"]).unwrap(), 1).unwrap();
        let cert = thom_levine_certificate(&fam, GroupKind::A, 3).unwrap().unwrap();
        assert!(cert.verify(&fam).unwrap());
        assert!(thom_levine_certificate(&fam, GroupKind::L, 3).unwrap().is_none());

        let rl = RingSpec::with_param(&["x", "y", "z"], "l");
        let thom = MapGerm::parse(&rl, &["x^2+l*y*z", "y^2+l*x*z", "z^2+l*x*y"]).unwrap();
        let across = Family::around(&thom, &q(0)).unwrap();
        assert_eq!(across.germ().components()[0].display(), "x^2 + y*z*t");
        for k in 2..4 {
            assert!(thom_levine_certificate(&across, GroupKind::K, k).unwrap().is_none());
        }
    }

    #[test]
    fn control_certificates() {
        let rl = RingSpec::with_param(&["x", "y", "z"], "l");
        let thom = Family::modulus(MapGerm::parse(&rl, &["x^2+l*y*z", "y^2+l*x*z", "z^2+l*x*y"]).unwrap()).unwrap();
        let c = lipschitz_control_certificate(&thom, Some(&q(3))).unwrap().unwrap();
        assert_eq!(c.entry_degree, 4);
        assert_eq!(c.positivity, Positivity::Certified);
        let c = lipschitz_control_certificate(&thom, Some(&q(-1))).unwrap().unwrap();
        assert_eq!(c.positivity, Positivity::Inconclusive);
        let generic = lipschitz_control_certificate(&thom, None).unwrap().unwrap();
        assert_eq!(generic.positivity, Positivity::Inconclusive);

        let r = RingSpec::with_param(&["x", "y"], "l");
        let flat = Family::modulus(MapGerm::parse(&r, &["x^2", "y^2+0*l"]).unwrap()).unwrap();
        let c = lipschitz_control_certificate(&flat, None).unwrap().unwrap();
        assert!(c.matrix.iter().flatten().all(Polynomial::is_zero));
        let bad = Family::modulus(MapGerm::parse(&r, &["x^2+l*x^3"]).unwrap()).unwrap();
        assert!(matches!(lipschitz_control_certificate(&bad, None), Err(Error::GradingMismatch(_))));
    }
}
