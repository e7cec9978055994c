//! The normal space `Nf` and weighted homogeneity.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::determinacy::determinacy_bound;
use crate::error::{Error, Result};
use crate::jetspace::{Subspace, VectorFieldJet};
use crate::linalg::nullspace;
use crate::poly::{Polynomial, Scalar};

use super::{tangent_space, GroupId, MapGerm};

/// `Θ_f / (tf(Θ_n) + f*M_p Θ_f + K{e_j})` in the certified window, with the
/// space it is a quotient of.
fn normal_denominator(f: &MapGerm, cutoff: u32) -> Result<Subspace> {
    let cert = determinacy_bound(f, GroupId::K, cutoff).map_err(|_| Error::NotFst { cutoff })?;
    let mut s = tangent_space(f, GroupId::K.extended(), cert.k_base)?;
    for j in 0..f.p() {
        s.insert(&VectorFieldJet::unit(Polynomial::one(f.ring()), j, f.p()))?;
    }
    Ok(s)
}

/// Monomial vector fields whose classes form a basis of
/// `Nf = M_n Θ_f / (tf(Θ_n) + f*M_p Θ_f)`, chosen greedily by degree, then
/// target component, then monomial.
pub fn normal_space_nf(f: &MapGerm, cutoff: u32) -> Result<Vec<VectorFieldJet>> {
    let mut s = normal_denominator(f, cutoff)?;
    let basis = s.basis().clone();
    let mut cols: Vec<_> = basis.iter().collect();
    cols.sort_by(|a, b| (a.1.degree(), a.2, a.1).cmp(&(b.1.degree(), b.2, b.1)));
    let mut out = Vec::new();
    for (c, m, j) in cols {
        if !s.contains_column(c) {
            s.insert_column(c);
            out.push(VectorFieldJet::unit(Polynomial::monomial(f.ring(), m.clone()), j, f.p()));
        }
    }
    Ok(out)
}

/// Whether the classes of `sigmas` form a basis of `Nf`.
pub fn is_normal_basis(f: &MapGerm, sigmas: &[VectorFieldJet], cutoff: u32) -> Result<bool> {
    let mut s = normal_denominator(f, cutoff)?;
    let r = s.codim();
    if sigmas.len() != r {
        return Ok(false);
    }
    for v in sigmas {
        if v.components.iter().any(|c| c.order() == Some(0)) {
            return Ok(false);
        }
        if !s.insert(v)? {
            return Ok(false);
        }
    }
    Ok(s.codim() == 0)
}

/// Weights `w_i > 0` and degrees `d_j` with every monomial of `f_j` of
/// weighted degree `d_j`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct WeightedType {
    #[serde(serialize_with = "ser_rats")]
    pub weights: Vec<BigRational>,
    #[serde(serialize_with = "ser_rats")]
    pub degrees: Vec<BigRational>,
}

fn ser_rats<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

impl WeightedType {
    /// The Euler vector field `Σ w_i x_i ∂/∂x_i` applied to `f` equals `(d_j f_j)`.
    pub fn euler_check(&self, f: &MapGerm) -> bool {
        let n = f.n();
        for (j, c) in f.components().iter().enumerate() {
            let mut lhs = Polynomial::zero(f.ring());
            for i in 0..n {
                let xi = Polynomial::var(f.ring(), i);
                lhs = &lhs + &(&xi * &c.partial_derivative(i)).scalar_mul(&Scalar::from(self.weights[i].clone()));
            }
            if lhs != c.scalar_mul(&Scalar::from(self.degrees[j].clone())) {
                return false;
            }
        }
        true
    }
}

fn degrees_for(f: &MapGerm, w: &[BigRational]) -> Option<Vec<BigRational>> {
    let mut out = Vec::new();
    for c in f.components() {
        let mut d: Option<BigRational> = None;
        for m in c.terms().keys() {
            let v = m.exponents().iter().zip(w).fold(BigRational::zero(), |a, (&e, wi)| a + wi * BigRational::from_integer(e.into()));
            match &d {
                None => d = Some(v),
                Some(x) if *x == v => {}
                Some(_) => return None,
            }
        }
        out.push(d.unwrap_or_else(BigRational::zero));
    }
    Some(out)
}

/// A weighted homogeneous type of `f`, if one with positive weights is found.
///
/// Tries the standard grading first, then positive points of the solution
/// space of the weight equations with small integer values on its free
/// coordinates, normalized to integral weights with gcd one.
pub fn weighted_homogeneous_type(f: &MapGerm) -> Option<WeightedType> {
    let n = f.n();
    let ones = vec![BigRational::one(); n];
    if let Some(d) = degrees_for(f, &ones) {
        return Some(WeightedType { weights: ones, degrees: d });
    }
    // equations (a - b) . w = 0 for monomials a, b of the same component
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for c in f.components() {
        let mons: Vec<_> = c.terms().keys().collect();
        for m in mons.iter().skip(1) {
            rows.push(
                (0..n).map(|i| Scalar::from_int(i64::from(m.exponents()[i]) - i64::from(mons[0].exponents()[i]))).collect(),
            );
        }
    }
    let ns = nullspace(&rows, n);
    if ns.is_empty() {
        return None;
    }
    let dim = ns.len().min(4);
    let mut coeffs = vec![1i64; dim];
    loop {
        let mut w = vec![BigRational::zero(); n];
        for (v, &a) in ns.iter().zip(&coeffs) {
            for i in 0..n {
                w[i] += v[i].as_rational().expect("rational") * BigRational::from_integer(a.into());
            }
        }
        for sign in [1i64, -1] {
            let ws: Vec<BigRational> = w.iter().map(|x| x * BigRational::from_integer(sign.into())).collect();
            if ws.iter().all(|x| x.is_positive()) {
                let ws = normalize(ws);
                if let Some(d) = degrees_for(f, &ws) {
                    return Some(WeightedType { weights: ws, degrees: d });
                }
            }
        }
        // next combination in {1, 2, 3, -1}^dim
        let mut i = 0;
        loop {
            if i == dim {
                return None;
            }
            coeffs[i] = match coeffs[i] {
                1 => 2,
                2 => 3,
                3 => -1,
                _ => {
                    coeffs[i] = 1;
                    i += 1;
                    continue;
                }
            };
            break;
        }
    }
}

fn normalize(w: Vec<BigRational>) -> Vec<BigRational> {
    use num_integer::Integer;
    let l = w.iter().fold(num_bigint::BigInt::one(), |a, x| a.lcm(x.denom()));
    let ints: Vec<num_bigint::BigInt> = w.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = ints.iter().fold(num_bigint::BigInt::zero(), |a, x| a.gcd(x));
    ints.into_iter().map(|x| BigRational::from_integer(x / &g)).collect()
}
