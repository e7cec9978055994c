//! Local algebras `Q_k(f)`, the invariant δ and the class of the Jacobian.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jetspace::{JetBasis, Subspace, VectorFieldJet};
use crate::poly::{Monomial, Polynomial};

use super::core::rank_zero_core;
use super::MapGerm;

/// Dimensions of the graded pieces of a local algebra.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct HilbertData {
    pub dims_by_degree: Vec<usize>,
    pub total: usize,
}

impl HilbertData {
    fn from_dims(mut dims_by_degree: Vec<usize>) -> Self {
        while dims_by_degree.len() > 1 && dims_by_degree.last() == Some(&0) {
            dims_by_degree.pop();
        }
        let total = dims_by_degree.iter().sum();
        HilbertData { dims_by_degree, total }
    }
}

/// `E_n / (<f_1..f_p> + M^{k+1})` as a subspace of the function window `J^k`.
///
/// Leading columns are the lowest monomials of each reduced row, so the
/// non-pivot monomials span a complement and their degree counts give the
/// Hilbert function of the associated graded algebra.
#[derive(Clone, Debug)]
pub struct LocalAlgebra {
    k: u32,
    ideal: Subspace,
}

impl LocalAlgebra {
    pub fn new(f: &MapGerm, k: u32) -> Result<Self> {
        let basis = JetBasis::enumerate(f.n(), 1, k, 0)?;
        let mut ideal = Subspace::zero(&basis, f.ring());
        for a in Monomial::up_to(f.n(), 0, k.saturating_sub(1)) {
            for fi in f.components() {
                let h = fi.monomial_mul_truncated(&a, k);
                if !h.is_zero() {
                    ideal.insert(&VectorFieldJet::new(vec![h]))?;
                }
            }
        }
        Ok(LocalAlgebra { k, ideal })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn ideal(&self) -> &Subspace {
        &self.ideal
    }

    pub fn dim(&self) -> usize {
        self.ideal.codim()
    }

    /// Monomials of `J^k` outside the pivot set, in ascending order.
    pub fn monomial_basis(&self) -> Vec<Monomial> {
        let b = self.ideal.basis();
        b.iter().filter(|(c, _, _)| !self.ideal.is_pivot(*c)).map(|(_, m, _)| m.clone()).collect()
    }

    pub fn hilbert(&self) -> HilbertData {
        let mut dims = vec![0usize; self.k as usize + 1];
        for m in self.monomial_basis() {
            dims[m.degree() as usize] += 1;
        }
        HilbertData::from_dims(dims)
    }

    /// Whether every monomial of degree `d` lies in the ideal modulo `M^{k+1}`.
    pub fn contains_degree(&self, d: u32) -> bool {
        let b = self.ideal.basis();
        b.iter().filter(|(_, m, _)| m.degree() == d).all(|(c, _, _)| self.ideal.contains_column(c))
    }

    /// Representative of `g` supported on [`Self::monomial_basis`].
    pub fn normal_form(&self, g: &Polynomial) -> Result<Polynomial> {
        let v = self.ideal.normal_form(&VectorFieldJet::new(vec![g.clone()]))?;
        Ok(v.components.into_iter().next().expect("one component"))
    }
}

/// Hilbert function of `Q_k(f)`, computed on the rank-zero core.
pub fn local_algebra(f: &MapGerm, k: u32) -> Result<HilbertData> {
    let core = rank_zero_core(f, k)?;
    Ok(LocalAlgebra::new(&core.core, k)?.hilbert())
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaResult {
    pub delta: usize,
    /// Jet order `k` at which every degree-`k` monomial was found in
    /// `<f> + M^{k+1}`, so that `M^k` lies in `<f>`.
    pub k_cert: u32,
    pub hilbert: HilbertData,
}

/// `δ(f) = dim Q(f)`, certified by a full degree level lying in the ideal.
pub fn delta(f: &MapGerm, cutoff: u32) -> Result<DeltaResult> {
    let core = rank_zero_core(f, cutoff)?;
    for k in 1..=cutoff {
        let a = LocalAlgebra::new(&core.core, k)?;
        if a.contains_degree(k) {
            let hilbert = a.hilbert();
            return Ok(DeltaResult { delta: hilbert.total, k_cert: k, hilbert });
        }
    }
    Err(Error::NotFinite { cutoff })
}

/// The Jacobian determinant and its class in `Q(f)`.
#[derive(Clone, Debug)]
pub struct JacobianClass {
    pub determinant: Polynomial,
    /// Normal form supported on the standard monomials of `Q(f)`.
    pub class: Polynomial,
    pub algebra: Arc<LocalAlgebra>,
}

impl JacobianClass {
    pub fn is_nonzero(&self) -> bool {
        !self.class.is_zero()
    }
}

/// Determinant of a square polynomial matrix, by dynamic programming over
/// the subsets of columns used by the leading rows.
pub(crate) fn determinant(m: &[Vec<Polynomial>], ring: &Arc<crate::poly::RingSpec>) -> Polynomial {
    let n = m.len();
    let mut dp: Vec<Option<Polynomial>> = vec![None; 1 << n];
    dp[0] = Some(Polynomial::one(ring));
    for mask in 0usize..(1 << n) {
        let Some(cur) = dp[mask].take() else { continue };
        let r = mask.count_ones() as usize;
        if r == n {
            dp[mask] = Some(cur);
            continue;
        }
        for c in 0..n {
            if mask & (1 << c) != 0 || m[r][c].is_zero() {
                continue;
            }
            let above = (mask >> (c + 1)).count_ones();
            let mut t = &cur * &m[r][c];
            if above % 2 == 1 {
                t = -t;
            }
            let slot = &mut dp[mask | (1 << c)];
            *slot = Some(match slot.take() {
                Some(s) => &s + &t,
                None => t,
            });
        }
    }
    dp[(1 << n) - 1].take().unwrap_or_else(|| Polynomial::zero(ring))
}

/// Class of `det df` in `Q(f)` for equidimensional `f` of finite δ.
pub fn jacobian_class(f: &MapGerm, cutoff: u32) -> Result<JacobianClass> {
    if f.n() != f.p() {
        return Err(Error::DimensionMismatch { expected: f.n(), found: f.p() });
    }
    let d = delta(f, cutoff)?;
    let algebra = LocalAlgebra::new(f, d.k_cert)?;
    let determinant = determinant(&f.jacobian(), f.ring());
    let class = algebra.normal_form(&determinant)?;
    Ok(JacobianClass { determinant, class, algebra: Arc::new(algebra) })
}
