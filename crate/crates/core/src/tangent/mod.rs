//! Map-germs, Mather's groups and the jet images of their tangent spaces.

mod algebra;
mod core;
mod normal;

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use serde::Serialize;

pub use self::algebra::{delta, jacobian_class, local_algebra, DeltaResult, HilbertData, JacobianClass, LocalAlgebra};
pub use self::core::{corank, rank_zero_core, RankZeroCore};
pub use self::normal::{is_normal_basis, normal_space_nf, weighted_homogeneous_type, WeightedType};

use crate::error::{Error, Result};
use crate::jetspace::{JetBasis, Subspace, VectorFieldJet};
use crate::poly::{parse_polynomial, Monomial, Polynomial, PowerCache, RingSpec, Scalar};

/// `f: (K^n, 0) -> (K^p, 0)` given by polynomial components.
#[derive(Clone, PartialEq, Eq)]
pub struct MapGerm {
    ring: Arc<RingSpec>,
    components: Vec<Polynomial>,
}

impl MapGerm {
    pub fn new(ring: &Arc<RingSpec>, components: Vec<Polynomial>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::EmptyMap);
        }
        for (i, c) in components.iter().enumerate() {
            if c.ring() != ring && **c.ring() != **ring {
                return Err(Error::Poly(crate::poly::PolyError::RingMismatch));
            }
            if !c.constant_term().is_zero() {
                return Err(Error::ConstantTerm { component: i });
            }
        }
        let components = components.into_iter().map(|c| c.with_ring(ring)).collect();
        Ok(MapGerm { ring: ring.clone(), components })
    }

    /// Parse each component over `ring`.
    pub fn parse(ring: &Arc<RingSpec>, comps: &[&str]) -> Result<Self> {
        let c = comps.iter().map(|s| parse_polynomial(s, ring)).collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(ring, c)
    }

    /// Germ with no components (the target of a full-rank reduction). Only
    /// produced internally.
    pub(crate) fn empty(ring: &Arc<RingSpec>) -> Self {
        MapGerm { ring: ring.clone(), components: Vec::new() }
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn n(&self) -> usize {
        self.ring.nvars()
    }

    pub fn p(&self) -> usize {
        self.components.len()
    }

    pub fn has_parameter(&self) -> bool {
        self.ring.parameter().is_some()
    }

    pub fn max_degree(&self) -> u32 {
        self.components.iter().filter_map(Polynomial::degree).max().unwrap_or(0)
    }

    /// Specialize the parameter.
    pub fn specialize(&self, v: &BigRational) -> Result<MapGerm> {
        if self.ring.parameter().is_none() {
            return Ok(self.clone());
        }
        if let Some(w) = self.ring.excluded().and_then(|e| e.witness(v)) {
            return Err(Error::ExcludedParameter {
                value: v.to_string(),
                witness: w.display_with(self.ring.param_name()),
            });
        }
        let r = self.ring.without_parameter();
        let c = self.components.iter().map(|c| c.specialize(v, &r)).collect::<std::result::Result<Vec<_>, _>>()?;
        MapGerm::new(&r, c)
    }

    /// Coefficients of the linear parts, `p x n`.
    pub fn linear_part(&self) -> Vec<Vec<Scalar>> {
        let n = self.n();
        self.components
            .iter()
            .map(|c| (0..n).map(|i| c.coeff(&Monomial::var(n, i))).collect())
            .collect()
    }

    /// `∂f/∂x_i` as a vector field along `f`.
    pub fn partial(&self, i: usize) -> VectorFieldJet {
        VectorFieldJet::new(self.components.iter().map(|c| c.partial_derivative(i)).collect())
    }

    /// Jacobian matrix, `p x n`.
    pub fn jacobian(&self) -> Vec<Vec<Polynomial>> {
        self.components.iter().map(|c| (0..self.n()).map(|i| c.partial_derivative(i)).collect()).collect()
    }

    /// Ring of the target coordinates `Y1 .. Yp`, same parameter.
    pub fn target_ring(&self) -> Arc<RingSpec> {
        let names = (1..=self.p()).map(|j| format!("Y{j}")).collect();
        self.ring.with_variables(names).expect("target names are valid")
    }

    /// `truncate(g ∘ f, k)` for `g` in the target ring.
    pub fn pullback_truncated(&self, g: &Polynomial, k: u32) -> Result<Polynomial> {
        Ok(g.compose_truncated(&self.components, k)?)
    }

    /// Precompose with polynomial substitutions of the source variables.
    pub fn precompose(&self, subs: &[Polynomial], k: u32) -> Result<MapGerm> {
        let ring = subs.first().map(|s| s.ring().clone()).unwrap_or_else(|| self.ring.clone());
        let c = self.components.iter().map(|c| c.compose_truncated(subs, k)).collect::<std::result::Result<Vec<_>, _>>()?;
        MapGerm::new(&ring, c)
    }

    pub fn display(&self) -> String {
        let parts: Vec<String> = self.components.iter().map(|c| c.display()).collect();
        format!("({})", parts.join(", "))
    }
}

impl fmt::Debug for MapGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum GroupKind {
    R,
    C,
    K,
    L,
    A,
}

/// One of Mather's groups, ordinary or extended tangent space.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct GroupId {
    pub kind: GroupKind,
    pub extended: bool,
}

impl GroupId {
    pub const R: GroupId = GroupId { kind: GroupKind::R, extended: false };
    pub const C: GroupId = GroupId { kind: GroupKind::C, extended: false };
    pub const K: GroupId = GroupId { kind: GroupKind::K, extended: false };
    pub const L: GroupId = GroupId { kind: GroupKind::L, extended: false };
    pub const A: GroupId = GroupId { kind: GroupKind::A, extended: false };

    pub fn new(kind: GroupKind, extended: bool) -> Self {
        GroupId { kind, extended }
    }

    pub fn extended(self) -> Self {
        GroupId { extended: true, ..self }
    }

    pub fn ordinary(self) -> Self {
        GroupId { extended: false, ..self }
    }

    pub fn epsilon(self) -> u32 {
        match self.kind {
            GroupKind::R | GroupKind::C | GroupKind::K => 1,
            GroupKind::L | GroupKind::A => 2,
        }
    }

    fn has_tf(self) -> bool {
        matches!(self.kind, GroupKind::R | GroupKind::K | GroupKind::A)
    }

    fn has_contact(self) -> bool {
        matches!(self.kind, GroupKind::C | GroupKind::K)
    }

    fn has_omega(self) -> bool {
        matches!(self.kind, GroupKind::L | GroupKind::A)
    }

    /// Lowest degree of the jet window its tangent space lives in.
    pub fn min_degree(self) -> u32 {
        if self.extended {
            0
        } else {
            1
        }
    }

    pub fn name(self) -> String {
        let base = match self.kind {
            GroupKind::R => "R",
            GroupKind::C => "C",
            GroupKind::K => "K",
            GroupKind::L => "L",
            GroupKind::A => "A",
        };
        if self.extended {
            format!("{base}_e")
        } else {
            base.to_string()
        }
    }
}

impl std::str::FromStr for GroupId {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (base, ext) = match s.strip_suffix("_e").or_else(|| s.strip_suffix('e').filter(|b| b.len() == 1)) {
            Some(b) => (b, true),
            None => (s, false),
        };
        let kind = match base {
            "R" => GroupKind::R,
            "C" => GroupKind::C,
            "K" => GroupKind::K,
            "L" => GroupKind::L,
            "A" => GroupKind::A,
            _ => return Err(format!("unknown group '{s}' (expected R, C, K, L, A, optionally with _e)")),
        };
        Ok(GroupId { kind, extended: ext })
    }
}

/// Pullbacks `Y^β ∘ f` for `lo <= |β| <= k`, truncated at `k`, skipping zeros.
pub(crate) fn pullback_monomials(f: &MapGerm, lo: u32, k: u32) -> Vec<(Monomial, Polynomial)> {
    let mut cache = PowerCache::new(&f.components, k);
    let mut out = Vec::new();
    for d in lo..=k {
        for b in Monomial::of_degree(f.p(), d) {
            let h = cache.monomial(&b);
            if !h.is_zero() {
                out.push((b, h));
            }
        }
    }
    out
}

/// Stream the generators of the `k`-jet image of `T𝒢f` (or `T𝒢_e f`).
pub fn for_each_generator(f: &MapGerm, g: GroupId, k: u32, mut emit: impl FnMut(VectorFieldJet)) {
    let n = f.n();
    let p = f.p();
    if g.has_tf() {
        let lo = g.min_degree();
        let partials: Vec<VectorFieldJet> = (0..n).map(|i| f.partial(i)).collect();
        for a in Monomial::up_to(n, lo, k) {
            for d in &partials {
                let v = VectorFieldJet::new(d.components.iter().map(|c| c.monomial_mul_truncated(&a, k)).collect());
                if !v.is_zero() {
                    emit(v);
                }
            }
        }
    }
    if g.has_contact() {
        for a in Monomial::up_to(n, 0, k.saturating_sub(1)) {
            for fi in &f.components {
                let h = fi.monomial_mul_truncated(&a, k);
                if h.is_zero() {
                    continue;
                }
                for j in 0..p {
                    emit(VectorFieldJet::unit(h.clone(), j, p));
                }
            }
        }
    }
    if g.has_omega() {
        for (_, h) in pullback_monomials(f, 1, k) {
            for j in 0..p {
                emit(VectorFieldJet::unit(h.clone(), j, p));
            }
        }
        if g.extended {
            for j in 0..p {
                emit(VectorFieldJet::unit(Polynomial::one(&f.ring), j, p));
            }
        }
    }
}

/// Generators of the `k`-jet image of the tangent space, collected.
pub fn tangent_generators(f: &MapGerm, g: GroupId, k: u32) -> Vec<VectorFieldJet> {
    let mut out = Vec::new();
    for_each_generator(f, g, k, |v| out.push(v));
    out
}

/// The `k`-jet image of the tangent space inside its window.
pub fn tangent_space(f: &MapGerm, g: GroupId, k: u32) -> Result<Subspace> {
    let basis = JetBasis::enumerate(f.n(), f.p(), k, g.min_degree())?;
    let mut s = Subspace::zero(&basis, &f.ring);
    for_each_generator(f, g, k, |v| {
        s.insert(&v).expect("generator lies in the window");
    });
    Ok(s)
}

/// Codimension of the tangent space computed modulo `M^{k+1} Θ_f`.
pub fn codim_in_window(f: &MapGerm, g: GroupId, k: u32) -> Result<usize> {
    Ok(tangent_space(f, g, k)?.codim())
}
