//! Finite determinacy certificates and stabilized codimensions.
//!
//! For a group with constant `ε` the containment `M^{k+1} Θ_f ⊆ T𝒢f` is
//! decided inside `J^{εk+1}`: the jet image of `T𝒢f` there is
//! `(T𝒢f + M^{εk+2} Θ_f) / M^{εk+2} Θ_f`, and asking that it contain every
//! monomial vector of degree `k+1 ..= εk+1` is exactly the hypothesis
//! `T𝒢f + M^{εk+2} Θ_f ⊇ M^{k+1} Θ_f`, which upgrades to the containment
//! itself and so to `(εk+1)`-determinacy. When the check fails the
//! containment fails as well, so `f` is not `k`-determined.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::ZPoly;
use crate::jetspace::{JetBasis, Subspace};
use crate::tangent::{tangent_generators, tangent_space, GroupId, MapGerm};

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct DeterminacyCertificate {
    pub group: GroupId,
    /// `M^{k_base+1} Θ_f ⊆ T𝒢f` was certified.
    pub k_base: u32,
    /// `f` is `order_bound`-determined; equals `ε k_base + 1`.
    pub order_bound: u32,
    /// Jet order of the window the containment was checked in.
    pub jet_order_used: u32,
}

impl DeterminacyCertificate {
    /// `f` is not `k`-determined for any `k` below this (the containment
    /// check failed at each of them).
    pub fn refuted_below(&self) -> u32 {
        self.k_base
    }

    /// Recheck the containment from the stored data.
    pub fn verify(&self, f: &MapGerm) -> Result<bool> {
        contains_level(f, self.group, self.k_base)
    }
}

/// Whether the `J^{εk+1}` image of `T𝒢f` contains all monomial vectors of
/// degree `k+1 ..= εk+1`.
pub fn contains_level(f: &MapGerm, g: GroupId, k: u32) -> Result<bool> {
    let top = g.epsilon() * k + 1;
    let s = tangent_space(f, g, top)?;
    let b = s.basis();
    let ok = b.iter().filter(|(_, m, _)| m.degree() > k).all(|(c, _, _)| s.contains_column(c));
    Ok(ok)
}

/// Smallest `k <= cutoff` whose containment check passes.
pub fn determinacy_bound(f: &MapGerm, g: GroupId, cutoff: u32) -> Result<DeterminacyCertificate> {
    let g = g.ordinary();
    for k in 1..=cutoff {
        if contains_level(f, g, k)? {
            let ob = g.epsilon() * k + 1;
            return Ok(DeterminacyCertificate { group: g, k_base: k, order_bound: ob, jet_order_used: ob });
        }
    }
    Err(Error::Undecided { what: format!("{}-determinacy", g.name()), cutoff })
}

/// `true` if the check at `k` fails, i.e. `f` is provably not `k`-determined.
pub fn refutes_determinacy(f: &MapGerm, g: GroupId, k: u32) -> Result<bool> {
    Ok(!contains_level(f, g.ordinary(), k)?)
}

#[derive(Clone, Debug)]
pub struct CodimResult {
    pub value: usize,
    pub extended: bool,
    pub jet_order_used: u32,
    pub certificate: DeterminacyCertificate,
    /// Parameter factors on whose zeros the rank of the tangent space in the
    /// certified window drops (primitive, positive leading coefficient,
    /// sorted). Candidates come from the elimination; each is confirmed by
    /// redoing the elimination modulo the factor.
    pub exceptional_pivots: Vec<ZPoly>,
}

/// Codimension of `T𝒢f` (or `T𝒢_e f` if `g` is extended), exact once the
/// determinacy certificate fires; evaluated at `order_bound` and
/// `order_bound + 1` and required to agree.
pub fn stabilized_codim(f: &MapGerm, g: GroupId, cutoff: u32) -> Result<CodimResult> {
    let cert = determinacy_bound(f, g, cutoff)?;
    let m = cert.order_bound;
    let gens = tangent_generators(f, g, m);
    let basis = JetBasis::enumerate(f.n(), f.p(), m, g.min_degree())?;
    let s = Subspace::span(&basis, f.ring(), &gens);
    let value = s.codim();
    let again = tangent_space(f, g, m + 1)?.codim();
    if again != value {
        return Err(Error::Invariant(format!("codimension moved from {value} to {again} past the certified order {m}")));
    }
    let mut candidates: Vec<ZPoly> = Vec::new();
    for p in s.exceptional_polys() {
        for q in p.factor_candidates() {
            if !q.is_constant() && !candidates.contains(&q) {
                candidates.push(q);
            }
        }
    }
    let mut exceptional_pivots = Vec::new();
    for p in s.exceptional_factors(&gens, &candidates)? {
        for q in p.factor_candidates() {
            if !exceptional_pivots.contains(&q) {
                exceptional_pivots.push(q);
            }
        }
    }
    exceptional_pivots.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.coeffs().cmp(b.coeffs())));
    Ok(CodimResult { value, extended: g.extended, jet_order_used: m, certificate: cert, exceptional_pivots })
}

/// `χ = dim Θ_f / (tf(Θ_n) + (f*M_p + M^l) Θ_f)`, computed in `J^{l-1}`.
pub fn chi(f: &MapGerm, l: u32) -> Result<usize> {
    if l == 0 {
        return Ok(0);
    }
    Ok(tangent_space(f, GroupId::K.extended(), l - 1)?.codim())
}

/// Membership of `j^l f(0)` in the bad set `{χ >= l}`.
pub fn bad_set_member(f: &MapGerm, l: u32) -> Result<bool> {
    Ok(chi(f, l)? >= l as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::RingSpec;

    fn germ(vars: &[&str], comps: &[&str]) -> MapGerm {
        MapGerm::parse(&RingSpec::rational(vars), comps).unwrap()
    }

    #[test]
    fn right_determinacy_of_x3_plus_y3() {
        let f = germ(&["x", "y"], &["x^3+y^3"]);
        let c = determinacy_bound(&f, GroupId::R, 6).unwrap();
        assert_eq!((c.k_base, c.order_bound), (2, 3));
        assert!(c.verify(&f).unwrap());
        assert!(refutes_determinacy(&f, GroupId::R, 1).unwrap());
    }

    #[test]
    fn right_determinacy_of_a_j() {
        for j in 1..6u32 {
            let f = germ(&["x"], &[&format!("x^{}", j + 1)]);
            assert_eq!(determinacy_bound(&f, GroupId::R, 10).unwrap().order_bound, j + 1);
        }
    }

    #[test]
    fn left_right_determinacy_of_cusp() {
        let f = germ(&["x", "y"], &["x", "y^3+x*y"]);
        assert!(determinacy_bound(&f, GroupId::A, 4).unwrap().order_bound <= 7);
    }

    #[test]
    fn codims() {
        // C_{2k-1} = (x^2+y^3, y^{k+2}) has codim 2k+5
        for (k, want) in [(1, 7), (2, 9)] {
            let f = germ(&["x", "y"], &["x^2+y^3", &format!("y^{}", k + 2)]);
            let c = stabilized_codim(&f, GroupId::K, 12).unwrap();
            assert_eq!(c.value, want);
            assert!(c.exceptional_pivots.is_empty());
        }
        let g = germ(&["x"], &["x^2"]);
        assert!(matches!(stabilized_codim(&germ(&["x", "y"], &["x^2"]), GroupId::K, 4), Err(Error::Undecided { .. })));
        assert_eq!(stabilized_codim(&g, GroupId::K.extended(), 4).unwrap().value, 1);
    }

    #[test]
    fn chi_values() {
        let s = germ(&["x"], &["x"]);
        for l in 1..5 {
            assert_eq!(chi(&s, l).unwrap(), 0);
            assert!(!bad_set_member(&s, l).unwrap());
        }
        for j in 1..5u32 {
            let f = germ(&["x"], &[&format!("x^{}", j + 1)]);
            // Θ/(x^j) has basis 1, ..., x^{j-1}
            assert_eq!(chi(&f, j + 2).unwrap(), j as usize);
            assert!(!bad_set_member(&f, j + 2).unwrap());
        }
        let z = germ(&["x"], &["0"]);
        assert_eq!(chi(&z, 2).unwrap(), 2);
        assert!(bad_set_member(&z, 2).unwrap());
    }
}
