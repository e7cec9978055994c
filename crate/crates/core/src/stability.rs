//! Infinitesimal stability, stable unfoldings, `𝒜_e`-codimension, the
//! open-orbit condition for unimodular families and plane germs.

use std::sync::Arc;

use num_rational::BigRational;
use serde::Serialize;

use crate::determinacy::{stabilized_codim, CodimResult};
use crate::error::{Error, Result};
use crate::jetspace::{JetBasis, Subspace, VectorFieldJet};
use crate::poly::{Monomial, Polynomial, RingSpec};
use crate::tangent::{
    delta, for_each_generator, normal_space_nf, pullback_monomials, rank_zero_core, weighted_homogeneous_type,
    GroupId, MapGerm,
};

/// Default jet-order cutoff for certificates.
pub const DEFAULT_CUTOFF: u32 = 12;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum StabilityMethod {
    /// `Θ_F = tF(Θ_n) + F*M_p Θ_F + K{e_j}` checked in the certified window
    /// of the rank-zero core.
    LocalAlgebra,
    /// `tF(Θ) + ωF(Θ_p) + (F*M_p + M^{p+1}) Θ_F = Θ_F` checked in `J^p`.
    Window,
}

#[derive(Clone, Debug)]
pub struct StabilityReport {
    pub stable: bool,
    /// A monomial vector field outside the spanned space.
    pub witness: Option<VectorFieldJet>,
    pub jet_order_used: u32,
    pub method: StabilityMethod,
}

fn first_missing(s: &Subspace, ring: &Arc<RingSpec>) -> Option<VectorFieldJet> {
    let b = s.basis();
    let p = b.p();
    b.iter()
        .find(|(c, _, _)| !s.contains_column(*c))
        .map(|(_, m, j)| VectorFieldJet::unit(Polynomial::monomial(ring, m.clone()), j, p))
}

/// `tf(Θ_n) + ωf(Θ_p) = Θ_f`, decided in the window `J^p`.
pub fn infinitesimally_stable_window(f: &MapGerm) -> Result<StabilityReport> {
    let k = f.p() as u32;
    let basis = JetBasis::enumerate(f.n(), f.p(), k, 0)?;
    let mut s = Subspace::zero(&basis, f.ring());
    for g in [GroupId::A.extended(), GroupId::C] {
        for_each_generator(f, g, k, |v| {
            s.insert(&v).expect("generator in window");
        });
    }
    let witness = first_missing(&s, f.ring());
    Ok(StabilityReport { stable: witness.is_none(), witness, jet_order_used: k, method: StabilityMethod::Window })
}

/// Stability through the local algebra of the rank-zero core; `None` if no
/// finiteness certificate is found below the cutoff.
pub fn infinitesimally_stable_reduced(f: &MapGerm, cutoff: u32) -> Result<Option<StabilityReport>> {
    let rc = rank_zero_core(f, cutoff)?;
    let d = match delta(&rc.core, cutoff) {
        Ok(d) => d,
        Err(Error::NotFinite { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let k = d.k_cert;
    let ring = rc.core.ring().clone();
    let n = ring.nvars();
    let p = f.p();
    let basis = JetBasis::enumerate(n, p, k, 0)?;
    let mut s = Subspace::zero(&basis, &ring);
    let comps: Vec<Polynomial> =
        f.components().iter().map(|c| c.compose_truncated(&rc.substitution, k)).collect::<std::result::Result<_, _>>()?;
    for i in 0..f.n() {
        let d: Vec<Polynomial> = f
            .components()
            .iter()
            .map(|c| c.partial_derivative(i).compose_truncated(&rc.substitution, k))
            .collect::<std::result::Result<_, _>>()?;
        for a in Monomial::up_to(n, 0, k) {
            let v = VectorFieldJet::new(d.iter().map(|c| c.monomial_mul_truncated(&a, k)).collect());
            if !v.is_zero() {
                s.insert(&v)?;
            }
        }
    }
    for a in Monomial::up_to(n, 0, k) {
        for c in &comps {
            let h = c.monomial_mul_truncated(&a, k);
            if !h.is_zero() {
                for j in 0..p {
                    s.insert(&VectorFieldJet::unit(h.clone(), j, p))?;
                }
            }
        }
    }
    for j in 0..p {
        s.insert(&VectorFieldJet::unit(Polynomial::one(&ring), j, p))?;
    }
    let witness = first_missing(&s, &ring).map(|w| {
        // kept variables are variables of f
        VectorFieldJet::new(w.components.iter().map(|c| c.embed(f.ring(), &rc.kept_vars)).collect())
    });
    Ok(Some(StabilityReport {
        stable: witness.is_none(),
        witness,
        jet_order_used: k,
        method: StabilityMethod::LocalAlgebra,
    }))
}

/// Infinitesimal stability of a monogerm.
pub fn infinitesimally_stable(f: &MapGerm) -> Result<StabilityReport> {
    match infinitesimally_stable_reduced(f, DEFAULT_CUTOFF)? {
        Some(r) => Ok(r),
        None => infinitesimally_stable_window(f),
    }
}

fn fresh_prefix(ring: &RingSpec, r: usize) -> String {
    for pre in ["u", "v", "w", "s", "uu"] {
        let clash = (1..=r).any(|i| {
            let name = format!("{pre}{i}");
            ring.var_index(&name).is_some() || ring.parameter() == Some(name.as_str())
        });
        if !clash {
            return pre.to_string();
        }
    }
    "unf".to_string()
}

/// `(f + Σ u_i σ_i, u)` with the `σ_i` from a basis of `Nf`.
pub fn unfold(f: &MapGerm, sigmas: &[VectorFieldJet]) -> Result<MapGerm> {
    let r = sigmas.len();
    let pre = fresh_prefix(f.ring(), r);
    let mut names: Vec<String> = f.ring().variables().to_vec();
    names.extend((1..=r).map(|i| format!("{pre}{i}")));
    let ring = f.ring().with_variables(names)?;
    let n = f.n();
    let map: Vec<usize> = (0..n).collect();
    let mut comps: Vec<Polynomial> = f.components().iter().map(|c| c.embed(&ring, &map)).collect();
    for (i, s) in sigmas.iter().enumerate() {
        if s.p() != f.p() {
            return Err(Error::DimensionMismatch { expected: f.p(), found: s.p() });
        }
        let u = Polynomial::var(&ring, n + i);
        for (j, c) in s.components.iter().enumerate() {
            if !c.is_zero() {
                comps[j] = &comps[j] + &(&u * &c.embed(&ring, &map));
            }
        }
    }
    for i in 0..r {
        comps.push(Polynomial::var(&ring, n + i));
    }
    MapGerm::new(&ring, comps)
}

/// The stable unfolding built from [`normal_space_nf`]; its stability is
/// checked before returning.
pub fn stable_unfolding(f: &MapGerm, cutoff: u32) -> Result<MapGerm> {
    let sig = normal_space_nf(f, cutoff)?;
    let big = unfold(f, &sig)?;
    let rep = match infinitesimally_stable_reduced(&big, cutoff)? {
        Some(r) => r,
        None => infinitesimally_stable_window(&big)?,
    };
    if !rep.stable {
        return Err(Error::Invariant(format!(
            "unfolding {} is not infinitesimally stable (witness {})",
            big.display(),
            rep.witness.map(|w| w.display_basis()).unwrap_or_default()
        )));
    }
    Ok(big)
}

#[derive(Clone, Debug, Serialize)]
pub struct FstReport {
    pub fst: bool,
    /// The certificate search ended at the cutoff without a decision.
    pub undecided: bool,
    pub ke_codim: Option<usize>,
    pub cutoff: u32,
}

/// Finite singularity type, i.e. finite `𝒦_e`-codimension.
pub fn is_fst(f: &MapGerm, cutoff: u32) -> Result<FstReport> {
    match stabilized_codim(f, GroupId::K.extended(), cutoff) {
        Ok(c) => Ok(FstReport { fst: true, undecided: false, ke_codim: Some(c.value), cutoff }),
        Err(Error::Undecided { .. }) => Ok(FstReport { fst: false, undecided: true, ke_codim: None, cutoff }),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug)]
pub struct AeCodim {
    pub ae: CodimResult,
    pub a: CodimResult,
}

/// Stabilized `𝒜_e`-codimension, with the ordinary `𝒜`-codimension and,
/// for germs that are not stable, the check `𝒜_e-cod = 𝒜-cod + (p - n) - p`.
/// Stable germs are exempt: `(x, y²)` has `𝒜_e`-cod 0 and `𝒜`-cod 1.
pub fn ae_codimension(f: &MapGerm, cutoff: u32) -> Result<AeCodim> {
    let ae = stabilized_codim(f, GroupId::A.extended(), cutoff)?;
    let a = stabilized_codim(f, GroupId::A, cutoff)?;
    if ae.value > 0 && a.value as i64 - f.n() as i64 != ae.value as i64 {
        return Err(Error::Invariant(format!(
            "A_e-codim {} and A-codim {} violate A_e = A - n with n = {}",
            ae.value,
            a.value,
            f.n()
        )));
    }
    Ok(AeCodim { ae, a })
}

/// `F_λ(x, u) = (f_λ(x) + Σ u_j σ_j(x), u)` together with the modulus
/// direction `σ_m`.
#[derive(Clone, Debug)]
pub struct UnimodularNormalForm {
    pub pair: (usize, usize),
    pub core: MapGerm,
    pub sigmas: Vec<VectorFieldJet>,
    pub sigma_m: VectorFieldJet,
    pub unfolding: MapGerm,
}

impl UnimodularNormalForm {
    pub fn new(pair: (usize, usize), core: MapGerm, sigmas: Vec<VectorFieldJet>, sigma_m: VectorFieldJet) -> Result<Self> {
        let unfolding = unfold(&core, &sigmas)?;
        if sigma_m.p() != core.p() {
            return Err(Error::DimensionMismatch { expected: core.p(), found: sigma_m.p() });
        }
        Ok(UnimodularNormalForm { pair, core, sigmas, sigma_m, unfolding })
    }

    /// Specialize the modulus, checking the excluded locus and `𝒦`-finiteness
    /// of the core.
    pub fn at(&self, v: &BigRational, cutoff: u32) -> Result<UnimodularNormalForm> {
        let core = self.core.specialize(v)?;
        if let Err(Error::Undecided { .. }) = stabilized_codim(&core, GroupId::K, cutoff) {
            return Err(Error::NotFst { cutoff });
        }
        let r = core.ring().clone();
        let sp = |w: &VectorFieldJet| -> Result<VectorFieldJet> {
            Ok(VectorFieldJet::new(
                w.components.iter().map(|c| c.specialize(v, &r)).collect::<std::result::Result<_, _>>()?,
            ))
        };
        let sigmas = self.sigmas.iter().map(sp).collect::<Result<Vec<_>>>()?;
        let sigma_m = sp(&self.sigma_m)?;
        UnimodularNormalForm::new(self.pair, core, sigmas, sigma_m)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OpenOrbitReport {
    pub passed: bool,
    /// Indices (0-based) of the memberships that failed.
    pub failures: Vec<String>,
    /// Jet order of the window the memberships were decided in.
    pub window: u32,
    /// The window is exact because everything is weighted homogeneous.
    pub exact: bool,
    pub full: bool,
}

/// Grading shift and standard-degree window for weighted homogeneous data;
/// `None` if some input is not weighted homogeneous for the weights of `f`.
fn graded_window(f: &MapGerm, targets: &[&VectorFieldJet], extra: &[&VectorFieldJet]) -> Option<u32> {
    let t = weighted_homogeneous_type(f)?;
    let w = &t.weights;
    let d = &t.degrees;
    let wmin = w.iter().min()?.clone();
    let deg_of = |v: &VectorFieldJet| -> Option<Option<BigRational>> {
        let mut out: Option<BigRational> = None;
        for (j, c) in v.components.iter().enumerate() {
            for m in c.terms().keys() {
                let x = m.exponents().iter().zip(w).fold(-d[j].clone(), |a, (&e, wi)| a + wi * BigRational::from_integer(e.into()));
                match &out {
                    None => out = Some(x),
                    Some(y) if *y == x => {}
                    Some(_) => return None,
                }
            }
        }
        Some(out)
    };
    for v in extra {
        deg_of(v)?;
    }
    let mut top = 0u32;
    for v in targets {
        let Some(dv) = deg_of(v)? else { continue };
        for dj in d {
            let q = (&dv + dj) / &wmin;
            let fl = q.floor().to_integer();
            let fl: u32 = fl.try_into().ok()?;
            top = top.max(fl);
        }
    }
    Some(top.max(1))
}

/// Condition (i₀): `f_i σ_m ∈ f*(M_t){σ_j} + tf(M_s Θ_s) + ωf(M_t Θ_t)`
/// for every component `f_i` of the core, decided in the core variables.
pub fn open_orbit_test(nf: &UnimodularNormalForm, cutoff: u32) -> Result<OpenOrbitReport> {
    let f = &nf.core;
    let p = f.p();
    let targets: Vec<VectorFieldJet> =
        f.components().iter().map(|fi| VectorFieldJet::new(nf.sigma_m.components.iter().map(|c| c * fi).collect())).collect();
    let tref: Vec<&VectorFieldJet> = targets.iter().collect();
    let extra: Vec<&VectorFieldJet> = nf.sigmas.iter().collect();
    let (k, exact) = match graded_window(f, &tref, &extra) {
        Some(k) => (k, true),
        None => (cutoff, false),
    };
    let basis = JetBasis::enumerate(f.n(), p, k, 1)?;
    let mut s = Subspace::zero(&basis, f.ring());
    for_each_generator(f, GroupId::A, k, |v| {
        s.insert(&v).expect("generator in window");
    });
    for (_, h) in pullback_monomials(f, 1, k) {
        for sg in &nf.sigmas {
            let v = sg.mul_poly_truncated(&h, k);
            if !v.is_zero() {
                s.insert(&v)?;
            }
        }
    }
    let mut failures = Vec::new();
    for (i, t) in targets.iter().enumerate() {
        if !s.contains(&t.truncate(k))? {
            failures.push(format!("f{}*sigma_m", i + 1));
        }
    }
    Ok(OpenOrbitReport { passed: failures.is_empty(), failures, window: k, exact, full: false })
}

/// Conditions (i) and (ii) in the variables of `F_λ`: `f̃_i σ_m` and
/// `u_j σ_m` in `T_F + F*(M_p^2) Ψ_F`, where `Ψ_F` are fields with zero
/// `u`-components and `T_F = F*(M_p){σ_j} + tF(M Ψ) + ωF(M Ψ)`. Large.
pub fn open_orbit_test_full(nf: &UnimodularNormalForm, cutoff: u32) -> Result<OpenOrbitReport> {
    let big = &nf.unfolding;
    let s_vars = nf.core.n();
    let t = nf.core.p();
    let r = nf.sigmas.len();
    let ring = big.ring().clone();
    let n = big.n();
    let map: Vec<usize> = (0..s_vars).collect();
    let lift = |v: &VectorFieldJet| VectorFieldJet::new(v.components.iter().map(|c| c.embed(&ring, &map)).collect());
    let ftilde: Vec<Polynomial> = big.components()[..t].to_vec();
    let sm = lift(&nf.sigma_m);
    let mut targets: Vec<(String, VectorFieldJet)> = Vec::new();
    for (i, fi) in ftilde.iter().enumerate() {
        targets.push((format!("f{}*sigma_m", i + 1), VectorFieldJet::new(sm.components.iter().map(|c| c * fi).collect())));
    }
    for j in 0..r {
        let u = Polynomial::var(&ring, s_vars + j);
        targets.push((format!("u{}*sigma_m", j + 1), VectorFieldJet::new(sm.components.iter().map(|c| c * &u).collect())));
    }
    let tref: Vec<&VectorFieldJet> = targets.iter().map(|(_, v)| v).collect();
    let lifted: Vec<VectorFieldJet> = nf.sigmas.iter().map(lift).collect();
    // F restricted to its first t components carries the grading of Ψ_F
    let ft = MapGerm::new(&ring, ftilde.clone())?;
    let ext: Vec<&VectorFieldJet> = lifted.iter().collect();
    let (k, exact) = match graded_window(&ft, &tref, &ext) {
        Some(k) => (k, true),
        None => (cutoff, false),
    };
    let basis = JetBasis::enumerate(n, t, k, 1)?;
    let mut s = Subspace::zero(&basis, &ring);
    let fpull = pullback_monomials(big, 1, k);
    // F*(M_p){σ_j}
    for (_, h) in &fpull {
        for sg in &lifted {
            let v = sg.mul_poly_truncated(h, k);
            if !v.is_zero() {
                s.insert(&v)?;
            }
        }
    }
    // tF(M Ψ): x^α ∂F/∂x_i restricted to the first t components, x-directions only
    let partials: Vec<VectorFieldJet> = (0..s_vars)
        .map(|i| VectorFieldJet::new(ftilde.iter().map(|c| c.partial_derivative(i)).collect()))
        .collect();
    for a in Monomial::up_to(n, 1, k) {
        for d in &partials {
            let v = VectorFieldJet::new(d.components.iter().map(|c| c.monomial_mul_truncated(&a, k)).collect());
            if !v.is_zero() {
                s.insert(&v)?;
            }
        }
    }
    // ωF(M Ψ) and F*(M_p^2) Ψ_F
    for (b, h) in &fpull {
        for j in 0..t {
            s.insert(&VectorFieldJet::unit(h.clone(), j, t))?;
        }
        if b.degree() >= 2 {
            for a in Monomial::up_to(n, 1, k) {
                let g = h.monomial_mul_truncated(&a, k);
                if g.is_zero() {
                    continue;
                }
                for j in 0..t {
                    s.insert(&VectorFieldJet::unit(g.clone(), j, t))?;
                }
            }
        }
    }
    let mut failures = Vec::new();
    for (name, v) in &targets {
        if !s.contains(&v.truncate(k))? {
            failures.push(name.clone());
        }
    }
    Ok(OpenOrbitReport { passed: failures.is_empty(), failures, window: k, exact, full: true })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum PlaneGermType {
    Regular,
    Fold,
    Cusp,
    NotGood,
    GoodHigher,
}

/// Whitney's classification of a plane-to-plane germ at the origin.
pub fn plane_germ_type(f: &MapGerm) -> Result<PlaneGermType> {
    if f.n() != 2 || f.p() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: if f.n() != 2 { f.n() } else { f.p() } });
    }
    let jm = f.jacobian();
    let jac = &(&jm[0][0] * &jm[1][1]) - &(&jm[0][1] * &jm[1][0]);
    if !jac.constant_term().is_zero() {
        return Ok(PlaneGermType::Regular);
    }
    let jx = jac.partial_derivative(0).constant_term();
    let jy = jac.partial_derivative(1).constant_term();
    if jx.is_zero() && jy.is_zero() {
        return Ok(PlaneGermType::NotGood);
    }
    // parametrize {J = 0} as t -> (t, y(t)) or (x(t), t)
    const ORDER: u32 = 4;
    let tname = if f.ring().parameter() == Some("t") { "s" } else { "t" };
    let line = f.ring().with_variables(vec![tname.to_string()])?;
    let t = Polynomial::var(&line, 0);
    let (solve, lead) = if !jy.is_zero() { (1usize, jy) } else { (0usize, jx) };
    let mut subs = vec![Polynomial::zero(&line), Polynomial::zero(&line)];
    subs[1 - solve] = t.clone();
    let inv = lead.inv();
    for _ in 0..=ORDER {
        let val = jac.compose_truncated(&subs, ORDER)?;
        if val.is_zero() {
            break;
        }
        subs[solve] = &subs[solve] - &val.scalar_mul(&inv);
    }
    let comp: Vec<Polynomial> =
        f.components().iter().map(|c| c.compose_truncated(&subs, ORDER)).collect::<std::result::Result<_, _>>()?;
    let coeff = |d: u32| comp.iter().any(|c| !c.coeff(&Monomial::new(vec![d as u16])).is_zero());
    Ok(if coeff(1) {
        PlaneGermType::Fold
    } else if coeff(2) {
        PlaneGermType::Cusp
    } else {
        PlaneGermType::GoodHigher
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_vector_field;

    fn germ(vars: &[&str], comps: &[&str]) -> MapGerm {
        MapGerm::parse(&RingSpec::rational(vars), comps).unwrap()
    }

    #[test]
    fn stability_examples() {
        for (f, want) in [
            (germ(&["x", "y"], &["x", "y^3+x*y"]), true),
            (germ(&["x", "y"], &["x", "y^3"]), false),
            (germ(&["x", "y"], &["x^2", "y"]), true),
            (germ(&["x"], &["x^2"]), true),
            (germ(&["x"], &["x^3"]), false),
        ] {
            let a = infinitesimally_stable(&f).unwrap();
            let b = infinitesimally_stable_window(&f).unwrap();
            assert_eq!(a.stable, want, "{f:?}");
            assert_eq!(b.stable, want, "{f:?}");
            assert_eq!(a.witness.is_some(), !want);
        }
    }

    #[test]
    fn witness_is_outside() {
        let f = germ(&["x", "y"], &["x", "y^3"]);
        let r = infinitesimally_stable_window(&f).unwrap();
        let w = r.witness.unwrap();
        let basis = JetBasis::enumerate(2, 2, 2, 0).unwrap();
        let mut s = Subspace::zero(&basis, f.ring());
        for g in [GroupId::A.extended(), GroupId::C] {
            for_each_generator(&f, g, 2, |v| {
                s.insert(&v).unwrap();
            });
        }
        assert!(!s.contains(&w).unwrap());
    }

    #[test]
    fn a_k_unfoldings() {
        let r = RingSpec::rational(&["x"]);
        for k in 1..5u32 {
            let f = MapGerm::parse(&r, &[&format!("x^{}", k + 1)]).unwrap();
            let big = stable_unfolding(&f, 12).unwrap();
            assert_eq!(big.n(), k as usize);
            assert!(infinitesimally_stable_window(&big).unwrap().stable);
        }
        let s = MapGerm::parse(&r, &["x"]).unwrap();
        assert_eq!(stable_unfolding(&s, 4).unwrap(), s);
    }

    #[test]
    fn b22_unfolding() {
        let f = germ(&["x", "y"], &["x^2+y^2", "x*y"]);
        let big = stable_unfolding(&f, 12).unwrap();
        let want = germ(&["x", "y", "u1", "u2"], &["x^2+y^2+u1*x+u2*y", "x*y", "u1", "u2"]);
        assert_eq!(big.display(), want.display());
    }

    #[test]
    fn fst_and_ae() {
        assert!(is_fst(&germ(&["x", "y"], &["x", "y"]), 6).unwrap().fst);
        let g = is_fst(&germ(&["x", "y"], &["x^4+2*x^2*y^2+y^4"]), 6).unwrap();
        assert!(!g.fst && g.undecided);
        let c = ae_codimension(&germ(&["x", "y"], &["x", "y^3+x*y"]), 8).unwrap();
        assert_eq!(c.ae.value, 0);
        assert_eq!(ae_codimension(&germ(&["x"], &["x^2"]), 8).unwrap().ae.value, 0);
        // lips
        assert_eq!(ae_codimension(&germ(&["x", "y"], &["x", "y^3+x^2*y"]), 8).unwrap().ae.value, 1);
        // non-isolated instability
        assert!(matches!(ae_codimension(&germ(&["x", "y"], &["x", "y^3"]), 6), Err(Error::Undecided { .. })));
    }

    #[test]
    fn plane_germs() {
        let cases = [
            (vec!["x^2", "y"], PlaneGermType::Fold),
            (vec!["x*y-x^3", "y"], PlaneGermType::Cusp),
            (vec!["x", "y^3"], PlaneGermType::NotGood),
            (vec!["x+y^2", "y"], PlaneGermType::Regular),
        ];
        for (c, want) in cases {
            assert_eq!(plane_germ_type(&germ(&["x", "y"], &c)).unwrap(), want);
        }
    }

    #[test]
    fn thom_open_orbit() {
        let r = RingSpec::with_param(&["x", "y", "z"], "l");
        let f = MapGerm::parse(&r, &["x^2+l*y*z", "y^2+l*x*z", "z^2+l*x*y"]).unwrap();
        let sig: Vec<VectorFieldJet> = ["y*e1", "z*e1", "x*e2", "z*e2", "x*e3", "y*e3"]
            .iter()
            .map(|s| VectorFieldJet::new(parse_vector_field(s, &r, 3).unwrap()))
            .collect();
        let sm = VectorFieldJet::new(parse_vector_field("y*z*e1 + x*z*e2 + x*y*e3", &r, 3).unwrap());
        let nf = UnimodularNormalForm::new((9, 9), f, sig, sm).unwrap();
        let at3 = nf.at(&BigRational::from_integer(3.into()), 12).unwrap();
        let rep = open_orbit_test(&at3, 12).unwrap();
        assert!(rep.exact);
        assert!(rep.passed, "{:?}", rep.failures);
        assert!(matches!(nf.at(&BigRational::from_integer((-1).into()), 12), Err(Error::NotFst { .. })));
    }
}
