//! Acceptance criteria 1 to 12. Each test prints one `criterion N: PASS` or
//! `criterion N: FAIL` line (bypassing output capture) before asserting.
//! Criterion 12 is slow and ignored by default; run it with
//! `cargo test -p germkit --test acceptance -- --ignored`.

use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use num_rational::BigRational;

use germkit::atlas::{unimodular_normal_form, verify_table, Status, TableId};
use germkit::determinacy::stabilized_codim;
use germkit::nicedim::{classify_pair, sigma, NiceClass, Sigma};
use germkit::poly::parse_polynomial;
use germkit::stability::{ae_codimension, infinitesimally_stable, open_orbit_test, plane_germ_type, stable_unfolding, PlaneGermType};
use germkit::tangent::{delta, is_normal_basis, jacobian_class};
use germkit::triviality::{ideal_power_product_equals, lipschitz_control_certificate, power_subset_ideal, Family, Positivity};
use germkit::{Error, GroupId, MapGerm, Monomial, Polynomial, RingSpec, VectorFieldJet, ZPoly};

mod common;

const CUTOFF: u32 = 12;

fn report(n: u32, start: Instant, outcome: Result<String, String>) {
    let secs = start.elapsed().as_secs_f64();
    let line = match &outcome {
        Ok(msg) => format!("\ncriterion {n}: PASS ({secs:.1}s) {msg}\n"),
        Err(msg) => format!("\ncriterion {n}: FAIL ({secs:.1}s) {msg}\n"),
    };
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
    if let Err(msg) = outcome {
        panic!("criterion {n}: {msg}");
    }
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

fn thom_ring() -> Arc<RingSpec> {
    RingSpec::with_param(&["x", "y", "z"], "l")
}

fn thom() -> MapGerm {
    MapGerm::parse(&thom_ring(), &["x^2+l*y*z", "y^2+l*x*z", "z^2+l*x*y"]).unwrap()
}

fn polys(ring: &Arc<RingSpec>, texts: &[&str]) -> Vec<Polynomial> {
    texts.iter().map(|s| parse_polynomial(s, ring).unwrap()).collect()
}

fn specialize_all(ps: &[Polynomial], v: &BigRational) -> Vec<Polynomial> {
    let r = ps[0].ring().without_parameter();
    ps.iter().map(|p| p.specialize(v, &r).unwrap()).collect()
}

fn err(e: impl ToString) -> String {
    e.to_string()
}

#[test]
fn criterion_01_thom_family_codim_and_locus() {
    let t = Instant::now();
    let run = || -> Result<String, String> {
        let c = stabilized_codim(&thom(), GroupId::K, CUTOFF).map_err(err)?;
        if c.value != 10 {
            return Err(format!("K-codim {}, expected 10", c.value));
        }
        // l * (l^3 + 8) * (l^3 - 1)
        let printed = ZPoly::from_i64s(&[0, 1]).mul(&ZPoly::from_i64s(&[8, 0, 0, 1])).mul(&ZPoly::from_i64s(&[-1, 0, 0, 1]));
        let names: Vec<String> = c.exceptional_pivots.iter().map(|p| p.display_with("l")).collect();
        let outside: Vec<String> = c.exceptional_pivots.iter().filter(|p| !p.factors_divide(&printed)).map(|p| p.display_with("l")).collect();
        if outside.is_empty() {
            Ok(format!("K-codim 10, exceptional factors [{}]", names.join(", ")))
        } else {
            Err(format!("K-codim 10, but exceptional factors [{}] do not divide l*(l^3+8)*(l^3-1)", outside.join(", ")))
        }
    };
    report(1, t, run());
}

#[test]
fn criterion_02_thom_local_algebra() {
    let t = Instant::now();
    let run = || -> Result<String, String> {
        let d = delta(&thom(), CUTOFF).map_err(err)?;
        if d.delta != 8 || d.hilbert.dims_by_degree != [1, 3, 3, 1] {
            return Err(format!("delta {} with graded dims {:?}", d.delta, d.hilbert.dims_by_degree));
        }
        for f in [thom(), thom().specialize(&q(3)).map_err(err)?] {
            let j = jacobian_class(&f, CUTOFF).map_err(err)?;
            let xyz = j.algebra.normal_form(&Polynomial::monomial(f.ring(), Monomial::new(vec![1, 1, 1]))).map_err(err)?;
            let (m, c) = xyz.terms().iter().next().ok_or("xyz vanishes in Q(f)")?;
            let ratio = &j.class.coeff(m) / c;
            if ratio.is_zero() || j.class != xyz.scalar_mul(&ratio) {
                return Err(format!("Jacobian class {} is not a multiple of {}", j.class.display(), xyz.display()));
            }
        }
        Ok("delta 8, graded dims (1,3,3,1), det df is a nonzero multiple of xyz in Q(f)".into())
    };
    report(2, t, run());
}

#[test]
fn criterion_03_f1_lambda_codim() {
    let t = Instant::now();
    let run = || -> Result<String, String> {
        let f = MapGerm::parse(&thom_ring(), &["x^2+l*y*z", "y^2+l*x*z", "z^2+l*x*y", "x*y*z"]).map_err(err)?;
        let c = stabilized_codim(&f, GroupId::K, CUTOFF).map_err(err)?;
        if c.value == 16 {
            Ok("K-codim 16".into())
        } else {
            Err(format!("K-codim {}, expected 16", c.value))
        }
    };
    report(3, t, run());
}

#[test]
fn criterion_04_atlas_tables() {
    let t = Instant::now();
    let run = || -> Result<String, String> {
        let mut rows = 0;
        for table in [TableId::StableNp8, TableId::Bnd99] {
            let reports = verify_table(table, CUTOFF).map_err(err)?;
            for r in &reports {
                if r.status != Status::Pass {
                    let bad: Vec<String> =
                        r.checks.iter().filter(|c| c.status != Status::Pass).map(|c| format!("{}: {} vs {}", c.invariant, c.expected, c.computed)).collect();
                    return Err(format!("{} {} {:?}: {}", table.as_str(), r.name, r.params, bad.join("; ")));
                }
            }
            rows += reports.len();
        }
        Ok(format!("{rows} sampled rows pass"))
    };
    report(4, t, run());
}

#[test]
fn criterion_05_sigma_and_boundary_pairs() {
    let t = Instant::now();
    let run = || -> Result<String, String> {
        let checked = common::sigma_partition(40)?;
        let pins = [((9, 9), 9), ((10, 7), 10), ((2, 5), 31)];
        for ((n, p), s) in pins {
            if sigma(n, p) != Sigma::Finite(s) {
                return Err(format!("sigma({n},{p}) = {}, expected {s}", sigma(n, p)));
            }
        }
        if classify_pair(8, 8).class != NiceClass::Nice || classify_pair(9, 9).class != NiceClass::BoundaryNice {
            return Err("(8,8) or (9,9) misclassified".into());
        }
        Ok(format!("{checked} pairs agree with the boundary oracle"))
    };
    report(5, t, run());
}

fn at_u_zero(c: &Polynomial, f: &MapGerm) -> Polynomial {
    let n = f.n();
    let terms = c.terms().iter().filter(|(m, _)| m.exponents()[n..].iter().all(|&e| e == 0));
    Polynomial::from_terms(f.ring(), terms.map(|(m, s)| (Monomial::new(m.exponents()[..n].to_vec()), s.clone())))
}

/// `F(x, 0) = f`, `∂F/∂u_i` are the components of a normal basis, the
/// trailing components are the `u_i`, and `F` is stable.
fn unfolding_shape(f: &MapGerm, big: &MapGerm) -> Result<(), String> {
    let (n, p) = (f.n(), f.p());
    let r = big.n() - n;
    if big.p() != p + r {
        return Err(format!("{} has the wrong target dimension", big.display()));
    }
    let ring = big.ring();
    for i in 0..r {
        if big.components()[p + i] != Polynomial::var(ring, n + i) {
            return Err(format!("component {} of {} is not u{}", p + i + 1, big.display(), i + 1));
        }
    }
    let mut sigmas = Vec::new();
    for i in 0..r {
        let d: Vec<Polynomial> = big.components()[..p].iter().map(|c| c.partial_derivative(n + i)).collect();
        if d.iter().any(|c| c.terms().keys().any(|m| m.exponents()[n..].iter().any(|&e| e > 0))) {
            return Err(format!("{} is not linear in u{}", big.display(), i + 1));
        }
        sigmas.push(VectorFieldJet::new(d.iter().map(|c| at_u_zero(c, f)).collect()));
    }
    let zero = big.components()[..p].iter().map(|c| at_u_zero(c, f));
    if !zero.eq(f.components().iter().cloned()) {
        return Err(format!("{} does not restrict to f", big.display()));
    }
    if !is_normal_basis(f, &sigmas, CUTOFF).map_err(err)? {
        return Err(format!("the u-directions of {} are not a normal basis", big.display()));
    }
    if !infinitesimally_stable(big).map_err(err)?.stable {
        return Err(format!("{} is not stable", big.display()));
    }
    Ok(())
}

#[test]
fn criterion_06_stable_unfoldings() {
    let t = Instant::now();
    let run = || -> Result<String, String> {
        let line = RingSpec::rational(&["x"]);
        for k in 1..=6usize {
            let f = MapGerm::parse(&line, &[&format!("x^{}", k + 1)]).map_err(err)?;
            let big = stable_unfolding(&f, CUTOFF).map_err(err)?;
            let us: Vec<String> = (1..k).map(|i| format!("u{i}")).collect();
            let mut vars = vec!["x"];
            vars.extend(us.iter().map(String::as_str));
            let mut first = format!("x^{}", k + 1);
            for (i, u) in us.iter().enumerate() {
                first.push_str(&format!("+{u}*x^{}", i + 1));
            }
            let mut comps = vec![first.as_str()];
            comps.extend(us.iter().map(String::as_str));
            let want = MapGerm::parse(&RingSpec::rational(&vars), &comps).map_err(err)?;
            if big.display() != want.display() {
                return Err(format!("A_{k}: got {}, expected {}", big.display(), want.display()));
            }
            unfolding_shape(&f, &big)?;
        }
        let plane = RingSpec::rational(&["x", "y"]);
        for core in ["x^2+y^2", "x^2-y^2"] {
            let f = MapGerm::parse(&plane, &[core, "x*y"]).map_err(err)?;
            let big = stable_unfolding(&f, CUTOFF).map_err(err)?;
            unfolding_shape(&f, &big)?;
        }
        Ok("A_1..A_6 and B_{2,2} unfoldings have the expected form and are stable".into())
    };
    report(6, t, run());
}

#[test]
fn criterion_07_plane_germs() {
    let t = Instant::now();
    let run = || -> Result<String, String> {
        let plane = RingSpec::rational(&["x", "y"]);
        for (comps, want) in [(["x^2", "y"], PlaneGermType::Fold), (["x*y-x^3", "y"], PlaneGermType::Cusp), (["x", "y^3"], PlaneGermType::NotGood)] {
            let f = MapGerm::parse(&plane, &comps).map_err(err)?;
            let got = plane_germ_type(&f).map_err(err)?;
            if got != want {
                return Err(format!("{} is {got:?}, expected {want:?}", f.display()));
            }
        }
        Ok("fold, cusp, not good".into())
    };
    report(7, t, run());
}

#[test]
fn criterion_08_ideal_containments() {
    let t = Instant::now();
    let run = || -> Result<String, String> {
        let i1 = polys(&thom_ring(), &["x^2+l*y*z", "y^2+l*x*z", "z^2+l*x*y", "x*y*z"]);
        let r4 = RingSpec::with_param(&["x", "y", "z", "w"], "l");
        let i2 = polys(&r4, &["x^2+y^2+z^2", "y^2+l*z^2+w^2", "x*y", "x*z", "x*w", "y*z", "y*w"]);
        let mut problems = Vec::new();
        for (name, gens, bad) in [("I1", &i1, vec![-2, 0, 1]), ("I2", &i2, vec![0, 1])] {
            let generic = power_subset_ideal(gens, 3).map_err(err)?;
            if !generic.holds || !generic.certificate.as_ref().is_some_and(|c| c.verify()) {
                problems.push(format!("M^3 in {name} fails generically"));
            }
            for v in -3..=3 {
                let c = power_subset_ideal(&specialize_all(gens, &q(v)), 3).map_err(err)?;
                let expect = !bad.contains(&v);
                if c.holds != expect {
                    problems.push(format!("M^3 in {name} at l={v}: {}", if c.holds { "holds" } else { "fails" }));
                }
                if c.certificate.as_ref().is_some_and(|c| !c.verify()) {
                    problems.push(format!("certificate for {name} at l={v} does not verify"));
                }
            }
        }
        let comps = thom().components().to_vec();
        if !ideal_power_product_equals(&comps, 2).map_err(err)? {
            problems.push("I*M^2 = M^4 fails generically".into());
        }
        if problems.is_empty() {
            Ok("containments hold generically, fail exactly at the listed values; I*M^2 = M^4".into())
        } else {
            Err(problems.join("; "))
        }
    };
    report(8, t, run());
}

#[test]
fn criterion_09_lipschitz_control() {
    let t = Instant::now();
    let run = || -> Result<String, String> {
        let fam = Family::modulus(thom()).map_err(err)?;
        let c = lipschitz_control_certificate(&fam, Some(&q(3))).map_err(err)?.ok_or("no certificate at l=3")?;
        let comps = specialize_all(thom().components(), &q(3));
        let deriv = specialize_all(&fam.derivative(), &q(3));
        if c.entry_degree != 4 || !c.verify(&comps, &deriv) || c.positivity != Positivity::Certified {
            return Err(format!("certificate at l=3 has entry degree {} and positivity {:?}", c.entry_degree, c.positivity));
        }
        match lipschitz_control_certificate(&fam, Some(&q(1))).map_err(err)? {
            None => Ok("certificate at l=3 with entries in M^4; none at l=1".into()),
            Some(c1) => Err(format!("a certificate exists at l=1 as well (positivity {:?})", c1.positivity)),
        }
    };
    report(9, t, run());
}

#[test]
fn criterion_10_open_orbit() {
    let t = Instant::now();
    let run = || -> Result<String, String> {
        for (pair, exceptional) in [((9, 9), vec![-2, -1, 0, 1, 2]), ((8, 6), vec![0, 1])] {
            let nf = unimodular_normal_form(pair, Some(&q(3)), CUTOFF).map_err(err)?;
            let rep = open_orbit_test(&nf, CUTOFF).map_err(err)?;
            if !rep.passed {
                return Err(format!("{pair:?} at l=3 fails: {:?}", rep.failures));
            }
            for v in exceptional {
                match unimodular_normal_form(pair, Some(&q(v)), CUTOFF) {
                    Err(Error::ExcludedParameter { .. }) => {}
                    other => return Err(format!("{pair:?} at l={v} not rejected: {:?}", other.map(|n| n.pair))),
                }
            }
        }
        Ok("(9,9) and (8,6) pass at l=3 and are rejected at exceptional values".into())
    };
    report(10, t, run());
}

#[test]
fn criterion_11_property_suites() {
    let t = Instant::now();
    let run = || -> Result<String, String> {
        let k = common::k_codim_linear_invariance(11)?;
        let e = common::euler_relation()?;
        if e < 20 {
            return Err(format!("only {e} weighted homogeneous samples"));
        }
        let n = common::nakayama_random(13, 50)?;
        let w = common::wilson_consistency()?;
        let r = common::truncation_and_leibniz_random(17, 64)?;
        Ok(format!("{k} linear changes, {e} Euler samples, {n} monomial ideals, {w} Wilson germs, {r} truncation and Leibniz cases"))
    };
    report(11, t, run());
}

#[test]
#[ignore = "slow tier"]
fn criterion_12_ae_codim_of_8_6_normal_form() {
    let t = Instant::now();
    let run = || -> Result<String, String> {
        let nf = unimodular_normal_form((8, 6), Some(&q(3)), CUTOFF).map_err(err)?;
        let c = ae_codimension(&nf.unfolding, CUTOFF).map_err(err)?;
        if c.ae.value == 1 {
            Ok(format!("A_e-codim 1 at jet order {}", c.ae.jet_order_used))
        } else {
            Err(format!("A_e-codim {}", c.ae.value))
        }
    };
    report(12, t, run());
}
