//! Classification tables as data, their verification, and table lookups.

mod template;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use num_rational::BigRational;
use serde::Serialize;

use crate::determinacy::{determinacy_bound, stabilized_codim};
use crate::error::{Error, Result};
use crate::jetspace::VectorFieldJet;
use crate::poly::{as_param_poly, parse_factors, parse_vector_field, ExcludedLocus, RingSpec, ZPoly};
use crate::stability::UnimodularNormalForm;
use crate::tangent::{corank, delta, is_normal_basis, rank_zero_core, GroupId, HilbertData, MapGerm};

pub use template::{expand, Assignment, Expr};

/// The shipped table data.
pub const ATLAS_DATA: &str = include_str!("../../data/atlas.txt");

/// Unbounded parameters are scanned this far above their lower bound when
/// solving for a dimension pair.
const UNBOUNDED_SCAN: i64 = 256;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum TableId {
    #[serde(rename = "StableNP8")]
    StableNp8,
    #[serde(rename = "BND99")]
    Bnd99,
    #[serde(rename = "BND_6p9")]
    Bnd6p9,
    #[serde(rename = "BND_6t2")]
    Bnd6t2,
    #[serde(rename = "BND_ngtp")]
    BndNgtp,
    #[serde(rename = "Bimodal107")]
    Bimodal107,
}

impl TableId {
    pub const ALL: [TableId; 6] =
        [TableId::StableNp8, TableId::Bnd99, TableId::Bnd6p9, TableId::Bnd6t2, TableId::BndNgtp, TableId::Bimodal107];

    pub fn as_str(self) -> &'static str {
        match self {
            TableId::StableNp8 => "StableNP8",
            TableId::Bnd99 => "BND99",
            TableId::Bnd6p9 => "BND_6p9",
            TableId::Bnd6t2 => "BND_6t2",
            TableId::BndNgtp => "BND_ngtp",
            TableId::Bimodal107 => "Bimodal107",
        }
    }

    /// Tables of unimodular boundary families with stable normal forms.
    pub fn is_unimodular(self) -> bool {
        matches!(self, TableId::Bnd6p9 | TableId::Bnd6t2 | TableId::BndNgtp)
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TableId::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Atlas(format!("unknown table '{s}'")))
    }
}

#[derive(Clone, Debug)]
pub struct ParamRange {
    pub name: String,
    pub lo: Expr,
    pub hi: Option<Expr>,
}

#[derive(Clone, Debug)]
pub struct Expected {
    pub kcod: Expr,
    pub corank: Expr,
    pub delta: Option<Expr>,
}

#[derive(Clone, Debug)]
pub struct UnfoldingData {
    pub sigma: String,
    pub r: Expr,
    pub sigma_m: String,
}

/// One table row, parametrized.
#[derive(Clone, Debug)]
pub struct AtlasEntry {
    pub table_id: TableId,
    pub name: String,
    pub sing_type: Option<String>,
    pub vars: String,
    pub params: Vec<ParamRange>,
    pub signs: Vec<String>,
    pub constraints: Vec<Expr>,
    pub conditions: Option<String>,
    pub modulus: Option<String>,
    pub exclude: Option<String>,
    pub map: String,
    pub expected: Expected,
    pub pair: Option<(Expr, Expr)>,
    pub unfolding: Option<UnfoldingData>,
    pub notes: Vec<String>,
    /// Line of the record in the data file.
    pub line: usize,
}

/// An entry with its integer parameters fixed.
#[derive(Clone, Debug)]
pub struct Instance {
    pub params: Assignment,
    pub germ: MapGerm,
    pub kcod: i64,
    pub corank: i64,
    pub delta: Option<i64>,
    pub pair: Option<(usize, usize)>,
    pub sigmas: Option<Vec<VectorFieldJet>>,
    pub r: Option<i64>,
    pub sigma_m: Vec<VectorFieldJet>,
}

impl AtlasEntry {
    fn err(&self, msg: impl fmt::Display) -> Error {
        Error::Atlas(format!("{} {} (line {}): {msg}", self.table_id, self.name, self.line))
    }

    fn expand(&self, t: &str, a: &Assignment) -> Result<String> {
        expand(t, a, &self.signs).map_err(|e| self.err(e))
    }

    fn eval(&self, e: &Expr, a: &Assignment) -> Result<i64> {
        e.eval(a).map_err(|m| self.err(m))
    }

    /// All parameter assignments satisfying the ranges and constraints, in
    /// lexicographic order; unbounded parameters take their first two values.
    pub fn instances(&self) -> Result<Vec<Assignment>> {
        self.assignments(1)
    }

    fn assignments(&self, unbounded: i64) -> Result<Vec<Assignment>> {
        let mut out = vec![Assignment::new()];
        for pr in &self.params {
            let mut next = Vec::new();
            for a in &out {
                let lo = self.eval(&pr.lo, a)?;
                let hi = match &pr.hi {
                    Some(h) => self.eval(h, a)?,
                    None => lo + unbounded,
                };
                for v in lo..=hi {
                    let mut b = a.clone();
                    b.insert(pr.name.clone(), v);
                    next.push(b);
                }
            }
            out = next;
        }
        for s in &self.signs {
            out = out
                .into_iter()
                .flat_map(|a| {
                    [1, -1].into_iter().map(move |v| {
                        let mut b = a.clone();
                        b.insert(s.clone(), v);
                        b
                    })
                })
                .collect();
        }
        let mut kept = Vec::new();
        for a in out {
            let mut ok = true;
            for c in &self.constraints {
                ok &= self.eval(c, &a)? != 0;
            }
            if ok {
                kept.push(a);
            }
        }
        Ok(kept)
    }

    /// The first and last instance (one if there is only one).
    pub fn samples(&self) -> Result<Vec<Assignment>> {
        let all = self.instances()?;
        let mut out: Vec<Assignment> = all.first().into_iter().cloned().collect();
        if all.len() > 1 {
            out.push(all[all.len() - 1].clone());
        }
        Ok(out)
    }

    /// Ring of the instance: variables, modulus and printed excluded locus.
    pub fn ring(&self, a: &Assignment) -> Result<Arc<RingSpec>> {
        let vars: Vec<String> = self.expand(&self.vars, a)?.split_whitespace().map(str::to_string).collect();
        let base = RingSpec::new(vars, self.modulus.clone(), None)?;
        let Some(ex) = &self.exclude else { return Ok(base) };
        let factors = parse_factors(&self.expand(ex, a)?, &base)?;
        let z: Vec<ZPoly> = factors
            .iter()
            .map(|f| as_param_poly(f).ok_or_else(|| self.err("excluded locus involves source variables")))
            .collect::<Result<_>>()?;
        Ok(base.with_excluded(Some(ExcludedLocus::new(z)?))?)
    }

    fn fields(&self, text: &str, ring: &Arc<RingSpec>, p: usize) -> Result<Vec<VectorFieldJet>> {
        text.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| Ok(VectorFieldJet::new(parse_vector_field(s, ring, p)?)))
            .collect()
    }

    pub fn instantiate(&self, a: &Assignment) -> Result<Instance> {
        let ring = self.ring(a)?;
        let map = self.expand(&self.map, a)?;
        let comps: Vec<&str> = map.split(';').map(str::trim).filter(|s| !s.is_empty()).collect();
        let germ = MapGerm::parse(&ring, &comps)?;
        let p = germ.p();
        let pair = match &self.pair {
            Some((n, q)) => {
                let (n, q) = (self.eval(n, a)?, self.eval(q, a)?);
                Some((usize::try_from(n).map_err(|_| self.err("bad pair"))?, usize::try_from(q).map_err(|_| self.err("bad pair"))?))
            }
            None => None,
        };
        let (sigmas, r, sigma_m) = match &self.unfolding {
            Some(u) => (
                Some(self.fields(&self.expand(&u.sigma, a)?, &ring, p)?),
                Some(self.eval(&u.r, a)?),
                self.fields(&self.expand(&u.sigma_m, a)?, &ring, p)?,
            ),
            None => (None, None, Vec::new()),
        };
        Ok(Instance {
            params: a.clone(),
            germ,
            kcod: self.eval(&self.expected.kcod, a)?,
            corank: self.eval(&self.expected.corank, a)?,
            delta: self.expected.delta.as_ref().map(|d| self.eval(d, a)).transpose()?,
            pair,
            sigmas,
            r,
            sigma_m,
        })
    }
}

/// Parse the data file format.
pub fn parse_atlas(text: &str) -> Result<Vec<AtlasEntry>> {
    let mut out = Vec::new();
    let mut block: Vec<(usize, String, String)> = Vec::new();
    let flush = |block: &mut Vec<(usize, String, String)>, out: &mut Vec<AtlasEntry>| -> Result<()> {
        if !block.is_empty() {
            out.push(parse_record(block)?);
            block.clear();
        }
        Ok(())
    };
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            flush(&mut block, &mut out)?;
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Atlas(format!("line {}: expected 'key = value'", i + 1)))?;
        block.push((i + 1, k.trim().to_string(), v.trim().to_string()));
    }
    flush(&mut block, &mut out)?;
    Ok(out)
}

fn parse_record(block: &[(usize, String, String)]) -> Result<AtlasEntry> {
    let line = block[0].0;
    let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
    let mut notes = Vec::new();
    for (l, k, v) in block {
        if k == "note" {
            notes.push(v.clone());
        } else if fields.insert(k.as_str(), v.as_str()).is_some() {
            return Err(Error::Atlas(format!("line {l}: duplicate key '{k}'")));
        }
    }
    const KNOWN: [&str; 18] = [
        "table", "name", "type", "vars", "params", "signs", "where", "conditions", "modulus", "exclude", "map", "kcod",
        "corank", "delta", "pair", "sigma", "r", "sigma_m",
    ];
    if let Some(k) = fields.keys().find(|k| !KNOWN.contains(k)) {
        return Err(Error::Atlas(format!("record at line {line}: unknown key '{k}'")));
    }
    let need = |k: &str| -> Result<&str> {
        fields.get(k).copied().ok_or_else(|| Error::Atlas(format!("record at line {line}: missing '{k}'")))
    };
    let ex = |s: &str| Expr::parse(s).map_err(|e| Error::Atlas(format!("record at line {line}: {e}")));
    let mut params = Vec::new();
    if let Some(ps) = fields.get("params") {
        for part in ps.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, range) = part.split_once('=').ok_or_else(|| Error::Atlas(format!("line {line}: bad parameter '{part}'")))?;
            let (lo, hi) = range.split_once("..").ok_or_else(|| Error::Atlas(format!("line {line}: bad range '{range}'")))?;
            params.push(ParamRange {
                name: name.trim().to_string(),
                lo: ex(lo)?,
                hi: if hi.trim().is_empty() { None } else { Some(ex(hi)?) },
            });
        }
    }
    let constraints = match fields.get("where") {
        Some(w) => w.split(';').map(str::trim).filter(|s| !s.is_empty()).map(ex).collect::<Result<_>>()?,
        None => Vec::new(),
    };
    let pair = match fields.get("pair") {
        Some(p) => {
            let (a, b) = p.split_once(',').ok_or_else(|| Error::Atlas(format!("line {line}: pair needs two entries")))?;
            Some((ex(a)?, ex(b)?))
        }
        None => None,
    };
    let unfolding = match (fields.get("sigma"), fields.get("r"), fields.get("sigma_m")) {
        (Some(s), Some(r), Some(m)) => Some(UnfoldingData { sigma: s.to_string(), r: ex(r)?, sigma_m: m.to_string() }),
        (None, None, None) => None,
        _ => return Err(Error::Atlas(format!("record at line {line}: sigma, r and sigma_m go together"))),
    };
    Ok(AtlasEntry {
        table_id: need("table")?.parse()?,
        name: need("name")?.to_string(),
        sing_type: fields.get("type").map(|s| s.to_string()),
        vars: need("vars")?.to_string(),
        params,
        signs: fields.get("signs").map(|s| s.split_whitespace().map(str::to_string).collect()).unwrap_or_default(),
        constraints,
        conditions: fields.get("conditions").map(|s| s.to_string()),
        modulus: fields.get("modulus").map(|s| s.to_string()),
        exclude: fields.get("exclude").map(|s| s.to_string()),
        map: need("map")?.to_string(),
        expected: Expected {
            kcod: ex(need("kcod")?)?,
            corank: ex(need("corank")?)?,
            delta: fields.get("delta").map(|d| ex(d)).transpose()?,
        },
        pair,
        unfolding,
        notes,
        line,
    })
}

/// The shipped atlas, parsed once.
pub fn atlas() -> &'static [AtlasEntry] {
    static ATLAS: OnceLock<Vec<AtlasEntry>> = OnceLock::new();
    ATLAS.get_or_init(|| parse_atlas(ATLAS_DATA).expect("shipped atlas data parses"))
}

pub fn table_entries(table: TableId) -> Vec<&'static AtlasEntry> {
    atlas().iter().filter(|e| e.table_id == table).collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub invariant: String,
    pub expected: String,
    pub computed: String,
    pub status: Status,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub table: TableId,
    pub name: String,
    pub params: Assignment,
    /// `"formal"`, a rational value, or absent without a modulus.
    pub modulus: Option<String>,
    pub checks: Vec<Check>,
    /// Confirmed rank-drop factors of the K-tangent space (formal modulus).
    pub exceptional_factors: Vec<String>,
    /// Each rank-drop factor divides the printed excluded locus.
    pub locus_agrees: Option<bool>,
    pub status: Status,
}

fn check(invariant: &str, expected: impl ToString, computed: Result<String>, ok: impl FnOnce(&str) -> bool) -> Check {
    let expected = expected.to_string();
    match computed {
        Ok(c) => {
            let status = if ok(&c) { Status::Pass } else { Status::Fail };
            Check { invariant: invariant.into(), expected, computed: c, status }
        }
        Err(e @ (Error::Undecided { .. } | Error::NotFinite { .. } | Error::NotFst { .. })) => {
            Check { invariant: invariant.into(), expected, computed: e.to_string(), status: Status::Inconclusive }
        }
        Err(e) => Check { invariant: invariant.into(), expected, computed: format!("error: {e}"), status: Status::Fail },
    }
}

/// Recompute the invariants of one instance and compare with the table.
/// With a modulus, `at = None` keeps it formal.
pub fn verify_entry(entry: &AtlasEntry, params: &Assignment, at: Option<&BigRational>, cutoff: u32) -> Result<VerificationReport> {
    let inst = entry.instantiate(params)?;
    let (germ, sigmas, sigma_m) = match at {
        Some(v) if entry.modulus.is_some() => {
            let g = inst.germ.specialize(v)?;
            let r = g.ring().clone();
            let sp = |w: &VectorFieldJet| -> Result<VectorFieldJet> {
                Ok(VectorFieldJet::new(w.components.iter().map(|c| c.specialize(v, &r)).collect::<std::result::Result<_, _>>()?))
            };
            let s = inst.sigmas.as_ref().map(|s| s.iter().map(sp).collect::<Result<Vec<_>>>()).transpose()?;
            let m = inst.sigma_m.iter().map(sp).collect::<Result<Vec<_>>>()?;
            (g, s, m)
        }
        _ => (inst.germ.clone(), inst.sigmas.clone(), inst.sigma_m.clone()),
    };
    let mut checks = Vec::new();
    checks.push(check("corank", inst.corank, Ok(corank(&germ).to_string()), |c| c == inst.corank.to_string()));
    let kc = stabilized_codim(&germ, GroupId::K, cutoff);
    let (exceptional_factors, locus_agrees) = match (&kc, entry.modulus.as_deref(), at) {
        (Ok(c), Some(m), None) => {
            let printed = germ.ring().excluded().map(|e| e.product()).unwrap_or_else(ZPoly::one);
            let agrees = c.exceptional_pivots.iter().all(|q| q.factors_divide(&printed));
            (c.exceptional_pivots.iter().map(|q| q.display_with(m)).collect(), Some(agrees))
        }
        _ => (Vec::new(), None),
    };
    checks.push(check("K_cod", inst.kcod, kc.map(|c| c.value.to_string()), |c| c == inst.kcod.to_string()));
    if let Some(d) = inst.delta {
        checks.push(check("delta", d, delta(&germ, cutoff).map(|r| r.delta.to_string()), |c| c == d.to_string()));
    }
    if let (Some(s), Some(r)) = (&sigmas, inst.r) {
        checks.push(check("r", r, Ok(s.len().to_string()), |c| c == r.to_string()));
        let mut all = s.clone();
        all.extend(sigma_m.iter().cloned());
        checks.push(check("normal_basis", "sigma + sigma_m span Nf", is_normal_basis(&germ, &all, cutoff).map(|b| b.to_string()), |c| c == "true"));
        if let Some((n, p)) = inst.pair {
            let got = format!("({}, {})", germ.n() + s.len(), germ.p() + s.len());
            checks.push(check("pair", format!("({n}, {p})"), Ok(got), |c| c == format!("({n}, {p})")));
            let want = n + sigma_m.len();
            let kc = stabilized_codim(&germ, GroupId::K, cutoff).map(|c| c.value.to_string());
            checks.push(check("K_cod = n + modality", want, kc, |c| c == want.to_string()));
        }
    }
    let status = if checks.iter().any(|c| c.status == Status::Fail) {
        Status::Fail
    } else if checks.iter().any(|c| c.status == Status::Inconclusive) {
        Status::Inconclusive
    } else {
        Status::Pass
    };
    let modulus = entry.modulus.as_ref().map(|_| at.map_or_else(|| "formal".to_string(), |v| v.to_string()));
    Ok(VerificationReport {
        table: entry.table_id,
        name: entry.name.clone(),
        params: params.clone(),
        modulus,
        checks,
        exceptional_factors,
        locus_agrees,
        status,
    })
}

/// Verify every entry of a table at its samples, entries in parallel;
/// reports come back in table order.
pub fn verify_table(table: TableId, cutoff: u32) -> Result<Vec<VerificationReport>> {
    let entries = table_entries(table);
    let results: Vec<Result<Vec<VerificationReport>>> = std::thread::scope(|s| {
        let handles: Vec<_> = entries
            .iter()
            .map(|e| s.spawn(move || e.samples()?.iter().map(|a| verify_entry(e, a, None, cutoff)).collect()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("verification worker panicked")).collect()
    });
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// Invariants used for matching.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct GermInvariants {
    pub n: usize,
    pub p: usize,
    pub corank: usize,
    pub k_cod: usize,
    pub delta: Option<usize>,
    pub hilbert: Option<HilbertData>,
}

/// Invariants of the rank-zero core of `f`; `None` if `f` is not of finite
/// singularity type within `cutoff`, or is a submersion.
pub fn core_invariants(f: &MapGerm, cutoff: u32) -> Result<Option<GermInvariants>> {
    let cert = match determinacy_bound(f, GroupId::K, cutoff) {
        Ok(c) => c,
        Err(Error::Undecided { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let core = rank_zero_core(f, cert.order_bound + 1)?.core;
    if core.p() == 0 {
        return Ok(None);
    }
    let k_cod = match stabilized_codim(&core, GroupId::K, cutoff) {
        Ok(c) => c.value,
        Err(Error::Undecided { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let (delta, hilbert) = match delta(&core, cutoff) {
        Ok(d) => (Some(d.delta), Some(d.hilbert)),
        Err(Error::NotFinite { .. }) => (None, None),
        Err(e) => return Err(e),
    };
    Ok(Some(GermInvariants { n: core.n(), p: core.p(), corank: core.n(), k_cod, delta, hilbert }))
}

#[derive(Clone, Debug, Serialize)]
pub struct Candidate {
    pub table: TableId,
    pub name: String,
    pub params: Assignment,
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    /// `f` is not of finite singularity type within the cutoff (or is a
    /// submersion); no candidates are given.
    pub not_fst: bool,
    pub invariants: Option<GermInvariants>,
    pub candidates: Vec<Candidate>,
}

/// Table rows (over all finitely many instances, formal moduli) whose core
/// invariants all agree with those of `f`.
pub fn classify(f: &MapGerm, cutoff: u32) -> Result<Classification> {
    let Some(inv) = core_invariants(f, cutoff)? else {
        return Ok(Classification { not_fst: true, invariants: None, candidates: Vec::new() });
    };
    let mut candidates = Vec::new();
    for e in atlas() {
        for a in e.instances()? {
            let inst = e.instantiate(&a)?;
            let g = &inst.germ;
            if g.p() != inv.p || g.n() != inv.n || corank(g) != inv.corank {
                continue;
            }
            if core_invariants(g, cutoff)?.as_ref() == Some(&inv) {
                candidates.push(Candidate { table: e.table_id, name: e.name.clone(), params: a });
            }
        }
    }
    Ok(Classification { not_fst: false, invariants: Some(inv), candidates })
}

/// The stable normal form of the unimodular family tabulated for `pair`,
/// at the modulus value `at` (formal if `None`).
///
/// Values on the printed excluded locus, and values where the tangent space
/// of the core drops rank, are rejected with the vanishing factor.
pub fn unimodular_normal_form(pair: (usize, usize), at: Option<&BigRational>, cutoff: u32) -> Result<UnimodularNormalForm> {
    let (entry, inst) = find_pair(pair)?;
    let sigmas = inst.sigmas.clone().ok_or_else(|| entry.err("row has no unfolding"))?;
    let [sigma_m] = <[VectorFieldJet; 1]>::try_from(inst.sigma_m.clone()).map_err(|_| entry.err("expected one modulus direction"))?;
    let nf = UnimodularNormalForm::new(pair, inst.germ.clone(), sigmas, sigma_m)?;
    let formal = stabilized_codim(&nf.core, GroupId::K, cutoff)?;
    let nf = match at {
        None => nf,
        Some(v) => {
            if let Some(w) = nf.core.ring().excluded().and_then(|e| e.witness(v)) {
                return Err(Error::ExcludedParameter { value: v.to_string(), witness: w.display_with(nf.core.ring().param_name()) });
            }
            if let Some(w) = formal.exceptional_pivots.iter().find(|q| num_traits::Zero::is_zero(&q.eval(v))) {
                return Err(Error::ExcludedParameter { value: v.to_string(), witness: w.display_with(nf.core.ring().param_name()) });
            }
            nf.at(v, cutoff)?
        }
    };
    let kc = if at.is_some() { stabilized_codim(&nf.core, GroupId::K, cutoff)?.value } else { formal.value };
    if kc != pair.0 + 1 {
        return Err(Error::Invariant(format!("core K-codimension {kc}, expected {}", pair.0 + 1)));
    }
    if corank(&nf.core) as i64 != inst.corank {
        return Err(Error::Invariant(format!("core corank {}, expected {}", corank(&nf.core), inst.corank)));
    }
    Ok(nf)
}

/// The unimodular table row and instance whose pair is `pair`.
pub fn find_pair(pair: (usize, usize)) -> Result<(&'static AtlasEntry, Instance)> {
    for e in atlas().iter().filter(|e| e.table_id.is_unimodular()) {
        let Some((pn, pp)) = &e.pair else { continue };
        for a in e.assignments(UNBOUNDED_SCAN)? {
            let (n, p) = (e.eval(pn, &a)?, e.eval(pp, &a)?);
            if (n, p) == (pair.0 as i64, pair.1 as i64) {
                return Ok((e, e.instantiate(&a)?));
            }
        }
    }
    Err(Error::NotBoundaryPair { n: pair.0, p: pair.1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(table: TableId, name: &str) -> &'static AtlasEntry {
        table_entries(table).into_iter().find(|e| e.name == name).unwrap()
    }

    #[test]
    fn data_loads() {
        assert_eq!(table_entries(TableId::StableNp8).len(), 5);
        let a = one(TableId::StableNp8, "A_j");
        assert_eq!(a.instances().unwrap().len(), 8);
        let b = one(TableId::Bnd99, "B_{p,q}");
        // p <= q, p + q <= 9, two signs
        assert_eq!(b.instances().unwrap().len(), 24);
        let t = one(TableId::Bnd99, "Sigma^{3,0}");
        assert_eq!(t.conditions.as_deref(), Some("l != -2, 0, 1"));
        let g = one(TableId::BndNgtp, "(9,8)");
        let i = g.instantiate(&Assignment::new()).unwrap();
        assert_eq!((i.r, i.sigma_m[0].display_basis()), (Some(7), "x^2*y^2*e1".to_string()));
        assert!("nope".parse::<TableId>().is_err());
    }

    #[test]
    fn bad_records() {
        assert!(parse_atlas("table = BND99\nname = x\n").is_err());
        assert!(parse_atlas("table = BND99\nname = a\nvars = x\nmap = x^2\nkcod = 1\ncorank = 1\nbogus = 3\n").is_err());
        assert!(parse_atlas("table = BND99\nname = a\nvars = x\nmap = x^2\nkcod = 1\ncorank = 1\nr = 2\n").is_err());
        assert_eq!(parse_atlas("# c\n\ntable = BND99\nname = a\nvars = x\nmap = x^2\nkcod = 1\ncorank = 1\n").unwrap().len(), 1);
    }

    #[test]
    fn verify_small_rows() {
        let b = one(TableId::StableNp8, "B_{p,q}");
        let a: Assignment = [("p".to_string(), 2), ("q".to_string(), 3), ("s".to_string(), 1)].into_iter().collect();
        let r = verify_entry(b, &a, None, 12).unwrap();
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.checks.iter().find(|c| c.invariant == "K_cod").unwrap().computed, "5");
        let n = one(TableId::BndNgtp, "(8,6)");
        let r = verify_entry(n, &Assignment::new(), None, 12).unwrap();
        assert_eq!(r.status, Status::Pass, "{r:?}");
        assert_eq!(r.locus_agrees, Some(false));
        let r3 = verify_entry(n, &Assignment::new(), Some(&BigRational::from_integer(3.into())), 12).unwrap();
        assert_eq!(r3.status, Status::Pass);
    }

    #[test]
    fn classify_examples() {
        let r = RingSpec::rational(&["x", "y"]);
        let f = MapGerm::parse(&r, &["x*y", "x^2+y^3"]).unwrap();
        let c = classify(&f, 12).unwrap();
        assert!(c.candidates.iter().any(|c| c.name == "B_{p,q}" && c.params.get("p") == Some(&2) && c.params.get("q") == Some(&3)));
        let g = MapGerm::parse(&r, &["x^2+y^2", "x^3"]).unwrap();
        let c = classify(&g, 12).unwrap();
        // B*_{3,3} and B_{3,3} are real forms of one complex orbit
        assert!(c.candidates.iter().any(|c| c.name == "B*_{p,p}" && c.params["p"] == 3));
        assert!(c.candidates.iter().all(|c| c.name.starts_with('B') && c.params.get("p") == Some(&3)));
        let h = MapGerm::parse(&r, &["x^2"]).unwrap();
        assert!(classify(&h, 6).unwrap().not_fst);
    }

    #[test]
    fn normal_forms() {
        let three = BigRational::from_integer(3.into());
        let nf = unimodular_normal_form((8, 6), Some(&three), 12).unwrap();
        assert_eq!(nf.unfolding.display(), "(x^2 + y^2 + y*u1 + z^2 + w*u2, x*u3 + y^2 + 3*z^2 + z*u4 + w^2, u1, u2, u3, u4)");
        let nf = unimodular_normal_form((9, 9), Some(&three), 12).unwrap();
        assert_eq!((nf.unfolding.n(), nf.unfolding.p()), (9, 9));
        let e = unimodular_normal_form((9, 9), Some(&BigRational::from_integer(1.into())), 12).unwrap_err();
        assert!(matches!(e, Error::ExcludedParameter { ref witness, .. } if witness == "l^3 - 1"), "{e:?}");
        let e = unimodular_normal_form((9, 9), Some(&BigRational::from_integer(2.into())), 12).unwrap_err();
        assert!(matches!(e, Error::ExcludedParameter { ref witness, .. } if witness == "l - 2"), "{e:?}");
        assert!(matches!(unimodular_normal_form((8, 8), None, 12), Err(Error::NotBoundaryPair { .. })));
        let (_, i) = find_pair((38, 43)).unwrap();
        assert_eq!(i.params["s"], 6);
    }
}
