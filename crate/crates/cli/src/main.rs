use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use germkit::atlas::{self, Status, TableId};
use germkit::determinacy::{determinacy_bound, stabilized_codim};
use germkit::nicedim::{classify_pair, extra_nice_boundary, NiceClass};
use germkit::stability::{self, is_fst, open_orbit_test, open_orbit_test_full, plane_germ_type};
use germkit::tangent::{corank, delta, weighted_homogeneous_type};
use germkit::triviality::{self, Family, Positivity};
use germkit::{Error, GroupId, GroupKind, MapGerm, VectorFieldJet};

mod germfile;

use germfile::{parse_germ_file, GermFile};

/// Lists in certificates longer than this are cut unless
/// `--verbose-certificates` is given.
const LIST_LIMIT: usize = 12;

#[derive(Parser)]
#[command(name = "germkit", version, about = "Exact invariants of polynomial map-germs")]
struct Cli {
    /// Largest jet order tried before a computation is reported undecided.
    #[arg(long, global = true, env = "GERMKIT_JET_CUTOFF", default_value_t = 12)]
    jet_cutoff: u32,
    /// Specialize the modulus, as `value` or `name=value`.
    #[arg(long, global = true)]
    at: Option<String>,
    /// Emit a JSON report.
    #[arg(long, global = true)]
    json: bool,
    /// Do not truncate certificate lists.
    #[arg(long, global = true)]
    verbose_certificates: bool,
    /// Print the parsed germ file in canonical form first.
    #[arg(long, global = true)]
    echo: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GermArg {
    /// Germ file.
    file: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Summary of the basic invariants.
    Analyze(GermArg),
    /// Stabilized codimension of a group orbit.
    Codim {
        #[command(flatten)]
        germ: GermArg,
        /// R, C, K, L or A; append `e` for the extended tangent space.
        #[arg(long, default_value = "K")]
        group: String,
    },
    /// Certified finite determinacy degree.
    Determinacy {
        #[command(flatten)]
        germ: GermArg,
        #[arg(long, default_value = "K")]
        group: String,
    },
    /// Infinitesimal stability.
    Stability(GermArg),
    /// Stable unfolding of a germ, or the unimodular normal form of a boundary pair.
    Unfold {
        /// Germ file; unfolds along its `sigma` list or along a basis of Nf.
        file: Option<PathBuf>,
        /// Boundary pair `n,p`; runs the open-orbit check on its normal form.
        #[arg(long, conflicts_with = "file")]
        pair: Option<String>,
        /// Also run the open-orbit memberships in the unfolding variables.
        #[arg(long)]
        full: bool,
    },
    /// Candidate rows of the atlas.
    Classify(GermArg),
    /// Position of `(n, p)` relative to the nice dimensions.
    Nicedim { n: u64, p: u64 },
    /// Recompute the invariants of atlas rows.
    AtlasVerify {
        /// Table id; all tables if absent.
        #[arg(long)]
        table: Option<String>,
    },
    /// Whether the ideal of the components contains a power of the maximal ideal.
    IdealCheck {
        #[command(flatten)]
        germ: GermArg,
        /// Check `M^d` inside the ideal.
        #[arg(long)]
        power: Option<u32>,
        /// Check `I*M^e = M^(deg+e)` for homogeneous generators.
        #[arg(long)]
        times: Option<u32>,
    },
    /// Infinitesimal triviality certificates for one-parameter families.
    Trivialize {
        #[command(flatten)]
        germ: GermArg,
        /// Source variable used as time; otherwise the modulus near `--at`.
        #[arg(long)]
        time: Option<String>,
        /// C, K or A (also R and L).
        #[arg(long, default_value = "K")]
        group: String,
        /// Jet order of the certificate.
        #[arg(long, default_value_t = 3)]
        order: u32,
        /// Solve the control-function system instead.
        #[arg(long)]
        lipschitz: bool,
    },
}

/// Failure of a command, carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Undecided { .. } | Error::NotFinite { .. } | Error::NotFst { .. } => 1,
            Error::Invariant(_) | Error::Atlas(_) | Error::Jet(_) => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl ToString) -> Failure {
    Failure { code: 2, message: message.to_string() }
}

/// Result of a command: JSON results, human-readable lines and whether the
/// outcome is inconclusive.
struct Outcome {
    inputs: Map<String, Value>,
    results: Map<String, Value>,
    lines: Vec<String>,
    inconclusive: bool,
}

impl Outcome {
    fn new() -> Self {
        Outcome { inputs: Map::new(), results: Map::new(), lines: Vec::new(), inconclusive: false }
    }

    fn set(&mut self, key: &str, v: impl serde::Serialize) {
        self.results.insert(key.to_string(), serde_json::to_value(v).expect("serializable"));
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    /// Records an undecided sub-computation instead of failing.
    fn soft<T>(&mut self, key: &str, r: germkit::Result<T>) -> Result<Option<T>, Failure> {
        match r {
            Ok(v) => Ok(Some(v)),
            Err(e @ (Error::Undecided { .. } | Error::NotFinite { .. } | Error::NotFst { .. })) => {
                self.inconclusive = true;
                self.set(key, json!({ "undecided": e.to_string() }));
                self.line(format!("{key}: undecided ({e})"));
                Ok(None)
            }
            Err(e) => Err(e.into()),
        }
    }
}

struct Ctx {
    cutoff: u32,
    at: Option<BigRational>,
    verbose: bool,
    echo: bool,
}

impl Ctx {
    fn clip(&self, items: Vec<String>) -> Value {
        if self.verbose || items.len() <= LIST_LIMIT {
            return json!(items);
        }
        let rest = items.len() - LIST_LIMIT;
        let mut v: Vec<Value> = items.into_iter().take(LIST_LIMIT).map(Value::String).collect();
        v.push(json!({ "omitted": rest }));
        Value::Array(v)
    }

    fn load(&self, path: &PathBuf, out: &mut Outcome) -> Result<GermFile, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let g = parse_germ_file(&text).map_err(|d| usage(format!("{}: {d}", path.display())))?;
        if self.echo {
            print!("{}", g.echo());
        }
        out.inputs.insert("file".into(), json!(path.display().to_string()));
        out.inputs.insert("germ".into(), json!(g.germ.display()));
        Ok(g)
    }

    /// The germ of the file, specialized at `--at` if given.
    fn germ(&self, path: &PathBuf, out: &mut Outcome) -> Result<MapGerm, Failure> {
        let g = self.load(path, out)?.germ;
        self.specialize(&g)
    }

    fn specialize(&self, g: &MapGerm) -> Result<MapGerm, Failure> {
        match &self.at {
            Some(v) if g.has_parameter() => Ok(g.specialize(v)?),
            _ => Ok(g.clone()),
        }
    }
}

fn parse_at(s: &str) -> Result<BigRational, Failure> {
    let v = s.split_once('=').map_or(s, |(_, v)| v).trim();
    BigRational::from_str(v).map_err(|_| usage(format!("cannot read `{s}` as a rational value")))
}

fn parse_group(s: &str) -> Result<GroupId, Failure> {
    let t = s.trim();
    let (base, extended) = match t.strip_suffix("_e").or_else(|| t.strip_suffix('e')) {
        Some(b) => (b, true),
        None => (t, false),
    };
    let kind = match base {
        "R" => GroupKind::R,
        "C" => GroupKind::C,
        "K" => GroupKind::K,
        "L" => GroupKind::L,
        "A" => GroupKind::A,
        _ => return Err(usage(format!("unknown group `{s}`"))),
    };
    Ok(GroupId::new(kind, extended))
}

fn fields(v: &[VectorFieldJet]) -> Vec<String> {
    v.iter().map(VectorFieldJet::display_basis).collect()
}

fn codim_json(c: &germkit::CodimResult, param: &str) -> Value {
    json!({
        "value": c.value,
        "jet_order_used": c.jet_order_used,
        "determinacy": c.certificate,
        "exceptional_factors": c.exceptional_pivots.iter().map(|z| z.display_with(param)).collect::<Vec<_>>(),
    })
}

fn analyze(ctx: &Ctx, file: &PathBuf, out: &mut Outcome) -> Result<(), Failure> {
    let f = ctx.germ(file, out)?;
    let param = f.ring().param_name().to_string();
    out.set("n", f.n());
    out.set("p", f.p());
    out.set("corank", corank(&f));
    out.line(format!("dimensions: ({}, {}), corank {}", f.n(), f.p(), corank(&f)));
    let wt = weighted_homogeneous_type(&f);
    out.set("weighted_type", &wt);
    if let Some(w) = &wt {
        let ws: Vec<String> = w.weights.iter().map(|x| x.to_string()).collect();
        let ds: Vec<String> = w.degrees.iter().map(|x| x.to_string()).collect();
        out.line(format!("weighted homogeneous: weights ({}), degrees ({})", ws.join(", "), ds.join(", ")));
    }
    if let Some(c) = out.soft("k_codim", stabilized_codim(&f, GroupId::K, ctx.cutoff))? {
        out.line(format!("K-codim: {}", c.value));
        out.set("k_codim", codim_json(&c, &param));
    }
    if let Some(d) = out.soft("delta", delta(&f, ctx.cutoff))? {
        out.line(format!("delta: {} (graded dims {:?})", d.delta, d.hilbert.dims_by_degree));
        out.set("delta", d);
    }
    let fst = is_fst(&f, ctx.cutoff)?;
    if fst.undecided {
        out.inconclusive = true;
    }
    out.line(format!("finite singularity type: {}", if fst.undecided { "undecided".to_string() } else { fst.fst.to_string() }));
    out.set("fst", fst);
    if let Some(s) = out.soft("stable", stability::infinitesimally_stable(&f))? {
        out.line(format!("infinitesimally stable: {}", s.stable));
        out.set("stable", s.stable);
    }
    if f.n() == 2 && f.p() == 2 && !f.has_parameter() {
        let t = plane_germ_type(&f)?;
        out.line(format!("plane germ type: {t:?}"));
        out.set("plane_type", t);
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    let ctx = Ctx {
        cutoff: cli.jet_cutoff,
        at: cli.at.as_deref().map(parse_at).transpose()?,
        verbose: cli.verbose_certificates,
        echo: cli.echo,
    };
    let mut out = Outcome::new();
    out.inputs.insert("jet_cutoff".into(), json!(ctx.cutoff));
    if let Some(v) = &ctx.at {
        out.inputs.insert("at".into(), json!(v.to_string()));
    }
    match cli.command {
        Command::Analyze(g) => analyze(&ctx, &g.file, &mut out)?,
        Command::Codim { germ, group } => {
            let g = parse_group(&group)?;
            out.inputs.insert("group".into(), json!(g.name()));
            let f = ctx.germ(&germ.file, &mut out)?;
            let c = stabilized_codim(&f, g, ctx.cutoff)?;
            let param = f.ring().param_name().to_string();
            out.line(format!("{}-codim = {}", g.name(), c.value));
            if !c.exceptional_pivots.is_empty() {
                let fs: Vec<String> = c.exceptional_pivots.iter().map(|z| z.display_with(&param)).collect();
                out.line(format!("exceptional factors: {}", fs.join(", ")));
            }
            let mut v = codim_json(&c, &param);
            if let Some(e) = f.ring().excluded().filter(|e| !e.factors().is_empty()) {
                let prod = e.product();
                let agrees = c.exceptional_pivots.iter().all(|q| q.factors_divide(&prod));
                v["locus_agrees"] = json!(agrees);
                out.line(format!("every factor divides the excluded locus: {agrees}"));
            }
            out.results.insert("codim".into(), v);
        }
        Command::Determinacy { germ, group } => {
            let g = parse_group(&group)?;
            out.inputs.insert("group".into(), json!(g.name()));
            let f = ctx.germ(&germ.file, &mut out)?;
            let c = determinacy_bound(&f, g, ctx.cutoff)?;
            out.line(format!("{}-determined of order {}", g.ordinary().name(), c.order_bound));
            out.line(format!("containment level {}; the check fails at every lower level", c.k_base));
            out.set("determinacy", c);
        }
        Command::Stability(g) => {
            let f = ctx.germ(&g.file, &mut out)?;
            let s = stability::infinitesimally_stable(&f)?;
            out.line(format!("infinitesimally stable: {}", s.stable));
            if let Some(w) = &s.witness {
                out.line(format!("missing direction: {}", w.display_basis()));
            }
            out.set("stable", s.stable);
            out.set("method", s.method);
            out.set("jet_order_used", s.jet_order_used);
            out.set("witness", s.witness.as_ref().map(VectorFieldJet::display_basis));
        }
        Command::Unfold { file, pair, full } => match (file, pair) {
            (Some(file), None) => {
                let gf = ctx.load(&file, &mut out)?;
                let f = ctx.specialize(&gf.germ)?;
                let big = if gf.sigma.is_empty() {
                    stability::stable_unfolding(&f, ctx.cutoff)?
                } else {
                    let sig: Vec<VectorFieldJet> = match &ctx.at {
                        Some(v) if gf.germ.has_parameter() => gf
                            .sigma
                            .iter()
                            .map(|s| s.components.iter().map(|c| c.specialize(v, f.ring())).collect::<Result<Vec<_>, _>>().map(VectorFieldJet::new))
                            .collect::<Result<_, _>>()
                            .map_err(Error::from)?,
                        _ => gf.sigma.clone(),
                    };
                    stability::unfold(&f, &sig)?
                };
                let s = stability::infinitesimally_stable(&big)?;
                out.line(format!("unfolding: {}", big.display()));
                out.line(format!("dimensions: ({}, {})", big.n(), big.p()));
                out.line(format!("infinitesimally stable: {}", s.stable));
                out.set("unfolding", big.display());
                out.set("n", big.n());
                out.set("p", big.p());
                out.set("stable", s.stable);
            }
            (None, Some(pair)) => {
                let (n, p) = pair.split_once(',').ok_or_else(|| usage("expected --pair n,p"))?;
                let n: usize = n.trim().parse().map_err(|_| usage("bad pair"))?;
                let p: usize = p.trim().parse().map_err(|_| usage("bad pair"))?;
                out.inputs.insert("pair".into(), json!([n, p]));
                let nf = atlas::unimodular_normal_form((n, p), ctx.at.as_ref(), ctx.cutoff)?;
                out.line(format!("core: {}", nf.core.display()));
                out.line(format!("sigma: {}", fields(&nf.sigmas).join(", ")));
                out.line(format!("sigma_m: {}", nf.sigma_m.display_basis()));
                out.set("core", nf.core.display());
                out.results.insert("sigma".into(), ctx.clip(fields(&nf.sigmas)));
                out.set("sigma_m", nf.sigma_m.display_basis());
                out.results.insert("unfolding".into(), ctx.clip(nf.unfolding.components().iter().map(|c| c.display()).collect()));
                let r = if full { open_orbit_test_full(&nf, ctx.cutoff)? } else { open_orbit_test(&nf, ctx.cutoff)? };
                out.line(format!("open-orbit check: {}", if r.passed { "passed" } else { "failed" }));
                if !r.failures.is_empty() {
                    out.line(format!("failed memberships: {}", r.failures.join(", ")));
                }
                out.set("open_orbit", r);
            }
            _ => return Err(usage("give a germ file or --pair")),
        },
        Command::Classify(g) => {
            let f = ctx.germ(&g.file, &mut out)?;
            let c = atlas::classify(&f, ctx.cutoff)?;
            if c.not_fst {
                out.inconclusive = true;
                out.line("not of finite singularity type within the cutoff");
            }
            for cand in &c.candidates {
                let ps: Vec<String> = cand.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                out.line(format!("{} {} {}", cand.table.as_str(), cand.name, ps.join(" ")).trim_end().to_string());
            }
            if !c.not_fst && c.candidates.is_empty() {
                out.line("no matching atlas row");
            }
            out.set("classification", c);
        }
        Command::Nicedim { n, p } => {
            if n == 0 || p == 0 {
                return Err(usage("dimensions must be positive"));
            }
            let c = classify_pair(n, p);
            out.inputs.insert("pair".into(), json!([n, p]));
            out.line(format!("{:?}, sigma={}", c.class, c.sigma));
            if c.exceptional {
                out.line("carries a bimodular stratum");
            }
            let enb = extra_nice_boundary(n, p);
            if enb {
                out.line("on the boundary of the extra-nice dimensions");
            }
            out.set("class", c.class);
            out.set("sigma", c.sigma);
            out.set("exceptional", c.exceptional);
            out.set("boundary", c.class == NiceClass::BoundaryNice);
            out.set("extra_nice_boundary", enb);
        }
        Command::AtlasVerify { table } => {
            let tables = match table {
                Some(t) => vec![TableId::from_str(&t).map_err(|_| usage(format!("unknown table `{t}`")))?],
                None => TableId::ALL.to_vec(),
            };
            out.inputs.insert("tables".into(), json!(tables.iter().map(|t| t.as_str()).collect::<Vec<_>>()));
            let mut rows = Vec::new();
            let (mut pass, mut total) = (0, 0);
            for t in tables {
                for r in atlas::verify_table(t, ctx.cutoff)? {
                    total += 1;
                    let ps: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    let tag = match r.status {
                        Status::Pass => {
                            pass += 1;
                            "PASS"
                        }
                        Status::Fail => "FAIL",
                        Status::Inconclusive => "INCONCLUSIVE",
                    };
                    out.line(format!("{tag} {} {} {}", r.table.as_str(), r.name, ps.join(" ")).trim_end().to_string());
                    for c in r.checks.iter().filter(|c| c.status != Status::Pass) {
                        out.line(format!("    {}: expected {}, computed {}", c.invariant, c.expected, c.computed));
                    }
                    rows.push(r);
                }
            }
            out.line(format!("{pass}/{total} rows pass"));
            out.inconclusive = pass != total;
            out.set("rows", rows);
        }
        Command::IdealCheck { germ, power, times } => {
            let f = ctx.germ(&germ.file, &mut out)?;
            let gens = f.components().to_vec();
            if power.is_none() && times.is_none() {
                return Err(usage("give --power or --times"));
            }
            if let Some(d) = power {
                out.inputs.insert("power".into(), json!(d));
                let c = triviality::power_subset_ideal(&gens, d)?;
                let missing: Vec<String> = c.missing.iter().map(|m| m.display_with(f.ring().variables())).collect();
                out.line(format!("M^{d} in ideal: {}", c.holds));
                if !c.holds {
                    out.line(format!("outside: {}", missing.join(", ")));
                }
                let mut v = json!({ "holds": c.holds, "degree": d, "missing": ctx.clip(missing) });
                if let Some(cert) = &c.certificate {
                    let param = f.ring().param_name().to_string();
                    let dens: Vec<String> = cert.denominators().iter().map(|z| z.display_with(&param)).collect();
                    let ex: Vec<String> = cert
                        .expressions
                        .iter()
                        .map(|(m, hs)| {
                            let terms: Vec<String> =
                                hs.iter().enumerate().filter(|(_, h)| !h.is_zero()).map(|(j, h)| format!("({})*g{}", h.display(), j + 1)).collect();
                            format!("{} = {}", m.display_with(f.ring().variables()), terms.join(" + "))
                        })
                        .collect();
                    if !dens.is_empty() {
                        out.line(format!("generic answer; certificate denominators: {}", dens.join(", ")));
                    }
                    v["denominators"] = json!(dens);
                    v["certificate"] = ctx.clip(ex);
                }
                out.inconclusive |= !c.holds;
                out.results.insert("containment".into(), v);
            }
            if let Some(e) = times {
                out.inputs.insert("times".into(), json!(e));
                let eq = triviality::ideal_power_product_equals(&gens, e)?;
                out.line(format!("I*M^{e} = M^(d+{e}): {eq}"));
                out.inconclusive |= !eq;
                out.set("product_equals_power", eq);
            }
        }
        Command::Trivialize { germ, time, group, order, lipschitz } => {
            let f = ctx.load(&germ.file, &mut out)?.germ;
            if lipschitz {
                let fam = if f.has_parameter() { Family::modulus(f.clone())? } else { return Err(usage("the control system needs a family in the modulus")) };
                let c = triviality::lipschitz_control_certificate(&fam, ctx.at.as_ref())?;
                match c {
                    None => {
                        out.inconclusive = true;
                        out.line("no control matrix of the graded degree");
                        out.set("certificate", Value::Null);
                    }
                    Some(c) => {
                        out.line(format!("control matrix found, entries in M^{}", c.entry_degree));
                        out.line(format!("rho^2 = {}", c.rho_sq.display()));
                        for row in &c.matrix {
                            let r: Vec<String> = row.iter().map(|a| a.display()).collect();
                            out.line(format!("  [{}]", r.join(", ")));
                        }
                        out.line(format!("positive definite Gram form: {:?}", c.positivity));
                        out.inconclusive = c.positivity == Positivity::Inconclusive;
                        out.set("certificate", c);
                    }
                }
            } else {
                let kind = parse_group(&group)?.kind;
                out.inputs.insert("group".into(), json!(group));
                out.inputs.insert("order".into(), json!(order));
                let fam = match time {
                    Some(t) => {
                        let i = f.ring().var_index(&t).ok_or_else(|| usage(format!("no variable `{t}`")))?;
                        Family::variable(ctx.specialize(&f)?, i)?
                    }
                    None => {
                        let at = ctx.at.as_ref().ok_or_else(|| usage("give --time or --at for the base point of the modulus"))?;
                        Family::around(&f, at)?
                    }
                };
                match triviality::thom_levine_certificate(&fam, kind, order)? {
                    None => {
                        out.inconclusive = true;
                        out.line(format!("no solution at order {order}"));
                        out.set("certificate", Value::Null);
                    }
                    Some(c) => {
                        out.line(format!("infinitesimal identity solvable at order {order}"));
                        let names = fam.germ().ring().variables().to_vec();
                        for (i, v) in c.v.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                            out.line(format!("  v_{} = {}", names[i], v.display()));
                        }
                        for (i, row) in c.a.iter().enumerate() {
                            for (j, a) in row.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
                                out.line(format!("  a_{}{} = {}", i + 1, j + 1, a.display()));
                            }
                        }
                        for (j, w) in c.w.iter().enumerate().filter(|(_, w)| !w.is_zero()) {
                            out.line(format!("  w_{} = {}", j + 1, w.display()));
                        }
                        out.set("certificate", c);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let command = command_name(&cli.command);
    let start = Instant::now();
    match run(cli) {
        Ok(out) => {
            if json {
                let report = json!({
                    "tool": "germkit",
                    "version": env!("CARGO_PKG_VERSION"),
                    "command": command,
                    "inputs": out.inputs,
                    "results": out.results,
                    "timing_ms": start.elapsed().as_millis() as u64,
                });
                println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            } else {
                for l in &out.lines {
                    println!("{l}");
                }
            }
            ExitCode::from(u8::from(out.inconclusive))
        }
        Err(f) => {
            eprintln!("germkit: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Analyze(_) => "analyze",
        Command::Codim { .. } => "codim",
        Command::Determinacy { .. } => "determinacy",
        Command::Stability(_) => "stability",
        Command::Unfold { .. } => "unfold",
        Command::Classify(_) => "classify",
        Command::Nicedim { .. } => "nicedim",
        Command::AtlasVerify { .. } => "atlas-verify",
        Command::IdealCheck { .. } => "ideal-check",
        Command::Trivialize { .. } => "trivialize",
    }
}
