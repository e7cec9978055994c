//! The `key = value` germ file format.
//!
//! ```text
//! # Thom's family
//! vars = x y z
//! params = l
//! exclude = l*(l^3+8)*(l^3-1)
//! map = x^2+l*y*z; y^2+l*x*z; z^2+l*x*y
//! ```
//!
//! Optional keys `sigma` and `sigma_m` hold comma-separated vector fields
//! such as `y*e1, x*e2`.

use std::fmt;
use std::sync::Arc;

use germkit::jetspace::VectorFieldJet;
use germkit::poly::{as_param_poly, parse_factors, parse_vector_field, ExcludedLocus};
use germkit::{MapGerm, RingSpec};

#[derive(Debug)]
pub struct Diagnostic {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

#[derive(Debug)]
pub struct GermFile {
    pub germ: MapGerm,
    pub sigma: Vec<VectorFieldJet>,
    pub sigma_m: Vec<VectorFieldJet>,
}

const KEYS: [&str; 6] = ["vars", "params", "exclude", "map", "sigma", "sigma_m"];

fn diag(line: usize, message: impl ToString) -> Diagnostic {
    Diagnostic { line, message: message.to_string() }
}

fn fields(text: &str, ring: &Arc<RingSpec>, p: usize, line: usize) -> Result<Vec<VectorFieldJet>, Diagnostic> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_vector_field(s, ring, p).map(VectorFieldJet::new).map_err(|e| diag(line, e)))
        .collect()
}

pub fn parse_germ_file(text: &str) -> Result<GermFile, Diagnostic> {
    let mut values: [Option<(usize, String)>; 6] = Default::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| diag(line, "expected `key = value`"))?;
        let key = key.trim();
        let slot = KEYS.iter().position(|k| *k == key).ok_or_else(|| diag(line, format!("unknown key `{key}`")))?;
        if values[slot].is_some() {
            return Err(diag(line, format!("duplicate key `{key}`")));
        }
        values[slot] = Some((line, value.trim().to_string()));
    }
    let [vars, params, exclude, map, sigma, sigma_m] = values;
    let (vline, vars) = vars.ok_or_else(|| diag(0, "missing key `vars`"))?;
    let vars: Vec<String> = vars.split_whitespace().map(str::to_string).collect();
    let param = match params {
        None => None,
        Some((line, p)) => {
            let names: Vec<&str> = p.split_whitespace().collect();
            match names[..] {
                [] => None,
                [one] => Some((line, one.to_string())),
                _ => return Err(diag(line, "at most one modulus is supported")),
            }
        }
    };
    let base = RingSpec::new(vars, param.as_ref().map(|p| p.1.clone()), None)
        .map_err(|e| diag(param.as_ref().map_or(vline, |p| p.0), e))?;
    let ring = match exclude {
        None => base,
        Some((line, text)) => {
            let factors = parse_factors(&text, &base).map_err(|e| diag(line, e))?;
            let z = factors
                .iter()
                .map(|f| as_param_poly(f).ok_or_else(|| diag(line, "the excluded locus may only involve the modulus")))
                .collect::<Result<Vec<_>, _>>()?;
            let locus = ExcludedLocus::new(z).map_err(|e| diag(line, e))?;
            base.with_excluded(Some(locus)).map_err(|e| diag(line, e))?
        }
    };
    let (mline, map) = map.ok_or_else(|| diag(0, "missing key `map`"))?;
    let comps: Vec<&str> = map.split(';').map(str::trim).filter(|s| !s.is_empty()).collect();
    let germ = MapGerm::parse(&ring, &comps).map_err(|e| diag(mline, e))?;
    let p = germ.p();
    let sigma = match sigma {
        Some((line, t)) => fields(&t, &ring, p, line)?,
        None => Vec::new(),
    };
    let sigma_m = match sigma_m {
        Some((line, t)) => fields(&t, &ring, p, line)?,
        None => Vec::new(),
    };
    Ok(GermFile { germ, sigma, sigma_m })
}

impl GermFile {
    /// Canonical text that parses back to the same germ.
    pub fn echo(&self) -> String {
        let ring = self.germ.ring();
        let mut out = format!("vars = {}\n", ring.variables().join(" "));
        if let Some(p) = ring.parameter() {
            out.push_str(&format!("params = {p}\n"));
            if let Some(e) = ring.excluded().filter(|e| !e.factors().is_empty()) {
                let fs: Vec<String> = e.factors().iter().map(|f| format!("({})", f.display_with(p))).collect();
                out.push_str(&format!("exclude = {}\n", fs.join("*")));
            }
        }
        let comps: Vec<String> = self.germ.components().iter().map(|c| c.display()).collect();
        out.push_str(&format!("map = {}\n", comps.join("; ")));
        for (key, list) in [("sigma", &self.sigma), ("sigma_m", &self.sigma_m)] {
            if !list.is_empty() {
                let s: Vec<String> = list.iter().map(VectorFieldJet::display_basis).collect();
                out.push_str(&format!("{key} = {}\n", s.join(", ")));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const THOM: &str = "# Thom\nvars = x y z\nparams = l\nexclude = l*(l^3+8)*(l^3-1)\nmap = x^2+l*y*z; y^2+l*x*z; z^2+l*x*y\n";

    #[test]
    fn parses_and_echoes() {
        let g = parse_germ_file(THOM).unwrap();
        assert_eq!((g.germ.n(), g.germ.p()), (3, 3));
        let again = parse_germ_file(&g.echo()).unwrap();
        assert_eq!(again.germ.components(), g.germ.components());
        assert_eq!(again.echo(), g.echo());
    }

    #[test]
    fn diagnostics() {
        let e = parse_germ_file("vars = x\nmap = x+1\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_germ_file("vars = x\nmap = \n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_germ_file("vars = x\nfoo = 1\n").unwrap_err();
        assert!(e.to_string().contains("unknown key"));
        assert!(parse_germ_file("map = x\n").is_err());
    }
}
