use std::collections::HashSet;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use super::upoly::ZPoly;
use super::PolyError;

/// Product of parameter polynomials assumed nonzero. The factors are kept
/// as written so that a vanishing one can be reported as a witness.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ExcludedLocus {
    factors: Vec<ZPoly>,
}

impl ExcludedLocus {
    pub fn new(factors: Vec<ZPoly>) -> Result<Self, PolyError> {
        if factors.iter().any(ZPoly::is_zero) {
            return Err(PolyError::ZeroExcludedLocus);
        }
        Ok(ExcludedLocus { factors: factors.into_iter().filter(|f| !f.is_constant()).collect() })
    }

    pub fn factors(&self) -> &[ZPoly] {
        &self.factors
    }

    pub fn product(&self) -> ZPoly {
        self.factors.iter().fold(ZPoly::one(), |a, f| a.mul(f))
    }

    /// First factor vanishing at `v`, if any.
    pub fn witness(&self, v: &BigRational) -> Option<&ZPoly> {
        self.factors.iter().find(|f| f.eval(v).is_zero())
    }
}

/// Variables, optional formal parameter and its excluded locus.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RingSpec {
    variables: Vec<String>,
    parameter: Option<String>,
    excluded: Option<ExcludedLocus>,
}

impl RingSpec {
    pub fn new(
        variables: Vec<String>,
        parameter: Option<String>,
        excluded: Option<ExcludedLocus>,
    ) -> Result<Arc<Self>, PolyError> {
        let mut seen = HashSet::new();
        for v in &variables {
            if !is_identifier(v) {
                return Err(PolyError::BadName(v.clone()));
            }
            if !seen.insert(v.as_str()) {
                return Err(PolyError::DuplicateName(v.clone()));
            }
        }
        if let Some(p) = &parameter {
            if !is_identifier(p) {
                return Err(PolyError::BadName(p.clone()));
            }
            if seen.contains(p.as_str()) {
                return Err(PolyError::DuplicateName(p.clone()));
            }
        } else if excluded.as_ref().is_some_and(|e| !e.factors.is_empty()) {
            return Err(PolyError::LocusWithoutParameter);
        }
        Ok(Arc::new(RingSpec { variables, parameter, excluded }))
    }

    /// Ring over the rationals in the given variables.
    pub fn rational(vars: &[&str]) -> Arc<Self> {
        Self::new(vars.iter().map(|s| s.to_string()).collect(), None, None).expect("valid variable names")
    }

    /// Ring with a formal parameter.
    pub fn with_param(vars: &[&str], param: &str) -> Arc<Self> {
        Self::new(vars.iter().map(|s| s.to_string()).collect(), Some(param.to_string()), None)
            .expect("valid names")
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn parameter(&self) -> Option<&str> {
        self.parameter.as_deref()
    }

    pub fn excluded(&self) -> Option<&ExcludedLocus> {
        self.excluded.as_ref()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    /// Parameter name used when printing, even if there is none.
    pub fn param_name(&self) -> &str {
        self.parameter.as_deref().unwrap_or("t")
    }

    /// Same variables, parameter dropped (after specialization).
    pub fn without_parameter(&self) -> Arc<Self> {
        Arc::new(RingSpec { variables: self.variables.clone(), parameter: None, excluded: None })
    }

    /// Same parameter and locus, different variables.
    pub fn with_variables(&self, variables: Vec<String>) -> Result<Arc<Self>, PolyError> {
        Self::new(variables, self.parameter.clone(), self.excluded.clone())
    }

    pub fn with_excluded(&self, excluded: Option<ExcludedLocus>) -> Result<Arc<Self>, PolyError> {
        Self::new(self.variables.clone(), self.parameter.clone(), excluded)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_ascii_alphabetic() || ch == '_')
        && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}

pub(crate) fn same_ring(a: &Arc<RingSpec>, b: &Arc<RingSpec>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}
