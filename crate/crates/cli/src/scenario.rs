//! Scenario files: named vectors and subspaces plus an ordered list of
//! checks, in JSON.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use wandering_core::{BergmanPoly, BidiscPoly, Complex64, SymVector};

use crate::checks::CheckKind;
use crate::error::CliError;

pub const DEFAULT_TOL: f64 = 1e-10;

/// `{re, im}` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl From<ComplexValue> for Complex64 {
    fn from(c: ComplexValue) -> Self {
        Complex64::new(c.re, c.im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisTag {
    /// `z^m w^n` in H²(T²); index `[m, n]`.
    MonomialZw,
    /// `e_n = p_n / sqrt(n + 1)`; index `n`.
    SymE,
    /// Bergman monomial `z^n`, mapped through the unitary; index `n`.
    BergmanZ,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffIndex {
    Single(usize),
    Pair([usize; 2]),
}

/// One entry of the coefficient exchange format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffRecord {
    pub basis: BasisTag,
    pub index: CoeffIndex,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SubspaceSpec {
    Zeros { zeros: Vec<ComplexValue> },
    Generators { generators: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    pub check: String,
    pub objects: Vec<String>,
    /// `"j_plus_1"` (default) or `"j"`, for `coeff_criterion`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kmax: Option<usize>,
    /// Phase angle of the scalar unitary used by `intertwiner`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub cap: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub vectors: BTreeMap<String, Vec<CoeffRecord>>,
    #[serde(default)]
    pub subspaces: BTreeMap<String, SubspaceSpec>,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

/// Command-line values that take precedence over scenario fields.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub cap: Option<usize>,
    pub tol: Option<f64>,
    pub samples: Option<usize>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn apply(&mut self, o: Overrides) {
        if let Some(cap) = o.cap {
            self.cap = cap;
        }
        if let Some(tol) = o.tol {
            self.tol = tol;
        }
        if let Some(samples) = o.samples {
            self.samples = Some(samples);
        }
    }

    /// Circle sample count, defaulting to `4 cap + 1`.
    pub fn sample_count(&self) -> usize {
        self.samples
            .unwrap_or_else(|| wandering_core::factorization::default_sample_count(self.cap))
    }

    /// Resolves every name and checks every structural constraint. Nothing
    /// is executed.
    pub fn validate(&self) -> Result<Resolved, CliError> {
        let invalid = |msg: String| Err(CliError::Validation(msg));
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return invalid(format!("tol must be positive, got {}", self.tol));
        }
        if self.sample_count() == 0 {
            return invalid("samples must be positive".into());
        }
        let mut vectors = BTreeMap::new();
        for (name, records) in &self.vectors {
            let v = build_vector(name, records)?;
            let d = v.effective_degree();
            if d > self.cap {
                return invalid(format!(
                    "vector {name} has degree {d} above cap {}",
                    self.cap
                ));
            }
            vectors.insert(name.clone(), v.with_degree(self.cap));
        }
        for (name, spec) in &self.subspaces {
            match spec {
                SubspaceSpec::Zeros { zeros } => {
                    if zeros.len() > self.cap {
                        return invalid(format!("subspace {name} has more zeros than the cap"));
                    }
                    if let Some(z) = zeros.iter().find(|z| Complex64::from(**z).norm() >= 1.0) {
                        return invalid(format!(
                            "subspace {name}: zero {} + {}i is outside the open disc",
                            z.re, z.im
                        ));
                    }
                }
                SubspaceSpec::Generators { generators } => {
                    if generators.is_empty() {
                        return invalid(format!("subspace {name} has no generators"));
                    }
                    for g in generators {
                        if !vectors.contains_key(g) {
                            return invalid(format!("subspace {name}: undefined vector {g}"));
                        }
                    }
                }
            }
        }
        let mut checks = Vec::with_capacity(self.checks.len());
        for (i, spec) in self.checks.iter().enumerate() {
            let kind = CheckKind::parse(&spec.check).ok_or_else(|| {
                CliError::Validation(format!("check {i}: unknown check {}", spec.check))
            })?;
            kind.validate_arity(spec.objects.len())
                .map_err(|m| CliError::Validation(format!("check {i} ({}): {m}", spec.check)))?;
            for (slot, name) in spec.objects.iter().enumerate() {
                let wants_subspace = kind.object_is_subspace(slot);
                let found = if wants_subspace {
                    self.subspaces.contains_key(name)
                } else {
                    vectors.contains_key(name)
                };
                if !found {
                    let what = if wants_subspace { "subspace" } else { "vector" };
                    return invalid(format!(
                        "check {i} ({}): undefined {what} {name}",
                        spec.check
                    ));
                }
            }
            if let Some(w) = &spec.weight {
                if w != "j_plus_1" && w != "j" {
                    return invalid(format!("check {i}: unknown weight {w}"));
                }
            }
            checks.push((kind, spec.clone()));
        }
        Ok(Resolved { vectors, checks })
    }
}

/// A validated scenario: vectors materialized, checks typed.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub vectors: BTreeMap<String, SymVector>,
    pub checks: Vec<(CheckKind, CheckSpec)>,
}

/// Sums the records of one named vector into a symmetric vector.
///
/// Monomial records must add up to a symmetric polynomial; anything with a
/// component along `[z - w]` is rejected rather than silently projected.
pub fn build_vector(name: &str, records: &[CoeffRecord]) -> Result<SymVector, CliError> {
    let invalid = |msg: String| Err(CliError::Validation(format!("vector {name}: {msg}")));
    if records.is_empty() {
        return invalid("no coefficients".into());
    }
    let mut sym = SymVector::zeros(0);
    let mut mono: Vec<(usize, usize, Complex64)> = Vec::new();
    let mut bergman: Vec<Complex64> = Vec::new();
    for r in records {
        if !(r.re.is_finite() && r.im.is_finite()) {
            return invalid("non-finite coefficient".into());
        }
        let c = Complex64::new(r.re, r.im);
        match (r.basis, r.index) {
            (BasisTag::MonomialZw, CoeffIndex::Pair([m, n])) => mono.push((m, n, c)),
            (BasisTag::SymE, CoeffIndex::Single(n)) => {
                let mut e = SymVector::basis(n);
                e = e * c;
                sym.axpy(Complex64::new(1.0, 0.0), &e);
            }
            (BasisTag::BergmanZ, CoeffIndex::Single(n)) => {
                if bergman.len() <= n {
                    bergman.resize(n + 1, Complex64::new(0.0, 0.0));
                }
                bergman[n] += c;
            }
            (BasisTag::MonomialZw, CoeffIndex::Single(_)) => {
                return invalid("monomial_zw needs an index pair [m, n]".into())
            }
            (_, CoeffIndex::Pair(_)) => {
                return invalid("sym_e and bergman_z take a single index".into())
            }
        }
    }
    if !mono.is_empty() {
        let p = BidiscPoly::from_terms(&mono);
        match p.to_sym(1e-12) {
            Ok(v) => sym.axpy(Complex64::new(1.0, 0.0), &v),
            Err(_) => return invalid("monomial coefficients are not symmetric in z and w".into()),
        }
    }
    if !bergman.is_empty() {
        sym.axpy(
            Complex64::new(1.0, 0.0),
            &BergmanPoly::new(bergman).to_sym(),
        );
    }
    Ok(sym)
}
