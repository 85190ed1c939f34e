//! The three subcommands, independent of argument parsing.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use wandering_core::criteria::{self, Weight};
use wandering_core::subspace::{recover_wandering, wandering_of, InvariantModel, TRUNCATION_GUARD};
use wandering_core::{Complex64, Error, SymVector};

use crate::checks::{build_model, execute, CheckKind, Context, Outcome};
use crate::error::CliError;
use crate::report::{fmt_float, ReportRow};
use crate::scenario::{Overrides, Scenario, SubspaceSpec};

/// Builds a rayon pool with `jobs` threads (one when `None`).
fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(1).max(1))
        .build()
        .map_err(|e| CliError::Validation(format!("cannot start worker pool: {e}")))
}

/// Loads, validates and executes a scenario. Returns the report rows in
/// scenario order and the exit code (0 all passed, 1 otherwise).
pub fn run(
    path: &Path,
    overrides: Overrides,
    jobs: Option<usize>,
    stable: bool,
) -> Result<(Vec<ReportRow>, i32), CliError> {
    let mut scenario = Scenario::load(path)?;
    scenario.apply(overrides);
    run_scenario(&scenario, jobs, stable)
}

pub fn run_scenario(
    scenario: &Scenario,
    jobs: Option<usize>,
    stable: bool,
) -> Result<(Vec<ReportRow>, i32), CliError> {
    let resolved = scenario.validate()?;
    let cap = scenario.cap;
    let pool = pool(jobs)?;

    // Only subspaces some check reads are built.
    let mut wanted: Vec<&String> = resolved
        .checks
        .iter()
        .flat_map(|(kind, spec)| {
            spec.objects
                .iter()
                .enumerate()
                .filter(move |(slot, _)| kind.object_is_subspace(*slot))
                .map(|(_, name)| name)
        })
        .collect();
    wanted.sort();
    wanted.dedup();

    let rows = pool.install(|| {
        let built: Vec<(String, Result<InvariantModel, Error>)> = wanted
            .par_iter()
            .map(|name| {
                let m = build_model(&scenario.subspaces[*name], &resolved.vectors, cap);
                ((*name).clone(), m)
            })
            .collect();
        let mut models = BTreeMap::new();
        let mut broken = BTreeMap::new();
        for (name, m) in built {
            match m {
                Ok(m) => {
                    models.insert(name, m);
                }
                Err(e) => {
                    broken.insert(name, e);
                }
            }
        }
        let ctx = Context {
            cap,
            tol: scenario.tol,
            samples: scenario.sample_count(),
            vectors: &resolved.vectors,
            models: &models,
        };
        resolved
            .checks
            .par_iter()
            .map(|(kind, spec)| {
                let start = Instant::now();
                let needs_broken = spec
                    .objects
                    .iter()
                    .enumerate()
                    .any(|(slot, n)| kind.object_is_subspace(slot) && broken.contains_key(n));
                let outcome = if needs_broken {
                    Outcome {
                        passed: false,
                        worst_value: f64::INFINITY,
                        worst_index: None,
                        tol: scenario.tol,
                    }
                } else {
                    execute(*kind, spec, &ctx)
                };
                let elapsed_ms = if stable {
                    0
                } else {
                    start.elapsed().as_millis() as u64
                };
                ReportRow {
                    scenario: scenario.name.clone(),
                    check: kind.name().to_string(),
                    objects: spec.objects.join(";"),
                    passed: outcome.passed,
                    worst_value: outcome.worst_value,
                    worst_index: outcome.worst_index,
                    tol: outcome.tol,
                    cap,
                    elapsed_ms,
                }
            })
            .collect::<Vec<_>>()
    });
    let code = if rows.iter().all(|r| r.passed) { 0 } else { 1 };
    Ok((rows, code))
}

/// Checks the convergence study can run.
pub const CONVERGENCE_CHECKS: [CheckKind; 4] = [
    CheckKind::RadialConstancy,
    CheckKind::OrthonormalSystem,
    CheckKind::Invariance,
    CheckKind::WanderingRecovery,
];

/// Allowed relative growth between consecutive caps.
pub const MONOTONE_SLACK: f64 = 0.1;

/// Residuals this small are roundoff and count as equal.
pub const ROUNDOFF_FLOOR: f64 = f64::EPSILON;

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub check: CheckKind,
    pub rows: Vec<(usize, f64)>,
    pub monotone: bool,
}

impl ConvergenceTable {
    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "cap,residual,non_increasing")?;
        let mut prev: Option<f64> = None;
        for &(cap, r) in &self.rows {
            let ok = prev.is_none_or(|p| step_ok(p, r));
            writeln!(out, "{cap},{},{ok}", fmt_float(r))?;
            prev = Some(r);
        }
        out.flush()
    }
}

fn step_ok(prev: f64, next: f64) -> bool {
    next <= prev * (1.0 + MONOTONE_SLACK) || next <= ROUNDOFF_FLOOR
}

/// Where the subspace of a convergence study comes from.
pub enum SubspaceSource {
    Named { scenario: Scenario, name: String },
    Zeros(Vec<Complex64>),
}

/// Regenerates the subspace at each cap and measures `check` on it.
pub fn convergence(
    source: &SubspaceSource,
    caps: &[usize],
    check: &str,
    jobs: Option<usize>,
) -> Result<ConvergenceTable, CliError> {
    let kind = CheckKind::parse(check)
        .filter(|k| CONVERGENCE_CHECKS.contains(k))
        .ok_or_else(|| {
            let names: Vec<&str> = CONVERGENCE_CHECKS.iter().map(|k| k.name()).collect();
            CliError::Validation(format!(
                "convergence check must be one of {}, got {check}",
                names.join(", ")
            ))
        })?;
    if caps.is_empty() {
        return Err(CliError::Validation("no caps given".into()));
    }
    if caps.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Validation(
            "caps must be strictly increasing".into(),
        ));
    }
    let (spec, raw_vectors) = match source {
        SubspaceSource::Named { scenario, name } => {
            let spec = scenario
                .subspaces
                .get(name)
                .ok_or_else(|| CliError::Validation(format!("undefined subspace {name}")))?
                .clone();
            (spec, Some(scenario))
        }
        SubspaceSource::Zeros(zs) => (
            SubspaceSpec::Zeros {
                zeros: zs
                    .iter()
                    .map(|z| crate::scenario::ComplexValue { re: z.re, im: z.im })
                    .collect(),
            },
            None,
        ),
    };
    // Validate once per cap so that degree and zero-count limits apply.
    let per_cap: Vec<(usize, BTreeMap<String, SymVector>)> = caps
        .iter()
        .map(|&cap| {
            let mut s = raw_vectors.cloned().unwrap_or_else(|| Scenario {
                name: "convergence".into(),
                cap,
                tol: crate::scenario::DEFAULT_TOL,
                samples: None,
                vectors: BTreeMap::new(),
                subspaces: BTreeMap::new(),
                checks: Vec::new(),
            });
            s.cap = cap;
            s.checks.clear();
            s.subspaces = BTreeMap::from([("target".to_string(), spec.clone())]);
            s.validate().map(|r| (cap, r.vectors))
        })
        .collect::<Result<_, _>>()?;
    let pool = pool(jobs)?;
    let rows = pool.install(|| {
        per_cap
            .par_iter()
            .map(|(cap, vectors)| {
                let model = build_model(&spec, vectors, *cap)?;
                Ok((*cap, convergence_residual(kind, &model, *cap)))
            })
            .collect::<Result<Vec<_>, Error>>()
    })?;
    let monotone = rows.windows(2).all(|w| step_ok(w[0].1, w[1].1));
    Ok(ConvergenceTable {
        check: kind,
        rows,
        monotone,
    })
}

fn convergence_residual(kind: CheckKind, model: &InvariantModel, cap: usize) -> f64 {
    match kind {
        CheckKind::RadialConstancy => wandering_of(model)
            .vectors()
            .iter()
            .map(|q| criteria::radial_constancy(q).worst_value)
            .fold(0.0, f64::max),
        CheckKind::OrthonormalSystem => {
            criteria::orthonormal_system_check(&wandering_of(model)).worst_value
        }
        CheckKind::Invariance => model.invariance_residual(),
        CheckKind::WanderingRecovery => {
            match recover_wandering(&wandering_of(model), cap, TRUNCATION_GUARD) {
                Ok(r) => r.residual.max(r.surplus_low_mass),
                Err(_) => f64::INFINITY,
            }
        }
        _ => unreachable!("filtered by CONVERGENCE_CHECKS"),
    }
}

/// One line of the weight-adjudication table.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleRow {
    pub k: usize,
    /// Laurent coefficient of the radial sum at `-k`.
    pub radial: Complex64,
    pub shifted: Complex64,
    pub unshifted: Complex64,
    pub gram: Complex64,
    pub radial_agrees: bool,
    pub shifted_agrees: bool,
    pub unshifted_agrees: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleTable {
    pub rows: Vec<OracleRow>,
    pub tol: f64,
}

impl OracleTable {
    /// Whether the radial sum and the shifted weight agree with the ambient
    /// shift Gram values everywhere.
    pub fn consistent(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.radial_agrees && r.shifted_agrees)
    }

    /// Indices where the unshifted weight disagrees with the ambient values.
    pub fn unshifted_disagreements(&self) -> Vec<usize> {
        self.rows
            .iter()
            .filter(|r| !r.unshifted_agrees)
            .map(|r| r.k)
            .collect()
    }

    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(
            out,
            "k,radial_re,radial_im,shifted_re,shifted_im,unshifted_re,unshifted_im,gram_re,gram_im,radial_agrees,shifted_agrees,unshifted_agrees"
        )?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                r.k,
                fmt_float(r.radial.re),
                fmt_float(r.radial.im),
                fmt_float(r.shifted.re),
                fmt_float(r.shifted.im),
                fmt_float(r.unshifted.re),
                fmt_float(r.unshifted.im),
                fmt_float(r.gram.re),
                fmt_float(r.gram.im),
                r.radial_agrees,
                r.shifted_agrees,
                r.unshifted_agrees,
            )?;
        }
        out.flush()
    }
}

/// Tabulates the radial-sum coefficients, both coefficient-criterion
/// weightings and the ambient shift Gram values `<T_z^k q, q>` for
/// `k = 1..=kmax`. Agreement is judged to `tol * ||q||^2`.
pub fn oracle(q: &SymVector, kmax: usize, cap: usize, tol: f64) -> Result<OracleTable, CliError> {
    if kmax == 0 {
        return Err(CliError::Validation("kmax must be positive".into()));
    }
    let gram = criteria::shift_gram(q, q, kmax, cap)?;
    let radial = criteria::radial_sum(q);
    let shifted = criteria::coefficient_sums(q, Weight::Shifted);
    let unshifted = criteria::coefficient_sums(q, Weight::Unshifted);
    let zero = Complex64::new(0.0, 0.0);
    let at = |v: &[Complex64], k: usize| v.get(k - 1).copied().unwrap_or(zero);
    let t = tol * q.norm_sqr();
    let rows = (1..=kmax)
        .map(|k| {
            let g = gram[k - 1];
            let c = radial.coeff(-(k as i64));
            let s = at(&shifted, k);
            let u = at(&unshifted, k);
            OracleRow {
                k,
                radial: c,
                shifted: s,
                unshifted: u,
                gram: g,
                radial_agrees: (c - g).norm() <= t,
                shifted_agrees: (s - g).norm() <= t,
                unshifted_agrees: (u - g).norm() <= t,
            }
        })
        .collect();
    Ok(OracleTable { rows, tol: t })
}
