//! The catalog of named checks a scenario can invoke.

use std::collections::BTreeMap;

use wandering_core::criteria::{self, Weight};
use wandering_core::dirichlet::{self, DirichletPoly};
use wandering_core::factorization::{
    circle_samples, intertwiner_check, isometry_residual, Chain, PairedIsometry,
};
use wandering_core::subspace::{
    construct_intermediate, recover_wandering, wandering_of, InvariantModel, DEFAULT_RANK_TOL,
    TRUNCATION_GUARD,
};
use wandering_core::{Complex64, Error, SymVector};

use crate::scenario::{CheckSpec, SubspaceSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    CoeffCriterion,
    RadialConstancy,
    CrossCondition,
    WanderingSpan,
    ShiftGram,
    RoundTrip,
    DirichletIsometry,
    AdjointRelation,
    Invariance,
    WanderingRecovery,
    OrthonormalSystem,
    Containment,
    Intermediate,
    Isometry,
    Intertwiner,
    Factorization,
}

impl CheckKind {
    pub const ALL: [CheckKind; 16] = [
        CheckKind::CoeffCriterion,
        CheckKind::RadialConstancy,
        CheckKind::CrossCondition,
        CheckKind::WanderingSpan,
        CheckKind::ShiftGram,
        CheckKind::RoundTrip,
        CheckKind::DirichletIsometry,
        CheckKind::AdjointRelation,
        CheckKind::Invariance,
        CheckKind::WanderingRecovery,
        CheckKind::OrthonormalSystem,
        CheckKind::Containment,
        CheckKind::Intermediate,
        CheckKind::Isometry,
        CheckKind::Intertwiner,
        CheckKind::Factorization,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::CoeffCriterion => "coeff_criterion",
            CheckKind::RadialConstancy => "radial_constancy",
            CheckKind::CrossCondition => "cross_condition",
            CheckKind::WanderingSpan => "wandering_span",
            CheckKind::ShiftGram => "shift_gram",
            CheckKind::RoundTrip => "round_trip",
            CheckKind::DirichletIsometry => "dirichlet_isometry",
            CheckKind::AdjointRelation => "adjoint_relation",
            CheckKind::Invariance => "invariance",
            CheckKind::WanderingRecovery => "wandering_recovery",
            CheckKind::OrthonormalSystem => "orthonormal_system",
            CheckKind::Containment => "containment",
            CheckKind::Intermediate => "intermediate",
            CheckKind::Isometry => "isometry",
            CheckKind::Intertwiner => "intertwiner",
            CheckKind::Factorization => "factorization",
        }
    }

    pub fn parse(s: &str) -> Option<CheckKind> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    pub fn validate_arity(self, n: usize) -> Result<(), String> {
        let ok = match self {
            CheckKind::WanderingSpan => n >= 1,
            CheckKind::CrossCondition
            | CheckKind::ShiftGram
            | CheckKind::AdjointRelation
            | CheckKind::Containment
            | CheckKind::Intermediate
            | CheckKind::Isometry
            | CheckKind::Intertwiner => n == 2,
            CheckKind::Factorization => n == 3,
            _ => n == 1,
        };
        if ok {
            Ok(())
        } else {
            Err(format!("wrong number of objects ({n})"))
        }
    }

    /// Whether the object in position `slot` names a subspace (otherwise a
    /// vector).
    pub fn object_is_subspace(self, slot: usize) -> bool {
        match self {
            CheckKind::Invariance
            | CheckKind::WanderingRecovery
            | CheckKind::OrthonormalSystem
            | CheckKind::Containment
            | CheckKind::Isometry
            | CheckKind::Intertwiner
            | CheckKind::Factorization => true,
            CheckKind::Intermediate => slot == 0,
            _ => false,
        }
    }

    /// Whether this check reads any subspace.
    pub fn uses_subspaces(self) -> bool {
        (0..3).any(|s| self.object_is_subspace(s))
    }
}

/// Result of one check, before it is stamped into a report row.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub worst_value: f64,
    pub worst_index: Option<i64>,
    pub tol: f64,
}

impl Outcome {
    fn new(worst_value: f64, worst_index: Option<i64>, tol: f64) -> Self {
        Outcome {
            passed: worst_value <= tol,
            worst_value,
            worst_index,
            tol,
        }
    }

    fn from_report(r: &criteria::CriterionReport) -> Self {
        Outcome::new(r.worst_value, Some(r.worst_index), r.tol)
    }

    /// A failed precondition: the row fails with an infinite violation.
    fn premise_failed(tol: f64) -> Self {
        Outcome {
            passed: false,
            worst_value: f64::INFINITY,
            worst_index: None,
            tol,
        }
    }
}

/// Everything a check can read.
pub struct Context<'a> {
    pub cap: usize,
    pub tol: f64,
    pub samples: usize,
    pub vectors: &'a BTreeMap<String, SymVector>,
    pub models: &'a BTreeMap<String, InvariantModel>,
}

/// Builds the truncated model for a subspace spec.
pub fn build_model(
    spec: &SubspaceSpec,
    vectors: &BTreeMap<String, SymVector>,
    cap: usize,
) -> Result<InvariantModel, Error> {
    match spec {
        SubspaceSpec::Zeros { zeros } => {
            let zs: Vec<Complex64> = zeros.iter().map(|&z| z.into()).collect();
            InvariantModel::zero_set(&zs, cap)
        }
        SubspaceSpec::Generators { generators } => {
            let gs: Vec<SymVector> = generators.iter().map(|g| vectors[g].clone()).collect();
            InvariantModel::generated_by(&gs, cap, DEFAULT_RANK_TOL)
        }
    }
}

pub fn execute(kind: CheckKind, spec: &CheckSpec, ctx: &Context) -> Outcome {
    let tol = ctx.tol;
    let vec = |i: usize| &ctx.vectors[&spec.objects[i]];
    let model = |i: usize| &ctx.models[&spec.objects[i]];
    let samples = || circle_samples(ctx.samples);
    match kind {
        CheckKind::CoeffCriterion => {
            let q = vec(0);
            let weight = match spec.weight.as_deref() {
                Some("j") => Weight::Unshifted,
                _ => Weight::Shifted,
            };
            Outcome::from_report(&criteria::coeff_criterion_with_tol(
                q,
                weight,
                tol * q.norm_sqr(),
            ))
        }
        CheckKind::RadialConstancy => {
            let q = vec(0);
            Outcome::from_report(&criteria::radial_constancy_with_tol(q, tol * q.norm_sqr()))
        }
        CheckKind::CrossCondition => {
            let (a, b) = (vec(0), vec(1));
            Outcome::from_report(&criteria::cross_condition_with_tol(
                a,
                b,
                tol * a.norm() * b.norm(),
            ))
        }
        CheckKind::WanderingSpan => {
            let basis: Vec<SymVector> = (0..spec.objects.len()).map(|i| vec(i).clone()).collect();
            match criteria::is_wandering_span_with_tol(&basis, tol) {
                Ok(r) => Outcome::from_report(&r),
                Err(_) => Outcome::premise_failed(tol),
            }
        }
        CheckKind::ShiftGram => {
            let (a, b) = (vec(0), vec(1));
            let d = a.effective_degree();
            let kmax = spec.kmax.unwrap_or(ctx.cap.saturating_sub(d)).max(1);
            let t = tol * a.norm() * b.norm();
            match criteria::shift_gram(a, b, kmax, ctx.cap) {
                Ok(g) => {
                    let (k, v) = g
                        .iter()
                        .enumerate()
                        .map(|(i, x)| (i as i64 + 1, x.norm()))
                        .fold((1, 0.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
                    Outcome::new(v, Some(k), t)
                }
                Err(_) => Outcome::premise_failed(t),
            }
        }
        CheckKind::RoundTrip => {
            let q = vec(0);
            let back = SymVector::reconstruct(&q.slice_z0());
            Outcome::new((back - q.clone()).norm(), None, tol * q.norm())
        }
        CheckKind::DirichletIsometry => {
            let f = dirichlet::unembed(vec(0));
            let d = dirichlet::dirichlet_inner(&f, &f).re;
            let h = dirichlet::embed(&f).norm_sqr();
            Outcome::new((h - d).abs(), None, tol * d)
        }
        CheckKind::AdjointRelation => {
            let f: DirichletPoly = dirichlet::unembed(vec(0));
            let g: DirichletPoly = dirichlet::unembed(vec(1));
            let r = dirichlet::adjoint_relation_residual(&f, &g);
            Outcome::new(r, None, tol * vec(0).norm() * vec(1).norm())
        }
        CheckKind::Invariance => Outcome::new(model(0).invariance_residual(), None, tol),
        CheckKind::WanderingRecovery => {
            let w = wandering_of(model(0));
            match recover_wandering(&w, ctx.cap, TRUNCATION_GUARD) {
                Ok(r) => Outcome::new(r.residual.max(r.surplus_low_mass), None, tol),
                Err(_) => Outcome::premise_failed(tol),
            }
        }
        CheckKind::OrthonormalSystem => {
            let w = wandering_of(model(0));
            Outcome::from_report(&criteria::orthonormal_system_check_with_tol(&w, tol))
        }
        CheckKind::Containment => Outcome::new(model(0).containment_residual(model(1)), None, tol),
        CheckKind::Intermediate => {
            let n = model(0);
            let wn = wandering_of(n);
            match construct_intermediate(&wn, vec(1), ctx.cap) {
                Ok(l) => {
                    let worst = l.containment_residual(n).max(l.invariance_residual());
                    Outcome::new(worst, None, tol)
                }
                Err(_) => Outcome::premise_failed(tol),
            }
        }
        CheckKind::Isometry => {
            let iso = PairedIsometry::new(wandering_of(model(0)), wandering_of(model(1)));
            match iso.and_then(|iso| isometry_residual(&iso, &samples())) {
                Ok(r) => Outcome::new(r, None, tol),
                Err(_) => Outcome::premise_failed(tol),
            }
        }
        CheckKind::Intertwiner => {
            let phase = spec.phase.unwrap_or(0.0);
            let iso = PairedIsometry::new(wandering_of(model(0)), wandering_of(model(1)));
            let res = iso.and_then(|iso| {
                let r = iso.rank();
                let u: Vec<Vec<Complex64>> = (0..r)
                    .map(|i| {
                        (0..r)
                            .map(|j| {
                                if i == j {
                                    Complex64::from_polar(1.0, phase)
                                } else {
                                    Complex64::new(0.0, 0.0)
                                }
                            })
                            .collect()
                    })
                    .collect();
                intertwiner_check(&iso, &u, &samples())
            });
            match res {
                Ok(r) => Outcome::new(r, None, tol),
                Err(_) => Outcome::premise_failed(tol),
            }
        }
        CheckKind::Factorization => {
            let chain = Chain::new(model(0), model(1), model(2), tol.max(1e-8));
            match chain.and_then(|c| c.factorization_residual(&samples())) {
                Ok(r) => Outcome::new(r, None, tol),
                Err(_) => Outcome::premise_failed(tol),
            }
        }
    }
}
