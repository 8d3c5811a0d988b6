//! Sampling falsifier for matrix convexity in `x` of an nc function `F(a, x)` on `x`-balls
//! around points of the smallest nc set containing `A`.
//!
//! A failing report carries a checkable witness and is conclusive. A passing report is
//! evidence only: the definition quantifies over every pair in the ball.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{NcError, Result};
use crate::evaluation::NcFunction;
use crate::free_algebra::VarClass;
use crate::linalg::{self, CMat};
use crate::matrix_domain::{
    ca_element, derive_seed, rng_from_seed, sample_ball_point, HermTuple, TupleJson, UnitaryChoice,
};
use crate::one_var::{PSD_TOL, WITNESS_TOL};

/// Hermiticity gate on sampled values `F(A, X)`, relative to `max(1, ‖F(A, X)‖_max)`.
pub const EVAL_HERMITIAN_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct ConvexityConfig {
    pub epsilon: f64,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    /// Shrink failing witnesses toward the midpoint before reporting.
    pub shrink: bool,
}

impl ConvexityConfig {
    pub fn new(epsilon: f64, trials: usize, seed: u64) -> Self {
        ConvexityConfig {
            epsilon,
            trials,
            seed,
            tol: PSD_TOL,
            shrink: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaDescriptor {
    pub m: usize,
    pub kappa: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvexityWitness {
    pub alpha: AlphaDescriptor,
    pub a: TupleJson,
    pub x: TupleJson,
    pub y: TupleJson,
    pub t: f64,
    pub defect_spectrum: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelSummary {
    pub m: usize,
    pub kappa: usize,
    pub min_defect_eig: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvexityReport {
    pub test: &'static str,
    pub pass: bool,
    pub trials: usize,
    pub min_defect_eig: f64,
    pub hermitian_ok: bool,
    pub max_hermitian_deviation: f64,
    pub epsilon: f64,
    pub levels: Vec<LevelSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ConvexityWitness>,
}

/// Spectrum (ascending) of `t·F(A,X) + (1−t)·F(A,Y) − F(A, tX + (1−t)Y)`.
pub fn defect_spectrum(f: &dyn NcFunction, a: &HermTuple, x: &HermTuple, y: &HermTuple, t: f64) -> Result<Vec<f64>> {
    let fx = f.evaluate_tuples(a, x)?;
    let fy = f.evaluate_tuples(a, y)?;
    let fm = f.evaluate_tuples(a, &x.mix(y, t)?)?;
    Ok(defect_from_values(&fx, &fy, &fm, t))
}

fn defect_from_values(fx: &CMat, fy: &CMat, fm: &CMat, t: f64) -> Vec<f64> {
    let d = fx.scale(t) + fy.scale(1.0 - t) - fm;
    linalg::hermitian_eigenvalues(&d)
}

fn relative_hermitian_deviation(m: &CMat) -> f64 {
    linalg::hermitian_deviation(m) / linalg::max_abs(m).max(1.0)
}

struct Worst {
    eig: f64,
    x: HermTuple,
    y: HermTuple,
    t: f64,
    spectrum: Vec<f64>,
}

/// Tests convexity in `x` at the single point `A` on the `ε`-ball of matching size.
pub fn test_convexity_at_a(f: &dyn NcFunction, a: &HermTuple, config: &ConvexityConfig) -> Result<ConvexityReport> {
    test_level(f, a, AlphaDescriptor { m: 1, kappa: a.size() }, config)
}

fn test_level(
    f: &dyn NcFunction,
    a: &HermTuple,
    alpha: AlphaDescriptor,
    config: &ConvexityConfig,
) -> Result<ConvexityReport> {
    if !(config.epsilon > 0.0) {
        return Err(NcError::Domain(format!(
            "epsilon must be positive, got {}",
            config.epsilon
        )));
    }
    let sig = f.signature();
    if a.arity() != sig.arity_a {
        return Err(NcError::Shape(format!(
            "a-tuple has arity {}, signature expects {}",
            a.arity(),
            sig.arity_a
        )));
    }
    let n = a.size();
    let mut worst: Option<Worst> = None;
    let mut max_herm: f64 = 0.0;

    for trial in 0..config.trials {
        let mut rng = rng_from_seed(derive_seed(config.seed, trial as u64));
        let x = sample_ball_point(&mut rng, sig.arity_x, n, config.epsilon);
        let y = sample_ball_point(&mut rng, sig.arity_x, n, config.epsilon);
        let t_uniform = loop {
            let t: f64 = rng.random();
            if t > 0.0 {
                break t;
            }
        };
        let eval = |z: &HermTuple| f.evaluate_tuples(a, z).map_err(|e| e.at_sample(trial));
        let fx = eval(&x)?;
        let fy = eval(&y)?;
        max_herm = max_herm
            .max(relative_hermitian_deviation(&fx))
            .max(relative_hermitian_deviation(&fy));
        for t in [0.5, t_uniform] {
            let fm = eval(&x.mix(&y, t)?)?;
            max_herm = max_herm.max(relative_hermitian_deviation(&fm));
            let spectrum = defect_from_values(&fx, &fy, &fm, t);
            let eig = spectrum.first().copied().unwrap_or(f64::INFINITY);
            if worst.as_ref().is_none_or(|w| eig < w.eig) {
                worst = Some(Worst {
                    eig,
                    x: x.clone(),
                    y: y.clone(),
                    t,
                    spectrum,
                });
            }
        }
    }

    let min_defect_eig = worst.as_ref().map_or(f64::INFINITY, |w| w.eig);
    let witness = match worst {
        Some(w) if w.eig < -WITNESS_TOL.max(config.tol) => {
            let w = if config.shrink { shrink_witness(f, a, w)? } else { w };
            Some(ConvexityWitness {
                alpha,
                a: a.into(),
                x: (&w.x).into(),
                y: (&w.y).into(),
                t: w.t,
                defect_spectrum: w.spectrum,
            })
        }
        _ => None,
    };
    let hermitian_ok = max_herm <= EVAL_HERMITIAN_TOL;
    Ok(ConvexityReport {
        test: "convexity_at_a",
        pass: hermitian_ok && min_defect_eig >= -config.tol,
        trials: config.trials,
        min_defect_eig,
        hermitian_ok,
        max_hermitian_deviation: max_herm,
        epsilon: config.epsilon,
        levels: vec![LevelSummary {
            m: alpha.m,
            kappa: alpha.kappa,
            min_defect_eig,
        }],
        witness,
    })
}

/// Shrunk witnesses keep the defect below `−SHRINK_MARGIN·WITNESS_TOL`.
const SHRINK_MARGIN: f64 = 10.0;

/// Pulls `X` and `Y` toward their midpoint by bisection on the scale of `X − Y`, keeping
/// the defect below `−SHRINK_MARGIN·WITNESS_TOL`.
fn shrink_witness(f: &dyn NcFunction, a: &HermTuple, w: Worst) -> Result<Worst> {
    let center = w.x.mix(&w.y, 0.5)?;
    let half = w.x.sub(&w.y)?.scale(0.5);
    let t = w.t;
    let at_scale = |s: f64| -> Result<(HermTuple, HermTuple, Vec<f64>)> {
        let x = center.add(&half.scale(s))?;
        let y = center.sub(&half.scale(s))?;
        let spec = defect_spectrum(f, a, &x, &y, t)?;
        Ok((x, y, spec))
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut best = w;
    for _ in 0..30 {
        let mid = 0.5 * (lo + hi);
        let (x, y, spec) = at_scale(mid)?;
        if spec[0] < -SHRINK_MARGIN * WITNESS_TOL {
            hi = mid;
            best = Worst {
                eig: spec[0],
                x,
                y,
                t,
                spectrum: spec,
            };
        } else {
            lo = mid;
        }
    }
    Ok(best)
}

/// Per-level seed used by [`test_convexity_at_ca`] for multiplicity `m`.
pub fn level_seed(seed: u64, m: usize) -> u64 {
    derive_seed(seed, 1_000_000 + m as u64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnitaryMode {
    Random,
    Identity,
}

/// Runs the single-point test at `α = U*(I_m ⊗ A)U` for every multiplicity, with the same
/// `ε` at every level, and merges the results.
pub fn test_convexity_at_ca(
    f: &dyn NcFunction,
    a: &HermTuple,
    multiplicities: &[usize],
    mode: UnitaryMode,
    config: &ConvexityConfig,
) -> Result<ConvexityReport> {
    if multiplicities.is_empty() {
        return Err(NcError::Domain("at least one multiplicity is required".into()));
    }
    let mut merged: Option<ConvexityReport> = None;
    for &m in multiplicities {
        let seed = level_seed(config.seed, m);
        let choice = match mode {
            UnitaryMode::Random => UnitaryChoice::Random {
                seed: derive_seed(seed, u64::MAX),
            },
            UnitaryMode::Identity => UnitaryChoice::Identity,
        };
        let alpha = ca_element(a, m, choice)?;
        let level_config = ConvexityConfig { seed, ..config.clone() };
        let report = test_level(
            f,
            &alpha.realized,
            AlphaDescriptor { m, kappa: a.size() },
            &level_config,
        )?;
        merged = Some(match merged {
            None => report,
            Some(acc) => merge(acc, report),
        });
    }
    let mut report = merged.expect("nonempty multiplicities");
    report.test = "convexity_at_ca";
    Ok(report)
}

fn merge(a: ConvexityReport, b: ConvexityReport) -> ConvexityReport {
    let (worse, better) = if b.min_defect_eig < a.min_defect_eig {
        (b, a)
    } else {
        (a, b)
    };
    let mut levels = better.levels;
    levels.extend(worse.levels);
    levels.sort_by_key(|l| l.m);
    ConvexityReport {
        test: worse.test,
        pass: worse.pass && better.pass,
        trials: worse.trials + better.trials,
        min_defect_eig: worse.min_defect_eig,
        hermitian_ok: worse.hermitian_ok && better.hermitian_ok,
        max_hermitian_deviation: worse.max_hermitian_deviation.max(better.max_hermitian_deviation),
        epsilon: worse.epsilon,
        levels,
        witness: worse.witness.or(better.witness),
    }
}

/// Re-evaluates a witness; returns the defect spectrum.
pub fn verify_witness(f: &dyn NcFunction, witness: &ConvexityWitness) -> Result<Vec<f64>> {
    let a = witness.a.clone().into_tuple(VarClass::A)?;
    let x = witness.x.clone().into_tuple(VarClass::X)?;
    let y = witness.y.clone().into_tuple(VarClass::X)?;
    defect_spectrum(f, &a, &x, &y, witness.t)
}
