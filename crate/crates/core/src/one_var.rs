//! One-variable matrix functions: spectral calculus, the Kraus and Pick representations,
//! and sampling testers for operator monotonicity and matrix convexity.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{NcError, Result};
use crate::free_algebra::VarClass;
use crate::linalg::{self, c, CMat, CVec, C64};
use crate::matrix_domain::{derive_seed, rng_from_seed, HermTuple, TupleJson};

/// A minimum eigenvalue at or above `-PSD_TOL` counts as positive semidefinite.
pub const PSD_TOL: f64 = 1e-8;
/// A failing sample is only reported as a witness when it violates by more than this.
pub const WITNESS_TOL: f64 = 1e-6;
/// Finite-difference step for derivative fallbacks.
pub const FD_STEP: f64 = 1e-6;
/// Smallest admissible `|1 − λt|` in the Kraus resolvent.
pub const POLE_GATE: f64 = 1e-8;
/// Sampling window used in place of an infinite interval end.
const UNBOUNDED_WINDOW: f64 = 20.0;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A real function on an open interval, with optional analytic derivatives.
#[derive(Clone)]
pub struct ScalarFn {
    f: RealFn,
    first: Option<RealFn>,
    second: Option<RealFn>,
    domain: (f64, f64),
}

impl fmt::Debug for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFn")
            .field("domain", &self.domain)
            .field("first", &self.first.is_some())
            .field("second", &self.second.is_some())
            .finish_non_exhaustive()
    }
}

impl ScalarFn {
    pub fn new(domain: (f64, f64), f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        ScalarFn {
            f: Arc::new(f),
            first: None,
            second: None,
            domain,
        }
    }

    /// Defined on the whole real line.
    pub fn entire(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::new((f64::NEG_INFINITY, f64::INFINITY), f)
    }

    pub fn with_derivative(mut self, d: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.first = Some(Arc::new(d));
        self
    }

    pub fn with_second_derivative(mut self, d: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.second = Some(Arc::new(d));
        self
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn contains(&self, t: f64) -> bool {
        t > self.domain.0 && t < self.domain.1
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    pub fn has_derivative(&self) -> bool {
        self.first.is_some()
    }

    /// `f′(t)`, analytic when supplied and otherwise a Richardson-refined finite difference
    /// (central when `t ± h` stays in the domain, one-sided otherwise).
    pub fn derivative(&self, t: f64) -> f64 {
        if let Some(d) = &self.first {
            return d(t);
        }
        let h = FD_STEP;
        let f = |s: f64| self.eval(s);
        if self.contains(t - h) && self.contains(t + h) {
            let central = |h: f64| (f(t + h) - f(t - h)) / (2.0 * h);
            (4.0 * central(h / 2.0) - central(h)) / 3.0
        } else if self.contains(t + 2.0 * h) {
            (-3.0 * f(t) + 4.0 * f(t + h) - f(t + 2.0 * h)) / (2.0 * h)
        } else {
            (3.0 * f(t) - 4.0 * f(t - h) + f(t - 2.0 * h)) / (2.0 * h)
        }
    }

    pub fn second_derivative(&self, t: f64) -> f64 {
        if let Some(d) = &self.second {
            return d(t);
        }
        let h = 1e-4;
        (self.eval(t + h) - 2.0 * self.eval(t) + self.eval(t - h)) / (h * h)
    }

    /// Finite sampling window inside the domain.
    fn window(&self, interval: (f64, f64)) -> (f64, f64) {
        window(interval)
    }
}

fn window(interval: (f64, f64)) -> (f64, f64) {
    let (lo, hi) = interval;
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => (lo, hi),
        (true, false) => (lo, lo + UNBOUNDED_WINDOW),
        (false, true) => (hi - UNBOUNDED_WINDOW, hi),
        (false, false) => (-UNBOUNDED_WINDOW / 2.0, UNBOUNDED_WINDOW / 2.0),
    }
}

/// Uniform point strictly inside `(lo, hi)`.
fn interior_point<R: Rng + ?Sized>(rng: &mut R, (lo, hi): (f64, f64)) -> f64 {
    loop {
        let u: f64 = rng.random();
        let t = lo + u * (hi - lo);
        if t > lo && t < hi {
            return t;
        }
    }
}

/// `f(B) = Q diag(f(λ_i)) Q*` for Hermitian `B = Q diag(λ_i) Q*`.
pub fn matrix_apply(f: &ScalarFn, b: &CMat) -> Result<CMat> {
    let (vals, q) = linalg::hermitian_eigen(b);
    if let Some(&bad) = vals.iter().find(|&&v| !f.contains(v)) {
        return Err(NcError::Domain(format!(
            "eigenvalue {bad} lies outside the domain ({}, {})",
            f.domain.0, f.domain.1
        )));
    }
    let d = CVec::from_iterator(vals.len(), vals.iter().map(|&v| c(f.eval(v), 0.0)));
    Ok(linalg::symmetrize(&(&q * CMat::from_diagonal(&d) * q.adjoint())))
}

/// Finitely many atoms `(λ, weight)` with nonnegative weights.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscreteMeasure {
    atoms: Vec<(f64, f64)>,
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        for &(l, w) in &atoms {
            if !l.is_finite() || !w.is_finite() || w < 0.0 {
                return Err(NcError::Measure(format!("invalid atom ({l}, {w})")));
            }
        }
        Ok(DiscreteMeasure { atoms })
    }

    pub fn empty() -> Self {
        DiscreteMeasure { atoms: Vec::new() }
    }

    pub fn point_mass(at: f64) -> Self {
        DiscreteMeasure { atoms: vec![(at, 1.0)] }
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum()
    }

    /// Checks the Kraus requirements: atoms in `[−1, 1]`, total mass 1 within `1e−12`.
    pub fn check_probability_on_unit_interval(&self) -> Result<()> {
        if let Some(&(l, _)) = self.atoms.iter().find(|a| a.0.abs() > 1.0) {
            return Err(NcError::Measure(format!("atom {l} lies outside [-1, 1]")));
        }
        let mass = self.total_mass();
        if (mass - 1.0).abs() > 1e-12 {
            return Err(NcError::Measure(format!("total mass {mass} is not 1")));
        }
        Ok(())
    }
}

/// `f(t) = f0 + f1·t + ½·f2·∫ t²/(1 − λt) dμ(λ)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KrausRepresentation {
    pub f0: f64,
    pub f1: f64,
    pub f2: f64,
    pub measure: DiscreteMeasure,
}

impl KrausRepresentation {
    pub fn new(f0: f64, f1: f64, f2: f64, measure: DiscreteMeasure) -> Result<Self> {
        measure.check_probability_on_unit_interval()?;
        Ok(KrausRepresentation { f0, f1, f2, measure })
    }

    pub fn eval(&self, t: f64) -> f64 {
        let integral: f64 = self
            .measure
            .atoms()
            .iter()
            .map(|&(l, w)| w * t * t / (1.0 - l * t))
            .sum();
        self.f0 + self.f1 * t + 0.5 * self.f2 * integral
    }

    /// The scalar function on `(−1, 1)`.
    pub fn scalar_fn(&self) -> ScalarFn {
        let rep = self.clone();
        ScalarFn::new((-1.0, 1.0), move |t| rep.eval(t))
    }

    pub fn eval_matrix(&self, b: &CMat) -> Result<CMat> {
        kraus_eval(self.f0, self.f1, self.f2, &self.measure, b)
    }
}

/// `f0·I + f1·B + ½·f2·Σ_k w_k B²(I − λ_k B)^{-1}`, computed with linear solves rather
/// than through the spectral decomposition.
pub fn kraus_eval(f0: f64, f1: f64, f2: f64, measure: &DiscreteMeasure, b: &CMat) -> Result<CMat> {
    measure.check_probability_on_unit_interval()?;
    let n = b.nrows();
    let spectrum = linalg::hermitian_eigenvalues(b);
    if let Some(&bad) = spectrum.iter().find(|v| v.abs() >= 1.0) {
        return Err(NcError::Domain(format!("eigenvalue {bad} lies outside (-1, 1)")));
    }
    let min_gap = measure
        .atoms()
        .iter()
        .flat_map(|&(l, _)| spectrum.iter().map(move |&t| (1.0 - l * t).abs()))
        .fold(f64::INFINITY, f64::min);
    if min_gap <= POLE_GATE {
        return Err(NcError::Singularity(format!("min |1 - λt| = {min_gap:.3e}")));
    }
    let id = linalg::identity(n);
    let b2 = b * b;
    let mut out = id.scale(f0) + b.scale(f1);
    for &(l, w) in measure.atoms() {
        let resolvent = (&id - b.scale(l))
            .lu()
            .solve(&b2)
            .ok_or_else(|| NcError::Singularity(format!("I - {l}·B is singular")))?;
        out += resolvent.scale(0.5 * f2 * w);
    }
    Ok(linalg::symmetrize(&out))
}

/// `g(z) = αz + β + Σ_k w_k (1/(λ_k − z) − λ_k/(λ_k² + 1))`.
pub fn pick_eval(alpha: f64, beta: f64, measure: &DiscreteMeasure, z: C64) -> Result<C64> {
    let mut g = z * alpha + beta;
    for &(l, w) in measure.atoms() {
        let gap = c(l, 0.0) - z;
        if gap.norm() < 1e-14 {
            return Err(NcError::Singularity(format!("z = {z} coincides with atom {l}")));
        }
        g += (gap.inv() - l / (l * l + 1.0)) * w;
    }
    Ok(g)
}

/// `g(t) = (f(t) − f(0))/t`, with `g(0) = f′(0)`.
pub fn g_transform(f: &ScalarFn) -> Result<ScalarFn> {
    if !f.contains(0.0) {
        return Err(NcError::Domain("0 is not in the domain of f".into()));
    }
    let f0 = f.eval(0.0);
    let slope = f.derivative(0.0);
    let inner = f.clone();
    Ok(ScalarFn::new(f.domain(), move |t| {
        if t == 0.0 {
            slope
        } else {
            (inner.eval(t) - f0) / t
        }
    }))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OneVarWitness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tuples: Option<Vec<TupleJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    pub defect_eig: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OneVarReport {
    pub test: &'static str,
    pub pass: bool,
    pub min_eig: f64,
    pub trials: usize,
    pub interval: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<OneVarWitness>,
}

#[derive(Clone, Debug)]
pub struct MonotoneConfig {
    pub interval: (f64, f64),
    pub points: usize,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
}

impl MonotoneConfig {
    pub fn new(interval: (f64, f64), points: usize, trials: usize, seed: u64) -> Self {
        MonotoneConfig {
            interval,
            points,
            trials,
            seed,
            tol: PSD_TOL,
        }
    }
}

/// Löwner matrix `L_ij = (f(t_i) − f(t_j))/(t_i − t_j)`, `L_ii = f′(t_i)`.
pub fn loewner_matrix(f: &ScalarFn, points: &[f64]) -> CMat {
    let vals: Vec<f64> = points.iter().map(|&t| f.eval(t)).collect();
    let k = points.len();
    CMat::from_fn(k, k, |i, j| {
        let v = if i == j {
            f.derivative(points[i])
        } else {
            (vals[i] - vals[j]) / (points[i] - points[j])
        };
        c(v, 0.0)
    })
}

/// Samples sorted point sets and checks that every Löwner matrix is positive semidefinite.
pub fn loewner_monotone_test(f: &ScalarFn, config: &MonotoneConfig) -> Result<OneVarReport> {
    if config.points < 2 {
        return Err(NcError::Domain("the Löwner test needs at least 2 points".into()));
    }
    let (lo, hi) = config.interval;
    if !(lo < hi) || lo < f.domain.0 || hi > f.domain.1 {
        return Err(NcError::Domain(format!(
            "interval ({lo}, {hi}) is not inside the domain ({}, {})",
            f.domain.0, f.domain.1
        )));
    }
    let win = f.window(config.interval);
    let min_gap = 1e-6 * (win.1 - win.0);
    let mut worst: Option<(f64, Vec<f64>, Vec<f64>)> = None;
    for trial in 0..config.trials {
        let mut rng = rng_from_seed(derive_seed(config.seed, trial as u64));
        let points = loop {
            let mut pts: Vec<f64> = (0..config.points).map(|_| interior_point(&mut rng, win)).collect();
            pts.sort_by(f64::total_cmp);
            if pts.windows(2).all(|w| w[1] - w[0] > min_gap) {
                break pts;
            }
        };
        let eig = linalg::hermitian_eigenvalues(&loewner_matrix(f, &points));
        let m = eig[0];
        if worst.as_ref().is_none_or(|w| m < w.0) {
            worst = Some((m, points, eig));
        }
    }
    Ok(finish_report(
        "loewner_monotone",
        worst,
        config.trials,
        config.interval,
        config.tol,
        |points, eig| OneVarWitness {
            tuples: None,
            points: Some(points),
            t: None,
            defect_eig: eig,
        },
    ))
}

fn finish_report<P>(
    test: &'static str,
    worst: Option<(f64, P, Vec<f64>)>,
    trials: usize,
    interval: (f64, f64),
    tol: f64,
    witness: impl FnOnce(P, Vec<f64>) -> OneVarWitness,
) -> OneVarReport {
    let (min_eig, witness) = match worst {
        Some((m, payload, eig)) => {
            let w = (m < -WITNESS_TOL.max(tol)).then(|| witness(payload, eig));
            (m, w)
        }
        None => (f64::INFINITY, None),
    };
    OneVarReport {
        test,
        pass: min_eig >= -tol,
        min_eig,
        trials,
        interval: [interval.0, interval.1],
        witness,
    }
}

#[derive(Clone, Debug)]
pub struct Convexity1Config {
    pub interval: (f64, f64),
    pub size: usize,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Convexity1Config {
    pub fn new(interval: (f64, f64), size: usize, trials: usize, seed: u64) -> Self {
        Convexity1Config {
            interval,
            size,
            trials,
            seed,
            tol: PSD_TOL,
        }
    }
}

/// Minimum eigenvalue, `(A, B, t)` and defect spectrum of the worst trial so far.
type ConvexityCandidate = (f64, (CMat, CMat, f64), Vec<f64>);

/// `t·f(A) + (1 − t)·f(B) − f(tA + (1 − t)B)`.
pub fn convexity_defect(f: &ScalarFn, a: &CMat, b: &CMat, t: f64) -> Result<CMat> {
    let mix = a.scale(t) + b.scale(1.0 - t);
    let d = matrix_apply(f, a)?.scale(t) + matrix_apply(f, b)?.scale(1.0 - t) - matrix_apply(f, &mix)?;
    Ok(linalg::symmetrize(&d))
}

/// Samples Hermitian pairs with spectra in the interval and checks that the convexity
/// defect is positive semidefinite, at `t = ½` and at one uniform `t` per trial.
pub fn convexity_test_1var(f: &ScalarFn, config: &Convexity1Config) -> Result<OneVarReport> {
    if config.size == 0 {
        return Err(NcError::Domain("matrix size must be at least 1".into()));
    }
    let (lo, hi) = config.interval;
    if !(lo < hi) || lo < f.domain.0 || hi > f.domain.1 {
        return Err(NcError::Domain(format!(
            "interval ({lo}, {hi}) is not inside the domain ({}, {})",
            f.domain.0, f.domain.1
        )));
    }
    let win = f.window(config.interval);
    let mut worst: Option<ConvexityCandidate> = None;
    for trial in 0..config.trials {
        let mut rng = rng_from_seed(derive_seed(config.seed, trial as u64));
        let mut attempts = 0;
        loop {
            let eigs_a: Vec<f64> = (0..config.size).map(|_| interior_point(&mut rng, win)).collect();
            let eigs_b: Vec<f64> = (0..config.size).map(|_| interior_point(&mut rng, win)).collect();
            let a = linalg::hermitian_with_spectrum(&mut rng, &eigs_a);
            let b = linalg::hermitian_with_spectrum(&mut rng, &eigs_b);
            let t_uniform: f64 = interior_point(&mut rng, (0.0, 1.0));
            let defects: Result<Vec<(f64, CMat)>> = [0.5, t_uniform]
                .into_iter()
                .map(|t| convexity_defect(f, &a, &b, t).map(|d| (t, d)))
                .collect();
            match defects {
                Ok(defects) => {
                    for (t, d) in defects {
                        let eig = linalg::hermitian_eigenvalues(&d);
                        if worst.as_ref().is_none_or(|w| eig[0] < w.0) {
                            worst = Some((eig[0], (a.clone(), b.clone(), t), eig));
                        }
                    }
                    break;
                }
                // rounding pushed a spectrum onto the boundary; draw again
                Err(NcError::Domain(_)) if attempts < 8 => attempts += 1,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(finish_report(
        "convexity_1var",
        worst,
        config.trials,
        config.interval,
        config.tol,
        |(a, b, t), eig| {
            let tuple = |m: CMat| TupleJson::from(&HermTuple::symmetrized(VarClass::X, m.nrows(), vec![m]));
            OneVarWitness {
                tuples: Some(vec![tuple(a), tuple(b)]),
                points: None,
                t: Some(t),
                defect_eig: eig,
            }
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix_domain::rng_from_seed;

    fn square() -> ScalarFn {
        ScalarFn::entire(|t| t * t).with_derivative(|t| 2.0 * t)
    }

    fn half_mass() -> ScalarFn {
        ScalarFn::new((f64::NEG_INFINITY, 2.0), |t| t * t / (1.0 - 0.5 * t))
    }

    fn mat(rows: &[&[f64]]) -> CMat {
        CMat::from_fn(rows.len(), rows[0].len(), |i, j| c(rows[i][j], 0.0))
    }

    #[test]
    fn matrix_apply_examples() {
        let mut rng = rng_from_seed(1);
        let b = linalg::random_hermitian(&mut rng, 4);
        let id = ScalarFn::entire(|t| t);
        assert!(linalg::max_abs(&(matrix_apply(&id, &b).unwrap() - &b)) < 1e-12);

        let flip = mat(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let sq = matrix_apply(&square(), &flip).unwrap();
        assert!(linalg::max_abs(&(sq - linalg::identity(2))) < 1e-14);

        let narrow = ScalarFn::new((-1.0, 1.0), |t| t);
        match matrix_apply(&narrow, &mat(&[&[2.0, 0.0], &[0.0, 0.0]])) {
            Err(NcError::Domain(msg)) => assert!(msg.contains('2')),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn matrix_apply_matches_polynomial_arithmetic() {
        let mut rng = rng_from_seed(2);
        let cubic = ScalarFn::entire(|t| 2.0 * t.powi(3) - t + 0.5);
        for n in 1..5 {
            let b = linalg::random_hermitian(&mut rng, n);
            let direct = (&b * &b * &b).scale(2.0) - &b + linalg::identity(n).scale(0.5);
            assert!(linalg::max_abs(&(matrix_apply(&cubic, &b).unwrap() - direct)) < 1e-9);
        }
    }

    #[test]
    fn kraus_examples() {
        let rep = KrausRepresentation::new(0.0, 0.0, 2.0, DiscreteMeasure::point_mass(0.5)).unwrap();
        for t in [-0.8, -0.1, 0.0, 0.3, 0.85] {
            assert!((rep.eval(t) - t * t / (1.0 - 0.5 * t)).abs() < 1e-15);
        }
        let any = KrausRepresentation::new(
            1.5,
            -0.5,
            3.0,
            DiscreteMeasure::new(vec![(-0.3, 0.25), (0.9, 0.75)]).unwrap(),
        )
        .unwrap();
        let zero = CMat::zeros(3, 3);
        assert!(linalg::max_abs(&(any.eval_matrix(&zero).unwrap() - linalg::identity(3).scale(1.5))) < 1e-15);
    }

    #[test]
    fn kraus_errors() {
        let not_prob = DiscreteMeasure::new(vec![(0.5, 0.5)]).unwrap();
        assert!(matches!(
            kraus_eval(0.0, 0.0, 1.0, &not_prob, &CMat::zeros(1, 1)),
            Err(NcError::Measure(_))
        ));
        assert!(DiscreteMeasure::new(vec![(0.0, -1.0)]).is_err());
        let edge = DiscreteMeasure::point_mass(1.0);
        let b = mat(&[&[1.0 - 1e-9]]);
        assert!(matches!(
            kraus_eval(0.0, 0.0, 1.0, &edge, &b),
            Err(NcError::Singularity(_))
        ));
        assert!(matches!(
            kraus_eval(0.0, 0.0, 1.0, &edge, &mat(&[&[1.5]])),
            Err(NcError::Domain(_))
        ));
    }

    #[test]
    fn pick_examples() {
        let z = c(0.3, 0.7);
        assert_eq!(
            pick_eval(2.0, -1.0, &DiscreteMeasure::empty(), z).unwrap(),
            z * 2.0 - 1.0
        );
        let g = pick_eval(0.0, 0.0, &DiscreteMeasure::point_mass(0.0), z).unwrap();
        assert!((g - (-z.inv())).norm() < 1e-15);
        assert!(matches!(
            pick_eval(0.0, 0.0, &DiscreteMeasure::point_mass(0.5), c(0.5, 0.0)),
            Err(NcError::Singularity(_))
        ));
    }

    #[test]
    fn pick_maps_upper_half_plane_into_itself() {
        let mut rng = rng_from_seed(3);
        let mu = DiscreteMeasure::new(vec![(-2.0, 0.5), (0.1, 1.0), (3.0, 2.0)]).unwrap();
        for _ in 0..1000 {
            let z = c(rng.random_range(-5.0..5.0), rng.random_range(1e-3..5.0));
            assert!(pick_eval(0.7, -0.2, &mu, z).unwrap().im >= -1e-12);
        }
    }

    #[test]
    fn g_transform_examples() {
        let g = g_transform(&square()).unwrap();
        for t in [-0.5, 0.0, 0.25, 3.0] {
            assert!((g.eval(t) - t).abs() < 1e-12);
        }
        let g = g_transform(&half_mass()).unwrap();
        for k in 0..20 {
            let t = -0.95 + 0.1 * k as f64;
            let expected = if t == 0.0 { 0.0 } else { (t * t / (1.0 - 0.5 * t)) / t };
            assert!((g.eval(t) - expected).abs() < 1e-12);
            assert!((g.eval(t) - t / (1.0 - 0.5 * t)).abs() < 1e-12);
        }
        let exp = ScalarFn::entire(f64::exp);
        assert!((g_transform(&exp).unwrap().eval(0.0) - 1.0).abs() < 1e-9);
        assert!(g_transform(&ScalarFn::new((1.0, 2.0), |t| t)).is_err());
    }

    #[test]
    fn loewner_examples() {
        let id = ScalarFn::entire(|t| t);
        let report = loewner_monotone_test(&id, &MonotoneConfig::new((-1.0, 1.0), 4, 50, 1)).unwrap();
        assert!(report.pass);
        assert!(report.min_eig.abs() < 1e-9);

        let sqrt = ScalarFn::new((0.0, f64::INFINITY), f64::sqrt);
        let report = loewner_monotone_test(&sqrt, &MonotoneConfig::new((0.0, 4.0), 4, 200, 2)).unwrap();
        assert!(report.pass, "{report:?}");

        let report = loewner_monotone_test(&square(), &MonotoneConfig::new((-1.0, 1.0), 3, 200, 3)).unwrap();
        assert!(!report.pass);
        let w = report.witness.expect("witness");
        let points = w.points.unwrap();
        assert!(points.iter().any(|&t| t < 0.0));
        assert!(linalg::min_eigenvalue(&loewner_matrix(&square(), &points)) < -WITNESS_TOL);
    }

    #[test]
    fn convexity_1var_examples() {
        let report = convexity_test_1var(
            &square(),
            &Convexity1Config::new((f64::NEG_INFINITY, f64::INFINITY), 4, 500, 4),
        )
        .unwrap();
        assert!(report.pass, "{report:?}");

        let quartic = ScalarFn::entire(|t| t.powi(4));
        let report = convexity_test_1var(&quartic, &Convexity1Config::new((-2.0, 2.0), 2, 1000, 5)).unwrap();
        assert!(!report.pass);
        let w = report.witness.unwrap();
        let tuples = w.tuples.unwrap();
        let a = tuples[0].clone().into_tuple(VarClass::X).unwrap();
        let b = tuples[1].clone().into_tuple(VarClass::X).unwrap();
        let d = convexity_defect(&quartic, &a.matrices()[0], &b.matrices()[0], w.t.unwrap()).unwrap();
        assert!(linalg::min_eigenvalue(&d) < -WITNESS_TOL);

        let affine = ScalarFn::entire(|t| 3.0 * t - 1.0);
        let report = convexity_test_1var(&affine, &Convexity1Config::new((-1.0, 1.0), 3, 50, 6)).unwrap();
        assert!(report.pass);
        assert!(report.min_eig.abs() < 1e-12);
    }

    #[test]
    fn matrix_apply_is_unitarily_equivariant() {
        let mut rng = rng_from_seed(7);
        let f = ScalarFn::entire(|t| (t * 0.7).sin() + t * t);
        for n in 1..5 {
            let b = linalg::random_hermitian(&mut rng, n);
            let u = linalg::random_unitary(&mut rng, n);
            let lhs = matrix_apply(&f, &(u.adjoint() * &b * &u)).unwrap();
            let rhs = u.adjoint() * matrix_apply(&f, &b).unwrap() * &u;
            assert!(linalg::max_abs(&(lhs - rhs)) < 1e-10);
        }
    }
}
