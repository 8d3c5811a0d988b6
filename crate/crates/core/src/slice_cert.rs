//! One-variable slices of an nc function and the degree-two certificate.
//!
//! For fixed `A`, `X` the slice `Φ(ξ) = F(A ⊗ I, X ⊗ ξ)` is a function of one matrix
//! variable, and `φ(z) = v*F(A, zX)v` is its scalar compression. By `x`-homogeneity,
//! `φ(z) = Σ_i (v*F_i(A, X)v) z^i`, so the coefficients of `φ` detect `x`-degree.
//!
//! Black-box functions are sampled at complex `z`; such evaluators must be analytic in
//! `z` on the disc `|z| ≤ r` used for extraction.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Serialize, Serializer};

use crate::convexity::{test_convexity_at_ca, ConvexityConfig, ConvexityReport, ConvexityWitness, UnitaryMode};
use crate::error::{NcError, Result};
use crate::evaluation::{eval_series_parts, NcFunction};
use crate::free_algebra::VarClass;
use crate::linalg::{self, c, CMat, CVec, C64};
use crate::matrix_domain::{
    ca_element, derive_seed, rng_from_seed, sample_ball_point, tuple_norm_of, HermTuple, TupleJson, UnitaryChoice,
};
use crate::one_var::{OneVarReport, OneVarWitness, PSD_TOL, WITNESS_TOL};

/// Largest interpolation error accepted on the DFT path.
pub const EXTRACTION_RESIDUAL_TOL: f64 = 1e-6;
/// `|c_i|` above this counts as a nonvanishing coefficient.
pub const ZERO_TOL: f64 = 1e-7;

fn complex_pairs<S: Serializer>(v: &[C64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|z| [z.re, z.im]))
}

fn vector_json(v: &CVec) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtractionPath {
    Exact,
    Dft,
}

#[derive(Clone, Debug, Serialize)]
pub struct SliceContext {
    pub a: TupleJson,
    pub x: TupleJson,
    pub v: Vec<[f64; 2]>,
}

/// `c_0, …, c_d` with `c_i = v*F_i(A, X)v`.
#[derive(Clone, Debug, Serialize)]
pub struct SliceCoefficients {
    #[serde(serialize_with = "complex_pairs")]
    pub coeffs: Vec<C64>,
    pub path: ExtractionPath,
    /// Interpolation error on the check points; zero on the exact path.
    pub residual: f64,
    pub radius: f64,
    pub context: SliceContext,
}

impl SliceCoefficients {
    /// `Σ c_i z^i`.
    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &ci| acc * z + ci)
    }

    /// Largest `|c_i|` over `i > 2`, with its index.
    pub fn max_high_order(&self) -> Option<(usize, C64)> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(3)
            .max_by(|p, q| p.1.norm().total_cmp(&q.1.norm()))
            .map(|(i, &ci)| (i, ci))
    }
}

fn check_slice_args(f: &dyn NcFunction, a: &HermTuple, x: &HermTuple) -> Result<()> {
    let sig = f.signature();
    if a.arity() != sig.arity_a || x.arity() != sig.arity_x {
        return Err(NcError::Shape(format!(
            "tuples of arity ({}, {}) for signature {sig}",
            a.arity(),
            x.arity()
        )));
    }
    if a.size() != x.size() {
        return Err(NcError::Shape(format!(
            "a-tuple has size {}, x-tuple has size {}",
            a.size(),
            x.size()
        )));
    }
    Ok(())
}

fn check_radius(f: &dyn NcFunction, norm: f64) -> Result<()> {
    if norm >= f.radius() {
        return Err(NcError::Domain(format!(
            "slice argument norm {norm} is outside the radius {}",
            f.radius()
        )));
    }
    Ok(())
}

/// `Φ(ξ) = F(A ⊗ I_m, X_1 ⊗ ξ, …, X_g ⊗ ξ)` for an `m × m` Hermitian `ξ`.
pub fn slice_phi(f: &dyn NcFunction, a: &HermTuple, x: &HermTuple, xi: &CMat) -> Result<CMat> {
    check_slice_args(f, a, x)?;
    if !xi.is_square() {
        return Err(NcError::Shape(format!("xi is {}x{}", xi.nrows(), xi.ncols())));
    }
    let m = xi.nrows();
    let lifted_x: Vec<CMat> = x.matrices().iter().map(|xj| linalg::kron(xj, xi)).collect();
    let size = x.size() * m;
    check_radius(f, tuple_norm_of(&lifted_x, size))?;
    f.evaluate(a.kron_identity(m).matrices(), &lifted_x, size)
}

/// `(v* ⊗ I)Φ(ξ)(v ⊗ I)`, an `m × m` matrix.
pub fn slice_compress(f: &dyn NcFunction, a: &HermTuple, x: &HermTuple, v: &CVec, xi: &CMat) -> Result<CMat> {
    let v = normalized(f, x, v)?;
    let phi = slice_phi(f, a, x, xi)?;
    let w = linalg::vec_kron_identity(&v, xi.nrows());
    Ok(w.adjoint() * phi * w)
}

fn normalized(f: &dyn NcFunction, x: &HermTuple, v: &CVec) -> Result<CVec> {
    let dim = f.blocks() * x.size();
    if v.len() != dim {
        return Err(NcError::Shape(format!("v has length {}, expected {dim}", v.len())));
    }
    let norm = v.norm();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(NcError::Domain("v must be a nonzero finite vector".into()));
    }
    Ok(v.unscale(norm))
}

fn scalar_at(f: &dyn NcFunction, a: &HermTuple, x: &HermTuple, v: &CVec, z: C64) -> Result<C64> {
    let norm = z.norm() * x.norm();
    check_radius(f, norm)?;
    let zx: Vec<CMat> = x.matrices().iter().map(|m| m * z).collect();
    let value = f.evaluate(a.matrices(), &zx, x.size())?;
    Ok((v.adjoint() * value * v)[(0, 0)])
}

/// `φ(z) = v*F(A, zX)v`, with `v` normalized first.
pub fn slice_scalar(f: &dyn NcFunction, a: &HermTuple, x: &HermTuple, v: &CVec, z: C64) -> Result<C64> {
    check_slice_args(f, a, x)?;
    let v = normalized(f, x, v)?;
    scalar_at(f, a, x, &v, z)
}

fn context(a: &HermTuple, x: &HermTuple, v: &CVec) -> SliceContext {
    SliceContext {
        a: a.into(),
        x: x.into(),
        v: vector_json(v),
    }
}

fn check_extraction_args(f: &dyn NcFunction, x: &HermTuple, degree_cap: usize, radius: f64) -> Result<()> {
    if degree_cap < 2 {
        return Err(NcError::Domain(format!(
            "degree cap must be at least 2, got {degree_cap}"
        )));
    }
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(NcError::Domain(format!(
            "extraction radius must be positive, got {radius}"
        )));
    }
    check_radius(f, radius * x.norm())
}

/// Coefficients from part-wise evaluation of `F.series()`.
pub fn exact_slice_coefficients(
    f: &dyn NcFunction,
    a: &HermTuple,
    x: &HermTuple,
    v: &CVec,
    degree_cap: usize,
    radius: f64,
) -> Result<SliceCoefficients> {
    check_slice_args(f, a, x)?;
    check_extraction_args(f, x, degree_cap, radius)?;
    let series = f
        .series()
        .ok_or_else(|| NcError::Domain("the exact path needs an explicit power series".into()))?;
    let v = normalized(f, x, v)?;
    let parts = eval_series_parts(&series, a.matrices(), x.matrices(), x.size(), degree_cap)?;
    let coeffs = parts.iter().map(|p| (v.adjoint() * p * &v)[(0, 0)]).collect();
    Ok(SliceCoefficients {
        coeffs,
        path: ExtractionPath::Exact,
        residual: 0.0,
        radius,
        context: context(a, x, &v),
    })
}

/// Coefficients from the inverse DFT of `φ` at `r·ω^k`, `ω = e^{2πi/(d+1)}`, checked on
/// the interleaved points `r·ω^{k+½}`.
pub fn dft_slice_coefficients(
    f: &dyn NcFunction,
    a: &HermTuple,
    x: &HermTuple,
    v: &CVec,
    degree_cap: usize,
    radius: f64,
) -> Result<SliceCoefficients> {
    check_slice_args(f, a, x)?;
    check_extraction_args(f, x, degree_cap, radius)?;
    let v = normalized(f, x, v)?;
    let n = degree_cap + 1;
    let node = |k: f64| C64::from_polar(radius, 2.0 * PI * k / n as f64);
    let samples = (0..n)
        .map(|k| scalar_at(f, a, x, &v, node(k as f64)))
        .collect::<Result<Vec<_>>>()?;
    let coeffs: Vec<C64> = (0..n)
        .map(|j| {
            let sum = samples.iter().enumerate().fold(C64::new(0.0, 0.0), |acc, (k, &s)| {
                acc + s * C64::from_polar(1.0, -2.0 * PI * ((j * k) % n) as f64 / n as f64)
            });
            sum / (n as f64 * radius.powi(j as i32))
        })
        .collect();
    let mut out = SliceCoefficients {
        coeffs,
        path: ExtractionPath::Dft,
        residual: 0.0,
        radius,
        context: context(a, x, &v),
    };
    for k in 0..n {
        let z = node(k as f64 + 0.5);
        let err = (scalar_at(f, a, x, &v, z)? - out.eval(z)).norm();
        out.residual = out.residual.max(err);
    }
    if !(out.residual <= EXTRACTION_RESIDUAL_TOL) {
        return Err(NcError::Extraction { residual: out.residual });
    }
    Ok(out)
}

/// Exact path when `F` exposes a series, DFT path otherwise.
pub fn extract_slice_coefficients(
    f: &dyn NcFunction,
    a: &HermTuple,
    x: &HermTuple,
    v: &CVec,
    degree_cap: usize,
    radius: f64,
) -> Result<SliceCoefficients> {
    if f.series().is_some() {
        exact_slice_coefficients(f, a, x, v, degree_cap, radius)
    } else {
        dft_slice_coefficients(f, a, x, v, degree_cap, radius)
    }
}

#[derive(Clone, Debug)]
pub struct CertifyConfig {
    pub epsilon: f64,
    /// Number of sampled `(X, v)` per multiplicity.
    pub samples: usize,
    /// Trials per level of the convexity subtest.
    pub trials: usize,
    pub seed: u64,
    pub degree_cap: usize,
    /// Extraction radius; `ε/4` when unset.
    pub radius: Option<f64>,
    pub multiplicities: Vec<usize>,
    pub zero_tol: f64,
    pub tol: f64,
}

impl CertifyConfig {
    pub fn new(epsilon: f64, samples: usize, seed: u64) -> Self {
        CertifyConfig {
            epsilon,
            samples,
            trials: 200,
            seed,
            degree_cap: 8,
            radius: None,
            multiplicities: vec![1, 2],
            zero_tol: ZERO_TOL,
            tol: PSD_TOL,
        }
    }

    pub fn extraction_radius(&self) -> f64 {
        self.radius.unwrap_or(self.epsilon / 4.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "CONSISTENT_DEGREE_≤2")]
    ConsistentDegreeTwo,
    #[serde(rename = "HYPOTHESIS_FAILS")]
    HypothesisFails,
    #[serde(rename = "HIGHER_ORDER_PRESENT")]
    HigherOrderPresent,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::ConsistentDegreeTwo => "CONSISTENT_DEGREE_≤2",
            Verdict::HypothesisFails => "HYPOTHESIS_FAILS",
            Verdict::HigherOrderPresent => "HIGHER_ORDER_PRESENT",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HigherOrderWitness {
    /// `None` for the scalar probe.
    pub sample: Option<usize>,
    pub m: usize,
    pub a: TupleJson,
    pub x: TupleJson,
    pub v: Vec<[f64; 2]>,
    pub i: usize,
    pub c_i: [f64; 2],
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertifyWitness {
    Convexity(ConvexityWitness),
    HigherOrder(HigherOrderWitness),
}

#[derive(Clone, Debug, Serialize)]
pub struct SkippedSample {
    pub sample: usize,
    pub m: usize,
    pub error: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertifyReport {
    pub verdict: Verdict,
    pub samples: usize,
    pub degree_cap: usize,
    pub radius: f64,
    pub max_high_order_coeff: f64,
    pub convexity: ConvexityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<CertifyWitness>,
    /// Extraction at `X = [1]`, `v = 1` when `F` has no `a`-variables.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scalar_slice: Option<SliceCoefficients>,
    pub skipped: Vec<SkippedSample>,
}

struct Worst {
    magnitude: f64,
    witness: HigherOrderWitness,
}

fn consider(worst: &mut Option<Worst>, coeffs: &SliceCoefficients, sample: Option<usize>, m: usize) {
    if let Some((i, ci)) = coeffs.max_high_order() {
        if worst.as_ref().is_none_or(|w| ci.norm() > w.magnitude) {
            *worst = Some(Worst {
                magnitude: ci.norm(),
                witness: HigherOrderWitness {
                    sample,
                    m,
                    a: coeffs.context.a.clone(),
                    x: coeffs.context.x.clone(),
                    v: coeffs.context.v.clone(),
                    i,
                    c_i: [ci.re, ci.im],
                },
            });
        }
    }
}

/// Checks that the slices of `F` at sampled points of `C_A` have no coefficients above
/// degree two, after testing the convexity hypothesis on the same levels.
pub fn certify_degree_two(f: &dyn NcFunction, a: &HermTuple, config: &CertifyConfig) -> Result<CertifyReport> {
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
    let radius = config.extraction_radius();
    let convexity = test_convexity_at_ca(
        f,
        a,
        &config.multiplicities,
        UnitaryMode::Random,
        &ConvexityConfig {
            tol: config.tol,
            ..ConvexityConfig::new(config.epsilon, config.trials, config.seed)
        },
    )?;

    let mut worst: Option<Worst> = None;
    let mut skipped = Vec::new();
    for s in 0..config.samples {
        let mut rng = rng_from_seed(derive_seed(config.seed, 2_000_000 + s as u64));
        for &m in &config.multiplicities {
            let alpha = ca_element(a, m, UnitaryChoice::Random { seed: rng.random() })?;
            let n = alpha.realized.size();
            let x = sample_ball_point(&mut rng, sig.arity_x, n, config.epsilon / 2.0);
            let v = linalg::random_unit_vector(&mut rng, f.blocks() * n);
            match extract_slice_coefficients(f, &alpha.realized, &x, &v, config.degree_cap, radius) {
                Ok(coeffs) => consider(&mut worst, &coeffs, Some(s), m),
                Err(e) => skipped.push(SkippedSample {
                    sample: s,
                    m,
                    error: e.to_string(),
                }),
            }
        }
    }

    let scalar_slice = if sig.arity_a == 0 && f.blocks() == 1 {
        let x = HermTuple::new(VarClass::X, 1, vec![CMat::from_element(1, 1, c(1.0, 0.0)); sig.arity_x])?;
        let a1 = HermTuple::empty(VarClass::A, 1);
        let v = CVec::from_element(1, c(1.0, 0.0));
        let r = radius.min(0.5 * f.radius() / x.norm().max(f64::MIN_POSITIVE));
        let coeffs = extract_slice_coefficients(f, &a1, &x, &v, config.degree_cap, r)?;
        consider(&mut worst, &coeffs, None, 1);
        Some(coeffs)
    } else {
        None
    };

    let max_high_order_coeff = worst.as_ref().map_or(0.0, |w| w.magnitude);
    let (verdict, witness) = if !convexity.pass {
        (
            Verdict::HypothesisFails,
            convexity.witness.clone().map(CertifyWitness::Convexity),
        )
    } else if max_high_order_coeff > config.zero_tol {
        (
            Verdict::HigherOrderPresent,
            worst.map(|w| CertifyWitness::HigherOrder(w.witness)),
        )
    } else {
        (Verdict::ConsistentDegreeTwo, None)
    };
    Ok(CertifyReport {
        verdict,
        samples: config.samples,
        degree_cap: config.degree_cap,
        radius,
        max_high_order_coeff,
        convexity,
        witness,
        scalar_slice,
        skipped,
    })
}

#[derive(Clone, Debug)]
pub struct TransferConfig {
    pub delta: f64,
    pub max_size: usize,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
}

impl TransferConfig {
    pub fn new(delta: f64, max_size: usize, trials: usize, seed: u64) -> Self {
        TransferConfig {
            delta,
            max_size,
            trials,
            seed,
            tol: PSD_TOL,
        }
    }
}

fn interval_sample<R: Rng + ?Sized>(rng: &mut R, size: usize, delta: f64) -> CMat {
    let eigs: Vec<f64> = (0..size)
        .map(|_| 1.0 + delta * (2.0 * rng.random::<f64>() - 1.0))
        .collect();
    linalg::hermitian_with_spectrum(rng, &eigs)
}

/// Matrix convexity of `ξ ↦ (v* ⊗ I)Φ(ξ)(v ⊗ I)` on Hermitian `T`, `T̃` with spectra in
/// `(1 − δ, 1 + δ)`, plus the bound `‖X ⊗ T‖ < (1 + δ)‖X‖`.
pub fn slice_transfer_test(
    f: &dyn NcFunction,
    a: &HermTuple,
    x: &HermTuple,
    v: &CVec,
    config: &TransferConfig,
) -> Result<OneVarReport> {
    if !(config.delta > 0.0 && config.delta < 1.0) {
        return Err(NcError::Domain(format!(
            "delta must lie in (0, 1), got {}",
            config.delta
        )));
    }
    if config.max_size == 0 {
        return Err(NcError::Domain("max size must be positive".into()));
    }
    let x_norm = x.norm();
    let mut min_eig = f64::INFINITY;
    let mut witness = None;
    for trial in 0..config.trials {
        let mut rng = rng_from_seed(derive_seed(config.seed, trial as u64));
        let size = rng.random_range(1..=config.max_size);
        let t_mat = interval_sample(&mut rng, size, config.delta);
        let s_mat = interval_sample(&mut rng, size, config.delta);
        let t: f64 = rng.random();
        for mat in [&t_mat, &s_mat] {
            let lifted: Vec<CMat> = x.matrices().iter().map(|xj| linalg::kron(xj, mat)).collect();
            let lifted_norm = tuple_norm_of(&lifted, x.size() * size);
            if x_norm > 0.0 && lifted_norm >= (1.0 + config.delta) * x_norm {
                return Err(NcError::Domain(format!(
                    "tensor bound violated: {lifted_norm} >= (1 + {}) * {x_norm}",
                    config.delta
                )));
            }
        }
        let phi = |xi: &CMat| slice_compress(f, a, x, v, xi).map_err(|e| e.at_sample(trial));
        let mid = t_mat.scale(t) + s_mat.scale(1.0 - t);
        let defect = phi(&t_mat)?.scale(t) + phi(&s_mat)?.scale(1.0 - t) - phi(&mid)?;
        let spectrum = linalg::hermitian_eigenvalues(&defect);
        let eig = spectrum[0];
        if eig < min_eig {
            min_eig = eig;
            if eig < -WITNESS_TOL.max(config.tol) {
                witness = Some(OneVarWitness {
                    tuples: Some(vec![
                        (&HermTuple::new(VarClass::X, size, vec![t_mat.clone()])?).into(),
                        (&HermTuple::new(VarClass::X, size, vec![s_mat.clone()])?).into(),
                    ]),
                    points: None,
                    t: Some(t),
                    defect_eig: spectrum,
                });
            }
        }
    }
    Ok(OneVarReport {
        test: "slice_transfer",
        pass: min_eig >= -config.tol,
        min_eig,
        trials: config.trials,
        interval: [1.0 - config.delta, 1.0 + config.delta],
        witness,
    })
}
