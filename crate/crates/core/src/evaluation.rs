//! Evaluating nc polynomials and truncated power series on matrix tuples, and sampled
//! checks of the nc-function axioms.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{NcError, Result};
use crate::free_algebra::{Letter, MatrixNcPolynomial, NcPolynomial, NcPowerSeries, Signature, VarClass};
use crate::linalg::{self, CMat};
use crate::matrix_domain::{self, derive_seed, rng_from_seed, tuple_norm_of, HermTuple};

/// A matrix-valued nc function of the tuples `a` and `x`.
///
/// `evaluate` receives square `n × n` matrices and returns a `(blocks·n) × (blocks·n)`
/// matrix whose `blocks × blocks` block structure is outermost. Arguments need not be
/// Hermitian: the slice machinery evaluates at `z·X` for complex `z`, so an implementation
/// must be analytic in `x` on its declared radius.
pub trait NcFunction: Send + Sync {
    fn signature(&self) -> Signature;

    fn blocks(&self) -> usize {
        1
    }

    /// Radius of the `x`-ball on which the function is declared.
    fn radius(&self) -> f64 {
        f64::INFINITY
    }

    fn evaluate(&self, a: &[CMat], x: &[CMat], n: usize) -> Result<CMat>;

    /// The explicit `x`-power series, when the function has one.
    fn series(&self) -> Option<NcPowerSeries> {
        None
    }

    fn evaluate_tuples(&self, a: &HermTuple, x: &HermTuple) -> Result<CMat> {
        if a.size() != x.size() {
            return Err(NcError::Shape(format!(
                "a-tuple has size {}, x-tuple has size {}",
                a.size(),
                x.size()
            )));
        }
        self.evaluate(a.matrices(), x.matrices(), x.size())
    }
}

impl<F: NcFunction + ?Sized> NcFunction for Arc<F> {
    fn signature(&self) -> Signature {
        (**self).signature()
    }
    fn blocks(&self) -> usize {
        (**self).blocks()
    }
    fn radius(&self) -> f64 {
        (**self).radius()
    }
    fn evaluate(&self, a: &[CMat], x: &[CMat], n: usize) -> Result<CMat> {
        (**self).evaluate(a, x, n)
    }
    fn series(&self) -> Option<NcPowerSeries> {
        (**self).series()
    }
}

fn check_arguments(sig: Signature, a: &[CMat], x: &[CMat], n: usize) -> Result<()> {
    if a.len() != sig.arity_a || x.len() != sig.arity_x {
        return Err(NcError::Shape(format!(
            "got {} a-matrices and {} x-matrices for signature {sig}",
            a.len(),
            x.len()
        )));
    }
    if let Some(m) = a.iter().chain(x).find(|m| m.nrows() != n || m.ncols() != n) {
        return Err(NcError::Shape(format!(
            "argument is {}x{}, expected {n}x{n}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

/// Word products for one evaluation call, memoized by prefix.
struct WordEvaluator<'a> {
    a: &'a [CMat],
    x: &'a [CMat],
    n: usize,
    prefixes: HashMap<Vec<Letter>, CMat>,
}

impl<'a> WordEvaluator<'a> {
    fn new(a: &'a [CMat], x: &'a [CMat], n: usize) -> Self {
        WordEvaluator {
            a,
            x,
            n,
            prefixes: HashMap::new(),
        }
    }

    fn letter(&self, l: Letter) -> &'a CMat {
        match l.class {
            VarClass::A => &self.a[l.index - 1],
            VarClass::X => &self.x[l.index - 1],
        }
    }

    fn word(&mut self, letters: &[Letter]) -> CMat {
        if letters.is_empty() {
            return linalg::identity(self.n);
        }
        let mut start = letters.len();
        while start > 0 && !self.prefixes.contains_key(&letters[..start]) {
            start -= 1;
        }
        let mut acc = if start == 0 {
            linalg::identity(self.n)
        } else {
            self.prefixes[&letters[..start]].clone()
        };
        for k in start..letters.len() {
            acc = if k == 0 {
                self.letter(letters[0]).clone()
            } else {
                &acc * self.letter(letters[k])
            };
            self.prefixes.insert(letters[..=k].to_vec(), acc.clone());
        }
        acc
    }

    fn poly(&mut self, p: &NcPolynomial) -> CMat {
        let mut out = CMat::zeros(self.n, self.n);
        for (w, c) in p.terms() {
            out += self.word(w.letters()) * *c;
        }
        out
    }

    fn matrix_poly(&mut self, p: &MatrixNcPolynomial) -> CMat {
        let (rows, cols) = p.shape();
        let n = self.n;
        let mut out = CMat::zeros(rows * n, cols * n);
        for i in 0..rows {
            for j in 0..cols {
                let block = self.poly(p.entry(i, j));
                out.view_mut((i * n, j * n), (n, n)).copy_from(&block);
            }
        }
        out
    }
}

/// `p(A, X) = Σ_w p_w Z^w`; matrix polynomials are assembled blockwise.
pub fn eval_poly(p: &MatrixNcPolynomial, a: &[CMat], x: &[CMat], n: usize) -> Result<CMat> {
    check_arguments(p.signature(), a, x, n)?;
    Ok(WordEvaluator::new(a, x, n).matrix_poly(p))
}

pub fn eval_scalar_poly(p: &NcPolynomial, a: &HermTuple, x: &HermTuple) -> Result<CMat> {
    p.evaluate_tuples(a, x)
}

/// A truncated partial sum and the size of its last increment.
#[derive(Clone, Debug)]
pub struct SeriesValue {
    pub value: CMat,
    /// `‖F_{up_to}(A, X)‖_max`, a convergence proxy.
    pub last_increment: f64,
}

/// `Σ_{i ≤ up_to} F_i(A, X)`.
pub fn eval_series(series: &NcPowerSeries, a: &HermTuple, x: &HermTuple, up_to: usize) -> Result<SeriesValue> {
    if a.size() != x.size() {
        return Err(NcError::Shape("a- and x-tuples differ in size".into()));
    }
    eval_series_raw(series, a.matrices(), x.matrices(), x.size(), up_to)
}

pub(crate) fn eval_series_raw(
    series: &NcPowerSeries,
    a: &[CMat],
    x: &[CMat],
    n: usize,
    up_to: usize,
) -> Result<SeriesValue> {
    check_arguments(series.signature(), a, x, n)?;
    if up_to > series.order() {
        return Err(NcError::Domain(format!(
            "requested {up_to} parts of a series truncated at order {}",
            series.order()
        )));
    }
    let norm = tuple_norm_of(x, n);
    if norm >= series.radius() {
        return Err(NcError::Domain(format!(
            "x-tuple norm {norm} is outside the series radius {}",
            series.radius()
        )));
    }
    let mut words = WordEvaluator::new(a, x, n);
    let (rows, cols) = series.shape();
    let mut value = CMat::zeros(rows * n, cols * n);
    let mut last_increment = 0.0;
    for part in &series.parts()[..=up_to] {
        let inc = words.matrix_poly(part);
        last_increment = linalg::max_abs(&inc);
        value += inc;
    }
    Ok(SeriesValue { value, last_increment })
}

/// The individual parts `F_0(A, X), …, F_{up_to}(A, X)`.
pub(crate) fn eval_series_parts(
    series: &NcPowerSeries,
    a: &[CMat],
    x: &[CMat],
    n: usize,
    up_to: usize,
) -> Result<Vec<CMat>> {
    check_arguments(series.signature(), a, x, n)?;
    let mut words = WordEvaluator::new(a, x, n);
    Ok((0..=up_to)
        .map(|i| match series.part(i) {
            Some(p) => words.matrix_poly(p),
            None => {
                let (rows, cols) = series.shape();
                CMat::zeros(rows * n, cols * n)
            }
        })
        .collect())
}

impl NcFunction for NcPolynomial {
    fn signature(&self) -> Signature {
        NcPolynomial::signature(self)
    }

    fn evaluate(&self, a: &[CMat], x: &[CMat], n: usize) -> Result<CMat> {
        check_arguments(NcPolynomial::signature(self), a, x, n)?;
        Ok(WordEvaluator::new(a, x, n).poly(self))
    }

    fn series(&self) -> Option<NcPowerSeries> {
        Some(self.x_homogeneous_parts())
    }
}

impl NcFunction for MatrixNcPolynomial {
    fn signature(&self) -> Signature {
        MatrixNcPolynomial::signature(self)
    }

    fn blocks(&self) -> usize {
        self.shape().0
    }

    fn evaluate(&self, a: &[CMat], x: &[CMat], n: usize) -> Result<CMat> {
        eval_poly(self, a, x, n)
    }

    fn series(&self) -> Option<NcPowerSeries> {
        Some(self.x_homogeneous_parts())
    }
}

impl NcFunction for NcPowerSeries {
    fn signature(&self) -> Signature {
        NcPowerSeries::signature(self)
    }

    fn blocks(&self) -> usize {
        self.shape().0
    }

    fn radius(&self) -> f64 {
        NcPowerSeries::radius(self)
    }

    fn evaluate(&self, a: &[CMat], x: &[CMat], n: usize) -> Result<CMat> {
        eval_series_raw(self, a, x, n, self.order()).map(|v| v.value)
    }

    fn series(&self) -> Option<NcPowerSeries> {
        Some(self.clone())
    }
}

type EvalFn = dyn Fn(&[CMat], &[CMat], usize) -> Result<CMat> + Send + Sync;

/// A black-box nc function given by a closure.
#[derive(Clone)]
pub struct ClosureFunction {
    signature: Signature,
    blocks: usize,
    radius: f64,
    f: Arc<EvalFn>,
}

impl ClosureFunction {
    pub fn new<F>(signature: Signature, f: F) -> Self
    where
        F: Fn(&[CMat], &[CMat], usize) -> Result<CMat> + Send + Sync + 'static,
    {
        ClosureFunction {
            signature,
            blocks: 1,
            radius: f64::INFINITY,
            f: Arc::new(f),
        }
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        self.radius = radius;
        self
    }

    pub fn with_blocks(mut self, blocks: usize) -> Self {
        self.blocks = blocks;
        self
    }
}

impl std::fmt::Debug for ClosureFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ClosureFunction")
            .field("signature", &self.signature)
            .field("blocks", &self.blocks)
            .field("radius", &self.radius)
            .finish_non_exhaustive()
    }
}

impl NcFunction for ClosureFunction {
    fn signature(&self) -> Signature {
        self.signature
    }

    fn blocks(&self) -> usize {
        self.blocks
    }

    fn radius(&self) -> f64 {
        self.radius
    }

    fn evaluate(&self, a: &[CMat], x: &[CMat], n: usize) -> Result<CMat> {
        check_arguments(self.signature, a, x, n)?;
        (self.f)(a, x, n)
    }
}

/// Axiom checks pass when both maximum deviations are below this.
pub const AXIOM_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct AxiomConfig {
    pub samples: usize,
    pub max_size: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for AxiomConfig {
    fn default() -> Self {
        AxiomConfig {
            samples: 100,
            max_size: 4,
            seed: 0,
            tol: AXIOM_TOL,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PointJson {
    pub a: matrix_domain::TupleJson,
    pub x: matrix_domain::TupleJson,
}

impl PointJson {
    fn new(a: &HermTuple, x: &HermTuple) -> Self {
        PointJson {
            a: a.into(),
            x: x.into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomWitness {
    pub axiom: &'static str,
    pub sample: usize,
    pub z: PointJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<PointJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unitary: Option<Vec<Vec<[f64; 2]>>>,
    pub deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub test: &'static str,
    pub pass: bool,
    pub samples: usize,
    pub max_direct_sum_deviation: f64,
    pub max_unitary_deviation: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<AxiomWitness>,
}

/// Samples pairs of points and measures how far `F` is from respecting direct sums and
/// unitary equivalence. Sample 0 always uses two 1×1 points.
pub fn check_nc_function_axioms(f: &dyn NcFunction, config: &AxiomConfig) -> Result<AxiomReport> {
    let sig = f.signature();
    let blocks = f.blocks();
    let x_norm_cap = (0.5 * f.radius()).min(1.0);
    let max_size = config.max_size.max(1);
    let mut max_ds: f64 = 0.0;
    let mut max_un: f64 = 0.0;
    let mut ds_witness = None;
    let mut un_witness = None;

    for s in 0..config.samples {
        let mut rng = rng_from_seed(derive_seed(config.seed, s as u64));
        let (n1, n2) = if s == 0 {
            (1, 1)
        } else {
            let n1 = rand::Rng::random_range(&mut rng, 1..=max_size);
            let n2 = rand::Rng::random_range(&mut rng, 1..=max_size);
            (n1, n2)
        };
        let point = |rng: &mut rand_chacha::ChaCha8Rng, n: usize| {
            let a = matrix_domain::random_tuple(rng, VarClass::A, sig.arity_a, n, 1.0);
            let x = matrix_domain::sample_ball_point(rng, sig.arity_x, n, x_norm_cap);
            (a, x)
        };
        let (za, zx) = point(&mut rng, n1);
        let (wa, wx) = point(&mut rng, n2);

        let fz = f.evaluate_tuples(&za, &zx)?;
        let fw = f.evaluate_tuples(&wa, &wx)?;
        let sum_a = za.direct_sum(&wa)?;
        let sum_x = zx.direct_sum(&wx)?;
        let f_sum = f.evaluate_tuples(&sum_a, &sum_x)?;
        let expected = linalg::blockwise_direct_sum(blocks, &fz, n1, &fw, n2);
        let ds = linalg::max_abs(&(f_sum - expected));
        max_ds = max_ds.max(ds);
        if ds >= config.tol && ds_witness.is_none() {
            ds_witness = Some(AxiomWitness {
                axiom: "direct_sum",
                sample: s,
                z: PointJson::new(&za, &zx),
                w: Some(PointJson::new(&wa, &wx)),
                unitary: None,
                deviation: ds,
            });
        }

        let u = linalg::random_unitary(&mut rng, n1);
        let f_conj = f.evaluate_tuples(&za.conjugate(&u)?, &zx.conjugate(&u)?)?;
        let big_u = linalg::kron(&linalg::identity(blocks), &u);
        let expected = big_u.adjoint() * &fz * &big_u;
        let un = linalg::max_abs(&(f_conj - expected));
        max_un = max_un.max(un);
        if un >= config.tol && un_witness.is_none() {
            un_witness = Some(AxiomWitness {
                axiom: "unitary_equivalence",
                sample: s,
                z: PointJson::new(&za, &zx),
                w: None,
                unitary: Some(matrix_domain::matrix_to_json(&u)),
                deviation: un,
            });
        }
    }

    Ok(AxiomReport {
        test: "nc_function_axioms",
        pass: max_ds < config.tol && max_un < config.tol,
        samples: config.samples,
        max_direct_sum_deviation: max_ds,
        max_unitary_deviation: max_un,
        witnesses: ds_witness.into_iter().chain(un_witness).collect(),
    })
}
