//! Hermitian matrix tuples: the points at which nc functions are evaluated.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{NcError, Result};
use crate::free_algebra::VarClass;
use crate::linalg::{self, CMat, C64};

/// Hermiticity gate applied when a tuple is ingested from outside.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Gate on `‖U*U − I‖_max` for unitary arguments.
pub const UNITARY_TOL: f64 = 1e-10;

/// A tuple of same-size Hermitian matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct HermTuple {
    class: VarClass,
    n: usize,
    entries: Vec<CMat>,
}

impl HermTuple {
    /// Ingests nearly-Hermitian matrices, storing `(M + M*)/2`. Entries farther than
    /// [`HERMITIAN_TOL`] from Hermitian are rejected.
    pub fn new(class: VarClass, n: usize, entries: Vec<CMat>) -> Result<Self> {
        for m in &entries {
            if m.nrows() != n || m.ncols() != n {
                return Err(NcError::Shape(format!(
                    "tuple entry is {}x{}, expected {n}x{n}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            let deviation = linalg::hermitian_deviation(m);
            if deviation > HERMITIAN_TOL {
                return Err(NcError::NotHermitian { deviation });
            }
        }
        Ok(Self::symmetrized(class, n, entries))
    }

    /// Symmetrizes without the tolerance gate; for matrices that are Hermitian up to
    /// rounding by construction.
    pub(crate) fn symmetrized(class: VarClass, n: usize, entries: Vec<CMat>) -> Self {
        let entries = entries.iter().map(linalg::symmetrize).collect();
        HermTuple { class, n, entries }
    }

    pub fn zeros(class: VarClass, arity: usize, n: usize) -> Self {
        HermTuple {
            class,
            n,
            entries: vec![CMat::zeros(n, n); arity],
        }
    }

    pub fn identities(class: VarClass, arity: usize, n: usize) -> Self {
        HermTuple {
            class,
            n,
            entries: vec![linalg::identity(n); arity],
        }
    }

    /// A tuple with no entries; it still carries the matrix size.
    pub fn empty(class: VarClass, n: usize) -> Self {
        Self::zeros(class, 0, n)
    }

    pub fn class(&self) -> VarClass {
        self.class
    }

    pub fn with_class(mut self, class: VarClass) -> Self {
        self.class = class;
        self
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn arity(&self) -> usize {
        self.entries.len()
    }

    pub fn matrices(&self) -> &[CMat] {
        &self.entries
    }

    pub fn scale(&self, factor: f64) -> Self {
        HermTuple {
            entries: self.entries.iter().map(|m| m.scale(factor)).collect(),
            ..self.clone()
        }
    }

    /// `t·self + (1 − t)·other`.
    pub fn mix(&self, other: &HermTuple, t: f64) -> Result<Self> {
        self.check_compatible(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(x, y)| x.scale(t) + y.scale(1.0 - t))
            .collect();
        Ok(Self::symmetrized(self.class, self.n, entries))
    }

    pub fn add(&self, other: &HermTuple) -> Result<Self> {
        self.mix_linear(other, 1.0, 1.0)
    }

    pub fn sub(&self, other: &HermTuple) -> Result<Self> {
        self.mix_linear(other, 1.0, -1.0)
    }

    fn mix_linear(&self, other: &HermTuple, s: f64, t: f64) -> Result<Self> {
        self.check_compatible(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(x, y)| x.scale(s) + y.scale(t))
            .collect();
        Ok(Self::symmetrized(self.class, self.n, entries))
    }

    fn check_compatible(&self, other: &HermTuple) -> Result<()> {
        if self.arity() != other.arity() || self.n != other.n {
            return Err(NcError::Shape(format!(
                "tuples differ: arity {} size {} vs arity {} size {}",
                self.arity(),
                self.n,
                other.arity(),
                other.n
            )));
        }
        Ok(())
    }

    /// `λ_max(Σ X_i X_i*)^{1/2}`.
    pub fn norm(&self) -> f64 {
        tuple_norm_of(&self.entries, self.n)
    }

    /// Block-diagonal stacking `(Z_i ⊕ W_i)_i`.
    pub fn direct_sum(&self, other: &HermTuple) -> Result<Self> {
        if self.arity() != other.arity() {
            return Err(NcError::Shape(format!(
                "direct sum of tuples with arity {} and {}",
                self.arity(),
                other.arity()
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(z, w)| linalg::block_diag(z, w))
            .collect();
        Ok(HermTuple {
            class: self.class,
            n: self.n + other.n,
            entries,
        })
    }

    /// `(U* Z_1 U, …, U* Z_g U)`.
    pub fn conjugate(&self, u: &CMat) -> Result<Self> {
        if u.nrows() != self.n || u.ncols() != self.n {
            return Err(NcError::Shape(format!(
                "unitary is {}x{}, tuple size is {}",
                u.nrows(),
                u.ncols(),
                self.n
            )));
        }
        let deviation = linalg::unitary_deviation(u);
        if deviation > UNITARY_TOL {
            return Err(NcError::NotUnitary { deviation });
        }
        let ua = u.adjoint();
        let entries = self.entries.iter().map(|z| &ua * z * u).collect();
        Ok(Self::symmetrized(self.class, self.n, entries))
    }

    /// `(Z_1 ⊗ I_m, …)`.
    pub fn kron_identity(&self, m: usize) -> Self {
        let id = linalg::identity(m);
        HermTuple {
            class: self.class,
            n: self.n * m,
            entries: self.entries.iter().map(|z| linalg::kron(z, &id)).collect(),
        }
    }

    /// `(I_m ⊗ Z_1, …)`.
    pub fn identity_kron(&self, m: usize) -> Self {
        let id = linalg::identity(m);
        HermTuple {
            class: self.class,
            n: self.n * m,
            entries: self.entries.iter().map(|z| linalg::kron(&id, z)).collect(),
        }
    }

    /// Largest entrywise deviation between two tuples of equal shape.
    pub fn max_deviation(&self, other: &HermTuple) -> f64 {
        if self.arity() != other.arity() || self.n != other.n {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(x, y)| linalg::max_abs(&(x - y)))
            .fold(0.0, f64::max)
    }
}

/// The tuple norm for arbitrary (not necessarily Hermitian) square matrices of size `n`.
pub fn tuple_norm_of(entries: &[CMat], n: usize) -> f64 {
    if entries.is_empty() || n == 0 {
        return 0.0;
    }
    let gram = entries.iter().fold(CMat::zeros(n, n), |acc, m| acc + m * m.adjoint());
    linalg::hermitian_eigenvalues(&gram)
        .last()
        .map_or(0.0, |v| v.max(0.0).sqrt())
}

/// Mixes a base seed with a stream index (splitmix64 finalizer), giving independent
/// per-trial seeds.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gaussian Hermitian tuple rescaled to the given tuple norm.
pub fn random_tuple<R: Rng + ?Sized>(rng: &mut R, class: VarClass, arity: usize, n: usize, norm: f64) -> HermTuple {
    let entries: Vec<CMat> = (0..arity).map(|_| linalg::random_hermitian(rng, n)).collect();
    let current = tuple_norm_of(&entries, n);
    let factor = if current > 0.0 { norm / current } else { 0.0 };
    HermTuple::symmetrized(class, n, entries.iter().map(|m| m.scale(factor)).collect())
}

/// `count` independent Hermitian `arity`-tuples of size `n` with tuple norm below `epsilon`;
/// each is a Gaussian tuple rescaled to a radius drawn uniformly from `(0, epsilon)`.
pub fn sample_x_ball(arity: usize, n: usize, epsilon: f64, count: usize, seed: u64) -> Result<Vec<HermTuple>> {
    if !(epsilon > 0.0) {
        return Err(NcError::Domain(format!("ball radius must be positive, got {epsilon}")));
    }
    let mut rng = rng_from_seed(seed);
    Ok((0..count)
        .map(|_| sample_ball_point(&mut rng, arity, n, epsilon))
        .collect())
}

pub fn sample_ball_point<R: Rng + ?Sized>(rng: &mut R, arity: usize, n: usize, epsilon: f64) -> HermTuple {
    let u = loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            break u;
        }
    };
    random_tuple(rng, VarClass::X, arity, n, epsilon * u)
}

#[derive(Clone, Debug)]
pub enum UnitaryChoice {
    Identity,
    Random { seed: u64 },
    Given(CMat),
}

/// An element `U*(I_m ⊗ A)U` of the smallest nc set containing `A`.
#[derive(Clone, Debug)]
pub struct CASetElement {
    pub base: HermTuple,
    pub multiplicity: usize,
    pub unitary: CMat,
    pub realized: HermTuple,
}

impl CASetElement {
    pub fn kappa(&self) -> usize {
        self.base.size()
    }
}

pub fn ca_element(base: &HermTuple, multiplicity: usize, choice: UnitaryChoice) -> Result<CASetElement> {
    if multiplicity == 0 {
        return Err(NcError::Domain("multiplicity must be positive".into()));
    }
    let size = base.size() * multiplicity;
    let unitary = match choice {
        UnitaryChoice::Identity => linalg::identity(size),
        UnitaryChoice::Random { seed } => linalg::random_unitary(&mut rng_from_seed(seed), size),
        UnitaryChoice::Given(u) => u,
    };
    let realized = base.identity_kron(multiplicity).conjugate(&unitary)?;
    Ok(CASetElement {
        base: base.clone(),
        multiplicity,
        unitary,
        realized,
    })
}

/// JSON form of a tuple: `entries[k][i][j] = [re, im]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TupleJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
    pub n: usize,
    pub entries: Vec<Vec<Vec<[f64; 2]>>>,
}

pub fn matrix_to_json(m: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &[Vec<[f64; 2]>]) -> Result<CMat> {
    let n = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(NcError::Shape("ragged matrix rows".into()));
    }
    Ok(CMat::from_fn(n, cols, |i, j| C64::new(rows[i][j][0], rows[i][j][1])))
}

impl From<&HermTuple> for TupleJson {
    fn from(t: &HermTuple) -> Self {
        TupleJson {
            class: Some(match t.class {
                VarClass::A => "a".into(),
                VarClass::X => "x".into(),
            }),
            n: t.n,
            entries: t.entries.iter().map(matrix_to_json).collect(),
        }
    }
}

impl TupleJson {
    /// Converts to a tuple; `default_class` applies when the JSON carries no class tag.
    pub fn into_tuple(self, default_class: VarClass) -> Result<HermTuple> {
        let class = match self.class.as_deref() {
            None => default_class,
            Some("a") => VarClass::A,
            Some("x") => VarClass::X,
            Some(other) => return Err(NcError::Usage(format!("unknown tuple class `{other}`"))),
        };
        let entries = self
            .entries
            .iter()
            .map(|rows| matrix_from_json(rows))
            .collect::<Result<Vec<_>>>()?;
        HermTuple::new(class, self.n, entries)
    }
}

impl Serialize for HermTuple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TupleJson::from(self).serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, hermitian_eigenvalues};

    fn diag(vals: &[f64]) -> CMat {
        CMat::from_fn(vals.len(), vals.len(), |i, j| {
            if i == j {
                c(vals[i], 0.0)
            } else {
                c(0.0, 0.0)
            }
        })
    }

    fn sorted_spectrum(tuple: &HermTuple, k: usize) -> Vec<f64> {
        hermitian_eigenvalues(&tuple.matrices()[k])
    }

    #[test]
    fn norm_examples() {
        assert_eq!(HermTuple::zeros(VarClass::X, 3, 2).norm(), 0.0);
        let x = HermTuple::new(VarClass::X, 2, vec![diag(&[3.0, -1.0])]).unwrap();
        assert!((x.norm() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian_input() {
        let mut m = diag(&[1.0, 2.0]);
        m[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(
            HermTuple::new(VarClass::X, 2, vec![m]),
            Err(NcError::NotHermitian { .. })
        ));
        let mut dust = diag(&[1.0, 2.0]);
        dust[(0, 1)] = c(1e-14, 0.0);
        let t = HermTuple::new(VarClass::X, 2, vec![dust]).unwrap();
        assert_eq!(linalg::hermitian_deviation(&t.matrices()[0]), 0.0);
    }

    #[test]
    fn direct_sum_pads_and_takes_max_norm() {
        let mut rng = rng_from_seed(4);
        let z = random_tuple(&mut rng, VarClass::X, 2, 3, 0.7);
        let w = random_tuple(&mut rng, VarClass::X, 2, 2, 1.3);
        let zero1 = HermTuple::zeros(VarClass::X, 2, 1);
        let padded = z.direct_sum(&zero1).unwrap();
        assert_eq!(padded.size(), 4);
        assert_eq!(padded.matrices()[1][(3, 3)], c(0.0, 0.0));
        let s = z.direct_sum(&w).unwrap();
        assert!((s.norm() - 1.3).abs() < 1e-12);
        let swapped = w.direct_sum(&z).unwrap();
        for k in 0..2 {
            let a = sorted_spectrum(&s, k);
            let b = sorted_spectrum(&swapped, k);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-12);
            }
        }
        assert!(z.direct_sum(&HermTuple::zeros(VarClass::X, 1, 1)).is_err());
    }

    #[test]
    fn conjugation() {
        let mut rng = rng_from_seed(5);
        let z = random_tuple(&mut rng, VarClass::X, 2, 3, 0.8);
        assert_eq!(z.conjugate(&linalg::identity(3)).unwrap(), z);
        let u = linalg::random_unitary(&mut rng, 3);
        let conj = z.conjugate(&u).unwrap();
        assert!((conj.norm() - z.norm()).abs() < 1e-12);
        let back = conj.conjugate(&u.adjoint()).unwrap();
        assert!(back.max_deviation(&z) < 1e-10);

        let bad = u.scale(1.1);
        assert!(matches!(z.conjugate(&bad), Err(NcError::NotUnitary { .. })));
    }

    #[test]
    fn ca_element_examples() {
        let mut rng = rng_from_seed(6);
        let a = random_tuple(&mut rng, VarClass::A, 2, 2, 1.0);
        let one = ca_element(&a, 1, UnitaryChoice::Identity).unwrap();
        assert_eq!(one.realized, a);

        let plain = ca_element(&a, 3, UnitaryChoice::Identity).unwrap();
        let p = linalg::shuffle_permutation(3, 2);
        let a_kron_i = a.kron_identity(3);
        for k in 0..2 {
            let shuffled = &p * &plain.realized.matrices()[k] * p.transpose();
            assert!(linalg::max_abs(&(shuffled - &a_kron_i.matrices()[k])) < 1e-14);
        }

        let alpha = ca_element(&a, 3, UnitaryChoice::Random { seed: 9 }).unwrap();
        assert!(linalg::unitary_deviation(&alpha.unitary) < 1e-12);
        for k in 0..2 {
            let base = sorted_spectrum(&a, k);
            let mut expected: Vec<f64> = base.iter().flat_map(|&v| [v, v, v]).collect();
            expected.sort_by(f64::total_cmp);
            let got = sorted_spectrum(&alpha.realized, k);
            for (x, y) in got.iter().zip(&expected) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn ball_sampling() {
        let tuples = sample_x_ball(2, 3, 0.5, 200, 11).unwrap();
        assert!(tuples.iter().all(|t| t.norm() < 0.5));
        let again = sample_x_ball(2, 3, 0.5, 200, 11).unwrap();
        assert_eq!(tuples, again);
        assert!(sample_x_ball(2, 3, 0.0, 1, 11).is_err());
    }

    #[test]
    fn ball_radius_distribution_covers_interval() {
        let eps = 2.0;
        let tuples = sample_x_ball(1, 2, eps, 1000, 3).unwrap();
        let mut bins = [0usize; 10];
        for t in &tuples {
            let r = t.norm() / eps;
            assert!(r > 0.0 && r < 1.0);
            bins[(r * 10.0) as usize] += 1;
        }
        // Uniform radii put about 100 samples in each tenth.
        assert!(bins.iter().all(|&b| b > 60 && b < 140), "{bins:?}");
        let lo = tuples.iter().filter(|t| t.norm() < 0.05 * eps).count();
        let hi = tuples.iter().filter(|t| t.norm() > 0.95 * eps).count();
        assert!(lo > 0 && hi > 0);
    }

    #[test]
    fn json_round_trip() {
        let mut rng = rng_from_seed(8);
        let t = random_tuple(&mut rng, VarClass::A, 2, 2, 1.0);
        let text = serde_json::to_string(&t).unwrap();
        let back: TupleJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.into_tuple(VarClass::X).unwrap(), t);
    }
}
