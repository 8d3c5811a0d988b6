//! Named functions used by the CLI and the test corpus.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{NcError, Result};
use crate::evaluation::{ClosureFunction, NcFunction};
use crate::expr_parser::parse_polynomial;
use crate::free_algebra::{Letter, MatrixNcPolynomial, NcPolynomial, NcPowerSeries, Signature, Word};
use crate::linalg::{self, CMat, C64};
use crate::one_var::{DiscreteMeasure, KrausRepresentation, ScalarFn};

/// The Kraus form lifted to one `x` variable:
/// `F(X) = f0·I + f1·X + ½·f2·Σ_k w_k X²(I − λ_k X)^{-1}`.
#[derive(Clone, Debug)]
pub struct KrausLift {
    pub rep: KrausRepresentation,
}

impl KrausLift {
    pub fn new(rep: KrausRepresentation) -> Self {
        KrausLift { rep }
    }

    /// The point mass at ½ with `f″(0) = 2`, i.e. `t²/(1 − t/2)`.
    pub fn half_mass() -> Self {
        KrausLift::new(
            KrausRepresentation::new(0.0, 0.0, 2.0, DiscreteMeasure::point_mass(0.5)).expect("valid point mass"),
        )
    }

    /// Truncation at `order` of the geometric expansion
    /// `½·f2·Σ_k w_k Σ_{i≥2} λ_k^{i−2} x^i`.
    pub fn truncated_series(&self, order: usize) -> NcPowerSeries {
        let sig = Signature::new(0, 1);
        let xpow = |i: usize| Word::new(vec![Letter::x(1); i]);
        let parts = (0..=order)
            .map(|i| {
                let coeff = match i {
                    0 => self.rep.f0,
                    1 => self.rep.f1,
                    _ => {
                        0.5 * self.rep.f2
                            * self
                                .rep
                                .measure
                                .atoms()
                                .iter()
                                .map(|&(l, w)| w * l.powi(i as i32 - 2))
                                .sum::<f64>()
                    }
                };
                let p = NcPolynomial::monomial(sig, xpow(i), C64::new(coeff, 0.0)).expect("x1 in signature");
                MatrixNcPolynomial::scalar(p)
            })
            .collect();
        NcPowerSeries::with_radius(parts, self.radius()).expect("homogeneous parts")
    }
}

impl NcFunction for KrausLift {
    fn signature(&self) -> Signature {
        Signature::new(0, 1)
    }

    fn radius(&self) -> f64 {
        let top = self.rep.measure.atoms().iter().map(|a| a.0.abs()).fold(0.0, f64::max);
        if top == 0.0 {
            f64::INFINITY
        } else {
            1.0 / top
        }
    }

    fn evaluate(&self, a: &[CMat], x: &[CMat], n: usize) -> Result<CMat> {
        if !a.is_empty() || x.len() != 1 || x[0].nrows() != n || x[0].ncols() != n {
            return Err(NcError::Shape("the Kraus lift takes one n x n x-matrix".into()));
        }
        let x = &x[0];
        let id = linalg::identity(n);
        let x2 = x * x;
        let mut out = id.scale(self.rep.f0) + x.scale(self.rep.f1);
        for &(l, w) in self.rep.measure.atoms() {
            let solved = (&id - x.scale(l))
                .lu()
                .solve(&x2)
                .ok_or_else(|| NcError::Singularity(format!("I - {l}·X is singular")))?;
            out += solved.scale(0.5 * self.rep.f2 * w);
        }
        Ok(out)
    }
}

/// `Z ↦ trace(Z_1)·I`: respects unitary equivalence but not direct sums.
pub fn trace_evaluator() -> ClosureFunction {
    ClosureFunction::new(Signature::new(0, 1), |_, x, n| Ok(linalg::identity(n) * x[0].trace()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    Square,
    Quartic,
    KrausHalfmass,
    MixedAx,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Square, Preset::Quartic, Preset::KrausHalfmass, Preset::MixedAx];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Square => "square",
            Preset::Quartic => "quartic",
            Preset::KrausHalfmass => "kraus-halfmass",
            Preset::MixedAx => "mixed-ax",
        }
    }

    pub fn signature(&self) -> Signature {
        match self {
            Preset::MixedAx => Signature::new(1, 1),
            _ => Signature::new(0, 1),
        }
    }

    /// Source text for the polynomial presets.
    pub fn expr(&self) -> Option<&'static str> {
        match self {
            Preset::Square => Some("x1^2"),
            Preset::Quartic => Some("x1^4"),
            Preset::MixedAx => Some("a1*x1*a1 + x1*a1*x1 + x1^2"),
            Preset::KrausHalfmass => None,
        }
    }

    pub fn nc_function(&self) -> Arc<dyn NcFunction> {
        match self.expr() {
            Some(src) => Arc::new(parse_polynomial(src, self.signature()).expect("preset parses")),
            None => Arc::new(KrausLift::half_mass()),
        }
    }

    /// The one-variable function for presets in a single `x` variable.
    pub fn scalar_fn(&self) -> Option<ScalarFn> {
        match self {
            Preset::Square => Some(ScalarFn::entire(|t| t * t).with_derivative(|t| 2.0 * t)),
            Preset::Quartic => Some(ScalarFn::entire(|t| t.powi(4)).with_derivative(|t| 4.0 * t.powi(3))),
            Preset::KrausHalfmass => Some(
                ScalarFn::new((f64::NEG_INFINITY, 2.0), |t| t * t / (1.0 - 0.5 * t))
                    .with_derivative(|t| (2.0 * t - 0.5 * t * t) / (1.0 - 0.5 * t).powi(2)),
            ),
            Preset::MixedAx => None,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = NcError;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| NcError::Usage(format!("unknown preset `{s}`")))
    }
}

/// One named expression of a corpus file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    pub signature: Signature,
    pub expr: String,
}

impl CorpusEntry {
    pub fn polynomial(&self) -> Result<NcPolynomial> {
        parse_polynomial(&self.expr, self.signature)
    }
}

pub fn parse_corpus(json: &str) -> Result<Vec<CorpusEntry>> {
    Ok(serde_json::from_str(json)?)
}

pub fn load_corpus(path: &std::path::Path) -> Result<Vec<CorpusEntry>> {
    parse_corpus(&std::fs::read_to_string(path)?)
}

/// The corpus shipped with the crate.
pub fn builtin_corpus() -> Vec<CorpusEntry> {
    parse_corpus(include_str!("../corpus/polynomials.json")).expect("bundled corpus is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr_parser::render;

    #[test]
    fn presets_round_trip_names() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert!("cubic".parse::<Preset>().is_err());
    }

    #[test]
    fn bundled_corpus_parses_and_renders() {
        let corpus = builtin_corpus();
        assert!(corpus.len() >= 6);
        for entry in &corpus {
            let p = entry.polynomial().unwrap();
            let again = parse_polynomial(&render(&p), entry.signature).unwrap();
            assert_eq!(again, p, "{}", entry.name);
        }
    }

    #[test]
    fn kraus_lift_matches_series_inside_radius() {
        let lift = KrausLift::half_mass();
        assert_eq!(lift.radius(), 2.0);
        let series = lift.truncated_series(60);
        let x = CMat::from_fn(2, 2, |i, j| C64::new(if i == j { 0.3 } else { 0.1 }, 0.0));
        let direct = lift.evaluate(&[], std::slice::from_ref(&x), 2).unwrap();
        let summed = series.evaluate(&[], &[x], 2).unwrap();
        assert!(linalg::max_abs(&(direct - summed)) < 1e-14);
        let c3 = series
            .part(3)
            .unwrap()
            .entry(0, 0)
            .coeff(&Word::new(vec![Letter::x(1); 3]));
        assert_eq!(c3, C64::new(0.5, 0.0));
    }
}
