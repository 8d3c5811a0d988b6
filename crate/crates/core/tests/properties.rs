use ncconvex::evaluation::NcFunction;
use ncconvex::expr_parser::{parse_polynomial, render};
use ncconvex::free_algebra::{Letter, NcPolynomial, Signature, VarClass, Word};
use ncconvex::linalg::{self, c, CMat};
use ncconvex::matrix_domain::{random_tuple, rng_from_seed, HermTuple};
use proptest::prelude::*;

const SIG: Signature = Signature { arity_a: 1, arity_x: 2 };

fn letter() -> impl Strategy<Value = Letter> {
    prop_oneof![Just(Letter::a(1)), Just(Letter::x(1)), Just(Letter::x(2))]
}

fn word() -> impl Strategy<Value = Word> {
    prop::collection::vec(letter(), 0..4).prop_map(Word::new)
}

/// Gaussian-integer coefficients keep products exact.
fn poly() -> impl Strategy<Value = NcPolynomial> {
    prop::collection::vec((word(), -3i32..=3, -3i32..=3), 0..6).prop_map(|terms| {
        NcPolynomial::from_terms(SIG, terms.into_iter().map(|(w, re, im)| (w, c(re as f64, im as f64)))).unwrap()
    })
}

fn point(seed: u64, n: usize) -> (HermTuple, HermTuple) {
    let mut rng = rng_from_seed(seed);
    let a = random_tuple(&mut rng, VarClass::A, SIG.arity_a, n, 1.0);
    let x = random_tuple(&mut rng, VarClass::X, SIG.arity_x, n, 1.0);
    (a, x)
}

fn eval(p: &NcPolynomial, a: &HermTuple, x: &HermTuple) -> CMat {
    p.evaluate_tuples(a, x).unwrap()
}

fn close(l: &CMat, r: &CMat, scale: f64) -> bool {
    linalg::max_abs(&(l - r)) <= 1e-11 * scale.max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn involution_is_an_anti_automorphism(p in poly(), q in poly()) {
        prop_assert_eq!(p.involute().involute(), p.clone());
        prop_assert_eq!(p.mul(&q).unwrap().involute(), q.involute().mul(&p.involute()).unwrap());
        prop_assert!(p.add(&p.involute()).unwrap().is_hermitian());
    }

    #[test]
    fn x_grading_is_complete(p in poly()) {
        let series = p.x_homogeneous_parts();
        let mut sum = NcPolynomial::zero(SIG);
        for (i, part) in series.parts().iter().enumerate() {
            let entry = part.entry(0, 0);
            prop_assert!(entry.is_zero() || entry.x_degree() == Some(i));
            prop_assert!(entry.terms().all(|(w, _)| w.x_degree() == i));
            sum = sum.add(entry).unwrap();
        }
        prop_assert_eq!(sum, p);
    }

    #[test]
    fn storage_is_canonical(terms in prop::collection::vec((word(), -3i32..=3, -3i32..=3), 0..8)) {
        let forward = NcPolynomial::from_terms(SIG, terms.iter().map(|(w, re, im)| (w.clone(), c(*re as f64, *im as f64)))).unwrap();
        let backward = NcPolynomial::from_terms(SIG, terms.iter().rev().map(|(w, re, im)| (w.clone(), c(*re as f64, *im as f64)))).unwrap();
        prop_assert!(forward.terms().all(|(_, z)| z.norm() > 0.0));
        prop_assert_eq!(&forward, &backward);
        let words: Vec<&Word> = forward.terms().map(|(w, _)| w).collect();
        prop_assert!(words.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn degree_is_additive(p in poly(), q in poly()) {
        let prod = p.mul(&q).unwrap();
        match (p.degree(), q.degree()) {
            (Some(dp), Some(dq)) => prop_assert_eq!(prod.degree(), Some(dp + dq)),
            _ => prop_assert!(prod.is_zero()),
        }
    }

    #[test]
    fn render_then_parse_is_identity(p in poly()) {
        prop_assert_eq!(parse_polynomial(&render(&p), SIG).unwrap(), p);
    }

    #[test]
    fn evaluation_is_a_star_homomorphism(p in poly(), q in poly(), seed in any::<u64>(), n in 1usize..4) {
        let (a, x) = point(seed, n);
        let (ep, eq) = (eval(&p, &a, &x), eval(&q, &a, &x));
        let scale = linalg::max_abs(&ep).max(linalg::max_abs(&eq)).powi(2);
        prop_assert!(close(&eval(&p.add(&q).unwrap(), &a, &x), &(&ep + &eq), scale));
        prop_assert!(close(&eval(&p.mul(&q).unwrap(), &a, &x), &(&ep * &eq), scale));
        prop_assert!(close(&eval(&p.involute(), &a, &x), &ep.adjoint(), scale));
    }

    #[test]
    fn tuple_norm_is_a_norm(seed in any::<u64>(), n in 1usize..5, s in -3.0f64..3.0) {
        let mut rng = rng_from_seed(seed);
        let z = random_tuple(&mut rng, VarClass::X, 3, n, 1.0);
        let w = random_tuple(&mut rng, VarClass::X, 3, n, 2.0);
        prop_assert!(z.norm() >= 0.0);
        prop_assert!((z.scale(s).norm() - s.abs() * z.norm()).abs() < 1e-12);
        prop_assert!(z.add(&w).unwrap().norm() <= z.norm() + w.norm() + 1e-12);
        prop_assert!((z.direct_sum(&w).unwrap().norm() - z.norm().max(w.norm())).abs() < 1e-12);
        prop_assert!(HermTuple::zeros(VarClass::X, 3, n).norm() == 0.0);
    }
}
