// SPDX-License-Identifier: MIT OR Apache-2.0

//! Exact arithmetic: integer polynomials, reduced rational functions and
//! subtraction-free semifield elements over a fixed, named variable universe.

mod gcd;
mod parse;
mod polynomial;
mod rational;
mod semifield;

pub use gcd::gcd;
pub use polynomial::{Exp, Polynomial, Universe};
pub use rational::RationalFunction;
pub use semifield::SemifieldElement;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("value has no subtraction-free representation")]
    NotSubtractionFree,
}

/// Binary field operations exposed through [`arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Div,
}

/// Applies `op` to two rational functions, returning the reduced result.
pub fn arith(
    op: ArithOp,
    f: &RationalFunction,
    g: &RationalFunction,
) -> Result<RationalFunction, PolyError> {
    match op {
        ArithOp::Add => Ok(f.add(g)),
        ArithOp::Mul => Ok(f.mul(g)),
        ArithOp::Div => f.div(g),
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    const NV: usize = 3;

    fn poly_strategy(max_terms: usize) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((prop::collection::vec(0u16..3, NV), -4i64..5), 0..max_terms)
            .prop_map(|terms| {
                Polynomial::from_terms(NV, terms.into_iter().map(|(e, c)| (e, BigInt::from(c))))
            })
    }

    fn nonneg_poly(max_terms: usize) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((prop::collection::vec(0u16..3, NV), 1i64..4), 1..max_terms)
            .prop_map(|terms| {
                Polynomial::from_terms(NV, terms.into_iter().map(|(e, c)| (e, BigInt::from(c))))
            })
    }

    fn rf_strategy() -> impl Strategy<Value = RationalFunction> {
        (poly_strategy(4), poly_strategy(3))
            .prop_filter_map("nonzero denominator", |(n, d)| RationalFunction::new(n, d).ok())
    }

    fn sf_strategy() -> impl Strategy<Value = SemifieldElement> {
        (nonneg_poly(4), nonneg_poly(3)).prop_map(|(n, d)| SemifieldElement::new(n, d).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn polynomial_ring_axioms(f in poly_strategy(5), g in poly_strategy(5), h in poly_strategy(4)) {
            prop_assert_eq!(f.add(&g).mul(&h), f.mul(&h).add(&g.mul(&h)));
            prop_assert_eq!(f.mul(&g), g.mul(&f));
            prop_assert_eq!(f.add(&g).add(&h), f.add(&g.add(&h)));
            prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        }

        #[test]
        fn exact_division_inverts_multiplication(f in poly_strategy(5), g in poly_strategy(4)) {
            prop_assume!(!g.is_zero());
            prop_assert_eq!(f.mul(&g).div_exact(&g), Some(f));
        }

        #[test]
        fn gcd_is_a_common_divisor_containing_the_planted_factor(
            f in poly_strategy(4), g in poly_strategy(4), h in poly_strategy(3)
        ) {
            prop_assume!(!h.is_zero() && !f.is_zero() && !g.is_zero());
            let a = f.mul(&h);
            let b = g.mul(&h);
            let d = gcd(&a, &b);
            prop_assert!(a.div_exact(&d).is_some());
            prop_assert!(b.div_exact(&d).is_some());
            prop_assert!(d.div_exact(&h.with_positive_lead()).is_some()
                || d.div_exact(&h.with_positive_lead().neg()).is_some());
        }

        #[test]
        fn rational_field_axioms(f in rf_strategy(), g in rf_strategy(), h in rf_strategy()) {
            prop_assert_eq!(f.add(&g).mul(&h), f.mul(&h).add(&g.mul(&h)));
            prop_assert_eq!(f.add(&g), g.add(&f));
            prop_assert_eq!(f.mul(&g), g.mul(&f));
            prop_assert_eq!(f.add(&g).add(&h), f.add(&g.add(&h)));
            prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        }

        #[test]
        fn canonical_form_is_idempotent(f in rf_strategy()) {
            let again = RationalFunction::new(f.num().clone(), f.den().clone()).unwrap();
            prop_assert_eq!(again, f);
        }

        #[test]
        fn semifield_closure(f in sf_strategy(), g in sf_strategy()) {
            for r in [f.add(&g), f.mul(&g), f.div(&g), f.one_plus(), f.ratio_to_one_plus()] {
                let (n, d) = r.representation();
                prop_assert!(n.has_nonnegative_coeffs() && d.has_nonnegative_coeffs());
                prop_assert!(!n.is_zero() && !d.is_zero());
                // The witness represents the same value as the reduced form.
                let w = RationalFunction::new(n.clone(), d.clone()).unwrap();
                prop_assert_eq!(&w, r.value());
            }
        }

        #[test]
        fn text_round_trip(f in rf_strategy()) {
            let u = Universe::new(["x1", "x2", "y1"]);
            let s = f.to_text(&u);
            prop_assert_eq!(RationalFunction::parse(&s, &u).unwrap(), f);
        }
    }
}
