// SPDX-License-Identifier: MIT OR Apache-2.0

//! Elements of the universal semifield, kept in factored form.
//!
//! An element is a Laurent monomial times a product of integer powers of
//! polynomials with nonnegative coefficients and no monomial content. Products,
//! quotients and powers only touch exponents; `1 ⊕ f` expands `f` once and
//! adds a single new factor. The reduced fraction is computed on demand and
//! may have negative coefficients, e.g. `(1 + y^3)/(1 + y) = 1 - y + y^2`.
//!
//! Factors are compared as polynomials, so equal factored forms always denote
//! equal elements. Different factored forms can still be equal (a factor may
//! be a product of others), and equality falls back to cross-multiplying the
//! expanded fractions in that case.

use super::polynomial::{Exp, Polynomial, Universe};
use super::rational::RationalFunction;
use super::PolyError;
use num_bigint::BigInt;
use num_traits::One;
use rustc_hash::FxHasher;
use std::cmp::Ordering;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

#[derive(Clone, Debug)]
struct Factor {
    key: u64,
    poly: Arc<Polynomial>,
}

impl Factor {
    fn new(poly: Polynomial) -> Self {
        let mut h = FxHasher::default();
        poly.hash(&mut h);
        Factor { key: h.finish(), poly: Arc::new(poly) }
    }

    fn order(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key).then_with(|| {
            if Arc::ptr_eq(&self.poly, &other.poly) || self.poly == other.poly {
                Ordering::Equal
            } else {
                // Hash collision: any fixed total order will do.
                format!("{:?}", self.poly).cmp(&format!("{:?}", other.poly))
            }
        })
    }
}

#[derive(Debug)]
struct Expanded {
    num: Polynomial,
    den: Polynomial,
    reduced: OnceLock<RationalFunction>,
}

#[derive(Clone, Debug)]
pub struct SemifieldElement {
    nvars: usize,
    mono: Vec<i32>,
    /// Sorted by [`Factor::order`], distinct, nonzero exponents.
    factors: Vec<(Factor, i32)>,
    cache: Arc<OnceLock<Expanded>>,
    /// `1 ⊕ self`, once computed; shared between clones.
    plus: Arc<OnceLock<SemifieldElement>>,
}

impl PartialEq for SemifieldElement {
    fn eq(&self, other: &Self) -> bool {
        if self.nvars != other.nvars {
            return false;
        }
        if self.same_form(other) {
            return true;
        }
        let (n1, d1) = self.representation();
        let (n2, d2) = other.representation();
        n1.mul(d2) == n2.mul(d1)
    }
}

impl Eq for SemifieldElement {}

/// Splits a nonzero polynomial into its monomial content and the remaining
/// factor, dropped when it is `1`.
fn split_monomial(p: Polynomial) -> (Vec<i32>, Option<Polynomial>) {
    let content = p.monomial_content();
    let rest = if content.iter().any(|&e| e > 0) {
        p.div_term(&content, &BigInt::one()).expect("monomial content divides")
    } else {
        p
    };
    let mono = content.into_iter().map(i32::from).collect();
    (mono, if rest.is_one() { None } else { Some(rest) })
}

fn monomial_poly(nvars: usize, exps: &[i32]) -> Polynomial {
    let e: Vec<Exp> = exps.iter().map(|&x| Exp::try_from(x).expect("exponent range")).collect();
    debug_assert_eq!(e.len(), nvars);
    Polynomial::monomial(&e, BigInt::one())
}

fn product<'a, I>(nvars: usize, mono: &[i32], factors: I) -> Polynomial
where
    I: Iterator<Item = (&'a Polynomial, u32)>,
{
    let mut parts: Vec<Polynomial> = factors.map(|(p, e)| p.pow(e)).collect();
    parts.sort_by_key(Polynomial::term_count);
    let mut out = monomial_poly(nvars, mono);
    for p in &parts {
        out = out.mul(p);
    }
    out
}

impl SemifieldElement {
    fn build(nvars: usize, mono: Vec<i32>, mut factors: Vec<(Factor, i32)>) -> Self {
        factors.sort_by(|a, b| a.0.order(&b.0));
        let mut merged: Vec<(Factor, i32)> = Vec::with_capacity(factors.len());
        for (f, e) in factors {
            match merged.last_mut() {
                Some((g, acc)) if g.order(&f) == Ordering::Equal => *acc += e,
                _ => merged.push((f, e)),
            }
        }
        merged.retain(|(_, e)| *e != 0);
        SemifieldElement { nvars, mono, factors: merged, cache: Arc::new(OnceLock::new()), plus: Arc::new(OnceLock::new()) }
    }

    /// Wraps a fraction whose numerator and denominator are subtraction-free.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if !num.has_nonnegative_coeffs() || !den.has_nonnegative_coeffs() || num.is_zero() {
            return Err(PolyError::NotSubtractionFree);
        }
        let nvars = num.nvars();
        let (mn, fnum) = split_monomial(num);
        let (md, fden) = split_monomial(den);
        let mono = mn.iter().zip(&md).map(|(a, b)| a - b).collect();
        let mut factors = Vec::new();
        factors.extend(fnum.map(|p| (Factor::new(p), 1)));
        factors.extend(fden.map(|p| (Factor::new(p), -1)));
        Ok(Self::build(nvars, mono, factors))
    }

    pub fn one(nvars: usize) -> Self {
        Self::build(nvars, vec![0; nvars], Vec::new())
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        let mut mono = vec![0; nvars];
        mono[v] = 1;
        Self::build(nvars, mono, Vec::new())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    fn same_form(&self, other: &Self) -> bool {
        self.mono == other.mono
            && self.factors.len() == other.factors.len()
            && self.factors.iter().zip(&other.factors).all(|((f, e), (g, k))| e == k && f.order(g) == Ordering::Equal)
    }

    fn expanded(&self) -> &Expanded {
        self.cache.get_or_init(|| {
            let pos: Vec<i32> = self.mono.iter().map(|&e| e.max(0)).collect();
            let neg: Vec<i32> = self.mono.iter().map(|&e| (-e).max(0)).collect();
            let num = product(
                self.nvars,
                &pos,
                self.factors.iter().filter(|(_, e)| *e > 0).map(|(f, e)| (&*f.poly, *e as u32)),
            );
            let den = product(
                self.nvars,
                &neg,
                self.factors.iter().filter(|(_, e)| *e < 0).map(|(f, e)| (&*f.poly, e.unsigned_abs())),
            );
            Expanded { num, den, reduced: OnceLock::new() }
        })
    }

    /// The reduced fraction.
    pub fn value(&self) -> &RationalFunction {
        let ex = self.expanded();
        ex.reduced.get_or_init(|| {
            RationalFunction::new(ex.num.clone(), ex.den.clone()).expect("denominator is nonzero")
        })
    }

    pub fn into_value(self) -> RationalFunction {
        self.value().clone()
    }

    /// A numerator/denominator pair with nonnegative coefficients representing
    /// this element: the expanded factored form, not necessarily reduced.
    pub fn representation(&self) -> (&Polynomial, &Polynomial) {
        let ex = self.expanded();
        (&ex.num, &ex.den)
    }

    pub fn is_one(&self) -> bool {
        if self.factors.is_empty() {
            return self.mono.iter().all(|&e| e == 0);
        }
        let (n, d) = self.representation();
        n == d
    }

    /// Size of the factored form, in terms.
    pub fn term_count(&self) -> usize {
        1 + self.factors.iter().map(|(f, _)| f.poly.term_count()).sum::<usize>()
    }

    /// Number of distinct polynomial factors.
    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        let (n1, d1) = self.representation();
        let (n2, d2) = other.representation();
        let sum = Self::new(n1.mul(d2).add(&n2.mul(d1)), Polynomial::one(self.nvars)).expect("positive sum");
        sum.div(&self.denominator()).div(&other.denominator())
    }

    /// The factored denominator as an element of its own.
    fn denominator(&self) -> Self {
        let mono = self.mono.iter().map(|&e| (-e).max(0)).collect();
        let factors = self.factors.iter().filter(|(_, e)| *e < 0).map(|(f, e)| (f.clone(), -e)).collect();
        Self::build(self.nvars, mono, factors)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mono = self.mono.iter().zip(&other.mono).map(|(a, b)| a + b).collect();
        let factors = self.factors.iter().chain(&other.factors).cloned().collect();
        Self::build(self.nvars, mono, factors)
    }

    pub fn inv(&self) -> Self {
        let cache = OnceLock::new();
        if let Some(ex) = self.cache.get() {
            let _ = cache.set(Expanded { num: ex.den.clone(), den: ex.num.clone(), reduced: OnceLock::new() });
        }
        let out = SemifieldElement {
            nvars: self.nvars,
            mono: self.mono.iter().map(|e| -e).collect(),
            factors: self.factors.iter().map(|(f, e)| (f.clone(), -e)).collect(),
            cache: Arc::new(cache),
            plus: Arc::new(OnceLock::new()),
        };
        // 1 ⊕ f⁻¹ = (1 ⊕ f)/f keeps whatever splitting was found for 1 ⊕ f.
        if let Some(p) = self.plus.get() {
            let _ = out.plus.set(p.mul(&out));
        }
        out
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    pub fn pow(&self, e: i32) -> Self {
        match e {
            0 => Self::one(self.nvars),
            1 => self.clone(),
            -1 => self.inv(),
            _ => Self::build(
                self.nvars,
                self.mono.iter().map(|m| m * e).collect(),
                self.factors.iter().map(|(f, k)| (f.clone(), k * e)).collect(),
            ),
        }
    }

    /// `1 ⊕ self`.
    pub fn one_plus(&self) -> Self {
        self.plus
            .get_or_init(|| {
                let (n, d) = self.representation();
                let sum = Self::new(n.add(d), Polynomial::one(self.nvars)).expect("positive sum");
                sum.div(&self.denominator())
            })
            .clone()
    }

    /// `1 ⊕ self`, splitting the new numerator `N + D` by `known` when it
    /// divides exactly. Returns the sum and the cofactor `(N + D)/known`
    /// without monomial content (all of `N + D` when `known` does not divide).
    ///
    /// The result is cached, so later calls to [`Self::one_plus`] on this
    /// element or its clones reuse the split form.
    pub fn one_plus_splitting(&self, known: &Polynomial) -> (Self, Polynomial) {
        let (n, d) = self.representation();
        let total = n.add(d);
        let (mono, rest) = split_monomial(total);
        let rest = rest.unwrap_or_else(|| Polynomial::one(self.nvars));
        let (mut factors, cofactor) = match (!known.is_one()).then(|| rest.div_exact(known)).flatten() {
            Some(q) => {
                let (m, q) = split_monomial(q);
                debug_assert!(m.iter().all(|&e| e == 0), "primitive divided by primitive");
                let q = q.unwrap_or_else(|| Polynomial::one(self.nvars));
                (vec![(Factor::new(known.clone()), 1)], q)
            }
            None => (Vec::new(), rest),
        };
        if !cofactor.is_one() {
            factors.push((Factor::new(cofactor.clone()), 1));
        }
        let sum = Self::build(self.nvars, mono, factors).div(&self.denominator());
        let _ = self.plus.set(sum.clone());
        (self.plus.get().expect("just set").clone(), cofactor)
    }

    /// `self / (1 ⊕ self)`.
    pub fn ratio_to_one_plus(&self) -> Self {
        self.div(&self.one_plus())
    }

    /// The reduced fraction as text.
    pub fn to_text(&self, universe: &Universe) -> String {
        self.value().to_text(universe)
    }

    /// The factored form as text, e.g. `y1*y2^-1*(y2 + 1)^-1`. Cheap even when
    /// the expanded fraction is large.
    pub fn factored_text(&self, universe: &Universe) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (v, &e) in self.mono.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(universe.name(v).to_string()),
                _ => parts.push(format!("{}^{e}", universe.name(v))),
            }
        }
        let mut factors: Vec<(String, i32)> =
            self.factors.iter().map(|(f, e)| (f.poly.to_text(universe), *e)).collect();
        factors.sort();
        for (p, e) in factors {
            if e == 1 {
                parts.push(format!("({p})"));
            } else {
                parts.push(format!("({p})^{e}"));
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_form_may_have_signs() {
        let u = Universe::new(["y"]);
        let p = |s: &str| Polynomial::parse(s, &u).unwrap();
        let a = SemifieldElement::new(p("1 + y^3"), p("1 + y")).unwrap();
        assert_eq!(a.value().to_text(&u), "y^2 - y + 1");
        let (n, d) = a.representation();
        assert!(n.has_nonnegative_coeffs() && d.has_nonnegative_coeffs());
        let b = a.mul(&a.inv());
        assert!(b.is_one());
        assert!(SemifieldElement::new(p("y - 1"), p("1")).is_err());
        assert_eq!(SemifieldElement::new(p("1"), p("0")), Err(PolyError::DivisionByZero));
    }

    #[test]
    fn one_plus_and_ratio() {
        let u = Universe::new(["y1", "y2"]);
        let y = SemifieldElement::var(2, 0).div(&SemifieldElement::var(2, 1).one_plus());
        assert_eq!(y.one_plus().to_text(&u), "(y1 + y2 + 1)/(y2 + 1)");
        assert_eq!(y.ratio_to_one_plus().to_text(&u), "(y1)/(y1 + y2 + 1)");
        let two = SemifieldElement::one(2).one_plus();
        assert_eq!(two.value().num().constant_value(), Some(BigInt::from(2)));
    }

    #[test]
    fn hidden_factorisations_still_compare_equal() {
        let u = Universe::new(["y"]);
        let p = |s: &str| Polynomial::parse(s, &u).unwrap();
        let whole = SemifieldElement::new(p("1 + 2*y + y^2"), p("1")).unwrap();
        let split = SemifieldElement::new(p("1 + y"), p("1")).unwrap().pow(2);
        assert_eq!(whole.factor_count(), 1);
        assert_eq!(split.factor_count(), 1);
        assert_eq!(whole, split);
        assert_ne!(whole, split.mul(&SemifieldElement::var(1, 0)));
    }

    #[test]
    fn monomial_content_moves_into_the_monomial() {
        let u = Universe::new(["y1", "y2"]);
        let p = |s: &str| Polynomial::parse(s, &u).unwrap();
        let a = SemifieldElement::new(p("y1^2*y2 + y1*y2"), p("y2^3")).unwrap();
        assert_eq!(a.factored_text(&u), "y1*y2^-2*(y1 + 1)");
        assert_eq!(a.factor_count(), 1);
    }

    #[test]
    fn inverse_then_one_plus_reuses_the_same_factor() {
        let u = Universe::new(["y1", "y2"]);
        let y = SemifieldElement::var(2, 0).mul(&SemifieldElement::var(2, 1).one_plus().pow(2));
        // (1 + y)/(1 + 1/y) = y, with no expansion needed for the comparison.
        let lhs = y.one_plus().div(&y.inv().one_plus());
        assert!(lhs.same_form(&y));
        assert_eq!(lhs.factored_text(&u), "y1*(y2 + 1)^2");
    }
}
