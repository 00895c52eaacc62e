// SPDX-License-Identifier: MIT OR Apache-2.0

//! Sparse multivariate integer polynomials over a fixed variable universe.
//!
//! Terms are stored term-major in one flat exponent buffer (stride = number of
//! variables) next to a parallel coefficient vector. The terms are kept in
//! strictly descending graded-lexicographic order and no stored coefficient is
//! zero, so structural equality is mathematical equality.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

mod packed;

/// Exponent type. Sixteen bits are far beyond the degrees reached by the
/// mutation runs in this crate; overflow is checked in debug builds.
pub type Exp = u16;

/// Named variables shared by every polynomial built over them.
#[derive(Debug, PartialEq, Eq)]
pub struct Universe {
    names: Vec<String>,
    lookup: FxHashMap<String, usize>,
}

impl Universe {
    /// Builds a universe from distinct identifier-like names.
    ///
    /// # Panics
    /// Panics if a name repeats or is not of the form `[A-Za-z_][A-Za-z0-9_]*`.
    pub fn new<I, S>(names: I) -> Arc<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut lookup = FxHashMap::default();
        for (i, n) in names.iter().enumerate() {
            assert!(is_identifier(n), "invalid variable name {n:?}");
            let prev = lookup.insert(n.clone(), i);
            assert!(prev.is_none(), "duplicate variable name {n:?}");
        }
        Arc::new(Universe { names, lookup })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, var: usize) -> &str {
        &self.names[var]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.lookup.get(name).copied()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Graded lexicographic comparison of two exponent vectors.
#[inline]
pub(crate) fn grlex_cmp(a: &[Exp], b: &[Exp]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

/// Exponent vector wrapper ordered by graded lex, used as a map key.
#[derive(Clone, PartialEq, Eq)]
struct GrlexKey(Box<[Exp]>);

impl Ord for GrlexKey {
    fn cmp(&self, other: &Self) -> Ordering {
        grlex_cmp(&self.0, &other.0)
    }
}

impl PartialOrd for GrlexKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    exps: Vec<Exp>,
    coeffs: Vec<BigInt>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[")?;
        for (i, (e, c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}*{e:?}")?;
        }
        write!(f, "]")
    }
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, exps: Vec::new(), coeffs: Vec::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigInt::one())
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(nvars);
        }
        Polynomial { nvars, exps: vec![0; nvars], coeffs: vec![c] }
    }

    /// The polynomial consisting of the single variable `var`.
    pub fn var(nvars: usize, var: usize) -> Self {
        assert!(var < nvars, "variable index {var} out of range");
        let mut exps = vec![0; nvars];
        exps[var] = 1;
        Polynomial { nvars, exps, coeffs: vec![BigInt::one()] }
    }

    /// A single term `coeff * prod x_i^{e_i}`.
    pub fn monomial(exps: &[Exp], coeff: BigInt) -> Self {
        if coeff.is_zero() {
            return Self::zero(exps.len());
        }
        Polynomial { nvars: exps.len(), exps: exps.to_vec(), coeffs: vec![coeff] }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<Exp>, BigInt)>,
    {
        let mut acc: FxHashMap<Box<[Exp]>, BigInt> = FxHashMap::default();
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length mismatch");
            if c.is_zero() {
                continue;
            }
            *acc.entry(e.into_boxed_slice()).or_insert_with(BigInt::zero) += c;
        }
        Self::from_map(nvars, acc)
    }

    fn from_map(nvars: usize, acc: FxHashMap<Box<[Exp]>, BigInt>) -> Self {
        let mut terms: Vec<(Box<[Exp]>, BigInt)> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| grlex_cmp(&b.0, &a.0));
        let mut exps = Vec::with_capacity(terms.len() * nvars);
        let mut coeffs = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            exps.extend_from_slice(&e);
            coeffs.push(c);
        }
        Polynomial { nvars, exps, coeffs }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_constant(&self) -> bool {
        self.is_zero() || (self.coeffs.len() == 1 && self.exps.iter().all(|&e| e == 0))
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && !self.is_zero() && self.coeffs[0].is_one()
    }

    /// The constant value if the polynomial is constant.
    pub fn constant_value(&self) -> Option<BigInt> {
        if self.is_zero() {
            Some(BigInt::zero())
        } else if self.is_constant() {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// True for a single term (including nonzero constants).
    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn exponents(&self, term: usize) -> &[Exp] {
        &self.exps[term * self.nvars..(term + 1) * self.nvars]
    }

    pub fn coeff(&self, term: usize) -> &BigInt {
        &self.coeffs[term]
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Exp], &BigInt)> + '_ {
        (0..self.coeffs.len()).map(move |i| (self.exponents(i), &self.coeffs[i]))
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.first()
    }

    pub fn total_degree(&self) -> u32 {
        // The first term has maximal total degree in graded order.
        if self.is_zero() {
            0
        } else {
            self.exponents(0).iter().map(|&e| e as u32).sum()
        }
    }

    pub fn degree_in(&self, var: usize) -> Exp {
        (0..self.term_count()).map(|t| self.exponents(t)[var]).max().unwrap_or(0)
    }

    /// Which variables actually occur.
    pub fn vars_mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.nvars];
        for t in 0..self.term_count() {
            for (v, &e) in self.exponents(t).iter().enumerate() {
                if e > 0 {
                    m[v] = true;
                }
            }
        }
        m
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Gcd of the integer coefficients (positive; zero for the zero polynomial).
    pub fn integer_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Componentwise minimum exponent over all terms.
    pub fn monomial_content(&self) -> Vec<Exp> {
        if self.is_zero() {
            return vec![0; self.nvars];
        }
        let mut m = self.exponents(0).to_vec();
        for t in 1..self.term_count() {
            for (mi, &e) in m.iter_mut().zip(self.exponents(t)) {
                if e < *mi {
                    *mi = e;
                }
            }
        }
        m
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            nvars: self.nvars,
            exps: self.exps.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Multiplies by the term `coeff * x^exps`; order is preserved by the shift.
    pub fn mul_term(&self, exps: &[Exp], coeff: &BigInt) -> Self {
        if coeff.is_zero() || self.is_zero() {
            return Self::zero(self.nvars);
        }
        let mut out = self.exps.clone();
        for chunk in out.chunks_mut(self.nvars) {
            for (x, &e) in chunk.iter_mut().zip(exps) {
                *x = x.checked_add(e).expect("exponent overflow");
            }
        }
        let coeffs = if coeff.is_one() {
            self.coeffs.clone()
        } else {
            self.coeffs.iter().map(|c| c * coeff).collect()
        };
        Polynomial { nvars: self.nvars, exps: out, coeffs }
    }

    /// Divides by the term `coeff * x^exps`, or `None` if it does not divide.
    pub fn div_term(&self, exps: &[Exp], coeff: &BigInt) -> Option<Self> {
        if coeff.is_zero() {
            return None;
        }
        let mut out = self.exps.clone();
        for chunk in out.chunks_mut(self.nvars) {
            for (x, &e) in chunk.iter_mut().zip(exps) {
                if *x < e {
                    return None;
                }
                *x -= e;
            }
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(coeff);
            if !r.is_zero() {
                return None;
            }
            coeffs.push(q);
        }
        Some(Polynomial { nvars: self.nvars, exps: out, coeffs })
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        self.mul_term(&vec![0; self.nvars], c)
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        assert_eq!(self.nvars, other.nvars, "universe mismatch");
        let n = self.nvars;
        let mut exps = Vec::with_capacity(self.exps.len() + other.exps.len());
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + other.coeffs.len());
        let (mut i, mut j) = (0, 0);
        let oc = |j: usize| {
            if negate_other {
                -&other.coeffs[j]
            } else {
                other.coeffs[j].clone()
            }
        };
        while i < self.term_count() && j < other.term_count() {
            let (ea, eb) = (self.exponents(i), other.exponents(j));
            match grlex_cmp(ea, eb) {
                Ordering::Greater => {
                    exps.extend_from_slice(ea);
                    coeffs.push(self.coeffs[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    exps.extend_from_slice(eb);
                    coeffs.push(oc(j));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other {
                        &self.coeffs[i] - &other.coeffs[j]
                    } else {
                        &self.coeffs[i] + &other.coeffs[j]
                    };
                    if !c.is_zero() {
                        exps.extend_from_slice(ea);
                        coeffs.push(c);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        while i < self.term_count() {
            exps.extend_from_slice(self.exponents(i));
            coeffs.push(self.coeffs[i].clone());
            i += 1;
        }
        while j < other.term_count() {
            exps.extend_from_slice(other.exponents(j));
            coeffs.push(oc(j));
            j += 1;
        }
        debug_assert_eq!(exps.len(), coeffs.len() * n);
        Polynomial { nvars: n, exps, coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "universe mismatch");
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars);
        }
        if other.is_monomial() {
            return self.mul_term(other.exponents(0), &other.coeffs[0]);
        }
        if self.is_monomial() {
            return other.mul_term(self.exponents(0), &self.coeffs[0]);
        }
        if let Some(p) = packed::mul(self, other) {
            return p;
        }
        let (small, large) =
            if self.term_count() <= other.term_count() { (self, other) } else { (other, self) };
        let n = self.nvars;
        let mut acc: FxHashMap<Box<[Exp]>, BigInt> =
            FxHashMap::with_capacity_and_hasher(large.term_count() * 2, Default::default());
        let mut buf = vec![0 as Exp; n];
        for (ea, ca) in small.terms() {
            for (eb, cb) in large.terms() {
                for k in 0..n {
                    buf[k] = ea[k].checked_add(eb[k]).expect("exponent overflow");
                }
                let prod = ca * cb;
                match acc.get_mut(buf.as_slice()) {
                    Some(c) => *c += prod,
                    None => {
                        acc.insert(buf.clone().into_boxed_slice(), prod);
                    }
                }
            }
        }
        Self::from_map(n, acc)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        assert_eq!(self.nvars, divisor.nvars, "universe mismatch");
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(self.clone());
        }
        if divisor.is_monomial() {
            return self.div_term(divisor.exponents(0), &divisor.coeffs[0]);
        }
        if self.total_degree() < divisor.total_degree() {
            return None;
        }
        for v in 0..self.nvars {
            if divisor.degree_in(v) > self.degree_in(v) {
                return None;
            }
        }
        if let Some(q) = packed::div_exact(self, divisor) {
            return q;
        }
        let n = self.nvars;
        let lt_exp = divisor.exponents(0).to_vec();
        let lt_coeff = divisor.coeffs[0].clone();
        let mut rem: BTreeMap<GrlexKey, BigInt> = self
            .terms()
            .map(|(e, c)| (GrlexKey(e.to_vec().into_boxed_slice()), c.clone()))
            .collect();
        let mut q_exps = Vec::new();
        let mut q_coeffs = Vec::new();
        let mut buf = vec![0 as Exp; n];
        while let Some((key, c)) = rem.pop_last() {
            for k in 0..n {
                if key.0[k] < lt_exp[k] {
                    return None;
                }
                buf[k] = key.0[k] - lt_exp[k];
            }
            let (qc, r) = c.div_rem(&lt_coeff);
            if !r.is_zero() {
                return None;
            }
            for t in 1..divisor.term_count() {
                let e = divisor.exponents(t);
                let mut k2 = vec![0 as Exp; n];
                for k in 0..n {
                    k2[k] = buf[k] + e[k];
                }
                let prod = &qc * &divisor.coeffs[t];
                let key2 = GrlexKey(k2.into_boxed_slice());
                match rem.get_mut(&key2) {
                    Some(v) => {
                        *v -= prod;
                        if v.is_zero() {
                            rem.remove(&key2);
                        }
                    }
                    None => {
                        rem.insert(key2, -prod);
                    }
                }
            }
            q_exps.extend_from_slice(&buf);
            q_coeffs.push(qc);
        }
        Some(Polynomial { nvars: n, exps: q_exps, coeffs: q_coeffs })
    }

    /// Coefficients with respect to `var`: entry `k` is the coefficient of `var^k`
    /// (a polynomial in which `var` does not occur).
    pub fn to_univariate(&self, var: usize) -> Vec<Polynomial> {
        let deg = self.degree_in(var) as usize;
        let mut parts: Vec<(Vec<Exp>, Vec<BigInt>)> = vec![(Vec::new(), Vec::new()); deg + 1];
        for (e, c) in self.terms() {
            let k = e[var] as usize;
            let slot = &mut parts[k];
            slot.0.extend_from_slice(e);
            let len = slot.0.len();
            slot.0[len - self.nvars + var] = 0;
            slot.1.push(c.clone());
        }
        // Removing one variable from a grlex-sorted list can break the order, so
        // sort each slice again.
        parts
            .into_iter()
            .map(|(exps, coeffs)| {
                let n = self.nvars;
                let mut idx: Vec<usize> = (0..coeffs.len()).collect();
                idx.sort_unstable_by(|&a, &b| {
                    grlex_cmp(&exps[b * n..(b + 1) * n], &exps[a * n..(a + 1) * n])
                });
                let mut e2 = Vec::with_capacity(exps.len());
                let mut c2 = Vec::with_capacity(coeffs.len());
                for i in idx {
                    e2.extend_from_slice(&exps[i * n..(i + 1) * n]);
                    c2.push(coeffs[i].clone());
                }
                Polynomial { nvars: n, exps: e2, coeffs: c2 }
            })
            .collect()
    }

    /// Inverse of [`Polynomial::to_univariate`].
    pub fn from_univariate(nvars: usize, var: usize, coeffs: &[Polynomial]) -> Self {
        let mut acc = Self::zero(nvars);
        let mut shift = vec![0 as Exp; nvars];
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                shift[var] = k as Exp;
                acc = acc.add(&c.mul_term(&shift, &BigInt::one()));
            }
        }
        acc
    }

    /// Sign-normalised copy: leading coefficient positive.
    pub fn with_positive_lead(&self) -> Self {
        match self.leading_coeff() {
            Some(c) if c.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    /// Evaluates at an integer point.
    pub fn eval_integer(&self, point: &[BigInt]) -> BigInt {
        let mut sum = BigInt::zero();
        for (e, c) in self.terms() {
            let mut term = c.clone();
            for (v, &k) in e.iter().enumerate() {
                if k > 0 {
                    term *= num_traits::pow(point[v].clone(), k as usize);
                }
            }
            sum += term;
        }
        sum
    }

    /// Renders with the variable names of `universe`, e.g. `x1^2*y3 + 2*x2`.
    pub fn to_text(&self, universe: &Universe) -> String {
        assert_eq!(universe.len(), self.nvars, "universe mismatch");
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (e, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            let is_const = e.iter().all(|&k| k == 0);
            if !abs.is_one() || is_const {
                factors.push(abs.to_string());
            }
            for (v, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(universe.name(v).to_string()),
                    _ => factors.push(format!("{}^{}", universe.name(v), k)),
                }
            }
            s.push_str(&factors.join("*"));
        }
        s
    }
}

impl Polynomial {
    /// Parses expressions such as `x1^2*y3 + 2*x2` (parentheses are accepted;
    /// the value must be a polynomial).
    pub fn parse(text: &str, universe: &Universe) -> Result<Self, super::PolyError> {
        super::parse::parse_polynomial(text, universe)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uni() -> Arc<Universe> {
        Universe::new(["x1", "x2", "y3"])
    }

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s, &uni()).unwrap()
    }

    #[test]
    fn text_round_trip() {
        let u = uni();
        for s in ["x1^2*y3 + 2*x2", "-x1 + 3", "0", "-7*y3^3 + x1*x2"] {
            let q = p(s);
            assert_eq!(q.to_text(&u), s);
            assert_eq!(Polynomial::parse(&q.to_text(&u), &u).unwrap(), q);
        }
    }

    #[test]
    fn grlex_order_puts_higher_degree_first() {
        let q = p("x2 + x1^2 + y3*x1 + 1");
        assert_eq!(q.to_text(&uni()), "x1^2 + x1*y3 + x2 + 1");
    }

    #[test]
    fn arithmetic_basics() {
        let a = p("x1 + x2");
        let b = p("x1 - x2");
        assert_eq!(a.mul(&b), p("x1^2 - x2^2"));
        assert_eq!(a.add(&b), p("2*x1"));
        assert_eq!(a.sub(&a), Polynomial::zero(3));
        assert_eq!(a.pow(3), a.mul(&a).mul(&a));
    }

    #[test]
    fn exact_division() {
        let a = p("x1^3 + y3^3");
        let b = p("x1 + y3");
        let q = a.div_exact(&b).unwrap();
        assert_eq!(q, p("x1^2 - x1*y3 + y3^2"));
        assert!(p("x1^2 + 1").div_exact(&b).is_none());
        assert!(p("2*x1").div_exact(&p("4")).is_none());
    }

    #[test]
    fn univariate_round_trip() {
        let a = p("x1^2*x2 + 3*x1*y3 + x2^2 + 5");
        let parts = a.to_univariate(0);
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[1], p("3*y3"));
        assert_eq!(Polynomial::from_univariate(3, 0, &parts), a);
    }

    #[test]
    fn contents() {
        let a = p("6*x1^2*x2 + 4*x1*x2^3");
        assert_eq!(a.integer_content(), BigInt::from(2));
        assert_eq!(a.monomial_content(), vec![1, 1, 0]);
    }
}
