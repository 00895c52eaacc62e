// SPDX-License-Identifier: MIT OR Apache-2.0

//! Reduced fractions of integer polynomials.

use super::gcd::gcd;
use super::polynomial::{Exp, Polynomial, Universe};
use super::PolyError;
use num_bigint::BigInt;
use num_traits::{One, Signed};

/// A fraction `num / den` in lowest terms with `den` having a positive
/// leading coefficient. Equal rational functions have identical fields.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    /// Reduces `num / den`.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero(num.nvars()));
        }
        let g = gcd(&num, &den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        if den.leading_coeff().is_some_and(|c| c.is_negative()) {
            num = num.neg();
            den = den.neg();
        }
        Ok(RationalFunction { num, den })
    }

    /// Assembles a fraction the caller knows to be reduced already, fixing only the sign.
    fn from_coprime(num: Polynomial, den: Polynomial) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Self::zero(num.nvars());
        }
        if den.leading_coeff().is_some_and(|c| c.is_negative()) {
            RationalFunction { num: num.neg(), den: den.neg() }
        } else {
            RationalFunction { num, den }
        }
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        let n = p.nvars();
        RationalFunction { num: p, den: Polynomial::one(n) }
    }

    pub fn zero(nvars: usize) -> Self {
        RationalFunction { num: Polynomial::zero(nvars), den: Polynomial::one(nvars) }
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_polynomial(Polynomial::one(nvars))
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        Self::from_polynomial(Polynomial::var(nvars, v))
    }

    pub fn constant(nvars: usize, c: i64) -> Self {
        Self::from_polynomial(Polynomial::constant(nvars, BigInt::from(c)))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            // A shared denominator may still cancel against the new numerator.
            return Self::new(self.num.add(&other.num), self.den.clone()).expect("nonzero den");
        }
        let g = gcd(&self.den, &other.den);
        if g.is_one() {
            let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
            return Self::from_coprime(num, self.den.mul(&other.den));
        }
        let b1 = self.den.div_exact(&g).expect("gcd divides");
        let d1 = other.den.div_exact(&g).expect("gcd divides");
        let t = self.num.mul(&d1).add(&other.num.mul(&b1));
        if t.is_zero() {
            return Self::zero(self.nvars());
        }
        let h = gcd(&t, &g);
        let den = b1.mul(&other.den);
        if h.is_one() {
            Self::from_coprime(t, den)
        } else {
            Self::from_coprime(
                t.div_exact(&h).expect("gcd divides"),
                den.div_exact(&h).expect("gcd divides"),
            )
        }
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars());
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let cut = |p: &Polynomial, g: &Polynomial| {
            if g.is_one() {
                p.clone()
            } else {
                p.div_exact(g).expect("gcd divides")
            }
        };
        let num = cut(&self.num, &g1).mul(&cut(&other.num, &g2));
        let den = cut(&self.den, &g2).mul(&cut(&other.den, &g1));
        Self::from_coprime(num, den)
    }

    /// Product with a polynomial; only the denominator needs a gcd.
    pub fn mul_poly(&self, p: &Polynomial) -> Self {
        if self.is_zero() || p.is_zero() {
            return Self::zero(self.nvars());
        }
        if self.den.is_one() {
            return Self::from_coprime(self.num.mul(p), self.den.clone());
        }
        let g = gcd(p, &self.den);
        if g.is_one() {
            return Self::from_coprime(self.num.mul(p), self.den.clone());
        }
        let p = p.div_exact(&g).expect("gcd divides");
        let den = self.den.div_exact(&g).expect("gcd divides");
        Self::from_coprime(self.num.mul(&p), den)
    }

    pub fn inv(&self) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Ok(Self::from_coprime(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self, PolyError> {
        Ok(self.mul(&other.inv()?))
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i32) -> Result<Self, PolyError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(Self::from_coprime(base.num.pow(k), base.den.pow(k)))
    }

    /// `1 + self`; no gcd is needed since gcd(n + d, d) = gcd(n, d) = 1.
    pub fn one_plus(&self) -> Self {
        Self::from_coprime(self.num.add(&self.den), self.den.clone())
    }

    /// `self / (1 + self)`, reduced for the same reason as [`Self::one_plus`].
    pub fn ratio_to_one_plus(&self) -> Result<Self, PolyError> {
        let d = self.num.add(&self.den);
        if d.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Ok(Self::from_coprime(self.num.clone(), d))
    }

    /// Substitutes `bindings[v]` for every variable `v` that has a binding.
    ///
    /// Both numerator and denominator are evaluated over the common
    /// denominator `prod d_v^{D_v}`, which then cancels.
    pub fn substitute(&self, bindings: &[Option<RationalFunction>]) -> Result<Self, PolyError> {
        let n = self.nvars();
        assert_eq!(bindings.len(), n, "one binding slot per variable");
        let out_vars = bindings.iter().flatten().map(|b| b.nvars()).next().unwrap_or(n);
        let degs: Vec<Exp> = (0..n)
            .map(|v| self.num.degree_in(v).max(self.den.degree_in(v)))
            .collect();
        let eval = |p: &Polynomial| -> Polynomial {
            let mut acc = Polynomial::zero(out_vars);
            for (e, c) in p.terms() {
                let mut term = Polynomial::constant(out_vars, c.clone());
                let mut free = vec![0 as Exp; out_vars];
                for v in 0..n {
                    match &bindings[v] {
                        Some(b) => {
                            let k = e[v] as u32;
                            let rest = degs[v] as u32 - k;
                            if k > 0 {
                                term = term.mul(&b.num.pow(k));
                            }
                            if rest > 0 {
                                term = term.mul(&b.den.pow(rest));
                            }
                        }
                        None => {
                            assert_eq!(out_vars, n, "unbound variables need a shared universe");
                            free[v] = e[v];
                        }
                    }
                }
                acc = acc.add(&term.mul_term(&free, &BigInt::one()));
            }
            acc
        };
        Self::new(eval(&self.num), eval(&self.den))
    }

    /// True iff the reduced denominator is a monomial in the `vars` variables
    /// times a polynomial free of them.
    pub fn is_laurent(&self, vars: &[bool]) -> bool {
        let mc = self.den.monomial_content();
        let shift: Vec<Exp> =
            mc.iter().zip(vars).map(|(&e, &inside)| if inside { e } else { 0 }).collect();
        let rest = self.den.div_term(&shift, &BigInt::one()).expect("monomial content divides");
        let used = rest.vars_mask();
        !used.iter().zip(vars).any(|(&u, &inside)| u && inside)
    }

    /// `num` or `(num)/(den)`.
    pub fn to_text(&self, universe: &Universe) -> String {
        if self.den.is_one() {
            self.num.to_text(universe)
        } else {
            format!("({})/({})", self.num.to_text(universe), self.den.to_text(universe))
        }
    }

    /// Parses a rational expression, e.g. `(x1 + y1)/(x2*(1 + y1))`.
    pub fn parse(text: &str, universe: &Universe) -> Result<Self, PolyError> {
        super::parse::parse_rational(text, universe)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn uni() -> Arc<Universe> {
        Universe::new(["x1", "x2", "x3", "y1", "y2"])
    }

    fn r(s: &str) -> RationalFunction {
        RationalFunction::parse(s, &uni()).unwrap()
    }

    #[test]
    fn reduction_and_text() {
        let u = uni();
        assert_eq!(r("(x1^2 - x2^2)/(x1 + x2)").to_text(&u), "x1 - x2");
        assert_eq!(r("(x1)/(-x2)").to_text(&u), "(-x1)/(x2)");
        let q = r("(x1*y1 + x2)/(x1 + x1*y1)");
        assert_eq!(RationalFunction::parse(&q.to_text(&u), &u).unwrap(), q);
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(r("y1/(1 + y2)").add(&r("1")), r("(y1 + 1 + y2)/(1 + y2)"));
        assert!(r("x1/x2").mul(&r("x2/x1")).is_one());
        let sq = r("1 + y1").pow(2).unwrap();
        assert_eq!(sq.to_text(&uni()), "y1^2 + 2*y1 + 1");
        assert_eq!(sq.div(&r("1 + y1")).unwrap(), r("1 + y1"));
        assert!(r("x1").div(&r("0")).is_err());
    }

    #[test]
    fn add_with_shared_factor() {
        let a = r("1/(x1*(x1 + x2))");
        let b = r("1/(x2*(x1 + x2))");
        assert_eq!(a.add(&b), r("1/(x1*x2)"));
    }

    #[test]
    fn substitution() {
        let u = uni();
        let n = u.len();
        let mut bind = vec![None; n];
        bind[0] = Some(RationalFunction::constant(n, 3));
        assert_eq!(r("x1^2").substitute(&bind).unwrap(), RationalFunction::constant(n, 9));
        let mut bind = vec![None; n];
        bind[3] = Some(RationalFunction::one(n));
        assert_eq!(r("(1 + y1)/y1").substitute(&bind).unwrap(), RationalFunction::constant(n, 2));
        let mut bind = vec![None; n];
        bind[3] = Some(RationalFunction::one(n));
        assert_eq!(
            r("(y1*x2 + x3)/((1 + y1)*x1)").substitute(&bind).unwrap(),
            r("(x2 + x3)/(2*x1)")
        );
        assert!(matches!(
            r("1/(y1 - 1)").substitute(&bind),
            Err(PolyError::DivisionByZero)
        ));
    }

    #[test]
    fn laurent_check() {
        let xs = [true, true, true, false, false];
        assert!(r("(x2 + 1)/x1").is_laurent(&xs));
        assert!(!r("1/(x1 + x2)").is_laurent(&xs));
        assert!(r("(x1*x2 + 1)/(x1^2*x2)").is_laurent(&xs));
        assert!(r("(x1 + 1)/(x1*(1 + y1))").is_laurent(&xs));
    }

    #[test]
    fn one_plus_helpers() {
        let y = r("y1/(1 + y2)");
        assert_eq!(y.one_plus(), r("(y1 + 1 + y2)/(1 + y2)"));
        assert_eq!(y.ratio_to_one_plus().unwrap(), r("y1/(y1 + y2 + 1)"));
    }
}
