// SPDX-License-Identifier: MIT OR Apache-2.0

//! Multivariate polynomial gcd over the integers.
//!
//! The algorithm strips integer and monomial content, then uses a modular
//! image on a random line to detect coprime inputs (the common case when
//! reducing mutation results) and to guess when one input divides the other.
//! Everything else falls through to a recursive primitive remainder sequence.

use super::polynomial::{Exp, Polynomial};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::cell::RefCell;

/// The Mersenne prime 2^61 - 1 used for modular images.
const P: u64 = (1 << 61) - 1;

thread_local! {
    static RNG: RefCell<StdRng> = RefCell::new(StdRng::seed_from_u64(0x5eed_c1a5_7e25));
}

#[inline]
fn add_mod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

#[inline]
fn sub_mod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

#[inline]
fn mul_mod(a: u64, b: u64) -> u64 {
    let r = (a as u128) * (b as u128);
    let mut s = ((r as u64) & P) + ((r >> 61) as u64);
    while s >= P {
        s -= P;
    }
    s
}

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b);
        }
        b = mul_mod(b, b);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64) -> u64 {
    debug_assert!(a != 0);
    pow_mod(a, P - 2)
}

fn big_mod(c: &BigInt) -> u64 {
    let m = c.mod_floor(&BigInt::from(P));
    m.to_u64().expect("residue fits in u64")
}

/// Evaluates `poly` modulo P at `point`.
fn eval_mod(poly: &Polynomial, point: &[u64]) -> u64 {
    let mut acc = 0;
    for (e, c) in poly.terms() {
        let mut term = big_mod(c);
        for (v, &k) in e.iter().enumerate() {
            if k > 0 {
                term = mul_mod(term, pow_mod(point[v], k as u64));
            }
        }
        acc = add_mod(acc, term);
    }
    acc
}

/// Coefficients (low to high) of `poly` restricted to the line `base + z*dir`,
/// obtained by evaluation at z = 0..=deg and Newton interpolation.
fn line_image(poly: &Polynomial, base: &[u64], dir: &[u64]) -> Vec<u64> {
    let deg = poly.total_degree() as usize;
    let values: Vec<u64> = (0..=deg as u64)
        .map(|z| {
            let pt: Vec<u64> =
                base.iter().zip(dir).map(|(&b, &d)| add_mod(b, mul_mod(d, z))).collect();
            eval_mod(poly, &pt)
        })
        .collect();
    interpolate(&values)
}

/// Interpolates values at 0, 1, ..., n into monomial-basis coefficients.
fn interpolate(values: &[u64]) -> Vec<u64> {
    let n = values.len();
    // Divided differences.
    let mut dd = values.to_vec();
    for j in 1..n {
        let inv = inv_mod(j as u64);
        for i in (j..n).rev() {
            dd[i] = mul_mod(sub_mod(dd[i], dd[i - 1]), inv);
        }
    }
    // Horner on the Newton form: p = dd0 + (z-0)(dd1 + (z-1)(dd2 + ...)).
    let mut coeffs = vec![0u64; n];
    for i in (0..n).rev() {
        // coeffs <- coeffs * (z - i) + dd[i]
        let mut next = vec![0u64; n];
        for k in 0..n {
            if coeffs[k] == 0 {
                continue;
            }
            if k + 1 < n {
                next[k + 1] = add_mod(next[k + 1], coeffs[k]);
            }
            next[k] = sub_mod(next[k], mul_mod(coeffs[k], i as u64));
        }
        next[0] = add_mod(next[0], dd[i]);
        coeffs = next;
    }
    coeffs
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Degree of the gcd of two univariate polynomials mod P (zero polynomials excluded).
fn univariate_gcd_degree(a: &[u64], b: &[u64]) -> usize {
    let mut f = a.to_vec();
    let mut g = b.to_vec();
    trim(&mut f);
    trim(&mut g);
    if f.len() < g.len() {
        std::mem::swap(&mut f, &mut g);
    }
    while !g.is_empty() {
        let inv = inv_mod(*g.last().unwrap());
        while f.len() >= g.len() {
            let shift = f.len() - g.len();
            let q = mul_mod(*f.last().unwrap(), inv);
            for (k, &gk) in g.iter().enumerate() {
                f[k + shift] = sub_mod(f[k + shift], mul_mod(q, gk));
            }
            trim(&mut f);
            if f.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut f, &mut g);
    }
    f.len().saturating_sub(1)
}

/// Total degree of gcd(a, b) as seen on a random line, which is exact with
/// overwhelming probability and never an underestimate when the images keep
/// their full degree.
fn image_gcd_degree(a: &Polynomial, b: &Polynomial) -> usize {
    let n = a.nvars();
    RNG.with(|rng| {
        let mut rng = rng.borrow_mut();
        loop {
            let base: Vec<u64> = (0..n).map(|_| rng.gen_range(1..P)).collect();
            let dir: Vec<u64> = (0..n).map(|_| rng.gen_range(1..P)).collect();
            let ia = line_image(a, &base, &dir);
            let ib = line_image(b, &base, &dir);
            let full_a = ia.last().is_some_and(|&c| c != 0);
            let full_b = ib.last().is_some_and(|&c| c != 0);
            if full_a && full_b {
                return univariate_gcd_degree(&ia, &ib);
            }
        }
    })
}

/// Greatest common divisor, normalised to a positive leading coefficient.
/// `gcd(0, 0) = 0`.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    assert_eq!(a.nvars(), b.nvars(), "universe mismatch");
    if a.is_zero() {
        return b.with_positive_lead();
    }
    if b.is_zero() {
        return a.with_positive_lead();
    }
    let c = a.integer_content().gcd(&b.integer_content());
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let m: Vec<Exp> = ma.iter().zip(&mb).map(|(&x, &y)| x.min(y)).collect();
    let a1 = a.div_term(&ma, &a.integer_content()).expect("content divides");
    let b1 = b.div_term(&mb, &b.integer_content()).expect("content divides");
    let g = gcd_primitive(&a1, &b1);
    g.mul_term(&m, &c)
}

/// Gcd of inputs with unit integer content and no monomial factor.
fn gcd_primitive(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let n = a.nvars();
    let a = a.with_positive_lead();
    let b = b.with_positive_lead();
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(n);
    }
    if a == b {
        return a;
    }
    let va = a.vars_mask();
    let vb = b.vars_mask();
    if let Some(v) = (0..n).find(|&v| va[v] && !vb[v]) {
        return gcd_with_coefficients(&b, &a, v);
    }
    if let Some(v) = (0..n).find(|&v| vb[v] && !va[v]) {
        return gcd_with_coefficients(&a, &b, v);
    }
    let dg = image_gcd_degree(&a, &b);
    if dg == 0 {
        return Polynomial::one(n);
    }
    let (small, large) = if b.total_degree() <= a.total_degree() { (&b, &a) } else { (&a, &b) };
    if dg == small.total_degree() as usize && large.div_exact(small).is_some() {
        return small.clone();
    }
    prs_gcd(&a, &b)
}

/// gcd(p, q) where `v` occurs in `q` but not in `p`: the gcd must divide every
/// coefficient of `q` with respect to `v`.
fn gcd_with_coefficients(p: &Polynomial, q: &Polynomial, v: usize) -> Polynomial {
    let mut parts: Vec<Polynomial> = q.to_univariate(v).into_iter().filter(|c| !c.is_zero()).collect();
    parts.sort_by_key(|c| c.term_count());
    let mut g = p.clone();
    for c in parts {
        g = gcd(&g, &c);
        if g.is_constant() {
            return Polynomial::one(p.nvars());
        }
    }
    g.with_positive_lead()
}

/// Gcd of a list of polynomials (positive leading coefficient).
fn gcd_many(list: &[Polynomial]) -> Polynomial {
    let mut items: Vec<&Polynomial> = list.iter().filter(|c| !c.is_zero()).collect();
    items.sort_by_key(|c| c.term_count());
    let Some(first) = items.first() else {
        return Polynomial::zero(list.first().map_or(0, |p| p.nvars()));
    };
    let mut g = (*first).with_positive_lead();
    for c in &items[1..] {
        if g.is_one() {
            break;
        }
        g = gcd(&g, c);
    }
    g
}

fn univariate_degree(f: &[Polynomial]) -> Option<usize> {
    f.iter().rposition(|c| !c.is_zero())
}

fn trim_poly(f: &mut Vec<Polynomial>) {
    while f.last().is_some_and(|c| c.is_zero()) {
        f.pop();
    }
}

/// Divides out the content (gcd of the coefficients) and fixes the sign.
fn primitive_part(f: &[Polynomial]) -> Vec<Polynomial> {
    let cont = gcd_many(f);
    let mut out: Vec<Polynomial> = if cont.is_one() {
        f.to_vec()
    } else {
        f.iter().map(|c| c.div_exact(&cont).expect("content divides")).collect()
    };
    if let Some(lead) = out.iter().rev().find(|c| !c.is_zero()) {
        if lead.leading_coeff().is_some_and(|c| c.is_negative()) {
            out = out.iter().map(|c| c.neg()).collect();
        }
    }
    out
}

/// Pseudo-remainder of f by g up to a unit-free scalar (the lc(g)^e factor is omitted).
fn pseudo_rem(f: &[Polynomial], g: &[Polynomial]) -> Vec<Polynomial> {
    let mut r = f.to_vec();
    trim_poly(&mut r);
    let n = g.len() - 1;
    let lcg = &g[n];
    while let Some(k) = univariate_degree(&r) {
        if k < n {
            break;
        }
        let lr = r[k].clone();
        for c in r.iter_mut().take(k + 1) {
            if !c.is_zero() {
                *c = c.mul(lcg);
            }
        }
        for (j, gj) in g.iter().enumerate() {
            if !gj.is_zero() {
                r[j + k - n] = r[j + k - n].sub(&lr.mul(gj));
            }
        }
        trim_poly(&mut r);
    }
    r
}

fn prs_gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let n = a.nvars();
    let va = a.vars_mask();
    let v = (0..n)
        .filter(|&v| va[v])
        .min_by_key(|&v| {
            let (da, db) = (a.degree_in(v), b.degree_in(v));
            (da.min(db), da.max(db))
        })
        .expect("nonconstant input");
    let ua = a.to_univariate(v);
    let ub = b.to_univariate(v);
    let ca = gcd_many(&ua);
    let cb = gcd_many(&ub);
    let content = gcd(&ca, &cb);
    let mut f = primitive_part(&ua);
    let mut g = primitive_part(&ub);
    if f.len() < g.len() {
        std::mem::swap(&mut f, &mut g);
    }
    let h = loop {
        let r = pseudo_rem(&f, &g);
        match univariate_degree(&r) {
            None => break g,
            Some(0) => break vec![Polynomial::one(n)],
            Some(_) => {
                f = g;
                g = primitive_part(&r);
            }
        }
    };
    Polynomial::from_univariate(n, v, &h).mul(&content).with_positive_lead()
}


#[cfg(test)]
mod tests {
    use super::super::polynomial::Universe;
    use super::*;

    fn p(s: &str) -> Polynomial {
        let u = Universe::new(["x", "y", "z", "w"]);
        Polynomial::parse(s, &u).unwrap()
    }

    #[test]
    fn modular_helpers() {
        assert_eq!(mul_mod(P - 1, P - 1), 1);
        assert_eq!(mul_mod(inv_mod(12345), 12345), 1);
        // 3 + 2z + z^2 at z = 0, 1, 2
        assert_eq!(interpolate(&[3, 6, 11]), vec![3, 2, 1]);
    }

    #[test]
    fn simple_gcds() {
        assert_eq!(gcd(&p("x^2 - y^2"), &p("x + y")), p("x + y"));
        assert_eq!(gcd(&p("6*x^2*y"), &p("4*x*y^3")), p("2*x*y"));
        assert_eq!(gcd(&p("x + 1"), &p("y + 1")), p("1"));
        assert_eq!(gcd(&p("0"), &p("-x - 1")), p("x + 1"));
    }

    #[test]
    fn gcd_of_products_recovers_common_factor() {
        let common = p("x*y + z^2 + 3*w + 1");
        let a = common.mul(&p("x^2 + y + w"));
        let b = common.mul(&p("x*z - y^3 + 2"));
        assert_eq!(gcd(&a, &b), common);
        let a2 = common.mul(&common).mul(&p("x + y"));
        let b2 = common.mul(&p("x - y")).mul(&common);
        assert_eq!(gcd(&a2, &b2), common.mul(&common));
    }

    #[test]
    fn gcd_when_variable_sets_differ() {
        let common = p("x + 2");
        let a = common.mul(&p("y*z + 1"));
        let b = common.mul(&p("x^2 + 5"));
        assert_eq!(gcd(&a, &b), common);
    }

    #[test]
    fn gcd_divides_inputs() {
        let a = p("x^4 - y^4");
        let b = p("x^6 - y^6");
        let g = gcd(&a, &b);
        assert_eq!(g, p("x^2 - y^2"));
        assert!(a.div_exact(&g).is_some() && b.div_exact(&g).is_some());
    }
}
