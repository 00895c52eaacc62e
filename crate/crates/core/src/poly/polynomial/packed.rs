// SPDX-License-Identifier: MIT OR Apache-2.0

//! Fast paths for multiplication and exact division.
//!
//! Each exponent vector is packed into one `u128`: the total degree in the
//! top field, then the variables with variable 0 most significant. Every
//! field is wide enough for the largest value the operation can produce, so
//! key addition never carries and integer order on keys is graded lex.
//! Coefficients are `i128`, used only when a bound or checked arithmetic
//! rules out overflow. Anything that does not fit returns `None` and the
//! caller takes the general path.

use super::{Exp, Polynomial};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rustc_hash::FxHashMap;
use std::collections::BTreeMap;

fn bits(max: u64) -> u32 {
    u64::BITS - max.leading_zeros()
}

struct Packing {
    /// Shift of each variable's field.
    shifts: Vec<u32>,
    widths: Vec<u32>,
    deg_shift: u32,
}

impl Packing {
    /// A layout able to hold per-variable exponents up to `max_exp` and
    /// total degree up to `max_deg`.
    fn new(max_exp: &[u64], max_deg: u64) -> Option<Self> {
        let widths: Vec<u32> = max_exp.iter().map(|&m| bits(m)).collect();
        let total: u32 = widths.iter().sum::<u32>() + bits(max_deg);
        if total > 128 {
            return None;
        }
        let mut shifts = vec![0; widths.len()];
        let mut at = 0;
        for v in (0..widths.len()).rev() {
            shifts[v] = at;
            at += widths[v];
        }
        Some(Packing { shifts, widths, deg_shift: at })
    }

    fn pack(&self, e: &[Exp]) -> u128 {
        let mut key = 0u128;
        let mut deg = 0u128;
        for (v, &x) in e.iter().enumerate() {
            if x != 0 {
                key |= (x as u128) << self.shifts[v];
                deg += x as u128;
            }
        }
        key | (deg << self.deg_shift)
    }

    fn field(&self, key: u128, v: usize) -> u128 {
        let w = self.widths[v];
        if w == 0 {
            return 0;
        }
        (key >> self.shifts[v]) & ((1u128 << w) - 1)
    }

    fn unpack_into(&self, key: u128, out: &mut Vec<Exp>) {
        for v in 0..self.widths.len() {
            out.push(self.field(key, v) as Exp);
        }
    }

    /// `a - b` when every field of `b` is at most the matching field of `a`.
    fn checked_sub(&self, a: u128, b: u128) -> Option<u128> {
        for v in 0..self.widths.len() {
            if self.field(a, v) < self.field(b, v) {
                return None;
            }
        }
        Some(a - b)
    }
}

fn max_exps(p: &Polynomial) -> (Vec<u64>, u64) {
    let mut m = vec![0u64; p.nvars];
    let mut deg = 0u64;
    for t in 0..p.term_count() {
        let e = p.exponents(t);
        let mut d = 0u64;
        for (mv, &x) in m.iter_mut().zip(e) {
            *mv = (*mv).max(x as u64);
            d += x as u64;
        }
        deg = deg.max(d);
    }
    (m, deg)
}

fn small_coeffs(p: &Polynomial) -> Option<Vec<i128>> {
    p.coeffs.iter().map(|c| c.to_i64().map(i128::from)).collect()
}

fn l1(c: &[i128]) -> Option<i128> {
    c.iter().try_fold(0i128, |acc, x| acc.checked_add(x.abs()))
}

fn from_sorted_desc(nvars: usize, pk: &Packing, terms: impl Iterator<Item = (u128, i128)>) -> Polynomial {
    let mut exps = Vec::new();
    let mut coeffs = Vec::new();
    for (k, c) in terms {
        if c != 0 {
            pk.unpack_into(k, &mut exps);
            coeffs.push(BigInt::from(c));
        }
    }
    Polynomial { nvars, exps, coeffs }
}

/// Product of two polynomials with at least two terms each.
pub(super) fn mul(a: &Polynomial, b: &Polynomial) -> Option<Polynomial> {
    let (ca, cb) = (small_coeffs(a)?, small_coeffs(b)?);
    // |every output coefficient| ≤ l1(a)·l1(b).
    l1(&ca)?.checked_mul(l1(&cb)?)?;
    let (ma, da) = max_exps(a);
    let (mb, db) = max_exps(b);
    let max: Vec<u64> = ma.iter().zip(&mb).map(|(x, y)| x + y).collect();
    let pk = Packing::new(&max, da + db)?;
    let ka: Vec<u128> = (0..a.term_count()).map(|t| pk.pack(a.exponents(t))).collect();
    let kb: Vec<u128> = (0..b.term_count()).map(|t| pk.pack(b.exponents(t))).collect();
    let (small, large) = if ka.len() <= kb.len() { ((&ka, &ca), (&kb, &cb)) } else { ((&kb, &cb), (&ka, &ca)) };
    let mut acc: FxHashMap<u128, i128> =
        FxHashMap::with_capacity_and_hasher(large.0.len() * 2, Default::default());
    for (&k1, &c1) in small.0.iter().zip(small.1) {
        for (&k2, &c2) in large.0.iter().zip(large.1) {
            *acc.entry(k1 + k2).or_insert(0) += c1 * c2;
        }
    }
    let mut terms: Vec<(u128, i128)> = acc.into_iter().filter(|&(_, c)| c != 0).collect();
    terms.sort_unstable_by(|x, y| y.0.cmp(&x.0));
    Some(from_sorted_desc(a.nvars, &pk, terms.into_iter()))
}

/// Exact division by a divisor with at least two terms. `Some(None)` means
/// the division leaves a remainder; `None` means the fast path does not apply.
pub(super) fn div_exact(f: &Polynomial, g: &Polynomial) -> Option<Option<Polynomial>> {
    let (cf, cg) = (small_coeffs(f)?, small_coeffs(g)?);
    let (mf, df) = max_exps(f);
    let (mg, dg) = max_exps(g);
    let max: Vec<u64> = mf.iter().zip(&mg).map(|(x, y)| x + y).collect();
    let pk = Packing::new(&max, df + dg)?;
    let kg: Vec<u128> = (0..g.term_count()).map(|t| pk.pack(g.exponents(t))).collect();
    let (lt_key, lt_coeff) = (kg[0], cg[0]);
    let mut rem: BTreeMap<u128, i128> =
        (0..f.term_count()).map(|t| (pk.pack(f.exponents(t)), cf[t])).collect();
    let mut quotient: Vec<(u128, i128)> = Vec::new();
    while let Some((key, c)) = rem.pop_last() {
        let Some(qk) = pk.checked_sub(key, lt_key) else { return Some(None) };
        // In an exact division no quotient exponent exceeds the dividend's,
        // which also keeps every key below within its fields.
        if (0..mf.len()).any(|v| pk.field(qk, v) > mf[v] as u128) {
            return Some(None);
        }
        if c % lt_coeff != 0 {
            return Some(None);
        }
        let qc = c / lt_coeff;
        for (&k, &gc) in kg.iter().zip(&cg).skip(1) {
            let prod = qc.checked_mul(gc)?;
            let slot = rem.entry(qk + k).or_insert(0);
            *slot = slot.checked_sub(prod)?;
            if *slot == 0 {
                rem.remove(&(qk + k));
            }
        }
        quotient.push((qk, qc));
    }
    Some(Some(from_sorted_desc(f.nvars, &pk, quotient.into_iter())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_product(a: &Polynomial, b: &Polynomial) -> Polynomial {
        let terms = a.terms().flat_map(|(ea, ca)| {
            b.terms().map(move |(eb, cb)| (ea.iter().zip(eb).map(|(x, y)| x + y).collect::<Vec<Exp>>(), ca * cb))
        });
        Polynomial::from_terms(a.nvars(), terms.collect::<Vec<_>>())
    }

    fn poly(nv: usize, big: bool) -> impl Strategy<Value = Polynomial> {
        let scale = if big { BigInt::from(1u64 << 62) * BigInt::from(1u64 << 40) } else { BigInt::from(1) };
        prop::collection::vec((prop::collection::vec(0u16..6, nv), -9i64..10), 2..12).prop_map(move |t| {
            Polynomial::from_terms(nv, t.into_iter().map(|(e, c)| (e, BigInt::from(c) * &scale)))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn packed_product_matches_naive(a in poly(5, false), b in poly(5, false)) {
            prop_assume!(a.term_count() > 1 && b.term_count() > 1);
            prop_assert!(mul(&a, &b).is_some());
            prop_assert_eq!(a.mul(&b), naive_product(&a, &b));
        }

        #[test]
        fn wide_coefficients_take_the_general_path(a in poly(3, true), b in poly(3, false)) {
            prop_assume!(a.term_count() > 1 && b.term_count() > 1);
            prop_assert!(mul(&a, &b).is_none());
            let p = a.mul(&b);
            prop_assert_eq!(&p, &naive_product(&a, &b));
            prop_assert_eq!(p.div_exact(&b), Some(a.clone()));
        }

        #[test]
        fn packed_division_detects_remainders(a in poly(4, false), b in poly(4, false), c in poly(4, false)) {
            prop_assume!(a.term_count() > 1 && b.term_count() > 1);
            let p = a.mul(&b);
            prop_assert_eq!(div_exact(&p, &b), Some(Some(a.clone())));
            let q = p.add(&c);
            if let Some(Some(d)) = div_exact(&q, &b) {
                prop_assert_eq!(d.mul(&b), q);
            }
        }
    }

    #[test]
    fn too_many_variables_fall_back() {
        let nv = 40;
        let mut e1 = vec![0; nv];
        let mut e2 = vec![0; nv];
        e1.iter_mut().for_each(|x| *x = 7);
        e2[0] = 1;
        let a = Polynomial::from_terms(nv, vec![(e1.clone(), BigInt::from(1)), (e2.clone(), BigInt::from(2))]);
        assert!(mul(&a, &a).is_none());
        assert_eq!(a.mul(&a), naive_product(&a, &a));
    }
}
