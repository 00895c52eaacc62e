// SPDX-License-Identifier: MIT OR Apache-2.0

//! Rank-two quivers for `C = [[2,-1],[-t,2]]`.
//!
//! Labels: the `t` left columns are `(1, i, i')` with `i' = 1..ℓ-1`; the shared
//! right column is `(2, 1, r)` with `r = 1..tℓ-1`.

use super::schedule::{build_schedule, Schedule};
use super::BuildError;
use crate::cartan::{validate_cartan, CartanData, Color, SignColoring};
use crate::quiver::{AnnotatedQuiver, CircleType, Sign, VertexLabel};

pub fn rank2_cartan(t: i64) -> Result<CartanData, BuildError> {
    if t < 1 {
        return Err(BuildError::InvalidParams(format!("t must be positive, got {t}")));
    }
    validate_cartan(&[vec![2, -1], vec![-t, 2]]).map_err(BuildError::Cartan)
}

/// Sign/colour assignment under which the tree construction reproduces
/// [`rank2_quiver`]: for odd `t` the long vertex sits in `I-`.
pub fn rank2_coloring(t: i64) -> SignColoring {
    if t % 2 == 1 {
        SignColoring { signs: vec![Sign::Minus, Sign::Plus], colors: vec![None, None] }
    } else {
        SignColoring { signs: vec![Sign::Plus, Sign::Plus], colors: vec![Some(Color::Alpha), None] }
    }
}

pub fn rank2_quiver(t: i64, level: i64) -> Result<AnnotatedQuiver, BuildError> {
    if t < 1 || level < 2 {
        return Err(BuildError::InvalidParams(format!("need t >= 1 and level >= 2, got t={t}, level={level}")));
    }
    let (tu, lu) = (t as usize, level as usize);
    let right_len = tu * lu - 1;
    let mut labels = Vec::new();
    let mut signs = Vec::new();
    let mut ctypes = Vec::new();
    for i in 1..=tu {
        for ip in 1..lu {
            labels.push(VertexLabel::new(1, i, ip));
            signs.push(Sign::plus_if((i + ip) % 2 == 1));
            ctypes.push(CircleType::Open);
        }
    }
    for r in 1..=right_len {
        labels.push(VertexLabel::new(2, 1, r));
        signs.push(Sign::plus_if(r % 2 == 1));
        ctypes.push(CircleType::Filled);
    }
    let mut q = AnnotatedQuiver::new(labels, signs, ctypes)?;
    let idx = |q: &AnnotatedQuiver, l: VertexLabel| q.index_of(&l).expect("vertex exists");

    for r in 1..right_len {
        let (lo, hi) = (idx(&q, VertexLabel::new(2, 1, r)), idx(&q, VertexLabel::new(2, 1, r + 1)));
        if r % 2 == 1 {
            q.add_arrows(lo, hi, 1);
        } else {
            q.add_arrows(hi, lo, 1);
        }
    }
    for i in 1..=tu {
        for ip in 1..lu.saturating_sub(1) {
            let (lo, hi) = (idx(&q, VertexLabel::new(1, i, ip)), idx(&q, VertexLabel::new(1, i, ip + 1)));
            if (i + ip) % 2 == 1 {
                q.add_arrows(lo, hi, 1);
            } else {
                q.add_arrows(hi, lo, 1);
            }
        }
        // Each left vertex fans out to a band of the right column centred at
        // height t·i'.
        for ip in 1..lu {
            let centre = tu * ip;
            let half = if ip % 2 == 1 { tu - i } else { i - 1 };
            let left = idx(&q, VertexLabel::new(1, i, ip));
            for r in centre - half..=centre + half {
                let right = idx(&q, VertexLabel::new(2, 1, r));
                if r % 2 == 1 {
                    q.add_arrows(left, right, 1);
                } else {
                    q.add_arrows(right, left, 1);
                }
            }
        }
    }
    Ok(q)
}

pub fn rank2_schedule(t: i64, level: i64) -> Result<Schedule, BuildError> {
    let q = rank2_quiver(t, level)?;
    build_schedule(&rank2_cartan(t)?, &rank2_coloring(t), &q)
}

fn transpositions(t: usize, first: usize) -> Vec<usize> {
    let mut w: Vec<usize> = (1..=t).collect();
    let mut i = first;
    while i < t {
        w.swap(i - 1, i);
        i += 2;
    }
    w
}

/// `r+` as a map on copies `1..t` (`w[i-1]` is the image of `i`).
pub fn r_plus(t: usize) -> Vec<usize> {
    transpositions(t, 2)
}

/// `r-` as a map on copies `1..t`.
pub fn r_minus(t: usize) -> Vec<usize> {
    transpositions(t, 1)
}

/// Composes `f ∘ g` for maps written as image lists.
pub fn compose(f: &[usize], g: &[usize]) -> Vec<usize> {
    g.iter().map(|&x| f[x - 1]).collect()
}

/// `w_p = r+ r- r+ ⋯` with `p` factors, composed as maps (the rightmost
/// factor acts first).
pub fn w_p(t: usize, p: usize) -> Vec<usize> {
    let mut w: Vec<usize> = (1..=t).collect();
    for k in 0..p {
        let r = if k % 2 == 0 { r_plus(t) } else { r_minus(t) };
        w = compose(&w, &r);
    }
    w
}
