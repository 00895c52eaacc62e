// SPDX-License-Identifier: MIT OR Apache-2.0

//! Assembly of `Q_ℓ(C)` from one piece per Dynkin edge, glued along the
//! columns attached to each vertex.

use super::rank2::{rank2_quiver, rank2_schedule};
use super::schedule::vertex_sign;
use super::BuildError;
use crate::cartan::{CartanData, Color, ExtendedDiagram, SignColoring};
use crate::quiver::{AnnotatedQuiver, CircleType, Sign, VertexLabel};

/// Builds the quiver for a diagram whose sign/colour assignment satisfies the
/// parity rules (any tree qualifies).
pub fn build_quiver(cd: &CartanData, sc: &SignColoring, level: i64) -> Result<AnnotatedQuiver, BuildError> {
    build_with_halving(cd, sc, level, &vec![false; cd.rank()])
}

/// Builds the quiver for an extended diagram; vertices of doubled
/// nonbipartite even blocks keep only their odd-numbered copies.
pub fn build_extended(ext: &ExtendedDiagram, sc: &SignColoring, level: i64) -> Result<AnnotatedQuiver, BuildError> {
    let halved: Vec<bool> = ext.provenance.iter().map(|p| p.halved).collect();
    build_with_halving(&ext.data, sc, level, &halved)
}

fn keeps_copy(halved: bool, copy: usize) -> bool {
    !halved || copy % 2 == 1
}

fn build_with_halving(
    cd: &CartanData,
    sc: &SignColoring,
    level: i64,
    halved: &[bool],
) -> Result<AnnotatedQuiver, BuildError> {
    if level < 2 {
        return Err(BuildError::InvalidParams(format!("level must be at least 2, got {level}")));
    }
    if !cd.is_tamely_laced() {
        return Err(BuildError::InvalidParams("Cartan matrix is not tamely laced".into()));
    }
    sc.check(cd).map_err(|e| BuildError::InvalidColoring(e.to_string()))?;
    for a in 0..cd.rank() {
        if halved[a] && cd.d(a) % 2 == 1 {
            return Err(BuildError::InvalidParams(format!("vertex {} has odd d but is halved", a + 1)));
        }
    }

    let mut labels = Vec::new();
    let mut signs = Vec::new();
    let mut ctypes = Vec::new();
    for a in 0..cd.rank() {
        let rows = (cd.t_a(a) * level - 1) as usize;
        for copy in (1..=cd.d(a) as usize).filter(|&c| keeps_copy(halved[a], c)) {
            for row in 1..=rows {
                labels.push(VertexLabel::new(a + 1, copy, row));
                signs.push(vertex_sign(cd, sc, a, copy, row));
                ctypes.push(if cd.d(a) == 1 { CircleType::Filled } else { CircleType::Open });
            }
        }
    }
    let mut q = AnnotatedQuiver::new(labels, signs, ctypes)?;

    // Columns of an isolated vertex get no piece; give them the alternating
    // vertical arrows, from `+` to `-`.
    for a in (0..cd.rank()).filter(|&a| cd.neighbors(a).is_empty()) {
        let rows = cd.t_a(a) * level - 1;
        for copy in (1..=cd.d(a) as usize).filter(|&c| keeps_copy(halved[a], c)) {
            for row in 1..rows as usize {
                let i = q.index_of(&VertexLabel::new(a + 1, copy, row)).expect("vertex exists");
                let j = q.index_of(&VertexLabel::new(a + 1, copy, row + 1)).expect("vertex exists");
                let m = if q.sign(i) == Sign::Plus { 1 } else { -1 };
                q.set_arrows(i, j, m);
            }
        }
    }

    for edge in cd.dynkin().edges {
        let (mut a, mut b) = (edge.a, edge.b);
        if cd.d(a) < cd.d(b) {
            std::mem::swap(&mut a, &mut b);
        }
        let d = cd.d(a);
        let level_a = cd.t_a(a) * level;
        if cd.d(b) == 1 {
            if d == 1 && sc.signs[a] == Sign::Plus {
                std::mem::swap(&mut a, &mut b);
            }
            let piece = long_short_piece(d, level_a, sc.signs[a], sc.colors[a])?;
            glue(&mut q, &piece, |l| match l.a {
                1 => keeps_copy(halved[a], l.copy).then(|| VertexLabel::new(a + 1, l.copy, l.row)),
                _ => Some(VertexLabel::new(b + 1, 1, l.row)),
            })?;
        } else {
            let a_first = if d % 2 == 1 {
                sc.signs[a] == Sign::Minus
            } else {
                sc.colors[a] == Some(Color::Alpha)
            };
            if !a_first {
                std::mem::swap(&mut a, &mut b);
            }
            let base = rank2_quiver(1, level_a)?;
            for i in (1..=d as usize).filter(|&i| keeps_copy(halved[a] || halved[b], i)) {
                let piece = if i % 2 == 0 { base.opposite() } else { base.clone() };
                glue(&mut q, &piece, |l| match l.a {
                    1 => Some(VertexLabel::new(a + 1, i, l.row)),
                    _ => Some(VertexLabel::new(b + 1, i, l.row)),
                })?;
            }
        }
    }
    Ok(q)
}

/// The piece for an edge with `d_b = 1`: the rank-two quiver for `t' = d`,
/// moved along its own schedule according to the sign and colour of `a`.
fn long_short_piece(d: i64, level: i64, sign: Sign, color: Option<Color>) -> Result<AnnotatedQuiver, BuildError> {
    let q0 = rank2_quiver(d, level)?;
    let sched = rank2_schedule(d, level)?;
    if d % 2 == 1 {
        return match sign {
            Sign::Minus => Ok(q0),
            Sign::Plus => sched.advance(&q0, 0, d),
        };
    }
    match (sign, color) {
        (Sign::Plus, Some(Color::Alpha)) => Ok(q0),
        (Sign::Plus, Some(Color::Beta)) => sched.advance(&q0, 0, d),
        (Sign::Minus, Some(Color::Alpha)) => sched.retreat(&q0, 0, -1),
        (Sign::Minus, Some(Color::Beta)) => sched.advance(&q0, 0, d - 1),
        (_, None) => Err(BuildError::InvalidColoring("even vertex without a colour".into())),
    }
}

/// Copies the arrows of `piece` into `q` through `map`. Arrows inside one
/// column are shared between pieces and must agree; other arrows add up.
fn glue<F>(q: &mut AnnotatedQuiver, piece: &AnnotatedQuiver, map: F) -> Result<(), BuildError>
where
    F: Fn(&VertexLabel) -> Option<VertexLabel>,
{
    let target: Vec<Option<usize>> = piece
        .labels()
        .iter()
        .map(|l| map(l).map(|g| q.index_of(&g).expect("glued vertex exists")))
        .collect();
    for (i, j, m) in piece.arrows() {
        let (Some(gi), Some(gj)) = (target[i], target[j]) else { continue };
        let (li, lj) = (q.label(gi), q.label(gj));
        if li.a == lj.a && li.copy == lj.copy {
            match q.b(gi, gj) {
                0 => q.set_arrows(gi, gj, m),
                x if x == m => {}
                _ => {
                    return Err(BuildError::Inconsistent(format!("pieces disagree on arrows between {li} and {lj}")));
                }
            }
        } else {
            q.add_arrows(gi, gj, m);
        }
    }
    Ok(())
}
