//! The anchored graph families: `G(q)`, the padded base, the two-vertex
//! induction step, and `G(n, q)`.
//!
//! Vertex layout of `G(q)`: `u_i = i`, `v_i = (q+1) + i`, `w_i = 2(q+1) + i`
//! for `i in 0..=q`; anchors are `(u_0, v_0, w_0)`.

use rand::seq::SliceRandom;
use rand::SeedableRng;

use crate::error::{Error, Result};
use crate::graph::{complete_tree_pairs, Instance};

/// `G(q)` on `3(q+1)` vertices with `q + 1` spanning trees and an anchor
/// triangle whose vertices have degree `q + 2`.
pub fn build_gq(q: usize) -> Result<Instance> {
    if q < 2 {
        return Err(Error::Precondition(format!("G(q) needs q >= 2, got q = {q}")));
    }
    let k = q + 1;
    let u = |i: usize| i;
    let v = |i: usize| k + i;
    let w = |i: usize| 2 * k + i;
    let mut trees: Vec<Vec<(usize, usize)>> = vec![Vec::new(); k];
    trees[0].extend([(u(0), u(1)), (u(0), v(0)), (v(0), w(0))]);
    trees[1].extend([(v(0), v(1)), (u(0), w(0)), (w(0), w(1))]);
    for (i, tree) in trees.iter_mut().enumerate().skip(2) {
        tree.extend([(u(0), u(i)), (v(0), v(i)), (w(0), w(i))]);
    }
    // trees on the 3q non-anchor vertices; K_{3q} holds floor(3q/2) >= q+1
    let outer: Vec<usize> = (1..=q).map(u).chain((1..=q).map(v)).chain((1..=q).map(w)).collect();
    let inner = complete_tree_pairs(3 * q, k)?;
    for (tree, extra) in trees.iter_mut().zip(inner) {
        tree.extend(extra.into_iter().map(|(a, b)| (outer[a], outer[b])));
    }
    Instance::from_tree_pairs(3 * k, q, &trees, Some([u(0), v(0), w(0)]))
}

fn require_padding_base(base: &Instance, target_n: usize) -> Result<[usize; 3]> {
    let anchors = base
        .anchors
        .ok_or_else(|| Error::Precondition("padding needs an anchored base instance".into()))?;
    if base.q != 2 {
        return Err(Error::Precondition(format!(
            "padding base must have 3 trees, has {}",
            base.q + 1
        )));
    }
    if target_n < base.n() {
        return Err(Error::Precondition(format!(
            "target size {target_n} is below the base size {}",
            base.n()
        )));
    }
    Ok(anchors)
}

fn attach(base: &Instance, target_n: usize, mut pick: impl FnMut(usize, &[usize]) -> [usize; 3]) -> Result<Instance> {
    let anchors = require_padding_base(base, target_n)?;
    let candidates: Vec<usize> = (0..base.n()).filter(|v| !anchors.contains(v)).collect();
    if candidates.len() < 3 {
        return Err(Error::Precondition(
            "base has fewer than three non-anchor vertices".into(),
        ));
    }
    let mut trees = base.tree_pairs();
    for (j, new) in (base.n()..target_n).enumerate() {
        let targets = pick(j, &candidates);
        for (tree, x) in trees.iter_mut().zip(targets) {
            tree.push((x, new));
        }
    }
    Instance::from_tree_pairs(target_n, base.q, &trees, base.anchors)
}

/// Adds `target_n - n` vertices to the three-tree base, each joined to three
/// non-anchor base vertices by one edge per tree. Even-numbered additions use
/// the three lowest non-anchor vertices, odd ones the next three (wrapping).
pub fn pad_base(base: &Instance, target_n: usize) -> Result<Instance> {
    if target_n < 9 {
        return Err(Error::Precondition(format!(
            "padded base needs at least 9 vertices, got {target_n}"
        )));
    }
    attach(base, target_n, |j, c| {
        let off = if j % 2 == 0 { 0 } else { 3 };
        [c[off % c.len()], c[(off + 1) % c.len()], c[(off + 2) % c.len()]]
    })
}

/// Like [`pad_base`], but each new vertex picks its three base neighbors at
/// random from the non-anchor vertices.
pub fn pad_base_seeded(base: &Instance, target_n: usize, seed: u64) -> Result<Instance> {
    if target_n < 9 {
        return Err(Error::Precondition(format!(
            "padded base needs at least 9 vertices, got {target_n}"
        )));
    }
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    attach(base, target_n, |_, c| {
        let picked: Vec<usize> = c.choose_multiple(&mut rng, 3).copied().collect();
        [picked[0], picked[1], picked[2]]
    })
}

/// Two new vertices `x = n0`, `y = n0 + 1` and one new tree.
///
/// Non-anchor vertices split in ascending order into `V2` (first
/// `floor((n0-3)/2)`) and `V3`. Old tree `i` gains `x - V2[i]` and
/// `y - V3[i]`; the new tree is `xy`, `x` to each anchor, `x` to all of `V3`
/// and `y` to all of `V2`.
pub fn induction_step(inst: &Instance) -> Result<Instance> {
    let anchors = inst
        .anchors
        .ok_or_else(|| Error::Precondition("induction step needs anchors".into()))?;
    let n0 = inst.n();
    let q0 = inst.q;
    if n0 < 3 || (n0 - 3) / 2 < q0 + 1 {
        return Err(Error::Precondition(format!(
            "induction step needs floor((n0-3)/2) >= q0+1, got n0 = {n0}, q0 = {q0}"
        )));
    }
    let degrees = inst.graph.degrees();
    if let Some(&a) = anchors.iter().find(|&&a| degrees[a] != q0 + 2) {
        return Err(Error::Precondition(format!(
            "anchor {a} has degree {}, expected q0+2 = {}",
            degrees[a],
            q0 + 2
        )));
    }
    let rest: Vec<usize> = (0..n0).filter(|v| !anchors.contains(v)).collect();
    let (v2, v3) = rest.split_at((n0 - 3) / 2);
    let (x, y) = (n0, n0 + 1);
    let mut trees = inst.tree_pairs();
    for (i, tree) in trees.iter_mut().enumerate() {
        tree.push((v2[i], x));
        tree.push((v3[i], y));
    }
    let mut fresh = vec![(x, y)];
    fresh.extend(anchors.iter().map(|&a| (a, x)));
    fresh.extend(v3.iter().map(|&z| (z, x)));
    fresh.extend(v2.iter().map(|&z| (z, y)));
    trees.push(fresh);
    Instance::from_tree_pairs(n0 + 2, q0 + 1, &trees, Some(anchors))
}

fn check_gnq_range(n: usize, q: usize) -> Result<()> {
    if q < 2 || q + 1 >= n.saturating_sub(1) / 2 {
        return Err(Error::Precondition(format!(
            "G(n, q) needs 2 < q+1 < floor((n-1)/2), got n = {n}, q = {q}"
        )));
    }
    Ok(())
}

/// `G(n, q)`: pad `G(2)` to `n - 2(q - 2)` vertices, then apply
/// [`induction_step`] `q - 2` times.
pub fn build_gnq(n: usize, q: usize) -> Result<Instance> {
    check_gnq_range(n, q)?;
    let mut inst = pad_base(&build_gq(2)?, n - 2 * (q - 2))?;
    for _ in 2..q {
        inst = induction_step(&inst)?;
    }
    Ok(inst)
}

/// [`build_gnq`] with the seeded random padding.
pub fn build_gnq_seeded(n: usize, q: usize, seed: u64) -> Result<Instance> {
    check_gnq_range(n, q)?;
    let mut inst = pad_base_seeded(&build_gq(2)?, n - 2 * (q - 2), seed)?;
    for _ in 2..q {
        inst = induction_step(&inst)?;
    }
    Ok(inst)
}
