//! 6j tensors: change of basis between the two bracketings of V_i (x) V_j (x) V_k.

use serde_json::json;

use super::{MultiplicitySpace, SixJContext};
use crate::catops::Morphism;
use crate::error::{Error, Result};
use crate::linalg::{Accumulator, SparseVec};
use crate::report::Report;
use crate::repmod::SimpleLabel;
use crate::scalar::CycScalar;

/// Coefficients indexed by a in H(i,j,m), b in H(m,k,l), c in H(j,k,n), d in H(i,n,l).
///
/// The direct tensor holds F with (x_a (x) 1) y_b = sum_{n,c,d} F^{ab}_{cd} (1 (x) u_c) v_d;
/// the mirror holds G with (1 (x) u_c) v_d = sum_{m,a,b} G^{ab}_{cd} (x_a (x) 1) y_b.
/// The normalized symbol divides F by d(n) and G by d(m).
#[derive(Clone, Debug)]
pub struct SixJTensor {
    /// (i, j, k, l, m, n)
    pub labels: [SimpleLabel; 6],
    pub mirror: bool,
    pub dims: [usize; 4],
    values: Vec<CycScalar>,
    weight: CycScalar,
}

impl SixJTensor {
    fn index(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        ((a * self.dims[1] + b) * self.dims[2] + c) * self.dims[3] + d
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// F (or G for the mirror).
    pub fn raw(&self, a: usize, b: usize, c: usize, d: usize) -> &CycScalar {
        &self.values[self.index(a, b, c, d)]
    }

    /// F / d(n) (or G / d(m)).
    pub fn normalized(&self, a: usize, b: usize, c: usize, d: usize) -> CycScalar {
        self.raw(a, b, c, d) * &self.weight
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut entries = Vec::new();
        for a in 0..self.dims[0] {
            for b in 0..self.dims[1] {
                for c in 0..self.dims[2] {
                    for d in 0..self.dims[3] {
                        let v = self.normalized(a, b, c, d);
                        entries.push(json!({ "index": [a, b, c, d], "value": v.to_json(), "approx": v.approx_string() }));
                    }
                }
            }
        }
        json!({
            "labels": self.labels.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "mirror": self.mirror,
            "dims": self.dims,
            "entries": entries,
        })
    }
}

/// (f (x) 1)(v) for v in S (x) K with K of dimension `right_dim`.
pub(crate) fn apply_left(f: &Morphism, right_dim: usize, v: &SparseVec) -> SparseVec {
    let mut acc = Accumulator::new(f.target().dim() * right_dim);
    for (idx, c) in v.iter() {
        let (s, k) = (idx / right_dim, idx % right_dim);
        for (t, x) in f.matrix().col(s).iter() {
            acc.add_at(t * right_dim + k, c * x);
        }
    }
    acc.finish()
}

/// (1 (x) g)(v) for v in A (x) S, with the sign (-1)^{|g||a|}.
pub(crate) fn apply_right(g: &Morphism, left_parities: &[u8], v: &SparseVec) -> SparseVec {
    let (src, tgt) = (g.source().dim(), g.target().dim());
    let odd = g.parity() == 1;
    let mut acc = Accumulator::new(left_parities.len() * tgt);
    for (idx, c) in v.iter() {
        let (a, w) = (idx / src, idx % src);
        let flip = odd && left_parities[a] == 1;
        for (t, x) in g.matrix().col(w).iter() {
            let y = c * x;
            acc.add_at(a * tgt + t, if flip { -y } else { y });
        }
    }
    acc.finish()
}

fn top_coefficient(f: &Morphism, v: &SparseVec) -> CycScalar {
    f.apply(v).get(0).cloned().unwrap_or_else(|| CycScalar::zero(f.source().cfg().field()))
}

struct Spaces {
    x: std::sync::Arc<MultiplicitySpace>,
    y: std::sync::Arc<MultiplicitySpace>,
    u: std::sync::Arc<MultiplicitySpace>,
    v: std::sync::Arc<MultiplicitySpace>,
}

fn spaces(ctx: &SixJContext, labels: &[SimpleLabel; 6]) -> Result<Spaces> {
    let [i, j, k, l, m, n] = labels;
    Ok(Spaces {
        x: ctx.mult_space(i, j, m)?,
        y: ctx.mult_space(m, k, l)?,
        u: ctx.mult_space(j, k, n)?,
        v: ctx.mult_space(i, n, l)?,
    })
}

pub(super) fn compute(ctx: &SixJContext, labels: &[SimpleLabel; 6], mirror: bool) -> Result<SixJTensor> {
    let [i, _, k, _, m, n] = labels;
    let sp = spaces(ctx, labels)?;
    let dims = [sp.x.dim(), sp.y.dim(), sp.u.dim(), sp.v.dim()];
    let weight = ctx.mdim(if mirror { m } else { n })?;
    if weight.is_zero() {
        return Err(Error::Precondition(format!("zero modified dimension at {}", if mirror { m } else { n })));
    }
    let weight = weight.inv()?;
    let cfg = ctx.cfg();
    if dims.contains(&0) {
        return Ok(SixJTensor { labels: labels.clone(), mirror, dims, values: Vec::new(), weight });
    }
    let pi = ctx.module(i)?.parities().to_vec();
    let dk = ctx.module(k)?.dim();
    let top = SparseVec::unit(0, cfg.field());
    let mut t = SixJTensor {
        labels: labels.clone(),
        mirror,
        dims,
        values: vec![cfg.zero(); dims.iter().product()],
        weight,
    };
    if !mirror {
        for b in 0..dims[1] {
            let yb = sp.y.basis[b].apply(&top);
            for a in 0..dims[0] {
                let s = apply_left(&sp.x.basis[a], dk, &yb);
                for c in 0..dims[2] {
                    let r = apply_right(&sp.u.dual_basis[c], &pi, &s);
                    for d in 0..dims[3] {
                        let idx = t.index(a, b, c, d);
                        t.values[idx] = top_coefficient(&sp.v.dual_basis[d], &r);
                    }
                }
            }
        }
    } else {
        for d in 0..dims[3] {
            let vd = sp.v.basis[d].apply(&top);
            for c in 0..dims[2] {
                let s = apply_right(&sp.u.basis[c], &pi, &vd);
                for a in 0..dims[0] {
                    let r = apply_left(&sp.x.dual_basis[a], dk, &s);
                    for b in 0..dims[1] {
                        let idx = t.index(a, b, c, d);
                        t.values[idx] = top_coefficient(&sp.y.dual_basis[b], &r);
                    }
                }
            }
        }
    }
    Ok(t)
}

/// Checks the defining equation of every 6j tensor with outer labels (i, j, k, l) and the
/// given intermediate `fixed`: the left bracketing tree minus its expansion over all
/// intermediates of the other bracketing must vanish up to a negligible morphism.
/// `mirror` selects the expansion of right-bracketed trees, with `fixed` playing n.
pub fn verify_defining_equation(
    ctx: &SixJContext,
    outer: [&SimpleLabel; 4],
    fixed: &SimpleLabel,
    mirror: bool,
) -> Result<Report> {
    let [i, j, k, l] = outer;
    let cfg = ctx.cfg();
    let pi = ctx.module(i)?.parities().to_vec();
    let dk = ctx.module(k)?.dim();
    let top = SparseVec::unit(0, cfg.field());
    let ij = ctx.slice(&(&i.alpha + &j.alpha))?;
    let jk = ctx.slice(&(&j.alpha + &k.alpha))?;
    // trees (x (x) 1) y through m, and (1 (x) u) v through n, applied to the top vector
    let left_tree = |m: &SimpleLabel, a: usize, b: usize| -> Result<SparseVec> {
        let (x, y) = (ctx.mult_space(i, j, m)?, ctx.mult_space(m, k, l)?);
        Ok(apply_left(&x.basis[a], dk, &y.basis[b].apply(&top)))
    };
    let right_tree = |n: &SimpleLabel, c: usize, d: usize| -> Result<SparseVec> {
        let (u, v) = (ctx.mult_space(j, k, n)?, ctx.mult_space(i, n, l)?);
        Ok(apply_right(&u.basis[c], &pi, &v.basis[d].apply(&top)))
    };
    let (this_side, other_side) = if mirror { (&jk, &ij) } else { (&ij, &jk) };
    if !this_side.contains(fixed) {
        return Err(Error::Precondition(format!("{fixed} is not in the grading of the intermediate")));
    }
    let dims_at = |mid: &SimpleLabel, left: bool| -> Result<(usize, usize)> {
        Ok(if left {
            (ctx.mult_space(i, j, mid)?.dim(), ctx.mult_space(mid, k, l)?.dim())
        } else {
            (ctx.mult_space(j, k, mid)?.dim(), ctx.mult_space(i, mid, l)?.dim())
        })
    };
    let mut report = Report::new("sixj");
    let (p0, p1) = dims_at(fixed, !mirror)?;
    let tag = format!("{i},{j},{k},{l}/{fixed}{}", if mirror { "/mirror" } else { "" });
    for s0 in 0..p0 {
        for s1 in 0..p1 {
            let lhs = if mirror { right_tree(fixed, s0, s1)? } else { left_tree(fixed, s0, s1)? };
            let mut residual = lhs;
            for mid in other_side {
                let (q0, q1) = dims_at(mid, mirror)?;
                if q0 == 0 || q1 == 0 {
                    continue;
                }
                let labels = if mirror {
                    [i.clone(), j.clone(), k.clone(), l.clone(), mid.clone(), fixed.clone()]
                } else {
                    [i.clone(), j.clone(), k.clone(), l.clone(), fixed.clone(), mid.clone()]
                };
                let t = ctx.sixj(&labels, mirror)?;
                for r0 in 0..q0 {
                    for r1 in 0..q1 {
                        let coeff = if mirror { t.raw(r0, r1, s0, s1) } else { t.raw(s0, s1, r0, r1) };
                        if coeff.is_zero() {
                            continue;
                        }
                        let tree = if mirror { left_tree(mid, r0, r1)? } else { right_tree(mid, r0, r1)? };
                        residual = residual.axpy(&-coeff.clone(), &tree);
                    }
                }
            }
            let exact = residual.is_zero();
            let negligible = exact || pairs_to_zero(ctx, outer, &residual, &ij, dk)?;
            report.check_with(
                format!("defining/{tag}/{s0},{s1}"),
                negligible,
                json!({ "exact": exact }),
            );
        }
    }
    Ok(report)
}

/// Whether <y*_b (x*_a (x) 1) R> vanishes for every left-bracketed dual tree.
fn pairs_to_zero(
    ctx: &SixJContext,
    outer: [&SimpleLabel; 4],
    residual: &SparseVec,
    ij: &[SimpleLabel],
    dk: usize,
) -> Result<bool> {
    let [i, j, k, l] = outer;
    for m in ij {
        let (x, y) = (ctx.mult_space(i, j, m)?, ctx.mult_space(m, k, l)?);
        for xa in &x.dual_basis {
            let r = apply_left(xa, dk, residual);
            for yb in &y.dual_basis {
                if !top_coefficient(yb, &r).is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Composing the expansion of left trees through m in right trees with the mirror
/// expansion back: sum over n, c, d of F^{ab}_{cd} G^{a'b'}_{cd} is the identity in (a, b).
pub fn verify_orientation_reversal(ctx: &SixJContext, outer: [&SimpleLabel; 4], m: &SimpleLabel) -> Result<Report> {
    let [i, j, k, l] = outer;
    let (x, y) = (ctx.mult_space(i, j, m)?, ctx.mult_space(m, k, l)?);
    let (p0, p1) = (x.dim(), y.dim());
    let cfg = ctx.cfg();
    let mut composite = vec![vec![cfg.zero(); p0 * p1]; p0 * p1];
    for n in ctx.slice(&(&j.alpha + &k.alpha))? {
        let labels = [i.clone(), j.clone(), k.clone(), l.clone(), m.clone(), n];
        let direct = ctx.sixj(&labels, false)?;
        if direct.is_empty() || p0 * p1 == 0 {
            continue;
        }
        let mirror = ctx.sixj(&labels, true)?;
        let [_, _, q0, q1] = direct.dims;
        for (row, slot) in composite.iter_mut().enumerate() {
            for (col, entry) in slot.iter_mut().enumerate() {
                for c in 0..q0 {
                    for d in 0..q1 {
                        let f = direct.raw(row / p1, row % p1, c, d);
                        if !f.is_zero() {
                            *entry = &*entry + f * mirror.raw(col / p1, col % p1, c, d);
                        }
                    }
                }
            }
        }
    }
    let mut report = Report::new("sixj");
    let identity = composite
        .iter()
        .enumerate()
        .all(|(r, row)| row.iter().enumerate().all(|(c, v)| if r == c { v.is_one() } else { v.is_zero() }));
    report.check_with(format!("reversal/{i},{j},{k},{l}/{m}"), identity, json!({ "size": p0 * p1 }));
    Ok(report)
}
