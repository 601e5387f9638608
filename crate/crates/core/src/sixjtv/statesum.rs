//! States of a graded H-triangulation and the state sum over them.

use std::collections::HashMap;

use rayon::prelude::*;
use serde_json::json;

use super::triangulation::{faces_of, HTriangulation};
use super::SixJContext;
use crate::error::{Error, Result};
use crate::repmod::SimpleLabel;
use crate::scalar::CycScalar;

/// One label per edge class, for its canonical orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateAssignment {
    pub labels: Vec<SimpleLabel>,
}

impl StateAssignment {
    /// The label on the oriented edge a -> b; reversed edges carry the dual.
    pub fn on(&self, tri: &HTriangulation, a: u32, b: u32) -> SimpleLabel {
        let o = tri.oriented(a, b);
        let lab = &self.labels[o.edge];
        if o.reversed {
            lab.dual(tri.cfg.l())
        } else {
            lab.clone()
        }
    }
}

fn edge_choices(ctx: &SixJContext, tri: &HTriangulation) -> Result<Vec<Vec<SimpleLabel>>> {
    tri.cocycle.iter().map(|g| ctx.slice(g)).collect()
}

fn nth_state(choices: &[Vec<SimpleLabel>], mut k: usize) -> StateAssignment {
    let mut labels = Vec::with_capacity(choices.len());
    for c in choices {
        labels.push(c[k % c.len()].clone());
        k /= c.len();
    }
    StateAssignment { labels }
}

/// All states, in mixed-radix order with the first edge varying fastest.
pub fn states(ctx: &SixJContext, tri: &HTriangulation) -> Result<impl Iterator<Item = StateAssignment>> {
    let choices = edge_choices(ctx, tri)?;
    let count: usize = choices.iter().map(Vec::len).product();
    Ok((0..count).map(move |k| nth_state(&choices, k)))
}

#[derive(Clone, Debug)]
pub struct StateSumResult {
    pub value: CycScalar,
    pub state_count: usize,
    pub nonzero_states: usize,
}

impl StateSumResult {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "value": self.value.to_json(),
            "approx": self.value.approx_string(),
            "stateCount": self.state_count,
            "nonzeroStates": self.nonzero_states,
        })
    }
}

/// Labels (i, j, k, l, m, n) of a sorted tetrahedron v0 < v1 < v2 < v3:
/// i = 01, j = 12, k = 23, l = 03, m = 02, n = 13.
fn tetra_labels(tri: &HTriangulation, state: &StateAssignment, t: &[u32; 4]) -> [SimpleLabel; 6] {
    let on = |a: usize, b: usize| state.on(tri, t[a], t[b]);
    [on(0, 1), on(1, 2), on(2, 3), on(0, 3), on(0, 2), on(1, 3)]
}

/// Contraction of the tetrahedron tensors over shared faces for one state.
fn contraction(ctx: &SixJContext, tri: &HTriangulation, state: &StateAssignment) -> Result<CycScalar> {
    let cfg = ctx.cfg();
    let face_index: HashMap<[u32; 3], usize> = tri.faces.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let mut face_dims = Vec::with_capacity(tri.faces.len());
    for [a, b, c] in &tri.faces {
        let h = ctx.mult_space(&state.on(tri, *a, *b), &state.on(tri, *b, *c), &state.on(tri, *a, *c))?;
        if h.is_empty() {
            return Ok(cfg.zero());
        }
        face_dims.push(h.dim());
    }
    // each tetrahedron reads its (x, y, u, v) slots from faces 012, 023, 123, 013
    let mut tensors = Vec::with_capacity(tri.tetrahedra.len());
    for t in &tri.tetrahedra {
        let labels = tetra_labels(tri, state, &t.sorted);
        let sym = ctx.sixj(&labels, !t.positive)?;
        let by_opposite: HashMap<usize, usize> = faces_of(&t.sorted).iter().map(|(o, f)| (*o, face_index[f])).collect();
        let slots = [by_opposite[&3], by_opposite[&1], by_opposite[&0], by_opposite[&2]];
        tensors.push((sym, slots));
    }
    let total: usize = face_dims.iter().product();
    let mut acc = cfg.zero();
    let mut idx = vec![0usize; face_dims.len()];
    for _ in 0..total {
        let mut term = cfg.one();
        for (sym, s) in &tensors {
            let v = sym.normalized(idx[s[0]], idx[s[1]], idx[s[2]], idx[s[3]]);
            if v.is_zero() {
                term = cfg.zero();
                break;
            }
            term = term * v;
        }
        if !term.is_zero() {
            acc = acc + term;
        }
        for (i, d) in idx.iter_mut().zip(&face_dims) {
            *i += 1;
            if *i < *d {
                break;
            }
            *i = 0;
        }
    }
    Ok(acc)
}

/// The weighted sum over states of d on non-link edges, b on link edges and the
/// face contraction of the tetrahedron tensors.
pub fn tv_state_sum(ctx: &SixJContext, tri: &HTriangulation) -> Result<StateSumResult> {
    if ctx.cfg() != &tri.cfg {
        return Err(Error::Config("state sum context and triangulation use different root configurations".into()));
    }
    let choices = edge_choices(ctx, tri)?;
    let count: usize = choices.iter().map(Vec::len).product();
    let cfg = ctx.cfg().clone();
    let terms: Vec<CycScalar> = (0..count)
        .into_par_iter()
        .map(|k| {
            let state = nth_state(&choices, k);
            let c = contraction(ctx, tri, &state)?;
            if c.is_zero() {
                return Ok(c);
            }
            let mut w = cfg.one();
            for (e, lab) in state.labels.iter().enumerate() {
                w = w * if tri.link[e] { ctx.b(lab)? } else { ctx.mdim(lab)? };
            }
            Ok(w * c)
        })
        .collect::<Result<_>>()?;
    let nonzero_states = terms.iter().filter(|t| !t.is_zero()).count();
    let value = terms.into_iter().fold(cfg.zero(), |a, t| a + t);
    Ok(StateSumResult { value, state_count: count, nonzero_states })
}
