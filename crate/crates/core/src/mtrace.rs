//! Quantum trace, right partial trace and the modified trace on the ideal.

use std::collections::HashMap;

use parking_lot::RwLock;

use crate::catops::{decompose, DecompositionRecord, Morphism};
use crate::error::{Error, Result};
use crate::linalg::{SparseMat, SparseVec};
use crate::repmod::{SimpleLabel, WeightModule};
use crate::scalar::{format_rational, int, CycScalar, RootConfig};

/// The pivotal weight (-1)^{|v_j|} q^{-2 lambda_2(v_j)} of each basis vector.
fn pivotal_weights(m: &WeightModule) -> Result<Vec<CycScalar>> {
    let cfg = m.cfg();
    (0..m.dim())
        .map(|j| {
            let w = cfg.q_power(&(&m.h_weight(j).1 * int(-2)))?;
            Ok(if m.parity(j) == 1 { -w } else { w })
        })
        .collect()
}

/// Quantum trace: the supertrace of K2^{-2} f.
pub fn qtrace(f: &Morphism) -> Result<CycScalar> {
    let m = f.source();
    if f.target().dim() != m.dim() {
        return Err(Error::Precondition("quantum trace of a non-endomorphism".into()));
    }
    let w = pivotal_weights(m)?;
    let mut acc = m.cfg().zero();
    for (j, wj) in w.iter().enumerate() {
        let x = f.matrix().get(j, j);
        if !x.is_zero() {
            acc = acc + wj * &x;
        }
    }
    Ok(acc)
}

/// ptr^W(f) = (Id (x) evL_W)(f (x) Id)(Id (x) coevR_W) for f an endomorphism of U (x) W.
pub fn partial_trace_right(f: &Morphism) -> Result<Morphism> {
    let (u, w) = f
        .source()
        .factors()
        .ok_or_else(|| Error::Precondition(format!("{} carries no tensor factorization", f.source().name())))?;
    if f.target().dim() != f.source().dim() {
        return Err(Error::Precondition("partial trace of a non-endomorphism".into()));
    }
    let (u, w) = (u.clone(), w.clone());
    let weights = pivotal_weights(&w)?;
    let dw = w.dim();
    let field = u.cfg().field();
    let mut trips = Vec::new();
    for b in 0..u.dim() {
        for (j, s) in weights.iter().enumerate() {
            for (row, x) in f.matrix().col(b * dw + j).iter() {
                if row % dw == j {
                    trips.push((row / dw, b, s * x));
                }
            }
        }
    }
    let m = SparseMat::from_triplets(u.dim(), u.dim(), trips, field);
    Morphism::new(u.clone(), u, m, f.parity())
}

/// d(V(n, alpha~)) = {n+1} / ({1}{alpha}{alpha+n+1}).
pub fn mdim(cfg: &RootConfig, label: &SimpleLabel) -> Result<CycScalar> {
    let a = &label.alpha;
    let den = cfg.brace(a)? * cfg.brace(&(a + int(label.n as i64 + 1)))?;
    if den.is_zero() {
        return Err(Error::NonSimple(format!("modified dimension undefined at {label}")));
    }
    let num = cfg.brace(&int(label.n as i64 + 1))? * cfg.inv_brace_one();
    Ok(num * den.inv()?)
}

/// Memoized modified dimensions; safe for concurrent use.
pub struct ModifiedDimensionTable {
    cfg: RootConfig,
    memo: RwLock<HashMap<SimpleLabel, CycScalar>>,
}

impl ModifiedDimensionTable {
    pub fn new(cfg: &RootConfig) -> Self {
        ModifiedDimensionTable { cfg: cfg.clone(), memo: RwLock::new(HashMap::new()) }
    }

    pub fn cfg(&self) -> &RootConfig {
        &self.cfg
    }

    pub fn get(&self, label: &SimpleLabel) -> Result<CycScalar> {
        if let Some(v) = self.memo.read().get(label) {
            return Ok(v.clone());
        }
        let v = mdim(&self.cfg, label)?;
        self.memo.write().entry(label.clone()).or_insert_with(|| v.clone());
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.memo.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn typical_mdim(m: &WeightModule) -> Option<Result<CycScalar>> {
    m.typical_label().map(|(label, _)| mdim(m.cfg(), label))
}

/// Coefficient of the top vector in pi(f(iota(top))).
fn sandwich(pi: &Morphism, f: Option<&Morphism>, iota: &Morphism) -> CycScalar {
    let field = iota.source().cfg().field();
    let mut v = iota.apply(&SparseVec::unit(0, field));
    if let Some(f) = f {
        v = f.apply(&v);
    }
    pi.apply(&v).get(0).cloned().unwrap_or_else(|| CycScalar::zero(field))
}

/// The modified trace on a completely decomposed module:
/// sum over summand copies of (-1)^{|iota|} d(label) <pi f iota>.
pub fn mtrace_ss(f: &Morphism, record: &DecompositionRecord) -> Result<CycScalar> {
    if !record.is_complete() {
        return Err(Error::TraceUnavailable(format!(
            "{} is not semisimple (complement of dimension {})",
            record.module.name(),
            record.complement_dim
        )));
    }
    if f.parity() == 1 {
        return Ok(record.module.cfg().zero());
    }
    let cfg = record.module.cfg();
    let mut acc = cfg.zero();
    for s in &record.summands {
        let d = mdim(cfg, &s.label)?;
        let d = if s.parity_shift { -d } else { d };
        for (iota, pi) in s.injections.iter().zip(&s.projections) {
            let c = sandwich(pi, Some(f), iota);
            if !c.is_zero() {
                acc = acc + &d * &c;
            }
        }
    }
    Ok(acc)
}

/// The modified trace of an endomorphism, decomposing the module if needed.
pub fn mtrace(f: &Morphism) -> Result<CycScalar> {
    let m = f.source();
    if let Some(d) = typical_mdim(m) {
        if f.parity() == 1 {
            return Ok(m.cfg().zero());
        }
        return Ok(d? * f.scalar()?);
    }
    let rec = decompose(m)?;
    mtrace_ss(f, &rec)
}

/// Matrix P[b][a] = t_{M1}(back_b o fwd_a) for fwd: M1 -> M2 and back: M2 -> M1.
pub fn trace_pairing(fwd: &[Morphism], back: &[Morphism]) -> Result<Vec<Vec<CycScalar>>> {
    let Some(first) = fwd.first() else {
        return Ok(back.iter().map(|_| Vec::new()).collect());
    };
    let m1 = first.source().clone();
    if let Some(d) = typical_mdim(&m1) {
        let d = d?;
        return Ok(back.iter().map(|g| fwd.iter().map(|f| &d * &sandwich(g, None, f)).collect()).collect());
    }
    if let Some(d) = typical_mdim(first.target()) {
        // t_{M1}(g f) = (-1)^{|f||g|} t_{M2}(f g)
        let d = d?;
        return Ok(back
            .iter()
            .map(|g| {
                fwd.iter()
                    .map(|f| {
                        let s = &d * &sandwich(f, None, g);
                        if f.parity() * g.parity() == 1 {
                            -s
                        } else {
                            s
                        }
                    })
                    .collect()
            })
            .collect());
    }
    let rec = decompose(&m1)?;
    if !rec.is_complete() {
        return Err(Error::TraceUnavailable(format!("{} is not semisimple", m1.name())));
    }
    let cfg = m1.cfg();
    let dims: Vec<CycScalar> = rec
        .summands
        .iter()
        .map(|s| mdim(cfg, &s.label).map(|d| if s.parity_shift { -d } else { d }))
        .collect::<Result<_>>()?;
    // Push every injected top vector through each fwd map once.
    let mut images: Vec<Vec<(usize, SparseVec, &Morphism)>> = vec![Vec::new(); fwd.len()];
    for (si, s) in rec.summands.iter().enumerate() {
        for (iota, pi) in s.injections.iter().zip(&s.projections) {
            let top = iota.apply(&SparseVec::unit(0, cfg.field()));
            for (a, f) in fwd.iter().enumerate() {
                images[a].push((si, f.apply(&top), pi));
            }
        }
    }
    let mut out = Vec::with_capacity(back.len());
    for g in back {
        let mut row = Vec::with_capacity(fwd.len());
        for imgs in &images {
            let mut acc = cfg.zero();
            for (si, v, pi) in imgs {
                let c = pi.apply(&g.apply(v)).get(0).cloned();
                if let Some(c) = c {
                    acc = acc + &dims[*si] * &c;
                }
            }
            row.push(acc);
        }
        out.push(row);
    }
    Ok(out)
}

/// The modified dimension with a readable rendering for reports.
pub fn mdim_json(cfg: &RootConfig, label: &SimpleLabel) -> Result<serde_json::Value> {
    let d = mdim(cfg, label)?;
    Ok(serde_json::json!({
        "n": label.n,
        "alphaTilde": format_rational(&label.alpha),
        "value": d.to_json(),
        "approx": d.approx_string(),
    }))
}

/// The modified trace of Id on a simple summand shifted in parity.
pub fn signed_mdim(cfg: &RootConfig, label: &SimpleLabel, parity_shift: bool) -> Result<CycScalar> {
    let d = mdim(cfg, label)?;
    Ok(if parity_shift { -d } else { d })
}

/// The pair (S'_{B,A}, S'_{A,B}) for A = V(n, alpha) and B = V(m, beta), each
/// taken at the given representative. S'_{X,Y} is the scalar on Y left by the
/// right partial trace over X of the double braiding.
pub fn s_prime_between(
    cfg: &RootConfig,
    a: (u32, &crate::scalar::Rational),
    b: (u32, &crate::scalar::Rational),
) -> Result<(CycScalar, CycScalar)> {
    use crate::braid::braiding_between;
    use crate::repmod::{build_typical_rep, tensor};
    use std::sync::Arc;
    let v = Arc::new(build_typical_rep(cfg, a.0, a.1)?);
    let w = Arc::new(build_typical_rep(cfg, b.0, b.1)?);
    let vw = Arc::new(tensor(&v, &w)?);
    let wv = Arc::new(tensor(&w, &v)?);
    let psi_vw = braiding_between(&v, &w, vw.clone(), wv.clone())?.morphism;
    let psi_wv = braiding_between(&w, &v, wv, vw)?.morphism;
    let on_v = partial_trace_right(&psi_wv.compose(&psi_vw)?)?;
    let on_w = partial_trace_right(&psi_vw.compose(&psi_wv)?)?;
    Ok((on_v.scalar()?, on_w.scalar()?))
}

/// The pair (S'_{1/3,alpha}, S'_{alpha,1/3}) against V(0, 1/3).
pub fn s_prime_pair(cfg: &RootConfig, n: u32, alpha: &crate::scalar::Rational) -> Result<(CycScalar, CycScalar)> {
    s_prime_between(cfg, (n, alpha), (0, &crate::scalar::rat(1, 3)))
}

/// d(V(n, alpha~)) recomputed as S'_{alpha,1/3} / ({1/3}{4/3} S'_{1/3,alpha}).
pub fn mdim_via_s_prime(cfg: &RootConfig, n: u32, alpha: &crate::scalar::Rational) -> Result<CycScalar> {
    let (s_third_alpha, s_alpha_third) = s_prime_pair(cfg, n, alpha)?;
    let third = crate::scalar::rat(1, 3);
    let norm = cfg.brace(&third)? * cfg.brace(&(&third + int(1)))?;
    let den = norm * s_third_alpha;
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(s_alpha_third * den.inv()?)
}
