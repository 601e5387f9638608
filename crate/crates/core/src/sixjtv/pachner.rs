//! The algebraic 2-3 move: two tetrahedra glued along a face against three
//! tetrahedra around an internal edge.

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::SixJContext;
use crate::error::{Error, Result};
use crate::report::Report;
use crate::repmod::SimpleLabel;
use crate::scalar::CycScalar;

/// Labels of the 2-3 configuration: the four factors of a fourfold product, its
/// total, and the intermediates of the left comb ((12)3)4 and the right comb 1(2(34)).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PachnerLabels {
    pub factors: [SimpleLabel; 4],
    pub total: SimpleLabel,
    /// intermediate of factors 1,2
    pub first_pair: SimpleLabel,
    /// intermediate of factors 1,2,3
    pub first_triple: SimpleLabel,
    /// intermediate of factors 3,4
    pub last_pair: SimpleLabel,
    /// intermediate of factors 2,3,4
    pub last_triple: SimpleLabel,
}

impl std::fmt::Display for PachnerLabels {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let [a, b, c, d] = &self.factors;
        write!(
            f,
            "{a},{b},{c},{d}->{}[{},{};{},{}]",
            self.total, self.first_pair, self.first_triple, self.last_pair, self.last_triple
        )
    }
}

/// Weight on the internal edge of the three-tetrahedron side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InternalWeight {
    ModifiedDimension,
    /// Replaces d by 1; the identity is expected to fail.
    One,
}

/// sum_t T[p,C,D,E;q,r]^{yz}_{w1 t} T[A,B,r,E;p,s]^{xt}_{w2 w3} (-1)^{|x||w1|}
///   = sum_u d(u) sum_{e,f,g} T[A,B,C,q;p,u]^{xy}_{ef} T[A,u,D,E;q,s]^{fz}_{g w3} T[B,C,D,s;u,r]^{eg}_{w1 w2}
/// for every choice of basis vectors x, y, z, w1, w2, w3, with T the normalized 6j symbol.
pub fn pachner23_check(ctx: &SixJContext, labels: &PachnerLabels, weight: InternalWeight) -> Result<Report> {
    let [a, b, c, d] = &labels.factors;
    let (e, p, q, r, s) = (&labels.total, &labels.first_pair, &labels.first_triple, &labels.last_pair, &labels.last_triple);
    let cfg = ctx.cfg();
    for (lab, what) in [(p, "first pair"), (q, "first triple"), (r, "last pair"), (s, "last triple")] {
        if lab.n + 1 >= cfg.l_prime() {
            return Err(Error::Precondition(format!("{what} label {lab} lies outside the alcove")));
        }
    }
    let hx = ctx.mult_space(a, b, p)?;
    let hy = ctx.mult_space(p, c, q)?;
    let hz = ctx.mult_space(q, d, e)?;
    let hw1 = ctx.mult_space(c, d, r)?;
    let hw2 = ctx.mult_space(b, r, s)?;
    let hw3 = ctx.mult_space(a, s, e)?;
    let ht = ctx.mult_space(p, r, e)?;
    let two_first = ctx.sixj(&[p.clone(), c.clone(), d.clone(), e.clone(), q.clone(), r.clone()], false)?;
    let two_second = ctx.sixj(&[a.clone(), b.clone(), r.clone(), e.clone(), p.clone(), s.clone()], false)?;
    struct Channel {
        weight: CycScalar,
        dims: (usize, usize, usize),
        first: std::sync::Arc<super::SixJTensor>,
        second: std::sync::Arc<super::SixJTensor>,
        third: std::sync::Arc<super::SixJTensor>,
    }
    let mut channels = Vec::new();
    for u in ctx.fusion_targets(b, c)? {
        let (he, hf, hg) = (ctx.mult_space(b, c, &u)?, ctx.mult_space(a, &u, q)?, ctx.mult_space(&u, d, s)?);
        if hf.is_empty() || hg.is_empty() {
            continue;
        }
        let w = match weight {
            InternalWeight::ModifiedDimension => ctx.mdim(&u)?,
            InternalWeight::One => cfg.one(),
        };
        channels.push(Channel {
            weight: w,
            dims: (he.dim(), hf.dim(), hg.dim()),
            first: ctx.sixj(&[a.clone(), b.clone(), c.clone(), q.clone(), p.clone(), u.clone()], false)?,
            second: ctx.sixj(&[a.clone(), u.clone(), d.clone(), e.clone(), q.clone(), s.clone()], false)?,
            third: ctx.sixj(&[b.clone(), c.clone(), d.clone(), s.clone(), u.clone(), r.clone()], false)?,
        });
    }
    let mut report = Report::new("sixj");
    for x in 0..hx.dim() {
        for y in 0..hy.dim() {
            for z in 0..hz.dim() {
                for w1 in 0..hw1.dim() {
                    for w2 in 0..hw2.dim() {
                        for w3 in 0..hw3.dim() {
                            let mut lhs = cfg.zero();
                            for t in 0..ht.dim() {
                                let term = two_first.normalized(y, z, w1, t) * two_second.normalized(x, t, w2, w3);
                                lhs = lhs + term;
                            }
                            if hx.parity(x) * hw1.parity(w1) == 1 {
                                lhs = -lhs;
                            }
                            let mut rhs = cfg.zero();
                            for ch in &channels {
                                let mut acc = cfg.zero();
                                for ei in 0..ch.dims.0 {
                                    for fi in 0..ch.dims.1 {
                                        let f1 = ch.first.normalized(x, y, ei, fi);
                                        if f1.is_zero() {
                                            continue;
                                        }
                                        for gi in 0..ch.dims.2 {
                                            let f2 = ch.second.normalized(fi, z, gi, w3);
                                            let f3 = ch.third.normalized(ei, gi, w1, w2);
                                            acc = acc + &f1 * &f2 * f3;
                                        }
                                    }
                                }
                                rhs = rhs + &ch.weight * &acc;
                            }
                            report.check_with(
                                format!("pachner23/{labels}/{x}{y}{z}{w1}{w2}{w3}"),
                                lhs == rhs,
                                json!({ "lhs": lhs.approx_string(), "rhs": rhs.approx_string() }),
                            );
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}
