//! The truncated R-matrix braiding c = tau o R o K on modules carrying h-weights.

use std::sync::Arc;

use crate::catops::Morphism;
use crate::error::{Error, Result};
use crate::linalg::SparseMat;
use crate::report::Report;
use crate::repmod::{build_typical_rep, tensor, typical_triple, Gen, WeightModule};
use crate::scalar::{format_rational, int, CycScalar, Rational, RootConfig};

/// The diagonal operator q^{-l1 m2 - l2 m1 - 2 l2 m2} on M1 (x) M2.
pub fn k_operator(m1: &WeightModule, m2: &WeightModule) -> Result<SparseMat> {
    let cfg = m1.cfg();
    let mut d = Vec::with_capacity(m1.dim() * m2.dim());
    for i in 0..m1.dim() {
        let (l1, l2) = m1.h_weight(i);
        for j in 0..m2.dim() {
            let (u1, u2) = m2.h_weight(j);
            let e = -(l1 * u2) - l2 * u1 - (l2 * u2) * Rational::from_integer(2.into());
            d.push(cfg.q_power(&e).map_err(|_| {
                Error::Config(format!(
                    "exponent {} of the K operator needs a larger denominator bound than {}",
                    crate::scalar::format_rational(&e),
                    cfg.denom_bound()
                ))
            })?);
        }
    }
    Ok(SparseMat::diagonal(d, cfg.field()))
}

fn power(m: &SparseMat, k: u32, n: usize, field: &Arc<crate::scalar::CycloField>) -> SparseMat {
    (0..k).fold(SparseMat::identity(n, field), |acc, _| acc.mul(m))
}

/// a (x) b acting on M1 (x) M2 with the Koszul sign (-1)^{|b||v|}.
fn pure_tensor(a: &SparseMat, b: &SparseMat, b_odd: bool, m1: &WeightModule) -> SparseMat {
    let p = m1.parities();
    SparseMat::kron_signed(a, b, |j, _| b_odd && p[j] == 1)
}

/// E3 = E1 E2 - q^{-1} E2 E1 and F3 = F2 F1 - q F1 F2 as matrices on `m`.
pub fn e3_f3(m: &WeightModule) -> (SparseMat, SparseMat) {
    let cfg = m.cfg();
    let a = |g| m.action(g);
    let e3 = a(Gen::E1).mul(a(Gen::E2)).sub(&a(Gen::E2).mul(a(Gen::E1)).scale(&cfg.q_int(-1)));
    let f3 = a(Gen::F2).mul(a(Gen::F1)).sub(&a(Gen::F1).mul(a(Gen::F2)).scale(&cfg.q_int(1)));
    (e3, f3)
}

/// The truncated R-matrix on M1 (x) M2: the product of the E1/F1 sum over
/// k < l', then the E3/F3 and E2/F2 sums over s, t in {0, 1}.
pub fn truncated_r(m1: &WeightModule, m2: &WeightModule) -> SparseMat {
    let cfg = m1.cfg();
    let field = cfg.field();
    let (n1, n2) = (m1.dim(), m2.dim());
    let brace1 = cfg.q_int(1) - cfg.q_int(-1);
    let mut first = SparseMat::zeros(n1 * n2, n1 * n2, field);
    for k in 0..cfg.l_prime() {
        let coeff = brace1.pow(k as u64) * cfg.qparen_factorial(k as u64).inv().expect("(k)_q! is nonzero below l'");
        let a = power(m1.action(Gen::E1), k, n1, field);
        let b = power(m2.action(Gen::F1), k, n2, field);
        if a.is_zero() || b.is_zero() {
            continue;
        }
        first = first.axpy(&coeff, &pure_tensor(&a, &b, false, m1));
    }
    let minus_brace = -brace1;
    let id = SparseMat::identity(n1 * n2, field);
    let (e3, _) = e3_f3(m1);
    let (_, f3) = e3_f3(m2);
    let second = id.axpy(&minus_brace, &pure_tensor(&e3, &f3, true, m1));
    let third = id.axpy(&minus_brace, &pure_tensor(m1.action(Gen::E2), m2.action(Gen::F2), true, m1));
    first.mul(&second).mul(&third)
}

/// The super flip M1 (x) M2 -> M2 (x) M1.
pub fn super_flip(m1: &WeightModule, m2: &WeightModule) -> SparseMat {
    let (n1, n2) = (m1.dim(), m2.dim());
    let cfg = m1.cfg();
    let trips = (0..n1).flat_map(|i| {
        (0..n2).map(move |j| {
            let s = if m1.parity(i) * m2.parity(j) == 1 { -cfg.one() } else { cfg.one() };
            (j * n1 + i, i * n2 + j, s)
        })
    });
    SparseMat::from_triplets(n1 * n2, n1 * n2, trips.collect::<Vec<_>>(), cfg.field())
}

/// A braiding isomorphism together with the representative exponents of its factors.
#[derive(Clone, Debug)]
pub struct BraidingMap {
    pub morphism: Morphism,
    pub reps: (Option<Rational>, Option<Rational>),
}

impl BraidingMap {
    pub fn matrix(&self) -> &SparseMat {
        self.morphism.matrix()
    }

    pub fn inverse(&self) -> Result<Morphism> {
        let inv = self.morphism.matrix().inverse()?;
        Morphism::even(self.morphism.target().clone(), self.morphism.source().clone(), inv)
    }
}

/// c_{M1,M2} = tau o R o K with the h-weights the modules were built with.
/// Typical modules carry their representative alpha; rebuild them with
/// `repmod::with_representative` to change it.
pub fn braiding(m1: &Arc<WeightModule>, m2: &Arc<WeightModule>) -> Result<BraidingMap> {
    let src = Arc::new(tensor(m1, m2)?);
    let tgt = Arc::new(tensor(m2, m1)?);
    braiding_between(m1, m2, src, tgt)
}

/// As [`braiding`], reusing already built product modules.
pub fn braiding_between(
    m1: &Arc<WeightModule>,
    m2: &Arc<WeightModule>,
    src: Arc<WeightModule>,
    tgt: Arc<WeightModule>,
) -> Result<BraidingMap> {
    let k = k_operator(m1, m2)?;
    let r = truncated_r(m1, m2);
    let c = super_flip(m1, m2).mul(&r.mul(&k));
    let reps = (m1.typical_label().map(|(_, r)| r.clone()), m2.typical_label().map(|(_, r)| r.clone()));
    Ok(BraidingMap { morphism: Morphism::even(src, tgt, c)?, reps })
}

/// Yang-Baxter residual (c (x) 1)(1 (x) c)(c (x) 1) - (1 (x) c)(c (x) 1)(1 (x) c) on M^{(x)3}.
pub fn yang_baxter_residual(m: &Arc<WeightModule>) -> Result<SparseMat> {
    let c = braiding(m, m)?;
    let id = SparseMat::identity(m.dim(), m.cfg().field());
    let c1 = SparseMat::kron(c.matrix(), &id);
    let c2 = SparseMat::kron(&id, c.matrix());
    let lhs = c1.mul(&c2).mul(&c1);
    let rhs = c2.mul(&c1).mul(&c2);
    Ok(lhs.sub(&rhs))
}

/// Entry of the braiding at (target basis pair, source basis pair).
pub fn braiding_entry(b: &BraidingMap, tgt: (usize, usize), src: (usize, usize)) -> CycScalar {
    let m1 = b.morphism.source().factors().map(|(a, _)| a.clone()).expect("braiding source is a product");
    let m2 = b.morphism.target().factors().map(|(a, _)| a.clone()).expect("braiding target is a product");
    let (n1, n2) = (m1.dim(), m2.dim());
    b.matrix().get(tgt.0 * n1 + tgt.1, src.0 * n2 + src.1)
}

/// Entries of the braiding V(n, alpha) (x) V(n', alpha') -> V(n', alpha') (x) V(n, alpha) on
/// the products of a top vector with an arbitrary basis vector, against the closed
/// q-power formulas of the commutativity lemma.
pub fn verify_commutativity(cfg: &RootConfig, left: (u32, &Rational), right: (u32, &Rational)) -> Result<Report> {
    let ((n, al), (np, ap)) = (left, right);
    let v = Arc::new(build_typical_rep(cfg, n, al)?);
    let w = Arc::new(build_typical_rep(cfg, np, ap)?);
    let c = braiding(&v, &w)?;
    let (nn, nnp) = (int(n as i64), int(np as i64));
    let mut report = Report::new("braiding");
    let tag = format!("V({n},{})xV({np},{})", format_rational(al), format_rational(ap));
    for idx in 0..w.dim() {
        let (r, s, p) = typical_triple(np, idx);
        let (r, s, p) = (int(r as i64), int(s as i64), int(p as i64));
        let e = -(&nn * (ap + &s + &p)) - al * (&r - &s + &nnp - int(2) * &p) - int(2) * al * (ap + &s + &p);
        report.check(format!("commutativity/{tag}/top(x)w{idx}"), braiding_entry(&c, (idx, 0), (0, idx)) == cfg.q_power(&e)?);
    }
    for idx in 0..v.dim() {
        let (r, s, p) = typical_triple(n, idx);
        let (r, s, p) = (int(r as i64), int(s as i64), int(p as i64));
        let e = -((&r - &s + &nn - int(2) * &p) * ap) - (al + &s + &p) * &nnp - int(2) * ap * (al + &s + &p);
        report.check(format!("commutativity/{tag}/v{idx}(x)top"), braiding_entry(&c, (0, idx), (idx, 0)) == cfg.q_power(&e)?);
    }
    Ok(report)
}
