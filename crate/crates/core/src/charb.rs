//! The specialized character chi_q, the constant D and the b-map, with
//! solver-backed checks of the character identities in the semisimplified category.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde_json::json;

use crate::catops::negligible_rank_parity;
use crate::error::{Error, Result};
use crate::report::Report;
use crate::repmod::{build_typical, is_generic_grading, tensor, SimpleLabel, WeightModule};
use crate::scalar::{format_rational, frac, int, mod_rational, CycScalar, Rational, RootConfig};

/// c = 2 + q + q^{-1}.
pub fn chi_prefactor(cfg: &RootConfig) -> CycScalar {
    cfg.int(2) + cfg.q_int(1) + cfg.q_int(-1)
}

/// chi_q(m) = (2 + q + q^{-1}) [m+1] for 0 <= m <= l'-1.
pub fn chi_q(cfg: &RootConfig, m: u32) -> Result<CycScalar> {
    if m > cfg.l_prime() - 1 {
        return Err(Error::Precondition(format!("chi_q needs 0 <= m <= l'-1 = {}, got {m}", cfg.l_prime() - 1)));
    }
    Ok(chi_prefactor(cfg) * cfg.qint_int(m as i64 + 1))
}

/// The irreducibles of the semisimplified category in one generic grading:
/// every lift of g in Q mod l, with 0 <= n <= l'-2.
#[derive(Clone, Debug)]
pub struct GradingSlice {
    pub grading: Rational,
    pub lifts: Vec<Rational>,
    pub labels: Vec<SimpleLabel>,
}

impl GradingSlice {
    pub fn new(cfg: &RootConfig, g: &Rational) -> Result<Self> {
        let g = frac(g);
        if !is_generic_grading(&g) {
            return Err(Error::Precondition(format!("grading {} lies in (1/2)Z/Z", format_rational(&g))));
        }
        let l = cfg.l();
        let lifts: Vec<Rational> = (0..l as i64).map(|k| &g + int(k)).collect();
        let labels = (0..cfg.l_prime() - 1)
            .flat_map(|n| lifts.iter().map(move |a| SimpleLabel::new(n, a.clone(), l)))
            .collect();
        Ok(GradingSlice { grading: g, lifts, labels })
    }

    /// D_g = sum of chi_q(V)^2 over the slice.
    pub fn curly_d(&self, cfg: &RootConfig) -> Result<CycScalar> {
        let mut acc = cfg.zero();
        for v in &self.labels {
            let c = chi_q(cfg, v.n)?;
            acc = acc + &c * &c;
        }
        Ok(acc)
    }
}

/// sum_{m=0}^{l'-1} (q^{m+1} - q^{-m-1})^2, equal to -2l'.
pub fn lift_block_sum(cfg: &RootConfig) -> CycScalar {
    (0..cfg.l_prime() as i64).fold(cfg.zero(), |acc, m| {
        let x = cfg.q_int(m + 1) - cfg.q_int(-m - 1);
        acc + &x * &x
    })
}

/// D computed from the slice enumeration (all l lifts). Independent of the grading.
pub fn curly_d(cfg: &RootConfig) -> CycScalar {
    let c = chi_prefactor(cfg);
    let per_lift = (0..cfg.l_prime() - 1).fold(cfg.zero(), |acc, m| {
        let x = &c * &cfg.qint_int(m as i64 + 1);
        acc + &x * &x
    });
    per_lift.scale_int(cfg.l() as i64)
}

/// The closed form -2 l'^2 c^2 / (q - q^{-1})^2, which sums l' lifts rather than l.
/// It agrees with [`curly_d`] for odd l and is half of it for even l.
pub fn curly_d_closed_form(cfg: &RootConfig) -> CycScalar {
    let c = chi_prefactor(cfg);
    let lp = cfg.l_prime() as i64;
    let inv = cfg.inv_brace_one();
    (&c * &c * inv * inv).scale_int(-2 * lp * lp)
}

/// b(V(n, alpha~)) = chi_q(n) / D.
pub fn b_map(cfg: &RootConfig, label: &SimpleLabel) -> Result<CycScalar> {
    if !label.is_generic() {
        return Err(Error::Precondition(format!("{label} has non-generic grading")));
    }
    b_value(cfg, label.n, &curly_d(cfg))
}

fn b_value(cfg: &RootConfig, n: u32, d: &CycScalar) -> Result<CycScalar> {
    Ok(chi_q(cfg, n)? * d.inv()?)
}

/// Table of chi_q and b for the CLI.
pub fn character_table(cfg: &RootConfig) -> Result<serde_json::Value> {
    let d = curly_d(cfg);
    let closed = curly_d_closed_form(cfg);
    let rows = (0..cfg.l_prime())
        .map(|m| {
            let chi = chi_q(cfg, m)?;
            let b = if m + 1 < cfg.l_prime() { Some(b_value(cfg, m, &d)?.to_json()) } else { None };
            Ok(json!({ "m": m, "chi": chi.to_json(), "bValue": b }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({
        "l": cfg.l(),
        "lPrime": cfg.l_prime(),
        "curlyD": d.to_json(),
        "curlyDClosedForm": closed.to_json(),
        "closedFormAgrees": d == closed,
        "rows": rows,
    }))
}

/// Modules built once per label.
pub struct ModuleCache {
    cfg: RootConfig,
    built: HashMap<SimpleLabel, Arc<WeightModule>>,
}

impl ModuleCache {
    pub fn new(cfg: &RootConfig) -> Self {
        ModuleCache { cfg: cfg.clone(), built: HashMap::new() }
    }

    pub fn get(&mut self, label: &SimpleLabel) -> Result<Arc<WeightModule>> {
        if let Some(m) = self.built.get(label) {
            return Ok(m.clone());
        }
        let m = Arc::new(build_typical(&self.cfg, label)?);
        self.built.insert(label.clone(), m.clone());
        Ok(m)
    }
}

/// dim Hom(V, M) modulo negligible morphisms, counting even and odd maps.
pub fn semisimple_hom_dim(v: &Arc<WeightModule>, m: &Arc<WeightModule>) -> Result<usize> {
    let mut total = 0;
    for p in [0u8, 1] {
        let (dim, negl) = negligible_rank_parity(v, m, p)?;
        total += dim - negl;
    }
    Ok(total)
}

/// Multiplicities of the slice irreducibles in `m` after semisimplification.
/// Labels whose top weight does not occur in `m` are skipped without solving.
pub fn semisimple_multiplicities(
    cache: &mut ModuleCache,
    m: &Arc<WeightModule>,
    labels: &[SimpleLabel],
) -> Result<Vec<(SimpleLabel, usize)>> {
    let l = m.cfg().l() as i64;
    let weights: BTreeSet<(Rational, Rational)> =
        m.weights_mod_l().into_iter().map(|(a, b)| (mod_rational(&a, l), mod_rational(&b, l))).collect();
    let mut out = Vec::new();
    for label in labels {
        if !weights.contains(&(int(label.n as i64), label.alpha.clone())) {
            continue;
        }
        let v = cache.get(label)?;
        let k = semisimple_hom_dim(&v, m)?;
        if k > 0 {
            out.push((label.clone(), k));
        }
    }
    Ok(out)
}

/// chi(m) chi(n) = sum_k dim Hom(V_k, V(m,alpha) (x) V(n,beta)) chi(k), with solver dimensions.
pub fn verify_multiplicativity(cache: &mut ModuleCache, left: &SimpleLabel, right: &SimpleLabel) -> Result<Report> {
    let cfg = cache.cfg.clone();
    let g = &left.alpha + &right.alpha;
    let slice = GradingSlice::new(&cfg, &g)?;
    let a = cache.get(left)?;
    let b = cache.get(right)?;
    let ab = Arc::new(tensor(&a, &b)?);
    let mults = semisimple_multiplicities(cache, &ab, &slice.labels)?;
    let lhs = chi_q(&cfg, left.n)? * chi_q(&cfg, right.n)?;
    let mut rhs = cfg.zero();
    for (label, k) in &mults {
        rhs = rhs + chi_q(&cfg, label.n)?.scale_int(*k as i64);
    }
    let mut r = Report::new("character");
    let witness: Vec<_> = mults.iter().map(|(lab, k)| json!({ "label": lab.to_string(), "dim": k })).collect();
    r.check_with(format!("multiplicativity/{left}x{right}"), lhs == rhs, json!(witness));
    Ok(r)
}

/// V(m,alpha) (x) V(n,beta) and V(0,alpha) (x) (V(n+m,beta) + V(n+m-2,beta+1) + ... + V(n-m,beta+m))
/// have the same multiplicities after semisimplification, for m <= n <= l'-2.
pub fn verify_tensor_reduction(cache: &mut ModuleCache, left: &SimpleLabel, right: &SimpleLabel) -> Result<Report> {
    let cfg = cache.cfg.clone();
    let (m, n) = (left.n, right.n);
    if m > n || n + 2 > cfg.l_prime() {
        return Err(Error::Precondition(format!("need m <= n <= l'-2, got m = {m}, n = {n}")));
    }
    let l = cfg.l();
    let slice = GradingSlice::new(&cfg, &(&left.alpha + &right.alpha))?;
    let a = cache.get(left)?;
    let b = cache.get(right)?;
    let ab = Arc::new(tensor(&a, &b)?);
    let mut lhs = semisimple_multiplicities(cache, &ab, &slice.labels)?;
    let base = cache.get(&SimpleLabel::new(0, left.alpha.clone(), l))?;
    let mut rhs: Vec<(SimpleLabel, usize)> = Vec::new();
    for j in 0..=m {
        let k = n + m - 2 * j;
        if k + 1 >= cfg.l_prime() {
            continue;
        }
        let term = cache.get(&SimpleLabel::new(k, &right.alpha + int(j as i64), l))?;
        let prod = Arc::new(tensor(&base, &term)?);
        for (lab, c) in semisimple_multiplicities(cache, &prod, &slice.labels)? {
            match rhs.iter_mut().find(|(x, _)| *x == lab) {
                Some((_, t)) => *t += c,
                None => rhs.push((lab, c)),
            }
        }
    }
    lhs.sort();
    rhs.sort();
    let mut r = Report::new("character");
    let render = |v: &[(SimpleLabel, usize)]| -> Vec<serde_json::Value> {
        v.iter().map(|(lab, k)| json!({ "label": lab.to_string(), "dim": k })).collect()
    };
    let witness = if lhs == rhs { serde_json::Value::Null } else { json!({ "lhs": render(&lhs), "rhs": render(&rhs) }) };
    r.check_with(format!("tensor-reduction/{left}x{right}"), lhs == rhs, witness);
    Ok(r)
}

/// b(V) = sum_{V1, V2} b(V1) b(V2) dim Hom(V, V1 (x) V2) for every V in the slice of g1 + g2.
pub fn verify_b_identity(cfg: &RootConfig, g1: &Rational, g2: &Rational) -> Result<Report> {
    verify_b_identity_with(cfg, g1, g2, &curly_d(cfg))
}

/// As [`verify_b_identity`] with an explicit value of D, so that the closed form can be tested too.
pub fn verify_b_identity_with(cfg: &RootConfig, g1: &Rational, g2: &Rational, d: &CycScalar) -> Result<Report> {
    let s1 = GradingSlice::new(cfg, g1)?;
    let s2 = GradingSlice::new(cfg, g2)?;
    let s = GradingSlice::new(cfg, &(g1 + g2))?;
    let mut cache = ModuleCache::new(cfg);
    let mut rhs: HashMap<SimpleLabel, CycScalar> = s.labels.iter().map(|v| (v.clone(), cfg.zero())).collect();
    for v1 in &s1.labels {
        let b1 = b_value(cfg, v1.n, d)?;
        for v2 in &s2.labels {
            let b2 = b_value(cfg, v2.n, d)?;
            let a = cache.get(v1)?;
            let b = cache.get(v2)?;
            let ab = Arc::new(tensor(&a, &b)?);
            for (v, k) in semisimple_multiplicities(&mut cache, &ab, &s.labels)? {
                let slot = rhs.get_mut(&v).expect("slice labels cover the product grading");
                *slot = &*slot + (&b1 * &b2).scale_int(k as i64);
            }
        }
    }
    let mut r = Report::new("character");
    let tag = format!("{}+{}", format_rational(&s1.grading), format_rational(&s2.grading));
    for v in &s.labels {
        let lhs = b_value(cfg, v.n, d)?;
        r.check(format!("b-identity/{tag}/{v}"), lhs == rhs[v]);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    /// The truncated reduction read through chi, with the common c^2 factor removed:
    /// [m+1][n+1] against the sum of [k+1] over the kept k = n+m-2j <= l'-2.
    #[test]
    fn truncated_reduction_past_the_alcove() {
        for l in 3..=9 {
            let cfg = RootConfig::new(l, 1).unwrap();
            let lp = cfg.l_prime();
            for n in 0..=lp - 2 {
                for m in 0..=n {
                    let lhs = cfg.qint_int(m as i64 + 1) * cfg.qint_int(n as i64 + 1);
                    let rhs = (0..=m)
                        .map(|j| n + m - 2 * j)
                        .filter(|k| k + 2 <= lp)
                        .fold(cfg.zero(), |acc, k| acc + cfg.qint_int(k as i64 + 1));
                    if m + n < lp {
                        assert_eq!(lhs, rhs, "l = {l}, m = {m}, n = {n}");
                    }
                }
            }
        }
        let cfg = RootConfig::new(5, 1).unwrap();
        for (m, n) in [(2i64, 3i64), (3, 3)] {
            let lhs = cfg.qint_int(m + 1) * cfg.qint_int(n + 1);
            let rhs = (0..=m).map(|j| n + m - 2 * j).filter(|k| *k <= 3).fold(cfg.zero(), |acc, k| acc + cfg.qint_int(k + 1));
            assert_ne!(lhs, rhs, "m = {m}, n = {n}");
        }
    }

    #[test]
    fn chi_values() {
        let cfg = RootConfig::new(3, 1).unwrap();
        assert!(chi_q(&cfg, 0).unwrap().is_one());
        assert_eq!(chi_q(&cfg, 1).unwrap(), cfg.int(-1));
        assert!(chi_q(&cfg, 2).unwrap().is_zero());
        assert!(chi_q(&cfg, 3).is_err());
        for l in 3..9 {
            let cfg = RootConfig::new(l, 1).unwrap();
            assert!(chi_q(&cfg, cfg.l_prime() - 1).unwrap().is_zero());
            assert_eq!(lift_block_sum(&cfg), cfg.int(-2 * cfg.l_prime() as i64));
        }
    }

    #[test]
    fn curly_d_values() {
        let cfg = RootConfig::new(3, 3).unwrap();
        assert_eq!(curly_d(&cfg), cfg.int(6));
        assert_eq!(curly_d_closed_form(&cfg), cfg.int(6));
        let slice = GradingSlice::new(&cfg, &rat(1, 3)).unwrap();
        assert_eq!(slice.lifts.len(), 3);
        assert_eq!(slice.curly_d(&cfg).unwrap(), cfg.int(6));
        for l in [4u32, 6, 8] {
            let cfg = RootConfig::new(l, 1).unwrap();
            assert_eq!(curly_d(&cfg), curly_d_closed_form(&cfg).scale_int(2));
        }
        for l in [5u32, 7] {
            let cfg = RootConfig::new(l, 1).unwrap();
            assert_eq!(curly_d(&cfg), curly_d_closed_form(&cfg));
        }
    }

    #[test]
    fn b_map_values() {
        let cfg = RootConfig::new(3, 3).unwrap();
        let v = SimpleLabel::new(0, rat(1, 3), 3);
        assert_eq!(b_map(&cfg, &v).unwrap(), cfg.rational(&rat(1, 6)));
        assert_eq!(b_map(&cfg, &v.dual(3)).unwrap(), b_map(&cfg, &v).unwrap());
        assert!(b_map(&cfg, &SimpleLabel::new(0, rat(1, 2), 3)).is_err());
    }

    #[test]
    fn multiplicativity_at_l3() {
        let cfg = RootConfig::new(3, 15).unwrap();
        let mut cache = ModuleCache::new(&cfg);
        for m in 0..2 {
            for n in 0..2 {
                let a = SimpleLabel::new(m, rat(1, 3), 3);
                let b = SimpleLabel::new(n, rat(1, 5), 3);
                let r = verify_multiplicativity(&mut cache, &a, &b).unwrap();
                assert!(r.passed(), "{}", r.summary());
            }
        }
        let a = SimpleLabel::new(1, rat(1, 3), 3);
        let r = verify_tensor_reduction(&mut cache, &a, &SimpleLabel::new(1, rat(1, 5), 3)).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn b_identity_at_l3() {
        let cfg = RootConfig::new(3, 3).unwrap();
        let r = verify_b_identity(&cfg, &rat(1, 3), &rat(1, 3)).unwrap();
        assert!(r.passed(), "{}", r.summary());
        assert_eq!(r.checks().len(), 6);
    }

    #[test]
    fn even_l_needs_all_lifts() {
        let cfg = RootConfig::new(4, 3).unwrap();
        let (g1, g2) = (rat(1, 3), rat(1, 3));
        assert!(verify_b_identity(&cfg, &g1, &g2).unwrap().passed());
        let closed = curly_d_closed_form(&cfg);
        assert!(!verify_b_identity_with(&cfg, &g1, &g2, &closed).unwrap().passed());
    }
}
