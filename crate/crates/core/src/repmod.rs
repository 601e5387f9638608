//! Weight modules over quantum sl(2|1): the typical simples, tensor
//! products, duals, submodules, and the relation checker.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseMat, SparseVec};
use crate::report::{Check, Report};
use crate::scalar::{format_rational, frac, int, mod_rational, serde_rational, CycScalar, Rational, RootConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gen {
    K1,
    K1inv,
    K2,
    K2inv,
    E1,
    E2,
    F1,
    F2,
}

impl Gen {
    pub const ALL: [Gen; 8] = [Gen::K1, Gen::K1inv, Gen::K2, Gen::K2inv, Gen::E1, Gen::E2, Gen::F1, Gen::F2];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_odd(self) -> bool {
        matches!(self, Gen::E2 | Gen::F2)
    }

    pub fn name(self) -> &'static str {
        match self {
            Gen::K1 => "K1",
            Gen::K1inv => "K1inv",
            Gen::K2 => "K2",
            Gen::K2inv => "K2inv",
            Gen::E1 => "E1",
            Gen::E2 => "E2",
            Gen::F1 => "F1",
            Gen::F2 => "F2",
        }
    }
}

/// A word in the generators with a scalar coefficient; the rightmost
/// generator acts first.
#[derive(Clone, Debug)]
pub struct AlgebraWord {
    pub coeff: CycScalar,
    pub gens: Vec<Gen>,
}

impl AlgebraWord {
    pub fn new(coeff: CycScalar, gens: Vec<Gen>) -> Self {
        AlgebraWord { coeff, gens }
    }

    pub fn matrix(&self, m: &WeightModule) -> SparseMat {
        let mut acc = SparseMat::identity(m.dim(), m.cfg().field());
        for g in &self.gens {
            acc = acc.mul(m.action(*g));
        }
        acc.scale(&self.coeff)
    }

    pub fn apply(&self, m: &WeightModule, v: &SparseVec) -> SparseVec {
        let mut out = v.clone();
        for g in self.gens.iter().rev() {
            out = m.action(*g).apply(&out);
        }
        out.scale(&self.coeff)
    }
}

/// The label (n, alpha~) of a typical simple V(n, alpha~), alpha~ in Q mod l.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimpleLabel {
    pub n: u32,
    #[serde(rename = "alphaTilde", with = "serde_rational")]
    pub alpha: Rational,
}

impl SimpleLabel {
    /// Reduces alpha into [0, l).
    pub fn new(n: u32, alpha: Rational, l: u32) -> Self {
        SimpleLabel { n, alpha: mod_rational(&alpha, l as i64) }
    }

    /// The class of alpha in Q/Z.
    pub fn grading(&self) -> Rational {
        frac(&self.alpha)
    }

    /// Generic iff the grading avoids (1/2)Z/Z.
    pub fn is_generic(&self) -> bool {
        is_generic_grading(&self.grading())
    }

    pub fn dual(&self, l: u32) -> SimpleLabel {
        SimpleLabel::new(self.n, -&self.alpha - int(self.n as i64 + 1), l)
    }
}

impl fmt::Display for SimpleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V({},{})", self.n, format_rational(&self.alpha))
    }
}

pub fn is_generic_grading(g: &Rational) -> bool {
    let g = frac(g);
    g != int(0) && g != crate::scalar::rat(1, 2)
}

/// How a module was built; tensor products remember their factors so that
/// partial traces can split them.
#[derive(Clone, Debug)]
pub enum Provenance {
    Trivial,
    Typical { label: SimpleLabel, rep: Rational },
    Tensor(Arc<WeightModule>, Arc<WeightModule>),
    Dual(Arc<WeightModule>),
    Submodule(String),
    Custom(String),
}

/// A finite-dimensional Z2-graded weight module with explicit generator matrices.
#[derive(Clone)]
pub struct WeightModule {
    cfg: RootConfig,
    parity: Vec<u8>,
    h_weights: Vec<(Rational, Rational)>,
    action: Vec<SparseMat>,
    provenance: Provenance,
    name: String,
}

impl fmt::Debug for WeightModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightModule({}, dim {})", self.name, self.dim())
    }
}

impl WeightModule {
    /// Assembles a module from raw data. K-actions are derived from the h-weights.
    pub fn from_parts(
        cfg: &RootConfig,
        parity: Vec<u8>,
        h_weights: Vec<(Rational, Rational)>,
        e1: SparseMat,
        e2: SparseMat,
        f1: SparseMat,
        f2: SparseMat,
        provenance: Provenance,
        name: String,
    ) -> Result<Self> {
        let dim = parity.len();
        if h_weights.len() != dim || [&e1, &e2, &f1, &f2].iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::Precondition("inconsistent module dimensions".into()));
        }
        let mut k = Vec::with_capacity(4);
        for (which, sign) in [(0usize, 1i64), (0, -1), (1, 1), (1, -1)] {
            let d = h_weights
                .iter()
                .map(|w| {
                    let e = if which == 0 { &w.0 } else { &w.1 };
                    cfg.q_power(&(e * int(sign)))
                })
                .collect::<Result<Vec<_>>>()?;
            k.push(SparseMat::diagonal(d, cfg.field()));
        }
        let mut action = k;
        action.extend([e1, e2, f1, f2]);
        Ok(WeightModule { cfg: cfg.clone(), parity, h_weights, action, provenance, name })
    }

    pub fn cfg(&self) -> &RootConfig {
        &self.cfg
    }

    pub fn dim(&self) -> usize {
        self.parity.len()
    }

    pub fn parity(&self, i: usize) -> u8 {
        self.parity[i]
    }

    pub fn parities(&self) -> &[u8] {
        &self.parity
    }

    pub fn h_weight(&self, i: usize) -> &(Rational, Rational) {
        &self.h_weights[i]
    }

    pub fn h_weights(&self) -> &[(Rational, Rational)] {
        &self.h_weights
    }

    pub fn action(&self, g: Gen) -> &SparseMat {
        &self.action[g.index()]
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The label and representative exponent if this is a typical simple.
    pub fn typical_label(&self) -> Option<(&SimpleLabel, &Rational)> {
        match &self.provenance {
            Provenance::Typical { label, rep } => Some((label, rep)),
            _ => None,
        }
    }

    /// The two tensor factors if this module is a tensor product.
    pub fn factors(&self) -> Option<(&Arc<WeightModule>, &Arc<WeightModule>)> {
        match &self.provenance {
            Provenance::Tensor(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// The Z/Z grading g with K2^l = q^{l g}, if all weights agree on it.
    pub fn grading(&self) -> Option<Rational> {
        let mut it = self.h_weights.iter().map(|w| frac(&w.1));
        let g = it.next()?;
        it.all(|x| x == g).then_some(g)
    }

    /// Indices whose K-eigenvalues match q^{k1}, q^{k2} (exponents compared mod l).
    pub fn weight_indices(&self, k1: &Rational, k2: &Rational) -> Vec<usize> {
        let l = self.cfg.l() as i64;
        let (a, b) = (mod_rational(k1, l), mod_rational(k2, l));
        (0..self.dim())
            .filter(|&i| mod_rational(&self.h_weights[i].0, l) == a && mod_rational(&self.h_weights[i].1, l) == b)
            .collect()
    }

    /// Distinct K-weights (h-weights reduced mod l) in basis order of first appearance.
    pub fn weights_mod_l(&self) -> Vec<(Rational, Rational)> {
        let l = self.cfg.l() as i64;
        let mut out: Vec<(Rational, Rational)> = Vec::new();
        for w in &self.h_weights {
            let r = (mod_rational(&w.0, l), mod_rational(&w.1, l));
            if !out.contains(&r) {
                out.push(r);
            }
        }
        out
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Serializes to JSON: dim, parities, hWeights as "a/b" pairs and the
    /// eight matrices row-major.
    pub fn to_json(&self) -> serde_json::Value {
        let mats: serde_json::Map<String, serde_json::Value> = Gen::ALL
            .iter()
            .map(|g| {
                let rows: Vec<Vec<serde_json::Value>> = self
                    .action(*g)
                    .to_dense()
                    .iter()
                    .map(|r| r.iter().map(|x| x.to_json()).collect())
                    .collect();
                (g.name().to_string(), serde_json::json!(rows))
            })
            .collect();
        serde_json::json!({
            "provenance": self.name,
            "dim": self.dim(),
            "parities": self.parity,
            "hWeights": self.h_weights.iter().map(|(a, b)| [format_rational(a), format_rational(b)]).collect::<Vec<_>>(),
            "action": mats,
        })
    }
}

/// The trivial module C.
pub fn trivial(cfg: &RootConfig) -> WeightModule {
    let z = || SparseMat::zeros(1, 1, cfg.field());
    WeightModule::from_parts(
        cfg,
        vec![0],
        vec![(int(0), int(0))],
        z(),
        z(),
        z(),
        z(),
        Provenance::Trivial,
        "C".into(),
    )
    .expect("trivial module")
}

/// Index of w_{rho,sigma,p} in the lexicographic basis of V(n, .).
pub fn typical_index(n: u32, rho: u32, sigma: u32, p: u32) -> usize {
    let m = n as usize + 1;
    rho as usize * 2 * m + sigma as usize * m + p as usize
}

/// (rho, sigma, p) of a basis index of V(n, .).
pub fn typical_triple(n: u32, idx: usize) -> (u32, u32, u32) {
    let m = n as usize + 1;
    ((idx / (2 * m)) as u32, ((idx / m) % 2) as u32, (idx % m) as u32)
}

/// The simple V(n, alpha~) with h-weights taken from the canonical representative in [0, l).
pub fn build_typical(cfg: &RootConfig, label: &SimpleLabel) -> Result<WeightModule> {
    build_typical_rep(cfg, label.n, &label.alpha)
}

/// V^H(n, alpha): the simple with h-weights built from the given representative alpha.
pub fn build_typical_rep(cfg: &RootConfig, n: u32, alpha: &Rational) -> Result<WeightModule> {
    let l = cfg.l();
    if n > cfg.l_prime() - 1 {
        return Err(Error::Precondition(format!("n = {n} exceeds l' - 1 = {}", cfg.l_prime() - 1)));
    }
    cfg.check_exponent(alpha)?;
    let label = SimpleLabel::new(n, alpha.clone(), l);
    let qa = cfg.qint(alpha)?;
    if qa.is_zero() {
        return Err(Error::NonSimple(format!("[alpha] vanishes for alpha = {}", format_rational(alpha))));
    }
    let top = alpha + int(n as i64 + 1);
    if cfg.qint(&top)?.is_zero() {
        return Err(Error::NonSimple(format!("[alpha + n + 1] vanishes for alpha = {}, n = {n}", format_rational(alpha))));
    }
    let dim = 4 * (n as usize + 1);
    let idx = |r: i64, s: i64, p: i64| -> Option<usize> {
        ((0..=1).contains(&r) && (0..=1).contains(&s) && (0..=n as i64).contains(&p))
            .then(|| typical_index(n, r as u32, s as u32, p as u32))
    };
    let (mut e1, mut e2, mut f1, mut f2) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let mut parity = Vec::with_capacity(dim);
    let mut hw = Vec::with_capacity(dim);
    let nn = n as i64;
    for col in 0..dim {
        let (r, s, p) = typical_triple(n, col);
        let (r, s, p) = (r as i64, s as i64, p as i64);
        parity.push(((r + s) % 2) as u8);
        hw.push((int(r - s + nn - 2 * p), alpha + int(s + p)));
        // F1 w = q^{s-r} w_{r,s,p+1} - r(1-s) q^{-r} w_{r-1,s+1,p}
        if let Some(i) = idx(r, s, p + 1) {
            f1.push((i, col, cfg.q_int(s - r)));
        }
        if r == 1 && s == 0 {
            if let Some(i) = idx(0, 1, p) {
                f1.push((i, col, -cfg.q_int(-1)));
            }
        }
        // F2 w = (1-r) w_{r+1,s,p}
        if r == 0 {
            if let Some(i) = idx(1, s, p) {
                f2.push((i, col, cfg.one()));
            }
        }
        // E1 w = -s(1-r) q^{n-2p+1} w_{r+1,s-1,p} + [p][n-p+1] w_{r,s,p-1}
        if s == 1 && r == 0 {
            if let Some(i) = idx(1, 0, p) {
                e1.push((i, col, -cfg.q_int(nn - 2 * p + 1)));
            }
        }
        if let Some(i) = idx(r, s, p - 1) {
            let c = cfg.qint_int(p) * cfg.qint_int(nn - p + 1);
            e1.push((i, col, c));
        }
        // E2 w = r [alpha+p+s] w_{r-1,s,p} + s (-1)^r q^{-alpha-p} w_{r,s-1,p+1}
        if r == 1 {
            if let Some(i) = idx(0, s, p) {
                e2.push((i, col, cfg.qint(&(alpha + int(p + s)))?));
            }
        }
        if s == 1 {
            if let Some(i) = idx(r, 0, p + 1) {
                let c = cfg.q_power(&(-alpha - int(p)))?;
                e2.push((i, col, if r == 1 { -c } else { c }));
            }
        }
    }
    let f = cfg.field();
    let mk = |t: Vec<(usize, usize, CycScalar)>| SparseMat::from_triplets(dim, dim, t, f);
    let name = format!("V({},{})", n, format_rational(alpha));
    WeightModule::from_parts(
        cfg,
        parity,
        hw,
        mk(e1),
        mk(e2),
        mk(f1),
        mk(f2),
        Provenance::Typical { label, rep: alpha.clone() },
        name,
    )
}

/// Rebuilds a typical module with a different representative of the same class.
pub fn with_representative(m: &WeightModule, rep: &Rational) -> Result<WeightModule> {
    let (label, _) = m
        .typical_label()
        .ok_or_else(|| Error::Precondition("representative change needs a typical module".into()))?;
    let l = m.cfg().l();
    if mod_rational(rep, l as i64) != label.alpha {
        return Err(Error::Precondition(format!(
            "representative {} is not congruent to {} mod {l}",
            format_rational(rep),
            format_rational(&label.alpha)
        )));
    }
    build_typical_rep(m.cfg(), label.n, rep)
}

fn tensor_action(a: &WeightModule, b: &WeightModule, g: Gen) -> SparseMat {
    // (x (x) y)(v (x) w) = (-1)^{|y||v|} xv (x) yw
    let pa = a.parities();
    let koszul = |y_odd: bool| move |j: usize, _m: usize| y_odd && pa[j] == 1;
    let ida = SparseMat::identity(a.dim(), a.cfg().field());
    let idb = SparseMat::identity(b.dim(), b.cfg().field());
    match g {
        Gen::K1 | Gen::K1inv | Gen::K2 | Gen::K2inv => SparseMat::kron(a.action(g), b.action(g)),
        Gen::E1 | Gen::E2 => {
            let kinv = if g == Gen::E1 { Gen::K1inv } else { Gen::K2inv };
            let left = SparseMat::kron(a.action(g), &idb);
            let right = SparseMat::kron_signed(a.action(kinv), b.action(g), koszul(g.is_odd()));
            left.add(&right)
        }
        Gen::F1 | Gen::F2 => {
            let k = if g == Gen::F1 { Gen::K1 } else { Gen::K2 };
            let left = SparseMat::kron(a.action(g), b.action(k));
            let right = SparseMat::kron_signed(&ida, b.action(g), koszul(g.is_odd()));
            left.add(&right)
        }
    }
}

/// The tensor product via the coproduct, basis ordered as pairs (i, j) -> i * dim(b) + j.
pub fn tensor(a: &Arc<WeightModule>, b: &Arc<WeightModule>) -> Result<WeightModule> {
    if a.cfg() != b.cfg() {
        return Err(Error::Config("tensor factors use different root configurations".into()));
    }
    let cfg = a.cfg();
    let mut parity = Vec::with_capacity(a.dim() * b.dim());
    let mut hw = Vec::with_capacity(a.dim() * b.dim());
    for i in 0..a.dim() {
        for j in 0..b.dim() {
            parity.push((a.parity(i) + b.parity(j)) % 2);
            let (x, y) = (a.h_weight(i), b.h_weight(j));
            hw.push((&x.0 + &y.0, &x.1 + &y.1));
        }
    }
    let action: Vec<SparseMat> = Gen::ALL.iter().map(|g| tensor_action(a, b, *g)).collect();
    let name = format!("{}⊗{}", wrap(a.name()), wrap(b.name()));
    Ok(WeightModule {
        cfg: cfg.clone(),
        parity,
        h_weights: hw,
        action,
        provenance: Provenance::Tensor(a.clone(), b.clone()),
        name,
    })
}

fn wrap(s: &str) -> String {
    if s.contains('⊗') {
        format!("({s})")
    } else {
        s.to_string()
    }
}

/// Tensor product of owned modules.
pub fn tensor_owned(a: WeightModule, b: WeightModule) -> Result<WeightModule> {
    tensor(&Arc::new(a), &Arc::new(b))
}

/// Matrix of the antipode image S(g) acting on `m`.
fn antipode_matrix(m: &WeightModule, g: Gen) -> SparseMat {
    let minus = -m.cfg().one();
    match g {
        Gen::K1 => m.action(Gen::K1inv).clone(),
        Gen::K1inv => m.action(Gen::K1).clone(),
        Gen::K2 => m.action(Gen::K2inv).clone(),
        Gen::K2inv => m.action(Gen::K2).clone(),
        Gen::E1 => m.action(Gen::K1).mul(m.action(Gen::E1)).scale(&minus),
        Gen::E2 => m.action(Gen::K2).mul(m.action(Gen::E2)).scale(&minus),
        Gen::F1 => m.action(Gen::F1).mul(m.action(Gen::K1inv)).scale(&minus),
        Gen::F2 => m.action(Gen::F2).mul(m.action(Gen::K2inv)).scale(&minus),
    }
}

/// The dual module on the dual basis, with (x.f)(v) = (-1)^{|x||f|} f(S(x) v).
pub fn dual(m: &Arc<WeightModule>) -> WeightModule {
    let parity = m.parities().to_vec();
    let hw = m.h_weights().iter().map(|(a, b)| (-a, -b)).collect();
    let action = Gen::ALL
        .iter()
        .map(|g| {
            let st = antipode_matrix(m, *g).transpose();
            if !g.is_odd() {
                return st;
            }
            let cols = st
                .columns()
                .iter()
                .enumerate()
                .map(|(j, c)| if parity[j] == 1 { c.neg() } else { c.clone() })
                .collect();
            SparseMat::from_columns(m.dim(), cols, m.cfg().field())
        })
        .collect();
    WeightModule {
        cfg: m.cfg().clone(),
        parity,
        h_weights: hw,
        action,
        provenance: Provenance::Dual(m.clone()),
        name: format!("dual({})", m.name()),
    }
}

/// Closes `v` under the generators; returns the echelon basis (as rows of
/// the basis matrix) and the induced module on the span.
pub fn submodule_generated(m: &WeightModule, v: &SparseVec) -> Result<(Vec<SparseVec>, WeightModule)> {
    submodule_generated_by(m, std::slice::from_ref(v))
}

pub fn submodule_generated_by(m: &WeightModule, gens: &[SparseVec]) -> Result<(Vec<SparseVec>, WeightModule)> {
    if gens.iter().all(|g| g.is_zero()) {
        return Err(Error::Precondition("cannot generate a submodule from the zero vector".into()));
    }
    let mut ech = Echelon::new(m.dim());
    let mut queue: Vec<SparseVec> = Vec::new();
    // Split generators into weight components so the span is K-stable.
    for g in gens {
        for comp in weight_components(m, g) {
            if ech.insert(comp.clone()) {
                queue.push(comp);
            }
        }
    }
    while let Some(v) = queue.pop() {
        for g in [Gen::E1, Gen::E2, Gen::F1, Gen::F2] {
            let w = m.action(g).apply(&v);
            if !w.is_zero() && ech.insert(w.clone()) {
                queue.push(w);
            }
        }
    }
    let basis = ech.rows();
    let pivots = ech.pivots();
    let d = basis.len();
    let f = m.cfg().field();
    // Induced action: coordinates of x.b_j are its entries at pivot columns.
    let induced = |g: Gen| -> Result<SparseMat> {
        let cols = basis
            .iter()
            .map(|b| {
                let img = m.action(g).apply(b);
                let coords = ech
                    .coordinates(&img)
                    .ok_or_else(|| Error::Solver("span is not stable under the action".into()))?;
                Ok(SparseVec::from_pairs(coords))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SparseMat::from_columns(d, cols, f))
    };
    let mut parity = Vec::with_capacity(d);
    let mut hw = Vec::with_capacity(d);
    for (b, p) in basis.iter().zip(&pivots) {
        let par = m.parity(*p);
        let w = m.h_weight(*p).clone();
        if b.iter().any(|(i, _)| m.parity(*i) != par || m.h_weight(*i) != &w) {
            return Err(Error::Solver("submodule basis vector is not homogeneous".into()));
        }
        parity.push(par);
        hw.push(w);
    }
    let sub = WeightModule::from_parts(
        m.cfg(),
        parity,
        hw,
        induced(Gen::E1)?,
        induced(Gen::E2)?,
        induced(Gen::F1)?,
        induced(Gen::F2)?,
        Provenance::Submodule(m.name().to_string()),
        format!("sub({})", m.name()),
    )?;
    Ok((basis, sub))
}

/// Splits a vector into components with constant parity and h-weight.
pub fn weight_components(m: &WeightModule, v: &SparseVec) -> Vec<SparseVec> {
    let mut groups: Vec<((u8, (Rational, Rational)), Vec<(usize, CycScalar)>)> = Vec::new();
    for (i, x) in v.iter() {
        let key = (m.parity(*i), m.h_weight(*i).clone());
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, g)) => g.push((*i, x.clone())),
            None => groups.push((key, vec![(*i, x.clone())])),
        }
    }
    groups.into_iter().map(|(_, g)| SparseVec::from_pairs(g)).collect()
}

/// Checks every defining relation as an exact matrix identity.
pub fn verify_relations(m: &WeightModule) -> Report {
    let cfg = m.cfg();
    let f = cfg.field();
    let a = |g: Gen| m.action(g);
    let id = SparseMat::identity(m.dim(), f);
    let q = cfg.q_int(1);
    let qi = cfg.q_int(-1);
    let inv_qq = (&q - &qi).inv().expect("q - 1/q is nonzero for l >= 3");
    let mut rep = Report::new(format!("relations {}", m.name()));
    let mut push = |id: &str, ok: bool| rep.push(Check::new(id, ok, serde_json::Value::Null));
    let comm = |x: &SparseMat, y: &SparseMat, anti: bool| {
        let xy = x.mul(y);
        let yx = y.mul(x);
        if anti {
            xy.add(&yx)
        } else {
            xy.sub(&yx)
        }
    };
    push("K1*K1inv=1", a(Gen::K1).mul(a(Gen::K1inv)) == id);
    push("K1inv*K1=1", a(Gen::K1inv).mul(a(Gen::K1)) == id);
    push("K2*K2inv=1", a(Gen::K2).mul(a(Gen::K2inv)) == id);
    push("K2inv*K2=1", a(Gen::K2inv).mul(a(Gen::K2)) == id);
    push("K1K2=K2K1", comm(a(Gen::K1), a(Gen::K2), false).is_zero());
    push("K diagonal with q^h", {
        let mut ok = a(Gen::K1).is_diagonal() && a(Gen::K2).is_diagonal();
        for i in 0..m.dim() {
            let (h1, h2) = m.h_weight(i);
            ok &= cfg.q_power(h1).map(|v| v == a(Gen::K1).get(i, i)).unwrap_or(false);
            ok &= cfg.q_power(h2).map(|v| v == a(Gen::K2).get(i, i)).unwrap_or(false);
        }
        ok
    });
    // Cartan matrix a11 = 2, a12 = a21 = -1, a22 = 0.
    let cartan = [[2i64, -1], [-1, 0]];
    let ks = [(Gen::K1, Gen::K1inv), (Gen::K2, Gen::K2inv)];
    let es = [Gen::E1, Gen::E2];
    let fs = [Gen::F1, Gen::F2];
    for i in 0..2 {
        for j in 0..2 {
            let (k, ki) = ks[i];
            let lhs = a(k).mul(a(es[j])).mul(a(ki));
            push(&format!("K{}E{}K{}^-1", i + 1, j + 1, i + 1), lhs == a(es[j]).scale(&cfg.q_int(cartan[i][j])));
            let lhs = a(k).mul(a(fs[j])).mul(a(ki));
            push(&format!("K{}F{}K{}^-1", i + 1, j + 1, i + 1), lhs == a(fs[j]).scale(&cfg.q_int(-cartan[i][j])));
        }
    }
    let rhs1 = a(Gen::K1).sub(a(Gen::K1inv)).scale(&inv_qq);
    let rhs2 = a(Gen::K2).sub(a(Gen::K2inv)).scale(&inv_qq);
    push("[E1,F1]", comm(a(Gen::E1), a(Gen::F1), false) == rhs1);
    push("[E2,F2]", comm(a(Gen::E2), a(Gen::F2), true) == rhs2);
    push("[E1,F2]", comm(a(Gen::E1), a(Gen::F2), false).is_zero());
    push("[E2,F1]", comm(a(Gen::E2), a(Gen::F1), false).is_zero());
    let qq = &q + &qi;
    let serre = |x: &SparseMat, y: &SparseMat| {
        let x2 = x.mul(x);
        x2.mul(y).sub(&x.mul(y).mul(x).scale(&qq)).add(&y.mul(&x2))
    };
    push("Serre E", serre(a(Gen::E1), a(Gen::E2)).is_zero());
    push("Serre F", serre(a(Gen::F1), a(Gen::F2)).is_zero());
    push("E2^2=0", a(Gen::E2).mul(a(Gen::E2)).is_zero());
    push("F2^2=0", a(Gen::F2).mul(a(Gen::F2)).is_zero());
    for g in Gen::ALL {
        let want = g.is_odd() as u8;
        let ok = a(g)
            .columns()
            .iter()
            .enumerate()
            .all(|(j, c)| c.iter().all(|(i, _)| (m.parity(*i) + m.parity(j)) % 2 == want));
        push(&format!("parity of {}", g.name()), ok);
    }
    rep
}

/// Asserts E1^{l'} = F1^{l'} = 0.
pub fn nilpotency_check(m: &WeightModule) -> Report {
    let lp = m.cfg().l_prime();
    let mut rep = Report::new(format!("nilpotency {}", m.name()));
    for g in [Gen::E1, Gen::F1] {
        let mut p = m.action(g).clone();
        for _ in 1..lp {
            p = p.mul(m.action(g));
        }
        rep.push(Check::new(&format!("{}^{lp}=0", g.name()), p.is_zero(), serde_json::Value::Null));
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn typical(l: u32, b: u64, n: u32, a: Rational) -> WeightModule {
        let cfg = RootConfig::new(l, b).unwrap();
        build_typical(&cfg, &SimpleLabel::new(n, a, l)).unwrap()
    }

    #[test]
    fn small_table_entries() {
        let m = typical(5, 3, 0, rat(1, 3));
        let cfg = m.cfg().clone();
        assert_eq!(m.dim(), 4);
        let k2: Vec<CycScalar> = (0..4).map(|i| m.action(Gen::K2).get(i, i)).collect();
        let a = cfg.q_power(&rat(1, 3)).unwrap();
        let b = cfg.q_power(&rat(4, 3)).unwrap();
        // basis order w00, w01, w10, w11
        assert_eq!(k2, vec![a.clone(), b.clone(), a, b]);
        let e2 = m.action(Gen::E2).get(typical_index(0, 0, 0, 0), typical_index(0, 1, 0, 0));
        assert_eq!(e2, cfg.qint(&rat(1, 3)).unwrap());
    }

    #[test]
    fn e1_on_n1() {
        let m = typical(3, 3, 1, rat(1, 3));
        let v = m.action(Gen::E1).get(typical_index(1, 0, 0, 0), typical_index(1, 0, 0, 1));
        assert!(v.is_one());
    }

    #[test]
    fn relations_hold() {
        let m = typical(5, 3, 2, rat(1, 3));
        let rep = verify_relations(&m);
        assert!(rep.passed(), "{}", rep.summary());
        assert!(rep.checks().len() >= 15);
        assert!(nilpotency_check(&m).passed());
    }

    #[test]
    fn mutation_breaks_relation() {
        let m = typical(5, 3, 1, rat(1, 3));
        let z = SparseMat::zeros(m.dim(), m.dim(), m.cfg().field());
        let broken = WeightModule::from_parts(
            m.cfg(),
            m.parities().to_vec(),
            m.h_weights().to_vec(),
            m.action(Gen::E1).clone(),
            z,
            m.action(Gen::F1).clone(),
            m.action(Gen::F2).clone(),
            Provenance::Custom("broken".into()),
            "broken".into(),
        )
        .unwrap();
        let rep = verify_relations(&broken);
        assert!(!rep.passed());
        assert!(rep.checks().iter().any(|c| c.id == "[E2,F2]" && !c.pass));
    }

    #[test]
    fn trivial_relations() {
        let cfg = RootConfig::new(4, 1).unwrap();
        assert!(verify_relations(&trivial(&cfg)).passed());
    }

    #[test]
    fn nonsimple_rejected() {
        let cfg = RootConfig::new(4, 2).unwrap();
        // alpha = 2 = l/2 makes [alpha] vanish
        assert!(matches!(build_typical(&cfg, &SimpleLabel::new(0, int(2), 4)), Err(Error::NonSimple(_))));
        // alpha + n + 1 = 2
        assert!(matches!(build_typical(&cfg, &SimpleLabel::new(0, int(1), 4)), Err(Error::NonSimple(_))));
    }

    #[test]
    fn dual_and_tensor_relations() {
        let cfg = RootConfig::new(5, 15).unwrap();
        let a = Arc::new(build_typical(&cfg, &SimpleLabel::new(0, rat(1, 3), 5)).unwrap());
        let b = Arc::new(build_typical(&cfg, &SimpleLabel::new(1, rat(2, 5), 5)).unwrap());
        let d = dual(&a);
        assert!(verify_relations(&d).passed(), "{}", verify_relations(&d).summary());
        let t = tensor(&a, &b).unwrap();
        assert_eq!(t.dim(), 32);
        let rep = verify_relations(&t);
        assert!(rep.passed(), "{}", rep.summary());
        assert!(nilpotency_check(&t).passed());
    }
}
