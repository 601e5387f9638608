//! Intertwiner spaces, highest-weight vectors, isotypic decomposition,
//! duality morphisms and the negligible quotient.
//!
//! Morphisms are homogeneous of either parity. An odd intertwiner f obeys
//! f(x v) = (-1)^{|x|} x f(v); the plain Hom of the category is the even part.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseMat, SparseVec};
use crate::mtrace;
use crate::repmod::{build_typical, trivial, Gen, Provenance, SimpleLabel, WeightModule};
use crate::scalar::{format_rational, frac, int, mod_rational, rat, CycScalar, Rational};

const RAISING_LOWERING: [Gen; 4] = [Gen::E1, Gen::E2, Gen::F1, Gen::F2];

/// A homogeneous linear map between modules; `matrix` is target.dim x source.dim.
#[derive(Clone, Debug)]
pub struct Morphism {
    source: Arc<WeightModule>,
    target: Arc<WeightModule>,
    matrix: SparseMat,
    parity: u8,
}

impl Morphism {
    pub fn new(source: Arc<WeightModule>, target: Arc<WeightModule>, matrix: SparseMat, parity: u8) -> Result<Self> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::Precondition(format!(
                "matrix is {}x{} but the morphism {} -> {} needs {}x{}",
                matrix.rows(),
                matrix.cols(),
                source.name(),
                target.name(),
                target.dim(),
                source.dim()
            )));
        }
        Ok(Morphism { source, target, matrix, parity: parity % 2 })
    }

    pub fn even(source: Arc<WeightModule>, target: Arc<WeightModule>, matrix: SparseMat) -> Result<Self> {
        Self::new(source, target, matrix, 0)
    }

    pub fn identity(m: &Arc<WeightModule>) -> Self {
        Morphism { source: m.clone(), target: m.clone(), matrix: SparseMat::identity(m.dim(), m.cfg().field()), parity: 0 }
    }

    pub fn zero(source: &Arc<WeightModule>, target: &Arc<WeightModule>, parity: u8) -> Self {
        let matrix = SparseMat::zeros(target.dim(), source.dim(), source.cfg().field());
        Morphism { source: source.clone(), target: target.clone(), matrix, parity }
    }

    pub fn source(&self) -> &Arc<WeightModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<WeightModule> {
        &self.target
    }

    pub fn matrix(&self) -> &SparseMat {
        &self.matrix
    }

    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        self.matrix.apply(v)
    }

    /// self after `first`.
    pub fn compose(&self, first: &Morphism) -> Result<Morphism> {
        if first.target.dim() != self.source.dim() {
            return Err(Error::Precondition(format!(
                "cannot compose {} -> {} after {} -> {}",
                self.source.name(),
                self.target.name(),
                first.source.name(),
                first.target.name()
            )));
        }
        Ok(Morphism {
            source: first.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&first.matrix),
            parity: (self.parity + first.parity) % 2,
        })
    }

    pub fn scale(&self, c: &CycScalar) -> Morphism {
        Morphism { matrix: self.matrix.scale(c), ..self.clone() }
    }

    /// self + c * other; both must share source, target and parity.
    pub fn axpy(&self, c: &CycScalar, other: &Morphism) -> Result<Morphism> {
        if self.parity != other.parity || self.matrix.rows() != other.matrix.rows() || self.matrix.cols() != other.matrix.cols() {
            return Err(Error::Precondition("linear combination of incompatible morphisms".into()));
        }
        Ok(Morphism { matrix: self.matrix.axpy(c, &other.matrix), ..self.clone() })
    }

    /// The super tensor product f (x) g on the given product modules:
    /// (f (x) g)(v (x) w) = (-1)^{|g||v|} f v (x) g w.
    pub fn tensor(f: &Morphism, g: &Morphism, source: Arc<WeightModule>, target: Arc<WeightModule>) -> Result<Morphism> {
        let pv = f.source.parities().to_vec();
        let g_odd = g.parity == 1;
        let matrix = SparseMat::kron_signed(&f.matrix, &g.matrix, |j, _| g_odd && pv[j] == 1);
        Morphism::new(source, target, matrix, f.parity + g.parity)
    }

    /// Whether the matrix is parity-homogeneous and (super)commutes with every generator.
    pub fn is_intertwiner(&self) -> bool {
        is_intertwining(&self.matrix, &self.source, &self.target, self.parity)
    }

    /// The scalar c with self = c Id, for an endomorphism of a simple module.
    pub fn scalar(&self) -> Result<CycScalar> {
        if self.source.dim() != self.target.dim() {
            return Err(Error::Precondition("scalar of a non-endomorphism".into()));
        }
        let c = self.matrix.get(0, 0);
        let id = SparseMat::identity(self.source.dim(), self.source.cfg().field());
        if self.matrix != id.scale(&c) {
            return Err(Error::Solver(format!("endomorphism of {} is not scalar", self.source.name())));
        }
        Ok(c)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<serde_json::Value>> =
            self.matrix.to_dense().iter().map(|r| r.iter().map(|x| x.to_json()).collect()).collect();
        serde_json::json!({
            "source": self.source.name(),
            "target": self.target.name(),
            "parity": self.parity,
            "matrix": rows,
        })
    }
}

fn sign_for(parity: u8, g: Gen) -> bool {
    parity == 1 && g.is_odd()
}

fn is_intertwining(m: &SparseMat, src: &WeightModule, tgt: &WeightModule, parity: u8) -> bool {
    let homogeneous = m
        .columns()
        .iter()
        .enumerate()
        .all(|(j, c)| c.iter().all(|(i, _)| (tgt.parity(*i) + src.parity(j)) % 2 == parity));
    if !homogeneous {
        return false;
    }
    Gen::ALL.iter().all(|g| {
        let lhs = m.mul(src.action(*g));
        let rhs = tgt.action(*g).mul(m);
        if sign_for(parity, *g) {
            lhs.add(&rhs).is_zero()
        } else {
            lhs == rhs
        }
    })
}

/// A basis of the space of intertwiners of one parity.
#[derive(Clone, Debug)]
pub struct HomBasis {
    pub source: Arc<WeightModule>,
    pub target: Arc<WeightModule>,
    pub parity: u8,
    pub morphisms: Vec<Morphism>,
}

impl HomBasis {
    pub fn dim(&self) -> usize {
        self.morphisms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.morphisms.is_empty()
    }
}

/// Basis of the even intertwiners M1 -> M2.
pub fn hom_space(m1: &Arc<WeightModule>, m2: &Arc<WeightModule>) -> Result<HomBasis> {
    hom_space_parity(m1, m2, 0)
}

/// Even intertwiners followed by odd ones.
pub fn hom_space_super(m1: &Arc<WeightModule>, m2: &Arc<WeightModule>) -> Result<Vec<Morphism>> {
    let mut out = hom_space_parity(m1, m2, 0)?.morphisms;
    out.extend(hom_space_parity(m1, m2, 1)?.morphisms);
    Ok(out)
}

/// Basis of intertwiners of the given parity, in canonical echelon form of
/// the column-major flattened matrices.
pub fn hom_space_parity(m1: &Arc<WeightModule>, m2: &Arc<WeightModule>, parity: u8) -> Result<HomBasis> {
    if m1.cfg() != m2.cfg() {
        return Err(Error::Config("hom space between modules with different root configurations".into()));
    }
    let parity = parity % 2;
    let mats = if m1.typical_label().is_some() {
        solve_from_cyclic_source(m1, m2, parity)?
    } else if m2.typical_label().is_some() {
        solve_into_cyclic_target(m1, m2, parity)?
    } else {
        solve_blockwise(m1, m2, parity)
    };
    let morphisms = canonical_basis(mats, m1.dim(), m2.dim(), m1.cfg().field())
        .into_iter()
        .map(|m| Morphism { source: m1.clone(), target: m2.clone(), matrix: m, parity })
        .collect();
    Ok(HomBasis { source: m1.clone(), target: m2.clone(), parity, morphisms })
}

fn flatten(m: &SparseMat) -> SparseVec {
    let rows = m.rows();
    SparseVec::from_pairs(
        m.columns().iter().enumerate().flat_map(|(j, c)| c.iter().map(move |(i, v)| (j * rows + i, v.clone()))),
    )
}

fn unflatten(v: &SparseVec, rows: usize, cols: usize, field: &Arc<crate::scalar::CycloField>) -> SparseMat {
    SparseMat::from_triplets(rows, cols, v.iter().map(|(k, x)| (k % rows, k / rows, x.clone())), field)
}

fn canonical_basis(mats: Vec<SparseMat>, src_dim: usize, tgt_dim: usize, field: &Arc<crate::scalar::CycloField>) -> Vec<SparseMat> {
    let ech = Echelon::from_rows(mats.iter().map(flatten), src_dim * tgt_dim);
    ech.rows().iter().map(|v| unflatten(v, tgt_dim, src_dim, field)).collect()
}

/// Solves sum_t c_t R_t = 0 where R_t are residual vectors; returns the kernel in c.
fn combination_kernel(residuals: &[SparseVec], field: &Arc<crate::scalar::CycloField>) -> Vec<SparseVec> {
    let mut rows: HashMap<usize, Vec<(usize, CycScalar)>> = HashMap::new();
    for (t, r) in residuals.iter().enumerate() {
        for (k, x) in r.iter() {
            rows.entry(*k).or_default().push((t, x.clone()));
        }
    }
    let mut keys: Vec<usize> = rows.keys().copied().collect();
    keys.sort_unstable();
    let rows = keys.into_iter().map(|k| SparseVec::from_pairs(rows.remove(&k).unwrap()));
    crate::linalg::null_space(rows, residuals.len(), field)
}

/// Flattened residual f x1 - (+/-) x2 f over the raising and lowering generators.
fn intertwining_residual(m: &SparseMat, src: &WeightModule, tgt: &WeightModule, parity: u8) -> SparseVec {
    let block = src.dim() * tgt.dim();
    let mut pairs = Vec::new();
    for (gi, g) in RAISING_LOWERING.iter().enumerate() {
        let lhs = m.mul(src.action(*g));
        let rhs = tgt.action(*g).mul(m);
        let r = if sign_for(parity, *g) { lhs.add(&rhs) } else { lhs.sub(&rhs) };
        pairs.extend(flatten(&r).iter().map(|(k, x)| (gi * block + k, x.clone())));
    }
    SparseVec::from_pairs(pairs)
}

fn combine(mats: &[SparseMat], coeffs: &SparseVec, rows: usize, cols: usize, field: &Arc<crate::scalar::CycloField>) -> SparseMat {
    let mut acc = SparseMat::zeros(rows, cols, field);
    for (t, c) in coeffs.iter() {
        acc = acc.axpy(c, &mats[*t]);
    }
    acc
}

/// Basis of {v : E1 v = E2 v = 0} inside the K-weight space of (k1, k2)
/// restricted to basis vectors of the given parity.
pub fn highest_weight_space(m: &WeightModule, k1: &Rational, k2: &Rational, parity: u8) -> Vec<SparseVec> {
    let support: Vec<usize> = m.weight_indices(k1, k2).into_iter().filter(|i| m.parity(*i) == parity).collect();
    if support.is_empty() {
        return Vec::new();
    }
    let field = m.cfg().field();
    let mut rows: HashMap<(usize, usize), Vec<(usize, CycScalar)>> = HashMap::new();
    for (gi, g) in [Gen::E1, Gen::E2].iter().enumerate() {
        let a = m.action(*g);
        for (local, s) in support.iter().enumerate() {
            for (i, x) in a.col(*s).iter() {
                rows.entry((gi, *i)).or_default().push((local, x.clone()));
            }
        }
    }
    let mut keys: Vec<(usize, usize)> = rows.keys().copied().collect();
    keys.sort_unstable();
    let eqs = keys.into_iter().map(|k| SparseVec::from_pairs(rows.remove(&k).unwrap()));
    crate::linalg::null_space(eqs, support.len(), field)
        .into_iter()
        .map(|v| v.map_indices(|l| support[l]))
        .collect()
}

/// Highest-weight vectors of weight (q^k, q^gamma): the even basis followed by the odd one.
pub fn highest_weight_vectors(m: &WeightModule, k: i64, gamma: &Rational) -> Vec<SparseVec> {
    let mut out = highest_weight_space(m, &int(k), gamma, 0);
    out.extend(highest_weight_space(m, &int(k), gamma, 1));
    out
}

struct Word {
    gens: Vec<Gen>,
    odd: bool,
}

/// Words in `gens` applied to `start` whose images form a basis of the generated span.
/// With `transpose`, the words act on row vectors from the right.
fn spanning_words(m: &WeightModule, start: SparseVec, gens: &[Gen], transpose: bool) -> (Vec<Word>, Vec<SparseVec>) {
    let mats: Vec<SparseMat> =
        gens.iter().map(|g| if transpose { m.action(*g).transpose() } else { m.action(*g).clone() }).collect();
    let mut ech = Echelon::new(m.dim());
    let mut words = Vec::new();
    let mut images = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    ech.insert(start.clone());
    queue.push_back((Vec::new(), start));
    while let Some((w, v)) = queue.pop_front() {
        for (k, g) in gens.iter().enumerate() {
            let u = mats[k].apply(&v);
            if u.is_zero() || !ech.insert(u.clone()) {
                continue;
            }
            let mut w2: Vec<Gen> = w.clone();
            if transpose {
                w2.push(*g);
            } else {
                w2.insert(0, *g);
            }
            queue.push_back((w2, u));
        }
        let odd = w.iter().filter(|g| g.is_odd()).count() % 2 == 1;
        words.push(Word { gens: w, odd });
        images.push(v);
    }
    (words, images)
}

fn apply_word(m: &WeightModule, w: &Word, v: &SparseVec) -> SparseVec {
    let mut out = v.clone();
    for g in w.gens.iter().rev() {
        out = m.action(*g).apply(&out);
    }
    out
}

fn apply_word_transposed(mt: &HashMap<Gen, SparseMat>, w: &Word, v: &SparseVec) -> SparseVec {
    let mut out = v.clone();
    for g in &w.gens {
        out = mt[g].apply(&out);
    }
    out
}

/// Hom(V, M) with V typical: an intertwiner is fixed by the image of the
/// top vector, which must be a highest-weight vector of the matching weight.
fn solve_from_cyclic_source(v: &Arc<WeightModule>, m: &Arc<WeightModule>, parity: u8) -> Result<Vec<SparseMat>> {
    let field = v.cfg().field();
    let top = 0usize;
    let (k1, k2) = v.h_weight(top).clone();
    let targets = highest_weight_space(m, &k1, &k2, (v.parity(top) + parity) % 2);
    if targets.is_empty() {
        return Ok(Vec::new());
    }
    let (words, images) = spanning_words(v, SparseVec::unit(top, field), &[Gen::F1, Gen::F2], false);
    if images.len() != v.dim() {
        return Err(Error::Solver(format!("{} is not generated by its top vector", v.name())));
    }
    // e_j = sum_w C[w][j] u_w
    let u = SparseMat::from_columns(v.dim(), images, field);
    let c = u.inverse()?;
    let c_rows = c.row_vectors();
    let mut candidates = Vec::with_capacity(targets.len());
    for h in &targets {
        let word_images: Vec<SparseVec> = words
            .iter()
            .map(|w| {
                let img = apply_word(m, w, h);
                if parity == 1 && w.odd {
                    img.neg()
                } else {
                    img
                }
            })
            .collect();
        let mut cols = vec![SparseVec::new(); v.dim()];
        for (wi, row) in c_rows.iter().enumerate() {
            for (j, x) in row.iter() {
                cols[*j] = cols[*j].axpy(x, &word_images[wi]);
            }
        }
        candidates.push(SparseMat::from_columns(m.dim(), cols, field));
    }
    let residuals: Vec<SparseVec> = candidates.iter().map(|f| intertwining_residual(f, v, m, parity)).collect();
    Ok(combination_kernel(&residuals, field)
        .iter()
        .map(|c| combine(&candidates, c, m.dim(), v.dim(), field))
        .collect())
}

/// Hom(M, V) with V typical: an intertwiner is fixed by the functional
/// (top coordinate) o f, which must vanish on the image of F1 and F2.
fn solve_into_cyclic_target(m: &Arc<WeightModule>, v: &Arc<WeightModule>, parity: u8) -> Result<Vec<SparseMat>> {
    let field = v.cfg().field();
    let top = 0usize;
    let (k1, k2) = v.h_weight(top).clone();
    let src_parity = (v.parity(top) + parity) % 2;
    let support: Vec<usize> = m.weight_indices(&k1, &k2).into_iter().filter(|i| m.parity(*i) == src_parity).collect();
    if support.is_empty() {
        return Ok(Vec::new());
    }
    let mt: HashMap<Gen, SparseMat> = [Gen::E1, Gen::E2, Gen::F1, Gen::F2].iter().map(|g| (*g, m.action(*g).transpose())).collect();
    // Functionals phi on the support with phi o F_i = 0.
    let mut rows: HashMap<usize, Vec<(usize, CycScalar)>> = HashMap::new();
    for (gi, g) in [Gen::F1, Gen::F2].iter().enumerate() {
        for (local, s) in support.iter().enumerate() {
            for (col, x) in mt[g].col(*s).iter() {
                rows.entry(gi * m.dim() + col).or_default().push((local, x.clone()));
            }
        }
    }
    let mut keys: Vec<usize> = rows.keys().copied().collect();
    keys.sort_unstable();
    let eqs = keys.into_iter().map(|k| SparseVec::from_pairs(rows.remove(&k).unwrap()));
    let phis: Vec<SparseVec> =
        crate::linalg::null_space(eqs, support.len(), field).into_iter().map(|p| p.map_indices(|l| support[l])).collect();
    if phis.is_empty() {
        return Ok(Vec::new());
    }
    let (words, images) = spanning_words(v, SparseVec::unit(top, field), &[Gen::E1, Gen::E2], true);
    if images.len() != v.dim() {
        return Err(Error::Solver(format!("{} is not co-generated by its top functional", v.name())));
    }
    // e_j^T = sum_w D[j][w] r_w
    let r = SparseMat::from_rows(v.dim(), &images, field);
    let d = r.inverse()?;
    let d_rows = d.row_vectors();
    let mut candidates = Vec::with_capacity(phis.len());
    for phi in &phis {
        let z: Vec<SparseVec> = words
            .iter()
            .map(|w| {
                let img = apply_word_transposed(&mt, w, phi);
                if parity == 1 && w.odd {
                    img.neg()
                } else {
                    img
                }
            })
            .collect();
        let fn_rows: Vec<SparseVec> = d_rows
            .iter()
            .map(|row| {
                let mut acc = SparseVec::new();
                for (wi, x) in row.iter() {
                    acc = acc.axpy(x, &z[*wi]);
                }
                acc
            })
            .collect();
        candidates.push(SparseMat::from_rows(m.dim(), &fn_rows, field));
    }
    let residuals: Vec<SparseVec> = candidates.iter().map(|f| intertwining_residual(f, m, v, parity)).collect();
    Ok(combination_kernel(&residuals, field)
        .iter()
        .map(|c| combine(&candidates, c, v.dim(), m.dim(), field))
        .collect())
}

/// General solver: unknown entries X_{ik} restricted to matching weight and
/// parity, one equation per generator and matrix entry.
fn solve_blockwise(m1: &WeightModule, m2: &WeightModule, parity: u8) -> Vec<SparseMat> {
    let field = m1.cfg().field();
    let l = m1.cfg().l() as i64;
    let key = |w: &(Rational, Rational)| (mod_rational(&w.0, l), mod_rational(&w.1, l));
    let mut by_weight: HashMap<(Rational, Rational), Vec<usize>> = HashMap::new();
    for i in 0..m2.dim() {
        by_weight.entry(key(m2.h_weight(i))).or_default().push(i);
    }
    let mut unknowns: Vec<(usize, usize)> = Vec::new();
    let mut by_src: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m1.dim()];
    for k in 0..m1.dim() {
        if let Some(is) = by_weight.get(&key(m1.h_weight(k))) {
            for &i in is {
                if (m2.parity(i) + m1.parity(k)) % 2 == parity {
                    by_src[k].push((i, unknowns.len()));
                    unknowns.push((i, k));
                }
            }
        }
    }
    if unknowns.is_empty() {
        return Vec::new();
    }
    let mut eqs: HashMap<(usize, usize, usize), Vec<(usize, CycScalar)>> = HashMap::new();
    for (gi, g) in RAISING_LOWERING.iter().enumerate() {
        let x1 = m1.action(*g);
        let x2 = m2.action(*g);
        let neg = !sign_for(parity, *g);
        // (X x1)_{ij} = sum_k X_{ik} (x1)_{kj}
        for j in 0..m1.dim() {
            for (k, v) in x1.col(j).iter() {
                for (i, u) in &by_src[*k] {
                    eqs.entry((gi, *i, j)).or_default().push((*u, v.clone()));
                }
            }
        }
        // -/+ (x2 X)_{ij} = sum_k' (x2)_{ik'} X_{k'j}
        for (u, (kp, j)) in unknowns.iter().enumerate() {
            for (i, v) in x2.col(*kp).iter() {
                let t = if neg { -v } else { v.clone() };
                eqs.entry((gi, *i, *j)).or_default().push((u, t));
            }
        }
    }
    let mut keys: Vec<(usize, usize, usize)> = eqs.keys().copied().collect();
    keys.sort_unstable();
    let rows = keys.into_iter().map(|k| SparseVec::from_pairs(eqs.remove(&k).unwrap()));
    crate::linalg::null_space(rows, unknowns.len(), field)
        .iter()
        .map(|sol| SparseMat::from_triplets(m2.dim(), m1.dim(), sol.iter().map(|(u, x)| (unknowns[*u].0, unknowns[*u].1, x.clone())), field))
        .collect()
}

/// One isotypic component: `copies` injections from the simple and the
/// matching projections. Odd injections realize the parity-shifted simple.
#[derive(Clone, Debug)]
pub struct Summand {
    pub label: SimpleLabel,
    pub parity_shift: bool,
    pub module: Arc<WeightModule>,
    pub injections: Vec<Morphism>,
    pub projections: Vec<Morphism>,
}

impl Summand {
    pub fn multiplicity(&self) -> usize {
        self.injections.len()
    }
}

#[derive(Clone, Debug)]
pub struct DecompositionRecord {
    pub module: Arc<WeightModule>,
    pub summands: Vec<Summand>,
    /// Dimension not covered by simple summands; zero iff the module is semisimple.
    pub complement_dim: usize,
}

#[derive(Serialize)]
struct SummandJson<'a> {
    label: &'a SimpleLabel,
    multiplicity: usize,
    #[serde(rename = "parityShift")]
    parity_shift: bool,
}

impl DecompositionRecord {
    pub fn is_complete(&self) -> bool {
        self.complement_dim == 0
    }

    /// Labels with multiplicity, ignoring parity shifts.
    pub fn label_multiset(&self) -> Vec<(SimpleLabel, usize)> {
        let mut out: Vec<(SimpleLabel, usize)> = Vec::new();
        for s in &self.summands {
            match out.iter_mut().find(|(l, _)| *l == s.label) {
                Some((_, k)) => *k += s.multiplicity(),
                None => out.push((s.label.clone(), s.multiplicity())),
            }
        }
        out.sort();
        out
    }

    /// Checks sum iota pi = Id and pi_a iota_b = delta_ab Id exactly.
    pub fn verify(&self) -> Result<bool> {
        let m = &self.module;
        let field = m.cfg().field();
        let mut total = SparseMat::zeros(m.dim(), m.dim(), field);
        let pairs: Vec<(&Morphism, &Morphism)> =
            self.summands.iter().flat_map(|s| s.injections.iter().zip(&s.projections)).collect();
        for (i, p) in &pairs {
            total = total.add(&i.compose(p)?.matrix);
        }
        if self.is_complete() && !total.is_identity() {
            return Ok(false);
        }
        for (a, (_, pa)) in pairs.iter().enumerate() {
            for (b, (ib, _)) in pairs.iter().enumerate() {
                if pa.target.dim() != ib.source.dim() {
                    continue;
                }
                let c = pa.compose(ib)?;
                let ok = if a == b { c.matrix.is_identity() } else { c.matrix.is_zero() };
                if !ok {
                    return Ok(false);
                }
            }
        }
        Ok(pairs.iter().all(|(i, p)| i.is_intertwiner() && p.is_intertwiner()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let items: Vec<SummandJson> = self
            .summands
            .iter()
            .map(|s| SummandJson { label: &s.label, multiplicity: s.multiplicity(), parity_shift: s.parity_shift })
            .collect();
        serde_json::json!({
            "module": self.module.name(),
            "dim": self.module.dim(),
            "summands": items,
            "complete": self.is_complete(),
            "complementDim": self.complement_dim,
        })
    }
}

/// Scalar of b o a on a simple module read off from the top vector.
pub(crate) fn pairing_scalar(b: &Morphism, a: &Morphism) -> CycScalar {
    let field = a.source.cfg().field();
    let top = SparseVec::unit(0, field);
    let img = b.apply(&a.apply(&top));
    img.get(0).cloned().unwrap_or_else(|| CycScalar::zero(field))
}

/// Pivot columns of the row space, and then the pivot rows of those columns.
pub(crate) fn invertible_minor(p: &[Vec<CycScalar>], ncols: usize) -> (Vec<usize>, Vec<usize>) {
    let rows: Vec<SparseVec> = p.iter().map(|r| SparseVec::from_dense(r)).collect();
    let cols_sel = Echelon::from_rows(rows, ncols).pivots();
    let transposed: Vec<SparseVec> =
        cols_sel.iter().map(|c| SparseVec::from_dense(&p.iter().map(|r| r[*c].clone()).collect::<Vec<_>>())).collect();
    let rows_sel = Echelon::from_rows(transposed, p.len()).pivots();
    (rows_sel, cols_sel)
}

/// Candidate simple labels for the summands of `m`, in decreasing (k, gamma) order.
fn candidate_labels(m: &WeightModule) -> Vec<SimpleLabel> {
    let cfg = m.cfg();
    let l = cfg.l() as i64;
    let lp = cfg.l_prime() as i64;
    let mut out: Vec<SimpleLabel> = Vec::new();
    for (w1, w2) in m.weights_mod_l() {
        if !w1.is_integer() {
            continue;
        }
        let k = w1.to_integer();
        let k: i64 = num_traits::ToPrimitive::to_i64(&k).unwrap_or(-1).rem_euclid(l);
        if k > lp - 1 {
            continue;
        }
        let has_top = [0u8, 1].iter().any(|p| !highest_weight_space(m, &w1, &w2, *p).is_empty());
        if !has_top {
            continue;
        }
        let label = SimpleLabel::new(k as u32, w2, l as u32);
        if !out.contains(&label) {
            out.push(label);
        }
    }
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// Isotypic decomposition via highest-weight vectors and the composition
/// pairing between Hom(V, M) and Hom(M, V).
pub fn decompose(m: &Arc<WeightModule>) -> Result<DecompositionRecord> {
    let g = m
        .grading()
        .ok_or_else(|| Error::Precondition(format!("{} has no homogeneous grading", m.name())))?;
    if !crate::repmod::is_generic_grading(&g) {
        return Err(Error::Precondition(format!(
            "grading {} of {} lies in (1/2)Z/Z; decomposition is only defined for generic gradings",
            format_rational(&g),
            m.name()
        )));
    }
    let cfg = m.cfg();
    let mut summands = Vec::new();
    let mut covered = 0usize;
    for label in candidate_labels(m) {
        let v = match build_typical(cfg, &label) {
            Ok(v) => Arc::new(v),
            Err(Error::NonSimple(_)) => continue,
            Err(e) => return Err(e),
        };
        for parity in [0u8, 1] {
            let a = hom_space_parity(&v, m, parity)?;
            if a.is_empty() {
                continue;
            }
            let b = hom_space_parity(m, &v, parity)?;
            let p: Vec<Vec<CycScalar>> =
                b.morphisms.iter().map(|bb| a.morphisms.iter().map(|aa| pairing_scalar(bb, aa)).collect()).collect();
            if p.is_empty() {
                continue;
            }
            let (rsel, csel) = invertible_minor(&p, a.dim());
            let r = csel.len();
            if r == 0 {
                continue;
            }
            let sub: Vec<Vec<CycScalar>> = rsel.iter().map(|i| csel.iter().map(|j| p[*i][*j].clone()).collect()).collect();
            let inv = SparseMat::from_dense(&sub, cfg.field()).inverse()?;
            let injections: Vec<Morphism> = csel.iter().map(|j| a.morphisms[*j].clone()).collect();
            let mut projections = Vec::with_capacity(r);
            for c in 0..r {
                let mut acc = Morphism::zero(m, &v, parity);
                for (k, ri) in rsel.iter().enumerate() {
                    let x = inv.get(c, k);
                    if !x.is_zero() {
                        acc = acc.axpy(&x, &b.morphisms[*ri])?;
                    }
                }
                projections.push(acc);
            }
            covered += r * v.dim();
            summands.push(Summand { label: label.clone(), parity_shift: parity == 1, module: v.clone(), injections, projections });
        }
    }
    Ok(DecompositionRecord { module: m.clone(), summands, complement_dim: m.dim().saturating_sub(covered) })
}

/// The four duality morphisms of `m` and its dual module.
pub struct DualityMaps {
    pub dual: Arc<WeightModule>,
    /// C -> M (x) M*
    pub coev_right: Morphism,
    /// M* (x) M -> C
    pub ev_right: Morphism,
    /// C -> M* (x) M, twisted by K2^2
    pub coev_left: Morphism,
    /// M (x) M* -> C, twisted by K2^{-2}
    pub ev_left: Morphism,
}

pub fn duality_maps(m: &Arc<WeightModule>) -> Result<DualityMaps> {
    let cfg = m.cfg();
    let f = cfg.field();
    let dual = Arc::new(crate::repmod::dual(m));
    let unit = Arc::new(trivial(cfg));
    let m_d = Arc::new(crate::repmod::tensor(m, &dual)?);
    let d_m = Arc::new(crate::repmod::tensor(&dual, m)?);
    let n = m.dim();
    let diag = |j: usize| j * n + j;
    let twist = |j: usize, sign: i64| -> Result<CycScalar> {
        let s = if m.parity(j) == 1 { -cfg.one() } else { cfg.one() };
        Ok(s * cfg.q_power(&(&m.h_weight(j).1 * int(2 * sign)))?)
    };
    let coev_r = SparseMat::from_triplets(n * n, 1, (0..n).map(|j| (diag(j), 0, cfg.one())), f);
    let ev_r = SparseMat::from_triplets(1, n * n, (0..n).map(|j| (0, diag(j), cfg.one())), f);
    let coev_l = SparseMat::from_triplets(n * n, 1, (0..n).map(|j| Ok((diag(j), 0, twist(j, 1)?))).collect::<Result<Vec<_>>>()?, f);
    let ev_l = SparseMat::from_triplets(1, n * n, (0..n).map(|j| Ok((0, diag(j), twist(j, -1)?))).collect::<Result<Vec<_>>>()?, f);
    Ok(DualityMaps {
        dual,
        coev_right: Morphism::even(unit.clone(), m_d.clone(), coev_r)?,
        ev_right: Morphism::even(d_m.clone(), unit.clone(), ev_r)?,
        coev_left: Morphism::even(unit.clone(), d_m, coev_l)?,
        ev_left: Morphism::even(m_d, unit, ev_l)?,
    })
}

/// Whether a grading lies in (1/4)Z/Z.
fn in_quarter_lattice(a: &Rational) -> bool {
    frac(&(a * int(4))) == int(0)
}

/// The classes {0, l/2} mod 1 that a pairwise sum must avoid.
fn forbidden_sum(s: &Rational, l: u32) -> bool {
    let s = frac(s);
    s == int(0) || s == frac(&rat(l as i64, 2))
}

/// First pair (i, j), 1-based and lexicographic, whose gradings sum outside {0, l/2} mod 1.
pub fn pick_ij_pair(gradings: &[Rational], l: u32) -> Result<(usize, usize)> {
    if gradings.len() < 2 {
        return Err(Error::Precondition("need at least two gradings".into()));
    }
    if let Some(a) = gradings.iter().find(|a| in_quarter_lattice(a)) {
        return Err(Error::Precondition(format!("grading {} lies in (1/4)Z/Z", format_rational(a))));
    }
    let total: Rational = gradings.iter().sum();
    if forbidden_sum(&total, l) {
        return Err(Error::Precondition(format!("total grading {} is 0 or l/2 mod 1", format_rational(&frac(&total)))));
    }
    for i in 0..gradings.len() {
        for j in i + 1..gradings.len() {
            if !forbidden_sum(&(&gradings[i] + &gradings[j]), l) {
                return Ok((i + 1, j + 1));
            }
        }
    }
    Err(Error::Solver("no admissible pair found despite valid preconditions".into()))
}

/// (dim Hom, dim of its negligible part) for even morphisms M1 -> M2.
pub fn negligible_rank(m1: &Arc<WeightModule>, m2: &Arc<WeightModule>) -> Result<(usize, usize)> {
    negligible_rank_parity(m1, m2, 0)
}

/// Negligible rank for intertwiners of the given parity; the pairing is
/// (f, g) -> t(g o f) with the modified trace on M1.
pub fn negligible_rank_parity(m1: &Arc<WeightModule>, m2: &Arc<WeightModule>, parity: u8) -> Result<(usize, usize)> {
    if matches!(m1.provenance(), Provenance::Trivial) || matches!(m2.provenance(), Provenance::Trivial) {
        return Err(Error::TraceUnavailable("the trivial module is not in the ideal".into()));
    }
    let fwd = hom_space_parity(m1, m2, parity)?;
    if fwd.is_empty() {
        return Ok((0, 0));
    }
    let back = hom_space_parity(m2, m1, parity)?;
    let pairing = mtrace::trace_pairing(&fwd.morphisms, &back.morphisms)?;
    let ncols = fwd.dim();
    let rank = Echelon::from_rows(pairing.iter().map(|r| SparseVec::from_dense(r)), ncols).rank();
    Ok((fwd.dim(), fwd.dim() - rank))
}

/// The structure of V(0, alpha) (x) V(0, -alpha-1): the submodules generated by
/// the vectors v7 and u0 are 8-dimensional, complementary, the second has a
/// one-dimensional endomorphism space and the first admits nonzero maps from and to C.
///
/// With the Koszul sign and basis order used here, v7 carries a relative minus sign
/// between its two terms; u0 is taken as is.
pub fn verify_self_dual_product(cfg: &crate::scalar::RootConfig, alpha: &Rational) -> Result<crate::report::Report> {
    use crate::repmod::{build_typical_rep, submodule_generated, typical_index, tensor};
    let dual_alpha = -alpha.clone() - int(1);
    let v = Arc::new(build_typical_rep(cfg, 0, alpha)?);
    let w = Arc::new(build_typical_rep(cfg, 0, &dual_alpha)?);
    let vw = tensor(&v, &w)?;
    let at = |rho, sigma, rho2, sigma2| typical_index(0, rho, sigma, 0) * w.dim() + typical_index(0, rho2, sigma2, 0);
    let qa = |shift: i64| cfg.q_power(&(alpha.clone() + int(shift)));
    let br_a = cfg.qint(alpha)?;
    let br_a1 = cfg.qint(&(alpha.clone() + int(1)))?;
    let v7 = SparseVec::from_pairs([
        (at(1, 1, 0, 0), cfg.q_power(&(-alpha.clone() - int(1)))? * &br_a),
        (at(0, 0, 1, 1), -(qa(0)? * &br_a1)),
    ]);
    let u0 = SparseVec::from_pairs([
        (at(0, 0, 1, 0), br_a.clone()),
        (at(1, 0, 0, 0), cfg.q_power(&-alpha.clone())? * &br_a1),
    ]);
    let (span1, sub1) = submodule_generated(&vw, &v7)?;
    let (span2, sub2) = submodule_generated(&vw, &u0)?;
    let joint = Echelon::from_rows(span1.iter().chain(&span2).cloned(), vw.dim()).rank();
    let (sub1, sub2) = (Arc::new(sub1), Arc::new(sub2));
    let one = Arc::new(trivial(cfg));
    let a = format_rational(alpha);
    let mut report = crate::report::Report::new("decomposition");
    report.check_with(format!("selfdual/{a}/v7-span"), span1.len() == 8, serde_json::json!({ "dim": span1.len() }));
    report.check_with(format!("selfdual/{a}/u0-span"), span2.len() == 8, serde_json::json!({ "dim": span2.len() }));
    report.check_with(
        format!("selfdual/{a}/complementary"),
        joint == vw.dim() && span1.len() + span2.len() == vw.dim(),
        serde_json::json!({ "jointRank": joint, "total": vw.dim() }),
    );
    let end2 = hom_space(&sub2, &sub2)?.dim();
    report.check_with(format!("selfdual/{a}/end-u0"), end2 == 1, serde_json::json!({ "dim": end2 }));
    let into = hom_space(&one, &sub1)?.dim();
    let out = hom_space(&sub1, &one)?.dim();
    report.check_with(format!("selfdual/{a}/unit-into-v7"), into > 0, serde_json::json!({ "dim": into }));
    report.check_with(format!("selfdual/{a}/v7-onto-unit"), out > 0, serde_json::json!({ "dim": out }));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repmod::{tensor, verify_relations};
    use crate::scalar::RootConfig;

    fn typ(cfg: &RootConfig, n: u32, a: Rational) -> Arc<WeightModule> {
        Arc::new(build_typical(cfg, &SimpleLabel::new(n, a, cfg.l())).unwrap())
    }

    #[test]
    fn simple_endomorphisms_are_scalars() {
        let cfg = RootConfig::new(5, 15).unwrap();
        let v = typ(&cfg, 1, rat(1, 3));
        let h = hom_space(&v, &v).unwrap();
        assert_eq!(h.dim(), 1);
        assert!(h.morphisms[0].matrix().is_identity());
        assert_eq!(hom_space_parity(&v, &v, 1).unwrap().dim(), 0);
        let w = typ(&cfg, 0, rat(1, 3));
        assert_eq!(hom_space(&w, &v).unwrap().dim(), 0);
    }

    #[test]
    fn three_solvers_agree() {
        let cfg = RootConfig::new(3, 15).unwrap();
        let a = typ(&cfg, 0, rat(1, 3));
        let b = typ(&cfg, 0, rat(1, 5));
        let ab = Arc::new(tensor(&a, &b).unwrap());
        let top = typ(&cfg, 0, &rat(1, 3) + &rat(1, 5));
        for p in [0u8, 1] {
            let cyc = hom_space_parity(&top, &ab, p).unwrap();
            let blk = canonical_basis(solve_blockwise(&top, &ab, p), top.dim(), ab.dim(), cfg.field());
            assert_eq!(cyc.morphisms.iter().map(|m| m.matrix().clone()).collect::<Vec<_>>(), blk);
            let co = hom_space_parity(&ab, &top, p).unwrap();
            let blk = canonical_basis(solve_blockwise(&ab, &top, p), ab.dim(), top.dim(), cfg.field());
            assert_eq!(co.morphisms.iter().map(|m| m.matrix().clone()).collect::<Vec<_>>(), blk);
        }
        let end = hom_space(&ab, &ab).unwrap();
        assert_eq!(end.dim(), 3);
        assert!(end.morphisms.iter().all(|m| m.is_intertwiner()));
    }

    #[test]
    fn odd_intertwiners_into_shifted_summands() {
        let cfg = RootConfig::new(5, 15).unwrap();
        let a = typ(&cfg, 0, rat(1, 3));
        let b = typ(&cfg, 1, rat(1, 5));
        let ab = Arc::new(tensor(&a, &b).unwrap());
        let s = &rat(1, 3) + &rat(1, 5);
        let up = typ(&cfg, 2, s.clone());
        assert_eq!(hom_space_parity(&up, &ab, 0).unwrap().dim(), 0);
        let odd = hom_space_parity(&up, &ab, 1).unwrap();
        assert_eq!(odd.dim(), 1);
        assert!(odd.morphisms[0].is_intertwiner());
    }

    #[test]
    fn decomposition_of_v0_times_vn() {
        let cfg = RootConfig::new(5, 15).unwrap();
        let (al, be) = (rat(1, 3), rat(2, 5));
        let a = typ(&cfg, 0, al.clone());
        let b = typ(&cfg, 1, be.clone());
        let ab = Arc::new(tensor(&a, &b).unwrap());
        let rec = decompose(&ab).unwrap();
        assert!(rec.is_complete());
        assert!(rec.verify().unwrap());
        let s = &al + &be;
        let mut want = vec![
            (SimpleLabel::new(1, s.clone(), 5), 1),
            (SimpleLabel::new(2, s.clone(), 5), 1),
            (SimpleLabel::new(0, &s + int(1), 5), 1),
            (SimpleLabel::new(1, &s + int(1), 5), 1),
        ];
        want.sort();
        assert_eq!(rec.label_multiset(), want);
    }

    #[test]
    fn non_generic_grading_is_rejected() {
        let cfg = RootConfig::new(3, 6).unwrap();
        let a = typ(&cfg, 0, rat(1, 3));
        let b = typ(&cfg, 0, rat(1, 6));
        let ab = Arc::new(tensor(&a, &b).unwrap());
        assert!(matches!(decompose(&ab), Err(Error::Precondition(_))));
    }

    #[test]
    fn duality_maps_are_intertwiners_with_zigzags() {
        let cfg = RootConfig::new(5, 3).unwrap();
        let v = typ(&cfg, 1, rat(1, 3));
        let d = duality_maps(&v).unwrap();
        assert!(verify_relations(&d.dual).passed());
        for m in [&d.coev_right, &d.ev_right, &d.coev_left, &d.ev_left] {
            assert!(m.is_intertwiner(), "{}", m.target().name());
        }
        let n = v.dim();
        let f = cfg.field();
        let id = SparseMat::identity(n, f);
        // (Id (x) evR)(coevR (x) Id) = Id_V
        let zig = SparseMat::kron(&id, d.ev_right.matrix()).mul(&SparseMat::kron(d.coev_right.matrix(), &id));
        assert!(zig.is_identity());
        // (evR (x) Id)(Id (x) coevR) = Id_{V*}
        let zag = SparseMat::kron(d.ev_right.matrix(), &id).mul(&SparseMat::kron(&id, d.coev_right.matrix()));
        assert!(zag.is_identity());
        let zig = SparseMat::kron(d.ev_left.matrix(), &id).mul(&SparseMat::kron(&id, d.coev_left.matrix()));
        assert!(zig.is_identity());
        let zag = SparseMat::kron(&id, d.ev_left.matrix()).mul(&SparseMat::kron(d.coev_left.matrix(), &id));
        assert!(zag.is_identity());
        let qdim = d.ev_left.compose(&d.coev_right).unwrap();
        assert!(qdim.matrix().is_zero());
        let rdim = d.ev_right.compose(&d.coev_left).unwrap();
        assert!(rdim.matrix().is_zero());
    }

    #[test]
    fn self_dual_product_structure() {
        for (l, a) in [(3, rat(1, 3)), (5, rat(2, 7)), (4, rat(1, 5))] {
            let cfg = RootConfig::new(l, rational_denominator(&a)).unwrap();
            let r = verify_self_dual_product(&cfg, &a).unwrap();
            assert!(r.passed(), "l={l}: {}", r.to_json());
        }
    }

    fn rational_denominator(a: &Rational) -> u64 {
        u64::try_from(a.denom().clone()).unwrap()
    }

    #[test]
    fn ij_pairs() {
        assert_eq!(pick_ij_pair(&[rat(1, 3), rat(1, 3)], 3).unwrap(), (1, 2));
        assert_eq!(pick_ij_pair(&[rat(1, 3), rat(-1, 3), rat(1, 5)], 3).unwrap(), (1, 3));
        assert!(pick_ij_pair(&[rat(1, 4), rat(1, 3)], 3).is_err());
    }
}
