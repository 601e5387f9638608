//! Multiplicity spaces, 6j tensors, the Pachner 2-3 identity and the
//! modified Turaev-Viro state sum.

mod pachner;
mod statesum;
mod symbol;
mod triangulation;

use std::collections::{BTreeSet, HashMap};
use std::hash::Hash;
use std::sync::Arc;

use parking_lot::RwLock;

pub use pachner::{pachner23_check, InternalWeight, PachnerLabels};
pub use statesum::{states, tv_state_sum, StateAssignment, StateSumResult};
pub use symbol::{verify_defining_equation, verify_orientation_reversal, SixJTensor};
pub use triangulation::{HTriangulation, HTriangulationData, OrientedEdge};

use crate::catops::{hom_space_super, invertible_minor, pairing_scalar, Morphism};
use crate::charb::{b_map, GradingSlice};
use crate::error::{Error, Result};
use crate::linalg::SparseMat;
use crate::mtrace::ModifiedDimensionTable;
use crate::repmod::{build_typical, is_generic_grading, tensor, SimpleLabel, WeightModule};
use crate::scalar::{format_rational, frac, int, mod_rational, CycScalar, Rational, RootConfig};

/// Hom(V_k, V_i (x) V_j) modulo negligible maps, with a dual basis of
/// Hom(V_i (x) V_j, V_k) such that the composition scalars form the identity.
#[derive(Clone, Debug)]
pub struct MultiplicitySpace {
    pub triple: [SimpleLabel; 3],
    pub basis: Vec<Morphism>,
    pub dual_basis: Vec<Morphism>,
}

impl MultiplicitySpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn parity(&self, a: usize) -> u8 {
        self.basis[a].parity()
    }

    /// P[b][a] = scalar of dual_b o basis_a.
    pub fn pairing_matrix(&self) -> Vec<Vec<CycScalar>> {
        self.dual_basis.iter().map(|g| self.basis.iter().map(|f| pairing_scalar(g, f)).collect()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "triple": self.triple.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            "dim": self.dim(),
            "parities": self.basis.iter().map(|b| b.parity()).collect::<Vec<_>>(),
        })
    }
}

fn cached<K: Eq + Hash + Clone, V: Clone>(
    map: &RwLock<HashMap<K, V>>,
    key: &K,
    make: impl FnOnce() -> Result<V>,
) -> Result<V> {
    if let Some(v) = map.read().get(key) {
        return Ok(v.clone());
    }
    let v = make()?;
    Ok(map.write().entry(key.clone()).or_insert(v).clone())
}

type Triple = (SimpleLabel, SimpleLabel, SimpleLabel);

/// Shared memo tables for modules, multiplicity spaces and 6j tensors at one root of unity.
/// Safe to use from several threads.
pub struct SixJContext {
    cfg: RootConfig,
    modules: RwLock<HashMap<SimpleLabel, Arc<WeightModule>>>,
    products: RwLock<HashMap<(SimpleLabel, SimpleLabel), Arc<WeightModule>>>,
    spaces: RwLock<HashMap<Triple, Arc<MultiplicitySpace>>>,
    symbols: RwLock<HashMap<([SimpleLabel; 6], bool), Arc<SixJTensor>>>,
    dims: ModifiedDimensionTable,
}

impl SixJContext {
    pub fn new(cfg: &RootConfig) -> Self {
        SixJContext {
            cfg: cfg.clone(),
            modules: RwLock::default(),
            products: RwLock::default(),
            spaces: RwLock::default(),
            symbols: RwLock::default(),
            dims: ModifiedDimensionTable::new(cfg),
        }
    }

    pub fn cfg(&self) -> &RootConfig {
        &self.cfg
    }

    pub fn module(&self, label: &SimpleLabel) -> Result<Arc<WeightModule>> {
        cached(&self.modules, label, || Ok(Arc::new(build_typical(&self.cfg, label)?)))
    }

    pub fn product(&self, i: &SimpleLabel, j: &SimpleLabel) -> Result<Arc<WeightModule>> {
        cached(&self.products, &(i.clone(), j.clone()), || {
            Ok(Arc::new(tensor(&self.module(i)?, &self.module(j)?)?))
        })
    }

    pub fn mdim(&self, label: &SimpleLabel) -> Result<CycScalar> {
        self.dims.get(label)
    }

    pub fn b(&self, label: &SimpleLabel) -> Result<CycScalar> {
        b_map(&self.cfg, label)
    }

    /// Labels 0 <= n <= l'-2 of the given generic grading.
    pub fn slice(&self, g: &Rational) -> Result<Vec<SimpleLabel>> {
        Ok(GradingSlice::new(&self.cfg, g)?.labels)
    }

    pub fn mult_space(&self, i: &SimpleLabel, j: &SimpleLabel, k: &SimpleLabel) -> Result<Arc<MultiplicitySpace>> {
        for (what, g) in [("left", i.grading()), ("right", j.grading()), ("product", &i.alpha + &j.alpha)] {
            if !is_generic_grading(&g) {
                return Err(Error::Precondition(format!(
                    "{what} grading {} of the multiplicity space lies in (1/2)Z/Z",
                    format_rational(&frac(&g))
                )));
            }
        }
        let key = (i.clone(), j.clone(), k.clone());
        cached(&self.spaces, &key, || Ok(Arc::new(self.solve_mult_space(i, j, k)?)))
    }

    fn solve_mult_space(&self, i: &SimpleLabel, j: &SimpleLabel, k: &SimpleLabel) -> Result<MultiplicitySpace> {
        let triple = [i.clone(), j.clone(), k.clone()];
        let empty = MultiplicitySpace { triple: triple.clone(), basis: Vec::new(), dual_basis: Vec::new() };
        let l = self.cfg.l() as i64;
        if k.n + 1 >= self.cfg.l_prime() || frac(&(&i.alpha + &j.alpha)) != k.grading() {
            return Ok(empty);
        }
        let prod = self.product(i, j)?;
        let top = (int(k.n as i64), k.alpha.clone());
        let weights: BTreeSet<(Rational, Rational)> =
            prod.weights_mod_l().into_iter().map(|(a, b)| (mod_rational(&a, l), mod_rational(&b, l))).collect();
        if !weights.contains(&top) {
            return Ok(empty);
        }
        let vk = self.module(k)?;
        let fwd = hom_space_super(&vk, &prod)?;
        if fwd.is_empty() {
            return Ok(empty);
        }
        let back = hom_space_super(&prod, &vk)?;
        let p: Vec<Vec<CycScalar>> =
            back.iter().map(|g| fwd.iter().map(|f| pairing_scalar(g, f)).collect()).collect();
        if p.is_empty() {
            return Ok(empty);
        }
        let (rsel, csel) = invertible_minor(&p, fwd.len());
        if csel.is_empty() {
            return Ok(empty);
        }
        let sub: Vec<Vec<CycScalar>> = rsel.iter().map(|r| csel.iter().map(|c| p[*r][*c].clone()).collect()).collect();
        let inv = SparseMat::from_dense(&sub, self.cfg.field()).inverse()?;
        let basis: Vec<Morphism> = csel.iter().map(|c| fwd[*c].clone()).collect();
        let mut dual_basis = Vec::with_capacity(basis.len());
        for (row, f) in basis.iter().enumerate() {
            let mut acc = Morphism::zero(&prod, &vk, f.parity());
            for (col, r) in rsel.iter().enumerate() {
                let x = inv.get(row, col);
                if !x.is_zero() {
                    acc = acc.axpy(&x, &back[*r])?;
                }
            }
            dual_basis.push(acc);
        }
        Ok(MultiplicitySpace { triple, basis, dual_basis })
    }

    /// Labels k of the slice of g_i + g_j with a nonzero multiplicity space H(i, j, k).
    pub fn fusion_targets(&self, i: &SimpleLabel, j: &SimpleLabel) -> Result<Vec<SimpleLabel>> {
        let mut out = Vec::new();
        for k in self.slice(&(&i.alpha + &j.alpha))? {
            if !self.mult_space(i, j, &k)?.is_empty() {
                out.push(k);
            }
        }
        Ok(out)
    }

    pub fn sixj(&self, labels: &[SimpleLabel; 6], mirror: bool) -> Result<Arc<SixJTensor>> {
        cached(&self.symbols, &(labels.clone(), mirror), || Ok(Arc::new(symbol::compute(self, labels, mirror)?)))
    }

    /// Every tensor computed so far, in a deterministic order.
    pub fn cached_symbols(&self) -> Vec<Arc<SixJTensor>> {
        let mut v: Vec<_> = self.symbols.read().values().cloned().collect();
        v.sort_by(|a, b| (&a.labels, a.mirror).cmp(&(&b.labels, b.mirror)));
        v
    }
}
