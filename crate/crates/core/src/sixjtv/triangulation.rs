//! H-triangulation input: tetrahedra on numbered vertices, edge identifications,
//! link edges and a grading cocycle.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::repmod::is_generic_grading;
use crate::scalar::{frac, int, parse_rational, Rational, RootConfig};

/// The JSON form. Edges are oriented from the smaller to the larger vertex id;
/// `edgeGlue` identifies [vA, vB] with [vC, vD] so that vA -> vB matches vC -> vD.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HTriangulationData {
    pub l: u32,
    #[serde(rename = "denomBound")]
    pub denom_bound: u64,
    pub vertices: Vec<u32>,
    pub tetrahedra: Vec<[u32; 4]>,
    #[serde(rename = "edgeGlue", default)]
    pub edge_glue: Vec<[[u32; 2]; 2]>,
    #[serde(rename = "linkEdges", default)]
    pub link_edges: Vec<usize>,
    #[serde(default)]
    pub cocycle: BTreeMap<String, String>,
}

impl HTriangulationData {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("triangulation JSON: {e}")))
    }
}

/// An edge class with an orientation sign relative to its canonical direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrientedEdge {
    pub edge: usize,
    pub reversed: bool,
}

#[derive(Clone, Debug)]
pub(crate) struct Tetrahedron {
    pub sorted: [u32; 4],
    pub positive: bool,
}

/// Validated triangulation with edge classes in canonical order.
#[derive(Clone, Debug)]
pub struct HTriangulation {
    pub cfg: RootConfig,
    /// Member vertex pairs (a < b) of each edge class; the first member fixes the orientation.
    pub edges: Vec<Vec<(u32, u32)>>,
    pub cocycle: Vec<Rational>,
    pub link: Vec<bool>,
    pairs: HashMap<(u32, u32), OrientedEdge>,
    pub(crate) tetrahedra: Vec<Tetrahedron>,
    /// Sorted vertex triples, each shared by exactly two tetrahedra.
    pub faces: Vec<[u32; 3]>,
}

/// Union-find over vertex pairs that tracks relative orientation.
struct Classes {
    parent: Vec<usize>,
    flip: Vec<bool>,
}

impl Classes {
    fn find(&mut self, x: usize) -> (usize, bool) {
        if self.parent[x] == x {
            return (x, false);
        }
        let (root, f) = self.find(self.parent[x]);
        self.parent[x] = root;
        self.flip[x] ^= f;
        (root, self.flip[x])
    }

    fn union(&mut self, a: usize, b: usize, flipped: bool) -> bool {
        let (ra, fa) = self.find(a);
        let (rb, fb) = self.find(b);
        if ra == rb {
            return fa ^ fb == flipped;
        }
        self.parent[rb] = ra;
        self.flip[rb] = fa ^ fb ^ flipped;
        true
    }
}

fn sorted_pair(a: u32, b: u32) -> ((u32, u32), bool) {
    if a < b {
        ((a, b), false)
    } else {
        ((b, a), true)
    }
}

impl HTriangulation {
    pub fn from_data(data: &HTriangulationData) -> Result<Self> {
        let cfg = RootConfig::new(data.l, data.denom_bound)?;
        let known: std::collections::BTreeSet<u32> = data.vertices.iter().copied().collect();
        if known.len() != data.vertices.len() {
            return Err(Error::Validation("duplicate vertex ids".into()));
        }
        let mut tetrahedra = Vec::new();
        for (t, verts) in data.tetrahedra.iter().enumerate() {
            if let Some(v) = verts.iter().find(|v| !known.contains(v)) {
                return Err(Error::Validation(format!("tetrahedron {t} uses unknown vertex {v}")));
            }
            let mut sorted = *verts;
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Validation(format!("tetrahedron {t} repeats a vertex")));
            }
            let inversions = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).filter(|(i, j)| verts[*i] > verts[*j]).count();
            tetrahedra.push(Tetrahedron { sorted, positive: inversions % 2 == 0 });
        }

        // faces: each sorted triple must occur in exactly two tetrahedra, once with each induced orientation
        let mut face_uses: BTreeMap<[u32; 3], Vec<bool>> = BTreeMap::new();
        for t in &tetrahedra {
            for (opposite, tri) in faces_of(&t.sorted) {
                let induced = t.positive ^ (opposite % 2 == 1);
                face_uses.entry(tri).or_default().push(induced);
            }
        }
        let bad: Vec<String> = face_uses
            .iter()
            .filter(|(_, u)| u.len() != 2 || u[0] == u[1])
            .map(|(f, u)| format!("{f:?} ({} uses)", u.len()))
            .collect();
        if !bad.is_empty() {
            return Err(Error::Validation(format!(
                "every face must belong to exactly two tetrahedra with opposite orientations; offending faces: {}",
                bad.join(", ")
            )));
        }

        // edge classes
        let mut pair_list: Vec<(u32, u32)> = Vec::new();
        for t in &tetrahedra {
            for i in 0..4 {
                for j in i + 1..4 {
                    pair_list.push((t.sorted[i], t.sorted[j]));
                }
            }
        }
        pair_list.sort_unstable();
        pair_list.dedup();
        let index: HashMap<(u32, u32), usize> = pair_list.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let mut classes = Classes { parent: (0..pair_list.len()).collect(), flip: vec![false; pair_list.len()] };
        for [[a, b], [c, d]] in &data.edge_glue {
            let (p, fp) = sorted_pair(*a, *b);
            let (q, fq) = sorted_pair(*c, *d);
            let (Some(&ip), Some(&iq)) = (index.get(&p), index.get(&q)) else {
                return Err(Error::Validation(format!("edgeGlue names a pair that is not an edge: [{a},{b}] or [{c},{d}]")));
            };
            if !classes.union(ip, iq, fp ^ fq) {
                return Err(Error::Validation(format!("edgeGlue [{a},{b}] ~ [{c},{d}] contradicts earlier identifications")));
            }
        }
        let mut members: BTreeMap<usize, Vec<(usize, bool)>> = BTreeMap::new();
        for i in 0..pair_list.len() {
            let (root, f) = classes.find(i);
            members.entry(root).or_default().push((i, f));
        }
        // order classes by their smallest member; orient by it
        let mut groups: Vec<Vec<(usize, bool)>> = members.into_values().collect();
        groups.sort_by_key(|g| g[0].0);
        let mut edges = Vec::new();
        let mut pairs = HashMap::new();
        for (e, g) in groups.iter().enumerate() {
            let base = g[0].1;
            edges.push(g.iter().map(|(i, _)| pair_list[*i]).collect());
            for (i, f) in g {
                pairs.insert(pair_list[*i], OrientedEdge { edge: e, reversed: f ^ base });
            }
        }

        // cocycle
        let mut cocycle = Vec::with_capacity(edges.len());
        for e in 0..edges.len() {
            let raw = data
                .cocycle
                .get(&e.to_string())
                .ok_or_else(|| Error::Validation(format!("cocycle has no value on edge {e}")))?;
            let v = parse_rational(raw)?;
            if !is_generic_grading(&v) {
                return Err(Error::Validation(format!("cocycle value {raw} on edge {e} lies in (1/2)Z/Z")));
            }
            cfg.check_exponent(&v).map_err(|_| {
                Error::Validation(format!("cocycle value {raw} on edge {e} needs a larger denomBound than {}", data.denom_bound))
            })?;
            cocycle.push(frac(&v));
        }
        if let Some(k) = data.cocycle.keys().find(|k| k.parse::<usize>().map_or(true, |e| e >= edges.len())) {
            return Err(Error::Validation(format!("cocycle names unknown edge {k}")));
        }
        let mut tri = HTriangulation {
            cfg,
            edges,
            cocycle,
            link: Vec::new(),
            pairs,
            tetrahedra,
            faces: face_uses.keys().copied().collect(),
        };
        let value = |t: &HTriangulation, a: u32, b: u32| -> Rational {
            let o = t.oriented(a, b);
            if o.reversed {
                -t.cocycle[o.edge].clone()
            } else {
                t.cocycle[o.edge].clone()
            }
        };
        let broken: Vec<String> = tri
            .faces
            .iter()
            .filter(|[a, b, c]| frac(&(value(&tri, *a, *b) + value(&tri, *b, *c) - value(&tri, *a, *c))) != int(0))
            .map(|f| format!("{f:?}"))
            .collect();
        if !broken.is_empty() {
            return Err(Error::Validation(format!("cocycle condition fails on faces {}", broken.join(", "))));
        }

        // link
        let mut link = vec![false; tri.edges.len()];
        for e in &data.link_edges {
            *link.get_mut(*e).ok_or_else(|| Error::Validation(format!("link edge {e} does not exist")))? = true;
        }
        if link.iter().any(|x| *x) {
            let mut degree: BTreeMap<u32, usize> = data.vertices.iter().map(|v| (*v, 0)).collect();
            for (e, on) in link.iter().enumerate() {
                if !on {
                    continue;
                }
                let mut touched: Vec<u32> = tri.edges[e].iter().flat_map(|(a, b)| [*a, *b]).collect();
                touched.sort_unstable();
                touched.dedup();
                for v in touched {
                    *degree.get_mut(&v).expect("validated vertex") += 1;
                }
            }
            let off: Vec<String> = degree.iter().filter(|(_, d)| **d != 2).map(|(v, d)| format!("{v} ({d})")).collect();
            if !off.is_empty() {
                return Err(Error::Validation(format!(
                    "every vertex must lie on exactly two link edges; offending vertices: {}",
                    off.join(", ")
                )));
            }
        }
        tri.link = link;
        Ok(tri)
    }

    pub fn oriented(&self, a: u32, b: u32) -> OrientedEdge {
        let (p, flip) = sorted_pair(a, b);
        let o = self.pairs[&p];
        OrientedEdge { edge: o.edge, reversed: o.reversed ^ flip }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn tetrahedron_count(&self) -> usize {
        self.tetrahedra.len()
    }
}

/// The faces of a sorted tetrahedron with the position of the opposite vertex.
pub(crate) fn faces_of(t: &[u32; 4]) -> [(usize, [u32; 3]); 4] {
    [(0, [t[1], t[2], t[3]]), (1, [t[0], t[2], t[3]]), (2, [t[0], t[1], t[3]]), (3, [t[0], t[1], t[2]])]
}
