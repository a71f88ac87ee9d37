//! Admissible graphs: interior (first type), boundary (second type) and white vertices.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Endpoint of an edge leaving an interior vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    Interior(usize),
    Boundary(usize),
    White(usize),
}

impl Target {
    pub fn is_black(self) -> bool {
        !matches!(self, Target::White(_))
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Interior(j) => write!(f, "i{j}"),
            Target::Boundary(j) => write!(f, "b{j}"),
            Target::White(j) => write!(f, "w{j}"),
        }
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("edge target {s:?}; expected i<n>, b<n> or w<n>"));
        if s.len() < 2 || !s.is_char_boundary(1) {
            return Err(bad());
        }
        let (kind, num) = s.split_at(1);
        let j: usize = num.parse().map_err(|_| bad())?;
        match kind {
            "i" => Ok(Target::Interior(j)),
            "b" => Ok(Target::Boundary(j)),
            "w" => Ok(Target::White(j)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for Target {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Target {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Interior vertex `i` has out-degree `k[i]`, v-degree `deg[i]` and the ordered targets `edges[i]`.
/// Boundary vertex 0 is the basepoint carrying `a_0`; `m` counts all boundary vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AdmissibleGraph {
    pub m: usize,
    pub n_w: usize,
    pub k: Vec<usize>,
    pub deg: Vec<u32>,
    pub edges: Vec<Vec<Target>>,
}

/// A violated graph rule, numbered as in the definition of admissible graphs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleViolation {
    pub rule: u8,
    pub detail: String,
}

/// Canonical identifier of an equivalence class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GraphClassKey(pub String);

impl fmt::Display for GraphClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An edge addressed by its source interior vertex and its position in that vertex's list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeRef {
    pub vertex: usize,
    pub slot: usize,
}

impl AdmissibleGraph {
    /// Builds a graph from target lists; out-degrees are read off and whites are counted.
    pub fn new(m: usize, deg: Vec<u32>, edges: Vec<Vec<Target>>) -> Self {
        let k = edges.iter().map(|e| e.len()).collect();
        let n_w = edges.iter().flatten().filter(|t| !t.is_black()).count();
        AdmissibleGraph { m, n_w, k, deg, edges }
    }

    pub fn n(&self) -> usize {
        self.edges.len()
    }

    /// Total number of edges.
    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(|e| e.len()).sum()
    }

    /// All edges in the global order: by source vertex, then by position.
    pub fn edge_refs(&self) -> Vec<EdgeRef> {
        let mut v = Vec::new();
        for (i, es) in self.edges.iter().enumerate() {
            for slot in 0..es.len() {
                v.push(EdgeRef { vertex: i, slot });
            }
        }
        v
    }

    pub fn target(&self, e: EdgeRef) -> Target {
        self.edges[e.vertex][e.slot]
    }

    /// Black-to-black edges in the global order.
    pub fn black_edges(&self) -> Vec<EdgeRef> {
        self.edge_refs().into_iter().filter(|e| self.target(*e).is_black()).collect()
    }

    pub fn white_count(&self, i: usize) -> usize {
        self.edges[i].iter().filter(|t| !t.is_black()).count()
    }

    /// `r_i = deg_i + #(white targets of i)`.
    pub fn r(&self, i: usize) -> u32 {
        self.deg[i] + self.white_count(i) as u32
    }

    /// An interior vertex with no incoming or outgoing edges.
    pub fn is_disconnected(&self, i: usize) -> bool {
        self.edges[i].is_empty() && !self.edges.iter().flatten().any(|t| *t == Target::Interior(i))
    }

    /// Checks the five graph rules and reports every violation.
    pub fn validate(&self) -> std::result::Result<(), Vec<RuleViolation>> {
        let mut v = Vec::new();
        let n = self.n();
        if self.k.len() != n || self.deg.len() != n {
            v.push(RuleViolation {
                rule: 1,
                detail: format!("{} target lists, {} out-degrees, {} v-degrees", n, self.k.len(), self.deg.len()),
            });
        }
        for (i, es) in self.edges.iter().enumerate() {
            if let Some(&k) = self.k.get(i) {
                if es.len() != k {
                    v.push(RuleViolation { rule: 1, detail: format!("vertex i{i} has {} edges, expected {k}", es.len()) });
                }
            }
        }
        if self.m == 0 {
            v.push(RuleViolation { rule: 2, detail: "there must be at least the basepoint boundary vertex".into() });
        }
        let mut white_in = vec![0usize; self.n_w];
        for (i, es) in self.edges.iter().enumerate() {
            for t in es {
                match *t {
                    Target::Interior(j) if j >= n => {
                        v.push(RuleViolation { rule: 1, detail: format!("edge from i{i} to missing vertex i{j}") })
                    }
                    Target::Boundary(j) if j >= self.m => {
                        v.push(RuleViolation { rule: 2, detail: format!("edge from i{i} to missing vertex b{j}") })
                    }
                    Target::White(j) if j >= self.n_w => {
                        v.push(RuleViolation { rule: 3, detail: format!("edge from i{i} to missing vertex w{j}") })
                    }
                    Target::White(j) => white_in[j] += 1,
                    Target::Interior(j) if j == i => {
                        v.push(RuleViolation { rule: 4, detail: format!("self-loop at i{i}") })
                    }
                    _ => {}
                }
            }
            for a in 0..es.len() {
                for b in a + 1..es.len() {
                    if es[a] == es[b] {
                        v.push(RuleViolation { rule: 5, detail: format!("two edges from i{i} to {}", es[a]) });
                    }
                }
            }
        }
        for (j, &c) in white_in.iter().enumerate() {
            if c != 1 {
                v.push(RuleViolation { rule: 3, detail: format!("white vertex w{j} has {c} incoming edges") });
            }
        }
        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }

    /// Relabels whites so that white `j` is the target of the `j`-th white edge in global order.
    pub fn canonical(&self) -> AdmissibleGraph {
        let mut next = 0;
        let edges = self
            .edges
            .iter()
            .map(|es| {
                es.iter()
                    .map(|t| match t {
                        Target::White(_) => {
                            next += 1;
                            Target::White(next - 1)
                        }
                        other => *other,
                    })
                    .collect()
            })
            .collect();
        AdmissibleGraph { m: self.m, n_w: self.n_w, k: self.k.clone(), deg: self.deg.clone(), edges }
    }

    fn key_string(&self) -> String {
        let mut s = format!("m{}", self.m);
        for (i, es) in self.edges.iter().enumerate() {
            s.push_str(&format!("|d{}:", self.deg[i]));
            let parts: Vec<String> = es
                .iter()
                .map(|t| match t {
                    Target::White(_) => "w".to_string(),
                    other => other.to_string(),
                })
                .collect();
            s.push_str(&parts.join(","));
        }
        s
    }

    /// Deterministic class key; errors on an invalid graph.
    pub fn canonical_key(&self) -> Result<GraphClassKey> {
        self.validate().map_err(|v| Error::InvalidGraph(describe(&v)))?;
        Ok(GraphClassKey(self.key_string()))
    }

    /// Redirects the black-to-black edge `e` to a fresh white vertex. Returns the
    /// canonicalized graph and `(−1)^{♯e}`, `♯e` the 1-based global position of `e`.
    pub fn edge_boundary(&self, e: EdgeRef) -> Result<(AdmissibleGraph, i8)> {
        self.validate().map_err(|v| Error::InvalidGraph(describe(&v)))?;
        let t = self
            .edges
            .get(e.vertex)
            .and_then(|es| es.get(e.slot))
            .copied()
            .ok_or(Error::NotBlackEdge { vertex: e.vertex, slot: e.slot })?;
        if !t.is_black() {
            return Err(Error::NotBlackEdge { vertex: e.vertex, slot: e.slot });
        }
        let pos = self.edges[..e.vertex].iter().map(|es| es.len()).sum::<usize>() + e.slot + 1;
        let mut g = self.clone();
        g.edges[e.vertex][e.slot] = Target::White(self.n_w);
        g.n_w += 1;
        Ok((g.canonical(), if pos % 2 == 1 { -1 } else { 1 }))
    }

    /// Graphviz rendering; white vertices are drawn hollow.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph G {\n  rankdir=TB;\n");
        for i in 0..self.n() {
            s.push_str(&format!("  i{i} [shape=circle, style=filled, fillcolor=black, fontcolor=white, label=\"i{i} d={}\"];\n", self.deg[i]));
        }
        for b in 0..self.m {
            s.push_str(&format!("  b{b} [shape=box, label=\"a{b}\"];\n"));
        }
        for w in 0..self.n_w {
            s.push_str(&format!("  w{w} [shape=circle, label=\"\"];\n"));
        }
        for (i, es) in self.edges.iter().enumerate() {
            for (slot, t) in es.iter().enumerate() {
                s.push_str(&format!("  i{i} -> {t} [label=\"{}\"];\n", slot + 1));
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Parses a class key such as `m2|d0:b1,w|d1:i0`; whites are relabeled canonically.
impl FromStr for AdmissibleGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("graph key {s:?}: {why}"));
        let mut parts = s.split('|');
        let head = parts.next().unwrap_or_default();
        let m: usize = head.strip_prefix('m').and_then(|n| n.parse().ok()).ok_or_else(|| bad("expected m<count>"))?;
        let mut deg = Vec::new();
        let mut edges = Vec::new();
        for part in parts {
            let (d, targets) = part.split_once(':').ok_or_else(|| bad("expected d<deg>:<targets>"))?;
            deg.push(d.strip_prefix('d').and_then(|n| n.parse().ok()).ok_or_else(|| bad("expected d<deg>"))?);
            let list = if targets.is_empty() {
                Vec::new()
            } else {
                targets.split(',').map(|t| if t == "w" { Ok(Target::White(0)) } else { t.parse() }).collect::<Result<Vec<_>>>()?
            };
            edges.push(list);
        }
        Ok(AdmissibleGraph::new(m, deg, edges).canonical())
    }
}

pub(crate) fn describe(v: &[RuleViolation]) -> String {
    v.iter().map(|r| format!("rule {}: {}", r.rule, r.detail)).collect::<Vec<_>>().join("; ")
}

/// A two-vertex graph in 𝒢_{(2,3),3} with one edge between the interior vertices.
pub fn two_vertex_example(deg: (u32, u32)) -> AdmissibleGraph {
    use Target::*;
    AdmissibleGraph::new(
        3,
        vec![deg.0, deg.1],
        vec![vec![Boundary(0), Interior(1)], vec![Boundary(1), Boundary(2), White(0)]],
    )
}
