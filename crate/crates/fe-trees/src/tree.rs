use crate::TreesError;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Enumeration and the weight machinery are exponential in the leaf count;
/// everything downstream needs at most seven legs.
pub const MAX_LEAVES: usize = 7;

/// At most two stars ever appear on one tree (one per hollow end, or a single
/// spare), so the constructor refuses anything beyond that.
pub const MAX_STAR_TOTAL: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldLabel {
    A,
    #[serde(rename = "c")]
    C,
    #[serde(rename = "cbar")]
    CBar,
    #[serde(rename = "gamma")]
    Gamma,
    #[serde(rename = "omega")]
    Omega,
    #[serde(rename = "beta")]
    Beta,
}

impl FieldLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            FieldLabel::A => "A",
            FieldLabel::C => "c",
            FieldLabel::CBar => "cbar",
            FieldLabel::Gamma => "gamma",
            FieldLabel::Omega => "omega",
            FieldLabel::Beta => "beta",
        }
    }

    /// Source legs divide the amplitude by one propagator power each.
    pub fn is_source(self) -> bool {
        matches!(self, FieldLabel::Gamma | FieldLabel::Omega)
    }
}

impl fmt::Display for FieldLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Regular,
    Hollow,
}

/// A tree with `n` distinguishable leaves and `n - 2` unlabeled trivalent
/// internal vertices. Identity is structural: the constructor renumbers
/// internal vertices and edges into a canonical form (a depth-first walk from
/// leaf 0, children ordered by their subtree encoding), so two trees compare
/// equal exactly when some leaf-fixing isomorphism relates them.
///
/// Id conventions after canonicalization:
/// - vertices: leaves `0..n-1`, internal `n..2n-3`;
/// - edges: external edge `i` is the unique edge at leaf `i` (`0..n-1`),
///   internal edges get `n..2n-4` in walk order;
/// - every stored edge pair is oriented `(toward leaf 0, away)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "TreeJson", try_from = "TreeJson")]
pub struct WeightedTree {
    labels: Vec<FieldLabel>,
    edges: Vec<(usize, usize)>,
    hollow: Vec<bool>,
    stars: Vec<u8>,
}

impl WeightedTree {
    /// Builds and canonicalizes a tree. Inputs may use any internal
    /// vertex numbering in `n..2n-3` and list edges in any order; `stars`
    /// aligns with the input edge order and `hollow` with `vertex - n`.
    pub fn new(
        labels: Vec<FieldLabel>,
        edges: Vec<(usize, usize)>,
        hollow: Vec<bool>,
        stars: Vec<u8>,
    ) -> Result<Self, TreesError> {
        Self::new_mapped(labels, edges, hollow, stars).map(|(t, _)| t)
    }

    /// Same as `new`, also returning the map from input edge positions to
    /// canonical edge ids (the reduction needs to follow edges through).
    pub(crate) fn new_mapped(
        labels: Vec<FieldLabel>,
        edges: Vec<(usize, usize)>,
        hollow: Vec<bool>,
        stars: Vec<u8>,
    ) -> Result<(Self, Vec<usize>), TreesError> {
        let n = labels.len();
        if !(3..=MAX_LEAVES).contains(&n) {
            return Err(TreesError::UnsupportedLeafCount(n));
        }
        let nv = 2 * n - 2;
        let ne = 2 * n - 3;
        if edges.len() != ne {
            return Err(TreesError::CountMismatch {
                what: "edges",
                expected: ne,
                got: edges.len(),
            });
        }
        if hollow.len() != n - 2 {
            return Err(TreesError::CountMismatch {
                what: "hollow flags",
                expected: n - 2,
                got: hollow.len(),
            });
        }
        if stars.len() != ne {
            return Err(TreesError::CountMismatch {
                what: "star counts",
                expected: ne,
                got: stars.len(),
            });
        }
        let star_total: usize = stars.iter().map(|&s| s as usize).sum();
        if star_total > MAX_STAR_TOTAL {
            return Err(TreesError::TooManyStars(star_total));
        }
        if n == 3 && hollow.iter().any(|h| !h) {
            return Err(TreesError::ThreePointMustBeHollow);
        }

        // Adjacency as (input edge index, other endpoint).
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
        for (ei, &(a, b)) in edges.iter().enumerate() {
            if a >= nv || b >= nv || a == b {
                return Err(TreesError::NotATree);
            }
            adj[a].push((ei, b));
            adj[b].push((ei, a));
        }
        for (v, inc) in adj.iter().enumerate() {
            let expected = if v < n { 1 } else { 3 };
            if inc.len() != expected {
                return Err(TreesError::BadValence {
                    vertex: v,
                    got: inc.len(),
                    expected,
                });
            }
        }
        // nv vertices with nv - 1 edges: connected implies tree.
        let mut seen = vec![false; nv];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(_, u) in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        if count != nv {
            return Err(TreesError::NotATree);
        }

        Ok(canonicalize(labels, &adj, &hollow, &stars))
    }

    pub fn leaf_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[FieldLabel] {
        &self.labels
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn internal_vertex_count(&self) -> usize {
        self.hollow.len()
    }

    /// Endpoints of edge `e`, oriented `(toward leaf 0, away from leaf 0)`.
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn stars(&self, e: usize) -> u8 {
        self.stars[e]
    }

    pub fn star_total(&self) -> usize {
        self.stars.iter().map(|&s| s as usize).sum()
    }

    pub fn starred_edges(&self) -> Vec<usize> {
        (0..self.edge_count()).filter(|&e| self.stars[e] > 0).collect()
    }

    pub fn is_external_edge(&self, e: usize) -> bool {
        e < self.leaf_count()
    }

    /// Internal vertex ids, `n..2n-3`.
    pub fn internal_vertices(&self) -> std::ops::Range<usize> {
        self.leaf_count()..2 * self.leaf_count() - 2
    }

    /// Internal edge ids, `n..2n-4`.
    pub fn internal_edges(&self) -> std::ops::Range<usize> {
        self.leaf_count()..self.edge_count()
    }

    pub fn is_hollow(&self, vertex: usize) -> bool {
        self.hollow[vertex - self.leaf_count()]
    }

    pub fn vertex_kind(&self, vertex: usize) -> VertexKind {
        if self.is_hollow(vertex) {
            VertexKind::Hollow
        } else {
            VertexKind::Regular
        }
    }

    pub fn hollow_count(&self) -> usize {
        self.hollow.iter().filter(|&&h| h).count()
    }

    pub fn incident_edges(&self, vertex: usize) -> Vec<usize> {
        (0..self.edge_count())
            .filter(|&e| {
                let (a, b) = self.edges[e];
                a == vertex || b == vertex
            })
            .collect()
    }

    /// The internal vertex next to leaf `i` (its unique neighbor).
    pub fn leaf_neighbor(&self, leaf: usize) -> usize {
        let (a, b) = self.edges[leaf];
        if a == leaf {
            b
        } else {
            a
        }
    }

    /// External edges whose leaf carries a source label.
    pub fn source_edges(&self) -> Vec<usize> {
        (0..self.leaf_count())
            .filter(|&i| self.labels[i].is_source())
            .collect()
    }

    /// Leaves on the far side of `e` as seen from leaf 0, sorted ascending.
    /// For the external edge `i != 0` this is `{i}`; for edge 0 it is all
    /// other leaves.
    pub fn far_leaves(&self, e: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![self.edges[e].1];
        while let Some(v) = stack.pop() {
            if v < self.leaf_count() {
                out.push(v);
            } else {
                for ce in 0..self.edge_count() {
                    if self.edges[ce].0 == v {
                        stack.push(self.edges[ce].1);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn far_leaf_sets(&self) -> Vec<Vec<usize>> {
        (0..self.edge_count()).map(|e| self.far_leaves(e)).collect()
    }

    /// Plain trees carry no stars and (beyond three leaves) only regular
    /// vertices; three-leaf trees are all-hollow by construction.
    pub fn is_plain(&self) -> bool {
        self.star_total() == 0 && (self.leaf_count() == 3 || self.hollow_count() == 0)
    }

    /// Star/flag shape only: total stars == hollow count (possibly plus one
    /// spare). Flag shape for leaf count 3 is forced at construction.
    pub fn star_defect(&self) -> Option<usize> {
        self.star_total().checked_sub(self.hollow_count())
    }

    /// Checks the gluing-fragment conditions: the star total exceeds the
    /// hollow count by zero or one, and every hollow vertex keeps at least two
    /// external edges, at least one of them starred.
    pub fn fragment_check(&self) -> Result<(), TreesError> {
        let stars = self.star_total();
        let hollow = self.hollow_count();
        if !matches!(self.star_defect(), Some(0) | Some(1)) {
            return Err(TreesError::FragmentStarCount { stars, hollow });
        }
        for v in self.internal_vertices() {
            if !self.is_hollow(v) {
                continue;
            }
            let ext: Vec<usize> = self
                .incident_edges(v)
                .into_iter()
                .filter(|&e| self.is_external_edge(e))
                .collect();
            if ext.len() < 2 || !ext.iter().any(|&e| self.stars[e] > 0) {
                return Err(TreesError::NotAFragment(v));
            }
        }
        Ok(())
    }

    pub fn is_fragment(&self) -> bool {
        self.fragment_check().is_ok()
    }

    /// Graphviz text: leaves as labeled boxes, regular vertices filled,
    /// hollow vertices open, stars shown on the edge label.
    pub fn to_graphviz(&self) -> String {
        let mut s = String::from("graph tree {\n  node [fontsize=10];\n");
        for (i, l) in self.labels.iter().enumerate() {
            s.push_str(&format!(
                "  l{i} [label=\"{l} {i}\" shape=box width=0.3 height=0.2];\n"
            ));
        }
        for v in self.internal_vertices() {
            let style = if self.is_hollow(v) { "" } else { " style=filled fillcolor=black" };
            s.push_str(&format!(
                "  v{v} [label=\"\" shape=circle width=0.12{style}];\n"
            ));
        }
        for e in 0..self.edge_count() {
            let (a, b) = self.edges[e];
            let name = |v: usize| {
                if v < self.leaf_count() {
                    format!("l{v}")
                } else {
                    format!("v{v}")
                }
            };
            let marks = "*".repeat(self.stars[e] as usize);
            s.push_str(&format!(
                "  {} -- {} [label=\"{}{}\"];\n",
                name(a),
                name(b),
                e,
                marks
            ));
        }
        s.push_str("}\n");
        s
    }
}

/// Subtree encoding used both for ordering children and as the canonical
/// identity; `(vertex, entering edge)` pairs map to byte strings where leaf
/// blocks are `[LEAF, index, stars]` and internal blocks wrap their sorted
/// children in `[OPEN, hollow, stars] .. [CLOSE]`.
const LEAF: u8 = 250;
const OPEN: u8 = 251;
const CLOSE: u8 = 252;

fn encode(
    u: usize,
    pe: usize,
    n: usize,
    adj: &[Vec<(usize, usize)>],
    hollow: &[bool],
    stars: &[u8],
) -> Vec<u8> {
    if u < n {
        return vec![LEAF, u as u8, stars[pe]];
    }
    let mut kids: Vec<Vec<u8>> = adj[u]
        .iter()
        .filter(|&&(e, _)| e != pe)
        .map(|&(e, v)| encode(v, e, n, adj, hollow, stars))
        .collect();
    kids.sort();
    let mut out = vec![OPEN, u8::from(hollow[u - n]), stars[pe]];
    for k in kids {
        out.extend(k);
    }
    out.push(CLOSE);
    out
}

struct Builder<'a> {
    n: usize,
    adj: &'a [Vec<(usize, usize)>],
    hollow_in: &'a [bool],
    stars_in: &'a [u8],
    edges: Vec<(usize, usize)>,
    stars: Vec<u8>,
    hollow: Vec<bool>,
    edge_map: Vec<usize>,
    next_vertex: usize,
    next_edge: usize,
}

impl Builder<'_> {
    fn descend(&mut self, u: usize, pe: usize, cu: usize) {
        self.hollow[cu - self.n] = self.hollow_in[u - self.n];
        let mut kids: Vec<(Vec<u8>, usize, usize)> = self.adj[u]
            .iter()
            .filter(|&&(e, _)| e != pe)
            .map(|&(e, v)| {
                (
                    encode(v, e, self.n, self.adj, self.hollow_in, self.stars_in),
                    e,
                    v,
                )
            })
            .collect();
        kids.sort();
        for (_, e, v) in kids {
            if v < self.n {
                self.edges[v] = (cu, v);
                self.stars[v] = self.stars_in[e];
                self.edge_map[e] = v;
            } else {
                let cv = self.next_vertex;
                self.next_vertex += 1;
                let ce = self.next_edge;
                self.next_edge += 1;
                self.edges[ce] = (cu, cv);
                self.stars[ce] = self.stars_in[e];
                self.edge_map[e] = ce;
                self.descend(v, e, cv);
            }
        }
    }
}

fn canonicalize(
    labels: Vec<FieldLabel>,
    adj: &[Vec<(usize, usize)>],
    hollow_in: &[bool],
    stars_in: &[u8],
) -> (WeightedTree, Vec<usize>) {
    let n = labels.len();
    let ne = 2 * n - 3;
    let (e0, u0) = adj[0][0];
    let mut b = Builder {
        n,
        adj,
        hollow_in,
        stars_in,
        edges: vec![(0, 0); ne],
        stars: vec![0; ne],
        hollow: vec![false; n - 2],
        edge_map: vec![0; ne],
        next_vertex: n + 1,
        next_edge: n,
    };
    b.edges[0] = (0, n);
    b.stars[0] = stars_in[e0];
    b.edge_map[e0] = 0;
    b.descend(u0, e0, n);
    (
        WeightedTree {
            labels,
            edges: b.edges,
            hollow: b.hollow,
            stars: b.stars,
        },
        b.edge_map,
    )
}

#[derive(Clone, Serialize, Deserialize)]
struct VertexJson {
    id: usize,
    kind: VertexKind,
}

#[derive(Clone, Serialize, Deserialize)]
struct EdgeJson {
    id: usize,
    ends: [usize; 2],
    #[serde(default)]
    stars: u8,
}

/// Wire form: leaf labels by position, internal vertices with their flag,
/// edges as id plus endpoint pair plus star count.
#[derive(Clone, Serialize, Deserialize)]
pub(crate) struct TreeJson {
    labels: Vec<FieldLabel>,
    vertices: Vec<VertexJson>,
    edges: Vec<EdgeJson>,
}

impl From<WeightedTree> for TreeJson {
    fn from(t: WeightedTree) -> Self {
        TreeJson {
            vertices: t
                .internal_vertices()
                .map(|v| VertexJson {
                    id: v,
                    kind: t.vertex_kind(v),
                })
                .collect(),
            edges: (0..t.edge_count())
                .map(|e| EdgeJson {
                    id: e,
                    ends: [t.edges[e].0, t.edges[e].1],
                    stars: t.stars[e],
                })
                .collect(),
            labels: t.labels,
        }
    }
}

impl TryFrom<TreeJson> for WeightedTree {
    type Error = TreesError;

    fn try_from(j: TreeJson) -> Result<Self, TreesError> {
        let n = j.labels.len();
        if !(3..=MAX_LEAVES).contains(&n) {
            return Err(TreesError::UnsupportedLeafCount(n));
        }
        let ne = 2 * n - 3;
        if j.vertices.len() != n - 2 {
            return Err(TreesError::CountMismatch {
                what: "internal vertices",
                expected: n - 2,
                got: j.vertices.len(),
            });
        }
        let mut hollow = vec![None; n - 2];
        for v in &j.vertices {
            if !(n..2 * n - 2).contains(&v.id) || hollow[v.id - n].is_some() {
                return Err(TreesError::NotATree);
            }
            hollow[v.id - n] = Some(v.kind == VertexKind::Hollow);
        }
        if j.edges.len() != ne {
            return Err(TreesError::CountMismatch {
                what: "edges",
                expected: ne,
                got: j.edges.len(),
            });
        }
        let mut edges = vec![None; ne];
        let mut stars = vec![0u8; ne];
        for e in &j.edges {
            if e.id >= ne || edges[e.id].is_some() {
                return Err(TreesError::NotATree);
            }
            edges[e.id] = Some((e.ends[0], e.ends[1]));
            stars[e.id] = e.stars;
        }
        WeightedTree::new(
            j.labels,
            edges.into_iter().map(|e| e.unwrap()).collect(),
            hollow.into_iter().map(|h| h.unwrap()).collect(),
            stars,
        )
    }
}
