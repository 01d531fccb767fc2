//! Ground sets, subset masks, labeled graph families, and the small exact
//! searches (vertex cover, C4 detection, maximum biclique size) that the
//! rest of the toolkit builds on.
//!
//! Conventions used everywhere:
//! - Ground sets are `{1, ..., t}` with `t <= 63`; element `i` is bit `i - 1`.
//! - For a fixed subset size, increasing mask value is exactly colexicographic
//!   order, and the colex rank of a vertex is its canonical integer id.
//! - Witnesses are reported in a fixed deterministic order so repeated runs
//!   produce identical output.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum ground-set size. Element `i` lives in bit `i - 1` of a `u64`,
/// and one spare bit keeps complement arithmetic trivially safe.
pub const MAX_GROUND: u8 = 63;

/// Caps on graph materialization. These are practical desk-scale limits,
/// not mathematical ones; constructors fail loudly beyond them.
pub const MAX_GRAPH_VERTICES: u64 = 4096;
pub const MAX_GRAPH_EDGES: u64 = 2_000_000;

/// Binomial coefficient as an exact `u128`.
///
/// # Panics
/// Panics if the intermediate product would overflow, which cannot happen
/// for `n <= 63` (the largest ground set this crate accepts).
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128).expect("binomial overflow");
        acc /= (i + 1) as u128;
    }
    acc
}

// ============================================================================
// Subset masks
// ============================================================================

/// A subset of the ground set `{1, ..., ground}` stored as a bitmask.
///
/// Element `i` corresponds to bit `i - 1`. For subsets of equal size,
/// comparing the raw masks numerically is colexicographic comparison.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SubsetMask {
    bits: u64,
    ground: u8,
}

impl SubsetMask {
    pub fn new(bits: u64, ground: u8) -> Result<Self> {
        if ground == 0 || ground > MAX_GROUND {
            return Err(Error::parameter(format!(
                "ground set size must be in 1..={MAX_GROUND}, got {ground}"
            )));
        }
        if bits >= (1u64 << ground) {
            return Err(Error::parameter(format!(
                "mask {bits:#x} has elements outside the ground set of size {ground}"
            )));
        }
        Ok(SubsetMask { bits, ground })
    }

    pub fn empty(ground: u8) -> Result<Self> {
        SubsetMask::new(0, ground)
    }

    pub fn full(ground: u8) -> Result<Self> {
        if ground == 0 || ground > MAX_GROUND {
            return Err(Error::parameter(format!(
                "ground set size must be in 1..={MAX_GROUND}, got {ground}"
            )));
        }
        Ok(SubsetMask {
            bits: (1u64 << ground) - 1,
            ground,
        })
    }

    pub fn from_elems(elems: &[u8], ground: u8) -> Result<Self> {
        let mut bits = 0u64;
        for &e in elems {
            if e == 0 || e > ground {
                return Err(Error::parameter(format!(
                    "element {e} outside ground set 1..={ground}"
                )));
            }
            let bit = 1u64 << (e - 1);
            if bits & bit != 0 {
                return Err(Error::parameter(format!("repeated element {e}")));
            }
            bits |= bit;
        }
        SubsetMask::new(bits, ground)
    }

    #[inline(always)]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline(always)]
    pub fn ground(&self) -> u8 {
        self.ground
    }

    #[inline(always)]
    pub fn size(&self) -> u32 {
        self.bits.count_ones()
    }

    #[inline(always)]
    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    #[inline(always)]
    pub fn contains(&self, elem: u8) -> bool {
        elem >= 1 && elem <= self.ground && (self.bits >> (elem - 1)) & 1 == 1
    }

    #[inline(always)]
    pub fn is_disjoint(&self, other: &SubsetMask) -> bool {
        debug_assert_eq!(self.ground, other.ground);
        self.bits & other.bits == 0
    }

    #[inline(always)]
    pub fn is_subset_of(&self, other: &SubsetMask) -> bool {
        debug_assert_eq!(self.ground, other.ground);
        self.bits & !other.bits == 0
    }

    pub fn complement(&self) -> SubsetMask {
        SubsetMask {
            bits: !self.bits & ((1u64 << self.ground) - 1),
            ground: self.ground,
        }
    }

    pub fn union(&self, other: &SubsetMask) -> SubsetMask {
        debug_assert_eq!(self.ground, other.ground);
        SubsetMask {
            bits: self.bits | other.bits,
            ground: self.ground,
        }
    }

    pub fn intersection(&self, other: &SubsetMask) -> SubsetMask {
        debug_assert_eq!(self.ground, other.ground);
        SubsetMask {
            bits: self.bits & other.bits,
            ground: self.ground,
        }
    }

    /// Elements in increasing order, 1-based.
    pub fn elems(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.size() as usize);
        let mut bits = self.bits;
        while bits != 0 {
            let b = bits.trailing_zeros() as u8;
            out.push(b + 1);
            bits &= bits - 1;
        }
        out
    }

    /// Rank of this subset among all subsets of the same size in
    /// colexicographic order. For `{a_1 < ... < a_k}` this is
    /// `sum_j C(a_j - 1, j)`.
    pub fn colex_rank(&self) -> u64 {
        let mut rank: u128 = 0;
        for (j, a) in self.elems().into_iter().enumerate() {
            rank += binomial((a - 1) as u64, (j + 1) as u64);
        }
        rank as u64
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elems().into_iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}/{}", self.ground)
    }
}

/// All `k`-subsets of `{1, ..., t}` in colexicographic order.
///
/// Uses the standard bit trick for enumerating fixed-popcount masks in
/// increasing numeric order, which coincides with colex order.
pub fn enumerate_ksubsets(t: u8, k: u8) -> Result<Vec<SubsetMask>> {
    if t == 0 || t > MAX_GROUND {
        return Err(Error::parameter(format!(
            "ground set size must be in 1..={MAX_GROUND}, got {t}"
        )));
    }
    if k > t {
        return Err(Error::parameter(format!(
            "subset size {k} exceeds ground set size {t}"
        )));
    }
    let count = binomial(t as u64, k as u64) as usize;
    let mut out = Vec::with_capacity(count);
    if k == 0 {
        out.push(SubsetMask { bits: 0, ground: t });
        return Ok(out);
    }
    let limit = 1u64 << t;
    let mut bits = (1u64 << k) - 1;
    while bits < limit {
        out.push(SubsetMask { bits, ground: t });
        // Next mask with the same popcount in increasing numeric order.
        let low = bits & bits.wrapping_neg();
        let ripple = bits + low;
        bits = ripple | (((bits ^ ripple) >> 2) / low);
    }
    debug_assert_eq!(out.len(), count);
    Ok(out)
}

/// All nonempty subsets of `{1, ..., t}` of size at most `max_size`, sorted
/// lexicographically by their increasing element tuples. This is the scan
/// order used for least-witness reporting.
pub fn subsets_up_to_lex(t: u8, max_size: u8) -> Result<Vec<SubsetMask>> {
    let mut out = Vec::new();
    for k in 1..=max_size.min(t) {
        out.extend(enumerate_ksubsets(t, k)?);
    }
    out.sort_by_key(|a| a.elems());
    Ok(out)
}

// ============================================================================
// Labeled graphs
// ============================================================================

/// Side tag distinguishing the two parts of a bipartite family. Vertices of
/// non-bipartite families carry `Side::None`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Side {
    None,
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::None => Ok(()),
            Side::Left => write!(f, "L"),
            Side::Right => write!(f, "R"),
        }
    }
}

/// A graph vertex: a subset label plus a side tag. Complete-graph vertices
/// are singleton subsets, so every family shares one label type.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Vertex {
    pub mask: SubsetMask,
    pub side: Side,
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.side, self.mask)
    }
}

/// The graph families the toolkit constructs. `Custom` covers derived
/// graphs such as homomorphism preimages.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GraphFamily {
    /// Vertices: r-subsets of `{1..t}`; edges join disjoint subsets.
    Kneser {
        t: u8,
        r: u8,
    },
    /// Bipartite: w-subsets (left) vs r-subsets (right); edges join
    /// disjoint subsets across sides.
    Intersection {
        t: u8,
        r: u8,
        w: u8,
    },
    /// Complete graph on n vertices, labeled by singletons.
    Complete {
        n: u8,
    },
    /// Complete bipartite graph on m + m vertices minus the perfect
    /// matching that pairs equal indices.
    CompleteBipartiteMinusMatching {
        m: u8,
    },
    Custom,
}

impl GraphFamily {
    /// Compact descriptor used by files and the command line.
    pub fn descriptor(&self) -> String {
        match self {
            GraphFamily::Kneser { t, r } => format!("kneser:{t},{r}"),
            GraphFamily::Intersection { t, r, w } => format!("inter:{t},{r},{w}"),
            GraphFamily::Complete { n } => format!("kn:{n}"),
            GraphFamily::CompleteBipartiteMinusMatching { m } => format!("kmm:{m}"),
            GraphFamily::Custom => "custom".to_string(),
        }
    }

    pub fn parse_descriptor(s: &str) -> Result<GraphFamily> {
        let bad = || Error::parameter(format!("unrecognized graph descriptor `{s}`"));
        if s == "custom" {
            return Ok(GraphFamily::Custom);
        }
        let (head, args) = s.split_once(':').ok_or_else(bad)?;
        let nums: Vec<u8> = args
            .split(',')
            .map(|p| p.trim().parse::<u8>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match (head, nums.as_slice()) {
            ("kneser", [t, r]) => Ok(GraphFamily::Kneser { t: *t, r: *r }),
            ("inter", [t, r, w]) => Ok(GraphFamily::Intersection {
                t: *t,
                r: *r,
                w: *w,
            }),
            ("kn", [n]) => Ok(GraphFamily::Complete { n: *n }),
            ("kmm", [m]) => Ok(GraphFamily::CompleteBipartiteMinusMatching { m: *m }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for GraphFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.descriptor())
    }
}

impl Serialize for GraphFamily {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.descriptor())
    }
}

impl<'de> Deserialize<'de> for GraphFamily {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        GraphFamily::parse_descriptor(&s).map_err(serde::de::Error::custom)
    }
}

/// An undirected graph with labeled vertices in a fixed canonical order.
///
/// The canonical order is colexicographic within each side block (left
/// block first for bipartite families), and a vertex's position in the
/// order is its canonical integer id.
#[derive(Clone, Debug)]
pub struct LabeledGraph {
    family: GraphFamily,
    vertices: Vec<Vertex>,
    /// Sorted list of `(u, v)` with `u < v`.
    edges: Vec<(u32, u32)>,
    /// Sorted neighbor lists.
    adj: Vec<Vec<u32>>,
    index: HashMap<Vertex, u32>,
}

impl LabeledGraph {
    fn build(
        family: GraphFamily,
        vertices: Vec<Vertex>,
        mut edges: Vec<(u32, u32)>,
    ) -> Result<Self> {
        if vertices.len() as u64 > MAX_GRAPH_VERTICES {
            return Err(Error::parameter(format!(
                "graph would have {} vertices, exceeding the materialization cap {}",
                vertices.len(),
                MAX_GRAPH_VERTICES
            )));
        }
        if edges.len() as u64 > MAX_GRAPH_EDGES {
            return Err(Error::parameter(format!(
                "graph would have {} edges, exceeding the materialization cap {}",
                edges.len(),
                MAX_GRAPH_EDGES
            )));
        }
        edges.sort_unstable();
        edges.dedup();
        let mut adj = vec![Vec::new(); vertices.len()];
        for &(u, v) in &edges {
            if u == v || v as usize >= vertices.len() {
                return Err(Error::parameter(format!("edge ({u},{v}) is out of range")));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(*v, i as u32).is_some() {
                return Err(Error::parameter(format!("duplicate vertex label {v}")));
            }
        }
        Ok(LabeledGraph {
            family,
            vertices,
            edges,
            adj,
            index,
        })
    }

    /// Kneser graph KG(t, r): disjoint r-subsets of `{1..t}` are adjacent.
    /// For `t < 2r` the graph is edgeless; see [`LabeledGraph::degenerate_warning`].
    pub fn kneser(t: u8, r: u8) -> Result<Self> {
        if r == 0 {
            return Err(Error::parameter("kneser graph requires r >= 1"));
        }
        if r > t {
            return Err(Error::parameter(format!(
                "kneser graph requires r <= t, got t={t}, r={r}"
            )));
        }
        if binomial(t as u64, r as u64) > MAX_GRAPH_VERTICES as u128 {
            return Err(Error::parameter(format!(
                "kneser:{t},{r} would have {} vertices, exceeding the cap {}",
                binomial(t as u64, r as u64),
                MAX_GRAPH_VERTICES
            )));
        }
        let masks = enumerate_ksubsets(t, r)?;
        let vertices: Vec<Vertex> = masks
            .iter()
            .map(|&mask| Vertex {
                mask,
                side: Side::None,
            })
            .collect();
        let mut edges = Vec::new();
        for i in 0..masks.len() {
            for j in (i + 1)..masks.len() {
                if masks[i].is_disjoint(&masks[j]) {
                    edges.push((i as u32, j as u32));
                }
            }
        }
        Self::build(GraphFamily::Kneser { t, r }, vertices, edges)
    }

    /// Bipartite disjointness graph I_t(r, w): w-subsets on the left,
    /// r-subsets on the right, edges between disjoint subsets.
    pub fn intersection_bigraph(t: u8, r: u8, w: u8) -> Result<Self> {
        if r == 0 || w == 0 {
            return Err(Error::parameter("intersection graph requires r, w >= 1"));
        }
        if (r as u16) + (w as u16) > t as u16 {
            return Err(Error::parameter(format!(
                "intersection graph requires r + w <= t, got t={t}, r={r}, w={w}"
            )));
        }
        let total = binomial(t as u64, w as u64) + binomial(t as u64, r as u64);
        if total > MAX_GRAPH_VERTICES as u128 {
            return Err(Error::parameter(format!(
                "inter:{t},{r},{w} would have {total} vertices, exceeding the cap {MAX_GRAPH_VERTICES}"
            )));
        }
        let left = enumerate_ksubsets(t, w)?;
        let right = enumerate_ksubsets(t, r)?;
        let mut vertices = Vec::with_capacity(left.len() + right.len());
        vertices.extend(left.iter().map(|&mask| Vertex {
            mask,
            side: Side::Left,
        }));
        vertices.extend(right.iter().map(|&mask| Vertex {
            mask,
            side: Side::Right,
        }));
        let off = left.len() as u32;
        let mut edges = Vec::new();
        for (i, a) in left.iter().enumerate() {
            for (j, b) in right.iter().enumerate() {
                if a.is_disjoint(b) {
                    edges.push((i as u32, off + j as u32));
                }
            }
        }
        Self::build(GraphFamily::Intersection { t, r, w }, vertices, edges)
    }

    /// Complete graph on `{1..n}`, vertices labeled by singletons.
    pub fn complete(n: u8) -> Result<Self> {
        if n == 0 || n > MAX_GROUND {
            return Err(Error::parameter(format!(
                "complete graph order must be in 1..={MAX_GROUND}, got {n}"
            )));
        }
        let masks = enumerate_ksubsets(n, 1)?;
        let vertices: Vec<Vertex> = masks
            .iter()
            .map(|&mask| Vertex {
                mask,
                side: Side::None,
            })
            .collect();
        let mut edges = Vec::new();
        for i in 0..n as u32 {
            for j in (i + 1)..n as u32 {
                edges.push((i, j));
            }
        }
        Self::build(GraphFamily::Complete { n }, vertices, edges)
    }

    /// Complete bipartite graph K_{m,m} minus the perfect matching that
    /// pairs equal indices: left i is adjacent to right j iff i != j.
    pub fn complete_bipartite_minus_matching(m: u8) -> Result<Self> {
        if m == 0 || m > MAX_GROUND {
            return Err(Error::parameter(format!(
                "order must be in 1..={MAX_GROUND}, got {m}"
            )));
        }
        let masks = enumerate_ksubsets(m, 1)?;
        let mut vertices = Vec::with_capacity(2 * m as usize);
        vertices.extend(masks.iter().map(|&mask| Vertex {
            mask,
            side: Side::Left,
        }));
        vertices.extend(masks.iter().map(|&mask| Vertex {
            mask,
            side: Side::Right,
        }));
        let mut edges = Vec::new();
        for i in 0..m as u32 {
            for j in 0..m as u32 {
                if i != j {
                    edges.push((i, m as u32 + j));
                }
            }
        }
        Self::build(
            GraphFamily::CompleteBipartiteMinusMatching { m },
            vertices,
            edges,
        )
    }

    /// A graph with explicit vertices and edges, tagged `Custom`.
    pub fn custom(vertices: Vec<Vertex>, edges: Vec<(u32, u32)>) -> Result<Self> {
        let edges = edges
            .into_iter()
            .map(|(u, v)| if u < v { (u, v) } else { (v, u) })
            .collect();
        Self::build(GraphFamily::Custom, vertices, edges)
    }

    /// Rebuild a known family from its tag. Fails for `Custom`.
    pub fn from_family(family: GraphFamily) -> Result<Self> {
        match family {
            GraphFamily::Kneser { t, r } => Self::kneser(t, r),
            GraphFamily::Intersection { t, r, w } => Self::intersection_bigraph(t, r, w),
            GraphFamily::Complete { n } => Self::complete(n),
            GraphFamily::CompleteBipartiteMinusMatching { m } => {
                Self::complete_bipartite_minus_matching(m)
            }
            GraphFamily::Custom => Err(Error::parameter(
                "custom graphs cannot be rebuilt from a family tag",
            )),
        }
    }

    pub fn family(&self) -> GraphFamily {
        self.family
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn vertex(&self, id: u32) -> &Vertex {
        &self.vertices[id as usize]
    }

    pub fn vertex_id(&self, v: &Vertex) -> Option<u32> {
        self.index.get(v).copied()
    }

    pub fn neighbors(&self, id: u32) -> &[u32] {
        &self.adj[id as usize]
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    pub fn degree(&self, id: u32) -> usize {
        self.adj[id as usize].len()
    }

    /// A human-readable warning for degenerate parameter regimes, if any.
    pub fn degenerate_warning(&self) -> Option<String> {
        match self.family {
            GraphFamily::Kneser { t, r } if t < 2 * r => Some(format!(
                "kneser:{t},{r} has t < 2r, so the graph is edgeless"
            )),
            GraphFamily::CompleteBipartiteMinusMatching { m: 1 } => {
                Some("kmm:1 is edgeless".to_string())
            }
            _ => None,
        }
    }

    /// Adjacency as variable-width bitsets (`ceil(n/64)` words per row).
    pub fn bit_adjacency(&self) -> Vec<Vec<u64>> {
        let n = self.vertices.len();
        let words = n.div_ceil(64);
        let mut rows = vec![vec![0u64; words]; n];
        for &(u, v) in &self.edges {
            rows[u as usize][(v / 64) as usize] |= 1u64 << (v % 64);
            rows[v as usize][(u / 64) as usize] |= 1u64 << (u % 64);
        }
        rows
    }

    /// Adjacency as single `u128` rows, for the exact solvers.
    /// Errors if the graph has more than 128 vertices.
    pub fn adjacency_u128(&self) -> Result<Vec<u128>> {
        let n = self.vertices.len();
        if n > 128 {
            return Err(Error::parameter(format!(
                "exact search requires at most 128 vertices, graph has {n}"
            )));
        }
        let mut rows = vec![0u128; n];
        for &(u, v) in &self.edges {
            rows[u as usize] |= 1u128 << v;
            rows[v as usize] |= 1u128 << u;
        }
        Ok(rows)
    }

    /// Render a vertex id as its label, e.g. `{1,3}` or `L{2}`.
    pub fn label(&self, id: u32) -> String {
        self.vertices[id as usize].to_string()
    }
}

// ============================================================================
// Search budget
// ============================================================================

/// Budget for the exact searches. Input-size caps make the exponential
/// solvers refuse oversized instances up front; the node cap terminates
/// pathological runs that slip past the size caps.
#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    /// Cap on vertex count for vertex-cover and maximum-biclique search.
    pub max_vertices: u32,
    /// Cap on edge count for biclique-cover and cover-free-family search.
    pub max_edges: u32,
    /// Cap on explored search-tree nodes for any single exact search.
    pub max_nodes: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_vertices: 64,
            max_edges: 40,
            max_nodes: 20_000_000,
        }
    }
}

impl SearchBudget {
    /// Budget with both input-size caps overridden by one scalar, the
    /// interpretation used for the `FRAMECOVER_BUDGET` environment variable.
    pub fn with_size_cap(cap: u32) -> Self {
        SearchBudget {
            max_vertices: cap,
            max_edges: cap,
            ..SearchBudget::default()
        }
    }
}

// ============================================================================
// Exact vertex cover
// ============================================================================

/// Exact minimum vertex cover by branch and bound.
///
/// Returns the covering number and one minimum cover (sorted vertex ids).
/// The search is deterministic: reductions and branching always pick the
/// lowest-id vertex among ties, so the witness is stable across runs.
///
/// # Errors
/// `BudgetExceeded` if the graph has more vertices than
/// `budget.max_vertices` or the search explores more than
/// `budget.max_nodes` nodes.
pub fn covering_number(g: &LabeledGraph, budget: &SearchBudget) -> Result<(u32, Vec<u32>)> {
    let n = g.vertex_count();
    if n as u32 > budget.max_vertices {
        return Err(Error::BudgetExceeded {
            context: format!(
                "covering_number on {n} vertices exceeds the {}-vertex budget",
                budget.max_vertices
            ),
            best_lower: None,
            best_upper: None,
        });
    }
    if n > 128 {
        return Err(Error::parameter(
            "covering_number supports at most 128 vertices",
        ));
    }
    let adj = g.adjacency_u128()?;
    let full: u128 = if n == 128 { !0 } else { (1u128 << n) - 1 };

    // Deterministic greedy cover as the initial upper bound and witness.
    let (greedy_size, greedy_set) = greedy_vertex_cover(&adj, full);
    let mut search = VcSearch {
        adj: &adj,
        n: n as u32,
        best_size: greedy_size,
        best_set: greedy_set,
        nodes: 0,
        max_nodes: budget.max_nodes,
    };
    search.recurse(full, 0, 0)?;
    let mut cover = Vec::new();
    let mut bits = search.best_set;
    while bits != 0 {
        let v = bits.trailing_zeros();
        cover.push(v);
        bits &= bits - 1;
    }
    Ok((search.best_size, cover))
}

fn greedy_vertex_cover(adj: &[u128], full: u128) -> (u32, u128) {
    let mut active = full;
    let mut cover = 0u128;
    let mut size = 0u32;
    loop {
        let mut best_v = None;
        let mut best_deg = 0u32;
        let mut scan = active;
        while scan != 0 {
            let v = scan.trailing_zeros() as usize;
            scan &= scan - 1;
            let deg = (adj[v] & active).count_ones();
            if deg > best_deg {
                best_deg = deg;
                best_v = Some(v);
            }
        }
        match best_v {
            Some(v) => {
                cover |= 1u128 << v;
                size += 1;
                active &= !(1u128 << v);
            }
            None => return (size, cover),
        }
    }
}

struct VcSearch<'a> {
    adj: &'a [u128],
    n: u32,
    best_size: u32,
    best_set: u128,
    nodes: u64,
    max_nodes: u64,
}

impl VcSearch<'_> {
    fn recurse(&mut self, mut active: u128, mut cover: u128, mut size: u32) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::BudgetExceeded {
                context: format!("covering_number search passed {} nodes", self.max_nodes),
                best_lower: None,
                best_upper: Some(self.best_size as u64),
            });
        }

        // Reductions: drop isolated vertices; resolve degree-1 vertices by
        // taking their unique neighbor.
        loop {
            let mut changed = false;
            let mut scan = active;
            while scan != 0 {
                let v = scan.trailing_zeros() as usize;
                scan &= scan - 1;
                let nb = self.adj[v] & active;
                match nb.count_ones() {
                    0 => {
                        active &= !(1u128 << v);
                    }
                    1 => {
                        let w = nb.trailing_zeros() as usize;
                        cover |= 1u128 << w;
                        size += 1;
                        active &= !((1u128 << v) | (1u128 << w));
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                break;
            }
        }

        // Pick the highest-degree active vertex (lowest id on ties).
        let mut pivot = None;
        let mut pivot_deg = 0u32;
        let mut scan = active;
        while scan != 0 {
            let v = scan.trailing_zeros() as usize;
            scan &= scan - 1;
            let deg = (self.adj[v] & active).count_ones();
            if deg > pivot_deg {
                pivot_deg = deg;
                pivot = Some(v);
            }
        }
        let Some(v) = pivot else {
            // No edges left: candidate solution.
            if size < self.best_size {
                self.best_size = size;
                self.best_set = cover;
            }
            return Ok(());
        };

        if size + self.matching_bound(active) >= self.best_size {
            return Ok(());
        }

        // Branch: v in the cover, or all of v's neighbors are.
        self.recurse(active & !(1u128 << v), cover | (1u128 << v), size + 1)?;
        let nb = self.adj[v] & active;
        self.recurse(
            active & !(nb | (1u128 << v)),
            cover | nb,
            size + nb.count_ones(),
        )
    }

    /// Greedy maximal matching: its size lower-bounds any vertex cover.
    fn matching_bound(&self, active: u128) -> u32 {
        let mut unmatched = active;
        let mut count = 0u32;
        for v in 0..self.n as usize {
            if unmatched & (1u128 << v) == 0 {
                continue;
            }
            let nb = self.adj[v] & unmatched & !(1u128 << v);
            if nb != 0 {
                let w = nb.trailing_zeros();
                unmatched &= !((1u128 << v) | (1u128 << w));
                count += 1;
            }
        }
        count
    }
}

// ============================================================================
// C4 detection
// ============================================================================

/// The lexicographically least 4-cycle `(a, x, b, y)` in subgraph order,
/// if one exists: `a < b` are two vertices with common neighbors `x < y`,
/// and the edges `ax, xb, by, ya` are all present.
pub fn c4_witness(g: &LabeledGraph) -> Option<[u32; 4]> {
    let n = g.vertex_count();
    let rows = g.bit_adjacency();
    for a in 0..n {
        for b in (a + 1)..n {
            let mut first: Option<u32> = None;
            for (w, (&ra, &rb)) in rows[a].iter().zip(rows[b].iter()).enumerate() {
                let mut common = ra & rb;
                while common != 0 {
                    let x = (w * 64) as u32 + common.trailing_zeros();
                    common &= common - 1;
                    match first {
                        None => first = Some(x),
                        Some(f) => return Some([a as u32, f, b as u32, x]),
                    }
                }
            }
        }
    }
    None
}

/// Whether the graph contains no 4-cycle as a subgraph.
pub fn is_c4_free(g: &LabeledGraph) -> bool {
    c4_witness(g).is_none()
}

// ============================================================================
// Maximum biclique (by edge count)
// ============================================================================

/// Maximum of `|X| * |Y|` over complete bipartite subgraphs of `g` with
/// both sides nonempty (edges inside the sides are irrelevant). Returns 0
/// for edgeless graphs.
///
/// The search grows the X side one vertex at a time in increasing id order
/// while maintaining the common neighborhood as the Y side, so every
/// candidate pair is examined exactly once per orientation.
///
/// # Errors
/// `BudgetExceeded` on more than `budget.max_vertices` vertices or
/// `budget.max_nodes` explored nodes.
pub fn max_biclique_edges(g: &LabeledGraph, budget: &SearchBudget) -> Result<u64> {
    let n = g.vertex_count();
    if n as u32 > budget.max_vertices {
        return Err(Error::BudgetExceeded {
            context: format!(
                "max_biclique_edges on {n} vertices exceeds the {}-vertex budget",
                budget.max_vertices
            ),
            best_lower: None,
            best_upper: None,
        });
    }
    if g.edge_count() == 0 {
        return Ok(0);
    }
    let adj = g.adjacency_u128()?;
    let full: u128 = if n == 128 { !0 } else { (1u128 << n) - 1 };
    let mut best = 0u64;
    let mut nodes = 0u64;
    grow_biclique(
        &adj,
        n as u32,
        0,
        full,
        0,
        &mut best,
        &mut nodes,
        budget.max_nodes,
    )?;
    Ok(best)
}

#[allow(clippy::too_many_arguments)]
fn grow_biclique(
    adj: &[u128],
    n: u32,
    x: u128,
    common: u128,
    next: u32,
    best: &mut u64,
    nodes: &mut u64,
    max_nodes: u64,
) -> Result<()> {
    for v in next..n {
        if x & (1u128 << v) != 0 {
            continue;
        }
        let c2 = common & adj[v as usize];
        if c2 == 0 {
            continue;
        }
        *nodes += 1;
        if *nodes > max_nodes {
            return Err(Error::BudgetExceeded {
                context: format!("max_biclique_edges search passed {max_nodes} nodes"),
                best_lower: Some(*best),
                best_upper: None,
            });
        }
        let x2 = x | (1u128 << v);
        let size = (x2.count_ones() as u64) * (c2.count_ones() as u64);
        if size > *best {
            *best = size;
        }
        // Everything added later has id > v, so the X side can grow by at
        // most n - v - 1 more vertices while Y only shrinks.
        let ub = (x2.count_ones() as u64 + (n - v - 1) as u64) * (c2.count_ones() as u64);
        if ub > *best {
            grow_biclique(adj, n, x2, c2, v + 1, best, nodes, max_nodes)?;
        }
    }
    Ok(())
}

// ============================================================================
// Tests
// ============================================================================

#[cfg(test)]
mod tests {
    use super::*;

    fn petersen() -> LabeledGraph {
        LabeledGraph::kneser(5, 2).unwrap()
    }

    /// Brute-force covering number for small graphs: scan subsets by size.
    fn covering_number_brute(g: &LabeledGraph) -> u32 {
        let n = g.vertex_count();
        assert!(n <= 20);
        for k in 0..=n {
            let mut masks = vec![0u64];
            // All k-subsets of [n], numeric order.
            if k > 0 {
                masks.clear();
                let mut bits = (1u64 << k) - 1;
                while bits < (1u64 << n) {
                    masks.push(bits);
                    let low = bits & bits.wrapping_neg();
                    let ripple = bits + low;
                    bits = ripple | (((bits ^ ripple) >> 2) / low);
                }
            }
            for m in masks {
                if g.edges()
                    .iter()
                    .all(|&(u, v)| m & (1 << u) != 0 || m & (1 << v) != 0)
                {
                    return k as u32;
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn binomial_matches_pascal() {
        let mut pascal = vec![vec![0u128; 21]; 21];
        for n in 0..=20usize {
            pascal[n][0] = 1;
            for k in 1..=n {
                pascal[n][k] = pascal[n - 1][k - 1] + if k < n { pascal[n - 1][k] } else { 0 };
            }
        }
        for n in 0..=20u64 {
            for k in 0..=20u64 {
                assert_eq!(binomial(n, k), pascal[n as usize][k as usize], "C({n},{k})");
            }
        }
        assert_eq!(binomial(63, 31), 916312070471295267);
    }

    #[test]
    fn ksubsets_are_colex_ordered_and_complete() {
        let subs = enumerate_ksubsets(5, 2).unwrap();
        assert_eq!(subs.len(), 10);
        let as_elems: Vec<Vec<u8>> = subs.iter().map(|s| s.elems()).collect();
        assert_eq!(as_elems[0], vec![1, 2]);
        assert_eq!(as_elems[1], vec![1, 3]);
        assert_eq!(as_elems[2], vec![2, 3]);
        assert_eq!(as_elems[9], vec![4, 5]);
        for w in subs.windows(2) {
            assert!(
                w[0].bits() < w[1].bits(),
                "colex order is increasing mask order"
            );
        }
        for (i, s) in subs.iter().enumerate() {
            assert_eq!(s.colex_rank(), i as u64);
        }
    }

    #[test]
    fn ksubsets_edge_cases() {
        assert_eq!(enumerate_ksubsets(6, 0).unwrap().len(), 1);
        assert_eq!(enumerate_ksubsets(6, 6).unwrap().len(), 1);
        assert_eq!(enumerate_ksubsets(63, 1).unwrap().len(), 63);
        assert!(enumerate_ksubsets(64, 1).is_err());
        assert!(enumerate_ksubsets(4, 5).is_err());
    }

    #[test]
    fn subset_mask_basics() {
        let s = SubsetMask::from_elems(&[2, 5], 5).unwrap();
        assert_eq!(s.to_string(), "{2,5}");
        assert_eq!(s.size(), 2);
        assert!(s.contains(2) && s.contains(5) && !s.contains(3));
        assert_eq!(s.complement().elems(), vec![1, 3, 4]);
        let t = SubsetMask::from_elems(&[1, 3], 5).unwrap();
        assert!(s.is_disjoint(&t));
        assert!(SubsetMask::from_elems(&[0], 5).is_err());
        assert!(SubsetMask::from_elems(&[6], 5).is_err());
        assert!(SubsetMask::from_elems(&[2, 2], 5).is_err());
    }

    #[test]
    fn lex_coalition_order() {
        let subs = subsets_up_to_lex(3, 2).unwrap();
        let as_elems: Vec<Vec<u8>> = subs.iter().map(|s| s.elems()).collect();
        assert_eq!(
            as_elems,
            vec![
                vec![1],
                vec![1, 2],
                vec![1, 3],
                vec![2],
                vec![2, 3],
                vec![3],
            ]
        );
    }

    #[test]
    fn descriptor_round_trip() {
        for s in ["kneser:5,2", "inter:6,2,2", "kn:8", "kmm:6", "custom"] {
            let f = GraphFamily::parse_descriptor(s).unwrap();
            assert_eq!(f.descriptor(), s);
        }
        assert!(GraphFamily::parse_descriptor("kneser:5").is_err());
        assert!(GraphFamily::parse_descriptor("petersen").is_err());
    }

    #[test]
    fn kneser_graph_shapes() {
        let p = petersen();
        assert_eq!(p.vertex_count(), 10);
        assert_eq!(p.edge_count(), 15);
        assert!(p.degenerate_warning().is_none());
        for id in 0..10 {
            assert_eq!(p.degree(id), 3);
        }

        let kg73 = LabeledGraph::kneser(7, 3).unwrap();
        assert_eq!(kg73.vertex_count(), 35);
        assert_eq!(kg73.edge_count(), 70);

        let degenerate = LabeledGraph::kneser(3, 2).unwrap();
        assert_eq!(degenerate.edge_count(), 0);
        assert!(degenerate.degenerate_warning().is_some());
    }

    #[test]
    fn intersection_graph_shapes() {
        // I_3(1,1) is the 6-cycle.
        let c6 = LabeledGraph::intersection_bigraph(3, 1, 1).unwrap();
        assert_eq!(c6.vertex_count(), 6);
        assert_eq!(c6.edge_count(), 6);
        for id in 0..6 {
            assert_eq!(c6.degree(id), 2);
        }

        let i522 = LabeledGraph::intersection_bigraph(5, 2, 2).unwrap();
        assert_eq!(i522.vertex_count(), 20);
        assert_eq!(i522.edge_count(), 30);

        let i421 = LabeledGraph::intersection_bigraph(4, 2, 1).unwrap();
        // Left: 4 singletons; right: 6 pairs; edges: 4 * C(3,2).
        assert_eq!(i421.vertex_count(), 10);
        assert_eq!(i421.edge_count(), 12);
    }

    #[test]
    fn kmm_matches_intersection_structure() {
        let kmm = LabeledGraph::complete_bipartite_minus_matching(6).unwrap();
        let i611 = LabeledGraph::intersection_bigraph(6, 1, 1).unwrap();
        assert_eq!(kmm.vertex_count(), i611.vertex_count());
        assert_eq!(kmm.edges(), i611.edges());
        assert_eq!(kmm.edge_count(), 30);
    }

    #[test]
    fn complete_graph_shape() {
        let k8 = LabeledGraph::complete(8).unwrap();
        assert_eq!(k8.vertex_count(), 8);
        assert_eq!(k8.edge_count(), 28);
    }

    #[test]
    fn covering_number_matches_brute_force_on_small_graphs() {
        let budget = SearchBudget::default();
        for g in [
            LabeledGraph::complete(5).unwrap(),
            LabeledGraph::intersection_bigraph(3, 1, 1).unwrap(),
            LabeledGraph::complete_bipartite_minus_matching(4).unwrap(),
            LabeledGraph::kneser(4, 2).unwrap(),
            petersen(),
        ] {
            let (exact, witness) = covering_number(&g, &budget).unwrap();
            assert_eq!(exact, covering_number_brute(&g), "{}", g.family());
            assert_eq!(witness.len(), exact as usize);
            let in_cover: std::collections::HashSet<u32> = witness.into_iter().collect();
            for &(u, v) in g.edges() {
                assert!(in_cover.contains(&u) || in_cover.contains(&v));
            }
        }
    }

    #[test]
    fn covering_number_deterministic_witness() {
        let budget = SearchBudget::default();
        let (a_size, a_set) = covering_number(&petersen(), &budget).unwrap();
        let (b_size, b_set) = covering_number(&petersen(), &budget).unwrap();
        assert_eq!(a_size, 6);
        assert_eq!(a_size, b_size);
        assert_eq!(a_set, b_set);
    }

    #[test]
    fn covering_number_respects_budget() {
        let tight = SearchBudget {
            max_vertices: 4,
            ..SearchBudget::default()
        };
        let err = covering_number(&petersen(), &tight).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn c4_detection() {
        assert!(is_c4_free(&petersen()));
        assert!(is_c4_free(
            &LabeledGraph::intersection_bigraph(3, 1, 1).unwrap()
        ));
        assert!(is_c4_free(&LabeledGraph::kneser(7, 3).unwrap()));
        assert!(is_c4_free(&LabeledGraph::complete(3).unwrap()));

        let k4 = LabeledGraph::complete(4).unwrap();
        let w = c4_witness(&k4).expect("K4 contains a C4 subgraph");
        assert_eq!(w, [0, 2, 1, 3]);
        assert!(!is_c4_free(&LabeledGraph::kneser(6, 2).unwrap()));
        assert!(!is_c4_free(
            &LabeledGraph::complete_bipartite_minus_matching(4).unwrap()
        ));
    }

    #[test]
    fn c4_witness_is_a_cycle() {
        let g = LabeledGraph::kneser(6, 2).unwrap();
        let [a, x, b, y] = c4_witness(&g).unwrap();
        assert!(g.has_edge(a.min(x), a.max(x)));
        assert!(g.has_edge(x.min(b), x.max(b)));
        assert!(g.has_edge(b.min(y), b.max(y)));
        assert!(g.has_edge(y.min(a), y.max(a)));
    }

    #[test]
    fn max_biclique_values() {
        let budget = SearchBudget::default();
        // Triangle-free and C4-free graphs only have stars.
        assert_eq!(max_biclique_edges(&petersen(), &budget).unwrap(), 3);
        assert_eq!(
            max_biclique_edges(
                &LabeledGraph::intersection_bigraph(3, 1, 1).unwrap(),
                &budget
            )
            .unwrap(),
            2
        );
        // Balanced split of a complete graph.
        assert_eq!(
            max_biclique_edges(&LabeledGraph::complete(8).unwrap(), &budget).unwrap(),
            16
        );
        assert_eq!(
            max_biclique_edges(&LabeledGraph::complete(5).unwrap(), &budget).unwrap(),
            6
        );
        // K-minus-matching: a side of size a sees m - a partners.
        assert_eq!(
            max_biclique_edges(
                &LabeledGraph::complete_bipartite_minus_matching(6).unwrap(),
                &budget
            )
            .unwrap(),
            9
        );
        // Edgeless graph.
        assert_eq!(
            max_biclique_edges(&LabeledGraph::kneser(3, 2).unwrap(), &budget).unwrap(),
            0
        );
    }

    #[test]
    fn max_biclique_brute_force_cross_check() {
        let budget = SearchBudget::default();
        for g in [
            LabeledGraph::kneser(4, 2).unwrap(),
            LabeledGraph::intersection_bigraph(4, 1, 1).unwrap(),
            LabeledGraph::complete(6).unwrap(),
            LabeledGraph::intersection_bigraph(4, 2, 1).unwrap(),
        ] {
            let n = g.vertex_count();
            let adj = g.adjacency_u128().unwrap();
            let mut brute = 0u64;
            for x in 1u64..(1 << n) {
                let mut common: u128 = (1u128 << n) - 1;
                let mut scan = x;
                while scan != 0 {
                    let v = scan.trailing_zeros() as usize;
                    scan &= scan - 1;
                    common &= adj[v];
                }
                brute = brute.max(x.count_ones() as u64 * common.count_ones() as u64);
            }
            assert_eq!(
                max_biclique_edges(&g, &budget).unwrap(),
                brute,
                "{}",
                g.family()
            );
        }
    }
}
