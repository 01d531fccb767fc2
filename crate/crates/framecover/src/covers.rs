//! Biclique covers: multisets of complete bipartite subgraphs that cover
//! every edge of a target graph at least `d` times.
//!
//! Bicliques come in two shapes. A ground-pair biclique `(A, B, r)` is the
//! compressed form used over subset-labeled targets: its sides are all
//! r-subsets of `A` and all r-subsets of `B`. An explicit biclique lists
//! vertex ids directly. Covers are multisets: the same biclique may appear
//! repeatedly and contributes its multiplicity to every edge it covers.

use std::collections::BTreeMap;

use crate::combinatorics::{
    enumerate_ksubsets, max_biclique_edges, GraphFamily, LabeledGraph, SearchBudget, Side,
    SubsetMask, Vertex,
};
use crate::error::{Error, Result};

/// The pair-of-ground-sets form of a biclique over KG(t, r)-style targets:
/// one side is every r-subset of `a`, the other every r-subset of `b`.
/// Sides with fewer than `r` elements expand to nothing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroundPairBiclique {
    pub a: SubsetMask,
    pub b: SubsetMask,
    pub r: u8,
}

impl GroundPairBiclique {
    pub fn new(a: SubsetMask, b: SubsetMask, r: u8) -> Result<Self> {
        if a.ground() != b.ground() {
            return Err(Error::parameter(
                "ground-pair sides must share one ground set",
            ));
        }
        if !a.is_disjoint(&b) {
            return Err(Error::parameter(format!(
                "ground-pair sides must be disjoint, got {a} and {b}"
            )));
        }
        if r == 0 {
            return Err(Error::parameter("ground-pair subset size must be >= 1"));
        }
        Ok(GroundPairBiclique { a, b, r })
    }

    /// All r-subsets of each side, in colex order.
    pub fn expand(&self) -> (Vec<SubsetMask>, Vec<SubsetMask>) {
        (
            subsets_within(&self.a, self.r),
            subsets_within(&self.b, self.r),
        )
    }
}

/// All `k`-subsets of `within`, as masks over the same ground set, in colex
/// order of the result masks.
pub fn subsets_within(within: &SubsetMask, k: u8) -> Vec<SubsetMask> {
    let elems = within.elems();
    if (k as usize) > elems.len() {
        return Vec::new();
    }
    let picks = enumerate_ksubsets(elems.len() as u8, k).expect("side fits the ground cap");
    picks
        .into_iter()
        .map(|pick| {
            let chosen: Vec<u8> = pick
                .elems()
                .into_iter()
                .map(|i| elems[(i - 1) as usize])
                .collect();
            SubsetMask::from_elems(&chosen, within.ground()).expect("subset of a valid mask")
        })
        .collect()
}

/// An explicit biclique: two disjoint sets of vertex ids, every cross pair
/// required to be an edge of the target. Sides are stored sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Biclique {
    x: Vec<u32>,
    y: Vec<u32>,
}

impl Biclique {
    pub fn new(mut x: Vec<u32>, mut y: Vec<u32>) -> Self {
        x.sort_unstable();
        x.dedup();
        y.sort_unstable();
        y.dedup();
        Biclique { x, y }
    }

    pub fn x(&self) -> &[u32] {
        &self.x
    }

    pub fn y(&self) -> &[u32] {
        &self.y
    }

    pub fn edge_slots(&self) -> usize {
        self.x.len() * self.y.len()
    }
}

/// One entry of a cover: either compressed or explicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverBiclique {
    Ground(GroundPairBiclique),
    Explicit(Biclique),
}

/// A multiset of bicliques claimed to cover every edge of the target
/// family at least `d` times.
#[derive(Clone, Debug)]
pub struct BicliqueCover {
    pub family: GraphFamily,
    pub d: u32,
    pub bicliques: Vec<CoverBiclique>,
}

impl BicliqueCover {
    pub fn size(&self) -> usize {
        self.bicliques.len()
    }

    /// Resolve every entry to explicit vertex ids against `g`.
    pub fn resolve(&self, g: &LabeledGraph) -> Result<Vec<Biclique>> {
        self.bicliques
            .iter()
            .enumerate()
            .map(|(i, b)| resolve_biclique(g, b).map_err(|e| annotate(e, i)))
            .collect()
    }
}

fn annotate(e: Error, index: usize) -> Error {
    match e {
        Error::Parameter(msg) => Error::Parameter(format!("biclique {index}: {msg}")),
        other => other,
    }
}

fn resolve_biclique(g: &LabeledGraph, b: &CoverBiclique) -> Result<Biclique> {
    match b {
        CoverBiclique::Explicit(e) => {
            let n = g.vertex_count() as u32;
            for &v in e.x().iter().chain(e.y().iter()) {
                if v >= n {
                    return Err(Error::parameter(format!(
                        "vertex id {v} out of range for a {n}-vertex graph"
                    )));
                }
            }
            Ok(e.clone())
        }
        CoverBiclique::Ground(gp) => {
            let (t, r) = match g.family() {
                GraphFamily::Kneser { t, r } => (t, r),
                GraphFamily::Complete { n } => (n, 1),
                other => {
                    return Err(Error::parameter(format!(
                        "ground-pair bicliques require a kneser or complete target, got {other}"
                    )));
                }
            };
            if gp.a.ground() != t {
                return Err(Error::parameter(format!(
                    "ground-pair ground set {} does not match target ground set {t}",
                    gp.a.ground()
                )));
            }
            if gp.r != r {
                return Err(Error::parameter(format!(
                    "ground-pair subset size {} does not match target subset size {r}",
                    gp.r
                )));
            }
            let (xm, ym) = gp.expand();
            let lookup = |mask: SubsetMask| -> u32 {
                g.vertex_id(&Vertex {
                    mask,
                    side: Side::None,
                })
                .expect("expanded subset is a vertex of the target")
            };
            Ok(Biclique::new(
                xm.into_iter().map(lookup).collect(),
                ym.into_iter().map(lookup).collect(),
            ))
        }
    }
}

/// One invalid biclique found during verification: the offending pair is
/// the least non-adjacent cross pair.
#[derive(Clone, Debug)]
pub struct InvalidBiclique {
    pub index: usize,
    pub u: u32,
    pub v: u32,
}

/// The result of checking a cover against its target graph.
#[derive(Clone, Debug)]
pub struct CoverReport {
    /// The `d` claimed by the cover that was checked.
    pub claimed_d: u32,
    pub biclique_count: usize,
    /// Invalid bicliques (cross pairs that are not edges). Coverage counts
    /// only valid bicliques.
    pub invalid: Vec<InvalidBiclique>,
    /// Coverage count per edge, aligned with the graph's edge list.
    pub per_edge: Vec<u32>,
    /// Least coverage over all edges; `None` for edgeless targets.
    pub min_multiplicity: Option<u32>,
    /// Histogram: coverage count -> number of edges.
    pub profile: BTreeMap<u32, usize>,
}

impl CoverReport {
    /// Whether the cover is a valid d-cover for the given `d`.
    pub fn passes_at(&self, d: u32) -> bool {
        self.invalid.is_empty() && self.min_multiplicity.is_none_or(|m| m >= d)
    }

    /// Whether the cover passes at its claimed multiplicity.
    pub fn passes(&self) -> bool {
        self.passes_at(self.claimed_d)
    }

    /// Edges covered fewer than `d` times, in edge-list order.
    pub fn deficient_at(&self, g: &LabeledGraph, d: u32) -> Vec<(u32, u32)> {
        g.edges()
            .iter()
            .zip(self.per_edge.iter())
            .filter(|(_, &c)| c < d)
            .map(|(&e, _)| e)
            .collect()
    }
}

/// Check a cover against its target graph: biclique validity plus the
/// coverage multiplicity of every edge.
///
/// The report is independent of biclique order and counts duplicates with
/// their multiplicity. An empty cover of an edgeless graph passes at any
/// `d`.
///
/// # Errors
/// `GraphMismatch` if `cover.family` is not the family of `g`; parameter
/// errors if a biclique cannot be resolved against `g` at all.
pub fn verify_cover(g: &LabeledGraph, cover: &BicliqueCover) -> Result<CoverReport> {
    if cover.family != g.family() {
        return Err(Error::GraphMismatch(format!(
            "cover targets {} but the graph is {}",
            cover.family,
            g.family()
        )));
    }
    let resolved = cover.resolve(g)?;
    let mut edge_index = BTreeMap::new();
    for (i, &e) in g.edges().iter().enumerate() {
        edge_index.insert(e, i);
    }
    let mut per_edge = vec![0u32; g.edge_count()];
    let mut invalid = Vec::new();
    for (i, b) in resolved.iter().enumerate() {
        let mut offense: Option<(u32, u32)> = None;
        'scan: for &u in b.x() {
            for &v in b.y() {
                let key = if u < v { (u, v) } else { (v, u) };
                if u == v || !g.has_edge(key.0, key.1) {
                    offense = Some((u, v));
                    break 'scan;
                }
            }
        }
        if let Some((u, v)) = offense {
            invalid.push(InvalidBiclique { index: i, u, v });
            continue;
        }
        for &u in b.x() {
            for &v in b.y() {
                let key = if u < v { (u, v) } else { (v, u) };
                per_edge[edge_index[&key]] += 1;
            }
        }
    }
    let min_multiplicity = per_edge.iter().copied().min();
    let mut profile = BTreeMap::new();
    for &c in &per_edge {
        *profile.entry(c).or_insert(0usize) += 1;
    }
    Ok(CoverReport {
        claimed_d: cover.d,
        biclique_count: cover.bicliques.len(),
        invalid,
        per_edge,
        min_multiplicity,
        profile,
    })
}

/// Verify and return an error (rather than a failing report) when the
/// cover is not a valid d-cover. Used by transforms whose preconditions
/// require a verified cover.
pub fn ensure_cover(g: &LabeledGraph, cover: &BicliqueCover, d: u32) -> Result<CoverReport> {
    let report = verify_cover(g, cover)?;
    if let Some(bad) = report.invalid.first() {
        return Err(Error::InvalidBiclique {
            index: bad.index,
            u: g.label(bad.u),
            v: g.label(bad.v),
        });
    }
    if !report.passes_at(d) {
        let deficient = report.deficient_at(g, d);
        let (u, v) = deficient[0];
        return Err(Error::FailedVerification(format!(
            "cover is not a {d}-cover: edge ({}, {}) is covered {} time(s), {} edge(s) deficient",
            g.label(u),
            g.label(v),
            report.per_edge[g.edges().iter().position(|&e| e == (u, v)).unwrap()],
            deficient.len()
        )));
    }
    Ok(report)
}

/// Counting lower bound on the size of any d-cover:
/// `ceil(d * |E| / B)` where `B` is the maximum edge count of a single
/// biclique. Returns 0 for edgeless graphs.
pub fn bc_lower_bound(g: &LabeledGraph, d: u32, budget: &SearchBudget) -> Result<u64> {
    let m = g.edge_count() as u128;
    if m == 0 {
        return Ok(0);
    }
    let best = max_biclique_edges(g, budget)? as u128;
    debug_assert!(best >= 1, "a graph with edges has a 1x1 biclique");
    Ok((d as u128 * m).div_ceil(best) as u64)
}
