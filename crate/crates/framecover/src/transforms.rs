//! Constructive transforms between codes, biclique covers, and
//! cover-free families, plus the two cover-shrinking maps (side-set
//! projection and the two-elements-down homomorphism push).
//!
//! Every transform comes in two modes. `Checked` verifies the input
//! object's claim before transforming (rejecting bad inputs as
//! `FailedVerification`) and re-verifies the output's claim afterwards,
//! treating a failure there as an `Invariant` violation, since each
//! output claim is a proven consequence of the input claim. `Unchecked`
//! skips both and only validates parameters.

use crate::cff::{exact_min_n, verify_cff, CoverFreeFamily};
use crate::codes::{BinaryCode, SfpcMode, MAX_CODE_LENGTH};
use crate::combinatorics::{GraphFamily, LabeledGraph, SearchBudget, Side, SubsetMask, Vertex};
use crate::covers::{
    ensure_cover, subsets_within, verify_cover, Biclique, BicliqueCover, CoverBiclique,
    GroundPairBiclique,
};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    Checked,
    Unchecked,
}

/// Union of the vertex subsets on each side of a resolved biclique,
/// split by the side label of each vertex (subset-labeled bipartite
/// targets) or by the x/y lists (everything else).
fn side_unions(g: &LabeledGraph, b: &Biclique, ground: u8) -> (SubsetMask, SubsetMask) {
    let empty = SubsetMask::empty(ground).expect("materialized graphs have valid grounds");
    let mut x = empty;
    let mut y = empty;
    for &id in b.x() {
        x = x.union(&g.vertex(id).mask);
    }
    for &id in b.y() {
        y = y.union(&g.vertex(id).mask);
    }
    (x, y)
}

/// Union of the vertex subsets over both lists, restricted to one side
/// label. Valid bicliques of a bipartite target keep each list on one
/// side, so this recovers the per-side union no matter how the lists
/// are oriented.
fn labeled_union(g: &LabeledGraph, b: &Biclique, side: Side, ground: u8) -> SubsetMask {
    let mut acc = SubsetMask::empty(ground).expect("materialized graphs have valid grounds");
    for &id in b.x().iter().chain(b.y().iter()) {
        let v = g.vertex(id);
        if v.side == side {
            acc = acc.union(&v.mask);
        }
    }
    acc
}

fn kneser_params(cover: &BicliqueCover) -> Result<(u8, u8)> {
    match cover.family {
        GraphFamily::Kneser { t, r } => Ok((t, r)),
        other => Err(Error::parameter(format!(
            "expected a kneser target, got {other}"
        ))),
    }
}

/// Turn a code into the disjointness cover it induces: column j of the
/// code becomes the ground pair (support, complement, r). A code whose
/// size-r coalitions all have disjoint feasible sets yields a 1-cover.
///
/// In `Checked` mode the code is verified to be r-separating first and
/// the resulting cover is verified to be a 1-cover.
pub fn code_to_cover(code: &BinaryCode, r: u8, mode: CheckMode) -> Result<BicliqueCover> {
    let t = code.size();
    if r == 0 || r >= t {
        return Err(Error::parameter(format!(
            "coalition size must satisfy 1 <= r < t, got r = {r}, t = {t}"
        )));
    }
    if mode == CheckMode::Checked {
        let verdict = code.is_sfpc(r, SfpcMode::SizeROnly)?;
        if !verdict.ok {
            let (c1, c2) = verdict.witness.expect("failed verdict carries a witness");
            return Err(Error::FailedVerification(format!(
                "code is not {r}-separating: coalitions {c1} and {c2} share a feasible word"
            )));
        }
    }
    let bicliques = code
        .columns()
        .into_iter()
        .map(|support| {
            Ok(CoverBiclique::Ground(GroundPairBiclique::new(
                support,
                support.complement(),
                r,
            )?))
        })
        .collect::<Result<Vec<_>>>()?;
    let cover = BicliqueCover {
        family: GraphFamily::Kneser { t, r },
        d: 1,
        bicliques,
    };
    if mode == CheckMode::Checked {
        let g = LabeledGraph::kneser(t, r)?;
        ensure_cover(&g, &cover, 1)
            .map_err(|e| Error::Invariant(format!("separating code produced a bad cover: {e}")))?;
    }
    Ok(cover)
}

/// Turn a 1-cover of a Kneser target into a code: user u of the code
/// gets a 1 in position i exactly when u lies in the union of the
/// first side of biclique i. The code's size-r coalitions then have
/// pairwise disjoint feasible sets.
pub fn cover_to_code(cover: &BicliqueCover, mode: CheckMode) -> Result<BinaryCode> {
    let (t, r) = kneser_params(cover)?;
    if cover.size() as u16 > MAX_CODE_LENGTH {
        return Err(Error::parameter(format!(
            "cover has {} bicliques, the code length cap is {MAX_CODE_LENGTH}",
            cover.size()
        )));
    }
    let g = LabeledGraph::kneser(t, r)?;
    if mode == CheckMode::Checked {
        ensure_cover(&g, cover, 1)?;
    }
    let resolved = cover.resolve(&g)?;
    let columns: Vec<SubsetMask> = resolved.iter().map(|b| side_unions(&g, b, t).0).collect();
    let code = BinaryCode::from_columns(&columns)?;
    if mode == CheckMode::Checked && t as u16 >= 2 * r as u16 {
        let verdict = code.is_sfpc(r, SfpcMode::SizeROnly)?;
        if !verdict.ok {
            return Err(Error::Invariant(
                "valid cover produced a non-separating code".into(),
            ));
        }
    }
    Ok(code)
}

/// Turn a d-cover of a Kneser target into an (r, r; d) family on the
/// same ground: one column per side union, first-side unions before
/// second-side unions.
pub fn cover_to_cff(cover: &BicliqueCover, mode: CheckMode) -> Result<CoverFreeFamily> {
    let (t, r) = kneser_params(cover)?;
    if cover.d == 0 {
        return Err(Error::parameter("cover multiplicity claim must be >= 1"));
    }
    if cover.bicliques.is_empty() {
        return Err(Error::parameter(
            "cannot build a family from an empty cover",
        ));
    }
    let g = LabeledGraph::kneser(t, r)?;
    if mode == CheckMode::Checked {
        ensure_cover(&g, cover, cover.d)?;
    }
    let resolved = cover.resolve(&g)?;
    let unions: Vec<(SubsetMask, SubsetMask)> =
        resolved.iter().map(|b| side_unions(&g, b, t)).collect();
    let mut columns = Vec::with_capacity(2 * unions.len());
    columns.extend(unions.iter().map(|(a, _)| *a));
    columns.extend(unions.iter().map(|(_, b)| *b));
    let f = CoverFreeFamily::new(columns)?;
    if mode == CheckMode::Checked {
        let report = verify_cff(&f, r, r, cover.d)?;
        if !report.ok {
            return Err(Error::Invariant(
                "valid cover produced a deficient family".into(),
            ));
        }
    }
    Ok(f)
}

/// Turn an (r, r; d) family into a 2d-cover of the Kneser target on the
/// family's ground: each column becomes the ground pair
/// (ones, complement, r). Needs t >= 2r.
pub fn cff_to_cover(f: &CoverFreeFamily, r: u8, d: u32, mode: CheckMode) -> Result<BicliqueCover> {
    let t = f.t();
    if r == 0 || (2 * r as u16) > t as u16 {
        return Err(Error::parameter(format!(
            "need 1 <= r and 2r <= t, got r = {r}, t = {t}"
        )));
    }
    if d == 0 {
        return Err(Error::parameter("coverage demand must be >= 1"));
    }
    if mode == CheckMode::Checked {
        let report = verify_cff(f, r, r, d)?;
        if !report.ok {
            let (i, j, cov) = report.witness.expect("failed report carries a witness");
            return Err(Error::FailedVerification(format!(
                "not an ({r},{r};{d}) family: blocks {i} vs {j} are covered {cov} time(s)"
            )));
        }
    }
    let bicliques = f
        .columns()
        .iter()
        .map(|c| {
            Ok(CoverBiclique::Ground(GroundPairBiclique::new(
                *c,
                c.complement(),
                r,
            )?))
        })
        .collect::<Result<Vec<_>>>()?;
    let cover = BicliqueCover {
        family: GraphFamily::Kneser { t, r },
        d: 2 * d,
        bicliques,
    };
    if mode == CheckMode::Checked {
        let g = LabeledGraph::kneser(t, r)?;
        ensure_cover(&g, &cover, 2 * d)
            .map_err(|e| Error::Invariant(format!("family produced a deficient cover: {e}")))?;
    }
    Ok(cover)
}

/// The family parameters a one-sided extraction reports alongside the
/// columns it produced.
#[derive(Clone, Debug)]
pub struct OneSidedCff {
    pub cff: CoverFreeFamily,
    pub r: u8,
    pub w: u8,
    pub d: u32,
}

/// Turn a d-cover of a bipartite disjointness target into a family with
/// ONE column per biclique. For an intersection target I_t(r, w) the
/// column is the union of the right (r-subset) side, giving an
/// (r, w; d) family; for the matching-deleted bipartite target the
/// column is the union of the left side indices, giving a (1, 1; d)
/// family.
pub fn cover_to_cff_one_sided(cover: &BicliqueCover, mode: CheckMode) -> Result<OneSidedCff> {
    if cover.d == 0 {
        return Err(Error::parameter("cover multiplicity claim must be >= 1"));
    }
    if cover.bicliques.is_empty() {
        return Err(Error::parameter(
            "cannot build a family from an empty cover",
        ));
    }
    let (r, w, ground, pick_side) = match cover.family {
        GraphFamily::Intersection { t, r, w } => (r, w, t, Side::Right),
        GraphFamily::CompleteBipartiteMinusMatching { m } => (1, 1, m, Side::Left),
        other => {
            return Err(Error::parameter(format!(
                "expected an intersection or matching-deleted bipartite target, got {other}"
            )));
        }
    };
    let g = LabeledGraph::from_family(cover.family)?;
    if mode == CheckMode::Checked {
        ensure_cover(&g, cover, cover.d)?;
    }
    let resolved = cover.resolve(&g)?;
    let columns: Vec<SubsetMask> = resolved
        .iter()
        .map(|b| labeled_union(&g, b, pick_side, ground))
        .collect();
    let f = CoverFreeFamily::new(columns)?;
    if mode == CheckMode::Checked {
        let report = verify_cff(&f, r, w, cover.d)?;
        if !report.ok {
            return Err(Error::Invariant(
                "valid cover produced a deficient one-sided family".into(),
            ));
        }
    }
    Ok(OneSidedCff {
        cff: f,
        r,
        w,
        d: cover.d,
    })
}

/// Turn an (r, w; d) family into a d-cover of the intersection target
/// I_t(r, w), one biclique per column: the left side holds all
/// w-subsets of the column's zeros, the right side all r-subsets of its
/// ones.
pub fn cff_to_intersection_cover(
    f: &CoverFreeFamily,
    r: u8,
    w: u8,
    d: u32,
    mode: CheckMode,
) -> Result<BicliqueCover> {
    let t = f.t();
    if r == 0 || w == 0 || (r as u16 + w as u16) > t as u16 {
        return Err(Error::parameter(format!(
            "need 1 <= r, 1 <= w, r + w <= t, got r = {r}, w = {w}, t = {t}"
        )));
    }
    if d == 0 {
        return Err(Error::parameter("coverage demand must be >= 1"));
    }
    if mode == CheckMode::Checked {
        let report = verify_cff(f, r, w, d)?;
        if !report.ok {
            let (i, j, cov) = report.witness.expect("failed report carries a witness");
            return Err(Error::FailedVerification(format!(
                "not an ({r},{w};{d}) family: blocks {i} vs {j} are covered {cov} time(s)"
            )));
        }
    }
    let g = LabeledGraph::intersection_bigraph(t, r, w)?;
    let lookup = |mask: SubsetMask, side: Side| -> u32 {
        g.vertex_id(&Vertex { mask, side })
            .expect("subsets of the ground set are vertices")
    };
    let bicliques = f
        .columns()
        .iter()
        .map(|c| {
            let x = subsets_within(&c.complement(), w)
                .into_iter()
                .map(|m| lookup(m, Side::Left))
                .collect();
            let y = subsets_within(c, r)
                .into_iter()
                .map(|m| lookup(m, Side::Right))
                .collect();
            CoverBiclique::Explicit(Biclique::new(x, y))
        })
        .collect();
    let cover = BicliqueCover {
        family: GraphFamily::Intersection { t, r, w },
        d,
        bicliques,
    };
    if mode == CheckMode::Checked {
        ensure_cover(&g, &cover, d)
            .map_err(|e| Error::Invariant(format!("family produced a deficient cover: {e}")))?;
    }
    Ok(cover)
}

/// Turn a (1, 1; d) family into a d-cover of the matching-deleted
/// bipartite target on its ground: column c becomes the biclique with
/// left side {i : i in c} and right side {j : j not in c}.
pub fn cff_to_kmm_cover(f: &CoverFreeFamily, d: u32, mode: CheckMode) -> Result<BicliqueCover> {
    let m = f.t();
    if m < 2 {
        return Err(Error::parameter("target needs at least two pairs"));
    }
    if d == 0 {
        return Err(Error::parameter("coverage demand must be >= 1"));
    }
    if mode == CheckMode::Checked {
        let report = verify_cff(f, 1, 1, d)?;
        if !report.ok {
            let (i, j, cov) = report.witness.expect("failed report carries a witness");
            return Err(Error::FailedVerification(format!(
                "not a (1,1;{d}) family: blocks {i} vs {j} are covered {cov} time(s)"
            )));
        }
    }
    let bicliques = f
        .columns()
        .iter()
        .map(|c| {
            let x = c.elems().into_iter().map(|i| (i - 1) as u32).collect();
            let y = c
                .complement()
                .elems()
                .into_iter()
                .map(|j| m as u32 + (j - 1) as u32)
                .collect();
            CoverBiclique::Explicit(Biclique::new(x, y))
        })
        .collect();
    let cover = BicliqueCover {
        family: GraphFamily::CompleteBipartiteMinusMatching { m },
        d,
        bicliques,
    };
    if mode == CheckMode::Checked {
        let g = LabeledGraph::from_family(cover.family)?;
        ensure_cover(&g, &cover, d)
            .map_err(|e| Error::Invariant(format!("family produced a deficient cover: {e}")))?;
    }
    Ok(cover)
}

/// How to shrink a cover's subset size.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    /// Kneser target with subset size r down to subset size s < r.
    Kneser { s: u8 },
    /// Intersection target I_t(r, w) down to I_t(r - i, w - j).
    Intersection { i: u8, j: u8 },
}

#[derive(Clone, Debug)]
pub struct ProjectionOutcome {
    pub cover: BicliqueCover,
    /// Multiplicity the projection is guaranteed to reach, from the
    /// exact point-count search; `None` when the search budget ran out.
    pub theoretical: Option<u32>,
    /// Verified multiplicity of the projected cover (`Checked` only).
    pub observed: Option<u32>,
}

/// Replace every biclique by all s-subsets (or shrunken subsets) of its
/// side unions. A d-cover projects to an m-cover where m is the least
/// point count of an associated small family, computed exactly when the
/// budget allows.
pub fn project_cover(
    cover: &BicliqueCover,
    projection: Projection,
    mode: CheckMode,
    budget: &SearchBudget,
) -> Result<ProjectionOutcome> {
    if cover.d == 0 {
        return Err(Error::parameter("cover multiplicity claim must be >= 1"));
    }
    let g = LabeledGraph::from_family(cover.family)?;
    if mode == CheckMode::Checked {
        ensure_cover(&g, cover, cover.d)?;
    }
    let resolved = cover.resolve(&g)?;

    let (out_family, theoretical, bicliques) = match (cover.family, projection) {
        (GraphFamily::Kneser { t, r }, Projection::Kneser { s }) => {
            if s == 0 || s >= r {
                return Err(Error::parameter(format!(
                    "need 1 <= s < r, got s = {s}, r = {r}"
                )));
            }
            if t as u16 <= 2 * r as u16 {
                return Err(Error::parameter(format!(
                    "projection needs t > 2r, got t = {t}, r = {r}"
                )));
            }
            let theoretical = theoretical_multiplicity(t - 2 * s, r - s, r - s, cover.d, budget)?;
            let bicliques = resolved
                .iter()
                .map(|b| {
                    let (a, bu) = side_unions(&g, b, t);
                    Ok(CoverBiclique::Ground(GroundPairBiclique::new(a, bu, s)?))
                })
                .collect::<Result<Vec<_>>>()?;
            (GraphFamily::Kneser { t, r: s }, theoretical, bicliques)
        }
        (GraphFamily::Intersection { t, r, w }, Projection::Intersection { i, j }) => {
            if i == 0 || i >= r || j == 0 || j >= w {
                return Err(Error::parameter(format!(
                    "need 1 <= i < r and 1 <= j < w, got i = {i}, j = {j}, r = {r}, w = {w}"
                )));
            }
            if (r as u16 + w as u16) > t as u16 {
                return Err(Error::parameter(format!(
                    "projection needs r + w <= t, got r = {r}, w = {w}, t = {t}"
                )));
            }
            let theoretical = theoretical_multiplicity(t - r - w + i + j, i, j, cover.d, budget)?;
            let out = LabeledGraph::intersection_bigraph(t, r - i, w - j)?;
            let lookup = |mask: SubsetMask, side: Side| -> u32 {
                out.vertex_id(&Vertex { mask, side })
                    .expect("subsets of the ground set are vertices")
            };
            let bicliques = resolved
                .iter()
                .map(|b| {
                    let a = labeled_union(&g, b, Side::Left, t);
                    let bu = labeled_union(&g, b, Side::Right, t);
                    let x = subsets_within(&a, w - j)
                        .into_iter()
                        .map(|m| lookup(m, Side::Left))
                        .collect();
                    let y = subsets_within(&bu, r - i)
                        .into_iter()
                        .map(|m| lookup(m, Side::Right))
                        .collect();
                    CoverBiclique::Explicit(Biclique::new(x, y))
                })
                .collect();
            (
                GraphFamily::Intersection {
                    t,
                    r: r - i,
                    w: w - j,
                },
                theoretical,
                bicliques,
            )
        }
        (family, proj) => {
            return Err(Error::parameter(format!(
                "projection {proj:?} does not apply to {family}"
            )));
        }
    };

    let mut out_cover = BicliqueCover {
        family: out_family,
        d: theoretical.unwrap_or(1),
        bicliques,
    };
    let mut observed = None;
    if mode == CheckMode::Checked {
        let out_graph = LabeledGraph::from_family(out_family)?;
        let report = verify_cover(&out_graph, &out_cover)?;
        let min = report.min_multiplicity.unwrap_or(0);
        observed = Some(min);
        if let Some(m) = theoretical {
            if !report.invalid.is_empty() || min < m {
                return Err(Error::Invariant(format!(
                    "projected cover reaches multiplicity {min}, expected at least {m}"
                )));
            }
        } else {
            out_cover.d = min.max(1);
        }
    }
    Ok(ProjectionOutcome {
        cover: out_cover,
        theoretical,
        observed,
    })
}

/// The exact point count behind a projection's multiplicity guarantee;
/// `None` when the search budget runs out.
fn theoretical_multiplicity(
    t: u8,
    r: u8,
    w: u8,
    d: u32,
    budget: &SearchBudget,
) -> Result<Option<u32>> {
    match exact_min_n(t, r, w, d, budget) {
        Ok(out) => Ok(Some(out.n)),
        Err(Error::BudgetExceeded { .. }) => Ok(None),
        Err(other) => Err(other),
    }
}

/// The two-elements-down vertex map on Kneser targets, defined for
/// ground size t > 2r and subset size r >= 2: a subset holding both t
/// and t-1 drops them and gains the largest absent element; any other
/// subset drops its maximum.
pub fn kneser_phi(a: &SubsetMask) -> Result<SubsetMask> {
    let t = a.ground();
    let r = a.size() as u8;
    if r < 2 {
        return Err(Error::parameter("subset size must be at least 2"));
    }
    if t as u16 <= 2 * r as u16 {
        return Err(Error::parameter(format!(
            "the map needs t > 2r, got t = {t}, r = {r}"
        )));
    }
    let elems = a.elems();
    let image: Vec<u8> = if a.contains(t) && a.contains(t - 1) {
        let x = a
            .complement()
            .elems()
            .into_iter()
            .max()
            .expect("r < t leaves the complement nonempty");
        let mut kept: Vec<u8> = elems.into_iter().filter(|&e| e < t - 1).collect();
        kept.push(x);
        kept
    } else {
        let max = *elems.last().expect("subset is nonempty");
        elems.into_iter().filter(|&e| e != max).collect()
    };
    SubsetMask::from_elems(&image, t - 2)
}

#[derive(Clone, Debug)]
pub struct PushOutcome {
    pub cover: BicliqueCover,
    /// Verified multiplicity of the pushed cover (`Checked` only).
    pub observed: Option<u32>,
}

/// Push a d-cover of the Kneser target on (t, r) through the
/// two-elements-down map, yielding a 3d-cover on (t-2, r-1): the
/// preimage of every edge needs three bicliques per unit of demand, as
/// `preimage_evidence` certifies.
pub fn push_cover(cover: &BicliqueCover, mode: CheckMode) -> Result<PushOutcome> {
    let (t, r) = kneser_params(cover)?;
    if r < 2 || t as u16 <= 2 * r as u16 {
        return Err(Error::parameter(format!(
            "push needs t > 2r and r >= 2, got t = {t}, r = {r}"
        )));
    }
    if cover.d == 0 {
        return Err(Error::parameter("cover multiplicity claim must be >= 1"));
    }
    let g = LabeledGraph::kneser(t, r)?;
    if mode == CheckMode::Checked {
        ensure_cover(&g, cover, cover.d)?;
    }
    let out_graph = LabeledGraph::kneser(t - 2, r - 1)?;
    let lookup = |mask: SubsetMask| -> u32 {
        out_graph
            .vertex_id(&Vertex {
                mask,
                side: Side::None,
            })
            .expect("images are vertices of the smaller target")
    };
    let resolved = cover.resolve(&g)?;
    let bicliques = resolved
        .iter()
        .map(|b| {
            let map_side = |ids: &[u32]| -> Result<Vec<u32>> {
                ids.iter()
                    .map(|&id| Ok(lookup(kneser_phi(&g.vertex(id).mask)?)))
                    .collect()
            };
            Ok(CoverBiclique::Explicit(Biclique::new(
                map_side(b.x())?,
                map_side(b.y())?,
            )))
        })
        .collect::<Result<Vec<_>>>()?;
    let out_cover = BicliqueCover {
        family: GraphFamily::Kneser { t: t - 2, r: r - 1 },
        d: 3 * cover.d,
        bicliques,
    };
    let mut observed = None;
    if mode == CheckMode::Checked {
        let report = verify_cover(&out_graph, &out_cover)?;
        let min = report.min_multiplicity.unwrap_or(0);
        observed = Some(min);
        if !report.invalid.is_empty() || min < 3 * cover.d {
            return Err(Error::Invariant(format!(
                "pushed cover reaches multiplicity {min}, expected at least {}",
                3 * cover.d
            )));
        }
    }
    Ok(PushOutcome {
        cover: out_cover,
        observed,
    })
}

/// The bipartite subgraph of the Kneser target on (t, r) induced by the
/// preimages of one edge (u, v) of the target on (t-2, r-1): left
/// vertices map to u, right vertices to v, edges are the disjoint
/// pairs.
pub fn preimage_subgraph(t: u8, r: u8, u: &SubsetMask, v: &SubsetMask) -> Result<LabeledGraph> {
    if r < 2 || t as u16 <= 2 * r as u16 {
        return Err(Error::parameter(format!(
            "preimages need t > 2r and r >= 2, got t = {t}, r = {r}"
        )));
    }
    if u.ground() != t - 2 || v.ground() != t - 2 {
        return Err(Error::parameter(
            "edge endpoints live on the ground set [t-2]",
        ));
    }
    if u.size() != (r - 1) as u32 || v.size() != (r - 1) as u32 || !u.is_disjoint(v) {
        return Err(Error::parameter(
            "edge endpoints must be disjoint (r-1)-subsets",
        ));
    }
    let source = LabeledGraph::kneser(t, r)?;
    let mut vertices = Vec::new();
    for vert in source.vertices() {
        let image = kneser_phi(&vert.mask)?;
        if image == *u {
            vertices.push(Vertex {
                mask: vert.mask,
                side: Side::Left,
            });
        } else if image == *v {
            vertices.push(Vertex {
                mask: vert.mask,
                side: Side::Right,
            });
        }
    }
    vertices.sort_by_key(|v| (v.side != Side::Left, v.mask));
    let mut edges = Vec::new();
    for (i, a) in vertices.iter().enumerate() {
        for (j, b) in vertices.iter().enumerate().skip(i + 1) {
            if a.side != b.side && a.mask.is_disjoint(&b.mask) {
                edges.push((i as u32, j as u32));
            }
        }
    }
    LabeledGraph::custom(vertices, edges)
}

/// A certificate that every 1-cover of a preimage subgraph needs at
/// least three bicliques: either six vertices inducing a cycle or three
/// edges inducing a matching. Vertex ids refer to the searched graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PreimageEvidence {
    Cycle6([u32; 6]),
    InducedMatching3([(u32, u32); 3]),
}

/// Find an induced six-cycle (three left and three right vertices, all
/// of induced degree two) or an induced three-edge matching in a
/// bipartite graph with side-labeled vertices. Either forces three
/// bicliques per unit of coverage demand: a six-cycle has six edges but
/// no biclique inside it covers more than two, and the edges of an
/// induced matching can never share a biclique.
pub fn preimage_evidence(g: &LabeledGraph) -> Option<PreimageEvidence> {
    let left: Vec<u32> = (0..g.vertex_count() as u32)
        .filter(|&id| g.vertex(id).side == Side::Left)
        .collect();
    let right: Vec<u32> = (0..g.vertex_count() as u32)
        .filter(|&id| g.vertex(id).side == Side::Right)
        .collect();

    for (ai, &a) in left.iter().enumerate() {
        for (bi, &b) in left.iter().enumerate().skip(ai + 1) {
            for &c in left.iter().skip(bi + 1) {
                for (xi, &x) in right.iter().enumerate() {
                    for (yi, &y) in right.iter().enumerate().skip(xi + 1) {
                        for &z in right.iter().skip(yi + 1) {
                            let ok = [a, b, c].iter().all(|&l| {
                                [x, y, z]
                                    .iter()
                                    .filter(|&&r| g.has_edge(l.min(r), l.max(r)))
                                    .count()
                                    == 2
                            }) && [x, y, z].iter().all(|&r| {
                                [a, b, c]
                                    .iter()
                                    .filter(|&&l| g.has_edge(l.min(r), l.max(r)))
                                    .count()
                                    == 2
                            });
                            if ok {
                                return Some(PreimageEvidence::Cycle6([a, b, c, x, y, z]));
                            }
                        }
                    }
                }
            }
        }
    }

    let edges = g.edges();
    for (i, &(a1, b1)) in edges.iter().enumerate() {
        for (j, &(a2, b2)) in edges.iter().enumerate().skip(i + 1) {
            for &(a3, b3) in edges.iter().skip(j + 1) {
                let vs = [a1, b1, a2, b2, a3, b3];
                let distinct = {
                    let mut s = vs;
                    s.sort_unstable();
                    s.windows(2).all(|w| w[0] != w[1])
                };
                if !distinct {
                    continue;
                }
                let mut extra = false;
                for (p, &u) in vs.iter().enumerate() {
                    for &v in vs.iter().skip(p + 1) {
                        let e = (u.min(v), u.max(v));
                        if g.has_edge(e.0, e.1) && ![(a1, b1), (a2, b2), (a3, b3)].contains(&e) {
                            extra = true;
                        }
                    }
                }
                if !extra {
                    return Some(PreimageEvidence::InducedMatching3([
                        (a1, b1),
                        (a2, b2),
                        (a3, b3),
                    ]));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::enumerate_ksubsets;
    use crate::hadamard::{kmm_minus_cover, HadamardMatrix};

    fn halving_cover_5_2(d: u32) -> BicliqueCover {
        let bicliques = enumerate_ksubsets(5, 3)
            .unwrap()
            .into_iter()
            .map(|a| CoverBiclique::Ground(GroundPairBiclique::new(a, a.complement(), 2).unwrap()))
            .collect();
        BicliqueCover {
            family: GraphFamily::Kneser { t: 5, r: 2 },
            d,
            bicliques,
        }
    }

    #[test]
    fn cover_to_code_and_back() {
        let cover = halving_cover_5_2(1);
        let code = cover_to_code(&cover, CheckMode::Checked).unwrap();
        assert_eq!(code.size(), 5);
        assert_eq!(code.length(), 10);
        assert!(code.is_sfpc(2, SfpcMode::SizeROnly).unwrap().ok);

        let back = code_to_cover(&code, 2, CheckMode::Checked).unwrap();
        assert_eq!(back.bicliques, cover.bicliques);
    }

    #[test]
    fn code_to_cover_rejects_non_separating_codes() {
        let identity = BinaryCode::new(vec![0b0001, 0b0010, 0b0100, 0b1000], 4).unwrap();
        match code_to_cover(&identity, 2, CheckMode::Checked) {
            Err(Error::FailedVerification(msg)) => assert!(msg.contains("not 2-separating")),
            other => panic!("expected failed verification, got {other:?}"),
        }
        // Unchecked mode builds the (deficient) cover anyway.
        let cover = code_to_cover(&identity, 2, CheckMode::Unchecked).unwrap();
        let g = LabeledGraph::kneser(4, 2).unwrap();
        let report = verify_cover(&g, &cover).unwrap();
        assert_eq!(report.min_multiplicity, Some(0));
    }

    #[test]
    fn cover_to_cff_and_back() {
        let cover = halving_cover_5_2(2);
        let f = cover_to_cff(&cover, CheckMode::Checked).unwrap();
        assert_eq!(f.t(), 5);
        assert_eq!(f.n(), 20);
        assert!(verify_cff(&f, 2, 2, 2).unwrap().ok);

        // The doubled demand comes back as a 4-cover of size 20.
        let back = cff_to_cover(&f, 2, 2, CheckMode::Checked).unwrap();
        assert_eq!(back.d, 4);
        assert_eq!(back.size(), 20);
    }

    #[test]
    fn family_round_trip_on_intersection_target() {
        let found = exact_min_n(4, 2, 1, 1, &SearchBudget::default()).unwrap();
        let cover = cff_to_intersection_cover(&found.family, 2, 1, 1, CheckMode::Checked).unwrap();
        assert_eq!(cover.size(), found.n as usize);

        let back = cover_to_cff_one_sided(&cover, CheckMode::Checked).unwrap();
        assert_eq!((back.r, back.w, back.d), (2, 1, 1));
        let mut orig = found.family.columns().to_vec();
        let mut got = back.cff.columns().to_vec();
        orig.sort();
        got.sort();
        assert_eq!(orig, got);
    }

    #[test]
    fn family_round_trip_on_matching_deleted_target() {
        let h = HadamardMatrix::sylvester(4).unwrap();
        let cover = kmm_minus_cover(&h).unwrap();
        let one_sided = cover_to_cff_one_sided(&cover, CheckMode::Checked).unwrap();
        assert_eq!((one_sided.r, one_sided.w, one_sided.d), (1, 1, 1));
        assert_eq!(one_sided.cff.t(), 6);
        assert_eq!(one_sided.cff.n(), 4);

        let back = cff_to_kmm_cover(&one_sided.cff, 1, CheckMode::Checked).unwrap();
        assert_eq!(back.bicliques, cover.bicliques);
    }

    #[test]
    fn projection_on_kneser_target() {
        let cover = halving_cover_5_2(2);
        let out = project_cover(
            &cover,
            Projection::Kneser { s: 1 },
            CheckMode::Checked,
            &SearchBudget::default(),
        )
        .unwrap();
        // Guaranteed multiplicity: least point count of a (1,1;2) family
        // on 3 rows, which is 6; the halving bicliques reach it exactly.
        assert_eq!(out.theoretical, Some(6));
        assert_eq!(out.observed, Some(6));
        assert_eq!(out.cover.d, 6);
        assert_eq!(out.cover.family, GraphFamily::Kneser { t: 5, r: 1 });
    }

    #[test]
    fn projection_on_intersection_target() {
        let found = exact_min_n(5, 2, 2, 1, &SearchBudget::default()).unwrap();
        let cover = cff_to_intersection_cover(&found.family, 2, 2, 1, CheckMode::Checked).unwrap();
        let out = project_cover(
            &cover,
            Projection::Intersection { i: 1, j: 1 },
            CheckMode::Checked,
            &SearchBudget::default(),
        )
        .unwrap();
        // m = least point count of a (1,1;1) family on 3 rows, which is 3.
        assert_eq!(out.theoretical, Some(3));
        assert!(out.observed.unwrap() >= 3);
        assert_eq!(
            out.cover.family,
            GraphFamily::Intersection { t: 5, r: 1, w: 1 }
        );
    }

    #[test]
    fn projection_parameter_errors() {
        let cover = halving_cover_5_2(1);
        let budget = SearchBudget::default();
        assert!(project_cover(
            &cover,
            Projection::Kneser { s: 2 },
            CheckMode::Checked,
            &budget
        )
        .is_err());
        assert!(project_cover(
            &cover,
            Projection::Intersection { i: 1, j: 1 },
            CheckMode::Checked,
            &budget
        )
        .is_err());
    }

    #[test]
    fn phi_examples() {
        let m = |elems: &[u8]| SubsetMask::from_elems(elems, 5).unwrap();
        assert_eq!(kneser_phi(&m(&[2, 5])).unwrap().elems(), vec![2]);
        assert_eq!(kneser_phi(&m(&[4, 5])).unwrap().elems(), vec![3]);
        assert_eq!(kneser_phi(&m(&[1, 2])).unwrap().elems(), vec![1]);
        let tight = SubsetMask::from_elems(&[1, 2], 4).unwrap();
        assert!(kneser_phi(&tight).is_err(), "needs t > 2r");
    }

    #[test]
    fn phi_is_a_homomorphism_onto_edges() {
        for (t, r) in [(5u8, 2u8), (7, 3), (7, 2)] {
            let source = LabeledGraph::kneser(t, r).unwrap();
            let target = LabeledGraph::kneser(t - 2, r - 1).unwrap();
            let mut hit = vec![false; target.edge_count()];
            for &(a, b) in source.edges() {
                let ia = kneser_phi(&source.vertex(a).mask).unwrap();
                let ib = kneser_phi(&source.vertex(b).mask).unwrap();
                assert!(
                    ia.is_disjoint(&ib),
                    "adjacent vertices must map to adjacent vertices"
                );
                let u = target
                    .vertex_id(&Vertex {
                        mask: ia,
                        side: Side::None,
                    })
                    .unwrap();
                let v = target
                    .vertex_id(&Vertex {
                        mask: ib,
                        side: Side::None,
                    })
                    .unwrap();
                let key = (u.min(v), u.max(v));
                let pos = target.edges().iter().position(|&e| e == key).unwrap();
                hit[pos] = true;
            }
            assert!(hit.iter().all(|&h| h), "every target edge has a preimage");
        }
    }

    #[test]
    fn push_reaches_triple_multiplicity() {
        let cover = halving_cover_5_2(2);
        let out = push_cover(&cover, CheckMode::Checked).unwrap();
        assert_eq!(out.cover.family, GraphFamily::Kneser { t: 3, r: 1 });
        assert_eq!(out.cover.d, 6);
        assert!(out.observed.unwrap() >= 6);

        let single = halving_cover_5_2(1);
        let out = push_cover(&single, CheckMode::Checked).unwrap();
        assert_eq!(out.cover.d, 3);
    }

    #[test]
    fn preimages_certify_three_bicliques() {
        for (t, r) in [(5u8, 2u8), (7, 3)] {
            let target = LabeledGraph::kneser(t - 2, r - 1).unwrap();
            for &(u, v) in target.edges() {
                let pg = preimage_subgraph(t, r, &target.vertex(u).mask, &target.vertex(v).mask)
                    .unwrap();
                let evidence = preimage_evidence(&pg);
                assert!(
                    evidence.is_some(),
                    "edge ({u}, {v}) of the ({}, {}) target lacks evidence",
                    t - 2,
                    r - 1
                );
            }
        }
    }

    #[test]
    fn evidence_certificates_are_sound() {
        let pg = {
            let target = LabeledGraph::kneser(3, 1).unwrap();
            let (u, v) = target.edges()[0];
            preimage_subgraph(5, 2, &target.vertex(u).mask, &target.vertex(v).mask).unwrap()
        };
        match preimage_evidence(&pg).unwrap() {
            PreimageEvidence::Cycle6(vs) => {
                // Every vertex sees exactly two others within the six.
                for &a in &vs {
                    let inside = vs
                        .iter()
                        .filter(|&&b| a != b && pg.has_edge(a.min(b), a.max(b)))
                        .count();
                    assert_eq!(inside, 2);
                }
            }
            PreimageEvidence::InducedMatching3(es) => {
                let vs: Vec<u32> = es.iter().flat_map(|&(a, b)| [a, b]).collect();
                let count = (0..vs.len())
                    .flat_map(|i| ((i + 1)..vs.len()).map(move |j| (i, j)))
                    .filter(|&(i, j)| pg.has_edge(vs[i].min(vs[j]), vs[i].max(vs[j])))
                    .count();
                assert_eq!(count, 3, "only the matching edges are present");
            }
        }
    }
}
