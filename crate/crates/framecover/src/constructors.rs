//! Cover construction: the probabilistic halving-pair recipe with its
//! size bound, greedy and exact multicover search over maximal
//! bicliques, and the star cover that is optimal on four-cycle-free
//! graphs.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::combinatorics::{
    binomial, c4_witness, covering_number, enumerate_ksubsets, LabeledGraph, SearchBudget,
    SubsetMask,
};
use crate::covers::{
    bc_lower_bound, ensure_cover, verify_cover, Biclique, BicliqueCover, CoverBiclique,
    GroundPairBiclique,
};
use crate::error::{Error, Result};

/// Numbers behind the random halving construction for the Kneser
/// target on (t, r): sample each balanced subset with probability p and
/// patch the uncovered edges, giving an expected size below `bound`.
#[derive(Clone, Debug, Serialize)]
pub struct SfpcBound {
    pub t: u8,
    pub r: u8,
    /// Balanced subsets available to sample: C(t, ceil(t/2)).
    pub pool: u64,
    /// Balanced splits compatible with a fixed edge's two sides.
    pub alpha: u64,
    /// Balanced subsets separating one fixed edge.
    pub beta: u64,
    /// Inclusion probability ln(alpha) / beta, clamped to [0, 1].
    pub p: f64,
    /// Whether the raw probability exceeded 1; the tuning argument
    /// assumes the ground set is large relative to the subsets, and
    /// this flags the regime where it is not.
    pub clamped: bool,
    /// Closed-form size bound pool / beta * (1 + ln alpha).
    pub bound: f64,
    /// Exact expected size of the patched construction,
    /// p * pool + |E| * (1 - p)^beta.
    pub expected_size: f64,
}

/// Evaluate the halving-pair size bound. Needs 1 <= r and 2r <= t so
/// both halves can hold an r-subset.
pub fn sfpc_bound(t: u8, r: u8) -> Result<SfpcBound> {
    if r == 0 || (2 * r as u16) > t as u16 {
        return Err(Error::parameter(format!(
            "need 1 <= r and 2r <= t, got r = {r}, t = {t}"
        )));
    }
    let upper = (t as u64).div_ceil(2);
    let lower = t as u64 / 2;
    let narrow = |value: u128| {
        u64::try_from(value).map_err(|_| Error::parameter("count overflows a 64-bit integer"))
    };
    let pool = narrow(binomial(t as u64, upper))?;
    let alpha = narrow(binomial(upper, r as u64) * binomial(lower, r as u64))?;
    let beta = narrow(2 * binomial(t as u64 - 2 * r as u64, upper - r as u64))?;
    let edges = binomial(t as u64, r as u64) * binomial(t as u64 - r as u64, r as u64) / 2;
    let raw = (alpha as f64).ln() / beta as f64;
    let p = raw.clamp(0.0, 1.0);
    let bound = pool as f64 / beta as f64 * (1.0 + (alpha as f64).ln());
    let expected_size = p * pool as f64 + edges as f64 * (1.0 - p).powi(beta as i32);
    Ok(SfpcBound {
        t,
        r,
        pool,
        alpha,
        beta,
        p,
        clamped: raw > 1.0,
        bound,
        expected_size,
    })
}

/// All balanced subsets of the ground set, the sampling pool of the
/// random construction.
pub fn halving_pool(t: u8) -> Result<Vec<SubsetMask>> {
    if t == 0 {
        return Err(Error::parameter("ground set must be nonempty"));
    }
    enumerate_ksubsets(t, (t as u16).div_ceil(2) as u8)
}

#[derive(Clone, Copy, Debug)]
pub struct RandomCoverConfig {
    pub seed: u64,
    /// Independent attempts; the smallest resulting cover wins.
    pub trials: u32,
    /// Inclusion probability override; defaults to the tuned value.
    pub p: Option<f64>,
}

impl Default for RandomCoverConfig {
    fn default() -> Self {
        RandomCoverConfig {
            seed: 1729,
            trials: 8,
            p: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RandomCoverOutcome {
    /// A verified 1-cover of the Kneser target.
    pub cover: BicliqueCover,
    /// Balanced subsets the winning trial sampled.
    pub sampled: usize,
    /// Uncovered edges patched with single-edge bicliques.
    pub patched: usize,
    /// Which trial stream produced the winner.
    pub trial: u32,
    /// Cover size every trial reached, in trial order.
    pub trial_sizes: Vec<usize>,
    pub numbers: SfpcBound,
}

/// Sample balanced ground pairs and patch whatever they miss. The
/// output is always a valid 1-cover; its size is a random variable
/// whose mean the closed-form bound controls.
pub fn random_cover(t: u8, r: u8, config: &RandomCoverConfig) -> Result<RandomCoverOutcome> {
    let numbers = sfpc_bound(t, r)?;
    let p = match config.p {
        Some(p) if (0.0..=1.0).contains(&p) => p,
        Some(p) => {
            return Err(Error::parameter(format!(
                "inclusion probability must lie in [0, 1], got {p}"
            )));
        }
        None => numbers.p,
    };
    if config.trials == 0 {
        return Err(Error::parameter("need at least one trial"));
    }
    let g = LabeledGraph::kneser(t, r)?;
    let pool = halving_pool(t)?;
    let mut best: Option<RandomCoverOutcome> = None;
    let mut trial_sizes = Vec::with_capacity(config.trials as usize);
    for trial in 0..config.trials {
        let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
        rng.set_stream(trial as u64);
        let sampled: Vec<SubsetMask> = pool.iter().copied().filter(|_| rng.gen_bool(p)).collect();
        let mut bicliques = sampled
            .iter()
            .map(|a| {
                Ok(CoverBiclique::Ground(GroundPairBiclique::new(
                    *a,
                    a.complement(),
                    r,
                )?))
            })
            .collect::<Result<Vec<_>>>()?;
        let partial = BicliqueCover {
            family: g.family(),
            d: 1,
            bicliques: bicliques.clone(),
        };
        let report = verify_cover(&g, &partial)?;
        let mut patched = 0;
        for (idx, &(u, v)) in g.edges().iter().enumerate() {
            if report.per_edge[idx] == 0 {
                bicliques.push(CoverBiclique::Explicit(Biclique::new(vec![u], vec![v])));
                patched += 1;
            }
        }
        let cover = BicliqueCover {
            family: g.family(),
            d: 1,
            bicliques,
        };
        ensure_cover(&g, &cover, 1)
            .map_err(|e| Error::Invariant(format!("patched sample is not a cover: {e}")))?;
        trial_sizes.push(cover.size());
        if best.as_ref().is_none_or(|b| cover.size() < b.cover.size()) {
            best = Some(RandomCoverOutcome {
                cover,
                sampled: sampled.len(),
                patched,
                trial,
                trial_sizes: Vec::new(),
                numbers: numbers.clone(),
            });
        }
    }
    let mut best = best.expect("at least one trial ran");
    best.trial_sizes = trial_sizes;
    Ok(best)
}

/// All maximal bicliques of a graph on at most 64 vertices, sorted by
/// their canonical side masks. Enumerates subsets of each
/// neighborhood and closes them under common neighbors; the closure of
/// any biclique is a maximal one containing it, and every maximal
/// biclique is its own closure, so nothing is missed.
pub fn maximal_bicliques(g: &LabeledGraph, budget: &SearchBudget) -> Result<Vec<Biclique>> {
    let n = g.vertex_count();
    let cap = (budget.max_vertices as usize).min(64);
    if n > cap {
        return Err(Error::budget(format!(
            "maximal biclique enumeration handles at most {cap} vertices, graph has {n}"
        )));
    }
    let adj: Vec<u64> = (0..n as u32)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u))
        .collect();
    let common = |set: u64| -> u64 {
        debug_assert!(set != 0);
        let mut acc = u64::MAX;
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            acc &= adj[v];
        }
        acc
    };
    let bits_of = |mut set: u64| -> Vec<u32> {
        let mut out = Vec::with_capacity(set.count_ones() as usize);
        while set != 0 {
            out.push(set.trailing_zeros());
            set &= set - 1;
        }
        out
    };
    let mut seen = BTreeSet::new();
    let mut nodes = 0u64;
    for row in adj.iter().take(n) {
        let nb = bits_of(*row);
        for code in 1u64..1 << nb.len() {
            nodes += 1;
            if nodes > budget.max_nodes {
                return Err(Error::budget("maximal biclique enumeration"));
            }
            let s = bits_of(code)
                .into_iter()
                .fold(0u64, |m, i| m | 1 << nb[i as usize]);
            let x = common(s);
            let y = common(x);
            let x = common(y);
            debug_assert_eq!(common(x), y, "closure must stabilize");
            seen.insert((x.min(y), x.max(y)));
        }
    }
    Ok(seen
        .into_iter()
        .map(|(a, b)| Biclique::new(bits_of(a), bits_of(b)))
        .collect())
}

/// Per-candidate covered-edge bitsets, blocks of 64 edges each.
fn candidate_edge_sets(g: &LabeledGraph, cands: &[Biclique]) -> Vec<Vec<u64>> {
    let index: HashMap<(u32, u32), usize> =
        g.edges().iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let blocks = g.edge_count().div_ceil(64);
    cands
        .iter()
        .map(|b| {
            let mut set = vec![0u64; blocks];
            for &u in b.x() {
                for &v in b.y() {
                    let e = index[&(u.min(v), u.max(v))];
                    set[e / 64] |= 1 << (e % 64);
                }
            }
            set
        })
        .collect()
}

/// Greedy multicover over a fixed candidate list: repeatedly take the
/// candidate covering the most still-deficient edges. Returns the pick
/// indices; ties go to the earliest candidate.
fn greedy_picks(edge_sets: &[Vec<u64>], edge_count: usize, d: u32) -> Result<Vec<usize>> {
    let mut residual = vec![d; edge_count];
    let mut total = d as u64 * edge_count as u64;
    let mut picks = Vec::new();
    while total > 0 {
        let mut best: Option<(usize, u64)> = None;
        for (ci, set) in edge_sets.iter().enumerate() {
            let mut gain = 0u64;
            for (blk, &word) in set.iter().enumerate() {
                let mut w = word;
                while w != 0 {
                    let e = blk * 64 + w.trailing_zeros() as usize;
                    w &= w - 1;
                    if residual[e] > 0 {
                        gain += 1;
                    }
                }
            }
            if best.is_none_or(|(_, g)| gain > g) {
                best = Some((ci, gain));
            }
        }
        let (ci, gain) = best.expect("candidate list is nonempty");
        if gain == 0 {
            return Err(Error::Invariant(
                "an edge lies in no candidate biclique".into(),
            ));
        }
        picks.push(ci);
        for (blk, &word) in edge_sets[ci].iter().enumerate() {
            let mut w = word;
            while w != 0 {
                let e = blk * 64 + w.trailing_zeros() as usize;
                w &= w - 1;
                if residual[e] > 0 {
                    residual[e] -= 1;
                    total -= 1;
                }
            }
        }
    }
    Ok(picks)
}

/// Greedy d-cover from the maximal bicliques of the graph. Always
/// valid, not necessarily optimal.
pub fn greedy_cover(g: &LabeledGraph, d: u32, budget: &SearchBudget) -> Result<BicliqueCover> {
    if d == 0 {
        return Err(Error::parameter("coverage demand must be >= 1"));
    }
    let cands = maximal_bicliques(g, budget)?;
    if g.edge_count() == 0 {
        return Ok(BicliqueCover {
            family: g.family(),
            d,
            bicliques: Vec::new(),
        });
    }
    let edge_sets = candidate_edge_sets(g, &cands);
    let picks = greedy_picks(&edge_sets, g.edge_count(), d)?;
    let cover = BicliqueCover {
        family: g.family(),
        d,
        bicliques: picks
            .into_iter()
            .map(|ci| CoverBiclique::Explicit(cands[ci].clone()))
            .collect(),
    };
    ensure_cover(g, &cover, d)
        .map_err(|e| Error::Invariant(format!("greedy result failed verification: {e}")))?;
    Ok(cover)
}

#[derive(Clone, Debug)]
pub struct ExactCoverResult {
    /// The least number of bicliques in any d-cover.
    pub size: u32,
    /// A witness cover of that size, verified.
    pub cover: BicliqueCover,
    /// The counting lower bound the search started from.
    pub lower_bound: u64,
    /// Search tree nodes visited.
    pub nodes: u64,
}

struct ExactSearch {
    cand_edges: Vec<u64>,
    edge_cands: Vec<Vec<usize>>,
    cand_order: Vec<usize>,
    residual: Vec<i64>,
    total: u64,
    forbidden: Vec<bool>,
    chosen: Vec<usize>,
    best_size: u32,
    best_picks: Vec<usize>,
    lower_bound: u64,
    nodes: u64,
    max_nodes: u64,
}

impl ExactSearch {
    fn take(&mut self, ci: usize) {
        let mut w = self.cand_edges[ci];
        while w != 0 {
            let e = w.trailing_zeros() as usize;
            w &= w - 1;
            self.residual[e] -= 1;
            if self.residual[e] >= 0 {
                self.total -= 1;
            }
        }
    }

    fn untake(&mut self, ci: usize) {
        let mut w = self.cand_edges[ci];
        while w != 0 {
            let e = w.trailing_zeros() as usize;
            w &= w - 1;
            if self.residual[e] >= 0 {
                self.total += 1;
            }
            self.residual[e] += 1;
        }
    }

    fn dfs(&mut self, depth: u32) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::budget(""));
        }
        if self.best_size as u64 <= self.lower_bound {
            return Ok(());
        }
        if self.total == 0 {
            if depth < self.best_size {
                self.best_size = depth;
                self.best_picks = self.chosen.clone();
            }
            return Ok(());
        }
        let widest = self
            .cand_order
            .iter()
            .copied()
            .filter(|&ci| !self.forbidden[ci])
            .map(|ci| self.cand_edges[ci].count_ones() as u64)
            .max()
            .unwrap_or(0);
        if widest == 0 {
            return Ok(());
        }
        if depth as u64 + self.total.div_ceil(widest) >= self.best_size as u64 {
            return Ok(());
        }
        // Branch on the deficient edge with the fewest usable candidates.
        let branch_edge = (0..self.residual.len())
            .filter(|&e| self.residual[e] > 0)
            .min_by_key(|&e| {
                self.edge_cands[e]
                    .iter()
                    .filter(|&&ci| !self.forbidden[ci])
                    .count()
            })
            .expect("total > 0 leaves a deficient edge");
        let avail: Vec<usize> = self.edge_cands[branch_edge]
            .iter()
            .copied()
            .filter(|&ci| !self.forbidden[ci])
            .collect();
        // Branch k uses candidate k and forbids candidates 0..k, so the
        // branches partition the remaining solution space; a candidate
        // stays allowed within its own branch, keeping repeats legal.
        let mut newly_forbidden = Vec::new();
        for &ci in &avail {
            self.take(ci);
            self.chosen.push(ci);
            let out = self.dfs(depth + 1);
            self.chosen.pop();
            self.untake(ci);
            out?;
            self.forbidden[ci] = true;
            newly_forbidden.push(ci);
        }
        for ci in newly_forbidden {
            self.forbidden[ci] = false;
        }
        Ok(())
    }
}

/// Exact least d-cover size by branch and bound over the maximal
/// bicliques. Graphs beyond the edge budget fail fast with the
/// counting lower bound and the greedy upper bound attached.
pub fn exact_bc(g: &LabeledGraph, d: u32, budget: &SearchBudget) -> Result<ExactCoverResult> {
    if d == 0 {
        return Err(Error::parameter("coverage demand must be >= 1"));
    }
    let m = g.edge_count();
    if m == 0 {
        return Ok(ExactCoverResult {
            size: 0,
            cover: BicliqueCover {
                family: g.family(),
                d,
                bicliques: Vec::new(),
            },
            lower_bound: 0,
            nodes: 0,
        });
    }
    let lower_bound = bc_lower_bound(g, d, budget)?;
    if m as u64 > budget.max_edges as u64 {
        let upper = greedy_cover(g, d, budget).ok().map(|c| c.size() as u64);
        return Err(Error::BudgetExceeded {
            context: format!(
                "exact cover search handles at most {} edges, graph has {m}",
                budget.max_edges
            ),
            best_lower: Some(lower_bound),
            best_upper: upper,
        });
    }
    let cands = maximal_bicliques(g, budget)?;
    let edge_sets = candidate_edge_sets(g, &cands);
    let cand_edges: Vec<u64> = edge_sets.iter().map(|set| set[0]).collect();
    let greedy = greedy_picks(&edge_sets, m, d)?;
    let mut edge_cands = vec![Vec::new(); m];
    for (ci, &set) in cand_edges.iter().enumerate() {
        let mut w = set;
        while w != 0 {
            let e = w.trailing_zeros() as usize;
            w &= w - 1;
            edge_cands[e].push(ci);
        }
    }
    let mut cand_order: Vec<usize> = (0..cands.len()).collect();
    cand_order.sort_by_key(|&ci| std::cmp::Reverse(cand_edges[ci].count_ones()));

    let mut search = ExactSearch {
        cand_edges,
        edge_cands,
        cand_order,
        residual: vec![d as i64; m],
        total: d as u64 * m as u64,
        forbidden: vec![false; cands.len()],
        chosen: Vec::new(),
        best_size: greedy.len() as u32,
        best_picks: greedy,
        lower_bound,
        nodes: 0,
        max_nodes: budget.max_nodes,
    };
    search.dfs(0).map_err(|e| match e {
        Error::BudgetExceeded { .. } => Error::BudgetExceeded {
            context: "exact cover search".into(),
            best_lower: Some(lower_bound),
            best_upper: Some(search.best_size as u64),
        },
        other => other,
    })?;

    let cover = BicliqueCover {
        family: g.family(),
        d,
        bicliques: search
            .best_picks
            .iter()
            .map(|&ci| CoverBiclique::Explicit(cands[ci].clone()))
            .collect(),
    };
    ensure_cover(g, &cover, d)
        .map_err(|e| Error::Invariant(format!("optimal witness failed verification: {e}")))?;
    Ok(ExactCoverResult {
        size: search.best_size,
        cover,
        lower_bound,
        nodes: search.nodes,
    })
}

/// The stars centered at the given vertices, as a claimed 1-cover.
/// Covers the graph exactly when the centers form a vertex cover.
pub fn star_cover(g: &LabeledGraph, centers: &[u32]) -> Result<BicliqueCover> {
    let n = g.vertex_count() as u32;
    let bicliques = centers
        .iter()
        .map(|&c| {
            if c >= n {
                return Err(Error::parameter(format!(
                    "center {c} is out of range for a graph on {n} vertices"
                )));
            }
            Ok(CoverBiclique::Explicit(Biclique::new(
                vec![c],
                g.neighbors(c).to_vec(),
            )))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BicliqueCover {
        family: g.family(),
        d: 1,
        bicliques,
    })
}

/// On a four-cycle-free graph every biclique is a star, so the least
/// 1-cover size equals the covering number; returns that number with a
/// star cover witnessing it.
pub fn c4_free_bc1(g: &LabeledGraph, budget: &SearchBudget) -> Result<(u32, BicliqueCover)> {
    if let Some(w) = c4_witness(g) {
        return Err(Error::parameter(format!(
            "graph has a four-cycle through {}, {}, {}, {}",
            g.label(w[0]),
            g.label(w[1]),
            g.label(w[2]),
            g.label(w[3])
        )));
    }
    let (beta, centers) = covering_number(g, budget)?;
    let cover = star_cover(g, &centers)?;
    ensure_cover(g, &cover, 1)
        .map_err(|e| Error::Invariant(format!("star cover at a vertex cover must cover: {e}")))?;
    Ok((beta, cover))
}
