//! Ranks of conformal-block bundles on stable n-pointed genus-g curves.
//!
//! Two independent routes are implemented and cross-checked:
//!
//! * the closed form (N_{i_1} ... N_{i_n} W^g) at entry (0,0), with the trace
//!   form Tr(N_{i_*} W^(g-1)) asserted for g >= 2;
//! * the factorization sum over edge labelings of a dual graph, with the
//!   three-point ranks at each vertex.
//!
//! A query with no legs is handled by inserting one vacuum leg, which never
//! changes the rank.

use num::{BigUint, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::fusion::{FusionData, FusionError};
use crate::graph::{trivalent_graphs, DualGraph, GraphError};

#[derive(Debug, Error)]
pub enum RankError {
    #[error(transparent)]
    Fusion(#[from] FusionError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("ring fails axiom verification: {0}")]
    InvalidRing(crate::fusion::AxiomReport),
    #[error("query (genus {0}, {1} legs) is unstable")]
    Unstable(u32, usize),
    #[error("decomposition enumeration capped at genus <= 3 and <= 4 legs; got ({0}, {1})")]
    EnumerationBound(u32, usize),
    #[error("rank accumulator overflowed 128 bits; use the closed form")]
    Overflow,
}

/// A closed-form rank query: genus plus the leg labels (possibly empty).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankQuery {
    pub genus: u32,
    pub legs: Vec<usize>,
}

impl RankQuery {
    pub fn new(genus: u32, legs: Vec<usize>) -> Self {
        RankQuery { genus, legs }
    }

    /// Stability 2g - 2 + n > 0, or stability after inserting one vacuum leg
    /// (which never changes the rank). Only (g, n) = (0, 0) and (0, 1) are
    /// rejected.
    pub fn is_admissible(&self) -> bool {
        2 * self.genus as i64 - 2 + self.legs.len() as i64 >= 0
    }
}

/// Rank of the three-point block space with incoming legs (i, j, k):
/// `N[i][j][dual k]`. Fully symmetric in its arguments.
pub fn three_point_rank(ring: &FusionData, i: usize, j: usize, k: usize) -> Result<u64, RankError> {
    ring.check_index(i)?;
    ring.check_index(j)?;
    ring.check_index(k)?;
    Ok(ring.n(i, j, ring.dual(k)))
}

/// Closed-form rank (N_{i_*} W^g) entry (0,0). For g >= 2 the trace form
/// Tr(N_{i_*} W^(g-1)) is computed as well and must agree.
pub fn rank_closed_form(ring: &FusionData, query: &RankQuery) -> Result<BigUint, RankError> {
    let report = ring.verify_axioms();
    if !report.is_empty() {
        return Err(RankError::InvalidRing(report));
    }
    if !query.is_admissible() {
        return Err(RankError::Unstable(query.genus, query.legs.len()));
    }
    for &l in &query.legs {
        ring.check_index(l)?;
    }
    let n = ring.rank_plus_one();
    // vacuum-leg insertion for n = 0 is the identity factor, so the leg
    // product starts from the identity matrix either way
    let mut legs_product = crate::fusion::IntMatrix::identity(n);
    for &l in &query.legs {
        legs_product = legs_product.mul(&ring.fusion_matrix(l)?);
    }
    let avg = ring.average_matrix()?;
    let full = legs_product.mul(&avg.pow(query.genus));
    let value = full.get(0, 0).clone();
    if query.genus >= 2 {
        let trace_form = legs_product.mul(&avg.pow(query.genus - 1)).trace();
        assert_eq!(
            value, trace_form,
            "closed-form rank and its trace form disagree; fusion arithmetic is broken"
        );
    }
    Ok(value)
}

/// Shared context for dual-graph walks: the ring plus u64 copies of the
/// fusion tensor and small powers of the average matrix for fast local
/// vertex factors.
struct WalkContext<'a> {
    ring: &'a FusionData,
    avg_pows: Vec<Vec<u64>>, // avg_pows[g] = W^g row-major, up to max vertex genus
}

impl<'a> WalkContext<'a> {
    fn new(ring: &'a FusionData, max_genus: u32) -> Result<Self, RankError> {
        let avg = ring.average_matrix()?;
        let n = ring.rank_plus_one();
        let mut avg_pows = Vec::with_capacity(max_genus as usize + 1);
        for g in 0..=max_genus {
            let m = avg.pow(g);
            let mut flat = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    flat.push(m.get(i, j).to_u64().ok_or(RankError::Overflow)?);
                }
            }
            avg_pows.push(flat);
        }
        Ok(WalkContext { ring, avg_pows })
    }

    /// Local factor at one vertex: rank of (genus, incident labels) via
    /// vector propagation through the fusion matrices. Genus-0 vertices of
    /// low valence (every vertex of a trivalent graph) hit direct tensor
    /// lookups instead.
    fn vertex_rank(&self, genus: u32, labels: &[usize]) -> Result<u128, RankError> {
        if genus == 0 {
            match labels {
                [a, b, c] => {
                    return Ok(self.ring.n(*a, *b, self.ring.dual(*c)) as u128);
                }
                [a, b] => {
                    return Ok(u128::from(*a == self.ring.dual(*b)));
                }
                [a] => return Ok(u128::from(*a == 0)),
                _ => {}
            }
        }
        let n = self.ring.rank_plus_one();
        // row vector starting as e_0, times each N_l, times W^g, read entry 0
        let mut v = vec![0u128; n];
        v[0] = 1;
        for &l in labels {
            let mut next = vec![0u128; n];
            for j in 0..n {
                if v[j] == 0 {
                    continue;
                }
                for k in 0..n {
                    let m = self.ring.n(l, j, k) as u128;
                    if m != 0 {
                        next[k] = v[j]
                            .checked_mul(m)
                            .and_then(|p| p.checked_add(next[k]))
                            .ok_or(RankError::Overflow)?;
                    }
                }
            }
            v = next;
        }
        let w = &self.avg_pows[genus as usize];
        let mut acc: u128 = 0;
        for j in 0..n {
            if v[j] != 0 {
                acc = acc
                    .checked_add(v[j].checked_mul(w[j * n] as u128).ok_or(RankError::Overflow)?)
                    .ok_or(RankError::Overflow)?;
            }
        }
        Ok(acc)
    }
}

/// Rank by factorization: sum over edge labelings of the product of local
/// vertex ranks. Each edge carries its label at the tail and the dual label
/// at the head; self-loops contribute both to the same vertex.
pub fn rank_dual_graph(ring: &FusionData, graph: &DualGraph) -> Result<BigUint, RankError> {
    let max_genus = graph.vertices.iter().copied().max().unwrap_or(0);
    FactorizationEngine::new(ring, max_genus)?.rank(graph)
}

/// Reusable factorization evaluator: verifies the ring and precomputes the
/// average-matrix powers once, then prices any number of dual graphs.
pub struct FactorizationEngine<'a> {
    ring: &'a FusionData,
    ctx: WalkContext<'a>,
    max_genus: u32,
}

impl<'a> FactorizationEngine<'a> {
    pub fn new(ring: &'a FusionData, max_vertex_genus: u32) -> Result<Self, RankError> {
        let report = ring.verify_axioms();
        if !report.is_empty() {
            return Err(RankError::InvalidRing(report));
        }
        Ok(FactorizationEngine {
            ring,
            ctx: WalkContext::new(ring, max_vertex_genus)?,
            max_genus: max_vertex_genus,
        })
    }

    pub fn rank(&self, graph: &DualGraph) -> Result<BigUint, RankError> {
        graph.validate()?;
        let ring = self.ring;
        for &(_, l) in &graph.legs {
            ring.check_index(l)?;
        }
        let graph_genus = graph.vertices.iter().copied().max().unwrap_or(0);
        assert!(
            graph_genus <= self.max_genus,
            "engine built for vertex genus <= {}, graph has {}",
            self.max_genus,
            graph_genus
        );

        // order edges so that vertices complete as early as possible
        let order = walk_order(graph);

        let n_vertices = graph.vertices.len();
        // per-vertex incidence: label slots pre-seeded with the legs; an
        // edge contributes its label at the tail and the dual at the head
        let mut need = vec![0usize; n_vertices];
        let mut seed: Vec<Vec<usize>> = vec![Vec::new(); n_vertices];
        for &(v, l) in &graph.legs {
            need[v] += 1;
            seed[v].push(l);
        }
        for &(u, v) in &graph.edges {
            need[u] += 1;
            need[v] += 1;
        }

        if graph.edges.is_empty() {
            let mut acc: u128 = 1;
            for v in 0..n_vertices {
                acc = acc
                    .checked_mul(self.ctx.vertex_rank(graph.vertices[v], &seed[v])?)
                    .ok_or(RankError::Overflow)?;
            }
            return Ok(BigUint::from(acc));
        }

        // parallel over the outermost edge's label, sequential walk below
        let n_labels = ring.rank_plus_one();
        let totals: Result<Vec<u128>, RankError> = (0..n_labels)
            .into_par_iter()
            .map(|first_label| {
                let mut state = WalkState {
                    ring,
                    graph,
                    ctx: &self.ctx,
                    order: &order,
                    need: &need,
                    labels_at: seed.clone(),
                    acc: 0,
                };
                state.descend(0, Some(first_label), 1)?;
                Ok(state.acc)
            })
            .collect();
        let mut total = BigUint::zero();
        for t in totals? {
            total += BigUint::from(t);
        }
        Ok(total)
    }
}

struct WalkState<'a> {
    ring: &'a FusionData,
    graph: &'a DualGraph,
    ctx: &'a WalkContext<'a>,
    order: &'a [usize],
    need: &'a [usize],
    labels_at: Vec<Vec<usize>>,
    acc: u128,
}

impl WalkState<'_> {
    /// Depth-first product walk over edge labels with early termination on
    /// zero vertex factors.
    fn descend(&mut self, depth: usize, forced: Option<usize>, partial: u128) -> Result<(), RankError> {
        if depth == self.order.len() {
            self.acc = self.acc.checked_add(partial).ok_or(RankError::Overflow)?;
            return Ok(());
        }
        let edge_idx = self.order[depth];
        let (u, v) = self.graph.edges[edge_idx];
        let (lo, hi) = match forced {
            Some(l) => (l, l + 1),
            None => (0, self.ring.rank_plus_one()),
        };
        for label in lo..hi {
            self.labels_at[u].push(label);
            self.labels_at[v].push(self.ring.dual(label));
            let mut factor: u128 = 1;
            let mut ok = true;
            for w in if u == v { [u, usize::MAX] } else { [u, v] } {
                if w == usize::MAX {
                    break;
                }
                if self.labels_at[w].len() == self.need[w] {
                    let f = self
                        .ctx
                        .vertex_rank(self.graph.vertices[w], &self.labels_at[w])?;
                    if f == 0 {
                        ok = false;
                        break;
                    }
                    factor = factor.checked_mul(f).ok_or(RankError::Overflow)?;
                }
            }
            if ok {
                let next = partial.checked_mul(factor).ok_or(RankError::Overflow)?;
                self.descend(depth + 1, None, next)?;
            }
            self.labels_at[u].pop();
            self.labels_at[v].pop();
        }
        Ok(())
    }
}

/// Greedy edge ordering for the labeling walk: repeatedly take the edge that
/// closes the most vertices, then the one touching the labeled frontier,
/// then the heaviest by incident degree.
fn walk_order(graph: &DualGraph) -> Vec<usize> {
    let n_vertices = graph.vertices.len();
    let mut pending = vec![0usize; n_vertices];
    for &(u, v) in &graph.edges {
        pending[u] += 1;
        pending[v] += 1;
    }
    let mut touched = vec![false; n_vertices];
    for &(v, _) in &graph.legs {
        touched[v] = true;
    }
    let mut order = Vec::with_capacity(graph.edges.len());
    let mut used = vec![false; graph.edges.len()];
    for _ in 0..graph.edges.len() {
        let mut best: Option<(i64, usize)> = None;
        for (e, &(u, v)) in graph.edges.iter().enumerate() {
            if used[e] {
                continue;
            }
            let closes = |w: usize| (pending[w] == 1) as i64;
            let frontier = |w: usize| touched[w] as i64;
            let score = if u == v {
                4 * (pending[u] <= 2) as i64 + 2 * frontier(u)
            } else {
                4 * (closes(u) + closes(v)) + 2 * (frontier(u) + frontier(v))
            } + (graph.valence(u) + graph.valence(v)) as i64 / 8;
            if best.map(|(s, _)| score > s).unwrap_or(true) {
                best = Some((score, e));
            }
        }
        let (_, e) = best.unwrap();
        used[e] = true;
        let (u, v) = graph.edges[e];
        pending[u] -= 1;
        pending[v] -= 1;
        touched[u] = true;
        touched[v] = true;
        order.push(e);
    }
    order
}

/// Outcome of a decomposition-invariance sweep.
#[derive(Debug, Clone)]
pub struct DecompReport {
    pub closed_form: BigUint,
    pub graph_count: usize,
    pub common_value: Option<BigUint>,
    pub first_discrepancy: Option<(usize, BigUint)>,
}

impl DecompReport {
    pub fn consistent(&self) -> bool {
        self.first_discrepancy.is_none() && self.common_value.as_ref() == Some(&self.closed_form)
    }
}

/// Evaluate every trivalent stable degeneration of (genus, legs) and compare
/// the factorization ranks with each other and with the closed form.
pub fn decomposition_invariance(
    ring: &FusionData,
    genus: u32,
    legs: &[usize],
) -> Result<DecompReport, RankError> {
    if genus > 3 || legs.len() > 4 {
        return Err(RankError::EnumerationBound(genus, legs.len()));
    }
    let query = RankQuery::new(genus, legs.to_vec());
    if !query.is_admissible() {
        return Err(RankError::Unstable(genus, legs.len()));
    }
    let closed = rank_closed_form(ring, &query)?;
    let graphs = trivalent_graphs(genus, legs.len());
    let engine = FactorizationEngine::new(ring, 0)?;
    let mut common: Option<BigUint> = None;
    let mut first_discrepancy = None;
    for (idx, g) in graphs.iter().enumerate() {
        let dg = g.with_labels(legs);
        let value = engine.rank(&dg)?;
        match &common {
            None => common = Some(value),
            Some(c) if *c != value => {
                first_discrepancy = Some((idx, value));
                break;
            }
            _ => {}
        }
    }
    Ok(DecompReport {
        closed_form: closed,
        graph_count: graphs.len(),
        common_value: common,
        first_discrepancy,
    })
}
