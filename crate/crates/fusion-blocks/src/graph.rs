//! Dual graphs of stable pointed curves: vertices carry a genus, edges are
//! the nodes (self-loops allowed), legs are the marked points.
//!
//! Also enumerates the trivalent stable graphs of a given genus and leg count
//! (all vertices of genus 0 and valence 3), deduplicated up to isomorphism
//! fixing the leg slots. These are the maximal degenerations whose rank sums
//! the factorization invariance checks compare.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fusion::FusionData;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("vertex {0} is unstable: 2g - 2 + valence = {1}")]
    UnstableVertex(usize, i64),
    #[error("edge ({0}, {1}) references a missing vertex")]
    BadEdge(usize, usize),
    #[error("leg {0} references a missing vertex {1}")]
    BadLeg(usize, usize),
    #[error("unknown leg label {0:?}; valid labels are [{1}]")]
    UnknownLabel(String, String),
    #[error("graph has no vertices")]
    Empty,
}

/// Combinatorial type of a stable n-pointed curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    /// genus of each component
    pub vertices: Vec<u32>,
    /// nodes, as unordered vertex pairs; self-loops allowed
    pub edges: Vec<(usize, usize)>,
    /// marked points: (vertex, fusion label index)
    pub legs: Vec<(usize, usize)>,
}

/// On-disk JSON form with legs carrying label names:
/// `{"vertices":[{"genus":g}], "edges":[[u,v]], "legs":[{"vertex":u,"label":"name"}]}`.
#[derive(Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: Vec<GraphFileVertex>,
    pub edges: Vec<(usize, usize)>,
    pub legs: Vec<GraphFileLeg>,
}

#[derive(Serialize, Deserialize)]
pub struct GraphFileVertex {
    pub genus: u32,
}

#[derive(Serialize, Deserialize)]
pub struct GraphFileLeg {
    pub vertex: usize,
    pub label: String,
}

impl DualGraph {
    pub fn new(
        vertices: Vec<u32>,
        edges: Vec<(usize, usize)>,
        legs: Vec<(usize, usize)>,
    ) -> Result<Self, GraphError> {
        let g = DualGraph { vertices, edges, legs };
        g.validate()?;
        Ok(g)
    }

    /// Resolve a file representation against a ring's label names.
    pub fn from_file(file: GraphFile, ring: &FusionData) -> Result<Self, GraphError> {
        let vertices = file.vertices.iter().map(|v| v.genus).collect();
        let mut legs = Vec::with_capacity(file.legs.len());
        for leg in &file.legs {
            let idx = ring.resolve(&leg.label).ok_or_else(|| {
                GraphError::UnknownLabel(leg.label.clone(), ring.labels().join(", "))
            })?;
            legs.push((leg.vertex, idx));
        }
        DualGraph::new(vertices, file.edges, legs)
    }

    pub fn to_file(&self, ring: &FusionData) -> GraphFile {
        GraphFile {
            vertices: self.vertices.iter().map(|&genus| GraphFileVertex { genus }).collect(),
            edges: self.edges.clone(),
            legs: self
                .legs
                .iter()
                .map(|&(vertex, label)| GraphFileLeg {
                    vertex,
                    label: ring.labels()[label].clone(),
                })
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        let n = self.vertices.len();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        for &(u, v) in &self.edges {
            if u >= n || v >= n {
                return Err(GraphError::BadEdge(u, v));
            }
        }
        for (i, &(v, _)) in self.legs.iter().enumerate() {
            if v >= n {
                return Err(GraphError::BadLeg(i, v));
            }
        }
        for v in 0..n {
            let val = self.valence(v);
            let s = 2 * self.vertices[v] as i64 - 2 + val as i64;
            if s <= 0 {
                return Err(GraphError::UnstableVertex(v, s));
            }
        }
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(())
    }

    /// Incident edge endpoints plus legs; a self-loop counts twice.
    pub fn valence(&self, v: usize) -> usize {
        let mut val = 0;
        for &(a, b) in &self.edges {
            if a == v {
                val += 1;
            }
            if b == v {
                val += 1;
            }
        }
        val + self.legs.iter().filter(|&&(w, _)| w == v).count()
    }

    fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Total arithmetic genus: sum of vertex genera plus the loop rank.
    pub fn genus(&self) -> u32 {
        let b1 = self.edges.len() as i64 - self.vertices.len() as i64 + 1;
        let gv: u32 = self.vertices.iter().sum();
        gv + u32::try_from(b1).expect("connected graph has nonnegative loop rank")
    }

    /// The theta graph: two genus-0 vertices joined by three parallel edges.
    pub fn theta() -> DualGraph {
        DualGraph::new(vec![0, 0], vec![(0, 1), (0, 1), (0, 1)], vec![]).unwrap()
    }

    /// The dumbbell: two genus-0 vertices, one self-loop each, one bridge.
    pub fn dumbbell() -> DualGraph {
        DualGraph::new(vec![0, 0], vec![(0, 0), (0, 1), (1, 1)], vec![]).unwrap()
    }
}

/// A trivalent graph topology with distinguishable leg slots (labels are
/// assigned by the caller).
#[derive(Debug, Clone)]
pub struct TrivalentGraph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    /// leg slot s sits on vertex `leg_vertices[s]`
    pub leg_vertices: Vec<usize>,
}

impl TrivalentGraph {
    /// Attach fusion labels to the leg slots.
    pub fn with_labels(&self, labels: &[usize]) -> DualGraph {
        assert_eq!(labels.len(), self.leg_vertices.len());
        DualGraph::new(
            vec![0; self.vertices],
            self.edges.clone(),
            self.leg_vertices
                .iter()
                .zip(labels)
                .map(|(&v, &l)| (v, l))
                .collect(),
        )
        .expect("trivalent graphs are stable by construction")
    }
}

/// All connected trivalent stable graphs of the given genus with `n_legs`
/// distinguishable legs, up to isomorphism fixing the legs.
///
/// Every vertex has genus 0 and valence 3, which forces
/// V = 2g - 2 + n and E = 3g - 3 + n.
pub fn trivalent_graphs(genus: u32, n_legs: usize) -> Vec<TrivalentGraph> {
    let v_count = 2 * genus as i64 - 2 + n_legs as i64;
    let e_count = 3 * genus as i64 - 3 + n_legs as i64;
    if v_count < 1 || e_count < 0 {
        return Vec::new();
    }
    let (v_count, e_count) = (v_count as usize, e_count as usize);

    let mut out: Vec<TrivalentGraph> = Vec::new();
    let mut seen = std::collections::HashSet::new();

    // enumerate leg placements, then edge multisets completing all degrees to 3
    let mut leg_vertices = vec![0usize; n_legs];
    loop {
        let mut degree_left = vec![3i64; v_count];
        let mut feasible = true;
        for &v in &leg_vertices {
            degree_left[v] -= 1;
            if degree_left[v] < 0 {
                feasible = false;
            }
        }
        if feasible {
            let pairs: Vec<(usize, usize)> = (0..v_count)
                .flat_map(|i| (i..v_count).map(move |j| (i, j)))
                .collect();
            let mut edges = Vec::with_capacity(e_count);
            complete_degrees(
                &pairs,
                0,
                &mut degree_left,
                e_count,
                &mut edges,
                &leg_vertices,
                &mut seen,
                &mut out,
            );
        }
        // next leg placement (odometer)
        let mut i = 0;
        loop {
            if i == n_legs {
                return out;
            }
            leg_vertices[i] += 1;
            if leg_vertices[i] < v_count {
                break;
            }
            leg_vertices[i] = 0;
            i += 1;
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn complete_degrees(
    pairs: &[(usize, usize)],
    idx: usize,
    degree_left: &mut Vec<i64>,
    edges_left: usize,
    edges: &mut Vec<(usize, usize)>,
    leg_vertices: &[usize],
    seen: &mut std::collections::HashSet<Vec<usize>>,
    out: &mut Vec<TrivalentGraph>,
) {
    // every edge consumes exactly two endpoint slots
    if degree_left.iter().sum::<i64>() != 2 * edges_left as i64 {
        return;
    }
    if edges_left == 0 {
        let g = TrivalentGraph {
            vertices: degree_left.len(),
            edges: edges.clone(),
            leg_vertices: leg_vertices.to_vec(),
        };
        // legless vertices are interchangeable; discarding candidates that a
        // neighbor swap lexicographically improves kills most duplicates
        // before the exact canonical form dedups the rest
        if is_swap_minimal(&g) && is_connected(&g) {
            let key = canonical_key(&g);
            if seen.insert(key) {
                out.push(g);
            }
        }
        return;
    }
    if idx >= pairs.len() {
        return;
    }
    let (u, v) = pairs[idx];
    // pairs are ordered with all pairs touching vertex w before (w+1, w+1);
    // once we move past the last pair containing u-1, its degree must be spent
    if u >= 1 && v == u && degree_left[u - 1] != 0 {
        return;
    }
    let max_here = if u == v {
        degree_left[u] / 2
    } else {
        i64::min(degree_left[u], degree_left[v])
    };
    let max_mult = i64::min(max_here, edges_left as i64);
    for mult in (0..=max_mult).rev() {
        if u == v {
            degree_left[u] -= 2 * mult;
        } else {
            degree_left[u] -= mult;
            degree_left[v] -= mult;
        }
        for _ in 0..mult {
            edges.push((u, v));
        }
        complete_degrees(
            pairs,
            idx + 1,
            degree_left,
            edges_left - mult as usize,
            edges,
            leg_vertices,
            seen,
            out,
        );
        for _ in 0..mult {
            edges.pop();
        }
        if u == v {
            degree_left[u] += 2 * mult;
        } else {
            degree_left[u] += mult;
            degree_left[v] += mult;
        }
    }
}

/// True unless swapping some pair of adjacent legless vertex indices gives a
/// lexicographically smaller adjacency encoding. Keeps at least one
/// representative per isomorphism class.
fn is_swap_minimal(g: &TrivalentGraph) -> bool {
    let n = g.vertices;
    let mut mult = vec![0u8; n * n];
    for &(u, v) in &g.edges {
        if u == v {
            mult[u * n + u] += 1;
        } else {
            mult[u * n + v] += 1;
            mult[v * n + u] += 1;
        }
    }
    let mut has_leg = vec![false; n];
    for &v in &g.leg_vertices {
        has_leg[v] = true;
    }
    for v in 0..n.saturating_sub(1) {
        let w = v + 1;
        if has_leg[v] || has_leg[w] {
            continue;
        }
        // compare enc(g) to enc(g with v and w swapped), entry by entry
        let perm = |x: usize| {
            if x == v {
                w
            } else if x == w {
                v
            } else {
                x
            }
        };
        for i in 0..n {
            let mut decided = false;
            for j in 0..n {
                let a = mult[i * n + j];
                let b = mult[perm(i) * n + perm(j)];
                match b.cmp(&a) {
                    std::cmp::Ordering::Less => return false,
                    std::cmp::Ordering::Greater => {
                        decided = true;
                        break;
                    }
                    std::cmp::Ordering::Equal => {}
                }
            }
            if decided {
                break;
            }
        }
    }
    true
}

fn is_connected(g: &TrivalentGraph) -> bool {
    if g.vertices == 0 {
        return false;
    }
    let mut seen = vec![false; g.vertices];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(a, b) in &g.edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Canonical encoding under all vertex permutations, with legs pinned to
/// their slots (legs are distinguishable).
///
/// Positions are assigned one at a time by branch and bound: every partial
/// labeling that still achieves the lexicographically minimal adjacency
/// prefix survives, everything else is pruned. Among the surviving complete
/// labelings the leg-position vector is minimized as a tiebreak. This is the
/// exact minimum over all permutations without walking the whole factorial.
fn canonical_key(g: &TrivalentGraph) -> Vec<usize> {
    let n = g.vertices;
    let mut mult = vec![0usize; n * n];
    for &(u, v) in &g.edges {
        if u == v {
            mult[u * n + u] += 1;
        } else {
            mult[u * n + v] += 1;
            mult[v * n + u] += 1;
        }
    }
    let mut leg_count = vec![0usize; n];
    for &v in &g.leg_vertices {
        leg_count[v] += 1;
    }
    // prefixes of vertex labelings achieving the current minimal encoding
    let mut survivors: Vec<Vec<usize>> = vec![Vec::new()];
    let mut encoding: Vec<usize> = Vec::new();
    for pos in 0..n {
        let mut best_row: Option<Vec<usize>> = None;
        let mut next: Vec<Vec<usize>> = Vec::new();
        for prefix in &survivors {
            for v in 0..n {
                if prefix.contains(&v) {
                    continue;
                }
                let mut row: Vec<usize> = vec![leg_count[v]];
                row.extend(prefix.iter().map(|&u| mult[v * n + u]));
                row.push(mult[v * n + v]); // loop count
                match &best_row {
                    Some(b) if *b < row => {}
                    Some(b) if *b == row => {
                        let mut p = prefix.clone();
                        p.push(v);
                        next.push(p);
                    }
                    _ => {
                        best_row = Some(row);
                        next.clear();
                        let mut p = prefix.clone();
                        p.push(v);
                        next.push(p);
                    }
                }
            }
        }
        encoding.extend(best_row.expect("at least one vertex remains"));
        survivors = next;
        let _ = pos;
    }
    // positions of the (distinguishable) leg slots, minimized over survivors
    let mut best_legs: Option<Vec<usize>> = None;
    for perm in &survivors {
        let mut position = vec![0usize; n];
        for (p, &v) in perm.iter().enumerate() {
            position[v] = p;
        }
        let legs: Vec<usize> = g.leg_vertices.iter().map(|&v| position[v]).collect();
        match &best_legs {
            Some(b) if *b <= legs => {}
            _ => best_legs = Some(legs),
        }
    }
    encoding.extend(best_legs.unwrap_or_default());
    encoding
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn genus_accounting() {
        assert_eq!(DualGraph::theta().genus(), 2);
        assert_eq!(DualGraph::dumbbell().genus(), 2);
        let g = DualGraph::new(vec![1, 0], vec![(0, 1)], vec![(1, 0), (1, 0)]).unwrap();
        assert_eq!(g.genus(), 1);
    }

    #[test]
    fn stability_enforced() {
        // a genus-0 vertex with a single leg is unstable
        let bad = DualGraph::new(vec![0], vec![], vec![(0, 0)]);
        assert!(matches!(bad, Err(GraphError::UnstableVertex(0, _))));
        // disconnected pair
        let bad = DualGraph::new(vec![1, 1], vec![(0, 0), (1, 1)], vec![]);
        assert!(matches!(bad, Err(GraphError::Disconnected)));
    }

    #[test]
    fn file_roundtrip_resolves_labels() {
        let ring = catalog::ising();
        let g = DualGraph::new(vec![0], vec![], vec![(0, 2), (0, 2), (0, 1)]).unwrap();
        let file = g.to_file(&ring);
        let back = DualGraph::from_file(file, &ring).unwrap();
        assert_eq!(back, g);

        let mut file = g.to_file(&ring);
        file.legs[0].label = "oops".into();
        assert!(matches!(
            DualGraph::from_file(file, &ring),
            Err(GraphError::UnknownLabel(_, _))
        ));
    }

    #[test]
    fn genus_two_vacuum_graphs_are_theta_and_dumbbell() {
        let graphs = trivalent_graphs(2, 0);
        assert_eq!(graphs.len(), 2);
        let loops: Vec<usize> = graphs
            .iter()
            .map(|g| g.edges.iter().filter(|&&(u, v)| u == v).count())
            .collect();
        assert!(loops.contains(&0), "theta graph present");
        assert!(loops.contains(&2), "dumbbell present");
    }

    #[test]
    fn small_trivalent_counts() {
        // single vertex with three legs
        assert_eq!(trivalent_graphs(0, 3).len(), 1);
        // one-loop, one-leg graph
        assert_eq!(trivalent_graphs(1, 1).len(), 1);
        // four-pointed sphere: three channels... as leg-labeled topologies
        // there are distinct pairings of (2 legs | 2 legs) over two vertices
        let g04 = trivalent_graphs(0, 4);
        assert_eq!(g04.len(), 3);
        for g in &g04 {
            assert_eq!(g.edges.len(), 1);
        }
        // all enumerated graphs carry the genus they claim
        for (genus, n) in [(1u32, 2usize), (2, 1), (3, 0)] {
            for g in trivalent_graphs(genus, n) {
                let labels = vec![0; n];
                let dg = g.with_labels(&labels);
                assert_eq!(dg.genus(), genus);
            }
        }
    }
}
