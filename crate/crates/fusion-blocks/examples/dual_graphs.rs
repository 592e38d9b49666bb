//! Factorization ranks on dual graphs of nodal curves, and the invariance of
//! the rank under different trivalent degenerations of the same surface.
//!
//! ```bash
//! cargo run --release -p fusion-blocks --example dual_graphs
//! ```

use fusion_blocks::catalog;
use fusion_blocks::graph::{trivalent_graphs, DualGraph};
use fusion_blocks::rank::{decomposition_invariance, rank_closed_form, rank_dual_graph, RankQuery};

fn main() {
    let ising = catalog::ising();

    // two degenerations of the genus-2 surface
    let theta = DualGraph::theta();
    let dumbbell = DualGraph::dumbbell();
    println!(
        "ising genus 2: theta graph {}, dumbbell {}, closed form {}",
        rank_dual_graph(&ising, &theta).unwrap(),
        rank_dual_graph(&ising, &dumbbell).unwrap(),
        rank_closed_form(&ising, &RankQuery::new(2, vec![])).unwrap(),
    );

    // a mixed graph: one genus-1 vertex with a self-loop and legs
    let g = DualGraph::new(vec![1, 0], vec![(0, 1), (0, 1)], vec![(1, 2)]).unwrap();
    println!(
        "ising on a (genus 1)--(genus 0) double edge with a sigma leg: {} (total genus {})",
        rank_dual_graph(&ising, &g).unwrap(),
        g.genus(),
    );

    // how many trivalent degenerations exist at small (genus, legs)
    println!("\ntrivalent graph counts:");
    for (g, n) in [(0u32, 3usize), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2), (3, 0), (3, 1)] {
        println!("  genus {}, {} legs: {}", g, n, trivalent_graphs(g, n).len());
    }

    // all degenerations give the same rank, and it matches the closed form
    println!("\ndecomposition invariance:");
    for (name, ring) in [("ising", catalog::ising()), ("su2_3", catalog::su2_level(3))] {
        for (genus, legs) in [(2u32, vec![]), (1, vec![0]), (0, vec![1, 1, 1, 1])] {
            let rep = decomposition_invariance(&ring, genus, &legs).unwrap();
            println!(
                "  {} genus {} legs {:?}: {} graphs all give {}, closed form {} -> {}",
                name,
                genus,
                legs,
                rep.graph_count,
                rep.common_value.as_ref().unwrap(),
                rep.closed_form,
                if rep.consistent() { "consistent" } else { "MISMATCH" }
            );
        }
    }
}
