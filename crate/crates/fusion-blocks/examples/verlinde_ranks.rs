//! Closed-form ranks of conformal-block bundles: the corner entry of
//! N_{i_1} ... N_{i_n} W^g, its trace form for g >= 2, and the genus-one
//! dimensions Tr(N_i).
//!
//! ```bash
//! cargo run --release -p fusion-blocks --example verlinde_ranks
//! ```

use fusion_blocks::catalog;
use fusion_blocks::rank::{rank_closed_form, RankQuery};

fn main() {
    for (name, ring) in [
        ("ising", catalog::ising()),
        ("lee_yang", catalog::lee_yang()),
        ("su2_3", catalog::su2_level(3)),
    ] {
        println!("{name}:");
        // vacuum ranks by genus
        let by_genus: Vec<String> = (1..=5u32)
            .map(|g| {
                rank_closed_form(&ring, &RankQuery::new(g, vec![]))
                    .unwrap()
                    .to_string()
            })
            .collect();
        println!("  rank by genus (no legs, g = 1..5): {}", by_genus.join(", "));

        // genus-one one-point dimensions are traces of the fusion matrices
        for i in 0..ring.rank_plus_one() {
            let rank = rank_closed_form(&ring, &RankQuery::new(1, vec![i])).unwrap();
            let trace = ring.fusion_matrix(i).unwrap().trace();
            println!(
                "  genus 1, leg {}: rank {} = Tr(N_{}) = {}",
                ring.labels()[i],
                rank,
                ring.labels()[i],
                trace
            );
        }

        // a three-point sphere matches the tensor entry
        let q = RankQuery::new(0, vec![1, 1, 0]);
        println!(
            "  sphere with legs ({0}, {0}, 1): {1}",
            ring.labels()[1],
            rank_closed_form(&ring, &q).unwrap()
        );
        println!();
    }

    // the two statements of the rank formula agree for g >= 2
    let ising = catalog::ising();
    let avg = ising.average_matrix().unwrap();
    for g in 2..=4u32 {
        let corner = avg.pow(g).get(0, 0).clone();
        let trace = avg.pow(g - 1).trace();
        println!("ising genus {}: corner {} = trace {}", g, corner, trace);
        assert_eq!(corner, trace);
    }
}
