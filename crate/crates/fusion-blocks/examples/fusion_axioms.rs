//! Build the catalog rings, check the fusion axioms, and print the basic
//! ring data: products, fusion matrices, and the average matrix.
//!
//! ```bash
//! cargo run --release -p fusion-blocks --example fusion_axioms
//! ```

use fusion_blocks::catalog;
use fusion_blocks::fusion::FusionData;

fn show(ring: &FusionData, name: &str) {
    let report = ring.verify_axioms();
    println!(
        "{name}: {} labels {:?} -> axioms {}",
        ring.rank_plus_one(),
        ring.labels(),
        if report.is_empty() { "ok".to_string() } else { report.to_string() }
    );
}

fn main() {
    let ising = catalog::ising();
    let lee_yang = catalog::lee_yang();
    show(&ising, "ising");
    show(&lee_yang, "lee_yang");
    for k in 1..=6 {
        show(&catalog::su2_level(k), &format!("su2_{k}"));
    }
    let prod = catalog::product(&ising, &lee_yang).unwrap();
    show(&prod, "ising*lee_yang");

    // products of simple labels
    println!("\nising products:");
    for i in 0..3 {
        for j in i..3 {
            let result: Vec<String> = ising
                .multiply(i, j)
                .unwrap()
                .into_iter()
                .map(|(k, m)| {
                    if m == 1 {
                        ising.labels()[k].clone()
                    } else {
                        format!("{}*{}", m, ising.labels()[k])
                    }
                })
                .collect();
            println!(
                "  {} . {} = {}",
                ising.labels()[i],
                ising.labels()[j],
                result.join(" + ")
            );
        }
    }

    println!("\nfusion matrix of sigma:");
    print!("{}", ising.fusion_matrix(2).unwrap());
    println!("average matrix of the ising ring:");
    print!("{}", ising.average_matrix().unwrap());

    // a deliberately broken ring is caught with a witness
    let mut broken = ising.to_file();
    broken.tensor[0][1][1] = 0;
    let broken = FusionData::from_file(broken).unwrap();
    println!("broken ring report: {}", broken.verify_axioms());
}
