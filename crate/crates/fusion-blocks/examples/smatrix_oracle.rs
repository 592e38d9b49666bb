//! The numeric cross-check: fusion tensors recovered from closed-form modular
//! S-matrices through the classical Verlinde sums, compared entry by entry
//! with the combinatorial constructors.
//!
//! ```bash
//! cargo run --release -p fusion-blocks --example smatrix_oracle
//! ```

use fusion_blocks::catalog;

fn main() {
    let cases = {
        let mut v = vec![
            ("ising", catalog::ising(), catalog::ising_smatrix()),
            ("lee_yang", catalog::lee_yang(), catalog::lee_yang_smatrix()),
        ];
        for k in 1..=6 {
            v.push((
                Box::leak(format!("su2_{k}").into_boxed_str()),
                catalog::su2_level(k),
                catalog::su2_smatrix(k),
            ));
        }
        v
    };

    for (name, direct, s) in cases {
        let numeric = catalog::from_smatrix(&s).unwrap();
        let n = direct.rank_plus_one();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    assert_eq!(numeric.n(i, j, k), direct.n(i, j, k), "{name} ({i},{j},{k})");
                    // recompute the raw Verlinde sum to exhibit the rounding gap
                    let mut v = 0.0;
                    for a in 0..n {
                        v += s.get(i, a) * s.get(j, a) * s.get(k, a) / s.get(0, a);
                    }
                    worst = worst.max((v - v.round()).abs());
                }
            }
        }
        println!(
            "{name}: {} labels, tensors agree, worst distance from an integer {:.2e}",
            n, worst
        );
    }

    println!("\ndagger involutions read from charge conjugation S^2:");
    let ly = catalog::from_smatrix(&catalog::lee_yang_smatrix()).unwrap();
    println!("  lee_yang: {:?}", ly.dual_map());
    let su2_4 = catalog::from_smatrix(&catalog::su2_smatrix(4)).unwrap();
    println!("  su2_4: {:?}", su2_4.dual_map());
}
