//! The Weierstrass-type Laurent expansions, the P-series in its two
//! expansion regions, and the identity relating the exponential substitution
//! to the elliptic expansion, verified coefficient by coefficient.
//!
//! ```bash
//! cargo run --release -p fusion-blocks --example weierstrass_p_series
//! ```

use fusion_blocks::elliptic::{p_series, p_series_exp, p_series_shifted, p_wp_lemma_check, wp_expansion};

fn main() {
    println!("order-2 Weierstrass-type expansion (window |z| <= 4, q^3):");
    let wp2 = wp_expansion(2, 3, -4, 4).unwrap();
    for (e, c) in wp2.iter() {
        println!("  z^{:>2} : {}", e, c);
    }

    println!("\nP_2(z, q) in the region |q| < |z| < 1 (window 3, q^3):");
    let p2 = p_series(2, 3, -3, 3);
    for (e, c) in p2.iter() {
        println!("  z^{:>2} : {}", e, c);
    }

    println!("\nP_2(zq, q), the one-period-shifted companion:");
    let p2s = p_series_shifted(2, 3, -3, 3);
    for (e, c) in p2s.iter() {
        println!("  z^{:>2} : {}", e, c);
    }

    println!("\nP_2 after z -> e^(uz) (pole of order 2 at z = 0):");
    let p2e = p_series_exp(2, 3, 3);
    for (e, c) in p2e.iter() {
        println!("  z^{:>2} : {}", e, c);
    }

    println!("\nexponential-substitution identity residuals at truncation (q^6, z^6):");
    for index in 1..=6u32 {
        let bad = p_wp_lemma_check(index, 6, 6).unwrap();
        println!(
            "  index {}: {}",
            index,
            if bad.is_empty() {
                "residual empty".to_string()
            } else {
                format!("{} nonzero coefficients, first {}", bad.len(), bad[0])
            }
        );
    }
}
