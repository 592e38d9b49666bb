//! The three residue sums built from the coefficients of
//! (1+z)^(wt-1) / ln(1+z): exactly (1, -u/2, G_(m+1)) for every weight and
//! pole order, with odd-index G meaning the zero series.
//!
//! ```bash
//! cargo run --release -p fusion-blocks --example residue_sums
//! ```

use fusion_blocks::elliptic::{eisenstein_any, residue_identities};
use fusion_blocks::qseries::QSeries;
use fusion_blocks::scalar::ExactScalar;

fn main() {
    let order = 6;
    println!("residue triples through q^{order}:");
    for wt_a in 1..=4u32 {
        for m in 1..=4u32 {
            let (s1, s2, s3) = residue_identities(wt_a, m, order).unwrap();
            let ok1 = s1.eq_reliable(&QSeries::one(order));
            let ok2 = s2.eq_reliable(&QSeries::constant(-&ExactScalar::pi_i(), order));
            let ok3 = s3.eq_reliable(&eisenstein_any(m + 1, order));
            println!(
                "  wt {} m {}: ({}, {}, {})",
                wt_a,
                m,
                if ok1 { "1" } else { "WRONG" },
                if ok2 { "-u/2" } else { "WRONG" },
                if ok3 {
                    if (m + 1) % 2 == 0 { format!("G_{}", m + 1) } else { "0".into() }
                } else {
                    "WRONG".into()
                },
            );
            assert!(ok1 && ok2 && ok3);
        }
    }

    println!("\nthe third sum at m = 3 (equals G_4):");
    let (_, _, s3) = residue_identities(2, 3, 6).unwrap();
    println!("  {}", s3);
}
