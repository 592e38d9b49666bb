//! Exact Eisenstein q-expansions with the 2πi powers carried as the formal
//! marker u, plus the Bernoulli numbers behind their constant terms.
//!
//! ```bash
//! cargo run --release -p fusion-blocks --example eisenstein_series
//! ```

use num::complex::Complex64;

use fusion_blocks::elliptic::{bernoulli, divisor_sum, eisenstein};

fn main() {
    println!("Bernoulli numbers:");
    for n in 0..=12 {
        println!("  B_{:<2} = {}", n, bernoulli(n));
    }

    println!("\ndivisor sums sigma_3(n):");
    let sums: Vec<String> = (1..=10u64).map(|n| divisor_sum(n, 3).to_string()).collect();
    println!("  {}", sums.join(", "));

    for k in 1..=3u32 {
        println!("\nG_{} through q^6:", 2 * k);
        println!("  {}", eisenstein(k, 6));
    }

    // numeric sanity: evaluate at tau = 0.3 + 1.1i with u -> 2 pi i
    let tau = Complex64::new(0.3, 1.1);
    let u = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let q = (u * tau).exp();
    println!("\nnumeric values at tau = 0.3 + 1.1i:");
    for k in 1..=4u32 {
        let v = eisenstein(k, 8).eval_complex(q, u);
        println!("  G_{} = {:.12} + {:.12}i", 2 * k, v.re, v.im);
    }
}
