//! The genus-one trace identities on the free-boson backend: every check
//! returns a residual series that must vanish identically through the
//! truncation order.
//!
//! ```bash
//! cargo run --release -p fusion-blocks --example torus_identities
//! ```

use fusion_blocks::fock::{Backend, FockBackend, Partition, Vector};
use fusion_blocks::torus::TraceEngine;

fn main() {
    let backend = FockBackend::new();
    let engine = TraceEngine::new(&backend);

    let omega = FockBackend::omega();
    let alpha = FockBackend::alpha_state(1);

    println!("trace of the vacuum (the character):");
    println!("  {}", engine.trace(&FockBackend::vacuum(), 6));
    println!("trace of omega (weighted partition counts):");
    println!("  {}", engine.trace(&omega, 6));

    println!("\nresiduals of the five identities on sample inputs (q^8):");
    let r = engine.check_a0(&omega, &alpha, 8).unwrap();
    println!("  a[0] trace, a = omega, v = alpha: {}", r);
    let r = engine.check_am(&alpha, &alpha, 2, 8).unwrap();
    println!("  a[-2] + Eisenstein tail, a = v = alpha: {}", r);
    let r = engine.check_aminus1(&alpha, &alpha, 8).unwrap();
    println!("  a[-1] vs zero-mode product, a = v = alpha: {}", r);
    let r = engine
        .block_annihilation(&omega, &alpha, 2, 8)
        .unwrap();
    println!("  annihilation condition at pole order 2: {}", r);
    let r = engine.check_sum_formula(&omega, &alpha, 4, 4).unwrap();
    println!(
        "  two-variable sum formula: {}",
        if r.is_zero() { "zero residual".to_string() } else { format!("{:?}", r.first_nonzero()) }
    );

    // a full sweep over low degrees
    let states: Vec<Partition> = (0..=4).flat_map(|n| backend.basis(n)).collect();
    let mut checked = 0;
    for a in &states {
        for v in &states {
            let a = Vector::basis(a.clone());
            let v = Vector::basis(v.clone());
            assert!(engine.check_a0(&a, &v, 6).unwrap().is_zero_reliable());
            assert!(engine.check_am(&a, &v, 2, 6).unwrap().is_zero_reliable());
            assert!(engine.check_aminus1(&a, &v, 6).unwrap().is_zero_reliable());
            checked += 1;
        }
    }
    println!("\nswept {} (a, v) pairs of degree <= 4: all residuals vanish", checked);
}
