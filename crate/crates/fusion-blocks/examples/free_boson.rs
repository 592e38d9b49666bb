//! The rank-1 free-boson Fock backend: partition basis, exact mode actions,
//! square-bracket modes, zero modes, and the graded character.
//!
//! ```bash
//! cargo run --release -p fusion-blocks --example free_boson
//! ```

use fusion_blocks::fock::{
    character, mode, square_bracket, zero_mode_apply, Backend, FockBackend, Partition, Vector,
};
use fusion_blocks::scalar::ExactScalar;

fn main() {
    let backend = FockBackend::new();

    println!("graded dimensions (partition numbers):");
    let dims: Vec<String> = (0..=10).map(|n| backend.dim(n).to_string()).collect();
    println!("  {}", dims.join(", "));

    println!("\nbasis of degree 4:");
    for s in backend.basis(4) {
        println!("  {}", s);
    }

    let omega = FockBackend::omega();
    let alpha = FockBackend::alpha_state(1);
    let v = Vector::basis(Partition::new(vec![2, 1]));

    println!("\nVirasoro action (omega modes):");
    println!("  L(0) [2,1] = {}", mode(&backend, &omega, 1, &v));
    println!("  L(1) [2,1] = {}", mode(&backend, &omega, 2, &v));
    println!("  L(-1) [2,1] = {}", mode(&backend, &omega, 0, &v));

    println!("\nsquare-bracket modes (u marks 2 pi i):");
    let sq = square_bracket(&backend, &omega, 0, &v).unwrap();
    println!("  omega[0] [2,1] = {}", sq);
    let sq = square_bracket(&backend, &alpha, -2, &Vector::basis(Partition::vacuum())).unwrap();
    println!("  alpha[-2] vacuum = {}", sq);

    println!("\nzero modes are degree preserving:");
    println!(
        "  o(omega) [2,1] = {}  (degree times the state)",
        zero_mode_apply(&backend, &omega, &v)
    );
    println!(
        "  o(alpha) [2,1] = {}  (zero momentum)",
        zero_mode_apply(&backend, &alpha, &v)
    );

    println!("\ncharacter through q^8 (offset -1/24 from h - c/24):");
    println!("  {}", character(&backend, 8));

    // the mode algebra is exact: a Virasoro bracket at random inputs
    let l2 = |x: &Vector<Partition>| mode(&backend, &omega, 3, x);
    let lm2 = |x: &Vector<Partition>| mode(&backend, &omega, -1, x);
    let lhs = l2(&lm2(&v)).sub(&lm2(&l2(&v)));
    let rhs = mode(&backend, &omega, 1, &v)
        .scale(&ExactScalar::from_int(4))
        .add(&v.scale(&ExactScalar::from_ratio(1, 2)));
    println!("\n[L(2), L(-2)] [2,1] = {}", lhs);
    println!("4 L(0) [2,1] + c/2 [2,1] = {}", rhs);
    assert_eq!(lhs, rhs);
}
