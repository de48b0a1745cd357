use proptest::prelude::*;
use rand::{rngs::StdRng, SeedableRng};

use thermowork::quantum::{
    partial_trace, relative_entropy, tensor_product, von_neumann_entropy, CMatrix, DensityMatrix, HilbertDims,
    LogBase, Operator, Subsystem, C64,
};
use thermowork::random;

fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    a.shape() == b.shape() && a.iter().zip(b.iter()).all(|(x, y)| (x - y).norm() < tol)
}

/// Partial trace written out index by index.
fn trace_out_b(m: &CMatrix, d_a: usize, d_b: usize) -> CMatrix {
    CMatrix::from_fn(d_a, d_a, |i, j| (0..d_b).map(|k| m[(i * d_b + k, j * d_b + k)]).sum::<C64>())
}

fn trace_out_a(m: &CMatrix, d_a: usize, d_b: usize) -> CMatrix {
    CMatrix::from_fn(d_b, d_b, |i, j| (0..d_a).map(|k| m[(k * d_b + i, k * d_b + j)]).sum::<C64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_trace_of_product_recovers_factors(seed in any::<u64>(), d_a in 1usize..5, d_b in 1usize..5) {
        let mut rng = StdRng::seed_from_u64(seed);
        let a = random::density_matrix(&mut rng, d_a);
        let b = random::density_matrix(&mut rng, d_b);
        let dims = HilbertDims::new(d_a, d_b).unwrap();
        let ab = tensor_product(&a, &b);
        prop_assert!(close(partial_trace(&ab, dims, Subsystem::A).unwrap().matrix(), a.matrix(), 1e-12));
        prop_assert!(close(partial_trace(&ab, dims, Subsystem::B).unwrap().matrix(), b.matrix(), 1e-12));
    }

    #[test]
    fn partial_trace_matches_index_formula(seed in any::<u64>(), d_a in 1usize..5, d_b in 1usize..5) {
        let mut rng = StdRng::seed_from_u64(seed);
        let rho = random::density_matrix(&mut rng, d_a * d_b);
        let dims = HilbertDims::new(d_a, d_b).unwrap();
        let ra = partial_trace(&rho, dims, Subsystem::A).unwrap();
        let rb = partial_trace(&rho, dims, Subsystem::B).unwrap();
        prop_assert!(close(ra.matrix(), &trace_out_b(rho.matrix(), d_a, d_b), 1e-12));
        prop_assert!(close(rb.matrix(), &trace_out_a(rho.matrix(), d_a, d_b), 1e-12));
    }

    #[test]
    fn subadditivity_and_araki_lieb(seed in any::<u64>(), d_a in 2usize..4, d_b in 2usize..4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let rho = random::density_matrix(&mut rng, d_a * d_b);
        let dims = HilbertDims::new(d_a, d_b).unwrap();
        let s = |r: &DensityMatrix| von_neumann_entropy(r, LogBase::Natural).unwrap();
        let (sa, sb) = (
            s(&partial_trace(&rho, dims, Subsystem::A).unwrap()),
            s(&partial_trace(&rho, dims, Subsystem::B).unwrap()),
        );
        let sab = s(&rho);
        prop_assert!(sab <= sa + sb + 1e-10);
        prop_assert!(sab >= (sa - sb).abs() - 1e-10);
    }

    #[test]
    fn entropy_is_unitarily_invariant_and_bounded(seed in any::<u64>(), d in 1usize..6) {
        let mut rng = StdRng::seed_from_u64(seed);
        let rho = random::density_matrix(&mut rng, d);
        let u = random::unitary(&mut rng, d);
        let rotated = DensityMatrix::new(&u * rho.matrix() * u.adjoint()).unwrap();
        let s = von_neumann_entropy(&rho, LogBase::Natural).unwrap();
        prop_assert!((s - von_neumann_entropy(&rotated, LogBase::Natural).unwrap()).abs() < 1e-10);
        prop_assert!(s >= -1e-12 && s <= (d as f64).ln() + 1e-12);
        let bits = von_neumann_entropy(&rho, LogBase::Two).unwrap();
        prop_assert!((bits - s / std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn klein_inequality(seed in any::<u64>(), d in 1usize..6) {
        let mut rng = StdRng::seed_from_u64(seed);
        let rho = random::density_matrix(&mut rng, d);
        let sigma = random::density_matrix(&mut rng, d);
        prop_assert!(relative_entropy(&rho, &sigma).unwrap() >= 0.0);
        prop_assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-10);
    }

    #[test]
    fn pure_states_have_zero_entropy(seed in any::<u64>(), d in 1usize..6) {
        let mut rng = StdRng::seed_from_u64(seed);
        let psi = random::pure_state(&mut rng, d);
        prop_assert!(von_neumann_entropy(&psi, LogBase::Two).unwrap().abs() < 1e-10);
    }
}
