mod common;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use galispin_core::linalg::CMatrix;
use galispin_core::reduction::{reduction_check, wave_operator};
use galispin_core::symmetric::{
    split_index, symmetric_dim, symmetrizer_dense, SymmetricBasis,
};

#[test]
fn symmetric_dimension_formula() {
    // Multisets of size two_s from four labels.
    assert_eq!(symmetric_dim(1), 4);
    assert_eq!(symmetric_dim(2), 10);
    assert_eq!(symmetric_dim(3), 20);
    assert_eq!(symmetric_dim(4), 35);
    assert_eq!(symmetric_dim(5), 56);
    for two_s in 1..=8u32 {
        let n = two_s as usize;
        assert_eq!(symmetric_dim(two_s), (n + 1) * (n + 2) * (n + 3) / 6);
    }
}

#[test]
fn basis_vectors_are_orthonormal_and_symmetric() {
    for two_s in 1..=5u32 {
        let basis = SymmetricBasis::build(two_s).expect("supported spin");
        assert_eq!(basis.dim(), symmetric_dim(two_s));
        assert_eq!(basis.product_dim(), 4usize.pow(two_s));
        let slots = two_s as usize;
        for i in 0..basis.dim() {
            let mut unit = vec![0.0; basis.dim()];
            unit[i] = 1.0;
            let dense = basis.expand(&unit);
            // Unit norm.
            let n2: f64 = dense.iter().map(|v| v * v).sum();
            assert!((n2 - 1.0).abs() < 1e-13, "two_s {two_s} vector {i}");
            // Invariance under an arbitrary transposition of slots.
            if slots >= 2 {
                for idx in 0..dense.len() {
                    let labels = split_index(idx, slots);
                    let mut swapped = labels.clone();
                    swapped.swap(0, slots - 1);
                    let mut jdx = 0usize;
                    for &l in &swapped {
                        jdx = jdx * 4 + l;
                    }
                    assert_eq!(dense[idx], dense[jdx]);
                }
            }
            // Round trip through the projection.
            let back = basis.project(&dense);
            for (j, &c) in back.iter().enumerate() {
                let want = if j == i { 1.0 } else { 0.0 };
                assert!((c - want).abs() < 1e-13);
            }
        }
    }
}

#[test]
fn sector_counts_split_as_expected() {
    for two_s in 1..=6u32 {
        let basis = SymmetricBasis::build(two_s).expect("supported spin");
        let (none, one, rest) = basis.sector_counts();
        assert_eq!(none, two_s as usize + 1, "upper-only sector");
        assert_eq!(one, 2 * two_s as usize, "single-auxiliary sector");
        assert_eq!(none + one + rest, symmetric_dim(two_s));
    }
}

#[test]
fn symmetrizer_projects_onto_the_symmetric_subspace() {
    for two_s in 1..=4u32 {
        let s = symmetrizer_dense(two_s).expect("supported spin");
        let dim = 4usize.pow(two_s);
        // Idempotent.
        let mut s2 = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let mut acc = 0.0;
                for k in 0..dim {
                    acc += s[i * dim + k] * s[k * dim + j];
                }
                s2[i * dim + j] = acc;
            }
        }
        let worst = s2
            .iter()
            .zip(&s)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max);
        assert!(worst < 1e-12, "two_s {two_s}: S^2 != S by {worst}");
        // Rank equals the symmetric dimension: trace of a projector.
        let trace: f64 = (0..dim).map(|i| s[i * dim + i]).sum();
        assert!(
            (trace - symmetric_dim(two_s) as f64).abs() < 1e-10,
            "two_s {two_s} trace {trace}"
        );
        // Exact rank through row reduction of the complex copy.
        let sc = CMatrix::from_fn(dim, dim, |i, j| Complex64::new(s[i * dim + j], 0.0));
        assert_eq!(sc.rank(), symmetric_dim(two_s), "two_s {two_s}");
        // Symmetric vectors are fixed points.
        let basis = SymmetricBasis::build(two_s).expect("supported spin");
        let mut unit = vec![0.0; basis.dim()];
        unit[basis.dim() / 2] = 1.0;
        let dense = basis.expand(&unit);
        for i in 0..dim {
            let si: f64 = (0..dim).map(|j| s[i * dim + j] * dense[j]).sum();
            assert!((si - dense[i]).abs() < 1e-12);
        }
    }
}

#[test]
fn wave_operator_determinant_tracks_dispersion() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..50 {
        let p = [
            rng.gen_range(-1.5..1.5),
            rng.gen_range(-1.5..1.5),
            rng.gen_range(-1.5..1.5),
        ];
        let m = rng.gen_range(0.5..2.0);
        let u0 = rng.gen_range(-1.0..1.0);
        let e = rng.gen_range(-2.0..2.0);
        let g = wave_operator(e, p, u0, m);
        let p2 = p.iter().map(|c| c * c).sum::<f64>();
        let on_shell = e - u0 - p2 / (2.0 * m);
        let det_closed = 4.0 * m * m * on_shell * on_shell;
        let det = g.det();
        assert!(det.im.abs() < 1e-10);
        assert!(
            (det.re - det_closed).abs() < 1e-10 * det_closed.abs().max(1.0),
            "det {} vs {det_closed}",
            det.re
        );
    }
    // Exactly on shell the operator is singular with a rank-2 kernel slice.
    let p = [0.3, -0.4, 0.5];
    let (m, u0) = (1.0, 0.2);
    let p2 = p.iter().map(|c| c * c).sum::<f64>();
    let g = wave_operator(u0 + p2 / (2.0 * m), p, u0, m);
    assert!(g.det().norm() < 1e-14);
    assert_eq!(g.rank(), 2);
}

#[test]
fn lower_components_follow_from_upper() {
    // The lower rows of the on-shell wave operator fix chi = (sigma.p/2m) phi
    // for any upper pair phi.
    let p = [0.7, 0.1, -0.2];
    let (m, u0) = (1.3, -0.4);
    let p2 = p.iter().map(|c| c * c).sum::<f64>();
    let e = u0 + p2 / (2.0 * m);
    let g = wave_operator(e, p, u0, m);
    let sp = galispin_core::spinor::sigma_dot(p);
    let phi = [Complex64::new(0.3, 0.1), Complex64::new(-0.5, 0.9)];
    let mut chi = [Complex64::new(0.0, 0.0); 2];
    for r in 0..2 {
        for c in 0..2 {
            chi[r] += sp[(r, c)] * phi[c] / Complex64::new(2.0 * m, 0.0);
        }
    }
    let psi = vec![phi[0], phi[1], chi[0], chi[1]];
    let out = g.mul_vec(&psi);
    let worst = out.iter().map(|v| v.norm()).fold(0.0_f64, f64::max);
    assert!(worst < 1e-14, "on-shell solution violates the operator by {worst}");
}

#[test]
fn reduction_counting_every_low_spin() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for two_s in 1..=5u32 {
        let report = reduction_check(two_s, &mut rng).expect("supported spin");
        assert_eq!(report.symmetric_dim, symmetric_dim(two_s));
        assert_eq!(
            report.independent_upper,
            two_s as usize + 1,
            "two_s {two_s}: propagating multiplet"
        );
        assert_eq!(
            report.constrained_lower,
            2 * two_s as usize,
            "two_s {two_s}: constrained sector"
        );
        assert!(report.inert_matches_off_shell, "two_s {two_s}");
        assert!(
            report.dispersion_residual <= 1e-12,
            "two_s {two_s}: dispersion residual {}",
            report.dispersion_residual
        );
    }
}

#[test]
fn reduction_is_stable_across_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for trial in 0..5 {
        let report = reduction_check(2, &mut rng).expect("supported spin");
        assert_eq!(report.independent_upper, 3, "trial {trial}");
        assert_eq!(report.constrained_lower, 4, "trial {trial}");
    }
}
