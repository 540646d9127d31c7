//! Cross-module invariant suites: normal ordering preserves operator action,
//! hermiticity of the matrix-element engine, coherent-state normalization
//! and orthogonality, angular momentum conservation, and the instrumented
//! term-count identity.

use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cohstate::algebra::{ModeIndex, NormalTerm, OperatorPoly, MERGE_TOL};
use cohstate::check::{random_frame, random_normal_term, random_occupancy};
use cohstate::coherent::{
    collect_partitions, count_contributing, matrix_element_counting, matrix_element_poly, Occupancy,
};
use cohstate::fock::{apply_poly, coherent_vector, eigensolve, matrix_of, FockBasis, StateVector};
use cohstate::vibron::build_operators;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn m(i: u32) -> ModeIndex {
    ModeIndex::new(i).unwrap()
}

/// Random product of bare creators/annihilators with a fixed net boson
/// change, as an operator polynomial.
fn random_sequence_poly(rng: &mut ChaCha8Rng, n: u32, max_len: usize) -> OperatorPoly {
    let len = rng.gen_range(1..=max_len);
    let mut poly = OperatorPoly::scalar(n, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    for _ in 0..len {
        let mode = m(rng.gen_range(1..=n));
        let factor = if rng.gen_bool(0.5) {
            OperatorPoly::creator(n, mode).unwrap()
        } else {
            OperatorPoly::annihilator(n, mode).unwrap()
        };
        poly = poly.multiply(&factor).unwrap();
    }
    poly
}

fn net_change(poly: &OperatorPoly) -> i64 {
    let term = &poly.terms()[0];
    term.ops
        .iter()
        .map(|op| if op.dagger { 1i64 } else { -1 })
        .sum()
}

#[test]
fn normal_order_preserves_operator_action() {
    let n = 3u32;
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..40 {
        let raw = random_sequence_poly(&mut rng, n, 4);
        let delta = net_change(&raw);
        let ordered = raw.normal_order().simplify(MERGE_TOL);
        for total in 0..=5u32 {
            let image_total = total as i64 + delta;
            if image_total < 0 {
                continue;
            }
            let source = Arc::new(FockBasis::enumerate(n as usize, total, None).unwrap());
            let target =
                Arc::new(FockBasis::enumerate(n as usize, image_total as u32, None).unwrap());
            for k in 0..source.len() {
                let mut unit = StateVector::zeros(source.clone());
                unit.amp[k] = c(1.0, 0.0);
                let before = apply_poly(&raw, &unit, target.clone()).unwrap();
                let after = apply_poly(&ordered, &unit, target.clone()).unwrap();
                let diff = before
                    .amp
                    .iter()
                    .zip(&after.amp)
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0f64, f64::max);
                assert!(diff < 1e-12, "N={total} state {k}: diff {diff}");
            }
        }
    }
}

#[test]
fn adjoint_commutes_with_normal_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let p = random_sequence_poly(&mut rng, 3, 4);
        let a = p.adjoint().normal_order();
        let b = p.normal_order().adjoint();
        assert!(a.approx_eq(&b, 1e-12));
    }
}

#[test]
fn multiply_is_associative_up_to_normal_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let random_two_term = |rng: &mut ChaCha8Rng| -> OperatorPoly {
        let t1 = random_normal_term(rng, 3, 2);
        let t2 = random_normal_term(rng, 3, 2);
        OperatorPoly::from_normal_terms(3, vec![t1, t2]).unwrap()
    };
    for _ in 0..20 {
        let a = random_two_term(&mut rng);
        let b = random_two_term(&mut rng);
        let d = random_two_term(&mut rng);
        let left = a.multiply(&b).unwrap().multiply(&d).unwrap();
        let right = a.multiply(&b.multiply(&d).unwrap()).unwrap();
        assert!(left.approx_eq(&right, 1e-10));
    }
}

#[test]
fn matrix_element_poly_is_hermitian_under_adjoint() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..60 {
        let s = rng.gen_range(1..=3usize);
        let n = rng.gen_range(s.max(2)..=4usize);
        let frame = random_frame(&mut rng, s, n);
        let term = random_normal_term(&mut rng, n as u32, 2);
        let poly = OperatorPoly::from_normal_terms(n as u32, vec![term]).unwrap();
        let total_a = rng.gen_range(0..=5);
        let total_b = rng.gen_range(0..=5);
        let a = random_occupancy(&mut rng, s, total_a);
        let b = random_occupancy(&mut rng, s, total_b);
        let forward = matrix_element_poly(&frame, &a, &b, &poly).unwrap();
        let backward = matrix_element_poly(&frame, &b, &a, &poly.adjoint()).unwrap();
        assert!(
            (forward - backward.conj()).norm() < 1e-12,
            "{forward} vs conj({backward})"
        );
    }
}

#[test]
fn hermitian_expectations_are_real() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..30 {
        let s = rng.gen_range(1..=3usize);
        let n = rng.gen_range(s.max(2)..=4usize);
        let frame = random_frame(&mut rng, s, n);
        let term = random_normal_term(&mut rng, n as u32, 2);
        let half = OperatorPoly::from_normal_terms(n as u32, vec![term]).unwrap();
        let hermitian = half.add(&half.adjoint()).unwrap();
        let total = rng.gen_range(0..=5);
        let occ = random_occupancy(&mut rng, s, total);
        let value = cohstate::coherent::expectation(&frame, &occ, &hermitian).unwrap();
        assert!(value.im.abs() < 1e-10, "imaginary part {}", value.im);
    }
}

#[test]
fn coherent_vectors_are_normalized_and_orthogonal() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..25 {
        let s = rng.gen_range(1..=3usize);
        let n = rng.gen_range(s.max(2)..=3usize);
        let frame = random_frame(&mut rng, s, n);
        let total = rng.gen_range(1..=6u32);
        let occ_a = random_occupancy(&mut rng, s, total);
        let occ_b = random_occupancy(&mut rng, s, total);
        let basis = Arc::new(FockBasis::enumerate(n, total, None).unwrap());
        let va = coherent_vector(&frame, &occ_a, basis.clone()).unwrap();
        assert!((va.norm() - 1.0).abs() < 1e-12);
        if occ_a != occ_b {
            let vb = coherent_vector(&frame, &occ_b, basis.clone()).unwrap();
            assert!(va.dot(&vb).unwrap().norm() < 1e-12);
        }
    }
}

#[test]
fn matrix_of_adjoint_is_conjugate_transpose() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for _ in 0..20 {
        let term = random_normal_term(&mut rng, 3, 2);
        // keep the matrix inside one fixed-N basis
        if term.creators.len() != term.annihilators.len() {
            continue;
        }
        let poly = OperatorPoly::from_normal_terms(3, vec![term]).unwrap();
        let basis = FockBasis::enumerate(3, 4, None).unwrap();
        let a = matrix_of(&poly, &basis).unwrap();
        let b = matrix_of(&poly.adjoint(), &basis).unwrap();
        for (r, col, v) in a.iter() {
            assert!((b.get(col, r).conj() - v).norm() < 1e-12);
        }
        for (r, col, v) in b.iter() {
            assert!((a.get(col, r).conj() - v).norm() < 1e-12);
        }
    }
}

#[test]
fn squared_angular_momentum_is_diagonal_after_normal_order() {
    // l̂² normal-ordered still acts diagonally on occupation states
    // (n_σ, n₊, n₋) with eigenvalue (n₊ − n₋)²
    let ops = build_operators();
    let l_squared = ops
        .l
        .multiply(&ops.l)
        .unwrap()
        .normal_order()
        .simplify(MERGE_TOL);
    for total in 0..=4u32 {
        let basis = FockBasis::enumerate(3, total, None).unwrap();
        let mat = matrix_of(&l_squared, &basis).unwrap();
        for (k, state) in basis.states().iter().enumerate() {
            let want = (state[1] as f64 - state[2] as f64).powi(2);
            for col in 0..basis.len() {
                let expect = if col == k { want } else { 0.0 };
                assert!(
                    (mat.get(k, col) - c(expect, 0.0)).norm() < 1e-12,
                    "N={total} ({k},{col})"
                );
            }
        }
    }
}

#[test]
fn angular_momentum_commutes_with_casimir() {
    let ops = build_operators();
    for total in 1..=5u32 {
        let basis = FockBasis::enumerate(3, total, None).unwrap();
        let l = matrix_of(&ops.l, &basis).unwrap();
        let w2 = matrix_of(&ops.w2, &basis).unwrap();
        let dim = basis.len();
        for row in 0..dim {
            for col in 0..dim {
                let mut lw = c(0.0, 0.0);
                let mut wl = c(0.0, 0.0);
                for k in 0..dim {
                    lw += l.get(row, k) * w2.get(k, col);
                    wl += w2.get(row, k) * l.get(k, col);
                }
                assert!((lw - wl).norm() < 1e-10, "N={total} ({row},{col})");
            }
        }
    }
}

#[test]
fn full_spectrum_equals_union_of_l_blocks() {
    let total = 5u32;
    let ops = build_operators();
    let full_basis = FockBasis::enumerate(3, total, None).unwrap();
    let full = eigensolve(&matrix_of(&ops.hamiltonian, &full_basis).unwrap()).unwrap();
    let mut union: Vec<f64> = Vec::new();
    for l in -(total as i32)..=total as i32 {
        let block = cohstate::vibron::l_block(total, l).unwrap();
        let eig = eigensolve(&matrix_of(&ops.hamiltonian, &block).unwrap()).unwrap();
        union.extend(eig.values);
    }
    union.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(union.len(), full.values.len());
    for (a, b) in union.iter().zip(&full.values) {
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }
}

#[test]
fn instrumented_pair_count_matches_closed_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for s in 1..=3usize {
        for body in 1..=3u32 {
            let frame = random_frame(&mut rng, s, 3);
            let modes: Vec<ModeIndex> = (0..body).map(|_| m(rng.gen_range(1..=3u32))).collect();
            let term = NormalTerm::new(c(1.0, 0.0), modes.clone(), modes);
            // all N_s ≥ m keeps every falling factorial alive
            let occ = Occupancy::new(vec![body + 2; s]);
            let (_, visited) = matrix_element_counting(&frame, &occ, &occ, &term).unwrap();
            assert_eq!(
                visited as u128,
                count_contributing(s, body),
                "S={s} m={body}"
            );
        }
    }
}

#[test]
fn partition_group_count_is_squared_binomial() {
    // independent binomial, computed locally
    fn choose(n: u64, k: u64) -> u128 {
        if k > n {
            return 0;
        }
        let mut acc: u128 = 1;
        for j in 0..k.min(n - k) {
            acc = acc * (n - j) as u128 / (j + 1) as u128;
        }
        acc
    }
    for s in 1..=5usize {
        for body in 0..=4u32 {
            let groups = collect_partitions(s, body);
            let comps = choose(body as u64 + s as u64 - 1, s as u64 - 1);
            assert_eq!(groups.len() as u128, comps * comps, "S={s} m={body}");
            for (a, b) in &groups {
                assert_eq!(a.body(), body);
                assert_eq!(b.body(), body);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normal_order_is_syntactically_normal_and_conserving(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // product of random bilinears stays number conserving
        let n = 3u32;
        let mut poly = OperatorPoly::identity(n);
        for _ in 0..rng.gen_range(1..=3usize) {
            let i = m(rng.gen_range(1..=n));
            let j = m(rng.gen_range(1..=n));
            let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            poly = poly.multiply(&OperatorPoly::bilinear(n, i, j, z).unwrap()).unwrap();
        }
        let ordered = poly.normal_order().simplify(MERGE_TOL);
        prop_assert!(ordered.is_normal_ordered());
        for term in ordered.normal_terms().unwrap() {
            prop_assert_eq!(term.creators.len(), term.annihilators.len());
        }
    }

    #[test]
    fn engine_agrees_with_oracle(seed in any::<u64>()) {
        let report = cohstate::check::run_oracle_check(seed, 4).unwrap();
        prop_assert!(report.passed(), "max dev {:.3e}", report.max_dev);
    }
}
