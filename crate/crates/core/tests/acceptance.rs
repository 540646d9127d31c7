//! Acceptance suite: one test per release criterion, each printing a single
//! pass/fail line (visible under `cargo test -- --nocapture`). Tolerances are
//! pinned here, not configurable.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cohstate::algebra::{ModeIndex, NormalTerm, OperatorPoly, MERGE_TOL};
use cohstate::check::{random_frame, random_normal_term, random_occupancy, run_oracle_check};
use cohstate::coherent::{
    collect_partitions, count_contributing, expectation, matrix_element, matrix_element_poly,
    two_species_closed, ClosedForm, Occupancy,
};
use cohstate::fock::{eigensolve, matrix_of, FockBasis};
use cohstate::vibron::{
    build_operators, compare_report, cs_energy, exact_energy, minimize_r, spectrum_exact,
};

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn m(i: u32) -> ModeIndex {
    ModeIndex::new(i).unwrap()
}

#[test]
fn criterion_1_oracle_equivalence() {
    let outcome = run_oracle_check(2024, 200).unwrap();
    report(
        "1 (oracle equivalence, 200 random instances)",
        outcome.passed() && outcome.max_dev < 1e-10,
        &format!(
            "{}/{} within 1e-10, max deviation {:.3e}",
            outcome.agree, outcome.cases, outcome.max_dev
        ),
    );
}

#[test]
fn criterion_2_term_count_table() {
    let table: [(usize, u32, u128); 16] = [
        (2, 1, 2),
        (2, 2, 6),
        (2, 3, 20),
        (2, 4, 70),
        (3, 1, 3),
        (3, 2, 15),
        (3, 3, 93),
        (3, 4, 639),
        (4, 1, 4),
        (4, 2, 28),
        (4, 3, 256),
        (4, 4, 2716),
        (5, 1, 5),
        (5, 2, 45),
        (5, 3, 545),
        (5, 4, 7885),
    ];
    let mut bad = Vec::new();
    for (s, body, want) in table {
        let got = count_contributing(s, body);
        if got != want {
            bad.push(format!("(S={s}, m={body}): {got} ≠ {want}"));
        }
    }
    report(
        "2 (contributing-term table, 16 values)",
        bad.is_empty(),
        &if bad.is_empty() {
            "all 16 values exact".to_string()
        } else {
            bad.join("; ")
        },
    );
}

#[test]
fn criterion_3_two_species_closed_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut max_dev: f64 = 0.0;
    let mut cases = 0;
    for shift in [-2i64, -1, 0, 1, 2] {
        for _ in 0..20 {
            let frame = random_frame(&mut rng, 2, 3);
            let n1 = rng.gen_range(3..=6u32);
            let n2 = rng.gen_range(3..=6u32);
            let ket = Occupancy::new(vec![n1, n2]);
            let bra = Occupancy::new(vec![(n1 as i64 + shift) as u32, (n2 as i64 - shift) as u32]);
            let term = NormalTerm::new(
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                vec![m(rng.gen_range(1..=3)), m(rng.gen_range(1..=3))],
                vec![m(rng.gen_range(1..=3)), m(rng.gen_range(1..=3))],
            );
            let closed =
                two_species_closed(ClosedForm::TwoBody, &bra, &ket, &frame, &term).unwrap();
            let engine = matrix_element(&frame, &bra, &ket, &term).unwrap();
            max_dev = max_dev.max((closed - engine).norm());
            cases += 1;
        }
    }
    report(
        "3 (two-species closed forms vs engine)",
        cases == 100 && max_dev < 1e-12,
        &format!("{cases} instances over all five shift cases, max deviation {max_dev:.3e}"),
    );
}

#[test]
fn criterion_4_partition_counts() {
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
    let mut ok = true;
    for s in 1..=5usize {
        for body in 0..=4u32 {
            let want = choose(body as u64 + s as u64 - 1, s as u64 - 1).pow(2);
            if collect_partitions(s, body).len() as u128 != want {
                ok = false;
            }
        }
    }
    report(
        "4 (partition-pair counts, S ≤ 5, m ≤ 4)",
        ok,
        "group count equals C(m+S−1, S−1)² throughout",
    );
}

#[test]
fn criterion_5_energy_comparison() {
    let n = 100u32;
    let levels = spectrum_exact(n).unwrap();
    let mut max_rel: f64 = 0.0;
    for level in &levels {
        let want = exact_energy(n, level.v, level.l).unwrap();
        let rel = (level.energy - want).abs() / want.abs().max(1.0);
        max_rel = max_rel.max(rel);
    }
    let mut identity_exact = true;
    for v in 0..=n / 2 {
        let gap = exact_energy(n, v, 0).unwrap() - cs_energy(n, v).unwrap();
        if gap != 2.0 * v as f64 {
            identity_exact = false;
        }
    }
    let top_gap = exact_energy(n, 50, 0).unwrap() - cs_energy(n, 50).unwrap();
    let rescaled_ok = top_gap <= 0.01 * (n as f64) * (n as f64);
    report(
        "5 (energy comparison at N = 100)",
        max_rel <= 1e-8 && identity_exact && rescaled_ok,
        &format!(
            "spectrum vs closed form max relative dev {:.3e}; E_exact − E_cs = 2v exactly; gap at v=50 is {} ≤ 0.01·N²",
            max_rel, top_gap
        ),
    );
}

#[test]
fn criterion_6_variational_minimum() {
    let mut worst: f64 = 0.0;
    for n in [2u32, 10, 100] {
        let r = minimize_r(n).unwrap();
        worst = worst.max((r - 1.0).abs());
    }
    report(
        "6 (variational minimum r* = 1 for N ∈ {2, 10, 100})",
        worst <= 1e-6,
        &format!("max |r* − 1| = {worst:.3e}"),
    );
}

#[test]
fn criterion_7_dipole_comparison() {
    let max_rel_dev = |n: u32| -> f64 {
        let rep = compare_report(n).unwrap();
        let vmax = (0.8 * (n / 2) as f64).floor() as u32;
        rep.dipole
            .iter()
            .filter(|row| row.v <= vmax)
            .map(|row| (row.exact_intra - row.coherent_intra).abs() / row.exact_intra)
            .fold(0.0f64, f64::max)
    };
    let rep100 = compare_report(100).unwrap();
    let mut inter_ok = true;
    for row in &rep100.dipole {
        if let Some(e) = row.exact_inter {
            if e >= 1e-10 {
                inter_ok = false;
            }
        }
        if let Some(ci) = row.coherent_inter {
            if ci >= 1e-10 {
                inter_ok = false;
            }
        }
    }
    let dev100 = max_rel_dev(100);
    let dev20 = max_rel_dev(20);
    report(
        "7 (dipole comparison at N = 100)",
        inter_ok && dev100 < dev20,
        &format!(
            "inter-representation strengths < 1e-10; intra max rel dev {:.4} at N=100 < {:.4} at N=20",
            dev100, dev20
        ),
    );
}

#[test]
fn criterion_8_quadrupole_comparison() {
    let n = 100u32;
    let rep = compare_report(n).unwrap();
    let mut between_ok = true;
    for row in &rep.quadrupole {
        if let (Some(e20), Some(e02), Some(ci)) =
            (row.exact_inter_20, row.exact_inter_02, row.coherent_inter)
        {
            if e20 > 1e-9 && e02 > 1e-9 {
                let lo = e20.min(e02);
                let hi = e20.max(e02);
                if ci < lo || ci > hi {
                    between_ok = false;
                }
            }
        }
    }
    let vmax = (0.8 * (n / 2) as f64).floor() as u32;
    let intra_dev = rep
        .quadrupole
        .iter()
        .filter(|row| row.v < vmax)
        .filter_map(|row| row.exact_intra.map(|e| (e - row.coherent_intra).abs() / e))
        .fold(0.0f64, f64::max);
    report(
        "8 (quadrupole comparison at N = 100)",
        between_ok && intra_dev <= 0.10,
        &format!(
            "coherent inter estimate between exact 2→0 and 0→2 branches; intra max rel dev {:.4} (expected ≲ 0.05, hard limit 0.10) for v < {vmax}",
            intra_dev
        ),
    );
}

#[test]
fn criterion_9_invariant_suites() {
    let mut failures: Vec<String> = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(314);

    // hermiticity of the engine under adjoint
    for _ in 0..20 {
        let s = rng.gen_range(1..=3usize);
        let n = rng.gen_range(s.max(2)..=4usize);
        let frame = random_frame(&mut rng, s, n);
        let term = random_normal_term(&mut rng, n as u32, 2);
        let poly = OperatorPoly::from_normal_terms(n as u32, vec![term]).unwrap();
        let ta = rng.gen_range(0..=5);
        let tb = rng.gen_range(0..=5);
        let a = random_occupancy(&mut rng, s, ta);
        let b = random_occupancy(&mut rng, s, tb);
        let forward = matrix_element_poly(&frame, &a, &b, &poly).unwrap();
        let backward = matrix_element_poly(&frame, &b, &a, &poly.adjoint()).unwrap();
        if (forward - backward.conj()).norm() >= 1e-12 {
            failures.push("hermiticity".into());
            break;
        }
    }

    // normal ordering preserves expectation values
    for _ in 0..15 {
        let frame = random_frame(&mut rng, 2, 3);
        let p = OperatorPoly::bilinear(3, m(1), m(2), c(0.4, -0.2)).unwrap();
        let q = OperatorPoly::bilinear(3, m(2), m(3), c(-0.9, 0.1)).unwrap();
        let raw = p.multiply(&q).unwrap();
        let ordered = raw.normal_order().simplify(MERGE_TOL);
        let t = rng.gen_range(0..=5);
        let occ = random_occupancy(&mut rng, 2, t);
        let a = expectation(&frame, &occ, &raw).unwrap();
        let b = expectation(&frame, &occ, &ordered).unwrap();
        if (a - b).norm() >= 1e-12 {
            failures.push("normal-order action".into());
            break;
        }
    }

    // coherent-state normalization and occupancy orthogonality
    for _ in 0..10 {
        let frame = random_frame(&mut rng, 2, 3);
        let total = rng.gen_range(1..=5u32);
        let occ_a = random_occupancy(&mut rng, 2, total);
        let occ_b = random_occupancy(&mut rng, 2, total);
        let basis = std::sync::Arc::new(FockBasis::enumerate(3, total, None).unwrap());
        let va = cohstate::fock::coherent_vector(&frame, &occ_a, basis.clone()).unwrap();
        if (va.norm() - 1.0).abs() >= 1e-12 {
            failures.push("coherent norm".into());
            break;
        }
        if occ_a != occ_b {
            let vb = cohstate::fock::coherent_vector(&frame, &occ_b, basis).unwrap();
            if va.dot(&vb).unwrap().norm() >= 1e-12 {
                failures.push("coherent orthogonality".into());
                break;
            }
        }
    }

    // [l̂, Ŵ²] = 0 on small bases
    let ops = build_operators();
    for total in 1..=4u32 {
        let basis = FockBasis::enumerate(3, total, None).unwrap();
        let l = matrix_of(&ops.l, &basis).unwrap();
        let w2 = matrix_of(&ops.w2, &basis).unwrap();
        let dim = basis.len();
        'outer: for row in 0..dim {
            for col in 0..dim {
                let mut commutator = c(0.0, 0.0);
                for k in 0..dim {
                    commutator += l.get(row, k) * w2.get(k, col) - w2.get(row, k) * l.get(k, col);
                }
                if commutator.norm() >= 1e-10 {
                    failures.push(format!("[l, W²] ≠ 0 at N={total}"));
                    break 'outer;
                }
            }
        }
    }

    // N = 2 vibron spectrum is {−6 ×5, 0 ×1}
    let basis = FockBasis::enumerate(3, 2, None).unwrap();
    let eig = eigensolve(&matrix_of(&ops.hamiltonian, &basis).unwrap()).unwrap();
    let low = eig
        .values
        .iter()
        .filter(|&&e| (e + 6.0).abs() < 1e-9)
        .count();
    let high = eig.values.iter().filter(|&&e| e.abs() < 1e-9).count();
    if !(low == 5 && high == 1 && eig.values.len() == 6) {
        failures.push(format!("N=2 spectrum {:?}", eig.values));
    }

    report(
        "9 (invariant suites)",
        failures.is_empty(),
        &if failures.is_empty() {
            "hermiticity, normal-order action, coherent normalization/orthogonality, [l̂,Ŵ²]=0, N=2 spectrum all green".to_string()
        } else {
            failures.join("; ")
        },
    );
}
