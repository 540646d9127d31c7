//! Randomized self-check: the coherent-state engine against the brute-force
//! Fock oracle. Deterministic for a fixed seed.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{ModeIndex, NormalTerm, OperatorPoly};
use crate::coherent::{matrix_element, CoherentFrame, Occupancy};
use crate::error::Result;
use crate::fock::me_oracle;

/// Agreement threshold between engine and oracle.
pub const ORACLE_TOL: f64 = 1e-10;

/// Outcome of [`run_oracle_check`].
#[derive(Clone, Copy, Debug)]
pub struct OracleCheckReport {
    pub cases: usize,
    pub agree: usize,
    pub max_dev: f64,
}

impl OracleCheckReport {
    pub fn passed(&self) -> bool {
        self.agree == self.cases
    }
}

/// Random orthonormal frame with `s` species over `n` modes, built by
/// Gram-Schmidt on dense complex rows.
pub fn random_frame(rng: &mut ChaCha8Rng, s: usize, n: usize) -> CoherentFrame {
    assert!(s >= 1 && s <= n);
    loop {
        let mut rows: Vec<Vec<Complex64>> = Vec::with_capacity(s);
        let mut degenerate = false;
        for _ in 0..s {
            let mut row: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            for prev in &rows {
                let overlap: Complex64 = prev.iter().zip(&row).map(|(p, r)| p.conj() * r).sum();
                for (r, p) in row.iter_mut().zip(prev) {
                    *r -= overlap * p;
                }
            }
            let norm: f64 = row.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-6 {
                degenerate = true;
                break;
            }
            for z in &mut row {
                *z /= norm;
            }
            rows.push(row);
        }
        if degenerate {
            continue;
        }
        if let Ok(frame) = CoherentFrame::new(rows) {
            return frame;
        }
    }
}

/// Random occupancy of `total` quanta spread over `s` species.
pub fn random_occupancy(rng: &mut ChaCha8Rng, s: usize, total: u32) -> Occupancy {
    let mut counts = vec![0u32; s];
    for _ in 0..total {
        counts[rng.gen_range(0..s)] += 1;
    }
    Occupancy::new(counts)
}

fn random_modes(rng: &mut ChaCha8Rng, n: u32, len: usize) -> Vec<ModeIndex> {
    (0..len)
        .map(|_| ModeIndex::new(rng.gen_range(1..=n)).expect("nonzero index"))
        .collect()
}

/// Random normal term over `n` modes with up to `max_body` creators and
/// annihilators (at least one operator in total).
pub fn random_normal_term(rng: &mut ChaCha8Rng, n: u32, max_body: usize) -> NormalTerm {
    loop {
        let p = rng.gen_range(0..=max_body);
        let q = rng.gen_range(0..=max_body);
        if p + q == 0 {
            continue;
        }
        let coeff = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        return NormalTerm::new(coeff, random_modes(rng, n, p), random_modes(rng, n, q));
    }
}

/// Runs `cases` random engine-vs-oracle comparisons with `S ∈ {1,2,3}`,
/// `n = 3`, totals up to 6, and body counts up to 3.
pub fn run_oracle_check(seed: u64, cases: usize) -> Result<OracleCheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut agree = 0usize;
    let mut max_dev: f64 = 0.0;
    for case in 0..cases {
        let s = rng.gen_range(1..=3usize);
        let frame = random_frame(&mut rng, s, 3);
        let term = random_normal_term(&mut rng, 3, 3);
        let ket_total = rng.gen_range(0..=6u32);
        let ket = random_occupancy(&mut rng, s, ket_total);
        // mostly totals consistent with the term imbalance; occasionally a
        // deliberate mismatch, where both sides must give zero
        let delta = term.creators.len() as i64 - term.annihilators.len() as i64;
        let bra_total = if case % 8 == 7 {
            rng.gen_range(0..=6u32)
        } else {
            let t = ket_total as i64 + delta;
            if (0..=6).contains(&t) {
                t as u32
            } else {
                ket_total
            }
        };
        let bra = random_occupancy(&mut rng, s, bra_total);
        let engine = matrix_element(&frame, &bra, &ket, &term)?;
        let poly = OperatorPoly::from_normal_terms(3, vec![term])?;
        let oracle = me_oracle(&frame, &bra, &ket, &poly)?;
        let dev = (engine - oracle).norm();
        max_dev = max_dev.max(dev);
        if dev <= ORACLE_TOL {
            agree += 1;
        }
    }
    Ok(OracleCheckReport {
        cases,
        agree,
        max_dev,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_frames_are_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for s in 1..=3 {
            for _ in 0..5 {
                let f = random_frame(&mut rng, s, 4);
                assert_eq!(f.species(), s);
                assert_eq!(f.n_modes(), 4);
            }
        }
    }

    #[test]
    fn short_oracle_run_agrees() {
        let report = run_oracle_check(7, 25).unwrap();
        assert!(report.passed(), "max_dev = {:.3e}", report.max_dev);
    }

    #[test]
    fn oracle_run_is_seed_deterministic() {
        let a = run_oracle_check(3, 10).unwrap();
        let b = run_oracle_check(3, 10).unwrap();
        assert_eq!(a.max_dev, b.max_dev);
    }
}
