//! The two-dimensional vibron model: U(3) realized by three bosons
//! (σ, τ₊, τ₋) mapped to modes (1, 2, 3), in its SO(3) dynamical symmetry.
//!
//! The SO(3) subalgebra is spanned by the dipole operators D̂± and the
//! angular momentum l̂, with quadratic Casimir
//! `Ŵ² = (D̂₊D̂₋ + D̂₋D̂₊)/2 + l̂²`. The Hamiltonian implemented here is
//! `H = −Ŵ²`, whose eigenvalues are `E(N,v,l) = −N(N+1) + 4v[(N+1/2) − v]`
//! with `v = 0, …, ⌊N/2⌋` and `|l| ≤ N − 2v`. Excited coherent states built
//! from a condensate boson and one orthogonal excitation boson give
//! closed-form large-N estimates of these energies and of dipole/quadrupole
//! transition strengths; every closed form here is cross-checked against the
//! general coherent-state engine in the test suite.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::algebra::{ModeIndex, OperatorPoly, MERGE_TOL};
use crate::coherent::{expectation, CoherentFrame, Occupancy};
use crate::error::{Error, Result};
use crate::fock::{
    apply_poly, eigensolve, matrix_of, Eigensystem, FockBasis, LinearConstraint, StateVector,
};

/// Desk-scale guard for exact spectra and comparison reports.
pub const MAX_BOSONS: u32 = 200;

const SIGMA: ModeIndex = ModeIndex(1);
const TAU_PLUS: ModeIndex = ModeIndex(2);
const TAU_MINUS: ModeIndex = ModeIndex(3);

fn bilinear(i: ModeIndex, j: ModeIndex, c: f64) -> OperatorPoly {
    OperatorPoly::bilinear(3, i, j, Complex64::new(c, 0.0)).expect("fixed vibron modes")
}

/// The physical operators of the model as polynomials over (σ, τ₊, τ₋).
#[derive(Clone, Debug)]
pub struct VibronOperators {
    /// Angular momentum `l̂ = τ₊†τ₊ − τ₋†τ₋`.
    pub l: OperatorPoly,
    /// Dipole raising operator `D̂₊ = √2(τ₊†σ − σ†τ₋)`, carrying Δl = +1.
    pub d_plus: OperatorPoly,
    /// Dipole lowering operator `D̂₋ = −√2(τ₋†σ − σ†τ₊)`, carrying Δl = −1.
    pub d_minus: OperatorPoly,
    /// Quadrupole raising operator `Q̂₊ = √2 τ₊†τ₋`, carrying Δl = +2.
    pub q_plus: OperatorPoly,
    /// Quadrupole lowering operator `Q̂₋ = √2 τ₋†τ₊`, carrying Δl = −2.
    pub q_minus: OperatorPoly,
    /// SO(3) Casimir `Ŵ² = (D̂₊D̂₋ + D̂₋D̂₊)/2 + l̂²`, normal ordered.
    pub w2: OperatorPoly,
    /// Hamiltonian `H = −Ŵ²`.
    pub hamiltonian: OperatorPoly,
}

/// Builds the U(3) operator set with the fixed mode map σ→1, τ₊→2, τ₋→3.
pub fn build_operators() -> VibronOperators {
    let sqrt2 = 2.0f64.sqrt();
    let l = &bilinear(TAU_PLUS, TAU_PLUS, 1.0) - &bilinear(TAU_MINUS, TAU_MINUS, 1.0);
    let d_plus = &bilinear(TAU_PLUS, SIGMA, sqrt2) - &bilinear(SIGMA, TAU_MINUS, sqrt2);
    let d_minus = &bilinear(SIGMA, TAU_PLUS, sqrt2) - &bilinear(TAU_MINUS, SIGMA, sqrt2);
    let q_plus = bilinear(TAU_PLUS, TAU_MINUS, sqrt2);
    let q_minus = bilinear(TAU_MINUS, TAU_PLUS, sqrt2);
    let anticomm = &(&d_plus * &d_minus) + &(&d_minus * &d_plus);
    let w2 = (&(&anticomm * 0.5) + &(&l * &l))
        .normal_order()
        .simplify(MERGE_TOL);
    let hamiltonian = w2.scale(Complex64::new(-1.0, 0.0));
    VibronOperators {
        l,
        d_plus,
        d_minus,
        q_plus,
        q_minus,
        w2,
        hamiltonian,
    }
}

/// One exact level of the SO(3) limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VibronLevel {
    pub n: u32,
    pub v: u32,
    pub l: i32,
    pub energy: f64,
}

/// Excited coherent trial state `|N N_x; r⟩` with `N_x` excitation quanta
/// and stiffness parameter `r > 0`.
#[derive(Clone, Copy, Debug)]
pub struct VariationalState {
    pub n_total: u32,
    pub n_x: u32,
    pub r: f64,
}

impl VariationalState {
    pub fn new(n_total: u32, n_x: u32, r: f64) -> Result<Self> {
        if n_x > n_total {
            return Err(Error::QuantumNumberBounds {
                context: format!("N_x = {n_x} exceeds N = {n_total}"),
            });
        }
        if !r.is_finite() {
            return Err(Error::QuantumNumberBounds {
                context: "r must be finite".into(),
            });
        }
        Ok(VariationalState { n_total, n_x, r })
    }

    /// The two-species frame over (σ, τ₊, τ₋): a condensate row
    /// `(σ† + r τ_x†)/√(1+r²)` and the orthogonal excitation row
    /// `(−r σ† + τ_x†)/√(1+r²)`, with `τ_x† = (τ₋† − τ₊†)/√2`.
    pub fn frame(&self) -> CoherentFrame {
        variational_frame(self.r)
    }

    /// Occupancy (condensate, excitation) = (N − N_x, N_x).
    pub fn occupancy(&self) -> Occupancy {
        Occupancy::new(vec![self.n_total - self.n_x, self.n_x])
    }
}

/// The r-parametrized condensate/excitation frame in circular modes.
pub fn variational_frame(r: f64) -> CoherentFrame {
    let norm = (1.0 + r * r).sqrt();
    let x = 1.0 / 2.0f64.sqrt();
    let rows = vec![
        vec![
            Complex64::new(1.0 / norm, 0.0),
            Complex64::new(-r * x / norm, 0.0),
            Complex64::new(r * x / norm, 0.0),
        ],
        vec![
            Complex64::new(-r / norm, 0.0),
            Complex64::new(-x / norm, 0.0),
            Complex64::new(x / norm, 0.0),
        ],
    ];
    CoherentFrame::new(rows).expect("rows are orthonormal for every real r")
}

fn check_vl(n: u32, v: u32, l: i32) -> Result<()> {
    if v > n / 2 {
        return Err(Error::QuantumNumberBounds {
            context: format!("v = {v} exceeds ⌊N/2⌋ = {}", n / 2),
        });
    }
    let omega = (n - 2 * v) as i32;
    if l.abs() > omega {
        return Err(Error::QuantumNumberBounds {
            context: format!("|l| = {} exceeds N − 2v = {omega}", l.abs()),
        });
    }
    Ok(())
}

/// Closed-form level energy `E(N,v,l) = −N(N+1) + 4v[(N+1/2) − v]`;
/// independent of `l`.
pub fn exact_energy(n: u32, v: u32, l: i32) -> Result<f64> {
    check_vl(n, v, l)?;
    let nf = n as f64;
    let vf = v as f64;
    Ok(-nf * (nf + 1.0) + 4.0 * vf * (nf + 0.5 - vf))
}

/// The l-block of the N-boson space, `n₊ − n₋ = l`.
pub fn l_block(n: u32, l: i32) -> Result<FockBasis> {
    FockBasis::enumerate(
        3,
        n,
        Some(LinearConstraint {
            weights: vec![0, 1, -1],
            target: l as i64,
        }),
    )
}

fn diagonalize_block(
    hamiltonian: &OperatorPoly,
    n: u32,
    l: i32,
) -> Result<(Arc<FockBasis>, Eigensystem)> {
    let basis = Arc::new(l_block(n, l)?);
    let matrix = matrix_of(hamiltonian, &basis)?;
    let eig = eigensolve(&matrix)?;
    Ok((basis, eig))
}

/// Numerically exact spectrum: diagonalizes `H = −Ŵ²` in every l-block and
/// labels states `v = 0, 1, …` by ascending energy within the block.
pub fn spectrum_exact(n: u32) -> Result<Vec<VibronLevel>> {
    if n > MAX_BOSONS {
        return Err(Error::GuardExceeded {
            what: "boson number",
            limit: MAX_BOSONS as u64,
            got: n as u64,
        });
    }
    let ops = build_operators();
    let ls: Vec<i32> = (-(n as i32)..=n as i32).collect();
    let blocks: Result<Vec<(i32, Vec<f64>)>> = ls
        .par_iter()
        .map(|&l| {
            let (_, eig) = diagonalize_block(&ops.hamiltonian, n, l)?;
            Ok((l, eig.values))
        })
        .collect();
    let mut levels = Vec::new();
    for (l, values) in blocks? {
        for (v, energy) in values.into_iter().enumerate() {
            levels.push(VibronLevel {
                n,
                v: v as u32,
                l,
                energy,
            });
        }
    }
    Ok(levels)
}

/// Coherent-state expectation of the Casimir,
/// `⟨NN_x;r|Ŵ²|NN_x;r⟩ = 2[N + N_x(N−N_x)] + 4r²/(1+r²)²·[N(N−1) − 6N_x(N−N_x)]`.
pub fn cs_w2(n: u32, n_x: u32, r: f64) -> Result<f64> {
    VariationalState::new(n, n_x, r)?;
    let nf = n as f64;
    let xf = n_x as f64;
    let pair = xf * (nf - xf);
    let u = 1.0 + r * r;
    Ok(2.0 * (nf + pair) + 4.0 * r * r / (u * u) * (nf * (nf - 1.0) - 6.0 * pair))
}

/// Excited-coherent-state energy at the variational minimum `r = 1`:
/// `E(N,N_x) = −N(N+1) + 4N_x[N − N_x]`.
pub fn cs_energy(n: u32, n_x: u32) -> Result<f64> {
    VariationalState::new(n, n_x, 1.0)?;
    let nf = n as f64;
    let xf = n_x as f64;
    Ok(-nf * (nf + 1.0) + 4.0 * xf * (nf - xf))
}

/// Which pair of intrinsic excitations a coherent-state transition estimate
/// connects: within one excitation, or down one quantum (`N_x → N_x − 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntrinsicDelta {
    Same,
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransitionKind {
    Dipole,
    Quadrupole,
}

/// Closed-form coherent-state transition matrix elements; the intensity
/// estimate is the square of the returned value.
pub fn cs_transition(
    n: u32,
    n_x: u32,
    delta: IntrinsicDelta,
    kind: TransitionKind,
    r: f64,
) -> Result<f64> {
    VariationalState::new(n, n_x, r)?;
    if delta == IntrinsicDelta::Lower && n_x == 0 {
        return Err(Error::QuantumNumberBounds {
            context: "N_x → N_x − 1 requires N_x ≥ 1".into(),
        });
    }
    let nf = n as f64;
    let xf = n_x as f64;
    let u = 1.0 + r * r;
    Ok(match (delta, kind) {
        (IntrinsicDelta::Same, TransitionKind::Dipole) => -2.0 * (nf - 2.0 * xf) * r / u,
        (IntrinsicDelta::Same, TransitionKind::Quadrupole) => {
            -(xf + (nf - xf) * r * r) / (2.0f64.sqrt() * u)
        }
        (IntrinsicDelta::Lower, TransitionKind::Dipole) => {
            -((nf - xf + 1.0) * xf).sqrt() * (1.0 - r * r) / u
        }
        (IntrinsicDelta::Lower, TransitionKind::Quadrupole) => {
            -((nf - xf + 1.0) * xf).sqrt() * r / (2.0f64.sqrt() * u)
        }
    })
}

/// A transition operator together with the angular momentum it carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransitionOp {
    DPlus,
    DMinus,
    QPlus,
    QMinus,
}

impl TransitionOp {
    pub fn delta_l(self) -> i32 {
        match self {
            TransitionOp::DPlus => 1,
            TransitionOp::DMinus => -1,
            TransitionOp::QPlus => 2,
            TransitionOp::QMinus => -2,
        }
    }

    fn poly(self, ops: &VibronOperators) -> &OperatorPoly {
        match self {
            TransitionOp::DPlus => &ops.d_plus,
            TransitionOp::DMinus => &ops.d_minus,
            TransitionOp::QPlus => &ops.q_plus,
            TransitionOp::QMinus => &ops.q_minus,
        }
    }
}

fn eigenstate(
    basis: &Arc<FockBasis>,
    eig: &Eigensystem,
    n: u32,
    v: u32,
    l: i32,
) -> Result<StateVector> {
    if (v as usize) >= eig.values.len() {
        return Err(Error::StateNotFound { n, v, l });
    }
    Ok(StateVector {
        basis: basis.clone(),
        amp: eig.vectors[v as usize].clone(),
    })
}

/// Exact transition intensity `|⟨N v_f l_f| T̂ |N v_i l_i⟩|²` between
/// diagonalized eigenstates. Angular momentum selection makes the result
/// zero whenever `l_f − l_i` differs from the momentum carried by `T̂`.
pub fn exact_transition(
    n: u32,
    v_i: u32,
    l_i: i32,
    v_f: u32,
    l_f: i32,
    op: TransitionOp,
) -> Result<f64> {
    if n > MAX_BOSONS {
        return Err(Error::GuardExceeded {
            what: "boson number",
            limit: MAX_BOSONS as u64,
            got: n as u64,
        });
    }
    check_vl(n, v_i, l_i)?;
    check_vl(n, v_f, l_f)?;
    if l_f - l_i != op.delta_l() {
        return Ok(0.0);
    }
    let ops = build_operators();
    let (basis_i, eig_i) = diagonalize_block(&ops.hamiltonian, n, l_i)?;
    let (basis_f, eig_f) = diagonalize_block(&ops.hamiltonian, n, l_f)?;
    let initial = eigenstate(&basis_i, &eig_i, n, v_i, l_i)?;
    let target = eigenstate(&basis_f, &eig_f, n, v_f, l_f)?;
    let image = apply_poly(op.poly(&ops), &initial, basis_f)?;
    let me = target.dot(&image)?;
    Ok(me.norm_sqr())
}

/// Variational minimum of `⟨N,0;r|H|N,0;r⟩` over `r ∈ (0, 10]`, located by a
/// coarse scan plus golden-section refinement to 1e-8 in `r`. The energy is
/// evaluated through the general coherent-state engine, not the closed form.
pub fn minimize_r(n: u32) -> Result<f64> {
    if n < 2 {
        return Err(Error::QuantumNumberBounds {
            context: format!("minimize_r needs N ≥ 2, got {n}"),
        });
    }
    let ops = build_operators();
    let occ = Occupancy::new(vec![n, 0]);
    let energy = |r: f64| -> Result<f64> {
        Ok(expectation(&variational_frame(r), &occ, &ops.hamiltonian)?.re)
    };
    let grid: Vec<f64> = (1..=400).map(|k| k as f64 * 0.025).collect();
    let values: Vec<f64> = grid.iter().map(|&r| energy(r)).collect::<Result<_>>()?;
    let mut minima = 0usize;
    for i in 1..values.len() - 1 {
        if values[i] < values[i - 1] && values[i] < values[i + 1] {
            minima += 1;
        }
    }
    if minima > 1 {
        return Err(Error::NonUnimodal);
    }
    let k = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite energies"))
        .map(|(i, _)| i)
        .expect("nonempty grid");
    let mut lo = if k == 0 { grid[0] * 0.1 } else { grid[k - 1] };
    let mut hi = if k + 1 == grid.len() {
        grid[k]
    } else {
        grid[k + 1]
    };
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - phi * (hi - lo);
    let mut b = lo + phi * (hi - lo);
    let mut fa = energy(a)?;
    let mut fb = energy(b)?;
    while hi - lo > 1e-8 {
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - phi * (hi - lo);
            fa = energy(a)?;
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + phi * (hi - lo);
            fb = energy(b)?;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Per-v energy comparison row of the report.
#[derive(Clone, Copy, Debug)]
pub struct EnergyRow {
    pub v: u32,
    pub exact: f64,
    pub coherent: f64,
}

/// Per-v dipole comparison row: intra-representation (l=1)→(l=0) intensity
/// and the forbidden Δv = −1 inter-representation intensity.
#[derive(Clone, Copy, Debug)]
pub struct DipoleRow {
    pub v: u32,
    pub exact_intra: f64,
    pub coherent_intra: f64,
    pub exact_inter: Option<f64>,
    pub coherent_inter: Option<f64>,
}

/// Per-v quadrupole comparison row: intra-representation (l=2)→(l=0)
/// intensity plus the two Δv = −1 transitions (2→0 and 0→2) bracketing the
/// single coherent estimate.
#[derive(Clone, Copy, Debug)]
pub struct QuadrupoleRow {
    pub v: u32,
    pub exact_intra: Option<f64>,
    pub coherent_intra: f64,
    pub exact_inter_20: Option<f64>,
    pub exact_inter_02: Option<f64>,
    pub coherent_inter: Option<f64>,
}

/// The three comparison datasets for one boson number.
#[derive(Clone, Debug)]
pub struct CompareReport {
    pub n: u32,
    pub energies: Vec<EnergyRow>,
    pub dipole: Vec<DipoleRow>,
    pub quadrupole: Vec<QuadrupoleRow>,
}

/// Builds the full exact-vs-coherent comparison for boson number `n`:
/// energies per representation, intra/inter dipole intensities, and
/// intra/inter quadrupole intensities.
pub fn compare_report(n: u32) -> Result<CompareReport> {
    if n > MAX_BOSONS {
        return Err(Error::GuardExceeded {
            what: "boson number",
            limit: MAX_BOSONS as u64,
            got: n as u64,
        });
    }
    if n < 2 {
        return Err(Error::QuantumNumberBounds {
            context: format!("compare_report needs N ≥ 2, got {n}"),
        });
    }
    let ops = build_operators();
    let (basis_0, eig_0) = diagonalize_block(&ops.hamiltonian, n, 0)?;
    let (basis_1, eig_1) = diagonalize_block(&ops.hamiltonian, n, 1)?;
    let (basis_2, eig_2) = diagonalize_block(&ops.hamiltonian, n, 2)?;
    let blocks = [(&basis_0, &eig_0), (&basis_1, &eig_1), (&basis_2, &eig_2)];
    let intensity = |op: TransitionOp, vi: u32, li: usize, vf: u32, lf: usize| -> Result<f64> {
        let (bi, ei) = blocks[li];
        let (bf, ef) = blocks[lf];
        let initial = eigenstate(bi, ei, n, vi, li as i32)?;
        let target = eigenstate(bf, ef, n, vf, lf as i32)?;
        let image = apply_poly(op.poly(&ops), &initial, bf.clone())?;
        Ok(target.dot(&image)?.norm_sqr())
    };

    let mut energies = Vec::new();
    for v in 0..=n / 2 {
        energies.push(EnergyRow {
            v,
            exact: exact_energy(n, v, 0)?,
            coherent: cs_energy(n, v)?,
        });
    }

    let mut dipole = Vec::new();
    for v in 0..=(n - 1) / 2 {
        let exact_intra = intensity(TransitionOp::DMinus, v, 1, v, 0)?;
        let coherent_intra =
            cs_transition(n, v, IntrinsicDelta::Same, TransitionKind::Dipole, 1.0)?.powi(2);
        let (exact_inter, coherent_inter) = if v >= 1 {
            (
                Some(intensity(TransitionOp::DMinus, v, 1, v - 1, 0)?),
                Some(
                    cs_transition(n, v, IntrinsicDelta::Lower, TransitionKind::Dipole, 1.0)?
                        .powi(2),
                ),
            )
        } else {
            (None, None)
        };
        dipole.push(DipoleRow {
            v,
            exact_intra,
            coherent_intra,
            exact_inter,
            coherent_inter,
        });
    }

    let mut quadrupole = Vec::new();
    for v in 0..=n / 2 {
        let omega = n - 2 * v;
        let exact_intra = if omega >= 2 {
            Some(intensity(TransitionOp::QMinus, v, 2, v, 0)?)
        } else {
            None
        };
        let coherent_intra =
            cs_transition(n, v, IntrinsicDelta::Same, TransitionKind::Quadrupole, 1.0)?.powi(2);
        let exact_inter_20 = if v >= 1 && omega >= 2 {
            Some(intensity(TransitionOp::QMinus, v, 2, v - 1, 0)?)
        } else {
            None
        };
        let exact_inter_02 = if v >= 1 {
            Some(intensity(TransitionOp::QPlus, v, 0, v - 1, 2)?)
        } else {
            None
        };
        let coherent_inter = if v >= 1 {
            Some(
                cs_transition(n, v, IntrinsicDelta::Lower, TransitionKind::Quadrupole, 1.0)?
                    .powi(2),
            )
        } else {
            None
        };
        quadrupole.push(QuadrupoleRow {
            v,
            exact_intra,
            coherent_intra,
            exact_inter_20,
            exact_inter_02,
            coherent_inter,
        });
    }

    Ok(CompareReport {
        n,
        energies,
        dipole,
        quadrupole,
    })
}
