//! Exact occupation-number-basis machinery: basis enumeration, sparse
//! operator matrices, exact coherent-state expansions, and a dense Hermitian
//! eigensolver. Everything here follows the elementary boson rules
//! `b_i†|…n_i…⟩ = √(n_i+1)|…n_i+1…⟩`, which makes this module the
//! brute-force oracle for the coherent-state formulas.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{OperatorPoly, ProductTerm, MERGE_TOL};
use crate::coherent::{CoherentFrame, Occupancy};
use crate::error::{Error, Result};

/// Oracle paths refuse bases larger than this.
pub const ORACLE_SIZE_GUARD: u128 = 100_000;

pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc * (n - j) as u128 / (j + 1) as u128;
    }
    acc
}

/// Linear filter `Σ w_i n_i = target` selecting a block of the fixed-N space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    pub weights: Vec<i64>,
    pub target: i64,
}

impl LinearConstraint {
    fn satisfied(&self, state: &[u32]) -> bool {
        let value: i64 = state
            .iter()
            .zip(&self.weights)
            .map(|(&n, &w)| n as i64 * w)
            .sum();
        value == self.target
    }
}

/// Ordered basis of all n-mode occupation vectors with total N (optionally
/// restricted by a linear constraint). States are enumerated with `n_1`
/// descending first, giving a deterministic order.
#[derive(Debug)]
pub struct FockBasis {
    n: usize,
    total: u32,
    constraint: Option<LinearConstraint>,
    states: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl FockBasis {
    pub fn enumerate(n: usize, total: u32, constraint: Option<LinearConstraint>) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionMismatch {
                context: "basis needs at least one mode",
                expected: 1,
                got: 0,
            });
        }
        if let Some(c) = &constraint {
            if c.weights.len() != n {
                return Err(Error::DimensionMismatch {
                    context: "constraint weights vs mode count",
                    expected: n,
                    got: c.weights.len(),
                });
            }
        }
        let mut states = Vec::new();
        let mut prefix = Vec::with_capacity(n);
        enumerate_rec(n, total, &mut prefix, &mut states);
        if let Some(c) = &constraint {
            states.retain(|s| c.satisfied(s));
        }
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(FockBasis {
            n,
            total,
            constraint,
            states,
            index,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn constraint(&self) -> Option<&LinearConstraint> {
        self.constraint.as_ref()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[Vec<u32>] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &[u32] {
        &self.states[i]
    }

    pub fn position(&self, state: &[u32]) -> Option<usize> {
        self.index.get(state).copied()
    }

    /// `C(N+n−1, n−1)`, the unconstrained dimension.
    pub fn dim_unconstrained(n: usize, total: u32) -> u128 {
        binomial(total as u64 + n as u64 - 1, n as u64 - 1)
    }
}

fn enumerate_rec(modes: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if modes == 1 {
        prefix.push(left);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for k in (0..=left).rev() {
        prefix.push(k);
        enumerate_rec(modes - 1, left - k, prefix, out);
        prefix.pop();
    }
}

/// Complex amplitudes over a [`FockBasis`].
#[derive(Clone, Debug)]
pub struct StateVector {
    pub basis: Arc<FockBasis>,
    pub amp: Vec<Complex64>,
}

impl StateVector {
    pub fn zeros(basis: Arc<FockBasis>) -> Self {
        let amp = vec![Complex64::new(0.0, 0.0); basis.len()];
        StateVector { basis, amp }
    }

    pub fn norm(&self) -> f64 {
        self.amp.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩` with `self` as the bra.
    pub fn dot(&self, other: &StateVector) -> Result<Complex64> {
        if self.amp.len() != other.amp.len() {
            return Err(Error::DimensionMismatch {
                context: "state vector lengths",
                expected: self.amp.len(),
                got: other.amp.len(),
            });
        }
        Ok(self
            .amp
            .iter()
            .zip(&other.amp)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// Applies one product term to an occupation vector, operators acting
/// right to left. Returns the image state and the exact integer whose square
/// root is the amplitude factor, or `None` if a mode is overannihilated.
fn apply_term(term: &ProductTerm, state: &[u32]) -> Option<(Vec<u32>, u128)> {
    let mut out = state.to_vec();
    let mut factor: u128 = 1;
    for op in term.ops.iter().rev() {
        let i = op.mode.idx0();
        if op.dagger {
            factor *= (out[i] + 1) as u128;
            out[i] += 1;
        } else {
            if out[i] == 0 {
                return None;
            }
            factor *= out[i] as u128;
            out[i] -= 1;
        }
    }
    Some((out, factor))
}

/// Square sparse complex matrix stored in deterministic coordinate order.
/// Hermitian within floating tolerance whenever it is built from a Hermitian
/// polynomial.
#[derive(Clone, Debug)]
pub struct SparseHermitian {
    dim: usize,
    entries: BTreeMap<(usize, usize), Complex64>,
}

impl SparseHermitian {
    pub fn new(dim: usize) -> Self {
        SparseHermitian {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn add(&mut self, row: usize, col: usize, value: Complex64) {
        *self
            .entries
            .entry((row, col))
            .or_insert(Complex64::new(0.0, 0.0)) += value;
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries
            .get(&(row, col))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.entries.iter().map(|(&(r, c), &v)| (r, c, v))
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut dense = DMatrix::from_element(self.dim, self.dim, Complex64::new(0.0, 0.0));
        for (&(r, c), &v) in &self.entries {
            dense[(r, c)] += v;
        }
        dense
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let mut max_dev: f64 = 0.0;
        for (&(r, c), &v) in &self.entries {
            let dev = (v - self.get(c, r).conj()).norm();
            max_dev = max_dev.max(dev);
        }
        max_dev
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .values()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `self * v`.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for (&(r, c), &value) in &self.entries {
            out[r] += value * v[c];
        }
        out
    }

    /// Writes `row col re im` per entry, zero-based indices, one line each.
    pub fn dump_coordinate<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for (&(r, c), &v) in &self.entries {
            writeln!(w, "{} {} {} {}", r, c, v.re, v.im)?;
        }
        Ok(())
    }
}

/// Exact matrix of an operator polynomial on a basis. Fails if the operator
/// maps any basis state onto a state outside the basis with nonzero
/// amplitude.
pub fn matrix_of(poly: &OperatorPoly, basis: &FockBasis) -> Result<SparseHermitian> {
    if poly.n_modes() as usize != basis.n_modes() {
        return Err(Error::DimensionMismatch {
            context: "polynomial modes vs basis modes",
            expected: basis.n_modes(),
            got: poly.n_modes() as usize,
        });
    }
    let mut matrix = SparseHermitian::new(basis.len());
    for (col, state) in basis.states().iter().enumerate() {
        for term in poly.terms() {
            if term.coeff.norm() == 0.0 {
                continue;
            }
            let Some((image, factor)) = apply_term(term, state) else {
                continue;
            };
            let Some(row) = basis.position(&image) else {
                return Err(Error::LeavesBasis { state: image });
            };
            matrix.add(row, col, term.coeff * (factor as f64).sqrt());
        }
    }
    Ok(matrix)
}

/// Applies a polynomial to a state, landing the image in `target`. Fails if
/// any term sends amplitude outside the target basis.
pub fn apply_poly(
    poly: &OperatorPoly,
    state: &StateVector,
    target: Arc<FockBasis>,
) -> Result<StateVector> {
    if poly.n_modes() as usize != state.basis.n_modes() || target.n_modes() != state.basis.n_modes()
    {
        return Err(Error::DimensionMismatch {
            context: "mode counts in apply_poly",
            expected: state.basis.n_modes(),
            got: poly.n_modes() as usize,
        });
    }
    let mut out = StateVector::zeros(target.clone());
    for term in poly.terms() {
        if term.coeff.norm() == 0.0 {
            continue;
        }
        for (col, src) in state.basis.states().iter().enumerate() {
            let amp = state.amp[col];
            if amp.norm() == 0.0 {
                continue;
            }
            let Some((image, factor)) = apply_term(term, src) else {
                continue;
            };
            let Some(row) = target.position(&image) else {
                return Err(Error::LeavesBasis { state: image });
            };
            out.amp[row] += amp * term.coeff * (factor as f64).sqrt();
        }
    }
    Ok(out)
}

/// Exact expansion of the multi-species coherent state
/// `∏_s (B_s†)^{N_s}/√(N_s!) |0⟩` on an unconstrained basis.
pub fn coherent_vector(
    frame: &CoherentFrame,
    occ: &Occupancy,
    basis: Arc<FockBasis>,
) -> Result<StateVector> {
    if frame.n_modes() != basis.n_modes() {
        return Err(Error::DimensionMismatch {
            context: "frame modes vs basis modes",
            expected: basis.n_modes(),
            got: frame.n_modes(),
        });
    }
    if occ.species() != frame.species() {
        return Err(Error::DimensionMismatch {
            context: "occupancy species vs frame species",
            expected: frame.species(),
            got: occ.species(),
        });
    }
    if occ.total() != basis.total() {
        return Err(Error::TotalMismatch {
            expected: basis.total(),
            got: occ.total(),
        });
    }
    if basis.constraint().is_some() {
        return Err(Error::ConstrainedBasis);
    }
    let n = basis.n_modes();
    let mut expansion: BTreeMap<Vec<u32>, Complex64> = BTreeMap::new();
    expansion.insert(vec![0u32; n], Complex64::new(1.0, 0.0));
    for s in 0..occ.species() {
        let row = frame.row(s);
        for _ in 0..occ.get(s) {
            let mut next: BTreeMap<Vec<u32>, Complex64> = BTreeMap::new();
            for (state, amp) in &expansion {
                for (i, &coeff) in row.iter().enumerate() {
                    if coeff.norm() == 0.0 {
                        continue;
                    }
                    let mut state2 = state.clone();
                    state2[i] += 1;
                    let boost = (state[i] as f64 + 1.0).sqrt();
                    *next.entry(state2).or_insert(Complex64::new(0.0, 0.0)) += amp * coeff * boost;
                }
            }
            expansion = next;
        }
        let norm = (1..=occ.get(s) as u64)
            .map(|k| k as f64)
            .product::<f64>()
            .sqrt();
        for amp in expansion.values_mut() {
            *amp /= norm;
        }
    }
    let mut out = StateVector::zeros(basis.clone());
    for (state, amp) in expansion {
        let Some(i) = basis.position(&state) else {
            return Err(Error::LeavesBasis { state });
        };
        out.amp[i] = amp;
    }
    Ok(out)
}

/// Brute-force `⟨bra|p|ket⟩` on coherent states via exact Fock expansion.
/// Independent cross-check for the coherent-state engine: the only shared
/// machinery is normal ordering and the frame itself.
pub fn me_oracle(
    frame: &CoherentFrame,
    occ_bra: &Occupancy,
    occ_ket: &Occupancy,
    poly: &OperatorPoly,
) -> Result<Complex64> {
    let n = frame.n_modes();
    for occ in [occ_bra, occ_ket] {
        let dim = FockBasis::dim_unconstrained(n, occ.total());
        if dim > ORACLE_SIZE_GUARD {
            return Err(Error::GuardExceeded {
                what: "oracle basis size",
                limit: ORACLE_SIZE_GUARD as u64,
                got: dim.min(u64::MAX as u128) as u64,
            });
        }
    }
    let normal = poly.normal_order().simplify(MERGE_TOL);
    let basis_ket = Arc::new(FockBasis::enumerate(n, occ_ket.total(), None)?);
    let ket = coherent_vector(frame, occ_ket, basis_ket.clone())?;
    let balanced = normal
        .normal_terms()
        .expect("normal_order output is normal ordered")
        .iter()
        .all(|t| t.creators.len() == t.annihilators.len());
    if occ_bra.total() == occ_ket.total() && balanced {
        let bra = coherent_vector(frame, occ_bra, basis_ket.clone())?;
        let matrix = matrix_of(&normal, &basis_ket)?;
        let image = matrix.mul_vec(&ket.amp);
        return Ok(bra.amp.iter().zip(&image).map(|(b, v)| b.conj() * v).sum());
    }
    // graded path: only terms whose creator/annihilator imbalance matches the
    // occupancy totals can contribute
    let delta = occ_bra.total() as i64 - occ_ket.total() as i64;
    let terms: Vec<_> = normal
        .normal_terms()
        .expect("normal ordered")
        .into_iter()
        .filter(|t| t.creators.len() as i64 - t.annihilators.len() as i64 == delta)
        .collect();
    if terms.is_empty() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let graded = OperatorPoly::from_normal_terms(n as u32, terms)?;
    let basis_bra = Arc::new(FockBasis::enumerate(n, occ_bra.total(), None)?);
    let bra = coherent_vector(frame, occ_bra, basis_bra.clone())?;
    let image = apply_poly(&graded, &ket, basis_bra)?;
    bra.dot(&image)
}

/// Full spectrum of a Hermitian matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
}

/// Dense Hermitian eigendecomposition with a residual self-check
/// `‖Hv − λv‖ ≤ 1e-8·‖H‖_F` per pair.
pub fn eigensolve(h: &SparseHermitian) -> Result<Eigensystem> {
    let dev = h.hermiticity_deviation();
    if dev > 1e-10 {
        return Err(Error::NonHermitian {
            max_dev: dev,
            tol: 1e-10,
        });
    }
    let dim = h.dim();
    if dim == 0 {
        return Ok(Eigensystem {
            values: vec![],
            vectors: vec![],
        });
    }
    let dense = h.to_dense();
    // symmetrize away the (sub-tolerance) floating asymmetry
    let sym = (&dense + dense.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .expect("finite eigenvalues")
            .then(a.cmp(&b))
    });
    let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors: Vec<Vec<Complex64>> = order
        .iter()
        .map(|&k| eig.eigenvectors.column(k).iter().copied().collect())
        .collect();
    let bound = 1e-8 * h.frobenius_norm();
    for (lambda, vec) in values.iter().zip(&vectors) {
        let image = h.mul_vec(vec);
        let residual = image
            .iter()
            .zip(vec)
            .map(|(hv, v)| (hv - lambda * v).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if residual > bound {
            return Err(Error::EigenResidual { residual, bound });
        }
    }
    Ok(Eigensystem { values, vectors })
}
