//! Matrix elements of normal-ordered m-body terms between multi-species
//! coherent states.
//!
//! A coherent frame defines `S` orthonormal coherent boson species
//! `B_s† = Σ_i α_{s,i} b_i†`; the normalized coherent state with occupancies
//! `(N_1, …, N_S)` is `∏_s (B_s†)^{N_s}/√(N_s!) |0⟩`. The central operation,
//! [`matrix_element`], evaluates
//!
//! ```text
//! ⟨N_1'…N_S'| ∏_i b†_{r_i'} ∏_i b_{r_i} |N_1…N_S⟩
//!   = Σ_{t',t} [∏_s δ_{N_s'−ν_s', N_s−ν_s} √(N_s'^(ν_s') N_s^(ν_s))]
//!     ∏_i α*_{t_i',r_i'} α_{t_i,r_i}
//! ```
//!
//! where `ν_s` counts how many of the species indices `t_i` equal `s` and the
//! underlined powers are falling factorials. Two evaluation strategies are
//! provided: direct enumeration of the `(t', t)` index tuples, and a
//! partition-collected mode that groups tuples sharing the same multiplicity
//! vectors, which keeps the cost polynomial in the body count.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{ModeIndex, NormalTerm, OperatorPoly, MERGE_TOL};
use crate::error::{Error, Result};

/// Orthonormality tolerance for frames supplied as user input.
pub const FRAME_TOL: f64 = 1e-10;

/// Above this many `(t', t)` tuples the engine switches from direct
/// enumeration to the partition-collected evaluation.
const DIRECT_TUPLE_LIMIT: u128 = 1_000_000;

/// `S × n` complex coefficient matrix defining orthonormal coherent boson
/// species `B_s† = Σ_i α_{s,i} b_i†`.
#[derive(Clone, Debug)]
pub struct CoherentFrame {
    n: usize,
    alpha: Vec<Vec<Complex64>>,
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct FrameJson {
    n: usize,
    #[serde(rename = "S")]
    s: usize,
    alpha: Vec<Vec<ComplexJson>>,
}

impl CoherentFrame {
    /// Validates and wraps a coefficient matrix given as rows, one per
    /// species. The rows must form an orthonormal set within
    /// [`FRAME_TOL`], and there can be at most as many species as modes.
    pub fn new(alpha: Vec<Vec<Complex64>>) -> Result<Self> {
        let s = alpha.len();
        if s == 0 {
            return Err(Error::DimensionMismatch {
                context: "frame must have at least one species row",
                expected: 1,
                got: 0,
            });
        }
        let n = alpha[0].len();
        for row in &alpha {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    context: "frame rows must share one length",
                    expected: n,
                    got: row.len(),
                });
            }
            if row.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFiniteFrame);
            }
        }
        if s > n {
            return Err(Error::TooManySpecies { s, n });
        }
        let mut max_dev: f64 = 0.0;
        for sp in 0..s {
            for sq in 0..s {
                let gram: Complex64 = (0..n).map(|i| alpha[sp][i].conj() * alpha[sq][i]).sum();
                let target = if sp == sq { 1.0 } else { 0.0 };
                max_dev = max_dev.max((gram - target).norm());
            }
        }
        if max_dev > FRAME_TOL {
            return Err(Error::NonOrthonormalFrame {
                max_dev,
                tol: FRAME_TOL,
            });
        }
        Ok(CoherentFrame { n, alpha })
    }

    pub fn n_modes(&self) -> usize {
        self.n
    }

    pub fn species(&self) -> usize {
        self.alpha.len()
    }

    /// Coefficient `α_{s,i}` with zero-based species `s` and mode index `i`.
    pub fn alpha(&self, s: usize, mode: ModeIndex) -> Complex64 {
        self.alpha[s][mode.idx0()]
    }

    pub fn row(&self, s: usize) -> &[Complex64] {
        &self.alpha[s]
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = FrameJson {
            n: self.n,
            s: self.species(),
            alpha: self
                .alpha
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|z| ComplexJson { re: z.re, im: z.im })
                        .collect()
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: FrameJson = serde_json::from_str(text)?;
        if doc.alpha.len() != doc.s {
            return Err(Error::DimensionMismatch {
                context: "frame alpha row count vs S",
                expected: doc.s,
                got: doc.alpha.len(),
            });
        }
        if doc.alpha.first().map(|r| r.len()) != Some(doc.n) {
            return Err(Error::DimensionMismatch {
                context: "frame alpha column count vs n",
                expected: doc.n,
                got: doc.alpha.first().map_or(0, |r| r.len()),
            });
        }
        Self::new(
            doc.alpha
                .iter()
                .map(|row| row.iter().map(|z| Complex64::new(z.re, z.im)).collect())
                .collect(),
        )
    }

    fn check_modes(&self, term: &NormalTerm) -> Result<()> {
        for &m in term.creators.iter().chain(term.annihilators.iter()) {
            if m.idx0() >= self.n {
                return Err(Error::ModeOutOfRange {
                    index: m.get(),
                    n: self.n as u32,
                });
            }
        }
        Ok(())
    }
}

/// Coherent-boson occupation numbers `(N_1, …, N_S)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occupancy {
    counts: Vec<u32>,
}

impl Occupancy {
    pub fn new(counts: Vec<u32>) -> Self {
        Occupancy { counts }
    }

    pub fn species(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u32 {
        self.counts.iter().sum()
    }

    pub fn get(&self, s: usize) -> u32 {
        self.counts[s]
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }
}

/// How many of the `m` species indices fall in each of the `S` bins,
/// `Σ_s ν_s = m`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MultiplicityVector {
    nu: Vec<u32>,
}

impl MultiplicityVector {
    pub fn new(nu: Vec<u32>) -> Self {
        MultiplicityVector { nu }
    }

    pub fn body(&self) -> u32 {
        self.nu.iter().sum()
    }

    pub fn counts(&self) -> &[u32] {
        &self.nu
    }
}

/// Exact falling factorial `n(n−1)⋯(n−k+1)`; zero when `k > n`.
fn falling(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for j in 0..k {
        acc *= (n - j) as u128;
    }
    acc
}

fn factorial(k: u32) -> u128 {
    (1..=k as u128).product()
}

/// `m! / ∏_s ν_s!` for a composition `ν` of `m`.
fn multinomial(m: u32, nu: &[u32]) -> u128 {
    debug_assert_eq!(nu.iter().sum::<u32>(), m);
    nu.iter().fold(factorial(m), |acc, &k| acc / factorial(k))
}

/// All compositions of `m` into `s` nonnegative parts, lexicographic order.
fn compositions(s: usize, m: u32) -> Vec<Vec<u32>> {
    debug_assert!(s >= 1);
    let mut out = Vec::new();
    let mut cur = vec![0u32; s];
    fn rec(bin: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if bin == cur.len() - 1 {
            cur[bin] = left;
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur[bin] = k;
            rec(bin + 1, left - k, cur, out);
        }
    }
    rec(0, m, &mut cur, &mut out);
    out
}

/// Coefficient sums per multiplicity vector: for each composition `ν` of
/// `modes.len()` over the species, the sum over all species-index tuples `t`
/// with counting function `ν` of `∏_i α_{t_i, r_i}` (conjugated when
/// `conjugate` is set). Evaluated by a positional sweep, so the cost is
/// polynomial rather than `S^m`.
fn coefficient_sums(
    frame: &CoherentFrame,
    modes: &[ModeIndex],
    conjugate: bool,
) -> BTreeMap<Vec<u32>, Complex64> {
    let s = frame.species();
    let mut dp: BTreeMap<Vec<u32>, Complex64> = BTreeMap::new();
    dp.insert(vec![0u32; s], Complex64::new(1.0, 0.0));
    for &mode in modes {
        let mut next: BTreeMap<Vec<u32>, Complex64> = BTreeMap::new();
        for (nu, coeff) in &dp {
            for t in 0..s {
                let a = frame.alpha(t, mode);
                let a = if conjugate { a.conj() } else { a };
                let mut nu2 = nu.clone();
                nu2[t] += 1;
                *next.entry(nu2).or_insert(Complex64::new(0.0, 0.0)) += coeff * a;
            }
        }
        dp = next;
    }
    dp
}

/// Expansion of `(∏_i b_{r_i}) |N_1…N_S⟩` over the shifted occupancies
/// `N_s − ν_s`. Entries whose species would be overannihilated are omitted.
pub fn annihilate_product(
    frame: &CoherentFrame,
    occ: &Occupancy,
    modes: &[ModeIndex],
) -> Result<Vec<(Occupancy, Complex64)>> {
    if occ.species() != frame.species() {
        return Err(Error::DimensionMismatch {
            context: "occupancy species vs frame species",
            expected: frame.species(),
            got: occ.species(),
        });
    }
    for &m in modes {
        if m.idx0() >= frame.n_modes() {
            return Err(Error::ModeOutOfRange {
                index: m.get(),
                n: frame.n_modes() as u32,
            });
        }
    }
    let sums = coefficient_sums(frame, modes, false);
    let mut out = Vec::new();
    for (nu, coeff) in sums {
        if nu.iter().zip(occ.counts()).any(|(&v, &n)| v > n) {
            continue;
        }
        let weight: u128 = nu
            .iter()
            .zip(occ.counts())
            .map(|(&v, &n)| falling(n, v))
            .product();
        let shifted = Occupancy::new(occ.counts().iter().zip(&nu).map(|(&n, &v)| n - v).collect());
        out.push((shifted, (weight as f64).sqrt() * coeff));
    }
    Ok(out)
}

fn check_species(frame: &CoherentFrame, bra: &Occupancy, ket: &Occupancy) -> Result<()> {
    for occ in [bra, ket] {
        if occ.species() != frame.species() {
            return Err(Error::DimensionMismatch {
                context: "occupancy species vs frame species",
                expected: frame.species(),
                got: occ.species(),
            });
        }
    }
    Ok(())
}

/// Visits all tuples in `{0, …, s−1}^len` in lexicographic order.
fn for_each_tuple(s: usize, len: usize, mut f: impl FnMut(&[usize])) {
    let mut tuple = vec![0usize; len];
    loop {
        f(&tuple);
        let mut pos = len;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < s {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

fn direct_sum(
    frame: &CoherentFrame,
    bra: &Occupancy,
    ket: &Occupancy,
    term: &NormalTerm,
    mut surviving: Option<&mut u64>,
) -> Complex64 {
    let s = frame.species();
    let mut total = Complex64::new(0.0, 0.0);
    for_each_tuple(s, term.creators.len(), |tp| {
        let mut nu_bra = vec![0u32; s];
        for &t in tp {
            nu_bra[t] += 1;
        }
        let mut bra_coeff = Complex64::new(1.0, 0.0);
        for (i, &t) in tp.iter().enumerate() {
            bra_coeff *= frame.alpha(t, term.creators[i]).conj();
        }
        for_each_tuple(s, term.annihilators.len(), |tq| {
            let mut nu_ket = vec![0u32; s];
            for &t in tq {
                nu_ket[t] += 1;
            }
            // delta constraint: N_s' − ν_s' = N_s − ν_s ≥ 0 for every s
            let matches = (0..s).all(|j| {
                let lhs = bra.get(j) as i64 - nu_bra[j] as i64;
                let rhs = ket.get(j) as i64 - nu_ket[j] as i64;
                lhs == rhs && lhs >= 0
            });
            if !matches {
                return;
            }
            if let Some(count) = surviving.as_deref_mut() {
                *count += 1;
            }
            let weight: u128 = (0..s)
                .map(|j| falling(bra.get(j), nu_bra[j]) * falling(ket.get(j), nu_ket[j]))
                .product();
            let mut ket_coeff = Complex64::new(1.0, 0.0);
            for (i, &t) in tq.iter().enumerate() {
                ket_coeff *= frame.alpha(t, term.annihilators[i]);
            }
            total += (weight as f64).sqrt() * bra_coeff * ket_coeff;
        });
    });
    term.coeff * total
}

fn collected_sum(
    frame: &CoherentFrame,
    bra: &Occupancy,
    ket: &Occupancy,
    term: &NormalTerm,
) -> Complex64 {
    let s = frame.species();
    let bra_sums = coefficient_sums(frame, &term.creators, true);
    let ket_sums = coefficient_sums(frame, &term.annihilators, false);
    let mut total = Complex64::new(0.0, 0.0);
    for (nu_bra, bra_coeff) in &bra_sums {
        // the delta constraint fixes the ket multiplicities
        let mut nu_ket = Vec::with_capacity(s);
        let mut feasible = true;
        for (j, &nb) in nu_bra.iter().enumerate() {
            let left = bra.get(j) as i64 - nb as i64;
            if left < 0 {
                feasible = false;
                break;
            }
            let v = ket.get(j) as i64 - left;
            if v < 0 {
                feasible = false;
                break;
            }
            nu_ket.push(v as u32);
        }
        if !feasible {
            continue;
        }
        let Some(ket_coeff) = ket_sums.get(&nu_ket) else {
            continue;
        };
        let weight: u128 = (0..s)
            .map(|j| falling(bra.get(j), nu_bra[j]) * falling(ket.get(j), nu_ket[j]))
            .product();
        total += (weight as f64).sqrt() * bra_coeff * ket_coeff;
    }
    term.coeff * total
}

/// Matrix element of one normal-ordered term between two coherent states,
/// including the term coefficient. Unequal creator/annihilator counts are
/// handled by expanding bra and ket separately and taking the
/// occupancy-orthogonal overlap.
pub fn matrix_element(
    frame: &CoherentFrame,
    bra: &Occupancy,
    ket: &Occupancy,
    term: &NormalTerm,
) -> Result<Complex64> {
    check_species(frame, bra, ket)?;
    frame.check_modes(term)?;
    if term.is_scalar() {
        return Ok(if bra == ket {
            term.coeff
        } else {
            Complex64::new(0.0, 0.0)
        });
    }
    let s = frame.species() as u128;
    let tuples = s
        .checked_pow((term.creators.len() + term.annihilators.len()) as u32)
        .unwrap_or(u128::MAX);
    if tuples <= DIRECT_TUPLE_LIMIT {
        Ok(direct_sum(frame, bra, ket, term, None))
    } else {
        Ok(collected_sum(frame, bra, ket, term))
    }
}

/// Like [`matrix_element`] but forcing direct tuple enumeration and also
/// returning the number of `(t', t)` index pairs that survive the delta
/// constraint with nonzero falling-factorial weights. Diagnostic instrument;
/// cost grows as `S^(2m)`.
pub fn matrix_element_counting(
    frame: &CoherentFrame,
    bra: &Occupancy,
    ket: &Occupancy,
    term: &NormalTerm,
) -> Result<(Complex64, u64)> {
    check_species(frame, bra, ket)?;
    frame.check_modes(term)?;
    if term.is_scalar() {
        let me = if bra == ket {
            term.coeff
        } else {
            Complex64::new(0.0, 0.0)
        };
        return Ok((me, 0));
    }
    let mut count = 0u64;
    let me = direct_sum(frame, bra, ket, term, Some(&mut count));
    Ok((me, count))
}

/// Partition-collected evaluation of a single term, regardless of size.
pub fn matrix_element_collected(
    frame: &CoherentFrame,
    bra: &Occupancy,
    ket: &Occupancy,
    term: &NormalTerm,
) -> Result<Complex64> {
    check_species(frame, bra, ket)?;
    frame.check_modes(term)?;
    if term.is_scalar() {
        return Ok(if bra == ket {
            term.coeff
        } else {
            Complex64::new(0.0, 0.0)
        });
    }
    Ok(collected_sum(frame, bra, ket, term))
}

/// Matrix element of a full operator polynomial: normal orders, simplifies,
/// and sums the per-term matrix elements. Scalar terms contribute
/// `c·δ_{bra,ket}`.
pub fn matrix_element_poly(
    frame: &CoherentFrame,
    bra: &Occupancy,
    ket: &Occupancy,
    poly: &OperatorPoly,
) -> Result<Complex64> {
    if poly.n_modes() as usize != frame.n_modes() {
        return Err(Error::DimensionMismatch {
            context: "polynomial modes vs frame modes",
            expected: frame.n_modes(),
            got: poly.n_modes() as usize,
        });
    }
    let terms = poly
        .normal_order()
        .simplify(MERGE_TOL)
        .normal_terms()
        .expect("normal_order output is normal ordered");
    let mut total = Complex64::new(0.0, 0.0);
    for term in &terms {
        total += matrix_element(frame, bra, ket, term)?;
    }
    Ok(total)
}

/// Expectation value `⟨occ|p|occ⟩`, using the diagonal simplification: the
/// delta constraint forces equal bra and ket multiplicities, so the weight is
/// the exact integer `∏_s N_s^(ν_s)` with no square root.
pub fn expectation(
    frame: &CoherentFrame,
    occ: &Occupancy,
    poly: &OperatorPoly,
) -> Result<Complex64> {
    if poly.n_modes() as usize != frame.n_modes() {
        return Err(Error::DimensionMismatch {
            context: "polynomial modes vs frame modes",
            expected: frame.n_modes(),
            got: poly.n_modes() as usize,
        });
    }
    check_species(frame, occ, occ)?;
    let terms = poly
        .normal_order()
        .simplify(MERGE_TOL)
        .normal_terms()
        .expect("normal_order output is normal ordered");
    let mut total = Complex64::new(0.0, 0.0);
    for term in &terms {
        frame.check_modes(term)?;
        if term.is_scalar() {
            total += term.coeff;
            continue;
        }
        // unbalanced terms change the occupancy and cannot contribute
        if term.creators.len() != term.annihilators.len() {
            continue;
        }
        let bra_sums = coefficient_sums(frame, &term.creators, true);
        let ket_sums = coefficient_sums(frame, &term.annihilators, false);
        let mut acc = Complex64::new(0.0, 0.0);
        for (nu, bra_coeff) in &bra_sums {
            if nu.iter().zip(occ.counts()).any(|(&v, &n)| v > n) {
                continue;
            }
            let Some(ket_coeff) = ket_sums.get(nu) else {
                continue;
            };
            let weight: u128 = nu
                .iter()
                .zip(occ.counts())
                .map(|(&v, &n)| falling(n, v))
                .product();
            acc += (weight as f64) * bra_coeff * ket_coeff;
        }
        total += term.coeff * acc;
    }
    Ok(total)
}

/// Number of `(t', t)` index pairs surviving the delta constraint for
/// generic occupancies with all `N_s ≥ m`: `Σ_ν multinomial(m; ν)²` over
/// compositions `ν` of `m` into `S` bins.
pub fn count_contributing(s: usize, m: u32) -> u128 {
    debug_assert!(s >= 1);
    compositions(s, m)
        .iter()
        .map(|nu| {
            let w = multinomial(m, nu);
            w * w
        })
        .sum()
}

/// All pairs of multiplicity vectors of `m` over `S` bins; the groups under
/// which the general matrix element collects when the occupancies are kept
/// symbolic. Length is the square of the composition count
/// `C(m+S−1, S−1)`.
pub fn collect_partitions(s: usize, m: u32) -> Vec<(MultiplicityVector, MultiplicityVector)> {
    debug_assert!(s >= 1);
    let comps = compositions(s, m);
    let mut out = Vec::with_capacity(comps.len() * comps.len());
    for a in &comps {
        for b in &comps {
            out.push((
                MultiplicityVector::new(a.clone()),
                MultiplicityVector::new(b.clone()),
            ));
        }
    }
    out
}

/// Which closed-form family of the two-species special cases to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    OneBody,
    TwoBody,
}

/// Direct evaluation of the two-species closed forms for 1-body and 2-body
/// terms (three and five occupancy-shift cases respectively), including the
/// term coefficient. Occupancy shifts outside the covered range give zero.
pub fn two_species_closed(
    form: ClosedForm,
    bra: &Occupancy,
    ket: &Occupancy,
    frame: &CoherentFrame,
    term: &NormalTerm,
) -> Result<Complex64> {
    if frame.species() != 2 {
        return Err(Error::DimensionMismatch {
            context: "two-species closed forms require S = 2",
            expected: 2,
            got: frame.species(),
        });
    }
    check_species(frame, bra, ket)?;
    frame.check_modes(term)?;
    let body = match form {
        ClosedForm::OneBody => 1,
        ClosedForm::TwoBody => 2,
    };
    if term.creators.len() != body || term.annihilators.len() != body {
        return Err(Error::DimensionMismatch {
            context: "term body count vs requested closed form",
            expected: body,
            got: term.body(),
        });
    }
    let zero = Complex64::new(0.0, 0.0);
    if bra.total() != ket.total() {
        return Ok(zero);
    }
    let n1 = ket.get(0);
    let n2 = ket.get(1);
    let d = bra.get(0) as i64 - n1 as i64;
    // ket-side coefficients α_{s,r} and bra-side conjugates
    let a = |s: usize, r: ModeIndex| frame.alpha(s, r);
    let b = |s: usize, r: ModeIndex| frame.alpha(s, r).conj();
    let value = match form {
        ClosedForm::OneBody => {
            let rp = term.creators[0];
            let r = term.annihilators[0];
            match d {
                -1 => ((n1 as f64) * (n2 as f64 + 1.0)).sqrt() * b(1, rp) * a(0, r),
                0 => (n1 as f64) * b(0, rp) * a(0, r) + (n2 as f64) * b(1, rp) * a(1, r),
                1 => ((n1 as f64 + 1.0) * (n2 as f64)).sqrt() * b(0, rp) * a(1, r),
                _ => zero,
            }
        }
        ClosedForm::TwoBody => {
            let (c1, c2) = (term.creators[0], term.creators[1]);
            let (a1, a2) = (term.annihilators[0], term.annihilators[1]);
            // symmetric combinations shared by the mixed-species cases
            let bra_mix = b(0, c2) * b(1, c1) + b(1, c2) * b(0, c1);
            let ket_mix = a(1, a1) * a(0, a2) + a(0, a1) * a(1, a2);
            match d {
                -2 => {
                    (falling(n1, 2) as f64 * falling(n2 + 2, 2) as f64).sqrt()
                        * b(1, c2)
                        * b(1, c1)
                        * a(0, a1)
                        * a(0, a2)
                }
                -1 => {
                    let root = ((n1 as f64) * (n2 as f64 + 1.0)).sqrt();
                    (n1 as f64 - 1.0) * root * bra_mix * a(0, a1) * a(0, a2)
                        + (n2 as f64) * root * b(1, c2) * b(1, c1) * ket_mix
                }
                0 => {
                    falling(n1, 2) as f64 * b(0, c2) * b(0, c1) * a(0, a1) * a(0, a2)
                        + falling(n2, 2) as f64 * b(1, c2) * b(1, c1) * a(1, a1) * a(1, a2)
                        + (n1 as f64) * (n2 as f64) * bra_mix * ket_mix
                }
                1 => {
                    let root = ((n1 as f64 + 1.0) * (n2 as f64)).sqrt();
                    (n1 as f64) * root * b(0, c2) * b(0, c1) * ket_mix
                        + (n2 as f64 - 1.0) * root * bra_mix * a(1, a1) * a(1, a2)
                }
                2 => {
                    (falling(n1 + 2, 2) as f64 * falling(n2, 2) as f64).sqrt()
                        * b(0, c2)
                        * b(0, c1)
                        * a(1, a1)
                        * a(1, a2)
                }
                _ => zero,
            }
        }
    };
    Ok(term.coeff * value)
}
