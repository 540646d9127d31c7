//! Polynomials in boson creation/annihilation operators and their rewriting
//! into normal-ordered m-body terms.
//!
//! Operators live over `n` basic modes `b_1 … b_n` obeying
//! `[b_i, b_j†] = δ_ij`. A polynomial is a sum of product terms, each a
//! complex coefficient times an arbitrary sequence of creators and
//! annihilators. [`OperatorPoly::normal_order`] rewrites every term so that
//! all creators stand left of all annihilators, and [`OperatorPoly::simplify`]
//! merges like terms on the canonical (sorted creators, sorted annihilators)
//! key.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient magnitude below which [`OperatorPoly::simplify`] drops a term.
pub const MERGE_TOL: f64 = 1e-12;

/// One-based index of a basic boson mode `b_i`, `1 ≤ i ≤ n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeIndex(pub(crate) u32);

impl ModeIndex {
    pub fn new(index: u32) -> Result<Self> {
        if index == 0 {
            return Err(Error::ZeroModeIndex);
        }
        Ok(ModeIndex(index))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Zero-based index for array access.
    pub(crate) fn idx0(self) -> usize {
        self.0 as usize - 1
    }

    fn check(self, n: u32) -> Result<Self> {
        if self.0 < 1 || self.0 > n {
            Err(Error::ModeOutOfRange { index: self.0, n })
        } else {
            Ok(self)
        }
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A single creation (`dagger = true`) or annihilation operator on one mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BosonOp {
    pub dagger: bool,
    pub mode: ModeIndex,
}

impl BosonOp {
    pub fn create(mode: ModeIndex) -> Self {
        BosonOp { dagger: true, mode }
    }

    pub fn annihilate(mode: ModeIndex) -> Self {
        BosonOp {
            dagger: false,
            mode,
        }
    }

    fn adjoint(self) -> Self {
        BosonOp {
            dagger: !self.dagger,
            mode: self.mode,
        }
    }
}

impl fmt::Display for BosonOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dagger {
            write!(f, "b†_{}", self.mode)
        } else {
            write!(f, "b_{}", self.mode)
        }
    }
}

/// A coefficient times an ordered product of boson operators.
///
/// The empty product is the identity, so a term with no operators is a
/// scalar.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductTerm {
    pub coeff: Complex64,
    pub ops: Vec<BosonOp>,
}

impl ProductTerm {
    pub fn scalar(coeff: Complex64) -> Self {
        ProductTerm { coeff, ops: vec![] }
    }

    fn adjoint(&self) -> Self {
        let mut ops: Vec<BosonOp> = self.ops.iter().rev().map(|op| op.adjoint()).collect();
        ops.shrink_to_fit();
        ProductTerm {
            coeff: self.coeff.conj(),
            ops,
        }
    }

    /// True when all creators precede all annihilators.
    fn is_normal(&self) -> bool {
        let first_annihilator = self.ops.iter().position(|op| !op.dagger);
        match first_annihilator {
            None => true,
            Some(k) => self.ops[k..].iter().all(|op| !op.dagger),
        }
    }

    /// Sorts the creator prefix and annihilator suffix by mode. Valid only
    /// for terms already in creator-left form; bosons of the same kind
    /// commute, so this is a no-op physically.
    fn canonicalize(&mut self) {
        debug_assert!(self.is_normal());
        let split = self
            .ops
            .iter()
            .position(|op| !op.dagger)
            .unwrap_or(self.ops.len());
        self.ops[..split].sort();
        self.ops[split..].sort();
    }
}

/// A normal-ordered term `coeff · ∏ b†_{c} ∏ b_{a}` with both index lists
/// sorted ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalTerm {
    pub coeff: Complex64,
    pub creators: Vec<ModeIndex>,
    pub annihilators: Vec<ModeIndex>,
}

impl NormalTerm {
    pub fn new(
        coeff: Complex64,
        mut creators: Vec<ModeIndex>,
        mut annihilators: Vec<ModeIndex>,
    ) -> Self {
        creators.sort();
        annihilators.sort();
        NormalTerm {
            coeff,
            creators,
            annihilators,
        }
    }

    /// Body count `m = max(|creators|, |annihilators|)`.
    pub fn body(&self) -> usize {
        self.creators.len().max(self.annihilators.len())
    }

    pub fn is_scalar(&self) -> bool {
        self.creators.is_empty() && self.annihilators.is_empty()
    }

    fn to_product(&self) -> ProductTerm {
        let ops = self
            .creators
            .iter()
            .map(|&m| BosonOp::create(m))
            .chain(self.annihilators.iter().map(|&m| BosonOp::annihilate(m)))
            .collect();
        ProductTerm {
            coeff: self.coeff,
            ops,
        }
    }
}

/// A finite sum of [`ProductTerm`]s over `n` basic modes.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorPoly {
    n: u32,
    terms: Vec<ProductTerm>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    re: f64,
    im: f64,
    creators: Vec<u32>,
    annihilators: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    n: u32,
    terms: Vec<TermJson>,
}

impl OperatorPoly {
    pub fn zero(n: u32) -> Self {
        OperatorPoly { n, terms: vec![] }
    }

    pub fn scalar(n: u32, c: Complex64) -> Self {
        OperatorPoly {
            n,
            terms: vec![ProductTerm::scalar(c)],
        }
    }

    pub fn identity(n: u32) -> Self {
        Self::scalar(n, Complex64::new(1.0, 0.0))
    }

    /// The generator `c · b_i† b_j`, already normal ordered.
    pub fn bilinear(n: u32, i: ModeIndex, j: ModeIndex, c: Complex64) -> Result<Self> {
        i.check(n)?;
        j.check(n)?;
        Ok(OperatorPoly {
            n,
            terms: vec![ProductTerm {
                coeff: c,
                ops: vec![BosonOp::create(i), BosonOp::annihilate(j)],
            }],
        })
    }

    /// The bare creator `b_i†`.
    pub fn creator(n: u32, i: ModeIndex) -> Result<Self> {
        i.check(n)?;
        Ok(OperatorPoly {
            n,
            terms: vec![ProductTerm {
                coeff: Complex64::new(1.0, 0.0),
                ops: vec![BosonOp::create(i)],
            }],
        })
    }

    /// The bare annihilator `b_i`.
    pub fn annihilator(n: u32, i: ModeIndex) -> Result<Self> {
        i.check(n)?;
        Ok(OperatorPoly {
            n,
            terms: vec![ProductTerm {
                coeff: Complex64::new(1.0, 0.0),
                ops: vec![BosonOp::annihilate(i)],
            }],
        })
    }

    /// Builds a polynomial from normal-ordered terms, validating indices.
    pub fn from_normal_terms(n: u32, terms: Vec<NormalTerm>) -> Result<Self> {
        for t in &terms {
            for &m in t.creators.iter().chain(t.annihilators.iter()) {
                m.check(n)?;
            }
        }
        Ok(OperatorPoly {
            n,
            terms: terms.iter().map(NormalTerm::to_product).collect(),
        })
    }

    pub fn n_modes(&self) -> u32 {
        self.n
    }

    pub fn terms(&self) -> &[ProductTerm] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Formal product; the result is not normal ordered.
    pub fn multiply(&self, rhs: &OperatorPoly) -> Result<OperatorPoly> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch {
                context: "operator product mode counts",
                expected: self.n as usize,
                got: rhs.n as usize,
            });
        }
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for a in &self.terms {
            for b in &rhs.terms {
                let mut ops = Vec::with_capacity(a.ops.len() + b.ops.len());
                ops.extend_from_slice(&a.ops);
                ops.extend_from_slice(&b.ops);
                terms.push(ProductTerm {
                    coeff: a.coeff * b.coeff,
                    ops,
                });
            }
        }
        Ok(OperatorPoly { n: self.n, terms })
    }

    pub fn add(&self, rhs: &OperatorPoly) -> Result<OperatorPoly> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch {
                context: "operator sum mode counts",
                expected: self.n as usize,
                got: rhs.n as usize,
            });
        }
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&rhs.terms);
        Ok(OperatorPoly { n: self.n, terms })
    }

    pub fn scale(&self, c: Complex64) -> OperatorPoly {
        OperatorPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|t| ProductTerm {
                    coeff: c * t.coeff,
                    ops: t.ops.clone(),
                })
                .collect(),
        }
    }

    /// Term-wise dagger: reversed operators with kinds swapped, conjugated
    /// coefficients.
    pub fn adjoint(&self) -> OperatorPoly {
        OperatorPoly {
            n: self.n,
            terms: self.terms.iter().map(ProductTerm::adjoint).collect(),
        }
    }

    /// Rewrites every term into creator-left form by repeated single swaps
    /// `b_i b_j† → b_j† b_i + δ_ij`. Equal to `self` as an operator on Fock
    /// space. Terminates because each swap strictly lowers the number of
    /// (annihilator, creator) inversions and each contraction shortens the
    /// term.
    pub fn normal_order(&self) -> OperatorPoly {
        let mut out: Vec<ProductTerm> = Vec::new();
        let mut stack: Vec<ProductTerm> = self.terms.clone();
        while let Some(term) = stack.pop() {
            let swap_at = term
                .ops
                .windows(2)
                .position(|w| !w[0].dagger && w[1].dagger);
            match swap_at {
                None => {
                    let mut term = term;
                    term.canonicalize();
                    out.push(term);
                }
                Some(i) => {
                    let mut swapped = term.clone();
                    swapped.ops.swap(i, i + 1);
                    if term.ops[i].mode == term.ops[i + 1].mode {
                        let mut contracted = term;
                        contracted.ops.drain(i..i + 2);
                        stack.push(contracted);
                    }
                    stack.push(swapped);
                }
            }
        }
        OperatorPoly {
            n: self.n,
            terms: out,
        }
    }

    /// Merges terms sharing the same operator sequence and drops any whose
    /// merged coefficient has magnitude below `tol`. On normal-ordered input
    /// the merge key is the canonical (sorted creators, sorted annihilators)
    /// pair.
    pub fn simplify(&self, tol: f64) -> OperatorPoly {
        let mut merged: BTreeMap<Vec<BosonOp>, Complex64> = BTreeMap::new();
        for term in &self.terms {
            *merged
                .entry(term.ops.clone())
                .or_insert(Complex64::new(0.0, 0.0)) += term.coeff;
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| c.norm() >= tol)
            .map(|(ops, coeff)| ProductTerm { coeff, ops })
            .collect();
        OperatorPoly { n: self.n, terms }
    }

    pub fn is_normal_ordered(&self) -> bool {
        self.terms.iter().all(ProductTerm::is_normal)
    }

    /// Views the terms as [`NormalTerm`]s; fails unless normal ordered.
    pub fn normal_terms(&self) -> Result<Vec<NormalTerm>> {
        self.terms
            .iter()
            .map(|t| {
                if !t.is_normal() {
                    return Err(Error::NotNormalOrdered);
                }
                let split = t
                    .ops
                    .iter()
                    .position(|op| !op.dagger)
                    .unwrap_or(t.ops.len());
                Ok(NormalTerm::new(
                    t.coeff,
                    t.ops[..split].iter().map(|op| op.mode).collect(),
                    t.ops[split..].iter().map(|op| op.mode).collect(),
                ))
            })
            .collect()
    }

    /// Equality of the two polynomials as operators, checked on the
    /// normal-ordered canonical forms with coefficient tolerance `tol`.
    pub fn approx_eq(&self, other: &OperatorPoly, tol: f64) -> bool {
        if self.n != other.n {
            return false;
        }
        let diff = self
            .add(&other.scale(Complex64::new(-1.0, 0.0)))
            .expect("same n");
        diff.normal_order().simplify(tol).terms.is_empty()
    }

    /// Serializes the normal-ordered, simplified form.
    pub fn to_json(&self) -> Result<String> {
        let terms = self
            .normal_order()
            .simplify(MERGE_TOL)
            .normal_terms()
            .expect("normal_order output is normal ordered");
        let doc = PolyJson {
            n: self.n,
            terms: terms
                .iter()
                .map(|t| TermJson {
                    re: t.coeff.re,
                    im: t.coeff.im,
                    creators: t.creators.iter().map(|m| m.get()).collect(),
                    annihilators: t.annihilators.iter().map(|m| m.get()).collect(),
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<OperatorPoly> {
        let doc: PolyJson = serde_json::from_str(text)?;
        let to_modes = |ix: &[u32]| -> Result<Vec<ModeIndex>> {
            ix.iter()
                .map(|&i| ModeIndex::new(i)?.check(doc.n))
                .collect()
        };
        let terms = doc
            .terms
            .iter()
            .map(|t| {
                Ok(NormalTerm::new(
                    Complex64::new(t.re, t.im),
                    to_modes(&t.creators)?,
                    to_modes(&t.annihilators)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        OperatorPoly::from_normal_terms(doc.n, terms)
    }
}

impl fmt::Display for OperatorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, term) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:+.6}{:+.6}i)", term.coeff.re, term.coeff.im)?;
            for op in &term.ops {
                write!(f, " {}", op)?;
            }
        }
        Ok(())
    }
}

impl std::ops::Add for &OperatorPoly {
    type Output = OperatorPoly;
    fn add(self, rhs: &OperatorPoly) -> OperatorPoly {
        OperatorPoly::add(self, rhs).expect("mode count mismatch in +")
    }
}

impl std::ops::Sub for &OperatorPoly {
    type Output = OperatorPoly;
    fn sub(self, rhs: &OperatorPoly) -> OperatorPoly {
        OperatorPoly::add(self, &rhs.scale(Complex64::new(-1.0, 0.0)))
            .expect("mode count mismatch in -")
    }
}

impl std::ops::Mul for &OperatorPoly {
    type Output = OperatorPoly;
    fn mul(self, rhs: &OperatorPoly) -> OperatorPoly {
        OperatorPoly::multiply(self, rhs).expect("mode count mismatch in *")
    }
}

impl std::ops::Mul<f64> for &OperatorPoly {
    type Output = OperatorPoly;
    fn mul(self, rhs: f64) -> OperatorPoly {
        self.scale(Complex64::new(rhs, 0.0))
    }
}
