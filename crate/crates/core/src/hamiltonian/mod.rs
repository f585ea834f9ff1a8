//! Pauli-string Hamiltonians.
//!
//! A Hamiltonian is a weighted sum of Pauli products plus an identity offset.
//! Qubit `j` of an axis string is the `j`-th character (0-based here, 1-based
//! in the physics notation), and in every state vector qubit `j` is bit `j`
//! of the basis index.
//!
//! Text format, one term per line:
//!
//! ```text
//! # H2 at R = 0.75 Å
//! -0.388748 ZI
//! -0.388748 IZ
//! 0.0111772 ZZ
//! 0.181771  XX
//! -0.349833 II
//! ```
//!
//! Identity lines accumulate into the offset. `#` starts a comment.

mod initial;
mod models;

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{PiteError, Result};

pub use initial::{ising_optimal_phi, prepare_initial, InitialState, ProductAngle};
pub use models::{
    build_h2, build_ising, build_lih, h2_distances, h2_row, ising_site_terms, lih_groups_text, H2Row, IsingSiteTerm,
    LIH_HAMILTONIAN_TEXT,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliAxis {
    I,
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(PauliAxis::I),
            'X' => Some(PauliAxis::X),
            'Y' => Some(PauliAxis::Y),
            'Z' => Some(PauliAxis::Z),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            PauliAxis::I => 'I',
            PauliAxis::X => 'X',
            PauliAxis::Y => 'Y',
            PauliAxis::Z => 'Z',
        }
    }

    /// Single-qubit matrix element `<row|σ|col>`.
    pub fn element(self, row: usize, col: usize) -> Complex64 {
        let (r, c) = (row & 1, col & 1);
        match self {
            PauliAxis::I => c64(if r == c { 1.0 } else { 0.0 }, 0.0),
            PauliAxis::X => c64(if r != c { 1.0 } else { 0.0 }, 0.0),
            PauliAxis::Y => match (r, c) {
                (0, 1) => c64(0.0, -1.0),
                (1, 0) => c64(0.0, 1.0),
                _ => Complex64::new(0.0, 0.0),
            },
            PauliAxis::Z => match (r, c) {
                (0, 0) => c64(1.0, 0.0),
                (1, 1) => c64(-1.0, 0.0),
                _ => Complex64::new(0.0, 0.0),
            },
        }
    }
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Parses an axis string such as `"XZIY"`.
pub fn parse_axes(s: &str) -> Result<Vec<PauliAxis>> {
    s.chars()
        .map(|c| {
            PauliAxis::from_char(c.to_ascii_uppercase())
                .ok_or_else(|| PiteError::InvalidArgument(format!("invalid axis character '{c}' in \"{s}\"")))
        })
        .collect()
}

pub fn axes_to_string(axes: &[PauliAxis]) -> String {
    axes.iter().map(|a| a.to_char()).collect()
}

/// Bit masks describing how a Pauli string acts on a computational basis state:
/// `P|b> = i^{n_y} (-1)^{popcount(b & z)} |b ^ x>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PauliMasks {
    pub x: usize,
    pub z: usize,
    pub n_y: u32,
}

impl PauliMasks {
    pub fn from_axes(axes: &[PauliAxis]) -> Self {
        let mut m = PauliMasks { x: 0, z: 0, n_y: 0 };
        for (q, a) in axes.iter().enumerate() {
            match a {
                PauliAxis::I => {}
                PauliAxis::X => m.x |= 1 << q,
                PauliAxis::Z => m.z |= 1 << q,
                PauliAxis::Y => {
                    m.x |= 1 << q;
                    m.z |= 1 << q;
                    m.n_y += 1;
                }
            }
        }
        m
    }

    /// Phase picked up by basis state `b`; the image is `b ^ self.x`.
    #[inline]
    pub fn phase(&self, b: usize) -> Complex64 {
        let base = match self.n_y % 4 {
            0 => c64(1.0, 0.0),
            1 => c64(0.0, 1.0),
            2 => c64(-1.0, 0.0),
            _ => c64(0.0, -1.0),
        };
        if (b & self.z).count_ones() % 2 == 1 {
            -base
        } else {
            base
        }
    }
}

/// A coefficient times a Pauli product with at least one non-identity factor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    coeff: f64,
    axes: Vec<PauliAxis>,
}

impl PauliTerm {
    pub fn new(coeff: f64, axes: Vec<PauliAxis>) -> Result<Self> {
        if !coeff.is_finite() || coeff == 0.0 {
            return Err(PiteError::InvalidHamiltonian(format!(
                "term coefficient must be finite and nonzero, got {coeff}"
            )));
        }
        if axes.iter().all(|a| *a == PauliAxis::I) {
            return Err(PiteError::InvalidHamiltonian("term has no non-identity axis".into()));
        }
        Ok(PauliTerm { coeff, axes })
    }

    pub fn from_str_axes(coeff: f64, axes: &str) -> Result<Self> {
        PauliTerm::new(coeff, parse_axes(axes)?)
    }

    pub fn coeff(&self) -> f64 {
        self.coeff
    }

    pub fn axes(&self) -> &[PauliAxis] {
        &self.axes
    }

    pub fn n_qubits(&self) -> usize {
        self.axes.len()
    }

    /// Qubits carrying a non-identity axis, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.axes
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != PauliAxis::I)
            .map(|(q, _)| q)
            .collect()
    }

    pub fn masks(&self) -> PauliMasks {
        PauliMasks::from_axes(&self.axes)
    }

    /// `coeff · P |ψ>` accumulated into `out`.
    pub fn apply_add(&self, psi: &[Complex64], out: &mut [Complex64]) {
        let m = self.masks();
        for (b, amp) in psi.iter().enumerate() {
            if amp.re == 0.0 && amp.im == 0.0 {
                continue;
            }
            out[b ^ m.x] += m.phase(b) * amp * self.coeff;
        }
    }

    /// Dense `2^n × 2^n` matrix of `coeff · P`.
    pub fn dense(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.n_qubits();
        let m = self.masks();
        let mut out = DMatrix::zeros(dim, dim);
        for b in 0..dim {
            out[(b ^ m.x, b)] = m.phase(b) * self.coeff;
        }
        out
    }

    /// `<ψ| coeff·P |ψ>` (real for a Hermitian term).
    pub fn expectation(&self, psi: &[Complex64]) -> f64 {
        let m = self.masks();
        let mut acc = Complex64::new(0.0, 0.0);
        for (b, amp) in psi.iter().enumerate() {
            acc += psi[b ^ m.x].conj() * m.phase(b) * amp;
        }
        acc.re * self.coeff
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.coeff, axes_to_string(&self.axes))
    }
}

/// `H = identity_offset · I + Σ_k c_k h_k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliHamiltonian {
    n_qubits: usize,
    terms: Vec<PauliTerm>,
    identity_offset: f64,
}

impl PauliHamiltonian {
    pub fn new(n_qubits: usize, terms: Vec<PauliTerm>, identity_offset: f64) -> Result<Self> {
        if n_qubits == 0 {
            return Err(PiteError::InvalidHamiltonian("zero qubits".into()));
        }
        if terms.is_empty() {
            return Err(PiteError::InvalidHamiltonian(
                "no non-identity term with a nonzero coefficient".into(),
            ));
        }
        if let Some(t) = terms.iter().find(|t| t.n_qubits() != n_qubits) {
            return Err(PiteError::InvalidHamiltonian(format!(
                "term {t} has {} axes, expected {n_qubits}",
                t.n_qubits()
            )));
        }
        if !identity_offset.is_finite() {
            return Err(PiteError::InvalidHamiltonian("non-finite identity offset".into()));
        }
        Ok(PauliHamiltonian {
            n_qubits,
            terms,
            identity_offset,
        })
    }

    /// Builds from raw `(coeff, axes)` pairs: identity products go into the
    /// offset and zero coefficients are dropped.
    pub fn from_raw<I>(n_qubits: usize, raw: I, identity_offset: f64) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, Vec<PauliAxis>)>,
    {
        let mut offset = identity_offset;
        let mut terms = Vec::new();
        for (coeff, axes) in raw {
            if axes.len() != n_qubits {
                return Err(PiteError::InvalidHamiltonian(format!(
                    "axis string {} has length {}, expected {n_qubits}",
                    axes_to_string(&axes),
                    axes.len()
                )));
            }
            if axes.iter().all(|a| *a == PauliAxis::I) {
                offset += coeff;
            } else if coeff != 0.0 {
                terms.push(PauliTerm::new(coeff, axes)?);
            }
        }
        PauliHamiltonian::new(n_qubits, terms, offset)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut n_qubits: Option<usize> = None;
        let mut offset = 0.0;
        let mut terms = Vec::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| PiteError::Parse { line: line_no, msg };
            let mut fields = line.split_whitespace();
            let coeff_str = fields.next().ok_or_else(|| err("empty line".into()))?;
            let axes_str = fields
                .next()
                .ok_or_else(|| err(format!("missing axis string after \"{coeff_str}\"")))?;
            if let Some(extra) = fields.next() {
                return Err(err(format!("unexpected trailing field \"{extra}\"")));
            }
            let coeff = f64::from_str(coeff_str)
                .ok()
                .filter(|c| c.is_finite())
                .ok_or_else(|| err(format!("malformed coefficient \"{coeff_str}\"")))?;
            let axes = parse_axes(axes_str).map_err(|e| err(e.to_string()))?;
            match n_qubits {
                None => n_qubits = Some(axes.len()),
                Some(n) if n != axes.len() => {
                    return Err(err(format!(
                        "axis string \"{axes_str}\" has length {}, expected {n}",
                        axes.len()
                    )))
                }
                Some(_) => {}
            }
            if axes.iter().all(|a| *a == PauliAxis::I) {
                offset += coeff;
            } else if coeff != 0.0 {
                terms.push(PauliTerm::new(coeff, axes).map_err(|e| err(e.to_string()))?);
            }
        }
        let n = n_qubits.ok_or(PiteError::Parse {
            line: 0,
            msg: "empty hamiltonian file".into(),
        })?;
        PauliHamiltonian::new(n, terms, offset)
    }

    /// Serializes to the line format accepted by [`PauliHamiltonian::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in &self.terms {
            out.push_str(&format!("{t}\n"));
        }
        if self.identity_offset != 0.0 {
            out.push_str(&format!("{} {}\n", self.identity_offset, "I".repeat(self.n_qubits)));
        }
        out
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn identity_offset(&self) -> f64 {
        self.identity_offset
    }

    /// Σ_k |c_k| over the non-identity terms.
    pub fn abs_coeff_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.abs()).sum()
    }

    /// Multiplies every coefficient (and the offset) by `alpha`.
    pub fn scaled(&self, alpha: f64) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|t| PauliTerm::new(t.coeff * alpha, t.axes.clone()))
            .collect::<Result<Vec<_>>>()?;
        PauliHamiltonian::new(self.n_qubits, terms, self.identity_offset * alpha)
    }

    /// Dense matrix including the identity offset.
    pub fn dense(&self) -> DMatrix<Complex64> {
        let dim = self.dim();
        let mut out = DMatrix::from_diagonal_element(dim, dim, c64(self.identity_offset, 0.0));
        for t in &self.terms {
            let m = t.masks();
            for b in 0..dim {
                out[(b ^ m.x, b)] += m.phase(b) * t.coeff;
            }
        }
        out
    }

    /// `H|ψ>` including the offset.
    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = psi.iter().map(|a| a * self.identity_offset).collect();
        for t in &self.terms {
            t.apply_add(psi, &mut out);
        }
        out
    }

    /// `<ψ|H|ψ> / <ψ|ψ>` including the offset.
    pub fn expectation(&self, psi: &[Complex64]) -> f64 {
        let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
        let e: f64 = self.terms.iter().map(|t| t.expectation(psi)).sum();
        e / norm + self.identity_offset
    }
}

impl FromStr for PauliHamiltonian {
    type Err = PiteError;

    fn from_str(s: &str) -> Result<Self> {
        PauliHamiltonian::parse(s)
    }
}
