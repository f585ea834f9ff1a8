use num_complex::Complex64;
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::kernels::for_each_zero_base;
use crate::circuit::Mat2;
use crate::error::{PiteError, Result};

/// Single-qubit relaxation plus dephasing channel applied to every qubit.
///
/// Kraus operators: `diag(1, √(1-ε_r-ε_d))`, `√ε_r |0><1|`, `√ε_d |1><1|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    eps_r: f64,
    eps_d: f64,
}

impl NoiseModel {
    pub fn new(eps_r: f64, eps_d: f64) -> Result<Self> {
        let ok = |e: f64| (0.0..=1.0).contains(&e);
        if !ok(eps_r) || !ok(eps_d) || eps_r + eps_d > 1.0 {
            return Err(PiteError::InvalidArgument(format!(
                "noise parameters must lie in [0, 1] with eps_r + eps_d <= 1, got {eps_r}, {eps_d}"
            )));
        }
        Ok(NoiseModel { eps_r, eps_d })
    }

    pub fn eps_r(&self) -> f64 {
        self.eps_r
    }

    pub fn eps_d(&self) -> f64 {
        self.eps_d
    }

    pub fn is_identity(&self) -> bool {
        self.eps_r == 0.0 && self.eps_d == 0.0
    }

    /// Coherence damping factor `√(1-ε_r-ε_d)`.
    fn keep(&self) -> f64 {
        (1.0 - self.eps_r - self.eps_d).max(0.0).sqrt()
    }

    pub fn kraus(&self) -> [Mat2; 3] {
        let z = Complex64::new(0.0, 0.0);
        let r = |x: f64| Complex64::new(x, 0.0);
        [
            [[r(1.0), z], [z, r(self.keep())]],
            [[z, r(self.eps_r.sqrt())], [z, z]],
            [[z, z], [z, r(self.eps_d.sqrt())]],
        ]
    }

    /// `‖Σ E†E - I‖_max`.
    pub fn completeness_defect(&self) -> f64 {
        let mut acc = [[Complex64::new(0.0, 0.0); 2]; 2];
        for e in self.kraus() {
            for (i, row) in acc.iter_mut().enumerate() {
                for (j, v) in row.iter_mut().enumerate() {
                    *v += e[0][i].conj() * e[0][j] + e[1][i].conj() * e[1][j];
                }
            }
        }
        let mut worst: f64 = 0.0;
        for (i, row) in acc.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let id = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((v - id).norm());
            }
        }
        worst
    }

    /// Channel on qubit `q` of an `n`-qubit density matrix stored as
    /// `data[(row << n) | col]`.
    pub(crate) fn apply_dm(&self, data: &mut [Complex64], n: usize, q: usize) {
        if self.is_identity() {
            return;
        }
        let (cb, rb) = (1usize << q, 1usize << (n + q));
        let (r, s) = (self.eps_r, self.keep());
        for_each_zero_base(data.len(), &[q, n + q], |i| {
            let p11 = data[i | rb | cb];
            data[i] += p11 * r;
            data[i | rb | cb] = p11 * (1.0 - r);
            data[i | cb] *= s;
            data[i | rb] *= s;
        });
    }

    /// Samples one Kraus branch on qubit `q` of a pure state and renormalizes.
    pub(crate) fn sample_branch(&self, amps: &mut [Complex64], q: usize, rng: &mut dyn RngCore) {
        if self.is_identity() {
            return;
        }
        let b = 1usize << q;
        let mut p1 = 0.0;
        for_each_zero_base(amps.len(), &[q], |i| p1 += amps[i | b].norm_sqr());
        let u: f64 = rng.gen();
        let (p_relax, p_deph) = (self.eps_r * p1, self.eps_d * p1);
        if u < p_relax {
            let norm = p1.sqrt();
            for_each_zero_base(amps.len(), &[q], |i| {
                amps[i] = amps[i | b] / norm;
                amps[i | b] = Complex64::new(0.0, 0.0);
            });
        } else if u < p_relax + p_deph {
            let norm = p1.sqrt();
            for_each_zero_base(amps.len(), &[q], |i| {
                amps[i] = Complex64::new(0.0, 0.0);
                amps[i | b] /= norm;
            });
        } else {
            let norm = (1.0 - p_relax - p_deph).sqrt();
            let s = self.keep();
            for_each_zero_base(amps.len(), &[q], |i| {
                amps[i] /= norm;
                amps[i | b] *= s / norm;
            });
        }
    }
}
