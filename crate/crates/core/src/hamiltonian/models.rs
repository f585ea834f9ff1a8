//! The three model systems: 2-qubit H2, 6-qubit LiH and the cyclic Ising chain.

use super::{PauliAxis, PauliHamiltonian};
use crate::error::{PiteError, Result};

/// One row of the H2 coefficient table, kept as the tabulated decimal strings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct H2Row {
    pub r: &'static str,
    pub c0: &'static str,
    pub c1: &'static str,
    pub c2: &'static str,
    pub c3: &'static str,
}

impl H2Row {
    pub fn distance(&self) -> f64 {
        parse_cell(self.r)
    }

    /// `(c0, c1, c2, c3)` as floats.
    pub fn coefficients(&self) -> [f64; 4] {
        [self.c0, self.c1, self.c2, self.c3].map(parse_cell)
    }
}

fn parse_cell(s: &str) -> f64 {
    s.parse().expect("tabulated cell is a valid float")
}

const H2_TABLE: [H2Row; 9] = [
    H2Row {
        r: "0.35",
        c0: "7.01273E-01",
        c1: "-7.47416E-01",
        c2: "1.31036E-02",
        c3: "1.62573E-01",
    },
    H2Row {
        r: "0.45",
        c0: "2.67547E-01",
        c1: "-6.33890E-01",
        c2: "1.27192E-02",
        c3: "1.66621E-01",
    },
    H2Row {
        r: "0.55",
        c0: "-1.83734E-02",
        c1: "-5.36489E-01",
        c2: "1.23003E-02",
        c3: "1.71244E-01",
    },
    H2Row {
        r: "0.65",
        c0: "-2.13932E-01",
        c1: "-4.55433E-01",
        c2: "1.18019E-02",
        c3: "1.76318E-01",
    },
    H2Row {
        r: "0.75",
        c0: "-3.49833E-01",
        c1: "-3.88748E-01",
        c2: "1.11772E-02",
        c3: "1.81771E-01",
    },
    H2Row {
        r: "0.85",
        c0: "-4.45424E-01",
        c1: "-3.33747E-01",
        c2: "1.04061E-02",
        c3: "1.87562E-01",
    },
    H2Row {
        r: "1.05",
        c0: "-5.62600E-01",
        c1: "-2.48783E-01",
        c2: "8.50998E-03",
        c3: "1.99984E-01",
    },
    H2Row {
        r: "1.25",
        c0: "-6.23223E-01",
        c1: "-1.86173E-01",
        c2: "6.45563E-03",
        c3: "2.13102E-01",
    },
    H2Row {
        r: "1.45",
        c0: "-6.52661E-01",
        c1: "-1.38977E-01",
        c2: "4.59760E-03",
        c3: "2.26294E-01",
    },
];

/// The tabulated interatomic distances in Å.
pub fn h2_distances() -> Vec<f64> {
    H2_TABLE.iter().map(H2Row::distance).collect()
}

pub fn h2_row(r: f64) -> Result<H2Row> {
    H2_TABLE
        .iter()
        .find(|row| (row.distance() - r).abs() < 1e-9)
        .copied()
        .ok_or_else(|| PiteError::UntabulatedDistance {
            r,
            available: H2_TABLE.iter().map(|row| row.r).collect::<Vec<_>>().join(", "),
        })
}

/// `c0 + c1 Z1 + c1 Z2 + c2 Z1Z2 + c3 X1X2` at a tabulated distance.
pub fn build_h2(r: f64) -> Result<PauliHamiltonian> {
    use PauliAxis::*;
    let [c0, c1, c2, c3] = h2_row(r)?.coefficients();
    PauliHamiltonian::from_raw(
        2,
        [(c1, vec![Z, I]), (c1, vec![I, Z]), (c2, vec![Z, Z]), (c3, vec![X, X])],
        c0,
    )
}

pub const LIH_HAMILTONIAN_TEXT: &str = include_str!("../../data/lih.ham");
const LIH_GROUPS_TEXT: &str = include_str!("../../data/lih_groups.txt");

/// 6-qubit LiH Hamiltonian: 61 non-identity terms plus the identity offset.
pub fn build_lih() -> PauliHamiltonian {
    PauliHamiltonian::parse(LIH_HAMILTONIAN_TEXT).expect("embedded LiH table parses")
}

/// The shipped 22-block LiH grouping, in GroupSpec file format.
pub fn lih_groups_text() -> &'static str {
    LIH_GROUPS_TEXT
}

/// A term of the Ising chain tagged with the site whose local block owns it.
#[derive(Clone, Debug, PartialEq)]
pub struct IsingSiteTerm {
    pub site: usize,
    pub coeff: f64,
    pub axes: Vec<PauliAxis>,
}

/// Per-site terms `-J Z_j Z_{j+1}`, `-Jg X_j`, `-Jh Z_j` in site order,
/// zero coefficients included.
pub fn ising_site_terms(n: usize, j: f64, g: f64, h: f64) -> Result<Vec<IsingSiteTerm>> {
    if n < 3 {
        return Err(PiteError::InvalidArgument(format!(
            "cyclic Ising chain needs n >= 3, got {n}"
        )));
    }
    let single = |q: usize, a: PauliAxis| {
        let mut axes = vec![PauliAxis::I; n];
        axes[q] = a;
        axes
    };
    let mut out = Vec::with_capacity(3 * n);
    for site in 0..n {
        let mut zz = single(site, PauliAxis::Z);
        zz[(site + 1) % n] = PauliAxis::Z;
        out.push(IsingSiteTerm {
            site,
            coeff: -j,
            axes: zz,
        });
        out.push(IsingSiteTerm {
            site,
            coeff: -j * g,
            axes: single(site, PauliAxis::X),
        });
        out.push(IsingSiteTerm {
            site,
            coeff: -j * h,
            axes: single(site, PauliAxis::Z),
        });
    }
    Ok(out)
}

/// `H = -J Σ_j (Z_j Z_{j+1} + g X_j + h Z_j)` on a ring of `n >= 3` sites.
pub fn build_ising(n: usize, j: f64, g: f64, h: f64) -> Result<PauliHamiltonian> {
    let terms = ising_site_terms(n, j, g, h)?;
    PauliHamiltonian::from_raw(n, terms.into_iter().map(|t| (t.coeff, t.axes)), 0.0)
}
