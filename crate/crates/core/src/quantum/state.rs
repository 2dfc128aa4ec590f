use serde::{Deserialize, Serialize};

use super::{eigenvalues, max_abs, Mat};
use crate::error::{Error, Result};

/// Tolerance for symmetry, positivity, trace and completeness checks.
pub const TOL: f64 = 1e-9;

fn check_square(a: &[Vec<f64>], dim: usize, what: &str) -> Result<()> {
    if dim == 0 {
        return Err(Error::input(format!("{what}: dimension must be positive")));
    }
    if a.len() != dim || a.iter().any(|r| r.len() != dim) {
        return Err(Error::dim(format!("{what}: expected a {dim}×{dim} matrix")));
    }
    if a.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Numeric(format!("{what}: non-finite entry")));
    }
    for i in 0..dim {
        for j in 0..i {
            if (a[i][j] - a[j][i]).abs() > TOL {
                return Err(Error::input(format!("{what}: not symmetric at ({i}, {j})")));
            }
        }
    }
    Ok(())
}

/// Real `r × r` PSD matrix of trace 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDensity")]
pub struct DensityMatrix {
    dim: usize,
    entries: Mat,
}

#[derive(Deserialize)]
struct RawDensity {
    dim: usize,
    entries: Mat,
}

impl TryFrom<RawDensity> for DensityMatrix {
    type Error = Error;
    fn try_from(raw: RawDensity) -> Result<Self> {
        Self::new(raw.dim, raw.entries)
    }
}

impl DensityMatrix {
    pub fn new(dim: usize, entries: Mat) -> Result<Self> {
        check_square(&entries, dim, "state")?;
        let tr: f64 = (0..dim).map(|i| entries[i][i]).sum();
        if (tr - 1.0).abs() > TOL {
            return Err(Error::input(format!("state: trace {tr} is not 1")));
        }
        if eigenvalues(&entries)[0] < -TOL {
            return Err(Error::input("state: not positive semidefinite"));
        }
        Ok(Self { dim, entries })
    }

    /// `|ψ⟩⟨ψ|` for a unit vector `ψ`.
    pub fn pure(psi: &[f64]) -> Result<Self> {
        let n = psi.len();
        Self::new(n, (0..n).map(|i| (0..n).map(|j| psi[i] * psi[j]).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &Mat {
        &self.entries
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PovmElement {
    pub label: f64,
    pub operator: Mat,
}

/// Labeled PSD operators summing to the identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPovm")]
pub struct Povm {
    dim: usize,
    elements: Vec<PovmElement>,
}

#[derive(Deserialize)]
struct RawPovm {
    dim: usize,
    elements: Vec<PovmElement>,
}

impl TryFrom<RawPovm> for Povm {
    type Error = Error;
    fn try_from(raw: RawPovm) -> Result<Self> {
        Self::new(raw.dim, raw.elements)
    }
}

impl Povm {
    /// Validates the elements. A completeness deficiency `I − ΣE` of size at
    /// most [`TOL`] that is PSD is added as a 0-labeled element.
    pub fn new(dim: usize, mut elements: Vec<PovmElement>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::input("POVM has no elements"));
        }
        for e in &elements {
            if !(e.label >= 0.0 && e.label.is_finite()) {
                return Err(Error::input(format!("POVM label {} is not a nonnegative number", e.label)));
            }
            check_square(&e.operator, dim, "POVM element")?;
            if eigenvalues(&e.operator)[0] < -TOL {
                return Err(Error::input("POVM element is not positive semidefinite"));
            }
        }
        let mut deficit: Mat = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        for e in &elements {
            for i in 0..dim {
                for j in 0..dim {
                    deficit[i][j] -= e.operator[i][j];
                }
            }
        }
        let size = max_abs(&deficit);
        if size > TOL {
            return Err(Error::input(format!("POVM elements miss the identity by {size:e}")));
        }
        if size > 0.0 && eigenvalues(&deficit)[0] >= 0.0 {
            elements.push(PovmElement {
                label: 0.0,
                operator: deficit,
            });
        }
        Ok(Self { dim, elements })
    }

    /// The single-outcome measurement `{θ: I}`.
    pub fn trivial(dim: usize, label: f64) -> Result<Self> {
        let id = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Self::new(dim, vec![PovmElement { label, operator: id }])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[PovmElement] {
        &self.elements
    }

    /// `Σ_θ θ E_θ`.
    pub fn observable(&self) -> Mat {
        let mut out = vec![vec![0.0; self.dim]; self.dim];
        for e in &self.elements {
            for (ro, re) in out.iter_mut().zip(&e.operator) {
                for (o, x) in ro.iter_mut().zip(re) {
                    *o += e.label * x;
                }
            }
        }
        out
    }

    pub fn max_label(&self) -> f64 {
        self.elements.iter().map(|e| e.label).fold(0.0, f64::max)
    }
}
