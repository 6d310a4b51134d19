use crate::error::{Error, Result};

use super::cluster_tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Minus,
    Plus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralEntry {
    pub eigenvalue: f64,
    pub winding: i64,
    pub multiplicity: u32,
}

/// Eigenvalues of an asymptotic operator with windings and multiplicities,
/// trusted on `|λ| ≤ window`. `grid` is 0 for tables that were not computed.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralTable {
    entries: Vec<SpectralEntry>,
    window: f64,
    grid: usize,
}

impl SpectralTable {
    /// Checks ordering, distinctness, positivity of multiplicities and
    /// monotonicity of windings.
    pub fn new(entries: Vec<SpectralEntry>, window: f64, grid: usize) -> Result<Self> {
        if window.is_nan() || window <= 0.0 {
            return Err(Error::Catalog(format!("window must be positive, got {window}")));
        }
        let tol = cluster_tolerance(window);
        for e in &entries {
            if !e.eigenvalue.is_finite() {
                return Err(Error::Catalog("non-finite eigenvalue".into()));
            }
            if e.multiplicity == 0 {
                return Err(Error::Catalog(format!("eigenvalue {} has multiplicity 0", e.eigenvalue)));
            }
        }
        for w in entries.windows(2) {
            if w[1].eigenvalue - w[0].eigenvalue <= tol {
                return Err(Error::Catalog(format!(
                    "eigenvalues {} and {} are not sorted and distinct",
                    w[0].eigenvalue, w[1].eigenvalue
                )));
            }
            if w[1].winding < w[0].winding {
                return Err(Error::Catalog(format!(
                    "winding decreases from {} to {} between eigenvalues {} and {}",
                    w[0].winding, w[1].winding, w[0].eigenvalue, w[1].eigenvalue
                )));
            }
        }
        Ok(SpectralTable { entries, window, grid })
    }

    pub fn entries(&self) -> &[SpectralEntry] {
        &self.entries
    }

    pub fn window(&self) -> f64 {
        self.window
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn tolerance(&self) -> f64 {
        cluster_tolerance(self.window)
    }

    /// Winding classes as `(winding, total multiplicity)` in order.
    pub fn classes(&self) -> Vec<(i64, u32)> {
        let mut out: Vec<(i64, u32)> = Vec::new();
        for e in &self.entries {
            match out.last_mut() {
                Some((w, m)) if *w == e.winding => *m += e.multiplicity,
                _ => out.push((e.winding, e.multiplicity)),
            }
        }
        out
    }

    /// Every winding class carries multiplicity exactly two.
    pub fn audit_complete(&self) -> Result<()> {
        match self.classes().into_iter().find(|&(_, m)| m != 2) {
            Some((w, m)) => Err(Error::Resolution(format!(
                "winding {w} carries multiplicity {m}, expected 2"
            ))),
            None => Ok(()),
        }
    }

    /// Interior winding classes carry multiplicity two; the two extreme
    /// classes may be cut by the window and carry at most two.
    pub fn audit_stored(&self) -> Result<()> {
        let classes = self.classes();
        let n = classes.len();
        for (i, &(w, m)) in classes.iter().enumerate() {
            let edge = i == 0 || i + 1 == n;
            if m > 2 || (!edge && m != 2) {
                return Err(Error::Catalog(format!(
                    "winding {w} carries multiplicity {m}, expected 2"
                )));
            }
        }
        Ok(())
    }

    /// Keeps `|λ| ≤ window`, completing winding classes cut by the edge from
    /// the stored entries when possible.
    pub fn clipped(&self, window: f64) -> SpectralTable {
        let window = window.min(self.window);
        let inside: Vec<usize> =
            (0..self.entries.len()).filter(|&i| self.entries[i].eigenvalue.abs() <= window).collect();
        let (Some(&first), Some(&last)) = (inside.first(), inside.last()) else {
            return SpectralTable { entries: Vec::new(), window, grid: self.grid };
        };
        let (mut lo, mut hi) = (first, last);
        let class_mult = |lo: usize, hi: usize, w: i64| -> u32 {
            self.entries[lo..=hi].iter().filter(|e| e.winding == w).map(|e| e.multiplicity).sum()
        };
        let w = self.entries[lo].winding;
        if class_mult(lo, hi, w) < 2 && lo > 0 && self.entries[lo - 1].winding == w {
            lo -= 1;
        }
        let w = self.entries[hi].winding;
        if class_mult(lo, hi, w) < 2 && hi + 1 < self.entries.len() && self.entries[hi + 1].winding == w {
            hi += 1;
        }
        SpectralTable { entries: self.entries[lo..=hi].to_vec(), window, grid: self.grid }
    }

    /// `Side::Minus`: largest winding over eigenvalues below `threshold`.
    /// `Side::Plus`: smallest winding over eigenvalues above it.
    pub fn alpha(&self, threshold: f64, side: Side) -> Result<i64> {
        self.check_threshold(threshold)?;
        let found = match side {
            Side::Minus => self.entries.iter().rev().find(|e| e.eigenvalue < threshold),
            Side::Plus => self.entries.iter().find(|e| e.eigenvalue > threshold),
        };
        found.map(|e| e.winding).ok_or_else(|| {
            Error::Resolution(format!(
                "no tabulated eigenvalue on the {} side of {threshold} (window {})",
                if side == Side::Minus { "lower" } else { "upper" },
                self.window
            ))
        })
    }

    /// Total multiplicity of eigenvalues in the open interval `(lo, hi)`.
    pub fn count_between(&self, lo: f64, hi: f64) -> u32 {
        self.entries
            .iter()
            .filter(|e| e.eigenvalue > lo && e.eigenvalue < hi)
            .map(|e| e.multiplicity)
            .sum()
    }

    pub fn hits(&self, x: f64) -> bool {
        let tol = self.tolerance();
        self.entries.iter().any(|e| (e.eigenvalue - x).abs() <= tol)
    }

    fn check_threshold(&self, t: f64) -> Result<()> {
        if self.hits(t) {
            return Err(Error::DegenerateConstraint { orbit: String::new(), threshold: t });
        }
        if t.abs() > self.window {
            return Err(Error::Resolution(format!(
                "threshold {t} lies outside the trusted window {}",
                self.window
            )));
        }
        Ok(())
    }
}
