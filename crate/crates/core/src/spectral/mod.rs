//! Asymptotic operators of model orbits: discretization, spectra, windings
//! and an independent Conley-Zehnder oracle.
//!
//! A loop of symmetric matrices `S(t)`, `t ∈ [0, 1)`, defines the operator
//! `A = -J₀ d/dt - S(t)` with `J₀ = [[0, -1], [1, 0]]`. It is discretized by
//! Fourier collocation on `N` (odd) nodes; vector index `2j + a` holds
//! component `a` at node `j`.

mod crossing;
mod fourier;
mod jacobi;
mod table;
mod winding;

pub use crossing::{cz_crossing, monodromy, monodromy_trace, MonodromyKind};
pub use fourier::{diff_entry, TrigInterpolant};
pub use jacobi::{jacobi_eigen, Eigen, SymMatrix};
pub use table::{Side, SpectralEntry, SpectralTable};
pub use winding::{winding, DiscreteLoop};

use crate::error::{Error, Result};

/// Default collocation grid for flow models.
pub const DEFAULT_GRID: usize = 101;

/// A symmetric 2×2 matrix `[[s11, s12], [s12, s22]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sym2 {
    pub s11: f64,
    pub s12: f64,
    pub s22: f64,
}

impl Sym2 {
    pub const fn new(s11: f64, s12: f64, s22: f64) -> Self {
        Sym2 { s11, s12, s22 }
    }

    pub fn scaled(self, k: f64) -> Self {
        Sym2::new(k * self.s11, k * self.s12, k * self.s22)
    }

    /// Operator norm (largest absolute eigenvalue).
    pub fn norm(&self) -> f64 {
        let mean = 0.5 * (self.s11 + self.s22);
        let rad = (0.5 * (self.s11 - self.s22)).hypot(self.s12);
        mean.abs() + rad
    }
}

/// Uniform samples of `S(t)` on `[0, 1)` for a simple orbit of period `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowLoop {
    samples: Vec<Sym2>,
    period: f64,
}

const SYMMETRY_TOL: f64 = 1e-12;

impl FlowLoop {
    pub fn new(samples: Vec<Sym2>, period: f64) -> Result<Self> {
        let n = samples.len();
        if n < 3 || n.is_multiple_of(2) {
            return Err(Error::InvalidLoop(format!(
                "sample count must be odd and at least 3, got {n}"
            )));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidLoop(format!("period must be positive, got {period}")));
        }
        if let Some(j) = samples
            .iter()
            .position(|s| !(s.s11.is_finite() && s.s12.is_finite() && s.s22.is_finite()))
        {
            return Err(Error::InvalidLoop(format!("sample {j} is not finite")));
        }
        Ok(FlowLoop { samples, period })
    }

    /// Builds a loop from full matrices, rejecting asymmetric samples.
    pub fn from_matrices(samples: &[[[f64; 2]; 2]], period: f64) -> Result<Self> {
        let mut out = Vec::with_capacity(samples.len());
        for (j, m) in samples.iter().enumerate() {
            let defect = (m[0][1] - m[1][0]).abs();
            if defect > SYMMETRY_TOL {
                return Err(Error::InvalidLoop(format!(
                    "sample {j} is not symmetric (defect {defect:e})"
                )));
            }
            out.push(Sym2::new(m[0][0], 0.5 * (m[0][1] + m[1][0]), m[1][1]));
        }
        Self::new(out, period)
    }

    /// Samples `S(t) = f(t)` at `n` uniform nodes.
    pub fn from_fn(n: usize, period: f64, f: impl Fn(f64) -> Sym2) -> Result<Self> {
        Self::new((0..n).map(|j| f(j as f64 / n as f64)).collect(), period)
    }

    pub fn constant(s: Sym2, n: usize) -> Result<Self> {
        Self::new(vec![s; n], 1.0)
    }

    pub fn samples(&self) -> &[Sym2] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn interpolant(&self) -> LoopInterpolant {
        let col = |f: fn(&Sym2) -> f64| -> Vec<f64> { self.samples.iter().map(f).collect() };
        LoopInterpolant {
            s11: TrigInterpolant::new(&col(|s| s.s11)),
            s12: TrigInterpolant::new(&col(|s| s.s12)),
            s22: TrigInterpolant::new(&col(|s| s.s22)),
        }
    }

    /// The loop `k·S(k t)` of the `k`-fold cover sampled on `grid` nodes.
    ///
    /// On the native grid this is an exact reindexing of the samples; other
    /// grids resample through the trigonometric interpolant.
    pub fn cover(&self, k: u32, grid: usize) -> Result<FlowLoop> {
        if k == 0 {
            return Err(Error::InvalidLoop("cover multiplicity must be positive".into()));
        }
        let kf = k as f64;
        let samples = if grid == self.len() {
            (0..grid).map(|j| self.samples[(k as usize * j) % grid].scaled(kf)).collect()
        } else {
            let it = self.interpolant();
            (0..grid)
                .map(|j| it.eval(kf * j as f64 / grid as f64).scaled(kf))
                .collect()
        };
        FlowLoop::new(samples, kf * self.period)
    }

    /// Upper bound for `sup_t ‖k·S(k t)‖`.
    pub fn cover_norm_bound(&self, k: u32) -> f64 {
        let it = self.interpolant();
        k as f64 * (it.s11.sup_bound() + it.s22.sup_bound() + it.s12.sup_bound())
    }
}

/// Trigonometric interpolant of a sampled loop.
#[derive(Debug, Clone)]
pub struct LoopInterpolant {
    s11: TrigInterpolant,
    s12: TrigInterpolant,
    s22: TrigInterpolant,
}

impl LoopInterpolant {
    pub fn eval(&self, t: f64) -> Sym2 {
        Sym2::new(self.s11.eval(t), self.s12.eval(t), self.s22.eval(t))
    }
}

/// The matrix of `-D⊗J₀ - blockdiag(S(t_j))`.
pub fn build_operator(lp: &FlowLoop) -> SymMatrix {
    let n = lp.len();
    let mut m = SymMatrix::zeros(2 * n);
    for j in 0..n {
        for k in 0..n {
            if j == k {
                continue;
            }
            let d = diff_entry(n, j, k);
            // -d·J₀ = [[0, d], [-d, 0]]
            m.set(2 * j, 2 * k + 1, d);
            m.set(2 * j + 1, 2 * k, -d);
        }
        let s = lp.samples[j];
        m.set(2 * j, 2 * j, -s.s11);
        m.set(2 * j, 2 * j + 1, -s.s12);
        m.set(2 * j + 1, 2 * j, -s.s12);
        m.set(2 * j + 1, 2 * j + 1, -s.s22);
    }
    m
}

/// Eigenpairs of the discretized operator, eigenvalues ascending.
pub fn eigen_decomposition(lp: &FlowLoop) -> Result<Eigen> {
    jacobi_eigen(build_operator(lp))
}

/// A windowed eigenvalue together with one normalized eigenvector.
#[derive(Debug, Clone)]
pub struct Mode {
    pub eigenvalue: f64,
    pub winding: i64,
    pub vector: Vec<f64>,
}

/// A spectral table with the eigenvectors it was computed from.
#[derive(Debug, Clone)]
pub struct ResolvedSpectrum {
    pub table: SpectralTable,
    pub modes: Vec<Mode>,
}

/// Multiplicity clustering tolerance for a window of half-width `w`.
pub fn cluster_tolerance(window: f64) -> f64 {
    1e-7 * window.max(1.0)
}

/// Spectrum of the operator of `lp` (already covered and sampled), trusted
/// on `|λ| ≤ window`.
///
/// Winding classes cut by the window edge are completed from just outside
/// it, so every winding in the result occurs exactly twice.
pub fn resolve_spectrum(lp: &FlowLoop, window: f64) -> Result<ResolvedSpectrum> {
    if !(window.is_finite() && window > 0.0) {
        return Err(Error::InvalidLoop(format!("window must be positive, got {window}")));
    }
    let grid = lp.len();
    let eig = eigen_decomposition(lp)?;
    let tol = cluster_tolerance(window);
    let too_coarse = |detail: String| {
        Error::Resolution(format!(
            "grid N = {grid} does not resolve the window {window}: {detail}; increase N"
        ))
    };

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for i in 0..eig.values.len() {
        match clusters.last_mut() {
            Some(c) if eig.values[i] - eig.values[*c.last().unwrap()] <= tol => c.push(i),
            _ => clusters.push(vec![i]),
        }
    }
    let value = |c: &[usize]| c.iter().map(|&i| eig.values[i]).sum::<f64>() / c.len() as f64;
    if let Some(c) = clusters.iter().find(|c| value(c).abs() <= tol) {
        return Err(Error::Degenerate(format!("0 is an eigenvalue (λ = {:e})", value(c))));
    }

    let inside: Vec<usize> =
        (0..clusters.len()).filter(|&c| value(&clusters[c]).abs() <= window).collect();
    let (Some(&first), Some(&last)) = (inside.first(), inside.last()) else {
        return Err(Error::Resolution(format!("no eigenvalue within window {window}")));
    };

    let mut windings: Vec<Option<i64>> = vec![None; clusters.len()];
    let wind_of = |c: usize, windings: &mut Vec<Option<i64>>| -> Result<i64> {
        if let Some(w) = windings[c] {
            return Ok(w);
        }
        let mut w = None;
        for &i in &clusters[c] {
            let wi = winding(&DiscreteLoop::from_interleaved(&eig.vectors[i])?)
                .map_err(|e| too_coarse(format!("eigenvalue {:.6}: {e}", eig.values[i])))?;
            if w.is_some_and(|w| w != wi) {
                return Err(too_coarse(format!(
                    "eigenvectors of {:.6} have different windings",
                    eig.values[i]
                )));
            }
            w = Some(wi);
        }
        windings[c] = w;
        Ok(w.unwrap())
    };

    let mut lo = first;
    let mut hi = last;
    for c in lo..=hi {
        wind_of(c, &mut windings)?;
    }
    let class_count = |w: &[Option<i64>], lo: usize, hi: usize, wc: i64| -> usize {
        (lo..=hi).filter(|&c| w[c] == Some(wc)).map(|c| clusters[c].len()).sum()
    };

    let w_lo = wind_of(lo, &mut windings)?;
    let have = class_count(&windings, lo, hi, w_lo);
    if have < 2 {
        if lo == 0 || wind_of(lo - 1, &mut windings)? != w_lo || have + clusters[lo - 1].len() != 2 {
            return Err(too_coarse(format!("winding {w_lo} at the lower edge is incomplete")));
        }
        lo -= 1;
    }
    let w_hi = wind_of(hi, &mut windings)?;
    let have = class_count(&windings, lo, hi, w_hi);
    if have < 2 {
        if hi + 1 == clusters.len()
            || wind_of(hi + 1, &mut windings)? != w_hi
            || have + clusters[hi + 1].len() != 2
        {
            return Err(too_coarse(format!("winding {w_hi} at the upper edge is incomplete")));
        }
        hi += 1;
    }

    let mut entries = Vec::with_capacity(hi - lo + 1);
    let mut modes = Vec::new();
    for c in lo..=hi {
        let w = windings[c].expect("winding computed");
        entries.push(SpectralEntry {
            eigenvalue: value(&clusters[c]),
            winding: w,
            multiplicity: clusters[c].len() as u32,
        });
        for &i in &clusters[c] {
            modes.push(Mode { eigenvalue: eig.values[i], winding: w, vector: eig.vectors[i].clone() });
        }
    }
    let table = SpectralTable::new(entries, window, grid)?;
    table.audit_complete().map_err(|e| too_coarse(e.to_string()))?;
    Ok(ResolvedSpectrum { table, modes })
}

/// Spectral table of the `k`-fold cover of `lp` on a `grid`-node grid.
pub fn flow_spectrum(lp: &FlowLoop, k: u32, grid: usize, window: f64) -> Result<SpectralTable> {
    Ok(resolve_spectrum(&lp.cover(k, grid)?, window)?.table)
}
