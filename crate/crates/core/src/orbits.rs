//! Orbit catalog and the integer invariants of (covers of) periodic orbits.
//!
//! All winding numbers, α± and Conley-Zehnder indices are relative to the
//! trivialization implicit in each orbit's model coordinates. Parities are
//! trivialization independent; comparisons of the other integers across
//! orbits are meaningful only under one consistent convention.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::par::Execution;
use crate::spectral::{self, FlowLoop, MonodromyKind, Side, SpectralTable};

/// A `k`-fold cover of a simple orbit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitRef {
    pub simple: String,
    pub k: u32,
}

impl OrbitRef {
    pub fn new(simple: impl Into<String>, k: u32) -> Self {
        OrbitRef { simple: simple.into(), k }
    }
}

impl fmt::Display for OrbitRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.simple, self.k)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OrbitModel {
    /// Sampled linearized flow, solved on a collocation grid of `grid` nodes.
    Flow { lp: FlowLoop, grid: usize },
    /// Explicit tables per cover multiplicity.
    Table(BTreeMap<u32, SpectralTable>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimpleOrbit {
    pub id: String,
    pub period: f64,
    pub model: OrbitModel,
    pub hyperbolic: Option<bool>,
}

/// α±, parity and Conley-Zehnder index at a spectral cut.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSummary {
    pub alpha_minus: i64,
    pub alpha_plus: i64,
    pub parity: u8,
    pub mu_cz: i64,
    pub threshold: f64,
}

/// An immutable set of simple orbits. Flow spectra are computed on demand
/// and memoized; the memo is invisible to callers.
pub struct Catalog {
    orbits: BTreeMap<String, SimpleOrbit>,
    cache: RwLock<HashMap<OrbitRef, Arc<SpectralTable>>>,
}

impl Clone for Catalog {
    fn clone(&self) -> Self {
        Catalog { orbits: self.orbits.clone(), cache: RwLock::default() }
    }
}

impl fmt::Debug for Catalog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Catalog").field("orbits", &self.orbits).finish()
    }
}

impl PartialEq for Catalog {
    fn eq(&self, other: &Self) -> bool {
        self.orbits == other.orbits
    }
}

/// Whether an eigenfunction of winding `w` on a `k`-fold cover is simply
/// covered, i.e. `gcd(k, w) = 1` with `gcd(k, 0) = k`.
pub fn is_simply_covered_eigenfunction(k: u32, w: i64) -> bool {
    gcd(k as u64, w.unsigned_abs()) == 1
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn tag_orbit(e: Error, orbit: &OrbitRef) -> Error {
    match e {
        Error::DegenerateConstraint { threshold, .. } => {
            Error::DegenerateConstraint { orbit: orbit.to_string(), threshold }
        }
        Error::Resolution(m) => Error::Resolution(format!("{orbit}: {m}")),
        Error::Degenerate(m) => Error::Degenerate(format!("{orbit}: {m}")),
        other => other,
    }
}

impl Catalog {
    /// Validates and audits the orbits (unique ids, stored tables, even
    /// covers flagged hyperbolic, consistent flags on flow models).
    pub fn new(orbits: Vec<SimpleOrbit>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for o in orbits {
            if !(o.period.is_finite() && o.period > 0.0) {
                return Err(Error::Catalog(format!("orbit {}: period must be positive", o.id)));
            }
            if map.contains_key(&o.id) {
                return Err(Error::Catalog(format!("duplicate orbit id {}", o.id)));
            }
            map.insert(o.id.clone(), o);
        }
        let cat = Catalog { orbits: map, cache: RwLock::default() };
        for o in cat.orbits.values() {
            cat.audit(o)?;
        }
        Ok(cat)
    }

    fn audit(&self, o: &SimpleOrbit) -> Result<()> {
        match &o.model {
            OrbitModel::Table(covers) => {
                if covers.is_empty() {
                    return Err(Error::Catalog(format!("orbit {}: no cover tables", o.id)));
                }
                for (&k, t) in covers {
                    if k == 0 {
                        return Err(Error::Catalog(format!("orbit {}: cover 0", o.id)));
                    }
                    t.audit_stored()
                        .map_err(|e| Error::Catalog(format!("orbit {}^{k}: {e}", o.id)))?;
                    if t.hits(0.0) {
                        return Err(Error::Catalog(format!("orbit {}^{k} is degenerate", o.id)));
                    }
                    let r = OrbitRef::new(o.id.clone(), k);
                    let s = self.summarize(&r, t, 0.0)?;
                    if s.parity == 0 && o.hyperbolic == Some(false) {
                        return Err(Error::Catalog(format!(
                            "orbit {r} is even but flagged non-hyperbolic"
                        )));
                    }
                }
            }
            OrbitModel::Flow { lp, grid } => {
                if *grid < 3 || grid % 2 == 0 {
                    return Err(Error::Catalog(format!(
                        "orbit {}: grid must be odd and at least 3, got {grid}",
                        o.id
                    )));
                }
                let kind = MonodromyKind::of_trace(spectral::monodromy_trace(lp, 1))
                    .map_err(|e| Error::Catalog(format!("orbit {}: {e}", o.id)))?;
                if let Some(h) = o.hyperbolic {
                    if h != kind.is_hyperbolic() {
                        return Err(Error::Catalog(format!(
                            "orbit {}: hyperbolic flag {h} contradicts its monodromy",
                            o.id
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn orbits(&self) -> impl Iterator<Item = &SimpleOrbit> {
        self.orbits.values()
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn orbit(&self, id: &str) -> Result<&SimpleOrbit> {
        self.orbits.get(id).ok_or_else(|| Error::Catalog(format!("unknown orbit {id}")))
    }

    /// Whether spectral data exists for this cover.
    pub fn has_cover(&self, r: &OrbitRef) -> bool {
        match self.orbits.get(&r.simple).map(|o| &o.model) {
            Some(OrbitModel::Flow { .. }) => r.k >= 1,
            Some(OrbitModel::Table(t)) => t.contains_key(&r.k),
            None => false,
        }
    }

    /// Half-width of a window guaranteed to contain eigenvalues on both
    /// sides of `threshold`.
    fn window_for(lp: &FlowLoop, k: u32, threshold: f64) -> f64 {
        threshold.abs() + 2.0 * PI + 2.0 * lp.cover_norm_bound(k) + 1.0
    }

    /// The spectral table used to answer queries at `threshold`.
    pub fn table_at(&self, r: &OrbitRef, threshold: f64) -> Result<Arc<SpectralTable>> {
        if r.k == 0 {
            return Err(Error::Catalog(format!("orbit {r}: cover multiplicity must be positive")));
        }
        let o = self.orbit(&r.simple)?;
        match &o.model {
            OrbitModel::Table(covers) => covers
                .get(&r.k)
                .map(|t| Arc::new(t.clone()))
                .ok_or_else(|| Error::Catalog(format!("orbit {} has no table for cover {}", o.id, r.k))),
            OrbitModel::Flow { lp, grid } => {
                let need = Self::window_for(lp, r.k, threshold);
                if let Some(t) = self.cache.read().expect("cache lock").get(r) {
                    if t.window() >= need {
                        return Ok(t.clone());
                    }
                }
                let t = Arc::new(
                    spectral::flow_spectrum(lp, r.k, *grid, need).map_err(|e| tag_orbit(e, r))?,
                );
                self.cache.write().expect("cache lock").insert(r.clone(), t.clone());
                Ok(t)
            }
        }
    }

    /// The spectrum of `r` restricted to `|λ| ≤ window`.
    pub fn spectrum_of(&self, r: &OrbitRef, window: f64) -> Result<SpectralTable> {
        if window.is_nan() || window <= 0.0 {
            return Err(Error::Catalog(format!("window must be positive, got {window}")));
        }
        let o = self.orbit(&r.simple)?;
        match &o.model {
            OrbitModel::Flow { lp, grid } => {
                if r.k == 0 {
                    return Err(Error::Catalog("cover multiplicity must be positive".into()));
                }
                spectral::flow_spectrum(lp, r.k, *grid, window).map_err(|e| tag_orbit(e, r))
            }
            OrbitModel::Table(_) => Ok(self.table_at(r, 0.0)?.clipped(window)),
        }
    }

    /// As [`Catalog::spectrum_of`] with an explicit collocation grid.
    pub fn spectrum_with_grid(&self, r: &OrbitRef, window: f64, grid: usize) -> Result<SpectralTable> {
        match &self.orbit(&r.simple)?.model {
            OrbitModel::Flow { lp, .. } => {
                spectral::flow_spectrum(lp, r.k, grid, window).map_err(|e| tag_orbit(e, r))
            }
            OrbitModel::Table(_) => self.spectrum_of(r, window),
        }
    }

    /// Spectra for many covers at once.
    pub fn spectra(&self, refs: &[OrbitRef], window: f64, exec: Execution) -> Vec<Result<SpectralTable>> {
        exec.map(refs, |r| self.spectrum_of(r, window))
    }

    pub fn alpha(&self, r: &OrbitRef, threshold: f64, side: Side) -> Result<i64> {
        self.table_at(r, threshold)?.alpha(threshold, side).map_err(|e| tag_orbit(e, r))
    }

    fn summarize(&self, r: &OrbitRef, t: &SpectralTable, threshold: f64) -> Result<SpectralSummary> {
        let am = t.alpha(threshold, Side::Minus).map_err(|e| tag_orbit(e, r))?;
        let ap = t.alpha(threshold, Side::Plus).map_err(|e| tag_orbit(e, r))?;
        let p = ap - am;
        if !(0..=1).contains(&p) {
            return Err(Error::Inconsistent(format!(
                "orbit {r}: parity α+ - α- = {p} at threshold {threshold}"
            )));
        }
        let mu = 2 * am + p;
        debug_assert_eq!(mu, 2 * ap - p);
        Ok(SpectralSummary { alpha_minus: am, alpha_plus: ap, parity: p as u8, mu_cz: mu, threshold })
    }

    /// Constrained Conley-Zehnder data at a signed threshold (`-c` for
    /// positive punctures, `+c` for negative ones).
    ///
    /// The result is cross-checked against the eigenvalue-counting form
    /// relative to threshold 0.
    pub fn cz_index(&self, r: &OrbitRef, threshold: f64) -> Result<SpectralSummary> {
        let t = self.table_at(r, threshold)?;
        let s = self.summarize(r, &t, threshold)?;
        if threshold != 0.0 {
            let s0 = self.summarize(r, &t, 0.0)?;
            let counted = if threshold < 0.0 {
                s0.mu_cz - t.count_between(threshold, 0.0) as i64
            } else {
                s0.mu_cz + t.count_between(0.0, threshold) as i64
            };
            if counted != s.mu_cz {
                return Err(Error::Internal(format!(
                    "orbit {r}: winding form gives μ = {} but counting form gives {counted} at threshold {threshold}",
                    s.mu_cz
                )));
            }
        }
        Ok(s)
    }

    pub fn parity(&self, r: &OrbitRef) -> Result<u8> {
        Ok(self.cz_index(r, 0.0)?.parity)
    }

    pub fn is_hyperbolic(&self, id: &str) -> Result<bool> {
        let o = self.orbit(id)?;
        match &o.model {
            OrbitModel::Flow { lp, .. } => {
                Ok(MonodromyKind::of_trace(spectral::monodromy_trace(lp, 1))?.is_hyperbolic())
            }
            OrbitModel::Table(_) => o.hyperbolic.ok_or_else(|| {
                Error::Catalog(format!("table orbit {id} needs a hyperbolic flag for this query"))
            }),
        }
    }

    /// Whether `r` is the double of an odd hyperbolic orbit while itself
    /// being even.
    pub fn is_bad(&self, r: &OrbitRef) -> Result<bool> {
        if r.k == 0 || r.k % 2 == 1 {
            return Ok(false);
        }
        let hyperbolic = self.is_hyperbolic(&r.simple)?;
        let half = OrbitRef::new(r.simple.clone(), r.k / 2);
        Ok(hyperbolic && self.parity(&half)? == 1 && self.parity(r)? == 0)
    }

    /// Independent index of a flow-model cover from its linearized flow.
    pub fn cz_crossing(&self, r: &OrbitRef) -> Result<i64> {
        match &self.orbit(&r.simple)?.model {
            OrbitModel::Flow { lp, .. } => spectral::cz_crossing(lp, r.k).map_err(|e| tag_orbit(e, r)),
            OrbitModel::Table(_) => {
                Err(Error::Catalog(format!("orbit {} has no flow model", r.simple)))
            }
        }
    }
}
