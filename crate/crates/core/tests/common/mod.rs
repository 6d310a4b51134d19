//! Independent oracles shared by the integration and acceptance tests.

#![allow(dead_code)]

use std::path::PathBuf;

use holo::buildings::{Puncture, Sign};
use holo::index::threshold;
use holo::orbits::{Catalog, OrbitModel, OrbitRef};
use holo::spectral::Side;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture(name: &str) -> String {
    fixture_dir().join(name).to_string_lossy().into_owned()
}

/// Conley-Zehnder index at a spectral cut. Unconstrained flow orbits go
/// through the crossing-form integration instead of the spectrum.
pub fn mu(cat: &Catalog, r: &OrbitRef, cut: f64) -> i64 {
    let flow = matches!(cat.orbit(&r.simple).unwrap().model, OrbitModel::Flow { .. });
    if flow && cut == 0.0 {
        cat.cz_crossing(r).unwrap()
    } else {
        cat.cz_index(r, cut).unwrap().mu_cz
    }
}

/// Breaking orbits by parity alone: even simple orbits, and double covers
/// that are even over an odd simple orbit.
pub fn oracle_candidates(cat: &Catalog) -> Vec<OrbitRef> {
    let mut out = Vec::new();
    for o in cat.orbits() {
        let simple = OrbitRef::new(o.id.clone(), 1);
        if mu(cat, &simple, 0.0).rem_euclid(2) == 0 {
            out.push(simple);
            continue;
        }
        let double = OrbitRef::new(o.id.clone(), 2);
        if cat.has_cover(&double) && mu(cat, &double, 0.0).rem_euclid(2) == 0 {
            out.push(double);
        }
    }
    out
}

/// `(ind, 2 c_N)` of a genus 0 curve with `rel_c1 = 0`, the latter from
/// `2c_N = ind - 2 + #Γ₀`.
pub fn oracle_side(cat: &Catalog, ps: &[Puncture]) -> (i64, i64) {
    let mut ind = ps.len() as i64 - 2;
    let mut even = 0;
    for p in ps {
        let m = mu(cat, &p.orbit, threshold(p.sign, p.constraint));
        ind += if p.sign == Sign::Pos { m } else { -m };
        if m.rem_euclid(2) == 0 {
            even += 1;
        }
    }
    (ind, ind - 2 + even)
}

/// Extremal controlling winding of an end with no constraint override.
fn extremal(cat: &Catalog, p: &Puncture) -> i64 {
    let side = if p.sign == Sign::Pos { Side::Minus } else { Side::Plus };
    cat.alpha(&p.orbit, threshold(p.sign, p.constraint), side).unwrap()
}

/// Same-sign external ends over the simple orbit of a breaking end, on
/// either level, must share its cover and extremal winding.
pub fn oracle_breaking_compatible(cat: &Catalog, asym: &[Puncture], breaking: &Puncture) -> bool {
    asym.iter()
        .filter(|p| p.sign == breaking.sign && p.orbit.simple == breaking.orbit.simple)
        .all(|p| p.orbit.k == breaking.orbit.k && extremal(cat, p) == extremal(cat, breaking))
}

/// Every `(top, bottom, breaking orbit)` with both sides of index 1 and
/// `c_N = 0` and compatible breaking ends, by exhaustive search.
pub fn oracle_limits(cat: &Catalog, asym: &[Puncture]) -> Vec<(Vec<usize>, Vec<usize>, OrbitRef)> {
    let n = asym.len();
    let mut out = Vec::new();
    for delta in oracle_candidates(cat) {
        for mask in 0..1usize << n {
            let top: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
            let bottom: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 0).collect();
            let mut tp: Vec<Puncture> = top.iter().map(|&j| asym[j].clone()).collect();
            tp.push(Puncture::new(Sign::Neg, delta.clone()));
            let mut bp: Vec<Puncture> = bottom.iter().map(|&j| asym[j].clone()).collect();
            bp.push(Puncture::new(Sign::Pos, delta.clone()));
            let compatible = oracle_breaking_compatible(cat, asym, &tp[tp.len() - 1])
                && oracle_breaking_compatible(cat, asym, &bp[bp.len() - 1]);
            if compatible && oracle_side(cat, &tp) == (1, 0) && oracle_side(cat, &bp) == (1, 0) {
                out.push((top, bottom, delta.clone()));
            }
        }
    }
    out.sort();
    out
}
