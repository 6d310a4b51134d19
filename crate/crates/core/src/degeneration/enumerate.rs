use super::validate_nice;
use crate::buildings::{BreakingPair, Building, Component, Puncture, PunctureId, Sign};
use crate::error::{Error, Result};
use crate::index::{self, threshold};
use crate::orbits::{Catalog, OrbitModel, OrbitRef};
use crate::par::Execution;
use crate::spectral::Side;

/// One admissible broken limit: the external punctures split between a
/// top curve (carrying the negative breaking puncture) and a bottom curve.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LimitType {
    /// Positions in the asymptotics list.
    pub top: Vec<usize>,
    pub bottom: Vec<usize>,
    pub breaking_orbit: OrbitRef,
    pub top_index: i64,
    pub bottom_index: i64,
    pub top_c_n: i64,
    pub bottom_c_n: i64,
}

fn with_extremal_windings(cat: &Catalog, ps: &[Puncture]) -> Result<Vec<Puncture>> {
    ps.iter()
        .map(|p| {
            let side = if p.sign == Sign::Pos { Side::Minus } else { Side::Plus };
            let w = cat.alpha(&p.orbit, threshold(p.sign, p.constraint), side)?;
            Ok(p.clone().with_winding(w))
        })
        .collect()
}

impl LimitType {
    /// The two-level building `top` over `bottom` with controlling windings
    /// at their extremal values and distinct image classes.
    pub fn materialize(&self, cat: &Catalog, asymptotics: &[Puncture]) -> Result<Building> {
        let pick = |ix: &[usize]| -> Vec<Puncture> { ix.iter().map(|&i| asymptotics[i].clone()).collect() };
        let mut top = pick(&self.top);
        top.push(Puncture::new(Sign::Neg, self.breaking_orbit.clone()));
        let mut bottom = pick(&self.bottom);
        bottom.push(Puncture::new(Sign::Pos, self.breaking_orbit.clone()));
        let (nt, nb) = (top.len() - 1, bottom.len() - 1);
        let mut t = Component::nontrivial("top", 0, 0, with_extremal_windings(cat, &top)?);
        t.image_class = Some("top".into());
        let mut b = Component::nontrivial("bottom", 0, 0, with_extremal_windings(cat, &bottom)?);
        b.image_class = Some("bottom".into());
        Building::new(
            vec![t, b],
            vec![BreakingPair { pos: PunctureId::new("bottom", nb), neg: PunctureId::new("top", nt) }],
            vec![],
        )
    }
}

/// Catalog orbits along which a stable curve may break: even simple orbits
/// and bad double covers.
pub fn breaking_candidates(cat: &Catalog) -> Result<Vec<OrbitRef>> {
    let mut out = Vec::new();
    for o in cat.orbits() {
        let simple = OrbitRef::new(o.id.clone(), 1);
        if !cat.has_cover(&simple) {
            return Err(Error::Catalog(format!("orbit {} has no data for its simple cover", o.id)));
        }
        if cat.parity(&simple)? == 0 {
            out.push(simple);
            continue;
        }
        let double = OrbitRef::new(o.id.clone(), 2);
        if matches!(o.model, OrbitModel::Table(_)) && !cat.has_cover(&double) {
            return Err(Error::Catalog(format!(
                "odd orbit {} needs a table for its double cover to decide whether it is bad",
                o.id
            )));
        }
        if cat.is_bad(&double)? {
            out.push(double);
        }
    }
    Ok(out)
}

fn side(cat: &Catalog, ps: Vec<Puncture>) -> Result<(i64, i64)> {
    let b = Building::new(vec![Component::nontrivial("side", 0, 0, ps)], vec![], vec![])?;
    let c = b.constraints();
    Ok((index::fredholm_index(cat, &b, &c)?, index::normal_chern(cat, &b, &c)?))
}

fn precheck(cat: &Catalog, asymptotics: &[Puncture]) -> Result<()> {
    let b = Building::new(vec![Component::nontrivial("u", 0, 0, asymptotics.to_vec())], vec![], vec![])?;
    let c = b.constraints();
    let data = index::external_data(cat, &b, &c)?;
    let even: Vec<String> = data.iter().filter(|d| d.summary.parity == 0).map(|d| d.id.index.to_string()).collect();
    let ind = index::fredholm_index(cat, &b, &c)?;
    let cn = index::normal_chern(cat, &b, &c)?;
    if !even.is_empty() || cn != 0 {
        return Err(Error::Inconsistent(format!(
            "2c_N = ind - 2 + 2g + #Γ₀ with g = 0 gives c_N = {cn} at ind = {ind}; a stable c_N = 0 curve \
             needs no even constrained punctures, found even ones at positions [{}]",
            even.join(", ")
        )));
    }
    let smooth = Building::new(
        vec![Component::nontrivial("u", 0, 0, with_extremal_windings(cat, asymptotics)?)],
        vec![],
        vec![],
    )?;
    let nice = validate_nice(cat, &smooth)?;
    if !nice.ok {
        let v: Vec<String> = nice.violations.iter().map(|v| v.to_string()).collect();
        return Err(Error::Inconsistent(format!(
            "the asymptotics do not bound a nicely embedded curve: {}",
            v.join("; ")
        )));
    }
    Ok(())
}

/// All broken limits of a genus 0, `c_N = 0` curve with the given
/// asymptotics, sorted. The search runs over every ordered split of the
/// punctures and every breaking candidate, keeping the splits with both
/// sides of index 1 and `c_N = 0` whose two-level building is nice.
pub fn enumerate_limits(cat: &Catalog, asymptotics: &[Puncture], exec: Execution) -> Result<Vec<LimitType>> {
    let n = asymptotics.len();
    if n >= 20 {
        return Err(Error::Inconsistent(format!("{n} punctures is too many to enumerate")));
    }
    let cands = breaking_candidates(cat)?;
    if cands.is_empty() {
        return Ok(Vec::new());
    }
    precheck(cat, asymptotics)?;
    let total = (1usize << n) * cands.len();
    let results = exec.map_range(total, |i| -> Result<Option<LimitType>> {
        let (mask, delta) = (i / cands.len(), &cands[i % cands.len()]);
        let (top, bottom): (Vec<usize>, Vec<usize>) = (0..n).partition(|&j| mask >> j & 1 == 1);
        let mut tp: Vec<Puncture> = top.iter().map(|&j| asymptotics[j].clone()).collect();
        tp.push(Puncture::new(Sign::Neg, delta.clone()));
        let mut bp: Vec<Puncture> = bottom.iter().map(|&j| asymptotics[j].clone()).collect();
        bp.push(Puncture::new(Sign::Pos, delta.clone()));
        let (ti, tc) = side(cat, tp)?;
        let (bi, bc) = side(cat, bp)?;
        if !(ti == 1 && bi == 1 && tc == 0 && bc == 0) {
            return Ok(None);
        }
        let l = LimitType {
            top,
            bottom,
            breaking_orbit: delta.clone(),
            top_index: ti,
            bottom_index: bi,
            top_c_n: tc,
            bottom_c_n: bc,
        };
        Ok(validate_nice(cat, &l.materialize(cat, asymptotics)?)?.ok.then_some(l))
    });
    let mut out = Vec::new();
    for r in results {
        if let Some(l) = r? {
            out.push(l);
        }
    }
    out.sort();
    Ok(out)
}
