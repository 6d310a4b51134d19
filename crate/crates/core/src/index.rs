//! Constrained Conley-Zehnder, Fredholm and normal Chern numbers of
//! buildings, asymptotic defects and the additivity audits.
//!
//! Disconnected buildings are evaluated with the same formulas (Euler
//! characteristic summed over components, all external punctures); only the
//! arithmetic genus, and hence the genus identity, needs connectedness.

use crate::buildings::{Building, Component, ConstraintSet, PunctureId, Sign};
use crate::error::{Error, Result};
use crate::orbits::{Catalog, SpectralSummary};
use crate::spectral::Side;

/// Spectral cut for a puncture: `-c` at positive ends, `+c` at negative ends.
pub fn threshold(sign: Sign, c: f64) -> f64 {
    match sign {
        Sign::Pos => -c,
        Sign::Neg => c,
    }
}

/// Constrained spectral data of one external puncture.
#[derive(Debug, Clone, PartialEq)]
pub struct PunctureData {
    pub id: PunctureId,
    pub sign: Sign,
    pub constraint: f64,
    pub summary: SpectralSummary,
}

impl PunctureData {
    /// The extremal winding facing the curve: α− at positive ends, α+ at
    /// negative ends.
    pub fn extremal_alpha(&self) -> i64 {
        match self.sign {
            Sign::Pos => self.summary.alpha_minus,
            Sign::Neg => self.summary.alpha_plus,
        }
    }
}

fn constraint_of(b: &Building, c: &ConstraintSet, z: &PunctureId) -> Result<f64> {
    let v = *c
        .get(z)
        .ok_or_else(|| Error::Building(format!("no constraint given for external puncture {z}")))?;
    if !(v.is_finite() && v >= 0.0) {
        return Err(Error::Building(format!("constraint at {z} must be nonnegative")));
    }
    b.puncture(z)?;
    Ok(v)
}

fn check_keys(b: &Building, c: &ConstraintSet) -> Result<()> {
    for z in c.keys() {
        b.puncture(z)?;
        if !b.is_external(z) {
            return Err(Error::Building(format!("constraint given for glued puncture {z}")));
        }
    }
    Ok(())
}

/// Spectral data of every external puncture, in component order.
pub fn external_data(cat: &Catalog, b: &Building, c: &ConstraintSet) -> Result<Vec<PunctureData>> {
    check_keys(b, c)?;
    b.external_punctures()
        .into_iter()
        .map(|z| {
            let p = b.puncture(&z)?;
            let cz = constraint_of(b, c, &z)?;
            let summary = cat.cz_index(&p.orbit, threshold(p.sign, cz))?;
            Ok(PunctureData { id: z, sign: p.sign, constraint: cz, summary })
        })
        .collect()
}

fn mu_total(data: &[PunctureData]) -> i64 {
    data.iter()
        .map(|d| match d.sign {
            Sign::Pos => d.summary.mu_cz,
            Sign::Neg => -d.summary.mu_cz,
        })
        .sum()
}

fn c1_total(b: &Building) -> i64 {
    b.components().iter().map(|c| c.rel_c1).sum()
}

fn index_from(b: &Building, data: &[PunctureData]) -> i64 {
    -b.euler_char() + 2 * c1_total(b) + mu_total(data)
}

fn chern_from(b: &Building, data: &[PunctureData]) -> i64 {
    let alphas: i64 = data
        .iter()
        .map(|d| match d.sign {
            Sign::Pos => d.summary.alpha_minus,
            Sign::Neg => -d.summary.alpha_plus,
        })
        .sum();
    c1_total(b) - b.euler_char() + alphas
}

/// Total constrained Conley-Zehnder index.
pub fn cz_total(cat: &Catalog, b: &Building, c: &ConstraintSet) -> Result<i64> {
    Ok(mu_total(&external_data(cat, b, c)?))
}

/// Constrained Fredholm index `-χ + 2c₁ + μ`.
pub fn fredholm_index(cat: &Catalog, b: &Building, c: &ConstraintSet) -> Result<i64> {
    Ok(index_from(b, &external_data(cat, b, c)?))
}

fn genus_identity(b: &Building, data: &[PunctureData], ind: i64, cn: i64) -> Result<Option<i64>> {
    if !b.is_connected() {
        return Ok(None);
    }
    let g = b.arithmetic_genus()?;
    let gamma0 = data.iter().filter(|d| d.summary.parity == 0).count() as i64;
    if 2 * cn != ind - 2 + 2 * g + gamma0 {
        return Err(Error::Internal(format!(
            "2·c_N = {} but ind - 2 + 2g + #Γ₀ = {}",
            2 * cn,
            ind - 2 + 2 * g + gamma0
        )));
    }
    Ok(Some(g))
}

/// Constrained normal first Chern number; on connected buildings the
/// identity `2c_N = ind - 2 + 2g + #Γ₀` is enforced.
pub fn normal_chern(cat: &Catalog, b: &Building, c: &ConstraintSet) -> Result<i64> {
    let data = external_data(cat, b, c)?;
    let cn = chern_from(b, &data);
    genus_identity(b, &data, index_from(b, &data), cn)?;
    Ok(cn)
}

/// External punctures split by constrained parity: `(even, odd)`.
pub fn puncture_parities(
    cat: &Catalog,
    b: &Building,
    c: &ConstraintSet,
) -> Result<(Vec<PunctureId>, Vec<PunctureId>)> {
    let (even, odd): (Vec<_>, Vec<_>) =
        external_data(cat, b, c)?.into_iter().partition(|d| d.summary.parity == 0);
    Ok((even.into_iter().map(|d| d.id).collect(), odd.into_iter().map(|d| d.id).collect()))
}

/// Asymptotic defects of a nontrivial component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Defect {
    pub per_puncture: Vec<i64>,
    pub total: i64,
}

/// The component as a building on its own, with the given constraints on
/// all of its punctures and without nodes.
pub fn isolate(b: &Building, id: &str) -> Result<(Building, ConstraintSet)> {
    let comp = b.component(id)?.clone();
    let bare = Building::new(vec![comp.clone()], vec![], vec![])?;
    let c = (0..comp.punctures.len())
        .map(|i| {
            let z = PunctureId::new(id, i);
            let v = if b.is_external(&z) { comp.punctures[i].constraint } else { 0.0 };
            (z, v)
        })
        .collect();
    Ok((bare, c))
}

/// Per-puncture `|α∓(γ_z; ĉ_z) - controlling winding|`, or `None` for
/// trivial and constant components.
pub fn defect(cat: &Catalog, comp: &Component, c: &ConstraintSet) -> Result<Option<Defect>> {
    if !comp.is_nontrivial() {
        return Ok(None);
    }
    let missing: Vec<String> = comp
        .punctures
        .iter()
        .enumerate()
        .filter(|(_, p)| p.controlling_winding.is_none())
        .map(|(i, _)| format!("{}:{i}.controlling_winding", comp.id))
        .collect();
    if !missing.is_empty() {
        return Err(Error::IncompleteInput(missing));
    }
    let mut per = Vec::with_capacity(comp.punctures.len());
    for (i, p) in comp.punctures.iter().enumerate() {
        let z = PunctureId::new(comp.id.clone(), i);
        let cz = c.get(&z).copied().unwrap_or(0.0);
        let side = match p.sign {
            Sign::Pos => Side::Minus,
            Sign::Neg => Side::Plus,
        };
        let alpha = cat.alpha(&p.orbit, threshold(p.sign, cz), side)?;
        per.push((alpha - p.controlling_winding.expect("checked")).abs());
    }
    let total = per.iter().sum();
    Ok(Some(Defect { per_puncture: per, total }))
}

/// Evaluation of one component under induced constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentReport {
    pub component: String,
    pub constraints: ConstraintSet,
    pub index: i64,
    pub c_n: i64,
    /// `None` when not applicable or when controlling windings are absent.
    pub defect: Option<Defect>,
    /// `wind_π` as supplied, or implied as `c_N - defect`.
    pub wind_pi: Option<i64>,
    /// Whether a supplied `wind_π` satisfies `wind_π + defect = c_N`.
    pub wind_pi_consistent: Option<bool>,
}

/// Evaluates component `id` of `b` on its own with induced constraints.
pub fn component_report(cat: &Catalog, b: &Building, id: &str) -> Result<ComponentReport> {
    let (bare, c) = isolate(b, id)?;
    let data = external_data(cat, &bare, &c)?;
    let index = index_from(&bare, &data);
    let c_n = chern_from(&bare, &data);
    genus_identity(&bare, &data, index, c_n)?;
    let comp = &bare.components()[0];
    let defect = match defect(cat, comp, &c) {
        Ok(d) => d,
        Err(Error::IncompleteInput(_)) => None,
        Err(e) => return Err(e),
    };
    let (wind_pi, wind_pi_consistent) = match (&defect, comp.wind_pi) {
        (Some(d), Some(w)) => (Some(w as i64), Some(w as i64 + d.total == c_n)),
        (Some(d), None) => {
            let implied = c_n - d.total;
            if implied < 0 {
                return Err(Error::Inconsistent(format!(
                    "component {id}: c_N = {c_n} and defect {} force wind_π = {implied} < 0",
                    d.total
                )));
            }
            (Some(implied), None)
        }
        (None, w) => (w.map(i64::from), None),
    };
    Ok(ComponentReport { component: id.to_string(), constraints: c, index, c_n, defect, wind_pi, wind_pi_consistent })
}

/// Both sides of the index and Chern additivity identities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Additivity {
    pub index: i64,
    pub index_components: i64,
    pub c_n: i64,
    pub c_n_components: i64,
    /// Sum of parities of breaking orbits.
    pub breaking_parity: i64,
    /// Number of nodal points (two per nodal pair).
    pub nodal_points: i64,
}

/// Checks `ind = Σ ind_i + #Δ_N` and `c_N = Σ c_N,i + Σ_{Δ_C} p + #Δ_N`,
/// with `#Δ_N` counting nodal points.
pub fn verify_additivity(cat: &Catalog, b: &Building, c: &ConstraintSet) -> Result<Additivity> {
    let data = external_data(cat, b, c)?;
    let (index, c_n) = (index_from(b, &data), chern_from(b, &data));
    let mut index_components = 0;
    let mut c_n_components = 0;
    for comp in b.components() {
        let (bare, ci) = isolate(b, &comp.id)?;
        let d = external_data(cat, &bare, &ci)?;
        index_components += index_from(&bare, &d);
        c_n_components += chern_from(&bare, &d);
    }
    let mut breaking_parity = 0;
    for p in b.breaking_pairs() {
        breaking_parity += cat.parity(&b.puncture(&p.pos)?.orbit)? as i64;
    }
    let nodal_points = 2 * b.nodal_pairs().len() as i64;
    let a = Additivity { index, index_components, c_n, c_n_components, breaking_parity, nodal_points };
    if index != index_components + nodal_points {
        return Err(Error::Internal(format!("index additivity fails: {a:?}")));
    }
    if c_n != c_n_components + breaking_parity + nodal_points {
        return Err(Error::Internal(format!("normal Chern additivity fails: {a:?}")));
    }
    Ok(a)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexReport {
    pub chi: i64,
    /// `None` for disconnected buildings.
    pub genus: Option<i64>,
    pub c1_total: i64,
    pub mu_total: i64,
    pub index: i64,
    pub c_n: i64,
    pub gamma0: Vec<PunctureId>,
    pub gamma1: Vec<PunctureId>,
    pub punctures: Vec<PunctureData>,
    pub per_component: Vec<ComponentReport>,
    pub additivity: Additivity,
}

/// Full evaluation with all identities enforced.
pub fn index_report(cat: &Catalog, b: &Building, c: &ConstraintSet) -> Result<IndexReport> {
    let data = external_data(cat, b, c)?;
    let index = index_from(b, &data);
    let c_n = chern_from(b, &data);
    let genus = genus_identity(b, &data, index, c_n)?;
    let mut per_component = Vec::with_capacity(b.components().len());
    for comp in b.components() {
        per_component.push(component_report(cat, b, &comp.id)?);
    }
    per_component.sort_by(|x, y| x.component.cmp(&y.component));
    let additivity = verify_additivity(cat, b, c)?;
    let (gamma0, gamma1) = data.iter().fold((Vec::new(), Vec::new()), |(mut e, mut o), d| {
        if d.summary.parity == 0 { e.push(d.id.clone()) } else { o.push(d.id.clone()) }
        (e, o)
    });
    Ok(IndexReport {
        chi: b.euler_char(),
        genus,
        c1_total: c1_total(b),
        mu_total: mu_total(&data),
        index,
        c_n,
        gamma0,
        gamma1,
        punctures: data,
        per_component,
        additivity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::buildings::{add_node, BreakingPair, Puncture};
    use crate::orbits::{OrbitModel, OrbitRef, SimpleOrbit};
    use crate::spectral::{SpectralEntry, SpectralTable};
    use std::collections::BTreeMap;

    fn table_orbit(id: &str, rows: &[(f64, i64, u32)]) -> SimpleOrbit {
        let entries = rows
            .iter()
            .map(|&(eigenvalue, winding, multiplicity)| SpectralEntry { eigenvalue, winding, multiplicity })
            .collect();
        SimpleOrbit {
            id: id.into(),
            period: 1.0,
            model: OrbitModel::Table(BTreeMap::from([(1, SpectralTable::new(entries, 20.0, 0).unwrap())])),
            hyperbolic: Some(true),
        }
    }

    /// μ = 1 (rotation by π/2), μ = 0, μ = 2, μ = 3 orbits.
    fn cat() -> Catalog {
        let pi = std::f64::consts::PI;
        Catalog::new(vec![
            table_orbit(
                "h",
                &[(-2.5 * pi, -1, 2), (-0.5 * pi, 0, 2), (1.5 * pi, 1, 2), (3.5 * pi, 2, 2)],
            ),
            table_orbit("d", &[(-7.0, -1, 1), (-5.0, -1, 1), (-1.0, 0, 1), (1.0, 0, 1), (5.0, 1, 1), (7.0, 1, 1)]),
            table_orbit("e", &[(-7.0, 0, 2), (-1.0, 1, 1), (1.0, 1, 1), (7.0, 2, 2)]),
            table_orbit("t", &[(-9.0, 0, 2), (-3.0, 1, 1), (-1.0, 1, 1), (5.0, 2, 2), (8.0, 3, 2)]),
        ])
        .unwrap()
    }

    fn o(s: &str) -> OrbitRef {
        OrbitRef::new(s, 1)
    }

    fn single(c: Component) -> Building {
        Building::new(vec![c], vec![], vec![]).unwrap()
    }

    #[test]
    fn cz_total_examples() {
        let cat = cat();
        let cyl = single(Component::trivial_cylinder("t", o("d")));
        assert_eq!(cz_total(&cat, &cyl, &cyl.constraints()).unwrap(), 0);
        let plane = single(Component::nontrivial("u", 0, 0, vec![Puncture::new(Sign::Pos, o("h"))]));
        assert_eq!(cz_total(&cat, &plane, &plane.constraints()).unwrap(), 1);
        let c = ConstraintSet::from([(PunctureId::new("u", 0), 2.0)]);
        assert_eq!(cz_total(&cat, &plane, &c).unwrap(), -1);
        assert!(cz_total(&cat, &plane, &ConstraintSet::new()).is_err());
    }

    #[test]
    fn index_and_chern_examples() {
        let cat = cat();
        let cyl = single(Component::trivial_cylinder("t", o("d")));
        assert_eq!(fredholm_index(&cat, &cyl, &cyl.constraints()).unwrap(), 0);
        assert_eq!(normal_chern(&cat, &cyl, &cyl.constraints()).unwrap(), 0);
        let plane = single(Component::nontrivial("u", 0, 0, vec![Puncture::new(Sign::Pos, o("e"))]));
        assert_eq!(fredholm_index(&cat, &plane, &plane.constraints()).unwrap(), 1);
        assert_eq!(normal_chern(&cat, &plane, &plane.constraints()).unwrap(), 0);
        let (g0, g1) = puncture_parities(&cat, &plane, &plane.constraints()).unwrap();
        assert_eq!((g0.len(), g1.len()), (1, 0));
        let cyl32 = single(Component::nontrivial(
            "v",
            0,
            0,
            vec![Puncture::new(Sign::Pos, o("t")), Puncture::new(Sign::Neg, o("h"))],
        ));
        assert_eq!(fredholm_index(&cat, &cyl32, &cyl32.constraints()).unwrap(), 2);
        assert_eq!(normal_chern(&cat, &cyl32, &cyl32.constraints()).unwrap(), 0);
    }

    #[test]
    fn parity_of_constrained_rotation_puncture() {
        let cat = cat();
        let plane = single(Component::nontrivial("u", 0, 0, vec![Puncture::new(Sign::Pos, o("h"))]));
        let (_, odd) = puncture_parities(&cat, &plane, &plane.constraints()).unwrap();
        assert_eq!(odd.len(), 1);
        let c = ConstraintSet::from([(PunctureId::new("u", 0), 2.0)]);
        let (_, odd) = puncture_parities(&cat, &plane, &c).unwrap();
        assert_eq!(odd.len(), 1);
    }

    #[test]
    fn defect_examples() {
        let cat = cat();
        let u = Component::nontrivial("u", 0, 0, vec![Puncture::new(Sign::Pos, o("h")).with_winding(0)]);
        let c = ConstraintSet::from([(PunctureId::new("u", 0), 0.0)]);
        assert_eq!(defect(&cat, &u, &c).unwrap().unwrap().total, 0);
        let u = Component::nontrivial("u", 0, 0, vec![Puncture::new(Sign::Pos, o("h")).with_winding(-1)]);
        assert_eq!(defect(&cat, &u, &c).unwrap().unwrap().total, 1);
        let bare = Component::nontrivial("u", 0, 0, vec![Puncture::new(Sign::Pos, o("h"))]);
        assert!(matches!(defect(&cat, &bare, &c), Err(Error::IncompleteInput(_))));
        assert_eq!(defect(&cat, &Component::trivial_cylinder("t", o("h")), &c).unwrap(), None);

        // index-1 plane at μ = 2 has c_N = 0, so a positive defect is impossible
        let plane = single(Component::nontrivial("p", 0, 0, vec![Puncture::new(Sign::Pos, o("e")).with_winding(0)]));
        assert!(matches!(component_report(&cat, &plane, "p"), Err(Error::Inconsistent(_))));
    }

    fn chain() -> Building {
        let top = Component::nontrivial(
            "top",
            0,
            0,
            vec![Puncture::new(Sign::Pos, o("h")), Puncture::new(Sign::Neg, o("d"))],
        );
        let bot = Component::nontrivial("bot", 0, 0, vec![Puncture::new(Sign::Pos, o("d"))]);
        Building::new(
            vec![top, bot],
            vec![BreakingPair { pos: PunctureId::new("bot", 0), neg: PunctureId::new("top", 1) }],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn additivity_of_chain() {
        let cat = cat();
        let b = chain();
        let a = verify_additivity(&cat, &b, &b.constraints()).unwrap();
        assert_eq!((a.index, a.index_components, a.nodal_points), (0, 0, 0));
        assert_eq!((a.c_n, a.c_n_components, a.breaking_parity), (-1, -1, 0));
        let r = component_report(&cat, &b, "top").unwrap();
        assert_eq!((r.index, r.c_n), (1, 0));
        let r = component_report(&cat, &b, "bot").unwrap();
        assert_eq!((r.index, r.c_n), (-1, -1));
    }

    #[test]
    fn nodes_shift_index_and_chern_by_two() {
        let cat = cat();
        let b = chain();
        let n = add_node(&b, "top", "bot").unwrap();
        let before = index_report(&cat, &b, &b.constraints()).unwrap();
        let after = index_report(&cat, &n, &n.constraints()).unwrap();
        assert_eq!(after.index, before.index + 2);
        assert_eq!(after.c_n, before.c_n + 2);
        assert_eq!(after.additivity.nodal_points, 2);
    }
}
