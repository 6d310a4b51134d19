use super::{validate_nice, Code, NiceVerdict, Violation};
use crate::buildings::{core, Building, ConstraintSet, PunctureId, Sign};
use crate::error::{Error, Result};
use crate::index::{self, threshold};
use crate::orbits::{Catalog, OrbitRef};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Taxonomy {
    /// The core is one nicely embedded curve.
    Smooth { component: String },
    /// Two index 1 curves joined along one even breaking orbit; `top`
    /// carries the negative breaking puncture.
    BrokenPair { top: String, bottom: String, breaking_orbit: OrbitRef },
}

impl Taxonomy {
    pub fn as_str(&self) -> &'static str {
        match self {
            Taxonomy::Smooth { .. } => "SMOOTH",
            Taxonomy::BrokenPair { .. } => "BROKEN_PAIR",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableVerdict {
    pub ok: bool,
    pub taxonomy: Option<Taxonomy>,
    pub violations: Vec<Violation>,
    pub nice: NiceVerdict,
    pub index: Option<i64>,
    pub c_n: Option<i64>,
    pub genus: Option<i64>,
}

impl StableVerdict {
    fn stop(nice: NiceVerdict, mut violations: Vec<Violation>, totals: Option<(i64, i64, i64)>) -> Self {
        violations.sort();
        let (index, c_n, genus) = match totals {
            Some((i, c, g)) => (Some(i), Some(c), Some(g)),
            None => (None, None, None),
        };
        StableVerdict { ok: false, taxonomy: None, violations, nice, index, c_n, genus }
    }
}

fn even_punctures(cat: &Catalog, b: &Building, id: &str) -> Result<Vec<PunctureId>> {
    let (bare, c) = index::isolate(b, id)?;
    let mut out = Vec::new();
    for (z, v) in &c {
        let p = bare.puncture(z)?;
        if cat.cz_index(&p.orbit, threshold(p.sign, *v))?.parity == 0 {
            out.push(z.clone());
        }
    }
    Ok(out)
}

/// Classifies a building as a limit of stable index 1 or 2 curves with
/// `c_N = 0`. Checks run in stages and only the first failing stage is
/// reported: nicety, totals, genericity, then the shape of the core.
///
/// Genericity is an input axiom: every nontrivial component of the core
/// must have induced index at least 1.
pub fn classify_stable_limit(cat: &Catalog, b: &Building, c: &ConstraintSet) -> Result<StableVerdict> {
    let b = b.with_constraints(c)?;
    let nice = validate_nice(cat, &b)?;
    if !nice.ok {
        let v = nice.violations.clone();
        return Ok(StableVerdict::stop(nice, v, None));
    }

    if !b.is_connected() {
        return Err(Error::Disconnected);
    }
    let report = index::index_report(cat, &b, &b.constraints())?;
    let genus = report.genus.expect("connected");
    let totals = Some((report.index, report.c_n, genus));
    let mut v = Vec::new();
    if !(1..=2).contains(&report.index) {
        v.push(Violation::new(Code::IndexOutOfRange, "building", format!("ind = {}", report.index)));
    }
    if report.c_n != 0 {
        v.push(Violation::new(Code::CnNonzero, "building", format!("c_N = {}", report.c_n)));
    }
    if !v.is_empty() {
        return Ok(StableVerdict::stop(nice, v, totals));
    }

    let k = core(&b)?;
    let mut sides = Vec::new();
    for comp in k.components().iter().filter(|c| c.is_nontrivial()) {
        let r = index::component_report(cat, &k, &comp.id)?;
        if r.index < 1 {
            v.push(Violation::new(
                Code::NonGeneric,
                &comp.id,
                format!("nontrivial component of induced index {} < 1", r.index),
            ));
        }
        sides.push((comp.id.clone(), r.index));
    }
    if !v.is_empty() {
        return Ok(StableVerdict::stop(nice, v, totals));
    }

    let n = k.components().len();
    let taxonomy = if n == 1 {
        Taxonomy::Smooth { component: k.components()[0].id.clone() }
    } else if report.index == 2 && n == 2 {
        if k.breaking_pairs().len() != 1 {
            v.push(Violation::new(
                Code::BreakingPairCount,
                "core",
                format!("{} breaking pairs join the two components", k.breaking_pairs().len()),
            ));
            return Ok(StableVerdict::stop(nice, v, totals));
        }
        let pair = k.breaking_pairs()[0].clone();
        for (id, ind) in &sides {
            if *ind != 1 {
                v.push(Violation::new(Code::SideIndex, id, format!("induced index {ind} ≠ 1")));
            }
            let breaking = if pair.pos.component == *id { &pair.pos } else { &pair.neg };
            let even = even_punctures(cat, &k, id)?;
            if even.len() != 1 || &even[0] != breaking {
                let list: Vec<String> = even.iter().map(|z| z.to_string()).collect();
                v.push(Violation::new(
                    Code::EvenPuncture,
                    id,
                    format!("even constrained punctures [{}], expected only {breaking}", list.join(", ")),
                ));
            }
        }
        let label = |id: &str| k.component(id).map(|c| c.image_class.clone());
        if let (Some(a), Some(bb)) = (label(&pair.pos.component)?, label(&pair.neg.component)?) {
            if a == bb {
                v.push(Violation::new(
                    Code::SameImageClass,
                    "core",
                    format!("both sides carry image class {a}"),
                ));
            }
        }
        if !v.is_empty() {
            return Ok(StableVerdict::stop(nice, v, totals));
        }
        let orbit = k.puncture(&pair.pos)?.orbit.clone();
        debug_assert_eq!(k.puncture(&pair.neg)?.sign, Sign::Neg);
        Taxonomy::BrokenPair { top: pair.neg.component, bottom: pair.pos.component, breaking_orbit: orbit }
    } else {
        v.push(Violation::new(
            Code::TooManyComponents,
            "core",
            format!("index {} core has {n} components", report.index),
        ));
        return Ok(StableVerdict::stop(nice, v, totals));
    };

    Ok(StableVerdict {
        ok: true,
        taxonomy: Some(taxonomy),
        violations: Vec::new(),
        nice,
        index: Some(report.index),
        c_n: Some(report.c_n),
        genus: Some(genus),
    })
}
