//! Seeded random corpus of well-formed connected buildings over a fixed
//! five-orbit catalog, and the identity and surgery audits run over it.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::buildings::{
    add_node, augment, core, glue_punctures, BreakingPair, Building, Component, ComponentKind, Puncture, PunctureId,
    Sign, Site,
};
use crate::error::{Error, Result};
use crate::fixtures::{flow_orbit, rotation, saddle, table, table_orbit, twisted_saddle, FIXTURE_GRID};
use crate::index;
use crate::orbits::{Catalog, OrbitRef};
use crate::par::Execution;

pub const MAX_COMPONENTS: usize = 6;
pub const MAX_PUNCTURES: usize = 4;
pub const CONSTRAINTS: [f64; 4] = [0.0, 0.5, 1.7, 3.3];

/// `e1` elliptic (μ = 1), `hp` positive hyperbolic (μ = 0), `hn` negative
/// hyperbolic (μ = 1, bad double), `t2` even table (μ = 2) and `t3` odd
/// elliptic table (μ = 3, double with μ = 5).
pub fn corpus_catalog() -> Catalog {
    Catalog::new(vec![
        flow_orbit("e1", rotation(1.0), FIXTURE_GRID),
        flow_orbit("hp", saddle(), FIXTURE_GRID),
        flow_orbit("hn", twisted_saddle(), FIXTURE_GRID),
        table_orbit("t2", vec![(1, table(&[(-7.0, 0, 2), (-1.0, 1, 1), (1.0, 1, 1), (7.0, 2, 2)]))], Some(true)),
        table_orbit(
            "t3",
            vec![
                (1, table(&[(-9.0, 0, 2), (-3.0, 1, 1), (-1.0, 1, 1), (5.0, 2, 2), (8.0, 3, 2)])),
                (2, table(&[(-8.0, 1, 2), (-2.0, 2, 2), (3.0, 3, 2), (9.0, 4, 2)])),
            ],
            Some(false),
        ),
    ])
    .expect("valid corpus catalog")
}

struct Draft {
    id: String,
    kind: ComponentKind,
    genus: u32,
    rel_c1: i64,
    punctures: Vec<Puncture>,
}

impl Draft {
    fn room(&self) -> usize {
        MAX_PUNCTURES - self.punctures.len()
    }
}

fn random_orbit(cat: &Catalog, rng: &mut ChaCha8Rng, simple: Option<&str>) -> OrbitRef {
    let ids: Vec<&str> = cat.orbits().map(|o| o.id.as_str()).collect();
    let s = simple.unwrap_or_else(|| ids.choose(rng).expect("nonempty catalog"));
    let double = OrbitRef::new(s, 2);
    if cat.has_cover(&double) && rng.gen_bool(0.3) {
        double
    } else {
        OrbitRef::new(s, 1)
    }
}

fn trivial_orbit(d: &Draft) -> Option<&str> {
    match &d.kind {
        ComponentKind::Trivial(o) => Some(o.simple.as_str()),
        _ => None,
    }
}

/// Balances a trivial draft so both signs appear with equal total cover
/// multiplicity; gives up (returns false) when out of room.
fn balance_trivial(cat: &Catalog, d: &mut Draft) -> bool {
    let simple = trivial_orbit(d).expect("trivial draft").to_string();
    let has_double = cat.has_cover(&OrbitRef::new(simple.as_str(), 2));
    loop {
        let total = |s: Sign| -> i64 {
            d.punctures.iter().filter(|p| p.sign == s).map(|p| p.orbit.k as i64).sum()
        };
        let diff = total(Sign::Pos) - total(Sign::Neg);
        let (pos, neg) = (total(Sign::Pos) > 0, total(Sign::Neg) > 0);
        if diff == 0 && pos && neg {
            return true;
        }
        if d.room() == 0 {
            return false;
        }
        let (sign, need) = match diff {
            x if x > 0 => (Sign::Neg, x),
            x if x < 0 => (Sign::Pos, -x),
            _ => (if pos { Sign::Neg } else { Sign::Pos }, 1),
        };
        let k = if need >= 2 && has_double { 2 } else { 1 };
        d.punctures.push(Puncture::new(sign, OrbitRef::new(simple.as_str(), k)));
    }
}

/// A random connected well-formed building: at most six components with at
/// most four punctures each, joined by a spanning tree of breaking pairs
/// and nodes plus an occasional cycle.
pub fn random_building(cat: &Catalog, rng: &mut ChaCha8Rng) -> Building {
    let simples: Vec<String> = cat.orbits().map(|o| o.id.clone()).collect();
    let n = rng.gen_range(1..=MAX_COMPONENTS);
    let mut drafts: Vec<Draft> = (0..n)
        .map(|i| {
            let roll: f64 = rng.gen();
            let kind = if i > 0 && roll < 0.1 {
                ComponentKind::Constant
            } else if roll < 0.3 {
                ComponentKind::Trivial(OrbitRef::new(simples.choose(rng).expect("nonempty").clone(), 1))
            } else {
                ComponentKind::Nontrivial
            };
            let (genus, rel_c1) = match kind {
                ComponentKind::Constant => (1, 0),
                ComponentKind::Trivial(_) => (u32::from(rng.gen_bool(0.1)), 0),
                ComponentKind::Nontrivial => (u32::from(rng.gen_bool(0.2)), rng.gen_range(-2..=2)),
            };
            Draft { id: format!("c{i}"), kind, genus, rel_c1, punctures: Vec::new() }
        })
        .collect();

    let mut pairs: Vec<(usize, usize, usize, usize)> = Vec::new();
    let mut nodes: Vec<(usize, usize)> = Vec::new();
    let mut join = |a: usize, b: usize, drafts: &mut Vec<Draft>, rng: &mut ChaCha8Rng, allow_node: bool| -> bool {
        let constant = |d: &Draft| d.kind == ComponentKind::Constant;
        let (ta, tb) = (trivial_orbit(&drafts[a]).map(String::from), trivial_orbit(&drafts[b]).map(String::from));
        let clash = matches!((&ta, &tb), (Some(x), Some(y)) if x != y);
        let breaking = !constant(&drafts[a])
            && !constant(&drafts[b])
            && !clash
            && drafts[a].room() > 0
            && drafts[b].room() > 0
            && (a != b || drafts[a].room() > 1)
            && rng.gen_bool(0.8);
        if breaking {
            let orbit = random_orbit(cat, rng, ta.as_deref().or(tb.as_deref()));
            let (up, down) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
            drafts[down].punctures.push(Puncture::new(Sign::Pos, orbit.clone()));
            let pi = drafts[down].punctures.len() - 1;
            drafts[up].punctures.push(Puncture::new(Sign::Neg, orbit));
            let ni = drafts[up].punctures.len() - 1;
            pairs.push((down, pi, up, ni));
            true
        } else if allow_node {
            nodes.push((a, b));
            true
        } else {
            false
        }
    };
    for i in 1..n {
        let j = rng.gen_range(0..i);
        join(i, j, &mut drafts, rng, true);
    }
    if n > 1 && rng.gen_bool(0.2) {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let allow_node = rng.gen_bool(0.3);
        join(a, b, &mut drafts, rng, allow_node);
    }
    let pairs = pairs;

    for d in drafts.iter_mut() {
        match d.kind {
            ComponentKind::Constant => {}
            ComponentKind::Nontrivial => {
                let extra = rng.gen_range(0..=d.room());
                let extra = if d.punctures.is_empty() { extra.max(1) } else { extra };
                for _ in 0..extra {
                    let sign = if rng.gen_bool(0.6) { Sign::Pos } else { Sign::Neg };
                    let orbit = random_orbit(cat, rng, None);
                    d.punctures.push(Puncture::new(sign, orbit));
                }
            }
            ComponentKind::Trivial(_) => {
                if !balance_trivial(cat, d) {
                    d.kind = ComponentKind::Nontrivial;
                }
            }
        }
    }

    let glued: std::collections::BTreeSet<(usize, usize)> =
        pairs.iter().flat_map(|&(a, i, b, j)| [(a, i), (b, j)]).collect();
    for (ci, d) in drafts.iter_mut().enumerate() {
        for (pi, p) in d.punctures.iter_mut().enumerate() {
            if glued.contains(&(ci, pi)) {
                continue;
            }
            let c = *CONSTRAINTS.choose(rng).expect("nonempty");
            let ok = cat.cz_index(&p.orbit, index::threshold(p.sign, c)).is_ok();
            p.constraint = if ok { c } else { 0.0 };
        }
    }

    let ids: Vec<String> = drafts.iter().map(|d| d.id.clone()).collect();
    let components = drafts
        .into_iter()
        .map(|d| Component {
            id: d.id,
            genus: d.genus,
            punctures: d.punctures,
            rel_c1: d.rel_c1,
            kind: d.kind,
            wind_pi: None,
            image_class: None,
        })
        .collect();
    let pairs = pairs
        .iter()
        .map(|&(a, i, b, j)| BreakingPair { pos: PunctureId::new(ids[a].clone(), i), neg: PunctureId::new(ids[b].clone(), j) })
        .collect();
    let nodes = nodes.iter().map(|&(a, b)| (ids[a].clone(), ids[b].clone())).collect();
    Building::new(components, pairs, nodes).expect("generator produces well-formed buildings")
}

/// `n` buildings from a fixed seed.
pub fn corpus(cat: &Catalog, seed: u64, n: usize) -> Vec<Building> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_building(cat, &mut rng)).collect()
}

fn fail(b: &Building, what: String) -> Error {
    Error::Internal(format!("{what} on building [{}]", b.components().iter().map(|c| c.id.as_str()).collect::<Vec<_>>().join(", ")))
}

/// The genus identity and both additivity identities (enforced inside the
/// index report), plus agreement of the report with the direct formulas.
pub fn audit_identities(cat: &Catalog, b: &Building) -> Result<()> {
    let c = b.constraints();
    let r = index::index_report(cat, b, &c)?;
    let g = r.genus.ok_or_else(|| fail(b, "corpus building is disconnected".into()))?;
    let gamma0 = r.gamma0.len() as i64;
    if 2 * r.c_n != r.index - 2 + 2 * g + gamma0 {
        return Err(fail(b, format!("2c_N = {} but ind - 2 + 2g + #Γ₀ = {}", 2 * r.c_n, r.index - 2 + 2 * g + gamma0)));
    }
    let a = &r.additivity;
    if a.index != a.index_components + a.nodal_points
        || a.c_n != a.c_n_components + a.breaking_parity + a.nodal_points
    {
        return Err(fail(b, format!("additivity fails: {a:?}")));
    }
    Ok(())
}

fn totals(cat: &Catalog, b: &Building) -> Result<(i64, i64, i64, i64)> {
    let r = index::index_report(cat, b, &b.constraints())?;
    Ok((r.index, r.c_n, b.euler_char(), r.genus.unwrap_or(-1)))
}

fn core_key(b: &Building) -> std::result::Result<Building, &'static str> {
    core(b).map(|k| k.canonical()).map_err(|e| e.code())
}

/// Surgery laws: augmentation at every site preserves `(ind, c_N, χ, g)`
/// and the core; a node shifts `(χ, c_N)` by `(-2, +2)`; gluing two
/// external punctures over `γ` shifts `c_N` by `p(γ)`.
pub fn audit_surgery(cat: &Catalog, b: &Building) -> Result<()> {
    let base = totals(cat, b)?;
    let base_core = core_key(b);
    let mut sites: Vec<Site> = b.external_punctures().into_iter().map(Site::Puncture).collect();
    sites.extend((0..b.breaking_pairs().len()).map(Site::Pair));
    for site in &sites {
        let a = augment(b, site)?;
        let t = totals(cat, &a)?;
        if t != base {
            return Err(fail(b, format!("augment at {site:?} changes (ind, c_N, χ, g) from {base:?} to {t:?}")));
        }
        if core_key(&a) != base_core {
            return Err(fail(b, format!("core of augment at {site:?} differs from core")));
        }
    }

    let comps = b.components();
    let ends = [(0, comps.len() - 1), (0, 0)];
    for (x, y) in ends {
        let nb = add_node(b, &comps[x].id, &comps[y].id)?;
        let (c0, c1) = (index::normal_chern(cat, b, &b.constraints())?, index::normal_chern(cat, &nb, &nb.constraints())?);
        if nb.euler_char() != b.euler_char() - 2 || c1 != c0 + 2 {
            return Err(fail(b, format!("node ({x}, {y}) shifts (χ, c_N) by ({}, {})", nb.euler_char() - b.euler_char(), c1 - c0)));
        }
    }

    let ext = b.external_punctures();
    let glue = ext.iter().find_map(|z| {
        let p = b.puncture(z).ok()?;
        (p.sign == Sign::Pos).then_some(())?;
        ext.iter()
            .find(|w| b.puncture(w).map(|q| q.sign == Sign::Neg && q.orbit == p.orbit).unwrap_or(false))
            .map(|w| (z.clone(), w.clone(), p.orbit.clone()))
    });
    if let Some((z, w, orbit)) = glue {
        let mut c = b.constraints();
        c.insert(z.clone(), 0.0);
        c.insert(w.clone(), 0.0);
        let b0 = b.with_constraints(&c)?;
        let g = glue_punctures(&b0, &z, &w)?;
        let (c0, c1) = (index::normal_chern(cat, &b0, &b0.constraints())?, index::normal_chern(cat, &g, &g.constraints())?);
        let p = cat.parity(&orbit)? as i64;
        if c1 - c0 != p {
            return Err(fail(b, format!("gluing {z} to {w} over {orbit} shifts c_N by {} instead of p = {p}", c1 - c0)));
        }
    }
    Ok(())
}

/// Runs both audits over a corpus; returns one result per building.
pub fn audit_corpus(cat: &Catalog, buildings: &[Building], exec: Execution) -> Vec<Result<()>> {
    exec.map(buildings, |b| audit_identities(cat, b).and_then(|_| audit_surgery(cat, b)))
}
