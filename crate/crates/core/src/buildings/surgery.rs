//! Building surgery. Every operation returns a new building.

use std::collections::BTreeSet;

use super::{BreakingPair, Building, Component, ConstraintSet, PunctureId, Sign};
use crate::error::{Error, Result};

/// Where to insert a trivial cylinder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Site {
    Puncture(PunctureId),
    Pair(usize),
}

fn fresh_id(taken: &BTreeSet<String>, base: &str) -> String {
    (1..)
        .map(|n| format!("{base}#{n}"))
        .find(|id| !taken.contains(id))
        .expect("unbounded search")
}

fn ids(b: &Building) -> BTreeSet<String> {
    b.components.iter().map(|c| c.id.clone()).collect()
}

fn surgery(e: Error) -> Error {
    match e {
        Error::Building(m) => Error::Surgery(m),
        other => other,
    }
}

/// Side-by-side union. Colliding ids of `b` are renamed `id#n`.
pub fn disjoint_union(a: &Building, b: &Building) -> Building {
    let mut taken = ids(a);
    let mut rename = std::collections::HashMap::new();
    for c in &b.components {
        let id = if taken.contains(&c.id) { fresh_id(&taken, &c.id) } else { c.id.clone() };
        taken.insert(id.clone());
        rename.insert(c.id.clone(), id);
    }
    let re = |s: &String| rename[s].clone();
    let rz = |z: &PunctureId| PunctureId::new(re(&z.component), z.index);
    let mut out = a.clone();
    out.components.extend(b.components.iter().map(|c| Component { id: re(&c.id), ..c.clone() }));
    out.breaking_pairs
        .extend(b.breaking_pairs.iter().map(|p| BreakingPair { pos: rz(&p.pos), neg: rz(&p.neg) }));
    out.nodal_pairs.extend(b.nodal_pairs.iter().map(|(x, y)| (re(x), re(y))));
    out
}

/// Adds a node between two (possibly equal) components.
pub fn add_node(b: &Building, a: &str, c: &str) -> Result<Building> {
    b.component(a).map_err(surgery)?;
    b.component(c).map_err(surgery)?;
    let mut out = b.clone();
    out.nodal_pairs.push((a.to_string(), c.to_string()));
    Ok(out)
}

/// Glues a positive external puncture to a negative one over the same orbit.
pub fn glue_punctures(b: &Building, pos: &PunctureId, neg: &PunctureId) -> Result<Building> {
    let p = b.puncture(pos).map_err(surgery)?;
    let n = b.puncture(neg).map_err(surgery)?;
    if p.sign != Sign::Pos || n.sign != Sign::Neg {
        return Err(Error::Surgery(format!("{pos} must be positive and {neg} negative")));
    }
    if p.orbit != n.orbit {
        return Err(Error::Surgery(format!("orbit mismatch: {} vs {}", p.orbit, n.orbit)));
    }
    if p.constraint != 0.0 || n.constraint != 0.0 {
        return Err(Error::Surgery("glued punctures must carry constraint 0".into()));
    }
    for z in [pos, neg] {
        if !b.is_external(z) {
            return Err(Error::Surgery(format!("{z} is already in a breaking pair")));
        }
    }
    let mut out = b.clone();
    out.breaking_pairs.push(BreakingPair { pos: pos.clone(), neg: neg.clone() });
    Ok(out)
}

/// Inserts a trivial cylinder at an external puncture or into a breaking
/// pair. The new cylinder is appended, with punctures `[+, -]`.
pub fn augment(b: &Building, site: &Site) -> Result<Building> {
    let mut out = b.clone();
    match site {
        Site::Puncture(z) => {
            let p = b.puncture(z).map_err(surgery)?.clone();
            if !b.is_external(z) {
                return Err(Error::Surgery(format!("{z} is not an external puncture")));
            }
            let id = fresh_id(&ids(b), &format!("{}.cyl", z.component));
            let mut cyl = Component::trivial_cylinder(id.clone(), p.orbit.clone());
            let (outer, inner) = match p.sign {
                Sign::Pos => (0, 1),
                Sign::Neg => (1, 0),
            };
            cyl.punctures[outer].constraint = p.constraint;
            let ci = out.component_index(&z.component).expect("checked");
            out.components[ci].punctures[z.index].constraint = 0.0;
            out.components.push(cyl);
            let inner = PunctureId::new(id, inner);
            out.breaking_pairs.push(match p.sign {
                Sign::Pos => BreakingPair { pos: z.clone(), neg: inner },
                Sign::Neg => BreakingPair { pos: inner, neg: z.clone() },
            });
        }
        Site::Pair(i) => {
            let pair = b
                .breaking_pairs
                .get(*i)
                .ok_or_else(|| Error::Surgery(format!("unknown breaking pair {i}")))?
                .clone();
            let orbit = b.puncture(&pair.pos).map_err(surgery)?.orbit.clone();
            let id = fresh_id(&ids(b), &format!("{}.cyl", pair.pos.component));
            out.components.push(Component::trivial_cylinder(id.clone(), orbit));
            out.breaking_pairs[*i] = BreakingPair { pos: pair.pos, neg: PunctureId::new(id.clone(), 1) };
            out.breaking_pairs.push(BreakingPair { pos: PunctureId::new(id, 0), neg: pair.neg });
        }
    }
    Ok(out)
}

/// Removes trivial cylinders one at a time, splicing their neighbors.
pub fn core(b: &Building) -> Result<Building> {
    if b.components.iter().all(|c| c.is_trivial_cylinder()) {
        return Err(Error::NoCore("every component is a trivial cylinder".into()));
    }
    let mut cur = b.clone();
    while let Some(ci) = cur.components.iter().position(|c| c.is_trivial_cylinder()) {
        let cyl = cur.components[ci].clone();
        if cur.node_endpoints(&cyl.id) > 0 {
            return Err(Error::Surgery(format!("trivial cylinder {} carries a node", cyl.id)));
        }
        let ends = [PunctureId::new(cyl.id.clone(), 0), PunctureId::new(cyl.id.clone(), 1)];
        let pairs = [cur.pair_of(&ends[0]), cur.pair_of(&ends[1])];
        let partner = |pi: usize, z: &PunctureId| -> PunctureId {
            let p = &cur.breaking_pairs[pi];
            if &p.pos == z {
                p.neg.clone()
            } else {
                p.pos.clone()
            }
        };
        let mut next = cur.clone();
        match pairs {
            [Some(a), Some(b)] => {
                let (pa, pb) = (partner(a, &ends[0]), partner(b, &ends[1]));
                if pa.component == cyl.id || pb.component == cyl.id {
                    return Err(Error::Surgery(format!("trivial cylinder {} is glued to itself", cyl.id)));
                }
                let (pos, neg) = match cyl.punctures[0].sign {
                    Sign::Pos => (pb, pa),
                    Sign::Neg => (pa, pb),
                };
                let (lo, hi) = (a.min(b), a.max(b));
                next.breaking_pairs[lo] = BreakingPair { pos, neg };
                next.breaking_pairs.remove(hi);
            }
            [Some(a), None] | [None, Some(a)] => {
                let (glued, free) = if pairs[0].is_some() { (0, 1) } else { (1, 0) };
                let inner = partner(a, &ends[glued]);
                let c = cyl.punctures[free].constraint;
                next.breaking_pairs.remove(a);
                let k = next.component_index(&inner.component).expect("validated");
                next.components[k].punctures[inner.index].constraint = c;
            }
            [None, None] => {
                return Err(Error::NoCore(format!(
                    "trivial cylinder {} has both ends external",
                    cyl.id
                )));
            }
        }
        next.components.remove(ci);
        cur = next;
    }
    cur.validate().map_err(surgery)?;
    Ok(cur)
}

/// The subbuilding on the given components, with severed breaking
/// punctures made external at constraint 0.
pub fn subbuilding(b: &Building, keep: &[&str]) -> Result<(Building, ConstraintSet)> {
    for id in keep {
        b.component(id).map_err(surgery)?;
    }
    let keep: BTreeSet<&str> = keep.iter().copied().collect();
    let inside = |id: &str| keep.contains(id);
    let components =
        b.components.iter().filter(|c| inside(&c.id)).cloned().collect::<Vec<_>>();
    let breaking_pairs = b
        .breaking_pairs
        .iter()
        .filter(|p| inside(&p.pos.component) && inside(&p.neg.component))
        .cloned()
        .collect();
    let nodal_pairs = b
        .nodal_pairs
        .iter()
        .filter(|(x, y)| inside(x) && inside(y))
        .cloned()
        .collect();
    let sub = Building::new(components, breaking_pairs, nodal_pairs).map_err(surgery)?;
    let c = sub.constraints();
    Ok((sub, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::buildings::Puncture;
    use crate::orbits::OrbitRef;

    fn o(s: &str) -> OrbitRef {
        OrbitRef::new(s, 1)
    }

    fn cyl(id: &str) -> Building {
        Building::new(vec![Component::trivial_cylinder(id, o("h"))], vec![], vec![]).unwrap()
    }

    /// `[u]-[t]-[v]` with `u` on top.
    fn sandwich() -> Building {
        let u = Component::nontrivial("u", 0, 0, vec![Puncture::new(Sign::Neg, o("h"))]);
        let v = Component::nontrivial("v", 0, 0, vec![Puncture::new(Sign::Pos, o("h"))]);
        let t = Component::trivial_cylinder("t", o("h"));
        Building::new(
            vec![u, t, v],
            vec![
                BreakingPair { pos: PunctureId::new("t", 0), neg: PunctureId::new("u", 0) },
                BreakingPair { pos: PunctureId::new("v", 0), neg: PunctureId::new("t", 1) },
            ],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn union_examples() {
        let b = cyl("t");
        assert_eq!(disjoint_union(&Building::empty(), &b), b);
        let two = disjoint_union(&b, &b);
        assert_eq!(two.components()[1].id, "t#1");
        assert_eq!(two.euler_char(), 0);
        assert_eq!(two.external_punctures().len(), 4);
        let x = add_node(&disjoint_union(&b, &b), "t", "t#1").unwrap();
        let y = disjoint_union(&add_node(&b, "t", "t").unwrap(), &b);
        assert_eq!(x.euler_char(), y.euler_char());
        assert!(x.is_connected());
    }

    #[test]
    fn node_laws() {
        let b = sandwich();
        let n = add_node(&b, "u", "u").unwrap();
        assert_eq!(n.euler_char(), b.euler_char() - 2);
        assert_eq!(n.arithmetic_genus().unwrap(), b.arithmetic_genus().unwrap() + 1);
        assert!(add_node(&b, "u", "nope").is_err());
    }

    #[test]
    fn gluing_cylinders() {
        let two = disjoint_union(&cyl("a"), &cyl("b"));
        let g = glue_punctures(&two, &PunctureId::new("b", 0), &PunctureId::new("a", 1)).unwrap();
        assert_eq!(g.euler_char(), 0);
        assert_eq!(g.external_punctures().len(), 2);
        assert!(glue_punctures(&g, &PunctureId::new("b", 0), &PunctureId::new("a", 1)).is_err());
        assert!(glue_punctures(&two, &PunctureId::new("a", 1), &PunctureId::new("b", 0)).is_err());
        let mut c = two.clone();
        c.components[0].punctures[1].constraint = 1.0;
        assert!(glue_punctures(&c, &PunctureId::new("b", 0), &PunctureId::new("a", 1)).is_err());
    }

    #[test]
    fn augment_cylinder_at_puncture() {
        let a = augment(&cyl("t"), &Site::Puncture(PunctureId::new("t", 0))).unwrap();
        assert_eq!(a.components().len(), 2);
        assert_eq!(a.euler_char(), 0);
        assert_eq!(a.arithmetic_genus().unwrap(), 0);
        assert!(a.is_trivial_breaking(0).unwrap());
    }

    #[test]
    fn augment_at_pair() {
        let b = sandwich();
        let a = augment(&b, &Site::Pair(1)).unwrap();
        assert_eq!(a.components().len(), 4);
        assert_eq!(a.breaking_pairs().len(), 3);
        assert!(augment(&b, &Site::Pair(5)).is_err());
    }

    #[test]
    fn core_examples() {
        let b = sandwich();
        let c = core(&b).unwrap();
        assert_eq!(c.components().len(), 2);
        assert_eq!(
            c.breaking_pairs(),
            &[BreakingPair { pos: PunctureId::new("v", 0), neg: PunctureId::new("u", 0) }]
        );
        assert_eq!(core(&c).unwrap(), c);
        assert!(matches!(core(&cyl("t")), Err(Error::NoCore(_))));
        let a = augment(&c, &Site::Pair(0)).unwrap();
        assert_eq!(core(&a).unwrap().canonical(), c.canonical());
    }

    #[test]
    fn core_restores_external_constraint() {
        let mut u = Component::nontrivial("u", 0, 0, vec![Puncture::new(Sign::Pos, o("h"))]);
        u.punctures[0].constraint = 1.5;
        let b = Building::new(vec![u], vec![], vec![]).unwrap();
        let a = augment(&b, &Site::Puncture(PunctureId::new("u", 0))).unwrap();
        assert_eq!(a.puncture(&PunctureId::new("u", 0)).unwrap().constraint, 0.0);
        assert_eq!(a.puncture(&PunctureId::new("u.cyl#1", 0)).unwrap().constraint, 1.5);
        assert_eq!(core(&a).unwrap(), b);
    }

    #[test]
    fn subbuilding_examples() {
        let b = sandwich();
        let (all, c) = subbuilding(&b, &["u", "t", "v"]).unwrap();
        assert_eq!(all, b);
        assert_eq!(c, b.constraints());
        let (top, c) = subbuilding(&b, &["u"]).unwrap();
        assert_eq!(top.external_punctures(), vec![PunctureId::new("u", 0)]);
        assert_eq!(c[&PunctureId::new("u", 0)], 0.0);
        assert!(subbuilding(&b, &["w"]).is_err());
    }
}
