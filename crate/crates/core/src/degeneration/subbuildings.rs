use std::collections::{BTreeMap, BTreeSet};

use super::{Code, Violation};
use crate::buildings::{Building, PunctureId, Sign};
use crate::error::{Error, Result};
use crate::index::{self, threshold};
use crate::orbits::{gcd, Catalog, OrbitRef};
use crate::spectral::Side;

/// Boundary data of a maximal trivial subbuilding over a simple orbit γ.
///
/// `C` punctures are glued to nontrivial neighbors, `E` punctures are
/// external. Windings are in the global trivialization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrivialBoundaryData {
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub s: usize,
    pub m_c: u32,
    pub m_e: u32,
    /// Controlling winding of the neighbor ends.
    pub w_c: i64,
    /// Extremal winding at the external ends.
    pub w_e: i64,
    /// Euler characteristic of the circle-compactified subbuilding.
    pub chi: i64,
    /// Unconstrained extremal windings of `γ^{m_C}`.
    pub alpha_minus: i64,
    pub alpha_plus: i64,
    /// Constrained extremal winding at each positive and negative `E` puncture.
    pub e_alpha_pos: Vec<i64>,
    pub e_alpha_neg: Vec<i64>,
    /// Asymptotic defects of the neighbor ends glued to `Γ̂⁺_C` and `Γ̂⁻_C`.
    pub neighbor_defects_pos: Vec<i64>,
    pub neighbor_defects_neg: Vec<i64>,
    pub simple_even: bool,
    pub simple_odd_hyperbolic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrivialBranch {
    NoExternal,
    OppositeSigns,
    Determinant,
}

impl TrivialBranch {
    pub fn as_str(self) -> &'static str {
        match self {
            TrivialBranch::NoExternal => "no_external",
            TrivialBranch::OppositeSigns => "opposite_signs",
            TrivialBranch::Determinant => "determinant",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrivialVerdict {
    pub ok: bool,
    pub violations: Vec<Violation>,
    pub branch: Option<TrivialBranch>,
    /// `c_N(ũᵗ;ĉ) + Σ_C [p(γ_z) + def]`, once the relations hold.
    pub sum: Option<i64>,
    pub cylindrical: Option<bool>,
}

fn reject(v: Violation, branch: Option<TrivialBranch>) -> TrivialVerdict {
    TrivialVerdict { ok: false, violations: vec![v], branch, sum: None, cylindrical: None }
}

/// Checks the homology relations, the multiplicity and winding dichotomy
/// and the Chern identity for a maximal trivial subbuilding.
pub fn trivial_subbuilding_check(d: &TrivialBoundaryData) -> TrivialVerdict {
    let (p, q, r, s) = (d.p as i64, d.q as i64, d.r as i64, d.s as i64);
    let invalid = |m: String| reject(Violation::new(Code::InvalidData, "data", m), None);
    if p + r == 0 || q + s == 0 || p + q == 0 {
        return invalid(format!("(p, q, r, s) = ({p}, {q}, {r}, {s}) needs p+r, q+s, p+q > 0"));
    }
    if d.m_c == 0 || d.m_e == 0 {
        return invalid("multiplicities must be positive".into());
    }
    if d.e_alpha_pos.len() != d.r
        || d.e_alpha_neg.len() != d.s
        || d.neighbor_defects_pos.len() != d.p
        || d.neighbor_defects_neg.len() != d.q
    {
        return invalid("per-puncture lists do not match (p, q, r, s)".into());
    }
    let (mc, me) = (d.m_c as i64, d.m_e as i64);
    if p * mc + r * me != q * mc + s * me {
        return reject(
            Violation::new(
                Code::HomologyMultiplicity,
                "data",
                format!("p·m_C + r·m_E = {} but q·m_C + s·m_E = {}", p * mc + r * me, q * mc + s * me),
            ),
            None,
        );
    }
    let (wc, we) = (d.w_c, d.w_e);
    if p * wc + r * we != q * wc + s * we {
        return reject(
            Violation::new(
                Code::HomologyWinding,
                "data",
                format!("p·w_C + r·w_E = {} but q·w_C + s·w_E = {}", p * wc + r * we, q * wc + s * we),
            ),
            None,
        );
    }
    if let Some(a) = d.e_alpha_pos.iter().chain(&d.e_alpha_neg).find(|&&a| a != we) {
        return reject(
            Violation::new(Code::ExtremalWinding, "data", format!("external extremal winding {a} ≠ w_E = {we}")),
            None,
        );
    }

    let branch = if r + s == 0 {
        TrivialBranch::NoExternal
    } else if p == q && r == s {
        TrivialBranch::OppositeSigns
    } else {
        TrivialBranch::Determinant
    };
    match branch {
        TrivialBranch::NoExternal => {}
        TrivialBranch::OppositeSigns => {
            let allowed = (d.m_c == 1 && d.m_e == 1 && d.simple_even)
                || (d.m_c == 2 && d.m_e == 2 && d.simple_odd_hyperbolic);
            let windings = wc == we && we == d.alpha_plus && d.alpha_plus == d.alpha_minus;
            if !(allowed && windings) {
                return reject(
                    Violation::new(
                        Code::OppositeSigns,
                        "data",
                        format!(
                            "p = q and r = s need m_C = m_E = 1 over an even orbit or 2 over an odd \
                             hyperbolic one, with w_C = w_E = α±; got m = ({}, {}), w = ({wc}, {we}), \
                             α = ({}, {})",
                            d.m_c, d.m_e, d.alpha_minus, d.alpha_plus
                        ),
                    ),
                    Some(branch),
                );
            }
        }
        TrivialBranch::Determinant => {
            if mc * we != me * wc {
                return reject(
                    Violation::new(
                        Code::Determinant,
                        "data",
                        format!("m_C·w_E = {} but m_E·w_C = {}", mc * we, me * wc),
                    ),
                    Some(branch),
                );
            }
            if gcd(d.m_c as u64, wc.unsigned_abs()) != 1 || gcd(d.m_e as u64, we.unsigned_abs()) != 1 {
                return reject(
                    Violation::new(
                        Code::NonSimpleWinding,
                        "data",
                        format!("gcd(m_C, w_C) = gcd({}, {wc}) and gcd(m_E, w_E) = gcd({}, {we}) must be 1", d.m_c, d.m_e),
                    ),
                    Some(branch),
                );
            }
        }
    }

    let (am, ap) = (d.alpha_minus, d.alpha_plus);
    let c_n = -d.chi + p * am + d.e_alpha_pos.iter().sum::<i64>() - q * ap - d.e_alpha_neg.iter().sum::<i64>();
    let parity = (p + q) * (ap - am);
    let defects: i64 = d.neighbor_defects_pos.iter().chain(&d.neighbor_defects_neg).sum();
    let sum = c_n + parity + defects;
    if sum != -d.chi {
        return reject(
            Violation::new(
                Code::CnIdentity,
                "data",
                format!("c_N + Σ[p + def] = {sum} but -χ = {}", -d.chi),
            ),
            Some(branch),
        );
    }
    TrivialVerdict { ok: true, violations: Vec::new(), branch: Some(branch), sum: Some(sum), cylindrical: Some(sum == 0) }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantVerdict {
    pub ok: bool,
    pub violations: Vec<Violation>,
    /// `c_N(ũᶜ) + 2·#Δ̂_N = -χ_closed + 2·n_attach`.
    pub value: i64,
}

/// Bound for a maximal constant subbuilding with `n_attach` nodes to
/// nonconstant components; `stability` lists `χ(Ṡᵢ)` per constant component.
pub fn constant_subbuilding_bound(chi_closed: i64, n_attach: usize, stability: &[i64]) -> ConstantVerdict {
    let value = -chi_closed + 2 * n_attach as i64;
    let mut violations = Vec::new();
    if n_attach == 0 {
        violations.push(Violation::new(Code::InvalidData, "data", "a constant subbuilding needs attaching nodes"));
    }
    for (i, &x) in stability.iter().enumerate() {
        if x >= 0 {
            violations.push(Violation::new(Code::Unstable, format!("component {i}"), format!("χ(Ṡ) = {x} ≥ 0")));
        }
    }
    if violations.is_empty() && !(value > n_attach as i64) {
        violations.push(Violation::new(
            Code::ConstantBound,
            "data",
            format!("c_N + 2·#Δ̂_N = {value} does not exceed #Δ̂_N = {n_attach}"),
        ));
    }
    ConstantVerdict { ok: violations.is_empty(), violations, value }
}

fn side_alpha(cat: &Catalog, orbit: &OrbitRef, sign: Sign, c: f64) -> Result<i64> {
    let side = if sign == Sign::Pos { Side::Minus } else { Side::Plus };
    cat.alpha(orbit, threshold(sign, c), side)
}

fn uniform<T: PartialEq + Copy + std::fmt::Display>(what: &str, xs: &[T]) -> Result<Option<T>> {
    match xs.first() {
        None => Ok(None),
        Some(&x) if xs.iter().all(|&y| y == x) => Ok(Some(x)),
        Some(_) => Err(Error::Inconsistent(format!(
            "{what} differ across the subbuilding: {}",
            xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
        ))),
    }
}

/// Boundary data of every maximal trivial subbuilding of `b`, keyed by its
/// sorted component ids. Neighbor ends need controlling windings.
pub fn maximal_trivial_subbuildings(
    cat: &Catalog,
    b: &Building,
) -> Result<Vec<(Vec<String>, TrivialBoundaryData)>> {
    let comps = b.components();
    let trivial: Vec<bool> = comps.iter().map(|c| c.is_trivial()).collect();
    let mut parent: Vec<usize> = (0..comps.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for pr in b.breaking_pairs() {
        let a = b.component_index(&pr.pos.component).expect("validated");
        let c = b.component_index(&pr.neg.component).expect("validated");
        if trivial[a] && trivial[c] {
            let (ra, rc) = (find(&mut parent, a), find(&mut parent, c));
            parent[ra] = rc;
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in (0..comps.len()).filter(|&i| trivial[i]) {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }

    let mut out = Vec::new();
    for members in groups.values() {
        let inside: BTreeSet<usize> = members.iter().copied().collect();
        let simple = comps[members[0]].punctures[0].orbit.simple.clone();
        let chi: i64 = members
            .iter()
            .map(|&i| 2 - 2 * comps[i].genus as i64 - comps[i].punctures.len() as i64)
            .sum();
        let (mut mc, mut wc, mut me) = (Vec::new(), Vec::new(), Vec::new());
        let (mut e_pos, mut e_neg, mut def_pos, mut def_neg) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        let (mut p, mut q) = (0, 0);
        for &i in members {
            for (j, pu) in comps[i].punctures.iter().enumerate() {
                let z = PunctureId::new(comps[i].id.clone(), j);
                match b.pair_of(&z) {
                    None => {
                        me.push(pu.orbit.k);
                        let a = side_alpha(cat, &pu.orbit, pu.sign, pu.constraint)?;
                        if pu.sign == Sign::Pos { e_pos.push(a) } else { e_neg.push(a) }
                    }
                    Some(pi) => {
                        let pair = &b.breaking_pairs()[pi];
                        let other = if pair.pos == z { &pair.neg } else { &pair.pos };
                        let oi = b.component_index(&other.component).expect("validated");
                        if inside.contains(&oi) {
                            continue;
                        }
                        let neighbor = &comps[oi];
                        let w = neighbor.punctures[other.index].controlling_winding.ok_or_else(|| {
                            Error::IncompleteInput(vec![format!("{other}.controlling_winding")])
                        })?;
                        let report = index::component_report(cat, b, &neighbor.id)?;
                        let def = report
                            .defect
                            .ok_or_else(|| Error::Inconsistent(format!("neighbor {} of a trivial subbuilding is not nontrivial", neighbor.id)))?
                            .per_puncture[other.index];
                        mc.push(pu.orbit.k);
                        wc.push(w);
                        if pu.sign == Sign::Pos {
                            p += 1;
                            def_pos.push(def);
                        } else {
                            q += 1;
                            def_neg.push(def);
                        }
                    }
                }
            }
        }
        let m_c = uniform("multiplicities at glued punctures", &mc)?;
        let w_c = uniform("controlling windings of neighbor ends", &wc)?;
        let m_e = uniform("multiplicities at external punctures", &me)?;
        let e_all: Vec<i64> = e_pos.iter().chain(&e_neg).copied().collect();
        let w_e = uniform("extremal windings at external punctures", &e_all)?;
        let m_c = m_c.or(m_e).expect("a trivial component has punctures");
        let m_e = m_e.unwrap_or(m_c);
        let w_c = w_c.unwrap_or(0);
        let w_e = w_e.unwrap_or(w_c);
        let orbit = OrbitRef::new(simple.clone(), m_c);
        let summary = cat.cz_index(&orbit, 0.0)?;
        let simple_ref = OrbitRef::new(simple.clone(), 1);
        let simple_even = cat.parity(&simple_ref)? == 0;
        let simple_odd_hyperbolic = !simple_even && cat.is_hyperbolic(&simple)?;
        let mut ids: Vec<String> = members.iter().map(|&i| comps[i].id.clone()).collect();
        ids.sort();
        out.push((
            ids,
            TrivialBoundaryData {
                p,
                q,
                r: e_pos.len(),
                s: e_neg.len(),
                m_c,
                m_e,
                w_c,
                w_e,
                chi,
                alpha_minus: summary.alpha_minus,
                alpha_plus: summary.alpha_plus,
                e_alpha_pos: e_pos,
                e_alpha_neg: e_neg,
                neighbor_defects_pos: def_pos,
                neighbor_defects_neg: def_neg,
                simple_even,
                simple_odd_hyperbolic,
            },
        ));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}
