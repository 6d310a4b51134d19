mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use holo::buildings::{augment, core, Building, Puncture, Sign, Site};
use holo::degeneration::{classify_stable_limit, enumerate_limits, maximal_trivial_subbuildings, trivial_subbuilding_check, Taxonomy};
use holo::orbits::{Catalog, OrbitRef};
use holo::par::Execution;
use holo::{corpus, fixtures, index, io, Error};

fn sites(b: &Building) -> Vec<Site> {
    let mut s: Vec<Site> = b.external_punctures().into_iter().map(Site::Puncture).collect();
    s.extend((0..b.breaking_pairs().len()).map(Site::Pair));
    s
}

/// Applies `picks.len()` augmentations, each at site `pick mod #sites`.
fn augment_chain(b: &Building, picks: &[usize]) -> Building {
    let mut cur = b.clone();
    for &k in picks {
        let s = sites(&cur);
        cur = augment(&cur, &s[k % s.len()]).unwrap();
    }
    cur
}

fn arb_asymptotics(cat: &'static Catalog) -> impl Strategy<Value = Vec<Puncture>> {
    let refs: Vec<OrbitRef> = cat
        .orbits()
        .flat_map(|o| [1, 2].map(|k| OrbitRef::new(o.id.clone(), k)))
        .filter(|r| cat.has_cover(r))
        .collect();
    let one = (prop::sample::select(refs), any::<bool>(), prop::sample::select(vec![0.0, 0.5, 1.7])).prop_map(
        |(r, pos, c)| Puncture::new(if pos { Sign::Pos } else { Sign::Neg }, r).with_constraint(c),
    );
    prop::collection::vec(one, 1..=4)
}

fn demo() -> &'static Catalog {
    static C: std::sync::OnceLock<Catalog> = std::sync::OnceLock::new();
    C.get_or_init(fixtures::demo_catalog)
}

fn corpus_cat() -> &'static Catalog {
    static C: std::sync::OnceLock<Catalog> = std::sync::OnceLock::new();
    C.get_or_init(corpus::corpus_catalog)
}

fn check_enumerator(cat: &Catalog, asym: &[Puncture]) -> Result<(), TestCaseError> {
    let b = Building::new(vec![holo::buildings::Component::nontrivial("u", 0, 0, asym.to_vec())], vec![], vec![]).unwrap();
    if index::external_data(cat, &b, &b.constraints()).is_err() {
        return Ok(());
    }
    match enumerate_limits(cat, asym, Execution::Sequential) {
        Ok(found) => {
            let got: Vec<_> = found.iter().map(|l| (l.top.clone(), l.bottom.clone(), l.breaking_orbit.clone())).collect();
            prop_assert_eq!(got, common::oracle_limits(cat, asym));
            prop_assert_eq!(&found, &enumerate_limits(cat, asym, Execution::Parallel).unwrap());
            for l in &found {
                let m = l.materialize(cat, asym).unwrap();
                let v = classify_stable_limit(cat, &m, &m.constraints()).unwrap();
                prop_assert!(matches!(v.taxonomy, Some(Taxonomy::BrokenPair { .. })), "{:?}", v.violations);
            }
        }
        Err(Error::Inconsistent(_)) => {
            let (_, twice_cn) = common::oracle_side(cat, asym);
            let even = asym.iter().any(|p| {
                common::mu(cat, &p.orbit, index::threshold(p.sign, p.constraint)).rem_euclid(2) == 0
            });
            if even || twice_cn != 0 {
                return Ok(());
            }
            let smooth = Building::new(
                vec![holo::buildings::Component::nontrivial(
                    "u",
                    0,
                    0,
                    asym.iter()
                        .map(|p| {
                            let side = if p.sign == Sign::Pos { holo::spectral::Side::Minus } else { holo::spectral::Side::Plus };
                            let w = cat.alpha(&p.orbit, index::threshold(p.sign, p.constraint), side).unwrap();
                            p.clone().with_winding(w)
                        })
                        .collect(),
                )],
                vec![],
                vec![],
            )
            .unwrap();
            let nice = holo::degeneration::validate_nice(cat, &smooth).unwrap().ok;
            prop_assert!(!nice);
        }
        Err(e) => return Err(TestCaseError::fail(e.to_string())),
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn corpus_audits_hold_for_any_seed(seed in any::<u64>()) {
        let cat = corpus_cat();
        for b in corpus::corpus(cat, seed, 4) {
            prop_assert!(corpus::audit_identities(cat, &b).is_ok());
            prop_assert!(corpus::audit_surgery(cat, &b).is_ok());
        }
    }

    #[test]
    fn buildings_round_trip_through_json(seed in any::<u64>()) {
        let cat = corpus_cat();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = corpus::random_building(cat, &mut rng);
        let text = io::building_to_json(&b);
        let back = io::parse_building(&text).unwrap();
        prop_assert_eq!(&back, &b);
        prop_assert_eq!(io::building_to_json(&back), text);
    }

    #[test]
    fn core_forgets_augmentation_chains(seed in any::<u64>(), picks in prop::collection::vec(any::<usize>(), 1..5)) {
        let cat = corpus_cat();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = corpus::random_building(cat, &mut rng);
        let a = augment_chain(&b, &picks);
        let key = |x: &Building| core(x).map(|k| k.canonical()).map_err(|e| e.code());
        prop_assert_eq!(key(&a), key(&b));
        let (rb, ra) = (index::index_report(cat, &b, &b.constraints()).unwrap(), index::index_report(cat, &a, &a.constraints()).unwrap());
        prop_assert_eq!((rb.index, rb.c_n, rb.chi, rb.genus), (ra.index, ra.c_n, ra.chi, ra.genus));
    }

    #[test]
    fn augmented_fig3_stays_a_broken_pair(picks in prop::collection::vec(any::<usize>(), 0..5)) {
        let cat = demo();
        let b = augment_chain(&fixtures::fig3(), &picks);
        let v = classify_stable_limit(cat, &b, &b.constraints()).unwrap();
        prop_assert!(v.ok, "{:?}", v.violations);
        let expected = Some(Taxonomy::BrokenPair { top: "v1".into(), bottom: "v2".into(), breaking_orbit: OrbitRef::new("d", 1) });
        prop_assert_eq!(v.taxonomy, expected);
        for (ids, data) in maximal_trivial_subbuildings(cat, &b).unwrap() {
            let t = trivial_subbuilding_check(&data);
            prop_assert!(t.ok, "{:?}: {:?}", ids, t.violations);
            prop_assert_eq!(t.cylindrical, Some(true));
        }
    }

    #[test]
    fn enumerator_matches_oracle_on_demo(asym in arb_asymptotics(demo())) {
        check_enumerator(demo(), &asym)?;
    }

    #[test]
    fn enumerator_matches_oracle_on_corpus_catalog(asym in arb_asymptotics(corpus_cat())) {
        check_enumerator(corpus_cat(), &asym)?;
    }
}

#[test]
fn enumerator_oracle_finds_nonempty_cases() {
    let cat = corpus_cat();
    let e1 = OrbitRef::new("e1", 1);
    let asym = vec![Puncture::new(Sign::Pos, e1.clone()), Puncture::new(Sign::Pos, e1)];
    let found = enumerate_limits(cat, &asym, Execution::Sequential).unwrap();
    assert!(!found.is_empty());
    let got: Vec<_> = found.iter().map(|l| (l.top.clone(), l.bottom.clone(), l.breaking_orbit.clone())).collect();
    assert_eq!(got, common::oracle_limits(cat, &asym));
}
