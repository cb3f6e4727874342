use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rtrace::chain::{rt_via_traces, rt_via_traces_with, validate_chain, ChainData};
use rtrace::circle::{chain_data_of, closed_form_rt, geometric_rt, q, ArcRegion, LinearCircleMap, PlCircleMap, Q};
use rtrace::group::{FreeGroup, GroupRingElement, ZpiMatrix};
use rtrace::{Error, Relation, RtReport};

/// A random n-valued map of degree d whose breakpoints and values sit on
/// the grid `1/N`, `N = scale·n`, with branch k the first branch raised by
/// `(k−1)/n`.
fn random_grid_map(rng: &mut ChaCha8Rng, n: usize, d: i64, scale: usize) -> PlCircleMap {
    let big_n = (scale * n) as i64;
    let total = d * scale as i64;
    let mut heights = vec![0i64];
    for j in 0..big_n {
        let h = *heights.last().unwrap();
        let next = if j + 1 == big_n { total } else { h + rng.gen_range(-3..=3) };
        heights.push(next);
    }
    let branches = (0..n as i64)
        .map(|k| {
            heights
                .iter()
                .enumerate()
                .map(|(j, h)| (q(j as i64, big_n), q(*h, big_n) + q(k, n as i64)))
                .collect()
        })
        .collect();
    PlCircleMap::new(branches).unwrap()
}

#[test]
fn random_grid_maps_agree_with_geometry() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut accepted = 0;
    let mut attempts = 0;
    while accepted < 40 && attempts < 5000 {
        attempts += 1;
        let n = rng.gen_range(1..=3usize);
        let d = rng.gen_range(-5..=5i64);
        let scale = rng.gen_range(2..=4);
        let map = random_grid_map(&mut rng, n, d, scale);
        let geometric = match geometric_rt(&map, &ArcRegion::Whole) {
            Ok(s) => s,
            Err(e) if e.is_degenerate_geometry() => continue,
            Err(e) => panic!("{e}"),
        };
        let c = chain_data_of(&map).unwrap();
        assert!(validate_chain(&c).passed());
        let trace = rt_via_traces(&c).unwrap().rt;
        assert_eq!(trace, geometric, "{}", map.to_json());
        assert_eq!(trace, closed_form_rt(n, d).unwrap(), "{}", map.to_json());
        accepted += 1;
    }
    assert_eq!(accepted, 40, "too many degenerate samples");
}

#[test]
fn data_files_match_the_builtin_example() {
    let root = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data");
    let map = PlCircleMap::from_json(&std::fs::read_to_string(format!("{root}/perturbed_degree_five.json")).unwrap()).unwrap();
    assert_eq!(map, PlCircleMap::perturbed_degree_five());
    let chain = ChainData::from_json(&std::fs::read_to_string(format!("{root}/example.json")).unwrap()).unwrap();
    assert_eq!(chain, chain_data_of(&map).unwrap());
    let r = RtReport::new(FreeGroup::CYCLIC, rt_via_traces(&chain).unwrap().rt);
    assert_eq!(r.render(), "RT = -1*[(1,1)] + -1*[(a,1)] + -1*[(a,2)]  L = -3  N = 3\nexact = true");
}

fn ring(g: &FreeGroup, s: &str) -> GroupRingElement {
    GroupRingElement::parse(g, s).unwrap()
}

/// One vertex and two loops labelled by the free generators.
fn figure_eight(images: [&str; 2], m1: [[&str; 2]; 2]) -> ChainData {
    let g = FreeGroup::new(2);
    let hom = rtrace::io::hom_from_json(&format!(
        r#"{{"n":1,"generators":{{"a1":{{"translations":["{}"],"perm":[1]}},"a2":{{"translations":["{}"],"perm":[1]}}}}}}"#,
        images[0], images[1]
    ))
    .unwrap();
    let m0 = ZpiMatrix::from_rows(vec![vec![ring(&g, "1")]]).unwrap();
    let m1 = ZpiMatrix::from_rows(m1.iter().map(|r| r.iter().map(|x| ring(&g, x)).collect()).collect()).unwrap();
    let bd = ZpiMatrix::from_rows(vec![vec![ring(&g, "-1 + a1"), ring(&g, "-1 + a2")]]).unwrap();
    ChainData::new(hom, vec![vec![m0], vec![m1]], vec![None, Some(bd)]).unwrap()
}

#[test]
fn free_group_identity_has_euler_characteristic_trace() {
    let c = figure_eight(["a1", "a2"], [["1", "0"], ["0", "1"]]);
    assert!(validate_chain(&c).passed());
    let r = rt_via_traces(&c).unwrap();
    assert_eq!(r.rt.render(&FreeGroup::new(2)), "-1*[(1,1)]");
    assert_eq!(r.lefschetz, BigInt::from(-1));
    assert!(r.exact);
}

#[test]
fn free_group_swap_is_flagged_inexact() {
    // a1 ↦ a2, a2 ↦ a1; edges swap, so the edge traces vanish. The class of
    // 1 under twisted conjugacy is infinite, so the search cannot close it.
    let c = figure_eight(["a2", "a1"], [["0", "1"], ["1", "0"]]);
    assert!(validate_chain(&c).passed());
    let r = rt_via_traces_with(&c, &Relation::bounded(c.hom.clone(), 6)).unwrap();
    assert_eq!(r.rt.render(&FreeGroup::new(2)), "1*[(1,1)]?");
    assert!(!r.exact);
    assert_eq!(r.nielsen_lower, 0);
    assert_eq!(r.lefschetz, BigInt::from(1));
}

#[test]
fn broken_chain_map_is_reported() {
    let c = figure_eight(["a1", "a2"], [["1", "0"], ["0", "a2"]]);
    let report = validate_chain(&c);
    assert!(!report.passed());
}

#[test]
fn invalid_map_files() {
    assert!(matches!(PlCircleMap::from_json("{"), Err(Error::Json(_))));
    let bad = r#"{"n":1,"branches":[[["0","0"],["1/2","x"],["1","2"]]]}"#;
    assert!(matches!(PlCircleMap::from_json(bad), Err(Error::Parse { .. })));
    let short = r#"{"n":2,"branches":[[["0","0"],["1","2"]]]}"#;
    assert!(matches!(PlCircleMap::from_json(short), Err(Error::BranchCount { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nudging_linear_maps_keeps_the_trace(n in 1usize..=3, d in -6i64..=6, num in 1i64..=9) {
        prop_assume!(d != n as i64);
        let l = LinearCircleMap::new(n, d).unwrap();
        // stay below the gap between fixed points
        let eps: Q = q(num, 40 * (d - n as i64).abs());
        for e in [eps.clone(), -eps] {
            match geometric_rt(&l.to_pl().nudged(&e), &ArcRegion::Whole) {
                Ok(s) => prop_assert_eq!(s, closed_form_rt(n, d).unwrap()),
                Err(err) => prop_assert!(err.is_degenerate_geometry()),
            }
        }
    }

    #[test]
    fn pl_json_round_trips(n in 1usize..=3, d in -6i64..=6, scale in 1usize..=3) {
        let m = LinearCircleMap::new(n, d).unwrap().simplicial_representative(scale).unwrap();
        prop_assert_eq!(PlCircleMap::from_json(&m.to_json()).unwrap(), m.clone());
        let c = chain_data_of(&m).unwrap();
        prop_assert_eq!(ChainData::from_json(&c.to_json()).unwrap(), c);
    }
}
