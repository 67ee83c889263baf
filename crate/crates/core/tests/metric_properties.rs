mod common;

use std::collections::BTreeSet;

use coarse_lab::metric::DEFAULT_BALL_CAP;
use coarse_lab::{Element, GeneratorSpec, GeneratorSystem, GroupSpec};
use proptest::prelude::*;

use common::{bfs_ball, bfs_distance};

const CAP: usize = DEFAULT_BALL_CAP;

fn z_powers() -> GeneratorSystem {
    let spec = GroupSpec::integers();
    GeneratorSpec::Powers { base: coarse_lab::group::IntValue(3.into()), count: 6 }
        .build(&spec)
        .unwrap()
}

fn z_list(values: &[i64]) -> GeneratorSystem {
    let spec = GroupSpec::integers();
    let gens = values.iter().map(|&v| spec.scalar(v).unwrap()).collect();
    GeneratorSystem::new(spec, gens).unwrap()
}

fn boolean(n: usize) -> GeneratorSystem {
    let spec = GroupSpec::boolean(n).unwrap();
    GeneratorSpec::Basis { count: n }.build(&spec).unwrap()
}

fn z3_sum() -> GeneratorSystem {
    let spec = GroupSpec::bounded_uniform(3, 6).unwrap();
    GeneratorSpec::Basis { count: 6 }.build(&spec).unwrap()
}

fn plane() -> GeneratorSystem {
    let spec = GroupSpec::lattice(2).unwrap();
    let gens = vec![
        spec.element([(0, 1)]).unwrap(),
        spec.element([(1, 1)]).unwrap(),
        spec.element([(0, 1), (1, 1)]).unwrap(),
    ];
    GeneratorSystem::new(spec, gens).unwrap()
}

fn int(spec: &GroupSpec, lo: i64, hi: i64) -> impl Strategy<Value = Element> + use<> {
    let spec = spec.clone();
    (lo..hi).prop_map(move |v| spec.scalar(v).unwrap())
}

fn mask(spec: &GroupSpec, bits: u32) -> impl Strategy<Value = Element> + use<> {
    let spec = spec.clone();
    (0u64..1 << bits).prop_map(move |m| common::from_mask(&spec, m))
}

fn ternary(spec: &GroupSpec) -> impl Strategy<Value = Element> + use<> {
    let spec = spec.clone();
    proptest::collection::vec(0i64..3, 6).prop_map(move |v| spec.element(v.into_iter().enumerate()).unwrap())
}

fn pair(spec: &GroupSpec) -> impl Strategy<Value = Element> + use<> {
    let spec = spec.clone();
    (-8i64..8, -8i64..8).prop_map(move |(a, b)| spec.element([(0, a), (1, b)]).unwrap())
}

fn check_axioms(sys: &GeneratorSystem, x: &Element, y: &Element, z: &Element, bound: u32) -> Result<(), TestCaseError> {
    let d = |a: &Element, b: &Element| sys.word_distance(a, b, bound).unwrap().value;
    let (xy, yx, xz, yz) = (d(x, y), d(y, x), d(x, z), d(y, z));
    prop_assert_eq!(d(x, x), Some(0));
    prop_assert_eq!(xy, yx);
    prop_assert_eq!(xy == Some(0), x == y);
    if let (Some(xy), Some(yz), Some(xz)) = (xy, yz, xz) {
        prop_assert!(xz <= xy + yz, "d(x,z)={xz} > {xy} + {yz}");
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn axioms_on_z_with_powers(x in int(&GroupSpec::integers(), -400, 400),
                               y in int(&GroupSpec::integers(), -400, 400),
                               z in int(&GroupSpec::integers(), -400, 400)) {
        check_axioms(&z_powers(), &x, &y, &z, 40)?;
    }

    #[test]
    fn axioms_on_boolean_sum(x in mask(&GroupSpec::boolean(10).unwrap(), 10),
                             y in mask(&GroupSpec::boolean(10).unwrap(), 10),
                             z in mask(&GroupSpec::boolean(10).unwrap(), 10)) {
        check_axioms(&boolean(10), &x, &y, &z, 10)?;
    }

    #[test]
    fn axioms_on_ternary_sum(x in ternary(&z3_sum().spec().clone()),
                             y in ternary(&z3_sum().spec().clone()),
                             z in ternary(&z3_sum().spec().clone())) {
        check_axioms(&z3_sum(), &x, &y, &z, 12)?;
    }

    #[test]
    fn axioms_on_plane(x in pair(plane().spec()), y in pair(plane().spec()), z in pair(plane().spec())) {
        check_axioms(&plane(), &x, &y, &z, 40)?;
    }

    #[test]
    fn distance_matches_bfs_on_z(x in int(&GroupSpec::integers(), -60, 60), y in int(&GroupSpec::integers(), -60, 60)) {
        let sys = z_list(&[2, 5, 7]);
        let got = sys.word_distance(&x, &y, 14).unwrap().value;
        prop_assert_eq!(got, bfs_distance(sys.spec(), sys.generators(), &x, &y, 14));
    }

    #[test]
    fn distance_matches_bfs_on_plane(x in pair(plane().spec()), y in pair(plane().spec())) {
        let sys = plane();
        let got = sys.word_distance(&x, &y, 32).unwrap().value;
        prop_assert_eq!(got, bfs_distance(sys.spec(), sys.generators(), &x, &y, 32));
    }

    #[test]
    fn balls_match_bfs(x in ternary(&z3_sum().spec().clone()), n in 0u32..4) {
        let sys = z3_sum();
        prop_assert_eq!(sys.ball(&x, n, CAP).unwrap(), bfs_ball(sys.spec(), sys.generators(), &x, n));
    }

    #[test]
    fn sumsets_are_nested(x in int(&GroupSpec::integers(), -200, 200), n in 0u32..6) {
        let sys = z_powers();
        if sys.in_sumset(&x, n) {
            prop_assert!(sys.in_sumset(&x, n + 1));
        }
    }

    #[test]
    fn group_laws(x in ternary(&z3_sum().spec().clone()),
                  y in ternary(&z3_sum().spec().clone()),
                  z in ternary(&z3_sum().spec().clone())) {
        let s = z3_sum().spec().clone();
        prop_assert_eq!(s.add(&x, &y).unwrap(), s.add(&y, &x).unwrap());
        let left = s.add(&s.add(&x, &y).unwrap(), &z).unwrap();
        let right = s.add(&x, &s.add(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert!(s.add(&x, &s.neg(&x)).unwrap().is_identity());
        prop_assert_eq!(s.neg(&s.neg(&x)), x);
    }
}

/// Every subset of `pool` with at most `k` elements, in no particular order.
fn subsets(pool: &[Element], k: usize) -> Vec<Vec<Element>> {
    let mut out = vec![Vec::new()];
    for p in pool {
        let grown: Vec<Vec<Element>> = out
            .iter()
            .filter(|s| s.len() < k)
            .map(|s| {
                let mut s = s.clone();
                s.push(p.clone());
                s
            })
            .collect();
        out.extend(grown);
    }
    out
}

fn brute_cover_radius(sys: &GeneratorSystem, set: &[Element], k: usize, pool: &[Element], max_r: u32) -> Option<u32> {
    let spec = sys.spec();
    (0..=max_r).find(|&r| {
        subsets(pool, k).iter().filter(|c| !c.is_empty()).any(|centers| {
            set.iter().all(|s| {
                centers.iter().any(|c| bfs_distance(spec, sys.generators(), c, s, r).is_some())
            })
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn cover_radius_matches_brute_force(points in proptest::collection::btree_set(-12i64..12, 1..7), k in 1usize..3) {
        let sys = z_list(&[1, 3]);
        let spec = sys.spec().clone();
        let set: Vec<Element> = points.iter().map(|&v| spec.scalar(v).unwrap()).collect();
        let pool: Vec<Element> = (-14i64..14).map(|v| spec.scalar(v).unwrap()).collect();
        let got = sys.cover_radius(&set, k, 10, CAP).unwrap();
        prop_assert_eq!(Some(got.radius), brute_cover_radius(&sys, &set, k, &pool, 10));
        prop_assert!(got.centers.len() <= k);
        let covered = sys.ideal_ball(&got.centers, got.radius, CAP).unwrap();
        prop_assert!(set.iter().all(|s| covered.contains(s)));
    }

    #[test]
    fn cover_radius_non_increasing_in_k(bits in proptest::collection::btree_set(0u64..64, 1..8)) {
        let sys = boolean(6);
        let set: Vec<Element> = bits.iter().map(|&m| common::from_mask(sys.spec(), m)).collect();
        let radii: Vec<u32> = (1..=4).map(|k| sys.cover_radius(&set, k, 6, CAP).unwrap().radius).collect();
        prop_assert!(radii.windows(2).all(|w| w[0] >= w[1]), "{radii:?}");
    }
}

#[test]
fn ideal_ball_is_union_of_balls() {
    let sys = z_powers();
    let spec = sys.spec();
    let centers: Vec<Element> = [-40, 0, 17].iter().map(|&v| spec.scalar(v).unwrap()).collect();
    let mut union = BTreeSet::new();
    for c in &centers {
        union.extend(sys.ball(c, 2, CAP).unwrap());
    }
    assert_eq!(sys.ideal_ball(&centers, 2, CAP).unwrap(), union);
}

#[test]
fn ball_cap_is_enforced() {
    let sys = boolean(30);
    assert!(sys.ball(&Element::identity(), 6, 1000).is_err());
}
