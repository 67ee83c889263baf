mod common;

use coarse_lab::functions::{
    classify, default_stages, eventual_constancy_index, oscillation, ClassifyOptions, ConstancyIndex, Stage,
    WindowFunction,
};
use coarse_lab::metric::DEFAULT_BALL_CAP;
use coarse_lab::{Element, GeneratorSpec, GeneratorSystem, GroupSpec, Window, WindowShape};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use common::{bfs_distance, bfs_layers};

const CAP: usize = DEFAULT_BALL_CAP;

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn cube(n: usize) -> (Window, GeneratorSystem) {
    let spec = GroupSpec::boolean(n).unwrap();
    let w = spec.window(WindowShape::Support { coords: (0..n).collect() }).unwrap();
    (w, GeneratorSpec::Basis { count: n }.build(&spec).unwrap())
}

fn line(lo: i64, hi: i64) -> (Window, GeneratorSystem) {
    let spec = GroupSpec::integers();
    let w = spec.window(WindowShape::Box { ranges: vec![(lo, hi)] }).unwrap();
    (w, GeneratorSpec::Basis { count: 1 }.build(&spec).unwrap())
}

/// Eventual-constancy index computed straight from the definition with BFS.
fn oracle_index(w: &Window, sys: &GeneratorSystem, values: &[u8], r: u32, max_m: u32) -> Option<u32> {
    let spec = sys.spec();
    let zero = Element::identity();
    let norm = |x: &Element| bfs_distance(spec, sys.generators(), &zero, x, max_m + 1).unwrap_or(u32::MAX);
    let value = |x: &Element| values[w.position(x).unwrap()];
    for m in 0..=max_m {
        let off: Vec<&Element> = w.elements().iter().filter(|x| norm(x) > m).collect();
        if off.is_empty() {
            return (m == 0).then_some(0);
        }
        let constant = off.iter().all(|x| value(x) == value(off[0]));
        let flat = off.iter().all(|x| {
            let ball = bfs_layers(spec, sys.generators(), x, r);
            let interior = ball.keys().all(|y| w.contains(y));
            !interior || ball.keys().all(|y| value(y) == value(x))
        });
        if constant && flat {
            return Some(m);
        }
    }
    None
}

#[test]
fn every_binary_function_on_the_3_cube() {
    let (w, sys) = cube(3);
    let idx = ConstancyIndex::new(&w, &sys, 1, 8, CAP).unwrap();
    for bits in 0u32..256 {
        let values: Vec<u8> = (0..8).map(|i| (bits >> i & 1) as u8).collect();
        let m = idx.index_of(&values);
        assert_eq!(m, oracle_index(&w, &sys, &values, 1, 8), "bits {bits:08b}");
        if let Some(m) = m.filter(|&m| m > 0) {
            assert_eq!(idx.holds_at(&values, m - 1), Some(false));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn index_matches_oracle_on_line(values in proptest::collection::vec(0u8..2, 21), r in 0u32..3) {
        let (w, sys) = line(-10, 10);
        let f = WindowFunction::new(w.clone(), values.iter().map(|&v| q(v as i64)).collect()).unwrap();
        let got = eventual_constancy_index(&f, r, &sys, 20, CAP).unwrap();
        prop_assert_eq!(got, oracle_index(&w, &sys, &values, r, 20));
    }

    #[test]
    fn oscillation_grows_with_scale(values in proptest::collection::vec(-5i64..5, 16)) {
        let (w, sys) = cube(4);
        let f = WindowFunction::new(w, values.into_iter().map(q).collect()).unwrap();
        let rep = classify(&f, &sys, &[0, 1, 2, 3], &default_stages(), &ClassifyOptions::default(), CAP).unwrap();
        prop_assert_eq!(rep.osc[0].osc.0.clone(), q(0));
        prop_assert!(rep.osc.windows(2).all(|p| p[0].osc <= p[1].osc));
        for (row, step) in rep.osc.iter().zip(&rep.macro_uniform.step) {
            prop_assert!(step.osc <= row.osc);
        }
    }

    #[test]
    fn oscillation_entries_agree_with_bfs(values in proptest::collection::vec(-9i64..9, 31), r in 0u32..4) {
        let (w, sys) = line(-15, 15);
        let f = WindowFunction::new(w.clone(), values.iter().map(|&v| q(v)).collect()).unwrap();
        let table = oscillation(&f, r, &sys, r, CAP).unwrap();
        prop_assert_eq!(table.entries.len(), 31 - 2 * r as usize);
        for e in &table.entries {
            let ball = bfs_layers(sys.spec(), sys.generators(), &e.x, r);
            let vals: Vec<i64> = ball.keys().map(|y| values[w.position(y).unwrap()]).collect();
            let diam = vals.iter().max().unwrap() - vals.iter().min().unwrap();
            prop_assert_eq!(e.diam.0.clone(), q(diam));
        }
    }

    #[test]
    fn classify_is_translation_invariant(values in proptest::collection::vec(-20i64..20, 25), t in -50i64..50) {
        let (w, sys) = line(0, 24);
        let (wt, _) = line(t, 24 + t);
        let f = WindowFunction::new(w, values.iter().map(|&v| q(v)).collect()).unwrap();
        let spec = sys.spec();
        let shift = spec.scalar(t).unwrap();
        let g = WindowFunction::from_fn(wt, |x| f.get(&spec.sub(x, &shift).unwrap()).unwrap().clone());
        let stages = |shift: i64| vec![Stage { n: 3, centers: vec![spec.scalar(5 + shift).unwrap()] }];
        let opts = ClassifyOptions::default();
        let a = classify(&f, &sys, &[1, 2, 4], &stages(0), &opts, CAP).unwrap();
        let b = classify(&g, &sys, &[1, 2, 4], &stages(t), &opts, CAP).unwrap();
        prop_assert_eq!(a.osc, b.osc);
        prop_assert_eq!(a.macro_uniform, b.macro_uniform);
        prop_assert_eq!(a.bornologous, b.bornologous);
    }
}

#[test]
fn support_translation_on_the_cube() {
    let (w, sys) = cube(4);
    let spec = sys.spec().clone();
    let t = spec.element([(1, 1), (3, 1)]).unwrap();
    let f = WindowFunction::from_fn(w.clone(), |x| q(x.entries().len() as i64 * if x.value(0) == BigInt::from(0) { 3 } else { -2 }));
    let g = WindowFunction::from_fn(w, |x| f.get(&spec.sub(x, &t).unwrap()).unwrap().clone());
    let opts = ClassifyOptions::default();
    let a = classify(&f, &sys, &[1, 2], &[], &opts, CAP).unwrap();
    let b = classify(&g, &sys, &[1, 2], &[], &opts, CAP).unwrap();
    assert_eq!(a.osc, b.osc);
    assert_eq!(a.macro_uniform, b.macro_uniform);
}
