use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use proptest::prelude::*;
use twisted_cubic::classify::{Geometry, OrbitPartition};
use twisted_cubic::covering::{build_gdrs, syndrome_census, GdrsCode, SyndromeCensus};
use twisted_cubic::gf::field_of_order;
use twisted_cubic::incidence::{count_incidences, IncidenceCounts};
use twisted_cubic::pg3::Coords;

const ORDERS: [u64; 8] = [3, 4, 5, 7, 8, 9, 11, 13];

struct World {
    geom: Geometry,
    part: OrbitPartition,
    counts: IncidenceCounts,
}

fn world(q: u64) -> &'static World {
    static CACHE: OnceLock<Mutex<HashMap<u64, &'static World>>> = OnceLock::new();
    let mut map = CACHE.get_or_init(Default::default).lock().unwrap();
    map.entry(q).or_insert_with(|| {
        let geom = Geometry::for_order(q).unwrap();
        let part = geom.partition().unwrap();
        let counts = count_incidences(&geom, &part);
        Box::leak(Box::new(World { geom, part, counts }))
    })
}

fn code(q: u64) -> &'static (GdrsCode, SyndromeCensus) {
    static CACHE: OnceLock<Mutex<HashMap<u64, &'static (GdrsCode, SyndromeCensus)>>> = OnceLock::new();
    let mut map = CACHE.get_or_init(Default::default).lock().unwrap();
    map.entry(q).or_insert_with(|| {
        let c = build_gdrs(&world(q).geom).unwrap();
        let s = syndrome_census(&c);
        Box::leak(Box::new((c, s)))
    })
}

/// The collineation induced by `t ↦ a·t + b`.
fn affine_image(w: &World, a: u16, b: u16, x: &Coords) -> Coords {
    let f = w.geom.space().field();
    let m = |u, v| f.mul(u, v);
    let (a2, b2) = (m(a, a), m(b, b));
    let three = f.from_int(3);
    let two = f.from_int(2);
    let sum = |xs: [u16; 4]| xs.iter().fold(0, |acc, &v| f.add(acc, v));
    [
        sum([m(m(a2, a), x[0]), m(m(three, m(a2, b)), x[1]), m(m(three, m(a, b2)), x[2]), m(m(b2, b), x[3])]),
        sum([m(a2, x[1]), m(m(two, m(a, b)), x[2]), m(b2, x[3]), 0]),
        sum([m(a, x[2]), m(b, x[3]), 0, 0]),
        x[3],
    ]
}

fn image_index(w: &World, x: &Coords, a: u16, b: u16, flip: bool) -> usize {
    let s = w.geom.space();
    let mut y = affine_image(w, a, b, x);
    if flip {
        y.reverse();
    }
    s.index_of(&s.normalize(y).unwrap())
}

fn q_and_index() -> impl Strategy<Value = (u64, usize)> {
    proptest::sample::select(ORDERS.to_vec()).prop_flat_map(|q| {
        let n = (q * q * q + q * q + q + 1) as usize;
        (Just(q), 0..n)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms(q in proptest::sample::select(ORDERS.to_vec()), a in 0u16..13, b in 0u16..13, c in 0u16..13) {
        let f = field_of_order(q).unwrap();
        let (a, b, c) = (a % q as u16, b % q as u16, c % q as u16);
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    #[test]
    fn index_round_trip((q, idx) in q_and_index()) {
        let s = world(q).geom.space();
        let c = s.coords_at(idx);
        prop_assert_eq!(s.normalize(c).unwrap(), c);
        prop_assert_eq!(s.index_of(&c), idx);
    }

    #[test]
    fn point_class_preserved_by_curve_maps((q, idx) in q_and_index(), a in 1u16..13, b in 0u16..13, flip: bool) {
        let w = world(q);
        let (a, b) = (1 + (a - 1) % (q as u16 - 1), b % q as u16);
        let x = w.geom.space().coords_at(idx);
        let img = image_index(w, &x, a, b, flip);
        prop_assert_eq!(w.part.point_class(idx), w.part.point_class(img));
        prop_assert_eq!(w.counts.nd[idx], w.counts.nd[img]);
    }

    #[test]
    fn plane_class_preserved_by_curve_maps((q, idx) in q_and_index(), a in 1u16..13, b in 0u16..13, flip: bool) {
        let w = world(q);
        let s = w.geom.space();
        let (a, b) = (1 + (a - 1) % (q as u16 - 1), b % q as u16);
        let on = s.points_on_plane(&s.coords_at(idx));
        let imgs: Vec<Coords> = on.iter().map(|&p| s.coords_at(image_index(w, &s.coords_at(p), a, b, flip))).collect();
        prop_assert_eq!(s.rank(&imgs), 3);
        let target = s.null_space(&imgs);
        prop_assert_eq!(target.len(), 1);
        let img = s.index_of(&s.normalize(target[0]).unwrap());
        prop_assert_eq!(w.part.plane_class(idx), w.part.plane_class(img));
    }

    #[test]
    fn every_point_on_theta2_planes((q, idx) in q_and_index()) {
        let w = world(q);
        let theta2 = (q * q + q + 1) as u32;
        prop_assert_eq!(w.counts.col[idx].iter().sum::<u32>(), theta2);
        prop_assert_eq!(w.counts.row[idx].iter().sum::<u32>(), theta2);
        prop_assert_eq!(w.counts.nd[idx].iter().sum::<u32>(), theta2);
    }

    #[test]
    fn low_weight_words_are_their_own_leaders(
        q in proptest::sample::select(vec![5u64, 7, 8, 9, 11, 13]),
        pos in proptest::collection::btree_set(0usize..14, 1..=2),
        coeffs in proptest::collection::vec(1u16..13, 2),
    ) {
        let (code, census) = code(q);
        let word: Vec<(usize, u16)> = pos
            .iter()
            .filter(|&&p| p < code.n())
            .zip(&coeffs)
            .map(|(&p, &c)| (p, 1 + (c - 1) % (q as u16 - 1)))
            .collect();
        prop_assume!(!word.is_empty());
        let s = code.syndrome_index(&code.syndrome(&word));
        prop_assert_eq!(census.weight[s] as usize, word.len());
        if word.len() == 2 {
            prop_assert_eq!(census.m2[s], 1);
        }
    }

    #[test]
    fn deep_hole_multiplicity_is_scalar_invariant(q in proptest::sample::select(vec![5u64, 7, 8, 9, 11, 13]), s in 0usize..28561, l in 1u16..13) {
        let (code, census) = code(q);
        let s = s % census.weight.len();
        prop_assume!(census.weight[s] == 3);
        let f = code.field();
        let l = 1 + (l - 1) % (q as u16 - 1);
        let t = code.syndrome_index(&code.syndrome_at(s).map(|x| f.mul(l, x)));
        prop_assert_eq!(census.m3[t], census.m3[s]);
    }
}
