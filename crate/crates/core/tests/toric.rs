use num_rational::Ratio;
use proptest::prelude::*;

use eqcorr::novikov::MultiSeries;
use eqcorr::toric::{
    basic_disc_potential, correspondence_equivariant_potential, maslov_index_correspondence, missed_divisors,
    verify_teleman, SemiFano, SubtorusAction, ToricData,
};

fn hirzebruch(k: i64, areas: &[i64]) -> ToricData {
    ToricData::with_areas_int(
        &[&[1, 0], &[0, 1], &[-1, k], &[0, -1]],
        &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
        areas,
    )
    .unwrap()
}

fn projective(n: usize, areas: Vec<Ratio<i64>>) -> ToricData {
    let mut rays: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    rays.push(vec![-1; n]);
    let cones = (0..=n).map(|skip| (0..=n).filter(|&i| i != skip).collect()).collect();
    ToricData::new(rays, cones, areas).unwrap()
}

fn fano_fans() -> Vec<ToricData> {
    let ints = |v: &[i64]| v.iter().map(|&x| Ratio::from_integer(x)).collect::<Vec<_>>();
    vec![
        projective(2, ints(&[0, 0, 3])),
        projective(3, ints(&[0, 0, 0, 2])),
        hirzebruch(0, &[0, 0, 1, 2]),
        hirzebruch(1, &[0, 0, 2, 1]),
    ]
}

#[test]
fn fano_mirror_map_is_trivial() {
    for td in fano_fans() {
        let sf = SemiFano::new(&td, 5).unwrap();
        let mm = sf.mirror_map().unwrap();
        assert!(mm.is_identity(), "{}", td.name);
        let weights: Vec<Ratio<i64>> = sf
            .mori
            .generators
            .iter()
            .map(|c| c.iter().zip(&td.areas).map(|(&x, a)| a * x).sum())
            .collect();
        let w = sf.semifano_potential(&mm).realize_params(&weights);
        assert_eq!(w, basic_disc_potential(&td));

        let mut y = ToricData::affine_space(&td.areas).unwrap();
        y.subtorus = None;
        let c = correspondence_equivariant_potential(&y, &sf, &mm).unwrap();
        assert!(c.is_lambda_free() && c.terms.is_empty());
    }
}

#[test]
fn mirror_map_round_trips() {
    let mut fans = fano_fans();
    fans.push(hirzebruch(2, &[0, 0, 1, 2]));
    for td in fans {
        let order = 6;
        let sf = SemiFano::new(&td, order).unwrap();
        let mm = sf.mirror_map().unwrap();
        for (a, (f, g)) in mm.mori_forward.iter().zip(&mm.mori_inverse).enumerate() {
            let id = MultiSeries::var(&sf.names(), order + 1, a);
            assert_eq!(f.compose(&mm.mori_inverse).unwrap(), id);
            assert_eq!(g.compose(&mm.mori_forward).unwrap(), id);
        }
    }
}

#[test]
fn basic_classes_have_maslov_two() {
    let mut fans = fano_fans();
    fans.push(hirzebruch(2, &[0, 0, 1, 2]));
    for td in fans {
        for i in 0..td.nrays() {
            let sub = SubtorusAction::new(vec![td.rays[i].clone()], vec![]).unwrap();
            assert_eq!(
                maslov_index_correspondence(&td, &sub, &[], i).unwrap(),
                2,
                "{} ray {}",
                td.name,
                i + 1
            );
        }
    }
}

#[test]
fn interior_slices_hit_every_divisor() {
    let td = projective(2, vec![Ratio::from_integer(1); 3]);
    let through = SubtorusAction::new(vec![vec![1, -1]], vec![Ratio::from_integer(0)]).unwrap();
    assert!(missed_divisors(&td, &through).unwrap().missed.is_empty());
    let parallel = SubtorusAction::new(vec![vec![1, 1]], vec![Ratio::new(1, 3)]).unwrap();
    assert_eq!(missed_divisors(&td, &parallel).unwrap().missed, vec![2]);
}

fn affine_for(x: &ToricData) -> ToricData {
    let n = x.nrays();
    let mut y = ToricData::affine_space(&x.areas).unwrap();
    y.subtorus = Some(SubtorusAction::new(vec![vec![1; n]], vec![]).unwrap());
    y
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn projective_teleman_holds_for_any_areas(n in 1usize..=3, raw in prop::collection::vec((0i64..=4, 1i64..=3), 4)) {
        let mut areas: Vec<Ratio<i64>> = raw[..=n].iter().map(|&(p, q)| Ratio::new(p, q)).collect();
        if areas.iter().all(|a| *a == Ratio::from_integer(0)) {
            areas[n] = Ratio::from_integer(1);
        }
        let x = projective(n, areas);
        let rep = verify_teleman(&affine_for(&x), &x, 3).unwrap();
        prop_assert!(rep.ok(), "{}", rep);
        prop_assert!(rep.window.is_none());
    }
}
