use num_rational::Ratio;

use super::*;

pub(super) fn hirzebruch(k: i64, areas: &[i64]) -> ToricData {
    ToricData::with_areas_int(
        &[&[1, 0], &[0, 1], &[-1, -k], &[0, -1]],
        &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
        areas,
    )
    .unwrap()
}

pub(super) fn p1p1(areas: &[i64]) -> ToricData {
    ToricData::with_areas_int(
        &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]],
        &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
        areas,
    )
    .unwrap()
}

#[test]
fn f2_psi_basis() {
    let td = hirzebruch(2, &[0, 0, 1, 2]);
    let cl = CurveClassLattice::new(&td).unwrap();
    assert_eq!(cl.psi, vec![vec![1, 2, 1, 0], vec![0, 1, 0, 1]]);
    for p in &cl.psi {
        assert!(cl.in_kernel(p));
    }
    let mori = MoriData::new(&td, &cl).unwrap();
    let mut g = mori.generators.clone();
    g.sort();
    assert_eq!(g, vec![vec![0, 1, 0, 1], vec![1, 0, 1, -2]]);
    let r = check_fano(&cl, &mori);
    assert!(r.semifano && !r.fano);
}

#[test]
fn f3_is_not_semifano() {
    let td = hirzebruch(3, &[0, 0, 1, 1]);
    let cl = CurveClassLattice::new(&td).unwrap();
    let mori = MoriData::new(&td, &cl).unwrap();
    let r = check_fano(&cl, &mori);
    assert!(!r.semifano);
    assert_eq!(r.witness, Some(vec![1, 0, 1, -3]));
}

#[test]
fn p1p1_is_fano_with_two_collections() {
    let td = p1p1(&[0, 0, 1, 1]);
    let mut pc = primitive_collections(&td);
    pc.sort();
    assert_eq!(pc, vec![vec![0, 2], vec![1, 3]]);
    let cl = CurveClassLattice::new(&td).unwrap();
    let mori = MoriData::new(&td, &cl).unwrap();
    assert!(check_fano(&cl, &mori).fano);
}

#[test]
fn toml_fan_parses() {
    let td = ToricData::parse(
        r#"
rays = [[1, 0], [0, 1], [-1, -1]]
cones = [[1, 2], [2, 3], [3, 1]]
areas = [0, 0, "3/2"]
"#,
    )
    .unwrap();
    assert_eq!(td.cones[1], vec![1, 2]);
    assert_eq!(td.areas[2], Ratio::new(3, 2));
    assert!(ToricData::parse("rays = [[2, 0]]\ncones = [[1]]\nareas = [0]").is_err());
}

fn cn(n: usize) -> ToricData {
    ToricData::affine_space(&vec![Ratio::from_integer(0); n]).unwrap()
}

#[test]
fn p2_from_c3_by_restriction() {
    let mut w = basic_disc_potential(&cn(3));
    assert_eq!(w.to_string(), "z1 + z2 + z3");
    let q = Coeff::parse("q", &mut w.params).unwrap();
    let r = restrict_potential(
        &w,
        &[Constraint {
            covector: vec![1, 1, 1],
            value: q,
        }],
        &[2],
    )
    .unwrap();
    assert_eq!(r.to_string(), "z1 + z2 + q * z1^-1*z2^-1");
}

#[test]
fn equivariant_log_part_restricts_to_a_constant() {
    let sub = SubtorusAction::new(vec![vec![1, 1, 1]], vec![]).unwrap();
    let w = equivariant_potential(&cn(3), &sub).unwrap();
    assert_eq!(w.to_string(), "z1 + z2 + z3 + λ_1 * log(z1*z2*z3)");
    let r = restrict_potential(
        &w,
        &[Constraint {
            covector: vec![1, 1, 1],
            value: Coeff::t_power(Ratio::new(1, 2)),
        }],
        &[2],
    )
    .unwrap();
    assert_eq!(r.log_part.len(), 1);
    assert!(r.log_part[0].is_constant());
    let r = restrict_potential(
        &w,
        &[Constraint {
            covector: vec![1, 1, 1],
            value: Coeff::one(),
        }],
        &[2],
    )
    .unwrap();
    assert!(r.is_lambda_free());
}

#[test]
fn restriction_needs_unimodular_block() {
    let w = basic_disc_potential(&cn(2));
    let c = Constraint {
        covector: vec![1, 2],
        value: Coeff::one(),
    };
    assert!(restrict_potential(&w, &[c], &[1]).is_err());
}

#[test]
fn p1p1_factored_display() {
    let w = basic_disc_potential(&p1p1(&[1, 2, 3, 5]));
    let r = restrict_potential(
        &w,
        &[Constraint {
            covector: vec![1, 1],
            value: Coeff::one(),
        }],
        &[1],
    )
    .unwrap();
    assert_eq!(r.to_string(), "T^1 * (1 + T^4) * z1 + T^2 * (1 + T^1) * z1^-1");
}

fn rat(n: i64, d: i64) -> num_rational::BigRational {
    crate::novikov::rat(n, d)
}

/// `−log((1 + √(1−4x))/2)` by plain univariate arithmetic.
fn g4_closed_form(n: usize) -> Vec<num_rational::BigRational> {
    use num_traits::{One, Zero};
    let mut sqrt = vec![num_rational::BigRational::zero(); n + 1];
    let mut binom = num_rational::BigRational::one();
    for (j, s) in sqrt.iter_mut().enumerate() {
        if j > 0 {
            binom = binom * (rat(1, 2) - rat(j as i64 - 1, 1)) / rat(j as i64, 1);
        }
        let mut p = binom.clone();
        for _ in 0..j {
            p *= rat(-4, 1);
        }
        *s = p;
    }
    // u = y − 1 with y = (1 + sqrt)/2
    let u: Vec<_> = sqrt
        .iter()
        .enumerate()
        .map(|(j, s)| if j == 0 { rat(0, 1) } else { s / rat(2, 1) })
        .collect();
    let mul = |a: &[num_rational::BigRational], b: &[num_rational::BigRational]| {
        let mut c = vec![num_rational::BigRational::zero(); n + 1];
        for i in 0..=n {
            for j in 0..=n - i {
                c[i + j] += &a[i] * &b[j];
            }
        }
        c
    };
    let mut out = vec![num_rational::BigRational::zero(); n + 1];
    let mut pw = u.clone();
    for k in 1..=n {
        let sign = if k % 2 == 1 { -1 } else { 1 };
        for j in 0..=n {
            out[j] += &pw[j] * rat(sign, k as i64);
        }
        pw = mul(&pw, &u);
    }
    out
}

#[test]
fn f2_g4_matches_closed_form() {
    let sf = SemiFano::new(&hirzebruch(2, &[0, 0, 1, 2]), 10).unwrap();
    let g = sf.g_series(3).unwrap();
    let oracle = g4_closed_form(10);
    let e = sf.mori.generators.iter().position(|c| *c == vec![1, 0, 1, -2]).unwrap();
    for j in 1..=10u32 {
        let mut exps = vec![0; 2];
        exps[e] = j;
        assert_eq!(g.coeff(&exps).as_rational().unwrap(), oracle[j as usize], "j = {j}");
    }
    assert_eq!(oracle[1], rat(1, 1));
    assert_eq!(oracle[2], rat(3, 2));
    assert_eq!(oracle[3], rat(10, 3));
    for l in [0, 1, 2] {
        assert!(sf.g_series(l).unwrap().is_zero());
    }
}

#[test]
fn f2_mirror_map_and_potential() {
    let sf = SemiFano::new(&hirzebruch(2, &[0, 0, 1, 2]), 8).unwrap();
    let mm = sf.mirror_map().unwrap();
    assert_eq!(mm.inverse_text(), vec!["q̌_1 = q_1", "q̌_2 = q_2 * (1 + q_1*q_2^-2)"]);
    let w = sf.semifano_potential(&mm);
    assert_eq!(
        w.to_string(),
        "z1 + z2 + q_2 * (1 + q_1*q_2^-2) * z2^-1 + q_1 * z1^-1*z2^-2"
    );
    let y = ToricData::affine_space(&[Ratio::from_integer(0); 4]).unwrap();
    let h = correspondence_h(&mm).unwrap();
    assert!(h[0].is_zero());
    let c = correspondence_equivariant_potential(&y, &sf, &mm).unwrap();
    assert_eq!(c.to_string(), "-λ_2 * log(1 + q_1*q_2^-2)");
}

#[test]
fn mirror_round_trip() {
    for td in [
        hirzebruch(2, &[0, 0, 1, 2]),
        p1p1(&[0, 0, 1, 1]),
        hirzebruch(1, &[0, 0, 1, 1]),
    ] {
        let sf = SemiFano::new(&td, 6).unwrap();
        let mm = sf.mirror_map().unwrap();
        let back: Vec<_> = mm
            .mori_forward
            .iter()
            .map(|f| f.compose(&mm.mori_inverse).unwrap())
            .collect();
        for (a, b) in back.iter().enumerate() {
            assert_eq!(*b, crate::novikov::MultiSeries::var(&sf.names(), 7, a));
        }
    }
}

#[test]
fn fano_potential_is_the_basic_one() {
    let td =
        ToricData::with_areas_int(&[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[2, 0]], &[0, 0, 3]).unwrap();
    let sf = SemiFano::new(&td, 5).unwrap();
    let mm = sf.mirror_map().unwrap();
    assert!(mm.is_identity());
    let w = sf.semifano_potential(&mm).realize_params(&[Ratio::from_integer(3)]);
    assert_eq!(w, basic_disc_potential(&td));
}

fn diagonal(n: usize) -> SubtorusAction {
    SubtorusAction::new(vec![vec![1; n]], vec![]).unwrap()
}

#[test]
fn p1p1_maslov_indices() {
    let td = p1p1(&[0, 0, 2, 2]);
    let sub = diagonal(2);
    // (stratum, ray, index), 0-based
    for (b, i, want) in [(3, 0, 0), (3, 2, 4), (1, 0, 4), (1, 2, 0), (2, 1, 0), (2, 3, 4)] {
        assert_eq!(
            maslov_index_correspondence(&td, &sub, &[b], i).unwrap(),
            want,
            "B = {}, i = {}",
            b + 1,
            i + 1
        );
    }
}

#[test]
fn p1_cubed_axis_strata() {
    let rays: Vec<Vec<i64>> = vec![
        vec![1, 0, 0],
        vec![0, 1, 0],
        vec![0, 0, 1],
        vec![-1, 0, 0],
        vec![0, -1, 0],
        vec![0, 0, -1],
    ];
    let mut cones = Vec::new();
    for a in [0, 3] {
        for b in [1, 4] {
            for c in [2, 5] {
                cones.push(vec![a, b, c]);
            }
        }
    }
    let td = ToricData::new(rays, cones, vec![Ratio::from_integer(1); 6]).unwrap();
    assert_eq!(maslov_index_correspondence(&td, &diagonal(3), &[4, 5], 0).unwrap(), -2);
    for i in 0..6 {
        let sub = SubtorusAction::new(vec![td.rays[i].clone()], vec![]).unwrap();
        assert_eq!(maslov_index_correspondence(&td, &sub, &[], i).unwrap(), 2);
    }
}

#[test]
fn maslov_rejections() {
    let td = p1p1(&[0, 0, 2, 2]);
    let sub = diagonal(2);
    assert!(matches!(
        maslov_index_correspondence(&td, &sub, &[], 0),
        Err(crate::Error::NotCorrespondence(_))
    ));
    assert!(matches!(
        maslov_index_correspondence(&td, &sub, &[2], 0),
        Err(crate::Error::Invariant(_))
    ));
    let c3 = cn(3);
    let two = SubtorusAction::new(vec![vec![1, 1, 0], vec![0, 1, 1]], vec![]).unwrap();
    assert!(matches!(
        maslov_index_correspondence(&c3, &two, &[0, 1], 2),
        Err(crate::Error::Ambiguous(2))
    ));
}

#[test]
fn missed_divisors_of_slices() {
    let c3 = ToricData::affine_space(&[Ratio::from_integer(0); 3]).unwrap();
    let sub = SubtorusAction::new(vec![vec![1, 1, 1]], vec![Ratio::from_integer(1)]).unwrap();
    assert!(missed_divisors(&c3, &sub).unwrap().missed.is_empty());
    let td = p1p1(&[0, 0, 2, 2]);
    let corner = SubtorusAction::new(vec![vec![1, 1]], vec![Ratio::new(1, 2)]).unwrap();
    assert_eq!(missed_divisors(&td, &corner).unwrap().missed, vec![2, 3]);
    let outside = SubtorusAction::new(vec![vec![1, 1]], vec![Ratio::from_integer(5)]).unwrap();
    assert_eq!(missed_divisors(&td, &outside), Err(crate::Error::EmptySlice));
}

/// Rank over ℚ by plain elimination.
fn q_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<num_rational::BigRational>> =
        rows.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c] != rat(0, 1)) else {
            continue;
        };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank {
                let f = &m[i][c] / &m[rank][c];
                let pivot = m[rank].clone();
                for (x, y) in m[i].iter_mut().zip(pivot) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn disc_class_ranks() {
    let td = p1p1(&[0, 0, 2, 2]);
    let corner = SubtorusAction::new(vec![vec![1, 1]], vec![Ratio::new(1, 2)]).unwrap();
    let p1 = ToricData::with_areas_int(&[&[1], &[-1]], &[&[0], &[1]], &[0, 1]).unwrap();
    let d = correspondence_disc_classes(&td, &corner, &p1).unwrap();
    assert_eq!(d.generators.len(), 3);
    let rows: Vec<Vec<i64>> = d
        .generators
        .iter()
        .map(|g| g.basic.iter().chain(&g.sphere).copied().collect())
        .collect();
    assert_eq!(d.rank(), q_rank(&rows));
    assert_eq!(d.rank(), d.missed.len() + 1);

    let c3 = ToricData::affine_space(&[Ratio::from_integer(0); 3]).unwrap();
    let sub = SubtorusAction::new(vec![vec![1, 1, 1]], vec![Ratio::from_integer(1)]).unwrap();
    let p2 =
        ToricData::with_areas_int(&[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[2, 0]], &[0, 0, 1]).unwrap();
    let d = correspondence_disc_classes(&c3, &sub, &p2).unwrap();
    assert!(d.missed.is_empty());
    assert_eq!(d.rank(), 1);
    assert_eq!(d.generators[0].maslov, 6);
}

fn projective_space(n: usize, area: i64) -> (ToricData, ToricData) {
    let mut rays: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    rays.push(vec![-1; n]);
    let cones: Vec<Vec<usize>> = (0..=n)
        .map(|skip| (0..=n).filter(|&i| i != skip).collect())
        .rev()
        .collect();
    let mut areas = vec![Ratio::from_integer(0); n + 1];
    areas[n] = Ratio::from_integer(area);
    let x = ToricData::new(rays, cones, areas.clone()).unwrap();
    let mut y = ToricData::affine_space(&areas).unwrap();
    y.subtorus = Some(diagonal(n + 1));
    (y, x)
}

#[test]
fn teleman_for_projective_spaces() {
    for n in 1..=3 {
        let (y, x) = projective_space(n, 1);
        let rep = verify_teleman(&y, &x, 4).unwrap();
        assert!(rep.ok(), "{rep}");
        assert!(rep.window.is_none() && rep.is_identity_change());
        assert_eq!(rep.lhs, rep.rhs);
    }
    let (y, x) = projective_space(2, 1);
    assert_eq!(
        verify_teleman(&y, &x, 2).unwrap().rhs.to_string(),
        "z1 + z2 + T^1 * z1^-1*z2^-1"
    );
}

#[test]
fn teleman_detects_wrong_areas() {
    let (y, _) = projective_space(2, 1);
    let (_, x) = projective_space(2, 2);
    let rep = verify_teleman(&y, &x, 2).unwrap();
    assert_eq!(rep.mismatch.unwrap().order, Ratio::from_integer(0));
}

#[test]
fn teleman_for_f2() {
    let x = hirzebruch(2, &[0, 0, 3, 1]);
    let mut y = ToricData::affine_space(&x.areas).unwrap();
    y.subtorus = Some(SubtorusAction::new(vec![vec![1, 2, 1, 0], vec![0, 1, 0, 1]], vec![]).unwrap());
    let rep = verify_teleman(&y, &x, 6).unwrap();
    assert!(rep.ok(), "{rep}");
    assert_eq!(rep.window, Some(Ratio::from_integer(7)));
    // shifted areas on σ force a nontrivial coordinate change
    let x = hirzebruch(2, &[1, 1, 2, 1]);
    let mut y = ToricData::affine_space(&x.areas).unwrap();
    y.subtorus = Some(SubtorusAction::new(vec![vec![1, 2, 1, 0], vec![0, 1, 0, 1]], vec![]).unwrap());
    let rep = verify_teleman(&y, &x, 6).unwrap();
    assert!(rep.ok(), "{rep}");
    assert!(!rep.is_identity_change());
}
