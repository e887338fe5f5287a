//! Inputs shared by the benchmarks.

use eqcorr::toric::{SubtorusAction, ToricData};

pub fn hirzebruch(k: i64) -> ToricData {
    ToricData::with_areas_int(
        &[&[1, 0], &[0, 1], &[-1, -k], &[0, -1]],
        &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
        &[0, 0, 3, 1],
    )
    .unwrap()
}

/// `(ℂ^{n+1} with the diagonal circle, ℙⁿ)`.
pub fn projective_pair(n: usize) -> (ToricData, ToricData) {
    let mut rays: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    rays.push(vec![-1; n]);
    let cones = (0..=n).map(|skip| (0..=n).filter(|&i| i != skip).collect()).collect();
    let mut areas = vec![num_rational::Ratio::from_integer(0); n + 1];
    areas[n] = num_rational::Ratio::from_integer(1);
    let x = ToricData::new(rays, cones, areas.clone()).unwrap();
    let mut y = ToricData::affine_space(&areas).unwrap();
    y.subtorus = Some(SubtorusAction::new(vec![vec![1; n + 1]], vec![]).unwrap());
    (y, x)
}
