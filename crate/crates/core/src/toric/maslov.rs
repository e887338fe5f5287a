use num_rational::Ratio;

use super::fan::{ratio_q, slice_feasible, CurveClassLattice, SubtorusAction, ToricData};
use super::fm::Row;
use crate::error::{Error, Result};
use crate::lattice::{self, IVec};

/// Facets of `Y` that the moment slice misses, and those it meets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MissedDivisors {
    pub missed: Vec<usize>,
    pub hit: Vec<usize>,
}

pub fn missed_divisors(td: &ToricData, sub: &SubtorusAction) -> Result<MissedDivisors> {
    if sub.generators.iter().any(|g| g.len() != td.dim()) {
        return Err(Error::Dimension("subtorus generators must have the fan's rank".into()));
    }
    if !slice_feasible(td, sub, &[]) {
        return Err(Error::EmptySlice);
    }
    let (mut missed, mut hit) = (Vec::new(), Vec::new());
    for (i, (v, a)) in td.rays.iter().zip(&td.areas).enumerate() {
        let facet = Row::new(lattice::to_q(v), -ratio_q(a));
        if slice_feasible(td, sub, &[facet]) {
            hit.push(i);
        } else {
            missed.push(i);
        }
    }
    Ok(MissedDivisors { missed, hit })
}

/// The primitive `v = Σ_j n_j v_j ∈ 𝔨 ∩ span(v_j : j ∈ B ∪ {i})` with `n_i > 0`, as coefficients over `B ∪ {i}`.
pub fn correspondence_vector(
    td: &ToricData,
    sub: &SubtorusAction,
    stratum: &[usize],
    i: usize,
) -> Result<Vec<(usize, i64)>> {
    let n = td.dim();
    if i >= td.nrays() || stratum.iter().any(|&j| j >= td.nrays()) {
        return Err(Error::Dimension("ray index out of range".into()));
    }
    if stratum.contains(&i) {
        return Err(Error::Invariant(format!("ray {} lies in the stratum", i + 1)));
    }
    if sub.generators.iter().any(|g| g.len() != n) {
        return Err(Error::Dimension("subtorus generators must have the fan's rank".into()));
    }
    if !sub.is_saturated() {
        return Err(Error::Invariant("subtorus action is not free".into()));
    }
    let mut sigma: Vec<usize> = stratum.to_vec();
    sigma.push(i);
    if td.cones_containing(&sigma).is_empty() {
        return Err(Error::Invariant("stratum and ray do not span a cone".into()));
    }
    let k = sub.rank();
    // columns [G | −V]; kernel vectors (a, b) give G a = V b
    let rows: Vec<IVec> = (0..n)
        .map(|r| {
            sub.generators
                .iter()
                .map(|g| g[r])
                .chain(sigma.iter().map(|&j| -td.rays[j][r]))
                .collect()
        })
        .collect();
    let ker = lattice::integer_kernel(&rows, k + sigma.len());
    let bs: Vec<IVec> = ker
        .iter()
        .map(|x| x[k..].to_vec())
        .filter(|b| b.iter().any(|&y| y != 0))
        .collect();
    let rank = lattice::rank(&bs);
    if rank > 1 {
        return Err(Error::Ambiguous(rank));
    }
    let Some(b) = bs.first() else {
        return Err(Error::NotCorrespondence(
            "subtorus meets the normal space only in 0".into(),
        ));
    };
    let mut b = lattice::primitive(b);
    let last = b.len() - 1;
    match b[last].signum() {
        0 => {
            return Err(Error::NotCorrespondence(format!(
                "no admissible vector with positive coefficient on ray {}",
                i + 1
            )))
        }
        -1 => b.iter_mut().for_each(|x| *x = -*x),
        _ => {}
    }
    Ok(sigma.into_iter().zip(b).collect())
}

/// `2 Σ_j n_j` for the correspondence class `β_i^B`.
pub fn maslov_index_correspondence(td: &ToricData, sub: &SubtorusAction, stratum: &[usize], i: usize) -> Result<i64> {
    Ok(2 * correspondence_vector(td, sub, stratum, i)?
        .iter()
        .map(|(_, x)| x)
        .sum::<i64>())
}

/// A disc class on `(Y⁻ × X, L^π)`: lifted basic classes of `Y` plus a sphere class of `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscClass {
    pub basic: IVec,
    pub sphere: IVec,
    pub maslov: i64,
    pub energy: Ratio<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscClassLattice {
    pub missed: Vec<usize>,
    pub generators: Vec<DiscClass>,
}

impl DiscClassLattice {
    /// Rank of the lattice spanned by the generators.
    pub fn rank(&self) -> usize {
        let rows: Vec<IVec> = self
            .generators
            .iter()
            .map(|g| g.basic.iter().chain(&g.sphere).copied().collect())
            .collect();
        lattice::rank(&rows)
    }
}

pub fn correspondence_disc_classes(
    td_y: &ToricData,
    sub: &SubtorusAction,
    td_x: &ToricData,
) -> Result<DiscClassLattice> {
    let cl = CurveClassLattice::new(td_x)?;
    super::fan::primitive_collections(td_x)
        .iter()
        .try_for_each(|c| super::fan::primitive_relation(td_x, c).map(drop))?;
    let md = missed_divisors(td_y, sub)?;
    let m = td_y.nrays();
    let r = cl.nrays();
    let mut generators = Vec::new();
    for &i in &md.missed {
        let mut basic = vec![0; m];
        basic[i] = 1;
        generators.push(DiscClass {
            basic,
            sphere: vec![0; r],
            maslov: 2,
            energy: td_y.areas[i],
        });
    }
    for psi in &cl.psi {
        let energy = psi.iter().zip(&td_x.areas).map(|(&c, a)| a * c).sum();
        generators.push(DiscClass {
            basic: vec![0; m],
            sphere: psi.clone(),
            maslov: 2 * cl.chern(psi),
            energy,
        });
    }
    Ok(DiscClassLattice {
        missed: md.missed,
        generators,
    })
}
