use num_rational::{BigRational, Ratio};
use num_traits::{Signed, Zero};
use serde::Deserialize;

use super::fm::{feasible, Row};
use crate::error::{Error, Result};
use crate::lattice::{self, IVec};
use crate::linalg::QMatrix;

#[derive(Deserialize)]
#[serde(untagged)]
enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    fn ratio(&self) -> Result<Ratio<i64>> {
        match self {
            Num::Int(n) => Ok(Ratio::from_integer(*n)),
            Num::Text(s) => super::coeff::parse_ratio(s).ok_or_else(|| Error::Parse(format!("bad rational `{s}`"))),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SubtorusFile {
    generators: Vec<IVec>,
    #[serde(default)]
    level: Vec<Num>,
}

#[derive(Deserialize)]
struct FanFile {
    name: Option<String>,
    rays: Vec<IVec>,
    cones: Vec<Vec<usize>>,
    areas: Option<Vec<Num>>,
    names: Option<Vec<String>>,
    subtorus: Option<SubtorusFile>,
}

/// Subtorus `T^k ⊂ T^n` by Lie algebra generators, with a moment level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubtorusAction {
    pub generators: Vec<IVec>,
    pub level: Vec<Ratio<i64>>,
}

impl SubtorusAction {
    pub fn new(generators: Vec<IVec>, level: Vec<Ratio<i64>>) -> Result<Self> {
        if !level.is_empty() && level.len() != generators.len() {
            return Err(Error::Dimension("level and generators differ in length".into()));
        }
        if let Some(n) = generators.first().map(Vec::len) {
            if generators.iter().any(|g| g.len() != n) {
                return Err(Error::Dimension("subtorus generators of mixed length".into()));
            }
        }
        if lattice::rank(&generators) != generators.len() {
            return Err(Error::Invariant(
                "subtorus generators are not linearly independent".into(),
            ));
        }
        let level = if level.is_empty() {
            vec![Ratio::from_integer(0); generators.len()]
        } else {
            level
        };
        Ok(SubtorusAction { generators, level })
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Whether the generators span a saturated sublattice.
    pub fn is_saturated(&self) -> bool {
        let n = self.generators.first().map_or(0, Vec::len);
        let sat = lattice::saturation(&self.generators, n);
        lattice::smith_invariants(&self.generators).iter().all(|&d| d == 1) && sat.len() == self.rank()
    }
}

/// Fan data with basic-disc areas measured from a chosen fiber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricData {
    pub name: String,
    pub rays: Vec<IVec>,
    pub cones: Vec<Vec<usize>>,
    pub areas: Vec<Ratio<i64>>,
    pub names: Vec<String>,
    pub subtorus: Option<SubtorusAction>,
}

impl ToricData {
    pub fn new(rays: Vec<IVec>, cones: Vec<Vec<usize>>, areas: Vec<Ratio<i64>>) -> Result<Self> {
        let names = (1..=rays.len()).map(|i| format!("D{i}")).collect();
        let td = ToricData {
            name: String::new(),
            rays,
            cones,
            areas,
            names,
            subtorus: None,
        };
        td.validate()?;
        Ok(td)
    }

    pub fn with_areas_int(rays: &[&[i64]], cones: &[&[usize]], areas: &[i64]) -> Result<Self> {
        ToricData::new(
            rays.iter().map(|r| r.to_vec()).collect(),
            cones.iter().map(|c| c.to_vec()).collect(),
            areas.iter().map(|&a| Ratio::from_integer(a)).collect(),
        )
    }

    /// `ℂ^n` with unit coordinate rays and one cone.
    pub fn affine_space(areas: &[Ratio<i64>]) -> Result<Self> {
        let n = areas.len();
        let rays = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        ToricData::new(rays, vec![(0..n).collect()], areas.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.rays.first().map_or(0, Vec::len)
    }

    pub fn nrays(&self) -> usize {
        self.rays.len()
    }

    fn validate(&self) -> Result<()> {
        let d = self.dim();
        for (i, r) in self.rays.iter().enumerate() {
            if r.len() != d {
                return Err(Error::Dimension(format!(
                    "ray {} has length {}, expected {d}",
                    i + 1,
                    r.len()
                )));
            }
            if !lattice::is_primitive(r) {
                return Err(Error::Invariant(format!("ray {} = {r:?} is not primitive", i + 1)));
            }
        }
        if self.areas.len() != self.rays.len() {
            return Err(Error::Dimension(format!(
                "{} areas for {} rays",
                self.areas.len(),
                self.rays.len()
            )));
        }
        if self.areas.iter().any(|a| a.is_negative()) {
            return Err(Error::Invariant("areas must be nonnegative".into()));
        }
        for c in &self.cones {
            if c.iter().any(|&i| i >= self.rays.len()) {
                return Err(Error::Dimension(format!("cone {c:?} refers to a missing ray")));
            }
        }
        if let Some(s) = &self.subtorus {
            if s.generators.iter().any(|g| g.len() != d) {
                return Err(Error::Dimension(
                    "subtorus generators must live in the fan's lattice".into(),
                ));
            }
        }
        Ok(())
    }

    /// Parses the TOML fan format; cone entries are 1-based ray labels.
    pub fn parse(text: &str) -> Result<Self> {
        let f: FanFile = toml::from_str(text).map_err(|e| Error::Parse(e.message().to_string()))?;
        ToricData::from_file(f)
    }

    /// Same as [`ToricData::parse`] for an already parsed table.
    pub fn from_value(v: toml::Value) -> Result<Self> {
        let f: FanFile = v
            .try_into()
            .map_err(|e: toml::de::Error| Error::Parse(e.message().to_string()))?;
        ToricData::from_file(f)
    }

    fn from_file(f: FanFile) -> Result<Self> {
        let areas = match f.areas {
            Some(a) => a.iter().map(Num::ratio).collect::<Result<Vec<_>>>()?,
            None => vec![Ratio::from_integer(0); f.rays.len()],
        };
        let mut cones = Vec::new();
        for c in f.cones {
            if c.contains(&0) {
                return Err(Error::Parse("cone labels are 1-based".into()));
            }
            cones.push(c.iter().map(|i| i - 1).collect());
        }
        let mut td = ToricData::new(f.rays, cones, areas)?;
        if let Some(n) = f.names {
            if n.len() != td.rays.len() {
                return Err(Error::Dimension("one name per ray expected".into()));
            }
            td.names = n;
        }
        td.name = f.name.unwrap_or_default();
        if let Some(s) = f.subtorus {
            let level = s.level.iter().map(Num::ratio).collect::<Result<Vec<_>>>()?;
            td.subtorus = Some(SubtorusAction::new(s.generators, level)?);
            td.validate()?;
        }
        Ok(td)
    }

    pub fn subtorus(&self) -> Result<&SubtorusAction> {
        self.subtorus
            .as_ref()
            .ok_or_else(|| Error::Parse("fan file has no `subtorus`".into()))
    }

    pub fn ray_matrix(&self, idx: &[usize]) -> Vec<IVec> {
        idx.iter().map(|&i| self.rays[i].clone()).collect()
    }

    pub fn is_smooth(&self) -> bool {
        self.cones.iter().all(|c| {
            lattice::rank(&self.ray_matrix(c)) == c.len() && {
                let m = self.ray_matrix(c);
                c.len() != self.dim() || lattice::is_unimodular(&m)
            }
        })
    }

    pub fn is_orthant(&self) -> bool {
        let n = self.nrays();
        self.dim() == n
            && self
                .rays
                .iter()
                .enumerate()
                .all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == i64::from(i == j)))
            && self.cones.len() == 1
            && self.cones[0].len() == n
    }

    /// `{x : ⟨v_i, x⟩ + A_i ≥ 0}` as rows.
    pub(crate) fn polytope_rows(&self) -> Vec<Row> {
        self.rays
            .iter()
            .zip(&self.areas)
            .map(|(v, a)| Row::new(lattice::to_q(v), -ratio_q(a)))
            .collect()
    }

    /// Maximal cones containing all of `idx`.
    pub fn cones_containing(&self, idx: &[usize]) -> Vec<&Vec<usize>> {
        self.cones
            .iter()
            .filter(|c| idx.iter().all(|i| c.contains(i)))
            .collect()
    }

    /// Coefficients of `w` in a full-dimensional simplicial cone, if it lies there.
    pub(crate) fn cone_coords(&self, cone: &[usize], w: &[i64]) -> Option<Vec<BigRational>> {
        let cols: Vec<Vec<BigRational>> = cone.iter().map(|&i| lattice::to_q(&self.rays[i])).collect();
        let m = QMatrix::from_cols(&cols, self.dim());
        m.solve(&lattice::to_q(w))
    }
}

pub(crate) fn ratio_q(r: &Ratio<i64>) -> BigRational {
    BigRational::new((*r.numer()).into(), (*r.denom()).into())
}

/// Whether the polytope slice `{ℓ_j = c_j}` is nonempty, with optional extra equalities.
pub(crate) fn slice_feasible(td: &ToricData, sub: &SubtorusAction, extra: &[Row]) -> bool {
    let mut eqs: Vec<Row> = sub
        .generators
        .iter()
        .zip(&sub.level)
        .map(|(g, c)| Row::new(lattice::to_q(g), ratio_q(c)))
        .collect();
    eqs.extend_from_slice(extra);
    feasible(eqs, td.polytope_rows())
}

/// Exact sequence `0 → K → ℤ^m → N → 0` with `K` in the basis `Ψ_j` of the first maximal cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveClassLattice {
    pub rays: Vec<IVec>,
    /// Rays of the basis cone, in the order `z_1, …, z_d`.
    pub sigma: Vec<usize>,
    /// Remaining rays; `τ_j` carries the Kähler parameter `q_j`.
    pub tau: Vec<usize>,
    /// `(ν_i, v_l)` for every ray `l`.
    pub nu: Vec<IVec>,
    pub psi: Vec<IVec>,
}

impl CurveClassLattice {
    pub fn new(td: &ToricData) -> Result<Self> {
        let d = td.dim();
        let sigma = td
            .cones
            .first()
            .cloned()
            .ok_or_else(|| Error::Invariant("fan has no maximal cone".into()))?;
        if sigma.len() != d || !lattice::is_unimodular(&td.ray_matrix(&sigma)) {
            return Err(Error::Invariant(
                "the first cone must be a unimodular maximal cone".into(),
            ));
        }
        let tau: Vec<usize> = (0..td.nrays()).filter(|i| !sigma.contains(i)).collect();
        let mut nu = Vec::with_capacity(td.nrays());
        for v in &td.rays {
            let c = td.cone_coords(&sigma, v).expect("unimodular cone");
            nu.push(
                c.iter()
                    .map(|x| x.to_integer().try_into().expect("small coordinates"))
                    .collect::<IVec>(),
            );
        }
        let m = td.nrays();
        let psi = tau
            .iter()
            .map(|&l| {
                let mut p = vec![0; m];
                p[l] = 1;
                for (k, &i) in sigma.iter().enumerate() {
                    p[i] -= nu[l][k];
                }
                p
            })
            .collect();
        Ok(CurveClassLattice {
            rays: td.rays.clone(),
            sigma,
            tau,
            nu,
            psi,
        })
    }

    pub fn rank(&self) -> usize {
        self.tau.len()
    }

    pub fn nrays(&self) -> usize {
        self.rays.len()
    }

    /// `D_p · c`.
    pub fn pairing(&self, p: usize, c: &[i64]) -> i64 {
        c[p]
    }

    pub fn in_kernel(&self, c: &[i64]) -> bool {
        (0..self.rays[0].len()).all(|k| c.iter().zip(&self.rays).map(|(x, v)| x * v[k]).sum::<i64>() == 0)
    }

    /// Coordinates of `c ∈ K` in the `Ψ` basis.
    pub fn psi_coords(&self, c: &[i64]) -> IVec {
        self.tau.iter().map(|&l| c[l]).collect()
    }

    pub fn chern(&self, c: &[i64]) -> i64 {
        c.iter().sum()
    }
}

/// Mori cone generators and the (semi-)Fano test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoriData {
    pub generators: Vec<IVec>,
    /// `Ψ_j = Σ_a psi_in_mori[j][a] C_a`.
    pub psi_in_mori: Vec<IVec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanoReport {
    pub fano: bool,
    pub semifano: bool,
    /// A generator with `c_1 ≤ 0` (not Fano) or `c_1 < 0` (not semi-Fano).
    pub witness: Option<IVec>,
}

/// Minimal non-face subsets of rays.
pub fn primitive_collections(td: &ToricData) -> Vec<Vec<usize>> {
    let m = td.nrays();
    let in_cone = |s: &[usize]| !td.cones_containing(s).is_empty();
    let mut out = Vec::new();
    for mask in 1u64..(1 << m) {
        let s: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        if in_cone(&s) {
            continue;
        }
        if s.iter().all(|&x| {
            let t: Vec<usize> = s.iter().copied().filter(|&y| y != x).collect();
            in_cone(&t)
        }) {
            out.push(s);
        }
    }
    out
}

/// Class of the primitive relation of a collection.
pub fn primitive_relation(td: &ToricData, coll: &[usize]) -> Result<IVec> {
    let m = td.nrays();
    let d = td.dim();
    let w: IVec = (0..d).map(|k| coll.iter().map(|&i| td.rays[i][k]).sum()).collect();
    let mut r = vec![0; m];
    for &i in coll {
        r[i] += 1;
    }
    if w.iter().all(|&x| x == 0) {
        return Ok(r);
    }
    for cone in &td.cones {
        if cone.len() != d {
            continue;
        }
        let Some(c) = td.cone_coords(cone, &w) else { continue };
        if c.iter().all(|x| !x.is_negative()) {
            for (k, &i) in cone.iter().enumerate() {
                if !c[k].is_integer() {
                    return Err(Error::Invariant("fan is not smooth".into()));
                }
                r[i] -= i64::try_from(c[k].to_integer()).expect("small");
            }
            return Ok(r);
        }
    }
    Err(Error::Invariant("fan is not complete".into()))
}

fn in_cone_of(v: &[i64], gens: &[IVec]) -> bool {
    if gens.is_empty() {
        return v.iter().all(|&x| x == 0);
    }
    // v = Σ t_a g_a with t ≥ 0
    let n = gens.len();
    let eqs: Vec<Row> = (0..v.len())
        .map(|k| {
            Row::new(
                gens.iter().map(|g| crate::novikov::rat(g[k], 1)).collect(),
                crate::novikov::rat(v[k], 1),
            )
        })
        .collect();
    let ineqs: Vec<Row> = (0..n)
        .map(|a| {
            Row::new(
                (0..n).map(|b| crate::novikov::rat(i64::from(a == b), 1)).collect(),
                BigRational::zero(),
            )
        })
        .collect();
    feasible(eqs, ineqs)
}

impl MoriData {
    /// Extremal primitive relations; they must form a lattice basis of `K`.
    pub fn new(td: &ToricData, cl: &CurveClassLattice) -> Result<Self> {
        let mut rels: Vec<IVec> = Vec::new();
        for coll in primitive_collections(td) {
            let r = primitive_relation(td, &coll)?;
            if !rels.contains(&r) {
                rels.push(r);
            }
        }
        let mut gens: Vec<IVec> = Vec::new();
        for (i, r) in rels.iter().enumerate() {
            let others: Vec<IVec> = rels
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, x)| x.clone())
                .collect();
            if !in_cone_of(r, &others) {
                gens.push(r.clone());
            }
        }
        let coords: Vec<IVec> = gens.iter().map(|g| cl.psi_coords(g)).collect();
        if gens.len() != cl.rank() || !lattice::is_unimodular(&coords) {
            return Err(Error::Unsupported(
                "Mori cone is not generated by a lattice basis of primitive relations".into(),
            ));
        }
        // Ψ_j in Mori coordinates: invert the coordinate matrix
        let rows: Vec<Vec<BigRational>> = coords.iter().map(|c| lattice::to_q(c)).collect();
        let inv = QMatrix::from_rows(&rows).inverse().expect("unimodular");
        let r = cl.rank();
        let psi_in_mori = (0..r)
            .map(|j| {
                (0..r)
                    .map(|a| i64::try_from(inv[(j, a)].to_integer()).expect("small"))
                    .collect()
            })
            .collect();
        Ok(MoriData {
            generators: gens,
            psi_in_mori,
        })
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }
}

pub fn check_fano(cl: &CurveClassLattice, mori: &MoriData) -> FanoReport {
    let c1: Vec<i64> = mori.generators.iter().map(|g| cl.chern(g)).collect();
    let bad_semi = c1.iter().position(|&c| c < 0);
    let bad_fano = c1.iter().position(|&c| c <= 0);
    FanoReport {
        fano: bad_fano.is_none(),
        semifano: bad_semi.is_none(),
        witness: bad_semi.or(bad_fano).map(|i| mori.generators[i].clone()),
    }
}
