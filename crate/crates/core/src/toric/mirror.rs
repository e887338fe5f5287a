use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::One;
use rayon::prelude::*;

use super::coeff::{Coeff, CoeffKey};
use super::fan::{check_fano, CurveClassLattice, MoriData, ToricData};
use super::potential::{LaurentPotential, LogTerm};
use crate::error::{Error, Result};
use crate::lattice::IVec;
use crate::novikov::{reversion_triangular, MultiSeries, Scalar};

/// Lattice data of a compact semi-Fano toric manifold with its mirror-map series.
#[derive(Clone, Debug)]
pub struct SemiFano {
    pub td: ToricData,
    pub cl: CurveClassLattice,
    pub mori: MoriData,
    /// Series are truncated to Mori degree `≤ order`.
    pub order: u32,
}

pub fn mori_names(r: usize) -> Vec<String> {
    (1..=r).map(|a| format!("Q{a}")).collect()
}

fn factorial(n: i64) -> BigInt {
    (1..=n).fold(BigInt::one(), |f, k| f * k)
}

/// Vectors in `ℕ^r` with `1 ≤ |n| ≤ max`.
fn degree_vectors(r: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; r];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            if cur.iter().any(|&x| x > 0) {
                out.push(cur.clone());
            }
            return;
        }
        for k in 0..=left {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, max, &mut cur, &mut out);
    out
}

impl SemiFano {
    pub fn new(td: &ToricData, order: u32) -> Result<Self> {
        let cl = CurveClassLattice::new(td)?;
        let mori = MoriData::new(td, &cl)?;
        let rep = check_fano(&cl, &mori);
        if !rep.semifano {
            return Err(Error::Invariant(format!(
                "not semi-Fano: class {:?} has c1 = {}",
                rep.witness.as_ref().unwrap(),
                cl.chern(rep.witness.as_ref().unwrap())
            )));
        }
        Ok(SemiFano {
            td: td.clone(),
            cl,
            mori,
            order,
        })
    }

    pub fn rank(&self) -> usize {
        self.mori.rank()
    }

    pub fn names(&self) -> Vec<String> {
        mori_names(self.rank())
    }

    fn class(&self, n: &[u32]) -> IVec {
        let m = self.cl.nrays();
        (0..m)
            .map(|p| {
                self.mori
                    .generators
                    .iter()
                    .zip(n)
                    .map(|(g, &k)| g[p] * i64::from(k))
                    .sum()
            })
            .collect()
    }

    /// `g_l` as a series in the Mori variables `Q̌`.
    pub fn g_series(&self, l: usize) -> Result<MultiSeries> {
        if l >= self.cl.nrays() {
            return Err(Error::Dimension(format!("no ray {}", l + 1)));
        }
        let names = self.names();
        let terms: Vec<(Vec<u32>, Scalar)> = degree_vectors(self.rank(), self.order)
            .into_par_iter()
            .filter_map(|n| {
                let c = self.class(&n);
                let ok = c.iter().sum::<i64>() == 0 && c[l] < 0 && c.iter().enumerate().all(|(p, &x)| p == l || x >= 0);
                ok.then(|| {
                    let sign = if c[l] % 2 == 0 { 1 } else { -1 };
                    let den = c
                        .iter()
                        .enumerate()
                        .filter(|(p, _)| *p != l)
                        .fold(BigInt::one(), |d, (_, &x)| d * factorial(x));
                    let coeff = BigRational::new(factorial(-c[l] - 1) * sign, den);
                    (n, Scalar::from_rational(coeff))
                })
            })
            .collect();
        Ok(MultiSeries::from_terms(&names, self.order + 1, terms))
    }

    pub fn g_all(&self) -> Result<Vec<MultiSeries>> {
        (0..self.cl.nrays()).map(|l| self.g_series(l)).collect()
    }

    /// `exp(Σ_l k_l g_l)`.
    fn exp_comb(g: &[MultiSeries], k: impl Fn(usize) -> i64) -> Result<MultiSeries> {
        let mut s = g[0].zero_like();
        for (l, gl) in g.iter().enumerate() {
            let kl = k(l);
            if kl != 0 {
                s = s.add(&gl.scale(&BigRational::from_integer(kl.into())))?;
            }
        }
        s.exp()
    }

    pub fn mirror_map(&self) -> Result<MirrorMap> {
        let g = self.g_all()?;
        let names = self.names();
        let r = self.rank();
        // Q_a = Q̌_a · exp(−Σ_l (D_l·C_a) g_l(Q̌))
        let mut mori_forward = Vec::with_capacity(r);
        for (a, c) in self.mori.generators.iter().enumerate() {
            let u = SemiFano::exp_comb(&g, |l| -self.cl.pairing(l, c))?;
            mori_forward.push(u.mul(&MultiSeries::var(&names, self.order + 1, a))?);
        }
        let mori_inverse = reversion_triangular(&mori_forward)?;
        let g_of_q: Vec<MultiSeries> = g.iter().map(|s| s.compose(&mori_inverse)).collect::<Result<_>>()?;
        let mut forward = Vec::new();
        let mut inverse = Vec::new();
        for psi in &self.cl.psi {
            forward.push(SemiFano::exp_comb(&g, |l| -self.cl.pairing(l, psi))?);
            inverse.push(SemiFano::exp_comb(&g_of_q, |l| self.cl.pairing(l, psi))?);
        }
        Ok(MirrorMap {
            names,
            psi_of_mori: self.mori.generators.iter().map(|c| self.cl.psi_coords(c)).collect(),
            forward,
            inverse,
            mori_forward,
            mori_inverse,
            g,
            g_of_q,
        })
    }

    /// `Σ_l exp(g_l(Q̌(Q))) Z_l` with parameters `q_1, …`.
    pub fn semifano_potential(&self, mm: &MirrorMap) -> LaurentPotential {
        let d = self.td.dim();
        let mut w = LaurentPotential::with_default_vars(d);
        w.params = q_names(self.cl.rank(), "q");
        for l in 0..self.cl.nrays() {
            let mut base = Coeff::one();
            let mono: IVec = match self.cl.sigma.iter().position(|&s| s == l) {
                Some(k) => (0..d).map(|i| i64::from(i == k)).collect(),
                None => {
                    let j = self.cl.tau.iter().position(|&t| t == l).unwrap();
                    base = q_monomial(&unit(self.cl.rank(), j));
                    self.cl.nu[l].clone()
                }
            };
            let factor = mm.to_coeff(&mm.g_of_q[l].exp().expect("no constant term"));
            w.add_term(mono, &base.mul(&factor));
        }
        w
    }
}

pub fn q_names(r: usize, stem: &str) -> Vec<String> {
    (1..=r).map(|j| format!("{stem}_{j}")).collect()
}

fn unit(r: usize, j: usize) -> IVec {
    (0..r).map(|i| i64::from(i == j)).collect()
}

fn q_monomial(e: &[i64]) -> Coeff {
    Coeff::term(BigRational::one(), Ratio::from_integer(0), e)
}

/// Mirror map data; all series are in the Mori variables and truncated at the same order.
#[derive(Clone, Debug)]
pub struct MirrorMap {
    pub names: Vec<String>,
    /// `C_a` in `Ψ` coordinates.
    pub psi_of_mori: Vec<IVec>,
    /// `q_j = q̌_j · forward_j(Q̌)`.
    pub forward: Vec<MultiSeries>,
    /// `q̌_j = q_j · inverse_j(Q)`.
    pub inverse: Vec<MultiSeries>,
    pub mori_forward: Vec<MultiSeries>,
    pub mori_inverse: Vec<MultiSeries>,
    pub g: Vec<MultiSeries>,
    pub g_of_q: Vec<MultiSeries>,
}

impl MirrorMap {
    /// Rewrites a series in Mori variables as a Laurent polynomial in `q_j`.
    pub fn to_coeff(&self, s: &MultiSeries) -> Coeff {
        let r = self.psi_of_mori.first().map_or(0, Vec::len);
        let mut out = Coeff::zero();
        for (m, c) in s.terms() {
            let e: IVec = (0..r)
                .map(|j| {
                    self.psi_of_mori
                        .iter()
                        .enumerate()
                        .map(|(a, p)| p[j] * i64::from(m.exp(a)))
                        .sum()
                })
                .collect();
            let c = c.as_rational().expect("mirror series have rational coefficients");
            out.add_term(CoeffKey::new(Ratio::from_integer(0), &e), c);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.forward
            .iter()
            .chain(&self.inverse)
            .all(|s| s.sub(&s.one_like()).is_ok_and(|d| d.is_zero()))
    }

    fn lines(&self, series: &[MultiSeries], lhs: &str, rhs: &str) -> Vec<String> {
        let r = series.len();
        let rn = q_names(r, rhs);
        series
            .iter()
            .enumerate()
            .map(|(j, s)| {
                let c = self.to_coeff(s);
                let body = if c.is_one() {
                    rn[j].clone()
                } else {
                    format!("{} * ({})", rn[j], c.to_text(&rn))
                };
                format!("{lhs}_{} = {body}", j + 1)
            })
            .collect()
    }

    pub fn forward_text(&self) -> Vec<String> {
        self.lines(&self.forward, "q", "q̌")
    }

    pub fn inverse_text(&self) -> Vec<String> {
        self.lines(&self.inverse, "q̌", "q")
    }
}

/// Correspondence data `h_j = −log(q̌_j/q_j)`, one per `Ψ_j`.
pub fn correspondence_h(mm: &MirrorMap) -> Result<Vec<MultiSeries>> {
    mm.inverse
        .iter()
        .map(|s| Ok(s.sub(&s.one_like())?.log1p()?.neg()))
        .collect()
}

/// `Σ_k λ_k h(G_k)` for the subtorus of `ℂ^m → X`, as a `z`-free potential.
pub fn correspondence_equivariant_potential(
    td_y: &ToricData,
    sf: &SemiFano,
    mm: &MirrorMap,
) -> Result<LaurentPotential> {
    if !td_y.is_orthant() {
        return Err(Error::Invariant("Y must be affine space with the standard fan".into()));
    }
    if td_y.nrays() != sf.cl.nrays() {
        return Err(Error::Dimension(format!(
            "Y has {} coordinates, X has {} rays",
            td_y.nrays(),
            sf.cl.nrays()
        )));
    }
    let gens: Vec<IVec> = match &td_y.subtorus {
        Some(s) => s.generators.clone(),
        None => sf.cl.psi.clone(),
    };
    let m = subtorus_in_psi(&sf.cl, &gens)?;
    let h = correspondence_h(mm)?;
    let mut w = LaurentPotential::new(Vec::new(), q_names(sf.cl.rank(), "q"));
    for (k, row) in m.iter().enumerate() {
        let mut hk = h[0].zero_like();
        for (j, &x) in row.iter().enumerate() {
            hk = hk.add(&h[j].scale(&BigRational::from_integer(x.into())))?;
        }
        if hk.is_zero() {
            continue;
        }
        let arg = mm.to_coeff(&hk.neg().exp()?);
        w.add_log(LogTerm {
            lambda: k + 1,
            mult: -BigRational::one(),
            covector: Vec::new(),
            arg,
        });
    }
    Ok(w)
}

/// Rows `M` with `G_k = Σ_j M_kj Ψ_j`; the generators must form a basis of `K`.
pub fn subtorus_in_psi(cl: &CurveClassLattice, gens: &[IVec]) -> Result<Vec<IVec>> {
    if gens.len() != cl.rank() {
        return Err(Error::Invariant(format!(
            "{} generators for a rank-{} curve lattice",
            gens.len(),
            cl.rank()
        )));
    }
    for g in gens {
        if g.len() != cl.nrays() || !cl.in_kernel(g) {
            return Err(Error::Invariant(format!("generator {g:?} is not a curve class of X")));
        }
    }
    let m: Vec<IVec> = gens.iter().map(|g| cl.psi_coords(g)).collect();
    if !crate::lattice::is_unimodular(&m) {
        return Err(Error::Invariant(
            "subtorus generators do not span the curve lattice".into(),
        ));
    }
    Ok(m)
}
