//! Seeded generator of small filtered A∞ algebras and brute-force oracles.
//!
//! Every structure is a classical unital algebra moved by a unitriangular
//! change of basis, deformed by a random odd cochain and given a central
//! curvature. Odd cochains of positive valuation are then weak Maurer–Cartan
//! by construction, so the searches below always find some.
#![allow(dead_code)]

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use eqcorr::ainfinity::samples::{point_algebra, toy_dga};
use eqcorr::ainfinity::{AInfinityAlgebra, Chain, GradedBasis};
use eqcorr::linalg::QMatrix;
use eqcorr::novikov::{rat, Exponent, NovikovSeries, Scalar};
use eqcorr::trimodule::AInfinityTriModule;

pub const LEVELS: [(i64, i64); 5] = [(1, 3), (1, 2), (2, 3), (1, 1), (3, 2)];

pub fn truncation() -> Exponent {
    Exponent::int(3)
}

pub fn ex(n: i64, d: i64) -> Exponent {
    Exponent::new(n, d).unwrap()
}

/// The classical algebras the generator starts from.
pub fn base(kind: usize) -> AInfinityAlgebra {
    let tr = truncation();
    let one = || vec![(0usize, rat(1, 1))];
    match kind {
        0 => toy_dga(tr),
        1 => {
            // toy algebra without x
            let basis = GradedBasis::new(&[("e", 0), ("a", 0), ("s", 1)], Some("e")).unwrap();
            let mut product = Vec::new();
            for y in 0..3 {
                product.push(((0, y), vec![(y, rat(1, 1))]));
                if y != 0 {
                    product.push(((y, 0), vec![(y, rat(1, 1))]));
                }
            }
            product.push(((1, 1), vec![(1, rat(1, 1))]));
            product.push(((1, 2), vec![(2, rat(1, 1))]));
            AInfinityAlgebra::from_dga(basis, &[(1, vec![(2, rat(1, 1))])], &product, tr, 1).unwrap()
        }
        2 | 3 => {
            // exterior algebra on one odd generator, or the Clifford algebra x·x = e
            let basis = GradedBasis::new(&[("e", 0), ("x", 1)], Some("e")).unwrap();
            let mut product = vec![
                ((0, 0), one()),
                ((0, 1), vec![(1, rat(1, 1))]),
                ((1, 0), vec![(1, rat(1, 1))]),
            ];
            if kind == 3 {
                product.push(((1, 1), one()));
            }
            AInfinityAlgebra::from_dga(basis, &[], &product, tr, 1).unwrap()
        }
        _ => point_algebra(NovikovSeries::zero(tr, 1)),
    }
}

/// Unitriangular `P` with `P(b_i) = b_i + Σ_{j<i, same parity} c_ij b_j`.
fn mixing(basis: &GradedBasis, rng: &mut ChaCha8Rng) -> QMatrix {
    let n = basis.len();
    let mut p = QMatrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            if basis.is_odd(i) == basis.is_odd(j) && rng.gen_bool(0.5) {
                p[(j, i)] = rat(rng.gen_range(-2..=2), 1);
            }
        }
    }
    p
}

pub fn apply(m: &QMatrix, c: &Chain) -> Chain {
    let mut out = c.zero_like();
    for (j, s) in c.coeffs() {
        for i in 0..m.rows() {
            if m[(i, *j)] != rat(0, 1) {
                out.add_series(i, &s.scale(&m[(i, *j)])).unwrap();
            }
        }
    }
    out
}

/// `m'_k(x…) = P m_k(P⁻¹x, …)` on every basis tuple up to the top arity.
pub fn conjugate(a: &AInfinityAlgebra, p: &QMatrix) -> AInfinityAlgebra {
    let pinv = p.inverse().unwrap();
    let n = a.basis().len();
    let images: Vec<Chain> = (0..n).map(|i| apply(&pinv, &a.basis_chain(i))).collect();
    let mut out = AInfinityAlgebra::new(a.basis().clone(), a.truncation(), a.lambda_cap());
    for k in 0..=a.max_arity() {
        for key in all_tuples(n, k) {
            let args: Vec<&Chain> = key.iter().map(|&i| &images[i]).collect();
            let v = apply(p, &a.eval(&args).unwrap());
            if !v.is_zero() {
                out.add_entry(&key, &v).unwrap();
            }
        }
    }
    out
}

pub fn all_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

fn level(rng: &mut ChaCha8Rng, levels: &[Exponent]) -> Exponent {
    levels[rng.gen_range(0..levels.len())]
}

/// Random odd cochain with coefficients in the given energy levels.
pub fn random_odd(a: &AInfinityAlgebra, rng: &mut ChaCha8Rng, levels: &[Exponent]) -> Chain {
    let mut b = a.zero_chain();
    for i in 0..a.basis().len() {
        if a.basis().is_odd(i) && rng.gen_bool(0.7) {
            let c = rng.gen_range(-3..=3);
            if c != 0 {
                b.add_series(i, &a.series(level(rng, levels), rat(c, rng.gen_range(1..=2))))
                    .unwrap();
            }
        }
    }
    b
}

/// A random structure together with the two energy levels it was built from.
pub struct Sample {
    pub seed: u64,
    pub algebra: AInfinityAlgebra,
    pub levels: Vec<Exponent>,
    pub rng: ChaCha8Rng,
}

pub fn sample(seed: u64) -> Sample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let i = rng.gen_range(0..LEVELS.len());
    let j = rng.gen_range(0..LEVELS.len());
    let mut levels: Vec<Exponent> = [LEVELS[i], LEVELS[j]].iter().map(|&(n, d)| ex(n, d)).collect();
    levels.dedup();
    // weighted toward bases whose cohomology has odd classes
    let kinds = [0, 0, 0, 2, 2, 3, 3, 1, 4];
    let a = base(kinds[rng.gen_range(0..kinds.len())]);
    let p = mixing(a.basis(), &mut rng);
    let a = conjugate(&a, &p);
    let beta = random_odd(&a, &mut rng, &levels);
    let mut a = a.deform(&beta).unwrap();
    if let Some(e) = a.unit() {
        let (w, h) = (rng.gen_range(-2..=2), rng.gen_range(-2..=2));
        let tr = a.truncation();
        let mut s = NovikovSeries::rational_term(level(&mut rng, &levels), rat(w, 1), tr, 1);
        let lam = Scalar::lambda(1).scale(&rat(h, 1));
        s = s
            .add(&NovikovSeries::monomial(level(&mut rng, &levels), lam, tr, 1).unwrap())
            .unwrap();
        a.add_entry(&[], &Chain::single(e, s)).unwrap();
    }
    Sample {
        seed,
        algebra: a,
        levels,
        rng,
    }
}

/// `Σ_k m_k(b, …, b)` through multilinear evaluation, read as `W·e` when possible.
pub fn potential_oracle(a: &AInfinityAlgebra, b: &Chain) -> Option<NovikovSeries> {
    let mut total = a.zero_chain();
    for k in 0..=a.max_arity() {
        let args = vec![b; k];
        total.add_assign(&a.eval(&args).unwrap()).unwrap();
    }
    let e = a.unit()?;
    if total.support().any(|i| i != e) {
        return None;
    }
    Some(total.coeff(e))
}

/// `n^{b'',b',b}_{0,0,0}(y)` read off the fully deformed module.
pub fn deformed_oracle(d: &AInfinityTriModule, bl: &Chain, bm: &Chain, br: &Chain, y: &Chain) -> Chain {
    d.deform(bl, bm, br).unwrap().eval(&[], y, &[], &[]).unwrap()
}

pub fn q(n: i64, d: i64) -> BigRational {
    rat(n, d)
}
