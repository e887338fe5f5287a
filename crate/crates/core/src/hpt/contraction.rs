use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::ainfinity::{AInfinityAlgebra, GradedBasis};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::novikov::{Exponent, Scalar};

/// Finite cochain complex over ℚ; `d[(out, in)]` raises degree by one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    pub basis: GradedBasis,
    pub d: QMatrix,
}

impl Complex {
    pub fn new(basis: GradedBasis, d: QMatrix) -> Result<Self> {
        let n = basis.len();
        if d.rows() != n || d.cols() != n {
            return Err(Error::Dimension(format!(
                "differential is {}x{} on {n} generators",
                d.rows(),
                d.cols()
            )));
        }
        for i in 0..n {
            for j in 0..n {
                if !d[(i, j)].is_zero() && basis.degree(i) != basis.degree(j) + 1 {
                    return Err(Error::Invariant(format!(
                        "d({}) has a component on `{}` of the wrong degree",
                        basis.name(j),
                        basis.name(i)
                    )));
                }
            }
        }
        Ok(Complex { basis, d })
    }

    /// Classical part `m_{1,0}` of an algebra; must be rational.
    pub fn of_algebra(a: &AInfinityAlgebra) -> Result<Self> {
        let n = a.basis().len();
        let mut d = QMatrix::zeros(n, n);
        if let Some(t) = a.ops().get(&1) {
            for (key, out) in t {
                for (i, s) in out.at_energy(&Exponent::ZERO) {
                    d[(i, key[0])] = s
                        .as_rational()
                        .ok_or_else(|| Error::Unsupported("λ-dependent classical differential".into()))?;
                }
            }
        }
        Complex::new(a.basis().clone(), d)
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }
}

/// Contraction data `(i, p, h)` from a source complex onto a target complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub source: Complex,
    pub target: Complex,
    pub i: QMatrix,
    pub p: QMatrix,
    pub h: QMatrix,
}

impl Contraction {
    pub fn new(source: Complex, target: Complex, i: QMatrix, p: QMatrix, h: QMatrix) -> Result<Self> {
        let (n, m) = (source.len(), target.len());
        let shapes = [(&i, n, m, "i"), (&p, m, n, "p"), (&h, n, n, "h")];
        for (mat, r, c, name) in shapes {
            if mat.rows() != r || mat.cols() != c {
                return Err(Error::Dimension(format!(
                    "{name} is {}x{}, expected {r}x{c}",
                    mat.rows(),
                    mat.cols()
                )));
            }
        }
        Ok(Contraction {
            source,
            target,
            i,
            p,
            h,
        })
    }

    pub fn identity(c: Complex) -> Self {
        let n = c.len();
        Contraction {
            source: c.clone(),
            target: c,
            i: QMatrix::identity(n),
            p: QMatrix::identity(n),
            h: QMatrix::zeros(n, n),
        }
    }

    /// Names of the failing identities among the contraction and strongness axioms.
    pub fn check(&self) -> Vec<String> {
        let (d, dt) = (&self.source.d, &self.target.d);
        let n = self.source.len();
        let mut out = Vec::new();
        let mut need = |ok: bool, name: &str| {
            if !ok {
                out.push(name.to_string());
            }
        };
        need(d.mul(&self.i) == self.i.mul(dt), "d∘i = i∘δ");
        need(dt.mul(&self.p) == self.p.mul(d), "δ∘p = p∘d");
        let lhs = QMatrix::identity(n).sub(&self.i.mul(&self.p));
        let rhs = d.mul(&self.h).add(&self.h.mul(d));
        need(lhs == rhs, "Id - i∘p = d∘h + h∘d");
        need(self.p.mul(&self.i) == QMatrix::identity(self.target.len()), "p∘i = Id");
        need(self.h.mul(&self.h).is_zero(), "h∘h");
        need(self.h.mul(&self.i).is_zero(), "h∘i");
        need(self.p.mul(&self.h).is_zero(), "p∘h");
        out
    }

    /// Applies a rational matrix to scalar coefficients at one energy.
    pub(crate) fn apply_scalars(m: &QMatrix, c: &BTreeMap<usize, Scalar>) -> BTreeMap<usize, Scalar> {
        let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (j, s) in c {
            for r in 0..m.rows() {
                let a = &m[(r, *j)];
                if !a.is_zero() {
                    out.entry(r).or_default().add_assign(&s.scale(a));
                }
            }
        }
        out.retain(|_, s| !s.is_zero());
        out
    }
}

fn unit_vec(n: usize, j: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); n];
    v[j] = BigRational::from_integer(1.into());
    v
}

fn extend_greedy(base: &[Vec<BigRational>], candidates: Vec<Vec<BigRational>>, dim: usize) -> Vec<Vec<BigRational>> {
    let mut cur: Vec<Vec<BigRational>> = base.to_vec();
    let mut added = Vec::new();
    for c in candidates {
        let mut trial = cur.clone();
        trial.push(c.clone());
        if QMatrix::from_cols(&trial, dim).rank() == trial.len() {
            cur = trial;
            added.push(c);
        }
    }
    added
}

/// Strong contraction of `c` onto its cohomology via `C = F ⊕ d(F) ⊕ ℋ` in each degree.
///
/// `preferred` (typically the unit) is placed in `ℋ` first when it is a non-exact cycle.
pub fn make_strong_contraction(c: &Complex, preferred: Option<usize>) -> Contraction {
    let n = c.len();
    let mut degrees: Vec<i32> = c.basis.degrees().to_vec();
    degrees.sort();
    degrees.dedup();
    let idx_of = |deg: i32| -> Vec<usize> { (0..n).filter(|&i| c.basis.degree(i) == deg).collect() };

    // F and its image, per degree, as full-length vectors
    let mut f_of: BTreeMap<i32, Vec<Vec<BigRational>>> = BTreeMap::new();
    let mut harm: Vec<(i32, Vec<BigRational>, Option<String>)> = Vec::new();
    let mut blocks: BTreeMap<i32, (Vec<usize>, QMatrix)> = BTreeMap::new();
    for &deg in &degrees {
        let ids = idx_of(deg);
        let dim = ids.len();
        let local_d = {
            let mut m = QMatrix::zeros(n, dim);
            for (a, &j) in ids.iter().enumerate() {
                for r in 0..n {
                    m[(r, a)] = c.d[(r, j)].clone();
                }
            }
            m
        };
        let z: Vec<Vec<BigRational>> = local_d.nullspace();
        let f = extend_greedy(&z, (0..dim).map(|a| unit_vec(dim, a)).collect(), dim);
        let lift = |v: &[BigRational]| {
            let mut full = vec![BigRational::zero(); n];
            for (a, &j) in ids.iter().enumerate() {
                full[j] = v[a].clone();
            }
            full
        };
        f_of.insert(deg, f.iter().map(|v| lift(v)).collect());
        let restrict = |v: &[BigRational]| ids.iter().map(|&j| v[j].clone()).collect::<Vec<_>>();
        let b: Vec<Vec<BigRational>> = f_of
            .get(&(deg - 1))
            .map(|fs| fs.iter().map(|v| restrict(&c.d.apply(v))).collect())
            .unwrap_or_default();
        let mut ordered = Vec::new();
        if let Some(pi) = preferred.filter(|&pi| c.basis.degree(pi) == deg) {
            let a = ids.iter().position(|&j| j == pi).unwrap();
            ordered.push(unit_vec(dim, a));
        }
        // standard basis cycles first keeps generator names readable
        ordered.extend(
            (0..dim)
                .map(|a| unit_vec(dim, a))
                .filter(|v| local_d.apply(v).iter().all(Zero::is_zero)),
        );
        ordered.extend(z.iter().cloned());
        let hs = extend_greedy(&b, ordered, dim);
        let mut p_cols: Vec<Vec<BigRational>> = f.clone();
        p_cols.extend(b.iter().cloned());
        p_cols.extend(hs.iter().cloned());
        for v in &hs {
            let name = v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(a, _)| a)
                .collect::<Vec<_>>();
            let nm = match name.as_slice() {
                [a] if v[*a] == BigRational::from_integer(1.into()) => Some(c.basis.name(ids[*a]).to_string()),
                _ => None,
            };
            harm.push((deg, lift(v), nm));
        }
        blocks.insert(deg, (ids, QMatrix::from_cols(&p_cols, dim)));
    }

    // target basis
    let mut used: Vec<String> = Vec::new();
    let mut tgt: Vec<(String, i32)> = Vec::new();
    for (k, (deg, _, nm)) in harm.iter().enumerate() {
        let name = match nm {
            Some(s) if !used.contains(s) => s.clone(),
            _ => format!("h{k}"),
        };
        used.push(name.clone());
        tgt.push((name, *deg));
    }
    let unit_name = preferred.and_then(|pi| {
        let target = unit_vec(n, pi);
        harm.iter().position(|(_, v, _)| *v == target).map(|k| tgt[k].0.clone())
    });
    let target_basis = GradedBasis::from_owned(tgt, unit_name.as_deref()).expect("generated names are unique");
    let m = harm.len();
    let mut i_mat = QMatrix::zeros(n, m);
    for (k, (_, v, _)) in harm.iter().enumerate() {
        for r in 0..n {
            i_mat[(r, k)] = v[r].clone();
        }
    }
    let mut p_mat = QMatrix::zeros(m, n);
    let mut h_mat = QMatrix::zeros(n, n);
    let mut harm_offset = 0;
    for (deg, (ids, pm)) in &blocks {
        let inv = pm.inverse().expect("F ⊕ B ⊕ H spans each degree");
        let nf = f_of[deg].len();
        let nb = f_of.get(&(deg - 1)).map_or(0, Vec::len);
        let nh = ids.len() - nf - nb;
        for (a, &j) in ids.iter().enumerate() {
            // coordinates of basis vector j in [F | B | H]
            for t in 0..nh {
                p_mat[(harm_offset + t, j)] = inv[(nf + nb + t, a)].clone();
            }
            for t in 0..nb {
                let coef = &inv[(nf + t, a)];
                if coef.is_zero() {
                    continue;
                }
                let fv = &f_of[&(deg - 1)][t];
                for r in 0..n {
                    if !fv[r].is_zero() {
                        h_mat[(r, j)] += coef * &fv[r];
                    }
                }
            }
        }
        harm_offset += nh;
    }
    let target = Complex {
        basis: target_basis,
        d: QMatrix::zeros(m, m),
    };
    Contraction {
        source: c.clone(),
        target,
        i: i_mat,
        p: p_mat,
        h: h_mat,
    }
}
