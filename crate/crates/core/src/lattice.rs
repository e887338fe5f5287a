//! Integer lattice helpers: kernels, saturation, Smith invariants.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::linalg::QMatrix;

pub type IVec = Vec<i64>;

pub fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

pub fn is_primitive(v: &[i64]) -> bool {
    gcd_all(v) == 1
}

/// `v / gcd(v)`; zero stays zero.
pub fn primitive(v: &[i64]) -> IVec {
    let g = gcd_all(v);
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

/// Clears denominators of a rational vector and makes it primitive.
pub fn primitive_from_rational(v: &[BigRational]) -> IVec {
    let l = v.iter().fold(num_bigint::BigInt::from(1), |l, x| l.lcm(x.denom()));
    let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| (x * &l).to_integer()).collect();
    let g = ints.iter().fold(num_bigint::BigInt::zero(), |g, x| g.gcd(x));
    ints.iter()
        .map(|x| {
            if g.is_zero() {
                0
            } else {
                (x / &g).to_i64().expect("lattice entry overflow")
            }
        })
        .collect()
}

pub fn to_q(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        return if a < 0 { (-a, -1, 0) } else { (a, 1, 0) };
    }
    let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
    (g, y, x - a.div_euclid(b) * y)
}

/// Column echelon form `A U = H` with `U` unimodular; returns `(H, U, rank)`.
fn column_echelon(a: &[IVec], ncols: usize) -> (Vec<Vec<i128>>, Vec<Vec<i128>>, usize) {
    let mut h: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut u: Vec<Vec<i128>> = (0..ncols)
        .map(|i| (0..ncols).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut k = 0;
    for r in 0..h.len() {
        if k == ncols {
            break;
        }
        for c in k + 1..ncols {
            let (x0, x1) = (h[r][k], h[r][c]);
            if x1 == 0 {
                continue;
            }
            let (g, s, t) = ext_gcd(x0, x1);
            let (p, q) = (x0 / g, x1 / g);
            for m in [&mut h, &mut u] {
                for row in m.iter_mut() {
                    let (ck, cc) = (row[k], row[c]);
                    row[k] = s * ck + t * cc;
                    row[c] = -q * ck + p * cc;
                }
            }
        }
        if h[r][k] != 0 {
            k += 1;
        }
    }
    (h, u, k)
}

/// ℤ-basis of `{x ∈ ℤ^ncols : A x = 0}`.
pub fn integer_kernel(a: &[IVec], ncols: usize) -> Vec<IVec> {
    let (_, u, rank) = column_echelon(a, ncols);
    (rank..ncols)
        .map(|j| {
            (0..ncols)
                .map(|i| i64::try_from(u[i][j]).expect("kernel overflow"))
                .collect()
        })
        .collect()
}

/// ℤ-basis of `span_ℚ(gens) ∩ ℤ^n`.
pub fn saturation(gens: &[IVec], n: usize) -> Vec<IVec> {
    if gens.is_empty() {
        return Vec::new();
    }
    let ortho = integer_kernel(gens, n);
    if ortho.is_empty() {
        return (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    }
    integer_kernel(&ortho, n)
}

/// Nonzero Smith invariant factors of an integer matrix.
pub fn smith_invariants(a: &[IVec]) -> Vec<i64> {
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| m[i][j] != 0)
            .min_by_key(|&(i, j)| m[i][j].abs())
        else {
            break;
        };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        let (top, rest) = m.split_at_mut(t + 1);
        let pivot = &top[t];
        for row in rest {
            let f = row[t].div_euclid(pivot[t]);
            if f != 0 {
                for (x, p) in row[t..].iter_mut().zip(&pivot[t..]) {
                    *x -= f * p;
                }
            }
            clean &= row[t] == 0;
        }
        for j in t + 1..cols {
            let f = m[t][j].div_euclid(m[t][t]);
            if f != 0 {
                for row in m.iter_mut().skip(t) {
                    row[j] -= f * row[t];
                }
            }
            clean &= m[t][j] == 0;
        }
        if !clean {
            continue;
        }
        // divisibility: fold a row with a non-multiple entry back in
        let d = m[t][t];
        if let Some(i) = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % d != 0)) {
            let (top, rest) = m.split_at_mut(i);
            for (x, y) in top[t][t..].iter_mut().zip(&rest[0][t..]) {
                *x += y;
            }
            continue;
        }
        out.push(i64::try_from(d.abs()).expect("invariant overflow"));
        t += 1;
    }
    out
}

pub fn rank(a: &[IVec]) -> usize {
    smith_invariants(a).len()
}

pub fn det(rows: &[IVec]) -> BigRational {
    let q = QMatrix::from_int_rows(rows);
    let n = q.rows();
    if n == 0 {
        return BigRational::from_integer(1.into());
    }
    // det from elimination: product of pivots with row-swap parity
    let mut m = q;
    let mut sign = BigRational::from_integer(1.into());
    let mut acc = BigRational::from_integer(1.into());
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            for j in 0..n {
                let tmp = m[(p, j)].clone();
                m[(p, j)] = m[(c, j)].clone();
                m[(c, j)] = tmp;
            }
            sign = -sign;
        }
        let piv = m[(c, c)].clone();
        acc *= &piv;
        for i in c + 1..n {
            let f = &m[(i, c)] / &piv;
            if !f.is_zero() {
                for j in c..n {
                    let t = &f * &m[(c, j)];
                    m[(i, j)] -= t;
                }
            }
        }
    }
    sign * acc
}

pub fn is_unimodular(rows: &[IVec]) -> bool {
    det(rows).abs() == BigRational::from_integer(1.into())
}
