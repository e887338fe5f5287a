//! Exact rational feasibility by Gaussian substitution and Fourier–Motzkin elimination.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// `a·x = b` or `a·x ≥ b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub a: Vec<BigRational>,
    pub b: BigRational,
}

impl Row {
    pub fn new(a: Vec<BigRational>, b: BigRational) -> Self {
        Row { a, b }
    }
}

fn substitute(row: &mut Row, v: usize, pivot: &Row) {
    let f = row.a[v].clone() / &pivot.a[v];
    if f.is_zero() {
        return;
    }
    for (x, p) in row.a.iter_mut().zip(&pivot.a) {
        *x -= &f * p;
    }
    row.b -= f * &pivot.b;
}

/// Whether `{x : eqs, ineqs}` is nonempty.
pub fn feasible(mut eqs: Vec<Row>, mut ineqs: Vec<Row>) -> bool {
    while let Some(e) = eqs.pop() {
        let Some(v) = e.a.iter().position(|x| !x.is_zero()) else {
            if !e.b.is_zero() {
                return false;
            }
            continue;
        };
        for r in eqs.iter_mut().chain(ineqs.iter_mut()) {
            substitute(r, v, &e);
        }
    }
    let n = ineqs.first().map_or(0, |r| r.a.len());
    for v in 0..n {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in ineqs {
            if r.a[v].is_positive() {
                pos.push(r);
            } else if r.a[v].is_negative() {
                neg.push(r);
            } else {
                rest.push(r);
            }
        }
        for p in &pos {
            for q in &neg {
                let (alpha, beta) = (p.a[v].clone(), -q.a[v].clone());
                let a: Vec<BigRational> = p.a.iter().zip(&q.a).map(|(x, y)| x * &beta + y * &alpha).collect();
                let row = Row::new(a, &p.b * &beta + &q.b * &alpha);
                if !rest.contains(&row) {
                    rest.push(row);
                }
            }
        }
        ineqs = rest;
    }
    ineqs.iter().all(|r| !r.b.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::novikov::rat;

    fn row(a: &[i64], b: i64) -> Row {
        Row::new(a.iter().map(|&x| rat(x, 1)).collect(), rat(b, 1))
    }

    #[test]
    fn simplex_slices() {
        let orthant = vec![row(&[1, 0, 0], 0), row(&[0, 1, 0], 0), row(&[0, 0, 1], 0)];
        assert!(feasible(vec![row(&[1, 1, 1], 1)], orthant.clone()));
        assert!(!feasible(vec![row(&[1, 1, 1], -1)], orthant.clone()));
        assert!(feasible(vec![row(&[1, 1, 1], 0), row(&[1, 0, 0], 0)], orthant.clone()));
        assert!(!feasible(
            vec![],
            vec![row(&[1, 1], 2), row(&[-1, 0], 0), row(&[0, -1], -1)]
        ));
    }
}
