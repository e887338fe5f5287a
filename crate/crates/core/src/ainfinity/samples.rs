//! Small hand-checked structures used by the CLI examples, benches and tests.

use num_rational::BigRational;

use super::{AInfinityAlgebra, GradedBasis};
use crate::novikov::{rat, Exponent};

fn one() -> BigRational {
    rat(1, 1)
}

/// Unital dga on `e:0, a:0, s:1, x:1` with `d a = s`, `a·a = a`, `a·s = s`, `a·x = x`.
/// Its cohomology is spanned by `e` and `x`.
pub fn toy_dga(truncation: Exponent) -> AInfinityAlgebra {
    let basis = GradedBasis::new(&[("e", 0), ("a", 0), ("s", 1), ("x", 1)], Some("e")).unwrap();
    let (e, a, s, x) = (0, 1, 2, 3);
    let mut product = Vec::new();
    for y in 0..4 {
        product.push(((e, y), vec![(y, one())]));
        if y != e {
            product.push(((y, e), vec![(y, one())]));
        }
    }
    product.push(((a, a), vec![(a, one())]));
    product.push(((a, s), vec![(s, one())]));
    product.push(((a, x), vec![(x, one())]));
    AInfinityAlgebra::from_dga(basis, &[(a, vec![(s, one())])], &product, truncation, 1).unwrap()
}

/// Rank-one algebra `Λe` with curvature `m_0 = W·e`.
pub fn point_algebra(w: crate::novikov::NovikovSeries) -> AInfinityAlgebra {
    let basis = GradedBasis::new(&[("e", 0)], Some("e")).unwrap();
    let mut a = AInfinityAlgebra::new(basis, w.truncation(), w.lambda_cap());
    a.add_entry(&[0, 0], &a.basis_chain(0)).unwrap();
    a.add_entry(&[], &super::Chain::single(0, w)).unwrap();
    a
}
