use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use rayon::prelude::*;

use super::contraction::{Complex, Contraction};
use super::transfer::{compositions, gapping_levels, Morphism};
use crate::ainfinity::text::lincomb_chain;
use crate::ainfinity::{tuples, AInfinityAlgebra, Chain};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::novikov::{Exponent, Scalar};
use crate::trimodule::{AInfinityTriModule, TriKey};

/// Classical complex `(D, n_{0,0,0})` at energy zero.
pub fn module_complex(d: &AInfinityTriModule) -> Result<Complex> {
    let n = d.basis().len();
    let mut m = QMatrix::zeros(n, n);
    if let Some(t) = d.ops().get(&(0, 0, 0)) {
        for (key, out) in t {
            for (i, s) in out.at_energy(&Exponent::ZERO) {
                m[(i, key.y)] = s
                    .as_rational()
                    .ok_or_else(|| Error::Unsupported("λ-dependent classical differential".into()))?;
            }
        }
    }
    Complex::new(d.basis().clone(), m)
}

/// Tables `Ĩ_{k'',k',k}` of a tri-module morphism into `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriMorphism {
    pub maps: BTreeMap<TriKey, Chain>,
}

impl TriMorphism {
    pub fn entry(&self, key: &TriKey) -> Option<&Chain> {
        self.maps.get(key)
    }

    fn add(&mut self, key: &TriKey, c: &Chain) -> Result<()> {
        let slot = self.maps.entry(key.clone()).or_insert_with(|| c.zero_like());
        slot.add_assign(c)?;
        if slot.is_zero() {
            self.maps.remove(key);
        }
        Ok(())
    }
}

fn shifted_odd(a: &AInfinityAlgebra, xs: &[usize]) -> bool {
    xs.iter().filter(|&&i| !a.basis().is_odd(i)).count() % 2 == 1
}

/// Blocks `f_{k_1}(x…), …` for a composition; `None` when some block vanishes.
fn blocks<'a>(f: &'a Morphism, x: &[usize], comp: &[usize]) -> Option<Vec<&'a Chain>> {
    let mut out = Vec::with_capacity(comp.len());
    let mut pos = 0;
    for &k in comp {
        out.push(f.entry(&x[pos..pos + k])?);
        pos += k;
    }
    Some(out)
}

/// Σ over all trees with one `Ĩ` leaf: `n(ĩ''…; Ĩ(…); ĩ'…; ĩ…)` on a basis key.
fn pulled_back(d: &AInfinityTriModule, maps: [&Morphism; 3], big: &TriMorphism, key: &TriKey) -> Result<Chain> {
    let (xl, xm, xr) = (&key.left, &key.mid, &key.right);
    let mut total = d.zero_chain();
    for (a, b, c) in d.ops().keys() {
        for t in 0..=xl.len() {
            let comps_l = compositions(t, *a);
            if comps_l.is_empty() {
                continue;
            }
            for f1 in 0..=xm.len() {
                let comps_m = compositions(xm.len() - f1, *b);
                for f in 0..=xr.len() {
                    let inner = TriKey::new(&xl[t..], key.y, &xm[..f1], &xr[..f]);
                    let Some(y) = big.entry(&inner) else { continue };
                    let odd = shifted_odd(&d.mid, &xm[f1..]) && shifted_odd(&d.right, &xr[..f]);
                    for cl in &comps_l {
                        let Some(ls) = blocks(maps[0], &xl[..t], cl) else {
                            continue;
                        };
                        for cm in &comps_m {
                            let Some(ms) = blocks(maps[1], &xm[f1..], cm) else {
                                continue;
                            };
                            for cr in compositions(xr.len() - f, *c) {
                                let Some(rs) = blocks(maps[2], &xr[f..], &cr) else {
                                    continue;
                                };
                                let v = d.eval(&ls, y, &ms, &rs)?;
                                total.add_assign(&if odd { v.neg() } else { v })?;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(total)
}

/// Transfers `D` along a contraction of `(D, n_{0,0,0})`, over algebras already
/// transferred with morphisms `ĩ'', ĩ', ĩ`.
///
/// Induction on energy then total arity: with `N` the sum of all trees except
/// `n_{0,0,0}` at energy zero on top of the unknown, `Ĩ = -h(N_E)` and `n^H = p(N_E)`.
pub fn transfer_trimodule(
    d: &AInfinityTriModule,
    c: &Contraction,
    algebras: [(&AInfinityAlgebra, &Morphism); 3],
    k_max: usize,
) -> Result<(AInfinityTriModule, TriMorphism)> {
    if module_complex(d)? != c.source {
        return Err(Error::Invariant(
            "contraction does not contract the module's classical complex".into(),
        ));
    }
    let (tr, cap) = (d.truncation(), d.lambda_cap());
    let [(hl, il), (hm, im), (hr, ir)] = algebras;
    let mut h = AInfinityTriModule::new(hl.clone(), hm.clone(), hr.clone(), c.target.basis.clone())?;
    let maps = [il, im, ir];
    let mut big = TriMorphism { maps: BTreeMap::new() };
    let i_d = Morphism::strict(c.target.basis.clone(), d.basis().clone(), &c.i, tr, cap)?;
    let delta = Morphism::strict(c.target.basis.clone(), c.target.basis.clone(), &c.target.d, tr, cap)?;
    for y in 0..c.target.len() {
        if let Some(v) = i_d.entry(&[y]) {
            big.add(&TriKey::new(&[], y, &[], &[]), v)?;
        }
        if let Some(v) = delta.entry(&[y]) {
            h.add_entry(&TriKey::new(&[], y, &[], &[]), v)?;
        }
    }
    let mut gens: BTreeSet<Exponent> = BTreeSet::new();
    for t in d.ops().values() {
        for v in t.values() {
            gens.extend(v.energies());
        }
    }
    for a in [&d.left, &d.mid, &d.right] {
        gens.extend(a.energies());
    }
    let nh = c.target.len();
    let (nl, nm, nr) = (hl.basis().len(), hm.basis().len(), hr.basis().len());
    let neg_h = c.h.scale(&-BigRational::from_integer(1.into()));
    for e in gapping_levels(&gens, tr) {
        for total in 0..=k_max {
            if total == 0 && e.is_zero() {
                continue;
            }
            let mut keys = Vec::new();
            for p in 0..=total {
                for q in 0..=total - p {
                    let r = total - p - q;
                    for l in tuples(nl, p) {
                        for m in tuples(nm, q) {
                            for rr in tuples(nr, r) {
                                for y in 0..nh {
                                    keys.push(TriKey::new(&l, y, &m, &rr));
                                }
                            }
                        }
                    }
                }
            }
            let level: Vec<(TriKey, BTreeMap<usize, Scalar>)> = keys
                .into_par_iter()
                .map(|key| {
                    let n = pulled_back(d, maps, &big, &key)?;
                    Ok((key, n.at_energy(&e)))
                })
                .collect::<Result<Vec<_>>>()?;
            for (key, ne) in level {
                if ne.is_empty() {
                    continue;
                }
                let hn = Contraction::apply_scalars(&neg_h, &ne);
                let pn = Contraction::apply_scalars(&c.p, &ne);
                big.add(&key, &lincomb_chain(&hn, e, tr, cap)?)?;
                h.add_entry(&key, &lincomb_chain(&pn, e, tr, cap)?)?;
            }
        }
    }
    Ok((h, big))
}
