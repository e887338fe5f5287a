use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use super::contraction::{Complex, Contraction};
use crate::ainfinity::text::{format_entry, lincomb_chain};
use crate::ainfinity::{tuples, AInfinityAlgebra, Chain, GradedBasis, Table};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::novikov::{Exponent, NovikovSeries, Scalar};

/// Gapped morphism tables `f_k: S^{⊗k} → T`, energies folded into coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub source: GradedBasis,
    pub target: GradedBasis,
    pub maps: BTreeMap<usize, Table>,
    pub truncation: Exponent,
    pub lambda_cap: u32,
}

impl Morphism {
    pub fn new(source: GradedBasis, target: GradedBasis, truncation: Exponent, lambda_cap: u32) -> Self {
        Morphism {
            source,
            target,
            maps: BTreeMap::new(),
            truncation,
            lambda_cap,
        }
    }

    /// Strict morphism with `f_1 = m` and nothing else.
    pub fn strict(
        source: GradedBasis,
        target: GradedBasis,
        m: &QMatrix,
        truncation: Exponent,
        lambda_cap: u32,
    ) -> Result<Self> {
        let mut f = Morphism::new(source, target, truncation, lambda_cap);
        for x in 0..m.cols() {
            let coeffs: BTreeMap<usize, Scalar> = (0..m.rows())
                .filter(|&r| !num_traits::Zero::is_zero(&m[(r, x)]))
                .map(|r| (r, Scalar::from_rational(m[(r, x)].clone())))
                .collect();
            f.add(&[x], &lincomb_chain(&coeffs, Exponent::ZERO, truncation, lambda_cap)?)?;
        }
        Ok(f)
    }

    pub fn entry(&self, inputs: &[usize]) -> Option<&Chain> {
        self.maps.get(&inputs.len()).and_then(|t| t.get(inputs))
    }

    pub fn add(&mut self, inputs: &[usize], c: &Chain) -> Result<()> {
        let t = self.maps.entry(inputs.len()).or_default();
        let slot = t.entry(inputs.to_vec()).or_insert_with(|| c.zero_like());
        slot.add_assign(c)?;
        if slot.is_zero() {
            t.remove(inputs);
            if t.is_empty() {
                self.maps.remove(&inputs.len());
            }
        }
        Ok(())
    }

    pub fn is_strict(&self) -> bool {
        self.maps.iter().all(|(k, t)| *k == 1 || t.is_empty())
    }

    /// `f_k` on arbitrary source chains.
    pub fn eval(&self, inputs: &[&Chain]) -> Result<Chain> {
        let mut out = Chain::zero(self.truncation, self.lambda_cap);
        let Some(t) = self.maps.get(&inputs.len()) else {
            return Ok(out);
        };
        'entries: for (key, val) in t {
            let mut coeff = NovikovSeries::one(self.truncation, self.lambda_cap);
            for (x, &i) in inputs.iter().zip(key) {
                match x.coeffs().get(&i) {
                    Some(c) => coeff = coeff.mul(c)?,
                    None => continue 'entries,
                }
            }
            out.add_scaled(&coeff, val)?;
        }
        Ok(out)
    }

    /// `Σ_k f_k(b, …, b)`.
    pub fn exp_apply(&self, b: &Chain) -> Result<Chain> {
        let mut out = Chain::zero(self.truncation, self.lambda_cap);
        for t in self.maps.values() {
            'entries: for (key, val) in t {
                let mut coeff = NovikovSeries::one(self.truncation, self.lambda_cap);
                for &i in key {
                    coeff = coeff.mul(&b.coeff(i))?;
                    if coeff.is_zero() {
                        continue 'entries;
                    }
                }
                out.add_scaled(&coeff, val)?;
            }
        }
        Ok(out)
    }

    pub fn to_text(&self, op: &str) -> String {
        let mut rows = Vec::new();
        for (k, t) in &self.maps {
            for (key, val) in t {
                for e in val.energies() {
                    let names: Vec<&str> = key.iter().map(|&i| self.source.name(i)).collect();
                    let rhs = Chain::lincomb_text(&val.at_energy(&e), &self.target);
                    rows.push((
                        (*k, e, key.clone()),
                        format_entry(op, &k.to_string(), &e, &names.join(","), &rhs),
                    ));
                }
            }
        }
        rows.sort();
        rows.into_iter().map(|(_, s)| s + "\n").collect()
    }
}

/// Elements of the monoid generated by `gens` that lie below `bound`, ascending, including 0.
pub fn gapping_levels(gens: &BTreeSet<Exponent>, bound: Exponent) -> Vec<Exponent> {
    let gens: Vec<Exponent> = gens.iter().copied().filter(|g| !g.is_zero() && *g < bound).collect();
    let mut seen: BTreeSet<Exponent> = BTreeSet::from([Exponent::ZERO]);
    let mut frontier = vec![Exponent::ZERO];
    while let Some(x) = frontier.pop() {
        for g in &gens {
            let y = x + *g;
            if y < bound && seen.insert(y) {
                frontier.push(y);
            }
        }
    }
    seen.into_iter().collect()
}

/// All ways to write `k` as an ordered sum of `parts` nonnegative integers.
pub(crate) fn compositions(k: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if k == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=k {
        for mut rest in compositions(k - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `Σ m_ℓ(f_{k_1}(x…), …, f_{k_ℓ}(x…))` over all arities and splittings.
fn compose_after(a: &AInfinityAlgebra, f: &Morphism, x: &[usize]) -> Result<Chain> {
    let mut total = a.zero_chain();
    for (l, table) in a.ops() {
        if table.is_empty() {
            continue;
        }
        'split: for comp in compositions(x.len(), *l) {
            let mut args = Vec::with_capacity(*l);
            let mut pos = 0;
            for &kj in &comp {
                match f.entry(&x[pos..pos + kj]) {
                    Some(c) => args.push(c),
                    None => continue 'split,
                }
                pos += kj;
            }
            total.add_assign(&a.eval(&args)?)?;
        }
    }
    Ok(total)
}

fn check_matches(a: &AInfinityAlgebra, c: &Contraction) -> Result<()> {
    let cx = Complex::of_algebra(a)?;
    if cx != c.source {
        return Err(Error::Invariant(
            "contraction does not contract the algebra's classical complex".into(),
        ));
    }
    if let Some(m00) = a.entry(&[]) {
        if !m00.at_energy(&Exponent::ZERO).is_empty() {
            return Err(Error::Invariant("m_0 has an energy-zero part".into()));
        }
    }
    Ok(())
}

/// Transferred structure on the contraction target together with the morphism `ĩ`.
///
/// Induction on (energy, arity): with `M = Σ m(ĩ…ĩ)` over all terms except
/// `m_{1,0}(ĩ_{k,E})`, set `ĩ_{k,E} = -h(M_E)` and `m^H_{k,E} = p(M_E)`.
pub fn transfer_algebra(a: &AInfinityAlgebra, c: &Contraction, k_max: usize) -> Result<(AInfinityAlgebra, Morphism)> {
    check_matches(a, c)?;
    let (tr, cap) = (a.truncation(), a.lambda_cap());
    let hb = c.target.basis.clone();
    let mut h_alg = AInfinityAlgebra::new(hb.clone(), tr, cap);
    let mut it = Morphism::new(hb.clone(), a.basis().clone(), tr, cap);
    let delta = Morphism::strict(hb.clone(), hb.clone(), &c.target.d, tr, cap)?;
    for (key, v) in delta.maps.get(&1).into_iter().flatten() {
        h_alg.add_entry(key, v)?;
    }
    let i1 = Morphism::strict(hb.clone(), a.basis().clone(), &c.i, tr, cap)?;
    it.maps = i1.maps;
    let n = hb.len();
    if n == 0 {
        return Ok((h_alg, it));
    }
    for e in gapping_levels(&a.energies(), tr) {
        for k in 0..=k_max {
            if (k == 1 || k == 0) && e.is_zero() {
                continue;
            }
            let level: Vec<(Vec<usize>, BTreeMap<usize, Scalar>)> = tuples(n, k)
                .into_par_iter()
                .map(|x| {
                    let m = compose_after(a, &it, &x)?;
                    Ok((x, m.at_energy(&e)))
                })
                .collect::<Result<Vec<_>>>()?;
            for (x, me) in level {
                if me.is_empty() {
                    continue;
                }
                let hm =
                    Contraction::apply_scalars(&c.h.scale(&-num_rational::BigRational::from_integer(1.into())), &me);
                let pm = Contraction::apply_scalars(&c.p, &me);
                it.add(&x, &lincomb_chain(&hm, e, tr, cap)?)?;
                h_alg.add_entry(&x, &lincomb_chain(&pm, e, tr, cap)?)?;
            }
        }
    }
    Ok((h_alg, it))
}

/// `exp(ĩ)(b) = Σ_k ĩ_k(b, …, b)`.
pub fn pushforward_mc(b: &Chain, it: &Morphism) -> Result<Chain> {
    for (i, s) in b.coeffs() {
        if *i >= it.source.len() || !it.source.is_odd(*i) || s.valuation().is_some_and(|v| v.is_zero()) {
            return Err(Error::Invariant(
                "pushforward needs an odd cochain of positive valuation".into(),
            ));
        }
    }
    it.exp_apply(b)
}
