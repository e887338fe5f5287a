use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use super::chain::{Chain, GradedBasis};
use crate::error::{Error, Result};
use crate::novikov::{Exponent, NovikovSeries, Scalar};

pub type Table = BTreeMap<Vec<usize>, Chain>;

/// Linear combination `Σ c_j e_j` given as `(j, c_j)` pairs.
pub type LinComb = Vec<(usize, BigRational)>;

/// `(arity, energy, inputs, output scalars)`.
pub type EnergyEntry = (usize, Exponent, Vec<usize>, BTreeMap<usize, Scalar>);

/// Filtered gapped A∞ algebra on a finite graded basis.
///
/// `ops[k][inputs]` is `m_k(inputs)` with all energies folded into the
/// coefficient series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfinityAlgebra {
    basis: GradedBasis,
    ops: BTreeMap<usize, Table>,
    truncation: Exponent,
    lambda_cap: u32,
}

/// A relation or unit identity that fails at `(arity, energy, inputs)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub arity: usize,
    pub energy: Exponent,
    pub inputs: Vec<usize>,
}

impl Violation {
    pub fn describe(&self, basis: &GradedBasis) -> String {
        let names: Vec<&str> = self.inputs.iter().map(|&i| basis.name(i)).collect();
        format!("arity {} at E={} on ({})", self.arity, self.energy, names.join(","))
    }
}

/// `m_0^b` as `W·e`, with the λ-linear split available.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PotentialValue {
    pub total: NovikovSeries,
}

impl PotentialValue {
    pub fn w(&self) -> NovikovSeries {
        self.total.lambda_part(0)
    }

    /// Coefficient of `λ_j` (1-based).
    pub fn h(&self, j: usize) -> NovikovSeries {
        self.total.lambda_coeff(j)
    }
}

impl fmt::Display for PotentialValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.total)
    }
}

fn parity_ok(basis: &GradedBasis, inputs: &[usize], output: usize) -> bool {
    let k = inputs.len() as i64;
    let s: i64 = inputs.iter().map(|&i| basis.degree(i) as i64).sum();
    (basis.degree(output) as i64 - s - 2 + k).rem_euclid(2) == 0
}

/// All tuples of length `k` over `0..n`, in lexicographic order.
pub(crate) fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
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

impl AInfinityAlgebra {
    pub fn new(basis: GradedBasis, truncation: Exponent, lambda_cap: u32) -> Self {
        AInfinityAlgebra {
            basis,
            ops: BTreeMap::new(),
            truncation,
            lambda_cap,
        }
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn truncation(&self) -> Exponent {
        self.truncation
    }

    pub fn lambda_cap(&self) -> u32 {
        self.lambda_cap
    }

    pub fn ops(&self) -> &BTreeMap<usize, Table> {
        &self.ops
    }

    pub fn unit(&self) -> Option<usize> {
        self.basis.unit()
    }

    pub fn zero_chain(&self) -> Chain {
        Chain::zero(self.truncation, self.lambda_cap)
    }

    pub fn basis_chain(&self, i: usize) -> Chain {
        Chain::basis(i, self.truncation, self.lambda_cap)
    }

    pub fn series(&self, e: Exponent, c: BigRational) -> NovikovSeries {
        NovikovSeries::rational_term(e, c, self.truncation, self.lambda_cap)
    }

    pub fn max_arity(&self) -> usize {
        self.ops.keys().next_back().copied().unwrap_or(0)
    }

    /// Energies present anywhere in the tables.
    pub fn energies(&self) -> BTreeSet<Exponent> {
        self.ops
            .values()
            .flat_map(|t| t.values())
            .flat_map(|c| c.energies())
            .collect()
    }

    pub fn entry(&self, inputs: &[usize]) -> Option<&Chain> {
        self.ops.get(&inputs.len()).and_then(|t| t.get(inputs))
    }

    /// Adds `out` to `m_k(inputs)`; checks degree parity of every output.
    pub fn add_entry(&mut self, inputs: &[usize], out: &Chain) -> Result<()> {
        if out.truncation() != self.truncation {
            return Err(Error::TruncationMismatch(out.truncation(), self.truncation));
        }
        for i in inputs.iter().chain(out.coeffs().keys()) {
            if *i >= self.basis.len() {
                return Err(Error::Dimension(format!("basis index {i} out of range")));
            }
        }
        for o in out.support() {
            if !parity_ok(&self.basis, inputs, o) {
                let names: Vec<&str> = inputs.iter().map(|&i| self.basis.name(i)).collect();
                return Err(Error::Invariant(format!(
                    "m_{}({}) has output `{}` of the wrong parity",
                    inputs.len(),
                    names.join(","),
                    self.basis.name(o)
                )));
            }
        }
        let table = self.ops.entry(inputs.len()).or_default();
        let slot = table.entry(inputs.to_vec()).or_insert_with(|| out.zero_like());
        slot.add_assign(out)?;
        if slot.is_zero() {
            table.remove(inputs);
            if table.is_empty() {
                self.ops.remove(&inputs.len());
            }
        }
        Ok(())
    }

    /// Adds `c T^e · out_name` to `m_k(input names)`.
    pub fn add_term(&mut self, inputs: &[&str], e: Exponent, c: BigRational, output: &str) -> Result<()> {
        let ins = self.basis.indices_of(inputs)?;
        let o = self.basis.indices_of(&[output])?[0];
        let ch = Chain::single(o, self.series(e, c));
        self.add_entry(&ins, &ch)
    }

    /// `m_k` on arbitrary chains.
    pub fn eval(&self, inputs: &[&Chain]) -> Result<Chain> {
        let mut out = self.zero_chain();
        let Some(table) = self.ops.get(&inputs.len()) else {
            return Ok(out);
        };
        'entries: for (key, val) in table {
            let mut coeff = NovikovSeries::one(self.truncation, self.lambda_cap);
            for (x, &i) in inputs.iter().zip(key) {
                match x.coeffs().get(&i) {
                    Some(c) => coeff = coeff.mul(c)?,
                    None => continue 'entries,
                }
                if coeff.is_zero() {
                    continue 'entries;
                }
            }
            out.add_scaled(&coeff, val)?;
        }
        Ok(out)
    }

    /// `m(prefix, mid, suffix)` with basis-element prefix and suffix.
    pub(crate) fn eval_mixed(&self, prefix: &[usize], mid: &Chain, suffix: &[usize]) -> Result<Chain> {
        let mut out = self.zero_chain();
        let mut key: Vec<usize> = prefix.to_vec();
        key.push(0);
        key.extend_from_slice(suffix);
        let p = prefix.len();
        for (i, c) in mid.coeffs() {
            key[p] = *i;
            if let Some(v) = self.entry(&key) {
                out.add_scaled(c, v)?;
            }
        }
        Ok(out)
    }

    /// Left-hand side of the A∞ relation on basis inputs.
    pub fn relation(&self, inputs: &[usize]) -> Result<Chain> {
        let k = inputs.len();
        let mut total = self.zero_chain();
        for i in 0..=k {
            let sign_odd = inputs[..i]
                .iter()
                .map(|&x| (self.basis.degree(x) - 1).rem_euclid(2))
                .sum::<i32>()
                % 2
                == 1;
            for j in 0..=k - i {
                let Some(inner) = self.entry(&inputs[i..i + j]) else {
                    continue;
                };
                let mut term = self.eval_mixed(&inputs[..i], inner, &inputs[i + j..])?;
                if sign_odd {
                    term = term.neg();
                }
                total.add_assign(&term)?;
            }
        }
        Ok(total)
    }

    /// Reports every `(arity, energy, inputs)` where the relation fails, for arities `<= k_max`.
    pub fn check_ainfinity(&self, k_max: usize) -> Result<Vec<Violation>> {
        let n = self.basis.len();
        let mut all = Vec::new();
        for k in 0..=k_max {
            all.extend(tuples(n, k));
        }
        let found: Vec<Result<Vec<Violation>>> = all
            .par_iter()
            .map(|t| {
                let r = self.relation(t)?;
                Ok(r.energies()
                    .into_iter()
                    .map(|energy| Violation {
                        arity: t.len(),
                        energy,
                        inputs: t.clone(),
                    })
                    .collect())
            })
            .collect();
        let mut out = Vec::new();
        for f in found {
            out.extend(f?);
        }
        Ok(out)
    }

    /// Strict-unit identities: `m_2(e,x) = x`, `m_2(x,e) = (-1)^{deg x} x`, all else with `e` zero.
    pub fn check_unit(&self) -> Result<Vec<Violation>> {
        let e = self
            .unit()
            .ok_or_else(|| Error::Invariant("algebra has no unit".into()))?;
        let mut out = BTreeSet::new();
        let mut record = |arity: usize, c: &Chain, inputs: Vec<usize>| {
            for energy in c.energies() {
                out.insert(Violation {
                    arity,
                    energy,
                    inputs: inputs.clone(),
                });
            }
        };
        for x in 0..self.basis.len() {
            let left = self.entry(&[e, x]).cloned().unwrap_or_else(|| self.zero_chain());
            record(2, &left.sub(&self.basis_chain(x))?, vec![e, x]);
            let sign = if self.basis.is_odd(x) {
                -BigRational::one()
            } else {
                BigRational::one()
            };
            let right = self.entry(&[x, e]).cloned().unwrap_or_else(|| self.zero_chain());
            record(2, &right.sub(&self.basis_chain(x).scale_rational(&sign))?, vec![x, e]);
        }
        for (k, table) in &self.ops {
            if *k == 2 {
                continue;
            }
            for (key, v) in table {
                if key.contains(&e) {
                    record(*k, v, key.clone());
                }
            }
        }
        Ok(out.into_iter().collect())
    }

    fn check_cochain(&self, b: &Chain) -> Result<()> {
        for (i, c) in b.coeffs() {
            if *i >= self.basis.len() {
                return Err(Error::Dimension(format!("cochain index {i} out of range")));
            }
            if !self.basis.is_odd(*i) {
                return Err(Error::Invariant(format!(
                    "deformation cochain has even-degree component `{}`",
                    self.basis.name(*i)
                )));
            }
            if c.valuation().is_some_and(|v| v.is_zero()) {
                return Err(Error::Invariant(format!(
                    "deformation cochain coefficient of `{}` has zero valuation",
                    self.basis.name(*i)
                )));
            }
        }
        if b.truncation() != self.truncation {
            return Err(Error::TruncationMismatch(b.truncation(), self.truncation));
        }
        Ok(())
    }

    /// `m^b_k(x_1..x_k) = Σ m(b..b, x_1, b..b, …, x_k, b..b)`.
    pub fn deform(&self, b: &Chain) -> Result<AInfinityAlgebra> {
        self.check_cochain(b)?;
        if b.is_zero() {
            return Ok(self.clone());
        }
        let mut out = AInfinityAlgebra::new(self.basis.clone(), self.truncation, self.lambda_cap);
        for (big_k, table) in &self.ops {
            for (key, val) in table {
                // each subset of slots is the set of x-slots; the rest take b
                for mask in 0u64..(1u64 << big_k) {
                    let mut coeff = NovikovSeries::one(self.truncation, self.lambda_cap);
                    let mut xs = Vec::new();
                    for (s, &i) in key.iter().enumerate() {
                        if mask & (1 << s) != 0 {
                            xs.push(i);
                        } else {
                            coeff = coeff.mul(&b.coeff(i))?;
                            if coeff.is_zero() {
                                break;
                            }
                        }
                    }
                    if !coeff.is_zero() {
                        out.add_entry(&xs, &val.scale(&coeff)?)?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `m_0^b = Σ_k m_k(b, …, b)`.
    pub fn curvature(&self, b: &Chain) -> Result<Chain> {
        self.check_cochain(b)?;
        let mut out = self.zero_chain();
        for table in self.ops.values() {
            'entries: for (key, val) in table {
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

    /// `Some(W)` when `m_0^b = W·e`.
    pub fn is_weak_mc(&self, b: &Chain) -> Result<Option<PotentialValue>> {
        let m0 = self.curvature(b)?;
        let Some(e) = self.unit() else {
            return Err(Error::Invariant("weak MC detection needs a unit".into()));
        };
        if m0.support().any(|i| i != e) {
            return Ok(None);
        }
        Ok(Some(PotentialValue { total: m0.coeff(e) }))
    }

    /// Pushes every coefficient through `λ_j ↦ images[j-1]`.
    pub fn restrict_scalars(&self, images: &[Scalar]) -> Result<AInfinityAlgebra> {
        let mut out = AInfinityAlgebra::new(self.basis.clone(), self.truncation, self.lambda_cap);
        for table in self.ops.values() {
            for (key, val) in table {
                let img = val.map_coefficients(|s| s.map_coefficients(|c| c.substitute(images)))?;
                out.add_entry(key, &img)?;
            }
        }
        Ok(out)
    }

    /// Same basis and tables over a different truncation.
    pub fn with_truncation(&self, truncation: Exponent) -> Result<AInfinityAlgebra> {
        let mut out = AInfinityAlgebra::new(self.basis.clone(), truncation, self.lambda_cap);
        for table in self.ops.values() {
            for (key, val) in table {
                let mut c = Chain::zero(truncation, self.lambda_cap);
                for (i, s) in val.coeffs() {
                    c.add_series(*i, &s.with_truncation(truncation))?;
                }
                out.add_entry(key, &c)?;
            }
        }
        Ok(out)
    }

    /// Builds `m_1 = d`, `m_2(x,y) = (-1)^{deg x} x·y` from a dga given on basis elements.
    pub fn from_dga(
        basis: GradedBasis,
        differential: &[(usize, LinComb)],
        product: &[((usize, usize), LinComb)],
        truncation: Exponent,
        lambda_cap: u32,
    ) -> Result<AInfinityAlgebra> {
        let mut a = AInfinityAlgebra::new(basis, truncation, lambda_cap);
        let lin = |a: &AInfinityAlgebra, terms: &[(usize, BigRational)], sign: bool| {
            let mut c = a.zero_chain();
            for (i, x) in terms {
                let x = if sign { -x.clone() } else { x.clone() };
                c.add_series(*i, &a.series(Exponent::ZERO, x))?;
            }
            Ok::<Chain, Error>(c)
        };
        for (x, terms) in differential {
            let c = lin(&a, terms, false)?;
            a.add_entry(&[*x], &c)?;
        }
        for ((x, y), terms) in product {
            let odd = a.basis.is_odd(*x);
            let c = lin(&a, terms, odd)?;
            a.add_entry(&[*x, *y], &c)?;
        }
        Ok(a)
    }

    /// `(k, E, inputs) → scalars` view, sorted for serialization.
    pub fn energy_entries(&self) -> Vec<EnergyEntry> {
        let mut out = Vec::new();
        for (k, table) in &self.ops {
            for (key, val) in table {
                for e in val.energies() {
                    out.push((*k, e, key.clone(), val.at_energy(&e)));
                }
            }
        }
        out.sort_by(|a, b| (a.0, a.1, &a.2).cmp(&(b.0, b.1, &b.2)));
        out
    }

    pub fn is_zero_structure(&self) -> bool {
        self.ops.values().all(|t| t.values().all(Chain::is_zero))
    }

    pub fn zero_series(&self) -> NovikovSeries {
        NovikovSeries::zero(self.truncation, self.lambda_cap)
    }
}
