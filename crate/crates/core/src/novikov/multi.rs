use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::scalar::{Monomial, Scalar};
use crate::error::{Error, Result};

/// Multivariate power series in named variables, truncated at total degree `< order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiSeries {
    names: Vec<String>,
    order: u32,
    terms: BTreeMap<Monomial, Scalar>,
}

impl MultiSeries {
    pub fn zero(names: &[String], order: u32) -> Self {
        MultiSeries {
            names: names.to_vec(),
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(names: &[String], order: u32, c: Scalar) -> Self {
        let mut s = Self::zero(names, order);
        s.add_term(Monomial::one(), &c);
        s
    }

    pub fn one(names: &[String], order: u32) -> Self {
        Self::constant(names, order, Scalar::one())
    }

    /// The variable with 0-based index `i`.
    pub fn var(names: &[String], order: u32, i: usize) -> Self {
        assert!(i < names.len());
        let mut s = Self::zero(names, order);
        s.add_term(Monomial::var(i), &Scalar::one());
        s
    }

    pub fn from_terms(names: &[String], order: u32, terms: impl IntoIterator<Item = (Vec<u32>, Scalar)>) -> Self {
        let mut s = Self::zero(names, order);
        for (v, c) in terms {
            s.add_term(Monomial::new(v), &c);
        }
        s
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> Scalar {
        self.terms
            .get(&Monomial::new(exps.to_vec()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&[])
    }

    pub fn zero_like(&self) -> Self {
        Self::zero(&self.names, self.order)
    }

    pub fn one_like(&self) -> Self {
        Self::one(&self.names, self.order)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if m.degree() >= self.order || c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_default();
        slot.add_assign(c);
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    fn check(&self, other: &MultiSeries) -> Result<()> {
        if self.names != other.names || self.order != other.order {
            return Err(Error::Dimension(format!(
                "series over {:?}<{} vs {:?}<{}",
                self.names, self.order, other.names, other.order
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiSeries {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, c: &BigRational) -> MultiSeries {
        let mut out = self.zero_like();
        for (m, a) in &self.terms {
            out.add_term(m.clone(), &a.scale(c));
        }
        out
    }

    pub fn mul_scalar(&self, c: &Scalar) -> MultiSeries {
        let mut out = self.zero_like();
        for (m, a) in &self.terms {
            out.add_term(m.clone(), &(a * c));
        }
        out
    }

    pub fn mul(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.check(other)?;
        let mut out = self.zero_like();
        for (m1, c1) in &self.terms {
            let room = self.order - m1.degree();
            for (m2, c2) in &other.terms {
                if m2.degree() >= room {
                    break;
                }
                out.add_term(m1.mul(m2), &(c1 * c2));
            }
        }
        Ok(out)
    }

    /// Multiplication by the monomial `x^exps`.
    pub fn shift(&self, exps: &[u32]) -> MultiSeries {
        let m = Monomial::new(exps.to_vec());
        let mut out = self.zero_like();
        for (k, c) in &self.terms {
            out.add_term(k.mul(&m), c);
        }
        out
    }

    /// Exact division by `x_i`; `None` when some term lacks the factor.
    pub fn div_var(&self, i: usize) -> Option<MultiSeries> {
        let mut out = MultiSeries {
            order: self.order.saturating_sub(1),
            ..self.zero_like()
        };
        let v = Monomial::var(i);
        for (m, c) in &self.terms {
            out.add_term(m.div(&v)?, c);
        }
        out.order = self.order;
        Some(out)
    }

    fn require_no_constant(&self) -> Result<()> {
        if self.constant_term().is_zero() {
            Ok(())
        } else {
            Err(Error::NonzeroConstant)
        }
    }

    /// `Σ_{n<order} coeffs[n] * self^n`; `self` must have no constant term.
    fn power_sum(&self, coeffs: impl Fn(u32) -> BigRational) -> Result<MultiSeries> {
        self.require_no_constant()?;
        let mut out = self.zero_like();
        let mut power = self.one_like();
        for n in 0..self.order {
            let c = coeffs(n);
            if !c.is_zero() {
                out = out.add(&power.scale(&c))?;
            }
            power = power.mul(self)?;
            if power.is_zero() {
                break;
            }
        }
        Ok(out)
    }

    pub fn exp(&self) -> Result<MultiSeries> {
        let mut fact = BigRational::one();
        let mut facts = vec![fact.clone()];
        for n in 1..self.order.max(1) {
            fact *= BigRational::from_integer(n.into());
            facts.push(fact.clone());
        }
        self.power_sum(|n| facts[n as usize].recip())
    }

    /// `log(1 + self)`.
    pub fn log1p(&self) -> Result<MultiSeries> {
        self.power_sum(|n| match n {
            0 => BigRational::zero(),
            _ => {
                let sign = if n % 2 == 1 { 1 } else { -1 };
                BigRational::new(sign.into(), n.into())
            }
        })
    }

    /// `(1 + self)^k` for any integer `k`.
    pub fn one_plus_pow(&self, k: i64) -> Result<MultiSeries> {
        let kk = BigRational::from_integer(k.into());
        let mut binom = vec![BigRational::one()];
        for n in 1..self.order.max(1) {
            let n_r = BigRational::from_integer(n.into());
            let prev = binom.last().unwrap().clone();
            binom.push(prev * (&kk - &n_r + BigRational::one()) / n_r);
        }
        self.power_sum(|n| binom[n as usize].clone())
    }

    /// Evaluates `self(subs_0, …, subs_{m-1})`; substitutes must have no constant term.
    pub fn compose(&self, subs: &[MultiSeries]) -> Result<MultiSeries> {
        if subs.len() != self.nvars() {
            return Err(Error::Dimension(format!(
                "composition needs {} substitutes, got {}",
                self.nvars(),
                subs.len()
            )));
        }
        let target = subs.first().map(|s| s.zero_like());
        let Some(target) = target else {
            return Ok(self.clone());
        };
        for s in subs {
            target.check(s)?;
            s.require_no_constant()?;
        }
        let mut powers: Vec<Vec<MultiSeries>> = subs.iter().map(|s| vec![s.one_like(), s.clone()]).collect();
        let mut out = target.clone();
        for (m, c) in &self.terms {
            let mut t = MultiSeries::constant(&target.names, target.order, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&subs[i])?;
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e as usize])?;
                if t.is_zero() {
                    break;
                }
            }
            out = out.add(&t)?;
        }
        Ok(out)
    }

    /// Renders with Laurent-style exponents, e.g. `q_1*q_2^-2`.
    pub fn monomial_text(names: &[String], exps: &[i64]) -> String {
        let parts: Vec<String> = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| {
                if e == 1 {
                    names[i].clone()
                } else {
                    format!("{}^{}", names[i], e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Inverts `y_a = x_a * (1 + u_a(x))` by fixed-point iteration.
///
/// Input series are in variables `x`, output series express `x` in the same names read as `y`.
pub fn reversion_triangular(maps: &[MultiSeries]) -> Result<Vec<MultiSeries>> {
    let n = maps.len();
    let Some(first) = maps.first() else {
        return Ok(Vec::new());
    };
    if first.nvars() != n {
        return Err(Error::Dimension(format!("{n} maps in {} variables", first.nvars())));
    }
    let mut units = Vec::with_capacity(n);
    for (a, f) in maps.iter().enumerate() {
        first.check(f)?;
        let q = f
            .div_var(a)
            .ok_or_else(|| Error::NonTriangular(format!("map {a} has a term without x_{a}")))?;
        if !q.constant_term().is_one() {
            return Err(Error::NonTriangular(format!(
                "map {a} has leading coefficient {}",
                q.constant_term()
            )));
        }
        // (1 + u_a)^{-1}, with u_a = q - 1
        let u = q.sub(&q.one_like())?;
        units.push(u.one_plus_pow(-1)?);
    }
    let vars: Vec<MultiSeries> = (0..n).map(|a| MultiSeries::var(&first.names, first.order, a)).collect();
    let mut x = vars.clone();
    for _ in 0..first.order {
        let mut next = Vec::with_capacity(n);
        for a in 0..n {
            next.push(vars[a].mul(&units[a].compose(&x)?)?);
        }
        if next == x {
            break;
        }
        x = next;
    }
    Ok(x)
}

impl fmt::Display for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (m, c) in &self.terms {
            let exps: Vec<i64> = (0..self.nvars()).map(|i| m.exp(i) as i64).collect();
            let mono = MultiSeries::monomial_text(&self.names, &exps);
            if let (Some(r), false) = (c.as_rational(), m.is_one()) {
                let body = if r.abs().is_one() {
                    mono
                } else {
                    format!("{}*{mono}", r.abs())
                };
                parts.push((r.is_negative(), body));
            } else if m.is_one() {
                parts.extend(c.signed_terms("", true));
            } else {
                parts.push((false, format!("({c})*{mono}")));
            }
        }
        f.write_str(&super::scalar::join_signed(&parts))
    }
}
