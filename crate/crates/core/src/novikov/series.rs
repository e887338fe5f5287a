use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::One;

use super::exponent::Exponent;
use super::scalar::{join_signed, parse_lambda, parse_rational, split_signed, Monomial, Scalar};
use crate::error::{Error, Result};

/// Truncated gapped Novikov series `Σ a_i T^{e_i}` with λ-polynomial coefficients.
///
/// Terms with exponent `>= truncation` are discarded by every operation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NovikovSeries {
    terms: BTreeMap<Exponent, Scalar>,
    truncation: Exponent,
    lambda_cap: u32,
}

pub const DEFAULT_LAMBDA_CAP: u32 = 1;

impl NovikovSeries {
    pub fn zero(truncation: Exponent, lambda_cap: u32) -> Self {
        NovikovSeries {
            terms: BTreeMap::new(),
            truncation,
            lambda_cap,
        }
    }

    pub fn one(truncation: Exponent, lambda_cap: u32) -> Self {
        Self::monomial(Exponent::ZERO, Scalar::one(), truncation, lambda_cap).expect("unit is within any cap")
    }

    pub fn monomial(e: Exponent, c: Scalar, truncation: Exponent, lambda_cap: u32) -> Result<Self> {
        c.check_cap(lambda_cap)?;
        let mut s = Self::zero(truncation, lambda_cap);
        if e < truncation && !c.is_zero() {
            s.terms.insert(e, c);
        }
        Ok(s)
    }

    /// `c * T^e` with a rational coefficient.
    pub fn rational_term(e: Exponent, c: BigRational, truncation: Exponent, lambda_cap: u32) -> Self {
        Self::monomial(e, Scalar::from_rational(c), truncation, lambda_cap).expect("λ-free")
    }

    /// Same truncation and cap as `self`, with value `c * T^e`.
    pub fn like(&self, e: Exponent, c: Scalar) -> Result<Self> {
        Self::monomial(e, c, self.truncation, self.lambda_cap)
    }

    pub fn zero_like(&self) -> Self {
        Self::zero(self.truncation, self.lambda_cap)
    }

    pub fn from_terms(
        terms: impl IntoIterator<Item = (Exponent, Scalar)>,
        truncation: Exponent,
        lambda_cap: u32,
    ) -> Result<Self> {
        let mut s = Self::zero(truncation, lambda_cap);
        for (e, c) in terms {
            c.check_cap(lambda_cap)?;
            s.add_term(e, &c);
        }
        Ok(s)
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Scalar> {
        &self.terms
    }

    pub fn truncation(&self) -> Exponent {
        self.truncation
    }

    pub fn lambda_cap(&self) -> u32 {
        self.lambda_cap
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn valuation(&self) -> Option<Exponent> {
        self.terms.keys().next().copied()
    }

    pub fn coeff(&self, e: &Exponent) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Exponent::ZERO)
    }

    /// Degree-`deg` part in λ, as a series.
    pub fn lambda_part(&self, deg: u32) -> NovikovSeries {
        let mut out = self.zero_like();
        for (e, c) in &self.terms {
            out.add_term(*e, &c.homogeneous(deg));
        }
        out
    }

    /// Coefficient series of `λ_j` (1-based).
    pub fn lambda_coeff(&self, j: usize) -> NovikovSeries {
        let mut out = self.zero_like();
        for (e, c) in &self.terms {
            out.add_term(*e, &Scalar::from_rational(c.linear_coeff(j)));
        }
        out
    }

    /// Adds `c T^e` in place; dropped when `e >= truncation`. No cap check.
    pub(crate) fn add_term(&mut self, e: Exponent, c: &Scalar) {
        if e >= self.truncation || c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_default();
        slot.add_assign(c);
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    fn check_compatible(&self, other: &NovikovSeries) -> Result<()> {
        if self.truncation != other.truncation {
            return Err(Error::TruncationMismatch(self.truncation, other.truncation));
        }
        Ok(())
    }

    pub fn add(&self, other: &NovikovSeries) -> Result<NovikovSeries> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.lambda_cap = self.lambda_cap.max(other.lambda_cap);
        for (e, c) in &other.terms {
            out.add_term(*e, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &NovikovSeries) -> Result<NovikovSeries> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> NovikovSeries {
        NovikovSeries {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            truncation: self.truncation,
            lambda_cap: self.lambda_cap,
        }
    }

    pub fn add_assign(&mut self, other: &NovikovSeries) -> Result<()> {
        self.check_compatible(other)?;
        for (e, c) in &other.terms {
            self.add_term(*e, c);
        }
        Ok(())
    }

    pub fn mul(&self, other: &NovikovSeries) -> Result<NovikovSeries> {
        self.check_compatible(other)?;
        let cap = self.lambda_cap.min(other.lambda_cap);
        let mut out = NovikovSeries::zero(self.truncation, cap);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = *e1 + *e2;
                if e >= self.truncation {
                    break;
                }
                out.add_term(e, &(c1 * c2));
            }
        }
        for c in out.terms.values() {
            c.check_cap(cap)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> NovikovSeries {
        let mut out = self.zero_like();
        for (e, a) in &self.terms {
            out.add_term(*e, &a.scale(c));
        }
        out
    }

    pub fn mul_scalar(&self, c: &Scalar) -> Result<NovikovSeries> {
        let mut out = self.zero_like();
        for (e, a) in &self.terms {
            out.add_term(*e, &(a * c));
        }
        for a in out.terms.values() {
            a.check_cap(self.lambda_cap)?;
        }
        Ok(out)
    }

    /// Multiplication by `T^e`.
    pub fn shift(&self, e: Exponent) -> NovikovSeries {
        let mut out = self.zero_like();
        for (f, a) in &self.terms {
            out.add_term(*f + e, a);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Result<NovikovSeries> {
        let mut acc = NovikovSeries::one(self.truncation, self.lambda_cap);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Re-truncates at a lower or higher order (terms are never invented).
    pub fn with_truncation(&self, truncation: Exponent) -> NovikovSeries {
        let mut out = NovikovSeries::zero(truncation, self.lambda_cap);
        for (e, c) in &self.terms {
            out.add_term(*e, c);
        }
        out
    }

    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Scalar) -> Result<NovikovSeries> {
        let mut out = self.zero_like();
        for (e, c) in &self.terms {
            let img = f(c);
            img.check_cap(self.lambda_cap)?;
            out.add_term(*e, &img);
        }
        Ok(out)
    }

    fn series_terms_needed(&self) -> Result<u64> {
        match self.valuation() {
            None => Ok(0),
            Some(v) if v.is_zero() => Err(Error::NonzeroConstant),
            Some(v) => Ok(v.steps_to(&self.truncation).unwrap_or(0)),
        }
    }

    /// `Σ a^n / n!`; requires positive valuation.
    pub fn exp(&self) -> Result<NovikovSeries> {
        let n_max = self.series_terms_needed()?;
        let mut out = NovikovSeries::one(self.truncation, self.lambda_cap);
        let mut power = out.clone();
        for n in 1..=n_max {
            power = power.mul(self)?.scale(&BigRational::new(1.into(), n.into()));
            out.add_assign(&power)?;
        }
        Ok(out)
    }

    /// `log(1 + a)`; requires positive valuation.
    pub fn log1p(&self) -> Result<NovikovSeries> {
        let n_max = self.series_terms_needed()?;
        let mut out = self.zero_like();
        let mut power = NovikovSeries::one(self.truncation, self.lambda_cap);
        for n in 1..=n_max {
            power = power.mul(self)?;
            let sign = if n % 2 == 1 { 1 } else { -1 };
            out.add_assign(&power.scale(&BigRational::new(sign.into(), n.into())))?;
        }
        Ok(out)
    }

    /// Parses the canonical text form.
    pub fn parse(text: &str, truncation: Exponent, lambda_cap: u32) -> Result<NovikovSeries> {
        let mut out = NovikovSeries::zero(truncation, lambda_cap);
        for (neg, body) in split_signed(text)? {
            let mut c = BigRational::one();
            let mut e = Exponent::ZERO;
            let mut m = Monomial::one();
            for f in body.split('*') {
                if f == "T" {
                    e = e + Exponent::int(1);
                } else if let Some(p) = f.strip_prefix("T^") {
                    e = e + p.parse()?;
                } else if let Some((j, p)) = parse_lambda(f) {
                    let mut v = vec![0; j];
                    v[j - 1] = p;
                    m = m.mul(&Monomial::new(v));
                } else {
                    c *= parse_rational(f)?;
                }
            }
            if neg {
                c = -c;
            }
            let s = Scalar::term(m, c);
            s.check_cap(lambda_cap)?;
            out.add_term(e, &s);
        }
        Ok(out)
    }
}

impl fmt::Display for NovikovSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (e, c) in &self.terms {
            let t = if e.is_zero() {
                String::new()
            } else {
                format!("*T^{}", e.t_power())
            };
            parts.extend(c.signed_terms(&t, false));
        }
        f.write_str(&join_signed(&parts))
    }
}
