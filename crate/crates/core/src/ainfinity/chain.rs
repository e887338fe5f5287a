use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::novikov::{join_signed, parse_rational, split_signed, Exponent, Monomial, NovikovSeries, Scalar};

/// Graded basis with an optional strict unit.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GradedBasis {
    names: Vec<String>,
    degrees: Vec<i32>,
    unit: Option<usize>,
}

impl GradedBasis {
    pub fn new(elements: &[(&str, i32)], unit: Option<&str>) -> Result<Self> {
        let owned: Vec<(String, i32)> = elements.iter().map(|(n, d)| (n.to_string(), *d)).collect();
        Self::from_owned(owned, unit)
    }

    pub fn from_owned(elements: Vec<(String, i32)>, unit: Option<&str>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (n, _) in &elements {
            if !valid_name(n) {
                return Err(Error::Parse(format!("invalid basis name `{n}`")));
            }
            if !seen.insert(n.clone()) {
                return Err(Error::Invariant(format!("duplicate basis name `{n}`")));
            }
        }
        let (names, degrees): (Vec<_>, Vec<_>) = elements.into_iter().unzip();
        let mut b = GradedBasis {
            names,
            degrees,
            unit: None,
        };
        if let Some(u) = unit {
            let i = b.index(u).ok_or_else(|| Error::Parse(format!("unknown unit `{u}`")))?;
            if b.degrees[i] != 0 {
                return Err(Error::Invariant(format!("unit `{u}` must have degree 0")));
            }
            b.unit = Some(i);
        }
        Ok(b)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn unit(&self) -> Option<usize> {
        self.unit
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.degrees[i].rem_euclid(2) == 1
    }

    pub fn indices_of(&self, names: &[&str]) -> Result<Vec<usize>> {
        names
            .iter()
            .map(|n| {
                self.index(n)
                    .ok_or_else(|| Error::Parse(format!("unknown basis element `{n}`")))
            })
            .collect()
    }

    pub fn to_text(&self) -> String {
        let items: Vec<String> = self
            .names
            .iter()
            .zip(&self.degrees)
            .map(|(n, d)| format!("{n}:{d}"))
            .collect();
        items.join(", ")
    }

    /// Parses `name:deg, name:deg, …`.
    pub fn parse_list(text: &str) -> Result<Vec<(String, i32)>> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Vec::new());
        }
        text.split(',')
            .map(|item| {
                let (n, d) = item
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("basis item `{item}` needs name:degree")))?;
                let d: i32 = d
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad degree in `{item}`")))?;
                Ok((n.trim().to_string(), d))
            })
            .collect()
    }
}

pub(crate) fn valid_name(n: &str) -> bool {
    let mut chars = n.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() && c != 'λ' && c != 'T')
        && n.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
        && !n.starts_with("λ_")
}

/// Element of a free Λ-module on a graded basis: index → coefficient series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    coeffs: BTreeMap<usize, NovikovSeries>,
    truncation: Exponent,
    lambda_cap: u32,
}

impl Chain {
    pub fn zero(truncation: Exponent, lambda_cap: u32) -> Self {
        Chain {
            coeffs: BTreeMap::new(),
            truncation,
            lambda_cap,
        }
    }

    pub fn basis(i: usize, truncation: Exponent, lambda_cap: u32) -> Self {
        let mut c = Self::zero(truncation, lambda_cap);
        c.coeffs.insert(i, NovikovSeries::one(truncation, lambda_cap));
        c
    }

    pub fn single(i: usize, s: NovikovSeries) -> Self {
        let mut c = Self::zero(s.truncation(), s.lambda_cap());
        if !s.is_zero() {
            c.coeffs.insert(i, s);
        }
        c
    }

    pub fn zero_like(&self) -> Self {
        Self::zero(self.truncation, self.lambda_cap)
    }

    pub fn truncation(&self) -> Exponent {
        self.truncation
    }

    pub fn lambda_cap(&self) -> u32 {
        self.lambda_cap
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, NovikovSeries> {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> NovikovSeries {
        self.coeffs
            .get(&i)
            .cloned()
            .unwrap_or_else(|| NovikovSeries::zero(self.truncation, self.lambda_cap))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn add_series(&mut self, i: usize, s: &NovikovSeries) -> Result<()> {
        if s.is_zero() {
            return Ok(());
        }
        let slot = self
            .coeffs
            .entry(i)
            .or_insert_with(|| NovikovSeries::zero(self.truncation, self.lambda_cap));
        slot.add_assign(s)?;
        if slot.is_zero() {
            self.coeffs.remove(&i);
        }
        Ok(())
    }

    pub fn add_assign(&mut self, other: &Chain) -> Result<()> {
        for (i, s) in &other.coeffs {
            self.add_series(*i, s)?;
        }
        Ok(())
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, s: &NovikovSeries, other: &Chain) -> Result<()> {
        if s.is_zero() {
            return Ok(());
        }
        for (i, c) in &other.coeffs {
            self.add_series(*i, &s.mul(c)?)?;
        }
        Ok(())
    }

    pub fn scale(&self, s: &NovikovSeries) -> Result<Chain> {
        let mut out = self.zero_like();
        out.add_scaled(s, self)?;
        Ok(out)
    }

    pub fn scale_rational(&self, c: &BigRational) -> Chain {
        let mut out = self.zero_like();
        for (i, s) in &self.coeffs {
            let t = s.scale(c);
            if !t.is_zero() {
                out.coeffs.insert(*i, t);
            }
        }
        out
    }

    pub fn neg(&self) -> Chain {
        self.scale_rational(&-BigRational::one())
    }

    pub fn sub(&self, other: &Chain) -> Result<Chain> {
        let mut out = self.clone();
        out.add_assign(&other.neg())?;
        Ok(out)
    }

    pub fn map_coefficients(&self, f: impl Fn(&NovikovSeries) -> Result<NovikovSeries>) -> Result<Chain> {
        let mut out = self.zero_like();
        for (i, s) in &self.coeffs {
            out.add_series(*i, &f(s)?)?;
        }
        Ok(out)
    }

    /// All energies carrying a nonzero coefficient.
    pub fn energies(&self) -> BTreeSet<Exponent> {
        self.coeffs.values().flat_map(|s| s.terms().keys().copied()).collect()
    }

    pub fn min_valuation(&self) -> Option<Exponent> {
        self.coeffs.values().filter_map(NovikovSeries::valuation).min()
    }

    /// Scalar coefficients at energy `e`.
    pub fn at_energy(&self, e: &Exponent) -> BTreeMap<usize, Scalar> {
        self.coeffs
            .iter()
            .filter_map(|(i, s)| {
                let c = s.coeff(e);
                (!c.is_zero()).then_some((*i, c))
            })
            .collect()
    }

    /// Energy-`e` part as a chain.
    pub fn energy_part(&self, e: &Exponent) -> Result<Chain> {
        let mut out = self.zero_like();
        for (i, c) in self.at_energy(e) {
            out.add_series(i, &NovikovSeries::monomial(*e, c, self.truncation, self.lambda_cap)?)?;
        }
        Ok(out)
    }

    pub fn to_text(&self, basis: &GradedBasis) -> String {
        let mut parts = Vec::new();
        for (i, s) in &self.coeffs {
            for (e, c) in s.terms() {
                let t = if e.is_zero() {
                    String::new()
                } else {
                    format!("*T^{}", e.t_power())
                };
                let suffix = format!("{t}*{}", basis.name(*i));
                parts.extend(c.signed_terms(&suffix, true));
            }
        }
        join_signed(&parts)
    }

    /// Parses sums of terms `c*T^e*λ_j*name`; `0` is the zero chain.
    pub fn parse(text: &str, basis: &GradedBasis, truncation: Exponent, lambda_cap: u32) -> Result<Chain> {
        let mut out = Chain::zero(truncation, lambda_cap);
        if text.trim() == "0" {
            return Ok(out);
        }
        for (neg, body) in split_signed(text)? {
            let mut name = None;
            let mut rest = Vec::new();
            for f in body.split('*') {
                if let Some(i) = basis.index(f) {
                    if name.replace(i).is_some() {
                        return Err(Error::Parse(format!("two basis names in term `{body}`")));
                    }
                } else {
                    rest.push(f);
                }
            }
            let i = name.ok_or_else(|| Error::Parse(format!("term `{body}` names no basis element")))?;
            let coeff_text = if rest.is_empty() {
                "1".to_string()
            } else {
                rest.join("*")
            };
            let mut s = NovikovSeries::parse(&coeff_text, truncation, lambda_cap)?;
            if neg {
                s = s.neg();
            }
            out.add_series(i, &s)?;
        }
        Ok(out)
    }

    /// Energy-`e` part printed without `T` factors, coefficients terse.
    pub fn lincomb_text(coeffs: &BTreeMap<usize, Scalar>, basis: &GradedBasis) -> String {
        let mut parts = Vec::new();
        for (i, c) in coeffs {
            for (m, a) in c.terms() {
                let mut s = String::new();
                if !a.abs().is_one() {
                    s.push_str(&format!("{}*", a.abs()));
                }
                if !m.is_one() {
                    s.push_str(&Scalar::term(m.clone(), BigRational::one()).to_string());
                    s.push('*');
                }
                s.push_str(basis.name(*i));
                parts.push((a.is_negative(), s));
            }
        }
        join_signed(&parts)
    }

    pub fn parse_lincomb(text: &str, basis: &GradedBasis) -> Result<BTreeMap<usize, Scalar>> {
        let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
        if text.trim() == "0" {
            return Ok(out);
        }
        for (neg, body) in split_signed(text)? {
            let mut name = None;
            let mut c = BigRational::one();
            let mut m = Monomial::one();
            for f in body.split('*') {
                if let Some(i) = basis.index(f) {
                    if name.replace(i).is_some() {
                        return Err(Error::Parse(format!("two basis names in term `{body}`")));
                    }
                } else if let Some((j, p)) = crate::novikov::parse_lambda_factor(f) {
                    let mut v = vec![0; j];
                    v[j - 1] = p;
                    m = m.mul(&Monomial::new(v));
                } else {
                    c *= parse_rational(f)?;
                }
            }
            let i = name.ok_or_else(|| Error::Parse(format!("term `{body}` names no basis element")))?;
            if neg {
                c = -c;
            }
            let slot = out.entry(i).or_default();
            slot.add_term(m, &c);
            if slot.is_zero() {
                out.remove(&i);
            }
        }
        Ok(out)
    }
}
