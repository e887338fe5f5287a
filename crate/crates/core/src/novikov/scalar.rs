use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exponent vector of a monomial with trailing zeros trimmed.
///
/// Ordered by total degree, then with earlier variables carrying higher powers first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    /// The single variable with 0-based index `i`.
    pub fn var(i: usize) -> Self {
        let mut v = vec![0; i + 1];
        v[i] = 1;
        Monomial(v)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        Monomial::new((0..n).map(|i| self.exp(i) + other.exp(i)).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.exp(i).checked_sub(other.exp(i))?);
        }
        Some(Monomial::new(out))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Polynomial in the equivariant generators `λ_1, λ_2, …` over ℚ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    terms: BTreeMap<Monomial, BigRational>,
}

pub type EquivariantScalar = Scalar;

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_rational(BigRational::one())
    }

    pub fn from_rational(c: BigRational) -> Self {
        Scalar::term(Monomial::one(), c)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn term(m: Monomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Scalar { terms }
    }

    /// `λ_j` with 1-based `j`.
    pub fn lambda(j: usize) -> Self {
        assert!(j >= 1, "λ indices start at 1");
        Scalar::term(Monomial::var(j - 1), BigRational::one())
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant().is_one()
    }

    /// Highest λ-degree present; 0 for zero.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn constant(&self) -> BigRational {
        self.coeff(&Monomial::one())
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Coefficient of `λ_j` (1-based).
    pub fn linear_coeff(&self, j: usize) -> BigRational {
        self.coeff(&Monomial::var(j - 1))
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        (self.degree() == 0).then(|| self.constant())
    }

    pub fn homogeneous(&self, deg: u32) -> Scalar {
        Scalar {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == deg)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add_assign(&mut self, other: &Scalar) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn scale(&self, c: &BigRational) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Ring morphism `λ_j ↦ images[j-1]`; generators without an image map to themselves.
    pub fn substitute(&self, images: &[Scalar]) -> Scalar {
        let mut out = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = Scalar::from_rational(c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                let img = images.get(i).cloned().unwrap_or_else(|| Scalar::lambda(i + 1));
                for _ in 0..e {
                    t = &t * &img;
                }
            }
            out.add_assign(&t);
        }
        out
    }

    pub fn check_cap(&self, cap: u32) -> Result<()> {
        let degree = self.degree();
        if degree > cap {
            return Err(Error::LambdaCap { degree, cap });
        }
        Ok(())
    }

    /// Signed terms `(negative, body)` in canonical order. With `terse`, unit
    /// coefficients in front of λ factors are dropped.
    pub(crate) fn signed_terms(&self, extra: &str, terse: bool) -> Vec<(bool, String)> {
        self.terms
            .iter()
            .map(|(m, c)| {
                let a = c.abs();
                let factors = format!("{extra}{}", lambda_factors(m));
                let body = if terse && a.is_one() && !factors.is_empty() {
                    factors[1..].to_string()
                } else {
                    format!("{a}{factors}")
                };
                (c.is_negative(), body)
            })
            .collect()
    }
}

pub(crate) fn lambda_factors(m: &Monomial) -> String {
    let mut s = String::new();
    for (i, &e) in m.exps().iter().enumerate() {
        match e {
            0 => {}
            1 => s.push_str(&format!("*λ_{}", i + 1)),
            _ => s.push_str(&format!("*λ_{}^{}", i + 1, e)),
        }
    }
    s
}

pub(crate) fn join_signed(terms: &[(bool, String)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (neg, body)) in terms.iter().enumerate() {
        match (k, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        s.push_str(body);
    }
    s
}

/// Splits `a + b - c` at top-level signs, ignoring signs right after `^` or inside braces.
pub(crate) fn split_signed(text: &str) -> Result<Vec<(bool, String)>> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut neg = false;
    let mut cur = String::new();
    let mut prev: Option<char> = None;
    for ch in compact.chars() {
        match ch {
            '{' | '(' => depth += 1,
            '}' | ')' => depth -= 1,
            _ => {}
        }
        let splits = (ch == '+' || ch == '-') && depth == 0 && prev != Some('^');
        if splits {
            if cur.is_empty() {
                if prev.is_some() && prev != Some('+') && prev != Some('-') {
                    return Err(Error::Parse(format!("dangling sign in `{text}`")));
                }
                if ch == '-' {
                    neg = !neg;
                }
            } else {
                out.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            }
        } else {
            cur.push(ch);
        }
        prev = Some(ch);
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced braces in `{text}`")));
    }
    if cur.is_empty() {
        return Err(Error::Parse(format!("trailing sign in `{text}`")));
    }
    out.push((neg, cur));
    Ok(out)
}

/// Parses `λ_j` or `λ_j^p` into `(j, p)`.
pub(crate) fn parse_lambda(f: &str) -> Option<(usize, u32)> {
    let rest = f.strip_prefix("λ_")?;
    let (j, p) = match rest.split_once('^') {
        Some((j, p)) => (j, p.parse().ok()?),
        None => (rest, 1),
    };
    let j: usize = j.parse().ok()?;
    (j >= 1).then_some((j, p))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join_signed(&self.signed_terms("", true)))
    }
}

impl std::str::FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Scalar> {
        let mut out = Scalar::zero();
        for (neg, body) in split_signed(s)? {
            let mut c = BigRational::one();
            let mut m = Monomial::one();
            for f in body.split('*') {
                if let Some((j, p)) = parse_lambda(f) {
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
            out.add_term(m, &c);
        }
        Ok(out)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out.add_assign(&-rhs);
        out
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), &(c1 * c2));
            }
        }
        out
    }
}
