use std::collections::BTreeMap;

use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::novikov::{join_signed, parse_rational, split_signed};

/// `T^t · p_1^{k_1} ⋯` with signed rational `t` and integer `k`; trailing zero exponents trimmed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoeffKey {
    pub t: Ratio<i64>,
    pub params: Vec<i64>,
}

impl CoeffKey {
    pub fn new(t: Ratio<i64>, params: &[i64]) -> Self {
        let mut params = params.to_vec();
        while params.last() == Some(&0) {
            params.pop();
        }
        CoeffKey { t, params }
    }

    pub fn param(&self, i: usize) -> i64 {
        self.params.get(i).copied().unwrap_or(0)
    }

    fn mul(&self, o: &CoeffKey) -> CoeffKey {
        let n = self.params.len().max(o.params.len());
        let p: Vec<i64> = (0..n).map(|i| self.param(i) + o.param(i)).collect();
        CoeffKey::new(self.t + o.t, &p)
    }

    fn pow(&self, k: i64) -> CoeffKey {
        let p: Vec<i64> = self.params.iter().map(|e| e * k).collect();
        CoeffKey::new(self.t * k, &p)
    }
}

/// Finite Laurent sums over `T` and named parameters with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Coeff {
    terms: BTreeMap<CoeffKey, BigRational>,
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff::default()
    }

    pub fn one() -> Self {
        Coeff::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Coeff::term(c, Ratio::from_integer(0), &[])
    }

    pub fn t_power(t: Ratio<i64>) -> Self {
        Coeff::term(BigRational::one(), t, &[])
    }

    pub fn param(i: usize) -> Self {
        let mut p = vec![0; i + 1];
        p[i] = 1;
        Coeff::term(BigRational::one(), Ratio::from_integer(0), &p)
    }

    pub fn term(c: BigRational, t: Ratio<i64>, params: &[i64]) -> Self {
        let mut out = Coeff::zero();
        out.add_term(CoeffKey::new(t, params), c);
        out
    }

    pub fn terms(&self) -> &BTreeMap<CoeffKey, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Coeff::one()
    }

    pub fn add_term(&mut self, k: CoeffKey, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add(&self, o: &Coeff) -> Coeff {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Coeff) -> Coeff {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Coeff {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, c: &BigRational) -> Coeff {
        let mut out = Coeff::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, o: &Coeff) -> Coeff {
        let mut out = Coeff::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &o.terms {
                out.add_term(k1.mul(k2), c1 * c2);
            }
        }
        out
    }

    /// Integer power; negative powers only for single terms.
    pub fn pow(&self, k: i64) -> Result<Coeff> {
        if k < 0 {
            let [(key, c)] = self.terms.iter().collect::<Vec<_>>()[..] else {
                return Err(Error::Unsupported(format!(
                    "cannot invert the non-monomial `{}`",
                    self.to_text(&[])
                )));
            };
            let inv = c.recip();
            let mut c_pow = BigRational::one();
            for _ in 0..-k {
                c_pow *= &inv;
            }
            return Ok(Coeff::term(c_pow, key.pow(k).t, &key.pow(k).params));
        }
        let mut out = Coeff::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        Ok(out)
    }

    /// Power `k` of a parameter-free `c`, truncated at `bound` for non-monomial inverses.
    pub fn pow_truncated(&self, k: i64, bound: Ratio<i64>) -> Result<Coeff> {
        if k >= 0 || self.terms.len() == 1 {
            return Ok(self.pow(k)?.truncate(bound));
        }
        if !self.is_param_free() {
            return Err(Error::Unsupported(
                "truncated inverse needs a parameter-free coefficient".into(),
            ));
        }
        let (key, c) = self
            .leading()
            .ok_or_else(|| Error::Singular("inverse of zero".into()))?;
        let lead = Coeff::term(c.clone(), key.t, &[]);
        let lead_inv = lead.pow(-1)?;
        // self = lead (1 + eps) with eps of positive valuation
        let eps = self.mul(&lead_inv).sub(&Coeff::one());
        let lead_k = lead_inv.pow(-k)?;
        let shift = lead_k.min_t().unwrap_or_default();
        let room = bound - shift;
        let minus_eps = eps.neg();
        let mut inv = Coeff::one();
        let mut pw = Coeff::one();
        while !pw.is_zero() {
            pw = pw.mul(&minus_eps).truncate(room);
            inv = inv.add(&pw);
        }
        Ok(inv.pow(-k)?.truncate(room).mul(&lead_k))
    }

    /// Smallest key in the `(t, params)` order.
    pub fn leading(&self) -> Option<(&CoeffKey, &BigRational)> {
        self.terms.iter().next()
    }

    pub fn min_t(&self) -> Option<Ratio<i64>> {
        self.terms.keys().map(|k| k.t).min()
    }

    /// Keeps terms with `t < bound`.
    pub fn truncate(&self, bound: Ratio<i64>) -> Coeff {
        Coeff {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.t < bound)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Substitutes `T^{w_i}` for parameter `i`.
    pub fn realize_params(&self, weights: &[Ratio<i64>]) -> Coeff {
        let mut out = Coeff::zero();
        for (k, c) in &self.terms {
            let t = k.params.iter().zip(weights).fold(k.t, |t, (&e, w)| t + w * e);
            let rest: Vec<i64> = k
                .params
                .iter()
                .enumerate()
                .map(|(i, &e)| if i < weights.len() { 0 } else { e })
                .collect();
            out.add_term(CoeffKey::new(t, &rest), c.clone());
        }
        out
    }

    pub fn is_param_free(&self) -> bool {
        self.terms.keys().all(|k| k.params.is_empty())
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.iter().collect::<Vec<_>>()[..] {
            [] => Some(BigRational::zero()),
            [(k, c)] if k.t.is_zero() && k.params.is_empty() => Some(c.clone()),
            _ => None,
        }
    }

    fn key_text(k: &CoeffKey, names: &[String]) -> Vec<String> {
        let mut f = Vec::new();
        if !k.t.is_zero() {
            if k.t.is_integer() {
                f.push(format!("T^{}", k.t.numer()));
            } else {
                f.push(format!("T^{{{}}}", k.t));
            }
        }
        for (i, &e) in k.params.iter().enumerate() {
            let name = names.get(i).cloned().unwrap_or_else(|| format!("p{}", i + 1));
            match e {
                0 => {}
                1 => f.push(name),
                _ => f.push(format!("{name}^{e}")),
            }
        }
        f
    }

    pub(crate) fn signed_terms(&self, names: &[String]) -> Vec<(bool, String)> {
        self.terms
            .iter()
            .map(|(k, c)| {
                let mut f = Coeff::key_text(k, names);
                if !c.abs().is_one() || f.is_empty() {
                    f.insert(0, c.abs().to_string());
                }
                (c.is_negative(), f.join("*"))
            })
            .collect()
    }

    pub fn to_text(&self, names: &[String]) -> String {
        join_signed(&self.signed_terms(names))
    }

    /// Parses `2*T^{1/2}*q^-1 - c`; unknown parameter names are appended to `names`.
    pub fn parse(text: &str, names: &mut Vec<String>) -> Result<Coeff> {
        let mut out = Coeff::zero();
        for (neg, body) in split_signed(text)? {
            let mut c = BigRational::one();
            let mut t = Ratio::from_integer(0);
            let mut params: Vec<i64> = Vec::new();
            for factor in body.split('*') {
                let bad = || Error::Parse(format!("bad factor `{factor}` in `{text}`"));
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => (b, Some(e.trim_matches(|ch| ch == '{' || ch == '}'))),
                    None => (factor, None),
                };
                if base.chars().next().is_some_and(|ch| ch.is_ascii_digit()) {
                    if exp.is_some() {
                        return Err(bad());
                    }
                    c *= parse_rational(base)?;
                } else if base == "T" {
                    let e = exp.ok_or_else(bad)?;
                    t += parse_ratio(e).ok_or_else(bad)?;
                } else if is_param_name(base) {
                    let e: i64 = match exp {
                        Some(e) => e.parse().map_err(|_| bad())?,
                        None => 1,
                    };
                    let i = match names.iter().position(|n| n == base) {
                        Some(i) => i,
                        None => {
                            names.push(base.to_string());
                            names.len() - 1
                        }
                    };
                    if params.len() <= i {
                        params.resize(i + 1, 0);
                    }
                    params[i] += e;
                } else {
                    return Err(bad());
                }
            }
            if neg {
                c = -c;
            }
            out.add_term(CoeffKey::new(t, &params), c);
        }
        Ok(out)
    }
}

pub(crate) fn parse_ratio(s: &str) -> Option<Ratio<i64>> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d: i64 = d.trim().parse().ok()?;
            (d != 0).then_some(Ratio::new(n.trim().parse().ok()?, d))
        }
        None => Some(Ratio::from_integer(s.trim().parse().ok()?)),
    }
}

fn is_param_name(s: &str) -> bool {
    let mut ch = s.chars();
    ch.next().is_some_and(|c| c.is_alphabetic() && c != 'T' && c != 'λ')
        && s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '̌')
}

impl std::fmt::Display for Coeff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_text(&[]))
    }
}
