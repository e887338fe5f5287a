use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::coeff::Coeff;
use super::fan::{SubtorusAction, ToricData};
use crate::error::{Error, Result};
use crate::lattice::IVec;
use crate::linalg::QMatrix;
use crate::novikov::{join_signed, MultiSeries};

/// `mult · λ_j · log(arg · z^covector)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogTerm {
    /// 1-based λ index.
    pub lambda: usize,
    pub mult: BigRational,
    pub covector: IVec,
    pub arg: Coeff,
}

impl LogTerm {
    pub fn is_constant(&self) -> bool {
        self.covector.iter().all(|&x| x == 0)
    }
}

/// Laurent polynomial in `z` over [`Coeff`], plus a λ-linear logarithmic part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPotential {
    pub vars: Vec<String>,
    /// Names of the symbolic parameters appearing in coefficients.
    pub params: Vec<String>,
    pub terms: BTreeMap<IVec, Coeff>,
    pub log_part: Vec<LogTerm>,
}

impl LaurentPotential {
    pub fn new(vars: Vec<String>, params: Vec<String>) -> Self {
        LaurentPotential {
            vars,
            params,
            terms: BTreeMap::new(),
            log_part: Vec::new(),
        }
    }

    pub fn with_default_vars(n: usize) -> Self {
        LaurentPotential::new((1..=n).map(|i| format!("z{i}")).collect(), Vec::new())
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn add_term(&mut self, exps: IVec, c: &Coeff) {
        assert_eq!(exps.len(), self.vars.len());
        let slot = self.terms.entry(exps.clone()).or_insert_with(Coeff::zero);
        *slot = slot.add(c);
        if slot.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn coeff(&self, exps: &[i64]) -> Coeff {
        self.terms.get(exps).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn add_log(&mut self, t: LogTerm) {
        if !t.mult.is_zero() && !(t.is_constant() && t.arg.is_one()) {
            self.log_part.push(t);
        }
    }

    pub fn is_lambda_free(&self) -> bool {
        self.log_part.is_empty()
    }

    /// `T`-adic valuation of the Laurent part.
    pub fn energy(&self) -> Option<num_rational::Ratio<i64>> {
        self.terms.values().filter_map(Coeff::min_t).min()
    }

    /// Replaces parameter `i` by `T^{w_i}` everywhere.
    pub fn realize_params(&self, weights: &[num_rational::Ratio<i64>]) -> LaurentPotential {
        let mut out = LaurentPotential::new(self.vars.clone(), Vec::new());
        for (e, c) in &self.terms {
            out.add_term(e.clone(), &c.realize_params(weights));
        }
        for t in &self.log_part {
            out.add_log(LogTerm {
                arg: t.arg.realize_params(weights),
                ..t.clone()
            });
        }
        out
    }

    fn term_text(&self, e: &[i64], c: &Coeff) -> Vec<(bool, String)> {
        let mono = MultiSeries::monomial_text(&self.vars, e);
        let is_one = e.iter().all(|&x| x == 0);
        if is_one {
            return c.signed_terms(&self.params);
        }
        let (neg, body) = coeff_text(c, &self.params);
        if body.is_empty() {
            vec![(neg, mono)]
        } else {
            vec![(neg, format!("{body} * {mono}"))]
        }
    }

    fn log_text(&self, t: &LogTerm) -> (bool, String) {
        let mut inside = Vec::new();
        if !t.arg.is_one() {
            let a = t.arg.to_text(&self.params);
            inside.push(if t.arg.terms().len() > 1 && !t.is_constant() {
                format!("({a})")
            } else {
                a
            });
        }
        if !t.is_constant() {
            inside.push(MultiSeries::monomial_text(&self.vars, &t.covector));
        }
        let lam = format!("λ_{}", t.lambda);
        let head = if t.mult.abs().is_one() {
            lam
        } else {
            format!("{} * {lam}", t.mult.abs())
        };
        (t.mult.is_negative(), format!("{head} * log({})", inside.join(" * ")))
    }
}

/// Factored form `lead * (1 + …)` for multi-term coefficients; empty body means `±1`.
fn coeff_text(c: &Coeff, names: &[String]) -> (bool, String) {
    let terms = c.signed_terms(names);
    if terms.len() == 1 {
        let (neg, body) = terms[0].clone();
        return (neg, if body == "1" { String::new() } else { body });
    }
    let (k, v) = c.leading().expect("nonzero");
    let lead = Coeff::term(v.clone(), k.t, &k.params);
    let rest = c.mul(&lead.pow(-1).expect("single term"));
    let lead_text = lead.signed_terms(names).remove(0);
    let inner = format!("({})", rest.to_text(names));
    if lead_text.1 == "1" {
        (lead_text.0, inner)
    } else {
        (lead_text.0, format!("{} * {inner}", lead_text.1))
    }
}

impl fmt::Display for LaurentPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut order: Vec<(&IVec, &Coeff)> = self.terms.iter().collect();
        order.sort_by(|a, b| a.1.min_t().cmp(&b.1.min_t()).then_with(|| b.0.cmp(a.0)));
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (e, c) in order {
            parts.extend(self.term_text(e, c));
        }
        for t in &self.log_part {
            parts.push(self.log_text(t));
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&join_signed(&parts))
    }
}

/// `Σ_i T^{A_i} z^{v_i}`.
pub fn basic_disc_potential(td: &ToricData) -> LaurentPotential {
    let mut w = LaurentPotential::with_default_vars(td.dim());
    for (v, a) in td.rays.iter().zip(&td.areas) {
        w.add_term(v.clone(), &Coeff::t_power(*a));
    }
    w
}

/// Basic potential plus `Σ_j λ_j log(z^{ℓ_j})` over the subtorus generators.
pub fn equivariant_potential(td: &ToricData, sub: &SubtorusAction) -> Result<LaurentPotential> {
    if sub.generators.iter().any(|g| g.len() != td.dim()) {
        return Err(Error::Dimension("subtorus generators must have the fan's rank".into()));
    }
    let mut w = basic_disc_potential(td);
    for (j, g) in sub.generators.iter().enumerate() {
        w.add_log(LogTerm {
            lambda: j + 1,
            mult: BigRational::one(),
            covector: g.clone(),
            arg: Coeff::one(),
        });
    }
    Ok(w)
}

/// A constraint `z^{covector} = value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub covector: IVec,
    pub value: Coeff,
}

/// Substitutes the constraints, eliminating the listed variables (0-based).
pub fn restrict_potential(
    w: &LaurentPotential,
    constraints: &[Constraint],
    eliminate: &[usize],
) -> Result<LaurentPotential> {
    let n = w.nvars();
    let k = constraints.len();
    if eliminate.len() != k {
        return Err(Error::Dimension(format!(
            "{k} constraints but {} eliminated variables",
            eliminate.len()
        )));
    }
    if eliminate.iter().any(|&s| s >= n) || (1..k).any(|i| eliminate[..i].contains(&eliminate[i])) {
        return Err(Error::Dimension(
            "eliminated variables must be distinct and in range".into(),
        ));
    }
    if constraints.iter().any(|c| c.covector.len() != n) {
        return Err(Error::Dimension(
            "constraint covectors must have one entry per variable".into(),
        ));
    }
    if constraints.iter().any(|c| c.value.is_zero()) {
        return Err(Error::Invariant("constraint values must be nonzero".into()));
    }
    let keep: Vec<usize> = (0..n).filter(|i| !eliminate.contains(i)).collect();
    let a: Vec<IVec> = constraints
        .iter()
        .map(|c| eliminate.iter().map(|&s| c.covector[s]).collect())
        .collect();
    if !crate::lattice::is_unimodular(&a) {
        return Err(Error::Invariant(
            "constraints are not unimodular on the eliminated variables".into(),
        ));
    }
    let ainv = int_inverse(&a);
    // log z_S = A⁻¹ log v − A⁻¹ B log z_R
    let ainv_b: Vec<IVec> = (0..k)
        .map(|s| {
            keep.iter()
                .map(|&r| (0..k).map(|c| ainv[s][c] * constraints[c].covector[r]).sum())
                .collect()
        })
        .collect();
    let values = |p: &[i64]| -> Result<Coeff> {
        let mut out = Coeff::one();
        for (c, &e) in constraints.iter().zip(p) {
            if e != 0 {
                out = out.mul(&c.value.pow(e)?);
            }
        }
        Ok(out)
    };
    let split = |e: &[i64]| -> (IVec, IVec) {
        let p: IVec = (0..k)
            .map(|c| (0..k).map(|s| e[eliminate[s]] * ainv[s][c]).sum())
            .collect();
        let r: IVec = keep
            .iter()
            .enumerate()
            .map(|(j, &r)| e[r] - (0..k).map(|s| e[eliminate[s]] * ainv_b[s][j]).sum::<i64>())
            .collect();
        (p, r)
    };
    let vars = keep.iter().map(|&i| w.vars[i].clone()).collect();
    let mut out = LaurentPotential::new(vars, w.params.clone());
    for (e, c) in &w.terms {
        let (p, r) = split(e);
        out.add_term(r, &c.mul(&values(&p)?));
    }
    for t in &w.log_part {
        let (p, r) = split(&t.covector);
        out.add_log(LogTerm {
            covector: r,
            arg: t.arg.mul(&values(&p)?),
            ..t.clone()
        });
    }
    Ok(out)
}

fn int_inverse(a: &[IVec]) -> Vec<IVec> {
    let inv = QMatrix::from_int_rows(a).inverse().expect("unimodular");
    (0..a.len())
        .map(|i| {
            (0..a.len())
                .map(|j| i64::try_from(inv[(i, j)].to_integer()).expect("small"))
                .collect()
        })
        .collect()
}
