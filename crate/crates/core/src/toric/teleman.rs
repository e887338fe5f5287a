use std::fmt;

use num_rational::Ratio;
use num_traits::Zero;

use super::coeff::Coeff;
use super::fan::ToricData;
use super::mirror::{correspondence_equivariant_potential, subtorus_in_psi, SemiFano};
use super::potential::{equivariant_potential, restrict_potential, Constraint, LaurentPotential};
use crate::error::{Error, Result};
use crate::lattice::IVec;
use crate::novikov::MultiSeries;

/// `z_k = T^{shift} · z̃_k · factor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateChange {
    pub var: String,
    pub shift: Ratio<i64>,
    pub factor: Coeff,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub monomial: IVec,
    /// `T`-exponent of the first disagreement, relative to the leading exponent of that monomial.
    pub order: Ratio<i64>,
    pub lhs: Coeff,
    pub rhs: Coeff,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TelemanReport {
    /// `None` when both sides are compared exactly.
    pub window: Option<Ratio<i64>>,
    pub change: Vec<CoordinateChange>,
    /// Restricted `W_Y` after the coordinate change.
    pub lhs: LaurentPotential,
    pub rhs: LaurentPotential,
    pub lambda_cancels: bool,
    pub mismatch: Option<Mismatch>,
}

impl TelemanReport {
    pub fn ok(&self) -> bool {
        self.mismatch.is_none() && self.lambda_cancels
    }

    pub fn is_identity_change(&self) -> bool {
        self.change.iter().all(|c| c.shift.is_zero() && c.factor.is_one())
    }

    pub fn change_text(&self) -> String {
        if self.is_identity_change() {
            return "identity".into();
        }
        let parts: Vec<String> = self
            .change
            .iter()
            .map(|c| {
                let mut rhs = Vec::new();
                if !c.shift.is_zero() {
                    rhs.push(if c.shift.is_integer() {
                        format!("T^{}", c.shift.numer())
                    } else {
                        format!("T^{{{}}}", c.shift)
                    });
                }
                rhs.push(c.var.replacen('z', "z\u{303}", 1));
                if !c.factor.is_one() {
                    rhs.push(format!("({})", c.factor));
                }
                format!("{} = {}", c.var, rhs.join(" * "))
            })
            .collect();
        parts.join(", ")
    }
}

impl fmt::Display for TelemanReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.mismatch, self.lambda_cancels) {
            (None, true) => {
                let scope = match self.window {
                    None => "exact".to_string(),
                    Some(w) => format!("up to relative T^{w}"),
                };
                writeln!(f, "OK ({scope}), coordinate change: {}", self.change_text())?;
            }
            (None, false) => writeln!(f, "MISMATCH in the λ-part")?,
            (Some(m), _) => {
                let mono = MultiSeries::monomial_text(&self.lhs.vars, &m.monomial);
                writeln!(f, "MISMATCH at order {} in the coefficient of {mono}", m.order)?;
                writeln!(f, "  lhs: {}", m.lhs)?;
                writeln!(f, "  rhs: {}", m.rhs)?;
            }
        }
        writeln!(f, "W_Y restricted: {}", self.lhs)?;
        write!(f, "W_X:            {}", self.rhs)
    }
}

/// Checks `W_Y|_{h⁻¹(0)} = W_X` after a triangular change of the `σ` coordinates.
///
/// The fiber of `Y` sits at the origin of its moment polytope, so the subtorus level must be zero.
pub fn verify_teleman(td_y: &ToricData, td_x: &ToricData, order: u32) -> Result<TelemanReport> {
    let sub = td_y.subtorus()?;
    if sub.level.iter().any(|c| !c.is_zero()) {
        return Err(Error::Invariant(
            "the subtorus level must vanish at the fiber of Y".into(),
        ));
    }
    let sf = SemiFano::new(td_x, order)?;
    if !td_y.is_orthant() || td_y.nrays() != sf.cl.nrays() {
        return Err(Error::Invariant(
            "Y must be affine space with one coordinate per ray of X".into(),
        ));
    }
    let m = subtorus_in_psi(&sf.cl, &sub.generators)?;
    let mm = sf.mirror_map()?;

    let weights: Vec<Ratio<i64>> = sf
        .mori
        .generators
        .iter()
        .map(|c| c.iter().zip(&td_x.areas).map(|(&x, a)| a * x).sum())
        .collect();
    if weights.iter().any(|w| *w <= Ratio::zero()) {
        return Err(Error::Invariant("areas of X must be positive on the Mori cone".into()));
    }
    let q_weights: Vec<Ratio<i64>> = sf
        .cl
        .psi
        .iter()
        .map(|p| p.iter().zip(&td_x.areas).map(|(&x, a)| a * x).sum())
        .collect();
    let trivial = mm.g.iter().all(MultiSeries::is_zero);
    let window = (!trivial).then(|| weights.iter().min().copied().unwrap() * i64::from(order + 1));

    let realize = |s: &MultiSeries| mm.to_coeff(s).realize_params(&q_weights);
    let constraints: Vec<Constraint> = sf
        .cl
        .psi
        .iter()
        .zip(&mm.inverse)
        .map(|(p, s)| Constraint {
            covector: p.clone(),
            value: realize(s),
        })
        .collect();
    let w_y = equivariant_potential(td_y, sub)?;
    let restricted = restrict_potential(&w_y, &constraints, &sf.cl.tau)?;
    let rhs = sf.semifano_potential(&mm).realize_params(&q_weights);

    // λ-part: Σ_k λ_k log(z^{G_k}) on the fiber against the correspondence potential
    let corr = correspondence_equivariant_potential(td_y, &sf, &mm)?.realize_params(&q_weights);
    let lambda_cancels = (0..m.len()).all(|k| {
        let arg = |w: &LaurentPotential| {
            w.log_part
                .iter()
                .filter(|t| t.lambda == k + 1)
                .fold(Coeff::one(), |acc, t| acc.mul(&t.arg))
        };
        let lhs = arg(&restricted);
        let rhs = arg(&corr);
        restricted.log_part.iter().all(|t| t.is_constant()) && trunc(&lhs, window) == trunc(&rhs, window)
    });

    // greedy change from the linear terms
    let d = td_x.dim();
    let mut change = Vec::with_capacity(d);
    let mut scale = Vec::with_capacity(d);
    for k in 0..d {
        let e: IVec = (0..d).map(|i| i64::from(i == k)).collect();
        let (l, r) = (restricted.coeff(&e), rhs.coeff(&e));
        let lead = |c: &Coeff| {
            c.min_t()
                .ok_or_else(|| Error::Invariant(format!("no linear term in z{}", k + 1)))
        };
        let (tl, tr) = (lead(&l)?, lead(&r)?);
        let factor = match l.terms().len() {
            1 => r.mul(&Coeff::t_power(-tr)),
            _ => {
                return Err(Error::Unsupported(
                    "linear terms of the restricted potential must be monomials".into(),
                ))
            }
        };
        let factor = factor.mul(&l.mul(&Coeff::t_power(-tl)).pow(-1)?);
        let shift = tr - tl;
        scale.push(factor.mul(&Coeff::t_power(shift)));
        change.push(CoordinateChange {
            var: restricted.vars[k].clone(),
            shift,
            factor,
        });
    }

    let mut lhs = LaurentPotential::new(restricted.vars.clone(), Vec::new());
    for (e, c) in &restricted.terms {
        let mut c = c.clone();
        for (k, &x) in e.iter().enumerate() {
            if x != 0 {
                let p = match window {
                    None => scale[k].pow(x)?,
                    Some(w) => scale[k].pow_truncated(x, w + scale[k].min_t().unwrap_or_default() * x)?,
                };
                c = c.mul(&p);
            }
        }
        lhs.add_term(e.clone(), &c);
    }

    let mut mismatch = None;
    let mut monomials: Vec<&IVec> = lhs.terms.keys().chain(rhs.terms.keys()).collect();
    monomials.sort();
    monomials.dedup();
    for e in monomials {
        let (l, r) = (lhs.coeff(e), rhs.coeff(e));
        let lead = l.min_t().into_iter().chain(r.min_t()).min().unwrap_or_default();
        let bound = window.map(|w| w + lead);
        let diff = trunc(&l.sub(&r), bound);
        if let Some(t) = diff.min_t() {
            let cand = Mismatch {
                monomial: e.clone(),
                order: t - lead,
                lhs: trunc(&l, bound),
                rhs: trunc(&r, bound),
            };
            if mismatch.as_ref().is_none_or(|m: &Mismatch| cand.order < m.order) {
                mismatch = Some(cand);
            }
        }
    }
    Ok(TelemanReport {
        window,
        change,
        lhs: truncate_all(&lhs, window),
        rhs: truncate_all(&rhs, window),
        lambda_cancels,
        mismatch,
    })
}

fn trunc(c: &Coeff, bound: Option<Ratio<i64>>) -> Coeff {
    match bound {
        Some(b) => c.truncate(b),
        None => c.clone(),
    }
}

fn truncate_all(w: &LaurentPotential, window: Option<Ratio<i64>>) -> LaurentPotential {
    let mut out = LaurentPotential::new(w.vars.clone(), w.params.clone());
    for (e, c) in &w.terms {
        let lead = c.min_t().unwrap_or_default();
        out.add_term(e.clone(), &trunc(c, window.map(|b| b + lead)));
    }
    out
}
