use std::collections::BTreeSet;

use num_rational::BigRational;

use super::module::AInfinityTriModule;
use crate::ainfinity::text::lincomb_chain;
use crate::ainfinity::{Chain, PotentialValue};
use crate::error::{Error, Result};
use crate::hpt::{gapping_levels, Contraction};
use crate::linalg::QMatrix;
use crate::novikov::{Exponent, NovikovSeries};

/// Which right algebra a right-cyclicity test uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Mid,
    Right,
}

/// A degree-0 module element whose classical action map is invertible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicElement {
    pub element: Chain,
    pub side: Side,
    /// Classical action map from the algebra on `side` into `D`.
    pub phi: QMatrix,
    pub phi_inv: QMatrix,
}

fn classical(c: &Chain) -> Result<Chain> {
    c.energy_part(&Exponent::ZERO)
}

/// Rational matrix of an energy-0 chain map given column by column.
fn matrix_of(cols: &[Chain], rows: usize) -> Result<QMatrix> {
    let mut m = QMatrix::zeros(rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (i, s) in c.at_energy(&Exponent::ZERO) {
            m[(i, j)] = s
                .as_rational()
                .ok_or_else(|| Error::Unsupported("λ-dependent classical action".into()))?;
        }
    }
    Ok(m)
}

impl AInfinityTriModule {
    /// The designated cyclic candidate as a chain.
    pub fn cyclic_chain(&self) -> Option<Chain> {
        self.cyclic()
            .map(|i| Chain::basis(i, self.truncation(), self.lambda_cap()))
    }

    fn action_map(&self, one: &Chain, side: Side) -> Result<QMatrix> {
        let one_bar = classical(one)?;
        let alg = match side {
            Side::Left => &self.left,
            Side::Mid => &self.mid,
            Side::Right => &self.right,
        };
        let mut cols = Vec::new();
        for a in 0..alg.basis().len() {
            let x = alg.basis_chain(a);
            let out = match side {
                Side::Left => self.eval(&[&x], &one_bar, &[], &[])?,
                Side::Mid => self.eval(&[], &one_bar, &[&x], &[])?,
                Side::Right => self.eval(&[], &one_bar, &[], &[&x])?,
            };
            cols.push(out);
        }
        matrix_of(&cols, self.basis().len())
    }

    /// `Some` when `n̄_{0,0,0}(𝟏̄) = 0` and the classical action from `side` is invertible.
    pub fn is_cyclic(&self, one: &Chain, side: Side) -> Result<Option<CyclicElement>> {
        if one.support().any(|i| self.basis().degree(i) != 0) {
            return Err(Error::Invariant("cyclic candidate must have degree 0".into()));
        }
        let d0 = self.eval(&[], &classical(one)?, &[], &[])?;
        if !d0.at_energy(&Exponent::ZERO).is_empty() {
            return Ok(None);
        }
        let phi = self.action_map(one, side)?;
        Ok(phi.inverse().map(|phi_inv| CyclicElement {
            element: one.clone(),
            side,
            phi,
            phi_inv,
        }))
    }

    pub fn is_left_cyclic(&self, one: &Chain) -> Result<Option<CyclicElement>> {
        self.is_cyclic(one, Side::Left)
    }

    pub fn is_right_cyclic(&self, one: &Chain) -> Result<Option<CyclicElement>> {
        self.is_cyclic(one, Side::Mid)
    }

    pub fn is_bicyclic(&self, one: &Chain) -> Result<Option<(CyclicElement, CyclicElement)>> {
        Ok(match (self.is_left_cyclic(one)?, self.is_right_cyclic(one)?) {
            (Some(l), Some(r)) => Some((l, r)),
            _ => None,
        })
    }

    /// `n^{b'',b',b}_{0,0,0}(y)` by direct insertion.
    pub fn deformed_differential(&self, bl: &Chain, bm: &Chain, br: &Chain, y: &Chain) -> Result<Chain> {
        let mut out = self.zero_chain();
        for t in self.ops().values() {
            'entries: for (key, val) in t {
                let Some(cy) = y.coeffs().get(&key.y) else { continue };
                let mut coeff = cy.clone();
                for (xs, b) in [(&key.left, bl), (&key.mid, bm), (&key.right, br)] {
                    for &i in xs {
                        coeff = coeff.mul(&b.coeff(i))?;
                        if coeff.is_zero() {
                            continue 'entries;
                        }
                    }
                }
                out.add_scaled(&coeff, val)?;
            }
        }
        Ok(out)
    }

    fn levels(&self, extra: &[&Chain]) -> Vec<Exponent> {
        let mut gens: BTreeSet<Exponent> = BTreeSet::new();
        for t in self.ops().values() {
            for c in t.values() {
                gens.extend(c.energies());
            }
        }
        for a in [&self.left, &self.mid, &self.right] {
            gens.extend(a.energies());
        }
        for c in extra {
            gens.extend(c.energies());
        }
        gapping_levels(&gens, self.truncation())
    }

    /// Solves `n^{b'',b',b}_{0,0,0}(𝟏) = 0` for `b''` energy level by energy level.
    pub fn compose(&self, cyc: &CyclicElement, b: &Chain, bm: &Chain) -> Result<Chain> {
        if cyc.side != Side::Left {
            return Err(Error::Invariant("composition needs a left-cyclic element".into()));
        }
        let one = &cyc.element;
        let mut bl = self.left.zero_chain();
        for e in self.levels(&[one, b, bm]) {
            if e.is_zero() {
                continue;
            }
            let r = self.deformed_differential(&bl, bm, b, one)?.at_energy(&e);
            if r.is_empty() {
                continue;
            }
            let neg_inv = cyc.phi_inv.scale(&-BigRational::from_integer(1.into()));
            let step = Contraction::apply_scalars(&neg_inv, &r);
            bl.add_assign(&lincomb_chain(&step, e, self.truncation(), self.lambda_cap())?)?;
        }
        if let Some(i) = bl.support().find(|&i| !self.left.basis().is_odd(i)) {
            return Err(Error::Singular(format!(
                "composition produced an even component `{}`",
                self.left.basis().name(i)
            )));
        }
        Ok(bl)
    }

    /// Residuals of `n²(y) + (W'' − W − W')·y + s·Λ·y` for `s = +1, −1`, where `Λ` is the
    /// λ-linear part of `W_tot + W'_tot − W''_tot`.
    pub fn obstruction_square(&self, bl: &Chain, bm: &Chain, br: &Chain, y: &Chain) -> Result<ObstructionReport> {
        let pot = |a: &crate::ainfinity::AInfinityAlgebra, b: &Chain, which: &str| -> Result<PotentialValue> {
            a.is_weak_mc(b)?
                .ok_or_else(|| Error::Invariant(format!("{which} deformation is not weak Maurer–Cartan")))
        };
        let wl = pot(&self.left, bl, "left")?.total;
        let wm = pot(&self.mid, bm, "middle")?.total;
        let wr = pot(&self.right, br, "right")?.total;
        let n1 = self.deformed_differential(bl, bm, br, y)?;
        let n2 = self.deformed_differential(bl, bm, br, &n1)?;
        let scalar = wl.lambda_part(0).sub(&wm.lambda_part(0))?.sub(&wr.lambda_part(0))?;
        let lam = wm.add(&wr)?.sub(&wl)?;
        let lam = lam.sub(&lam.lambda_part(0))?;
        let mut base = n2.clone();
        base.add_assign(&y.scale(&scalar)?)?;
        let ly = y.scale(&lam)?;
        let mut plus = base.clone();
        plus.add_assign(&ly)?;
        let minus = base.sub(&ly)?;
        Ok(ObstructionReport {
            n_squared: n2,
            potential_gap: scalar,
            lambda_part: lam,
            plus,
            minus,
        })
    }

    /// `κ = (φ'')⁻¹ ∘ φ'` on the basis of `C'` together with sign checks.
    pub fn chain_iso_kappa(&self, cyc: &CyclicElement, bl: &Chain, bm: &Chain, br: &Chain) -> Result<KappaReport> {
        let one = &cyc.element;
        let Some((left, _)) = self.is_bicyclic(one)? else {
            return Err(Error::Invariant("κ needs a bicyclic element".into()));
        };
        let def = self.deform(bl, bm, br)?;
        let levels = self.levels(&[one, bl, bm, br]);
        let phi1 = |x: &Chain| def.eval(&[], one, &[x], &[]);
        let phi2 = |x: &Chain| def.eval(&[x], one, &[], &[]);
        let solve = |target: &Chain| -> Result<Chain> {
            let mut z = def.left.zero_chain();
            for e in &levels {
                let r = target.sub(&phi2(&z)?)?.at_energy(e);
                if r.is_empty() {
                    continue;
                }
                let step = Contraction::apply_scalars(&left.phi_inv, &r);
                z.add_assign(&lincomb_chain(&step, *e, self.truncation(), self.lambda_cap())?)?;
            }
            Ok(z)
        };
        let nm = def.mid.basis().len();
        let mut kappa = Vec::with_capacity(nm);
        for x in 0..nm {
            kappa.push(solve(&phi1(&def.mid.basis_chain(x))?)?);
        }
        let kap = |c: &Chain| -> Result<Chain> {
            let mut out = def.left.zero_chain();
            for (i, s) in c.coeffs() {
                out.add_scaled(s, &kappa[*i])?;
            }
            Ok(out)
        };
        let mut chain_sign = SignCheck::new();
        for x in 0..nm {
            let xc = def.mid.basis_chain(x);
            let lhs = phi1(&def.mid.eval(&[&xc])?)?;
            let rhs = def.eval(&[], &phi1(&xc)?, &[], &[])?;
            chain_sign.observe(&lhs, &rhs)?;
        }
        let mut product_sign = SignCheck::new();
        for x in 0..nm {
            for y in 0..nm {
                let (xc, yc) = (def.mid.basis_chain(x), def.mid.basis_chain(y));
                let lhs = classical(&kap(&def.mid.eval(&[&xc, &yc])?)?)?;
                let rhs = classical(&def.left.eval(&[&kappa[x], &kappa[y]])?)?;
                product_sign.observe(&lhs, &rhs)?;
            }
        }
        let mut unit_sign = SignCheck::new();
        if let (Some(u1), Some(u2)) = (def.mid.unit(), def.left.unit()) {
            unit_sign.observe(&classical(&kappa[u1])?, &def.left.basis_chain(u2))?;
        }
        Ok(KappaReport {
            kappa,
            chain_sign,
            product_sign,
            unit_sign,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub n_squared: Chain,
    pub potential_gap: NovikovSeries,
    pub lambda_part: NovikovSeries,
    pub plus: Chain,
    pub minus: Chain,
}

impl ObstructionReport {
    /// Signs `s` for which the residual vanishes.
    pub fn vanishing_signs(&self) -> Vec<i8> {
        let mut v = Vec::new();
        if self.plus.is_zero() {
            v.push(1);
        }
        if self.minus.is_zero() {
            v.push(-1);
        }
        v
    }
}

/// Whether `lhs = rhs` and/or `lhs = -rhs` held in every observation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignCheck {
    pub plus: bool,
    pub minus: bool,
}

impl SignCheck {
    pub fn new() -> Self {
        SignCheck {
            plus: true,
            minus: true,
        }
    }

    pub fn observe(&mut self, lhs: &Chain, rhs: &Chain) -> Result<()> {
        self.plus &= lhs.sub(rhs)?.is_zero();
        let mut s = lhs.clone();
        s.add_assign(rhs)?;
        self.minus &= s.is_zero();
        Ok(())
    }

    /// The unique consistent sign, if exactly one held.
    pub fn sign(&self) -> Option<i8> {
        match (self.plus, self.minus) {
            (true, false) => Some(1),
            (false, true) => Some(-1),
            _ => None,
        }
    }

    pub fn holds(&self) -> bool {
        self.plus || self.minus
    }
}

impl Default for SignCheck {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaReport {
    pub kappa: Vec<Chain>,
    pub chain_sign: SignCheck,
    pub product_sign: SignCheck,
    pub unit_sign: SignCheck,
}
