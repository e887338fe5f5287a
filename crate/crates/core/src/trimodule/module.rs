use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::ainfinity::{tuples, AInfinityAlgebra, Chain, GradedBasis};
use crate::error::{Error, Result};
use crate::novikov::{Exponent, NovikovSeries};

/// Inputs of `n_{k'',k',k}` in the order `X'' y X' X`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TriKey {
    pub left: Vec<usize>,
    pub y: usize,
    pub mid: Vec<usize>,
    pub right: Vec<usize>,
}

impl TriKey {
    pub fn new(left: &[usize], y: usize, mid: &[usize], right: &[usize]) -> Self {
        TriKey {
            left: left.to_vec(),
            y,
            mid: mid.to_vec(),
            right: right.to_vec(),
        }
    }

    pub fn arity(&self) -> (usize, usize, usize) {
        (self.left.len(), self.mid.len(), self.right.len())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TriViolation {
    pub energy: Exponent,
    pub key: TriKey,
}

/// Filtered A∞ tri-module: left `C''`, right `(C', C)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfinityTriModule {
    pub left: AInfinityAlgebra,
    pub mid: AInfinityAlgebra,
    pub right: AInfinityAlgebra,
    basis: GradedBasis,
    ops: BTreeMap<(usize, usize, usize), BTreeMap<TriKey, Chain>>,
    cyclic: Option<usize>,
    truncation: Exponent,
    lambda_cap: u32,
}

fn shifted_odd(b: &GradedBasis, xs: &[usize]) -> bool {
    xs.iter().filter(|&&i| !b.is_odd(i)).count() % 2 == 1
}

impl AInfinityTriModule {
    pub fn new(
        left: AInfinityAlgebra,
        mid: AInfinityAlgebra,
        right: AInfinityAlgebra,
        basis: GradedBasis,
    ) -> Result<Self> {
        let truncation = left.truncation();
        let lambda_cap = left.lambda_cap();
        for a in [&mid, &right] {
            if a.truncation() != truncation {
                return Err(Error::TruncationMismatch(a.truncation(), truncation));
            }
        }
        Ok(AInfinityTriModule {
            left,
            mid,
            right,
            basis,
            ops: BTreeMap::new(),
            cyclic: None,
            truncation,
            lambda_cap,
        })
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

    pub fn cyclic(&self) -> Option<usize> {
        self.cyclic
    }

    pub fn set_cyclic(&mut self, name: &str) -> Result<()> {
        let i = self.basis.indices_of(&[name])?[0];
        if self.basis.degree(i) != 0 {
            return Err(Error::Invariant(format!("cyclic element `{name}` must have degree 0")));
        }
        self.cyclic = Some(i);
        Ok(())
    }

    pub fn ops(&self) -> &BTreeMap<(usize, usize, usize), BTreeMap<TriKey, Chain>> {
        &self.ops
    }

    pub fn zero_chain(&self) -> Chain {
        Chain::zero(self.truncation, self.lambda_cap)
    }

    pub fn entry(&self, key: &TriKey) -> Option<&Chain> {
        self.ops.get(&key.arity()).and_then(|t| t.get(key))
    }

    pub fn add_entry(&mut self, key: &TriKey, out: &Chain) -> Result<()> {
        let ranges = [
            (&key.left, self.left.basis().len()),
            (&key.mid, self.mid.basis().len()),
            (&key.right, self.right.basis().len()),
        ];
        for (xs, n) in ranges {
            if xs.iter().any(|&i| i >= n) {
                return Err(Error::Dimension("tri-module input out of range".into()));
            }
        }
        if key.y >= self.basis.len() || out.support().any(|o| o >= self.basis.len()) {
            return Err(Error::Dimension("module index out of range".into()));
        }
        let inputs_deg: i64 = key
            .left
            .iter()
            .map(|&i| self.left.basis().degree(i) as i64)
            .sum::<i64>()
            + self.basis.degree(key.y) as i64
            + key.mid.iter().map(|&i| self.mid.basis().degree(i) as i64).sum::<i64>()
            + key
                .right
                .iter()
                .map(|&i| self.right.basis().degree(i) as i64)
                .sum::<i64>();
        let total = (key.left.len() + 1 + key.mid.len() + key.right.len()) as i64;
        for o in out.support() {
            if (self.basis.degree(o) as i64 - inputs_deg - 2 + total).rem_euclid(2) != 0 {
                return Err(Error::Invariant(format!(
                    "n_{:?} has output `{}` of the wrong parity",
                    key.arity(),
                    self.basis.name(o)
                )));
            }
        }
        let t = self.ops.entry(key.arity()).or_default();
        let slot = t.entry(key.clone()).or_insert_with(|| out.zero_like());
        slot.add_assign(out)?;
        if slot.is_zero() {
            t.remove(key);
            if t.is_empty() {
                self.ops.remove(&key.arity());
            }
        }
        Ok(())
    }

    /// Adds `c T^e · out` to `n(left; y; mid; right)` by names.
    #[allow(clippy::too_many_arguments)]
    pub fn add_term(
        &mut self,
        left: &[&str],
        y: &str,
        mid: &[&str],
        right: &[&str],
        e: Exponent,
        c: num_rational::BigRational,
        out: &str,
    ) -> Result<()> {
        let key = TriKey {
            left: self.left.basis().indices_of(left)?,
            y: self.basis.indices_of(&[y])?[0],
            mid: self.mid.basis().indices_of(mid)?,
            right: self.right.basis().indices_of(right)?,
        };
        let o = self.basis.indices_of(&[out])?[0];
        let s = NovikovSeries::rational_term(e, c, self.truncation, self.lambda_cap);
        self.add_entry(&key, &Chain::single(o, s))
    }

    /// `n` on arbitrary chains.
    pub fn eval(&self, left: &[&Chain], y: &Chain, mid: &[&Chain], right: &[&Chain]) -> Result<Chain> {
        let mut out = self.zero_chain();
        let Some(t) = self.ops.get(&(left.len(), mid.len(), right.len())) else {
            return Ok(out);
        };
        'entries: for (key, val) in t {
            let mut coeff = match y.coeffs().get(&key.y) {
                Some(c) => c.clone(),
                None => continue,
            };
            let groups = [(left, &key.left), (mid, &key.mid), (right, &key.right)];
            for (xs, ks) in groups {
                for (x, &i) in xs.iter().zip(ks.iter()) {
                    match x.coeffs().get(&i) {
                        Some(c) => coeff = coeff.mul(c)?,
                        None => continue 'entries,
                    }
                    if coeff.is_zero() {
                        continue 'entries;
                    }
                }
            }
            out.add_scaled(&coeff, val)?;
        }
        Ok(out)
    }

    /// Applies `n` with one slot replaced by a chain; `slot` selects the group and position.
    fn eval_slot(&self, key: &TriKey, group: usize, pos: usize, c: &Chain) -> Result<Chain> {
        let mut out = self.zero_chain();
        let mut k = key.clone();
        for (i, s) in c.coeffs() {
            match group {
                0 => k.left[pos] = *i,
                1 => k.y = *i,
                2 => k.mid[pos] = *i,
                _ => k.right[pos] = *i,
            }
            if let Some(v) = self.entry(&k) {
                out.add_scaled(s, v)?;
            }
        }
        Ok(out)
    }

    /// Left-hand side of the tri-module relation on basis inputs.
    pub fn relation(&self, key: &TriKey) -> Result<Chain> {
        let (lb, mb, rb) = (self.left.basis(), self.mid.basis(), self.right.basis());
        let (xl, xm, xr) = (&key.left, &key.mid, &key.right);
        let (p, q, r) = key.arity();
        let mut total = self.zero_chain();
        let mut push = |c: Chain, odd: bool| -> Result<()> { total.add_assign(&if odd { c.neg() } else { c }) };
        // inner m'' on a block of X''
        for i in 0..=p {
            for j in 0..=p - i {
                let Some(inner) = self.left.entry(&xl[i..i + j]) else {
                    continue;
                };
                let mut nk = key.clone();
                nk.left = [&xl[..i], &[0][..], &xl[i + j..]].concat();
                push(self.eval_slot(&nk, 0, i, inner)?, shifted_odd(lb, &xl[..i]))?;
            }
        }
        // inner n on (tail of X'', y, prefix of X', prefix of X)
        for t in 0..=p {
            for f1 in 0..=q {
                for f in 0..=r {
                    let inner_key = TriKey::new(&xl[t..], key.y, &xm[..f1], &xr[..f]);
                    let Some(inner) = self.entry(&inner_key) else { continue };
                    let outer = TriKey::new(&xl[..t], 0, &xm[f1..], &xr[f..]);
                    let odd = shifted_odd(lb, &xl[..t]) ^ (shifted_odd(mb, &xm[f1..]) && shifted_odd(rb, &xr[..f]));
                    push(self.eval_slot(&outer, 1, 0, inner)?, odd)?;
                }
            }
        }
        let before_mid = shifted_odd(lb, xl) ^ shifted_odd(&self.basis, &[key.y]);
        for i in 0..=q {
            for j in 0..=q - i {
                let Some(inner) = self.mid.entry(&xm[i..i + j]) else {
                    continue;
                };
                let mut nk = key.clone();
                nk.mid = [&xm[..i], &[0][..], &xm[i + j..]].concat();
                push(
                    self.eval_slot(&nk, 2, i, inner)?,
                    before_mid ^ shifted_odd(mb, &xm[..i]),
                )?;
            }
        }
        let before_right = before_mid ^ shifted_odd(mb, xm);
        for i in 0..=r {
            for j in 0..=r - i {
                let Some(inner) = self.right.entry(&xr[i..i + j]) else {
                    continue;
                };
                let mut nk = key.clone();
                nk.right = [&xr[..i], &[0][..], &xr[i + j..]].concat();
                push(
                    self.eval_slot(&nk, 3, i, inner)?,
                    before_right ^ shifted_odd(rb, &xr[..i]),
                )?;
            }
        }
        Ok(total)
    }

    /// All keys with `k'' + k' + k <= k_max`.
    pub fn keys_up_to(&self, k_max: usize) -> Vec<TriKey> {
        let (nl, nm, nr, nd) = (
            self.left.basis().len(),
            self.mid.basis().len(),
            self.right.basis().len(),
            self.basis.len(),
        );
        let mut out = Vec::new();
        for p in 0..=k_max {
            for q in 0..=k_max - p {
                for r in 0..=k_max - p - q {
                    for l in tuples(nl, p) {
                        for m in tuples(nm, q) {
                            for rr in tuples(nr, r) {
                                for y in 0..nd {
                                    out.push(TriKey::new(&l, y, &m, &rr));
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Every `(energy, inputs)` where a tri-module relation fails.
    pub fn check_trimodule(&self, k_max: usize) -> Result<Vec<TriViolation>> {
        let found: Vec<Result<Vec<TriViolation>>> = self
            .keys_up_to(k_max)
            .into_par_iter()
            .map(|key| {
                let r = self.relation(&key)?;
                Ok(r.energies()
                    .into_iter()
                    .map(|energy| TriViolation {
                        energy,
                        key: key.clone(),
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

    /// Inserts `b''`, `b'`, `b` into all compatible slots; algebras are deformed alongside.
    pub fn deform(&self, bl: &Chain, bm: &Chain, br: &Chain) -> Result<AInfinityTriModule> {
        let mut out = AInfinityTriModule {
            left: self.left.deform(bl)?,
            mid: self.mid.deform(bm)?,
            right: self.right.deform(br)?,
            basis: self.basis.clone(),
            ops: BTreeMap::new(),
            cyclic: self.cyclic,
            truncation: self.truncation,
            lambda_cap: self.lambda_cap,
        };
        if bl.is_zero() && bm.is_zero() && br.is_zero() {
            out.ops = self.ops.clone();
            return Ok(out);
        }
        let one = NovikovSeries::one(self.truncation, self.lambda_cap);
        for t in self.ops.values() {
            for (key, val) in t {
                let groups = [(&key.left, bl), (&key.mid, bm), (&key.right, br)];
                let mut options: Vec<Vec<(Vec<usize>, NovikovSeries)>> = Vec::new();
                for (xs, b) in groups {
                    let mut opts = Vec::new();
                    for mask in 0u64..(1u64 << xs.len()) {
                        let mut coeff = one.clone();
                        let mut kept = Vec::new();
                        for (s, &i) in xs.iter().enumerate() {
                            if mask & (1 << s) != 0 {
                                kept.push(i);
                            } else {
                                coeff = coeff.mul(&b.coeff(i))?;
                            }
                        }
                        if !coeff.is_zero() {
                            opts.push((kept, coeff));
                        }
                    }
                    options.push(opts);
                }
                for (l, cl) in &options[0] {
                    for (m, cm) in &options[1] {
                        let clm = cl.mul(cm)?;
                        if clm.is_zero() {
                            continue;
                        }
                        for (r, cr) in &options[2] {
                            let c = clm.mul(cr)?;
                            if !c.is_zero() {
                                out.add_entry(&TriKey::new(l, key.y, m, r), &val.scale(&c)?)?;
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Diagonal tri-module: `D = A` over `(A, A, Λe)` with `n_{k'',k',0} = m_{k''+1+k'}`
    /// and the third algebra acting through its strict unit.
    pub fn diagonal(a: &AInfinityAlgebra) -> Result<AInfinityTriModule> {
        let point = AInfinityAlgebra::new(
            GradedBasis::new(&[("u", 0)], Some("u"))?,
            a.truncation(),
            a.lambda_cap(),
        );
        let mut point = point;
        point.add_entry(&[0, 0], &point.basis_chain(0))?;
        let mut d = AInfinityTriModule::new(a.clone(), a.clone(), point, a.basis().clone())?;
        for (k, t) in a.ops() {
            for (key, val) in t {
                for split in 0..*k {
                    let tk = TriKey::new(&key[..split], key[split], &key[split + 1..], &[]);
                    d.add_entry(&tk, val)?;
                }
            }
        }
        for y in 0..a.basis().len() {
            let sign = if a.basis().is_odd(y) { -1 } else { 1 };
            let c = Chain::single(
                y,
                NovikovSeries::rational_term(
                    Exponent::ZERO,
                    crate::novikov::rat(sign, 1),
                    a.truncation(),
                    a.lambda_cap(),
                ),
            );
            d.add_entry(&TriKey::new(&[], y, &[], &[0]), &c)?;
        }
        if let Some(u) = a.unit() {
            d.cyclic = Some(u);
        }
        Ok(d)
    }

    /// Strict unit actions `n(e''; y) = y`, `n(y; e') = n(y;; e) = (-1)^{deg y} y`.
    pub fn add_unit_actions(&mut self) -> Result<()> {
        let units = [self.left.unit(), self.mid.unit(), self.right.unit()];
        let [Some(ul), Some(um), Some(ur)] = units else {
            return Err(Error::Invariant("unit actions need three unital algebras".into()));
        };
        for y in 0..self.basis.len() {
            let s = if self.basis.is_odd(y) { -1 } else { 1 };
            let (tr, cap) = (self.truncation, self.lambda_cap);
            let series = |c: i64| NovikovSeries::rational_term(Exponent::ZERO, crate::novikov::rat(c, 1), tr, cap);
            self.add_entry(&TriKey::new(&[ul], y, &[], &[]), &Chain::single(y, series(1)))?;
            self.add_entry(&TriKey::new(&[], y, &[um], &[]), &Chain::single(y, series(s)))?;
            self.add_entry(&TriKey::new(&[], y, &[], &[ur]), &Chain::single(y, series(s)))?;
        }
        Ok(())
    }

    pub fn energy_entries(&self) -> Vec<(TriKey, Exponent, BTreeMap<usize, crate::novikov::Scalar>)> {
        let mut out = Vec::new();
        for t in self.ops.values() {
            for (key, val) in t {
                for e in val.energies() {
                    out.push((key.clone(), e, val.at_energy(&e)));
                }
            }
        }
        out.sort_by(|a, b| (a.0.arity(), a.1, &a.0).cmp(&(b.0.arity(), b.1, &b.0)));
        out
    }
}
