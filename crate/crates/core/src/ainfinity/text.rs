use std::collections::BTreeMap;

use super::algebra::AInfinityAlgebra;
use super::chain::{Chain, GradedBasis};
use crate::error::{Error, Result};
use crate::novikov::{Exponent, NovikovSeries, Scalar, DEFAULT_LAMBDA_CAP};

/// A `[section]` of a structured text file: header keys plus table lines.
#[derive(Clone, Debug, Default)]
pub struct Section {
    pub name: String,
    pub keys: BTreeMap<String, String>,
    pub entries: Vec<(usize, String)>,
}

impl Section {
    pub fn key(&self, k: &str) -> Option<&str> {
        self.keys.get(k).map(String::as_str)
    }

    pub fn require(&self, k: &str) -> Result<&str> {
        self.key(k)
            .ok_or_else(|| Error::Parse(format!("section [{}] lacks `{k}`", self.name)))
    }
}

/// Splits text into sections; lines before the first header land in an unnamed one.
pub fn parse_sections(text: &str) -> Result<Vec<Section>> {
    let mut out = vec![Section::default()];
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            out.push(Section {
                name: name.trim().to_string(),
                ..Section::default()
            });
            continue;
        }
        let cur = out.last_mut().unwrap();
        let is_entry = line.contains('(') && line.contains(")");
        match line.split_once('=') {
            Some((k, v)) if !is_entry && !k.contains('[') => {
                cur.keys.insert(k.trim().to_string(), v.trim().to_string());
            }
            _ => cur.entries.push((no + 1, line.to_string())),
        }
    }
    if out[0].keys.is_empty() && out[0].entries.is_empty() {
        out.remove(0);
    }
    Ok(out)
}

/// A parsed table line `op[labels, E=p/q](args) = rhs`.
pub struct EntryLine<'a> {
    pub op: &'a str,
    pub labels: Vec<usize>,
    pub energy: Exponent,
    pub args: &'a str,
    pub rhs: &'a str,
}

pub fn parse_entry_line(line: &str) -> Result<EntryLine<'_>> {
    let bad = |why: &str| Error::Parse(format!("{why} in `{line}`"));
    let open = line.find('[').ok_or_else(|| bad("missing `[`"))?;
    let close = line.find(']').ok_or_else(|| bad("missing `]`"))?;
    let op = line[..open].trim();
    let inside = &line[open + 1..close];
    let mut labels = Vec::new();
    let mut energy = None;
    for part in inside.split(',') {
        let part = part.trim();
        if let Some(e) = part.strip_prefix("E=").or_else(|| part.strip_prefix("E =")) {
            energy = Some(e.trim().parse::<Exponent>()?);
        } else {
            labels.push(part.parse().map_err(|_| bad("bad arity label"))?);
        }
    }
    let rest = &line[close + 1..];
    let lp = rest.find('(').ok_or_else(|| bad("missing `(`"))?;
    let rp = rest.rfind(')').ok_or_else(|| bad("missing `)`"))?;
    let args = &rest[lp + 1..rp];
    let rhs = rest[rp + 1..]
        .trim()
        .strip_prefix('=')
        .ok_or_else(|| bad("missing `=`"))?
        .trim();
    Ok(EntryLine {
        op,
        labels,
        energy: energy.ok_or_else(|| bad("missing energy"))?,
        args,
        rhs,
    })
}

pub fn parse_names(args: &str) -> Vec<&str> {
    args.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

/// `lincomb` scalars placed at energy `e` as a chain.
pub fn lincomb_chain(
    coeffs: &BTreeMap<usize, Scalar>,
    e: Exponent,
    truncation: Exponent,
    lambda_cap: u32,
) -> Result<Chain> {
    let mut c = Chain::zero(truncation, lambda_cap);
    for (i, s) in coeffs {
        c.add_series(*i, &NovikovSeries::monomial(e, s.clone(), truncation, lambda_cap)?)?;
    }
    Ok(c)
}

pub fn format_entry(op: &str, labels: &str, e: &Exponent, args: &str, rhs: &str) -> String {
    format!("{op}[{labels}, E={e}]({args}) = {rhs}")
}

pub fn basis_from_section(s: &Section) -> Result<GradedBasis> {
    let list = GradedBasis::parse_list(s.require("basis")?)?;
    GradedBasis::from_owned(list, s.key("unit"))
}

/// Truncation and λ-cap from a section, falling back to the given defaults.
pub fn truncation_of(s: &Section, default: Option<Exponent>, default_cap: u32) -> Result<(Exponent, u32)> {
    let t = match (s.key("truncation"), default) {
        (Some(t), _) => t.parse()?,
        (None, Some(d)) => d,
        (None, None) => return Err(Error::Parse(format!("section [{}] lacks `truncation`", s.name))),
    };
    if t.is_zero() {
        return Err(Error::Invariant("truncation order must be positive".into()));
    }
    let cap = match s.key("lambda_cap") {
        Some(c) => c.parse().map_err(|_| Error::Parse(format!("bad lambda_cap `{c}`")))?,
        None => default_cap,
    };
    Ok((t, cap))
}

impl AInfinityAlgebra {
    pub fn from_section(s: &Section, default_truncation: Option<Exponent>, default_cap: u32) -> Result<Self> {
        let basis = basis_from_section(s)?;
        let (t, cap) = truncation_of(s, default_truncation, default_cap)?;
        let mut a = AInfinityAlgebra::new(basis, t, cap);
        for (no, line) in &s.entries {
            let at = |e: Error| Error::Parse(format!("line {no}: {e}"));
            let en = parse_entry_line(line).map_err(at)?;
            if en.op != "m" {
                return Err(at(Error::Parse(format!("unexpected operation `{}`", en.op))));
            }
            let names = parse_names(en.args);
            if en.labels != [names.len()] {
                return Err(at(Error::Parse("arity label disagrees with inputs".into())));
            }
            let ins = a.basis().indices_of(&names).map_err(at)?;
            let coeffs = Chain::parse_lincomb(en.rhs, a.basis()).map_err(at)?;
            let ch = lincomb_chain(&coeffs, en.energy, t, cap).map_err(at)?;
            match a.add_entry(&ins, &ch) {
                Err(Error::Invariant(m)) => return Err(Error::Invariant(format!("line {no}: {m}"))),
                r => r.map_err(at)?,
            }
        }
        Ok(a)
    }

    pub fn parse(text: &str, default_truncation: Option<Exponent>) -> Result<Self> {
        Self::parse_with(text, default_truncation, DEFAULT_LAMBDA_CAP)
    }

    /// Like [`AInfinityAlgebra::parse`] with a λ-cap for files that do not set one.
    pub fn parse_with(text: &str, default_truncation: Option<Exponent>, default_cap: u32) -> Result<Self> {
        let sections = parse_sections(text)?;
        match sections.as_slice() {
            [s] => Self::from_section(s, default_truncation, default_cap),
            _ => Err(Error::Parse("expected a single algebra block".into())),
        }
    }

    pub fn header_text(&self) -> String {
        let mut s = format!("basis = {}\n", self.basis().to_text());
        if let Some(u) = self.unit() {
            s.push_str(&format!("unit = {}\n", self.basis().name(u)));
        }
        s.push_str(&format!("truncation = {}\n", self.truncation()));
        if self.lambda_cap() != DEFAULT_LAMBDA_CAP {
            s.push_str(&format!("lambda_cap = {}\n", self.lambda_cap()));
        }
        s
    }

    pub fn table_text(&self, op: &str) -> String {
        let mut s = String::new();
        for (k, e, ins, coeffs) in self.energy_entries() {
            let names: Vec<&str> = ins.iter().map(|&i| self.basis().name(i)).collect();
            let rhs = Chain::lincomb_text(&coeffs, self.basis());
            s.push_str(&format_entry(op, &k.to_string(), &e, &names.join(","), &rhs));
            s.push('\n');
        }
        s
    }

    pub fn to_text(&self) -> String {
        format!("{}{}", self.header_text(), self.table_text("m"))
    }
}
