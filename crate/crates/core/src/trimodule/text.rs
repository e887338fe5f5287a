use std::collections::BTreeMap;

use super::module::{AInfinityTriModule, TriKey};
use crate::ainfinity::text::{
    basis_from_section, format_entry, lincomb_chain, parse_entry_line, parse_names, parse_sections, Section,
};
use crate::ainfinity::{AInfinityAlgebra, Chain};
use crate::error::{Error, Result};
use crate::novikov::Exponent;

/// A parsed tri-module file plus its optional `[deformation]` keys.
#[derive(Clone, Debug)]
pub struct TriModuleFile {
    pub module: AInfinityTriModule,
    pub deformation: BTreeMap<String, String>,
}

impl TriModuleFile {
    /// Chain stored under `key` in `[deformation]`, read against the basis named by `key`.
    pub fn chain(&self, key: &str) -> Result<Option<Chain>> {
        let Some(text) = self.deformation.get(key) else {
            return Ok(None);
        };
        let m = &self.module;
        let basis = match key {
            "left" => m.left.basis(),
            "middle" => m.mid.basis(),
            "right" => m.right.basis(),
            _ => m.basis(),
        };
        Chain::parse(text, basis, m.truncation(), m.lambda_cap()).map(Some)
    }

    pub fn chain_or_zero(&self, key: &str) -> Result<Chain> {
        Ok(self.chain(key)?.unwrap_or_else(|| self.module.zero_chain()))
    }
}

fn split_groups(args: &str) -> Result<[&str; 4]> {
    let parts: Vec<&str> = args.split(';').collect();
    match parts.as_slice() {
        [a, b, c, d] => Ok([a, b, c, d]),
        _ => Err(Error::Parse(format!("expected `X''; y; X'; X` in `({args})`"))),
    }
}

impl AInfinityTriModule {
    pub fn parse_file(text: &str, default_truncation: Option<Exponent>) -> Result<TriModuleFile> {
        Self::parse_file_with(text, default_truncation, crate::novikov::DEFAULT_LAMBDA_CAP)
    }

    /// Like [`AInfinityTriModule::parse_file`] with a λ-cap for blocks that do not set one.
    pub fn parse_file_with(text: &str, default_truncation: Option<Exponent>, cap: u32) -> Result<TriModuleFile> {
        let sections = parse_sections(text)?;
        let find = |name: &str| -> Result<&Section> {
            sections
                .iter()
                .find(|s| s.name == name)
                .ok_or_else(|| Error::Parse(format!("missing section [{name}]")))
        };
        let module = find("module")?;
        let tr = match module.key("truncation") {
            Some(t) => Some(t.parse()?),
            None => default_truncation,
        };
        let left = AInfinityAlgebra::from_section(find("left")?, tr, cap)?;
        let mid = AInfinityAlgebra::from_section(find("middle")?, tr, cap)?;
        let right = AInfinityAlgebra::from_section(find("right")?, tr, cap)?;
        let mut m = AInfinityTriModule::new(left, mid, right, basis_from_section(module)?)?;
        if let Some(c) = module.key("cyclic") {
            m.set_cyclic(c)?;
        }
        for (no, line) in &module.entries {
            let at = |e: Error| Error::Parse(format!("line {no}: {e}"));
            let en = parse_entry_line(line).map_err(at)?;
            if en.op != "n" {
                return Err(at(Error::Parse(format!("unexpected operation `{}`", en.op))));
            }
            let [l, y, md, r] = split_groups(en.args).map_err(at)?;
            let (l, y, md, r) = (parse_names(l), parse_names(y), parse_names(md), parse_names(r));
            if y.len() != 1 {
                return Err(at(Error::Parse("exactly one module input expected".into())));
            }
            if en.labels != [l.len(), md.len(), r.len()] {
                return Err(at(Error::Parse("arity labels disagree with inputs".into())));
            }
            let key = TriKey {
                left: m.left.basis().indices_of(&l).map_err(at)?,
                y: m.basis().indices_of(&y).map_err(at)?[0],
                mid: m.mid.basis().indices_of(&md).map_err(at)?,
                right: m.right.basis().indices_of(&r).map_err(at)?,
            };
            let coeffs = Chain::parse_lincomb(en.rhs, m.basis()).map_err(at)?;
            let ch = lincomb_chain(&coeffs, en.energy, m.truncation(), m.lambda_cap()).map_err(at)?;
            match m.add_entry(&key, &ch) {
                Err(Error::Invariant(msg)) => return Err(Error::Invariant(format!("line {no}: {msg}"))),
                r => r.map_err(at)?,
            }
        }
        let deformation = sections
            .iter()
            .find(|s| s.name == "deformation")
            .map(|s| s.keys.clone())
            .unwrap_or_default();
        Ok(TriModuleFile { module: m, deformation })
    }

    pub fn parse(text: &str, default_truncation: Option<Exponent>) -> Result<Self> {
        Ok(Self::parse_file(text, default_truncation)?.module)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (name, a) in [("left", &self.left), ("middle", &self.mid), ("right", &self.right)] {
            s.push_str(&format!("[{name}]\n{}\n", a.to_text()));
        }
        s.push_str(&format!("[module]\nbasis = {}\n", self.basis().to_text()));
        if let Some(u) = self.basis().unit() {
            s.push_str(&format!("unit = {}\n", self.basis().name(u)));
        }
        if let Some(c) = self.cyclic() {
            s.push_str(&format!("cyclic = {}\n", self.basis().name(c)));
        }
        for (key, e, coeffs) in self.energy_entries() {
            let names = |b: &crate::ainfinity::GradedBasis, xs: &[usize]| {
                xs.iter().map(|&i| b.name(i).to_string()).collect::<Vec<_>>().join(",")
            };
            let args = format!(
                "{}; {}; {}; {}",
                names(self.left.basis(), &key.left),
                self.basis().name(key.y),
                names(self.mid.basis(), &key.mid),
                names(self.right.basis(), &key.right)
            );
            let (p, q, r) = key.arity();
            let rhs = Chain::lincomb_text(&coeffs, self.basis());
            s.push_str(&format_entry("n", &format!("{p},{q},{r}"), &e, &args, &rhs));
            s.push('\n');
        }
        s
    }
}
