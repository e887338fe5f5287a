use std::path::PathBuf;

use eqcorr::toric::{
    basic_disc_potential, correspondence_equivariant_potential, equivariant_potential, maslov_index_correspondence,
    missed_divisors, restrict_potential, Coeff, Constraint, SemiFano, ToricData,
};
use eqcorr::{Error, Result};
use serde::Deserialize;

use crate::{read, Report};

fn fan(path: &PathBuf) -> Result<ToricData> {
    ToricData::parse(&read(path)?)
}

fn table(text: &str) -> Result<toml::Table> {
    text.parse::<toml::Table>()
        .map_err(|e| Error::Parse(e.message().to_string()))
}

fn take(t: &mut toml::Table, key: &str) -> Result<toml::Value> {
    t.remove(key)
        .ok_or_else(|| Error::Parse(format!("missing table [{key}]")))
}

pub fn potential(path: &PathBuf, equivariant: bool) -> Result<Report> {
    let td = fan(path)?;
    let w = if equivariant {
        equivariant_potential(&td, td.subtorus()?)?
    } else {
        basic_disc_potential(&td)
    };
    Ok(Report::ok(w.to_string()))
}

pub fn mirror_map(path: &PathBuf, order: u32, both: bool) -> Result<Report> {
    let sf = SemiFano::new(&fan(path)?, order)?;
    let mm = sf.mirror_map()?;
    let mut lines = Vec::new();
    if both {
        lines.extend(mm.forward_text());
    }
    lines.extend(mm.inverse_text());
    Ok(Report::ok(lines.join("\n")))
}

pub fn semifano(path: &PathBuf, order: u32) -> Result<Report> {
    let sf = SemiFano::new(&fan(path)?, order)?;
    Ok(Report::ok(sf.semifano_potential(&sf.mirror_map()?).to_string()))
}

fn parse_indices(s: &str, n: usize) -> Result<Vec<usize>> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| match x.trim().parse::<usize>() {
            Ok(i) if (1..=n).contains(&i) => Ok(i - 1),
            _ => Err(Error::Parse(format!("bad ray label `{x}`"))),
        })
        .collect()
}

pub fn maslov(path: &PathBuf, stratum: Option<&str>, ray: Option<usize>) -> Result<Report> {
    let td = fan(path)?;
    let sub = td.subtorus()?;
    let n = td.nrays();
    let label = |b: &[usize], i: usize| {
        let b: Vec<String> = b.iter().map(|j| td.names[*j].clone()).collect();
        format!("β_{}^{{{}}}", i + 1, b.join(","))
    };
    if let (Some(s), Some(i)) = (stratum, ray) {
        let b = parse_indices(s, n)?;
        let i = parse_indices(&i.to_string(), n)?[0];
        let mu = maslov_index_correspondence(&td, sub, &b, i)?;
        return Ok(Report::ok(format!("{} = {mu}", label(&b, i))));
    }
    if stratum.is_some() || ray.is_some() {
        return Err(Error::Parse("--stratum and --ray go together".into()));
    }
    let mut lines = Vec::new();
    for b in 0..n {
        for i in 0..n {
            if b == i || td.cones_containing(&[b, i]).is_empty() {
                continue;
            }
            let line = match maslov_index_correspondence(&td, sub, &[b], i) {
                Ok(mu) => format!("{} = {mu}", label(&[b], i)),
                Err(e @ (Error::NotCorrespondence(_) | Error::Ambiguous(_))) => format!("{}: {e}", label(&[b], i)),
                Err(e) => return Err(e),
            };
            lines.push(line);
        }
    }
    Ok(Report::ok(lines.join("\n")))
}

pub fn missed(path: &PathBuf) -> Result<Report> {
    let td = fan(path)?;
    let md = missed_divisors(&td, td.subtorus()?)?;
    let names = |v: &[usize]| v.iter().map(|&i| td.names[i].clone()).collect::<Vec<_>>().join(", ");
    Ok(Report::ok(format!(
        "missed: {}\nhit: {}",
        names(&md.missed),
        names(&md.hit)
    )))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintFile {
    covector: Vec<i64>,
    value: toml::Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RestrictFile {
    constraints: Vec<ConstraintFile>,
    /// 1-based variables to eliminate.
    eliminate: Vec<usize>,
    #[serde(default)]
    equivariant: bool,
}

pub fn restrict(path: &PathBuf) -> Result<Report> {
    let mut t = table(&read(path)?)?;
    let r: RestrictFile = take(&mut t, "restrict")?
        .try_into()
        .map_err(|e: toml::de::Error| Error::Parse(e.message().to_string()))?;
    let td = ToricData::from_value(toml::Value::Table(t))?;
    let mut w = if r.equivariant {
        equivariant_potential(&td, td.subtorus()?)?
    } else {
        basic_disc_potential(&td)
    };
    let mut constraints = Vec::new();
    for c in r.constraints {
        let text = match c.value {
            toml::Value::String(s) => s,
            toml::Value::Integer(i) => i.to_string(),
            v => {
                return Err(Error::Parse(format!(
                    "constraint value `{v}` must be a string or integer"
                )))
            }
        };
        constraints.push(Constraint {
            covector: c.covector,
            value: Coeff::parse(&text, &mut w.params)?,
        });
    }
    let elim = r
        .eliminate
        .iter()
        .map(|&i| {
            i.checked_sub(1)
                .ok_or_else(|| Error::Parse("variables are 1-based".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::ok(restrict_potential(&w, &constraints, &elim)?.to_string()))
}

pub fn verify_teleman(path: &PathBuf, order: u32) -> Result<Report> {
    let mut t = table(&read(path)?)?;
    let y = ToricData::from_value(take(&mut t, "y")?)?;
    let x = ToricData::from_value(take(&mut t, "x")?)?;
    if let Some(k) = t.keys().next() {
        return Err(Error::Parse(format!("unknown key `{k}`")));
    }
    let rep = eqcorr::toric::verify_teleman(&y, &x, order)?;
    let mut text = rep.to_string();
    let sf = SemiFano::new(&x, order)?;
    let corr = correspondence_equivariant_potential(&y, &sf, &sf.mirror_map()?)?;
    text.push_str(&format!("\nW_L^π:          {corr}"));
    Ok(Report {
        mismatch: !rep.ok(),
        text,
    })
}
