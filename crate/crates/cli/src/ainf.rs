use std::path::PathBuf;

use eqcorr::ainfinity::AInfinityAlgebra;
use eqcorr::hpt::{make_strong_contraction, transfer_algebra, Complex};
use eqcorr::trimodule::AInfinityTriModule;
use eqcorr::{Error, Exponent, Result};

use crate::{read, Report};

pub struct Defaults {
    pub truncation: Exponent,
    pub lambda_cap: u32,
}

fn is_module(text: &str) -> bool {
    text.lines().any(|l| l.trim() == "[module]")
}

fn algebra(text: &str, d: &Defaults) -> Result<AInfinityAlgebra> {
    AInfinityAlgebra::parse_with(text, Some(d.truncation), d.lambda_cap)
}

fn module(text: &str, d: &Defaults) -> Result<eqcorr::trimodule::text::TriModuleFile> {
    AInfinityTriModule::parse_file_with(text, Some(d.truncation), d.lambda_cap)
}

pub fn check(path: &PathBuf, d: &Defaults, arity: usize) -> Result<Report> {
    let text = read(path)?;
    let mut lines = Vec::new();
    if is_module(&text) {
        let m = module(&text, d)?.module;
        for v in m.check_trimodule(arity)? {
            let names = |b: &eqcorr::ainfinity::GradedBasis, xs: &[usize]| {
                xs.iter().map(|&i| b.name(i)).collect::<Vec<_>>().join(",")
            };
            let k = &v.key;
            lines.push(format!(
                "fails: tri-module relation at T^{} on ({}; {}; {}; {})",
                v.energy,
                names(m.left.basis(), &k.left),
                m.basis().name(k.y),
                names(m.mid.basis(), &k.mid),
                names(m.right.basis(), &k.right)
            ));
        }
    } else {
        let a = algebra(&text, d)?;
        for v in a.check_ainfinity(arity)? {
            lines.push(format!("fails: A∞ relation {}", v.describe(a.basis())));
        }
        if a.unit().is_some() {
            for v in a.check_unit()? {
                lines.push(format!("fails: unit axiom {}", v.describe(a.basis())));
            }
        }
    }
    let mismatch = !lines.is_empty();
    if !mismatch {
        lines.push(format!("OK: relations hold up to arity {arity}"));
    }
    Ok(Report {
        text: lines.join("\n"),
        mismatch,
    })
}

pub fn transfer(path: &PathBuf, d: &Defaults, arity: usize) -> Result<Report> {
    let a = algebra(&read(path)?, d)?;
    let c = make_strong_contraction(&Complex::of_algebra(&a)?, a.unit());
    let problems = c.check();
    if !problems.is_empty() {
        return Err(Error::Invariant(format!("contraction: {}", problems.join("; "))));
    }
    let (h, it) = transfer_algebra(&a, &c, arity)?;
    Ok(Report::ok(format!(
        "[transferred]\n{}\n[inclusion]\n{}",
        h.to_text().trim_end(),
        it.to_text("i").trim_end()
    )))
}

pub fn compose(path: &PathBuf, d: &Defaults) -> Result<Report> {
    let f = module(&read(path)?, d)?;
    let m = &f.module;
    let one = m
        .cyclic_chain()
        .ok_or_else(|| Error::Parse("[module] needs `cyclic`".into()))?;
    let cyc = m
        .is_left_cyclic(&one)?
        .ok_or_else(|| Error::Invariant("the cyclic element is not left cyclic".into()))?;
    let b = f.chain_or_zero("right")?;
    let bm = f.chain_or_zero("middle")?;
    let bl = m.compose(&cyc, &b, &bm)?;
    let residual = m.deformed_differential(&bl, &bm, &b, &one)?;
    let pot = |a: &AInfinityAlgebra, c: &eqcorr::ainfinity::Chain| -> Result<Option<eqcorr::NovikovSeries>> {
        Ok(a.is_weak_mc(c)?.map(|p| p.total))
    };
    let (w, wm, wl) = (pot(&m.right, &b)?, pot(&m.mid, &bm)?, pot(&m.left, &bl)?);
    let show = |p: &Option<eqcorr::NovikovSeries>| p.as_ref().map_or("not weak MC".to_string(), |s| s.to_string());
    let additive = match (&w, &wm, &wl) {
        (Some(w), Some(wm), Some(wl)) => w.add(wm)?.sub(wl)?.is_zero(),
        _ => false,
    };
    let text = format!(
        "b'' = {}\nW = {}\nW' = {}\nW'' = {}\nn(1) = {}\nadditivity W + W' = W'': {}",
        bl.to_text(m.left.basis()),
        show(&w),
        show(&wm),
        show(&wl),
        residual.to_text(m.basis()),
        if additive { "ok" } else { "FAILS" }
    );
    Ok(Report {
        text,
        mismatch: !additive || !residual.is_zero(),
    })
}

pub fn obstruction(path: &PathBuf, d: &Defaults) -> Result<Report> {
    let f = module(&read(path)?, d)?;
    let m = &f.module;
    let y = f
        .chain("y")?
        .ok_or_else(|| Error::Parse("[deformation] needs `y`".into()))?;
    let r = m.obstruction_square(
        &f.chain_or_zero("left")?,
        &f.chain_or_zero("middle")?,
        &f.chain_or_zero("right")?,
        &y,
    )?;
    let signs = r.vanishing_signs();
    let text = format!(
        "n^2(y) = {}\nW'' - W - W' = {}\nλ-part = {}\nresidual(+) = {}\nresidual(-) = {}\nvanishing signs: {}",
        r.n_squared.to_text(m.basis()),
        r.potential_gap,
        r.lambda_part,
        r.plus.to_text(m.basis()),
        r.minus.to_text(m.basis()),
        if signs.is_empty() {
            "none".to_string()
        } else {
            signs.iter().map(|s| format!("{s:+}")).collect::<Vec<_>>().join(", ")
        }
    );
    Ok(Report {
        text,
        mismatch: signs.len() != 1,
    })
}
