//! Acceptance criteria 1–8, one PASS/FAIL line each.

mod common;
#[path = "../../core/tests/common/mod.rs"]
mod gen;

use std::time::{Duration, Instant};

use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

use common::{code, eqcorr, CORPUS};
use eqcorr::ainfinity::samples::point_algebra;
use eqcorr::ainfinity::{Chain, GradedBasis};
use eqcorr::hpt::{make_strong_contraction, pushforward_mc, transfer_algebra, Complex};
use eqcorr::novikov::{rat, Exponent, NovikovSeries, Scalar};
use eqcorr::toric::{
    correspondence_equivariant_potential, correspondence_h, equivariant_potential, maslov_index_correspondence,
    restrict_potential, Coeff, Constraint, LaurentPotential, SemiFano, SubtorusAction, ToricData,
};
use eqcorr::trimodule::{AInfinityTriModule, TriKey};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Check {
    let t = start.elapsed();
    ensure(t < limit, || format!("{what} took {t:?}, limit {limit:?}"))
}

fn hirzebruch(k: i64, areas: &[i64]) -> ToricData {
    ToricData::with_areas_int(
        &[&[1, 0], &[0, 1], &[-1, -k], &[0, -1]],
        &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
        areas,
    )
    .unwrap()
}

fn projective_teleman() -> Check {
    for n in 1..=3usize {
        let start = Instant::now();
        let line = format!("verify-teleman c{}_to_p{}.toml", n + 1, n);
        let out = eqcorr(&[], &line);
        within(start, Duration::from_secs(1), &line)?;
        let text = String::from_utf8_lossy(&out.stdout);
        ensure(code(&out) == 0 && text.starts_with("OK (exact)"), || {
            format!("ℙ^{n}: {text}")
        })?;
        let mut want: Vec<String> = (1..=n).map(|i| format!("z{i}")).collect();
        let inv: Vec<String> = (1..=n).map(|i| format!("z{i}^-1")).collect();
        want.push(format!("T^1 * {}", inv.join("*")));
        let want = format!("W_Y restricted: {}", want.join(" + "));
        ensure(text.lines().any(|l| l == want), || {
            format!("ℙ^{n}: expected `{want}` in\n{text}")
        })?;
    }
    Ok(())
}

/// `−log((1+√(1−4x))/2)` to `x^n`, by univariate rational arithmetic.
fn g4_oracle(n: usize) -> Vec<BigRational> {
    let mut root = vec![BigRational::zero(); n + 1];
    let mut binom = BigRational::one();
    for (j, r) in root.iter_mut().enumerate() {
        if j > 0 {
            binom = binom * (rat(1, 2) - rat(j as i64 - 1, 1)) / rat(j as i64, 1);
        }
        *r = &binom * num_traits::pow(rat(-4, 1), j);
    }
    let u: Vec<BigRational> = root
        .iter()
        .enumerate()
        .map(|(j, r)| if j == 0 { rat(0, 1) } else { r / rat(2, 1) })
        .collect();
    let mut out = vec![BigRational::zero(); n + 1];
    let mut pw = u.clone();
    for k in 1..=n {
        let sign = if k % 2 == 1 { -1 } else { 1 };
        for j in 0..=n {
            out[j] += &pw[j] * rat(sign, k as i64);
        }
        let mut next = vec![BigRational::zero(); n + 1];
        for i in 0..=n {
            for j in 0..=n - i {
                next[i + j] += &pw[i] * &u[j];
            }
        }
        pw = next;
    }
    out
}

fn factorial(n: i64) -> BigRational {
    (1..=n).fold(BigRational::one(), |acc, k| acc * rat(k, 1))
}

fn f2_mirror_map() -> Check {
    let start = Instant::now();
    let sf = SemiFano::new(&hirzebruch(2, &[0, 0, 1, 2]), 10).map_err(|e| e.to_string())?;
    let g = sf.g_series(3).map_err(|e| e.to_string())?;
    let e = sf
        .mori
        .generators
        .iter()
        .position(|c| *c == vec![1, 0, 1, -2])
        .ok_or("no exceptional class")?;
    let oracle = g4_oracle(10);
    for j in 1..=10i64 {
        let mut exps = vec![0u32; 2];
        exps[e] = j as u32;
        let got = g.coeff(&exps).as_rational().ok_or("λ in g4")?;
        let closed = factorial(2 * j - 1) / (factorial(j) * factorial(j));
        ensure(got == oracle[j as usize] && got == closed, || {
            format!("g4 at j={j}: {got} vs {} vs {closed}", oracle[j as usize])
        })?;
    }
    for order in 1..=8 {
        let sf = SemiFano::new(&hirzebruch(2, &[0, 0, 1, 2]), order).map_err(|e| e.to_string())?;
        let inv = sf.mirror_map().map_err(|e| e.to_string())?.inverse_text();
        let want = ["q̌_1 = q_1", "q̌_2 = q_2 * (1 + q_1*q_2^-2)"];
        ensure(inv == want, || format!("order {order}: {inv:?}"))?;
    }
    within(start, Duration::from_secs(5), "𝔽₂ mirror map")
}

fn f2_potentials() -> Check {
    let td = hirzebruch(2, &[0, 0, 1, 2]);
    let sf = SemiFano::new(&td, 8).map_err(|e| e.to_string())?;
    let mm = sf.mirror_map().map_err(|e| e.to_string())?;
    let w = sf.semifano_potential(&mm).to_string();
    let want = "z1 + z2 + q_2 * (1 + q_1*q_2^-2) * z2^-1 + q_1 * z1^-1*z2^-2";
    ensure(w == want, || format!("semi-Fano potential {w}"))?;
    let h = correspondence_h(&mm).map_err(|e| e.to_string())?;
    ensure(h[0].is_zero(), || format!("h₁ = {}", h[0]))?;
    let y = ToricData::affine_space(&td.areas).map_err(|e| e.to_string())?;
    let c = correspondence_equivariant_potential(&y, &sf, &mm)
        .map_err(|e| e.to_string())?
        .to_string();
    ensure(c == "-λ_2 * log(1 + q_1*q_2^-2)", || {
        format!("correspondence potential {c}")
    })
}

fn maslov_indices() -> Check {
    let p1p1 = ToricData::with_areas_int(
        &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]],
        &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
        &[0, 0, 2, 2],
    )
    .unwrap();
    let diag = |n| SubtorusAction::new(vec![vec![1; n]], vec![]).unwrap();
    // (stratum B, ray i, μ), 1-based facets of this fan
    for (b, i, want) in [(4, 1, 0), (4, 3, 4), (2, 1, 4), (2, 3, 0), (3, 2, 0), (3, 4, 4)] {
        let got = maslov_index_correspondence(&p1p1, &diag(2), &[b - 1], i - 1).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("β_{i}^D{b}: {got}, expected {want}"))?;
    }
    let rays: Vec<Vec<i64>> = vec![
        vec![1, 0, 0],
        vec![0, 1, 0],
        vec![0, 0, 1],
        vec![-1, 0, 0],
        vec![0, -1, 0],
        vec![0, 0, -1],
    ];
    let mut cones = Vec::new();
    for a in [0, 3] {
        for b in [1, 4] {
            for c in [2, 5] {
                cones.push(vec![a, b, c]);
            }
        }
    }
    let cube = ToricData::new(rays, cones, vec![Ratio::from_integer(1); 6]).unwrap();
    let got = maslov_index_correspondence(&cube, &diag(3), &[4, 5], 0).map_err(|e| e.to_string())?;
    ensure(got == -2, || format!("(ℙ¹)³ axis disc: {got}"))?;
    for td in [p1p1, cube, hirzebruch(2, &[0, 0, 1, 2])] {
        for i in 0..td.nrays() {
            let sub = SubtorusAction::new(vec![td.rays[i].clone()], vec![]).unwrap();
            let got = maslov_index_correspondence(&td, &sub, &[], i).map_err(|e| e.to_string())?;
            ensure(got == 2, || format!("basic class {} of {}: {got}", i + 1, td.name))?;
        }
    }
    Ok(())
}

fn restrict_xy(td: &ToricData, covector: Vec<i64>, eliminate: usize) -> Result<LaurentPotential, String> {
    let sub = SubtorusAction::new(vec![covector.clone()], vec![]).map_err(|e| e.to_string())?;
    let w = equivariant_potential(td, &sub).map_err(|e| e.to_string())?;
    let r = restrict_potential(
        &w,
        &[Constraint {
            covector,
            value: Coeff::one(),
        }],
        &[eliminate],
    )
    .map_err(|e| e.to_string())?;
    ensure(r.is_lambda_free(), || format!("log part survived: {r}"))?;
    Ok(r)
}

fn restrictions() -> Check {
    let t = Coeff::t_power;
    let choices: [[(i64, i64); 6]; 3] = [
        [(1, 2), (1, 1), (2, 1), (3, 2), (1, 3), (5, 2)],
        [(1, 1), (1, 1), (1, 1), (2, 1), (3, 1), (4, 1)],
        [(1, 4), (2, 3), (3, 5), (7, 4), (5, 3), (2, 5)],
    ];
    for ch in choices {
        let r: Vec<Ratio<i64>> = ch.iter().map(|&(p, q)| Ratio::new(p, q)).collect();
        // (ℙ¹)³ with base coordinates a_i on rays e_i and b_i on rays −e_i
        let (a, b) = (&r[..3], &r[3..]);
        let rays: Vec<Vec<i64>> = vec![
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
            vec![-1, 0, 0],
            vec![0, -1, 0],
            vec![0, 0, -1],
        ];
        let mut cones = Vec::new();
        for x in [0, 3] {
            for y in [1, 4] {
                for z in [2, 5] {
                    cones.push(vec![x, y, z]);
                }
            }
        }
        let cube = ToricData::new(rays, cones, r.clone()).map_err(|e| e.to_string())?;
        let got = restrict_xy(&cube, vec![1, 1, 1], 2)?;
        let mut want = LaurentPotential::with_default_vars(2);
        for (exps, c) in [
            (vec![1, 0], t(a[0])),
            (vec![0, 1], t(a[1])),
            (vec![-1, -1], t(a[2])),
            (vec![-1, 0], t(b[0])),
            (vec![0, -1], t(b[1])),
            (vec![1, 1], t(b[2])),
        ] {
            want.add_term(exps, &c);
        }
        ensure(got.terms == want.terms, || format!("(ℙ¹)³ at {r:?}: {got}"))?;

        // ℙ¹×ℙ¹ with areas a, b, c, d on rays x, y, 1/x, 1/y
        let (pa, pb, pc, pd) = (r[0], r[1], r[0] + r[2], r[1] + r[3]);
        let sq = ToricData::new(
            vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
            vec![pa, pb, pc, pd],
        )
        .map_err(|e| e.to_string())?;
        let got = restrict_xy(&sq, vec![1, 1], 1)?;
        let mut want = LaurentPotential::with_default_vars(1);
        want.add_term(vec![1], &t(pa).mul(&Coeff::one().add(&t(pd - pa))));
        want.add_term(vec![-1], &t(pb).mul(&Coeff::one().add(&t(pc - pb))));
        ensure(got.terms == want.terms, || format!("ℙ¹×ℙ¹ at {r:?}: {got}"))?;
    }
    Ok(())
}

fn engine_properties() -> Check {
    let start = Instant::now();
    let (mut structures, mut pushed, mut composed) = (0, 0, 0);
    for seed in 0..12u64 {
        let mut s = gen::sample(seed);
        let a = &s.algebra;
        ensure(a.basis().len() <= 4 && s.levels.len() <= 2, || {
            format!("seed {seed} is too large")
        })?;
        ensure(a.check_ainfinity(4).map_err(|e| e.to_string())?.is_empty(), || {
            format!("seed {seed}: input not A∞")
        })?;

        let c = make_strong_contraction(&Complex::of_algebra(a).map_err(|e| e.to_string())?, a.unit());
        let (h, it) = transfer_algebra(a, &c, 4).map_err(|e| e.to_string())?;
        let v = h.check_ainfinity(4).map_err(|e| e.to_string())?;
        ensure(v.is_empty(), || {
            format!(
                "seed {seed}: transferred structure fails at {}",
                v[0].describe(h.basis())
            )
        })?;

        for _ in 0..6 {
            let bh = gen::random_odd(&h, &mut s.rng, &s.levels);
            let Some(wh) = h.is_weak_mc(&bh).map_err(|e| e.to_string())? else {
                continue;
            };
            let ba = pushforward_mc(&bh, &it).map_err(|e| e.to_string())?;
            let wa = gen::potential_oracle(a, &ba);
            ensure(wa.as_ref() == Some(&wh.total), || {
                format!("seed {seed}: pushforward potential {wa:?} vs {}", wh.total)
            })?;
            pushed += usize::from(!bh.is_zero());
        }

        let d = AInfinityTriModule::diagonal(a).map_err(|e| e.to_string())?;
        let mut one = a.basis_chain(a.unit().unwrap());
        one.add_series(a.unit().unwrap(), &a.series(s.levels[0], rat(seed as i64 % 3 - 1, 1)))
            .unwrap();
        let cyc = d
            .is_left_cyclic(&one)
            .map_err(|e| e.to_string())?
            .ok_or("unit is not cyclic")?;
        let mut bm = gen::random_odd(a, &mut s.rng, &s.levels);
        for _ in 0..8 {
            if !bm.is_zero() {
                break;
            }
            bm = gen::random_odd(a, &mut s.rng, &s.levels);
        }
        let br = d.right.zero_chain();
        let bl = d.compose(&cyc, &br, &bm).map_err(|e| e.to_string())?;
        ensure(gen::deformed_oracle(&d, &bl, &bm, &br, &one).is_zero(), || {
            format!("seed {seed}: n(𝟏) ≠ 0")
        })?;
        let w = gen::potential_oracle(&d.left, &bl).ok_or("b'' not weak MC")?;
        let wm = gen::potential_oracle(&d.mid, &bm).ok_or("b' not weak MC")?;
        let wr = gen::potential_oracle(&d.right, &br).ok_or("b not weak MC")?;
        ensure(w == wm.add(&wr).unwrap(), || {
            format!("seed {seed}: W'' = {w}, W + W' = {}", wm.add(&wr).unwrap())
        })?;
        composed += usize::from(!bl.is_zero());
        structures += 1;
    }
    ensure(structures >= 10, || format!("only {structures} structures"))?;
    ensure(pushed >= 10 && composed >= 10, || {
        format!("too few nontrivial cochains: {pushed} pushed, {composed} composed")
    })?;
    within(start, Duration::from_secs(30), "engine properties")
}

fn lam(w: i64, h: i64) -> NovikovSeries {
    let tr = Exponent::int(3);
    let mut s = NovikovSeries::rational_term(Exponent::int(1), rat(w, 1), tr, 1);
    s = s
        .add(&NovikovSeries::monomial(Exponent::int(1), Scalar::lambda(1).scale(&rat(h, 1)), tr, 1).unwrap())
        .unwrap();
    s
}

/// Rank-two module `n(y0) = y1`, `n(y1) = γ·y0` over three point algebras.
fn synthetic(wl: NovikovSeries, wm: NovikovSeries, wr: NovikovSeries, gamma: NovikovSeries) -> AInfinityTriModule {
    let basis = GradedBasis::new(&[("y0", 0), ("y1", 1)], None).unwrap();
    let mut d = AInfinityTriModule::new(point_algebra(wl), point_algebra(wm), point_algebra(wr), basis).unwrap();
    d.add_unit_actions().unwrap();
    let one = NovikovSeries::rational_term(Exponent::ZERO, rat(1, 1), Exponent::int(3), 1);
    d.add_entry(&TriKey::new(&[], 0, &[], &[]), &Chain::single(1, one))
        .unwrap();
    if !gamma.is_zero() {
        d.add_entry(&TriKey::new(&[], 1, &[], &[]), &Chain::single(0, gamma))
            .unwrap();
    }
    d
}

fn obstruction_square() -> Check {
    // W'' = W + W' with h-balance carried by γ
    for (l, m, r) in [
        ((3, 1), (2, 0), (1, 3)),
        ((1, -2), (0, 1), (1, 1)),
        ((2, 2), (1, 1), (1, 0)),
    ] {
        let (wl, wm, wr) = (lam(l.0, l.1), lam(m.0, m.1), lam(r.0, r.1));
        let gamma = wm.add(&wr).unwrap().sub(&wl).unwrap();
        let d = synthetic(wl, wm, wr, gamma);
        ensure(d.check_trimodule(3).map_err(|e| e.to_string())?.is_empty(), || {
            "synthetic module is not A∞".into()
        })?;
        let z = d.left.zero_chain();
        for y in 0..2 {
            let rep = d
                .obstruction_square(&z, &z, &z, &d.left.basis_chain(y))
                .map_err(|e| e.to_string())?;
            ensure(rep.vanishing_signs().len() == 1, || {
                format!("balanced {l:?},{m:?},{r:?}: signs {:?}", rep.vanishing_signs())
            })?;
        }
    }
    // unbalanced, λ-free
    for (wl, wm, wr) in [(5, 1, 1), (1, 2, 0), (0, 0, 3)] {
        let (wl, wm, wr) = (lam(wl, 0), lam(wm, 0), lam(wr, 0));
        let gap = wl.sub(&wm).unwrap().sub(&wr).unwrap();
        let d = synthetic(wl, wm, wr, NovikovSeries::zero(Exponent::int(3), 1));
        let z = d.left.zero_chain();
        for y in 0..2 {
            let yc = d.left.basis_chain(y);
            let rep = d.obstruction_square(&z, &z, &z, &yc).map_err(|e| e.to_string())?;
            let want = yc.scale(&gap).unwrap();
            ensure(rep.plus == want && rep.minus == want, || {
                format!("unbalanced residual {:?}", rep.plus)
            })?;
        }
    }
    Ok(())
}

fn determinism() -> Check {
    for (line, _) in CORPUS {
        let runs = [
            eqcorr(&[], line),
            eqcorr(&[], line),
            eqcorr(&["--jobs", "1"], line),
            eqcorr(&["--jobs", "4"], line),
        ];
        for r in &runs[1..] {
            ensure(r.stdout == runs[0].stdout && r.status == runs[0].status, || {
                format!("`{line}` differs between runs")
            })?;
        }
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("ℙⁿ Teleman identity, n = 1,2,3", projective_teleman),
        ("𝔽₂ g₄ coefficients and inverse mirror map", f2_mirror_map),
        ("𝔽₂ semi-Fano and correspondence potentials", f2_potentials),
        ("Maslov indices", maslov_indices),
        ("restriction identities at three area choices", restrictions),
        ("A∞ engine on randomized structures", engine_properties),
        ("obstruction square", obstruction_square),
        ("CLI determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(()) => println!("PASS {}: {name}", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {}: {name}: {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
