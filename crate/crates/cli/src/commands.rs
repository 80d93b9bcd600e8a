use serde_json::{json, Value};

use quatforms::arith::poly::char_poly;
use quatforms::arith::rat::{is_prime, parse_rat, prime_factors, rat, to_string_rat, Rat};
use quatforms::arith::ring::{RatField, Zpm};
use quatforms::autoforms::hecke::JsonElem;
use quatforms::autoforms::{
    build_space_padic, build_space_rational, eigensystems, hecke_operator, ClassicalWeight, HeckeLabel, LevelSpec,
};
use quatforms::levelraising::raise::scan_level;
use quatforms::levelraising::witness::test_primes;
use quatforms::levelraising::{
    build_oldnew, hida_slice_scan, very_eisenstein_flag, witness_search, EisensteinConfig, ModSystem, ScanConfig,
};
use quatforms::overconvergent::{char_series_slopes, colex_fixed_points, unit_eigenvalues_mod_p, up_matrix, WeightChar};
use quatforms::quaternion::mass;
use quatforms::{Error, Result};

use crate::cache::{Cache, Lookup};
use crate::config::Config;

/// Result of a command; everything except `cache` is deterministic.
pub struct Outcome {
    pub inputs: Value,
    pub outputs: Value,
    pub notes: Vec<String>,
    pub cache: Option<Lookup>,
}

pub struct Ctx {
    pub cfg: Config,
    pub cache: Cache,
}

impl Ctx {
    pub fn new(cfg: Config) -> Self {
        let cache = Cache::new(cfg.cache_dir());
        Ctx { cfg, cache }
    }
}

fn check_q(q: u64) -> Result<()> {
    if !is_prime(q) {
        return Err(Error::Input(format!("q = {q} must be prime")));
    }
    Ok(())
}

/// Smallest odd prime not dividing n and outside `avoid`.
fn default_prime(n: u64, avoid: &[u64]) -> u64 {
    (3..).find(|&l| is_prime(l) && n % l != 0 && !avoid.contains(&l)).unwrap()
}

pub fn classset(ctx: &Ctx, q: u64, level: u64) -> Result<Outcome> {
    check_q(q)?;
    let (cs, hit) = ctx.cache.class_set(q, level, ctx.cfg.prime_bound)?;
    let target = mass(q, level);
    Ok(Outcome {
        inputs: json!({"q": q, "M": level}),
        outputs: json!({
            "h": cs.h(),
            "unit_orders": cs.unit_orders(),
            "mass": to_string_rat(&target),
            "mass_sum": to_string_rat(&cs.mass_sum()),
            "mass_ok": cs.mass_ok(),
            "neighbor_prime": cs.neighbor_prime,
        }),
        notes: vec![],
        cache: Some(hit),
    })
}

pub fn hecke(ctx: &Ctx, q: u64, level: u64, p: Option<u64>, k: u32, ops: &[HeckeLabel]) -> Result<Outcome> {
    check_q(q)?;
    let avoid: Vec<u64> = ops
        .iter()
        .filter_map(|l| match l {
            HeckeLabel::T(v) | HeckeLabel::S(v) => Some(*v),
            HeckeLabel::U => None,
        })
        .collect();
    let p = p.unwrap_or_else(|| default_prime(q * level, &avoid));
    let lv = LevelSpec::from_level(q, level, p)?;
    let weight = ClassicalWeight::new(k)?;
    let (cs, hit) = ctx.cache.class_set(q, level, ctx.cfg.prime_bound)?;
    let inputs = json!({"q": q, "M": level, "p": p, "k": k, "ops": ops.iter().map(|l| l.to_string()).collect::<Vec<_>>()});
    let mut notes = Vec::new();
    let outputs = if k == 2 {
        let sp = build_space_rational(lv, &cs)?;
        let mats = ops.iter().map(|&l| hecke_operator(&sp, l)).collect::<Result<Vec<_>>>()?;
        let systems = eigensystems(&mats)?;
        notes.push("exact rational arithmetic".into());
        json!({
            "dim": sp.dim,
            "matrices": mats.iter().map(|m| m.to_json(&RatField)).collect::<Vec<_>>(),
            "eigensystems": systems.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
        })
    } else {
        let m = ctx.cfg.precision;
        let sp = build_space_padic(lv, weight, m, &cs)?;
        let z = Zpm::new(p, m)?;
        let mats = ops.iter().map(|&l| hecke_operator(&sp, l)).collect::<Result<Vec<_>>>()?;
        notes.push(format!("coefficients modulo {p}^{m}"));
        json!({
            "dim": sp.dim,
            "matrices": mats.iter().map(|h| h.to_json(&z)).collect::<Vec<_>>(),
            "char_polys": mats.iter().map(|h| {
                let f = char_poly(&z, &h.matrix);
                json!({"operator": h.label.to_string(), "coeffs": f.coeffs.iter().map(|c| z.elem_json(c)).collect::<Vec<_>>()})
            }).collect::<Vec<_>>(),
        })
    };
    Ok(Outcome { inputs, outputs, notes, cache: Some(hit) })
}

/// "k=4", "k=4,w=6" or "s=<rational>,i=<int>".
pub fn parse_weight(p: u64, desc: &str) -> Result<WeightChar> {
    let mut k = None;
    let mut w = None;
    let mut s = None;
    let mut i = 0u64;
    for part in desc.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (key, val) = part.split_once('=').ok_or_else(|| Error::Input(format!("bad weight component {part:?}")))?;
        let bad = || Error::Input(format!("bad value in {part:?}"));
        match key.trim() {
            "k" => k = Some(val.trim().parse::<u32>().map_err(|_| bad())?),
            "w" => w = Some(val.trim().parse::<u32>().map_err(|_| bad())?),
            "s" => s = Some(parse_rat(val.trim())?),
            "i" => i = val.trim().parse().map_err(|_| bad())?,
            _ => return Err(Error::Input(format!("unknown weight key {key:?}"))),
        }
    }
    match (k, s) {
        (Some(k), None) => WeightChar::classical(p, k, w.unwrap_or(k)),
        (None, Some(s)) => WeightChar::new(p, i, &s),
        _ => Err(Error::Input("weight needs exactly one of k=… or s=…".into())),
    }
}

pub fn slopes(ctx: &Ctx, q: u64, level: u64, p: u64, weight: &str, n: Option<usize>, m: Option<u32>) -> Result<Outcome> {
    check_q(q)?;
    let n = n.unwrap_or(ctx.cfg.truncation);
    let m = m.unwrap_or(ctx.cfg.precision);
    let kappa = parse_weight(p, weight)?;
    let lv = scan_level(q, level, p)?;
    if lv.alpha != 1 {
        return Err(Error::Input("the p-part of the level must be at most p".into()));
    }
    let (cs, hit) = ctx.cache.class_set(q, lv.eichler_level(), ctx.cfg.prime_bound)?;
    let up = up_matrix(lv, &kappa, n, m, &cs)?;
    let rep = char_series_slopes(&up)?;
    let unit = unit_eigenvalues_mod_p(&up).ok();
    let segs: Vec<Value> = rep
        .polygon
        .segments
        .iter()
        .map(|s| {
            json!({
                "slope": to_string_rat(&s.slope),
                "multiplicity": s.mult,
                "certified": s.certified && s.slope < rep.reliable_below,
            })
        })
        .collect();
    let mut notes = vec![format!("truncation N = {n}, coefficients modulo {p}^{m}")];
    if up.scale_val() > 0 {
        notes.push(format!("projector scale {} costs {} digit(s) per coefficient", up.scale, up.scale_val()));
    }
    Ok(Outcome {
        inputs: json!({"q": q, "M": level, "p": p, "weight": weight, "N": n, "m": m}),
        outputs: json!({
            "eichler_level": lv.eichler_level(),
            "segments": segs,
            "reliable_below": to_string_rat(&rep.reliable_below),
            "slope_zero_multiplicity": rep.multiplicity_of(&rat(0)),
            "unit_eigenvalues_mod_p": unit,
        }),
        notes,
        cache: Some(hit),
    })
}

pub struct RaiseArgs {
    pub q: u64,
    pub level: u64,
    pub p: u64,
    pub ell: u64,
    pub weights: Vec<u32>,
    pub m: Option<u32>,
    pub witness: bool,
}

pub fn raise(ctx: &Ctx, a: &RaiseArgs) -> Result<Outcome> {
    check_q(a.q)?;
    let prec = a.m.unwrap_or(ctx.cfg.precision);
    let lv = scan_level(a.q, a.level, a.p)?;
    let (cs, hit) = ctx.cache.class_set(a.q, lv.eichler_level(), ctx.cfg.prime_bound)?;
    let branch: Vec<u64> = (2..ctx.cfg.prime_bound)
        .filter(|&v| is_prime(v) && lv.is_good(v) && v != a.ell)
        .take(3)
        .collect();
    let cfg = ScanConfig {
        q: a.q,
        level: lv.eichler_level(),
        p: a.p,
        ell: a.ell,
        weights: a.weights.clone(),
        prec,
        branch_primes: branch,
    };
    let scan = hida_slice_scan(&cfg, &cs)?;
    let mut outputs = json!({
        "scan": serde_json::to_value(&scan).expect("scan report serializes"),
        "valuations": a.weights.iter().map(|&k| json!({"k": k, "valuation": scan.valuation(k)})).collect::<Vec<_>>(),
    });
    let mut notes = vec![format!("coefficients modulo {}^{prec}", a.p)];
    if scan.rows.iter().any(|r| r.ambiguous) {
        notes.push("some rows have rank > 1 or several seeds; valuations there are elementary divisors".into());
    }
    let u = build_space_rational(lv, &cs)?;
    let old = seed_system(&u, &scan.seed, a.ell, ctx.cfg.prime_bound.min(50))?;
    let tv: Vec<(u64, Rat)> = old.iter().filter_map(|(l, x)| if let HeckeLabel::T(v) = l { Some((*v, x.clone())) } else { None }).collect();
    let sv: Vec<(u64, Rat)> = tv.iter().map(|(v, _)| (*v, rat(1))).collect();
    let mut ecfg = EisensteinConfig { conductor_bound: ctx.cfg.conductor_bound, ..Default::default() };
    ecfg.excluded = vec![a.q, a.p, a.ell];
    ecfg.excluded.extend(prime_factors(lv.m).into_iter().map(|(f, _)| f));
    let flag = very_eisenstein_flag(&ModSystem::from_rational(a.p, 1, &tv, &sv)?, &ecfg);
    outputs["seed_eisenstein"] = serde_json::to_value(&flag).expect("flag serializes");
    if a.witness {
        let level_v = lv.eichler_level() * a.ell;
        let (cv, _) = ctx.cache.class_set(a.q, level_v, ctx.cfg.prime_bound)?;
        let v = build_space_rational(LevelSpec::from_level(a.q, level_v, a.p)?, &cv)?;
        let d = build_oldnew(u, v, a.ell)?;
        let primes = test_primes(&d, 50);
        let mut sys: Vec<(HeckeLabel, Rat)> = old.into_iter().filter(|(l, _)| match l {
            HeckeLabel::T(x) => primes.contains(x) || *x == a.ell,
            _ => false,
        }).collect();
        sys.push((HeckeLabel::S(a.ell), rat(1)));
        let w = witness_search(&d, &sys, a.p, 1, 50)?;
        outputs["witness"] = serde_json::to_value(&w).expect("witness serializes");
    }
    Ok(Outcome {
        inputs: json!({"q": a.q, "M": a.level, "p": a.p, "ell": a.ell, "weights": a.weights, "m": prec, "witness": a.witness}),
        outputs,
        notes,
        cache: Some(hit),
    })
}

/// Full weight-2 eigenvalues (T_v for good v ≤ bound and T_ℓ) of the seed
/// system identified by its branch eigenvalues.
fn seed_system(
    u: &quatforms::autoforms::RationalSpace,
    seed: &[(String, String)],
    ell: u64,
    bound: u64,
) -> Result<Vec<(HeckeLabel, Rat)>> {
    let mut labels: Vec<HeckeLabel> = Vec::new();
    for (l, _) in seed {
        labels.push(l.parse()?);
    }
    for v in (2..=bound).filter(|&v| is_prime(v) && u.level.is_good(v)) {
        if !labels.contains(&HeckeLabel::T(v)) {
            labels.push(HeckeLabel::T(v));
        }
    }
    if !labels.contains(&HeckeLabel::T(ell)) {
        labels.push(HeckeLabel::T(ell));
    }
    let mats = labels.iter().map(|&l| hecke_operator(u, l)).collect::<Result<Vec<_>>>()?;
    let want: Vec<(HeckeLabel, Rat)> = seed.iter().map(|(l, x)| Ok((l.parse()?, parse_rat(x)?))).collect::<Result<_>>()?;
    for sys in eigensystems(&mats)? {
        if want.iter().all(|(l, x)| sys.rational(*l).as_ref() == Some(x)) {
            return labels
                .iter()
                .map(|&l| sys.rational(l).map(|x| (l, x)).ok_or_else(|| Error::Input(format!("{l} eigenvalue of the seed is not rational"))))
                .collect();
        }
    }
    Err(Error::Internal("seed system not found among weight-2 eigensystems".into()))
}

pub fn colex(g: usize, n: usize, p: u64, n_prime: u32) -> Result<Outcome> {
    if !is_prime(p) {
        return Err(Error::Input(format!("{p} is not prime")));
    }
    let r = colex_fixed_points(g, n, p, n_prime)?;
    let expected = binom((n + g - 1) as u64, (g - 1) as u64);
    Ok(Outcome {
        inputs: json!({"g": g, "N": n, "p": p, "N_prime": n_prime}),
        outputs: json!({
            "kernel_dim": r.dim(),
            "boundary_count": expected,
            "boundary_only": r.boundary_only,
            "result": serde_json::to_value(&r).expect("colex result serializes"),
        }),
        notes: vec!["computed exactly over Q".into()],
        cache: None,
    })
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
