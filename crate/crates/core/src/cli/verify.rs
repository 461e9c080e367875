//! Verification drivers. Each record carries the raw data its verdicts are
//! computed from.

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::char_sums::PolySpec;
use crate::cli::session::{JobSpec, Selection, Session};
use crate::cyclotomic::{CycloJson, CycloRing};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::local::{default_precision, LocalContext};
use crate::polygon::{hodge, rat_str, NewtonPolygon, PolygonJson, Rational};
use crate::strat::{
    gnp_power, gnp_twisted, hasse_full_eval, hasse_twisted_eval, hs_power, hs_twisted, OrbitDecomposition,
    ShiftTable,
};

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub theorem: String,
    pub parameters: Value,
    /// results outside the stated hypotheses; failures do not count
    pub informational: bool,
    pub records: Vec<Value>,
    pub summary: Summary,
}

impl VerificationReport {
    fn new(theorem: &str, parameters: Value, informational: bool, records: Vec<(Value, bool)>) -> Self {
        let passed = records.iter().filter(|r| r.1).count();
        let total = records.len();
        VerificationReport {
            theorem: theorem.into(),
            parameters,
            informational,
            records: records.into_iter().map(|r| r.0).collect(),
            summary: Summary { total, passed, failed: total - passed },
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }
}

/// The results checked by `verify`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Theorem {
    /// twisted polygons lie above HS, and equal it when p = 1 mod de
    Prop31,
    /// twisted polygon equals GNP exactly when the Hasse polynomial is nonzero
    Thm31,
    /// L(P(x^d)) factors into twisted L-functions
    Prop41,
    /// power polygons lie above HS(d,e,p), and equal H(de) when p = 1 mod de
    Prop42,
    /// power polygon equals GNP exactly when the full Hasse polynomial is nonzero
    Thm41,
    /// q-adic valuation of Gauss sums
    Stickelberger,
    /// closed form for Y_n^(s) and Sigma_n against exhaustive search
    Lemma22,
}

fn pj(np: &NewtonPolygon) -> PolygonJson {
    np.to_json()
}

fn job_json(job: &JobSpec) -> Value {
    json!({ "p": job.p, "m": job.m, "d": job.d, "e": job.e, "kappa": job.kappa })
}

fn require_twisted(job: &JobSpec) -> Result<()> {
    job.validate()?;
    if job.kappa == 0 {
        return Err(Error::BadParameters("this check needs --kappa >= 1".into()));
    }
    Ok(())
}

fn require_large(job: &JobSpec, allow_small: bool) -> Result<()> {
    if job.p < 2 * job.d * job.e {
        if !allow_small {
            return Err(Error::BadParameters(format!(
                "p = {} < 2de = {}; pass --allow-small to run anyway",
                job.p,
                2 * job.d * job.e
            )));
        }
        eprintln!("warning: p < 2de, outside the range of the stratification theorem");
    }
    Ok(())
}

pub fn prop31(s: &Session, job: &JobSpec, sel: &Selection) -> Result<VerificationReport> {
    require_twisted(job)?;
    let polys = sel.polys(&job.base()?, job.e)?;
    let ls = s.twisted_ls(job, &polys)?;
    let nps = s.polygons(&s.twisted_context(job)?, &ls, job.m)?;
    let hs = hs_twisted(job.d, job.e, job.p % job.d, job.kappa)?;
    let split = job.p % (job.d * job.e) == 1;
    let records = polys
        .iter()
        .zip(&nps)
        .map(|(poly, np)| {
            let above = np.lies_above(&hs)?;
            let equal = np == &hs;
            let pass = above && (!split || equal);
            Ok((
                json!({ "poly": poly.encodings(), "degree": np.length(), "np": pj(np), "hs": pj(&hs),
                        "above_hs": above, "equals_hs": equal, "pass": pass }),
                pass,
            ))
        })
        .collect::<Result<_>>()?;
    let mut params = job_json(job);
    params["p_split"] = json!(split);
    Ok(VerificationReport::new("prop31", params, false, records))
}

pub fn thm31(s: &Session, job: &JobSpec, sel: &Selection, allow_small: bool, cap: usize) -> Result<VerificationReport> {
    require_twisted(job)?;
    require_large(job, allow_small)?;
    let base = job.base()?;
    let polys = sel.polys(&base, job.e)?;
    let ls = s.twisted_ls(job, &polys)?;
    let nps = s.polygons(&s.twisted_context(job)?, &ls, job.m)?;
    let hs = hs_twisted(job.d, job.e, job.p % job.d, job.kappa)?;
    let gnp = gnp_twisted(job.p, job.d, job.e, job.kappa)?;
    let records = polys
        .par_iter()
        .zip(&nps)
        .map(|(poly, np)| {
            let mut h = base.one();
            for n in 1..=job.e as usize {
                h = base.mul(&h, &hasse_twisted_eval(poly, job.d, job.kappa, n, cap)?);
            }
            let nonzero = !base.is_zero(&h);
            let above = np.lies_above(&hs)?;
            let generic = np == &gnp;
            let pass = above && generic == nonzero;
            Ok((
                json!({ "poly": poly.encodings(), "np": pj(np), "hs": pj(&hs), "gnp": pj(&gnp),
                        "hasse": base.encode(&h), "hasse_nonzero": nonzero, "above_hs": above,
                        "equals_gnp": generic, "pass": pass }),
                pass,
            ))
        })
        .collect::<Result<_>>()?;
    Ok(VerificationReport::new("thm31", job_json(job), job.d < 3 || job.p < 2 * job.d * job.e, records))
}

pub fn prop41(s: &Session, job: &JobSpec, sel: &Selection) -> Result<VerificationReport> {
    job.validate()?;
    let polys = sel.polys(&job.base()?, job.e)?;
    let lhs = s.power_ls(job, &polys)?;
    let ring = CycloRing::new(job.p, job.d)?;
    let records = polys
        .iter()
        .zip(&lhs)
        .map(|(poly, l)| {
            let factors = s.engine.power_factors(poly, job.d)?;
            let rhs = s.engine.power_factor_product(poly, job.d)?;
            let lhs = l.embed_into(&ring)?;
            let pass = lhs == rhs;
            let fjson: Vec<Value> = factors
                .iter()
                .map(|f| json!({ "kappa": f.kappa, "orbit_size": f.orbit_size, "degree": f.l.degree() }))
                .collect();
            Ok((
                json!({ "poly": poly.encodings(), "factors": fjson, "lhs": lhs.to_json(),
                        "rhs": rhs.to_json(), "pass": pass }),
                pass,
            ))
        })
        .collect::<Result<_>>()?;
    Ok(VerificationReport::new("prop41", job_json(job), false, records))
}

pub fn prop42(s: &Session, job: &JobSpec, sel: &Selection) -> Result<VerificationReport> {
    job.validate()?;
    let polys = sel.polys(&job.base()?, job.e)?;
    let ls = s.power_ls(job, &polys)?;
    let nps = s.polygons(&s.power_context(job)?, &ls, job.m)?;
    let hs = hs_power(job.d, job.e, job.p % job.d)?;
    let split = job.p % (job.d * job.e) == 1;
    let h = hodge(job.d * job.e)?;
    let records = polys
        .iter()
        .zip(&nps)
        .map(|(poly, np)| {
            let above = np.lies_above(&hs)?;
            let equal = np == &h;
            let pass = above && (!split || equal);
            Ok((
                json!({ "poly": poly.encodings(), "degree": np.length(), "np": pj(np), "hs": pj(&hs),
                        "above_hs": above, "equals_hodge": equal, "pass": pass }),
                pass,
            ))
        })
        .collect::<Result<_>>()?;
    let mut params = job_json(job);
    params["p_split"] = json!(split);
    Ok(VerificationReport::new("prop42", params, false, records))
}

pub fn thm41(s: &Session, job: &JobSpec, sel: &Selection, allow_small: bool, cap: usize) -> Result<VerificationReport> {
    job.validate()?;
    require_large(job, allow_small)?;
    let base = job.base()?;
    let polys = sel.polys(&base, job.e)?;
    let ls = s.power_ls(job, &polys)?;
    let nps = s.polygons(&s.power_context(job)?, &ls, job.m)?;
    let hs = hs_power(job.d, job.e, job.p % job.d)?;
    let gnp = gnp_power(job.p, job.d, job.e)?;
    let records = polys
        .par_iter()
        .zip(&nps)
        .map(|(poly, np)| {
            let h = hasse_full_eval(poly, job.d, cap)?;
            let nonzero = !base.is_zero(&h);
            let above = np.lies_above(&hs)?;
            let generic = np == &gnp;
            let pass = above && generic == nonzero;
            Ok((
                json!({ "poly": poly.encodings(), "np": pj(np), "hs": pj(&hs), "gnp": pj(&gnp),
                        "hasse": base.encode(&h), "hasse_nonzero": nonzero, "above_hs": above,
                        "equals_gnp": generic, "pass": pass }),
                pass,
            ))
        })
        .collect::<Result<_>>()?;
    Ok(VerificationReport::new("thm41", job_json(job), job.d < 3 || job.p < 2 * job.d * job.e, records))
}

/// Prime powers checked when no field is given.
pub const STICKELBERGER_FIELDS: [u64; 10] = [3, 4, 5, 7, 8, 9, 11, 13, 16, 25];

fn prime_power(q: u64) -> Result<(u64, u32)> {
    let p = (2..=q).find(|p| q % p == 0).ok_or_else(|| Error::BadParameters(format!("bad field size {q}")))?;
    let mut m = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        m += 1;
    }
    if r != 1 {
        return Err(Error::BadParameters(format!("{q} is not a prime power")));
    }
    Ok((p, m))
}

/// `v_q(G(chi^kappa)) = mu_{d-kappa}` for every `d | q - 1`, `2 <= d <= max_d`.
pub fn stickelberger(s: &Session, fields: &[u64], max_d: u64) -> Result<VerificationReport> {
    let mut records = Vec::new();
    for &q in fields {
        let (p, m) = prime_power(q)?;
        let field = FieldSpec::new(p, m as usize)?;
        for d in (2..=max_d).filter(|d| (q - 1) % d == 0) {
            let chi = crate::char_sums::MultiplicativeCharacter::new(&field, d)?;
            let ctx = LocalContext::for_character(&chi, s.precision.unwrap_or_else(|| default_precision(m, 1)))?;
            let orbits = OrbitDecomposition::new(d, p)?;
            for kappa in 1..d {
                let g = s.engine.gauss_sum(&field, d, kappa)?;
                let v = ctx.valuation(&g)?.ok_or_else(|| Error::InternalInconsistency("Gauss sum is zero".into()))?;
                let vq = v / Rational::from_integer(m.into());
                let mu = orbits.mu(d - kappa);
                let pass = &vq == mu;
                records.push((
                    json!({ "q": q, "d": d, "kappa": kappa, "gauss_sum": CycloJson::from(&g),
                            "valuation_q": rat_str(&vq), "mu": rat_str(mu), "pass": pass }),
                    pass,
                ));
            }
        }
    }
    Ok(VerificationReport::new("stickelberger", json!({ "fields": fields, "max_d": max_d }), false, records))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut v = rest.clone();
            v.insert(pos, n);
            out.push(v);
        }
    }
    out
}

/// Random `(p, d, e, kappa, s, n)` with `2de <= p <= max_p`, `n <= max_n`.
pub fn lemma22(draws: usize, seed: u64, max_p: u64, max_n: usize, cap: usize) -> Result<VerificationReport> {
    let primes: Vec<u64> = (5..=max_p).filter(|&n| crate::field::poly::is_prime(n)).collect();
    if primes.is_empty() {
        return Err(Error::BadParameters("no prime in range".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let perms: Vec<Vec<Vec<usize>>> = (0..=max_n).map(permutations).collect();
    let mut records = Vec::new();
    while records.len() < draws {
        let p = primes[rng.gen_range(0..primes.len())];
        let d = rng.gen_range(2..=p / 2);
        let e = rng.gen_range(1..=(p / (2 * d)).max(1));
        if 2 * d * e > p || p.gcd(&(d * e)) != 1 {
            continue;
        }
        let kappa = rng.gen_range(1..d);
        let t = crate::strat::TwistCombinatorics::new(p, d, e, kappa)?;
        let s = rng.gen_range(0..t.period());
        let n = rng.gen_range(1..=(e as usize).min(max_n));
        let table: &ShiftTable = &t.tables[s];
        let weights: Vec<i64> = perms[n].iter().map(|sig| table.weight(sig)).collect();
        let best = *weights.iter().min().unwrap();
        let mut argmin: Vec<Vec<usize>> =
            perms[n].iter().zip(&weights).filter(|(_, &w)| w == best).map(|(s, _)| s.clone()).collect();
        argmin.sort();
        let mut sigma: Vec<Vec<usize>> = table.sigma_set(n, cap)?.into_iter().map(|(s, _)| s).collect();
        sigma.sort();
        let closed = table.y(n);
        let pass = closed == best && sigma == argmin;
        records.push((
            json!({ "p": p, "d": d, "e": e, "kappa": kappa, "s": s, "n": n, "K": table.k,
                    "closed_form": closed, "oracle_min": best, "sigma_size": sigma.len(),
                    "argmin_size": argmin.len(), "sigma_equals_argmin": sigma == argmin, "pass": pass }),
            pass,
        ));
    }
    Ok(VerificationReport::new(
        "lemma22",
        json!({ "draws": draws, "seed": seed, "max_p": max_p, "max_n": max_n }),
        false,
        records,
    ))
}

/// One row of a stratification sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub poly: Vec<u64>,
    pub slopes: Vec<String>,
    pub hasse_nonzero: bool,
    pub gnp_match: bool,
}

/// Twisted (`kappa >= 1`) or power (`kappa = 0`) stratification over every
/// monic `P` of degree `e` over `F_q`.
pub fn sweep(s: &Session, job: &JobSpec, cap: usize) -> Result<Vec<SweepRow>> {
    job.validate()?;
    let base = job.base()?;
    let polys = PolySpec::all(&base, job.e)?;
    let (nps, gnp) = if job.kappa == 0 {
        let ls = s.power_ls(job, &polys)?;
        (s.polygons(&s.power_context(job)?, &ls, job.m)?, gnp_power(job.p, job.d, job.e)?)
    } else {
        let ls = s.twisted_ls(job, &polys)?;
        (s.polygons(&s.twisted_context(job)?, &ls, job.m)?, gnp_twisted(job.p, job.d, job.e, job.kappa)?)
    };
    polys
        .par_iter()
        .zip(&nps)
        .map(|(poly, np)| {
            let h = if job.kappa == 0 {
                hasse_full_eval(poly, job.d, cap)?
            } else {
                let mut h = base.one();
                for n in 1..=job.e as usize {
                    h = base.mul(&h, &hasse_twisted_eval(poly, job.d, job.kappa, n, cap)?);
                }
                h
            };
            Ok(SweepRow {
                poly: poly.encodings(),
                slopes: np.slope_list().iter().map(rat_str).collect(),
                hasse_nonzero: !base.is_zero(&h),
                gnp_match: np == &gnp,
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("poly,slopes,hasse_nonzero,gnp_match\n");
    for r in rows {
        let poly: Vec<String> = r.poly.iter().map(u64::to_string).collect();
        out.push_str(&format!("{},{},{},{}\n", poly.join(" "), r.slopes.join(" "), r.hasse_nonzero, r.gnp_match));
    }
    out
}
