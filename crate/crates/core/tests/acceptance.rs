//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::time::Instant;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lpoly_core::char_sums::{LPolynomial, MultiplicativeCharacter, PolySpec, SumEngine};
use lpoly_core::cyclotomic::{CycloElem, CycloRing, ZetaPart};
use lpoly_core::field::{Embedding, FieldSpec};
use lpoly_core::local::{default_precision, LocalContext};
use lpoly_core::polygon::{hodge, rat, NewtonPolygon, Rational};
use lpoly_core::strat::{
    gnp_power, gnp_twisted, gnp_twisted_with_m, hasse_full_eval, hasse_twisted_eval, hs_power, hs_twisted,
    OrbitDecomposition, ShiftTable, DEFAULT_SIGMA_CAP,
};

const MAX_ENUM: u64 = 1 << 25;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fail<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

/// Degree bookkeeping shared by the sweeps (criterion 8).
#[derive(Default)]
struct Degrees {
    twisted: usize,
    power: usize,
    bad: Vec<String>,
}

impl Degrees {
    fn twisted(&mut self, l: &LPolynomial, e: u64, tag: &str) {
        self.twisted += 1;
        if l.degree() as u64 != e {
            self.bad.push(format!("{tag}: twisted degree {} != {e}", l.degree()));
        }
    }

    fn power(&mut self, l: &LPolynomial, d: u64, e: u64, tag: &str) {
        self.power += 1;
        if l.degree() as u64 != d * e - 1 {
            self.bad.push(format!("{tag}: power degree {} != {}", l.degree(), d * e - 1));
        }
    }
}

fn twisted_np(
    engine: &SumEngine,
    poly: &PolySpec,
    chi: &MultiplicativeCharacter,
    ctx: &LocalContext,
    m: u32,
    degrees: &mut Degrees,
    tag: &str,
) -> Result<NewtonPolygon, String> {
    let l = engine.twisted_l_function(poly, chi, 1).map_err(fail)?;
    degrees.twisted(&l, poly.degree(), tag);
    ctx.q_newton_polygon(&l, m).map_err(fail)
}

fn criterion1(engine: &SumEngine, degrees: &mut Degrees) -> Outcome {
    let (p, d, e) = (13, 2, 3);
    let base = FieldSpec::new(p, 1).map_err(fail)?;
    let chi = MultiplicativeCharacter::new(&base, d).map_err(fail)?;
    let ctx = LocalContext::for_character(&chi, default_precision(1, e as usize)).map_err(fail)?;
    let hs = hs_twisted(d, e, 1, 1).map_err(fail)?;
    ensure(hs.slope_list() == vec![rat(1, 6), rat(1, 2), rat(5, 6)], || format!("HS = {hs}"))?;
    let polys = PolySpec::all(&base, e).map_err(fail)?;
    for poly in &polys {
        let tag = format!("P={:?}", poly.encodings());
        let np = twisted_np(engine, poly, &chi, &ctx, 1, degrees, &tag)?;
        ensure(np == hs, || format!("{tag}: NP {np} != HS {hs}"))?;
    }
    Ok(format!("{}/{} polygons equal HS(2,3,1,1)", polys.len(), polys.len()))
}

fn criterion2(engine: &SumEngine, degrees: &mut Degrees) -> Outcome {
    let (p, d, e) = (13, 2, 2);
    let base = FieldSpec::new(p, 1).map_err(fail)?;
    let target = hodge(4).map_err(fail)?;
    let ctx = LocalContext::new(p, 1, default_precision(1, (d * e - 1) as usize)).map_err(fail)?;
    let polys = PolySpec::all(&base, e).map_err(fail)?;
    for poly in &polys {
        let tag = format!("P={:?}", poly.encodings());
        let l = engine.power_l_function(poly, d).map_err(fail)?;
        degrees.power(&l, d, e, &tag);
        let np = ctx.q_newton_polygon(&l, 1).map_err(fail)?;
        ensure(np == target, || format!("{tag}: NP {np} != H(4)"))?;
    }
    Ok(format!("{}/{} polygons equal H(4)", polys.len(), polys.len()))
}

fn criterion3(engine: &SumEngine, degrees: &mut Degrees) -> Outcome {
    let (p, d, e, kappa) = (13, 3, 2, 1);
    let gnp = gnp_twisted(p, d, e, kappa).map_err(fail)?;
    let hs = hs_twisted(d, e, p % d, kappa).map_err(fail)?;
    let mut counts = Vec::new();
    for m in 1..=2u32 {
        let base = FieldSpec::new(p, m as usize).map_err(fail)?;
        let chi = MultiplicativeCharacter::new(&base, d).map_err(fail)?;
        let ctx = LocalContext::for_character(&chi, default_precision(m, e as usize)).map_err(fail)?;
        let polys = PolySpec::all(&base, e).map_err(fail)?;
        let mut generic = 0;
        for poly in &polys {
            let tag = format!("m={m} P={:?}", poly.encodings());
            let np = twisted_np(engine, poly, &chi, &ctx, m, degrees, &tag)?;
            let hasse = hasse_twisted_eval(poly, d, kappa, 1, DEFAULT_SIGMA_CAP)
                .and_then(|h1| {
                    let h2 = hasse_twisted_eval(poly, d, kappa, 2, DEFAULT_SIGMA_CAP)?;
                    Ok(base.mul(&h1, &h2))
                })
                .map_err(fail)?;
            let nonzero = !base.is_zero(&hasse);
            ensure((np == gnp) == nonzero, || format!("{tag}: NP {np}, GNP {gnp}, Hasse nonzero {nonzero}"))?;
            ensure(np.lies_above(&hs).map_err(fail)?, || format!("{tag}: NP {np} below HS {hs}"))?;
            generic += usize::from(nonzero);
        }
        counts.push(format!("F_{}: {}/{} generic", base.order(), generic, polys.len()));
    }
    Ok(format!("NP = GNP iff Hasse != 0, NP above HS; {}", counts.join(", ")))
}

fn criterion4(engine: &SumEngine, degrees: &mut Degrees) -> Outcome {
    let (p, d, e) = (17, 3, 2);
    let base = FieldSpec::new(p, 1).map_err(fail)?;
    let hs = hs_power(d, e, p % d).map_err(fail)?;
    let gnp = gnp_power(p, d, e).map_err(fail)?;
    let expect = vec![rat(9, 32), rat(9, 32), rat(1, 2), rat(23, 32), rat(23, 32)];
    ensure(gnp.slope_list() == expect, || format!("GNP(3,2,17) = {gnp}"))?;
    let ctx = LocalContext::new(p, 1, default_precision(1, (d * e - 1) as usize)).map_err(fail)?;
    let polys = PolySpec::all(&base, e).map_err(fail)?;
    let mut generic = 0;
    for poly in &polys {
        let tag = format!("P={:?}", poly.encodings());
        let l = engine.power_l_function(poly, d).map_err(fail)?;
        degrees.power(&l, d, e, &tag);
        let np = ctx.q_newton_polygon(&l, 1).map_err(fail)?;
        let nonzero = !base.is_zero(&hasse_full_eval(poly, d, DEFAULT_SIGMA_CAP).map_err(fail)?);
        ensure(np.lies_above(&hs).map_err(fail)?, || format!("{tag}: NP {np} below HS {hs}"))?;
        ensure((np == gnp) == nonzero, || format!("{tag}: NP {np}, GNP {gnp}, Hasse nonzero {nonzero}"))?;
        generic += usize::from(nonzero);
    }
    Ok(format!("{}/{} above HS(3,2,2); {generic} generic, all matching the Hasse test", polys.len(), polys.len()))
}

fn criterion5(engine: &SumEngine, degrees: &mut Degrees) -> Outcome {
    let (p, d, e) = (17, 3, 2);
    let base = FieldSpec::new(p, 1).map_err(fail)?;
    let big = FieldSpec::new(p, 2).map_err(fail)?;
    let emb = Embedding::new(&base, &big).map_err(fail)?;
    let ring = CycloRing::new(p, d).map_err(fail)?;
    let chi = engine.compatible_character(&base, d, 2).map_err(fail)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0401);
    let draws = 50;
    for k in 0..draws {
        let a1 = rng.gen_range(0..p);
        let poly = PolySpec::from_encodings(&base, &[a1]).map_err(fail)?;
        let tag = format!("draw {k} a1={a1}");
        let lhs = engine.power_l_function(&poly, d).map_err(fail)?;
        degrees.power(&lhs, d, e, &tag);
        let additive = engine.additive_l_function(&poly).map_err(fail)?;
        ensure(additive.degree() as u64 == e - 1, || format!("{tag}: additive degree {}", additive.degree()))?;
        let twisted = engine.twisted_l_function(&poly.base_change(&emb).map_err(fail)?, &chi, 1).map_err(fail)?;
        degrees.twisted(&twisted, e, &tag);
        let rhs = additive
            .embed_into(&ring)
            .and_then(|a| a.mul(&twisted.substitute_power(2)))
            .map_err(fail)?;
        let lhs = lhs.embed_into(&ring).map_err(fail)?;
        ensure(lhs == rhs, || format!("{tag}: L(P(x^3)) != L(P) L(P, chi; T^2)"))?;
    }
    Ok(format!("{draws}/{draws} exact factorizations"))
}

/// `K_s` from the defining congruences, by direct search.
fn shift_by_search(p: u64, d: u64, kappa: u64, s: u32) -> u64 {
    let least = |s: u32| -> u64 {
        let ps = (0..s).fold(1u64, |acc, _| acc * p % d);
        (1..d).find(|&k| ps * k % d == kappa % d).unwrap()
    };
    (p * least(s + 1) - least(s)) / d
}

fn nu_direct(p: u64, e: u64, k: u64, i: usize, j: usize) -> i64 {
    let num = p as i64 * i as i64 - k as i64 - j as i64;
    Integer::div_ceil(&num, &(e as i64))
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

fn criterion6() -> Outcome {
    let primes: Vec<u64> = (5..=97).filter(|&n| is_prime(n)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1e22_0202);
    let mut draws = 0;
    let perms: Vec<Vec<Vec<usize>>> = (0..=6).map(permutations).collect();
    while draws < 200 {
        let p = primes[rng.gen_range(0..primes.len())];
        let d = rng.gen_range(2..=p / 2);
        let e = rng.gen_range(1..=p / (2 * d)).min(12);
        if e == 0 || 2 * d * e > p || p.gcd(&(d * e)) != 1 {
            continue;
        }
        let kappa = rng.gen_range(1..d);
        let period = OrbitDecomposition::new(d, p).map_err(fail)?.orbit_of(kappa).size();
        let s = rng.gen_range(0..period) as u32;
        let n = rng.gen_range(1..=e.min(6) as usize);
        draws += 1;
        let k = shift_by_search(p, d, kappa, s);
        let table = ShiftTable::new(p, e, k, e as usize).map_err(fail)?;
        let weights: Vec<i64> = perms[n]
            .iter()
            .map(|sig| sig.iter().enumerate().map(|(i, &j)| nu_direct(p, e, k, i + 1, j)).sum())
            .collect();
        let best = *weights.iter().min().unwrap();
        let tag = format!("p={p} d={d} e={e} kappa={kappa} s={s} n={n}");
        ensure(table.y(n) == best, || format!("{tag}: Y = {} but oracle minimum {best}", table.y(n)))?;
        let mut argmin: Vec<Vec<usize>> =
            perms[n].iter().zip(&weights).filter(|(_, &w)| w == best).map(|(s, _)| s.clone()).collect();
        argmin.sort();
        let mut sigma: Vec<Vec<usize>> =
            table.sigma_set(n, DEFAULT_SIGMA_CAP).map_err(fail)?.into_iter().map(|(s, _)| s).collect();
        sigma.sort();
        ensure(sigma == argmin, || format!("{tag}: Sigma_n differs from the argmin set"))?;
    }
    Ok(format!("{draws}/{draws} draws: Y_n^(s) and Sigma_n match the S_n oracle"))
}

fn criterion7(engine: &SumEngine) -> Outcome {
    let mut checked = 0;
    for q in [3u64, 4, 5, 7, 8, 9, 11, 13, 16, 25] {
        let (p, m) = (2..=q).find(|p| q % p == 0).map(|p| (p, (q as f64).log(p as f64).round() as u32)).unwrap();
        let field = FieldSpec::new(p, m as usize).map_err(fail)?;
        for d in (2..=12).filter(|d| (q - 1) % d == 0) {
            let chi = MultiplicativeCharacter::new(&field, d).map_err(fail)?;
            let ctx = LocalContext::for_character(&chi, default_precision(m, 1)).map_err(fail)?;
            let orbits = OrbitDecomposition::new(d, p).map_err(fail)?;
            for kappa in 1..d {
                let g = engine.gauss_sum(&field, d, kappa).map_err(fail)?;
                let v = ctx.valuation(&g).map_err(fail)?.ok_or("Gauss sum vanished")?;
                let vq = v / Rational::from_integer(m.into());
                let mu = orbits.mu(d - kappa);
                ensure(&vq == mu, || format!("q={q} d={d} kappa={kappa}: v_q = {vq}, mu = {mu}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked}/{checked} Gauss sums have v_q = mu_(d-kappa)"))
}

fn criterion8(degrees: &Degrees) -> Outcome {
    ensure(degrees.bad.is_empty(), || degrees.bad.join("; "))?;
    ensure(degrees.twisted > 0 && degrees.power > 0, || "no instances recorded".into())?;
    Ok(format!(
        "{} twisted L of degree e, {} power L of degree de-1 (tails vanish by construction)",
        degrees.twisted, degrees.power
    ))
}

fn criterion9() -> Outcome {
    let mut checked = 0;
    for p in (2..=100).filter(|&p| is_prime(p)) {
        for d in 2..=6u64 {
            for e in 1..=6u64 {
                if 2 * d * e > p || p.gcd(&(d * e)) != 1 {
                    continue;
                }
                for kappa in 1..d {
                    let tag = format!("p={p} d={d} e={e} kappa={kappa}");
                    let gnp = gnp_twisted(p, d, e, kappa).map_err(|err| format!("{tag}: {err}"))?;
                    let slopes = gnp.slope_list();
                    ensure(slopes.windows(2).all(|w| w[0] < w[1]) && slopes.len() == e as usize, || {
                        format!("{tag}: slopes not strictly increasing")
                    })?;
                    let hs = hs_twisted(d, e, p % d, kappa).map_err(fail)?;
                    ensure(gnp.lies_above(&hs).map_err(fail)?, || format!("{tag}: GNP below HS"))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked}/{checked} parameter sets convex and above HS"))
}

fn random_elem(ring: &CycloRing, rng: &mut ChaCha8Rng) -> CycloElem {
    let p = ring.p() as usize;
    let table: Vec<Vec<i64>> =
        (0..p).map(|_| (0..ring.d()).map(|_| rng.gen_range(-4..=4)).collect()).collect();
    let mut x = ring.from_exponent_table(&table);
    let pi = ring.zeta_pow(ZetaPart::P, 1).sub(&ring.one()).unwrap();
    for _ in 0..rng.gen_range(0..2 * p) {
        x = x.mul(&pi).unwrap();
    }
    x
}

fn criterion10(engine: &SumEngine) -> Outcome {
    for (p, d) in [(3u64, 2u64), (5, 4), (17, 3), (13, 6)] {
        let ring = CycloRing::new(p, d).map_err(fail)?;
        let ctx = LocalContext::new(p, d, 8).map_err(fail)?;
        let tag = format!("(p,d)=({p},{d})");
        ensure(ctx.valuation(&ring.from_int(p)).map_err(fail)? == Some(rat(1, 1)), || format!("{tag}: v(p)"))?;
        let pi = ring.zeta_pow(ZetaPart::P, 1).sub(&ring.one()).map_err(fail)?;
        ensure(ctx.valuation(&pi).map_err(fail)? == Some(rat(1, p as i64 - 1)), || format!("{tag}: v(zeta_p - 1)"))?;
        let mut rng = ChaCha8Rng::seed_from_u64(p * 1000 + d);
        let mut pairs = 0;
        while pairs < 1000 {
            let x = random_elem(&ring, &mut rng);
            let y = random_elem(&ring, &mut rng);
            if x.is_zero() || y.is_zero() {
                continue;
            }
            pairs += 1;
            let vx = ctx.valuation(&x).map_err(fail)?.unwrap();
            let vy = ctx.valuation(&y).map_err(fail)?.unwrap();
            let vxy = ctx.valuation(&x.mul(&y).map_err(fail)?).map_err(fail)?.unwrap();
            ensure(vxy == &vx + &vy, || format!("{tag}: v(xy) = {vxy} != {vx} + {vy}"))?;
            if let Some(vs) = ctx.valuation(&x.add(&y).map_err(fail)?).map_err(fail)? {
                let lo = (&vx).min(&vy).clone();
                ensure(vs >= lo, || format!("{tag}: ultrametric fails"))?;
                ensure(vx == vy || vs == lo, || format!("{tag}: strict ultrametric fails"))?;
            } else {
                ensure(vx == vy, || format!("{tag}: x + y = 0 with distinct valuations"))?;
            }
        }
    }
    // factor-choice independence on the criterion 1 family
    let base = FieldSpec::new(13, 1).map_err(fail)?;
    let chi = MultiplicativeCharacter::new(&base, 2).map_err(fail)?;
    let contexts = LocalContext::all_factors(13, 2, default_precision(1, 3)).map_err(fail)?;
    let polys = PolySpec::all(&base, 3).map_err(fail)?;
    for poly in &polys {
        let l = engine.twisted_l_function(poly, &chi, 1).map_err(fail)?;
        let nps: Vec<NewtonPolygon> =
            contexts.iter().map(|c| c.q_newton_polygon(&l, 1)).collect::<Result<_, _>>().map_err(fail)?;
        ensure(nps.windows(2).all(|w| w[0] == w[1]), || format!("P={:?}: polygon depends on the factor", poly.encodings()))?;
    }
    Ok(format!(
        "valuation axioms on 4x1000 pairs; {} polygons agree across {} factor choice(s)",
        polys.len(),
        contexts.len()
    ))
}

fn criterion11() -> Outcome {
    let a = gnp_twisted_with_m(17, 3, 2, 1, 2).map_err(fail)?;
    let b = gnp_twisted_with_m(17, 3, 2, 1, 4).map_err(fail)?;
    ensure(a == b, || format!("m=2 gives {a}, m=4 gives {b}"))?;
    Ok(format!("GNP(17,3,2,1) = {a} for m = 2 and m = 4"))
}

fn report(n: u32, title: &str, started: Instant, outcome: Outcome) -> bool {
    let secs = started.elapsed().as_secs_f64();
    match outcome {
        Ok(detail) => {
            println!("criterion {n:>2} PASS  {title}: {detail} [{secs:.1}s]");
            true
        }
        Err(detail) => {
            println!("criterion {n:>2} FAIL  {title}: {detail} [{secs:.1}s]");
            false
        }
    }
}

fn main() {
    let engine = SumEngine::new(MAX_ENUM);
    let mut degrees = Degrees::default();
    let mut ok = true;
    let t = Instant::now();
    ok &= report(1, "twisted polygons equal HS when p = 1 mod de", t, criterion1(&engine, &mut degrees));
    let t = Instant::now();
    ok &= report(2, "power polygons equal the Hodge polygon when p = 1 mod de", t, criterion2(&engine, &mut degrees));
    let t = Instant::now();
    ok &= report(3, "twisted stratification by the Hasse polynomial", t, criterion3(&engine, &mut degrees));
    let t = Instant::now();
    ok &= report(4, "power stratification by the Hasse polynomial", t, criterion4(&engine, &mut degrees));
    let t = Instant::now();
    ok &= report(5, "factorization of the power L-function", t, criterion5(&engine, &mut degrees));
    let t = Instant::now();
    ok &= report(6, "closed form for Y_n^(s) and Sigma_n", t, criterion6());
    let t = Instant::now();
    ok &= report(7, "Stickelberger valuation of Gauss sums", t, criterion7(&engine));
    let t = Instant::now();
    ok &= report(8, "degree contracts", t, criterion8(&degrees));
    let t = Instant::now();
    ok &= report(9, "generic polygon convex and above HS", t, criterion9());
    let t = Instant::now();
    ok &= report(10, "valuation engine self-test", t, criterion10(&engine));
    let t = Instant::now();
    ok &= report(11, "generic polygon independent of m", t, criterion11());
    if !ok {
        std::process::exit(1);
    }
}
