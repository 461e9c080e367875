use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::char_sums::{LPolynomial, MultiplicativeCharacter, PolySpec, SumEngine};
use crate::cli::cache::{Cache, CacheKey};
use crate::error::{Error, Result};
use crate::field::poly::is_prime;
use crate::field::FieldSpec;
use crate::local::{default_precision, LocalContext};
use crate::polygon::NewtonPolygon;

/// Parameters shared by the computing subcommands.
#[derive(Clone, Copy, Debug)]
pub struct JobSpec {
    pub p: u64,
    pub m: u32,
    pub d: u64,
    pub e: u64,
    pub kappa: u64,
}

impl JobSpec {
    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(Error::NotPrime(self.p));
        }
        if self.m == 0 || self.d == 0 || self.e == 0 {
            return Err(Error::BadParameters("m, d and e must be >= 1".into()));
        }
        if self.p.gcd(&(self.d * self.e)) != 1 {
            return Err(Error::NotCoprime { a: self.p, b: self.d * self.e });
        }
        if self.kappa >= self.d {
            return Err(Error::BadParameters(format!("kappa = {} must be < d = {}", self.kappa, self.d)));
        }
        if self.kappa != 0 {
            let q = self.q()?;
            if (q - 1) % self.d != 0 {
                return Err(Error::OrderMismatch { d: self.d, modulus: q - 1 });
            }
        }
        Ok(())
    }

    pub fn q(&self) -> Result<u64> {
        self.p.checked_pow(self.m).ok_or_else(|| Error::BadParameters("q overflows".into()))
    }

    pub fn base(&self) -> Result<FieldSpec> {
        FieldSpec::new(self.p, self.m as usize)
    }
}

/// How the polynomials of a run are chosen.
#[derive(Clone, Debug)]
pub enum Selection {
    All,
    Random { count: usize, seed: u64 },
    Given(Vec<Vec<u64>>),
}

impl Selection {
    pub fn polys(&self, base: &FieldSpec, e: u64) -> Result<Vec<PolySpec>> {
        match self {
            Selection::All => PolySpec::all(base, e),
            Selection::Random { count, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (0..*count)
                    .map(|_| {
                        let codes: Vec<u64> = (1..e).map(|_| rng.gen_range(0..base.order())).collect();
                        PolySpec::from_encodings(base, &codes)
                    })
                    .collect()
            }
            Selection::Given(list) => list.iter().map(|c| PolySpec::from_encodings(base, c)).collect(),
        }
    }
}

/// Engine, cache and precision policy for one invocation.
pub struct Session {
    pub engine: SumEngine,
    pub cache: Option<Cache>,
    pub precision: Option<u32>,
}

impl Session {
    pub fn precision_for(&self, m: u32, degree: usize) -> u32 {
        self.precision.unwrap_or_else(|| default_precision(m, degree))
    }

    fn cached<F>(&self, key: CacheKey, polys: &[PolySpec], compute: F) -> Result<Vec<LPolynomial>>
    where
        F: Fn(&PolySpec) -> Result<LPolynomial> + Sync,
    {
        let known = match &self.cache {
            Some(c) => c.load(&key)?,
            None => Default::default(),
        };
        let results: Vec<(LPolynomial, bool)> = polys
            .par_iter()
            .map(|poly| match known.get(&poly.encodings()) {
                Some(l) => Ok((l.clone(), false)),
                None => compute(poly).map(|l| (l, true)),
            })
            .collect::<Result<_>>()?;
        if let Some(c) = &self.cache {
            let mut fresh: Vec<(Vec<u64>, LPolynomial)> = Vec::new();
            for (poly, (l, new)) in polys.iter().zip(&results) {
                let enc = poly.encodings();
                if *new && !fresh.iter().any(|(p, _)| p == &enc) {
                    fresh.push((enc, l.clone()));
                }
            }
            c.store(&key, &fresh)?;
        }
        Ok(results.into_iter().map(|(l, _)| l).collect())
    }

    /// `L(P, chi^kappa; T)` for each polynomial, `chi` pinned by the
    /// lex-smallest generator of `F_q`.
    pub fn twisted_ls(&self, job: &JobSpec, polys: &[PolySpec]) -> Result<Vec<LPolynomial>> {
        let chi = MultiplicativeCharacter::new(&job.base()?, job.d)?;
        let key = CacheKey { kind: "twisted", p: job.p, m: job.m, d: job.d, e: job.e, kappa: job.kappa };
        self.cached(key, polys, |poly| self.engine.twisted_l_function(poly, &chi, job.kappa))
    }

    /// `L(P(x^d); T)` for each polynomial.
    pub fn power_ls(&self, job: &JobSpec, polys: &[PolySpec]) -> Result<Vec<LPolynomial>> {
        let key = CacheKey { kind: "power", p: job.p, m: job.m, d: job.d, e: job.e, kappa: 0 };
        self.cached(key, polys, |poly| self.engine.power_l_function(poly, job.d))
    }

    /// Local context matching the character used by [`Session::twisted_ls`].
    pub fn twisted_context(&self, job: &JobSpec) -> Result<LocalContext> {
        let chi = MultiplicativeCharacter::new(&job.base()?, job.d)?;
        LocalContext::for_character(&chi, self.precision_for(job.m, job.e as usize))
    }

    pub fn power_context(&self, job: &JobSpec) -> Result<LocalContext> {
        LocalContext::new(job.p, 1, self.precision_for(job.m, (job.d * job.e) as usize - 1))
    }

    pub fn polygons(&self, ctx: &LocalContext, ls: &[LPolynomial], m: u32) -> Result<Vec<NewtonPolygon>> {
        ls.par_iter().map(|l| ctx.q_newton_polygon(l, m)).collect()
    }
}
