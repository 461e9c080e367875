//! p-adic valuations of cyclotomic integers.
//!
//! `Z[zeta_p, zeta_d]` is mapped into `W[pi]/E(pi)` modulo `p^N`, where
//! `W = Z_p[y]/h(y)` is unramified of degree `f = ord_d(p)` and
//! `E(pi) = ((1 + pi)^p - 1)/pi` is Eisenstein of degree `p - 1`. Under
//! `zeta_d -> y`, `zeta_p -> 1 + pi` the valuation of `sum_j c_j(y) pi^j` is
//! `min_j (v_p(c_j) + j/(p-1))`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::char_sums::{order_mod, LPolynomial, MultiplicativeCharacter};
use crate::cyclotomic::{cyclotomic_polynomial, CycloElem};
use crate::error::{Error, Result};
use crate::field::poly;
use crate::field::FieldSpec;
use crate::polygon::{NewtonPolygon, Rational};

/// Doubling stops once precision exceeds this multiple of the starting value.
pub const PRECISION_CAP_FACTOR: u32 = 16;

#[derive(Clone, Debug)]
pub struct LocalContext {
    p: u64,
    d: u64,
    f: usize,
    precision: u32,
    /// the chosen factor of `Phi_d` mod `p`, monic
    factor: Vec<u64>,
    /// its lift to `Z/p^N`, monic, little-endian
    lifted: Vec<BigInt>,
    modulus: BigInt,
    /// `y^b mod lifted` for `b < d`
    ypow: Vec<Vec<BigInt>>,
    /// `binom[a][j] = C(a, j)` for `a < p - 1`
    binom: Vec<Vec<BigInt>>,
}

/// Multiplicative order of `p` modulo `d`.
pub fn residue_degree(p: u64, d: u64) -> usize {
    order_mod(p, d)
}

/// The irreducible factors of `Phi_d` over `F_p`, sorted by encoding.
pub fn phi_factors(p: u64, d: u64) -> Result<Vec<Vec<u64>>> {
    if p.gcd(&d) != 1 {
        return Err(Error::NotCoprime { a: p, b: d });
    }
    if d == 1 {
        return Ok(vec![vec![p - 1, 1]]);
    }
    let f = residue_degree(p, d);
    let field = FieldSpec::new(p, f)?;
    let g = field.primitive_root();
    let zeta = field.pow(&g, ((field.order() - 1) / d) as u128);
    let mut out: Vec<Vec<u64>> = Vec::new();
    for u in 1..d {
        if u.gcd(&d) != 1 {
            continue;
        }
        let m = field.minimal_polynomial(&field.pow(&zeta, u as u128));
        if !out.contains(&m) {
            out.push(m);
        }
    }
    out.sort_by_key(|m| encode(m, p));
    Ok(out)
}

fn encode(m: &[u64], p: u64) -> u128 {
    m[..m.len() - 1].iter().rev().fold(0u128, |acc, &c| acc * p as u128 + c as u128)
}

impl LocalContext {
    /// Context at the lex-smallest factor of `Phi_d` mod `p`.
    pub fn new(p: u64, d: u64, precision: u32) -> Result<Self> {
        let factor = phi_factors(p, d)?.swap_remove(0);
        Self::with_factor(p, d, factor, precision)
    }

    /// Context in which `zeta_d` reduces to `chi(g) = g^{(q-1)/d}` mod `p`,
    /// so `chi` agrees with the Teichmueller character to the power `(q-1)/d`.
    pub fn for_character(chi: &MultiplicativeCharacter, precision: u32) -> Result<Self> {
        let field = chi.field();
        let d = chi.d();
        if (field.order() - 1) % d != 0 {
            return Err(Error::OrderMismatch { d, modulus: field.order() - 1 });
        }
        let root = field.pow(chi.generator(), ((field.order() - 1) / d) as u128);
        let factor = field.minimal_polynomial(&root);
        Self::with_factor(field.p(), d, factor, precision)
    }

    pub fn with_factor(p: u64, d: u64, factor: Vec<u64>, precision: u32) -> Result<Self> {
        if !poly::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p.gcd(&d) != 1 {
            return Err(Error::NotCoprime { a: p, b: d });
        }
        if precision == 0 {
            return Err(Error::BadParameters("precision must be >= 1".into()));
        }
        let f = residue_degree(p, d);
        let phi: Vec<u64> = cyclotomic_polynomial(d)
            .iter()
            .map(|c| c.mod_floor(&BigInt::from(p)).try_into().unwrap())
            .collect();
        if factor.len() != f + 1 || factor[f] != 1 || !poly::rem(&phi, &factor, p).is_empty() {
            return Err(Error::BadParameters("not a monic factor of the cyclotomic polynomial".into()));
        }
        let modulus = BigInt::from(p).pow(precision);
        let lifted = hensel_lift(&factor, d, p, precision);
        let mut ypow = Vec::with_capacity(d as usize);
        let mut cur = vec![BigInt::zero(); f];
        cur[0] = BigInt::one();
        for _ in 0..d {
            ypow.push(cur.clone());
            let top = cur[f - 1].clone();
            for k in (1..f).rev() {
                cur[k] = cur[k - 1].clone();
            }
            cur[0] = BigInt::zero();
            for k in 0..f {
                cur[k] = (&cur[k] - &top * &lifted[k]).mod_floor(&modulus);
            }
        }
        let n = p as usize - 1;
        let mut binom = vec![vec![BigInt::zero(); n]; n];
        for a in 0..n {
            binom[a][0] = BigInt::one();
            for j in 1..=a {
                binom[a][j] = &binom[a - 1][j - 1] + &binom[a - 1][j];
            }
        }
        Ok(LocalContext { p, d, f, precision, factor, lifted, modulus, ypow, binom })
    }

    /// Every factor choice at the same precision.
    pub fn all_factors(p: u64, d: u64, precision: u32) -> Result<Vec<LocalContext>> {
        phi_factors(p, d)?
            .into_iter()
            .map(|h| Self::with_factor(p, d, h, precision))
            .collect()
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn residue_degree(&self) -> usize {
        self.f
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn factor(&self) -> &[u64] {
        &self.factor
    }

    /// The lifted factor `h~` over `Z/p^N`.
    pub fn lifted_factor(&self) -> &[BigInt] {
        &self.lifted
    }

    /// `E(pi) = ((1 + pi)^p - 1)/pi`, little-endian.
    pub fn eisenstein(&self) -> Vec<BigInt> {
        let p = self.p as usize;
        let mut row = vec![BigInt::one()];
        for _ in 0..p {
            let mut next = vec![BigInt::zero(); row.len() + 1];
            for (i, c) in row.iter().enumerate() {
                next[i] += c;
                next[i + 1] += c;
            }
            row = next;
        }
        row.remove(0);
        row
    }

    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        Self::with_factor(self.p, self.d, self.factor.clone(), precision)
    }

    /// Coordinates `c_j[i]` of `x` in the basis `y^i pi^j`, reduced mod `p^N`.
    pub fn reduce(&self, x: &CycloElem) -> Result<Vec<Vec<BigInt>>> {
        let ring = x.ring();
        if ring.p() != self.p || self.d % ring.d() != 0 {
            return Err(Error::RingMismatch);
        }
        let stretch = (self.d / ring.d()) as usize;
        let n = self.p as usize - 1;
        let mut out = vec![vec![BigInt::zero(); self.f]; n];
        for a in 0..n {
            for b in 0..ring.phi_d() {
                let c = x.coeff(a, b);
                if c.is_zero() {
                    continue;
                }
                let y = &self.ypow[b * stretch];
                for j in 0..=a {
                    let cb = c * &self.binom[a][j];
                    for (i, yi) in y.iter().enumerate() {
                        if !yi.is_zero() {
                            out[j][i] += &cb * yi;
                        }
                    }
                }
            }
        }
        for row in &mut out {
            for c in row {
                *c = c.mod_floor(&self.modulus);
            }
        }
        Ok(out)
    }

    /// `v_p(x)` at the current precision; `None` when the reduction vanishes
    /// or the minimum is not certified below `N`.
    fn valuation_at(&self, x: &CycloElem) -> Result<Option<Rational>> {
        let coords = self.reduce(x)?;
        let p = BigInt::from(self.p);
        let mut best: Option<Rational> = None;
        for (j, row) in coords.iter().enumerate() {
            let v = row.iter().filter(|c| !c.is_zero()).map(|c| vp(c, &p)).min();
            if let Some(v) = v {
                let val = Rational::new(BigInt::from(v * (self.p - 1) + j as u64), BigInt::from(self.p - 1));
                if best.as_ref().is_none_or(|b| &val < b) {
                    best = Some(val);
                }
            }
        }
        Ok(best.filter(|b| b < &Rational::from_integer(BigInt::from(self.precision))))
    }

    /// `v_p(x)` with `v_p(p) = 1`; `None` is infinity. Escalates precision
    /// when the reduction cannot certify a nonzero `x`.
    pub fn valuation(&self, x: &CycloElem) -> Result<Option<Rational>> {
        if x.is_zero() {
            return Ok(None);
        }
        let cap = self.precision.saturating_mul(PRECISION_CAP_FACTOR);
        if let Some(v) = self.valuation_at(x)? {
            return Ok(Some(v));
        }
        let mut n = self.precision;
        while n < cap {
            n = (n * 2).min(cap);
            if let Some(v) = self.with_precision(n)?.valuation_at(x)? {
                return Ok(Some(v));
            }
        }
        Err(Error::PrecisionExhausted(cap))
    }

    /// Lower hull of `(n, v_p(c_n)/m)`.
    pub fn q_newton_polygon(&self, l: &LPolynomial, m: u32) -> Result<NewtonPolygon> {
        if m == 0 {
            return Err(Error::BadParameters("m must be >= 1".into()));
        }
        let scale = Rational::from_integer(BigInt::from(m));
        let points = l
            .coeffs()
            .iter()
            .enumerate()
            .map(|(n, c)| Ok((n as u64, self.valuation(c)?.map(|v| v / &scale))))
            .collect::<Result<Vec<_>>>()?;
        NewtonPolygon::from_points(&points)
    }
}

/// Default working precision `m e + 4` for an L-function of degree `e` over `F_{p^m}`.
pub fn default_precision(m: u32, degree: usize) -> u32 {
    m * degree as u32 + 4
}

fn vp(c: &BigInt, p: &BigInt) -> u64 {
    let mut c = c.abs();
    let mut k = 0;
    loop {
        let (q, r) = c.div_rem(p);
        if !r.is_zero() {
            return k;
        }
        c = q;
        k += 1;
    }
}

/// Lifts the factorization `Phi_d = G H` mod `p` to `Z/p^N`, returning `G~`.
fn hensel_lift(g: &[u64], d: u64, p: u64, precision: u32) -> Vec<BigInt> {
    let phi = cyclotomic_polynomial(d);
    let pb = BigInt::from(p);
    let phi_p: Vec<u64> = phi.iter().map(|c| to_u64(&c.mod_floor(&pb))).collect();
    let (h, _) = poly::divrem(&phi_p, g, p);
    // s G + t H = 1 mod p
    let (_, _, t) = poly::ext_gcd(g, &h, p);
    let mut gl: Vec<BigInt> = g.iter().map(|&c| BigInt::from(c)).collect();
    let mut hl: Vec<BigInt> = h.iter().map(|&c| BigInt::from(c)).collect();
    let mut pk = BigInt::one();
    for _ in 1..precision {
        pk *= &pb;
        let prod = mul_z(&gl, &hl);
        let err: Vec<u64> = (0..phi.len())
            .map(|i| {
                let diff = &phi[i] - prod.get(i).cloned().unwrap_or_default();
                debug_assert!((&diff % &pk).is_zero());
                to_u64(&(diff / &pk).mod_floor(&pb))
            })
            .collect();
        let g1 = poly::rem(&poly::mul(&err, &t, p), g, p);
        let (h1, r) = poly::divrem(&poly::sub(&err, &poly::mul(&g1, &h, p), p), g, p);
        debug_assert!(r.is_empty());
        for (i, c) in g1.iter().enumerate() {
            gl[i] += &pk * c;
        }
        for (i, c) in h1.iter().enumerate() {
            hl[i] += &pk * c;
        }
    }
    gl
}

fn mul_z(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn to_u64(c: &BigInt) -> u64 {
    c.try_into().expect("residue fits u64")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::{CycloRing, ZetaPart};
    use crate::polygon::rat;

    #[test]
    fn trivial_d() {
        let ctx = LocalContext::new(5, 1, 4).unwrap();
        assert_eq!(ctx.residue_degree(), 1);
        assert_eq!(ctx.factor(), &[4, 1]);
        let m = BigInt::from(625);
        assert_eq!(ctx.lifted_factor()[0], BigInt::from(-1).mod_floor(&m));
    }

    #[test]
    fn phi3_mod_2_lifts_to_itself() {
        for n in [1, 3, 7] {
            let ctx = LocalContext::new(2, 3, n).unwrap();
            assert_eq!(ctx.residue_degree(), 2);
            let one = BigInt::one();
            assert_eq!(ctx.lifted_factor(), &[one.clone(), one.clone(), one]);
        }
    }

    #[test]
    fn split_case_root_of_unity() {
        // p = 13 = 1 mod 3: h~ = y - t with t^3 = 1 mod 13^N
        let ctx = LocalContext::new(13, 3, 6).unwrap();
        let m = BigInt::from(13).pow(6);
        let t = (-&ctx.lifted_factor()[0]).mod_floor(&m);
        assert_eq!(t.modpow(&BigInt::from(3), &m), BigInt::one());
        assert_ne!(t, BigInt::one());
        assert_eq!(ctx.factor(), &[4, 1]); // roots 3, 9: y - 9 = y + 4 has the smaller code
    }

    #[test]
    fn lifted_factor_divides_phi() {
        for (p, d) in [(17u64, 3u64), (2, 5), (3, 8), (5, 12), (7, 9)] {
            for ctx in LocalContext::all_factors(p, d, 5).unwrap() {
                let m = BigInt::from(p).pow(5);
                let phi = cyclotomic_polynomial(d);
                let h = ctx.lifted_factor();
                // y^d = 1 and h | Phi_d: check Phi_d(y) = 0 by ypow
                let mut acc = vec![BigInt::zero(); h.len() - 1];
                for (b, c) in phi.iter().enumerate() {
                    for (i, v) in ctx.ypow[b % d as usize].iter().enumerate() {
                        acc[i] += c * v;
                    }
                }
                assert!(acc.iter().all(|c| c.mod_floor(&m).is_zero()), "p={p} d={d}");
            }
        }
    }

    #[test]
    fn eisenstein_shape() {
        let ctx = LocalContext::new(5, 1, 3).unwrap();
        let e: Vec<i64> = ctx.eisenstein().iter().map(|c| c.try_into().unwrap()).collect();
        assert_eq!(e, vec![5, 10, 10, 5, 1]);
    }

    #[test]
    fn basic_valuations() {
        let ring = CycloRing::new(7, 3).unwrap();
        let ctx = LocalContext::new(7, 3, 6).unwrap();
        assert_eq!(ctx.valuation(&ring.from_int(7)).unwrap(), Some(rat(1, 1)));
        let pi = ring.zeta_pow(ZetaPart::P, 1).sub(&ring.one()).unwrap();
        assert_eq!(ctx.valuation(&pi).unwrap(), Some(rat(1, 6)));
        assert_eq!(ctx.valuation(&ring.zero()).unwrap(), None);
        assert_eq!(ctx.valuation(&ring.zeta_pow(ZetaPart::D, 1)).unwrap(), Some(rat(0, 1)));
    }

    #[test]
    fn quadratic_gauss_sum_valuation() {
        let ring = CycloRing::new(3, 2).unwrap();
        let ctx = LocalContext::new(3, 2, 4).unwrap();
        let g = ring.zeta_pow(ZetaPart::P, 1).sub(&ring.zeta_pow(ZetaPart::P, 2)).unwrap();
        assert_eq!(ctx.valuation(&g).unwrap(), Some(rat(1, 2)));
    }

    #[test]
    fn precision_escalates() {
        let ring = CycloRing::new(3, 1).unwrap();
        let ctx = LocalContext::new(3, 1, 2).unwrap();
        let x = ring.from_int(BigInt::from(3).pow(5));
        assert_eq!(ctx.valuation(&x).unwrap(), Some(rat(5, 1)));
        let huge = ring.from_int(BigInt::from(3).pow(40));
        assert_eq!(ctx.valuation(&huge), Err(Error::PrecisionExhausted(32)));
    }

    #[test]
    fn newton_polygon_scaling() {
        let ring = CycloRing::new(3, 2).unwrap();
        let ctx = LocalContext::new(3, 2, 6).unwrap();
        let g = ring.zeta_pow(ZetaPart::P, 1).sub(&ring.zeta_pow(ZetaPart::P, 2)).unwrap();
        let l = LPolynomial::from_coeffs(vec![ring.one(), g]).unwrap();
        let np = ctx.q_newton_polygon(&l, 1).unwrap();
        assert_eq!(np.slope_list(), vec![rat(1, 2)]);
        let np2 = ctx.q_newton_polygon(&l, 2).unwrap();
        assert_eq!(np2.slope_list(), vec![rat(1, 4)]);
        let lp = LPolynomial::from_coeffs(vec![ring.one(), ring.from_int(3)]).unwrap();
        assert_eq!(ctx.q_newton_polygon(&lp, 1).unwrap().slope_list(), vec![rat(1, 1)]);
    }
}
