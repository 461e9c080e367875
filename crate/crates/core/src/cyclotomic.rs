//! Exact arithmetic in `Z[zeta_p, zeta_d]` with `gcd(p, d) = 1`.
//!
//! Elements are stored in the tensor basis `zeta_p^a zeta_d^b`,
//! `0 <= a <= p - 2`, `0 <= b < phi(d)`, i.e. as a `(p-1) x phi(d)` integer
//! array. Both factors are reduced independently: `Phi_p` on the `a` index
//! and `Phi_d` on the `b` index.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug)]
struct RingInner {
    p: u64,
    d: u64,
    phi_d: usize,
    /// `y^b` reduced modulo `Phi_d`, for `b < max(d, 2 phi(d) - 1)`.
    ypow: Vec<Vec<BigInt>>,
}

/// The ring `Z[zeta_p, zeta_d]`; cheap to clone.
#[derive(Clone, Debug)]
pub struct CycloRing(Arc<RingInner>);

impl PartialEq for CycloRing {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.d == other.0.d
    }
}

impl Eq for CycloRing {}

/// Integer coefficients of the cyclotomic polynomial `Phi_n`, little-endian.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    // Phi_n = (x^n - 1) / prod_{k | n, k < n} Phi_k
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for k in 1..n {
        if n % k == 0 {
            num = exact_div_monic(&num, &cyclotomic_polynomial(k));
        }
    }
    num
}

fn exact_div_monic(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].clone();
        if c.is_zero() {
            continue;
        }
        for (i, bc) in b.iter().enumerate() {
            r[k + i] -= &c * bc;
        }
        q[k] = c;
    }
    debug_assert!(r.iter().all(Zero::is_zero));
    q
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            while n % f == 0 {
                n /= f;
            }
            result -= result / f;
        }
        f += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Which generator a power of `zeta` refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZetaPart {
    P,
    D,
}

impl CycloRing {
    pub fn new(p: u64, d: u64) -> Result<Self> {
        if p < 2 || d == 0 {
            return Err(Error::BadParameters(format!("bad cyclotomic ring ({p}, {d})")));
        }
        if p.gcd(&d) != 1 {
            return Err(Error::NotCoprime { a: p, b: d });
        }
        let phi = cyclotomic_polynomial(d);
        let phi_d = phi.len() - 1;
        let len = (d as usize).max(2 * phi_d - 1).max(1);
        let mut ypow = Vec::with_capacity(len);
        let mut cur = vec![BigInt::zero(); phi_d];
        cur[0] = BigInt::one();
        for _ in 0..len {
            ypow.push(cur.clone());
            // multiply by y and reduce: y^phi = -sum phi_k y^k
            let top = cur[phi_d - 1].clone();
            for k in (1..phi_d).rev() {
                cur[k] = cur[k - 1].clone();
            }
            cur[0] = BigInt::zero();
            if !top.is_zero() {
                for k in 0..phi_d {
                    cur[k] -= &top * &phi[k];
                }
            }
        }
        Ok(CycloRing(Arc::new(RingInner { p, d, phi_d, ypow })))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn d(&self) -> u64 {
        self.0.d
    }

    pub fn phi_d(&self) -> usize {
        self.0.phi_d
    }

    fn width(&self) -> usize {
        self.0.phi_d
    }

    fn len(&self) -> usize {
        (self.0.p as usize - 1) * self.0.phi_d
    }

    pub fn zero(&self) -> CycloElem {
        CycloElem { ring: self.clone(), coeffs: vec![BigInt::zero(); self.len()] }
    }

    pub fn one(&self) -> CycloElem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: impl Into<BigInt>) -> CycloElem {
        let mut x = self.zero();
        x.coeffs[0] = n.into();
        x
    }

    /// `zeta_p^t` or `zeta_d^t` in reduced form.
    pub fn zeta_pow(&self, which: ZetaPart, t: i64) -> CycloElem {
        let (a, b) = match which {
            ZetaPart::P => (t.rem_euclid(self.0.p as i64) as usize, 0),
            ZetaPart::D => (0, t.rem_euclid(self.0.d as i64) as usize),
        };
        self.monomial(a, b, &BigInt::one())
    }

    /// `c * zeta_p^a * zeta_d^b` for `a < p`, `b < d`.
    pub fn monomial(&self, a: usize, b: usize, c: &BigInt) -> CycloElem {
        let mut full = FullTable::new(self);
        full.add(a, b, c);
        full.reduce()
    }

    /// Reduces a `p x d` table of counts, entry `(a, b)` the coefficient of
    /// `zeta_p^a zeta_d^b`.
    pub fn from_exponent_table(&self, table: &[Vec<i64>]) -> CycloElem {
        let mut full = FullTable::new(self);
        for (a, row) in table.iter().enumerate() {
            for (b, &c) in row.iter().enumerate() {
                if c != 0 {
                    full.add(a, b, &BigInt::from(c));
                }
            }
        }
        full.reduce()
    }
}

/// Unreduced accumulator indexed by `a mod p`, `b < ypow.len()`.
struct FullTable<'a> {
    ring: &'a CycloRing,
    rows: Vec<Vec<BigInt>>,
}

impl<'a> FullTable<'a> {
    fn new(ring: &'a CycloRing) -> Self {
        let cols = ring.0.ypow.len();
        FullTable { ring, rows: vec![vec![BigInt::zero(); cols]; ring.0.p as usize] }
    }

    fn add(&mut self, a: usize, b: usize, c: &BigInt) {
        let p = self.ring.0.p as usize;
        let d = self.ring.0.d as usize;
        let b = if b >= self.rows[0].len() { b % d } else { b };
        self.rows[a % p][b] += c;
    }

    fn reduce(self) -> CycloElem {
        let ring = self.ring;
        let p = ring.0.p as usize;
        let w = ring.width();
        let mut out = ring.zero();
        // d-part first: fold column b via y^b mod Phi_d
        let mut reduced_rows: Vec<Vec<BigInt>> = Vec::with_capacity(p);
        for row in &self.rows {
            let mut r = vec![BigInt::zero(); w];
            for (b, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if b < w {
                    r[b] += c;
                } else {
                    for (k, yc) in ring.0.ypow[b].iter().enumerate() {
                        if !yc.is_zero() {
                            r[k] += c * yc;
                        }
                    }
                }
            }
            reduced_rows.push(r);
        }
        // p-part: zeta_p^{p-1} = -(1 + zeta_p + ... + zeta_p^{p-2})
        let last = reduced_rows.pop().unwrap();
        for (a, row) in reduced_rows.into_iter().enumerate() {
            for b in 0..w {
                out.coeffs[a * w + b] = &row[b] - &last[b];
            }
        }
        out
    }
}

/// Exact element of `Z[zeta_p, zeta_d]`.
#[derive(Clone, Debug)]
pub struct CycloElem {
    ring: CycloRing,
    coeffs: Vec<BigInt>,
}

impl PartialEq for CycloElem {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.coeffs == other.coeffs
    }
}

impl Eq for CycloElem {}

impl CycloElem {
    pub fn ring(&self) -> &CycloRing {
        &self.ring
    }

    /// Coefficient of `zeta_p^a zeta_d^b` in the reduced basis.
    pub fn coeff(&self, a: usize, b: usize) -> &BigInt {
        &self.coeffs[a * self.ring.width() + b]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(CycloElem { ring: self.ring.clone(), coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(CycloElem { ring: self.ring.clone(), coeffs })
    }

    pub fn neg(&self) -> Self {
        CycloElem { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn equals(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        Ok(self.coeffs == other.coeffs)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let ring = &self.ring;
        let w = ring.width();
        let p = ring.0.p as usize;
        let mut full = FullTable::new(ring);
        for a1 in 0..p - 1 {
            for b1 in 0..w {
                let x = &self.coeffs[a1 * w + b1];
                if x.is_zero() {
                    continue;
                }
                for a2 in 0..p - 1 {
                    for b2 in 0..w {
                        let y = &other.coeffs[a2 * w + b2];
                        if !y.is_zero() {
                            full.rows[(a1 + a2) % p][b1 + b2] += x * y;
                        }
                    }
                }
            }
        }
        Ok(full.reduce())
    }

    pub fn scale(&self, n: &BigInt) -> Self {
        CycloElem { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|c| c * n).collect() }
    }

    /// `y` with `n * y = self`, when every coefficient is divisible by `n`.
    pub fn exact_div_int(&self, n: &BigInt) -> Result<Self> {
        if n.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(n);
            if !r.is_zero() {
                return Err(Error::NotDivisible(n.to_string()));
            }
            coeffs.push(q);
        }
        Ok(CycloElem { ring: self.ring.clone(), coeffs })
    }

    /// Image under `Z[zeta_p, zeta_{d'}] -> Z[zeta_p, zeta_d]`, `d' | d`,
    /// `zeta_{d'} -> zeta_d^{d/d'}`.
    pub fn embed_into(&self, target: &CycloRing) -> Result<Self> {
        let (src_d, dst_d) = (self.ring.d(), target.d());
        if self.ring.p() != target.p() || dst_d % src_d != 0 {
            return Err(Error::RingMismatch);
        }
        let stride = (dst_d / src_d) as usize;
        let w = self.ring.width();
        let p = self.ring.p() as usize;
        let mut full = FullTable::new(target);
        for a in 0..p - 1 {
            for b in 0..w {
                let c = &self.coeffs[a * w + b];
                if !c.is_zero() {
                    full.add(a, b * stride, c);
                }
            }
        }
        Ok(full.reduce())
    }

    /// Applies the automorphism `zeta_d -> zeta_d^u`, `gcd(u, d) = 1`.
    pub fn galois_d(&self, u: u64) -> Result<Self> {
        let d = self.ring.d();
        if u.gcd(&d) != 1 {
            return Err(Error::NotCoprime { a: u, b: d });
        }
        let w = self.ring.width();
        let p = self.ring.p() as usize;
        let mut full = FullTable::new(&self.ring);
        for a in 0..p - 1 {
            for b in 0..w {
                let c = &self.coeffs[a * w + b];
                if !c.is_zero() {
                    full.add(a, ((b as u64 * u) % d) as usize, c);
                }
            }
        }
        Ok(full.reduce())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(CycloJson::from(self)).expect("serializable")
    }
}

impl fmt::Display for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.ring.width();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (a, b) = (i / w, i % w);
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            let mut term = String::new();
            if a > 0 {
                term.push_str(&format!("z{}^{}", self.ring.p(), a));
            }
            if b > 0 {
                if !term.is_empty() {
                    term.push('*');
                }
                term.push_str(&format!("z{}^{}", self.ring.d(), b));
            }
            if term.is_empty() {
                write!(f, "{sign}{mag}")?;
            } else if mag.is_one() {
                write!(f, "{sign}{term}")?;
            } else {
                write!(f, "{sign}{mag}*{term}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Integer that serializes as a JSON number when it fits in `i64`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(i64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(JsonInt(BigInt::from(v))),
            Repr::Str(s) => s.parse().map(JsonInt).map_err(serde::de::Error::custom),
        }
    }
}

/// Wire form `{"p": .., "d": .., "coeffs": [[..], ..]}`, rows indexed by the
/// power of `zeta_p`, columns by the power of `zeta_d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloJson {
    pub p: u64,
    pub d: u64,
    pub coeffs: Vec<Vec<JsonInt>>,
}

impl From<&CycloElem> for CycloJson {
    fn from(x: &CycloElem) -> Self {
        let w = x.ring.width();
        CycloJson {
            p: x.ring.p(),
            d: x.ring.d(),
            coeffs: x.coeffs.chunks(w).map(|row| row.iter().cloned().map(JsonInt).collect()).collect(),
        }
    }
}

impl CycloJson {
    pub fn into_elem(self) -> Result<CycloElem> {
        let ring = CycloRing::new(self.p, self.d)?;
        let w = ring.width();
        if self.coeffs.len() != self.p as usize - 1 || self.coeffs.iter().any(|r| r.len() != w) {
            return Err(Error::BadParameters("coefficient array has the wrong shape".into()));
        }
        let coeffs = self.coeffs.into_iter().flatten().map(|j| j.0).collect();
        Ok(CycloElem { ring, coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z3() -> CycloRing {
        CycloRing::new(2, 3).unwrap()
    }

    #[test]
    fn cyclotomic_polynomials() {
        let c = |n| cyclotomic_polynomial(n).iter().map(|x| x.to_i64().unwrap()).collect::<Vec<_>>();
        assert_eq!(c(1), vec![-1, 1]);
        assert_eq!(c(2), vec![1, 1]);
        assert_eq!(c(3), vec![1, 1, 1]);
        assert_eq!(c(4), vec![1, 0, 1]);
        assert_eq!(c(6), vec![1, -1, 1]);
        assert_eq!(c(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn zeta_powers() {
        let r = CycloRing::new(5, 3).unwrap();
        assert_eq!(r.zeta_pow(ZetaPart::P, 0), r.one());
        let two = CycloRing::new(2, 1).unwrap();
        assert_eq!(two.zeta_pow(ZetaPart::P, 1), two.from_int(-1));
        let ring = z3();
        let z = ring.zeta_pow(ZetaPart::D, 1);
        let z2 = ring.zeta_pow(ZetaPart::D, 2);
        assert_eq!(z2, ring.from_int(-1).sub(&z).unwrap());
        assert_eq!(z.add(&z2).unwrap(), ring.from_int(-1));
    }

    #[test]
    fn quadratic_gauss_identity() {
        // (zeta_3 - zeta_3^2)^2 = -3, here with zeta_3 the p-part (p = 3)
        let ring = CycloRing::new(3, 1).unwrap();
        let g = ring
            .zeta_pow(ZetaPart::P, 1)
            .sub(&ring.zeta_pow(ZetaPart::P, 2))
            .unwrap();
        assert_eq!(g.mul(&g).unwrap(), ring.from_int(-3));
        // and with zeta_3 the d-part
        let ring = z3();
        let g = ring
            .zeta_pow(ZetaPart::D, 1)
            .sub(&ring.zeta_pow(ZetaPart::D, 2))
            .unwrap();
        assert_eq!(g.mul(&g).unwrap(), ring.from_int(-3));
    }

    #[test]
    fn exact_division() {
        let ring = z3();
        let z = ring.zeta_pow(ZetaPart::D, 1);
        let two = BigInt::from(2);
        let x = ring.from_int(2).add(&z.scale(&two)).unwrap();
        assert_eq!(x.exact_div_int(&two).unwrap(), ring.one().add(&z).unwrap());
        assert_eq!(x.exact_div_int(&BigInt::one()).unwrap(), x);
        let y = ring.one().add(&z).unwrap();
        assert!(matches!(y.exact_div_int(&two), Err(Error::NotDivisible(_))));
    }

    #[test]
    fn ring_mismatch() {
        let a = CycloRing::new(3, 2).unwrap().one();
        let b = CycloRing::new(3, 4).unwrap().one();
        assert_eq!(a.add(&b), Err(Error::RingMismatch));
        assert_eq!(a.mul(&b), Err(Error::RingMismatch));
    }

    #[test]
    fn json_round_trip() {
        let ring = CycloRing::new(5, 4).unwrap();
        let x = ring.zeta_pow(ZetaPart::P, 3).mul(&ring.zeta_pow(ZetaPart::D, 3)).unwrap();
        let j: CycloJson = serde_json::from_value(x.to_json()).unwrap();
        assert_eq!(j.into_elem().unwrap(), x);
        let text = serde_json::to_string(&CycloJson::from(&ring.from_int(7))).unwrap();
        assert_eq!(text, r#"{"p":5,"d":4,"coeffs":[[7,0],[0,0],[0,0],[0,0]]}"#);
    }

    #[test]
    fn embedding_between_d_parts() {
        let small = CycloRing::new(5, 2).unwrap();
        let big = CycloRing::new(5, 4).unwrap();
        let minus_one = small.zeta_pow(ZetaPart::D, 1);
        assert_eq!(minus_one.embed_into(&big).unwrap(), big.from_int(-1));
        let i = big.zeta_pow(ZetaPart::D, 1);
        assert_eq!(i.mul(&i).unwrap(), minus_one.embed_into(&big).unwrap());
    }
}
