//! Deterministic arithmetic in `F_{p^n}`.
//!
//! A field is presented as `F_p[x]/(f)` where `f` is the first monic
//! irreducible polynomial of degree `n` when candidates are scanned by the
//! integer encoding `c_0 + c_1 p + ... + c_{n-1} p^{n-1}` of their non-leading
//! coefficients. Degree-one fields use `f = x`, so elements are plain residues.
//! The same encoding orders elements; "lex-smallest" always refers to it.

pub(crate) mod poly;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Elements of the field are stored as coefficient vectors over this basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    p: u64,
    n: usize,
    /// Monic defining polynomial, little-endian, length `n + 1`.
    modulus: Vec<u64>,
    order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
}

impl FieldSpec {
    /// Builds `F_{p^n}` with the lex-smallest irreducible defining polynomial.
    pub fn new(p: u64, n: usize) -> Result<Self> {
        if !poly::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::BadParameters("extension degree must be at least 1".into()));
        }
        let order = (0..n)
            .try_fold(1u64, |acc, _| acc.checked_mul(p))
            .ok_or_else(|| Error::BadParameters(format!("{p}^{n} does not fit in 64 bits")))?;
        if n == 1 {
            return Ok(FieldSpec { p, n, modulus: vec![0, 1], order });
        }
        for code in 0..order {
            let mut f = decode_digits(code, p, n);
            f.push(1);
            if poly::is_irreducible(&f, p) {
                return Ok(FieldSpec { p, n, modulus: f, order });
            }
        }
        Err(Error::InternalInconsistency(format!(
            "no irreducible polynomial of degree {n} over F_{p}"
        )))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Full monic defining polynomial, little-endian.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { coeffs: vec![0; self.n] }
    }

    pub fn one(&self) -> FieldElement {
        self.constant(1)
    }

    pub fn constant(&self, c: u64) -> FieldElement {
        let mut coeffs = vec![0; self.n];
        coeffs[0] = c % self.p;
        FieldElement { coeffs }
    }

    /// Class of `x` in `F_p[x]/(f)`; this is `0` for degree-one fields.
    pub fn x(&self) -> FieldElement {
        self.element(&[0, 1])
    }

    /// Reduces an arbitrary polynomial in `x` into the field.
    pub fn element(&self, coeffs: &[u64]) -> FieldElement {
        let reduced: Vec<u64> = coeffs.iter().map(|c| c % self.p).collect();
        let r = poly::rem(&reduced, &self.modulus, self.p);
        self.pad(r)
    }

    fn pad(&self, mut v: Vec<u64>) -> FieldElement {
        v.resize(self.n, 0);
        FieldElement { coeffs: v }
    }

    /// Element with encoding `code = sum c_i p^i`.
    pub fn from_encoding(&self, code: u64) -> FieldElement {
        FieldElement { coeffs: decode_digits(code % self.order, self.p, self.n) }
    }

    pub fn encode(&self, x: &FieldElement) -> u64 {
        x.coeffs.iter().rev().fold(0u64, |acc, &c| acc * self.p + c)
    }

    pub fn is_zero(&self, x: &FieldElement) -> bool {
        x.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| (x + y) % self.p)
            .collect();
        FieldElement { coeffs }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| (x + self.p - y) % self.p)
            .collect();
        FieldElement { coeffs }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let n = self.n;
        let p = self.p as u128;
        let mut prod = vec![0u128; 2 * n - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u128 * y as u128) % p;
            }
        }
        // x^n = -(f_0 + ... + f_{n-1} x^{n-1})
        for k in (n..2 * n - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &fc) in self.modulus[..n].iter().enumerate() {
                if fc != 0 {
                    let t = c * fc as u128 % p;
                    prod[k - n + i] = (prod[k - n + i] + p - t) % p;
                }
            }
        }
        FieldElement { coeffs: prod[..n].iter().map(|&c| c as u64).collect() }
    }

    pub fn scale(&self, a: &FieldElement, c: u64) -> FieldElement {
        let coeffs = a
            .coeffs
            .iter()
            .map(|&x| ((x as u128 * (c % self.p) as u128) % self.p as u128) as u64)
            .collect();
        FieldElement { coeffs }
    }

    pub fn pow(&self, a: &FieldElement, mut e: u128) -> FieldElement {
        let mut result = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if self.is_zero(a) {
            return Err(Error::ZeroArgument);
        }
        Ok(self.pow(a, (self.order - 2) as u128))
    }

    pub fn frobenius(&self, a: &FieldElement) -> FieldElement {
        self.pow(a, self.p as u128)
    }

    /// Absolute trace `sum_{i<n} x^{p^i}`, an element of the prime field.
    pub fn trace_to_prime(&self, x: &FieldElement) -> u64 {
        let mut acc = self.zero();
        let mut conj = x.clone();
        for _ in 0..self.n {
            acc = self.add(&acc, &conj);
            conj = self.frobenius(&conj);
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0));
        acc.coeffs[0]
    }

    /// `Tr(x^i)` for `i < n`; the trace is the dot product of an element's
    /// coefficients with this vector.
    pub fn trace_form(&self) -> Vec<u64> {
        (0..self.n)
            .map(|i| {
                let mut v = vec![0u64; i + 1];
                v[i] = 1;
                self.trace_to_prime(&self.element(&v))
            })
            .collect()
    }

    /// Elements in increasing encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order).map(move |c| self.from_encoding(c))
    }

    pub fn is_generator(&self, g: &FieldElement) -> bool {
        if self.is_zero(g) {
            return false;
        }
        let m = (self.order - 1) as u128;
        let one = self.one();
        poly::prime_factors_u128(m)
            .into_iter()
            .all(|l| self.pow(g, m / l) != one)
    }

    /// Multiplicative generator with the smallest encoding.
    pub fn primitive_root(&self) -> FieldElement {
        (1..self.order)
            .map(|c| self.from_encoding(c))
            .find(|g| self.is_generator(g))
            .expect("finite field has a cyclic unit group")
    }

    /// Discrete logarithm of `x` to base `g` in `[0, q - 2]`.
    pub fn dlog(&self, x: &FieldElement, g: &FieldElement) -> Result<u64> {
        if self.is_zero(x) {
            return Err(Error::ZeroArgument);
        }
        let m = self.order - 1;
        if m <= 1 << 12 {
            let mut acc = self.one();
            for k in 0..m {
                if &acc == x {
                    return Ok(k);
                }
                acc = self.mul(&acc, g);
            }
            return Err(Error::BadParameters("element not in the subgroup of the base".into()));
        }
        let step = (m as f64).sqrt().ceil() as u64;
        let mut baby = HashMap::with_capacity(step as usize);
        let mut acc = self.one();
        for j in 0..step {
            baby.entry(self.encode(&acc)).or_insert(j);
            acc = self.mul(&acc, g);
        }
        let giant = self.inv(&self.pow(g, step as u128))?;
        let mut y = x.clone();
        for i in 0..=step {
            if let Some(&j) = baby.get(&self.encode(&y)) {
                return Ok((i * step + j) % m);
            }
            y = self.mul(&y, &giant);
        }
        Err(Error::BadParameters("element not in the subgroup of the base".into()))
    }

    /// Evaluates a polynomial with prime-field coefficients at `x`.
    pub fn eval_prime_poly(&self, coeffs: &[u64], x: &FieldElement) -> FieldElement {
        coeffs.iter().rev().fold(self.zero(), |acc, &c| {
            self.add(&self.mul(&acc, x), &self.constant(c))
        })
    }

    /// Minimal polynomial of `x` over `F_p`, monic, little-endian.
    pub fn minimal_polynomial(&self, x: &FieldElement) -> Vec<u64> {
        let mut conjugates = vec![x.clone()];
        loop {
            let next = self.frobenius(conjugates.last().unwrap());
            if next == conjugates[0] {
                break;
            }
            conjugates.push(next);
        }
        // prod (X - c) with coefficients in the field
        let mut acc: Vec<FieldElement> = vec![self.one()];
        for c in &conjugates {
            let mut next = vec![self.zero(); acc.len() + 1];
            for (i, a) in acc.iter().enumerate() {
                next[i + 1] = self.add(&next[i + 1], a);
                next[i] = self.sub(&next[i], &self.mul(a, c));
            }
            acc = next;
        }
        acc.iter()
            .map(|c| {
                debug_assert!(c.coeffs[1..].iter().all(|&v| v == 0));
                c.coeffs[0]
            })
            .collect()
    }
}

fn decode_digits(mut code: u64, p: u64, n: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(code % p);
        code /= p;
    }
    out
}

/// Embedding `F_{p^a} -> F_{p^b}` sending the class of `x` to the
/// lex-smallest root of the subfield's defining polynomial.
#[derive(Clone, Debug)]
pub struct Embedding {
    sub: FieldSpec,
    sup: FieldSpec,
    image: FieldElement,
    /// `image^i` for `i < sub.degree()`.
    basis: Vec<FieldElement>,
}

impl Embedding {
    pub fn new(sub: &FieldSpec, sup: &FieldSpec) -> Result<Self> {
        if sub.p != sup.p || sup.n % sub.n != 0 {
            return Err(Error::NotSubfield { sub: sub.order, sup: sup.order });
        }
        let image = if sub.n == 1 {
            sup.zero()
        } else {
            let g = sup.primitive_root();
            let step = ((sup.order - 1) / (sub.order - 1)) as u128;
            let h = sup.pow(&g, step);
            let mut roots = Vec::new();
            let mut cand = sup.one();
            for _ in 0..sub.order - 1 {
                if sup.is_zero(&sup.eval_prime_poly(&sub.modulus, &cand)) {
                    roots.push(cand.clone());
                }
                cand = sup.mul(&cand, &h);
            }
            roots
                .into_iter()
                .min_by_key(|r| sup.encode(r))
                .ok_or_else(|| Error::InternalInconsistency("defining polynomial has no root".into()))?
        };
        let mut basis = Vec::with_capacity(sub.n);
        let mut acc = sup.one();
        for _ in 0..sub.n {
            basis.push(acc.clone());
            acc = sup.mul(&acc, &image);
        }
        Ok(Embedding { sub: sub.clone(), sup: sup.clone(), image, basis })
    }

    pub fn sub(&self) -> &FieldSpec {
        &self.sub
    }

    pub fn sup(&self) -> &FieldSpec {
        &self.sup
    }

    pub fn image(&self) -> &FieldElement {
        &self.image
    }

    pub fn apply(&self, x: &FieldElement) -> FieldElement {
        let mut acc = self.sup.zero();
        for (c, b) in x.coeffs.iter().zip(&self.basis) {
            if *c != 0 {
                acc = self.sup.add(&acc, &self.sup.scale(b, *c));
            }
        }
        acc
    }

    /// Solves `apply(z) = y` over `F_p`.
    pub fn preimage(&self, y: &FieldElement) -> Option<FieldElement> {
        let p = self.sup.p;
        let rows = self.sup.n;
        let cols = self.sub.n;
        // augmented matrix rows x (cols + 1)
        let mut m: Vec<Vec<u64>> = (0..rows)
            .map(|r| {
                let mut row: Vec<u64> = self.basis.iter().map(|b| b.coeffs[r]).collect();
                row.push(y.coeffs[r]);
                row
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
            m.swap(r, pr);
            let inv = poly::inv_mod(m[r][c], p);
            for v in m[r].iter_mut() {
                *v = ((*v as u128 * inv as u128) % p as u128) as u64;
            }
            for i in 0..rows {
                if i != r && m[i][c] != 0 {
                    let f = m[i][c];
                    for k in 0..=cols {
                        let t = ((f as u128 * m[r][k] as u128) % p as u128) as u64;
                        m[i][k] = (m[i][k] + p - t) % p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        if m[r..].iter().any(|row| row[cols] != 0) {
            return None;
        }
        let mut coeffs = vec![0; cols];
        for (i, &c) in pivots.iter().enumerate() {
            coeffs[c] = m[i][cols];
        }
        Some(FieldElement { coeffs })
    }

    /// Relative norm to the subfield, computed as `x^{(Q-1)/(q-1)}`.
    pub fn norm(&self, x: &FieldElement) -> Result<FieldElement> {
        if self.sup.is_zero(x) {
            return Ok(self.sub.zero());
        }
        let e = ((self.sup.order - 1) / (self.sub.order - 1)) as u128;
        let y = self.sup.pow(x, e);
        self.preimage(&y).ok_or_else(|| {
            Error::InternalInconsistency("norm does not lie in the embedded subfield".into())
        })
    }
}

/// `norm_to` as a free function: the norm of `x` down to `target` via `emb`.
pub fn norm_to(x: &FieldElement, target: &FieldSpec, emb: &Embedding) -> Result<FieldElement> {
    if emb.sub() != target {
        return Err(Error::NotSubfield { sub: target.order(), sup: emb.sup().order() });
    }
    emb.norm(x)
}

/// Horner evaluation of `sum emb(a_i) x^i`.
pub fn eval_poly(coeffs: &[FieldElement], x: &FieldElement, emb: &Embedding) -> FieldElement {
    let sup = emb.sup();
    coeffs
        .iter()
        .rev()
        .fold(sup.zero(), |acc, a| sup.add(&sup.mul(&acc, x), &emb.apply(a)))
}
