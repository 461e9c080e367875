//! Exact character sums over finite fields and the L-polynomials they define.
//!
//! Every sum is a flat enumeration of `k_r^x = <g>` as `x = g^t`. With the
//! table `T[k] = Tr(g^k)` the additive part of each term is
//! `sum_i T[log a_i + i t]`, and the multiplicative part is linear in `t`, so
//! the inner loop is table lookups only. Terms are binned by
//! `(trace, exponent of zeta_d)` and the bins become a [`CycloElem`].

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclotomic::{CycloElem, CycloJson, CycloRing};
use crate::error::{Error, Result};
use crate::field::{Embedding, FieldElement, FieldSpec};

/// Default enumeration bound on `q^r`.
pub const DEFAULT_MAX_ENUM: u64 = 1 << 24;

/// Monic `P = X^e + a_{e-1} X^{e-1} + ... + a_1 X` over `F_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySpec {
    base: FieldSpec,
    /// `a_1, ..., a_{e-1}`
    lower: Vec<FieldElement>,
}

impl PolySpec {
    pub fn new(base: &FieldSpec, lower: Vec<FieldElement>) -> Result<Self> {
        let e = lower.len() as u64 + 1;
        if e % base.p() == 0 {
            return Err(Error::NotCoprime { a: base.p(), b: e });
        }
        if lower.iter().any(|a| a.coeffs().len() != base.degree()) {
            return Err(Error::BadParameters("coefficient from a different field".into()));
        }
        Ok(PolySpec { base: base.clone(), lower })
    }

    /// Coefficients `a_1..a_{e-1}` given by their integer encodings.
    pub fn from_encodings(base: &FieldSpec, codes: &[u64]) -> Result<Self> {
        if let Some(&c) = codes.iter().find(|&&c| c >= base.order()) {
            return Err(Error::BadParameters(format!("encoding {c} is not an element of F_{}", base.order())));
        }
        Self::new(base, codes.iter().map(|&c| base.from_encoding(c)).collect())
    }

    /// All monic degree-`e` polynomials without constant term, `a_1` varying
    /// fastest.
    pub fn all(base: &FieldSpec, e: u64) -> Result<Vec<PolySpec>> {
        let q = base.order();
        let count = (q as u128).checked_pow(e as u32 - 1).unwrap_or(u128::MAX);
        if count > 1 << 24 {
            return Err(Error::EnumerationBound { size: count, bound: 1 << 24 });
        }
        (0..count as u64)
            .map(|mut idx| {
                let codes: Vec<u64> = (1..e)
                    .map(|_| {
                        let c = idx % q;
                        idx /= q;
                        c
                    })
                    .collect();
                Self::from_encodings(base, &codes)
            })
            .collect()
    }

    pub fn base(&self) -> &FieldSpec {
        &self.base
    }

    pub fn degree(&self) -> u64 {
        self.lower.len() as u64 + 1
    }

    /// Coefficient of `X^i`, `0 <= i <= e`.
    pub fn coeff(&self, i: usize) -> FieldElement {
        let e = self.lower.len() + 1;
        match i {
            0 => self.base.zero(),
            i if i == e => self.base.one(),
            i if i < e => self.lower[i - 1].clone(),
            _ => self.base.zero(),
        }
    }

    /// Dense coefficient list of length `e + 1`.
    pub fn coefficients(&self) -> Vec<FieldElement> {
        (0..=self.lower.len() + 1).map(|i| self.coeff(i)).collect()
    }

    pub fn encodings(&self) -> Vec<u64> {
        self.lower.iter().map(|a| self.base.encode(a)).collect()
    }

    /// The same polynomial with coefficients pushed into a larger field.
    pub fn base_change(&self, emb: &Embedding) -> Result<PolySpec> {
        if emb.sub() != &self.base {
            return Err(Error::NotSubfield { sub: self.base.order(), sup: emb.sup().order() });
        }
        PolySpec::new(emb.sup(), self.lower.iter().map(|a| emb.apply(a)).collect())
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let f = &self.base;
        self.coefficients()
            .iter()
            .rev()
            .fold(f.zero(), |acc, a| f.add(&f.mul(&acc, x), a))
    }
}

/// Order `d` and exponent `kappa` of a twist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TwistSpec {
    pub d: u64,
    pub kappa: u64,
}

impl TwistSpec {
    pub fn new(d: u64, kappa: u64) -> Result<Self> {
        if d == 0 || kappa >= d {
            return Err(Error::BadParameters(format!("need 0 <= kappa < d, got kappa = {kappa}, d = {d}")));
        }
        Ok(TwistSpec { d, kappa })
    }

    /// Checks `d | q - 1` and `gcd(p, d) = 1` for a nontrivial twist.
    pub fn validate(&self, base: &FieldSpec) -> Result<()> {
        if self.kappa == 0 {
            return Ok(());
        }
        if self.d < 2 || base.p().gcd(&self.d) != 1 {
            return Err(Error::NotCoprime { a: base.p(), b: self.d });
        }
        if (base.order() - 1) % self.d != 0 {
            return Err(Error::OrderMismatch { d: self.d, modulus: base.order() - 1 });
        }
        Ok(())
    }
}

/// `chi(g^l) = zeta_d^l` for a fixed generator `g` of `F_q^x`. The power
/// `chi^kappa` is a well-defined character whenever `d | kappa (q - 1)`.
#[derive(Clone, Debug)]
pub struct MultiplicativeCharacter {
    field: FieldSpec,
    generator: FieldElement,
    d: u64,
}

impl MultiplicativeCharacter {
    /// The character pinned by the lex-smallest generator; needs `d | q - 1`.
    pub fn new(field: &FieldSpec, d: u64) -> Result<Self> {
        if d == 0 || (field.order() - 1) % d != 0 {
            return Err(Error::OrderMismatch { d, modulus: field.order() - 1 });
        }
        Ok(MultiplicativeCharacter { field: field.clone(), generator: field.primitive_root(), d })
    }

    pub fn with_generator(field: &FieldSpec, generator: FieldElement, d: u64) -> Result<Self> {
        if !field.is_generator(&generator) {
            return Err(Error::BadParameters("character base is not a generator".into()));
        }
        if d == 0 || field.p().gcd(&d) != 1 {
            return Err(Error::NotCoprime { a: field.p(), b: d });
        }
        Ok(MultiplicativeCharacter { field: field.clone(), generator, d })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn generator(&self) -> &FieldElement {
        &self.generator
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    fn check_power(&self, kappa: u64) -> Result<()> {
        let m = (self.field.order() - 1) as u128;
        if (kappa as u128 * m) % self.d as u128 != 0 {
            return Err(Error::OrderMismatch { d: self.d, modulus: self.field.order() - 1 });
        }
        Ok(())
    }

    /// Exponent `b` with `chi^kappa(x) = zeta_d^b`.
    pub fn exponent(&self, x: &FieldElement, kappa: u64) -> Result<u64> {
        self.check_power(kappa)?;
        let l = self.field.dlog(x, &self.generator)?;
        Ok(((l as u128 * kappa as u128) % self.d as u128) as u64)
    }
}

enum TraceTable {
    Narrow(Vec<u16>),
    Wide(Vec<u32>),
}

/// `Tr(g^k)` for the lex-smallest generator `g` of `F_{p^n}`.
pub struct FieldTables {
    field: FieldSpec,
    generator: FieldElement,
    trace: TraceTable,
}

impl FieldTables {
    fn build(field: FieldSpec) -> Self {
        let g = field.primitive_root();
        let n = field.degree();
        let p = field.p();
        let tf = field.trace_form();
        // column j = x^j * g
        let cols: Vec<Vec<u64>> = (0..n)
            .map(|j| {
                let mut v = vec![0u64; j + 1];
                v[j] = 1;
                field.mul(&field.element(&v), &g).coeffs().to_vec()
            })
            .collect();
        let m = (field.order() - 1) as usize;
        let small = (p as u128) * (p as u128) * (n as u128) < (1u128 << 63);
        let mut cur = vec![0u64; n];
        cur[0] = 1;
        let mut next = vec![0u64; n];
        let mut out: Vec<u32> = Vec::with_capacity(m);
        for _ in 0..m {
            let tr = if small {
                cur.iter().zip(&tf).map(|(a, b)| a * b).sum::<u64>() % p
            } else {
                (cur.iter().zip(&tf).map(|(a, b)| *a as u128 * *b as u128).sum::<u128>() % p as u128) as u64
            };
            out.push(tr as u32);
            for (i, slot) in next.iter_mut().enumerate() {
                *slot = if small {
                    cur.iter().zip(&cols).map(|(c, col)| c * col[i]).sum::<u64>() % p
                } else {
                    (cur.iter().zip(&cols).map(|(c, col)| *c as u128 * col[i] as u128).sum::<u128>()
                        % p as u128) as u64
                };
            }
            std::mem::swap(&mut cur, &mut next);
        }
        let trace = if p <= u16::MAX as u64 {
            TraceTable::Narrow(out.into_iter().map(|t| t as u16).collect())
        } else {
            TraceTable::Wide(out)
        };
        FieldTables { field, generator: g, trace }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn generator(&self) -> &FieldElement {
        &self.generator
    }

    /// `Tr(g^k)`
    pub fn trace_of_power(&self, k: u64) -> u64 {
        match &self.trace {
            TraceTable::Narrow(v) => v[k as usize] as u64,
            TraceTable::Wide(v) => v[k as usize] as u64,
        }
    }
}

/// `k_r` seen from `k`: tables of `k_r`, the embedding `k -> k_r`, and the
/// norm of the generator of `k_r`.
pub struct ExtensionView {
    tables: Arc<FieldTables>,
    emb: Embedding,
    /// `(Q - 1)/(q - 1)`
    step: u64,
    /// `N_{k_r/k}(g)`, a generator of `k^x`.
    norm_generator: FieldElement,
}

impl ExtensionView {
    pub fn tables(&self) -> &FieldTables {
        &self.tables
    }

    pub fn embedding(&self) -> &Embedding {
        &self.emb
    }

    pub fn norm_generator(&self) -> &FieldElement {
        &self.norm_generator
    }

    /// `log_g(emb(a))` for `a` in the base field, `None` for `a = 0`.
    fn log_of_base(&self, a: &FieldElement) -> Result<Option<u64>> {
        let base = self.emb.sub();
        if base.is_zero(a) {
            return Ok(None);
        }
        Ok(Some(self.step * base.dlog(a, &self.norm_generator)?))
    }
}

/// Which sum a series holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SeriesKind {
    Twisted { d: u64, kappa: u64 },
    Additive,
    Power { d: u64 },
}

/// `S_1, ..., S_R` for one polynomial.
#[derive(Clone, Debug)]
pub struct CharSumSeries {
    pub kind: SeriesKind,
    pub sums: Vec<CycloElem>,
}

/// Shared enumeration engine; caches field tables across polynomials.
pub struct SumEngine {
    max_enum: u64,
    tables: Mutex<HashMap<(u64, usize), Arc<FieldTables>>>,
    views: Mutex<HashMap<(FieldSpec, usize), Arc<ExtensionView>>>,
}

impl Default for SumEngine {
    fn default() -> Self {
        SumEngine::new(DEFAULT_MAX_ENUM)
    }
}

struct Term {
    log: u64,
    inc: u64,
}

impl SumEngine {
    pub fn new(max_enum: u64) -> Self {
        SumEngine { max_enum, tables: Mutex::new(HashMap::new()), views: Mutex::new(HashMap::new()) }
    }

    pub fn max_enum(&self) -> u64 {
        self.max_enum
    }

    fn check_bound(&self, base: &FieldSpec, r: usize) -> Result<()> {
        let size = (base.order() as u128).checked_pow(r as u32).unwrap_or(u128::MAX);
        if size > self.max_enum as u128 {
            return Err(Error::EnumerationBound { size, bound: self.max_enum });
        }
        Ok(())
    }

    pub fn tables(&self, p: u64, n: usize) -> Result<Arc<FieldTables>> {
        if let Some(t) = self.tables.lock().unwrap().get(&(p, n)) {
            return Ok(t.clone());
        }
        let field = FieldSpec::new(p, n)?;
        let t = Arc::new(FieldTables::build(field));
        self.tables.lock().unwrap().insert((p, n), t.clone());
        Ok(t)
    }

    /// The degree-`r` extension of `base`, with its tables.
    pub fn view(&self, base: &FieldSpec, r: usize) -> Result<Arc<ExtensionView>> {
        if r == 0 {
            return Err(Error::BadParameters("extension degree r must be >= 1".into()));
        }
        self.check_bound(base, r)?;
        let key = (base.clone(), r);
        if let Some(v) = self.views.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let tables = self.tables(base.p(), base.degree() * r)?;
        let emb = Embedding::new(base, tables.field())?;
        let step = (tables.field().order() - 1) / (base.order() - 1);
        let norm_generator = emb.norm(tables.generator())?;
        let view = Arc::new(ExtensionView { tables, emb, step, norm_generator });
        self.views.lock().unwrap().insert(key, view.clone());
        Ok(view)
    }

    fn terms(&self, view: &ExtensionView, poly: &PolySpec, stretch: u64) -> Result<Vec<Term>> {
        let m = view.tables.field().order() - 1;
        let mut terms = Vec::new();
        for i in 1..=poly.degree() as usize {
            if let Some(log) = view.log_of_base(&poly.coeff(i))? {
                let inc = ((i as u128 * stretch as u128) % m as u128) as u64;
                terms.push(Term { log: log % m, inc });
            }
        }
        Ok(terms)
    }

    /// Histogram over `t in [0, Q-1)` of `(sum_i T[log_i + inc_i t], b0 t mod d)`.
    fn histogram(&self, view: &ExtensionView, terms: &[Term], b_step: u64, d: u64) -> Vec<i64> {
        let tables = &view.tables;
        let p = tables.field().p();
        let m = tables.field().order() - 1;
        let width = d as usize;
        const CHUNK: u64 = 1 << 16;
        let chunks = m.div_ceil(CHUNK);
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let start = c * CHUNK;
                let end = (start + CHUNK).min(m);
                let mut hist = vec![0i64; p as usize * width];
                let mut idx: Vec<u64> = terms
                    .iter()
                    .map(|t| ((t.log as u128 + t.inc as u128 * start as u128) % m as u128) as u64)
                    .collect();
                let incs: Vec<u64> = terms.iter().map(|t| t.inc).collect();
                let mut b = ((b_step as u128 * start as u128) % d as u128) as u64;
                match &tables.trace {
                    TraceTable::Narrow(tab) => {
                        scan(tab, &mut idx, &incs, m, p, &mut b, b_step, d, end - start, &mut hist)
                    }
                    TraceTable::Wide(tab) => {
                        scan(tab, &mut idx, &incs, m, p, &mut b, b_step, d, end - start, &mut hist)
                    }
                }
                hist
            })
            .reduce(
                || vec![0i64; p as usize * width],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            )
    }

    fn to_elem(ring: &CycloRing, hist: &[i64], d: u64) -> CycloElem {
        let table: Vec<Vec<i64>> = hist.chunks(d as usize).map(|r| r.to_vec()).collect();
        ring.from_exponent_table(&table)
    }

    /// `S_r(P, chi^kappa) = sum_{x in k_r^x} zeta_p^{Tr P(x)} chi^kappa(N x)`.
    pub fn twisted_sum(
        &self,
        poly: &PolySpec,
        chi: &MultiplicativeCharacter,
        kappa: u64,
        r: usize,
    ) -> Result<CycloElem> {
        if chi.field() != poly.base() {
            return Err(Error::BadParameters("character and polynomial live over different fields".into()));
        }
        let view = self.view(poly.base(), r)?;
        let b_step = chi.exponent(&view.norm_generator, kappa)?;
        let terms = self.terms(&view, poly, 1)?;
        let hist = self.histogram(&view, &terms, b_step, chi.d());
        let ring = CycloRing::new(poly.base().p(), chi.d())?;
        Ok(Self::to_elem(&ring, &hist, chi.d()))
    }

    /// `sum_{x in k_r} zeta_p^{Tr P(x)}`, an element of `Z[zeta_p]`.
    pub fn additive_sum(&self, poly: &PolySpec, r: usize) -> Result<CycloElem> {
        self.power_sum(poly, 1, r)
    }

    /// `S_r(P(x^d)) = sum_{x in k_r} zeta_p^{Tr P(x^d)}`.
    pub fn power_sum(&self, poly: &PolySpec, d: u64, r: usize) -> Result<CycloElem> {
        let p = poly.base().p();
        if d == 0 || p.gcd(&d) != 1 {
            return Err(Error::NotCoprime { a: p, b: d });
        }
        let view = self.view(poly.base(), r)?;
        let terms = self.terms(&view, poly, d)?;
        let mut hist = self.histogram(&view, &terms, 0, 1);
        hist[0] += 1; // x = 0
        let ring = CycloRing::new(p, 1)?;
        Ok(Self::to_elem(&ring, &hist, 1))
    }

    /// `G(Psi, chi^kappa) = sum_{x in F_q^x} zeta_p^{Tr x} chi^kappa(x)`.
    pub fn gauss_sum(&self, field: &FieldSpec, d: u64, kappa: u64) -> Result<CycloElem> {
        TwistSpec::new(d, kappa)?;
        if kappa == 0 {
            return Err(Error::BadParameters("Gauss sum needs a nontrivial character".into()));
        }
        let chi = MultiplicativeCharacter::new(field, d)?;
        let x = PolySpec::new(field, Vec::new())?;
        self.twisted_sum(&x, &chi, kappa, 1)
    }

    pub fn twisted_series(
        &self,
        poly: &PolySpec,
        chi: &MultiplicativeCharacter,
        kappa: u64,
        count: usize,
    ) -> Result<CharSumSeries> {
        let sums = (1..=count)
            .map(|r| self.twisted_sum(poly, chi, kappa, r))
            .collect::<Result<_>>()?;
        Ok(CharSumSeries { kind: SeriesKind::Twisted { d: chi.d(), kappa }, sums })
    }

    pub fn power_series(&self, poly: &PolySpec, d: u64, count: usize) -> Result<CharSumSeries> {
        let sums = (1..=count)
            .map(|r| self.power_sum(poly, d, r))
            .collect::<Result<_>>()?;
        let kind = if d == 1 { SeriesKind::Additive } else { SeriesKind::Power { d } };
        Ok(CharSumSeries { kind, sums })
    }

    /// `L(P, chi^kappa; T)`, of degree `e`.
    pub fn twisted_l_function(
        &self,
        poly: &PolySpec,
        chi: &MultiplicativeCharacter,
        kappa: u64,
    ) -> Result<LPolynomial> {
        if kappa == 0 {
            return Err(Error::BadParameters("twisted L-function needs kappa >= 1".into()));
        }
        let e = poly.degree() as usize;
        l_polynomial(&self.twisted_series(poly, chi, kappa, e + 1)?, e)
    }

    /// `L(P; T)` of the additive sums, of degree `e - 1`.
    pub fn additive_l_function(&self, poly: &PolySpec) -> Result<LPolynomial> {
        let e = poly.degree() as usize;
        l_polynomial(&self.power_series(poly, 1, e)?, e - 1)
    }

    /// `L(P(x^d); T)`, of degree `de - 1`.
    pub fn power_l_function(&self, poly: &PolySpec, d: u64) -> Result<LPolynomial> {
        let deg = (d * poly.degree()) as usize - 1;
        l_polynomial(&self.power_series(poly, d, deg + 1)?, deg)
    }
}

/// One factor `L(P, chi^kappa; T^{d_i})` of the power L-function, computed
/// over `k_{d_i}`; `kappa = 0` is the additive factor over `k`.
#[derive(Clone, Debug)]
pub struct PowerFactor {
    pub kappa: u64,
    pub orbit_size: u64,
    /// L-function over `k_{d_i}` before substituting `T^{d_i}`
    pub l: LPolynomial,
}

impl SumEngine {
    /// `chi` of order `d` on `k_s`, `s | M`, pinned by `N_{k_M/k_s}(g_M)` where
    /// `M` is the order of `q` mod `d` and `g_M` the generator of `k_M`.
    /// These characters are compatible under the norm maps.
    pub fn compatible_character(&self, base: &FieldSpec, d: u64, s: usize) -> Result<MultiplicativeCharacter> {
        let big_m = order_mod(base.order(), d);
        if big_m % s != 0 {
            return Err(Error::BadParameters(format!("{s} does not divide the order {big_m} of q mod d")));
        }
        let top = self.tables(base.p(), base.degree() * big_m)?;
        let sub = FieldSpec::new(base.p(), base.degree() * s)?;
        let emb = Embedding::new(&sub, top.field())?;
        let g = emb.norm(top.generator())?;
        MultiplicativeCharacter::with_generator(&sub, g, d)
    }

    /// `L(P; T)` and `L(P, chi^{kappa_i}; T)` over `k_{d_i}` for each nonzero
    /// orbit `<kappa_i>_q` of size `d_i`.
    pub fn power_factors(&self, poly: &PolySpec, d: u64) -> Result<Vec<PowerFactor>> {
        let base = poly.base();
        let q = base.order();
        if base.p().gcd(&d) != 1 {
            return Err(Error::NotCoprime { a: base.p(), b: d });
        }
        let mut out = Vec::new();
        if poly.degree() > 1 {
            out.push(PowerFactor { kappa: 0, orbit_size: 1, l: self.additive_l_function(poly)? });
        }
        let mut seen = vec![false; d as usize];
        for kappa in 1..d {
            if seen[kappa as usize] {
                continue;
            }
            let mut size = 0u64;
            let mut k = kappa;
            while !seen[k as usize] {
                seen[k as usize] = true;
                size += 1;
                k = (k as u128 * q as u128 % d as u128) as u64;
            }
            let chi = self.compatible_character(base, d, size as usize)?;
            let emb = Embedding::new(base, chi.field())?;
            let lifted = poly.base_change(&emb)?;
            out.push(PowerFactor { kappa, orbit_size: size, l: self.twisted_l_function(&lifted, &chi, kappa)? });
        }
        Ok(out)
    }

    /// `prod_i L(P, chi^{kappa_i}; T^{d_i})` in `Z[zeta_p, zeta_d]`.
    pub fn power_factor_product(&self, poly: &PolySpec, d: u64) -> Result<LPolynomial> {
        let ring = CycloRing::new(poly.base().p(), d)?;
        let mut acc = LPolynomial::from_coeffs(vec![ring.one()])?;
        for f in self.power_factors(poly, d)? {
            acc = acc.mul(&f.l.embed_into(&ring)?.substitute_power(f.orbit_size as usize))?;
        }
        Ok(acc)
    }

    /// `1 + sum_{kappa < delta_r} S(P, chi_r^kappa)` over `k_r`, with
    /// `delta_r = gcd(d, q^r - 1)` and `chi_r` of order `delta_r` on `k_r`.
    pub fn power_sum_by_characters(&self, poly: &PolySpec, d: u64, r: usize) -> Result<CycloElem> {
        let view = self.view(poly.base(), r)?;
        let big = view.tables.field().clone();
        let delta = d.gcd(&(big.order() - 1));
        let lifted = poly.base_change(&view.emb)?;
        let chi = MultiplicativeCharacter::new(&big, delta)?;
        let ring = CycloRing::new(big.p(), delta)?;
        let mut acc = ring.one();
        for kappa in 0..delta {
            acc = acc.add(&self.twisted_sum(&lifted, &chi, kappa, 1)?)?;
        }
        Ok(acc)
    }
}

/// Multiplicative order of `q` mod `d` (1 for `d = 1`).
pub fn order_mod(q: u64, d: u64) -> usize {
    if d == 1 {
        return 1;
    }
    let mut x = q % d;
    let mut k = 1;
    while x != 1 {
        x = (x as u128 * q as u128 % d as u128) as u64;
        k += 1;
    }
    k
}

#[allow(clippy::too_many_arguments)]
#[inline]
fn scan<T: Copy + Into<u64>>(
    tab: &[T],
    idx: &mut [u64],
    incs: &[u64],
    m: u64,
    p: u64,
    b: &mut u64,
    b_step: u64,
    d: u64,
    count: u64,
    hist: &mut [i64],
) {
    let width = d as usize;
    for _ in 0..count {
        let mut tr = 0u64;
        for (i, inc) in idx.iter_mut().zip(incs) {
            tr += tab[*i as usize].into();
            *i += inc;
            if *i >= m {
                *i -= m;
            }
        }
        hist[(tr % p) as usize * width + *b as usize] += 1;
        *b += b_step;
        if *b >= d {
            *b -= d;
        }
    }
}

/// An L-function as an exact polynomial `c_0 + c_1 T + ... + c_deg T^deg`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPolynomial {
    ring: CycloRing,
    coeffs: Vec<CycloElem>,
}

impl LPolynomial {
    pub fn from_coeffs(coeffs: Vec<CycloElem>) -> Result<Self> {
        let ring = coeffs
            .first()
            .map(|c| c.ring().clone())
            .ok_or(Error::EmptyInput)?;
        if coeffs[0] != ring.one() {
            return Err(Error::BadParameters("constant coefficient must be 1".into()));
        }
        if coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
            return Err(Error::ZeroLeading { degree: coeffs.len() - 1 });
        }
        if coeffs.iter().any(|c| c.ring() != &ring) {
            return Err(Error::RingMismatch);
        }
        Ok(LPolynomial { ring, coeffs })
    }

    pub fn ring(&self) -> &CycloRing {
        &self.ring
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[CycloElem] {
        &self.coeffs
    }

    /// `L(T^k)`
    pub fn substitute_power(&self, k: usize) -> LPolynomial {
        let mut coeffs = vec![self.ring.zero(); self.degree() * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        LPolynomial { ring: self.ring.clone(), coeffs }
    }

    pub fn mul(&self, other: &LPolynomial) -> Result<LPolynomial> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        let mut coeffs = vec![self.ring.zero(); self.degree() + other.degree() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] = coeffs[i + j].add(&a.mul(b)?)?;
                }
            }
        }
        Ok(LPolynomial { ring: self.ring.clone(), coeffs })
    }

    pub fn embed_into(&self, ring: &CycloRing) -> Result<LPolynomial> {
        let coeffs = self.coeffs.iter().map(|c| c.embed_into(ring)).collect::<Result<_>>()?;
        Ok(LPolynomial { ring: ring.clone(), coeffs })
    }

    pub fn to_json(&self) -> Vec<CycloJson> {
        self.coeffs.iter().map(CycloJson::from).collect()
    }
}

/// Coefficients of `exp(sum_r S_r T^r / r)` via `n c_n = sum_{r=1}^n S_r c_{n-r}`,
/// checked to stop at `degree`: `c_{degree+1} = 0` and `c_degree != 0`.
pub fn l_polynomial(series: &CharSumSeries, degree: usize) -> Result<LPolynomial> {
    let sums = &series.sums;
    if sums.len() < degree + 1 {
        return Err(Error::BadParameters(format!(
            "need {} sums for degree {degree}, have {}",
            degree + 1,
            sums.len()
        )));
    }
    let ring = sums[0].ring().clone();
    let mut c = vec![ring.one()];
    for n in 1..=degree + 1 {
        let mut acc = ring.zero();
        for r in 1..=n {
            acc = acc.add(&sums[r - 1].mul(&c[n - r])?)?;
        }
        c.push(acc.exact_div_int(&BigInt::from(n))?);
    }
    let tail = c.pop().unwrap();
    if !tail.is_zero() {
        return Err(Error::NonVanishingTail { degree: degree + 1 });
    }
    if c[degree].is_zero() {
        return Err(Error::ZeroLeading { degree });
    }
    Ok(LPolynomial { ring, coeffs: c })
}
