//! Hasse polynomials evaluated at the coefficients of a given `P`, over `F_q`.
//! Only vanishing matters, so Teichmueller lifts are reduced mod `p`.

use std::collections::BTreeMap;

use num_integer::Integer;

use crate::char_sums::PolySpec;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::strat::orbits::OrbitDecomposition;
use crate::strat::tables::{ShiftTable, TwistCombinatorics};

/// Dense powers `P^0, P^1, ...` grown on demand.
pub struct PowerCache<'a> {
    poly: &'a PolySpec,
    powers: Vec<Vec<FieldElement>>,
}

impl<'a> PowerCache<'a> {
    pub fn new(poly: &'a PolySpec) -> Self {
        let one = poly.base().one();
        PowerCache { poly, powers: vec![vec![one]] }
    }

    /// `{P^nu}_t`, zero outside the support.
    pub fn coeff(&mut self, nu: i64, t: i64) -> FieldElement {
        let f = self.poly.base();
        if nu < 0 || t < 0 {
            return f.zero();
        }
        let nu = nu as usize;
        let base = self.poly.coefficients();
        while self.powers.len() <= nu {
            let last = self.powers.last().unwrap();
            let mut next = vec![f.zero(); last.len() + base.len() - 1];
            for (i, a) in last.iter().enumerate() {
                if f.is_zero(a) {
                    continue;
                }
                for (j, b) in base.iter().enumerate() {
                    if !f.is_zero(b) {
                        next[i + j] = f.add(&next[i + j], &f.mul(a, b));
                    }
                }
            }
            self.powers.push(next);
        }
        self.powers[nu].get(t as usize).cloned().unwrap_or_else(|| f.zero())
    }
}

/// Coefficient of `X^t` in `P^nu` over `F_q`.
pub fn poly_power_coeff(poly: &PolySpec, nu: u64, t: i64) -> FieldElement {
    PowerCache::new(poly).coeff(nu as i64, t)
}

/// `sum_{sigma in Sigma_n} sgn(sigma) prod_i {P^{nu_{i,sigma(i)}}}_{p i - sigma(i) - K}`
fn signed_sum(
    table: &ShiftTable,
    n: usize,
    cache: &mut PowerCache,
    field: &FieldSpec,
    cap: usize,
) -> Result<FieldElement> {
    let mut acc = field.zero();
    let (p, k) = (table.p as i64, table.k as i64);
    for (sigma, sgn) in table.sigma_set(n, cap)? {
        let mut term = field.one();
        for (idx, &s) in sigma.iter().enumerate() {
            let i = idx + 1;
            let c = cache.coeff(table.nu(i, s), p * i as i64 - s as i64 - k);
            term = field.mul(&term, &c);
            if field.is_zero(&term) {
                break;
            }
        }
        acc = if sgn > 0 { field.add(&acc, &term) } else { field.sub(&acc, &term) };
    }
    Ok(acc)
}

fn check_n(n: usize, max: u64) -> Result<()> {
    if n == 0 || n as u64 > max {
        return Err(Error::BadParameters(format!("n = {n} outside 1..={max}")));
    }
    Ok(())
}

/// `prod_{s < #<kappa>_p} P^(s)_{n,kappa}` at the coefficients of `P`.
pub fn hasse_twisted_eval(poly: &PolySpec, d: u64, kappa: u64, n: usize, cap: usize) -> Result<FieldElement> {
    let field = poly.base();
    let e = poly.degree();
    check_n(n, e)?;
    if kappa == 0 {
        return Err(Error::BadParameters("twisted Hasse polynomial needs kappa >= 1".into()));
    }
    let tables = TwistCombinatorics::new(field.p(), d, e, kappa)?;
    let mut cache = PowerCache::new(poly);
    let mut acc = field.one();
    for t in &tables.tables {
        acc = field.mul(&acc, &signed_sum(t, n, &mut cache, field, cap)?);
        if field.is_zero(&acc) {
            break;
        }
    }
    Ok(acc)
}

/// The `kappa = 0` analogue: `K = 0`, indices in `1..e-1`.
pub fn hasse_additive_eval(poly: &PolySpec, n: usize, cap: usize) -> Result<FieldElement> {
    let field = poly.base();
    let e = poly.degree();
    check_n(n, e - 1)?;
    let table = ShiftTable::new(field.p(), e, 0, e as usize - 1)?;
    signed_sum(&table, n, &mut PowerCache::new(poly), field, cap)
}

/// Product of the additive factors `n < e` and the twisted factors over
/// nonzero `p`-orbit representatives and `n <= e`.
pub fn hasse_full_eval(poly: &PolySpec, d: u64, cap: usize) -> Result<FieldElement> {
    let field = poly.base();
    let p = field.p();
    let e = poly.degree();
    if p.gcd(&(d * e)) != 1 {
        return Err(Error::NotCoprime { a: p, b: d * e });
    }
    let mut acc = field.one();
    for n in 1..e as usize {
        acc = field.mul(&acc, &hasse_additive_eval(poly, n, cap)?);
    }
    for o in OrbitDecomposition::new(d, p)?.nonzero() {
        for n in 1..=e as usize {
            acc = field.mul(&acc, &hasse_twisted_eval(poly, d, o.representative, n, cap)?);
        }
    }
    Ok(acc)
}

/// Sparse polynomial over `F_p` in `X_1..X_e`, keyed by exponent vectors.
pub type SymbolicPoly = BTreeMap<Vec<u32>, u64>;

/// Largest `e` accepted by the symbolic expansion.
pub const SYMBOLIC_MAX_E: u64 = 3;

fn sym_mul(a: &SymbolicPoly, b: &SymbolicPoly, p: u64) -> SymbolicPoly {
    let mut out = SymbolicPoly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let key: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let slot = out.entry(key).or_insert(0);
            *slot = (*slot + ca * cb) % p;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn sym_add(acc: &mut SymbolicPoly, b: &SymbolicPoly, sign: i8, p: u64) {
    for (k, c) in b {
        let c = if sign > 0 { *c } else { (p - c) % p };
        let slot = acc.entry(k.clone()).or_insert(0);
        *slot = (*slot + c) % p;
    }
    acc.retain(|_, c| *c != 0);
}

/// Symbolic expansion of the twisted Hasse polynomial over `F_p` for the
/// generic `P = X_e Y^e + ... + X_1 Y`; a debugging aid for `e <= 3`.
pub fn hasse_twisted_symbolic(p: u64, d: u64, e: u64, kappa: u64, n: usize, cap: usize) -> Result<SymbolicPoly> {
    if e > SYMBOLIC_MAX_E {
        return Err(Error::BadParameters(format!("symbolic expansion limited to e <= {SYMBOLIC_MAX_E}")));
    }
    check_n(n, e)?;
    let tables = TwistCombinatorics::new(p, d, e, kappa)?;
    if kappa == 0 {
        return Err(Error::BadParameters("twisted Hasse polynomial needs kappa >= 1".into()));
    }
    let zero_exp = vec![0u32; e as usize];
    let one: SymbolicPoly = [(zero_exp.clone(), 1u64)].into_iter().collect();
    // generic P as a Y-polynomial with symbolic coefficients
    let generic: Vec<SymbolicPoly> = (0..=e as usize)
        .map(|i| {
            let mut m = SymbolicPoly::new();
            if i > 0 {
                let mut ex = zero_exp.clone();
                ex[i - 1] = 1;
                m.insert(ex, 1);
            }
            m
        })
        .collect();
    let mut powers: Vec<Vec<SymbolicPoly>> = vec![vec![one.clone()]];
    let mut coeff = |nu: i64, t: i64| -> SymbolicPoly {
        if nu < 0 || t < 0 {
            return SymbolicPoly::new();
        }
        while powers.len() <= nu as usize {
            let last = powers.last().unwrap();
            let mut next = vec![SymbolicPoly::new(); last.len() + e as usize];
            for (i, a) in last.iter().enumerate() {
                for (j, b) in generic.iter().enumerate() {
                    if !a.is_empty() && !b.is_empty() {
                        let prod = sym_mul(a, b, p);
                        sym_add(&mut next[i + j], &prod, 1, p);
                    }
                }
            }
            powers.push(next);
        }
        powers[nu as usize].get(t as usize).cloned().unwrap_or_default()
    };
    let mut total = one;
    for t in &tables.tables {
        let mut acc = SymbolicPoly::new();
        for (sigma, sgn) in t.sigma_set(n, cap)? {
            let mut term = [(zero_exp.clone(), 1u64)].into_iter().collect::<SymbolicPoly>();
            for (idx, &s) in sigma.iter().enumerate() {
                let i = idx + 1;
                let c = coeff(t.nu(i, s), p as i64 * i as i64 - s as i64 - t.k as i64);
                term = sym_mul(&term, &c, p);
                if term.is_empty() {
                    break;
                }
            }
            sym_add(&mut acc, &term, sgn, p);
        }
        total = sym_mul(&total, &acc, p);
    }
    Ok(total)
}

/// Evaluates a symbolic Hasse polynomial at the coefficients of `P`.
pub fn eval_symbolic(sym: &SymbolicPoly, poly: &PolySpec) -> FieldElement {
    let f = poly.base();
    let coeffs = poly.coefficients();
    let mut acc = f.zero();
    for (ex, c) in sym {
        let mut term = f.constant(*c);
        for (i, &k) in ex.iter().enumerate() {
            term = f.mul(&term, &f.pow(&coeffs[i + 1], k as u128));
        }
        acc = f.add(&acc, &term);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strat::tables::DEFAULT_SIGMA_CAP as CAP;

    fn f(p: u64, m: usize) -> FieldSpec {
        FieldSpec::new(p, m).unwrap()
    }

    #[test]
    fn power_coefficients() {
        let f7 = f(7, 1);
        let a = 3;
        let p = PolySpec::from_encodings(&f7, &[a]).unwrap(); // X^2 + 3X
        assert_eq!(poly_power_coeff(&p, 0, 0), f7.one());
        assert_eq!(poly_power_coeff(&p, 0, 2), f7.zero());
        assert_eq!(poly_power_coeff(&p, 1, 1), f7.constant(a));
        assert_eq!(poly_power_coeff(&p, 2, 3), f7.constant(2 * a));
        assert_eq!(poly_power_coeff(&p, 2, 9), f7.zero());
    }

    #[test]
    fn split_prime_gives_one() {
        let base = f(13, 1);
        for a in 0..13 {
            let p = PolySpec::from_encodings(&base, &[a]).unwrap();
            for n in 1..=2 {
                assert_eq!(hasse_twisted_eval(&p, 3, 1, n, CAP).unwrap(), base.one());
            }
            assert_eq!(hasse_full_eval(&p, 3, CAP).unwrap(), base.one());
        }
    }

    #[test]
    fn additive_e2_single_term() {
        let base = f(11, 1);
        for a in 0..11 {
            let p = PolySpec::from_encodings(&base, &[a]).unwrap();
            let expect = poly_power_coeff(&p, 5, 10);
            assert_eq!(hasse_additive_eval(&p, 1, CAP).unwrap(), expect);
        }
    }

    #[test]
    fn p17_d3_e2_values() {
        let base = f(17, 1);
        for a in 0..17 {
            let p = PolySpec::from_encodings(&base, &[a]).unwrap();
            // 3a * 6a for n = 1; n = 2 has one transposition per shift, (-1)^2
            let n1 = hasse_twisted_eval(&p, 3, 1, 1, CAP).unwrap();
            assert_eq!(n1, base.constant(18 * a * a % 17));
            assert_eq!(hasse_twisted_eval(&p, 3, 1, 2, CAP).unwrap(), base.one());
        }
    }

    #[test]
    fn symbolic_split_is_monomial() {
        // p = 1 mod de: X_e^{Y_n}
        let sym = hasse_twisted_symbolic(13, 3, 2, 1, 2, CAP).unwrap();
        let y = TwistCombinatorics::new(13, 3, 2, 1).unwrap().y(2) as u32;
        assert_eq!(sym, [(vec![0, y], 1)].into_iter().collect());
    }

    #[test]
    fn symbolic_matches_evaluation() {
        for (p, d, e, kappa) in [(17u64, 3u64, 2u64, 1u64), (19, 3, 2, 2), (23, 3, 3, 1), (29, 4, 3, 1)] {
            let base = f(p, 1);
            for n in 1..=e as usize {
                let sym = hasse_twisted_symbolic(p, d, e, kappa, n, CAP).unwrap();
                for code in [0u64, 1, 5, 7 * p + 3, p * p - 1] {
                    let digits: Vec<u64> = (0..e - 1).map(|i| code / p.pow(i as u32) % p).collect();
                    let poly = PolySpec::from_encodings(&base, &digits).unwrap();
                    assert_eq!(
                        eval_symbolic(&sym, &poly),
                        hasse_twisted_eval(&poly, d, kappa, n, CAP).unwrap(),
                        "p={p} d={d} e={e} kappa={kappa} n={n}"
                    );
                }
            }
        }
    }
}
