use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::strat::orbits::OrbitDecomposition;

/// Default bound on `n` for enumerating `Sigma_n`.
pub const DEFAULT_SIGMA_CAP: usize = 8;

/// `kappa_s`, least positive with `p^s kappa_s = kappa (mod d)`, for `s = 0..=count`.
pub fn kappa_sequence(p: u64, d: u64, kappa: u64, count: usize) -> Vec<u64> {
    let pinv = mod_inverse(p % d, d);
    let mut out = Vec::with_capacity(count + 1);
    let mut k = kappa % d;
    for _ in 0..=count {
        out.push(k);
        k = (k as u128 * pinv as u128 % d as u128) as u64;
    }
    out
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let e = (a as i128).extended_gcd(&(m as i128));
    e.x.rem_euclid(m as i128) as u64
}

/// The `nu`, `j`, `B`, `Y` apparatus for one shift `K` on indices `1..=size`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftTable {
    pub p: u64,
    pub e: u64,
    pub size: usize,
    #[serde(rename = "K")]
    pub k: u64,
}

impl ShiftTable {
    pub fn new(p: u64, e: u64, k: u64, size: usize) -> Result<Self> {
        if e == 0 || p.gcd(&e) != 1 {
            return Err(Error::NotCoprime { a: p, b: e });
        }
        Ok(ShiftTable { p, e, size, k })
    }

    fn x(&self, i: usize) -> i64 {
        self.p as i64 * i as i64 - self.k as i64
    }

    /// `ceil((p i - K - j)/e)`
    pub fn nu(&self, i: usize, j: usize) -> i64 {
        ceil_div(self.x(i) - j as i64, self.e as i64)
    }

    /// Least positive residue of `p i - K` mod `e`, in `[1, e]`.
    pub fn j(&self, i: usize) -> usize {
        let r = self.x(i).rem_euclid(self.e as i64) as usize;
        if r == 0 {
            self.e as usize
        } else {
            r
        }
    }

    pub fn j_table(&self) -> Vec<usize> {
        (1..=self.size).map(|i| self.j(i)).collect()
    }

    /// `B_n = {i <= n : j_i <= n}`
    pub fn b_set(&self, n: usize) -> Vec<usize> {
        (1..=n).filter(|&i| self.j(i) <= n).collect()
    }

    /// `sum_{k <= n} ceil((p k - K)/e) - #B_n`
    pub fn y(&self, n: usize) -> i64 {
        let t: i64 = (1..=n).map(|k| ceil_div(self.x(k), self.e as i64)).sum();
        t - self.b_set(n).len() as i64
    }

    /// `sum_k nu(k, sigma(k))` for `sigma` on `1..=n` given 1-based.
    pub fn weight(&self, sigma: &[usize]) -> i64 {
        sigma.iter().enumerate().map(|(k, &s)| self.nu(k + 1, s)).sum()
    }

    /// `Sigma_n`: permutations of `1..=n` with `sigma(i) >= j_i` on `B_n`,
    /// each with its sign, in lexicographic order.
    pub fn sigma_set(&self, n: usize, cap: usize) -> Result<Vec<(Vec<usize>, i8)>> {
        if n > cap {
            return Err(Error::CapExceeded { n, cap });
        }
        let lower: Vec<usize> = (1..=n)
            .map(|i| {
                let j = self.j(i);
                if j <= n {
                    j
                } else {
                    1
                }
            })
            .collect();
        let mut out = Vec::new();
        let mut used = vec![false; n + 1];
        let mut cur = Vec::with_capacity(n);
        restricted(&lower, &mut used, &mut cur, &mut out);
        Ok(out.into_iter().map(|s| {
            let sg = sign(&s);
            (s, sg)
        }).collect())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let nu: Vec<Vec<i64>> = (1..=self.size)
            .map(|i| (1..=self.size).map(|j| self.nu(i, j)).collect())
            .collect();
        let b: Vec<Vec<usize>> = (1..=self.size).map(|n| self.b_set(n)).collect();
        let y: Vec<i64> = (1..=self.size).map(|n| self.y(n)).collect();
        serde_json::json!({ "K": self.k, "j": self.j_table(), "nu": nu, "B": b, "Y": y })
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -Integer::div_floor(&-a, &b)
}

fn restricted(lower: &[usize], used: &mut [bool], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let n = lower.len();
    if cur.len() == n {
        out.push(cur.clone());
        return;
    }
    let i = cur.len();
    for v in lower[i]..=n {
        if !used[v] {
            used[v] = true;
            cur.push(v);
            restricted(lower, used, cur, out);
            cur.pop();
            used[v] = false;
        }
    }
}

/// Sign of a permutation of `1..=n`.
pub fn sign(sigma: &[usize]) -> i8 {
    let n = sigma.len();
    let mut seen = vec![false; n];
    let mut transpositions = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = sigma[i] - 1;
            len += 1;
        }
        transpositions += len - 1;
    }
    if transpositions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Tables for `(p, d, e, kappa)`, `kappa != 0`, over one period of the
/// `p`-orbit; `kappa = 0` gives the single table with `K = 0` on `1..e-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistCombinatorics {
    pub p: u64,
    pub d: u64,
    pub e: u64,
    pub kappa: u64,
    /// `kappa_0..kappa_len`
    pub kappas: Vec<u64>,
    /// `K_0..K_{len-1}`
    pub ks: Vec<u64>,
    pub tables: Vec<ShiftTable>,
}

impl TwistCombinatorics {
    pub fn new(p: u64, d: u64, e: u64, kappa: u64) -> Result<Self> {
        check(p, d, e, kappa)?;
        if kappa == 0 {
            let t = ShiftTable::new(p, e, 0, e as usize - 1)?;
            return Ok(TwistCombinatorics { p, d, e, kappa, kappas: vec![0], ks: vec![0], tables: vec![t] });
        }
        let len = OrbitDecomposition::new(d, p)?.orbit_of(kappa).members.len();
        Self::with_length(p, d, e, kappa, len)
    }

    /// Sequences over `s < m`, for `d | p^m - 1`.
    pub fn with_m(p: u64, d: u64, e: u64, kappa: u64, m: u32) -> Result<Self> {
        check(p, d, e, kappa)?;
        if kappa == 0 {
            return Err(Error::BadParameters("kappa must be nonzero".into()));
        }
        let pm = (p as u128).checked_pow(m).ok_or_else(|| Error::BadParameters("p^m overflows".into()))?;
        if m == 0 || (pm - 1) % d as u128 != 0 {
            return Err(Error::BadParameters(format!("{d} does not divide {p}^{m} - 1")));
        }
        Self::with_length(p, d, e, kappa, m as usize)
    }

    fn with_length(p: u64, d: u64, e: u64, kappa: u64, len: usize) -> Result<Self> {
        let kappas = kappa_sequence(p, d, kappa, len);
        let ks: Vec<u64> = (0..len)
            .map(|s| {
                let num = p * kappas[s + 1] - kappas[s];
                debug_assert_eq!(num % d, 0);
                num / d
            })
            .collect();
        let tables = ks
            .iter()
            .map(|&k| ShiftTable::new(p, e, k, e as usize))
            .collect::<Result<_>>()?;
        Ok(TwistCombinatorics { p, d, e, kappa, kappas, ks, tables })
    }

    /// Number of shifts in one period, `#<kappa>_p` (1 for `kappa = 0`).
    pub fn period(&self) -> usize {
        self.tables.len()
    }

    /// `Y_n(kappa) = sum_s Y_n^(s)`, with `Y_0 = 0`.
    pub fn y(&self, n: usize) -> i64 {
        if n == 0 {
            return 0;
        }
        self.tables.iter().map(|t| t.y(n)).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let size = self.tables[0].size;
        let y: Vec<i64> = (1..=size).map(|n| self.y(n)).collect();
        serde_json::json!({
            "p": self.p, "d": self.d, "e": self.e, "kappa": self.kappa,
            "kappa_s": self.kappas, "K_s": self.ks,
            "tables": self.tables.iter().map(|t| t.to_json()).collect::<Vec<_>>(),
            "Y": y,
        })
    }
}

fn check(p: u64, d: u64, e: u64, kappa: u64) -> Result<()> {
    if !crate::field::poly::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if d == 0 || e == 0 || kappa >= d {
        return Err(Error::BadParameters(format!("need d, e >= 1 and kappa < d, got d={d} e={e} kappa={kappa}")));
    }
    if p.gcd(&(d * e)) != 1 {
        return Err(Error::NotCoprime { a: p, b: d * e });
    }
    Ok(())
}
