use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polygon::{rat_str, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    /// least member
    pub representative: u64,
    /// `rep, t rep, t^2 rep, ...` mod `d`
    pub members: Vec<u64>,
    pub mu: Rational,
}

impl Orbit {
    pub fn size(&self) -> u64 {
        self.members.len() as u64
    }
}

/// Orbits of multiplication by `t` on `Z/dZ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitDecomposition {
    pub d: u64,
    pub t: u64,
    pub orbits: Vec<Orbit>,
    index: Vec<usize>,
}

impl OrbitDecomposition {
    pub fn new(d: u64, t: u64) -> Result<Self> {
        if d == 0 || t.gcd(&d) != 1 {
            return Err(Error::NotCoprime { a: t, b: d });
        }
        let mut index = vec![usize::MAX; d as usize];
        let mut orbits = Vec::new();
        for k in 0..d {
            if index[k as usize] != usize::MAX {
                continue;
            }
            let mut members = vec![k];
            let mut x = (k as u128 * t as u128 % d as u128) as u64;
            while x != k {
                members.push(x);
                x = (x as u128 * t as u128 % d as u128) as u64;
            }
            for &mbr in &members {
                index[mbr as usize] = orbits.len();
            }
            let sum: u64 = members.iter().sum();
            let mu = Rational::new(BigInt::from(sum), BigInt::from(d * members.len() as u64));
            orbits.push(Orbit { representative: k, members, mu });
        }
        Ok(OrbitDecomposition { d, t, orbits, index })
    }

    pub fn orbit_of(&self, kappa: u64) -> &Orbit {
        &self.orbits[self.index[(kappa % self.d) as usize]]
    }

    /// `mu_kappa = (sum of the orbit)/(d #orbit)`
    pub fn mu(&self, kappa: u64) -> &Rational {
        &self.orbit_of(kappa).mu
    }

    /// Orbits other than `{0}`.
    pub fn nonzero(&self) -> impl Iterator<Item = &Orbit> {
        self.orbits.iter().filter(|o| o.representative != 0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Row<'a> {
            representative: u64,
            members: &'a [u64],
            size: usize,
            mu: String,
        }
        let rows: Vec<Row> = self
            .orbits
            .iter()
            .map(|o| Row {
                representative: o.representative,
                members: &o.members,
                size: o.members.len(),
                mu: rat_str(&o.mu),
            })
            .collect();
        serde_json::json!({ "d": self.d, "t": self.t, "orbits": rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::rat;

    #[test]
    fn split_prime_gives_singletons() {
        let o = OrbitDecomposition::new(6, 13).unwrap();
        assert_eq!(o.orbits.len(), 6);
        for k in 1..6 {
            assert_eq!(o.mu(k), &rat(k as i64, 6));
        }
    }

    #[test]
    fn d5_t2() {
        let o = OrbitDecomposition::new(5, 2).unwrap();
        assert_eq!(o.orbit_of(3).members, vec![1, 2, 4, 3]);
        assert_eq!(o.mu(1), &rat(1, 2));
    }

    #[test]
    fn d7_t2() {
        let o = OrbitDecomposition::new(7, 2).unwrap();
        assert_eq!(o.orbit_of(1).members, vec![1, 2, 4]);
        assert_eq!(o.mu(1), &rat(1, 3));
        assert_eq!(o.orbit_of(3).members, vec![3, 6, 5]);
        assert_eq!(o.mu(3), &rat(2, 3));
        assert_eq!(o.orbit_of(0).members, vec![0]);
    }

    #[test]
    fn not_coprime() {
        assert!(matches!(OrbitDecomposition::new(6, 3), Err(Error::NotCoprime { .. })));
    }
}
