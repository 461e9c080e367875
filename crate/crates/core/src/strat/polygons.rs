use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::polygon::{NewtonPolygon, Rational};
use crate::strat::orbits::OrbitDecomposition;
use crate::strat::tables::TwistCombinatorics;

fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn int(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Slopes `(i + mu_{d-kappa})/e`, `i = 0..e-1`, with `mu` from the orbits of
/// multiplication by `r`.
pub fn hs_twisted(d: u64, e: u64, r: u64, kappa: u64) -> Result<NewtonPolygon> {
    if kappa == 0 || kappa >= d || e == 0 {
        return Err(Error::BadParameters(format!("need 1 <= kappa < d and e >= 1, got kappa={kappa} d={d} e={e}")));
    }
    let orbits = OrbitDecomposition::new(d, r)?;
    let mu = orbits.mu(d - kappa);
    let slopes: Vec<(Rational, u64)> = (0..e).map(|i| ((int(i) + mu) / int(e), 1)).collect();
    NewtonPolygon::from_slopes(&slopes)
}

/// Vertices `(n, Y_n(kappa)/((p-1) #<kappa>_p))`.
pub fn gnp_twisted(p: u64, d: u64, e: u64, kappa: u64) -> Result<NewtonPolygon> {
    gnp_from_tables(&TwistCombinatorics::new(p, d, e, kappa)?)
}

/// Same polygon, with the shift sequence tabulated over `s < m`.
pub fn gnp_twisted_with_m(p: u64, d: u64, e: u64, kappa: u64, m: u32) -> Result<NewtonPolygon> {
    gnp_from_tables(&TwistCombinatorics::with_m(p, d, e, kappa, m)?)
}

fn gnp_from_tables(t: &TwistCombinatorics) -> Result<NewtonPolygon> {
    if t.kappa == 0 {
        return Err(Error::BadParameters("twisted polygon needs kappa >= 1".into()));
    }
    let den = (t.p as i64 - 1) * t.tables.len() as i64;
    let ys: Vec<i64> = (0..=t.e as usize).map(|n| t.y(n)).collect();
    if t.p >= 2 * t.d * t.e {
        // slopes must increase strictly: Y_{n+1} - Y_n > Y_n - Y_{n-1}
        let convex = ys.windows(3).all(|w| w[2] - w[1] > w[1] - w[0]);
        if !convex {
            return Err(Error::NonConvex { p: t.p, d: t.d, e: t.e, kappa: t.kappa });
        }
    }
    let pts: Vec<(u64, Option<Rational>)> =
        ys.iter().enumerate().map(|(n, &y)| (n as u64, Some(frac(y, den)))).collect();
    NewtonPolygon::from_points(&pts)
}

/// `{j/e : 1 <= j < e}` together with `(j + mu_{kappa_i})/e`, `0 <= j < e`,
/// of length `D_i` for each nonzero orbit of multiplication by `r`.
pub fn hs_power(d: u64, e: u64, r: u64) -> Result<NewtonPolygon> {
    if d == 0 || e == 0 || d * e < 2 {
        return Err(Error::BadParameters("need de >= 2".into()));
    }
    let orbits = OrbitDecomposition::new(d, r)?;
    let mut slopes: Vec<(Rational, u64)> = (1..e).map(|j| (frac(j as i64, e as i64), 1)).collect();
    for o in orbits.nonzero() {
        for j in 0..e {
            slopes.push(((int(j) + &o.mu) / int(e), o.size()));
        }
    }
    NewtonPolygon::from_slopes(&slopes)
}

/// `lambda_j(0) = (Y_j(0) - Y_{j-1}(0))/(p-1)`, `1 <= j < e`.
pub fn additive_slopes(p: u64, e: u64) -> Result<Vec<Rational>> {
    let t = TwistCombinatorics::new(p, 1, e, 0)?;
    Ok((1..e as usize).map(|j| frac(t.y(j) - t.y(j - 1), p as i64 - 1)).collect())
}

/// The `kappa = 0` slopes plus, per nonzero `p`-orbit, the `e` slopes of
/// the twisted generic polygon, each with length `D_i`.
pub fn gnp_power(p: u64, d: u64, e: u64) -> Result<NewtonPolygon> {
    if p.gcd(&(d * e)) != 1 {
        return Err(Error::NotCoprime { a: p, b: d * e });
    }
    if d * e < 2 {
        return Err(Error::BadParameters("need de >= 2".into()));
    }
    let mut slopes: Vec<(Rational, u64)> = additive_slopes(p, e)?.into_iter().map(|s| (s, 1)).collect();
    let orbits = OrbitDecomposition::new(d, p)?;
    for o in orbits.nonzero() {
        let g = gnp_twisted(p, d, e, o.representative)?;
        for s in g.slope_list() {
            slopes.push((s, o.size()));
        }
    }
    NewtonPolygon::from_slopes(&slopes)
}
