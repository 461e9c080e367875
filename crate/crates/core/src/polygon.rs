//! Newton polygons with integer abscissae and exact rational ordinates.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_str(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Lower convex polygon starting at the origin. Vertices are stored only
/// where the slope changes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    vertices: Vec<(u64, Rational)>,
}

impl NewtonPolygon {
    /// Lower convex hull of `(n, v)`; `None` ordinates (zero coefficients)
    /// are skipped.
    pub fn from_points(points: &[(u64, Option<Rational>)]) -> Result<Self> {
        let mut pts: Vec<(u64, Rational)> = points
            .iter()
            .filter_map(|(n, v)| v.as_ref().map(|v| (*n, v.clone())))
            .collect();
        pts.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        pts.dedup_by(|later, earlier| later.0 == earlier.0);
        match pts.first() {
            Some((0, v)) if v.is_zero() => {}
            Some((0, _)) => {
                return Err(Error::BadParameters("constant coefficient must have valuation 0".into()))
            }
            _ => return Err(Error::EmptyInput),
        }
        if pts.len() < 2 {
            return Err(Error::EmptyInput);
        }
        let mut hull: Vec<(u64, Rational)> = Vec::new();
        for pt in pts {
            while hull.len() >= 2 {
                let (x1, y1) = &hull[hull.len() - 2];
                let (x2, y2) = &hull[hull.len() - 1];
                // drop the middle point unless it lies strictly below the chord
                let lhs = (y2 - y1) * Rational::from_integer(BigInt::from(pt.0 - x1));
                let rhs = (&pt.1 - y1) * Rational::from_integer(BigInt::from(x2 - x1));
                if lhs >= rhs {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(pt);
        }
        Ok(NewtonPolygon { vertices: hull })
    }

    /// Polygon whose edges are the given `(slope, length)` multiset in
    /// increasing slope order.
    pub fn from_slopes(slopes: &[(Rational, u64)]) -> Result<Self> {
        let mut s: Vec<(Rational, u64)> = slopes.to_vec();
        if s.iter().any(|(_, l)| *l == 0) {
            return Err(Error::BadParameters("segment lengths must be positive".into()));
        }
        if s.is_empty() {
            return Err(Error::EmptyInput);
        }
        s.sort_by(|a, b| a.0.cmp(&b.0));
        let mut vertices = vec![(0u64, Rational::zero())];
        let mut last_slope: Option<Rational> = None;
        for (slope, len) in s {
            let (x, y) = vertices.last().unwrap().clone();
            let nx = x + len;
            let ny = y + &slope * Rational::from_integer(BigInt::from(len));
            if last_slope.as_ref() == Some(&slope) {
                *vertices.last_mut().unwrap() = (nx, ny);
            } else {
                vertices.push((nx, ny));
            }
            last_slope = Some(slope);
        }
        Ok(NewtonPolygon { vertices })
    }

    pub fn vertices(&self) -> &[(u64, Rational)] {
        &self.vertices
    }

    pub fn length(&self) -> u64 {
        self.vertices.last().map(|v| v.0).unwrap_or(0)
    }

    pub fn end_ordinate(&self) -> &Rational {
        &self.vertices.last().unwrap().1
    }

    /// `(slope, length)` per edge in increasing slope order.
    pub fn slopes(&self) -> Vec<(Rational, u64)> {
        self.vertices
            .windows(2)
            .map(|w| {
                let len = w[1].0 - w[0].0;
                ((&w[1].1 - &w[0].1) / Rational::from_integer(BigInt::from(len)), len)
            })
            .collect()
    }

    /// Slopes repeated by multiplicity.
    pub fn slope_list(&self) -> Vec<Rational> {
        self.slopes()
            .into_iter()
            .flat_map(|(s, l)| std::iter::repeat(s).take(l as usize))
            .collect()
    }

    /// Ordinate at an integer abscissa in `[0, length]`.
    pub fn ordinate_at(&self, x: u64) -> Rational {
        let idx = self.vertices.partition_point(|v| v.0 < x);
        let (vx, vy) = &self.vertices[idx.min(self.vertices.len() - 1)];
        if *vx == x || idx == 0 {
            return vy.clone();
        }
        let (px, py) = &self.vertices[idx - 1];
        let t = Rational::new(BigInt::from(x - px), BigInt::from(vx - px));
        py + (vy - py) * t
    }

    /// Ordinates at every integer abscissa `0..=length`.
    pub fn ordinates(&self) -> Vec<Rational> {
        (0..=self.length()).map(|x| self.ordinate_at(x)).collect()
    }

    /// True iff `self` is on or above `lower` at every integer abscissa.
    pub fn lies_above(&self, lower: &NewtonPolygon) -> Result<bool> {
        if self.length() != lower.length() {
            return Err(Error::LengthMismatch(self.length(), lower.length()));
        }
        Ok((0..=self.length()).all(|x| self.ordinate_at(x) >= lower.ordinate_at(x)))
    }

    /// Similitude of center the origin and ratio `c`.
    pub fn scale(&self, c: u64) -> NewtonPolygon {
        let f = Rational::from_integer(BigInt::from(c));
        NewtonPolygon { vertices: self.vertices.iter().map(|(x, y)| (x * c, y * &f)).collect() }
    }

    /// Union of slope multisets, re-sorted.
    pub fn concat(parts: &[NewtonPolygon]) -> Result<NewtonPolygon> {
        let all: Vec<(Rational, u64)> = parts.iter().flat_map(|p| p.slopes()).collect();
        NewtonPolygon::from_slopes(&all)
    }

    pub fn to_json(&self) -> PolygonJson {
        PolygonJson {
            vertices: self
                .vertices
                .iter()
                .map(|(x, y)| (*x, rat_str(y)))
                .collect(),
            slopes: self.slopes().iter().map(|(s, l)| (rat_str(s), *l)).collect(),
        }
    }

    /// `abscissa,ordinate` rows at every integer abscissa.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("abscissa,ordinate\n");
        for (x, y) in self.ordinates().iter().enumerate() {
            out.push_str(&format!("{x},{}\n", rat_str(y)));
        }
        out
    }
}

impl fmt::Display for NewtonPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .slopes()
            .iter()
            .map(|(s, l)| if *l == 1 { rat_str(s) } else { format!("{}x{l}", rat_str(s)) })
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// `{"vertices": [[x, "num/den"], ...], "slopes": [["num/den", length], ...]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolygonJson {
    pub vertices: Vec<(u64, String)>,
    pub slopes: Vec<(String, u64)>,
}

/// The Hodge polygon `H(N)`: slopes `i/N`, `1 <= i <= N-1`.
pub fn hodge(n: u64) -> Result<NewtonPolygon> {
    if n < 2 {
        return Err(Error::BadParameters("Hodge polygon needs N >= 2".into()));
    }
    let slopes: Vec<(Rational, u64)> = (1..n).map(|i| (rat(i as i64, n as i64), 1)).collect();
    NewtonPolygon::from_slopes(&slopes)
}
