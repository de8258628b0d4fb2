//! Picard-lattice arithmetic on a product of projective spaces.
//!
//! The Chow ring of `P^{d_1} x ... x P^{d_m}` is `Z[g_1..g_m] / (g_j^{d_j+1})`
//! with `g_1^{d_1} ... g_m^{d_m}` the class of a point. Everything here is
//! computed by dense convolution over exponent vectors truncated per factor.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num::rational::Ratio;
use num::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A product `P^{d_1} x ... x P^{d_m}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Space {
    factor_dims: Vec<usize>,
}

impl Space {
    pub fn new(factor_dims: Vec<usize>) -> Result<Self> {
        if factor_dims.is_empty() {
            return Err(Error::input("space needs at least one factor"));
        }
        if let Some(j) = factor_dims.iter().position(|&d| d == 0) {
            return Err(Error::input(format!(
                "factor {} has dimension 0; every factor must be P^d with d >= 1",
                j + 1
            )));
        }
        Ok(Space { factor_dims })
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    /// Number of factors.
    pub fn num_factors(&self) -> usize {
        self.factor_dims.len()
    }

    pub fn dim(&self) -> usize {
        self.factor_dims.iter().sum()
    }

    /// Number of homogeneous coordinates on factor `j` (0-based).
    pub fn coords(&self, j: usize) -> usize {
        self.factor_dims[j] + 1
    }

    pub fn total_coords(&self) -> usize {
        self.factor_dims.iter().map(|d| d + 1).sum()
    }

    pub fn zero_deg(&self) -> MultiDeg {
        MultiDeg::zero(self.num_factors())
    }

    /// The multidegree `(c, c, ..., c)`.
    pub fn diagonal(&self, c: i64) -> MultiDeg {
        MultiDeg(vec![c; self.num_factors()])
    }

    pub fn basis(&self, j: usize) -> MultiDeg {
        MultiDeg::unit(self.num_factors(), j)
    }

    pub(crate) fn check_deg(&self, p: &MultiDeg) -> Result<()> {
        if p.len() != self.num_factors() {
            return Err(Error::DimensionMismatch(format!(
                "multidegree {p} has {} entries, space has {} factors",
                p.len(),
                self.num_factors()
            )));
        }
        Ok(())
    }
}

impl TryFrom<Vec<usize>> for Space {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Space::new(v)
    }
}

impl From<Space> for Vec<usize> {
    fn from(s: Space) -> Self {
        s.factor_dims
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factor_dims.iter().map(|d| format!("P^{d}")).collect();
        f.write_str(&parts.join(" x "))
    }
}

/// A vector in the Picard lattice `Z^m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiDeg(pub Vec<i64>);

impl MultiDeg {
    pub fn zero(m: usize) -> Self {
        MultiDeg(vec![0; m])
    }

    pub fn unit(m: usize, j: usize) -> Self {
        let mut v = vec![0; m];
        v[j] = 1;
        MultiDeg(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn scale(&self, c: i64) -> Self {
        MultiDeg(self.0.iter().map(|x| x * c).collect())
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl Index<usize> for MultiDeg {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl Add for &MultiDeg {
    type Output = MultiDeg;
    fn add(self, rhs: &MultiDeg) -> MultiDeg {
        assert_eq!(self.len(), rhs.len(), "multidegree length mismatch");
        MultiDeg(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &MultiDeg {
    type Output = MultiDeg;
    fn sub(self, rhs: &MultiDeg) -> MultiDeg {
        assert_eq!(self.len(), rhs.len(), "multidegree length mismatch");
        MultiDeg(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &MultiDeg {
    type Output = MultiDeg;
    fn neg(self) -> MultiDeg {
        MultiDeg(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for MultiDeg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// An ample class `O(l_1, ..., l_m)` with every `l_j >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polarization(MultiDeg);

impl Polarization {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() || entries.iter().any(|&l| l < 1) {
            return Err(Error::input(format!(
                "polarization entries must all be >= 1, got {}",
                MultiDeg(entries)
            )));
        }
        Ok(Polarization(MultiDeg(entries)))
    }

    /// `O(1, ..., 1)`.
    pub fn all_ones(space: &Space) -> Self {
        Polarization(space.diagonal(1))
    }

    pub fn as_deg(&self) -> &MultiDeg {
        &self.0
    }
}

/// Coefficient of the point class in the product of the given divisor classes.
///
/// The number of classes must equal `dim X`.
pub fn intersection_number(space: &Space, classes: &[MultiDeg]) -> Result<i128> {
    for c in classes {
        space.check_deg(c)?;
    }
    if classes.len() != space.dim() {
        return Err(Error::DimensionMismatch(format!(
            "need {} divisor classes on {space}, got {}",
            space.dim(),
            classes.len()
        )));
    }

    let dims = space.factor_dims();
    let m = dims.len();
    // mixed-radix strides, radix d_j + 1
    let mut strides = vec![1usize; m];
    for j in 1..m {
        strides[j] = strides[j - 1] * (dims[j - 1] + 1);
    }
    let size = strides[m - 1] * (dims[m - 1] + 1);

    let mut cur = vec![0i128; size];
    cur[0] = 1;
    let mut exps = vec![0usize; m];
    for class in classes {
        let mut next = vec![0i128; size];
        for (idx, &coef) in cur.iter().enumerate() {
            if coef == 0 {
                continue;
            }
            decode(idx, dims, &mut exps);
            for j in 0..m {
                let cj = class.0[j];
                if cj != 0 && exps[j] < dims[j] {
                    next[idx + strides[j]] += coef * cj as i128;
                }
            }
        }
        cur = next;
    }
    Ok(cur[size - 1])
}

fn decode(mut idx: usize, dims: &[usize], out: &mut [usize]) {
    for (j, &d) in dims.iter().enumerate() {
        out[j] = idx % (d + 1);
        idx /= d + 1;
    }
}

/// `c_1 . L^{dim-1}`.
pub fn degree_of(space: &Space, c1: &MultiDeg, polarization: &Polarization) -> Result<i128> {
    space.check_deg(c1)?;
    space.check_deg(polarization.as_deg())?;
    let mut classes = Vec::with_capacity(space.dim());
    classes.push(c1.clone());
    classes.extend(std::iter::repeat_n(polarization.as_deg().clone(), space.dim() - 1));
    intersection_number(space, &classes)
}

/// Exact `deg_L / rank`.
pub fn slope(
    space: &Space,
    c1: &MultiDeg,
    rank: u64,
    polarization: &Polarization,
) -> Result<Ratio<i128>> {
    if rank == 0 {
        return Err(Error::input("slope of a rank-0 sheaf is undefined"));
    }
    let deg = degree_of(space, c1, polarization)?;
    Ok(Ratio::new(deg, rank as i128))
}

/// The unique `k` with `1 - d*rank <= deg_L(c1 - k*rank*e_1) <= 0`, where
/// `d = deg_L(O(1,0,...,0))`. Twisting by `O(-k,0,...,0)` normalizes the bundle.
pub fn normalize_twist(
    space: &Space,
    c1: &MultiDeg,
    rank: u64,
    polarization: &Polarization,
) -> Result<i64> {
    if rank == 0 {
        return Err(Error::input("cannot normalize a rank-0 sheaf"));
    }
    let deg = degree_of(space, c1, polarization)?;
    let d = degree_of(space, &space.basis(0), polarization)?;
    let r = rank as i128;
    // deg(c1 - k r e_1) = deg - k r d is strictly decreasing in k
    let start = Integer::div_ceil(&deg, &(r * d));
    let in_bracket = |k: i128| {
        let twisted = deg - k * r * d;
        1 - d * r <= twisted && twisted <= 0
    };
    for k in [start, start - 1, start + 1] {
        if in_bracket(k) {
            return i64::try_from(k).map_err(|_| Error::input("normalization twist overflows i64"));
        }
    }
    unreachable!("bracket always has a solution at ceil(deg / (rank * d))")
}
