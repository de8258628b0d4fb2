use std::fmt;

use num::{BigInt, BigRational};
use serde::{Deserialize, Serialize};

use super::poly::{Homogeneity, MultiPoly};
use crate::cohomology::LineBundleSum;
use crate::error::{Error, Result};
use crate::lattice::{MultiDeg, Space};
use crate::linalg::{self, PrimeField, Rationals};

/// Default prime for rank probing.
pub const DEFAULT_PROBE_PRIME: u64 = 1_000_003;

/// Coefficient field of a monad.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if !linalg::is_prime(p) {
            return Err(Error::input(format!("{p} is not prime")));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FieldSpec::Rational => Ok(()),
            FieldSpec::Prime(p) => FieldSpec::prime(p).map(|_| ()),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => f.write_str("QQ"),
            FieldSpec::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

/// Matrix of polynomials. A map `A -> B` is stored as `rank(B) x rank(A)`
/// and acts on column vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    space: Space,
    rows: usize,
    cols: usize,
    entries: Vec<MultiPoly>,
}

impl PolyMatrix {
    pub fn zeros(space: &Space, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            space: space.clone(),
            rows,
            cols,
            entries: vec![MultiPoly::zero(space); rows * cols],
        }
    }

    pub fn from_rows(space: &Space, rows: Vec<Vec<MultiPoly>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::ShapeMismatch("ragged matrix rows".into()));
        }
        if rows.iter().flatten().any(|p| p.space() != space) {
            return Err(Error::ShapeMismatch(
                "matrix entry defined on a different space".into(),
            ));
        }
        Ok(PolyMatrix {
            space: space.clone(),
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Parses row-major polynomial strings.
    pub fn parse_rows(space: &Space, rows: &[Vec<String>]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| MultiPoly::parse(space, s)).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        PolyMatrix::from_rows(space, parsed)
    }

    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).to_string()).collect())
            .collect()
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &MultiPoly {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: MultiPoly) {
        assert_eq!(p.space(), &self.space);
        self.entries[r * self.cols + c] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(MultiPoly::is_zero)
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(&self.space, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn neg(&self) -> PolyMatrix {
        PolyMatrix {
            space: self.space.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(MultiPoly::neg).collect(),
        }
    }

    /// Stacks blocks with equal column counts on top of each other.
    pub fn vstack(space: &Space, blocks: &[PolyMatrix]) -> Result<PolyMatrix> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        if blocks.iter().any(|b| b.cols != cols) {
            return Err(Error::ShapeMismatch("vstack blocks differ in column count".into()));
        }
        Ok(PolyMatrix {
            space: space.clone(),
            rows: blocks.iter().map(|b| b.rows).sum(),
            cols,
            entries: blocks.iter().flat_map(|b| b.entries.iter().cloned()).collect(),
        })
    }

    /// Places blocks with equal row counts side by side.
    pub fn hstack(space: &Space, blocks: &[PolyMatrix]) -> Result<PolyMatrix> {
        let t: Vec<PolyMatrix> = blocks.iter().map(PolyMatrix::transpose).collect();
        Ok(PolyMatrix::vstack(space, &t)?.transpose())
    }

    /// Highest total degree among the entries.
    pub fn max_entry_degree(&self) -> u64 {
        self.entries.iter().map(MultiPoly::total_degree).max().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &MultiPoly)> {
        self.entries
            .iter()
            .enumerate()
            .map(move |(i, p)| (i / self.cols, i % self.cols, p))
    }

    pub fn eval_fp(&self, field: &PrimeField, point: &[Vec<u64>]) -> Result<Vec<Vec<u64>>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).eval_fp(field, point)).collect())
            .collect()
    }

    pub fn eval_q(&self, point: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).eval_q(point)).collect())
            .collect()
    }

    /// `true` if the matrix vanishes identically over the given field.
    pub fn is_zero_over(&self, field: FieldSpec) -> Result<bool> {
        match field {
            FieldSpec::Rational => Ok(self.is_zero()),
            FieldSpec::Prime(p) => {
                let f = PrimeField::new(p);
                for e in &self.entries {
                    if !e.is_zero_mod(&f)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

/// Exact symbolic product `g * f`.
pub fn matrix_compose(g: &PolyMatrix, f: &PolyMatrix) -> Result<PolyMatrix> {
    if g.cols != f.rows {
        return Err(Error::ShapeMismatch(format!(
            "cannot compose {}x{} after {}x{}",
            g.rows, g.cols, f.rows, f.cols
        )));
    }
    if g.space != f.space {
        return Err(Error::ShapeMismatch("matrices on different spaces".into()));
    }
    let mut out = PolyMatrix::zeros(&g.space, g.rows, f.cols);
    for r in 0..g.rows {
        for c in 0..f.cols {
            let mut acc = MultiPoly::zero(&g.space);
            for i in 0..g.cols {
                let (a, b) = (g.get(r, i), f.get(i, c));
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                let prod = a
                    .checked_mul(b)
                    .ok_or_else(|| Error::input("exponent overflow in matrix product"))?;
                acc = acc.add(&prod);
            }
            out.set(r, c, acc);
        }
    }
    Ok(out)
}

pub(crate) fn check_point(space: &Space, point: &[Vec<i64>]) -> Result<()> {
    if point.len() != space.num_factors() {
        return Err(Error::DimensionMismatch(format!(
            "point has {} factors, space has {}",
            point.len(),
            space.num_factors()
        )));
    }
    for (j, coords) in point.iter().enumerate() {
        if coords.len() != space.coords(j) {
            return Err(Error::DimensionMismatch(format!(
                "factor {} needs {} coordinates, got {}",
                j + 1,
                space.coords(j),
                coords.len()
            )));
        }
    }
    Ok(())
}

/// Rank of `m` evaluated at a point of the multiprojective space.
pub fn matrix_evaluate_rank(m: &PolyMatrix, point: &[Vec<i64>], field: FieldSpec) -> Result<usize> {
    check_point(m.space(), point)?;
    match field {
        FieldSpec::Rational => {
            if let Some(j) = point.iter().position(|c| c.iter().all(|&x| x == 0)) {
                return Err(Error::input(format!(
                    "factor {} coordinates are all zero: not a point of projective space",
                    j + 1
                )));
            }
            let pt: Vec<Vec<BigRational>> = point
                .iter()
                .map(|c| c.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
                .collect();
            Ok(linalg::rank(&Rationals, &m.eval_q(&pt)))
        }
        FieldSpec::Prime(p) => {
            let f = PrimeField::new(p);
            let pt: Vec<Vec<u64>> = point
                .iter()
                .map(|c| c.iter().map(|&x| f.reduce_int(&BigInt::from(x))).collect())
                .collect();
            if let Some(j) = pt.iter().position(|c| c.iter().all(|&x| x == 0)) {
                return Err(Error::input(format!(
                    "factor {} coordinates vanish mod {p}: not a point of projective space",
                    j + 1
                )));
            }
            Ok(linalg::rank(&f, &m.eval_fp(&f, &pt)?))
        }
    }
}

/// A cell whose entry is not a section of the required twist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellFailure {
    pub row: usize,
    pub col: usize,
    pub expected: MultiDeg,
    pub actual: Homogeneity,
}

impl fmt::Display for CellFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let actual = match &self.actual {
            Homogeneity::Zero => "0".to_string(),
            Homogeneity::Homogeneous(d) => d.to_string(),
            Homogeneity::Inhomogeneous(ds) => {
                let v: Vec<String> = ds.iter().map(|d| d.to_string()).collect();
                format!("inhomogeneous {{{}}}", v.join(","))
            }
        };
        write!(
            f,
            "cell ({},{}): expected {} actual {}",
            self.row, self.col, self.expected, actual
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HomogeneityReport {
    pub failures: Vec<CellFailure>,
}

impl HomogeneityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that every nonzero entry `(r, c)` is multihomogeneous of degree
/// `target(r) - source(c)` with no negative component.
pub fn homogeneity_check(
    m: &PolyMatrix,
    source: &LineBundleSum,
    target: &LineBundleSum,
) -> Result<HomogeneityReport> {
    if m.rows() as u64 != target.rank() || m.cols() as u64 != source.rank() {
        return Err(Error::ShapeMismatch(format!(
            "matrix is {}x{} but target has rank {} and source rank {}",
            m.rows(),
            m.cols(),
            target.rank(),
            source.rank()
        )));
    }
    let src = source.expanded();
    let tgt = target.expanded();
    let mut report = HomogeneityReport::default();
    for (r, c, entry) in m.entries() {
        let expected = &tgt[r] - &src[c];
        let actual = entry.homogeneity();
        let ok = match &actual {
            Homogeneity::Zero => true,
            Homogeneity::Homogeneous(d) => *d == expected && expected.is_nonnegative(),
            Homogeneity::Inhomogeneous(_) => false,
        };
        if !ok {
            report.failures.push(CellFailure {
                row: r,
                col: c,
                expected,
                actual,
            });
        }
    }
    Ok(report)
}
