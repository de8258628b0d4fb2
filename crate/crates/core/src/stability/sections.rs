use std::collections::HashMap;

use num::BigRational;

use crate::cohomology::LineBundleSum;
use crate::error::{Error, Result};
use crate::lattice::{MultiDeg, Space};
use crate::linalg::{self, PrimeField, Rationals};
use crate::polyalgebra::{homogeneity_check, FieldSpec, Monomial, PolyMatrix};

/// Monomial basis of `H^0(O(p))`, leading monomial first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionBasis {
    degree: MultiDeg,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

fn compositions(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if parts == 1 {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for e in (0..=total).rev() {
        prefix.push(e);
        compositions(total - e, parts - 1, prefix, out);
        prefix.pop();
    }
}

impl SectionBasis {
    pub fn new(space: &Space, p: &MultiDeg) -> Result<Self> {
        space.check_deg(p)?;
        let mut monomials = Vec::new();
        if p.is_nonnegative() {
            let mut acc: Vec<Vec<u32>> = vec![Vec::new()];
            for (j, &pj) in p.entries().iter().enumerate() {
                let pj = u32::try_from(pj).map_err(|_| Error::input("twist too large"))?;
                let mut local = Vec::new();
                compositions(pj, space.coords(j), &mut Vec::new(), &mut local);
                acc = acc
                    .iter()
                    .flat_map(|pre| {
                        local.iter().map(move |l| {
                            let mut v = pre.clone();
                            v.extend_from_slice(l);
                            v
                        })
                    })
                    .collect();
            }
            monomials = acc.into_iter().map(Monomial::from_exponents).collect();
            monomials.sort_by(|a, b| b.cmp(a));
        }
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Ok(SectionBasis { degree: p.clone(), monomials, index })
    }

    pub fn degree(&self) -> &MultiDeg {
        &self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// A linear map between spaces of global sections, as a dense rational matrix
/// acting on column vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionMap {
    pub rows: usize,
    pub cols: usize,
    pub matrix: Vec<Vec<BigRational>>,
}

impl SectionMap {
    pub fn rank(&self, field: FieldSpec) -> Result<usize> {
        if self.rows == 0 || self.cols == 0 {
            return Ok(0);
        }
        match field {
            FieldSpec::Rational => Ok(linalg::rank(&Rationals, &self.matrix)),
            FieldSpec::Prime(p) => {
                let f = PrimeField::new(p);
                let m = self
                    .matrix
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|x| f.reduce(x).ok_or_else(|| Error::input(format!("{x} is not defined mod {p}"))))
                            .collect::<Result<Vec<u64>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(linalg::rank(&f, &m))
            }
        }
    }

    /// Kernel basis over the rationals.
    pub fn kernel(&self) -> Vec<Vec<BigRational>> {
        linalg::kernel_basis(&Rationals, &self.matrix, self.cols)
    }
}

/// The map `H^0(source(p)) -> H^0(target(p))` induced by `m`, with blocks in
/// summand order and monomials in [`SectionBasis`] order.
pub fn induced_section_map(
    m: &PolyMatrix,
    source: &LineBundleSum,
    target: &LineBundleSum,
    p: &MultiDeg,
) -> Result<SectionMap> {
    let report = homogeneity_check(m, source, target)?;
    if let Some(cell) = report.failures.first() {
        return Err(Error::Inhomogeneous(format!(
            "{cell} ({} failing cells)",
            report.failures.len()
        )));
    }
    let space = m.space();
    space.check_deg(p)?;
    let src: Vec<SectionBasis> = source
        .expanded()
        .iter()
        .map(|d| SectionBasis::new(space, &(d + p)))
        .collect::<Result<_>>()?;
    let tgt: Vec<SectionBasis> = target
        .expanded()
        .iter()
        .map(|d| SectionBasis::new(space, &(d + p)))
        .collect::<Result<_>>()?;
    let offsets = |bs: &[SectionBasis]| {
        let mut v = Vec::with_capacity(bs.len());
        let mut acc = 0;
        for b in bs {
            v.push(acc);
            acc += b.len();
        }
        (v, acc)
    };
    let (col_off, cols) = offsets(&src);
    let (row_off, rows) = offsets(&tgt);
    let zero = linalg::rational_from_i64(0);
    let mut matrix = vec![vec![zero; cols]; rows];
    for (r, c, entry) in m.entries() {
        if entry.is_zero() || src[c].is_empty() {
            continue;
        }
        for (i, mu) in src[c].monomials().iter().enumerate() {
            for (term, coef) in entry.terms() {
                let prod = term.checked_mul(mu).ok_or_else(|| Error::input("exponent overflow"))?;
                let row = tgt[r].position(&prod).ok_or_else(|| {
                    Error::Inhomogeneous(format!("product lands outside H^0 of target row {r}"))
                })?;
                matrix[row_off[r] + row][col_off[c] + i] += coef;
            }
        }
    }
    Ok(SectionMap { rows, cols, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{binomial, kunneth_h};
    use crate::polyalgebra::MultiPoly;

    #[test]
    fn basis_sizes_match_counts() {
        let s = Space::new(vec![2, 1]).unwrap();
        for p0 in -1..=3 {
            for p1 in -1..=3 {
                let p = MultiDeg(vec![p0, p1]);
                let b = SectionBasis::new(&s, &p).unwrap();
                assert_eq!(b.len() as u128, kunneth_h(&s, &p).unwrap().get(0));
            }
        }
        let b = SectionBasis::new(&s, &MultiDeg(vec![2, 0])).unwrap();
        assert_eq!(b.len() as u128, binomial(4, 2));
        assert_eq!(b.monomials()[0].exponents(), &[2, 0, 0, 0, 0]);
    }

    #[test]
    fn multiplication_by_a_variable() {
        let s = Space::new(vec![1, 1]).unwrap();
        let x = MultiPoly::var(&s, 0, 0, 1).unwrap();
        let m = PolyMatrix::from_rows(&s, vec![vec![x]]).unwrap();
        let src = LineBundleSum::single(MultiDeg(vec![0, 1]), 1);
        let tgt = LineBundleSum::single(MultiDeg(vec![1, 1]), 1);
        let map = induced_section_map(&m, &src, &tgt, &MultiDeg(vec![0, 0])).unwrap();
        assert_eq!((map.rows, map.cols), (4, 2));
        let ones: usize = map.matrix.iter().flatten().filter(|v| **v == linalg::rational_from_i64(1)).count();
        let zeros: usize = map.matrix.iter().flatten().filter(|v| **v == linalg::rational_from_i64(0)).count();
        assert_eq!((ones, zeros), (2, 6));
        assert_eq!(map.rank(FieldSpec::Rational).unwrap(), 2);
    }

    #[test]
    fn zero_entry_gives_zero_block_and_inhomogeneous_is_rejected() {
        let s = Space::new(vec![1]).unwrap();
        let m = PolyMatrix::zeros(&s, 1, 1);
        let d = LineBundleSum::single(MultiDeg(vec![0]), 1);
        let map = induced_section_map(&m, &d, &d, &MultiDeg(vec![2])).unwrap();
        assert_eq!(map.rank(FieldSpec::Rational).unwrap(), 0);
        let bad = PolyMatrix::parse_rows(&s, &[vec!["x1_0 + 1".to_string()]]).unwrap();
        assert!(matches!(
            induced_section_map(&bad, &d, &LineBundleSum::single(MultiDeg(vec![1]), 1), &MultiDeg(vec![0])),
            Err(Error::Inhomogeneous(_))
        ));
    }
}
