use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{MultiDeg, Space};
use crate::linalg::{Field, PrimeField};

/// Exponents on the flattened variable list
/// `x1_0..x1_{d_1}, x2_0..x2_{d_2}, ...` (factor-major).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(space: &Space) -> Self {
        Monomial(vec![0; space.total_coords()])
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn multidegree(&self, space: &Space) -> MultiDeg {
        let mut out = Vec::with_capacity(space.num_factors());
        let mut offset = 0;
        for j in 0..space.num_factors() {
            let n = space.coords(j);
            out.push(self.0[offset..offset + n].iter().map(|&e| e as i64).sum());
            offset += n;
        }
        MultiDeg(out)
    }

    pub fn checked_mul(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.checked_mul(other).expect("exponent overflow")
    }
}

// graded lex: total degree first, then the earlier variable with the larger exponent wins
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Whether a polynomial is a section of a single line bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Homogeneous(MultiDeg),
    Inhomogeneous(Vec<MultiDeg>),
}

/// An exact polynomial in the homogeneous coordinates of a [`Space`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    space: Space,
    terms: BTreeMap<Monomial, BigRational>,
}

impl MultiPoly {
    pub fn zero(space: &Space) -> Self {
        MultiPoly {
            space: space.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(space: &Space, c: BigRational) -> Self {
        let mut p = MultiPoly::zero(space);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(space), c);
        }
        p
    }

    pub fn from_int(space: &Space, c: i64) -> Self {
        MultiPoly::constant(space, BigRational::from_integer(BigInt::from(c)))
    }

    /// `x{factor+1}_{coord}^exp`, with `factor` 0-based.
    pub fn var(space: &Space, factor: usize, coord: usize, exp: u32) -> Result<Self> {
        if factor >= space.num_factors() || coord >= space.coords(factor) {
            return Err(Error::input(format!(
                "variable x{}_{} does not exist on {space}",
                factor + 1,
                coord
            )));
        }
        let offset: usize = (0..factor).map(|j| space.coords(j)).sum();
        let mut m = Monomial::one(space);
        m.0[offset + coord] = exp;
        Ok(MultiPoly::monomial(space, m, BigRational::one()))
    }

    pub fn monomial(space: &Space, m: Monomial, c: BigRational) -> Self {
        assert_eq!(m.0.len(), space.total_coords(), "monomial arity mismatch");
        let mut p = MultiPoly::zero(space);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    fn check_space(&self, other: &MultiPoly) {
        assert_eq!(self.space, other.space, "polynomials live on different spaces");
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.check_space(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.space);
        }
        MultiPoly {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn checked_mul(&self, other: &MultiPoly) -> Option<MultiPoly> {
        self.check_space(other);
        let mut out = MultiPoly::zero(&self.space);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.checked_mul(m2)?, c1 * c2);
            }
        }
        Some(out)
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.checked_mul(other).expect("exponent overflow")
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let mut degs: Vec<MultiDeg> = self
            .terms
            .keys()
            .map(|m| m.multidegree(&self.space))
            .collect();
        degs.sort();
        degs.dedup();
        match degs.len() {
            0 => Homogeneity::Zero,
            1 => Homogeneity::Homogeneous(degs.pop().unwrap()),
            _ => Homogeneity::Inhomogeneous(degs),
        }
    }

    /// `Some(deg)` for a nonzero multihomogeneous polynomial.
    pub fn multidegree(&self) -> Option<MultiDeg> {
        match self.homogeneity() {
            Homogeneity::Homogeneous(d) => Some(d),
            _ => None,
        }
    }

    /// `true` if every coefficient is divisible by `p`.
    pub fn is_zero_mod(&self, field: &PrimeField) -> Result<bool> {
        for c in self.terms.values() {
            match field.reduce(c) {
                Some(0) => {}
                Some(_) => return Ok(false),
                None => {
                    return Err(Error::input(format!(
                        "coefficient {c} has a denominator divisible by {}",
                        field.modulus()
                    )))
                }
            }
        }
        Ok(true)
    }

    /// Evaluates at a point given per factor as residues mod p.
    pub fn eval_fp(&self, field: &PrimeField, point: &[Vec<u64>]) -> Result<u64> {
        let flat: Vec<u64> = point.iter().flatten().copied().collect();
        assert_eq!(flat.len(), self.space.total_coords(), "point arity mismatch");
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut term = field.reduce(c).ok_or_else(|| {
                Error::input(format!(
                    "coefficient {c} has a denominator divisible by {}",
                    field.modulus()
                ))
            })?;
            for (&e, &x) in m.0.iter().zip(&flat) {
                if e > 0 {
                    term = field.mul(&term, &field.pow(x, e as u64));
                }
            }
            acc = field.add(&acc, &term);
        }
        Ok(acc)
    }

    pub fn eval_q(&self, point: &[Vec<BigRational>]) -> BigRational {
        let flat: Vec<&BigRational> = point.iter().flatten().collect();
        assert_eq!(flat.len(), self.space.total_coords(), "point arity mismatch");
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (&e, x) in m.0.iter().zip(&flat) {
                if e > 0 {
                    term *= num::pow::pow((*x).clone(), e as usize);
                }
            }
            acc += term;
        }
        acc
    }

    /// Canonical textual form in the polynomial grammar.
    pub fn to_canonical_string(&self) -> String {
        self.to_string()
    }

    pub fn parse(space: &Space, text: &str) -> Result<MultiPoly> {
        super::parse::parse_poly(space, text)
    }
}

pub(crate) fn format_monomial(space: &Space, m: &Monomial) -> String {
    let mut parts = Vec::new();
    let mut idx = 0;
    for j in 0..space.num_factors() {
        for i in 0..space.coords(j) {
            let e = m.0[idx];
            idx += 1;
            match e {
                0 => {}
                1 => parts.push(format!("x{}_{}", j + 1, i)),
                _ => parts.push(format!("x{}_{}^{}", j + 1, i, e)),
            }
        }
    }
    parts.join("*")
}

fn format_abs_coefficient(c: &BigRational) -> String {
    let a = c.abs();
    if a.is_integer() {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                f.write_str(&format_abs_coefficient(c))?;
            } else if c.abs().is_one() {
                f.write_str(&format_monomial(&self.space, m))?;
            } else {
                write!(
                    f,
                    "{}*{}",
                    format_abs_coefficient(c),
                    format_monomial(&self.space, m)
                )?;
            }
        }
        Ok(())
    }
}
