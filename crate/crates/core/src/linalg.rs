//! Exact Gaussian elimination over `Q` and over prime fields.

use std::fmt::Debug;

use num::{BigInt, BigRational, One, Zero};

pub trait Field {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.sub(&self.zero(), a)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
}

/// `F_p` with elements stored as canonical residues `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// `p` must be prime; only checked in debug builds.
    pub fn new(p: u64) -> Self {
        debug_assert!(is_prime(p), "{p} is not prime");
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_int(&self, n: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let r = ((n % &p) + &p) % &p;
        r.try_into().expect("residue fits in u64")
    }

    /// `None` when the denominator vanishes mod p.
    pub fn reduce(&self, q: &BigRational) -> Option<u64> {
        let den = self.reduce_int(q.denom());
        if den == 0 {
            return None;
        }
        Some(self.mul(&self.reduce_int(q.numer()), &self.inv(&den)))
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.p as u128 - *b as u128) % self.p as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero");
        self.pow(*a, self.p - 2)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(small) {
            return n == small;
        }
    }
    // deterministic Miller-Rabin for all u64
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let field = PrimeField { p: n };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = field.pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = field.mul(&x, &x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Reduces `rows` in place to reduced row echelon form; returns pivot columns.
pub fn rref<F: Field>(field: &F, rows: &mut [Vec<F::Elem>]) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pr) = (r..nrows).find(|&i| !field.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = field.inv(&rows[r][c]);
        for x in rows[r].iter_mut().skip(c) {
            *x = field.mul(x, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || field.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !field.is_zero(y) {
                    *x = field.sub(x, &field.mul(&factor, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(field: &F, rows: &[Vec<F::Elem>]) -> usize {
    let mut work = rows.to_vec();
    rref(field, &mut work).len()
}

/// Basis of `{v : M v = 0}` for an `nrows x ncols` matrix.
pub fn kernel_basis<F: Field>(field: &F, rows: &[Vec<F::Elem>], ncols: usize) -> Vec<Vec<F::Elem>> {
    let mut work = rows.to_vec();
    let pivots = rref(field, &mut work);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![field.zero(); ncols];
            v[fc] = field.one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(&work[i][fc]);
            }
            v
        })
        .collect()
}

pub fn mat_vec<F: Field>(field: &F, rows: &[Vec<F::Elem>], v: &[F::Elem]) -> Vec<F::Elem> {
    rows.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(field.zero(), |acc, (a, b)| field.add(&acc, &field.mul(a, b)))
        })
        .collect()
}

pub fn mat_mul<F: Field>(
    field: &F,
    a: &[Vec<F::Elem>],
    b: &[Vec<F::Elem>],
    b_cols: usize,
) -> Vec<Vec<F::Elem>> {
    a.iter()
        .map(|row| {
            (0..b_cols)
                .map(|j| {
                    row.iter().zip(b).fold(field.zero(), |acc, (x, brow)| {
                        if field.is_zero(x) {
                            acc
                        } else {
                            field.add(&acc, &field.mul(x, &brow[j]))
                        }
                    })
                })
                .collect()
        })
        .collect()
}

pub fn rational_from_i64(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
