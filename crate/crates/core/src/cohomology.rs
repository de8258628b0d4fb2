//! Cohomology of line bundles on products of projective spaces.
//!
//! On `P^n` only `H^0` and `H^n` of `O(d)` can be nonzero, so on a product
//! the Künneth sum runs over subsets of factors contributing their top
//! cohomology.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{MultiDeg, Space};

/// Ordinary binomial coefficient `C(n, k)` for `0 <= k`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// `h^q(P^n, O(d))`.
pub fn bott_h(n: u32, d: i64, q: u32) -> u128 {
    assert!(q <= n, "cohomological degree {q} exceeds dimension {n}");
    let n64 = n as i64;
    if q == 0 {
        if d >= 0 {
            binomial((n64 + d) as u64, n as u64)
        } else {
            0
        }
    } else if q == n {
        // Serre dual of H^0(O(-d-n-1))
        let e = -d - n64 - 1;
        if e >= 0 {
            binomial((-d - 1) as u64, n as u64)
        } else {
            0
        }
    } else {
        0
    }
}

/// `h^t` for `t = 0..=dim`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomTable {
    h: Vec<u128>,
}

impl CohomTable {
    pub fn zero(dim: usize) -> Self {
        CohomTable { h: vec![0; dim + 1] }
    }

    pub fn get(&self, t: usize) -> u128 {
        self.h.get(t).copied().unwrap_or(0)
    }

    pub fn dim(&self) -> usize {
        self.h.len() - 1
    }

    pub fn values(&self) -> &[u128] {
        &self.h
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (usize, u128)> + '_ {
        self.h.iter().enumerate().filter(|(_, &h)| h != 0).map(|(t, &h)| (t, h))
    }

    pub fn is_zero(&self) -> bool {
        self.h.iter().all(|&h| h == 0)
    }

    pub fn euler_characteristic(&self) -> i128 {
        self.h
            .iter()
            .enumerate()
            .map(|(t, &h)| if t % 2 == 0 { h as i128 } else { -(h as i128) })
            .sum()
    }

    fn add_scaled(&mut self, other: &CohomTable, k: u128) {
        for (a, b) in self.h.iter_mut().zip(&other.h) {
            *a += b * k;
        }
    }

    pub fn scaled(&self, k: u128) -> CohomTable {
        CohomTable { h: self.h.iter().map(|h| h * k).collect() }
    }
}

/// `h^t(X, O(p))` via Künneth.
pub fn kunneth_h(space: &Space, p: &MultiDeg) -> Result<CohomTable> {
    space.check_deg(p)?;
    let dims = space.factor_dims();
    let mut table = CohomTable::zero(space.dim());
    // per factor: (h^0, h^top); bit j of `mask` selects top cohomology on factor j
    let per: Vec<(u128, u128)> = dims
        .iter()
        .zip(p.entries())
        .map(|(&d, &pj)| (bott_h(d as u32, pj, 0), bott_h(d as u32, pj, d as u32)))
        .collect();
    for mask in 0u64..(1u64 << dims.len()) {
        let mut prod: u128 = 1;
        let mut t = 0;
        for (j, &(h0, htop)) in per.iter().enumerate() {
            if mask >> j & 1 == 1 {
                prod *= htop;
                t += dims[j];
            } else {
                prod *= h0;
            }
            if prod == 0 {
                break;
            }
        }
        table.h[t] += prod;
    }
    Ok(table)
}

/// A direct sum of line bundles `O(p_1)^{m_1} + O(p_2)^{m_2} + ...`.
///
/// Summand order is significant: it fixes the row/column order of maps into
/// and out of the sum. Adjacent summands with equal multidegree are merged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineBundleSum {
    summands: Vec<(MultiDeg, u64)>,
}

#[derive(Serialize, Deserialize)]
struct SummandRepr {
    deg: MultiDeg,
    mult: u64,
}

impl Serialize for LineBundleSum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<SummandRepr> = self
            .summands
            .iter()
            .map(|(d, m)| SummandRepr { deg: d.clone(), mult: *m })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LineBundleSum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<SummandRepr>::deserialize(d)?;
        LineBundleSum::new(v.into_iter().map(|s| (s.deg, s.mult)).collect())
            .map_err(serde::de::Error::custom)
    }
}

impl LineBundleSum {
    pub fn new(summands: Vec<(MultiDeg, u64)>) -> Result<Self> {
        if let Some((d, _)) = summands.iter().find(|(_, m)| *m == 0) {
            return Err(Error::input(format!("summand O{d} has multiplicity 0")));
        }
        if let Some(first) = summands.first() {
            if summands.iter().any(|(d, _)| d.len() != first.0.len()) {
                return Err(Error::DimensionMismatch(
                    "summand multidegrees differ in length".into(),
                ));
            }
        }
        let mut out: Vec<(MultiDeg, u64)> = Vec::with_capacity(summands.len());
        for (d, m) in summands {
            match out.last_mut() {
                Some((last, lm)) if *last == d => *lm += m,
                _ => out.push((d, m)),
            }
        }
        Ok(LineBundleSum { summands: out })
    }

    pub fn empty() -> Self {
        LineBundleSum { summands: Vec::new() }
    }

    pub fn single(d: MultiDeg, mult: u64) -> Self {
        LineBundleSum::new(vec![(d, mult)]).expect("valid single summand")
    }

    /// Groups a per-row list of twists.
    pub fn from_expanded(degs: &[MultiDeg]) -> Self {
        LineBundleSum::new(degs.iter().map(|d| (d.clone(), 1)).collect()).expect("multiplicities are 1")
    }

    pub fn summands(&self) -> &[(MultiDeg, u64)] {
        &self.summands
    }

    pub fn rank(&self) -> u64 {
        self.summands.iter().map(|(_, m)| m).sum()
    }

    /// One multidegree per unit of rank, in order.
    pub fn expanded(&self) -> Vec<MultiDeg> {
        self.summands
            .iter()
            .flat_map(|(d, m)| std::iter::repeat_n(d.clone(), *m as usize))
            .collect()
    }

    pub fn c1(&self, num_factors: usize) -> MultiDeg {
        self.summands
            .iter()
            .fold(MultiDeg::zero(num_factors), |acc, (d, m)| &acc + &d.scale(*m as i64))
    }

    pub fn twist(&self, p: &MultiDeg) -> LineBundleSum {
        LineBundleSum {
            summands: self.summands.iter().map(|(d, m)| (d + p, *m)).collect(),
        }
    }

    pub fn dual(&self) -> LineBundleSum {
        LineBundleSum {
            summands: self.summands.iter().map(|(d, m)| (-d, *m)).collect(),
        }
    }

    /// All equal multidegrees merged, in order of first appearance.
    pub fn canonical(&self) -> LineBundleSum {
        let mut out: Vec<(MultiDeg, u64)> = Vec::new();
        for (d, m) in &self.summands {
            match out.iter_mut().find(|(e, _)| e == d) {
                Some((_, em)) => *em += m,
                None => out.push((d.clone(), *m)),
            }
        }
        LineBundleSum { summands: out }
    }

    pub(crate) fn check_space(&self, space: &Space) -> Result<()> {
        for (d, _) in &self.summands {
            space.check_deg(d)?;
        }
        Ok(())
    }
}

impl fmt::Display for LineBundleSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .summands
            .iter()
            .map(|(d, m)| if *m == 1 { format!("O{d}") } else { format!("O{d}^{m}") })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Multiplicity-weighted cohomology of a sum.
pub fn sum_h(space: &Space, s: &LineBundleSum) -> Result<CohomTable> {
    s.check_space(space)?;
    let mut table = CohomTable::zero(space.dim());
    for (d, m) in s.summands() {
        table.add_scaled(&kunneth_h(space, d)?, *m as u128);
    }
    Ok(table)
}

/// `wedge^q` of a sum of line bundles: one summand per way of choosing `c_i`
/// copies of each distinct line bundle with `sum c_i = q`.
pub fn exterior_power_sum(s: &LineBundleSum, q: u64) -> Result<LineBundleSum> {
    let rank = s.rank();
    if q == 0 || q > rank {
        return Err(Error::input(format!(
            "exterior power {q} out of range 1..={rank}"
        )));
    }
    let distinct = s.canonical();
    let parts = distinct.summands();
    let m = parts[0].0.len();
    let mut out = Vec::new();
    let mut counts = vec![0u64; parts.len()];
    choose_counts(parts, 0, q, &mut counts, &mut |counts| {
        let mut deg = MultiDeg::zero(m);
        let mut mult: u128 = 1;
        for ((d, avail), &c) in parts.iter().zip(counts.iter()) {
            deg = &deg + &d.scale(c as i64);
            mult *= binomial(*avail, c);
        }
        out.push((deg, u64::try_from(mult).expect("multiplicity fits in u64")));
    });
    Ok(LineBundleSum::new(out)?.canonical())
}

fn choose_counts(
    parts: &[(MultiDeg, u64)],
    i: usize,
    remaining: u64,
    counts: &mut Vec<u64>,
    emit: &mut dyn FnMut(&[u64]),
) {
    if i == parts.len() {
        if remaining == 0 {
            emit(counts);
        }
        return;
    }
    let rest: u64 = parts[i + 1..].iter().map(|(_, m)| m).sum();
    let hi = parts[i].1.min(remaining);
    let lo = remaining.saturating_sub(rest);
    for c in (lo..=hi).rev() {
        counts[i] = c;
        choose_counts(parts, i + 1, remaining - c, counts, emit);
    }
    counts[i] = 0;
}

/// Per-degree outcome of checking `h^t(O(-p)) = 0` for `0 <= t < dim - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VanishingCheck {
    pub p: MultiDeg,
    /// `(t, h^t(O(-p)))` for each `t` in the range.
    pub entries: Vec<(usize, u128)>,
}

impl VanishingCheck {
    pub fn holds(&self) -> bool {
        self.entries.iter().all(|&(_, h)| h == 0)
    }

    pub fn discrepancies(&self) -> impl Iterator<Item = &(usize, u128)> {
        self.entries.iter().filter(|(_, h)| *h != 0)
    }
}

/// Computes `h^t(O(-p_1, ..., -p_m))` for `0 <= t < dim - 1` when `sum p_j > 0`,
/// reporting any nonzero value rather than assuming vanishing.
pub fn vanishing_region_check(space: &Space, p: &MultiDeg) -> Result<VanishingCheck> {
    space.check_deg(p)?;
    if p.total() <= 0 {
        return Err(Error::input(format!(
            "vanishing check needs sum of entries > 0, got {p}"
        )));
    }
    let table = kunneth_h(space, &-p)?;
    let entries = (0..space.dim().saturating_sub(1)).map(|t| (t, table.get(t))).collect();
    Ok(VanishingCheck { p: p.clone(), entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(d: &[usize]) -> Space {
        Space::new(d.to_vec()).unwrap()
    }

    fn md(v: &[i64]) -> MultiDeg {
        MultiDeg(v.to_vec())
    }

    fn sum(entries: &[(&[i64], u64)]) -> LineBundleSum {
        LineBundleSum::new(entries.iter().map(|(d, m)| (md(d), *m)).collect()).unwrap()
    }

    #[test]
    fn bott_values() {
        assert_eq!(bott_h(2, 2, 0), 6);
        for q in 0..=2 {
            assert_eq!(bott_h(2, -1, q), 0);
        }
        assert_eq!(bott_h(3, -5, 3), 4);
        assert_eq!(bott_h(3, -4, 3), 1);
        assert_eq!(bott_h(3, 7, 1), 0);
    }

    #[test]
    fn kunneth_on_p1_p1() {
        let s = sp(&[1, 1]);
        assert_eq!(kunneth_h(&s, &md(&[-2, 0])).unwrap().values(), &[0, 1, 0]);
        assert_eq!(kunneth_h(&s, &md(&[1, 1])).unwrap().values(), &[4, 0, 0]);
        assert_eq!(kunneth_h(&s, &md(&[-2, -2])).unwrap().values(), &[0, 0, 1]);
    }

    #[test]
    fn sums() {
        let s = sp(&[1, 1]);
        assert!(sum_h(&s, &sum(&[(&[-1, 0], 2), (&[0, -1], 2)])).unwrap().is_zero());
        assert_eq!(sum_h(&s, &sum(&[(&[0, 0], 5)])).unwrap().values(), &[5, 0, 0]);
        assert_eq!(
            sum_h(&s, &sum(&[(&[1, 1], 1), (&[-2, -2], 1)])).unwrap().values(),
            &[4, 0, 1]
        );
    }

    #[test]
    fn exterior_powers() {
        let two = sum(&[(&[3], 1), (&[5], 1)]);
        assert_eq!(exterior_power_sum(&two, 2).unwrap(), sum(&[(&[8], 1)]));

        let b = sum(&[(&[-1, 0], 2), (&[0, -1], 2)]);
        let w = exterior_power_sum(&b, 2).unwrap();
        assert_eq!(w, sum(&[(&[-2, 0], 1), (&[-1, -1], 4), (&[0, -2], 1)]));
        assert_eq!(w.rank(), 6);
        assert_eq!(exterior_power_sum(&b, 1).unwrap(), b);
        assert!(exterior_power_sum(&b, 0).is_err());
        assert!(exterior_power_sum(&b, 5).is_err());
        assert_eq!(exterior_power_sum(&b, 4).unwrap(), sum(&[(&[-2, -2], 1)]));
    }

    #[test]
    fn vanishing_checks() {
        let s = sp(&[1, 1]);
        let v = vanishing_region_check(&s, &md(&[1, 0])).unwrap();
        assert_eq!(v.entries, vec![(0, 0)]);
        assert!(v.holds());
        let v = vanishing_region_check(&s, &md(&[2, 0])).unwrap();
        assert_eq!(v.entries, vec![(0, 0)]);
        assert!(v.holds());
        let s4 = sp(&[1, 1, 1, 1]);
        let v = vanishing_region_check(&s4, &md(&[1, 1, 1, 1])).unwrap();
        assert_eq!(v.entries.len(), 3);
        assert!(v.holds());
        assert!(vanishing_region_check(&s, &md(&[1, -1])).is_err());
        // the range includes t = 1 on P^2 x P^1, where O(0,-2) has h^1 = 1
        let v = vanishing_region_check(&sp(&[2, 1]), &md(&[0, 2])).unwrap();
        assert_eq!(v.discrepancies().collect::<Vec<_>>(), vec![&(1, 1)]);
    }

    #[test]
    fn line_bundle_sum_merges_adjacent_only() {
        let s = sum(&[(&[0], 1), (&[0], 2), (&[1], 1), (&[0], 1)]);
        assert_eq!(s.summands().len(), 3);
        assert_eq!(s.rank(), 5);
        assert_eq!(s.canonical().summands().len(), 2);
        assert_eq!(s.to_string(), "O(0)^3 + O(1) + O(0)");
        assert!(LineBundleSum::new(vec![(md(&[0]), 0)]).is_err());
    }
}
