//! Global sections of the kernel bundle `T = ker g`, Hoppe-type vanishing
//! scans and the cohomology of `T*` from the dual sequence.

mod sections;

pub use sections::{induced_section_map, SectionBasis, SectionMap};

use num::rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::cohomology::{binomial, exterior_power_sum, sum_h};
use crate::error::{Error, Result};
use crate::lattice::{degree_of, normalize_twist, MultiDeg, Polarization};
use crate::monad::{display_invariants, Monad};

pub const DEFAULT_BOX: i64 = 4;
pub const DEFAULT_MAX_Q: u64 = 2;

fn check_g_homogeneous(m: &Monad) -> Result<()> {
    let report = crate::polyalgebra::homogeneity_check(m.g(), m.b(), m.c())?;
    match report.failures.first() {
        None => Ok(()),
        Some(cell) => Err(Error::Inhomogeneous(format!("g {cell}"))),
    }
}

/// `h^0(T(p))` as the kernel dimension of `H^0(B(p)) -> H^0(C(p))`.
pub fn h0_twisted_kernel(m: &Monad, p: &MultiDeg) -> Result<u64> {
    let map = induced_section_map(m.g(), m.b(), m.c(), p)?;
    Ok((map.cols - map.rank(m.field())?) as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "h0", rename_all = "kebab-case")]
pub enum CellStatus {
    VerifiedZero,
    /// Exact nonzero `h^0`.
    Nonzero(u128),
    /// The upper bound `h^0(wedge^q B(p))` is this nonzero value.
    InconclusiveSurrogate(u128),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanCell {
    pub q: u64,
    pub p: MultiDeg,
    /// `deg_L O(p)`.
    pub delta: i128,
    /// Twist actually applied to `wedge^q T`: `p - k_q e_1`.
    pub effective: MultiDeg,
    pub status: CellStatus,
}

/// Data of `wedge^q T` used by the scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExteriorPowerData {
    pub q: u64,
    pub rank: u64,
    pub c1: MultiDeg,
    pub slope: Ratio<i128>,
    /// Normalizing twist `k_q`.
    pub normalization: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanReport {
    pub polarization: Polarization,
    pub box_size: i64,
    pub rank_t: u64,
    pub mu_t: Ratio<i128>,
    pub powers: Vec<ExteriorPowerData>,
    /// Twists in the cube.
    pub cube_size: usize,
    /// Twists in the cube with `delta <= 0`, per `q`.
    pub region_size: usize,
    pub cells: Vec<ScanCell>,
}

impl ScanReport {
    pub fn verified_zero(&self) -> usize {
        self.count(|s| matches!(s, CellStatus::VerifiedZero))
    }

    pub fn nonzero(&self) -> usize {
        self.count(|s| matches!(s, CellStatus::Nonzero(_)))
    }

    pub fn inconclusive(&self) -> usize {
        self.count(|s| matches!(s, CellStatus::InconclusiveSurrogate(_)))
    }

    fn count(&self, pred: impl Fn(&CellStatus) -> bool) -> usize {
        self.cells.iter().filter(|c| pred(&c.status)).count()
    }
}

fn cube(m: usize, b: i64) -> Vec<MultiDeg> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-b..=b).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(MultiDeg).collect()
}

/// Checks `h^0((wedge^q T)_norm(p)) = 0` for `1 <= q <= min(max_q, rank T - 1)`
/// and every `p` in `[-box, box]^m` with `deg_L O(p) <= 0`.
pub fn hoppe_scan(m: &Monad, l: &Polarization, box_size: i64, max_q: u64) -> Result<ScanReport> {
    if box_size < 1 {
        return Err(Error::input("box must be at least 1"));
    }
    check_g_homogeneous(m)?;
    let space = m.space();
    let inv = display_invariants(m, l)?;
    if inv.t.rank <= 0 {
        return Err(Error::input(format!("kernel has rank {}", inv.t.rank)));
    }
    let rank_t = inv.t.rank as u64;
    let mu_t = inv.t.slope.expect("positive rank");

    let mut powers = Vec::new();
    for q in 1..=max_q.min(rank_t.saturating_sub(1)) {
        let rank = u64::try_from(binomial(rank_t, q)).map_err(|_| Error::input("rank overflow"))?;
        let c1 = inv.t.c1.scale(binomial(rank_t - 1, q - 1) as i64);
        let deg = degree_of(space, &c1, l)?;
        powers.push(ExteriorPowerData {
            q,
            rank,
            c1: c1.clone(),
            slope: Ratio::new(deg, rank as i128),
            normalization: normalize_twist(space, &c1, rank, l)?,
        });
    }

    let twists: Vec<(MultiDeg, i128)> = cube(space.num_factors(), box_size)
        .into_iter()
        .map(|p| {
            let d = degree_of(space, &p, l)?;
            Ok((p, d))
        })
        .collect::<Result<_>>()?;
    let cube_size = twists.len();
    let region: Vec<&(MultiDeg, i128)> = twists.iter().filter(|(_, d)| *d <= 0).collect();
    let region_size = region.len();

    let jobs: Vec<(&ExteriorPowerData, &MultiDeg, i128)> = powers
        .iter()
        .flat_map(|pw| region.iter().map(move |(p, d)| (pw, p, *d)))
        .collect();
    let cells = jobs
        .into_par_iter()
        .map(|(pw, p, delta)| {
            let effective = p - &space.basis(0).scale(pw.normalization);
            let status = if pw.q == 1 {
                match h0_twisted_kernel(m, &effective)? {
                    0 => CellStatus::VerifiedZero,
                    h => CellStatus::Nonzero(h as u128),
                }
            } else {
                let wedge = exterior_power_sum(m.b(), pw.q)?.twist(&effective);
                match sum_h(space, &wedge)?.get(0) {
                    0 => CellStatus::VerifiedZero,
                    h => CellStatus::InconclusiveSurrogate(h),
                }
            };
            Ok(ScanCell { q: pw.q, p: p.clone(), delta, effective, status })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ScanReport {
        polarization: l.clone(),
        box_size,
        rank_t,
        mu_t,
        powers,
        cube_size,
        region_size,
        cells,
    })
}

/// A cohomology dimension that may only be bracketed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    Exact(u128),
    Range { lo: u128, hi: u128 },
    Undetermined,
}

impl std::fmt::Display for Bound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bound::Exact(v) => write!(f, "{v}"),
            Bound::Range { lo, hi } => write!(f, "[{lo},{hi}]"),
            Bound::Undetermined => write!(f, "undetermined"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualKernelCohomology {
    pub p: MultiDeg,
    pub h0: Bound,
    pub h1: Bound,
    /// Rank of `H^0(C*(p)) -> H^0(B*(p))`.
    pub map_rank: usize,
    pub h0_b: u128,
    pub h1_b: u128,
    pub h0_c: u128,
    pub h1_c: u128,
    pub h2_c: u128,
}

/// `h^0` and `h^1` of `T*(p)` from `0 -> C*(p) -> B*(p) -> T*(p) -> 0`.
pub fn dual_kernel_h0_h1(m: &Monad, p: &MultiDeg) -> Result<DualKernelCohomology> {
    check_g_homogeneous(m)?;
    let space = m.space();
    let (bd, cd) = (m.b().dual(), m.c().dual());
    let hb = sum_h(space, &bd.twist(p))?;
    let hc = sum_h(space, &cd.twist(p))?;
    let map = induced_section_map(&m.g().transpose(), &cd, &bd, p)?;
    let map_rank = map.rank(m.field())?;
    let base = hb.get(0) - map_rank as u128;
    let h0 = if hc.get(1) == 0 {
        Bound::Exact(base)
    } else {
        Bound::Range { lo: base, hi: base + hc.get(1) }
    };
    let h1 = if hb.get(1) == 0 && hc.get(2) == 0 { Bound::Exact(0) } else { Bound::Undetermined };
    Ok(DualKernelCohomology {
        p: p.clone(),
        h0,
        h1,
        map_rank,
        h0_b: hb.get(0),
        h1_b: hb.get(1),
        h0_c: hc.get(0),
        h1_c: hc.get(1),
        h2_c: hc.get(2),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinkStatus {
    Verified,
    /// The computed value that breaks the link.
    Failed(String),
    Undetermined(String),
    /// Supported by finite scan evidence only.
    EvidenceOnly(String),
    OutOfScope(String),
}

impl LinkStatus {
    pub fn label(&self) -> &'static str {
        match self {
            LinkStatus::Verified => "verified",
            LinkStatus::Failed(_) => "failed",
            LinkStatus::Undetermined(_) => "undetermined",
            LinkStatus::EvidenceOnly(_) => "evidence-only",
            LinkStatus::OutOfScope(_) => "out-of-scope",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicityReport {
    pub dual: DualKernelCohomology,
    /// Multiplicity `k` of `C`; the values for `T*(-1,..,-1)^k`.
    pub k: u64,
    pub h0_k: Bound,
    pub h1_k: Bound,
    /// `h^0(T*(-1,..,-1)) = h^1(T*(-1,..,-1)) = 0`.
    pub vanishing: LinkStatus,
    /// Stability of `T`, hence `h^0(T (x) T*) = 1`.
    pub stability: LinkStatus,
    /// `h^0(E (x) E*)` itself.
    pub endomorphisms: LinkStatus,
}

fn scale_bound(b: Bound, k: u128) -> Bound {
    match b {
        Bound::Exact(v) => Bound::Exact(v * k),
        Bound::Range { lo, hi } => Bound::Range { lo: lo * k, hi: hi * k },
        Bound::Undetermined => Bound::Undetermined,
    }
}

/// The computable links of the simplicity argument for `E`.
pub fn simplicity_ingredients(m: &Monad) -> Result<SimplicityReport> {
    let space = m.space();
    let p = space.diagonal(-1);
    let dual = dual_kernel_h0_h1(m, &p)?;
    let k = m.c().rank();
    let vanishing = match (dual.h0, dual.h1) {
        (Bound::Exact(0), Bound::Exact(0)) => LinkStatus::Verified,
        (Bound::Exact(h), _) if h != 0 => LinkStatus::Failed(format!("h0(T*{p}) = {h}")),
        (Bound::Range { lo, hi }, _) if lo > 0 => {
            LinkStatus::Failed(format!("h0(T*{p}) in [{lo},{hi}]"))
        }
        (h0, h1) => LinkStatus::Undetermined(format!("h0(T*{p}) = {h0}, h1 = {h1}")),
    };
    let l = Polarization::all_ones(space);
    let stability = match hoppe_scan(m, &l, DEFAULT_BOX, DEFAULT_MAX_Q) {
        Ok(scan) => LinkStatus::EvidenceOnly(format!(
            "scan box {} max-q {}: {} verified-zero, {} nonzero, {} inconclusive",
            DEFAULT_BOX,
            DEFAULT_MAX_Q,
            scan.verified_zero(),
            scan.nonzero(),
            scan.inconclusive()
        )),
        Err(e) => LinkStatus::Undetermined(format!("scan unavailable: {e}")),
    };
    Ok(SimplicityReport {
        h0_k: scale_bound(dual.h0, k as u128),
        h1_k: scale_bound(dual.h1, k as u128),
        dual,
        k,
        vanishing,
        stability,
        endomorphisms: LinkStatus::OutOfScope("h0(E (x) E*) is not computed".into()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_homogenized_monad, build_monad, PairedSpaceParams};

    fn smallest() -> Monad {
        build_homogenized_monad(&PairedSpaceParams::new(vec![1], 1, None).unwrap()).unwrap()
    }

    fn md(v: &[i64]) -> MultiDeg {
        MultiDeg(v.to_vec())
    }

    #[test]
    fn kernel_sections() {
        let m = smallest();
        assert_eq!(h0_twisted_kernel(&m, &md(&[0, 0])).unwrap(), 0);
        assert_eq!(h0_twisted_kernel(&m, &md(&[1, 0])).unwrap(), 0);
        assert_eq!(h0_twisted_kernel(&m, &md(&[0, 1])).unwrap(), 0);
        assert_eq!(h0_twisted_kernel(&m, &md(&[1, 1])).unwrap(), 4);
        let map = induced_section_map(m.g(), m.b(), m.c(), &md(&[1, 1])).unwrap();
        assert_eq!((map.rows, map.cols), (4, 8));
        let ker = map.kernel();
        assert_eq!(ker.len(), 4);
        for v in &ker {
            let image = crate::linalg::mat_vec(&crate::linalg::Rationals, &map.matrix, v);
            assert!(image.iter().all(num::Zero::is_zero));
        }
    }

    #[test]
    fn scan_of_smallest_monad() {
        let m = smallest();
        let l = Polarization::all_ones(m.space());
        let r = hoppe_scan(&m, &l, DEFAULT_BOX, DEFAULT_MAX_Q).unwrap();
        assert_eq!(r.rank_t, 3);
        assert_eq!(r.mu_t, Ratio::new(-4, 3));
        assert_eq!(r.powers[0].normalization, -1);
        assert_eq!(r.powers[1].c1, md(&[-4, -4]));
        assert_eq!(r.powers[1].normalization, -2);
        assert!(r.cells.iter().all(|c| c.delta <= 0));
        assert!(r.cells.iter().filter(|c| c.q == 1).all(|c| c.status == CellStatus::VerifiedZero));
        let cell = r.cells.iter().find(|c| c.q == 2 && c.p == md(&[-2, -2])).unwrap();
        assert_eq!(cell.status, CellStatus::VerifiedZero);
        assert_eq!(r.region_size, 45);
        assert_eq!(r.cells.len(), 90);
        // deterministic
        assert_eq!(hoppe_scan(&m, &l, DEFAULT_BOX, DEFAULT_MAX_Q).unwrap(), r);
    }

    #[test]
    fn dual_kernel_values() {
        let m = smallest();
        let d = dual_kernel_h0_h1(&m, &md(&[-1, -1])).unwrap();
        assert_eq!((d.h0, d.h1), (Bound::Exact(0), Bound::Exact(0)));
        let d = dual_kernel_h0_h1(&m, &md(&[0, 0])).unwrap();
        assert_eq!(d.h0, Bound::Exact(7));
        let d = dual_kernel_h0_h1(&m, &md(&[-5, -5])).unwrap();
        assert_eq!(d.h1, Bound::Undetermined);
    }

    #[test]
    fn simplicity_links() {
        let r = simplicity_ingredients(&smallest()).unwrap();
        assert_eq!(r.vanishing, LinkStatus::Verified);
        assert_eq!(r.stability.label(), "evidence-only");
        assert_eq!(r.endomorphisms.label(), "out-of-scope");
        let two = build_homogenized_monad(&PairedSpaceParams::new(vec![1], 2, None).unwrap()).unwrap();
        let r = simplicity_ingredients(&two).unwrap();
        assert_eq!((r.k, r.h0_k, r.h1_k), (2, Bound::Exact(0), Bound::Exact(0)));
    }

    #[test]
    fn literal_twists_are_rejected() {
        let m = build_monad(&PairedSpaceParams::new(vec![1], 1, None).unwrap()).unwrap();
        assert!(matches!(h0_twisted_kernel(&m, &md(&[0, 0])), Err(Error::Inhomogeneous(_))));
    }
}
