//! The monad `0 -> A --f--> B --g--> C -> 0` and what can be checked about it.

mod existence;
mod probe;
mod validate;

pub use existence::{existence_conditions, ExistenceQuery, ExistenceVerdict, NMode, Rule};
pub use probe::{max_rank_probe, RankVerdict, MIN_PROBE_PRIME};
pub use validate::{validate, CompositionCheck, GradingSummary, ValidationReport, Verdict};

use num::rational::Ratio;

use crate::cohomology::LineBundleSum;
use crate::error::{Error, Result};
use crate::lattice::{degree_of, MultiDeg, Polarization, Space};
use crate::polyalgebra::{FieldSpec, PolyMatrix};

/// Three line-bundle sums and the two maps between them. Construction only
/// checks shapes; [`validate`] decides whether it really is a monad.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monad {
    space: Space,
    field: FieldSpec,
    a: LineBundleSum,
    b: LineBundleSum,
    c: LineBundleSum,
    f: PolyMatrix,
    g: PolyMatrix,
}

impl Monad {
    pub fn new(
        space: Space,
        field: FieldSpec,
        a: LineBundleSum,
        b: LineBundleSum,
        c: LineBundleSum,
        f: PolyMatrix,
        g: PolyMatrix,
    ) -> Result<Self> {
        field.validate()?;
        for t in [&a, &b, &c] {
            t.check_space(&space)?;
        }
        if f.space() != &space || g.space() != &space {
            return Err(Error::ShapeMismatch("maps are defined on a different space".into()));
        }
        if f.rows() as u64 != b.rank() || f.cols() as u64 != a.rank() {
            return Err(Error::ShapeMismatch(format!(
                "f must be rank(B) x rank(A) = {}x{}, got {}x{}",
                b.rank(),
                a.rank(),
                f.rows(),
                f.cols()
            )));
        }
        if g.rows() as u64 != c.rank() || g.cols() as u64 != b.rank() {
            return Err(Error::ShapeMismatch(format!(
                "g must be rank(C) x rank(B) = {}x{}, got {}x{}",
                c.rank(),
                b.rank(),
                g.rows(),
                g.cols()
            )));
        }
        Ok(Monad { space, field, a, b, c, f, g })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }
    pub fn field(&self) -> FieldSpec {
        self.field
    }
    pub fn a(&self) -> &LineBundleSum {
        &self.a
    }
    pub fn b(&self) -> &LineBundleSum {
        &self.b
    }
    pub fn c(&self) -> &LineBundleSum {
        &self.c
    }
    pub fn f(&self) -> &PolyMatrix {
        &self.f
    }
    pub fn g(&self) -> &PolyMatrix {
        &self.g
    }

    /// Same maps, new terms.
    pub fn with_terms(&self, a: LineBundleSum, b: LineBundleSum, c: LineBundleSum) -> Result<Monad> {
        Monad::new(self.space.clone(), self.field, a, b, c, self.f.clone(), self.g.clone())
    }

    pub fn with_maps(&self, f: PolyMatrix, g: PolyMatrix) -> Result<Monad> {
        Monad::new(
            self.space.clone(),
            self.field,
            self.a.clone(),
            self.b.clone(),
            self.c.clone(),
            f,
            g,
        )
    }
}

/// Rank, first Chern class, degree and slope of one sheaf in the display.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleInvariants {
    pub rank: i64,
    pub c1: MultiDeg,
    pub degree: i128,
    /// `None` when the rank is not positive.
    pub slope: Option<Ratio<i128>>,
}

impl BundleInvariants {
    fn compute(space: &Space, rank: i64, c1: MultiDeg, l: &Polarization) -> Result<Self> {
        let degree = degree_of(space, &c1, l)?;
        let slope = (rank > 0).then(|| Ratio::new(degree, rank as i128));
        Ok(BundleInvariants { rank, c1, degree, slope })
    }

    pub fn is_degenerate(&self) -> bool {
        self.rank <= 0
    }
}

/// Invariants of the cohomology bundle `E`, the kernel `T = ker g` and the
/// cokernel `Q = coker f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisplayInvariants {
    pub e: BundleInvariants,
    pub t: BundleInvariants,
    pub q: BundleInvariants,
}

impl DisplayInvariants {
    pub fn is_degenerate(&self) -> bool {
        self.e.is_degenerate() || self.t.is_degenerate() || self.q.is_degenerate()
    }
}

pub fn display_invariants(m: &Monad, l: &Polarization) -> Result<DisplayInvariants> {
    let s = m.space();
    s.check_deg(l.as_deg())?;
    let nf = s.num_factors();
    let (ra, rb, rc) = (m.a.rank() as i64, m.b.rank() as i64, m.c.rank() as i64);
    let (ca, cb, cc) = (m.a.c1(nf), m.b.c1(nf), m.c.c1(nf));
    let e = BundleInvariants::compute(s, rb - ra - rc, &(&cb - &ca) - &cc, l)?;
    let t = BundleInvariants::compute(s, rb - rc, &cb - &cc, l)?;
    let q = BundleInvariants::compute(s, rb - ra, &cb - &ca, l)?;
    Ok(DisplayInvariants { e, t, q })
}
