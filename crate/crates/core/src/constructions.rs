//! Band (Hankel-shift) matrices and the linear monads assembled from them on
//! `P^{a_1} x P^{a_1} x ... x P^{a_n} x P^{a_n}`.

use serde::{Deserialize, Serialize};

use crate::cohomology::LineBundleSum;
use crate::error::{Error, Result};
use crate::lattice::{MultiDeg, Space};
use crate::monad::Monad;
use crate::polyalgebra::{grading_inference, FieldSpec, GradingOutcome, MultiPoly, PolyMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairedSpaceParams {
    /// One dimension per pair of factors.
    pub pairs: Vec<usize>,
    pub k: usize,
    /// Exponent applied to every variable of pair `i`.
    pub alpha: Vec<u32>,
}

impl PairedSpaceParams {
    pub fn new(pairs: Vec<usize>, k: usize, alpha: Option<Vec<u32>>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::input("at least one pair is required"));
        }
        if pairs.contains(&0) {
            return Err(Error::input("pair dimensions must be positive"));
        }
        if k == 0 {
            return Err(Error::input("k must be positive"));
        }
        let alpha = alpha.unwrap_or_else(|| vec![1; pairs.len()]);
        if alpha.len() != pairs.len() {
            return Err(Error::input(format!(
                "{} exponents given for {} pairs",
                alpha.len(),
                pairs.len()
            )));
        }
        if alpha.contains(&0) {
            return Err(Error::input("exponents must be positive"));
        }
        Ok(PairedSpaceParams { pairs, k, alpha })
    }

    pub fn n(&self) -> usize {
        self.pairs.len()
    }

    pub fn space(&self) -> Space {
        let dims = self.pairs.iter().flat_map(|&a| [a, a]).collect();
        Space::new(dims).expect("pair dimensions are positive")
    }
}

fn check_factor(space: &Space, a: usize, factor: usize) -> Result<()> {
    if factor >= space.num_factors() || space.coords(factor) != a + 1 {
        return Err(Error::input(format!(
            "factor index {factor} does not have {} coordinates on {space}",
            a + 1
        )));
    }
    Ok(())
}

/// `k x (a+k)`: row `r` holds `v_a^alpha, ..., v_0^alpha` in columns `r..=r+a`,
/// where `v` are the coordinates of the 0-based `factor`.
pub fn band_f(space: &Space, a: usize, k: usize, factor: usize, alpha: u32) -> Result<PolyMatrix> {
    check_factor(space, a, factor)?;
    let mut m = PolyMatrix::zeros(space, k, a + k);
    for r in 0..k {
        for t in 0..=a {
            m.set(r, r + t, MultiPoly::var(space, factor, a - t, alpha)?);
        }
    }
    Ok(m)
}

/// `(a+k) x k`: column `c` holds `v_0^alpha, ..., v_a^alpha` in rows `c..=c+a`.
pub fn band_g(space: &Space, a: usize, k: usize, factor: usize, alpha: u32) -> Result<PolyMatrix> {
    check_factor(space, a, factor)?;
    let mut m = PolyMatrix::zeros(space, a + k, k);
    for c in 0..k {
        for s in 0..=a {
            m.set(c + s, c, MultiPoly::var(space, factor, s, alpha)?);
        }
    }
    Ok(m)
}

/// The two maps. `f` is the transpose of the block row
/// `[F_1 -F_2 F_3 -F_4 ...]` and `g` the transpose of the block column
/// `[G_1; G_2; ...]`, where pair `i` contributes `F_{2i-1}` on its second
/// factor, `F_{2i}` on its first, `G_{2i-1}` on its first and `G_{2i}` on its second.
fn band_maps(params: &PairedSpaceParams) -> Result<(PolyMatrix, PolyMatrix)> {
    let space = params.space();
    let k = params.k;
    let mut f_blocks = Vec::with_capacity(2 * params.n());
    let mut g_blocks = Vec::with_capacity(2 * params.n());
    for (i, (&a, &alpha)) in params.pairs.iter().zip(&params.alpha).enumerate() {
        let (x, y) = (2 * i, 2 * i + 1);
        f_blocks.push(band_f(&space, a, k, y, alpha)?);
        f_blocks.push(band_f(&space, a, k, x, alpha)?.neg());
        g_blocks.push(band_g(&space, a, k, x, alpha)?);
        g_blocks.push(band_g(&space, a, k, y, alpha)?);
    }
    let f = PolyMatrix::hstack(&space, &f_blocks)?.transpose();
    let g = PolyMatrix::vstack(&space, &g_blocks)?.transpose();
    Ok((f, g))
}

/// Band monad with the literal twists `A = O(-1,..,-1)^k`,
/// `B = (+)_i O(-e_{2i-1})^{a_i+k} + O(-e_{2i})^{a_i+k}`, `C = O(1,..,1)^k`.
pub fn build_monad(params: &PairedSpaceParams) -> Result<Monad> {
    let space = params.space();
    let m = space.num_factors();
    let k = params.k as u64;
    let (f, g) = band_maps(params)?;
    let mut b = Vec::with_capacity(m);
    for (i, &a) in params.pairs.iter().enumerate() {
        for j in [2 * i, 2 * i + 1] {
            b.push((MultiDeg::unit(m, j).scale(-1), a as u64 + k));
        }
    }
    Monad::new(
        space.clone(),
        FieldSpec::Rational,
        LineBundleSum::single(space.diagonal(-1), k),
        LineBundleSum::new(b)?,
        LineBundleSum::single(space.diagonal(1), k),
        f,
        g,
    )
}

/// Band monad for one pair with twists inferred from the matrices, anchored at
/// `A = O(-1,-1)^k`.
pub fn build_homogenized_monad(params: &PairedSpaceParams) -> Result<Monad> {
    if params.n() != 1 {
        return Err(Error::input(format!(
            "homogenization is only available for one pair, got {}",
            params.n()
        )));
    }
    let literal = build_monad(params)?;
    let anchor = literal.space().diagonal(-1);
    match grading_inference(literal.f(), literal.g(), Some(&anchor))? {
        GradingOutcome::Feasible(s) => {
            literal.with_terms(s.source_sum(), s.middle_sum(), s.target_sum())
        }
        GradingOutcome::Infeasible(cycle) => Err(Error::GradingInfeasible(cycle.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalgebra::{homogeneity_check, matrix_compose};

    fn strings(m: &PolyMatrix) -> Vec<Vec<String>> {
        m.to_string_rows()
    }

    #[test]
    fn band_shapes_and_entries() {
        let s = Space::new(vec![1, 1]).unwrap();
        assert_eq!(strings(&band_f(&s, 1, 1, 1, 1).unwrap()), vec![vec!["x2_1", "x2_0"]]);
        assert_eq!(
            strings(&band_f(&s, 1, 2, 1, 1).unwrap()),
            vec![vec!["x2_1", "x2_0", "0"], vec!["0", "x2_1", "x2_0"]]
        );
        assert_eq!(
            strings(&band_g(&s, 1, 2, 0, 1).unwrap()),
            vec![vec!["x1_0", "0"], vec!["x1_1", "x1_0"], vec!["0", "x1_1"]]
        );
        let s2 = Space::new(vec![2, 2]).unwrap();
        assert_eq!(strings(&band_f(&s2, 2, 1, 0, 1).unwrap()), vec![vec!["x1_2", "x1_1", "x1_0"]]);
        assert!(band_f(&s2, 1, 1, 0, 1).is_err());
    }

    #[test]
    fn smallest_monad() {
        let p = PairedSpaceParams::new(vec![1], 1, None).unwrap();
        let m = build_monad(&p).unwrap();
        assert_eq!(strings(m.f()), vec![vec!["x2_1"], vec!["x2_0"], vec!["-x1_1"], vec!["-x1_0"]]);
        assert_eq!(strings(m.g()), vec![vec!["x1_0", "x1_1", "x2_0", "x2_1"]]);
        assert!(matrix_compose(m.g(), m.f()).unwrap().is_zero());
    }

    #[test]
    fn homogenized_terms() {
        let p = PairedSpaceParams::new(vec![1], 2, None).unwrap();
        let m = build_homogenized_monad(&p).unwrap();
        assert_eq!(m.a().to_string(), "O(-1,-1)^2");
        assert_eq!(m.b().to_string(), "O(-1,0)^3 + O(0,-1)^3");
        assert_eq!(m.c().to_string(), "O(0,0)^2");
        assert!(homogeneity_check(m.f(), m.a(), m.b()).unwrap().passed());
        assert!(homogeneity_check(m.g(), m.b(), m.c()).unwrap().passed());
        let p2 = PairedSpaceParams::new(vec![1, 1], 1, None).unwrap();
        assert!(build_homogenized_monad(&p2).is_err());
    }

    #[test]
    fn alpha_squares_entries() {
        let p = PairedSpaceParams::new(vec![1], 1, Some(vec![2])).unwrap();
        let m = build_monad(&p).unwrap();
        assert_eq!(m.g().get(0, 0).to_canonical_string(), "x1_0^2");
        assert!(matrix_compose(m.g(), m.f()).unwrap().is_zero());
    }

    #[test]
    fn hankel_symmetry() {
        for a in 1..=3 {
            for k in 1..=3 {
                let s = Space::new(vec![a, a]).unwrap();
                let xy = matrix_compose(&band_f(&s, a, k, 1, 1).unwrap(), &band_g(&s, a, k, 0, 1).unwrap()).unwrap();
                let yx = matrix_compose(&band_f(&s, a, k, 0, 1).unwrap(), &band_g(&s, a, k, 1, 1).unwrap()).unwrap();
                assert_eq!(xy, yx);
            }
        }
    }
}
