use crate::cohomology::LineBundleSum;
use crate::error::Result;
use crate::linalg::PrimeField;
use crate::polyalgebra::{
    grading_inference, homogeneity_check, matrix_compose, FieldSpec, GradingOutcome,
    HomogeneityReport, InconsistentCycle, MultiPoly,
};

use super::probe::{max_rank_probe, RankVerdict, MIN_PROBE_PRIME};
use super::Monad;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionCheck {
    /// Nonzero entries of `g * f` over the monad's field.
    pub residual: Vec<(usize, usize, MultiPoly)>,
}

impl CompositionCheck {
    pub fn passed(&self) -> bool {
        self.residual.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GradingSummary {
    Feasible { a: LineBundleSum, b: LineBundleSum, c: LineBundleSum },
    Infeasible(InconsistentCycle),
    /// Some entry has no single multidegree.
    NotApplicable(String),
}

impl GradingSummary {
    pub fn is_feasible(&self) -> bool {
        matches!(self, GradingSummary::Feasible { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub f_homogeneity: HomogeneityReport,
    pub g_homogeneity: HomogeneityReport,
    pub composition: CompositionCheck,
    pub f_max_rank: RankVerdict,
    pub g_max_rank: RankVerdict,
    pub grading: GradingSummary,
}

impl ValidationReport {
    pub fn homogeneity_passed(&self) -> bool {
        self.f_homogeneity.passed() && self.g_homogeneity.passed()
    }

    /// `Fail` on any violation, else `Inconclusive` if a rank check could not
    /// run, else `Pass`. Probabilistic full-rank verdicts count as passing.
    pub fn verdict(&self) -> Verdict {
        if !self.homogeneity_passed()
            || !self.composition.passed()
            || self.f_max_rank.is_refuted()
            || self.g_max_rank.is_refuted()
            || !self.grading.is_feasible()
        {
            Verdict::Fail
        } else if self.f_max_rank.is_inconclusive() || self.g_max_rank.is_inconclusive() {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        }
    }
}

fn probe(m: &crate::polyalgebra::PolyMatrix, field: FieldSpec, trials: usize, prime: u64, seed: u64) -> Result<RankVerdict> {
    let p = match field {
        FieldSpec::Rational => prime,
        FieldSpec::Prime(q) if q > MIN_PROBE_PRIME => q,
        FieldSpec::Prime(q) => {
            return Ok(RankVerdict::Inconclusive {
                reason: format!("field GF({q}) is too small for random probing"),
            })
        }
    };
    max_rank_probe(m, trials, p, seed)
}

/// Runs every check on `m`. Rank probes use `prime` over the rationals and
/// the field's own prime otherwise.
pub fn validate(m: &Monad, trials: usize, prime: u64, seed: u64) -> Result<ValidationReport> {
    let f_homogeneity = homogeneity_check(m.f(), m.a(), m.b())?;
    let g_homogeneity = homogeneity_check(m.g(), m.b(), m.c())?;

    let product = matrix_compose(m.g(), m.f())?;
    let mut residual = Vec::new();
    for (r, c, p) in product.entries() {
        let zero = match m.field() {
            FieldSpec::Rational => p.is_zero(),
            FieldSpec::Prime(q) => p.is_zero_mod(&PrimeField::new(q))?,
        };
        if !zero {
            residual.push((r, c, p.clone()));
        }
    }

    let (f_max_rank, g_max_rank) = rayon::join(
        || probe(m.f(), m.field(), trials, prime, seed),
        || probe(m.g(), m.field(), trials, prime, seed.wrapping_add(1)),
    );

    let anchor = m.a().summands().first().map(|(d, _)| d.clone());
    let grading = match grading_inference(m.f(), m.g(), anchor.as_ref()) {
        Ok(GradingOutcome::Feasible(s)) => GradingSummary::Feasible {
            a: s.source_sum(),
            b: s.middle_sum(),
            c: s.target_sum(),
        },
        Ok(GradingOutcome::Infeasible(cycle)) => GradingSummary::Infeasible(cycle),
        Err(e) => GradingSummary::NotApplicable(e.to_string()),
    };

    Ok(ValidationReport {
        f_homogeneity,
        g_homogeneity,
        composition: CompositionCheck { residual },
        f_max_rank: f_max_rank?,
        g_max_rank: g_max_rank?,
        grading,
    })
}
