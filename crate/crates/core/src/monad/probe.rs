use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::Space;
use crate::linalg::{self, Field, PrimeField};
use crate::polyalgebra::PolyMatrix;

/// Probing primes must exceed `10^6`, which admits the default `1_000_003`.
pub const MIN_PROBE_PRIME: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub enum RankVerdict {
    /// Constant matrix of full rank: one evaluation decides.
    Verified,
    /// Full rank at every coordinate point and every random probe.
    FullRankProbabilistic {
        trials: usize,
        coordinate_points: usize,
        prime: u64,
        /// Upper bound on the degree of a maximal minor.
        minor_degree: u64,
        /// Schwartz-Zippel bound `minor_degree / prime` on one random probe
        /// landing in the zero set of a nonzero maximal minor.
        per_probe_bound: f64,
    },
    Refuted {
        /// Per-factor coordinates mod `prime`.
        witness: Vec<Vec<u64>>,
        rank: usize,
        expected: usize,
        prime: u64,
    },
    Inconclusive {
        reason: String,
    },
}

impl RankVerdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, RankVerdict::Refuted { .. })
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, RankVerdict::Inconclusive { .. })
    }
}

/// Coefficient plus `(flat variable, exponent)` pairs.
type CompiledTerm = (u64, Vec<(usize, u64)>);

/// Entries as term lists, for fast evaluation.
struct Compiled {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<CompiledTerm>>,
}

impl Compiled {
    fn new(m: &PolyMatrix, field: &PrimeField) -> Result<Self> {
        let mut entries = Vec::with_capacity(m.rows() * m.cols());
        for (_, _, p) in m.entries() {
            let mut terms = Vec::with_capacity(p.num_terms());
            for (mono, c) in p.terms() {
                let c = field.reduce(c).ok_or_else(|| {
                    Error::input(format!("coefficient {c} is not defined mod {}", field.modulus()))
                })?;
                let vars = mono
                    .exponents()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| (i, e as u64))
                    .collect();
                terms.push((c, vars));
            }
            entries.push(terms);
        }
        Ok(Compiled { rows: m.rows(), cols: m.cols(), entries })
    }

    fn eval(&self, field: &PrimeField, flat: &[u64]) -> Vec<Vec<u64>> {
        let mut out = vec![vec![0u64; self.cols]; self.rows];
        for (i, terms) in self.entries.iter().enumerate() {
            let mut acc = 0u64;
            for (c, vars) in terms {
                let mut t = *c;
                for &(v, e) in vars {
                    t = field.mul(&t, &field.pow(flat[v], e));
                }
                acc = field.add(&acc, &t);
            }
            out[i / self.cols][i % self.cols] = acc;
        }
        out
    }
}

fn coordinate_points(space: &Space) -> Vec<Vec<Vec<u64>>> {
    let mut pts: Vec<Vec<Vec<u64>>> = vec![Vec::new()];
    for j in 0..space.num_factors() {
        let n = space.coords(j);
        let mut next = Vec::with_capacity(pts.len() * n);
        for p in &pts {
            for i in 0..n {
                let mut unit = vec![0u64; n];
                unit[i] = 1;
                let mut q = p.clone();
                q.push(unit);
                next.push(q);
            }
        }
        pts = next;
    }
    pts
}

fn random_point(space: &Space, p: u64, rng: &mut ChaCha8Rng) -> Vec<Vec<u64>> {
    (0..space.num_factors())
        .map(|j| loop {
            let v: Vec<u64> = (0..space.coords(j)).map(|_| rng.gen_range(0..p)).collect();
            if v.iter().any(|&x| x != 0) {
                break v;
            }
        })
        .collect()
}

/// Evaluates `m` at every coordinate point and at `trials` random points of
/// the space over `F_p`, looking for a rank drop below `min(rows, cols)`.
pub fn max_rank_probe(m: &PolyMatrix, trials: usize, prime: u64, seed: u64) -> Result<RankVerdict> {
    if prime <= MIN_PROBE_PRIME || !linalg::is_prime(prime) {
        return Err(Error::input(format!(
            "probe modulus must be a prime above {MIN_PROBE_PRIME}, got {prime}"
        )));
    }
    let field = PrimeField::new(prime);
    let expected = m.rows().min(m.cols());
    let compiled = Compiled::new(m, &field)?;
    let space = m.space();

    let check = |pt: &Vec<Vec<u64>>| -> Option<RankVerdict> {
        let flat: Vec<u64> = pt.iter().flatten().copied().collect();
        let rank = linalg::rank(&field, &compiled.eval(&field, &flat));
        (rank < expected).then(|| RankVerdict::Refuted {
            witness: pt.clone(),
            rank,
            expected,
            prime,
        })
    };

    let coords = coordinate_points(space);
    for pt in &coords {
        if let Some(v) = check(pt) {
            return Ok(v);
        }
    }
    let degree = m.max_entry_degree();
    if expected == 0 || degree == 0 {
        return Ok(RankVerdict::Verified);
    }
    if trials == 0 {
        return Ok(RankVerdict::Inconclusive {
            reason: "no random probes requested; only coordinate points checked".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let pt = random_point(space, prime, &mut rng);
        if let Some(v) = check(&pt) {
            return Ok(v);
        }
    }
    let minor_degree = expected as u64 * degree;
    Ok(RankVerdict::FullRankProbabilistic {
        trials,
        coordinate_points: coords.len(),
        prime,
        minor_degree,
        per_probe_bound: minor_degree as f64 / prime as f64,
    })
}
