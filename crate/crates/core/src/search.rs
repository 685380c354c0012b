//! Randomized experiments: rejection sampling of isotropic triples and the
//! frequency with which random cup products vanish.
//!
//! Every random draw comes from a ChaCha stream seeded by a SHA-256 hash of
//! the user seed and the draw's coordinates (curve degree, term caps, trial
//! index), so results are identical however the trials are scheduled.

use std::fmt;
use std::num::NonZeroU32;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::jacobian::CurveContext;
use crate::linalg::monomial_basis;
use crate::massey::decompose_cup;
use crate::poly::{Coefficient, HomogeneousPoly, Monomial};

/// Description of the coefficient sampler, disclosed in every report.
pub const COEFFICIENT_POOL: &str = "a/b with a uniform in [-9,9]\\{0}, b uniform in [1,9]";

/// Default rejection-sampling budget for [`find_triple`].
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// `(M1, M2)`: the number of monomials of degree `n - 3` and `2n - 3`.
pub fn m_counts(n: u32) -> (usize, usize) {
    let n = n as usize;
    ((n - 1) * (n - 2) / 2, (2 * n - 1) * (2 * n - 2) / 2)
}

/// Divisor `ℓ` for the term caps `⌈M/ℓ⌉`. `Infinite` caps every polynomial at
/// a single term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ell {
    Finite(NonZeroU32),
    Infinite,
}

impl Ell {
    pub fn new(ell: u32) -> Result<Self> {
        NonZeroU32::new(ell)
            .map(Ell::Finite)
            .ok_or_else(|| Error::InvalidConfig("ell must be positive".into()))
    }

    /// `⌈count / ℓ⌉`, at least 1.
    pub fn cap(&self, count: usize) -> usize {
        match self {
            Ell::Finite(l) => count.div_ceil(l.get() as usize).max(1),
            Ell::Infinite => 1,
        }
    }

    fn code(&self) -> u64 {
        match self {
            Ell::Finite(l) => u64::from(l.get()),
            Ell::Infinite => 0,
        }
    }
}

impl fmt::Display for Ell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ell::Finite(l) => write!(f, "{l}"),
            Ell::Infinite => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for Ell {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "∞" => Ok(Ell::Infinite),
            t => t
                .parse::<u32>()
                .map_err(|_| Error::InvalidConfig(format!("invalid ell '{t}'")))
                .and_then(Ell::new),
        }
    }
}

impl Serialize for Ell {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub n: u32,
    pub max_terms_u0: usize,
    pub max_terms_u1: usize,
    pub max_terms_u2: usize,
    pub ell: Ell,
    pub samples: u64,
    pub seed: u64,
    /// Attempt budget for [`find_triple`].
    pub budget: u64,
}

impl SearchConfig {
    /// Term caps of at most three, as used for finding triples.
    pub fn new(n: u32, seed: u64) -> Self {
        SearchConfig {
            n,
            max_terms_u0: 3,
            max_terms_u1: 3,
            max_terms_u2: 3,
            ell: Ell::Finite(NonZeroU32::MIN),
            samples: 1,
            seed,
            budget: DEFAULT_BUDGET,
        }
    }

    /// Caps `⌈M2/ℓ⌉` for `U0` and `⌈M1/ℓ⌉` for `U1`.
    pub fn with_ell(n: u32, ell: Ell, samples: u64, seed: u64) -> Self {
        let (m1, m2) = m_counts(n);
        SearchConfig {
            n,
            max_terms_u0: ell.cap(m2),
            max_terms_u1: ell.cap(m1),
            max_terms_u2: ell.cap(m2),
            ell,
            samples,
            seed,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::DegreeTooLow(self.n));
        }
        let (m1, m2) = m_counts(self.n);
        let caps = [
            (self.max_terms_u0, m2, "U0"),
            (self.max_terms_u1, m1, "U1"),
            (self.max_terms_u2, m2, "U2"),
        ];
        for (cap, count, name) in caps {
            if cap == 0 || cap > count {
                return Err(Error::InvalidConfig(format!(
                    "term cap {cap} for {name} must lie in [1, {count}]"
                )));
            }
        }
        if self.samples == 0 {
            return Err(Error::InvalidConfig("samples must be positive".into()));
        }
        if self.budget == 0 {
            return Err(Error::InvalidConfig("budget must be positive".into()));
        }
        Ok(())
    }
}

/// ChaCha stream for one trial, keyed by the seed and the trial coordinates.
pub fn trial_rng(seed: u64, key: &[u64]) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    for k in key {
        h.update(k.to_le_bytes());
    }
    let digest: [u8; 32] = h.finalize().into();
    ChaCha8Rng::from_seed(digest)
}

fn random_coefficient<R: Rng + ?Sized>(rng: &mut R) -> Coefficient {
    let mut a: i64 = rng.random_range(1..=18);
    if a > 9 {
        a = 9 - a;
    }
    let b: i64 = rng.random_range(1..=9);
    Coefficient::new(BigInt::from(a), BigInt::from(b))
}

/// A random homogeneous polynomial with between 1 and `max_terms` terms, on
/// distinct monomials chosen uniformly, with nonzero coefficients from the
/// pool.
pub fn random_homogeneous_poly<R: Rng + ?Sized>(
    degree: u32,
    max_terms: usize,
    rng: &mut R,
) -> Result<HomogeneousPoly> {
    let basis = monomial_basis(degree);
    if max_terms == 0 || max_terms > basis.len() {
        return Err(Error::InvalidConfig(format!(
            "term cap {max_terms} exceeds the {} monomials of degree {degree}",
            basis.len()
        )));
    }
    let k = rng.random_range(1..=max_terms);
    let chosen = index::sample(rng, basis.len(), k);
    let terms: Vec<(Coefficient, Monomial)> = chosen
        .into_iter()
        .map(|i| basis.get(i))
        .map(|m| (random_coefficient(rng), m))
        .collect();
    HomogeneousPoly::from_terms(degree, terms)
}

/// An isotropic triple found by rejection sampling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoundTriple {
    #[serde(serialize_with = "crate::json::poly")]
    pub u0: HomogeneousPoly,
    #[serde(serialize_with = "crate::json::poly")]
    pub u1: HomogeneousPoly,
    #[serde(serialize_with = "crate::json::poly")]
    pub u2: HomogeneousPoly,
    /// Number of candidates drawn, including the accepted one.
    pub attempts: u64,
}

const FIND_CHUNK: u64 = 512;

/// Draws `(U0, U1, U2)` until both `U0*U1` and `U1*U2` lie in the Jacobian
/// ideal. Attempt `i` uses its own random stream; the first successful
/// attempt in index order is returned, so the result does not depend on how
/// many threads run.
pub fn find_triple(ctx: &CurveContext, config: &SearchConfig) -> Result<FoundTriple> {
    let n = ctx.degree();
    let config = SearchConfig { n, ..config.clone() };
    config.validate()?;
    let key = |i: u64| {
        [
            0x7472_6970_6c65, // "triple"
            u64::from(n),
            config.max_terms_u0 as u64,
            config.max_terms_u1 as u64,
            config.max_terms_u2 as u64,
            i,
        ]
    };
    let draw = |i: u64| -> Result<Option<FoundTriple>> {
        let mut rng = trial_rng(config.seed, &key(i));
        let u0 = random_homogeneous_poly(2 * n - 3, config.max_terms_u0, &mut rng)?;
        let u1 = random_homogeneous_poly(n - 3, config.max_terms_u1, &mut rng)?;
        let u2 = random_homogeneous_poly(2 * n - 3, config.max_terms_u2, &mut rng)?;
        if ctx.in_jacobian_ideal(&(&u0 * &u1)) && ctx.in_jacobian_ideal(&(&u1 * &u2)) {
            Ok(Some(FoundTriple { u0, u1, u2, attempts: i + 1 }))
        } else {
            Ok(None)
        }
    };

    let mut start = 0;
    while start < config.budget {
        let end = (start + FIND_CHUNK).min(config.budget);
        let hit = (start..end)
            .into_par_iter()
            .map(draw)
            .find_first(|r| !matches!(r, Ok(None)));
        match hit {
            Some(Ok(Some(found))) => {
                // Certify both products with explicit witnesses.
                for (a, b) in [(&found.u0, &found.u1), (&found.u1, &found.u2)] {
                    decompose_cup(ctx, a, b)?.ok_or_else(|| {
                        Error::Internal("accepted triple has a nonvanishing product".into())
                    })?;
                }
                return Ok(found);
            }
            Some(Err(e)) => return Err(e),
            _ => start = end,
        }
    }
    Err(Error::BudgetExhausted {
        attempts: config.budget,
    })
}

/// Outcome of one cell of the vanishing-ratio experiment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatioReport {
    pub n: u32,
    pub ell: Ell,
    pub max_terms_u0: usize,
    pub max_terms_u1: usize,
    pub samples: u64,
    pub vanish_count: u64,
    #[serde(serialize_with = "crate::json::rational")]
    pub ratio: Coefficient,
    #[serde(skip)]
    pub elapsed: Duration,
    pub seed: u64,
    pub coefficient_pool: &'static str,
}

impl RatioReport {
    pub const CSV_HEADER: &'static str =
        "n,ell,samples,vanish_count,ratio_num,ratio_den,seed,elapsed_ms";

    /// One CSV row. The timing column is left empty unless requested so that
    /// identical configurations produce identical bytes.
    pub fn csv_row(&self, with_timing: bool) -> String {
        let elapsed = if with_timing {
            self.elapsed.as_millis().to_string()
        } else {
            String::new()
        };
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            self.ell,
            self.samples,
            self.vanish_count,
            self.ratio.numer(),
            self.ratio.denom(),
            self.seed,
            elapsed
        )
    }
}

/// Samples `config.samples` independent pairs `(U0, U1)` with the configured
/// term caps and counts how many products lie in the Jacobian ideal. Each
/// counted pair is certified by an explicit decomposition.
pub fn vanishing_ratio_experiment(ctx: &CurveContext, config: &SearchConfig) -> Result<RatioReport> {
    let n = ctx.degree();
    let config = SearchConfig { n, ..config.clone() };
    config.validate()?;
    let started = Instant::now();
    let vanish_count = (0..config.samples)
        .into_par_iter()
        .map(|i| -> Result<u64> {
            let mut rng = trial_rng(
                config.seed,
                &[
                    0x72_6174_696f, // "ratio"
                    u64::from(n),
                    config.ell.code(),
                    config.max_terms_u0 as u64,
                    config.max_terms_u1 as u64,
                    i,
                ],
            );
            let u0 = random_homogeneous_poly(2 * n - 3, config.max_terms_u0, &mut rng)?;
            let u1 = random_homogeneous_poly(n - 3, config.max_terms_u1, &mut rng)?;
            Ok(u64::from(decompose_cup(ctx, &u0, &u1)?.is_some()))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(RatioReport {
        n,
        ell: config.ell,
        max_terms_u0: config.max_terms_u0,
        max_terms_u1: config.max_terms_u1,
        samples: config.samples,
        vanish_count,
        ratio: Coefficient::new(BigInt::from(vanish_count), BigInt::from(config.samples)),
        elapsed: started.elapsed(),
        seed: config.seed,
        coefficient_pool: COEFFICIENT_POOL,
    })
}
