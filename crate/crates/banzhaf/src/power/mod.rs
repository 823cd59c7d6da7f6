//! Exact Banzhaf power computation.
//!
//! A player swings a coalition when their departure turns it from winning
//! to losing; the Banzhaf score `η_i` counts those coalitions. All scores
//! here are computed exactly: coalition counts come from the subset-sum
//! generating function behind [`CountVector`], and one deconvolution per
//! player yields the counts excluding that player, from which the swings
//! at any number of thresholds are plain window sums. Indices and
//! decisiveness values are exact big rationals until a caller asks for
//! decimals.

mod brute;
mod count;

pub use brute::{brute_force_banzhaf, brute_force_pta, BRUTE_FORCE_MAX_PLAYERS};
pub use count::{build_count_vector, CountVector};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::game::{QuotaSpec, VotingBody};
use crate::render;

#[derive(Debug, Error)]
pub enum PowerError {
    #[error("cannot allocate {bytes} bytes for the coalition count table")]
    Resource { bytes: u128 },
    #[error(
        "coalition count went negative at vote total {vote_total}: \
         no player of weight {weight} is folded into this count vector"
    )]
    Integrity { weight: u64, vote_total: u64 },
    #[error("no player is ever critical; power indices are undefined")]
    DegenerateGame,
    #[error("brute force supports at most {max} players, got {got}")]
    TooManyPlayers { got: usize, max: usize },
    #[error("count vector is at its player capacity ({capacity})")]
    CapacityExceeded { capacity: usize },
    #[error("thresholds must be sorted ascending")]
    UnsortedThresholds,
    #[error("threshold {got} outside [1, {total}]")]
    ThresholdOutOfRange { got: u64, total: u64 },
}

/// Per-player swing counts at one threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwingProfile {
    eta: Vec<BigUint>,
    threshold_votes: u64,
}

impl SwingProfile {
    pub fn new(eta: Vec<BigUint>, threshold_votes: u64) -> Self {
        SwingProfile {
            eta,
            threshold_votes,
        }
    }

    /// Swing count `η_i` per player, in body order.
    pub fn eta(&self) -> &[BigUint] {
        &self.eta
    }

    pub fn n_players(&self) -> usize {
        self.eta.len()
    }

    pub fn threshold_votes(&self) -> u64 {
        self.threshold_votes
    }

    /// Sum of all swing counts.
    pub fn eta_total(&self) -> BigUint {
        self.eta.iter().sum()
    }
}

/// Normalized Banzhaf indices at one quota; exact rationals summing to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerProfile {
    beta: Vec<BigRational>,
    quota_percent: Option<QuotaSpec>,
}

impl PowerProfile {
    /// Index `β_i` per player, in body order.
    pub fn beta(&self) -> &[BigRational] {
        &self.beta
    }

    pub fn n_players(&self) -> usize {
        self.beta.len()
    }

    /// The quota this profile was computed at, when it came from one.
    pub fn quota_percent(&self) -> Option<QuotaSpec> {
        self.quota_percent
    }

    pub fn with_quota(mut self, quota: QuotaSpec) -> Self {
        self.quota_percent = Some(quota);
        self
    }

    /// `β_i` as a percentage rendered to `decimals` places.
    pub fn beta_percent_string(&self, player: usize, decimals: usize) -> String {
        render::percent_string(&self.beta[player], decimals)
    }

    pub fn beta_f64(&self) -> Vec<f64> {
        self.beta.iter().map(render::to_f64).collect()
    }
}

/// The fraction of all `2^n` coalitions that win: the body's capacity to
/// reach a decision at all.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisivenessValue {
    winning: BigUint,
    n_players: usize,
}

impl DecisivenessValue {
    pub fn new(winning: BigUint, n_players: usize) -> Self {
        DecisivenessValue { winning, n_players }
    }

    pub fn winning_coalitions(&self) -> &BigUint {
        &self.winning
    }

    pub fn n_players(&self) -> usize {
        self.n_players
    }

    /// Exact value `winning / 2^n`.
    pub fn ratio(&self) -> BigRational {
        let denom = BigUint::from(1u32) << self.n_players;
        BigRational::new(
            BigInt::from(self.winning.clone()),
            BigInt::from(denom),
        )
    }

    pub fn fraction_f64(&self) -> f64 {
        render::to_f64(&self.ratio())
    }

    /// Percentage rendering, e.g. `26.1642` at four decimals.
    pub fn percent_string(&self, decimals: usize) -> String {
        render::percent_string(&self.ratio(), decimals)
    }
}

/// The swing count of a player of weight `w` at threshold `t`, given the
/// counts `c_minus` of the body without that player: the number of
/// coalitions whose sum lies in `[t - w, t - 1]`, each of which the player
/// tips over the line.
pub fn swing_count(c_minus: &CountVector, weight: u64, threshold: u64) -> BigUint {
    debug_assert!(threshold >= 1);
    c_minus.window_sum(threshold.saturating_sub(weight), threshold - 1)
}

/// The Banzhaf value `η_i / 2^(n-1)`: the probability that player `i`
/// swings a uniformly random coalition of the others.
pub fn banzhaf_value(eta: &BigUint, n_players: usize) -> BigRational {
    assert!(n_players >= 1);
    let denom = BigUint::from(1u32) << (n_players - 1);
    BigRational::new(BigInt::from(eta.clone()), BigInt::from(denom))
}

/// Normalizes swing counts into Banzhaf indices `β_i = η_i / Σ_j η_j`.
pub fn banzhaf_indices(profile: &SwingProfile) -> Result<PowerProfile, PowerError> {
    let total = profile.eta_total();
    if total.is_zero() {
        return Err(PowerError::DegenerateGame);
    }
    let total = BigInt::from(total);
    let beta = profile
        .eta
        .iter()
        .map(|eta| BigRational::new(BigInt::from(eta.clone()), total.clone()))
        .collect();
    Ok(PowerProfile {
        beta,
        quota_percent: None,
    })
}

/// Decisiveness of a body at one absolute threshold.
pub fn pta(body: &VotingBody, threshold: u64) -> Result<DecisivenessValue, PowerError> {
    validate_threshold(threshold, body.total_votes())?;
    let c = build_count_vector(body)?;
    Ok(DecisivenessValue::new(
        c.winning_count(threshold),
        body.n_players(),
    ))
}

/// Decisiveness for many thresholds (sorted ascending) from one build;
/// no per-player work is needed for winning counts.
pub fn pta_multi(
    body: &VotingBody,
    thresholds: &[u64],
) -> Result<Vec<DecisivenessValue>, PowerError> {
    if thresholds.windows(2).any(|pair| pair[0] > pair[1]) {
        return Err(PowerError::UnsortedThresholds);
    }
    for &t in thresholds {
        validate_threshold(t, body.total_votes())?;
    }
    let c = build_count_vector(body)?;
    Ok(c.winning_counts_multi(thresholds)
        .into_iter()
        .map(|winning| DecisivenessValue::new(winning, body.n_players()))
        .collect())
}

fn validate_threshold(threshold: u64, total: u64) -> Result<(), PowerError> {
    if threshold == 0 || threshold > total {
        return Err(PowerError::ThresholdOutOfRange {
            got: threshold,
            total,
        });
    }
    Ok(())
}

/// Swing profiles and decisiveness for many thresholds in one pass.
///
/// The count vector does not depend on the threshold, so one build plus
/// one deconvolution per player serves every requested threshold; each
/// extra threshold only adds window sums. Results are identical to
/// calling [`swing_count`] and [`pta`] per threshold independently.
///
/// Player passes are independent and run in parallel on the current rayon
/// pool; one scratch vector is allocated per worker chunk.
pub fn multi_quota_profiles(
    body: &VotingBody,
    thresholds: &[u64],
) -> Result<Vec<(SwingProfile, DecisivenessValue)>, PowerError> {
    if thresholds.windows(2).any(|pair| pair[0] > pair[1]) {
        return Err(PowerError::UnsortedThresholds);
    }
    for &t in thresholds {
        validate_threshold(t, body.total_votes())?;
    }
    if thresholds.is_empty() {
        return Ok(Vec::new());
    }

    let c = build_count_vector(body)?;
    let weights: Vec<u64> = body.weights().collect();
    let n = weights.len();

    // one contiguous chunk per worker keeps scratch allocations bounded by
    // the pool size; per-player cost is dominated by the deconvolution pass
    // over the whole lattice, so equal chunks balance well
    let threads = rayon::current_num_threads().max(1);
    let chunk_size = n.div_ceil(threads);
    let per_player: Vec<Vec<BigUint>> = weights
        .par_chunks(chunk_size)
        .map(|chunk| -> Result<Vec<Vec<BigUint>>, PowerError> {
            let mut scratch = c.clone();
            chunk
                .iter()
                .map(|&w| {
                    c.remove_player_into(w, &mut scratch)?;
                    Ok(thresholds
                        .iter()
                        .map(|&t| swing_count(&scratch, w, t))
                        .collect())
                })
                .collect()
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();

    let winning = c.winning_counts_multi(thresholds);
    Ok(thresholds
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let eta = per_player.iter().map(|swings| swings[k].clone()).collect();
            (
                SwingProfile::new(eta, t),
                DecisivenessValue::new(winning[k].clone(), n),
            )
        })
        .collect())
}
