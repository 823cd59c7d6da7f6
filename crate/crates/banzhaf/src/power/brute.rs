//! Brute-force enumeration of all `2^n` coalitions.
//!
//! The reference oracle for the generating-function engine: it shares no
//! code with the convolution path, so agreement between the two is strong
//! evidence both are right. Capped at 25 players.

use num_bigint::BigUint;

use super::{DecisivenessValue, PowerError, SwingProfile};
use crate::game::GameInstance;

/// Hard cap on the enumeration size (`2^25` coalitions).
pub const BRUTE_FORCE_MAX_PLAYERS: usize = 25;

fn subset_sums(weights: &[u64]) -> Vec<u64> {
    let n = weights.len();
    let mut sums = vec![0u64; 1 << n];
    for mask in 1usize..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = sums[mask & (mask - 1)] + weights[low];
    }
    sums
}

fn check_size(game: &GameInstance) -> Result<(), PowerError> {
    let n = game.body().n_players();
    if n > BRUTE_FORCE_MAX_PLAYERS {
        return Err(PowerError::TooManyPlayers {
            got: n,
            max: BRUTE_FORCE_MAX_PLAYERS,
        });
    }
    Ok(())
}

/// Swing counts by direct enumeration: player `i` is critical in `S ∪ {i}`
/// exactly when `S` loses and `S ∪ {i}` wins.
pub fn brute_force_banzhaf(game: &GameInstance) -> Result<SwingProfile, PowerError> {
    check_size(game)?;
    let weights: Vec<u64> = game.body().weights().collect();
    let n = weights.len();
    let threshold = game.threshold_votes();
    let sums = subset_sums(&weights);
    let mut eta = vec![0u64; n]; // swing counts fit u64 for n <= 25
    for (mask, &sum) in sums.iter().enumerate() {
        if sum >= threshold {
            continue; // only losing coalitions can be turned
        }
        for (i, &w) in weights.iter().enumerate() {
            if mask & (1 << i) == 0 && sum + w >= threshold {
                eta[i] += 1;
            }
        }
    }
    Ok(SwingProfile::new(
        eta.into_iter().map(BigUint::from).collect(),
        threshold,
    ))
}

/// Decisiveness by direct enumeration of the winning coalitions.
pub fn brute_force_pta(game: &GameInstance) -> Result<DecisivenessValue, PowerError> {
    check_size(game)?;
    let weights: Vec<u64> = game.body().weights().collect();
    let threshold = game.threshold_votes();
    let winning = subset_sums(&weights)
        .iter()
        .filter(|&&sum| sum >= threshold)
        .count();
    Ok(DecisivenessValue::new(
        BigUint::from(winning),
        weights.len(),
    ))
}
