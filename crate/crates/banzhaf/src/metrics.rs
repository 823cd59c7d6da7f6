//! Scalar measures comparing voting weight against voting power.
//!
//! Distances, correlation, and the maximal ratio quantify how far a power
//! profile drifts from the weights that generated it; Gini and
//! Herfindahl-Hirschman quantify concentration on a single vector.
//!
//! Inputs are exact rationals straight from the power engine, so the only
//! rounding happens on the way out: sums and moments are accumulated
//! exactly and converted to `f64` once, right before any square root.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::game::VotingBody;
use crate::render;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("vector lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("degenerate input: {reason}")]
    Degenerate { reason: &'static str },
    #[error("weight of player {player} is not strictly positive")]
    NonPositiveWeight { player: usize },
    #[error("vector must sum to exactly 1, off by {off}")]
    NotNormalized { off: String },
}

/// Weights rescaled to fractions of the total, `w_i = votes_i / W`.
///
/// Derived from the raw integer votes, never from any rounded share
/// column, so the entries sum to exactly 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelativeWeightVector {
    w: Vec<BigRational>,
}

impl RelativeWeightVector {
    pub fn from_body(body: &VotingBody) -> Self {
        let total = BigInt::from(body.total_votes());
        let w = body
            .weights()
            .map(|votes| BigRational::new(BigInt::from(votes), total.clone()))
            .collect();
        RelativeWeightVector { w }
    }

    pub fn as_slice(&self) -> &[BigRational] {
        &self.w
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.w.iter().map(render::to_f64).collect()
    }
}

/// The worst per-player multiplicative discrepancy, or the player whose
/// power vanished entirely.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaxRatio {
    Finite { value: f64, player: usize },
    Infinite { player: usize },
}

impl MaxRatio {
    pub fn is_finite(&self) -> bool {
        matches!(self, MaxRatio::Finite { .. })
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            MaxRatio::Finite { value, .. } => Some(*value),
            MaxRatio::Infinite { .. } => None,
        }
    }

    /// The player attaining the maximum (or the first null player).
    pub fn player(&self) -> usize {
        match self {
            MaxRatio::Finite { player, .. } | MaxRatio::Infinite { player } => *player,
        }
    }
}

fn check_len(left: &[BigRational], right: &[BigRational]) -> Result<(), MetricsError> {
    if left.len() != right.len() {
        return Err(MetricsError::LengthMismatch {
            left: left.len(),
            right: right.len(),
        });
    }
    Ok(())
}

/// Euclidean distance `sqrt(Σ (β_i - w_i)^2)`.
pub fn euclidean(beta: &[BigRational], w: &[BigRational]) -> Result<f64, MetricsError> {
    check_len(beta, w)?;
    let sum: BigRational = beta
        .iter()
        .zip(w)
        .map(|(b, w)| {
            let d = b - w;
            &d * &d
        })
        .sum();
    Ok(render::to_f64(&sum).sqrt())
}

/// Manhattan distance `Σ |β_i - w_i|`.
pub fn manhattan(beta: &[BigRational], w: &[BigRational]) -> Result<f64, MetricsError> {
    check_len(beta, w)?;
    let sum: BigRational = beta.iter().zip(w).map(|(b, w)| (b - w).abs()).sum();
    Ok(render::to_f64(&sum))
}

/// The maximal ratio `max_i max(β_i/w_i, w_i/β_i)`.
///
/// Sensitive to relative mistreatment of small players, where the absolute
/// distances see nothing. A player with zero power makes the ratio
/// infinite; that is a value, not an error, because high quotas genuinely
/// null small players. The comparison runs on exact rationals, so the
/// attaining player is never an artifact of rounding.
pub fn max_ratio(beta: &[BigRational], w: &[BigRational]) -> Result<MaxRatio, MetricsError> {
    check_len(beta, w)?;
    if beta.is_empty() {
        return Err(MetricsError::Degenerate {
            reason: "empty vectors",
        });
    }
    let mut best: Option<(BigRational, usize)> = None;
    for (i, (b, w)) in beta.iter().zip(w).enumerate() {
        if !w.is_positive() {
            return Err(MetricsError::NonPositiveWeight { player: i });
        }
        if b.is_zero() {
            return Ok(MaxRatio::Infinite { player: i });
        }
        let ratio = (b / w).max(w / b);
        match &best {
            Some((value, _)) if *value >= ratio => {}
            _ => best = Some((ratio, i)),
        }
    }
    let (value, player) = best.expect("non-empty input");
    Ok(MaxRatio::Finite {
        value: render::to_f64(&value),
        player,
    })
}

/// Pearson correlation between weights and power indices.
///
/// Moments are accumulated exactly; sample-vs-population normalization
/// cancels in the ratio. Constant vectors have no defined correlation.
pub fn pearson(w: &[BigRational], beta: &[BigRational]) -> Result<f64, MetricsError> {
    check_len(w, beta)?;
    let n = BigRational::from_integer(BigInt::from(w.len()));
    let sx: BigRational = w.iter().sum();
    let sy: BigRational = beta.iter().sum();
    let sxx: BigRational = w.iter().map(|x| x * x).sum();
    let syy: BigRational = beta.iter().map(|y| y * y).sum();
    let sxy: BigRational = w.iter().zip(beta).map(|(x, y)| x * y).sum();
    let num = &n * &sxy - &sx * &sy;
    let d_w = &n * &sxx - &sx * &sx;
    let d_b = &n * &syy - &sy * &sy;
    if d_w.is_zero() || d_b.is_zero() {
        return Err(MetricsError::Degenerate {
            reason: "constant vector has no defined correlation",
        });
    }
    Ok(render::to_f64(&num) / (render::to_f64(&d_w).sqrt() * render::to_f64(&d_b).sqrt()))
}

/// Gini index `Σ_i Σ_j |a_i - a_j| / (2 n Σ a_i)`.
///
/// Computed in `O(n log n)` by sorting: with ascending `x_0 <= ... <=
/// x_{n-1}` the double sum collapses to `2 Σ_i (i * x_i - prefix_i)`.
pub fn gini(a: &[BigRational]) -> Result<f64, MetricsError> {
    if a.iter().any(|x| x.is_negative()) {
        return Err(MetricsError::Degenerate {
            reason: "negative entry",
        });
    }
    let total: BigRational = a.iter().sum();
    if total.is_zero() || a.is_empty() {
        return Err(MetricsError::Degenerate {
            reason: "vector sums to zero",
        });
    }
    let mut sorted: Vec<&BigRational> = a.iter().collect();
    sorted.sort_unstable();
    let mut acc = BigRational::zero();
    let mut prefix = BigRational::zero();
    for (i, x) in sorted.into_iter().enumerate() {
        acc += BigRational::from_integer(BigInt::from(i)) * x - &prefix;
        prefix += x;
    }
    let denom = BigRational::from_integer(BigInt::from(a.len())) * total;
    Ok(render::to_f64(&(acc / denom)))
}

/// Herfindahl-Hirschman index `Σ a_i^2` of a normalized vector.
///
/// Requires the input to sum to exactly 1; power profiles and relative
/// weight vectors do by construction.
pub fn hhi(a: &[BigRational]) -> Result<f64, MetricsError> {
    let total: BigRational = a.iter().sum();
    if !total.is_one() {
        return Err(MetricsError::NotNormalized {
            off: (total - BigRational::one()).to_string(),
        });
    }
    let sum2: BigRational = a.iter().map(|x| x * x).sum();
    Ok(render::to_f64(&sum2))
}

/// All four weight-vs-power comparison measures for one profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub d_euc: f64,
    pub d_man: f64,
    pub omega: MaxRatio,
    pub rho: f64,
}

impl ComparisonReport {
    pub fn compute(beta: &[BigRational], w: &[BigRational]) -> Result<Self, MetricsError> {
        Ok(ComparisonReport {
            d_euc: euclidean(beta, w)?,
            d_man: manhattan(beta, w)?,
            omega: max_ratio(beta, w)?,
            rho: pearson(w, beta)?,
        })
    }
}

/// Concentration measures of one normalized vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityReport {
    pub gini: f64,
    pub hhi: f64,
}

impl InequalityReport {
    pub fn compute(a: &[BigRational]) -> Result<Self, MetricsError> {
        Ok(InequalityReport {
            gini: gini(a)?,
            hhi: hhi(a)?,
        })
    }
}
