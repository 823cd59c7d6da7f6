//! Weighted voting games: voters, bodies, quotas, and coalition evaluation.
//!
//! A body of voters with integer vote counts decides by weighted majority:
//! a coalition wins when its members' votes sum to at least an absolute
//! threshold. Quotas are given as exact percentages of the total and are
//! converted to the integer vote lattice by [`threshold_from_quota`].
//!
//! All integer weights: callers holding fractional weights must pre-scale
//! them to a common denominator. This keeps every downstream count exact.

use num_integer::Integer;
use num_rational::Ratio;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GameError {
    #[error("voter name must be non-empty")]
    EmptyName,
    #[error("voter {name:?} must hold at least one vote")]
    ZeroVotes { name: String },
    #[error("a voting body needs at least one voter")]
    EmptyBody,
    #[error("duplicate voter name {name:?}")]
    DuplicateName { name: String },
    #[error("total votes overflow a 64-bit counter")]
    TotalVotesOverflow,
    #[error("quota must lie in [50, 100] percent, got {got}")]
    QuotaOutOfRange { got: String },
    #[error("quota {got:?} is not a decimal percentage")]
    QuotaUnparseable { got: String },
    #[error("threshold must lie in [1, {total}], got {got}")]
    ThresholdOutOfRange { got: u64, total: u64 },
    #[error("coalition member index {index} out of range for {n_players} players")]
    MemberOutOfRange { index: usize, n_players: usize },
}

/// One voter: a display name and a strictly positive integer vote count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountryWeight {
    name: String,
    votes: u64,
}

impl CountryWeight {
    pub fn new(name: impl Into<String>, votes: u64) -> Result<Self, GameError> {
        let name = name.into();
        if name.trim().is_empty() {
            return Err(GameError::EmptyName);
        }
        if votes == 0 {
            return Err(GameError::ZeroVotes { name });
        }
        Ok(CountryWeight { name, votes })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn votes(&self) -> u64 {
        self.votes
    }
}

/// An ordered list of voters with a cached vote total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VotingBody {
    players: Vec<CountryWeight>,
    total_votes: u64,
}

impl VotingBody {
    /// Builds a body, rejecting empty lists and duplicate names.
    pub fn new(players: Vec<CountryWeight>) -> Result<Self, GameError> {
        if players.is_empty() {
            return Err(GameError::EmptyBody);
        }
        let mut seen = HashSet::with_capacity(players.len());
        let mut total_votes: u64 = 0;
        for p in &players {
            if !seen.insert(p.name.as_str()) {
                return Err(GameError::DuplicateName {
                    name: p.name.clone(),
                });
            }
            total_votes = total_votes
                .checked_add(p.votes)
                .ok_or(GameError::TotalVotesOverflow)?;
        }
        Ok(VotingBody {
            players,
            total_votes,
        })
    }

    /// Convenience constructor naming the voters `p1`, `p2`, ... in order.
    pub fn from_weights(weights: impl IntoIterator<Item = u64>) -> Result<Self, GameError> {
        let players = weights
            .into_iter()
            .enumerate()
            .map(|(i, w)| CountryWeight::new(format!("p{}", i + 1), w))
            .collect::<Result<Vec<_>, _>>()?;
        VotingBody::new(players)
    }

    pub fn players(&self) -> &[CountryWeight] {
        &self.players
    }

    pub fn n_players(&self) -> usize {
        self.players.len()
    }

    pub fn total_votes(&self) -> u64 {
        self.total_votes
    }

    /// Vote counts in player order.
    pub fn weights(&self) -> impl Iterator<Item = u64> + '_ {
        self.players.iter().map(|p| p.votes)
    }

    /// Optional preprocessing: divides every weight by the common gcd and
    /// returns the reduced body together with the divisor. Callers must
    /// rescale any absolute thresholds themselves; quota percentages are
    /// unaffected.
    pub fn gcd_reduced(&self) -> (VotingBody, u64) {
        let divisor = self
            .players
            .iter()
            .fold(0u64, |acc, p| acc.gcd(&p.votes));
        let players = self
            .players
            .iter()
            .map(|p| CountryWeight {
                name: p.name.clone(),
                votes: p.votes / divisor,
            })
            .collect();
        (
            VotingBody {
                players,
                total_votes: self.total_votes / divisor,
            },
            divisor,
        )
    }
}

/// A decision quota: an exact percentage of the total votes, in [50, 100].
///
/// Below 50% two disjoint coalitions could both win, so the type refuses
/// improper games outright.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct QuotaSpec {
    percent: Ratio<u64>,
}

impl QuotaSpec {
    pub fn new(percent: Ratio<u64>) -> Result<Self, GameError> {
        if percent < Ratio::from_integer(50) || percent > Ratio::from_integer(100) {
            return Err(GameError::QuotaOutOfRange {
                got: percent.to_string(),
            });
        }
        Ok(QuotaSpec { percent })
    }

    pub fn from_percent(percent: u64) -> Result<Self, GameError> {
        QuotaSpec::new(Ratio::from_integer(percent))
    }

    pub fn percent(&self) -> Ratio<u64> {
        self.percent
    }
}

impl fmt::Display for QuotaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}%", self.percent)
    }
}

impl FromStr for QuotaSpec {
    type Err = GameError;

    /// Parses a decimal percentage such as `58` or `58.5` exactly.
    fn from_str(s: &str) -> Result<Self, GameError> {
        let bad = || GameError::QuotaUnparseable { got: s.to_string() };
        let (int_part, frac_part) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
            || frac_part.len() > 12
        {
            return Err(bad());
        }
        let int: u64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        let den = 10u64.pow(frac_part.len() as u32);
        let frac: u64 = if frac_part.is_empty() {
            0
        } else {
            frac_part.parse().map_err(|_| bad())?
        };
        let num = int
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac))
            .ok_or_else(bad)?;
        QuotaSpec::new(Ratio::new(num, den))
    }
}

/// A voting body together with an absolute winning threshold in votes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameInstance {
    body: VotingBody,
    threshold_votes: u64,
}

impl GameInstance {
    pub fn new(body: VotingBody, threshold_votes: u64) -> Result<Self, GameError> {
        if threshold_votes == 0 || threshold_votes > body.total_votes() {
            return Err(GameError::ThresholdOutOfRange {
                got: threshold_votes,
                total: body.total_votes(),
            });
        }
        Ok(GameInstance {
            body,
            threshold_votes,
        })
    }

    /// Builds the game at a percentage quota. Infallible: every quota in
    /// [50, 100] maps to a threshold in [1, W].
    pub fn from_quota(body: VotingBody, quota: &QuotaSpec) -> Self {
        let threshold_votes = threshold_from_quota(quota, &body);
        GameInstance {
            body,
            threshold_votes,
        }
    }

    pub fn body(&self) -> &VotingBody {
        &self.body
    }

    pub fn threshold_votes(&self) -> u64 {
        self.threshold_votes
    }
}

/// A subset of player indices, sorted and distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coalition {
    n_players: usize,
    members: Vec<usize>,
}

impl Coalition {
    pub fn new(
        n_players: usize,
        members: impl IntoIterator<Item = usize>,
    ) -> Result<Self, GameError> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&index) = members.iter().find(|&&i| i >= n_players) {
            return Err(GameError::MemberOutOfRange { index, n_players });
        }
        Ok(Coalition { n_players, members })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn n_players(&self) -> usize {
        self.n_players
    }

    pub fn contains(&self, player: usize) -> bool {
        self.members.binary_search(&player).is_ok()
    }
}

/// Whether a coalition can pass a decision on its own.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Winning,
    Losing,
}

impl Outcome {
    pub fn is_winning(self) -> bool {
        matches!(self, Outcome::Winning)
    }
}

/// The smallest integer threshold `T` with `T >= q*W/100`.
///
/// Coalitions whose vote sum lands exactly on the boundary win. At an
/// even `W` and `q = 50%` this makes a coalition and its complement both
/// winners when each holds exactly half the votes, which is what pushes
/// the decisiveness of such bodies slightly above one half.
pub fn threshold_from_quota(quota: &QuotaSpec, body: &VotingBody) -> u64 {
    let num = *quota.percent().numer() as u128;
    let den = *quota.percent().denom() as u128 * 100;
    let product = num * body.total_votes() as u128;
    // ceil(product / den); quota >= 50% and W >= 1 keep this in [1, W]
    product.div_ceil(den) as u64
}

/// Evaluates one coalition against the game's threshold.
///
/// Panics if the coalition was built for a different player count.
pub fn evaluate_coalition(game: &GameInstance, coalition: &Coalition) -> Outcome {
    assert_eq!(
        coalition.n_players(),
        game.body().n_players(),
        "coalition built for a different body"
    );
    let players = game.body().players();
    let sum: u64 = coalition.members().iter().map(|&i| players[i].votes()).sum();
    if sum >= game.threshold_votes {
        Outcome::Winning
    } else {
        Outcome::Losing
    }
}
