//! Exact voting-power analysis for weighted majority games.
//!
//! Voting weight and voting power are not the same thing: a voter with
//! 16% of the votes can hold 23% of the real decision power, depending on
//! where the decision threshold sits. This crate measures that gap
//! exactly and finds the thresholds that close it.
//!
//! The toolkit computes
//!
//! * **Banzhaf swing counts and indices**, via subset-sum generating
//!   functions, exact at any scale (the bundled 191-country IMF table has
//!   coalition counts near `2^191`),
//! * **decisiveness**: the share of all coalitions able to pass a
//!   decision,
//! * **weight-vs-power discrepancy**: Euclidean and Manhattan distance,
//!   maximal ratio, Pearson correlation,
//! * **concentration**: Gini and Herfindahl-Hirschman indices,
//! * **quota sweeps**: all of the above for every quota in a range, with
//!   one generating-function build total, plus the quotas optimizing each
//!   measure.
//!
//! ```
//! use banzhaf::game::{GameInstance, QuotaSpec, VotingBody};
//! use banzhaf::power::{banzhaf_indices, multi_quota_profiles};
//!
//! // three voters, majority rule: the 2-vote and 3-vote players are
//! // interchangeable, and power shows it even though weight does not
//! let body = VotingBody::from_weights([3, 2, 2])?;
//! let quota = QuotaSpec::from_percent(50)?;
//! let game = GameInstance::from_quota(body.clone(), &quota);
//!
//! let mut results = multi_quota_profiles(&body, &[game.threshold_votes()])?;
//! let (swings, decisiveness) = results.pop().unwrap();
//! let power = banzhaf_indices(&swings)?;
//!
//! assert_eq!(power.beta_percent_string(0, 2), "33.33");
//! assert_eq!(power.beta_percent_string(1, 2), "33.33");
//! assert_eq!(decisiveness.percent_string(2), "50.00");
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```
//!
//! The command-line tool built on this library reproduces the full IMF
//! Board of Governors analysis with zero arguments; see the book under
//! `book/` and the `dataset`, `power`, `sweep`, and `optima` subcommands.

pub mod data;
pub mod game;
pub mod metrics;
pub mod power;
pub mod render;
pub mod report;
pub mod sweep;

pub use data::{embedded_imf_dataset, parse_weights_csv, TableSource, WeightRow, WeightTable};
pub use game::{
    evaluate_coalition, threshold_from_quota, Coalition, CountryWeight, GameInstance, Outcome,
    QuotaSpec, VotingBody,
};
pub use metrics::{
    euclidean, gini, hhi, manhattan, max_ratio, pearson, ComparisonReport, InequalityReport,
    MaxRatio, RelativeWeightVector,
};
pub use power::{
    banzhaf_indices, banzhaf_value, brute_force_banzhaf, brute_force_pta, build_count_vector,
    multi_quota_profiles, pta, pta_multi, swing_count, CountVector, DecisivenessValue,
    PowerProfile, SwingProfile,
};
pub use report::ReportFormat;
pub use sweep::{find_optima, run_sweep, run_sweep_inputs, OptimumReport, SweepInputs, SweepRow};

/// Book chapters double as doctests: every fenced Rust block in the guide
/// compiles and runs against the current API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/weighted-games.md")]
    mod weighted_games {}
    #[doc = include_str!("../../../book/src/counting-coalitions.md")]
    mod counting_coalitions {}
    #[doc = include_str!("../../../book/src/banzhaf-power.md")]
    mod banzhaf_power {}
    #[doc = include_str!("../../../book/src/weights-vs-power.md")]
    mod weights_vs_power {}
    #[doc = include_str!("../../../book/src/quota-sweep.md")]
    mod quota_sweep {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/file-formats.md")]
    mod file_formats {}
}
