//! Quota sensitivity analysis: every metric at every quota, plus the
//! quotas that optimize each one.
//!
//! The count vector is quota-independent, so a whole sweep costs one
//! generating-function build and one deconvolution per player, no matter
//! how many quotas are requested.

use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::game::{threshold_from_quota, QuotaSpec, VotingBody};
use crate::metrics::{
    euclidean, gini, hhi, manhattan, max_ratio, pearson, InequalityReport, MaxRatio, MetricsError,
    RelativeWeightVector,
};
use crate::power::{
    banzhaf_indices, multi_quota_profiles, pta_multi, DecisivenessValue, PowerError, PowerProfile,
};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("quota grid must be non-empty")]
    EmptyGrid,
    #[error("quota grid must be strictly increasing")]
    UnsortedGrid,
    #[error("quota {got} outside [50, 100]")]
    QuotaOutOfRange { got: u32 },
    #[error("no swept rows to optimize over")]
    NoRows,
    #[error("split inputs list {power} vs {weights} players")]
    MismatchedBodies { power: usize, weights: usize },
    #[error(transparent)]
    Power(#[from] PowerError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

/// Every scalar measure at one quota.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub quota: u32,
    pub d_euc: f64,
    pub d_man: f64,
    pub omega: MaxRatio,
    /// `None` when the power profile is constant (e.g. unanimity), where
    /// correlation is undefined.
    pub rho: Option<f64>,
    pub pta: DecisivenessValue,
    pub gini_beta: f64,
    pub hhi_beta: f64,
    /// Full power profile, kept only when requested.
    pub profile: Option<PowerProfile>,
}

/// What a sweep runs on.
///
/// The usual analysis computes everything from one body. Published
/// analyses sometimes mix normalizations of the same table, with power
/// indices from one integer lattice but decisiveness and the comparison
/// weight vector from another; `Split` expresses that directly instead
/// of forcing callers to splice rows from two sweeps.
#[derive(Debug, Clone)]
pub enum SweepInputs {
    /// Power, decisiveness, and comparison weights all from one body.
    Single(VotingBody),
    /// Power indices from `power`; decisiveness and comparison weights
    /// from `weights`. The bodies must list the same players in the same
    /// order.
    Split {
        power: VotingBody,
        weights: VotingBody,
    },
}

impl SweepInputs {
    pub fn single(body: VotingBody) -> Self {
        SweepInputs::Single(body)
    }

    pub fn split(power: VotingBody, weights: VotingBody) -> Result<Self, SweepError> {
        if power.n_players() != weights.n_players() {
            return Err(SweepError::MismatchedBodies {
                power: power.n_players(),
                weights: weights.n_players(),
            });
        }
        Ok(SweepInputs::Split { power, weights })
    }

    /// The body power indices are computed from.
    pub fn power_body(&self) -> &VotingBody {
        match self {
            SweepInputs::Single(body) => body,
            SweepInputs::Split { power, .. } => power,
        }
    }

    /// The body decisiveness and comparison weights are computed from.
    pub fn weight_body(&self) -> &VotingBody {
        match self {
            SweepInputs::Single(body) => body,
            SweepInputs::Split { weights, .. } => weights,
        }
    }
}

fn validate_grid(quotas: &[u32]) -> Result<Vec<QuotaSpec>, SweepError> {
    if quotas.is_empty() {
        return Err(SweepError::EmptyGrid);
    }
    if quotas.windows(2).any(|pair| pair[0] >= pair[1]) {
        return Err(SweepError::UnsortedGrid);
    }
    quotas
        .iter()
        .map(|&q| {
            QuotaSpec::from_percent(q as u64).map_err(|_| SweepError::QuotaOutOfRange { got: q })
        })
        .collect()
}

/// Runs the sweep over integer percentage quotas, everything computed
/// from one body.
///
/// `include_profiles` keeps the per-player indices on each row; the
/// scalar columns are always present.
pub fn run_sweep(
    body: &VotingBody,
    quotas: &[u32],
    include_profiles: bool,
) -> Result<Vec<SweepRow>, SweepError> {
    run_sweep_inputs(
        &SweepInputs::Single(body.clone()),
        quotas,
        include_profiles,
    )
}

/// Runs the sweep over integer percentage quotas on explicit inputs.
///
/// Each quota maps to a threshold on each body's own lattice
/// (`ceil(q*W/100)`), so the power game and the decisiveness game stay
/// internally consistent even when their lattices differ.
pub fn run_sweep_inputs(
    inputs: &SweepInputs,
    quotas: &[u32],
    include_profiles: bool,
) -> Result<Vec<SweepRow>, SweepError> {
    let specs = validate_grid(quotas)?;
    let power_body = inputs.power_body();
    let power_thresholds: Vec<u64> = specs
        .iter()
        .map(|spec| threshold_from_quota(spec, power_body))
        .collect();
    let profiles = multi_quota_profiles(power_body, &power_thresholds)?;

    let (weights, decisiveness) = match inputs {
        SweepInputs::Single(_) => (RelativeWeightVector::from_body(power_body), None),
        SweepInputs::Split { weights, .. } => {
            let thresholds: Vec<u64> = specs
                .iter()
                .map(|spec| threshold_from_quota(spec, weights))
                .collect();
            (
                RelativeWeightVector::from_body(weights),
                Some(pta_multi(weights, &thresholds)?),
            )
        }
    };

    quotas
        .iter()
        .zip(specs)
        .zip(profiles.into_iter().enumerate())
        .map(|((&quota, spec), (k, (swings, own_pta)))| {
            let pta = match &decisiveness {
                Some(values) => values[k].clone(),
                None => own_pta,
            };
            let profile = banzhaf_indices(&swings)?.with_quota(spec);
            let beta = profile.beta();
            let w = weights.as_slice();
            let rho = match pearson(w, beta) {
                Ok(value) => Some(value),
                Err(MetricsError::Degenerate { .. }) => None, // constant profile
                Err(other) => return Err(other.into()),
            };
            Ok(SweepRow {
                quota,
                d_euc: euclidean(beta, w)?,
                d_man: manhattan(beta, w)?,
                omega: max_ratio(beta, w)?,
                rho,
                pta,
                gini_beta: gini(beta)?,
                hhi_beta: hhi(beta)?,
                profile: include_profiles.then_some(profile),
            })
        })
        .collect()
}

/// The quotas optimizing each measure over a sweep.
///
/// Ties break toward the lower quota. Rows whose maximal ratio is
/// infinite cannot be compared and are excluded from its argmin; they are
/// listed in `omega_excluded` instead.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimumReport {
    pub argmin_euc: u32,
    pub argmin_man: u32,
    pub argmin_omega: Option<u32>,
    pub argmax_rho: u32,
    pub closest_gini: u32,
    pub closest_hhi: u32,
    pub baseline_gini: f64,
    pub baseline_hhi: f64,
    pub omega_excluded: Vec<u32>,
}

fn argbest<F>(rows: &[SweepRow], mut better: F) -> u32
where
    F: FnMut(&SweepRow, &SweepRow) -> bool,
{
    let mut best = &rows[0];
    for row in &rows[1..] {
        if better(row, best) {
            best = row;
        }
    }
    best.quota
}

/// Scans swept rows for the optima, measured against the inequality of
/// the weight vector itself.
pub fn find_optima(
    rows: &[SweepRow],
    baseline: &InequalityReport,
) -> Result<OptimumReport, SweepError> {
    if rows.is_empty() {
        return Err(SweepError::NoRows);
    }
    let argmin_euc = argbest(rows, |a, b| a.d_euc < b.d_euc);
    let argmin_man = argbest(rows, |a, b| a.d_man < b.d_man);
    // undefined correlations never win; all-undefined falls back to the
    // lowest quota, consistent with tie-breaking
    let argmax_rho = argbest(rows, |a, b| match (a.rho, b.rho) {
        (Some(x), Some(y)) => x > y,
        (Some(_), None) => true,
        _ => false,
    });
    let closest_gini = argbest(rows, |a, b| {
        (a.gini_beta - baseline.gini).abs() < (b.gini_beta - baseline.gini).abs()
    });
    let closest_hhi = argbest(rows, |a, b| {
        (a.hhi_beta - baseline.hhi).abs() < (b.hhi_beta - baseline.hhi).abs()
    });

    let omega_excluded: Vec<u32> = rows
        .iter()
        .filter(|row| !row.omega.is_finite())
        .map(|row| row.quota)
        .collect();
    let argmin_omega = rows
        .iter()
        .filter_map(|row| row.omega.value().map(|value| (row.quota, value)))
        .fold(None, |best: Option<(u32, f64)>, (quota, value)| match best {
            Some((_, best_value)) if best_value <= value => best,
            _ => Some((quota, value)),
        })
        .map(|(quota, _)| quota);

    Ok(OptimumReport {
        argmin_euc,
        argmin_man,
        argmin_omega,
        argmax_rho,
        closest_gini,
        closest_hhi,
        baseline_gini: baseline.gini,
        baseline_hhi: baseline.hhi,
        omega_excluded,
    })
}

/// Checks that the per-player indices on a row sum to exactly 1.
pub fn profile_sums_to_one(row: &SweepRow) -> bool {
    match &row.profile {
        Some(profile) => {
            let sum: BigRational = profile.beta().iter().sum();
            sum.is_one()
        }
        None => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::power::{build_count_vector, pta, swing_count, SwingProfile};
    use num_rational::BigRational;

    fn body(weights: &[u64]) -> VotingBody {
        VotingBody::from_weights(weights.iter().copied()).unwrap()
    }

    #[test]
    fn grid_validation() {
        let b = body(&[3, 2, 2]);
        assert!(matches!(run_sweep(&b, &[], true), Err(SweepError::EmptyGrid)));
        assert!(matches!(
            run_sweep(&b, &[50, 50], true),
            Err(SweepError::UnsortedGrid)
        ));
        assert!(matches!(
            run_sweep(&b, &[49, 51], true),
            Err(SweepError::QuotaOutOfRange { got: 49 })
        ));
        assert!(matches!(
            run_sweep(&b, &[60, 101], true),
            Err(SweepError::QuotaOutOfRange { got: 101 })
        ));
    }

    #[test]
    fn single_quota_sweep_matches_direct_computation() {
        let b = body(&[9, 7, 5, 3, 3, 2, 1, 1]);
        let rows = run_sweep(&b, &[60], true).unwrap();
        assert_eq!(rows.len(), 1);
        let row = &rows[0];

        let spec = QuotaSpec::from_percent(60).unwrap();
        let threshold = threshold_from_quota(&spec, &b);
        assert_eq!(row.pta, pta(&b, threshold).unwrap());

        // rebuild the profile along the single-threshold route
        let c = build_count_vector(&b).unwrap();
        let eta: Vec<_> = b
            .weights()
            .map(|w| swing_count(&c.remove_player(w).unwrap(), w, threshold))
            .collect();
        let direct = banzhaf_indices(&SwingProfile::new(eta, threshold)).unwrap();
        assert_eq!(row.profile.as_ref().unwrap().beta(), direct.beta());
        assert!(profile_sums_to_one(row));
    }

    #[test]
    fn rows_carry_strictly_increasing_quotas() {
        let b = body(&[9, 7, 5, 3, 3, 2, 1, 1]);
        let rows = run_sweep(&b, &[50, 55, 60, 75, 100], false).unwrap();
        let quotas: Vec<u32> = rows.iter().map(|r| r.quota).collect();
        assert_eq!(quotas, vec![50, 55, 60, 75, 100]);
        assert!(rows.iter().all(|r| r.profile.is_none()));
        // decisiveness cannot grow as the quota rises
        for pair in rows.windows(2) {
            assert!(pair[0].pta.ratio() >= pair[1].pta.ratio());
        }
    }

    #[test]
    fn optima_on_monotone_synthetic_rows_sit_at_the_endpoints() {
        use num_bigint::BigUint;

        // hand-built rows: every measure strictly monotone across quotas
        let synthetic = |quota: u32, k: f64| SweepRow {
            quota,
            d_euc: 0.01 * k,
            d_man: 0.02 * k,
            omega: MaxRatio::Finite {
                value: 1.0 + k,
                player: 0,
            },
            rho: Some(1.0 - 0.1 * k),
            pta: DecisivenessValue::new(BigUint::from(8u32 - k as u32), 3),
            gini_beta: 0.5 + 0.01 * k,
            hhi_beta: 0.3 - 0.01 * k,
            profile: None,
        };
        let rows: Vec<SweepRow> = (0..4).map(|k| synthetic(50 + k, k as f64 + 1.0)).collect();
        let baseline = InequalityReport {
            gini: 0.0, // below every row: closest is the smallest gini
            hhi: 1.0,  // above every row: closest is the largest hhi
        };
        let report = find_optima(&rows, &baseline).unwrap();
        assert_eq!(report.argmin_euc, 50);
        assert_eq!(report.argmin_man, 50);
        assert_eq!(report.argmin_omega, Some(50));
        assert_eq!(report.argmax_rho, 50);
        assert_eq!(report.closest_gini, 50);
        assert_eq!(report.closest_hhi, 50);
        assert!(report.omega_excluded.is_empty());
    }

    #[test]
    fn sweep_rows_match_independent_single_quota_sweeps() {
        let b = body(&[9, 7, 5, 3, 3, 2, 1, 1]);
        let quotas = [50, 60, 70, 80, 90, 100];
        let rows = run_sweep(&b, &quotas, true).unwrap();
        for (&q, row) in quotas.iter().zip(&rows) {
            let single = run_sweep(&b, &[q], true).unwrap().pop().unwrap();
            assert_eq!(row.d_euc.to_bits(), single.d_euc.to_bits(), "q={q}");
            assert_eq!(row.d_man.to_bits(), single.d_man.to_bits(), "q={q}");
            assert_eq!(row.omega, single.omega, "q={q}");
            assert_eq!(row.rho, single.rho, "q={q}");
            assert_eq!(row.pta, single.pta, "q={q}");
            assert_eq!(
                row.profile.as_ref().unwrap().beta(),
                single.profile.as_ref().unwrap().beta(),
                "q={q}"
            );
        }
    }

    #[test]
    fn ties_break_toward_the_lower_quota() {
        let b = body(&[1, 1, 1]);
        // thresholds for 51% and 60% of W=3 both land on 2 votes: identical rows
        let rows = run_sweep(&b, &[51, 60], false).unwrap();
        assert_eq!(rows[0].d_euc, rows[1].d_euc);
        let weights = RelativeWeightVector::from_body(&b);
        let baseline = InequalityReport::compute(weights.as_slice()).unwrap();
        let report = find_optima(&rows, &baseline).unwrap();
        assert_eq!(report.argmin_euc, 51);
        assert_eq!(report.argmin_man, 51);
        assert_eq!(report.argmax_rho, 51);
        assert_eq!(report.closest_gini, 51);
    }

    #[test]
    fn infinite_omega_rows_are_excluded_with_warning() {
        // dictator at every quota: the two null players zero out
        let b = body(&[10, 1, 1]);
        let rows = run_sweep(&b, &[50, 100], false).unwrap();
        assert!(!rows[0].omega.is_finite());
        assert!(rows[1].omega.is_finite()); // unanimity: everyone is critical
        let weights = RelativeWeightVector::from_body(&b);
        let baseline = InequalityReport::compute(weights.as_slice()).unwrap();
        let report = find_optima(&rows, &baseline).unwrap();
        assert_eq!(report.omega_excluded, vec![50]);
        assert_eq!(report.argmin_omega, Some(100));
    }

    #[test]
    fn split_inputs_take_power_and_weights_from_different_lattices() {
        // same three players, two integer normalizations of "similar" data;
        // the weight lattice has an exact-half tie at 50%, the power
        // lattice does not, so their winning counts differ (5/8 vs 4/8)
        let power_body = body(&[3, 2, 2]);
        let weight_body = body(&[2, 1, 1]);
        let inputs = SweepInputs::split(power_body.clone(), weight_body.clone()).unwrap();
        let rows = run_sweep_inputs(&inputs, &[50], true).unwrap();
        let row = &rows[0];

        // beta comes from the coarse lattice: [3,2,2] at T=4 is symmetric
        let third = BigRational::new(1.into(), 3.into());
        assert_eq!(row.profile.as_ref().unwrap().beta(), &[third.clone(), third.clone(), third]);

        // decisiveness comes from the weight lattice: T = 2 on W = 4
        let expected_pta = pta(&weight_body, 2).unwrap();
        assert_eq!(row.pta, expected_pta);
        assert_eq!(
            row.pta.ratio(),
            BigRational::new(5.into(), 8.into())
        );

        // and the comparison runs against the fine lattice's shares
        let weights = RelativeWeightVector::from_body(&weight_body);
        let manual = crate::metrics::euclidean(
            row.profile.as_ref().unwrap().beta(),
            weights.as_slice(),
        )
        .unwrap();
        assert_eq!(row.d_euc, manual);

        // a single-body sweep on the power lattice gives different numbers
        let single = run_sweep(&power_body, &[50], false).unwrap();
        assert_ne!(single[0].d_euc, row.d_euc);
        assert_ne!(single[0].pta, row.pta);

        assert!(matches!(
            SweepInputs::split(body(&[1, 1]), body(&[1, 1, 1])),
            Err(SweepError::MismatchedBodies { .. })
        ));
    }

    #[test]
    fn optima_need_rows() {
        let baseline = InequalityReport {
            gini: 0.0,
            hhi: 1.0,
        };
        assert!(matches!(
            find_optima(&[], &baseline),
            Err(SweepError::NoRows)
        ));
    }
}
