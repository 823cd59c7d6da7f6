//! Deterministic report serialization.
//!
//! CSV output is pinned to one dialect (comma separator, `"` quoting only
//! where needed, `\n` line endings, UTF-8, no BOM) and one column order
//! per report kind, so identical inputs always produce identical bytes.
//! JSON reports carry a versioned `schema_version` field; the schemas are
//! documented in the book under *File formats*.
//!
//! Numbers are rendered with round-half-even at a configurable number of
//! decimals (default 6 for sweeps, 4 for power tables). Exact rationals
//! are rounded directly; `f64` columns use the standard library float
//! formatter, which rounds the same way.

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;

use crate::data::{DataError, WeightTable};
use crate::game::{QuotaSpec, VotingBody};
use crate::metrics::MaxRatio;
use crate::power::{PowerProfile, SwingProfile};
use crate::render;
use crate::sweep::{OptimumReport, SweepRow};

pub const SCHEMA_VERSION: u32 = 1;

/// Output encoding for every CLI report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

fn fixed(x: f64, decimals: usize) -> String {
    format!("{x:.decimals$}")
}

/// Rounds to `decimals` places through the decimal string, so JSON carries
/// the same value the CSV shows.
fn rounded(x: f64, decimals: usize) -> f64 {
    fixed(x, decimals).parse().expect("fixed-point f64 reparses")
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new())
}

fn finish(writer: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(writer.into_inner().expect("in-memory writer"))
        .expect("reports are UTF-8")
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

// ---------------------------------------------------------------------------
// sweep reports

pub const SWEEP_CSV_HEADER: [&str; 8] = [
    "quota", "d_euc", "d_man", "omega", "rho", "pta", "gini", "hhi",
];

fn omega_field(omega: &MaxRatio, decimals: usize) -> String {
    match omega.value() {
        Some(value) => fixed(value, decimals),
        None => "inf".to_string(),
    }
}

fn rho_field(rho: Option<f64>, decimals: usize) -> String {
    match rho {
        Some(value) => fixed(value, decimals),
        None => "nan".to_string(),
    }
}

/// Sweep rows as CSV with the pinned column order.
pub fn sweep_csv(rows: &[SweepRow], decimals: usize) -> String {
    let mut writer = csv_writer();
    writer.write_record(SWEEP_CSV_HEADER).expect("write header");
    for row in rows {
        writer
            .write_record([
                row.quota.to_string(),
                fixed(row.d_euc, decimals),
                fixed(row.d_man, decimals),
                omega_field(&row.omega, decimals),
                rho_field(row.rho, decimals),
                render::decimal_string(&row.pta.ratio(), decimals),
                fixed(row.gini_beta, decimals),
                fixed(row.hhi_beta, decimals),
            ])
            .expect("write row");
    }
    finish(writer)
}

#[derive(Serialize)]
struct SweepRowJson {
    quota: u32,
    d_euc: f64,
    d_man: f64,
    /// `null` when some player's power is exactly zero.
    omega: Option<f64>,
    /// `null` when the power profile is constant.
    rho: Option<f64>,
    pta: f64,
    gini: f64,
    hhi: f64,
}

#[derive(Serialize)]
struct SweepJson {
    schema_version: u32,
    kind: &'static str,
    decimals: usize,
    rows: Vec<SweepRowJson>,
}

pub fn sweep_json(rows: &[SweepRow], decimals: usize) -> String {
    let rows = rows
        .iter()
        .map(|row| SweepRowJson {
            quota: row.quota,
            d_euc: rounded(row.d_euc, decimals),
            d_man: rounded(row.d_man, decimals),
            omega: row.omega.value().map(|v| rounded(v, decimals)),
            rho: row.rho.map(|v| rounded(v, decimals)),
            pta: render::decimal_string(&row.pta.ratio(), decimals)
                .parse()
                .expect("decimal string reparses"),
            gini: rounded(row.gini_beta, decimals),
            hhi: rounded(row.hhi_beta, decimals),
        })
        .collect();
    json_line(&SweepJson {
        schema_version: SCHEMA_VERSION,
        kind: "sweep",
        decimals,
        rows,
    })
}

/// One sweep row read back from CSV; `omega` is `None` where the file
/// says `inf`, `rho` where it says `nan`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedSweepRow {
    pub quota: u32,
    pub d_euc: f64,
    pub d_man: f64,
    pub omega: Option<f64>,
    pub rho: Option<f64>,
    pub pta: f64,
    pub gini: f64,
    pub hhi: f64,
}

/// Reads a sweep CSV produced by [`sweep_csv`] back into numbers.
pub fn parse_sweep_csv(text: &str) -> Result<Vec<ParsedSweepRow>, DataError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| DataError::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    if headers.iter().ne(SWEEP_CSV_HEADER) {
        return Err(DataError::BadHeader {
            got: headers.iter().collect::<Vec<_>>().join(","),
        });
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| DataError::Parse {
            line: e.position().map(|p| p.line()).unwrap_or(0),
            message: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let field = |i: usize| record.get(i).unwrap_or("").trim().to_string();
        let number = |i: usize| -> Result<f64, DataError> {
            field(i).parse().map_err(|_| DataError::Parse {
                line,
                message: format!("column {:?} is not a number", SWEEP_CSV_HEADER[i]),
            })
        };
        let omega = if field(3) == "inf" { None } else { Some(number(3)?) };
        let rho = if field(4) == "nan" { None } else { Some(number(4)?) };
        rows.push(ParsedSweepRow {
            quota: field(0).parse().map_err(|_| DataError::Parse {
                line,
                message: "quota is not an integer".into(),
            })?,
            d_euc: number(1)?,
            d_man: number(2)?,
            omega,
            rho,
            pta: number(5)?,
            gini: number(6)?,
            hhi: number(7)?,
        });
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// power reports

/// One line of a power table, exact until rendered.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerRow {
    pub name: String,
    pub votes: u64,
    pub weight: BigRational,
    pub eta: BigUint,
    pub beta: BigRational,
}

/// Joins names, votes, swings, and indices, sorted by weight descending.
/// Equal weights keep their body order, so output is deterministic.
pub fn power_rows(
    body: &VotingBody,
    swings: &SwingProfile,
    profile: &PowerProfile,
) -> Vec<PowerRow> {
    let total = num_bigint::BigInt::from(body.total_votes());
    let mut rows: Vec<PowerRow> = body
        .players()
        .iter()
        .zip(swings.eta())
        .zip(profile.beta())
        .map(|((player, eta), beta)| PowerRow {
            name: player.name().to_string(),
            votes: player.votes(),
            weight: BigRational::new(player.votes().into(), total.clone()),
            eta: eta.clone(),
            beta: beta.clone(),
        })
        .collect();
    rows.sort_by_key(|row| std::cmp::Reverse(row.votes));
    rows
}

pub const POWER_CSV_HEADER: [&str; 5] = ["country", "votes", "weight_pct", "eta", "beta_pct"];

pub fn power_csv(rows: &[PowerRow], decimals: usize) -> String {
    let mut writer = csv_writer();
    writer.write_record(POWER_CSV_HEADER).expect("write header");
    for row in rows {
        writer
            .write_record([
                row.name.clone(),
                row.votes.to_string(),
                render::percent_string(&row.weight, decimals),
                row.eta.to_string(),
                render::percent_string(&row.beta, decimals),
            ])
            .expect("write row");
    }
    finish(writer)
}

#[derive(Serialize)]
struct PowerRowJson {
    country: String,
    votes: u64,
    weight_pct: f64,
    /// Swing counts overflow JSON numbers, so they travel as strings.
    eta: String,
    beta_pct: f64,
}

#[derive(Serialize)]
struct PowerJson {
    schema_version: u32,
    kind: &'static str,
    quota_percent: Option<f64>,
    decimals: usize,
    rows: Vec<PowerRowJson>,
}

pub fn power_json(rows: &[PowerRow], quota: Option<QuotaSpec>, decimals: usize) -> String {
    let percent = |x: &BigRational| -> f64 {
        render::percent_string(x, decimals)
            .parse()
            .expect("decimal string reparses")
    };
    let rows = rows
        .iter()
        .map(|row| PowerRowJson {
            country: row.name.clone(),
            votes: row.votes,
            weight_pct: percent(&row.weight),
            eta: row.eta.to_string(),
            beta_pct: percent(&row.beta),
        })
        .collect();
    json_line(&PowerJson {
        schema_version: SCHEMA_VERSION,
        kind: "power",
        quota_percent: quota.map(|q| {
            *q.percent().numer() as f64 / *q.percent().denom() as f64
        }),
        decimals,
        rows,
    })
}

// ---------------------------------------------------------------------------
// optima reports

pub fn optima_csv(report: &OptimumReport, decimals: usize) -> String {
    let mut writer = csv_writer();
    writer.write_record(["field", "value"]).expect("write header");
    let omega = match report.argmin_omega {
        Some(q) => q.to_string(),
        None => "none".to_string(),
    };
    let excluded = report
        .omega_excluded
        .iter()
        .map(|q| q.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    let pairs = [
        ("argmin_euc", report.argmin_euc.to_string()),
        ("argmin_man", report.argmin_man.to_string()),
        ("argmin_omega", omega),
        ("argmax_rho", report.argmax_rho.to_string()),
        ("closest_gini", report.closest_gini.to_string()),
        ("closest_hhi", report.closest_hhi.to_string()),
        ("baseline_gini", fixed(report.baseline_gini, decimals)),
        ("baseline_hhi", fixed(report.baseline_hhi, decimals)),
        ("omega_excluded", excluded),
    ];
    for (field, value) in pairs {
        writer.write_record([field, &value]).expect("write row");
    }
    finish(writer)
}

#[derive(Serialize)]
struct OptimaJson {
    schema_version: u32,
    kind: &'static str,
    argmin_euc: u32,
    argmin_man: u32,
    argmin_omega: Option<u32>,
    argmax_rho: u32,
    closest_gini: u32,
    closest_hhi: u32,
    baseline_gini: f64,
    baseline_hhi: f64,
    omega_excluded: Vec<u32>,
}

pub fn optima_json(report: &OptimumReport, decimals: usize) -> String {
    json_line(&OptimaJson {
        schema_version: SCHEMA_VERSION,
        kind: "optima",
        argmin_euc: report.argmin_euc,
        argmin_man: report.argmin_man,
        argmin_omega: report.argmin_omega,
        argmax_rho: report.argmax_rho,
        closest_gini: report.closest_gini,
        closest_hhi: report.closest_hhi,
        baseline_gini: rounded(report.baseline_gini, decimals),
        baseline_hhi: rounded(report.baseline_hhi, decimals),
        omega_excluded: report.omega_excluded.clone(),
    })
}

// ---------------------------------------------------------------------------
// dataset reports

/// Weight table as CSV, parseable back by `parse_weights_csv`. The share
/// column appears only if any row carries one.
pub fn dataset_csv(table: &WeightTable) -> String {
    let has_share = table
        .rows()
        .iter()
        .any(|row| row.declared_share_percent.is_some());
    let mut writer = csv_writer();
    if has_share {
        writer
            .write_record(["country", "votes", "share"])
            .expect("write header");
    } else {
        writer
            .write_record(["country", "votes"])
            .expect("write header");
    }
    for row in table.rows() {
        let votes = row.votes.to_string();
        if has_share {
            let share = row
                .declared_share_percent
                .map(|s| s.to_string())
                .unwrap_or_default();
            writer
                .write_record([row.name.as_str(), &votes, &share])
                .expect("write row");
        } else {
            writer
                .write_record([row.name.as_str(), &votes])
                .expect("write row");
        }
    }
    finish(writer)
}

#[derive(Serialize)]
struct DatasetRowJson {
    country: String,
    votes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    share: Option<f64>,
}

#[derive(Serialize)]
struct DatasetJson {
    schema_version: u32,
    kind: &'static str,
    source: String,
    total_votes: u64,
    rows: Vec<DatasetRowJson>,
}

pub fn dataset_json(table: &WeightTable) -> String {
    let rows = table
        .rows()
        .iter()
        .map(|row| DatasetRowJson {
            country: row.name.clone(),
            votes: row.votes,
            share: row.declared_share_percent,
        })
        .collect();
    json_line(&DatasetJson {
        schema_version: SCHEMA_VERSION,
        kind: "dataset",
        source: table.source().to_string(),
        total_votes: table.total_votes(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{parse_weights_csv, TableSource};
    use crate::metrics::{InequalityReport, RelativeWeightVector};
    use crate::sweep::{find_optima, run_sweep};

    fn sample_rows() -> Vec<SweepRow> {
        let body = VotingBody::from_weights([9, 7, 5, 3, 3, 2, 1, 1]).unwrap();
        run_sweep(&body, &[50, 60, 75], true).unwrap()
    }

    #[test]
    fn empty_sweep_is_header_only() {
        assert_eq!(sweep_csv(&[], 6), "quota,d_euc,d_man,omega,rho,pta,gini,hhi\n");
    }

    #[test]
    fn sweep_rows_round_trip_through_parse() {
        let rows = sample_rows();
        let text = sweep_csv(&rows, 6);
        let parsed = parse_sweep_csv(&text).unwrap();
        assert_eq!(parsed.len(), rows.len());
        for (back, row) in parsed.iter().zip(&rows) {
            assert_eq!(back.quota, row.quota);
            assert_eq!(back.d_euc, rounded(row.d_euc, 6));
            assert_eq!(back.d_man, rounded(row.d_man, 6));
            assert_eq!(back.rho, row.rho.map(|v| rounded(v, 6)));
            assert_eq!(back.gini, rounded(row.gini_beta, 6));
            assert_eq!(back.hhi, rounded(row.hhi_beta, 6));
            assert_eq!(back.omega, row.omega.value().map(|v| rounded(v, 6)));
        }
        // byte determinism
        assert_eq!(text, sweep_csv(&rows, 6));
    }

    #[test]
    fn infinite_omega_renders_as_inf() {
        let body = VotingBody::from_weights([10, 1, 1]).unwrap();
        let rows = run_sweep(&body, &[50], false).unwrap();
        let text = sweep_csv(&rows, 4);
        assert!(text.lines().nth(1).unwrap().contains(",inf,"));
        let parsed = parse_sweep_csv(&text).unwrap();
        assert_eq!(parsed[0].omega, None);
        let json = sweep_json(&rows, 4);
        assert!(json.contains("\"omega\": null"));
    }

    #[test]
    fn power_table_sorts_by_weight() {
        let body = VotingBody::from_weights([2, 5, 3]).unwrap();
        let profiles = crate::power::multi_quota_profiles(&body, &[6]).unwrap();
        let (swings, _) = &profiles[0];
        let profile = crate::power::banzhaf_indices(swings).unwrap();
        let rows = power_rows(&body, swings, &profile);
        let names: Vec<&str> = rows.iter().map(|r| r.name.as_str()).collect();
        assert_eq!(names, vec!["p2", "p3", "p1"]);

        // [2,5,3] at T=6: p2 swings {p1,p2},{p2,p3},{all}; p1 and p3 swing once
        let text = power_csv(&rows, 4);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("country,votes,weight_pct,eta,beta_pct"));
        assert_eq!(lines.next(), Some("p2,5,50.0000,3,60.0000"));
        assert_eq!(lines.next(), Some("p3,3,30.0000,1,20.0000"));
        assert_eq!(lines.next(), Some("p1,2,20.0000,1,20.0000"));
    }

    #[test]
    fn optima_reports_serialize() {
        let rows = sample_rows();
        let body = VotingBody::from_weights([9, 7, 5, 3, 3, 2, 1, 1]).unwrap();
        let weights = RelativeWeightVector::from_body(&body);
        let baseline = InequalityReport::compute(weights.as_slice()).unwrap();
        let report = find_optima(&rows, &baseline).unwrap();
        let text = optima_csv(&report, 6);
        assert!(text.starts_with("field,value\n"));
        assert!(text.contains("argmin_euc,"));
        let json = optima_json(&report, 6);
        assert!(json.contains("\"schema_version\": 1"));
        assert!(json.contains("\"kind\": \"optima\""));
    }

    #[test]
    fn dataset_csv_round_trips() {
        let table = parse_weights_csv(
            "country,votes,share\n\"Congo, DR\",12112,0.24\nOther,100,\n",
            TableSource::Embedded,
        )
        .unwrap();
        let text = dataset_csv(&table);
        let again = parse_weights_csv(&text, TableSource::Embedded).unwrap();
        assert_eq!(table.rows(), again.rows());

        let no_shares = parse_weights_csv("country,votes\nA,3\nB,2\n", TableSource::Embedded).unwrap();
        assert_eq!(dataset_csv(&no_shares), "country,votes\nA,3\nB,2\n");
    }
}
