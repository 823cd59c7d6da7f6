//! Weight table ingestion and the bundled IMF dataset.
//!
//! Tables arrive as UTF-8 CSV with a `country,votes[,share]` header. The
//! optional share column is the source's own rounded percentage; it is
//! checked against the raw votes and kept alongside them. Nothing is ever
//! computed from it unless a caller explicitly asks for the share lattice,
//! since two-decimal percentages are far too coarse for exact work.

use std::fmt;
use std::sync::OnceLock;
use thiserror::Error;

use crate::game::{CountryWeight, GameError, VotingBody};

/// Vote counts of the 191 IMF member countries (Board of Governors),
/// from the IMF's published members-and-quotas table.
const IMF_CSV: &str = include_str!("../data/imf_votes.csv");

#[derive(Debug, Error)]
pub enum DataError {
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("header must be 'country,votes' or 'country,votes,share', got {got:?}")]
    BadHeader { got: String },
    #[error("line {line}: duplicate country {name:?}")]
    DuplicateCountry { line: u64, name: String },
    #[error("line {line}: votes of {name:?} must be a positive integer")]
    NonPositiveVotes { line: u64, name: String },
    #[error("{name:?} has no usable declared share ({reason})")]
    UnusableShare { name: String, reason: String },
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Where a table came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableSource {
    Embedded,
    File(String),
}

impl fmt::Display for TableSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableSource::Embedded => write!(f, "embedded"),
            TableSource::File(path) => write!(f, "{path}"),
        }
    }
}

/// One parsed row: a country, its raw votes, and the source's own rounded
/// share in percent, if the file carried one.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightRow {
    pub name: String,
    pub votes: u64,
    pub declared_share_percent: Option<f64>,
}

/// A validated weight table in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTable {
    rows: Vec<WeightRow>,
    source: TableSource,
    warnings: Vec<String>,
}

/// Declared shares may differ from `100 * votes / W` by at most half of
/// their last printed digit (two decimals in percent).
const SHARE_TOLERANCE_PP: f64 = 0.005;

impl WeightTable {
    pub fn rows(&self) -> &[WeightRow] {
        &self.rows
    }

    pub fn source(&self) -> &TableSource {
        &self.source
    }

    /// Non-fatal findings from parsing, e.g. share-column mismatches.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn total_votes(&self) -> u64 {
        self.rows.iter().map(|r| r.votes).sum()
    }

    pub fn votes_of(&self, name: &str) -> Option<u64> {
        self.rows.iter().find(|r| r.name == name).map(|r| r.votes)
    }

    /// Rank of a country by weight, descending, 1-based; ties share the
    /// better rank.
    pub fn rank_by_weight(&self, name: &str) -> Option<usize> {
        let votes = self.votes_of(name)?;
        Some(1 + self.rows.iter().filter(|r| r.votes > votes).count())
    }

    pub fn voting_body(&self) -> Result<VotingBody, GameError> {
        let players = self
            .rows
            .iter()
            .map(|r| CountryWeight::new(r.name.clone(), r.votes))
            .collect::<Result<Vec<_>, _>>()?;
        VotingBody::new(players)
    }

    /// True when every row carries a declared share.
    pub fn has_complete_shares(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.declared_share_percent.is_some())
    }

    /// The voting body whose integer weights are the declared shares in
    /// basis points (hundredths of a percent of the total).
    ///
    /// This is the lattice a source's own rounded share column induces:
    /// a country listed at 0.04% weighs 4, one at 16.49% weighs 1649.
    /// Power indices computed here generally differ from the raw-vote
    /// ones; that is the point of having both. Player order matches the
    /// table, so indices line up with [`WeightTable::voting_body`].
    pub fn declared_share_body(&self) -> Result<VotingBody, DataError> {
        let players = self
            .rows
            .iter()
            .map(|r| {
                let share = r.declared_share_percent.ok_or_else(|| {
                    DataError::UnusableShare {
                        name: r.name.clone(),
                        reason: "missing".into(),
                    }
                })?;
                let scaled = share * 100.0;
                let weight = scaled.round();
                if (scaled - weight).abs() > 1e-6 {
                    return Err(DataError::UnusableShare {
                        name: r.name.clone(),
                        reason: format!("{share}% is not a whole number of basis points"),
                    });
                }
                if weight < 1.0 {
                    return Err(DataError::UnusableShare {
                        name: r.name.clone(),
                        reason: format!("{share}% rounds to zero basis points"),
                    });
                }
                CountryWeight::new(r.name.clone(), weight as u64).map_err(DataError::Game)
            })
            .collect::<Result<Vec<_>, _>>()?;
        VotingBody::new(players).map_err(DataError::Game)
    }
}

/// Parses a `country,votes[,share]` CSV into a validated table.
///
/// Fatal: malformed CSV, a bad header, duplicate names, non-positive
/// votes. A share column that disagrees with the votes only produces a
/// warning on the returned table.
pub fn parse_weights_csv(text: &str, source: TableSource) -> Result<WeightTable, DataError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(text.as_bytes());

    let headers = reader
        .headers()
        .map_err(|e| DataError::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let header_fields: Vec<String> = headers
        .iter()
        .map(|h| h.trim().to_ascii_lowercase())
        .collect();
    let has_share = match header_fields.as_slice() {
        [c, v] if c == "country" && v == "votes" => false,
        [c, v, s] if c == "country" && v == "votes" && s == "share" => true,
        _ => {
            return Err(DataError::BadHeader {
                got: headers.iter().collect::<Vec<_>>().join(","),
            })
        }
    };

    let mut rows: Vec<WeightRow> = Vec::new();
    let mut lines: Vec<u64> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| DataError::Parse {
            line: e
                .position()
                .map(|p| p.line())
                .unwrap_or(0),
            message: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let name = record.get(0).unwrap_or("").trim().to_string();
        if name.is_empty() {
            return Err(DataError::Parse {
                line,
                message: "empty country name".into(),
            });
        }
        if rows.iter().any(|r| r.name == name) {
            return Err(DataError::DuplicateCountry { line, name });
        }
        let votes_field = record.get(1).unwrap_or("").trim();
        let votes: u64 = match votes_field.parse() {
            Ok(0) => return Err(DataError::NonPositiveVotes { line, name }),
            Ok(v) => v,
            Err(_) if votes_field.starts_with('-') => {
                return Err(DataError::NonPositiveVotes { line, name })
            }
            Err(_) => {
                return Err(DataError::Parse {
                    line,
                    message: format!("votes {votes_field:?} is not an integer"),
                })
            }
        };
        let declared_share_percent = if has_share {
            let field = record.get(2).unwrap_or("").trim();
            if field.is_empty() {
                None
            } else {
                Some(field.parse::<f64>().map_err(|_| DataError::Parse {
                    line,
                    message: format!("share {field:?} is not a number"),
                })?)
            }
        } else {
            None
        };
        rows.push(WeightRow {
            name,
            votes,
            declared_share_percent,
        });
        lines.push(line);
    }

    if rows.is_empty() {
        return Err(DataError::Parse {
            line: 1,
            message: "no data rows".into(),
        });
    }

    // share check needs the total, so it runs after the full parse
    let total: u64 = rows.iter().map(|r| r.votes).sum();
    let mut warnings = Vec::new();
    for (row, line) in rows.iter().zip(&lines) {
        if let Some(declared) = row.declared_share_percent {
            let actual = 100.0 * row.votes as f64 / total as f64;
            if (actual - declared).abs() > SHARE_TOLERANCE_PP + 1e-12 {
                warnings.push(format!(
                    "line {line}: declared share {declared}% of {:?} is off from \
                     the actual {actual:.4}% by more than {SHARE_TOLERANCE_PP} points",
                    row.name
                ));
            }
        }
    }

    Ok(WeightTable {
        rows,
        source,
        warnings,
    })
}

/// The bundled IMF Board of Governors table: 191 countries, raw votes,
/// and the IMF's own rounded shares.
pub fn embedded_imf_dataset() -> WeightTable {
    static TABLE: OnceLock<WeightTable> = OnceLock::new();
    TABLE
        .get_or_init(|| {
            parse_weights_csv(IMF_CSV, TableSource::Embedded)
                .expect("bundled dataset must parse")
        })
        .clone()
}
