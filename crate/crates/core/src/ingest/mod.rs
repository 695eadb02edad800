//! Raw data ingestion: anemometer and settlement-period demand CSVs.
//!
//! Wind files carry hourly speeds in whole knots; demand files carry
//! half-hourly MW readings. Ingestion validates ordering, repairs short
//! outages by linear interpolation (rounded back to whole knots), converts
//! to SI units and aggregates demand into hourly values and an
//! hour-by-season profile scaled to the line capacity. Every step is plain
//! deterministic arithmetic so repeated runs produce byte-identical output.

use std::io::Read;

use chrono::{DateTime, Duration, Timelike, Utc};
use thiserror::Error;

use crate::stackelberg::DemandProfile;
use crate::windmodel::{HourSeasonKey, WindModelError, WindSeries, HOUR_SEASON_BINS};

/// Conversion factor from knots to metres per second.
pub const KNOTS_TO_MS: f64 = 0.5144;

/// Gaps strictly shorter than this many hours are filled by interpolation.
pub const MAX_FILL_GAP_HOURS: i64 = 6;

/// Errors produced while reading and cleaning raw data.
#[derive(Debug, Error)]
pub enum IngestError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: malformed CSV: {message}")]
    MalformedRow { line: u64, message: String },
    #[error("missing required column {0:?}")]
    MissingColumn(String),
    #[error("line {line}: cannot parse timestamp {value:?} (expected ISO-8601 UTC)")]
    BadTimestamp { line: u64, value: String },
    #[error("line {line}: cannot parse value {value:?}")]
    BadValue { line: u64, value: String },
    #[error("line {line}: duplicate timestamp {timestamp}")]
    DuplicateTimestamp {
        line: u64,
        timestamp: DateTime<Utc>,
    },
    #[error("line {line}: timestamp {timestamp} is out of order")]
    OutOfOrderTimestamp {
        line: u64,
        timestamp: DateTime<Utc>,
    },
    #[error("no data rows")]
    EmptyInput,
    #[error("need at least two series to align, got {0}")]
    NeedTwoSeries(usize),
    #[error("aligned series share no timestamps")]
    EmptyIntersection,
    #[error("demand profile bin hour {hour}, season {season} has no data")]
    EmptyProfileBin { hour: u8, season: u8 },
    #[error("line capacity must be positive and finite, got {0}")]
    InvalidLineCapacity(f64),
    #[error("demand peak is not positive; cannot scale profile")]
    ProfileNotPositive,
    #[error(transparent)]
    Wind(#[from] WindModelError),
}

/// One row of a raw wind file; a missing speed marks an instrument outage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawWindRecord {
    pub timestamp: DateTime<Utc>,
    pub speed_knots: Option<f64>,
}

/// One row of a raw half-hourly demand file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawDemandRecord {
    pub timestamp: DateTime<Utc>,
    pub demand_mw: f64,
}

/// Hourly sample after cleaning, still in knots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CleanSample {
    pub timestamp: DateTime<Utc>,
    pub speed_knots: f64,
    /// True when the value was interpolated rather than observed.
    pub filled: bool,
}

/// A maximal run of missing hours.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GapSpan {
    pub start: DateTime<Utc>,
    pub end: DateTime<Utc>,
    pub hours: i64,
}

/// What the gap filler did: counts and spans of interpolated points, plus
/// the outages left open because they were too long (or unbounded).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FillReport {
    pub filled_points: usize,
    pub filled_spans: Vec<GapSpan>,
    pub unfilled_spans: Vec<GapSpan>,
}

/// Gap-filled hourly wind series in knots, with provenance flags.
#[derive(Debug, Clone, PartialEq)]
pub struct CleanedWind {
    pub samples: Vec<CleanSample>,
    pub report: FillReport,
}

impl CleanedWind {
    /// Convert to an SI wind series for the statistical pipeline.
    pub fn to_wind_series(
        &self,
        location_id: impl Into<String>,
        height_m: f64,
    ) -> Result<WindSeries, WindModelError> {
        let samples = self
            .samples
            .iter()
            .map(|s| (s.timestamp, knots_to_ms(s.speed_knots)))
            .collect();
        WindSeries::new(location_id, height_m, samples)
    }

    /// Fraction of timeline hours covered by a sample (observed or filled).
    pub fn coverage(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        let first = self.samples.first().unwrap().timestamp;
        let last = self.samples.last().unwrap().timestamp;
        let span_hours = (last - first).num_hours() + 1;
        self.samples.len() as f64 / span_hours as f64
    }
}

/// Convert knots to metres per second.
pub fn knots_to_ms(knots: f64) -> f64 {
    knots * KNOTS_TO_MS
}

fn parse_utc(value: &str, line: u64) -> Result<DateTime<Utc>, IngestError> {
    DateTime::parse_from_rfc3339(value.trim())
        .map(|t| t.with_timezone(&Utc))
        .map_err(|_| IngestError::BadTimestamp {
            line,
            value: value.to_string(),
        })
}

/// Read a raw wind CSV with header `timestamp,speed_knots`.
///
/// Timestamps must be ISO-8601 UTC, strictly increasing; duplicates and
/// out-of-order rows are rejected with their line numbers. An empty speed
/// field marks a missing observation.
pub fn parse_wind_csv<R: Read>(reader: R) -> Result<Vec<RawWindRecord>, IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| IngestError::MalformedRow {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let ts_col = headers
        .iter()
        .position(|h| h == "timestamp")
        .ok_or_else(|| IngestError::MissingColumn("timestamp".into()))?;
    let speed_col = headers
        .iter()
        .position(|h| h == "speed_knots")
        .ok_or_else(|| IngestError::MissingColumn("speed_knots".into()))?;

    let mut records: Vec<RawWindRecord> = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| {
            let line = e
                .position()
                .map(|p| p.line())
                .unwrap_or(0);
            IngestError::MalformedRow {
                line,
                message: e.to_string(),
            }
        })?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let ts_text = row.get(ts_col).unwrap_or("");
        let timestamp = parse_utc(ts_text, line)?;
        if let Some(prev) = records.last() {
            if timestamp == prev.timestamp {
                return Err(IngestError::DuplicateTimestamp { line, timestamp });
            }
            if timestamp < prev.timestamp {
                return Err(IngestError::OutOfOrderTimestamp { line, timestamp });
            }
        }
        let speed_text = row.get(speed_col).unwrap_or("");
        let speed_knots = if speed_text.is_empty() {
            None
        } else {
            let v: f64 = speed_text.parse().map_err(|_| IngestError::BadValue {
                line,
                value: speed_text.to_string(),
            })?;
            if !v.is_finite() || v < 0.0 {
                return Err(IngestError::BadValue {
                    line,
                    value: speed_text.to_string(),
                });
            }
            Some(v)
        };
        records.push(RawWindRecord {
            timestamp,
            speed_knots,
        });
    }
    if records.is_empty() {
        return Err(IngestError::EmptyInput);
    }
    Ok(records)
}

/// Read a raw demand CSV with header `timestamp,demand_mw` (half-hourly
/// settlement periods, period-beginning timestamps).
pub fn parse_demand_csv<R: Read>(reader: R) -> Result<Vec<RawDemandRecord>, IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| IngestError::MalformedRow {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let ts_col = headers
        .iter()
        .position(|h| h == "timestamp")
        .ok_or_else(|| IngestError::MissingColumn("timestamp".into()))?;
    let mw_col = headers
        .iter()
        .position(|h| h == "demand_mw")
        .ok_or_else(|| IngestError::MissingColumn("demand_mw".into()))?;

    let mut records: Vec<RawDemandRecord> = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            IngestError::MalformedRow {
                line,
                message: e.to_string(),
            }
        })?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let timestamp = parse_utc(row.get(ts_col).unwrap_or(""), line)?;
        if let Some(prev) = records.last() {
            if timestamp == prev.timestamp {
                return Err(IngestError::DuplicateTimestamp { line, timestamp });
            }
            if timestamp < prev.timestamp {
                return Err(IngestError::OutOfOrderTimestamp { line, timestamp });
            }
        }
        let text = row.get(mw_col).unwrap_or("");
        let demand_mw: f64 = text.parse().map_err(|_| IngestError::BadValue {
            line,
            value: text.to_string(),
        })?;
        if !demand_mw.is_finite() || demand_mw < 0.0 {
            return Err(IngestError::BadValue {
                line,
                value: text.to_string(),
            });
        }
        records.push(RawDemandRecord {
            timestamp,
            demand_mw,
        });
    }
    if records.is_empty() {
        return Err(IngestError::EmptyInput);
    }
    Ok(records)
}

/// Repair short outages in an hourly wind record set.
///
/// Missing hours (absent rows or empty speeds) that form a run shorter than
/// [`MAX_FILL_GAP_HOURS`] and are bounded by observations on both sides are
/// filled by linear interpolation between the bounding values, rounded
/// half-away-from-zero to whole knots. Longer or unbounded outages are left
/// out of the cleaned series and reported as open spans.
pub fn fill_gaps(records: &[RawWindRecord]) -> Result<CleanedWind, IngestError> {
    if records.is_empty() {
        return Err(IngestError::EmptyInput);
    }
    // Index observed values on an hourly grid.
    let first = records[0].timestamp;
    let last = records[records.len() - 1].timestamp;
    let total_hours = (last - first).num_hours();
    let mut observed: Vec<Option<f64>> = vec![None; total_hours as usize + 1];
    for rec in records {
        let offset = (rec.timestamp - first).num_hours();
        if first + Duration::hours(offset) != rec.timestamp {
            // Off-hour rows cannot sit on the hourly grid.
            return Err(IngestError::Wind(WindModelError::OffHourTimestamp {
                index: offset as usize,
            }));
        }
        if let Some(v) = rec.speed_knots {
            observed[offset as usize] = Some(v);
        }
    }

    let mut samples = Vec::with_capacity(observed.len());
    let mut report = FillReport::default();
    let mut i = 0usize;
    while i < observed.len() {
        match observed[i] {
            Some(v) => {
                samples.push(CleanSample {
                    timestamp: first + Duration::hours(i as i64),
                    speed_knots: v,
                    filled: false,
                });
                i += 1;
            }
            None => {
                // Find the maximal missing run [i, j).
                let mut j = i;
                while j < observed.len() && observed[j].is_none() {
                    j += 1;
                }
                let run = (j - i) as i64;
                let span = GapSpan {
                    start: first + Duration::hours(i as i64),
                    end: first + Duration::hours(j as i64 - 1),
                    hours: run,
                };
                let bounded = i > 0 && j < observed.len();
                if bounded && run < MAX_FILL_GAP_HOURS {
                    let lo = observed[i - 1].expect("left bound observed");
                    let hi = observed[j].expect("right bound observed");
                    for (step, idx) in (i..j).enumerate() {
                        let frac = (step + 1) as f64 / (run + 1) as f64;
                        let value = (lo + (hi - lo) * frac).round();
                        samples.push(CleanSample {
                            timestamp: first + Duration::hours(idx as i64),
                            speed_knots: value,
                            filled: true,
                        });
                    }
                    report.filled_points += run as usize;
                    report.filled_spans.push(span);
                } else {
                    report.unfilled_spans.push(span);
                }
                i = j;
            }
        }
    }
    Ok(CleanedWind { samples, report })
}

/// Average half-hourly settlement readings into hourly values
/// (period-beginning timestamps).
///
/// An hour normally averages its `:00` and `:30` readings; if only one is
/// present it is used as-is and a warning naming the hour is returned
/// alongside the data.
/// Hourly-averaged demand series plus any warnings raised while averaging.
pub type HourlyDemand = (Vec<(DateTime<Utc>, f64)>, Vec<String>);

pub fn demand_to_hourly(records: &[RawDemandRecord]) -> Result<HourlyDemand, IngestError> {
    if records.is_empty() {
        return Err(IngestError::EmptyInput);
    }
    let mut out: Vec<(DateTime<Utc>, f64)> = Vec::new();
    let mut warnings = Vec::new();
    let mut i = 0usize;
    while i < records.len() {
        let rec = records[i];
        let hour_start = rec
            .timestamp
            .with_minute(0)
            .and_then(|t| t.with_second(0))
            .and_then(|t| t.with_nanosecond(0))
            .expect("in-range components");
        let mut values = vec![rec.demand_mw];
        let mut j = i + 1;
        while j < records.len() {
            let other_hour = records[j]
                .timestamp
                .with_minute(0)
                .and_then(|t| t.with_second(0))
                .and_then(|t| t.with_nanosecond(0))
                .expect("in-range components");
            if other_hour == hour_start {
                values.push(records[j].demand_mw);
                j += 1;
            } else {
                break;
            }
        }
        if values.len() == 1 {
            warnings.push(format!(
                "hour {} has a single settlement period; using it unaveraged",
                hour_start.format("%Y-%m-%dT%H:%M:%SZ")
            ));
        }
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        out.push((hour_start, mean));
        i = j;
    }
    Ok((out, warnings))
}

/// Average hourly demand into the 96 hour-by-season cells and scale so the
/// peak cell equals `line_capacity_mw` exactly.
///
/// Every cell must have at least one observation; an empty cell is an error
/// naming the bin.
pub fn build_demand_profile(
    hourly: &[(DateTime<Utc>, f64)],
    line_capacity_mw: f64,
) -> Result<DemandProfile, IngestError> {
    if hourly.is_empty() {
        return Err(IngestError::EmptyInput);
    }
    if !(line_capacity_mw.is_finite() && line_capacity_mw > 0.0) {
        return Err(IngestError::InvalidLineCapacity(line_capacity_mw));
    }
    let mut sums = vec![0.0f64; HOUR_SEASON_BINS];
    let mut counts = vec![0u64; HOUR_SEASON_BINS];
    for (ts, mw) in hourly {
        let key = HourSeasonKey::from_timestamp(*ts);
        sums[key.index()] += mw;
        counts[key.index()] += 1;
    }
    let mut values = vec![0.0f64; HOUR_SEASON_BINS];
    for idx in 0..HOUR_SEASON_BINS {
        if counts[idx] == 0 {
            let key = HourSeasonKey::from_index(idx).expect("index in range");
            return Err(IngestError::EmptyProfileBin {
                hour: key.hour,
                season: key.season,
            });
        }
        values[idx] = sums[idx] / counts[idx] as f64;
    }
    let (peak_idx, peak) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite means"))
        .expect("non-empty");
    let peak = *peak;
    if peak <= 0.0 {
        return Err(IngestError::ProfileNotPositive);
    }
    let factor = line_capacity_mw / peak;
    for v in values.iter_mut() {
        *v *= factor;
    }
    // Guard against an off-by-one-ulp peak after the multiply.
    values[peak_idx] = line_capacity_mw;
    Ok(DemandProfile::new(values).expect("scaled means are finite and non-negative"))
}

/// Intersection of the timestamp sets of two or more series, sorted
/// ascending. Errors if fewer than two series are given or the intersection
/// is empty.
pub fn align(series: &[&[DateTime<Utc>]]) -> Result<Vec<DateTime<Utc>>, IngestError> {
    if series.len() < 2 {
        return Err(IngestError::NeedTwoSeries(series.len()));
    }
    let mut common: std::collections::BTreeSet<DateTime<Utc>> =
        series[0].iter().copied().collect();
    for s in &series[1..] {
        let other: std::collections::BTreeSet<DateTime<Utc>> = s.iter().copied().collect();
        common = common.intersection(&other).copied().collect();
        if common.is_empty() {
            return Err(IngestError::EmptyIntersection);
        }
    }
    Ok(common.into_iter().collect())
}
