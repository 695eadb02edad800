//! Principles-of-access curtailment rules and timeline simulation.
//!
//! A [`Fleet`] of generators shares a constrained connection; whenever the
//! fleet's combined output exceeds the allowed demand, the excess must be
//! curtailed. The four rules differ in who bears that excess:
//!
//! * last-in first-out — newest connections are curtailed first;
//! * rotation — a pointer walks the fleet so generators take turns;
//! * proportional — everyone sheds in proportion to current output;
//! * quota round-robin — turns are metered in MW against per-cycle quotas
//!   equal to each generator's rating, equalising curtailed energy shares.
//!
//! [`simulate`] runs a rule over a whole timeline and reports per-generator
//! capacity factors, curtailment event counts and the fairness (variance of
//! capacity factors) of the outcome.

mod rules;

pub use rules::{
    allocate_frr, allocate_lifo, allocate_pro_rata, allocate_rota, required_curtailment,
    RotationState,
};

use std::io::Write;

use chrono::{DateTime, Utc};
use thiserror::Error;

use crate::EPSILON_MW;

/// Errors produced by fleet construction, allocation and simulation.
#[derive(Debug, Error)]
pub enum CurtailmentError {
    #[error("fleet has no generators")]
    EmptyFleet,
    #[error("duplicate generator id {0:?}")]
    DuplicateId(String),
    #[error("duplicate connection order {0}")]
    DuplicateConnectionOrder(u32),
    #[error("generator {id:?} has invalid rating {rated_mw}")]
    InvalidRating { id: String, rated_mw: f64 },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("output {value} at generator index {index} is invalid")]
    InvalidOutput { index: usize, value: f64 },
    #[error("output {output_mw} MW at generator index {index} exceeds rating {rated_mw} MW")]
    OutputExceedsRating {
        index: usize,
        output_mw: f64,
        rated_mw: f64,
    },
    #[error("required curtailment {0} is invalid")]
    InvalidRequired(f64),
    #[error("required curtailment {required_mw} MW exceeds available output {available_mw} MW")]
    RequiredExceedsAvailable {
        required_mw: f64,
        available_mw: f64,
    },
    #[error("demand value {value} at interval {index} is invalid")]
    InvalidDemand { index: usize, value: f64 },
    #[error("normalized output {value} at generator {generator}, interval {index} is invalid")]
    InvalidNormalizedOutput {
        generator: usize,
        index: usize,
        value: f64,
    },
    #[error("unknown rule {0:?}")]
    UnknownRule(String),
}

/// One generator behind the constrained connection.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub id: String,
    pub rated_mw: f64,
    /// Grid-connection sequence: 1 connected first. Drives the last-in
    /// first-out ordering and the rotation sequence.
    pub connection_order: u32,
    /// Label of the wind series driving this generator.
    pub wind_source: String,
}

impl GeneratorSpec {
    pub fn new(
        id: impl Into<String>,
        rated_mw: f64,
        connection_order: u32,
        wind_source: impl Into<String>,
    ) -> Result<Self, CurtailmentError> {
        let id = id.into();
        if !(rated_mw.is_finite() && rated_mw > 0.0) {
            return Err(CurtailmentError::InvalidRating { id, rated_mw });
        }
        Ok(Self {
            id,
            rated_mw,
            connection_order,
            wind_source: wind_source.into(),
        })
    }
}

/// Validated, ordered collection of generators.
#[derive(Debug, Clone, PartialEq)]
pub struct Fleet {
    generators: Vec<GeneratorSpec>,
}

impl Fleet {
    pub fn new(generators: Vec<GeneratorSpec>) -> Result<Self, CurtailmentError> {
        if generators.is_empty() {
            return Err(CurtailmentError::EmptyFleet);
        }
        for (i, g) in generators.iter().enumerate() {
            if !(g.rated_mw.is_finite() && g.rated_mw > 0.0) {
                return Err(CurtailmentError::InvalidRating {
                    id: g.id.clone(),
                    rated_mw: g.rated_mw,
                });
            }
            for other in &generators[..i] {
                if other.id == g.id {
                    return Err(CurtailmentError::DuplicateId(g.id.clone()));
                }
                if other.connection_order == g.connection_order {
                    return Err(CurtailmentError::DuplicateConnectionOrder(
                        g.connection_order,
                    ));
                }
            }
        }
        Ok(Self { generators })
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.generators
    }

    pub fn ratings(&self) -> Vec<f64> {
        self.generators.iter().map(|g| g.rated_mw).collect()
    }

    pub fn ids(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.id.clone()).collect()
    }

    /// Generator indices in ascending connection order (rotation sequence).
    pub fn rotation_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.generators.len()).collect();
        idx.sort_by_key(|&i| self.generators[i].connection_order);
        idx
    }

    /// Generator indices in descending connection order (curtailed first
    /// under last-in first-out).
    pub fn lifo_order(&self) -> Vec<usize> {
        let mut idx = self.rotation_order();
        idx.reverse();
        idx
    }
}

/// Principle-of-access rule selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    Lifo,
    Rota,
    ProRata,
    Frr,
}

impl RuleKind {
    pub const ALL: [RuleKind; 4] = [
        RuleKind::Lifo,
        RuleKind::Rota,
        RuleKind::ProRata,
        RuleKind::Frr,
    ];

    /// Stable lower-case label used in CSV output and configuration.
    pub fn label(&self) -> &'static str {
        match self {
            RuleKind::Lifo => "lifo",
            RuleKind::Rota => "rota",
            RuleKind::ProRata => "pro-rata",
            RuleKind::Frr => "frr",
        }
    }

    pub fn parse(s: &str) -> Result<Self, CurtailmentError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lifo" => Ok(RuleKind::Lifo),
            "rota" => Ok(RuleKind::Rota),
            "pro-rata" | "pro_rata" | "prorata" => Ok(RuleKind::ProRata),
            "frr" => Ok(RuleKind::Frr),
            other => Err(CurtailmentError::UnknownRule(other.into())),
        }
    }
}

impl std::fmt::Display for RuleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Per-generator curtailment for a single interval, aligned with the fleet's
/// generator order.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    pub curtailed_mw: Vec<f64>,
    pub required_mw: f64,
}

impl Allocation {
    pub fn total_curtailed(&self) -> f64 {
        self.curtailed_mw.iter().sum()
    }
}

/// Full simulation output: per-interval generation and curtailment plus
/// summary metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct TimelineResult {
    pub rule: RuleKind,
    pub generator_ids: Vec<String>,
    pub rated_mw: Vec<f64>,
    /// Available (pre-curtailment) output per interval and generator, MW.
    pub generated_mw: Vec<Vec<f64>>,
    /// Curtailed output per interval and generator, MW.
    pub curtailed_mw: Vec<Vec<f64>>,
    /// Delivered-energy capacity factor per generator.
    pub capacity_factor: Vec<f64>,
    /// Capacity factor each generator would have had with no curtailment.
    pub capacity_factor_uncurtailed: Vec<f64>,
    /// Population variance of the per-generator capacity factors; lower
    /// means the rule spreads the pain more evenly.
    pub fairness_variance: f64,
    /// Number of intervals in which each generator was curtailed.
    pub event_count: Vec<u64>,
}

impl TimelineResult {
    pub fn intervals(&self) -> usize {
        self.generated_mw.len()
    }

    /// Delivered energy per generator in MWh (hourly intervals).
    pub fn delivered_mwh(&self) -> Vec<f64> {
        let n = self.generator_ids.len();
        let mut out = vec![0.0; n];
        for (gen, cur) in self.generated_mw.iter().zip(&self.curtailed_mw) {
            for g in 0..n {
                out[g] += gen[g] - cur[g];
            }
        }
        out
    }

    /// Curtailed energy per generator in MWh (hourly intervals).
    pub fn curtailed_mwh(&self) -> Vec<f64> {
        let n = self.generator_ids.len();
        let mut out = vec![0.0; n];
        for cur in &self.curtailed_mw {
            for g in 0..n {
                out[g] += cur[g];
            }
        }
        out
    }

    /// Long-format per-interval export:
    /// `timestamp,generator_id,output_mw,curtailed_mw`.
    pub fn write_timeline_csv<W: Write>(
        &self,
        timestamps: &[DateTime<Utc>],
        mut w: W,
    ) -> std::io::Result<()> {
        if timestamps.len() != self.intervals() {
            return Err(std::io::Error::new(
                std::io::ErrorKind::InvalidInput,
                format!(
                    "timestamp count {} does not match interval count {}",
                    timestamps.len(),
                    self.intervals()
                ),
            ));
        }
        writeln!(w, "timestamp,generator_id,output_mw,curtailed_mw")?;
        for (t, (gen, cur)) in timestamps
            .iter()
            .zip(self.generated_mw.iter().zip(&self.curtailed_mw))
        {
            for (g, id) in self.generator_ids.iter().enumerate() {
                writeln!(
                    w,
                    "{},{},{},{}",
                    t.format("%Y-%m-%dT%H:%M:%SZ"),
                    id,
                    gen[g],
                    cur[g]
                )?;
            }
        }
        Ok(())
    }

    /// Summary export: `generator_id,cf,cf_uncurtailed,events`.
    pub fn write_metrics_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "generator_id,cf,cf_uncurtailed,events")?;
        for (g, id) in self.generator_ids.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{}",
                id, self.capacity_factor[g], self.capacity_factor_uncurtailed[g], self.event_count[g]
            )?;
        }
        Ok(())
    }
}

/// Run one rule over a timeline.
///
/// `normalized_outputs[g][t]` is generator `g`'s normalised output in
/// `[0, 1]` (its wind series through its power curve); `demand_mw[t]` is the
/// interval's export limit. Stateful rules start from a fresh
/// [`RotationState`] and only see intervals that actually require
/// curtailment, so their pointers advance once per curtailment event.
pub fn simulate(
    fleet: &Fleet,
    normalized_outputs: &[Vec<f64>],
    demand_mw: &[f64],
    rule: RuleKind,
) -> Result<TimelineResult, CurtailmentError> {
    if normalized_outputs.len() != fleet.len() {
        return Err(CurtailmentError::LengthMismatch {
            left: normalized_outputs.len(),
            right: fleet.len(),
        });
    }
    let intervals = demand_mw.len();
    for (g, series) in normalized_outputs.iter().enumerate() {
        if series.len() != intervals {
            return Err(CurtailmentError::LengthMismatch {
                left: series.len(),
                right: intervals,
            });
        }
        for (t, &x) in series.iter().enumerate() {
            if !x.is_finite() || !(-1e-9..=1.0 + 1e-9).contains(&x) {
                return Err(CurtailmentError::InvalidNormalizedOutput {
                    generator: g,
                    index: t,
                    value: x,
                });
            }
        }
    }
    for (t, &d) in demand_mw.iter().enumerate() {
        if !d.is_finite() || d < 0.0 {
            return Err(CurtailmentError::InvalidDemand { index: t, value: d });
        }
    }

    let n = fleet.len();
    let ratings = fleet.ratings();
    let mut state = RotationState::new(fleet);
    let mut generated = Vec::with_capacity(intervals);
    let mut curtailed = Vec::with_capacity(intervals);
    let mut outputs = vec![0.0; n];

    for t in 0..intervals {
        for g in 0..n {
            outputs[g] = normalized_outputs[g][t].clamp(0.0, 1.0) * ratings[g];
        }
        let required = required_curtailment(&outputs, demand_mw[t]);
        let alloc = if required > EPSILON_MW {
            match rule {
                RuleKind::Lifo => allocate_lifo(fleet, &outputs, required)?,
                RuleKind::Rota => allocate_rota(fleet, &outputs, required, &mut state)?,
                RuleKind::ProRata => allocate_pro_rata(fleet, &outputs, required)?,
                RuleKind::Frr => allocate_frr(fleet, &outputs, required, &mut state)?,
            }
        } else {
            Allocation {
                curtailed_mw: vec![0.0; n],
                required_mw: 0.0,
            }
        };
        generated.push(outputs.clone());
        curtailed.push(alloc.curtailed_mw);
    }

    let hours = intervals as f64;
    let mut capacity_factor = vec![0.0; n];
    let mut capacity_factor_uncurtailed = vec![0.0; n];
    let mut event_count = vec![0u64; n];
    for t in 0..intervals {
        for g in 0..n {
            capacity_factor[g] += generated[t][g] - curtailed[t][g];
            capacity_factor_uncurtailed[g] += generated[t][g];
            if curtailed[t][g] > EPSILON_MW {
                event_count[g] += 1;
            }
        }
    }
    for g in 0..n {
        capacity_factor[g] /= ratings[g] * hours;
        capacity_factor_uncurtailed[g] /= ratings[g] * hours;
    }
    let mean_cf = capacity_factor.iter().sum::<f64>() / n as f64;
    let fairness_variance = capacity_factor
        .iter()
        .map(|cf| (cf - mean_cf) * (cf - mean_cf))
        .sum::<f64>()
        / n as f64;

    Ok(TimelineResult {
        rule,
        generator_ids: fleet.ids(),
        rated_mw: ratings,
        generated_mw: generated,
        curtailed_mw: curtailed,
        capacity_factor,
        capacity_factor_uncurtailed,
        fairness_variance,
        event_count,
    })
}
