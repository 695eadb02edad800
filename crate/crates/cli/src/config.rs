//! Run configuration: a sectioned TOML file, command-line overrides, and
//! resolution of price-like values into absolute currency.
//!
//! Costs can be written either as absolute numbers (`p_t = 19.318`) or as
//! fractions of the energy price (`p_t = "0.26 pG"`), mirroring how sweep
//! ranges are usually quoted. Every output file records a SHA-256 hash of
//! the fully merged configuration so results can be traced back to the
//! exact settings that produced them.

use std::collections::BTreeSet;
use std::path::Path;

use curtail_core::curtailment::{Fleet, GeneratorSpec, RuleKind};
use curtail_core::stackelberg::{CostParams, StrategyGrid, SweepParam, DEFAULT_SWEEP_STEP_FRACTION};
use curtail_core::windmodel::{CurveModel, PowerCurve, WeibullParams};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::RunError;

/// A currency amount, given either directly or as a fraction of `p_G`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PriceValue {
    Absolute(f64),
    Fraction(String),
}

impl PriceValue {
    /// Absolute value, scaling `"<x> pG"` strings by the energy price.
    pub fn resolve(&self, field: &str, p_g: f64) -> Result<f64, RunError> {
        match self {
            PriceValue::Absolute(v) => Ok(*v),
            PriceValue::Fraction(text) => {
                let trimmed = text.trim();
                let lower = trimmed.to_ascii_lowercase();
                let number = lower
                    .strip_suffix("pg")
                    .map(|n| n.trim_end_matches(['*', ' ', '\t']))
                    .ok_or_else(|| {
                        RunError::config(format!(
                            "costs.{field}: expected a number or \"<fraction> pG\", got {text:?}"
                        ))
                    })?;
                let fraction: f64 = number.trim().parse().map_err(|_| {
                    RunError::config(format!(
                        "costs.{field}: cannot parse {number:?} as a fraction of pG"
                    ))
                })?;
                Ok(fraction * p_g)
            }
        }
    }
}

fn default_source() -> String {
    "synthetic".into()
}
fn default_seed() -> u64 {
    42
}
fn default_hours() -> usize {
    8760
}
fn default_locations() -> usize {
    2
}
fn default_correlation() -> f64 {
    1.0
}
fn default_weibull_scale() -> f64 {
    9.0
}
fn default_weibull_shape() -> f64 {
    1.8
}
fn default_anemometer_height() -> f64 {
    10.0
}
fn default_roughness() -> f64 {
    0.03
}
fn default_bins() -> usize {
    24
}
fn default_aggregation() -> String {
    "binned".into()
}

/// Where wind observations come from and how they are aggregated.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DataSection {
    /// `"synthetic"` (seeded draws) or `"files"` (raw anemometer CSVs).
    pub source: String,
    pub seed: u64,
    /// Series length for synthetic data.
    pub hours: usize,
    /// Number of synthetic locations (`loc1`, `loc2`, ...).
    pub locations: usize,
    /// Cross-site correlation of synthetic locations against `loc1`.
    pub correlation: f64,
    pub weibull_scale: f64,
    pub weibull_shape: f64,
    /// One CSV per location when `source = "files"`; locations are named
    /// `loc1`, `loc2`, ... in listed order.
    pub wind_paths: Vec<String>,
    /// Measurement height of file data, metres.
    pub anemometer_height_m: f64,
    /// When set, file data is shear-extrapolated from the anemometer
    /// height to this hub height.
    pub hub_height_m: Option<f64>,
    /// Surface roughness length for the shear law, metres.
    pub roughness_m: f64,
    /// Per-axis joint-histogram resolution inside each hour-season cell.
    pub bins: usize,
    /// `"binned"` (hour-season histogram expectation) or `"replay"`
    /// (interval-by-interval empirical energies).
    pub aggregation: String,
}

impl Default for DataSection {
    fn default() -> Self {
        Self {
            source: default_source(),
            seed: default_seed(),
            hours: default_hours(),
            locations: default_locations(),
            correlation: default_correlation(),
            weibull_scale: default_weibull_scale(),
            weibull_shape: default_weibull_shape(),
            wind_paths: Vec::new(),
            anemometer_height_m: default_anemometer_height(),
            hub_height_m: None,
            roughness_m: default_roughness(),
            bins: default_bins(),
            aggregation: default_aggregation(),
        }
    }
}

fn default_demand_kind() -> String {
    "diurnal".into()
}
fn default_constant_mw() -> f64 {
    6.0
}
fn default_line_capacity() -> f64 {
    150.0
}

/// The export limit the fleet delivers against.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DemandSection {
    /// `"constant"`, `"diurnal"` (synthetic hour-season profile) or
    /// `"file"` (half-hourly CSV averaged and binned).
    pub kind: String,
    pub constant_mw: f64,
    /// Demand CSV when `kind = "file"`.
    pub path: String,
    /// Export line rating; the diurnal profile peaks here and file demand
    /// is rescaled so its peak matches it.
    pub line_capacity_mw: f64,
}

impl Default for DemandSection {
    fn default() -> Self {
        Self {
            kind: default_demand_kind(),
            constant_mw: default_constant_mw(),
            path: String::new(),
            line_capacity_mw: default_line_capacity(),
        }
    }
}

fn default_turbine_kind() -> String {
    "ramp".into()
}
fn default_cut_in() -> f64 {
    3.0
}
fn default_rated_speed() -> f64 {
    13.0
}
fn default_cut_out() -> f64 {
    28.0
}
fn default_steepness() -> f64 {
    0.3921
}
fn default_midpoint() -> f64 {
    16.4287
}

/// Power-curve shape shared by every generator.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TurbineSection {
    /// `"ramp"` (generic cubic ramp) or `"sigmoid"` (logistic fit).
    pub kind: String,
    pub cut_in: f64,
    pub rated_speed: f64,
    pub cut_out: f64,
    /// Logistic slope, used only by `"sigmoid"`.
    pub steepness: f64,
    /// Logistic midpoint speed, used only by `"sigmoid"`.
    pub midpoint: f64,
}

impl Default for TurbineSection {
    fn default() -> Self {
        Self {
            kind: default_turbine_kind(),
            cut_in: default_cut_in(),
            rated_speed: default_rated_speed(),
            cut_out: default_cut_out(),
            steepness: default_steepness(),
            midpoint: default_midpoint(),
        }
    }
}

/// One generator: identity, rating, connection order and wind source.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorRow {
    pub id: String,
    pub rated_mw: f64,
    pub connection_order: u32,
    /// Location id (`loc1`, ...) whose wind drives this generator.
    pub source: String,
}

fn default_rule() -> String {
    "lifo".into()
}

fn default_generators() -> Vec<GeneratorRow> {
    [(1u32, 7.0), (2, 2.0), (3, 3.0)]
        .iter()
        .map(|&(order, mw)| GeneratorRow {
            id: format!("g{order}"),
            rated_mw: mw,
            connection_order: order,
            source: "loc1".into(),
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FleetSection {
    /// `"lifo"`, `"rota"`, `"pro-rata"`, `"frr"`, or `"all"`.
    pub rule: String,
    pub generators: Vec<GeneratorRow>,
}

impl Default for FleetSection {
    fn default() -> Self {
        Self {
            rule: default_rule(),
            generators: default_generators(),
        }
    }
}

fn default_grid_max() -> f64 {
    415.0
}
fn default_grid_step() -> f64 {
    0.5
}

/// Capacity strategy grid searched by the game solver.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub max_mw: f64,
    pub step_mw: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            max_mw: default_grid_max(),
            step_mw: default_grid_step(),
        }
    }
}

fn default_energy_price() -> f64 {
    74.3
}
fn default_fee() -> PriceValue {
    PriceValue::Fraction("0.26 pG".into())
}
fn default_leader_cost() -> PriceValue {
    PriceValue::Fraction("0.26 pG".into())
}
fn default_follower_cost() -> PriceValue {
    PriceValue::Fraction("0.20 pG".into())
}
fn default_line_cost() -> PriceValue {
    PriceValue::Absolute(230e6)
}

/// Prices and costs for the capacity game.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CostsSection {
    /// Energy selling price `p_G`, currency per MWh.
    pub p_g: f64,
    /// Transmission fee charged per follower MWh delivered.
    pub p_t: PriceValue,
    /// Leader (line investor) generation cost per MWh.
    pub c_g1: PriceValue,
    /// Follower (local generators) generation cost per MWh.
    pub c_g2: PriceValue,
    /// Lump-sum line construction cost.
    pub c_t: PriceValue,
}

impl Default for CostsSection {
    fn default() -> Self {
        Self {
            p_g: default_energy_price(),
            p_t: default_fee(),
            c_g1: default_leader_cost(),
            c_g2: default_follower_cost(),
            c_t: default_line_cost(),
        }
    }
}

fn default_scenario() -> u8 {
    3
}
fn default_step_fraction() -> f64 {
    DEFAULT_SWEEP_STEP_FRACTION
}

/// Scenario sweep selection and optional range override.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    /// 1 varies the follower cost, 2 the leader cost, 3 the fee.
    pub scenario: u8,
    /// Sweep start as a fraction of `p_G`; scenario default when omitted.
    pub from_fraction: Option<f64>,
    /// Sweep end as a fraction of `p_G`; scenario default when omitted.
    pub to_fraction: Option<f64>,
    /// Sweep step as a fraction of `p_G`.
    pub step_fraction: f64,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            scenario: default_scenario(),
            from_fraction: None,
            to_fraction: None,
            step_fraction: default_step_fraction(),
        }
    }
}

fn default_out_dir() -> String {
    "out".into()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: default_out_dir(),
        }
    }
}

/// Full run configuration; every field has a default so a minimal file (or
/// none at all, via overrides) is enough to run.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub data: DataSection,
    pub demand: DemandSection,
    pub turbine: TurbineSection,
    pub fleet: FleetSection,
    pub grid: GridSection,
    pub costs: CostsSection,
    pub sweep: SweepSection,
    pub output: OutputSection,
}

impl RunConfig {
    /// Read `path`, apply `--set section.key=value` overrides, then the
    /// `--seed` / `--out` flags. `path` may be absent only if
    /// `allow_missing` (the built-in defaults then apply).
    pub fn load(
        path: &Path,
        sets: &[String],
        seed: Option<u64>,
        out: Option<&Path>,
        allow_missing: bool,
    ) -> Result<Self, RunError> {
        let mut table: toml::Table = if path.exists() {
            let text = std::fs::read_to_string(path).map_err(|e| {
                RunError::config(format!("cannot read {}: {e}", path.display()))
            })?;
            text.parse().map_err(|e| {
                RunError::config(format!("cannot parse {}: {e}", path.display()))
            })?
        } else if allow_missing {
            toml::Table::new()
        } else {
            return Err(RunError::config(format!(
                "config file {} does not exist",
                path.display()
            )));
        };

        for entry in sets {
            apply_override(&mut table, entry)?;
        }

        let mut config: RunConfig = toml::Value::Table(table)
            .try_into()
            .map_err(|e| RunError::config(e.to_string()))?;
        if let Some(seed) = seed {
            config.data.seed = seed;
        }
        if let Some(out) = out {
            config.output.dir = out.display().to_string();
        }
        config.validate()?;
        Ok(config)
    }

    /// Cross-field checks that serde cannot express, plus load-time
    /// existence checks for every referenced path.
    pub fn validate(&self) -> Result<(), RunError> {
        match self.data.source.as_str() {
            "synthetic" => {
                if self.data.locations == 0 {
                    return Err(RunError::config("data.locations must be at least 1"));
                }
                if self.data.hours == 0 {
                    return Err(RunError::config("data.hours must be at least 1"));
                }
                if !(0.0..=1.0).contains(&self.data.correlation) {
                    return Err(RunError::config(format!(
                        "data.correlation must lie in [0, 1], got {}",
                        self.data.correlation
                    )));
                }
            }
            "files" => {
                if self.data.wind_paths.is_empty() {
                    return Err(RunError::config(
                        "data.source = \"files\" needs at least one entry in data.wind_paths",
                    ));
                }
                for p in &self.data.wind_paths {
                    if !Path::new(p).exists() {
                        return Err(RunError::config(format!(
                            "data.wind_paths entry {p:?} does not exist"
                        )));
                    }
                }
            }
            other => {
                return Err(RunError::config(format!(
                    "data.source must be \"synthetic\" or \"files\", got {other:?}"
                )));
            }
        }
        match self.data.aggregation.as_str() {
            "binned" | "replay" => {}
            other => {
                return Err(RunError::config(format!(
                    "data.aggregation must be \"binned\" or \"replay\", got {other:?}"
                )));
            }
        }
        if self.data.bins == 0 {
            return Err(RunError::config("data.bins must be at least 1"));
        }

        match self.demand.kind.as_str() {
            "constant" | "diurnal" => {}
            "file" => {
                if self.demand.path.is_empty() {
                    return Err(RunError::config(
                        "demand.kind = \"file\" needs demand.path",
                    ));
                }
                if !Path::new(&self.demand.path).exists() {
                    return Err(RunError::config(format!(
                        "demand.path {:?} does not exist",
                        self.demand.path
                    )));
                }
            }
            other => {
                return Err(RunError::config(format!(
                    "demand.kind must be \"constant\", \"diurnal\" or \"file\", got {other:?}"
                )));
            }
        }

        match self.turbine.kind.as_str() {
            "ramp" | "sigmoid" => {}
            other => {
                return Err(RunError::config(format!(
                    "turbine.kind must be \"ramp\" or \"sigmoid\", got {other:?}"
                )));
            }
        }

        if self.fleet.rule != "all" {
            RuleKind::parse(&self.fleet.rule)
                .map_err(|e| RunError::config(format!("fleet.rule: {e}")))?;
        }
        if self.fleet.generators.is_empty() {
            return Err(RunError::config("fleet.generators must not be empty"));
        }
        let locations = self.location_ids();
        let known: BTreeSet<&str> = locations.iter().map(String::as_str).collect();
        for g in &self.fleet.generators {
            if !known.contains(g.source.as_str()) {
                return Err(RunError::config(format!(
                    "fleet generator {:?} references unknown source {:?} (have {})",
                    g.id,
                    g.source,
                    locations.join(", ")
                )));
            }
        }

        if !(1..=3).contains(&self.sweep.scenario) {
            return Err(RunError::config(format!(
                "sweep.scenario must be 1, 2 or 3, got {}",
                self.sweep.scenario
            )));
        }
        if !(self.sweep.step_fraction.is_finite() && self.sweep.step_fraction > 0.0) {
            return Err(RunError::config(format!(
                "sweep.step_fraction must be positive, got {}",
                self.sweep.step_fraction
            )));
        }
        Ok(())
    }

    /// Location ids available to generators, in definition order.
    pub fn location_ids(&self) -> Vec<String> {
        let count = match self.data.source.as_str() {
            "files" => self.data.wind_paths.len(),
            _ => self.data.locations,
        };
        (1..=count).map(|i| format!("loc{i}")).collect()
    }

    pub fn weibull(&self) -> Result<WeibullParams, RunError> {
        WeibullParams::new(self.data.weibull_scale, self.data.weibull_shape)
            .map_err(|e| RunError::config(format!("data: {e}")))
    }

    pub fn power_curve(&self) -> Result<PowerCurve, RunError> {
        let t = &self.turbine;
        let model = match t.kind.as_str() {
            "sigmoid" => CurveModel::Sigmoid {
                steepness: t.steepness,
                midpoint: t.midpoint,
            },
            _ => CurveModel::CubicRamp,
        };
        PowerCurve::new(1.0, t.cut_in, t.rated_speed, t.cut_out, model)
            .map_err(|e| RunError::config(format!("turbine: {e}")))
    }

    pub fn fleet(&self) -> Result<Fleet, RunError> {
        let generators = self
            .fleet
            .generators
            .iter()
            .map(|g| GeneratorSpec::new(&g.id, g.rated_mw, g.connection_order, &g.source))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| RunError::config(format!("fleet: {e}")))?;
        Fleet::new(generators).map_err(|e| RunError::config(format!("fleet: {e}")))
    }

    pub fn rules(&self) -> Result<Vec<RuleKind>, RunError> {
        if self.fleet.rule == "all" {
            Ok(RuleKind::ALL.to_vec())
        } else {
            RuleKind::parse(&self.fleet.rule)
                .map(|r| vec![r])
                .map_err(|e| RunError::config(format!("fleet.rule: {e}")))
        }
    }

    pub fn strategy_grid(&self) -> Result<StrategyGrid, RunError> {
        StrategyGrid::new(self.grid.max_mw, self.grid.step_mw)
            .map_err(|e| RunError::config(format!("grid: {e}")))
    }

    /// Absolute cost parameters with every `pG` fraction resolved.
    pub fn cost_params(&self) -> Result<CostParams, RunError> {
        let c = &self.costs;
        CostParams::new(
            c.p_g,
            c.p_t.resolve("p_t", c.p_g)?,
            c.c_g1.resolve("c_g1", c.p_g)?,
            c.c_g2.resolve("c_g2", c.p_g)?,
            c.c_t.resolve("c_t", c.p_g)?,
        )
        .map_err(|e| RunError::config(format!("costs: {e}")))
    }

    /// Sweep parameter and value list for the configured scenario: the
    /// scenario's published range unless the config narrows it.
    pub fn sweep_values(&self, param: SweepParam) -> Vec<f64> {
        let (default_lo, default_hi) = param.fraction_range();
        let lo = self.sweep.from_fraction.unwrap_or(default_lo);
        let hi = self.sweep.to_fraction.unwrap_or(default_hi);
        let step = self.sweep.step_fraction;
        if hi < lo {
            return Vec::new();
        }
        let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| (lo + i as f64 * step) * self.costs.p_g)
            .collect()
    }

    /// SHA-256 of the canonical serialized configuration (after all
    /// overrides, including the effective seed). The output section is
    /// excluded: where results land has no bearing on what they are.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.output = OutputSection::default();
        let text = toml::to_string(&canonical).expect("config always serializes");
        let digest = Sha256::digest(text.as_bytes());
        hex::encode(digest)
    }
}

/// Apply one `section.key=value` override onto the raw TOML table. The
/// value side is parsed as TOML (so numbers and booleans work) and falls
/// back to a plain string.
fn apply_override(table: &mut toml::Table, entry: &str) -> Result<(), RunError> {
    let (path, raw_value) = entry.split_once('=').ok_or_else(|| {
        RunError::config(format!("--set {entry:?}: expected section.key=value"))
    })?;
    let mut segments: Vec<&str> = path.trim().split('.').collect();
    if segments.len() < 2 || segments.iter().any(|s| s.is_empty()) {
        return Err(RunError::config(format!(
            "--set {entry:?}: key must look like section.key"
        )));
    }
    let leaf = segments.pop().unwrap();

    let value: toml::Value = match format!("v = {}", raw_value.trim()).parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").unwrap(),
        Err(_) => toml::Value::String(raw_value.trim().to_string()),
    };

    let mut current = table;
    for segment in segments {
        current = current
            .entry(segment)
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .ok_or_else(|| {
                RunError::config(format!(
                    "--set {entry:?}: {segment} is not a table in the config file"
                ))
            })?;
    }
    current.insert(leaf.to_string(), value);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_pass_validation() {
        let config = RunConfig::default();
        config.validate().unwrap();
        assert_eq!(config.costs.p_g, 74.3);
        assert_eq!(config.demand.line_capacity_mw, 150.0);
        assert_eq!(config.grid.max_mw, 415.0);
        assert_eq!(config.grid.step_mw, 0.5);
        assert_eq!(config.sweep.step_fraction, 0.02);
        let costs = config.cost_params().unwrap();
        assert!((costs.line_cost - 230e6).abs() < 1e-3);
    }

    #[test]
    fn fraction_values_resolve_against_energy_price() {
        let p = PriceValue::Fraction("0.26 pG".into());
        assert!((p.resolve("p_t", 100.0).unwrap() - 26.0).abs() < 1e-12);
        let p = PriceValue::Fraction("0.5pg".into());
        assert!((p.resolve("p_t", 10.0).unwrap() - 5.0).abs() < 1e-12);
        let p = PriceValue::Absolute(19.318);
        assert!((p.resolve("p_t", 74.3).unwrap() - 19.318).abs() < 1e-12);
        assert!(PriceValue::Fraction("banana".into())
            .resolve("p_t", 74.3)
            .is_err());
    }

    #[test]
    fn set_overrides_reach_nested_keys() {
        let mut table = toml::Table::new();
        apply_override(&mut table, "data.seed=7").unwrap();
        apply_override(&mut table, "costs.p_t=0.3 pG").unwrap();
        apply_override(&mut table, "fleet.rule=frr").unwrap();
        let config: RunConfig = toml::Value::Table(table).try_into().unwrap();
        assert_eq!(config.data.seed, 7);
        assert_eq!(config.fleet.rule, "frr");
        let fee = config.costs.p_t.resolve("p_t", 100.0).unwrap();
        assert!((fee - 30.0).abs() < 1e-12);
    }

    #[test]
    fn bad_overrides_are_rejected() {
        let mut table = toml::Table::new();
        assert!(apply_override(&mut table, "no_equals_sign").is_err());
        assert!(apply_override(&mut table, "toplevel=1").is_err());
        assert!(apply_override(&mut table, ".=1").is_err());
    }

    #[test]
    fn unknown_keys_are_config_errors() {
        let table: toml::Table = "[data]\nsped = 3\n".parse().unwrap();
        let result: Result<RunConfig, _> = toml::Value::Table(table).try_into();
        assert!(result.is_err());
    }

    #[test]
    fn hash_tracks_every_field() {
        let base = RunConfig::default();
        let mut changed = RunConfig::default();
        changed.data.seed = 43;
        assert_ne!(base.hash(), changed.hash());
        assert_eq!(base.hash(), RunConfig::default().hash());
    }

    #[test]
    fn sweep_values_cover_range_and_respect_overrides() {
        let config = RunConfig::default();
        let values = config.sweep_values(SweepParam::TransmissionFee);
        assert_eq!(values.len(), 39);
        assert!((values[0] - 0.0).abs() < 1e-9);
        assert!((values[38] - 0.76 * 74.3).abs() < 1e-9);

        let mut narrowed = RunConfig::default();
        narrowed.sweep.from_fraction = Some(0.10);
        narrowed.sweep.to_fraction = Some(0.14);
        let values = narrowed.sweep_values(SweepParam::TransmissionFee);
        assert_eq!(values.len(), 3);

        narrowed.sweep.to_fraction = Some(0.05);
        assert!(narrowed
            .sweep_values(SweepParam::TransmissionFee)
            .is_empty());
    }

    #[test]
    fn validation_rejects_unknown_generator_source() {
        let mut config = RunConfig::default();
        config.fleet.generators[0].source = "loc9".into();
        let err = config.validate().unwrap_err();
        assert_eq!(err.code(), 2);
        assert!(err.to_string().contains("loc9"));
    }
}
