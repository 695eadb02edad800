//! Shared data assembly: turn a configuration into wind series, demand
//! profiles and game contexts, whichever way the data is sourced.

use std::fs::File;
use std::path::Path;

use chrono::{DateTime, Utc};
use curtail_core::curtailment::Fleet;
use curtail_core::ingest::{
    build_demand_profile, demand_to_hourly, fill_gaps, parse_demand_csv, parse_wind_csv,
    CleanedWind,
};
use curtail_core::stackelberg::{BinnedContext, DemandProfile, EnergyContext, ReplayContext};
use curtail_core::windmodel::{
    extrapolate_hub, synthesize_correlated, wind_to_power, WindSeries,
};

use crate::config::RunConfig;
use crate::error::RunError;

/// Parse and gap-fill one raw anemometer CSV.
pub fn clean_wind_file(path: &str) -> Result<CleanedWind, RunError> {
    let file = File::open(path)
        .map_err(|e| RunError::data(format!("cannot open wind file {path:?}: {e}")))?;
    let records = parse_wind_csv(file)
        .map_err(|e| RunError::data(format!("wind file {path:?}: {e}")))?;
    fill_gaps(&records).map_err(|e| RunError::data(format!("wind file {path:?}: {e}")))
}

/// SI wind series for every configured location, hub-extrapolated when a
/// hub height is set. File series must share one hourly timeline.
pub fn load_wind(config: &RunConfig) -> Result<Vec<WindSeries>, RunError> {
    let series = match config.data.source.as_str() {
        "files" => {
            let mut series = Vec::with_capacity(config.data.wind_paths.len());
            for (i, path) in config.data.wind_paths.iter().enumerate() {
                let cleaned = clean_wind_file(path)?;
                let mut s =
                    cleaned.to_wind_series(format!("loc{}", i + 1), config.data.anemometer_height_m)?;
                if let Some(hub) = config.data.hub_height_m {
                    s = extrapolate_hub(
                        &s,
                        config.data.anemometer_height_m,
                        hub,
                        config.data.roughness_m,
                    )?;
                }
                series.push(s);
            }
            series
        }
        _ => {
            let weibull = config.weibull()?;
            synthesize_correlated(
                &weibull,
                config.data.locations,
                config.data.hours,
                config.data.correlation,
                config.data.seed,
            )?
        }
    };

    let reference: Vec<DateTime<Utc>> = series[0].timestamps().collect();
    for s in &series[1..] {
        let timestamps: Vec<DateTime<Utc>> = s.timestamps().collect();
        if timestamps != reference {
            return Err(RunError::data(format!(
                "wind series {:?} does not share the timeline of {:?}; \
                 trim the inputs to a common period first",
                s.location_id, series[0].location_id
            )));
        }
    }
    Ok(series)
}

/// Hour-season export-limit profile per the demand section.
pub fn demand_profile(config: &RunConfig) -> Result<DemandProfile, RunError> {
    match config.demand.kind.as_str() {
        "constant" => DemandProfile::constant(config.demand.constant_mw)
            .map_err(|e| RunError::config(format!("demand: {e}"))),
        "file" => {
            let path = Path::new(&config.demand.path);
            let file = File::open(path).map_err(|e| {
                RunError::data(format!("cannot open demand file {}: {e}", path.display()))
            })?;
            let records = parse_demand_csv(file)
                .map_err(|e| RunError::data(format!("demand file {}: {e}", path.display())))?;
            let (hourly, warnings) = demand_to_hourly(&records)
                .map_err(|e| RunError::data(format!("demand file {}: {e}", path.display())))?;
            for w in &warnings {
                eprintln!("warning: demand: {w}");
            }
            build_demand_profile(&hourly, config.demand.line_capacity_mw)
                .map_err(|e| RunError::data(format!("demand file {}: {e}", path.display())))
        }
        _ => DemandProfile::synthetic_diurnal(config.demand.line_capacity_mw)
            .map_err(|e| RunError::config(format!("demand: {e}"))),
    }
}

/// Normalised output series for each fleet generator, in fleet order.
pub fn normalized_outputs(
    config: &RunConfig,
    series: &[WindSeries],
    fleet: &Fleet,
) -> Result<Vec<Vec<f64>>, RunError> {
    let curve = config.power_curve()?;
    fleet
        .generators()
        .iter()
        .map(|g| {
            let s = series
                .iter()
                .find(|s| s.location_id == g.wind_source)
                .ok_or_else(|| {
                    RunError::config(format!(
                        "generator {:?} references unknown source {:?}",
                        g.id, g.wind_source
                    ))
                })?;
            Ok(wind_to_power(s, &curve))
        })
        .collect()
}

/// Leader/follower energy context: the leader generates at `loc1`, the
/// follower at `loc2` when it exists (falling back to co-located wind).
pub fn energy_context(
    config: &RunConfig,
    series: &[WindSeries],
    profile: &DemandProfile,
) -> Result<EnergyContext, RunError> {
    let curve = config.power_curve()?;
    let leader = &series[0];
    let follower = series.get(1).unwrap_or(leader);
    let x1 = wind_to_power(leader, &curve);
    let x2 = wind_to_power(follower, &curve);
    let timestamps: Vec<DateTime<Utc>> = leader.timestamps().collect();

    match config.data.aggregation.as_str() {
        "replay" => {
            let demand = profile.series_for(&timestamps);
            Ok(EnergyContext::Replay(ReplayContext::new(x1, x2, demand)?))
        }
        _ => Ok(EnergyContext::Binned(BinnedContext::from_series(
            &timestamps,
            &x1,
            &x2,
            profile,
            config.data.bins,
        )?)),
    }
}
