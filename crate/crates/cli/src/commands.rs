//! The six subcommands. Each one assembles its inputs through
//! [`crate::pipeline`], writes stamped CSVs into the output directory and
//! commits only once everything succeeded.

use std::io::Write;

use chrono::{DateTime, Utc};
use curtail_core::curtailment::simulate;
use curtail_core::ingest::knots_to_ms;
use curtail_core::stackelberg::{scenario_defaults, scenario_sweep, solve_equilibrium, write_sweep_csv};
use curtail_core::windmodel::{fit_beta, fit_weibull, wind_to_power, HourSeasonKey};

use crate::config::RunConfig;
use crate::error::RunError;
use crate::output::{OutputDir, Stamp};
use crate::pipeline;

fn stamp(config: &RunConfig) -> Stamp {
    Stamp {
        config_hash: config.hash(),
        seed: config.data.seed,
    }
}

fn open(config: &RunConfig) -> Result<(OutputDir, Stamp), RunError> {
    let out = OutputDir::create(config.output.dir.as_ref())?;
    Ok((out, stamp(config)))
}

/// Long-format plot row: which series a point belongs to, its x position
/// (a category label or a number) and its value.
type PlotRow = (String, String, f64);

fn write_plot_csv<W: Write>(mut w: W, rows: &[PlotRow]) -> std::io::Result<()> {
    writeln!(w, "series_label,x,y")?;
    for (series, x, y) in rows {
        writeln!(w, "{series},{x},{y}")?;
    }
    Ok(())
}

fn format_timestamp(t: DateTime<Utc>) -> String {
    t.format("%Y-%m-%dT%H:%M:%SZ").to_string()
}

/// `synth-wind`: draw seeded correlated wind speeds, one CSV per location.
pub fn synth_wind(config: &RunConfig) -> Result<(), RunError> {
    let weibull = config.weibull()?;
    let series = curtail_core::windmodel::synthesize_correlated(
        &weibull,
        config.data.locations,
        config.data.hours,
        config.data.correlation,
        config.data.seed,
    )?;

    let (mut out, stamp) = open(config)?;
    for s in &series {
        let mut w = out.csv(&format!("wind_{}.csv", s.location_id), &stamp)?;
        writeln!(w, "timestamp,speed_ms")?;
        for (t, speed) in s.samples() {
            writeln!(w, "{},{}", format_timestamp(*t), speed)?;
        }
    }
    out.commit();
    println!(
        "wrote {} series of {} hours to {}",
        series.len(),
        config.data.hours,
        config.output.dir
    );
    Ok(())
}

/// `ingest`: gap-fill raw anemometer CSVs into SI series, and average,
/// bin and rescale file demand into an hour-season profile.
pub fn ingest(config: &RunConfig) -> Result<(), RunError> {
    let wind = config.data.source == "files";
    let demand = config.demand.kind == "file";
    if !wind && !demand {
        return Err(RunError::config(
            "nothing to ingest: set data.source = \"files\" and/or demand.kind = \"file\"",
        ));
    }

    let (mut out, stamp) = open(config)?;

    if wind {
        let mut report = out.csv("coverage_report.txt", &stamp)?;
        for (i, path) in config.data.wind_paths.iter().enumerate() {
            let cleaned = pipeline::clean_wind_file(path)?;
            let label = format!("loc{}", i + 1);
            let filled: i64 = cleaned.report.filled_spans.iter().map(|g| g.hours).sum();
            let unfilled: i64 = cleaned.report.unfilled_spans.iter().map(|g| g.hours).sum();

            let mut w = out.csv(&format!("cleaned_{label}.csv"), &stamp)?;
            writeln!(w, "timestamp,speed_ms,filled")?;
            for s in &cleaned.samples {
                writeln!(
                    w,
                    "{},{},{}",
                    format_timestamp(s.timestamp),
                    knots_to_ms(s.speed_knots),
                    s.filled
                )?;
            }

            let summary = format!(
                "{label}: {} hourly samples, {} gap hours interpolated, {} left unfilled, coverage {:.1}%",
                cleaned.samples.len(),
                filled,
                unfilled,
                100.0 * cleaned.coverage()
            );
            writeln!(report, "{summary} [{path}]")?;
            for g in &cleaned.report.filled_spans {
                writeln!(
                    report,
                    "  filled   {} .. {} ({} h)",
                    format_timestamp(g.start),
                    format_timestamp(g.end),
                    g.hours
                )?;
            }
            for g in &cleaned.report.unfilled_spans {
                writeln!(
                    report,
                    "  unfilled {} .. {} ({} h)",
                    format_timestamp(g.start),
                    format_timestamp(g.end),
                    g.hours
                )?;
            }
            println!("{summary}");
        }
    }

    if demand {
        let profile = pipeline::demand_profile(config)?;
        let mut w = out.csv("demand_profile.csv", &stamp)?;
        writeln!(w, "hour,season,demand_mw")?;
        for key in HourSeasonKey::all() {
            writeln!(w, "{},{},{}", key.hour, key.season, profile.value(key))?;
        }
        println!(
            "demand profile written, peak scaled to {} MW",
            config.demand.line_capacity_mw
        );
    }

    out.commit();
    Ok(())
}

/// `fit`: per-location Weibull fit of speeds and Beta fit of normalised
/// power through the configured curve.
pub fn fit(config: &RunConfig) -> Result<(), RunError> {
    let series = pipeline::load_wind(config)?;
    let curve = config.power_curve()?;

    let (mut out, stamp) = open(config)?;
    let mut w = out.csv("fits.csv", &stamp)?;
    writeln!(
        w,
        "location,weibull_c,weibull_k,samples_used,zeros_excluded,beta_alpha,beta_beta"
    )?;
    for s in &series {
        let speeds = s.speeds_vec();
        let weibull = fit_weibull(&speeds)?;
        let powers = wind_to_power(s, &curve);
        let beta = fit_beta(&powers)?;
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            s.location_id,
            weibull.params.scale_c,
            weibull.params.shape_k,
            weibull.used,
            weibull.excluded_zeros,
            beta.alpha,
            beta.beta
        )?;
        println!(
            "{}: Weibull c = {:.3}, k = {:.3} ({} samples); Beta alpha = {:.3}, beta = {:.3}",
            s.location_id, weibull.params.scale_c, weibull.params.shape_k, weibull.used,
            beta.alpha, beta.beta
        );
    }
    out.commit();
    Ok(())
}

/// `simulate`: run the fleet through each configured rule and emit summary
/// metrics plus plot-ready capacity-factor, fairness and event tables.
pub fn simulate_cmd(config: &RunConfig) -> Result<(), RunError> {
    let fleet = config.fleet()?;
    let series = pipeline::load_wind(config)?;
    let outputs = pipeline::normalized_outputs(config, &series, &fleet)?;
    let profile = pipeline::demand_profile(config)?;
    let timestamps: Vec<DateTime<Utc>> = series[0].timestamps().collect();
    let demand = profile.series_for(&timestamps);

    let (mut out, stamp) = open(config)?;
    let mut cf_rows: Vec<PlotRow> = Vec::new();
    let mut fairness_rows: Vec<PlotRow> = Vec::new();
    let mut event_rows: Vec<PlotRow> = Vec::new();

    for rule in config.rules()? {
        let result = simulate(&fleet, &outputs, &demand, rule)?;
        let mut w = out.csv(&format!("metrics_{}.csv", rule.label()), &stamp)?;
        result.write_metrics_csv(&mut w)?;

        for (g, id) in result.generator_ids.iter().enumerate() {
            cf_rows.push((id.clone(), rule.label().into(), result.capacity_factor[g]));
            event_rows.push((id.clone(), rule.label().into(), result.event_count[g] as f64));
        }
        fairness_rows.push((
            "variance".into(),
            rule.label().into(),
            result.fairness_variance,
        ));
        println!(
            "{}: fleet capacity factors {:?}, variance {:.6}",
            rule.label(),
            result
                .capacity_factor
                .iter()
                .map(|c| (c * 1000.0).round() / 1000.0)
                .collect::<Vec<_>>(),
            result.fairness_variance
        );
    }

    write_plot_csv(out.csv("plot_cf.csv", &stamp)?, &cf_rows)?;
    write_plot_csv(out.csv("plot_fairness.csv", &stamp)?, &fairness_rows)?;
    write_plot_csv(out.csv("plot_events.csv", &stamp)?, &event_rows)?;
    out.commit();
    Ok(())
}

/// `equilibrium`: solve the capacity game once for the configured costs.
pub fn equilibrium(config: &RunConfig) -> Result<(), RunError> {
    let costs = config.cost_params()?;
    let grid = config.strategy_grid()?;
    let series = pipeline::load_wind(config)?;
    let profile = pipeline::demand_profile(config)?;
    let ctx = pipeline::energy_context(config, &series, &profile)?;

    let solution = solve_equilibrium(&costs, &grid, &ctx)?;

    let (mut out, stamp) = open(config)?;
    let mut w = out.csv("equilibrium.csv", &stamp)?;
    writeln!(
        w,
        "p_n1_star,p_n2_star,profit1,profit2,e_g1,e_g2,e_c1,e_c2,viable1,viable2"
    )?;
    let e = &solution.energies;
    writeln!(
        w,
        "{},{},{},{},{},{},{},{},{},{}",
        solution.p_n1_star,
        solution.p_n2_star,
        solution.profit1,
        solution.profit2,
        e.e_g1,
        e.e_g2,
        e.e_c1,
        e.e_c2,
        solution.viable1,
        solution.viable2
    )?;
    let mut w = out.csv("response_curve.csv", &stamp)?;
    solution.write_response_csv(&mut w)?;
    out.commit();

    println!(
        "equilibrium: leader {} MW (profit {:.0}), follower {} MW (profit {:.0})",
        solution.p_n1_star, solution.profit1, solution.p_n2_star, solution.profit2
    );
    Ok(())
}

/// `sweep`: run the configured scenario and emit the sweep table plus the
/// three plot families (capacities, profits, energies).
pub fn sweep(config: &RunConfig) -> Result<(), RunError> {
    let scenario = config.sweep.scenario;
    let costs = config.cost_params()?;
    let (base, param) = scenario_defaults(scenario, costs.energy_price, costs.line_cost)?;
    let values = config.sweep_values(param);
    let grid = config.strategy_grid()?;
    let series = pipeline::load_wind(config)?;
    let profile = pipeline::demand_profile(config)?;
    let ctx = pipeline::energy_context(config, &series, &profile)?;

    let rows = scenario_sweep(scenario, &base, param, &values, &grid, &ctx)?;

    let (mut out, stamp) = open(config)?;
    let mut w = out.csv("sweep.csv", &stamp)?;
    write_sweep_csv(&rows, &mut w)?;

    let mut capacity: Vec<PlotRow> = Vec::new();
    let mut profit: Vec<PlotRow> = Vec::new();
    let mut energy: Vec<PlotRow> = Vec::new();
    for r in &rows {
        let x = format!("{}", r.value);
        capacity.push(("p_n1_star".into(), x.clone(), r.p_n1_star));
        capacity.push(("p_n2_star".into(), x.clone(), r.p_n2_star));
        capacity.push(("total".into(), x.clone(), r.p_n1_star + r.p_n2_star));
        profit.push(("profit1".into(), x.clone(), r.profit1));
        profit.push(("profit2".into(), x.clone(), r.profit2));
        energy.push(("e_g1".into(), x.clone(), r.energies.e_g1));
        energy.push(("e_g2".into(), x.clone(), r.energies.e_g2));
        energy.push(("e_c1".into(), x.clone(), r.energies.e_c1));
        energy.push(("e_c2".into(), x, r.energies.e_c2));
    }
    write_plot_csv(out.csv("plot_sweep_capacity.csv", &stamp)?, &capacity)?;
    write_plot_csv(out.csv("plot_sweep_profit.csv", &stamp)?, &profit)?;
    write_plot_csv(out.csv("plot_sweep_energy.csv", &stamp)?, &energy)?;
    out.commit();

    println!(
        "scenario {} swept {} over {} values",
        scenario,
        param.label(),
        rows.len()
    );
    Ok(())
}
