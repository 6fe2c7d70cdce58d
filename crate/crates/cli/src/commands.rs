use std::path::Path;

use serde_json::{json, Value};

use sawphoton::design::{accuracy_budget, min_divider, sweep, AccuracyTarget, McCheck, SweepBase, SweepGrid, SWEEP_PARAMETERS};
use sawphoton::mc::{run_experiment, RngSpec};
use sawphoton::physics::{
    emission_completeness, emitted_count_pmf, field_state_diagonal, max_injection_frequency, min_iregion_length,
    quantized_current, screening_hole_density, InjectionSpec, SawParams,
};
use sawphoton::stats::analyze;

use crate::config::{Models, RunConfig};
use crate::output::{fmt_f64, io_error, write_json, CsvWriter};
use crate::CliError;

fn runtime(e: sawphoton::Error) -> CliError {
    CliError::Runtime(e.to_string())
}

/// SI value with a rendering in the units customary for the device.
fn quantity(si: f64, unit: &str, scale: f64, display_unit: &str) -> Value {
    json!({
        "si": si,
        "unit": unit,
        "display": si * scale,
        "display_unit": display_unit,
    })
}

/// Closed-form device figures for the configured operating point.
pub fn analytic(m: &Models) -> Result<Value, CliError> {
    let spec = m.pump.spec();
    let n = spec.electrons_per_packet();
    let f = spec.saw_frequency();
    let gamma = m.recombination.total_rate();
    let eps = m.target.epsilon();
    let period = spec.injection_period();
    let f_max = max_injection_frequency(gamma, eps).map_err(runtime)?;
    let density = screening_hole_density(m.saw.amplitude(), m.saw.wavevector(), m.junction.dielectric_constant())
        .map_err(runtime)?;
    let length = min_iregion_length(m.junction.band_drop(), &m.saw, m.iregion_safety).map_err(runtime)?;
    let emitted = emitted_count_pmf(n, gamma, period).map_err(runtime)?;
    let diagonal = field_state_diagonal(n, gamma, period).map_err(runtime)?;
    Ok(json!({
        "electrons_per_packet": n,
        "divider": spec.divider(),
        "epsilon": eps,
        "quantized_current": quantity(quantized_current(n, f), "A", 1e12, "pA"),
        "mean_injection_current": quantity(spec.mean_current(), "A", 1e12, "pA"),
        "saw_frequency": quantity(f, "Hz", 1e-9, "GHz"),
        "wavelength": quantity(m.saw.wavelength(), "m", 1e6, "um"),
        "wavevector": quantity(m.saw.wavevector(), "1/m", 1e-6, "1/um"),
        "peak_saw_field": quantity(m.saw.peak_field(), "V/m", 1e-2, "V/cm"),
        "screening_hole_density": quantity(density, "1/m^2", 1e-4, "1/cm^2"),
        "screening_margin": m.junction.screening_margin(&m.saw).map_err(runtime)?,
        "min_iregion_length": quantity(length, "m", 1e6, "um"),
        "iregion_adiabatic": m.junction.iregion_length() >= length,
        "max_injection_frequency": quantity(f_max, "Hz", 1e-9, "GHz"),
        "max_injection_current": quantity(quantized_current(n, f_max), "A", 1e12, "pA"),
        "min_divider": min_divider(f, gamma, eps).map_err(runtime)?,
        "injection_period": quantity(period, "s", 1e12, "ps"),
        "recombination_time": quantity(1.0 / gamma, "s", 1e12, "ps"),
        "emission_completeness": emission_completeness(gamma, period),
        "emitted_count_pmf": emitted.probabilities(),
        "field_state_diagonal": diagonal.probabilities(),
    }))
}

/// Echo of the configuration with the effective seed. The shard count is
/// left out: it does not change any output.
fn config_echo(config: &RunConfig, seed: u64) -> Value {
    let mut c = config.clone();
    c.run.seed = seed;
    let mut v = serde_json::to_value(&c).expect("config serializes");
    if let Some(run) = v.get_mut("run").and_then(Value::as_object_mut) {
        run.remove("shards");
    }
    v
}

/// Runs the configured experiment and writes the event streams, histograms
/// and a summary into `out`.
pub fn simulate(config: &RunConfig, m: &Models, out: &Path) -> Result<Value, CliError> {
    std::fs::create_dir_all(out).map_err(io_error(out))?;
    let exp = &m.experiment;
    let run = run_experiment(exp, &RngSpec::from_seed(m.seed), m.shards).map_err(runtime)?;
    let period = exp.injection_period();
    let times: Vec<f64> = run.detections.times().collect();
    let a = analyze(&times, period, exp.n_cycles, &m.analysis).map_err(runtime)?;

    let mut w = CsvWriter::create(&out.join("emissions.csv"), &["cycle_index", "timestamp_s"])?;
    for e in run.emissions.events() {
        w.row([e.cycle.to_string(), fmt_f64(e.time)])?;
    }
    w.finish()?;
    let mut w = CsvWriter::create(&out.join("detections.csv"), &["timestamp_s", "is_dark"])?;
    for d in run.detections.events() {
        w.row([fmt_f64(d.time), u8::from(d.dark).to_string()])?;
    }
    w.finish()?;
    let mut w = CsvWriter::create(&out.join("counts.csv"), &["window_index", "count"])?;
    for (i, c) in a.counts.counts_per_window.iter().enumerate() {
        w.row([i.to_string(), c.to_string()])?;
    }
    w.finish()?;
    let mut w = CsvWriter::create(&out.join("g2.csv"), &["tau_s", "pair_count"])?;
    for (tau, c) in a.g2.bin_starts().zip(&a.g2.bins) {
        w.row([fmt_f64(tau), c.to_string()])?;
    }
    w.finish()?;
    let mut w = CsvWriter::create(&out.join("phase.csv"), &["phase_bin_start_s", "count"])?;
    if let Some(phase) = &a.phase {
        for (start, c) in phase.bin_starts().zip(&phase.bins) {
            w.row([fmt_f64(start), c.to_string()])?;
        }
    }
    w.finish()?;

    let summary = json!({
        "seed": m.seed,
        "n_cycles": exp.n_cycles,
        "injection_period_s": period,
        "duration_s": run.duration,
        "totals": run.counts,
        "detected_rate_per_s": run.counts.detections as f64 / exp.injection_span(),
        "nominal_photon_rate_per_s": exp.nominal_photon_rate(),
        "window_length_s": a.counts.window_length,
        "n_windows": a.counts.n_windows(),
        "mandel_q": a.mandel_q,
        "fano_factor": a.fano_factor,
        "g2_bin_width_s": a.g2.bin_width,
        "g2_total_pairs": a.g2.total_pairs(),
        "zero_peak_area": a.peaks.map(|p| p.zero_peak_area),
        "mean_side_peak_area": a.peaks.map(|p| p.mean_side_peak_area),
        "g2_peak_ratio": a.peaks.map(|p| p.ratio),
        "phase_visibility": a.phase.as_ref().map(|p| p.visibility),
        "config": config_echo(config, m.seed),
    });
    write_json(&out.join("summary.json"), &summary)?;
    Ok(summary)
}

/// Accuracy budget at the configured operating point, plus the divider
/// needed to meet the target.
pub fn design(m: &Models, epsilon: Option<f64>) -> Result<Value, CliError> {
    let target = match epsilon {
        Some(e) => AccuracyTarget::new(e).map_err(|e| CliError::Config(e.to_string()))?,
        None => m.target,
    };
    let spec = m.pump.spec();
    let gamma = m.recombination.total_rate();
    let budget = accuracy_budget(&m.pump, &m.recombination, &target).map_err(runtime)?;
    let f_max = max_injection_frequency(gamma, target.epsilon()).map_err(runtime)?;
    Ok(json!({
        "budget": budget,
        "pass": budget.pass(),
        "min_divider": min_divider(spec.saw_frequency(), gamma, target.epsilon()).map_err(runtime)?,
        "max_injection_frequency": quantity(f_max, "Hz", 1e-9, "GHz"),
        "max_injection_current": quantity(quantized_current(spec.electrons_per_packet(), f_max), "A", 1e12, "pA"),
    }))
}

pub fn parse_grid(text: &str) -> Result<SweepGrid, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| CliError::Config(format!("grid at {}: {}", e.path(), e.inner())))
}

pub const SWEEP_METRICS: [&str; 9] = [
    "p_zero_photon",
    "p_multi_photon",
    "zero_photon_pass",
    "multi_photon_pass",
    "late_emission_pass",
    "min_divider",
    "predicted_rate",
    "mc_mandel_q",
    "mc_g2_ratio",
];

/// Evaluates the grid and writes `sweep.csv` into `out`. `mc_cycles`
/// enables a Monte Carlo check with that many cycles per point.
pub fn sweep_to_csv(
    m: &Models,
    grid: &SweepGrid,
    epsilon: Option<f64>,
    cap: u64,
    mc_cycles: Option<u64>,
    out: &Path,
) -> Result<usize, CliError> {
    let target = match epsilon {
        Some(e) => AccuracyTarget::new(e).map_err(|e| CliError::Config(e.to_string()))?,
        None => m.target,
    };
    let base = SweepBase {
        pump: m.pump,
        recombination: m.recombination,
        detector: m.detector,
        target,
    };
    let check = mc_cycles.map(|n_cycles| McCheck {
        n_cycles,
        seed: m.seed,
        shards: m.shards,
        analysis: m.analysis,
    });
    let rows = sweep(&base, grid, cap, check.as_ref()).map_err(|e| match e {
        sawphoton::Error::GridTooLarge { .. } | sawphoton::Error::EmptyGrid => CliError::Config(e.to_string()),
        other => runtime(other),
    })?;
    std::fs::create_dir_all(out).map_err(io_error(out))?;
    let header: Vec<&str> = SWEEP_PARAMETERS.iter().chain(&SWEEP_METRICS).copied().collect();
    let mut w = CsvWriter::create(&out.join("sweep.csv"), &header)?;
    let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
    for r in &rows {
        let p = &r.point;
        let mut fields = vec![
            fmt_f64(p.saw_frequency),
            fmt_f64(p.radiative_rate),
            fmt_f64(p.nonradiative_rate),
            p.divider.to_string(),
            p.electrons_per_packet.to_string(),
            fmt_f64(p.p_miss),
            fmt_f64(p.p_extra),
            fmt_f64(p.efficiency),
        ];
        fields.extend([
            fmt_f64(r.p_zero_photon),
            fmt_f64(r.p_multi_photon),
            u8::from(r.zero_photon_pass).to_string(),
            u8::from(r.multi_photon_pass).to_string(),
            u8::from(r.late_emission_pass).to_string(),
            r.min_divider.to_string(),
            fmt_f64(r.predicted_rate),
            opt(r.mc.and_then(|c| c.mandel_q)),
            opt(r.mc.and_then(|c| c.g2_ratio)),
        ]);
        w.row(fields)?;
    }
    w.finish()?;
    Ok(rows.len())
}

/// One named check of a published device figure.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub expected: String,
    pub pass: bool,
}

/// Device figures that follow in closed form from the reference operating
/// point: `γ = 1e10 s⁻¹`, `ε = 1e-6`, 3 GHz SAW of 30 mV amplitude and 1 µm
/// wavelength on GaAs, 1.5 V band drop.
pub fn verify() -> Result<Vec<Check>, CliError> {
    let f_max = max_injection_frequency(1e10, 1e-6).map_err(runtime)?;
    let current = quantized_current(1, f_max);
    let saw = SawParams::new(3e9, 3000.0, 0.03).map_err(runtime)?;
    let density = screening_hole_density(0.03, saw.wavevector(), 12.0).map_err(runtime)?;
    let divider = min_divider(3e9, 1e10, 1e-6).map_err(runtime)?;
    let length = min_iregion_length(1.5, &saw, 0.25).map_err(runtime)?;
    let spec = InjectionSpec::new(1, divider, 3e9).map_err(runtime)?;
    let late = (-1e10_f64 * spec.injection_period()).exp();
    let within = |x: f64, lo: f64, hi: f64| (lo..=hi).contains(&x);
    Ok(vec![
        Check {
            name: "max_injection_frequency_ghz",
            value: f_max * 1e-9,
            expected: "0.72 +/- 0.01".into(),
            pass: within(f_max * 1e-9, 0.71, 0.73),
        },
        Check {
            name: "max_injection_current_pa",
            value: current * 1e12,
            expected: "115 +/- 2".into(),
            pass: within(current * 1e12, 113.0, 117.0),
        },
        Check {
            name: "screening_hole_density_cm2",
            value: density * 1e-4,
            expected: "[1e10, 2e10]".into(),
            pass: within(density * 1e-4, 1e10, 2e10),
        },
        Check {
            name: "min_divider",
            value: divider as f64,
            expected: "5 (< 10)".into(),
            pass: divider == 5,
        },
        Check {
            name: "min_iregion_length_um",
            value: length * 1e6,
            expected: "[10, 100]".into(),
            pass: within(length * 1e6, 10.0, 100.0),
        },
        Check {
            name: "late_emission_at_min_divider",
            value: late,
            expected: "<= 1e-6".into(),
            pass: late <= 1e-6,
        },
    ])
}
