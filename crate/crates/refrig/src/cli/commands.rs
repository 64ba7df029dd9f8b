//! The four front-end commands: report, sweep, figure, validate.
//!
//! Exit codes: 0 ok, 1 usage/config error, 2 out-of-window result, 3
//! validation failure.

use std::path::{Path, PathBuf};

use super::config::{Outputs, RunConfig, Tolerances};
use super::svg;
use super::table::{DerivedQuantities, Metadata, ResultTable};
use crate::fcs::{flux_statistics_closed_form, flux_statistics_fcs, tight_coupling_check};
use crate::liouville::{
    apply_generator, channels_for_bath, dissipator_current, generator, hamiltonian,
    jump_channels, steady_state, Bath,
};
use crate::metrics::{
    compare_qrc_qri, compare_qrcn_qrc, cooling_ability_bound, performance_report, sweep,
    ParamSet, PerformanceReport, SharedBathParams, SweepAxis, SweepParam,
};
use crate::model::{cooling_window, effective_pair_temperature, RefrigeratorSpec, Variant};
use crate::oracle::oracle_flux_statistics;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_OUT_OF_WINDOW: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

/// Parameter set shared by the built-in figure grids.
pub const FIG_OMEGA_H: f64 = 10.0;
pub const FIG_OMEGA_C: f64 = 0.90;
pub const FIG_GAMMA0: f64 = 0.01;
pub const FIG_BETA_H: f64 = 1.00;
pub const FIG_BETA_W: f64 = 0.09;
pub const FIG_BETA_W1: f64 = 0.09;
pub const FIG_BETA_W2: f64 = 1.00;
pub const FIG_OMEGA_PRIME: f64 = 2.0;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
    Compute(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Io(msg) => write!(f, "io error: {msg}"),
            CliError::Compute(msg) => write!(f, "computation error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Where to put files; paths from the config take precedence over --out.
#[derive(Debug, Clone, Default)]
pub struct OutputOptions {
    pub out_dir: Option<PathBuf>,
    pub svg: bool,
}

#[derive(Debug)]
pub struct CommandOutput {
    pub table: ResultTable,
    pub exit_code: i32,
    pub summary: Vec<String>,
    pub files: Vec<PathBuf>,
    /// True when no CSV destination was configured, so the caller should
    /// print the CSV to stdout.
    pub stdout_csv: bool,
}

/// Alphabetically ordered metric columns (axes precede these in tables).
pub const METRIC_COLUMNS: [&str; 14] = [
    "beta_limit",
    "cop",
    "dj_cold",
    "entropy_rate",
    "fano",
    "in_window",
    "j_cold",
    "j_hot",
    "j_work",
    "mean_flux",
    "nsr",
    "tur_f",
    "tur_q",
    "variance_rate",
];

fn metric_value(r: &PerformanceReport, name: &str) -> f64 {
    let opt = |v: Option<f64>| v.unwrap_or(f64::NAN);
    match name {
        "beta_limit" => r.window.beta_limit,
        "cop" => opt(r.cop),
        "dj_cold" => r.dj_cold,
        "entropy_rate" => r.entropy_rate,
        "fano" => opt(r.fano),
        "in_window" => {
            if r.in_window {
                1.0
            } else {
                0.0
            }
        }
        "j_cold" => r.j_cold,
        "j_hot" => r.j_hot,
        "j_work" => r.j_work,
        "mean_flux" => r.mean_flux,
        "nsr" => opt(r.nsr),
        "tur_f" => r.tur_f,
        "tur_q" => opt(r.tur_q),
        "variance_rate" => r.variance_rate,
        _ => f64::NAN,
    }
}

fn derived_for(spec: &RefrigeratorSpec) -> DerivedQuantities {
    let w = cooling_window(spec);
    match spec.variant() {
        Variant::Qrcn => DerivedQuantities {
            beta_s: None,
            beta_s_prime: Some(w.beta_limit),
            beta_sw: w.beta_sw,
        },
        _ => DerivedQuantities { beta_s: Some(w.beta_limit), beta_s_prime: None, beta_sw: None },
    }
}

fn write_outputs(
    table: &ResultTable,
    cfg_outputs: Option<&Outputs>,
    opts: &OutputOptions,
    stem: &str,
    two_axes: bool,
) -> Result<(Vec<PathBuf>, bool), CliError> {
    let mut files = Vec::new();
    let from_cfg = |p: &Option<String>| p.as_ref().map(PathBuf::from);
    let csv_path = cfg_outputs
        .and_then(|o| from_cfg(&o.csv_path))
        .or_else(|| opts.out_dir.as_ref().map(|d| d.join(format!("{stem}.csv"))));
    let json_path = cfg_outputs
        .and_then(|o| from_cfg(&o.json_path))
        .or_else(|| opts.out_dir.as_ref().map(|d| d.join(format!("{stem}.json"))));
    let svg_path = cfg_outputs.and_then(|o| from_cfg(&o.svg_path)).or_else(|| {
        (opts.svg)
            .then(|| opts.out_dir.as_ref().map(|d| d.join(format!("{stem}.svg"))))
            .flatten()
    });

    if let Some(p) = &csv_path {
        table.write_csv(p)?;
        files.push(p.clone());
    }
    if let Some(p) = &json_path {
        table.write_json(p)?;
        files.push(p.clone());
    }
    if let Some(p) = &svg_path {
        ResultTable::write_atomic(p, &svg::render(table, two_axes))?;
        files.push(p.clone());
    }
    Ok((files, csv_path.is_none()))
}

/// A single performance row at the config's base point.
pub fn cmd_report(cfg: &RunConfig, opts: &OutputOptions) -> Result<CommandOutput, CliError> {
    if !cfg.sweep.is_empty() {
        return Err(CliError::Config("report takes no sweep axes; use the sweep command".into()));
    }
    let spec = cfg.build_spec().map_err(|e| CliError::Config(e.to_string()))?;
    let report = performance_report(&spec).map_err(|e| CliError::Compute(e.to_string()))?;

    let columns: Vec<String> = METRIC_COLUMNS.iter().map(|s| s.to_string()).collect();
    let row: Vec<f64> = METRIC_COLUMNS.iter().map(|c| metric_value(&report, c)).collect();
    let table = ResultTable::new(
        columns,
        vec![row],
        Metadata::new(Some(cfg.clone()), None, derived_for(&spec)),
    );
    let (files, stdout_csv) = write_outputs(&table, cfg.outputs.as_ref(), opts, "report", false)?;

    let exit_code = if report.in_window { EXIT_OK } else { EXIT_OUT_OF_WINDOW };
    let summary = vec![
        format!(
            "model={} in_window={} beta_limit={:.6}",
            spec.variant(),
            report.in_window,
            report.window.beta_limit
        ),
        format!(
            "j_cold={:.6e} nsr={} cop={}",
            report.j_cold,
            report.nsr.map_or("nan".into(), |v| format!("{v:.6e}")),
            report.cop.map_or("nan".into(), |v| format!("{v:.6}")),
        ),
    ];
    Ok(CommandOutput { table, exit_code, summary, files, stdout_csv })
}

/// Grid evaluation over the config's sweep axes, row-major.
pub fn cmd_sweep(cfg: &RunConfig, opts: &OutputOptions) -> Result<CommandOutput, CliError> {
    let axes = cfg.axes().map_err(|e| CliError::Config(e.to_string()))?;
    if axes.is_empty() {
        return Err(CliError::Config("sweep requires at least one sweep axis".into()));
    }
    let variant = cfg.variant().map_err(|e| CliError::Config(e.to_string()))?;
    let rows = sweep(&cfg.params(), &axes, &[variant])
        .map_err(|e| CliError::Compute(e.to_string()))?;

    let mut columns: Vec<String> = axes.iter().map(|a| a.param.to_string()).collect();
    columns.extend(METRIC_COLUMNS.iter().map(|s| s.to_string()));
    let data: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| {
            let mut row = r.coords.clone();
            row.extend(METRIC_COLUMNS.iter().map(|c| metric_value(&r.reports[0].1, c)));
            row
        })
        .collect();

    let derived = rows
        .first()
        .map(|r| derived_for(&r.reports[0].1.spec))
        .unwrap_or_default();
    let table =
        ResultTable::new(columns, data, Metadata::new(Some(cfg.clone()), None, derived));
    let two_axes = axes.len() == 2;
    let (files, stdout_csv) = write_outputs(&table, cfg.outputs.as_ref(), opts, "sweep", two_axes)?;

    let in_window = rows.iter().filter(|r| r.reports[0].1.in_window).count();
    let summary = vec![format!("{} rows ({} in-window)", rows.len(), in_window)];
    Ok(CommandOutput { table, exit_code: EXIT_OK, summary, files, stdout_csv })
}

fn linspace(from: f64, to: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| {
            if points == 1 {
                from
            } else {
                from + (to - from) * i as f64 / (points - 1) as f64
            }
        })
        .collect()
}

fn fig_qrc(beta_c: f64) -> RefrigeratorSpec {
    RefrigeratorSpec::qrc(
        FIG_BETA_H,
        beta_c,
        FIG_BETA_W,
        FIG_OMEGA_H,
        FIG_OMEGA_C,
        FIG_GAMMA0,
    )
    .expect("figure parameters are valid")
}

fn fig_qrcn(beta_c: f64, omega_prime: f64) -> RefrigeratorSpec {
    RefrigeratorSpec::qrcn(
        FIG_BETA_H,
        beta_c,
        FIG_BETA_W1,
        FIG_BETA_W2,
        omega_prime,
        FIG_OMEGA_H,
        FIG_OMEGA_C,
        FIG_GAMMA0,
    )
    .expect("figure parameters are valid")
}

fn fig_shared(beta_c: f64) -> SharedBathParams {
    SharedBathParams {
        beta_h: FIG_BETA_H,
        beta_c,
        beta_w: FIG_BETA_W,
        omega_h: FIG_OMEGA_H,
        omega_c: FIG_OMEGA_C,
        gamma0: FIG_GAMMA0,
    }
}

/// The beta_c range shared by the figure grids, inside the QRC/QRI window.
pub const FIG_BETA_C_LO: f64 = 1.05;
pub const FIG_BETA_C_HI: f64 = 10.15;

/// Reproduce one of the built-in figure grids with its parameters hard-coded.
pub fn cmd_figure(name: &str, opts: &OutputOptions) -> Result<CommandOutput, CliError> {
    let compute = |e: crate::metrics::MetricsError| CliError::Compute(e.to_string());
    let (columns, rows, derived, two_axes): (Vec<&str>, Vec<Vec<f64>>, DerivedQuantities, bool) =
        match name {
            "fig2" => {
                let mut rows = Vec::new();
                for beta_c in linspace(FIG_BETA_C_LO, FIG_BETA_C_HI, 100) {
                    let rep = compare_qrc_qri(&fig_shared(beta_c)).map_err(compute)?;
                    rows.push(vec![beta_c, rep.nsr_ratio, rep.power_ratio]);
                }
                let derived = derived_for(&fig_qrc(2.0));
                (vec!["beta_c", "nsr_ratio", "power_ratio"], rows, derived, false)
            }
            "fig4a" => {
                let mut rows = Vec::new();
                for omega_prime in linspace(0.1, 3.0, 100) {
                    let omega_w1 = omega_prime + FIG_OMEGA_H - FIG_OMEGA_C;
                    let eff = effective_pair_temperature(
                        FIG_BETA_W1,
                        omega_w1,
                        FIG_BETA_W2,
                        omega_prime,
                    )
                    .map_err(|e| CliError::Compute(e.to_string()))?;
                    rows.push(vec![omega_prime, -eff.beta_eff]);
                }
                (vec!["omega_prime", "minus_beta_sw"], rows, DerivedQuantities::default(), false)
            }
            "fig4b" | "fig4c" => {
                let mut rows = Vec::new();
                for beta_c in linspace(FIG_BETA_C_LO, FIG_BETA_C_HI, 21) {
                    for omega_prime in linspace(1.0, 3.0, 21) {
                        let rep =
                            compare_qrcn_qrc(&fig_qrcn(beta_c, omega_prime), &fig_qrc(beta_c))
                                .map_err(compute)?;
                        let v = if name == "fig4b" { rep.power_ratio } else { rep.nsr_ratio };
                        rows.push(vec![beta_c, omega_prime, v]);
                    }
                }
                let col = if name == "fig4b" { "power_ratio" } else { "nsr_ratio" };
                (vec!["beta_c", "omega_prime", col], rows, DerivedQuantities::default(), true)
            }
            "fig5" => {
                let mut rows = Vec::new();
                for beta_c in linspace(FIG_BETA_C_LO, FIG_BETA_C_HI, 60) {
                    let q = |spec: &RefrigeratorSpec| -> Result<f64, CliError> {
                        Ok(performance_report(spec)
                            .map_err(|e| CliError::Compute(e.to_string()))?
                            .tur_q
                            .unwrap_or(f64::NAN))
                    };
                    let qri = RefrigeratorSpec::qri(
                        FIG_BETA_H,
                        beta_c,
                        FIG_BETA_W,
                        FIG_OMEGA_H,
                        FIG_OMEGA_C,
                        FIG_GAMMA0,
                    )
                    .expect("figure parameters are valid");
                    rows.push(vec![
                        beta_c,
                        q(&fig_qrc(beta_c))?,
                        q(&fig_qrcn(beta_c, FIG_OMEGA_PRIME))?,
                        q(&qri)?,
                    ]);
                }
                let derived = derived_for(&fig_qrcn(2.0, FIG_OMEGA_PRIME));
                (vec!["beta_c", "q_qrc", "q_qrcn", "q_qri"], rows, derived, false)
            }
            other => {
                return Err(CliError::Config(format!(
                    "unknown figure '{other}' (valid: fig2, fig4a, fig4b, fig4c, fig5)"
                )))
            }
        };

    let table = ResultTable::new(
        columns.into_iter().map(String::from).collect(),
        rows,
        Metadata::new(None, Some(name.to_string()), derived),
    );
    let (files, stdout_csv) = write_outputs(&table, None, opts, name, two_axes)?;
    let summary = vec![format!("{name}: {} rows", table.rows.len())];
    Ok(CommandOutput { table, exit_code: EXIT_OK, summary, files, stdout_csv })
}

/// Deterministic pseudo-random Hermitian unit-trace states for the trace
/// check (tiny xorshift; no external RNG needed here).
fn pseudo_random_density(dim: usize, seed: &mut u64) -> ndarray::Array2<num_complex::Complex64> {
    use num_complex::Complex64;
    let mut next = move || {
        *seed ^= *seed << 13;
        *seed ^= *seed >> 7;
        *seed ^= *seed << 17;
        (*seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let mut a = ndarray::Array2::<Complex64>::zeros((dim, dim));
    for i in 0..dim {
        for j in 0..dim {
            a[[i, j]] = Complex64::new(next(), next());
        }
    }
    let ad = crate::liouville::dagger(&a);
    let rho = a.dot(&ad);
    let trace: Complex64 = (0..dim).map(|i| rho[[i, i]]).sum();
    rho.mapv(|z| z / trace)
}

#[derive(Debug, Clone)]
pub struct ValidationCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// The invariant suite at the config's base parameters.
pub fn validation_checks(
    spec: &RefrigeratorSpec,
    tol: &Tolerances,
) -> Result<Vec<ValidationCheck>, CliError> {
    let compute = |e: String| CliError::Compute(e);
    let mut checks = Vec::new();
    let mut push = |name: &'static str, passed: bool, detail: String| {
        checks.push(ValidationCheck { name, passed, detail });
    };

    let fcs = flux_statistics_fcs(spec, Bath::Cold).map_err(|e| compute(e.to_string()))?;
    let closed =
        flux_statistics_closed_form(spec, Bath::Cold).map_err(|e| compute(e.to_string()))?;
    let mean_rel = ((fcs.mean_flux - closed.mean_flux) / closed.mean_flux).abs();
    push(
        "method_equivalence_mean",
        mean_rel <= tol.fcs_rel,
        format!("rel dev {mean_rel:.2e} vs tol {:.1e}", tol.fcs_rel),
    );
    let var_rel = ((fcs.variance_rate - closed.variance_rate) / closed.variance_rate).abs();
    push(
        "method_equivalence_variance",
        var_rel <= 100.0 * tol.fcs_rel,
        format!("rel dev {var_rel:.2e} vs tol {:.1e}", 100.0 * tol.fcs_rel),
    );

    let oracle =
        oracle_flux_statistics(spec, Bath::Cold, None).map_err(|e| compute(e.to_string()))?;
    let scale = closed.mean_flux.abs().max(closed.variance_rate);
    let o_mean = ((oracle.mean_flux - fcs.mean_flux) / scale).abs();
    push(
        "oracle_mean",
        o_mean <= tol.oracle_rel,
        format!("rel dev {o_mean:.2e} vs tol {:.1e}", tol.oracle_rel),
    );
    let o_var = ((oracle.variance_rate - fcs.variance_rate) / fcs.variance_rate).abs();
    push(
        "oracle_variance",
        o_var <= 10.0 * tol.oracle_rel,
        format!("rel dev {o_var:.2e} vs tol {:.1e}", 10.0 * tol.oracle_rel),
    );

    let ham = hamiltonian(spec);
    let channels = jump_channels(spec);
    let gen = generator(&ham, &channels).map_err(|e| compute(e.to_string()))?;
    let mut seed = 0x9e3779b97f4a7c15u64;
    let mut worst_trace = 0.0f64;
    for _ in 0..20 {
        let rho = pseudo_random_density(spec.dim(), &mut seed);
        let drho = apply_generator(&gen, &rho);
        let tr: num_complex::Complex64 = (0..spec.dim()).map(|i| drho[[i, i]]).sum();
        worst_trace = worst_trace.max(tr.norm());
    }
    push("trace_preservation", worst_trace < 1e-12, format!("max |Tr L(rho)| = {worst_trace:.2e}"));

    let sigma = steady_state(&gen).map_err(|e| compute(e.to_string()))?;
    let coh = sigma.max_coherence();
    push("steady_state_diagonal", coh < 1e-10, format!("max off-diagonal {coh:.2e}"));

    let hot = flux_statistics_fcs(spec, Bath::Hot).map_err(|e| compute(e.to_string()))?;
    let work = flux_statistics_fcs(spec, Bath::Work).map_err(|e| compute(e.to_string()))?;
    let total = fcs.mean_flux * spec.cold().omega
        + hot.mean_flux * spec.hot().omega
        + work.mean_flux * spec.work_gap();
    push("first_law", total.abs() < 1e-12, format!("|sum J| = {:.2e}", total.abs()));

    // COP identity on the dissipator-current route (exact to solver precision)
    let cop_dev = {
        let ideal = spec.cold().omega / spec.work_gap();
        let j_w = dissipator_current(&sigma, &channels_for_bath(&channels, Bath::Work), &ham)
            .map_err(|e| compute(e.to_string()))?;
        let j_c = match spec.variant() {
            Variant::Qri => {
                dissipator_current(&sigma, &channels_for_bath(&channels, Bath::Cold), &ham)
                    .map_err(|e| compute(e.to_string()))?
            }
            _ => closed.mean_flux * spec.cold().omega,
        };
        if j_w == 0.0 {
            0.0
        } else {
            ((j_c / j_w) - ideal).abs() / ideal
        }
    };
    push("cop_identity", cop_dev <= 1e-12, format!("rel dev {cop_dev:.2e}"));

    let window = cooling_window(spec);
    if window.in_window {
        let f = (window.beta_limit - spec.cold().beta) * spec.cold().omega;
        let q = f * fcs.variance_rate / fcs.mean_flux;
        push("tur", q >= 2.0 - 1e-9, format!("Q = {q:.6}"));
    } else {
        push("tur", true, "out of window; TUR not applicable".to_string());
    }

    let bound = cooling_ability_bound(spec);
    let bound_dev = (bound.autonomous - window.beta_limit).abs() / window.beta_limit.abs();
    push("window_bound_consistency", bound_dev <= 1e-12, format!("rel dev {bound_dev:.2e}"));

    let tc = tight_coupling_check(spec).map_err(|e| compute(e.to_string()))?;
    push(
        "tight_coupling",
        tc.max_mean_spread < 1e-8 && tc.max_variance_spread < 1e-8,
        format!("mean spread {:.2e}, variance spread {:.2e}", tc.max_mean_spread, tc.max_variance_spread),
    );

    Ok(checks)
}

/// Run the invariant suite; exit 0 on all-pass, 3 on any failure.
pub fn cmd_validate(cfg: &RunConfig, opts: &OutputOptions) -> Result<CommandOutput, CliError> {
    let spec = cfg.build_spec().map_err(|e| CliError::Config(e.to_string()))?;
    let checks = validation_checks(&spec, &cfg.tolerances())?;

    let columns: Vec<String> = checks.iter().map(|c| c.name.to_string()).collect();
    let row: Vec<f64> = checks.iter().map(|c| if c.passed { 1.0 } else { 0.0 }).collect();
    let table = ResultTable::new(
        columns,
        vec![row],
        Metadata::new(Some(cfg.clone()), None, derived_for(&spec)),
    );
    let (files, stdout_csv) = write_outputs(&table, cfg.outputs.as_ref(), opts, "validate", false)?;

    let all_pass = checks.iter().all(|c| c.passed);
    let mut summary: Vec<String> = checks
        .iter()
        .map(|c| format!("{} {:28} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail))
        .collect();
    summary.push(format!(
        "{} of {} checks passed",
        checks.iter().filter(|c| c.passed).count(),
        checks.len()
    ));
    Ok(CommandOutput {
        table,
        exit_code: if all_pass { EXIT_OK } else { EXIT_VALIDATION },
        summary,
        files,
        stdout_csv,
    })
}

/// Read and parse a config file.
pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    RunConfig::from_json(&text).map_err(|e| CliError::Config(e.to_string()))
}

/// Sweep-axis helper shared by tests and the binary.
pub fn parse_axis(param: &str, from: f64, to: f64, points: usize) -> Result<SweepAxis, CliError> {
    let param: SweepParam =
        param.parse().map_err(|e: crate::metrics::MetricsError| CliError::Config(e.to_string()))?;
    SweepAxis::new(param, from, to, points).map_err(|e| CliError::Config(e.to_string()))
}

/// Base parameter bag matching the built-in figure grids.
pub fn figure_params() -> ParamSet {
    ParamSet {
        beta_h: Some(FIG_BETA_H),
        beta_c: Some(2.0),
        beta_w: Some(FIG_BETA_W),
        beta_w1: Some(FIG_BETA_W1),
        beta_w2: Some(FIG_BETA_W2),
        omega_prime: Some(FIG_OMEGA_PRIME),
        omega_h: Some(FIG_OMEGA_H),
        omega_c: Some(FIG_OMEGA_C),
        gamma0: Some(FIG_GAMMA0),
    }
}
