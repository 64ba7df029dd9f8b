//! Independent brute-force validation of the counting statistics: fixed-step
//! time propagation of the tilted master equation, with cumulants read off the
//! long-time slope of the cumulant generating function ln Tr rho(chi, t).
//!
//! This path shares no linear algebra with the characteristic-polynomial
//! pipeline (no determinants, no coefficient recurrences), which is the point:
//! agreement between the two is the strongest end-to-end check the artifact
//! has.

use num_complex::Complex64;
use std::fmt;

use crate::fcs::{char_poly_coefficients, FcsError, FluxStatistics, Method};
use crate::linalg::matvec;
use crate::liouville::{
    disengaged_levels, hamiltonian, jump_channels, steady_state, tilted_generator, Bath,
    ChiVector, EngineError,
};
use crate::model::{rate_set, RefrigeratorSpec};

#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    Engine(EngineError),
    Fcs(FcsError),
    /// dt must satisfy dt <= 0.1 / max rate.
    StepTooLarge { dt: f64, limit: f64 },
    BadArgument(String),
    /// The CGF slope has not settled over the fit window.
    TransientNotConverged { drift: f64 },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::Engine(e) => write!(f, "{e}"),
            OracleError::Fcs(e) => write!(f, "{e}"),
            OracleError::StepTooLarge { dt, limit } => {
                write!(f, "dt = {dt} exceeds stability budget 0.1/max_rate = {limit}")
            }
            OracleError::BadArgument(msg) => write!(f, "{msg}"),
            OracleError::TransientNotConverged { drift } => write!(
                f,
                "transient not converged; increase t_final (slope drift {drift:.2e} across fit window)"
            ),
        }
    }
}

impl std::error::Error for OracleError {}

impl From<EngineError> for OracleError {
    fn from(e: EngineError) -> Self {
        OracleError::Engine(e)
    }
}

impl From<FcsError> for OracleError {
    fn from(e: FcsError) -> Self {
        OracleError::Fcs(e)
    }
}

/// Trajectory of the cumulant generating function under a tilted generator.
#[derive(Debug, Clone)]
pub struct PropagationResult {
    pub chi: ChiVector,
    pub times: Vec<f64>,
    /// ln Tr rho(chi, t), phase-unwrapped along the trajectory.
    pub log_norm: Vec<Complex64>,
    /// Least-squares slope over the second half of the trajectory.
    pub slope: Complex64,
    /// RMS residual of that fit.
    pub fit_residual: f64,
}

/// Spectral-gap estimate from the deflated characteristic polynomial:
/// |a_r / a_{r+1}| bounds the slowest nonzero relaxation rate from below
/// (up to the count of modes), which is what the transient budget needs.
pub fn spectral_gap_estimate(spec: &RefrigeratorSpec) -> Result<f64, OracleError> {
    let g = tilted_generator(&hamiltonian(spec), &jump_channels(spec), ChiVector::default())?;
    let r = 1 + disengaged_levels(&g).len();
    let coeffs = char_poly_coefficients(&g)?;
    let a_r = coeffs.a[r].norm();
    let a_r1 = coeffs.a[r + 1].norm();
    if a_r == 0.0 || a_r1 == 0.0 {
        return Err(OracleError::Fcs(FcsError::DegenerateSpectralGap));
    }
    Ok(a_r / a_r1)
}

/// Number of (evenly spaced) samples kept along a propagation.
const SAMPLES: usize = 512;

/// Propagate rho_dot = L(chi) rho from the untilted steady state with
/// fixed-step fourth-order Runge-Kutta, recording ln Tr rho(chi, t).
///
/// Starting from the steady state removes the untilted-sector transient; the
/// slope is fitted over the second half of [0, t_final] and the fit is
/// rejected if the slope still drifts between the third and fourth quarters.
pub fn propagate_tilted(
    spec: &RefrigeratorSpec,
    chi: ChiVector,
    t_final: f64,
    dt: f64,
) -> Result<PropagationResult, OracleError> {
    if !(dt > 0.0 && t_final > dt) {
        return Err(OracleError::BadArgument(format!(
            "need 0 < dt < t_final, got dt={dt}, t_final={t_final}"
        )));
    }
    let max_rate = rate_set(spec).max_rate();
    let dt_limit = 0.1 / max_rate;
    if dt > dt_limit {
        return Err(OracleError::StepTooLarge { dt, limit: dt_limit });
    }

    let ham = hamiltonian(spec);
    let channels = jump_channels(spec);
    let untilted = tilted_generator(&ham, &channels, ChiVector::default())?;
    let rho0 = steady_state(&untilted)?;
    let g = tilted_generator(&ham, &channels, chi)?;

    let n = g.dim2();
    let d = rho0.dim();
    let mut v: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..d {
        for i in 0..d {
            v[j * d + i] = rho0.entries[[i, j]];
        }
    }

    let steps = (t_final / dt).ceil() as usize;
    let stride = (steps / SAMPLES).max(1);
    let mut times = Vec::with_capacity(steps / stride + 2);
    let mut log_norm = Vec::with_capacity(steps / stride + 2);

    let trace_of = |v: &[Complex64]| -> Complex64 { (0..d).map(|i| v[i * d + i]).sum() };
    let mut prev_phase = 0.0f64;
    let mut record = |t: f64, v: &[Complex64], prev_phase: &mut f64| {
        let tr = trace_of(v);
        let mag = tr.norm().ln();
        let mut phase = tr.arg();
        // unwrap the phase so ln Tr stays continuous in t
        while phase - *prev_phase > std::f64::consts::PI {
            phase -= 2.0 * std::f64::consts::PI;
        }
        while phase - *prev_phase < -std::f64::consts::PI {
            phase += 2.0 * std::f64::consts::PI;
        }
        *prev_phase = phase;
        times.push(t);
        log_norm.push(Complex64::new(mag, phase));
    };
    record(0.0, &v, &mut prev_phase);

    let mut k1 = vec![Complex64::new(0.0, 0.0); n];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut tmp = k1.clone();
    for step in 1..=steps {
        matvec(&g.entries, &v, &mut k1);
        for i in 0..n {
            tmp[i] = v[i] + 0.5 * dt * k1[i];
        }
        matvec(&g.entries, &tmp, &mut k2);
        for i in 0..n {
            tmp[i] = v[i] + 0.5 * dt * k2[i];
        }
        matvec(&g.entries, &tmp, &mut k3);
        for i in 0..n {
            tmp[i] = v[i] + dt * k3[i];
        }
        matvec(&g.entries, &tmp, &mut k4);
        for i in 0..n {
            v[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if step % stride == 0 || step == steps {
            record(step as f64 * dt, &v, &mut prev_phase);
        }
    }

    // least-squares slope over the second half
    let fit = |lo: f64, hi: f64| -> Option<(Complex64, f64)> {
        let pts: Vec<(f64, Complex64)> = times
            .iter()
            .zip(&log_norm)
            .filter(|(t, _)| **t >= lo && **t <= hi)
            .map(|(t, y)| (*t, *y))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let n_pts = pts.len() as f64;
        let t_mean = pts.iter().map(|(t, _)| t).sum::<f64>() / n_pts;
        let y_mean = pts.iter().map(|(_, y)| y).sum::<Complex64>() / n_pts;
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0f64;
        for (t, y) in &pts {
            num += (y - y_mean) * (t - t_mean);
            den += (t - t_mean) * (t - t_mean);
        }
        if den == 0.0 {
            return None;
        }
        let slope = num / den;
        let mut ss = 0.0f64;
        for (t, y) in &pts {
            ss += (y - y_mean - slope * (t - t_mean)).norm_sqr();
        }
        Some((slope, (ss / n_pts).sqrt()))
    };

    let too_short = OracleError::TransientNotConverged { drift: f64::INFINITY };
    let (slope, fit_residual) =
        fit(t_final / 2.0, t_final).ok_or_else(|| too_short.clone())?;
    let (slope_q3, _) =
        fit(t_final / 2.0, 3.0 * t_final / 4.0).ok_or_else(|| too_short.clone())?;
    let (slope_q4, _) = fit(3.0 * t_final / 4.0, t_final).ok_or(too_short)?;
    let drift = (slope_q3 - slope_q4).norm();
    // a slope below max_rate * 1e-12 is numerically indistinguishable from zero
    let floor = max_rate * 1e-12;
    if !(drift <= 0.01 * slope_q4.norm().max(floor)) {
        return Err(OracleError::TransientNotConverged { drift });
    }

    Ok(PropagationResult { chi, times, log_norm, slope, fit_residual })
}

/// Default propagation horizon: 60 relaxation times of the slowest mode.
fn default_horizon(spec: &RefrigeratorSpec) -> Result<(f64, f64), OracleError> {
    let gap = spectral_gap_estimate(spec)?;
    let max_rate = rate_set(spec).max_rate();
    let dt = 0.09 / max_rate;
    let t_final = 60.0 / gap;
    Ok((t_final, dt))
}

/// Mean and variance of the counted photon flux from central differences of
/// the fitted lambda(chi) at +/- chi_step and +/- chi_step/2, with one
/// Richardson refinement. lambda(0) = 0 exactly by trace preservation.
pub fn oracle_flux_statistics(
    spec: &RefrigeratorSpec,
    counted_bath: Bath,
    chi_step: Option<f64>,
) -> Result<FluxStatistics, OracleError> {
    let omega = match counted_bath {
        Bath::Hot => spec.hot().omega,
        Bath::Cold => spec.cold().omega,
        Bath::Work => spec.work_gap(),
    };
    let s = chi_step.unwrap_or(1e-3 / omega);
    if !(s > 0.0) {
        return Err(OracleError::BadArgument(format!("chi_step must be > 0, got {s}")));
    }
    let (t_final, dt) = default_horizon(spec)?;
    let lambda = |x: f64| -> Result<Complex64, OracleError> {
        Ok(propagate_tilted(spec, ChiVector::single(counted_bath, x), t_final, dt)?.slope)
    };
    let lp = lambda(s)?;
    let lm = lambda(-s)?;
    let lp2 = lambda(s / 2.0)?;
    let lm2 = lambda(-s / 2.0)?;

    let d1 = (lp - lm) / (2.0 * s);
    let d2 = (lp2 - lm2) / s;
    let dl = (4.0 * d2 - d1) / 3.0;
    let s1 = (lp + lm) / (s * s);
    let s2 = (lp2 + lm2) / (s * s / 4.0);
    let ddl = (4.0 * s2 - s1) / 3.0;

    let mean = (Complex64::new(0.0, -1.0) * dl).re;
    let variance = -ddl.re;
    Ok(FluxStatistics {
        mean_flux: mean / omega,
        variance_rate: variance / (omega * omega),
        counted_bath,
        method: Method::Oracle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fcs::flux_statistics_fcs;
    use crate::model::RefrigeratorSpec;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn fig2_qri(beta_c: f64) -> RefrigeratorSpec {
        RefrigeratorSpec::qri(1.00, beta_c, 0.09, 10.0, 0.90, 0.01).unwrap()
    }

    fn fig2_qrc(beta_c: f64) -> RefrigeratorSpec {
        RefrigeratorSpec::qrc(1.00, beta_c, 0.09, 10.0, 0.90, 0.01).unwrap()
    }

    fn fig5_qrcn(beta_c: f64) -> RefrigeratorSpec {
        RefrigeratorSpec::qrcn(1.00, beta_c, 0.09, 1.00, 2.0, 10.0, 0.90, 0.01).unwrap()
    }

    #[test]
    fn untilted_propagation_preserves_trace() {
        let spec = fig2_qrc(2.0);
        let (t_final, dt) = default_horizon(&spec).unwrap();
        let res = propagate_tilted(&spec, ChiVector::default(), t_final, dt).unwrap();
        for y in &res.log_norm {
            assert!(y.norm() < 1e-10, "log trace {y} drifted at chi = 0");
        }
        assert!(res.slope.norm() < 1e-10);
    }

    #[test]
    fn slope_first_order_matches_mean_current() {
        // Re[lambda/(i chi omega_c)] approximates <Ndot> to o(chi)
        let spec = fig2_qrc(2.0);
        let chi_c = 1e-3 / 0.90;
        let (t_final, dt) = default_horizon(&spec).unwrap();
        let res =
            propagate_tilted(&spec, ChiVector::single(Bath::Cold, chi_c), t_final, dt).unwrap();
        let flux_estimate = (res.slope / Complex64::new(0.0, chi_c * 0.90)).re;
        assert_relative_eq!(flux_estimate, 5.6235634173338205e-4, max_relative = 1e-5);
        assert!(res.slope.im > 0.0); // positive cold current
    }

    #[test]
    fn halving_dt_leaves_slope_unchanged() {
        let spec = fig2_qrc(2.0);
        let chi = ChiVector::single(Bath::Cold, 1e-3);
        let (t_final, dt) = default_horizon(&spec).unwrap();
        let a = propagate_tilted(&spec, chi, t_final, dt).unwrap();
        let b = propagate_tilted(&spec, chi, t_final, dt / 2.0).unwrap();
        let rel = (a.slope - b.slope).norm() / b.slope.norm();
        assert!(rel < 1e-8, "slope changed by {rel:.2e} on halving dt");
    }

    #[test]
    fn chi_reversal_conjugates_lambda() {
        let spec = fig2_qri(2.0);
        let (t_final, dt) = default_horizon(&spec).unwrap();
        let p = propagate_tilted(&spec, ChiVector::single(Bath::Cold, 2e-3), t_final, dt).unwrap();
        let m = propagate_tilted(&spec, ChiVector::single(Bath::Cold, -2e-3), t_final, dt).unwrap();
        assert_abs_diff_eq!((p.slope - m.slope.conj()).norm(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn oversized_dt_is_rejected() {
        let spec = fig2_qrc(2.0);
        let err = propagate_tilted(&spec, ChiVector::default(), 1000.0, 100.0).unwrap_err();
        assert!(matches!(err, OracleError::StepTooLarge { .. }));
    }

    #[test]
    fn short_horizon_reports_unconverged_transient() {
        // a moderate tilt leaves the initial state off the tilted quasi-steady
        // direction; with the horizon cut to a fraction of a relaxation time
        // the transient still dominates the fit window
        let spec = fig2_qrc(2.0);
        let gap = spectral_gap_estimate(&spec).unwrap();
        let max_rate = crate::model::rate_set(&spec).max_rate();
        let err = propagate_tilted(
            &spec,
            ChiVector::single(Bath::Cold, 0.5),
            0.4 / gap,
            0.09 / max_rate,
        )
        .unwrap_err();
        assert!(err.to_string().contains("increase t_final"), "got: {err}");
    }

    #[test]
    fn oracle_equilibrium() {
        let spec = RefrigeratorSpec::qrc(1.0, 1.0, 1.0, 10.0, 0.90, 0.01).unwrap();
        let s = oracle_flux_statistics(&spec, Bath::Cold, None).unwrap();
        assert_abs_diff_eq!(s.mean_flux, 0.0, epsilon = 1e-10);
        assert!(s.variance_rate > 0.0);
        assert_relative_eq!(s.variance_rate, 9.0796289768518919e-7, max_relative = 1e-3);
    }

    #[test]
    fn oracle_agrees_with_charpoly_qri() {
        let spec = fig2_qri(2.0);
        let o = oracle_flux_statistics(&spec, Bath::Cold, None).unwrap();
        let f = flux_statistics_fcs(&spec, Bath::Cold).unwrap();
        assert_relative_eq!(o.mean_flux, f.mean_flux, max_relative = 1e-4);
        assert_relative_eq!(o.variance_rate, f.variance_rate, max_relative = 1e-3);
    }

    #[test]
    fn oracle_agrees_with_charpoly_qrcn() {
        let spec = fig5_qrcn(2.0);
        let o = oracle_flux_statistics(&spec, Bath::Cold, None).unwrap();
        let f = flux_statistics_fcs(&spec, Bath::Cold).unwrap();
        assert_relative_eq!(o.mean_flux, f.mean_flux, max_relative = 1e-4);
        assert_relative_eq!(o.variance_rate, f.variance_rate, max_relative = 1e-3);
    }
}
