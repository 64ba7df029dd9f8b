//! Mean and variance of counted currents from the tilted generator via the
//! characteristic-polynomial method, plus the closed-form flux expressions for
//! cross-validation.
//!
//! The characteristic polynomial `det(lambda I - L(chi)) = sum_i a_i lambda^i`
//! is computed with the Faddeev-LeVerrier recurrence in double-double
//! arithmetic. The dominant eigenvalue branch lambda(chi) starts at zero and
//! satisfies, with `a'_n = d a_n / d(i chi)` at chi = 0:
//!
//! ```text
//! <M>     = -a'_0 / a_1
//! Delta M = (a''_0/a'_0 - 2 a'_1/a_1) <M> - (2 a_2/a_1) <M>^2
//! ```
//!
//! Models with disengaged levels (QRC, QRCN) carry chi-independent zero
//! eigenvalues in addition to the physical one; the extraction deflates those
//! structural roots, so the coefficient triple shifts up by the number of
//! disengaged levels.

use num_complex::Complex64;
use std::fmt;

use crate::dd::DdC;
use crate::liouville::{
    disengaged_levels, hamiltonian, jump_channels, tilted_generator, Bath, ChiVector,
    EngineError, GeneratorMatrix,
};
use crate::model::{rate_set, RateSet, RefrigeratorSpec};

#[derive(Debug, Clone, PartialEq)]
pub enum FcsError {
    /// Coefficients overflowed; the generator should be rescaled (for example
    /// by working in units of gamma0).
    IllScaled,
    /// dim^2 above the supported bound.
    TooLarge(usize),
    Engine(EngineError),
    /// Finite-difference step must be positive.
    BadStep(f64),
    /// The h and h/2 difference quotients disagree beyond 10%.
    NonConvergentRichardson { rel: f64 },
    /// a_1 (after deflation) is numerically zero.
    DegenerateSpectralGap,
    /// Structural zero coefficients were not numerically zero, or vice versa.
    DeflationMismatch { index: usize, magnitude: f64 },
    /// Mean or variance came out with a non-negligible imaginary part.
    ImaginaryResidual { what: &'static str, rel: f64 },
}

impl fmt::Display for FcsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FcsError::IllScaled => write!(
                f,
                "characteristic polynomial overflowed; rescale the generator (e.g. by gamma0)"
            ),
            FcsError::TooLarge(n) => write!(f, "generator dimension {n} exceeds 256"),
            FcsError::Engine(e) => write!(f, "{e}"),
            FcsError::BadStep(h) => write!(f, "counting-field step must be > 0, got {h}"),
            FcsError::NonConvergentRichardson { rel } => write!(
                f,
                "finite-difference quotients disagree by {rel:.2e} (>10%); use a smaller h"
            ),
            FcsError::DegenerateSpectralGap => write!(f, "degenerate spectral gap"),
            FcsError::DeflationMismatch { index, magnitude } => write!(
                f,
                "coefficient a_{index} has relative magnitude {magnitude:.2e}, inconsistent \
                 with the structural zero-root count"
            ),
            FcsError::ImaginaryResidual { what, rel } => {
                write!(f, "{what} has relative imaginary part {rel:.2e}")
            }
        }
    }
}

impl std::error::Error for FcsError {}

impl From<EngineError> for FcsError {
    fn from(e: EngineError) -> Self {
        FcsError::Engine(e)
    }
}

/// Coefficients a_0..a_{d^2} of det(lambda I - L(chi)), leading coefficient 1.
#[derive(Debug, Clone, PartialEq)]
pub struct CharPolyCoefficients {
    pub a: Vec<Complex64>,
    pub chi_point: ChiVector,
}

impl CharPolyCoefficients {
    pub fn degree(&self) -> usize {
        self.a.len() - 1
    }

    pub fn max_coefficient_magnitude(&self) -> f64 {
        self.a.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Faddeev-LeVerrier coefficients of det(lambda I - L).
///
/// The recurrence is exact in rational arithmetic on integer inputs; in
/// floating point it runs in double-double precision because the trailing
/// coefficients of a near-singular Liouvillian emerge from cancellations some
/// ten orders of magnitude larger than the result.
pub fn char_poly_coefficients(g: &GeneratorMatrix) -> Result<CharPolyCoefficients, FcsError> {
    let n = g.dim2();
    if n > 256 {
        return Err(FcsError::TooLarge(n));
    }
    let a_dd: Vec<DdC> = g.entries.iter().map(|z| DdC::from_c64(*z)).collect();

    let tr = |m: &[DdC]| -> DdC {
        let mut t = DdC::ZERO;
        for i in 0..n {
            t = t.add(m[i * n + i]);
        }
        t
    };

    // c_k of lambda^{n-k}: c_0 = 1, M_1 = A, c_k = -tr(A M_{k-1} + c_{k-1} A)/k
    let mut m = a_dd.clone();
    let mut c: Vec<DdC> = Vec::with_capacity(n + 1);
    c.push(DdC::from_c64(Complex64::new(1.0, 0.0)));
    c.push(tr(&m).neg());

    let mut scratch = vec![DdC::ZERO; n * n];
    for k in 2..=n {
        // M_k = A (M_{k-1} + c_{k-1} I)
        let ck_prev = c[k - 1];
        for i in 0..n {
            m[i * n + i] = m[i * n + i].add(ck_prev);
        }
        for i in 0..n {
            for j in 0..n {
                let mut acc = DdC::ZERO;
                for l in 0..n {
                    acc = acc.mul_add(a_dd[i * n + l], m[l * n + j]);
                }
                scratch[i * n + j] = acc;
            }
        }
        std::mem::swap(&mut m, &mut scratch);
        let ck = tr(&m).neg().div_f64(k as f64);
        if !ck.is_finite() {
            return Err(FcsError::IllScaled);
        }
        c.push(ck);
    }

    let a = (0..=n).map(|i| c[n - i].to_c64()).collect();
    Ok(CharPolyCoefficients { a, chi_point: g.chi })
}

/// How a counted current is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    FcsCharPoly,
    Oracle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed_form",
            Method::FcsCharPoly => "fcs_charpoly",
            Method::Oracle => "oracle",
        })
    }
}

/// Photon-flux statistics for one counted bath. Signs follow the convention
/// that currents entering the working system are positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxStatistics {
    pub mean_flux: f64,
    pub variance_rate: f64,
    pub counted_bath: Bath,
    pub method: Method,
}

/// Deflated coefficient data at chi = 0 for one counted bath, in the prime
/// convention `a'_n = d a_n / d(i chi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedCoefficients {
    pub a1: Complex64,
    pub a2: Complex64,
    pub a0p: Complex64,
    pub a0pp: Complex64,
    pub a1p: Complex64,
    /// Number of structural zero roots deflated (1 + disengaged levels).
    pub deflation: usize,
    /// Finite-difference step actually used.
    pub h: f64,
}

/// Default counting-field step, in units of 1/omega of the counted bath.
///
/// Large enough that generator-entry rounding amplified by the 1/h^2 second
/// difference stays below 1e-10 relative even where the flux is small, small
/// enough that the Richardson-extrapolated truncation stays near 1e-11.
pub const DEFAULT_CHI_STEP: f64 = 1e-2;

fn counted_frequency(spec: &RefrigeratorSpec, bath: Bath) -> f64 {
    match bath {
        Bath::Hot => spec.hot().omega,
        Bath::Cold => spec.cold().omega,
        Bath::Work => spec.work_gap(),
    }
}

/// Central difference with one Richardson step; errors if the h and h/2
/// quotients disagree by more than 10% (beyond the noise floor).
fn richardson(d_h: Complex64, d_h2: Complex64, floor: f64) -> Result<Complex64, FcsError> {
    let diff = (d_h - d_h2).norm();
    let scale = d_h2.norm().max(floor);
    if diff > 0.1 * scale && diff > floor {
        return Err(FcsError::NonConvergentRichardson { rel: diff / scale });
    }
    Ok((4.0 * d_h2 - d_h) / 3.0)
}

/// Coefficient derivatives of the deflated characteristic polynomial at
/// chi = 0, by central finite differences at h and h/2 with one Richardson
/// extrapolation step.
pub fn coefficient_derivatives(
    spec: &RefrigeratorSpec,
    counted_bath: Bath,
    h: Option<f64>,
) -> Result<DerivedCoefficients, FcsError> {
    let omega = counted_frequency(spec, counted_bath);
    let h = h.unwrap_or(DEFAULT_CHI_STEP / omega);
    if !(h > 0.0) {
        return Err(FcsError::BadStep(h));
    }

    let ham = hamiltonian(spec);
    let channels = jump_channels(spec);
    let poly_at = |chi: f64| -> Result<CharPolyCoefficients, FcsError> {
        let g = tilted_generator(&ham, &channels, ChiVector::single(counted_bath, chi))?;
        char_poly_coefficients(&g)
    };

    let at0 = poly_at(0.0)?;
    let plus = poly_at(h)?;
    let minus = poly_at(-h)?;
    let plus_half = poly_at(h / 2.0)?;
    let minus_half = poly_at(-h / 2.0)?;

    // structural zero roots: the trivial one plus one per disengaged level
    let g0 = tilted_generator(&ham, &channels, ChiVector::default())?;
    let r = 1 + disengaged_levels(&g0).len();

    let scale = at0.max_coefficient_magnitude();
    for i in 0..r {
        let rel = at0.a[i].norm() / scale;
        if rel > 1e-10 {
            return Err(FcsError::DeflationMismatch { index: i, magnitude: rel });
        }
    }
    let q1 = at0.a[r];
    let q2 = at0.a[r + 1];
    if q1.norm() <= 1e-12 * scale {
        return Err(FcsError::DegenerateSpectralGap);
    }

    let i0 = r - 1;
    // first derivative of a_{r-1}
    let d1 = (plus.a[i0] - minus.a[i0]) / Complex64::new(2.0 * h, 0.0);
    let d2 = (plus_half.a[i0] - minus_half.a[i0]) / Complex64::new(h, 0.0);
    let dq0 = richardson(d1, d2, 1e-9 * scale * h)?;
    // second derivative of a_{r-1}
    let s1 = (plus.a[i0] - 2.0 * at0.a[i0] + minus.a[i0]) / Complex64::new(h * h, 0.0);
    let s2 =
        (plus_half.a[i0] - 2.0 * at0.a[i0] + minus_half.a[i0]) / Complex64::new(h * h / 4.0, 0.0);
    let ddq0 = richardson(s1, s2, 1e-9 * scale)?;
    // first derivative of a_r
    let e1 = (plus.a[r] - minus.a[r]) / Complex64::new(2.0 * h, 0.0);
    let e2 = (plus_half.a[r] - minus_half.a[r]) / Complex64::new(h, 0.0);
    let dq1 = richardson(e1, e2, 1e-9 * scale * h)?;

    // prime convention: a'_n = d/d(i chi) = -i d/d chi
    let minus_i = Complex64::new(0.0, -1.0);
    Ok(DerivedCoefficients {
        a1: q1,
        a2: q2,
        a0p: minus_i * dq0,
        a0pp: -ddq0,
        a1p: minus_i * dq1,
        deflation: r,
        h,
    })
}

fn real_part_checked(z: Complex64, scale: f64, what: &'static str) -> Result<f64, FcsError> {
    let rel = z.im.abs() / scale.max(f64::MIN_POSITIVE);
    if rel > 1e-8 && z.im.abs() > 1e-14 * scale.max(1.0) {
        return Err(FcsError::ImaginaryResidual { what, rel });
    }
    Ok(z.re)
}

/// Current statistics from the characteristic-polynomial pipeline.
///
/// The energy mean and variance come from the deflated coefficient
/// derivatives; photon-flux statistics divide by omega and omega^2 of the
/// counted bath.
pub fn flux_statistics_fcs(
    spec: &RefrigeratorSpec,
    counted_bath: Bath,
) -> Result<FluxStatistics, FcsError> {
    let dc = coefficient_derivatives(spec, counted_bath, None)?;
    let omega = counted_frequency(spec, counted_bath);

    let mean_c = -dc.a0p / dc.a1;
    // regular form of the variance, valid also when the mean vanishes:
    // Delta M = (-a''_0 - 2 a'_1 <M> - 2 a_2 <M>^2) / a_1
    let var_c = (-dc.a0pp - 2.0 * dc.a1p * mean_c - 2.0 * dc.a2 * mean_c * mean_c) / dc.a1;

    let mean_scale = mean_c.norm().max(var_c.norm());
    let mean = real_part_checked(mean_c, mean_scale, "mean current")?;
    let variance = real_part_checked(var_c, var_c.norm(), "current variance")?;

    Ok(FluxStatistics {
        mean_flux: mean / omega,
        variance_rate: variance / (omega * omega),
        counted_bath,
        method: Method::FcsCharPoly,
    })
}

/// Rate products entering the closed forms, with full gamma0 factors so that
/// alpha = p/m and `2<Ndot>^2/p` stay dimensionless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormIntermediates {
    /// gamma1*gamma4 - gamma2*gamma3 (or the primed pair); positive in-window.
    pub m: f64,
    /// gamma1*gamma4 + gamma2*gamma3.
    pub p: f64,
    /// 2(n_c + n_h + n_w) + 3; QRI only.
    pub k: Option<f64>,
    /// p/m; undefined exactly at the window boundary m = 0.
    pub alpha: Option<f64>,
}

pub fn closed_form_intermediates(spec: &RefrigeratorSpec) -> ClosedFormIntermediates {
    match rate_set(spec) {
        RateSet::Qri { .. } => {
            let g0 = spec.gamma0();
            let nh = spec.hot().occupation().n;
            let nc = spec.cold().occupation().n;
            let RefrigeratorSpec::Qri { work, .. } = spec else { unreachable!() };
            let nw = work.occupation().n;
            let m = g0 * g0 * (nc * nw - nh * (nc + nw + 1.0));
            let p = g0 * g0 * (nh * (2.0 * nc * nw + nc + nw + 1.0) + nc * nw);
            let k = 2.0 * (nc + nh + nw) + 3.0;
            ClosedFormIntermediates {
                m,
                p,
                k: Some(k),
                alpha: (m != 0.0).then(|| p / m),
            }
        }
        RateSet::Qrc { gamma1, gamma2, gamma3, gamma4 } => {
            let m = gamma1 * gamma4 - gamma2 * gamma3;
            let p = gamma1 * gamma4 + gamma2 * gamma3;
            ClosedFormIntermediates { m, p, k: None, alpha: (m != 0.0).then(|| p / m) }
        }
        RateSet::Qrcn { gamma1, gamma2, gamma3_prime, gamma4_prime } => {
            let m = gamma1 * gamma4_prime - gamma2 * gamma3_prime;
            let p = gamma1 * gamma4_prime + gamma2 * gamma3_prime;
            ClosedFormIntermediates { m, p, k: None, alpha: (m != 0.0).then(|| p / m) }
        }
    }
}

fn bath_sign(bath: Bath) -> f64 {
    match bath {
        Bath::Hot => -1.0,
        Bath::Cold | Bath::Work => 1.0,
    }
}

/// Model-specific closed-form photon flux statistics.
///
/// QRC/QRCN use the two-state renewal forms `<Ndot> = m/S` and
/// Delta Ndot = p/S - 2m^2/S^3; QRI uses the six-rate mean with the
/// k-corrected variance. Both variance forms stay regular at the window
/// boundary m = 0.
pub fn flux_statistics_closed_form(
    spec: &RefrigeratorSpec,
    counted_bath: Bath,
) -> Result<FluxStatistics, FcsError> {
    let ClosedFormIntermediates { m, p, k, .. } = closed_form_intermediates(spec);
    let (mean, variance) = match rate_set(spec) {
        RateSet::Qri { .. } => {
            let g0 = spec.gamma0();
            let nh = spec.hot().occupation().n;
            let nc = spec.cold().occupation().n;
            let RefrigeratorSpec::Qri { work, .. } = spec else { unreachable!() };
            let nw = work.occupation().n;
            let numer = nc * nw - nh * (nc + nw + 1.0);
            let denom = nc * (2.0 + 3.0 * (nh + nw)) + 3.0 * nh * (1.0 + nw) + 2.0 * (2.0 * nw + 1.0);
            let mean = g0 * numer / denom;
            // alpha * mean = p/(gamma0 * denom): regular even at numer = 0
            let var = (p / (g0 * denom)) * (1.0 - 2.0 * k.expect("QRI k") * mean * mean / p);
            (mean, var)
        }
        RateSet::Qrc { gamma1, gamma2, gamma3, gamma4 } => {
            let total = gamma1 + gamma2 + gamma3 + gamma4;
            (m / total, p / total - 2.0 * m * m / (total * total * total))
        }
        RateSet::Qrcn { gamma1, gamma2, gamma3_prime, gamma4_prime } => {
            let total = gamma1 + gamma2 + gamma3_prime + gamma4_prime;
            (m / total, p / total - 2.0 * m * m / (total * total * total))
        }
    };
    Ok(FluxStatistics {
        mean_flux: bath_sign(counted_bath) * mean,
        variance_rate: variance,
        counted_bath,
        method: Method::ClosedForm,
    })
}

/// Photon-flux statistics counted on each bath in turn, with the largest
/// relative spread across baths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TightCouplingReport {
    pub cold: FluxStatistics,
    pub hot: FluxStatistics,
    pub work: FluxStatistics,
    /// max relative deviation of |mean| and variance across baths.
    pub max_mean_spread: f64,
    pub max_variance_spread: f64,
}

/// All three baths exchange photons through the same cycle, so counting any
/// of them gives the same photon-flux statistics (hot with opposite sign).
pub fn tight_coupling_check(spec: &RefrigeratorSpec) -> Result<TightCouplingReport, FcsError> {
    let cold = flux_statistics_fcs(spec, Bath::Cold)?;
    let hot = flux_statistics_fcs(spec, Bath::Hot)?;
    let work = flux_statistics_fcs(spec, Bath::Work)?;
    let means = [cold.mean_flux.abs(), hot.mean_flux.abs(), work.mean_flux.abs()];
    let vars = [cold.variance_rate, hot.variance_rate, work.variance_rate];
    let spread = |v: [f64; 3]| -> f64 {
        let max = v.into_iter().fold(f64::MIN, f64::max);
        let min = v.into_iter().fold(f64::MAX, f64::min);
        if max == 0.0 {
            0.0
        } else {
            (max - min) / max
        }
    };
    Ok(TightCouplingReport {
        cold,
        hot,
        work,
        max_mean_spread: spread(means),
        max_variance_spread: spread(vars),
    })
}
