//! Refrigerator specifications, Bose-Einstein occupations, decay-rate sets,
//! synthetic temperatures, and cooling-window logic.
//!
//! Units: hbar = k_B = 1. Inverse temperatures are 1/energy, frequencies are
//! energies, and all rates are expressed in absolute units (the Weisskopf-Wigner
//! constant gamma0 multiplies every decay rate).

use std::fmt;

/// Occupations with beta*omega above this are clamped to zero instead of
/// silently underflowing.
pub const OCCUPATION_CLAMP_THRESHOLD: f64 = 700.0;

/// Below this |beta*omega| the occupation is evaluated by series expansion.
pub const OCCUPATION_SERIES_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum ModelError {
    /// beta*omega = 0 has no finite Bose occupation.
    ZeroBetaOmega,
    /// A numeric input was NaN or infinite.
    NonFinite(&'static str),
    /// Frequencies must satisfy omega_h > omega_c > 0 (and omega' > 0 for QRCN).
    BadFrequencies(String),
    /// Physical input baths require beta > 0.
    BadTemperature(String),
    /// gamma0 must be > 0.
    BadGamma(f64),
    /// The two work frequencies of a synthetic pair coincide.
    DegenerateWorkPair,
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::ZeroBetaOmega => write!(f, "infinite occupation at zero βω"),
            ModelError::NonFinite(what) => write!(f, "non-finite input: {what}"),
            ModelError::BadFrequencies(msg) => write!(f, "bad frequencies: {msg}"),
            ModelError::BadTemperature(msg) => write!(f, "bad temperature: {msg}"),
            ModelError::BadGamma(g) => write!(f, "gamma0 must be positive, got {g}"),
            ModelError::DegenerateWorkPair => write!(f, "degenerate work pair"),
        }
    }
}

impl std::error::Error for ModelError {}

/// One thermal bath: inverse temperature and the transition frequency it drives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathSpec {
    pub beta: f64,
    pub omega: f64,
}

impl BathSpec {
    /// A physical input bath: omega > 0 and beta finite and > 0.
    ///
    /// Negative inverse temperatures only ever appear as *derived* synthetic
    /// values (plain `f64`s), never as stored bath inputs.
    pub fn new(beta: f64, omega: f64) -> Result<Self, ModelError> {
        if !beta.is_finite() {
            return Err(ModelError::NonFinite("beta"));
        }
        if !omega.is_finite() {
            return Err(ModelError::NonFinite("omega"));
        }
        if omega <= 0.0 {
            return Err(ModelError::BadFrequencies(format!("omega must be > 0, got {omega}")));
        }
        if beta <= 0.0 {
            return Err(ModelError::BadTemperature(format!("beta must be > 0, got {beta}")));
        }
        Ok(Self { beta, omega })
    }

    /// Bose-Einstein occupation of this bath at its own frequency.
    pub fn occupation(&self) -> Occupation {
        // Inputs were validated at construction, so this cannot fail.
        bose_occupation(self.beta, self.omega).expect("validated bath")
    }
}

/// Bose-Einstein occupation with its clamp diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Occupation {
    pub n: f64,
    /// True when beta*omega exceeded [`OCCUPATION_CLAMP_THRESHOLD`] and the
    /// value was clamped to exactly zero.
    pub clamped: bool,
}

/// n = 1/(e^{βω} − 1).
///
/// Stable for large βω (clamped to 0 above the threshold, flagged), for small
/// |βω| (series expansion), and exact through `exp_m1` otherwise.
pub fn bose_occupation(beta: f64, omega: f64) -> Result<Occupation, ModelError> {
    let x = beta * omega;
    if !x.is_finite() {
        return Err(ModelError::NonFinite("beta*omega"));
    }
    if x == 0.0 {
        return Err(ModelError::ZeroBetaOmega);
    }
    if x > OCCUPATION_CLAMP_THRESHOLD {
        return Ok(Occupation { n: 0.0, clamped: true });
    }
    if x.abs() < OCCUPATION_SERIES_THRESHOLD {
        // 1/(e^x - 1) = 1/x - 1/2 + x/12 - x^3/720 + O(x^5)
        let n = 1.0 / x - 0.5 + x / 12.0 - x * x * x / 720.0;
        return Ok(Occupation { n, clamped: false });
    }
    Ok(Occupation { n: 1.0 / x.exp_m1(), clamped: false })
}

/// Which of the three refrigerator models a spec describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Uncorrelated single-photon transfer with hot, cold, and work baths.
    Qri,
    /// Correlated two-photon hot-cold transfer plus a conventional work bath.
    Qrc,
    /// Correlated hot-cold transfer plus a synthetic work bath made of two
    /// baths coupled through a second two-photon transition.
    Qrcn,
}

impl Variant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Qri => "qri",
            Variant::Qrc => "qrc",
            Variant::Qrcn => "qrcn",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "qri" => Ok(Variant::Qri),
            "qrc" => Ok(Variant::Qrc),
            "qrcn" => Ok(Variant::Qrcn),
            other => Err(ModelError::BadTemperature(format!("unknown model '{other}'"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A validated refrigerator specification.
///
/// Constructors derive the dependent frequencies: omega_w = omega_h - omega_c
/// for QRI/QRC, and omega_w1 = omega' + omega_h - omega_c with omega_w2 =
/// omega' for QRCN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RefrigeratorSpec {
    Qri { hot: BathSpec, cold: BathSpec, work: BathSpec, gamma0: f64 },
    Qrc { hot: BathSpec, cold: BathSpec, work: BathSpec, gamma0: f64 },
    Qrcn { hot: BathSpec, cold: BathSpec, work1: BathSpec, work2: BathSpec, gamma0: f64 },
}

fn check_common(beta_h: f64, beta_c: f64, omega_h: f64, omega_c: f64, gamma0: f64)
    -> Result<(BathSpec, BathSpec), ModelError>
{
    if !gamma0.is_finite() {
        return Err(ModelError::NonFinite("gamma0"));
    }
    if gamma0 <= 0.0 {
        return Err(ModelError::BadGamma(gamma0));
    }
    if !(omega_h.is_finite() && omega_c.is_finite()) {
        return Err(ModelError::NonFinite("omega"));
    }
    if !(omega_h > omega_c && omega_c > 0.0) {
        return Err(ModelError::BadFrequencies(format!(
            "require omega_h > omega_c > 0, got omega_h={omega_h}, omega_c={omega_c}"
        )));
    }
    Ok((BathSpec::new(beta_h, omega_h)?, BathSpec::new(beta_c, omega_c)?))
}

impl RefrigeratorSpec {
    pub fn qri(beta_h: f64, beta_c: f64, beta_w: f64, omega_h: f64, omega_c: f64, gamma0: f64)
        -> Result<Self, ModelError>
    {
        let (hot, cold) = check_common(beta_h, beta_c, omega_h, omega_c, gamma0)?;
        let work = BathSpec::new(beta_w, omega_h - omega_c)?;
        Ok(RefrigeratorSpec::Qri { hot, cold, work, gamma0 })
    }

    pub fn qrc(beta_h: f64, beta_c: f64, beta_w: f64, omega_h: f64, omega_c: f64, gamma0: f64)
        -> Result<Self, ModelError>
    {
        let (hot, cold) = check_common(beta_h, beta_c, omega_h, omega_c, gamma0)?;
        let work = BathSpec::new(beta_w, omega_h - omega_c)?;
        Ok(RefrigeratorSpec::Qrc { hot, cold, work, gamma0 })
    }

    /// omega_prime is the free |1>-|3> spacing; omega_w1 - omega_w2 = omega_h - omega_c
    /// is enforced by construction.
    #[allow(clippy::too_many_arguments)]
    pub fn qrcn(beta_h: f64, beta_c: f64, beta_w1: f64, beta_w2: f64, omega_prime: f64,
                omega_h: f64, omega_c: f64, gamma0: f64) -> Result<Self, ModelError>
    {
        let (hot, cold) = check_common(beta_h, beta_c, omega_h, omega_c, gamma0)?;
        if !(omega_prime > 0.0 && omega_prime.is_finite()) {
            return Err(ModelError::BadFrequencies(format!(
                "omega_prime must be > 0 and finite, got {omega_prime}"
            )));
        }
        let omega_w1 = omega_prime + (omega_h - omega_c);
        let omega_w2 = omega_prime;
        if omega_w1 == omega_w2 {
            return Err(ModelError::DegenerateWorkPair);
        }
        Ok(RefrigeratorSpec::Qrcn {
            hot,
            cold,
            work1: BathSpec::new(beta_w1, omega_w1)?,
            work2: BathSpec::new(beta_w2, omega_w2)?,
            gamma0,
        })
    }

    pub fn variant(&self) -> Variant {
        match self {
            RefrigeratorSpec::Qri { .. } => Variant::Qri,
            RefrigeratorSpec::Qrc { .. } => Variant::Qrc,
            RefrigeratorSpec::Qrcn { .. } => Variant::Qrcn,
        }
    }

    pub fn hot(&self) -> BathSpec {
        match self {
            RefrigeratorSpec::Qri { hot, .. }
            | RefrigeratorSpec::Qrc { hot, .. }
            | RefrigeratorSpec::Qrcn { hot, .. } => *hot,
        }
    }

    pub fn cold(&self) -> BathSpec {
        match self {
            RefrigeratorSpec::Qri { cold, .. }
            | RefrigeratorSpec::Qrc { cold, .. }
            | RefrigeratorSpec::Qrcn { cold, .. } => *cold,
        }
    }

    pub fn gamma0(&self) -> f64 {
        match self {
            RefrigeratorSpec::Qri { gamma0, .. }
            | RefrigeratorSpec::Qrc { gamma0, .. }
            | RefrigeratorSpec::Qrcn { gamma0, .. } => *gamma0,
        }
    }

    /// The work transition energy omega_w = omega_h - omega_c; for QRCN this
    /// equals omega_w1 - omega_w2.
    pub fn work_gap(&self) -> f64 {
        match self {
            RefrigeratorSpec::Qri { work, .. } | RefrigeratorSpec::Qrc { work, .. } => work.omega,
            RefrigeratorSpec::Qrcn { work1, work2, .. } => work1.omega - work2.omega,
        }
    }

    /// The effective work-bath inverse temperature: beta_w for QRI/QRC, the
    /// synthetic beta_sw for QRCN.
    pub fn work_beta_effective(&self) -> f64 {
        match self {
            RefrigeratorSpec::Qri { work, .. } | RefrigeratorSpec::Qrc { work, .. } => work.beta,
            RefrigeratorSpec::Qrcn { .. } => {
                synthetic_inverse_temperature(self).expect("validated QRCN spec")
            }
        }
    }

    /// Hilbert-space dimension of the working system (3 for QRI/QRC, 4 for QRCN).
    pub fn dim(&self) -> usize {
        match self {
            RefrigeratorSpec::Qrcn { .. } => 4,
            _ => 3,
        }
    }
}

/// Decay rates for every jump channel of a spec, in absolute units
/// (gamma0 included).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateSet {
    Qri {
        hot_emit: f64,
        hot_absorb: f64,
        cold_emit: f64,
        cold_absorb: f64,
        work_emit: f64,
        work_absorb: f64,
    },
    Qrc { gamma1: f64, gamma2: f64, gamma3: f64, gamma4: f64 },
    Qrcn { gamma1: f64, gamma2: f64, gamma3_prime: f64, gamma4_prime: f64 },
}

impl RateSet {
    pub fn max_rate(&self) -> f64 {
        match *self {
            RateSet::Qri { hot_emit, hot_absorb, cold_emit, cold_absorb, work_emit, work_absorb } => {
                [hot_emit, hot_absorb, cold_emit, cold_absorb, work_emit, work_absorb]
                    .into_iter()
                    .fold(0.0, f64::max)
            }
            RateSet::Qrc { gamma1, gamma2, gamma3, gamma4 } => {
                [gamma1, gamma2, gamma3, gamma4].into_iter().fold(0.0, f64::max)
            }
            RateSet::Qrcn { gamma1, gamma2, gamma3_prime, gamma4_prime } => {
                [gamma1, gamma2, gamma3_prime, gamma4_prime].into_iter().fold(0.0, f64::max)
            }
        }
    }
}

/// Full rate set for a spec. Occupations come from the bath whose frequency
/// labels the transition.
pub fn rate_set(spec: &RefrigeratorSpec) -> RateSet {
    let g0 = spec.gamma0();
    match spec {
        RefrigeratorSpec::Qri { hot, cold, work, .. } => {
            let (nh, nc, nw) = (hot.occupation().n, cold.occupation().n, work.occupation().n);
            RateSet::Qri {
                hot_emit: g0 * (nh + 1.0),
                hot_absorb: g0 * nh,
                cold_emit: g0 * (nc + 1.0),
                cold_absorb: g0 * nc,
                work_emit: g0 * (nw + 1.0),
                work_absorb: g0 * nw,
            }
        }
        RefrigeratorSpec::Qrc { hot, cold, work, .. } => {
            let (nh, nc, nw) = (hot.occupation().n, cold.occupation().n, work.occupation().n);
            RateSet::Qrc {
                gamma1: g0 * nc * (nh + 1.0),
                gamma2: g0 * nh * (nc + 1.0),
                gamma3: g0 * (nw + 1.0),
                gamma4: g0 * nw,
            }
        }
        RefrigeratorSpec::Qrcn { hot, cold, work1, work2, .. } => {
            let (nh, nc) = (hot.occupation().n, cold.occupation().n);
            let (n1, n2) = (work1.occupation().n, work2.occupation().n);
            RateSet::Qrcn {
                gamma1: g0 * nc * (nh + 1.0),
                gamma2: g0 * nh * (nc + 1.0),
                gamma3_prime: g0 * n2 * (n1 + 1.0),
                gamma4_prime: g0 * n1 * (n2 + 1.0),
            }
        }
    }
}

/// Effective inverse temperature of a composed two-bath channel, together
/// with the steady population ratio it implies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveTemperature {
    pub beta_eff: f64,
    /// exp(-(beta_l*omega_l - beta_r*omega_r)); > 1 signals population inversion.
    pub population_ratio: f64,
}

/// beta_eff = (beta_l*omega_l - beta_r*omega_r) / (omega_l - omega_r).
pub fn effective_pair_temperature(beta_l: f64, omega_l: f64, beta_r: f64, omega_r: f64)
    -> Result<EffectiveTemperature, ModelError>
{
    if ![beta_l, omega_l, beta_r, omega_r].iter().all(|x| x.is_finite()) {
        return Err(ModelError::NonFinite("pair temperature input"));
    }
    if omega_l == omega_r {
        return Err(ModelError::DegenerateWorkPair);
    }
    let weighted = beta_l * omega_l - beta_r * omega_r;
    Ok(EffectiveTemperature {
        beta_eff: weighted / (omega_l - omega_r),
        population_ratio: (-weighted).exp(),
    })
}

/// Synthetic work-bath inverse temperature of a QRCN spec; may be negative.
pub fn synthetic_inverse_temperature(spec: &RefrigeratorSpec) -> Result<f64, ModelError> {
    match spec {
        RefrigeratorSpec::Qrcn { work1, work2, .. } => {
            Ok(effective_pair_temperature(work1.beta, work1.omega, work2.beta, work2.omega)?.beta_eff)
        }
        _ => Err(ModelError::BadFrequencies(
            "synthetic temperature is defined for QRCN specs only".into(),
        )),
    }
}

/// Refrigeration-window diagnostics: the cooling limit and each inequality of
/// the window chain with its truth value.
#[derive(Debug, Clone, PartialEq)]
pub struct CoolingWindow {
    /// beta_s for QRI/QRC, beta_s' (built from beta_sw) for QRCN.
    pub beta_limit: f64,
    /// Synthetic work inverse temperature; None for QRI/QRC.
    pub beta_sw: Option<f64>,
    pub in_window: bool,
    pub ordering: Vec<(&'static str, bool)>,
}

/// Window chain: beta_w < beta_h < beta_c < beta_s (QRI/QRC), or
/// beta_sw < beta_h < beta_c < beta_s' (QRCN). All inequalities strict.
pub fn cooling_window(spec: &RefrigeratorSpec) -> CoolingWindow {
    let hot = spec.hot();
    let cold = spec.cold();
    let omega_w = spec.work_gap();
    // omega_h - omega_w = omega_c > 0, so the limit is always finite.
    let denom = hot.omega - omega_w;
    match spec {
        RefrigeratorSpec::Qri { work, .. } | RefrigeratorSpec::Qrc { work, .. } => {
            let beta_s = (hot.beta * hot.omega - work.beta * omega_w) / denom;
            let ordering = vec![
                ("beta_w < beta_h", work.beta < hot.beta),
                ("beta_h < beta_c", hot.beta < cold.beta),
                ("beta_c < beta_s", cold.beta < beta_s),
            ];
            let in_window = ordering.iter().all(|(_, ok)| *ok);
            CoolingWindow { beta_limit: beta_s, beta_sw: None, in_window, ordering }
        }
        RefrigeratorSpec::Qrcn { .. } => {
            let beta_sw = spec.work_beta_effective();
            let beta_s_prime = (hot.beta * hot.omega - beta_sw * omega_w) / denom;
            let ordering = vec![
                ("beta_sw < beta_h", beta_sw < hot.beta),
                ("beta_h < beta_c", hot.beta < cold.beta),
                ("beta_c < beta_s_prime", cold.beta < beta_s_prime),
            ];
            let in_window = ordering.iter().all(|(_, ok)| *ok);
            CoolingWindow { beta_limit: beta_s_prime, beta_sw: Some(beta_sw), in_window, ordering }
        }
    }
}
