//! System Hamiltonians, jump channels, vectorized (and counting-field-tilted)
//! Liouvillian generators, steady states, and dissipator energy currents.
//!
//! Vectorization is column-stacking: `vec(rho)[j*d + i] = rho[i,j]`, so
//! `vec(A rho B) = kron(B^T, A) vec(rho)`. Counting weights are the signed
//! energy a jump moves from a bath into the working system; currents entering
//! the system are positive.

use ndarray::Array2;
use num_complex::Complex64;
use std::fmt;

use crate::linalg::{matvec, Lu};
use crate::model::{rate_set, RateSet, RefrigeratorSpec};

/// Dense operator on the working system's Hilbert space.
pub type Operator = Array2<Complex64>;

#[derive(Debug, Clone, PartialEq)]
pub enum EngineError {
    DimensionMismatch(String),
    /// The generator's kernel is not one-dimensional on its dissipative sector.
    NonUniqueSteadyState,
    /// steady_state requires the untilted generator.
    TiltedGenerator,
    /// |L(rho)|_inf exceeded the steady-state residual budget.
    ResidualTooLarge(f64),
    /// dissipator_current needs channels that all touch exactly one bath.
    MixedBathChannels,
    InvalidDensity(String),
    UnknownBath(String),
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::DimensionMismatch(msg) => write!(f, "dimension mismatch: {msg}"),
            EngineError::NonUniqueSteadyState => write!(f, "non-unique steady state"),
            EngineError::TiltedGenerator => {
                write!(f, "steady state is defined for the untilted generator only")
            }
            EngineError::ResidualTooLarge(r) => {
                write!(f, "steady-state residual {r:.3e} exceeds budget")
            }
            EngineError::MixedBathChannels => {
                write!(f, "channel list mixes baths; dissipator current needs a single bath")
            }
            EngineError::InvalidDensity(msg) => write!(f, "invalid density matrix: {msg}"),
            EngineError::UnknownBath(label) => write!(f, "unknown bath label '{label}'"),
        }
    }
}

impl std::error::Error for EngineError {}

/// Counting-field bath labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bath {
    Hot,
    Cold,
    /// The work bath of QRI/QRC, or the joint work pair of QRCN counted with
    /// a common field.
    Work,
}

impl Bath {
    pub fn as_str(&self) -> &'static str {
        match self {
            Bath::Hot => "hot",
            Bath::Cold => "cold",
            Bath::Work => "work",
        }
    }
}

impl std::str::FromStr for Bath {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "hot" | "h" => Ok(Bath::Hot),
            "cold" | "c" => Ok(Bath::Cold),
            "work" | "w" => Ok(Bath::Work),
            other => Err(EngineError::UnknownBath(other.to_string())),
        }
    }
}

impl fmt::Display for Bath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Counting fields per bath; all-zero means the plain generator.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChiVector {
    pub hot: f64,
    pub cold: f64,
    pub work: f64,
}

impl ChiVector {
    pub fn single(bath: Bath, value: f64) -> ChiVector {
        let mut chi = ChiVector::default();
        match bath {
            Bath::Hot => chi.hot = value,
            Bath::Cold => chi.cold = value,
            Bath::Work => chi.work = value,
        }
        chi
    }

    pub fn get(&self, bath: Bath) -> f64 {
        match bath {
            Bath::Hot => self.hot,
            Bath::Cold => self.cold,
            Bath::Work => self.work,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.hot == 0.0 && self.cold == 0.0 && self.work == 0.0
    }
}

/// A jump operator, its decay rate, and the signed energy quanta it moves out
/// of each bath into the system.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpChannel {
    pub jump: Operator,
    pub rate: f64,
    pub counting_weights: Vec<(Bath, f64)>,
}

impl JumpChannel {
    /// Total counting phase exponent sum_b chi_b * w_b.
    fn phase_exponent(&self, chi: &ChiVector) -> f64 {
        self.counting_weights.iter().map(|(b, w)| chi.get(*b) * w).sum()
    }
}

/// Vectorized (possibly tilted) Liouvillian.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorMatrix {
    pub entries: Array2<Complex64>,
    /// Counting fields the generator was built at (all-zero when untilted).
    pub chi: ChiVector,
}

impl GeneratorMatrix {
    pub fn dim2(&self) -> usize {
        self.entries.nrows()
    }
}

/// Validated density matrix: Hermitian, unit trace, nonnegative within
/// numerical tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub entries: Array2<Complex64>,
}

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const POSITIVITY_TOL: f64 = 1e-10;

impl DensityMatrix {
    pub fn try_new(entries: Array2<Complex64>) -> Result<Self, EngineError> {
        let (rows, cols) = entries.dim();
        if rows != cols {
            return Err(EngineError::InvalidDensity(format!("not square: {rows}x{cols}")));
        }
        let mut trace = Complex64::new(0.0, 0.0);
        for i in 0..rows {
            trace += entries[[i, i]];
            for j in 0..rows {
                let asym = (entries[[i, j]] - entries[[j, i]].conj()).norm();
                if asym > HERMITICITY_TOL {
                    return Err(EngineError::InvalidDensity(format!(
                        "Hermiticity violated at ({i},{j}) by {asym:.3e}"
                    )));
                }
            }
        }
        if (trace - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(EngineError::InvalidDensity(format!("trace {trace} is not 1")));
        }
        // Gershgorin lower bound on the spectrum
        for i in 0..rows {
            let radius: f64 =
                (0..rows).filter(|&j| j != i).map(|j| entries[[i, j]].norm()).sum();
            if entries[[i, i]].re - radius < -POSITIVITY_TOL {
                return Err(EngineError::InvalidDensity(format!(
                    "eigenvalue bound {:.3e} below -{POSITIVITY_TOL:.0e}",
                    entries[[i, i]].re - radius
                )));
            }
        }
        Ok(DensityMatrix { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Population of level l.
    pub fn population(&self, l: usize) -> f64 {
        self.entries[[l, l]].re
    }

    /// Largest off-diagonal magnitude.
    pub fn max_coherence(&self) -> f64 {
        let d = self.dim();
        let mut max = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    max = max.max(self.entries[[i, j]].norm());
                }
            }
        }
        max
    }
}

/// |i><j| on a d-dimensional space.
pub fn ketbra(d: usize, i: usize, j: usize) -> Operator {
    let mut m = Array2::zeros((d, d));
    m[[i, j]] = Complex64::new(1.0, 0.0);
    m
}

/// Conjugate transpose.
pub fn dagger(m: &Operator) -> Operator {
    let mut out = Array2::zeros((m.ncols(), m.nrows()));
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out[[j, i]] = m[[i, j]].conj();
        }
    }
    out
}

/// `vec(rho)[j*d + i] = rho[i,j]` (column stacking).
pub fn vec_density(rho: &Array2<Complex64>) -> Vec<Complex64> {
    let d = rho.nrows();
    let mut v = vec![Complex64::new(0.0, 0.0); d * d];
    for j in 0..d {
        for i in 0..d {
            v[j * d + i] = rho[[i, j]];
        }
    }
    v
}

/// Inverse of [`vec_density`].
pub fn unvec_density(v: &[Complex64]) -> Array2<Complex64> {
    let d2 = v.len();
    let d = (d2 as f64).sqrt().round() as usize;
    assert_eq!(d * d, d2, "length must be a perfect square");
    let mut rho = Array2::zeros((d, d));
    for j in 0..d {
        for i in 0..d {
            rho[[i, j]] = v[j * d + i];
        }
    }
    rho
}

/// kron(outer, inner) with the column-stacking index layout used here.
fn kron(outer: &Operator, inner: &Operator) -> Array2<Complex64> {
    let (po, qo) = outer.dim();
    let (pi, qi) = inner.dim();
    let mut out = Array2::zeros((po * pi, qo * qi));
    for a in 0..po {
        for b in 0..qo {
            let x = outer[[a, b]];
            if x == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in 0..pi {
                for e in 0..qi {
                    out[[a * pi + c, b * qi + e]] = x * inner[[c, e]];
                }
            }
        }
    }
    out
}

/// Diagonal system Hamiltonian: {0, omega_h - omega_c, omega_h} for the qutrit
/// models, with omega_w1 appended for QRCN.
pub fn hamiltonian(spec: &RefrigeratorSpec) -> Operator {
    let hot = spec.hot();
    let cold = spec.cold();
    let d = spec.dim();
    let mut h = Array2::zeros((d, d));
    h[[1, 1]] = Complex64::new(hot.omega - cold.omega, 0.0);
    h[[2, 2]] = Complex64::new(hot.omega, 0.0);
    if let RefrigeratorSpec::Qrcn { work1, .. } = spec {
        h[[3, 3]] = Complex64::new(work1.omega, 0.0);
    }
    h
}

/// Jump channels with decay rates and counting weights.
///
/// QRI exposes six single-photon channels; QRC and QRCN expose four channels
/// each, the hot-cold pair being a correlated two-photon process whose weights
/// touch both baths at once.
pub fn jump_channels(spec: &RefrigeratorSpec) -> Vec<JumpChannel> {
    let hot = spec.hot();
    let cold = spec.cold();
    let omega_w = spec.work_gap();
    let d = spec.dim();
    match rate_set(spec) {
        RateSet::Qri { hot_emit, hot_absorb, cold_emit, cold_absorb, work_emit, work_absorb } => {
            let b_h = ketbra(d, 0, 2);
            let b_c = ketbra(d, 1, 2);
            let b_w = ketbra(d, 0, 1);
            vec![
                JumpChannel {
                    jump: b_h.clone(),
                    rate: hot_emit,
                    counting_weights: vec![(Bath::Hot, -hot.omega)],
                },
                JumpChannel {
                    jump: dagger(&b_h),
                    rate: hot_absorb,
                    counting_weights: vec![(Bath::Hot, hot.omega)],
                },
                JumpChannel {
                    jump: b_c.clone(),
                    rate: cold_emit,
                    counting_weights: vec![(Bath::Cold, -cold.omega)],
                },
                JumpChannel {
                    jump: dagger(&b_c),
                    rate: cold_absorb,
                    counting_weights: vec![(Bath::Cold, cold.omega)],
                },
                JumpChannel {
                    jump: b_w.clone(),
                    rate: work_emit,
                    counting_weights: vec![(Bath::Work, -omega_w)],
                },
                JumpChannel {
                    jump: dagger(&b_w),
                    rate: work_absorb,
                    counting_weights: vec![(Bath::Work, omega_w)],
                },
            ]
        }
        RateSet::Qrc { gamma1, gamma2, gamma3, gamma4 } => {
            let b_hc = ketbra(d, 0, 1);
            let b_w = ketbra(d, 0, 1);
            vec![
                // gamma1 absorbs omega_c from the cold bath and emits omega_h
                // into the hot bath while the system drops |1> -> |0>
                JumpChannel {
                    jump: b_hc.clone(),
                    rate: gamma1,
                    counting_weights: vec![(Bath::Cold, cold.omega), (Bath::Hot, -hot.omega)],
                },
                JumpChannel {
                    jump: dagger(&b_hc),
                    rate: gamma2,
                    counting_weights: vec![(Bath::Cold, -cold.omega), (Bath::Hot, hot.omega)],
                },
                JumpChannel {
                    jump: b_w.clone(),
                    rate: gamma3,
                    counting_weights: vec![(Bath::Work, -omega_w)],
                },
                JumpChannel {
                    jump: dagger(&b_w),
                    rate: gamma4,
                    counting_weights: vec![(Bath::Work, omega_w)],
                },
            ]
        }
        RateSet::Qrcn { gamma1, gamma2, gamma3_prime, gamma4_prime } => {
            let b_hc = ketbra(d, 0, 1);
            let b_ww = ketbra(d, 0, 1);
            vec![
                JumpChannel {
                    jump: b_hc.clone(),
                    rate: gamma1,
                    counting_weights: vec![(Bath::Cold, cold.omega), (Bath::Hot, -hot.omega)],
                },
                JumpChannel {
                    jump: dagger(&b_hc),
                    rate: gamma2,
                    counting_weights: vec![(Bath::Cold, -cold.omega), (Bath::Hot, hot.omega)],
                },
                // the work pair exchanges omega_w1 with one bath and omega_w2
                // with the other; counted jointly it moves omega_w1 - omega_w2
                JumpChannel {
                    jump: b_ww.clone(),
                    rate: gamma3_prime,
                    counting_weights: vec![(Bath::Work, -omega_w)],
                },
                JumpChannel {
                    jump: dagger(&b_ww),
                    rate: gamma4_prime,
                    counting_weights: vec![(Bath::Work, omega_w)],
                },
            ]
        }
    }
}

/// Counting-field-tilted vectorized generator.
///
/// Each sandwich term J rho J^dagger picks up exp(i sum_b chi_b w_b); at
/// chi = 0 this reduces bitwise to the plain generator.
pub fn tilted_generator(
    h: &Operator,
    channels: &[JumpChannel],
    chi: ChiVector,
) -> Result<GeneratorMatrix, EngineError> {
    let d = h.nrows();
    if h.ncols() != d {
        return Err(EngineError::DimensionMismatch(format!(
            "Hamiltonian must be square, got {}x{}",
            h.nrows(),
            h.ncols()
        )));
    }
    for (k, ch) in channels.iter().enumerate() {
        if ch.jump.dim() != (d, d) {
            return Err(EngineError::DimensionMismatch(format!(
                "channel {k} jump is {:?}, Hamiltonian is {d}x{d}",
                ch.jump.dim()
            )));
        }
    }
    let eye: Operator = Array2::eye(d);
    let minus_i = Complex64::new(0.0, -1.0);
    // -i [H, .] term; kept even though it does not move populations, so the
    // trace and Hermiticity invariants hold on the full matrix
    let mut l = kron(&eye, h);
    l -= &kron(&h.t().to_owned(), &eye);
    l.mapv_inplace(|z| minus_i * z);

    for ch in channels {
        let rate = Complex64::new(ch.rate, 0.0);
        let phase = Complex64::from_polar(1.0, ch.phase_exponent(&chi));
        let j_conj = ch.jump.mapv(|z| z.conj());
        let jdj = dagger(&ch.jump).dot(&ch.jump);
        let half = Complex64::new(0.5, 0.0);

        let sandwich = kron(&j_conj, &ch.jump);
        l.scaled_add(rate * phase, &sandwich);
        l.scaled_add(-rate * half, &kron(&eye, &jdj));
        l.scaled_add(-rate * half, &kron(&jdj.t().to_owned(), &eye));
    }
    Ok(GeneratorMatrix { entries: l, chi })
}

/// Untilted generator of `rho_dot = -i[H, rho] + sum_k rate_k D[J_k](rho)`.
pub fn generator(h: &Operator, channels: &[JumpChannel]) -> Result<GeneratorMatrix, EngineError> {
    tilted_generator(h, channels, ChiVector::default())
}

/// Apply the generator to a density matrix (for tests and the oracle).
pub fn apply_generator(g: &GeneratorMatrix, rho: &Array2<Complex64>) -> Array2<Complex64> {
    let v = vec_density(rho);
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    matvec(&g.entries, &v, &mut out);
    unvec_density(&out)
}

/// Levels whose population row and column in the generator are structurally
/// zero; such levels hold conserved population and take no part in the
/// dissipative dynamics.
pub fn disengaged_levels(g: &GeneratorMatrix) -> Vec<usize> {
    let n = g.dim2();
    let d = (n as f64).sqrt().round() as usize;
    let max_abs = g.entries.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tol = max_abs * 1e-14;
    (0..d)
        .filter(|&l| {
            let idx = l * d + l;
            let row_zero = (0..n).all(|j| g.entries[[idx, j]].norm() <= tol);
            let col_zero = (0..n).all(|i| g.entries[[i, idx]].norm() <= tol);
            row_zero && col_zero
        })
        .collect()
}

/// Residual budget for the steady-state solve.
pub const STEADY_STATE_RESIDUAL_TOL: f64 = 1e-11;

/// Steady state of an untilted generator: solves L(rho) = 0 with Tr rho = 1 by
/// replacing one population row with the trace constraint.
///
/// Levels untouched by every jump operator carry conserved population; they
/// are assigned exactly zero and the kernel must be one-dimensional on the
/// remaining dissipative sector, otherwise [`EngineError::NonUniqueSteadyState`].
pub fn steady_state(g: &GeneratorMatrix) -> Result<DensityMatrix, EngineError> {
    if !g.chi.is_zero() {
        return Err(EngineError::TiltedGenerator);
    }
    let n = g.dim2();
    let d = (n as f64).sqrt().round() as usize;
    if d * d != n {
        return Err(EngineError::DimensionMismatch(format!("generator size {n} is not a square")));
    }

    let max_abs = g.entries.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tol = max_abs * 1e-14;

    let mut engaged: Vec<usize> = {
        let dis = disengaged_levels(g);
        (0..d).filter(|l| !dis.contains(l)).collect()
    };
    if engaged.is_empty() {
        return Err(EngineError::NonUniqueSteadyState);
    }

    // vec indices of the engaged block, and closure of the block under L
    let sub_indices =
        |levels: &[usize]| -> Vec<usize> {
            let mut v = Vec::with_capacity(levels.len() * levels.len());
            for &j in levels {
                for &i in levels {
                    v.push(j * d + i);
                }
            }
            v
        };
    let mut indices = sub_indices(&engaged);
    let closed = {
        let inside = |idx: usize| indices.contains(&idx);
        indices.iter().all(|&col| {
            (0..n).all(|row| inside(row) || g.entries[[row, col]].norm() <= tol)
        })
    };
    if !closed {
        // fall back to the full space; the nullity check below decides
        engaged = (0..d).collect();
        indices = sub_indices(&engaged);
    }

    let m = indices.len();
    let mut l_sub = Array2::zeros((m, m));
    for (r, &ri) in indices.iter().enumerate() {
        for (c, &ci) in indices.iter().enumerate() {
            l_sub[[r, c]] = g.entries[[ri, ci]];
        }
    }

    let lu = Lu::factor(&l_sub).map_err(|_| EngineError::NonUniqueSteadyState)?;
    if lu.near_null_count(1e-10) != 1 {
        return Err(EngineError::NonUniqueSteadyState);
    }

    // replace the first population row with the trace constraint
    let de = engaged.len();
    for c in 0..m {
        l_sub[[0, c]] = Complex64::new(0.0, 0.0);
    }
    for k in 0..de {
        l_sub[[0, k * de + k]] = Complex64::new(1.0, 0.0);
    }
    let mut rhs = vec![Complex64::new(0.0, 0.0); m];
    rhs[0] = Complex64::new(1.0, 0.0);
    let lu = Lu::factor(&l_sub).map_err(|_| EngineError::NonUniqueSteadyState)?;
    let x = lu.solve(&rhs).map_err(|_| EngineError::NonUniqueSteadyState)?;

    let mut rho = Array2::zeros((d, d));
    for (k, &idx) in indices.iter().enumerate() {
        let (j, i) = (idx / d, idx % d);
        rho[[i, j]] = x[k];
    }

    // residual against the full generator
    let v = vec_density(&rho);
    let mut resid = vec![Complex64::new(0.0, 0.0); n];
    matvec(&g.entries, &v, &mut resid);
    let res_inf = resid.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if res_inf > STEADY_STATE_RESIDUAL_TOL {
        return Err(EngineError::ResidualTooLarge(res_inf));
    }

    DensityMatrix::try_new(rho)
}

/// Energy current from bath x into the system: Tr(D_x(sigma) H).
///
/// All channels must belong to the same single bath; correlated two-bath
/// channels are rejected because no per-bath dissipator exists for them.
pub fn dissipator_current(
    sigma: &DensityMatrix,
    channels: &[JumpChannel],
    h: &Operator,
) -> Result<f64, EngineError> {
    if channels.is_empty() {
        return Err(EngineError::MixedBathChannels);
    }
    let mut bath: Option<Bath> = None;
    for ch in channels {
        if ch.counting_weights.len() != 1 {
            return Err(EngineError::MixedBathChannels);
        }
        let b = ch.counting_weights[0].0;
        match bath {
            None => bath = Some(b),
            Some(prev) if prev != b => return Err(EngineError::MixedBathChannels),
            _ => {}
        }
    }
    let d = sigma.dim();
    let mut diss = Array2::<Complex64>::zeros((d, d));
    for ch in channels {
        let rate = Complex64::new(ch.rate, 0.0);
        let jd = dagger(&ch.jump);
        let jdj = jd.dot(&ch.jump);
        let sandwich = ch.jump.dot(&sigma.entries).dot(&jd);
        let acomm = jdj.dot(&sigma.entries) + sigma.entries.dot(&jdj);
        let half = Complex64::new(0.5, 0.0);
        diss.scaled_add(rate, &(sandwich - acomm.mapv(|z| half * z)));
    }
    let mut current = Complex64::new(0.0, 0.0);
    for i in 0..d {
        for k in 0..d {
            current += diss[[i, k]] * h[[k, i]];
        }
    }
    Ok(current.re)
}

/// Channels of one bath, for [`dissipator_current`]. Returns channels whose
/// counting weights touch exactly the requested bath and nothing else.
pub fn channels_for_bath(channels: &[JumpChannel], bath: Bath) -> Vec<JumpChannel> {
    channels
        .iter()
        .filter(|ch| ch.counting_weights.len() == 1 && ch.counting_weights[0].0 == bath)
        .cloned()
        .collect()
}
