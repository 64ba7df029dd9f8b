//! Steady-state simulation of autonomous quantum absorption refrigerators
//! with correlated (two-photon) and uncorrelated (one-photon) heat transfer.
//!
//! Three models share a common bath layout (hot, cold, work at inverse
//! temperatures beta_h < beta_c, with omega_w = omega_h - omega_c):
//!
//! - **QRI** — a qutrit exchanging single photons independently with all
//!   three baths (the conventional absorption refrigerator),
//! - **QRC** — a qutrit whose hot and cold exchanges happen in one correlated
//!   two-photon jump, plus a conventional work bath,
//! - **QRCN** — a four-level system with two independent two-photon channels;
//!   the two work baths compose into a synthetic work bath whose inverse
//!   temperature beta_sw can be negative, widening the cooling window.
//!
//! The crate computes steady states and heat currents from the Lindblad
//! generator, extracts current means and variances by full counting
//! statistics (characteristic polynomial of the tilted Liouvillian), checks
//! them against closed forms and an independent time-propagation oracle, and
//! evaluates the performance bounds: cooling power and noise-to-signal
//! enhancement of QRC over QRI, QRCN's widened cooling limits, and the
//! thermodynamic uncertainty relation Q >= 2.
//!
//! # Examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run --example cooling_window     # windows, beta_s, synthetic temperatures
//! cargo run --example steady_state      # steady states and dissipator currents
//! cargo run --example flux_statistics   # FCS vs closed forms for all models
//! cargo run --example qrc_vs_qri        # cooling-power / NSR ratio scan
//! cargo run --example synthetic_bath    # QRCN vs QRC over the omega' grid
//! cargo run --example tur_check         # TUR factor across the window
//! cargo run --example oracle_validation # char-poly vs time propagation
//! ```
//!
//! # Command line
//!
//! A thin `refrig` binary exposes the same machinery:
//!
//! ```bash
//! refrig report   --config run.json            # one table row, exit 2 out-of-window
//! refrig sweep    --config run.json --out out/ # row-major grid, atomic CSV
//! refrig figure   fig2 --svg --out out/        # built-in figure grids
//! refrig validate --config run.json            # invariant suite, exit 3 on failure
//! ```
//!
//! The JSON config schema is documented in [`cli::config`]. CSV output is
//! deterministic: 12 significant digits, axes first, then metrics in
//! alphabetical order.

pub mod cli;
pub mod fcs;
pub mod liouville;
pub mod metrics;
pub mod model;
pub mod oracle;

mod dd;
mod linalg;

pub use fcs::{flux_statistics_closed_form, flux_statistics_fcs, FluxStatistics};
pub use liouville::{generator, hamiltonian, jump_channels, steady_state, tilted_generator, Bath};
pub use metrics::{compare_qrc_qri, compare_qrcn_qrc, performance_report, sweep};
pub use model::{bose_occupation, cooling_window, RefrigeratorSpec, Variant};
pub use oracle::{oracle_flux_statistics, propagate_tilted};
