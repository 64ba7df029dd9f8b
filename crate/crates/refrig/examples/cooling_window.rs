//! Cooling windows and synthetic work-bath temperatures.
//!
//! Builds the three refrigerator models at the reference parameter set,
//! prints each window chain, and scans the synthetic inverse temperature
//! beta_sw(omega') to show where it turns negative and how that widens the
//! cooling window.

use refrig::metrics::cooling_ability_bound;
use refrig::model::{
    cooling_window, effective_pair_temperature, synthetic_inverse_temperature, RefrigeratorSpec,
};

fn main() {
    let qrc = RefrigeratorSpec::qrc(1.00, 2.0, 0.09, 10.0, 0.90, 0.01).unwrap();
    let qri = RefrigeratorSpec::qri(1.00, 2.0, 0.09, 10.0, 0.90, 0.01).unwrap();
    let qrcn = RefrigeratorSpec::qrcn(1.00, 2.0, 0.09, 1.00, 2.0, 10.0, 0.90, 0.01).unwrap();

    for spec in [&qri, &qrc, &qrcn] {
        let w = cooling_window(spec);
        println!("{}: beta_limit = {:.6}, in_window = {}", spec.variant(), w.beta_limit, w.in_window);
        for (label, holds) in &w.ordering {
            println!("    {label:24} {holds}");
        }
        let b = cooling_ability_bound(spec);
        println!(
            "    cooling-ability bound = {:.6} (non-autonomous reference {:.6})",
            b.autonomous, b.non_autonomous
        );
    }

    println!("\nbeta_sw against omega' (beta_w1 = 0.09, beta_w2 = 1.00):");
    println!("{:>10} {:>12} {:>12}", "omega'", "beta_sw", "inverted");
    for k in 0..13 {
        let omega_prime = 0.3 + 0.225 * k as f64;
        let omega_w1 = omega_prime + 9.10;
        let eff = effective_pair_temperature(0.09, omega_w1, 1.00, omega_prime).unwrap();
        println!(
            "{omega_prime:>10.3} {:>12.5} {:>12}",
            eff.beta_eff,
            eff.population_ratio > 1.0
        );
    }

    let bsw = synthetic_inverse_temperature(&qrcn).unwrap();
    println!("\nQRCN at omega' = 2: beta_sw = {bsw:.4} (negative: population inversion)");
    println!(
        "window widens: beta_s = {:.4} -> beta_s' = {:.4}",
        cooling_window(&qrc).beta_limit,
        cooling_window(&qrcn).beta_limit
    );
}
