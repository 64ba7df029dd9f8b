//! Steady states and dissipator energy currents.
//!
//! Solves L(rho) = 0 for each model, shows the populations (the two-photon
//! models disengage their upper levels exactly), and evaluates the per-bath
//! energy currents where a bath has its own dissipator.

use refrig::liouville::{
    channels_for_bath, dissipator_current, generator, hamiltonian, jump_channels, steady_state,
    Bath,
};
use refrig::model::RefrigeratorSpec;

fn main() {
    let specs = [
        RefrigeratorSpec::qri(1.00, 2.0, 0.09, 10.0, 0.90, 0.01).unwrap(),
        RefrigeratorSpec::qrc(1.00, 2.0, 0.09, 10.0, 0.90, 0.01).unwrap(),
        RefrigeratorSpec::qrcn(1.00, 2.0, 0.09, 1.00, 2.0, 10.0, 0.90, 0.01).unwrap(),
    ];

    for spec in &specs {
        let h = hamiltonian(spec);
        let channels = jump_channels(spec);
        let g = generator(&h, &channels).unwrap();
        let rho = steady_state(&g).unwrap();

        println!("{} (dim {}):", spec.variant(), spec.dim());
        let pops: Vec<String> =
            (0..spec.dim()).map(|l| format!("{:.6}", rho.population(l))).collect();
        println!("    populations  [{}]", pops.join(", "));
        println!("    max coherence {:.2e}", rho.max_coherence());

        for bath in [Bath::Hot, Bath::Cold, Bath::Work] {
            let chs = channels_for_bath(&channels, bath);
            if chs.is_empty() {
                println!("    J_{bath:<5} (no independent dissipator; use counting statistics)");
                continue;
            }
            let j = dissipator_current(&rho, &chs, &h).unwrap();
            println!("    J_{bath:<5} = {j:+.6e}");
        }
        println!();
    }
}
