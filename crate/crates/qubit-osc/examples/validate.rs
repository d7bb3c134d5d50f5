//! Runs the invariant suite at a few parameter points.
use qubit_osc::cli::validate::{run_checks, Mutations};
use qubit_osc::cli::RunConfig;

fn main() -> qubit_osc::Result<()> {
    for (eps, om, kappa) in [(0.0, 1.0, 0.0154), (0.5, 1.118, 0.0154), (0.0, 0.75, 0.0)] {
        let cfg = RunConfig { epsilon: eps, omega: om, kappa, ..RunConfig::default() };
        println!("epsilon={eps} omega={om} kappa={kappa}");
        for c in run_checks(&cfg, &cfg.params(), Mutations::default())? {
            println!("  {:22} {:4} {:10.3e} < {:.1e}", c.name, c.status(), c.value, c.threshold);
        }
    }
    Ok(())
}
