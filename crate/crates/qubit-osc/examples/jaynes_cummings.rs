//! Full model against the rotating-wave branch at resonance: line weights and decay.
use qubit_osc::model::{Branch, Settings, Solver, System};
use qubit_osc::observables::FourierOptions;
use qubit_osc::SystemParams;

fn main() -> qubit_osc::Result<()> {
    let ts: Vec<f64> = (0..=15000).map(|i| 0.1 * i as f64).collect();
    let ws: Vec<f64> = (0..=400).map(|i| 0.005 * i as f64).collect();
    for om in [1.0, 1.5] {
        let p = SystemParams::default().with_omega(om);
        for (branch, solver) in [(Branch::Full, Solver::Numeric), (Branch::JaynesCummings, Solver::JcNumeric)] {
            let sys = System::new(&p, Settings::default(), branch)?;
            let f = sys.fourier(solver, &ts, &ws, &FourierOptions::default())?;
            let (w10, w20) = (sys.spectrum.w(1, 0), sys.spectrum.w(2, 0));
            let tail = sys.population(solver, &[0.0, 200.0])?.values[1];
            println!(
                "Omega={om} {solver:>10}: w10={w10:.4} F={:8.3}  w20={w20:.4} F={:8.3}  P(200)={tail:+.4}",
                f.value_near(w10),
                f.value_near(w20)
            );
        }
    }
    Ok(())
}
