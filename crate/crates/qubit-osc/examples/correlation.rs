//! Symmetrized correlation spectrum at the two main lines across the bias.
use qubit_osc::model::{Branch, Settings, Solver, System};
use qubit_osc::observables::{symmetrized_correlation, FourierOptions};
use qubit_osc::SystemParams;

fn main() -> qubit_osc::Result<()> {
    let ts: Vec<f64> = (0..=15000).map(|i| 0.1 * i as f64).collect();
    let ws: Vec<f64> = (0..=400).map(|i| 0.005 * i as f64).collect();
    println!("{:>6} {:>8} {:>8} {:>12} {:>12}", "eps", "w10", "w20", "S(w10)", "S(w20)");
    for i in 0..=12 {
        let p = SystemParams::default().with_epsilon(0.1 * i as f64);
        let sys = System::new(&p, Settings::default(), Branch::Full)?;
        let (w10, w20) = (sys.spectrum.w(1, 0), sys.spectrum.w(2, 0));
        let c = symmetrized_correlation(&p, Settings::default(), Solver::Longtime, &ts, &ws, &FourierOptions::default())?;
        println!("{:6.2} {w10:8.4} {w20:8.4} {:12.4} {:12.4}", p.epsilon, c.spectrum.value_near(w10), c.spectrum.value_near(w20));
    }
    Ok(())
}
