//! F(omega) below resonance: the two main lines plus the small satellites.
use qubit_osc::model::{Branch, Settings, Solver, System};
use qubit_osc::observables::FourierOptions;
use qubit_osc::SystemParams;

fn main() -> qubit_osc::Result<()> {
    let p = SystemParams::default().with_omega(0.75);
    let sys = System::new(&p, Settings::default(), Branch::Full)?;
    let ts: Vec<f64> = (0..=15000).map(|i| 0.1 * i as f64).collect();
    let ws: Vec<f64> = (0..=200).map(|i| 0.01 * i as f64).collect();
    let num = sys.fourier(Solver::Numeric, &ts, &ws, &FourierOptions::default())?;
    let lt = sys.fourier(Solver::Longtime, &ts, &ws, &FourierOptions::default())?;
    println!("{:>6} {:>12} {:>12}", "omega", "numeric", "longtime");
    for i in (0..ws.len()).step_by(4) {
        println!("{:6.2} {:12.5} {:12.5}", ws[i], num.values[i], lt.values[i]);
    }
    for (n, m) in [(1, 0), (2, 0), (2, 4), (2, 3), (1, 3), (1, 4)] {
        println!("w{n}{m} = {:.4}", sys.spectrum.w(n, m).abs());
    }
    Ok(())
}
