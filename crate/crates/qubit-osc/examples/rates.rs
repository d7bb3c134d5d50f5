//! Relaxation rate across resonance in the biased case, with the dephasing rates.
use qubit_osc::model::{Branch, Settings, System};
use qubit_osc::SystemParams;
use std::f64::consts::PI;

fn main() -> qubit_osc::Result<()> {
    let base = SystemParams::default().with_epsilon(0.5);
    println!("Delta_b = {:.4}", base.delta_b());
    println!("{:>6} {:>10} {:>10} {:>10} {:>10} {:>10}", "omega", "gamma_r", "second", "gamma01", "gamma02", "gamma12+");
    for i in 0..=40 {
        let p = base.with_omega(0.9 + 0.0125 * i as f64);
        let sys = System::new(&p, Settings::default(), Branch::Full)?;
        let r = sys.relaxation()?;
        let pair = &sys.dephasing()?.pairs[0];
        println!(
            "{:6.4} {:10.6} {:10.6} {:10.6} {:10.6} {:10.6}",
            p.omega,
            r.gamma_r,
            r.second,
            -PI * sys.rates.get(0, 1, 0, 1),
            -PI * sys.rates.get(0, 2, 0, 2),
            pair.gamma_plus()
        );
    }
    Ok(())
}
