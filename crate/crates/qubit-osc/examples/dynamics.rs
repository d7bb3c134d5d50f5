//! P(t) at resonance from the full master equation and the two secular approximations.
use qubit_osc::model::{Branch, Settings, Solver, System};
use qubit_osc::SystemParams;

fn main() -> qubit_osc::Result<()> {
    let sys = System::new(&SystemParams::default(), Settings::default(), Branch::Full)?;
    let ts: Vec<f64> = (0..=300).map(|i| i as f64).collect();
    let solvers = [Solver::Numeric, Solver::Fsa, Solver::Psa, Solver::Longtime];
    let curves = solvers.iter().map(|s| sys.population(*s, &ts)).collect::<qubit_osc::Result<Vec<_>>>()?;
    println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "t", "numeric", "fsa", "psa", "longtime");
    for (i, t) in ts.iter().enumerate().step_by(10) {
        print!("{t:6.0}");
        for c in &curves {
            print!(" {:10.6}", c.values[i]);
        }
        println!();
    }
    Ok(())
}
