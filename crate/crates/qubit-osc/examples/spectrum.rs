//! Lowest five levels against oscillator frequency, Van Vleck next to exact diagonalization.
use qubit_osc::oracle::{build_hamiltonian, diagonalize, nearest_levels};
use qubit_osc::vanvleck::eigenenergies;
use qubit_osc::SystemParams;

fn main() -> qubit_osc::Result<()> {
    println!("{:>6} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}", "omega", "E0", "E1", "E2", "E3", "E4", "max|dE|");
    for i in 0..=20 {
        let p = SystemParams::default().with_omega(0.5 + 0.05 * i as f64);
        let vv = eigenenergies(&p, 5)?.energies;
        let exact = nearest_levels(&vv, &diagonalize(&build_hamiltonian(&p, 12)?)?.energies);
        let err = vv.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        print!("{:6.3}", p.omega);
        for e in &vv {
            print!(" {e:10.6}");
        }
        println!(" {err:10.2e}");
    }
    Ok(())
}
