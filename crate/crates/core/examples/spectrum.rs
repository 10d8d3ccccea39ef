//! Manifold spectrum of a 50-molecule chain as the field is ramped.

use rotor_chain::{solve_manifold, spectrum_vs_field, BlockLabel, ModelParams};

fn main() -> rotor_chain::Result<()> {
    let params = ModelParams::new(50, 0.1, 0.0)?;
    let grid: Vec<f64> = (0..=10).map(|i| 2.0 * i as f64).collect();
    let scan = spectrum_vs_field(&params, &grid)?;
    println!("{} rows in columns {:?}", scan.rows.len(), scan.header);

    println!("{:>6} {:>12} {:>12} {:>12}", "e_z", "HPlus[0]", "HOne[0]", "gap");
    for &e in &grid {
        let s = solve_manifold(&params.with_field(e))?;
        let plus = s.subspace(BlockLabel::HPlus).lowest();
        let one = s.subspace(BlockLabel::HOneUp).lowest();
        println!("{e:>6.1} {plus:>12.6} {one:>12.6} {:>12.6}", s.lowest_gap());
    }
    Ok(())
}
