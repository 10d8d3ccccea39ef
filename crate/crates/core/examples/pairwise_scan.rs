//! Pairwise and one-vs-rest entanglement of the lowest excited level vs field.

use rotor_chain::experiments::pairwise_scan;
use rotor_chain::scan::Cell;
use rotor_chain::ModelParams;

fn main() -> rotor_chain::Result<()> {
    let params = ModelParams::new(50, 0.1, 0.0)?;
    let grid: Vec<f64> = (0..=20).map(|i| i as f64).collect();
    let scan = pairwise_scan(&params, &grid, &[1, 10, 25], &[1, 26])?;

    let col = |name: &str| scan.column_index(name).unwrap();
    let (e, class, obs, idx, val) = (col("e_z"), col("level_class"), col("observable"), col("index"), col("value"));
    for row in &scan.rows {
        let name = row[obs].as_str().unwrap();
        if name == "L_d" || name == "L_prime" {
            let index = match &row[idx] {
                Cell::Int(i) => *i,
                _ => 0,
            };
            println!(
                "e_z = {:>4.1}  {:<5} {:<8}{:<3} {:.6}",
                row[e].as_f64().unwrap(),
                row[class].as_str().unwrap(),
                name,
                index,
                row[val].as_f64().unwrap()
            );
        }
    }
    Ok(())
}
