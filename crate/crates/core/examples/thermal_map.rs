//! One-vs-rest entanglement of a thermal chain over temperature and field.

use rotor_chain::thermal::omitted_weight_estimate;
use rotor_chain::{thermal_scan, ModelParams, Observable};

fn main() -> rotor_chain::Result<()> {
    let params = ModelParams::new(10, 0.1, 0.0)?;
    let temps: Vec<f64> = (0..6).map(|i| 0.2 + 0.2 * i as f64).collect();
    let fields: Vec<f64> = (0..5).map(|i| 5.0 * i as f64).collect();
    let scan = thermal_scan(&params, &temps, &fields, &[Observable::LPrimeAt(5)])?;

    let values = scan.column_f64("value").unwrap();
    print!("{:>6}", "T\\e_z");
    fields.iter().for_each(|e| print!("{e:>12.1}"));
    println!();
    for (i, t) in temps.iter().enumerate() {
        print!("{t:>6.2}");
        values[i * fields.len()..(i + 1) * fields.len()].iter().for_each(|v| print!("{v:>12.3e}"));
        println!();
    }
    println!("omitted weight at T = 1.2: {:.2e}", omitted_weight_estimate(&params, 1.2));
    Ok(())
}
