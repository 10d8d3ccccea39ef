//! Field at which the lowest `m = 0` and `m = +-1` excitations swap.

use rotor_chain::manifold::crossing_map;
use rotor_chain::{find_crossing, ModelParams};

fn main() -> rotor_chain::Result<()> {
    for (n, v) in [(10, 0.1), (50, 0.1), (50, 0.3)] {
        let params = ModelParams::new(n, v, 0.0)?;
        let e_star = find_crossing(&params, 0.0, 20.0)?;
        println!("N = {n:>2}, v = {v}: e_z* = {e_star:.8}");
    }

    let params = ModelParams::new(6, 0.1, 0.0)?;
    let grid: Vec<f64> = (0..=80).map(|i| 0.25 * i as f64).collect();
    let all = crossing_map(&params, &grid)?;
    println!("N = 6: {} level pairs change order on [0, 20]", all.len());
    for c in all.iter().take(5) {
        println!("  HPlus[{}] / HOne[{}] between {} and {}", c.plus_level, c.one_level, c.e_z_before, c.e_z_after);
    }
    Ok(())
}
