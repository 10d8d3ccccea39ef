//! Checks the one-excitation truncation against the full `4^N` chain.

use rotor_chain::oracle::{validate_manifold, ValidationTolerances};
use rotor_chain::ModelParams;

fn main() -> rotor_chain::Result<()> {
    for n in [3, 4] {
        for v in [0.02, 0.05] {
            let r = validate_manifold(&ModelParams::new(n, v, 0.5)?, ValidationTolerances::default())?;
            println!(
                "N = {n}, v = {v}: eigen dev {:.2e} (bound {:.2e}), representation {:.1e}, ground L' {:.4}",
                r.max_eigenvalue_deviation, r.eigenvalue_bound, r.max_representation_deviation, r.full_ground_max_l_prime
            );
        }
    }
    Ok(())
}
