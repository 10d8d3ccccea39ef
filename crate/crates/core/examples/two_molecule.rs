//! Two molecules at zero field: exact levels, entanglement and `J_z` spread.

use rotor_chain::entanglement::pair_log_negativity;
use rotor_chain::experiments::two_molecule_table;
use rotor_chain::{two_molecule_reference, ModelParams};

fn main() -> rotor_chain::Result<()> {
    let params = ModelParams::new(2, 0.1, 0.0)?;
    let table = two_molecule_table(&params)?;
    print!("{}", table.to_csv());

    let r = two_molecule_reference(&params)?;
    println!("\nE1- - E0- = {:.6}", r.e1_minus - r.e0_minus);
    println!("L(psi0-) = {:.6}", r.log_neg_psi0_minus);
    println!("L(psi1- mixture) = {:.6}", r.log_neg_psi1_minus_mixture);

    // the same number straight from the manifold density of the lowest level
    let spectrum = rotor_chain::solve_manifold(&params)?;
    let (class, rho) = rotor_chain::experiments::lowest_excited_density(&spectrum)?;
    println!("lowest excited class {}: L_12 = {:.6}", class.name(), pair_log_negativity(&rho, 1, 2)?);
    Ok(())
}
