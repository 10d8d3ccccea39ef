//! Laboratory units to the dimensionless model for a KRb-like chain.

use rotor_chain::model::zero_field_hop;
use rotor_chain::{to_dimensionless, PhysicalParams};

fn main() -> rotor_chain::Result<()> {
    for field in [0.0, 1e5, 1e6] {
        let krb = PhysicalParams { n_molecules: 10, dipole_debye: 1.2, b_ghz: 10.0, r_nm: 5.0, field_v_per_m: field };
        let p = to_dimensionless(&krb)?;
        println!("E = {field:>8.0e} V/m: v = {:.4}, e_z = {:.4}, |hop| / 2B = {:.4}", p.v_dip, p.e_z, zero_field_hop(&p).abs() / 2.0);
    }
    Ok(())
}
