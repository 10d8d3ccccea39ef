//! Spectra and entanglement of a one-dimensional chain of dipole-coupled
//! polar rotors in a static electric field.
//!
//! The chain is modelled on the `{ground, one rotational excitation}`
//! manifold, where the Hamiltonian splits into three tridiagonal blocks.
//! [`oracle`] provides an independent full `4^N` reference for short chains.

pub mod config;
pub mod density;
pub mod entanglement;
pub mod error;
pub mod experiments;
pub mod manifold;
pub mod model;
pub mod oracle;
pub mod scan;
pub mod thermal;
pub mod tridiag;

pub use density::DensityMatrix;
pub use entanglement::{jz_variance, one_vs_rest_l, pair_reduced, pairwise_l_sum, ManifoldDensity};
pub use error::{ChainError, Result};
pub use manifold::{
    build_block_hamiltonian, find_crossing, solve_manifold, spectrum_vs_field, BlockHamiltonian, BlockLabel,
    LevelClass, ManifoldSpectrum, ManifoldState, SubspaceSpectrum,
};
pub use model::{
    dressed_solution, pair_dipole_operator, rotor_energy, site_operator, to_dimensionless, two_molecule_reference,
    DressedSolution, ModelParams, OperatorKind, PhysicalParams, SiteBasis, SiteOperator,
};
pub use scan::ScanResult;
pub use thermal::{thermal_scan, thermal_state, Observable, ThermalSpec};
