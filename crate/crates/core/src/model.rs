//! Units, the truncated single-rotor basis and its operators.
//!
//! Every molecule is a rigid rotor restricted to `j <= 1`, so each site carries
//! exactly four states. Energies are in units of the rotational constant `B`
//! (set to 1 internally). The dipole scale is `v = mu^2 / (4 pi eps0 r^3 B)`
//! and the field enters through the dimensionless amplitude
//! `e_z = E_z 4 sqrt(3) pi eps0 r^3 / mu`, which makes the single-site Stark
//! element `mu E_z / sqrt(3)` equal to `e_z v / 3` in units of `B`.

use nalgebra::{DMatrix, DVector, Matrix2, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::density::DensityMatrix;
use crate::error::{domain, Result};

/// Dimension of the truncated single-rotor space.
pub const SITE_DIM: usize = 4;

const EPSILON_0: f64 = 8.854_187_818_8e-12; // F/m
const DEBYE: f64 = 3.335_640_952e-30; // C m
const PLANCK: f64 = 6.626_070_15e-34; // J s

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Dimensionless description of a uniform chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n_molecules: usize,
    /// Rotational constant. Always 1: energies are reported in units of `B`.
    pub b_rot: f64,
    pub v_dip: f64,
    pub e_z: f64,
}

impl ModelParams {
    pub fn new(n_molecules: usize, v_dip: f64, e_z: f64) -> Result<Self> {
        let p = Self { n_molecules, b_rot: 1.0, v_dip, e_z };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_molecules < 2 {
            return domain(format!("chain needs N >= 2 molecules, got {}", self.n_molecules));
        }
        if !(self.v_dip.is_finite() && self.v_dip > 0.0) {
            return domain(format!("dipole scale v must be finite and > 0, got {}", self.v_dip));
        }
        if !(self.e_z.is_finite() && self.e_z >= 0.0) {
            return domain(format!("field e_z must be finite and >= 0, got {}", self.e_z));
        }
        if self.b_rot != 1.0 {
            return domain("b_rot is the energy unit and must be 1");
        }
        Ok(())
    }

    pub fn with_field(&self, e_z: f64) -> Self {
        Self { e_z, ..*self }
    }

    /// Off-diagonal Stark element `mu E_z / sqrt(3)` in units of `B`.
    pub fn stark_coupling(&self) -> f64 {
        self.e_z * self.v_dip / 3.0
    }
}

/// Laboratory-unit description of a chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub n_molecules: usize,
    pub dipole_debye: f64,
    pub b_ghz: f64,
    pub r_nm: f64,
    pub field_v_per_m: f64,
}

pub fn rotor_energy(j: u32) -> f64 {
    let j = j as f64;
    j * (j + 1.0)
}

/// Converts laboratory units to the dimensionless model (CODATA constants).
pub fn to_dimensionless(p: &PhysicalParams) -> Result<ModelParams> {
    for (name, value) in [("dipole_debye", p.dipole_debye), ("b_ghz", p.b_ghz), ("r_nm", p.r_nm)] {
        if !(value.is_finite() && value > 0.0) {
            return domain(format!("{name} must be finite and > 0, got {value}"));
        }
    }
    if !(p.field_v_per_m.is_finite() && p.field_v_per_m >= 0.0) {
        return domain(format!("field_v_per_m must be finite and >= 0, got {}", p.field_v_per_m));
    }
    let mu = p.dipole_debye * DEBYE;
    let r = p.r_nm * 1e-9;
    let b_joule = PLANCK * p.b_ghz * 1e9;
    let four_pi_eps0 = 4.0 * std::f64::consts::PI * EPSILON_0;
    let v_dip = mu * mu / (four_pi_eps0 * r.powi(3) * b_joule);
    let e_z = p.field_v_per_m * 3f64.sqrt() * four_pi_eps0 * r.powi(3) / mu;
    ModelParams::new(p.n_molecules, v_dip, e_z)
}

/// Nearest-neighbour exchange element `<1,0;0,0|V|0,0;1,0>` at zero field,
/// in units of `B`.
pub fn zero_field_hop(params: &ModelParams) -> f64 {
    -2.0 / 3.0 * params.v_dip
}

/// Single-molecule Stark problem projected on `{|0,0>, |1,0>}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedSolution {
    pub lambda: f64,
    pub cos_phi: f64,
    pub sin_phi: f64,
    pub e_minus: f64,
    pub e_plus: f64,
}

impl DressedSolution {
    /// `|->` and `|+>` as (|0,0>, |1,0>) amplitude pairs.
    pub fn minus_state(&self) -> [f64; 2] {
        [self.cos_phi, self.sin_phi]
    }

    pub fn plus_state(&self) -> [f64; 2] {
        [-self.sin_phi, self.cos_phi]
    }
}

/// 2x2 Stark block on (|0,0>, |1,0>): rotor energies plus `-mu E_z cos(theta)`.
pub fn stark_block(params: &ModelParams) -> Matrix2<f64> {
    let s = params.stark_coupling();
    Matrix2::new(rotor_energy(0), -s, -s, rotor_energy(1))
}

/// Dressed states `|-> = cos(phi)|0,0> + sin(phi)|1,0>` and
/// `|+> = cos(phi)|1,0> - sin(phi)|0,0>` with energies `B -+ lambda`.
///
/// `sin(phi) >= 0` is the branch that diagonalizes `-mu E_z cos(theta)` for a
/// field along `+z`; the opposite branch corresponds to a reversed field and
/// leaves every energy and entanglement value unchanged.
pub fn dressed_solution(params: &ModelParams) -> DressedSolution {
    let b = params.b_rot;
    let s = params.stark_coupling();
    let lambda = (b * b + s * s).sqrt();
    let cos_phi = ((b + lambda) / (2.0 * lambda)).sqrt();
    let sin_phi = ((lambda - b) / (2.0 * lambda)).max(0.0).sqrt();
    DressedSolution { lambda, cos_phi, sin_phi, e_minus: b - lambda, e_plus: b + lambda }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SiteBasis {
    /// `[|0,0>, |1,0>, |1,+1>, |1,-1>]`
    Bare,
    /// `[|->, |+>, |1,+1>, |1,-1>]` for the given field and dipole scale.
    Dressed { e_z: f64, v_dip: f64 },
}

impl SiteBasis {
    pub fn dressed(params: &ModelParams) -> Self {
        SiteBasis::Dressed { e_z: params.e_z, v_dip: params.v_dip }
    }

    pub fn labels(&self) -> [&'static str; SITE_DIM] {
        match self {
            SiteBasis::Bare => ["|0,0>", "|1,0>", "|1,+1>", "|1,-1>"],
            SiteBasis::Dressed { .. } => ["|->", "|+>", "|1,+1>", "|1,-1>"],
        }
    }

    /// Unitary `U` taking bare components to components in this basis, so an
    /// operator transforms as `U O_bare U^dagger`.
    pub fn rotation(&self) -> Matrix4<Complex64> {
        match *self {
            SiteBasis::Bare => Matrix4::identity(),
            SiteBasis::Dressed { e_z, v_dip } => {
                let d = dressed_solution(&ModelParams { n_molecules: 2, b_rot: 1.0, v_dip, e_z });
                let (c, s) = (d.cos_phi, d.sin_phi);
                // rows are <-| and <+| in bare components
                let mut u = Matrix4::identity();
                u[(0, 0)] = re(c);
                u[(0, 1)] = re(s);
                u[(1, 0)] = re(-s);
                u[(1, 1)] = re(c);
                u
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    CosTheta,
    /// `sin(theta) e^{+i phi}`
    TPlus,
    /// `sin(theta) e^{-i phi}`
    TMinus,
    Jz,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SiteOperator {
    pub basis: SiteBasis,
    pub matrix: Matrix4<Complex64>,
}

fn bare_operator(kind: OperatorKind) -> Matrix4<Complex64> {
    let mut m = Matrix4::from_element(ZERO);
    let c = 1.0 / 3f64.sqrt();
    let t = (2.0f64 / 3.0).sqrt();
    match kind {
        OperatorKind::CosTheta => {
            m[(0, 1)] = re(c);
            m[(1, 0)] = re(c);
        }
        // Condon-Shortley: <1,+-1| T_+- |0,0> = -+ sqrt(2/3)
        OperatorKind::TPlus => {
            m[(2, 0)] = re(-t);
            m[(0, 3)] = re(t);
        }
        OperatorKind::TMinus => {
            m[(3, 0)] = re(t);
            m[(0, 2)] = re(-t);
        }
        OperatorKind::Jz => {
            m[(2, 2)] = re(1.0);
            m[(3, 3)] = re(-1.0);
        }
    }
    m
}

pub fn site_operator(kind: OperatorKind, basis: SiteBasis) -> SiteOperator {
    let u = basis.rotation();
    let matrix = u * bare_operator(kind) * u.adjoint();
    SiteOperator { basis, matrix }
}

/// Single-site Hamiltonian (rotor energy plus Stark term) in `basis`.
pub fn site_hamiltonian(params: &ModelParams, basis: SiteBasis) -> Matrix4<Complex64> {
    let mut h = Matrix4::from_element(ZERO);
    for (i, j) in [(0u32, 0usize), (1, 1), (1, 2), (1, 3)] {
        h[(j, j)] = re(rotor_energy(i));
    }
    h -= bare_operator(OperatorKind::CosTheta) * re(3f64.sqrt() * params.stark_coupling());
    let u = basis.rotation();
    u * h * u.adjoint()
}

pub(crate) fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

pub(crate) fn to_dmatrix(m: &Matrix4<Complex64>) -> DMatrix<Complex64> {
    DMatrix::from_fn(SITE_DIM, SITE_DIM, |i, j| m[(i, j)])
}

/// Nearest-neighbour dipole operator on the 16-dimensional pair space,
/// `v [ -2 cos(theta) x cos(theta) + (T+ x T- + T- x T+) / 2 ]`.
/// Pair index is `4 * s_left + s_right`.
pub fn pair_dipole_operator(basis: SiteBasis, params: &ModelParams) -> DMatrix<Complex64> {
    let c = to_dmatrix(&site_operator(OperatorKind::CosTheta, basis).matrix);
    let tp = to_dmatrix(&site_operator(OperatorKind::TPlus, basis).matrix);
    let tm = to_dmatrix(&site_operator(OperatorKind::TMinus, basis).matrix);
    let flip = (kron(&tp, &tm) + kron(&tm, &tp)) * re(0.5);
    (kron(&c, &c) * re(-2.0) + flip) * re(params.v_dip)
}

/// Analytic eigensystem of two molecules in zero field, one rotational
/// excitation, with its entanglement and `J_z` fixtures.
#[derive(Debug, Clone)]
pub struct TwoMoleculeReference {
    /// `E0-` and `E0+`: symmetric/antisymmetric `|1,0>` exchange states.
    pub e0_minus: f64,
    pub e0_plus: f64,
    /// `E1-` and `E1+`, each shared by the `m = +1` and `m = -1` states.
    pub e1_minus: f64,
    pub e1_plus: f64,
    pub psi0_minus: DVector<Complex64>,
    pub psi0_plus: DVector<Complex64>,
    pub psi1_minus_up: DVector<Complex64>,
    pub psi1_minus_down: DVector<Complex64>,
    pub psi1_plus_up: DVector<Complex64>,
    pub psi1_plus_down: DVector<Complex64>,
    pub log_neg_psi0_minus: f64,
    pub log_neg_psi1_minus_mixture: f64,
    pub jz_var_psi0_minus: f64,
    pub jz_var_psi1_minus_mixture: f64,
}

fn pair_state(a: usize, b: usize, sign: f64) -> DVector<Complex64> {
    let mut v = DVector::from_element(SITE_DIM * SITE_DIM, ZERO);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    v[a] = re(h);
    v[b] = re(sign * h);
    v
}

/// Total `J_z` on the bare pair space.
pub(crate) fn pair_total_jz() -> DMatrix<Complex64> {
    let jz = to_dmatrix(&bare_operator(OperatorKind::Jz));
    let id = DMatrix::identity(SITE_DIM, SITE_DIM);
    kron(&jz, &id) + kron(&id, &jz)
}

pub fn two_molecule_reference(params: &ModelParams) -> Result<TwoMoleculeReference> {
    if params.n_molecules != 2 || params.e_z != 0.0 {
        return domain("two-molecule reference needs N = 2 and e_z = 0");
    }
    let v = params.v_dip;
    // bare pair indices: |1,0;0,0> = 4, |0,0;1,0> = 1, |1,+1;0,0> = 8,
    // |0,0;1,+1> = 2, |1,-1;0,0> = 12, |0,0;1,-1> = 3
    let psi0_minus = pair_state(4, 1, 1.0);
    let psi0_plus = pair_state(4, 1, -1.0);
    let psi1_minus_up = pair_state(8, 2, -1.0);
    let psi1_plus_up = pair_state(8, 2, 1.0);
    let psi1_minus_down = pair_state(12, 3, -1.0);
    let psi1_plus_down = pair_state(12, 3, 1.0);

    let dims = [SITE_DIM, SITE_DIM];
    let rho0 = DensityMatrix::pure(&dims, &psi0_minus)?;
    let rho1 = DensityMatrix::mixture(
        &dims,
        &[(0.5, psi1_minus_up.clone()), (0.5, psi1_minus_down.clone())],
    )?;
    let jz = pair_total_jz();

    Ok(TwoMoleculeReference {
        e0_minus: 2.0 - 2.0 / 3.0 * v,
        e0_plus: 2.0 + 2.0 / 3.0 * v,
        e1_minus: 2.0 - v / 3.0,
        e1_plus: 2.0 + v / 3.0,
        log_neg_psi0_minus: rho0.log_negativity(&[0], &[1])?,
        log_neg_psi1_minus_mixture: rho1.log_negativity(&[0], &[1])?,
        jz_var_psi0_minus: rho0.variance(&jz),
        jz_var_psi1_minus_mixture: rho1.variance(&jz),
        psi0_minus,
        psi0_plus,
        psi1_minus_up,
        psi1_minus_down,
        psi1_plus_up,
        psi1_plus_down,
    })
}
