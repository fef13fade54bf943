//! Compressible Neo-Hookean material for 2D plane strain.
//!
//! Strain energy (out-of-plane stretch fixed at one):
//!
//! ```text
//! W = mu/2 (tr(F^T F) + 1 - 3) - mu ln J + lambda/2 (ln J)^2,  J = det F,
//! ```
//!
//! which gives the first Piola-Kirchhoff stress `P = mu F + (lambda ln J - mu) F^-T`
//! and an analytic material tangent `A = dP/dF` used for consistent Newton
//! linearization.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MaterialError {
    #[error("Young's modulus must be positive, got {0}")]
    NonPositiveModulus(f64),
    #[error("Poisson's ratio must lie in [0, 0.5), got {0}")]
    PoissonOutOfRange(f64),
    #[error("element inversion: det F = {0} <= 0")]
    ElementInversion(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
}

impl Material {
    pub fn new(youngs_modulus: f64, poisson_ratio: f64) -> Result<Self, MaterialError> {
        if !(youngs_modulus > 0.0) {
            return Err(MaterialError::NonPositiveModulus(youngs_modulus));
        }
        if !(0.0..0.5).contains(&poisson_ratio) {
            return Err(MaterialError::PoissonOutOfRange(poisson_ratio));
        }
        Ok(Self {
            youngs_modulus,
            poisson_ratio,
        })
    }

    /// Lame constants `(lambda, mu)`.
    pub fn lame(&self) -> (f64, f64) {
        let e = self.youngs_modulus;
        let nu = self.poisson_ratio;
        let lambda = e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
        let mu = e / (2.0 * (1.0 + nu));
        (lambda, mu)
    }
}

/// Stress and consistent tangent at one quadrature point.
#[derive(Debug, Clone, Copy)]
pub struct StressTangent {
    /// First Piola-Kirchhoff stress.
    pub pk1: [[f64; 2]; 2],
    /// In-plane Cauchy stress `sigma = P F^T / J`.
    pub cauchy: [[f64; 2]; 2],
    /// Out-of-plane Cauchy stress of the plane-strain state.
    pub cauchy_zz: f64,
    /// Material tangent `A[i][j][k][l] = dP_ij / dF_kl`.
    pub tangent: [[[[f64; 2]; 2]; 2]; 2],
}

pub fn det2(f: &[[f64; 2]; 2]) -> f64 {
    f[0][0] * f[1][1] - f[0][1] * f[1][0]
}

/// Stress and tangent of the Neo-Hookean law at deformation gradient `f`.
pub fn neo_hooke_stress_tangent(
    f: &[[f64; 2]; 2],
    m: &Material,
) -> Result<StressTangent, MaterialError> {
    let j = det2(f);
    if !(j > 0.0) {
        return Err(MaterialError::ElementInversion(j));
    }
    let (lambda, mu) = m.lame();
    let ln_j = j.ln();

    // F^-T
    let fit = [
        [f[1][1] / j, -f[1][0] / j],
        [-f[0][1] / j, f[0][0] / j],
    ];

    let coef = lambda * ln_j - mu;
    let mut pk1 = [[0.0; 2]; 2];
    for i in 0..2 {
        for jj in 0..2 {
            pk1[i][jj] = mu * f[i][jj] + coef * fit[i][jj];
        }
    }

    // A_iJkL = mu d_ik d_JL + lambda FinvT_iJ FinvT_kL - coef FinvT_iL FinvT_kJ
    let mut tangent = [[[[0.0; 2]; 2]; 2]; 2];
    for i in 0..2 {
        for jj in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let mut a = lambda * fit[i][jj] * fit[k][l] - coef * fit[i][l] * fit[k][jj];
                    if i == k && jj == l {
                        a += mu;
                    }
                    tangent[i][jj][k][l] = a;
                }
            }
        }
    }

    // sigma = P F^T / J
    let mut cauchy = [[0.0; 2]; 2];
    for i in 0..2 {
        for jj in 0..2 {
            cauchy[i][jj] = (pk1[i][0] * f[jj][0] + pk1[i][1] * f[jj][1]) / j;
        }
    }

    Ok(StressTangent {
        pk1,
        cauchy,
        cauchy_zz: lambda * ln_j / j,
        tangent,
    })
}

/// Strain energy density; used by energy-consistency checks.
pub fn neo_hooke_energy(f: &[[f64; 2]; 2], m: &Material) -> Result<f64, MaterialError> {
    let j = det2(f);
    if !(j > 0.0) {
        return Err(MaterialError::ElementInversion(j));
    }
    let (lambda, mu) = m.lame();
    let tr_c = f[0][0] * f[0][0] + f[0][1] * f[0][1] + f[1][0] * f[1][0] + f[1][1] * f[1][1];
    let ln_j = j.ln();
    Ok(0.5 * mu * (tr_c + 1.0 - 3.0) - mu * ln_j + 0.5 * lambda * ln_j * ln_j)
}
