//! Thermodynamic and invariant algebra of the radial flow.
//!
//! A smooth radially symmetric flow region is fully described by four
//! conserved quantities: the mass flux `kappa1 = r rho U1`, the angular
//! momentum `kappa2 = r U2`, the Bernoulli constant `B0` and the entropy
//! function `A` of the polytropic law `p = A rho^gamma`. Everything in this
//! module is a closed-form function of those constants.

use serde::{Deserialize, Serialize};

use crate::error::{FlowError, Result};

/// Polytropic gas and the numerical tolerances used by every solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasModel {
    pub gamma: f64,
    /// Absolute residual tolerance (applied to scaled residuals).
    pub tol_residual: f64,
    /// Relative tolerance on root arguments (densities, radii).
    pub tol_root: f64,
    /// Relative tolerance deciding sonic versus strictly super/subsonic.
    pub eps_sonic: f64,
}

impl GasModel {
    pub const DEFAULT_TOL_RESIDUAL: f64 = 1e-10;
    pub const DEFAULT_TOL_ROOT: f64 = 1e-14;
    pub const DEFAULT_EPS_SONIC: f64 = 1e-9;

    pub fn new(gamma: f64) -> Result<Self> {
        Self::with_tolerances(
            gamma,
            Self::DEFAULT_TOL_RESIDUAL,
            Self::DEFAULT_TOL_ROOT,
            Self::DEFAULT_EPS_SONIC,
        )
    }

    pub fn with_tolerances(
        gamma: f64,
        tol_residual: f64,
        tol_root: f64,
        eps_sonic: f64,
    ) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 1.0) {
            return Err(FlowError::InvalidGas(format!(
                "adiabatic exponent must be finite and > 1, got {gamma}"
            )));
        }
        for (name, v) in [
            ("tol_residual", tol_residual),
            ("tol_root", tol_root),
            ("eps_sonic", eps_sonic),
        ] {
            if !(v > 0.0 && v < 1e-3) {
                return Err(FlowError::InvalidGas(format!(
                    "{name} must lie in (0, 1e-3), got {v}"
                )));
            }
        }
        Ok(Self {
            gamma,
            tol_residual,
            tol_root,
            eps_sonic,
        })
    }

    /// Squared sound speed `gamma A rho^(gamma-1)`.
    pub fn sound_speed_sq(&self, a: f64, rho: f64) -> f64 {
        self.gamma * a * rho.powf(self.gamma - 1.0)
    }

    pub fn pressure(&self, a: f64, rho: f64) -> f64 {
        a * rho.powf(self.gamma)
    }
}

/// Flow direction through the annulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    /// Inner circle to outer circle (`U1 > 0`).
    Outward,
    /// Outer circle to inner circle (`U1 < 0`).
    Inward,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Outward => 1.0,
            Direction::Inward => -1.0,
        }
    }
}

/// Prescribed state on one of the bounding circles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryState {
    pub r: f64,
    pub rho: f64,
    pub u1: f64,
    pub u2: f64,
    /// Entropy function `p / rho^gamma`.
    pub a: f64,
}

impl BoundaryState {
    pub fn new(r: f64, rho: f64, u1: f64, u2: f64, a: f64) -> Self {
        Self { r, rho, u1, u2, a }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.r, self.rho, self.u1, self.u2, self.a]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(FlowError::InvalidBoundary("non-finite field".into()));
        }
        if self.r <= 0.0 || self.rho <= 0.0 || self.a <= 0.0 {
            return Err(FlowError::InvalidBoundary(format!(
                "radius, density and entropy must be positive (r={}, rho={}, A={})",
                self.r, self.rho, self.a
            )));
        }
        Ok(())
    }
}

/// The conserved quantities of one smooth flow region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowInvariants {
    /// Mass flux `r rho U1`; signed with the direction.
    pub kappa1: f64,
    /// Angular momentum `r U2`.
    pub kappa2: f64,
    /// Bernoulli constant.
    pub b0: f64,
    /// Entropy function.
    pub a: f64,
    pub direction: Direction,
}

impl FlowInvariants {
    /// Builds and checks invariants directly from their values.
    pub fn new(kappa1: f64, kappa2: f64, b0: f64, a: f64, direction: Direction) -> Result<Self> {
        let inv = Self {
            kappa1,
            kappa2,
            b0,
            a,
            direction,
        };
        inv.validate()?;
        Ok(inv)
    }

    /// Conserved quantities carried by a boundary state.
    pub fn from_boundary(gas: &GasModel, b: &BoundaryState) -> Result<Self> {
        b.validate()?;
        if b.u1 == 0.0 {
            return Err(FlowError::DegenerateCirculatory);
        }
        let direction = if b.u1 > 0.0 {
            Direction::Outward
        } else {
            Direction::Inward
        };
        Self::new(
            b.r * b.rho * b.u1,
            b.r * b.u2,
            bernoulli(gas, b.a, b.rho, b.u1, b.u2),
            b.a,
            direction,
        )
    }

    /// Invariants of a purely circulatory flow (`U1 = 0`). These violate the
    /// `kappa1 != 0` requirement of through-flows and are only consumed by
    /// the circulatory solution.
    pub(crate) fn circulatory(gas: &GasModel, b: &BoundaryState) -> Self {
        Self {
            kappa1: 0.0,
            kappa2: b.r * b.u2,
            b0: bernoulli(gas, b.a, b.rho, 0.0, b.u2),
            a: b.a,
            direction: Direction::Outward,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all_finite = [self.kappa1, self.kappa2, self.b0, self.a]
            .iter()
            .all(|v| v.is_finite());
        if !all_finite {
            return Err(FlowError::InvalidInvariants("non-finite value".into()));
        }
        if self.b0 <= 0.0 || self.a <= 0.0 {
            return Err(FlowError::InvalidInvariants(format!(
                "Bernoulli constant and entropy must be positive (B0={}, A={})",
                self.b0, self.a
            )));
        }
        if self.kappa1 == 0.0 {
            return Err(FlowError::InvalidInvariants(
                "mass flux must be nonzero".into(),
            ));
        }
        if self.kappa1.signum() != self.direction.sign() {
            return Err(FlowError::InvalidInvariants(format!(
                "mass flux sign ({}) disagrees with direction {:?}",
                self.kappa1, self.direction
            )));
        }
        Ok(())
    }

    /// Same region constants with a different entropy (the state behind a shock).
    pub fn with_entropy(&self, a: f64) -> Self {
        Self { a, ..*self }
    }

    /// Full pointwise state at radius `r` with density `rho`.
    pub fn state_at(&self, gas: &GasModel, r: f64, rho: f64) -> FlowState {
        let u1 = self.kappa1 / (r * rho);
        let u2 = self.kappa2 / r;
        let p = gas.pressure(self.a, rho);
        let c2 = gas.gamma * p / rho;
        let m1sq = u1 * u1 / c2;
        let m2sq = u2 * u2 / c2;
        FlowState {
            r,
            rho,
            u1,
            u2,
            p,
            c2,
            m1sq,
            m2sq,
            msq: m1sq + m2sq,
        }
    }

    /// The mass-flux polynomial `F_r(rho)`; its roots are the admissible densities at `r`.
    pub fn mass_flux_residual(&self, gas: &GasModel, r: f64, rho: f64) -> f64 {
        let [t1, t2, t3] = self.mass_flux_terms(gas, r, rho);
        t1 - t2 + t3
    }

    /// Magnitude against which `F_r(rho)` residuals are judged.
    pub fn mass_flux_scale(&self, gas: &GasModel, r: f64, rho: f64) -> f64 {
        let [t1, t2, t3] = self.mass_flux_terms(gas, r, rho);
        t1.abs().max(t2.abs()).max(t3.abs())
    }

    fn mass_flux_terms(&self, gas: &GasModel, r: f64, rho: f64) -> [f64; 3] {
        let g = gas.gamma;
        let r2 = r * r;
        [
            g / (g - 1.0) * self.a * rho.powf(g + 1.0),
            (self.b0 - self.kappa2 * self.kappa2 / (2.0 * r2)) * rho * rho,
            self.kappa1 * self.kappa1 / (2.0 * r2),
        ]
    }

    /// `dF_r/drho`.
    pub fn mass_flux_slope(&self, gas: &GasModel, r: f64, rho: f64) -> f64 {
        let g = gas.gamma;
        g * (g + 1.0) / (g - 1.0) * self.a * rho.powf(g)
            - 2.0 * (self.b0 - self.kappa2 * self.kappa2 / (2.0 * r * r)) * rho
    }

    /// `K(r) = 2(g-1)B0/(g+1) - (g-1)U2^2/(g+1)`, the squared radial sonic
    /// speed of the region at radius `r`.
    pub fn swirl_k(&self, gas: &GasModel, r: f64) -> f64 {
        let g = gas.gamma;
        let u2 = self.kappa2 / r;
        2.0 * (g - 1.0) * self.b0 / (g + 1.0) - (g - 1.0) / (g + 1.0) * u2 * u2
    }

    /// Density at which the state with `U2 = 0` is exactly sonic.
    pub fn critical_density(&self, gas: &GasModel) -> f64 {
        let g = gas.gamma;
        (2.0 * (g - 1.0) * self.b0 / ((g + 1.0) * g * self.a)).powf(1.0 / (g - 1.0))
    }

    /// Minimiser `rho_*(r)` of `F_r`, the density of the radially sonic state.
    pub fn minimizer_density(&self, gas: &GasModel, r: f64) -> Result<f64> {
        let k = self.swirl_k(gas, r);
        if !(k > 0.0) {
            return Err(FlowError::OutOfDomain(format!(
                "r = {r} lies inside the vacuum radius {}",
                self.vacuum_radius()
            )));
        }
        Ok((k / (gas.gamma * self.a)).powf(1.0 / (gas.gamma - 1.0)))
    }

    /// Radius `|kappa2| / sqrt(2 B0)` at which the swirl alone exhausts the
    /// Bernoulli constant; no state exists at or inside it.
    pub fn vacuum_radius(&self) -> f64 {
        self.kappa2.abs() / (2.0 * self.b0).sqrt()
    }
}

pub(crate) fn bernoulli(gas: &GasModel, a: f64, rho: f64, u1: f64, u2: f64) -> f64 {
    let g = gas.gamma;
    0.5 * (u1 * u1 + u2 * u2) + g * a * rho.powf(g - 1.0) / (g - 1.0)
}

/// Full pointwise flow description at one radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowState {
    pub r: f64,
    pub rho: f64,
    pub u1: f64,
    pub u2: f64,
    pub p: f64,
    pub c2: f64,
    pub m1sq: f64,
    pub m2sq: f64,
    pub msq: f64,
}

impl FlowState {
    pub fn bernoulli(&self, gamma: f64) -> f64 {
        0.5 * (self.u1 * self.u1 + self.u2 * self.u2) + self.c2 / (gamma - 1.0)
    }

    pub fn mass_flux(&self) -> f64 {
        self.r * self.rho * self.u1
    }

    pub fn angular_momentum(&self) -> f64 {
        self.r * self.u2
    }

    /// `p / rho^gamma`.
    pub fn entropy(&self, gamma: f64) -> f64 {
        self.p / self.rho.powf(gamma)
    }
}

/// Entropy ratio `A+/A-` across a shock with velocity ratio `x = U1+/U1-`.
pub fn entropy_ratio(gas: &GasModel, x: f64) -> Result<f64> {
    let g = gas.gamma;
    let lo = (g - 1.0) / (g + 1.0);
    let hi = (g + 1.0) / (g - 1.0);
    if !(x > lo && x < hi) {
        return Err(FlowError::OutOfDomain(format!(
            "velocity ratio {x} outside ({lo}, {hi})"
        )));
    }
    Ok(x.powf(g) / (g + 1.0) * (-(g - 1.0) + 4.0 * g / ((g + 1.0) * x - (g - 1.0))))
}

/// Pressure ratio across the shock, as published. The expression is the same
/// as [`entropy_ratio`]; downstream pressures are always recomputed from
/// `A+ rho+^gamma` rather than from this ratio.
pub fn pressure_ratio(gas: &GasModel, x: f64) -> Result<f64> {
    entropy_ratio(gas, x)
}
