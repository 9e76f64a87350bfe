//! Sampled radial profiles.

use serde::{Deserialize, Serialize};

use crate::error::{FlowError, Result};
use crate::gas::{FlowInvariants, FlowState, GasModel};
use crate::smooth::{limiting_radius, solve_density, Branch};

/// Which part of a (possibly shocked) solution a profile belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Smooth,
    Upstream,
    Downstream,
}

impl Region {
    pub fn label(self) -> &'static str {
        match self {
            Region::Smooth => "smooth",
            Region::Upstream => "upstream",
            Region::Downstream => "downstream",
        }
    }
}

/// States sampled on an ascending radius grid, all from one smooth region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub states: Vec<FlowState>,
    pub region: Region,
    pub branch: Option<Branch>,
    /// Entropy constant `A` of the region.
    pub entropy: f64,
}

impl RadialProfile {
    pub fn radii(&self) -> impl Iterator<Item = f64> + '_ {
        self.states.iter().map(|s| s.r)
    }

    pub fn first(&self) -> &FlowState {
        &self.states[0]
    }

    pub fn last(&self) -> &FlowState {
        &self.states[self.states.len() - 1]
    }
}

/// Distance to the limiting circle below which the grid is graded toward it.
const GRADING_WINDOW: f64 = 1e-2;
const GRADING_RATIO: f64 = 0.9;
/// Smallest gap relative to the largest one on a graded grid.
const MIN_GAP_RATIO: f64 = 1e-6;

/// Radius grid on `[r_lo, r_hi]`; uniform, or with gaps shrinking
/// geometrically toward `r_lo` when `graded` is set.
pub fn radius_grid(r_lo: f64, r_hi: f64, n: usize, graded: bool) -> Vec<f64> {
    let len = r_hi - r_lo;
    let mut grid = Vec::with_capacity(n);
    if !graded || n <= 2 {
        for i in 0..n {
            grid.push(r_lo + len * i as f64 / (n - 1) as f64);
        }
    } else {
        let gaps = n - 1;
        let q = GRADING_RATIO.max(MIN_GAP_RATIO.powf(1.0 / (gaps - 1) as f64));
        // Gap j (counted from r_lo) is g0 / q^j.
        let growth = 1.0 / q;
        let g0 = len * (growth - 1.0) / (growth.powi(gaps as i32) - 1.0);
        let mut r = r_lo;
        grid.push(r);
        for j in 0..gaps - 1 {
            r += g0 * growth.powi(j as i32);
            grid.push(r);
        }
        grid.push(r_hi);
    }
    grid[n - 1] = r_hi;
    grid
}

/// Samples the smooth region described by `inv` on `branch` at `n` radii
/// spanning `[r_lo, r_hi]`.
pub fn profile(
    gas: &GasModel,
    inv: &FlowInvariants,
    branch: Branch,
    r_lo: f64,
    r_hi: f64,
    n: usize,
) -> Result<RadialProfile> {
    if n < 2 {
        return Err(FlowError::OutOfDomain(format!("need at least 2 samples, got {n}")));
    }
    if !(r_lo > 0.0 && r_hi > r_lo && r_hi.is_finite()) {
        return Err(FlowError::OutOfDomain(format!(
            "invalid radius range [{r_lo}, {r_hi}]"
        )));
    }
    let graded = match limiting_radius(gas, inv) {
        Ok(rs) => r_lo >= rs && r_lo - rs < GRADING_WINDOW,
        Err(_) => false,
    };
    let states = radius_grid(r_lo, r_hi, n, graded)
        .into_iter()
        .map(|r| solve_density(gas, inv, r, branch).map(|rho| inv.state_at(gas, r, rho)))
        .collect::<Result<Vec<_>>>()?;
    Ok(RadialProfile {
        states,
        region: Region::Smooth,
        branch: Some(branch),
        entropy: inv.a,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::Direction;
    use approx::assert_relative_eq;

    #[test]
    fn uniform_grid_hits_endpoints() {
        let g = radius_grid(1.0, 2.0, 5, false);
        assert_eq!(g, vec![1.0, 1.25, 1.5, 1.75, 2.0]);
    }

    #[test]
    fn graded_grid_is_strictly_increasing_and_clusters_low() {
        for n in [3, 10, 64, 512, 4096] {
            let g = radius_grid(0.96, 1.5, n, true);
            assert_eq!(g.len(), n);
            assert_eq!(g[0], 0.96);
            assert_eq!(g[n - 1], 1.5);
            assert!(g.windows(2).all(|w| w[1] > w[0]));
            if n > 3 {
                assert!(g[1] - g[0] < g[n - 1] - g[n - 2]);
            }
        }
    }

    #[test]
    fn profile_conserves_invariants() {
        let gas = GasModel::new(2.0).unwrap();
        let inv = FlowInvariants::new(1.0, 1.0, 3.0, 1.0, Direction::Outward).unwrap();
        let p = profile(&gas, &inv, Branch::RadialSupersonic, 1.0, 3.0, 50).unwrap();
        assert_eq!(p.states.len(), 50);
        assert_relative_eq!(p.first().rho, (0.5 + 4.25f64.sqrt()) / 4.0, max_relative = 1e-13);
        for s in &p.states {
            assert_relative_eq!(s.mass_flux(), 1.0, max_relative = 1e-12);
            assert_relative_eq!(s.angular_momentum(), 1.0, max_relative = 1e-12);
            assert_relative_eq!(s.bernoulli(gas.gamma), 3.0, max_relative = 1e-12);
            assert!(s.m1sq > 1.0);
        }
    }

    #[test]
    fn profile_into_forbidden_region_fails() {
        let gas = GasModel::new(2.0).unwrap();
        let inv = FlowInvariants::new(1.0, 1.0, 3.0, 1.0, Direction::Outward).unwrap();
        assert!(matches!(
            profile(&gas, &inv, Branch::RadialSubsonic, 0.5, 1.5, 20),
            Err(FlowError::NoRoot { .. })
        ));
        assert!(profile(&gas, &inv, Branch::RadialSubsonic, 1.0, 1.5, 1).is_err());
    }
}
