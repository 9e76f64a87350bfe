//! Smooth radially symmetric flows: branch-resolved density solves, sonic and
//! limiting circles, and regime classification for outward and inward data.

use serde::{Deserialize, Serialize};

use crate::error::{FlowError, Result};
use crate::gas::{BoundaryState, FlowInvariants, FlowState, GasModel};
use crate::profile::{RadialProfile, Region};
use crate::roots::{bisect, bisect_bracket, newton_polish, MAX_BISECTIONS};

/// Which root of `F_r` to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    /// `rho < rho_*(r)`, radial Mach number above one.
    RadialSupersonic,
    /// `rho > rho_*(r)`, radial Mach number below one.
    RadialSubsonic,
}

impl Branch {
    /// Branch on which a state with squared radial Mach number `m1sq` lies.
    pub fn of_state(state: &FlowState) -> Self {
        if state.m1sq > 1.0 {
            Branch::RadialSupersonic
        } else {
            Branch::RadialSubsonic
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SmoothRegime {
    Supersonic,
    Subsonic,
    TransonicSmooth,
    SupersonicToSonicAtOuter,
    SonicAtInner,
    NoGlobalSolution,
    PurelyCirculatory,
}

impl SmoothRegime {
    pub fn label(self) -> &'static str {
        match self {
            SmoothRegime::Supersonic => "Supersonic",
            SmoothRegime::Subsonic => "Subsonic",
            SmoothRegime::TransonicSmooth => "TransonicSmooth",
            SmoothRegime::SupersonicToSonicAtOuter => "SupersonicToSonicAtOuter",
            SmoothRegime::SonicAtInner => "SonicAtInner",
            SmoothRegime::NoGlobalSolution => "NoGlobalSolution",
            SmoothRegime::PurelyCirculatory => "PurelyCirculatory",
        }
    }
}

/// Classification of a smooth flow problem with its diagnostic radii.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothReport {
    pub regime: SmoothRegime,
    /// Sonic circle (total Mach one), when it matters for the regime.
    pub r_c: Option<f64>,
    /// Limiting circle of the region.
    pub r_sharp: Option<f64>,
}

/// Density on `branch` at radius `r`: the root of `F_r` on that side of `rho_*(r)`.
pub fn solve_density(gas: &GasModel, inv: &FlowInvariants, r: f64, branch: Branch) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(FlowError::OutOfDomain(format!("radius must be positive, got {r}")));
    }
    let rho_star = inv
        .minimizer_density(gas, r)
        .map_err(|_| FlowError::NoRoot { r })?;
    let f = |rho: f64| inv.mass_flux_residual(gas, r, rho);
    let df = |rho: f64| inv.mass_flux_slope(gas, r, rho);
    let f_star = f(rho_star);
    if f_star >= 0.0 {
        // Branches merge at the limiting circle.
        if f_star <= gas.tol_residual * inv.mass_flux_scale(gas, r, rho_star) {
            return Ok(rho_star);
        }
        return Err(FlowError::NoRoot { r });
    }

    let (lo, hi) = match branch {
        Branch::RadialSupersonic => (0.0, rho_star),
        Branch::RadialSubsonic => {
            let mut hi = 2.0 * rho_star;
            let mut n = 0;
            while f(hi) <= 0.0 {
                hi *= 2.0;
                n += 1;
                if n > MAX_BISECTIONS || !hi.is_finite() {
                    return Err(FlowError::BracketFailure(format!(
                        "could not bracket the subsonic density at r = {r}"
                    )));
                }
            }
            (rho_star, hi)
        }
    };
    let (a, b) = bisect_bracket(f, lo, hi, gas.tol_root)?;
    Ok(newton_polish(f, df, 0.5 * (a + b), lo, hi, 5))
}

/// State on `branch` at radius `r`.
pub fn solve_state(gas: &GasModel, inv: &FlowInvariants, r: f64, branch: Branch) -> Result<FlowState> {
    solve_density(gas, inv, r, branch).map(|rho| inv.state_at(gas, r, rho))
}

/// Radius of the sonic circle, where the flow passes through `rho_c`.
pub fn sonic_radius(gas: &GasModel, inv: &FlowInvariants) -> f64 {
    let g = gas.gamma;
    let rho_c = inv.critical_density(gas);
    let num = (g + 1.0) * (inv.kappa1 * inv.kappa1 + inv.kappa2 * inv.kappa2 * rho_c * rho_c);
    (num / (2.0 * (g - 1.0) * inv.b0 * rho_c * rho_c)).sqrt()
}

/// `F_r(rho_*(r))`, positive inside the limiting circle and strictly
/// decreasing in `r`.
pub fn minimum_residual(gas: &GasModel, inv: &FlowInvariants, r: f64) -> f64 {
    let g = gas.gamma;
    let k = inv.swirl_k(gas, r);
    let mass = inv.kappa1 * inv.kappa1 / (2.0 * r * r);
    if k <= 0.0 {
        return mass;
    }
    -0.5 * (g * inv.a).powf(-2.0 / (g - 1.0)) * k.powf((g + 1.0) / (g - 1.0)) + mass
}

/// Limiting circle `r#`: inside it `F_r` has no root; on it both branches merge.
pub fn limiting_radius(gas: &GasModel, inv: &FlowInvariants) -> Result<f64> {
    if inv.kappa1 == 0.0 {
        return Err(FlowError::InvalidInvariants(
            "limiting circle needs a nonzero mass flux".into(),
        ));
    }
    let g = |r: f64| minimum_residual(gas, inv, r);
    let r_vac = inv.vacuum_radius();
    let mut lo = if r_vac > 0.0 { r_vac * (1.0 + 1e-12) } else { 1.0 };
    let mut n = 0;
    while g(lo) <= 0.0 {
        lo *= 0.5;
        n += 1;
        if n > MAX_BISECTIONS {
            return Err(FlowError::BracketFailure("limiting radius lower bracket".into()));
        }
    }
    let mut hi = (2.0 * lo).max(1.0);
    n = 0;
    while g(hi) >= 0.0 {
        hi *= 2.0;
        n += 1;
        if n > MAX_BISECTIONS || !hi.is_finite() {
            return Err(FlowError::BracketFailure("limiting radius upper bracket".into()));
        }
    }
    bisect(g, lo, hi, gas.tol_root)
}

/// Lower bound on the limiting circle obtained by dropping the swirl term.
pub fn limiting_radius_lower_bound(gas: &GasModel, inv: &FlowInvariants) -> f64 {
    let g = gas.gamma;
    (g * inv.a).powf(1.0 / (g - 1.0))
        * ((g + 1.0) / (2.0 * (g - 1.0) * inv.b0)).powf((g + 1.0) / (2.0 * (g - 1.0)))
        * inv.kappa1.abs()
}

fn sonic_ratio_eq(gas: &GasModel, a: f64, b: f64) -> bool {
    (a - b).abs() <= gas.eps_sonic * a.abs().max(b.abs())
}

fn check_radial_sonic(gas: &GasModel, state: &FlowState) -> Result<()> {
    if (state.m1sq - 1.0).abs() <= gas.eps_sonic {
        return Err(FlowError::SonicBoundary { m1sq: state.m1sq });
    }
    Ok(())
}

/// Classifies the smooth flow driven by data on the inner circle `b.r`
/// through the annulus out to `r1`.
pub fn classify_outward(gas: &GasModel, b: &BoundaryState, r1: f64) -> Result<SmoothReport> {
    b.validate()?;
    if !(b.u1 > 0.0) {
        return Err(FlowError::InvalidBoundary(format!(
            "outward flow needs U1 > 0 at the inner circle, got {}",
            b.u1
        )));
    }
    if !(r1 > b.r) {
        return Err(FlowError::InvalidBoundary(format!(
            "outer radius {r1} must exceed inner radius {}",
            b.r
        )));
    }
    let inv = FlowInvariants::from_boundary(gas, b)?;
    let state = inv.state_at(gas, b.r, b.rho);
    check_radial_sonic(gas, &state)?;
    let r_sharp = Some(limiting_radius(gas, &inv)?);

    let report = |regime, r_c| SmoothReport {
        regime,
        r_c,
        r_sharp,
    };
    if state.m1sq > 1.0 {
        return Ok(report(SmoothRegime::Supersonic, None));
    }
    if sonic_ratio_eq(gas, state.msq, 1.0) {
        return Ok(report(SmoothRegime::SonicAtInner, Some(b.r)));
    }
    if state.msq < 1.0 {
        return Ok(report(SmoothRegime::Subsonic, None));
    }
    let r_c = sonic_radius(gas, &inv);
    let regime = if sonic_ratio_eq(gas, r1, r_c) {
        SmoothRegime::SupersonicToSonicAtOuter
    } else if r1 > r_c {
        SmoothRegime::TransonicSmooth
    } else {
        SmoothRegime::Supersonic
    };
    Ok(report(regime, Some(r_c)))
}

/// Classifies the smooth flow driven by data on the outer circle `b.r`
/// moving inward to `r0`.
pub fn classify_inward(gas: &GasModel, b: &BoundaryState, r0: f64) -> Result<SmoothReport> {
    b.validate()?;
    if !(b.u1 < 0.0) {
        return Err(FlowError::InvalidBoundary(format!(
            "inward flow needs U1 < 0 at the outer circle, got {}",
            b.u1
        )));
    }
    if !(r0 > 0.0 && r0 < b.r) {
        return Err(FlowError::InvalidBoundary(format!(
            "inner radius {r0} must lie in (0, {})",
            b.r
        )));
    }
    let inv = FlowInvariants::from_boundary(gas, b)?;
    let state = inv.state_at(gas, b.r, b.rho);
    check_radial_sonic(gas, &state)?;
    let r_sharp = limiting_radius(gas, &inv)?;
    let report = |regime, r_c| SmoothReport {
        regime,
        r_c,
        r_sharp: Some(r_sharp),
    };
    if r0 < r_sharp {
        return Ok(report(SmoothRegime::NoGlobalSolution, None));
    }
    if state.m1sq > 1.0 {
        return Ok(report(SmoothRegime::Supersonic, None));
    }
    if sonic_ratio_eq(gas, state.msq, 1.0) {
        return Ok(report(SmoothRegime::SupersonicToSonicAtOuter, Some(b.r)));
    }
    if state.msq > 1.0 {
        return Ok(report(SmoothRegime::Supersonic, None));
    }
    let r_c = sonic_radius(gas, &inv);
    let regime = if sonic_ratio_eq(gas, r0, r_c) {
        SmoothRegime::SonicAtInner
    } else if r0 > r_c {
        SmoothRegime::Subsonic
    } else {
        SmoothRegime::TransonicSmooth
    };
    Ok(report(regime, Some(r_c)))
}

/// The purely circulatory flow (`U1 = 0`) on `[b.r, r_outer]`.
///
/// `regime` classifies the profile on the sampled annulus; `PurelyCirculatory`
/// itself is never returned here, it tags the problem kind in reports.
pub fn purely_circulatory(
    gas: &GasModel,
    b: &BoundaryState,
    r_outer: f64,
    n: usize,
) -> Result<(RadialProfile, SmoothReport)> {
    b.validate()?;
    if b.u1 != 0.0 {
        return Err(FlowError::InvalidBoundary(format!(
            "circulatory flow needs U1 = 0, got {}",
            b.u1
        )));
    }
    if b.u2 == 0.0 {
        return Err(FlowError::InvalidBoundary("static gas: U2 = 0 as well".into()));
    }
    if !(r_outer > b.r) || n < 2 {
        return Err(FlowError::InvalidBoundary(format!(
            "need r_outer > {} and at least two samples",
            b.r
        )));
    }
    let g = gas.gamma;
    let inv = FlowInvariants::circulatory(gas, b);
    let density = |r: f64| {
        ((g - 1.0) / (inv.a * g)).powf(1.0 / (g - 1.0))
            * (inv.b0 - inv.kappa2 * inv.kappa2 / (2.0 * r * r)).powf(1.0 / (g - 1.0))
    };
    let states = (0..n)
        .map(|i| {
            let r = if i == n - 1 {
                r_outer
            } else {
                b.r + (r_outer - b.r) * i as f64 / (n - 1) as f64
            };
            inv.state_at(gas, r, density(r))
        })
        .collect();
    let profile = RadialProfile {
        states,
        region: Region::Smooth,
        branch: None,
        entropy: inv.a,
    };

    let c2_0 = gas.sound_speed_sq(b.a, b.rho);
    let r_c = ((g + 1.0) / (2.0 * (g - 1.0) * inv.b0)).sqrt() * inv.kappa2.abs();
    let report = if sonic_ratio_eq(gas, b.u2 * b.u2, c2_0) {
        SmoothReport {
            regime: SmoothRegime::SonicAtInner,
            r_c: Some(b.r),
            r_sharp: None,
        }
    } else if b.u2 * b.u2 < c2_0 {
        SmoothReport {
            regime: SmoothRegime::Subsonic,
            r_c: None,
            r_sharp: None,
        }
    } else {
        let regime = if sonic_ratio_eq(gas, r_outer, r_c) {
            SmoothRegime::SupersonicToSonicAtOuter
        } else if r_outer > r_c {
            SmoothRegime::TransonicSmooth
        } else {
            SmoothRegime::Supersonic
        };
        SmoothReport {
            regime,
            r_c: Some(r_c),
            r_sharp: None,
        }
    };
    Ok((profile, report))
}

fn check_ode_domain(gas: &GasModel, state: &FlowState) -> Result<f64> {
    let denom = 1.0 - state.m1sq;
    if denom.abs() <= gas.eps_sonic {
        return Err(FlowError::SonicSingularity { r: state.r });
    }
    Ok(denom)
}

/// Radial derivatives `(rho', U1', U2')` of a smooth state.
pub fn ode_rhs(gas: &GasModel, state: &FlowState) -> Result<[f64; 3]> {
    let denom = check_ode_domain(gas, state)?;
    let r = state.r;
    Ok([
        state.msq * state.rho / (r * denom),
        -(1.0 + state.m2sq) * state.u1 / (r * denom),
        -state.u2 / r,
    ])
}

/// Radial derivatives of `(M1^2, M2^2, |M|^2)`.
pub fn mach_derivatives(gas: &GasModel, state: &FlowState) -> Result<[f64; 3]> {
    let denom = -check_ode_domain(gas, state)? * state.r;
    let g = gas.gamma;
    let (m1, m2, m) = (state.m1sq, state.m2sq, state.msq);
    Ok([
        m1 * (2.0 + (g - 1.0) * m1 + (g + 1.0) * m2) / denom,
        m2 * (2.0 + (g - 3.0) * m1 + (g - 1.0) * m2) / denom,
        m * (2.0 + (g - 1.0) * m) / denom,
    ])
}
