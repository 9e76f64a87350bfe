//! Circular transonic shocks with a prescribed exit pressure.
//!
//! Across a circular shock the mass flux, angular momentum and Bernoulli
//! constant are continuous, so the downstream region differs from the
//! upstream one only in its entropy constant `A+`. A shock problem is then a
//! one-parameter family in the shock radius `r_b`, and the exit pressure is a
//! strictly decreasing function of `r_b`.

use serde::{Deserialize, Serialize};

use crate::error::{FlowError, Result};
use crate::gas::{entropy_ratio, BoundaryState, Direction, FlowInvariants, FlowState, GasModel};
use crate::profile::{profile, RadialProfile, Region};
use crate::roots::{bisect, bisect_bracket, MAX_BISECTIONS};
use crate::smooth::{limiting_radius, minimum_residual, solve_state, Branch};

/// Relative offset of the shock from the annulus walls when evaluating the
/// limiting pressures `p0` and `p1`.
pub const ENDPOINT_OFFSET: f64 = 1e-8;

/// Flow pattern of a shock solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShockPattern {
    /// Supersonic-subsonic shock, downstream subsonic throughout.
    SupSubUniform,
    /// Supersonic-supersonic shock, downstream supersonic throughout.
    SupSupUniform,
    /// Supersonic-supersonic shock, downstream turns subsonic before the exit.
    SupSupToSubsonicDownstream,
    /// Supersonic-supersonic shock, downstream sonic exactly at the exit.
    SupSupSonicAtExit,
    /// Shock circle and downstream sonic circle coincide.
    SupSonicCoincident,
    /// Supersonic-subsonic shock, downstream turns supersonic before the exit (inward flow).
    SubToSupersonicDownstream,
    /// Supersonic-subsonic shock, downstream sonic exactly at the exit (inward flow).
    SonicAtExit,
    NoSolution,
}

impl ShockPattern {
    pub fn label(self) -> &'static str {
        match self {
            ShockPattern::SupSubUniform => "SupSubUniform",
            ShockPattern::SupSupUniform => "SupSupUniform",
            ShockPattern::SupSupToSubsonicDownstream => "SupSupToSubsonicDownstream",
            ShockPattern::SupSupSonicAtExit => "SupSupSonicAtExit",
            ShockPattern::SupSonicCoincident => "SupSonicCoincident",
            ShockPattern::SubToSupersonicDownstream => "SubToSupersonicDownstream",
            ShockPattern::SonicAtExit => "SonicAtExit",
            ShockPattern::NoSolution => "NoSolution",
        }
    }
}

/// Total-Mach state at the exit circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExitRegime {
    Supersonic,
    Subsonic,
    Sonic,
}

/// Classification of a shock problem at a given exit pressure, with the
/// quantities that decide it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShockRegime {
    pub pattern: ShockPattern,
    /// Case label of the classification table, e.g. `III.2.4` or `IV.NoSolution`.
    pub subcase: String,
    pub r_star: f64,
    pub r_star_prime: f64,
    /// Limiting circle of the incoming flow.
    pub r_sharp_upstream: f64,
    /// Limiting circle of the downstream region (inward flows with a shock).
    pub r_sharp_downstream: Option<f64>,
    pub p0: Option<f64>,
    pub p1: Option<f64>,
    pub p_star_prime: Option<f64>,
    /// `(p_ex - p'_*) / p'_*` when `p'_*` is defined.
    pub pressure_margin: Option<f64>,
    pub rho_sharp: f64,
    pub f2_at_rho_sharp: f64,
    /// `f2(rho#)` scaled by its largest term.
    pub exit_margin: f64,
    pub exit_regime: ExitRegime,
    pub rho_sharp_sharp: Option<f64>,
    pub f2_at_rho_sharp_sharp: Option<f64>,
}

/// Both sides of a shock at `r_b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShockTransition {
    pub r_b: f64,
    pub upstream: FlowState,
    pub downstream: FlowState,
    pub a_minus: f64,
    pub a_plus: f64,
    /// Velocity ratio `U1+ / U1-`.
    pub x: f64,
}

/// A complete piecewise smooth solution with one circular shock.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShockSolution {
    pub invariants: FlowInvariants,
    pub r0: f64,
    pub r1: f64,
    pub r_b: f64,
    pub upstream: FlowState,
    pub downstream: FlowState,
    pub a_minus: f64,
    pub a_plus: f64,
    pub x: f64,
    pub p_exit: f64,
    pub exit: FlowState,
    pub regime: ShockRegime,
}

impl ShockSolution {
    /// The two smooth regions sampled with `n` points in total, split in
    /// proportion to their widths; both contain the shock radius. The
    /// profiles are returned in ascending radius.
    pub fn profiles(&self, gas: &GasModel, n: usize) -> Result<[RadialProfile; 2]> {
        if n < 4 {
            return Err(FlowError::OutOfDomain(format!("a shock profile needs at least 4 samples, got {n}")));
        }
        let inner_share = (self.r_b - self.r0) / (self.r1 - self.r0);
        let n_inner = ((n as f64 * inner_share).round() as usize).clamp(2, n - 2);
        let down = self.invariants.with_entropy(self.a_plus);
        let region = |inv: &FlowInvariants, branch, lo, hi, k, tag| {
            profile(gas, inv, branch, lo, hi, k).map(|mut p| {
                p.region = tag;
                p
            })
        };
        let up = &self.invariants;
        let (sup, sub) = (Branch::RadialSupersonic, Branch::RadialSubsonic);
        let (r0, r_b, r1, n_outer) = (self.r0, self.r_b, self.r1, n - n_inner);
        match self.invariants.direction {
            Direction::Outward => Ok([
                region(up, sup, r0, r_b, n_inner, Region::Upstream)?,
                region(&down, sub, r_b, r1, n_outer, Region::Downstream)?,
            ]),
            Direction::Inward => Ok([
                region(&down, sub, r0, r_b, n_inner, Region::Downstream)?,
                region(up, sup, r_b, r1, n_outer, Region::Upstream)?,
            ]),
        }
    }

    pub fn transition(&self) -> ShockTransition {
        ShockTransition {
            r_b: self.r_b,
            upstream: self.upstream,
            downstream: self.downstream,
            a_minus: self.a_minus,
            a_plus: self.a_plus,
            x: self.x,
        }
    }
}

/// Admissible exit pressures `(p1, p0)` and the shock radii they come from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PressureInterval {
    pub p1: f64,
    pub p0: f64,
    /// Shock radius giving `p0`.
    pub rb_p0: f64,
    /// Shock radius giving `p1`.
    pub rb_p1: f64,
    /// Set when the downstream limiting circle cuts the family before `r1`.
    pub truncated: bool,
}

/// Rankine-Hugoniot jump of an upstream state at the shock radius `up.r`.
///
/// Returns the downstream state and its entropy constant. A radially sonic
/// upstream state (within `eps_sonic`) gives the zero-strength jump.
pub fn rh_jump(gas: &GasModel, inv: &FlowInvariants, up: &FlowState) -> Result<(FlowState, f64)> {
    let r = up.r;
    let k0 = inv.swirl_k(gas, r);
    if !(k0 > 0.0) {
        return Err(FlowError::OutOfDomain(format!(
            "shock radius {r} lies inside the vacuum radius"
        )));
    }
    if up.m1sq < 1.0 - gas.eps_sonic {
        return Err(FlowError::NotSupersonic { m1sq: up.m1sq });
    }
    if up.m1sq <= 1.0 + gas.eps_sonic {
        return Ok((*up, inv.a));
    }
    let g = gas.gamma;
    let u1m = up.u1.abs();
    let u1p = k0 / u1m;
    let rho_p = inv.kappa1 * inv.kappa1 / (k0 * r * r * up.rho);
    let a_plus = (r / inv.kappa1.abs()).powf(g - 1.0)
        * u1p.powf(g)
        * ((g + 1.0) * u1m / (2.0 * g) - (g - 1.0) * u1p / (2.0 * g));
    let down = inv.with_entropy(a_plus).state_at(gas, r, rho_p);
    Ok((down, a_plus))
}

/// Relative residuals of the four jump conditions
/// `[rho U1], [rho U1^2 + p], [rho U1 U2], [B]`.
pub fn rh_residuals(gamma: f64, up: &FlowState, down: &FlowState) -> [f64; 4] {
    let mass = |s: &FlowState| s.rho * s.u1;
    let momentum = |s: &FlowState| s.rho * s.u1 * s.u1 + s.p;
    let angular = |s: &FlowState| s.rho * s.u1 * s.u2;
    let mom_scale = momentum(up).abs();
    [
        (mass(down) - mass(up)).abs() / mass(up).abs(),
        (momentum(down) - momentum(up)).abs() / mom_scale,
        (angular(down) - angular(up)).abs() / mom_scale,
        (down.bernoulli(gamma) - up.bernoulli(gamma)).abs() / up.bernoulli(gamma),
    ]
}

/// Shock at `r_b` on the incoming radially supersonic flow.
pub fn shock_at(gas: &GasModel, inv: &FlowInvariants, r_b: f64) -> Result<ShockTransition> {
    let upstream = solve_state(gas, inv, r_b, Branch::RadialSupersonic)?;
    let (downstream, a_plus) = rh_jump(gas, inv, &upstream)?;
    Ok(ShockTransition {
        r_b,
        upstream,
        downstream,
        a_minus: inv.a,
        a_plus,
        x: downstream.u1 / upstream.u1,
    })
}

/// Exit state reached by continuing the downstream region of `tr` on the
/// radially subsonic branch to `r_exit`.
pub fn downstream_exit_state(
    gas: &GasModel,
    inv: &FlowInvariants,
    tr: &ShockTransition,
    r_exit: f64,
) -> Result<FlowState> {
    solve_state(gas, &inv.with_entropy(tr.a_plus), r_exit, Branch::RadialSubsonic)
}

/// Exit pressure produced by a shock at `r_b`.
pub fn exit_pressure_of_shock(gas: &GasModel, inv: &FlowInvariants, r_b: f64, r_exit: f64) -> Result<f64> {
    let tr = shock_at(gas, inv, r_b)?;
    Ok(downstream_exit_state(gas, inv, &tr, r_exit)?.p)
}

/// `a(r) = kappa2^2 / (2 r^2 B0 - kappa2^2)`.
pub fn swirl_ratio(inv: &FlowInvariants, r: f64) -> f64 {
    let k2 = inv.kappa2 * inv.kappa2;
    k2 / (2.0 * r * r * inv.b0 - k2)
}

/// `f1(r) = (1 - U2^2/K(r)) M1^2` on the incoming supersonic branch; the
/// state behind a shock at `r` is supersonic, sonic or subsonic as `f1` is
/// below, at or above one (once `a(r) < (g-1)/(g+1)`).
pub fn classifier_f1(gas: &GasModel, inv: &FlowInvariants, r: f64) -> Result<f64> {
    let s = solve_state(gas, inv, r, Branch::RadialSupersonic)?;
    Ok((1.0 - s.u2 * s.u2 / inv.swirl_k(gas, r)) * s.m1sq)
}

/// `r_*`, where `a(r_*) = (g-1)/(g+1)`; zero without swirl.
pub fn swirl_sonic_radius(gas: &GasModel, inv: &FlowInvariants) -> f64 {
    let g = gas.gamma;
    (g * inv.kappa2 * inv.kappa2 / ((g - 1.0) * inv.b0)).sqrt()
}

/// `r'_*`, the unique radius beyond `r_*` with `f1(r'_*) = 1`: a shock there
/// leaves an exactly sonic downstream state. Without swirl `f1` is the squared
/// radial Mach number and `r'_*` degenerates to the limiting circle.
pub fn coincidence_radius(gas: &GasModel, inv: &FlowInvariants) -> Result<f64> {
    let r_sharp = limiting_radius(gas, inv)?;
    if inv.kappa2 == 0.0 {
        return Ok(r_sharp);
    }
    let h = |r: f64| classifier_f1(gas, inv, r).map(|f| f - 1.0).unwrap_or(f64::NAN);
    let lo = swirl_sonic_radius(gas, inv).max(r_sharp) * (1.0 + 1e-10);
    if !(h(lo) < 0.0) {
        return Err(FlowError::BracketFailure(format!(
            "f1 - 1 is not negative at the lower bracket {lo}"
        )));
    }
    let mut hi = 2.0 * lo;
    let mut n = 0;
    while !(h(hi) > 0.0) {
        hi *= 2.0;
        n += 1;
        if n > MAX_BISECTIONS || !hi.is_finite() {
            return Err(FlowError::BracketFailure("coincidence radius upper bracket".into()));
        }
    }
    bisect(h, lo, hi, gas.tol_root)
}

/// Value and roots of `g_a(x)`, whose sign at `x = M1^2(r_b)` gives the
/// total-Mach regime just behind a shock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DownstreamSonicTest {
    pub value: f64,
    pub x1: f64,
    /// Positive root, present when `a < (g-1)/(g+1)`.
    pub x2: Option<f64>,
}

pub fn downstream_sonic_test_g(gas: &GasModel, a: f64, x: f64) -> DownstreamSonicTest {
    let g = gas.gamma;
    let value = (1.0 - x) * (2.0 / (g + 1.0) + (g - 1.0) * x / (g + 1.0)) + a * x * (x + 2.0 / (g - 1.0));
    let crit = (g - 1.0) / (g + 1.0);
    DownstreamSonicTest {
        value,
        x1: -2.0 / (g - 1.0),
        x2: (a < crit).then(|| 1.0 / (1.0 - a / crit)),
    }
}

/// Sign test of `f2(rho#)` deciding the total-Mach state at the exit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExitStateTest {
    pub f2_at_rho_sharp: f64,
    pub rho_sharp: f64,
    pub regime: ExitRegime,
    /// `f2(rho#)` relative to its largest term.
    pub margin: f64,
}

/// `f2(rho)`: the exit density is its unique positive root.
pub fn exit_polynomial_f2(gas: &GasModel, inv: &FlowInvariants, p_ex: f64, r_exit: f64, rho: f64) -> f64 {
    let [t1, t2, t3] = f2_terms(gas, inv, p_ex, r_exit, rho);
    t1 - t2 + t3
}

fn f2_terms(gas: &GasModel, inv: &FlowInvariants, p_ex: f64, r_exit: f64, rho: f64) -> [f64; 3] {
    let g = gas.gamma;
    let r2 = r_exit * r_exit;
    [
        g * p_ex * rho / (g - 1.0),
        (inv.b0 - inv.kappa2 * inv.kappa2 / (2.0 * r2)) * rho * rho,
        inv.kappa1 * inv.kappa1 / (2.0 * r2),
    ]
}

fn scaled_f2(gas: &GasModel, inv: &FlowInvariants, p_ex: f64, r_exit: f64, rho: f64) -> (f64, f64) {
    let [t1, t2, t3] = f2_terms(gas, inv, p_ex, r_exit, rho);
    let value = t1 - t2 + t3;
    (value, value / t1.abs().max(t2.abs()).max(t3.abs()))
}

pub fn exit_state_test_f2(gas: &GasModel, inv: &FlowInvariants, p_ex: f64, r_exit: f64) -> Result<ExitStateTest> {
    if !(p_ex > 0.0) {
        return Err(FlowError::OutOfDomain(format!("exit pressure must be positive, got {p_ex}")));
    }
    let g = gas.gamma;
    let rho_sharp = g * (g + 1.0) * p_ex / (2.0 * (g - 1.0) * inv.b0);
    let (value, margin) = scaled_f2(gas, inv, p_ex, r_exit, rho_sharp);
    let regime = if margin.abs() <= gas.eps_sonic {
        ExitRegime::Sonic
    } else if value > 0.0 {
        ExitRegime::Supersonic
    } else {
        ExitRegime::Subsonic
    };
    Ok(ExitStateTest {
        f2_at_rho_sharp: value,
        rho_sharp,
        regime,
        margin,
    })
}

/// Limiting circle of a region from the closed radial-sonic relation
/// `2(g-1)B0 x^2/(g+1) = (g A)^(2/(g+1)) |kappa1|^(2(g-1)/(g+1)) x^(4/(g+1)) + (g-1) kappa2^2/(g+1)`.
///
/// This is an independent route to [`limiting_radius`].
pub fn limiting_radius_from_sonic_relation(gas: &GasModel, inv: &FlowInvariants) -> Result<f64> {
    let g = gas.gamma;
    let lhs = 2.0 * (g - 1.0) * inv.b0 / (g + 1.0);
    let coef = (g * inv.a).powf(2.0 / (g + 1.0)) * inv.kappa1.abs().powf(2.0 * (g - 1.0) / (g + 1.0));
    let swirl = (g - 1.0) / (g + 1.0) * inv.kappa2 * inv.kappa2;
    let h = |x: f64| lhs * x * x - coef * x.powf(4.0 / (g + 1.0)) - swirl;
    let mut lo = 1.0;
    let mut n = 0;
    while !(h(lo) < 0.0) {
        lo *= 0.5;
        n += 1;
        if n > MAX_BISECTIONS {
            return Err(FlowError::BracketFailure("sonic relation lower bracket".into()));
        }
    }
    let mut hi = 2.0 * lo;
    n = 0;
    while !(h(hi) > 0.0) {
        hi *= 2.0;
        n += 1;
        if n > MAX_BISECTIONS || !hi.is_finite() {
            return Err(FlowError::BracketFailure("sonic relation upper bracket".into()));
        }
    }
    bisect(h, lo, hi, gas.tol_root)
}

/// Signs of the three inequalities behind `dA+/dr_b > 0`, plus that derivative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShockInequalities {
    /// `M1+^2 + M1-^2 - 2`, must be positive.
    pub radial_mach_sum: f64,
    /// `M1+^2 M2-^2 + M1-^2 M2+^2 - M2+^2 - M2-^2`, must be non-negative.
    pub cross_mach: f64,
    /// `dK0/dr_b`, must be non-negative.
    pub dk0_drb: f64,
    /// Central difference of `A+` in the shock radius, must be positive.
    pub da_plus_drb: f64,
}

impl ShockInequalities {
    pub fn check(&self) -> Result<()> {
        if !(self.radial_mach_sum > 0.0) {
            return Err(FlowError::InequalityFailed(format!(
                "M1+^2 + M1-^2 - 2 = {} is not positive",
                self.radial_mach_sum
            )));
        }
        if self.cross_mach < -1e-12 {
            return Err(FlowError::InequalityFailed(format!(
                "cross Mach term {} is negative",
                self.cross_mach
            )));
        }
        if self.dk0_drb < 0.0 {
            return Err(FlowError::InequalityFailed(format!("dK0/dr_b = {} < 0", self.dk0_drb)));
        }
        if !(self.da_plus_drb > 0.0) {
            return Err(FlowError::InequalityFailed(format!(
                "dA+/dr_b = {} is not positive",
                self.da_plus_drb
            )));
        }
        Ok(())
    }
}

/// Evaluates the shock inequalities at a non-degenerate shock.
pub fn verify_shock_inequalities(
    gas: &GasModel,
    inv: &FlowInvariants,
    tr: &ShockTransition,
) -> Result<ShockInequalities> {
    if !(tr.x.abs() < 1.0) {
        return Err(FlowError::OutOfDomain("zero-strength shock".into()));
    }
    let g = gas.gamma;
    let (up, down) = (&tr.upstream, &tr.downstream);
    let h = 1e-6 * tr.r_b;
    let a_hi = shock_at(gas, inv, tr.r_b + h)?.a_plus;
    let a_lo = shock_at(gas, inv, tr.r_b - h)?.a_plus;
    Ok(ShockInequalities {
        radial_mach_sum: down.m1sq + up.m1sq - 2.0,
        cross_mach: down.m1sq * up.m2sq + up.m1sq * down.m2sq - down.m2sq - up.m2sq,
        dk0_drb: 2.0 * (g - 1.0) * up.u2 * up.u2 / ((g + 1.0) * tr.r_b),
        da_plus_drb: (a_hi - a_lo) / (2.0 * h),
    })
}

/// Radially supersonic flow through the annulus `(r0, r1)` with a shock and
/// prescribed exit pressure. The flow direction of the invariants decides
/// which circle is the entrance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockProblem {
    pub gas: GasModel,
    pub inv: FlowInvariants,
    pub r0: f64,
    pub r1: f64,
}

impl ShockProblem {
    pub fn new(gas: GasModel, inv: FlowInvariants, r0: f64, r1: f64) -> Result<Self> {
        inv.validate()?;
        if !(r0 > 0.0 && r1 > r0 && r1.is_finite()) {
            return Err(FlowError::OutOfDomain(format!("invalid annulus ({r0}, {r1})")));
        }
        let problem = Self { gas, inv, r0, r1 };
        let entry = solve_state(&gas, &inv, problem.entrance(), Branch::RadialSupersonic)
            .map_err(|_| {
                FlowError::InvalidBoundary("incoming flow does not reach the entrance circle".into())
            })?;
        if entry.m1sq <= 1.0 + gas.eps_sonic {
            return Err(FlowError::SonicBoundary { m1sq: entry.m1sq });
        }
        Ok(problem)
    }

    /// Problem defined by radially supersonic data on the entrance circle;
    /// `other` is the radius of the exit circle.
    pub fn from_boundary(gas: GasModel, b: &BoundaryState, other: f64) -> Result<Self> {
        let inv = FlowInvariants::from_boundary(&gas, b)?;
        let m1sq = inv.state_at(&gas, b.r, b.rho).m1sq;
        if (m1sq - 1.0).abs() <= gas.eps_sonic {
            return Err(FlowError::SonicBoundary { m1sq });
        }
        if m1sq < 1.0 {
            return Err(FlowError::NotSupersonic { m1sq });
        }
        let (r0, r1) = match inv.direction {
            Direction::Outward => (b.r, other),
            Direction::Inward => (other, b.r),
        };
        Self::new(gas, inv, r0, r1)
    }

    pub fn direction(&self) -> Direction {
        self.inv.direction
    }

    pub fn entrance(&self) -> f64 {
        match self.direction() {
            Direction::Outward => self.r0,
            Direction::Inward => self.r1,
        }
    }

    pub fn exit(&self) -> f64 {
        match self.direction() {
            Direction::Outward => self.r1,
            Direction::Inward => self.r0,
        }
    }

    fn case_prefix(&self) -> &'static str {
        match self.direction() {
            Direction::Outward => "III",
            Direction::Inward => "IV",
        }
    }

    pub fn shock_at(&self, r_b: f64) -> Result<ShockTransition> {
        shock_at(&self.gas, &self.inv, r_b)
    }

    pub fn exit_state(&self, tr: &ShockTransition) -> Result<FlowState> {
        downstream_exit_state(&self.gas, &self.inv, tr, self.exit())
    }

    pub fn exit_pressure(&self, r_b: f64) -> Result<f64> {
        exit_pressure_of_shock(&self.gas, &self.inv, r_b, self.exit())
    }

    /// `F_r(rho_*(r))` of the downstream region at the inner circle; the
    /// downstream flow reaches `r0` iff this is not positive.
    fn downstream_blockage(&self, r_b: f64) -> Result<f64> {
        let tr = self.shock_at(r_b)?;
        Ok(minimum_residual(&self.gas, &self.inv.with_entropy(tr.a_plus), self.r0))
    }

    /// Range of shock radii whose downstream flow reaches the exit.
    pub fn shock_radius_range(&self) -> Result<(f64, f64, bool)> {
        let lo = self.r0 * (1.0 + ENDPOINT_OFFSET);
        let hi = self.r1 * (1.0 - ENDPOINT_OFFSET);
        if self.direction() == Direction::Outward {
            return Ok((lo, hi, false));
        }
        let no_solution = |reason: String| FlowError::NoSolution {
            reason,
            diagnostics: Box::new(self.bare_regime()),
        };
        let r_sharp = limiting_radius(&self.gas, &self.inv)?;
        if lo <= r_sharp {
            return Err(no_solution(format!(
                "inner circle {} lies inside the limiting circle {r_sharp} of the incoming flow",
                self.r0
            )));
        }
        if self.downstream_blockage(lo)? > 0.0 {
            return Err(no_solution("no shock position lets the downstream flow reach the exit".into()));
        }
        if self.downstream_blockage(hi)? <= 0.0 {
            return Ok((lo, hi, false));
        }
        let h = |r_b: f64| self.downstream_blockage(r_b).unwrap_or(f64::NAN);
        let (feasible, _) = bisect_bracket(h, lo, hi, self.gas.tol_root)?;
        Ok((lo, feasible, true))
    }

    pub fn pressure_interval(&self) -> Result<PressureInterval> {
        let (lo, hi, truncated) = self.shock_radius_range()?;
        Ok(PressureInterval {
            p0: self.exit_pressure(lo)?,
            p1: self.exit_pressure(hi)?,
            rb_p0: lo,
            rb_p1: hi,
            truncated,
        })
    }

    /// Shock radius producing `p_ex`, within an already computed interval.
    pub fn shock_radius_for(&self, p_ex: f64, interval: &PressureInterval) -> Result<f64> {
        if !(p_ex > interval.p1 && p_ex < interval.p0) {
            return Err(FlowError::PressureOutOfRange {
                p_ex,
                p1: interval.p1,
                p0: interval.p0,
            });
        }
        let h = |r_b: f64| self.exit_pressure(r_b).map(|p| p - p_ex).unwrap_or(f64::NAN);
        bisect(h, interval.rb_p0, interval.rb_p1, self.gas.tol_root)
    }

    /// Regime-independent diagnostics of the problem.
    pub fn classifier(&self) -> Result<ShockClassifier> {
        let gas = &self.gas;
        let r_star = swirl_sonic_radius(gas, &self.inv);
        let r_star_prime = coincidence_radius(gas, &self.inv)?;
        let r_sharp_upstream = limiting_radius(gas, &self.inv)?;
        let interval = self.pressure_interval()?;
        let p_star_prime = if r_star_prime > self.r0 && r_star_prime < self.r1 {
            // Unreachable when the downstream flow cannot get to the exit.
            self.exit_pressure(r_star_prime).ok()
        } else {
            None
        };
        Ok(ShockClassifier {
            problem: *self,
            r_star,
            r_star_prime,
            r_sharp_upstream,
            interval,
            p_star_prime,
        })
    }

    fn bare_regime(&self) -> ShockRegime {
        ShockRegime {
            pattern: ShockPattern::NoSolution,
            subcase: format!("{}.NoSolution", self.case_prefix()),
            r_star: swirl_sonic_radius(&self.gas, &self.inv),
            r_star_prime: f64::NAN,
            r_sharp_upstream: limiting_radius(&self.gas, &self.inv).unwrap_or(f64::NAN),
            r_sharp_downstream: None,
            p0: None,
            p1: None,
            p_star_prime: None,
            pressure_margin: None,
            rho_sharp: f64::NAN,
            f2_at_rho_sharp: f64::NAN,
            exit_margin: f64::NAN,
            exit_regime: ExitRegime::Sonic,
            rho_sharp_sharp: None,
            f2_at_rho_sharp_sharp: None,
        }
    }

    /// Solves for the shock matching `p_ex` and classifies it.
    pub fn solve(&self, p_ex: f64) -> Result<ShockSolution> {
        self.classifier()?.solve(p_ex)
    }

    /// `n` shocks at radii spread uniformly over the admissible range.
    pub fn sweep(&self, n: usize) -> Result<Vec<SweepRow>> {
        let classifier = self.classifier()?;
        let (lo, hi) = (self.r0, classifier.interval.rb_p1.max(self.r0));
        let hi = if classifier.interval.truncated { hi } else { self.r1 };
        (0..n)
            .map(|k| {
                let r_b = lo + (hi - lo) * (k + 1) as f64 / (n + 1) as f64;
                let tr = self.shock_at(r_b)?;
                let p_exit = self.exit_state(&tr)?.p;
                let regime = classifier.regime(p_exit)?;
                Ok(SweepRow {
                    r_b,
                    p_exit,
                    a_plus: tr.a_plus,
                    x: tr.x,
                    downstream_msq: tr.downstream.msq,
                    pattern: regime.pattern,
                })
            })
            .collect()
    }
}

/// One row of a shock-position sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub r_b: f64,
    pub p_exit: f64,
    pub a_plus: f64,
    pub x: f64,
    pub downstream_msq: f64,
    pub pattern: ShockPattern,
}

/// Cached diagnostics for classifying shocks of one problem at many pressures.
#[derive(Debug, Clone, PartialEq)]
pub struct ShockClassifier {
    pub problem: ShockProblem,
    pub r_star: f64,
    pub r_star_prime: f64,
    pub r_sharp_upstream: f64,
    pub interval: PressureInterval,
    pub p_star_prime: Option<f64>,
}

impl ShockClassifier {
    /// Classification table entry for exit pressure `p_ex` (assumed admissible).
    pub fn regime(&self, p_ex: f64) -> Result<ShockRegime> {
        let pb = &self.problem;
        let gas = &pb.gas;
        let exit = exit_state_test_f2(gas, &pb.inv, p_ex, pb.exit())?;
        let (r0, r1, rp) = (pb.r0, pb.r1, self.r_star_prime);

        let pressure_margin = self.p_star_prime.map(|ps| (p_ex - ps) / ps);
        let coincident = pressure_margin.is_some_and(|m| m.abs() <= gas.eps_sonic);
        // p_ex > p'_* puts the shock inside r'_*, where f1 < 1.
        let shock_before_coincidence = pressure_margin.is_none_or(|m| m > 0.0);

        let (pattern, subcase) = match pb.direction() {
            Direction::Outward => {
                let sup_sup = |case: &str| match exit.regime {
                    ExitRegime::Supersonic => (ShockPattern::SupSupUniform, format!("{case}.1")),
                    ExitRegime::Subsonic => (ShockPattern::SupSupToSubsonicDownstream, format!("{case}.2")),
                    ExitRegime::Sonic => (ShockPattern::SupSupSonicAtExit, format!("{case}.3")),
                };
                if r1 <= rp {
                    sup_sup("1")
                } else if r0 < rp {
                    if coincident {
                        (ShockPattern::SupSonicCoincident, "2.5".into())
                    } else if shock_before_coincidence {
                        sup_sup("2")
                    } else {
                        (ShockPattern::SupSubUniform, "2.4".into())
                    }
                } else {
                    (ShockPattern::SupSubUniform, "3".into())
                }
            }
            Direction::Inward => {
                let sup_sub = |case: &str| match exit.regime {
                    ExitRegime::Subsonic => (ShockPattern::SupSubUniform, format!("{case}.1")),
                    ExitRegime::Supersonic => (ShockPattern::SubToSupersonicDownstream, format!("{case}.2")),
                    ExitRegime::Sonic => (ShockPattern::SonicAtExit, format!("{case}.3")),
                };
                if r0 >= rp {
                    sup_sub("1")
                } else if r1 > rp {
                    if coincident {
                        (ShockPattern::SupSonicCoincident, "2.5".into())
                    } else if shock_before_coincidence {
                        (ShockPattern::SupSupUniform, "2.4".into())
                    } else {
                        sup_sub("2")
                    }
                } else {
                    (ShockPattern::SupSupUniform, "3".into())
                }
            }
        };

        let (rho_ss, f2_ss) = match pb.direction() {
            Direction::Inward => {
                let (rho, f2) = self.sonic_entry_test(p_ex);
                (Some(rho), Some(f2))
            }
            Direction::Outward => (None, None),
        };

        Ok(ShockRegime {
            pattern,
            subcase: format!("{}.{subcase}", pb.case_prefix()),
            r_star: self.r_star,
            r_star_prime: self.r_star_prime,
            r_sharp_upstream: self.r_sharp_upstream,
            r_sharp_downstream: None,
            p0: Some(self.interval.p0),
            p1: Some(self.interval.p1),
            p_star_prime: self.p_star_prime,
            pressure_margin,
            rho_sharp: exit.rho_sharp,
            f2_at_rho_sharp: exit.f2_at_rho_sharp,
            exit_margin: exit.margin,
            exit_regime: exit.regime,
            rho_sharp_sharp: rho_ss,
            f2_at_rho_sharp_sharp: f2_ss,
        })
    }

    /// `(rho##, f2(rho##))` at the inner circle: the exit state of an inward
    /// flow is radially subsonic iff `f2(rho##) <= 0`.
    fn sonic_entry_test(&self, p_ex: f64) -> (f64, f64) {
        sonic_exit_test(&self.problem.gas, &self.problem.inv, p_ex, self.problem.r0)
    }

    /// Solves for the shock matching `p_ex` and attaches its classification.
    pub fn solve(&self, p_ex: f64) -> Result<ShockSolution> {
        let pb = &self.problem;
        let r_b = pb.shock_radius_for(p_ex, &self.interval)?;
        let tr = pb.shock_at(r_b)?;
        let exit = pb.exit_state(&tr)?;
        let mut regime = self.regime(p_ex)?;
        if pb.direction() == Direction::Inward {
            let downstream = limiting_radius_from_sonic_relation(&pb.gas, &pb.inv.with_entropy(tr.a_plus))?;
            if !(downstream > self.r_sharp_upstream) {
                return Err(FlowError::InequalityFailed(format!(
                    "downstream limiting circle {downstream} not outside the upstream one {}",
                    self.r_sharp_upstream
                )));
            }
            regime.r_sharp_downstream = Some(downstream);
        }
        Ok(ShockSolution {
            invariants: pb.inv,
            r0: pb.r0,
            r1: pb.r1,
            r_b,
            upstream: tr.upstream,
            downstream: tr.downstream,
            a_minus: tr.a_minus,
            a_plus: tr.a_plus,
            x: tr.x,
            p_exit: exit.p,
            exit,
            regime,
        })
    }
}

/// `(rho##, f2(rho##))` with `rho## = g p_ex / K(r_exit)`.
pub fn sonic_exit_test(gas: &GasModel, inv: &FlowInvariants, p_ex: f64, r_exit: f64) -> (f64, f64) {
    let rho = gas.gamma * p_ex / inv.swirl_k(gas, r_exit);
    (rho, exit_polynomial_f2(gas, inv, p_ex, r_exit, rho))
}

/// Pressure interval `(p1, p0)` of the shock family in `(r0, r1)`.
pub fn pressure_interval(gas: &GasModel, inv: &FlowInvariants, r0: f64, r1: f64) -> Result<PressureInterval> {
    ShockProblem::new(*gas, *inv, r0, r1)?.pressure_interval()
}

/// Shock solution with exit pressure `p_ex`.
pub fn shock_from_exit_pressure(
    gas: &GasModel,
    inv: &FlowInvariants,
    r0: f64,
    r1: f64,
    p_ex: f64,
) -> Result<ShockSolution> {
    ShockProblem::new(*gas, *inv, r0, r1)?.solve(p_ex)
}

/// Outward shock problem: radially supersonic data on the inner circle,
/// exit pressure on `r1`.
pub fn classify_problem_iii(gas: &GasModel, b: &BoundaryState, r1: f64, p_ex: f64) -> Result<ShockSolution> {
    if !(b.u1 > 0.0) {
        return Err(FlowError::InvalidBoundary("outward shock problem needs U1 > 0".into()));
    }
    ShockProblem::from_boundary(*gas, b, r1)?.solve(p_ex)
}

/// Inward shock problem: radially supersonic data on the outer circle, exit
/// pressure on `r0`. Infeasible configurations yield `NoSolution` with the
/// diagnostics that rule them out.
pub fn classify_problem_iv(gas: &GasModel, b: &BoundaryState, r0: f64, p_ex: f64) -> Result<ShockSolution> {
    if !(b.u1 < 0.0) {
        return Err(FlowError::InvalidBoundary("inward shock problem needs U1 < 0".into()));
    }
    if !(p_ex > 0.0) {
        return Err(FlowError::OutOfDomain(format!("exit pressure must be positive, got {p_ex}")));
    }
    let pb = ShockProblem::from_boundary(*gas, b, r0)?;
    let (rho_ss, f2_ss) = sonic_exit_test(gas, &pb.inv, p_ex, r0);
    let exit = exit_state_test_f2(gas, &pb.inv, p_ex, r0)?;
    let mut diag = pb.bare_regime();
    diag.rho_sharp = exit.rho_sharp;
    diag.f2_at_rho_sharp = exit.f2_at_rho_sharp;
    diag.exit_margin = exit.margin;
    diag.exit_regime = exit.regime;
    diag.rho_sharp_sharp = Some(rho_ss);
    diag.f2_at_rho_sharp_sharp = Some(f2_ss);
    if let Ok(rp) = coincidence_radius(gas, &pb.inv) {
        diag.r_star_prime = rp;
    }

    if f2_ss > 0.0 {
        return Err(FlowError::NoSolution {
            reason: "the exit state would be radially supersonic (f2(rho##) > 0)".into(),
            diagnostics: Box::new(diag),
        });
    }
    let classifier = match pb.classifier() {
        Ok(c) => c,
        Err(FlowError::NoSolution { reason, .. }) => {
            return Err(FlowError::NoSolution {
                reason,
                diagnostics: Box::new(diag),
            })
        }
        Err(e) => return Err(e),
    };
    match classifier.solve(p_ex) {
        Err(FlowError::PressureOutOfRange { p1, p0, .. }) => {
            diag.p0 = Some(p0);
            diag.p1 = Some(p1);
            diag.p_star_prime = classifier.p_star_prime;
            Err(FlowError::NoSolution {
                reason: format!("exit pressure {p_ex} outside ({p1}, {p0})"),
                diagnostics: Box::new(diag),
            })
        }
        other => other,
    }
}

/// Entropy ratio implied by the velocity ratio of a transition, for checks.
pub fn transition_entropy_ratio(gas: &GasModel, tr: &ShockTransition) -> Result<f64> {
    entropy_ratio(gas, tr.x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn setup_a() -> (GasModel, FlowInvariants) {
        (
            GasModel::new(2.0).unwrap(),
            FlowInvariants::new(1.0, 1.0, 3.0, 1.0, Direction::Outward).unwrap(),
        )
    }

    #[test]
    fn jump_at_setup_a() {
        let (gas, inv) = setup_a();
        let tr = shock_at(&gas, &inv, 1.1).unwrap();
        assert_relative_eq!(tr.upstream.rho, 0.5153048, max_relative = 1e-6);
        assert_relative_eq!(tr.downstream.u1, 0.97752, max_relative = 1e-5);
        assert_relative_eq!(tr.downstream.rho, 0.93000, max_relative = 1e-5);
        assert_relative_eq!(tr.a_plus, 1.133875, max_relative = 1e-6);
        assert_relative_eq!(tr.downstream.msq, 0.84494, max_relative = 1e-5);
        for res in rh_residuals(gas.gamma, &tr.upstream, &tr.downstream) {
            assert!(res < 1e-12, "{res}");
        }
        assert_relative_eq!(
            tr.a_plus / tr.a_minus,
            transition_entropy_ratio(&gas, &tr).unwrap(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn jump_rejects_subsonic_and_passes_sonic() {
        let (gas, inv) = setup_a();
        let sub = solve_state(&gas, &inv, 1.1, Branch::RadialSubsonic).unwrap();
        assert!(matches!(rh_jump(&gas, &inv, &sub), Err(FlowError::NotSupersonic { .. })));
        let mut sonic = sub;
        sonic.m1sq = 1.0;
        let (down, a) = rh_jump(&gas, &inv, &sonic).unwrap();
        assert_eq!(down, sonic);
        assert_eq!(a, inv.a);
    }

    #[test]
    fn exit_pressures_and_interval() {
        let (gas, inv) = setup_a();
        assert_relative_eq!(exit_pressure_of_shock(&gas, &inv, 1.1, 1.2).unwrap(), 1.18819, max_relative = 1e-5);
        assert_relative_eq!(exit_pressure_of_shock(&gas, &inv, 1.0, 1.2).unwrap(), 1.39319, max_relative = 1e-5);
        let iv = pressure_interval(&gas, &inv, 0.97, 1.2).unwrap();
        assert_relative_eq!(iv.p0, 1.44377, max_relative = 1e-5);
        assert_relative_eq!(iv.p1, 0.97853, max_relative = 1e-5);
        assert!(!iv.truncated);
    }

    #[test]
    fn f1_and_coincidence_radius() {
        let (gas, inv) = setup_a();
        assert_relative_eq!(classifier_f1(&gas, &inv, 1.0).unwrap(), 0.76155, max_relative = 1e-5);
        assert_relative_eq!(classifier_f1(&gas, &inv, 1.1).unwrap(), 1.5727, max_relative = 1e-4);
        let rp = coincidence_radius(&gas, &inv).unwrap();
        assert_relative_eq!(rp, 1.0298382, max_relative = 1e-7);
        let tr = shock_at(&gas, &inv, rp).unwrap();
        assert_relative_eq!(tr.downstream.msq, 1.0, max_relative = 1e-8);
        assert_relative_eq!(swirl_sonic_radius(&gas, &inv), (2.0f64 / 3.0).sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn g_test_roots() {
        let gas = GasModel::new(1.4).unwrap();
        let t = downstream_sonic_test_g(&gas, 0.0, 1.0);
        assert_eq!(t.value, 0.0);
        assert_relative_eq!(t.x1, -5.0, max_relative = 1e-15);
        assert_relative_eq!(t.x2.unwrap(), 1.0, max_relative = 1e-15);
        let a = 0.1;
        let t = downstream_sonic_test_g(&gas, a, 0.0);
        let x2 = t.x2.unwrap();
        assert!(downstream_sonic_test_g(&gas, a, x2).value.abs() < 1e-12);
        assert!(downstream_sonic_test_g(&gas, a, t.x1).value.abs() < 1e-12);
        assert!(downstream_sonic_test_g(&gas, 0.2, 3.0).x2.is_none());
    }

    #[test]
    fn limit_relation_agrees_with_bisection() {
        let (gas, inv) = setup_a();
        assert_relative_eq!(
            limiting_radius_from_sonic_relation(&gas, &inv).unwrap(),
            limiting_radius(&gas, &inv).unwrap(),
            max_relative = 1e-12
        );
        assert_relative_eq!(limiting_radius(&gas, &inv).unwrap(), 0.9562441, max_relative = 1e-7);
    }

    #[test]
    fn solve_round_trip_and_classification() {
        let (gas, inv) = setup_a();
        let pb = ShockProblem::new(gas, inv, 0.97, 1.2).unwrap();
        let c = pb.classifier().unwrap();
        let ps = c.p_star_prime.unwrap();
        let sol = c.solve(1.18819).unwrap();
        assert_relative_eq!(sol.r_b, 1.1, max_relative = 1e-5);
        assert_eq!(sol.regime.pattern, ShockPattern::SupSubUniform);
        assert_eq!(sol.regime.subcase, "III.2.4");
        let sol = c.solve(0.5 * (ps + c.interval.p0)).unwrap();
        assert!(sol.r_b < c.r_star_prime);
        assert!(sol.regime.subcase.starts_with("III.2."));
        assert!(sol.downstream.msq > 1.0);
        let ineq = verify_shock_inequalities(&gas, &inv, &sol.transition()).unwrap();
        ineq.check().unwrap();
    }

    #[test]
    fn out_of_range_pressure() {
        let (gas, inv) = setup_a();
        let iv = pressure_interval(&gas, &inv, 0.97, 1.2).unwrap();
        for p in [iv.p0, iv.p1, 2.0, 0.5] {
            assert!(matches!(
                shock_from_exit_pressure(&gas, &inv, 0.97, 1.2, p),
                Err(FlowError::PressureOutOfRange { .. })
            ));
        }
    }

    #[test]
    fn profiles_share_the_shock_radius() {
        let (gas, inv) = setup_a();
        let sol = shock_from_exit_pressure(&gas, &inv, 0.97, 1.2, 1.18819).unwrap();
        let [up, down] = sol.profiles(&gas, 100).unwrap();
        assert_eq!(up.states.len() + down.states.len(), 100);
        assert_eq!(up.last().r, sol.r_b);
        assert_eq!(down.first().r, sol.r_b);
        assert_eq!(up.region, Region::Upstream);
        assert_relative_eq!(down.first().rho, sol.downstream.rho, max_relative = 1e-12);
        assert_relative_eq!(down.last().p, sol.p_exit, max_relative = 1e-12);
        assert!(sol.profiles(&gas, 3).is_err());
    }

    #[test]
    fn sweep_is_monotone() {
        let (gas, inv) = setup_a();
        let rows = ShockProblem::new(gas, inv, 0.97, 1.2).unwrap().sweep(9).unwrap();
        assert_eq!(rows.len(), 9);
        assert!(rows.windows(2).all(|w| w[1].r_b > w[0].r_b && w[1].p_exit < w[0].p_exit));
        assert!(rows.windows(2).all(|w| w[1].a_plus > w[0].a_plus));
    }
}
