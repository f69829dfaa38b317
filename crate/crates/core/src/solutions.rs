//! The helical solution family
//! `u = φ(x, y, ξ+εz) cos(−εκz/l₀ + c)`, `p = φ(x, y, ξ+εz) sin(−εκz/l₀ + c)`,
//! its equations of motion, and the energy and one-period action integrals.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exterior::DIM;
use crate::field::{frame_jets, FieldPair, ScalarField, ScalarJet, Sign};
use crate::frobenius::{curvature_r, integrability_from_jets};
use crate::numerics::{simpson_box, Axis, CompensatedSum, Grid, Quadrature, TolerancePolicy};
use crate::strain::ZetaRates;
use crate::stress_energy::Exchange;
use crate::Point;

/// Profile of the amplitude `φ(x, y, s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AmplitudeKind {
    /// `φ0 · b(ρ²/r0²) · b((s − s_c)²/s0²)` with `b(q) = exp(−q/(1−q))` for
    /// `q < 1` and zero beyond.
    ProductMollifier,
    /// `φ0 · exp(−ρ²/r0² − (s − s_c)²/s0²)` on the box `|x|, |y| ≤ r0`,
    /// `|s − s_c| ≤ s0`, zero outside it.
    TruncatedGaussian,
    /// `φ ≡ φ0`. Has no bounded support, so it cannot be integrated.
    Uniform,
}

impl fmt::Display for AmplitudeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AmplitudeKind::ProductMollifier => "product-mollifier",
            AmplitudeKind::TruncatedGaussian => "truncated-gaussian",
            AmplitudeKind::Uniform => "uniform",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitude {
    pub kind: AmplitudeKind,
    pub phi0: f64,
    /// Transverse support radius.
    pub r0: f64,
    /// Longitudinal half-width in `s = ξ + εz`.
    pub s0: f64,
    pub s_center: f64,
}

impl Amplitude {
    /// Unit peak, `r0 = 1`, `s0 = π l₀`, centred at `s = 0`.
    pub fn default_for(kind: AmplitudeKind, l0: f64) -> Self {
        Amplitude {
            kind,
            phi0: 1.0,
            r0: 1.0,
            s0: PI * l0,
            s_center: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.phi0.is_finite() || !self.s_center.is_finite() {
            return Err(Error::Config("amplitude phi0 and s_center must be finite".into()));
        }
        if !(self.r0.is_finite() && self.r0 > 0.0) {
            return Err(Error::Config(format!("amplitude r0 must be positive, got {}", self.r0)));
        }
        if !(self.s0.is_finite() && self.s0 > 0.0) {
            return Err(Error::Config(format!("amplitude s0 must be positive, got {}", self.s0)));
        }
        Ok(())
    }

    /// Whether `(x, y, s)` lies in the closed support region.
    /// Boundary nodes of a grid fitted to the box may land a few ulps outside
    /// it once `s = ξ + εz` is rounded, hence the relative slack.
    pub fn contains(&self, x: f64, y: f64, s: f64) -> bool {
        let ds = (s - self.s_center).abs();
        let (r0, s0) = (self.r0 * (1.0 + BOX_SLACK), self.s0 * (1.0 + BOX_SLACK));
        match self.kind {
            AmplitudeKind::ProductMollifier => x * x + y * y <= r0 * r0 && ds <= s0,
            AmplitudeKind::TruncatedGaussian => x.abs() <= r0 && y.abs() <= r0 && ds <= s0,
            AmplitudeKind::Uniform => true,
        }
    }

    /// `φ` and its partials `(∂x, ∂y, ∂s)`.
    pub fn eval(&self, x: f64, y: f64, s: f64) -> (f64, [f64; 3]) {
        let ds = s - self.s_center;
        let (r2, s2) = (self.r0 * self.r0, self.s0 * self.s0);
        match self.kind {
            AmplitudeKind::Uniform => (self.phi0, [0.0; 3]),
            AmplitudeKind::ProductMollifier => {
                let (bt, dbt) = mollifier((x * x + y * y) / r2);
                let (bs, dbs) = mollifier(ds * ds / s2);
                let v = self.phi0 * bt * bs;
                (
                    v,
                    [
                        self.phi0 * dbt * 2.0 * x / r2 * bs,
                        self.phi0 * dbt * 2.0 * y / r2 * bs,
                        self.phi0 * bt * dbs * 2.0 * ds / s2,
                    ],
                )
            }
            AmplitudeKind::TruncatedGaussian => {
                if !self.contains(x, y, s) {
                    return (0.0, [0.0; 3]);
                }
                let v = self.phi0 * (-(x * x + y * y) / r2 - ds * ds / s2).exp();
                (v, [-2.0 * x / r2 * v, -2.0 * y / r2 * v, -2.0 * ds / s2 * v])
            }
        }
    }
}

const BOX_SLACK: f64 = 1e-12;

/// `b(q) = exp(−q/(1−q))` and `b'(q)`, both zero for `q ≥ 1`.
fn mollifier(q: f64) -> (f64, f64) {
    if q >= 1.0 {
        return (0.0, 0.0);
    }
    let one_minus = 1.0 - q;
    let b = (-q / one_minus).exp();
    (b, -b / (one_minus * one_minus))
}

/// Point counts of the quadrature grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionGrid {
    /// Nodes along `x, y, z` for each spatial integral.
    pub points: [usize; 3],
    /// Nodes along `ξ` for the action integral.
    pub xi_points: usize,
    /// Half-widths of the spatial box about the support centre. `None` uses
    /// the support's bounding box.
    pub half_widths: Option<[f64; 3]>,
}

impl Default for SolutionGrid {
    fn default() -> Self {
        SolutionGrid {
            points: [65; 3],
            xi_points: 5,
            half_widths: None,
        }
    }
}

impl SolutionGrid {
    pub fn validate(&self) -> Result<()> {
        for (axis, &n) in self.points.iter().enumerate() {
            Axis::new(0.0, 1.0, n).validate(axis)?;
        }
        Axis::new(0.0, 1.0, self.xi_points).validate(3)?;
        if let Some(hw) = self.half_widths {
            if hw.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
                return Err(Error::Config(format!("grid half-widths must be positive, got {hw:?}")));
            }
        }
        Ok(())
    }
}

/// Parameters of one member of the solution family.
#[derive(Debug, Clone, PartialEq)]
pub struct PhLOConfig {
    pub epsilon: Sign,
    pub kappa: Sign,
    pub l0: f64,
    pub phase_const: f64,
    pub c_light: f64,
    /// Lower end of the one-period `ξ` window of the action integral.
    pub xi0: f64,
    pub amplitude: Amplitude,
    pub grid: SolutionGrid,
    pub tolerances: TolerancePolicy,
}

impl Default for PhLOConfig {
    fn default() -> Self {
        PhLOConfig {
            epsilon: Sign::Plus,
            kappa: Sign::Plus,
            l0: 1.0,
            phase_const: 0.0,
            c_light: 1.0,
            xi0: 0.0,
            amplitude: Amplitude::default_for(AmplitudeKind::ProductMollifier, 1.0),
            grid: SolutionGrid::default(),
            tolerances: TolerancePolicy::default(),
        }
    }
}

impl PhLOConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.l0.is_finite() && self.l0 > 0.0) {
            return Err(Error::Config(format!("l0 must be positive, got {}", self.l0)));
        }
        if !(self.c_light.is_finite() && self.c_light > 0.0) {
            return Err(Error::Config(format!("c_light must be positive, got {}", self.c_light)));
        }
        if !self.phase_const.is_finite() || !self.xi0.is_finite() {
            return Err(Error::Config("phase_const and xi0 must be finite".into()));
        }
        self.amplitude.validate()?;
        self.grid.validate()?;
        self.tolerances.validate()
    }

    /// `T = 2πl₀/c`.
    pub fn period(&self) -> f64 {
        TAU * self.l0 / self.c_light
    }

    pub fn frequency(&self) -> f64 {
        1.0 / self.period()
    }

    /// `κ/l₀`, the prescribed phase rate along `ζ̄`.
    pub fn phase_rate(&self) -> f64 {
        self.kappa.value() / self.l0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Quadrant {
    Cos,
    Sin,
}

/// One of `u`, `p` of a solution.
#[derive(Debug, Clone, Copy)]
struct Component {
    amplitude: Amplitude,
    epsilon: f64,
    wavenumber: f64,
    phase_const: f64,
    which: Quadrant,
}

impl Component {
    fn amplitude_jet(&self, pt: &Point) -> ScalarJet {
        let s = pt[3] + self.epsilon * pt[2];
        let (v, [gx, gy, gs]) = self.amplitude.eval(pt[0], pt[1], s);
        ScalarJet::new(v, [gx, gy, self.epsilon * gs, gs])
    }
}

impl ScalarField for Component {
    fn jet(&self, pt: &Point) -> ScalarJet {
        let phi = self.amplitude_jet(pt);
        let phase = ScalarJet::new(
            self.wavenumber * pt[2] + self.phase_const,
            [0.0, 0.0, self.wavenumber, 0.0],
        );
        let wave = match self.which {
            Quadrant::Cos => phase.cos(),
            Quadrant::Sin => phase.sin(),
        };
        phi * wave
    }
}

/// A solution-family field pair.
#[derive(Debug, Clone)]
pub struct SolutionField {
    pub config: PhLOConfig,
    pub pair: FieldPair,
}

pub fn build_solution(cfg: &PhLOConfig) -> Result<SolutionField> {
    cfg.validate()?;
    let eps = cfg.epsilon.value();
    let part = |which| Component {
        amplitude: cfg.amplitude,
        epsilon: eps,
        wavenumber: -eps * cfg.kappa.value() / cfg.l0,
        phase_const: cfg.phase_const,
        which,
    };
    Ok(SolutionField {
        config: cfg.clone(),
        pair: FieldPair::new(
            Arc::new(part(Quadrant::Cos)),
            Arc::new(part(Quadrant::Sin)),
            cfg.epsilon,
        ),
    })
}

/// Whether a point lies in the configured support tube.
pub fn support_geometry(cfg: &PhLOConfig, pt: &Point) -> bool {
    cfg.amplitude
        .contains(pt[0], pt[1], pt[3] + cfg.epsilon.value() * pt[2])
}

impl SolutionField {
    pub fn amplitude_squared(&self, pt: &Point) -> f64 {
        let s = pt[3] + self.config.epsilon.value() * pt[2];
        let (v, _) = self.config.amplitude.eval(pt[0], pt[1], s);
        v * v
    }

    /// Bounding box `(lo, hi)` of the support in `(x, y, z)` at fixed `ξ`.
    pub fn support_box(&self, xi: f64) -> Option<([f64; 3], [f64; 3])> {
        let a = &self.config.amplitude;
        if a.kind == AmplitudeKind::Uniform {
            return None;
        }
        let zc = self.config.epsilon.value() * (a.s_center - xi);
        Some(([-a.r0, -a.r0, zc - a.s0], [a.r0, a.r0, zc + a.s0]))
    }

    /// The spatial quadrature grid at fixed `ξ` built from the configured
    /// point counts.
    pub fn spatial_grid(&self, xi: f64) -> Result<Grid> {
        let (lo, hi) = self.support_box(xi).ok_or_else(|| {
            Error::Coverage(format!(
                "{} amplitude has unbounded support",
                self.config.amplitude.kind
            ))
        })?;
        let hw = self
            .config
            .grid
            .half_widths
            .unwrap_or(std::array::from_fn(|i| 0.5 * (hi[i] - lo[i])));
        Ok(Grid::new(
            (0..3)
                .map(|i| {
                    let c = 0.5 * (lo[i] + hi[i]);
                    Axis::new(c - hw[i], c + hw[i], self.config.grid.points[i])
                })
                .collect(),
        ))
    }

    fn check_coverage(&self, xi: f64, grid: &Grid) -> Result<()> {
        let (lo, hi) = self.support_box(xi).ok_or_else(|| {
            Error::Coverage(format!(
                "{} amplitude has unbounded support",
                self.config.amplitude.kind
            ))
        })?;
        if grid.axes.len() != 3 || !grid.covers(&lo, &hi) {
            return Err(Error::Coverage(format!(
                "grid does not cover the support box {lo:?}..{hi:?} at xi = {xi}"
            )));
        }
        Ok(())
    }

    /// Uniform random points of the support at arbitrary `ξ` within one period.
    pub fn support_points<R: Rng>(&self, rng: &mut R, n: usize) -> Result<Vec<Point>> {
        let mut out = Vec::with_capacity(n);
        let mut tries = 0usize;
        while out.len() < n {
            tries += 1;
            if tries > 100 * n + 1000 {
                return Err(Error::Numeric("support sampling rejected too many points".into()));
            }
            let xi = self.config.xi0 + rng.gen_range(0.0..self.config.l0);
            let (lo, hi) = self.support_box(xi).unwrap_or(([-1.0; 3], [1.0; 3]));
            let pt = [
                rng.gen_range(lo[0]..hi[0]),
                rng.gen_range(lo[1]..hi[1]),
                rng.gen_range(lo[2]..hi[2]),
                xi,
            ];
            if support_geometry(&self.config, &pt) && self.amplitude_squared(&pt) > 0.0 {
                out.push(pt);
            }
        }
        Ok(out)
    }
}

/// Worst violations of `L_ζ̄φ² = 0` and `L_ζ̄ψ = κ/l₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EomResiduals {
    pub lie_phi2: f64,
    pub lie_psi: f64,
    /// Points where `φ²` exceeded the phase floor.
    pub phase_points: usize,
    /// Largest `|R − φ²κ/l₀|`.
    pub curvature: f64,
}

pub fn eom_residuals(fp: &FieldPair, phase_rate: f64, phase_floor: f64, pts: &[Point]) -> EomResiduals {
    let mut out = EomResiduals {
        lie_phi2: 0.0,
        lie_psi: 0.0,
        phase_points: 0,
        curvature: 0.0,
    };
    for pt in pts {
        let rates = ZetaRates::of(fp, pt);
        out.lie_phi2 = out.lie_phi2.max(rates.lie_phi2.abs());
        let c = curvature_r(fp, pt, phase_floor);
        out.curvature = out.curvature.max((c.r - c.phi2 * phase_rate).abs());
        if let Some(l) = c.lie_psi {
            out.phase_points += 1;
            out.lie_psi = out.lie_psi.max((l - phase_rate).abs());
        }
    }
    out
}

impl SolutionField {
    pub fn eom_residuals(&self, pts: &[Point]) -> EomResiduals {
        eom_residuals(
            &self.pair,
            self.config.phase_rate(),
            self.config.tolerances.phase_floor,
            pts,
        )
    }
}

/// The nonlinear field equations, and a witness that `F` is not closed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlinearCheck {
    /// max `|i(F̄)dF|`
    pub f_df: f64,
    /// max `|i(⋆F̄)d⋆F|`
    pub sf_dsf: f64,
    /// max `|i(⋆F̄)dF + i(F̄)d⋆F|`
    pub cross: f64,
    /// max `|dF|`
    pub df: f64,
}

impl NonlinearCheck {
    pub fn max_residual(&self) -> f64 {
        self.f_df.max(self.sf_dsf).max(self.cross)
    }
}

pub fn nonlinear_equation_check(fp: &FieldPair, pts: &[Point]) -> Result<NonlinearCheck> {
    let mut out = NonlinearCheck {
        f_df: 0.0,
        sf_dsf: 0.0,
        cross: 0.0,
        df: 0.0,
    };
    for pt in pts {
        let jets = frame_jets(fp, pt)?;
        let ex = Exchange::from_jets(&jets)?;
        out.f_df = out.f_df.max(ex.f_df.max_abs());
        out.sf_dsf = out.sf_dsf.max(ex.sf_dsf.max_abs());
        out.cross = out.cross.max((ex.sf_df + ex.f_dsf).max_abs());
        out.df = out.df.max(jets.f.d()?.max_abs());
    }
    Ok(out)
}

/// `E(ξ) = ∫ T_4^4 dx dy dz = ∫ φ² dx dy dz` on an explicit grid.
pub fn energy_integral_on(sol: &SolutionField, xi: f64, grid: &Grid) -> Result<Quadrature> {
    sol.check_coverage(xi, grid)?;
    simpson_box(|x| sol.amplitude_squared(&[x[0], x[1], x[2], xi]), grid)
}

/// `E(ξ)` on the configured grid.
pub fn energy_integral(sol: &SolutionField, xi: f64) -> Result<Quadrature> {
    energy_integral_on(sol, xi, &sol.spatial_grid(xi)?)
}

/// The one-period action and its comparison with `E·T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionReport {
    /// `E` at `ξ₀`.
    pub energy: Quadrature,
    pub period: f64,
    /// `T ∫∫ (dA∧A∧ζ)/ω dV dξ` over one `l₀` window of `ξ`.
    pub action: f64,
    /// Same with `dA*∧A*∧ζ`.
    pub action_dual: f64,
    /// Combined quadrature error bar of `action`.
    pub action_error: f64,
    /// `action / (E·T)`; `None` when `E·T` vanishes.
    pub ratio: Option<f64>,
    pub expected_sign: f64,
}

impl ActionReport {
    /// `|action − εκ E T|`.
    pub fn deviation(&self) -> f64 {
        (self.action - self.expected_sign * self.energy.value * self.period).abs()
    }

    /// Error bar of `action − εκ E T` from both quadratures.
    pub fn error_bar(&self) -> f64 {
        self.action_error + self.period * self.energy.error
    }

    /// Relative disagreement of the two 4-form integrals.
    pub fn dual_disagreement(&self) -> f64 {
        let d = (self.action - self.action_dual).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.action.abs().max(self.action_dual.abs())
        }
    }
}

pub fn action_integral(sol: &SolutionField) -> Result<ActionReport> {
    let cfg = &sol.config;
    let energy = energy_integral(sol, cfg.xi0)?;
    let period = cfg.period();
    let xi_axis = Axis::new(cfg.xi0, cfg.xi0 + cfg.l0, cfg.grid.xi_points);
    xi_axis.validate(3)?;
    let (wf, wc) = (xi_axis.weights(), xi_axis.coarse_weights());

    let slices: Vec<Result<(Quadrature, Quadrature)>> = (0..xi_axis.points)
        .into_par_iter()
        .map(|k| {
            let xi = xi_axis.node(k);
            let grid = sol.spatial_grid(xi)?;
            sol.check_coverage(xi, &grid)?;
            let coef = |x: &[f64], dual: bool| {
                let pt = [x[0], x[1], x[2], xi];
                match frame_jets(&sol.pair, &pt).and_then(|j| integrability_from_jets(&j)) {
                    Ok(i) if dual => i.dual_zeta,
                    Ok(i) => i.a_zeta,
                    Err(_) => f64::NAN,
                }
            };
            let direct = simpson_box(|x| coef(x, false), &grid)?;
            let dual = simpson_box(|x| coef(x, true), &grid)?;
            Ok((direct, dual))
        })
        .collect();

    let mut fine = CompensatedSum::default();
    let mut coarse = CompensatedSum::default();
    let mut dual = CompensatedSum::default();
    let mut spatial_err = CompensatedSum::default();
    for (k, s) in slices.into_iter().enumerate() {
        let (q, qd) = s?;
        fine.add(wf[k] * q.value);
        coarse.add(wc[k] * q.value);
        dual.add(wf[k] * qd.value);
        spatial_err.add(wf[k].abs() * q.error);
    }
    let action = period * fine.value();
    let action_error = period * ((fine.value() - coarse.value()).abs() / 15.0 + spatial_err.value());
    let et = energy.value * period;
    Ok(ActionReport {
        energy,
        period,
        action,
        action_dual: period * dual.value(),
        action_error,
        ratio: (et != 0.0).then(|| action / et),
        expected_sign: cfg.epsilon.value() * cfg.kappa.value(),
    })
}

/// `[Ā, ζ̄]` on a solution, used to exhibit the rotation of the strain.
pub fn potential_zeta_bracket(sol: &SolutionField, pt: &Point) -> [f64; DIM] {
    let rates = ZetaRates::of(&sol.pair, pt);
    [rates.du, rates.dp, 0.0, 0.0]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(kind: AmplitudeKind) -> PhLOConfig {
        PhLOConfig {
            amplitude: Amplitude::default_for(kind, 1.0),
            ..PhLOConfig::default()
        }
    }

    #[test]
    fn uniform_helix_values() {
        let sol = build_solution(&cfg(AmplitudeKind::Uniform)).unwrap();
        let (u, p) = sol.pair.jets(&[0.3, -0.2, 0.0, 0.7]);
        assert_eq!((u.value, p.value), (1.0, 0.0));
        let z = 0.4;
        let (u, p) = sol.pair.jets(&[0.0, 0.0, z, 0.0]);
        assert!((u.value - (-z).cos()).abs() < 1e-15);
        assert!((p.value - (-z).sin()).abs() < 1e-15);
    }

    #[test]
    fn phase_advances_one_turn_per_step() {
        let c = PhLOConfig {
            l0: 1.7,
            amplitude: Amplitude::default_for(AmplitudeKind::Uniform, 1.7),
            ..PhLOConfig::default()
        };
        let sol = build_solution(&c).unwrap();
        let a = [0.1, 0.2, 0.3, 0.4];
        let dz = TAU * c.l0;
        let b = [a[0], a[1], a[2] + dz, a[3] - dz];
        let (ua, pa) = sol.pair.jets(&a);
        let (ub, pb) = sol.pair.jets(&b);
        assert!((ua.value - ub.value).abs() < 1e-12);
        assert!((pa.value - pb.value).abs() < 1e-12);
    }

    #[test]
    fn outside_support_is_exactly_zero() {
        let c = cfg(AmplitudeKind::ProductMollifier);
        let sol = build_solution(&c).unwrap();
        let pt = [2.0, 0.0, 0.0, 0.0];
        assert!(!support_geometry(&c, &pt));
        let (u, p) = sol.pair.jets(&pt);
        assert_eq!(u.value, 0.0);
        assert_eq!(p.value, 0.0);
        assert_eq!(sol.amplitude_squared(&pt), 0.0);
    }

    #[test]
    fn support_examples() {
        let c = cfg(AmplitudeKind::ProductMollifier);
        let sol = build_solution(&c).unwrap();
        assert!(support_geometry(&c, &[0.0; 4]));
        let shell = [1.0 - 1e-6, 0.0, 0.0, 0.0];
        assert!(support_geometry(&c, &shell));
        assert!(sol.amplitude_squared(&shell) < 1e-3);
    }

    #[test]
    fn invalid_amplitude_is_rejected() {
        let mut c = cfg(AmplitudeKind::ProductMollifier);
        c.amplitude.r0 = 0.0;
        assert!(matches!(build_solution(&c), Err(Error::Config(_))));
        let mut c = cfg(AmplitudeKind::ProductMollifier);
        c.amplitude.s0 = -1.0;
        assert!(matches!(build_solution(&c), Err(Error::Config(_))));
        let c = PhLOConfig {
            l0: -1.0,
            ..PhLOConfig::default()
        };
        assert!(matches!(build_solution(&c), Err(Error::Config(_))));
    }

    #[test]
    fn amplitude_jets_match_fd() {
        for kind in [AmplitudeKind::ProductMollifier, AmplitudeKind::TruncatedGaussian] {
            let sol = build_solution(&cfg(kind)).unwrap();
            let pt = [0.3, -0.25, 0.4, 0.2];
            for f in [&sol.pair.u, &sol.pair.p] {
                let exact = f.jet(&pt);
                let fd = crate::field::fd_jet(|q| f.value(q), &pt, 1e-3).unwrap();
                for i in 0..DIM {
                    assert!((exact.grad[i] - fd.grad[i]).abs() < 1e-6, "{kind} axis {i}");
                }
            }
        }
    }

    #[test]
    fn linear_pair_is_not_a_solution() {
        let fp = FieldPair::new(
            Arc::new(crate::field::Polynomial::coordinate(3)),
            Arc::new(crate::field::Polynomial::coordinate(2)),
            Sign::Plus,
        );
        let r = eom_residuals(&fp, 1.0, 1e-14, &[[0.0, 0.0, 1.0, 2.0]]);
        assert_eq!(r.lie_phi2, 2.0);
    }

    #[test]
    fn uniform_amplitude_cannot_be_integrated() {
        let sol = build_solution(&cfg(AmplitudeKind::Uniform)).unwrap();
        assert!(matches!(energy_integral(&sol, 0.0), Err(Error::Coverage(_))));
    }

    #[test]
    fn narrow_grid_is_a_coverage_error() {
        let mut c = cfg(AmplitudeKind::ProductMollifier);
        c.grid.half_widths = Some([0.5, 1.0, 4.0]);
        let sol = build_solution(&c).unwrap();
        assert!(matches!(energy_integral(&sol, 0.0), Err(Error::Coverage(_))));
    }

    #[test]
    fn zero_amplitude_has_zero_energy() {
        let mut c = cfg(AmplitudeKind::ProductMollifier);
        c.amplitude.phi0 = 0.0;
        c.grid.points = [17; 3];
        let sol = build_solution(&c).unwrap();
        assert_eq!(energy_integral(&sol, 0.0).unwrap().value, 0.0);
        let a = action_integral(&sol).unwrap();
        assert_eq!(a.action, 0.0);
        assert_eq!(a.ratio, None);
    }
}
