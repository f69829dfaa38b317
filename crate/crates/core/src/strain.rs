//! Strain tensors `L_Xη` of the eigenvector fields `ζ̄, Ā, Ā*`, their
//! contractions with `ζ̄`, Lie brackets, and the strain-flux 1-forms.
//!
//! Tangent and cotangent objects are identified by `η` only and `L_Xη` is the
//! symmetrized gradient, with no factor ½. Where the tabulated relations carry a
//! different sign from this convention, the difference is a constant recorded
//! once in [`BridgeSigns`].

use std::fmt;
use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exterior::{self, KForm, MetricSignature, Vector4, DIM};
use crate::field::{self, frame_jets, sigma_star, FieldPair, FrameJets, Polynomial, ScalarField, ScalarJet, Sign};
use crate::numerics::{five_point, rk4_flow, stencil_points};
use crate::random;
use crate::stress_energy::Exchange;
use crate::Point;

type Mat4 = [[f64; DIM]; DIM];

/// A tangent vector field with first-order jets of its contravariant components.
pub trait VectorField: Send + Sync + fmt::Debug {
    fn jet(&self, pt: &Point) -> [ScalarJet; DIM];

    fn value(&self, pt: &Point) -> [f64; DIM] {
        self.jet(pt).map(|j| j.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantVector(pub Vector4);

impl VectorField for ConstantVector {
    fn jet(&self, _pt: &Point) -> [ScalarJet; DIM] {
        self.0 .0.map(ScalarJet::constant)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialVector(pub [Polynomial; DIM]);

impl VectorField for PolynomialVector {
    fn jet(&self, pt: &Point) -> [ScalarJet; DIM] {
        std::array::from_fn(|i| self.0[i].jet(pt))
    }
}

/// Which potential of a field pair to raise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Potential {
    /// `Ā`
    Direct,
    /// `Ā*`
    Dual,
}

/// `Ā` or `Ā*` of a field pair as a vector field.
#[derive(Debug, Clone)]
pub struct PotentialField {
    pub pair: FieldPair,
    pub which: Potential,
}

impl PotentialField {
    pub fn new(pair: &FieldPair, which: Potential) -> Self {
        PotentialField {
            pair: pair.clone(),
            which,
        }
    }
}

impl VectorField for PotentialField {
    fn jet(&self, pt: &Point) -> [ScalarJet; DIM] {
        let (u, p) = self.pair.jets(pt);
        let e = self.pair.epsilon.value();
        let zero = ScalarJet::constant(0.0);
        // lowered components, then raised by η
        let lowered = match self.which {
            Potential::Direct => [u, p, zero, zero],
            Potential::Dual => [p * e, u * -e, zero, zero],
        };
        let eta = MetricSignature::MINKOWSKI.diag();
        std::array::from_fn(|i| lowered[i] * eta[i])
    }
}

/// A symmetric covariant 2-tensor, here always some `L_Xη`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrainTensor {
    pub cov: Mat4,
}

impl StrainTensor {
    pub fn zero() -> Self {
        StrainTensor { cov: [[0.0; DIM]; DIM] }
    }

    /// `S(v, w) = S_{μν} v^μ w^ν`.
    pub fn contract(&self, v: &Vector4, w: &Vector4) -> f64 {
        let sw = self.apply(w).as_covector();
        (0..DIM).map(|m| v.0[m] * sw[m]).sum()
    }

    /// The 1-form `S(v)_μ = S_{μν} v^ν`.
    pub fn apply(&self, v: &Vector4) -> KForm {
        KForm::covector(std::array::from_fn(|m| (0..DIM).map(|n| self.cov[m][n] * v.0[n]).sum()))
    }

    pub fn max_abs(&self) -> f64 {
        self.cov.iter().flatten().fold(0.0, |a, v| a.max(v.abs()))
    }

    pub fn max_diff(&self, other: &StrainTensor) -> f64 {
        let mut worst = 0.0f64;
        for m in 0..DIM {
            for n in 0..DIM {
                worst = worst.max((self.cov[m][n] - other.cov[m][n]).abs());
            }
        }
        worst
    }

    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for m in 0..DIM {
            for n in 0..DIM {
                worst = worst.max((self.cov[m][n] - self.cov[n][m]).abs());
            }
        }
        worst
    }
}

/// `(L_Xη)_{μν} = ∂_μ X_ν + ∂_ν X_μ` with `X_ν = η_{νσ}X^σ`.
pub fn lie_metric(x: &dyn VectorField, pt: &Point) -> StrainTensor {
    let eta = MetricSignature::MINKOWSKI.diag();
    let jet = x.jet(pt);
    StrainTensor {
        cov: std::array::from_fn(|m| std::array::from_fn(|n| eta[n] * jet[n].grad[m] + eta[m] * jet[m].grad[n])),
    }
}

/// Step of the finite-difference Jacobian used by the flow oracle.
pub const FLOW_JACOBIAN_STEP: f64 = 1e-3;

/// Flow time used by the randomized oracle sweeps.
pub const FLOW_SWEEP_STEP: f64 = 1e-4;

fn flow_jacobian(x: &dyn VectorField, pt: &Point, t: f64) -> Result<Mat4> {
    let step = |q: &Point| rk4_flow(|r: &Point| x.value(r), q, t);
    let mut jac = [[0.0; DIM]; DIM];
    for axis in 0..DIM {
        let mut images = [[0.0; DIM]; 4];
        for (q, img) in stencil_points(pt, axis, FLOW_JACOBIAN_STEP)
            .iter()
            .zip(images.iter_mut())
        {
            *img = step(q)?;
        }
        for (alpha, row) in jac.iter_mut().enumerate() {
            let [m2, m1, p1, p2] = images.map(|v| v[alpha]);
            row[axis] = five_point(m2, m1, p1, p2, FLOW_JACOBIAN_STEP);
        }
    }
    Ok(jac)
}

fn pullback_eta(jac: &Mat4) -> Mat4 {
    let eta = MetricSignature::MINKOWSKI.diag();
    std::array::from_fn(|m| std::array::from_fn(|n| (0..DIM).map(|a| eta[a] * jac[a][m] * jac[a][n]).sum()))
}

/// `L_Xη` as `(φ_t*η − φ_{−t}*η)/(2t)`, with the flow `φ_t` taken by one
/// Runge–Kutta step and its differential by finite differences.
pub fn lie_metric_flow_oracle(x: &dyn VectorField, pt: &Point, t_step: f64) -> Result<StrainTensor> {
    if !(t_step > 0.0 && t_step.is_finite()) {
        return Err(Error::Numeric(format!("flow step must be positive, got {t_step}")));
    }
    let fwd = pullback_eta(&flow_jacobian(x, pt, t_step)?);
    let bwd = pullback_eta(&flow_jacobian(x, pt, -t_step)?);
    let cov: Mat4 = std::array::from_fn(|m| std::array::from_fn(|n| (fwd[m][n] - bwd[m][n]) / (2.0 * t_step)));
    if cov.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Numeric(format!(
            "flow oracle produced non-finite entries at {pt:?}"
        )));
    }
    Ok(StrainTensor { cov })
}

/// `D = L_Āη`.
pub fn strain_d(fp: &FieldPair, pt: &Point) -> StrainTensor {
    lie_metric(&PotentialField::new(fp, Potential::Direct), pt)
}

/// `D* = L_Ā*η`.
pub fn strain_dstar(fp: &FieldPair, pt: &Point) -> StrainTensor {
    lie_metric(&PotentialField::new(fp, Potential::Dual), pt)
}

/// The tabulated closed form of `D` in terms of the partials of `(u, p)`.
pub fn reference_d(u: &ScalarJet, p: &ScalarJet) -> StrainTensor {
    let [ux, uy, uz, uxi] = u.grad;
    let [px, py, pz, pxi] = p.grad;
    StrainTensor {
        cov: [
            [2.0 * ux, uy + px, uz, uxi],
            [uy + px, 2.0 * py, pz, pxi],
            [uz, pz, 0.0, 0.0],
            [uxi, pxi, 0.0, 0.0],
        ],
    }
}

/// The tabulated closed form of `D*`, kept for comparison only. Its `(1,2)`
/// entry `−ε(p_y + u_x)` matches neither `L_Ā*η` nor its negative.
pub fn reference_dstar_tabulated(u: &ScalarJet, p: &ScalarJet, epsilon: Sign) -> StrainTensor {
    let e = epsilon.value();
    let [ux, uy, uz, uxi] = u.grad;
    let [px, py, pz, pxi] = p.grad;
    StrainTensor {
        cov: [
            [-2.0 * e * px, -e * (py + ux), -e * pz, -e * pxi],
            [-e * (py + ux), 2.0 * e * uy, e * uz, e * uxi],
            [-e * pz, e * uz, 0.0, 0.0],
            [-e * pxi, e * uxi, 0.0, 0.0],
        ],
    }
}

/// `[X, Y]^μ = X^ν∂_νY^μ − Y^ν∂_νX^μ`.
pub fn lie_bracket(x: &dyn VectorField, y: &dyn VectorField, pt: &Point) -> Vector4 {
    let xj = x.jet(pt);
    let yj = y.jet(pt);
    Vector4(std::array::from_fn(|m| {
        (0..DIM)
            .map(|n| xj[n].value * yj[m].grad[n] - yj[n].value * xj[m].grad[n])
            .sum()
    }))
}

/// Rates of `(u, p)` along `ζ̄` and the quantities built from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaRates {
    /// `u_ξ − εu_z`
    pub du: f64,
    /// `p_ξ − εp_z`
    pub dp: f64,
    /// `R = u(p_ξ − εp_z) − p(u_ξ − εu_z)`
    pub r: f64,
    /// `L_ζ̄φ²`
    pub lie_phi2: f64,
}

impl ZetaRates {
    pub fn new(u: &ScalarJet, p: &ScalarJet, epsilon: Sign) -> Self {
        let zb = field::zeta_bar(epsilon);
        let du = field::directional_jet(&zb, u);
        let dp = field::directional_jet(&zb, p);
        ZetaRates {
            du,
            dp,
            r: u.value * dp - p.value * du,
            lie_phi2: 2.0 * (u.value * du + p.value * dp),
        }
    }

    pub fn of(fp: &FieldPair, pt: &Point) -> Self {
        let (u, p) = fp.jets(pt);
        ZetaRates::new(&u, &p, fp.epsilon)
    }
}

/// Constant signs relating this crate's convention to tabulated relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BridgeSigns {
    /// `⋆(A∧ζ) = σ⋆ A*∧ζ`.
    pub sigma_star: Sign,
    /// Factor on the tabulated values of `D(Ā*,ζ̄)` and `D*(Ā,ζ̄)`.
    pub s46: Sign,
    /// Factor on the tabulated `⋆[D(ζ̄)∧A*∧ζ] = ½L_ζ̄φ² ζ`.
    pub s8: Sign,
    /// Factor on the tabulated `D(ζ̄)∧D*(ζ̄) = ε[(u_ξ−εu_z)² + (p_ξ−εp_z)²] dx∧dy`.
    pub s_wedge: Sign,
    /// Factor on the tabulated `D*(ζ̄) = ε[−(p_ξ−εp_z)dx + (u_ξ−εu_z)dy]`.
    pub s_dstar: Sign,
}

impl BridgeSigns {
    pub fn entries(&self) -> [(&'static str, Sign); 5] {
        [
            ("sigma_star", self.sigma_star),
            ("s46", self.s46),
            ("s8", self.s8),
            ("s_wedge", self.s_wedge),
            ("s_dstar", self.s_dstar),
        ]
    }
}

/// Samples used to fix [`BridgeSigns`].
pub const BRIDGE_SWEEP_SAMPLES: usize = 1024;
const BRIDGE_SEED: u64 = 0x4252_4447;

struct SignVote {
    name: &'static str,
    seen: Option<Sign>,
}

impl SignVote {
    fn new(name: &'static str) -> Self {
        SignVote { name, seen: None }
    }

    /// Record `computed = s · tabulated` when `tabulated` is large enough to tell.
    fn observe(&mut self, computed: f64, tabulated: f64, scale: f64) -> Result<()> {
        if tabulated.abs() <= 1e-6 * (1.0 + scale) {
            return Ok(());
        }
        let tol = 1e-9 * (1.0 + scale);
        let s = if (computed - tabulated).abs() <= tol {
            Sign::Plus
        } else if (computed + tabulated).abs() <= tol {
            Sign::Minus
        } else {
            return Err(Error::Invariant(format!(
                "{}: computed {computed} is not ±{tabulated}",
                self.name
            )));
        };
        if self.seen.is_some_and(|prev| prev != s) {
            return Err(Error::Invariant(format!("{} changes sign across samples", self.name)));
        }
        self.seen = Some(s);
        Ok(())
    }

    fn finish(self) -> Result<Sign> {
        self.seen
            .ok_or_else(|| Error::Invariant(format!("{}: no informative sample", self.name)))
    }
}

/// Determine every bridge sign over a seeded randomized sweep, failing if any
/// sign changes between samples.
pub fn derive_bridge_signs(samples: usize, seed: u64) -> Result<BridgeSigns> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s46 = SignVote::new("s46");
    let mut s8 = SignVote::new("s8");
    let mut s_wedge = SignVote::new("s_wedge");
    let mut s_dstar = SignVote::new("s_dstar");
    for _ in 0..samples {
        let fp = random::field_pair(&mut rng);
        let pt = random::point(&mut rng, 1.0);
        let jets = frame_jets(&fp, &pt)?;
        let scale = jets.scale().powi(2);
        let e = fp.epsilon.value();
        let z = ZetaRates::new(&jets.u, &jets.p, fp.epsilon);
        let c = contract_relations(&fp, &pt);
        s46.observe(c.d_astar, -e * z.r, scale)?;
        s46.observe(c.dstar_a, e * z.r, scale)?;

        let flux = strain_flux_forms(&fp, &pt)?;
        let target = flux.zeta * (0.5 * z.lie_phi2);
        for k in 0..DIM {
            s8.observe(flux.d_sf.components()[k], target.components()[k], scale)?;
        }

        let w = exterior::wedge(&flux.d_zeta, &flux.dstar_zeta)?;
        s_wedge.observe(w.get(0b0011), e * (z.du * z.du + z.dp * z.dp), scale)?;

        let tabulated = KForm::covector([-e * z.dp, e * z.du, 0.0, 0.0]);
        for k in 0..DIM {
            s_dstar.observe(flux.dstar_zeta.components()[k], tabulated.components()[k], scale)?;
        }
    }
    Ok(BridgeSigns {
        sigma_star: sigma_star(),
        s46: s46.finish()?,
        s8: s8.finish()?,
        s_wedge: s_wedge.finish()?,
        s_dstar: s_dstar.finish()?,
    })
}

/// Process-wide bridge signs, determined once on first use.
pub fn bridge_signs() -> BridgeSigns {
    static SIGNS: OnceLock<BridgeSigns> = OnceLock::new();
    *SIGNS.get_or_init(|| derive_bridge_signs(BRIDGE_SWEEP_SAMPLES, BRIDGE_SEED).expect("bridge signs are constant"))
}

/// The contractions of `D` and `D*` with `ζ̄`, `Ā` and `Ā*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractRelations {
    pub epsilon: Sign,
    /// `D(ζ̄, ζ̄)`
    pub d_zz: f64,
    /// `D*(ζ̄, ζ̄)`
    pub dstar_zz: f64,
    /// `D(Ā, ζ̄)`
    pub d_a: f64,
    /// `D*(Ā*, ζ̄)`
    pub dstar_astar: f64,
    /// `D(Ā*, ζ̄)`
    pub d_astar: f64,
    /// `D*(Ā, ζ̄)`
    pub dstar_a: f64,
    pub rates: ZetaRates,
}

impl ContractRelations {
    /// Named residuals, each expected to vanish.
    pub fn residuals(&self, signs: &BridgeSigns) -> Vec<(&'static str, f64)> {
        let e = self.epsilon.value();
        let half = -0.5 * self.rates.lie_phi2;
        let r = self.rates.r;
        let s46 = signs.s46.value();
        vec![
            ("D(zb,zb) = 0", self.d_zz.abs()),
            ("D*(zb,zb) = 0", self.dstar_zz.abs()),
            ("D(A,zb) = -1/2 L phi^2", (self.d_a - half).abs()),
            ("D*(A*,zb) = -1/2 L phi^2", (self.dstar_astar - half).abs()),
            ("D(A*,zb) = s46 (-eps R)", (self.d_astar - s46 * (-e * r)).abs()),
            ("D*(A,zb) = s46 (eps R)", (self.dstar_a - s46 * (e * r)).abs()),
            ("D(A*,zb) + D*(A,zb) = 0", (self.d_astar + self.dstar_a).abs()),
        ]
    }
}

pub fn contract_relations(fp: &FieldPair, pt: &Point) -> ContractRelations {
    let (u, p) = fp.jets(pt);
    let e = fp.epsilon.value();
    let zb = field::zeta_bar(fp.epsilon);
    let a_bar = Vector4([-u.value, -p.value, 0.0, 0.0]);
    let a_star_bar = Vector4([-e * p.value, e * u.value, 0.0, 0.0]);
    let d = strain_d(fp, pt);
    let ds = strain_dstar(fp, pt);
    ContractRelations {
        epsilon: fp.epsilon,
        d_zz: d.contract(&zb, &zb),
        dstar_zz: ds.contract(&zb, &zb),
        d_a: d.contract(&a_bar, &zb),
        dstar_astar: ds.contract(&a_star_bar, &zb),
        d_astar: d.contract(&a_star_bar, &zb),
        dstar_a: ds.contract(&a_bar, &zb),
        rates: ZetaRates::new(&u, &p, fp.epsilon),
    }
}

/// The strain 1-forms along `ζ̄`, the four strain fluxes and the exchange
/// terms they are compared with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrainFlux {
    pub epsilon: Sign,
    pub zeta: KForm,
    /// `D(ζ̄)`
    pub d_zeta: KForm,
    /// `D*(ζ̄)`
    pub dstar_zeta: KForm,
    /// `⋆[D(ζ̄)∧A∧ζ]`
    pub d_f: KForm,
    /// `⋆[D*(ζ̄)∧A*∧ζ]`
    pub dstar_sf: KForm,
    /// `⋆[D(ζ̄)∧A*∧ζ]`
    pub d_sf: KForm,
    /// `⋆[D*(ζ̄)∧A∧ζ]`
    pub dstar_f: KForm,
    pub exchange: Exchange,
    pub rates: ZetaRates,
    /// Largest jet magnitude of `(u, p)`.
    pub scale: f64,
}

impl StrainFlux {
    /// Named residuals (max norm of the 1-form difference), each expected to vanish.
    pub fn residuals(&self, signs: &BridgeSigns) -> Vec<(&'static str, f64)> {
        let e = self.epsilon.value();
        let r = self.rates.r;
        let sig = signs.sigma_star.value();
        let rotation = self.zeta * (-e * r);
        let translation = self.zeta * (0.5 * self.rates.lie_phi2);
        let diff = |a: KForm, b: KForm| (a - b).max_abs();
        vec![
            ("*[D(zb)^A^zeta] = -eps R zeta", diff(self.d_f, rotation)),
            ("*[D*(zb)^A*^zeta] = -eps R zeta", diff(self.dstar_sf, rotation)),
            ("*[D(zb)^A^zeta] = *[D*(zb)^A*^zeta]", diff(self.d_f, self.dstar_sf)),
            (
                "*[D(zb)^A*^zeta] = s8 1/2 L phi^2 zeta",
                diff(self.d_sf, translation * signs.s8.value()),
            ),
            ("*[D(zb)^A*^zeta] = -*[D*(zb)^A^zeta]", diff(self.d_sf, -self.dstar_f)),
            ("i(F)dF = 1/2 L phi^2 zeta", diff(self.exchange.f_df, translation)),
            ("i(*F)d*F = 1/2 L phi^2 zeta", diff(self.exchange.sf_dsf, translation)),
            ("i(*F)dF = -sigma eps R zeta", diff(self.exchange.sf_df, rotation * sig)),
            ("i(F)d*F = sigma eps R zeta", diff(self.exchange.f_dsf, rotation * -sig)),
        ]
    }
}

fn star_flux(strain: &KForm, potential: &KForm, zeta: &KForm) -> Result<KForm> {
    let three = exterior::wedge(&exterior::wedge(strain, potential)?, zeta)?;
    Ok(exterior::hodge(&three))
}

pub fn strain_flux_forms(fp: &FieldPair, pt: &Point) -> Result<StrainFlux> {
    let jets: FrameJets = frame_jets(fp, pt)?;
    let zb = field::zeta_bar(fp.epsilon);
    let d_zeta = strain_d(fp, pt).apply(&zb);
    let dstar_zeta = strain_dstar(fp, pt).apply(&zb);
    let (a, a_star, zeta) = (&jets.a.value, &jets.a_star.value, &jets.zeta);
    Ok(StrainFlux {
        epsilon: fp.epsilon,
        zeta: *zeta,
        d_zeta,
        dstar_zeta,
        d_f: star_flux(&d_zeta, a, zeta)?,
        dstar_sf: star_flux(&dstar_zeta, a_star, zeta)?,
        d_sf: star_flux(&d_zeta, a_star, zeta)?,
        dstar_f: star_flux(&dstar_zeta, a, zeta)?,
        exchange: Exchange::from_jets(&jets)?,
        rates: ZetaRates::new(&jets.u, &jets.p, fp.epsilon),
        scale: jets.scale(),
    })
}

/// `D(ζ̄)∧D*(ζ̄)`, a multiple of `dx∧dy`. Needs `φ² > phase_floor`.
pub fn wedge_independence(fp: &FieldPair, pt: &Point, phase_floor: f64) -> Result<KForm> {
    let (u, p) = fp.jets(pt);
    let phi2 = u.value * u.value + p.value * p.value;
    if phi2 <= phase_floor {
        return Err(Error::Numeric(format!(
            "φ² = {phi2} is below the phase floor at {pt:?}"
        )));
    }
    let zb = field::zeta_bar(fp.epsilon);
    let d = strain_d(fp, pt).apply(&zb);
    let ds = strain_dstar(fp, pt).apply(&zb);
    exterior::wedge(&d, &ds)
}
