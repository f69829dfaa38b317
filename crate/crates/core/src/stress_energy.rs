//! The Maxwell–Minkowski stress-energy-momentum tensor
//! `T_μ^ν = −½[F_{μσ}F^{νσ} + (⋆F)_{μσ}(⋆F)^{νσ}]`, its null structure, its
//! divergence in three independently computed forms, and duality rotations.

use crate::error::{Error, Result};
use crate::exterior::{self, KForm, MetricSignature, Vector4, DIM};
use crate::field::{frame_jets, FieldPair, FormJet, FrameJets, NullFrame};
use crate::numerics::{five_point, stencil_points};
use crate::Point;

type Mat4 = [[f64; DIM]; DIM];

/// Mixed tensor `T_μ^ν`; `mixed[μ][ν]` with the row index lower.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyTensor {
    pub mixed: Mat4,
}

impl EnergyTensor {
    pub fn zero() -> Self {
        EnergyTensor {
            mixed: [[0.0; DIM]; DIM],
        }
    }

    pub fn trace(&self) -> f64 {
        (0..DIM).map(|i| self.mixed[i][i]).sum()
    }

    /// Energy density `T_4^4`.
    pub fn energy_density(&self) -> f64 {
        self.mixed[3][3]
    }

    /// `T_{μν} = T_μ^σ η_{σν}`.
    pub fn lowered(&self) -> Mat4 {
        let eta = MetricSignature::MINKOWSKI.diag();
        std::array::from_fn(|m| std::array::from_fn(|n| self.mixed[m][n] * eta[n]))
    }

    /// `T^{μν} = η^{μσ} T_σ^ν`.
    pub fn raised(&self) -> Mat4 {
        let eta = MetricSignature::MINKOWSKI.diag();
        std::array::from_fn(|m| std::array::from_fn(|n| eta[m] * self.mixed[m][n]))
    }

    /// `T_{μν} T^{μν}`.
    pub fn square(&self) -> f64 {
        let lo = self.lowered();
        let hi = self.raised();
        (0..DIM)
            .flat_map(|m| (0..DIM).map(move |n| (m, n)))
            .map(|(m, n)| lo[m][n] * hi[m][n])
            .sum()
    }

    /// `v^μ T_μ^ν`.
    pub fn apply(&self, v: &Vector4) -> Vector4 {
        Vector4(std::array::from_fn(|n| {
            (0..DIM).map(|m| v.0[m] * self.mixed[m][n]).sum()
        }))
    }

    pub fn max_abs(&self) -> f64 {
        self.mixed.iter().flatten().fold(0.0, |a, v| a.max(v.abs()))
    }

    pub fn max_diff(&self, other: &EnergyTensor) -> f64 {
        (0..DIM)
            .flat_map(|m| (0..DIM).map(move |n| (m, n)))
            .map(|(m, n)| (self.mixed[m][n] - other.mixed[m][n]).abs())
            .fold(0.0, f64::max)
    }

    /// Largest absolute 2×2 minor of the mixed matrix.
    pub fn max_minor(&self) -> f64 {
        let t = &self.mixed;
        let mut worst = 0.0f64;
        for r0 in 0..DIM {
            for r1 in r0 + 1..DIM {
                for c0 in 0..DIM {
                    for c1 in c0 + 1..DIM {
                        let minor = t[r0][c0] * t[r1][c1] - t[r0][c1] * t[r1][c0];
                        worst = worst.max(minor.abs());
                    }
                }
            }
        }
        worst
    }
}

/// `F^{μν}` of a 2-form.
pub fn raise_two_form(f: &KForm) -> Mat4 {
    let eta = MetricSignature::MINKOWSKI.diag();
    let m = f.to_matrix();
    std::array::from_fn(|a| std::array::from_fn(|b| eta[a] * eta[b] * m[a][b]))
}

/// `−½ F_{μσ} F^{νσ}`: the contribution of one 2-form to `T_μ^ν`.
pub fn partial_tensor(f: &KForm) -> EnergyTensor {
    let lo = f.to_matrix();
    let hi = raise_two_form(f);
    EnergyTensor {
        mixed: std::array::from_fn(|m| {
            std::array::from_fn(|n| -0.5 * (0..DIM).map(|s| lo[m][s] * hi[n][s]).sum::<f64>())
        }),
    }
}

/// `T_μ^ν` of a 2-form, with its dual computed by the Hodge star.
pub fn energy_tensor(f: &KForm) -> EnergyTensor {
    let star_f = exterior::hodge(f);
    sum_parts(f, &star_f)
}

fn sum_parts(f: &KForm, star_f: &KForm) -> EnergyTensor {
    let a = partial_tensor(f);
    let b = partial_tensor(star_f);
    EnergyTensor {
        mixed: std::array::from_fn(|m| std::array::from_fn(|n| a.mixed[m][n] + b.mixed[m][n])),
    }
}

/// `T_μ^ν(F, ⋆F)` for an explicit pair, rejecting a `⋆F` that is not `hodge(F)`.
pub fn energy_tensor_pair(f: &KForm, star_f: &KForm) -> Result<EnergyTensor> {
    let expected = exterior::hodge(f);
    let tol = 1e-12 * (1.0 + f.max_abs());
    if (expected - *star_f).max_abs() > tol {
        return Err(Error::Invariant(format!(
            "supplied ⋆F differs from hodge(F) by {}",
            (expected - *star_f).max_abs()
        )));
    }
    Ok(sum_parts(f, star_f))
}

pub fn energy_tensor_frame(frame: &NullFrame) -> EnergyTensor {
    sum_parts(&frame.f, &frame.star_f)
}

/// The rank-one form `φ² ζ_μ ζ̄^ν` expected for null frames.
pub fn null_rank_one(frame: &NullFrame) -> EnergyTensor {
    let z = frame.zeta.as_covector();
    let zb = frame.zeta_bar().0;
    EnergyTensor {
        mixed: std::array::from_fn(|m| std::array::from_fn(|n| frame.phi2 * z[m] * zb[n])),
    }
}

/// `(T_{μν}T^{μν}, I₁, I₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Invariants {
    pub tt: f64,
    pub i1: f64,
    pub i2: f64,
}

impl Invariants {
    pub fn max_abs(&self) -> f64 {
        self.tt.abs().max(self.i1.abs()).max(self.i2.abs())
    }
}

/// `I₁ = ½F_{μν}F^{μν}`, `I₂ = ½F_{μν}(⋆F)^{μν}` and `T_{μν}T^{μν}`.
pub fn isotropy_invariants(f: &KForm) -> Invariants {
    let star_f = exterior::hodge(f);
    let lo = f.to_matrix();
    let hi = raise_two_form(f);
    let hi_star = raise_two_form(&star_f);
    let mut i1 = 0.0;
    let mut i2 = 0.0;
    for a in 0..DIM {
        for b in 0..DIM {
            i1 += 0.5 * lo[a][b] * hi[a][b];
            i2 += 0.5 * lo[a][b] * hi_star[a][b];
        }
    }
    Invariants {
        tt: energy_tensor(f).square(),
        i1,
        i2,
    }
}

/// `|ζ̄·T|, |Ā·T|, |Ā*·T|` in the max norm; all vanish for null frames.
pub fn eigen_residuals(t: &EnergyTensor, frame: &NullFrame) -> [f64; 3] {
    [frame.zeta_bar(), frame.a_bar(), frame.a_star_bar()].map(|v| t.apply(&v).norm_inf())
}

/// The four exchange 1-forms, each an ordered (`α<β`) contraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exchange {
    /// `i(F̄)dF`
    pub f_df: KForm,
    /// `i(⋆F̄)d⋆F`
    pub sf_dsf: KForm,
    /// `i(⋆F̄)dF`
    pub sf_df: KForm,
    /// `i(F̄)d⋆F`
    pub f_dsf: KForm,
}

impl Exchange {
    pub fn from_jets(jets: &FrameJets) -> Result<Self> {
        let df = jets.f.d()?;
        let dsf = jets.star_f.d()?;
        let f = &jets.f.value;
        let sf = &jets.star_f.value;
        Ok(Exchange {
            f_df: exterior::interior_2_3(f, &df)?,
            sf_dsf: exterior::interior_2_3(sf, &dsf)?,
            sf_df: exterior::interior_2_3(sf, &df)?,
            f_dsf: exterior::interior_2_3(f, &dsf)?,
        })
    }
}

/// The divergence `∂_ν T_μ^ν` computed three ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceReport {
    /// Finite-difference divergence of `T` sampled around the point.
    pub direct: [f64; DIM],
    /// `½[F^{αβ}(dF)_{αβμ} + (⋆F)^{αβ}(d⋆F)_{αβμ}]`, unrestricted sums.
    pub via_df: [f64; DIM],
    /// `F_{μν}(δF)^ν + (⋆F)_{μν}(δ⋆F)^ν` with `δ = ⋆d⋆`.
    pub via_codiff: [f64; DIM],
    pub exchange: Exchange,
    /// Scale of `T` near the point, for relative tolerances.
    pub scale: f64,
}

impl DivergenceReport {
    fn spread(a: &[f64; DIM], b: &[f64; DIM]) -> f64 {
        (0..DIM).map(|i| (a[i] - b[i]).abs()).fold(0.0, f64::max)
    }

    /// Largest pairwise disagreement among the three routes.
    pub fn max_disagreement(&self) -> f64 {
        Self::spread(&self.direct, &self.via_df)
            .max(Self::spread(&self.direct, &self.via_codiff))
            .max(Self::spread(&self.via_df, &self.via_codiff))
    }

    /// `via_df − [i(F̄)dF + i(⋆F̄)d⋆F]`, zero up to rounding.
    pub fn interior_gap(&self) -> f64 {
        let sum = self.exchange.f_df + self.exchange.sf_dsf;
        Self::spread(&self.via_df, &sum.as_covector())
    }
}

#[allow(clippy::needless_range_loop)]
fn half_full_contraction(k: &KForm, g: &KForm) -> [f64; DIM] {
    let hi = raise_two_form(k);
    std::array::from_fn(|mu| {
        let mut s = 0.0;
        for a in 0..DIM {
            for b in 0..DIM {
                s += hi[a][b] * g.tensor(&[a, b, mu]);
            }
        }
        0.5 * s
    })
}

/// `δK = ⋆d⋆K` for a 2-form jet.
fn codifferential(k: &FormJet) -> Result<KForm> {
    Ok(exterior::hodge(&k.hodge().d()?))
}

fn lower_contract(k: &KForm, v: &Vector4) -> [f64; DIM] {
    let m = k.to_matrix();
    std::array::from_fn(|mu| (0..DIM).map(|n| m[mu][n] * v.0[n]).sum())
}

/// Compare the three forms of the divergence of `T` at a point.
pub fn divergence_report(fp: &FieldPair, pt: &Point, h: f64) -> Result<DivergenceReport> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Numeric(format!("step must be positive, got {h}")));
    }
    let jets = frame_jets(fp, pt)?;

    let mut direct = [0.0; DIM];
    let mut scale = energy_tensor(&jets.f.value).max_abs();
    for nu in 0..DIM {
        let mut samples = [EnergyTensor::zero(); 4];
        for (q, t) in stencil_points(pt, nu, h).iter().zip(samples.iter_mut()) {
            *t = energy_tensor(&frame_jets(fp, q)?.f.value);
            if t.mixed.iter().flatten().any(|v| !v.is_finite()) {
                return Err(Error::Numeric(format!("non-finite T at {q:?}")));
            }
            scale = scale.max(t.max_abs());
        }
        for (mu, d) in direct.iter_mut().enumerate() {
            let [m2, m1, p1, p2] = samples.map(|t| t.mixed[mu][nu]);
            *d += five_point(m2, m1, p1, p2, h);
        }
    }

    let df = jets.f.d()?;
    let dsf = jets.star_f.d()?;
    let a = half_full_contraction(&jets.f.value, &df);
    let b = half_full_contraction(&jets.star_f.value, &dsf);
    let via_df = std::array::from_fn(|i| a[i] + b[i]);

    let delta_f = exterior::raise(&codifferential(&jets.f)?);
    let delta_sf = exterior::raise(&codifferential(&jets.star_f)?);
    let c = lower_contract(&jets.f.value, &delta_f);
    let d = lower_contract(&jets.star_f.value, &delta_sf);
    let via_codiff = std::array::from_fn(|i| c[i] + d[i]);

    Ok(DivergenceReport {
        direct,
        via_df,
        via_codiff,
        exchange: Exchange::from_jets(&jets)?,
        scale,
    })
}

/// Residual of `½F_{μν}F^{μν}δ_α^β = F_{μα}F^{μβ} − (⋆F)_{μα}(⋆F)^{μβ}`.
pub fn duality_identity_residual(f: &KForm) -> f64 {
    let star_f = exterior::hodge(f);
    let (lo, hi) = (f.to_matrix(), raise_two_form(f));
    let (slo, shi) = (star_f.to_matrix(), raise_two_form(&star_f));
    let mut f2 = 0.0;
    for a in 0..DIM {
        for b in 0..DIM {
            f2 += lo[a][b] * hi[a][b];
        }
    }
    let mut worst = 0.0f64;
    for alpha in 0..DIM {
        for beta in 0..DIM {
            let delta = if alpha == beta { 1.0 } else { 0.0 };
            let rhs: f64 = (0..DIM)
                .map(|m| lo[m][alpha] * hi[m][beta] - slo[m][alpha] * shi[m][beta])
                .sum();
            worst = worst.max((0.5 * f2 * delta - rhs).abs());
        }
    }
    worst
}

/// Result of rotating `(F, ⋆F)` by a constant duality angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityRotation {
    pub f: KForm,
    pub star_f: KForm,
    /// `max |T(F', ⋆F') − T(F, ⋆F)|`.
    pub t_residual: f64,
}

/// `F' = F cos f + ⋆F sin f`, with `⋆F'` recomputed by the star.
pub fn duality_rotation(f: &KForm, angle: f64) -> DualityRotation {
    let star_f = exterior::hodge(f);
    let rotated = *f * angle.cos() + star_f * angle.sin();
    let rotated_star = exterior::hodge(&rotated);
    let t0 = energy_tensor(f);
    let t1 = sum_parts(&rotated, &rotated_star);
    DualityRotation {
        f: rotated,
        star_f: rotated_star,
        t_residual: t0.max_diff(&t1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{build_null_frame, Constant, Polynomial, Sign};
    use std::sync::Arc;

    fn constant_pair(u: f64, p: f64, eps: Sign) -> FieldPair {
        FieldPair::new(Arc::new(Constant(u)), Arc::new(Constant(p)), eps)
    }

    #[test]
    fn unit_frame_tensor() {
        let frame = build_null_frame(&constant_pair(1.0, 0.0, Sign::Plus), &[0.0; 4]).unwrap();
        let t = energy_tensor_frame(&frame);
        let mut expected = [[0.0; 4]; 4];
        expected[3][3] = 1.0;
        expected[2][2] = -1.0;
        expected[2][3] = 1.0;
        expected[3][2] = -1.0;
        assert_eq!(t.mixed, expected);
        assert_eq!(t.mixed, null_rank_one(&frame).mixed);
    }

    #[test]
    fn zero_field_tensor() {
        assert_eq!(energy_tensor(&KForm::zero(2)), EnergyTensor::zero());
        let inv = isotropy_invariants(&KForm::zero(2));
        assert_eq!(inv.max_abs(), 0.0);
    }

    #[test]
    fn electric_field_invariants() {
        let f = KForm::monomial(&[0, 3]);
        let inv = isotropy_invariants(&f);
        assert_eq!(inv.i1, -1.0);
        assert_eq!(inv.i2, 0.0);
        let t = energy_tensor(&f);
        assert_eq!(t.trace(), 0.0);
        let frame_like = Vector4([0.0, 0.0, 1.0, 0.0]);
        assert_eq!(t.apply(&frame_like).norm_inf(), 0.5);
    }

    #[test]
    fn pair_rejects_wrong_dual() {
        let f = KForm::monomial(&[0, 1]);
        assert!(energy_tensor_pair(&f, &f).is_err());
        assert!(energy_tensor_pair(&f, &exterior::hodge(&f)).is_ok());
    }

    #[test]
    fn constant_field_has_zero_divergence() {
        let r = divergence_report(&constant_pair(0.7, -0.2, Sign::Minus), &[0.1, 0.2, 0.3, 0.4], 1e-3).unwrap();
        assert_eq!(r.direct, [0.0; 4]);
        assert_eq!(r.via_df, [0.0; 4]);
        assert_eq!(r.via_codiff, [0.0; 4]);
    }

    #[test]
    fn linear_pair_divergence_routes_agree() {
        let fp = FieldPair::new(
            Arc::new(Polynomial::coordinate(3)),
            Arc::new(Polynomial::coordinate(2)),
            Sign::Plus,
        );
        let r = divergence_report(&fp, &[0.0, 0.0, 1.0, 2.0], 1e-3).unwrap();
        assert!(r.max_disagreement() < 1e-6, "{r:?}");
        assert!(r.interior_gap() < 1e-14);
        assert!(r.via_df.iter().any(|v| v.abs() > 0.1));
    }

    #[test]
    fn duality_examples() {
        assert!(duality_identity_residual(&KForm::monomial(&[0, 3])) < 1e-12);
        assert_eq!(duality_identity_residual(&KForm::zero(2)), 0.0);
        let f = KForm::from_components(2, &[0.3, -1.0, 0.2, 0.5, 0.9, -0.4]).unwrap();
        let r = duality_rotation(&f, 0.0);
        assert_eq!(r.f, f);
        assert_eq!(r.star_f, exterior::hodge(&f));
    }

    #[test]
    fn quarter_turn_of_null_frame_keeps_t() {
        let frame = build_null_frame(&constant_pair(0.4, 1.3, Sign::Plus), &[0.0; 4]).unwrap();
        let r = duality_rotation(&frame.f, std::f64::consts::FRAC_PI_2);
        assert!(r.t_residual < 1e-12);
    }
}
