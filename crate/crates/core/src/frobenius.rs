//! The Frobenius curvature `R` of the pair `(A, ζ)` and the integrability
//! 4-forms built from `A`, `A*` and `ζ`. Everything here uses the wedge
//! product and `d` only, never the metric.

use crate::error::Result;
use crate::exterior::{self, KForm};
use crate::field::{frame_jets, phase_jet, FieldPair, FrameJets};
use crate::strain::ZetaRates;
use crate::Point;

/// `R`, `φ²` and, where the phase exists, `L_ζ̄ψ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureSample {
    pub r: f64,
    pub phi2: f64,
    pub lie_psi: Option<f64>,
}

impl CurvatureSample {
    /// `|R − φ² L_ζ̄ψ|`, or `None` where the phase is undefined.
    pub fn polar_residual(&self) -> Option<f64> {
        self.lie_psi.map(|l| (self.r - self.phi2 * l).abs())
    }
}

pub fn curvature_r(fp: &FieldPair, pt: &Point, phase_floor: f64) -> CurvatureSample {
    let (u, p) = fp.jets(pt);
    let rates = ZetaRates::new(&u, &p, fp.epsilon);
    let zb = crate::field::zeta_bar(fp.epsilon);
    CurvatureSample {
        r: rates.r,
        phi2: u.value * u.value + p.value * p.value,
        lie_psi: phase_jet(&u, &p, phase_floor).map(|psi| crate::field::directional_jet(&zb, &psi)),
    }
}

/// Coefficients on the volume form of the four integrability 4-forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrability {
    /// `dA∧A∧A*`
    pub a_a_dual: f64,
    /// `dA*∧A*∧A`
    pub dual_dual_a: f64,
    /// `dA∧A∧ζ`
    pub a_zeta: f64,
    /// `dA*∧A*∧ζ`
    pub dual_zeta: f64,
    /// `εR`
    pub eps_r: f64,
    /// `1 + max jet magnitude`, cubed; the natural size of these 4-forms.
    pub scale: f64,
}

impl Integrability {
    /// Named residuals, each expected to vanish.
    pub fn residuals(&self) -> [(&'static str, f64); 5] {
        [
            ("dA^A^A* = 0", self.a_a_dual.abs()),
            ("dA*^A*^A = 0", self.dual_dual_a.abs()),
            ("dA^A^zeta = eps R vol", (self.a_zeta - self.eps_r).abs()),
            ("dA*^A*^zeta = eps R vol", (self.dual_zeta - self.eps_r).abs()),
            ("dA^A^zeta = dA*^A*^zeta", (self.a_zeta - self.dual_zeta).abs()),
        ]
    }

    /// Tolerance for the residuals at the given base tolerance.
    pub fn tolerance(&self, base: f64) -> f64 {
        base * self.scale
    }
}

fn top(two: &KForm, one: &KForm, other: &KForm) -> Result<f64> {
    let w = exterior::wedge(&exterior::wedge(two, one)?, other)?;
    Ok(w.components()[0])
}

pub fn integrability_from_jets(jets: &FrameJets) -> Result<Integrability> {
    let da = jets.a.d()?;
    let da_star = jets.a_star.d()?;
    let (a, a_star, zeta) = (&jets.a.value, &jets.a_star.value, &jets.zeta);
    let rates = ZetaRates::new(&jets.u, &jets.p, jets.epsilon);
    Ok(Integrability {
        a_a_dual: top(&da, a, a_star)?,
        dual_dual_a: top(&da_star, a_star, a)?,
        a_zeta: top(&da, a, zeta)?,
        dual_zeta: top(&da_star, a_star, zeta)?,
        eps_r: jets.epsilon.value() * rates.r,
        scale: (1.0 + jets.scale()).powi(3),
    })
}

pub fn integrability_4forms(fp: &FieldPair, pt: &Point) -> Result<Integrability> {
    integrability_from_jets(&frame_jets(fp, pt)?)
}
