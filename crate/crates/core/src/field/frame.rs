use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FormJet, ScalarField, ScalarJet, Sign};
use crate::error::{Error, Result};
use crate::exterior::{self, KForm, Vector4};
use crate::Point;

/// Default floor on `φ²` below which the phase is undefined.
pub const PHASE_FLOOR: f64 = 1e-14;

/// The two amplitude functions `(u, p)` and the propagation sign `ε`.
#[derive(Debug, Clone)]
pub struct FieldPair {
    pub u: Arc<dyn ScalarField>,
    pub p: Arc<dyn ScalarField>,
    pub epsilon: Sign,
}

impl FieldPair {
    pub fn new(u: Arc<dyn ScalarField>, p: Arc<dyn ScalarField>, epsilon: Sign) -> Self {
        FieldPair { u, p, epsilon }
    }

    pub fn jets(&self, pt: &Point) -> (ScalarJet, ScalarJet) {
        (self.u.jet(pt), self.p.jet(pt))
    }
}

/// `ζ = ε dz + dξ`.
pub fn zeta(epsilon: Sign) -> KForm {
    KForm::covector([0.0, 0.0, epsilon.value(), 1.0])
}

/// `ζ̄ = (0, 0, −ε, 1)`.
pub fn zeta_bar(epsilon: Sign) -> Vector4 {
    exterior::raise(&zeta(epsilon))
}

/// `A = u dx + p dy` and `A* = εp dx − εu dy` with jet coefficients.
fn potentials(u: ScalarJet, p: ScalarJet, eps: f64) -> Result<(FormJet, FormJet)> {
    let zero = ScalarJet::constant(0.0);
    let a = FormJet::from_coefficients(1, &[u, p, zero, zero])?;
    let a_star = FormJet::from_coefficients(1, &[p * eps, u * -eps, zero, zero])?;
    Ok((a, a_star))
}

/// Jet-valued frame quantities, needed wherever `d` is applied.
#[derive(Debug, Clone, Copy)]
pub struct FrameJets {
    pub epsilon: Sign,
    pub u: ScalarJet,
    pub p: ScalarJet,
    pub zeta: KForm,
    pub a: FormJet,
    pub a_star: FormJet,
    pub f: FormJet,
    pub star_f: FormJet,
}

impl FrameJets {
    pub fn from_jets(u: ScalarJet, p: ScalarJet, epsilon: Sign) -> Result<Self> {
        let zeta = zeta(epsilon);
        let (a, a_star) = potentials(u, p, epsilon.value())?;
        let f = a.wedge_const(&zeta)?;
        let star_f = f.hodge();
        Ok(FrameJets {
            epsilon,
            u,
            p,
            zeta,
            a,
            a_star,
            f,
            star_f,
        })
    }

    /// Largest magnitude of the `(u, p)` jets, a scale for tolerances.
    pub fn scale(&self) -> f64 {
        self.u.magnitude().max(self.p.magnitude())
    }
}

/// Evaluate the frame jets of a field pair at a point.
pub fn frame_jets(fp: &FieldPair, pt: &Point) -> Result<FrameJets> {
    let (u, p) = fp.jets(pt);
    if !(u.is_finite() && p.is_finite()) {
        return Err(Error::Numeric(format!("non-finite field jets at {pt:?}")));
    }
    FrameJets::from_jets(u, p, fp.epsilon)
}

/// The null field frame at one point.
#[derive(Debug, Clone, Copy)]
pub struct NullFrame {
    pub epsilon: Sign,
    pub zeta: KForm,
    pub a: KForm,
    pub a_star: KForm,
    pub f: KForm,
    pub star_f: KForm,
    pub phi2: f64,
    /// `atan2(p, u)`; `None` where `φ²` is at or below the phase floor.
    pub psi: Option<f64>,
    pub u: ScalarJet,
    pub p: ScalarJet,
}

impl NullFrame {
    pub fn phase_defined(&self) -> bool {
        self.psi.is_some()
    }

    pub fn zeta_bar(&self) -> Vector4 {
        exterior::raise(&self.zeta)
    }

    pub fn a_bar(&self) -> Vector4 {
        exterior::raise(&self.a)
    }

    pub fn a_star_bar(&self) -> Vector4 {
        exterior::raise(&self.a_star)
    }
}

impl From<&FrameJets> for NullFrame {
    fn from(j: &FrameJets) -> Self {
        let phi2 = j.u.value * j.u.value + j.p.value * j.p.value;
        NullFrame {
            epsilon: j.epsilon,
            zeta: j.zeta,
            a: j.a.value,
            a_star: j.a_star.value,
            f: j.f.value,
            star_f: j.star_f.value,
            phi2,
            psi: (phi2 > PHASE_FLOOR).then(|| j.p.value.atan2(j.u.value)),
            u: j.u,
            p: j.p,
        }
    }
}

pub fn build_null_frame(fp: &FieldPair, pt: &Point) -> Result<NullFrame> {
    build_null_frame_with(fp, pt, PHASE_FLOOR)
}

/// As [`build_null_frame`] with an explicit phase floor.
pub fn build_null_frame_with(fp: &FieldPair, pt: &Point, phase_floor: f64) -> Result<NullFrame> {
    let jets = frame_jets(fp, pt)?;
    let mut frame = NullFrame::from(&jets);
    if frame.phi2 <= phase_floor {
        frame.psi = None;
    }
    Ok(frame)
}

/// Jet of `ψ = atan2(p, u)`: gradient `(u∇p − p∇u)/φ²`.
pub fn phase_jet(u: &ScalarJet, p: &ScalarJet, phase_floor: f64) -> Option<ScalarJet> {
    let phi2 = u.value * u.value + p.value * p.value;
    if phi2 <= phase_floor {
        return None;
    }
    Some(ScalarJet {
        value: p.value.atan2(u.value),
        grad: std::array::from_fn(|i| (u.value * p.grad[i] - p.value * u.grad[i]) / phi2),
    })
}

/// Find the constant `s` with `⋆(A∧ζ) = s·(A*∧ζ)` over a randomized sweep.
pub fn derive_sigma_star(samples: usize, seed: u64) -> Result<Sign> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found: Option<Sign> = None;
    for _ in 0..samples {
        let u = rng.gen_range(-3.0..3.0);
        let p = rng.gen_range(-3.0..3.0);
        let eps = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
        let e = eps.value();
        let z = zeta(eps);
        let star = exterior::hodge(&exterior::wedge(&KForm::covector([u, p, 0.0, 0.0]), &z)?);
        let dual = exterior::wedge(&KForm::covector([e * p, -e * u, 0.0, 0.0]), &z)?;
        let tol = 1e-12 * (1.0 + u.abs() + p.abs());
        let sign = [Sign::Plus, Sign::Minus]
            .into_iter()
            .find(|s| (star - dual * s.value()).max_abs() <= tol)
            .ok_or_else(|| Error::Invariant(format!("⋆(A∧ζ) is not ±A*∧ζ at u={u}, p={p}, ε={eps}")))?;
        if found.is_some_and(|f| f != sign) {
            return Err(Error::Invariant("σ⋆ changes sign across samples".into()));
        }
        found = Some(sign);
    }
    found.ok_or_else(|| Error::Invariant("no samples for σ⋆".into()))
}

/// Process-wide `σ⋆`, derived on first use.
pub fn sigma_star() -> Sign {
    static SIGMA: OnceLock<Sign> = OnceLock::new();
    *SIGMA.get_or_init(|| derive_sigma_star(256, 0x5348_4C4F).expect("σ⋆ is constant"))
}
