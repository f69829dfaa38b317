//! Scalar fields with exact first derivatives, the finite-difference oracle,
//! and assembly of the null frame `(ζ, A, A*, F, ⋆F, φ², ψ)`.

mod families;
mod frame;
mod jet;

use std::fmt;

pub use families::{Bump, Constant, FdField, Monomial, Polynomial, Product, Sum, Trig, TrigKind};
pub use frame::{
    build_null_frame, build_null_frame_with, derive_sigma_star, frame_jets, phase_jet, sigma_star, zeta, zeta_bar,
    FieldPair, FrameJets, NullFrame, PHASE_FLOOR,
};
pub use jet::{FormJet, ScalarJet};

use crate::error::{Error, Result};
use crate::exterior::{Vector4, DIM};
use crate::numerics;
use crate::Point;

/// A sign `±1` such as the propagation direction `ε` or chirality `κ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn from_value(v: f64) -> Result<Self> {
        if v == 1.0 {
            Ok(Sign::Plus)
        } else if v == -1.0 {
            Ok(Sign::Minus)
        } else {
            Err(Error::Config(format!("sign must be +1 or -1, got {v}")))
        }
    }

    pub fn of(v: f64) -> Self {
        if v < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// Where a field's derivatives come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Analytic,
    FiniteDifference,
}

/// A smooth real function on Minkowski space with a first-order jet.
pub trait ScalarField: Send + Sync + fmt::Debug {
    fn jet(&self, pt: &Point) -> ScalarJet;

    fn value(&self, pt: &Point) -> f64 {
        self.jet(pt).value
    }

    fn provenance(&self) -> Provenance {
        Provenance::Analytic
    }
}

/// Gradient by fourth-order central differences on every axis.
pub fn fd_jet<F>(f: F, pt: &Point, h: f64) -> Result<ScalarJet>
where
    F: Fn(&Point) -> f64,
{
    let value = f(pt);
    if !value.is_finite() {
        return Err(Error::Numeric(format!("non-finite sample at {pt:?}")));
    }
    let mut grad = [0.0; DIM];
    for (axis, g) in grad.iter_mut().enumerate() {
        *g = numerics::central_diff_4(&f, pt, axis, h)?;
    }
    Ok(ScalarJet { value, grad })
}

/// `X^μ ∂_μ f`, the Lie derivative of a scalar along a constant vector.
pub fn directional(x: &Vector4, f: &dyn ScalarField, pt: &Point) -> f64 {
    directional_jet(x, &f.jet(pt))
}

/// `X^μ ∂_μ` applied to an already evaluated jet.
pub fn directional_jet(x: &Vector4, jet: &ScalarJet) -> f64 {
    (0..DIM).map(|i| x.0[i] * jet.grad[i]).sum()
}
