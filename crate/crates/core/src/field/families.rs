//! Built-in analytic field families with closed-form jets.

use std::fmt;
use std::sync::Arc;

use super::{fd_jet, Provenance, ScalarField, ScalarJet};
use crate::exterior::DIM;
use crate::Point;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constant(pub f64);

impl ScalarField for Constant {
    fn jet(&self, _pt: &Point) -> ScalarJet {
        ScalarJet::constant(self.0)
    }
}

/// `coef · x^a y^b z^c ξ^d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monomial {
    pub coef: f64,
    pub powers: [u32; DIM],
}

impl Monomial {
    pub fn new(coef: f64, powers: [u32; DIM]) -> Self {
        Monomial { coef, powers }
    }

    fn jet(&self, pt: &Point) -> ScalarJet {
        let pows: [f64; DIM] = std::array::from_fn(|i| pt[i].powi(self.powers[i] as i32));
        let value = self.coef * pows.iter().product::<f64>();
        let grad = std::array::from_fn(|axis| {
            let n = self.powers[axis];
            if n == 0 {
                return 0.0;
            }
            let mut g = self.coef * f64::from(n) * pt[axis].powi(n as i32 - 1);
            for (j, p) in pows.iter().enumerate() {
                if j != axis {
                    g *= p;
                }
            }
            g
        });
        ScalarJet { value, grad }
    }
}

/// Polynomial in the four coordinates.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    pub terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn new(terms: Vec<Monomial>) -> Self {
        Polynomial { terms }
    }

    pub fn coordinate(axis: usize) -> Self {
        let mut powers = [0; DIM];
        powers[axis] = 1;
        Polynomial::new(vec![Monomial::new(1.0, powers)])
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|m| m.powers.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }
}

impl ScalarField for Polynomial {
    fn jet(&self, pt: &Point) -> ScalarJet {
        self.terms
            .iter()
            .fold(ScalarJet::constant(0.0), |acc, m| acc + m.jet(pt))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrigKind {
    Sin,
    Cos,
}

/// `amplitude · sin(k·x + phase)` or the cosine analogue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trig {
    pub amplitude: f64,
    pub wavevector: [f64; DIM],
    pub phase: f64,
    pub kind: TrigKind,
}

impl Trig {
    /// A wave depending on `(x, y)` and `ξ + εz` only, so that
    /// `ζ̄^μ ∂_μ` annihilates it.
    pub fn running(amplitude: f64, kx: f64, ky: f64, k: f64, epsilon: f64, phase: f64, kind: TrigKind) -> Self {
        Trig {
            amplitude,
            wavevector: [kx, ky, epsilon * k, k],
            phase,
            kind,
        }
    }
}

impl ScalarField for Trig {
    fn jet(&self, pt: &Point) -> ScalarJet {
        let arg = ScalarJet::new(
            (0..DIM).map(|i| self.wavevector[i] * pt[i]).sum::<f64>() + self.phase,
            self.wavevector,
        );
        let w = match self.kind {
            TrigKind::Sin => arg.sin(),
            TrigKind::Cos => arg.cos(),
        };
        w * self.amplitude
    }
}

/// Compactly supported bump `height · exp(−q/(1−q))`, `q = |x − c|²/r²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub height: f64,
    pub center: Point,
    pub radius: f64,
}

impl ScalarField for Bump {
    fn jet(&self, pt: &Point) -> ScalarJet {
        let r2 = self.radius * self.radius;
        let d: [f64; DIM] = std::array::from_fn(|i| pt[i] - self.center[i]);
        let q = d.iter().map(|v| v * v).sum::<f64>() / r2;
        if q >= 1.0 {
            return ScalarJet::constant(0.0);
        }
        let one_minus = 1.0 - q;
        let b = (-q / one_minus).exp();
        let db_dq = -b / (one_minus * one_minus);
        ScalarJet {
            value: self.height * b,
            grad: d.map(|di| self.height * db_dq * 2.0 * di / r2),
        }
    }
}

/// Sum of fields.
#[derive(Debug, Clone, Default)]
pub struct Sum(pub Vec<Arc<dyn ScalarField>>);

impl ScalarField for Sum {
    fn jet(&self, pt: &Point) -> ScalarJet {
        self.0.iter().fold(ScalarJet::constant(0.0), |acc, f| acc + f.jet(pt))
    }

    fn provenance(&self) -> Provenance {
        if self.0.iter().any(|f| f.provenance() == Provenance::FiniteDifference) {
            Provenance::FiniteDifference
        } else {
            Provenance::Analytic
        }
    }
}

/// Product of two fields.
#[derive(Debug, Clone)]
pub struct Product(pub Arc<dyn ScalarField>, pub Arc<dyn ScalarField>);

impl ScalarField for Product {
    fn jet(&self, pt: &Point) -> ScalarJet {
        self.0.jet(pt) * self.1.jet(pt)
    }

    fn provenance(&self) -> Provenance {
        if self.0.provenance() == Provenance::FiniteDifference || self.1.provenance() == Provenance::FiniteDifference {
            Provenance::FiniteDifference
        } else {
            Provenance::Analytic
        }
    }
}

type PointFn = dyn Fn(&Point) -> f64 + Send + Sync;

/// Field given only by point values; derivatives from [`fd_jet`].
pub struct FdField {
    f: Arc<PointFn>,
    h: f64,
}

impl FdField {
    pub fn new<F>(f: F, h: f64) -> Self
    where
        F: Fn(&Point) -> f64 + Send + Sync + 'static,
    {
        FdField { f: Arc::new(f), h }
    }
}

impl fmt::Debug for FdField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FdField").field("h", &self.h).finish_non_exhaustive()
    }
}

impl ScalarField for FdField {
    fn jet(&self, pt: &Point) -> ScalarJet {
        fd_jet(|q| (self.f)(q), pt, self.h).unwrap_or(ScalarJet {
            value: f64::NAN,
            grad: [f64::NAN; DIM],
        })
    }

    fn value(&self, pt: &Point) -> f64 {
        (self.f)(pt)
    }

    fn provenance(&self) -> Provenance {
        Provenance::FiniteDifference
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_matches_fd(f: &dyn ScalarField, pt: &Point) {
        let exact = f.jet(pt);
        let fd = fd_jet(|q| f.value(q), pt, 1e-3).unwrap();
        assert!((exact.value - fd.value).abs() < 1e-14);
        for i in 0..DIM {
            assert!(
                (exact.grad[i] - fd.grad[i]).abs() < 1e-6,
                "axis {i}: {} vs {}",
                exact.grad[i],
                fd.grad[i]
            );
        }
    }

    #[test]
    fn analytic_jets_match_fd() {
        let pt = [0.3, -0.4, 0.2, 0.1];
        assert_matches_fd(
            &Polynomial::new(vec![
                Monomial::new(1.5, [2, 1, 0, 0]),
                Monomial::new(-0.7, [0, 0, 3, 1]),
                Monomial::new(0.2, [0, 0, 0, 0]),
            ]),
            &pt,
        );
        assert_matches_fd(
            &Trig {
                amplitude: 0.8,
                wavevector: [1.0, -2.0, 0.5, 3.0],
                phase: 0.4,
                kind: TrigKind::Cos,
            },
            &pt,
        );
        assert_matches_fd(
            &Bump {
                height: 1.2,
                center: [0.0; 4],
                radius: 1.0,
            },
            &pt,
        );
    }

    #[test]
    fn bump_vanishes_outside() {
        let b = Bump {
            height: 1.0,
            center: [0.0; 4],
            radius: 0.5,
        };
        let j = b.jet(&[0.6, 0.0, 0.0, 0.0]);
        assert_eq!(j, ScalarJet::constant(0.0));
    }

    #[test]
    fn fd_field_provenance() {
        let f = FdField::new(|p| p[0] * p[1], 1e-3);
        assert_eq!(f.provenance(), Provenance::FiniteDifference);
        let j = f.jet(&[2.0, 3.0, 0.0, 0.0]);
        assert!((j.grad[0] - 3.0).abs() < 1e-9);
    }
}
