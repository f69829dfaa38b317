use std::ops::{Add, Mul, Neg, Sub};

use crate::error::Result;
use crate::exterior::{self, KForm, DIM};

/// Value and exact 4-gradient `(∂x, ∂y, ∂z, ∂ξ)` of a scalar at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScalarJet {
    pub value: f64,
    pub grad: [f64; DIM],
}

impl ScalarJet {
    pub fn new(value: f64, grad: [f64; DIM]) -> Self {
        ScalarJet { value, grad }
    }

    pub fn constant(value: f64) -> Self {
        ScalarJet {
            value,
            grad: [0.0; DIM],
        }
    }

    /// The coordinate function `x^axis` at a point.
    pub fn coordinate(pt: &crate::Point, axis: usize) -> Self {
        let mut grad = [0.0; DIM];
        grad[axis] = 1.0;
        ScalarJet { value: pt[axis], grad }
    }

    /// Chain rule for `g ∘ self` given `g(v)` and `g'(v)`.
    pub fn compose(self, g: f64, dg: f64) -> Self {
        ScalarJet {
            value: g,
            grad: self.grad.map(|d| dg * d),
        }
    }

    pub fn sin(self) -> Self {
        self.compose(self.value.sin(), self.value.cos())
    }

    pub fn cos(self) -> Self {
        self.compose(self.value.cos(), -self.value.sin())
    }

    pub fn exp(self) -> Self {
        let e = self.value.exp();
        self.compose(e, e)
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.grad.iter().all(|g| g.is_finite())
    }

    /// Largest magnitude among the value and gradient entries.
    pub fn magnitude(&self) -> f64 {
        self.grad.iter().fold(self.value.abs(), |a, g| a.max(g.abs()))
    }
}

impl Add for ScalarJet {
    type Output = ScalarJet;
    fn add(self, o: ScalarJet) -> ScalarJet {
        ScalarJet {
            value: self.value + o.value,
            grad: std::array::from_fn(|i| self.grad[i] + o.grad[i]),
        }
    }
}

impl Sub for ScalarJet {
    type Output = ScalarJet;
    fn sub(self, o: ScalarJet) -> ScalarJet {
        self + (-o)
    }
}

impl Neg for ScalarJet {
    type Output = ScalarJet;
    fn neg(self) -> ScalarJet {
        self * -1.0
    }
}

impl Mul for ScalarJet {
    type Output = ScalarJet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, o: ScalarJet) -> ScalarJet {
        ScalarJet {
            value: self.value * o.value,
            grad: std::array::from_fn(|i| self.grad[i] * o.value + self.value * o.grad[i]),
        }
    }
}

impl Mul<f64> for ScalarJet {
    type Output = ScalarJet;
    fn mul(self, s: f64) -> ScalarJet {
        ScalarJet {
            value: self.value * s,
            grad: self.grad.map(|g| g * s),
        }
    }
}

/// A form with jet-valued coefficients: its value and its partial derivative
/// along each coordinate axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormJet {
    pub value: KForm,
    pub partials: [KForm; DIM],
}

impl FormJet {
    pub fn constant(value: KForm) -> Self {
        FormJet {
            value,
            partials: [KForm::zero(value.grade()); DIM],
        }
    }

    /// Assemble from one jet per basis component, in storage order.
    pub fn from_coefficients(grade: usize, coeffs: &[ScalarJet]) -> Result<Self> {
        let values: Vec<f64> = coeffs.iter().map(|c| c.value).collect();
        let value = KForm::from_components(grade, &values)?;
        let mut partials = [KForm::zero(grade); DIM];
        for (axis, part) in partials.iter_mut().enumerate() {
            let d: Vec<f64> = coeffs.iter().map(|c| c.grad[axis]).collect();
            *part = KForm::from_components(grade, &d)?;
        }
        Ok(FormJet { value, partials })
    }

    pub fn grade(&self) -> usize {
        self.value.grade()
    }

    /// Jet of the `k`-th stored component.
    pub fn component(&self, k: usize) -> ScalarJet {
        ScalarJet {
            value: self.value.components()[k],
            grad: std::array::from_fn(|i| self.partials[i].components()[k]),
        }
    }

    /// Product rule.
    pub fn wedge(&self, other: &FormJet) -> Result<FormJet> {
        let value = exterior::wedge(&self.value, &other.value)?;
        let mut partials = [KForm::zero(value.grade()); DIM];
        for (i, part) in partials.iter_mut().enumerate() {
            *part =
                exterior::wedge(&self.partials[i], &other.value)? + exterior::wedge(&self.value, &other.partials[i])?;
        }
        Ok(FormJet { value, partials })
    }

    pub fn wedge_const(&self, c: &KForm) -> Result<FormJet> {
        self.wedge(&FormJet::constant(*c))
    }

    pub fn hodge(&self) -> FormJet {
        FormJet {
            value: exterior::hodge(&self.value),
            partials: self.partials.map(|p| exterior::hodge(&p)),
        }
    }

    /// Exterior derivative `Σ_i dx^i ∧ ∂_i(form)`.
    pub fn d(&self) -> Result<KForm> {
        let mut out = KForm::zero(self.grade() + 1);
        for (i, part) in self.partials.iter().enumerate() {
            out = out + exterior::wedge(&KForm::dx(i), part)?;
        }
        Ok(out)
    }

    /// Largest magnitude among the value and partials.
    pub fn magnitude(&self) -> f64 {
        self.partials
            .iter()
            .fold(self.value.max_abs(), |a, p| a.max(p.max_abs()))
    }
}

impl Add for FormJet {
    type Output = FormJet;
    fn add(self, o: FormJet) -> FormJet {
        FormJet {
            value: self.value + o.value,
            partials: std::array::from_fn(|i| self.partials[i] + o.partials[i]),
        }
    }
}

impl Mul<f64> for FormJet {
    type Output = FormJet;
    fn mul(self, s: f64) -> FormJet {
        FormJet {
            value: self.value * s,
            partials: self.partials.map(|p| p * s),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule() {
        let pt = [1.0, 2.0, 3.0, 4.0];
        let x = ScalarJet::coordinate(&pt, 0);
        let y = ScalarJet::coordinate(&pt, 1);
        let xy = x * y;
        assert_eq!(xy.value, 2.0);
        assert_eq!(xy.grad, [2.0, 1.0, 0.0, 0.0]);
        let s = (x * 2.0).sin();
        assert!((s.grad[0] - 2.0 * 2.0f64.cos()).abs() < 1e-15);
    }

    #[test]
    fn d_of_gradient_one_form_vanishes() {
        // A = x dx + y dy = d(½(x² + y²))
        let pt = [0.3, -0.2, 1.0, 2.0];
        let a = FormJet::from_coefficients(
            1,
            &[
                ScalarJet::coordinate(&pt, 0),
                ScalarJet::coordinate(&pt, 1),
                ScalarJet::constant(0.0),
                ScalarJet::constant(0.0),
            ],
        )
        .unwrap();
        assert_eq!(a.d().unwrap(), KForm::zero(2));
    }
}
