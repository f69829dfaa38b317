//! Seeded generators for the randomized sweeps.

use std::sync::Arc;

use rand::Rng;

use crate::exterior::{basis_len, KForm, DIM};
use crate::field::{FieldPair, Monomial, Polynomial, Sign, Trig, TrigKind};
use crate::strain::PolynomialVector;
use crate::Point;

pub fn point<R: Rng>(rng: &mut R, half_width: f64) -> Point {
    std::array::from_fn(|_| rng.gen_range(-half_width..half_width))
}

pub fn sign<R: Rng>(rng: &mut R) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Polynomial with `terms` monomials of total degree at most `max_degree`.
pub fn polynomial<R: Rng>(rng: &mut R, max_degree: u32, terms: usize) -> Polynomial {
    let mut out = Vec::with_capacity(terms);
    for _ in 0..terms {
        let degree = rng.gen_range(0..=max_degree);
        let mut powers = [0u32; DIM];
        for _ in 0..degree {
            powers[rng.gen_range(0..DIM)] += 1;
        }
        out.push(Monomial::new(rng.gen_range(-1.0..1.0), powers));
    }
    Polynomial::new(out)
}

/// A trigonometric wave with a random wavevector.
pub fn trig<R: Rng>(rng: &mut R) -> Trig {
    Trig {
        amplitude: rng.gen_range(-1.5..1.5),
        wavevector: std::array::from_fn(|_| rng.gen_range(-2.0..2.0)),
        phase: rng.gen_range(0.0..std::f64::consts::TAU),
        kind: if rng.gen_bool(0.5) {
            TrigKind::Sin
        } else {
            TrigKind::Cos
        },
    }
}

/// Field pair with polynomial or trigonometric amplitudes and a random `ε`.
pub fn field_pair<R: Rng>(rng: &mut R) -> FieldPair {
    let eps = sign(rng);
    if rng.gen_bool(0.5) {
        FieldPair::new(Arc::new(polynomial(rng, 3, 4)), Arc::new(polynomial(rng, 3, 4)), eps)
    } else {
        FieldPair::new(Arc::new(trig(rng)), Arc::new(trig(rng)), eps)
    }
}

pub fn two_form<R: Rng>(rng: &mut R) -> KForm {
    let comps: Vec<f64> = (0..basis_len(2)).map(|_| rng.gen_range(-2.0..2.0)).collect();
    KForm::from_components(2, &comps).expect("six components")
}

/// Vector field with independent polynomial components.
pub fn polynomial_vector<R: Rng>(rng: &mut R, max_degree: u32, terms: usize) -> PolynomialVector {
    PolynomialVector(std::array::from_fn(|_| polynomial(rng, max_degree, terms)))
}
