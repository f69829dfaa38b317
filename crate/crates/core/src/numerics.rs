//! Finite-difference stencils, a one-step flow integrator, and tensor-product
//! Simpson quadrature with a half-resolution error estimate.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::Point;

/// Thresholds shared by every verification routine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolerancePolicy {
    pub algebraic_tol: f64,
    pub jet_oracle_tol: f64,
    pub fd_divergence_tol: f64,
    pub quadrature_rel_tol: f64,
    /// Floor on `φ²` below which the phase is treated as undefined.
    pub phase_floor: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            algebraic_tol: 1e-12,
            jet_oracle_tol: 1e-6,
            fd_divergence_tol: 1e-6,
            quadrature_rel_tol: 1e-3,
            phase_floor: 1e-14,
        }
    }
}

impl TolerancePolicy {
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("algebraic_tol", self.algebraic_tol),
            ("jet_oracle_tol", self.jet_oracle_tol),
            ("fd_divergence_tol", self.fd_divergence_tol),
            ("quadrature_rel_tol", self.quadrature_rel_tol),
            ("phase_floor", self.phase_floor),
        ];
        for (name, v) in all {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// One axis of a uniform grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, points: usize) -> Self {
        Axis { lo, hi, points }
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.points - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.points {
            self.hi
        } else {
            self.lo + i as f64 * self.spacing()
        }
    }

    pub fn validate(&self, axis: usize) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.hi > self.lo) {
            return Err(Error::Config(format!(
                "axis {axis}: extent [{}, {}] is empty or not finite",
                self.lo, self.hi
            )));
        }
        if self.points < 5 || self.points.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "axis {axis}: Simpson needs an odd count >= 5, got {}",
                self.points
            )));
        }
        if !(self.points - 1).is_multiple_of(4) {
            return Err(Error::Config(format!(
                "axis {axis}: {} points has no odd half-resolution subgrid (need 4k+1)",
                self.points
            )));
        }
        Ok(())
    }

    /// Composite Simpson weights on this axis.
    pub fn weights(&self) -> Vec<f64> {
        simpson_weights(self.points, self.spacing())
    }

    /// Simpson weights on every other node, zero on the skipped ones.
    pub fn coarse_weights(&self) -> Vec<f64> {
        let coarse = simpson_weights(self.points.div_ceil(2), 2.0 * self.spacing());
        (0..self.points)
            .map(|i| if i % 2 == 0 { coarse[i / 2] } else { 0.0 })
            .collect()
    }
}

fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let w = if i == 0 || i + 1 == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * h / 3.0
        })
        .collect()
}

/// Uniform tensor-product grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub axes: Vec<Axis>,
}

impl Grid {
    pub fn new(axes: Vec<Axis>) -> Self {
        Grid { axes }
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() {
            return Err(Error::Config("grid has no axes".into()));
        }
        for (i, a) in self.axes.iter().enumerate() {
            a.validate(i)?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.points).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Whether the closed box `[lo_i, hi_i]` lies inside the grid extents.
    pub fn covers(&self, lo: &[f64], hi: &[f64]) -> bool {
        let slack = 1e-12;
        self.axes.len() == lo.len()
            && self.axes.iter().zip(lo.iter().zip(hi)).all(|(a, (&l, &h))| {
                let s = slack * (a.hi - a.lo);
                a.lo <= l + s && a.hi >= h - s
            })
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Offsets of the five-point first-derivative stencil (the centre has weight 0).
pub const STENCIL_OFFSETS: [f64; 4] = [-2.0, -1.0, 1.0, 2.0];

/// The four sample points of the stencil along one axis.
pub fn stencil_points(pt: &Point, axis: usize, h: f64) -> [Point; 4] {
    STENCIL_OFFSETS.map(|off| {
        let mut q = *pt;
        q[axis] += off * h;
        q
    })
}

/// `(−f(+2h) + 8f(+h) − 8f(−h) + f(−2h)) / (12h)`.
pub fn central_diff_4<F>(f: F, pt: &Point, axis: usize, h: f64) -> Result<f64>
where
    F: Fn(&Point) -> f64,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Numeric(format!("step must be positive, got {h}")));
    }
    let mut v = [0.0; 4];
    for (q, s) in stencil_points(pt, axis, h).iter().zip(v.iter_mut()) {
        *s = f(q);
        if !s.is_finite() {
            return Err(Error::Numeric(format!("non-finite sample at {q:?}")));
        }
    }
    Ok(five_point(v[0], v[1], v[2], v[3], h))
}

/// Combine samples at `−2h, −h, +h, +2h`. Symmetric differences are formed
/// first so that equal samples cancel exactly.
pub fn five_point(m2: f64, m1: f64, p1: f64, p2: f64, h: f64) -> f64 {
    (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * h)
}

/// One classical Runge–Kutta step of length `t` along an autonomous field.
pub fn rk4_flow<X>(field: X, pt: &Point, t: f64) -> Result<Point>
where
    X: Fn(&Point) -> [f64; 4],
{
    let shift = |p: &Point, k: &[f64; 4], s: f64| -> Point { std::array::from_fn(|i| p[i] + s * k[i]) };
    let k1 = field(pt);
    let k2 = field(&shift(pt, &k1, t / 2.0));
    let k3 = field(&shift(pt, &k2, t / 2.0));
    let k4 = field(&shift(pt, &k3, t));
    let out: Point = std::array::from_fn(|i| pt[i] + t / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    if out.iter().all(|v| v.is_finite()) {
        Ok(out)
    } else {
        Err(Error::Numeric(format!("flow left the finite domain from {pt:?}")))
    }
}

/// Result of [`simpson_box`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// Same rule on the half-resolution subgrid.
    pub coarse: f64,
    /// `|fine − coarse| / 15` plus an accumulated-rounding floor.
    pub error: f64,
}

impl Quadrature {
    /// Richardson-extrapolated value.
    pub fn extrapolated(&self) -> f64 {
        self.value + (self.value - self.coarse) / 15.0
    }
}

/// Tensor-product composite Simpson rule over a box.
///
/// The integrand is evaluated once per node; the half-resolution estimate
/// reuses the even-indexed nodes. Partial sums are formed per leading-axis
/// slab and reduced in index order, so the result does not depend on the
/// thread count.
pub fn simpson_box<F>(f: F, grid: &Grid) -> Result<Quadrature>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    grid.validate()?;
    let dims = grid.axes.len();
    let fine_w: Vec<Vec<f64>> = grid.axes.iter().map(Axis::weights).collect();
    let coarse_w: Vec<Vec<f64>> = grid.axes.iter().map(Axis::coarse_weights).collect();
    let inner: usize = grid.axes[1..].iter().map(|a| a.points).product();

    let slabs: Vec<Result<(f64, f64, f64)>> = (0..grid.axes[0].points)
        .into_par_iter()
        .map(|i0| {
            let mut fine = CompensatedSum::default();
            let mut coarse = CompensatedSum::default();
            let mut abs = CompensatedSum::default();
            let mut idx = vec![0usize; dims];
            let mut x = vec![0.0; dims];
            idx[0] = i0;
            for flat in 0..inner {
                let mut rem = flat;
                for d in (1..dims).rev() {
                    idx[d] = rem % grid.axes[d].points;
                    rem /= grid.axes[d].points;
                }
                let mut wf = 1.0;
                let mut wc = 1.0;
                for d in 0..dims {
                    x[d] = grid.axes[d].node(idx[d]);
                    wf *= fine_w[d][idx[d]];
                    wc *= coarse_w[d][idx[d]];
                }
                let v = f(&x);
                if !v.is_finite() {
                    return Err(Error::Numeric(format!("non-finite integrand at {x:?}")));
                }
                fine.add(wf * v);
                coarse.add(wc * v);
                abs.add((wf * v).abs());
            }
            Ok((fine.value(), coarse.value(), abs.value()))
        })
        .collect();

    let mut fine = CompensatedSum::default();
    let mut coarse = CompensatedSum::default();
    let mut abs = CompensatedSum::default();
    for s in slabs {
        let (a, b, c) = s?;
        fine.add(a);
        coarse.add(b);
        abs.add(c);
    }
    let (value, coarse) = (fine.value(), coarse.value());
    let rounding = f64::EPSILON * abs.value() * (grid.len() as f64).sqrt();
    Ok(Quadrature {
        value,
        coarse,
        error: (value - coarse).abs() / 15.0 + rounding,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn central_diff_examples() {
        let d = central_diff_4(|p| p[0].powi(4), &[1.0, 0.0, 0.0, 0.0], 0, 1e-2).unwrap();
        assert!((d - 4.0).abs() < 1e-6);
        let d = central_diff_4(|_| 3.5, &[1.0, 2.0, 3.0, 4.0], 2, 1e-2).unwrap();
        assert_eq!(d, 0.0);
        let d = central_diff_4(|p| p[1].sin(), &[0.0; 4], 1, 1e-2).unwrap();
        assert!((d - 1.0).abs() < 1e-9);
    }

    #[test]
    fn central_diff_rejects_bad_input() {
        assert!(central_diff_4(|p| p[0], &[0.0; 4], 0, 0.0).is_err());
        assert!(central_diff_4(|p| 1.0 / p[0], &[0.01, 0.0, 0.0, 0.0], 0, 5e-3).is_err());
    }

    #[test]
    fn rk4_examples() {
        let q = rk4_flow(|_| [1.0, 0.0, 0.0, 0.0], &[0.0; 4], 0.5).unwrap();
        assert_eq!(q, [0.5, 0.0, 0.0, 0.0]);
        let q = rk4_flow(|p| [p[0], 0.0, 0.0, 0.0], &[1.0, 0.0, 0.0, 0.0], 1e-2).unwrap();
        assert!((q[0] - 0.01f64.exp()).abs() < 1e-11);
        let eps = 1.0;
        let p0 = [0.2, 0.1, 0.7, -0.3];
        let q = rk4_flow(|_| [0.0, 0.0, -eps, 1.0], &p0, 1e-2).unwrap();
        let d: Vec<f64> = (0..4).map(|i| q[i] - p0[i]).collect();
        let interval = d[3] * d[3] - d[0] * d[0] - d[1] * d[1] - d[2] * d[2];
        assert!(interval.abs() < 1e-16);
    }

    #[test]
    fn simpson_examples() {
        let unit = Grid::new(vec![Axis::new(0.0, 1.0, 5); 3]);
        let q = simpson_box(|_| 1.0, &unit).unwrap();
        assert!((q.value - 1.0).abs() < 1e-15);

        let line = Grid::new(vec![Axis::new(0.0, 1.0, 9)]);
        let q = simpson_box(|x| x[0] * x[0], &line).unwrap();
        assert!((q.value - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn simpson_exact_on_cubics() {
        let g = Grid::new(vec![Axis::new(-1.0, 2.0, 5), Axis::new(0.5, 1.5, 9)]);
        // ∫∫ (x³ − 2x y² + y³) over [−1,2]×[0.5,1.5]
        let q = simpson_box(|v| v[0].powi(3) - 2.0 * v[0] * v[1] * v[1] + v[1].powi(3), &g).unwrap();
        let ix3 = (16.0 - 1.0) / 4.0;
        let ix = (4.0 - 1.0) / 2.0;
        let iy2 = (1.5f64.powi(3) - 0.5f64.powi(3)) / 3.0;
        let iy3 = (1.5f64.powi(4) - 0.5f64.powi(4)) / 4.0;
        let exact = ix3 * 1.0 - 2.0 * ix * iy2 + iy3 * 3.0;
        assert!((q.value - exact).abs() < 1e-13, "{} vs {exact}", q.value);
        assert!((q.coarse - exact).abs() < 1e-13);
    }

    #[test]
    fn mollifier_integral_is_self_consistent() {
        let bump = |x: &[f64]| {
            let q = x[0] * x[0];
            if q < 1.0 {
                (-q / (1.0 - q)).exp()
            } else {
                0.0
            }
        };
        let coarse = simpson_box(bump, &Grid::new(vec![Axis::new(-1.0, 1.0, 33)])).unwrap();
        let fine = simpson_box(bump, &Grid::new(vec![Axis::new(-1.0, 1.0, 65)])).unwrap();
        assert!((coarse.value - fine.value).abs() <= coarse.error);
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::new(vec![Axis::new(0.0, 1.0, 7)]).validate().is_err());
        assert!(Grid::new(vec![Axis::new(0.0, 1.0, 4)]).validate().is_err());
        assert!(Grid::new(vec![Axis::new(1.0, 0.0, 5)]).validate().is_err());
        assert!(Grid::new(vec![Axis::new(0.0, 1.0, 65)]).validate().is_ok());
    }

    #[test]
    fn compensated_sum_is_order_independent() {
        let xs: Vec<f64> = (0..10_000)
            .map(|i| ((i * 7919) % 1000) as f64 * 1e-3 + 1e8 * ((i % 2) as f64 - 0.5))
            .collect();
        let fwd: CompensatedSum = xs.iter().copied().collect();
        let rev: CompensatedSum = xs.iter().rev().copied().collect();
        assert!((fwd.value() - rev.value()).abs() <= 1e-14 * xs.iter().map(|x| x.abs()).sum::<f64>());
    }
}
