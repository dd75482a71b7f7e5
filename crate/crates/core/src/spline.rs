//! Not-a-knot cubic splines over a strictly increasing abscissa.

use crate::banded::Pentadiagonal;
use crate::error::{Error, Result};

/// Scalar cubic spline stored by knot values and second derivatives.
#[derive(Clone, Debug)]
pub struct CubicSpline {
    knots: Vec<f64>,
    values: Vec<f64>,
    second: Vec<f64>,
}

impl CubicSpline {
    /// Builds the not-a-knot interpolant; two knots give a line, three a parabola.
    pub fn new(knots: &[f64], values: &[f64]) -> Result<Self> {
        let n = knots.len();
        if n < 2 || values.len() != n {
            return Err(Error::Domain(format!(
                "spline needs at least 2 matching knots (got {} knots, {} values)",
                n,
                values.len()
            )));
        }
        for (i, w) in knots.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(Error::DegenerateSegment { index: i });
            }
        }
        let second = match n {
            2 => vec![0.0; 2],
            3 => {
                let d01 = (values[1] - values[0]) / (knots[1] - knots[0]);
                let d12 = (values[2] - values[1]) / (knots[2] - knots[1]);
                vec![2.0 * (d12 - d01) / (knots[2] - knots[0]); 3]
            }
            _ => not_a_knot_moments(knots, values)?,
        };
        Ok(Self {
            knots: knots.to_vec(),
            values: values.to_vec(),
            second,
        })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Index `i` with `knots[i] ≤ t ≤ knots[i+1]`, clamped to the end intervals.
    pub fn interval(&self, t: f64) -> usize {
        let n = self.knots.len();
        match self.knots.partition_point(|&k| k <= t) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        }
    }

    /// Value and first derivative on interval `i` at abscissa `t`.
    pub fn eval_in(&self, i: usize, t: f64) -> (f64, f64) {
        let h = self.knots[i + 1] - self.knots[i];
        let a = (self.knots[i + 1] - t) / h;
        let b = (t - self.knots[i]) / h;
        let (m0, m1) = (self.second[i], self.second[i + 1]);
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let value = a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let slope =
            (y1 - y0) / h + ((1.0 - 3.0 * a * a) * m0 + (3.0 * b * b - 1.0) * m1) * h / 6.0;
        (value, slope)
    }

    pub fn eval(&self, t: f64) -> (f64, f64) {
        self.eval_in(self.interval(t), t)
    }
}

fn not_a_knot_moments(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let mut a = Pentadiagonal::zeros(n);
    let mut rhs = vec![0.0; n];
    // Third-derivative continuity at the second and penultimate knots.
    a.d[0] = h[1];
    a.u1[0] = -(h[0] + h[1]);
    a.u2[0] = h[0];
    for i in 1..n - 1 {
        a.l1[i] = h[i - 1];
        a.d[i] = 2.0 * (h[i - 1] + h[i]);
        a.u1[i] = h[i];
        rhs[i] = 6.0 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]);
    }
    a.l2[n - 1] = h[n - 2];
    a.l1[n - 1] = -(h[n - 3] + h[n - 2]);
    a.d[n - 1] = h[n - 3];
    a.solve(&rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_cubics_exactly() {
        let knots: Vec<f64> = (0..9).map(|i| (i as f64) * 0.3 + 0.02 * (i * i) as f64).collect();
        let f = |t: f64| 1.0 - 2.0 * t + 0.5 * t * t - 0.7 * t * t * t;
        let df = |t: f64| -2.0 + t - 2.1 * t * t;
        let values: Vec<f64> = knots.iter().map(|&t| f(t)).collect();
        let s = CubicSpline::new(&knots, &values).unwrap();
        for k in 0..50 {
            let t = knots[0] + (knots[8] - knots[0]) * k as f64 / 49.0;
            let (v, d) = s.eval(t);
            assert!((v - f(t)).abs() < 1e-12, "{t}");
            assert!((d - df(t)).abs() < 1e-11, "{t}");
        }
    }

    #[test]
    fn short_inputs() {
        let s = CubicSpline::new(&[0.0, 2.0], &[1.0, 5.0]).unwrap();
        assert_eq!(s.eval(1.0), (3.0, 2.0));
        let s = CubicSpline::new(&[0.0, 1.0, 3.0], &[0.0, 1.0, 9.0]).unwrap();
        let (v, d) = s.eval(2.0);
        assert!((v - 4.0).abs() < 1e-14 && (d - 4.0).abs() < 1e-14);
    }
}
