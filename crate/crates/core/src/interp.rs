//! One-dimensional interpolation helpers.

/// Shape-preserving piecewise cubic Hermite interpolant (Fritsch–Butland
/// derivative estimates). Monotone data yield a monotone interpolant.
#[derive(Debug, Clone)]
pub struct Pchip {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
    uniform_step: Option<f64>,
}

impl Pchip {
    /// `x` must be strictly increasing with at least two points.
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Option<Self> {
        let n = x.len();
        if n < 2 || y.len() != n || x.windows(2).any(|w| !(w[1] > w[0])) {
            return None;
        }
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
        let mut d = vec![0.0; n];
        if n == 2 {
            d[0] = delta[0];
            d[1] = delta[0];
        } else {
            for k in 1..n - 1 {
                if delta[k - 1] * delta[k] > 0.0 {
                    let w1 = 2.0 * h[k] + h[k - 1];
                    let w2 = h[k] + 2.0 * h[k - 1];
                    d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
                }
            }
            d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
            d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }

        let step = h[0];
        let uniform_step = h
            .iter()
            .all(|&hk| ((hk - step) / step).abs() < 1e-9)
            .then_some(step);
        Some(Self {
            x,
            y,
            d,
            uniform_step,
        })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    pub fn contains(&self, t: f64) -> bool {
        let (lo, hi) = self.domain();
        t >= lo && t <= hi
    }

    fn segment(&self, t: f64) -> usize {
        let last = self.x.len() - 2;
        if let Some(step) = self.uniform_step {
            let k = ((t - self.x[0]) / step).floor();
            if k <= 0.0 {
                return 0;
            }
            let k = (k as usize).min(last);
            // Guard against rounding at segment boundaries.
            if t < self.x[k] {
                return k.saturating_sub(1);
            }
            if t > self.x[k + 1] && k < last {
                return k + 1;
            }
            return k;
        }
        match self.x.binary_search_by(|v| v.total_cmp(&t)) {
            Ok(i) => i.min(last),
            Err(i) => i.saturating_sub(1).min(last),
        }
    }

    /// Evaluate; points outside the domain are extrapolated with the end cubic.
    pub fn eval(&self, t: f64) -> f64 {
        let k = self.segment(t);
        let h = self.x[k + 1] - self.x[k];
        let s = (t - self.x[k]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.y[k] + h10 * h * self.d[k] + h01 * self.y[k + 1] + h11 * h * self.d[k + 1]
    }
}

fn end_slope(h0: f64, h1: f64, del0: f64, del1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if d.signum() != del0.signum() {
        0.0
    } else if del0.signum() != del1.signum() && d.abs() > 3.0 * del0.abs() {
        3.0 * del0
    } else {
        d
    }
}

/// Linear interpolation on strictly increasing `xs`; `None` outside `[xs[0], xs[last]]`.
pub fn linear(xs: &[f64], ys: &[f64], x: f64) -> Option<f64> {
    if xs.is_empty() || xs.len() != ys.len() || x < xs[0] || x > xs[xs.len() - 1] {
        return None;
    }
    if xs.len() == 1 {
        return Some(ys[0]);
    }
    let i = match xs.binary_search_by(|v| v.total_cmp(&x)) {
        Ok(i) => return Some(ys[i]),
        Err(i) => i,
    };
    let (x0, x1) = (xs[i - 1], xs[i]);
    let s = (x - x0) / (x1 - x0);
    Some(ys[i - 1] + s * (ys[i] - ys[i - 1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reproduces_nodes_and_lines() {
        let x: Vec<f64> = (0..10).map(|i| i as f64 * 0.5).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v - 1.0).collect();
        let p = Pchip::new(x.clone(), y.clone()).unwrap();
        for (xi, yi) in x.iter().zip(&y) {
            assert!((p.eval(*xi) - yi).abs() < 1e-12);
        }
        assert!((p.eval(1.23) - 1.46).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_abscissae() {
        assert!(Pchip::new(vec![0.0, 0.0], vec![1.0, 2.0]).is_none());
        assert!(Pchip::new(vec![0.0], vec![1.0]).is_none());
    }

    #[test]
    fn linear_interpolation() {
        let xs = [0.0, 1.0, 3.0];
        let ys = [0.0, 2.0, 0.0];
        assert_eq!(linear(&xs, &ys, 2.0), Some(1.0));
        assert_eq!(linear(&xs, &ys, 3.5), None);
    }

    proptest! {
        #[test]
        fn monotone_data_give_monotone_interpolant(
            steps in prop::collection::vec(0.01f64..5.0, 3..20),
            rises in prop::collection::vec(0.0f64..3.0, 20),
        ) {
            let mut x = vec![0.0];
            let mut y = vec![0.0];
            for (i, s) in steps.iter().enumerate() {
                x.push(x[i] + s);
                y.push(y[i] + rises[i]);
            }
            let p = Pchip::new(x.clone(), y).unwrap();
            let (lo, hi) = p.domain();
            let mut prev = p.eval(lo);
            for k in 1..=400 {
                let t = lo + (hi - lo) * k as f64 / 400.0;
                let v = p.eval(t);
                prop_assert!(v >= prev - 1e-9);
                prev = v;
            }
        }
    }
}
