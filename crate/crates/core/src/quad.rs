//! Quadrature building blocks: Gauss–Legendre panels, tanh–sinh for
//! endpoint singularities, Wynn's epsilon algorithm for oscillatory tails
//! and Gregory's endpoint correction for slowly decaying lattice tails.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let m = (order + 1) / 2;
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(order, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(order, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Shared 32-point rule.
    pub fn default_rule() -> &'static GaussLegendre {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| GaussLegendre::new(32))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Composite rule on `panels` equal sub-intervals.
    pub fn integrate_panels<F: FnMut(f64) -> f64>(
        &self,
        mut f: F,
        a: f64,
        b: f64,
        panels: usize,
    ) -> f64 {
        let panels = panels.max(1);
        let width = (b - a) / panels as f64;
        (0..panels)
            .map(|p| {
                let lo = a + width * p as f64;
                self.integrate(&mut f, lo, lo + width)
            })
            .sum()
    }
}

fn legendre_with_derivative(order: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=order {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if order == 0 {
        return (1.0, 0.0);
    }
    let n = order as f64;
    let d = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Result of an adaptive quadrature: value and an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Tanh–sinh (double exponential) quadrature on a finite interval.
///
/// The integrand is never evaluated at the endpoints, so integrable
/// algebraic endpoint singularities are fine. Refinement halves the step
/// until two successive levels agree to `max(abs_tol, rel_tol * |I|)`.
pub fn tanh_sinh<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Estimate {
    if a == b {
        return Estimate { value: 0.0, error: 0.0 };
    }
    let len = b - a;
    let t_max = 6.0;
    let mut node = |t: f64| -> f64 {
        let u = 0.5 * PI * t.sinh();
        // distance to the nearer endpoint computed without cancellation
        let x = if u < 0.0 {
            a + len / (1.0 + (-2.0 * u).exp())
        } else {
            b - len / (1.0 + (2.0 * u).exp())
        };
        if x <= a.min(b) || x >= a.max(b) {
            return 0.0;
        }
        let ch = u.cosh();
        let w = 0.5 * len * 0.5 * PI * t.cosh() / (ch * ch);
        if w == 0.0 || !w.is_finite() {
            return 0.0;
        }
        let fx = f(x);
        if fx.is_finite() {
            w * fx
        } else {
            0.0
        }
    };

    let mut h = 0.5;
    let mut sum = node(0.0);
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        if t > t_max {
            break;
        }
        sum += node(t) + node(-t);
        k += 1;
    }
    let mut estimate = sum * h;
    let mut error = f64::INFINITY;
    for _level in 0..12 {
        h *= 0.5;
        let mut add = 0.0;
        let mut k = 1;
        loop {
            let t = k as f64 * h;
            if t > t_max {
                break;
            }
            add += node(t) + node(-t);
            k += 2;
        }
        sum += add;
        let next = sum * h;
        error = (next - estimate).abs();
        estimate = next;
        if error <= abs_tol.max(rel_tol * estimate.abs()) {
            break;
        }
    }
    Estimate { value: estimate, error }
}

/// Integral over `[a, ∞)` of a function decaying at least like `x^{-1-δ}`,
/// mapped to `(0, 1]` through `x = a / u` (requires `a > 0`).
pub fn tail_integral<F: FnMut(f64) -> f64>(mut f: F, a: f64, abs_tol: f64) -> Estimate {
    assert!(a > 0.0, "tail integral needs a positive start");
    tanh_sinh(
        |u| {
            let x = a / u;
            f(x) * a / (u * u)
        },
        0.0,
        1.0,
        abs_tol,
        1e-14,
    )
}

/// Wynn's epsilon algorithm applied to a sequence of partial sums.
/// Returns the accelerated limit and the change between the two most
/// recent even-column estimates.
pub fn wynn_epsilon(partial_sums: &[f64]) -> Estimate {
    let n = partial_sums.len();
    match n {
        0 => return Estimate { value: 0.0, error: f64::INFINITY },
        1 | 2 => {
            let last = partial_sums[n - 1];
            let error = if n == 2 { (last - partial_sums[0]).abs() } else { f64::INFINITY };
            return Estimate { value: last, error };
        }
        _ => {}
    }
    let mut older: Vec<f64> = vec![0.0; n + 1];
    let mut current = partial_sums.to_vec();
    let mut best = current[n - 1];
    let mut error = (current[n - 1] - current[n - 2]).abs();
    let mut column = 0usize;
    while current.len() > 1 {
        let mut next = Vec::with_capacity(current.len() - 1);
        for i in 0..current.len() - 1 {
            let diff = current[i + 1] - current[i];
            next.push(older[i + 1] + 1.0 / diff);
        }
        column += 1;
        if next.iter().any(|v| !v.is_finite()) {
            break;
        }
        if column % 2 == 0 {
            let last = next[next.len() - 1];
            error = (last - best).abs();
            if next.len() >= 2 {
                error = error.max((last - next[next.len() - 2]).abs());
            }
            best = last;
        }
        older = current;
        current = next;
    }
    Estimate { value: best, error }
}

/// Sum of `f(x0 + step*j)` over `j >= 1` for a smooth, slowly decaying `f`.
///
/// Sums `j = 1..=terms` explicitly and replaces the remainder by the tail
/// integral with Gregory's endpoint corrections (forward differences up to
/// fifth order). `tail` must return `∫_{x}^{∞} f`.
pub fn gregory_tail_sum<F, T>(f: F, x0: f64, step: f64, terms: usize, tail: T) -> Estimate
where
    F: Fn(f64) -> f64,
    T: Fn(f64) -> Estimate,
{
    let mut direct = 0.0;
    for j in 1..=terms {
        direct += f(x0 + step * j as f64);
    }
    let start = x0 + step * terms as f64;
    let vals: Vec<f64> = (0..7).map(|i| f(start + step * i as f64)).collect();
    let diff = |order: usize| -> f64 {
        let mut d = vals.clone();
        for _ in 0..order {
            for i in 0..d.len() - 1 {
                d[i] = d[i + 1] - d[i];
            }
            d.pop();
        }
        d[0]
    };
    let integral = tail(start);
    const GREGORY: [f64; 5] = [1.0 / 12.0, -1.0 / 24.0, 19.0 / 720.0, -3.0 / 160.0, 863.0 / 60480.0];
    let mut remainder = integral.value / step - 0.5 * vals[0];
    for (order, c) in GREGORY.iter().enumerate() {
        remainder -= c * diff(order + 1);
    }
    let next = (275.0 / 24192.0) * diff(6).abs();
    Estimate {
        value: direct + remainder,
        error: next + integral.error / step,
    }
}

/// Pairwise summation for reproducible, accurate reductions.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 32 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}
