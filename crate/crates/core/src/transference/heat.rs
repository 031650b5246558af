//! Heat evolution of the Gaussian family along one axis, with the
//! difference to the initial profile computed without cancellation.

fn binomial(m: u32, j: u32) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (m - i) as f64 / (i + 1) as f64)
}

fn odd_double_factorial(j: u32) -> f64 {
    // (j-1)!! for even j
    (1..j).step_by(2).map(|k| k as f64).product()
}

/// Values at relative position `y = x - x0` and time `t` of
/// `A = (G_t * f)(y)` and `B = f(y) e^{-λt}` for `f(y) = y^m e^{-a y²}`,
/// together with `A - B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct AxisHeat {
    pub evolved: f64,
    pub reference: f64,
    pub difference: f64,
}

pub(crate) fn axis_heat(a: f64, m: u32, y: f64, t: f64, lambda: f64) -> AxisHeat {
    let q = 1.0 + 4.0 * a * t;
    let mean = y / q;
    let var = 2.0 * t / q;
    // E[X^m] - mean^m for X ~ N(mean, var)
    let mut moment_rest = 0.0;
    let mut j = 2;
    while j <= m {
        moment_rest += binomial(m, j) * mean.powi((m - j) as i32) * var.powi((j / 2) as i32) * odd_double_factorial(j);
        j += 2;
    }
    let envelope = q.powf(-0.5) * (-a * y * y / q).exp();
    let evolved = envelope * (mean.powi(m as i32) + moment_rest);
    let reference = y.powi(m as i32) * (-a * y * y - lambda * t).exp();
    let log_ratio = -(m as f64 + 0.5) * (4.0 * a * t).ln_1p() + 4.0 * a * a * y * y * t / q + lambda * t;
    let difference = if log_ratio.abs() < 0.5 {
        reference * log_ratio.exp_m1() + envelope * moment_rest
    } else {
        evolved - reference
    };
    AxisHeat { evolved, reference, difference }
}

/// `Π A_a - Π B_a` as `Σ_a (Π_{b<a} A_b)(A_a - B_a)(Π_{b>a} B_b)`.
pub(crate) fn product_difference(axes: &[AxisHeat]) -> f64 {
    let mut total = 0.0;
    for a in 0..axes.len() {
        let mut term = axes[a].difference;
        for (b, ax) in axes.iter().enumerate() {
            if b < a {
                term *= ax.evolved;
            } else if b > a {
                term *= ax.reference;
            }
        }
        total += term;
    }
    total
}
