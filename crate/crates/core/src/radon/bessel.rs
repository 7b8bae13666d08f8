use std::f64::consts::PI;

/// Bessel function of the first kind, order one.
///
/// Evaluates J1(x) = (1/2pi) int_0^{2pi} cos(t - x sin t) dt with the
/// trapezoid rule, which converges geometrically for this periodic analytic
/// integrand once the node count exceeds |x| by a margin.
pub fn j1(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let n = 2 * (x.abs().ceil() as usize) + 64;
    let h = 2.0 * PI / n as f64;
    (0..n)
        .map(|k| {
            let t = k as f64 * h;
            (t - x * t.sin()).cos()
        })
        .sum::<f64>()
        / n as f64
}

/// J0(x) = (1/2pi) int_0^{2pi} cos(x sin t) dt, same rule as [`j1`].
pub fn j0(x: f64) -> f64 {
    let n = 2 * (x.abs().ceil() as usize) + 64;
    let h = 2.0 * PI / n as f64;
    (0..n).map(|k| (x * (k as f64 * h).sin()).cos()).sum::<f64>() / n as f64
}

/// J1(x) / x with the limit 1/2 at the origin.
pub fn j1_over_x(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        0.5 - x * x / 16.0
    } else {
        j1(x) / x
    }
}
