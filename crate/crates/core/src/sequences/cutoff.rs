/// Smooth step `B(t) = s(t) / (s(t) + s(1-t))` with `s(t) = e^{-1/t}` for `t > 0`.
pub fn smooth_step(t: f64) -> f64 {
    let s = |u: f64| if u > 0.0 { (-1.0 / u).exp() } else { 0.0 };
    let (a, b) = (s(t), s(1.0 - t));
    if a + b == 0.0 {
        0.0
    } else {
        a / (a + b)
    }
}

/// Dyadic cutoff `φ_i(x) = φ(x / 2^i)`, where `φ = 1` on `[0, 2]`, `φ = 0` on `[4, ∞)`
/// and `φ(x) = B((4 - x) / 2)` in between: monotone and C^∞.
pub fn cutoff_phi(i: u32, x: f64) -> f64 {
    let y = x / 2f64.powi(i as i32);
    if y <= 2.0 {
        1.0
    } else if y >= 4.0 {
        0.0
    } else {
        smooth_step((4.0 - y) / 2.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plateaus() {
        for i in 0..6 {
            let s = 2f64.powi(i as i32);
            for &x in &[0.0, 0.5 * s, 2.0 * s] {
                assert_eq!(cutoff_phi(i, x), 1.0);
            }
            for &x in &[4.0 * s, 5.0 * s, 1e6] {
                assert_eq!(cutoff_phi(i, x), 0.0);
            }
        }
    }

    #[test]
    fn monotone_and_bounded() {
        let mut prev = 1.0;
        for j in 0..=4000 {
            let x = j as f64 * 0.001 + 1.5;
            let v = cutoff_phi(0, x);
            assert!((0.0..=1.0).contains(&v));
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn midpoint_derivative_is_negative() {
        for i in 0..5 {
            let x = 3.0 * 2f64.powi(i);
            let h = 1e-5 * 2f64.powi(i);
            let d = (cutoff_phi(i as u32, x + h) - cutoff_phi(i as u32, x - h)) / (2.0 * h);
            assert!(d.is_finite() && d < 0.0);
            assert!((cutoff_phi(i as u32, x) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn flat_at_the_joins() {
        // all derivatives vanish at the plateau edges; the first one is tiny nearby
        for &x in &[2.0 + 1e-3, 4.0 - 1e-3] {
            let h = 1e-6;
            let d = (cutoff_phi(0, x + h) - cutoff_phi(0, x - h)) / (2.0 * h);
            assert!(d.abs() < 1e-100);
        }
    }
}
