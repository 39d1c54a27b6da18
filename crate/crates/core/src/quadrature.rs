//! Composite Gauss–Legendre quadrature with panels graded toward poles.

use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// `order`-point rule on [-1, 1]; nodes from Newton iteration on `P_n`.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre needs at least one node");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn panel<F: FnMut(f64) -> f64>(&self, f: &mut F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Panel sizing: no panel longer than `max_len`, and no panel longer than
/// `pole_fraction` times its distance to the nearest pole.
#[derive(Debug, Clone, Copy)]
pub struct PanelPolicy {
    pub max_len: f64,
    pub pole_fraction: f64,
}

/// Integrates `f` over `[a, b]` (either orientation) on graded panels.
pub fn integrate_graded<F: FnMut(f64) -> f64>(
    rule: &GaussLegendre,
    f: &mut F,
    a: f64,
    b: f64,
    poles: &[f64],
    policy: PanelPolicy,
) -> f64 {
    if a == b {
        return 0.0;
    }
    if b < a {
        return -integrate_graded(rule, f, b, a, poles, policy);
    }
    let dist = |x: f64| poles.iter().map(|&p| (x - p).abs()).fold(f64::INFINITY, f64::min);
    let mut total = 0.0;
    let mut x = a;
    while x < b {
        // a pole ahead at distance d stays at least d/(1 + fraction) away
        let d = dist(x);
        let len = policy
            .max_len
            .min(b - x)
            .min(policy.pole_fraction * d / (1.0 + policy.pole_fraction));
        if len <= 0.0 || !len.is_finite() {
            break;
        }
        let mut hi = x + len;
        if b - hi < 1e-12 * len {
            hi = b;
        }
        total += rule.panel(f, x, hi);
        x = hi;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        for order in [1, 2, 5, 10, 16, 20] {
            let rule = GaussLegendre::new(order);
            let wsum: f64 = rule.weights.iter().sum();
            assert_relative_eq!(wsum, 2.0, max_relative = 1e-14);
            for deg in 0..(2 * order) as i32 {
                let mut f = |x: f64| x.powi(deg);
                let got = rule.panel(&mut f, 0.0, 1.0);
                assert_relative_eq!(got, 1.0 / f64::from(deg + 1), max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn nodes_are_sorted_and_symmetric() {
        let rule = GaussLegendre::new(10);
        for w in rule.nodes.windows(2) {
            assert!(w[0] < w[1]);
        }
        for i in 0..10 {
            assert_relative_eq!(rule.nodes[i], -rule.nodes[9 - i], max_relative = 1e-15);
        }
    }

    #[test]
    fn graded_panels_approach_pole() {
        // ∫_0^{1-δ} dx/(1-x)² = 1/δ − 1
        let rule = GaussLegendre::new(10);
        let policy = PanelPolicy {
            max_len: 0.1,
            pole_fraction: 0.5,
        };
        for delta in [1e-2, 1e-4, 1e-7] {
            let mut f = |x: f64| 1.0 / ((1.0 - x) * (1.0 - x));
            let got = integrate_graded(&rule, &mut f, 0.0, 1.0 - delta, &[1.0], policy);
            // 1 − x itself carries an absolute rounding error of ~1e-16
            assert_relative_eq!(got, 1.0 / delta - 1.0, max_relative = 1e-16 / delta + 1e-13);
        }
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let rule = GaussLegendre::new(8);
        let policy = PanelPolicy {
            max_len: 0.3,
            pole_fraction: 0.5,
        };
        let mut f = |x: f64| x.exp();
        let fwd = integrate_graded(&rule, &mut f, 0.0, 2.0, &[], policy);
        let rev = integrate_graded(&rule, &mut f, 2.0, 0.0, &[], policy);
        assert_relative_eq!(fwd, 2.0_f64.exp() - 1.0, max_relative = 1e-14);
        assert_eq!(fwd, -rev);
    }
}
