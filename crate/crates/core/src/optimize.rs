//! Derivative-free maximization in two variables.

/// Nelder-Mead settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMead {
    /// Stop once every vertex lies within this distance of the best one.
    pub diameter_tol: f64,
    pub max_iterations: usize,
    /// Edge length of the initial simplex.
    pub initial_step: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            diameter_tol: 1e-7,
            max_iterations: 5000,
            initial_step: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: [f64; 2],
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn diameter(simplex: &[([f64; 2], f64); 3]) -> f64 {
    let best = simplex[0].0;
    simplex[1..]
        .iter()
        .map(|(p, _)| (p[0] - best[0]).hypot(p[1] - best[1]))
        .fold(0.0, f64::max)
}

fn lerp(a: [f64; 2], b: [f64; 2], t: f64) -> [f64; 2] {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

impl NelderMead {
    /// Maximizes `f` from `start`. `keep_going` is consulted after each
    /// iteration with the current best point; returning false aborts the
    /// search (the result is then marked unconverged).
    pub fn maximize(
        &self,
        f: impl Fn([f64; 2]) -> f64,
        start: [f64; 2],
        keep_going: impl Fn([f64; 2]) -> bool,
    ) -> Maximum {
        // internally minimize g = -f; NaN is treated as -inf for f
        let g = |p: [f64; 2]| {
            let v = -f(p);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };
        let s = self.initial_step;
        let p1 = [start[0] + s, start[1]];
        let p2 = [start[0], start[1] + s];
        let mut simplex = [(start, g(start)), (p1, g(p1)), (p2, g(p2))];
        let mut iterations = 0;
        let mut converged = false;
        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if diameter(&simplex) < self.diameter_tol {
                converged = true;
                break;
            }
            if iterations >= self.max_iterations || !keep_going(simplex[0].0) {
                break;
            }
            iterations += 1;

            let centroid = lerp(simplex[0].0, simplex[1].0, 0.5);
            let (worst, f_worst) = simplex[2];
            let reflected = lerp(centroid, worst, -1.0);
            let f_r = g(reflected);
            if f_r < simplex[0].1 {
                let expanded = lerp(centroid, worst, -2.0);
                let f_e = g(expanded);
                simplex[2] = if f_e < f_r {
                    (expanded, f_e)
                } else {
                    (reflected, f_r)
                };
                continue;
            }
            if f_r < simplex[1].1 {
                simplex[2] = (reflected, f_r);
                continue;
            }
            let (contracted, f_c) = if f_r < f_worst {
                let c = lerp(centroid, reflected, 0.5);
                (c, g(c))
            } else {
                let c = lerp(centroid, worst, 0.5);
                (c, g(c))
            };
            if f_c < f_worst.min(f_r) {
                simplex[2] = (contracted, f_c);
                continue;
            }
            // shrink toward the best vertex
            let best = simplex[0].0;
            for v in simplex.iter_mut().skip(1) {
                let p = lerp(best, v.0, 0.5);
                *v = (p, g(p));
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        Maximum {
            x: simplex[0].0,
            value: -simplex[0].1,
            iterations,
            converged,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_peak() {
        let f =
            |p: [f64; 2]| -(p[0] - 1.5).powi(2) - 4.0 * (p[1] + 0.25).powi(2) + 0.5 * p[0] * p[1];
        // stationary point: [[2, -0.5], [-0.5, 8]] (x, y) = (3, -2)
        let det = 2.0 * 8.0 - 0.25;
        let x = (3.0 * 8.0 - 0.5 * 2.0) / det;
        let y = (2.0 * -2.0 + 0.5 * 3.0) / det;
        let m = NelderMead::default().maximize(f, [0.0, 0.0], |_| true);
        assert!(m.converged);
        assert!(
            (m.x[0] - x).abs() < 1e-6 && (m.x[1] - y).abs() < 1e-6,
            "{m:?}"
        );
    }

    #[test]
    fn rosenbrock_valley() {
        let f = |p: [f64; 2]| -((1.0 - p[0]).powi(2) + 100.0 * (p[1] - p[0] * p[0]).powi(2));
        let m = NelderMead {
            diameter_tol: 1e-10,
            max_iterations: 20_000,
            initial_step: 0.5,
        }
        .maximize(f, [-1.2, 1.0], |_| true);
        assert!(m.converged);
        assert!(
            (m.x[0] - 1.0).abs() < 1e-7 && (m.x[1] - 1.0).abs() < 1e-7,
            "{m:?}"
        );
    }

    #[test]
    fn abort_hook_stops_the_search() {
        let f = |p: [f64; 2]| p[0] + p[1];
        let m = NelderMead::default().maximize(f, [0.0, 0.0], |p| p[0] < 10.0);
        assert!(!m.converged);
        assert!(m.x[0] >= 10.0 || m.x[1] >= 10.0);
    }
}
