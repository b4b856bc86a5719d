//! Derivative-free local minimisation.

/// Nelder-Mead settings.
#[derive(Debug, Clone, Copy)]
pub struct NelderMead {
    pub max_evals: usize,
    /// Stop once the simplex values agree to this relative spread.
    pub ftol: f64,
    /// Stop once the simplex has shrunk below this size in every coordinate.
    pub xtol: f64,
    /// Fresh simplices built around the best point after convergence.
    pub restarts: usize,
}

impl Default for NelderMead {
    fn default() -> Self {
        NelderMead {
            max_evals: 4000,
            ftol: 1e-14,
            xtol: 1e-11,
            restarts: 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
}

impl NelderMead {
    /// Minimises `f` from `x0` with initial simplex edges `step`.
    pub fn minimize<F: Fn(&[f64]) -> f64>(&self, f: F, x0: &[f64], step: &[f64]) -> Minimum {
        let mut best = Minimum {
            x: x0.to_vec(),
            value: f(x0),
            evals: 1,
        };
        let mut scale = 1.0;
        for _ in 0..=self.restarts {
            let steps: Vec<f64> = step.iter().map(|s| s * scale).collect();
            let run = self.run(&f, &best.x, &steps, self.max_evals.saturating_sub(best.evals));
            best.evals += run.evals;
            if run.value <= best.value {
                best.x = run.x;
                best.value = run.value;
            }
            scale *= 0.1;
            if best.evals >= self.max_evals {
                break;
            }
        }
        best
    }

    fn run<F: Fn(&[f64]) -> f64>(&self, f: &F, x0: &[f64], step: &[f64], budget: usize) -> Minimum {
        let d = x0.len();
        let mut pts: Vec<Vec<f64>> = vec![x0.to_vec()];
        for i in 0..d {
            let mut p = x0.to_vec();
            p[i] += step[i];
            pts.push(p);
        }
        let mut vals: Vec<f64> = pts.iter().map(|p| f(p)).collect();
        let mut evals = d + 1;
        while evals < budget {
            let mut order: Vec<usize> = (0..=d).collect();
            order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
            pts = order.iter().map(|&i| pts[i].clone()).collect();
            vals = order.iter().map(|&i| vals[i]).collect();
            let (lo, hi) = (vals[0], vals[d]);
            let spread = (hi - lo).abs() <= self.ftol * lo.abs().max(1e-300);
            let small = (0..d).all(|k| pts.iter().all(|p| (p[k] - pts[0][k]).abs() <= self.xtol));
            if (spread && hi.is_finite()) || small {
                break;
            }
            let centroid: Vec<f64> = (0..d).map(|k| pts[..d].iter().map(|p| p[k]).sum::<f64>() / d as f64).collect();
            let along = |t: f64| -> Vec<f64> { (0..d).map(|k| centroid[k] + t * (pts[d][k] - centroid[k])).collect() };
            let xr = along(-1.0);
            let fr = f(&xr);
            evals += 1;
            if fr < vals[0] {
                let xe = along(-2.0);
                let fe = f(&xe);
                evals += 1;
                if fe < fr {
                    pts[d] = xe;
                    vals[d] = fe;
                } else {
                    pts[d] = xr;
                    vals[d] = fr;
                }
            } else if fr < vals[d - 1] {
                pts[d] = xr;
                vals[d] = fr;
            } else {
                let (xc, fc) = if fr < vals[d] {
                    let x = along(-0.5);
                    let v = f(&x);
                    (x, v)
                } else {
                    let x = along(0.5);
                    let v = f(&x);
                    (x, v)
                };
                evals += 1;
                if fc < vals[d].min(fr) {
                    pts[d] = xc;
                    vals[d] = fc;
                } else {
                    for i in 1..=d {
                        let p: Vec<f64> = (0..d).map(|k| pts[0][k] + 0.5 * (pts[i][k] - pts[0][k])).collect();
                        vals[i] = f(&p);
                        pts[i] = p;
                    }
                    evals += d;
                }
            }
        }
        let i = (0..=d).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap_or(0);
        Minimum {
            x: pts[i].clone(),
            value: vals[i],
            evals,
        }
    }
}

/// Golden-section minimum of `f` on `[lo, hi]`.
pub fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (hi - r * (hi - lo), lo + r * (hi - lo));
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..80 {
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - r * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + r * (hi - lo);
            fb = f(b);
        }
    }
    fa.min(fb)
}

/// Indices of the cyclic local minima of `v`.
pub fn local_minima(v: &[f64]) -> impl Iterator<Item = usize> + '_ {
    let n = v.len();
    (0..n).filter(move |&j| v[j] <= v[(j + n - 1) % n] && v[j] <= v[(j + 1) % n])
}
