//! Levi-Civita curvature of a real metric given as jets in the real frame.
//!
//! Independent of the complex machinery: the metric matrix is all it sees.

use crate::jet::Jet;
use crate::linalg::invert;

/// Christoffel symbols `Γ^a_{bc}` as jets one order below the metric.
pub fn christoffel(g: &[Vec<Jet>]) -> Vec<Vec<Vec<Jet>>> {
    let d = g.len();
    let ginv = invert(g);
    // dg[e][a][b] = ∂_e g_ab
    let dg: Vec<Vec<Vec<Jet>>> = (0..d)
        .map(|e| {
            (0..d)
                .map(|a| (0..d).map(|b| g[a][b].partial(e)).collect())
                .collect()
        })
        .collect();
    // lowered symbols Γ_{dbc} = (∂_b g_dc + ∂_c g_db - ∂_d g_bc)/2
    let mut lowered = vec![vec![vec![Jet::real(0.0); d]; d]; d];
    for dd in 0..d {
        for b in 0..d {
            for c in b..d {
                let v = (&(&dg[b][dd][c] + &dg[c][dd][b]) - &dg[dd][b][c]) * 0.5;
                lowered[dd][b][c] = v.clone();
                lowered[dd][c][b] = v;
            }
        }
    }
    let mut gamma = vec![vec![vec![Jet::real(0.0); d]; d]; d];
    for a in 0..d {
        for b in 0..d {
            for c in b..d {
                let mut acc = Jet::real(0.0);
                for dd in 0..d {
                    acc = &acc + &(&ginv[a][dd] * &lowered[dd][b][c]);
                }
                gamma[a][b][c] = acc.clone();
                gamma[a][c][b] = acc;
            }
        }
    }
    gamma
}

/// Ricci tensor and scalar curvature at the expansion point. The metric
/// jets must have order at least 2.
#[derive(Clone, Debug)]
pub struct RicciData {
    pub ricci: Vec<Vec<f64>>,
    pub scal: f64,
}

impl RicciData {
    pub fn max_abs(&self) -> f64 {
        self.ricci
            .iter()
            .flatten()
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

pub fn ricci(g: &[Vec<Jet>]) -> RicciData {
    let d = g.len();
    let gamma = christoffel(g);
    let mut ric = vec![vec![0.0; d]; d];
    // contracted Γ^a_{ab}
    let trace: Vec<Jet> = (0..d)
        .map(|b| {
            let mut acc = Jet::real(0.0);
            for a in 0..d {
                acc = &acc + &gamma[a][a][b];
            }
            acc
        })
        .collect();
    let gv: Vec<Vec<Vec<f64>>> = gamma
        .iter()
        .map(|m| {
            m.iter()
                .map(|r| r.iter().map(|j| j.value().re).collect())
                .collect()
        })
        .collect();
    let tv: Vec<f64> = trace.iter().map(|j| j.value().re).collect();
    for b in 0..d {
        for c in b..d {
            let mut v = 0.0;
            for a in 0..d {
                v += gamma[a][b][c].partial(a).value().re;
            }
            v -= trace[b].partial(c).value().re;
            for dd in 0..d {
                v += tv[dd] * gv[dd][b][c];
                for a in 0..d {
                    v -= gv[a][c][dd] * gv[dd][a][b];
                }
            }
            ric[b][c] = v;
            ric[c][b] = v;
        }
    }
    let ginv = invert(&crate::linalg::real_values(g));
    let mut scal = 0.0;
    for b in 0..d {
        for c in 0..d {
            scal += ginv[b][c] * ric[b][c];
        }
    }
    RicciData { ricci: ric, scal }
}

/// Largest component of `∇θ` for a real 1-form given by its real-frame
/// components (jets of order at least 1).
pub fn covariant_derivative_residual(g: &[Vec<Jet>], theta: &[Jet]) -> f64 {
    let d = g.len();
    let gamma = christoffel(g);
    let mut worst = 0.0f64;
    for a in 0..d {
        for b in 0..d {
            let mut v = theta[b].partial(a).value().re;
            for c in 0..d {
                v -= gamma[c][a][b].value().re * theta[c].value().re;
            }
            worst = worst.max(v.abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round_sphere_chart(p: &[f64]) -> Vec<Vec<Jet>> {
        // stereographic metric 4/(1+|x|^2)^2 δ on R^2, curvature 1
        let xs = Jet::coordinates(p, 2);
        let r2 = &(&xs[0] * &xs[0]) + &(&xs[1] * &xs[1]);
        let conf = (&r2 + &Jet::real(1.0)).powf(-2.0) * 4.0;
        vec![
            vec![conf.clone(), Jet::real(0.0)],
            vec![Jet::real(0.0), conf],
        ]
    }

    #[test]
    fn flat_metric_has_zero_curvature() {
        let xs = Jet::coordinates(&[0.1, 0.2, 0.3], 2);
        let g: Vec<Vec<Jet>> = (0..3)
            .map(|a| {
                (0..3)
                    .map(|b| if a == b { Jet::real(2.0) } else { Jet::real(0.0) })
                    .collect()
            })
            .collect();
        let _ = xs;
        let r = ricci(&g);
        assert_eq!(r.scal, 0.0);
    }

    #[test]
    fn unit_sphere_scalar_curvature_is_two() {
        for p in [[0.0, 0.0], [0.7, -0.4], [2.0, 1.0]] {
            let r = ricci(&round_sphere_chart(&p));
            assert!((r.scal - 2.0).abs() < 1e-12, "scal {}", r.scal);
        }
    }

    #[test]
    fn polar_coordinates_are_flat() {
        // dr^2 + r^2 dφ^2 in coordinates (r, φ)
        let xs = Jet::coordinates(&[1.3, 0.4], 2);
        let g = vec![
            vec![Jet::real(1.0), Jet::real(0.0)],
            vec![Jet::real(0.0), &xs[0] * &xs[0]],
        ];
        let r = ricci(&g);
        assert!(r.max_abs() < 1e-14);
        // the Hessian of r is r dφ², so dr is not parallel
        let theta = vec![Jet::real(1.0), Jet::real(0.0)];
        assert!(covariant_derivative_residual(&g, &theta) > 0.1);
    }
}
