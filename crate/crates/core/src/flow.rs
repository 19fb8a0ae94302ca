//! Chern-Ricci flow of the Vaisman family.
//!
//! Starting from `Ω₀ = -d(Jθ) + θ∧Jθ` the flow stays in the two-parameter
//! family with `α(t) = 1 - (n/2)t`, `β = 1`, and collapses at `T = 2/n`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvature::{chern_ricci, norm, PointCurvature};
use crate::error::{Error, Result};
use crate::exterior::ComplexForm;
use crate::models::HermitianModel;
use crate::Complex64;

pub const RESIDUAL_STEP: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowState {
    pub n: usize,
    pub t: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl FlowState {
    pub fn new(n: usize, t: f64) -> Result<Self> {
        let big_t = collapse_time(n);
        if !(t >= 0.0 && t < big_t) {
            return Err(Error::DomainError(format!(
                "flow time t = {t} outside [0, {big_t})"
            )));
        }
        Ok(FlowState {
            n,
            t,
            alpha: 1.0 - 0.5 * n as f64 * t,
            beta: 1.0,
        })
    }

    pub fn zeta(&self) -> f64 {
        self.alpha - 1.0
    }

    /// Lee form multiplier `T/(T-t)`.
    pub fn lee_scale(&self) -> f64 {
        let big_t = collapse_time(self.n);
        big_t / (big_t - self.t)
    }
}

pub fn collapse_time(n: usize) -> f64 {
    2.0 / n as f64
}

/// `Ω(t) = Ω₀ - t Ric^(1)(Ω₀)` as a model.
pub fn flow_metric(model: &HermitianModel, t: f64) -> Result<HermitianModel> {
    let s = FlowState::new(model.n(), t)?;
    model.zeta_family(s.zeta())
}

fn omega_value(model: &HermitianModel, point: &[f64]) -> ComplexForm {
    model.jets_at(point).omega.value()
}

/// Norm of `(Ω(t+Δt) - Ω(t-Δt))/(2Δt) + Ric^(1)(Ω(t))` at `point`.
pub fn flow_residual(model: &HermitianModel, t: f64, dt: f64, point: &[f64]) -> Result<f64> {
    let big_t = collapse_time(model.n());
    if !(dt > 0.0 && t > dt && t < big_t - dt) {
        return Err(Error::DomainError(format!(
            "central difference needs dt < t < T - dt (t = {t}, dt = {dt}, T = {big_t})"
        )));
    }
    let now = flow_metric(model, t)?;
    let ahead = omega_value(&flow_metric(model, t + dt)?, point);
    let behind = omega_value(&flow_metric(model, t - dt)?, point);
    let rate = ahead.sub(&behind).scale(Complex64::new(0.5 / dt, 0.0));
    let ric = chern_ricci(&now, point);
    Ok(norm(&now.metric_at(point), &rate.add(&ric)))
}

/// Central difference where it fits in `[0, T)`, one-sided at either end.
fn residual_any(model: &HermitianModel, t: f64, point: &[f64]) -> Result<f64> {
    let dt = RESIDUAL_STEP;
    let big_t = collapse_time(model.n());
    if t > dt && t < big_t - dt {
        return flow_residual(model, t, dt, point);
    }
    let now = flow_metric(model, t)?;
    let here = omega_value(&now, point);
    let rate = if t <= dt {
        omega_value(&flow_metric(model, t + dt)?, point).sub(&here)
    } else {
        here.sub(&omega_value(&flow_metric(model, t - dt)?, point))
    }
    .scale(Complex64::new(1.0 / dt, 0.0));
    let ric = chern_ricci(&now, point);
    Ok(norm(&now.metric_at(point), &rate.add(&ric)))
}

/// Coefficients `(a, b)` of `-Ric^(1) ≈ a(-d(Jθ)) + b θ∧Jθ` and the
/// size of the part orthogonal to that plane.
pub fn project_velocity(model: &HermitianModel, point: &[f64]) -> (f64, f64, f64) {
    let pc = PointCurvature::compute(model, point);
    let e1 = pc.d_j_theta.negated();
    let e2 = pc.theta_j_theta.clone();
    let v = pc.ric1.negated();
    let masks: Vec<u32> = e1
        .terms()
        .map(|(m, _)| m)
        .chain(e2.terms().map(|(m, _)| m))
        .chain(v.terms().map(|(m, _)| m))
        .collect();
    let dot = |a: &ComplexForm, b: &ComplexForm| -> f64 {
        let mut seen = std::collections::BTreeSet::new();
        masks
            .iter()
            .filter(|m| seen.insert(**m))
            .map(|m| (a.coefficient(*m).conj() * b.coefficient(*m)).re)
            .sum()
    };
    let (g11, g12, g22) = (dot(&e1, &e1), dot(&e1, &e2), dot(&e2, &e2));
    let (r1, r2) = (dot(&e1, &v), dot(&e2, &v));
    let det = g11 * g22 - g12 * g12;
    let a = (g22 * r1 - g12 * r2) / det;
    let b = (g11 * r2 - g12 * r1) / det;
    let rest = v
        .sub(&e1.scale(Complex64::new(a, 0.0)))
        .sub(&e2.scale(Complex64::new(b, 0.0)));
    (a, b, norm(&pc.metric, &rest))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rk4Result {
    pub t: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Largest off-family velocity component seen along the way.
    pub max_off_family: f64,
}

/// Integrate `Ω' = -Ric^(1)(Ω)` in `(α, β)` with classical RK4, taking the
/// velocity from the pointwise Chern-Ricci form.
pub fn integrate_rk4(
    model: &HermitianModel,
    point: &[f64],
    t_end: f64,
    steps: usize,
) -> Result<Rk4Result> {
    let base = model.with_coefficients(1.0, 1.0)?;
    let h = t_end / steps as f64;
    let mut off: f64 = 0.0;
    let mut rhs = |a: f64, b: f64| -> Result<(f64, f64)> {
        let m = base.with_coefficients(a, b)?;
        let (da, db, rest) = project_velocity(&m, point);
        off = off.max(rest);
        Ok((da, db))
    };
    let (mut a, mut b) = (1.0, 1.0);
    for _ in 0..steps {
        let k1 = rhs(a, b)?;
        let k2 = rhs(a + 0.5 * h * k1.0, b + 0.5 * h * k1.1)?;
        let k3 = rhs(a + 0.5 * h * k2.0, b + 0.5 * h * k2.1)?;
        let k4 = rhs(a + h * k3.0, b + h * k3.1)?;
        a += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        b += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
    }
    Ok(Rk4Result {
        t: t_end,
        alpha: a,
        beta: b,
        max_off_family: off,
    })
}

/// `n(n-1)/(1 - nt/2)² · ((2n-1)/(2n) - nt/2)`, which equals
/// `2(n-1)/(T-t)² · (T - 1/n² - t)`.
pub fn scal_formula(n: usize, t: f64) -> f64 {
    let nf = n as f64;
    let a = 1.0 - 0.5 * nf * t;
    nf * (nf - 1.0) / (a * a) * ((2.0 * nf - 1.0) / (2.0 * nf) - 0.5 * nf * t)
}

/// The often quoted simplification `n(n-1)/(T-t)² · (T - 1/n² - t)`.
/// It has the right sign and zero but differs from [`scal_formula`] by
/// the factor `n/2`.
pub fn scal_formula_displayed(n: usize, t: f64) -> f64 {
    let nf = n as f64;
    let big_t = collapse_time(n);
    nf * (nf - 1.0) / (big_t - t).powi(2) * (big_t - 1.0 / (nf * nf) - t)
}

/// `(n-1)/(T-t)`.
pub fn chern_scalar_formula(n: usize, t: f64) -> f64 {
    (n as f64 - 1.0) / (collapse_time(n) - t)
}

/// `(1 - nt/2)^{n-1}`.
pub fn volume_ratio_formula(n: usize, t: f64) -> f64 {
    (1.0 - 0.5 * n as f64 * t).powi(n as i32 - 1)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowRow {
    pub t: f64,
    pub alpha: f64,
    #[serde(rename = "s_C")]
    pub s_c: f64,
    pub scal_direct: f64,
    pub scal_formula: f64,
    pub vol_ratio: f64,
    pub residual_flow: f64,
    /// `‖Ric^(1)(Ω(t)) - Ric^(1)(Ω₀)‖`, relative.
    #[serde(skip)]
    pub ric_drift: f64,
}

/// One row per grid time, evaluated at `point`.
pub fn flow_diagnostics(
    model: &HermitianModel,
    t_grid: &[f64],
    point: &[f64],
) -> Result<Vec<FlowRow>> {
    let n = model.n();
    let start = flow_metric(model, 0.0)?;
    let pc0 = PointCurvature::compute(&start, point);
    let det0 = pc0.metric.determinant().re;
    t_grid
        .par_iter()
        .map(|&t| {
            let m = flow_metric(model, t)?;
            let pc = PointCurvature::compute(&m, point);
            let drift = crate::curvature::rel_err(&pc.metric, &pc.ric1, &pc0.ric1);
            Ok(FlowRow {
                t,
                alpha: m.alpha(),
                s_c: pc.s_c,
                scal_direct: pc.scal_direct,
                scal_formula: scal_formula(n, t),
                vol_ratio: pc.metric.determinant().re / det0,
                residual_flow: residual_any(model, t, point)?,
                ric_drift: drift,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trichotomy {
    #[serde(rename = "T")]
    pub collapse: f64,
    pub t_zero: f64,
    pub zeta_zero: f64,
    pub zeta_flat: f64,
}

pub fn trichotomy_times(n: usize) -> Trichotomy {
    let nf = n as f64;
    let big_t = collapse_time(n);
    Trichotomy {
        collapse: big_t,
        t_zero: big_t - 1.0 / (nf * nf),
        zeta_zero: (1.0 - 2.0 * nf) / (2.0 * nf),
        zeta_flat: -1.0 / nf,
    }
}

/// `θ∧Jθ`, the coefficientwise limit of `Ω(t)` as `t → T`.
pub fn limit_form(model: &HermitianModel, point: &[f64]) -> ComplexForm {
    model.jets_at(point).theta_j_theta.value()
}

/// Eigenvalues of `h_T` at `point`, ascending.
pub fn limit_tensor_eigenvalues(model: &HermitianModel, point: &[f64]) -> Vec<f64> {
    PointCurvature::compute(model, point).limit_tensor_eigenvalues()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::rel_err;

    #[test]
    fn trichotomy_values() {
        let t = trichotomy_times(4);
        assert_eq!((t.collapse, t.t_zero, t.zeta_zero, t.zeta_flat), (0.5, 7.0 / 16.0, -7.0 / 8.0, -0.25));
        let t = trichotomy_times(2);
        assert_eq!((t.collapse, t.t_zero, t.zeta_zero, t.zeta_flat), (1.0, 0.75, -0.75, -0.5));
    }

    #[test]
    fn domain_is_half_open() {
        let m = HermitianModel::hopf(3).unwrap();
        assert!(flow_metric(&m, 2.0 / 3.0).is_err());
        assert!(flow_metric(&m, -0.1).is_err());
        assert_eq!(flow_metric(&m, 0.0).unwrap().alpha(), 1.0);
    }

    #[test]
    fn flow_metric_matches_definition() {
        let m = HermitianModel::hopf(3).unwrap();
        let p = [0.4, -0.2, 0.5, 0.3, -0.6, 0.1];
        let t = 0.2;
        let pc0 = PointCurvature::compute(&m, &p);
        let lhs = omega_value(&flow_metric(&m, t).unwrap(), &p);
        let rhs = pc0.omega.sub(&pc0.ric1.scale(Complex64::new(t, 0.0)));
        assert!(rel_err(&pc0.metric, &lhs, &rhs) < 1e-12);
    }

    #[test]
    fn central_residual_is_rounding_level() {
        let m = HermitianModel::hopf(3).unwrap();
        let p = m.base_point();
        assert!(flow_residual(&m, 0.2, 1e-3, &p).unwrap() < 1e-9);
        assert!(flow_residual(&m, 0.0, 1e-3, &p).is_err());
    }

    #[test]
    fn rk4_lands_on_closed_form() {
        let m = HermitianModel::hopf(3).unwrap();
        let p = [0.3, 0.1, -0.7, 0.2, 0.4, -0.5];
        let r = integrate_rk4(&m, &p, 0.3, 12).unwrap();
        assert!((r.alpha - 0.55).abs() < 1e-10, "{}", r.alpha);
        assert!((r.beta - 1.0).abs() < 1e-10);
        assert!(r.max_off_family < 1e-9);
    }

    #[test]
    fn example_rows_for_n4() {
        let m = HermitianModel::hopf(4).unwrap();
        let p = m.base_point();
        let rows = flow_diagnostics(&m, &[0.0, 0.25], &p).unwrap();
        assert!((rows[0].s_c - 6.0).abs() < 1e-9);
        assert!((rows[1].s_c - 12.0).abs() < 1e-8);
        assert!((rows[1].vol_ratio - 0.125).abs() < 1e-10);
        assert!((scal_formula(4, 7.0 / 16.0)).abs() < 1e-12);
        assert!((scal_formula_displayed(4, 0.1) / scal_formula(4, 0.1) - 2.0).abs() < 1e-12);
        for r in &rows {
            assert!((r.scal_direct - r.scal_formula).abs() < 1e-6 * r.scal_formula.abs().max(1.0));
            assert!(r.residual_flow < 1e-9);
            assert!(r.ric_drift < 1e-10);
        }
    }

    #[test]
    fn approaches_limit_form() {
        let m = HermitianModel::hopf(2).unwrap();
        let p = [0.3, 0.1, -0.7, 0.2];
        let lim = limit_form(&m, &p);
        let near = omega_value(&flow_metric(&m, 1.0 - 1e-7).unwrap(), &p);
        assert!(near.max_abs_diff(&lim) < 1e-6);
        let ev = limit_tensor_eigenvalues(&m, &p);
        assert!(ev[0].abs() < 1e-12 && ev[1].abs() < 1e-12);
        assert!(ev[2] > 1e-3 && ev[3] > 1e-3 && (ev[2] - ev[3]).abs() < 1e-9);
    }
}
