//! Curvature of a Hermitian model at a point: Chern-Ricci form, the first
//! Levi-Civita Ricci form, `Υ`, the Chern scalar, torsion norm, and the
//! Riemannian scalar curvature both from the real Levi-Civita connection
//! and from the Hermitian relation.

pub mod riemann;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::calculus::{codifferential, dc, del, del_star, delbar, delbar_star, exterior_d, real_metric, seed};
use crate::exterior::{ComplexForm, Form, Metric, MetricAtPoint};
use crate::jet::{Jet, Scalar};
use crate::linalg::symmetric_eigenvalues;
use crate::models::{HermitianModel, POTENTIAL_ORDER};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `Ric^(1)(Ω) = -½ dd^c log det Ω` from a form with at least two derivatives.
pub fn chern_ricci_form(omega: &Form<Jet>) -> Form<Jet> {
    let m = Metric::from_fundamental_form(omega);
    let logdet = m.determinant().ln();
    exterior_d(&dc(&Form::scalar(omega.n(), logdet))).scale(Complex64::new(-0.5, 0.0))
}

/// Norm of a form with respect to `m`.
pub fn norm(m: &MetricAtPoint, a: &ComplexForm) -> f64 {
    m.inner(a, a).re.max(0.0).sqrt()
}

/// `‖a - b‖ / max(‖a‖, ‖b‖, 1)` in the metric norm.
pub fn rel_err(m: &MetricAtPoint, a: &ComplexForm, b: &ComplexForm) -> f64 {
    norm(m, &a.sub(b)) / norm(m, a).max(norm(m, b)).max(1.0)
}

pub fn rel_scalar(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// Every pointwise curvature quantity of a model at one point.
#[derive(Clone, Debug)]
pub struct PointCurvature {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub point: Vec<f64>,
    pub metric: MetricAtPoint,
    pub omega: ComplexForm,
    /// Base Vaisman data `θ = -d log ϱ²`, `Jθ`, `d(Jθ)`, `θ∧Jθ`.
    pub theta: ComplexForm,
    pub j_theta: ComplexForm,
    pub d_j_theta: ComplexForm,
    pub theta_j_theta: ComplexForm,
    /// `Ω₀` of the undeformed model.
    pub omega0: ComplexForm,
    /// Lee form of `Ω` itself.
    pub lee: ComplexForm,
    pub d_omega: ComplexForm,
    pub omega_pow: ComplexForm,
    pub d_omega_pow: ComplexForm,
    pub ric1: ComplexForm,
    pub upsilon: ComplexForm,
    pub del_star_omega: ComplexForm,
    pub delbar_star_omega: ComplexForm,
    pub delta_omega: ComplexForm,
    /// `∂∂*Ω + ∂̄∂̄*Ω`.
    pub codiff_sum: ComplexForm,
    pub lc_ricci: ComplexForm,
    /// `τ = Λ(∂Ω)`.
    pub tau: ComplexForm,
    pub delbar_tau: ComplexForm,
    pub del_tau_bar: ComplexForm,
    pub del_delbar_omega: ComplexForm,
    pub s_c: f64,
    pub torsion_sq: f64,
    pub del_star_norm_sq: f64,
    pub scal_direct: f64,
    pub scal_relation: f64,
    pub ricci_eigenvalues: Vec<f64>,
    pub lee_parallel_residual: f64,
}

impl PointCurvature {
    pub fn compute(model: &HermitianModel, point: &[f64]) -> Self {
        let n = model.n();
        let xs = seed(point, POTENTIAL_ORDER);
        let jets = model.jets(&xs);
        let om = &jets.omega;
        let mj = Metric::from_fundamental_form(om);
        let metric = Metric::from_fundamental_form(&om.value());

        let ric1_j = chern_ricci_form(om);
        let logdet_conf =
            (mj.determinant().ln()).minus(&(&jets.potential * n as f64));
        let upsilon = exterior_d(&dc(&Form::scalar(n, logdet_conf)))
            .scale(Complex64::new(-0.5, 0.0))
            .value();

        let ds = del_star(om, &mj);
        let dbs = delbar_star(om, &mj);
        let codiff_sum = del(&ds).add(&delbar(&dbs)).value();
        let ric1 = ric1_j.value();
        let lc_ricci = ric1.sub(&codiff_sum.scale(Complex64::new(0.5, 0.0)));

        let d_omega = exterior_d(om).value();
        let tau_j = mj.lefschetz_adjoint(&del(om));
        let tau = tau_j.value();
        let delbar_tau = delbar(&tau_j).value();
        let del_tau_bar = del(&tau_j.conj()).value();
        let ddb = del(&delbar(om)).value();

        let omega_v = om.value();
        let omega_pow_j = om.power(n - 1);
        let omega_pow = omega_pow_j.value();
        let d_omega_pow = exterior_d(&omega_pow_j).value();

        let s_c = {
            let top = ric1.wedge(&omega_pow);
            let vol = omega_v.wedge(&omega_pow);
            let full = (1u32 << (2 * n)) - 1;
            (top.coefficient(full) / vol.coefficient(full)).re * n as f64
        };
        let term_a = metric
            .inner(&metric.lefschetz_adjoint(&ddb).scale(I), &omega_v)
            .re;
        let term_b = metric.inner(&codiff_sum, &omega_v).re;
        let torsion_sq = term_a + term_b;
        let ds_v = ds.value();
        let del_star_norm_sq = metric.inner(&ds_v, &ds_v).re;
        let scal_relation = 2.0 * s_c + (term_b - 2.0 * del_star_norm_sq) - 0.5 * torsion_sq;

        let g = real_metric(&mj);
        let ric = riemann::ricci(&g);
        let lee_comps = jets.lee.real_components();
        let lee_parallel_residual = riemann::covariant_derivative_residual(&g, &lee_comps);

        PointCurvature {
            n,
            alpha: model.alpha(),
            beta: model.beta(),
            point: point.to_vec(),
            metric,
            omega: omega_v,
            theta: jets.theta.value(),
            j_theta: jets.j_theta.value(),
            d_j_theta: jets.d_j_theta.value(),
            theta_j_theta: jets.theta_j_theta.value(),
            omega0: jets.omega0.value(),
            lee: jets.lee.value(),
            d_omega,
            omega_pow,
            d_omega_pow,
            ric1,
            upsilon,
            del_star_omega: ds_v,
            delbar_star_omega: dbs.value(),
            delta_omega: codifferential(om, &mj).value(),
            codiff_sum,
            lc_ricci,
            tau,
            delbar_tau,
            del_tau_bar,
            del_delbar_omega: ddb,
            s_c,
            torsion_sq,
            del_star_norm_sq,
            scal_direct: ric.scal,
            scal_relation,
            ricci_eigenvalues: symmetric_eigenvalues(&ric.ricci),
            lee_parallel_residual,
        }
    }

    fn zeta(&self) -> f64 {
        self.alpha - 1.0
    }

    /// `(n-1)θ∧Ω^{n-1}` against `d(Ω^{n-1})`.
    pub fn residual_lee_power(&self) -> f64 {
        let rhs = self
            .lee
            .wedge(&self.omega_pow)
            .scale(Complex64::new((self.n - 1) as f64, 0.0));
        rel_err(&self.metric, &self.d_omega_pow, &rhs)
    }

    /// `τ = -i ∂̄*Ω`.
    pub fn residual_torsion_codifferential(&self) -> f64 {
        rel_err(&self.metric, &self.tau, &self.delbar_star_omega.scale(-I))
    }

    /// `θ = Λ(dΩ)/(n-1)`.
    pub fn residual_lee_from_lambda(&self) -> f64 {
        let lam = self
            .metric
            .lefschetz_adjoint(&self.d_omega)
            .scale(Complex64::new(1.0 / (self.n - 1) as f64, 0.0));
        rel_err(&self.metric, &self.lee, &lam)
    }

    /// `θ = J(δΩ)/(n-1)`.
    pub fn residual_lee_from_delta(&self) -> f64 {
        let v = self
            .delta_omega
            .j_action()
            .scale(Complex64::new(1.0 / (self.n - 1) as f64, 0.0));
        rel_err(&self.metric, &self.lee, &v)
    }

    /// `dΩ = θ∧Ω`.
    pub fn residual_lck(&self) -> f64 {
        rel_err(&self.metric, &self.d_omega, &self.lee.wedge(&self.omega))
    }

    /// `Ω₀ = -d(Jθ) + θ∧Jθ` for the undeformed model.
    pub fn residual_fundamental_vaisman(&self) -> f64 {
        let rhs = self.d_j_theta.negated().add(&self.theta_j_theta);
        rel_err(&self.metric, &self.omega0, &rhs)
    }

    /// `∂∂*Ω + ∂̄∂̄*Ω = -(n-1) d(Jθ_Ω)` with `θ_Ω` the Lee form of `Ω`.
    pub fn residual_codiff_sum(&self) -> f64 {
        let k = -((self.n - 1) as f64) * self.beta / self.alpha;
        rel_err(&self.metric, &self.codiff_sum, &self.d_j_theta.scale(Complex64::new(k, 0.0)))
    }

    /// `Ric^(1)(Ω) = -(n/2) d(Jθ)`.
    pub fn residual_chern_ricci(&self) -> f64 {
        let rhs = self.d_j_theta.scale(Complex64::new(-(self.n as f64) / 2.0, 0.0));
        rel_err(&self.metric, &self.ric1, &rhs)
    }

    /// `R^(1)(Ω) = c · d(Jθ)` for a given coefficient `c`.
    pub fn residual_lc_ricci_coefficient(&self, c: f64) -> f64 {
        rel_err(&self.metric, &self.lc_ricci, &self.d_j_theta.scale(Complex64::new(c, 0.0)))
    }

    /// `‖R^(1)(Ω)‖`.
    pub fn lc_ricci_norm(&self) -> f64 {
        norm(&self.metric, &self.lc_ricci)
    }

    /// `d(Jθ) = -(2/(n-1)) i ∂̄τ`.
    pub fn residual_d_j_theta_from_tau(&self) -> f64 {
        let k = -2.0 / (self.n - 1) as f64 * self.alpha / self.beta;
        rel_err(&self.metric, &self.d_j_theta, &self.delbar_tau.scale(I * k))
    }

    /// `∂̄τ = -∂τ̄`.
    pub fn residual_delbar_tau(&self) -> f64 {
        rel_err(&self.metric, &self.delbar_tau, &self.del_tau_bar.negated())
    }

    /// `Υ = 0` on cone models.
    pub fn upsilon_norm(&self) -> f64 {
        norm(&self.metric, &self.upsilon)
    }

    /// `Ric^(1) = Υ - (n/2) d(Jθ_Ω)`, the l.c.K. decomposition.
    pub fn residual_upsilon_decomposition(&self) -> f64 {
        let k = self.n as f64 / 2.0 * self.beta / self.alpha;
        let rhs = self.upsilon.sub(&self.d_j_theta.scale(Complex64::new(k, 0.0)));
        rel_err(&self.metric, &self.ric1, &rhs)
    }

    pub fn residual_scal_oracles(&self) -> f64 {
        rel_scalar(self.scal_direct, self.scal_relation)
    }

    /// Smallest eigenvalue of the real symmetric form `-d(Jθ)(·, J·)`.
    pub fn min_eigenvalue_minus_d_j_theta(&self) -> f64 {
        min_eigenvalue_of_11_form(&self.d_j_theta.negated())
    }

    /// Eigenvalues of `h_T = θ⊗θ + Jθ⊗Jθ` in the real frame.
    pub fn limit_tensor_eigenvalues(&self) -> Vec<f64> {
        let t: Vec<f64> = self.theta.real_components().iter().map(|z| z.re).collect();
        let jt: Vec<f64> = self.j_theta.real_components().iter().map(|z| z.re).collect();
        let d = t.len();
        let m: Vec<Vec<f64>> = (0..d)
            .map(|a| (0..d).map(|b| t[a] * t[b] + jt[a] * jt[b]).collect())
            .collect();
        symmetric_eigenvalues(&m)
    }

    pub fn report(&self, model: &HermitianModel) -> CurvatureReport {
        let zeta = self.zeta();
        let n = self.n as f64;
        CurvatureReport {
            model: model.descriptor(),
            point: self.point.clone(),
            zeta,
            s_c: self.s_c,
            s_c_formula: expected::chern_scalar(self.n, zeta),
            scal_direct: self.scal_direct,
            scal_via_relation: self.scal_relation,
            scal_formula: expected::riemann_scalar(self.n, zeta),
            torsion_norm_sq: self.torsion_sq,
            torsion_formula: (n - 1.0) / (1.0 + zeta).powi(2),
            ric1_norm: norm(&self.metric, &self.ric1),
            lc_ricci_norm: self.lc_ricci_norm(),
            d_j_theta_norm: norm(&self.metric, &self.d_j_theta),
            residuals: vec![
                ("lee_power".into(), self.residual_lee_power()),
                ("torsion_codifferential".into(), self.residual_torsion_codifferential()),
                ("fundamental_vaisman".into(), self.residual_fundamental_vaisman()),
                ("codifferential_sum".into(), self.residual_codiff_sum()),
                ("chern_ricci".into(), self.residual_chern_ricci()),
                ("scal_oracles".into(), self.residual_scal_oracles()),
            ],
        }
    }
}

/// Smallest eigenvalue of `ω(·, J·)` for a real (1,1)-form `ω`.
pub fn min_eigenvalue_of_11_form(w: &ComplexForm) -> f64 {
    let mat = w.to_real_matrix();
    let n = w.n();
    let jm = crate::models::j_matrix(n);
    let d = 2 * n;
    let g: Vec<Vec<f64>> = (0..d)
        .map(|a| {
            (0..d)
                .map(|b| (0..d).map(|k| mat[a][k].re * jm[k][b]).sum())
                .collect()
        })
        .collect();
    symmetric_eigenvalues(&g)[0]
}

/// Closed-form values for the two-parameter family with `β = 1`.
pub mod expected {
    /// `n(n-1)/(2(1+ζ))`.
    pub fn chern_scalar(n: usize, zeta: f64) -> f64 {
        let n = n as f64;
        n * (n - 1.0) / (2.0 * (1.0 + zeta))
    }

    /// `n(n-1)/(1+ζ)² · (ζ - (1-2n)/(2n))`.
    pub fn riemann_scalar(n: usize, zeta: f64) -> f64 {
        let nf = n as f64;
        nf * (nf - 1.0) / (1.0 + zeta).powi(2) * (zeta - zeta_zero(n))
    }

    /// `(1-2n)/(2n)`, where the scalar curvature changes sign.
    pub fn zeta_zero(n: usize) -> f64 {
        let n = n as f64;
        (1.0 - 2.0 * n) / (2.0 * n)
    }

    /// `-1/n`, the Levi-Civita Ricci-flat member.
    pub fn zeta_flat(n: usize) -> f64 {
        -1.0 / n as f64
    }

    /// Coefficient of `d(Jθ)` in `R^(1)(Ω_ζ)` as displayed in the
    /// literature: `-n + (n-1)/(1+ζ)`.
    pub fn lc_ricci_coefficient_displayed(n: usize, zeta: f64) -> f64 {
        let n = n as f64;
        -n + (n - 1.0) / (1.0 + zeta)
    }

    /// Coefficient of `d(Jθ)` in `R^(1)(Ω_ζ) = Ric^(1) - ½(∂∂* + ∂̄∂̄*)Ω_ζ`
    /// assembled from `Ric^(1) = -(n/2) d(Jθ)` and
    /// `(∂∂* + ∂̄∂̄*)Ω_ζ = -((n-1)/(1+ζ)) d(Jθ)`.
    pub fn lc_ricci_coefficient(n: usize, zeta: f64) -> f64 {
        0.5 * lc_ricci_coefficient_displayed(n, zeta)
    }

    /// Maximizer `ζ = 1/n - 1` and maximum `n²(n-1)/2` of the scalar law.
    pub fn scal_sup(n: usize) -> (f64, f64) {
        let nf = n as f64;
        (1.0 / nf - 1.0, nf * nf * (nf - 1.0) / 2.0)
    }
}

/// Serializable summary of the curvature at one point.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CurvatureReport {
    pub model: String,
    pub point: Vec<f64>,
    pub zeta: f64,
    pub s_c: f64,
    pub s_c_formula: f64,
    pub scal_direct: f64,
    pub scal_via_relation: f64,
    pub scal_formula: f64,
    pub torsion_norm_sq: f64,
    pub torsion_formula: f64,
    pub ric1_norm: f64,
    pub lc_ricci_norm: f64,
    pub d_j_theta_norm: f64,
    pub residuals: Vec<(String, f64)>,
}

impl CurvatureReport {
    pub fn all_finite(&self) -> bool {
        self.residuals.iter().all(|(_, v)| v.is_finite())
            && [self.s_c, self.scal_direct, self.scal_via_relation, self.torsion_norm_sq]
                .iter()
                .all(|v| v.is_finite())
    }
}

pub fn chern_ricci(model: &HermitianModel, point: &[f64]) -> ComplexForm {
    chern_ricci_form(&model.jets_at(point).omega).value()
}

pub fn lc_ricci(model: &HermitianModel, point: &[f64]) -> ComplexForm {
    PointCurvature::compute(model, point).lc_ricci
}

pub fn upsilon(model: &HermitianModel, point: &[f64]) -> ComplexForm {
    PointCurvature::compute(model, point).upsilon
}

pub fn chern_scalar(model: &HermitianModel, point: &[f64]) -> f64 {
    PointCurvature::compute(model, point).s_c
}

pub fn torsion_norm_sq(model: &HermitianModel, point: &[f64]) -> f64 {
    PointCurvature::compute(model, point).torsion_sq
}

/// Scalar curvature of `g = Ω(·, J·)` from its Levi-Civita connection.
pub fn riemann_scalar_direct(model: &HermitianModel, point: &[f64]) -> f64 {
    let g = model.real_metric_field().jet_at(point, 2);
    riemann::ricci(&g).scal
}

pub fn riemann_scalar_via_relation(model: &HermitianModel, point: &[f64]) -> f64 {
    PointCurvature::compute(model, point).scal_relation
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_chart_has_no_chern_curvature() {
        let xs = seed(&[0.3, 0.1, -0.2, 0.5], 2);
        let om = Metric::new(2, vec![Jet::real(1.0), Jet::real(0.0), Jet::real(0.0), Jet::real(1.0)])
            .fundamental_form();
        let _ = xs;
        assert!(chern_ricci_form(&om).value().max_abs() < 1e-15);
    }

    #[test]
    fn hopf_reference_values() {
        let m = HermitianModel::hopf(4).unwrap();
        let pc = PointCurvature::compute(&m, &m.base_point());
        assert!((pc.s_c - 6.0).abs() < 1e-10);
        assert!((pc.scal_direct - 10.5).abs() < 1e-8, "scal {}", pc.scal_direct);
        assert!((pc.torsion_sq - 3.0).abs() < 1e-10, "torsion {}", pc.torsion_sq);
        assert!(pc.residual_scal_oracles() < 1e-8);
    }

    #[test]
    fn lee_form_identities() {
        let m = HermitianModel::hopf(3).unwrap().zeta_family(0.5).unwrap();
        let pc = PointCurvature::compute(&m, &[0.3, 0.5, -0.7, 0.2, 0.4, 0.1]);
        assert!(pc.residual_lee_from_lambda() < 1e-10);
        assert!(pc.residual_lee_from_delta() < 1e-10);
        assert!(pc.residual_lck() < 1e-10);
        assert!(pc.residual_lee_power() < 1e-10);
        assert!(pc.residual_torsion_codifferential() < 1e-10);
        assert!(pc.residual_delbar_tau() < 1e-10);
        assert!(pc.residual_d_j_theta_from_tau() < 1e-10);
        assert!(pc.lee_parallel_residual < 1e-9);
    }

    #[test]
    fn expected_scalar_law_examples() {
        assert!((expected::riemann_scalar(4, 0.0) - 10.5).abs() < 1e-14);
        assert!((expected::riemann_scalar(4, -0.75) - 24.0).abs() < 1e-12);
        assert!(expected::riemann_scalar(4, -0.875).abs() < 1e-14);
        assert!((expected::riemann_scalar(3, 0.0) - 5.0).abs() < 1e-14);
        let (z, s) = expected::scal_sup(4);
        assert!((z + 0.75).abs() < 1e-15 && (s - 24.0).abs() < 1e-12);
    }
}
