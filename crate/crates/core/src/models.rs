//! Explicit chart models: Hopf and lens suspensions of Sasaki-Einstein
//! cones, the two-parameter Vaisman family, the `a`-deformation of the cone
//! metric, and the Sasaki structure checks.
//!
//! Every model is a Ricci-flat Kähler cone `(C, ω_CY = ¼ dd^c ϱ²)` in a
//! chart. The Hermitian metric on the suspension is
//! `Ω_{α,β} = Ω₀ + (1-α) d(Jθ) + (β-1) θ∧Jθ` with `Ω₀ = κ ϱ⁻² ω_CY` and
//! `θ = -d log ϱ²`. Since `Ω₀ = -d(Jθ) + θ∧Jθ` after calibration, this is
//! `-α d(Jθ) + β θ∧Jθ`.
//!
//! Lens charts use coordinates `(z_1..z_m, w)` on the total space of a line
//! bundle over `CP^m` with `|w|²(1+|z|²)^ℓ` as fiber norm and
//! `ϱ² = ((1+|z|²)^ℓ |w|²)^(1/ℓ)`.

use std::f64::consts::E;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::calculus::{dc, exterior_d, real_metric, seed, JetField, RealMetricField};
use crate::curvature::riemann;
use crate::error::{Error, Result};
use crate::exterior::{Form, Metric, MetricAtPoint};
use crate::jet::{Jet, Scalar};

/// Jet order at which potentials are seeded; leaves two derivatives on `Ω`.
pub const POTENTIAL_ORDER: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelKind {
    /// `C^n \ {0}` over the round sphere.
    Hopf { n: usize },
    /// Cone over the circle bundle of `O(-ℓ)`-type over `CP^m`.
    Lens { m: usize, l: usize },
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::Hopf { n } => write!(f, "hopf:{n}"),
            ModelKind::Lens { m, l } => write!(f, "lens:{m}:{l}"),
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |p: &str| {
            p.parse::<usize>()
                .map_err(|_| Error::Usage(format!("bad integer '{p}' in model '{s}'")))
        };
        match parts.as_slice() {
            ["hopf", n] => Ok(ModelKind::Hopf { n: num(n)? }),
            ["lens", m, l] => Ok(ModelKind::Lens {
                m: num(m)?,
                l: num(l)?,
            }),
            _ => Err(Error::Usage(format!(
                "unknown model '{s}'; expected hopf:<n> or lens:<m>:<l>"
            ))),
        }
    }
}

/// Deck transformation `x ↦ A x` generating the suspension, with
/// `A = c·U` (Hopf) or `A = diag(U, c^ℓ)` (lens).
#[derive(Clone, Debug, PartialEq)]
pub struct Suspension {
    c: f64,
    unitary: Vec<Complex64>,
    matrix: Vec<Complex64>,
    inverse: Vec<Complex64>,
}

impl Suspension {
    pub fn c(&self) -> f64 {
        self.c
    }

    /// Row-major complex matrix of the deck map on the chart.
    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    pub fn unitary(&self) -> &[Complex64] {
        &self.unitary
    }

    /// `log ϱ` advances by this amount under the deck map.
    pub fn period(&self) -> f64 {
        self.c.ln()
    }

    pub fn apply(&self, point: &[f64]) -> Vec<f64> {
        apply_complex_matrix(&self.matrix, point)
    }

    pub fn apply_inverse(&self, point: &[f64]) -> Vec<f64> {
        apply_complex_matrix(&self.inverse, point)
    }
}

fn apply_complex_matrix(a: &[Complex64], point: &[f64]) -> Vec<f64> {
    let n = point.len() / 2;
    let z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::new(point[2 * k], point[2 * k + 1]))
        .collect();
    let mut out = Vec::with_capacity(2 * n);
    for j in 0..n {
        let mut s = Complex64::new(0.0, 0.0);
        for k in 0..n {
            s += a[j * n + k] * z[k];
        }
        out.push(s.re);
        out.push(s.im);
    }
    out
}

fn is_unitary(u: &[Complex64], k: usize) -> bool {
    for i in 0..k {
        for j in 0..k {
            let mut s = Complex64::new(0.0, 0.0);
            for l in 0..k {
                s += u[i * k + l] * u[j * k + l].conj();
            }
            let e = if i == j { 1.0 } else { 0.0 };
            if (s - Complex64::new(e, 0.0)).norm() > 1e-12 {
                return false;
            }
        }
    }
    true
}

/// Diagonal phase rotation `diag(e^{iψ}, e^{2iψ}, ...)` of size `k`.
pub fn phase_rotation(k: usize, psi: f64) -> Vec<Complex64> {
    let mut u = vec![Complex64::new(0.0, 0.0); k * k];
    for j in 0..k {
        u[j * k + j] = Complex64::from_polar(1.0, psi * (j + 1) as f64);
    }
    u
}

/// All jets needed at one point, computed once from seeded coordinates.
#[derive(Clone, Debug)]
pub struct ModelJets {
    pub log_rho_sq: Jet,
    /// `θ = -d log ϱ²` of the base family.
    pub theta: Form<Jet>,
    pub j_theta: Form<Jet>,
    pub d_j_theta: Form<Jet>,
    pub theta_j_theta: Form<Jet>,
    pub omega_cy: Form<Jet>,
    pub omega0: Form<Jet>,
    /// `Ω_{α,β}`.
    pub omega: Form<Jet>,
    /// Lee form of `Ω_{α,β}`, namely `(β/α) θ`.
    pub lee: Form<Jet>,
    /// `f_U` with `d f_U = lee`.
    pub potential: Jet,
}

/// A Hermitian model on a cone chart.
#[derive(Clone, Debug)]
pub struct HermitianModel {
    kind: ModelKind,
    n: usize,
    kappa: f64,
    alpha: f64,
    beta: f64,
    suspension: Suspension,
}

impl HermitianModel {
    pub fn hopf(n: usize) -> Result<Self> {
        if !(2..=5).contains(&n) {
            return Err(Error::InvalidModel(format!(
                "hopf dimension {n} outside 2..=5"
            )));
        }
        Self::build(ModelKind::Hopf { n })
    }

    pub fn lens(m: usize, l: usize) -> Result<Self> {
        if !(1..=4).contains(&m) || l == 0 || l > 12 {
            return Err(Error::InvalidModel(format!(
                "lens parameters (m={m}, l={l}) need 1 <= m <= 4 and 1 <= l <= 12"
            )));
        }
        Self::build(ModelKind::Lens { m, l })
    }

    pub fn from_kind(kind: ModelKind) -> Result<Self> {
        match kind {
            ModelKind::Hopf { n } => Self::hopf(n),
            ModelKind::Lens { m, l } => Self::lens(m, l),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::from_kind(s.parse()?)
    }

    fn build(kind: ModelKind) -> Result<Self> {
        let n = match kind {
            ModelKind::Hopf { n } => n,
            ModelKind::Lens { m, .. } => m + 1,
        };
        let mut model = HermitianModel {
            kind,
            n,
            kappa: 1.0,
            alpha: 1.0,
            beta: 1.0,
            suspension: Suspension {
                c: 1.0,
                unitary: Vec::new(),
                matrix: Vec::new(),
                inverse: Vec::new(),
            },
        };
        model.suspension = model.suspension_data(E, None)?;
        model.kappa = model.calibrate();
        Ok(model)
    }

    /// Least-squares scalar `κ` with `κ ϱ⁻² ω_CY = -d(Jθ) + θ∧Jθ` at the
    /// base point.
    fn calibrate(&self) -> f64 {
        let xs = seed(&self.base_point(), POTENTIAL_ORDER);
        let lr = self.log_rho_sq(&xs);
        let theta = exterior_d(&Form::scalar(self.n, lr.clone())).negated();
        let jt = theta.j_action();
        let target = exterior_d(&jt)
            .negated()
            .add(&theta.wedge(&jt))
            .value();
        let tilde = self.omega_cy(&xs).times(&lr.negated().exp()).value();
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0;
        for (mask, z) in tilde.terms() {
            num += z.conj() * target.coefficient(mask);
            den += z.norm_sqr();
        }
        (num / den).re
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    /// Complex dimension of the chart.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `ζ = α - 1` when `β = 1`.
    pub fn zeta(&self) -> f64 {
        self.alpha - 1.0
    }

    pub fn suspension(&self) -> &Suspension {
        &self.suspension
    }

    pub fn descriptor(&self) -> String {
        self.kind.to_string()
    }

    /// The model `Ω - ζ d(Jθ)`.
    pub fn zeta_family(&self, zeta: f64) -> Result<Self> {
        if !(zeta > -1.0) || !zeta.is_finite() {
            return Err(Error::DomainError(format!(
                "zeta = {zeta} must exceed -1"
            )));
        }
        self.with_coefficients(self.alpha + zeta, self.beta)
    }

    /// The member `-α d(Jθ) + β θ∧Jθ` of the Vaisman family.
    pub fn with_coefficients(&self, alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && beta > 0.0) || !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::DomainError(format!(
                "coefficients (alpha={alpha}, beta={beta}) must be positive"
            )));
        }
        let mut m = self.clone();
        m.alpha = alpha;
        m.beta = beta;
        Ok(m)
    }

    /// Deck data for the suspension by `c` and an optional unitary `U`
    /// (size `n` for Hopf, `m` for lens). Non-unitary maps are rejected.
    pub fn suspension_data(&self, c: f64, unitary: Option<Vec<Complex64>>) -> Result<Suspension> {
        if !(c > 1.0) || !c.is_finite() {
            return Err(Error::DomainError(format!("suspension parameter c = {c} must exceed 1")));
        }
        let k = match self.kind {
            ModelKind::Hopf { n } => n,
            ModelKind::Lens { m, .. } => m,
        };
        let u = unitary.unwrap_or_else(|| phase_rotation(k, 0.0));
        if u.len() != k * k {
            return Err(Error::InvalidModel(format!("unitary must be {k} x {k}")));
        }
        if !is_unitary(&u, k) {
            return Err(Error::InvalidModel(
                "deck automorphism must be unitary".into(),
            ));
        }
        let n = self.n;
        let zero = Complex64::new(0.0, 0.0);
        let mut a = vec![zero; n * n];
        let mut inv = vec![zero; n * n];
        let (k, scale) = match self.kind {
            ModelKind::Hopf { n } => (n, c),
            ModelKind::Lens { m, .. } => (m, 1.0),
        };
        for i in 0..k {
            for j in 0..k {
                a[i * n + j] = u[i * k + j] * scale;
                inv[i * n + j] = u[j * k + i].conj() / scale;
            }
        }
        if let ModelKind::Lens { l, .. } = self.kind {
            a[n * n - 1] = Complex64::new(c.powi(l as i32), 0.0);
            inv[n * n - 1] = Complex64::new(c.powi(-(l as i32)), 0.0);
        }
        Ok(Suspension {
            c,
            unitary: u,
            matrix: a,
            inverse: inv,
        })
    }

    pub fn with_suspension(&self, c: f64, unitary: Option<Vec<Complex64>>) -> Result<Self> {
        let mut m = self.clone();
        m.suspension = self.suspension_data(c, unitary)?;
        Ok(m)
    }

    /// Base point: `(1, 0, ..., 0)` for Hopf, `z = 0, w = 1` for lens.
    pub fn base_point(&self) -> Vec<f64> {
        let mut p = vec![0.0; 2 * self.n];
        match self.kind {
            ModelKind::Hopf { .. } => p[0] = 1.0,
            ModelKind::Lens { .. } => p[2 * self.n - 2] = 1.0,
        }
        p
    }

    /// Random point with `log ϱ` uniform in `[0, log c)` and uniform
    /// direction on the link (lens charts stay away from `w = 0`).
    pub fn sample_point<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        let s: f64 = rng.random_range(0.0..self.suspension.period());
        let scale = s.exp();
        match self.kind {
            ModelKind::Hopf { n } => {
                let v = unit_vector(2 * n, rng);
                v.iter().map(|x| x * scale).collect()
            }
            ModelKind::Lens { m, l } => loop {
                // flat cone coordinates (u, u z) on C^{m+1}
                let v = unit_vector(2 * m + 2, rng);
                let u = Complex64::new(v[0], v[1]) * scale;
                if u.norm() < 0.25 * scale {
                    continue;
                }
                let mut p = Vec::with_capacity(2 * m + 2);
                for k in 0..m {
                    let z = Complex64::new(v[2 * k + 2], v[2 * k + 3]) * scale / u;
                    p.push(z.re);
                    p.push(z.im);
                }
                let w = u.powu(l as u32);
                p.push(w.re);
                p.push(w.im);
                return p;
            },
        }
    }

    /// `log ϱ²` from coordinate jets.
    pub fn log_rho_sq(&self, xs: &[Jet]) -> Jet {
        match self.kind {
            ModelKind::Hopf { .. } => sum_of_squares(xs).ln(),
            ModelKind::Lens { m, l } => {
                let z2 = sum_of_squares(&xs[..2 * m]);
                let w2 = sum_of_squares(&xs[2 * m..]);
                (&z2 + &Jet::real(1.0)).ln() + &w2.ln() * (1.0 / l as f64)
            }
        }
    }

    /// Log of the fiber norm `r² = H`, with `ϱ² = H^{1/ℓ}`.
    pub fn log_r_sq(&self, xs: &[Jet]) -> Jet {
        match self.kind {
            ModelKind::Hopf { .. } => self.log_rho_sq(xs),
            ModelKind::Lens { l, .. } => self.log_rho_sq(xs) * l as f64,
        }
    }

    /// `ω_CY = ¼ dd^c ϱ²`.
    pub fn omega_cy(&self, xs: &[Jet]) -> Form<Jet> {
        let rho2 = self.log_rho_sq(xs).exp();
        exterior_d(&dc(&Form::scalar(self.n, rho2))).scale(Complex64::new(0.25, 0.0))
    }

    /// All model jets at seeded coordinates of order `K`: `Ω` and `d(Jθ)`
    /// come out at order `K - 2`.
    pub fn jets(&self, xs: &[Jet]) -> ModelJets {
        let n = self.n;
        let lr = self.log_rho_sq(xs);
        let theta = exterior_d(&Form::scalar(n, lr.clone())).negated();
        let j_theta = theta.j_action();
        let d_j_theta = exterior_d(&j_theta);
        let theta_j_theta = theta.wedge(&j_theta);
        let omega_cy = self.omega_cy(xs);
        let omega0 = omega_cy
            .times(&lr.negated().exp())
            .scale(Complex64::new(self.kappa, 0.0));
        let omega = omega0
            .add(&d_j_theta.scale(Complex64::new(1.0 - self.alpha, 0.0)))
            .add(&theta_j_theta.scale(Complex64::new(self.beta - 1.0, 0.0)));
        let ratio = self.beta / self.alpha;
        let lee = theta.scale(Complex64::new(ratio, 0.0));
        let potential = lr.negated() * ratio;
        ModelJets {
            log_rho_sq: lr,
            theta,
            j_theta,
            d_j_theta,
            theta_j_theta,
            omega_cy,
            omega0,
            omega,
            lee,
            potential,
        }
    }

    pub fn jets_at(&self, point: &[f64]) -> ModelJets {
        self.jets(&seed(point, POTENTIAL_ORDER))
    }

    /// `Ω` as a field (needs two derivatives of its inputs).
    pub fn omega_field(&self) -> JetField {
        let m = self.clone();
        JetField::new(format!("omega[{}]", self.kind), self.n, 2, move |xs| {
            m.jets(xs).omega
        })
    }

    pub fn lee_field(&self) -> JetField {
        let m = self.clone();
        JetField::new(format!("theta[{}]", self.kind), self.n, 1, move |xs| {
            let lr = m.log_rho_sq(xs);
            exterior_d(&Form::scalar(m.n, lr)).scale(Complex64::new(-m.beta / m.alpha, 0.0))
        })
    }

    pub fn conformal_potential_field(&self) -> JetField {
        let m = self.clone();
        JetField::new(format!("f_U[{}]", self.kind), self.n, 0, move |xs| {
            Form::scalar(m.n, m.log_rho_sq(xs) * (-m.beta / m.alpha))
        })
    }

    pub fn real_metric_field(&self) -> RealMetricField {
        RealMetricField::from_fundamental_form(self.omega_field())
    }

    /// Pointwise metric of `Ω`.
    pub fn metric_at(&self, point: &[f64]) -> MetricAtPoint {
        let om = self.omega_field().value_at(point);
        Metric::from_fundamental_form(&om)
    }

    /// Euler field `ϱ ∂_ϱ` in the real frame.
    pub fn euler_field(&self, point: &[f64]) -> Vec<f64> {
        match self.kind {
            ModelKind::Hopf { .. } => point.to_vec(),
            ModelKind::Lens { l, .. } => {
                let mut v = vec![0.0; point.len()];
                let d = point.len();
                v[d - 2] = l as f64 * point[d - 2];
                v[d - 1] = l as f64 * point[d - 1];
                v
            }
        }
    }

    /// Reeb field `ξ = J(ϱ ∂_ϱ)`.
    pub fn reeb_field(&self, point: &[f64]) -> Vec<f64> {
        apply_j(&self.euler_field(point))
    }

    /// Largest relative deviation of `γ*Ω` from `Ω` over `points`.
    pub fn deck_invariance_error(&self, points: &[Vec<f64>]) -> f64 {
        let field = self.omega_field();
        let a = self.suspension.matrix();
        points
            .iter()
            .map(|p| {
                let here = field.value_at(p);
                let there = field.value_at(&self.suspension.apply(p)).pullback_linear(a);
                here.max_abs_diff(&there) / here.max_abs().max(1e-300)
            })
            .fold(0.0, f64::max)
    }

    /// Largest deviation of `|θ|` (model Lee form) from its value at the
    /// image under the deck map.
    pub fn lee_norm_invariance_error(&self, points: &[Vec<f64>]) -> f64 {
        let lee = self.lee_field();
        points
            .iter()
            .map(|p| {
                let q = self.suspension.apply(p);
                let a = self.metric_at(p).inner(&lee.value_at(p), &lee.value_at(p)).re;
                let b = self.metric_at(&q).inner(&lee.value_at(&q), &lee.value_at(&q)).re;
                (a - b).abs()
            })
            .fold(0.0, f64::max)
    }

    /// The cone metric `g_CY` of `ω_CY` as a real metric field.
    pub fn cone_metric_field(&self) -> RealMetricField {
        let m = self.clone();
        RealMetricField::new(2 * self.n, 2, move |xs| {
            real_metric(&Metric::from_fundamental_form(&m.omega_cy(xs)))
        })
    }

    /// `g_{C,a} = a g_C + (1-a) dr⊗dr + (a²-a) r² η_r⊗η_r` for the cone
    /// metric `g_C` of `¼ dd^c r²`, `r² = H`, `η_r = d^c log r`.
    pub fn a_deformation(&self, a: f64) -> Result<RealMetricField> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::DomainError(format!("a = {a} must be positive")));
        }
        let m = self.clone();
        Ok(RealMetricField::new(2 * self.n, 2, move |xs| {
            let n = m.n;
            let lr2 = m.log_r_sq(xs);
            let r2 = lr2.exp();
            let omega_c =
                exterior_d(&dc(&Form::scalar(n, r2.clone()))).scale(Complex64::new(0.25, 0.0));
            let gc = real_metric(&Metric::from_fundamental_form(&omega_c));
            let r = r2.sqrt();
            let dr = exterior_d(&Form::scalar(n, r)).real_components();
            let eta = dc(&Form::scalar(n, lr2.clone() * 0.5)).real_components();
            let d = 2 * n;
            let mut g = vec![vec![Jet::real(0.0); d]; d];
            for i in 0..d {
                for j in 0..d {
                    let t1 = &gc[i][j] * a;
                    let t2 = &(&dr[i] * &dr[j]) * (1.0 - a);
                    let t3 = &(&(&eta[i] * &eta[j]) * &r2) * (a * a - a);
                    g[i][j] = &(&t1 + &t2) + &t3;
                }
            }
            g
        }))
    }

    /// The exponent `a` at which the deformed cone is Calabi-Yau: the
    /// index `m+1` of `CP^m` divided by `ℓ(m+1)`.
    pub fn calabi_yau_exponent(&self) -> f64 {
        match self.kind {
            ModelKind::Hopf { .. } => 1.0,
            ModelKind::Lens { l, .. } => 1.0 / l as f64,
        }
    }

    /// Sasaki structure residuals of the cone at `point`.
    pub fn sasaki_check(&self, point: &[f64]) -> SasakiCheckReport {
        let n = self.n;
        let d = 2 * n;
        let xs = seed(point, POTENTIAL_ORDER);
        let lr = self.log_rho_sq(&xs);
        let rho2 = lr.exp().value().re;
        let log_rho = Form::scalar(n, lr * 0.5);
        let dl = exterior_d(&log_rho).value().real_components();
        let eta_form = dc(&log_rho);
        let eta: Vec<f64> = eta_form.value().real_components().iter().map(|z| z.re).collect();
        let d_eta_form = exterior_d(&eta_form).value();
        let d_eta: Vec<Vec<f64>> = d_eta_form
            .to_real_matrix()
            .iter()
            .map(|r| r.iter().map(|z| z.re).collect())
            .collect();
        let e = self.euler_field(point);
        let xi = apply_j(&e);
        let dl: Vec<f64> = dl.iter().map(|z| z.re).collect();

        let eta_xi = dot(&eta, &xi);
        let xi_c: Vec<Complex64> = xi.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let contraction = d_eta_form.interior(&xi_c).max_abs();

        let jm = j_matrix(n);
        let p: Vec<Vec<f64>> = (0..d)
            .map(|a| (0..d).map(|b| kron(a, b) - e[a] * dl[b]).collect())
            .collect();
        let phi = matmul(&matmul(&p, &jm), &p);
        let mut lhs = matmul(&phi, &phi);
        for a in 0..d {
            for b in 0..d {
                lhs[a][b] += kron(a, b) - xi[a] * eta[b];
            }
        }
        let phi_res = max_abs(&matmul(&lhs, &p));

        let gcy = self.cone_metric_field().jet_at(point, 2);
        let ric = riemann::ricci(&gcy);
        let gv: Vec<Vec<f64>> = gcy
            .iter()
            .map(|r| r.iter().map(|j| j.value().re).collect())
            .collect();
        let dphi = matmul(&d_eta, &phi);
        let mut diff = vec![vec![0.0; d]; d];
        for a in 0..d {
            for b in 0..d {
                diff[a][b] = gv[a][b] / rho2 - 0.5 * dphi[a][b] - eta[a] * eta[b];
            }
        }
        let metric_res = max_abs(&matmul(&transpose(&p), &matmul(&diff, &p)));

        SasakiCheckReport {
            eta_xi_minus_one: (eta_xi - 1.0).abs(),
            xi_contract_d_eta: contraction,
            phi_squared: phi_res,
            metric_reconstruction: metric_res,
            ricci_cone: ric.max_abs(),
        }
    }

    /// KE constant `λ` with `Ric(ω_FS) = λ ω_FS` for `ω_FS = ½ dd^c log(1+|z|²)`
    /// on `C^m`, measured at the origin. Only defined for lens charts.
    pub fn kahler_einstein_constant(&self) -> Result<f64> {
        let m = match self.kind {
            ModelKind::Lens { m, .. } => m,
            ModelKind::Hopf { .. } => {
                return Err(Error::UnsupportedOperation(
                    "KE base is only modelled for lens charts".into(),
                ))
            }
        };
        let xs = seed(&vec![0.0; 2 * m], POTENTIAL_ORDER);
        let fs = fubini_study(m, &xs);
        let ric = crate::curvature::chern_ricci_form(&fs).value();
        let fsv = fs.value();
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0;
        for (mask, z) in fsv.terms() {
            num += z.conj() * ric.coefficient(mask);
            den += z.norm_sqr();
        }
        Ok((num / den).re)
    }

    /// Largest entry of `g_CY - (ϱ² g_SE + dϱ⊗dϱ)` with
    /// `g_SE = π*g_KE + a² η_r⊗η_r`, `a = 1/ℓ`, `g_KE = λ/(2(m+1)) ω_FS(·, J·)`.
    pub fn sasaki_einstein_residual(&self, point: &[f64]) -> Result<f64> {
        let (m, l) = match self.kind {
            ModelKind::Lens { m, l } => (m, l),
            ModelKind::Hopf { .. } => {
                return Err(Error::UnsupportedOperation(
                    "the fibration picture is only modelled for lens charts".into(),
                ))
            }
        };
        let lambda = self.kahler_einstein_constant()?;
        let n = self.n;
        let d = 2 * n;
        let xs = seed(point, POTENTIAL_ORDER);
        let gcy = real_metric(&Metric::from_fundamental_form(&self.omega_cy(&xs)));
        let z2 = sum_of_squares(&xs[..2 * m]);
        let fs = exterior_d(&dc(&Form::scalar(n, (&z2 + &Jet::real(1.0)).ln())))
            .scale(Complex64::new(0.5, 0.0))
            .value();
        let w = fs.to_real_matrix();
        let jm = j_matrix(n);
        let lr = self.log_rho_sq(&xs);
        let rho2 = lr.exp();
        let drho: Vec<f64> = exterior_d(&Form::scalar(n, rho2.sqrt()))
            .value()
            .real_components()
            .iter()
            .map(|z| z.re)
            .collect();
        let eta: Vec<f64> = dc(&Form::scalar(n, self.log_r_sq(&xs) * 0.5))
            .value()
            .real_components()
            .iter()
            .map(|z| z.re)
            .collect();
        let a = 1.0 / l as f64;
        let kscale = lambda / (2.0 * (m + 1) as f64);
        let rho2v = rho2.value().re;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let mut gke = 0.0;
                for k in 0..d {
                    gke += w[i][k].re * jm[k][j];
                }
                let gse = kscale * gke + a * a * eta[i] * eta[j];
                let v = gcy[i][j].value().re - (rho2v * gse + drho[i] * drho[j]);
                worst = worst.max(v.abs());
            }
        }
        Ok(worst)
    }
}

/// `ω_FS = ½ dd^c log(1+|z|²)` on `C^m`.
pub fn fubini_study(m: usize, xs: &[Jet]) -> Form<Jet> {
    let z2 = sum_of_squares(xs);
    exterior_d(&dc(&Form::scalar(m, (&z2 + &Jet::real(1.0)).ln())))
        .scale(Complex64::new(0.5, 0.0))
}

/// Residuals of the Sasaki relations on the link through a point.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SasakiCheckReport {
    pub eta_xi_minus_one: f64,
    pub xi_contract_d_eta: f64,
    pub phi_squared: f64,
    pub metric_reconstruction: f64,
    pub ricci_cone: f64,
}

impl SasakiCheckReport {
    pub fn max_structure_residual(&self) -> f64 {
        self.eta_xi_minus_one
            .max(self.xi_contract_d_eta)
            .max(self.phi_squared)
            .max(self.metric_reconstruction)
    }

    pub fn is_finite(&self) -> bool {
        [
            self.eta_xi_minus_one,
            self.xi_contract_d_eta,
            self.phi_squared,
            self.metric_reconstruction,
            self.ricci_cone,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}

fn sum_of_squares(xs: &[Jet]) -> Jet {
    xs.iter()
        .fold(Jet::real(0.0), |acc, x| &acc + &(x * x))
}

fn unit_vector<R: Rng>(d: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.iter().map(|x| x / norm).collect();
        }
    }
}

/// `J` on a real-frame vector: `J∂x = ∂y`, `J∂y = -∂x`.
pub fn apply_j(v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    for k in 0..v.len() / 2 {
        out[2 * k] = -v[2 * k + 1];
        out[2 * k + 1] = v[2 * k];
    }
    out
}

/// Matrix of `J` acting on column vectors in the real frame.
pub fn j_matrix(n: usize) -> Vec<Vec<f64>> {
    let d = 2 * n;
    let mut j = vec![vec![0.0; d]; d];
    for k in 0..n {
        j[2 * k + 1][2 * k] = 1.0;
        j[2 * k][2 * k + 1] = -1.0;
    }
    j
}

fn kron(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let (r, k, c) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![0.0; c]; r];
    for i in 0..r {
        for l in 0..k {
            if a[i][l] == 0.0 {
                continue;
            }
            for j in 0..c {
                out[i][j] += a[i][l] * b[l][j];
            }
        }
    }
    out
}

fn transpose(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    (0..a[0].len())
        .map(|j| a.iter().map(|r| r[j]).collect())
        .collect()
}

fn max_abs(a: &[Vec<f64>]) -> f64 {
    a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn points(model: &HermitianModel, k: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..k).map(|_| model.sample_point(&mut rng)).collect()
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["hopf:3", "lens:1:2"] {
            assert_eq!(s.parse::<ModelKind>().unwrap().to_string(), s);
        }
        assert!(matches!("hopf".parse::<ModelKind>(), Err(Error::Usage(_))));
        assert!(matches!(HermitianModel::parse("hopf:9"), Err(Error::InvalidModel(_))));
    }

    #[test]
    fn kappa_is_four() {
        for m in [HermitianModel::hopf(2).unwrap(), HermitianModel::hopf(4).unwrap(), HermitianModel::lens(1, 2).unwrap()] {
            assert!((m.kappa() - 4.0).abs() < 1e-12, "kappa {}", m.kappa());
        }
    }

    #[test]
    fn hopf_lee_form_at_base_point() {
        let m = HermitianModel::hopf(3).unwrap();
        let th = m.lee_field().value_at(&m.base_point());
        let expected = Form::<Complex64>::dx(3, 0).scale(Complex64::new(-2.0, 0.0));
        assert!(th.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn vaisman_identity_holds_globally() {
        for m in [HermitianModel::hopf(3).unwrap(), HermitianModel::lens(2, 3).unwrap()] {
            for p in points(&m, 5, 3) {
                let j = m.jets_at(&p);
                let rhs = j.d_j_theta.negated().add(&j.theta_j_theta).value();
                let lhs = j.omega.value();
                assert!(lhs.max_abs_diff(&rhs) < 1e-10 * lhs.max_abs());
            }
        }
    }

    #[test]
    fn unit_lee_form() {
        let m = HermitianModel::lens(1, 2).unwrap();
        for p in points(&m, 5, 4) {
            let th = m.lee_field().value_at(&p);
            let v = m.metric_at(&p).inner(&th, &th);
            assert!((v.re - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn deck_invariance() {
        let m = HermitianModel::hopf(3).unwrap();
        let pts = points(&m, 10, 5);
        assert!(m.deck_invariance_error(&pts) < 1e-10);
        let rotated = m
            .with_suspension(2.0, Some(phase_rotation(3, 0.7)))
            .unwrap()
            .zeta_family(0.5)
            .unwrap();
        assert!(rotated.deck_invariance_error(&pts) < 1e-10);
        assert!(rotated.lee_norm_invariance_error(&pts) < 1e-10);
        let lens = HermitianModel::lens(1, 2)
            .unwrap()
            .with_suspension(1.5, Some(phase_rotation(1, 0.3)))
            .unwrap();
        assert!(lens.deck_invariance_error(&points(&lens, 5, 6)) < 1e-10);
    }

    #[test]
    fn non_unitary_deck_rejected() {
        let m = HermitianModel::hopf(2).unwrap();
        let u = vec![
            Complex64::new(2.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ];
        assert!(matches!(m.suspension_data(2.0, Some(u)), Err(Error::InvalidModel(_))));
        assert!(matches!(m.suspension_data(1.0, None), Err(Error::DomainError(_))));
    }

    #[test]
    fn zeta_domain() {
        let m = HermitianModel::hopf(2).unwrap();
        assert!(matches!(m.zeta_family(-1.0), Err(Error::DomainError(_))));
        assert!(m.zeta_family(-0.99).is_ok());
    }

    #[test]
    fn sampled_points_lie_in_fundamental_domain() {
        let m = HermitianModel::lens(1, 3).unwrap();
        for p in points(&m, 20, 8) {
            let lr = m.log_rho_sq(&seed(&p, 0)).value().re * 0.5;
            assert!((0.0..1.0 + 1e-12).contains(&lr), "log rho {lr}");
        }
    }

    #[test]
    fn sasaki_relations_on_hopf_and_lens() {
        for m in [HermitianModel::hopf(3).unwrap(), HermitianModel::lens(1, 2).unwrap()] {
            for p in points(&m, 3, 9) {
                let r = m.sasaki_check(&p);
                assert!(r.max_structure_residual() < 1e-9, "{m:?} {r:?}");
                assert!(r.ricci_cone < 1e-7, "{r:?}");
            }
        }
    }

    #[test]
    fn ke_constant_and_sasaki_einstein_metric() {
        let m = HermitianModel::lens(2, 3).unwrap();
        assert!((m.kahler_einstein_constant().unwrap() - 3.0).abs() < 1e-12);
        for p in points(&m, 3, 10) {
            assert!(m.sasaki_einstein_residual(&p).unwrap() < 1e-10);
        }
    }

    #[test]
    fn a_deformation_is_ricci_flat_only_at_the_exponent() {
        let m = HermitianModel::lens(1, 2).unwrap();
        let p = points(&m, 1, 11).remove(0);
        let flat = m.a_deformation(m.calabi_yau_exponent()).unwrap().jet_at(&p, 2);
        assert!(riemann::ricci(&flat).max_abs() < 1e-7);
        let bent = m.a_deformation(1.0).unwrap().jet_at(&p, 2);
        assert!(riemann::ricci(&bent).max_abs() > 1e-3);
    }
}
