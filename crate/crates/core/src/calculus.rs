//! Differential operators on jet-valued forms.
//!
//! A field is evaluated at a point by seeding the real coordinates as jets
//! ([`Jet::coordinates`]) and running the field's formula on them. The
//! resulting `Form<Jet>` carries all derivatives up to the seeded order, and
//! the operators below consume one order each.
//!
//! Wirtinger derivatives are `∂_z = (∂_x - i∂_y)/2` and
//! `∂_z̄ = (∂_x + i∂_y)/2`. With `d^c = J∘d` this gives
//! `dd^c f = 2i ∂∂̄ f` on functions.

use std::sync::Arc;

use num_complex::Complex64;

use crate::exterior::{merge_sign, ComplexForm, Form, Metric};
use crate::jet::{Jet, Scalar};

const HALF: Complex64 = Complex64::new(0.5, 0.0);
const MINUS_HALF_I: Complex64 = Complex64::new(0.0, -0.5);
const HALF_I: Complex64 = Complex64::new(0.0, 0.5);

/// `∂f/∂z_k`.
pub fn dz_partial(f: &Jet, k: usize) -> Jet {
    f.partial(2 * k)
        .scaled(HALF)
        .plus(&f.partial(2 * k + 1).scaled(MINUS_HALF_I))
}

/// `∂f/∂z̄_k`.
pub fn dzbar_partial(f: &Jet, k: usize) -> Jet {
    f.partial(2 * k)
        .scaled(HALF)
        .plus(&f.partial(2 * k + 1).scaled(HALF_I))
}

fn differentiate(f: &Form<Jet>, holo: bool, anti: bool) -> Form<Jet> {
    let n = f.n();
    let mut out = Form::zero(n);
    for (mask, s) in f.terms() {
        if s.order().is_none() {
            continue;
        }
        for k in 0..n {
            if holo && mask & (1 << k) == 0 {
                let bit = 1u32 << k;
                let mut t = dz_partial(s, k);
                if merge_sign(bit, mask) < 0.0 {
                    t = t.negated();
                }
                out.insert(bit | mask, t);
            }
            if anti && mask & (1 << (n + k)) == 0 {
                let bit = 1u32 << (n + k);
                let mut t = dzbar_partial(s, k);
                if merge_sign(bit, mask) < 0.0 {
                    t = t.negated();
                }
                out.insert(bit | mask, t);
            }
        }
    }
    out
}

/// Exterior derivative.
pub fn exterior_d(f: &Form<Jet>) -> Form<Jet> {
    differentiate(f, true, true)
}

/// `∂`, the `(1,0)` part of `d`.
pub fn del(f: &Form<Jet>) -> Form<Jet> {
    differentiate(f, true, false)
}

/// `∂̄`, the `(0,1)` part of `d`.
pub fn delbar(f: &Form<Jet>) -> Form<Jet> {
    differentiate(f, false, true)
}

/// `d^c = J∘d`.
pub fn dc(f: &Form<Jet>) -> Form<Jet> {
    exterior_d(f).j_action()
}

/// `∂* = -∗∂̄∗`, with `∗` taken from `m`.
pub fn del_star(f: &Form<Jet>, m: &Metric<Jet>) -> Form<Jet> {
    m.hodge_star(&delbar(&m.hodge_star(f))).negated()
}

/// `∂̄* = -∗∂∗`.
pub fn delbar_star(f: &Form<Jet>, m: &Metric<Jet>) -> Form<Jet> {
    m.hodge_star(&del(&m.hodge_star(f))).negated()
}

/// `δ = -∗d∗`.
pub fn codifferential(f: &Form<Jet>, m: &Metric<Jet>) -> Form<Jet> {
    m.hodge_star(&exterior_d(&m.hodge_star(f))).negated()
}

/// Lift a pointwise form to constant jets.
pub fn constant_form(f: &ComplexForm) -> Form<Jet> {
    f.map(|z| Jet::constant(*z))
}

/// Seeded coordinate jets for a point `(x_1, y_1, ..., x_n, y_n)`.
pub fn seed(point: &[f64], order: usize) -> Vec<Jet> {
    Jet::coordinates(point, order)
}

type FormFn = dyn Fn(&[Jet]) -> Form<Jet> + Send + Sync;

/// A named form-valued field on a chart of complex dimension `n`.
#[derive(Clone)]
pub struct JetField {
    name: String,
    n: usize,
    order: usize,
    eval: Arc<FormFn>,
}

impl std::fmt::Debug for JetField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "JetField({}, n={}, order={})", self.name, self.n, self.order)
    }
}

impl JetField {
    /// `order` is the jet order the formula needs in its inputs to produce
    /// an exact value (e.g. 2 for a form built from second derivatives).
    pub fn new(
        name: impl Into<String>,
        n: usize,
        order: usize,
        eval: impl Fn(&[Jet]) -> Form<Jet> + Send + Sync + 'static,
    ) -> Self {
        JetField {
            name: name.into(),
            n,
            order,
            eval: Arc::new(eval),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn required_order(&self) -> usize {
        self.order
    }

    /// The field with `extra` derivatives available.
    pub fn jet_at(&self, point: &[f64], extra: usize) -> Form<Jet> {
        assert_eq!(point.len(), 2 * self.n, "point has wrong dimension");
        (self.eval)(&seed(point, self.order + extra))
    }

    pub fn value_at(&self, point: &[f64]) -> ComplexForm {
        self.jet_at(point, 0).value()
    }

    pub fn apply(&self, xs: &[Jet]) -> Form<Jet> {
        (self.eval)(xs)
    }

    pub fn d_at(&self, point: &[f64]) -> ComplexForm {
        exterior_d(&self.jet_at(point, 1)).value()
    }

    pub fn del_at(&self, point: &[f64]) -> ComplexForm {
        del(&self.jet_at(point, 1)).value()
    }

    pub fn delbar_at(&self, point: &[f64]) -> ComplexForm {
        delbar(&self.jet_at(point, 1)).value()
    }

    pub fn dc_at(&self, point: &[f64]) -> ComplexForm {
        dc(&self.jet_at(point, 1)).value()
    }
}

/// Real `2n × 2n` metric `g(X,Y) = Ω(X, JY)` from the Hermitian matrix,
/// in the frame `(∂x_1, ∂y_1, ..., ∂x_n, ∂y_n)`.
pub fn real_metric(m: &Metric<Jet>) -> Vec<Vec<Jet>> {
    let n = m.n();
    let mut g = vec![vec![Jet::real(0.0); 2 * n]; 2 * n];
    for j in 0..n {
        for k in 0..n {
            let h = m.h(j, k);
            let (re, im) = (h.re(), h.im());
            g[2 * j][2 * k] = re.clone();
            g[2 * j + 1][2 * k + 1] = re;
            g[2 * j][2 * k + 1] = im.clone();
            g[2 * j + 1][2 * k] = im.negated();
        }
    }
    g
}

type MatrixFn = dyn Fn(&[Jet]) -> Vec<Vec<Jet>> + Send + Sync;

/// A real symmetric metric field in the real frame.
#[derive(Clone)]
pub struct RealMetricField {
    dim: usize,
    order: usize,
    eval: Arc<MatrixFn>,
}

impl std::fmt::Debug for RealMetricField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RealMetricField(dim={})", self.dim)
    }
}

impl RealMetricField {
    /// `order` is the number of derivatives the formula consumes.
    pub fn new(
        dim: usize,
        order: usize,
        eval: impl Fn(&[Jet]) -> Vec<Vec<Jet>> + Send + Sync + 'static,
    ) -> Self {
        RealMetricField {
            dim,
            order,
            eval: Arc::new(eval),
        }
    }

    /// The real metric of a Hermitian fundamental-form field.
    pub fn from_fundamental_form(omega: JetField) -> Self {
        let dim = 2 * omega.n();
        let order = omega.required_order();
        RealMetricField::new(dim, order, move |xs| {
            real_metric(&Metric::from_fundamental_form(&omega.apply(xs)))
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, xs: &[Jet]) -> Vec<Vec<Jet>> {
        (self.eval)(xs)
    }

    /// The metric with `derivatives` derivatives available.
    pub fn jet_at(&self, point: &[f64], derivatives: usize) -> Vec<Vec<Jet>> {
        assert_eq!(point.len(), self.dim, "point has wrong dimension");
        (self.eval)(&seed(point, self.order + derivatives))
    }

    pub fn value_at(&self, point: &[f64]) -> Vec<Vec<f64>> {
        self.jet_at(point, 0)
            .iter()
            .map(|row| row.iter().map(|j| j.value().re).collect())
            .collect()
    }
}
