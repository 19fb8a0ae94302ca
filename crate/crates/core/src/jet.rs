//! Truncated multivariate Taylor jets over real chart coordinates.
//!
//! A [`Jet`] of order `K` in `m` real variables carries every Taylor
//! coefficient of total degree `<= K` of a complex-valued function at a
//! point. Arithmetic is exact up to rounding, so partial derivatives of any
//! order `<= K` come out with dual-number accuracy. Differentiating a jet
//! lowers its order by one.
//!
//! Monomials are enumerated degree by degree with an order that does not
//! depend on `K`, so the coefficient vector of an order-`K'` jet is a prefix
//! of the order-`K` vector for `K' < K`. Truncation is therefore a slice.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;

/// Scalars that the exterior algebra can carry: plain complex numbers for
/// pointwise work and [`Jet`]s for fields.
pub trait Scalar: Clone + fmt::Debug + Send + Sync + 'static {
    fn from_complex(z: Complex64) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scaled(&self, z: Complex64) -> Self;
    fn conjugate(&self) -> Self;
    fn inverse(&self) -> Self;
    /// Point value (degree-zero coefficient).
    fn value(&self) -> Complex64;
    fn is_exact_zero(&self) -> bool;

    fn zero() -> Self {
        Self::from_complex(Complex64::new(0.0, 0.0))
    }
    fn one() -> Self {
        Self::from_complex(Complex64::new(1.0, 0.0))
    }
}

impl Scalar for Complex64 {
    fn from_complex(z: Complex64) -> Self {
        z
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, z: Complex64) -> Self {
        self * z
    }
    fn conjugate(&self) -> Self {
        self.conj()
    }
    fn inverse(&self) -> Self {
        1.0 / self
    }
    fn value(&self) -> Complex64 {
        *self
    }
    fn is_exact_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
}

impl Scalar for f64 {
    fn from_complex(z: Complex64) -> Self {
        z.re
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, z: Complex64) -> Self {
        self * z.re
    }
    fn conjugate(&self) -> Self {
        *self
    }
    fn inverse(&self) -> Self {
        1.0 / self
    }
    fn value(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
    fn is_exact_zero(&self) -> bool {
        *self == 0.0
    }
}

/// Monomial bookkeeping for jets in `nvars` variables truncated at `order`.
pub struct JetSpace {
    nvars: usize,
    order: usize,
    exponents: Vec<Vec<u8>>,
    lookup: HashMap<Vec<u8>, usize>,
    /// For each left index `i`: the `(j, target)` pairs with `deg i + deg j <= order`.
    products: Vec<Vec<(u32, u32)>>,
    /// `partials[v][t] = (source, factor)`: coefficient `t` of `d/dx_v` of an
    /// order-`order` jet, living in the order `order - 1` space.
    partials: Vec<Vec<(u32, f64)>>,
}

fn monomials_of_degree(nvars: usize, degree: usize) -> Vec<Vec<u8>> {
    if nvars == 1 {
        return vec![vec![degree as u8]];
    }
    let mut out = Vec::new();
    for first in (0..=degree).rev() {
        for rest in monomials_of_degree(nvars - 1, degree - first) {
            let mut e = Vec::with_capacity(nvars);
            e.push(first as u8);
            e.extend(rest);
            out.push(e);
        }
    }
    out
}

impl JetSpace {
    fn build(nvars: usize, order: usize) -> JetSpace {
        assert!(nvars >= 1, "jet space needs at least one variable");
        let mut exponents = Vec::new();
        let mut len_upto = Vec::with_capacity(order + 1);
        for d in 0..=order {
            exponents.extend(monomials_of_degree(nvars, d));
            len_upto.push(exponents.len());
        }
        let lookup: HashMap<Vec<u8>, usize> = exponents
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        let degree = |e: &Vec<u8>| e.iter().map(|&k| k as usize).sum::<usize>();

        let mut products = Vec::with_capacity(exponents.len());
        for a in &exponents {
            let da = degree(a);
            let mut row = Vec::new();
            for (j, b) in exponents[..len_upto[order - da]].iter().enumerate() {
                let sum: Vec<u8> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                row.push((j as u32, lookup[&sum] as u32));
            }
            products.push(row);
        }

        let mut partials = Vec::with_capacity(nvars);
        if order > 0 {
            for v in 0..nvars {
                let mut table = Vec::with_capacity(len_upto[order - 1]);
                for e in &exponents[..len_upto[order - 1]] {
                    let mut src = e.clone();
                    src[v] += 1;
                    table.push((lookup[&src] as u32, src[v] as f64));
                }
                partials.push(table);
            }
        }

        JetSpace {
            nvars,
            order,
            exponents,
            lookup,
            products,
            partials,
        }
    }

    /// Shared, lazily built space for `(nvars, order)`.
    pub fn get(nvars: usize, order: usize) -> &'static JetSpace {
        static SPACES: OnceLock<Mutex<HashMap<(usize, usize), &'static JetSpace>>> =
            OnceLock::new();
        let mut map = SPACES
            .get_or_init(|| Mutex::new(HashMap::new()))
            .lock()
            .expect("jet space registry poisoned");
        map.entry((nvars, order))
            .or_insert_with(|| Box::leak(Box::new(JetSpace::build(nvars, order))))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn index_of(&self, exponents: &[u8]) -> Option<usize> {
        self.lookup.get(exponents).copied()
    }
}

/// A complex-valued jet. Constants carry no space and combine with jets of
/// any shape.
#[derive(Clone)]
pub struct Jet {
    space: Option<&'static JetSpace>,
    coeffs: Vec<Complex64>,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.space {
            None => write!(f, "Jet::const({})", self.coeffs[0]),
            Some(s) => write!(
                f,
                "Jet(vars={}, order={}, value={})",
                s.nvars, s.order, self.coeffs[0]
            ),
        }
    }
}

impl Jet {
    pub fn constant(z: Complex64) -> Jet {
        Jet {
            space: None,
            coeffs: vec![z],
        }
    }

    pub fn real(x: f64) -> Jet {
        Jet::constant(Complex64::new(x, 0.0))
    }

    /// The coordinate function `x_var` expanded at `value`.
    pub fn variable(nvars: usize, order: usize, var: usize, value: f64) -> Jet {
        assert!(var < nvars, "variable index {var} out of range for {nvars} variables");
        let space = JetSpace::get(nvars, order);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); space.len()];
        coeffs[0] = Complex64::new(value, 0.0);
        if order >= 1 {
            let mut e = vec![0u8; nvars];
            e[var] = 1;
            coeffs[space.index_of(&e).unwrap()] = Complex64::new(1.0, 0.0);
        }
        Jet {
            space: Some(space),
            coeffs,
        }
    }

    /// All coordinate jets at `point`.
    pub fn coordinates(point: &[f64], order: usize) -> Vec<Jet> {
        (0..point.len())
            .map(|v| Jet::variable(point.len(), order, v, point[v]))
            .collect()
    }

    /// `None` for constants.
    pub fn order(&self) -> Option<usize> {
        self.space.map(|s| s.order)
    }

    pub fn nvars(&self) -> Option<usize> {
        self.space.map(|s| s.nvars)
    }

    pub fn value(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Taylor coefficient of the monomial with the given exponents.
    pub fn taylor_coefficient(&self, exponents: &[u8]) -> Complex64 {
        match self.space {
            None => {
                if exponents.iter().all(|&e| e == 0) {
                    self.coeffs[0]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            Some(s) => s
                .index_of(exponents)
                .map(|i| self.coeffs[i])
                .unwrap_or(Complex64::new(0.0, 0.0)),
        }
    }

    /// Mixed partial derivative `d^|e| f / dx^e` at the expansion point.
    pub fn partial_derivative(&self, exponents: &[u8]) -> Complex64 {
        let factorial: f64 = exponents
            .iter()
            .map(|&k| (1..=k as u64).product::<u64>() as f64)
            .product();
        self.taylor_coefficient(exponents) * factorial
    }

    pub fn truncated(&self, order: usize) -> Jet {
        match self.space {
            Some(s) if order < s.order => {
                let space = JetSpace::get(s.nvars, order);
                Jet {
                    space: Some(space),
                    coeffs: self.coeffs[..space.len()].to_vec(),
                }
            }
            _ => self.clone(),
        }
    }

    /// `d/dx_var`, one order lower. Panics on an order-0 jet: that is a
    /// caller asking for more derivatives than it seeded.
    pub fn partial(&self, var: usize) -> Jet {
        let s = match self.space {
            None => return Jet::real(0.0),
            Some(s) => s,
        };
        assert!(
            s.order >= 1,
            "insufficient jet order: cannot differentiate an order-0 jet"
        );
        let target = JetSpace::get(s.nvars, s.order - 1);
        let coeffs = s.partials[var]
            .iter()
            .map(|&(src, factor)| self.coeffs[src as usize] * factor)
            .collect();
        Jet {
            space: Some(target),
            coeffs,
        }
    }

    fn common_space(a: &Jet, b: &Jet) -> Option<&'static JetSpace> {
        match (a.space, b.space) {
            (None, None) => None,
            (Some(s), None) | (None, Some(s)) => Some(s),
            (Some(s), Some(t)) => {
                assert_eq!(s.nvars, t.nvars, "jets over different charts");
                Some(if s.order <= t.order { s } else { t })
            }
        }
    }

    fn linear_combine(&self, other: &Jet, sign: f64) -> Jet {
        match Jet::common_space(self, other) {
            None => Jet::constant(self.coeffs[0] + other.coeffs[0] * sign),
            Some(space) => {
                let len = space.len();
                let mut coeffs = vec![Complex64::new(0.0, 0.0); len];
                for (c, a) in coeffs.iter_mut().zip(self.coeffs.iter()) {
                    *c += a;
                }
                for (c, b) in coeffs.iter_mut().zip(other.coeffs.iter()) {
                    *c += b * sign;
                }
                Jet {
                    space: Some(space),
                    coeffs,
                }
            }
        }
    }

    fn product(&self, other: &Jet) -> Jet {
        if self.space.is_none() {
            return other.scale(self.coeffs[0]);
        }
        if other.space.is_none() {
            return self.scale(other.coeffs[0]);
        }
        let space = Jet::common_space(self, other).unwrap();
        let len = space.len();
        let mut out = vec![Complex64::new(0.0, 0.0); len];
        for (i, a) in self.coeffs[..len].iter().enumerate() {
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            for &(j, t) in &space.products[i] {
                out[t as usize] += a * other.coeffs[j as usize];
            }
        }
        Jet {
            space: Some(space),
            coeffs: out,
        }
    }

    pub fn scale(&self, z: Complex64) -> Jet {
        Jet {
            space: self.space,
            coeffs: self.coeffs.iter().map(|c| c * z).collect(),
        }
    }

    /// `sum_k taylor[k] * (self - value)^k`, for a function whose Taylor
    /// coefficients at `value()` are `taylor`.
    fn compose(&self, taylor: &[Complex64]) -> Jet {
        let s = match self.space {
            None => return Jet::constant(taylor[0]),
            Some(s) => s,
        };
        let mut delta = self.clone();
        delta.coeffs[0] = Complex64::new(0.0, 0.0);
        let mut acc = Jet::constant(taylor[s.order]);
        for k in (0..s.order).rev() {
            acc = acc.product(&delta);
            acc.coeffs[0] += taylor[k];
        }
        if acc.space.is_none() {
            let mut v = vec![Complex64::new(0.0, 0.0); s.len()];
            v[0] = acc.coeffs[0];
            acc = Jet {
                space: Some(s),
                coeffs: v,
            };
        }
        acc
    }

    fn order_or_zero(&self) -> usize {
        self.order().unwrap_or(0)
    }

    pub fn recip(&self) -> Jet {
        let a = self.value();
        let taylor: Vec<Complex64> = (0..=self.order_or_zero())
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign / a.powu(k as u32 + 1)
            })
            .collect();
        self.compose(&taylor)
    }

    pub fn ln(&self) -> Jet {
        let a = self.value();
        let taylor: Vec<Complex64> = (0..=self.order_or_zero())
            .map(|k| {
                if k == 0 {
                    a.ln()
                } else {
                    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                    sign / (k as f64 * a.powu(k as u32))
                }
            })
            .collect();
        self.compose(&taylor)
    }

    pub fn exp(&self) -> Jet {
        let ea = self.value().exp();
        let mut fact = 1.0;
        let taylor: Vec<Complex64> = (0..=self.order_or_zero())
            .map(|k| {
                if k > 0 {
                    fact *= k as f64;
                }
                ea / fact
            })
            .collect();
        self.compose(&taylor)
    }

    /// Real power `self^p` on the principal branch.
    pub fn powf(&self, p: f64) -> Jet {
        let a = self.value();
        let mut binom = 1.0;
        let taylor: Vec<Complex64> = (0..=self.order_or_zero())
            .map(|k| {
                if k > 0 {
                    binom *= (p - (k as f64 - 1.0)) / k as f64;
                }
                a.powf(p - k as f64) * binom
            })
            .collect();
        self.compose(&taylor)
    }

    pub fn sqrt(&self) -> Jet {
        self.powf(0.5)
    }

    /// Real part taken coefficientwise; valid because the variables are real.
    pub fn re(&self) -> Jet {
        Jet {
            space: self.space,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| Complex64::new(c.re, 0.0))
                .collect(),
        }
    }

    pub fn im(&self) -> Jet {
        Jet {
            space: self.space,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| Complex64::new(c.im, 0.0))
                .collect(),
        }
    }
}

impl Scalar for Jet {
    fn from_complex(z: Complex64) -> Self {
        Jet::constant(z)
    }
    fn plus(&self, other: &Self) -> Self {
        self.linear_combine(other, 1.0)
    }
    fn minus(&self, other: &Self) -> Self {
        self.linear_combine(other, -1.0)
    }
    fn times(&self, other: &Self) -> Self {
        self.product(other)
    }
    fn negated(&self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }
    fn scaled(&self, z: Complex64) -> Self {
        self.scale(z)
    }
    fn conjugate(&self) -> Self {
        Jet {
            space: self.space,
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }
    fn inverse(&self) -> Self {
        self.recip()
    }
    fn value(&self) -> Complex64 {
        self.coeffs[0]
    }
    fn is_exact_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        self.plus(rhs)
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        self.minus(rhs)
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        self.times(rhs)
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.negated()
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        self.plus(&rhs)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self.minus(&rhs)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        self.times(&rhs)
    }
}

impl Mul<f64> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(Complex64::new(rhs, 0.0))
    }
}
