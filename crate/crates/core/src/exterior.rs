//! Pointwise exterior algebra of complex forms on `C^n` (real dimension `2n`).
//!
//! A basis element is a bitmask: bits `0..n` stand for `dz_1..dz_n` and bits
//! `n..2n` for `dz̄_1..dz̄_n`, wedged in increasing bit order. A form maps
//! masks to coefficients of any [`Scalar`] type, so the same code serves
//! plain values and jet-valued fields.
//!
//! Conventions, fixed once here:
//!
//! * `dz = dx + i dy`, `J∂x = ∂y` and `J∂y = -∂x` on vectors.
//! * On forms `J(dz) = -i dz` and `J(dz̄) = i dz̄`, so a `(p,q)`-form is
//!   multiplied by `i^(q-p)`. In particular `J(dx) = dy`.
//! * The fundamental form of a Hermitian matrix `h` is
//!   `Ω = (i/2) Σ h_{jk} dz_j ∧ dz̄_k` and `g(X,Y) = Ω(X, JY)`.
//! * The Hodge star is complex linear and defined by
//!   `α ∧ ∗β = G(α, β) Ωⁿ/n!` with `G` the bilinear extension of the metric.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::jet::Scalar;

pub const MAX_DIM: usize = 6;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Sign of `e_A ∧ e_B` relative to `e_{A∪B}`; zero overlap assumed.
pub(crate) fn merge_sign(a: u32, b: u32) -> f64 {
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let bit = rest.trailing_zeros();
        inversions += (a >> (bit + 1)).count_ones();
        rest &= rest - 1;
    }
    if inversions.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(b)
        }
    })
}

/// Value of the generator with bit index `bit` on the real basis vector
/// `a` (`a = 2k` is `∂x_k`, `a = 2k+1` is `∂y_k`).
pub fn generator_on_real(n: usize, bit: usize, a: usize) -> Complex64 {
    let (k, holo) = if bit < n { (bit, true) } else { (bit - n, false) };
    if a / 2 != k {
        return c(0.0);
    }
    match (a % 2, holo) {
        (0, _) => c(1.0),
        (_, true) => I,
        (_, false) => -I,
    }
}

/// A complex differential form at a point (or a jet of one).
#[derive(Clone, Debug)]
pub struct Form<S = Complex64> {
    n: usize,
    terms: BTreeMap<u32, S>,
}

pub type ComplexForm = Form<Complex64>;

impl<S: Scalar> Form<S> {
    pub fn zero(n: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&n), "complex dimension {n} outside 1..=6");
        Form {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(n: usize, s: S) -> Self {
        Form::basis(n, 0, s)
    }

    pub fn basis(n: usize, mask: u32, s: S) -> Self {
        let mut f = Form::zero(n);
        assert!(mask < (1 << (2 * n)), "mask out of range");
        if !s.is_exact_zero() {
            f.terms.insert(mask, s);
        }
        f
    }

    pub fn dz(n: usize, k: usize) -> Self {
        Form::basis(n, 1 << k, S::one())
    }

    pub fn dzbar(n: usize, k: usize) -> Self {
        Form::basis(n, 1 << (n + k), S::one())
    }

    pub fn dx(n: usize, k: usize) -> Self {
        Form::dz(n, k).add(&Form::dzbar(n, k)).scale(c(0.5))
    }

    pub fn dy(n: usize, k: usize) -> Self {
        Form::dz(n, k)
            .sub(&Form::dzbar(n, k))
            .scale(Complex64::new(0.0, -0.5))
    }

    /// The 1-form `Σ a_x dx + a_y dy` from real components ordered
    /// `(x_1, y_1, x_2, y_2, ...)`.
    pub fn from_real_covector(n: usize, comps: &[S]) -> Self {
        assert_eq!(comps.len(), 2 * n);
        let mut f = Form::zero(n);
        for k in 0..n {
            let (ax, ay) = (&comps[2 * k], &comps[2 * k + 1]);
            let iay = ay.scaled(I);
            f.insert(1 << k, ax.minus(&iay).scaled(c(0.5)));
            f.insert(1 << (n + k), ax.plus(&iay).scaled(c(0.5)));
        }
        f
    }

    /// Real-frame components of a 1-form, inverse of [`Form::from_real_covector`].
    pub fn real_components(&self) -> Vec<S> {
        let n = self.n;
        let mut out = Vec::with_capacity(2 * n);
        for k in 0..n {
            let a = self.coefficient(1 << k);
            let b = self.coefficient(1 << (n + k));
            out.push(a.plus(&b));
            out.push(a.minus(&b).scaled(I));
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &S)> {
        self.terms.iter().map(|(m, s)| (*m, s))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mask: u32) -> S {
        self.terms.get(&mask).cloned().unwrap_or_else(S::zero)
    }

    /// Coefficient of `dz_I ∧ dz̄_J` for arbitrary (possibly unsorted,
    /// zero-based) index lists; repeated indices give zero.
    pub fn component(&self, holo: &[usize], anti: &[usize]) -> S {
        let mut order: Vec<usize> = holo.to_vec();
        order.extend(anti.iter().map(|k| k + self.n));
        let mut mask = 0u32;
        for &b in &order {
            if mask & (1 << b) != 0 {
                return S::zero();
            }
            mask |= 1 << b;
        }
        let mut inversions = 0;
        for i in 0..order.len() {
            for j in i + 1..order.len() {
                if order[i] > order[j] {
                    inversions += 1;
                }
            }
        }
        let s = self.coefficient(mask);
        if inversions % 2 == 0 {
            s
        } else {
            s.negated()
        }
    }

    pub(crate) fn insert(&mut self, mask: u32, s: S) {
        if s.is_exact_zero() {
            return;
        }
        match self.terms.remove(&mask) {
            Some(old) => {
                let sum = old.plus(&s);
                if !sum.is_exact_zero() {
                    self.terms.insert(mask, sum);
                }
            }
            None => {
                self.terms.insert(mask, s);
            }
        }
    }

    fn check_dim(&self, other: &Self) {
        assert_eq!(self.n, other.n, "forms of different dimension");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_dim(other);
        let mut out = self.clone();
        for (m, s) in &other.terms {
            out.insert(*m, s.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_dim(other);
        let mut out = self.clone();
        for (m, s) in &other.terms {
            out.insert(*m, s.negated());
        }
        out
    }

    pub fn scale(&self, z: Complex64) -> Self {
        self.map_coefficients(|s| s.scaled(z))
    }

    pub fn times(&self, s: &S) -> Self {
        self.map_coefficients(|t| t.times(s))
    }

    pub fn negated(&self) -> Self {
        self.map_coefficients(|s| s.negated())
    }

    fn map_coefficients(&self, f: impl Fn(&S) -> S) -> Self {
        let mut out = Form::zero(self.n);
        for (m, s) in &self.terms {
            out.insert(*m, f(s));
        }
        out
    }

    /// Apply `f` to every coefficient, changing the scalar type.
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Form<T> {
        let mut out = Form::zero(self.n);
        for (m, s) in &self.terms {
            out.insert(*m, f(s));
        }
        out
    }

    /// Pointwise value of a form of jets.
    pub fn value(&self) -> ComplexForm {
        self.map(|s| s.value())
    }

    pub fn wedge(&self, other: &Self) -> Self {
        self.check_dim(other);
        let mut out = Form::zero(self.n);
        for (a, sa) in &self.terms {
            for (b, sb) in &other.terms {
                if a & b != 0 {
                    continue;
                }
                let prod = sa.times(sb);
                let prod = if merge_sign(*a, *b) < 0.0 {
                    prod.negated()
                } else {
                    prod
                };
                out.insert(a | b, prod);
            }
        }
        out
    }

    /// `self^k` under the wedge product (`k = 0` gives 1).
    pub fn power(&self, k: usize) -> Self {
        let mut out = Form::scalar(self.n, S::one());
        for _ in 0..k {
            out = out.wedge(self);
        }
        out
    }

    /// Complex conjugation; swaps `dz` and `dz̄`.
    pub fn conj(&self) -> Self {
        let n = self.n;
        let low = (1u32 << n) - 1;
        let mut out = Form::zero(n);
        for (m, s) in &self.terms {
            let h = m & low;
            let a = m >> n;
            let new_mask = a | (h << n);
            let mut v = s.conjugate();
            if (h.count_ones() * a.count_ones()) % 2 == 1 {
                v = v.negated();
            }
            out.insert(new_mask, v);
        }
        out
    }

    pub fn bidegree_of(&self, mask: u32) -> (usize, usize) {
        let low = (1u32 << self.n) - 1;
        (
            (mask & low).count_ones() as usize,
            (mask >> self.n).count_ones() as usize,
        )
    }

    /// The `(p,q)` component.
    pub fn part(&self, p: usize, q: usize) -> Self {
        let mut out = Form::zero(self.n);
        for (m, s) in &self.terms {
            if self.bidegree_of(*m) == (p, q) {
                out.terms.insert(*m, s.clone());
            }
        }
        out
    }

    /// The degree-`k` component.
    pub fn degree_part(&self, k: usize) -> Self {
        let mut out = Form::zero(self.n);
        for (m, s) in &self.terms {
            if m.count_ones() as usize == k {
                out.terms.insert(*m, s.clone());
            }
        }
        out
    }

    /// Bidegrees present with a nonzero coefficient.
    pub fn bidegrees(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = self.terms.keys().map(|m| self.bidegree_of(*m)).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Multiply each `(p,q)` component by `i^(q-p)`.
    pub fn j_action(&self) -> Self {
        let mut out = Form::zero(self.n);
        for (m, s) in &self.terms {
            let (p, q) = self.bidegree_of(*m);
            let e = (q as i64 - p as i64).rem_euclid(4);
            let z = match e {
                0 => c(1.0),
                1 => I,
                2 => c(-1.0),
                _ => -I,
            };
            out.insert(*m, s.scaled(z));
        }
        out
    }

    /// Interior product with a real vector given in the real frame.
    pub fn interior(&self, v: &[S]) -> Self {
        let n = self.n;
        assert_eq!(v.len(), 2 * n);
        let gen_value = |bit: usize| -> S {
            let mut acc = S::zero();
            for (a, va) in v.iter().enumerate() {
                let e = generator_on_real(n, bit, a);
                if e != c(0.0) {
                    acc = acc.plus(&va.scaled(e));
                }
            }
            acc
        };
        let mut out = Form::zero(n);
        for (m, s) in &self.terms {
            for (pos, b) in bits(*m).enumerate() {
                let gv = gen_value(b);
                if gv.is_exact_zero() {
                    continue;
                }
                let mut t = s.times(&gv);
                if pos % 2 == 1 {
                    t = t.negated();
                }
                out.insert(m & !(1 << b), t);
            }
        }
        out
    }

    /// Evaluate a `k`-form on `k` real vectors (real frame components).
    pub fn evaluate(&self, vectors: &[Vec<S>]) -> S {
        let mut f = self.degree_part(vectors.len());
        for v in vectors.iter() {
            f = f.interior(v);
        }
        f.coefficient(0)
    }

    /// A 2-form as the antisymmetric matrix `ω(e_a, e_b)` in the real frame.
    pub fn to_real_matrix(&self) -> Vec<Vec<S>> {
        let n = self.n;
        let mut m = vec![vec![S::zero(); 2 * n]; 2 * n];
        for (mask, s) in self.degree_part(2).terms() {
            let v: Vec<usize> = bits(mask).collect();
            let (b1, b2) = (v[0], v[1]);
            for a in 0..2 * n {
                let ea = generator_on_real(n, b1, a);
                if ea == c(0.0) {
                    continue;
                }
                for b in 0..2 * n {
                    let eb = generator_on_real(n, b2, b);
                    if eb == c(0.0) {
                        continue;
                    }
                    let t = s.scaled(ea * eb);
                    m[a][b] = m[a][b].plus(&t);
                    m[b][a] = m[b][a].minus(&t);
                }
            }
        }
        m
    }

    /// A real antisymmetric matrix in the real frame as a 2-form.
    pub fn from_real_matrix(n: usize, m: &[Vec<S>]) -> Self {
        let mut out = Form::zero(n);
        for a in 0..2 * n {
            let ea = Form::<S>::real_basis_covector(n, a);
            for b in a + 1..2 * n {
                if m[a][b].is_exact_zero() {
                    continue;
                }
                let eb = Form::<S>::real_basis_covector(n, b);
                out = out.add(&ea.wedge(&eb).times(&m[a][b]));
            }
        }
        out
    }

    /// `dx_k` for `a = 2k`, `dy_k` for `a = 2k+1`.
    pub fn real_basis_covector(n: usize, a: usize) -> Self {
        if a.is_multiple_of(2) {
            Form::dx(n, a / 2)
        } else {
            Form::dy(n, a / 2)
        }
    }
}

impl ComplexForm {
    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Coefficientwise distance.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other).max_abs()
    }

    /// Drop coefficients with modulus below `eps`.
    pub fn pruned(&self, eps: f64) -> Self {
        let mut out = Form::zero(self.n);
        for (m, s) in &self.terms {
            if s.norm() > eps {
                out.terms.insert(*m, *s);
            }
        }
        out
    }

    /// Pullback along the complex linear map `z ↦ A z` (`a` is row-major
    /// `n × n`): `dz_j ↦ Σ_k A_jk dz_k`.
    pub fn pullback_linear(&self, a: &[Complex64]) -> Self {
        let n = self.n;
        assert_eq!(a.len(), n * n);
        let image = |bit: usize| -> ComplexForm {
            let mut f = Form::zero(n);
            if bit < n {
                for k in 0..n {
                    f.insert(1 << k, a[bit * n + k]);
                }
            } else {
                let j = bit - n;
                for k in 0..n {
                    f.insert(1 << (n + k), a[j * n + k].conj());
                }
            }
            f
        };
        let mut out = Form::zero(n);
        for (m, s) in &self.terms {
            let mut t = Form::scalar(n, *s);
            for b in bits(*m) {
                t = t.wedge(&image(b));
            }
            out = out.add(&t);
        }
        out
    }
}

/// Laplace-expansion table of all square minors of an `n × n` matrix,
/// keyed by `(row mask, column mask)`.
fn all_minors<S: Scalar>(n: usize, h: &[S]) -> Vec<Vec<S>> {
    let size = 1usize << n;
    let mut minors = vec![vec![S::zero(); size]; size];
    minors[0][0] = S::one();
    let mut by_count: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
    for m in 0..size as u32 {
        by_count[m.count_ones() as usize].push(m);
    }
    for k in 1..=n {
        for &rows in &by_count[k] {
            let r0 = rows.trailing_zeros() as usize;
            let rest = rows & !(1 << r0);
            for &cols in &by_count[k] {
                let mut acc = S::zero();
                for (pos, cb) in bits(cols).enumerate() {
                    let hv = &h[r0 * n + cb];
                    if hv.is_exact_zero() {
                        continue;
                    }
                    let sub = &minors[rest as usize][(cols & !(1 << cb)) as usize];
                    if sub.is_exact_zero() {
                        continue;
                    }
                    let t = hv.times(sub);
                    acc = if pos % 2 == 0 { acc.plus(&t) } else { acc.minus(&t) };
                }
                minors[rows as usize][cols as usize] = acc;
            }
        }
    }
    minors
}

/// The Hermitian coefficient matrix of a fundamental form at a point,
/// with the data needed by `L`, `Λ`, `∗` and `⟨·,·⟩`.
#[derive(Clone, Debug)]
pub struct Metric<S = Complex64> {
    n: usize,
    h: Vec<S>,
    minors: Vec<Vec<S>>,
    det_inv: S,
    /// `Ωⁿ/n! = vol · e_full`.
    vol: S,
}

pub type MetricAtPoint = Metric<Complex64>;

impl<S: Scalar> Metric<S> {
    /// Build from a row-major `n × n` Hermitian matrix. Positivity is not
    /// checked here; see [`MetricAtPoint::new_checked`].
    pub fn new(n: usize, h: Vec<S>) -> Self {
        assert!((1..=MAX_DIM).contains(&n), "complex dimension {n} outside 1..=6");
        assert_eq!(h.len(), n * n, "metric matrix must be n x n");
        let minors = all_minors(n, &h);
        let full = (1usize << n) - 1;
        let det = minors[full][full].clone();
        let det_inv = det.inverse();
        let sign = if (n * (n - 1) / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
        let vol = det.scaled(Complex64::new(0.0, 0.5).powu(n as u32) * sign);
        Metric {
            n,
            h,
            minors,
            det_inv,
            vol,
        }
    }

    /// The metric whose fundamental form is `omega` (a real (1,1)-form).
    pub fn from_fundamental_form(omega: &Form<S>) -> Self {
        let n = omega.n();
        let mut h = Vec::with_capacity(n * n);
        for j in 0..n {
            for k in 0..n {
                h.push(omega
                    .coefficient((1 << j) | (1 << (n + k)))
                    .scaled(Complex64::new(0.0, -2.0)));
            }
        }
        Metric::new(n, h)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self, j: usize, k: usize) -> &S {
        &self.h[j * self.n + k]
    }

    pub fn matrix(&self) -> &[S] {
        &self.h
    }

    pub fn determinant(&self) -> S {
        let full = (1usize << self.n) - 1;
        self.minors[full][full].clone()
    }

    /// Coefficient of `Ωⁿ/n!` on `dz_1∧…∧dz_n∧dz̄_1∧…∧dz̄_n`.
    pub fn volume_coefficient(&self) -> S {
        self.vol.clone()
    }

    pub fn volume_form(&self) -> Form<S> {
        Form::basis(self.n, (1u32 << (2 * self.n)) - 1, self.vol.clone())
    }

    /// `(h^{-1})_{jk}`.
    pub fn inverse_entry(&self, j: usize, k: usize) -> S {
        let mi = self.p_minor(1 << j, 1 << k);
        mi.scaled(c(0.5))
    }

    pub fn fundamental_form(&self) -> Form<S> {
        let n = self.n;
        let mut f = Form::zero(n);
        for j in 0..n {
            for k in 0..n {
                f.insert(
                    (1 << j) | (1 << (n + k)),
                    self.h[j * n + k].scaled(Complex64::new(0.0, 0.5)),
                );
            }
        }
        f
    }

    /// Minor of `P = 2 h^{-1}` with the given row and column masks.
    fn p_minor(&self, rows: u32, cols: u32) -> S {
        let k = rows.count_ones();
        debug_assert_eq!(k, cols.count_ones());
        if k == 0 {
            return S::one();
        }
        let full = (1u32 << self.n) - 1;
        let parity = bits(rows).sum::<usize>() + bits(cols).sum::<usize>();
        let sub = &self.minors[(full & !cols) as usize][(full & !rows) as usize];
        let mut v = sub.times(&self.det_inv).scaled(c(2f64.powi(k as i32)));
        if parity % 2 == 1 {
            v = v.negated();
        }
        v
    }

    /// Bilinear pairing `G(e_A, e_B)` of basis forms.
    fn gram(&self, a: u32, b: u32) -> S {
        let n = self.n;
        let low = (1u32 << n) - 1;
        let (ah, aa) = (a & low, a >> n);
        let (bh, ba) = (b & low, b >> n);
        if ah.count_ones() != ba.count_ones() || aa.count_ones() != bh.count_ones() {
            return S::zero();
        }
        let p = ah.count_ones() as usize;
        let q = aa.count_ones() as usize;
        let x = self.p_minor(ba, ah);
        if x.is_exact_zero() {
            return S::zero();
        }
        let y = self.p_minor(aa, bh);
        let v = x.times(&y);
        if (p * q) % 2 == 1 {
            v.negated()
        } else {
            v
        }
    }

    /// The pairing `G(α, β)`, complex bilinear.
    pub fn bilinear(&self, alpha: &Form<S>, beta: &Form<S>) -> S {
        let mut acc = S::zero();
        for (a, sa) in alpha.terms() {
            for (b, sb) in beta.terms() {
                if a.count_ones() != b.count_ones() {
                    continue;
                }
                let g = self.gram(a, b);
                if !g.is_exact_zero() {
                    acc = acc.plus(&sa.times(sb).times(&g));
                }
            }
        }
        acc
    }

    /// Pointwise Hermitian inner product `⟨α, β⟩`, linear in `α`.
    pub fn inner(&self, alpha: &Form<S>, beta: &Form<S>) -> S {
        self.bilinear(alpha, &beta.conj())
    }

    pub fn hodge_star(&self, beta: &Form<S>) -> Form<S> {
        let n = self.n;
        let full = (1u32 << (2 * n)) - 1;
        let low = (1u32 << n) - 1;
        let mut out = Form::zero(n);
        for (b, sb) in beta.terms() {
            let (bh, ba) = (b & low, b >> n);
            // partners A have holomorphic part of size |B_a| and
            // antiholomorphic part of size |B_h|
            for ah in subsets_of_size(n, ba.count_ones() as usize) {
                for aa in subsets_of_size(n, bh.count_ones() as usize) {
                    let a = ah | (aa << n);
                    let g = self.gram(a, b);
                    if g.is_exact_zero() {
                        continue;
                    }
                    let comp = full & !a;
                    let mut t = sb.times(&g).times(&self.vol);
                    if merge_sign(a, comp) < 0.0 {
                        t = t.negated();
                    }
                    out.insert(comp, t);
                }
            }
        }
        out
    }

    /// `L α = Ω ∧ α`.
    pub fn lefschetz(&self, alpha: &Form<S>) -> Form<S> {
        self.fundamental_form().wedge(alpha)
    }

    /// `Λ`, the adjoint of `L`: `(-1)^k ∗ L ∗` on `k`-forms.
    pub fn lefschetz_adjoint(&self, alpha: &Form<S>) -> Form<S> {
        let mut out = Form::zero(self.n);
        for k in 2..=2 * self.n {
            let part = alpha.degree_part(k);
            if part.is_empty() {
                continue;
            }
            let mut t = self.hodge_star(&self.lefschetz(&self.hodge_star(&part)));
            if k % 2 == 1 {
                t = t.negated();
            }
            out = out.add(&t);
        }
        out
    }
}

impl MetricAtPoint {
    /// Build and check Hermitian symmetry and positive-definiteness.
    pub fn new_checked(n: usize, h: Vec<Complex64>) -> Result<Self, crate::Error> {
        if h.len() != n * n || !(1..=MAX_DIM).contains(&n) {
            return Err(crate::Error::InvalidModel(format!(
                "metric matrix must be n x n with 1 <= n <= {MAX_DIM}"
            )));
        }
        let scale = h.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
        for j in 0..n {
            for k in 0..n {
                if (h[j * n + k] - h[k * n + j].conj()).norm() > 1e-12 * scale {
                    return Err(crate::Error::InvalidModel("metric is not Hermitian".into()));
                }
            }
        }
        let m = nalgebra::DMatrix::from_fn(n, n, |j, k| h[j * n + k]);
        let eig = nalgebra::SymmetricEigen::new(m);
        if eig.eigenvalues.iter().any(|&e| e <= 0.0) {
            return Err(crate::Error::DomainError(
                "metric is not positive definite".into(),
            ));
        }
        Ok(Metric::new(n, h))
    }

    pub fn euclidean(n: usize) -> Self {
        let mut h = vec![c(0.0); n * n];
        for k in 0..n {
            h[k * n + k] = c(1.0);
        }
        Metric::new(n, h)
    }
}

fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = u32> {
    (0..(1u32 << n)).filter(move |m| m.count_ones() as usize == k)
}
