use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vaismanlab::calculus::{del, delbar, exterior_d};
use vaismanlab::curvature::{expected, PointCurvature};
use vaismanlab::flow::{flow_diagnostics, limit_tensor_eigenvalues, trichotomy_times};
use vaismanlab::models::HermitianModel;
use vaismanlab::{Complex64, ComplexForm, Form, MetricAtPoint};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_metric(n: usize, entries: &[f64]) -> MetricAtPoint {
    // H = A A* + I
    let a: Vec<Complex64> = (0..n * n).map(|i| c(entries[2 * i], entries[2 * i + 1])).collect();
    let mut h = vec![c(0.0, 0.0); n * n];
    for j in 0..n {
        for k in 0..n {
            let mut s = if j == k { c(1.0, 0.0) } else { c(0.0, 0.0) };
            for l in 0..n {
                s += a[j * n + l] * a[k * n + l].conj();
            }
            h[j * n + k] = s;
        }
    }
    MetricAtPoint::new_checked(n, h).unwrap()
}

fn random_form(n: usize, degree: usize, coeffs: &[f64]) -> ComplexForm {
    let mut f = Form::zero(n);
    let mut i = 0;
    for mask in 0u32..(1 << (2 * n)) {
        if mask.count_ones() as usize == degree {
            let z = c(coeffs[i % coeffs.len()], coeffs[(i + 7) % coeffs.len()]);
            f = f.add(&Form::basis(n, mask, z));
            i += 1;
        }
    }
    f
}

fn form_with_bidegree(n: usize, p: usize, q: usize, coeffs: &[f64]) -> ComplexForm {
    random_form(n, p + q, coeffs).part(p, q)
}

fn scale_of(f: &ComplexForm) -> f64 {
    f.max_abs().max(1.0)
}

fn model_strategy() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["hopf:2", "hopf:3", "hopf:4", "lens:1:1", "lens:1:2", "lens:2:3"])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lefschetz_adjointness(
        n in 2usize..=4,
        k in 0usize..=4,
        entries in prop::collection::vec(-1.0f64..1.0, 32),
        coeffs in prop::collection::vec(-1.0f64..1.0, 40),
    ) {
        prop_assume!(k + 2 <= 2 * n);
        let m = random_metric(n, &entries);
        let alpha = random_form(n, k, &coeffs);
        let beta = random_form(n, k + 2, &coeffs[3..]);
        let lhs = m.inner(&m.lefschetz_adjoint(&beta), &alpha);
        let rhs = m.inner(&beta, &m.lefschetz(&alpha));
        let scale = scale_of(&alpha) * scale_of(&beta) * (1.0 + lhs.norm());
        prop_assert!((lhs - rhs).norm() <= 1e-12 * scale, "{lhs} vs {rhs}");
    }

    #[test]
    fn star_involution_sign(
        n in 1usize..=4,
        k in 0usize..=8,
        entries in prop::collection::vec(-1.0f64..1.0, 32),
        coeffs in prop::collection::vec(-1.0f64..1.0, 40),
    ) {
        prop_assume!(k <= 2 * n);
        let m = random_metric(n, &entries);
        let alpha = random_form(n, k, &coeffs);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let twice = m.hodge_star(&m.hodge_star(&alpha));
        prop_assert!(twice.max_abs_diff(&alpha.scale(c(sign, 0.0))) <= 1e-12 * scale_of(&alpha));
    }

    #[test]
    fn star_pairing_gives_inner_product(
        n in 1usize..=4,
        p in 0usize..=4,
        q in 0usize..=4,
        entries in prop::collection::vec(-1.0f64..1.0, 32),
        coeffs in prop::collection::vec(-1.0f64..1.0, 40),
    ) {
        prop_assume!(p <= n && q <= n);
        let m = random_metric(n, &entries);
        let alpha = form_with_bidegree(n, p, q, &coeffs);
        let beta = form_with_bidegree(n, p, q, &coeffs[5..]);
        let lhs = alpha.wedge(&m.hodge_star(&beta.conj()));
        let rhs = m.volume_form().scale(m.inner(&alpha, &beta));
        let scale = scale_of(&alpha) * scale_of(&beta) * scale_of(&rhs);
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * scale);
    }

    #[test]
    fn inner_product_is_positive(
        n in 1usize..=3,
        k in 0usize..=6,
        entries in prop::collection::vec(-1.0f64..1.0, 18),
        coeffs in prop::collection::vec(-1.0f64..1.0, 40),
    ) {
        prop_assume!(k <= 2 * n);
        let m = random_metric(n, &entries);
        let alpha = random_form(n, k, &coeffs);
        let v = m.inner(&alpha, &alpha);
        prop_assert!(v.re >= 0.0 && v.im.abs() <= 1e-12 * (1.0 + v.re));
    }

    #[test]
    fn primitive_part_of_d_omega(spec in model_strategy(), seed in 0u64..1000) {
        let m = HermitianModel::parse(spec).unwrap();
        let n = m.n();
        let p = m.sample_point(&mut ChaCha8Rng::seed_from_u64(seed));
        let pc = PointCurvature::compute(&m, &p);
        let metric = &pc.metric;
        let lam = metric.lefschetz_adjoint(&pc.d_omega);
        let prim = pc.d_omega.sub(&metric.lefschetz(&lam).scale(c(1.0 / (n - 1) as f64, 0.0)));
        let scale = scale_of(&pc.d_omega);
        prop_assert!(metric.lefschetz_adjoint(&prim).max_abs() <= 1e-10 * scale);
        let pow = if n >= 2 { pc.omega.power(n - 2) } else { Form::scalar(n, c(1.0, 0.0)) };
        prop_assert!(prim.wedge(&pow).max_abs() <= 1e-10 * scale);
    }

    #[test]
    fn d_squared_vanishes(spec in model_strategy(), seed in 0u64..1000) {
        let m = HermitianModel::parse(spec).unwrap();
        let p = m.sample_point(&mut ChaCha8Rng::seed_from_u64(seed));
        let field = m.omega_field();
        let om = field.jet_at(&p, 2);
        let s = scale_of(&om.value());
        prop_assert!(exterior_d(&exterior_d(&om)).value().max_abs() <= 1e-10 * s);
        prop_assert!(del(&del(&om)).value().max_abs() <= 1e-10 * s);
        prop_assert!(delbar(&delbar(&om)).value().max_abs() <= 1e-10 * s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn curvature_is_homogeneous(spec in model_strategy(), seed in 0u64..1000, zeta in -0.8f64..1.5) {
        let base = HermitianModel::parse(spec).unwrap();
        let m = base.zeta_family(zeta).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = PointCurvature::compute(&m, &base.sample_point(&mut rng));
        let b = PointCurvature::compute(&m, &base.sample_point(&mut rng));
        let rel = |x: f64, y: f64| (x - y).abs() / x.abs().max(y.abs()).max(1.0);
        prop_assert!(rel(a.scal_direct, b.scal_direct) <= 1e-7);
        prop_assert!(rel(a.s_c, b.s_c) <= 1e-7);
        prop_assert!(rel(a.torsion_sq, b.torsion_sq) <= 1e-7);
        prop_assert!(a.min_eigenvalue_minus_d_j_theta() >= -1e-12);
    }

    #[test]
    fn limit_tensor_has_rank_two(spec in model_strategy(), seed in 0u64..1000) {
        let m = HermitianModel::parse(spec).unwrap();
        let p = m.sample_point(&mut ChaCha8Rng::seed_from_u64(seed));
        let ev = limit_tensor_eigenvalues(&m, &p);
        let d = ev.len();
        prop_assert!(ev[..d - 2].iter().all(|e| e.abs() <= 1e-12));
        prop_assert!(ev[d - 2] > 1e-6);
    }
}

#[test]
fn scal_sign_trichotomy_on_grid() {
    for n in [2usize, 3, 4] {
        let base = HermitianModel::hopf(n).unwrap();
        let z0 = expected::zeta_zero(n);
        let p = base.base_point();
        for z in [-0.9, z0 - 0.05, z0 + 0.05, 0.0, 1.0] {
            let pc = PointCurvature::compute(&base.zeta_family(z).unwrap(), &p);
            assert_eq!(pc.scal_direct.signum(), (z - z0).signum(), "n={n} ζ={z}");
        }
    }
}

#[test]
fn scal_decreases_towards_collapse() {
    for n in [2usize, 3, 4] {
        let m = HermitianModel::hopf(n).unwrap();
        let tri = trichotomy_times(n);
        let grid: Vec<f64> = (0..8)
            .map(|i| tri.t_zero + (tri.collapse - tri.t_zero) * (1.0 - 0.5f64.powi(i)) * 0.999)
            .collect();
        let rows = flow_diagnostics(&m, &grid, &m.base_point()).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].scal_direct < w[0].scal_direct, "n={n}");
        }
        assert!(rows.last().unwrap().scal_direct < -100.0);
    }
}
