//! Batch verification of the curvature and model identities.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvature::{expected, rel_scalar, PointCurvature};
use crate::error::Result;
use crate::models::HermitianModel;

pub const SCHEMA: u32 = 1;
pub const DEFAULT_AD_TOL: f64 = 1e-8;
pub const DEFAULT_RIEMANN_TOL: f64 = 1e-6;
pub const STRUCTURE_TOL: f64 = 1e-9;
pub const CONE_RICCI_TOL: f64 = 1e-7;
pub const FLAT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityRecord {
    pub name: String,
    pub tag: String,
    pub max_rel_err: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub tool_version: String,
    pub model: String,
    pub seed: u64,
    pub points: usize,
    pub records: Vec<IdentityRecord>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(model: &HermitianModel, seed: u64, points: usize, records: Vec<IdentityRecord>) -> Self {
        let pass = records.iter().all(|r| r.pass);
        VerificationReport {
            schema: SCHEMA,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            model: model.descriptor(),
            seed,
            points,
            records,
            pass,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityRecord> {
        self.records.iter().filter(|r| !r.pass)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyOptions {
    pub points: usize,
    pub seed: u64,
    pub ad_tol: f64,
    pub riemann_tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            points: 20,
            seed: 7,
            ad_tol: DEFAULT_AD_TOL,
            riemann_tol: DEFAULT_RIEMANN_TOL,
        }
    }
}

/// The `ζ` values exercised per point, in order.
pub fn zeta_grid(n: usize) -> Vec<f64> {
    vec![-0.5, expected::zeta_flat(n), 0.0, 1.0]
}

pub fn sample_points(model: &HermitianModel, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| model.sample_point(&mut rng)).collect()
}

struct Check {
    name: &'static str,
    tag: &'static str,
}

const AD: usize = 0;
const RIEMANN: usize = 1;
const STRUCT: usize = 2;
const CONE: usize = 3;
const FLAT: usize = 4;

fn checks() -> Vec<(Check, usize)> {
    let c = |name, tag, class| (Check { name, tag }, class);
    vec![
        c("lee_power", "d(Ω^{n-1}) = (n-1) θ∧Ω^{n-1}", AD),
        c("lck", "dΩ = θ∧Ω", AD),
        c("lee_from_lambda", "θ = Λ(dΩ)/(n-1)", AD),
        c("lee_from_codifferential", "θ = J(δΩ)/(n-1)", AD),
        c("torsion_codifferential", "τ = -i ∂̄*Ω", AD),
        c("fundamental_vaisman", "Ω = -d(Jθ) + θ∧Jθ", AD),
        c("codifferential_sum", "∂∂*Ω + ∂̄∂̄*Ω = -(n-1) d(Jθ_Ω)", AD),
        c("chern_ricci", "Ric^(1)(Ω_ζ) = -(n/2) d(Jθ)", AD),
        c("lc_ricci", "R^(1)(Ω_ζ) = ½(-n + (n-1)/(1+ζ)) d(Jθ)", AD),
        c("d_j_theta_from_tau", "d(Jθ_Ω) = -(2/(n-1)) i ∂̄τ", AD),
        c("delbar_tau", "∂̄τ = -∂τ̄", AD),
        c("upsilon_decomposition", "Ric^(1) = Υ - (n/2) d(Jθ_Ω)", AD),
        c("lee_parallel", "∇θ = 0", AD),
        c("chern_scalar", "s_C = n(n-1)/(2(1+ζ))", AD),
        c("torsion_norm", "|T|² = (n-1)/(1+ζ)²", AD),
        c("volume_ratio", "Ω_ζ^n = (1+ζ)^{n-1} Ω^n", AD),
        c("scal_law", "scal = n(n-1)/(1+ζ)² (ζ - (1-2n)/(2n))", RIEMANN),
        c("scal_oracles", "scal via Levi-Civita = scal via torsion relation", RIEMANN),
        c("lc_ricci_flat", "R^(1)(Ω_{-1/n}) = 0", FLAT),
        c("deck_invariance", "γ*Ω = Ω", AD),
        c("lee_norm_invariance", "|θ| = 1 and γ-invariant", AD),
        c("sasaki_structure", "η(ξ) = 1, ξ⌟dη = 0, Φ² = -1 + η⊗ξ, g_Q", STRUCT),
        c("cone_ricci_flat", "Ric(g_CY) = 0", CONE),
    ]
}

fn per_point(model: &HermitianModel, point: &[f64]) -> Vec<f64> {
    let n = model.n();
    let mut out = vec![0.0_f64; checks().len()];
    let base = PointCurvature::compute(model, point);
    let base_det = base.metric.determinant().re;
    let mut bump = |i: usize, v: f64| {
        out[i] = if v.is_nan() { f64::INFINITY } else { out[i].max(v) };
    };
    for zeta in zeta_grid(n) {
        let m = model.zeta_family(zeta).expect("grid avoids ζ ≤ -1");
        let pc = PointCurvature::compute(&m, point);
        bump(0, pc.residual_lee_power());
        bump(1, pc.residual_lck());
        bump(2, pc.residual_lee_from_lambda());
        bump(3, pc.residual_lee_from_delta());
        bump(4, pc.residual_torsion_codifferential());
        bump(5, pc.residual_fundamental_vaisman());
        bump(6, pc.residual_codiff_sum());
        bump(7, pc.residual_chern_ricci());
        bump(8, pc.residual_lc_ricci_coefficient(expected::lc_ricci_coefficient(n, zeta)));
        bump(9, pc.residual_d_j_theta_from_tau());
        bump(10, pc.residual_delbar_tau());
        bump(11, pc.residual_upsilon_decomposition());
        bump(12, pc.lee_parallel_residual);
        bump(13, rel_scalar(pc.s_c, expected::chern_scalar(n, zeta)));
        let nf = n as f64;
        bump(14, rel_scalar(pc.torsion_sq, (nf - 1.0) / (1.0 + zeta).powi(2)));
        let ratio = pc.metric.determinant().re / base_det;
        bump(15, rel_scalar(ratio, (1.0 + zeta).powi(n as i32 - 1)));
        bump(16, rel_scalar(pc.scal_direct, expected::riemann_scalar(n, zeta)));
        bump(17, pc.residual_scal_oracles());
        if zeta == expected::zeta_flat(n) {
            bump(18, pc.lc_ricci_norm());
        }
    }
    bump(19, model.deck_invariance_error(&[point.to_vec()]));
    bump(20, model.lee_norm_invariance_error(&[point.to_vec()]));
    let sc = model.sasaki_check(point);
    bump(21, sc.max_structure_residual());
    bump(22, sc.ricci_cone);
    out
}

/// Run the identity suite at `opts.points` seeded random points.
pub fn verify_model(model: &HermitianModel, opts: &VerifyOptions) -> Result<VerificationReport> {
    let points = sample_points(model, opts.points, opts.seed);
    let per: Vec<Vec<f64>> = points.par_iter().map(|p| per_point(model, p)).collect();
    let tol_of = |class: usize| match class {
        AD => opts.ad_tol,
        RIEMANN => opts.riemann_tol,
        STRUCT => STRUCTURE_TOL,
        CONE => CONE_RICCI_TOL,
        _ => FLAT_TOL,
    };
    let records = checks()
        .into_iter()
        .enumerate()
        .map(|(i, (c, class))| {
            let worst = per.iter().map(|r| r[i]).fold(0.0, f64::max);
            let tol = tol_of(class);
            IdentityRecord {
                name: c.name.to_string(),
                tag: c.tag.to_string(),
                max_rel_err: worst,
                tolerance: tol,
                pass: worst <= tol,
            }
        })
        .collect();
    Ok(VerificationReport::new(model, opts.seed, opts.points, records))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes_and_round_trips() {
        let m = HermitianModel::hopf(2).unwrap();
        let opts = VerifyOptions {
            points: 3,
            ..VerifyOptions::default()
        };
        let r = verify_model(&m, &opts).unwrap();
        for rec in &r.records {
            assert!(rec.pass, "{rec:?}");
        }
        assert!(r.pass);
        assert_eq!(r.schema, 1);
        let js = serde_json::to_string(&r).unwrap();
        let back: VerificationReport = serde_json::from_str(&js).unwrap();
        assert_eq!(back, r);
        assert_eq!(serde_json::to_string(&verify_model(&m, &opts).unwrap()).unwrap(), js);
    }

    #[test]
    fn overall_flag_tracks_records() {
        let m = HermitianModel::hopf(2).unwrap();
        let opts = VerifyOptions {
            points: 1,
            ad_tol: 0.0,
            ..VerifyOptions::default()
        };
        let r = verify_model(&m, &opts).unwrap();
        assert!(!r.pass);
        assert!(r.failures().count() > 0);
    }
}
