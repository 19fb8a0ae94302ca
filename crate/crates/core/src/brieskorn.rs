//! Brieskorn-Pham exponent tuples and the sufficient condition
//! `1 < Σ 1/a_j < 1 + n/a_n` for a Levi-Civita Ricci-flat metric on
//! `L(a) × S¹`.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvature::expected;
use crate::error::{Error, Result};
use crate::flow::trichotomy_times;

pub const MAX_SCAN_EXPONENT: u32 = 64;
/// Upper bound on the number of tuples a single scan may visit.
pub const SCAN_LIMIT: u64 = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "admissible-by-C3")]
    AdmissibleByC3,
    #[serde(rename = "fails-lower")]
    FailsLower,
    #[serde(rename = "fails-upper")]
    FailsUpper,
    #[serde(rename = "catalog-C4")]
    CatalogC4,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::AdmissibleByC3 => "admissible-by-C3",
            Verdict::FailsLower => "fails-lower",
            Verdict::FailsUpper => "fails-upper",
            Verdict::CatalogC4 => "catalog-C4",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Sorted exponents `a₀ ≤ … ≤ a_n`, all at least 2, with `n ≥ 3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BrieskornTuple {
    exponents: Vec<u32>,
}

impl BrieskornTuple {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        if exponents.len() < 4 {
            return Err(Error::Usage(format!(
                "need at least 4 exponents (n >= 3), got {}",
                exponents.len()
            )));
        }
        if let Some(a) = exponents.iter().find(|&&a| a < 2) {
            return Err(Error::Usage(format!("exponent {a} must be at least 2")));
        }
        if exponents.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Usage(format!(
                "exponents {exponents:?} must be sorted ascending"
            )));
        }
        Ok(BrieskornTuple { exponents })
    }

    pub fn from_unsorted(mut exponents: Vec<u32>) -> Result<Self> {
        exponents.sort_unstable();
        Self::new(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Number of variables minus one.
    pub fn n(&self) -> usize {
        self.exponents.len() - 1
    }

    /// `S = Σ 1/a_j`.
    pub fn reciprocal_sum(&self) -> BigRational {
        self.exponents
            .iter()
            .map(|&a| BigRational::new(BigInt::one(), BigInt::from(a)))
            .fold(BigRational::zero(), |acc, x| acc + x)
    }

    /// `U = 1 + n/a_n`.
    pub fn upper_bound(&self) -> BigRational {
        let last = *self.exponents.last().expect("non-empty");
        BigRational::one() + BigRational::new(BigInt::from(self.n()), BigInt::from(last))
    }
}

impl fmt::Display for BrieskornTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exponents.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for BrieskornTuple {
    type Err = Error;

    /// Comma separated, brackets optional, e.g. `2,2,2,3,5`.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let exps = body
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Usage(format!("bad exponent '{}' in '{s}'", p.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        BrieskornTuple::new(exps)
    }
}

pub fn check_admissible(tuple: &BrieskornTuple) -> Verdict {
    let s = tuple.reciprocal_sum();
    if s <= BigRational::one() {
        Verdict::FailsLower
    } else if s >= tuple.upper_bound() {
        Verdict::FailsUpper
    } else {
        Verdict::AdmissibleByC3
    }
}

/// Machine-readable verdict with exact `S` and `U` as `p/q` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrieskornRecord {
    pub tuple: Vec<u32>,
    #[serde(rename = "S")]
    pub s: String,
    pub upper: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<u32>,
    /// Outcome of the inequality for catalog entries.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub c3: Option<Verdict>,
}

fn ratio_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl BrieskornRecord {
    pub fn of(tuple: &BrieskornTuple) -> Self {
        BrieskornRecord {
            tuple: tuple.exponents.clone(),
            s: ratio_string(&tuple.reciprocal_sum()),
            upper: ratio_string(&tuple.upper_bound()),
            verdict: check_admissible(tuple),
            k: None,
            c3: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub k: u32,
    pub tuple: BrieskornTuple,
    pub verdict: Verdict,
    pub c3: Verdict,
}

impl CatalogEntry {
    pub fn record(&self) -> BrieskornRecord {
        BrieskornRecord {
            verdict: self.verdict,
            k: Some(self.k),
            c3: Some(self.c3),
            ..BrieskornRecord::of(&self.tuple)
        }
    }
}

/// `(2,2,2,3,6k-1)` for `k = 1..=28`.
pub fn exotic7_catalog() -> Vec<CatalogEntry> {
    (1..=28)
        .map(|k| {
            let tuple = BrieskornTuple::new(vec![2, 2, 2, 3, 6 * k - 1]).expect("sorted");
            let c3 = check_admissible(&tuple);
            CatalogEntry {
                k,
                tuple,
                verdict: Verdict::CatalogC4,
                c3,
            }
        })
        .collect()
}

fn multiset_count(slots: u64, values: u64) -> u64 {
    // C(values + slots - 1, slots), saturating
    let mut acc: u128 = 1;
    for i in 0..slots as u128 {
        acc = acc * (values as u128 + i) / (i + 1);
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// All sorted tuples with `n + 1` exponents in `2..=max_exponent` that
/// pass the inequality, in lexicographic order.
pub fn scan(n: usize, max_exponent: u32) -> Result<Vec<BrieskornTuple>> {
    if n < 3 {
        return Err(Error::Usage(format!("scan needs n >= 3, got {n}")));
    }
    if !(2..=MAX_SCAN_EXPONENT).contains(&max_exponent) {
        return Err(Error::Usage(format!(
            "max exponent {max_exponent} outside 2..={MAX_SCAN_EXPONENT}"
        )));
    }
    let total = multiset_count(n as u64 + 1, max_exponent as u64 - 1);
    if total > SCAN_LIMIT {
        return Err(Error::Usage(format!(
            "scan would visit {total} tuples (limit {SCAN_LIMIT}); lower --n or --max"
        )));
    }
    let chunks: Vec<Vec<BrieskornTuple>> = (2..=max_exponent)
        .into_par_iter()
        .map(|first| {
            let mut out = Vec::new();
            let mut cur = vec![first];
            extend(&mut cur, n + 1, max_exponent, &mut out);
            out
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

fn extend(cur: &mut Vec<u32>, len: usize, max: u32, out: &mut Vec<BrieskornTuple>) {
    if cur.len() == len {
        let t = BrieskornTuple {
            exponents: cur.clone(),
        };
        if check_admissible(&t) == Verdict::AdmissibleByC3 {
            out.push(t);
        }
        return;
    }
    let lo = *cur.last().expect("seeded");
    for a in lo..=max {
        cur.push(a);
        extend(cur, len, max, out);
        cur.pop();
    }
}

/// Curvature thresholds of the Vaisman family on an `n`-dimensional
/// suspension.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureProfile {
    pub n: usize,
    pub zeta_flat: f64,
    pub zeta_zero: f64,
    pub scal_sup: f64,
    pub scal_sup_at: f64,
    #[serde(rename = "T")]
    pub collapse: f64,
    pub t_zero: f64,
}

pub fn curvature_profile(n: usize) -> Result<CurvatureProfile> {
    if n < 2 {
        return Err(Error::Usage(format!("curvature profile needs n >= 2, got {n}")));
    }
    let (at, sup) = expected::scal_sup(n);
    let tri = trichotomy_times(n);
    Ok(CurvatureProfile {
        n,
        zeta_flat: expected::zeta_flat(n),
        zeta_zero: expected::zeta_zero(n),
        scal_sup: sup,
        scal_sup_at: at,
        collapse: tri.collapse,
        t_zero: tri.t_zero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(d))
    }

    fn t(e: &[u32]) -> BrieskornTuple {
        BrieskornTuple::new(e.to_vec()).unwrap()
    }

    #[test]
    fn reference_verdicts() {
        let a = t(&[2, 2, 2, 2, 2]);
        assert_eq!(a.reciprocal_sum(), q(5, 2));
        assert_eq!(a.upper_bound(), q(3, 1));
        assert_eq!(check_admissible(&a), Verdict::AdmissibleByC3);

        let b = t(&[4, 5, 6, 7, 8]);
        assert_eq!(b.reciprocal_sum(), q(743, 840));
        assert_eq!(check_admissible(&b), Verdict::FailsLower);

        let c = t(&[2, 2, 2, 3, 5]);
        assert_eq!(c.reciprocal_sum(), q(61, 30));
        assert_eq!(c.upper_bound(), q(9, 5));
        assert_eq!(check_admissible(&c), Verdict::FailsUpper);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(BrieskornTuple::new(vec![3, 2, 2, 2]).is_err());
        assert!(BrieskornTuple::new(vec![2, 2, 2]).is_err());
        assert!(BrieskornTuple::new(vec![1, 2, 2, 2]).is_err());
        assert!("2,2,x,3".parse::<BrieskornTuple>().is_err());
        assert_eq!("(2, 2,2,3,5)".parse::<BrieskornTuple>().unwrap(), t(&[2, 2, 2, 3, 5]));
    }

    #[test]
    fn catalog_shape() {
        let cat = exotic7_catalog();
        assert_eq!(cat.len(), 28);
        assert_eq!(cat[0].tuple.exponents(), &[2, 2, 2, 3, 5]);
        assert_eq!(cat[27].tuple.exponents(), &[2, 2, 2, 3, 167]);
        let mut prev: Option<BrieskornRecord> = None;
        for e in &cat {
            let k = e.k as i64;
            assert_eq!(e.tuple.reciprocal_sum(), q(11, 6) + q(1, 6 * k - 1));
            assert!(e.tuple.reciprocal_sum() > BigRational::one());
            assert_eq!(e.c3, Verdict::FailsUpper);
            assert_eq!(e.verdict, Verdict::CatalogC4);
            let r = e.record();
            if let Some(p) = prev {
                assert_ne!(p.s, r.s);
            }
            prev = Some(r);
        }
        for w in cat.windows(2) {
            assert!(w[0].tuple.reciprocal_sum() > w[1].tuple.reciprocal_sum());
        }
    }

    #[test]
    fn small_scans() {
        let s = scan(3, 2).unwrap();
        assert_eq!(s, vec![t(&[2, 2, 2, 2])]);
        let a = scan(3, 3).unwrap();
        assert_eq!(a, scan(3, 3).unwrap());
        for x in &a {
            assert_eq!(check_admissible(x), Verdict::AdmissibleByC3);
        }
        assert!(a.windows(2).all(|w| w[0] < w[1]));
        assert!(scan(2, 8).is_err());
        assert!(scan(3, 65).is_err());
        assert!(scan(12, 64).is_err());
    }

    #[test]
    fn records_serialize_as_fractions() {
        let r = BrieskornRecord::of(&t(&[2, 2, 2, 3, 5]));
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["S"], "61/30");
        assert_eq!(v["upper"], "9/5");
        assert_eq!(v["verdict"], "fails-upper");
    }

    #[test]
    fn profile_numbers() {
        let p = curvature_profile(4).unwrap();
        assert_eq!(p.zeta_zero, -7.0 / 8.0);
        assert_eq!(p.scal_sup, 24.0);
        assert_eq!(p.zeta_flat, -0.25);
        assert_eq!(curvature_profile(2).unwrap().zeta_zero, -0.75);
        assert!(curvature_profile(1).is_err());
    }
}
