//! Timing of the evaluation paths.
//!
//! All requested methods are evaluated once and cross-checked before any
//! timing is taken; a disagreement aborts the run without emitting rows.

use std::fmt::Write as _;
use std::hint::black_box;
use std::time::Instant;

use gentrib::analytic::BinetEvaluator;
use gentrib::matrix::{term_by_matrix, term_by_matrix_mod};
use gentrib::{BigInt, SequenceParams};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::args::{BenchArgs, BenchMethod};
use crate::output::{OutputRecord, Rendered};
use crate::CliError;

/// 2^64 - 59, the largest prime below 2^64.
pub const DEFAULT_BENCH_MODULUS: u64 = 18_446_744_073_709_551_557;

/// Largest index walked by the O(n) modular spot check.
pub const SPOT_CHECK_LIMIT: u64 = 1_000_000;

pub const CSV_HEADER: &str = "method,n,modulus,median_ns,min_ns,digest";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub method: &'static str,
    pub n: u64,
    pub modulus: Option<u64>,
    pub median_ns: u64,
    pub min_ns: u64,
    pub digest: String,
    /// How the value was validated before timing.
    pub checked_against: String,
}

/// First 16 hex digits of the SHA-256 of a decimal value.
pub fn digest(value: &str) -> String {
    let hash = Sha256::digest(value.as_bytes());
    hex::encode(&hash[..8])
}

fn time_reps<T>(reps: usize, mut f: impl FnMut() -> T) -> (u64, u64) {
    let mut samples: Vec<u64> = (0..reps.max(1))
        .map(|_| {
            let start = Instant::now();
            black_box(f());
            u64::try_from(start.elapsed().as_nanos()).unwrap_or(u64::MAX)
        })
        .collect();
    samples.sort_unstable();
    let mid = samples.len() / 2;
    let median = if samples.len() % 2 == 1 {
        samples[mid]
    } else {
        samples[mid - 1] / 2 + samples[mid] / 2
    };
    (median, samples[0])
}

struct Validated {
    method: BenchMethod,
    modulus: Option<u64>,
    digest: String,
    checked_against: String,
}

fn validate_n(
    p: &SequenceParams,
    n: u64,
    methods: &[BenchMethod],
    modulus: u64,
    tol_rel: f64,
    eval: Option<&BinetEvaluator>,
) -> Result<Vec<Validated>, CliError> {
    let iter = methods.contains(&BenchMethod::Iter).then(|| p.term(n));
    let matrix = methods.contains(&BenchMethod::Matrix).then(|| term_by_matrix(p, n));
    if let (Some(a), Some(b)) = (&iter, &matrix) {
        if a != b {
            return Err(CliError::Failed(format!(
                "iter and matrix disagree at n = {n} ({} vs {}); no timings reported",
                digest(&a.to_string()),
                digest(&b.to_string())
            )));
        }
    }
    let mut exact: Option<BigInt> = iter.or(matrix);

    let mut out = Vec::new();
    for &method in methods {
        let v = match method {
            BenchMethod::Iter | BenchMethod::Matrix => {
                let other = if methods.contains(&BenchMethod::Iter) && methods.contains(&BenchMethod::Matrix) {
                    if method == BenchMethod::Iter { "matrix" } else { "iter" }
                } else {
                    "self"
                };
                Validated {
                    method,
                    modulus: None,
                    digest: digest(&exact.as_ref().expect("exact computed").to_string()),
                    checked_against: other.to_string(),
                }
            }
            BenchMethod::Binet => {
                let eval = eval.expect("evaluator built when binet requested");
                let want = exact.get_or_insert_with(|| term_by_matrix(p, n)).clone();
                let got = eval.term(n).value;
                let want_f = want.to_string().parse::<f64>().unwrap_or(f64::INFINITY);
                let err = (got - want_f).abs() / want_f.abs().max(1.0);
                if err.is_nan() || err > tol_rel {
                    return Err(CliError::Failed(format!(
                        "binet disagrees with the exact value at n = {n} (relative error {err:e} > {tol_rel:e}); no timings reported"
                    )));
                }
                Validated {
                    method,
                    modulus: None,
                    digest: digest(&format!("{:.0}", got.round())),
                    checked_against: format!("exact (relative error {err:e})"),
                }
            }
            BenchMethod::MatrixMod => {
                let residue = term_by_matrix_mod(p, n, modulus)?;
                let checked_against = match &exact {
                    Some(e) => {
                        let want = gentrib::matrix::residue(e, modulus);
                        if want != residue {
                            return Err(CliError::Failed(format!(
                                "matrix-mod residue {residue} != exact value mod {modulus} = {want} at n = {n}"
                            )));
                        }
                        "exact value".to_string()
                    }
                    None => {
                        let spot = n.min(SPOT_CHECK_LIMIT);
                        let got = term_by_matrix_mod(p, spot, modulus)?;
                        let want = p.term_mod(spot, modulus)?;
                        if got != want {
                            return Err(CliError::Failed(format!(
                                "matrix-mod spot check failed at n = {spot}: {got} != {want}"
                            )));
                        }
                        format!("modular iteration at n = {spot}")
                    }
                };
                Validated {
                    method,
                    modulus: Some(modulus),
                    digest: digest(&residue.to_string()),
                    checked_against,
                }
            }
        };
        out.push(v);
    }
    Ok(out)
}

pub fn bench(a: &BenchArgs) -> Result<Rendered, CliError> {
    let p = a.params.require_exact()?;
    if a.reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".to_string()));
    }
    let mut methods = Vec::new();
    for m in &a.methods {
        if !methods.contains(m) {
            methods.push(*m);
        }
    }
    if a.modulus.is_some() && !methods.contains(&BenchMethod::MatrixMod) {
        return Err(CliError::Usage("--mod requires the matrix-mod method".to_string()));
    }
    let modulus = a.modulus.unwrap_or(DEFAULT_BENCH_MODULUS);
    if modulus == 0 {
        return Err(CliError::Usage("--mod must be positive".to_string()));
    }
    let eval = if methods.contains(&BenchMethod::Binet) {
        Some(BinetEvaluator::new(&p)?)
    } else {
        None
    };

    // Cross-check everything before timing anything.
    let mut validated = Vec::new();
    for &n in &a.ns {
        validated.push((n, validate_n(&p, n, &methods, modulus, a.tol_rel, eval.as_ref())?));
    }

    let mut rows = Vec::new();
    for (n, checks) in validated {
        for v in checks {
            let (median_ns, min_ns) = match v.method {
                BenchMethod::Iter => time_reps(a.reps, || p.term(n)),
                BenchMethod::Matrix => time_reps(a.reps, || term_by_matrix(&p, n)),
                BenchMethod::Binet => {
                    let e = eval.as_ref().expect("evaluator");
                    time_reps(a.reps, || e.term(black_box(n)))
                }
                BenchMethod::MatrixMod => time_reps(a.reps, || term_by_matrix_mod(&p, n, modulus)),
            };
            rows.push(BenchRow {
                method: v.method.name(),
                n,
                modulus: v.modulus,
                median_ns,
                min_ns,
                digest: v.digest,
                checked_against: v.checked_against,
            });
        }
    }

    let mut csv = format!("{CSV_HEADER}\n");
    let mut human = format!("{:<11} {:>12} {:>14} {:>14}  digest\n", "method", "n", "median_ns", "min_ns");
    for r in &rows {
        let m = r.modulus.map(|m| m.to_string()).unwrap_or_default();
        let _ = writeln!(csv, "{},{},{m},{},{},{}", r.method, r.n, r.median_ns, r.min_ns, r.digest);
        let _ = writeln!(
            human,
            "{:<11} {:>12} {:>14} {:>14}  {}",
            r.method, r.n, r.median_ns, r.min_ns, r.digest
        );
    }

    let inputs = json!({
        "sequence": { "preset": a.params.preset, "params": p },
        "n": a.ns,
        "methods": methods.iter().map(BenchMethod::name).collect::<Vec<_>>(),
        "modulus": modulus,
        "reps": a.reps,
        "tol_rel": a.tol_rel,
    });
    let record = OutputRecord::new("bench", inputs, json!({ "rows": rows }));
    Ok(Rendered::new(record, human, csv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use gentrib::Preset;

    #[test]
    fn digest_is_stable() {
        assert_eq!(digest("13"), "3fdba35f04dc8c46");
        assert_eq!(digest("13").len(), 16);
    }

    #[test]
    fn exact_paths_share_digest() {
        let p = Preset::Tribonacci.params();
        let v = validate_n(&p, 1000, &[BenchMethod::Iter, BenchMethod::Matrix], 97, 1e-8, None).unwrap();
        assert_eq!(v[0].digest, v[1].digest);
    }

    #[test]
    fn modular_spot_check() {
        let p = Preset::Padovan.params();
        let v = validate_n(&p, 3_000_000, &[BenchMethod::MatrixMod], DEFAULT_BENCH_MODULUS, 1e-8, None).unwrap();
        assert_eq!(v[0].checked_against, "modular iteration at n = 1000000");
    }

    #[test]
    fn binet_overflow_refused() {
        let p = Preset::Tribonacci.params();
        let eval = BinetEvaluator::new(&p).unwrap();
        assert!(validate_n(&p, 40, &[BenchMethod::Binet], 97, 1e-8, Some(&eval)).is_ok());
        let e = validate_n(&p, 5000, &[BenchMethod::Binet], 97, 1e-8, Some(&eval));
        assert!(matches!(e, Err(CliError::Failed(_))));
    }

    #[test]
    fn median_of_samples() {
        let mut k = 0u64;
        let (median, min) = time_reps(3, || {
            k += 1;
            k
        });
        assert!(min <= median);
    }
}
