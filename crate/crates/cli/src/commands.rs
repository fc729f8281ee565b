use std::fmt::Write as _;

use gentrib::analytic::{cardano_radicand, cardano_radicand_f64, BinetEvaluator};
use gentrib::identities::{
    all_passed, default_presets, run_suite, IdentityId, IndexRange, RandomPool, SuiteConfig, Tolerances,
};
use gentrib::matrix::{term_by_matrix, term_by_matrix_mod};
use serde_json::{json, Value};

use crate::args::{ParamArgs, RealParams, RootsArgs, TermArgs, TermMethod, VerifyArgs};
use crate::output::{complex_json, fmt_complex, OutputRecord, Rendered};
use crate::{CliError, EXIT_FAILURE};

fn params_json(p: &ParamArgs, real: Option<&RealParams>) -> Value {
    match (&p.preset, real.and_then(|r| r.exact.as_ref())) {
        (Some(name), Some(exact)) => json!({ "preset": name, "params": exact }),
        (_, Some(exact)) => json!({ "params": exact }),
        (_, None) => {
            let r = real.expect("real params");
            json!({ "seeds": r.seeds, "r": r.r, "s": r.s, "t": r.t })
        }
    }
}

fn closed_form(real: &RealParams) -> Result<BinetEvaluator, CliError> {
    Ok(match &real.exact {
        Some(p) => BinetEvaluator::new(p)?,
        None => BinetEvaluator::from_real(real.seeds, real.r, real.s, real.t)?,
    })
}

pub fn term(a: &TermArgs) -> Result<Rendered, CliError> {
    if a.modulus.is_some() && a.method != TermMethod::Matrix {
        return Err(CliError::Usage("--mod is only valid with --method matrix".to_string()));
    }
    let method = match a.method {
        TermMethod::Iter => "iter",
        TermMethod::Matrix => "matrix",
        TermMethod::Binet => "binet",
    };
    let inputs_base = |params: Value| json!({ "sequence": params, "n": a.n, "method": method, "modulus": a.modulus });

    if a.method == TermMethod::Binet {
        let real = a.params.resolve_real()?;
        let eval = closed_form(&real)?;
        let v = eval.term(a.n);
        let rounded = if v.value.is_finite() {
            format!("{:.0}", v.value.round())
        } else {
            v.value.to_string()
        };
        let record = OutputRecord::new(
            "term",
            inputs_base(params_json(&a.params, Some(&real))),
            json!({ "value": rounded, "closed_form": v.value, "imag_residue": v.imag_residue }),
        );
        let human = format!(
            "{rounded}\n# closed form {} (|imaginary part| {:e})\n",
            v.value, v.imag_residue
        );
        let csv = format!("method,n,modulus,value\nbinet,{},,{rounded}\n", a.n);
        return Ok(Rendered::new(record, human, csv));
    }

    let p = a.params.require_exact()?;
    let inputs = inputs_base(json!({ "preset": a.params.preset, "params": p }));
    let value = match (a.method, a.modulus) {
        (TermMethod::Matrix, Some(m)) => term_by_matrix_mod(&p, a.n, m)?.to_string(),
        (TermMethod::Matrix, None) => term_by_matrix(&p, a.n).to_string(),
        _ => p.term(a.n).to_string(),
    };
    let modulus = a.modulus.map(|m| m.to_string()).unwrap_or_default();
    let csv = format!("method,n,modulus,value\n{method},{},{modulus},{value}\n", a.n);
    let record = OutputRecord::new("term", inputs, json!({ "value": value }));
    Ok(Rendered::new(record, format!("{value}\n"), csv))
}

pub fn roots(a: &RootsArgs) -> Result<Rendered, CliError> {
    let real = a.params.resolve_real()?;
    let eval = closed_form(&real)?;
    let roots = &eval.roots;
    let (delta, radicand) = match &real.exact {
        Some(p) => (
            roots.delta_exact.as_ref().map(|d| d.to_string()).unwrap_or_default(),
            cardano_radicand(&p.r, &p.s, &p.t).to_string(),
        ),
        None => (
            format!("{:e}", roots.delta),
            format!("{:e}", cardano_radicand_f64(real.r, real.s, real.t)),
        ),
    };
    let residuals = roots.all().map(|z| roots.residual(z));
    let (e1, e2, e3) = roots.symmetric_functions();
    let c = eval.constants;

    let results = json!({
        "delta": delta,
        "delta_f64": roots.delta,
        "cardano_radicand": radicand,
        "alpha": roots.alpha,
        "omega1": complex_json(roots.omega1),
        "omega2": complex_json(roots.omega2),
        "a_v": roots.a_v,
        "b_v": roots.b_v,
        "p": complex_json(c.p_c),
        "q": complex_json(c.q_c),
        "r": complex_json(c.r_c),
        "residuals": residuals,
        "tol_root": roots.tol_root,
        "symmetric_functions": [complex_json(e1), complex_json(e2), complex_json(e3)],
    });

    let mut human = String::new();
    let rows: Vec<(&str, String)> = vec![
        ("delta", delta.clone()),
        ("radicand", radicand.clone()),
        ("alpha", roots.alpha.to_string()),
        ("omega1", fmt_complex(roots.omega1)),
        ("omega2", fmt_complex(roots.omega2)),
        ("A_V", roots.a_v.to_string()),
        ("B_V", roots.b_v.to_string()),
        ("P", fmt_complex(c.p_c)),
        ("Q", fmt_complex(c.q_c)),
        ("R", fmt_complex(c.r_c)),
        (
            "residuals",
            format!("{:e} {:e} {:e} (tol {:e})", residuals[0], residuals[1], residuals[2], roots.tol_root),
        ),
    ];
    for (k, v) in &rows {
        let _ = writeln!(human, "{k:<10} {v}");
    }
    let mut csv = String::from("quantity,value\n");
    for (k, v) in &rows {
        let _ = writeln!(csv, "{k},\"{v}\"");
    }

    let record = OutputRecord::new("roots", json!({ "sequence": params_json(&a.params, Some(&real)) }), results);
    Ok(Rendered::new(record, human, csv))
}

fn parse_identities(a: &VerifyArgs) -> Result<Vec<IdentityId>, CliError> {
    if a.all || a.identities.is_empty() {
        return Ok(IdentityId::ALL.to_vec());
    }
    let mut ids = Vec::new();
    for raw in &a.identities {
        let id = raw.parse::<IdentityId>().map_err(CliError::from)?;
        if !ids.contains(&id) {
            ids.push(id);
        }
    }
    Ok(ids)
}

/// Suite configuration for `verify`: explicit parameters replace the
/// default pool; otherwise presets plus a seeded random pool.
pub fn suite_config(a: &VerifyArgs) -> Result<SuiteConfig, CliError> {
    let (explicit, random) = match a.params.resolve_exact()? {
        Some(p) => (vec![p], None),
        None => (
            default_presets(),
            Some(RandomPool {
                count: a.random_count,
                seed: a.seed,
                ..RandomPool::default()
            }),
        ),
    };
    let cfg = SuiteConfig {
        explicit,
        random,
        range: IndexRange::new(a.n_min, a.n_max)?,
        tolerances: Tolerances {
            rel: a.tol_rel,
            abs: a.tol_abs,
        },
        identities: parse_identities(a)?,
    };
    cfg.validate()?;
    Ok(cfg)
}

pub fn verify(a: &VerifyArgs) -> Result<Rendered, CliError> {
    let cfg = suite_config(a)?;
    let reports = run_suite(&cfg)?;
    let passed = all_passed(&reports);
    let failed = reports.iter().filter(|r| !r.passed()).count();

    let inputs = json!({
        "identities": cfg.identities,
        "explicit": cfg.explicit,
        "random": cfg.random,
        "range": cfg.range,
        "tolerances": cfg.tolerances,
    });
    let results = json!({
        "passed": passed,
        "total": reports.len(),
        "failed": failed,
        "reports": reports,
    });

    let mut human = String::new();
    let mut csv = String::from("identity_id,params,n_lo,n_hi,status,worst_residual,failures\n");
    for r in &reports {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(
            human,
            "{status} {:<16} {:<28} n={}..={} worst={:e}",
            r.identity_id, r.params.to_string(), r.range.lo, r.range.hi, r.worst_residual
        );
        for f in r.failures.iter().take(3) {
            let _ = writeln!(human, "    n={}: {}", f.n, f.detail);
        }
        let _ = writeln!(
            csv,
            "{},\"{}\",{},{},{},{:e},{}",
            r.identity_id,
            r.params,
            r.range.lo,
            r.range.hi,
            if r.passed() { "pass" } else { "fail" },
            r.worst_residual,
            r.failures.len()
        );
    }
    let _ = writeln!(human, "{} checks, {} failed", reports.len(), failed);

    let rendered = Rendered::new(OutputRecord::new("verify", inputs, results), human, csv);
    Ok(if passed { rendered } else { rendered.with_exit(EXIT_FAILURE) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::Cli;
    use clap::Parser;

    fn run(args: &[&str]) -> Result<Rendered, CliError> {
        let cli = Cli::try_parse_from(std::iter::once("gentrib").chain(args.iter().copied())).unwrap();
        crate::run(&cli)
    }

    #[test]
    fn term_paths_agree() {
        for method in ["iter", "matrix"] {
            let out = run(&["term", "--preset", "tribonacci", "-n", "7", "--method", method]).unwrap();
            assert_eq!(out.human, "13\n");
        }
        let out = run(&["term", "--preset", "tribonacci", "-n", "7", "--method", "binet"]).unwrap();
        assert!(out.human.starts_with("13\n"));
    }

    #[test]
    fn term_rejects_bad_combinations() {
        let e = run(&["term", "--preset", "tribonacci", "-n", "7", "--mod", "7"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = run(&["term", "--r", "1.5", "--s", "1", "--t", "1", "-n", "3"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = run(&["term", "--r", "0", "--s", "3", "--t", "1", "-n", "3", "--method", "binet"]).unwrap_err();
        assert_eq!(e.exit_code(), 3);
        let e = run(&["term", "-n", "3"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn decimal_coefficients_for_closed_form() {
        // r = 1.5, s = t = 0.5 with seeds (0, 0, 1): V3 = 1.5, V4 = 2.75.
        let out = run(&["term", "--r", "1.5", "--s", "0.5", "--t", "0.5", "-n", "4", "--method", "binet"]).unwrap();
        let v = out.record.results["closed_form"].as_f64().unwrap();
        assert!((v - 2.75).abs() < 1e-12, "{v}");
        let out = run(&["roots", "--r", "1.5", "--s", "0.5", "--t", "0.5"]).unwrap();
        assert!(out.record.results["residuals"][0].as_f64().unwrap() < 1e-12);
    }

    #[test]
    fn roots_report_exact_delta() {
        let out = run(&["roots", "--preset", "tribonacci"]).unwrap();
        assert_eq!(out.record.results["delta"], "11/27");
        assert_eq!(out.record.results["cardano_radicand"], "19/27");
        let alpha = out.record.results["alpha"].as_f64().unwrap();
        assert!((alpha - 1.839286755214161).abs() < 1e-14);
        let out = run(&["roots", "--preset", "narayana:2"]).unwrap();
        assert_eq!(out.record.results["delta"], "59/108");
    }

    #[test]
    fn explicit_params_replace_pool() {
        let out = run(&["verify", "--identity", "cassini_u", "--r", "1", "--s", "1", "--t", "1", "--n-max", "200"]).unwrap();
        assert_eq!(out.exit_code, 0);
        assert_eq!(out.record.results["total"], 1);
    }

    #[test]
    fn verify_flags_validated() {
        let e = run(&["verify", "--n-min", "5", "--n-max", "2"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = run(&["verify", "--identity", "nope"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = run(&["verify", "--tol-rel", "0"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }
}
