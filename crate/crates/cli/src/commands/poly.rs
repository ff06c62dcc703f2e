use std::path::Path;

use hass_core::bbrpoly::{build_polynomial, verify_contract, ModulusSpec};
use hass_core::oracle::naive_polynomial_contract;
use hass_core::Error;
use serde_json::{json, Map, Value};

use super::path_value;
use crate::formats::{read_json, write_json, PolynomialFile};
use crate::{Budgets, CliError, Outcome};

/// Largest `n` the brute-force cross-check covers.
const ORACLE_MAX_N: usize = 16;

pub fn build(m: u64, n: usize, out: &Path, budgets: &Budgets) -> Result<Outcome, CliError> {
    if n > budgets.poly_n {
        return Err(Error::BudgetExceeded {
            what: "polynomial n",
            requested: n as u64,
            limit: budgets.poly_n as u64,
        }
        .into());
    }
    let spec = ModulusSpec::new(m)?;
    let poly = build_polynomial(n, &spec)?;
    write_json(out, &PolynomialFile::from(&poly))?;
    Ok(Outcome::ok(json!({
        "out": path_value(out),
        "n": n,
        "m": m,
        "terms": poly.terms().len(),
        "degree": poly.degree(),
        "degree_budget": poly.degree_budget(),
    })))
}

pub fn eval(path: &Path, z: &str) -> Result<Outcome, CliError> {
    let poly = read_json::<PolynomialFile>(path)?.to_polynomial()?;
    let bits = z
        .chars()
        .map(|c| match c {
            '0' => Ok(0u8),
            '1' => Ok(1u8),
            _ => Err(CliError::usage(format!("--z must be a bit string, found {c:?}"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let e = poly.eval(&bits)?;
    let residues: Map<String, Value> = e.residues.iter().map(|(pp, r)| (pp.to_string(), json!(r))).collect();
    Ok(Outcome::ok(json!({
        "z": z,
        "value": e.value,
        "zero": e.value == 0,
        "residues": residues,
    })))
}

pub fn verify(path: &Path, budgets: &Budgets) -> Result<Outcome, CliError> {
    let poly = read_json::<PolynomialFile>(path)?.to_polynomial()?;
    let report = verify_contract(&poly, budgets.poly_n)?;
    let oracle = if poly.n() <= ORACLE_MAX_N {
        Some(naive_polynomial_contract(&poly)?)
    } else {
        None
    };
    let witnesses: Vec<Value> = report
        .witnesses
        .iter()
        .map(|w| {
            let input: String = w.input.iter().map(|b| char::from(b'0' + b)).collect();
            json!({"z": input, "value": w.value, "violation": format!("{:?}", w.violation)})
        })
        .collect();
    let oracle_passed = oracle.as_ref().map_or(true, |o| o.passed);
    Ok(Outcome::new(
        report.passed() && oracle_passed,
        json!({
            "n": report.n,
            "m": report.m,
            "evaluations": report.evaluations,
            "zero_set_ok": report.zero_set_ok,
            "residues_ok": report.residues_ok,
            "degree": report.degree,
            "degree_budget": report.degree_budget,
            "growth_reference": report.growth_reference,
            "oracle": match &oracle {
                Some(o) => json!({"passed": o.passed, "witness": o.witness}),
                None => json!("skipped"),
            },
            "witnesses": witnesses,
        }),
    ))
}
