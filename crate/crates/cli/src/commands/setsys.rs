use std::path::Path;

use hass_core::bbrpoly::ModulusSpec;
use hass_core::covvec::family_from_sets;
use hass_core::setsys::{
    build_set_system_with_budget, uniform_subsystem, verify_lemma3, verify_theorem1, ConditionReport, SetWitness,
};
use num_bigint::BigUint;
use serde_json::{json, Map, Value};

use super::{count_value, path_value};
use crate::formats::{to_json, write_json, VectorsFile};
use crate::{Budgets, CliError, Outcome};

fn witness(w: &SetWitness) -> Value {
    json!({"sets": w.sets, "value": w.value, "reason": w.reason})
}

fn condition(c: &ConditionReport) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("passed".into(), json!(c.passed()));
    m.insert("checked".into(), json!(c.checked));
    m.insert("violations".into(), json!(c.violations));
    m.insert("witnesses".into(), c.witnesses.iter().map(witness).collect());
    m
}

pub fn build(
    m: u64,
    n: usize,
    verify: bool,
    dedupe: bool,
    out: Option<&Path>,
    vectors_out: Option<&Path>,
    budgets: &Budgets,
) -> Result<Outcome, CliError> {
    let spec = ModulusSpec::new(m)?;
    let ss = build_set_system_with_budget(n, &spec, dedupe, budgets.setsys_n)?;
    let mut report = Map::new();
    report.insert("n".into(), json!(n));
    report.insert("m".into(), json!(m));
    report.insert("h".into(), json!(ss.h()));
    report.insert("index_count".into(), count_value(ss.index_count()));
    report.insert("distinct_count".into(), json!(ss.distinct_count()));
    report.insert("sets".into(), json!(ss.sets().len()));
    report.insert("classes".into(), json!(ss.classes().len()));
    let mut passed = true;
    if verify {
        let t = verify_theorem1(&ss);
        let mut c3 = condition(&t.c3);
        c3.insert("nested_pairs".into(), json!(t.nested_pairs));
        c3.insert("non_nested_pairs".into(), json!(t.non_nested_pairs));
        let b_entries = verify_lemma3(&ss)?;
        let uniform = uniform_subsystem(&ss)?.verify();
        // the nested-pair clause is reported but not gating
        passed = t.c2.passed() && t.c4.passed() && b_entries.passed() && uniform.passed();
        report.insert(
            "conditions".into(),
            json!({
                "pairs": t.pairs,
                "c2": condition(&t.c2),
                "c3": c3,
                "c4": condition(&t.c4),
                "b_entries": {
                    "passed": b_entries.passed(),
                    "scope": format!("{:?}", b_entries.scope),
                    "cells": b_entries.cells,
                    "diagonal_count": b_entries.diagonal_count,
                    "diagonal_divisible": b_entries.diagonal_divisible,
                    "cover_iff_divisible_violations": b_entries.cover_iff_divisible_violations,
                    "below_diagonal_violations": b_entries.below_diagonal_violations,
                    "witnesses": b_entries.witnesses.iter().map(|w| json!({
                        "x": w.x, "y": w.y, "count": w.count, "reason": w.reason,
                    })).collect::<Vec<_>>(),
                },
                "uniform": {
                    "passed": uniform.passed(),
                    "sets": uniform.sets,
                    "size": uniform.size,
                    "pairs": uniform.pairs,
                    "zero_intersections": uniform.zero_intersections,
                    "witnesses": uniform.witnesses.iter().map(witness).collect::<Vec<_>>(),
                },
            }),
        );
    }
    if let Some(path) = vectors_out {
        let vectors = family_from_sets(&ss)?;
        write_json(path, &VectorsFile::from_vectors(ss.h(), &BigUint::from(m), &vectors))?;
        report.insert("vectors_out".into(), path_value(path));
    }
    let report = Value::Object(report);
    if let Some(path) = out {
        std::fs::write(path, to_json(&report)).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    }
    Ok(Outcome::new(passed, report))
}
