use hass_core::counting::{growth_bound_check, max_share_elements, n_k, s_of_n_gf, s_of_n_sum};
use hass_core::oracle::{cover_pair_count, FORMULA_MAX_N};
use serde::Serialize;
use serde_json::{json, Value};

use super::count_value;
use crate::{CliError, CountArgs, Outcome, TableFormat};

/// Largest `n` the table accepts.
pub const MAX_N: u64 = 200;

#[derive(Debug, Serialize)]
struct Row {
    n: u64,
    /// `N_k` for `k = 1..=n`, space separated.
    n_k: String,
    s_sum: String,
    s_gf: String,
    /// Empty when `n` is beyond the oracle's range.
    cover_pairs: String,
    agree: bool,
    /// Empty for `n <= 2`, where the bound does not apply.
    growth_bound: String,
}

pub fn run(args: &CountArgs) -> Result<Outcome, CliError> {
    if args.n_max == 0 || args.n_max > MAX_N {
        return Err(CliError::usage(format!("--n-max must be in 1..={MAX_N}")));
    }
    let mut rows = Vec::new();
    let mut passed = true;
    for n in 1..=args.n_max {
        let parts = (1..=n).map(|k| n_k(n, k).map(|v| v.to_string())).collect::<Result<Vec<_>, _>>()?;
        let sum = s_of_n_sum(n)?;
        let gf = s_of_n_gf(n)?;
        let pairs = if n <= FORMULA_MAX_N { Some(cover_pair_count(n)?) } else { None };
        let agree = sum == gf && pairs.as_ref().map_or(true, |p| *p == sum);
        let growth = if n >= 3 { Some(growth_bound_check(n)?) } else { None };
        passed &= agree && growth.unwrap_or(true);
        rows.push(Row {
            n,
            n_k: parts.join(" "),
            s_sum: sum.to_string(),
            s_gf: gf.to_string(),
            cover_pairs: pairs.map(|p| p.to_string()).unwrap_or_default(),
            agree,
            growth_bound: growth.map(|g| g.to_string()).unwrap_or_default(),
        });
    }
    let table = match args.format {
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &rows {
                w.serialize(row).map_err(|e| CliError::input(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::input(e.to_string()))?;
            String::from_utf8(bytes).expect("csv output is utf-8")
        }
        TableFormat::Json => serde_json::to_string_pretty(&rows).expect("serializable") + "\n",
    };
    let mut summary = serde_json::Map::new();
    if let Some(path) = &args.out {
        std::fs::write(path, &table).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        summary.insert("out".into(), super::path_value(path));
        summary.insert("rows".into(), json!(rows.len()));
        summary.insert("agree".into(), json!(passed));
    }
    if let Some(ell) = args.ell {
        let c = max_share_elements(ell)?;
        summary.insert(
            "share_accounting".into(),
            json!({
                "ell": ell,
                "elements_per_party": count_value(&c.elements),
                "reference": c.reference,
                "ratio": c.ratio,
            }),
        );
    }
    Ok(Outcome {
        passed,
        body: args.out.is_none().then_some(table),
        summary: if summary.is_empty() { Value::Null } else { Value::Object(summary) },
    })
}
