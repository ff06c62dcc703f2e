use std::path::Path;
use std::time::Instant;

use hass_core::access::{min_set_size, random_structure};
use hass_core::ases::encode_with_rng;
use hass_core::bbrpoly::{build_polynomial, ModulusSpec};
use hass_core::counting::{s_of_n_gf, s_of_n_sum};
use hass_core::numth::{gen_group_params, random_range};
use hass_core::oracle::{
    cover_pair_count, exhaustive_coalitions, exhaustive_recon, naive_polynomial_contract, naive_set_intersections,
    OracleReport,
};
use hass_core::scheme::share;
use hass_core::setsys::build_set_system;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde_json::{json, Value};

use crate::{CliError, Grid, Outcome};

/// Fixed so that reruns check the same instances.
const GRID_SEED: u64 = 0x6861_7373;
const PRIME_BITS: u32 = 8;

struct Plan {
    count_n: u64,
    poly: Vec<(u64, usize)>,
    setsys_n: usize,
    ases_ell: usize,
    ases_per_ell: usize,
    scheme_ell: usize,
    scheme_per_ell: usize,
}

impl Plan {
    fn for_grid(grid: Grid) -> Self {
        match grid {
            Grid::Default => Self {
                count_n: 8,
                poly: (2..=10).map(|n| (6, n)).chain((2..=6).map(|n| (30, n))).collect(),
                setsys_n: 5,
                ases_ell: 6,
                ases_per_ell: 4,
                scheme_ell: 5,
                scheme_per_ell: 3,
            },
            Grid::Quick => Self {
                count_n: 4,
                poly: (2..=5).map(|n| (6, n)).collect(),
                setsys_n: 3,
                ases_ell: 3,
                ases_per_ell: 2,
                scheme_ell: 3,
                scheme_per_ell: 1,
            },
        }
    }
}

fn timed(f: impl FnOnce() -> Result<OracleReport, CliError>) -> Result<OracleReport, CliError> {
    let start = Instant::now();
    let mut report = f()?;
    report.elapsed_us = Some(start.elapsed().as_micros() as u64);
    Ok(report)
}

fn counting(n: u64) -> Result<OracleReport, CliError> {
    let sum = s_of_n_sum(n)?;
    let gf = s_of_n_gf(n)?;
    let pairs = cover_pair_count(n)?;
    let mut report = OracleReport::new("counting", format!("n={n}"));
    if sum != gf || sum != pairs {
        report.fail(format!("sum={sum} gf={gf} pairs={pairs}"));
    }
    Ok(report.certify(format!("S={sum}")))
}

pub fn all(grid: Grid, out: Option<&Path>) -> Result<Outcome, CliError> {
    let plan = Plan::for_grid(grid);
    let mut rng = ChaCha20Rng::seed_from_u64(GRID_SEED);
    let mut reports = Vec::new();
    for n in 1..=plan.count_n {
        reports.push(timed(|| counting(n))?);
    }
    for &(m, n) in &plan.poly {
        reports.push(timed(|| {
            let poly = build_polynomial(n, &ModulusSpec::new(m)?)?;
            Ok(naive_polynomial_contract(&poly)?)
        })?);
    }
    for n in 2..=plan.setsys_n {
        reports.push(timed(|| {
            let ss = build_set_system(n, &ModulusSpec::new(6)?, true)?;
            Ok(naive_set_intersections(&ss)?)
        })?);
    }
    for ell in 2..=plan.ases_ell {
        let group = gen_group_params(ell, PRIME_BITS, &mut rng)?;
        for _ in 0..plan.ases_per_ell {
            let omega = loop {
                let candidate = rng.gen_range(1u32..1 << ell);
                if candidate.count_ones() as usize >= min_set_size(ell) {
                    break candidate;
                }
            };
            let inst = encode_with_rng(&group, ell, omega, &mut rng, &Default::default())?;
            reports.push(timed(|| Ok(exhaustive_coalitions(&inst)?))?);
        }
    }
    for ell in 2..=plan.scheme_ell {
        let token_group = gen_group_params(ell, PRIME_BITS, &mut rng)?;
        let share_group = gen_group_params(ell, PRIME_BITS, &mut rng)?;
        for _ in 0..plan.scheme_per_ell {
            let access = random_structure(&mut rng, ell, 3)?;
            let k = random_range(&mut rng, &BigUint::from(1u32), share_group.q());
            let dealing = share(&token_group, &share_group, &access, &k, rng.gen())?;
            reports.push(timed(|| Ok(exhaustive_recon(&dealing.bundle, &access, &k)?))?);
        }
    }
    let passed = reports.iter().all(|r| r.passed);
    let failed = reports.iter().filter(|r| !r.passed).count();
    let rows: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "check": r.check,
                "instance": r.instance,
                "passed": r.passed,
                "witness": r.witness,
                "elapsed_us": r.elapsed_us,
            })
        })
        .collect();
    let text = serde_json::to_string_pretty(&rows).expect("serializable") + "\n";
    let summary = match out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            json!({"out": path.display().to_string(), "checks": reports.len(), "failed": failed})
        }
        None => Value::Null,
    };
    Ok(Outcome {
        passed,
        body: out.is_none().then_some(text),
        summary,
    })
}
