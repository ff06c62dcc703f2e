//! Subcommand implementations.

mod ases;
mod count;
mod oracle;
mod poly;
mod scheme;
mod setsys;
mod setup;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde_json::Value;

use crate::{AsesCommand, Budgets, CliError, Command, OracleCommand, Outcome, PolyCommand, SchemeCommand, SetsysCommand};

pub fn dispatch(cmd: &Command, budgets: &Budgets) -> Result<Outcome, CliError> {
    match cmd {
        Command::Setup(args) => setup::run(args),
        Command::Count(args) => count::run(args),
        Command::Poly(PolyCommand::Build { m, n, out }) => poly::build(*m, *n, out, budgets),
        Command::Poly(PolyCommand::Eval { poly, z }) => poly::eval(poly, z),
        Command::Poly(PolyCommand::Verify { poly }) => poly::verify(poly, budgets),
        Command::Setsys(SetsysCommand::Build {
            m,
            n,
            verify,
            dedupe,
            out,
            vectors_out,
        }) => setsys::build(*m, *n, *verify, *dedupe, out.as_deref(), vectors_out.as_deref(), budgets),
        Command::Ases(AsesCommand::Encode {
            params,
            omega,
            parties,
            seed,
            run_id,
            out,
            emit_secret_audit,
        }) => ases::encode(
            &ases::EncodeRequest {
                params,
                omega,
                parties: *parties,
                seed: *seed,
                run_id: *run_id,
                out,
                audit: emit_secret_audit.as_deref(),
            },
            budgets,
        ),
        Command::Ases(AsesCommand::Hsver { tokens, coalition, strict }) => {
            ases::hsver(tokens, coalition, *strict, budgets)
        }
        Command::Scheme(SchemeCommand::Share {
            access,
            secret_hex,
            seed,
            params,
            share_params,
            prime_bits,
            out,
            emit_secret_audit,
        }) => scheme::share(
            &scheme::ShareRequest {
                access,
                secret_hex,
                seed: *seed,
                params: params.as_deref(),
                share_params: share_params.as_deref(),
                prime_bits: *prime_bits,
                out,
                audit: emit_secret_audit.as_deref(),
            },
            budgets,
        ),
        Command::Scheme(SchemeCommand::Recon { bundle, coalition, strict }) => {
            scheme::recon(bundle, coalition, *strict, budgets)
        }
        Command::Oracle(OracleCommand::All { grid, out }) => oracle::all(*grid, out.as_deref()),
    }
}

/// Lowercase hex, as in the file formats.
fn hex(v: &BigUint) -> Value {
    Value::String(format!("{v:x}"))
}

/// A JSON number when it fits in `u64`, else a decimal string.
fn count_value(v: &BigUint) -> Value {
    match v.to_u64() {
        Some(x) => Value::from(x),
        None => Value::String(v.to_string()),
    }
}

fn path_value(p: &std::path::Path) -> Value {
    Value::String(p.display().to_string())
}
