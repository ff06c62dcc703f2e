use std::path::Path;

use hass_core::access::{parties_of, require_valid};
use hass_core::ases::EncodeOptions;
use hass_core::numth::{gen_group_params, GroupParams};
use hass_core::scheme::{recon_strict, recon_with_budget, share_with_options};
use hass_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde_json::{json, Map};

use super::{hex, path_value};
use crate::formats::{
    read_json, write_json, AccessFile, AuditFile, BundleFile, EncodingAudit, Hex, ParamsFile, RunAudit, SchemeAudit,
};
use crate::{coalition_arg, resolve_seed, Budgets, CliError, Outcome};

/// Streams for generated groups, disjoint from the per-run dealer streams.
const TOKEN_GROUP_STREAM: u64 = u64::MAX;
const SHARE_GROUP_STREAM: u64 = u64::MAX - 1;

pub struct ShareRequest<'a> {
    pub access: &'a Path,
    pub secret_hex: &'a str,
    pub seed: Option<u64>,
    pub params: Option<&'a Path>,
    pub share_params: Option<&'a Path>,
    pub prime_bits: u32,
    pub out: &'a Path,
    pub audit: Option<&'a Path>,
}

fn group_for(path: Option<&Path>, ell: usize, prime_bits: u32, seed: u64, stream: u64) -> Result<GroupParams, CliError> {
    match path {
        Some(p) => read_json::<ParamsFile>(p)?.to_group(),
        None => {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            Ok(gen_group_params(ell, prime_bits, &mut rng)?)
        }
    }
}

pub fn share(req: &ShareRequest<'_>, budgets: &Budgets) -> Result<Outcome, CliError> {
    let access = read_json::<AccessFile>(req.access)?.to_access()?;
    require_valid(&access)?;
    let k = Hex::parse(req.secret_hex).map_err(CliError::usage)?.0;
    let (seed, generated) = resolve_seed(req.seed);
    let ell = access.ell();
    let token_group = group_for(req.params, ell, req.prime_bits, seed, TOKEN_GROUP_STREAM)?;
    let share_group = group_for(req.share_params, ell, req.prime_bits, seed, SHARE_GROUP_STREAM)?;
    if k >= *share_group.q() {
        return Err(CliError::input(format!(
            "secret must be below the share modulus {:x}",
            share_group.q()
        )));
    }
    let options = EncodeOptions {
        retry_bound: budgets.retries,
        coalition_budget: budgets.parties,
        ..EncodeOptions::default()
    };
    let dealing = share_with_options(&token_group, &share_group, &access, &k, seed, &options)?;
    write_json(req.out, &BundleFile::from(&dealing.bundle))?;
    let mut summary = Map::new();
    summary.insert("bundle_out".into(), path_value(req.out));
    summary.insert("parties".into(), json!(ell));
    summary.insert("runs".into(), json!(dealing.bundle.runs.len()));
    summary.insert("elements_per_party".into(), json!(dealing.bundle.elements_per_party()));
    summary.insert("q".into(), hex(&dealing.bundle.q));
    summary.insert("qprime".into(), hex(&dealing.bundle.qprime));
    summary.insert("seed_generated".into(), json!(generated));
    if let Some(path) = req.audit {
        let audit = SchemeAudit {
            k: Hex(k.clone()),
            runs: dealing
                .audit
                .iter()
                .map(|r| RunAudit {
                    run_id: r.run_id,
                    tokens: EncodingAudit::from(&r.token_instance),
                    shares: EncodingAudit::from(&r.share_instance),
                    blinding: r.blinding.iter().cloned().map(Hex).collect(),
                })
                .collect(),
        };
        write_json(path, &AuditFile::secret(audit).with_seed(seed))?;
        summary.insert("audit_out".into(), path_value(path));
    }
    Ok(Outcome::ok(summary.into()))
}

pub fn recon(path: &Path, coalition: &[usize], strict: bool, budgets: &Budgets) -> Result<Outcome, CliError> {
    let bundle = read_json::<BundleFile>(path)?.to_bundle()?;
    let mask = coalition_arg(coalition)?;
    let members = parties_of(mask);
    if let Some(&p) = members.iter().find(|&&p| p > bundle.ell) {
        return Err(CliError::usage(format!("party {p} outside 1..={}", bundle.ell)));
    }
    let result = if strict {
        recon_strict(&bundle, mask)
    } else {
        recon_with_budget(&bundle, mask, budgets.parties)
    };
    match result {
        Ok(r) => Ok(Outcome::ok(json!({
            "coalition": members,
            "authorized": true,
            "secret_hex": format!("{:x}", r.secret),
            "run_id": r.run_id,
            "witness": r.witness,
        }))),
        Err(Error::NotAuthorized) => Ok(Outcome::new(
            false,
            json!({"coalition": members, "authorized": false}),
        )),
        Err(e) => Err(e.into()),
    }
}
