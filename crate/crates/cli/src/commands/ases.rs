use std::path::Path;

use hass_core::ases::{encode_with_rng, hsver_monotone, hsver_strict, EncodeOptions};
use hass_core::scheme::derived_rng;
use serde_json::{json, Map};

use super::{hex, path_value};
use crate::formats::{read_json, write_json, AuditFile, EncodingAudit, ParamsFile, PartyToken, TokensFile};
use crate::{coalition_arg, resolve_seed, Budgets, CliError, Outcome};

pub struct EncodeRequest<'a> {
    pub params: &'a Path,
    pub omega: &'a [usize],
    pub parties: Option<usize>,
    pub seed: Option<u64>,
    pub run_id: u32,
    pub out: &'a Path,
    pub audit: Option<&'a Path>,
}

pub fn encode(req: &EncodeRequest<'_>, budgets: &Budgets) -> Result<Outcome, CliError> {
    let group = read_json::<ParamsFile>(req.params)?.to_group()?;
    let ell = req.parties.unwrap_or(group.eta());
    let omega = coalition_arg(req.omega)?;
    let (seed, generated) = resolve_seed(req.seed);
    let options = EncodeOptions {
        retry_bound: budgets.retries,
        coalition_budget: budgets.parties,
        ..EncodeOptions::default()
    };
    // the token stream of run `run_id`, as in a full dealing
    let mut rng = derived_rng(seed, u64::from(req.run_id), 0);
    let inst = encode_with_rng(&group, ell, omega, &mut rng, &options)?;
    let tokens = TokensFile {
        q: inst.q().into(),
        run_id: req.run_id,
        parties: inst
            .public_tokens()
            .into_iter()
            .map(|(id, t)| PartyToken { id, token: t.into() })
            .collect(),
    };
    write_json(req.out, &tokens)?;
    let mut summary = Map::new();
    summary.insert("tokens_out".into(), path_value(req.out));
    summary.insert("parties".into(), json!(ell));
    summary.insert("run_id".into(), json!(req.run_id));
    summary.insert("q".into(), hex(inst.q()));
    summary.insert("seed_generated".into(), json!(generated));
    if let Some(path) = req.audit {
        write_json(path, &AuditFile::secret(EncodingAudit::from(&inst)).with_seed(seed))?;
        summary.insert("audit_out".into(), path_value(path));
    }
    Ok(Outcome::ok(summary.into()))
}

pub fn hsver(path: &Path, coalition: &[usize], strict: bool, budgets: &Budgets) -> Result<Outcome, CliError> {
    let file: TokensFile = read_json(path)?;
    let tokens = file.tokens()?;
    let mask = coalition_arg(coalition)?;
    let mut members: Vec<usize> = coalition.to_vec();
    members.sort_unstable();
    members.dedup();
    if let Some(&p) = members.iter().find(|&&p| p > tokens.len()) {
        return Err(CliError::usage(format!("party {p} outside 1..={}", tokens.len())));
    }
    debug_assert_eq!(mask.count_ones() as usize, members.len());
    let q = &file.q.0;
    let (authorized, witness) = if strict {
        let selected: Vec<_> = members.iter().map(|&p| tokens[p - 1].clone()).collect();
        let ok = hsver_strict(&selected, q);
        (ok, ok.then(|| members.clone()))
    } else {
        let pairs: Vec<_> = members.iter().map(|&p| (p, tokens[p - 1].clone())).collect();
        let found = hsver_monotone(&pairs, q, budgets.parties)?;
        (found.is_some(), found)
    };
    Ok(Outcome::new(
        authorized,
        json!({
            "coalition": members,
            "mode": if strict { "strict" } else { "monotone" },
            "authorized": authorized,
            "witness": witness,
        }),
    ))
}
