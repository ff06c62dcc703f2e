use hass_core::numth::gen_group_params;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde_json::json;

use super::{hex, path_value};
use crate::formats::{write_json, ParamsFile};
use crate::{resolve_seed, CliError, Outcome, SetupArgs};

pub fn run(args: &SetupArgs) -> Result<Outcome, CliError> {
    let (seed, generated) = resolve_seed(args.seed);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let group = gen_group_params(args.parties, args.prime_bits, &mut rng)?;
    write_json(&args.out, &ParamsFile::from(&group))?;
    Ok(Outcome::ok(json!({
        "out": path_value(&args.out),
        "eta": group.eta(),
        "q": hex(group.q()),
        "q_bits": group.q().bits(),
        "m_squarefree": group.is_squarefree(),
        "seed": seed,
        "seed_generated": generated,
    })))
}
