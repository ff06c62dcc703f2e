//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero on any
//! failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use hass_cli::formats::{
    read_json, to_json, AccessFile, AuditFile, BundleFile, EncodingAudit, ParamsFile, PolynomialFile, TokensFile,
    VectorsFile,
};
use hass_core::access::{min_set_size, parties_of, random_structure, AccessStructure};
use hass_core::ases::{encode, encode_with_rng, hsver_strict, AsesInstance, EncodeOptions};
use hass_core::bbrpoly::{build_polynomial, verify_contract, ModulusSpec};
use hass_core::counting::{growth_bound_check, max_share_elements, s_of_n_gf, s_of_n_sum};
use hass_core::covvec::{family_from_sets, verify_covering_family};
use hass_core::numth::{gen_group_params, group_from_primes, random_range, GroupParams};
use hass_core::oracle::{
    cover_pair_count, exhaustive_coalitions, exhaustive_recon, naive_polynomial_contract, naive_set_intersections,
};
use hass_core::scheme::{recon, share, DealerRun, Dealing};
use hass_core::setsys::{build_set_system, verify_lemma3, verify_theorem1, CellScope};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|err| err.to_string())
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn six() -> ModulusSpec {
    ModulusSpec::new(6).unwrap()
}

fn polynomial_contract() -> Check {
    let mut evaluations = 0;
    for n in 2..=10 {
        let poly = e(build_polynomial(n, &six()))?;
        let report = e(verify_contract(&poly, 20))?;
        ensure(report.zero_set_ok && report.residues_ok, || format!("n={n}: {:?}", report.witnesses))?;
        let oracle = e(naive_polynomial_contract(&poly))?;
        ensure(oracle.passed, || format!("n={n} oracle: {:?}", oracle.witness))?;
        evaluations += report.evaluations;
    }
    Ok(format!("m=6, n=2..10, {evaluations} evaluations"))
}

fn counting_triple() -> Check {
    for n in 1..=5 {
        let (a, b, c) = (e(s_of_n_sum(n))?, e(s_of_n_gf(n))?, e(cover_pair_count(n))?);
        ensure(a == b && b == c, || format!("n={n}: sum={a} gf={b} oracle={c}"))?;
    }
    for (n, s) in [(2, 6u64), (3, 147), (4, 6940)] {
        ensure(e(s_of_n_sum(n))? == big(s), || format!("S({n}) != {s}"))?;
    }
    Ok("n=1..5 agree; S(2)=6, S(3)=147, S(4)=6940".into())
}

fn growth_bound() -> Check {
    for n in 3..=6 {
        ensure(e(growth_bound_check(n))?, || format!("S({n})^2 <= {n}^{}", 3 * n))?;
    }
    Ok("S(n)^2 > n^(3n) for n=3..6".into())
}

fn set_system_conditions() -> Check {
    let mut notes = Vec::new();
    for n in 2..=5 {
        let ss = e(build_set_system(n, &six(), true))?;
        let t = verify_theorem1(&ss);
        ensure(t.c2.passed(), || format!("n={n} size condition: {:?}", t.c2.witnesses))?;
        ensure(t.c4.passed(), || format!("n={n} residue condition: {:?}", t.c4.witnesses))?;
        notes.push(format!(
            "n={n}: {} sets, nested {} / non-nested {}, intersection violations {}",
            t.sets, t.nested_pairs, t.non_nested_pairs, t.c3.violations
        ));
    }
    Ok(notes.join("; "))
}

fn lemma3() -> Check {
    let mut cells = 0;
    for n in 2..=4 {
        let ss = e(build_set_system(n, &six(), true))?;
        let r = e(verify_lemma3(&ss))?;
        ensure(r.scope == CellScope::FullStrings, || format!("n={n} was not exhaustive"))?;
        ensure(r.passed(), || format!("n={n}: {:?}", r.witnesses))?;
        cells += r.cells;
    }
    Ok(format!("n=2..4, {cells} cells over all string pairs"))
}

fn covering_vectors() -> Check {
    let mut pairs = 0;
    for n in 2..=5 {
        let ss = e(build_set_system(n, &six(), true))?;
        let oracle = e(naive_set_intersections(&ss))?;
        ensure(oracle.passed, || format!("n={n}: {:?}", oracle.witness))?;
        let report = e(verify_covering_family(&e(family_from_sets(&ss))?, None))?;
        ensure(report.passed(), || format!("n={n}: {:?}", report.witnesses))?;
        pairs += report.pairs;
    }
    Ok(format!("m=6, n=2..5, {pairs} distinct pairs"))
}

fn toy_group() -> GroupParams {
    group_from_primes(&[big(2), big(3), big(5)]).unwrap()
}

fn ases_instances() -> Check {
    let mut rng = ChaCha20Rng::seed_from_u64(500);
    let mut count = 0;
    for ell in 2..=6usize {
        let group = e(gen_group_params(ell, 16, &mut rng))?;
        let omegas: Vec<u32> = (1u32..1 << ell).filter(|w| w.count_ones() as usize >= min_set_size(ell)).collect();
        for i in 0..100 {
            let omega = omegas[i % omegas.len()];
            let inst = e(encode(&group, ell, omega, rng.gen()))?;
            let report = e(exhaustive_coalitions(&inst))?;
            ensure(report.passed, || format!("ell={ell} omega={:?}: {:?}", parties_of(omega), report.witness))?;
            count += 1;
        }
    }
    let toy = e(AsesInstance::from_parts(toy_group(), 0b011, big(3), vec![big(7), big(23), big(11)], vec![(3, 1)]))?;
    ensure(toy.tokens() == [big(17), big(11), big(13)], || format!("toy tokens {:?}", toy.tokens()))?;
    ensure(hsver_strict(&[big(17), big(11)], &big(31)), || "17*11 != 1 mod 31".into())?;
    Ok(format!("{count} instances over ell=2..6; toy tokens (17,11,13)"))
}

fn scheme_bundles() -> Check {
    let mut rng = ChaCha20Rng::seed_from_u64(200);
    let mut count = 0;
    for ell in 2..=5usize {
        let tg = e(gen_group_params(ell, 16, &mut rng))?;
        let sg = e(gen_group_params(ell, 16, &mut rng))?;
        for _ in 0..50 {
            let access = e(random_structure(&mut rng, ell, 3))?;
            let k = random_range(&mut rng, &big(1), sg.q());
            let dealing = e(share(&tg, &sg, &access, &k, rng.gen()))?;
            let report = e(exhaustive_recon(&dealing.bundle, &access, &k))?;
            ensure(report.passed, || format!("ell={ell}: {:?}", report.witness))?;
            count += 1;
        }
    }
    let tokens = e(AsesInstance::from_parts(toy_group(), 0b011, big(3), vec![big(7), big(23), big(11)], vec![(3, 1)]))?;
    let shares = e(AsesInstance::from_parts(toy_group(), 0b011, big(3), vec![big(11), big(19), big(7)], vec![(3, 1)]))?;
    let dealing = e(Dealing::from_runs(vec![e(DealerRun::new(0, tokens, shares, vec![big(4), big(18)]))?]))?;
    let run = &dealing.bundle.runs[0];
    ensure(run.shares == [big(21), big(30), big(17)], || format!("toy shares {:?}", run.shares))?;
    let secret = e(recon(&dealing.bundle, 0b011))?.secret;
    ensure(secret == big(10), || format!("toy recon gave {secret}"))?;
    Ok(format!("{count} bundles over ell=2..5; toy shares (21,30,17) recover 10"))
}

fn k_independence() -> Check {
    let mut rng = ChaCha20Rng::seed_from_u64(9);
    let mut compared = 0;
    for ell in 2..=6usize {
        let tg = e(gen_group_params(ell, 16, &mut rng))?;
        let sg = e(gen_group_params(ell, 16, &mut rng))?;
        let access = e(random_structure(&mut rng, ell, 3))?;
        let seed = rng.gen();
        let (k1, k2) = (random_range(&mut rng, &big(1), sg.q()), random_range(&mut rng, &big(1), sg.q()));
        let a = BundleFile::from(&e(share(&tg, &sg, &access, &k1, seed))?.bundle);
        let b = BundleFile::from(&e(share(&tg, &sg, &access, &k2, seed))?.bundle);
        for ((ra, rb), &omega) in a.runs.iter().zip(&b.runs).zip(access.minimal_sets()) {
            ensure(to_json(&ra.tokens) == to_json(&rb.tokens), || format!("ell={ell}: tokens differ"))?;
            for (sa, sb) in ra.shares.iter().zip(&rb.shares) {
                if omega >> (sa.id - 1) & 1 == 0 {
                    ensure(to_json(sa) == to_json(sb), || format!("ell={ell}: share of party {} differs", sa.id))?;
                    compared += 1;
                }
            }
        }
    }
    Ok(format!("tokens identical, {compared} outside-omega shares identical"))
}

fn share_accounting() -> Check {
    let ell = 10;
    let sets: Vec<Vec<usize>> = (0u32..1 << ell)
        .filter(|s| s.count_ones() == 5)
        .map(parties_of)
        .collect();
    let access = e(AccessStructure::new(ell, &sets))?;
    let mut rng = ChaCha20Rng::seed_from_u64(10);
    let tg = e(gen_group_params(ell, 16, &mut rng))?;
    let sg = e(gen_group_params(ell, 16, &mut rng))?;
    let dealing = e(share(&tg, &sg, &access, &big(42), 10))?;
    let elements = dealing.bundle.elements_per_party();
    ensure(elements == 2 * sets.len(), || format!("{elements} != 2 * {}", sets.len()))?;
    let c = e(max_share_elements(ell as u64))?;
    ensure(c.elements == big(elements as u64), || format!("accounting says {}", c.elements))?;
    ensure((c.ratio - 1.0).abs() < 0.1, || format!("ratio {}", c.ratio))?;
    Ok(format!("ell=10: {elements} elements vs {:.1}, ratio {:.3}", c.reference, c.ratio))
}

fn determinism_and_serialization() -> Check {
    let dir = e(tempfile::tempdir())?;
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    let tg = e(gen_group_params(4, 16, &mut rng))?;
    let sg = e(gen_group_params(4, 16, &mut rng))?;
    let access = e(AccessStructure::new(4, &[vec![1, 2], vec![3, 4], vec![1, 3]]))?;

    // seeded library flows
    let dealing = e(share(&tg, &sg, &access, &big(77), 5))?;
    let again = e(share(&tg, &sg, &access, &big(77), 5))?;
    let bundle_json = to_json(&BundleFile::from(&dealing.bundle));
    ensure(bundle_json == to_json(&BundleFile::from(&again.bundle)), || "bundles differ".into())?;
    let opts = EncodeOptions::default();
    let i1 = e(encode_with_rng(&tg, 4, 0b0111, &mut ChaCha20Rng::seed_from_u64(3), &opts))?;
    let i2 = e(encode_with_rng(&tg, 4, 0b0111, &mut ChaCha20Rng::seed_from_u64(3), &opts))?;
    ensure(
        to_json(&AuditFile::secret(EncodingAudit::from(&i1))) == to_json(&AuditFile::secret(EncodingAudit::from(&i2))),
        || "encodings differ".into(),
    )?;

    // seeded command-line flows
    let mut outputs = Vec::new();
    // identical relative names, so path-bearing reports compare equal too
    for round in 0..2 {
        let round_dir = dir.path().join(round.to_string());
        std::fs::create_dir(&round_dir).map_err(|err| err.to_string())?;
        std::env::set_current_dir(&round_dir).map_err(|err| err.to_string())?;
        let p = |name: &str| name.to_string();
        std::fs::write(p("access.json"), to_json(&AccessFile { parties: 4, minimal_sets: access.minimal_sets_as_parties() }))
            .map_err(|err| err.to_string())?;
        let runs: [Vec<String>; 5] = [
            vec!["setup".into(), "--parties".into(), "4".into(), "--seed".into(), "8".into(), "--out".into(), p("params.json")],
            vec!["poly".into(), "build".into(), "--m".into(), "6".into(), "--n".into(), "6".into(), "--out".into(), p("poly.json")],
            vec![
                "ases".into(), "encode".into(), "--params".into(), p("params.json"), "--omega".into(), "1,2,3".into(),
                "--seed".into(), "4".into(), "--out".into(), p("tokens.json"), "--emit-secret-audit".into(), p("audit.json"),
            ],
            vec![
                "scheme".into(), "share".into(), "--access".into(), p("access.json"), "--secret-hex".into(), "4d".into(),
                "--seed".into(), "6".into(), "--out".into(), p("bundle.json"),
            ],
            vec![
                "setsys".into(), "build".into(), "--m".into(), "6".into(), "--n".into(), "3".into(), "--dedupe".into(),
                "--out".into(), p("report.json"), "--vectors-out".into(), p("vectors.json"),
            ],
        ];
        for args in runs {
            let argv = std::iter::once("hass".to_string()).chain(args.iter().cloned());
            let code = hass_cli::run_with(argv, &mut Vec::new(), &mut Vec::new());
            ensure(code == 0, || format!("{args:?} exited {code}"))?;
        }
        let names = ["params.json", "poly.json", "tokens.json", "audit.json", "bundle.json", "report.json", "vectors.json"];
        outputs.push(names.map(|n| std::fs::read(p(n)).unwrap()));
    }
    std::env::set_current_dir(dir.path()).map_err(|err| err.to_string())?;
    ensure(outputs[0] == outputs[1], || "seeded command outputs differ".into())?;

    // round trips
    let p = |name: &str| dir.path().join("0").join(name);
    let text = |name: &str| String::from_utf8(std::fs::read(p(name)).unwrap()).unwrap();
    let params: ParamsFile = e(read_json(&p("params.json")))?;
    ensure(to_json(&ParamsFile::from(&e(params.to_group())?)) == text("params.json"), || "params".into())?;
    let poly: PolynomialFile = e(read_json(&p("poly.json")))?;
    ensure(to_json(&PolynomialFile::from(&e(poly.to_polynomial())?)) == text("poly.json"), || "polynomial".into())?;
    let tokens: TokensFile = e(read_json(&p("tokens.json")))?;
    ensure(to_json(&tokens) == text("tokens.json"), || "tokens".into())?;
    let audit: AuditFile<EncodingAudit> = e(read_json(&p("audit.json")))?;
    ensure(to_json(&audit) == text("audit.json"), || "audit".into())?;
    let bundle: BundleFile = e(read_json(&p("bundle.json")))?;
    ensure(to_json(&BundleFile::from(&e(bundle.to_bundle())?)) == text("bundle.json"), || "bundle".into())?;
    let vectors: VectorsFile = e(read_json(&p("vectors.json")))?;
    let h = vectors.h;
    let m = vectors.m.0.clone();
    ensure(to_json(&VectorsFile::from_vectors(h, &m, &e(vectors.to_vectors())?)) == text("vectors.json"), || "vectors".into())?;
    let access_file: AccessFile = e(read_json(&p("access.json")))?;
    ensure(e(access_file.to_access())? == access, || "access".into())?;
    ensure(bundle_json.len() > 2, || "empty bundle".into())?;
    Ok("library and command outputs byte-identical across runs; 7 artifact kinds round-trip".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("polynomial contract", polynomial_contract),
        ("counting triple equality", counting_triple),
        ("growth bound", growth_bound),
        ("set-system size and residue conditions", set_system_conditions),
        ("B-entry counting", lemma3),
        ("covering vectors", covering_vectors),
        ("ASES completeness and soundness", ases_instances),
        ("scheme perfect correctness", scheme_bundles),
        ("k-independence", k_independence),
        ("share accounting", share_accounting),
        ("determinism and serialization", determinism_and_serialization),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail}) [{secs:.2}s]", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {}: {name} ({why}) [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
