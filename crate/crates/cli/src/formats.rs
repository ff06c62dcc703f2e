//! JSON file formats. Big integers are written as lowercase hex strings; on
//! input a string is read as hex (optional `0x`) and a number as decimal.

use std::fmt;
use std::path::Path;

use hass_core::access::AccessStructure;
use hass_core::bbrpoly::{IntersectionPolynomial, ModulusSpec};
use hass_core::covvec::CoveringVector;
use hass_core::numth::{GroupParams, PrimePower};
use hass_core::scheme::{PublicRun, ShareBundle};
use num_bigint::BigUint;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::CliError;

/// A big integer in hex on the wire.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Hex(pub BigUint);

impl Hex {
    pub fn parse(text: &str) -> Result<Self, String> {
        let digits = text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")).unwrap_or(text);
        if digits.is_empty() {
            return Err(format!("empty hex value {text:?}"));
        }
        BigUint::parse_bytes(digits.as_bytes(), 16)
            .map(Hex)
            .ok_or_else(|| format!("invalid hex value {text:?}"))
    }
}

impl From<BigUint> for Hex {
    fn from(v: BigUint) -> Self {
        Hex(v)
    }
}

impl From<&BigUint> for Hex {
    fn from(v: &BigUint) -> Self {
        Hex(v.clone())
    }
}

impl fmt::Display for Hex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.to_str_radix(16))
    }
}

impl Serialize for Hex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Hex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct HexVisitor;
        impl Visitor<'_> for HexVisitor {
            type Value = Hex;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a hex string or a non-negative integer")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Hex, E> {
                Hex::parse(v).map_err(E::custom)
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Hex, E> {
                Ok(Hex(BigUint::from(v)))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Hex, E> {
                u64::try_from(v)
                    .map(|v| Hex(BigUint::from(v)))
                    .map_err(|_| E::custom("negative integer"))
            }
        }
        d.deserialize_any(HexVisitor)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorDto {
    pub p: Hex,
    pub alpha: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsFile {
    pub eta: usize,
    pub base_primes: Vec<Hex>,
    pub cofactor: Hex,
    pub q: Hex,
    pub m_factors: Vec<FactorDto>,
}

impl From<&GroupParams> for ParamsFile {
    fn from(g: &GroupParams) -> Self {
        Self {
            eta: g.eta(),
            base_primes: g.base_primes().iter().map(Hex::from).collect(),
            cofactor: g.cofactor().into(),
            q: g.q().into(),
            m_factors: g
                .m_factors()
                .iter()
                .map(|f| FactorDto {
                    p: (&f.p).into(),
                    alpha: f.alpha,
                })
                .collect(),
        }
    }
}

impl ParamsFile {
    pub fn to_group(&self) -> Result<GroupParams, CliError> {
        if self.eta != self.base_primes.len() {
            return Err(CliError::input("eta does not match the number of base primes"));
        }
        Ok(GroupParams::from_parts(
            self.base_primes.iter().map(|h| h.0.clone()).collect(),
            self.cofactor.0.clone(),
            self.q.0.clone(),
            self.m_factors
                .iter()
                .map(|f| PrimePower {
                    p: f.p.0.clone(),
                    alpha: f.alpha,
                })
                .collect(),
        )?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDto {
    pub indices: Vec<usize>,
    pub coeff: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialFile {
    pub n: usize,
    pub m: u64,
    pub terms: Vec<TermDto>,
}

impl From<&IntersectionPolynomial> for PolynomialFile {
    fn from(p: &IntersectionPolynomial) -> Self {
        Self {
            n: p.n(),
            m: p.modulus().m(),
            terms: p
                .terms_indexed()
                .map(|(indices, coeff)| TermDto { indices, coeff })
                .collect(),
        }
    }
}

impl PolynomialFile {
    pub fn to_polynomial(&self) -> Result<IntersectionPolynomial, CliError> {
        let spec = ModulusSpec::new(self.m)?;
        Ok(IntersectionPolynomial::from_terms(
            self.n,
            &spec,
            self.terms.iter().map(|t| (t.indices.clone(), t.coeff)),
        )?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorDto {
    pub source: Option<usize>,
    pub coords_sparse: Vec<(usize, Hex)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorsFile {
    pub h: usize,
    pub m: Hex,
    pub vectors: Vec<VectorDto>,
}

impl VectorsFile {
    pub fn from_vectors(h: usize, m: &BigUint, vectors: &[CoveringVector]) -> Self {
        Self {
            h,
            m: m.into(),
            vectors: vectors
                .iter()
                .map(|v| VectorDto {
                    source: v.source(),
                    coords_sparse: v.nonzero().into_iter().map(|(i, x)| (i, Hex(x))).collect(),
                })
                .collect(),
        }
    }

    pub fn to_vectors(&self) -> Result<Vec<CoveringVector>, CliError> {
        self.vectors
            .iter()
            .map(|v| {
                Ok(CoveringVector::sparse(
                    self.h,
                    self.m.0.clone(),
                    v.coords_sparse.iter().map(|(i, x)| (*i, x.0.clone())),
                    v.source,
                )?)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartyToken {
    pub id: usize,
    pub token: Hex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartyShare {
    pub id: usize,
    pub share: Hex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokensFile {
    pub q: Hex,
    pub run_id: u32,
    pub parties: Vec<PartyToken>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunDto {
    pub run_id: u32,
    pub tokens: Vec<PartyToken>,
    pub shares: Vec<PartyShare>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleFile {
    pub q: Hex,
    pub qprime: Hex,
    pub runs: Vec<RunDto>,
}

impl From<&ShareBundle> for BundleFile {
    fn from(b: &ShareBundle) -> Self {
        Self {
            q: (&b.q).into(),
            qprime: (&b.qprime).into(),
            runs: b
                .runs
                .iter()
                .map(|r| RunDto {
                    run_id: r.run_id,
                    tokens: numbered(&r.tokens)
                        .map(|(id, t)| PartyToken { id, token: t.into() })
                        .collect(),
                    shares: numbered(&r.shares)
                        .map(|(id, s)| PartyShare { id, share: s.into() })
                        .collect(),
                })
                .collect(),
        }
    }
}

fn numbered(values: &[BigUint]) -> impl Iterator<Item = (usize, &BigUint)> {
    values.iter().enumerate().map(|(i, v)| (i + 1, v))
}

/// Places `(id, value)` pairs at index `id - 1`, requiring ids `1..=len`.
fn by_id(pairs: Vec<(usize, BigUint)>, what: &str) -> Result<Vec<BigUint>, CliError> {
    let mut out = vec![None; pairs.len()];
    for (id, v) in pairs {
        match out.get_mut(id.wrapping_sub(1)) {
            Some(slot @ None) => *slot = Some(v),
            _ => return Err(CliError::input(format!("{what}: party ids must be exactly 1..={}", out.len()))),
        }
    }
    Ok(out.into_iter().map(|v| v.expect("all ids filled")).collect())
}

impl BundleFile {
    pub fn to_bundle(&self) -> Result<ShareBundle, CliError> {
        let mut runs = Vec::with_capacity(self.runs.len());
        for r in &self.runs {
            let tokens = by_id(r.tokens.iter().map(|t| (t.id, t.token.0.clone())).collect(), "tokens")?;
            let shares = by_id(r.shares.iter().map(|s| (s.id, s.share.0.clone())).collect(), "shares")?;
            runs.push(PublicRun {
                run_id: r.run_id,
                tokens,
                shares,
            });
        }
        let ell = runs.first().map_or(0, |r| r.tokens.len());
        let bundle = ShareBundle {
            q: self.q.0.clone(),
            qprime: self.qprime.0.clone(),
            ell,
            runs,
        };
        bundle.check()?;
        Ok(bundle)
    }
}

impl TokensFile {
    pub fn tokens(&self) -> Result<Vec<BigUint>, CliError> {
        by_id(self.parties.iter().map(|p| (p.id, p.token.0.clone())).collect(), "tokens")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccessFile {
    pub parties: usize,
    pub minimal_sets: Vec<Vec<usize>>,
}

impl AccessFile {
    pub fn to_access(&self) -> Result<AccessStructure, CliError> {
        Ok(AccessStructure::new(self.parties, &self.minimal_sets)?)
    }
}

/// Dealer-side secrets of one encoding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodingAudit {
    pub q: Hex,
    pub mu: Hex,
    pub omega: Vec<usize>,
    pub identifiers: Vec<PartyIdentifier>,
    pub covering_map: Vec<(usize, usize)>,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartyIdentifier {
    pub id: usize,
    pub x: Hex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    /// Coalitions not containing omega, all with identifier sum nonzero.
    pub unauthorized_coalitions: u64,
    pub sampler: String,
    pub attempts: u32,
    pub collisions: u32,
    pub zero_identifiers: u32,
    pub certificate_failures: u32,
    pub mu_rejections: u32,
}

impl From<&hass_core::ases::AsesInstance> for EncodingAudit {
    fn from(inst: &hass_core::ases::AsesInstance) -> Self {
        let stats = inst.stats();
        let omega = hass_core::access::parties_of(inst.omega());
        let unauthorized = (1u64 << inst.ell()) - (1u64 << (inst.ell() - omega.len()));
        Self {
            q: inst.q().into(),
            mu: inst.mu().into(),
            omega,
            identifiers: numbered(inst.identifiers())
                .map(|(id, x)| PartyIdentifier { id, x: x.into() })
                .collect(),
            covering_map: inst.covering_map().to_vec(),
            certificate: Certificate {
                unauthorized_coalitions: unauthorized - 1,
                sampler: format!("{:?}", stats.sampler).to_lowercase(),
                attempts: stats.attempts,
                collisions: stats.collisions,
                zero_identifiers: stats.zero_identifiers,
                certificate_failures: stats.certificate_failures,
                mu_rejections: stats.mu_rejections,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunAudit {
    pub run_id: u32,
    pub tokens: EncodingAudit,
    /// `mu` of this encoding is the share base `gamma`.
    pub shares: EncodingAudit,
    pub blinding: Vec<Hex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeAudit {
    pub k: Hex,
    pub runs: Vec<RunAudit>,
}

/// Wrapper marking dealer-only files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditFile<T> {
    pub classification: String,
    /// Seed that reproduces the dealer's randomness.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(flatten)]
    pub body: T,
}

impl<T> AuditFile<T> {
    pub fn secret(body: T) -> Self {
        Self {
            classification: "dealer-secret".into(),
            seed: None,
            body,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    std::fs::write(path, to_json(value)).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}
