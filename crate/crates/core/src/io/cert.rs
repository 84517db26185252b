//! JSON certificates and their verifier.
//!
//! Every certificate carries a `kind` tag and a `seal` (SHA-256 of the
//! canonical JSON of all other fields), so an edited file is rejected before
//! any mathematics is rechecked. The verifier then recomputes everything it
//! can from the inputs named in the certificate; stored verdicts are never
//! taken on trust.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::antichain::Antichain;
use crate::error::{Error, Result};
use crate::exact::Frac;
use crate::extract::{
    bh_extract, for_each_colex, fw_blocks, fw_verify, verify_extraction, BlockExtraction, BlockSequence,
    ExtractOptions, PairColoring,
};
use crate::search::{
    is_par_member, is_par_member_on, minimal_par_members, mono_witness, Coloring, ParCertificate, SearchOptions,
    ThresholdResult, Verdict, MAX_COLORS,
};
use crate::set::{Bound, ElemSet};
use crate::witnesses::{
    columns_condition, generate, ColumnsPartition, ColumnsVariant, GeneratorSource, LinearSystem, SpanTarget,
    SpanWitness,
};

const SEAL_DOMAIN: &str = "parfilter-certificate-v1\n";

/// Colorings with at most this many total colorings are also rechecked by
/// plain enumeration.
const ENUMERATION_LIMIT: f64 = 1_048_576.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParVerdict {
    Refuted,
    Established,
    Budget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParRecord {
    pub source: String,
    pub family: String,
    pub k: u32,
    pub n: u32,
    pub verdict: ParVerdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coloring: Option<Vec<u32>>,
    pub nodes: u64,
    /// Generators, embedded for `custom:` sources so the certificate does
    /// not depend on the family file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<u32>>>,
}

impl ParRecord {
    pub fn new(source: &GeneratorSource, cert: &ParCertificate) -> Self {
        let (verdict, coloring) = match &cert.verdict {
            Verdict::Refuted(c) => (ParVerdict::Refuted, Some(c.to_vec())),
            Verdict::Established { .. } => (ParVerdict::Established, None),
        };
        ParRecord {
            source: source.descriptor(),
            family: cert.family_digest.clone(),
            k: cert.k,
            n: cert.bound.n(),
            verdict,
            coloring,
            nodes: cert.nodes,
            generators: embedded(source, cert.bound),
        }
    }

    /// Record of a search that ran out of budget.
    pub fn budget(source: &GeneratorSource, family: &Antichain, k: u32, nodes: u64) -> Self {
        ParRecord {
            source: source.descriptor(),
            family: family.digest(),
            k,
            n: family.bound().n(),
            verdict: ParVerdict::Budget,
            coloring: None,
            nodes,
            generators: embedded(source, family.bound()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdRecord {
    pub source: String,
    pub k: u32,
    pub threshold: Option<u32>,
    pub resolved: bool,
    pub budget_exhausted: bool,
    pub largest_refuted: Option<u32>,
    pub established: Option<ParRecord>,
    pub refutation: Option<ParRecord>,
    pub budget_spent: u64,
    pub cached: bool,
}

impl ThresholdRecord {
    pub fn new(source: &GeneratorSource, k: u32, r: &ThresholdResult, cached: bool) -> Self {
        ThresholdRecord {
            source: source.descriptor(),
            k,
            threshold: r.threshold,
            resolved: r.resolved,
            budget_exhausted: r.budget_exhausted,
            largest_refuted: r.largest_refuted,
            established: r.established.as_ref().map(|c| ParRecord::new(source, c)),
            refutation: r.refutation.as_ref().map(|c| ParRecord::new(source, c)),
            budget_spent: r.budget_spent,
            cached,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetRecord {
    /// 1-based column.
    Column(usize),
    /// 1-based part whose column sum is expressed.
    PartSum(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub target: TargetRecord,
    /// 1-based columns.
    pub basis: Vec<usize>,
    /// Rationals written `p` or `p/q`.
    pub coeffs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnsRecord {
    pub system: String,
    pub variant: ColumnsVariant,
    pub satisfied: bool,
    /// 1-based column indices.
    pub parts: Vec<Vec<usize>>,
    pub witnesses: Vec<WitnessRecord>,
}

impl ColumnsRecord {
    pub fn new(sys: &LinearSystem, variant: ColumnsVariant, found: Option<&ColumnsPartition<BigInt>>) -> Self {
        let (parts, witnesses) = match found {
            Some(p) => (
                p.parts.iter().map(|part| part.iter().map(|j| j + 1).collect()).collect(),
                p.witnesses
                    .iter()
                    .map(|w| WitnessRecord {
                        target: match w.target {
                            SpanTarget::Column(j) => TargetRecord::Column(j + 1),
                            SpanTarget::PartSum(i) => TargetRecord::PartSum(i + 1),
                        },
                        basis: w.basis.iter().map(|j| j + 1).collect(),
                        coeffs: w.coeffs.iter().map(|c| c.to_string()).collect(),
                    })
                    .collect(),
            ),
            None => (Vec::new(), Vec::new()),
        };
        ColumnsRecord { system: sys.to_inline(), variant, satisfied: found.is_some(), parts, witnesses }
    }

    fn partition(&self) -> Result<ColumnsPartition<BigInt>> {
        let zero_based = |j: usize| j.checked_sub(1).ok_or_else(|| reject("column indices are 1-based"));
        let parts = self
            .parts
            .iter()
            .map(|p| p.iter().map(|&j| zero_based(j)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let mut witnesses = Vec::with_capacity(self.witnesses.len());
        for w in &self.witnesses {
            let target = match w.target {
                TargetRecord::Column(j) => SpanTarget::Column(zero_based(j)?),
                TargetRecord::PartSum(i) => SpanTarget::PartSum(zero_based(i)?),
            };
            let basis = w.basis.iter().map(|&j| zero_based(j)).collect::<Result<Vec<_>>>()?;
            let coeffs = w
                .coeffs
                .iter()
                .map(|c| c.parse::<Frac<BigInt>>().map_err(|e| reject(e.to_string())))
                .collect::<Result<Vec<_>>>()?;
            witnesses.push(SpanWitness { target, basis, coeffs });
        }
        Ok(ColumnsPartition { variant: self.variant, parts, witnesses })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtractStatus {
    Found,
    Absent,
    Budget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairColoringRecord {
    pub n: u32,
    pub r: u32,
    pub k: u32,
    /// Colors of the `r`-subsets in colex order.
    pub colors: Vec<u32>,
}

impl PairColoringRecord {
    pub fn new(c: &PairColoring) -> Self {
        let mut colors = Vec::new();
        for_each_colex(c.bound().n(), c.arity(), |s| colors.push(c.color(s)));
        PairColoringRecord { n: c.bound().n(), r: c.arity(), k: c.k(), colors }
    }

    fn coloring(&self) -> Result<PairColoring> {
        PairColoring::dense(Bound::new(self.n as u64)?, self.r, self.k, &self.colors)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionRecord {
    pub outcome: ExtractStatus,
    pub blocks: Vec<Vec<u32>>,
    pub generators: Vec<Vec<u32>>,
    pub color: Option<u32>,
    pub arity: u32,
    pub sources: Vec<String>,
    pub nodes: u64,
    pub coloring: PairColoringRecord,
}

impl ExtractionRecord {
    pub fn new(
        c: &PairColoring,
        sources: &[GeneratorSource],
        outcome: ExtractStatus,
        x: Option<&BlockExtraction>,
        nodes: u64,
    ) -> Self {
        ExtractionRecord {
            outcome,
            blocks: x.map(|x| x.blocks.to_vecs()).unwrap_or_default(),
            generators: x.map(|x| x.generators.iter().map(ElemSet::to_vec).collect()).unwrap_or_default(),
            color: x.map(|x| x.color),
            arity: c.arity(),
            sources: sources.iter().map(GeneratorSource::descriptor).collect(),
            nodes,
            coloring: PairColoringRecord::new(c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FwRecord {
    pub t: u32,
    pub blocks: Vec<Vec<u32>>,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalRecord {
    pub source: String,
    pub family: String,
    pub k: u32,
    pub n: u32,
    pub max_size: usize,
    pub members: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<u32>>>,
}

/// Generator lists of a `custom:` source at `bound`; `None` for sources
/// that can be regenerated from their descriptor.
pub fn embedded(source: &GeneratorSource, bound: Bound) -> Option<Vec<Vec<u32>>> {
    match source {
        GeneratorSource::Custom { .. } => {
            let family = generate(source, bound).ok()?;
            Some(family.generators().iter().map(ElemSet::to_vec).collect())
        }
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Certificate {
    Par(ParRecord),
    Threshold(ThresholdRecord),
    Columns(ColumnsRecord),
    Extraction(ExtractionRecord),
    Fw(FwRecord),
    Minimal(MinimalRecord),
}

fn seal_of(body: &Value) -> String {
    let mut h = Sha256::new();
    h.update(SEAL_DOMAIN.as_bytes());
    h.update(serde_json::to_string(body).expect("json value serializes").as_bytes());
    hex::encode(h.finalize())
}

impl Certificate {
    /// Sealed JSON value.
    pub fn to_value(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("certificate serializes");
        let seal = seal_of(&v);
        v.as_object_mut().expect("certificates are objects").insert("seal".into(), Value::String(seal));
        v
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("json value serializes")
    }

    /// Parses and checks the seal.
    pub fn from_json(text: &str) -> Result<Self> {
        let mut v: Value = serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
        let obj = v.as_object_mut().ok_or_else(|| reject("certificate is not a JSON object"))?;
        let seal = match obj.remove("seal") {
            Some(Value::String(s)) => s,
            _ => return Err(reject("missing seal")),
        };
        if seal_of(&v) != seal {
            return Err(reject("seal does not match the certificate contents"));
        }
        serde_json::from_value(v).map_err(|e| reject(format!("malformed certificate: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub kind: &'static str,
    pub summary: String,
}

fn reject(msg: impl Into<String>) -> Error {
    Error::Rejected(msg.into())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(reject(msg()))
    }
}

/// Parses a certificate and rechecks it with the independent validators.
pub fn verify_certificate(text: &str) -> Result<VerifyReport> {
    let cert = Certificate::from_json(text)?;
    verify(&cert)
}

pub fn verify(cert: &Certificate) -> Result<VerifyReport> {
    let (kind, summary) = match cert {
        Certificate::Par(r) => ("par", check_par(r)?),
        Certificate::Threshold(r) => ("threshold", check_threshold(r)?),
        Certificate::Columns(r) => ("columns", check_columns(r)?),
        Certificate::Extraction(r) => ("extraction", check_extraction(r)?),
        Certificate::Fw(r) => ("fw", check_fw(r)?),
        Certificate::Minimal(r) => ("minimal", check_minimal(r)?),
    };
    Ok(VerifyReport { kind, summary })
}

fn regenerate(source: &str, n: u32, digest: &str, embedded: Option<&Vec<Vec<u32>>>) -> Result<Antichain> {
    let bound = Bound::new(n as u64).map_err(|e| reject(e.to_string()))?;
    let family = match embedded {
        Some(lists) => {
            ensure(source.starts_with("custom:"), || format!("embedded generators for non-custom source {source}"))?;
            let sets = lists
                .iter()
                .map(|g| ElemSet::from_elems(bound, g.iter().copied()))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| reject(e.to_string()))?;
            if sets.is_empty() {
                Antichain::empty(bound)
            } else {
                crate::antichain::normalize_antichain(sets).map_err(|e| reject(e.to_string()))?
            }
        }
        None => {
            let src = GeneratorSource::parse(source).map_err(|e| reject(format!("source {source:?}: {e}")))?;
            generate(&src, bound).map_err(|e| reject(format!("cannot regenerate {source}: {e}")))?
        }
    };
    ensure(family.digest() == digest, || format!("family digest does not match {source} at n={n}"))?;
    Ok(family)
}

fn check_k(k: u32) -> Result<()> {
    ensure((1..=MAX_COLORS).contains(&k), || format!("k={k} outside 1..={MAX_COLORS}"))
}

fn check_par(r: &ParRecord) -> Result<String> {
    check_k(r.k)?;
    let family = regenerate(&r.source, r.n, &r.family, r.generators.as_ref())?;
    match r.verdict {
        ParVerdict::Refuted => {
            let colors = r.coloring.as_ref().ok_or_else(|| reject("refuted certificate without a coloring"))?;
            let c = Coloring::new(family.bound(), r.k, colors).map_err(|e| reject(e.to_string()))?;
            if let Some((g, q)) = mono_witness(&c, &family)? {
                return Err(reject(format!("generator {g} is monochromatic in color {q}")));
            }
            Ok(format!("refutation of [1..{}] in Par_{} checked: no monochromatic generator", r.n, r.k))
        }
        ParVerdict::Established => {
            ensure(r.coloring.is_none(), || "established certificate carries a coloring".into())?;
            let again = is_par_member(&family, r.k, &SearchOptions::default())?;
            ensure(again.is_established(), || format!("a refuting coloring of [1..{}] exists", r.n))?;
            if (r.k as f64).powi(r.n as i32) <= ENUMERATION_LIMIT {
                let plain = is_par_member(&family, r.k, &SearchOptions::exhaustive())?;
                ensure(plain.is_established(), || "enumeration finds a refuting coloring".into())?;
            }
            Ok(format!("[1..{}] in Par_{} re-established by search", r.n, r.k))
        }
        ParVerdict::Budget => {
            ensure(r.coloring.is_none(), || "budget certificate carries a coloring".into())?;
            Ok(format!("no verdict: search at n={} stopped after {} nodes", r.n, r.nodes))
        }
    }
}

fn check_threshold(r: &ThresholdRecord) -> Result<String> {
    let same_source = |p: &ParRecord| {
        ensure(p.source == r.source && p.k == r.k, || "nested certificate has a different source or k".into())
    };
    if let Some(p) = &r.refutation {
        same_source(p)?;
        ensure(p.verdict == ParVerdict::Refuted, || "refutation is not a refuted certificate".into())?;
        ensure(r.largest_refuted == Some(p.n), || "largest_refuted does not match the refutation".into())?;
        check_par(p)?;
    } else {
        ensure(r.largest_refuted.is_none(), || "largest_refuted without a refutation".into())?;
    }
    if r.resolved {
        let t = r.threshold.ok_or_else(|| reject("resolved without a threshold"))?;
        ensure(!r.budget_exhausted, || "resolved and budget-exhausted at once".into())?;
        let e = r.established.as_ref().ok_or_else(|| reject("resolved without an established certificate"))?;
        same_source(e)?;
        ensure(e.verdict == ParVerdict::Established && e.n == t, || "established certificate is not at the threshold".into())?;
        check_par(e)?;
        if t > 1 {
            ensure(
                r.refutation.as_ref().is_some_and(|p| p.n == t - 1),
                || format!("threshold {t} needs a refutation at {}", t - 1),
            )?;
        } else {
            ensure(r.refutation.is_none(), || "threshold 1 cannot have a refutation".into())?;
        }
        Ok(format!("threshold {t} for {} with k={}: both sides checked", r.source, r.k))
    } else {
        ensure(r.threshold.is_none() && r.established.is_none(), || "unresolved record claims a threshold".into())?;
        Ok(match r.largest_refuted {
            Some(n) => format!("unresolved; refutation at n={n} checked"),
            None => "unresolved; nothing refuted".to_string(),
        })
    }
}

fn check_columns(r: &ColumnsRecord) -> Result<String> {
    let sys = LinearSystem::parse_inline(&r.system).map_err(|e| reject(e.to_string()))?;
    if r.satisfied {
        let p = r.partition()?;
        ensure(p.verify(&sys)?, || "a span witness does not re-multiply".into())?;
        Ok(format!("columns condition ({}) witnessed by {p}", r.variant))
    } else {
        ensure(r.parts.is_empty() && r.witnesses.is_empty(), || "unsatisfied record carries a partition".into())?;
        let again = columns_condition::<BigInt>(&sys, r.variant)?;
        ensure(again.is_none(), || "a columns partition exists".into())?;
        Ok(format!("no columns partition ({}) confirmed", r.variant))
    }
}

fn check_extraction(r: &ExtractionRecord) -> Result<String> {
    let c = r.coloring.coloring().map_err(|e| reject(format!("coloring: {e}")))?;
    ensure(r.arity == c.arity(), || "arity does not match the coloring".into())?;
    let sources = r
        .sources
        .iter()
        .map(|s| GeneratorSource::parse(s).map_err(|e| reject(format!("source {s:?}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    match r.outcome {
        ExtractStatus::Found => {
            let color = r.color.ok_or_else(|| reject("found without a color"))?;
            let blocks = BlockSequence::from_vecs(c.bound(), &r.blocks).map_err(|e| reject(e.to_string()))?;
            let generators = r
                .generators
                .iter()
                .map(|g| ElemSet::from_elems(c.bound(), g.iter().copied()))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| reject(e.to_string()))?;
            let x = BlockExtraction { blocks, generators, sources, color, arity: r.arity };
            ensure(verify_extraction(&c, &x), || "extraction does not verify".into())?;
            Ok(format!("{} blocks, every transversal {}-subset has color {color}", r.blocks.len(), r.arity))
        }
        ExtractStatus::Absent => {
            ensure(r.blocks.is_empty() && r.color.is_none(), || "absent record carries blocks".into())?;
            let again = bh_extract(&c, &sources, &ExtractOptions { budget: None, fast_path: false })?;
            ensure(again.extraction.is_none(), || "an extraction exists".into())?;
            Ok("no extraction at this bound, confirmed by search".into())
        }
        ExtractStatus::Budget => {
            ensure(r.blocks.is_empty() && r.color.is_none(), || "budget record carries blocks".into())?;
            Ok(format!("no verdict: extraction stopped after {} nodes", r.nodes))
        }
    }
}

fn check_fw(r: &FwRecord) -> Result<String> {
    let expected = fw_blocks(r.t).map_err(|e| reject(e.to_string()))?;
    ensure(expected.to_vecs() == r.blocks, || format!("blocks are not the construction for t={}", r.t))?;
    let holds = fw_verify(&expected);
    ensure(holds == r.verified, || format!("transversal 3-AP check gives {holds}"))?;
    Ok(format!("t={}: transversal 3-AP freedom is {holds}", r.t))
}

fn check_minimal(r: &MinimalRecord) -> Result<String> {
    check_k(r.k)?;
    let family = regenerate(&r.source, r.n, &r.family, r.generators.as_ref())?;
    let bound = family.bound();
    let opts = SearchOptions::default();
    for m in &r.members {
        let set = ElemSet::from_elems(bound, m.iter().copied()).map_err(|e| reject(e.to_string()))?;
        let cert = is_par_member_on(&family, &set, r.k, &opts)?;
        ensure(cert.is_established(), || format!("{set} is not in Par_{}", r.k))?;
        for e in m {
            let mut smaller = set.clone();
            smaller.remove(*e);
            let cert = is_par_member_on(&family, &smaller, r.k, &opts)?;
            ensure(!cert.is_established(), || format!("{set} is not minimal: {smaller} is a member"))?;
        }
    }
    let again = minimal_par_members(&family, r.k, r.max_size, None)?;
    let again: Vec<Vec<u32>> = again.generators().iter().map(ElemSet::to_vec).collect();
    ensure(again == r.members, || "member list differs from recomputation".into())?;
    Ok(format!("{} minimal members of size <= {} checked", r.members.len(), r.max_size))
}
