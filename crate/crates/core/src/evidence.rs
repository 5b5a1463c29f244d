//! Evidence documents: hypotheses with tagged evidence items, validation of
//! semantic independence and of evidence kind, and whole-document combination.
//!
//! Documents are read from JSON:
//!
//! ```json
//! {"hypothesis": "thunderstorm", "prior": 0.6,
//!  "evidence": [{"id": "temperature", "p": 0.4, "kind": "weight", "tags": ["temperature"]},
//!               {"id": "humidity", "p": 0.5, "kind": "weight", "tags": ["humidity"]}]}
//! ```
//!
//! Numbers are parsed exactly from their decimal text, so rational-mode
//! combination sees `0.6` as `3/5`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinators::{cmpe_add, dpe_sub, laplace_succession, SupportContribution};
use crate::error::{CombineError, ProbabilityError};
use crate::prob::{Probability, RepresentationMode};

/// Name of an observation channel. Non-empty, case-sensitive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SemanticTag(String);

impl SemanticTag {
    pub fn new(name: impl Into<String>) -> Result<Self, DocumentError> {
        let name = name.into();
        if name.is_empty() {
            return Err(DocumentError::EmptyTag);
        }
        Ok(SemanticTag(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SemanticTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EvidenceKind {
    /// Raises the hypothesis's probability; may enter cMPE.
    #[serde(rename = "weight")]
    WeightBearing,
    /// The space of possible cases; never enters cMPE.
    #[serde(rename = "extensional")]
    Extensional,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evidence {
    pub id: String,
    pub probability: Probability,
    pub kind: EvidenceKind,
    pub tags: BTreeSet<SemanticTag>,
    pub carrier: Option<SupportContribution>,
}

impl Evidence {
    pub fn new(
        id: impl Into<String>,
        probability: Probability,
        kind: EvidenceKind,
        tags: impl IntoIterator<Item = SemanticTag>,
    ) -> Result<Self, DocumentError> {
        let id = id.into();
        let tags: BTreeSet<SemanticTag> = tags.into_iter().collect();
        if kind == EvidenceKind::WeightBearing && tags.is_empty() {
            return Err(DocumentError::MissingTags(id));
        }
        Ok(Evidence {
            id,
            probability,
            kind,
            tags,
            carrier: None,
        })
    }

    pub fn with_carrier(mut self, carrier: SupportContribution) -> Self {
        self.carrier = Some(carrier);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvidenceDocument {
    pub hypothesis_id: String,
    pub prior: Option<Probability>,
    pub items: Vec<Evidence>,
}

impl EvidenceDocument {
    pub fn new(
        hypothesis_id: impl Into<String>,
        prior: Option<Probability>,
        items: Vec<Evidence>,
    ) -> Result<Self, DocumentError> {
        let mut seen = HashSet::new();
        for item in &items {
            if !seen.insert(item.id.as_str()) {
                return Err(DocumentError::DuplicateId(item.id.clone()));
            }
        }
        Ok(EvidenceDocument {
            hypothesis_id: hypothesis_id.into(),
            prior,
            items,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        let raw: RawDocument = serde_json::from_str(text).map_err(DocumentError::Json)?;
        raw.into_document()
    }
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed evidence document: {0}")]
    Json(serde_json::Error),
    #[error("field `{field}`: {source}")]
    Number {
        field: String,
        source: ProbabilityError,
    },
    #[error("duplicate evidence id `{0}`")]
    DuplicateId(String),
    #[error("weight-bearing evidence `{0}` declares no semantic tags")]
    MissingTags(String),
    #[error("empty semantic tag")]
    EmptyTag,
}

impl DocumentError {
    /// `true` for errors in well-formed JSON that breaks a document invariant.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            DocumentError::DuplicateId(_) | DocumentError::MissingTags(_) | DocumentError::EmptyTag
        )
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    hypothesis: String,
    #[serde(default)]
    prior: Option<serde_json::Number>,
    evidence: Vec<RawEvidence>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEvidence {
    id: String,
    p: serde_json::Number,
    kind: EvidenceKind,
    tags: Vec<String>,
    #[serde(default)]
    carrier: Option<RawCarrier>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCarrier {
    prior: serde_json::Number,
    transfer: serde_json::Number,
}

fn exact_number(field: String, n: &serde_json::Number) -> Result<Probability, DocumentError> {
    let text = n.to_string();
    let parsed = if text.starts_with('-') {
        Err(ProbabilityError::OutOfRange(text))
    } else {
        Probability::parse_decimal(&text)
    };
    parsed.map_err(|source| DocumentError::Number { field, source })
}

impl RawDocument {
    fn into_document(self) -> Result<EvidenceDocument, DocumentError> {
        let prior = self
            .prior
            .as_ref()
            .map(|n| exact_number("prior".into(), n))
            .transpose()?;
        let items = self
            .evidence
            .into_iter()
            .map(|raw| {
                let p = exact_number(format!("{}.p", raw.id), &raw.p)?;
                let tags = raw
                    .tags
                    .into_iter()
                    .map(SemanticTag::new)
                    .collect::<Result<Vec<_>, _>>()?;
                let mut item = Evidence::new(raw.id.clone(), p, raw.kind, tags)?;
                if let Some(c) = raw.carrier {
                    item = item.with_carrier(SupportContribution::new(
                        exact_number(format!("{}.carrier.prior", raw.id), &c.prior)?,
                        exact_number(format!("{}.carrier.transfer", raw.id), &c.transfer)?,
                    ));
                }
                Ok(item)
            })
            .collect::<Result<Vec<_>, DocumentError>>()?;
        EvidenceDocument::new(self.hypothesis, prior, items)
    }
}

/// Two weight-bearing items observed through a shared channel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TagOverlap {
    pub first: String,
    pub second: String,
    pub tags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("semantic overlap: {}", describe_overlaps(.0))]
pub struct SemanticOverlap(pub Vec<TagOverlap>);

fn describe_overlaps(overlaps: &[TagOverlap]) -> String {
    overlaps
        .iter()
        .map(|o| {
            format!(
                "`{}` and `{}` share {}",
                o.first,
                o.second,
                o.tags.join(", ")
            )
        })
        .collect::<Vec<_>>()
        .join("; ")
}

/// Checks that weight-bearing items have pairwise disjoint tag sets.
pub fn validate_semantic_independence(items: &[Evidence]) -> Result<(), SemanticOverlap> {
    let weight: Vec<&Evidence> = items
        .iter()
        .filter(|e| e.kind == EvidenceKind::WeightBearing)
        .collect();
    let mut overlaps = Vec::new();
    for (i, a) in weight.iter().enumerate() {
        for b in &weight[i + 1..] {
            let shared: Vec<String> = a
                .tags
                .intersection(&b.tags)
                .map(|t| t.as_str().to_string())
                .collect();
            if !shared.is_empty() {
                overlaps.push(TagOverlap {
                    first: a.id.clone(),
                    second: b.id.clone(),
                    tags: shared,
                });
            }
        }
    }
    if overlaps.is_empty() {
        Ok(())
    } else {
        Err(SemanticOverlap(overlaps))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Operator {
    Prior,
    Evidence,
    SupportTransfer,
    CmpeAdd,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditEntry {
    pub operator: Operator,
    pub source: String,
    pub operands: Vec<Probability>,
    pub result: Probability,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CombinationResult {
    pub hypothesis: String,
    pub mode: RepresentationMode,
    pub value: Probability,
    pub trail: Vec<AuditEntry>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CombinationError {
    #[error("extensional evidence `{id}` cannot enter a cMPE combination")]
    ExtensionalEvidenceRejected { id: String },
    #[error(transparent)]
    SemanticOverlap(#[from] SemanticOverlap),
    #[error(transparent)]
    Combine(#[from] CombineError),
}

/// Combines the prior and every weight-bearing item by cMPE addition.
/// Items with a carrier contribute `carrier_prior × transfer`.
pub fn combine_document(
    doc: &EvidenceDocument,
    mode: RepresentationMode,
) -> Result<CombinationResult, CombinationError> {
    if let Some(item) = doc
        .items
        .iter()
        .find(|e| e.kind == EvidenceKind::Extensional)
    {
        return Err(CombinationError::ExtensionalEvidenceRejected {
            id: item.id.clone(),
        });
    }
    validate_semantic_independence(&doc.items)?;

    let mut trail = Vec::new();
    let mut operands = Vec::new();
    if let Some(prior) = &doc.prior {
        let prior = prior.to_mode(mode);
        trail.push(AuditEntry {
            operator: Operator::Prior,
            source: doc.hypothesis_id.clone(),
            operands: vec![prior.clone()],
            result: prior.clone(),
        });
        operands.push(prior);
    }
    for item in &doc.items {
        let entry = match &item.carrier {
            None => {
                let p = item.probability.to_mode(mode);
                AuditEntry {
                    operator: Operator::Evidence,
                    source: item.id.clone(),
                    operands: vec![p.clone()],
                    result: p,
                }
            }
            Some(carrier) => {
                let carrier = SupportContribution::new(
                    carrier.carrier_prior.to_mode(mode),
                    carrier.transfer.to_mode(mode),
                );
                AuditEntry {
                    operator: Operator::SupportTransfer,
                    source: item.id.clone(),
                    result: carrier.conferred(),
                    operands: vec![carrier.carrier_prior, carrier.transfer],
                }
            }
        };
        operands.push(entry.result.clone());
        trail.push(entry);
    }
    let value = cmpe_add(&operands)?;
    trail.push(AuditEntry {
        operator: Operator::CmpeAdd,
        source: doc.hypothesis_id.clone(),
        operands,
        result: value.clone(),
    });
    Ok(CombinationResult {
        hypothesis: doc.hypothesis_id.clone(),
        mode,
        value,
        trail,
    })
}

/// One row of the Laplace-vs-cMPE comparison for groups of `n` observations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LaplaceComparison {
    pub n: u64,
    pub groups: u64,
    /// Succession estimate after `n` uniform observations.
    pub laplace_n: Probability,
    /// Succession estimate after `groups × n` homogeneous observations.
    pub laplace_pooled: Probability,
    /// cMPE sum of one estimate per semantically diverse group.
    pub cmpe_groups: Probability,
    /// DPE difference between the cMPE sum and the pooled estimate.
    pub dpe_margin: Probability,
}

/// Two-group comparison for each size.
pub fn laplace_vs_cmpe(
    group_sizes: &[u64],
    mode: RepresentationMode,
) -> Result<Vec<LaplaceComparison>, CombineError> {
    laplace_vs_cmpe_groups(group_sizes, 2, mode)
}

/// Comparison for `groups` diverse groups of each size against one pooled,
/// homogeneous group of the same total size.
pub fn laplace_vs_cmpe_groups(
    group_sizes: &[u64],
    groups: u64,
    mode: RepresentationMode,
) -> Result<Vec<LaplaceComparison>, CombineError> {
    if group_sizes.is_empty() || groups == 0 {
        return Err(CombineError::EmptyInput {
            operation: "laplace_vs_cmpe",
        });
    }
    group_sizes
        .iter()
        .map(|&n| {
            let laplace_n = laplace_succession(n, n, mode)?;
            let pooled = n.saturating_mul(groups);
            let laplace_pooled = laplace_succession(pooled, pooled, mode)?;
            let cmpe_groups = cmpe_add(&vec![laplace_n.clone(); groups as usize])?;
            let dpe_margin = dpe_sub(&cmpe_groups, std::slice::from_ref(&laplace_pooled))?;
            Ok(LaplaceComparison {
                n,
                groups,
                laplace_n,
                laplace_pooled,
                cmpe_groups,
                dpe_margin,
            })
        })
        .collect()
}
