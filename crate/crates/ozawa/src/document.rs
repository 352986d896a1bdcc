use std::collections::BTreeMap;

use ozawa_core::verifier::{PropertyOCertificate, SupportSet, Verdict};
use serde::{Deserialize, Serialize};

/// JSON form of a [`PropertyOCertificate`]. Rationals are exact `"p/q"`
/// strings and elements use the group's text notation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub group: String,
    pub kernel: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gamma0: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub provider: Option<ProviderDocument>,
    #[serde(rename = "E")]
    pub e: Vec<String>,
    pub epsilon: String,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub evaluated_level: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub distance_bound: Option<usize>,
    pub budget_exhausted: bool,
    #[serde(rename = "F")]
    pub f: SupportDocument,
    pub sample: SampleDocument,
    pub psd: PsdDocument,
    pub support: SupportCheckDocument,
    pub residuals: BTreeMap<String, String>,
    pub conditions: ConditionsDocument,
    pub verdict: String,
    pub failed_condition: Option<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProviderDocument {
    pub strategy: String,
    pub folner: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SupportDocument {
    Ball { radius: usize },
    Explicit { elements: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleDocument {
    pub radius: usize,
    pub random: usize,
    pub random_length: usize,
    pub seed: u64,
    pub points: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsdDocument {
    pub factorization_verified: bool,
    pub factorization_sha256: Option<String>,
    pub feature_rows: Option<usize>,
    pub scale: Option<String>,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub numeric_passed: bool,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportCheckDocument {
    pub nonzero_pairs: usize,
    pub verified: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionsDocument {
    pub positive_definite: bool,
    pub finite_support: bool,
    pub approximation: bool,
}

impl CertificateDocument {
    pub fn from_certificate(cert: &PropertyOCertificate, tolerance: f64) -> Self {
        let f = match &cert.support {
            SupportSet::Ball { radius } => SupportDocument::Ball { radius: *radius },
            SupportSet::Explicit(set) => SupportDocument::Explicit {
                elements: set.iter().map(ToString::to_string).collect(),
            },
        };
        let fact = cert.psd.factorization.as_ref();
        let (verdict, failed_condition) = match cert.verdict() {
            Verdict::Pass => ("PASS", None),
            Verdict::Fail { condition } => ("FAIL", Some(condition)),
        };
        CertificateDocument {
            group: cert.group.to_string(),
            kernel: cert.kernel.to_string(),
            gamma0: cert.base_ray.map(str::to_string),
            provider: cert.provider_is_folner.map(|folner| ProviderDocument {
                strategy: match cert.kernel {
                    ozawa_core::verifier::KernelTag::Folner(s) => s.to_string(),
                    ozawa_core::verifier::KernelTag::Tree => String::new(),
                },
                folner,
            }),
            e: cert.e_set.iter().map(ToString::to_string).collect(),
            epsilon: cert.epsilon.to_string(),
            n: cert.level,
            evaluated_level: cert.evaluated_level,
            distance_bound: cert.distance_bound,
            budget_exhausted: cert.budget_exhausted,
            f,
            sample: SampleDocument {
                radius: cert.sample_spec.radius,
                random: cert.sample_spec.random,
                random_length: cert.sample_spec.random_length,
                seed: cert.sample_spec.seed,
                points: cert.sample.iter().map(ToString::to_string).collect(),
            },
            psd: PsdDocument {
                factorization_verified: fact.is_some(),
                factorization_sha256: fact.map(|f| hex::encode(f.digest)),
                feature_rows: fact.map(|f| f.feature_rows),
                scale: fact.map(|f| f.scale.to_string()),
                min_eigenvalue: cert.psd.numeric.min_eigenvalue,
                max_eigenvalue: cert.psd.numeric.max_eigenvalue,
                numeric_passed: cert.psd.numeric.passed,
                tolerance,
            },
            support: SupportCheckDocument {
                nonzero_pairs: cert.nonzero_pairs,
                verified: cert.conditions.finite_support,
            },
            residuals: cert
                .residuals
                .iter()
                .map(|(z, r)| (z.to_string(), r.to_string()))
                .collect(),
            conditions: ConditionsDocument {
                positive_definite: cert.conditions.positive_definite,
                finite_support: cert.conditions.finite_support,
                approximation: cert.conditions.approximation,
            },
            verdict: verdict.to_string(),
            failed_condition,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == "PASS"
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}
