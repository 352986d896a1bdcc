use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{
    certify_sample, check_epsilon, check_psd_numeric, find_parameter_tree, gram_at_level, search_folner,
    FactorizationCertificate, Kernel, KernelLevel, KernelTag, NumericPsd, PSD_TOLERANCE,
};
use crate::folner::FolnerStrategy;
use crate::group::{Element, Group, GroupKind};
use crate::{Error, ExactRational, Result};

/// Point set for the positive-definiteness check: `ball(radius)` followed by
/// `random` words of length at most `random_length`, drawn from a ChaCha8
/// stream seeded with `seed`. Duplicates are dropped, first occurrence wins.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleSpec {
    pub radius: usize,
    pub random: usize,
    pub random_length: usize,
    pub seed: u64,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec {
            radius: 2,
            random: 0,
            random_length: 8,
            seed: 0,
        }
    }
}

pub fn sample_points(group: &Group, spec: &SampleSpec) -> Result<Vec<Element>> {
    let mut points = group.ball(spec.radius)?;
    let mut seen: BTreeSet<Element> = points.iter().cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..spec.random {
        let x = group.random_element(&mut rng, spec.random_length);
        if seen.insert(x.clone()) {
            points.push(x);
        }
    }
    Ok(points)
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    /// Largest level scanned by the Følner parameter search.
    pub n_max: usize,
    /// Relative eigenvalue tolerance for the numerical PSD check.
    pub tolerance: f64,
}

impl VerifyOptions {
    pub fn with_n_max(n_max: usize) -> Self {
        VerifyOptions {
            n_max,
            ..Default::default()
        }
    }
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            n_max: 50,
            tolerance: PSD_TOLERANCE,
        }
    }
}

/// The support set `F` of condition (2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SupportSet {
    /// Every element of word length at most `radius`; too large to list.
    Ball { radius: usize },
    Explicit(BTreeSet<Element>),
}

impl SupportSet {
    pub fn contains(&self, group: &Group, z: &Element) -> Result<bool> {
        match self {
            SupportSet::Ball { radius } => Ok(group.word_length(z)? <= *radius),
            SupportSet::Explicit(set) => Ok(set.contains(z)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PsdRecord {
    /// `None` if the factorization did not reproduce the Gram matrix.
    pub factorization: Option<FactorizationCertificate>,
    pub numeric: NumericPsd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub positive_definite: bool,
    pub finite_support: bool,
    pub approximation: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// First failing condition, numbered 1–3.
    Fail { condition: u8 },
}

/// Everything needed to re-check one instance `(E, ε)` of the three
/// conditions on a sample.
#[derive(Clone, Debug, PartialEq)]
pub struct PropertyOCertificate {
    pub group: GroupKind,
    pub kernel: KernelTag,
    /// Tree kernel only: the fixed end of the tree.
    pub base_ray: Option<&'static str>,
    /// Følner kernel only: whether the provider is a known Følner sequence.
    pub provider_is_folner: Option<bool>,
    pub e_set: Vec<Element>,
    pub epsilon: ExactRational,
    /// The chosen level `N`, absent when the search failed.
    pub level: Option<usize>,
    /// Level at which the sample and residuals were evaluated (`N`, or the
    /// last level scanned on failure).
    pub evaluated_level: usize,
    /// Tree kernel only: `m` with `E ⊆ {z : |z| < m}`.
    pub distance_bound: Option<usize>,
    /// Følner kernel only: the scan ran into the element budget.
    pub budget_exhausted: bool,
    pub support: SupportSet,
    pub sample_spec: SampleSpec,
    pub sample: Vec<Element>,
    pub psd: PsdRecord,
    /// Pairs `(i, j)` of the sample with a nonzero kernel value.
    pub nonzero_pairs: usize,
    /// For each `z ∈ E`, the largest `|1 − u_N(x, y)|` over `x⁻¹y = z`.
    pub residuals: Vec<(Element, ExactRational)>,
    pub conditions: ConditionReport,
}

impl PropertyOCertificate {
    pub fn verdict(&self) -> Verdict {
        let c = &self.conditions;
        if !c.positive_definite {
            Verdict::Fail { condition: 1 }
        } else if !c.finite_support {
            Verdict::Fail { condition: 2 }
        } else if !c.approximation {
            Verdict::Fail { condition: 3 }
        } else {
            Verdict::Pass
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict() == Verdict::Pass
    }
}

/// Runs the full pipeline for one `(E, ε)`.
///
/// The tree kernel takes `N` from [`find_parameter_tree`] with
/// `m = max |z| + 1` and `F = ball(2N)`. The Følner kernel scans levels up to
/// `options.n_max` and takes `F = G_N·G_N⁻¹` (which is `ball(2N)` for the
/// ball provider). A failed search is reported as
/// a failure of condition (3), not as an error.
pub fn verify_property_o(
    kernel: &Kernel<'_>,
    e_set: &[Element],
    eps: &ExactRational,
    sample_spec: &SampleSpec,
    options: &VerifyOptions,
) -> Result<PropertyOCertificate> {
    check_epsilon(eps)?;
    let group = kernel.group();
    for z in e_set {
        group.check(z)?;
    }

    let (level, evaluated_level, distance_bound, budget_exhausted) = match kernel {
        Kernel::Tree(_) => {
            let m = e_set
                .iter()
                .map(|z| group.word_length(z))
                .try_fold(0, |acc, l| l.map(|l| acc.max(l)))?
                + 1;
            let n = find_parameter_tree(m, eps)?;
            (Some(n), n, Some(m), false)
        }
        Kernel::Folner(p) => {
            let search = search_folner(p, e_set, eps, options.n_max)?;
            (search.found, search.last_level, None, search.budget_exhausted)
        }
    };

    let frozen = kernel.at_level(evaluated_level)?;
    let support = match &frozen {
        KernelLevel::Tree(_, n) => SupportSet::Ball { radius: 2 * n },
        // Balls are symmetric, so B_n·B_n⁻¹ = B_2n exactly.
        KernelLevel::Folner(l) if kernel.tag() == KernelTag::Folner(FolnerStrategy::Ball) => {
            SupportSet::Ball { radius: 2 * l.n() }
        }
        KernelLevel::Folner(l) => SupportSet::Explicit(l.support_set()?),
    };

    let sample = sample_points(group, sample_spec)?;
    let gram = gram_at_level(kernel.tag(), &frozen, &sample)?;
    let factorization = match certify_sample(&frozen, &gram) {
        Ok(f) => Some(f),
        Err(Error::FactorizationMismatch { .. }) => None,
        Err(e) => return Err(e),
    };
    let numeric = check_psd_numeric(&gram, options.tolerance)?;

    let mut nonzero_pairs = 0;
    let mut finite_support = true;
    for (i, x) in sample.iter().enumerate() {
        for (j, y) in sample.iter().enumerate() {
            if gram.matrix[i][j].is_zero() {
                continue;
            }
            nonzero_pairs += 1;
            if !support.contains(group, &group.quotient(x, y)?)? {
                finite_support = false;
            }
        }
    }

    let mut residuals = Vec::with_capacity(e_set.len());
    for z in e_set {
        let u = match &frozen {
            KernelLevel::Tree(t, _) => {
                let (x, y) = t.worst_pair(z)?;
                frozen.value(&x, &y)?
            }
            KernelLevel::Folner(_) => frozen.value(&group.identity(), z)?,
        };
        residuals.push((z.clone(), (&ExactRational::one() - &u).abs()));
    }
    let approximation = level.is_some() && residuals.iter().all(|(_, r)| r < eps);

    let (base_ray, provider_is_folner) = match kernel {
        Kernel::Tree(_) => (Some(crate::tree::BASE_RAY), None),
        Kernel::Folner(p) => (None, Some(p.is_folner())),
    };

    Ok(PropertyOCertificate {
        group: group.kind().clone(),
        kernel: kernel.tag(),
        base_ray,
        provider_is_folner,
        e_set: e_set.to_vec(),
        epsilon: eps.clone(),
        level,
        evaluated_level,
        distance_bound,
        budget_exhausted,
        support,
        sample_spec: sample_spec.clone(),
        sample,
        conditions: ConditionReport {
            positive_definite: factorization.is_some() && numeric.passed,
            finite_support,
            approximation,
        },
        psd: PsdRecord { factorization, numeric },
        nonzero_pairs,
        residuals,
    })
}
