//! Checking the three Ozawa-kernel conditions on concrete samples.
//!
//! * Positive definiteness is proved exactly on a sample by exhibiting the
//!   0/1 feature matrix `Φ` with `scale·ΦᵀΦ` equal to the Gram matrix entry by
//!   entry; a symmetric eigensolve on the float image confirms it.
//! * Finite support is checked pair by pair against the support set `F`.
//! * The approximation condition picks the smallest level `N` with every
//!   residual `|1 − u_N|` below `ε`, evaluated exactly.

mod certificate;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use sha2::{Digest, Sha256};

use crate::folner::{FolnerLevel, FolnerProvider, FolnerStrategy};
use crate::group::{Element, Group};
use crate::tree::TreeKernel;
use crate::{Error, ExactRational, Result};

pub use certificate::{
    sample_points, verify_property_o, ConditionReport, PropertyOCertificate, PsdRecord, SampleSpec,
    SupportSet, Verdict, VerifyOptions,
};

/// Relative eigenvalue tolerance for the numerical PSD confirmation.
pub const PSD_TOLERANCE: f64 = 1e-9;

/// Which kernel family, as written on the command line and in certificates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KernelTag {
    Tree,
    Folner(FolnerStrategy),
}

impl fmt::Display for KernelTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelTag::Tree => f.write_str("tree"),
            KernelTag::Folner(s) => write!(f, "folner:{s}"),
        }
    }
}

impl FromStr for KernelTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "tree" => Ok(KernelTag::Tree),
            t => match t.strip_prefix("folner:") {
                Some(strategy) => Ok(KernelTag::Folner(strategy.parse()?)),
                None => Err(Error::parse(s, "expected `tree` or `folner:<box|ball|whole>`")),
            },
        }
    }
}

/// One of the two kernel families bound to a group.
#[derive(Clone, Copy, Debug)]
pub enum Kernel<'g> {
    Tree(TreeKernel<'g>),
    Folner(FolnerProvider<'g>),
}

impl<'g> Kernel<'g> {
    pub fn new(group: &'g Group, tag: KernelTag) -> Result<Self> {
        match tag {
            KernelTag::Tree => Ok(Kernel::Tree(TreeKernel::new(group)?)),
            KernelTag::Folner(s) => Ok(Kernel::Folner(FolnerProvider::new(group, s)?)),
        }
    }

    pub fn group(&self) -> &'g Group {
        match self {
            Kernel::Tree(t) => t.group(),
            Kernel::Folner(p) => p.group(),
        }
    }

    pub fn tag(&self) -> KernelTag {
        match self {
            Kernel::Tree(_) => KernelTag::Tree,
            Kernel::Folner(p) => KernelTag::Folner(p.strategy()),
        }
    }

    /// The kernel frozen at level `n`.
    pub fn at_level(&self, n: usize) -> Result<KernelLevel<'g>> {
        match self {
            Kernel::Tree(t) => Ok(KernelLevel::Tree(*t, n)),
            Kernel::Folner(p) => Ok(KernelLevel::Folner(p.level(n)?)),
        }
    }

    pub fn value(&self, x: &Element, y: &Element, n: usize) -> Result<ExactRational> {
        self.at_level(n)?.value(x, y)
    }
}

/// A kernel at a fixed level, so the Følner set is built once per sample.
#[derive(Clone, Debug)]
pub enum KernelLevel<'g> {
    Tree(TreeKernel<'g>, usize),
    Folner(FolnerLevel<'g>),
}

impl KernelLevel<'_> {
    pub fn n(&self) -> usize {
        match self {
            KernelLevel::Tree(_, n) => *n,
            KernelLevel::Folner(l) => l.n(),
        }
    }

    pub fn value(&self, x: &Element, y: &Element) -> Result<ExactRational> {
        match self {
            KernelLevel::Tree(t, n) => t.value(x, y, *n),
            KernelLevel::Folner(l) => l.value(x, y),
        }
    }

    /// Support of the 0/1 feature vector of `x`.
    pub fn features(&self, x: &Element) -> Result<BTreeSet<Element>> {
        match self {
            KernelLevel::Tree(t, n) => Ok(t.feature_vector(x, *n)?.support),
            KernelLevel::Folner(l) => Ok(l.translate_index(x)?.indices),
        }
    }

    /// Denominator of the feature scale: `n + 1` or `|G_n|`.
    pub fn scale_denominator(&self) -> usize {
        match self {
            KernelLevel::Tree(_, n) => n + 1,
            KernelLevel::Folner(l) => l.size(),
        }
    }
}

/// Exact Gram matrix of a kernel over a point sample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramSample {
    pub points: Vec<Element>,
    pub level: usize,
    pub kernel: KernelTag,
    pub matrix: Vec<Vec<ExactRational>>,
}

fn ensure_distinct(points: &[Element]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for p in points {
        if !seen.insert(p) {
            return Err(Error::DuplicatePoint(p.to_string()));
        }
    }
    Ok(())
}

pub fn gram_matrix(kernel: &Kernel<'_>, points: &[Element], n: usize) -> Result<GramSample> {
    let level = kernel.at_level(n)?;
    gram_at_level(kernel.tag(), &level, points)
}

pub(crate) fn gram_at_level(tag: KernelTag, level: &KernelLevel<'_>, points: &[Element]) -> Result<GramSample> {
    ensure_distinct(points)?;
    let k = points.len();
    let mut matrix = vec![vec![ExactRational::zero(); k]; k];
    for i in 0..k {
        for j in i..k {
            let u = level.value(&points[i], &points[j])?;
            matrix[j][i] = u.clone();
            matrix[i][j] = u;
        }
    }
    Ok(GramSample {
        points: points.to_vec(),
        level: level.n(),
        kernel: tag,
        matrix,
    })
}

/// Sparse 0/1 matrix `Φ`: one row per feature index that fires on at least
/// one sample point, listing the columns (points) it fires on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeatureMatrix {
    pub rows: Vec<(Element, Vec<usize>)>,
    pub columns: usize,
    pub scale: ExactRational,
}

impl FeatureMatrix {
    pub fn build(level: &KernelLevel<'_>, points: &[Element]) -> Result<Self> {
        let mut rows: BTreeMap<Element, Vec<usize>> = BTreeMap::new();
        for (col, p) in points.iter().enumerate() {
            for v in level.features(p)? {
                rows.entry(v).or_default().push(col);
            }
        }
        Ok(FeatureMatrix {
            rows: rows.into_iter().collect(),
            columns: points.len(),
            scale: ExactRational::from_counts(1, level.scale_denominator()),
        })
    }

    /// `ΦᵀΦ` with integer entries.
    pub fn gram_counts(&self) -> Vec<Vec<u64>> {
        let mut counts = vec![vec![0u64; self.columns]; self.columns];
        for (_, cols) in &self.rows {
            for &i in cols {
                for &j in cols {
                    counts[i][j] += 1;
                }
            }
        }
        counts
    }

    /// SHA-256 over a canonical text rendering of `scale` and the rows.
    pub fn digest(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update(alloc::format!("scale {}\ncolumns {}\n", self.scale, self.columns).as_bytes());
        for (v, cols) in &self.rows {
            let cols: Vec<String> = cols.iter().map(|c| c.to_string()).collect();
            h.update(alloc::format!("{v}:{}\n", cols.join(",")).as_bytes());
        }
        h.finalize().into()
    }
}

/// Evidence that a Gram sample is a scaled `ΦᵀΦ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationCertificate {
    pub feature_rows: usize,
    pub scale: ExactRational,
    pub digest: [u8; 32],
}

/// Builds `Φ` for the sample and checks `scale·ΦᵀΦ = Gram` entrywise in exact
/// arithmetic. Success proves the sample Gram matrix is positive
/// semidefinite.
pub fn certify_psd_exact(kernel: &Kernel<'_>, points: &[Element], n: usize) -> Result<FactorizationCertificate> {
    let level = kernel.at_level(n)?;
    let sample = gram_at_level(kernel.tag(), &level, points)?;
    certify_sample(&level, &sample)
}

pub(crate) fn certify_sample(level: &KernelLevel<'_>, sample: &GramSample) -> Result<FactorizationCertificate> {
    let phi = FeatureMatrix::build(level, &sample.points)?;
    let counts = phi.gram_counts();
    for (i, row) in sample.matrix.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            let product = &ExactRational::from_counts(counts[i][j] as usize, 1) * &phi.scale;
            if &product != entry {
                return Err(Error::FactorizationMismatch { row: i, col: j });
            }
        }
    }
    Ok(FactorizationCertificate {
        feature_rows: phi.rows.len(),
        scale: phi.scale.clone(),
        digest: phi.digest(),
    })
}

/// Extreme eigenvalues of the float image of a Gram sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericPsd {
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub passed: bool,
}

/// Passes iff `λ_min ≥ −tolerance·max(1, λ_max)`.
pub fn check_psd_numeric(sample: &GramSample, tolerance: f64) -> Result<NumericPsd> {
    let k = sample.matrix.len();
    for i in 0..k {
        for j in 0..i {
            if sample.matrix[i][j] != sample.matrix[j][i] {
                return Err(Error::NotSymmetric { row: i, col: j });
            }
        }
    }
    if k == 0 {
        return Ok(NumericPsd {
            min_eigenvalue: 0.0,
            max_eigenvalue: 0.0,
            passed: true,
        });
    }
    let m = DMatrix::from_fn(k, k, |i, j| sample.matrix[i][j].to_f64());
    let eig = m.symmetric_eigenvalues();
    let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(NumericPsd {
        min_eigenvalue: min,
        max_eigenvalue: max,
        passed: min >= -tolerance * max.max(1.0),
    })
}

fn check_epsilon(eps: &ExactRational) -> Result<()> {
    if eps.is_positive() {
        Ok(())
    } else {
        Err(Error::NonPositiveEpsilon(eps.to_string()))
    }
}

/// Smallest `N ≥ m` with `(m + 1)/(N + 1) ≤ ε`.
///
/// For `d(x, y) < m` the overlap is at least `N − m` vertices, so
/// `1 − u_N(x, y) ≤ (m + 1)/(N + 1)`; the overlap actually loses at most
/// `m − 1` vertices, which makes the residual strictly below `ε`.
pub fn find_parameter_tree(m: usize, eps: &ExactRational) -> Result<usize> {
    check_epsilon(eps)?;
    // N + 1 ≥ (m + 1)·q / p
    let need = (BigInt::from(m + 1) * eps.denom()).div_ceil(eps.numer());
    let n = (need - 1u32)
        .to_usize()
        .ok_or_else(|| Error::Unsupported("epsilon too small for a machine-sized level".to_string()))?;
    Ok(n.max(m))
}

/// `max_{g ∈ E} (1 − |gG_n ∩ G_n| / |G_n|)` at one level.
pub(crate) fn folner_max_residual(level: &FolnerLevel<'_>, e_set: &[Element]) -> Result<ExactRational> {
    let mut worst = ExactRational::zero();
    for g in e_set {
        let r = (&ExactRational::one() - &level.translate_stats(g)?.intersection_ratio()).abs();
        if r > worst {
            worst = r;
        }
    }
    Ok(worst)
}

/// Outcome of scanning levels `0..=n_max` for the Følner kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FolnerSearch {
    pub found: Option<usize>,
    /// Last level actually examined.
    pub last_level: usize,
    /// The scan stopped early because `G_n` outgrew the element budget.
    pub budget_exhausted: bool,
}

pub(crate) fn search_folner(
    provider: &FolnerProvider<'_>,
    e_set: &[Element],
    eps: &ExactRational,
    n_max: usize,
) -> Result<FolnerSearch> {
    check_epsilon(eps)?;
    for g in e_set {
        provider.group().check(g)?;
    }
    let mut last = 0;
    for n in 0..=n_max {
        let level = match provider.level(n) {
            Ok(l) => l,
            Err(Error::BudgetExceeded { .. }) if n > 0 => {
                return Ok(FolnerSearch {
                    found: None,
                    last_level: last,
                    budget_exhausted: true,
                })
            }
            Err(e) => return Err(e),
        };
        last = n;
        if folner_max_residual(&level, e_set)? < *eps {
            return Ok(FolnerSearch {
                found: Some(n),
                last_level: n,
                budget_exhausted: false,
            });
        }
    }
    Ok(FolnerSearch {
        found: None,
        last_level: last,
        budget_exhausted: false,
    })
}

/// Smallest `n ≤ n_max` with `|1 − |gG_n ∩ G_n|/|G_n|| < ε` for every
/// `g ∈ E`, or `None`.
pub fn find_parameter_folner(
    provider: &FolnerProvider<'_>,
    e_set: &[Element],
    eps: &ExactRational,
    n_max: usize,
) -> Result<Option<usize>> {
    let search = search_folner(provider, e_set, eps, n_max)?;
    if search.budget_exhausted {
        return Err(Error::BudgetExceeded {
            budget: provider.group().budget(),
        });
    }
    Ok(search.found)
}

#[cfg(test)]
mod tests;
