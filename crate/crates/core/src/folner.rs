//! The Følner-translate kernel on amenable groups.
//!
//! Given finite sets `G_n`, the kernel is
//!
//! ```text
//! u_n(x, y) = |xG_n ∩ yG_n| / |G_n|
//! ```
//!
//! It is a sum of squares over the index set of translates: `g ∈ xG_n` exactly
//! when `x ∈ gG_n⁻¹`, so `u_n(x, y) = Σ_g χ(g ∈ xG_n) χ(g ∈ yG_n) / |G_n|`.
//! It is close to one on `x⁻¹y = g` precisely when the Følner defect
//! `|gG_n △ G_n| / |G_n|` is small.

use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::group::{Element, Group, GroupKind};
use crate::{Error, ExactRational, Result};

/// How `G_n` is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FolnerStrategy {
    /// `{0, …, n}^d` in `ℤ^d`.
    Box,
    /// The word-metric ball of radius `n`.
    Ball,
    /// The whole (finite) group at every level.
    WholeGroup,
}

impl fmt::Display for FolnerStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FolnerStrategy::Box => "box",
            FolnerStrategy::Ball => "ball",
            FolnerStrategy::WholeGroup => "whole",
        })
    }
}

impl FromStr for FolnerStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "box" => Ok(FolnerStrategy::Box),
            "ball" => Ok(FolnerStrategy::Ball),
            "whole" => Ok(FolnerStrategy::WholeGroup),
            _ => Err(Error::parse(s, "expected box, ball or whole")),
        }
    }
}

/// A sequence of finite sets `G_n` on a fixed group.
#[derive(Clone, Copy, Debug)]
pub struct FolnerProvider<'g> {
    group: &'g Group,
    strategy: FolnerStrategy,
}

impl<'g> FolnerProvider<'g> {
    /// `box` needs `ℤ^d`; `whole` needs a finite group; `ball` works anywhere.
    pub fn new(group: &'g Group, strategy: FolnerStrategy) -> Result<Self> {
        match (strategy, group.kind()) {
            (FolnerStrategy::Box, GroupKind::Abelian { .. }) | (FolnerStrategy::Ball, _) => {}
            (FolnerStrategy::WholeGroup, _) if group.is_finite() => {}
            (s, k) => {
                return Err(Error::Unsupported(alloc::format!(
                    "strategy `{s}` is not available on {k}"
                )))
            }
        }
        Ok(FolnerProvider { group, strategy })
    }

    pub fn group(&self) -> &'g Group {
        self.group
    }

    pub fn strategy(&self) -> FolnerStrategy {
        self.strategy
    }

    /// Whether the sets are known to form a Følner sequence. Balls only are
    /// when the group has polynomial growth; on a non-abelian free group the
    /// ball provider is still constructed but its defect does not vanish.
    pub fn is_folner(&self) -> bool {
        match self.strategy {
            FolnerStrategy::Ball => self.group.kind().has_polynomial_growth(),
            _ => true,
        }
    }

    pub fn folner_set(&self, n: usize) -> Result<Vec<Element>> {
        match self.strategy {
            FolnerStrategy::Ball => self.group.ball(n),
            FolnerStrategy::WholeGroup => self.group.elements(),
            FolnerStrategy::Box => {
                let GroupKind::Abelian { dim } = *self.group.kind() else { unreachable!() };
                box_set(dim as usize, n, self.group.budget())
            }
        }
    }

    /// `G_n` as a set, for repeated membership queries at one level.
    pub fn level(&self, n: usize) -> Result<FolnerLevel<'g>> {
        Ok(FolnerLevel {
            group: self.group,
            n,
            members: self.folner_set(n)?.into_iter().collect(),
        })
    }

    pub fn value(&self, x: &Element, y: &Element, n: usize) -> Result<ExactRational> {
        self.level(n)?.value(x, y)
    }

    pub fn defect(&self, g: &Element, n: usize) -> Result<ExactRational> {
        self.level(n)?.defect(g)
    }

    pub fn translate_feature_index(&self, x: &Element, n: usize) -> Result<TranslateFeatureIndex> {
        self.level(n)?.translate_index(x)
    }

    pub fn support_set(&self, n: usize) -> Result<BTreeSet<Element>> {
        self.level(n)?.support_set()
    }
}

fn box_set(dim: usize, n: usize, budget: usize) -> Result<Vec<Element>> {
    let side = n + 1;
    let total = u32::try_from(dim)
        .ok()
        .and_then(|d| side.checked_pow(d))
        .filter(|&t| t <= budget)
        .ok_or(Error::BudgetExceeded { budget })?;
    let mut out = Vec::with_capacity(total);
    let mut v = vec![0i64; dim];
    for _ in 0..total {
        out.push(Element::Vector(v.clone()));
        for c in v.iter_mut().rev() {
            *c += 1;
            if *c as usize <= n {
                break;
            }
            *c = 0;
        }
    }
    Ok(out)
}

/// Sizes of `gG_n` against `G_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TranslateStats {
    pub size: usize,
    pub intersection: usize,
    pub union: usize,
    pub symmetric_difference: usize,
}

impl TranslateStats {
    pub fn intersection_ratio(&self) -> ExactRational {
        ExactRational::from_counts(self.intersection, self.size)
    }

    pub fn union_ratio(&self) -> ExactRational {
        ExactRational::from_counts(self.union, self.size)
    }

    pub fn defect(&self) -> ExactRational {
        ExactRational::from_counts(self.symmetric_difference, self.size)
    }
}

/// The index set `xG_n = {g : x ∈ gG_n⁻¹}` of the features that fire on `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslateFeatureIndex {
    pub owner: Element,
    pub level: usize,
    pub indices: BTreeSet<Element>,
}

/// One materialized set `G_n`.
#[derive(Clone, Debug)]
pub struct FolnerLevel<'g> {
    group: &'g Group,
    n: usize,
    members: BTreeSet<Element>,
}

impl<'g> FolnerLevel<'g> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &BTreeSet<Element> {
        &self.members
    }

    /// `|zG_n ∩ G_n|`.
    fn translate_intersection(&self, z: &Element) -> usize {
        self.members
            .iter()
            .filter(|m| self.members.contains(&self.group.mul(z, m)))
            .count()
    }

    /// `u_n(x, y) = |x⁻¹yG_n ∩ G_n| / |G_n|`.
    pub fn value(&self, x: &Element, y: &Element) -> Result<ExactRational> {
        let z = self.group.quotient(x, y)?;
        Ok(ExactRational::from_counts(self.translate_intersection(&z), self.size()))
    }

    /// Set arithmetic on `gG_n` and `G_n`, with the symmetric difference
    /// counted element by element.
    pub fn translate_stats(&self, g: &Element) -> Result<TranslateStats> {
        self.group.check(g)?;
        let shifted: BTreeSet<Element> = self.members.iter().map(|m| self.group.mul(g, m)).collect();
        let intersection = shifted.intersection(&self.members).count();
        let union = shifted.union(&self.members).count();
        let symmetric_difference = shifted.symmetric_difference(&self.members).count();
        Ok(TranslateStats {
            size: self.size(),
            intersection,
            union,
            symmetric_difference,
        })
    }

    /// `|gG_n △ G_n| / |G_n|`.
    pub fn defect(&self, g: &Element) -> Result<ExactRational> {
        Ok(self.translate_stats(g)?.defect())
    }

    pub fn translate_index(&self, x: &Element) -> Result<TranslateFeatureIndex> {
        self.group.check(x)?;
        Ok(TranslateFeatureIndex {
            owner: x.clone(),
            level: self.n,
            indices: self.members.iter().map(|m| self.group.mul(x, m)).collect(),
        })
    }

    /// `F = G_n·G_n⁻¹`: `u_n(x, y) ≠ 0` exactly when `x⁻¹y ∈ F`.
    pub fn support_set(&self) -> Result<BTreeSet<Element>> {
        let budget = self.group.budget();
        if self.size().saturating_mul(self.size()) > budget.saturating_mul(16) {
            return Err(Error::BudgetExceeded { budget });
        }
        let inverses: Vec<Element> = self.members.iter().map(|m| self.group.inv(m)).collect();
        let mut out = BTreeSet::new();
        for a in &self.members {
            for b in &inverses {
                out.insert(self.group.mul(a, b));
            }
        }
        Ok(out)
    }

    /// `R = max |g|` over `G_n`; the support lies in the ball of radius `2R`.
    pub fn radius(&self) -> Result<usize> {
        self.members
            .iter()
            .map(|m| self.group.length(m))
            .try_fold(0, |acc, l| l.map(|l| acc.max(l)))
    }
}

impl fmt::Display for TranslateFeatureIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<_> = self.indices.iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}
