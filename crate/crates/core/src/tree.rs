//! The geodesic-ray overlap kernel on a free group.
//!
//! The Cayley graph of a free group is a tree. Fix the end of the tree given
//! by the ray `e, a, a², …` along the first generator. From every vertex `x`
//! there is a unique geodesic ray `γ_x` that eventually runs along that base
//! ray. The kernel at level `n` is
//!
//! ```text
//! u_n(x, y) = |γ_xⁿ ∩ γ_yⁿ| / (n + 1)
//! ```
//!
//! where `γ_xⁿ` is the set of the first `n + 1` vertices of `γ_x`. It is a
//! sum of squares: `u_n(x, y) = Σ_v φ_v(x) φ_v(y) / (n + 1)` with
//! `φ_v(x) = 1` exactly when `v ∈ γ_xⁿ`.

use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::group::{Element, Group, GroupKind, Letter, Word};
use crate::{Error, ExactRational, Result};

/// Human-readable description of the fixed base ray, recorded in certificates.
pub const BASE_RAY: &str = "e, a, a^2, a^3, ... (positive powers of the first generator)";

/// The first `n + 1` vertices of `γ_x`, starting at `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeodesicRaySegment {
    pub base: Element,
    pub vertices: Vec<Element>,
}

impl GeodesicRaySegment {
    /// Length in edges.
    pub fn length(&self) -> usize {
        self.vertices.len() - 1
    }
}

/// The 0/1 feature vector of a point: its support is `γ_xⁿ`, its scale
/// `1 / (n + 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeFeatureVector {
    pub owner: Element,
    pub length: usize,
    pub support: BTreeSet<Element>,
}

impl TreeFeatureVector {
    pub fn scale(&self) -> ExactRational {
        ExactRational::from_counts(1, self.length + 1)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TreeKernel<'g> {
    group: &'g Group,
}

fn base_letter() -> Letter {
    Letter::new(1, false)
}

impl<'g> TreeKernel<'g> {
    /// Fails unless `group` is a free group.
    pub fn new(group: &'g Group) -> Result<Self> {
        match group.kind() {
            GroupKind::Free { .. } => Ok(TreeKernel { group }),
            other => Err(Error::Unsupported(alloc::format!(
                "the ray-overlap kernel needs a free group, got {other}"
            ))),
        }
    }

    pub fn group(&self) -> &'g Group {
        self.group
    }

    fn word<'a>(&self, x: &'a Element) -> Result<&'a Word> {
        self.group.check(x)?;
        Ok(x.as_word().expect("free group elements are words"))
    }

    /// The first `n + 1` vertices of the ray from `x` toward the base end.
    ///
    /// Writing `x = aʲ·u` with `j` maximal, the ray strips trailing letters
    /// of `x` down to `aʲ`, then climbs `aʲ⁺¹, aʲ⁺², …`.
    pub fn canonical_ray(&self, x: &Element, n: usize) -> Result<GeodesicRaySegment> {
        let w = self.word(x)?;
        let j = w.leading_run(base_letter());
        let vertices = (j..=w.len())
            .rev()
            .map(|l| Element::Word(w.prefix(l)))
            .chain((j + 1..).map(|k| Element::Word(Word::power(base_letter(), k as i64))))
            .take(n + 1)
            .collect();
        Ok(GeodesicRaySegment {
            base: x.clone(),
            vertices,
        })
    }

    /// `|γ_xⁿ ∩ γ_yⁿ|`, counted from where the two rays merge.
    ///
    /// The rays from `x` and `y` coincide from their merge vertex `c` on.
    /// With `dx = d(x, c)`, `dy = d(y, c)` the shared part of the two
    /// segments has `n + 1 − max(dx, dy)` vertices when that is positive.
    pub fn overlap(&self, x: &Element, y: &Element, n: usize) -> Result<usize> {
        let (dx, dy) = merge_offsets(self.word(x)?, self.word(y)?);
        Ok((n + 1).saturating_sub(dx.max(dy)))
    }

    /// `u_n(x, y) = overlap / (n + 1)`.
    pub fn value(&self, x: &Element, y: &Element, n: usize) -> Result<ExactRational> {
        Ok(ExactRational::from_counts(self.overlap(x, y, n)?, n + 1))
    }

    pub fn feature_vector(&self, x: &Element, n: usize) -> Result<TreeFeatureVector> {
        let ray = self.canonical_ray(x, n)?;
        Ok(TreeFeatureVector {
            owner: x.clone(),
            length: n,
            support: ray.vertices.into_iter().collect(),
        })
    }

    /// `u_n(x, y)` as the inner product of the two feature vectors.
    pub fn value_via_features(&self, x: &Element, y: &Element, n: usize) -> Result<ExactRational> {
        let fx = self.feature_vector(x, n)?;
        let fy = self.feature_vector(y, n)?;
        let common = fx.support.intersection(&fy.support).count();
        Ok(&ExactRational::from_counts(common, 1) * &fx.scale())
    }

    /// A pair `(x, y)` with `x⁻¹y = z` at which `|1 − u_n(x, y)|` is as large
    /// as it gets over the whole group: one point lies on the other's ray.
    ///
    /// Since `max(dx, dy) ≤ d(x, y)` always, the sup of `1 − u_n` over pairs
    /// with `x⁻¹y = z` is `min(|z|, n + 1) / (n + 1)`, attained here.
    pub fn worst_pair(&self, z: &Element) -> Result<(Element, Element)> {
        let w = self.word(z)?;
        if w.is_identity() {
            return Ok((z.clone(), z.clone()));
        }
        let zi = w.inverse();
        let first = zi.letters()[0];
        let GroupKind::Free { rank } = *self.group.kind() else { unreachable!() };
        // y = c, x = c·z⁻¹ with no cancellation and c ≠ a: then y ∈ γ_x.
        let pick = (1..=rank)
            .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
            .find(|&c| c != base_letter() && c.inverse() != first);
        match pick {
            Some(c) => {
                let y = Word::reduce([c]);
                let x = y.mul(&zi);
                Ok((Element::Word(x), Element::Word(y)))
            }
            None => {
                let (x, y) = self.worst_pair(&Element::Word(zi))?;
                Ok((y, x))
            }
        }
    }
}

/// Distances from `x` and `y` to the vertex where their rays merge.
fn merge_offsets(x: &Word, y: &Word) -> (usize, usize) {
    let jx = x.leading_run(base_letter());
    let jy = y.leading_run(base_letter());
    let top = jx.max(jy);
    let p = x.common_prefix_len(y);
    if p >= top {
        (x.len() - p, y.len() - p)
    } else {
        (x.len() - jx + (top - jx), y.len() - jy + (top - jy))
    }
}

impl core::fmt::Display for GeodesicRaySegment {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let parts: Vec<_> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}
