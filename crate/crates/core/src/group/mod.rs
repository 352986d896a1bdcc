//! Concrete finitely generated groups with word metrics.
//!
//! Every model keeps its elements in a canonical form (reduced words, integer
//! vectors, Heisenberg triples, residues, pairs) so that group equality is
//! structural equality. Balls in the Cayley graph are enumerated by
//! breadth-first search and memoized per [`Group`] instance.

mod cayley;
mod notation;
mod word;

use alloc::boxed::Box;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use spin::RwLock;

pub use notation::split_element_list;
pub use word::{Letter, Word};

use crate::{Error, Result};
use cayley::BallCache;

/// Default cap on the number of elements a single [`Group`] may enumerate.
pub const DEFAULT_ELEMENT_BUDGET: usize = 1_000_000;

/// Largest supported free-group rank (one letter per generator).
pub const MAX_FREE_RANK: u32 = 25;

/// Which group, with its size parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// Free group on `rank` generators `a, b, c, …`.
    Free { rank: u32 },
    /// `ℤ^dim` with the standard basis as generators.
    Abelian { dim: u32 },
    /// Discrete Heisenberg group of upper unitriangular integer 3×3 matrices.
    Heisenberg,
    /// `ℤ/order` generated by `±1`.
    Cyclic { order: u64 },
    /// Direct product; generators are the union of the factors' generators.
    Product(Box<GroupKind>, Box<GroupKind>),
}

impl GroupKind {
    fn validate(&self) -> Result<()> {
        match self {
            GroupKind::Free { rank } if *rank == 0 || *rank > MAX_FREE_RANK => Err(
                Error::Unsupported(alloc::format!("free group rank must be in 1..={MAX_FREE_RANK}")),
            ),
            GroupKind::Abelian { dim: 0 } => {
                Err(Error::Unsupported("abelian dimension must be positive".to_string()))
            }
            GroupKind::Cyclic { order } if *order < 2 => {
                Err(Error::Unsupported("cyclic order must be at least 2".to_string()))
            }
            GroupKind::Product(l, r) => {
                l.validate()?;
                r.validate()
            }
            _ => Ok(()),
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            GroupKind::Cyclic { .. } => true,
            GroupKind::Product(l, r) => l.is_finite() && r.is_finite(),
            _ => false,
        }
    }

    /// Polynomial growth, hence subexponential: balls form a Følner sequence.
    pub fn has_polynomial_growth(&self) -> bool {
        match self {
            GroupKind::Free { rank } => *rank == 1,
            GroupKind::Product(l, r) => l.has_polynomial_growth() && r.has_polynomial_growth(),
            _ => true,
        }
    }
}

/// Group element in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Word(Word),
    Vector(Vec<i64>),
    /// `(x, y, z)` standing for the matrix `[[1, x, z], [0, 1, y], [0, 0, 1]]`.
    Heisenberg([i64; 3]),
    Residue(u64),
    Pair(Box<Element>, Box<Element>),
}

impl Element {
    pub fn pair(left: Element, right: Element) -> Self {
        Element::Pair(Box::new(left), Box::new(right))
    }

    pub fn as_word(&self) -> Option<&Word> {
        match self {
            Element::Word(w) => Some(w),
            _ => None,
        }
    }
}

/// A computable group together with its fixed symmetric generating set.
pub struct Group {
    kind: GroupKind,
    budget: usize,
    generators: Vec<Element>,
    factors: Option<Box<(Group, Group)>>,
    cache: RwLock<BallCache>,
}

impl core::fmt::Debug for Group {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Group")
            .field("kind", &self.kind)
            .field("budget", &self.budget)
            .finish()
    }
}

impl Group {
    pub fn new(kind: GroupKind) -> Result<Self> {
        Self::with_budget(kind, DEFAULT_ELEMENT_BUDGET)
    }

    pub fn with_budget(kind: GroupKind, budget: usize) -> Result<Self> {
        kind.validate()?;
        let factors = match &kind {
            GroupKind::Product(l, r) => Some(Box::new((
                Group::with_budget((**l).clone(), budget)?,
                Group::with_budget((**r).clone(), budget)?,
            ))),
            _ => None,
        };
        let mut group = Group {
            generators: Vec::new(),
            kind,
            budget,
            factors,
            cache: RwLock::new(BallCache::default()),
        };
        group.generators = group.build_generators();
        Ok(group)
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// The symmetric generating set, in a fixed order.
    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn is_finite(&self) -> bool {
        self.kind.is_finite()
    }

    pub fn identity(&self) -> Element {
        identity_of(&self.kind)
    }

    /// Whether `x` is a canonical element of this model.
    pub fn contains(&self, x: &Element) -> bool {
        contains(&self.kind, x)
    }

    pub(crate) fn check(&self, x: &Element) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::ModelMismatch {
                element: x.to_string(),
                group: self.kind.to_string(),
            })
        }
    }

    pub fn multiply(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul(x, y))
    }

    pub fn inverse(&self, x: &Element) -> Result<Element> {
        self.check(x)?;
        Ok(self.inv(x))
    }

    /// `x⁻¹y`, the quantity every kernel condition is phrased in.
    pub fn quotient(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul(&self.inv(x), y))
    }

    pub(crate) fn mul(&self, x: &Element, y: &Element) -> Element {
        mul(&self.kind, x, y)
    }

    pub(crate) fn inv(&self, x: &Element) -> Element {
        inv(&self.kind, x)
    }

    /// Length of a shortest generator word equal to `x`.
    ///
    /// Free and abelian groups use closed forms; Heisenberg and cyclic groups
    /// look the element up in the memoized BFS layers, which fails with
    /// [`Error::BudgetExceeded`] if `x` lies beyond the enumerable region.
    pub fn word_length(&self, x: &Element) -> Result<usize> {
        self.check(x)?;
        self.length(x)
    }

    pub(crate) fn length(&self, x: &Element) -> Result<usize> {
        match (&self.kind, x) {
            (GroupKind::Free { .. }, Element::Word(w)) => Ok(w.len()),
            (GroupKind::Abelian { .. }, Element::Vector(v)) => {
                Ok(v.iter().map(|c| c.unsigned_abs() as usize).sum())
            }
            (GroupKind::Product(..), Element::Pair(l, r)) => {
                let factors = self.factors.as_ref().expect("product factors");
                Ok(factors.0.length(l)? + factors.1.length(r)?)
            }
            _ => self.bfs_length(x),
        }
    }

    pub fn distance(&self, x: &Element, y: &Element) -> Result<usize> {
        let q = self.quotient(x, y)?;
        self.length(&q)
    }

    /// All elements of word length at most `radius`, ordered by length and
    /// then canonically within each sphere.
    pub fn ball(&self, radius: usize) -> Result<Vec<Element>> {
        self.extend_to(radius)?;
        let cache = self.cache.read();
        Ok(cache.ball(radius))
    }

    /// Elements of word length exactly `radius`.
    pub fn sphere(&self, radius: usize) -> Result<Vec<Element>> {
        self.extend_to(radius)?;
        let cache = self.cache.read();
        Ok(cache.layers.get(radius).cloned().unwrap_or_default())
    }

    /// `|ball(k)|` for `k = 0..=radius`: the growth function.
    pub fn ball_sizes(&self, radius: usize) -> Result<Vec<usize>> {
        self.extend_to(radius)?;
        let cache = self.cache.read();
        let mut sizes = Vec::with_capacity(radius + 1);
        let mut total = 0;
        for k in 0..=radius {
            total += cache.layers.get(k).map_or(0, Vec::len);
            sizes.push(total);
        }
        Ok(sizes)
    }

    /// Every element of a finite group.
    pub fn elements(&self) -> Result<Vec<Element>> {
        if !self.is_finite() {
            return Err(Error::Unsupported(alloc::format!(
                "{} is infinite",
                self.kind
            )));
        }
        let mut radius = 0;
        loop {
            self.extend_to(radius)?;
            let cache = self.cache.read();
            if cache.complete {
                return Ok(cache.ball(usize::MAX));
            }
            radius = cache.layers.len();
        }
    }

    /// A product of `len` uniformly random generators, `len` uniform in
    /// `0..=max_len`.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, max_len: usize) -> Element {
        let len = rng.gen_range(0..=max_len);
        let mut x = self.identity();
        for _ in 0..len {
            let s = &self.generators[rng.gen_range(0..self.generators.len())];
            x = self.mul(&x, s);
        }
        x
    }

    fn build_generators(&self) -> Vec<Element> {
        let mut gens = match &self.kind {
            GroupKind::Free { rank } => (1..=*rank)
                .flat_map(|g| {
                    [false, true]
                        .into_iter()
                        .map(move |inv| Element::Word(Word::reduce([Letter::new(g, inv)])))
                })
                .collect(),
            GroupKind::Abelian { dim } => {
                let d = *dim as usize;
                let mut gens = Vec::with_capacity(2 * d);
                for i in 0..d {
                    for s in [1, -1] {
                        let mut v = vec![0; d];
                        v[i] = s;
                        gens.push(Element::Vector(v));
                    }
                }
                gens
            }
            GroupKind::Heisenberg => vec![
                Element::Heisenberg([1, 0, 0]),
                Element::Heisenberg([-1, 0, 0]),
                Element::Heisenberg([0, 1, 0]),
                Element::Heisenberg([0, -1, 0]),
            ],
            GroupKind::Cyclic { order } => vec![Element::Residue(1), Element::Residue(order - 1)],
            GroupKind::Product(..) => {
                let factors = self.factors.as_ref().expect("product factors");
                let (l, r) = (&factors.0, &factors.1);
                let mut gens: Vec<Element> = l
                    .generators()
                    .iter()
                    .map(|g| Element::pair(g.clone(), r.identity()))
                    .collect();
                gens.extend(r.generators().iter().map(|g| Element::pair(l.identity(), g.clone())));
                gens
            }
        };
        // ℤ/2: +1 and -1 coincide.
        let mut seen = Vec::new();
        gens.retain(|g| {
            if seen.contains(g) {
                false
            } else {
                seen.push(g.clone());
                true
            }
        });
        gens
    }
}

fn identity_of(kind: &GroupKind) -> Element {
    match kind {
        GroupKind::Free { .. } => Element::Word(Word::identity()),
        GroupKind::Abelian { dim } => Element::Vector(vec![0; *dim as usize]),
        GroupKind::Heisenberg => Element::Heisenberg([0, 0, 0]),
        GroupKind::Cyclic { .. } => Element::Residue(0),
        GroupKind::Product(l, r) => Element::pair(identity_of(l), identity_of(r)),
    }
}

fn contains(kind: &GroupKind, x: &Element) -> bool {
    match (kind, x) {
        (GroupKind::Free { rank }, Element::Word(w)) => w.max_generator() <= *rank && w.is_reduced(),
        (GroupKind::Abelian { dim }, Element::Vector(v)) => v.len() == *dim as usize,
        (GroupKind::Heisenberg, Element::Heisenberg(_)) => true,
        (GroupKind::Cyclic { order }, Element::Residue(r)) => r < order,
        (GroupKind::Product(l, r), Element::Pair(x, y)) => contains(l, x) && contains(r, y),
        _ => false,
    }
}

fn mul(kind: &GroupKind, x: &Element, y: &Element) -> Element {
    match (kind, x, y) {
        (GroupKind::Free { .. }, Element::Word(u), Element::Word(v)) => Element::Word(u.mul(v)),
        (GroupKind::Abelian { .. }, Element::Vector(u), Element::Vector(v)) => {
            Element::Vector(u.iter().zip(v).map(|(a, b)| a + b).collect())
        }
        (GroupKind::Heisenberg, Element::Heisenberg([a, b, c]), Element::Heisenberg([x, y, z])) => {
            Element::Heisenberg([a + x, b + y, c + z + a * y])
        }
        (GroupKind::Cyclic { order }, Element::Residue(a), Element::Residue(b)) => {
            Element::Residue(((*a as u128 + *b as u128) % *order as u128) as u64)
        }
        (GroupKind::Product(l, r), Element::Pair(a, b), Element::Pair(x, y)) => {
            Element::pair(mul(l, a, x), mul(r, b, y))
        }
        _ => unreachable!("operands checked against the model"),
    }
}

fn inv(kind: &GroupKind, x: &Element) -> Element {
    match (kind, x) {
        (GroupKind::Free { .. }, Element::Word(w)) => Element::Word(w.inverse()),
        (GroupKind::Abelian { .. }, Element::Vector(v)) => {
            Element::Vector(v.iter().map(|c| -c).collect())
        }
        (GroupKind::Heisenberg, Element::Heisenberg([a, b, c])) => {
            Element::Heisenberg([-a, -b, a * b - c])
        }
        (GroupKind::Cyclic { order }, Element::Residue(r)) => {
            Element::Residue(if *r == 0 { 0 } else { order - r })
        }
        (GroupKind::Product(l, r), Element::Pair(a, b)) => Element::pair(inv(l, a), inv(r, b)),
        _ => unreachable!("operand checked against the model"),
    }
}

#[cfg(test)]
mod tests;
