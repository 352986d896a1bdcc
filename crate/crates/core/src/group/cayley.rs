use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{Element, Group};
use crate::{Error, Result};

/// Memoized BFS spheres around the identity.
#[derive(Default)]
pub(super) struct BallCache {
    pub(super) layers: Vec<Vec<Element>>,
    lengths: BTreeMap<Element, usize>,
    /// Set once a layer comes out empty (finite groups only).
    pub(super) complete: bool,
}

impl BallCache {
    pub(super) fn ball(&self, radius: usize) -> Vec<Element> {
        self.layers
            .iter()
            .take(radius.saturating_add(1))
            .flat_map(|layer| layer.iter().cloned())
            .collect()
    }

    fn covers(&self, radius: usize) -> bool {
        self.complete || self.layers.len() > radius
    }

    fn total(&self) -> usize {
        self.lengths.len()
    }
}

impl Group {
    /// Grows the cached layers until sphere `radius` is known.
    pub(super) fn extend_to(&self, radius: usize) -> Result<()> {
        if self.cache.read().covers(radius) {
            return Ok(());
        }
        let mut cache = self.cache.write();
        if cache.layers.is_empty() {
            let e = self.identity();
            cache.lengths.insert(e.clone(), 0);
            cache.layers.push(alloc::vec![e]);
        }
        while !cache.covers(radius) {
            self.push_layer(&mut cache)?;
        }
        Ok(())
    }

    fn push_layer(&self, cache: &mut BallCache) -> Result<()> {
        let depth = cache.layers.len();
        let mut next = Vec::new();
        {
            let frontier = &cache.layers[depth - 1];
            for x in frontier {
                for s in &self.generators {
                    let y = self.mul(x, s);
                    if !cache.lengths.contains_key(&y) {
                        next.push(y);
                    }
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        if cache.total() + next.len() > self.budget {
            return Err(Error::BudgetExceeded {
                budget: self.budget,
            });
        }
        if next.is_empty() {
            cache.complete = true;
            return Ok(());
        }
        for y in &next {
            cache.lengths.insert(y.clone(), depth);
        }
        cache.layers.push(next);
        Ok(())
    }

    pub(super) fn bfs_length(&self, x: &Element) -> Result<usize> {
        if let Some(&len) = self.cache.read().lengths.get(x) {
            return Ok(len);
        }
        let mut radius = self.cache.read().layers.len();
        loop {
            self.extend_to(radius)?;
            let cache = self.cache.read();
            if let Some(&len) = cache.lengths.get(x) {
                return Ok(len);
            }
            if cache.complete {
                unreachable!("a complete enumeration contains every element");
            }
            radius = cache.layers.len();
        }
    }
}
