//! Exhaustive enumeration of generated subgroups and conjugacy classes.

use std::collections::HashSet;

use super::{GroupExpr, PElement, PHom};
use crate::error::{Error, Result};
use crate::par::{self, Execution};

/// A finite set of group elements in deterministic (sorted) order.
#[derive(Clone, Debug)]
pub struct ImageSet {
    elements: Vec<PElement>,
    index: HashSet<PElement>,
}

impl ImageSet {
    fn from_set(index: HashSet<PElement>) -> Self {
        let mut elements: Vec<PElement> = index.iter().cloned().collect();
        elements.sort_unstable();
        ImageSet { elements, index }
    }

    pub fn elements(&self) -> &[PElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, a: &PElement) -> bool {
        self.index.contains(a)
    }
}

/// Closure of `{a}` under `x ↦ f(x, g)` for every `g` in `gens`.
fn closure<F>(
    start: PElement,
    gens: &[PElement],
    cap: usize,
    exec: Execution,
    what: &str,
    step: F,
) -> Result<HashSet<PElement>>
where
    F: Fn(&PElement, &PElement) -> PElement + Sync + Send,
{
    let mut seen = HashSet::new();
    seen.insert(start.clone());
    let mut frontier = vec![start];
    while !frontier.is_empty() {
        let products: Vec<Vec<PElement>> = par::map(exec, &frontier, |x| gens.iter().map(|g| step(x, g)).collect());
        let mut next = Vec::new();
        for y in products.into_iter().flatten() {
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return Err(Error::cap(what, cap));
                }
                seen.insert(y.clone());
                next.push(y);
            }
        }
        frontier = next;
    }
    Ok(seen)
}

/// The subgroup generated by `gens` (closed under right multiplication,
/// which suffices in a finite group).
pub fn enumerate_subgroup(group: &GroupExpr, gens: &[PElement], cap: usize, exec: Execution) -> Result<ImageSet> {
    let set = closure(group.identity(), gens, cap, exec, "subgroup enumeration", |x, g| group.mul(x, g))?;
    Ok(ImageSet::from_set(set))
}

pub fn enumerate_image(hom: &PHom, cap: usize, exec: Execution) -> Result<ImageSet> {
    enumerate_subgroup(hom.target(), hom.images(), cap, exec)
}

/// Conjugacy class of `a` in the subgroup generated by `gens`.
pub fn conjugacy_class(
    group: &GroupExpr,
    gens: &[PElement],
    a: &PElement,
    cap: usize,
    exec: Execution,
) -> Result<ImageSet> {
    let set = closure(a.clone(), gens, cap, exec, "conjugacy class enumeration", |x, g| group.conjugate(g, x))?;
    Ok(ImageSet::from_set(set))
}

/// Searches `set` for `s` with `s · g · s⁻¹ = h`.
pub fn is_conjugate_finite(
    group: &GroupExpr,
    set: &[PElement],
    g: &PElement,
    h: &PElement,
    exec: Execution,
) -> Option<PElement> {
    par::find_first(exec, set, |s| group.conjugate(s, g) == *h).cloned()
}
