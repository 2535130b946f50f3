//! Concrete finite p-groups built from cyclic groups, direct products,
//! wreath products with a cyclic top group, and unit groups of truncated
//! algebras.
//!
//! Elements are plain values checked against a parent [`GroupExpr`]; all
//! arithmetic goes through the parent so that cyclic moduli and wreath top
//! orders are known.

mod enumerate;
mod hom;
mod syntax;
mod twisted;

pub use enumerate::{conjugacy_class, enumerate_image, enumerate_subgroup, is_conjugate_finite, ImageSet};
pub use hom::{induced_wreath, PHom};
pub use syntax::{parse_element, parse_group};
pub use twisted::{lemma49_check, TwistedPowerReport};

use crate::error::{Error, Result};
use crate::magnus::poly::{PolyRing, TruncatedPoly};

/// Description of a finite p-group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupExpr {
    Trivial,
    /// Cyclic group of the given p-power order, written additively.
    Cyclic(u64),
    Direct(Vec<GroupExpr>),
    /// `base ≀ Z/top` with `top` a power of p.
    Wreath(Box<GroupExpr>, u64),
    /// Unit group (constant term 1) of a truncated algebra.
    Units(PolyRing),
}

/// An element of some [`GroupExpr`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PElement {
    Unit,
    Residue(u64),
    Tuple(Vec<PElement>),
    /// Base coordinates indexed by `Z/top`, then the top residue.
    Wreath(Vec<PElement>, u64),
    Poly(TruncatedPoly),
}

pub fn is_power_of(p: u64, n: u64) -> bool {
    if n == 0 || p < 2 {
        return false;
    }
    let mut n = n;
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// Least power of `p` strictly greater than `bound`.
pub fn least_power_above(p: u64, bound: u64) -> u64 {
    let mut q = 1u64;
    while q <= bound {
        q *= p;
    }
    q
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl GroupExpr {
    /// Checks that every constituent is a p-group for the single prime `p`.
    pub fn validate(&self, p: u32) -> Result<()> {
        let p64 = p as u64;
        match self {
            GroupExpr::Trivial => Ok(()),
            GroupExpr::Cyclic(n) => {
                if is_power_of(p64, *n) {
                    Ok(())
                } else {
                    Err(Error::TypeMismatch(format!("C({n}) is not a {p}-group")))
                }
            }
            GroupExpr::Direct(parts) => parts.iter().try_for_each(|g| g.validate(p)),
            GroupExpr::Wreath(base, top) => {
                if !is_power_of(p64, *top) {
                    return Err(Error::TypeMismatch(format!("wreath top {top} is not a power of {p}")));
                }
                base.validate(p)
            }
            GroupExpr::Units(ring) => {
                if ring.p != p {
                    return Err(Error::TypeMismatch(format!("truncated algebra over F_{} in a {p}-group", ring.p)));
                }
                if let Some(q) = ring.nilpotency {
                    if !is_power_of(p64, q as u64) {
                        return Err(Error::TypeMismatch(format!("nilpotency {q} is not a power of {p}")));
                    }
                }
                Ok(())
            }
        }
    }

    /// `log_p` of the group order (saturating).
    pub fn log_order(&self, p: u32) -> u64 {
        let lg = |n: u64| {
            let mut n = n;
            let mut e = 0;
            while n > 1 {
                n /= p as u64;
                e += 1;
            }
            e
        };
        match self {
            GroupExpr::Trivial => 0,
            GroupExpr::Cyclic(n) => lg(*n),
            GroupExpr::Direct(parts) => parts.iter().map(|g| g.log_order(p)).fold(0, u64::saturating_add),
            GroupExpr::Wreath(base, top) => base.log_order(p).saturating_mul(*top).saturating_add(lg(*top)),
            GroupExpr::Units(ring) => ring.unit_group_log_order(),
        }
    }

    /// Exact order when it fits below `cap`.
    pub fn order_at_most(&self, p: u32, cap: u64) -> Option<u64> {
        let e = self.log_order(p);
        (p as u64).checked_pow(u32::try_from(e).ok()?).filter(|&n| n <= cap)
    }

    pub fn identity(&self) -> PElement {
        match self {
            GroupExpr::Trivial => PElement::Unit,
            GroupExpr::Cyclic(_) => PElement::Residue(0),
            GroupExpr::Direct(parts) => PElement::Tuple(parts.iter().map(|g| g.identity()).collect()),
            GroupExpr::Wreath(base, top) => PElement::Wreath(vec![base.identity(); *top as usize], 0),
            GroupExpr::Units(ring) => PElement::Poly(ring.one()),
        }
    }

    /// Checks that `a` is an element of this group.
    pub fn check(&self, a: &PElement) -> Result<()> {
        let bad = || Error::TypeMismatch(format!("element {a:?} does not belong to {self}"));
        match (self, a) {
            (GroupExpr::Trivial, PElement::Unit) => Ok(()),
            (GroupExpr::Cyclic(n), PElement::Residue(r)) if r < n => Ok(()),
            (GroupExpr::Direct(parts), PElement::Tuple(xs)) if parts.len() == xs.len() => {
                parts.iter().zip(xs).try_for_each(|(g, x)| g.check(x))
            }
            (GroupExpr::Wreath(base, top), PElement::Wreath(xs, c)) if xs.len() as u64 == *top && c < top => {
                xs.iter().try_for_each(|x| base.check(x))
            }
            (GroupExpr::Units(ring), PElement::Poly(f)) if f.ring() == ring && f.constant() == 1 % ring.p => Ok(()),
            _ => Err(bad()),
        }
    }

    /// Product `a · b`. Both operands must belong to this group.
    pub fn mul(&self, a: &PElement, b: &PElement) -> PElement {
        match (self, a, b) {
            (GroupExpr::Trivial, _, _) => PElement::Unit,
            (GroupExpr::Cyclic(n), PElement::Residue(x), PElement::Residue(y)) => PElement::Residue((x + y) % n),
            (GroupExpr::Direct(parts), PElement::Tuple(xs), PElement::Tuple(ys)) => {
                PElement::Tuple(parts.iter().zip(xs.iter().zip(ys)).map(|(g, (x, y))| g.mul(x, y)).collect())
            }
            (GroupExpr::Wreath(base, top), PElement::Wreath(xs, c), PElement::Wreath(ys, d)) => {
                let n = *top as usize;
                let shift = *c as usize;
                let coords = (0..n).map(|i| base.mul(&xs[i], &ys[(i + shift) % n])).collect();
                PElement::Wreath(coords, (c + d) % top)
            }
            (GroupExpr::Units(_), PElement::Poly(f), PElement::Poly(g)) => PElement::Poly(f.mul(g)),
            _ => panic!("element type does not match group {self}"),
        }
    }

    pub fn try_mul(&self, a: &PElement, b: &PElement) -> Result<PElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    pub fn inv(&self, a: &PElement) -> PElement {
        match (self, a) {
            (GroupExpr::Trivial, _) => PElement::Unit,
            (GroupExpr::Cyclic(n), PElement::Residue(x)) => PElement::Residue((n - x) % n),
            (GroupExpr::Direct(parts), PElement::Tuple(xs)) => {
                PElement::Tuple(parts.iter().zip(xs).map(|(g, x)| g.inv(x)).collect())
            }
            (GroupExpr::Wreath(base, top), PElement::Wreath(xs, c)) => {
                // (b, c)⁻¹ = (j ↦ b[j - c]⁻¹, -c)
                let n = *top as usize;
                let c = *c as usize;
                let coords = (0..n).map(|j| base.inv(&xs[(j + n - c) % n])).collect();
                PElement::Wreath(coords, (*top - c as u64) % top)
            }
            (GroupExpr::Units(_), PElement::Poly(f)) => {
                PElement::Poly(f.inv().expect("unit group elements have constant term 1"))
            }
            _ => panic!("element type does not match group {self}"),
        }
    }

    pub fn try_inv(&self, a: &PElement) -> Result<PElement> {
        self.check(a)?;
        Ok(self.inv(a))
    }

    pub fn is_identity(&self, a: &PElement) -> bool {
        match (self, a) {
            (GroupExpr::Trivial, _) => true,
            (GroupExpr::Cyclic(_), PElement::Residue(x)) => *x == 0,
            (GroupExpr::Direct(parts), PElement::Tuple(xs)) => parts.iter().zip(xs).all(|(g, x)| g.is_identity(x)),
            (GroupExpr::Wreath(base, _), PElement::Wreath(xs, c)) => *c == 0 && xs.iter().all(|x| base.is_identity(x)),
            (GroupExpr::Units(_), PElement::Poly(f)) => f.is_one(),
            _ => false,
        }
    }

    pub fn pow(&self, a: &PElement, n: i64) -> PElement {
        let mut base = if n < 0 { self.inv(a) } else { a.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `a⁻¹ b⁻¹ a b`.
    pub fn commutator(&self, a: &PElement, b: &PElement) -> PElement {
        let ai = self.inv(a);
        let bi = self.inv(b);
        self.mul(&self.mul(&ai, &bi), &self.mul(a, b))
    }

    /// `s · a · s⁻¹`.
    pub fn conjugate(&self, s: &PElement, a: &PElement) -> PElement {
        self.mul(&self.mul(s, a), &self.inv(s))
    }

    /// Least `p^t` with `a^{p^t} = 1`, found by repeated p-th powering.
    pub fn order(&self, a: &PElement, p: u32) -> u64 {
        let bound = self.log_order(p);
        let mut x = a.clone();
        let mut ord = 1u64;
        let mut steps = 0u64;
        while !self.is_identity(&x) {
            x = self.pow(&x, p as i64);
            ord = ord.saturating_mul(p as u64);
            steps += 1;
            assert!(steps <= bound.max(1), "element order exceeds the group order");
        }
        ord
    }

    /// Whether all elements in `gens` commute pairwise.
    pub fn commute_pairwise(&self, gens: &[PElement]) -> bool {
        gens.iter().enumerate().all(|(i, a)| gens[i + 1..].iter().all(|b| self.mul(a, b) == self.mul(b, a)))
    }
}

impl std::fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&syntax::format_group(self))
    }
}

impl PElement {
    pub fn literal(&self) -> String {
        syntax::format_element(self)
    }
}

impl std::fmt::Display for PElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&syntax::format_element(self))
    }
}
