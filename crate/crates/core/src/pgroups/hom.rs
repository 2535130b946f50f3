//! Homomorphisms from free groups into concrete p-groups.

use super::{GroupExpr, PElement};
use crate::error::{Error, Result};
use crate::schreier::ExponentHom;
use crate::words::Word;

/// A homomorphism `F(rank) → target`, given by generator images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PHom {
    p: u32,
    target: GroupExpr,
    images: Vec<PElement>,
    inverses: Vec<PElement>,
}

impl PHom {
    pub fn new(p: u32, target: GroupExpr, images: Vec<PElement>) -> Result<Self> {
        target.validate(p)?;
        for a in &images {
            target.check(a)?;
        }
        let inverses = images.iter().map(|a| target.inv(a)).collect();
        Ok(PHom { p, target, images, inverses })
    }

    /// The trivial homomorphism on `rank` generators.
    pub fn trivial(p: u32, rank: usize) -> Self {
        PHom { p, target: GroupExpr::Trivial, images: vec![PElement::Unit; rank], inverses: vec![PElement::Unit; rank] }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn target(&self) -> &GroupExpr {
        &self.target
    }

    pub fn images(&self) -> &[PElement] {
        &self.images
    }

    pub fn apply(&self, w: &Word) -> PElement {
        let mut acc = self.target.identity();
        for l in w.letters() {
            let g = l.gen as usize;
            let img = if l.inv { &self.inverses[g] } else { &self.images[g] };
            acc = self.target.mul(&acc, img);
        }
        acc
    }

    /// Like [`PHom::apply`] but rejects letters outside the domain.
    pub fn try_apply(&self, w: &Word) -> Result<PElement> {
        if w.min_rank() > self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), found: w.min_rank() });
        }
        Ok(self.apply(w))
    }

    pub fn order_of(&self, w: &Word) -> u64 {
        self.target.order(&self.apply(w), self.p)
    }

    /// `w ↦ (φ1(w), φ2(w))`; kernel is the intersection of the two kernels.
    pub fn direct_combine(a: &PHom, b: &PHom) -> Result<PHom> {
        PHom::combine_all(&[a.clone(), b.clone()])
    }

    /// Product of several homomorphisms on the same free group.
    pub fn combine_all(homs: &[PHom]) -> Result<PHom> {
        let first = homs.first().ok_or_else(|| Error::Precondition("nothing to combine".into()))?;
        for h in homs {
            if h.rank() != first.rank() {
                return Err(Error::RankMismatch { expected: first.rank(), found: h.rank() });
            }
            if h.p != first.p {
                return Err(Error::TypeMismatch("homomorphisms over different primes".into()));
            }
        }
        let target = GroupExpr::Direct(homs.iter().map(|h| h.target.clone()).collect());
        let images =
            (0..first.rank()).map(|g| PElement::Tuple(homs.iter().map(|h| h.images[g].clone()).collect())).collect();
        let inverses =
            (0..first.rank()).map(|g| PElement::Tuple(homs.iter().map(|h| h.inverses[g].clone()).collect())).collect();
        Ok(PHom { p: first.p, target, images, inverses })
    }
}

/// Lifts `β: Ker μ → B` to `φ: F → B ≀ Z/N`.
///
/// `beta` evaluates β on words of `F` lying in `Ker μ`. Generator `t` maps
/// to `(i ↦ β(x^i t x^{-(i+μ(t))}), μ(t))`, with exponents reduced mod N.
/// For `w ∈ Ker μ` the image is `(i ↦ β(x^i w x^{-i}), 0)`, so the kernel of
/// `φ` is the intersection of the `x`-conjugates of `Ker β`.
pub fn induced_wreath<F>(mu: &ExponentHom, beta_target: &GroupExpr, p: u32, beta: F) -> Result<PHom>
where
    F: Fn(&Word) -> Result<PElement>,
{
    let n = mu.modulus();
    let x = Word::gen(mu.designated());
    let mut images = Vec::with_capacity(mu.rank());
    for t in 0..mu.rank() as u32 {
        let mt = mu.value(t);
        let mut coords = Vec::with_capacity(n as usize);
        for i in 0..n {
            let shift = (i + mt) % n;
            let d = x.pow(i as i64).mul(&Word::gen(t)).mul(&x.pow(-(shift as i64)));
            debug_assert_eq!(mu.eval(&d), 0);
            let b = beta(&d)?;
            beta_target.check(&b)?;
            coords.push(b);
        }
        images.push(PElement::Wreath(coords, mt));
    }
    PHom::new(p, GroupExpr::Wreath(Box::new(beta_target.clone()), n), images)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parity(p: u32, gen: usize) -> PHom {
        let mut imgs = vec![PElement::Residue(0); 2];
        imgs[gen] = PElement::Residue(1);
        PHom::new(p, GroupExpr::Cyclic(2), imgs).unwrap()
    }

    #[test]
    fn cyclic_exponent_sum() {
        let phi = PHom::new(2, GroupExpr::Cyclic(4), vec![PElement::Residue(1), PElement::Residue(0)]).unwrap();
        let w = Word::from_signed(&[1, 1, 1, 2]);
        assert_eq!(phi.apply(&w), PElement::Residue(3));
        assert_eq!(phi.apply(&Word::identity()), PElement::Residue(0));
    }

    #[test]
    fn combined_kernel() {
        let c = PHom::direct_combine(&parity(2, 0), &parity(2, 1)).unwrap();
        for w in [Word::gen(0), Word::gen(1), Word::from_signed(&[1, 2])] {
            assert!(!c.target().is_identity(&c.apply(&w)));
        }
        assert!(c.target().is_identity(&c.apply(&Word::from_signed(&[1, 1, 2, 2]))));
    }

    #[test]
    fn rank_mismatch() {
        let a = parity(2, 0);
        let b = PHom::trivial(2, 3);
        assert!(PHom::direct_combine(&a, &b).is_err());
        assert!(a.try_apply(&Word::gen(2)).is_err());
    }
}
