//! Witnesses built from truncated Magnus-type embeddings.
//!
//! A generator `x_j` maps to `1 + e_j` in the unit group of a truncated
//! algebra over F_p. Only generators in the support of the word of interest
//! get a symbol; the rest map to 1, which keeps the algebra small.

pub mod poly;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::pgroups::{GroupExpr, PElement, PHom};
use crate::words::Word;
use poly::PolyRing;

/// Largest number of monomials a witness algebra may have; dense products
/// beyond this are out of reach.
pub const MONOMIAL_CAP: u64 = 1 << 16;

/// `x_j ↦ 1 + e_j` for every generator, in `U(rank, degree)`.
pub fn magnus_hom(p: u32, rank: usize, degree: u32) -> Result<PHom> {
    let all: Vec<u32> = (0..rank as u32).collect();
    support_hom(p, rank, &all, degree, None)
}

/// `x_{gens[j]} ↦ 1 + e_{j+1}`, all other generators to 1.
pub fn support_hom(p: u32, rank: usize, gens: &[u32], degree: u32, nilpotency: Option<u32>) -> Result<PHom> {
    let ring = PolyRing::new(p, gens.len().max(1) as u32, degree, nilpotency)?;
    if ring.unit_group_log_order() > MONOMIAL_CAP {
        return Err(Error::cap("monomials of the truncated algebra", MONOMIAL_CAP as usize));
    }
    let mut images = vec![PElement::Poly(ring.one()); rank];
    for (j, &g) in gens.iter().enumerate() {
        images[g as usize] = PElement::Poly(ring.one_plus_symbol(j as u32));
    }
    PHom::new(p, GroupExpr::Units(ring), images)
}

fn support_of(g: &Word) -> Vec<u32> {
    g.support().into_iter().collect()
}

fn poly_of(a: &PElement) -> &poly::TruncatedPoly {
    match a {
        PElement::Poly(f) => f,
        _ => unreachable!("magnus images are polynomials"),
    }
}

/// Least degree of a nonconstant term in the Magnus image of `g`.
pub fn jennings_degree(g: &Word, p: u32, k_max: u32) -> Result<u32> {
    if g.is_identity() {
        return Err(Error::Precondition("jennings degree of the identity".into()));
    }
    let gens = support_of(g);
    let rank = g.min_rank();
    for k in 2..=k_max {
        let hom = support_hom(p, rank, &gens, k, None)?;
        if let Some(d) = poly_of(&hom.apply(g)).lowest_degree() {
            return Ok(d);
        }
    }
    Err(Error::cap("truncation degree (image still 1)", k_max as usize))
}

fn widen(hom: PHom, rank: usize) -> Result<PHom> {
    if hom.rank() >= rank {
        return Ok(hom);
    }
    let mut images = hom.images().to_vec();
    images.resize(rank, hom.target().identity());
    PHom::new(hom.prime(), hom.target().clone(), images)
}

/// A homomorphism into a truncated unit group with `φ(g) ≠ 1`, using
/// truncation degree `jennings_degree(g) + 1`.
pub fn residual_p_witness(g: &Word, p: u32, rank: usize, cfg: &Config) -> Result<PHom> {
    if g.is_identity() {
        return Err(Error::Precondition("residual witness for the identity".into()));
    }
    if g.min_rank() > rank {
        return Err(Error::RankMismatch { expected: rank, found: g.min_rank() });
    }
    let d = jennings_degree(g, p, cfg.degree_cap)?;
    let hom = widen(support_hom(p, g.min_rank(), &support_of(g), d + 1, None)?, rank)?;
    if hom.target().is_identity(&hom.apply(g)) {
        return Err(Error::Internal("residual witness kills its word".into()));
    }
    Ok(hom)
}

/// A homomorphism with `φ(g)` of order exactly `p^e`.
///
/// The truncation degree starts at `d·p^{e-1} + 1` and escalates to at most
/// `d·p^e`; the order is verified by powering.
pub fn order_exact_witness(g: &Word, p: u32, e: u32, rank: usize, cfg: &Config) -> Result<PHom> {
    if g.is_identity() {
        return Err(Error::Precondition("order witness for the identity".into()));
    }
    if e == 0 {
        return Ok(PHom::trivial(p, rank));
    }
    let d = jennings_degree(g, p, cfg.degree_cap)?;
    let pe1 = (p as u64).pow(e - 1);
    let lo = d as u64 * pe1 + 1;
    let hi = d as u64 * pe1 * p as u64;
    let want = pe1 * p as u64;
    for k in lo..=hi.min(cfg.degree_cap as u64) {
        let hom = support_hom(p, g.min_rank(), &support_of(g), k as u32, None)?;
        if hom.order_of(g) == want {
            return widen(hom, rank);
        }
    }
    Err(Error::cap("truncation degree for exact order", cfg.degree_cap as usize))
}

/// A homomorphism with `[φ(g), φ(γ)] ≠ 1`, so `φ(g) ∉ ⟨φ(γ)⟩`.
pub fn noncentral_witness(g: &Word, gamma: &Word, p: u32, rank: usize, cfg: &Config) -> Result<PHom> {
    let c = Word::commutator(g, gamma);
    if c.is_identity() {
        return Err(Error::Precondition("g commutes with gamma".into()));
    }
    let hom = residual_p_witness(&c, p, rank, cfg)?;
    let t = hom.target();
    if t.is_identity(&t.commutator(&hom.apply(g), &hom.apply(gamma))) {
        return Err(Error::Internal("noncentral witness failed verification".into()));
    }
    Ok(hom)
}

/// The words `[γ^{p^r}, f⁻¹ γ^{p^r} f]` for `0 ≤ r ≤ e`.
pub fn claim1_words(f: &Word, gamma: &Word, p: u32, e: u32) -> Vec<Word> {
    (0..=e)
        .map(|r| {
            let gp = gamma.pow((p as i64).pow(r));
            Word::commutator(&gp, &f.inv().mul(&gp).mul(f))
        })
        .collect()
}

/// A homomorphism with `[φ(γ^{p^r}), φ(f)⁻¹ φ(γ^{p^r}) φ(f)] ≠ 1` for every
/// `0 ≤ r ≤ e`.
pub fn claim1_witness(f: &Word, gamma: &Word, e: u32, p: u32, rank: usize, cfg: &Config) -> Result<PHom> {
    if f.power_of(gamma).is_some() {
        return Err(Error::Precondition("f lies in the cyclic subgroup of gamma".into()));
    }
    let words = claim1_words(f, gamma, p, e);
    let mut parts = Vec::with_capacity(words.len());
    for w in &words {
        if w.is_identity() {
            return Err(Error::Internal("commutator of gamma powers is trivial".into()));
        }
        parts.push(residual_p_witness(w, p, rank, cfg)?);
    }
    let hom = if parts.len() == 1 { parts.pop().expect("one part") } else { PHom::combine_all(&parts)? };
    for w in &words {
        if hom.target().is_identity(&hom.apply(w)) {
            return Err(Error::Internal("claim-1 witness failed verification".into()));
        }
    }
    Ok(hom)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Word {
        Word::gen(0)
    }

    fn y() -> Word {
        Word::gen(1)
    }

    #[test]
    fn degrees() {
        assert_eq!(jennings_degree(&x(), 2, 8).unwrap(), 1);
        assert_eq!(jennings_degree(&Word::commutator(&x(), &y()), 2, 8).unwrap(), 2);
        assert_eq!(jennings_degree(&x().pow(2), 2, 8).unwrap(), 2);
        assert_eq!(jennings_degree(&x().pow(2), 3, 8).unwrap(), 1);
        assert!(jennings_degree(&Word::identity(), 2, 8).is_err());
        assert!(jennings_degree(&x().pow(8), 2, 4).unwrap_err().is_cap());
    }

    #[test]
    fn residual_degree_bound() {
        let cfg = Config::default();
        let hom = residual_p_witness(&x(), 2, 2, &cfg).unwrap();
        assert_eq!(hom.target().to_string(), "U(1,2)");
        let c = Word::commutator(&x(), &y());
        let hom = residual_p_witness(&c, 2, 2, &cfg).unwrap();
        assert_eq!(hom.target().to_string(), "U(2,3)");
        assert!(residual_p_witness(&Word::identity(), 2, 2, &cfg).is_err());
    }

    #[test]
    fn exact_orders() {
        let cfg = Config::default();
        let h1 = order_exact_witness(&x(), 2, 1, 2, &cfg).unwrap();
        assert_eq!(h1.order_of(&x()), 2);
        assert_eq!(h1.target().to_string(), "U(1,2)");
        let h2 = order_exact_witness(&x(), 2, 2, 2, &cfg).unwrap();
        assert_eq!(h2.order_of(&x()), 4);
        assert_eq!(h2.target().to_string(), "U(1,3)");
        let c = Word::commutator(&x(), &y());
        let h3 = order_exact_witness(&c, 2, 1, 2, &cfg).unwrap();
        assert_eq!(h3.order_of(&c), 2);
        assert_eq!(h3.target().to_string(), "U(2,3)");
    }

    #[test]
    fn claim1_small() {
        let cfg = Config::default();
        let gamma = Word::commutator(&x(), &y());
        let h = claim1_witness(&x(), &gamma, 0, 2, 2, &cfg).unwrap();
        assert_eq!(h.rank(), 2);
        let h = claim1_witness(&x(), &gamma, 1, 2, 2, &cfg).unwrap();
        for w in claim1_words(&x(), &gamma, 2, 1) {
            assert!(!h.target().is_identity(&h.apply(&w)));
        }
        assert!(claim1_witness(&gamma, &gamma, 0, 2, 2, &cfg).is_err());
        assert!(noncentral_witness(&gamma.pow(2), &gamma, 2, 2, &cfg).is_err());
        assert!(noncentral_witness(&y(), &gamma, 2, 2, &cfg).is_ok());
    }
}
