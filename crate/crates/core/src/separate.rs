//! Conjugacy separation in free groups, and double-coset witnesses.
//!
//! [`separate_conjugacy_free`] follows the inductive construction: trivial
//! element, single-generator supports, homology, and otherwise a descent to
//! the kernel of an exponent map `μ: F → Z/p` whose Schreier basis shortens
//! `g`, followed by a wreath lift of the combined sub-witnesses.

use std::collections::HashSet;

use crate::cert::{self, double_coset_table, FreeLift, FreeNode, FreeStep, VerifyReport};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::magnus::{residual_p_witness, support_hom};
use crate::par;
use crate::pgroups::{induced_wreath, least_power_above, GroupExpr, PElement, PHom};
use crate::schreier::{schreier_generators, CoverBasis, ExponentHom};
use crate::words::{gamma, is_conjugate_free, Word};

/// Result of a separation attempt.
#[derive(Clone, Debug)]
pub enum ConjOutcome {
    /// `f` with `f · h · f⁻¹ = g`.
    Conjugator(Word),
    Witness(Box<FreeWitness>),
}

#[derive(Clone, Debug)]
pub struct FreeWitness {
    pub p: u32,
    pub root: FreeNode,
    pub report: VerifyReport,
}

impl FreeWitness {
    pub fn hom(&self) -> Result<PHom> {
        self.root.hom(self.p)
    }
}

/// Separates `g` and `h` in `F(rank)` by a finite p-group, or returns a
/// conjugator when they are conjugate.
pub fn separate_conjugacy_free(g: &Word, h: &Word, p: u32, rank: usize, cfg: &Config) -> Result<ConjOutcome> {
    if g.min_rank() > rank || h.min_rank() > rank {
        return Err(Error::RankMismatch { expected: rank, found: g.min_rank().max(h.min_rank()) });
    }
    if let Some(f) = is_conjugate_free(g, h) {
        if f.mul(h).mul(&f.inv()) != *g {
            return Err(Error::Internal("conjugator failed re-check".into()));
        }
        return Ok(ConjOutcome::Conjugator(f));
    }
    let root = build(g, h, rank, p, 0, cfg)?;
    let report = cert::verify_free_tree(&root, p, cfg)?;
    if !report.passed() {
        return Err(Error::Internal(format!("constructed witness failed verification: {}", report.summary())));
    }
    Ok(ConjOutcome::Witness(Box::new(FreeWitness { p, root, report })))
}

fn cyclic_hom(p: u32, rank: usize, gen: u32, q: u64) -> Result<PHom> {
    let mut images = vec![PElement::Residue(0); rank];
    images[gen as usize] = PElement::Residue(1);
    PHom::new(p, GroupExpr::Cyclic(q), images)
}

fn leaf(g: &Word, h: &Word, rank: usize, step: FreeStep, hom: PHom) -> FreeNode {
    FreeNode {
        rank,
        g: g.clone(),
        h: h.clone(),
        step,
        target: hom.target().clone(),
        images: hom.images().to_vec(),
        lift: None,
    }
}

/// Exponent map of the descent step: `μ(x) = 1` for some `x ∈ Sup(g)` and
/// `μ(g) = μ(h) = 0`, given `[g] = [h]` and `|Sup(g)| ≥ 2`.
pub fn descent_map(g: &Word, h: &Word, p: u32, rank: usize) -> Result<ExponentHom> {
    let ab = g.abelianize(rank);
    debug_assert_eq!(ab, h.abelianize(rank));
    let pm = p as i64;
    let nonzero: Vec<usize> = (0..rank).filter(|&i| ab[i] != 0).collect();
    let support = g.support();
    let mut values = vec![0u64; rank];
    let x = match nonzero.len() {
        0 => *support.iter().next().expect("nonempty support"),
        1 => *support
            .iter()
            .find(|&&s| s as usize != nonzero[0])
            .ok_or_else(|| Error::Precondition("support has a single generator".into()))?,
        _ => {
            // a functional vanishing on [g] / gcd: pick i with p ∤ b_i and
            // put μ(y_j) = 1, μ(y_i) = -b_j / b_i for some j ≠ i
            let m = nonzero.iter().fold(0i64, |acc, &i| num_integer::gcd(acc, ab[i]));
            let b: Vec<i64> = (0..rank).map(|i| ab[i] / m).collect();
            let i = *nonzero
                .iter()
                .find(|&&i| b[i].rem_euclid(pm) != 0)
                .ok_or_else(|| Error::Internal("primitive vector divisible by p".into()))?;
            let j = *nonzero.iter().find(|&&j| j != i).expect("two nonzero coordinates");
            let inv_bi = mod_inverse(b[i].rem_euclid(pm), pm);
            values[i] = ((-b[j]).rem_euclid(pm) * inv_bi % pm) as u64;
            values[j] = 1;
            return ExponentHom::new(p as u64, values, j as u32);
        }
    };
    values[x as usize] = 1;
    ExponentHom::new(p as u64, values, x)
}

fn mod_inverse(a: i64, m: i64) -> i64 {
    let e = num_integer::Integer::extended_gcd(&a, &m);
    e.x.rem_euclid(m)
}

fn build(g: &Word, h: &Word, rank: usize, p: u32, depth: usize, cfg: &Config) -> Result<FreeNode> {
    if depth > cfg.depth_cap {
        return Err(Error::cap("recursion depth", cfg.depth_cap));
    }
    // one side trivial
    if g.is_identity() || h.is_identity() {
        let w = if g.is_identity() { h } else { g };
        let hom = residual_p_witness(w, p, rank, cfg)?;
        return Ok(leaf(g, h, rank, FreeStep::Identity, hom));
    }
    let (sg, sh) = (g.support(), h.support());
    // both supports are single generators
    if sg.len() == 1 && sh.len() == 1 {
        let x = *sg.iter().next().expect("support");
        let n = g.exponent_sum(x).unsigned_abs();
        let m = h.exponent_sum(*sh.iter().next().expect("support")).unsigned_abs();
        let q = least_power_above(p as u64, 2 * n.max(m));
        return Ok(leaf(g, h, rank, FreeStep::Cyclic, cyclic_hom(p, rank, x, q)?));
    }
    // different homology classes
    let (ag, ah) = (g.abelianize(rank), h.abelianize(rank));
    if let Some(i) = (0..rank).find(|&i| ag[i] != ah[i]) {
        let a1 = (ag[i] - ah[i]).unsigned_abs();
        let q = least_power_above(p as u64, 2 * a1);
        return Ok(leaf(g, h, rank, FreeStep::Homology, cyclic_hom(p, rank, i as u32, q)?));
    }
    // Steps 4-6, with |Sup(g)| ≥ 2 after relabeling
    let swapped = sg.len() < 2;
    let (g2, h2) = if swapped { (h, g) } else { (g, h) };
    let mu = descent_map(g2, h2, p, rank)?;
    let basis = schreier_generators(&mu);
    let i0 = basis.choose_decreasing_i(g2)?;
    let g_sub = basis.rewrite(g2, i0)?;
    let pairs: Vec<(Word, Word)> =
        (0..p as u64).map(|i| Ok((g_sub.clone(), basis.rewrite(h2, i)?))).collect::<Result<_>>()?;
    for (a, b) in &pairs {
        if is_conjugate_free(a, b).is_some() {
            return Err(Error::Internal("descent produced a conjugate pair".into()));
        }
    }
    let sub_rank = basis.len();
    let children: Vec<FreeNode> = par::map(cfg.execution, &pairs, |(a, b)| build(a, b, sub_rank, p, depth + 1, cfg))
        .into_iter()
        .collect::<Result<_>>()?;
    let beta = PHom::combine_all(&children.iter().map(|c| c.hom(p)).collect::<Result<Vec<_>>>()?)?;
    let phi = induced_wreath(&mu, beta.target(), p, |d| Ok(beta.apply(&basis.rewrite(d, 0)?)))?;
    Ok(FreeNode {
        rank,
        g: g.clone(),
        h: h.clone(),
        step: FreeStep::Induced,
        target: phi.target().clone(),
        images: phi.images().to_vec(),
        lift: Some(FreeLift { mu, swapped, i0, children }),
    })
}

/// Finds `(a, b)` with `γ^a · g = h · γ^b`, searching `|a|` up to
/// `(|g| + |h|) / |γ| + 2`; a second, wider scan asserts that the bound
/// missed nothing.
pub fn double_coset_decide(g: &Word, h: &Word, gam: &Word) -> Option<(i64, i64)> {
    assert!(gam.is_cyclically_reduced() && !gam.is_empty(), "gamma must be cyclically reduced");
    let bound = ((g.len() + h.len()) / gam.len()) as i64 + 2;
    let hi = h.inv();
    let solve = |a: i64| hi.mul(&gam.pow(a)).mul(g).power_of(gam).map(|b| (a, b));
    let order = |k: i64| [k, -k];
    let found = (0..=bound).flat_map(order).find_map(solve);
    if found.is_none() {
        let wider = (bound + 1..=2 * bound + 2).flat_map(order).find_map(solve);
        assert!(wider.is_none(), "double coset bound missed a solution");
    }
    found
}

/// A homomorphism with `φ(γ)^a φ(g) ≠ φ(h) φ(γ)^b` for all `a, b`, checked
/// over all residues modulo the order of `φ(γ)`.
#[derive(Clone, Debug)]
pub struct DoubleCosetWitness {
    pub hom: PHom,
    pub modulus: u64,
    /// Number of `(a, b)` pairs checked.
    pub table_size: u64,
    /// Degree of the truncated algebra used for the kernel witness, if any.
    pub degree: Option<u32>,
    pub q: Option<u64>,
}

/// Leading exponent of `sym` in `w` and the remainder.
fn strip_leading(w: &Word, sym: u32) -> (i64, Word) {
    let k = w.letters().iter().take_while(|l| l.gen == sym).count();
    let e: i64 = w.letters()[..k].iter().map(|l| l.sign()).sum();
    (e, w.suffix_from(k))
}

fn strip_trailing(w: &Word, sym: u32) -> Word {
    let k = w.letters().iter().rev().take_while(|l| l.gen == sym).count();
    w.prefix(w.len() - k)
}

/// Exponents of the syllables `s^c` of a word.
fn syllable_exponents(w: &Word) -> Vec<i64> {
    let mut out: Vec<i64> = Vec::new();
    let mut last: Option<u32> = None;
    for l in w.letters() {
        if Some(l.gen) == last {
            *out.last_mut().expect("open syllable") += l.sign();
        } else {
            out.push(l.sign());
            last = Some(l.gen);
        }
    }
    out
}

/// Witness for `γ^a g ≠ h γ^b` (all `a, b`) in `F(x1,y1,…,xn,yn)`.
pub fn double_coset_witness(g: &Word, h: &Word, n: usize, p: u32, cfg: &Config) -> Result<DoubleCosetWitness> {
    let gam = gamma(n);
    let rank = 2 * n;
    if g.min_rank() > rank || h.min_rank() > rank {
        return Err(Error::RankMismatch { expected: rank, found: g.min_rank().max(h.min_rank()) });
    }
    if let Some((a, b)) = double_coset_decide(g, h, &gam) {
        return Err(Error::Precondition(format!("gamma^{a} g = h gamma^{b}")));
    }
    let hp = h.mul(&g.inv());
    let cover = CoverBasis::new(n, p, g)?;
    let mu = cover.mu().clone();
    let finish = |hom: PHom, degree: Option<u32>, q: Option<u64>| -> Result<DoubleCosetWitness> {
        match double_coset_table(&hom, g, h, &gam) {
            Ok(m) => Ok(DoubleCosetWitness { hom, modulus: m, table_size: m * m, degree, q }),
            Err((a, b)) => Err(Error::Internal(format!("double coset table violated at ({a}, {b})"))),
        }
    };
    if mu.eval(&hp) != 0 {
        let mut images = vec![PElement::Residue(0); rank];
        images[0] = PElement::Residue(1);
        return finish(PHom::new(p, GroupExpr::Cyclic(mu.modulus()), images)?, None, None);
    }
    let z_star = cover.z_symbol(cover.l0()).expect("l0 is not excluded");
    let gamma_sym = cover.z_symbol(0).expect("z0 is a basis symbol");
    let (c1, v) = strip_leading(cover.w(), gamma_sym);
    let v = strip_trailing(&v, z_star);
    let hz = cover.rewrite(&hp)?;
    let target_word = hz.mul(&Word::gen(gamma_sym).pow(c1));
    let biggest = syllable_exponents(&v)
        .into_iter()
        .chain(syllable_exponents(&target_word))
        .map(i64::unsigned_abs)
        .max()
        .unwrap_or(0);
    let q = least_power_above(p as u64, 2 * biggest).max(p as u64);
    let mut symbols: Vec<u32> = [gamma_sym, z_star]
        .into_iter()
        .chain(cover.w().support())
        .chain(hz.support())
        .collect::<HashSet<u32>>()
        .into_iter()
        .collect();
    symbols.sort_unstable();
    let w = cover.w().clone();
    let u_word = |a: i64, b: i64| Word::gen(gamma_sym).pow(a).mul(&w).mul(&Word::gen(z_star).pow(b)).mul(&w.inv());
    for k in 2..=cfg.degree_cap {
        let psi = support_hom(p, cover.len(), &symbols, k, Some(q as u32))?;
        let t = psi.target().clone();
        let pg = psi.apply(&Word::gen(gamma_sym));
        let pz = psi.apply(&Word::gen(z_star));
        let (og, oz) = (t.order(&pg, p) as i64, t.order(&pz, p) as i64);
        let target = psi.apply(&hz);
        let hit = (0..og).any(|a| (0..oz).any(|b| psi.apply(&u_word(a, b)) == target));
        if hit {
            continue;
        }
        let phi = induced_wreath(&mu, &t, p, |d| Ok(psi.apply(&cover.rewrite(d)?)))?;
        return finish(phi, Some(k), Some(q));
    }
    Err(Error::cap("truncation degree for the double coset witness", cfg.degree_cap as usize))
}
