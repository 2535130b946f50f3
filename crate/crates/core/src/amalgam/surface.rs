//! Separating non-conjugate surface-group elements in an amalgam of two
//! finite p-groups.

use super::{AElem, Amalgam, Conjugacy, FElem, Factor};
use crate::cert::{self, FactorImages, VerifyReport};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::magnus::{claim1_witness, noncentral_witness, order_exact_witness};
use crate::par;
use crate::pgroups::{PElement, PHom};
use crate::separate::{double_coset_decide, double_coset_witness};
use crate::words::{gamma, Letter, Word};

/// Factor-wise homomorphism `F *_C F → P1 *_C̄ P2`.
#[derive(Clone, Debug)]
pub struct AmalgamHom {
    pub n: usize,
    pub p: u32,
    pub phi: [PHom; 2],
    pub target: Amalgam,
    pub gamma_order: u64,
}

impl AmalgamHom {
    pub fn new(n: usize, p: u32, phi: [PHom; 2]) -> Result<Self> {
        let gam = gamma(n);
        let mut factors = Vec::with_capacity(2);
        for f in &phi {
            if f.rank() != 2 * n {
                return Err(Error::RankMismatch { expected: 2 * n, found: f.rank() });
            }
            factors.push(Factor::finite(f.target().clone(), f.images().to_vec(), f.apply(&gam), p)?);
        }
        let f2 = factors.pop().expect("two factors");
        let f1 = factors.pop().expect("two factors");
        let target = Amalgam::new(f1, f2)?;
        let gamma_order = target.gamma_modulus().expect("finite factors");
        Ok(AmalgamHom { n, p, phi, target, gamma_order })
    }

    pub fn apply(&self, src: &Amalgam, a: &AElem) -> AElem {
        let parts: Vec<(usize, FElem)> = src
            .parts(a)
            .into_iter()
            .map(|(s, x)| match x {
                FElem::Word(w) => (s, FElem::Elem(self.phi[s].apply(&w))),
                FElem::Elem(_) => unreachable!("source factors are free"),
            })
            .collect();
        self.target.normal_form(parts)
    }

    pub fn apply_word(&self, w: &Word) -> AElem {
        let src = Amalgam::surface(self.n);
        self.apply(&src, &src.from_word(w))
    }

    pub fn factor_images(&self) -> [FactorImages; 2] {
        self.phi.clone().map(|f| FactorImages { target: f.target().clone(), images: f.images().to_vec() })
    }
}

/// How the witness was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurfaceStep {
    /// `h` is conjugate into a factor.
    FactorTarget,
    /// Syllable lengths differ.
    LengthMismatch,
    /// Equal lengths: one entry per rotation tried.
    Rotations(Vec<RotationCase>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RotationCase {
    /// Syllable pair `index` fails the double-coset relation.
    DoubleCoset { index: usize },
    /// All pairs related; the exponent differences have gcd `p^e·v`.
    Gcd { e: u32 },
}

#[derive(Clone, Debug)]
pub struct SurfaceWitness {
    pub g: Word,
    pub h: Word,
    pub hom: AmalgamHom,
    pub step: SurfaceStep,
    /// Automorphisms applied before separating, if any.
    pub normalization: Vec<String>,
    pub report: VerifyReport,
}

#[derive(Clone, Debug)]
pub enum SurfaceOutcome {
    /// `f` with `f · h · f⁻¹ = g`, as a surface word.
    Conjugator(Word),
    Witness(Box<SurfaceWitness>),
}

/// Exponent sums in `Z^{4n}`; the surface relator maps to 0.
pub fn surface_abelianization(w: &Word, n: usize) -> Vec<i64> {
    w.abelianize(4 * n)
}

fn combine(parts: Vec<PHom>, n: usize, p: u32) -> Result<PHom> {
    if parts.is_empty() {
        return Ok(PHom::trivial(p, 2 * n));
    }
    PHom::combine_all(&parts)
}

/// Makes `φ1(γ)` and `φ2(γ)` have the same order by adding exact-order
/// witnesses for `γ`.
fn match_orders(phi: [PHom; 2], n: usize, p: u32, cfg: &Config) -> Result<[PHom; 2]> {
    let gam = gamma(n);
    let q = phi[0].order_of(&gam).max(phi[1].order_of(&gam)).max(p as u64);
    let mut e = 0;
    while (p as u64).pow(e) < q {
        e += 1;
    }
    let matched = phi.map(|f| {
        if f.order_of(&gam) == q {
            Ok(f)
        } else {
            PHom::direct_combine(&f, &order_exact_witness(&gam, p, e, 2 * n, cfg)?)
        }
    });
    let [a, b] = matched;
    Ok([a?, b?])
}

fn p_valuation(mut u: u64, p: u64) -> u32 {
    let mut e = 0;
    while u.is_multiple_of(p) {
        u /= p;
        e += 1;
    }
    e
}

/// Witness for `g ≁ h` where `g` is cyclically reduced of syllable length
/// `2l ≥ 2`. Both are words over `x1,…,yn,x'1,…,y'n`.
pub fn prop45_witness(g: &Word, h: &Word, n: usize, p: u32, cfg: &Config) -> Result<SurfaceWitness> {
    let src = Amalgam::surface(n);
    let ga = src.from_word(g);
    if src.cyclic_reduce(&ga).0 != ga || ga.syl() < 2 {
        return Err(Error::Precondition("g must be cyclically reduced with at least two syllables".into()));
    }
    if let Conjugacy::Conjugate(_) = src.is_conjugate(&ga, &src.from_word(h), cfg.enum_cap)? {
        return Err(Error::Precondition("inputs are conjugate".into()));
    }
    let (hom, step) = build(&src, &ga, &src.from_word(h), n, p, cfg)?;
    finish(g, h, hom, step, Vec::new(), cfg)
}

fn finish(
    g: &Word,
    h: &Word,
    hom: AmalgamHom,
    step: SurfaceStep,
    normalization: Vec<String>,
    cfg: &Config,
) -> Result<SurfaceWitness> {
    let report = cert::verify_surface(hom.n, g, h, &hom.factor_images(), hom.gamma_order, hom.p, cfg.enum_cap)?;
    if !report.passed() {
        return Err(Error::Internal(format!("surface witness failed verification: {}", report.summary())));
    }
    Ok(SurfaceWitness { g: g.clone(), h: h.clone(), hom, step, normalization, report })
}

fn build(src: &Amalgam, g: &AElem, h: &AElem, n: usize, p: u32, cfg: &Config) -> Result<(AmalgamHom, SurfaceStep)> {
    let gam = gamma(n);
    let rank = 2 * n;
    let hc = src.cyclic_reduce(h).0;
    let gp = src.parts(g);
    let hp = src.parts(&hc);
    let mut sides: [Vec<PHom>; 2] = [Vec::new(), Vec::new()];
    let keep_outside_c = |parts: &[(usize, FElem)], sides: &mut [Vec<PHom>; 2]| -> Result<()> {
        for (s, x) in parts {
            sides[*s].push(noncentral_witness(x.word(), &gam, p, rank, cfg)?);
        }
        Ok(())
    };
    keep_outside_c(&gp, &mut sides)?;
    let step = if hc.syl() <= 1 {
        SurfaceStep::FactorTarget
    } else if hc.syl() != g.syl() {
        keep_outside_c(&hp, &mut sides)?;
        SurfaceStep::LengthMismatch
    } else {
        keep_outside_c(&hp, &mut sides)?;
        let rotations: Vec<usize> = (0..hp.len()).filter(|&r| hp[r].0 == gp[0].0).collect();
        let per_rotation = par::map(cfg.execution, &rotations, |&r| rotation_case(src, &gp, &hc, r, n, p, cfg));
        let mut cases = Vec::with_capacity(rotations.len());
        for res in per_rotation {
            let (case, homs) = res?;
            cases.push(case);
            for (s, f) in homs {
                sides[s].push(f);
            }
        }
        SurfaceStep::Rotations(cases)
    };
    let [s0, s1] = sides;
    let phi = match_orders([combine(s0, n, p)?, combine(s1, n, p)?], n, p, cfg)?;
    Ok((AmalgamHom::new(n, p, phi)?, step))
}

/// Case analysis for the rotation `ht = R⁻¹·h·R`, `R = h_0 ⋯ h_{r-1}`.
#[allow(clippy::type_complexity)]
fn rotation_case(
    src: &Amalgam,
    gp: &[(usize, FElem)],
    h: &AElem,
    r: usize,
    n: usize,
    p: u32,
    cfg: &Config,
) -> Result<(RotationCase, Vec<(usize, PHom)>)> {
    let gam = gamma(n);
    let hp = src.parts(h);
    let rot = src.normal_form(hp[..r].iter().cloned());
    let ht = src.conjugate(&src.inv(&rot), h);
    let tp = src.parts(&ht);
    let m = gp.len();
    let mut rel = Vec::with_capacity(m);
    for i in 0..m {
        let (gi, ti) = (gp[i].1.word(), tp[i].1.word());
        match double_coset_decide(gi, ti, &gam) {
            Some(ab) => rel.push(ab),
            None => {
                let w = double_coset_witness(gi, ti, n, p, cfg)?;
                return Ok((RotationCase::DoubleCoset { index: i }, vec![(gp[i].0, w.hom)]));
            }
        }
    }
    // u_{i-1} = γ^{a_i}, u_i = γ^{b_i}: consistency needs b_i = a_{i+1}
    let diffs: Vec<i64> = (0..m).map(|i| rel[i].1 - rel[(i + 1) % m].0).collect();
    let u = diffs.iter().fold(0i64, |acc, &d| num_integer::gcd(acc, d)).unsigned_abs();
    if u == 0 {
        return Err(Error::Internal("consistent u-chain for non-conjugate inputs".into()));
    }
    let e = p_valuation(u, p as u64);
    let homs = gp
        .iter()
        .map(|(s, x)| Ok((*s, claim1_witness(x.word(), &gam, e, p, 2 * n, cfg)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok((RotationCase::Gcd { e }, homs))
}

/// A factor-preserving (or factor-swapping) automorphism of the surface
/// group fixing the identification of the two copies of γ.
fn automorphism(name: &str, n: usize) -> Option<Vec<Word>> {
    let r = 2 * n as u32;
    let gen = Word::gen;
    let mut images: Vec<Word> = (0..2 * r).map(gen).collect();
    match name {
        "swap" => {
            for i in 0..r {
                images[i as usize] = gen(i + r);
                images[(i + r) as usize] = gen(i);
            }
        }
        // [x, x·y] = [x, y]
        "twist1" => (0..n as u32).for_each(|i| images[(2 * i + 1) as usize] = gen(2 * i).mul(&gen(2 * i + 1))),
        // [y·x, y] = [x, y]
        "twist2" => (0..n as u32).for_each(|i| images[(2 * i) as usize] = gen(2 * i + 1).mul(&gen(2 * i))),
        _ => return None,
    }
    Some(images)
}

/// `φ ∘ α` for a factor-preserving or factor-swapping `α`.
fn precompose(hom: &AmalgamHom, alpha: &[Word]) -> Result<AmalgamHom> {
    let r = 2 * hom.n;
    let phi = [0usize, 1].map(|side| {
        let images: Vec<PElement> = (0..r)
            .map(|j| {
                let w = &alpha[side * r + j];
                let target_side = (w.letters()[0].gen as usize) / r;
                let local = Word::from_letters(
                    w.letters().iter().map(|l| Letter::new(l.gen - (target_side * r) as u32, l.inv)),
                );
                hom.phi[target_side].apply(&local)
            })
            .collect();
        (side, images)
    });
    let build = |side: usize, images: Vec<PElement>| -> Result<PHom> {
        // images of side-`side` generators all come from one target factor
        let t = (alpha[side * r].letters()[0].gen as usize) / r;
        PHom::new(hom.p, hom.phi[t].target().clone(), images)
    };
    let [(s0, i0), (s1, i1)] = phi;
    AmalgamHom::new(hom.n, hom.p, [build(s0, i0)?, build(s1, i1)?])
}

/// Surface-group pipeline: returns a conjugator, or an amalgam-of-finite-
/// p-groups witness. Words are over `x1,…,yn,x'1,…,y'n` (genus `2n`).
pub fn theorem41_pipeline(g: &Word, h: &Word, n: usize, p: u32, cfg: &Config) -> Result<SurfaceOutcome> {
    if g.is_identity() {
        return Err(Error::Precondition("g must be nontrivial".into()));
    }
    let src = Amalgam::surface(n);
    let (ga, ha) = (src.from_word(g), src.from_word(h));
    if let Conjugacy::Conjugate(f) = src.is_conjugate(&ga, &ha, cfg.enum_cap)? {
        return Ok(SurfaceOutcome::Conjugator(src.to_word(&f)));
    }
    let gc = src.cyclic_reduce(&ga).0;
    let hc = src.cyclic_reduce(&ha).0;
    if gc.syl() >= 2 {
        let (hom, step) = build(&src, &gc, &hc, n, p, cfg)?;
        return Ok(SurfaceOutcome::Witness(Box::new(finish(g, h, hom, step, Vec::new(), cfg)?)));
    }
    if hc.syl() >= 2 {
        let (hom, step) = build(&src, &hc, &gc, n, p, cfg)?;
        return Ok(SurfaceOutcome::Witness(Box::new(finish(g, h, hom, step, vec!["exchange".into()], cfg)?)));
    }
    // try the configured automorphisms, and pairs of them
    let names: Vec<&String> = cfg.normalization.iter().collect();
    let mut chains: Vec<Vec<&String>> = names.iter().map(|a| vec![*a]).collect();
    for a in &names {
        for b in &names {
            chains.push(vec![*a, *b]);
        }
    }
    for chain in &chains {
        let mut alpha: Vec<Word> = (0..4 * n as u32).map(Word::gen).collect();
        for name in chain {
            let step =
                automorphism(name, n).ok_or_else(|| Error::Precondition(format!("unknown normalization {name:?}")))?;
            alpha = alpha.iter().map(|w| w.substitute(&step)).collect();
        }
        let (g2, h2) = (src.from_word(&g.substitute(&alpha)), src.from_word(&h.substitute(&alpha)));
        let (g2c, h2c) = (src.cyclic_reduce(&g2).0, src.cyclic_reduce(&h2).0);
        let (a, b) = if g2c.syl() >= 2 {
            (g2c, h2c)
        } else if h2c.syl() >= 2 {
            (h2c, g2c)
        } else {
            continue;
        };
        let (hom, step) = build(&src, &a, &b, n, p, cfg)?;
        let hom = precompose(&hom, &alpha)?;
        let names = chain.iter().map(|s| s.to_string()).collect();
        return Ok(SurfaceOutcome::Witness(Box::new(finish(g, h, hom, step, names, cfg)?)));
    }
    Err(Error::NormalizationFailed(format!(
        "both elements are conjugate into a factor and none of [{}] raises the syllable length",
        cfg.normalization.join(", ")
    )))
}
