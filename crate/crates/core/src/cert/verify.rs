//! Independent checking of certificates.
//!
//! Only evaluation code is used here: word images under generator images,
//! wreath lifts recomputed from sub-witnesses, subgroup enumeration, and
//! amalgam normal forms.

use std::collections::HashMap;

use super::{Body, Certificate, FactorImages, FreeNode, Outcome, VerifyMode, VerifyReport};
use crate::amalgam::{Amalgam, AmalgamHom, Conjugacy};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::par::Execution;
use crate::pgroups::{enumerate_image, induced_wreath, is_conjugate_finite, PHom};
use crate::schreier::schreier_generators;
use crate::words::{gamma, Word};

/// Either a failed check or an error that prevents checking.
enum Bad {
    Fail(String),
    Error(Error),
}

impl From<Error> for Bad {
    fn from(e: Error) -> Self {
        Bad::Error(e)
    }
}

type Checked<T> = std::result::Result<T, Bad>;

fn fail<T>(msg: String) -> Checked<T> {
    Err(Bad::Fail(msg))
}

fn report(mode: VerifyMode, checks: u64, res: Checked<()>) -> Result<VerifyReport> {
    match res {
        Ok(()) => Ok(VerifyReport { mode, outcome: Outcome::Pass, checks }),
        Err(Bad::Fail(why)) => Ok(VerifyReport { mode, outcome: Outcome::Fail(why), checks }),
        Err(Bad::Error(e)) => Err(e),
    }
}

/// Verifies a certificate in its recorded mode. `CapExceeded` is returned
/// as an error, distinct from a failed check.
pub fn verify(cert: &Certificate, exec: Execution) -> Result<VerifyReport> {
    let p = cert.p;
    let cap = cert.record.cap;
    match &cert.body {
        Body::Free { root, .. } => {
            let mut checks = 0;
            let res = recompute(root, p, "root", &mut checks).and_then(|_| match cert.record.mode {
                VerifyMode::FullEnumeration => full_check(root, p, cap, exec, &mut checks),
                VerifyMode::Compositional => compositional(root, p, cap, exec, "root", &mut checks),
                VerifyMode::Table => fail("table mode does not apply to free-separation certificates".into()),
            });
            report(cert.record.mode, checks, res)
        }
        Body::DoubleCoset { n, g, h, target, images, modulus } => {
            if cert.record.mode != VerifyMode::Table {
                return report(cert.record.mode, 0, fail("double-coset certificates use table mode".into()));
            }
            let hom = match PHom::new(p, target.clone(), images.clone()) {
                Ok(h) => h,
                Err(e) => return report(VerifyMode::Table, 0, fail(format!("invalid homomorphism: {e}"))),
            };
            if hom.rank() != 2 * n {
                return report(
                    VerifyMode::Table,
                    0,
                    fail(format!("expected {} generator images, found {}", 2 * n, hom.rank())),
                );
            }
            let res = match double_coset_table(&hom, g, h, &gamma(*n)) {
                Ok(m) if m == *modulus => Ok(()),
                Ok(m) => fail(format!("modulus recorded as {modulus}, recomputed {m}")),
                Err((a, b)) => fail(format!("gamma^{a} g = h gamma^{b} holds in the image")),
            };
            let m = hom.target().order(&hom.apply(&gamma(*n)), p);
            report(VerifyMode::Table, m * m, res)
        }
        Body::Surface { n, g, h, factors, gamma_order } => {
            if cert.record.mode != VerifyMode::Table {
                return report(cert.record.mode, 0, fail("surface certificates use table mode".into()));
            }
            verify_surface(*n, g, h, factors, *gamma_order, p, cap)
        }
    }
}

/// Recomputes every induced node from its children and compares with the
/// recorded generator images.
fn recompute(node: &FreeNode, p: u32, path: &str, checks: &mut u64) -> Checked<PHom> {
    if let Err(e) = node.target.validate(p) {
        return fail(format!("node {path}: invalid target: {e}"));
    }
    if node.images.len() != node.rank {
        return fail(format!("node {path}: {} images for rank {}", node.images.len(), node.rank));
    }
    let hom = match node.hom(p) {
        Ok(h) => h,
        Err(e) => return fail(format!("node {path}: {e}")),
    };
    let Some(lift) = &node.lift else { return Ok(hom) };
    let mu = &lift.mu;
    if mu.rank() != node.rank || lift.children.len() as u64 != mu.modulus() {
        return fail(format!("node {path}: descent map does not match the node"));
    }
    let basis = schreier_generators(mu);
    let mut child_homs = Vec::with_capacity(lift.children.len());
    for (i, c) in lift.children.iter().enumerate() {
        if c.rank != basis.len() {
            return fail(format!("node {path}.{i}: rank {} but the kernel has rank {}", c.rank, basis.len()));
        }
        child_homs.push(recompute(c, p, &format!("{path}.{i}"), checks)?);
    }
    let beta = PHom::combine_all(&child_homs)?;
    let phi = induced_wreath(mu, beta.target(), p, |d| Ok(beta.apply(&basis.rewrite(d, 0)?)))?;
    if phi.target() != hom.target() {
        return fail(format!("node {path}: target recorded as {}, recomputed {}", hom.target(), phi.target()));
    }
    for (j, (rec, new)) in hom.images().iter().zip(phi.images()).enumerate() {
        *checks += 1;
        if rec != new {
            return fail(format!("node {path}: image of generator {} recorded as {rec}, recomputed {new}", j + 1));
        }
    }
    Ok(hom)
}

/// Enumerates the image and searches it for a conjugator.
fn full_check(node: &FreeNode, p: u32, cap: usize, exec: Execution, checks: &mut u64) -> Checked<()> {
    let hom = node.hom(p)?;
    let image = enumerate_image(&hom, cap, exec)?;
    *checks += image.len() as u64;
    let (a, b) = (hom.apply(&node.g), hom.apply(&node.h));
    match is_conjugate_finite(hom.target(), image.elements(), &b, &a, exec) {
        Some(s) => fail(format!("images are conjugate: {s} conjugates phi(h) to phi(g)")),
        None => Ok(()),
    }
}

/// Leaf shortcuts, then enumeration, then the descent bookkeeping and the
/// children: a conjugacy `φ(g') ~ φ(h')` would make some child pair conjugate.
fn compositional(node: &FreeNode, p: u32, cap: usize, exec: Execution, path: &str, checks: &mut u64) -> Checked<()> {
    let hom = node.hom(p)?;
    let t = hom.target();
    let (a, b) = (hom.apply(&node.g), hom.apply(&node.h));
    *checks += 1;
    if a == b {
        return fail(format!("node {path}: phi(g) = phi(h)"));
    }
    if t.is_identity(&a) || t.is_identity(&b) || t.commute_pairwise(hom.images()) {
        return Ok(());
    }
    match full_check(node, p, cap, exec, checks) {
        Err(Bad::Error(e)) if e.is_cap() => {}
        Err(Bad::Fail(why)) => return fail(format!("node {path}: {why}")),
        other => return other,
    }
    let Some(lift) = &node.lift else {
        return Err(Bad::Error(Error::cap(format!("enumeration of leaf {path}"), cap)));
    };
    let mu = &lift.mu;
    let (g, h) = if lift.swapped { (&node.h, &node.g) } else { (&node.g, &node.h) };
    let x = Word::gen(mu.designated());
    if mu.eval(g) != 0 || mu.eval(h) != 0 || !g.support().contains(&mu.designated()) {
        return fail(format!("node {path}: descent map does not vanish on the pair"));
    }
    let basis = schreier_generators(mu);
    let conj = |w: &Word, i: u64| x.pow(i as i64).mul(w).mul(&x.pow(-(i as i64)));
    for (i, c) in lift.children.iter().enumerate() {
        *checks += 2;
        if basis.evaluate(&c.g) != conj(g, lift.i0) || basis.evaluate(&c.h) != conj(h, i as u64) {
            return fail(format!("node {path}.{i}: pair is not (g_i0, h_i)"));
        }
        compositional(c, p, cap, exec, &format!("{path}.{i}"), checks)?;
    }
    Ok(())
}

/// Checks a freshly built tree, preferring full enumeration and falling
/// back to compositional checking when the image exceeds the cap.
pub fn verify_free_tree(root: &FreeNode, p: u32, cfg: &Config) -> Result<VerifyReport> {
    let mut checks = 0;
    if let Err(b) = recompute(root, p, "root", &mut checks) {
        return report(VerifyMode::FullEnumeration, checks, Err(b));
    }
    match full_check(root, p, cfg.enum_cap, cfg.execution, &mut checks) {
        Err(Bad::Error(e)) if e.is_cap() => {
            let res = compositional(root, p, cfg.enum_cap, cfg.execution, "root", &mut checks);
            report(VerifyMode::Compositional, checks, res)
        }
        res => report(VerifyMode::FullEnumeration, checks, res),
    }
}

/// `Ok(N)` with `N` the order of `φ(γ)` when `φ(γ)^a φ(g) ≠ φ(h) φ(γ)^b`
/// for all `a, b` modulo `N`; otherwise a violating `(a, b)`.
pub fn double_coset_table(hom: &PHom, g: &Word, h: &Word, gam: &Word) -> std::result::Result<u64, (u64, u64)> {
    let t = hom.target();
    let c = hom.apply(gam);
    let n = t.order(&c, hom.prime());
    let (fg, fh) = (hom.apply(g), hom.apply(h));
    let mut left = HashMap::new();
    let mut ca = t.identity();
    for a in 0..n {
        left.entry(t.mul(&ca, &fg)).or_insert(a);
        ca = t.mul(&ca, &c);
    }
    let mut rhs = fh;
    for b in 0..n {
        if let Some(&a) = left.get(&rhs) {
            return Err((a, b));
        }
        rhs = t.mul(&rhs, &c);
    }
    Ok(n)
}

/// Checks `φ(g) ≁ φ(h)` in the amalgam of the two finite images, plus the
/// syllable-length postconditions for the longer of `g`, `h`.
pub fn verify_surface(
    n: usize,
    g: &Word,
    h: &Word,
    factors: &[FactorImages; 2],
    gamma_order: u64,
    p: u32,
    cap: usize,
) -> Result<VerifyReport> {
    let mode = VerifyMode::Table;
    let homs: Vec<PHom> = match factors.iter().map(|f| PHom::new(p, f.target.clone(), f.images.clone())).collect() {
        Ok(v) => v,
        Err(e) => return report(mode, 0, fail(format!("invalid factor homomorphism: {e}"))),
    };
    let hom = match AmalgamHom::new(n, p, [homs[0].clone(), homs[1].clone()]) {
        Ok(h) => h,
        Err(e) => return report(mode, 0, fail(format!("factor images do not form an amalgam: {e}"))),
    };
    if hom.gamma_order != gamma_order {
        return report(mode, 0, fail(format!("gamma order recorded as {gamma_order}, recomputed {}", hom.gamma_order)));
    }
    let src = Amalgam::surface(n);
    let (ga, ha) = (src.from_word(g), src.from_word(h));
    let (gc, hc) = (src.cyclic_reduce(&ga).0, src.cyclic_reduce(&ha).0);
    let long = if gc.syl() >= hc.syl() { &gc } else { &hc };
    let tgt = &hom.target;
    let mut checks = 0u64;
    if long.syl() >= 2 {
        for (i, (s, x)) in src.parts(long).into_iter().enumerate() {
            checks += 1;
            let img = hom.apply(&src, &src.syllable(s, x));
            if img.syl() == 0 {
                return report(
                    mode,
                    checks,
                    fail(format!("image of syllable {} lies in the amalgamated subgroup", i + 1)),
                );
            }
        }
        let img = tgt.cyclic_reduce(&hom.apply(&src, long)).0;
        if img.syl() != long.syl() {
            return report(mode, checks, fail(format!("syllable length {} became {}", long.syl(), img.syl())));
        }
    }
    let (a, b) = (hom.apply(&src, &ga), hom.apply(&src, &ha));
    checks += long.syl().max(1) as u64 * gamma_order;
    let res = match tgt.is_conjugate(&a, &b, cap)? {
        Conjugacy::Conjugate(f) => fail(format!("images are conjugate (conjugator with {} syllables)", f.syl())),
        Conjugacy::NotConjugate => Ok(()),
    };
    report(mode, checks, res)
}
