//! Truncated noncommutative polynomials over F_p.
//!
//! A monomial is a word in the symbols `e1, …, em` of degree below the
//! truncation bound `k`. With a nilpotency exponent `q`, any monomial
//! containing `q` consecutive copies of one symbol vanishes. The elements
//! with constant term 1 form a finite p-group under multiplication.

use std::fmt;

use crate::error::{Error, Result};

/// Parameters of a truncated algebra `F_p<e1..em> / (deg ≥ k, e^q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyRing {
    pub p: u32,
    pub symbols: u32,
    pub degree: u32,
    pub nilpotency: Option<u32>,
}

impl PolyRing {
    pub fn new(p: u32, symbols: u32, degree: u32, nilpotency: Option<u32>) -> Result<Self> {
        if symbols == 0 || degree == 0 {
            return Err(Error::Precondition("truncated algebra needs m ≥ 1 and k ≥ 1".into()));
        }
        if nilpotency == Some(0) || nilpotency == Some(1) {
            return Err(Error::Precondition("nilpotency exponent must be at least 2".into()));
        }
        // Monomial codes are base-m integers of at most k-1 digits.
        let fits = (symbols as u64).checked_pow(degree.saturating_sub(1)).is_some_and(|v| v < (1u64 << 62));
        if !fits || degree > 64 {
            return Err(Error::cap("monomial code width (symbols^degree)", 1 << 62));
        }
        Ok(PolyRing { p, symbols, degree, nilpotency })
    }

    /// Number of monomials of degree 1..k, i.e. log_p of the unit group order.
    pub fn unit_group_log_order(&self) -> u64 {
        let m = self.symbols as u64;
        match self.nilpotency {
            None => (1..self.degree as u64).map(|d| m.saturating_pow(d as u32)).fold(0u64, |a, b| a.saturating_add(b)),
            Some(q) => {
                // words avoiding q equal consecutive symbols; runs[r] counts
                // words whose final run has length r + 1
                let q = q as usize;
                let mut runs = vec![0u64; q - 1];
                let mut total: u64 = 0;
                for d in 1..self.degree {
                    if d == 1 {
                        runs[0] = m;
                    } else {
                        let all = runs.iter().fold(0u64, |a, &b| a.saturating_add(b));
                        let mut next = vec![0u64; q - 1];
                        next[0] = all.saturating_mul(m - 1);
                        next[1..].copy_from_slice(&runs[..q - 2]);
                        runs = next;
                    }
                    total = total.saturating_add(runs.iter().fold(0u64, |a, &b| a.saturating_add(b)));
                }
                total
            }
        }
    }

    pub fn one(&self) -> TruncatedPoly {
        TruncatedPoly { ring: *self, constant: 1 % self.p, terms: Vec::new() }
    }

    /// `1 + e_{s+1}` (symbols are 0-based internally).
    pub fn one_plus_symbol(&self, s: u32) -> TruncatedPoly {
        let mut t = self.one();
        if self.degree > 1 {
            t.terms.push((Mono { len: 1, code: s as u64 }, 1 % self.p));
        }
        t
    }

    fn mono_allowed(&self, m: Mono) -> bool {
        if (m.len as u32) >= self.degree {
            return false;
        }
        match self.nilpotency {
            None => true,
            Some(q) => max_run(m, self.symbols as u64) < q as usize,
        }
    }
}

impl fmt::Display for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.nilpotency {
            Some(q) => write!(f, "U({},{},{})", self.symbols, self.degree, q),
            None => write!(f, "U({},{})", self.symbols, self.degree),
        }
    }
}

/// A monomial: `len` symbols encoded base-m, most significant first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono {
    pub len: u8,
    pub code: u64,
}

impl Mono {
    pub fn symbols(self, m: u64) -> Vec<u32> {
        let mut out = vec![0u32; self.len as usize];
        let mut c = self.code;
        for slot in out.iter_mut().rev() {
            *slot = (c % m) as u32;
            c /= m;
        }
        out
    }

    fn from_symbols(syms: &[u32], m: u64) -> Mono {
        let code = syms.iter().fold(0u64, |acc, &s| acc * m + s as u64);
        Mono { len: syms.len() as u8, code }
    }
}

fn max_run(m: Mono, base: u64) -> usize {
    let syms = m.symbols(base);
    let mut best = 0;
    let mut run = 0;
    for i in 0..syms.len() {
        run = if i > 0 && syms[i] == syms[i - 1] { run + 1 } else { 1 };
        best = best.max(run);
    }
    best
}

fn trailing_run(m: Mono, base: u64) -> (u64, usize) {
    let mut c = m.code;
    let last = c % base;
    let mut run = 0;
    for _ in 0..m.len {
        if c % base != last {
            break;
        }
        run += 1;
        c /= base;
    }
    (last, run)
}

fn leading_run(m: Mono, base: u64) -> (u64, usize) {
    let syms = m.symbols(base);
    let first = syms[0];
    (first as u64, syms.iter().take_while(|&&s| s == first).count())
}

/// An element of a truncated algebra: constant term plus sorted nonzero terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruncatedPoly {
    ring: PolyRing,
    constant: u32,
    terms: Vec<(Mono, u32)>,
}

impl TruncatedPoly {
    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn constant(&self) -> u32 {
        self.constant
    }

    pub fn terms(&self) -> &[(Mono, u32)] {
        &self.terms
    }

    pub fn is_one(&self) -> bool {
        self.constant == 1 % self.ring.p && self.terms.is_empty()
    }

    /// Least degree of a nonconstant term.
    pub fn lowest_degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.len as u32)
    }

    /// Builds from raw terms; reduces coefficients, drops forbidden monomials.
    pub fn from_terms(ring: PolyRing, constant: u32, terms: Vec<(Vec<u32>, u32)>) -> Result<Self> {
        let m = ring.symbols as u64;
        let mut raw = Vec::with_capacity(terms.len());
        for (syms, c) in terms {
            if syms.is_empty() {
                return Err(Error::Precondition("constant passed as a term".into()));
            }
            if syms.iter().any(|&s| s >= ring.symbols) {
                return Err(Error::TypeMismatch("symbol out of range".into()));
            }
            if syms.len() >= 64 {
                continue;
            }
            let mono = Mono::from_symbols(&syms, m);
            if ring.mono_allowed(mono) {
                raw.push((mono, c % ring.p));
            }
        }
        Ok(TruncatedPoly { ring, constant: constant % ring.p, terms: normalize(raw, ring.p) })
    }

    pub fn mul(&self, other: &TruncatedPoly) -> TruncatedPoly {
        debug_assert_eq!(self.ring, other.ring);
        let ring = self.ring;
        let p = ring.p as u64;
        let base = ring.symbols as u64;
        let k = ring.degree as u8;
        let mut raw: Vec<(Mono, u32)> = Vec::with_capacity(2 * (self.terms.len() + other.terms.len()));
        let (ca, cb) = (self.constant as u64, other.constant as u64);
        if cb != 0 {
            raw.extend(self.terms.iter().map(|&(m, c)| (m, (c as u64 * cb % p) as u32)));
        }
        if ca != 0 {
            raw.extend(other.terms.iter().map(|&(m, c)| (m, (c as u64 * ca % p) as u32)));
        }
        for &(ma, a) in &self.terms {
            if ma.len >= k - 1 {
                break;
            }
            let tail = ring.nilpotency.map(|_| trailing_run(ma, base));
            for &(mb, b) in &other.terms {
                if ma.len + mb.len >= k {
                    break;
                }
                if let (Some(q), Some((ls, lr))) = (ring.nilpotency, tail) {
                    let (fs, fr) = leading_run(mb, base);
                    if ls == fs && lr + fr >= q as usize {
                        continue;
                    }
                }
                let code = ma.code * base.pow(mb.len as u32) + mb.code;
                raw.push((Mono { len: ma.len + mb.len, code }, (a as u64 * b as u64 % p) as u32));
            }
        }
        TruncatedPoly { ring, constant: (ca * cb % p) as u32, terms: normalize(raw, ring.p) }
    }

    /// Inverse of a unit with constant term 1: `1 - n + n² - …`.
    pub fn inv(&self) -> Result<TruncatedPoly> {
        if self.constant != 1 % self.ring.p {
            return Err(Error::Precondition("inverse requires constant term 1".into()));
        }
        let minus_n = TruncatedPoly {
            ring: self.ring,
            constant: 0,
            terms: self.terms.iter().map(|&(m, c)| (m, (self.ring.p - c) % self.ring.p)).collect(),
        };
        let mut r = self.ring.one();
        for _ in 1..self.ring.degree {
            r = self.ring.one().add(&minus_n.mul(&r));
        }
        Ok(r)
    }

    pub fn add(&self, other: &TruncatedPoly) -> TruncatedPoly {
        let mut raw = self.terms.clone();
        raw.extend_from_slice(&other.terms);
        TruncatedPoly {
            ring: self.ring,
            constant: (self.constant + other.constant) % self.ring.p,
            terms: normalize(raw, self.ring.p),
        }
    }

    pub fn pow(&self, mut e: u64) -> TruncatedPoly {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Augmentation part `self - constant`.
    pub fn augmentation(&self) -> TruncatedPoly {
        TruncatedPoly { ring: self.ring, constant: 0, terms: self.terms.clone() }
    }

    pub fn parse(ring: PolyRing, text: &str) -> Result<Self> {
        let bad = |msg: String| Error::Parse { line: 0, msg };
        let mut constant = 0u32;
        let mut terms = Vec::new();
        for term in text.trim().split('+') {
            let mut coef: u64 = 1;
            let mut syms = Vec::new();
            for (i, factor) in term.split('*').enumerate() {
                if let Some(idx) = factor.strip_prefix('e') {
                    let s: u32 = idx.parse().map_err(|_| bad(format!("bad symbol {factor:?}")))?;
                    if s == 0 || s > ring.symbols {
                        return Err(bad(format!("symbol {factor:?} out of range")));
                    }
                    syms.push(s - 1);
                } else if i == 0 {
                    coef = factor.parse().map_err(|_| bad(format!("bad coefficient {factor:?}")))?;
                    if coef == 0 || coef >= ring.p as u64 {
                        return Err(bad(format!("coefficient {coef} is not a nonzero residue")));
                    }
                } else {
                    return Err(bad(format!("bad factor {factor:?}")));
                }
            }
            if syms.is_empty() {
                constant = (constant as u64 + coef) as u32 % ring.p;
            } else {
                if syms.len() as u32 >= ring.degree {
                    return Err(bad(format!("monomial of degree {} beyond bound", syms.len())));
                }
                let mono = Mono::from_symbols(&syms, ring.symbols as u64);
                if !ring.mono_allowed(mono) {
                    return Err(bad("monomial violates nilpotency".into()));
                }
                terms.push((syms, coef as u32));
            }
        }
        let poly = TruncatedPoly::from_terms(ring, constant, terms)?;
        if poly.to_string() != text.trim() {
            return Err(bad(format!("non-canonical polynomial literal {text:?}")));
        }
        Ok(poly)
    }
}

fn normalize(mut raw: Vec<(Mono, u32)>, p: u32) -> Vec<(Mono, u32)> {
    raw.sort_unstable_by_key(|&(m, _)| m);
    let mut out: Vec<(Mono, u32)> = Vec::with_capacity(raw.len());
    for (m, c) in raw {
        match out.last_mut() {
            Some((lm, lc)) if *lm == m => *lc = (*lc + c) % p,
            _ => {
                if let Some((_, 0)) = out.last() {
                    out.pop();
                }
                out.push((m, c));
            }
        }
    }
    if let Some((_, 0)) = out.last() {
        out.pop();
    }
    out
}

impl fmt::Display for TruncatedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.ring.symbols as u64;
        let mut first = true;
        if self.constant != 0 || self.terms.is_empty() {
            write!(f, "{}", self.constant)?;
            first = false;
        }
        for &(mono, c) in &self.terms {
            if !first {
                write!(f, "+")?;
            }
            first = false;
            if c != 1 {
                write!(f, "{c}*")?;
            }
            let names: Vec<String> = mono.symbols(m).iter().map(|s| format!("e{}", s + 1)).collect();
            write!(f, "{}", names.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_in_char_two_truncates() {
        let r = PolyRing::new(2, 1, 2, None).unwrap();
        let a = r.one_plus_symbol(0);
        assert!(a.mul(&a).is_one());
    }

    #[test]
    fn geometric_inverse_char_three() {
        let r = PolyRing::new(3, 1, 3, None).unwrap();
        let a = r.one_plus_symbol(0);
        let inv = a.inv().unwrap();
        assert_eq!(inv.to_string(), "1+2*e1+e1*e1");
        assert!(a.mul(&inv).is_one());
    }

    #[test]
    fn product_of_two_symbols() {
        let r = PolyRing::new(5, 2, 3, None).unwrap();
        let prod = r.one_plus_symbol(0).mul(&r.one_plus_symbol(1));
        assert_eq!(prod.to_string(), "1+e1+e2+e1*e2");
    }

    #[test]
    fn nilpotency_prunes_runs() {
        let r = PolyRing::new(2, 2, 6, Some(2)).unwrap();
        let a = r.one_plus_symbol(0);
        // (1+e1)^2 = 1 + e1^2 = 1 when e1^2 = 0
        assert!(a.mul(&a).is_one());
        let b = r.one_plus_symbol(1);
        assert!(!a.mul(&b).mul(&a).is_one());
        assert!(TruncatedPoly::parse(r, "1+e1*e1").is_err());
    }

    #[test]
    fn literal_round_trip() {
        let r = PolyRing::new(3, 3, 4, None).unwrap();
        for s in ["1", "1+e1", "1+2*e3+e1*e2+2*e1*e2*e3"] {
            assert_eq!(TruncatedPoly::parse(r, s).unwrap().to_string(), s);
        }
        assert!(TruncatedPoly::parse(r, "1+e4").is_err());
        assert!(TruncatedPoly::parse(r, "1+3*e1").is_err());
    }

    #[test]
    fn unit_group_orders() {
        assert_eq!(PolyRing::new(2, 2, 3, None).unwrap().unit_group_log_order(), 6);
        // two symbols, q = 2: alternating words only, 2 of each degree
        assert_eq!(PolyRing::new(2, 2, 4, Some(2)).unwrap().unit_group_log_order(), 6);
        assert_eq!(PolyRing::new(2, 1, 5, Some(4)).unwrap().unit_group_log_order(), 3);
    }
}
