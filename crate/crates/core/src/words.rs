//! Reduced words in free groups of finite rank.
//!
//! Words are always stored freely reduced; every constructor reduces. The
//! canonical text syntax is a `*`-separated list of `name` or `name^-1`
//! factors, with `1` for the empty word.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: u32,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: u32, inv: bool) -> Self {
        Letter { gen, inv }
    }

    pub fn pos(gen: u32) -> Self {
        Letter { gen, inv: false }
    }

    pub fn neg(gen: u32) -> Self {
        Letter { gen, inv: true }
    }

    pub fn inverse(self) -> Self {
        Letter { gen: self.gen, inv: !self.inv }
    }

    /// +1 or -1.
    pub fn sign(self) -> i64 {
        if self.inv {
            -1
        } else {
            1
        }
    }
}

/// Names for the free generators of a free group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::Alphabet("rank must be at least 1".into()));
        }
        let mut seen = BTreeSet::new();
        for n in &names {
            if n.is_empty() || n == "1" || !n.chars().all(|c| c.is_ascii_graphic() && c != '*' && c != '^') {
                return Err(Error::Alphabet(format!("invalid generator name {n:?}")));
            }
            if !seen.insert(n.as_str()) {
                return Err(Error::Alphabet(format!("duplicate generator name {n:?}")));
            }
        }
        Ok(Alphabet { names })
    }

    /// `x, y, z, w` for rank up to 4, `x1, …, xN` beyond.
    pub fn standard(rank: usize) -> Self {
        const SMALL: [&str; 4] = ["x", "y", "z", "w"];
        let names = if rank <= SMALL.len() {
            SMALL[..rank].iter().map(|s| s.to_string()).collect()
        } else {
            (1..=rank).map(|i| format!("x{i}")).collect()
        };
        Alphabet { names }
    }

    /// `x1, y1, …, xn, yn`, or the primed `x'1, y'1, …` for the second factor
    /// of a surface splitting.
    pub fn surface(genus: usize, primed: bool) -> Self {
        let tick = if primed { "'" } else { "" };
        let names = (1..=genus).flat_map(|i| [format!("x{tick}{i}"), format!("y{tick}{i}")]).collect();
        Alphabet { names }
    }

    /// `prefix1, …, prefixN`; used for Schreier and cover bases.
    pub fn indexed(prefix: &str, rank: usize) -> Self {
        Alphabet { names: (1..=rank).map(|i| format!("{prefix}{i}")).collect() }
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, gen: u32) -> &str {
        &self.names[gen as usize]
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32)
    }

    pub fn parse(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text == "1" {
            return Ok(Word::identity());
        }
        if text.is_empty() {
            return Err(Error::Parse { line: 0, msg: "empty word literal (use `1`)".into() });
        }
        let mut letters = Vec::new();
        for factor in text.split('*') {
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e
                        .parse()
                        .map_err(|_| Error::Parse { line: 0, msg: format!("bad exponent in factor {factor:?}") })?;
                    (n, e)
                }
                None => (factor, 1),
            };
            if name == "1" && exp == 1 {
                continue;
            }
            let gen = self
                .index_of(name)
                .ok_or_else(|| Error::Parse { line: 0, msg: format!("unknown generator {name:?}") })?;
            let l = Letter::new(gen, exp < 0);
            letters.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
        }
        Ok(Word::from_letters(letters))
    }

    pub fn format(&self, w: &Word) -> String {
        if w.is_identity() {
            return "1".to_string();
        }
        let parts: Vec<String> = w
            .letters()
            .iter()
            .map(|l| if l.inv { format!("{}^-1", self.name(l.gen)) } else { self.name(l.gen).to_string() })
            .collect();
        parts.join("*")
    }

    /// Checks that every letter of `w` is a generator of this alphabet.
    pub fn check(&self, w: &Word) -> Result<()> {
        match w.letters().iter().find(|l| l.gen as usize >= self.rank()) {
            Some(l) => Err(Error::RankMismatch { expected: self.rank(), found: l.gen as usize + 1 }),
            None => Ok(()),
        }
    }
}

/// A freely reduced word.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn gen(g: u32) -> Self {
        Word(vec![Letter::pos(g)])
    }

    /// Free reduction of an arbitrary letter sequence.
    pub fn from_letters(raw: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in raw {
            push_reduced(&mut out, l);
        }
        Word(out)
    }

    /// Builds from signed generator codes: `+k` is generator `k-1`, `-k` its inverse.
    pub fn from_signed(codes: &[i32]) -> Self {
        Word::from_letters(codes.iter().map(|&c| {
            assert!(c != 0, "zero is not a letter code");
            Letter::new(c.unsigned_abs() - 1, c < 0)
        }))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            push_reduced(&mut out, l);
        }
        Word(out)
    }

    pub fn inv(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b`.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.inv().mul(&b.inv()).mul(a).mul(b)
    }

    /// `self · w · self⁻¹`.
    pub fn conjugate(&self, w: &Word) -> Word {
        self.mul(w).mul(&self.inv())
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inv() } else { self.clone() };
        let mut out = Vec::with_capacity(base.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            for &l in &base.0 {
                push_reduced(&mut out, l);
            }
        }
        Word(out)
    }

    pub fn support(&self) -> BTreeSet<u32> {
        self.0.iter().map(|l| l.gen).collect()
    }

    /// Exponent-sum vector of length `rank`.
    pub fn abelianize(&self, rank: usize) -> Vec<i64> {
        let mut v = vec![0i64; rank];
        for l in &self.0 {
            v[l.gen as usize] += l.sign();
        }
        v
    }

    /// Exponent sum of one generator.
    pub fn exponent_sum(&self, gen: u32) -> i64 {
        self.0.iter().filter(|l| l.gen == gen).map(|l| l.sign()).sum()
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(a), Some(b)) => self.0.len() == 1 || *a != b.inverse(),
            _ => true,
        }
    }

    /// Returns `(core, conjugator)` with `self = conjugator · core · conjugator⁻¹`
    /// and `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let n = self.0.len();
        let mut i = 0;
        while 2 * i + 1 < n && self.0[i] == self.0[n - 1 - i].inverse() {
            i += 1;
        }
        (Word(self.0[i..n - i].to_vec()), Word(self.0[..i].to_vec()))
    }

    /// The rotation `w[k..] · w[..k]` of a (cyclically reduced) word.
    pub fn rotate(&self, k: usize) -> Word {
        let k = if self.0.is_empty() { 0 } else { k % self.0.len() };
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// Prefix of length `k`.
    pub fn prefix(&self, k: usize) -> Word {
        Word(self.0[..k].to_vec())
    }

    pub fn suffix_from(&self, k: usize) -> Word {
        Word(self.0[k..].to_vec())
    }

    /// Least rotation of the cyclically reduced core; a complete invariant of
    /// the conjugacy class.
    pub fn canonical_cyclic(&self) -> Word {
        let (core, _) = self.cyclic_reduce();
        (0..core.len().max(1)).map(|k| core.rotate(k)).min().unwrap_or_default()
    }

    /// Substitutes a word for every generator.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Vec::new();
        for l in &self.0 {
            let img = &images[l.gen as usize];
            if l.inv {
                for &m in img.0.iter().rev() {
                    push_reduced(&mut out, m.inverse());
                }
            } else {
                for &m in &img.0 {
                    push_reduced(&mut out, m);
                }
            }
        }
        Word(out)
    }

    /// The exponent `a` with `self = base^a`, for a cyclically reduced `base`.
    pub fn power_of(&self, base: &Word) -> Option<i64> {
        if self.is_empty() {
            return Some(0);
        }
        if base.is_empty() || !self.len().is_multiple_of(base.len()) {
            return None;
        }
        let a = (self.len() / base.len()) as i64;
        if base.pow(a) == *self {
            Some(a)
        } else if base.pow(-a) == *self {
            Some(-a)
        } else {
            None
        }
    }

    /// Highest generator index plus one (0 for the empty word).
    pub fn min_rank(&self) -> usize {
        self.0.iter().map(|l| l.gen as usize + 1).max().unwrap_or(0)
    }
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inverse()) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl fmt::Display for Word {
    /// Debug-style rendering over generic names `s1, s2, …`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "s{}", l.gen + 1)?;
            if l.inv {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

/// The surface relator `[x1,y1]⋯[xn,yn]` over the alphabet `x1,y1,…,xn,yn`.
pub fn gamma(n: usize) -> Word {
    let mut w = Word::identity();
    for i in 0..n as u32 {
        w = w.mul(&Word::commutator(&Word::gen(2 * i), &Word::gen(2 * i + 1)));
    }
    w
}

/// Like [`gamma`] but checks the alphabet has rank `2n`.
pub fn gamma_for(alphabet: &Alphabet, n: usize) -> Result<Word> {
    if alphabet.rank() != 2 * n {
        return Err(Error::RankMismatch { expected: 2 * n, found: alphabet.rank() });
    }
    Ok(gamma(n))
}

/// Returns `f` with `f · h · f⁻¹ = g` when `g` and `h` are conjugate.
pub fn is_conjugate_free(g: &Word, h: &Word) -> Option<Word> {
    let (gc, a) = g.cyclic_reduce();
    let (hc, b) = h.cyclic_reduce();
    if gc.len() != hc.len() {
        return None;
    }
    if gc.is_empty() {
        return Some(a.mul(&b.inv()));
    }
    // gc = hc[k..]·hc[..k] = u⁻¹·hc·u with u = hc[..k]
    (0..hc.len()).find(|&k| hc.rotate(k) == gc).map(|k| {
        let u = hc.prefix(k);
        a.mul(&u.inv()).mul(&b.inv())
    })
}

/// All reduced words of length exactly `len` over `rank` generators, in a
/// fixed order.
pub fn words_of_length(rank: usize, len: usize) -> Vec<Word> {
    let mut layer = vec![Vec::<Letter>::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(layer.len() * (2 * rank));
        for w in &layer {
            for g in 0..rank as u32 {
                for inv in [false, true] {
                    let l = Letter::new(g, inv);
                    if w.last() != Some(&l.inverse()) {
                        let mut v = w.clone();
                        v.push(l);
                        next.push(v);
                    }
                }
            }
        }
        layer = next;
    }
    layer.into_iter().map(Word).collect()
}

/// All reduced words of length at most `max_len`.
pub fn words_up_to(rank: usize, max_len: usize) -> Vec<Word> {
    (0..=max_len).flat_map(|n| words_of_length(rank, n)).collect()
}
