//! Kernels of exponent homomorphisms `μ: F → Z/N`.
//!
//! With a designated generator `x` of value 1 and transversal `{x^i}`, the
//! kernel is free on the Schreier generators `d(y, i) = x^i y x^{-μ(x^i y)}`
//! (for `y ≠ x`) together with `X = x^N`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::words::{gamma, Letter, Word};

/// An additive homomorphism `F(rank) → Z/modulus`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentHom {
    modulus: u64,
    values: Vec<u64>,
    designated: u32,
}

impl ExponentHom {
    pub fn new(modulus: u64, values: Vec<u64>, designated: u32) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::Precondition("modulus must be at least 2".into()));
        }
        let d = designated as usize;
        if d >= values.len() {
            return Err(Error::Precondition("designated generator out of range".into()));
        }
        let values: Vec<u64> = values.into_iter().map(|v| v % modulus).collect();
        if values[d] != 1 {
            return Err(Error::Precondition("designated generator must have value 1".into()));
        }
        Ok(ExponentHom { modulus, values, designated })
    }

    /// `μ(x) = 1` on `x = designated`, 0 elsewhere.
    pub fn coordinate(modulus: u64, rank: usize, designated: u32) -> Result<Self> {
        let mut values = vec![0; rank];
        if let Some(v) = values.get_mut(designated as usize) {
            *v = 1;
        }
        ExponentHom::new(modulus, values, designated)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    pub fn designated(&self) -> u32 {
        self.designated
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn value(&self, gen: u32) -> u64 {
        self.values[gen as usize]
    }

    pub fn eval(&self, w: &Word) -> u64 {
        let n = self.modulus;
        w.letters().iter().fold(0, |acc, l| {
            let v = self.values[l.gen as usize];
            if l.inv {
                (acc + n - v) % n
            } else {
                (acc + v) % n
            }
        })
    }
}

/// Free basis of `Ker μ`: every `d(y, i)` for `y ≠ x`, then `X = x^N`.
#[derive(Clone, Debug)]
pub struct SchreierBasis {
    mu: ExponentHom,
    words: Vec<Word>,
    index: HashMap<(u32, u64), u32>,
    x_power: u32,
}

pub fn schreier_generators(mu: &ExponentHom) -> SchreierBasis {
    let n = mu.modulus;
    let x = Word::gen(mu.designated);
    let mut words = Vec::new();
    let mut index = HashMap::new();
    for y in 0..mu.rank() as u32 {
        if y == mu.designated {
            continue;
        }
        for i in 0..n {
            let shift = (i + mu.value(y)) % n;
            index.insert((y, i), words.len() as u32);
            words.push(x.pow(i as i64).mul(&Word::gen(y)).mul(&x.pow(-(shift as i64))));
        }
    }
    let x_power = words.len() as u32;
    words.push(x.pow(n as i64));
    SchreierBasis { mu: mu.clone(), words, index, x_power }
}

impl SchreierBasis {
    pub fn mu(&self) -> &ExponentHom {
        &self.mu
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Defining words in `F`, indexed by basis symbol.
    pub fn words(&self) -> &[Word] {
        &self.words
    }

    /// Symbol index of `d(y, i)`.
    pub fn symbol(&self, y: u32, i: u64) -> Option<u32> {
        self.index.get(&(y, i % self.mu.modulus)).copied()
    }

    pub fn x_power_symbol(&self) -> u32 {
        self.x_power
    }

    /// Evaluates a word over the basis back in `F`.
    pub fn evaluate(&self, w: &Word) -> Word {
        w.substitute(&self.words)
    }

    /// `f_i = x^i f x^{-i}` written over the basis, letter by letter.
    pub fn rewrite(&self, f: &Word, i: u64) -> Result<Word> {
        let n = self.mu.modulus;
        if self.mu.eval(f) != 0 {
            return Err(Error::Precondition("word is not in the kernel".into()));
        }
        let x = self.mu.designated;
        let mut cur = i % n;
        let mut out = Vec::with_capacity(f.len());
        for l in f.letters() {
            if l.gen == x {
                if !l.inv {
                    if cur == n - 1 {
                        out.push(Letter::pos(self.x_power));
                        cur = 0;
                    } else {
                        cur += 1;
                    }
                } else if cur == 0 {
                    out.push(Letter::neg(self.x_power));
                    cur = n - 1;
                } else {
                    cur -= 1;
                }
            } else {
                let v = self.mu.value(l.gen);
                if !l.inv {
                    out.push(Letter::pos(self.index[&(l.gen, cur)]));
                    cur = (cur + v) % n;
                } else {
                    let j = (cur + n - v) % n;
                    out.push(Letter::neg(self.index[&(l.gen, j)]));
                    cur = j;
                }
            }
        }
        debug_assert_eq!(cur, i % n);
        Ok(Word::from_letters(out))
    }

    /// Some `i` with `|f_i|_Y < |f|_X`, for `f` in the kernel containing `x`.
    pub fn choose_decreasing_i(&self, f: &Word) -> Result<u64> {
        if !f.support().contains(&self.mu.designated) {
            return Err(Error::Precondition("designated generator not in the support".into()));
        }
        for i in 0..self.mu.modulus {
            if self.rewrite(f, i)?.len() < f.len() {
                return Ok(i);
            }
        }
        Err(Error::Internal("no rewriting index shortens the word".into()))
    }
}

/// Stallings folding of a finite set of words, as a based labelled graph.
#[derive(Clone, Debug)]
pub struct FoldedGraph {
    vertices: usize,
    /// `edges[v]` maps a generator to its target, for positive letters.
    out: Vec<HashMap<u32, usize>>,
    inc: Vec<HashMap<u32, usize>>,
}

impl FoldedGraph {
    pub fn fold(words: &[Word]) -> FoldedGraph {
        let mut parent: Vec<usize> = vec![0];
        let mut raw: Vec<(usize, u32, usize)> = Vec::new();
        for w in words {
            let mut v = 0usize;
            let n = w.len();
            for (k, l) in w.letters().iter().enumerate() {
                let next = if k + 1 == n {
                    0
                } else {
                    parent.push(parent.len());
                    parent.len() - 1
                };
                if l.inv {
                    raw.push((next, l.gen, v));
                } else {
                    raw.push((v, l.gen, next));
                }
                v = next;
            }
        }
        fn find(parent: &mut [usize], v: usize) -> usize {
            let mut r = v;
            while parent[r] != r {
                r = parent[r];
            }
            let mut c = v;
            while parent[c] != r {
                let n = parent[c];
                parent[c] = r;
                c = n;
            }
            r
        }
        // repeat until no two edges with the same label share a start or an end
        loop {
            let mut changed = false;
            let mut out: HashMap<(usize, u32), usize> = HashMap::new();
            let mut inc: HashMap<(usize, u32), usize> = HashMap::new();
            for &(a, g, b) in &raw {
                let (a, b) = (find(&mut parent, a), find(&mut parent, b));
                if let Some(&t) = out.get(&(a, g)) {
                    let t = find(&mut parent, t);
                    if t != b {
                        parent[t.max(b)] = t.min(b);
                        changed = true;
                    }
                } else {
                    out.insert((a, g), b);
                }
                let (a, b) = (find(&mut parent, a), find(&mut parent, b));
                if let Some(&s) = inc.get(&(b, g)) {
                    let s = find(&mut parent, s);
                    if s != a {
                        parent[s.max(a)] = s.min(a);
                        changed = true;
                    }
                } else {
                    inc.insert((b, g), a);
                }
            }
            if !changed {
                break;
            }
        }
        let mut ids: HashMap<usize, usize> = HashMap::new();
        let root = find(&mut parent, 0);
        ids.insert(root, 0);
        for v in 0..parent.len() {
            let r = find(&mut parent, v);
            let next = ids.len();
            ids.entry(r).or_insert(next);
        }
        let vertices = ids.len();
        let mut out = vec![HashMap::new(); vertices];
        let mut inc = vec![HashMap::new(); vertices];
        for &(a, g, b) in &raw {
            let a = ids[&find(&mut parent, a)];
            let b = ids[&find(&mut parent, b)];
            out[a].insert(g, b);
            inc[b].insert(g, a);
        }
        FoldedGraph { vertices, out, inc }
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> usize {
        self.out.iter().map(HashMap::len).sum()
    }

    /// Rank of the subgroup the graph represents: `E - V + 1`.
    pub fn rank(&self) -> usize {
        self.edges() + 1 - self.vertices
    }

    /// Whether every vertex has every in- and out-edge, i.e. the subgroup has
    /// finite index equal to the number of vertices.
    pub fn is_covering(&self, rank: usize) -> bool {
        (0..self.vertices).all(|v| self.out[v].len() == rank && self.inc[v].len() == rank)
    }

    /// Whether `w` reads a closed path at the base vertex.
    pub fn accepts(&self, w: &Word) -> bool {
        let mut v = 0;
        for l in w.letters() {
            let next = if l.inv { self.inc[v].get(&l.gen) } else { self.out[v].get(&l.gen) };
            match next {
                Some(&t) => v = t,
                None => return false,
            }
        }
        v == 0
    }
}

/// Free basis of `Ker μ` for `μ(x₁) = 1` modulo `p²` on `F(x1,y1,…,xn,yn)`,
/// containing `γ` and all of its `x₁`-conjugates but one.
#[derive(Clone, Debug)]
pub struct CoverBasis {
    n: usize,
    p: u32,
    schreier: SchreierBasis,
    /// Defining words of the basis symbols.
    words: Vec<Word>,
    names: Vec<String>,
    /// Basis symbol of `z_l`, or `None` for the excluded index.
    z_symbol: Vec<Option<u32>>,
    k0: u64,
    l0: u64,
    /// `w` with `g γ g⁻¹ = w z_{l0} w⁻¹`, as a word over the basis.
    w: Word,
    /// Each Schreier generator written over the basis.
    schreier_images: Vec<Word>,
}

impl CoverBasis {
    pub fn new(n: usize, p: u32, g: &Word) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("genus must be positive".into()));
        }
        let rank = 2 * n;
        if g.min_rank() > rank {
            return Err(Error::RankMismatch { expected: rank, found: g.min_rank() });
        }
        let big_n = (p as u64) * (p as u64);
        let mu = ExponentHom::coordinate(big_n, rank, 0)?;
        let schreier = schreier_generators(&mu);
        let gam = gamma(n);
        let x1 = Word::gen(0);
        let conj = |l: u64, w: &Word| x1.pow(l as i64).mul(w).mul(&x1.pow(-(l as i64)));
        let l0 = mu.eval(g);
        let k0 = (1..big_n).find(|&k| k != l0).expect("p² ≥ 4 leaves a choice");

        let mut words = Vec::new();
        let mut names = Vec::new();
        let mut z_symbol = vec![None; big_n as usize];
        for l in 0..big_n {
            if l != k0 {
                z_symbol[l as usize] = Some(words.len() as u32);
                words.push(conj(l, &gam));
                names.push(format!("z{l}"));
            }
        }
        let x_sym = words.len() as u32;
        words.push(x1.pow(big_n as i64));
        names.push("X".into());
        let b0_sym = words.len() as u32;
        words.push(Word::gen(1));
        names.push("b0".into());
        // u/v symbols: x1^l x_j x1^-l and x1^l y_j x1^-l for j ≥ 2
        let mut uv: HashMap<(u32, u64), u32> = HashMap::new();
        for j in 1..n as u32 {
            for l in 0..big_n {
                for (k, gen) in [(0, 2 * j), (1, 2 * j + 1)] {
                    uv.insert((gen, l), words.len() as u32);
                    words.push(conj(l, &Word::gen(gen)));
                    names.push(format!("{}{}_{}", if k == 0 { "u" } else { "v" }, j + 1, l));
                }
            }
        }

        // c_l = x1^l ([x2,y2]⋯[xn,yn]) x1^-l over the basis
        let c_word = |l: u64| -> Word {
            let mut w = Word::identity();
            for j in 1..n as u32 {
                let a = Word::gen(uv[&(2 * j, l)]);
                let b = Word::gen(uv[&(2 * j + 1, l)]);
                w = w.mul(&Word::commutator(&a, &b));
            }
            w
        };
        let z = |l: u64| Word::gen(z_symbol[l as usize].expect("z_l is a basis symbol"));
        let xw = Word::gen(x_sym);
        // b_l = x1^l y1 x1^-l: forward from b0 below k0, backward from b_{N-1}
        let mut b: Vec<Word> = vec![Word::identity(); big_n as usize];
        b[0] = Word::gen(b0_sym);
        for l in 1..k0 {
            b[l as usize] = b[(l - 1) as usize].mul(&z(l)).mul(&c_word(l).inv());
        }
        // z_0 = X⁻¹ b_{N-1}⁻¹ X b_0 c_0, and k0 ≥ 1 keeps z_0 in the basis
        let last = (big_n - 1) as usize;
        b[last] = xw.mul(&b[0]).mul(&c_word(0)).mul(&z(0).inv()).mul(&xw.inv());
        for l in (k0 + 1..big_n).rev() {
            b[(l - 1) as usize] = b[l as usize].mul(&c_word(l)).mul(&z(l).inv());
        }

        let mut schreier_images = Vec::with_capacity(schreier.len());
        for y in 1..rank as u32 {
            for i in 0..big_n {
                let img = if y == 1 { b[i as usize].clone() } else { Word::gen(uv[&(y, i)]) };
                schreier_images.push(img);
            }
        }
        schreier_images.push(xw);

        let mut basis =
            CoverBasis { n, p, schreier, words, names, z_symbol, k0, l0, w: Word::identity(), schreier_images };
        let w_f = g.mul(&x1.pow(-(l0 as i64)));
        basis.w = basis.rewrite(&w_f)?;
        basis.check(g)?;
        Ok(basis)
    }

    fn check(&self, g: &Word) -> Result<()> {
        let bad = |m: &str| Err(Error::Internal(format!("cover basis: {m}")));
        let big_n = self.big_n();
        if self.words.len() as u64 != big_n * (2 * self.n as u64 - 1) + 1 {
            return bad("wrong cardinality");
        }
        if self.words[0] != gamma(self.n) {
            return bad("gamma is not the first symbol");
        }
        for (i, w) in self.schreier.words().iter().enumerate() {
            if self.evaluate(&self.schreier_images[i]) != *w {
                return bad("Schreier generator not recovered");
            }
        }
        if self.words.iter().any(|w| self.schreier.mu().eval(w) != 0) {
            return bad("symbol outside the kernel");
        }
        let gam = gamma(self.n);
        let zl = &self.words[self.z_symbol[self.l0 as usize].expect("l0 differs from k0") as usize];
        let wf = self.evaluate(&self.w);
        if g.mul(&gam).mul(&g.inv()) != wf.mul(zl).mul(&wf.inv()) {
            return bad("g γ g⁻¹ ≠ w z w⁻¹");
        }
        let graph = FoldedGraph::fold(&self.words);
        if graph.rank() != self.words.len() || graph.vertices() as u64 != big_n || !graph.is_covering(2 * self.n) {
            return bad("folding does not give a free basis of an index-p² subgroup");
        }
        Ok(())
    }

    pub fn genus(&self) -> usize {
        self.n
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    fn big_n(&self) -> u64 {
        self.schreier.mu().modulus()
    }

    pub fn mu(&self) -> &ExponentHom {
        self.schreier.mu()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn k0(&self) -> u64 {
        self.k0
    }

    pub fn l0(&self) -> u64 {
        self.l0
    }

    /// Basis symbol of `z_l = x₁^l γ x₁^{-l}` (none for `l = k0`).
    pub fn z_symbol(&self, l: u64) -> Option<u32> {
        self.z_symbol.get(l as usize).copied().flatten()
    }

    /// `w` with `g γ g⁻¹ = w z_{l0} w⁻¹`, over the basis.
    pub fn w(&self) -> &Word {
        &self.w
    }

    pub fn evaluate(&self, w: &Word) -> Word {
        w.substitute(&self.words)
    }

    /// Normal form over the basis of a kernel element.
    pub fn rewrite(&self, f: &Word) -> Result<Word> {
        let y = self.schreier.rewrite(f, 0)?;
        Ok(y.substitute(&self.schreier_images))
    }

    /// Rank of the subgroup generated by the symbols, by folding.
    pub fn nielsen_rank(&self) -> usize {
        FoldedGraph::fold(&self.words).rank()
    }
}
