//! Brute-force checks of the lower p-central filtration on small finite
//! groups given by multiplication tables.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::hash::Hash;

use crate::error::{Error, Result};

/// Largest group the lab will tabulate.
pub const ORDER_CAP: usize = 64;
/// Default bound for automorphism-group computations.
pub const AUT_CAP: usize = 32;

/// A finite group as a multiplication table on `0..order`.
#[derive(Clone, Debug)]
pub struct TableGroup {
    name: String,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    gens: Vec<usize>,
}

/// A subgroup as a membership mask.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    members: Vec<bool>,
}

impl Subgroup {
    pub fn contains(&self, g: usize) -> bool {
        self.members[g]
    }

    pub fn order(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn elements(&self) -> Vec<usize> {
        (0..self.members.len()).filter(|&g| self.members[g]).collect()
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.members.iter().zip(&other.members).all(|(&a, &b)| !a || b)
    }
}

fn quaternion_mul(a: &(bool, u8), b: &(bool, u8)) -> (bool, u8) {
    // units 0 = 1, 1 = i, 2 = j, 3 = k
    let (s, u) = match (a.1, b.1) {
        (0, v) | (v, 0) => (false, v),
        (x, y) if x == y => (true, 0),
        (1, 2) => (false, 3),
        (2, 3) => (false, 1),
        (3, 1) => (false, 2),
        (2, 1) => (true, 3),
        (3, 2) => (true, 1),
        (1, 3) => (true, 2),
        _ => unreachable!("quaternion units"),
    };
    (a.0 ^ b.0 ^ s, u)
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    // apply b, then a
    b.iter().map(|&i| a[i]).collect()
}

impl TableGroup {
    /// Closure of `gens` under `mul`, tabulated. Elements are numbered in
    /// sorted order with the identity first.
    pub fn generate<T, F>(name: &str, gens: &[T], mul: F) -> Result<Self>
    where
        T: Clone + Eq + Hash + Ord,
        F: Fn(&T, &T) -> T,
    {
        let mut seen: BTreeSet<T> = gens.iter().cloned().collect();
        let mut queue: VecDeque<T> = gens.iter().cloned().collect();
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = mul(&x, g);
                if seen.insert(y.clone()) {
                    if seen.len() > ORDER_CAP {
                        return Err(Error::cap(format!("order of {name}"), ORDER_CAP));
                    }
                    queue.push_back(y);
                }
            }
        }
        let mut elems: Vec<T> = seen.into_iter().collect();
        let e = elems
            .iter()
            .position(|x| mul(x, x) == *x)
            .ok_or_else(|| Error::Internal("closure has no identity".into()))?;
        let id = elems.remove(e);
        elems.insert(0, id);
        let index: HashMap<&T, usize> = elems.iter().enumerate().map(|(i, x)| (x, i)).collect();
        let table: Vec<Vec<usize>> = elems.iter().map(|a| elems.iter().map(|b| index[&mul(a, b)]).collect()).collect();
        let gen_idx = gens.iter().map(|g| index[g]).collect();
        TableGroup::from_table(name, table, gen_idx)
    }

    /// Checks the group axioms (associativity exhaustively up to order 64).
    pub fn from_table(name: &str, table: Vec<Vec<usize>>, gens: Vec<usize>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::Precondition(format!("{name}: malformed table")));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::Precondition(format!("{name}: no identity")))?;
        let mut inverse = vec![0; n];
        for x in 0..n {
            inverse[x] = (0..n)
                .find(|&y| table[x][y] == identity)
                .ok_or_else(|| Error::Precondition(format!("{name}: element {x} has no inverse")))?;
        }
        let assoc = |a: usize, b: usize, c: usize| table[table[a][b]][c] == table[a][table[b][c]];
        let ok = if n <= ORDER_CAP {
            (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| assoc(a, b, c))))
        } else {
            (0..n).step_by(7).all(|a| (0..n).step_by(5).all(|b| (0..n).step_by(3).all(|c| assoc(a, b, c))))
        };
        if !ok {
            return Err(Error::Precondition(format!("{name}: not associative")));
        }
        Ok(TableGroup { name: name.to_string(), table, identity, inverse, gens })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        TableGroup::generate(&format!("C{n}"), &[1 % n], |a, b| (a + b) % n)
    }

    /// Dihedral group of the given order (symmetries of an `order/2`-gon).
    pub fn dihedral(order: usize) -> Result<Self> {
        let m = order / 2;
        if !order.is_multiple_of(2) || m < 2 {
            return Err(Error::Precondition("dihedral order must be even and at least 4".into()));
        }
        let r: Vec<usize> = (0..m).map(|i| (i + 1) % m).collect();
        let s: Vec<usize> = (0..m).map(|i| (m - i) % m).collect();
        TableGroup::generate(&format!("D{order}"), &[r, s], |a, b| compose(a, b))
    }

    pub fn quaternion() -> Result<Self> {
        TableGroup::generate("Q8", &[(false, 1u8), (false, 2u8)], quaternion_mul)
    }

    pub fn symmetric3() -> Result<Self> {
        TableGroup::generate("S3", &[vec![1, 2, 0], vec![1, 0, 2]], |a, b| compose(a, b))
    }

    pub fn elementary_abelian(p: usize, k: usize) -> Result<Self> {
        let gens: Vec<Vec<usize>> = (0..k).map(|i| (0..k).map(|j| (i == j) as usize).collect()).collect();
        TableGroup::generate(&format!("C{p}^{k}"), &gens, |a, b| a.iter().zip(b).map(|(x, y)| (x + y) % p).collect())
    }

    pub fn direct(a: &TableGroup, b: &TableGroup) -> Result<Self> {
        let gens: Vec<(usize, usize)> =
            a.gens.iter().map(|&g| (g, b.identity)).chain(b.gens.iter().map(|&h| (a.identity, h))).collect();
        TableGroup::generate(&format!("{}x{}", a.name, b.name), &gens, |x, y| (a.mul(x.0, y.0), b.mul(x.1, y.1)))
    }

    /// `C<n>`, `D<order>`, `Q8`, `S3`, `C<p>^<k>`, and `A x B` products.
    pub fn by_name(name: &str) -> Result<Self> {
        let bad = || Error::Precondition(format!("unknown group {name:?}"));
        if let Some((a, b)) = name.split_once('x') {
            return TableGroup::direct(&TableGroup::by_name(a)?, &TableGroup::by_name(b)?);
        }
        match name {
            "Q8" => return TableGroup::quaternion(),
            "S3" => return TableGroup::symmetric3(),
            _ => {}
        }
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
        if let Some(rest) = name.strip_prefix('C') {
            return match rest.split_once('^') {
                Some((p, k)) => TableGroup::elementary_abelian(num(p)?, num(k)?),
                None => TableGroup::cyclic(num(rest)?),
            };
        }
        if let Some(rest) = name.strip_prefix('D') {
            return TableGroup::dihedral(num(rest)?);
        }
        Err(bad())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn gens(&self) -> &[usize] {
        &self.gens
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    /// `a⁻¹ b⁻¹ a b`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn elem_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { members: vec![true; self.order()] }
    }

    pub fn trivial(&self) -> Subgroup {
        self.generated(std::iter::empty())
    }

    /// Subgroup generated by the given elements (orbit closure).
    pub fn generated(&self, gens: impl IntoIterator<Item = usize>) -> Subgroup {
        let gens: Vec<usize> = gens.into_iter().collect();
        let mut members = vec![false; self.order()];
        members[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.mul(x, g);
                if !members[y] {
                    members[y] = true;
                    queue.push_back(y);
                }
            }
        }
        Subgroup { members }
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        h.elements().iter().all(|&x| (0..self.order()).all(|g| h.contains(self.mul(self.mul(self.inv(g), x), g))))
    }

    /// `[K, H]^p`: generated by all `[k, h]` and all `h^p`.
    pub fn p_bracket(&self, k: &Subgroup, h: &Subgroup, p: usize) -> Subgroup {
        let (ke, he) = (k.elements(), h.elements());
        let comms = ke.iter().flat_map(|&a| he.iter().map(move |&b| (a, b))).map(|(a, b)| self.commutator(a, b));
        let powers = he.iter().map(|&b| self.pow(b, p));
        self.generated(comms.chain(powers).collect::<Vec<_>>())
    }

    /// `x ∈ y·H`.
    fn same_coset(&self, x: usize, y: usize, h: &Subgroup) -> bool {
        h.contains(self.mul(self.inv(y), x))
    }

    /// Greedy small generating set.
    fn small_generating_set(&self) -> Vec<usize> {
        let mut by_order: Vec<usize> = (0..self.order()).collect();
        by_order.sort_by_key(|&a| std::cmp::Reverse(self.elem_order(a)));
        let mut gens = Vec::new();
        let mut sub = self.trivial();
        for a in by_order {
            if sub.order() == self.order() {
                break;
            }
            if !sub.contains(a) {
                gens.push(a);
                sub = self.generated(gens.clone());
            }
        }
        gens
    }
}

/// Lower p-central series `λ1 = G, λ_{n+1} = [G, λ_n]^p`, listed until it
/// stabilizes (the stable term appears once).
#[derive(Clone, Debug)]
pub struct SeriesChain {
    pub terms: Vec<Subgroup>,
}

impl SeriesChain {
    /// `λ_n` (1-based); indices past the end give the stable term.
    pub fn term(&self, n: usize) -> &Subgroup {
        &self.terms[(n.max(1) - 1).min(self.terms.len() - 1)]
    }

    pub fn orders(&self) -> Vec<usize> {
        self.terms.iter().map(Subgroup::order).collect()
    }

    pub fn reaches_trivial(&self) -> bool {
        self.terms.last().is_some_and(|t| t.order() == 1)
    }
}

pub fn lower_p_series(g: &TableGroup, p: usize) -> SeriesChain {
    let whole = g.whole();
    let mut terms = vec![whole.clone()];
    loop {
        let next = g.p_bracket(&whole, terms.last().expect("nonempty"), p);
        if &next == terms.last().expect("nonempty") {
            return SeriesChain { terms };
        }
        terms.push(next);
    }
}

/// Series sanity: each term normal, contained in the previous one, and of
/// p-power index.
pub fn check_series(g: &TableGroup, p: usize, chain: &SeriesChain) -> bool {
    let p_power = |mut n: usize| {
        while n.is_multiple_of(p) {
            n /= p;
        }
        n == 1
    };
    chain.terms.iter().all(|t| g.is_normal(t) && p_power(g.order() / t.order()))
        && chain.terms.windows(2).all(|w| w[1].is_subset(&w[0]))
}

/// `[λ_m, λ_n] ⊆ λ_{m+n}` for all `m, n ≥ 1` with `m + n ≤ bound`.
pub fn check_lemma21(g: &TableGroup, p: usize, bound: usize) -> bool {
    let chain = lower_p_series(g, p);
    (1..bound).all(|m| {
        (1..=bound - m).all(|n| {
            let target = chain.term(m + n);
            let (a, b) = (chain.term(m).elements(), chain.term(n).elements());
            a.iter().all(|&x| b.iter().all(|&y| target.contains(g.commutator(x, y))))
        })
    })
}

/// An automorphism as the image of each element.
pub type Automorphism = Vec<usize>;

/// All automorphisms, found by extending generator assignments.
pub fn aut_group(g: &TableGroup, cap: usize) -> Result<Vec<Automorphism>> {
    if g.order() > cap {
        return Err(Error::cap(format!("automorphism search on {}", g.name), cap));
    }
    let gens = g.small_generating_set();
    let n = g.order();
    let candidates: Vec<Vec<usize>> =
        gens.iter().map(|&s| (0..n).filter(|&t| g.elem_order(t) == g.elem_order(s)).collect()).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let imgs: Vec<usize> = choice.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
        if let Some(a) = extend(g, &gens, &imgs) {
            out.push(a);
        }
        // odometer
        let mut k = 0;
        loop {
            if k == gens.len() {
                out.sort();
                return Ok(out);
            }
            choice[k] += 1;
            if choice[k] < candidates[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// The map `gens[i] ↦ imgs[i]` extended multiplicatively, if it is a
/// well-defined bijective homomorphism.
fn extend(g: &TableGroup, gens: &[usize], imgs: &[usize]) -> Option<Automorphism> {
    let n = g.order();
    let mut map = vec![usize::MAX; n];
    map[g.identity] = g.identity;
    let mut queue = VecDeque::from([g.identity]);
    while let Some(x) = queue.pop_front() {
        for (&s, &t) in gens.iter().zip(imgs) {
            let y = g.mul(x, s);
            let fy = g.mul(map[x], t);
            if map[y] == usize::MAX {
                map[y] = fy;
                queue.push_back(y);
            } else if map[y] != fy {
                return None;
            }
        }
    }
    let distinct: BTreeSet<usize> = map.iter().copied().collect();
    if distinct.len() != n {
        return None;
    }
    let hom = (0..n).all(|a| (0..n).all(|b| map[g.mul(a, b)] == g.mul(map[a], map[b])));
    hom.then_some(map)
}

pub fn inner_automorphisms(g: &TableGroup) -> Vec<Automorphism> {
    let n = g.order();
    let set: BTreeSet<Automorphism> = (0..n).map(|c| (0..n).map(|x| g.mul(g.mul(c, x), g.inv(c))).collect()).collect();
    set.into_iter().collect()
}

/// Automorphisms with `g⁻¹ α(g) ∈ H` for every `g`.
fn acting_trivially_mod(g: &TableGroup, auts: &[Automorphism], h: &Subgroup) -> Vec<Automorphism> {
    auts.iter().filter(|a| (0..g.order()).all(|x| g.same_coset(a[x], x, h))).cloned().collect()
}

/// `I_p(G)`: automorphisms acting trivially on `G/λ2 = H1(G, F_p)`.
pub fn ip_kernel(g: &TableGroup, p: usize, auts: &[Automorphism]) -> Vec<Automorphism> {
    acting_trivially_mod(g, auts, lower_p_series(g, p).term(2))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnReport {
    /// `|A_n|` for `n = 1..=depth+1`.
    pub orders: Vec<usize>,
    /// `A_n` acts trivially on `λ_k / λ_{n+k}`.
    pub claim1: bool,
    /// `u_α` is well defined on `G/λ2`.
    pub claim3: bool,
    /// `u_{α2 α1} = u_{α2} · u_{α1}`.
    pub claim4_hom: bool,
    /// `Ker u = A_{n+1}`.
    pub claim4_kernel: bool,
}

impl AnReport {
    pub fn all_pass(&self) -> bool {
        self.claim1 && self.claim3 && self.claim4_hom && self.claim4_kernel
    }
}

/// `A_n = Ker(Aut G → Aut(G/λ_{n+1}))` and the map
/// `u: A_n → Hom(G/λ2, λ_{n+1}/λ_{n+2})`, `α ↦ ([g] ↦ [g⁻¹ α(g)])`.
pub fn an_filtration_checks(g: &TableGroup, p: usize, depth: usize) -> Result<AnReport> {
    let auts = aut_group(g, AUT_CAP)?;
    let chain = lower_p_series(g, p);
    let a: Vec<Vec<Automorphism>> =
        (1..=depth + 1).map(|n| acting_trivially_mod(g, &auts, chain.term(n + 1))).collect();
    let n_el = g.order();
    let u = |al: &Automorphism, x: usize| g.mul(g.inv(x), al[x]);
    let mut claim1 = true;
    let mut claim3 = true;
    let mut claim4_hom = true;
    let mut claim4_kernel = true;
    for n in 1..=depth {
        let an = &a[n - 1];
        for k in 1..=depth {
            let (lk, lnk) = (chain.term(k), chain.term(n + k));
            claim1 &= an.iter().all(|al| lk.elements().iter().all(|&x| lnk.contains(u(al, x))));
        }
        let (l2, ln1, ln2) = (chain.term(2), chain.term(n + 1), chain.term(n + 2));
        for al in an {
            for x in 0..n_el {
                claim3 &= ln1.contains(u(al, x));
                for y in l2.elements().iter().map(|&c| g.mul(x, c)) {
                    claim3 &= g.same_coset(u(al, x), u(al, y), ln2);
                }
            }
        }
        for a2 in an {
            for a1 in an {
                let comp: Automorphism = (0..n_el).map(|x| a2[a1[x]]).collect();
                claim4_hom &= (0..n_el).all(|x| g.same_coset(u(&comp, x), g.mul(u(a2, x), u(a1, x)), ln2));
            }
        }
        let kernel: Vec<Automorphism> =
            an.iter().filter(|al| (0..n_el).all(|x| ln2.contains(u(al, x)))).cloned().collect();
        claim4_kernel &= kernel == a[n];
    }
    Ok(AnReport { orders: a.iter().map(Vec::len).collect(), claim1, claim3, claim4_hom, claim4_kernel })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BnReport {
    /// `|B_n|` for `n = 1..=depth`.
    pub orders: Vec<usize>,
    pub inn_contained: bool,
    pub inn_order: usize,
    /// `|⋂ B_n|` over `n ≤ depth`.
    pub intersection_order: usize,
    /// Elements of the intersection that are not inner.
    pub outer_in_intersection: usize,
}

/// `B_n`: elements of `I_p(G)` preserving every conjugacy class of
/// `G/λ_{n+1}`.
pub fn bn_filtration_checks(g: &TableGroup, p: usize, depth: usize) -> Result<BnReport> {
    let auts = aut_group(g, AUT_CAP)?;
    let ip = ip_kernel(g, p, &auts);
    let inn = inner_automorphisms(g);
    let chain = lower_p_series(g, p);
    let n_el = g.order();
    let class_preserving = |al: &Automorphism, h: &Subgroup| {
        (0..n_el).all(|x| (0..n_el).any(|c| g.same_coset(g.mul(g.mul(g.inv(c), al[x]), c), x, h)))
    };
    let b: Vec<Vec<Automorphism>> = (1..=depth)
        .map(|n| ip.iter().filter(|al| class_preserving(al, chain.term(n + 1))).cloned().collect())
        .collect();
    let inn_contained = b.iter().all(|bn| inn.iter().all(|i| bn.contains(i)));
    let inter: Vec<&Automorphism> = ip.iter().filter(|al| b.iter().all(|bn| bn.contains(al))).collect();
    let outer = inter.iter().filter(|al| !inn.contains(al)).count();
    Ok(BnReport {
        orders: b.iter().map(Vec::len).collect(),
        inn_contained,
        inn_order: inn.len(),
        intersection_order: inter.len(),
        outer_in_intersection: outer,
    })
}

/// The commutator induces a well-defined, bilinear bracket
/// `λ_i/λ_{i+1} × λ_j/λ_{j+1} → λ_{i+j}/λ_{i+j+1}`.
pub fn graded_bracket_check(g: &TableGroup, p: usize) -> bool {
    let chain = lower_p_series(g, p);
    let len = chain.terms.len();
    for i in 1..=len {
        for j in 1..=len {
            if i + j > len + 1 {
                continue;
            }
            let (li, lj) = (chain.term(i).elements(), chain.term(j).elements());
            let (li1, lj1, out) = (chain.term(i + 1), chain.term(j + 1), chain.term(i + j + 1));
            for &a in &li {
                for &b in &lj {
                    let c = g.commutator(a, b);
                    if !chain.term(i + j).contains(c) {
                        return false;
                    }
                    // independence of representatives
                    for a2 in li1.elements().iter().map(|&k| g.mul(a, k)) {
                        for b2 in lj1.elements().iter().map(|&k| g.mul(b, k)) {
                            if !g.same_coset(g.commutator(a2, b2), c, out) {
                                return false;
                            }
                        }
                    }
                    // additivity in the first slot
                    for &a2 in &li {
                        let lhs = g.commutator(g.mul(a, a2), b);
                        if !g.same_coset(lhs, g.mul(c, g.commutator(a2, b)), out) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors() {
        assert_eq!(TableGroup::dihedral(8).unwrap().order(), 8);
        assert_eq!(TableGroup::quaternion().unwrap().order(), 8);
        assert_eq!(TableGroup::symmetric3().unwrap().order(), 6);
        assert_eq!(TableGroup::by_name("C2^3").unwrap().order(), 8);
        assert_eq!(TableGroup::by_name("C2xC4").unwrap().order(), 8);
        assert!(!TableGroup::quaternion().unwrap().is_abelian());
        assert!(TableGroup::by_name("Z9").is_err());
        assert!(TableGroup::cyclic(65).unwrap_err().is_cap());
    }

    #[test]
    fn series_examples() {
        let c4 = TableGroup::cyclic(4).unwrap();
        assert_eq!(lower_p_series(&c4, 2).orders(), vec![4, 2, 1]);
        let d8 = TableGroup::dihedral(8).unwrap();
        assert_eq!(lower_p_series(&d8, 2).orders(), vec![8, 2, 1]);
        let s3 = TableGroup::symmetric3().unwrap();
        let chain = lower_p_series(&s3, 2);
        assert_eq!(chain.orders(), vec![6, 3]);
        assert!(!chain.reaches_trivial());
        assert!(check_series(&s3, 2, &chain));
    }

    #[test]
    fn automorphisms() {
        let v4 = TableGroup::by_name("C2^2").unwrap();
        let auts = aut_group(&v4, AUT_CAP).unwrap();
        assert_eq!(auts.len(), 6);
        assert_eq!(ip_kernel(&v4, 2, &auts).len(), 1);
        let c4 = TableGroup::cyclic(4).unwrap();
        let auts = aut_group(&c4, AUT_CAP).unwrap();
        assert_eq!(auts.len(), 2);
        assert_eq!(ip_kernel(&c4, 2, &auts).len(), 2);
        let d8 = TableGroup::dihedral(8).unwrap();
        assert_eq!(aut_group(&d8, AUT_CAP).unwrap().len(), 8);
        assert_eq!(inner_automorphisms(&d8).len(), 4);
    }

    #[test]
    fn claims() {
        for name in ["D8", "Q8", "C4", "C2^2"] {
            let g = TableGroup::by_name(name).unwrap();
            assert!(check_lemma21(&g, 2, 4), "{name}");
            assert!(an_filtration_checks(&g, 2, 3).unwrap().all_pass(), "{name}");
            assert!(bn_filtration_checks(&g, 2, 3).unwrap().inn_contained, "{name}");
            assert!(graded_bracket_check(&g, 2), "{name}");
        }
    }
}
