//! Finite groups as indexed element sets, with subgroup algorithms.
//!
//! Elements are `u32` indices, `0` is the identity. A group is built from
//! generators and a black-box multiplication by breadth-first search; products
//! are then computed from the right-multiplication tables along stored words,
//! or from a full Cayley table for small orders.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use crate::error::{Error, Result};

/// Largest order for which a full Cayley table is kept.
pub const TABLE_ORDER: usize = 1024;

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub name: String,
    /// Indices of the defining generators.
    pub generators: Vec<u32>,
    /// `right[k][g] = g · s_k`, where `s_k` runs over generators then their inverses.
    right: Vec<Vec<u32>>,
    inv_gen: Vec<usize>,
    /// Word in the `s_k` spelling each element from the identity.
    words: Vec<Vec<u8>>,
    inverses: Vec<u32>,
    table: Option<Vec<u32>>,
    labels: Vec<String>,
}

/// A finite group together with the concrete elements behind the indices.
#[derive(Clone, Debug)]
pub struct Enumerated<E> {
    pub group: FiniteGroup,
    pub elements: Vec<E>,
    pub index: HashMap<E, u32>,
}

impl<E: Clone + Eq + Hash> Enumerated<E> {
    pub fn index_of(&self, e: &E) -> Option<u32> {
        self.index.get(e).copied()
    }
}

impl FiniteGroup {
    /// Closes `gens` under `mul`. Fails with `TooLarge` past `limit` elements.
    pub fn generate<E, M, I>(
        name: &str,
        identity: E,
        gens: &[E],
        mul: M,
        inv: I,
        label: impl Fn(&E) -> String,
        limit: usize,
    ) -> Result<Enumerated<E>>
    where
        E: Clone + Eq + Hash,
        M: Fn(&E, &E) -> Result<E>,
        I: Fn(&E) -> Result<E>,
    {
        let mut letters: Vec<E> = gens.to_vec();
        for g in gens {
            letters.push(inv(g)?);
        }
        let k = gens.len();
        let inv_gen: Vec<usize> = (0..2 * k).map(|i| if i < k { i + k } else { i - k }).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<E, u32> = HashMap::from([(identity, 0)]);
        let mut words: Vec<Vec<u8>> = vec![vec![]];
        let mut right: Vec<Vec<u32>> = vec![Vec::new(); 2 * k];
        let mut queue = VecDeque::from([0u32]);
        while let Some(g) = queue.pop_front() {
            for (s, letter) in letters.iter().enumerate() {
                let h = mul(&elements[g as usize], letter)?;
                let idx = match index.get(&h) {
                    Some(&i) => i,
                    None => {
                        if elements.len() >= limit {
                            return Err(Error::TooLarge(format!("{name} has more than {limit} elements")));
                        }
                        let i = elements.len() as u32;
                        let mut w = words[g as usize].clone();
                        w.push(s as u8);
                        words.push(w);
                        index.insert(h.clone(), i);
                        elements.push(h);
                        queue.push_back(i);
                        i
                    }
                };
                let row = &mut right[s];
                if row.len() <= g as usize {
                    row.resize(g as usize + 1, u32::MAX);
                }
                row[g as usize] = idx;
            }
        }
        let n = elements.len();
        for row in right.iter_mut() {
            row.resize(n, u32::MAX);
        }
        let labels = elements.iter().map(label).collect();
        let generators = gens.iter().map(|g| index[g]).collect();
        let mut group = FiniteGroup {
            name: name.to_string(),
            generators,
            right,
            inv_gen,
            words,
            inverses: Vec::new(),
            table: None,
            labels,
        };
        group.inverses = (0..n as u32)
            .map(|g| {
                let w = &group.words[g as usize];
                w.iter().rev().fold(0u32, |acc, &s| group.right[group.inv_gen[s as usize]][acc as usize])
            })
            .collect();
        if n <= TABLE_ORDER {
            let mut table = vec![0u32; n * n];
            for a in 0..n as u32 {
                for b in 0..n as u32 {
                    table[a as usize * n + b as usize] = group.mul_walk(a, b);
                }
            }
            group.table = Some(table);
        }
        Ok(Enumerated { group, elements, index })
    }

    /// From a full multiplication table on `0..n` with identity `0`.
    pub fn from_table(name: &str, table: Vec<Vec<u32>>, labels: Vec<String>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter("table must be square and non-empty".into()));
        }
        let gens: Vec<u32> = (1..n as u32).collect();
        let en = Self::generate(
            name,
            0u32,
            &gens,
            |a, b| Ok(table[*a as usize][*b as usize]),
            |a| {
                (0..n as u32)
                    .find(|&b| table[*a as usize][b as usize] == 0)
                    .ok_or_else(|| Error::InvalidParameter("table has no inverses".into()))
            },
            |a| labels.get(*a as usize).cloned().unwrap_or_else(|| a.to_string()),
            n,
        )?;
        // Reindex so that the given numbering is kept.
        let mut out = en.group;
        let perm: Vec<u32> = (0..n as u32).map(|i| en.index[&i]).collect();
        let mut t = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                t[perm[a] as usize * n + perm[b] as usize] = perm[table[a][b] as usize];
            }
        }
        out.table = Some(t);
        Ok(out)
    }

    fn mul_walk(&self, a: u32, b: u32) -> u32 {
        self.words[b as usize].iter().fold(a, |acc, &s| self.right[s as usize][acc as usize])
    }

    pub fn order(&self) -> usize {
        self.words.len()
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.table {
            Some(t) => t[a as usize * self.order() + b as usize],
            None => self.mul_walk(a, b),
        }
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        let mut acc = 0;
        for _ in 0..k {
            acc = self.mul(acc, a);
        }
        acc
    }

    /// `[a, b] = a⁻¹b⁻¹ab`.
    pub fn commutator(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    /// Left-normed `[x₁, …, x_k]`; a single entry is itself.
    pub fn left_normed(&self, xs: &[u32]) -> u32 {
        match xs.split_first() {
            None => 0,
            Some((first, rest)) => rest.iter().fold(*first, |acc, &x| self.commutator(acc, x)),
        }
    }

    /// `a^b = b⁻¹ab`.
    pub fn conj(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(self.inv(b), a), b)
    }

    pub fn element_order(&self, a: u32) -> u64 {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn label(&self, a: u32) -> &str {
        &self.labels[a as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order() as u32
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_members(self, self.elements().collect(), self.generators.clone())
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup::from_members(self, vec![0], vec![])
    }

    /// `⟨gens⟩`.
    pub fn closure(&self, gens: &[u32]) -> Subgroup {
        let n = self.order();
        let mut mask = vec![false; n];
        mask[0] = true;
        let mut members = vec![0u32];
        let gens: Vec<u32> = gens.iter().copied().filter(|&g| g != 0).collect();
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for &g in &gens {
                let y = self.mul(x, g);
                if !mask[y as usize] {
                    mask[y as usize] = true;
                    members.push(y);
                }
            }
            i += 1;
        }
        Subgroup::from_parts(members, mask, gens)
    }

    /// Smallest subgroup containing `gens` that is normalised by `by`.
    fn closure_under_conjugation(&self, mut gens: Vec<u32>, by: &[u32]) -> Subgroup {
        let mut h = self.closure(&gens);
        loop {
            let mut added = false;
            for t in by {
                for g in gens.clone() {
                    let c = self.conj(g, *t);
                    if !h.contains(c) {
                        gens.push(c);
                        h = self.closure(&gens);
                        added = true;
                    }
                }
            }
            if !added {
                return h;
            }
        }
    }

    /// Normal closure `⟨set⟩^G`.
    pub fn normal_closure(&self, set: &[u32]) -> Subgroup {
        self.closure_under_conjugation(set.to_vec(), &self.generators)
    }

    /// Normal closure of `set` inside the subgroup `h`.
    pub fn normal_closure_in(&self, set: &[u32], h: &Subgroup) -> Subgroup {
        self.closure_under_conjugation(set.to_vec(), &h.generators)
    }

    /// `[H, K]`.
    pub fn commutator_subgroup(&self, h: &Subgroup, k: &Subgroup) -> Subgroup {
        let mut gens = Vec::new();
        for &a in &h.generators {
            for &b in &k.generators {
                let c = self.commutator(a, b);
                if c != 0 {
                    gens.push(c);
                }
            }
        }
        let by: Vec<u32> = h.generators.iter().chain(&k.generators).copied().collect();
        self.closure_under_conjugation(gens, &by)
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        let g = self.whole();
        self.commutator_subgroup(&g, &g)
    }

    /// A short generating set of `h`, chosen greedily in index order.
    pub fn small_generating_set(&self, h: &Subgroup) -> Vec<u32> {
        let mut gens: Vec<u32> = Vec::new();
        let mut cur = self.trivial();
        // prefer elements of large order
        let mut cands = h.elements.clone();
        cands.sort_by_key(|&x| (std::cmp::Reverse(self.element_order(x)), x));
        for x in cands {
            if cur.order() == h.order() {
                break;
            }
            if !cur.contains(x) {
                gens.push(x);
                cur = self.closure(&gens);
            }
        }
        gens
    }

    /// `γ₁(H) ⊇ γ₂(H) ⊇ …` until it stabilises; `γ_c` is the normal closure in
    /// `H` of the left-normed commutators of length `c` in a generating set.
    pub fn lower_central_series(&self, h: &Subgroup) -> Vec<Subgroup> {
        let gens = self.small_generating_set(h);
        let h = Subgroup { generators: gens.clone(), ..h.clone() };
        let mut series = vec![h.clone()];
        for c in 2.. {
            let mut words: Vec<u32> = Vec::new();
            let mut tuple = vec![0usize; c];
            if !gens.is_empty() {
                'outer: loop {
                    let xs: Vec<u32> = tuple.iter().map(|&i| gens[i]).collect();
                    let w = self.left_normed(&xs);
                    if w != 0 && !words.contains(&w) {
                        words.push(w);
                    }
                    for pos in 0..c {
                        tuple[pos] += 1;
                        if tuple[pos] < gens.len() {
                            continue 'outer;
                        }
                        tuple[pos] = 0;
                    }
                    break;
                }
            }
            let next = self.normal_closure_in(&words, &h);
            let prev = series.last().expect("non-empty");
            if next.order() == prev.order() {
                break;
            }
            let done = next.order() == 1;
            series.push(next);
            if done {
                break;
            }
        }
        series
    }

    /// Nilpotency class of `h` (0 for the trivial group), `None` if not nilpotent.
    pub fn nilpotency_class(&self, h: &Subgroup) -> Option<usize> {
        if h.order() == 1 {
            return Some(0);
        }
        let series = self.lower_central_series(h);
        (series.last().map(Subgroup::order) == Some(1)).then(|| series.len() - 1)
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        h.generators.iter().all(|&x| self.generators.iter().all(|&t| h.contains(self.conj(x, t))))
    }

    pub fn center(&self) -> Subgroup {
        let members: Vec<u32> = self
            .elements()
            .filter(|&x| self.generators.iter().all(|&g| self.mul(x, g) == self.mul(g, x)))
            .collect();
        let gens = members.clone();
        Subgroup::from_members(self, members, gens)
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<u32>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for x in self.elements() {
            if seen[x as usize] {
                continue;
            }
            seen[x as usize] = true;
            let mut class = vec![x];
            let mut i = 0;
            while i < class.len() {
                let y = class[i];
                for &t in &self.generators {
                    let z = self.conj(y, t);
                    if !seen[z as usize] {
                        seen[z as usize] = true;
                        class.push(z);
                    }
                }
                i += 1;
            }
            class.sort_unstable();
            classes.push(class);
        }
        classes
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .all(|&a| self.generators.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }
}

/// A subgroup as a sorted member list, a membership mask and generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub elements: Vec<u32>,
    mask: Vec<bool>,
    pub generators: Vec<u32>,
}

impl Subgroup {
    fn from_parts(mut members: Vec<u32>, mask: Vec<bool>, generators: Vec<u32>) -> Self {
        members.sort_unstable();
        Subgroup { elements: members, mask, generators }
    }

    /// From a member list already known to be a subgroup.
    pub fn from_members(g: &FiniteGroup, members: Vec<u32>, generators: Vec<u32>) -> Self {
        let mut mask = vec![false; g.order()];
        for &m in &members {
            mask[m as usize] = true;
        }
        Self::from_parts(members, mask, generators)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.mask[x as usize]
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }
}

/// Group generated by permutations of `0..degree`, given as image lists and
/// composed left to right: `(p·q)(i) = q(p(i))`.
pub fn perm_group(name: &str, degree: usize, gens: &[Vec<u8>]) -> FiniteGroup {
    let id: Vec<u8> = (0..degree as u8).collect();
    FiniteGroup::generate(
        name,
        id,
        gens,
        |p, q| Ok(p.iter().map(|&i| q[i as usize]).collect()),
        |p| {
            let mut inv = vec![0u8; p.len()];
            for (i, &j) in p.iter().enumerate() {
                inv[j as usize] = i as u8;
            }
            Ok(inv)
        },
        |p| format!("{p:?}"),
        usize::MAX,
    )
    .expect("permutation groups are finite")
    .group
}

fn cycle(degree: usize, shift: usize) -> Vec<u8> {
    (0..degree).map(|i| ((i + shift) % degree) as u8).collect()
}

fn reflection(degree: usize) -> Vec<u8> {
    (0..degree).map(|i| ((degree - i) % degree) as u8).collect()
}

pub fn cyclic(n: usize) -> FiniteGroup {
    if n == 1 {
        return FiniteGroup::from_table("C1", vec![vec![0]], vec!["e".into()]).expect("trivial group");
    }
    perm_group(&format!("C{n}"), n, &[cycle(n, 1)])
}

pub fn klein_four() -> FiniteGroup {
    perm_group("V4", 4, &[vec![1, 0, 3, 2], vec![2, 3, 0, 1]])
}

pub fn symmetric3() -> FiniteGroup {
    perm_group("S3", 3, &[vec![1, 0, 2], vec![1, 2, 0]])
}

/// Dihedral group of order `2n`.
pub fn dihedral(n: usize) -> FiniteGroup {
    perm_group(&format!("D{}", 2 * n), n, &[cycle(n, 1), reflection(n)])
}

pub fn alternating4() -> FiniteGroup {
    perm_group("A4", 4, &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]])
}

/// Quaternion group: `(sign, unit)` with units `1, i, j, k`.
pub fn quaternion8() -> FiniteGroup {
    fn mul(a: &(i8, u8), b: &(i8, u8)) -> Result<(i8, u8)> {
        // unit products: row × column over 1, i, j, k
        const T: [[(i8, u8); 4]; 4] = [
            [(1, 0), (1, 1), (1, 2), (1, 3)],
            [(1, 1), (-1, 0), (1, 3), (-1, 2)],
            [(1, 2), (-1, 3), (-1, 0), (1, 1)],
            [(1, 3), (1, 2), (-1, 1), (-1, 0)],
        ];
        let (s, u) = T[a.1 as usize][b.1 as usize];
        Ok((a.0 * b.0 * s, u))
    }
    let gens = [(1i8, 1u8), (1, 2)];
    FiniteGroup::generate(
        "Q8",
        (1, 0),
        &gens,
        mul,
        |a| Ok(if a.1 == 0 { *a } else { (-a.0, a.1) }),
        |a| format!("{}{}", if a.0 < 0 { "-" } else { "" }, ["1", "i", "j", "k"][a.1 as usize]),
        8,
    )
    .expect("Q8")
    .group
}

/// Direct product of two cyclic groups.
pub fn cyclic_product(m: usize, n: usize) -> FiniteGroup {
    let gens = [(1 % m, 0), (0, 1 % n)];
    FiniteGroup::generate(
        &format!("C{m}xC{n}"),
        (0usize, 0usize),
        &gens,
        |a, b| Ok(((a.0 + b.0) % m, (a.1 + b.1) % n)),
        |a| Ok(((m - a.0) % m, (n - a.1) % n)),
        |a| format!("({},{})", a.0, a.1),
        m * n,
    )
    .expect("finite")
    .group
}
