//! Finitely generated groups with word-length metrics.
//!
//! Three families are built in: free groups on `r` letters, free abelian
//! groups `Z^k`, and finite groups given by a multiplication table. Products
//! of two groups carry the length `l(g, h) = l(g) + l(h)`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde_json::Value;

use crate::error::{Error, Result};

/// Default upper bound on the number of elements a ball may contain.
pub const DEFAULT_BALL_CAP: usize = 1_000_000;

/// A group element. Free-group words are reduced and use letters `±(i + 1)`
/// for generator `i` and its inverse.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupElement {
    Word(Vec<i32>),
    Vector(Vec<i64>),
    Index(usize),
    Pair(Box<GroupElement>, Box<GroupElement>),
}

impl GroupElement {
    pub fn pair(a: GroupElement, b: GroupElement) -> Self {
        GroupElement::Pair(Box::new(a), Box::new(b))
    }
}

/// A finite group given by its Cayley table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    generators: Vec<usize>,
    lengths: Vec<usize>,
}

impl FiniteGroup {
    /// Validates the table and computes word lengths for the given generators
    /// (default: every non-identity element). The generator list is
    /// symmetrised.
    pub fn new(name: impl Into<String>, table: Vec<Vec<usize>>, generators: Option<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        let bad = |msg: String| Error::GroupSpec(msg);
        if n == 0 {
            return Err(bad("empty multiplication table".into()));
        }
        for row in &table {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(bad("multiplication table must be square with entries < order".into()));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| bad("no identity element".into()))?;
        let mut inverses = vec![usize::MAX; n];
        for x in 0..n {
            inverses[x] = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| bad(format!("element {x} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(bad(format!("associativity fails at ({a},{b},{c})")));
                    }
                }
            }
        }
        let mut gens: BTreeSet<usize> = match generators {
            Some(g) => {
                if g.iter().any(|&x| x >= n) {
                    return Err(bad("generator index out of range".into()));
                }
                g.into_iter().collect()
            }
            None => (0..n).collect(),
        };
        gens.remove(&identity);
        let extra: Vec<usize> = gens.iter().map(|&g| inverses[g]).collect();
        gens.extend(extra);
        let generators: Vec<usize> = gens.into_iter().collect();

        let mut lengths = vec![usize::MAX; n];
        lengths[identity] = 0;
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for &s in &generators {
                let y = table[x][s];
                if lengths[y] == usize::MAX {
                    lengths[y] = lengths[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        if lengths.contains(&usize::MAX) {
            return Err(bad("generators do not generate the group".into()));
        }
        Ok(FiniteGroup { name: name.into(), table, identity, inverses, generators, lengths })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::GroupSpec("cyclic group of order 0".into()));
        }
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Self::new(format!("cyclic:{n}"), table, None)
    }

    /// Symmetric group on `n` letters; elements are permutations in
    /// lexicographic order, so index 0 is the identity. `(στ)(x) = σ(τ(x))`.
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 || n > 6 {
            return Err(Error::GroupSpec(format!("sym:{n} unsupported (1 ≤ n ≤ 6)")));
        }
        let perms = permutations(n);
        let index = |p: &Vec<usize>| perms.binary_search(p).expect("permutation");
        let table = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|t| index(&(0..n).map(|x| s[t[x]]).collect()))
                    .collect()
            })
            .collect();
        Self::new(format!("sym:{n}"), table, None)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn length(&self, a: usize) -> usize {
        self.lengths[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// Number of conjugacy classes, by direct orbit enumeration.
    pub fn conjugacy_class_count(&self) -> usize {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut classes = 0;
        for x in 0..n {
            if seen[x] {
                continue;
            }
            classes += 1;
            for g in 0..n {
                seen[self.mul(self.mul(g, x), self.inverse(g))] = true;
            }
        }
        classes
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for x in 0..n {
            if !prefix.contains(&x) {
                prefix.push(x);
                go(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupKind {
    Free { rank: usize },
    FreeAbelian { rank: usize },
    Finite(Arc<FiniteGroup>),
    Product(Box<GroupDescriptor>, Box<GroupDescriptor>),
}

/// A finitely generated group together with its symmetric generating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupDescriptor {
    kind: GroupKind,
    spec: String,
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec)
    }
}

impl GroupDescriptor {
    pub fn free(rank: usize) -> Self {
        assert!((1..=26).contains(&rank), "free rank must be in 1..=26");
        GroupDescriptor { kind: GroupKind::Free { rank }, spec: format!("free:{rank}") }
    }

    pub fn free_abelian(rank: usize) -> Self {
        assert!(rank >= 1, "free abelian rank must be positive");
        GroupDescriptor { kind: GroupKind::FreeAbelian { rank }, spec: format!("zn:{rank}") }
    }

    pub fn finite(group: FiniteGroup) -> Self {
        let spec = group.name.clone();
        GroupDescriptor { kind: GroupKind::Finite(Arc::new(group)), spec }
    }

    pub fn product(a: GroupDescriptor, b: GroupDescriptor) -> Self {
        let spec = format!("{a} x {b}");
        GroupDescriptor { kind: GroupKind::Product(Box::new(a), Box::new(b)), spec }
    }

    /// Parses `free:r`, `zn:k`, `sym:n`, `cyclic:n` or `finite:<path>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = || Error::GroupSpec(spec.to_string());
        let (kind, arg) = spec.trim().split_once(':').ok_or_else(bad)?;
        let int = || arg.trim().parse::<usize>().map_err(|_| bad());
        match kind.trim() {
            "free" => {
                let r = int()?;
                if !(1..=26).contains(&r) {
                    return Err(bad());
                }
                Ok(Self::free(r))
            }
            "zn" => {
                let k = int()?;
                if k == 0 {
                    return Err(bad());
                }
                Ok(Self::free_abelian(k))
            }
            "sym" => Ok(Self::finite(FiniteGroup::symmetric(int()?)?)),
            "cyclic" => Ok(Self::finite(FiniteGroup::cyclic(int()?)?)),
            "finite" => Self::from_table_file(Path::new(arg.trim())),
            _ => Err(bad()),
        }
    }

    /// Reads a multiplication table stored as a JSON array of arrays of indices.
    pub fn from_table_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let table: Vec<Vec<usize>> = serde_json::from_str(&text)?;
        Ok(Self::finite(FiniteGroup::new(format!("finite:{}", path.display()), table, None)?))
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn as_finite(&self) -> Option<&FiniteGroup> {
        match &self.kind {
            GroupKind::Finite(g) => Some(g),
            _ => None,
        }
    }

    pub fn identity(&self) -> GroupElement {
        match &self.kind {
            GroupKind::Free { .. } => GroupElement::Word(Vec::new()),
            GroupKind::FreeAbelian { rank } => GroupElement::Vector(vec![0; *rank]),
            GroupKind::Finite(g) => GroupElement::Index(g.identity()),
            GroupKind::Product(a, b) => GroupElement::pair(a.identity(), b.identity()),
        }
    }

    /// Whether `g` is a valid (canonical) element of this group.
    pub fn contains(&self, g: &GroupElement) -> bool {
        match (&self.kind, g) {
            (GroupKind::Free { rank }, GroupElement::Word(w)) => {
                let r = *rank as i32;
                w.iter().all(|&x| x != 0 && x.abs() <= r) && w.windows(2).all(|p| p[0] != -p[1])
            }
            (GroupKind::FreeAbelian { rank }, GroupElement::Vector(v)) => v.len() == *rank,
            (GroupKind::Finite(f), GroupElement::Index(i)) => *i < f.order(),
            (GroupKind::Product(a, b), GroupElement::Pair(x, y)) => a.contains(x) && b.contains(y),
            _ => false,
        }
    }

    pub fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::ElementMismatch { element: format!("{g:?}"), group: self.spec.clone() })
        }
    }

    /// Group product for elements already known to be valid.
    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        match (&self.kind, a, b) {
            (GroupKind::Free { .. }, GroupElement::Word(x), GroupElement::Word(y)) => {
                let mut out = x.clone();
                for &letter in y {
                    if out.last() == Some(&-letter) {
                        out.pop();
                    } else {
                        out.push(letter);
                    }
                }
                GroupElement::Word(out)
            }
            (GroupKind::FreeAbelian { .. }, GroupElement::Vector(x), GroupElement::Vector(y)) => {
                GroupElement::Vector(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            (GroupKind::Finite(f), GroupElement::Index(x), GroupElement::Index(y)) => GroupElement::Index(f.mul(*x, *y)),
            (GroupKind::Product(ga, gb), GroupElement::Pair(x1, y1), GroupElement::Pair(x2, y2)) => {
                GroupElement::pair(ga.mul(x1, x2), gb.mul(y1, y2))
            }
            _ => panic!("element/group mismatch in {}", self.spec),
        }
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    pub fn inverse(&self, a: &GroupElement) -> GroupElement {
        match (&self.kind, a) {
            (GroupKind::Free { .. }, GroupElement::Word(x)) => GroupElement::Word(x.iter().rev().map(|l| -l).collect()),
            (GroupKind::FreeAbelian { .. }, GroupElement::Vector(x)) => GroupElement::Vector(x.iter().map(|v| -v).collect()),
            (GroupKind::Finite(f), GroupElement::Index(x)) => GroupElement::Index(f.inverse(*x)),
            (GroupKind::Product(ga, gb), GroupElement::Pair(x, y)) => GroupElement::pair(ga.inverse(x), gb.inverse(y)),
            _ => panic!("element/group mismatch in {}", self.spec),
        }
    }

    /// Word length for an element already known to be valid.
    pub fn length(&self, g: &GroupElement) -> usize {
        match (&self.kind, g) {
            (GroupKind::Free { .. }, GroupElement::Word(w)) => w.len(),
            (GroupKind::FreeAbelian { .. }, GroupElement::Vector(v)) => v.iter().map(|x| x.unsigned_abs() as usize).sum(),
            (GroupKind::Finite(f), GroupElement::Index(i)) => f.length(*i),
            (GroupKind::Product(a, b), GroupElement::Pair(x, y)) => a.length(x) + b.length(y),
            _ => panic!("element/group mismatch in {}", self.spec),
        }
    }

    /// Word metric `d(a, b) = l(a⁻¹b)`.
    pub fn distance(&self, a: &GroupElement, b: &GroupElement) -> usize {
        self.length(&self.mul(&self.inverse(a), b))
    }

    /// The symmetric generating set `S = S⁻¹`.
    pub fn generators(&self) -> Vec<GroupElement> {
        match &self.kind {
            GroupKind::Free { rank } => {
                let r = *rank as i32;
                (1..=r).flat_map(|i| [GroupElement::Word(vec![i]), GroupElement::Word(vec![-i])]).collect()
            }
            GroupKind::FreeAbelian { rank } => (0..*rank)
                .flat_map(|i| {
                    let mut p = vec![0; *rank];
                    p[i] = 1;
                    let mut m = vec![0; *rank];
                    m[i] = -1;
                    [GroupElement::Vector(p), GroupElement::Vector(m)]
                })
                .collect(),
            GroupKind::Finite(f) => f.generators().iter().map(|&i| GroupElement::Index(i)).collect(),
            GroupKind::Product(a, b) => {
                let (ea, eb) = (a.identity(), b.identity());
                a.generators()
                    .into_iter()
                    .map(|s| GroupElement::pair(s, eb.clone()))
                    .chain(b.generators().into_iter().map(|s| GroupElement::pair(ea.clone(), s)))
                    .collect()
            }
        }
    }

    /// Exact size of the ball of the given radius, when cheaply computable.
    fn ball_size(&self, radius: usize) -> Option<u128> {
        match &self.kind {
            GroupKind::Free { rank } => {
                let k = 2 * *rank as u128;
                let mut total: u128 = 1;
                let mut sphere: u128 = k;
                for _ in 0..radius {
                    total = total.checked_add(sphere)?;
                    sphere = sphere.checked_mul(k - 1)?;
                }
                Some(total)
            }
            GroupKind::FreeAbelian { rank } => {
                // |{v ∈ Z^k : |v|_1 ≤ r}| = Σ_i 2^i C(k,i) C(r,i)
                let (k, r) = (*rank as u128, radius as u128);
                let mut total: u128 = 0;
                for i in 0..=k.min(r) {
                    total = total.checked_add((1u128 << i).checked_mul(binom(k, i)?)?.checked_mul(binom(r, i)?)?)?;
                }
                Some(total)
            }
            GroupKind::Finite(f) => Some(f.lengths.iter().filter(|&&l| l <= radius).count() as u128),
            GroupKind::Product(..) => None,
        }
    }

    /// All elements of word length at most `radius`, sorted canonically.
    pub fn ball(&self, radius: usize, cap: usize) -> Result<Vec<GroupElement>> {
        let capped = || Error::CapExceeded { what: format!("ball({radius}) of {}", self.spec), cap };
        if let Some(size) = self.ball_size(radius) {
            if size > cap as u128 {
                return Err(capped());
            }
        }
        let mut out = match &self.kind {
            GroupKind::Free { rank } => {
                let r = *rank as i32;
                let mut out = vec![Vec::new()];
                let mut frontier = vec![Vec::<i32>::new()];
                for _ in 0..radius {
                    let mut next = Vec::new();
                    for w in &frontier {
                        for letter in (1..=r).flat_map(|i| [i, -i]) {
                            if w.last() != Some(&-letter) {
                                let mut v = w.clone();
                                v.push(letter);
                                next.push(v);
                            }
                        }
                    }
                    out.extend(next.iter().cloned());
                    frontier = next;
                }
                out.into_iter().map(GroupElement::Word).collect()
            }
            GroupKind::FreeAbelian { rank } => {
                let mut out = Vec::new();
                let mut current = Vec::with_capacity(*rank);
                lattice_ball(*rank, radius as i64, &mut current, &mut out);
                out.into_iter().map(GroupElement::Vector).collect()
            }
            GroupKind::Finite(f) => (0..f.order()).filter(|&i| f.length(i) <= radius).map(GroupElement::Index).collect(),
            GroupKind::Product(a, b) => {
                let left = a.ball(radius, cap)?;
                let mut out = Vec::new();
                for x in left {
                    let rest = radius - a.length(&x);
                    for y in b.ball(rest, cap)? {
                        out.push(GroupElement::pair(x.clone(), y));
                        if out.len() > cap {
                            return Err(capped());
                        }
                    }
                }
                out
            }
        };
        out.sort();
        Ok(out)
    }

    /// Renders an element in the CLI notation: letter words for free groups
    /// (`a`, `b`, …, uppercase for inverses, `e` for the identity), integer
    /// tuples otherwise.
    pub fn format(&self, g: &GroupElement) -> String {
        match g {
            GroupElement::Word(w) if w.is_empty() => "e".to_string(),
            GroupElement::Word(w) => w.iter().map(|&l| letter_char(l)).collect(),
            GroupElement::Vector(v) => format!("({})", v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")),
            GroupElement::Index(i) => format!("#{i}"),
            GroupElement::Pair(x, y) => match &self.kind {
                GroupKind::Product(a, b) => format!("[{}, {}]", a.format(x), b.format(y)),
                _ => format!("{g:?}"),
            },
        }
    }

    /// Parses a free-group word such as `abA`; the result is freely reduced.
    pub fn parse_word(&self, s: &str) -> Result<GroupElement> {
        let GroupKind::Free { rank } = self.kind else {
            return Err(Error::Parse(format!("word {s:?} given for non-free group {}", self.spec)));
        };
        let s = s.trim();
        if s.is_empty() || s == "e" {
            return Ok(self.identity());
        }
        let mut letters = Vec::new();
        for c in s.chars() {
            let l = char_letter(c).filter(|l| l.unsigned_abs() as usize <= rank);
            letters.push(l.ok_or_else(|| Error::Parse(format!("bad letter {c:?} in word {s:?}")))?);
        }
        Ok(self.mul(&self.identity(), &GroupElement::Word(letters)))
    }

    /// Decodes an element from its JSON form (word string, integer array,
    /// index, or a two-element array for products).
    pub fn element_from_json(&self, v: &Value) -> Result<GroupElement> {
        let bad = || Error::Parse(format!("cannot read {v} as an element of {}", self.spec));
        let g = match (&self.kind, v) {
            (GroupKind::Free { .. }, Value::String(s)) => self.parse_word(s)?,
            (GroupKind::Free { .. }, Value::Array(xs)) => {
                let letters: Option<Vec<i32>> = xs.iter().map(|x| x.as_i64().map(|x| x as i32)).collect();
                let w = GroupElement::Word(letters.ok_or_else(bad)?);
                if !self.contains(&w) {
                    return Err(bad());
                }
                w
            }
            (GroupKind::FreeAbelian { .. }, Value::Array(xs)) => {
                let coords: Option<Vec<i64>> = xs.iter().map(Value::as_i64).collect();
                GroupElement::Vector(coords.ok_or_else(bad)?)
            }
            (GroupKind::Finite(_), Value::Number(n)) => GroupElement::Index(n.as_u64().ok_or_else(bad)? as usize),
            (GroupKind::Finite(_), Value::Array(xs)) if xs.len() == 1 => {
                GroupElement::Index(xs[0].as_u64().ok_or_else(bad)? as usize)
            }
            (GroupKind::Product(a, b), Value::Array(xs)) if xs.len() == 2 => {
                GroupElement::pair(a.element_from_json(&xs[0])?, b.element_from_json(&xs[1])?)
            }
            _ => return Err(bad()),
        };
        self.check(&g)?;
        Ok(g)
    }

    pub fn element_to_json(&self, g: &GroupElement) -> Value {
        match (&self.kind, g) {
            (GroupKind::Free { .. }, _) => Value::String(self.format(g)),
            (_, GroupElement::Vector(v)) => Value::from(v.clone()),
            (_, GroupElement::Index(i)) => Value::from(*i),
            (GroupKind::Product(a, b), GroupElement::Pair(x, y)) => {
                Value::Array(vec![a.element_to_json(x), b.element_to_json(y)])
            }
            _ => Value::String(format!("{g:?}")),
        }
    }
}

fn binom(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

fn lattice_ball(rank: usize, budget: i64, current: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if current.len() == rank {
        out.push(current.clone());
        return;
    }
    for x in -budget..=budget {
        current.push(x);
        lattice_ball(rank, budget - x.abs(), current, out);
        current.pop();
    }
}

fn letter_char(l: i32) -> char {
    let base = if l > 0 { b'a' } else { b'A' };
    (base + (l.unsigned_abs() as u8 - 1)) as char
}

fn char_letter(c: char) -> Option<i32> {
    match c {
        'a'..='z' => Some(c as i32 - 'a' as i32 + 1),
        'A'..='Z' => Some(-(c as i32 - 'A' as i32 + 1)),
        _ => None,
    }
}

/// Word length with validation.
pub fn word_length(desc: &GroupDescriptor, g: &GroupElement) -> Result<usize> {
    desc.check(g)?;
    Ok(desc.length(g))
}

/// Closed ball `{g : l(g) ≤ radius}`.
pub fn ball(desc: &GroupDescriptor, radius: usize, cap: usize) -> Result<Vec<GroupElement>> {
    desc.ball(radius, cap)
}

/// Word length by breadth-first search over the Cayley graph; used as an
/// oracle for the closed-form lengths above.
pub fn bfs_length(desc: &GroupDescriptor, target: &GroupElement, max_radius: usize) -> Option<usize> {
    let gens = desc.generators();
    let mut seen = std::collections::HashSet::new();
    let mut frontier = vec![desc.identity()];
    seen.insert(desc.identity());
    for r in 0..=max_radius {
        if frontier.contains(target) {
            return Some(r);
        }
        let mut next = Vec::new();
        for x in &frontier {
            for s in &gens {
                let y = desc.mul(x, s);
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free2() -> GroupDescriptor {
        GroupDescriptor::free(2)
    }

    #[test]
    fn word_length_examples() {
        let g = free2();
        let w = g.parse_word("abA").unwrap();
        assert_eq!(word_length(&g, &w).unwrap(), 3);
        let z = GroupDescriptor::free_abelian(2);
        let v = GroupElement::Vector(vec![2, -1]);
        assert_eq!(word_length(&z, &v).unwrap(), 3);
        assert_eq!(bfs_length(&z, &v, 5), Some(3));
        for d in [free2(), z, GroupDescriptor::parse("sym:3").unwrap()] {
            assert_eq!(word_length(&d, &d.identity()).unwrap(), 0);
        }
    }

    #[test]
    fn word_length_rejects_foreign_element() {
        let g = free2();
        assert!(word_length(&g, &GroupElement::Vector(vec![1])).is_err());
        assert!(word_length(&g, &GroupElement::Word(vec![1, -1])).is_err());
        assert!(word_length(&g, &GroupElement::Word(vec![3])).is_err());
    }

    #[test]
    fn ball_examples() {
        assert_eq!(free2().ball(1, DEFAULT_BALL_CAP).unwrap().len(), 5);
        assert_eq!(free2().ball(2, DEFAULT_BALL_CAP).unwrap().len(), 17);
        let z1 = GroupDescriptor::free_abelian(1);
        let b = z1.ball(2, DEFAULT_BALL_CAP).unwrap();
        assert_eq!(b, (-2..=2).map(|x| GroupElement::Vector(vec![x])).collect::<Vec<_>>());
    }

    #[test]
    fn ball_sizes_match_bfs() {
        for d in [free2(), GroupDescriptor::free_abelian(2), GroupDescriptor::free_abelian(3)] {
            for r in 0..4 {
                let ball = d.ball(r, DEFAULT_BALL_CAP).unwrap();
                let unique: BTreeSet<_> = ball.iter().cloned().collect();
                assert_eq!(unique.len(), ball.len());
                assert_eq!(Some(ball.len() as u128), d.ball_size(r));
                for g in &ball {
                    assert_eq!(bfs_length(&d, g, r), Some(d.length(g)));
                }
            }
        }
    }

    #[test]
    fn ball_cap_is_enforced() {
        match free2().ball(12, 1000) {
            Err(Error::CapExceeded { cap, .. }) => assert_eq!(cap, 1000),
            other => panic!("expected cap error, got {other:?}"),
        }
        let p = GroupDescriptor::product(free2(), free2());
        assert!(p.ball(4, 100).is_err());
    }

    #[test]
    fn finite_group_generated_and_classes() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.conjugacy_class_count(), 3);
        assert_eq!(FiniteGroup::cyclic(4).unwrap().conjugacy_class_count(), 4);
        let d = GroupDescriptor::finite(s3);
        assert_eq!(d.ball(1, DEFAULT_BALL_CAP).unwrap().len(), 6);
        // A custom generating set gives a nontrivial metric: two transpositions.
        let table = FiniteGroup::symmetric(3).unwrap().table().to_vec();
        let custom = FiniteGroup::new("s3-transpositions", table, Some(vec![1, 2])).unwrap();
        assert!((0..6).map(|i| custom.length(i)).max().unwrap() >= 2);
    }

    #[test]
    fn finite_group_rejects_bad_tables() {
        assert!(FiniteGroup::new("bad", vec![vec![0, 0], vec![0, 1]], None).is_err());
        assert!(FiniteGroup::new("bad", vec![vec![0, 1], vec![1]], None).is_err());
        let z4 = FiniteGroup::cyclic(4).unwrap().table().to_vec();
        assert!(FiniteGroup::new("sub", z4, Some(vec![2])).is_err());
    }

    #[test]
    fn group_axioms_on_balls() {
        let groups = [free2(), GroupDescriptor::free_abelian(2), GroupDescriptor::parse("sym:3").unwrap()];
        for d in &groups {
            let ball = d.ball(2, DEFAULT_BALL_CAP).unwrap();
            let e = d.identity();
            for a in &ball {
                assert_eq!(d.mul(a, &e), *a);
                assert_eq!(d.mul(&e, a), *a);
                assert_eq!(d.mul(a, &d.inverse(a)), e);
                for b in &ball {
                    for c in &ball {
                        assert_eq!(d.mul(&d.mul(a, b), c), d.mul(a, &d.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn length_is_a_length_function() {
        let groups = [free2(), GroupDescriptor::free_abelian(2), GroupDescriptor::parse("sym:3").unwrap()];
        for d in &groups {
            let ball = d.ball(3, DEFAULT_BALL_CAP).unwrap();
            for a in &ball {
                assert_eq!(d.length(a), d.length(&d.inverse(a)));
                for b in &ball {
                    assert!(d.length(&d.mul(a, b)) <= d.length(a) + d.length(b));
                }
            }
        }
    }

    #[test]
    fn spec_strings() {
        for s in ["free:2", "zn:2", "sym:3", "cyclic:4"] {
            assert_eq!(GroupDescriptor::parse(s).unwrap().spec(), s);
        }
        for s in ["free:0", "zn:x", "nope:3", "free"] {
            assert!(GroupDescriptor::parse(s).is_err(), "{s}");
        }
    }

    #[test]
    fn json_element_round_trip() {
        let groups = [
            free2(),
            GroupDescriptor::free_abelian(2),
            GroupDescriptor::parse("cyclic:4").unwrap(),
            GroupDescriptor::product(free2(), free2()),
        ];
        for d in &groups {
            for g in d.ball(2, DEFAULT_BALL_CAP).unwrap() {
                assert_eq!(d.element_from_json(&d.element_to_json(&g)).unwrap(), g);
            }
        }
        assert_eq!(free2().parse_word("aA").unwrap(), free2().identity());
    }

    #[test]
    fn table_file_parses() {
        let dir = std::env::temp_dir().join(format!("daggerhom-table-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("z3.json");
        std::fs::write(&path, "[[0,1,2],[1,2,0],[2,0,1]]").unwrap();
        let d = GroupDescriptor::parse(&format!("finite:{}", path.display())).unwrap();
        assert_eq!(d.as_finite().unwrap().order(), 3);
    }
}
