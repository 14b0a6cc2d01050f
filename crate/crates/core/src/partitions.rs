//! r-dimensional partitions and their monomial ideals.

use crate::groebner::MonomialIdeal;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("cell {0:?} has the wrong dimension")]
    Dimension(Vec<u32>),
    #[error("not downward closed: {0:?} is present but {1:?} is not")]
    NotClosed(Vec<u32>, Vec<u32>),
    #[error("ideal has infinite colength (no pure power of variable {0})")]
    InfiniteColength(usize),
    #[error("cannot parse partition: {0}")]
    Parse(String),
}

/// A finite downward-closed subset of `Z_{>=0}^r`, cells sorted lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Partition {
    dim: usize,
    cells: Vec<Vec<u32>>,
}

impl Partition {
    pub fn new(dim: usize, cells: impl IntoIterator<Item = Vec<u32>>) -> Result<Self, PartitionError> {
        let set: BTreeSet<Vec<u32>> = cells.into_iter().collect();
        for c in &set {
            if c.len() != dim {
                return Err(PartitionError::Dimension(c.clone()));
            }
            for b in 0..dim {
                if c[b] > 0 {
                    let mut d = c.clone();
                    d[b] -= 1;
                    if !set.contains(&d) {
                        return Err(PartitionError::NotClosed(c.clone(), d));
                    }
                }
            }
        }
        Ok(Partition { dim, cells: set.into_iter().collect() })
    }

    pub fn empty(dim: usize) -> Self {
        Partition { dim, cells: vec![] }
    }

    /// `{a : a_1 + ... + a_r <= n - 1}`.
    pub fn pyramid(dim: usize, n: u32) -> Self {
        let mut cells = Vec::new();
        let mut cur = vec![0u32; dim];
        loop {
            if cur.iter().sum::<u32>() < n {
                cells.push(cur.clone());
            }
            // odometer over the box [0, n)^dim
            let mut k = 0;
            loop {
                if k == dim {
                    return Partition::new(dim, cells).unwrap();
                }
                cur[k] += 1;
                if cur[k] < n {
                    break;
                }
                cur[k] = 0;
                k += 1;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn size(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[Vec<u32>] {
        &self.cells
    }

    pub fn contains(&self, c: &[u32]) -> bool {
        self.cells.binary_search_by(|x| x.as_slice().cmp(c)).is_ok()
    }

    pub fn index_of(&self, c: &[u32]) -> Option<usize> {
        self.cells.binary_search_by(|x| x.as_slice().cmp(c)).ok()
    }

    /// Points outside the partition with some `p - e_b` inside.
    pub fn glove(&self) -> Vec<Vec<u32>> {
        if self.cells.is_empty() {
            return vec![];
        }
        let mut out = BTreeSet::new();
        for c in &self.cells {
            for b in 0..self.dim {
                let mut p = c.clone();
                p[b] += 1;
                if !self.contains(&p) {
                    out.insert(p);
                }
            }
        }
        out.into_iter().collect()
    }

    /// Minimal elements of the glove; they are the exponents of the minimal
    /// generators of the ideal.
    pub fn min_glove(&self) -> Vec<Vec<u32>> {
        if self.cells.is_empty() {
            return vec![vec![0; self.dim]];
        }
        self.glove()
            .into_iter()
            .filter(|p| (0..self.dim).all(|b| p[b] == 0 || { let mut q = p.clone(); q[b] -= 1; self.contains(&q) }))
            .collect()
    }

    pub fn ideal(&self) -> MonomialIdeal {
        MonomialIdeal::new(self.dim, self.min_glove())
    }

    pub fn from_ideal(i: &MonomialIdeal) -> Result<Partition, PartitionError> {
        let n = i.nvars();
        let mut bound = vec![0u32; n];
        for (v, b) in bound.iter_mut().enumerate() {
            let k = i
                .gens()
                .iter()
                .filter(|g| g.iter().enumerate().all(|(j, &e)| j == v || e == 0))
                .map(|g| g[v])
                .min()
                .ok_or(PartitionError::InfiniteColength(v))?;
            *b = k;
        }
        let mut cells = Vec::new();
        let mut cur = vec![0u32; n];
        if bound.contains(&0) {
            return Ok(Partition::empty(n));
        }
        loop {
            if !i.contains(&cur) {
                cells.push(cur.clone());
            }
            let mut k = 0;
            loop {
                if k == n {
                    return Partition::new(n, cells);
                }
                cur[k] += 1;
                if cur[k] < bound[k] {
                    break;
                }
                cur[k] = 0;
                k += 1;
            }
        }
    }

    /// Image under the coordinate permutation sending axis `i` to `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Partition {
        let cells = self.cells.iter().map(|c| permute_point(c, perm));
        Partition::new(self.dim, cells).expect("permutation keeps closure")
    }

    /// Lexicographically smallest coordinate permutation image, and the
    /// permutation that produces it (first one found in lexicographic order
    /// of permutations).
    pub fn canonicalize(&self) -> (Partition, Vec<usize>) {
        let mut best: Option<(Partition, Vec<usize>)> = None;
        for perm in permutations(self.dim) {
            let q = self.permute(&perm);
            if best.as_ref().is_none_or(|(b, _)| q.cells < b.cells) {
                best = Some((q, perm));
            }
        }
        best.unwrap()
    }

    /// Borel test: some variable order makes the ideal strongly stable.
    /// Returns the order (most to least dominant variable) on success.
    pub fn is_borel(&self) -> Option<Vec<usize>> {
        let ideal = self.ideal();
        let maxdeg = ideal.gens().iter().map(|g| g.iter().sum::<u32>()).max().unwrap_or(0);
        // monomials of the ideal up to the max generator degree
        let mut mons: Vec<Vec<u32>> = Vec::new();
        for_each_monomial(self.dim, maxdeg, &mut |m| {
            if ideal.contains(m) {
                mons.push(m.to_vec());
            }
        });
        'orders: for order in permutations(self.dim) {
            for m in &mons {
                for (pos_j, &j) in order.iter().enumerate() {
                    if m[j] == 0 {
                        continue;
                    }
                    for &i in &order[..pos_j] {
                        let mut n = m.clone();
                        n[j] -= 1;
                        n[i] += 1;
                        if !ideal.contains(&n) {
                            continue 'orders;
                        }
                    }
                }
            }
            return Some(order);
        }
        None
    }

    /// Layers by last coordinate, each as row lengths of a 2D partition.
    /// Returns layers from the bottom (`x_3 = 0`) up. Only for `dim == 3`.
    pub fn layers(&self) -> Vec<Vec<u32>> {
        assert_eq!(self.dim, 3);
        let mut out: Vec<Vec<u32>> = Vec::new();
        for c in &self.cells {
            let (a, b, z) = (c[0], c[1] as usize, c[2] as usize);
            while out.len() <= z {
                out.push(vec![]);
            }
            let layer = &mut out[z];
            while layer.len() <= b {
                layer.push(0);
            }
            layer[b] = layer[b].max(a + 1);
        }
        out
    }

    /// Compact chain such as `(1) ⊂ (3,2)`, top layer first.
    pub fn chain_notation(&self) -> String {
        if self.dim != 3 {
            return format!("{:?}", self.cells);
        }
        if self.cells.is_empty() {
            return "()".into();
        }
        self.layers()
            .iter()
            .rev()
            .map(|l| format!("({})", l.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect::<Vec<_>>()
            .join(" ⊂ ")
    }

    /// Parses the chain notation; `⊂` and `<` are both accepted.
    pub fn parse_chain(s: &str) -> Result<Partition, PartitionError> {
        let bad = || PartitionError::Parse(s.to_string());
        let norm = s.replace('⊂', "<");
        let mut layers: Vec<Vec<u32>> = Vec::new();
        for part in norm.split('<') {
            let t = part.trim();
            let inner = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')).ok_or_else(bad)?;
            if inner.trim().is_empty() {
                layers.push(vec![]);
                continue;
            }
            let rows: Vec<u32> = inner.split(',').map(|x| x.trim().parse::<u32>().map_err(|_| bad())).collect::<Result<_, _>>()?;
            layers.push(rows);
        }
        layers.reverse();
        let mut cells = Vec::new();
        for (z, rows) in layers.iter().enumerate() {
            for (b, &len) in rows.iter().enumerate() {
                for a in 0..len {
                    cells.push(vec![a, b as u32, z as u32]);
                }
            }
        }
        Partition::new(3, cells)
    }

    /// Cell list JSON `[[i,j,k],...]` or the chain notation.
    pub fn parse_spec(s: &str) -> Result<Partition, PartitionError> {
        let t = s.trim();
        if t.starts_with("[[") || t == "[]" {
            let cells: Vec<Vec<u32>> = serde_json::from_str(t).map_err(|e| PartitionError::Parse(e.to_string()))?;
            let dim = cells.first().map_or(3, |c| c.len());
            return Partition::new(dim, cells);
        }
        if t.starts_with('{') {
            let j: PartitionJson = serde_json::from_str(t).map_err(|e| PartitionError::Parse(e.to_string()))?;
            return Partition::new(j.dim, j.cells);
        }
        if let Some(name) = t.strip_prefix("lambda_").or_else(|| t.strip_prefix("λ_")) {
            return named(name).ok_or_else(|| PartitionError::Parse(s.to_string()));
        }
        if let Some(n) = t.strip_prefix("pyr").and_then(|x| x.trim().parse::<u32>().ok()) {
            return Ok(Partition::pyramid(3, n));
        }
        Partition::parse_chain(t)
    }

    pub fn to_json(&self) -> PartitionJson {
        PartitionJson { dim: self.dim, cells: self.cells.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionJson {
    pub dim: usize,
    pub cells: Vec<Vec<u32>>,
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.chain_notation())
    }
}

pub fn permute_point(c: &[u32], perm: &[usize]) -> Vec<u32> {
    let mut d = vec![0; c.len()];
    for (i, &x) in c.iter().enumerate() {
        d[perm[i]] = x;
    }
    d
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn for_each_monomial(n: usize, maxdeg: u32, f: &mut dyn FnMut(&[u32])) {
    fn rec(cur: &mut Vec<u32>, k: usize, left: u32, f: &mut dyn FnMut(&[u32])) {
        if k == cur.len() {
            f(cur);
            return;
        }
        for e in 0..=left {
            cur[k] = e;
            rec(cur, k + 1, left - e, f);
        }
        cur[k] = 0;
    }
    rec(&mut vec![0; n], 0, maxdeg, f);
}

/// Unordered pairs `{i, j}` of the point list whose difference is some
/// `e_b` or `e_a - e_b`. Pairs are returned as `(i, j)` with `p_i - p_j` of
/// that form.
pub fn adjacent_pairs(points: &[Vec<u32>]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for x in 0..points.len() {
        for y in 0..points.len() {
            if x == y {
                continue;
            }
            let d: Vec<i64> = points[x].iter().zip(&points[y]).map(|(a, b)| *a as i64 - *b as i64).collect();
            let plus = d.iter().filter(|&&v| v == 1).count();
            let minus = d.iter().filter(|&&v| v == -1).count();
            let zeros = d.iter().filter(|&&v| v == 0).count();
            let unit = plus == 1 && zeros == d.len() - 1;
            let root = plus == 1 && minus == 1 && zeros == d.len() - 2;
            // each unordered pair once: unit differences oriented, roots with x < y
            if unit || (root && x < y) {
                out.push((x, y));
            }
        }
    }
    out
}

/// All partitions of size `n` in `Z_{>=0}^r`, sorted.
///
/// A partition of dimension `r` is a weakly decreasing chain of
/// `(r-1)`-dimensional partitions (its layers by the last coordinate).
pub fn enumerate_partitions(r: usize, n: usize) -> Vec<Partition> {
    assert!(r >= 1);
    let mut memo: HashMap<(usize, usize), Vec<Partition>> = HashMap::new();
    let mut out = enum_rec(r, n, &mut memo);
    out.sort();
    out
}

fn enum_rec(r: usize, n: usize, memo: &mut HashMap<(usize, usize), Vec<Partition>>) -> Vec<Partition> {
    if let Some(v) = memo.get(&(r, n)) {
        return v.clone();
    }
    let out = if n == 0 {
        vec![Partition::empty(r)]
    } else if r == 1 {
        vec![Partition::new(1, (0..n as u32).map(|i| vec![i])).unwrap()]
    } else {
        let mut chains: Vec<Vec<Partition>> = Vec::new();
        chain_rec(r - 1, n, None, &mut Vec::new(), &mut chains, memo);
        chains
            .into_iter()
            .map(|layers| {
                let cells = layers.iter().enumerate().flat_map(|(z, l)| {
                    l.cells().iter().map(move |c| {
                        let mut v = c.clone();
                        v.push(z as u32);
                        v
                    })
                });
                Partition::new(r, cells.collect::<Vec<_>>()).unwrap()
            })
            .collect()
    };
    memo.insert((r, n), out.clone());
    out
}

fn chain_rec(
    r: usize,
    left: usize,
    bound: Option<&Partition>,
    cur: &mut Vec<Partition>,
    out: &mut Vec<Vec<Partition>>,
    memo: &mut HashMap<(usize, usize), Vec<Partition>>,
) {
    if left == 0 {
        out.push(cur.clone());
        return;
    }
    let maxk = bound.map_or(left, |b| b.size().min(left));
    for k in 1..=maxk {
        for q in enum_rec(r, k, memo) {
            if bound.is_some_and(|b| !q.cells().iter().all(|c| b.contains(c))) {
                continue;
            }
            cur.push(q.clone());
            chain_rec(r, left - k, Some(&q), cur, out, memo);
            cur.pop();
        }
    }
}

/// Independent enumeration: add one addable cell at a time, deduplicating.
pub fn enumerate_partitions_oracle(r: usize, n: usize) -> Vec<Partition> {
    let mut level: BTreeSet<Vec<Vec<u32>>> = BTreeSet::new();
    level.insert(vec![]);
    for _ in 0..n {
        let mut next = BTreeSet::new();
        for cells in &level {
            let set: BTreeSet<&Vec<u32>> = cells.iter().collect();
            let mut cands: BTreeSet<Vec<u32>> = BTreeSet::new();
            if cells.is_empty() {
                cands.insert(vec![0; r]);
            }
            for c in cells {
                for b in 0..r {
                    let mut p = c.clone();
                    p[b] += 1;
                    cands.insert(p);
                }
            }
            for p in cands {
                if set.contains(&p) {
                    continue;
                }
                let addable = (0..r).all(|b| {
                    p[b] == 0 || {
                        let mut q = p.clone();
                        q[b] -= 1;
                        set.contains(&q)
                    }
                });
                if addable {
                    let mut v = cells.clone();
                    v.push(p);
                    v.sort();
                    next.insert(v);
                }
            }
        }
        level = next;
    }
    level.into_iter().map(|c| Partition::new(r, c).unwrap()).collect()
}

/// Partitions referred to by name, e.g. `"131"` or `"1321"`.
pub fn named(name: &str) -> Option<Partition> {
    let chain = match name {
        "0" | "1" => "(1)",
        "121" => "(1) < (2,1)",
        "131" => "(1) < (3,1)",
        "132" => "(1) < (3,2)",
        "1311" => "(1) < (3,1,1)",
        "1321" => "(1) < (3,2,1)",
        "141" => "(1) < (4,1)",
        "151" => "(1) < (5,1)",
        "142" => "(1) < (4,2)",
        "232" => "(2) < (3,2)",
        "1411" => "(1) < (4,1,1)",
        "2311" => "(2) < (3,1,1)",
        "11311" => "(1) < (1) < (3,1,1)",
        _ => return None,
    };
    Partition::parse_chain(chain).ok()
}

/// Classical partition numbers `p(0..=n)` by Euler's pentagonal recurrence.
pub fn partition_numbers(n: usize) -> Vec<u64> {
    let mut p = vec![0u64; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut acc: i64 = 0;
        let mut k = 1i64;
        loop {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > m {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc += sign * p[m - g1] as i64;
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= m {
                acc += sign * p[m - g2] as i64;
            }
            k += 1;
        }
        p[m] = acc as u64;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn counts() {
        let c: Vec<usize> = (1..=6).map(|n| enumerate_partitions(3, n).len()).collect();
        assert_eq!(c, vec![1, 3, 6, 13, 24, 48]);
        assert_eq!(enumerate_partitions(2, 4).len(), 5);
        assert_eq!(enumerate_partitions(3, 0), vec![Partition::empty(3)]);
        for n in 0..=6 {
            assert_eq!(enumerate_partitions(3, n), enumerate_partitions_oracle(3, n));
        }
        let p = partition_numbers(20);
        for (n, &pn) in p.iter().enumerate().take(21) {
            assert_eq!(enumerate_partitions(2, n).len() as u64, pn);
        }
    }

    #[test]
    fn gloves() {
        let one = Partition::pyramid(3, 1);
        assert_eq!(one.glove(), vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
        let pyr = Partition::pyramid(3, 2);
        assert!(pyr.glove().iter().all(|g| g.iter().sum::<u32>() == 2));
        assert_eq!(pyr.glove().len(), 6);
        let l132 = named("132").unwrap();
        let mut mins = l132.min_glove();
        mins.sort();
        let mut want = vec![vec![3, 0, 0], vec![2, 1, 0], vec![1, 0, 1], vec![0, 2, 0], vec![0, 1, 1], vec![0, 0, 2]];
        want.sort();
        assert_eq!(mins, want);
        assert_eq!(named("131").unwrap().glove().len(), 8);
    }

    #[test]
    fn adjacency() {
        assert_eq!(adjacent_pairs(&[vec![1, 0, 0], vec![0, 1, 0]]).len(), 1);
        assert!(adjacent_pairs(&[vec![2, 0, 0], vec![0, 0, 2]]).is_empty());
        assert_eq!(adjacent_pairs(&Partition::pyramid(3, 1).glove()).len(), 3);
        // brute force over all differences
        let pts = named("1321").unwrap().glove();
        let mut brute = 0;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let d: Vec<i64> = pts[i].iter().zip(&pts[j]).map(|(a, b)| *a as i64 - *b as i64).collect();
                let l1: i64 = d.iter().map(|x| x.abs()).sum();
                let ok = (l1 == 1) || (l1 == 2 && d.iter().sum::<i64>() == 0 && d.iter().all(|x| x.abs() <= 1));
                brute += ok as usize;
            }
        }
        assert_eq!(adjacent_pairs(&pts).len(), brute);
    }

    #[test]
    fn borel_examples() {
        assert!(named("132").unwrap().is_borel().is_some());
        assert!(named("1311").unwrap().is_borel().is_none());
        assert!(Partition::pyramid(3, 1).is_borel().is_some());
        let i = named("132").unwrap().ideal();
        let want = MonomialIdeal::new(3, vec![vec![3, 0, 0], vec![2, 1, 0], vec![1, 0, 1], vec![0, 2, 0], vec![0, 1, 1], vec![0, 0, 2]]);
        assert_eq!(i, want);
        assert_eq!(Partition::pyramid(3, 1).ideal(), MonomialIdeal::new(3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]));
        let n1311 = named("1311").unwrap();
        assert!(Partition::from_ideal(&MonomialIdeal::new(
            3,
            vec![vec![3, 0, 0], vec![1, 1, 0], vec![1, 0, 1], vec![0, 3, 0], vec![0, 1, 1], vec![0, 0, 2]]
        ))
        .unwrap()
        .canonicalize()
        .0
            == n1311.canonicalize().0);
        // plenty of smooth points are not Borel in the strict sense
        let non_borel: BTreeSet<_> = enumerate_partitions(3, 6)
            .into_iter()
            .filter(|p| p.is_borel().is_none())
            .map(|p| p.canonicalize().0)
            .collect();
        assert!(non_borel.len() > 1);
        assert!(non_borel.contains(&n1311.canonicalize().0));
    }

    #[test]
    fn ideal_roundtrip() {
        for n in 0..=6 {
            for p in enumerate_partitions(3, n) {
                assert_eq!(Partition::from_ideal(&p.ideal()).unwrap(), p);
            }
        }
        let bad = MonomialIdeal::new(2, vec![vec![1, 1], vec![2, 0]]);
        assert_eq!(Partition::from_ideal(&bad), Err(PartitionError::InfiniteColength(1)));
    }

    #[test]
    fn chains() {
        let p = named("132").unwrap();
        assert_eq!(p.chain_notation(), "(1) ⊂ (3,2)");
        assert_eq!(p.size(), 6);
        assert_eq!(Partition::parse_spec("(1)<(3,2)").unwrap(), p);
        assert_eq!(Partition::parse_spec("[[0,0,0],[1,0,0]]").unwrap().size(), 2);
        assert_eq!(named("11311").unwrap().size(), 7);
        assert!(named("11311").unwrap().contains(&[0, 0, 2]));
        assert!(Partition::parse_chain("(1) < (2").is_err());
    }

    #[test]
    fn canonical_forms() {
        let pyr = Partition::pyramid(3, 2);
        assert_eq!(pyr.canonicalize(), (pyr.clone(), vec![0, 1, 2]));
        let a = named("131").unwrap();
        let b = a.permute(&[1, 0, 2]);
        assert_eq!(a.canonicalize().0, b.canonicalize().0);
        let (c, perm) = b.canonicalize();
        assert_eq!(b.permute(&perm), c);
        let parts = enumerate_partitions(3, 5);
        let mut orbits: HashMap<Partition, usize> = HashMap::new();
        for p in &parts {
            *orbits.entry(p.canonicalize().0).or_default() += 1;
        }
        assert_eq!(orbits.values().sum::<usize>(), 24);
        for (c, k) in &orbits {
            let orbit: BTreeSet<_> = permutations(3).iter().map(|s| c.permute(s)).collect();
            assert_eq!(orbit.len(), *k);
        }
    }

    proptest! {
        #[test]
        fn glove_invariants(n in 1usize..7, k in 0usize..48) {
            let parts = enumerate_partitions(3, n);
            let p = &parts[k % parts.len()];
            let g = p.glove();
            prop_assert!(g.len() >= 3);
            for x in &g {
                prop_assert!(!p.contains(x));
                let supported = (0..3).any(|b| x[b] > 0 && {
                    let mut q = x.clone();
                    q[b] -= 1;
                    p.contains(&q)
                });
                prop_assert!(supported);
            }
            prop_assert_eq!(Partition::parse_chain(&p.chain_notation()).unwrap(), p.clone());
        }
    }
}
