//! Perfect matchings of `K_2k`: enumeration, union shapes, set-wise
//! intersection tests, and the canonical intersecting families.

use crate::error::{Error, Result};
use crate::partition::{double_factorial, EvenPartition};
use crate::Int;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;

/// Full enumeration is guarded at k = 8 ((2*8-1)!! = 2,027,025 matchings);
/// larger k is allowed only for closed-form operations.
pub const MAX_ENUMERATION_K: usize = 8;

/// A perfect matching of `K_2k` in canonical form: pairs `(a, b)` with
/// `a < b`, sorted by first endpoint, 1-based vertices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PerfectMatching {
    edges: Vec<(u8, u8)>,
}

impl PerfectMatching {
    /// Builds from edges in any order/orientation, canonicalizing. Every
    /// vertex of `{1..2k}` must be covered exactly once.
    pub fn new(edges: Vec<(u8, u8)>) -> Result<Self> {
        let k = edges.len();
        let n = 2 * k;
        let mut seen = vec![false; n + 1];
        let mut canon: Vec<(u8, u8)> = Vec::with_capacity(k);
        for (a, b) in edges {
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            if a == 0 || b as usize > n || a == b {
                return Err(Error::InvalidPartition(format!(
                    "edge ({a},{b}) outside vertex set 1..{n}"
                )));
            }
            for v in [a, b] {
                if seen[v as usize] {
                    return Err(Error::InvalidPartition(format!("vertex {v} covered twice")));
                }
                seen[v as usize] = true;
            }
            canon.push((a, b));
        }
        canon.sort_unstable();
        Ok(PerfectMatching { edges: canon })
    }

    pub fn edges(&self) -> &[(u8, u8)] {
        &self.edges
    }

    pub fn k(&self) -> usize {
        self.edges.len()
    }

    /// Partner array, 0-based: `partner[v] = w` iff `{v+1, w+1}` is an edge.
    pub fn partner_array(&self) -> Vec<u8> {
        let mut p = vec![0u8; 2 * self.k()];
        for &(a, b) in &self.edges {
            p[(a - 1) as usize] = b - 1;
            p[(b - 1) as usize] = a - 1;
        }
        p
    }

    pub fn from_partner_array(p: &[u8]) -> Self {
        let mut edges = Vec::with_capacity(p.len() / 2);
        for v in 0..p.len() as u8 {
            let w = p[v as usize];
            if v < w {
                edges.push((v + 1, w + 1));
            }
        }
        PerfectMatching { edges }
    }

    pub fn contains_edge(&self, a: u8, b: u8) -> bool {
        let e = if a < b { (a, b) } else { (b, a) };
        self.edges.binary_search(&e).is_ok()
    }
}

impl fmt::Debug for PerfectMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (a, b)) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}{b}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for PerfectMatching {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[u8; 2]> = self.edges.iter().map(|&(a, b)| [a, b]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PerfectMatching {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[u8; 2]>::deserialize(d)?;
        PerfectMatching::new(pairs.into_iter().map(|[a, b]| (a, b)).collect())
            .map_err(serde::de::Error::custom)
    }
}

/// A deduplicated family of perfect matchings on the same `2k` vertices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatchingFamily {
    pub k: usize,
    pub members: Vec<PerfectMatching>,
}

impl MatchingFamily {
    pub fn new(k: usize, members: Vec<PerfectMatching>) -> Result<Self> {
        for m in &members {
            if m.k() != k {
                return Err(Error::VertexSetMismatch(2 * k, 2 * m.k()));
            }
        }
        let mut dedup = members;
        dedup.sort_unstable_by(|a, b| a.edges.cmp(&b.edges));
        dedup.dedup();
        Ok(MatchingFamily { k, members: dedup })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// The complete set of perfect matchings of `K_2k`, in the fixed enumeration
/// order that indexes every matrix row and column downstream: recursively
/// pair the smallest uncovered vertex with each larger partner in increasing
/// order.
pub struct MatchingSet {
    k: usize,
    /// Flattened partner arrays, `2k` bytes per matching.
    partners: Vec<u8>,
    index: HashMap<Vec<u8>, u32>,
}

impl MatchingSet {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.k
    }

    pub fn len(&self) -> usize {
        self.partners.len() / (2 * self.k)
    }

    pub fn is_empty(&self) -> bool {
        self.partners.is_empty()
    }

    /// Partner array of matching `i` in enumeration order.
    pub fn partner(&self, i: usize) -> &[u8] {
        let n = 2 * self.k;
        &self.partners[i * n..(i + 1) * n]
    }

    pub fn matching(&self, i: usize) -> PerfectMatching {
        PerfectMatching::from_partner_array(self.partner(i))
    }

    /// Enumeration index of a matching.
    pub fn index_of(&self, m: &PerfectMatching) -> Option<usize> {
        self.index.get(&m.partner_array()).map(|&i| i as usize)
    }

    pub fn iter_partners(&self) -> impl Iterator<Item = &[u8]> {
        let n = 2 * self.k;
        self.partners.chunks_exact(n)
    }
}

/// Enumerates all `(2k-1)!!` perfect matchings of `K_2k`.
pub fn enumerate_matchings(k: usize) -> Result<MatchingSet> {
    if k == 0 || k > MAX_ENUMERATION_K {
        return Err(Error::ResourceGuard(format!(
            "full enumeration supports 1 <= k <= {MAX_ENUMERATION_K}, got {k}"
        )));
    }
    let n = 2 * k;
    let mut partners = Vec::new();
    let mut cur = vec![u8::MAX; n];
    fn rec(cur: &mut Vec<u8>, out: &mut Vec<u8>) {
        let a = match cur.iter().position(|&x| x == u8::MAX) {
            None => {
                out.extend_from_slice(cur);
                return;
            }
            Some(a) => a,
        };
        for b in a + 1..cur.len() {
            if cur[b] == u8::MAX {
                cur[a] = b as u8;
                cur[b] = a as u8;
                rec(cur, out);
                cur[a] = u8::MAX;
                cur[b] = u8::MAX;
            }
        }
    }
    rec(&mut cur, &mut partners);
    let mut index = HashMap::with_capacity(partners.len() / n);
    for (i, chunk) in partners.chunks_exact(n).enumerate() {
        index.insert(chunk.to_vec(), i as u32);
    }
    debug_assert_eq!(
        Int::from(index.len()),
        double_factorial(2 * k as i64 - 1).unwrap()
    );
    Ok(MatchingSet { k, partners, index })
}

/// Cycle type of the union multigraph of two matchings given as partner
/// arrays: non-increasing even cycle lengths. Parallel edges count as a
/// 2-cycle. The hot path for all pair scans.
pub fn union_shape_partners(p: &[u8], q: &[u8]) -> EvenPartition {
    let shape = union_cycle_lengths(p, q);
    EvenPartition::new(shape.into_iter().map(|c| c as usize).collect()).expect("even cycles")
}

/// Raw cycle lengths (non-increasing) without constructing a partition.
#[inline]
pub fn union_cycle_lengths(p: &[u8], q: &[u8]) -> Vec<u8> {
    let n = p.len();
    debug_assert_eq!(n, q.len());
    let mut seen = 0u32;
    let mut parts: Vec<u8> = Vec::with_capacity(n / 2);
    for v in 0..n {
        if seen & (1 << v) != 0 {
            continue;
        }
        let mut len = 0u8;
        let mut x = v;
        loop {
            seen |= 1 << x;
            let y = p[x] as usize;
            seen |= 1 << y;
            len += 2;
            x = q[y] as usize;
            if x == v {
                break;
            }
        }
        parts.push(len);
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

/// Shape of the union of two perfect matchings; they must cover the same
/// vertex set.
pub fn union_shape(p: &PerfectMatching, q: &PerfectMatching) -> Result<EvenPartition> {
    if p.k() != q.k() {
        return Err(Error::VertexSetMismatch(2 * p.k(), 2 * q.k()));
    }
    Ok(union_shape_partners(&p.partner_array(), &q.partner_array()))
}

fn check_t(k: usize, t: usize) -> Result<()> {
    if t == 0 || t > k / 2 {
        return Err(Error::OutOfRange {
            what: "intersection parameter t",
            detail: format!("need 1 <= t <= floor(k/2) = {}, got {t}", k / 2),
        });
    }
    Ok(())
}

/// Set-wise t-intersection decided through the union shape: the shape must
/// contain a sub-multiset of parts summing to `2t`.
pub fn setwise_t_intersecting_by_shape(
    p: &PerfectMatching,
    q: &PerfectMatching,
    t: usize,
) -> Result<bool> {
    check_t(p.k(), t)?;
    Ok(union_shape(p, q)?.has_subpartition_sum(2 * t))
}

/// Set-wise t-intersection by definition: brute force over all `C(k,t)^2`
/// pairs of t-edge subsets, comparing covered vertex sets. Independent of the
/// shape criterion; used as its oracle.
pub fn setwise_t_intersecting_oracle(
    p: &PerfectMatching,
    q: &PerfectMatching,
    t: usize,
) -> Result<bool> {
    if p.k() != q.k() {
        return Err(Error::VertexSetMismatch(2 * p.k(), 2 * q.k()));
    }
    check_t(p.k(), t)?;
    let masks = |m: &PerfectMatching| -> Vec<u32> {
        let edge_masks: Vec<u32> = m
            .edges()
            .iter()
            .map(|&(a, b)| (1u32 << (a - 1)) | (1u32 << (b - 1)))
            .collect();
        let mut out = Vec::new();
        subset_masks(&edge_masks, t, 0, 0, &mut out);
        out
    };
    let mut pm = masks(p);
    let qm = masks(q);
    pm.sort_unstable();
    Ok(qm.iter().any(|m| pm.binary_search(m).is_ok()))
}

fn subset_masks(edges: &[u32], t: usize, start: usize, acc: u32, out: &mut Vec<u32>) {
    if t == 0 {
        out.push(acc);
        return;
    }
    for i in start..=edges.len().saturating_sub(t) {
        subset_masks(edges, t - 1, i + 1, acc | edges[i], out);
    }
}

/// The canonical set-wise t-intersecting family: all matchings whose
/// restriction to `{1..2t}` consists of `t` full edges. Size
/// `(2t-1)!! (2k-2t-1)!!`.
pub fn canonical_family(k: usize, t: usize) -> Result<MatchingFamily> {
    check_t(k, t)?;
    if k > MAX_ENUMERATION_K {
        return Err(Error::ResourceGuard(format!(
            "canonical family construction guarded at k <= {MAX_ENUMERATION_K}"
        )));
    }
    let inner = matchings_of_vertices(&(1..=2 * t as u8).collect::<Vec<_>>());
    let outer = matchings_of_vertices(&(2 * t as u8 + 1..=2 * k as u8).collect::<Vec<_>>());
    let mut members = Vec::with_capacity(inner.len() * outer.len().max(1));
    for a in &inner {
        if outer.is_empty() {
            members.push(PerfectMatching::new(a.clone())?);
            continue;
        }
        for b in &outer {
            let mut edges = a.clone();
            edges.extend_from_slice(b);
            members.push(PerfectMatching::new(edges)?);
        }
    }
    MatchingFamily::new(k, members)
}

fn matchings_of_vertices(vs: &[u8]) -> Vec<Vec<(u8, u8)>> {
    if vs.is_empty() {
        return vec![];
    }
    let mut out = Vec::new();
    fn rec(rem: &[u8], acc: &mut Vec<(u8, u8)>, out: &mut Vec<Vec<(u8, u8)>>) {
        if rem.is_empty() {
            out.push(acc.clone());
            return;
        }
        let a = rem[0];
        for i in 1..rem.len() {
            let b = rem[i];
            let rest: Vec<u8> = rem[1..]
                .iter()
                .copied()
                .filter(|&x| x != b)
                .collect();
            acc.push((a, b));
            rec(&rest, acc, out);
            acc.pop();
        }
    }
    rec(vs, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(edges: &[(u8, u8)]) -> PerfectMatching {
        PerfectMatching::new(edges.to_vec()).unwrap()
    }

    #[test]
    fn enumeration_counts_and_uniqueness() {
        for k in 1..=5 {
            let set = enumerate_matchings(k).unwrap();
            let expected = double_factorial(2 * k as i64 - 1).unwrap();
            assert_eq!(Int::from(set.len()), expected, "k={k}");
            // index map was built from distinct keys, so len equality implies
            // no duplicates
            assert_eq!(set.index.len(), set.len());
        }
        assert!(enumerate_matchings(0).is_err());
        assert!(enumerate_matchings(9).is_err());
    }

    #[test]
    fn enumeration_order_k2() {
        let set = enumerate_matchings(2).unwrap();
        let ms: Vec<PerfectMatching> = (0..set.len()).map(|i| set.matching(i)).collect();
        assert_eq!(ms[0], pm(&[(1, 2), (3, 4)]));
        assert_eq!(ms[1], pm(&[(1, 3), (2, 4)]));
        assert_eq!(ms[2], pm(&[(1, 4), (2, 3)]));
    }

    #[test]
    fn k1_single_matching() {
        let set = enumerate_matchings(1).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.matching(0), pm(&[(1, 2)]));
    }

    #[test]
    fn union_shape_examples() {
        let p = pm(&[(1, 2), (3, 4), (5, 6), (7, 8)]);
        assert_eq!(union_shape(&p, &p).unwrap().parts(), &[2, 2, 2, 2]);

        let a = pm(&[(1, 2), (3, 4)]);
        let b = pm(&[(1, 3), (2, 4)]);
        assert_eq!(union_shape(&a, &b).unwrap().parts(), &[4]);

        let q = pm(&[(1, 3), (2, 4), (5, 7), (6, 8)]);
        assert_eq!(union_shape(&p, &q).unwrap().parts(), &[4, 4]);

        let r = pm(&[(1, 3), (2, 4), (5, 6), (7, 8)]);
        assert_eq!(union_shape(&p, &r).unwrap().parts(), &[4, 2, 2]);

        assert!(union_shape(&a, &p).is_err());
    }

    #[test]
    fn union_shape_symmetry_and_common_edges_exhaustive_k4() {
        let set = enumerate_matchings(4).unwrap();
        for i in 0..set.len() {
            for j in i..set.len() {
                let s1 = union_cycle_lengths(set.partner(i), set.partner(j));
                let s2 = union_cycle_lengths(set.partner(j), set.partner(i));
                assert_eq!(s1, s2);
                let common = set
                    .matching(i)
                    .edges()
                    .iter()
                    .filter(|&&(a, b)| set.matching(j).contains_edge(a, b))
                    .count();
                let twos = s1.iter().filter(|&&c| c == 2).count();
                assert_eq!(common, twos);
            }
        }
    }

    #[test]
    fn setwise_examples() {
        let p = pm(&[(1, 2), (3, 4), (5, 6), (7, 8)]);
        let q1 = pm(&[(1, 3), (2, 4), (5, 6), (7, 8)]); // shape [4,2,2]
        let q2 = pm(&[(1, 3), (2, 4), (5, 7), (6, 8)]); // shape [4,4]
        assert!(setwise_t_intersecting_by_shape(&p, &q1, 2).unwrap());
        assert!(setwise_t_intersecting_by_shape(&p, &q2, 2).unwrap());
        assert!(setwise_t_intersecting_oracle(&p, &q2, 2).unwrap());
        // single 8-cycle: 1-2-3-4-5-6-7-8
        let q3 = pm(&[(2, 3), (4, 5), (6, 7), (8, 1)]);
        assert_eq!(union_shape(&p, &q3).unwrap().parts(), &[8]);
        assert!(!setwise_t_intersecting_by_shape(&p, &q3, 2).unwrap());
        assert!(!setwise_t_intersecting_oracle(&p, &q3, 2).unwrap());
        assert!(setwise_t_intersecting_oracle(&p, &p, 2).unwrap());
        assert!(setwise_t_intersecting_by_shape(&p, &q1, 3).is_err());
    }

    #[test]
    fn shape_criterion_equals_oracle_exhaustive_k4_t2() {
        let set = enumerate_matchings(4).unwrap();
        let ms: Vec<PerfectMatching> = (0..set.len()).map(|i| set.matching(i)).collect();
        for a in &ms {
            for b in &ms {
                assert_eq!(
                    setwise_t_intersecting_by_shape(a, b, 2).unwrap(),
                    setwise_t_intersecting_oracle(a, b, 2).unwrap(),
                    "{a:?} {b:?}"
                );
            }
        }
    }

    #[test]
    fn t_intersecting_implies_setwise_k4_t2() {
        let set = enumerate_matchings(4).unwrap();
        let ms: Vec<PerfectMatching> = (0..set.len()).map(|i| set.matching(i)).collect();
        for a in &ms {
            for b in &ms {
                let common = a
                    .edges()
                    .iter()
                    .filter(|&&(x, y)| b.contains_edge(x, y))
                    .count();
                if common >= 2 {
                    assert!(setwise_t_intersecting_by_shape(a, b, 2).unwrap());
                }
            }
        }
    }

    #[test]
    fn canonical_family_sizes() {
        assert_eq!(canonical_family(4, 2).unwrap().len(), 9);
        assert_eq!(canonical_family(6, 3).unwrap().len(), 225);
        assert_eq!(canonical_family(2, 1).unwrap().len(), 1);
        assert_eq!(
            canonical_family(2, 1).unwrap().members[0],
            pm(&[(1, 2), (3, 4)])
        );
        assert!(canonical_family(4, 3).is_err());
    }

    #[test]
    fn canonical_family_is_pairwise_intersecting() {
        for (k, t) in [(4, 2), (5, 2), (6, 2), (6, 3)] {
            let fam = canonical_family(k, t).unwrap();
            let expected = double_factorial(2 * t as i64 - 1).unwrap()
                * double_factorial(2 * (k - t) as i64 - 1).unwrap();
            assert_eq!(Int::from(fam.len()), expected);
            for a in &fam.members {
                for b in &fam.members {
                    assert!(setwise_t_intersecting_by_shape(a, b, t).unwrap());
                }
            }
        }
    }

    #[test]
    fn family_json_round_trip() {
        let fam = canonical_family(3, 1).unwrap();
        let js = serde_json::to_string(&fam).unwrap();
        assert!(js.starts_with("{\"k\":3,\"members\":[[[1,2],"));
        let back: MatchingFamily = serde_json::from_str(&js).unwrap();
        assert_eq!(back.members, fam.members);
    }

    #[test]
    fn bad_matchings_rejected() {
        assert!(PerfectMatching::new(vec![(1, 2), (2, 3)]).is_err());
        assert!(PerfectMatching::new(vec![(1, 1)]).is_err());
        assert!(PerfectMatching::new(vec![(0, 1)]).is_err());
        assert!(PerfectMatching::new(vec![(1, 5), (2, 3)]).is_err());
    }
}
