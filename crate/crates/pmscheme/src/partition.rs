//! Integer-partition combinatorics: even partitions, dominance, conjugation,
//! sub-partition sums, hook-length dimensions and the dimension bounds used by
//! the spectral arguments.

use crate::error::{Error, Result};
use crate::Int;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// A partition of a non-negative integer: non-increasing positive parts.
///
/// Canonical form is unique — no zero parts are stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPartition {
    parts: Vec<usize>,
}

impl IntPartition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidPartition(format!("zero part in {parts:?}")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "parts not non-increasing: {parts:?}"
            )));
        }
        Ok(IntPartition { parts })
    }

    /// Builds from parts in any order.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Result<Self> {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The integer being partitioned.
    pub fn sum(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Standard dominance: every prefix sum of `self` is at least the
    /// corresponding prefix sum of `other`. Partial order; both partitions
    /// must have the same sum.
    pub fn dominates(&self, other: &IntPartition) -> Result<bool> {
        if self.sum() != other.sum() {
            return Err(Error::SumMismatch(self.sum(), other.sum()));
        }
        let (mut sa, mut sb) = (0usize, 0usize);
        for i in 0..self.parts.len().max(other.parts.len()) {
            sa += self.parts.get(i).copied().unwrap_or(0);
            sb += other.parts.get(i).copied().unwrap_or(0);
            if sa < sb {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Column lengths of the Young diagram. An involution.
    pub fn conjugate(&self) -> IntPartition {
        if self.parts.is_empty() {
            return IntPartition { parts: vec![] };
        }
        let cols = self.parts[0];
        let parts = (1..=cols)
            .map(|c| self.parts.iter().take_while(|&&p| p >= c).count())
            .collect();
        IntPartition { parts }
    }

    /// A partition dominating its conjugate is called primary.
    pub fn is_primary(&self) -> bool {
        self.dominates(&self.conjugate()).expect("same sum")
    }

    /// Whether some sub-multiset of the parts sums exactly to `s`.
    pub fn has_subpartition_sum(&self, s: usize) -> bool {
        let total = self.sum();
        if s > total {
            return false;
        }
        let mut reachable = vec![false; s + 1];
        reachable[0] = true;
        for &p in &self.parts {
            for v in (p..=s).rev() {
                if reachable[v - p] {
                    reachable[v] = true;
                }
            }
        }
        reachable[s]
    }

    /// Dimension of the irreducible symmetric-group module labelled by this
    /// partition, by the hook length formula: `n! / prod(hooks)`.
    pub fn hook_dimension(&self) -> Int {
        let n = self.sum();
        let conj = self.conjugate();
        let mut denom = Int::one();
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row {
                let arm = row - j - 1;
                let leg = conj.parts()[j] - i - 1;
                denom *= Int::from(arm + leg + 1);
            }
        }
        let mut numer = Int::one();
        for v in 1..=n {
            numer *= Int::from(v);
        }
        &numer / &denom
    }

    /// Deterministic ordering used everywhere a class or module list needs a
    /// stable order: descending lexicographic on the part vectors, which is a
    /// linear extension of dominance ([n] first, [1,1,...,1] last).
    pub fn cmp_desc_lex(&self, other: &IntPartition) -> std::cmp::Ordering {
        other.parts.cmp(&self.parts)
    }
}

impl fmt::Display for IntPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for IntPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for IntPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPartition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<usize>::deserialize(d)?;
        IntPartition::new(parts).map_err(D::Error::custom)
    }
}

/// A partition of `2k` with every part even (and hence at least 2).
///
/// Even partitions label both the classes and the common eigenspaces of the
/// perfect matching association scheme.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EvenPartition(IntPartition);

impl EvenPartition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        let p = IntPartition::new(parts)?;
        if let Some(&odd) = p.parts().iter().find(|&&x| x % 2 != 0) {
            return Err(Error::InvalidPartition(format!(
                "odd part {odd} in even partition {p}"
            )));
        }
        Ok(EvenPartition(p))
    }

    pub fn parts(&self) -> &[usize] {
        self.0.parts()
    }

    pub fn sum(&self) -> usize {
        self.0.sum()
    }

    pub fn as_int_partition(&self) -> &IntPartition {
        &self.0
    }

    pub fn dominates(&self, other: &EvenPartition) -> Result<bool> {
        self.0.dominates(&other.0)
    }

    pub fn has_subpartition_sum(&self, s: usize) -> bool {
        self.0.has_subpartition_sum(s)
    }

    pub fn hook_dimension(&self) -> Int {
        self.0.hook_dimension()
    }

    /// The identity class `[2,2,...,2]`.
    pub fn is_identity_class(&self) -> bool {
        self.parts().iter().all(|&p| p == 2)
    }

    pub fn cmp_desc_lex(&self, other: &EvenPartition) -> std::cmp::Ordering {
        self.0.cmp_desc_lex(&other.0)
    }
}

impl fmt::Display for EvenPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for EvenPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Serialize for EvenPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for EvenPartition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = IntPartition::deserialize(d)?;
        EvenPartition::new(p.parts().to_vec()).map_err(D::Error::custom)
    }
}

/// Double factorial `n!! = n(n-2)(n-4)...`, with `(-1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> Result<Int> {
    if n < -1 {
        return Err(Error::OutOfRange {
            what: "double factorial argument",
            detail: format!("{n} < -1"),
        });
    }
    let mut acc = Int::one();
    let mut m = n;
    while m > 1 {
        acc *= Int::from(m);
        m -= 2;
    }
    Ok(acc)
}

/// All partitions of `n`, in descending lexicographic order.
pub fn partitions(n: usize) -> Vec<IntPartition> {
    let mut out = Vec::new();
    let mut acc = Vec::new();
    fn rec(rem: usize, max: usize, acc: &mut Vec<usize>, out: &mut Vec<IntPartition>) {
        if rem == 0 {
            out.push(IntPartition { parts: acc.clone() });
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            acc.push(p);
            rec(rem - p, p, acc, out);
            acc.pop();
        }
    }
    rec(n, n, &mut acc, &mut out);
    out
}

/// All even partitions of `two_k`, each exactly once, in descending
/// lexicographic order. Rejects odd or non-positive input.
pub fn even_partitions(two_k: usize) -> Result<Vec<EvenPartition>> {
    if two_k == 0 || two_k % 2 != 0 {
        return Err(Error::OutOfRange {
            what: "even partition target",
            detail: format!("{two_k} is not a positive even integer"),
        });
    }
    // bijection with partitions of k: double every part
    Ok(partitions(two_k / 2)
        .into_iter()
        .map(|p| EvenPartition(IntPartition {
            parts: p.parts().iter().map(|&x| 2 * x).collect(),
        }))
        .collect())
}

/// Multiplicity of the two-row module `[2k-l, l]`: `C(2k,l) - C(2k,l-1)`.
/// Agrees with the hook-length dimension of that shape.
pub fn two_row_multiplicity(two_k: usize, ell: usize) -> Result<Int> {
    if ell > two_k / 2 {
        return Err(Error::OutOfRange {
            what: "two-row multiplicity",
            detail: format!("l = {ell} exceeds k = {}", two_k / 2),
        });
    }
    let c = |l: usize| -> Int { binomial(two_k, l) };
    Ok(if ell == 0 { c(0) } else { c(ell) - c(ell - 1) })
}

/// Binomial coefficient as an exact integer.
pub fn binomial(n: usize, k: usize) -> Int {
    if k > n {
        return Int::zero();
    }
    let k = k.min(n - k);
    let mut acc = Int::one();
    for i in 0..k {
        acc = acc * Int::from(n - i) / Int::from(i + 1);
    }
    acc
}

/// The dimension lower bound `F(n)` for primary partitions with small first
/// part, computed by the recursion exactly as printed:
/// `F(0) = 2`, `F(even n) = 2 F(n-1)`, `F(2m+1) = n F(n-1) (m+2)`.
pub fn f_bound(n: usize) -> Int {
    let mut f = Int::from(2u32);
    for m in 1..=n {
        if m % 2 == 0 {
            f *= Int::from(2u32);
        } else {
            f = f * Int::from(m) * Int::from((m - 1) / 2 + 2);
        }
    }
    f
}

/// One row of the `F(n)` growth audit.
#[derive(Debug, Clone, Serialize)]
pub struct FGrowthCheck {
    pub n: usize,
    /// `3/2 * F(n-1) <= F(n)` holds.
    pub lower_ok: bool,
    /// `F(n) <= 2 * F(n-1)` holds.
    pub upper_ok: bool,
    /// `F(n) / F(n-1)` as a string, for the report.
    pub ratio: String,
}

/// Audits the printed growth inequality `3/2 F(n-1) <= F(n) <= 2 F(n-1)`
/// for `8 <= n <= n_max`. Violations are reported, never patched: the
/// recursion as printed grows much faster than the stated upper bound at
/// odd `n >= 9`.
pub fn f_bound_growth_audit(n_max: usize) -> Vec<FGrowthCheck> {
    let mut out = Vec::new();
    let mut prev = f_bound(7);
    for n in 8..=n_max {
        let cur = f_bound(n);
        let two_prev = &prev * Int::from(2u32);
        let three_prev = &prev * Int::from(3u32);
        let lower_ok = &cur * Int::from(2u32) >= three_prev;
        let upper_ok = cur <= two_prev;
        let ratio = crate::Rat::new(cur.clone(), prev.clone());
        out.push(FGrowthCheck {
            n,
            lower_ok,
            upper_ok,
            ratio: crate::rat_to_string(&ratio),
        });
        prev = cur;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> IntPartition {
        IntPartition::new(parts.to_vec()).unwrap()
    }

    fn ep(parts: &[usize]) -> EvenPartition {
        EvenPartition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn double_factorial_values() {
        assert_eq!(double_factorial(7).unwrap(), Int::from(105));
        assert_eq!(double_factorial(-1).unwrap(), Int::from(1));
        assert_eq!(double_factorial(0).unwrap(), Int::from(1));
        assert_eq!(double_factorial(8).unwrap(), Int::from(384));
        assert!(double_factorial(-2).is_err());
    }

    #[test]
    fn even_partition_lists() {
        let e4 = even_partitions(4).unwrap();
        assert_eq!(e4, vec![ep(&[4]), ep(&[2, 2])]);
        let e8 = even_partitions(8).unwrap();
        assert_eq!(
            e8,
            vec![ep(&[8]), ep(&[6, 2]), ep(&[4, 4]), ep(&[4, 2, 2]), ep(&[2, 2, 2, 2])]
        );
        assert_eq!(even_partitions(12).unwrap().len(), 11);
        assert!(even_partitions(7).is_err());
        assert!(even_partitions(0).is_err());
    }

    #[test]
    fn even_partition_count_matches_halved() {
        for k in 1..=8 {
            assert_eq!(even_partitions(2 * k).unwrap().len(), partitions(k).len());
        }
    }

    #[test]
    fn dominance_examples() {
        assert!(p(&[8]).dominates(&p(&[6, 2])).unwrap());
        assert!(p(&[4, 4]).dominates(&p(&[4, 2, 2])).unwrap());
        assert!(!p(&[2, 2, 2, 2]).dominates(&p(&[8])).unwrap());
        assert!(p(&[8]).dominates(&p(&[8])).unwrap());
        assert!(p(&[6, 2]).dominates(&p(&[6, 2])).unwrap());
        assert!(p(&[4, 4]).dominates(&p(&[2, 2, 2, 2])).unwrap());
        assert!(p(&[5, 3]).dominates(&p(&[4, 4])).unwrap());
        assert!(!p(&[4, 4]).dominates(&p(&[5, 3])).unwrap());
        assert!(p(&[3, 3]).dominates(&p(&[5, 2])).is_err());
    }

    #[test]
    fn dominance_is_partial_order_exhaustive() {
        // reflexive, antisymmetric, transitive on all partitions of n <= 12
        for n in 1..=12 {
            let ps = partitions(n);
            for a in &ps {
                assert!(a.dominates(a).unwrap());
            }
            for a in &ps {
                for b in &ps {
                    let ab = a.dominates(b).unwrap();
                    let ba = b.dominates(a).unwrap();
                    if ab && ba {
                        assert_eq!(a, b);
                    }
                }
            }
            // transitivity only needs checking on small n; n = 12 has 77
            // partitions so the triple loop is ~457k iterations
            if n <= 12 {
                for a in &ps {
                    for b in &ps {
                        if !a.dominates(b).unwrap() {
                            continue;
                        }
                        for c in &ps {
                            if b.dominates(c).unwrap() {
                                assert!(a.dominates(c).unwrap());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(p(&[4, 2, 2]).conjugate(), p(&[3, 3, 1, 1]));
        assert_eq!(p(&[7]).conjugate(), p(&[1, 1, 1, 1, 1, 1, 1]));
        assert_eq!(p(&[4, 4]).conjugate(), p(&[2, 2, 2, 2]));
    }

    #[test]
    fn conjugate_is_involution_exhaustive() {
        for n in 0..=16 {
            for q in partitions(n) {
                assert_eq!(q.conjugate().conjugate(), q);
            }
        }
    }

    #[test]
    fn primary_examples() {
        assert!(p(&[8]).is_primary());
        assert!(!p(&[2, 2, 2, 2]).is_primary());
        assert!(p(&[4, 4]).is_primary());
    }

    #[test]
    fn subpartition_sums() {
        assert!(!p(&[6, 2]).has_subpartition_sum(4));
        assert!(p(&[4, 2, 2]).has_subpartition_sum(4));
        assert!(!p(&[8]).has_subpartition_sum(4));
        assert!(p(&[8]).has_subpartition_sum(0));
        assert!(p(&[8]).has_subpartition_sum(8));
    }

    #[test]
    fn subpartition_sum_complement_symmetry() {
        for n in 1..=12 {
            for q in partitions(n) {
                for s in 0..=n {
                    assert_eq!(
                        q.has_subpartition_sum(s),
                        q.has_subpartition_sum(n - s),
                        "{q} s={s}"
                    );
                }
            }
        }
    }

    #[test]
    fn hook_dimension_examples() {
        assert_eq!(p(&[8]).hook_dimension(), Int::from(1));
        assert_eq!(p(&[6, 2]).hook_dimension(), Int::from(20));
        assert_eq!(p(&[4, 2, 2]).hook_dimension(), Int::from(56));
        assert_eq!(p(&[4, 4]).hook_dimension(), Int::from(14));
        assert_eq!(p(&[2, 2, 2, 2]).hook_dimension(), Int::from(14));
    }

    #[test]
    fn hook_dimension_squares_sum_to_factorial() {
        for n in 1..=10 {
            let mut total = Int::from(0);
            for q in partitions(n) {
                let d = q.hook_dimension();
                total += &d * &d;
            }
            let mut fact = Int::from(1);
            for v in 1..=n {
                fact *= Int::from(v);
            }
            assert_eq!(total, fact, "n={n}");
        }
    }

    #[test]
    fn even_module_dimensions_sum_to_matching_count() {
        for k in 1..=6 {
            let total: Int = even_partitions(2 * k)
                .unwrap()
                .iter()
                .map(|l| l.hook_dimension())
                .sum();
            assert_eq!(total, double_factorial(2 * k as i64 - 1).unwrap(), "k={k}");
        }
    }

    #[test]
    fn hook_dimension_invariant_under_conjugation() {
        for n in 1..=12 {
            for q in partitions(n) {
                assert_eq!(q.hook_dimension(), q.conjugate().hook_dimension());
            }
        }
    }

    #[test]
    fn two_row_multiplicities() {
        assert_eq!(two_row_multiplicity(8, 2).unwrap(), Int::from(20));
        assert_eq!(two_row_multiplicity(8, 4).unwrap(), Int::from(14));
        assert_eq!(two_row_multiplicity(8, 0).unwrap(), Int::from(1));
        assert!(two_row_multiplicity(8, 5).is_err());
        for k in 1..=8usize {
            for ell in 0..=k {
                let two_k = 2 * k;
                let shape = IntPartition::new(if ell == 0 {
                    vec![two_k]
                } else if two_k - ell == ell {
                    vec![ell, ell]
                } else {
                    vec![two_k - ell, ell]
                })
                .unwrap();
                assert_eq!(
                    two_row_multiplicity(two_k, ell).unwrap(),
                    shape.hook_dimension(),
                    "2k={two_k} l={ell}"
                );
            }
        }
    }

    #[test]
    fn f_bound_values() {
        assert_eq!(f_bound(0), Int::from(2));
        assert_eq!(f_bound(1), Int::from(4));
        assert_eq!(f_bound(2), Int::from(8));
        assert_eq!(f_bound(3), Int::from(72));
        assert_eq!(f_bound(4), Int::from(144));
        assert_eq!(f_bound(8), Int::from(403200));
    }

    #[test]
    fn f_bound_audit_reports_odd_violations() {
        let audit = f_bound_growth_audit(20);
        for row in &audit {
            if row.n % 2 == 0 {
                assert!(row.lower_ok && row.upper_ok, "even n={} should satisfy", row.n);
            } else {
                // printed recursion: F(2m+1) = n(m+2) F(n-1), far above 2x
                assert!(!row.upper_ok, "odd n={} must violate the upper bound", row.n);
            }
        }
        let r9 = audit.iter().find(|r| r.n == 9).unwrap();
        assert_eq!(r9.ratio, "54");
    }

    #[test]
    fn serde_is_plain_array() {
        let q = ep(&[4, 2, 2]);
        assert_eq!(serde_json::to_string(&q).unwrap(), "[4,2,2]");
        let back: EvenPartition = serde_json::from_str("[4,2,2]").unwrap();
        assert_eq!(back, q);
        assert!(serde_json::from_str::<EvenPartition>("[3,2]").is_err());
        assert!(serde_json::from_str::<IntPartition>("[2,3]").is_err());
    }
}
