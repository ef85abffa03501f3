//! The perfect matching association scheme: class matrices `A_lambda`, their
//! degrees, the axiom checks, and the set-wise intersection graph `N_t(2k)`.

use crate::error::{Error, Result};
use crate::matching::{enumerate_matchings, union_cycle_lengths, MatchingFamily, MatchingSet};
use crate::partition::{even_partitions, EvenPartition};
use crate::Int;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Dense pair-shape storage is guarded here: k = 6 means a 10395 x 10395
/// byte matrix (~108 MB), the documented ceiling.
pub const MAX_DENSE_K: usize = 6;

/// Maps union shapes to class indices in the fixed descending-lex class
/// order. The class list is the row/column contract for every table.
#[derive(Clone)]
pub struct ClassIndex {
    k: usize,
    classes: Vec<EvenPartition>,
    /// shape encoded as packed cycle-length bytes -> class id
    by_key: HashMap<u128, u8>,
}

impl ClassIndex {
    pub fn new(k: usize) -> Result<Self> {
        let classes = even_partitions(2 * k)?;
        let mut by_key = HashMap::with_capacity(classes.len());
        for (i, c) in classes.iter().enumerate() {
            by_key.insert(Self::key_of_parts(c.parts()), i as u8);
        }
        Ok(ClassIndex { k, classes, by_key })
    }

    fn key_of_parts(parts: &[usize]) -> u128 {
        let mut key = 0u128;
        for (i, &p) in parts.iter().enumerate() {
            key |= (p as u128) << (8 * i);
        }
        key
    }

    fn key_of_cycles(cycles: &[u8]) -> u128 {
        let mut key = 0u128;
        for (i, &c) in cycles.iter().enumerate() {
            key |= (c as u128) << (8 * i);
        }
        key
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn classes(&self) -> &[EvenPartition] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn id_of(&self, class: &EvenPartition) -> Option<usize> {
        self.by_key
            .get(&Self::key_of_parts(class.parts()))
            .map(|&i| i as usize)
    }

    pub fn identity_id(&self) -> usize {
        self.classes
            .iter()
            .position(|c| c.is_identity_class())
            .expect("identity class always present")
    }

    /// Class id of the union shape of two partner arrays.
    #[inline]
    pub fn shape_id(&self, p: &[u8], q: &[u8]) -> u8 {
        let cycles = union_cycle_lengths(p, q);
        self.by_key[&Self::key_of_cycles(&cycles)]
    }
}

/// Dense pair-shape matrix: entry `(i, j)` holds the class id of
/// `shape(M_i, M_j)`, one byte per entry.
pub struct ShapeMatrix {
    pub n: usize,
    entries: Vec<u8>,
}

impl ShapeMatrix {
    pub fn build(set: &MatchingSet, index: &ClassIndex) -> Result<Self> {
        if set.k() > MAX_DENSE_K {
            return Err(Error::ResourceGuard(format!(
                "dense pair-shape matrix guarded at k <= {MAX_DENSE_K} (got k = {})",
                set.k()
            )));
        }
        let n = set.len();
        let entries: Vec<u8> = (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                let pi = set.partner(i);
                (0..n).map(move |j| index.shape_id(pi, set.partner(j)))
            })
            .collect();
        Ok(ShapeMatrix { n, entries })
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u8] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }
}

/// Shared per-k context: enumeration, class index, and (lazily) the dense
/// shape matrix. Heavy pieces are cached process-wide.
#[derive(Clone)]
pub struct SchemeContext {
    pub set: Arc<MatchingSet>,
    pub index: Arc<ClassIndex>,
    shape: Arc<OnceLock<Arc<ShapeMatrix>>>,
}

static CONTEXT_CACHE: OnceLock<Mutex<HashMap<usize, SchemeContext>>> = OnceLock::new();

impl SchemeContext {
    pub fn new(k: usize) -> Result<Self> {
        let cache = CONTEXT_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("context cache poisoned");
        if let Some(ctx) = guard.get(&k) {
            return Ok(ctx.clone());
        }
        let ctx = SchemeContext {
            set: Arc::new(enumerate_matchings(k)?),
            index: Arc::new(ClassIndex::new(k)?),
            shape: Arc::new(OnceLock::new()),
        };
        guard.insert(k, ctx.clone());
        Ok(ctx)
    }

    pub fn k(&self) -> usize {
        self.set.k()
    }

    /// Dense pair-shape matrix, built once per k and shared.
    pub fn shape_matrix(&self) -> Result<Arc<ShapeMatrix>> {
        if let Some(m) = self.shape.get() {
            return Ok(m.clone());
        }
        let built = Arc::new(ShapeMatrix::build(&self.set, &self.index)?);
        let _ = self.shape.set(built);
        Ok(self.shape.get().expect("just set").clone())
    }
}

/// Number of matchings at shape-distance `lambda` from any fixed matching,
/// by direct counting: partition the k edges into unordered groups of sizes
/// `lambda_i / 2` (dividing by multiplicities of repeated sizes), then build
/// a single cycle through each group in `2^(m-1) (m-1)!` ways.
pub fn class_degree(lambda: &EvenPartition, k: usize) -> Result<Int> {
    if lambda.sum() != 2 * k {
        return Err(Error::SumMismatch(lambda.sum(), 2 * k));
    }
    let factorial = |n: usize| -> Int {
        let mut acc = Int::one();
        for v in 2..=n {
            acc *= Int::from(v);
        }
        acc
    };
    let mut count = factorial(k);
    let mut run = 1usize;
    let parts = lambda.parts();
    for (i, &p) in parts.iter().enumerate() {
        let m = p / 2;
        count /= factorial(m);
        // symmetry factor for repeated part sizes
        if i + 1 < parts.len() && parts[i + 1] == p {
            run += 1;
        } else {
            count /= factorial(run);
            run = 1;
        }
        // single-(2m)-cycle completions through m fixed disjoint edges
        count *= Int::from(2u32).pow(m as u32 - 1) * factorial(m - 1);
    }
    Ok(count)
}

/// How a class matrix is materialized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixMode {
    Dense,
    Implicit,
}

/// A scheme class matrix `A_lambda`, backed either by the shared dense
/// pair-shape matrix or by the pair predicate.
pub struct ClassMatrix {
    pub class: EvenPartition,
    pub class_id: usize,
    pub ctx: SchemeContext,
    dense: Option<Arc<ShapeMatrix>>,
}

impl ClassMatrix {
    pub fn n(&self) -> usize {
        self.ctx.set.len()
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> bool {
        match &self.dense {
            Some(s) => s.at(i, j) as usize == self.class_id,
            None => {
                self.ctx
                    .index
                    .shape_id(self.ctx.set.partner(i), self.ctx.set.partner(j))
                    as usize
                    == self.class_id
            }
        }
    }

    pub fn row_sum(&self, i: usize) -> Int {
        let mut acc = 0u64;
        match &self.dense {
            Some(s) => {
                for &e in s.row(i) {
                    if e as usize == self.class_id {
                        acc += 1;
                    }
                }
            }
            None => {
                let pi = self.ctx.set.partner(i);
                for q in self.ctx.set.iter_partners() {
                    if self.ctx.index.shape_id(pi, q) as usize == self.class_id {
                        acc += 1;
                    }
                }
            }
        }
        Int::from(acc)
    }

    pub fn is_dense(&self) -> bool {
        self.dense.is_some()
    }
}

/// Materializes `A_lambda` for `K_2k`. Dense mode requires `k <= 6`.
pub fn build_class_matrix(lambda: &EvenPartition, k: usize, mode: MatrixMode) -> Result<ClassMatrix> {
    let ctx = SchemeContext::new(k)?;
    let class_id = ctx.index.id_of(lambda).ok_or_else(|| Error::InvalidPartition(
        format!("{lambda} is not an even partition of {}", 2 * k),
    ))?;
    let dense = match mode {
        MatrixMode::Dense => Some(ctx.shape_matrix()?),
        MatrixMode::Implicit => None,
    };
    Ok(ClassMatrix {
        class: lambda.clone(),
        class_id,
        ctx,
        dense,
    })
}

/// Outcome of one scheme axiom check.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomCheck {
    pub axiom: String,
    pub pass: bool,
    pub witness: Option<String>,
}

/// Report for `verify_scheme_axioms`.
#[derive(Debug, Clone, Serialize)]
pub struct SchemeAxiomReport {
    pub k: usize,
    pub class_count: usize,
    pub checks: Vec<AxiomCheck>,
}

impl SchemeAxiomReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Checks the association scheme axioms on the materialized scheme:
/// (i) the classes partition all pairs (sum to the all-ones matrix),
/// (ii) the class `[2,...,2]` is the identity, (iii) every class matrix is
/// symmetric, (iv) class matrices commute pairwise. The commutativity scan is
/// cubic and guarded at k <= 4; the rest run up to k <= 6.
pub fn verify_scheme_axioms(k: usize) -> Result<SchemeAxiomReport> {
    if k > MAX_DENSE_K {
        return Err(Error::ResourceGuard(format!(
            "scheme axiom verification guarded at k <= {MAX_DENSE_K}"
        )));
    }
    let ctx = SchemeContext::new(k)?;
    let shape = ctx.shape_matrix()?;
    let n = shape.n;
    let p = ctx.index.len();
    let ident = ctx.index.identity_id() as u8;
    let mut checks = Vec::new();

    // (i) every pair has exactly one class: entries are total by construction,
    // so the content of the axiom is that ids are in range.
    let coverage = shape.entries.iter().all(|&e| (e as usize) < p);
    checks.push(AxiomCheck {
        axiom: "sum of classes is the all-ones matrix".into(),
        pass: coverage,
        witness: None,
    });

    // (ii) identity class
    let mut identity_witness = None;
    'outer: for i in 0..n {
        for j in 0..n {
            let is_id = shape.at(i, j) == ident;
            if is_id != (i == j) {
                identity_witness = Some(format!("entry ({i},{j})"));
                break 'outer;
            }
        }
    }
    checks.push(AxiomCheck {
        axiom: "class [2,...,2] is the identity".into(),
        pass: identity_witness.is_none(),
        witness: identity_witness,
    });

    // (iii) symmetry
    let mut sym_witness = None;
    'sym: for i in 0..n {
        for j in i + 1..n {
            if shape.at(i, j) != shape.at(j, i) {
                sym_witness = Some(format!("entries ({i},{j}) vs ({j},{i})"));
                break 'sym;
            }
        }
    }
    checks.push(AxiomCheck {
        axiom: "every class matrix is symmetric".into(),
        pass: sym_witness.is_none(),
        witness: sym_witness,
    });

    // (iv) pairwise commutativity, with the closure check (the pair-class
    // tally must depend only on the class of the outer pair) as a bonus
    if k <= 4 {
        let mut comm_witness = None;
        let mut closure_witness = None;
        let mut tensors: Vec<Option<Vec<u32>>> = vec![None; p];
        'comm: for i in 0..n {
            for j in 0..n {
                let mut tally = vec![0u32; p * p];
                for r in 0..n {
                    let a = shape.at(i, r) as usize;
                    let b = shape.at(r, j) as usize;
                    tally[a * p + b] += 1;
                }
                for a in 0..p {
                    for b in a + 1..p {
                        if tally[a * p + b] != tally[b * p + a] {
                            comm_witness = Some(format!(
                                "A_{} A_{} != A_{} A_{} at entry ({i},{j})",
                                ctx.index.classes()[a],
                                ctx.index.classes()[b],
                                ctx.index.classes()[b],
                                ctx.index.classes()[a]
                            ));
                            break 'comm;
                        }
                    }
                }
                let outer = shape.at(i, j) as usize;
                match &tensors[outer] {
                    None => tensors[outer] = Some(tally),
                    Some(prev) => {
                        if *prev != tally {
                            closure_witness =
                                Some(format!("pair ({i},{j}) of class {}", ctx.index.classes()[outer]));
                            break 'comm;
                        }
                    }
                }
            }
        }
        checks.push(AxiomCheck {
            axiom: "class matrices commute pairwise".into(),
            pass: comm_witness.is_none(),
            witness: comm_witness,
        });
        checks.push(AxiomCheck {
            axiom: "intersection numbers are well-defined".into(),
            pass: closure_witness.is_none(),
            witness: closure_witness,
        });
    }

    Ok(SchemeAxiomReport {
        k,
        class_count: p,
        checks,
    })
}

/// The graph `N_t(2k)`: vertices are perfect matchings; two are adjacent when
/// their union shape has no sub-multiset of parts summing to `2t`. Cocliques
/// are exactly the set-wise t-intersecting families.
pub struct IntersectionGraph {
    pub k: usize,
    pub t: usize,
    pub ctx: SchemeContext,
    /// Even partitions whose shapes mean adjacency, descending lex.
    pub adjacency_classes: Vec<EvenPartition>,
    adjacency_ids: Vec<bool>,
}

impl IntersectionGraph {
    pub fn new(k: usize, t: usize) -> Result<Self> {
        if t == 0 || t > k / 2 {
            return Err(Error::OutOfRange {
                what: "intersection parameter t",
                detail: format!("need 1 <= t <= floor(k/2) = {}, got {t}", k / 2),
            });
        }
        let ctx = SchemeContext::new(k)?;
        let adjacency_classes: Vec<EvenPartition> = ctx
            .index
            .classes()
            .iter()
            .filter(|c| !c.has_subpartition_sum(2 * t))
            .cloned()
            .collect();
        let mut adjacency_ids = vec![false; ctx.index.len()];
        for c in &adjacency_classes {
            adjacency_ids[ctx.index.id_of(c).unwrap()] = true;
        }
        Ok(IntersectionGraph {
            k,
            t,
            ctx,
            adjacency_classes,
            adjacency_ids,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.ctx.set.len()
    }

    #[inline]
    pub fn class_is_adjacent(&self, class_id: usize) -> bool {
        self.adjacency_ids[class_id]
    }

    /// Adjacency of two matchings by enumeration index.
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        if i == j {
            return false;
        }
        let id = self
            .ctx
            .index
            .shape_id(self.ctx.set.partner(i), self.ctx.set.partner(j));
        self.adjacency_ids[id as usize]
    }

    /// Constant vertex degree: sum of the adjacency class degrees.
    pub fn degree(&self) -> Int {
        self.adjacency_classes
            .iter()
            .map(|c| class_degree(c, self.k).expect("valid class"))
            .sum()
    }
}

/// Whether no two members of the family are adjacent in the graph.
pub fn is_coclique(family: &MatchingFamily, graph: &IntersectionGraph) -> Result<bool> {
    if family.k != graph.k {
        return Err(Error::VertexSetMismatch(2 * family.k, 2 * graph.k));
    }
    let partners: Vec<Vec<u8>> = family.members.iter().map(|m| m.partner_array()).collect();
    for (i, a) in partners.iter().enumerate() {
        for b in partners.iter().skip(i + 1) {
            let id = graph.ctx.index.shape_id(a, b) as usize;
            if graph.adjacency_ids[id] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Closed-form degree checks used by tests and the `degrees` subcommand:
/// the sum of all class degrees must be the number of matchings.
pub fn degree_table(k: usize) -> Result<Vec<(EvenPartition, Int)>> {
    even_partitions(2 * k)?
        .into_iter()
        .map(|c| class_degree(&c, k).map(|d| (c, d)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::canonical_family;
    use crate::partition::double_factorial;
    use crate::partition::EvenPartition;

    fn ep(parts: &[usize]) -> EvenPartition {
        EvenPartition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn class_degree_examples() {
        assert_eq!(class_degree(&ep(&[8]), 4).unwrap(), Int::from(48));
        assert_eq!(class_degree(&ep(&[2, 2, 2, 2]), 4).unwrap(), Int::from(1));
        assert_eq!(class_degree(&ep(&[4, 4]), 4).unwrap(), Int::from(12));
        assert_eq!(class_degree(&ep(&[6, 2]), 4).unwrap(), Int::from(32));
        assert_eq!(class_degree(&ep(&[4, 2, 2]), 4).unwrap(), Int::from(12));
    }

    #[test]
    fn class_degrees_sum_to_matching_count() {
        for k in 1..=7 {
            let total: Int = degree_table(k).unwrap().into_iter().map(|(_, d)| d).sum();
            assert_eq!(total, double_factorial(2 * k as i64 - 1).unwrap(), "k={k}");
        }
    }

    #[test]
    fn closed_form_degree_rows() {
        for k in 2..=10usize {
            let single = ep(&[2 * k]);
            assert_eq!(
                class_degree(&single, k).unwrap(),
                double_factorial(2 * k as i64 - 2).unwrap()
            );
            if k >= 3 {
                let near = ep(&[2 * k - 2, 2]);
                assert_eq!(
                    class_degree(&near, k).unwrap(),
                    Int::from(k) * double_factorial(2 * k as i64 - 4).unwrap()
                );
            }
        }
    }

    #[test]
    fn dense_row_sums_match_degrees() {
        for k in 2..=5 {
            let ctx = SchemeContext::new(k).unwrap();
            for class in ctx.index.classes() {
                let m = build_class_matrix(class, k, MatrixMode::Dense).unwrap();
                let expected = class_degree(class, k).unwrap();
                for i in [0usize, m.n() / 2, m.n() - 1] {
                    assert_eq!(m.row_sum(i), expected, "k={k} class={class}");
                }
            }
        }
    }

    #[test]
    fn dense_and_implicit_agree() {
        let class = ep(&[6, 2]);
        let d = build_class_matrix(&class, 4, MatrixMode::Dense).unwrap();
        let i = build_class_matrix(&class, 4, MatrixMode::Implicit).unwrap();
        for a in 0..d.n() {
            for b in 0..d.n() {
                assert_eq!(d.entry(a, b), i.entry(a, b));
            }
        }
    }

    #[test]
    fn class_matrix_examples() {
        // [4] at k=2: all-ones minus identity on 3 matchings
        let m = build_class_matrix(&ep(&[4]), 2, MatrixMode::Dense).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(m.entry(a, b), a != b);
            }
        }
        // identity class
        let id = build_class_matrix(&ep(&[2, 2]), 2, MatrixMode::Dense).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(id.entry(a, b), a == b);
            }
        }
    }

    #[test]
    fn axioms_pass_small_k() {
        for k in 2..=4 {
            let report = verify_scheme_axioms(k).unwrap();
            assert!(report.all_pass(), "k={k}: {:?}", report.checks);
            assert_eq!(
                report.class_count,
                even_partitions(2 * k).unwrap().len()
            );
        }
        assert_eq!(verify_scheme_axioms(3).unwrap().class_count, 3);
    }

    #[test]
    fn intersection_graph_classes_and_degree() {
        let g = IntersectionGraph::new(4, 2).unwrap();
        assert_eq!(g.adjacency_classes, vec![ep(&[8]), ep(&[6, 2])]);
        assert_eq!(g.degree(), Int::from(80));

        let g1 = IntersectionGraph::new(2, 1).unwrap();
        assert_eq!(g1.adjacency_classes, vec![ep(&[4])]);
        assert_eq!(g1.degree(), Int::from(2));

        // k=6, t=3: subset-sum filter over the 11 classes
        let g3 = IntersectionGraph::new(6, 3).unwrap();
        assert_eq!(
            g3.adjacency_classes,
            vec![ep(&[12]), ep(&[10, 2]), ep(&[8, 4]), ep(&[8, 2, 2]), ep(&[4, 4, 4])]
        );
        assert!(IntersectionGraph::new(4, 3).is_err());
    }

    #[test]
    fn coclique_checks() {
        let g = IntersectionGraph::new(4, 2).unwrap();
        let fam = canonical_family(4, 2).unwrap();
        assert!(is_coclique(&fam, &g).unwrap());

        let all = MatchingFamily::new(
            4,
            (0..g.vertex_count()).map(|i| g.ctx.set.matching(i)).collect(),
        )
        .unwrap();
        assert!(!is_coclique(&all, &g).unwrap());

        let single = MatchingFamily::new(4, vec![g.ctx.set.matching(17)]).unwrap();
        assert!(is_coclique(&single, &g).unwrap());
    }

    #[test]
    fn graph_adjacency_matches_oracle_k4_t2() {
        use crate::matching::setwise_t_intersecting_oracle;
        let g = IntersectionGraph::new(4, 2).unwrap();
        let n = g.vertex_count();
        for i in 0..n {
            let mi = g.ctx.set.matching(i);
            for j in 0..n {
                let mj = g.ctx.set.matching(j);
                let adj = g.adjacent(i, j);
                let oracle = setwise_t_intersecting_oracle(&mi, &mj, 2).unwrap();
                assert_eq!(adj, i != j && !oracle, "i={i} j={j}");
            }
        }
    }
}
