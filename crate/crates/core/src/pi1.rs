//! Homotopy relations of bound quivers: generating pairs, presentations of
//! the fundamental group, abelian invariants, additive characters, and a
//! budgeted three-valued homotopy test.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exactla::{smith_normal_form, Field, IntMatrix, Matrix, Scalar, SmithForm};
use crate::palg::IdealData;
use crate::quiver::{ArrowId, Path, Quiver, SpanningTree, Step, VertexId, Walk};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Pi1Error {
    #[error("walks are not parallel")]
    NotParallel,
}

/// Unordered pairs of distinct support paths of a single reduced basis element,
/// as path indices `(u, v)` with `u < v`.
pub fn homotopy_pairs(ideal: &IdealData) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for r in ideal.gb() {
        let s = r.support();
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                out.push((s[i], s[j]));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    /// Index into the presentation's generators.
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    fn inverted(self) -> Letter {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }
}

/// A group word in traversal order.
pub type Word = Vec<Letter>;

pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last().is_some_and(|&x| x == l.inverted()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn invert_word(w: &[Letter]) -> Word {
    w.iter().rev().map(|l| l.inverted()).collect()
}

/// π₁(Q, I, x₀) with one generator per arrow outside the maximal tree.
#[derive(Clone, Debug)]
pub struct GroupPresentation {
    pub tree: SpanningTree,
    pub generators: Vec<ArrowId>,
    gen_of_arrow: Vec<Option<usize>>,
    pub relators: Vec<Word>,
}

impl GroupPresentation {
    pub fn base(&self) -> VertexId {
        self.tree.base()
    }

    /// The word of `γ_y⁻¹ w γ_x`: the non-tree steps of `w` in order.
    pub fn word_of_walk(&self, w: &Walk) -> Word {
        free_reduce(
            &w.steps()
                .iter()
                .filter_map(|s| {
                    self.gen_of_arrow[s.arrow].map(|gen| Letter {
                        gen,
                        inverse: s.inverse,
                    })
                })
                .collect::<Vec<_>>(),
        )
    }

    pub fn word_of_path(&self, p: &Path) -> Word {
        self.word_of_walk(&Walk::from_path(p))
    }

    /// Exponent-sum vector of a word.
    pub fn exponents(&self, w: &[Letter]) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.generators.len()];
        for l in w {
            if l.inverse {
                v[l.gen] -= 1;
            } else {
                v[l.gen] += 1;
            }
        }
        v
    }

    pub fn relator_matrix(&self) -> IntMatrix {
        let g = self.generators.len();
        let mut m = IntMatrix::zeros(self.relators.len(), g);
        for (i, r) in self.relators.iter().enumerate() {
            for (j, e) in self.exponents(r).into_iter().enumerate() {
                m.set(i, j, e);
            }
        }
        m
    }

    pub fn format_word(&self, q: &Quiver, w: &[Letter]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter()
            .rev()
            .map(|l| {
                let n = &q.arrow(self.generators[l.gen]).name;
                if l.inverse {
                    format!("{n}^-1")
                } else {
                    n.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Generators are the non-tree arrows; each pair `(u, v)` contributes
/// `word(u) · word(v)⁻¹`, freely reduced. Trivial relators are dropped.
pub fn pi1_presentation(q: &Quiver, tree: &SpanningTree, pairs: &[(Path, Path)]) -> Result<GroupPresentation, Pi1Error> {
    let mut gen_of_arrow = vec![None; q.arrow_count()];
    let mut generators = Vec::new();
    for (a, slot) in gen_of_arrow.iter_mut().enumerate() {
        if !tree.contains(a) {
            *slot = Some(generators.len());
            generators.push(a);
        }
    }
    let mut pres = GroupPresentation {
        tree: tree.clone(),
        generators,
        gen_of_arrow,
        relators: Vec::new(),
    };
    let mut relators = Vec::new();
    for (u, v) in pairs {
        if !u.is_parallel(v) {
            return Err(Pi1Error::NotParallel);
        }
        let mut w = pres.word_of_path(u);
        w.extend(invert_word(&pres.word_of_path(v)));
        let w = free_reduce(&w);
        if !w.is_empty() && !relators.contains(&w) {
            relators.push(w);
        }
    }
    pres.relators = relators;
    Ok(pres)
}

/// Presentation of π₁ for an ideal, from its generating pairs.
pub fn presentation_of(ideal: &IdealData, tree: &SpanningTree) -> GroupPresentation {
    let alg = ideal.algebra();
    let pairs: Vec<(Path, Path)> = homotopy_pairs(ideal)
        .into_iter()
        .map(|(u, v)| (alg.path(u).clone(), alg.path(v).clone()))
        .collect();
    pi1_presentation(ideal.quiver(), tree, &pairs).expect("support paths of a reduced basis element are parallel")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianInvariants {
    /// Invariant factors `d₁ | d₂ | …`, each at least 2.
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

impl AbelianInvariants {
    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }
}

impl std::fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        parts.extend(std::iter::repeat_n("Z".to_string(), self.free_rank));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub fn abelian_invariants(p: &GroupPresentation) -> AbelianInvariants {
    let snf = smith_normal_form(&p.relator_matrix());
    AbelianInvariants {
        torsion: snf.invariants.iter().filter(|d| *d > &BigInt::from(1)).cloned().collect(),
        free_rank: p.generators.len() - snf.rank(),
    }
}

/// Hom(π₁(Q,I), k⁺) as tree-normalized arrow weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomSpace {
    pub field: Field,
    pub tree_arrows: Vec<ArrowId>,
    /// Canonical basis; each vector has one weight per arrow.
    pub basis: Vec<Vec<Scalar>>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `t_u`: the sum of the weights of the arrows of `u`.
    pub fn weight_of_path(t: &[Scalar], p: &Path, field: Field) -> Scalar {
        let mut acc = field.zero();
        for &a in p.arrows() {
            acc += &t[a];
        }
        acc
    }

    /// `t_γ = Σ ±t_α` over the steps of a walk.
    pub fn weight_of_walk(t: &[Scalar], w: &Walk, field: Field) -> Scalar {
        let mut acc = field.zero();
        for s in w.steps() {
            if s.inverse {
                acc -= &t[s.arrow];
            } else {
                acc += &t[s.arrow];
            }
        }
        acc
    }

    /// Linear combination of the basis vectors.
    pub fn combine(&self, coeffs: &[Scalar]) -> Vec<Scalar> {
        let n = self.basis.first().map_or(0, Vec::len);
        let mut out = vec![self.field.zero(); n];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            for (o, x) in out.iter_mut().zip(b) {
                *o += &(c * x);
            }
        }
        out
    }

    /// Whether `t` vanishes on the tree and satisfies every pair equation.
    pub fn satisfies(ideal: &IdealData, tree: &SpanningTree, t: &[Scalar]) -> bool {
        let alg = ideal.algebra();
        let f = ideal.field();
        tree.arrows().iter().all(|&a| t[a].is_zero())
            && homotopy_pairs(ideal).iter().all(|&(u, v)| {
                HomSpace::weight_of_path(t, alg.path(u), f) == HomSpace::weight_of_path(t, alg.path(v), f)
            })
    }
}

/// Nullspace of `{t_α = 0 : α ∈ T₁} ∪ {t_u − t_v = 0 : (u, v) a generating pair}`.
pub fn hom_space(ideal: &IdealData, tree: &SpanningTree) -> HomSpace {
    let q = ideal.quiver();
    let f = ideal.field();
    let alg = ideal.algebra();
    let m = q.arrow_count();
    let mut rows = Vec::new();
    for a in tree.arrows() {
        let mut r = vec![f.zero(); m];
        r[a] = f.one();
        rows.push(r);
    }
    for (u, v) in homotopy_pairs(ideal) {
        let mut r = vec![f.zero(); m];
        for &a in alg.path(u).arrows() {
            r[a] += &f.one();
        }
        for &a in alg.path(v).arrows() {
            r[a] -= &f.one();
        }
        rows.push(r);
    }
    let basis = if rows.is_empty() {
        (0..m)
            .map(|a| {
                let mut v = vec![f.zero(); m];
                v[a] = f.one();
                v
            })
            .collect()
    } else {
        Matrix::from_rows(f, rows).nullspace()
    };
    HomSpace {
        field: f,
        tree_arrows: tree.arrows(),
        basis,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_word_len: usize,
    pub max_nodes: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_word_len: 64,
            max_nodes: 100_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl Tri {
    /// Conjunction: any No wins, then any Unknown.
    pub fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::No, _) | (_, Tri::No) => Tri::No,
            (Tri::Unknown, _) | (_, Tri::Unknown) => Tri::Unknown,
            _ => Tri::Yes,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Tri::Yes => "yes",
            Tri::No => "no",
            Tri::Unknown => "unknown",
        }
    }
}

/// Insert a cyclic rotation of a relator (or of its inverse) before position
/// `position`, then freely reduce.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Insertion {
    pub position: usize,
    pub relator: usize,
    pub rotation: usize,
    pub inverse: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteTrace {
    pub start: Word,
    pub steps: Vec<Insertion>,
}

impl RewriteTrace {
    /// Re-runs the insertions and checks the word reaches the identity.
    pub fn replay(&self, pres: &GroupPresentation) -> bool {
        let mut w = free_reduce(&self.start);
        for s in &self.steps {
            let Some(r) = pres.relators.get(s.relator) else {
                return false;
            };
            if s.rotation >= r.len() || s.position > w.len() {
                return false;
            }
            w = apply_insertion(&w, &relator_variant(r, s.rotation, s.inverse), s.position);
        }
        w.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obstruction {
    /// The exponent vector of the word, moved to Smith coordinates, has
    /// `coordinate` not divisible by the matching invariant factor (or nonzero
    /// past the rank).
    Abelian { exponents: Vec<BigInt>, coordinate: usize },
    /// No relators and a nonempty freely reduced word.
    FreeGroup { word: Word },
}

impl Obstruction {
    pub fn verify(&self, pres: &GroupPresentation) -> bool {
        match self {
            Obstruction::Abelian { exponents, coordinate } => {
                let snf = smith_normal_form(&pres.relator_matrix());
                abelian_failure(&snf, exponents) == Some(*coordinate)
            }
            Obstruction::FreeGroup { word } => pres.relators.is_empty() && !word.is_empty() && free_reduce(word) == *word,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Homotopy {
    Yes(RewriteTrace),
    No(Obstruction),
    Unknown,
}

impl Homotopy {
    pub fn tri(&self) -> Tri {
        match self {
            Homotopy::Yes(_) => Tri::Yes,
            Homotopy::No(_) => Tri::No,
            Homotopy::Unknown => Tri::Unknown,
        }
    }
}

fn relator_variant(r: &[Letter], rotation: usize, inverse: bool) -> Word {
    let mut rot: Word = r[rotation..].iter().chain(&r[..rotation]).copied().collect();
    if inverse {
        rot = invert_word(&rot);
    }
    rot
}

fn apply_insertion(w: &[Letter], variant: &[Letter], position: usize) -> Word {
    let mut out: Word = w[..position].to_vec();
    out.extend_from_slice(variant);
    out.extend_from_slice(&w[position..]);
    free_reduce(&out)
}

/// First Smith coordinate that rules the vector out of the row lattice.
fn abelian_failure(snf: &SmithForm, v: &[BigInt]) -> Option<usize> {
    // x·R = v has an integer solution iff (v·V)_i is divisible by d_i for
    // i < rank and vanishes beyond.
    let z = snf.v.left_mul_vec(v);
    for (i, zi) in z.iter().enumerate() {
        let ok = match snf.invariants.get(i) {
            Some(d) => (zi % d).is_zero(),
            None => zi.is_zero(),
        };
        if !ok {
            return Some(i);
        }
    }
    None
}

/// Homotopy test for one ideal, with its presentation and Smith data cached.
#[derive(Clone, Debug)]
pub struct HomotopyOracle {
    pub presentation: GroupPresentation,
    snf: SmithForm,
    variants: Vec<(Word, usize, usize, bool)>,
    budget: SearchBudget,
}

impl HomotopyOracle {
    pub fn new(ideal: &IdealData, tree: &SpanningTree, budget: SearchBudget) -> HomotopyOracle {
        let presentation = presentation_of(ideal, tree);
        let snf = smith_normal_form(&presentation.relator_matrix());
        let mut variants: Vec<(Word, usize, usize, bool)> = Vec::new();
        for (ri, r) in presentation.relators.iter().enumerate() {
            for rot in 0..r.len() {
                for inv in [false, true] {
                    let v = relator_variant(r, rot, inv);
                    if !variants.iter().any(|x| x.0 == v) {
                        variants.push((v, ri, rot, inv));
                    }
                }
            }
        }
        HomotopyOracle {
            presentation,
            snf,
            variants,
            budget,
        }
    }

    pub fn for_ideal(ideal: &IdealData, budget: SearchBudget) -> HomotopyOracle {
        HomotopyOracle::new(ideal, &ideal.quiver().default_tree(), budget)
    }

    pub fn invariants(&self) -> AbelianInvariants {
        abelian_invariants(&self.presentation)
    }

    pub fn decide_paths(&self, u: &Path, v: &Path) -> Result<Homotopy, Pi1Error> {
        self.decide(&Walk::from_path(u), &Walk::from_path(v))
    }

    /// `u ∼_I v` for parallel walks.
    pub fn decide(&self, u: &Walk, v: &Walk) -> Result<Homotopy, Pi1Error> {
        if u.start() != v.start() || u.end() != v.end() {
            return Err(Pi1Error::NotParallel);
        }
        let mut w = self.presentation.word_of_walk(u);
        w.extend(invert_word(&self.presentation.word_of_walk(v)));
        Ok(self.decide_trivial(&free_reduce(&w)))
    }

    /// Whether a word represents the identity of π₁.
    pub fn decide_trivial(&self, w: &[Letter]) -> Homotopy {
        let start = free_reduce(w);
        if start.is_empty() {
            return Homotopy::Yes(RewriteTrace { start, steps: Vec::new() });
        }
        if self.presentation.relators.is_empty() {
            return Homotopy::No(Obstruction::FreeGroup { word: start });
        }
        let exps = self.presentation.exponents(&start);
        if let Some(coordinate) = abelian_failure(&self.snf, &exps) {
            return Homotopy::No(Obstruction::Abelian {
                exponents: exps,
                coordinate,
            });
        }
        match self.search(&start) {
            Some(steps) => Homotopy::Yes(RewriteTrace { start, steps }),
            None => Homotopy::Unknown,
        }
    }

    // Best-first over freely reduced words, shortest first.
    fn search(&self, start: &Word) -> Option<Vec<Insertion>> {
        let mut parent: HashMap<Word, Option<(Word, Insertion)>> = HashMap::new();
        let mut heap = BinaryHeap::new();
        let mut counter = 0usize;
        parent.insert(start.clone(), None);
        heap.push(Reverse((start.len(), counter, start.clone())));
        while let Some(Reverse((_, _, w))) = heap.pop() {
            for pos in 0..=w.len() {
                for (variant, relator, rotation, inverse) in &self.variants {
                    let next = apply_insertion(&w, variant, pos);
                    if next.len() > self.budget.max_word_len || parent.contains_key(&next) {
                        continue;
                    }
                    let ins = Insertion {
                        position: pos,
                        relator: *relator,
                        rotation: *rotation,
                        inverse: *inverse,
                    };
                    let done = next.is_empty();
                    parent.insert(next.clone(), Some((w.clone(), ins)));
                    if done {
                        let mut steps = Vec::new();
                        let mut cur = next;
                        while let Some(Some((prev, ins))) = parent.get(&cur) {
                            steps.push(*ins);
                            cur = prev.clone();
                        }
                        steps.reverse();
                        return Some(steps);
                    }
                    if parent.len() >= self.budget.max_nodes {
                        return None;
                    }
                    counter += 1;
                    heap.push(Reverse((next.len(), counter, next)));
                }
            }
        }
        None
    }

    /// Replays a Yes certificate or re-verifies a No certificate.
    pub fn verify(&self, h: &Homotopy) -> bool {
        match h {
            Homotopy::Yes(t) => t.replay(&self.presentation),
            Homotopy::No(o) => o.verify(&self.presentation),
            Homotopy::Unknown => true,
        }
    }
}

/// `u ∼_I v` with the default maximal tree.
pub fn decide_homotopic(u: &Walk, v: &Walk, ideal: &IdealData, budget: SearchBudget) -> Result<Homotopy, Pi1Error> {
    HomotopyOracle::for_ideal(ideal, budget).decide(u, v)
}

/// Whether `∼_I = ∼_J`: every generating pair of each holds under the other.
pub fn relations_equal(i: &IdealData, j: &IdealData, budget: SearchBudget) -> Tri {
    let oi = HomotopyOracle::for_ideal(i, budget);
    let oj = HomotopyOracle::for_ideal(j, budget);
    relation_contained(i, &oj).and(relation_contained(j, &oi))
}

/// Whether `∼_I ⊆ ∼_J`, given an oracle for J.
pub fn relation_contained(i: &IdealData, oracle_j: &HomotopyOracle) -> Tri {
    let alg = i.algebra();
    let mut acc = Tri::Yes;
    for (u, v) in homotopy_pairs(i) {
        let d = oracle_j.decide_paths(alg.path(u), alg.path(v)).expect("pairs are parallel");
        acc = acc.and(d.tri());
        if acc == Tri::No {
            break;
        }
    }
    acc
}

/// A walk given by signed arrows, used by callers that build walks by name.
pub fn walk_from_names(q: &Quiver, start: VertexId, steps: &[(&str, bool)]) -> Option<Walk> {
    let steps: Option<Vec<Step>> = steps
        .iter()
        .map(|&(n, inv)| q.arrow_id(n).ok().map(|arrow| Step { arrow, inverse: inv }))
        .collect();
    Walk::from_steps(q, start, &steps?).ok()
}

/// Largest absolute exponent, for reporting.
pub fn max_abs(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).max().unwrap_or_default()
}
