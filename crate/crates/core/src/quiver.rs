//! Finite acyclic quivers, oriented paths, walks with formal inverses,
//! maximal trees and bypasses.
//!
//! Paths are stored in traversal order (first arrow first) and written
//! right to left, so the path "first `a`, then `c`" is written `ca`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

pub type VertexId = usize;
pub type ArrowId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow name `{0}`")]
    DuplicateArrow(String),
    #[error("arrow `{arrow}` uses unknown vertex `{vertex}`")]
    UnknownVertex { arrow: String, vertex: String },
    #[error("unknown vertex `{0}`")]
    NoSuchVertex(String),
    #[error("unknown arrow `{0}`")]
    NoSuchArrow(String),
    #[error("oriented cycle through arrows {}", .witness.join(", "))]
    Cycle { witness: Vec<String> },
    #[error("quiver is not connected: components {components:?}")]
    Disconnected { components: Vec<Vec<String>> },
    #[error("quiver has no vertices")]
    Empty,
    #[error("arrows do not compose: {0}")]
    NotComposable(String),
    #[error("not a maximal tree: {0}")]
    NotSpanningTree(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: VertexId,
    pub target: VertexId,
}

/// A finite quiver. Vertices keep declaration order; arrows are sorted by name,
/// so `ArrowId` order is name order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// Structural construction only (names and endpoints); see [`Quiver::validate`].
    pub fn from_parts<V, A>(vertices: V, arrows: A) -> Result<Quiver, QuiverError>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        A: IntoIterator<Item = (String, String, String)>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v.clone()) {
                return Err(QuiverError::DuplicateVertex(v.clone()));
            }
        }
        let lookup = |arrow: &str, v: &str| {
            vertices.iter().position(|x| x == v).ok_or_else(|| QuiverError::UnknownVertex {
                arrow: arrow.to_string(),
                vertex: v.to_string(),
            })
        };
        let mut out = Vec::new();
        let mut names = BTreeSet::new();
        for (name, s, t) in arrows {
            if !names.insert(name.clone()) {
                return Err(QuiverError::DuplicateArrow(name));
            }
            out.push(Arrow {
                source: lookup(&name, &s)?,
                target: lookup(&name, &t)?,
                name,
            });
        }
        out.sort_by(|a, b| a.name.cmp(&b.name));
        Ok(Quiver { vertices, arrows: out })
    }

    /// Structural construction followed by validation.
    pub fn new<V, A>(vertices: V, arrows: A) -> Result<Quiver, QuiverError>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        A: IntoIterator<Item = (String, String, String)>,
    {
        let q = Quiver::from_parts(vertices, arrows)?;
        q.validate()?;
        Ok(q)
    }

    /// Convenience constructor from string slices.
    pub fn build(vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Result<Quiver, QuiverError> {
        Quiver::new(
            vertices.iter().map(|s| s.to_string()),
            arrows.iter().map(|(a, s, t)| (a.to_string(), s.to_string(), t.to_string())),
        )
    }

    /// Accepts iff the quiver is nonempty, has no oriented cycle and is connected.
    pub fn validate(&self) -> Result<(), QuiverError> {
        if self.vertices.is_empty() {
            return Err(QuiverError::Empty);
        }
        if let Some(witness) = self.find_cycle() {
            return Err(QuiverError::Cycle {
                witness: witness.iter().map(|&a| self.arrows[a].name.clone()).collect(),
            });
        }
        let comps = self.components();
        if comps.len() > 1 {
            return Err(QuiverError::Disconnected {
                components: comps
                    .into_iter()
                    .map(|c| c.into_iter().map(|v| self.vertices[v].clone()).collect())
                    .collect(),
            });
        }
        Ok(())
    }

    fn find_cycle(&self) -> Option<Vec<ArrowId>> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let n = self.vertices.len();
        let mut state = vec![0u8; n];
        let mut stack_arrows: Vec<ArrowId> = Vec::new();
        fn dfs(q: &Quiver, v: VertexId, state: &mut [u8], stack: &mut Vec<ArrowId>) -> Option<Vec<ArrowId>> {
            state[v] = 1;
            for (id, a) in q.arrows.iter().enumerate().filter(|(_, a)| a.source == v) {
                stack.push(id);
                match state[a.target] {
                    1 => {
                        let start = stack.iter().position(|&x| q.arrows[x].source == a.target).unwrap();
                        return Some(stack[start..].to_vec());
                    }
                    0 => {
                        if let Some(c) = dfs(q, a.target, state, stack) {
                            return Some(c);
                        }
                    }
                    _ => {}
                }
                stack.pop();
            }
            state[v] = 2;
            None
        }
        for v in 0..n {
            if state[v] == 0 {
                if let Some(c) = dfs(self, v, &mut state, &mut stack_arrows) {
                    return Some(c);
                }
            }
        }
        None
    }

    fn components(&self) -> Vec<Vec<VertexId>> {
        let n = self.vertices.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for a in &self.arrows {
                    for (x, y) in [(a.source, a.target), (a.target, a.source)] {
                        if x == v && comp[y] == usize::MAX {
                            comp[y] = id;
                            members.push(y);
                            queue.push_back(y);
                        }
                    }
                }
            }
            members.sort();
            out.push(members);
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a]
    }

    pub fn vertex_id(&self, name: &str) -> Result<VertexId, QuiverError> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| QuiverError::NoSuchVertex(name.to_string()))
    }

    pub fn arrow_id(&self, name: &str) -> Result<ArrowId, QuiverError> {
        self.arrows
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| QuiverError::NoSuchArrow(name.to_string()))
    }

    /// Some pair of vertices is joined by at least two arrows in the same direction.
    pub fn has_multiple_arrows(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.arrows.iter().any(|a| !seen.insert((a.source, a.target)))
    }

    /// All paths from `x` to `y`, in path order.
    pub fn enumerate_paths(&self, x: VertexId, y: VertexId) -> Vec<Path> {
        let mut out: Vec<Path> = self.paths_from(x).into_iter().filter(|p| p.target == y).collect();
        out.sort();
        out
    }

    /// Every path of the quiver, trivial paths included, in path order.
    pub fn all_paths(&self) -> Vec<Path> {
        let mut out: Vec<Path> = (0..self.vertices.len()).flat_map(|x| self.paths_from(x)).collect();
        out.sort();
        out
    }

    fn paths_from(&self, x: VertexId) -> Vec<Path> {
        let mut out = vec![Path::trivial(x)];
        let mut frontier = vec![Path::trivial(x)];
        while let Some(p) = frontier.pop() {
            for (id, a) in self.arrows.iter().enumerate() {
                if a.source == p.target {
                    let mut arrows = p.arrows.clone();
                    arrows.push(id);
                    let next = Path {
                        source: p.source,
                        target: a.target,
                        arrows,
                    };
                    out.push(next.clone());
                    frontier.push(next);
                }
            }
        }
        out
    }

    /// Bypasses `(α, u)`: `u` is a path parallel to the arrow `α` with `u ≠ α`.
    pub fn enumerate_bypasses(&self) -> Vec<Bypass> {
        let mut out = Vec::new();
        for (id, a) in self.arrows.iter().enumerate() {
            for p in self.enumerate_paths(a.source, a.target) {
                if p.arrows != [id] {
                    out.push(Bypass { arrow: id, path: p });
                }
            }
        }
        out
    }

    /// A double bypass `(α, u, β, v)`: two bypasses with `β` occurring in `u`.
    pub fn find_double_bypass(&self) -> Option<(Bypass, Bypass)> {
        let all = self.enumerate_bypasses();
        for outer in &all {
            for inner in &all {
                if outer.path.arrows.contains(&inner.arrow) {
                    return Some((outer.clone(), inner.clone()));
                }
            }
        }
        None
    }

    pub fn has_double_bypass(&self) -> bool {
        self.find_double_bypass().is_some()
    }

    /// Maximal tree rooted at `base`. Without a preference the tree is grown
    /// breadth-first, visiting vertices in discovery order and arrows in name
    /// order.
    pub fn spanning_tree(&self, base: VertexId, preferred: Option<&[ArrowId]>) -> Result<SpanningTree, QuiverError> {
        let n = self.vertices.len();
        if base >= n {
            return Err(QuiverError::NoSuchVertex(format!("#{base}")));
        }
        let allowed: Vec<bool> = match preferred {
            None => vec![true; self.arrows.len()],
            Some(set) => {
                let mut mask = vec![false; self.arrows.len()];
                for &a in set {
                    if a >= self.arrows.len() {
                        return Err(QuiverError::NotSpanningTree(format!("arrow #{a} out of range")));
                    }
                    if mask[a] {
                        return Err(QuiverError::NotSpanningTree(format!("arrow `{}` repeated", self.arrows[a].name)));
                    }
                    mask[a] = true;
                }
                if set.len() + 1 != n {
                    return Err(QuiverError::NotSpanningTree(format!(
                        "{} arrows given, {} needed",
                        set.len(),
                        n - 1
                    )));
                }
                mask
            }
        };
        let mut gamma: Vec<Option<Walk>> = vec![None; n];
        gamma[base] = Some(Walk::trivial(base));
        let mut in_tree = vec![false; self.arrows.len()];
        let mut queue = VecDeque::from([base]);
        while let Some(v) = queue.pop_front() {
            for (id, a) in self.arrows.iter().enumerate() {
                if !allowed[id] {
                    continue;
                }
                let (other, inverse) = if a.source == v {
                    (a.target, false)
                } else if a.target == v {
                    (a.source, true)
                } else {
                    continue;
                };
                if gamma[other].is_some() {
                    continue;
                }
                let mut w = gamma[v].clone().unwrap();
                w.push_step(self, Step { arrow: id, inverse }).expect("tree step composes");
                gamma[other] = Some(w);
                in_tree[id] = true;
                queue.push_back(other);
            }
        }
        if gamma.iter().any(Option::is_none) {
            return Err(match preferred {
                Some(_) => QuiverError::NotSpanningTree("arrows do not reach every vertex".into()),
                None => QuiverError::Disconnected {
                    components: self
                        .components()
                        .into_iter()
                        .map(|c| c.into_iter().map(|v| self.vertices[v].clone()).collect())
                        .collect(),
                },
            });
        }
        if preferred.is_some() && in_tree != allowed {
            return Err(QuiverError::NotSpanningTree("arrows contain a cycle".into()));
        }
        Ok(SpanningTree {
            base,
            in_tree,
            gamma: gamma.into_iter().map(Option::unwrap).collect(),
        })
    }

    pub fn default_tree(&self) -> SpanningTree {
        self.spanning_tree(0, None).expect("valid quiver is connected")
    }

    /// Written form of a sequence of arrows (concatenated for one-letter names,
    /// `*`-separated otherwise).
    fn write_arrows<'a>(&self, written: impl Iterator<Item = &'a str>) -> String {
        let names: Vec<&str> = written.collect();
        if names.iter().all(|n| n.chars().count() == 1) {
            names.concat()
        } else {
            names.join("*")
        }
    }

    pub fn path_name(&self, p: &Path) -> String {
        if p.arrows.is_empty() {
            return format!("e{}", self.vertices[p.source]);
        }
        self.write_arrows(p.arrows.iter().rev().map(|&a| self.arrows[a].name.as_str()))
    }

    pub fn walk_name(&self, w: &Walk) -> String {
        if w.steps.is_empty() {
            return format!("e{}", self.vertices[w.start]);
        }
        let parts: Vec<String> = w
            .steps
            .iter()
            .rev()
            .map(|s| {
                let n = &self.arrows[s.arrow].name;
                if s.inverse {
                    format!("{n}^-1")
                } else {
                    n.clone()
                }
            })
            .collect();
        parts.join(" ")
    }
}

/// An oriented path. Arrows are kept in traversal order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    source: VertexId,
    target: VertexId,
    arrows: Vec<ArrowId>,
}

impl Path {
    pub fn trivial(x: VertexId) -> Path {
        Path {
            source: x,
            target: x,
            arrows: Vec::new(),
        }
    }

    pub fn arrow(q: &Quiver, a: ArrowId) -> Path {
        let ar = q.arrow(a);
        Path {
            source: ar.source,
            target: ar.target,
            arrows: vec![a],
        }
    }

    /// Path from arrows listed in traversal order.
    pub fn from_arrows(q: &Quiver, arrows: &[ArrowId]) -> Result<Path, QuiverError> {
        let Some(&first) = arrows.first() else {
            return Err(QuiverError::NotComposable("empty arrow list".into()));
        };
        let mut p = Path::arrow(q, first);
        for &a in &arrows[1..] {
            let ar = q.arrow(a);
            if ar.source != p.target {
                return Err(QuiverError::NotComposable(format!(
                    "`{}` cannot follow `{}`",
                    ar.name,
                    q.path_name(&p)
                )));
            }
            p.arrows.push(a);
            p.target = ar.target;
        }
        Ok(p)
    }

    /// Path from arrow names written right to left (`["c", "a"]` is `ca`).
    pub fn from_written(q: &Quiver, names: &[&str]) -> Result<Path, QuiverError> {
        let ids = names.iter().rev().map(|n| q.arrow_id(n)).collect::<Result<Vec<_>, _>>()?;
        Path::from_arrows(q, &ids)
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn target(&self) -> VertexId {
        self.target
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_trivial()
    }

    /// Arrows in traversal order.
    pub fn arrows(&self) -> &[ArrowId] {
        &self.arrows
    }

    pub fn is_parallel(&self, other: &Path) -> bool {
        self.source == other.source && self.target == other.target
    }

    /// `later · self`: traverse `self`, then `later`. `None` if not composable.
    pub fn then(&self, later: &Path) -> Option<Path> {
        if self.target != later.source {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&later.arrows);
        Some(Path {
            source: self.source,
            target: later.target,
            arrows,
        })
    }

    /// Sub-path made of the arrows at traversal positions `range`.
    pub fn segment(&self, q: &Quiver, start: usize, end: usize) -> Path {
        if start == end {
            let v = if start == 0 {
                self.source
            } else {
                q.arrow(self.arrows[start - 1]).target
            };
            return Path::trivial(v);
        }
        Path::from_arrows(q, &self.arrows[start..end]).expect("segment of a path composes")
    }

    pub fn count_arrow(&self, a: ArrowId) -> usize {
        self.arrows.iter().filter(|&&x| x == a).count()
    }
}

/// The global path order: by length, then source, then target, then the
/// written arrow sequence compared lexicographically by arrow name.
impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arrows
            .len()
            .cmp(&other.arrows.len())
            .then(self.source.cmp(&other.source))
            .then(self.target.cmp(&other.target))
            .then_with(|| self.arrows.iter().rev().cmp(other.arrows.iter().rev()))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub arrow: ArrowId,
    pub inverse: bool,
}

impl Step {
    pub fn inverted(self) -> Step {
        Step {
            arrow: self.arrow,
            inverse: !self.inverse,
        }
    }

    fn endpoints(self, q: &Quiver) -> (VertexId, VertexId) {
        let a = q.arrow(self.arrow);
        if self.inverse {
            (a.target, a.source)
        } else {
            (a.source, a.target)
        }
    }
}

/// A walk: a path in the double quiver. Steps are in traversal order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Walk {
    start: VertexId,
    end: VertexId,
    steps: Vec<Step>,
}

impl Walk {
    pub fn trivial(x: VertexId) -> Walk {
        Walk {
            start: x,
            end: x,
            steps: Vec::new(),
        }
    }

    pub fn from_path(p: &Path) -> Walk {
        Walk {
            start: p.source,
            end: p.target,
            steps: p.arrows.iter().map(|&a| Step { arrow: a, inverse: false }).collect(),
        }
    }

    pub fn from_steps(q: &Quiver, start: VertexId, steps: &[Step]) -> Result<Walk, QuiverError> {
        let mut w = Walk::trivial(start);
        for &s in steps {
            w.push_step(q, s)?;
        }
        Ok(w)
    }

    fn push_step(&mut self, q: &Quiver, s: Step) -> Result<(), QuiverError> {
        let (from, to) = s.endpoints(q);
        if from != self.end {
            return Err(QuiverError::NotComposable(format!(
                "step `{}` does not start at vertex `{}`",
                q.arrow(s.arrow).name,
                q.vertex_name(self.end)
            )));
        }
        self.steps.push(s);
        self.end = to;
        Ok(())
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn end(&self) -> VertexId {
        self.end
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn inverse(&self) -> Walk {
        Walk {
            start: self.end,
            end: self.start,
            steps: self.steps.iter().rev().map(|s| s.inverted()).collect(),
        }
    }

    /// Traverse `self`, then `later`.
    pub fn then(&self, later: &Walk) -> Option<Walk> {
        if self.end != later.start {
            return None;
        }
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&later.steps);
        Some(Walk {
            start: self.start,
            end: later.end,
            steps,
        })
    }

    /// Free reduction: removes every `αα⁻¹` and `α⁻¹α` factor.
    pub fn reduced(&self) -> Walk {
        let mut out: Vec<Step> = Vec::with_capacity(self.steps.len());
        for &s in &self.steps {
            if out.last().is_some_and(|&l| l == s.inverted()) {
                out.pop();
            } else {
                out.push(s);
            }
        }
        Walk {
            start: self.start,
            end: self.end,
            steps: out,
        }
    }

    pub fn is_reduced(&self) -> bool {
        self.steps.windows(2).all(|w| w[1] != w[0].inverted())
    }
}

/// A maximal tree with base vertex `x₀` and the walks `γ_x` from `x₀` to `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    base: VertexId,
    in_tree: Vec<bool>,
    gamma: Vec<Walk>,
}

impl SpanningTree {
    pub fn base(&self) -> VertexId {
        self.base
    }

    pub fn contains(&self, a: ArrowId) -> bool {
        self.in_tree[a]
    }

    pub fn arrows(&self) -> Vec<ArrowId> {
        (0..self.in_tree.len()).filter(|&a| self.in_tree[a]).collect()
    }

    /// The reduced tree walk from the base vertex to `x`.
    pub fn gamma(&self, x: VertexId) -> &Walk {
        &self.gamma[x]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bypass {
    pub arrow: ArrowId,
    pub path: Path,
}

/// Lookup helper used by callers that index paths.
pub fn index_paths(paths: &[Path]) -> HashMap<Path, usize> {
    paths.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect()
}

impl fmt::Display for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vertices {}", self.vertices.join(", "))?;
        for a in &self.arrows {
            write!(f, "; {}: {} -> {}", a.name, self.vertices[a.source], self.vertices[a.target])?;
        }
        Ok(())
    }
}
