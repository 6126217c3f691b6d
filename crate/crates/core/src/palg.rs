//! The path algebra kQ of an acyclic quiver, ideals with their canonical
//! reduced basis, normal forms, and idempotent-fixing automorphisms.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::exactla::{Field, Matrix, Scalar};
use crate::quiver::{ArrowId, Path, Quiver, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PalgError {
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: Field, found: Field },
    #[error("image of arrow `{0}` is not supported on parallel paths")]
    NotParallel(String),
    #[error("`{path}` is not a bypass of arrow `{arrow}`")]
    NotBypass { arrow: String, path: String },
    #[error("dilatation weight of arrow `{0}` is zero")]
    ZeroWeight(String),
    #[error("arrow-level part of the substitution is singular")]
    Singular,
    #[error("expected {expected} arrow images, got {found}")]
    ArrowCount { expected: usize, found: usize },
}

/// kQ with its paths listed in path order.
#[derive(Debug)]
pub struct PathAlgebra {
    quiver: Quiver,
    field: Field,
    paths: Vec<Path>,
    index: HashMap<Path, usize>,
    arrow_paths: Vec<usize>,
    vertex_paths: Vec<usize>,
    // product[later * n + earlier] is the index of `later · earlier`
    product: Vec<Option<usize>>,
}

impl PathAlgebra {
    pub fn new(quiver: Quiver, field: Field) -> Arc<PathAlgebra> {
        let paths = quiver.all_paths();
        let index: HashMap<Path, usize> = paths.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let arrow_paths = (0..quiver.arrow_count()).map(|a| index[&Path::arrow(&quiver, a)]).collect();
        let vertex_paths = (0..quiver.vertex_count()).map(|x| index[&Path::trivial(x)]).collect();
        let n = paths.len();
        let mut product = vec![None; n * n];
        for (l, later) in paths.iter().enumerate() {
            for (e, earlier) in paths.iter().enumerate() {
                if let Some(p) = earlier.then(later) {
                    product[l * n + e] = Some(index[&p]);
                }
            }
        }
        Arc::new(PathAlgebra {
            quiver,
            field,
            paths,
            index,
            arrow_paths,
            vertex_paths,
            product,
        })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.paths.len()
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn path(&self, i: usize) -> &Path {
        &self.paths[i]
    }

    pub fn path_index(&self, p: &Path) -> usize {
        self.index[p]
    }

    pub fn arrow_path(&self, a: ArrowId) -> usize {
        self.arrow_paths[a]
    }

    pub fn vertex_path(&self, x: VertexId) -> usize {
        self.vertex_paths[x]
    }

    /// Index of `later · earlier` (earlier traversed first), if composable.
    pub fn concat(&self, later: usize, earlier: usize) -> Option<usize> {
        self.product[later * self.paths.len() + earlier]
    }

    pub fn path_name(&self, i: usize) -> String {
        self.quiver.path_name(&self.paths[i])
    }

    pub fn basis_element(&self, i: usize) -> Element {
        Element::monomial(i, self.field.one())
    }

    pub fn arrow_element(&self, a: ArrowId) -> Element {
        self.basis_element(self.arrow_paths[a])
    }

    pub fn identity_element(&self) -> Element {
        let mut e = Element::zero();
        for &v in &self.vertex_paths {
            e.add_term(v, &self.field.one());
        }
        e
    }

    /// Bilinear concatenation product `later · earlier`.
    pub fn mul(&self, later: &Element, earlier: &Element) -> Element {
        let mut out = Element::zero();
        for (&l, cl) in &later.terms {
            for (&e, ce) in &earlier.terms {
                if let Some(p) = self.concat(l, e) {
                    out.add_term(p, &(cl * ce));
                }
            }
        }
        out
    }

    pub fn check_field(&self, e: &Element) -> Result<(), PalgError> {
        match e.terms.values().find(|c| c.field() != self.field) {
            Some(c) => Err(PalgError::FieldMismatch {
                expected: self.field,
                found: c.field(),
            }),
            None => Ok(()),
        }
    }

    pub fn to_dense(&self, e: &Element) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.paths.len()];
        for (&i, c) in &e.terms {
            v[i] = c.clone();
        }
        v
    }

    pub fn from_dense(&self, v: &[Scalar]) -> Element {
        let mut e = Element::zero();
        for (i, c) in v.iter().enumerate() {
            e.add_term(i, c);
        }
        e
    }

    /// Human-readable form such as `fea + dcb` or `ca - 2*cb`.
    pub fn format(&self, e: &Element) -> String {
        if e.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (&i, c)) in e.terms.iter().enumerate() {
            let name = self.path_name(i);
            let neg = matches!(c, Scalar::Rational(r) if r < &num_rational::BigRational::from_integer(0.into()));
            let mag = if neg { -c } else { c.clone() };
            match (k, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            if mag.is_one() {
                s.push_str(&name);
            } else {
                let _ = write!(s, "{mag}*{name}");
            }
        }
        s
    }
}

/// A finitely supported linear combination of paths, keyed by path index.
/// No zero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Element {
    terms: BTreeMap<usize, Scalar>,
}

impl Element {
    pub fn zero() -> Element {
        Element::default()
    }

    pub fn monomial(path: usize, c: Scalar) -> Element {
        let mut e = Element::zero();
        e.add_term(path, &c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<usize, Scalar> {
        &self.terms
    }

    pub fn support(&self) -> Vec<usize> {
        self.terms.keys().copied().collect()
    }

    /// Greatest path in the support.
    pub fn leading(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }

    pub fn coeff(&self, path: usize) -> Option<&Scalar> {
        self.terms.get(&path)
    }

    pub fn add_term(&mut self, path: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&path) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&path);
                }
            }
            None => {
                self.terms.insert(path, c.clone());
            }
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut out = self.clone();
        for (&i, c) in &other.terms {
            out.add_term(i, c);
        }
        out
    }

    pub fn sub(&self, other: &Element) -> Element {
        let mut out = self.clone();
        for (&i, c) in &other.terms {
            out.add_term(i, &-c);
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Element {
        if s.is_zero() {
            return Element::zero();
        }
        Element {
            terms: self.terms.iter().map(|(&i, c)| (i, c * s)).collect(),
        }
    }
}

/// Diagnostics of the admissibility check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Admissibility {
    pub admissible: bool,
    /// Support paths of length < 2 found in the reduced basis.
    pub short_paths: Vec<usize>,
}

/// A two-sided ideal of kQ held through its canonical reduced basis.
///
/// `gb[j]` has leading (greatest) path `pivots[j]` with coefficient 1, no
/// other pivot in its support, and the pivots increase with `j`.
#[derive(Clone, Debug)]
pub struct IdealData {
    alg: Arc<PathAlgebra>,
    generators: Vec<Element>,
    gb: Vec<Element>,
    pivots: Vec<usize>,
    normal: Vec<usize>,
    normal_pos: Vec<Option<usize>>,
}

impl PartialEq for IdealData {
    fn eq(&self, other: &Self) -> bool {
        self.gb == other.gb && self.alg.quiver == other.alg.quiver && self.alg.field == other.alg.field
    }
}

impl Eq for IdealData {}

/// Basis of the smallest two-sided ideal containing `gens`, as dense vectors.
pub fn ideal_closure(alg: &PathAlgebra, gens: &[Element]) -> Vec<Vec<Scalar>> {
    let n = alg.dim();
    let mut vectors = Vec::new();
    for g in gens {
        for l in 0..n {
            for r in 0..n {
                let mut e = Element::zero();
                for (&i, c) in &g.terms {
                    if let Some(p) = alg.concat(i, r).and_then(|ir| alg.concat(l, ir)) {
                        e.add_term(p, c);
                    }
                }
                if !e.is_zero() {
                    vectors.push(alg.to_dense(&e));
                }
            }
        }
    }
    crate::exactla::Subspace::span(alg.field(), n, &vectors).basis().to_vec()
}

impl IdealData {
    /// Canonical reduced basis of the ideal generated by `gens`.
    pub fn groebner_basis(alg: &Arc<PathAlgebra>, gens: Vec<Element>) -> Result<IdealData, PalgError> {
        for g in &gens {
            alg.check_field(g)?;
        }
        let span = ideal_closure(alg, &gens);
        Ok(IdealData::from_span(alg, gens, &span))
    }

    pub fn zero(alg: &Arc<PathAlgebra>) -> IdealData {
        IdealData::from_span(alg, Vec::new(), &[])
    }

    /// Builds the reduced basis of a subspace already known to be an ideal.
    fn from_span(alg: &Arc<PathAlgebra>, generators: Vec<Element>, span: &[Vec<Scalar>]) -> IdealData {
        let n = alg.dim();
        let field = alg.field();
        let mut gb = Vec::new();
        let mut pivots = Vec::new();
        if !span.is_empty() {
            // Columns in descending path order: the RREF pivot of each row is its greatest path.
            let rows: Vec<Vec<Scalar>> = span.iter().map(|v| v.iter().rev().cloned().collect()).collect();
            let (reduced, cols) = Matrix::from_rows(field, rows).rref().expect("single field");
            for (r, &c) in reduced.row_vectors().iter().zip(&cols).rev() {
                let v: Vec<Scalar> = r.iter().rev().cloned().collect();
                gb.push(alg.from_dense(&v));
                pivots.push(n - 1 - c);
            }
        }
        let mut normal_pos = vec![None; n];
        let mut normal = Vec::new();
        for (i, slot) in normal_pos.iter_mut().enumerate() {
            if !pivots.contains(&i) {
                *slot = Some(normal.len());
                normal.push(i);
            }
        }
        IdealData {
            alg: Arc::clone(alg),
            generators,
            gb,
            pivots,
            normal,
            normal_pos,
        }
    }

    pub fn algebra(&self) -> &Arc<PathAlgebra> {
        &self.alg
    }

    pub fn quiver(&self) -> &Quiver {
        self.alg.quiver()
    }

    pub fn field(&self) -> Field {
        self.alg.field()
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn gb(&self) -> &[Element] {
        &self.gb
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Paths outside the pivot set, ascending; they index a basis of kQ/I.
    pub fn normal_paths(&self) -> &[usize] {
        &self.normal
    }

    /// Position of a path among the normal paths.
    pub fn normal_position(&self, path: usize) -> Option<usize> {
        self.normal_pos[path]
    }

    pub fn dim(&self) -> usize {
        self.gb.len()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gb.is_empty()
    }

    /// The unique representative of `a + I` supported on normal paths.
    pub fn normal_form(&self, a: &Element) -> Element {
        let mut out = a.clone();
        for (r, &p) in self.gb.iter().zip(&self.pivots) {
            if let Some(c) = a.coeff(p) {
                out = out.sub(&r.scale(c));
            }
        }
        out
    }

    /// Normal form as coordinates on the normal paths.
    pub fn normal_coords(&self, a: &Element) -> Vec<Scalar> {
        let mut v = vec![self.field().zero(); self.normal.len()];
        for (&i, c) in self.normal_form(a).terms() {
            v[self.normal_pos[i].expect("normal form is supported on normal paths")] = c.clone();
        }
        v
    }

    pub fn from_normal_coords(&self, v: &[Scalar]) -> Element {
        let mut e = Element::zero();
        for (k, c) in v.iter().enumerate() {
            e.add_term(self.normal[k], c);
        }
        e
    }

    pub fn contains(&self, a: &Element) -> bool {
        self.normal_form(a).is_zero()
    }

    /// Every reduced basis element is supported on paths of length at least two.
    /// The inclusion of a power of the arrow ideal is automatic for acyclic quivers.
    pub fn is_admissible(&self) -> Admissibility {
        let mut short: Vec<usize> = self
            .gb
            .iter()
            .flat_map(|r| r.support())
            .filter(|&p| self.alg.path(p).len() < 2)
            .collect();
        short.sort();
        short.dedup();
        Admissibility {
            admissible: short.is_empty(),
            short_paths: short,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.gb.iter().all(|r| r.terms().len() == 1)
    }

    /// Checks properties (i)–(iii) of the reduced basis.
    pub fn check_reduced_basis(&self) -> Result<(), String> {
        for (j, r) in self.gb.iter().enumerate() {
            let p = self.pivots[j];
            if r.leading() != Some(p) || !r.coeff(p).is_some_and(Scalar::is_one) {
                return Err(format!("element {j} does not lead with its pivot"));
            }
            for (k, &q) in self.pivots.iter().enumerate() {
                if k != j && r.coeff(q).is_some() {
                    return Err(format!("pivot {k} occurs in element {j}"));
                }
            }
        }
        if !self.pivots.windows(2).all(|w| w[0] < w[1]) {
            return Err("pivots are not increasing".into());
        }
        Ok(())
    }

    /// Property (iv): `r = Σ u_{i_j}*(r) r_j` for an element of the ideal.
    pub fn expands_over_basis(&self, r: &Element) -> bool {
        let mut acc = Element::zero();
        for (g, &p) in self.gb.iter().zip(&self.pivots) {
            if let Some(c) = r.coeff(p) {
                acc = acc.add(&g.scale(c));
            }
        }
        acc == *r
    }

    pub fn format_gb(&self) -> Vec<String> {
        self.gb.iter().map(|r| self.alg.format(r)).collect()
    }
}

/// An automorphism of kQ fixing every trivial path, given by arrow images.
#[derive(Clone, Debug)]
pub struct Automorphism {
    alg: Arc<PathAlgebra>,
    images: Vec<Element>,
}

impl PartialEq for Automorphism {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images
    }
}

impl Eq for Automorphism {}

impl Automorphism {
    pub fn new(alg: &Arc<PathAlgebra>, images: Vec<Element>) -> Result<Automorphism, PalgError> {
        let q = alg.quiver();
        if images.len() != q.arrow_count() {
            return Err(PalgError::ArrowCount {
                expected: q.arrow_count(),
                found: images.len(),
            });
        }
        for (a, img) in images.iter().enumerate() {
            alg.check_field(img)?;
            let arrow = Path::arrow(q, a);
            if img.terms().keys().any(|&p| !alg.path(p).is_parallel(&arrow)) {
                return Err(PalgError::NotParallel(q.arrow(a).name.clone()));
            }
        }
        let phi = Automorphism {
            alg: Arc::clone(alg),
            images,
        };
        if phi.arrow_block().inverse().is_none() {
            return Err(PalgError::Singular);
        }
        Ok(phi)
    }

    pub fn identity(alg: &Arc<PathAlgebra>) -> Automorphism {
        Automorphism {
            alg: Arc::clone(alg),
            images: (0..alg.quiver().arrow_count()).map(|a| alg.arrow_element(a)).collect(),
        }
    }

    /// `φ_{α,u,τ}`: `α ↦ α + τu`, other arrows fixed.
    pub fn transvection(alg: &Arc<PathAlgebra>, arrow: ArrowId, path: usize, tau: &Scalar) -> Result<Automorphism, PalgError> {
        let q = alg.quiver();
        let u = alg.path(path);
        if !u.is_parallel(&Path::arrow(q, arrow)) || u.arrows() == [arrow] {
            return Err(PalgError::NotBypass {
                arrow: q.arrow(arrow).name.clone(),
                path: alg.path_name(path),
            });
        }
        let mut phi = Automorphism::identity(alg);
        phi.images[arrow].add_term(path, tau);
        Ok(phi)
    }

    /// `α ↦ w_α α` for every arrow.
    pub fn dilatation(alg: &Arc<PathAlgebra>, weights: &[Scalar]) -> Result<Automorphism, PalgError> {
        let q = alg.quiver();
        if weights.len() != q.arrow_count() {
            return Err(PalgError::ArrowCount {
                expected: q.arrow_count(),
                found: weights.len(),
            });
        }
        let mut images = Vec::new();
        for (a, w) in weights.iter().enumerate() {
            if w.is_zero() {
                return Err(PalgError::ZeroWeight(q.arrow(a).name.clone()));
            }
            images.push(Element::monomial(alg.arrow_path(a), w.clone()));
        }
        Ok(Automorphism {
            alg: Arc::clone(alg),
            images,
        })
    }

    pub fn algebra(&self) -> &Arc<PathAlgebra> {
        &self.alg
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    pub fn image_of_arrow(&self, a: ArrowId) -> &Element {
        &self.images[a]
    }

    pub fn is_identity(&self) -> bool {
        *self == Automorphism::identity(&self.alg)
    }

    /// Image of a single path: the product of its arrow images.
    pub fn apply_path(&self, i: usize) -> Element {
        let p = self.alg.path(i);
        let mut acc = self.alg.basis_element(i);
        if p.is_trivial() {
            return acc;
        }
        for (k, &a) in p.arrows().iter().enumerate() {
            acc = if k == 0 {
                self.images[a].clone()
            } else {
                self.alg.mul(&self.images[a], &acc)
            };
        }
        acc
    }

    pub fn apply(&self, e: &Element) -> Element {
        let mut out = Element::zero();
        for (&i, c) in e.terms() {
            out = out.add(&self.apply_path(i).scale(c));
        }
        out
    }

    /// Matrix on the path basis; column `j` holds the image of path `j`.
    pub fn matrix(&self) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.alg.dim()).map(|j| self.alg.to_dense(&self.apply_path(j))).collect();
        Matrix::from_columns(self.alg.field(), self.alg.dim(), &cols)
    }

    /// Coefficient matrix of the length-one parts: entry (β, α) is the coefficient of β in φ(α).
    pub fn arrow_block(&self) -> Matrix {
        let m = self.alg.quiver().arrow_count();
        let f = self.alg.field();
        let mut out = Matrix::zeros(f, m, m);
        for a in 0..m {
            for b in 0..m {
                if let Some(c) = self.images[a].coeff(self.alg.arrow_path(b)) {
                    out.set(b, a, c.clone());
                }
            }
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            alg: Arc::clone(&self.alg),
            images: other.images.iter().map(|e| self.apply(e)).collect(),
        }
    }

    pub fn invert(&self) -> Result<Automorphism, PalgError> {
        if self.arrow_block().inverse().is_none() {
            return Err(PalgError::Singular);
        }
        // Block triangular by path length with invertible diagonal blocks.
        let inv = self.matrix().inverse().ok_or(PalgError::Singular)?;
        let images = (0..self.alg.quiver().arrow_count())
            .map(|a| self.alg.from_dense(&inv.column(self.alg.arrow_path(a))))
            .collect();
        Ok(Automorphism {
            alg: Arc::clone(&self.alg),
            images,
        })
    }

    /// `φ(I)`.
    pub fn apply_to_ideal(&self, ideal: &IdealData) -> IdealData {
        let span: Vec<Vec<Scalar>> = ideal.gb().iter().map(|r| self.alg.to_dense(&self.apply(r))).collect();
        let gens = ideal.generators().iter().map(|g| self.apply(g)).collect();
        IdealData::from_span(&self.alg, gens, &span)
    }

    pub fn describe(&self) -> BTreeMap<String, String> {
        let q = self.alg.quiver();
        (0..q.arrow_count())
            .map(|a| (q.arrow(a).name.clone(), self.alg.format(&self.images[a])))
            .collect()
    }
}
