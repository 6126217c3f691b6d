//! The algebra A = kQ/I on its normal-path basis, unitary and inner
//! derivations, and HH¹(A) = Der₀(A)/Int₀(A) with the commutator bracket.

use thiserror::Error;

use crate::exactla::{Field, Matrix, Scalar, Subspace};
use crate::palg::{Element, IdealData};
use crate::quiver::{ArrowId, Path, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Hh1Error {
    #[error("ideal is not admissible")]
    NotAdmissible,
    #[error("vector does not satisfy the Leibniz system")]
    NotDerivation,
    #[error("vector has length {found}, expected {expected}")]
    BadLength { expected: usize, found: usize },
}

/// kQ/I with basis the normal paths of I (trivial paths first).
#[derive(Clone, Debug)]
pub struct FDAlgebra {
    ideal: IdealData,
    // table[i * n + j] = coordinates of b_i · b_j
    table: Vec<Vec<Scalar>>,
}

impl FDAlgebra {
    pub fn new(ideal: &IdealData) -> Result<FDAlgebra, Hh1Error> {
        if !ideal.is_admissible().admissible {
            return Err(Hh1Error::NotAdmissible);
        }
        let alg = ideal.algebra();
        let basis = ideal.normal_paths();
        let n = basis.len();
        let mut table = Vec::with_capacity(n * n);
        for &l in basis {
            for &e in basis {
                let prod = match alg.concat(l, e) {
                    Some(p) => alg.basis_element(p),
                    None => Element::zero(),
                };
                table.push(ideal.normal_coords(&prod));
            }
        }
        Ok(FDAlgebra {
            ideal: ideal.clone(),
            table,
        })
    }

    pub fn ideal(&self) -> &IdealData {
        &self.ideal
    }

    pub fn field(&self) -> Field {
        self.ideal.field()
    }

    pub fn dim(&self) -> usize {
        self.ideal.normal_paths().len()
    }

    /// Path index of basis element `i`.
    pub fn basis_path(&self, i: usize) -> usize {
        self.ideal.normal_paths()[i]
    }

    pub fn path(&self, i: usize) -> &Path {
        self.ideal.algebra().path(self.basis_path(i))
    }

    pub fn basis_name(&self, i: usize) -> String {
        self.ideal.algebra().path_name(self.basis_path(i))
    }

    /// Coordinates of `b_i · b_j`.
    pub fn mul_basis(&self, i: usize, j: usize) -> &[Scalar] {
        &self.table[i * self.dim() + j]
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        let mut out = vec![self.field().zero(); n];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let c = x * y;
                for (o, t) in out.iter_mut().zip(self.mul_basis(i, j)) {
                    if !t.is_zero() {
                        *o += &(&c * t);
                    }
                }
            }
        }
        out
    }

    pub fn unit(&self) -> Vec<Scalar> {
        let f = self.field();
        (0..self.dim())
            .map(|i| if self.path(i).is_trivial() { f.one() } else { f.zero() })
            .collect()
    }

    /// Basis elements lying in `e_y A e_x`.
    pub fn block(&self, x: VertexId, y: VertexId) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.path(i).source() == x && self.path(i).target() == y)
            .collect()
    }

    /// Basis elements of the radical (nontrivial normal paths).
    pub fn radical(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| !self.path(i).is_trivial()).collect()
    }

    pub fn position_of_path(&self, path: usize) -> Option<usize> {
        self.ideal.normal_position(path)
    }

    /// Checks associativity on every basis triple and that Σ e_x is the unit.
    pub fn check_structure(&self) -> bool {
        let n = self.dim();
        let f = self.field();
        let e = |i: usize| {
            let mut v = vec![f.zero(); n];
            v[i] = f.one();
            v
        };
        let u = self.unit();
        for i in 0..n {
            if self.mul(&u, &e(i)) != e(i) || self.mul(&e(i), &u) != e(i) {
                return false;
            }
            for j in 0..n {
                let ij = self.mul_basis(i, j).to_vec();
                for k in 0..n {
                    let jk = self.mul_basis(j, k).to_vec();
                    if self.mul(&ij, &e(k)) != self.mul(&e(i), &jk) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Coordinates of a unitary derivation: one per pair (arrow α, normal path
/// parallel to α), holding the coefficient of that path in d(α).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerCoords {
    pub entries: Vec<(ArrowId, usize)>,
}

impl DerCoords {
    pub fn new(alg: &FDAlgebra) -> DerCoords {
        let q = alg.ideal().quiver();
        let mut entries = Vec::new();
        for a in 0..q.arrow_count() {
            let arrow = Path::arrow(q, a);
            for i in 0..alg.dim() {
                if alg.path(i).is_parallel(&arrow) {
                    entries.push((a, alg.basis_path(i)));
                }
            }
        }
        DerCoords { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn index(&self, arrow: ArrowId, path: usize) -> Option<usize> {
        self.entries.iter().position(|&e| e == (arrow, path))
    }
}

/// HH¹(A) with its coordinate spaces.
#[derive(Clone, Debug)]
pub struct HH1Space {
    alg: FDAlgebra,
    coords: DerCoords,
    der0: Subspace,
    int0: Subspace,
    int0_generators: Vec<Vec<Scalar>>,
    classes: Subspace,
}

/// A class in HH¹, held by its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HH1Class {
    pub vector: Vec<Scalar>,
}

impl HH1Class {
    pub fn is_zero(&self) -> bool {
        self.vector.iter().all(Scalar::is_zero)
    }
}

impl HH1Space {
    pub fn new(alg: &FDAlgebra) -> HH1Space {
        let coords = DerCoords::new(alg);
        let f = alg.field();
        let m = coords.len();
        let der0_basis = der0_basis(alg, &coords);
        let der0 = Subspace::span(f, m, &der0_basis);
        let int0_generators = int0_generators(alg, &coords);
        let int0 = Subspace::span(f, m, &int0_generators);
        let reps: Vec<Vec<Scalar>> = der0.basis().iter().map(|v| int0.reduce(v)).collect();
        let classes = Subspace::span(f, m, &reps);
        HH1Space {
            alg: alg.clone(),
            coords,
            der0,
            int0,
            int0_generators,
            classes,
        }
    }

    pub fn algebra(&self) -> &FDAlgebra {
        &self.alg
    }

    pub fn field(&self) -> Field {
        self.alg.field()
    }

    pub fn coords(&self) -> &DerCoords {
        &self.coords
    }

    pub fn der0(&self) -> &Subspace {
        &self.der0
    }

    pub fn int0(&self) -> &Subspace {
        &self.int0
    }

    /// δ_{e_i} for every vertex i, in vertex order.
    pub fn int0_generators(&self) -> &[Vec<Scalar>] {
        &self.int0_generators
    }

    /// The space of canonical representatives, of dimension dim HH¹.
    pub fn classes(&self) -> &Subspace {
        &self.classes
    }

    pub fn dim(&self) -> usize {
        self.classes.dim()
    }

    pub fn zero_class(&self) -> HH1Class {
        HH1Class {
            vector: vec![self.field().zero(); self.coords.len()],
        }
    }

    /// Canonical basis of HH¹.
    pub fn basis(&self) -> Vec<HH1Class> {
        self.classes.basis().iter().map(|v| HH1Class { vector: v.clone() }).collect()
    }

    pub fn class_of(&self, d: &[Scalar]) -> Result<HH1Class, Hh1Error> {
        if d.len() != self.coords.len() {
            return Err(Hh1Error::BadLength {
                expected: self.coords.len(),
                found: d.len(),
            });
        }
        if !self.der0.contains(d) {
            return Err(Hh1Error::NotDerivation);
        }
        Ok(HH1Class {
            vector: self.int0.reduce(d),
        })
    }

    pub fn is_inner(&self, d: &[Scalar]) -> bool {
        self.int0.contains(d)
    }

    /// Derivation vector from arrow images given as elements of kQ.
    pub fn vector_from_images(&self, images: &[Element]) -> Vec<Scalar> {
        let f = self.field();
        let ideal = self.alg.ideal();
        let mut v = vec![f.zero(); self.coords.len()];
        for (a, img) in images.iter().enumerate() {
            let nf = ideal.normal_form(img);
            for (&p, c) in nf.terms() {
                let k = self.coords.index(a, p).expect("image parallel to its arrow");
                v[k] = c.clone();
            }
        }
        v
    }

    /// d(α) as an element of kQ supported on normal paths.
    pub fn arrow_image(&self, d: &[Scalar], a: ArrowId) -> Element {
        let mut e = Element::zero();
        for (k, &(arrow, p)) in self.coords.entries.iter().enumerate() {
            if arrow == a {
                e.add_term(p, &d[k]);
            }
        }
        e
    }

    /// Extension to kQ by the Leibniz rule, reduced to normal form.
    pub fn apply_to_path(&self, d: &[Scalar], path: usize) -> Element {
        let ideal = self.alg.ideal();
        let alg = ideal.algebra();
        let p = alg.path(path);
        let mut acc = Element::zero();
        for k in 0..p.len() {
            let before = alg.basis_element(alg.path_index(&p.segment(alg.quiver(), 0, k)));
            let after = alg.basis_element(alg.path_index(&p.segment(alg.quiver(), k + 1, p.len())));
            let img = self.arrow_image(d, p.arrows()[k]);
            acc = acc.add(&alg.mul(&after, &alg.mul(&img, &before)));
        }
        ideal.normal_form(&acc)
    }

    /// Matrix of the derivation on the basis of A.
    pub fn matrix(&self, d: &[Scalar]) -> Matrix {
        let n = self.alg.dim();
        let ideal = self.alg.ideal();
        let cols: Vec<Vec<Scalar>> = (0..n)
            .map(|j| ideal.normal_coords(&self.apply_to_path(d, self.alg.basis_path(j))))
            .collect();
        Matrix::from_columns(self.field(), n, &cols)
    }

    /// Reads arrow columns back from a matrix on the basis of A.
    pub fn vector_from_matrix(&self, m: &Matrix) -> Vec<Scalar> {
        self.coords
            .entries
            .iter()
            .map(|&(a, p)| {
                let col = self.alg.position_of_path(self.alg.ideal().algebra().arrow_path(a)).unwrap();
                let row = self.alg.position_of_path(p).unwrap();
                m.get(row, col).clone()
            })
            .collect()
    }

    /// Commutator of representatives, then its class.
    pub fn bracket(&self, f: &HH1Class, g: &HH1Class) -> HH1Class {
        let c = self.matrix(&f.vector).commutator(&self.matrix(&g.vector));
        self.class_of(&self.vector_from_matrix(&c)).expect("commutator of derivations is a derivation")
    }

    /// Leibniz rule on every pair of basis elements, and block preservation.
    pub fn check_leibniz(&self, d: &[Scalar]) -> bool {
        let m = self.matrix(d);
        let n = self.alg.dim();
        let f = self.field();
        for j in 0..n {
            let pj = self.alg.path(j);
            for i in 0..n {
                let c = m.get(i, j);
                if !c.is_zero() && !self.alg.path(i).is_parallel(pj) {
                    return false;
                }
            }
        }
        let col = |j: usize| m.column(j);
        let unit = |i: usize| {
            let mut v = vec![f.zero(); n];
            v[i] = f.one();
            v
        };
        for i in 0..n {
            for j in 0..n {
                let lhs = m.mul_vec(self.alg.mul_basis(i, j));
                let r1 = self.alg.mul(&unit(i), &col(j));
                let r2 = self.alg.mul(&col(i), &unit(j));
                let rhs: Vec<Scalar> = r1.iter().zip(&r2).map(|(x, y)| x + y).collect();
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    pub fn class_from_coeffs(&self, coeffs: &[Scalar]) -> HH1Class {
        let f = self.field();
        let mut v = vec![f.zero(); self.coords.len()];
        for (c, b) in coeffs.iter().zip(self.classes.basis()) {
            for (o, x) in v.iter_mut().zip(b) {
                *o += &(c * x);
            }
        }
        HH1Class { vector: v }
    }

    pub fn describe(&self, d: &[Scalar]) -> Vec<(String, String)> {
        let q = self.alg.ideal().quiver();
        let alg = self.alg.ideal().algebra();
        (0..q.arrow_count())
            .map(|a| (q.arrow(a).name.clone(), alg.format(&self.arrow_image(d, a))))
            .collect()
    }
}

/// Solves nf(D(r_j)) = 0 for every reduced basis element r_j.
fn der0_basis(alg: &FDAlgebra, coords: &DerCoords) -> Vec<Vec<Scalar>> {
    let ideal = alg.ideal();
    let palg = ideal.algebra();
    let q = palg.quiver();
    let f = alg.field();
    let m = coords.len();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for r in ideal.gb() {
        // column k: nf of the Leibniz expansion of r with only coordinate k set
        let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(m);
        for &(arrow, target) in &coords.entries {
            let mut acc = Element::zero();
            for (&p, c) in r.terms() {
                let path = palg.path(p);
                for (k, &a) in path.arrows().iter().enumerate() {
                    if a != arrow {
                        continue;
                    }
                    let before = palg.path_index(&path.segment(q, 0, k));
                    let after = palg.path_index(&path.segment(q, k + 1, path.len()));
                    if let Some(x) = palg.concat(target, before).and_then(|tb| palg.concat(after, tb)) {
                        acc.add_term(x, c);
                    }
                }
            }
            cols.push(ideal.normal_coords(&acc));
        }
        let height = ideal.normal_paths().len();
        for row in 0..height {
            let eq: Vec<Scalar> = cols.iter().map(|c| c[row].clone()).collect();
            if eq.iter().any(|x| !x.is_zero()) {
                rows.push(eq);
            }
        }
    }
    if rows.is_empty() {
        return (0..m)
            .map(|k| {
                let mut v = vec![f.zero(); m];
                v[k] = f.one();
                v
            })
            .collect();
    }
    Matrix::from_rows(f, rows).nullspace()
}

/// δ_{e_i}(α) = ([y = i] − [x = i]) α for α: x → y.
fn int0_generators(alg: &FDAlgebra, coords: &DerCoords) -> Vec<Vec<Scalar>> {
    let ideal = alg.ideal();
    let palg = ideal.algebra();
    let q = palg.quiver();
    let f = alg.field();
    (0..q.vertex_count())
        .map(|i| {
            let mut v = vec![f.zero(); coords.len()];
            for a in 0..q.arrow_count() {
                let ar = q.arrow(a);
                let mut c = f.zero();
                if ar.target == i {
                    c += &f.one();
                }
                if ar.source == i {
                    c -= &f.one();
                }
                if let Some(k) = coords.index(a, palg.arrow_path(a)) {
                    v[k] = c;
                }
            }
            v
        })
        .collect()
}
