//! The maps θ_ν from additive characters of π₁ into HH¹, their images,
//! diagonalizability of classes and sets, adapted presentations and the
//! maximality test for diagonalizable subalgebras.

use thiserror::Error;

use crate::exactla::{Field, Matrix, Scalar, Subspace};
use crate::hh1::{FDAlgebra, HH1Class, HH1Space, Hh1Error};
use crate::palg::{Automorphism, Element, IdealData, PalgError};
use crate::pi1::{hom_space, homotopy_pairs, HomSpace};
use crate::quiver::{SpanningTree, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThetaError {
    #[error(transparent)]
    Hh1(#[from] Hh1Error),
    #[error(transparent)]
    Palg(#[from] PalgError),
    #[error("weights violate the pair equations of the kernel")]
    NotCharacter,
    #[error("not diagonalizable over the ground field: block {source_vertex} -> {target_vertex}")]
    NotDiagonalizable { source_vertex: String, target_vertex: String },
    #[error("classes do not commute")]
    NotCommuting,
    #[error("basis elements cannot be matched to arrows")]
    Matching,
    #[error("kernel of the presentation is not admissible")]
    NotAdmissible,
}

/// The algebra A = kQ/I₀ every presentation is measured against.
#[derive(Clone, Debug)]
pub struct Setting {
    pub reference: IdealData,
    pub hh1: HH1Space,
}

impl Setting {
    pub fn new(reference: &IdealData) -> Result<Setting, ThetaError> {
        let alg = FDAlgebra::new(reference)?;
        Ok(Setting {
            reference: reference.clone(),
            hh1: HH1Space::new(&alg),
        })
    }

    pub fn field(&self) -> Field {
        self.reference.field()
    }

    pub fn algebra(&self) -> &FDAlgebra {
        self.hh1.algebra()
    }

    pub fn ambient(&self) -> usize {
        self.hh1.coords().len()
    }

    /// Blocks `(x, y)` with `e_y 𝔯 e_x` nonzero, and their basis positions.
    pub fn radical_blocks(&self) -> Vec<(VertexId, VertexId, Vec<usize>)> {
        let a = self.algebra();
        let n = self.reference.quiver().vertex_count();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x == y {
                    continue;
                }
                let b = a.block(x, y);
                if !b.is_empty() {
                    out.push((x, y, b));
                }
            }
        }
        out
    }

    pub fn zero_subspace(&self) -> Subspace {
        Subspace::zero(self.field(), self.ambient())
    }

    pub fn span(&self, classes: &[HH1Class]) -> Subspace {
        let v: Vec<Vec<Scalar>> = classes.iter().map(|c| c.vector.clone()).collect();
        Subspace::span(self.field(), self.ambient(), &v)
    }
}

/// ν = ν₀ ∘ χ, where ν₀ is the natural projection onto kQ/I₀.
#[derive(Clone, Debug)]
pub struct Presentation {
    chi: Automorphism,
    chi_inv: Automorphism,
    kernel: IdealData,
}

impl Presentation {
    pub fn natural(s: &Setting) -> Presentation {
        let id = Automorphism::identity(s.reference.algebra());
        Presentation {
            chi: id.clone(),
            chi_inv: id,
            kernel: s.reference.clone(),
        }
    }

    pub fn from_automorphism(s: &Setting, chi: Automorphism) -> Result<Presentation, ThetaError> {
        let chi_inv = chi.invert()?;
        let kernel = chi_inv.apply_to_ideal(&s.reference);
        if !kernel.is_admissible().admissible {
            return Err(ThetaError::NotAdmissible);
        }
        Ok(Presentation { chi, chi_inv, kernel })
    }

    /// ν ∘ ψ.
    pub fn then_automorphism(&self, s: &Setting, psi: &Automorphism) -> Result<Presentation, ThetaError> {
        Presentation::from_automorphism(s, self.chi.compose(psi))
    }

    pub fn chi(&self) -> &Automorphism {
        &self.chi
    }

    pub fn kernel(&self) -> &IdealData {
        &self.kernel
    }

    /// ν(u) in coordinates of A.
    pub fn image_coords(&self, s: &Setting, e: &Element) -> Vec<Scalar> {
        s.reference.normal_coords(&self.chi.apply(e))
    }

    /// Basis adapted to ν: images of the normal paths of Ker ν.
    pub fn adapted_basis(&self, s: &Setting) -> Vec<Vec<Scalar>> {
        let alg = self.kernel.algebra();
        self.kernel
            .normal_paths()
            .iter()
            .map(|&p| self.image_coords(s, &alg.basis_element(p)))
            .collect()
    }

    /// The automorphism χψχ⁻¹ of kQ inducing ψ̄ on A, where ψ̄ ∘ (ν ∘ ψ) = (ν ∘ ψ) ∘ ψ.
    pub fn induced(&self, psi: &Automorphism) -> Automorphism {
        self.chi.compose(psi).compose(&self.chi_inv)
    }
}

/// Class of the derivation ν(u) ↦ t_u ν(u).
pub fn theta(s: &Setting, nu: &Presentation, t: &[Scalar]) -> Result<HH1Class, ThetaError> {
    let kernel = &nu.kernel;
    let alg = kernel.algebra();
    let f = s.field();
    for (u, v) in homotopy_pairs(kernel) {
        if HomSpace::weight_of_path(t, alg.path(u), f) != HomSpace::weight_of_path(t, alg.path(v), f) {
            return Err(ThetaError::NotCharacter);
        }
    }
    // ν₀(α) = ν(χ⁻¹(α)) = Σ c_p ν(p), so d(ν₀(α)) = Σ c_p t_p ν₀(χ(p)).
    let q = alg.quiver();
    let images: Vec<Element> = (0..q.arrow_count())
        .map(|a| {
            let mut img = Element::zero();
            for (&p, c) in nu.chi_inv.image_of_arrow(a).terms() {
                let w = HomSpace::weight_of_path(t, alg.path(p), f);
                if !w.is_zero() {
                    img = img.add(&nu.chi.apply_path(p).scale(&(c * &w)));
                }
            }
            img
        })
        .collect();
    let v = s.hh1.vector_from_images(&images);
    Ok(s.hh1.class_of(&v)?)
}

pub fn image_theta_with_tree(s: &Setting, nu: &Presentation, tree: &SpanningTree) -> Result<Subspace, ThetaError> {
    let h = hom_space(&nu.kernel, tree);
    let classes = h.basis.iter().map(|t| theta(s, nu, t)).collect::<Result<Vec<_>, _>>()?;
    Ok(s.span(&classes))
}

pub fn image_theta(s: &Setting, nu: &Presentation) -> Result<Subspace, ThetaError> {
    image_theta_with_tree(s, nu, &nu.kernel.quiver().default_tree())
}

fn block_matrix(m: &Matrix, idx: &[usize]) -> Matrix {
    m.principal_submatrix(idx)
}

/// First block whose restriction is not diagonalizable over k.
pub fn non_diagonal_block(s: &Setting, f: &HH1Class) -> Option<(VertexId, VertexId)> {
    let m = s.hh1.matrix(&f.vector);
    for (x, y, idx) in s.radical_blocks() {
        let b = block_matrix(&m, &idx);
        let mp = b.minimal_polynomial().expect("square single-field block");
        if !mp.roots_over_field().expect("nonzero polynomial").is_squarefree_split() {
            return Some((x, y));
        }
    }
    None
}

pub fn is_diagonalizable_class(s: &Setting, f: &HH1Class) -> bool {
    non_diagonal_block(s, f).is_none()
}

fn not_diag_error(s: &Setting, (x, y): (VertexId, VertexId)) -> ThetaError {
    let q = s.reference.quiver();
    ThetaError::NotDiagonalizable {
        source_vertex: q.vertex_name(x).to_string(),
        target_vertex: q.vertex_name(y).to_string(),
    }
}

pub fn commute(s: &Setting, fs: &[HH1Class]) -> bool {
    (0..fs.len()).all(|i| (i + 1..fs.len()).all(|j| s.hh1.bracket(&fs[i], &fs[j]).is_zero()))
}

pub fn is_diagonalizable_set(s: &Setting, fs: &[HH1Class]) -> bool {
    fs.iter().all(|f| is_diagonalizable_class(s, f)) && commute(s, fs)
}

pub fn subspace_classes(s: &Subspace) -> Vec<HH1Class> {
    s.basis().iter().map(|v| HH1Class { vector: v.clone() }).collect()
}

/// A basis of A made of the idempotents and, per block `e_y 𝔯 e_x`, a basis
/// of common eigenvectors. Vectors are coordinates on the normal paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialBasis {
    pub idempotents: Vec<Vec<Scalar>>,
    pub blocks: Vec<(VertexId, VertexId, Vec<Vec<Scalar>>)>,
}

impl SpecialBasis {
    pub fn elements(&self) -> Vec<Vec<Scalar>> {
        let mut out = self.idempotents.clone();
        for (_, _, vs) in &self.blocks {
            out.extend(vs.iter().cloned());
        }
        out
    }

    /// Every class is diagonal: each basis vector is an eigenvector of its
    /// representative, and the vectors form a basis.
    pub fn diagonalizes(&self, s: &Setting, fs: &[HH1Class]) -> bool {
        let elems = self.elements();
        let n = s.algebra().dim();
        if elems.len() != n || Matrix::from_rows(s.field(), elems.clone()).rank() != n {
            return false;
        }
        fs.iter().all(|f| {
            let m = s.hh1.matrix(&f.vector);
            elems.iter().all(|v| eigenvalue(&m, v).is_some())
        })
    }
}

/// λ with M v = λ v, if v is an eigenvector.
pub fn eigenvalue(m: &Matrix, v: &[Scalar]) -> Option<Scalar> {
    let mv = m.mul_vec(v);
    let k = v.iter().position(|x| !x.is_zero())?;
    let lambda = &mv[k] * &v[k].inv().unwrap();
    mv.iter().zip(v).all(|(a, b)| *a == &lambda * b).then_some(lambda)
}

/// Simultaneous eigenbasis by successive eigenspace refinement.
pub fn common_eigenbasis(s: &Setting, fs: &[HH1Class]) -> Result<SpecialBasis, ThetaError> {
    for f in fs {
        if let Some(b) = non_diagonal_block(s, f) {
            return Err(not_diag_error(s, b));
        }
    }
    if !commute(s, fs) {
        return Err(ThetaError::NotCommuting);
    }
    let field = s.field();
    let a = s.algebra();
    let n = a.dim();
    let unit = |i: usize| {
        let mut v = vec![field.zero(); n];
        v[i] = field.one();
        v
    };
    let mats: Vec<Matrix> = fs.iter().map(|f| s.hh1.matrix(&f.vector)).collect();
    let idempotents = (0..n).filter(|&i| a.path(i).is_trivial()).map(unit).collect();
    let mut blocks = Vec::new();
    for (x, y, idx) in s.radical_blocks() {
        let d = idx.len();
        // Subspaces of the block, each as columns in block coordinates.
        let mut parts: Vec<Vec<Vec<Scalar>>> = vec![(0..d)
            .map(|i| {
                let mut v = vec![field.zero(); d];
                v[i] = field.one();
                v
            })
            .collect()];
        for m in &mats {
            let b = block_matrix(m, &idx);
            let roots = b.minimal_polynomial().unwrap().roots_over_field().unwrap().distinct();
            let mut next = Vec::new();
            for w in &parts {
                let wm = Matrix::from_columns(field, d, w);
                for lambda in &roots {
                    let shifted = b.sub(&Matrix::identity(field, d).scale(lambda));
                    let kernel = shifted.mul(&wm).nullspace();
                    if kernel.is_empty() {
                        continue;
                    }
                    next.push(kernel.iter().map(|c| wm.mul_vec(c)).collect::<Vec<_>>());
                }
            }
            parts = next;
        }
        let vectors: Vec<Vec<Scalar>> = parts
            .into_iter()
            .flatten()
            .map(|bv| {
                let mut v = vec![field.zero(); n];
                for (k, &i) in idx.iter().enumerate() {
                    v[i] = bv[k].clone();
                }
                v
            })
            .collect();
        assert_eq!(vectors.len(), d, "eigenspaces of commuting diagonalizable maps fill the block");
        blocks.push((x, y, vectors));
    }
    let basis = SpecialBasis { idempotents, blocks };
    assert!(basis.diagonalizes(s, fs));
    Ok(basis)
}

/// A presentation with ν(α) ∈ B for every arrow: per block, arrows take the
/// first basis elements whose residues modulo 𝔯² are independent.
pub fn adapted_presentation(s: &Setting, b: &SpecialBasis) -> Result<Presentation, ThetaError> {
    let a = s.algebra();
    let palg = s.reference.algebra();
    let q = palg.quiver();
    let field = s.field();
    let mut images = vec![Element::zero(); q.arrow_count()];
    for (x, y, vectors) in &b.blocks {
        let arrows: Vec<usize> = (0..q.arrow_count())
            .filter(|&al| q.arrow(al).source == *x && q.arrow(al).target == *y)
            .collect();
        if arrows.is_empty() {
            continue;
        }
        let positions: Vec<usize> = arrows
            .iter()
            .map(|&al| a.position_of_path(palg.arrow_path(al)).ok_or(ThetaError::Matching))
            .collect::<Result<_, _>>()?;
        let mut chosen: Vec<Vec<Scalar>> = Vec::new();
        let mut picks = Vec::new();
        for v in vectors {
            if picks.len() == arrows.len() {
                break;
            }
            let residue: Vec<Scalar> = positions.iter().map(|&p| v[p].clone()).collect();
            let mut trial = chosen.clone();
            trial.push(residue);
            if Matrix::from_rows(field, trial.clone()).rank() == trial.len() {
                chosen = trial;
                picks.push(v.clone());
            }
        }
        if picks.len() != arrows.len() {
            return Err(ThetaError::Matching);
        }
        for (&al, v) in arrows.iter().zip(picks) {
            images[al] = s.reference.from_normal_coords(&v);
        }
    }
    let chi = Automorphism::new(palg, images).map_err(|_| ThetaError::Matching)?;
    Presentation::from_automorphism(s, chi)
}

/// For a diagonalizable commuting set, a presentation whose θ-image contains
/// it, with the tree-normalized characters realizing each class.
pub fn realize_in_image(s: &Setting, fs: &[HH1Class]) -> Result<(Presentation, Vec<Vec<Scalar>>), ThetaError> {
    let basis = common_eigenbasis(s, fs)?;
    let nu = adapted_presentation(s, &basis)?;
    let palg = s.reference.algebra();
    let q = palg.quiver();
    let tree = q.default_tree();
    let field = s.field();
    let mut chars = Vec::new();
    for f in fs {
        let m = s.hh1.matrix(&f.vector);
        let raw: Vec<Scalar> = (0..q.arrow_count())
            .map(|al| {
                let v = nu.image_coords(s, &palg.arrow_element(al));
                eigenvalue(&m, &v).expect("adapted presentation sends arrows to eigenvectors")
            })
            .collect();
        // t'_α = t_α − t_{γ_y} + t_{γ_x}
        let g: Vec<Scalar> = (0..q.vertex_count())
            .map(|x| HomSpace::weight_of_walk(&raw, tree.gamma(x), field))
            .collect();
        let t: Vec<Scalar> = (0..q.arrow_count())
            .map(|al| {
                let ar = q.arrow(al);
                &(&raw[al] - &g[ar.target]) + &g[ar.source]
            })
            .collect();
        let back = theta(s, &nu, &t)?;
        assert_eq!(&back, f, "θ of the recovered character is the class");
        chars.push(t);
    }
    Ok((nu, chars))
}

/// Centralizer of a set of classes inside HH¹.
pub fn centralizer(s: &Setting, fs: &[HH1Class]) -> Subspace {
    let basis = s.hh1.basis();
    let field = s.field();
    if basis.is_empty() {
        return s.zero_subspace();
    }
    // Column i of the system: brackets of basis element i with every f.
    let cols: Vec<Vec<Scalar>> = basis
        .iter()
        .map(|h| fs.iter().flat_map(|f| s.hh1.bracket(h, f).vector).collect())
        .collect();
    let height = cols[0].len();
    let solutions = if height == 0 {
        (0..basis.len())
            .map(|i| {
                let mut v = vec![field.zero(); basis.len()];
                v[i] = field.one();
                v
            })
            .collect()
    } else {
        Matrix::from_columns(field, height, &cols).nullspace()
    };
    let vectors: Vec<HH1Class> = solutions.iter().map(|c| s.hh1.class_from_coeffs(c)).collect();
    s.span(&vectors)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MaxBudget {
    pub max_candidates: usize,
    /// Coefficient bound of the search grid over ℚ.
    pub rational_grid: i64,
}

impl Default for MaxBudget {
    fn default() -> Self {
        MaxBudget {
            max_candidates: 100_000,
            rational_grid: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Maximality {
    Yes,
    /// `witness` is diagonalizable, commutes with S and lies outside S.
    No { witness: HH1Class },
    Unknown { checked: usize },
}

/// Projective coefficient vectors (first nonzero entry 1) over `values`.
pub(crate) fn projective_candidates(field: Field, dim: usize, values: &[Scalar], limit: usize) -> (Vec<Vec<Scalar>>, bool) {
    let mut out = Vec::new();
    for lead in 0..dim {
        let free = dim - lead - 1;
        let total = values.len().checked_pow(free as u32).unwrap_or(usize::MAX);
        for k in 0..total {
            if out.len() >= limit {
                return (out, false);
            }
            let mut v = vec![field.zero(); dim];
            v[lead] = field.one();
            let mut rest = k;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = values[rest % values.len()].clone();
                rest /= values.len();
            }
            out.push(v);
        }
    }
    (out, true)
}

pub fn is_maximal_diagonalizable(s: &Setting, sub: &Subspace, budget: MaxBudget) -> Result<Maximality, ThetaError> {
    let gens = subspace_classes(sub);
    for f in &gens {
        if let Some(b) = non_diagonal_block(s, f) {
            return Err(not_diag_error(s, b));
        }
    }
    if !commute(s, &gens) {
        return Err(ThetaError::NotCommuting);
    }
    let c = centralizer(s, &gens);
    if sub.contains_subspace(&c) {
        return Ok(Maximality::Yes);
    }
    let field = s.field();
    let complement_vecs: Vec<Vec<Scalar>> = c.basis().iter().map(|v| sub.reduce(v)).collect();
    let complement = Subspace::span(field, s.ambient(), &complement_vecs);
    let dim = complement.dim();
    let (values, exhaustive_values) = match field.elements() {
        Some(all) => (all, true),
        None => {
            let g = budget.rational_grid.max(1);
            ((-g..=g).map(|x| field.from_i64(x)).collect(), false)
        }
    };
    let (candidates, complete) = projective_candidates(field, dim, &values, budget.max_candidates);
    for coeffs in &candidates {
        let mut h = vec![field.zero(); s.ambient()];
        for (cf, b) in coeffs.iter().zip(complement.basis()) {
            for (o, x) in h.iter_mut().zip(b) {
                *o += &(cf * x);
            }
        }
        let h = HH1Class { vector: h };
        if is_diagonalizable_class(s, &h) {
            return Ok(Maximality::No { witness: h });
        }
    }
    if complete && exhaustive_values {
        Ok(Maximality::Yes)
    } else {
        Ok(Maximality::Unknown {
            checked: candidates.len(),
        })
    }
}

/// Matrix of the automorphism of A induced by an automorphism of kQ fixing I₀.
pub fn induced_matrix(s: &Setting, psi: &Automorphism) -> Matrix {
    let a = s.algebra();
    let n = a.dim();
    let cols: Vec<Vec<Scalar>> = (0..n)
        .map(|j| s.reference.normal_coords(&psi.apply_path(a.basis_path(j))))
        .collect();
    Matrix::from_columns(s.field(), n, &cols)
}

/// ψ̄_*(f) = ψ̄ ∘ d ∘ ψ̄⁻¹, re-canonicalized.
pub fn pushforward(s: &Setting, psi: &Automorphism, f: &HH1Class) -> HH1Class {
    let p = induced_matrix(s, psi);
    let p_inv = p.inverse().expect("automorphism of A");
    let m = p.mul(&s.hh1.matrix(&f.vector)).mul(&p_inv);
    s.hh1
        .class_of(&s.hh1.vector_from_matrix(&m))
        .expect("conjugate of a derivation is a derivation")
}

pub fn pushforward_subspace(s: &Setting, psi: &Automorphism, sub: &Subspace) -> Subspace {
    let imgs: Vec<HH1Class> = subspace_classes(sub).iter().map(|f| pushforward(s, psi, f)).collect();
    s.span(&imgs)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::hh1::tests::{der, kronecker};
    use crate::palg::tests::{el, twin_ideal, ideal};
    use crate::palg::PathAlgebra;
    use crate::quiver::tests::{fork, twin};
    use crate::quiver::{Path, Quiver};
    use proptest::prelude::*;
    use std::sync::Arc;

    fn twin_psi(alg: &Arc<PathAlgebra>) -> Automorphism {
        let q = alg.quiver();
        let one = alg.field().one();
        let cb = alg.path_index(&Path::from_written(q, &["c", "b"]).unwrap());
        let fe = alg.path_index(&Path::from_written(q, &["f", "e"]).unwrap());
        let pa = Automorphism::transvection(alg, q.arrow_id("a").unwrap(), cb, &one).unwrap();
        let pd = Automorphism::transvection(alg, q.arrow_id("d").unwrap(), fe, &one).unwrap();
        pa.compose(&pd)
    }

    fn twin_setting() -> Setting {
        let alg = PathAlgebra::new(twin(), Field::prime(2).unwrap());
        Setting::new(&twin_ideal(&alg)).unwrap()
    }

    fn t_ad(s: &Setting) -> Vec<Scalar> {
        let q = s.reference.quiver();
        let f = s.field();
        let mut t = vec![f.zero(); 6];
        t[q.arrow_id("a").unwrap()] = f.one();
        t[q.arrow_id("d").unwrap()] = f.one();
        t
    }

    #[test]
    fn theta_examples() {
        let s = twin_setting();
        let nu = Presentation::natural(&s);
        let t = t_ad(&s);
        let d1 = der(&s.hh1, &[("a", &[(1, "a")]), ("d", &[(1, "d")])]);
        let d2 = der(&s.hh1, &[("a", &[(1, "a"), (1, "cb")]), ("d", &[(1, "d"), (1, "fe")])]);
        assert_eq!(theta(&s, &nu, &t).unwrap(), s.hh1.class_of(&d1).unwrap());
        let zero = vec![s.field().zero(); 6];
        assert!(theta(&s, &nu, &zero).unwrap().is_zero());
        let mu = nu.then_automorphism(&s, &twin_psi(s.reference.algebra())).unwrap();
        assert_eq!(mu.kernel(), &s.reference);
        let got = theta(&s, &mu, &t).unwrap();
        assert_eq!(got, s.hh1.class_of(&d2).unwrap());
        assert_ne!(got, theta(&s, &nu, &t).unwrap());
        let mut bad = zero.clone();
        bad[s.reference.quiver().arrow_id("a").unwrap()] = s.field().one();
        assert_eq!(theta(&s, &nu, &bad), Err(ThetaError::NotCharacter));
    }

    #[test]
    fn image_examples() {
        for f in [Field::Rational, Field::prime(3).unwrap()] {
            let alg = PathAlgebra::new(kronecker(), f);
            let s = Setting::new(&IdealData::zero(&alg)).unwrap();
            assert_eq!(s.hh1.dim(), 3);
            assert_eq!(image_theta(&s, &Presentation::natural(&s)).unwrap().dim(), 1);
        }
        let s = twin_setting();
        let nu = Presentation::natural(&s);
        let mu = nu.then_automorphism(&s, &twin_psi(s.reference.algebra())).unwrap();
        let i_nu = image_theta(&s, &nu).unwrap();
        let i_mu = image_theta(&s, &mu).unwrap();
        assert_eq!((i_nu.dim(), i_mu.dim()), (1, 1));
        assert_ne!(i_nu, i_mu);
        let chain = Quiver::build(&["1", "2", "3"], &[("a", "1", "2"), ("c", "2", "3")]).unwrap();
        let alg = PathAlgebra::new(chain, Field::Rational);
        let s = Setting::new(&IdealData::zero(&alg)).unwrap();
        assert_eq!(image_theta(&s, &Presentation::natural(&s)).unwrap().dim(), 0);
    }

    fn fork_setting(f: Field) -> Setting {
        let alg = PathAlgebra::new(fork(), f);
        Setting::new(&ideal(&alg, &[&[(1, "ca")]])).unwrap()
    }

    #[test]
    fn diagonalizable_examples() {
        let s = fork_setting(Field::Rational);
        let im = image_theta(&s, &Presentation::natural(&s)).unwrap();
        assert!(subspace_classes(&im).iter().all(|f| is_diagonalizable_class(&s, f)));
        let g = s.hh1.class_of(&der(&s.hh1, &[("b", &[(1, "a")])])).unwrap();
        assert!(!is_diagonalizable_class(&s, &g));
        assert!(is_diagonalizable_class(&s, &s.hh1.zero_class()));
        let f = s.hh1.class_of(&der(&s.hh1, &[("a", &[(1, "a")])])).unwrap();
        assert!(is_diagonalizable_class(&s, &f));
        assert!(!is_diagonalizable_set(&s, &[f.clone(), g.clone()]));
        assert!(is_diagonalizable_set(&s, &[s.hh1.zero_class()]));
        let classes = subspace_classes(&im);
        let b = common_eigenbasis(&s, &classes).unwrap();
        assert!(b.diagonalizes(&s, &classes));
        assert!(matches!(common_eigenbasis(&s, &[g]), Err(ThetaError::NotDiagonalizable { .. })));
    }

    #[test]
    fn adapted_examples() {
        let s = twin_setting();
        let d2 = der(&s.hh1, &[("a", &[(1, "a"), (1, "cb")]), ("d", &[(1, "d"), (1, "fe")])]);
        let f2 = s.hh1.class_of(&d2).unwrap();
        let b = common_eigenbasis(&s, std::slice::from_ref(&f2)).unwrap();
        let mu = adapted_presentation(&s, &b).unwrap();
        let alg = s.reference.algebra();
        let q = alg.quiver();
        assert_eq!(mu.chi().image_of_arrow(q.arrow_id("a").unwrap()), &el(alg, &[(1, "a"), (1, "cb")]));
        assert_eq!(mu.chi().image_of_arrow(q.arrow_id("d").unwrap()), &el(alg, &[(1, "d"), (1, "fe")]));
        assert_eq!(mu.kernel(), &s.reference);

        let alg = PathAlgebra::new(kronecker(), Field::Rational);
        let s = Setting::new(&IdealData::zero(&alg)).unwrap();
        let a = s.algebra();
        let f = Field::Rational;
        let coords = |terms: &[(i64, &str)]| s.reference.normal_coords(&el(&alg, terms));
        let e1 = coords(&[(1, "e1")]);
        let e2 = coords(&[(1, "e2")]);
        let blocks = vec![(0, 1, vec![coords(&[(1, "a")]), coords(&[(1, "a"), (1, "b")])])];
        let b = SpecialBasis {
            idempotents: vec![e1, e2],
            blocks,
        };
        assert_eq!(a.dim(), 4);
        let nu = adapted_presentation(&s, &b).unwrap();
        assert_eq!(nu.chi().image_of_arrow(0), &el(&alg, &[(1, "a")]));
        assert_eq!(nu.chi().image_of_arrow(1), &el(&alg, &[(1, "a"), (1, "b")]));
        assert!(nu.kernel().is_zero_ideal());
        let _ = f;
    }

    #[test]
    fn realize_examples() {
        let s = twin_setting();
        let d1 = s.hh1.class_of(&der(&s.hh1, &[("a", &[(1, "a")]), ("d", &[(1, "d")])])).unwrap();
        let (nu, ts) = realize_in_image(&s, std::slice::from_ref(&d1)).unwrap();
        assert!(nu.chi().is_identity());
        assert_eq!(theta(&s, &nu, &ts[0]).unwrap(), theta(&s, &nu, &t_ad(&s)).unwrap());
        let tree = s.reference.quiver().default_tree();
        assert!(tree.arrows().iter().all(|&a| ts[0][a].is_zero()));
        let d2 = der(&s.hh1, &[("a", &[(1, "a"), (1, "cb")]), ("d", &[(1, "d"), (1, "fe")])]);
        let f2 = s.hh1.class_of(&d2).unwrap();
        let (mu, _) = realize_in_image(&s, std::slice::from_ref(&f2)).unwrap();
        assert_eq!(mu.chi(), &twin_psi(s.reference.algebra()));
        let s = fork_setting(Field::Rational);
        let g = s.hh1.class_of(&der(&s.hh1, &[("b", &[(1, "a")])])).unwrap();
        assert!(matches!(realize_in_image(&s, &[g]), Err(ThetaError::NotDiagonalizable { .. })));
    }

    #[test]
    fn maximality_examples() {
        let s = fork_setting(Field::prime(3).unwrap());
        let f = s.hh1.class_of(&der(&s.hh1, &[("a", &[(1, "a")])])).unwrap();
        assert_eq!(is_maximal_diagonalizable(&s, &s.span(&[f]), MaxBudget::default()), Ok(Maximality::Yes));
        let im = image_theta(&s, &Presentation::natural(&s)).unwrap();
        assert_eq!(is_maximal_diagonalizable(&s, &im, MaxBudget::default()), Ok(Maximality::Yes));

        let alg = PathAlgebra::new(kronecker(), Field::Rational);
        let s = Setting::new(&IdealData::zero(&alg)).unwrap();
        let got = is_maximal_diagonalizable(&s, &s.zero_subspace(), MaxBudget::default()).unwrap();
        assert!(matches!(got, Maximality::No { witness } if !witness.is_zero() && is_diagonalizable_class(&s, &witness)));
    }

    #[test]
    fn pushforward_twin() {
        let s = twin_setting();
        let psi = twin_psi(s.reference.algebra());
        let nu = Presentation::natural(&s);
        let mu = nu.then_automorphism(&s, &psi).unwrap();
        let i_nu = image_theta(&s, &nu).unwrap();
        let i_mu = image_theta(&s, &mu).unwrap();
        assert_eq!(pushforward_subspace(&s, &nu.induced(&psi), &i_nu), i_mu);
        let t = t_ad(&s);
        assert_eq!(pushforward(&s, &psi, &theta(&s, &nu, &t).unwrap()), theta(&s, &mu, &t).unwrap());
    }

    #[test]
    fn tree_independence() {
        let s = twin_setting();
        let q = s.reference.quiver().clone();
        let mu = Presentation::natural(&s).then_automorphism(&s, &twin_psi(s.reference.algebra())).unwrap();
        for nu in [Presentation::natural(&s), mu] {
            let base = image_theta(&s, &nu).unwrap();
            for x in 0..q.vertex_count() {
                let t = q.spanning_tree(x, None).unwrap();
                assert_eq!(image_theta_with_tree(&s, &nu, &t).unwrap(), base);
            }
        }
    }

    fn twin_gf3_setting() -> Setting {
        let alg = PathAlgebra::new(twin(), Field::prime(3).unwrap());
        Setting::new(&ideal(&alg, &[&[(1, "da")], &[(1, "fea"), (1, "dcb")]])).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn theta_image_properties(ws in proptest::collection::vec(1i64..3, 6), taus in proptest::collection::vec((0usize..2, 1i64..3), 0..3)) {
            let s = twin_gf3_setting();
            let alg = s.reference.algebra().clone();
            let f = s.field();
            let bypasses = alg.quiver().enumerate_bypasses();
            let weights: Vec<Scalar> = ws.iter().map(|&w| f.from_i64(w)).collect();
            let mut chi = Automorphism::dilatation(&alg, &weights).unwrap();
            for (b, t) in taus {
                let bp = &bypasses[b];
                chi = chi.compose(&Automorphism::transvection(&alg, bp.arrow, alg.path_index(&bp.path), &f.from_i64(t)).unwrap());
            }
            let nu = Presentation::from_automorphism(&s, chi).unwrap();
            let h = hom_space(nu.kernel(), &alg.quiver().default_tree());
            let im = image_theta(&s, &nu).unwrap();
            prop_assert_eq!(im.dim(), h.dim());
            let classes = subspace_classes(&im);
            prop_assert!(is_diagonalizable_set(&s, &classes));
            let (rho, _) = realize_in_image(&s, &classes).unwrap();
            prop_assert!(image_theta(&s, &rho).unwrap().contains_subspace(&im));
        }
    }
}
