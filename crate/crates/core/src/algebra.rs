//! The evolution-algebra core: products, powers, annihilators, series,
//! ideals, quotients and direct sums.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{Matrix, Subspace, Vector};

/// A finite-dimensional evolution algebra, given by its structure matrix:
/// row `i` holds the coordinates of `e_i^2` in the natural basis, and
/// distinct natural basis vectors multiply to zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EvolutionAlgebra {
    matrix: Matrix,
}

/// Which descending power sequence a report describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    LowerCentral,
    Derived,
}

/// A computed power series of an algebra.
///
/// `terms[0]` is the whole space. For the derived series the dimensions
/// strictly decrease until the final term. The lower-central series may
/// plateau before dropping further (a 3-dimensional chain algebra has
/// dimensions 3,2,1,1,0), so its terms are only non-increasing. `index` is
/// present exactly when the final term is the zero subspace, and is then the
/// 1-based position of that term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesReport {
    pub kind: SeriesKind,
    pub terms: Vec<Subspace>,
    pub index: Option<usize>,
}

impl SeriesReport {
    pub fn term_dims(&self) -> Vec<usize> {
        self.terms.iter().map(Subspace::dim).collect()
    }

    pub fn vanishes(&self) -> bool {
        self.index.is_some()
    }
}

/// An element together with its support in the natural basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementView {
    pub vector: Vector,
    pub support: Vec<usize>,
}

impl ElementView {
    pub fn new(vector: Vector) -> Self {
        let support = vector.support();
        ElementView { vector, support }
    }
}

/// Isomorphism class of a two-dimensional solvable evolution algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dim2Solvable {
    /// Zero product.
    Abelian,
    /// `e_1^2 = -e_2^2 = e_1 + e_2`.
    SignPair,
    /// `e_1^2 = e_2`, `e_2^2 = 0`.
    NilpotentChain,
}

/// Records how a quotient by a one-dimensional ideal was formed: the basis
/// index that was eliminated and the vector expressing it in terms of the
/// surviving indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientWitness {
    /// Eliminated index (the largest index in the generator's support).
    pub dropped: usize,
    /// Surviving indices, ascending; position in this list is the new index.
    pub kept: Vec<usize>,
    /// Length-n vector s with `e_dropped = sum_k s_k e_k` modulo the ideal.
    pub substitution: Vector,
}

impl QuotientWitness {
    /// Image of an ambient vector in the quotient coordinates.
    pub fn project(&self, v: &Vector) -> Vector {
        let spec = v.spec();
        let coeff = v.coord(self.dropped);
        let coords = self
            .kept
            .iter()
            .map(|&k| {
                v.coord(k)
                    .add(&coeff.mul(self.substitution.coord(k)).expect("same field"))
                    .expect("same field")
            })
            .collect();
        Vector::new(spec, coords)
    }
}

impl EvolutionAlgebra {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                got: matrix.cols(),
            });
        }
        Ok(EvolutionAlgebra { matrix })
    }

    pub fn from_i64_rows(spec: FieldSpec, rows: &[Vec<i64>]) -> Self {
        EvolutionAlgebra::new(Matrix::from_i64_rows(spec, rows)).expect("square input")
    }

    pub fn zero_algebra(spec: FieldSpec, n: usize) -> Self {
        EvolutionAlgebra { matrix: Matrix::zeros(spec, n, n) }
    }

    pub fn spec(&self) -> FieldSpec {
        self.matrix.spec()
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn structure_matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `e_i^2` as a vector.
    pub fn basis_square(&self, i: usize) -> Vector {
        self.matrix.row(i)
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        Vector::unit(self.spec(), self.dim(), i)
    }

    pub fn full_space(&self) -> Subspace {
        Subspace::full(self.spec(), self.dim())
    }

    pub fn zero_subspace(&self) -> Subspace {
        Subspace::zero(self.spec(), self.dim())
    }

    fn check_len(&self, v: &Vector) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: v.len() });
        }
        if v.spec() != self.spec() {
            return Err(Error::MixedField);
        }
        Ok(())
    }

    /// The algebra product `uv = sum_i u_i v_i e_i^2`; bilinear and
    /// commutative by construction.
    pub fn product(&self, u: &Vector, v: &Vector) -> Result<Vector> {
        self.check_len(u)?;
        self.check_len(v)?;
        let mut out = Vector::zero(self.spec(), self.dim());
        for i in 0..self.dim() {
            let c = u.coord(i).mul(v.coord(i))?;
            if !c.is_zero() {
                out = out.add(&self.matrix.row(i).scale(&c));
            }
        }
        Ok(out)
    }

    /// `u^1 = u`, `u^k = u^{k-1} u`.
    pub fn principal_power(&self, u: &Vector, k: usize) -> Result<Vector> {
        assert!(k >= 1, "principal powers start at 1");
        self.check_len(u)?;
        let mut acc = u.clone();
        for _ in 1..k {
            acc = self.product(&acc, u)?;
        }
        Ok(acc)
    }

    /// `u^(0) = u`, `u^(k) = u^(k-1) u^(k-1)`.
    pub fn plenary_power(&self, u: &Vector, k: usize) -> Result<Vector> {
        self.check_len(u)?;
        let mut acc = u.clone();
        for _ in 0..k {
            acc = self.product(&acc, &acc)?;
        }
        Ok(acc)
    }

    /// `ann(E) = span{ e_i : e_i^2 = 0 }`.
    pub fn annihilator(&self) -> Subspace {
        let vectors: Vec<Vector> = (0..self.dim())
            .filter(|&i| self.matrix.row(i).is_zero())
            .map(|i| self.basis_vector(i))
            .collect();
        Subspace::span(self.spec(), self.dim(), &vectors).expect("unit vectors fit")
    }

    pub fn is_degenerate(&self) -> bool {
        !self.annihilator().is_zero()
    }

    /// Span of all pairwise products of basis vectors of `u` and `v`;
    /// by bilinearity this is the full set product.
    pub fn subspace_product(&self, u: &Subspace, v: &Subspace) -> Result<Subspace> {
        if u.ambient() != self.dim() || v.ambient() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: u.ambient() });
        }
        let mut products = Vec::with_capacity(u.dim() * v.dim());
        for a in u.basis_vectors() {
            for b in v.basis_vectors() {
                products.push(self.product(&a, &b)?);
            }
        }
        Subspace::span(self.spec(), self.dim(), &products)
    }

    /// `E^2` is the row space of the structure matrix.
    pub fn derived_square(&self) -> Subspace {
        Subspace::from_rref(self.matrix.rref())
    }

    /// `dim E - dim E^2`.
    pub fn codim_derived_square(&self) -> usize {
        self.dim() - self.derived_square().dim()
    }

    /// Lower central series `E^1 = E`, `E^{k+1} = sum_i E^i E^{k+1-i}`.
    ///
    /// Terms are non-increasing but a repeated term does not by itself prove
    /// stabilization (later terms may still shrink), so the loop keeps going
    /// until it sees a term `L` with `L L = L` (then every later term equals
    /// `L`), reaches zero, or exhausts the nilpotency bound `2^{n-1} + 1`
    /// valid for triangularizable products.
    pub fn lower_central_series(&self) -> SeriesReport {
        let n = self.dim();
        let bound = if n == 0 { 1 } else { (1usize << (n.saturating_sub(1))) + 1 };
        let mut terms: Vec<Subspace> = vec![self.full_space()];
        let mut index = None;
        if terms[0].is_zero() {
            return SeriesReport { kind: SeriesKind::LowerCentral, terms, index: Some(1) };
        }
        loop {
            let k = terms.len();
            // E^{k+1} = sum over i of E^i E^{k+1-i}
            let mut next = self.zero_subspace();
            for i in 0..k {
                let part = self
                    .subspace_product(&terms[i], &terms[k - 1 - i])
                    .expect("term dims agree");
                next = next.sum(&part).expect("same ambient");
            }
            if next.is_zero() {
                terms.push(next);
                index = Some(terms.len());
                break;
            }
            if next == terms[k - 1] {
                let self_prod = self.subspace_product(&next, &next).expect("dims agree");
                if self_prod == next {
                    // Genuine fixpoint: every later term contains and is
                    // contained in this one.
                    break;
                }
            }
            terms.push(next);
            if terms.len() >= bound {
                // A nilpotent algebra would have vanished by now.
                while terms.len() > 1 && terms[terms.len() - 1] == terms[terms.len() - 2] {
                    terms.pop();
                }
                break;
            }
        }
        SeriesReport { kind: SeriesKind::LowerCentral, terms, index }
    }

    /// Derived series `E^(1) = E`, `E^(k+1) = E^(k) E^(k)`; a repeated term
    /// is a true fixpoint here.
    pub fn derived_series(&self) -> SeriesReport {
        let mut terms: Vec<Subspace> = vec![self.full_space()];
        let mut index = None;
        if terms[0].is_zero() {
            return SeriesReport { kind: SeriesKind::Derived, terms, index: Some(1) };
        }
        loop {
            let last = terms.last().unwrap();
            let next = self.subspace_product(last, last).expect("dims agree");
            if next == *last {
                break;
            }
            let zero = next.is_zero();
            terms.push(next);
            if zero {
                index = Some(terms.len());
                break;
            }
        }
        SeriesReport { kind: SeriesKind::Derived, terms, index }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().vanishes()
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().vanishes()
    }

    pub fn nilpotency_index(&self) -> Option<usize> {
        self.lower_central_series().index
    }

    pub fn solvability_index(&self) -> Option<usize> {
        self.derived_series().index
    }

    /// `U` is an ideal iff `E U ⊆ U` (which subsumes closure).
    pub fn is_ideal(&self, u: &Subspace) -> Result<bool> {
        let eu = self.subspace_product(&self.full_space(), u)?;
        u.contains(&eu)
    }

    /// `U` is a subalgebra iff `U U ⊆ U`.
    pub fn is_subalgebra_subspace(&self, u: &Subspace) -> Result<bool> {
        let uu = self.subspace_product(u, u)?;
        u.contains(&uu)
    }

    /// An ideal spanned by natural basis vectors.
    pub fn is_basic_ideal(&self, u: &Subspace) -> Result<bool> {
        Ok(u.is_coordinate_subspace() && self.is_ideal(u)?)
    }

    /// Quotient by a basic ideal: delete the ideal's rows and columns.
    /// Returns the quotient together with the surviving indices.
    pub fn quotient_by_basic_ideal(&self, ideal: &Subspace) -> Result<(EvolutionAlgebra, Vec<usize>)> {
        if !self.is_basic_ideal(ideal)? {
            return Err(Error::NotBasicIdeal);
        }
        let dropped: Vec<usize> = ideal.basis().pivot_columns();
        let kept: Vec<usize> = (0..self.dim()).filter(|i| !dropped.contains(i)).collect();
        let m = kept.len();
        let mut out = Matrix::zeros(self.spec(), m, m);
        for (a, &i) in kept.iter().enumerate() {
            for (b, &j) in kept.iter().enumerate() {
                out.set(a, b, self.matrix.get(i, j).clone());
            }
        }
        Ok((EvolutionAlgebra { matrix: out }, kept))
    }

    /// Quotient by a one-dimensional ideal `J = span{w}`. The largest index
    /// in `supp(w)` is eliminated and expressed in terms of the rest; the
    /// images of the surviving basis vectors stay mutually orthogonal, so
    /// they form a natural basis of the quotient.
    pub fn quotient_by_onedim_ideal(
        &self,
        ideal: &Subspace,
    ) -> Result<(EvolutionAlgebra, QuotientWitness)> {
        if ideal.dim() != 1 {
            return Err(Error::NotOneDimensional);
        }
        if !self.is_ideal(ideal)? {
            return Err(Error::NotIdeal);
        }
        let w = ideal.basis().row(0);
        let view = ElementView::new(w.clone());
        let dropped = *view.support.last().expect("nonzero generator");
        let kept: Vec<usize> = (0..self.dim()).filter(|&i| i != dropped).collect();
        let inv = w.coord(dropped).inv().expect("support coordinate");
        let mut substitution = Vector::zero(self.spec(), self.dim());
        for &k in &kept {
            substitution.set_coord(k, w.coord(k).mul(&inv).expect("same field").neg());
        }
        let witness = QuotientWitness { dropped, kept: kept.clone(), substitution };
        let m = kept.len();
        let mut out = Matrix::zeros(self.spec(), m, m);
        for (a, &i) in kept.iter().enumerate() {
            let image = witness.project(&self.matrix.row(i));
            for b in 0..m {
                out.set(a, b, image.coord(b).clone());
            }
        }
        Ok((EvolutionAlgebra { matrix: out }, witness))
    }

    /// Natural basis change `f_pos = scaling[pos] * e_{perm[pos]}`: the new
    /// basis is a rescaled permutation of the old one, which keeps it
    /// natural.
    pub fn change_basis(&self, perm: &[usize], scaling: &[Scalar]) -> Result<EvolutionAlgebra> {
        let n = self.dim();
        if perm.len() != n || scaling.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: perm.len() });
        }
        let mut out = Matrix::zeros(self.spec(), n, n);
        for r in 0..n {
            let sq = scaling[r].square();
            for c in 0..n {
                let v = sq.mul(self.matrix.get(perm[r], perm[c]))?.div(&scaling[c])?;
                out.set(r, c, v);
            }
        }
        Ok(EvolutionAlgebra { matrix: out })
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &EvolutionAlgebra) -> Result<EvolutionAlgebra> {
        if self.spec() != other.spec() {
            return Err(Error::MixedField);
        }
        let n = self.dim();
        let m = other.dim();
        let mut out = Matrix::zeros(self.spec(), n + m, n + m);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.matrix.get(i, j).clone());
            }
        }
        for i in 0..m {
            for j in 0..m {
                out.set(n + i, n + j, other.matrix.get(i, j).clone());
            }
        }
        Ok(EvolutionAlgebra { matrix: out })
    }

    /// `{ x : xu = 0 }`, the kernel of multiplication by `u`.
    pub fn element_annihilator(&self, u: &Vector) -> Result<Subspace> {
        self.check_len(u)?;
        // (xu)_j = sum_i x_i u_i M[i][j]; scale row i by u_i and take the
        // left kernel.
        let mut t = Matrix::zeros(self.spec(), self.dim(), self.dim());
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                t.set(i, j, u.coord(i).mul(self.matrix.get(i, j))?);
            }
        }
        Ok(t.transpose().kernel())
    }

    /// Isomorphism class of a two-dimensional solvable algebra: the zero
    /// product, the sign pair `e_1^2 = -e_2^2 = e_1 + e_2`, or the chain
    /// `e_1^2 = e_2, e_2^2 = 0`.
    pub fn classify_dim2_solvable(&self) -> Result<Dim2Solvable> {
        if self.dim() != 2 {
            return Err(Error::WrongDimension(self.dim()));
        }
        if !self.is_solvable() {
            return Err(Error::NotSolvable);
        }
        let nonzero_rows = (0..2).filter(|&i| !self.matrix.row(i).is_zero()).count();
        Ok(match nonzero_rows {
            0 => Dim2Solvable::Abelian,
            // Solvability forces the single nonzero square onto the other
            // basis line, which is the chain.
            1 => Dim2Solvable::NilpotentChain,
            // Both squares nonzero and proportional with opposite signs.
            _ => Dim2Solvable::SignPair,
        })
    }
}

impl fmt::Display for EvolutionAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "evolution algebra of dimension {} over {:?}", self.dim(), self.spec())?;
        write!(f, "{}", self.matrix)
    }
}
