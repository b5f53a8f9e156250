//! Generated subalgebras, subalgebra enumeration and quasi-ideal testing.

use crate::algebra::EvolutionAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{all_subspaces, Subspace, Vector, DEFAULT_ENUMERATION_CAP};

/// How a subalgebra set was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerationMethod {
    BruteForce,
    StructuralChain,
    StructuralMaxSolvable,
}

/// The complete set of subalgebras of an algebra, deterministically ordered
/// (dimension first, then lexicographically on the canonical bases).
#[derive(Debug, Clone)]
pub struct SubalgebraSet {
    ambient: usize,
    members: Vec<Subspace>,
    method: EnumerationMethod,
}

impl SubalgebraSet {
    fn new(ambient: usize, mut members: Vec<Subspace>, method: EnumerationMethod) -> Self {
        members.sort();
        members.dedup();
        SubalgebraSet { ambient, members, method }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn method(&self) -> EnumerationMethod {
        self.method
    }

    pub fn contains(&self, s: &Subspace) -> bool {
        self.members.binary_search(s).is_ok()
    }

    pub fn index_of(&self, s: &Subspace) -> Option<usize> {
        self.members.binary_search(s).ok()
    }

    pub fn of_dim(&self, dim: usize) -> Vec<&Subspace> {
        self.members.iter().filter(|s| s.dim() == dim).collect()
    }

    /// Count of members per dimension, indexed by dimension.
    pub fn dim_histogram(&self) -> Vec<usize> {
        let mut hist = vec![0usize; self.ambient + 1];
        for s in &self.members {
            hist[s.dim()] += 1;
        }
        hist
    }
}

/// Least subalgebra containing the given vectors, as the fixpoint of
/// `U <- U + U U`; the dimension strictly grows until stable, so at most
/// n rounds are needed.
pub fn generated_subalgebra(a: &EvolutionAlgebra, vectors: &[Vector]) -> Result<Subspace> {
    let mut u = Subspace::span(a.spec(), a.dim(), vectors)?;
    loop {
        let uu = a.subspace_product(&u, &u)?;
        let next = u.sum(&uu)?;
        if next == u {
            return Ok(u);
        }
        u = next;
    }
}

/// Lattice join: the subalgebra generated by the union of two subspaces.
pub fn join(a: &EvolutionAlgebra, u: &Subspace, v: &Subspace) -> Result<Subspace> {
    let mut gens = u.basis_vectors();
    gens.extend(v.basis_vectors());
    generated_subalgebra(a, &gens)
}

/// Closure test specialised for enumeration: checks all pairwise basis
/// products for membership without building intermediate spans.
fn closed_under_product(a: &EvolutionAlgebra, s: &Subspace) -> bool {
    let basis = s.basis_vectors();
    for (i, u) in basis.iter().enumerate() {
        for v in &basis[i..] {
            let p = a.product(u, v).expect("dims agree");
            if !s.member(&p).expect("dims agree") {
                return false;
            }
        }
    }
    true
}

/// Filters every subspace of the ambient space by closure under the
/// product. Only available over prime fields and below the enumeration cap.
pub fn enumerate_brute_force(a: &EvolutionAlgebra, cap: u128) -> Result<SubalgebraSet> {
    let members: Vec<Subspace> = all_subspaces(a.spec(), a.dim(), None, cap)?
        .filter(|s| closed_under_product(a, s))
        .collect();
    Ok(SubalgebraSet::new(a.dim(), members, EnumerationMethod::BruteForce))
}

/// Structural enumeration for the two matrix shapes whose subalgebra
/// lattices are known in closed form:
///
/// (a) strictly triangular with a full first off-diagonal (nilpotent with
///     maximum nilpotency index): the lattice is the chain of coordinate
///     suffixes (or prefixes, for the lower triangular orientation);
/// (b) the block shape with leading block `(1 1; -1 -1)`, a strictly lower
///     triangular tail with full first subdiagonal and rank n-1: a chain
///     with a rhombus at the bottom, extended while the tail squares project
///     into `span{e_1 - e_2}`.
///
/// Works over any field with characteristic != 2.
pub fn enumerate_structural(a: &EvolutionAlgebra) -> Result<SubalgebraSet> {
    a.spec().require_char_ne_2()?;
    let n = a.dim();
    let spec = a.spec();
    let m = a.structure_matrix();

    let strict_upper = (0..n).all(|i| (0..=i).all(|j| m.get(i, j).is_zero()));
    let full_super = (0..n.saturating_sub(1)).all(|i| !m.get(i, i + 1).is_zero());
    if strict_upper && full_super {
        let mut members = vec![Subspace::zero(spec, n)];
        for k in 1..=n {
            let gens: Vec<Vector> = (n - k..n).map(|i| Vector::unit(spec, n, i)).collect();
            members.push(Subspace::span(spec, n, &gens)?);
        }
        return Ok(SubalgebraSet::new(n, members, EnumerationMethod::StructuralChain));
    }

    let strict_lower = (0..n).all(|i| (i..n).all(|j| m.get(i, j).is_zero()));
    let full_sub = (1..n).all(|i| !m.get(i, i - 1).is_zero());
    if strict_lower && full_sub {
        let mut members = vec![Subspace::zero(spec, n)];
        for k in 1..=n {
            let gens: Vec<Vector> = (0..k).map(|i| Vector::unit(spec, n, i)).collect();
            members.push(Subspace::span(spec, n, &gens)?);
        }
        return Ok(SubalgebraSet::new(n, members, EnumerationMethod::StructuralChain));
    }

    if is_sign_pair_block_form(a) {
        let one = spec.one();
        let diff = {
            let mut v = Vector::zero(spec, n);
            v.set_coord(0, one.clone());
            v.set_coord(1, one.neg());
            v
        };
        let plus = {
            let mut v = Vector::zero(spec, n);
            v.set_coord(0, one.clone());
            v.set_coord(1, one.clone());
            v
        };
        let mut members = vec![
            Subspace::zero(spec, n),
            Subspace::span(spec, n, &[plus])?,
            Subspace::span(spec, n, std::slice::from_ref(&diff))?,
        ];
        // Full-prefix chain.
        for k in 2..=n {
            let gens: Vec<Vector> = (0..k).map(|i| Vector::unit(spec, n, i)).collect();
            members.push(Subspace::span(spec, n, &gens)?);
        }
        // Difference chain, extended while tail squares stay collinear with
        // e_1 - e_2 after projecting to the leading pair.
        let mut gens = vec![diff];
        for j in 2..n {
            if m.get(j, 0).add(m.get(j, 1))?.is_zero() {
                gens.push(Vector::unit(spec, n, j));
                members.push(Subspace::span(spec, n, &gens)?);
            } else {
                break;
            }
        }
        return Ok(SubalgebraSet::new(n, members, EnumerationMethod::StructuralMaxSolvable));
    }

    Err(Error::StructuralPreconditionFailed(
        "matrix is neither a full-chain triangular form nor the leading sign-pair block form"
            .into(),
    ))
}

/// Shape test for case (b) of `enumerate_structural`.
fn is_sign_pair_block_form(a: &EvolutionAlgebra) -> bool {
    let n = a.dim();
    if n < 2 {
        return false;
    }
    let m = a.structure_matrix();
    let spec = a.spec();
    let one = spec.one();
    let minus_one = one.neg();
    if !(m.get(0, 0) == &one && m.get(0, 1) == &one) {
        return false;
    }
    if !(m.get(1, 0) == &minus_one && m.get(1, 1) == &minus_one) {
        return false;
    }
    for j in 2..n {
        if !m.get(0, j).is_zero() || !m.get(1, j).is_zero() {
            return false;
        }
    }
    for i in 2..n {
        for j in i..n {
            if !m.get(i, j).is_zero() {
                return false;
            }
        }
        if i >= 3 && m.get(i, i - 1).is_zero() {
            return false;
        }
    }
    m.rank() == n - 1
}

/// The one-dimensional subalgebras of a solvable algebra with maximum
/// solvability index: after the internal reordering and rescaling to
/// `e_n^2 = -e_1^2 - ... - e_m^2`, they are exactly the sign-pattern lines
/// `span{±e_1 ± ... ± e_m ± e_n}`, 2^m of them.
pub fn onedim_subalgebras_max_solvable(a: &EvolutionAlgebra) -> Result<Vec<Subspace>> {
    let nf = crate::structure::max_solvable_normal_form(a)?;
    let n = a.dim();
    let spec = a.spec();
    let mut lines = Vec::with_capacity(1 << nf.m);
    for pattern in 0u64..(1 << nf.m) {
        let mut v = Vector::zero(spec, n);
        for i in 0..nf.m {
            let base = nf.scaling[i].clone();
            let signed = if pattern >> i & 1 == 1 { base.neg() } else { base };
            v.set_coord(nf.perm[i], signed);
        }
        v.set_coord(nf.perm[n - 1], nf.scaling[n - 1].clone());
        lines.push(Subspace::span(spec, n, &[v])?);
    }
    lines.sort();
    lines.dedup();
    Ok(lines)
}

/// A subalgebra `U` is a quasi-ideal when its join with every subalgebra is
/// the plain vector-space sum. Returns the first violating partner in the
/// deterministic member order, if any.
pub fn is_quasi_ideal(
    a: &EvolutionAlgebra,
    u: &Subspace,
    set: &SubalgebraSet,
) -> Result<(bool, Option<Subspace>)> {
    if !a.is_subalgebra_subspace(u)? {
        return Err(Error::StructuralPreconditionFailed(
            "quasi-ideal test requires a subalgebra".into(),
        ));
    }
    for v in set.members() {
        let sum = u.sum(v)?;
        let joined = join(a, u, v)?;
        if joined != sum {
            return Ok((false, Some(v.clone())));
        }
    }
    Ok((true, None))
}

/// Structural enumeration when it applies, otherwise brute force over a
/// prime field; infinite fields without a structural form are rejected.
pub fn enumerate_auto(a: &EvolutionAlgebra, cap: u128) -> Result<SubalgebraSet> {
    match enumerate_structural(a) {
        Ok(set) => Ok(set),
        Err(Error::StructuralPreconditionFailed(_)) | Err(Error::CharacteristicTwo) => {
            if a.spec().is_finite() {
                enumerate_brute_force(a, cap)
            } else {
                Err(Error::UnsupportedOverInfiniteField)
            }
        }
        Err(e) => Err(e),
    }
}

/// Convenience wrapper using the default enumeration cap.
pub fn enumerate_auto_default(a: &EvolutionAlgebra) -> Result<SubalgebraSet> {
    enumerate_auto(a, DEFAULT_ENUMERATION_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldSpec, Scalar};

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::gf(p).unwrap()
    }

    const Q: FieldSpec = FieldSpec::Rationals;

    fn dim6_nilpotent(spec: FieldSpec) -> EvolutionAlgebra {
        EvolutionAlgebra::from_i64_rows(
            spec,
            &[
                vec![0, 0, 0, 1, 1, 1],
                vec![0, 0, 0, 0, -1, 0],
                vec![0, 0, 0, 0, 0, -1],
                vec![0, 0, 0, 0, 0, 0],
                vec![0, 0, 0, 0, 0, 0],
                vec![0, 0, 0, 0, 0, 0],
            ],
        )
    }

    fn four_atoms_algebra(spec: FieldSpec) -> EvolutionAlgebra {
        EvolutionAlgebra::from_i64_rows(
            spec,
            &[vec![2, 2, 4], vec![2, 2, 0], vec![-4, -4, -4]],
        )
    }

    fn rhombus_stem_algebra(spec: FieldSpec) -> EvolutionAlgebra {
        EvolutionAlgebra::from_i64_rows(
            spec,
            &[vec![1, 1, 0], vec![-1, -1, 0], vec![0, 1, 0]],
        )
    }

    #[test]
    fn generated_subalgebra_union_example() {
        let a = dim6_nilpotent(Q);
        let gens = vec![
            Vector::from_i64(Q, &[1, 1, 0, 0, 0, 0]),
            Vector::from_i64(Q, &[0, 0, 0, 1, 0, 1]),
            Vector::from_i64(Q, &[1, 0, 1, 0, 0, 0]),
            Vector::from_i64(Q, &[0, 0, 0, 1, 1, 0]),
        ];
        let got = generated_subalgebra(&a, &gens).unwrap();
        let expected = Subspace::span(
            Q,
            6,
            &[
                Vector::from_i64(Q, &[1, 1, 0, 0, 0, 0]),
                Vector::from_i64(Q, &[1, 0, 1, 0, 0, 0]),
                Vector::unit(Q, 6, 3),
                Vector::unit(Q, 6, 4),
                Vector::unit(Q, 6, 5),
            ],
        )
        .unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn generated_subalgebra_of_nothing_is_zero() {
        let a = rhombus_stem_algebra(Q);
        assert!(generated_subalgebra(&a, &[]).unwrap().is_zero());
    }

    #[test]
    fn generated_subalgebra_chain_suffix() {
        let chain = EvolutionAlgebra::from_i64_rows(
            Q,
            &[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]],
        );
        let u = Vector::from_i64(Q, &[0, 1, 1]);
        let got = generated_subalgebra(&chain, &[u]).unwrap();
        let expected =
            Subspace::span(Q, 3, &[Vector::unit(Q, 3, 1), Vector::unit(Q, 3, 2)]).unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn join_examples() {
        let a = four_atoms_algebra(Q);
        let u = Subspace::span(Q, 3, &[Vector::from_i64(Q, &[1, 1, 1])]).unwrap();
        let v = Subspace::span(Q, 3, &[Vector::from_i64(Q, &[1, -1, -1])]).unwrap();
        assert_eq!(join(&a, &u, &u).unwrap(), u);
        assert!(join(&a, &u, &v).unwrap().is_full());
        assert_eq!(join(&a, &u, &a.zero_subspace()).unwrap(), u);
    }

    #[test]
    fn brute_force_rhombus_stem_over_gf5() {
        let f = gf(5);
        let a = rhombus_stem_algebra(f);
        let set = enumerate_brute_force(&a, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(set.len(), 5);
        let proper: Vec<&Subspace> =
            set.members().iter().filter(|s| !s.is_zero() && !s.is_full()).collect();
        let expected = [
            Subspace::span(f, 3, &[Vector::from_i64(f, &[1, 1, 0])]).unwrap(),
            Subspace::span(f, 3, &[Vector::from_i64(f, &[1, -1, 0])]).unwrap(),
            Subspace::span(f, 3, &[Vector::from_i64(f, &[1, 0, 0]), Vector::from_i64(f, &[0, 1, 0])])
                .unwrap(),
        ];
        assert_eq!(proper.len(), 3);
        for e in &expected {
            assert!(set.contains(e));
        }
    }

    #[test]
    fn brute_force_four_atoms_over_gf7() {
        let a = four_atoms_algebra(gf(7));
        let set = enumerate_brute_force(&a, DEFAULT_ENUMERATION_CAP).unwrap();
        let hist = set.dim_histogram();
        assert_eq!(hist, vec![1, 4, 1, 1]);
    }

    #[test]
    fn brute_force_zero_algebra_takes_everything() {
        let a = EvolutionAlgebra::zero_algebra(gf(3), 2);
        let set = enumerate_brute_force(&a, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(set.len(), 6);
    }

    #[test]
    fn structural_chain() {
        let chain = EvolutionAlgebra::from_i64_rows(
            Q,
            &[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]],
        );
        let set = enumerate_structural(&chain).unwrap();
        assert_eq!(set.method(), EnumerationMethod::StructuralChain);
        assert_eq!(set.dim_histogram(), vec![1, 1, 1, 1]);
        assert_eq!(
            set.members()[1],
            Subspace::span(Q, 3, &[Vector::unit(Q, 3, 2)]).unwrap()
        );
    }

    #[test]
    fn structural_sign_pair_rhombus() {
        let pair = crate::families::sign_pair(Q).unwrap();
        let set = enumerate_structural(&pair).unwrap();
        assert_eq!(set.len(), 4);
        assert!(set.contains(&Subspace::span(Q, 2, &[Vector::from_i64(Q, &[1, 1])]).unwrap()));
        assert!(set.contains(&Subspace::span(Q, 2, &[Vector::from_i64(Q, &[1, -1])]).unwrap()));
    }

    #[test]
    fn structural_rhombus_stem_matches_brute_force() {
        // The same algebra enumerated structurally over Q and by brute
        // force over GF(5) has the same lattice shape.
        let set_q = enumerate_structural(&rhombus_stem_algebra(Q)).unwrap();
        assert_eq!(set_q.method(), EnumerationMethod::StructuralMaxSolvable);
        assert_eq!(set_q.dim_histogram(), vec![1, 2, 1, 1]);

        let set_5 = enumerate_brute_force(&rhombus_stem_algebra(gf(5)), DEFAULT_ENUMERATION_CAP)
            .unwrap();
        assert_eq!(set_5.dim_histogram(), set_q.dim_histogram());
    }

    #[test]
    fn structural_rejects_other_shapes() {
        let a = four_atoms_algebra(Q);
        assert!(matches!(
            enumerate_structural(&a),
            Err(Error::StructuralPreconditionFailed(_))
        ));
        assert_eq!(enumerate_auto(&a, DEFAULT_ENUMERATION_CAP).map(|s| s.len()), Err(Error::UnsupportedOverInfiniteField));
    }

    #[test]
    fn onedim_lines_of_four_atoms() {
        let a = four_atoms_algebra(Q);
        let lines = onedim_subalgebras_max_solvable(&a).unwrap();
        assert_eq!(lines.len(), 4);
        for signs in [[1i64, 1, 1], [1, -1, 1], [1, 1, -1], [1, -1, -1]] {
            let v = Vector::from_i64(Q, &signs);
            let line = Subspace::span(Q, 3, &[v]).unwrap();
            assert!(lines.contains(&line));
        }
    }

    #[test]
    fn onedim_lines_of_sign_pair() {
        let pair = crate::families::sign_pair(Q).unwrap();
        let lines = onedim_subalgebras_max_solvable(&pair).unwrap();
        assert_eq!(lines.len(), 2);
    }

    #[test]
    fn quasi_ideal_examples() {
        let f = gf(3);
        let a = dim6_nilpotent(f);
        let set = enumerate_brute_force(&a, DEFAULT_ENUMERATION_CAP).unwrap();
        let e1 = Subspace::span(
            f,
            6,
            &[Vector::from_i64(f, &[1, 1, 0, 0, 0, 0]), Vector::from_i64(f, &[0, 0, 0, 1, 0, 1])],
        )
        .unwrap();
        let e2 = Subspace::span(
            f,
            6,
            &[Vector::from_i64(f, &[1, 0, 1, 0, 0, 0]), Vector::from_i64(f, &[0, 0, 0, 1, 1, 0])],
        )
        .unwrap();
        assert!(set.contains(&e1) && set.contains(&e2));
        let (ok, witness) = is_quasi_ideal(&a, &e1, &set).unwrap();
        assert!(!ok);
        assert!(witness.is_some());
        // The documented violating partner really does violate.
        let sum = e1.sum(&e2).unwrap();
        let joined = join(&a, &e1, &e2).unwrap();
        assert_ne!(joined, sum);
        assert_eq!(joined.dim(), 5);
    }

    #[test]
    fn ideals_are_quasi_ideals() {
        let f = gf(5);
        let a = rhombus_stem_algebra(f);
        let set = enumerate_brute_force(&a, DEFAULT_ENUMERATION_CAP).unwrap();
        let ideal = Subspace::span(
            f,
            3,
            &[Vector::unit(f, 3, 0), Vector::unit(f, 3, 1)],
        )
        .unwrap();
        assert!(a.is_ideal(&ideal).unwrap());
        let (ok, _) = is_quasi_ideal(&a, &ideal, &set).unwrap();
        assert!(ok);
    }

    #[test]
    fn sum_of_squares_quasi_ideals_over_gf3() {
        // e1^2 = e2^2 = e3, e3^2 = 0 over GF(3): the three listed
        // subalgebras are all quasi-ideals.
        let f = gf(3);
        let a = EvolutionAlgebra::from_i64_rows(
            f,
            &[vec![0, 0, 1], vec![0, 0, 1], vec![0, 0, 0]],
        );
        let set = enumerate_brute_force(&a, DEFAULT_ENUMERATION_CAP).unwrap();
        for gens in [
            vec![Vector::unit(f, 3, 2)],
            vec![Vector::unit(f, 3, 0), Vector::unit(f, 3, 2)],
            vec![Vector::unit(f, 3, 1), Vector::unit(f, 3, 2)],
        ] {
            let u = Subspace::span(f, 3, &gens).unwrap();
            let (ok, w) = is_quasi_ideal(&a, &u, &set).unwrap();
            assert!(ok, "witness {w:?}");
        }
    }

    #[test]
    fn scalars_on_lines_do_not_split_spans() {
        // Sign normalisation: a line and its negation are one subspace.
        let f = gf(5);
        let v = Vector::from_i64(f, &[1, 2, 0]);
        let w = v.scale(&Scalar::from_i64(f, -1));
        assert_eq!(
            Subspace::span(f, 3, &[v]).unwrap(),
            Subspace::span(f, 3, &[w]).unwrap()
        );
    }
}
