//! Constructors and seeded random generators for the distinguished families
//! of solvable evolution algebras used throughout the crate's test
//! machinery.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::EvolutionAlgebra;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::Matrix;

/// Parameters for the one-block family: `e_i^2 = lambda_i (e_1 + ... + e_k)`
/// with `sum_{j<=k} lambda_j = 0` and not all lambdas zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyOneSpec {
    k: usize,
    lambdas: Vec<Scalar>,
}

impl FamilyOneSpec {
    pub fn new(k: usize, lambdas: Vec<Scalar>) -> Result<Self> {
        let n = lambdas.len();
        if n == 0 {
            return Err(Error::InvalidFamilySpec("empty lambda list".into()));
        }
        if k == 0 || k > n {
            return Err(Error::InvalidFamilySpec(format!("k = {k} outside 1..={n}")));
        }
        let spec = lambdas[0].spec();
        if lambdas.iter().any(|l| l.spec() != spec) {
            return Err(Error::MixedField);
        }
        let mut head_sum = spec.zero();
        for l in &lambdas[..k] {
            head_sum = head_sum.add(l)?;
        }
        if !head_sum.is_zero() {
            return Err(Error::InvalidFamilySpec(
                "the first k lambdas must sum to zero".into(),
            ));
        }
        if lambdas.iter().all(Scalar::is_zero) {
            return Err(Error::InvalidFamilySpec("some lambda must be nonzero".into()));
        }
        Ok(FamilyOneSpec { k, lambdas })
    }

    pub fn from_i64(spec: FieldSpec, k: usize, lambdas: &[i64]) -> Result<Self> {
        FamilyOneSpec::new(k, lambdas.iter().map(|&v| Scalar::from_i64(spec, v)).collect())
    }

    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn lambdas(&self) -> &[Scalar] {
        &self.lambdas
    }

    pub fn spec(&self) -> FieldSpec {
        self.lambdas[0].spec()
    }

    /// The member is nilpotent exactly when every lambda with index <= k
    /// vanishes.
    pub fn is_nilpotent_member(&self) -> bool {
        self.lambdas[..self.k].iter().all(Scalar::is_zero)
    }
}

/// Builds the family-one algebra: row i of the structure matrix is
/// `lambda_i` repeated over the first k columns.
pub fn family_one(spec: &FamilyOneSpec) -> Result<EvolutionAlgebra> {
    spec.spec().require_char_ne_2()?;
    let n = spec.n();
    let field = spec.spec();
    let mut m = Matrix::zeros(field, n, n);
    for i in 0..n {
        for j in 0..spec.k {
            m.set(i, j, spec.lambdas[i].clone());
        }
    }
    EvolutionAlgebra::new(m)
}

/// The two-dimensional member with lambdas (1, -1): `e_1^2 = -e_2^2 = e_1+e_2`.
pub fn sign_pair(field: FieldSpec) -> Result<EvolutionAlgebra> {
    family_one(&FamilyOneSpec::from_i64(field, 2, &[1, -1])?)
}

/// Parameters for the block family: a block-diagonal stack of family-one
/// members, a free lower-left block `C`, and a strictly lower triangular
/// tail block `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyTwoSpec {
    parts: Vec<FamilyOneSpec>,
    c: Matrix,
    l: Matrix,
}

impl FamilyTwoSpec {
    pub fn new(parts: Vec<FamilyOneSpec>, c: Matrix, l: Matrix) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidFamilySpec("at least one part required".into()));
        }
        let field = parts[0].spec();
        if parts.iter().any(|p| p.spec() != field) || c.spec() != field || l.spec() != field {
            return Err(Error::MixedField);
        }
        let m: usize = parts.iter().map(FamilyOneSpec::n).sum();
        let t = l.rows();
        if l.cols() != t {
            return Err(Error::InvalidFamilySpec("tail block must be square".into()));
        }
        if c.rows() != t || c.cols() != m {
            return Err(Error::InvalidFamilySpec(format!(
                "free block must be {t}x{m}, got {}x{}",
                c.rows(),
                c.cols()
            )));
        }
        for i in 0..t {
            for j in i..t {
                if !l.get(i, j).is_zero() {
                    return Err(Error::InvalidFamilySpec(
                        "tail block must be strictly lower triangular".into(),
                    ));
                }
            }
        }
        Ok(FamilyTwoSpec { parts, c, l })
    }

    pub fn parts(&self) -> &[FamilyOneSpec] {
        &self.parts
    }

    pub fn block_dim(&self) -> usize {
        self.parts.iter().map(FamilyOneSpec::n).sum()
    }

    pub fn n(&self) -> usize {
        self.block_dim() + self.l.rows()
    }

    pub fn spec(&self) -> FieldSpec {
        self.parts[0].spec()
    }
}

/// Assembles the block structure matrix of a family-two member.
pub fn family_two(spec: &FamilyTwoSpec) -> Result<EvolutionAlgebra> {
    spec.spec().require_char_ne_2()?;
    let field = spec.spec();
    let m = spec.block_dim();
    let t = spec.l.rows();
    let n = m + t;
    let mut out = Matrix::zeros(field, n, n);
    let mut offset = 0;
    for part in &spec.parts {
        let alg = family_one(part)?;
        for i in 0..part.n() {
            for j in 0..part.n() {
                out.set(offset + i, offset + j, alg.structure_matrix().get(i, j).clone());
            }
        }
        offset += part.n();
    }
    for i in 0..t {
        for j in 0..m {
            out.set(m + i, j, spec.c.get(i, j).clone());
        }
        for j in 0..t {
            out.set(m + i, m + j, spec.l.get(i, j).clone());
        }
    }
    EvolutionAlgebra::new(out)
}

/// Removes a nilpotent part, absorbing its rows and columns into the free
/// and tail blocks. Returns the reduced spec together with the basis
/// permutation (new position -> old index) under which the assembled
/// matrices agree.
pub fn absorb_nilpotent_part(
    spec: &FamilyTwoSpec,
    part_index: usize,
) -> Result<(FamilyTwoSpec, Vec<usize>)> {
    if part_index >= spec.parts.len() {
        return Err(Error::InvalidFamilySpec(format!("no part {part_index}")));
    }
    if spec.parts.len() < 2 {
        return Err(Error::InvalidFamilySpec(
            "cannot remove the only part".into(),
        ));
    }
    if !spec.parts[part_index].is_nilpotent_member() {
        return Err(Error::InvalidFamilySpec(format!(
            "part {part_index} is not a nilpotent member"
        )));
    }
    let field = spec.spec();
    let m = spec.block_dim();
    let t = spec.l.rows();
    let n = m + t;

    // Old index ranges of each part.
    let mut part_ranges = Vec::new();
    let mut offset = 0;
    for p in &spec.parts {
        part_ranges.push(offset..offset + p.n());
        offset += p.n();
    }
    let removed = part_ranges[part_index].clone();
    let d = removed.len();

    // New order: surviving parts, then the removed part, then the old tail.
    let mut perm: Vec<usize> = Vec::with_capacity(n);
    for (i, range) in part_ranges.iter().enumerate() {
        if i != part_index {
            perm.extend(range.clone());
        }
    }
    perm.extend(removed.clone());
    perm.extend(m..n);

    let new_parts: Vec<FamilyOneSpec> = spec
        .parts
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != part_index)
        .map(|(_, p)| p.clone())
        .collect();
    let new_m = m - d;
    let new_t = t + d;

    let assembled = family_two(spec)?;
    let old = assembled.structure_matrix();
    let mut new_c = Matrix::zeros(field, new_t, new_m);
    let mut new_l = Matrix::zeros(field, new_t, new_t);
    for i in 0..new_t {
        let oi = perm[new_m + i];
        for (j, &oj) in perm[..new_m].iter().enumerate() {
            new_c.set(i, j, old.get(oi, oj).clone());
        }
        for (j, &oj) in perm[new_m..].iter().enumerate() {
            new_l.set(i, j, old.get(oi, oj).clone());
        }
    }
    let reduced = FamilyTwoSpec::new(new_parts, new_c, new_l)?;
    Ok((reduced, perm))
}

/// Profiles for the seeded random algebra generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomProfile {
    /// Uniform structure matrix.
    General,
    /// Strictly upper triangular (hence nilpotent).
    StrictUpperTriangular,
    /// Strictly upper triangular with no zeros on the first superdiagonal.
    StrictTriangularFullSuperdiag,
    /// Solvable with maximum solvability index: independent leading squares
    /// and the last square equal to minus a partial sum of the others.
    MaxSolvable,
    FamilyOne,
    FamilyTwo,
}

const RETRY_BUDGET: usize = 1000;

/// Deterministic-in-seed random generator over a prime field.
pub fn random_algebra(
    field: FieldSpec,
    n: usize,
    profile: RandomProfile,
    seed: u64,
) -> Result<EvolutionAlgebra> {
    let FieldSpec::PrimeField { p } = field else {
        return Err(Error::InfiniteField);
    };
    if matches!(
        profile,
        RandomProfile::MaxSolvable | RandomProfile::FamilyOne | RandomProfile::FamilyTwo
    ) {
        field.require_char_ne_2()?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scalar = |rng: &mut ChaCha8Rng| Scalar::from_i64(field, rng.random_range(0..p) as i64);
    match profile {
        RandomProfile::General => {
            let mut m = Matrix::zeros(field, n, n);
            for i in 0..n {
                for j in 0..n {
                    m.set(i, j, scalar(&mut rng));
                }
            }
            EvolutionAlgebra::new(m)
        }
        RandomProfile::StrictUpperTriangular | RandomProfile::StrictTriangularFullSuperdiag => {
            let full = profile == RandomProfile::StrictTriangularFullSuperdiag;
            let mut m = Matrix::zeros(field, n, n);
            for i in 0..n {
                for j in i + 1..n {
                    m.set(i, j, scalar(&mut rng));
                }
                if full && i + 1 < n {
                    let v = rng.random_range(1..p) as i64;
                    m.set(i, i + 1, Scalar::from_i64(field, v));
                }
            }
            EvolutionAlgebra::new(m)
        }
        RandomProfile::MaxSolvable => {
            if n == 0 {
                return Err(Error::WrongDimension(0));
            }
            if n == 1 {
                return Ok(EvolutionAlgebra::zero_algebra(field, 1));
            }
            // Blind rejection is hopeless here (the solvable fraction of
            // codimension-one draws collapses rapidly with n), so build a
            // guaranteed-solvable shape instead: a core of dimension m+1
            // whose derived series drops one dimension per step, extended
            // by a strictly lower triangular tail (a solvable ideal with a
            // nilpotent quotient), then a random basis change.
            for _ in 0..RETRY_BUDGET {
                let m_param = rng.random_range(1..n as u64) as usize;
                let k = m_param + 1;
                let mut mat = Matrix::zeros(field, n, n);
                mat.set(0, 0, field.one());
                mat.set(0, 1, field.one());
                for i in 1..k - 1 {
                    mat.set(i, i + 1, field.one());
                }
                for j in 0..k {
                    mat.set(k - 1, j, field.one().neg());
                }
                for i in k..n {
                    for j in 0..i {
                        mat.set(i, j, scalar(&mut rng));
                    }
                }
                // Random natural basis change: permutation plus nonzero
                // rescaling.
                let mut perm: Vec<usize> = (0..n).collect();
                for i in (1..n).rev() {
                    perm.swap(i, rng.random_range(0..=i as u64) as usize);
                }
                let scaling: Vec<Scalar> = (0..n)
                    .map(|_| Scalar::from_i64(field, rng.random_range(1..p) as i64))
                    .collect();
                let algebra = EvolutionAlgebra::new(mat)?.change_basis(&perm, &scaling)?;
                if algebra.structure_matrix().rank() == n - 1 && algebra.is_solvable() {
                    return Ok(algebra);
                }
            }
            Err(Error::UnsatisfiableProfile { retries: RETRY_BUDGET })
        }
        RandomProfile::FamilyOne => {
            for _ in 0..RETRY_BUDGET {
                if let Some(spec) = random_family_one(field, n, &mut rng) {
                    return family_one(&spec);
                }
            }
            Err(Error::UnsatisfiableProfile { retries: RETRY_BUDGET })
        }
        RandomProfile::FamilyTwo => {
            for _ in 0..RETRY_BUDGET {
                if let Some(spec) = random_family_two(field, n, &mut rng) {
                    return family_two(&spec);
                }
            }
            Err(Error::UnsatisfiableProfile { retries: RETRY_BUDGET })
        }
    }
}

fn random_family_one(field: FieldSpec, n: usize, rng: &mut ChaCha8Rng) -> Option<FamilyOneSpec> {
    let FieldSpec::PrimeField { p } = field else {
        return None;
    };
    if n == 0 {
        return None;
    }
    let k = rng.random_range(1..=n as u64) as usize;
    let mut lambdas = Vec::with_capacity(n);
    let mut head = field.zero();
    for _ in 0..k - 1 {
        let v = Scalar::from_i64(field, rng.random_range(0..p) as i64);
        head = head.add(&v).expect("same field");
        lambdas.push(v);
    }
    lambdas.push(head.neg());
    for _ in k..n {
        lambdas.push(Scalar::from_i64(field, rng.random_range(0..p) as i64));
    }
    FamilyOneSpec::new(k, lambdas).ok()
}

/// Samples parts that are non-nilpotent members (a nilpotent part could be
/// absorbed into the tail anyway).
fn random_family_two(field: FieldSpec, n: usize, rng: &mut ChaCha8Rng) -> Option<FamilyTwoSpec> {
    let FieldSpec::PrimeField { p } = field else {
        return None;
    };
    if n < 2 {
        return None;
    }
    let r = if n >= 4 && rng.random_range(0..2u32) == 1 { 2 } else { 1 };
    let mut dims = Vec::new();
    let mut budget = n;
    for part in 0..r {
        let remaining_parts = r - part - 1;
        let max_dim = budget - 2 * remaining_parts;
        if max_dim < 2 {
            return None;
        }
        let d = rng.random_range(2..=max_dim as u64) as usize;
        dims.push(d);
        budget -= d;
    }
    let mut parts = Vec::new();
    for &d in &dims {
        let spec = random_family_one(field, d, rng)?;
        if spec.is_nilpotent_member() {
            return None;
        }
        parts.push(spec);
    }
    let m: usize = dims.iter().sum();
    let t = n - m;
    let mut c = Matrix::zeros(field, t, m);
    for i in 0..t {
        for j in 0..m {
            c.set(i, j, Scalar::from_i64(field, rng.random_range(0..p) as i64));
        }
    }
    let mut l = Matrix::zeros(field, t, t);
    for i in 0..t {
        for j in 0..i {
            l.set(i, j, Scalar::from_i64(field, rng.random_range(0..p) as i64));
        }
    }
    FamilyTwoSpec::new(parts, c, l).ok()
}
