//! JSON document schemas: algebra input files and verdict output.

use serde::{Deserialize, Serialize};

use evolab::algebra::EvolutionAlgebra;
use evolab::field::{FieldSpec, Scalar};
use evolab::linalg::{Matrix, Subspace};
use evolab::structure::StructureVerdict;

/// Field designator: `"Q"` or `{"GF": p}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldDoc {
    Name(String),
    Gf {
        #[serde(rename = "GF")]
        gf: u64,
    },
}

impl FieldDoc {
    pub fn to_spec(&self) -> Result<FieldSpec, String> {
        match self {
            FieldDoc::Name(s) if s == "Q" => Ok(FieldSpec::Rationals),
            FieldDoc::Name(s) => Err(format!("unknown field {s:?}; use \"Q\" or {{\"GF\": p}}")),
            FieldDoc::Gf { gf } => FieldSpec::gf(*gf).map_err(|e| e.to_string()),
        }
    }

    pub fn from_spec(spec: FieldSpec) -> FieldDoc {
        match spec {
            FieldSpec::Rationals => FieldDoc::Name("Q".into()),
            FieldSpec::PrimeField { p } => FieldDoc::Gf { gf: p },
        }
    }
}

/// A matrix entry: a plain integer or a scalar string such as `"-1/3"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Text(String),
}

impl Entry {
    fn to_scalar(&self, spec: FieldSpec) -> Result<Scalar, String> {
        match self {
            Entry::Int(v) => Ok(Scalar::from_i64(spec, *v)),
            Entry::Text(s) => Scalar::parse(spec, s).map_err(|e| e.to_string()),
        }
    }
}

/// An evolution algebra on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraDocument {
    pub schema: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub field: FieldDoc,
    pub dim: usize,
    pub matrix: Vec<Vec<Entry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis_labels: Option<Vec<String>>,
}

impl AlgebraDocument {
    pub fn to_algebra(&self) -> Result<EvolutionAlgebra, String> {
        let spec = self.field.to_spec()?;
        if self.matrix.len() != self.dim {
            return Err(format!(
                "dim is {} but the matrix has {} rows",
                self.dim,
                self.matrix.len()
            ));
        }
        let mut data = Vec::with_capacity(self.dim * self.dim);
        for row in &self.matrix {
            if row.len() != self.dim {
                return Err(format!(
                    "dim is {} but a matrix row has {} entries",
                    self.dim,
                    row.len()
                ));
            }
            for entry in row {
                data.push(entry.to_scalar(spec)?);
            }
        }
        let matrix = Matrix::new(spec, self.dim, self.dim, data);
        EvolutionAlgebra::new(matrix).map_err(|e| e.to_string())
    }

}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlagsDoc {
    pub nilpotent: bool,
    pub solvable: bool,
    pub degenerate: bool,
    pub max_solvability_index: bool,
    pub max_nilpotency_index: bool,
    pub supersolvable: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndicesDoc {
    pub nilpotency: Option<usize>,
    pub solvability: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesDoc {
    pub lower_central_dims: Vec<usize>,
    pub derived_dims: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormalFormDoc {
    /// New position -> 1-based original basis index.
    pub permutation: Vec<usize>,
    pub scaling: Vec<String>,
    pub m: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubalgebrasDoc {
    pub method: String,
    pub count: usize,
    pub by_dim: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LatticeDoc {
    pub nodes: usize,
    pub modular: bool,
    pub distributive: bool,
    pub upper_semimodular: bool,
    pub lower_semimodular: bool,
    pub j_algebra: bool,
    pub pentagon_free: bool,
    pub diamond_free: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modular_witness: Option<Vec<Vec<String>>>,
}

/// The analyze verdict: structural flags, both series, the normal forms
/// when they exist, and the lattice section when enumeration is feasible.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictDocument {
    pub schema: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub field: FieldDoc,
    pub dim: usize,
    pub flags: FlagsDoc,
    pub indices: IndicesDoc,
    pub series: SeriesDoc,
    pub annihilator_dim: usize,
    pub annihilator_basis: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normal_form: Option<NormalFormDoc>,
    /// 1-based index pairs of the sign-pair blocks in the block form.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_pairs: Option<Vec<(usize, usize)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub supersolvable_flag: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subalgebras: Option<SubalgebrasDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeDoc>,
    pub notes: Vec<String>,
}

pub fn subspace_strings(s: &Subspace) -> Vec<String> {
    s.basis_strings()
}

pub fn verdict_from_structure(
    name: Option<String>,
    a: &EvolutionAlgebra,
    v: &StructureVerdict,
) -> VerdictDocument {
    let ann = a.annihilator();
    VerdictDocument {
        schema: 1,
        name,
        field: FieldDoc::from_spec(a.spec()),
        dim: v.dim,
        flags: FlagsDoc {
            nilpotent: v.nilpotent,
            solvable: v.solvable,
            degenerate: v.degenerate,
            max_solvability_index: v.max_solvability_index,
            max_nilpotency_index: v.max_nilpotency_index,
            supersolvable: v.supersolvable,
        },
        indices: IndicesDoc { nilpotency: v.nilpotency_index, solvability: v.solvability_index },
        series: SeriesDoc {
            lower_central_dims: v.lower_central_dims.clone(),
            derived_dims: v.derived_dims.clone(),
        },
        annihilator_dim: v.annihilator_dim,
        annihilator_basis: subspace_strings(&ann),
        normal_form: v.dependency_form.as_ref().map(|f| NormalFormDoc {
            permutation: f.perm.iter().map(|&i| i + 1).collect(),
            scaling: f.scaling.iter().map(|s| s.to_string()).collect(),
            m: f.m,
        }),
        lambda_pairs: v
            .block_form
            .as_ref()
            .map(|f| f.pair_blocks.iter().map(|&(i, j)| (i + 1, j + 1)).collect()),
        supersolvable_flag: v
            .flag
            .as_ref()
            .map(|flag| flag.iter().map(|g| g.basis_combo_string()).collect()),
        subalgebras: None,
        lattice: None,
        notes: Vec::new(),
    }
}
