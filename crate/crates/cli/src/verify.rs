//! Verification suites: randomized theorem checks and the golden corpus.

use serde::Deserialize;

use evolab::algebra::EvolutionAlgebra;
use evolab::families::{
    absorb_nilpotent_part, family_two, random_algebra, FamilyOneSpec, FamilyTwoSpec, RandomProfile,
};
use evolab::field::FieldSpec;
use evolab::lattice::{build_lattice, Lattice};
use evolab::linalg::{all_subspaces, Matrix, Subspace, DEFAULT_ENUMERATION_CAP};
use evolab::structure::{
    self, derived_series_basic_pattern, max_solvable_normal_form,
    max_solvable_supersolvable_equivalence, modularity_criterion_max_solvable,
    nilpotent_distributivity_bundle, nilpotent_modularity_checks,
};
use evolab::subalgebras::{
    enumerate_auto, enumerate_brute_force, enumerate_structural, is_quasi_ideal,
    onedim_subalgebras_max_solvable,
};

use crate::doc::{AlgebraDocument, Entry};
use crate::Failure;

fn gf(p: u64) -> FieldSpec {
    FieldSpec::gf(p).unwrap()
}

struct Tally {
    name: &'static str,
    pass: usize,
    fail: usize,
}

impl Tally {
    fn new(name: &'static str) -> Tally {
        Tally { name, pass: 0, fail: 0 }
    }

    fn record(&mut self, ok: bool, context: impl Fn() -> String) {
        if ok {
            self.pass += 1;
        } else {
            self.fail += 1;
            println!("[FAIL] {}: {}", self.name, context());
        }
    }

    fn report(&self) -> usize {
        println!("{}: {}/{}", self.name, self.pass, self.pass + self.fail);
        self.fail
    }
}

pub fn run_nilpotent(seed: u64, count: usize) -> Result<usize, Failure> {
    let mut agreement = Tally::new("nilpotent four-way equivalence");
    let mut necessary = Tally::new("nilpotent modularity necessary condition");
    for i in 0..count {
        let n = 3 + i % 3;
        let a = random_algebra(gf(3), n, RandomProfile::StrictUpperTriangular, seed + i as u64)
            .map_err(|e| Failure::new(6, e.to_string()))?;
        let bundle =
            nilpotent_distributivity_bundle(&a).map_err(|e| Failure::new(6, e.to_string()))?;
        agreement.record(bundle.agree, || format!("sample {i}:\n{a}\n{bundle:?}"));
        let report =
            nilpotent_modularity_checks(&a).map_err(|e| Failure::new(6, e.to_string()))?;
        necessary.record(!report.necessary_condition_violated, || format!("sample {i}:\n{a}"));
    }
    Ok(agreement.report() + necessary.report())
}

pub fn run_maxsolvable(seed: u64, count: usize) -> Result<usize, Failure> {
    let f = gf(5);
    let mut sign_count = Tally::new("maxsolvable sign-pattern count = 2^m");
    let mut oracle = Tally::new("maxsolvable line oracle agreement");
    let mut equivalence = Tally::new("maxsolvable supersolvability equivalence");
    let mut criterion = Tally::new("maxsolvable modularity criterion vs lattice");
    for i in 0..count {
        let n = 3 + i % 3;
        let a = random_algebra(f, n, RandomProfile::MaxSolvable, seed + i as u64)
            .map_err(|e| Failure::new(6, e.to_string()))?;
        let nf = max_solvable_normal_form(&a).map_err(|e| Failure::new(6, e.to_string()))?;
        let lines = onedim_subalgebras_max_solvable(&a)
            .map_err(|e| Failure::new(6, e.to_string()))?;
        sign_count.record(lines.len() == 1 << nf.m, || format!("sample {i}:\n{a}"));

        let mut brute: Vec<Subspace> = all_subspaces(f, n, Some(1), DEFAULT_ENUMERATION_CAP)
            .map_err(|e| Failure::new(6, e.to_string()))?
            .filter(|s| a.is_subalgebra_subspace(s).unwrap_or(false))
            .collect();
        brute.sort();
        oracle.record(lines == brute, || format!("sample {i}:\n{a}"));

        let eq = max_solvable_supersolvable_equivalence(&a)
            .map_err(|e| Failure::new(6, e.to_string()))?;
        equivalence.record(eq.agree, || format!("sample {i}:\n{a}"));

        if n <= 4 {
            let crit = modularity_criterion_max_solvable(&a)
                .map_err(|e| Failure::new(6, e.to_string()))?;
            let set = enumerate_brute_force(&a, DEFAULT_ENUMERATION_CAP)
                .map_err(|e| Failure::new(6, e.to_string()))?;
            let lattice = build_lattice(&a, &set).map_err(|e| Failure::new(6, e.to_string()))?;
            criterion
                .record(crit.modular == lattice.is_modular().0, || format!("sample {i}:\n{a}"));
        }
    }
    Ok(sign_count.report() + oracle.report() + equivalence.report() + criterion.report())
}

pub fn run_families(seed: u64, count: usize) -> Result<usize, Failure> {
    let mut solvable = Tally::new("families members solvable");
    let mut supersolvable = Tally::new("families members supersolvable");
    let mut lsemi = Tally::new("families members lower semimodular");
    let mut onedir = Tally::new("families max-index => distributive => modular");
    let mut absorb = Tally::new("families nilpotent-part absorption");
    // The full three-way equivalence assumes a quadratically closed field;
    // over GF(p) a modular member without maximum index is a permitted
    // deviation, counted rather than failed.
    let mut deviations = 0usize;
    for i in 0..count {
        let p = if i % 2 == 0 { 3 } else { 5 };
        let n = 3 + i % 3;
        let a = random_algebra(gf(p), n, RandomProfile::FamilyTwo, seed + i as u64)
            .map_err(|e| Failure::new(6, e.to_string()))?;
        solvable.record(a.is_solvable(), || format!("sample {i}:\n{a}"));
        supersolvable.record(structure::is_supersolvable(&a).0, || format!("sample {i}:\n{a}"));
        let set = enumerate_brute_force(&a, DEFAULT_ENUMERATION_CAP)
            .map_err(|e| Failure::new(6, e.to_string()))?;
        let lattice = build_lattice(&a, &set).map_err(|e| Failure::new(6, e.to_string()))?;
        lsemi.record(lattice.is_lower_semimodular().0, || format!("sample {i}:\n{a}"));
        if !a.is_nilpotent() {
            let distributive = lattice.is_distributive().0;
            let modular = lattice.is_modular().0;
            let max_index = structure::has_max_solvability_index(&a)
                .map_err(|e| Failure::new(6, e.to_string()))?;
            onedir.record(
                (!max_index || distributive) && (!distributive || modular),
                || format!("sample {i}:\n{a}"),
            );
            if modular && !max_index {
                deviations += 1;
            }
        }

        // Absorption of a nilpotent part, on a deterministic two-part spec.
        let f = gf(p);
        let live = FamilyOneSpec::from_i64(f, 2, &[1, -1])
            .map_err(|e| Failure::new(6, e.to_string()))?;
        let x = 1 + (i as i64 % (p as i64 - 1));
        let dead = FamilyOneSpec::from_i64(f, 1, &[0, x])
            .map_err(|e| Failure::new(6, e.to_string()))?;
        let c = Matrix::from_i64_rows(f, &[vec![i as i64 % p as i64, 1, 0, 2]]);
        let l = Matrix::zeros(f, 1, 1);
        let spec = FamilyTwoSpec::new(vec![live, dead], c, l)
            .map_err(|e| Failure::new(6, e.to_string()))?;
        let original = family_two(&spec).map_err(|e| Failure::new(6, e.to_string()))?;
        let (reduced, perm) =
            absorb_nilpotent_part(&spec, 1).map_err(|e| Failure::new(6, e.to_string()))?;
        let rebuilt = family_two(&reduced).map_err(|e| Failure::new(6, e.to_string()))?;
        let d = original.dim();
        let matches = (0..d).all(|r| {
            (0..d).all(|c| {
                rebuilt.structure_matrix().get(r, c)
                    == original.structure_matrix().get(perm[r], perm[c])
            })
        });
        absorb.record(matches, || format!("sample {i}"));
    }
    println!("families expected deviations (modular without maximum index): {deviations}");
    Ok(solvable.report()
        + supersolvable.report()
        + lsemi.report()
        + onedir.report()
        + absorb.report())
}

// ---------------------------------------------------------------------------
// Golden corpus

#[derive(Debug, Deserialize)]
struct CorpusDocument {
    #[serde(flatten)]
    algebra: AlgebraDocument,
    #[serde(default)]
    notes: Option<String>,
    #[serde(default)]
    expect: Expect,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Expect {
    solvable: Option<bool>,
    nilpotent: Option<bool>,
    solvability_index: Option<usize>,
    nilpotency_index: Option<usize>,
    derived_dims: Option<Vec<usize>>,
    max_solvability_index: Option<bool>,
    max_nilpotency_index: Option<bool>,
    supersolvable: Option<bool>,
    degenerate: Option<bool>,
    annihilator_dim: Option<usize>,
    onedim_ideal_count: Option<usize>,
    normal_form_m: Option<usize>,
    derived_pattern: Option<bool>,
    lambda_pair_count: Option<usize>,
    criterion_modular: Option<bool>,
    criterion_witness: Option<Vec<Vec<Entry>>>,
    enumeration: Option<String>,
    subalgebra_count: Option<usize>,
    subalgebra_dim_histogram: Option<Vec<usize>>,
    onedim_subalgebra_count: Option<usize>,
    contains_subalgebras: Option<Vec<Vec<Vec<Entry>>>>,
    modular: Option<bool>,
    distributive: Option<bool>,
    upper_semimodular: Option<bool>,
    lower_semimodular: Option<bool>,
    j_algebra: Option<bool>,
    pentagon: Option<bool>,
    diamond: Option<bool>,
    quasi_ideals: Option<Vec<Vec<Vec<Entry>>>>,
    not_quasi_ideal: Option<Vec<Vec<Vec<Entry>>>>,
}

macro_rules! corpus_file {
    ($name:literal) => {
        (
            $name,
            include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/", $name, ".json")),
        )
    };
}

pub(crate) const CORPUS: &[(&str, &str)] = &[
    corpus_file!("maxsolv_dim3_four_atoms_q"),
    corpus_file!("maxsolv_dim3_four_atoms_gf7"),
    corpus_file!("maxsolv_dim3_rhombus_stem_q"),
    corpus_file!("maxsolv_dim3_rhombus_stem_gf5"),
    corpus_file!("maxsolv_dim3_nonbasic_square_gf5"),
    corpus_file!("maxsolv_dim4_two_pairs_modular_gf5"),
    corpus_file!("maxsolv_dim4_two_pairs_twisted_gf5"),
    corpus_file!("nilpotent_dim3_sum_squares_gf3"),
    corpus_file!("nilpotent_dim3_sum_squares_gf5"),
    corpus_file!("nilpotent_dim3_wide_annihilator_gf3"),
    corpus_file!("nilpotent_dim6_quasi_failure_gf3"),
    corpus_file!("regular_dim3_q"),
    corpus_file!("solvable_dim3_twisted_q"),
    corpus_file!("solv_dim4_chain_blocks_q"),
];

fn parse_subspace(
    spec: FieldSpec,
    dim: usize,
    rows: &[Vec<Entry>],
) -> Result<Subspace, String> {
    let mut vectors = Vec::with_capacity(rows.len());
    for row in rows {
        let mut coords = Vec::with_capacity(row.len());
        for e in row {
            let s = match e {
                Entry::Int(v) => evolab::field::Scalar::from_i64(spec, *v),
                Entry::Text(t) => {
                    evolab::field::Scalar::parse(spec, t).map_err(|e| e.to_string())?
                }
            };
            coords.push(s);
        }
        vectors.push(evolab::linalg::Vector::new(spec, coords));
    }
    Subspace::span(spec, dim, &vectors).map_err(|e| e.to_string())
}

struct GoldenChecker<'a> {
    name: &'a str,
    failures: usize,
    checks: usize,
}

impl<'a> GoldenChecker<'a> {
    fn assert_eq<T: PartialEq + std::fmt::Debug>(&mut self, key: &str, want: &T, got: &T) {
        self.checks += 1;
        if want == got {
            println!("[ok]   {} :: {key}", self.name);
        } else {
            self.failures += 1;
            println!("[FAIL] {} :: {key}: expected {want:?}, got {got:?}", self.name);
        }
    }
}

pub fn run_golden_examples() -> Result<usize, Failure> {
    let mut failures = 0;
    let mut total_checks = 0;
    for (name, text) in CORPUS {
        let parsed: CorpusDocument = serde_json::from_str(text)
            .map_err(|e| Failure::new(2, format!("corpus {name}: {e}")))?;
        let _ = &parsed.notes;
        let algebra = parsed
            .algebra
            .to_algebra()
            .map_err(|e| Failure::new(2, format!("corpus {name}: {e}")))?;
        let n = check_document(name, &algebra, &parsed.expect)
            .map_err(|e| Failure::new(6, format!("corpus {name}: {e}")))?;
        failures += n.0;
        total_checks += n.1;
    }
    println!("golden corpus: {} checks, {failures} failures", total_checks);
    Ok(failures)
}

fn check_document(
    name: &str,
    a: &EvolutionAlgebra,
    expect: &Expect,
) -> Result<(usize, usize), String> {
    let mut c = GoldenChecker { name, failures: 0, checks: 0 };
    let verdict = structure::analyze(a);

    if let Some(want) = expect.solvable {
        c.assert_eq("solvable", &want, &verdict.solvable);
    }
    if let Some(want) = expect.nilpotent {
        c.assert_eq("nilpotent", &want, &verdict.nilpotent);
    }
    if let Some(want) = expect.solvability_index {
        c.assert_eq("solvability_index", &Some(want), &verdict.solvability_index);
    }
    if let Some(want) = expect.nilpotency_index {
        c.assert_eq("nilpotency_index", &Some(want), &verdict.nilpotency_index);
    }
    if let Some(want) = &expect.derived_dims {
        c.assert_eq("derived_dims", want, &verdict.derived_dims);
    }
    if let Some(want) = expect.max_solvability_index {
        c.assert_eq("max_solvability_index", &want, &verdict.max_solvability_index);
    }
    if let Some(want) = expect.max_nilpotency_index {
        c.assert_eq("max_nilpotency_index", &want, &verdict.max_nilpotency_index);
    }
    if let Some(want) = expect.supersolvable {
        c.assert_eq("supersolvable", &want, &verdict.supersolvable);
    }
    if let Some(want) = expect.degenerate {
        c.assert_eq("degenerate", &want, &verdict.degenerate);
    }
    if let Some(want) = expect.annihilator_dim {
        c.assert_eq("annihilator_dim", &want, &verdict.annihilator_dim);
    }
    if let Some(want) = expect.onedim_ideal_count {
        c.assert_eq("onedim_ideal_count", &want, &structure::onedim_ideals(a).len());
    }
    if let Some(want) = expect.normal_form_m {
        let got = max_solvable_normal_form(a).map_err(|e| e.to_string())?;
        c.assert_eq("normal_form_m", &want, &got.m);
    }
    if let Some(want) = expect.derived_pattern {
        let got = derived_series_basic_pattern(a).map_err(|e| e.to_string())?;
        c.assert_eq("derived_pattern", &want, &got.0);
    }
    if let Some(want) = expect.lambda_pair_count {
        let got = verdict.lambda_pairs().map(|p| p.len());
        c.assert_eq("lambda_pair_count", &Some(want), &got);
    }
    if let Some(want) = expect.criterion_modular {
        let crit = modularity_criterion_max_solvable(a).map_err(|e| e.to_string())?;
        c.assert_eq("criterion_modular", &want, &crit.modular);
        if let Some(rows) = &expect.criterion_witness {
            let expected = parse_subspace(a.spec(), a.dim(), rows)?;
            c.assert_eq("criterion_witness", &Some(expected), &crit.witness);
        }
    }

    let needs_lattice = expect.subalgebra_count.is_some()
        || expect.subalgebra_dim_histogram.is_some()
        || expect.onedim_subalgebra_count.is_some()
        || expect.contains_subalgebras.is_some()
        || expect.modular.is_some()
        || expect.distributive.is_some()
        || expect.upper_semimodular.is_some()
        || expect.lower_semimodular.is_some()
        || expect.j_algebra.is_some()
        || expect.pentagon.is_some()
        || expect.diamond.is_some()
        || expect.quasi_ideals.is_some()
        || expect.not_quasi_ideal.is_some();
    if !needs_lattice {
        return Ok((c.failures, c.checks));
    }

    let set = match expect.enumeration.as_deref() {
        Some("brute") => enumerate_brute_force(a, DEFAULT_ENUMERATION_CAP),
        Some("structural") => enumerate_structural(a),
        _ => enumerate_auto(a, DEFAULT_ENUMERATION_CAP),
    }
    .map_err(|e| e.to_string())?;

    if let Some(want) = expect.subalgebra_count {
        c.assert_eq("subalgebra_count", &want, &set.len());
    }
    if let Some(want) = &expect.subalgebra_dim_histogram {
        c.assert_eq("subalgebra_dim_histogram", want, &set.dim_histogram());
    }
    if let Some(want) = expect.onedim_subalgebra_count {
        c.assert_eq("onedim_subalgebra_count", &want, &set.dim_histogram()[1]);
    }
    if let Some(list) = &expect.contains_subalgebras {
        for rows in list {
            let s = parse_subspace(a.spec(), a.dim(), rows)?;
            c.assert_eq(&format!("contains {s}"), &true, &set.contains(&s));
        }
    }
    if let Some(list) = &expect.quasi_ideals {
        for rows in list {
            let s = parse_subspace(a.spec(), a.dim(), rows)?;
            let (ok, _) = is_quasi_ideal(a, &s, &set).map_err(|e| e.to_string())?;
            c.assert_eq(&format!("quasi-ideal {s}"), &true, &ok);
        }
    }
    if let Some(list) = &expect.not_quasi_ideal {
        for rows in list {
            let s = parse_subspace(a.spec(), a.dim(), rows)?;
            let (ok, _) = is_quasi_ideal(a, &s, &set).map_err(|e| e.to_string())?;
            c.assert_eq(&format!("not-quasi-ideal {s}"), &false, &ok);
        }
    }

    let lattice: Lattice = build_lattice(a, &set).map_err(|e| e.to_string())?;
    if let Some(want) = expect.modular {
        c.assert_eq("modular", &want, &lattice.is_modular().0);
    }
    if let Some(want) = expect.distributive {
        c.assert_eq("distributive", &want, &lattice.is_distributive().0);
    }
    if let Some(want) = expect.upper_semimodular {
        c.assert_eq("upper_semimodular", &want, &lattice.is_upper_semimodular().0);
    }
    if let Some(want) = expect.lower_semimodular {
        c.assert_eq("lower_semimodular", &want, &lattice.is_lower_semimodular().0);
    }
    if let Some(want) = expect.j_algebra {
        c.assert_eq("j_algebra", &want, &lattice.is_j_algebra().0);
    }
    if let Some(want) = expect.pentagon {
        c.assert_eq("pentagon", &want, &lattice.find_pentagon().is_some());
    }
    if let Some(want) = expect.diamond {
        c.assert_eq("diamond", &want, &lattice.find_diamond().is_some());
    }
    Ok((c.failures, c.checks))
}
