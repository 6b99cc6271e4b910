//! JSON documents for modules, comodule objects, dual presentations,
//! dimension reports and classification results.
//!
//! Matrices are row-major lists of rows with entries written as `"p/q"`
//! strings (`"3"` when the denominator is one).

use bocs_core::bocs::{display_poly, tensor_name, Bocs, ValidationReport};
use bocs_core::classify::ClassificationReport;
use bocs_core::dg::Word;
use bocs_core::koszul::{DimReport, DualError, DualPresentation, RegStep};
use bocs_core::linalg::Matrix;
use bocs_core::rep::{BocsComplex, BocsModule, BocsMorphism, SData};
use bocs_core::scalar::{fmt_q, parse_q};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error(transparent)]
    Syntax(#[from] serde_json::Error),
    #[error("{0}")]
    Content(String),
}

fn content<T>(msg: impl Into<String>) -> Result<T, JsonError> {
    Err(JsonError::Content(msg.into()))
}

pub type MatrixJson = Vec<Vec<String>>;

pub fn matrix_to_json(m: &Matrix) -> MatrixJson {
    (0..m.rows).map(|r| (0..m.cols).map(|c| fmt_q(&m[(r, c)])).collect()).collect()
}

/// Reads a matrix; `rows x cols` is needed for empty shapes.
pub fn matrix_from_json(m: &MatrixJson, rows: usize, cols: usize) -> Result<Matrix, JsonError> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return content(format!("expected a {rows} x {cols} matrix"));
    }
    let mut out = Matrix::zeros(rows, cols);
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            match parse_q(x) {
                Some(q) => out[(i, j)] = q,
                None => return content(format!("bad rational entry '{x}'")),
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub dims: Vec<usize>,
    /// Action of each solid arrow, a `dim(target) x dim(source)` matrix.
    pub action: BTreeMap<String, MatrixJson>,
}

impl ModuleJson {
    pub fn from_module(b: &Bocs, m: &BocsModule) -> Self {
        let action = m.action.iter().map(|(g, a)| (b.gens()[*g].name.clone(), matrix_to_json(a))).collect();
        ModuleJson { dims: m.dims.clone(), action }
    }

    pub fn to_module(&self, b: &Bocs) -> Result<BocsModule, JsonError> {
        if self.dims.len() != b.n() {
            return content(format!("dimension vector has {} entries, expected {}", self.dims.len(), b.n()));
        }
        let mut m = BocsModule::zero(b, self.dims.clone());
        for (name, a) in &self.action {
            let g = match b.gens().iter().position(|g| &g.name == name && g.deg == 0) {
                Some(g) => g,
                None => return content(format!("unknown solid arrow '{name}'")),
            };
            let gen = &b.gens()[g];
            m.action.insert(g, matrix_from_json(a, self.dims[gen.tgt - 1], self.dims[gen.src - 1])?);
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    /// Component at each grouplike `ω_i`.
    pub omega: Vec<MatrixJson>,
    pub dashed: BTreeMap<String, MatrixJson>,
}

impl MorphismJson {
    pub fn from_morphism(b: &Bocs, f: &BocsMorphism) -> Self {
        MorphismJson {
            omega: f.omega.iter().map(matrix_to_json).collect(),
            dashed: f.dashed.iter().map(|(g, m)| (b.gens()[*g].name.clone(), matrix_to_json(m))).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    /// Degree of the first term.
    pub lo: i32,
    pub dims: Vec<Vec<usize>>,
    pub terms: Vec<ModuleJson>,
    pub differentials: Vec<MorphismJson>,
}

impl ComplexJson {
    pub fn from_complex(b: &Bocs, c: &BocsComplex) -> Self {
        ComplexJson {
            lo: c.lo,
            dims: c.terms.iter().map(|t| t.dims.clone()).collect(),
            terms: c.terms.iter().map(|t| ModuleJson::from_module(b, t)).collect(),
            differentials: c.diffs.iter().map(|d| MorphismJson::from_morphism(b, d)).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectKind {
    Object,
    Morphism,
}

/// A graded vector space over the vertices with a basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceJson {
    /// Vertex of each basis vector.
    pub vertex: Vec<usize>,
    pub labels: Vec<String>,
    /// `s(x̂)` for basis elements `x` of `V̄`, as `dim x dim` matrices.
    /// Missing entries are zero.
    pub maps: BTreeMap<String, MatrixJson>,
}

/// An object `(Y, s_Y)` or a morphism `s_f: Y → Z`, in the dual form;
/// the `c`-form is obtained by the inverse correspondence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectJson {
    pub kind: ObjectKind,
    pub source: SpaceJson,
    /// Target object of a morphism.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<SpaceJson>,
    /// `s_f(p̂)` for basis paths `p` of `A`, as `dim Z x dim Y` matrices.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub maps: BTreeMap<String, MatrixJson>,
}

fn named_basis(b: &Bocs, basis: &[Word]) -> BTreeMap<String, usize> {
    basis.iter().enumerate().map(|(i, w)| (tensor_name(b.gens(), w), i)).collect()
}

fn sdata_from(
    b: &Bocs,
    basis: &[Word],
    maps: &BTreeMap<String, MatrixJson>,
    rows: usize,
    cols: usize,
) -> Result<SData, JsonError> {
    let names = named_basis(b, basis);
    let mut out = vec![Matrix::zeros(rows, cols); basis.len()];
    for (name, m) in maps {
        let Some(&k) = names.get(name) else {
            return content(format!("'{name}' is not a basis element"));
        };
        out[k] = matrix_from_json(m, rows, cols)?;
    }
    Ok(SData { basis: basis.to_vec(), maps: out, shape: (rows, cols) })
}

fn sdata_to(b: &Bocs, s: &SData) -> BTreeMap<String, MatrixJson> {
    s.basis
        .iter()
        .zip(&s.maps)
        .filter(|(_, m)| !m.is_zero())
        .map(|(w, m)| (tensor_name(b.gens(), w), matrix_to_json(m)))
        .collect()
}

impl SpaceJson {
    pub fn dim(&self) -> usize {
        self.vertex.len()
    }

    pub fn sdata(&self, b: &Bocs) -> Result<SData, JsonError> {
        if self.labels.len() != self.vertex.len() {
            return content("labels and vertex lists differ in length");
        }
        if let Some(v) = self.vertex.iter().find(|&&v| v == 0 || v > b.n()) {
            return content(format!("vertex {v} out of range"));
        }
        sdata_from(b, &b.vbar_basis, &self.maps, self.dim(), self.dim())
    }

    pub fn from_sdata(b: &Bocs, vertex: Vec<usize>, labels: Vec<String>, s: &SData) -> Self {
        SpaceJson { vertex, labels, maps: sdata_to(b, s) }
    }
}

impl ObjectJson {
    pub fn morphism_data(&self, b: &Bocs) -> Result<SData, JsonError> {
        let Some(t) = &self.target else {
            return content("a morphism needs a target");
        };
        sdata_from(b, &b.a_basis, &self.maps, t.dim(), self.source.dim())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationJson {
    pub generator: String,
    pub residue: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationJson {
    pub passed: bool,
    pub violations: Vec<ViolationJson>,
}

impl From<&ValidationReport> for ValidationJson {
    fn from(r: &ValidationReport) -> Self {
        ValidationJson {
            passed: r.passed(),
            violations: r
                .violations
                .iter()
                .map(|v| ViolationJson { generator: v.generator.clone(), residue: v.residue.clone() })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountsJson {
    pub relations: usize,
    pub solid: usize,
    pub dashed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepJson {
    pub removed: String,
    pub with: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualJson {
    pub ringel: bool,
    pub vertices: usize,
    pub counts: CountsJson,
    /// Generators of degree `-1`, each standing for one relation.
    pub relation_generators: Vec<GeneratorJson>,
    pub solid: Vec<GeneratorJson>,
    pub dashed: Vec<GeneratorJson>,
    /// Relations among the solid generators.
    pub relations: Vec<String>,
    pub differentials: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub steps: Vec<StepJson>,
}

impl DualJson {
    pub fn new(p: &DualPresentation, steps: &[RegStep]) -> Result<Self, DualError> {
        let q = &p.dg;
        let gens = |deg: i32| {
            q.gens
                .iter()
                .filter(|g| g.deg == deg)
                .map(|g| GeneratorJson { name: g.name.clone(), source: g.src, target: g.tgt })
                .collect::<Vec<_>>()
        };
        let rel = p.as_bocs()?;
        Ok(DualJson {
            ringel: p.ringel,
            vertices: q.n,
            counts: CountsJson { relations: p.relation_count(), solid: q.count(0), dashed: q.count(1) },
            relation_generators: gens(-1),
            solid: gens(0),
            dashed: gens(1),
            relations: rel.relations.iter().map(|r| display_poly(&rel.gens, r)).collect(),
            differentials: q
                .gens
                .iter()
                .zip(&q.diff)
                .filter(|(_, d)| !d.is_zero())
                .map(|(g, d)| (g.name.clone(), display_poly(&q.gens, d)))
                .collect(),
            steps: steps.iter().map(|s| StepJson { removed: s.removed.clone(), with: s.with.clone() }).collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimJson {
    pub solid: Vec<Vec<usize>>,
    pub dashed: Vec<Vec<usize>>,
    pub hom: Vec<Vec<usize>>,
    pub ext: Vec<Vec<usize>>,
    pub dim_a: usize,
    pub dim_vbar: usize,
    pub right_algebra: usize,
}

impl From<&DimReport> for DimJson {
    fn from(r: &DimReport) -> Self {
        DimJson {
            solid: r.solid.clone(),
            dashed: r.dashed.clone(),
            hom: r.hom.clone(),
            ext: r.ext.clone(),
            dim_a: r.dim_a,
            dim_vbar: r.dim_vbar,
            right_algebra: r.right_algebra,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassJson {
    pub label: String,
    pub differential: BTreeMap<String, String>,
    pub ringel_dual_label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcludedJson {
    pub candidate: String,
    pub reason: String,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationJson {
    pub n: usize,
    pub classes: Vec<ClassJson>,
    pub excluded: Vec<ExcludedJson>,
}

impl From<&ClassificationReport> for ClassificationJson {
    fn from(r: &ClassificationReport) -> Self {
        ClassificationJson {
            n: r.n,
            classes: r
                .classes
                .iter()
                .zip(&r.ringel)
                .map(|(c, d)| ClassJson {
                    label: c.label.clone(),
                    differential: c.differential().into_iter().collect(),
                    ringel_dual_label: d.clone(),
                })
                .collect(),
            excluded: r
                .excluded
                .iter()
                .map(|e| ExcludedJson {
                    candidate: e.candidate.label.clone(),
                    reason: e.reason.code().to_string(),
                    witness: e.witness.clone(),
                })
                .collect(),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable");
    s.push('\n');
    s
}
