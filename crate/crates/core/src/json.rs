//! JSON exchange formats. Every rational is a `"num/den"` string, so files
//! round-trip bit-exactly.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bounds::HypothesisReport;
use crate::error::{Error, Result};
use crate::extension::CommutingExtension;
use crate::field::{format_rational, parse_rational, Rational};
use crate::instances::{PlantParams, PlantedInstance};
use crate::linalg::Matrix;
use crate::tensor::{Decomposition, RankOneTerm, Tensor3};

pub type MatrixJson = Vec<Vec<String>>;

pub fn vector_to_json(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

pub fn vector_from_json(v: &[String]) -> Result<Vec<Rational>> {
    v.iter().map(|s| parse_rational(s)).collect()
}

pub fn matrix_to_json(m: &Matrix<Rational>) -> MatrixJson {
    m.to_rows().iter().map(|row| vector_to_json(row)).collect()
}

/// `cols` is needed when there are no rows.
pub fn matrix_from_json(rows: &MatrixJson, cols: usize) -> Result<Matrix<Rational>> {
    if rows.is_empty() {
        return Ok(Matrix::zeros(0, cols));
    }
    let parsed = rows.iter().map(|r| vector_from_json(r)).collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(parsed)
}

fn expect_shape(m: &Matrix<Rational>, rows: usize, cols: usize, what: &str) -> Result<()> {
    if m.shape() != (rows, cols) {
        return Err(Error::Parse(format!("{what} is {:?}, expected {rows}x{cols}", m.shape())));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorJson {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub slices: Vec<MatrixJson>,
}

impl From<&Tensor3<Rational>> for TensorJson {
    fn from(t: &Tensor3<Rational>) -> Self {
        Self {
            m: t.m(),
            n: t.n(),
            p: t.p(),
            slices: t.slices().iter().map(matrix_to_json).collect(),
        }
    }
}

impl TryFrom<&TensorJson> for Tensor3<Rational> {
    type Error = Error;

    fn try_from(j: &TensorJson) -> Result<Self> {
        if j.slices.len() != j.p {
            return Err(Error::Parse(format!("p = {} but {} slices", j.p, j.slices.len())));
        }
        let slices = j
            .slices
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let m = matrix_from_json(s, j.n)?;
                expect_shape(&m, j.m, j.n, &format!("slice {k}"))?;
                Ok(m)
            })
            .collect::<Result<Vec<_>>>()?;
        Tensor3::from_slices(j.m, j.n, slices)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub u: Vec<String>,
    pub v: Vec<String>,
    pub w: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionJson {
    pub format: [usize; 3],
    pub terms: Vec<TermJson>,
}

impl From<&Decomposition<Rational>> for DecompositionJson {
    fn from(d: &Decomposition<Rational>) -> Self {
        let (m, n, p) = d.format();
        Self {
            format: [m, n, p],
            terms: d
                .terms()
                .iter()
                .map(|t| TermJson {
                    u: vector_to_json(&t.u),
                    v: vector_to_json(&t.v),
                    w: vector_to_json(&t.w),
                })
                .collect(),
        }
    }
}

impl TryFrom<&DecompositionJson> for Decomposition<Rational> {
    type Error = Error;

    fn try_from(j: &DecompositionJson) -> Result<Self> {
        let terms = j
            .terms
            .iter()
            .map(|t| Ok(RankOneTerm::new(vector_from_json(&t.u)?, vector_from_json(&t.v)?, vector_from_json(&t.w)?)))
            .collect::<Result<Vec<_>>>()?;
        let [m, n, p] = j.format;
        Decomposition::new((m, n, p), terms)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionJson {
    pub n: usize,
    pub r: usize,
    #[serde(rename = "Z")]
    pub z: Vec<MatrixJson>,
}

impl From<&CommutingExtension<Rational>> for ExtensionJson {
    fn from(e: &CommutingExtension<Rational>) -> Self {
        Self {
            n: e.n(),
            r: e.r(),
            z: e.zs().iter().map(matrix_to_json).collect(),
        }
    }
}

impl TryFrom<&ExtensionJson> for CommutingExtension<Rational> {
    type Error = Error;

    fn try_from(j: &ExtensionJson) -> Result<Self> {
        let zs = j
            .z
            .iter()
            .map(|z| matrix_from_json(z, j.r))
            .collect::<Result<Vec<_>>>()?;
        CommutingExtension::new(j.n, j.r, zs)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProvenanceJson {
    pub seed: u64,
    pub n: usize,
    pub r: usize,
    pub p: usize,
    pub coeff_bound: i64,
    pub resamples: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantedInstanceJson {
    pub tensor: TensorJson,
    pub plant: DecompositionJson,
    pub provenance: ProvenanceJson,
}

impl From<&PlantedInstance<Rational>> for PlantedInstanceJson {
    fn from(i: &PlantedInstance<Rational>) -> Self {
        Self {
            tensor: (&i.tensor).into(),
            plant: (&i.plant).into(),
            provenance: ProvenanceJson {
                seed: i.seed,
                n: i.params.n,
                r: i.params.r,
                p: i.params.p,
                coeff_bound: i.params.coeff_bound,
                resamples: i.resamples,
            },
        }
    }
}

impl TryFrom<&PlantedInstanceJson> for PlantedInstance<Rational> {
    type Error = Error;

    fn try_from(j: &PlantedInstanceJson) -> Result<Self> {
        let pr = &j.provenance;
        Ok(PlantedInstance {
            tensor: (&j.tensor).try_into()?,
            plant: (&j.plant).try_into()?,
            seed: pr.seed,
            params: PlantParams {
                n: pr.n,
                r: pr.r,
                p: pr.p,
                coeff_bound: pr.coeff_bound,
            },
            resamples: pr.resamples,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndexedDim {
    pub indices: Vec<usize>,
    pub dim: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HypothesisReportJson {
    pub n: usize,
    pub r: usize,
    pub pair_dims: Vec<IndexedDim>,
    pub triple_dims: Vec<IndexedDim>,
    pub satisfied_triples: Vec<[usize; 3]>,
    pub chain_ok: bool,
}

impl From<&HypothesisReport> for HypothesisReportJson {
    fn from(h: &HypothesisReport) -> Self {
        Self {
            n: h.n,
            r: h.r,
            pair_dims: h
                .pair_dims
                .iter()
                .map(|(&(k, l), &dim)| IndexedDim { indices: vec![k, l], dim })
                .collect(),
            triple_dims: h
                .triple_dims
                .iter()
                .map(|(&(k, l, m), &dim)| IndexedDim { indices: vec![k, l, m], dim })
                .collect(),
            satisfied_triples: h.satisfied_triples.iter().map(|&(a, b, c)| [a, b, c]).collect(),
            chain_ok: h.chain_ok,
        }
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn render<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

pub fn tensor_to_string(t: &Tensor3<Rational>) -> String {
    render(&TensorJson::from(t))
}

pub fn tensor_from_str(text: &str) -> Result<Tensor3<Rational>> {
    (&parse::<TensorJson>(text, "tensor")?).try_into()
}

pub fn decomposition_to_string(d: &Decomposition<Rational>) -> String {
    render(&DecompositionJson::from(d))
}

pub fn decomposition_from_str(text: &str) -> Result<Decomposition<Rational>> {
    (&parse::<DecompositionJson>(text, "decomposition")?).try_into()
}

pub fn extension_to_string(e: &CommutingExtension<Rational>) -> String {
    render(&ExtensionJson::from(e))
}

pub fn extension_from_str(text: &str) -> Result<CommutingExtension<Rational>> {
    (&parse::<ExtensionJson>(text, "extension")?).try_into()
}

pub fn instance_to_string(i: &PlantedInstance<Rational>) -> String {
    render(&PlantedInstanceJson::from(i))
}

pub fn instance_from_str(text: &str) -> Result<PlantedInstance<Rational>> {
    (&parse::<PlantedInstanceJson>(text, "planted instance")?).try_into()
}

/// Reads a tensor from either a bare tensor file or a planted-instance
/// file.
pub fn tensor_from_any_str(text: &str) -> Result<Tensor3<Rational>> {
    let value: Value = parse(text, "tensor")?;
    if value.get("tensor").is_some() {
        Ok(instance_from_str(text)?.tensor)
    } else {
        tensor_from_str(text)
    }
}

/// Reads a decomposition from a bare decomposition file, a planted
/// instance (its plant) or a decomposition report with a
/// `"decomposition"` field.
pub fn decomposition_from_any_str(text: &str) -> Result<Decomposition<Rational>> {
    let value: Value = parse(text, "decomposition")?;
    if value.get("plant").is_some() {
        Ok(instance_from_str(text)?.plant)
    } else if let Some(inner) = value.get("decomposition") {
        let j: DecompositionJson =
            serde_json::from_value(inner.clone()).map_err(|e| Error::Parse(format!("decomposition: {e}")))?;
        (&j).try_into()
    } else {
        decomposition_from_str(text)
    }
}
