use std::path::Path;
use std::time::Instant;

use ctd_core::json::{
    decomposition_from_any_str, extension_from_str, tensor_from_any_str, DecompositionJson, ExtensionJson,
    HypothesisReportJson, PlantedInstanceJson, TensorJson,
};
use ctd_core::linalg::inverse;
use ctd_core::{
    assemble, compute_extension, decompose_with_budget, essentially_equal, format_rational, generate_conjugated,
    generate_generic_planted, generate_planted, hypothesis_check, padded_decomposition, seeded, shitov_tensor,
    strassen_bound, strassen_bound_4slice, tensors_equal, verify_extension, Error, FourSliceBound, RationalMatrix,
    RationalTensor, StrassenBound,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::{CliError, RunConfig};

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit<T: Serialize>(cfg: &RunConfig, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("plain data serializes");
    text.push('\n');
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_tensor(path: &Path) -> Result<RationalTensor, CliError> {
    Ok(tensor_from_any_str(&read(path)?)?)
}

/// `T_1^{-1} T_k` for `k >= 2`.
fn normalized_slices(t: &RationalTensor) -> Result<Vec<RationalMatrix>, CliError> {
    if !t.is_square() {
        return Err(Error::Unsupported(format!("need square slices, got {}x{}", t.m(), t.n())).into());
    }
    let inv = inverse(t.slice(0))?;
    Ok(t.slices()[1..].iter().map(|s| &inv * s).collect())
}

pub fn generate(cfg: &RunConfig, n: usize, r: usize, p: usize, generic: bool, conjugated: bool) -> Result<(), CliError> {
    let instance = if conjugated {
        generate_conjugated(n, r, p, cfg.seed, cfg.coeff_bound)?.0
    } else if generic {
        generate_generic_planted(n, r, p, cfg.seed, cfg.coeff_bound, cfg.retry_budget)?
    } else {
        generate_planted(n, r, p, cfg.seed, cfg.coeff_bound)?
    };
    emit(cfg, &PlantedInstanceJson::from(&instance))
}

#[derive(Serialize)]
struct Certificate {
    rank_lower_bound: usize,
    strassen: Option<StrassenBound>,
    four_slice: Option<FourSliceBound>,
}

#[derive(Serialize)]
struct DecomposeReport {
    r: usize,
    seed: u64,
    decomposition: DecompositionJson,
    certificate: Certificate,
    combination: Option<Vec<i64>>,
    retries: usize,
    failures: Vec<String>,
    randomness_log: Vec<ctd_core::RandomDraw>,
    eigenvalue_pairs: Vec<[String; 2]>,
    max_bits: u64,
}

pub fn decompose(cfg: &RunConfig, path: &Path, r: usize) -> Result<(), CliError> {
    let t = load_tensor(path)?;
    let result = decompose_with_budget(&t, r, &mut seeded(cfg.seed), cfg.retry_budget)?;
    let report = DecomposeReport {
        r,
        seed: cfg.seed,
        decomposition: DecompositionJson::from(&result.decomposition),
        certificate: Certificate {
            rank_lower_bound: result.rank_certificate,
            strassen: strassen_bound(&t, [0, 1, 2]).ok(),
            four_slice: strassen_bound_4slice(&t, [0, 1, 2, 3]).ok(),
        },
        combination: result.combination,
        retries: result.retries,
        failures: result.failures,
        randomness_log: result.randomness_log,
        eigenvalue_pairs: result
            .eigenvalue_pairs
            .iter()
            .map(|(l, m)| [format_rational(l), format_rational(m)])
            .collect(),
        max_bits: result.max_bits,
    };
    emit(cfg, &report)
}

pub fn verify(cfg: &RunConfig, tensor: &Path, decomposition: &Path) -> Result<(), CliError> {
    let t = load_tensor(tensor)?;
    let d = decomposition_from_any_str(&read(decomposition)?)?;
    let equal = tensors_equal(&assemble(&d), &t);
    emit(cfg, &serde_json::json!({ "equal": equal, "terms": d.len() }))?;
    if equal {
        Ok(())
    } else {
        Err(CliError::Mismatch("decomposition does not reassemble the tensor".into()))
    }
}

pub fn check(cfg: &RunConfig, path: &Path, r: usize) -> Result<(), CliError> {
    let t = load_tensor(path)?;
    let a_list = normalized_slices(&t)?;
    let report = hypothesis_check(&a_list, r)?;
    emit(cfg, &HypothesisReportJson::from(&report))
}

#[derive(Serialize)]
struct BoundsReport {
    format: [usize; 3],
    best: Option<usize>,
    strassen: Vec<StrassenBound>,
    four_slice: Vec<FourSliceBound>,
}

pub fn bounds(cfg: &RunConfig, path: &Path) -> Result<(), CliError> {
    let t = load_tensor(path)?;
    if !t.is_square() {
        return Err(Error::Unsupported(format!("need square slices, got {}x{}", t.m(), t.n())).into());
    }
    let p = t.p();
    let invertible: Vec<usize> = (0..p).filter(|&a| inverse(t.slice(a)).is_ok()).collect();
    let mut strassen = Vec::new();
    let mut four_slice = Vec::new();
    for &a in &invertible {
        let others: Vec<usize> = (0..p).filter(|&k| k != a).collect();
        for (i, &b) in others.iter().enumerate() {
            for &c in &others[i + 1..] {
                strassen.push(strassen_bound(&t, [a, b, c])?);
            }
            for (j, &c) in others.iter().enumerate() {
                for &d in &others[j + 1..] {
                    if b != c && b != d {
                        four_slice.push(strassen_bound_4slice(&t, [a, b, c, d])?);
                    }
                }
            }
        }
    }
    let best = strassen
        .iter()
        .map(|s| s.bound)
        .chain(four_slice.iter().map(|s| s.bound))
        .max();
    let (m, n, p) = t.format();
    emit(
        cfg,
        &BoundsReport {
            format: [m, n, p],
            best,
            strassen,
            four_slice,
        },
    )
}

pub fn extension_compute(cfg: &RunConfig, path: &Path, r: usize) -> Result<(), CliError> {
    let t = load_tensor(path)?;
    let ext = compute_extension(&normalized_slices(&t)?, r)?;
    emit(cfg, &ExtensionJson::from(&ext))
}

pub fn extension_verify(cfg: &RunConfig, tensor: &Path, extension: &Path, require_diag: bool) -> Result<(), CliError> {
    let t = load_tensor(tensor)?;
    let ext = extension_from_str(&read(extension)?)?;
    let report = verify_extension(&normalized_slices(&t)?, &ext, require_diag);
    emit(cfg, &report)?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Mismatch(report.problems.join("; ")))
    }
}

#[derive(Serialize)]
struct GadgetOutput {
    tensor: TensorJson,
    decomposition: Option<DecompositionJson>,
}

pub fn gadget(cfg: &RunConfig, path: &Path, decomposition: Option<&Path>) -> Result<(), CliError> {
    let text = read(path)?;
    let t = tensor_from_any_str(&text)?;
    let d = match decomposition {
        Some(dp) => Some(decomposition_from_any_str(&read(dp)?)?),
        None => {
            let value: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            if value.get("plant").is_some() {
                Some(decomposition_from_any_str(&text)?)
            } else {
                None
            }
        }
    };
    if let Some(d) = &d {
        if !tensors_equal(&assemble(d), &t) {
            return Err(CliError::Mismatch("decomposition does not reassemble the tensor".into()));
        }
    }
    emit(
        cfg,
        &GadgetOutput {
            tensor: TensorJson::from(&shitov_tensor(&t)),
            decomposition: d.map(|d| DecompositionJson::from(&padded_decomposition(&d))),
        },
    )
}

#[derive(Serialize)]
struct BenchRow {
    seed: u64,
    success: bool,
    matches_plant: bool,
    retries: usize,
    wall_ms: f64,
    max_bits: u64,
    error: Option<String>,
}

#[derive(Serialize)]
struct BenchSummary {
    instances: usize,
    successes: usize,
    success_rate: f64,
    max_retries: usize,
    max_bits: u64,
    total_wall_ms: f64,
}

#[derive(Serialize)]
struct BenchReport {
    n: usize,
    r: usize,
    p: usize,
    coeff_bound: i64,
    retry_budget: usize,
    first_seed: u64,
    instances: Vec<BenchRow>,
    summary: BenchSummary,
}

fn bench_one(cfg: &RunConfig, n: usize, r: usize, p: usize, seed: u64) -> Result<BenchRow, Error> {
    let instance = generate_planted(n, r, p, seed, cfg.coeff_bound)?;
    let start = Instant::now();
    let outcome = decompose_with_budget(&instance.tensor, r, &mut seeded(seed), cfg.retry_budget);
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(match outcome {
        Ok(result) => BenchRow {
            seed,
            success: true,
            matches_plant: essentially_equal(&result.decomposition, &instance.plant).is_some(),
            retries: result.retries,
            wall_ms,
            max_bits: result.max_bits,
            error: None,
        },
        Err(e @ (Error::InvalidInput(_) | Error::Unsupported(_))) => return Err(e),
        Err(e) => BenchRow {
            seed,
            success: false,
            matches_plant: false,
            retries: cfg.retry_budget,
            wall_ms,
            max_bits: 0,
            error: Some(e.to_string()),
        },
    })
}

pub fn bench(cfg: &RunConfig, n: usize, r: usize, p: usize, seeds: u64, threads: usize) -> Result<(), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker threads: {e}")))?;
    let seed_list: Vec<u64> = (0..seeds).map(|k| cfg.seed.wrapping_add(k)).collect();
    let rows: Vec<BenchRow> = pool.install(|| {
        seed_list
            .par_iter()
            .map(|&seed| bench_one(cfg, n, r, p, seed))
            .collect::<Result<Vec<_>, Error>>()
    })?;
    let successes = rows.iter().filter(|row| row.success && row.matches_plant).count();
    let summary = BenchSummary {
        instances: rows.len(),
        successes,
        success_rate: if rows.is_empty() { 0.0 } else { successes as f64 / rows.len() as f64 },
        max_retries: rows.iter().map(|row| row.retries).max().unwrap_or(0),
        max_bits: rows.iter().map(|row| row.max_bits).max().unwrap_or(0),
        total_wall_ms: rows.iter().map(|row| row.wall_ms).sum(),
    };
    emit(
        cfg,
        &BenchReport {
            n,
            r,
            p,
            coeff_bound: cfg.coeff_bound,
            retry_budget: cfg.retry_budget,
            first_seed: cfg.seed,
            instances: rows,
            summary,
        },
    )
}
