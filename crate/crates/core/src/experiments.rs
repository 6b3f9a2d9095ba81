//! Seeded Monte Carlo census of distinct fringe subtrees, CSV/JSON output and
//! comparison of the normalised counts with the asymptotic bands.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canonical::{class_ids, IsoNotion};
use crate::constants::{ConstantError, Registry, Scaling};
use crate::family::{Family, FamilyError};
use crate::rng::stream;

/// Version written in the first line of every output file.
pub const SCHEMA_VERSION: u32 = 1;
/// Default largest fringe size with its own histogram bucket.
pub const DEFAULT_HISTOGRAM_CAP: usize = 10_000;

pub const CENSUS_HEADER: [&str; 6] = ["family", "n", "replicate", "notion", "distinct_count", "seconds"];
pub const HISTOGRAM_HEADER: [&str; 5] = ["family", "n", "replicate", "k", "z"];

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Constant(#[from] ConstantError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("record violates an invariant: {0}")]
    Invariant(String),
    #[error("cannot compare: {0}")]
    Mismatch(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub family: Family,
    pub sizes: Vec<usize>,
    pub replicates: u32,
    pub seed: u64,
    pub notions: Vec<IsoNotion>,
    /// Worker threads; `None` uses all cores. Output does not depend on it.
    pub workers: Option<usize>,
    /// Record wall time per count. Off by default so reruns are byte-identical.
    pub timing: bool,
    pub histogram_cap: usize,
}

impl ExperimentConfig {
    pub fn new(family: Family, sizes: Vec<usize>, replicates: u32, seed: u64) -> Self {
        ExperimentConfig {
            family,
            sizes,
            replicates,
            seed,
            notions: IsoNotion::ALL.to_vec(),
            workers: None,
            timing: false,
            histogram_cap: DEFAULT_HISTOGRAM_CAP,
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return Err(ExperimentError::InvalidConfig("sizes must be a non-empty list of positive integers".into()));
        }
        if self.replicates == 0 {
            return Err(ExperimentError::InvalidConfig("at least one replicate is required".into()));
        }
        if self.notions.is_empty() {
            return Err(ExperimentError::InvalidConfig("at least one notion is required".into()));
        }
        if self.histogram_cap == 0 {
            return Err(ExperimentError::InvalidConfig("histogram cap must be positive".into()));
        }
        if self.workers == Some(0) {
            return Err(ExperimentError::InvalidConfig("worker count must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NotionCount {
    pub notion: IsoNotion,
    pub distinct: usize,
    pub seconds: Option<f64>,
}

/// One sampled tree: distinct counts per notion and its fringe-size histogram.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub family: String,
    pub n: usize,
    pub replicate: u32,
    pub counts: Vec<NotionCount>,
    /// Sparse `(k, Z_{n,k})` for `k ≤ cap`, then `(cap + 1, #fringe subtrees larger than cap)`.
    pub histogram: Vec<(usize, u64)>,
}

impl CensusRecord {
    pub fn count(&self, notion: IsoNotion) -> Option<usize> {
        self.counts.iter().find(|c| c.notion == notion).map(|c| c.distinct)
    }

    /// Checks `Σ_k Z_{n,k} = n` and that coarser notions never count more classes.
    pub fn check(&self) -> Result<(), ExperimentError> {
        let total: u64 = self.histogram.iter().map(|&(_, z)| z).sum();
        if total != self.n as u64 {
            return Err(ExperimentError::Invariant(format!(
                "{} n={} replicate {}: histogram sums to {total}",
                self.family, self.n, self.replicate
            )));
        }
        let chain: Vec<usize> = IsoNotion::ALL.iter().filter_map(|&m| self.count(m)).collect();
        if chain.windows(2).any(|w| w[0] < w[1]) || chain.iter().any(|&c| c == 0 || c > self.n) {
            return Err(ExperimentError::Invariant(format!(
                "{} n={} replicate {}: counts {chain:?} violate the coarsening chain",
                self.family, self.n, self.replicate
            )));
        }
        Ok(())
    }

    pub fn rows(&self) -> impl Iterator<Item = CountRow> + '_ {
        self.counts.iter().map(move |c| CountRow {
            family: self.family.clone(),
            n: self.n,
            replicate: self.replicate,
            notion: c.notion,
            distinct_count: c.distinct,
            seconds: c.seconds,
        })
    }

    pub fn histogram_rows(&self) -> impl Iterator<Item = HistogramRow> + '_ {
        self.histogram.iter().map(move |&(k, z)| HistogramRow {
            family: self.family.clone(),
            n: self.n,
            replicate: self.replicate,
            k,
            z,
        })
    }
}

/// A line of the census file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountRow {
    pub family: String,
    pub n: usize,
    pub replicate: u32,
    pub notion: IsoNotion,
    pub distinct_count: usize,
    pub seconds: Option<f64>,
}

/// A line of the histogram file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramRow {
    pub family: String,
    pub n: usize,
    pub replicate: u32,
    pub k: usize,
    pub z: u64,
}

fn histogram(sizes: &[u64], cap: usize) -> Vec<(usize, u64)> {
    let mut buckets: BTreeMap<usize, u64> = BTreeMap::new();
    for &s in sizes {
        let k = (s as usize).min(cap + 1);
        *buckets.entry(k).or_default() += 1;
    }
    buckets.into_iter().collect()
}

/// Samples one tree and counts it; `replicate` selects the random stream.
pub fn census_one(cfg: &ExperimentConfig, n: usize, replicate: u32) -> Result<CensusRecord, ExperimentError> {
    let sampler = cfg.family.sampler()?;
    let mut rng = stream(cfg.seed, n as u64, replicate as u64);
    let tree = sampler.sample(n, &mut rng)?;
    let counts = cfg
        .notions
        .iter()
        .map(|&notion| {
            let start = Instant::now();
            let (_, distinct) = class_ids(&tree, notion);
            NotionCount {
                notion,
                distinct,
                seconds: cfg.timing.then(|| start.elapsed().as_secs_f64()),
            }
        })
        .collect();
    let record = CensusRecord {
        family: cfg.family.to_string(),
        n,
        replicate,
        counts,
        histogram: histogram(&tree.fringe_sizes(), cfg.histogram_cap),
    };
    record.check()?;
    Ok(record)
}

/// Runs every (size, replicate) pair, in parallel, returning records sorted
/// by size then replicate.
pub fn run_census(cfg: &ExperimentConfig) -> Result<Vec<CensusRecord>, ExperimentError> {
    cfg.validate()?;
    let mut notions = cfg.notions.clone();
    notions.sort();
    notions.dedup();
    let cfg = ExperimentConfig { notions, ..cfg.clone() };
    cfg.family.sampler()?;
    let mut sizes = cfg.sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();
    let tasks: Vec<(usize, u32)> = sizes
        .iter()
        .flat_map(|&n| (0..cfg.replicates).map(move |r| (n, r)))
        .collect();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cfg.workers {
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| ExperimentError::InvalidConfig(format!("cannot start worker pool: {e}")))?;
    pool.install(|| tasks.par_iter().map(|&(n, r)| census_one(&cfg, n, r)).collect())
}

fn schema_line(kind: &str) -> String {
    format!("# fringe-census {kind} schema_version={SCHEMA_VERSION}\n")
}

/// Writes the census file and the histogram file as CSV.
pub fn write_csv<W1: Write, W2: Write>(
    records: &[CensusRecord],
    census: W1,
    hist: W2,
) -> Result<(), ExperimentError> {
    let mut census = census;
    census.write_all(schema_line("counts").as_bytes())?;
    let mut w = csv::Writer::from_writer(census);
    w.write_record(CENSUS_HEADER)?;
    for row in records.iter().flat_map(CensusRecord::rows) {
        let seconds = row.seconds.map(|s| format!("{s:.6}")).unwrap_or_default();
        w.write_record([
            row.family.as_str(),
            &row.n.to_string(),
            &row.replicate.to_string(),
            row.notion.name(),
            &row.distinct_count.to_string(),
            &seconds,
        ])?;
    }
    w.flush()?;
    let mut hist = hist;
    hist.write_all(schema_line("histogram").as_bytes())?;
    let mut w = csv::Writer::from_writer(hist);
    w.write_record(HISTOGRAM_HEADER)?;
    for row in records.iter().flat_map(CensusRecord::histogram_rows) {
        w.write_record([
            row.family.as_str(),
            &row.n.to_string(),
            &row.replicate.to_string(),
            &row.k.to_string(),
            &row.z.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonOutput {
    pub schema_version: u32,
    pub counts: Vec<CountRow>,
    pub histogram: Vec<HistogramRow>,
}

impl JsonOutput {
    pub fn from_records(records: &[CensusRecord]) -> Self {
        JsonOutput {
            schema_version: SCHEMA_VERSION,
            counts: records.iter().flat_map(CensusRecord::rows).collect(),
            histogram: records.iter().flat_map(CensusRecord::histogram_rows).collect(),
        }
    }
}

pub fn write_json<W: Write>(records: &[CensusRecord], mut out: W) -> Result<(), ExperimentError> {
    serde_json::to_writer_pretty(&mut out, &JsonOutput::from_records(records))?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Reads a census CSV written by [`write_csv`].
pub fn read_counts_csv<R: Read>(input: R) -> Result<Vec<CountRow>, ExperimentError> {
    let mut text = String::new();
    let mut input = input;
    input.read_to_string(&mut text)?;
    let body = match text.strip_prefix("# ") {
        Some(rest) => {
            let (first, body) = rest.split_once('\n').unwrap_or((rest, ""));
            let version = first
                .split_whitespace()
                .find_map(|t| t.strip_prefix("schema_version="))
                .and_then(|v| v.parse::<u32>().ok());
            if version != Some(SCHEMA_VERSION) {
                return Err(ExperimentError::InvalidInput(format!("unsupported schema line {first:?}")));
            }
            body
        }
        None => return Err(ExperimentError::InvalidInput("missing schema version line".into())),
    };
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != CENSUS_HEADER {
        return Err(ExperimentError::InvalidInput(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).unwrap_or("");
        let bad = |what: &str| ExperimentError::InvalidInput(format!("bad {what} in row {:?}", rec));
        rows.push(CountRow {
            family: field(0).to_string(),
            n: field(1).parse().map_err(|_| bad("n"))?,
            replicate: field(2).parse().map_err(|_| bad("replicate"))?,
            notion: field(3).parse().map_err(|_| bad("notion"))?,
            distinct_count: field(4).parse().map_err(|_| bad("distinct_count"))?,
            seconds: match field(5) {
                "" => None,
                s => Some(s.parse().map_err(|_| bad("seconds"))?),
            },
        });
    }
    Ok(rows)
}

/// Normalised counts at one size against the asymptotic band.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub family: String,
    pub notion: IsoNotion,
    pub n: usize,
    pub replicates: usize,
    pub scaling: Scaling,
    pub mean: f64,
    pub median: f64,
    pub low: f64,
    pub high: f64,
}

impl Comparison {
    pub fn median_in_band(&self) -> bool {
        self.low <= self.median && self.median <= self.high
    }
}

pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty());
    values.sort_by(f64::total_cmp);
    let m = values.len() / 2;
    if values.len() % 2 == 1 {
        values[m]
    } else {
        0.5 * (values[m - 1] + values[m])
    }
}

/// Per-size mean and median of the normalised count of `family` under
/// `notion`, with the band `[κ√C₂, κ√C₁]` or `[κC₂, κC₁]`.
pub fn compare_to_theory(
    rows: &[CountRow],
    family: &Family,
    notion: IsoNotion,
    registry: &Registry,
) -> Result<Vec<Comparison>, ExperimentError> {
    let setting = registry.setting(family, notion)?;
    let name = family.to_string();
    let mut by_size: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for row in rows {
        if row.notion != notion {
            continue;
        }
        let row_family: Family = row
            .family
            .parse()
            .map_err(|e: FamilyError| ExperimentError::InvalidInput(e.to_string()))?;
        if row_family != *family {
            return Err(ExperimentError::Mismatch(format!("records of {} cannot be compared with {name}", row.family)));
        }
        if row.n < 3 {
            continue;
        }
        by_size
            .entry(row.n)
            .or_default()
            .push(setting.normalise(row.distinct_count as f64, row.n as f64));
    }
    if by_size.is_empty() {
        return Err(ExperimentError::Mismatch(format!("no {name} records under the {notion} notion")));
    }
    let (low, high) = setting.band();
    Ok(by_size
        .into_iter()
        .map(|(n, mut v)| Comparison {
            family: name.clone(),
            notion,
            n,
            replicates: v.len(),
            scaling: setting.scaling(),
            mean: v.iter().sum::<f64>() / v.len() as f64,
            median: median(&mut v),
            low,
            high,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_overflow_bucket() {
        assert_eq!(histogram(&[1, 1, 2, 5, 9], 3), vec![(1, 2), (2, 1), (4, 2)]);
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn invalid_configs() {
        let f: Family = "plane".parse().unwrap();
        assert!(run_census(&ExperimentConfig::new(f.clone(), vec![], 1, 0)).is_err());
        assert!(run_census(&ExperimentConfig::new(f.clone(), vec![10], 0, 0)).is_err());
        let mut c = ExperimentConfig::new(f, vec![10], 1, 0);
        c.workers = Some(0);
        assert!(run_census(&c).is_err());
    }

    #[test]
    fn chain_violation_detected() {
        let r = CensusRecord {
            family: "plane".into(),
            n: 2,
            replicate: 0,
            counts: vec![
                NotionCount { notion: IsoNotion::Plane, distinct: 1, seconds: None },
                NotionCount { notion: IsoNotion::Unordered, distinct: 2, seconds: None },
            ],
            histogram: vec![(1, 1), (2, 1)],
        };
        assert!(matches!(r.check(), Err(ExperimentError::Invariant(_))));
    }
}
