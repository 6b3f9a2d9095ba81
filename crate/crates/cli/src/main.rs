use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufRead, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use fringe::canonical::{build_minimal_dag, IsoNotion};
use fringe::constants::{self, ConstantResult};
use fringe::experiments::{self, CensusRecord, Comparison, ExperimentConfig, DEFAULT_HISTOGRAM_CAP};
use fringe::family::Family;
use fringe::gw::{enumerate_family, slot_expansions};
use fringe::increasing::enumerate_increasing;
use fringe::rng::stream;
use fringe::{Exact, Tree};
use num_traits::Zero;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "fringe", version, about = "Random trees and their distinct fringe subtrees")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample random trees, one per line
    Sample {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of trees (replicates 0..count)
        #[arg(long, default_value_t = 1)]
        count: u32,
    },
    /// Count distinct fringe subtrees of sampled trees
    Census {
        #[command(flatten)]
        run: RunArgs,
        /// Counts file; stdout when absent
        #[arg(long)]
        output: Option<PathBuf>,
        /// Histogram file; defaults to the counts file name with a `_hist` suffix
        #[arg(long)]
        histogram: Option<PathBuf>,
    },
    /// Minimal DAG of trees read one per line
    Dag {
        #[arg(long, default_value = "family")]
        notion: IsoNotion,
        /// Input file; stdin when absent
        #[arg(long)]
        input: Option<PathBuf>,
        /// Slot count of bracketed trees (inferred when absent)
        #[arg(long)]
        arity: Option<u32>,
        /// Print the DAG itself instead of node counts
        #[arg(long)]
        export: bool,
    },
    /// All trees of a small size with their exact probabilities
    Enumerate {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
    },
    /// Table of asymptotic constants
    Constants {
        /// Constant ids; all named constants when absent
        #[arg(long = "id")]
        ids: Vec<String>,
        /// Setting as <family>/<notion>: print kappa, C1, C2 and the band
        #[arg(long)]
        setting: Option<String>,
    },
    /// Census over several sizes, written to a directory, then compared with the band
    Experiment {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Compare a census file with the asymptotic band
    Compare {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        notion: IsoNotion,
        /// Family of the records; inferred when the file holds one family
        #[arg(long)]
        family: Option<Family>,
    },
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    #[arg(long)]
    family: Family,
    /// Comma-separated tree sizes
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    replicates: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated notions (family, plane, unordered)
    #[arg(long, value_delimiter = ',', default_value = "family,plane,unordered")]
    notions: Vec<IsoNotion>,
    /// Worker threads (all cores when absent)
    #[arg(long)]
    workers: Option<usize>,
    /// Record wall time per count
    #[arg(long)]
    timing: bool,
    #[arg(long, default_value_t = DEFAULT_HISTOGRAM_CAP)]
    hist_cap: usize,
}

impl RunArgs {
    fn config(&self) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(self.family.clone(), self.sizes.clone(), self.replicates, self.seed);
        cfg.notions = self.notions.clone();
        cfg.workers = self.workers;
        cfg.timing = self.timing;
        cfg.histogram_cap = self.hist_cap;
        cfg
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match cli.command {
        Command::Sample { family, n, seed, count } => sample(&mut out, cli.format, &family, n, seed, count)?,
        Command::Census { run, output, histogram } => {
            let records = experiments::run_census(&run.config())?;
            match output {
                Some(path) => {
                    let hist = histogram.unwrap_or_else(|| histogram_path(&path, cli.format));
                    write_records(&records, cli.format, &path, &hist)?;
                }
                None => write_to_stdout(&mut out, &records, cli.format, histogram.as_deref())?,
            }
        }
        Command::Dag {
            notion,
            input,
            arity,
            export,
        } => dag(&mut out, cli.format, notion, input.as_deref(), arity, export)?,
        Command::Enumerate { family, n } => enumerate(&mut out, cli.format, &family, n)?,
        Command::Constants { ids, setting } => constants_table(&mut out, cli.format, &ids, setting.as_deref())?,
        Command::Experiment { run, out_dir } => {
            let cfg = run.config();
            let records = experiments::run_census(&cfg)?;
            std::fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
            let ext = match cli.format {
                Format::Csv => "csv",
                Format::Json => "json",
            };
            let counts = out_dir.join(format!("census.{ext}"));
            write_records(&records, cli.format, &counts, &out_dir.join(format!("histogram.{ext}")))?;
            let rows: Vec<_> = records.iter().flat_map(CensusRecord::rows).collect();
            let mut table = Vec::new();
            for &notion in &cfg.notions {
                match experiments::compare_to_theory(&rows, &cfg.family, notion, constants::registry()) {
                    Ok(c) => table.extend(c),
                    Err(experiments::ExperimentError::Constant(e)) => eprintln!("note: {e}"),
                    Err(e) => return Err(e.into()),
                }
            }
            write_comparison(&mut out, cli.format, &table)?;
        }
        Command::Compare { input, notion, family } => {
            let file = File::open(&input).with_context(|| format!("opening {}", input.display()))?;
            let rows = experiments::read_counts_csv(file).with_context(|| format!("reading {}", input.display()))?;
            let family = match family {
                Some(f) => f,
                None => {
                    let mut names: Vec<&str> = rows.iter().map(|r| r.family.as_str()).collect();
                    names.sort_unstable();
                    names.dedup();
                    match names.as_slice() {
                        [one] => one.parse()?,
                        [] => bail!("{} holds no records", input.display()),
                        _ => bail!("{} holds several families; pass --family", input.display()),
                    }
                }
            };
            let table = experiments::compare_to_theory(&rows, &family, notion, constants::registry())?;
            write_comparison(&mut out, cli.format, &table)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn histogram_path(counts: &Path, format: Format) -> PathBuf {
    let stem = counts.file_stem().and_then(|s| s.to_str()).unwrap_or("census");
    let ext = counts.extension().and_then(|s| s.to_str()).unwrap_or(match format {
        Format::Csv => "csv",
        Format::Json => "json",
    });
    counts.with_file_name(format!("{stem}_hist.{ext}"))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("cannot write {}", path.display()))?,
    ))
}

fn write_records(records: &[CensusRecord], format: Format, counts: &Path, hist: &Path) -> Result<()> {
    match format {
        Format::Csv => {
            let mut c = create(counts)?;
            let mut h = create(hist)?;
            experiments::write_csv(records, &mut c, &mut h)?;
            c.flush()?;
            h.flush()?;
        }
        Format::Json => {
            // one self-contained document holds counts and histogram
            let mut c = create(counts)?;
            experiments::write_json(records, &mut c)?;
            c.flush()?;
        }
    }
    Ok(())
}

fn write_to_stdout<W: Write>(out: &mut W, records: &[CensusRecord], format: Format, hist: Option<&Path>) -> Result<()> {
    match format {
        Format::Csv => match hist {
            Some(p) => {
                let mut h = create(p)?;
                experiments::write_csv(records, &mut *out, &mut h)?;
                h.flush()?;
            }
            None => experiments::write_csv(records, &mut *out, io::sink())?,
        },
        Format::Json => experiments::write_json(records, &mut *out)?,
    }
    Ok(())
}

fn sample<W: Write>(out: &mut W, format: Format, family: &Family, n: usize, seed: u64, count: u32) -> Result<()> {
    let sampler = family.sampler()?;
    let mut docs = Vec::new();
    for r in 0..count {
        let mut rng = stream(seed, n as u64, r as u64);
        let t = sampler.sample(n, &mut rng)?;
        match format {
            Format::Csv => writeln!(out, "{}", t.serialize())?,
            Format::Json => docs.push(json!({
                "family": family.to_string(), "n": n, "seed": seed, "replicate": r, "tree": t.serialize(),
            })),
        }
    }
    if format == Format::Json {
        writeln!(out, "{}", serde_json::to_string_pretty(&docs)?)?;
    }
    Ok(())
}

fn read_trees(input: Option<&Path>, arity: Option<u32>) -> Result<Vec<Tree>> {
    let mut text = String::new();
    match input {
        Some(p) => {
            File::open(p)
                .with_context(|| format!("opening {}", p.display()))?
                .read_to_string(&mut text)?;
        }
        None => {
            io::stdin().lock().read_to_string(&mut text)?;
        }
    }
    let mut trees = Vec::new();
    for (i, line) in text.as_bytes().lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        trees.push(Tree::parse_auto(line, arity).with_context(|| format!("line {}", i + 1))?);
    }
    Ok(trees)
}

fn dag<W: Write>(
    out: &mut W,
    format: Format,
    notion: IsoNotion,
    input: Option<&Path>,
    arity: Option<u32>,
    export: bool,
) -> Result<()> {
    let trees = read_trees(input, arity)?;
    let mut docs = Vec::new();
    if format == Format::Csv && !export {
        writeln!(out, "index,vertices,notion,nodes")?;
    }
    for (i, t) in trees.iter().enumerate() {
        let d = build_minimal_dag(t, notion);
        match (format, export) {
            (Format::Csv, false) => writeln!(out, "{i},{},{notion},{}", t.len(), d.node_count())?,
            (Format::Csv, true) => write!(out, "{}", d.export())?,
            (Format::Json, _) => {
                let mut doc = json!({"index": i, "vertices": t.len(), "notion": notion, "nodes": d.node_count()});
                if export {
                    doc["dag"] = json!(d.export());
                }
                docs.push(doc);
            }
        }
    }
    if format == Format::Json {
        writeln!(out, "{}", serde_json::to_string_pretty(&docs)?)?;
    }
    Ok(())
}

fn enumerate<W: Write>(out: &mut W, format: Format, family: &Family, n: usize) -> Result<()> {
    let mut probs: BTreeMap<String, Exact> = BTreeMap::new();
    match family {
        Family::Simple(w) => {
            let all = enumerate_family::<Exact>(n, w)?;
            let total = all.iter().fold(Exact::zero(), |a, (_, x)| a + x);
            for (t, x) in all {
                let p = x / &total;
                match w.slot_arity() {
                    Some(d) => {
                        let expanded = slot_expansions(&t, d);
                        let each = p / Exact::from_integer(expanded.len().into());
                        for s in expanded {
                            *probs.entry(s.serialize()).or_insert_with(Exact::zero) += &each;
                        }
                    }
                    None => *probs.entry(t.serialize()).or_insert_with(Exact::zero) += p,
                }
            }
        }
        Family::Increasing(f) => {
            for (t, x) in enumerate_increasing::<Exact>(n, *f)? {
                *probs.entry(t.shape.serialize()).or_insert_with(Exact::zero) += x;
            }
        }
    }
    match format {
        Format::Csv => {
            writeln!(out, "tree,probability")?;
            for (t, p) in &probs {
                writeln!(out, "\"{t}\",{p}")?;
            }
        }
        Format::Json => {
            let docs: Vec<_> = probs
                .iter()
                .map(|(t, p)| json!({"tree": t, "probability": p.to_string()}))
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&docs)?)?;
        }
    }
    Ok(())
}

fn constants_table<W: Write>(out: &mut W, format: Format, ids: &[String], setting: Option<&str>) -> Result<()> {
    let reg = constants::registry();
    let mut rows: Vec<ConstantResult> = Vec::new();
    let mut band = None;
    if let Some(s) = setting {
        let (f, notion) = s.rsplit_once('/').context("setting must be <family>/<notion>")?;
        let family: Family = f.parse()?;
        let notion: IsoNotion = notion.parse().map_err(anyhow::Error::msg)?;
        let st = reg.setting(&family, notion)?;
        rows.push(ConstantResult::exact("kappa", st.kappa, "closed form"));
        band = Some(st.band());
        rows.push(st.upper);
        rows.push(st.lower);
    }
    if ids.is_empty() && setting.is_none() {
        for id in constants::NAMED_IDS {
            rows.push(reg.get(id)?);
        }
    }
    for id in ids {
        rows.push(reg.get(id)?);
    }
    match format {
        Format::Csv => {
            writeln!(out, "id,value,error,reference,method")?;
            for r in &rows {
                let reference = r.reference.map(|v| format!("{v:.10}")).unwrap_or_default();
                writeln!(out, "{},{:.12},{:.3e},{},\"{}\"", r.id, r.value, r.error, reference, r.method)?;
            }
            if let Some((lo, hi)) = band {
                writeln!(out, "band_low,{lo:.12},,,")?;
                writeln!(out, "band_high,{hi:.12},,,")?;
            }
        }
        Format::Json => {
            let mut doc = json!({ "constants": rows });
            if let Some((lo, hi)) = band {
                doc["band"] = json!([lo, hi]);
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
    }
    Ok(())
}

fn write_comparison<W: Write>(out: &mut W, format: Format, table: &[Comparison]) -> Result<()> {
    match format {
        Format::Csv => {
            writeln!(out, "family,notion,n,replicates,mean,median,band_low,band_high,median_in_band")?;
            for c in table {
                writeln!(
                    out,
                    "\"{}\",{},{},{},{:.6},{:.6},{:.6},{:.6},{}",
                    c.family,
                    c.notion,
                    c.n,
                    c.replicates,
                    c.mean,
                    c.median,
                    c.low,
                    c.high,
                    c.median_in_band()
                )?;
            }
        }
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(table)?)?,
    }
    Ok(())
}
