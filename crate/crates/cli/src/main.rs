use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use log::{info, warn};
use rayon::prelude::*;

use tieup_core::config::parse_key_values;
use tieup_core::pattern::parse_pattern_file;
use tieup_core::score::{format_alignment, format_report, score_document};
use tieup_core::template::{parse_objects, serialize_templates};
use tieup_core::token::parse_corpus;
use tieup_core::{
    ConceptLexicon, DesignatorLexicon, DiscourseConfig, Document, Extractor, GroupMap, Object, Stage,
};

/// Extract corporate tie-up templates from segmented Japanese news text and
/// score them against answer keys.
#[derive(Parser)]
#[command(name = "tieup", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the extraction pipeline over a token corpus.
    Extract(ExtractArgs),
    /// Score a directory of response templates against answer keys.
    Score {
        response_dir: PathBuf,
        key_dir: PathBuf,
    },
}

#[derive(Args, Default)]
struct ExtractArgs {
    /// `key = value` file with defaults for the flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Token file, or a directory of `.tok` files.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Concept key-word lexicon.
    #[arg(long)]
    concepts: Option<PathBuf>,
    /// Template pattern rules.
    #[arg(long)]
    patterns: Option<PathBuf>,
    /// Designator lexicon for name recognition.
    #[arg(long)]
    designators: Option<PathBuf>,
    /// Rule group to concept label map.
    #[arg(long = "concept-map")]
    concept_map: Option<PathBuf>,
    /// Output directory, one `<doc>.tpl` per document.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print an intermediate stage: matches, topics, registry, segments.
    #[arg(long = "dump")]
    dump: Vec<Stage>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// One template per tie-up match, no discourse merging.
    #[arg(long = "no-discourse")]
    no_discourse: bool,
}

struct RunConfig {
    corpus: PathBuf,
    concepts: Option<PathBuf>,
    patterns: Option<PathBuf>,
    designators: Option<PathBuf>,
    concept_map: Option<PathBuf>,
    out: PathBuf,
    dump: Vec<Stage>,
    jobs: usize,
    discourse: DiscourseConfig,
    no_discourse: bool,
}

fn parse_bool(v: &str) -> Option<bool> {
    match v {
        "true" | "yes" | "1" => Some(true),
        "false" | "no" | "0" => Some(false),
        _ => None,
    }
}

impl RunConfig {
    fn resolve(args: ExtractArgs) -> Result<Self> {
        let mut file: BTreeMap<String, String> = BTreeMap::new();
        let mut discourse = DiscourseConfig::default();
        let mut base = PathBuf::new();
        if let Some(path) = &args.config {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            base = path.parent().map(Path::to_path_buf).unwrap_or_default();
            for (line, key, value) in
                parse_key_values(&text).with_context(|| format!("in {}", path.display()))?
            {
                if discourse.set(&key, &value) {
                    continue;
                }
                const KEYS: [&str; 9] = [
                    "corpus", "concepts", "patterns", "designators", "concept_map", "out", "dump", "jobs",
                    "discourse",
                ];
                if !KEYS.contains(&key.as_str()) {
                    bail!("{}:{line}: unknown key {key:?}", path.display());
                }
                file.insert(key, value);
            }
        }
        let path_of = |flag: Option<PathBuf>, key: &str| flag.or_else(|| file.get(key).map(|v| base.join(v)));

        let dump = if !args.dump.is_empty() {
            args.dump
        } else {
            match file.get("dump") {
                Some(v) => v
                    .split_whitespace()
                    .map(|s| s.parse::<Stage>().map_err(anyhow::Error::msg))
                    .collect::<Result<_>>()?,
                None => Vec::new(),
            }
        };
        let jobs = match (args.jobs, file.get("jobs")) {
            (Some(j), _) => j,
            (None, Some(v)) => v.parse().with_context(|| format!("jobs = {v}"))?,
            (None, None) => 0,
        };
        let no_discourse = args.no_discourse
            || match file.get("discourse") {
                Some(v) => !parse_bool(v).with_context(|| format!("discourse = {v}"))?,
                None => false,
            };

        let cfg = RunConfig {
            corpus: path_of(args.corpus, "corpus").context("--corpus is required")?,
            concepts: path_of(args.concepts, "concepts"),
            patterns: path_of(args.patterns, "patterns"),
            designators: path_of(args.designators, "designators"),
            concept_map: path_of(args.concept_map, "concept_map"),
            out: path_of(args.out, "out").context("--out is required")?,
            dump,
            jobs,
            discourse,
            no_discourse,
        };
        for p in [Some(&cfg.corpus), cfg.concepts.as_ref(), cfg.patterns.as_ref(), cfg.designators.as_ref(), cfg.concept_map.as_ref()]
            .into_iter()
            .flatten()
        {
            if !p.exists() {
                bail!("{}: no such file or directory", p.display());
            }
        }
        Ok(cfg)
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load<T>(path: Option<&PathBuf>, parse: impl Fn(&str) -> tieup_core::Result<T>) -> Result<Option<T>> {
    path.map(|p| parse(&read(p)?).with_context(|| format!("in {}", p.display())))
        .transpose()
}

fn files_with_extension(dir: &Path, ext: &str) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == ext))
        .collect();
    files.sort();
    Ok(files)
}

fn load_corpus(path: &Path) -> Result<Vec<Document>> {
    let files = if path.is_dir() {
        files_with_extension(path, "tok")?
    } else {
        vec![path.to_path_buf()]
    };
    let mut docs = Vec::new();
    for f in files {
        docs.extend(parse_corpus(&read(&f)?).with_context(|| format!("in {}", f.display()))?);
    }
    Ok(docs)
}

fn write_atomically(dir: &Path, name: &str, text: &str) -> Result<()> {
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating a file in {}", dir.display()))?;
    tmp.write_all(text.as_bytes())?;
    let target = dir.join(name);
    tmp.persist(&target)
        .with_context(|| format!("writing {}", target.display()))?;
    Ok(())
}

fn run_extract(args: ExtractArgs) -> Result<()> {
    let cfg = RunConfig::resolve(args)?;
    let mut extractor = Extractor::new(
        load(cfg.designators.as_ref(), DesignatorLexicon::parse)?.unwrap_or_default(),
        load(cfg.concepts.as_ref(), ConceptLexicon::parse)?.unwrap_or_default(),
        load(cfg.patterns.as_ref(), parse_pattern_file)?.unwrap_or_default(),
        load(cfg.concept_map.as_ref(), GroupMap::parse)?.unwrap_or_default(),
    );
    extractor.config = cfg.discourse.clone();
    extractor.discourse = !cfg.no_discourse;

    let docs = load_corpus(&cfg.corpus)?;
    fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;

    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build()?;
    let dumps: Vec<String> = pool.install(|| {
        docs.par_iter()
            .map(|doc| -> Result<String> {
                let started = Instant::now();
                let result = extractor.extract(doc);
                let text = serialize_templates(&result.templates)?;
                write_atomically(&cfg.out, &format!("{}.tpl", doc.doc_id), &text)?;
                info!(
                    "{}: {} tie-ups in {:.3} ms",
                    doc.doc_id,
                    result.templates.tie_ups.len(),
                    started.elapsed().as_secs_f64() * 1e3
                );
                for t in result.templates.tie_ups.iter().filter(|t| !t.is_well_formed()) {
                    warn!("{}: tie-up {} has fewer than two entities", doc.doc_id, t.id);
                }
                let mut dump = String::new();
                for stage in &cfg.dump {
                    dump.push_str(&format!("== {} {:?}\n", doc.doc_id, stage));
                    dump.push_str(&result.dump(*stage));
                }
                Ok(dump)
            })
            .collect::<Result<_>>()
    })?;
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    for d in dumps {
        lock.write_all(d.as_bytes())?;
    }
    Ok(())
}

fn load_templates(dir: &Path) -> Result<BTreeMap<String, Vec<Object>>> {
    let mut out = BTreeMap::new();
    for f in files_with_extension(dir, "tpl")? {
        let objects = parse_objects(&read(&f)?).with_context(|| format!("in {}", f.display()))?;
        let id = f.file_stem().unwrap_or_default().to_string_lossy().into_owned();
        out.insert(id, objects);
    }
    Ok(out)
}

fn run_score(response_dir: &Path, key_dir: &Path) -> Result<()> {
    let keys = load_templates(key_dir)?;
    let responses = load_templates(response_dir)?;
    let mut rows = Vec::new();
    let mut listing = String::new();
    let empty = Vec::new();
    for (doc, key) in &keys {
        let response = responses.get(doc).unwrap_or_else(|| {
            warn!("{doc}: no response, key fills count as missing");
            &empty
        });
        let score = score_document(key, response);
        listing.push_str(&format_alignment(doc, &score));
        rows.push((doc.clone(), score.counts));
    }
    for (doc, response) in responses.iter().filter(|(d, _)| !keys.contains_key(*d)) {
        warn!("{doc}: no answer key, response fills count as spurious");
        let score = score_document(&empty, response);
        listing.push_str(&format_alignment(doc, &score));
        rows.push((doc.clone(), score.counts));
    }
    print!("{listing}\n{}", format_report(&rows));
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Extract(args) => run_extract(args),
        Command::Score { response_dir, key_dir } => run_score(&response_dir, &key_dir),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
