//! Command-line commands. Each returns its output and exit status instead of printing.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use hpisot::algebra::minimal_polynomial_of_dilatation;
use hpisot::coincidence::{coincidence_analysis, measure_fraction_witness};
use hpisot::cohomology::{cohomology_report, CohomologyOptions};
use hpisot::cover::{build_triple_cover, cover_from_matrix, validate_cover, CoverSpec};
use hpisot::measure::{lattice_hypothesis, measure_display};
use hpisot::regularity::{default_patches, verify_erp, ErpReport, DEFAULT_SAMPLE_LEN};
use hpisot::substitution::DEFAULT_MAX_WORD_LENGTH;
use hpisot::{Error, IntegerMatrix, Result, Substitution, Word};
use serde::Serialize;
use serde_json::{json, Value};

use crate::corpus::{load_corpus, run_corpus};
use crate::pipeline::{analyze, exit_code, measures, AnalysisOptions, AnalysisReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PRECONDITION: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "hpisot", version, about = "Exact analysis of one-dimensional substitutions")]
pub struct Cli {
    /// Emit JSON reports.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized procedures. Every analysis is currently deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Working precision hint for root isolation. Certification is exact regardless.
    #[arg(long, global = true, default_value_t = 64)]
    pub precision_bits: u32,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    /// Cap on the length of words produced by iteration.
    #[arg(long, default_value_t = DEFAULT_MAX_WORD_LENGTH)]
    pub max_word_length: usize,
    /// Treat the tile and return lattices as equal, enabling exact measures.
    #[arg(long)]
    pub assert_lattices_equal: bool,
    /// Fit only the first N patches (letters, then 2-words, then 3-words).
    #[arg(long, value_name = "N")]
    pub erp_patches: Option<usize>,
    /// Fixed-word prefix length for fits.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_SAMPLE_LEN)]
    pub sample_len: usize,
}

impl PipelineArgs {
    fn options(&self) -> AnalysisOptions {
        AnalysisOptions {
            assert_lattices_equal: self.assert_lattices_equal,
            erp_patches: self.erp_patches,
            sample_len: self.sample_len,
            max_word_length: self.max_word_length,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full pipeline on a substitution file.
    Analyze {
        path: PathBuf,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// Build and validate a triple cover, from a cover spec or from a matrix M0 and a power.
    Cover {
        #[arg(required_unless_present = "m0", conflicts_with = "m0")]
        spec: Option<PathBuf>,
        /// JSON file holding the rows of a primitive integer matrix.
        #[arg(long, requires = "power")]
        m0: Option<PathBuf>,
        #[arg(long)]
        power: Option<u32>,
    },
    /// Analyze every entry of a corpus directory and compare against expectations.
    Corpus { dir: PathBuf },
    /// Fit patch-counting functionals.
    Erp {
        path: PathBuf,
        /// Patch to fit; repeatable. Defaults to letters, 2-words and 3-words.
        #[arg(long = "patch")]
        patches: Vec<String>,
        #[arg(long, value_name = "N")]
        erp_patches: Option<usize>,
        #[arg(long, value_name = "N", default_value_t = DEFAULT_SAMPLE_LEN)]
        sample_len: usize,
    },
    /// Exact cylinder measures.
    Measure {
        path: PathBuf,
        /// Patch to measure; repeatable. Defaults to letters and 2-words.
        #[arg(long = "patch")]
        patches: Vec<String>,
        #[arg(long)]
        assert_lattices_equal: bool,
    },
    /// Coincidence rank of the pure core.
    Cr { path: PathBuf },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn failure(e: &Error) -> Self {
        Self {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: exit_code(e),
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            } else {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            };
        }
    };
    let json = cli.json;
    let result = match cli.command {
        Command::Analyze { path, pipeline } => cmd_analyze(&path, &pipeline.options(), json),
        Command::Cover { spec, m0, power } => match (spec, m0, power) {
            (Some(spec), _, _) => cmd_cover(&spec, json),
            (None, Some(m0), Some(k)) => cmd_cover_generator(&m0, k, json),
            _ => Err(Error::Validation("cover needs a spec file or --m0 with --power".into())),
        },
        Command::Corpus { dir } => cmd_corpus(&dir, json),
        Command::Erp {
            path,
            patches,
            erp_patches,
            sample_len,
        } => cmd_erp(&path, &patches, erp_patches, sample_len, json),
        Command::Measure {
            path,
            patches,
            assert_lattices_equal,
        } => cmd_measure(&path, &patches, assert_lattices_equal, json),
        Command::Cr { path } => cmd_cr(&path, json),
    };
    result.unwrap_or_else(|e| Outcome::failure(&e))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// A substitution document, or a corpus entry holding one.
fn load_substitution(path: &Path) -> Result<Substitution> {
    let v: Value = serde_json::from_str(&read(path)?)?;
    match v.get("substitution") {
        Some(inner) => Substitution::from_value(inner),
        None => Substitution::from_value(&v),
    }
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn ok(stdout: String) -> Result<Outcome> {
    Ok(Outcome {
        stdout,
        stderr: String::new(),
        code: EXIT_OK,
    })
}

fn parse_patches(s: &Substitution, patches: &[String]) -> Result<Vec<Word>> {
    patches.iter().map(|p| s.parse_word(p)).collect()
}

pub fn analysis_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let v = &r.verdicts;
    let _ = writeln!(out, "letters: {}", r.substitution.names().join(" "));
    let _ = writeln!(out, "characteristic polynomial: {}", r.pisot.factorization.display());
    if !r.rational_eigenvalues.is_empty() {
        let _ = writeln!(out, "rational eigenvalues: {}", r.rational_eigenvalues.join(", "));
    }
    let _ = writeln!(
        out,
        "dilatation: root of {} (degree {}, ≈ {:.12}), Pisot: {}",
        r.pisot.min_poly,
        r.pisot.degree,
        r.pisot.field.approx(),
        r.pisot.is_pisot
    );
    let _ = writeln!(
        out,
        "dim H1 = {} (eventual rank {}, {} components, {} independent cycles)",
        r.cohomology.dim_h1, r.cohomology.eventual_rank, r.cohomology.components, r.cohomology.independent_cycles
    );
    let _ = writeln!(out, "homological Pisot: {}", v.homological_pisot);
    if let Some(c) = &r.coincidence {
        let _ = writeln!(
            out,
            "coincidence rank: {} (height {}), rank check: {}",
            c.report.cr,
            c.height,
            serde_json::to_value(c.crc.verdict).expect("serializes").as_str().unwrap_or("")
        );
    }
    if let Some(w) = &r.measure_witness {
        let sets: Vec<String> = w
            .sets
            .iter()
            .map(|s| format!("{{{}}} = {}", s.letters.join(","), s.measure))
            .collect();
        let _ = writeln!(out, "witness sets: {}", sets.join("; "));
    }
    if let Some(e) = &r.erp {
        let exact = e.fits.iter().filter(|f| f.in_z_one_over_a0()).count();
        let verdict = serde_json::to_value(&e.verdict).expect("serializes");
        let _ = writeln!(
            out,
            "exact regularity: {} ({exact}/{} patches exact)",
            verdict.as_str().unwrap_or(""),
            e.fits.len()
        );
    }
    if let Some(ms) = &r.measures {
        for m in ms.iter().take(r.substitution.size()) {
            let _ = writeln!(out, "μ({}) = {}", m.patch, measure_display(m));
        }
    }
    for (k, why) in &r.skipped {
        let _ = writeln!(out, "skipped {k}: {why}");
    }
    out
}

pub fn cmd_analyze(path: &Path, opts: &AnalysisOptions, json: bool) -> Result<Outcome> {
    let s = load_substitution(path)?;
    let report = analyze(&s, opts)?;
    ok(if json { to_json(&report) } else { analysis_text(&report) })
}

#[derive(Serialize)]
struct CoverResult {
    base: Substitution,
    spec: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    cover: Option<Substitution>,
    #[serde(skip_serializing_if = "Option::is_none")]
    validation: Option<hpisot::cover::CoverValidation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    generator_checks: Option<hpisot::cover::MatrixCoverChecks>,
    all_passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<String>,
    /// File names written next to the input.
    written: Vec<String>,
}

fn cover_text(r: &CoverResult) -> String {
    let mut out = String::new();
    if let Some(f) = &r.failure {
        let _ = writeln!(out, "cover construction failed: {f}");
    }
    if let Some(v) = &r.validation {
        for (name, c) in [
            ("prefix/suffix", &v.prefix_suffix),
            ("disjoint lifts", &v.disjoint_lifts),
            ("cohomology", &v.cohomology),
            ("coincidence", &v.coincidence),
        ] {
            let mark = if c.passed { "pass" } else { "FAIL" };
            let _ = writeln!(out, "{name}: {mark} ({})", c.detail);
        }
    }
    for w in &r.written {
        let _ = writeln!(out, "wrote {w}");
    }
    out
}

fn sibling(input: &Path, suffix: &str) -> PathBuf {
    let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("cover");
    input.with_file_name(format!("{stem}{suffix}"))
}

fn write_file(path: &Path, text: &str) -> Result<String> {
    std::fs::write(path, text).map_err(|e| Error::Precondition(format!("{}: {e}", path.display())))?;
    Ok(path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default())
}

pub fn cmd_cover(spec_path: &Path, json: bool) -> Result<Outcome> {
    let spec = CoverSpec::from_json(&read(spec_path)?)?;
    let spec_value: Value = serde_json::from_str(&spec.to_json())?;
    let mut result = CoverResult {
        base: spec.base.clone(),
        spec: spec_value,
        cover: None,
        validation: None,
        generator_checks: None,
        all_passed: false,
        failure: None,
        written: Vec::new(),
    };
    match build_triple_cover(&spec) {
        Ok(cover) => {
            let v = validate_cover(&spec, &cover)?;
            result.all_passed = v.all_passed();
            let out = sibling(spec_path, ".substitution.json");
            result.written.push(write_file(&out, &(cover.to_json() + "\n"))?);
            result.validation = Some(v);
            result.cover = Some(cover);
        }
        Err(Error::Cover(msg)) => result.failure = Some(msg),
        Err(e) => return Err(e),
    }
    ok(if json { to_json(&result) } else { cover_text(&result) })
}

pub fn cmd_cover_generator(m0_path: &Path, k: u32, json: bool) -> Result<Outcome> {
    let rows: Vec<Vec<i64>> = serde_json::from_str(&read(m0_path)?)?;
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows.len()) {
        return Err(Error::Validation("M0 must be a nonempty square matrix".into()));
    }
    let m0 = IntegerMatrix::from_rows(&rows);
    let e = cover_from_matrix(&m0, k)?;
    let spec_text = e.spec.to_json();
    let mut written = Vec::new();
    written.push(write_file(&sibling(m0_path, &format!(".k{k}.cover_spec.json")), &(spec_text.clone() + "\n"))?);
    written.push(write_file(
        &sibling(m0_path, &format!(".k{k}.substitution.json")),
        &(e.cover.to_json() + "\n"),
    )?);
    let result = CoverResult {
        base: e.base,
        spec: serde_json::from_str(&spec_text)?,
        all_passed: e.validation.all_passed(),
        cover: Some(e.cover),
        validation: Some(e.validation),
        generator_checks: Some(e.checks),
        failure: None,
        written,
    };
    ok(if json { to_json(&result) } else { cover_text(&result) })
}

pub fn cmd_corpus(dir: &Path, json: bool) -> Result<Outcome> {
    let entries = load_corpus(dir)?;
    let (summary, _) = run_corpus(&entries);
    let mut stderr = String::new();
    for row in &summary.entries {
        for m in &row.mismatches {
            let actual = m.actual.as_ref().map_or("(missing)".to_string(), Value::to_string);
            let _ = writeln!(
                stderr,
                "{}: {}: expected {}, got {actual}",
                row.name, m.path, m.expected
            );
        }
    }
    let stdout = if json {
        to_json(&summary)
    } else {
        let mut t = String::new();
        let _ = writeln!(t, "{:<24} {:>3} {:>6} {:>4}  {:<18} status", "name", "d", "dim_h1", "cr", "homological_pisot");
        let dash = || "-".to_string();
        for r in &summary.entries {
            let hp = r
                .verdicts
                .get("homological_pisot")
                .map_or_else(dash, Value::to_string);
            let status = if let Some(e) = &r.error {
                format!("error: {e}")
            } else if r.mismatches.is_empty() {
                "ok".into()
            } else {
                format!("{} mismatches", r.mismatches.len())
            };
            let _ = writeln!(
                t,
                "{:<24} {:>3} {:>6} {:>4}  {:<18} {status}",
                r.name,
                r.d.map_or_else(dash, |x| x.to_string()),
                r.dim_h1.map_or_else(dash, |x| x.to_string()),
                r.cr.map_or_else(dash, |x| x.to_string()),
                hp
            );
        }
        t
    };
    Ok(Outcome {
        stdout,
        stderr,
        code: if summary.all_expectations_met { EXIT_OK } else { EXIT_MISMATCH },
    })
}

pub fn erp_report(
    s: &Substitution,
    patches: &[String],
    limit: Option<usize>,
    sample_len: usize,
) -> Result<ErpReport> {
    AnalysisOptions {
        sample_len,
        ..AnalysisOptions::default()
    }
    .check()?;
    let pisot = minimal_polynomial_of_dilatation(s)?;
    let hom = cohomology_report(s, &pisot, CohomologyOptions::default())?;
    let patches = if patches.is_empty() {
        default_patches(s, limit)?
    } else {
        parse_patches(s, patches)?
    };
    verify_erp(s, &pisot, hom.homological_pisot, &patches, sample_len)
}

pub fn cmd_erp(
    path: &Path,
    patches: &[String],
    limit: Option<usize>,
    sample_len: usize,
    json: bool,
) -> Result<Outcome> {
    let s = load_substitution(path)?;
    let report = erp_report(&s, patches, limit, sample_len)?;
    if json {
        return ok(to_json(&report));
    }
    let mut out = String::new();
    for f in &report.fits {
        let alphas = match &f.alphas {
            Some(a) => a
                .iter()
                .map(hpisot::rational::rational_display)
                .collect::<Vec<_>>()
                .join(", "),
            None => "no exact fit".into(),
        };
        let _ = writeln!(out, "{}: ({alphas}) from {} returns", f.patch_display, f.samples);
    }
    let verdict = serde_json::to_value(&report.verdict).expect("serializes");
    let _ = writeln!(out, "{}", verdict.as_str().unwrap_or(""));
    ok(out)
}

pub fn cmd_measure(path: &Path, patches: &[String], asserted: bool, json: bool) -> Result<Outcome> {
    let s = load_substitution(path)?;
    let pisot = minimal_polynomial_of_dilatation(&s)?;
    let lattice = lattice_hypothesis(&s, &pisot, asserted)?;
    let words = if patches.is_empty() {
        let mut w: Vec<Word> = (0..s.size()).map(|a| vec![a]).collect();
        w.extend(s.words_of_length(2)?);
        w
    } else {
        parse_patches(&s, patches)?
    };
    let ms = measures(&s, &pisot, &words, lattice)?;
    if json {
        return ok(to_json(&json!({
            "min_poly": pisot.min_poly,
            "measures": ms,
        })));
    }
    let mut out = String::new();
    for m in &ms {
        let _ = writeln!(out, "μ({}) = {}", m.patch, measure_display(m));
    }
    ok(out)
}

pub fn cmd_cr(path: &Path, json: bool) -> Result<Outcome> {
    let s = load_substitution(path)?;
    let pisot = minimal_polynomial_of_dilatation(&s)?;
    if pisot.degree != 1 {
        return Err(Error::Precondition(format!(
            "coincidence rank needs an integer dilatation, got degree {}",
            pisot.degree
        )));
    }
    let hom = cohomology_report(&s, &pisot, CohomologyOptions::default())?;
    let analysis = coincidence_analysis(&s, &pisot, hom.homological_pisot)?;
    let witness = if s.constant_length().is_some() {
        Some(measure_fraction_witness(&s, &pisot, hom.homological_pisot)?)
    } else {
        None
    };
    if json {
        return ok(to_json(&json!({
            "coincidence": analysis,
            "measure_witness": witness,
        })));
    }
    let mut out = String::new();
    let _ = writeln!(out, "cr = {} (height {})", analysis.report.cr, analysis.height);
    let _ = writeln!(out, "{}", analysis.crc.note);
    ok(out)
}
