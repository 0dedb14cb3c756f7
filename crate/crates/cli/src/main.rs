mod config;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use cayley_wreath::audit::{self, AuditConfig};
use cayley_wreath::base::{validate_structure, BaseAutomaticStructure, BaseError, ValidationReport};
use cayley_wreath::groups::{GroupError, GroupSpecJson};
use cayley_wreath::par::Exec;
use cayley_wreath::word_problem::{self, SolveError, Verdict};
use cayley_wreath::wreath::{ShiftEntry, WreathError, WreathStructure, WreathStructureJson};

use config::{parse_window, AuditDepths, ProjectConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("counterexample: {0}")]
    Validation(String),
    #[error("construction bug: {0}")]
    ConstructionBug(String),
    #[error("not in the normal-form language: {0}")]
    NotInLanguage(String),
    #[error("unknown generator '{0}'")]
    UnknownGenerator(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Validation(_) => 3,
            CliError::ConstructionBug(_) => 4,
            CliError::NotInLanguage(_) => 5,
            CliError::UnknownGenerator(_) => 6,
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::UnknownGenerator(g) => CliError::UnknownGenerator(g),
            e => CliError::Validation(e.to_string()),
        }
    }
}

impl From<BaseError> for CliError {
    fn from(e: BaseError) -> Self {
        match e {
            BaseError::Group(g) => g.into(),
            BaseError::Malformed(m) => CliError::Usage(m),
            e => CliError::Validation(e.to_string()),
        }
    }
}

impl From<WreathError> for CliError {
    fn from(e: WreathError) -> Self {
        match e {
            WreathError::Group(g) => g.into(),
            WreathError::Base(b) => b.into(),
            WreathError::NotInLanguage(w) => CliError::NotInLanguage(w),
            WreathError::UnknownSymbol(s) => CliError::Usage(format!("unknown symbol '{s}'")),
            WreathError::Malformed(m) => CliError::Usage(m),
            e => CliError::ConstructionBug(e.to_string()),
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::UnknownGenerator(g) => g.into(),
            SolveError::ConstructionBug { step, source, trace } => {
                let done = trace.steps();
                CliError::ConstructionBug(format!("step {step} ({source}); {done} letters applied before the failure"))
            }
        }
    }
}

#[derive(Parser)]
#[command(name = "cayley-wreath", version, about = "Cayley automatic structures for wreath products G wr H")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Where the structure comes from: a saved JSON file or a project config
/// to build from.
#[derive(Args)]
struct Source {
    #[arg(long, conflicts_with = "config")]
    structure: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build the structure described by a project config and write it out.
    Build {
        #[arg(long)]
        config: PathBuf,
        /// overrides the config's output directory
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Normal form of a word over the generators.
    Nf {
        #[command(flatten)]
        source: Source,
        word: String,
    },
    /// Multiply a normal form by one generator.
    Mul {
        #[command(flatten)]
        source: Source,
        normal_form: String,
        generator: String,
    },
    /// Decide whether a word is trivial.
    Wp {
        #[command(flatten)]
        source: Source,
        word: String,
        /// print every intermediate normal form
        #[arg(long)]
        trace: bool,
    },
    /// List the normal forms up to a length with the elements they denote.
    Enum {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Run the audit suite against the group oracle.
    Verify {
        #[command(flatten)]
        source: Source,
        /// language depth; the multiplier depth defaults to two less
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        mult_depth: Option<usize>,
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Option<(i64, i64)>,
        #[arg(long)]
        seed: Option<u64>,
        /// write the report as JSON here too
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        sequential: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cmd: Command) -> Result<String, CliError> {
    match cmd {
        Command::Build { config, out } => cmd_build(&config, out),
        Command::Nf { source, word } => {
            let ws = load(&source)?;
            let v = ws.group().eval_word(&word)?;
            Ok(format!("{}\n", ws.format_word(&ws.encode(&v))))
        }
        Command::Mul { source, normal_form, generator } => {
            let ws = load(&source)?;
            let u = ws.parse_word(&normal_form)?;
            if !ws.language().accepts(&u) {
                return Err(CliError::NotInLanguage(normal_form));
            }
            let i = ws.group().generators().index(&generator).ok_or(CliError::UnknownGenerator(generator))?;
            let v = ws.apply(i, &u).map_err(|e| CliError::ConstructionBug(e.to_string()))?;
            Ok(format!("{}\n", ws.format_word(&v)))
        }
        Command::Wp { source, word, trace } => {
            let ws = load(&source)?;
            let t = word_problem::solve_text(&ws, &word)?;
            let mut out = String::new();
            if trace {
                let gens = ws.group().generators();
                for (i, form) in t.forms.iter().enumerate() {
                    let letter = if i == 0 { "-".to_string() } else { gens.name(t.input[i - 1]).to_string() };
                    writeln!(out, "{i:>4} {letter:>6}  {}", ws.format_word(form)).unwrap();
                }
            }
            let verdict = match t.verdict {
                Some(Verdict::Trivial) => "trivial",
                _ => "nontrivial",
            };
            writeln!(out, "{verdict}\n{}", ws.format_word(t.final_form())).unwrap();
            Ok(out)
        }
        Command::Enum { source, depth } => {
            let ws = load(&source)?;
            let mut out = String::new();
            for w in ws.language().enumerate(depth) {
                let v = ws.decode(&w)?;
                writeln!(out, "{}\t{}", ws.format_word(&w), ws.group().describe(&v)).unwrap();
            }
            Ok(out)
        }
        Command::Verify { source, depth, mult_depth, window, seed, json, sequential } => {
            let (ws, depths, cfg_seed) = match (&source.structure, &source.config) {
                (_, Some(c)) => {
                    let cfg = ProjectConfig::load(c)?;
                    let (ws, _) = build_from(&cfg)?;
                    (ws, cfg.audit, cfg.seed)
                }
                _ => (load(&source)?, AuditDepths::default(), 7),
            };
            let language_depth = depth.unwrap_or(depths.language_depth);
            let depths = AuditDepths {
                language_depth,
                multiplier_depth: mult_depth.unwrap_or(if depth.is_some() { language_depth.saturating_sub(2).max(1) } else { depths.multiplier_depth }),
                window: window.unwrap_or(depths.window),
                ..depths
            };
            depths.check()?;
            let cfg = AuditConfig {
                language_depth: depths.language_depth,
                multiplier_depth: depths.multiplier_depth,
                window: depths.window,
                max_lamps: depths.max_lamps,
                random_words: depths.random_words,
                max_word_len: depths.max_word_len,
                seed: seed.unwrap_or(cfg_seed),
                exec: if sequential { Exec::Sequential } else { Exec::default() },
            };
            let result = audit::verify(&ws, &cfg);
            if let Some(path) = json {
                let twin = match &result {
                    Ok(r) => serde_json::json!({ "passed": true, "checks": r.lines }),
                    Err(f) => serde_json::json!({ "passed": false, "check": f.check, "counterexample": f.detail }),
                };
                write_file(&path, &serde_json::to_string_pretty(&twin).expect("report serializes"))?;
            }
            let report = result.map_err(|f| CliError::Validation(f.to_string()))?;
            Ok(format!("{}\n{report}all checks passed\n", ws.group_name()))
        }
    }
}

trait GroupName {
    fn group_name(&self) -> String;
}

impl GroupName for WreathStructure {
    fn group_name(&self) -> String {
        let base = match self.base().group().elements() {
            Some(e) => format!("G of order {}", e.len()),
            None => "G = Z".into(),
        };
        format!("{base} wr H with m = {}", self.m())
    }
}

fn read_spec(path: &Path) -> Result<GroupSpecJson, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Usage(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn build_from(cfg: &ProjectConfig) -> Result<(WreathStructure, ValidationReport), CliError> {
    let g = read_spec(&cfg.base)?.to_base_group()?;
    let h = read_spec(&cfg.hspec)?.to_hspec()?;
    let base = BaseAutomaticStructure::for_group(g)?;
    let validation = validate_structure(&base, cfg.audit.base_depth)?;
    let ws = WreathStructure::build(base, h, Exec::default())?;
    Ok((ws, validation))
}

fn load(source: &Source) -> Result<WreathStructure, CliError> {
    match (&source.structure, &source.config) {
        (Some(p), _) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
            let j: WreathStructureJson = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
            Ok(WreathStructure::from_json(&j)?)
        }
        (None, Some(c)) => Ok(build_from(&ProjectConfig::load(c)?)?.0),
        (None, None) => Err(CliError::Usage("pass --structure or --config".into())),
    }
}

#[derive(Serialize)]
struct AutomatonSize {
    name: String,
    states: usize,
    transitions: usize,
}

#[derive(Serialize)]
struct BuildReport {
    group: String,
    generators: Vec<String>,
    language: AutomatonSize,
    multipliers: Vec<AutomatonSize>,
    shifts: Vec<ShiftEntry>,
    base_validation: ValidationReport,
}

impl BuildReport {
    fn new(ws: &WreathStructure, base_validation: ValidationReport) -> Self {
        let gens = ws.group().generators();
        Self {
            group: ws.group_name(),
            generators: gens.names().to_vec(),
            language: AutomatonSize { name: "L".into(), states: ws.language().num_states(), transitions: ws.language().num_transitions() },
            multipliers: (0..gens.len())
                .map(|i| AutomatonSize {
                    name: format!("R_{}", gens.name(i)),
                    states: ws.multiplier(i).num_states(),
                    transitions: ws.multiplier(i).num_transitions(),
                })
                .collect(),
            shifts: ws.shifts().entries.clone(),
            base_validation,
        }
    }

    fn text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{}", self.group).unwrap();
        writeln!(s, "{} generators: {}", self.generators.len(), self.generators.join(" ")).unwrap();
        writeln!(s, "{} multipliers", self.multipliers.len()).unwrap();
        for a in std::iter::once(&self.language).chain(&self.multipliers) {
            writeln!(s, "  {:<10} {:>6} states {:>8} transitions", a.name, a.states, a.transitions).unwrap();
        }
        writeln!(s, "shift table (x_q · a = t^k x_r, offset s):").unwrap();
        for e in &self.shifts {
            writeln!(s, "  {:<6} q={} k={:>2} r={} s={:>3}", e.generator, e.q, e.k, e.r, e.s).unwrap();
        }
        let v = &self.base_validation;
        writeln!(
            s,
            "base structure: {} words checked to length {}, lambda = {}",
            v.words_checked, v.depth, v.quasigeodesic.lambda
        )
        .unwrap();
        s
    }
}

fn cmd_build(config: &Path, out: Option<PathBuf>) -> Result<String, CliError> {
    let cfg = ProjectConfig::load(config)?;
    let (ws, validation) = build_from(&cfg)?;
    let dir = out.unwrap_or(cfg.output.clone());
    let report = BuildReport::new(&ws, validation);
    let text = report.text();
    write_file(&dir.join("structure.json"), &serde_json::to_string(&ws.to_json()).expect("structure serializes"))?;
    write_file(&dir.join("report.txt"), &text)?;
    write_file(&dir.join("report.json"), &serde_json::to_string_pretty(&report).expect("report serializes"))?;
    Ok(format!("{text}wrote {}\n", dir.join("structure.json").display()))
}
