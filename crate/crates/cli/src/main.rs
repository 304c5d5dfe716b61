use std::fs;
use std::io::{self, Read};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use sbraid_core::braid_presentations::{eta_expand, split_singular, BraidWord};
use sbraid_core::desing::{brute_force_preimage, decode, nu, FormalSum};
use sbraid_core::k_group::{KElement, KGroup, PeripheralTable};
use sbraid_core::suite;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "sbraid", version, about = "Singular surface braids, the K_n tower and the desingularization map")]
struct Cli {
    /// Number of strands.
    #[arg(long = "n", global = true, default_value_t = 3)]
    n: usize,
    /// Genus of the surface.
    #[arg(long, global = true, default_value_t = 1)]
    genus: u32,
    /// Seed for the randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// File of peripheral commutation entries `A(i,k) a(1,k') -> word`.
    #[arg(long = "action-table", global = true)]
    action_table: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a braid word and report its length, singular order and permutation.
    Parse { word: Option<String> },
    /// Write a singular word as a product of δ-conjugates times a braid;
    /// τ letters are first rewritten as σ⁻¹δ.
    Split { word: Option<String> },
    /// Expand the desingularization of a singular word.
    Eta { word: Option<String> },
    /// ν of a comma-separated list of K_n elements such as `b[x1;2]@3`.
    Nu { letters: Option<String> },
    /// Recover the trace word from a formal sum in JSON.
    Decode { sum: Option<String> },
    /// Every word over `--gens` of length at most `--lmax` mapping to the sum.
    Preimage {
        sum: Option<String>,
        #[arg(long)]
        lmax: usize,
        /// Comma-separated generator elements.
        #[arg(long)]
        gens: String,
    },
    /// Run every invariant suite.
    Suite,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Parse { .. } => "parse",
            Command::Split { .. } => "split",
            Command::Eta { .. } => "eta",
            Command::Nu { .. } => "nu",
            Command::Decode { .. } => "decode",
            Command::Preimage { .. } => "preimage",
            Command::Suite => "suite",
        }
    }
}

/// Validated session parameters.
#[derive(Debug, Clone)]
struct SessionConfig {
    n: usize,
    genus: u32,
    seed: u64,
    table: PeripheralTable,
    format: Format,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {what}: {source}")]
    Io { what: String, source: io::Error },
    #[error(transparent)]
    Core(#[from] sbraid_core::Error),
}

impl CliError {
    fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "cli::usage",
            CliError::Io { .. } => "cli::io",
            CliError::Core(e) => e.code(),
        }
    }
}

fn core<E: Into<sbraid_core::Error>>(e: E) -> CliError {
    CliError::Core(e.into())
}

impl SessionConfig {
    fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        if cli.n < 2 {
            return Err(CliError::Usage(format!("--n must be at least 2, got {}", cli.n)));
        }
        if cli.genus < 1 {
            return Err(CliError::Usage("--genus must be at least 1".into()));
        }
        let table = match &cli.action_table {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|source| CliError::Io { what: path.clone(), source })?;
                PeripheralTable::parse(&text, cli.n, cli.genus).map_err(core)?
            }
            None => PeripheralTable::empty(),
        };
        Ok(SessionConfig { n: cli.n, genus: cli.genus, seed: cli.seed, table, format: cli.format })
    }

    fn k_group(&self) -> Result<KGroup, CliError> {
        KGroup::new(self.n, self.genus, self.table.clone()).map_err(core)
    }

    fn braid_word(&self, text: &str) -> Result<BraidWord, CliError> {
        BraidWord::parse(text, self.n, self.genus as usize).map_err(core)
    }
}

/// The positional argument, or all of stdin when it is absent or `-`.
fn input(arg: &Option<String>) -> Result<String, CliError> {
    match arg.as_deref() {
        Some(text) if text != "-" => Ok(text.to_string()),
        _ => {
            let mut buf = String::new();
            io::stdin()
                .read_to_string(&mut buf)
                .map_err(|source| CliError::Io { what: "stdin".into(), source })?;
            Ok(buf.trim().to_string())
        }
    }
}

fn parse_elements(k: &KGroup, text: &str) -> Result<Vec<KElement>, CliError> {
    text.split(',').map(str::trim).filter(|t| !t.is_empty()).map(|t| k.parse_element(t).map_err(core)).collect()
}

fn sum_text(sum: &FormalSum) -> String {
    if sum.is_zero() {
        return "0\n".to_string();
    }
    sum.terms().iter().map(|(x, c)| format!("{c:+} {x}\n")).collect()
}

fn classes_json(classes: &[Vec<Vec<KElement>>]) -> Value {
    let render = |blocks: &Vec<Vec<KElement>>| -> Value {
        blocks.iter().map(|b| b.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>().into()
    };
    classes.iter().map(render).collect::<Vec<_>>().into()
}

fn blocks_text(blocks: &[Vec<KElement>]) -> String {
    let parts: Vec<String> =
        blocks.iter().map(|b| format!("[{}]", b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))).collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join(" ")
    }
}

/// Output text and whether every check in it passed.
fn run(command: &Command, config: &SessionConfig) -> Result<(String, bool), CliError> {
    let text_mode = config.format == Format::Text;
    let render = |value: Value, text: String| if text_mode { text } else { format!("{value}\n") };
    match command {
        Command::Parse { word } => {
            let w = config.braid_word(&input(word)?)?;
            let perm = w.permutation();
            let value = json!({
                "word": w.to_string(),
                "length": w.len(),
                "order": w.order(),
                "singular": w.is_singular(),
                "permutation": perm.images(),
            });
            let text = format!(
                "word: {w}\nlength: {}\norder: {}\npermutation: {:?}\n",
                w.len(),
                w.order(),
                perm.images()
            );
            Ok((render(value, text), true))
        }
        Command::Split { word } => {
            let w = config.braid_word(&input(word)?)?.delta_substitute();
            let split = split_singular(&w).map_err(core)?;
            split.certify(&w).map_err(core)?;
            let mut text = String::new();
            for h in &split.trace {
                text.push_str(&format!("({}; d{})\n", h.conj, h.index));
            }
            text.push_str(&format!("braid: {}\n", split.braid));
            Ok((render(split.to_json(), text), true))
        }
        Command::Eta { word } => {
            let w = config.braid_word(&input(word)?)?;
            let sum = eta_expand(&w);
            let text = sum.terms.iter().map(|t| format!("{:+} {}\n", t.coeff, t.word)).collect();
            Ok((render(sum.to_json(), text), true))
        }
        Command::Nu { letters } => {
            let k = config.k_group()?;
            let letters = parse_elements(&k, &input(letters)?)?;
            let sum = nu(&k, &letters).map_err(core)?;
            Ok((render(sum.to_json(), sum_text(&sum)), true))
        }
        Command::Decode { sum } => {
            let k = config.k_group()?;
            let p = FormalSum::from_json(&input(sum)?, &k).map_err(core)?;
            let w = decode(&k, &p).map_err(core)?;
            let blocks = w.foata_normal_form();
            let value = json!({
                "word": w.letters().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "foata": classes_json(std::slice::from_ref(&blocks))[0].clone(),
            });
            Ok((render(value, format!("{}\n", blocks_text(&blocks))), true))
        }
        Command::Preimage { sum, lmax, gens } => {
            let k = config.k_group()?;
            let p = FormalSum::from_json(&input(sum)?, &k).map_err(core)?;
            let gens = parse_elements(&k, gens)?;
            if gens.is_empty() {
                return Err(CliError::Usage("--gens needs at least one element".into()));
            }
            let found = brute_force_preimage(&k, &p, &gens, *lmax).map_err(core)?;
            let classes: Vec<Vec<Vec<KElement>>> = found.iter().map(|w| w.foata_normal_form()).collect();
            let text = classes.iter().map(|c| format!("{}\n", blocks_text(c))).collect::<String>();
            let text = if text.is_empty() { "no preimage\n".to_string() } else { text };
            Ok((render(json!({ "classes": classes_json(&classes) }), text), true))
        }
        Command::Suite => {
            let report = suite::run_all(config.seed);
            Ok((render(report.to_json(), report.to_text()), report.passed))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let operation = cli.command.name();
    let outcome = SessionConfig::from_cli(&cli).and_then(|config| run(&cli.command, &config));
    match outcome {
        Ok((out, passed)) => {
            print!("{out}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            if cli.format == Format::Text {
                eprintln!("error in {operation}: {}: {e}", e.code());
            } else {
                eprintln!("{}", json!({"error": {"operation": operation, "code": e.code(), "message": e.to_string()}}));
            }
            if matches!(e, CliError::Usage(_)) {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
