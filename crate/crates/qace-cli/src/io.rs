//! File formats: counts CSV (`x,a,b,count`), probability JSON
//! (`{"pabx": [[[..]]]}` indexed [x][a][b]), the fit dataset JSON, and the
//! metadata header carried by every output file.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;
use serde_json::json;

use qace_core::scenario::ObservedDistribution;
use qace_core::stats::CountsTable;

/// Error split driving the process exit code: 2 for unreadable or
/// unparseable inputs, 3 for well-formed data that violates a numeric
/// invariant.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Numeric(m) => write!(f, "numeric invariant violation: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Core errors about parameter domains and file content map to input errors;
/// violated numeric invariants keep their own exit code.
pub fn core_error(e: qace_core::Error) -> CliError {
    use qace_core::Error as E;
    match e {
        E::ParamOutOfRange(_) | E::InsufficientData { .. } => CliError::Input(e.to_string()),
        E::ZeroCountColumn(_)
        | E::DistributionInvariant(_)
        | E::InvalidState(_)
        | E::NonDichotomic { .. }
        | E::EtaResidual { .. } => CliError::Numeric(e.to_string()),
        other => CliError::Numeric(other.to_string()),
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const CLAMP_CONVENTION: &str = "raw and clamped reported; clamped = max(0, raw)";
pub const RESAMPLING_LAW: &str = "multinomial per setting with fixed observed totals";

/// `# key: value` comment lines prefixed to CSV outputs.
pub fn csv_metadata(pairs: &[(&str, String)]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# artifact-version: {ARTIFACT_VERSION}");
    let _ = writeln!(out, "# clamp: {CLAMP_CONVENTION}");
    for (k, v) in pairs {
        let _ = writeln!(out, "# {k}: {v}");
    }
    out
}

/// Shared `meta` object for JSON outputs.
pub fn json_metadata(pairs: &[(&str, serde_json::Value)]) -> serde_json::Value {
    let mut meta = json!({
        "artifact_version": ARTIFACT_VERSION,
        "clamp": CLAMP_CONVENTION,
    });
    for (k, v) in pairs {
        meta[*k] = v.clone();
    }
    meta
}

pub fn read_to_string(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

pub fn write_output(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

/// Parses the counts CSV: header `x,a,b,count`, one row per cell, each cell
/// at most once; absent cells count zero.
pub fn parse_counts_csv(text: &str) -> CliResult<CountsTable> {
    let mut lines = text
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| CliError::Input("empty counts file".into()))?;
    let normalized: String = header.split_whitespace().collect();
    if normalized != "x,a,b,count" {
        return Err(CliError::Input(format!(
            "counts header must be 'x,a,b,count', got '{header}'"
        )));
    }
    let mut n = [[[0u64; 2]; 2]; 2];
    let mut seen = [[[false; 2]; 2]; 2];
    for (lineno, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(CliError::Input(format!(
                "counts row {} needs 4 fields, got {}",
                lineno + 2,
                fields.len()
            )));
        }
        let parse_bit = |s: &str, name: &str| -> CliResult<usize> {
            match s {
                "0" => Ok(0),
                "1" => Ok(1),
                other => Err(CliError::Input(format!(
                    "{name} must be 0 or 1, got '{other}'"
                ))),
            }
        };
        let x = parse_bit(fields[0], "x")?;
        let a = parse_bit(fields[1], "a")?;
        let b = parse_bit(fields[2], "b")?;
        let count: u64 = fields[3].parse().map_err(|_| {
            CliError::Input(format!(
                "count '{}' is not a nonnegative integer",
                fields[3]
            ))
        })?;
        if seen[x][a][b] {
            return Err(CliError::Input(format!("duplicate cell x={x},a={a},b={b}")));
        }
        seen[x][a][b] = true;
        n[x][a][b] = count;
    }
    Ok(CountsTable::new(n))
}

#[derive(Deserialize)]
struct ProbsFile {
    pabx: [[[f64; 2]; 2]; 2],
}

/// Parses the probability JSON `{"pabx": [[[..]]]}` indexed [x][a][b] and
/// validates the distribution invariants.
pub fn parse_probs_json(text: &str) -> CliResult<ObservedDistribution<f64>> {
    let file: ProbsFile = serde_json::from_str(text)
        .map_err(|e| CliError::Input(format!("probability JSON: {e}")))?;
    ObservedDistribution::new(file.pabx).map_err(core_error)
}

#[derive(Deserialize)]
struct DatasetFile {
    points: Vec<DatasetPoint>,
}

#[derive(Deserialize)]
struct DatasetPoint {
    alpha: f64,
    /// counts indexed [x][a][b]
    counts: [[[u64; 2]; 2]; 2],
}

/// Parses the fit dataset JSON:
/// `{"points": [{"alpha": R, "counts": [[[..]]]}, ...]}`.
pub fn parse_dataset_json(text: &str) -> CliResult<Vec<qace_core::stats::FitPoint<f64>>> {
    let file: DatasetFile =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("dataset JSON: {e}")))?;
    Ok(file
        .points
        .into_iter()
        .map(|p| qace_core::stats::FitPoint {
            alpha: p.alpha,
            counts: CountsTable::new(p.counts),
        })
        .collect())
}
