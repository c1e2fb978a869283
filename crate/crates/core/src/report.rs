//! State specifications, state files, partition syntax and correlation
//! reports for the command-line front end.

use std::f64::consts::LN_2;
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::correlation::{self, classify_region, correlation_bounds, BoundsReport, Region, BOUND_TOL};
use crate::error::{Error, Result};
use crate::partitions::{enumerate_bipartitions, CorrelationAnalysis, Partition, PRODUCT_TOL};
use crate::purification::{is_maximally_correlated_purification, purify, spectral_rank, RANK_THRESHOLD};
use crate::qstates::{to_density, PureState, StateLimits};

/// Normalization tolerance for amplitudes read from a state file.
pub const FILE_NORM_TOL: f64 = 1e-8;

/// A named state or a state file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StateSpec {
    /// `ghz:N`
    Ghz(usize),
    /// `ue:N`, `N` total qubits (even).
    UniformEntangled(usize),
    /// `bellpairs:K`
    BellPairs(usize),
    /// `ghzblocks:N`, `N` qubits per block.
    GhzBlocks(usize),
    /// `file:PATH`
    File(PathBuf),
}

impl StateSpec {
    pub fn build(&self, limits: &StateLimits) -> Result<PureState> {
        let state = match self {
            StateSpec::Ghz(n) => limits.ghz(*n),
            StateSpec::UniformEntangled(n) => limits.uniform_entangled(n / 2),
            StateSpec::BellPairs(k) => limits.bell_product(*k),
            StateSpec::GhzBlocks(n) => limits.ghz_block_product(*n),
            StateSpec::File(path) => load_state_file(path).and_then(|s| {
                if s.n_qubits() > limits.max_qubits {
                    Err(Error::Size(format!(
                        "{} qubits exceeds the limit of {}",
                        s.n_qubits(),
                        limits.max_qubits
                    )))
                } else {
                    Ok(s)
                }
            }),
        };
        state.map_err(|e| e.context(format!("building state {self}")))
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Ghz(n) => write!(f, "ghz:{n}"),
            StateSpec::UniformEntangled(n) => write!(f, "ue:{n}"),
            StateSpec::BellPairs(k) => write!(f, "bellpairs:{k}"),
            StateSpec::GhzBlocks(n) => write!(f, "ghzblocks:{n}"),
            StateSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FromStr for StateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_state_spec(s)
    }
}

pub fn parse_state_spec(text: &str) -> Result<StateSpec> {
    let Some(colon) = text.find(':') else {
        return Err(Error::Parse {
            position: text.len(),
            message: format!("expected `kind:parameter`, got {text:?}"),
        });
    };
    let (kind, param) = (&text[..colon], &text[colon + 1..]);
    let param_pos = colon + 1;
    if kind == "file" {
        if param.is_empty() {
            return Err(Error::Parse {
                position: param_pos,
                message: "missing file path".into(),
            });
        }
        return Ok(StateSpec::File(PathBuf::from(param)));
    }
    let number = || -> Result<usize> {
        param.parse::<usize>().map_err(|_| Error::Parse {
            position: param_pos,
            message: format!("expected a non-negative integer, got {param:?}"),
        })
    };
    match kind {
        "ghz" => Ok(StateSpec::Ghz(number()?)),
        "ue" => {
            let n = number()?;
            if n == 0 || n % 2 == 1 {
                return Err(Error::Argument(format!(
                    "ue needs a positive even qubit count, got {n}"
                )));
            }
            Ok(StateSpec::UniformEntangled(n))
        }
        "bellpairs" => Ok(StateSpec::BellPairs(number()?)),
        "ghzblocks" => Ok(StateSpec::GhzBlocks(number()?)),
        _ => Err(Error::Parse {
            position: 0,
            message: format!("unknown state kind {kind:?} (expected ghz, ue, bellpairs, ghzblocks or file)"),
        }),
    }
}

/// On-disk state: big-endian basis index, qubit 0 most significant.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub n_qubits: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl From<&PureState> for StateFile {
    fn from(s: &PureState) -> Self {
        Self {
            n_qubits: s.n_qubits(),
            amplitudes: s.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl StateFile {
    pub fn into_state(self) -> Result<PureState> {
        let expected = 1usize.checked_shl(self.n_qubits as u32).unwrap_or(0);
        if self.n_qubits == 0 || self.amplitudes.len() != expected {
            return Err(Error::Schema(format!(
                "{} amplitudes for n_qubits = {}",
                self.amplitudes.len(),
                self.n_qubits
            )));
        }
        let amps = self.amplitudes.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        PureState::with_tolerance(self.n_qubits, amps, FILE_NORM_TOL)
    }
}

pub fn load_state_file(path: &Path) -> Result<PureState> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::from(e).context(format!("reading {}", path.display())))?;
    let file: StateFile = serde_json::from_str(&text).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
    file.into_state()
}

pub fn dump_state_file(state: &PureState, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(&StateFile::from(state)).expect("plain data serializes");
    std::fs::write(path, text + "\n")?;
    Ok(())
}

/// Qubit indices from letters (`abd`), comma-separated indices (`0,1,3`),
/// or a mix of both as comma-separated tokens. `offset` is the position of
/// `text` in the original input, for error reporting.
fn parse_qubits(text: &str, offset: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    let mut pos = offset;
    for token in text.split(',') {
        let trimmed = token.trim();
        let lead = token.len() - token.trim_start().len();
        if trimmed.is_empty() {
            return Err(Error::Parse {
                position: pos,
                message: "empty qubit list".into(),
            });
        }
        if trimmed.bytes().all(|b| b.is_ascii_digit()) {
            out.push(trimmed.parse().map_err(|_| Error::Parse {
                position: pos + lead,
                message: format!("qubit index {trimmed:?} is too large"),
            })?);
        } else {
            for (i, ch) in trimmed.char_indices() {
                if !ch.is_ascii_lowercase() {
                    return Err(Error::Parse {
                        position: pos + lead + i,
                        message: format!("unexpected character {ch:?} in qubit list"),
                    });
                }
                out.push((ch as u8 - b'a') as usize);
            }
        }
        pos += token.len() + 1;
    }
    Ok(out)
}

fn parse_partition_at(text: &str, offset: usize, n_qubits: usize) -> Result<Partition> {
    let Some(bar) = text.find('|') else {
        return Err(Error::Parse {
            position: offset + text.len(),
            message: format!("partition {text:?} has no `|`"),
        });
    };
    if let Some(extra) = text[bar + 1..].find('|') {
        return Err(Error::Parse {
            position: offset + bar + 1 + extra,
            message: "partition has more than one `|`".into(),
        });
    }
    let alpha = parse_qubits(&text[..bar], offset)?;
    let beta = parse_qubits(&text[bar + 1..], offset + bar + 1)?;
    let part = Partition::new(alpha, beta)?;
    if let Some(&q) = part.alpha().iter().chain(part.beta()).find(|&&q| q >= n_qubits) {
        return Err(Error::Index { index: q, n_qubits });
    }
    part.check_covers(n_qubits)?;
    Ok(part)
}

/// One partition such as `ab|cd` or `0,2|1,3`.
pub fn parse_partition(text: &str, n_qubits: usize) -> Result<Partition> {
    parse_partition_at(text, 0, n_qubits)
}

/// Comma- or semicolon-separated partitions, e.g. `ab|cd,ac|bd` or
/// `0,2|1,3,0,1|2,3`. Comma-separated pieces are grouped until they form a
/// partition covering every qubit.
pub fn parse_partition_list(text: &str, n_qubits: usize) -> Result<Vec<Partition>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for chunk in text.split(';') {
        let mut start = 0;
        let mut seen_bar = false;
        let mut count = 0;
        let mut pos = 0;
        for piece in chunk.split(',') {
            let end = pos + piece.len();
            if piece.contains('|') {
                seen_bar = true;
            }
            count += parse_qubits(&piece.replace('|', ","), offset + pos)
                .map(|q| q.len())
                .unwrap_or(0);
            if seen_bar && count >= n_qubits {
                out.push(parse_partition_at(chunk[start..end].trim(), offset + start, n_qubits)?);
                start = end + 1;
                seen_bar = false;
                count = 0;
            }
            pos = end + 1;
        }
        if start < chunk.len() {
            let rest = &chunk[start..];
            if !rest.trim().is_empty() {
                // Incomplete trailing partition; parse it for a precise error.
                out.push(parse_partition_at(rest.trim(), offset + start, n_qubits)?);
            }
        }
        offset += chunk.len() + 1;
    }
    if out.is_empty() {
        return Err(Error::Parse {
            position: 0,
            message: "no partition given".into(),
        });
    }
    Ok(out)
}

/// A subset such as `ab` or `0,1`.
pub fn parse_subset(text: &str, n_qubits: usize) -> Result<Vec<usize>> {
    let mut qs = parse_qubits(text, 0)?;
    if let Some(&q) = qs.iter().find(|&&q| q >= n_qubits) {
        return Err(Error::Index { index: q, n_qubits });
    }
    qs.sort_unstable();
    if qs.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Argument(format!("qubit listed twice in {text:?}")));
    }
    Ok(qs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    #[default]
    Nats,
    Bits,
}

impl Units {
    pub fn convert(self, nats: f64) -> f64 {
        match self {
            Units::Nats => nats,
            Units::Bits => nats / LN_2,
        }
    }
}

impl FromStr for Units {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nats" => Ok(Units::Nats),
            "bits" => Ok(Units::Bits),
            other => Err(Error::Parse {
                position: 0,
                message: format!("unknown units {other:?} (expected nats or bits)"),
            }),
        }
    }
}

impl fmt::Display for Units {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Units::Nats => "nats",
            Units::Bits => "bits",
        })
    }
}

/// Rounds to 12 significant digits on output.
fn sig12<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig12(*x))
}

fn sig12_vec<S: Serializer>(xs: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| round_sig12(*x)))
}

pub fn round_sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

#[derive(Debug, Clone, Serialize)]
struct BoundsJson {
    #[serde(serialize_with = "sig12")]
    classical_upper: f64,
    #[serde(serialize_with = "sig12")]
    quantum_upper: f64,
    #[serde(serialize_with = "sig12")]
    gap_bound: f64,
    araki_lieb_ok: bool,
}

/// Correlation split for one partition.
#[derive(Debug, Clone, Serialize)]
pub struct PartitionEntry {
    pub partition: String,
    #[serde(serialize_with = "sig12")]
    pub internal_alpha: f64,
    #[serde(serialize_with = "sig12")]
    pub internal_beta: f64,
    #[serde(serialize_with = "sig12")]
    pub external: f64,
    pub region_external: Region,
    pub region_alpha: Region,
    pub region_beta: Region,
    pub product_across: bool,
    #[serde(skip)]
    pub araki_lieb_ok: bool,
}

/// Everything `analyze` and `sweep` print. Stored values are nats.
#[derive(Debug, Clone, Serialize)]
pub struct CorrelationReport {
    pub state: String,
    pub n_qubits: usize,
    pub units: Units,
    #[serde(serialize_with = "sig12")]
    pub total_nats: f64,
    #[serde(serialize_with = "sig12")]
    pub max_total_nats: f64,
    #[serde(serialize_with = "sig12_vec")]
    pub single_qubit_entropies: Vec<f64>,
    #[serde(serialize_with = "bounds_json")]
    pub bounds: BoundsReport,
    pub entries: Vec<PartitionEntry>,
}

fn bounds_json<S: Serializer>(b: &BoundsReport, s: S) -> std::result::Result<S::Ok, S::Error> {
    BoundsJson {
        classical_upper: b.classical_upper,
        quantum_upper: b.quantum_upper,
        gap_bound: b.gap_bound,
        araki_lieb_ok: b.araki_lieb_ok,
    }
    .serialize(s)
}

/// Which partitions a report covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionSelection {
    All,
    SideSize(usize),
    List(Vec<Partition>),
}

impl CorrelationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// Human-readable table with values in `self.units`.
    pub fn to_table(&self) -> String {
        let u = self.units;
        let mut out = String::new();
        let _ = writeln!(out, "state      {}  ({} qubits)", self.state, self.n_qubits);
        let _ = writeln!(
            out,
            "total      {:.9} {u}  (max {:.9})",
            u.convert(self.total_nats),
            u.convert(self.max_total_nats)
        );
        let singles: Vec<String> = self
            .single_qubit_entropies
            .iter()
            .map(|s| format!("{:.6}", u.convert(*s)))
            .collect();
        let _ = writeln!(out, "S_k        [{}]", singles.join(", "));
        let _ = writeln!(
            out,
            "bounds     classical <= {:.9}  quantum <= {:.9}  gap <= {:.9}  araki-lieb {}",
            u.convert(self.bounds.classical_upper),
            u.convert(self.bounds.quantum_upper),
            u.convert(self.bounds.gap_bound),
            if self.bounds.araki_lieb_ok { "ok" } else { "VIOLATED" }
        );
        let width = self
            .entries
            .iter()
            .map(|e| e.partition.len())
            .max()
            .unwrap_or(0)
            .max("partition".len());
        let _ = writeln!(
            out,
            "\n{:<width$}  {:>14}  {:>14}  {:>14}  {:<12}  {:<12}  {:<12}  product",
            "partition", "I_int(alpha)", "I_int(beta)", "I_ext", "region(a)", "region(b)", "region(ext)"
        );
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{:<width$}  {:>14.9}  {:>14.9}  {:>14.9}  {:<12}  {:<12}  {:<12}  {}",
                e.partition,
                u.convert(e.internal_alpha),
                u.convert(e.internal_beta),
                u.convert(e.external),
                e.region_alpha.to_string(),
                e.region_beta.to_string(),
                e.region_external.to_string(),
                if e.product_across { "yes" } else { "no" }
            );
        }
        out
    }
}

/// Builds a report for `state` over the selected partitions. Partitions are
/// evaluated in parallel; entries keep the selection order.
pub fn report_for_state(
    label: &str,
    state: &PureState,
    selection: &PartitionSelection,
    units: Units,
) -> Result<CorrelationReport> {
    let n = state.n_qubits();
    let partitions = match selection {
        PartitionSelection::All => enumerate_bipartitions(n, None)?,
        PartitionSelection::SideSize(k) => enumerate_bipartitions(n, Some(*k))?,
        PartitionSelection::List(list) => {
            for p in list {
                p.check_covers(n)?;
            }
            list.clone()
        }
    };
    let analysis = CorrelationAnalysis::for_pure_state(state)?;
    let entries = partitions
        .par_iter()
        .map(|part| -> Result<PartitionEntry> {
            let d = analysis.decompose(part)?;
            let (s_alpha, s_beta) = analysis.side_entropies(part)?;
            let s = analysis.total_entropy();
            let araki_lieb_ok = s - (s_alpha - s_beta).abs() >= -BOUND_TOL && s_alpha + s_beta - s >= -BOUND_TOL;
            let (na, nb) = (part.alpha().len(), part.beta().len());
            Ok(PartitionEntry {
                partition: part.to_string(),
                internal_alpha: d.internal_alpha,
                internal_beta: d.internal_beta,
                external: d.external,
                region_external: classify_region(d.external, &[na as f64 * LN_2, nb as f64 * LN_2])?,
                region_alpha: classify_region(d.internal_alpha, &vec![LN_2; na])?,
                region_beta: classify_region(d.internal_beta, &vec![LN_2; nb])?,
                product_across: analysis.is_product_across(part, PRODUCT_TOL)?,
                araki_lieb_ok,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut bounds = correlation_bounds(analysis.single_qubit_entropies())?;
    bounds.araki_lieb_ok = entries.iter().all(|e| e.araki_lieb_ok);
    Ok(CorrelationReport {
        state: label.to_string(),
        n_qubits: n,
        units,
        total_nats: analysis.total(),
        max_total_nats: correlation::max_total_correlation(n),
        single_qubit_entropies: analysis.single_qubit_entropies().to_vec(),
        bounds,
        entries,
    })
}

pub fn analyze(
    spec: &StateSpec,
    selection: &PartitionSelection,
    units: Units,
    limits: &StateLimits,
) -> Result<CorrelationReport> {
    let state = spec.build(limits)?;
    report_for_state(&spec.to_string(), &state, selection, units)
}

/// Every canonical bipartition (or those of one side size).
pub fn sweep(spec: &StateSpec, side_size: Option<usize>, limits: &StateLimits) -> Result<CorrelationReport> {
    let selection = side_size.map_or(PartitionSelection::All, PartitionSelection::SideSize);
    analyze(spec, &selection, Units::Nats, limits)
}

/// Entropy of one subset of a state.
pub fn subset_entropy(spec: &StateSpec, subset: &str, limits: &StateLimits) -> Result<(Vec<usize>, f64)> {
    let state = spec.build(limits)?;
    let qs = parse_subset(subset, state.n_qubits())?;
    let s = correlation::subset_entropy(&to_density(&state), &qs)?;
    Ok((qs, s))
}

#[derive(Debug, Clone, Serialize)]
pub struct PurificationReport {
    pub state: String,
    pub subset: Vec<usize>,
    pub rank: usize,
    pub ancilla_qubits: usize,
    #[serde(serialize_with = "sig12")]
    pub subset_entropy: f64,
    #[serde(serialize_with = "sig12")]
    pub subset_total_correlation: f64,
    pub subset_region: Region,
    #[serde(serialize_with = "sig12")]
    pub residual: f64,
    pub maximally_correlated: bool,
    pub purified: StateFile,
}

impl PurificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "state                {}", self.state);
        let _ = writeln!(out, "subset               {:?}", self.subset);
        let _ = writeln!(out, "rank                 {}", self.rank);
        let _ = writeln!(out, "ancilla qubits       {}", self.ancilla_qubits);
        let _ = writeln!(out, "S(subset)            {:.9} nats", self.subset_entropy);
        let _ = writeln!(
            out,
            "I(subset)            {:.9} nats ({})",
            self.subset_total_correlation, self.subset_region
        );
        let _ = writeln!(out, "residual             {:.3e}", self.residual);
        let _ = writeln!(out, "maximally correlated {}", self.maximally_correlated);
        out
    }
}

/// Reduces a state to `subset` and purifies the reduction.
pub fn purify_subset(spec: &StateSpec, subset: &str, limits: &StateLimits) -> Result<PurificationReport> {
    let state = spec.build(limits)?;
    let qs = parse_subset(subset, state.n_qubits())?;
    let reduced = to_density(&state).reduce(&qs)?;
    let r = purify(&reduced)?;
    let internal = correlation::total_correlation(&reduced);
    Ok(PurificationReport {
        state: spec.to_string(),
        rank: spectral_rank(&reduced, RANK_THRESHOLD),
        ancilla_qubits: r.ancilla_qubits,
        subset_entropy: correlation::von_neumann_entropy(&reduced),
        subset_total_correlation: internal,
        subset_region: classify_region(internal, &vec![LN_2; qs.len()])?,
        residual: r.residual,
        maximally_correlated: is_maximally_correlated_purification(&r),
        purified: StateFile::from(&r.purified),
        subset: qs,
    })
}
