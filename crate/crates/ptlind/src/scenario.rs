//! Scenario configs, figure presets, table emission, and the runtime
//! self-check suite.
//!
//! A [`Scenario`] is the validated form of a TOML config file: a system (a
//! four-parameter Hamiltonian with a dissipator, or one of the closed
//! [`FormulaFamily`] presets), a set of probed bases, a time grid and output
//! options. Running one emits byte-deterministic CSV or JSON tables — one
//! file per basis, with `compare` mode adding closed-form (`cf_*`) and
//! difference (`diff_*`) columns.
//!
//! [`FigureId`] enumerates ten bundled presets (`fig1`…`fig10`), each pinning
//! one parameter set and basis selection; `fig1` additionally emits the
//! series-approximation curves next to the exact ones.

use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::Matrix2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bloch::{DensityKind, DensityMatrix, GammaVector};
use crate::evolution::{evolve_normalized, evolve_normalized_linear_only, integrate_oracle, Generator};
use crate::grid::TimeGrid;
use crate::hamiltonian::PTHamiltonian;
use crate::lindblad::{DissipatorCoefficients, LindbladOperator};
use crate::probabilities::{
    basis_pair, compare, transition_quad, FormulaFamily, ProbBasis,
};
use crate::states::initial_density;
use crate::{C64, Error, Result};

use std::f64::consts::FRAC_PI_3;

// Shared demonstration parameters: r = 0.1, s = 0.2, φ = π/3, rate = 0.1,
// ω = 0.2, θ = π/3.
const DEMO_R: f64 = 0.1;
const DEMO_S: f64 = 0.2;
const DEMO_PHASE: f64 = FRAC_PI_3;
const DEMO_RATE: f64 = 0.1;
const DEMO_OMEGA: f64 = 0.2;
const DEMO_THETA: f64 = FRAC_PI_3;

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

/// What a scenario evaluates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SystemSpec {
    /// Exact propagation of an explicit system.
    Numeric {
        h: PTHamiltonian,
        coeffs: DissipatorCoefficients,
    },
    /// A closed formula family (and, in `compare` mode, its numeric
    /// companion).
    Family(FormulaFamily),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Simulate,
    Compare,
    Figure(FigureId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(config_err(format!("unknown format `{other}` (csv|json)"))),
        }
    }
}

/// The ten bundled demonstration presets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
    Fig10,
}

impl FigureId {
    pub fn all() -> [FigureId; 10] {
        use FigureId::*;
        [Fig1, Fig2, Fig3, Fig4, Fig5, Fig6, Fig7, Fig8, Fig9, Fig10]
    }

    pub fn parse(token: &str) -> Result<Self> {
        let all = Self::all();
        all.iter()
            .find(|id| id.token() == token)
            .copied()
            .ok_or_else(|| config_err(format!("unknown figure id `{token}` (fig1..fig10)")))
    }

    pub fn token(&self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
            FigureId::Fig7 => "fig7",
            FigureId::Fig8 => "fig8",
            FigureId::Fig9 => "fig9",
            FigureId::Fig10 => "fig10",
        }
    }

    /// The family whose curves the preset draws, the probed bases, and
    /// whether the series approximation is emitted alongside.
    fn preset(&self) -> (FormulaFamily, Vec<ProbBasis>, bool) {
        let series = FormulaFamily::GeneralA0Series {
            r: DEMO_R,
            s: DEMO_S,
            diag_phase: DEMO_PHASE,
            rate: DEMO_RATE,
        };
        match self {
            FigureId::Fig1 => (series, vec![ProbBasis::Mass, ProbBasis::Flavor], true),
            FigureId::Fig2 => (
                FormulaFamily::NeutrinoA0 { omega: DEMO_OMEGA, rate: DEMO_RATE, theta: DEMO_THETA },
                vec![ProbBasis::Mass, ProbBasis::Flavor],
                false,
            ),
            FigureId::Fig3 => (
                FormulaFamily::NoLindblad { r: DEMO_R, s: DEMO_S, diag_phase: DEMO_PHASE },
                vec![ProbBasis::Flavor],
                false,
            ),
            FigureId::Fig4 => (
                FormulaFamily::S0A0 { rate: DEMO_RATE },
                vec![ProbBasis::Mass, ProbBasis::Flavor],
                false,
            ),
            FigureId::Fig5 => (
                FormulaFamily::R0A0 { s: DEMO_S, rate: DEMO_RATE },
                vec![ProbBasis::Flavor],
                false,
            ),
            FigureId::Fig6 => (series, vec![ProbBasis::Flavor], false),
            FigureId::Fig7 => (
                FormulaFamily::GeneralB0Exact {
                    r: DEMO_R,
                    s: DEMO_S,
                    diag_phase: DEMO_PHASE,
                    rate: DEMO_RATE,
                },
                vec![ProbBasis::Mass, ProbBasis::Flavor],
                false,
            ),
            FigureId::Fig8 => (
                FormulaFamily::S0B0 { rate: DEMO_RATE },
                vec![ProbBasis::Mass, ProbBasis::Flavor],
                false,
            ),
            FigureId::Fig9 => (
                FormulaFamily::NeutrinoB0 { omega: DEMO_OMEGA, rate: DEMO_RATE, theta: DEMO_THETA },
                vec![ProbBasis::Mass, ProbBasis::Flavor],
                false,
            ),
            FigureId::Fig10 => (
                FormulaFamily::R0B0 { s: DEMO_S, rate: DEMO_RATE },
                vec![ProbBasis::Mass, ProbBasis::Flavor],
                false,
            ),
        }
    }
}

/// A rectangular numeric table; the unit all outputs are rendered from.
#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    /// 17 significant digits, '.' decimal separator, LF line endings —
    /// byte-identical across runs for identical inputs.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("finite floats serialize");
        s.push('\n');
        s
    }
}

fn basis_token(basis: ProbBasis) -> &'static str {
    match basis {
        ProbBasis::Mass => "mass",
        ProbBasis::Flavor => "flavor",
        ProbBasis::Rotated(_) => "rotated",
    }
}

/// A validated run description.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub mode: Mode,
    pub system: SystemSpec,
    pub bases: Vec<ProbBasis>,
    pub grid: TimeGrid,
    pub format: OutputFormat,
    pub out_dir: PathBuf,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawShorthand {
    case: String,
    rate: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOperator {
    r: f64,
    s: f64,
    varphi: Option<f64>,
    phi: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    mode: Option<String>,
    figure: Option<String>,
    r: Option<f64>,
    s: Option<f64>,
    varphi: Option<f64>,
    phi: Option<f64>,
    omega: Option<f64>,
    theta: Option<f64>,
    family: Option<String>,
    bases: Option<Vec<String>>,
    t_start: Option<f64>,
    t_end: Option<f64>,
    points: Option<usize>,
    format: Option<String>,
    out: Option<String>,
    dissipator: Option<RawShorthand>,
    lindblad: Option<Vec<RawOperator>>,
}

impl RawConfig {
    fn need(v: Option<f64>, key: &str, ctx: &str) -> Result<f64> {
        v.ok_or_else(|| config_err(format!("{ctx} needs key `{key}`")))
    }

    fn shorthand_rate(&self, case: &str, name: &str) -> Result<f64> {
        let d = self
            .dissipator
            .as_ref()
            .ok_or_else(|| config_err(format!("family `{name}` needs a [dissipator] table")))?;
        if !d.case.eq_ignore_ascii_case(case) {
            return Err(config_err(format!(
                "family `{name}` pairs with dissipator case {case}, config says {}",
                d.case
            )));
        }
        Ok(d.rate)
    }

    fn parse_family(&self) -> Result<FormulaFamily> {
        let name = self
            .family
            .as_deref()
            .ok_or_else(|| config_err("compare mode needs key `family`"))?;
        let ctx = format!("family `{name}`");
        let need = |v: Option<f64>, key: &str| Self::need(v, key, &ctx);
        let family = match name {
            "neutrino_a0" => FormulaFamily::NeutrinoA0 {
                omega: need(self.omega, "omega")?,
                rate: self.shorthand_rate("A0", name)?,
                theta: need(self.theta, "theta")?,
            },
            "neutrino_b0" => FormulaFamily::NeutrinoB0 {
                omega: need(self.omega, "omega")?,
                rate: self.shorthand_rate("B0", name)?,
                theta: need(self.theta, "theta")?,
            },
            "no_lindblad" => {
                if self.dissipator.is_some() || self.lindblad.is_some() {
                    return Err(config_err("family `no_lindblad` takes no dissipator"));
                }
                FormulaFamily::NoLindblad {
                    r: need(self.r, "r")?,
                    s: need(self.s, "s")?,
                    diag_phase: need(self.varphi, "varphi")?,
                }
            }
            "s0_a0" => FormulaFamily::S0A0 { rate: self.shorthand_rate("A0", name)? },
            "s0_b0" => FormulaFamily::S0B0 { rate: self.shorthand_rate("B0", name)? },
            "s0_a0_rotated" => FormulaFamily::S0A0Rotated {
                r: need(self.r, "r")?,
                diag_phase: need(self.varphi, "varphi")?,
                rate: self.shorthand_rate("A0", name)?,
                theta: need(self.theta, "theta")?,
            },
            "s0_b0_rotated" => FormulaFamily::S0B0Rotated {
                r: need(self.r, "r")?,
                diag_phase: need(self.varphi, "varphi")?,
                rate: self.shorthand_rate("B0", name)?,
                theta: need(self.theta, "theta")?,
            },
            "r0_a0" => FormulaFamily::R0A0 {
                s: need(self.s, "s")?,
                rate: self.shorthand_rate("A0", name)?,
            },
            "r0_b0" => FormulaFamily::R0B0 {
                s: need(self.s, "s")?,
                rate: self.shorthand_rate("B0", name)?,
            },
            "general_b0_exact" => FormulaFamily::GeneralB0Exact {
                r: need(self.r, "r")?,
                s: need(self.s, "s")?,
                diag_phase: need(self.varphi, "varphi")?,
                rate: self.shorthand_rate("B0", name)?,
            },
            "general_a0_series" => FormulaFamily::GeneralA0Series {
                r: need(self.r, "r")?,
                s: need(self.s, "s")?,
                diag_phase: need(self.varphi, "varphi")?,
                rate: self.shorthand_rate("A0", name)?,
            },
            other => return Err(config_err(format!("unknown family `{other}`"))),
        };
        family.validate()?;
        Ok(family)
    }

    fn parse_coefficients(&self) -> Result<DissipatorCoefficients> {
        match (&self.dissipator, &self.lindblad) {
            (Some(_), Some(_)) => Err(config_err(
                "give either a [dissipator] shorthand or [[lindblad]] operators, not both",
            )),
            (Some(d), None) => match d.case.as_str() {
                c if c.eq_ignore_ascii_case("A0") => DissipatorCoefficients::case_a_zero(d.rate),
                c if c.eq_ignore_ascii_case("B0") => DissipatorCoefficients::case_b_zero(d.rate),
                other => Err(config_err(format!("unknown dissipator case `{other}` (A0|B0)"))),
            },
            (None, Some(list)) => {
                let mut ops = Vec::with_capacity(list.len());
                for raw in list {
                    if !(raw.r.is_finite() && raw.s.is_finite()) || raw.r < 0.0 || raw.s < 0.0 {
                        return Err(Error::OutOfDomain(format!(
                            "operator fields r, s must be finite and >= 0, got ({}, {})",
                            raw.r, raw.s
                        )));
                    }
                    ops.push(LindbladOperator::new(
                        raw.r,
                        raw.s,
                        raw.varphi.unwrap_or(0.0),
                        raw.phi.unwrap_or(0.0),
                    ));
                }
                DissipatorCoefficients::from_operators(&ops)
            }
            (None, None) => Ok(DissipatorCoefficients::zero()),
        }
    }

    fn parse_bases(&self, default: &[ProbBasis]) -> Result<Vec<ProbBasis>> {
        let Some(list) = &self.bases else {
            return Ok(default.to_vec());
        };
        if list.is_empty() {
            return Err(config_err("`bases` must name at least one basis"));
        }
        list.iter()
            .map(|name| match name.as_str() {
                "mass" => Ok(ProbBasis::Mass),
                "flavor" => Ok(ProbBasis::Flavor),
                "rotated" => {
                    let theta = Self::need(self.theta, "theta", "basis `rotated`")?;
                    Ok(ProbBasis::Rotated(theta))
                }
                other => Err(config_err(format!("unknown basis `{other}` (mass|flavor|rotated)"))),
            })
            .collect()
    }
}

impl Scenario {
    /// Parses and validates a TOML config.
    pub fn from_toml_str(text: &str) -> Result<Scenario> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| config_err(format!("config parse error: {e}")))?;

        let grid = TimeGrid::new(
            raw.t_start.unwrap_or(0.0),
            raw.t_end.unwrap_or(50.0),
            raw.points.unwrap_or(501),
        )?;
        let format = match raw.format.as_deref() {
            Some(s) => OutputFormat::parse(s)?,
            None => OutputFormat::Csv,
        };
        let out_dir = PathBuf::from(raw.out.clone().unwrap_or_else(|| ".".into()));

        let mode_token = raw.mode.as_deref().unwrap_or("simulate");
        match mode_token {
            "figure" => {
                let token = raw
                    .figure
                    .as_deref()
                    .ok_or_else(|| config_err("figure mode needs key `figure`"))?;
                let id = FigureId::parse(token)?;
                let mut scenario = Scenario::figure(id);
                scenario.grid = grid;
                scenario.format = format;
                scenario.out_dir = out_dir;
                Ok(scenario)
            }
            "compare" => {
                let family = raw.parse_family()?;
                let bases = raw.parse_bases(&family.bases())?;
                Ok(Scenario {
                    mode: Mode::Compare,
                    system: SystemSpec::Family(family),
                    bases,
                    grid,
                    format,
                    out_dir,
                })
            }
            "simulate" => {
                let system = if raw.family.is_some() {
                    SystemSpec::Family(raw.parse_family()?)
                } else {
                    let r = RawConfig::need(raw.r, "r", "simulate mode")?;
                    let s = RawConfig::need(raw.s, "s", "simulate mode")?;
                    let h = PTHamiltonian::new(
                        r,
                        s,
                        raw.varphi.unwrap_or(0.0),
                        raw.phi.unwrap_or(0.0),
                    )?;
                    SystemSpec::Numeric { h, coeffs: raw.parse_coefficients()? }
                };
                let default = match system {
                    SystemSpec::Family(f) => f.bases(),
                    SystemSpec::Numeric { .. } => vec![ProbBasis::Mass, ProbBasis::Flavor],
                };
                let bases = raw.parse_bases(&default)?;
                Ok(Scenario { mode: Mode::Simulate, system, bases, grid, format, out_dir })
            }
            other => Err(config_err(format!("unknown mode `{other}` (simulate|compare|figure)"))),
        }
    }

    /// Reads and parses a config file.
    pub fn from_file(path: &Path) -> Result<Scenario> {
        let text = fs::read_to_string(path)?;
        Scenario::from_toml_str(&text)
    }

    /// The preset scenario behind a figure id: t ∈ [0, 50], 501 points, CSV.
    pub fn figure(id: FigureId) -> Scenario {
        let (family, bases, _) = id.preset();
        Scenario {
            mode: Mode::Figure(id),
            system: SystemSpec::Family(family),
            bases,
            grid: TimeGrid::new(0.0, 50.0, 501).expect("static grid"),
            format: OutputFormat::Csv,
            out_dir: PathBuf::from("."),
        }
    }

    /// Re-targets an already-parsed scenario at a different mode, keeping its
    /// grid and output settings. Compare requires the system to be a closed
    /// form; figure swaps in the preset system and bases.
    pub fn with_mode(mut self, mode: Mode) -> Result<Scenario> {
        match mode {
            Mode::Simulate => {}
            Mode::Compare => {
                if !matches!(self.system, SystemSpec::Family(_)) {
                    return Err(config_err(
                        "compare mode needs a closed-form `family`",
                    ));
                }
            }
            Mode::Figure(id) => {
                let (family, bases, _) = id.preset();
                self.system = SystemSpec::Family(family);
                self.bases = bases;
            }
        }
        self.mode = mode;
        Ok(self)
    }

    pub fn with_out_dir(mut self, dir: PathBuf) -> Scenario {
        self.out_dir = dir;
        self
    }

    pub fn with_format(mut self, format: OutputFormat) -> Scenario {
        self.format = format;
        self
    }

    pub fn with_points(mut self, points: usize) -> Result<Scenario> {
        self.grid = TimeGrid::new(self.grid.start(), self.grid.end(), points)?;
        Ok(self)
    }

    fn numeric_side(&self, basis: ProbBasis) -> Result<(Generator, [DensityMatrix; 2])> {
        match &self.system {
            SystemSpec::Numeric { h, coeffs } => {
                Ok((Generator::new(h, coeffs), basis_pair(h, basis)?))
            }
            SystemSpec::Family(family) => family.numeric_setup(basis),
        }
    }

    fn numeric_table(&self, basis: ProbBasis) -> Result<Table> {
        let (gen, pair) = self.numeric_side(basis)?;
        let times = self.grid.times();
        let quads = crate::probabilities::numeric_curve(&gen, basis, &pair, &times)?;
        let labels = basis.column_labels();
        let mut columns = vec!["t".to_string()];
        columns.extend(labels.iter().map(|l| l.to_string()));
        let rows = times
            .iter()
            .zip(&quads)
            .map(|(&t, q)| {
                let mut row = vec![t];
                row.extend_from_slice(&q.p);
                row
            })
            .collect();
        Ok(Table { columns, rows })
    }

    fn closed_table(&self, family: &FormulaFamily, basis: ProbBasis) -> Result<Table> {
        let times = self.grid.times();
        let quads = crate::probabilities::closed_curve(family, basis, &times)?;
        let labels = basis.column_labels();
        let mut columns = vec!["t".to_string()];
        columns.extend(labels.iter().map(|l| l.to_string()));
        let rows = times
            .iter()
            .zip(&quads)
            .map(|(&t, q)| {
                let mut row = vec![t];
                row.extend_from_slice(&q.p);
                row
            })
            .collect();
        Ok(Table { columns, rows })
    }

    fn compare_table(&self, family: &FormulaFamily, basis: ProbBasis) -> Result<Table> {
        let times = self.grid.times();
        let rows = compare(family, basis, &times)?;
        let labels = basis.column_labels();
        let mut columns = vec!["t".to_string()];
        columns.extend(labels.iter().map(|l| l.to_string()));
        columns.extend(labels.iter().map(|l| format!("cf_{l}")));
        columns.extend(labels.iter().map(|l| format!("diff_{l}")));
        let table_rows = rows
            .iter()
            .map(|row| {
                let mut out = vec![row.t];
                out.extend_from_slice(&row.numeric.p);
                out.extend_from_slice(&row.closed_form.p);
                out.extend_from_slice(&row.diffs());
                out
            })
            .collect();
        Ok(Table { columns, rows: table_rows })
    }

    /// Evaluates the scenario into named tables (no I/O).
    pub fn tables(&self) -> Result<Vec<(String, Table)>> {
        match self.mode {
            Mode::Simulate => self
                .bases
                .iter()
                .map(|&basis| {
                    Ok((format!("simulate_{}", basis_token(basis)), self.numeric_table(basis)?))
                })
                .collect(),
            Mode::Compare => {
                let SystemSpec::Family(family) = self.system else {
                    return Err(config_err("compare mode needs a formula family"));
                };
                self.bases
                    .iter()
                    .map(|&basis| {
                        Ok((
                            format!("compare_{}", basis_token(basis)),
                            self.compare_table(&family, basis)?,
                        ))
                    })
                    .collect()
            }
            Mode::Figure(id) => {
                let (family, bases, with_series) = id.preset();
                let mut out = Vec::new();
                for &basis in &bases {
                    out.push((
                        format!("{}_{}", id.token(), basis_token(basis)),
                        self.numeric_table(basis)?,
                    ));
                }
                if with_series {
                    for &basis in &bases {
                        out.push((
                            format!("{}_{}_series", id.token(), basis_token(basis)),
                            self.closed_table(&family, basis)?,
                        ));
                    }
                }
                Ok(out)
            }
        }
    }

    /// Evaluates and writes all artifact files, returning their paths.
    /// Figure presets always emit CSV; other modes honor `format`.
    pub fn run(&self) -> Result<Vec<PathBuf>> {
        let tables = self.tables()?;
        fs::create_dir_all(&self.out_dir)?;
        let format = match self.mode {
            Mode::Figure(_) => OutputFormat::Csv,
            _ => self.format,
        };
        let mut paths = Vec::with_capacity(tables.len());
        for (stem, table) in tables {
            let (ext, body) = match format {
                OutputFormat::Csv => ("csv", table.to_csv()),
                OutputFormat::Json => ("json", table.to_json()),
            };
            let path = self.out_dir.join(format!("{stem}.{ext}"));
            fs::write(&path, body)?;
            paths.push(path);
        }
        Ok(paths)
    }
}

/// One line of the self-check report. `pass` compares the measured
/// statistic against the threshold in the direction the check demands —
/// residuals must stay below it, required effects must exceed it.
#[derive(Clone, Copy, Debug)]
pub struct Check {
    pub name: &'static str,
    pub statistic: f64,
    pub threshold: f64,
    /// false: pass iff statistic ≤ threshold; true: pass iff statistic > threshold.
    pub must_exceed: bool,
}

impl Check {
    pub fn pass(&self) -> bool {
        if self.must_exceed {
            self.statistic > self.threshold
        } else {
            self.statistic <= self.threshold
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(Check::pass)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let verdict = if c.pass() { "PASS" } else { "FAIL" };
            let rel = if c.must_exceed { ">" } else { "<=" };
            out.push_str(&format!(
                "{verdict} {name:<34} {stat:>12.3e} {rel} {thr:.1e}\n",
                name = c.name,
                stat = c.statistic,
                thr = c.threshold,
            ));
        }
        let failed = self.checks.iter().filter(|c| !c.pass()).count();
        if failed == 0 {
            out.push_str(&format!("all {} checks passed\n", self.checks.len()));
        } else {
            out.push_str(&format!("{failed} of {} checks FAILED\n", self.checks.len()));
        }
        out
    }
}

fn rand_unit(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen::<f64>()
}

fn rand_sym(rng: &mut ChaCha8Rng) -> f64 {
    2.0 * rng.gen::<f64>() - 1.0
}

fn rand_c64(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rand_sym(rng), rand_sym(rng))
}

// Rejection-samples a system safely inside the unbroken region
// (r² sin²φ < 0.81 s²).
fn random_pt_system(rng: &mut ChaCha8Rng) -> PTHamiltonian {
    loop {
        let s = 0.1 + rand_unit(rng);
        let phase = std::f64::consts::PI * rand_sym(rng);
        let r = 2.0 * s * rand_unit(rng);
        if r * r * phase.sin().powi(2) < 0.81 * s * s {
            return PTHamiltonian::new(r, s, phase, 0.0).expect("sampled inside the domain");
        }
    }
}

fn random_operators(rng: &mut ChaCha8Rng) -> Vec<LindbladOperator> {
    let n = rng.gen_range(1..=3);
    (0..n)
        .map(|_| {
            LindbladOperator::new(
                rand_unit(rng),
                rand_unit(rng),
                std::f64::consts::PI * rand_sym(rng),
                std::f64::consts::PI * rand_sym(rng),
            )
        })
        .collect()
}

fn random_gamma(rng: &mut ChaCha8Rng) -> GammaVector {
    GammaVector::new(rand_c64(rng), rand_c64(rng), rand_c64(rng), rand_c64(rng))
}

// Σ_j [L_j ρ L_j − ½(L_j²ρ + ρL_j²)]: the matrix-level dissipator the Bloch
// coefficients must reproduce.
fn brute_force_dissipator(ops: &[LindbladOperator], rho: &Matrix2<C64>) -> Matrix2<C64> {
    let half = C64::new(0.5, 0.0);
    let mut acc = Matrix2::zeros();
    for op in ops {
        let l = op.matrix();
        let l2 = l * l;
        acc += l * rho * l - (l2 * rho + rho * l2) * half;
    }
    acc
}

/// Runs the full invariant suite: spectral and metric identities, dissipator
/// algebra, propagator exactness, closed-form agreement, probability
/// conservation and limits, and the nonlinear trace guarantee. Deterministic
/// (seeded) sampling.
pub fn validation_report() -> ValidationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let mut checks = Vec::new();

    // -- spectral + metric identities over random unbroken systems --
    let mut eigen_res = 0.0_f64;
    let mut metric_res = 0.0_f64;
    let mut hermitize_res = 0.0_f64;
    let mut pt_res = 0.0_f64;
    for _ in 0..60 {
        let h = random_pt_system(&mut rng);
        let m = h.matrix();
        let spec = h.eigenvalues();
        let (vp, vm) = h.eigenvectors().expect("diagonal phase is zero");
        eigen_res = eigen_res.max((m * vp - vp * spec.plus).norm());
        eigen_res = eigen_res.max((m * vm - vm * spec.minus).norm());
        let eta = h.metric().expect("diagonal phase is zero");
        metric_res = metric_res.max((eta.matrix * m * eta.inverse - m.adjoint()).norm());
        let g = h.similarity_transform().expect("diagonal phase is zero");
        let hermitized = g.matrix * m * g.inverse;
        hermitize_res = hermitize_res.max((hermitized - hermitized.adjoint()).norm());
        pt_res = pt_res.max(h.pt_commutator_check());
    }
    checks.push(Check { name: "eigen_equation", statistic: eigen_res, threshold: 1e-12, must_exceed: false });
    checks.push(Check { name: "metric_intertwines_adjoint", statistic: metric_res, threshold: 1e-12, must_exceed: false });
    checks.push(Check { name: "similarity_hermitizes", statistic: hermitize_res, threshold: 1e-12, must_exceed: false });
    checks.push(Check { name: "pt_commutator", statistic: pt_res, threshold: 1e-12, must_exceed: false });

    // -- dissipator algebra vs brute force --
    let mut diss_res = 0.0_f64;
    for _ in 0..200 {
        let ops = random_operators(&mut rng);
        let coeffs = DissipatorCoefficients::from_operators(&ops).expect("<= 3 operators");
        let gamma = random_gamma(&mut rng);
        let rho = gamma.density(DensityKind::Ordinary).matrix;
        let direct = GammaVector::from_matrix(&brute_force_dissipator(&ops, &rho));
        let via_coeffs = coeffs.action(&gamma);
        diss_res = diss_res.max((direct.0 - via_coeffs.0).norm());
    }
    checks.push(Check { name: "dissipator_matches_brute_force", statistic: diss_res, threshold: 1e-12, must_exceed: false });

    // -- propagator: trace row, semigroup, independent integrator --
    let mut trace_res = 0.0_f64;
    let mut semigroup_res = 0.0_f64;
    let mut integrator_res = 0.0_f64;
    for _ in 0..50 {
        let h = random_pt_system(&mut rng);
        let ops = random_operators(&mut rng);
        let coeffs = DissipatorCoefficients::from_operators(&ops).expect("<= 3 operators");
        let gen = Generator::new(&h, &coeffs);
        let gamma = random_gamma(&mut rng);
        for t in [1.0, 5.0, 25.0] {
            let moved = gen.propagator(t).apply(&gamma);
            trace_res = trace_res.max((moved.g0() - gamma.g0()).norm());
        }
        let (a, b) = (0.8 + rand_unit(&mut rng), 0.5 + rand_unit(&mut rng));
        semigroup_res = semigroup_res.max(
            (gen.propagator(a).matrix * gen.propagator(b).matrix - gen.propagator(a + b).matrix)
                .norm(),
        );
        let t = 2.0;
        let oracle = integrate_oracle(&gen, &gamma, t, None).expect("default steps fit");
        integrator_res =
            integrator_res.max((gen.propagator(t).apply(&gamma).0 - oracle.0).norm());
    }
    checks.push(Check { name: "generator_preserves_trace", statistic: trace_res, threshold: 1e-12, must_exceed: false });
    checks.push(Check { name: "propagator_semigroup", statistic: semigroup_res, threshold: 1e-12, must_exceed: false });
    checks.push(Check { name: "propagator_matches_integrator", statistic: integrator_res, threshold: 1e-8, must_exceed: false });

    // -- degenerate spectrum routes through the series fallback --
    {
        let h = PTHamiltonian::new(0.3, 0.0, 0.0, 0.0).expect("s = 0 admitted");
        let coeffs = DissipatorCoefficients::case_a_zero(0.1).expect("rate >= 0");
        let gen = Generator::new(&h, &coeffs);
        let prop = gen.propagator(7.3);
        let gamma = GammaVector::new(
            C64::new(0.5, 0.0),
            C64::new(0.2, 0.0),
            C64::new(-0.1, 0.0),
            C64::new(0.3, 0.0),
        );
        let oracle = integrate_oracle(&gen, &gamma, 7.3, None).expect("default steps fit");
        let stat = if prop.via_series() {
            (prop.apply(&gamma).0 - oracle.0).norm()
        } else {
            f64::INFINITY
        };
        checks.push(Check { name: "degenerate_roots_fallback", statistic: stat, threshold: 1e-8, must_exceed: false });
    }

    let grid = TimeGrid::new(0.0, 50.0, 501).expect("static grid");
    let times = grid.times();
    let exact = FormulaFamily::GeneralB0Exact {
        r: DEMO_R,
        s: DEMO_S,
        diag_phase: DEMO_PHASE,
        rate: DEMO_RATE,
    };

    // -- closed forms vs exact propagation + probability structure --
    let mut exact_res = 0.0_f64;
    let mut mass_sum_res = 0.0_f64;
    let mut range_violation = 0.0_f64;
    for basis in exact.bases() {
        let rows = compare(&exact, basis, &times).expect("exact family evaluates");
        for row in &rows {
            exact_res = exact_res.max(row.max_abs_diff());
            if basis == ProbBasis::Mass {
                mass_sum_res = mass_sum_res.max((row.numeric.p[0] + row.numeric.p[1] - 1.0).abs());
                mass_sum_res = mass_sum_res.max((row.numeric.p[3] + row.numeric.p[2] - 1.0).abs());
            } else {
                for p in row.numeric.p {
                    range_violation = range_violation.max((-p).max(p - 1.0));
                }
            }
        }
    }
    // ξ-family mass channels conserve probability as well
    let series = FormulaFamily::GeneralA0Series {
        r: DEMO_R,
        s: DEMO_S,
        diag_phase: DEMO_PHASE,
        rate: DEMO_RATE,
    };
    {
        let (gen, pair) = series.numeric_setup(ProbBasis::Mass).expect("series numeric side");
        for &t in &times {
            let q = transition_quad(&gen, ProbBasis::Mass, &pair, t).expect("real probabilities");
            mass_sum_res = mass_sum_res.max((q.p[0] + q.p[1] - 1.0).abs());
        }
        let (gen_f, pair_f) = series.numeric_setup(ProbBasis::Flavor).expect("series numeric side");
        for &t in &times {
            let q = transition_quad(&gen_f, ProbBasis::Flavor, &pair_f, t).expect("real probabilities");
            for p in q.p {
                range_violation = range_violation.max((-p).max(p - 1.0));
            }
        }
    }
    checks.push(Check { name: "exact_family_agreement", statistic: exact_res, threshold: 1e-9, must_exceed: false });
    checks.push(Check { name: "mass_basis_conservation", statistic: mass_sum_res, threshold: 1e-12, must_exceed: false });
    checks.push(Check { name: "flavor_range", statistic: range_violation, threshold: 1e-10, must_exceed: false });

    // -- the two Hermitian-oscillation families differ exactly by the sign
    //    of the rate term in front of sin Ωt --
    {
        let (omega, rate, theta) = (DEMO_OMEGA, DEMO_RATE, DEMO_THETA);
        let fa = FormulaFamily::NeutrinoA0 { omega, rate, theta };
        let fb = FormulaFamily::NeutrinoB0 { omega, rate, theta };
        let big_omega = (4.0 * omega * omega - rate * rate).sqrt();
        let mut sign_res = 0.0_f64;
        for k in 0..=100 {
            let t = 0.25 * k as f64;
            let qa = fa.quad(ProbBasis::Flavor, t).expect("in domain");
            let qb = fb.quad(ProbBasis::Flavor, t).expect("in domain");
            let asym = (-rate * t).exp()
                * (2.0 * theta).sin().powi(2)
                * rate
                * (big_omega * t).sin()
                / big_omega;
            sign_res = sign_res.max((qa.p[0] - qb.p[0] - asym).abs());
        }
        checks.push(Check { name: "oscillation_sign_symmetry", statistic: sign_res, threshold: 1e-12, must_exceed: false });
    }

    // -- every damped family relaxes to ½ per channel at t = 40/rate --
    {
        let damped: [FormulaFamily; 7] = [
            FormulaFamily::NeutrinoA0 { omega: DEMO_OMEGA, rate: DEMO_RATE, theta: DEMO_THETA },
            FormulaFamily::NeutrinoB0 { omega: DEMO_OMEGA, rate: DEMO_RATE, theta: DEMO_THETA },
            FormulaFamily::S0A0 { rate: DEMO_RATE },
            FormulaFamily::S0B0 { rate: DEMO_RATE },
            FormulaFamily::R0A0 { s: DEMO_S, rate: DEMO_RATE },
            FormulaFamily::R0B0 { s: DEMO_S, rate: DEMO_RATE },
            exact,
        ];
        let mut limit_res = 0.0_f64;
        for family in damped {
            let rate = family.rate().expect("damped families carry a rate");
            let t = 40.0 / rate;
            for basis in family.damped_bases() {
                let q = family.quad(basis, t).expect("in domain");
                for p in q.p {
                    limit_res = limit_res.max((p - 0.5).abs());
                }
            }
        }
        checks.push(Check { name: "damped_limit_half", statistic: limit_res, threshold: 1e-8, must_exceed: false });
    }

    // -- series row sums collapse to the compact identity --
    {
        let mut sum_res = 0.0_f64;
        for k in 0..=50 {
            let t = 0.1 * k as f64;
            let (row_a, row_b) = series.series_row_sums(t).expect("series family");
            let q = series.quad(ProbBasis::Flavor, t).expect("in domain");
            sum_res = sum_res.max((q.p[0] + q.p[1] - row_a).abs());
            sum_res = sum_res.max((q.p[3] + q.p[2] - row_b).abs());
        }
        checks.push(Check { name: "series_row_sums", statistic: sum_res, threshold: 1e-12, must_exceed: false });
    }

    // -- nonlinear normalized evolution: trace conserved, and the quadratic
    //    term is what conserves it --
    {
        let h = PTHamiltonian::new(DEMO_R, DEMO_S, DEMO_PHASE, 0.0).expect("unbroken");
        let coeffs = DissipatorCoefficients::zero();
        let rho0 = initial_density(crate::states::StateLabel::RotatedAlpha(0.0), &h, false)
            .expect("projector state");
        let full = evolve_normalized(&h, &coeffs, &rho0, 10.0, None).expect("integrates");
        let drift_full = (full.trace() - C64::ONE).norm();
        checks.push(Check { name: "normalized_trace_conserved", statistic: drift_full, threshold: 1e-8, must_exceed: false });
        let linear = evolve_normalized_linear_only(&h, &coeffs, &rho0, 10.0, None).expect("integrates");
        let drift_linear = (linear.trace() - C64::ONE).norm();
        checks.push(Check { name: "quadratic_term_required", statistic: drift_linear, threshold: 1e-3, must_exceed: true });
    }

    ValidationReport { checks }
}
