use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use moyalspin::physics::{pure_amplitude, rabi_period, resonance_initial};
use moyalspin::spin::default_epsilon;
use moyalspin::{kernel_make, DiscreteKernel, EMParams, GridSpec, KernelVariant, LandauMode, SpinDim};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    #[default]
    QuantizerCheck,
    Wigner,
    StarCheck,
    Landau,
    Resonance,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::QuantizerCheck => "quantizer-check",
            Scenario::Wigner => "wigner",
            Scenario::StarCheck => "star-check",
            Scenario::Landau => "landau",
            Scenario::Resonance => "resonance",
        }
    }

    /// Process status when one of the scenario's checks fails.
    pub fn exit_code(self) -> i32 {
        match self {
            Scenario::QuantizerCheck => 10,
            Scenario::Wigner => 11,
            Scenario::StarCheck => 12,
            Scenario::Landau => 13,
            Scenario::Resonance => 14,
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    Parity,
    #[default]
    Cosine,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KernelConfig {
    pub kind: KernelKind,
    /// `null` selects the default for the spin dimension.
    pub epsilon: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub d: usize,
    pub n_points: usize,
    pub length: f64,
    pub hbar: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            d: 1,
            n_points: 128,
            length: 20.0,
            hbar: 1.0,
        }
    }
}

/// Oscillator eigenstate `level` (along the first axis) times the spin basis state `spin_state`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WignerConfig {
    pub level: u32,
    pub spin_state: usize,
    pub frequency: f64,
}

impl Default for WignerConfig {
    fn default() -> Self {
        Self {
            level: 0,
            spin_state: 0,
            frequency: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StarCheckConfig {
    pub seed: u64,
    pub pairs: usize,
}

impl Default for StarCheckConfig {
    fn default() -> Self {
        Self { seed: 0, pairs: 100 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LandauConfig {
    #[serde(rename = "N")]
    pub level: u32,
    pub lambda0: i8,
    pub p10: f64,
    pub p30: f64,
}

impl Default for LandauConfig {
    fn default() -> Self {
        Self {
            level: 0,
            lambda0: 1,
            p10: 0.0,
            p30: 0.0,
        }
    }
}

/// Oscillation amplitude: `auto` picks the value for which the trajectory stays pure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Amplitude {
    Value(f64),
    Auto,
}

impl Serialize for Amplitude {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Amplitude::Value(v) => s.serialize_f64(*v),
            Amplitude::Auto => s.serialize_str("auto"),
        }
    }
}

impl<'de> Deserialize<'de> for Amplitude {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(v) => Ok(Amplitude::Value(v)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl Amplitude {
    pub fn resolve(self, p: &EMParams) -> f64 {
        match self {
            Amplitude::Value(a) => a,
            Amplitude::Auto => pure_amplitude(p),
        }
    }
}

impl FromStr for Amplitude {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(Amplitude::Auto);
        }
        s.parse().map(Amplitude::Value).map_err(|_| format!("expected `auto` or a number, got {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ResonanceConfig {
    pub a: Amplitude,
    pub periods: f64,
    pub steps_per_period: usize,
}

impl Default for ResonanceConfig {
    fn default() -> Self {
        Self {
            a: Amplitude::Auto,
            periods: 10.0,
            steps_per_period: 1000,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// File stem; empty means the scenario name in the working directory.
    pub path: String,
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    /// Dimension `s+1` of the spin factor.
    pub spin_dim: usize,
    pub kernel: KernelConfig,
    pub grid: GridConfig,
    pub physics: EMParams,
    pub wigner: WignerConfig,
    pub star_check: StarCheckConfig,
    pub landau: LandauConfig,
    pub resonance: ResonanceConfig,
    pub output: OutputConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            scenario: Scenario::default(),
            spin_dim: 2,
            kernel: KernelConfig::default(),
            grid: GridConfig::default(),
            physics: EMParams::default(),
            wigner: WignerConfig::default(),
            star_check: StarCheckConfig::default(),
            landau: LandauConfig::default(),
            resonance: ResonanceConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

/// Command-line overrides; every flag wins over the config file.
#[derive(Args, Clone, Debug, Default)]
pub struct Overrides {
    /// JSON configuration file.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Output file stem.
    #[arg(long, value_name = "PATH")]
    pub output: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Spin-factor dimension s+1.
    #[arg(long)]
    pub spin_dim: Option<usize>,
    #[arg(long, value_enum)]
    pub kernel: Option<KernelKind>,
    #[arg(long)]
    pub epsilon: Option<f64>,

    #[arg(long = "d")]
    pub d: Option<usize>,
    #[arg(long)]
    pub n_points: Option<usize>,
    #[arg(long)]
    pub length: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,

    #[arg(long)]
    pub m0: Option<f64>,
    #[arg(long)]
    pub e0: Option<f64>,
    #[arg(long = "c")]
    pub c: Option<f64>,
    #[arg(long = "B3")]
    pub b3: Option<f64>,
    #[arg(long = "b")]
    pub b: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub mu0: Option<f64>,

    /// Oscillator level of the Wigner scenario.
    #[arg(long)]
    pub level: Option<u32>,
    #[arg(long)]
    pub spin_state: Option<usize>,
    #[arg(long)]
    pub frequency: Option<f64>,

    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub pairs: Option<usize>,

    /// Landau level.
    #[arg(long = "N")]
    pub landau_level: Option<u32>,
    #[arg(long)]
    pub lambda0: Option<i8>,
    #[arg(long)]
    pub p10: Option<f64>,
    #[arg(long)]
    pub p30: Option<f64>,

    /// `auto` or a number.
    #[arg(long = "a")]
    pub amplitude: Option<Amplitude>,
    #[arg(long)]
    pub periods: Option<f64>,
    #[arg(long)]
    pub steps_per_period: Option<usize>,
}

fn set<T: Copy>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

impl Overrides {
    pub fn apply(&self, c: &mut ScenarioConfig) {
        if let Some(p) = &self.output {
            c.output.path = p.clone();
        }
        set(&mut c.output.format, self.format);
        set(&mut c.spin_dim, self.spin_dim);
        set(&mut c.kernel.kind, self.kernel);
        if self.epsilon.is_some() {
            c.kernel.epsilon = self.epsilon;
        }
        set(&mut c.grid.d, self.d);
        set(&mut c.grid.n_points, self.n_points);
        set(&mut c.grid.length, self.length);
        set(&mut c.grid.hbar, self.hbar);
        let p = &mut c.physics;
        set(&mut p.m0, self.m0);
        set(&mut p.e0, self.e0);
        set(&mut p.c, self.c);
        set(&mut p.b3, self.b3);
        set(&mut p.b, self.b);
        set(&mut p.omega, self.omega);
        set(&mut p.mu0, self.mu0);
        if let Some(h) = self.hbar {
            p.hbar = h;
        }
        set(&mut c.wigner.level, self.level);
        set(&mut c.wigner.spin_state, self.spin_state);
        set(&mut c.wigner.frequency, self.frequency);
        set(&mut c.star_check.seed, self.seed);
        set(&mut c.star_check.pairs, self.pairs);
        set(&mut c.landau.level, self.landau_level);
        set(&mut c.landau.lambda0, self.lambda0);
        set(&mut c.landau.p10, self.p10);
        set(&mut c.landau.p30, self.p30);
        set(&mut c.resonance.a, self.amplitude);
        set(&mut c.resonance.periods, self.periods);
        set(&mut c.resonance.steps_per_period, self.steps_per_period);
    }
}

/// Reads the optional config file, applies the flags and validates the result.
pub fn parse_config(scenario: Option<Scenario>, flags: &Overrides) -> CliResult<ScenarioConfig> {
    let mut config = match &flags.config {
        Some(path) => read_file(path)?,
        None => ScenarioConfig::default(),
    };
    if let Some(s) = scenario {
        config.scenario = s;
    }
    flags.apply(&mut config);
    config.validate()?;
    Ok(config)
}

fn read_file(path: &Path) -> CliResult<ScenarioConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    from_json(&text).map_err(|e| CliError::ConfigInvalid(format!("{}: {e}", path.display())))
}

/// Parses config JSON; an empty or whitespace-only document means all defaults.
pub fn from_json(text: &str) -> serde_json::Result<ScenarioConfig> {
    if text.trim().is_empty() {
        return Ok(ScenarioConfig::default());
    }
    serde_json::from_str(text)
}

impl ScenarioConfig {
    pub fn kernel(&self) -> CliResult<DiscreteKernel> {
        let s = SpinDim::from_dim(self.spin_dim).map_err(|e| CliError::config("spin_dim", e))?;
        let d = s.dim();
        let built = match self.kernel.kind {
            KernelKind::Cosine => {
                let eps = self.kernel.epsilon.unwrap_or_else(|| default_epsilon(s));
                kernel_make(s, KernelVariant::Cosine, eps)
            }
            KernelKind::Parity if d % 2 == 1 => kernel_make(s, KernelVariant::ParityOdd, 0.0),
            KernelKind::Parity if d % 4 == 2 => kernel_make(s, KernelVariant::ParityEvenHalfOdd, 0.0),
            KernelKind::Parity => {
                return Err(CliError::config(
                    "kernel.kind",
                    format!("no parity kernel exists for s+1 = {d}; use the cosine kernel"),
                ))
            }
        };
        built.map_err(|e| CliError::config("kernel.epsilon", e))
    }

    pub fn grid(&self) -> CliResult<GridSpec> {
        let g = &self.grid;
        GridSpec::new(g.d, g.n_points, g.length, g.hbar).map_err(|e| CliError::config("grid", e))
    }

    /// Physics parameters with `ħ` taken from the grid section.
    pub fn physics(&self) -> EMParams {
        EMParams {
            hbar: self.grid.hbar,
            ..self.physics
        }
    }

    pub fn landau_mode(&self) -> CliResult<LandauMode> {
        let l = &self.landau;
        LandauMode::new(l.level, l.lambda0, l.p10, l.p30, self.physics()).map_err(|e| CliError::config("landau", e))
    }

    pub fn amplitude(&self) -> f64 {
        self.resonance.a.resolve(&self.physics())
    }

    /// `(t_end, dt)` of the resonance run.
    pub fn resonance_times(&self) -> (f64, f64) {
        let t = rabi_period(&self.physics());
        (self.resonance.periods * t, t / self.resonance.steps_per_period as f64)
    }

    pub fn output_stem(&self) -> PathBuf {
        let raw = if self.output.path.is_empty() {
            self.scenario.name()
        } else {
            self.output.path.as_str()
        };
        let path = PathBuf::from(raw);
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv" | "json") => path.with_extension(""),
            _ => path,
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.grid.hbar != self.physics.hbar {
            return Err(CliError::config(
                "physics.hbar",
                format!("{} differs from grid.hbar = {}", self.physics.hbar, self.grid.hbar),
            ));
        }
        self.kernel()?;
        self.grid()?;
        let p = self.physics();
        p.validate().map_err(|e| CliError::config("physics", e))?;
        if self.wigner.spin_state >= self.spin_dim {
            return Err(CliError::config(
                "wigner.spin_state",
                format!("{} is out of range for spin_dim {}", self.wigner.spin_state, self.spin_dim),
            ));
        }
        if !(self.wigner.frequency > 0.0 && self.wigner.frequency.is_finite()) {
            return Err(CliError::config("wigner.frequency", "must be positive"));
        }
        if self.star_check.pairs == 0 {
            return Err(CliError::config("star_check.pairs", "must be at least 1"));
        }
        match self.scenario {
            Scenario::Landau => {
                self.landau_mode()?;
            }
            Scenario::Resonance => {
                let r = &self.resonance;
                if !(r.periods > 0.0 && r.periods.is_finite()) {
                    return Err(CliError::config("resonance.periods", "must be positive"));
                }
                if r.steps_per_period < 7 {
                    return Err(CliError::config(
                        "resonance.steps_per_period",
                        "must be at least 7 to keep dt * Omega <= 0.5",
                    ));
                }
                resonance_initial(&p, self.amplitude()).map_err(|e| CliError::config("resonance.a", e))?;
            }
            _ => {}
        }
        Ok(())
    }

    /// Pretty JSON with a trailing newline; stable field order.
    pub fn canonical_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        let c = from_json("").unwrap();
        assert_eq!(c, ScenarioConfig::default());
        assert_eq!(from_json("{}").unwrap(), c);
        assert_eq!(c.grid.n_points, 128);
        assert_eq!(c.grid.length, 20.0);
        assert_eq!(c.physics.m0, 1.0);
        c.validate().unwrap();
    }

    #[test]
    fn canonical_form_round_trips() {
        let mut c = ScenarioConfig::default();
        c.resonance.a = Amplitude::Value(0.25);
        c.kernel.epsilon = Some(0.1);
        let text = c.canonical_json();
        let back = from_json(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.canonical_json(), text);
        assert!(ScenarioConfig::default().canonical_json().contains("\"a\": \"auto\""));
    }

    #[test]
    fn unknown_keys_are_rejected_with_position() {
        let err = from_json("{\n  \"grid\": {\"nn\": 3}\n}").unwrap_err();
        assert_eq!(err.line(), 2);
    }

    #[test]
    fn flags_override_file_values() {
        let mut c = ScenarioConfig::default();
        let o = Overrides {
            b3: Some(2.0),
            e0: Some(-1.0),
            landau_level: Some(3),
            amplitude: Some(Amplitude::Value(0.5)),
            hbar: Some(0.5),
            ..Overrides::default()
        };
        o.apply(&mut c);
        assert_eq!(c.physics.b3, 2.0);
        assert_eq!(c.physics.e0, -1.0);
        assert_eq!(c.landau.level, 3);
        assert_eq!(c.resonance.a, Amplitude::Value(0.5));
        assert_eq!((c.grid.hbar, c.physics.hbar), (0.5, 0.5));
    }

    #[test]
    fn vanishing_kernel_names_the_entry() {
        let c = ScenarioConfig {
            kernel: KernelConfig {
                kind: KernelKind::Cosine,
                epsilon: Some(0.0),
            },
            ..ScenarioConfig::default()
        };
        let err = c.validate().unwrap_err();
        assert!(err.to_string().contains("(k, l) = (1, 1)"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn parity_kernel_selection() {
        let mut c = ScenarioConfig {
            kernel: KernelConfig {
                kind: KernelKind::Parity,
                epsilon: None,
            },
            ..ScenarioConfig::default()
        };
        for (dim, ok) in [(2, true), (3, true), (4, false), (6, true)] {
            c.spin_dim = dim;
            assert_eq!(c.kernel().is_ok(), ok, "{dim}");
        }
    }

    #[test]
    fn amplitude_parsing() {
        assert_eq!("auto".parse::<Amplitude>().unwrap(), Amplitude::Auto);
        assert_eq!("0.5".parse::<Amplitude>().unwrap(), Amplitude::Value(0.5));
        assert!("x".parse::<Amplitude>().is_err());
        assert!((Amplitude::Auto.resolve(&EMParams::default()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn output_stem_strips_known_extensions() {
        let mut c = ScenarioConfig::default();
        assert_eq!(c.output_stem(), PathBuf::from("quantizer-check"));
        c.output.path = "out/run.csv".into();
        assert_eq!(c.output_stem(), PathBuf::from("out/run"));
        c.output.path = "out/run.v2".into();
        assert_eq!(c.output_stem(), PathBuf::from("out/run.v2"));
    }

    #[test]
    fn off_resonance_amplitude_other_than_one_is_invalid_at_resonance() {
        let mut c = ScenarioConfig {
            scenario: Scenario::Resonance,
            ..ScenarioConfig::default()
        };
        c.resonance.a = Amplitude::Value(0.5);
        assert_eq!(c.validate().unwrap_err().exit_code(), 2);
    }
}
