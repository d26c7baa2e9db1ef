//! Run configuration, command bodies and CSV/JSON rendering for the CLI.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analyzer::{b_set_probe, jump_set, oscillation_at, oscillation_point, JumpSet, Probe};
use crate::bv::{variation_profile, VariationProfile};
use crate::engine::{converge_report, default_schedule, ConvergenceReport, Mode, Verdict, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::gallery::{ClassReport, GalleryFn, Preset};
use crate::scalar::{ExactScalar, Point};

/// Largest `k` reported by `analyze` for the jump sets `D_k`.
pub const ANALYZE_MAX_K: u32 = 10;

/// Evaluation grid: `count` equally spaced points `i / (count - 1)`, or an
/// explicit increasing list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridSpec {
    Uniform(usize),
    Explicit(Vec<ExactScalar>),
}

impl GridSpec {
    pub fn points(&self) -> Vec<ExactScalar> {
        match self {
            GridSpec::Uniform(count) => {
                let last = (*count as i64 - 1).max(1);
                (0..*count as i64).map(|i| ExactScalar::new(i, last)).collect()
            }
            GridSpec::Explicit(points) => points.clone(),
        }
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    /// `uniform:<count>` or a comma-separated list of `p/q` values.
    fn from_str(s: &str) -> Result<Self> {
        if let Some(count) = s.strip_prefix("uniform:") {
            let count = count.trim().parse().map_err(|_| Error::Parse(format!("bad grid count in {s:?}")))?;
            return Ok(GridSpec::Uniform(count));
        }
        s.split(',').map(str::parse).collect::<Result<Vec<_>>>().map(GridSpec::Explicit)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::Parse(format!("unknown output format {s:?}; expected csv or json"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

/// Parses a degree written as a decimal integer or as `2^k`.
pub fn parse_degree(s: &str) -> Result<u64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad degree {s:?}; expected an integer or 2^k"));
    match s.split_once('^') {
        Some(("2", e)) => {
            let e: u32 = e.parse().map_err(|_| bad())?;
            1u64.checked_shl(e).filter(|_| e < 64).ok_or_else(bad)
        }
        Some(_) => Err(bad()),
        None => s.parse().map_err(|_| bad()),
    }
}

/// Comma-separated degrees, e.g. `16,32,2^10`.
pub fn parse_schedule(s: &str) -> Result<Vec<u64>> {
    s.split(',').map(parse_degree).collect()
}

/// Settings shared by every subcommand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub mode: Mode,
    pub schedule: Vec<u64>,
    pub grid: GridSpec,
    pub tol: ExactScalar,
    pub output: OutputFormat,
    pub seed: u64,
}

/// A config file or a set of CLI overrides; absent fields keep defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub mode: Option<Mode>,
    pub schedule: Option<Vec<u64>>,
    pub grid: Option<GridSpec>,
    pub tol: Option<ExactScalar>,
    pub output: Option<OutputFormat>,
    pub seed: Option<u64>,
}

impl ConfigOverrides {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("config {}: {e}", path.display())))
    }

    /// Fields set in `self` win over those in `base`.
    pub fn over(self, base: ConfigOverrides) -> ConfigOverrides {
        ConfigOverrides {
            mode: self.mode.or(base.mode),
            schedule: self.schedule.or(base.schedule),
            grid: self.grid.or(base.grid),
            tol: self.tol.or(base.tol),
            output: self.output.or(base.output),
            seed: self.seed.or(base.seed),
        }
    }

    pub fn resolve(self) -> Result<RunConfig> {
        let mode = self.mode.unwrap_or_default();
        let config = RunConfig {
            mode,
            schedule: self.schedule.unwrap_or_else(|| default_schedule(mode)),
            grid: self.grid.unwrap_or(GridSpec::Uniform(33)),
            tol: self.tol.unwrap_or_else(|| ExactScalar::new(DEFAULT_TOL.0, DEFAULT_TOL.1)),
            output: self.output.unwrap_or_default(),
            seed: self.seed.unwrap_or(0),
        };
        config.validate()?;
        Ok(config)
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.schedule.is_empty() || self.schedule[0] == 0 || self.schedule.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("schedule must be a nonempty strictly increasing list of positive degrees".into()));
        }
        if !self.tol.is_positive() {
            return Err(Error::Domain(format!("tolerance must be positive, got {}", self.tol)));
        }
        match &self.grid {
            GridSpec::Uniform(count) if *count < 2 => {
                Err(Error::Domain(format!("uniform grid needs at least 2 points, got {count}")))
            }
            GridSpec::Explicit(points) => {
                if points.is_empty() || points.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Domain("explicit grid must be nonempty and strictly increasing".into()));
                }
                points.iter().try_for_each(|x| x.require_unit("grid point"))
            }
            GridSpec::Uniform(_) => Ok(()),
        }
    }
}

/// A named preset or a JSON file holding a serialized [`GalleryFn`].
pub fn load_function(preset: Option<&str>, path: Option<&Path>) -> Result<GalleryFn> {
    match (preset, path) {
        (Some(name), None) => Ok(name.parse::<Preset>()?.build()),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read function {}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("function {}: {e}", path.display())))
        }
        _ => Err(Error::Parse("give exactly one of --preset or --function".into())),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproxOutput {
    pub report: ConvergenceReport,
    /// Convergence to `f(x0)` itself, which differs from the report's target
    /// at jumps and removable discontinuities.
    pub membership: Probe,
}

impl ApproxOutput {
    /// 0 converged, 2 not converged, 3 inconclusive.
    pub fn exit_code(&self) -> i32 {
        match self.report.verdict {
            Verdict::Converged { .. } => 0,
            Verdict::NotConverged => 2,
            Verdict::Inconclusive => 3,
        }
    }
}

pub fn cmd_approx(f: &GalleryFn, x0: &ExactScalar, config: &RunConfig) -> Result<ApproxOutput> {
    let report = converge_report(f, x0, &config.schedule, &config.tol, config.mode)?;
    let membership = b_set_probe(f, x0, &config.schedule, &config.tol, config.mode)?;
    Ok(ApproxOutput { report, membership })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Section<T> {
    Ok(T),
    Error(String),
}

impl<T> From<Result<T>> for Section<T> {
    fn from(r: Result<T>) -> Self {
        match r {
            Ok(v) => Section::Ok(v),
            Err(e) => Section::Error(format!("{}: {}", e.kind(), e)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OscillationRow {
    pub x: Point,
    pub value: ExactScalar,
    pub oscillation: Section<ExactScalar>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalyzeOutput {
    pub classification: ClassReport,
    pub jump_sets: Vec<Section<JumpSet>>,
    /// Grid points followed by discontinuity candidates off the grid.
    pub oscillation: Vec<OscillationRow>,
    /// Whether `osc_f = f` at every row of the oscillation table.
    pub own_oscillation: Option<bool>,
    pub variation: Section<VariationProfile>,
}

pub fn cmd_analyze(f: &GalleryFn, config: &RunConfig) -> Result<AnalyzeOutput> {
    let grid = config.grid.points();
    let jump_sets = (1..=ANALYZE_MAX_K).map(|k| jump_set(f, k).into()).collect();
    let mut rows: Vec<OscillationRow> = Vec::new();
    for x in &grid {
        rows.push(OscillationRow {
            x: Point::Rational(x.clone()),
            value: f.eval_unchecked(x),
            oscillation: oscillation_point(f, x).into(),
        });
    }
    for p in f.discontinuity_candidates() {
        if p.as_rational().is_some_and(|r| grid.binary_search(r).is_ok()) {
            continue;
        }
        let Ok(value) = f.eval_point(&p) else { continue };
        rows.push(OscillationRow { oscillation: oscillation_at(f, &p).into(), x: p, value });
    }
    let own_oscillation = rows
        .iter()
        .map(|r| match &r.oscillation {
            Section::Ok(o) => Some(o == &r.value),
            Section::Error(_) => None,
        })
        .collect::<Option<Vec<bool>>>()
        .map(|v| v.into_iter().all(|b| b));
    Ok(AnalyzeOutput {
        classification: f.classify(),
        jump_sets,
        oscillation: rows,
        own_oscillation,
        variation: variation_profile(f, &grid).into(),
    })
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Consistency(format!("csv encoding failed: {e}"));
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(&row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Consistency(format!("csv encoding failed: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Consistency(e.to_string()))
}

fn json_text<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Error::Consistency(format!("json encoding failed: {e}")))
}

/// One row per schedule entry; verdict and membership repeat on every row.
pub fn render_approx(out: &ApproxOutput, format: OutputFormat) -> Result<String> {
    if format == OutputFormat::Json {
        return json_text(out);
    }
    let r = &out.report;
    let (verdict, at_n) = match &r.verdict {
        Verdict::Converged { at_n, .. } => ("converged", at_n.to_string()),
        Verdict::NotConverged => ("not-converged", String::new()),
        Verdict::Inconclusive => ("inconclusive", String::new()),
    };
    let kind = serde_json::to_value(r.target.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    let rows = r.schedule.iter().zip(&r.values).zip(&r.errors).map(|((n, v), e)| {
        vec![
            r.x0.to_string(),
            r.mode.to_string(),
            n.to_string(),
            v.to_string(),
            r.target.value.to_string(),
            kind.clone(),
            e.to_string(),
            r.tol.to_string(),
            verdict.to_string(),
            at_n.clone(),
            out.membership.verdict.to_string(),
        ]
    });
    csv_text(
        &["x0", "mode", "n", "value", "target", "target_kind", "error", "tol", "verdict", "at_n", "membership"],
        rows,
    )
}

/// Long format: `section,key,value,flag`.
pub fn render_analyze(out: &AnalyzeOutput, format: OutputFormat) -> Result<String> {
    if format == OutputFormat::Json {
        return json_text(out);
    }
    let mut rows: Vec<Vec<String>> = Vec::new();
    let row = |s: &str, k: String, v: String, f: &str| vec![s.to_string(), k, v, f.to_string()];
    if let serde_json::Value::Object(map) = serde_json::to_value(&out.classification).unwrap_or_default() {
        for (k, v) in map {
            let v = match v {
                serde_json::Value::String(s) => s,
                serde_json::Value::Null => String::new(),
                other => other.to_string(),
            };
            rows.push(row("class", k, v, ""));
        }
    }
    for (k, js) in (1..=ANALYZE_MAX_K).zip(&out.jump_sets) {
        match js {
            Section::Ok(set) => {
                let pts: Vec<String> = set.points.iter().map(ToString::to_string).collect();
                rows.push(row("jump-set", k.to_string(), pts.join(" "), &set.points.len().to_string()));
            }
            Section::Error(e) => rows.push(row("jump-set", k.to_string(), String::new(), e)),
        }
    }
    for r in &out.oscillation {
        match &r.oscillation {
            Section::Ok(o) => rows.push(row("oscillation", r.x.to_string(), o.to_string(), &r.value.to_string())),
            Section::Error(e) => rows.push(row("oscillation", r.x.to_string(), String::new(), e)),
        }
    }
    let own = out.own_oscillation.map(|b| b.to_string()).unwrap_or_else(|| "unknown".into());
    rows.push(row("own-oscillation", String::new(), own, ""));
    match &out.variation {
        Section::Ok(p) => {
            for e in &p.entries {
                rows.push(row("variation", e.node.to_string(), e.cumulative.to_string(), &e.flag.to_string()));
            }
        }
        Section::Error(e) => rows.push(row("variation", String::new(), String::new(), e)),
    }
    csv_text(&["section", "key", "value", "flag"], rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::Flag;
    use crate::scalar::q;

    fn config(overrides: ConfigOverrides) -> RunConfig {
        overrides.resolve().unwrap()
    }

    #[test]
    fn degrees_and_schedules() {
        assert_eq!(parse_degree("2^10").unwrap(), 1024);
        assert_eq!(parse_schedule("16, 32,2^6").unwrap(), vec![16, 32, 64]);
        assert!(parse_degree("3^2").is_err());
        assert!(parse_degree("2^64").is_err());
        assert!(parse_degree("1.5").is_err());
    }

    #[test]
    fn config_validation() {
        let bad = ConfigOverrides { schedule: Some(vec![8, 8]), ..Default::default() };
        assert!(matches!(bad.resolve(), Err(Error::Domain(_))));
        let bad = ConfigOverrides { grid: Some(GridSpec::Uniform(1)), ..Default::default() };
        assert!(bad.resolve().is_err());
        let bad = ConfigOverrides { tol: Some(q(0, 1)), ..Default::default() };
        assert!(bad.resolve().is_err());
        let c = config(ConfigOverrides { mode: Some(Mode::Float), ..Default::default() });
        assert_eq!(c.schedule.last(), Some(&(1 << 20)));
        let parsed: ConfigOverrides =
            serde_json::from_str(r#"{"mode":"exact","grid":{"uniform":5},"tol":"1/10","seed":7}"#).unwrap();
        assert_eq!(parsed.grid, Some(GridSpec::Uniform(5)));
        assert!(serde_json::from_str::<ConfigOverrides>(r#"{"tol":0.1}"#).is_err());
        assert_eq!(GridSpec::Uniform(5).points()[1], q(1, 4));
    }

    #[test]
    fn approx_square_and_heaviside() {
        let c = config(ConfigOverrides::default());
        let out = cmd_approx(&Preset::Square.build(), &q(1, 2), &c).unwrap();
        assert_eq!(out.exit_code(), 0);
        let csv = render_approx(&out, OutputFormat::Csv).unwrap();
        assert!(csv.lines().nth(1).unwrap().starts_with("1/2,exact,16,17/64,1/4,function-value,1/64,"));
        let out = cmd_approx(&Preset::Heaviside.build(), &q(1, 2), &c).unwrap();
        assert_eq!(out.report.target.value, q(1, 2));
        assert_eq!(out.exit_code(), 0);
    }

    #[test]
    fn approx_thomae_support_point() {
        let c = config(ConfigOverrides::default());
        let out = cmd_approx(&Preset::ThomaeDefault.build(), &q(1, 3), &c).unwrap();
        assert_eq!(out.exit_code(), 0);
        assert!(out.report.target.value.is_zero());
        assert_eq!(out.membership.verdict, crate::analyzer::Membership::NotInBf);
    }

    #[test]
    fn analyze_presets() {
        let c = config(ConfigOverrides::default());
        let out = cmd_analyze(&Preset::Heaviside.build(), &c).unwrap();
        assert_eq!(out.jump_sets[0], Section::Ok(JumpSet { k: 1, points: vec![Point::Rational(q(1, 2))] }));
        assert_eq!(out.classification.cadlag, Flag::Yes);
        match &out.variation {
            Section::Ok(p) => assert_eq!(p.entries.last().unwrap().cumulative, q(1, 1)),
            Section::Error(e) => panic!("{e}"),
        }
        let out = cmd_analyze(&Preset::Dirichlet.build(), &c).unwrap();
        assert!(out.oscillation.iter().all(|r| r.oscillation == Section::Ok(q(1, 1))));
        assert_eq!(out.classification.regulated, Flag::No);
        assert!(matches!(out.jump_sets[0], Section::Error(_)));
        let out = cmd_analyze(&Preset::PhpH.build(), &c).unwrap();
        assert_eq!(out.own_oscillation, Some(true));
        assert!(out.oscillation.iter().any(|r| !r.x.is_rational()));
        let csv = render_analyze(&out, OutputFormat::Csv).unwrap();
        assert!(csv.contains("own-oscillation,,true,"));
    }

    #[test]
    fn rendering_is_deterministic() {
        let c = config(ConfigOverrides::default());
        let f = Preset::PhpH.build();
        let a = render_analyze(&cmd_analyze(&f, &c).unwrap(), OutputFormat::Json).unwrap();
        let b = render_analyze(&cmd_analyze(&f, &c).unwrap(), OutputFormat::Json).unwrap();
        assert_eq!(a, b);
    }
}
