//! Flat `key = value` experiment configuration.
//!
//! Lines are `key = value`; `#` starts a comment. Lists are comma
//! separated, and integer lists accept inclusive ranges such as `0..9`.
//! Later assignments win, so command-line overrides are simply appended.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use hotstart_core::{
    Batching, Encoding, Entangler, GradientMethod, GradientSpec, OptimizerConfig, OrderingStrategy, SpinOrder,
};

use crate::error::CliError;

/// Every key the configuration understands, in echo order.
pub const KEYS: &[&str] = &[
    "molecule",
    "input",
    "encoding",
    "spin_order",
    "frozen_occupied",
    "removed_virtual",
    "n_electrons",
    "stride",
    "stride_base",
    "depth",
    "depths",
    "entangler",
    "ordering",
    "orderings",
    "batching",
    "carry_hessian",
    "methods",
    "seeds",
    "gradient",
    "step",
    "max_iterations",
    "gradient_tolerance",
    "c1",
    "c2",
    "max_line_search",
    "output",
    "jobs",
];

/// Ordering as written in a config. `random` without a seed draws the
/// shuffle seed from the run seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderingChoice {
    Fixed(OrderingStrategy),
    RandomPerSeed,
}

impl OrderingChoice {
    pub fn resolve(self, seed: u64) -> OrderingStrategy {
        match self {
            OrderingChoice::Fixed(s) => s,
            OrderingChoice::RandomPerSeed => OrderingStrategy::Random(seed),
        }
    }

    pub fn label(self) -> String {
        match self {
            OrderingChoice::Fixed(s) => s.to_string(),
            OrderingChoice::RandomPerSeed => "random".into(),
        }
    }
}

impl FromStr for OrderingChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().eq_ignore_ascii_case("random") {
            Ok(OrderingChoice::RandomPerSeed)
        } else {
            s.parse().map(OrderingChoice::Fixed)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Ordinary,
    HotStart,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Ordinary => "ordinary",
            Method::HotStart => "hotstart",
        }
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ordinary" | "vqe" => Ok(Method::Ordinary),
            "hotstart" | "hot_start" | "hot-start" => Ok(Method::HotStart),
            other => Err(format!("unknown method {other:?}")),
        }
    }
}

/// Fully resolved experiment settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub molecule: String,
    pub input: PathBuf,
    pub encoding: Encoding,
    pub spin_order: SpinOrder,
    pub frozen_occupied: Vec<usize>,
    pub removed_virtual: Vec<usize>,
    pub n_electrons: Option<usize>,
    /// 0 disables stride selection.
    pub stride: usize,
    pub stride_base: usize,
    pub depth: usize,
    pub depths: Vec<usize>,
    pub entangler: Entangler,
    pub ordering: OrderingChoice,
    pub orderings: Vec<OrderingChoice>,
    pub batching: Batching,
    pub carry_hessian: bool,
    pub methods: Vec<Method>,
    pub seeds: Vec<u64>,
    pub optimizer: OptimizerConfig,
    pub output: PathBuf,
    /// 0 lets rayon choose.
    pub jobs: usize,
}

/// Raw key-value pairs before interpretation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    values: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        let mut raw = Self::default();
        for (k, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body.split_once('=').ok_or_else(|| {
                CliError::input(format!("{origin}:{}: expected 'key = value', found {body:?}", k + 1))
            })?;
            raw.set(key.trim(), value.trim())
                .map_err(|e| CliError::input(format!("{origin}:{}: {e}", k + 1)))?;
        }
        Ok(raw)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        if !KEYS.contains(&key) {
            return Err(format!("unknown key {key:?}"));
        }
        self.values.insert(key.to_string(), value.to_string());
        Ok(())
    }

    /// Apply `key=value` overrides.
    pub fn apply_overrides<'a, I: IntoIterator<Item = &'a String>>(&mut self, overrides: I) -> Result<(), CliError> {
        for o in overrides {
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| CliError::input(format!("override {o:?} is not key=value")))?;
            self.set(k.trim(), v.trim()).map_err(CliError::input)?;
        }
        Ok(())
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn parsed<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|e| CliError::input(format!("{key} = {v:?}: {e}"))),
        }
    }

    fn list<T: FromStr>(&self, key: &str, default: Vec<T>) -> Result<Vec<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(default),
            Some(v) => parse_list(v).map_err(|e| CliError::input(format!("{key} = {v:?}: {e}"))),
        }
    }

    fn int_list<T>(&self, key: &str, default: Vec<T>) -> Result<Vec<T>, CliError>
    where
        T: FromStr + TryFrom<u64>,
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(default),
            Some(v) => parse_int_list(v).map_err(|e| CliError::input(format!("{key} = {v:?}: {e}"))),
        }
    }

    pub fn resolve(&self) -> Result<ExperimentConfig, CliError> {
        let defaults = OptimizerConfig::default();
        let gradient_method: GradientMethod = self.parsed("gradient", GradientMethod::AnalyticShift)?;
        let gradient = match self.get("step") {
            None => GradientSpec::new(gradient_method),
            Some(_) => GradientSpec::with_step(gradient_method, self.parsed("step", 0.0)?)
                .map_err(|e| CliError::input(e.to_string()))?,
        };
        let optimizer = OptimizerConfig {
            max_iterations: self.parsed("max_iterations", defaults.max_iterations)?,
            gradient_tolerance: self.parsed("gradient_tolerance", defaults.gradient_tolerance)?,
            c1: self.parsed("c1", defaults.c1)?,
            c2: self.parsed("c2", defaults.c2)?,
            max_line_search: self.parsed("max_line_search", defaults.max_line_search)?,
            gradient,
            seed: 0,
        };
        optimizer.validate().map_err(|e| CliError::input(e.to_string()))?;

        let input: PathBuf = self
            .get("input")
            .map(PathBuf::from)
            .ok_or_else(|| CliError::input("missing required key 'input'"))?;
        let depth = self.parsed("depth", 2usize)?;
        let ordering = self.parsed("ordering", OrderingChoice::Fixed(OrderingStrategy::Descending))?;
        let stride = self.parsed("stride", 0usize)?;
        let cfg = ExperimentConfig {
            molecule: self.get("molecule").map(str::to_string).unwrap_or_else(|| {
                input
                    .file_stem()
                    .map_or("molecule".into(), |s| s.to_string_lossy().into_owned())
            }),
            encoding: self.parsed("encoding", Encoding::BravyiKitaev)?,
            spin_order: self.parsed("spin_order", SpinOrder::Interleaved)?,
            frozen_occupied: self.int_list("frozen_occupied", Vec::new())?,
            removed_virtual: self.int_list("removed_virtual", Vec::new())?,
            n_electrons: self
                .get("n_electrons")
                .map(|_| self.parsed("n_electrons", 0usize))
                .transpose()?,
            stride,
            stride_base: self.parsed("stride_base", 0usize)?,
            depth,
            depths: self.int_list("depths", vec![depth])?,
            entangler: self.parsed("entangler", Entangler::Full)?,
            ordering,
            orderings: self.list("orderings", vec![ordering])?,
            batching: self.parsed("batching", Batching::PerTerm)?,
            carry_hessian: self.parsed("carry_hessian", false)?,
            methods: self.list("methods", vec![Method::Ordinary, Method::HotStart])?,
            seeds: self.int_list("seeds", vec![0])?,
            optimizer,
            output: self
                .get("output")
                .map_or_else(|| PathBuf::from("results"), PathBuf::from),
            jobs: self.parsed("jobs", 0usize)?,
            input,
        };
        if cfg.seeds.is_empty() {
            return Err(CliError::input("seeds must not be empty"));
        }
        if cfg.depths.is_empty() {
            return Err(CliError::input("depths must not be empty"));
        }
        if cfg.stride > 0 && self.get("ordering").is_none() {
            return Err(CliError::input(
                "stride selection needs an explicit 'ordering' to say which order the kept terms follow",
            ));
        }
        Ok(cfg)
    }
}

fn parse_list<T: FromStr>(v: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| e.to_string()))
        .collect()
}

fn parse_int_list<T>(v: &str) -> Result<Vec<T>, String>
where
    T: FromStr + TryFrom<u64>,
    T::Err: std::fmt::Display,
{
    let mut out = Vec::new();
    for item in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((a, b)) = item.split_once("..") {
            let a: u64 = a.trim().parse().map_err(|_| format!("bad range start in {item:?}"))?;
            let b: u64 = b.trim().parse().map_err(|_| format!("bad range end in {item:?}"))?;
            if a > b {
                return Err(format!("empty range {item:?}"));
            }
            for x in a..=b {
                out.push(T::try_from(x).map_err(|_| format!("{x} out of range"))?);
            }
        } else {
            out.push(item.parse::<T>().map_err(|e| e.to_string())?);
        }
    }
    Ok(out)
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

impl ExperimentConfig {
    /// Resolved settings as `(key, value)` pairs, for echoing into outputs.
    pub fn echo(&self) -> Vec<(&'static str, String)> {
        let o = &self.optimizer;
        vec![
            ("molecule", self.molecule.clone()),
            ("input", self.input.display().to_string()),
            ("encoding", self.encoding.to_string()),
            ("spin_order", self.spin_order.to_string()),
            ("frozen_occupied", join(&self.frozen_occupied)),
            ("removed_virtual", join(&self.removed_virtual)),
            ("n_electrons", self.n_electrons.map_or("auto".into(), |n| n.to_string())),
            ("stride", self.stride.to_string()),
            ("stride_base", self.stride_base.to_string()),
            ("depth", self.depth.to_string()),
            ("depths", join(&self.depths)),
            ("entangler", self.entangler.to_string()),
            ("ordering", self.ordering.label()),
            (
                "orderings",
                self.orderings.iter().map(|o| o.label()).collect::<Vec<_>>().join(","),
            ),
            ("batching", self.batching.to_string()),
            ("carry_hessian", self.carry_hessian.to_string()),
            (
                "methods",
                self.methods.iter().map(|m| m.name()).collect::<Vec<_>>().join(","),
            ),
            ("seeds", join(&self.seeds)),
            ("gradient", o.gradient.method.to_string()),
            ("step", o.gradient.step.to_string()),
            ("max_iterations", o.max_iterations.to_string()),
            ("gradient_tolerance", o.gradient_tolerance.to_string()),
            ("c1", o.c1.to_string()),
            ("c2", o.c2.to_string()),
            ("max_line_search", o.max_line_search.to_string()),
            ("output", self.output.display().to_string()),
            ("jobs", self.jobs.to_string()),
        ]
    }

    pub fn echo_json(&self) -> serde_json::Value {
        serde_json::Value::Object(
            self.echo()
                .into_iter()
                .map(|(k, v)| (k.to_string(), serde_json::Value::String(v)))
                .collect(),
        )
    }
}
