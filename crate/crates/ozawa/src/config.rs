use std::fmt;
use std::path::Path;
use std::str::FromStr;

use ozawa_core::group::split_element_list;
use ozawa_core::{Element, ExactRational, Group};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("cannot serialize config: {0}")]
    Serialize(#[from] toml::ser::Error),
    #[error("invalid {what} `{input}`")]
    Invalid { what: &'static str, input: String },
    #[error(transparent)]
    Core(#[from] ozawa_core::Error),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// `ball:r` (the ball of radius `r` minus the identity) or `list:x,y,…`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementSetSpec {
    PuncturedBall(usize),
    List(Vec<String>),
}

impl ElementSetSpec {
    pub fn resolve(&self, group: &Group) -> ozawa_core::Result<Vec<Element>> {
        match self {
            ElementSetSpec::PuncturedBall(r) => {
                let e = group.identity();
                Ok(group.ball(*r)?.into_iter().filter(|x| *x != e).collect())
            }
            ElementSetSpec::List(items) => {
                let mut out: Vec<Element> = Vec::with_capacity(items.len());
                for s in items {
                    let x = group.parse_element(s)?;
                    if !out.contains(&x) {
                        out.push(x);
                    }
                }
                Ok(out)
            }
        }
    }
}

impl FromStr for ElementSetSpec {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        let invalid = || ConfigError::Invalid {
            what: "element set",
            input: s.to_string(),
        };
        match s.trim().split_once(':') {
            Some(("ball", r)) => r.trim().parse().map(ElementSetSpec::PuncturedBall).map_err(|_| invalid()),
            Some(("list", items)) => Ok(ElementSetSpec::List(split_element_list(items))),
            _ => Err(invalid()),
        }
    }
}

impl fmt::Display for ElementSetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementSetSpec::PuncturedBall(r) => write!(f, "ball:{r}"),
            ElementSetSpec::List(items) => write!(f, "list:{}", items.join(",")),
        }
    }
}

/// Inclusive level range `a..b`, or a single level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelRange {
    pub start: usize,
    pub end: usize,
}

impl LevelRange {
    pub fn levels(&self) -> impl Iterator<Item = usize> {
        self.start..=self.end
    }
}

impl FromStr for LevelRange {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        let invalid = || ConfigError::Invalid {
            what: "level range",
            input: s.to_string(),
        };
        let (a, b) = match s.trim().split_once("..") {
            Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
            None => (s, s),
        };
        let start = a.trim().parse().map_err(|_| invalid())?;
        let end = b.trim().parse().map_err(|_| invalid())?;
        if start > end {
            return Err(invalid());
        }
        Ok(LevelRange { start, end })
    }
}

impl fmt::Display for LevelRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

/// Settings for one run. Every field mirrors a command-line flag; a TOML file
/// with the same keys can supply any of them.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub group: Option<String>,
    pub kernel: Option<String>,
    pub n: Option<String>,
    #[serde(rename = "E")]
    pub e: Option<String>,
    pub eps: Option<String>,
    pub nmax: Option<usize>,
    pub sample_radius: Option<usize>,
    pub random: Option<usize>,
    pub seed: Option<u64>,
    pub format: Option<OutputFormat>,
    pub budget: Option<usize>,
}

pub const DEFAULT_EPSILON: &str = "1/10";
pub const DEFAULT_ELEMENT_SET: &str = "ball:1";
pub const DEFAULT_NMAX: usize = 50;
pub const DEFAULT_SAMPLE_RADIUS: usize = 2;

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text)
    }

    /// Canonical TOML: fixed key order, normalized values, unset keys omitted.
    pub fn to_toml(&self) -> Result<String, ConfigError> {
        let mut canonical = self.clone();
        canonical.normalize()?;
        Ok(toml::to_string(&canonical)?)
    }

    fn normalize(&mut self) -> Result<(), ConfigError> {
        if let Some(g) = &self.group {
            self.group = Some(g.parse::<ozawa_core::GroupKind>()?.to_string());
        }
        if let Some(k) = &self.kernel {
            self.kernel = Some(k.parse::<ozawa_core::verifier::KernelTag>()?.to_string());
        }
        if let Some(n) = &self.n {
            let r: LevelRange = n.parse()?;
            self.n = Some(if r.start == r.end { r.start.to_string() } else { r.to_string() });
        }
        if let Some(e) = &self.e {
            self.e = Some(e.parse::<ElementSetSpec>()?.to_string());
        }
        if let Some(eps) = &self.eps {
            self.eps = Some(eps.parse::<ExactRational>()?.to_string());
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.clone().normalize()
    }

    /// Fields set in `overrides` replace those in `self`.
    pub fn merged_with(&self, overrides: &RunConfig) -> RunConfig {
        macro_rules! pick {
            ($($f:ident),*) => { RunConfig { $($f: overrides.$f.clone().or_else(|| self.$f.clone())),* } };
        }
        pick!(group, kernel, n, e, eps, nmax, sample_radius, random, seed, format, budget)
    }

    pub fn epsilon(&self) -> Result<ExactRational, ConfigError> {
        Ok(self.eps.as_deref().unwrap_or(DEFAULT_EPSILON).parse()?)
    }

    pub fn element_set(&self) -> Result<ElementSetSpec, ConfigError> {
        self.e.as_deref().unwrap_or(DEFAULT_ELEMENT_SET).parse()
    }

    pub fn levels(&self) -> Result<Option<LevelRange>, ConfigError> {
        self.n.as_deref().map(str::parse).transpose()
    }
}
