//! Job configuration: a flat `key = value` file with an optional `[betti]`
//! block of `degree rank` lines. Command-line flags override file values.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use ssfilter_core::families::InputConvention;
use ssfilter_core::GradedDims;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyName {
    UconfPlane,
    UconfGeneral,
    Tuples,
    PencilsP1,
    PencilsCurve,
}

impl FamilyName {
    pub const ALL: [FamilyName; 5] = [
        FamilyName::UconfPlane,
        FamilyName::UconfGeneral,
        FamilyName::Tuples,
        FamilyName::PencilsP1,
        FamilyName::PencilsCurve,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            FamilyName::UconfPlane => "uconf-plane",
            FamilyName::UconfGeneral => "uconf-general",
            FamilyName::Tuples => "tuples",
            FamilyName::PencilsP1 => "pencils-p1",
            FamilyName::PencilsCurve => "pencils-curve",
        }
    }
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for FamilyName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FamilyName::ALL
            .into_iter()
            .find(|f| f.slug() == s)
            .ok_or_else(|| format!("unknown family '{s}' (expected one of: {})", slugs()))
    }
}

fn slugs() -> String {
    FamilyName::ALL.map(|f| f.slug()).join(", ")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format '{s}' (expected text, json or csv)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Artifact {
    E1,
    E2,
    Betti,
    Checks,
}

impl FromStr for Artifact {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "e1" => Ok(Artifact::E1),
            "e2" => Ok(Artifact::E2),
            "betti" => Ok(Artifact::Betti),
            "checks" => Ok(Artifact::Checks),
            _ => Err(format!("unknown artifact '{s}' (expected e1, e2, betti or checks)")),
        }
    }
}

/// Parses a comma-separated artifact list, sorted and deduplicated.
pub fn parse_artifacts(s: &str) -> Result<Vec<Artifact>, String> {
    let mut out =
        s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(Artifact::from_str).collect::<Result<Vec<_>, _>>()?;
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err("no artifacts requested".into());
    }
    Ok(out)
}

/// Parses `degree:rank` pairs separated by commas, e.g. `0:1,2:1`.
pub fn parse_betti_inline(s: &str) -> Result<GradedDims, String> {
    let mut dims = GradedDims::new();
    for part in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (d, r) = part.split_once(':').ok_or_else(|| format!("expected degree:rank, got '{part}'"))?;
        dims.add(parse_nat(d.trim(), "degree")?, parse_nat(r.trim(), "rank")?);
    }
    Ok(dims)
}

fn parse_nat(s: &str, what: &str) -> Result<usize, String> {
    s.parse().map_err(|_| format!("{what} must be a nonnegative integer, got '{s}'"))
}

fn parse_convention(s: &str) -> Result<InputConvention, String> {
    match s {
        "compact-support" => Ok(InputConvention::CompactSupport),
        "ordinary" => Ok(InputConvention::Ordinary),
        _ => Err(format!("unknown convention '{s}' (expected compact-support or ordinary)")),
    }
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("expected true or false, got '{s}'")),
    }
}

/// Every field optional: the merge of a config file and command-line flags.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PartialConfig {
    pub family: Option<FamilyName>,
    pub n: Option<usize>,
    pub g: Option<usize>,
    pub r: Option<usize>,
    pub m: Option<usize>,
    pub betti: Option<GradedDims>,
    pub convention: Option<InputConvention>,
    pub format: Option<Format>,
    pub artifacts: Option<Vec<Artifact>>,
    pub labels: Option<bool>,
    pub out: Option<String>,
}

impl PartialConfig {
    /// Parses the flat file format. Unknown keys are errors.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = PartialConfig::default();
        let mut in_betti = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| CliError::Config(format!("line {}: {msg}", lineno + 1));
            if line.starts_with('[') {
                if line != "[betti]" {
                    return Err(err(format!("unknown section {line}")));
                }
                if cfg.betti.is_some() {
                    return Err(err("duplicate [betti] block".into()));
                }
                in_betti = true;
                cfg.betti = Some(GradedDims::new());
                continue;
            }
            if in_betti {
                let mut parts = line.split_whitespace();
                let (Some(d), Some(r), None) = (parts.next(), parts.next(), parts.next()) else {
                    return Err(err(format!("expected 'degree rank', got '{line}'")));
                };
                let (d, r) = (parse_nat(d, "degree").map_err(err)?, parse_nat(r, "rank").map_err(err)?);
                cfg.betti.as_mut().expect("block opened").add(d, r);
                continue;
            }
            let (key, value) =
                line.split_once('=').ok_or_else(|| err(format!("expected key = value, got '{line}'")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "family" => cfg.family = Some(value.parse().map_err(err)?),
                "n" => cfg.n = Some(parse_nat(value, "n").map_err(err)?),
                "g" | "genus" => cfg.g = Some(parse_nat(value, "g").map_err(err)?),
                "r" => cfg.r = Some(parse_nat(value, "r").map_err(err)?),
                "m" => cfg.m = Some(parse_nat(value, "m").map_err(err)?),
                "betti" => cfg.betti = Some(parse_betti_inline(value).map_err(err)?),
                "convention" => cfg.convention = Some(parse_convention(value).map_err(err)?),
                "format" => cfg.format = Some(value.parse().map_err(err)?),
                "artifacts" => cfg.artifacts = Some(parse_artifacts(value).map_err(err)?),
                "labels" => cfg.labels = Some(parse_bool(value).map_err(err)?),
                "out" => cfg.out = Some(value.to_string()),
                _ => return Err(err(format!("unknown key '{key}'"))),
            }
        }
        Ok(cfg)
    }

    /// Values set in `other` win.
    pub fn overridden_by(self, other: PartialConfig) -> PartialConfig {
        PartialConfig {
            family: other.family.or(self.family),
            n: other.n.or(self.n),
            g: other.g.or(self.g),
            r: other.r.or(self.r),
            m: other.m.or(self.m),
            betti: other.betti.or(self.betti),
            convention: other.convention.or(self.convention),
            format: other.format.or(self.format),
            artifacts: other.artifacts.or(self.artifacts),
            labels: other.labels.or(self.labels),
            out: other.out.or(self.out),
        }
    }

    /// Checks that the parameter set matches the family and fills defaults.
    pub fn finish(self) -> Result<JobConfig, CliError> {
        let family = self.family.ok_or_else(|| CliError::Config("no family given".into()))?;
        let n = self.n.ok_or_else(|| CliError::Config(format!("{family} needs n")))?;
        let allowed: &[&str] = match family {
            FamilyName::UconfPlane => &[],
            FamilyName::UconfGeneral => &["betti", "convention"],
            FamilyName::Tuples => &["r"],
            FamilyName::PencilsP1 => &["m"],
            FamilyName::PencilsCurve => &["g"],
        };
        let given = [
            ("g", self.g.is_some()),
            ("r", self.r.is_some()),
            ("m", self.m.is_some()),
            ("betti", self.betti.is_some()),
            ("convention", self.convention.is_some()),
        ];
        for (name, set) in given {
            if set && !allowed.contains(&name) {
                return Err(CliError::Config(format!("parameter {name} does not apply to {family}")));
            }
        }
        let params = match family {
            FamilyName::UconfPlane => FamilyParams::UconfPlane,
            FamilyName::UconfGeneral => FamilyParams::UconfGeneral {
                betti: self.betti.ok_or_else(|| CliError::Config("uconf-general needs a Betti table".into()))?,
                convention: self.convention.unwrap_or(InputConvention::CompactSupport),
            },
            FamilyName::Tuples => {
                FamilyParams::Tuples { r: self.r.ok_or_else(|| CliError::Config("tuples needs r".into()))? }
            }
            FamilyName::PencilsP1 => FamilyParams::PencilsP1 { m: self.m.unwrap_or(1) },
            FamilyName::PencilsCurve => FamilyParams::PencilsCurve {
                g: self.g.ok_or_else(|| CliError::Config("pencils-curve needs g".into()))?,
            },
        };
        Ok(JobConfig {
            params,
            n,
            format: self.format.unwrap_or_default(),
            artifacts: self.artifacts.unwrap_or_else(|| vec![Artifact::Betti]),
            labels: self.labels.unwrap_or(false),
            out: self.out,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilyParams {
    UconfPlane,
    UconfGeneral { betti: GradedDims, convention: InputConvention },
    Tuples { r: usize },
    PencilsP1 { m: usize },
    PencilsCurve { g: usize },
}

impl FamilyParams {
    pub fn name(&self) -> FamilyName {
        match self {
            FamilyParams::UconfPlane => FamilyName::UconfPlane,
            FamilyParams::UconfGeneral { .. } => FamilyName::UconfGeneral,
            FamilyParams::Tuples { .. } => FamilyName::Tuples,
            FamilyParams::PencilsP1 { .. } => FamilyName::PencilsP1,
            FamilyParams::PencilsCurve { .. } => FamilyName::PencilsCurve,
        }
    }
}

/// A validated job.
#[derive(Clone, Debug, PartialEq)]
pub struct JobConfig {
    pub params: FamilyParams,
    pub n: usize,
    pub format: Format,
    pub artifacts: Vec<Artifact>,
    pub labels: bool,
    pub out: Option<String>,
}

impl JobConfig {
    pub fn wants(&self, a: Artifact) -> bool {
        self.artifacts.contains(&a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_with_betti_block() {
        let cfg = PartialConfig::parse(
            "# a curve\nfamily = uconf-general\nn = 3\nconvention = ordinary\n\n[betti]\n0 1\n1 4   # H^1\n2 1\n",
        )
        .unwrap()
        .finish()
        .unwrap();
        assert_eq!(
            cfg.params,
            FamilyParams::UconfGeneral {
                betti: GradedDims::from_pairs([(0, 1), (1, 4), (2, 1)]),
                convention: InputConvention::Ordinary
            }
        );
        assert_eq!(cfg.artifacts, vec![Artifact::Betti]);
    }

    #[test]
    fn flags_override_file() {
        let file = PartialConfig::parse("family = pencils-curve\ng = 1\nn = 4\nformat = csv\n").unwrap();
        let flags = PartialConfig { n: Some(6), format: Some(Format::Json), ..Default::default() };
        let cfg = file.overridden_by(flags).finish().unwrap();
        assert_eq!((cfg.n, cfg.format), (6, Format::Json));
        assert_eq!(cfg.params, FamilyParams::PencilsCurve { g: 1 });
    }

    #[test]
    fn diagnostics_name_the_line() {
        let e = PartialConfig::parse("family = uconf-plane\nn = five\n").unwrap_err();
        assert_eq!(e.to_string(), "configuration error: line 2: n must be a nonnegative integer, got 'five'");
        let e = PartialConfig::parse("colour = red").unwrap_err();
        assert!(e.to_string().contains("unknown key 'colour'"));
        let e = PartialConfig::parse("[betti]\n0 1 2\n").unwrap_err();
        assert!(e.to_string().contains("line 2"));
    }

    #[test]
    fn parameters_must_match_the_family() {
        let e = PartialConfig::parse("family = uconf-plane\nn = 3\ng = 1\n").unwrap().finish().unwrap_err();
        assert!(matches!(e, CliError::Config(_)));
        let e = PartialConfig::parse("family = tuples\nn = 3\n").unwrap().finish().unwrap_err();
        assert!(e.to_string().contains("needs r"));
    }

    #[test]
    fn artifact_lists() {
        assert_eq!(parse_artifacts("betti, e1,e1").unwrap(), vec![Artifact::E1, Artifact::Betti]);
        assert!(parse_artifacts("e3").is_err());
        assert_eq!(parse_betti_inline("0:1, 2:1").unwrap(), GradedDims::from_pairs([(0, 1), (2, 1)]));
    }
}
