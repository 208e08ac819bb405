//! The structured job report. Integers only; every collection is ordered so
//! that equal jobs serialize to identical bytes (apart from `duration_ms`).

use serde::{Deserialize, Serialize};
use ssfilter_core::families::{Convergence, TemplateLine};
use ssfilter_core::qexact::Field;
use ssfilter_core::ssengine::{BettiTable, CohomologyKind, Page};
use ssfilter_core::GradedDims;

use crate::config::{Artifact, FamilyParams, JobConfig};

pub const SCHEMA: &str = "ssfilter-report/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeRank {
    pub degree: usize,
    pub rank: usize,
}

pub fn degree_ranks(d: &GradedDims) -> Vec<DegreeRank> {
    d.iter().filter(|(_, r)| *r > 0).map(|(degree, rank)| DegreeRank { degree, rank }).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub family: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub g: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub betti: Option<Vec<DegreeRank>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub convention: Option<String>,
    pub artifacts: Vec<Artifact>,
    pub labels: bool,
}

impl ConfigEcho {
    pub fn of(cfg: &JobConfig) -> Self {
        let mut echo = ConfigEcho {
            family: cfg.params.name().slug().into(),
            n: cfg.n,
            g: None,
            r: None,
            m: None,
            betti: None,
            convention: None,
            artifacts: cfg.artifacts.clone(),
            labels: cfg.labels,
        };
        match &cfg.params {
            FamilyParams::UconfPlane => {}
            FamilyParams::UconfGeneral { betti, convention } => {
                echo.betti = Some(degree_ranks(betti));
                echo.convention = Some(
                    match convention {
                        ssfilter_core::families::InputConvention::CompactSupport => "compact-support",
                        ssfilter_core::families::InputConvention::Ordinary => "ordinary",
                    }
                    .into(),
                );
            }
            FamilyParams::Tuples { r } => echo.r = Some(*r),
            FamilyParams::PencilsP1 { m } => echo.m = Some(*m),
            FamilyParams::PencilsCurve { g } => echo.g = Some(*g),
        }
        echo
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellReport {
    pub p: usize,
    pub q: usize,
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub p: usize,
    pub q: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageReport {
    pub page: u8,
    pub family: String,
    pub cells: Vec<CellReport>,
    /// Cells of the column past the valid range, used only as differential
    /// targets.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub boundary: Vec<CellReport>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub differential_ranks: Vec<RankReport>,
    pub differentials_complete: bool,
}

impl PageReport {
    pub fn of<F: Field>(page: &Page<F>, labels: bool) -> Self {
        let cells = |m: &std::collections::BTreeMap<(usize, usize), ssfilter_core::ssengine::Cell>| {
            m.iter()
                .filter(|(_, c)| c.dim > 0)
                .map(|(&(p, q), c)| CellReport {
                    p,
                    q,
                    dim: c.dim,
                    labels: if labels { c.labels.clone() } else { None },
                })
                .collect()
        };
        PageReport {
            page: page.index,
            family: page.family.clone(),
            cells: cells(&page.cells),
            boundary: cells(&page.boundary),
            differential_ranks: page
                .differential_ranks()
                .into_iter()
                .filter(|(_, r)| *r > 0)
                .map(|((p, q), rank)| RankReport { p, q, rank })
                .collect(),
            differentials_complete: page.differentials_complete,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BettiRole {
    /// What the page converges to.
    Abutment,
    /// Ordinary cohomology of the stratum after duality.
    Stratum,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiReport {
    pub role: BettiRole,
    pub kind: CohomologyKind,
    pub dims: Vec<DegreeRank>,
    pub converged_assumed: bool,
    pub valid_up_to_degree: Option<usize>,
    pub valid_from_degree: Option<usize>,
    pub duality_dim: Option<usize>,
}

impl BettiReport {
    pub fn of(role: BettiRole, t: &BettiTable) -> Self {
        BettiReport {
            role,
            kind: t.kind,
            dims: degree_ranks(&t.dims),
            converged_assumed: t.converged_assumed,
            valid_up_to_degree: t.valid_up_to_degree,
            valid_from_degree: t.valid_from_degree,
            duality_dim: t.duality_dim,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Number of instances examined.
    pub instances: usize,
    /// First counterexample, when the check failed.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Explanation {
    pub family: String,
    pub differential: String,
    pub template: Vec<TemplateLine>,
    pub convergence: Option<Convergence>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobReport {
    pub schema: String,
    pub verb: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub config: Option<ConfigEcho>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub pages: Vec<PageReport>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub betti: Vec<BettiReport>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub explanation: Option<Explanation>,
    pub duration_ms: u64,
}

impl JobReport {
    pub fn new(verb: &str) -> Self {
        JobReport {
            schema: SCHEMA.into(),
            verb: verb.into(),
            config: None,
            pages: Vec::new(),
            betti: Vec::new(),
            checks: Vec::new(),
            explanation: None,
            duration_ms: 0,
        }
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}
