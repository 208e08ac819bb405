use std::time::Instant;

use ssfilter_core::families::{
    family_pencils_curve, family_pencils_p1, family_tuples, family_uconf_general, family_uconf_plane, FamilyDescriptor,
    InputConvention,
};
use ssfilter_core::ssengine::{
    betti_from_e2, build_e1, check_d_squared, compute_e2, e1_with_differentials, euler_characteristic,
    stalk_acyclicity_check, EngineError, EngineOptions, Page,
};
use ssfilter_core::{GradedDims, Rational};

use crate::config::{Artifact, FamilyName, FamilyParams, JobConfig};
use crate::error::CliError;
use crate::report::{BettiReport, BettiRole, CheckResult, ConfigEcho, Explanation, JobReport, PageReport};

pub type Family = FamilyDescriptor<Rational>;

/// Reads `SSFILTER_THREADS`: a positive integer, or unset.
pub fn engine_options(threads_var: Option<&str>) -> Result<EngineOptions, CliError> {
    let threads = match threads_var {
        None => None,
        Some(v) => match v.trim().parse::<usize>() {
            Ok(t) if t > 0 => Some(t),
            _ => return Err(CliError::Config(format!("SSFILTER_THREADS must be a positive integer, got '{v}'"))),
        },
    };
    Ok(EngineOptions { threads, ..EngineOptions::default() })
}

pub fn descriptor(params: &FamilyParams, n: usize) -> Result<Family, CliError> {
    Ok(match params {
        FamilyParams::UconfPlane => family_uconf_plane(n),
        FamilyParams::UconfGeneral { betti, convention } => family_uconf_general(betti.clone(), n, *convention),
        FamilyParams::Tuples { r } => family_tuples(*r, n)?,
        FamilyParams::PencilsP1 { m } => family_pencils_p1(*m, n)?,
        FamilyParams::PencilsCurve { g } => family_pencils_curve(*g, n)?,
    })
}

fn elapsed_ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

/// The `compute` verb.
pub fn run(cfg: &JobConfig, opts: &EngineOptions) -> Result<JobReport, CliError> {
    let start = Instant::now();
    let fam = descriptor(&cfg.params, cfg.n)?;
    let mut report = JobReport::new("compute");
    report.config = Some(ConfigEcho::of(cfg));

    let e1 = e1_with_differentials(&fam, opts)?;
    if cfg.wants(Artifact::E1) {
        report.pages.push(PageReport::of(&e1, cfg.labels));
    }
    let needs_e2 = cfg.wants(Artifact::E2) || cfg.wants(Artifact::Betti);
    let e2 = if needs_e2 { Some(compute_e2(&e1)?) } else { None };
    if let (true, Some(e2)) = (cfg.wants(Artifact::E2), &e2) {
        report.pages.push(PageReport::of(e2, cfg.labels));
    }
    if let (true, Some(e2)) = (cfg.wants(Artifact::Betti), &e2) {
        let b = betti_from_e2(&fam, e2)?;
        report.betti.push(BettiReport::of(BettiRole::Abutment, &b.abutment));
        if let Some(o) = &b.ordinary {
            report.betti.push(BettiReport::of(BettiRole::Stratum, o));
        }
    }
    if cfg.wants(Artifact::Checks) {
        report.checks = instance_checks(&fam, &e1);
    }
    report.duration_ms = elapsed_ms(start);
    Ok(report)
}

fn instance_checks(fam: &Family, e1: &Page<Rational>) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let mut dd = Tally::new("d-squared");
    dd.record(fam, check_d_squared(e1));
    out.push(dd.finish());
    let mut chi = Tally::new("euler-conservation");
    chi.record(fam, euler_conserved(e1));
    out.push(chi.finish());
    out
}

fn euler_conserved(e1: &Page<Rational>) -> Result<(), String> {
    match compute_e2(e1) {
        Ok(e2) => {
            let (a, b) = (euler_characteristic(e1), euler_characteristic(&e2));
            if a != b {
                return Err(format!("chi(E1) = {a}, chi(E2) = {b}"));
            }
            Ok(())
        }
        // E2 not defined for this instance: nothing to conserve
        Err(EngineError::Family(_)) => Ok(()),
        Err(e) => Err(e.to_string()),
    }
}

/// Accumulates pass/fail over many instances, keeping the first failure.
struct Tally {
    name: String,
    instances: usize,
    detail: Option<String>,
}

impl Tally {
    fn new(name: &str) -> Self {
        Tally { name: name.into(), instances: 0, detail: None }
    }

    fn record<T, E: std::fmt::Display>(&mut self, fam: &Family, r: Result<T, E>) {
        self.fail_if(&fam.name(), r.err());
    }

    fn fail_if(&mut self, what: &str, e: Option<impl std::fmt::Display>) {
        self.instances += 1;
        if let (Some(e), None) = (e, &self.detail) {
            self.detail = Some(format!("{what}: {e}"));
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult { name: self.name, passed: self.detail.is_none(), instances: self.instances, detail: self.detail }
    }
}

/// Options for the `check` verb.
#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub p_max: usize,
    pub families: Vec<FamilyName>,
    /// Largest `n` in the instance matrix.
    pub n_max: usize,
    /// Test hook: corrupt one differential entry, see [`EngineOptions`].
    pub fault: Option<(usize, usize)>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { p_max: 10, families: FamilyName::ALL.to_vec(), n_max: 10, fault: None }
    }
}

/// Sample spaces for the configuration-space checks, by Betti table.
fn sample_spaces() -> Vec<GradedDims> {
    vec![
        GradedDims::from_pairs([(0, 1), (1, 3)]),
        GradedDims::from_pairs([(0, 1), (1, 1)]),
        GradedDims::from_pairs([(0, 1)]),
        GradedDims::from_pairs([(0, 1), (2, 1)]),
        GradedDims::from_pairs([(0, 1), (1, 4), (2, 1)]),
        GradedDims::from_pairs([(0, 1), (2, 1), (4, 1)]),
    ]
}

/// The builtin instance matrix: `n <= n_max`, `g <= 2`, `r <= 3`.
pub fn instance_matrix(families: &[FamilyName], n_max: usize) -> Vec<Family> {
    let mut out = Vec::new();
    for f in families {
        match f {
            FamilyName::UconfPlane => out.extend((2..=n_max).map(family_uconf_plane)),
            FamilyName::UconfGeneral => {
                for dims in sample_spaces() {
                    out.extend(
                        (0..=n_max.min(6))
                            .map(|n| family_uconf_general(dims.clone(), n, InputConvention::CompactSupport)),
                    );
                }
            }
            FamilyName::Tuples => {
                out.extend((1..=3).flat_map(|r| (2..=n_max).filter_map(move |n| family_tuples(r, n).ok())))
            }
            FamilyName::PencilsP1 => out.extend((2..=n_max).filter_map(|n| family_pencils_p1(1, n).ok())),
            FamilyName::PencilsCurve => {
                out.extend((0..=2).flat_map(|g| (2..=n_max).filter_map(move |n| family_pencils_curve(g, n).ok())))
            }
        }
    }
    out
}

/// Falling binomial `C(chi, n)`, the Euler characteristic of `n` unordered
/// distinct points.
fn configuration_chi(chi: i64, n: usize) -> i128 {
    let (mut num, mut den) = (1i128, 1i128);
    for i in 0..n as i128 {
        num *= chi as i128 - i;
        den *= i + 1;
    }
    num / den
}

/// The `check` verb.
pub fn check(o: &CheckOptions, opts: &EngineOptions) -> JobReport {
    let start = Instant::now();
    let mut report = JobReport::new("check");
    let opts = EngineOptions { flip_entry: o.fault, ..opts.clone() };

    let mut stalk = Tally::new("stalk-acyclicity");
    for r in stalk_acyclicity_check::<Rational>(o.p_max) {
        let bad = (!r.exact).then(|| format!("middle cohomology {:?}", r.cohomology));
        stalk.fail_if(&format!("p = {}", r.p), bad);
    }
    report.checks.push(stalk.finish());

    let fams = instance_matrix(&o.families, o.n_max);
    let mut dd = Tally::new("d-squared");
    let mut chi = Tally::new("euler-conservation");
    let mut conf = Tally::new("configuration-euler");
    for fam in &fams {
        let e1 = e1_with_differentials(fam, &opts);
        match e1 {
            Ok(e1) => {
                dd.record(fam, check_d_squared(&e1));
                chi.record(fam, euler_conserved(&e1));
            }
            Err(e) => dd.record::<(), _>(fam, Err(e)),
        }
        if let ssfilter_core::families::FamilyKind::UconfGeneral { dims, .. } = fam.kind() {
            let got = build_e1(fam, &opts).map(|p| euler_characteristic(&p));
            let want = configuration_chi(dims.euler_characteristic(), fam.n());
            let bad = match got {
                Ok(c) if c == want => None,
                Ok(c) => Some(format!("chi(E1) = {c}, expected {want}")),
                Err(e) => Some(e.to_string()),
            };
            conf.fail_if(&fam.name(), bad);
        }
    }
    report.checks.push(dd.finish());
    report.checks.push(chi.finish());
    if conf.instances > 0 {
        report.checks.push(conf.finish());
    }

    if o.families.contains(&FamilyName::PencilsCurve) && o.families.contains(&FamilyName::PencilsP1) {
        let mut red = Tally::new("genus-zero-reduction");
        for n in 2..=o.n_max {
            let bad = genus_zero_mismatch(n, &opts).err();
            red.fail_if(&format!("n = {n}"), bad);
        }
        report.checks.push(red.finish());
    }
    report.duration_ms = elapsed_ms(start);
    report
}

fn genus_zero_mismatch(n: usize, opts: &EngineOptions) -> Result<(), String> {
    let pages = |fam: Result<Family, ssfilter_core::families::FamilyError>| -> Result<_, String> {
        let fam = fam.map_err(|e| e.to_string())?;
        let e1 = e1_with_differentials(&fam, opts).map_err(|e| e.to_string())?;
        let e2 = compute_e2(&e1).map_err(|e| e.to_string())?;
        let b = betti_from_e2(&fam, &e2).map_err(|e| e.to_string())?;
        Ok((e1.dims(), e1.differential_ranks(), e2.dims(), b))
    };
    let a = pages(family_pencils_curve(0, n))?;
    let b = pages(family_pencils_p1(1, n))?;
    let ranks = |m: &std::collections::BTreeMap<(usize, usize), usize>| {
        m.iter().filter(|(_, r)| **r > 0).map(|(k, r)| (*k, *r)).collect::<Vec<_>>()
    };
    if a.0 != b.0 {
        return Err("E1 differs".into());
    }
    if ranks(&a.1) != ranks(&b.1) {
        return Err("differential ranks differ".into());
    }
    if a.2 != b.2 {
        return Err("E2 differs".into());
    }
    if a.3.ordinary.map(|t| t.dims) != b.3.ordinary.map(|t| t.dims) {
        return Err("Betti tables differ".into());
    }
    Ok(())
}

/// The `explain` verb: the differential template and conventions of a family.
pub fn explain(params: &FamilyParams, n: usize) -> Result<JobReport, CliError> {
    let fam = descriptor(params, n)?;
    let mut report = JobReport::new("explain");
    let mut notes = vec![
        format!(
            "filter gap e = {}; columns p = 0..={} ({})",
            fam.filter_gap(),
            fam.max_valid_column(),
            fam.column_constraint()
        ),
        "E1^{p,q} = (Sym of odd classes (x) Lambda of even classes)^p of M, degree l, (x) H^m(X_{n-ep}), l + m = q"
            .into(),
    ];
    if let Some(b) = fam.boundary_column() {
        notes.push(format!("column {b} is built only as the target of the last differential"));
    }
    if fam.has_differentials() {
        notes.push(
            "<i> marks the inserted slot; source slot j goes to slot j (j < i) or j + 1 (j >= i) with its Koszul sign"
                .into(),
        );
        notes.push("matrices are taken on sign-twisted invariant bases; the global sign is opposite to writing d_1(c1) = c1 - 2e".into());
    }
    if let FamilyParams::PencilsCurve { .. } = params {
        notes.push("the alternating sum sends a_r to -(a_r + alpha_r) at p = 0; at odd p the a_r terms cancel and the alpha_r slot sum carries the face sign (-1)^i".into());
    }
    if fam.degeneration_assumed() {
        notes.push("E2 = E-infinity is assumed (smooth projective family)".into());
    } else {
        notes.push("E2 = E-infinity only when no two E2 cells can be joined by a higher differential".into());
    }
    if let Some(d) = fam.duality_dim() {
        notes.push(format!("duality uses complex dimension {d}"));
    }
    report.explanation = Some(Explanation {
        family: fam.name(),
        differential: if fam.has_differentials() {
            "d_{p+1} = sum_{i=1}^{p+1} (-1)^i f_{p,i}^*".into()
        } else {
            "no differentials on presented rings; Betti-level page only".into()
        },
        template: fam.template(),
        convergence: Some(fam.convergence()),
        notes,
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thread_variable() {
        assert_eq!(engine_options(None).unwrap().threads, None);
        assert_eq!(engine_options(Some("3")).unwrap().threads, Some(3));
        assert!(engine_options(Some("0")).is_err());
        assert!(engine_options(Some("many")).is_err());
    }

    #[test]
    fn configuration_chi_is_a_falling_binomial() {
        assert_eq!(configuration_chi(2, 2), 1);
        assert_eq!(configuration_chi(-2, 3), -4);
        assert_eq!(configuration_chi(1, 0), 1);
    }
}
