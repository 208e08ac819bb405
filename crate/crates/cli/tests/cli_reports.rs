use std::collections::BTreeMap;
use std::process::{Command, Output};

use ssfilter_cli::config::{Artifact, FamilyParams, Format, JobConfig};
use ssfilter_cli::render::{json, render, text};
use ssfilter_cli::report::{BettiRole, JobReport};
use ssfilter_cli::{check, explain, run, CheckOptions, CliError, FamilyName, PartialConfig, SCHEMA};
use ssfilter_core::ssengine::EngineOptions;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ssfilter"));
    c.env_remove("SSFILTER_THREADS");
    c
}

fn exec(c: &mut Command) -> (i32, String, String) {
    let Output { status, stdout, stderr } = c.output().unwrap();
    (status.code().unwrap(), String::from_utf8(stdout).unwrap(), String::from_utf8(stderr).unwrap())
}

fn job(params: FamilyParams, n: usize, artifacts: &[Artifact]) -> JobConfig {
    JobConfig { params, n, format: Format::Json, artifacts: artifacts.to_vec(), labels: true, out: None }
}

fn all_artifacts() -> Vec<Artifact> {
    vec![Artifact::E1, Artifact::E2, Artifact::Betti, Artifact::Checks]
}

fn sample_reports() -> Vec<JobReport> {
    let o = EngineOptions::default();
    let mut out: Vec<JobReport> = [
        job(FamilyParams::UconfPlane, 5, &all_artifacts()),
        job(FamilyParams::PencilsP1 { m: 1 }, 4, &all_artifacts()),
        job(FamilyParams::PencilsCurve { g: 1 }, 4, &all_artifacts()),
        job(FamilyParams::Tuples { r: 3 }, 4, &all_artifacts()),
    ]
    .iter()
    .map(|c| run(c, &o).unwrap())
    .collect();
    out.push(explain(&FamilyParams::PencilsCurve { g: 2 }, 6).unwrap());
    let small = CheckOptions { p_max: 4, families: vec![FamilyName::PencilsP1], n_max: 5, fault: None };
    out.push(check(&small, &o));
    out
}

#[test]
fn json_round_trips() {
    for r in sample_reports() {
        let s = json(&r).unwrap();
        let back: JobReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.schema, SCHEMA);
    }
}

/// Numbers pulled out of the text rendering, section by section.
fn text_numbers(s: &str) -> BTreeMap<String, Vec<Vec<usize>>> {
    let mut out: BTreeMap<String, Vec<Vec<usize>>> = BTreeMap::new();
    let mut section = String::new();
    for line in s.lines() {
        if line.starts_with("E1 ") || line.starts_with("E2 ") {
            section = line[..2].to_string();
        } else if let Some(rest) = line.strip_prefix("betti ") {
            section = format!("betti {}", rest.split(' ').next().unwrap());
        } else if line.is_empty() || !line.starts_with(' ') {
            section.clear();
        } else if !section.is_empty() {
            let nums: Option<Vec<usize>> = line.split_whitespace().map(|t| t.parse().ok()).collect();
            if let Some(nums) = nums {
                out.entry(section.clone()).or_default().push(nums);
            }
        }
    }
    out
}

#[test]
fn text_and_json_agree() {
    for r in sample_reports().into_iter().filter(|r| r.verb == "compute") {
        let t = text_numbers(&text(&r));
        for page in &r.pages {
            let rows: Vec<Vec<usize>> = page.cells.iter().map(|c| vec![c.p, c.q, c.dim]).collect();
            let got: Vec<Vec<usize>> = t[&format!("E{}", page.page)].iter().filter(|v| v.len() == 3).cloned().collect();
            let boundary: Vec<Vec<usize>> = page.boundary.iter().map(|c| vec![c.p, c.q, c.dim]).collect();
            assert_eq!(got, rows, "E{} cells", page.page);
            assert!(boundary.is_empty() || text(&r).contains("boundary"));
        }
        for b in &r.betti {
            let role = if b.role == BettiRole::Abutment { "abutment" } else { "stratum" };
            let rows: Vec<Vec<usize>> = b.dims.iter().map(|d| vec![d.degree, d.rank]).collect();
            assert_eq!(t[&format!("betti {role}")], rows);
        }
    }
}

#[test]
fn csv_has_one_row_per_record() {
    let r = run(&job(FamilyParams::PencilsP1 { m: 1 }, 4, &all_artifacts()), &EngineOptions::default()).unwrap();
    let s = render(&r, Format::Csv).unwrap();
    let mut rd = csv::Reader::from_reader(s.as_bytes());
    let rows: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
    let cells = r.pages.iter().map(|p| p.cells.len() + p.boundary.len() + p.differential_ranks.len()).sum::<usize>();
    let betti = r.betti.iter().map(|b| b.dims.len()).sum::<usize>();
    assert_eq!(rows.len(), cells + betti + r.checks.len());
    assert!(rows.iter().any(|row| &row[0] == "cell" && &row[1] == "E2" && &row[3] == "12" && &row[5] == "1"));
}

#[test]
fn output_is_deterministic() {
    let threads = |t| EngineOptions { threads: Some(t), ..EngineOptions::default() };
    let cfg = job(FamilyParams::PencilsCurve { g: 1 }, 5, &all_artifacts());
    let mut a = run(&cfg, &threads(1)).unwrap();
    let mut b = run(&cfg, &threads(4)).unwrap();
    a.duration_ms = 0;
    b.duration_ms = 0;
    assert_eq!(json(&a).unwrap(), json(&b).unwrap());
}

#[test]
fn documented_examples() {
    let o = EngineOptions::default();
    let r = run(&job(FamilyParams::UconfPlane, 5, &[Artifact::Betti]), &o).unwrap();
    let ab = r.betti.iter().find(|b| b.role == BettiRole::Abutment).unwrap();
    let dims: Vec<(usize, usize)> = ab.dims.iter().map(|d| (d.degree, d.rank)).collect();
    assert_eq!(dims, [(9, 1), (10, 1)]);

    let r = run(&job(FamilyParams::PencilsP1 { m: 1 }, 4, &[Artifact::E2]), &o).unwrap();
    let cells: Vec<(usize, usize, usize)> = r.pages[0].cells.iter().map(|c| (c.p, c.q, c.dim)).collect();
    assert_eq!(cells, [(0, 12, 1)]);

    let err = run(&job(FamilyParams::PencilsCurve { g: 3 }, 5, &[Artifact::Betti]), &o).unwrap_err();
    assert!(matches!(err, CliError::Range(_)), "{err:?}");
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn flags_override_config_file() {
    let file = PartialConfig::parse("family = pencils-curve\ng = 1\nn = 4\nformat = csv\n").unwrap();
    let flags = PartialConfig { n: Some(5), format: Some(Format::Json), ..PartialConfig::default() };
    let cfg = file.overridden_by(flags).finish().unwrap();
    assert_eq!(cfg.n, 5);
    assert_eq!(cfg.format, Format::Json);
    assert_eq!(cfg.params, FamilyParams::PencilsCurve { g: 1 });

    let dir = std::env::temp_dir().join(format!("ssfilter-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("job.conf");
    std::fs::write(&path, "# pencils\nfamily = pencils-p1\nm = 1\nn = 3\nartifacts = e2\n").unwrap();
    let (code, out, _) = exec(bin().args(["compute", "--config"]).arg(&path).args(["--n", "4", "--format", "json"]));
    assert_eq!(code, 0);
    let r: JobReport = serde_json::from_str(&out).unwrap();
    assert_eq!(r.config.unwrap().n, 4);
    assert_eq!(r.pages[0].cells.len(), 1);
    assert_eq!(r.pages[0].cells[0].q, 12);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    let (code, out, _) = exec(bin().args(["compute", "--family", "uconf-plane", "--n", "3"]));
    assert_eq!(code, 0);
    assert!(out.starts_with(SCHEMA));

    let (code, _, err) = exec(bin().args(["compute", "--family", "pencils-curve", "-g", "3", "--n", "5"]));
    assert_eq!(code, 3, "{err}");

    let (code, _, err) = exec(bin().args(["compute", "--family", "pencils-p1"]));
    assert_eq!(code, 2, "{err}");

    let (code, _, _) =
        exec(bin().args(["compute", "--family", "uconf-plane", "--n", "3"]).env("SSFILTER_THREADS", "0"));
    assert_eq!(code, 2);

    let (code, _, _) =
        exec(bin().args(["compute", "--family", "uconf-plane", "--n", "3"]).env("SSFILTER_THREADS", "2"));
    assert_eq!(code, 0);

    let (code, _, _) = exec(bin().args(["explain", "--family", "pencils-curve", "-g", "1", "--n", "4"]));
    assert_eq!(code, 0);
}

#[test]
fn check_verb_passes_and_catches_an_injected_fault() {
    let base = ["check", "--families", "pencils-p1", "--nmax", "6", "--pmax", "6", "--format", "json"];
    let (code, out, _) = exec(bin().args(base));
    assert_eq!(code, 0);
    let r: JobReport = serde_json::from_str(&out).unwrap();
    assert!(r.checks.iter().all(|c| c.passed && c.instances > 0), "{:?}", r.checks);

    let (code, out, _) = exec(bin().args(base).args(["--inject-fault", "0,2"]));
    assert_eq!(code, 4);
    let r: JobReport = serde_json::from_str(&out).unwrap();
    let dd = r.checks.iter().find(|c| c.name == "d-squared").unwrap();
    assert!(!dd.passed);
    assert!(dd.detail.as_deref().unwrap().contains("(0, 2)"), "{:?}", dd.detail);
}
