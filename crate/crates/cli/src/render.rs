use std::fmt::Write as _;

use crate::config::Format;
use crate::error::CliError;
use crate::report::{BettiRole, JobReport};

pub fn render(report: &JobReport, format: Format) -> Result<String, CliError> {
    match format {
        Format::Text => Ok(text(report)),
        Format::Json => json(report),
        Format::Csv => csv(report),
    }
}

pub fn json(report: &JobReport) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(report).map_err(|e| CliError::Invariant(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn opt(v: Option<usize>) -> String {
    v.map_or_else(|| "-".into(), |x| x.to_string())
}

fn kebab<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_value(v).ok().and_then(|j| j.as_str().map(str::to_string)).unwrap_or_default()
}

fn role(r: BettiRole) -> &'static str {
    match r {
        BettiRole::Abutment => "abutment",
        BettiRole::Stratum => "stratum",
    }
}

/// Plain text: one section per page, Betti table and check block.
pub fn text(report: &JobReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {}", report.schema, report.verb);
    if let Some(c) = &report.config {
        let mut params = vec![format!("n={}", c.n)];
        params.extend(c.g.map(|g| format!("g={g}")));
        params.extend(c.r.map(|r| format!("r={r}")));
        params.extend(c.m.map(|m| format!("m={m}")));
        if let Some(b) = &c.betti {
            let t: Vec<String> = b.iter().map(|d| format!("{}:{}", d.degree, d.rank)).collect();
            params.push(format!("betti={}", t.join(",")));
        }
        params.extend(c.convention.as_ref().map(|v| format!("convention={v}")));
        let _ = writeln!(s, "family {} {}", c.family, params.join(" "));
    }
    for page in &report.pages {
        let _ = writeln!(s, "\nE{} {}", page.page, page.family);
        if !page.differentials_complete {
            let _ = writeln!(s, "  (differentials between interacting cells are unknown)");
        }
        let _ = writeln!(s, "  {:>4} {:>4} {:>8}", "p", "q", "dim");
        for c in &page.cells {
            let _ = writeln!(s, "  {:>4} {:>4} {:>8}", c.p, c.q, c.dim);
            for l in c.labels.iter().flatten() {
                let _ = writeln!(s, "             {l}");
            }
        }
        for c in &page.boundary {
            let _ = writeln!(s, "  {:>4} {:>4} {:>8}  boundary", c.p, c.q, c.dim);
        }
        if !page.differential_ranks.is_empty() {
            let _ = writeln!(s, "  differential ranks");
            for r in &page.differential_ranks {
                let _ = writeln!(s, "  rank d({:>2},{:>3}) = {}", r.p, r.q, r.rank);
            }
        }
    }
    for b in &report.betti {
        let _ = writeln!(
            s,
            "\nbetti {} {} converged_assumed={} valid_up_to={} valid_from={} duality_dim={}",
            role(b.role),
            kebab(&b.kind),
            b.converged_assumed,
            opt(b.valid_up_to_degree),
            opt(b.valid_from_degree),
            opt(b.duality_dim),
        );
        let _ = writeln!(s, "  {:>6} {:>8}", "degree", "rank");
        for d in &b.dims {
            let _ = writeln!(s, "  {:>6} {:>8}", d.degree, d.rank);
        }
    }
    if let Some(x) = &report.explanation {
        let _ = writeln!(s, "\n{}", x.family);
        let _ = writeln!(s, "  {}", x.differential);
        for t in &x.template {
            let _ = writeln!(s, "  {} -> {}", t.generator, t.image);
        }
        if let Some(c) = &x.convergence {
            let _ = writeln!(s, "  convergence: {}", kebab(c));
        }
        for n in &x.notes {
            let _ = writeln!(s, "  - {n}");
        }
    }
    if !report.checks.is_empty() {
        let _ = writeln!(s, "\nchecks");
        for c in &report.checks {
            let verdict = if c.passed { "pass" } else { "FAIL" };
            let _ = writeln!(s, "  {verdict} {} instances={}", c.name, c.instances);
            if let Some(d) = &c.detail {
                let _ = writeln!(s, "       {d}");
            }
        }
    }
    let _ = writeln!(s, "\nduration_ms {}", report.duration_ms);
    s
}

/// CSV with columns `record,page,p,q,degree,value,detail`.
pub fn csv(report: &JobReport) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Invariant(e.to_string());
    w.write_record(["record", "page", "p", "q", "degree", "value", "detail"]).map_err(err)?;
    for page in &report.pages {
        let e = format!("E{}", page.page);
        for c in &page.cells {
            w.write_record(["cell", &e, &c.p.to_string(), &c.q.to_string(), "", &c.dim.to_string(), ""])
                .map_err(err)?;
        }
        for c in &page.boundary {
            w.write_record(["boundary", &e, &c.p.to_string(), &c.q.to_string(), "", &c.dim.to_string(), ""])
                .map_err(err)?;
        }
        for r in &page.differential_ranks {
            w.write_record(["rank", &e, &r.p.to_string(), &r.q.to_string(), "", &r.rank.to_string(), ""])
                .map_err(err)?;
        }
    }
    for b in &report.betti {
        let rec = format!("betti-{}", role(b.role));
        let kind = kebab(&b.kind);
        for d in &b.dims {
            w.write_record([&rec, "", "", "", &d.degree.to_string(), &d.rank.to_string(), &kind]).map_err(err)?;
        }
    }
    for c in &report.checks {
        let detail = c.detail.clone().unwrap_or_default();
        w.write_record(["check", &c.name, "", "", "", if c.passed { "1" } else { "0" }, &detail]).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Invariant(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Invariant(e.to_string()))
}
