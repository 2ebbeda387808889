//! Report rendering: a human-readable table or a machine form with one
//! record per line and a stable field order, byte-identical for identical
//! inputs.

use grpd_core::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Machine,
}

fn sanitize(s: &str) -> String {
    s.replace(['\t', '\n'], " ")
}

pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Machine => emit_machine(report),
        Format::Text => emit_text(report),
    }
}

fn emit_machine(report: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "report\tcommand={}\tinstance={}\tseed={}\n",
        sanitize(&report.command),
        sanitize(&report.instance),
        report.seed
    ));
    for w in &report.warnings {
        out.push_str(&format!("warning\t{}\n", sanitize(w)));
    }
    for r in &report.records {
        out.push_str(&format!(
            "record\tcheck={}\tinstance={}\tseed={}\ttrial={}\tresult={}\twitness={}\n",
            sanitize(&r.check),
            sanitize(&r.instance),
            r.seed,
            r.trial,
            if r.pass { "pass" } else { "fail" },
            sanitize(&r.witness)
        ));
    }
    let failed = report.records.iter().filter(|r| !r.pass).count();
    out.push_str(&format!("summary\ttotal={}\tfailed={}\n", report.records.len(), failed));
    out
}

fn emit_text(report: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "== {} on {} (seed {})\n",
        report.command, report.instance, report.seed
    ));
    for w in &report.warnings {
        out.push_str(&format!("warning: {w}\n"));
    }
    // One line per check name with pass/fail counts; failures listed below.
    let mut names: Vec<&str> = report.records.iter().map(|r| r.check.as_str()).collect();
    names.dedup();
    let mut seen = Vec::new();
    for name in names {
        if seen.contains(&name) {
            continue;
        }
        seen.push(name);
        let total = report.records.iter().filter(|r| r.check == name).count();
        let failed = report.records.iter().filter(|r| r.check == name && !r.pass).count();
        let mark = if failed == 0 { "ok" } else { "FAIL" };
        out.push_str(&format!("  {mark:<4} {name:<32} {}/{total}\n", total - failed));
    }
    for r in report.failures() {
        out.push_str(&format!(
            "  failure: {} trial {} witness: {}\n",
            r.check, r.trial, r.witness
        ));
    }
    let failed = report.records.iter().filter(|r| !r.pass).count();
    out.push_str(&format!("summary: {} checks, {} failed\n", report.records.len(), failed));
    out
}
