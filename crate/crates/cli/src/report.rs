//! Report document: a `#` header for people, then one
//! `check.<name>.<field> = <value>` line per datum.

use std::fmt::Write;
use tqo_core::{Error, VerificationReport};

pub const FORMAT_VERSION: u32 = 1;

/// Outcome of one requested check, in the order the checks were requested.
pub struct Entry {
    pub name: String,
    pub result: Result<VerificationReport, Error>,
}

pub struct Header<'a> {
    pub title: &'a str,
    pub fields: Vec<(&'a str, String)>,
}

/// Floats are printed in shortest round-trip form so equal bits give equal text.
fn float(x: f64) -> String {
    format!("{x:e}")
}

pub fn render(h: &Header, entries: &[Entry]) -> String {
    let mut s = String::new();
    let passed = entries.iter().filter(|e| matches!(&e.result, Ok(r) if r.passed())).count();
    writeln!(s, "# {}", h.title).unwrap();
    writeln!(s, "# {} checks, {} passed", entries.len(), passed).unwrap();
    for e in entries {
        let line = match &e.result {
            Ok(r) => match (r.passed(), r.worst()) {
                (true, _) => "pass".to_string(),
                (false, Some(w)) => format!("FAIL ({} = {} > {})", w.name, float(w.value), float(w.tol)),
                (false, None) => "FAIL".to_string(),
            },
            Err(err) => format!("REFUSED ({err})"),
        };
        writeln!(s, "#   {:<12} {line}", e.name).unwrap();
    }
    writeln!(s, "format_version = {FORMAT_VERSION}").unwrap();
    for (k, v) in &h.fields {
        writeln!(s, "{k} = {v}").unwrap();
    }
    for e in entries {
        let p = format!("check.{}", e.name);
        match &e.result {
            Err(err) => {
                writeln!(s, "{p}.outcome = refused").unwrap();
                writeln!(s, "{p}.error = {err}").unwrap();
                writeln!(s, "{p}.exit_code = {}", err.exit_code()).unwrap();
            }
            Ok(r) => {
                writeln!(s, "{p}.outcome = {}", if r.passed() { "pass" } else { "fail" }).unwrap();
                writeln!(s, "{p}.check = {}", r.check).unwrap();
                writeln!(s, "{p}.model = {}", r.model).unwrap();
                writeln!(s, "{p}.seed = {}", r.seed).unwrap();
                writeln!(s, "{p}.timestamp = {}", r.timestamp).unwrap();
                for (k, v) in &r.params {
                    writeln!(s, "{p}.param.{k} = {v}").unwrap();
                }
                for res in &r.residuals {
                    writeln!(s, "{p}.residual.{} = {}", res.name, float(res.value)).unwrap();
                    writeln!(s, "{p}.tolerance.{} = {}", res.name, float(res.tol)).unwrap();
                }
                for (k, v) in &r.scalars {
                    writeln!(s, "{p}.scalar.{k} = {v}").unwrap();
                }
            }
        }
    }
    s
}

/// 0 when everything passed, else the first error's code, else 1.
pub fn exit_code(entries: &[Entry]) -> i32 {
    if let Some(Err(e)) = entries.iter().map(|e| &e.result).find(|r| r.is_err()) {
        return e.exit_code();
    }
    if entries.iter().all(|e| matches!(&e.result, Ok(r) if r.passed())) {
        0
    } else {
        1
    }
}
