//! Reference checks driven by the bundled `reference.json` manifest. Each
//! entry records where its expected value comes from: `published` values are
//! quoted from the literature, `definitional` ones follow directly from definitions, and
//! `computed` ones were produced by an independent brute-force oracle.

use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use pm_core::bmatrix::BoolMatrix;
use pm_core::domination::{domination_orbit, DEFAULT_BUDGET};
use pm_core::enumerate::{count_isomorphism_classes, count_poset_matrices};
use pm_core::ideals::{count_fixed_points, count_ideals, dedekind};
use pm_core::pascal::IndexVector;
use pm_core::posetcore::{dual, dual_index, embed, realize, validate};

use crate::commands::CliError;
use crate::{Ctx, Format};

const MANIFEST: &str = include_str!("reference.json");

#[derive(Debug, Deserialize)]
pub struct Manifest {
    pub entries: Vec<Reference>,
}

#[derive(Debug, Deserialize)]
pub struct Reference {
    pub id: String,
    pub check: String,
    pub input: Value,
    pub expected: Value,
    pub origin: Origin,
    pub source: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Published,
    Definitional,
    Computed,
}

impl Origin {
    pub fn label(self) -> &'static str {
        match self {
            Origin::Published => "published",
            Origin::Definitional => "definitional",
            Origin::Computed => "computed",
        }
    }
}

pub fn manifest() -> Manifest {
    serde_json::from_str(MANIFEST).expect("bundled manifest is valid JSON")
}

fn field<T: serde::de::DeserializeOwned>(v: &Value, name: &str) -> Result<T, String> {
    serde_json::from_value(v.get(name).cloned().unwrap_or(Value::Null))
        .map_err(|e| format!("input field {name:?}: {e}"))
}

fn matrix(v: &Value) -> Result<BoolMatrix, String> {
    let rows: Vec<String> = field(v, "rows")?;
    BoolMatrix::parse_text(&rows.join("\n")).map_err(|e| e.to_string())
}

fn rows_of(m: &BoolMatrix) -> Value {
    m.to_text()
        .lines()
        .map(|l| Value::from(l.to_string()))
        .collect()
}

fn index(v: &Value) -> Result<(usize, IndexVector), String> {
    let n: usize = field(v, "n")?;
    let alpha: Vec<u64> = field(v, "alpha")?;
    let iv = IndexVector::new(1 << n, alpha).map_err(|e| e.to_string())?;
    Ok((n, iv))
}

fn evaluate(r: &Reference) -> Result<Value, String> {
    let e = |e: pm_core::Error| e.to_string();
    let v = &r.input;
    Ok(match r.check.as_str() {
        "ideals" => count_ideals(field(v, "n")?).map_err(e)?.into(),
        "fixed_points" => count_fixed_points(field(v, "n")?).map_err(e)?.into(),
        "dedekind" => dedekind(field(v, "k")?).map_err(e)?.into(),
        "poset_count" => count_poset_matrices(field(v, "n")?).map_err(e)?.into(),
        "class_count" => count_isomorphism_classes(field(v, "n")?).map_err(e)?.into(),
        "embed" => {
            let a = validate(&matrix(v)?).map_err(|e| e.to_string())?;
            embed(&a).map_err(e)?.entries().into()
        }
        "realize" => {
            let (n, alpha) = index(v)?;
            rows_of(realize(&alpha, n).map_err(e)?.as_matrix())
        }
        "dual_index" => {
            let (n, alpha) = index(v)?;
            dual_index(&alpha, n).map_err(e)?.entries().into()
        }
        "dual" => {
            let a = validate(&matrix(v)?).map_err(|e| e.to_string())?;
            rows_of(dual(&a).as_matrix())
        }
        "orbit_contains" => {
            // reports the expected members that the orbit actually reaches
            let (n, alpha) = index(v)?;
            let orbit = domination_orbit(&alpha, n, DEFAULT_BUDGET).map_err(e)?;
            let want: Vec<Vec<u64>> =
                serde_json::from_value(r.expected.clone()).map_err(|e| e.to_string())?;
            want.into_iter()
                .filter(|m| orbit.contains(m))
                .map(Value::from)
                .collect()
        }
        other => return Err(format!("unknown check {other:?}")),
    })
}

#[derive(Debug, Serialize)]
pub struct Outcome<'a> {
    pub id: &'a str,
    pub origin: Origin,
    pub source: &'a str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

pub fn check(r: &Reference) -> Outcome<'_> {
    let (passed, detail) = match evaluate(r) {
        Ok(got) if got == r.expected => (true, None),
        Ok(got) => (false, Some(format!("expected {}, got {got}", r.expected))),
        Err(e) => (false, Some(e)),
    };
    Outcome {
        id: &r.id,
        origin: r.origin,
        source: &r.source,
        passed,
        detail,
    }
}

pub fn run(ctx: &Ctx, out: &mut dyn Write) -> Result<(), CliError> {
    let m = manifest();
    let mut failed = 0;
    for r in &m.entries {
        let o = check(r);
        failed += usize::from(!o.passed);
        match ctx.format {
            Format::Text => {
                let verdict = if o.passed { "PASS" } else { "FAIL" };
                write!(
                    out,
                    "{verdict} {} [{}] {}",
                    o.id,
                    o.origin.label(),
                    o.source
                )?;
                if let Some(d) = &o.detail {
                    write!(out, ": {d}")?;
                }
                writeln!(out)?;
            }
            Format::Json => {
                serde_json::to_writer(&mut *out, &o).map_err(|e| CliError::Io(e.to_string()))?;
                writeln!(out)?;
            }
        }
    }
    if ctx.format == Format::Text {
        writeln!(
            out,
            "{} of {} checks passed",
            m.entries.len() - failed,
            m.entries.len()
        )?;
    }
    if failed > 0 {
        return Err(CliError::Domain(format!(
            "{failed} reference checks failed"
        )));
    }
    Ok(())
}
