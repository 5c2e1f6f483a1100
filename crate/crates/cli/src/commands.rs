use std::fs;
use std::io::{self, Read, Write};

use serde::Serialize;
use thiserror::Error;

use pm_core::bmatrix::{BoolMatrix, MAX_DIM};
use pm_core::domination::{domination_orbit, OrbitResult};
use pm_core::enumerate::{
    canonical_labeling, class_census, count_poset_matrices, enumerate_poset_matrices,
    exhaustive_class, MAX_CLASS_COUNT,
};
use pm_core::ideals::{count_fixed_points, count_ideals, dedekind as dedekind_number, list_ideals};
use pm_core::pascal::{induced_submatrix, pascal_matrix, IndexVector};
use pm_core::posetcore::{self, validate as validate_matrix, PosetMatrix};

use crate::{Ctx, Emit, Format, Method};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    /// A domain failure whose diagnostic has already been written.
    #[error("rejected")]
    Rejected,
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Domain(_) | CliError::Rejected => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    pub fn message(&self) -> Option<String> {
        match self {
            CliError::Rejected => None,
            e => Some(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<pm_core::Error> for CliError {
    fn from(e: pm_core::Error) -> Self {
        match e {
            pm_core::Error::OutOfRange { .. } => CliError::Usage(e.to_string()),
            e => CliError::Domain(e.to_string()),
        }
    }
}

fn json_line<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer(&mut *out, value).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn read_input(path: &str) -> Result<String, CliError> {
    let mut text = String::new();
    if path == "-" {
        io::stdin().read_to_string(&mut text)?;
    } else {
        text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    }
    Ok(text)
}

/// Matrix text, or the JSON object form when the input starts with `{`.
fn read_matrix(path: &str) -> Result<BoolMatrix, CliError> {
    let text = read_input(path)?;
    if text.trim_start().starts_with('{') {
        serde_json::from_str(&text).map_err(|e| CliError::Domain(format!("bad matrix JSON: {e}")))
    } else {
        Ok(BoolMatrix::parse_text(&text)?)
    }
}

fn read_poset(path: &str) -> Result<PosetMatrix, CliError> {
    validate_matrix(&read_matrix(path)?).map_err(|e| CliError::Domain(e.to_string()))
}

fn parse_alpha(universe: u64, csv: &str) -> Result<IndexVector, CliError> {
    IndexVector::parse(universe, csv).map_err(|e| CliError::Usage(format!("--alpha: {e}")))
}

fn check_log_n(n: usize) -> Result<(), CliError> {
    if n > posetcore::MAX_EMBED {
        return Err(CliError::Usage(format!(
            "--n {n} is outside the supported range 0..={}",
            posetcore::MAX_EMBED
        )));
    }
    Ok(())
}

fn write_matrix(ctx: &Ctx, m: &BoolMatrix, out: &mut dyn Write) -> Result<(), CliError> {
    match ctx.format {
        Format::Text => out.write_all(m.to_text().as_bytes())?,
        Format::Json => json_line(out, m)?,
    }
    Ok(())
}

fn write_index(ctx: &Ctx, alpha: &IndexVector, out: &mut dyn Write) -> Result<(), CliError> {
    match ctx.format {
        Format::Text => writeln!(out, "{alpha}")?,
        Format::Json => json_line(out, alpha)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct Verdict<'a> {
    valid: bool,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a posetcore::ValidationError>,
}

pub fn validate(ctx: &Ctx, input: &str, json: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let m = read_matrix(input)?;
    let verdict = validate_matrix(&m);
    if json || ctx.format == Format::Json {
        json_line(
            out,
            &Verdict {
                valid: verdict.is_ok(),
                n: m.n(),
                error: verdict.as_ref().err(),
            },
        )?;
        return verdict.map(|_| ()).map_err(|_| CliError::Rejected);
    }
    match verdict {
        Ok(_) => {
            writeln!(out, "valid")?;
            Ok(())
        }
        Err(e) => Err(CliError::Domain(e.to_string())),
    }
}

pub fn embed(ctx: &Ctx, input: &str, out: &mut dyn Write) -> Result<(), CliError> {
    let a = read_poset(input)?;
    write_index(ctx, &posetcore::embed(&a)?, out)
}

pub fn induce(ctx: &Ctx, n: usize, alpha: &str, out: &mut dyn Write) -> Result<(), CliError> {
    if n > MAX_DIM {
        return Err(CliError::Usage(format!(
            "--n {n} is outside the supported range 0..={MAX_DIM}"
        )));
    }
    let alpha = parse_alpha(n as u64, alpha)?;
    let m = induced_submatrix(&pascal_matrix(n)?, &alpha)?;
    write_matrix(ctx, &m, out)
}

pub fn dual(ctx: &Ctx, input: &str, out: &mut dyn Write) -> Result<(), CliError> {
    let a = read_poset(input)?;
    write_matrix(ctx, posetcore::dual(&a).as_matrix(), out)
}

pub fn dual_index(ctx: &Ctx, n: usize, alpha: &str, out: &mut dyn Write) -> Result<(), CliError> {
    check_log_n(n)?;
    let alpha = parse_alpha(1 << n, alpha)?;
    write_index(ctx, &posetcore::dual_index(&alpha, n)?, out)
}

#[derive(Serialize)]
struct Counts {
    n: usize,
    poset_matrices: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    classes: Option<u64>,
}

/// Canonical form rows with the labelled size of the class.
type Census = Vec<(Vec<u64>, u64)>;

fn census(ctx: &Ctx, n: usize) -> Result<Census, CliError> {
    crate::cache::memo(ctx, &format!("enumerate census n={n}"), || {
        Ok(class_census(n)?
            .into_iter()
            .map(|(form, count)| (form.as_matrix().rows().to_vec(), count))
            .collect())
    })
}

pub fn enumerate(ctx: &Ctx, n: usize, emit: Emit, out: &mut dyn Write) -> Result<(), CliError> {
    match emit {
        Emit::Matrices => {
            for (k, a) in enumerate_poset_matrices(n)?.enumerate() {
                match ctx.format {
                    Format::Text => {
                        if k > 0 {
                            writeln!(out)?;
                        }
                        out.write_all(a.as_matrix().to_text().as_bytes())?;
                    }
                    Format::Json => json_line(out, &a)?,
                }
            }
        }
        Emit::Canonical => {
            #[derive(Serialize)]
            struct Class {
                canonical: BoolMatrix,
                labelled: u64,
            }
            for (k, (rows, labelled)) in census(ctx, n)?.into_iter().enumerate() {
                let canonical = BoolMatrix::from_rows(rows)?;
                match ctx.format {
                    Format::Text => {
                        if k > 0 {
                            writeln!(out)?;
                        }
                        out.write_all(canonical.to_text().as_bytes())?;
                    }
                    Format::Json => json_line(
                        out,
                        &Class {
                            canonical,
                            labelled,
                        },
                    )?,
                }
            }
        }
        Emit::Counts => {
            let counts = if n <= MAX_CLASS_COUNT {
                let c = census(ctx, n)?;
                Counts {
                    n,
                    poset_matrices: c.iter().map(|e| e.1).sum(),
                    classes: Some(c.len() as u64),
                }
            } else {
                Counts {
                    n,
                    poset_matrices: crate::cache::memo(
                        ctx,
                        &format!("enumerate count n={n}"),
                        || Ok(count_poset_matrices(n)?),
                    )?,
                    classes: None,
                }
            };
            match ctx.format {
                Format::Text => {
                    writeln!(out, "poset_matrices {}", counts.poset_matrices)?;
                    if let Some(c) = counts.classes {
                        writeln!(out, "classes {c}")?;
                    }
                }
                Format::Json => json_line(out, &counts)?,
            }
        }
    }
    Ok(())
}

pub fn canonical(ctx: &Ctx, input: &str, out: &mut dyn Write) -> Result<(), CliError> {
    let a = read_poset(input)?;
    let c = canonical_labeling(&a)?;
    match ctx.format {
        Format::Text => {
            out.write_all(c.form.as_matrix().to_text().as_bytes())?;
            let w: Vec<String> = c.witness.as_slice().iter().map(|i| i.to_string()).collect();
            writeln!(out, "witness {}", w.join(","))?;
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Labeling<'a> {
                form: &'a PosetMatrix,
                witness: &'a [usize],
            }
            json_line(
                out,
                &Labeling {
                    form: &c.form,
                    witness: c.witness.as_slice(),
                },
            )?;
        }
    }
    Ok(())
}

pub fn orbit(
    ctx: &Ctx,
    n: usize,
    alpha: &str,
    method: Method,
    budget: usize,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    check_log_n(n)?;
    let alpha = parse_alpha(1 << n, alpha)?;
    let result: OrbitResult = match method {
        Method::Domination => domination_orbit(&alpha, n, budget)?,
        Method::Exhaustive => exhaustive_class(&alpha, n)?,
    };
    if !result.exhausted {
        eprintln!("pm: budget of {budget} states reached; the orbit listing is partial");
    }
    match ctx.format {
        Format::Text => {
            for m in &result.members {
                let s: Vec<String> = m.iter().map(|e| e.to_string()).collect();
                writeln!(out, "{}", s.join(","))?;
            }
        }
        Format::Json => json_line(out, &result)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct ListRow {
    antichain: Vec<usize>,
    ideal: Vec<usize>,
    fixed_point: String,
}

#[derive(Serialize)]
struct IdealCount {
    n: usize,
    ideals: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    fixed_points: Option<u64>,
}

pub fn ideals(
    ctx: &Ctx,
    n: usize,
    list: bool,
    check_fixed_points: bool,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    if list {
        for r in list_ideals(n)? {
            json_line(
                out,
                &ListRow {
                    antichain: r.antichain.bits().elements().collect(),
                    ideal: r.ideal.bits().elements().collect(),
                    fixed_point: r.ideal.fixed_point_string(),
                },
            )?;
        }
        return Ok(());
    }
    let ideals = crate::cache::memo(ctx, &format!("ideals count n={n}"), || Ok(count_ideals(n)?))?;
    let fixed_points = if check_fixed_points {
        Some(crate::cache::memo(
            ctx,
            &format!("ideals fixed-points n={n}"),
            || Ok(count_fixed_points(n)?),
        )?)
    } else {
        None
    };
    match ctx.format {
        Format::Text => {
            writeln!(out, "{ideals}")?;
            if let Some(f) = fixed_points {
                writeln!(out, "fixed_points {f}")?;
            }
        }
        Format::Json => json_line(
            out,
            &IdealCount {
                n,
                ideals,
                fixed_points,
            },
        )?,
    }
    match fixed_points {
        Some(f) if f != ideals => Err(CliError::Domain(format!(
            "fixed-point scan found {f} solutions but backtracking found {ideals} ideals"
        ))),
        _ => Ok(()),
    }
}

pub fn dedekind(ctx: &Ctx, k: u32, out: &mut dyn Write) -> Result<(), CliError> {
    let m = crate::cache::memo(ctx, &format!("dedekind k={k}"), || Ok(dedekind_number(k)?))?;
    match ctx.format {
        Format::Text => writeln!(out, "{m}")?,
        Format::Json => {
            #[derive(Serialize)]
            struct Dedekind {
                k: u32,
                value: u64,
            }
            json_line(out, &Dedekind { k, value: m })?
        }
    }
    Ok(())
}
