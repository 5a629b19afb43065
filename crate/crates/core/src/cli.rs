//! Command-line front end. Every subcommand builds one JSON document; the
//! human-readable output is rendered from the same document.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::classes::{lang_solve, ClassTable, LambdaClass};
use crate::error::{Error, Result};
use crate::gf::{field_create, minimal_poly, parse_elem, split_top_level, FieldCtx};
use crate::grouporbit::{generate, orbit_decomposition, riemann_hurwitz_audit, Subgroup};
use crate::invariants::{invariant_generator, orbit_polynomial, pgl_generator};
use crate::limits;
use crate::moebius::{parse_entries, parse_moebius, projective_line, representative_scale, Moebius, ProjPoint};
use crate::structfactor::{factor_by_orbit, factor_general_k, lambda_family_report};
use crate::upoly::factorize;
use crate::verify;

pub const SCHEMA: &str = "orbitfactor/1";

#[derive(Parser, Debug)]
#[command(name = "orbitfactor", version, about = "Orbit-polynomial factorization over finite fields")]
struct Cli {
    #[command(flatten)]
    field: FieldArgs,
    /// Seed for the randomized equal-degree splitting.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Emit a structured JSON document instead of tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct FieldArgs {
    /// Characteristic.
    #[arg(long, global = true)]
    p: Option<u64>,
    /// Extension degree of F_q over F_p.
    #[arg(long, global = true, default_value_t = 1)]
    m: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Factor c*T^(q+1) + d*T^q - a*T - b through the orbits of <s>.
    Factor {
        #[arg(long)]
        s: String,
        /// Factor c*T^(q^k+1) + d*T^(q^k) - a*T - b instead.
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Compare against the generic factorizer.
        #[arg(long)]
        oracle_check: bool,
    },
    /// Orbit polynomial of the group generated by --gens.
    OrbitPoly {
        #[arg(long, num_args = 1.., required = true)]
        gens: Vec<String>,
    },
    /// Invariant generator of a group, or of PGL(2,q) with --pgl.
    Invariant {
        #[arg(long, conflicts_with = "gens")]
        pgl: bool,
        #[arg(long, num_args = 1..)]
        gens: Vec<String>,
    },
    /// Orbits on P^1(F_{q^ext}) and the Riemann-Hurwitz audit.
    Orbits {
        #[arg(long, num_args = 1.., required = true)]
        gens: Vec<String>,
        #[arg(long, default_value_t = 1)]
        ext: usize,
    },
    /// Conjugacy classes of PGL(2,q) and their values of phi.
    Classes {
        /// A value in F_q, or "inf".
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Counts of lambda per factor degree for s of order q+1.
    LambdaReport {
        #[arg(long)]
        s: String,
    },
    /// Solve s = sigma(t)^-1 t.
    Lang {
        #[arg(long)]
        s: String,
    },
    /// Replay built-in checks.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Suite {
    /// Worked examples with known answers (the name is part of the interface).
    #[value(name = "paper-examples")]
    Examples,
    Lemmas,
}

/// Outcome of one command: the document and whether every internal check held.
struct Report {
    doc: Value,
    ok: bool,
}

/// Runs the CLI, writing to `out`, and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    limits::load_from_env();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            if code == 0 {
                let _ = write!(out, "{e}");
            } else {
                eprint!("{e}");
            }
            return code;
        }
    };
    let json = cli.json;
    match execute(cli) {
        Ok(rep) => {
            let text = if json { serde_json::to_string_pretty(&rep.doc).expect("serializable") } else { render(&rep.doc) };
            let _ = writeln!(out, "{text}");
            if rep.ok {
                0
            } else {
                2
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvariantViolation(_) => 2,
                _ => 1,
            }
        }
    }
}

fn field(args: &FieldArgs) -> Result<FieldCtx> {
    let p = args.p.ok_or_else(|| Error::InvalidArgument("--p is required".into()))?;
    field_create(p, args.m)
}

fn gens_of(ctx: &FieldCtx, texts: &[String]) -> Result<Vec<Moebius>> {
    texts.iter().flat_map(|t| split_top_level(t, ';')).filter(|t| !t.trim().is_empty()).map(|t| parse_moebius(ctx, t)).collect()
}

fn point_of(ctx: &FieldCtx, text: &str) -> Result<ProjPoint> {
    match text.trim() {
        "inf" | "infinity" => Ok(ProjPoint::Infinity),
        t => Ok(ProjPoint::Finite(parse_elem(ctx, t)?)),
    }
}

fn strs<T: ToString>(xs: impl IntoIterator<Item = T>) -> Value {
    Value::Array(xs.into_iter().map(|x| Value::String(x.to_string())).collect())
}

fn execute(cli: Cli) -> Result<Report> {
    let seed = cli.seed;
    let (command, mut body) = match cli.command {
        Command::Verify { suite } => {
            let (name, checks) = match suite {
                Suite::Examples => {
                    let only_q = match cli.field.p {
                        Some(_) => Some(field(&cli.field)?.cardinality()),
                        None => None,
                    };
                    ("paper-examples", verify::reference_examples(only_q))
                }
                Suite::Lemmas => ("lemmas", verify::lemmas(&field(&cli.field)?)?),
            };
            let failed = checks.iter().filter(|c| !c.pass).count();
            let doc = json!({
                "suite": name,
                "checks": serde_json::to_value(&checks).expect("serializable"),
                "passed": checks.len() - failed,
                "failed": failed,
            });
            ("verify", (doc, failed == 0))
        }
        Command::Factor { s, k, oracle_check } => {
            let ctx = field(&cli.field)?;
            ("factor", factor_cmd(&ctx, &s, k, oracle_check, seed)?)
        }
        Command::OrbitPoly { gens } => {
            let ctx = field(&cli.field)?;
            let g = generate(&ctx, &gens_of(&ctx, &gens)?)?;
            let op = orbit_polynomial(&g)?;
            let doc = json!({
                "group_order": g.order(),
                "coefficients": strs(&op.coeffs),
                "param_index": op.param_index,
                "parameter": op.parameter().to_string(),
                "family": op.family.iter().map(|(a, b)| json!([a.to_string(), b.to_string()])).collect::<Vec<_>>(),
                "family_form": op.family_text(),
            });
            ("orbit-poly", (doc, true))
        }
        Command::Invariant { pgl, gens } => {
            let ctx = field(&cli.field)?;
            let (phi, order) = if pgl || gens.is_empty() {
                let q = ctx.cardinality();
                (pgl_generator(&ctx)?, q * q * q - q)
            } else {
                let g = generate(&ctx, &gens_of(&ctx, &gens)?)?;
                (invariant_generator(&g)?, g.order() as u128)
            };
            let doc = json!({
                "group_order": order.to_string(),
                "numerator": phi.num().display_with("x"),
                "denominator": phi.den().display_with("x"),
                "degree": phi.degree(),
            });
            ("invariant", (doc, phi.degree() as u128 == order))
        }
        Command::Orbits { gens, ext } => {
            let ctx = field(&cli.field)?;
            let g = generate(&ctx, &gens_of(&ctx, &gens)?)?;
            ("orbits", orbits_cmd(&g, ext)?)
        }
        Command::Classes { lambda } => {
            let ctx = field(&cli.field)?;
            ("classes", classes_cmd(&ctx, lambda.as_deref())?)
        }
        Command::LambdaReport { s } => {
            let ctx = field(&cli.field)?;
            let rep = lambda_family_report(&parse_moebius(&ctx, &s)?)?;
            let rows: Vec<Value> =
                rep.counts.iter().map(|(r, (n, e))| json!({"degree": r, "count": n, "expected": e})).collect();
            let doc = json!({"q": rep.q.to_string(), "counts": rows, "total": rep.total, "pass": rep.pass});
            ("lambda-report", (doc, rep.pass))
        }
        Command::Lang { s } => {
            let ctx = field(&cli.field)?;
            let sol = lang_solve(&parse_moebius(&ctx, &s)?)?;
            let doc = json!({
                "s": sol.s.to_string(),
                "t": sol.t.to_string(),
                "solutions": strs(&sol.solutions),
                "finite_count": sol.finite_count,
            });
            ("lang", (doc, true))
        }
    };
    if let Value::Object(map) = &mut body.0 {
        map.insert("schema".into(), Value::String(SCHEMA.into()));
        map.insert("command".into(), Value::String(command.into()));
        map.insert("seed".into(), json!(seed));
    }
    Ok(Report { doc: body.0, ok: body.1 })
}

fn factor_cmd(ctx: &FieldCtx, text: &str, k: usize, oracle_check: bool, seed: u64) -> Result<(Value, bool)> {
    let s = parse_moebius(ctx, text)?;
    let mu = representative_scale(&parse_entries(ctx, text)?)?;
    if k > 1 {
        let g = factor_general_k(&s, k)?;
        let oracle = if oracle_check {
            let fac = factorize(&g.input, seed)?;
            let flat: Vec<_> = fac.factors.iter().flat_map(|(h, m)| std::iter::repeat(h.clone()).take(*m)).collect();
            Some(flat == g.factors && fac.unit == g.unit)
        } else {
            None
        };
        let doc = json!({
            "element": s.to_string(),
            "k": k,
            "input": g.input.to_string(),
            "unit": g.unit.to_string(),
            "factors": strs(&g.factors),
            "structured": g.structured,
            "degree_over_extension": g.degree_over_ext,
            "oracle_check": oracle,
        });
        return Ok((doc, oracle != Some(false)));
    }
    let sf = factor_by_orbit(&s)?.rescaled(&mu)?;
    let mut rows = Vec::new();
    let mut minpoly_ok = true;
    for f in &sf.factors {
        let ok = minimal_poly(&f.source, ctx)? == f.poly;
        minpoly_ok &= ok;
        rows.push(json!({"factor": f.poly.to_string(), "lambda": f.lambda.to_string(), "minimal_polynomial_check": ok}));
    }
    let reconstruction = sf.expand() == sf.input;
    let oracle = if oracle_check { Some(sf.agrees_with_oracle(seed)?) } else { None };
    let doc = json!({
        "element": s.to_string(),
        "input": sf.input.to_string(),
        "unit": sf.unit.to_string(),
        "removed_linear": strs(&sf.removed_linear),
        "degree": sf.degree_r,
        "factors": rows,
        "family_form": sf.orbit_poly.family_text(),
        "parameter": sf.orbit_poly.parameter().to_string(),
        "reconstruction": reconstruction,
        "oracle_check": oracle,
    });
    Ok((doc, reconstruction && minpoly_ok && oracle != Some(false)))
}

fn orbits_cmd(g: &Subgroup, ext: usize) -> Result<(Value, bool)> {
    let rep = orbit_decomposition(g, ext)?;
    let rows: Vec<Value> = rep
        .orbits
        .iter()
        .map(|o| {
            json!({
                "size": o.points.len(),
                "stabilizer_order": o.stabilizer.order(),
                "regular": o.regular,
                "least_point": o.points[0].to_string(),
            })
        })
        .collect();
    let rh = riemann_hurwitz_audit(g)?;
    let census: Vec<Value> = rh
        .census
        .iter()
        .map(|c| json!({"orbit_size": c.orbit_size, "stabilizer_order": c.stabilizer_order, "representative": c.representative.to_string()}))
        .collect();
    let doc = json!({
        "group_order": g.order(),
        "ext": ext,
        "orbits": rows,
        "nonregular_census": census,
        "differents_sum": rh.differents_sum,
        "tame_sum": rh.tame_sum,
        "expected": rh.expected,
        "riemann_hurwitz": rh.pass,
    });
    Ok((doc, rh.pass))
}

fn classes_cmd(ctx: &FieldCtx, lambda: Option<&str>) -> Result<(Value, bool)> {
    let table = ClassTable::new(ctx)?;
    let q = ctx.cardinality();
    let points = match lambda {
        Some(t) => vec![point_of(ctx, t)?],
        None => projective_line(ctx)?,
    };
    let mut lambdas: Vec<Vec<String>> = vec![Vec::new(); table.classes.len()];
    let mut lookups = Vec::new();
    for pt in &points {
        let index_of = |rep: &Moebius| table.classes.iter().position(|c| &c.representative == rep).expect("listed class");
        let (kinds, ambiguous) = match table.class_of_lambda(pt)? {
            LambdaClass::Class(c) => {
                lambdas[index_of(&c.representative)].push(pt.to_string());
                (vec![c.kind.to_string()], false)
            }
            LambdaClass::AmbiguousInvolutions(a, b) => {
                for c in [&a, &b] {
                    lambdas[index_of(&c.representative)].push(pt.to_string());
                }
                (vec![a.kind.to_string(), b.kind.to_string()], true)
            }
        };
        let pattern = match pt {
            ProjPoint::Finite(l) => serde_json::to_value(table.factor_pattern(l)?).expect("serializable"),
            ProjPoint::Infinity => Value::Null,
        };
        lookups.push(json!({"lambda": pt.to_string(), "classes": kinds, "ambiguous": ambiguous, "pattern": pattern}));
    }
    let rows: Vec<Value> = table
        .classes
        .iter()
        .zip(&lambdas)
        .map(|(c, ls)| {
            json!({
                "kind": c.kind.to_string(),
                "representative": c.representative.to_string(),
                "size": c.size,
                "centralizer_order": c.centralizer_order,
                "lambdas": ls,
            })
        })
        .collect();
    let want = if ctx.p() == 2 { q + 1 } else { q + 2 };
    let ok = table.classes.len() as u128 == want;
    let doc = json!({
        "q": q.to_string(),
        "mu": table.mu.to_string(),
        "class_count": table.classes.len(),
        "classes": rows,
        "lambda_lookup": lookups,
    });
    Ok((doc, ok))
}

/// Boolean fields reported as PASS/FAIL in text mode.
const CHECK_KEYS: &[&str] = &["pass", "reconstruction", "oracle_check", "riemann_hurwitz", "minimal_polynomial_check"];

/// Plain-text rendering: scalars as `key: value`, arrays of objects as tables.
fn render(doc: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = doc {
        for (k, v) in map {
            match v {
                Value::Array(items) if items.iter().all(Value::is_object) && !items.is_empty() => {
                    out.push_str(&format!("{k}:\n{}", table(items)));
                }
                Value::Array(items) => {
                    let parts: Vec<String> = items.iter().map(scalar).collect();
                    out.push_str(&format!("{k}: {}\n", parts.join(", ")));
                }
                Value::Bool(b) if CHECK_KEYS.contains(&k.as_str()) => {
                    out.push_str(&format!("{k}: {}\n", if *b { "PASS" } else { "FAIL" }))
                }
                _ => out.push_str(&format!("{k}: {}\n", scalar(v))),
            }
        }
    }
    out.trim_end().to_string()
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(items) => items.iter().map(scalar).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

fn table(rows: &[Value]) -> String {
    let cols: Vec<String> = rows[0].as_object().expect("object rows").keys().cloned().collect();
    let cell = |c: &String, v: &Value| match v {
        Value::Bool(b) if CHECK_KEYS.contains(&c.as_str()) => (if *b { "PASS" } else { "FAIL" }).to_string(),
        _ => scalar(v),
    };
    let cells: Vec<Vec<String>> = rows.iter().map(|r| cols.iter().map(|c| cell(c, &r[c])).collect()).collect();
    let widths: Vec<usize> =
        cols.iter().enumerate().map(|(i, c)| cells.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0)).collect();
    let line = |vals: &[String]| -> String {
        let v: Vec<String> = vals.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
        format!("  {}\n", v.join("  ").trim_end())
    };
    let mut out = line(&cols);
    for r in &cells {
        out.push_str(&line(r));
    }
    out
}
