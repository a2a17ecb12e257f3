//! `tautring`: command-line access to the tautological ring engine.
//!
//! Exit status is 0 on success, 1 when a check fails or a computation's
//! precondition is violated, and 2 for usage errors (bad flags, unparsable
//! expressions, invalid ring parameters).

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tautring::expr::{self, Context};
use tautring::json::{class_to_json, kappa_poly_to_json};
use tautring::kappa_poly::{decomposability_check, BasisScope};
use tautring::pushforward::{center_at, push_forget_point, push_to_base};
use tautring::relgen::{
    binomial_decompose, generate_irw, relation_product, relation_square, IrwConfig, Provenance,
    RelationRecord, Schema,
};
use tautring::store::{RelationStore, STORE_ENV};
use tautring::table::{relation_table, to_latex as table_latex};
use tautring::{verify, KappaPolynomial, Point, PointSet, RingParams, TautClass, Q};

#[derive(Parser)]
#[command(name = "tautring", version, about = "Exact computations in tautological rings")]
struct Cli {
    /// Relation store (JSON lines).
    #[arg(long, global = true, env = STORE_ENV)]
    store: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
    Csv,
}

#[derive(Args, Clone)]
struct Ring {
    #[arg(long)]
    g: u32,
    #[arg(long, default_value_t = 1)]
    d: u32,
}

#[derive(Args, Clone)]
struct Space {
    #[command(flatten)]
    ring: Ring,
    /// Ordinary marked points.
    #[arg(long, value_delimiter = ',')]
    points: Vec<u32>,
    /// Adds the star point under this name.
    #[arg(long)]
    star: Option<String>,
}

#[derive(Args, Clone)]
struct IrwBounds {
    #[arg(long, default_value_t = 3)]
    n_max: u32,
    #[arg(long, default_value_t = 2)]
    a_bound: i64,
    /// Largest multiplier weight (degree over 2d).
    #[arg(long, default_value_t = 0)]
    weight: u32,
    /// Keep relations of at most this weight.
    #[arg(long)]
    max_weight: Option<u32>,
    #[arg(long)]
    pontryagin: bool,
}

impl IrwBounds {
    fn config(&self, ring: &Ring) -> IrwConfig {
        let mut c = IrwConfig::new(ring.g, ring.d, self.n_max, self.a_bound);
        c.multiplier_weight_max = self.weight;
        c.max_relation_weight = self.max_weight;
        c.pontryagin_multipliers = self.pontryagin;
        c
    }
}

#[derive(Subcommand)]
enum Verb {
    /// Parse and normalize an expression.
    Eval {
        #[command(flatten)]
        space: Space,
        expr: String,
    },
    /// Push a class forward along a forgetful map.
    Push {
        #[command(flatten)]
        space: Space,
        expr: String,
        /// Point to forget; defaults to the star.
        #[arg(long)]
        forget: Option<String>,
        /// Forget every point and print a kappa polynomial.
        #[arg(long, conflicts_with = "forget")]
        to_base: bool,
    },
    /// Subtract the pulled-back pushforward so the class pushes to zero.
    Center {
        #[command(flatten)]
        space: Space,
        expr: String,
        #[arg(long)]
        at: Option<String>,
    },
    /// Square (one class) or product (two classes) relation along the star.
    Relate {
        #[command(flatten)]
        space: Space,
        #[arg(num_args = 1..=2, required = true)]
        exprs: Vec<String>,
        /// Push the relation down to the base ring and emit a record.
        #[arg(long)]
        kappa: bool,
        /// Append the record to the store (implies --kappa).
        #[arg(long)]
        save: bool,
    },
    /// Relations from pushed-down powers of Omega_A.
    Irw {
        #[command(flatten)]
        ring: Ring,
        #[command(flatten)]
        bounds: IrwBounds,
        #[arg(long)]
        save: bool,
    },
    /// Run named checks with known answers.
    Verify {
        names: Vec<String>,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        list: bool,
        /// Genus for checks that take one.
        #[arg(long)]
        g: Option<u32>,
    },
    /// Nilpotence certificate for N_{p,q}, or the binomial relation of index k.
    Decompose {
        #[command(flatten)]
        ring: Ring,
        #[arg(long, requires = "q", conflicts_with = "k")]
        p: Option<String>,
        #[arg(long, requires = "p")]
        q: Option<String>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        save: bool,
    },
    /// Degree-by-degree dimensions of the kappa ring modulo relations.
    Table {
        #[command(flatten)]
        ring: Ring,
        #[arg(long)]
        from: u32,
        #[arg(long)]
        to: u32,
        /// Use every kappa monomial, not only powers of the Euler class.
        #[arg(long)]
        full: bool,
        /// Take generators from the store instead of generating them.
        #[arg(long)]
        from_store: bool,
        #[command(flatten)]
        bounds: IrwBounds,
    },
}

enum Failure {
    Usage(String),
    Fail(String),
}

type Outcome<T> = Result<T, Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn fail(e: impl std::fmt::Display) -> Failure {
    Failure::Fail(e.to_string())
}

fn params(ring: &Ring) -> Outcome<RingParams> {
    RingParams::new(ring.g, ring.d).map_err(usage)
}

fn context(space: &Space) -> Outcome<Context> {
    let p = params(&space.ring)?;
    if space.points.contains(&0) {
        return Err(usage("point labels start at 1"));
    }
    let mut pts = PointSet::from_labels(space.points.iter().copied());
    let mut ctx = Context::new(p, pts.clone());
    if let Some(name) = &space.star {
        if name.is_empty() || name.chars().all(|c| c.is_ascii_digit()) {
            return Err(usage(format!("star name {name:?} must not be empty or numeric")));
        }
        pts = pts.with_star();
        ctx = Context::new(p, pts).with_star_name(name);
    }
    Ok(ctx)
}

fn parse(ctx: &Context, text: &str) -> Outcome<TautClass<Q>> {
    expr::parse(ctx, text).map_err(|e| usage(format!("in {text:?}: {e}")))
}

fn point_arg(ctx: &Context, name: Option<&str>) -> Outcome<Point> {
    let p = match name {
        None => Point::STAR,
        Some(n) if n == ctx.star_name || n == "*" => Point::STAR,
        Some(n) => Point(n.parse().map_err(|_| usage(format!("bad point {n:?}")))?),
    };
    if !ctx.points.contains(p) {
        return Err(usage(format!("point {p} is not declared")));
    }
    Ok(p)
}

struct Out {
    format: Format,
    sink: Box<dyn Write>,
}

impl Out {
    fn line(&mut self, s: impl AsRef<str>) -> Outcome<()> {
        writeln!(self.sink, "{}", s.as_ref()).map_err(fail)
    }

    fn no_csv(&self, what: &str) -> Outcome<()> {
        if self.format == Format::Csv {
            return Err(usage(format!("csv output is not available for {what}")));
        }
        Ok(())
    }

    fn class(&mut self, ctx: &Context, a: &TautClass<Q>) -> Outcome<()> {
        self.no_csv("classes")?;
        match self.format {
            Format::Json => {
                let v = json!({
                    "g": a.params().g(),
                    "d": a.params().d(),
                    "points": a.points().iter().collect::<Vec<_>>(),
                    "terms": class_to_json(a),
                });
                self.line(v.to_string())
            }
            Format::Latex => self.line(expr::to_latex(a)),
            _ => self.line(expr::print(ctx, a)),
        }
    }

    fn poly(&mut self, p: &KappaPolynomial<Q>) -> Outcome<()> {
        self.no_csv("polynomials")?;
        match self.format {
            Format::Json => {
                let v = json!({"g": p.params().g(), "d": p.params().d(), "poly": kappa_poly_to_json(p)});
                self.line(v.to_string())
            }
            Format::Latex => self.line(p.to_latex()),
            _ => self.line(p.to_string()),
        }
    }

    fn records(&mut self, records: &[RelationRecord]) -> Outcome<()> {
        match self.format {
            Format::Json => {
                for r in records {
                    self.line(r.to_json_line())?;
                }
                Ok(())
            }
            Format::Latex => {
                for r in records {
                    self.line(r.to_latex())?;
                }
                Ok(())
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut self.sink);
                w.write_record(["schema", "g", "d", "degree", "relation"]).map_err(fail)?;
                for r in records {
                    let schema = serde_json::to_value(r.schema).map_err(fail)?;
                    w.write_record([
                        schema.as_str().unwrap_or_default().to_string(),
                        r.g.to_string(),
                        r.d.to_string(),
                        r.degree.to_string(),
                        r.poly.to_string(),
                    ])
                    .map_err(fail)?;
                }
                w.flush().map_err(fail)
            }
            Format::Text => {
                for r in records {
                    self.line(format!("[{}] {} = 0", r.degree, r.poly))?;
                }
                Ok(())
            }
        }
    }
}

fn open_store(cli_store: &Option<PathBuf>) -> Outcome<RelationStore> {
    let path = cli_store
        .clone()
        .ok_or_else(|| usage(format!("no store given; pass --store or set {STORE_ENV}")))?;
    RelationStore::open(path).map_err(fail)
}

fn save(store: &Option<PathBuf>, records: &[RelationRecord]) -> Outcome<()> {
    let mut s = open_store(store)?;
    let written = s.append(records).map_err(fail)?;
    log::info!("stored {written} new record(s) in {}", s.path().display());
    Ok(())
}

fn relate(space: &Space, exprs: &[String], kappa: bool, store: &Option<PathBuf>, save_it: bool, out: &mut Out) -> Outcome<()> {
    let ctx = context(space)?;
    if space.star.is_none() {
        return Err(usage("relate needs a star point (--star)"));
    }
    let target = ctx.points.without(Point::STAR);
    let classes = exprs.iter().map(|t| parse(&ctx, t)).collect::<Outcome<Vec<_>>>()?;
    let rel = match classes.as_slice() {
        [a] => relation_square(a, &target),
        [a, b] => relation_product(a, b, &target),
        _ => unreachable!("clap bounds the count"),
    }
    .map_err(fail)?;
    let target_ctx = Context::new(ctx.params, target.clone()).with_star_name(&ctx.star_name);
    if !(kappa || save_it) {
        out.no_csv("relations")?;
        return match out.format {
            Format::Json => {
                let v = json!({
                    "exponent": rel.exponent,
                    "points": target.iter().collect::<Vec<_>>(),
                    "base": class_to_json(&rel.base),
                });
                out.line(v.to_string())
            }
            Format::Latex => out.line(format!("\\left({}\\right)^{{{}}} = 0", expr::to_latex(&rel.base), rel.exponent)),
            _ => out.line(format!("({})^{} = 0", expr::print(&target_ctx, &rel.base), rel.exponent)),
        };
    }
    let n = target.len() as u32;
    if target != PointSet::first_n(n) {
        return Err(usage("records need the ordinary points to be 1..n"));
    }
    // provenance text uses the default star name so it reparses anywhere
    let canonical = Context::new(ctx.params, ctx.points.clone());
    let prov = Provenance {
        n: Some(n),
        exponent: Some(rel.exponent),
        classes: Some(classes.iter().map(|c| expr::print(&canonical, c)).collect()),
        ..Provenance::default()
    };
    let schema = if classes.len() == 1 { Schema::Square } else { Schema::Product };
    let poly = push_to_base(&rel.expand());
    let record = RelationRecord::new(schema, ctx.params, prov, &poly);
    if save_it {
        save(store, std::slice::from_ref(&record))?;
    }
    out.records(&[record])
}

fn run(cli: Cli) -> Outcome<bool> {
    let sink: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(File::create(path).map_err(usage)?),
        None => Box::new(io::stdout()),
    };
    let mut out = Out { format: cli.format, sink };
    let mut passed = true;
    match &cli.verb {
        Verb::Eval { space, expr } => {
            let ctx = context(space)?;
            let a = parse(&ctx, expr)?;
            out.class(&ctx, &a)?;
        }
        Verb::Push { space, expr, forget, to_base } => {
            let ctx = context(space)?;
            let a = parse(&ctx, expr)?;
            if *to_base {
                out.poly(&push_to_base(&a))?;
            } else {
                let p = point_arg(&ctx, forget.as_deref())?;
                let b = push_forget_point(&a, p).map_err(fail)?;
                out.class(&Context { points: b.points().clone(), ..ctx }, &b)?;
            }
        }
        Verb::Center { space, expr, at } => {
            let ctx = context(space)?;
            let a = parse(&ctx, expr)?;
            let p = point_arg(&ctx, at.as_deref())?;
            out.class(&ctx, &center_at(&a, p).map_err(fail)?)?;
        }
        Verb::Relate { space, exprs, kappa, save } => {
            relate(space, exprs, *kappa, &cli.store, *save, &mut out)?;
        }
        Verb::Irw { ring, bounds, save: save_it } => {
            params(ring)?;
            let records = generate_irw(&bounds.config(ring)).map_err(fail)?;
            if *save_it {
                save(&cli.store, &records)?;
            }
            out.records(&records)?;
        }
        Verb::Verify { names, all, list, g } => {
            if *list {
                for n in verify::CHECKS {
                    out.line(*n)?;
                }
                return Ok(true);
            }
            let chosen: Vec<String> = if *all {
                verify::CHECKS.iter().map(|s| s.to_string()).collect()
            } else {
                names.clone()
            };
            if chosen.is_empty() {
                return Err(usage("name a check, or pass --all or --list"));
            }
            for name in &chosen {
                let report = verify::run(name, *g)
                    .ok_or_else(|| usage(format!("unknown check {name:?}; known: {}", verify::CHECKS.join(", "))))?
                    .map_err(fail)?;
                passed &= report.passed();
                match out.format {
                    Format::Json => {
                        let lines: Vec<_> = report
                            .lines
                            .iter()
                            .map(|l| json!({"label": l.label, "expected": l.expected, "computed": l.computed, "ok": l.ok}))
                            .collect();
                        out.line(json!({"name": report.name, "passed": report.passed(), "checks": lines}).to_string())?;
                    }
                    Format::Text => out.line(report.to_string().trim_end())?,
                    _ => return Err(usage("verify prints text or json")),
                }
            }
        }
        Verb::Decompose { ring, p, q, k, save: save_it } => {
            let params = params(ring)?;
            match (p, q, k) {
                (Some(p), Some(q), None) => {
                    let pm = expr::parse_monomial(params, p).map_err(usage)?;
                    let qm = expr::parse_monomial(params, q).map_err(usage)?;
                    let check = decomposability_check(&params, &pm, &qm).map_err(usage)?;
                    passed = check.is_certified();
                    out.no_csv("decompose")?;
                    match out.format {
                        Format::Json => out.line(
                            json!({
                                "p": check.p, "q": check.q,
                                "nilpotent": kappa_poly_to_json(&check.nilpotent),
                                "exponent": check.exponent,
                                "certified": passed,
                            })
                            .to_string(),
                        )?,
                        Format::Latex => out.line(format!(
                            "\\left({}\\right)^{{{}}} = 0",
                            check.nilpotent.to_latex(),
                            check.exponent
                        ))?,
                        _ => {
                            out.line(format!("N = {}", check.nilpotent))?;
                            out.line(format!("N^{} = 0 ({})", check.exponent, if passed { "certified" } else { "NOT certified" }))?;
                            out.line(format!("kappa({}) = N + ({})", pm.mul(&qm), check.ideal_part))?;
                        }
                    }
                }
                (None, None, Some(k)) => {
                    let record = binomial_decompose(params, *k).map_err(fail)?;
                    passed = record.check_provenance().map_err(fail)?;
                    if *save_it {
                        save(&cli.store, std::slice::from_ref(&record))?;
                    }
                    out.records(&[record])?;
                }
                _ => return Err(usage("decompose takes either --p and --q, or --k")),
            }
        }
        Verb::Table { ring, from, to, full, from_store, bounds } => {
            let params = params(ring)?;
            let gens: Vec<KappaPolynomial<Q>> = if *from_store {
                let s = open_store(&cli.store)?;
                s.for_ring(ring.g, ring.d).into_iter().map(|r| r.poly.clone()).collect()
            } else {
                generate_irw(&bounds.config(ring)).map_err(fail)?.into_iter().map(|r| r.poly).collect()
            };
            let scope = if *full { BasisScope::Full } else { BasisScope::Euler };
            let rows = relation_table(&params, &gens, *from, *to, scope);
            match out.format {
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut out.sink);
                    if rows.is_empty() {
                        w.write_record(["degree", "dimension", "rank", "quotient"]).map_err(fail)?;
                    }
                    for r in &rows {
                        w.serialize(r).map_err(fail)?;
                    }
                    w.flush().map_err(fail)?;
                }
                Format::Latex => out.line(table_latex(&rows).trim_end())?,
                Format::Json => out.line(serde_json::to_string(&rows).map_err(fail)?)?,
                Format::Text => {
                    out.line("degree  dim  rank  quotient")?;
                    for r in &rows {
                        out.line(format!("{:>6}  {:>3}  {:>4}  {:>8}", r.degree, r.dimension, r.rank, r.quotient))?;
                    }
                }
            }
        }
    }
    out.sink.flush().map_err(fail)?;
    Ok(passed)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Fail(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
