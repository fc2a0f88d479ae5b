use std::io::Write;

use bracketwords::analysis::{self, Recurrence};
use bracketwords::exactreal::{parse_rational, RealValue};
use bracketwords::gpexpr::{format_expr, parse_expr, sum_normal_form, Expr};
use bracketwords::pisot::make_pisot_unit;
use bracketwords::sclab::{halfspace_cuts, lattice_approx, prefix_count_experiment, reconstruction_experiment, CutFamily};
use bracketwords::verify;
use bracketwords::words::{Word, WordCatalog};
use bracketwords::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};

use crate::{AnalyzeArgs, Cli, Command, LatticeCommand, Measure, PisotArgs};

pub enum Failure {
    Lib(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

type Out<'a> = &'a mut dyn Write;
type Run = std::result::Result<u8, Failure>;

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn emit(out: Out, v: Value) -> std::io::Result<()> {
    writeln!(out, "{v}")
}

fn catalog(cli: &Cli) -> Result<WordCatalog> {
    let mut cat = WordCatalog::with_defaults();
    for path in &cli.defs {
        let src = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        cat.load(&src)?;
    }
    Ok(cat)
}

pub fn dispatch(cli: &Cli, out: Out) -> Run {
    let cat = catalog(cli)?;
    match &cli.command {
        Command::Parse { expr, normal } => parse(&cat, expr, *normal, out),
        Command::Eval { expr, n, to } => eval(&cat, expr, *n, to.unwrap_or(*n), out),
        Command::Gen { word, range, start, raw, lines } => gen(&cat.resolve(word)?, *range, *start, *raw, *lines, out),
        Command::Analyze(a) => analyze(&cat, a, out),
        Command::Pisot(p) => pisot(p, out),
        Command::Lattice { command } => lattice(&cat, command, cli.seed, out),
        Command::Verify { suite, json, timings } => run_verify(suite.as_deref(), *json, *timings, cli.seed, out),
        Command::List => {
            for name in cat.names() {
                emit(out, json!({ "name": name, "definition": cat.definition(name) }))?;
            }
            Ok(0)
        }
    }
}

fn parse_in(cat: &WordCatalog, src: &str) -> Result<Expr> {
    parse_expr(src, &cat.context_for(src)?)
}

fn parse(cat: &WordCatalog, src: &str, normal: bool, out: Out) -> Run {
    let e = parse_in(cat, src)?;
    let mut rec = json!({
        "expr": format_expr(&e),
        "height": e.height(),
        "parametric": e.is_parametric(),
        "params": e.index_set(),
    });
    if normal {
        rec["normal_form"] = json!(format_expr(&sum_normal_form(&e)?.to_expr()));
    }
    emit(out, rec)?;
    Ok(0)
}

fn value_text(v: &RealValue) -> String {
    match v.as_rational() {
        Some(q) => q.to_string(),
        None => v.label(),
    }
}

fn eval(cat: &WordCatalog, src: &str, from: i64, to: i64, out: Out) -> Run {
    if to < from {
        return Err(usage(format!("empty range {from}..={to}")).into());
    }
    let e = parse_in(cat, src)?;
    for n in from..=to {
        let v = e.eval_i64(n)?;
        emit(out, json!({ "n": n, "value": value_text(&v), "approx": v.to_f64() }))?;
    }
    Ok(0)
}

fn gen(w: &Word, len: usize, start: u64, raw: bool, lines: bool, out: Out) -> Run {
    let start = usize::try_from(start).map_err(|_| usage("start too large"))?;
    let syms = w.slice(start, start + len)?;
    let alpha = w.alphabet();
    if raw {
        if alpha.len() > 256 {
            return Err(usage("alphabet too large for --raw").into());
        }
        let bytes: Vec<u8> = syms.iter().map(|&s| s as u8).collect();
        out.write_all(&bytes)?;
    } else if lines {
        for s in syms {
            writeln!(out, "{}", alpha.label(s))?;
        }
    } else {
        let sep = if alpha.is_compact() { "" } else { " " };
        let labels: Vec<&str> = syms.iter().map(|&s| alpha.label(s)).collect();
        writeln!(out, "{}", labels.join(sep))?;
    }
    Ok(0)
}

/// `1,2,5`, `a..b` or `a..=b`.
fn parse_list(src: &str) -> Result<Vec<usize>> {
    let bad = || usage(format!("invalid list `{src}`"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let s = src.trim();
    if let Some((a, b)) = s.split_once("..") {
        let (lo, hi) = match b.strip_prefix('=') {
            Some(b) => (num(a)?, num(b)?),
            None => (num(a)?, num(b)?.checked_sub(1).ok_or_else(bad)?),
        };
        if hi < lo {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',').map(num).collect()
}

fn symbol(w: &Word, label: Option<&str>) -> Result<u32> {
    let alpha = w.alphabet();
    match label {
        Some(l) => alpha.index_of(l).ok_or_else(|| usage(format!("symbol `{l}` not in the alphabet"))),
        None => Ok(alpha.index_of("1").unwrap_or(0)),
    }
}

fn factor(w: &Word, src: &str) -> Result<Vec<u32>> {
    let alpha = w.alphabet();
    let look = |l: &str| alpha.index_of(l).ok_or_else(|| usage(format!("symbol `{l}` not in the alphabet")));
    if src.contains(',') {
        src.split(',').map(|l| look(l.trim())).collect()
    } else {
        src.chars().map(|c| look(&c.to_string())).collect()
    }
}

fn analyze(cat: &WordCatalog, a: &AnalyzeArgs, out: Out) -> Run {
    let w = cat.resolve(&a.word)?;
    let ns = match &a.n {
        Some(s) => parse_list(s)?,
        None => (1..=20).collect(),
    };
    let name = format!("{:?}", a.measure).to_lowercase();
    let mut rows: Vec<(usize, Value)> = Vec::new();
    match a.measure {
        Measure::Complexity => {
            let p = analysis::subword_complexity(&w, &ns, a.horizon)?;
            rows = p.table.iter().map(|&(n, c)| (n, json!(c))).collect();
        }
        Measure::Freq => {
            let f = factor(&w, a.factor.as_deref().ok_or_else(|| usage("--factor is required for freq"))?)?;
            let starts = match &a.starts {
                Some(s) => parse_list(s)?,
                None => vec![0],
            };
            let r = analysis::frequency(&w, &f, &starts, &ns)?;
            if !a.csv {
                for row in &r.rows {
                    emit(
                        out,
                        json!({ "measure": name, "N": row.n, "value": row.estimates, "counts": row.counts,
                                "spread": row.spread, "starts": r.starts, "horizon": r.horizon }),
                    )?;
                }
                return Ok(0);
            }
            rows = r.rows.iter().map(|row| (row.n, json!(row.estimates.first()))).collect();
        }
        Measure::Rec => {
            let f = factor(&w, a.factor.as_deref().ok_or_else(|| usage("--factor is required for rec"))?)?;
            let rec = analysis::recurrence_function(&w, &f, a.horizon)?;
            let rec = match rec {
                Recurrence::Bounded { rec, horizon } => {
                    json!({ "measure": name, "N": f.len(), "value": rec, "bounded": true, "horizon": horizon })
                }
                Recurrence::Unbounded { max_gap, horizon } => {
                    json!({ "measure": name, "N": f.len(), "value": Value::Null, "max_gap": max_gap, "bounded": false, "horizon": horizon })
                }
            };
            if a.csv {
                writeln!(out, "N,value\n{},{}", rec["N"], rec["value"])?;
            } else {
                emit(out, rec)?;
            }
            return Ok(0);
        }
        Measure::Count | Measure::Discrepancy => {
            let x = symbol(&w, a.symbol.as_deref())?;
            let r = analysis::counting_and_discrepancy(&w, x, &ns, a.horizon)?;
            rows =
                r.samples.iter().map(|s| (s.n, if a.measure == Measure::Count { json!(s.count) } else { json!(s.discrepancy) })).collect();
        }
        Measure::Balance => {
            let x = symbol(&w, a.symbol.as_deref())?;
            let longest = ns.iter().copied().max().unwrap_or(0);
            let s = w.prefix(a.horizon.max(longest))?;
            for &n in &ns {
                rows.push((n, json!(analysis::balance_of(&s, x, n))));
            }
        }
    }
    if a.csv {
        writeln!(out, "N,value")?;
        for (n, v) in rows {
            writeln!(out, "{n},{v}")?;
        }
    } else {
        for (n, v) in rows {
            emit(out, json!({ "measure": name, "N": n, "value": v, "horizon": a.horizon }))?;
        }
    }
    Ok(0)
}

fn pisot(p: &PisotArgs, out: Out) -> Run {
    let u = make_pisot_unit(p.a, p.b)?;
    if let Some(t) = &p.test {
        let n: BigInt = t.trim().parse().map_err(|_| usage(format!("invalid integer `{t}`")))?;
        emit(out, json!({ "a": p.a, "b": p.b, "n": n.to_string(), "member": u.membership_test(&n)? }))?;
    } else if let Some(len) = p.word {
        writeln!(out, "{}", u.power_word().render_auto(len)?)?;
    } else {
        let traces: Vec<String> = u.trace_sequence(12).iter().map(|t| t.to_string()).collect();
        emit(
            out,
            json!({
                "a": p.a,
                "b": p.b,
                "beta": u.beta().to_f64(),
                "discriminant": u.discriminant().to_string(),
                "fundamental": u.is_fundamental(),
                "exceptions": u.exception_table(),
                "traces": traces,
            }),
        )?;
    }
    Ok(0)
}

/// Constants as exact values in one common field, e.g. `1,sqrt(2),sqrt(3)`.
fn constants(cat: &WordCatalog, list: &str) -> Result<Vec<RealValue>> {
    let ctx = cat.context_for(list)?;
    list.split(',')
        .map(|src| {
            let e = parse_expr(src, &ctx)?;
            if e.mentions_var() || e.is_parametric() {
                return Err(usage(format!("`{}` is not a constant", src.trim())));
            }
            e.eval_i64(0)
        })
        .collect()
}

fn read_points(path: &std::path::Path) -> Result<Vec<Vec<i64>>> {
    let src = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let mut pts = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let p: std::result::Result<Vec<i64>, _> =
            line.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).map(str::parse).collect();
        pts.push(p.map_err(|_| usage(format!("{}:{}: expected integers", path.display(), i + 1)))?);
    }
    Ok(pts)
}

fn lattice(cat: &WordCatalog, cmd: &LatticeCommand, seed: u64, out: Out) -> Run {
    match cmd {
        LatticeCommand::Approx { alpha, eps, n } => {
            let alpha = constants(cat, alpha)?;
            let eps = RealValue::from(parse_rational(eps)?);
            let (l, cert) = lattice_approx(&alpha, &eps, *n)?;
            emit(
                out,
                json!({
                    "dim": l.dim(),
                    "rank": l.rank(),
                    "basis": l.basis(),
                    "index": l.index().map(|i| i.to_string()),
                    "certificate": cert,
                }),
            )?;
        }
        LatticeCommand::Cuts { points, list } => {
            let pts = read_points(points)?;
            let fam = halfspace_cuts(&pts)?;
            let mut rec = json!({
                "n": fam.n,
                "dim": fam.dim,
                "cuts": fam.len(),
                "harding_bound": fam.harding_bound().to_string(),
                "within_bound": fam.within_bound(),
            });
            if *list {
                rec["members"] = json!(fam.cuts.iter().map(|&m| CutFamily::members(m)).collect::<Vec<_>>());
            }
            emit(out, rec)?;
        }
        LatticeCommand::Prefix { h, n, r, step, verify } => {
            let mut rows = Vec::with_capacity(h.len());
            for src in h {
                let e = parse_in(cat, src)?;
                let mut row = Vec::with_capacity(*n);
                for k in 0..*n as i64 {
                    let v = e.eval_i64(k)?;
                    let z = v.as_integer().ok_or_else(|| Error::NotAnInteger(v.label()))?;
                    row.push(i64::try_from(z).map_err(|_| Error::Overflow("prefix sequence"))?);
                }
                rows.push(row);
            }
            let step = parse_rational(step)?;
            emit(out, json!({ "count": prefix_count_experiment(&rows, *r, &step)? }))?;
            if let Some(samples) = verify {
                let rep = reconstruction_experiment(&rows, *r, *samples, seed, &BigRational::one())?;
                emit(out, json!({ "reconstruction": rep, "seed": seed }))?;
            }
        }
    }
    Ok(0)
}

fn run_verify(suite: Option<&str>, as_json: bool, timings: bool, seed: u64, out: Out) -> Run {
    let checks = verify::select(suite)?;
    let mut failed = 0;
    for c in checks {
        let r = verify::run_check(c, seed);
        failed += usize::from(!r.pass);
        if as_json {
            let mut rec = json!({ "id": r.id, "suite": r.suite, "name": r.name, "pass": r.pass, "detail": r.detail });
            if timings {
                rec["seconds"] = json!(r.seconds);
                rec["budget_seconds"] = json!(r.budget_seconds);
            }
            emit(out, rec)?;
        } else if timings {
            writeln!(out, "{}", r.line())?;
        } else {
            writeln!(out, "{} {:>2} {:<24} {}", if r.pass { "PASS" } else { "FAIL" }, r.id, r.name, r.detail)?;
        }
        out.flush()?;
    }
    Ok(if failed == 0 { 0 } else { 1 })
}
