//! `qdouble` command-line front end.
//!
//! Exit codes: 0 pass, 1 identity failure, 2 precondition, 3 budget, 4 config.

mod select;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qdouble::doubles::Multiplicities;
use qdouble::lattice::geometry::{fc, vx};
use qdouble::lattice::{condensation_table, lattice_suite, vacuum_one, Lattice, QuasiBasis, Ribbon, Side, Site};
use qdouble::quasihopf::{CochainTwist, QuasiHopf, StarStructure};
use qdouble::report::{Report, Status};
use qdouble::surgery::{proportional_residual, MeasurementRecord, Surgery, SurgeryOp};
use qdouble::{Error, C64, TOL};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use select::TransversalSel;

#[derive(Parser)]
#[command(name = "qdouble", version, about = "Boundary algebras, lattice models and surgery for the quantum double")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Clone, Default)]
struct Sel {
    /// Catalog name (s3/standard, sn/cyclic/4, octonion, ...) or, with
    /// --group, a comma-separated list of representatives.
    #[arg(long)]
    transversal: Option<String>,
    /// Group catalog name (s3, z4, s4, d4, q8) or JSON file.
    #[arg(long)]
    group: Option<String>,
    /// Subgroup: trivial, whole, or comma-separated generators.
    #[arg(long)]
    subgroup: Option<String>,
}

impl Sel {
    fn get(&self) -> TransversalSel {
        TransversalSel { transversal: self.transversal.clone(), group: self.group.clone(), subgroup: self.subgroup.clone() }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one verification suite.
    Verify {
        #[arg(value_enum)]
        target: Target,
        #[command(flatten)]
        sel: Sel,
        /// Twist source transversal (twist target, or antipode on a non-regular R).
        #[arg(long)]
        from: Option<String>,
        /// Twist destination transversal.
        #[arg(long)]
        to: Option<String>,
        /// Build the antipode by twisting from this regular transversal.
        #[arg(long)]
        via_twist: Option<String>,
        /// Strip width for the lattice suite.
        #[arg(long, default_value = "3")]
        size: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Boundary-vs-bulk multiplicity table.
    Multiplicities {
        #[command(flatten)]
        sel: Sel,
    },
    /// Lattice surgery on patches.
    Surgery {
        #[command(subcommand)]
        action: SurgeryCmd,
    },
    /// Lattice identities on a smooth-boundary strip.
    VerifyLattice {
        #[command(flatten)]
        sel: Sel,
        #[arg(long, default_value = "3")]
        size: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Apply a closed-label ribbon to the vacuum and list the excitations.
    RibbonDemo {
        #[arg(long, default_value = "s3")]
        group: String,
        #[arg(long, default_value = "2x1")]
        size: String,
        /// Largest amplitude count to attempt.
        #[arg(long, default_value_t = 1 << 20)]
        budget: usize,
        /// Bulk label "class-rep/irrep", e.g. uv/1; defaults to the last one.
        #[arg(long)]
        label: Option<String>,
        /// Include the resulting state in the output.
        #[arg(long)]
        state: bool,
    },
    /// Condense bulk labels onto a smooth boundary.
    Condense {
        #[command(flatten)]
        sel: Sel,
        #[arg(long, default_value = "2")]
        size: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    MatchedPair,
    Quasibialgebra,
    Antipode,
    Star,
    Twist,
    Lattice,
}

#[derive(Subcommand)]
enum SurgeryCmd {
    /// One run on a logical basis input.
    Run(SurgeryArgs),
    /// The full logical map, every outcome trivial.
    Table(SurgeryArgs),
    /// Re-run a record saved by `surgery run --format json`.
    Replay {
        record: PathBuf,
    },
}

#[derive(Args)]
struct SurgeryArgs {
    #[arg(long, default_value = "s3")]
    group: String,
    #[arg(long)]
    op: String,
    /// Logical input, `h=u` for one patch or `h=u,v` for two.
    #[arg(long)]
    input: Option<String>,
    /// Sample outcomes with this seed; without it every outcome is trivial.
    #[arg(long)]
    seed: Option<u64>,
    /// Patch size WxH; minimal geometry if absent.
    #[arg(long)]
    size: Option<String>,
    /// Largest amplitude count to attempt.
    #[arg(long, default_value_t = 1 << 22)]
    budget: usize,
}

/// What a command produced.
struct Output {
    pass: bool,
    json: Value,
    text: String,
    csv: Option<String>,
}

fn envelope(command: &str, selection: &str, seed: Option<u64>, pass: bool, result: Value) -> Value {
    json!({
        "tool": "qdouble",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "selection": selection,
        "seed": seed,
        "tolerance": TOL,
        "pass": pass,
        "result": result,
    })
}

fn report_text(rep: &Report) -> String {
    let mut s = format!("{}\n", rep.suite);
    for c in &rep.checks {
        let tag = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Flagged => "FLAG",
        };
        let _ = write!(s, "  {tag} {} (residual {:.2e})", c.identity, c.residual);
        if let Some(w) = &c.witness {
            let _ = write!(s, " [{w}]");
        }
        s.push('\n');
    }
    s
}

fn report_output(command: &str, selection: &str, seed: Option<u64>, rep: Report) -> Output {
    let pass = rep.all_pass();
    let text = report_text(&rep);
    let csv = Some(rep.checks.iter().fold("identity,status,residual\n".to_string(), |mut s, c| {
        let _ = writeln!(s, "\"{}\",{:?},{:e}", c.identity.replace('"', "'"), c.status, c.residual);
        s
    }));
    Output { pass, json: envelope(command, selection, seed, pass, serde_json::to_value(&rep).unwrap()), text, csv }
}

fn verify(target: Target, sel: &Sel, from: Option<&str>, to: Option<&str>, via: Option<&str>, size: &str, seed: u64) -> Result<Output> {
    let s = sel.get();
    let report = match target {
        Target::MatchedPair => s.resolve()?.verify_matched_pair(),
        Target::Quasibialgebra => QuasiHopf::standard(s.resolve()?).verify_bialgebra(),
        Target::Antipode => {
            let td = s.resolve()?;
            match via {
                Some(src) => {
                    let src = TransversalSel { transversal: Some(src.into()), ..Default::default() }.resolve()?;
                    let tw = CochainTwist::new(src, td)?;
                    let ap = tw.twisted_antipode()?;
                    tw.dst.verify_antipode_with(&ap)
                }
                None if !td.regular => {
                    return Err(Error::Precondition(format!(
                        "{} is not regular; pass --via-twist with a regular source",
                        s.describe()
                    ))
                    .into())
                }
                None => QuasiHopf::standard(td).verify_antipode(),
            }
        }
        Target::Star => {
            let qh = QuasiHopf::standard(s.resolve()?);
            StarStructure::new(&qh)?.verify(&qh)
        }
        Target::Twist => {
            let (from, to) = match (from, to) {
                (Some(f), Some(t)) => (f, t),
                _ => return Err(Error::Config("twist needs --from and --to".into()).into()),
            };
            let res = CochainTwist::from_names(from, to)?.verify();
            return Ok(report_output("verify twist", &format!("{from} -> {to}"), None, res));
        }
        Target::Lattice => return verify_lattice(sel, size, seed),
    };
    Ok(report_output("verify", &s.describe(), None, report))
}

fn verify_lattice(sel: &Sel, size: &str, seed: u64) -> Result<Output> {
    let s = sel.get();
    let (w, _) = select::size(size)?;
    let rep = lattice_suite(&s.resolve()?, w, seed)?;
    Ok(report_output("verify-lattice", &s.describe(), Some(seed), rep))
}

fn multiplicities(sel: &Sel) -> Result<Output> {
    let s = sel.get();
    let m = Multiplicities::new(s.resolve()?)?;
    let t = m.table()?;
    let csv = t.to_csv();
    Ok(Output {
        pass: true,
        json: envelope("multiplicities", &s.describe(), None, true, serde_json::to_value(&t)?),
        text: csv.replace(',', "\t"),
        csv: Some(csv),
    })
}

fn condense(sel: &Sel, size: &str) -> Result<Output> {
    let s = sel.get();
    let (w, _) = select::size(size)?;
    let m = Multiplicities::new(s.resolve()?)?;
    let t = condensation_table(&m, w)?;
    let mismatch = t.mismatch(TOL);
    let pass = mismatch.is_none() && t.stabilizer_residual < TOL;
    let mut csv = format!("xi\\dg,{}\n", t.col_labels.join(","));
    for (l, row) in t.row_labels.iter().zip(&t.norms) {
        let vals: Vec<String> = row.iter().map(|x| format!("{x:.6}")).collect();
        let _ = writeln!(csv, "{l},{}", vals.join(","));
    }
    let mut text = format!("‖P_i W^a|vac⟩‖ / ‖W^a|vac⟩‖ on a {w}x1 strip\n{}", csv.replace(',', "\t"));
    let _ = writeln!(text, "stabilizer residual {:.2e}", t.stabilizer_residual);
    match mismatch {
        None => text.push_str("zero pattern matches the multiplicities\n"),
        Some((i, j)) => {
            let _ = writeln!(text, "zero pattern differs at ({}, {})", t.row_labels[i], t.col_labels[j]);
        }
    }
    Ok(Output { pass, json: envelope("condense", &s.describe(), None, pass, serde_json::to_value(&t)?), text, csv: Some(csv) })
}

fn ribbon_demo(group: &str, size: &str, budget: usize, label: Option<&str>, with_state: bool) -> Result<Output> {
    let g = select::group(group)?;
    let (w, h) = select::size(size)?;
    if w < 2 || h < 1 {
        return Err(Error::Config("ribbon demo needs at least 2x1 faces".into()).into());
    }
    let lat = Arc::new(Lattice::grid(g.clone(), w, h, Side::Open)?);
    let support = (g.order() as f64).powi(lat.vertex_terms.len() as i32);
    if support > budget as f64 {
        return Err(Error::Budget(format!("vacuum has {support:.0} amplitudes, budget {budget}")).into());
    }
    let qb = QuasiBasis::new(g.clone())?;
    let names: Vec<String> = qb.bulk.labels().iter().map(|&l| qb.bulk.name(l)).collect();
    let pick = match label {
        Some(l) => names.iter().position(|n| n == l).ok_or_else(|| Error::Config(format!("unknown label {l}; known: {}", names.join(" "))))?,
        None => names.len() - 1,
    };
    let r = h / 2;
    let start = Site::new(vx(r, 0), fc(r, -1))?;
    let path: Vec<_> = (0..w).map(|c| vx(r, c)).collect();
    let rib = Ribbon::along(&lat, start, &path, fc(r, w - 1))?;
    let vac = vacuum_one(lat.clone())?;
    let psi = rib.apply_combo(&vac, &qb.trace(qb.bulk.labels()[pick]))?;
    if psi.norm() < qdouble::PRUNE {
        return Err(Error::Numeric("ribbon annihilated the vacuum".into()).into());
    }
    let excitations = psi.excitations(TOL)?;
    let ends = [
        format!("A({},{})", rib.start.v.r, rib.start.v.c),
        format!("B({},{})", rib.start.p.r, rib.start.p.c),
        format!("A({},{})", rib.end.v.r, rib.end.v.c),
        format!("B({},{})", rib.end.p.r, rib.end.p.c),
    ];
    let localized = excitations.iter().all(|e| ends.contains(e));
    let mut result = json!({
        "label": names[pick],
        "lattice": format!("{w}x{h}"),
        "ribbon": serde_json::from_str::<Value>(&rib.to_json())?,
        "excitations": excitations,
        "energy": psi.energy()?,
        "amplitudes": psi.len(),
        "localized_at_endpoints": localized,
    });
    if with_state {
        result["state"] = serde_json::from_str(&psi.normalized()?.to_json())?;
    }
    let text = format!(
        "W^{{{}}} along row {r} of a {w}x{h} grid\nexcited terms: {}\nenergy {:.6}, {} amplitudes, localized at endpoints: {localized}\n",
        names[pick],
        if excitations.is_empty() { "none".to_string() } else { excitations.join(" ") },
        psi.energy()?,
        psi.len()
    );
    Ok(Output { pass: localized, json: envelope("ribbon-demo", group, None, localized, result), text, csv: None })
}

// Surgery ---------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct RunSpec {
    group: String,
    op: String,
    input: Vec<String>,
    size: Option<String>,
}

fn build_surgery(group: &str, op: &str, size: Option<&str>, budget: usize) -> Result<(Surgery, SurgeryOp)> {
    let g = select::group(group)?;
    let op = SurgeryOp::parse(op).ok_or_else(|| {
        let known: Vec<&str> = SurgeryOp::ALL.iter().map(|o| o.name()).collect();
        Error::Config(format!("unknown op {op}; known: {}", known.join(", ")))
    })?;
    let s = match size {
        None => Surgery::minimal(g, op)?,
        Some(sz) => {
            let (w, h) = select::size(sz)?;
            let est = Surgery::estimate_sized(g.order(), op, w, h);
            if est > budget as f64 {
                return Err(Error::Budget(format!("about {est:.0} amplitudes, budget {budget}")).into());
            }
            Surgery::sized(g, op, w, h)?
        }
    };
    Ok((s, op))
}

fn logical_label(s: &Surgery, code: &qdouble::surgery::PatchCode, idx: usize) -> String {
    let g = s.group();
    code.labels_of(idx).iter().map(|&h| g.label(h)).collect::<Vec<_>>().join("⊗")
}

fn parse_input(s: &Surgery, input: Option<&str>) -> Result<Vec<usize>> {
    let g = s.group();
    let n = s.source.n_patches();
    let list = match input {
        Some(i) => i.strip_prefix("h=").unwrap_or(i).to_string(),
        None => vec![g.label(0); n].join(","),
    };
    let labels = select::labels(g, &list)?;
    if labels.len() != n {
        return Err(Error::Config(format!("{} takes {n} input label(s), got {}", s.op.name(), labels.len())).into());
    }
    Ok(labels)
}

/// Nonzero entries of a logical vector, scaled to unit norm.
fn vector_json(s: &Surgery, v: &nalgebra::DVector<C64>) -> Value {
    let n = v.norm();
    let mut terms = Vec::new();
    for (i, c) in v.iter().map(|c| if n > TOL { c / n } else { *c }).enumerate() {
        if c.norm() > TOL {
            terms.push(json!({"label": logical_label(s, &s.target, i), "re": round(c.re), "im": round(c.im)}));
        }
    }
    Value::Array(terms)
}

/// Trim float noise so reports are stable text.
fn round(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn surgery_execute(spec: &RunSpec, s: &Surgery, labels: &[usize], record: Option<MeasurementRecord>, seed: Option<u64>) -> Result<Output> {
    let input = s.source.logical(labels)?;
    let (out, rec) = match (record, seed) {
        (Some(r), _) => (s.replay(&input, &r)?, r),
        (None, Some(seed)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (o, mut r) = s.sample(&input, &mut rng, None)?;
            r.seed = Some(seed);
            (o, r)
        }
        (None, None) => s.run(&input, |_, _| 0, None)?,
    };
    let (v, leak) = s.target.readout(&out)?;
    let in_idx = labels.iter().fold(0, |a, &h| a * s.group().order() + h);
    let reference = s.reference(rec.byproduct);
    let expected = reference.column(in_idx).into_owned();
    let (_, res) = proportional_residual(&nalgebra::DMatrix::from_column_slice(v.len(), 1, v.as_slice()), &nalgebra::DMatrix::from_column_slice(expected.len(), 1, expected.as_slice()));
    let vanishing = expected.norm() < TOL && v.norm() < TOL;
    let pass = leak < TOL && (res < TOL || vanishing);
    let result = json!({
        "spec": spec,
        "hopf_map": s.op.hopf_map(),
        "output": vector_json(s, &v),
        "expected": vector_json(s, &expected),
        "leak": round(leak),
        "record": rec,
    });
    let mut text = format!(
        "{} ({}) on |{}⟩\n",
        s.op.name(),
        s.op.hopf_map(),
        labels.iter().map(|&h| s.group().label(h)).collect::<Vec<_>>().join("⊗")
    );
    for st in &rec.steps {
        let _ = writeln!(text, "  outcome {} (p={:.4}) correction {:?}", st.label, st.probability, st.correction);
    }
    if let Some(b) = rec.byproduct {
        let _ = writeln!(text, "  byproduct {b:?}");
    }
    let _ = writeln!(text, "output {}", result["output"]);
    let _ = writeln!(text, "matches the Hopf map: {pass} (residual {res:.1e}, leak {leak:.1e})");
    Ok(Output { pass, json: envelope("surgery run", &spec.group, seed.or(rec.seed), pass, result), text, csv: None })
}

fn surgery_run(a: &SurgeryArgs) -> Result<Output> {
    let (s, op) = build_surgery(&a.group, &a.op, a.size.as_deref(), a.budget)?;
    let labels = parse_input(&s, a.input.as_deref())?;
    let spec = RunSpec {
        group: a.group.clone(),
        op: op.name().into(),
        input: labels.iter().map(|&h| s.group().label(h).to_string()).collect(),
        size: a.size.clone(),
    };
    surgery_execute(&spec, &s, &labels, None, a.seed)
}

fn surgery_replay(path: &PathBuf) -> Result<Output> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| Error::Config(format!("record file: {e}")))?;
    let spec: RunSpec = serde_json::from_value(doc["result"]["spec"].clone()).map_err(|e| Error::Config(format!("record spec: {e}")))?;
    let rec: MeasurementRecord =
        serde_json::from_value(doc["result"]["record"].clone()).map_err(|e| Error::Config(format!("record: {e}")))?;
    let (s, _) = build_surgery(&spec.group, &spec.op, spec.size.as_deref(), usize::MAX)?;
    let labels = parse_input(&s, Some(&spec.input.join(",")))?;
    let seed = rec.seed;
    surgery_execute(&spec, &s, &labels, Some(rec), seed)
}

fn surgery_table(a: &SurgeryArgs) -> Result<Output> {
    let (s, op) = build_surgery(&a.group, &a.op, a.size.as_deref(), a.budget)?;
    let (m, leak) = s.logical_map(|x| s.apply(x))?;
    let (scale, res) = proportional_residual(&m, &s.reference(None));
    // Report the map up to the overall normalisation of the logical bases.
    let m = if scale.norm() > TOL { m.map(|x| x / scale) } else { m };
    let pass = leak < TOL && res < TOL;
    let rows: Vec<String> = (0..m.nrows()).map(|i| logical_label(&s, &s.target, i)).collect();
    let cols: Vec<String> = (0..m.ncols()).map(|j| logical_label(&s, &s.source, j)).collect();
    let cell = |c: C64| {
        if c.im.abs() < TOL {
            format!("{}", round(c.re))
        } else {
            format!("{}{:+}i", round(c.re), round(c.im))
        }
    };
    let mut csv = format!("out\\in,{}\n", cols.join(","));
    for (i, r) in rows.iter().enumerate() {
        let vals: Vec<String> = (0..m.ncols()).map(|j| cell(m[(i, j)])).collect();
        let _ = writeln!(csv, "{r},{}", vals.join(","));
    }
    let re: Vec<Vec<f64>> = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| round(m[(i, j)].re)).collect()).collect();
    let im: Vec<Vec<f64>> = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| round(m[(i, j)].im)).collect()).collect();
    let result = json!({
        "op": op.name(),
        "hopf_map": op.hopf_map(),
        "rows": rows,
        "cols": cols,
        "re": re,
        "im": im,
        "scale": {"re": round(scale.re), "im": round(scale.im)},
        "residual": round(res),
        "leak": round(leak),
    });
    let text = format!(
        "{} ({}), {}x{} logical map up to scale {:.6}, residual {res:.1e}, leak {leak:.1e}\n{}",
        op.name(),
        op.hopf_map(),
        m.nrows(),
        m.ncols(),
        scale.norm(),
        csv.replace(',', "\t")
    );
    Ok(Output { pass, json: envelope("surgery table", &a.group, None, pass, result), text, csv: Some(csv) })
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Precondition(_)) => 2,
        Some(Error::Budget(_)) => 3,
        Some(Error::Config(_) | Error::InvalidGroup(_) | Error::InvalidSubgroup(_) | Error::NotTransversal(_)) => 4,
        Some(_) => 1,
        None => 4,
    }
}

fn dispatch(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Verify { target, sel, from, to, via_twist, size, seed } => {
            verify(*target, sel, from.as_deref(), to.as_deref(), via_twist.as_deref(), size, *seed)
        }
        Command::Multiplicities { sel } => multiplicities(sel),
        Command::Surgery { action } => match action {
            SurgeryCmd::Run(a) => surgery_run(a),
            SurgeryCmd::Table(a) => surgery_table(a),
            SurgeryCmd::Replay { record } => surgery_replay(record),
        },
        Command::VerifyLattice { sel, size, seed } => verify_lattice(sel, size, *seed),
        Command::RibbonDemo { group, size, budget, label, state } => ribbon_demo(group, size, *budget, label.as_deref(), *state),
        Command::Condense { sel, size } => condense(sel, size),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match dispatch(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(&out.json).expect("json") + "\n",
        Format::Csv => match out.csv {
            Some(c) => c,
            None => {
                eprintln!("error: this command has no CSV form");
                return ExitCode::from(4);
            }
        },
        Format::Text => out.text,
    };
    let written = match &cli.out {
        Some(p) => std::fs::write(p, body).with_context(|| format!("writing {}", p.display())),
        None => std::io::stdout().write_all(body.as_bytes()).context("writing stdout"),
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(4);
    }
    ExitCode::from(if out.pass { 0 } else { 1 })
}
