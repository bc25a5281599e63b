//! Command-line driver: loads `.ta`/`.scm` files, runs one library
//! operation and renders a [`Report`].
//!
//! Exit codes: 0 success, 1 a check failed (the report is still emitted),
//! 2 usage or IO error.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use tablealg::closed::{all_closed_subsets, is_normal, DEFAULT_CLOSED_SUBSET_CAP};
use tablealg::homquot::quotient;
use tablealg::io::{parse_phi, parse_scm, parse_ta_document, write_scm, write_ta};
use tablealg::iso::check_isomorphism;
use tablealg::repchar::{irr_characters, standard_multiplicities};
use tablealg::schemes::{scheme_quotient, subscheme, uniform_scheme_wedge, verify_scheme_wedge_chars};
use tablealg::wedge::{detect_wedge, verify_main2, wedge_product, wreath_product, BasisOrigin, WedgeProduct};
use tablealg::{rescale_to_standard, AlgebraHom, ClosedSubset, Error, Main2Report, Scheme, TableAlgebra, DEFAULT_TOL};

#[derive(Debug, Parser)]
#[command(name = "tablealg", version, about = "Table algebras, schemes and wedge products")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Numerical tolerance for axiom checks.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Seed for the character engine.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the produced `.ta`/`.scm` (or the report, if none) to this path.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the axioms of a `.ta` or `.scm` file.
    Validate { file: PathBuf },
    /// Degree map of a table algebra.
    Degrees { file: PathBuf },
    /// All closed subsets with normality flags.
    Closed { file: PathBuf },
    /// Quotient by a closed subset, emitted as `.ta`.
    Quotient {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        by: Vec<usize>,
    },
    /// Irreducible characters and multiplicities.
    Chars { file: PathBuf },
    /// Wedge product relative to a map file (`source target scalar` lines).
    Wedge {
        c: PathBuf,
        a: PathBuf,
        #[arg(long)]
        phi: PathBuf,
    },
    /// Wreath product (wedge relative to the trivial homomorphism).
    Wreath { c: PathBuf, a: PathBuf },
    /// All internal wedge decompositions (K, D).
    DetectWedge { file: PathBuf },
    /// The four wedge conditions for given K ⊴ D.
    #[command(name = "verify-main2")]
    VerifyMain2 {
        file: PathBuf,
        #[arg(long = "K", value_delimiter = ',')]
        k: Vec<usize>,
        #[arg(long = "D", value_delimiter = ',')]
        d: Vec<usize>,
    },
    /// Adjacency algebra of a scheme, emitted as `.ta`.
    #[command(name = "scheme2ta")]
    Scheme2ta { file: PathBuf },
    /// Quotient scheme by a closed relation subset, emitted as `.scm`.
    SchemeQuotient {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        by: Vec<usize>,
    },
    /// Subscheme on the block `xH`, emitted as `.scm`.
    Subscheme {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        by: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        point: usize,
    },
    /// Uniform scheme wedge: copies of FIBER glued over BASE along D and K.
    SchemeWedge {
        base: PathBuf,
        fiber: PathBuf,
        #[arg(long = "D", value_delimiter = ',')]
        d: Vec<usize>,
        #[arg(long = "K", value_delimiter = ',')]
        k: Vec<usize>,
    },
    /// The four wedge conditions for a scheme, with K ⊴ B.
    VerifySchemeWedge {
        file: PathBuf,
        #[arg(long = "K", value_delimiter = ',')]
        k: Vec<usize>,
        #[arg(long = "B", value_delimiter = ',')]
        b: Vec<usize>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Degrees { .. } => "degrees",
            Command::Closed { .. } => "closed",
            Command::Quotient { .. } => "quotient",
            Command::Chars { .. } => "chars",
            Command::Wedge { .. } => "wedge",
            Command::Wreath { .. } => "wreath",
            Command::DetectWedge { .. } => "detect-wedge",
            Command::VerifyMain2 { .. } => "verify-main2",
            Command::Scheme2ta { .. } => "scheme2ta",
            Command::SchemeQuotient { .. } => "scheme-quotient",
            Command::Subscheme { .. } => "subscheme",
            Command::SchemeWedge { .. } => "scheme-wedge",
            Command::VerifySchemeWedge { .. } => "verify-scheme-wedge",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub check: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// A named numeric matrix. `im` is present only for complex data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub rows: Vec<String>,
    pub columns: Vec<String>,
    pub re: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl Table {
    fn real(rows: Vec<String>, columns: Vec<String>, re: Vec<Vec<f64>>) -> Self {
        Table { rows, columns, re, im: None }
    }

    fn complex(rows: Vec<String>, columns: Vec<String>, values: &[Vec<Complex64>]) -> Self {
        let re = values.iter().map(|r| r.iter().map(|z| z.re).collect()).collect();
        let has_im = values.iter().flatten().any(|z| z.im != 0.0);
        let im = has_im.then(|| values.iter().map(|r| r.iter().map(|z| z.im).collect()).collect());
        Table { rows, columns, re, im }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub findings: Vec<Finding>,
    pub tables: BTreeMap<String, Table>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Produced `.ta` or `.scm` text, if the command emits one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub document: Option<String>,
}

impl Report {
    fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            findings: Vec::new(),
            tables: BTreeMap::new(),
            notes: Vec::new(),
            document: None,
        }
    }

    fn input(&mut self, key: &str, value: impl ToString) {
        self.inputs.insert(key.to_string(), value.to_string());
    }

    fn check(&mut self, id: &str, pass: bool, witness: Option<String>) {
        self.findings.push(Finding {
            check: id.to_string(),
            pass,
            witness,
        });
    }

    fn fail(&mut self, id: &str, e: &Error) {
        self.check(id, false, Some(format!("{}: {e}", error_kind(e))));
    }

    pub fn passed(&self) -> bool {
        self.findings.iter().all(|f| f.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        for (k, v) in &self.inputs {
            out.push_str(&format!("  {k}: {v}\n"));
        }
        for f in &self.findings {
            out.push_str(&format!("[{}] {}", if f.pass { "pass" } else { "FAIL" }, f.check));
            if let Some(w) = &f.witness {
                out.push_str(&format!(" -- {w}"));
            }
            out.push('\n');
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        for (name, t) in &self.tables {
            out.push_str(&format!("\n{name}:\n"));
            out.push_str(&render_table(t));
        }
        out
    }
}

/// Human-mode number: ten significant digits, near-integers as integers.
pub fn fmt_num(x: f64) -> String {
    let r = x.round();
    if (x - r).abs() < 1e-7 {
        return format!("{}", r as i64);
    }
    let s = format!("{:.9e}", x);
    let v: f64 = s.parse().unwrap_or(x);
    let t = format!("{v}");
    if t.len() <= 16 {
        t
    } else {
        s
    }
}

fn fmt_complex(re: f64, im: f64) -> String {
    if (im - im.round()).abs() < 1e-7 && im.round() == 0.0 {
        return fmt_num(re);
    }
    let sign = if im < 0.0 { "-" } else { "+" };
    let mag = fmt_num(im.abs());
    let mag = if mag == "1" { String::new() } else { mag };
    if (re - re.round()).abs() < 1e-7 && re.round() == 0.0 {
        let s = if im < 0.0 { "-" } else { "" };
        return format!("{s}{mag}i");
    }
    format!("{}{sign}{mag}i", fmt_num(re))
}

fn render_table(t: &Table) -> String {
    let mut cells: Vec<Vec<String>> = vec![std::iter::once(String::new()).chain(t.columns.iter().cloned()).collect()];
    for (i, row) in t.rows.iter().enumerate() {
        let mut line = vec![row.clone()];
        for j in 0..t.columns.len() {
            let im = t.im.as_ref().map_or(0.0, |m| m[i][j]);
            line.push(fmt_complex(t.re[i][j], im));
        }
        cells.push(line);
    }
    let ncol = cells[0].len();
    let widths: Vec<usize> = (0..ncol)
        .map(|j| cells.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in cells {
        let line: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(j, c)| format!("{:>w$}", c, w = widths[j]))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

/// Short identifier of an error variant, used as the witness prefix.
pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Shape(_) => "Shape",
        Error::AxiomViolation { .. } => "AxiomViolation",
        Error::NegativeConstant { .. } => "NegativeConstant",
        Error::NoPositiveCharacter => "NoPositiveCharacter",
        Error::RankCapExceeded { .. } => "RankCapExceeded",
        Error::NotClosed(_) => "NotClosed",
        Error::NotNormal(_) => "NotNormal",
        Error::GammaInconsistent { .. } => "GammaInconsistent",
        Error::KernelNotNormal(_) => "KernelNotNormal",
        Error::InvalidHom(..) => "InvalidHom",
        Error::ImageNotClosed(_) => "ImageNotClosed",
        Error::IdentificationInconsistent { .. } => "IdentificationInconsistent",
        Error::ReconstructionMismatch { .. } => "ReconstructionMismatch",
        Error::KernelContainsK => "KernelContainsK",
        Error::CompletenessFailure { .. } => "CompletenessFailure",
        Error::SplitFailure(_) => "SplitFailure",
        Error::NonIntegerDegree(_) => "NonIntegerDegree",
        Error::ResidualTooLarge(_) => "ResidualTooLarge",
        Error::ZeroMultiplicity(_) => "ZeroMultiplicity",
        Error::CountMismatch { .. } => "CountMismatch",
        Error::NotStandard => "NotStandard",
        Error::Format { .. } => "FormatError",
        Error::SchemeAxiom { .. } => "AxiomViolation",
        Error::PartitionInconsistent(..) => "PartitionInconsistent",
        Error::CompatibilityFailure(_) => "CompatibilityFailure",
        Error::NotNormalEpimorphism(..) => "NotNormalEpimorphism",
        Error::ResultNotScheme(_) => "ResultNotScheme",
        Error::BridgeMismatch(_) => "BridgeMismatch",
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<Report>,
}

enum Failure {
    /// Exit 2.
    Usage(String),
    /// Exit 1 with a failed finding.
    Check(&'static str, Error),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Step<T> = std::result::Result<T, Failure>;

fn lib<T>(id: &'static str, r: tablealg::Result<T>) -> Step<T> {
    r.map_err(|e| match e {
        Error::Format { .. } => Failure::Usage(format!("{e}")),
        e => Failure::Check(id, e),
    })
}

fn read(path: &Path) -> Step<String> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_ta(path: &Path, tol: f64) -> Step<TableAlgebra> {
    let doc = lib("parse", parse_ta_document(&read(path)?))?;
    lib("axioms", doc.build(tol))
}

fn load_scm(path: &Path) -> Step<Scheme> {
    lib("scheme-axioms", parse_scm(&read(path)?))
}

fn closed(a: &TableAlgebra, idx: &[usize], id: &'static str) -> Step<ClosedSubset> {
    if let Some(&i) = idx.iter().find(|&&i| i >= a.rank()) {
        return Err(Failure::Usage(format!("index {i} out of range for rank {}", a.rank())));
    }
    lib(id, ClosedSubset::new(a, idx))
}

fn set_label(a: &TableAlgebra, s: &[usize]) -> String {
    let names: Vec<&str> = s.iter().map(|&i| a.label(i)).collect();
    format!("{{{}}}", names.join(","))
}

fn degrees_table(a: &TableAlgebra) -> Table {
    Table::real(
        a.labels().to_vec(),
        vec!["degree".into()],
        a.degrees().iter().map(|&d| vec![d]).collect(),
    )
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Outcome {
                code,
                stdout,
                stderr,
                report: None,
            };
        }
    };
    let mut report = Report::new(cli.command.name());
    report.input("tol", cli.tol);
    if let Err(f) = execute(&cli, &mut report) {
        match f {
            Failure::Usage(msg) => {
                return Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: format!("error: {msg}\n"),
                    report: None,
                }
            }
            Failure::Check(id, e) => report.fail(id, &e),
        }
    }
    let code = if report.passed() { 0 } else { 1 };
    let rendered = if cli.json { report.to_json() + "\n" } else { report.to_text() };
    let mut stdout = String::new();
    let mut stderr = String::new();
    match (&cli.out, &report.document) {
        (Some(path), Some(doc)) => {
            if let Err(e) = fs::write(path, doc) {
                return usage_io(path, e);
            }
            stdout.push_str(&rendered);
        }
        (Some(path), None) => {
            if let Err(e) = fs::write(path, &rendered) {
                return usage_io(path, e);
            }
        }
        (None, Some(doc)) if !cli.json => {
            stdout.push_str(doc);
            stderr.push_str(&rendered);
        }
        _ => stdout.push_str(&rendered),
    }
    Outcome {
        code,
        stdout,
        stderr,
        report: Some(report),
    }
}

fn usage_io(path: &Path, e: std::io::Error) -> Outcome {
    Outcome {
        code: 2,
        stdout: String::new(),
        stderr: format!("error: {}: {e}\n", path.display()),
        report: None,
    }
}

fn execute(cli: &Cli, r: &mut Report) -> Step<()> {
    let tol = cli.tol;
    match &cli.command {
        Command::Validate { file } => {
            r.input("file", file.display());
            let text = read(file)?;
            let is_scheme = file.extension().is_some_and(|e| e == "scm")
                || text
                    .lines()
                    .map(|l| l.split('#').next().unwrap_or("").trim())
                    .find(|l| !l.is_empty())
                    .is_some_and(|l| l.starts_with("points"));
            if is_scheme {
                let s = lib("scheme-axioms", parse_scm(&text))?;
                r.check("scheme-axioms", true, None);
                let a = lib("adjacency-algebra", s.to_algebra())?;
                r.check("adjacency-algebra", true, None);
                r.tables.insert(
                    "valencies".into(),
                    Table::real(
                        a.labels().to_vec(),
                        vec!["valency".into()],
                        s.valencies().iter().map(|&v| vec![v as f64]).collect(),
                    ),
                );
            } else {
                let doc = lib("parse", parse_ta_document(&text))?;
                let a = lib("axioms", doc.build(tol))?;
                r.check("axioms", true, None);
                if !a.is_standard() {
                    r.notes.push("algebra is not standard".into());
                }
                r.tables.insert("degrees".into(), degrees_table(&a));
            }
        }
        Command::Degrees { file } => {
            r.input("file", file.display());
            let a = load_ta(file, tol)?;
            r.tables.insert("degrees".into(), degrees_table(&a));
            r.input("order", fmt_num(a.order()));
            r.input("standard", a.is_standard());
        }
        Command::Closed { file } => {
            r.input("file", file.display());
            let a = load_ta(file, tol)?;
            let subs = lib("closed-subsets", all_closed_subsets(&a, DEFAULT_CLOSED_SUBSET_CAP))?;
            let rows = subs.iter().map(|n| set_label(&a, n.indices())).collect();
            let vals = subs
                .iter()
                .map(|n| vec![n.len() as f64, n.order(&a), if is_normal(&a, n) { 1.0 } else { 0.0 }])
                .collect();
            r.tables.insert(
                "closed-subsets".into(),
                Table::real(rows, vec!["size".into(), "order".into(), "normal".into()], vals),
            );
        }
        Command::Quotient { file, by } => {
            r.input("file", file.display());
            r.input("by", format!("{by:?}"));
            let a = load_ta(file, tol)?;
            let n = closed(&a, by, "closed")?;
            let q = lib("quotient", quotient(&a, &n))?;
            r.check("quotient", true, None);
            let mut comments = vec![format!("quotient of {} by {}", file.display(), set_label(&a, n.indices()))];
            for (i, blk) in q.partition.blocks.iter().enumerate() {
                comments.push(format!("block {i} {}", set_label(&a, blk)));
            }
            r.tables.insert("degrees".into(), degrees_table(&q.algebra));
            r.document = Some(write_ta(&q.algebra, &comments));
        }
        Command::Chars { file } => {
            r.input("file", file.display());
            r.input("seed", cli.seed);
            let a = load_ta(file, tol)?;
            chars_report(r, &a, cli.seed)?;
        }
        Command::Wedge { c, a, phi } => {
            r.input("C", c.display());
            r.input("A", a.display());
            r.input("phi", phi.display());
            let ca = Arc::new(load_ta(c, tol)?);
            let aa = Arc::new(load_ta(a, tol)?);
            let hom = lib("phi", parse_phi(&read(phi)?, ca, aa))?;
            wedge_report(r, &hom, c, a)?;
        }
        Command::Wreath { c, a } => {
            r.input("C", c.display());
            r.input("A", a.display());
            let ca = Arc::new(load_ta(c, tol)?);
            let aa = Arc::new(load_ta(a, tol)?);
            let w = lib("wedge", wreath_product(ca, aa))?;
            emit_wedge(r, &w, c, a);
        }
        Command::DetectWedge { file } => {
            r.input("file", file.display());
            let a = load_ta(file, tol)?;
            let found = lib("detect", detect_wedge(&a, DEFAULT_CLOSED_SUBSET_CAP))?;
            let mut rows = Vec::new();
            let mut vals = Vec::new();
            for dw in &found {
                let id = format!("K={} D={}", set_label(&a, dw.k.indices()), set_label(&a, dw.d.indices()));
                match &dw.reconstruction {
                    Ok(()) => r.check(&id, true, None),
                    Err(e) => r.fail(&id, e),
                }
                rows.push(id);
                vals.push(vec![dw.k.order(&a), dw.d.order(&a)]);
            }
            if found.is_empty() {
                r.notes.push("no decomposition with nontrivial K and proper D".into());
            }
            r.tables.insert(
                "decompositions".into(),
                Table::real(rows, vec!["o(K)".into(), "o(D)".into()], vals),
            );
        }
        Command::VerifyMain2 { file, k, d } => {
            r.input("file", file.display());
            r.input("K", format!("{k:?}"));
            r.input("D", format!("{d:?}"));
            r.input("seed", cli.seed);
            let a = load_ta(file, tol)?;
            let kc = closed(&a, k, "K")?;
            let dc = closed(&a, d, "D")?;
            let irr = lib("characters", irr_characters(&a, cli.seed))?;
            let m = lib("preconditions", verify_main2(&a, &kc, &dc, &irr, cli.seed))?;
            main2_findings(r, &m);
        }
        Command::Scheme2ta { file } => {
            r.input("file", file.display());
            let s = load_scm(file)?;
            let a = lib("adjacency-algebra", s.to_algebra())?;
            r.check("adjacency-algebra", true, None);
            r.document = Some(write_ta(&a, &[format!("adjacency algebra of {}", file.display())]));
        }
        Command::SchemeQuotient { file, by } => {
            r.input("file", file.display());
            r.input("by", format!("{by:?}"));
            let s = Arc::new(load_scm(file)?);
            let a = lib("adjacency-algebra", s.to_algebra())?;
            let h = closed(&a, by, "closed")?;
            let (q, epi) = lib("quotient", scheme_quotient(&s, h.indices()))?;
            r.check("quotient", true, None);
            let qa = lib("quotient-algebra", quotient(&a, &h))?.algebra;
            let bridge = lib("adjacency-algebra", q.to_algebra())?;
            let ident: Vec<usize> = (0..qa.rank()).collect();
            match check_isomorphism(&bridge, &qa, &ident, tol) {
                Ok(()) => r.check("algebra-bridge", true, None),
                Err(e) => r.check("algebra-bridge", false, Some(e.to_string())),
            }
            let pm: Vec<String> = epi.point_map.iter().map(|p| p.to_string()).collect();
            let rm: Vec<String> = epi.rel_map.iter().map(|p| p.to_string()).collect();
            r.document = Some(write_scm(
                &q,
                &[
                    format!("quotient of {} by {by:?}", file.display()),
                    format!("point map {}", pm.join(" ")),
                    format!("relation map {}", rm.join(" ")),
                ],
            ));
        }
        Command::Subscheme { file, by, point } => {
            r.input("file", file.display());
            r.input("by", format!("{by:?}"));
            r.input("point", point);
            let s = load_scm(file)?;
            if *point >= s.n() {
                return Err(Failure::Usage(format!("point {point} out of range")));
            }
            let a = lib("adjacency-algebra", s.to_algebra())?;
            let h = closed(&a, by, "closed")?;
            let sub = lib("subscheme", subscheme(&s, h.indices(), *point))?;
            r.check("subscheme", true, None);
            let pts: Vec<String> = s.block(&h, *point).iter().map(|p| p.to_string()).collect();
            r.document = Some(write_scm(
                &sub,
                &[format!("subscheme of {} on points {}", file.display(), pts.join(" "))],
            ));
        }
        Command::SchemeWedge { base, fiber, d, k } => {
            r.input("base", base.display());
            r.input("fiber", fiber.display());
            r.input("D", format!("{d:?}"));
            r.input("K", format!("{k:?}"));
            let b = load_scm(base)?;
            let y = load_scm(fiber)?;
            let w = lib("scheme-wedge", uniform_scheme_wedge(&b, d, &y, k))?;
            let want = y.rank() + b.rank() - d.len();
            r.check(
                "relation-count",
                w.scheme.rank() == want,
                (w.scheme.rank() != want).then(|| format!("{} relations, expected {want}", w.scheme.rank())),
            );
            r.check("algebra-bridge", true, None);
            let offs: Vec<String> = w.offsets.iter().map(|o| o.to_string()).collect();
            r.document = Some(write_scm(
                &w.scheme,
                &[
                    format!("wedge of {} over {}", fiber.display(), base.display()),
                    format!("fiber offsets {}", offs.join(" ")),
                ],
            ));
        }
        Command::VerifySchemeWedge { file, k, b } => {
            r.input("file", file.display());
            r.input("K", format!("{k:?}"));
            r.input("B", format!("{b:?}"));
            r.input("seed", cli.seed);
            let s = load_scm(file)?;
            let a = lib("adjacency-algebra", s.to_algebra())?;
            closed(&a, k, "K")?;
            closed(&a, b, "B")?;
            let rep = lib("preconditions", verify_scheme_wedge_chars(&s, k, b, cli.seed))?;
            r.input("n_K", rep.n_k);
            r.input("n_B", rep.n_b);
            r.input("n_S", rep.n_s);
            if rep.trivial_k {
                r.notes.push("trivial K: conditions hold vacuously".into());
            }
            main2_findings(r, &rep.main2);
            r.check(
                "adjacency-condition",
                rep.adjacency_condition,
                (!rep.adjacency_condition).then(|| "A(s)A(k) ≠ n_k A(s) for some k ∈ K, s ∉ B".to_string()),
            );
        }
    }
    Ok(())
}

fn chars_report(r: &mut Report, a: &TableAlgebra, seed: u64) -> Step<()> {
    let chars = lib("characters", irr_characters(a, seed))?;
    let total: usize = chars.iter().map(|c| c.degree * c.degree).sum();
    r.check(
        "completeness",
        total == a.rank(),
        (total != a.rank()).then(|| format!("Σ χ(1)² = {total}, rank {}", a.rank())),
    );
    let rows: Vec<String> = (0..chars.len()).map(|i| format!("χ{i}")).collect();
    let values: Vec<Vec<Complex64>> = chars.iter().map(|c| c.values.clone()).collect();
    r.tables.insert("characters".into(), Table::complex(rows.clone(), a.labels().to_vec(), &values));

    // Multiplicities live on the standard form; values rescale, ζ_χ does not.
    let (std, scaling) = lib("standard-form", rescale_to_standard(a))?;
    if !a.is_standard() {
        r.notes.push("multiplicities computed on the standard rescaling".into());
    }
    let std_chars: Vec<_> = chars
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.values = c.values.iter().zip(&scaling).map(|(v, s)| v * s).collect();
            c
        })
        .collect();
    let with_m = lib("multiplicities", standard_multiplicities(&std, &std_chars))?;
    r.tables.insert(
        "multiplicities".into(),
        Table::real(
            rows,
            vec!["degree".into(), "multiplicity".into()],
            with_m
                .iter()
                .map(|c| vec![c.degree as f64, c.multiplicity.unwrap_or(f64::NAN)])
                .collect(),
        ),
    );
    Ok(())
}

fn wedge_report(r: &mut Report, phi: &AlgebraHom, c: &Path, a: &Path) -> Step<()> {
    let w = lib("wedge", wedge_product(phi))?;
    emit_wedge(r, &w, c, a);
    Ok(())
}

fn emit_wedge(r: &mut Report, w: &WedgeProduct, c: &Path, a: &Path) {
    let alg = &w.algebra;
    let want = w.factor_b.rank() + w.factor_d.rank() - w.n.len();
    r.check(
        "rank",
        alg.rank() == want,
        (alg.rank() != want).then(|| format!("rank {} expected {want}", alg.rank())),
    );
    let want = w.k_order() * w.factor_b.order();
    let ok = (alg.order() - want).abs() <= 1e-9 * want;
    r.check("order", ok, (!ok).then(|| format!("o = {} expected {want}", alg.order())));
    let mut comments = vec![
        format!("wedge of {} and {}", c.display(), a.display()),
        format!("K {}", set_label(&w.factor_d, w.k.indices())),
        format!("N {}", set_label(&w.factor_b, w.n.indices())),
    ];
    for (i, o) in w.origin.iter().enumerate() {
        comments.push(match o {
            BasisOrigin::FromD(d) => format!("origin {i} D {d}"),
            BasisOrigin::FromBbar(b) => format!("origin {i} B {b}"),
        });
    }
    r.tables.insert("degrees".into(), degrees_table(alg));
    r.document = Some(write_ta(alg, &comments));
}

fn main2_findings(r: &mut Report, m: &Main2Report) {
    let wit = |prefix: &str| -> Option<String> {
        let w: Vec<&str> = m
            .witnesses
            .iter()
            .filter(|s| s.starts_with(prefix))
            .map(|s| s.as_str())
            .collect();
        (!w.is_empty()).then(|| w.join("; "))
    };
    r.check("cond-i", m.cond_i, wit("(i)"));
    r.check("cond-ii", m.cond_ii, wit("(ii)"));
    r.check("cond-iii", m.cond_iii, wit("(iii)"));
    r.check("cond-iv", m.cond_iv, wit("(iv)"));
    r.check(
        "equivalence",
        m.equivalent,
        (!m.equivalent).then(|| format!("flags {} {} {} {}", m.cond_i, m.cond_ii, m.cond_iii, m.cond_iv)),
    );
    let rows = m.restrictions.iter().map(|x| format!("χ{}", x.chi)).collect();
    let vals = m
        .restrictions
        .iter()
        .map(|x| {
            vec![
                x.psi.map_or(-1.0, |p| p as f64),
                x.zeta_chi,
                x.zeta_psi.unwrap_or(f64::NAN),
                x.ratio,
            ]
        })
        .collect();
    r.tables.insert(
        "restrictions".into(),
        Table::real(
            rows,
            vec!["ψ".into(), "ζ_χ".into(), "ζ_ψ".into(), "o(B)/o(D)".into()],
            vals,
        ),
    );
}
