//! Command-line front end for the `consilience` library.
//!
//! [`run`] parses arguments and executes one command, returning the exit
//! status and captured output so the binary and the tests share one path.

pub mod catalog;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use consilience::dsl::{evaluate, parse_str, EvalErrorKind};
use consilience::evidence::{
    combine_document, laplace_vs_cmpe_groups, CombinationError, EvidenceDocument, Operator,
};
use consilience::oracle::random_property_battery;
use consilience::{nonlinear_add_curve, Probability, RepresentationMode};

use catalog::{table1_printed, Section};
use output::{
    caret, json_number, json_number_text, json_text, object, significant, significant_from_ln,
    OutputFormat,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_EVAL: i32 = 3;
pub const EXIT_INVALID: i32 = 4;
pub const EXIT_IO: i32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Float,
    Log,
    Rational,
}

impl From<Mode> for RepresentationMode {
    fn from(mode: Mode) -> Self {
        match mode {
            Mode::Float => RepresentationMode::Floating,
            Mode::Log => RepresentationMode::LogComplement,
            Mode::Rational => RepresentationMode::ExactRational,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "consilience",
    version,
    about = "Non-linear combination of probabilities"
)]
pub struct Cli {
    /// Number representation used for every computation
    #[arg(long, global = true, value_enum, default_value = "float")]
    pub mode: Mode,
    #[arg(long, global = true, value_enum, default_value = "table")]
    pub format: OutputFormat,
    /// Significant digits in printed values
    #[arg(long, global = true, default_value_t = 6, value_parser = clap::value_parser!(u8).range(1..=17))]
    pub precision: u8,
    /// Relative tolerance for values compared by magnitude
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an expression such as "0.4 (+) 0.7"
    Eval {
        #[arg(allow_hyphen_values = true)]
        expression: String,
    },
    /// Combine a JSON evidence document and print the audit trail
    Combine { path: PathBuf },
    /// Laplace succession against cMPE of diverse groups
    Table1 {
        #[arg(long, value_delimiter = ',', default_value = "5,10,50,100,1000",
              value_parser = clap::value_parser!(u64).range(1..))]
        counts: Vec<u64>,
        /// Number of semantically diverse groups
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..=64))]
        groups: u64,
    },
    /// Series y = x (+) delta over a grid of x
    Curve {
        #[arg(long, default_value = "0.4")]
        delta: String,
        #[arg(long, default_value_t = 0.1)]
        step: f64,
    },
    /// Recompute the published worked examples
    Examples,
    /// Randomized exact-arithmetic checks against an enumeration oracle
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        cases: u64,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(code: i32, stderr: String) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome::error(EXIT_USAGE, text)
            } else {
                Outcome::ok(text)
            }
        }
    }
}

pub fn execute(cli: &Cli) -> Outcome {
    let ctx = Context {
        mode: cli.mode.into(),
        format: cli.format,
        digits: cli.precision as usize,
        tolerance: cli.tolerance,
    };
    match &cli.command {
        Command::Eval { expression } => ctx.eval(expression),
        Command::Combine { path } => ctx.combine(path),
        Command::Table1 { counts, groups } => ctx.table1(counts, *groups),
        Command::Curve { delta, step } => ctx.curve(delta, *step),
        Command::Examples => ctx.examples(),
        Command::Verify { seed, cases } => ctx.verify(*seed, *cases as usize),
    }
}

/// `Debug` name of an error variant, e.g. `SubtrahendExceedsMinuend`.
fn variant<E: std::fmt::Debug>(e: &E) -> String {
    let text = format!("{e:?}");
    let end = text.find([' ', '(', '{']).unwrap_or(text.len());
    text[..end].to_string()
}

struct Context {
    mode: RepresentationMode,
    format: OutputFormat,
    digits: usize,
    tolerance: f64,
}

impl Context {
    fn num(&self, v: f64) -> String {
        significant(v, self.digits)
    }

    fn json(&self, v: f64) -> Value {
        json_number(v, self.digits)
    }

    fn prob(&self, p: &Probability) -> String {
        match p.value() {
            0.0 => significant_from_ln(p.ln(), self.digits),
            v => self.num(v),
        }
    }

    fn prob_json(&self, p: &Probability) -> Value {
        json_number_text(&self.prob(p))
    }

    fn render(
        &self,
        headers: &[&str],
        rows: &[Vec<String>],
        json: impl FnOnce() -> Value,
    ) -> String {
        match self.format {
            OutputFormat::Table => output::table(headers, rows),
            OutputFormat::Csv => output::csv(headers, rows),
            OutputFormat::Json => json_text(&json()),
        }
    }

    fn eval(&self, expression: &str) -> Outcome {
        if expression.trim().is_empty() {
            return Outcome::error(EXIT_USAGE, "error: empty expression\n".into());
        }
        let expr = match parse_str(expression) {
            Ok(expr) => expr,
            Err(e) => {
                let span = e.span();
                return Outcome::error(
                    EXIT_USAGE,
                    format!("error: {e}\n{}", caret(expression, span.start, span.end)),
                );
            }
        };
        let value = match evaluate(&expr, self.mode) {
            Ok(value) => value,
            Err(e) => {
                let name = match &e.kind {
                    EvalErrorKind::Combine(c) => variant(c),
                    other => variant(other),
                };
                return Outcome::error(
                    EXIT_EVAL,
                    format!(
                        "error[{name}]: {e}\n{}",
                        caret(expression, e.span.start, e.span.end)
                    ),
                );
            }
        };
        let text = self.prob(&value);
        let exact = value.as_rational().map(|r| r.to_string());
        let stdout = match self.format {
            OutputFormat::Table => format!("{text}\n"),
            OutputFormat::Csv => {
                let mut row = vec![expression.to_string(), self.mode.name().into(), text];
                row.extend(exact.clone());
                let headers: &[&str] = if exact.is_some() {
                    &["expression", "mode", "value", "exact"]
                } else {
                    &["expression", "mode", "value"]
                };
                output::csv(headers, &[row])
            }
            OutputFormat::Json => {
                let mut v = object([
                    ("expression", Value::String(expression.into())),
                    ("mode", Value::String(self.mode.name().into())),
                    ("value", self.prob_json(&value)),
                ]);
                if let Some(exact) = exact {
                    v["exact"] = Value::String(exact);
                }
                json_text(&v)
            }
        };
        Outcome::ok(stdout)
    }

    fn combine(&self, path: &std::path::Path) -> Outcome {
        let text = match std::fs::read_to_string(path) {
            Ok(text) => text,
            Err(e) => return Outcome::error(EXIT_IO, format!("error: {}: {e}\n", path.display())),
        };
        let doc = match EvidenceDocument::from_json(&text) {
            Ok(doc) => doc,
            Err(e) => {
                let code = if e.is_validation() {
                    EXIT_INVALID
                } else {
                    EXIT_USAGE
                };
                return Outcome::error(
                    code,
                    format!("error[{}]: {}: {e}\n", variant(&e), path.display()),
                );
            }
        };
        let result = match combine_document(&doc, self.mode) {
            Ok(result) => result,
            Err(CombinationError::SemanticOverlap(overlap)) => {
                let mut msg =
                    "error[SemanticOverlap]: evidence items share semantic channels\n".to_string();
                for o in &overlap.0 {
                    msg.push_str(&format!(
                        "  `{}` and `{}` share tag {}\n",
                        o.first,
                        o.second,
                        o.tags.join(", ")
                    ));
                }
                return Outcome::error(EXIT_INVALID, msg);
            }
            Err(e @ CombinationError::ExtensionalEvidenceRejected { .. }) => {
                return Outcome::error(EXIT_INVALID, format!("error[{}]: {e}\n", variant(&e)));
            }
            Err(CombinationError::Combine(e)) => {
                return Outcome::error(EXIT_EVAL, format!("error[{}]: {e}\n", variant(&e)));
            }
        };
        let operator = |op: &Operator| match op {
            Operator::Prior => "prior",
            Operator::Evidence => "evidence",
            Operator::SupportTransfer => "support_transfer",
            Operator::CmpeAdd => "cmpe_add",
        };
        let join = |ps: &[Probability]| {
            ps.iter()
                .map(|p| self.prob(p))
                .collect::<Vec<_>>()
                .join(";")
        };
        let rows: Vec<Vec<String>> = result
            .trail
            .iter()
            .enumerate()
            .map(|(i, e)| {
                vec![
                    (i + 1).to_string(),
                    operator(&e.operator).into(),
                    e.source.clone(),
                    join(&e.operands),
                    self.prob(&e.result),
                ]
            })
            .collect();
        let headers = ["step", "operator", "source", "operands", "result"];
        let stdout = match self.format {
            OutputFormat::Table => format!(
                "hypothesis: {}\nmode: {}\nvalue: {}\n\n{}",
                result.hypothesis,
                result.mode.name(),
                self.prob(&result.value),
                output::table(&headers, &rows)
            ),
            OutputFormat::Csv => output::csv(&headers, &rows),
            OutputFormat::Json => json_text(&object([
                ("hypothesis", Value::String(result.hypothesis.clone())),
                ("mode", Value::String(result.mode.name().into())),
                ("value", self.prob_json(&result.value)),
                (
                    "trail",
                    result
                        .trail
                        .iter()
                        .map(|e| {
                            object([
                                ("operator", Value::String(operator(&e.operator).into())),
                                ("source", Value::String(e.source.clone())),
                                (
                                    "operands",
                                    e.operands.iter().map(|p| self.prob_json(p)).collect(),
                                ),
                                ("result", self.prob_json(&e.result)),
                            ])
                        })
                        .collect(),
                ),
            ])),
        };
        Outcome::ok(stdout)
    }

    fn table1(&self, counts: &[u64], groups: u64) -> Outcome {
        let rows = match laplace_vs_cmpe_groups(counts, groups, self.mode) {
            Ok(rows) => rows,
            Err(e) => return Outcome::error(EXIT_EVAL, format!("error[{}]: {e}\n", variant(&e))),
        };
        let mut cells = Vec::new();
        let mut notes: Vec<Vec<String>> = Vec::new();
        for row in &rows {
            let values = [
                &row.laplace_n,
                &row.laplace_pooled,
                &row.cmpe_groups,
                &row.dpe_margin,
            ]
            .map(Probability::value);
            let mut row_notes = Vec::new();
            if let Some(printed) = table1_printed(row.n).filter(|_| groups == 2) {
                for (col, (v, p)) in values.iter().zip(printed).enumerate() {
                    if !catalog::matches_printed(*v, p) {
                        row_notes.push(format!(
                            "column {}: published {}, formula gives {}",
                            col + 2,
                            p.trim_end_matches('.'),
                            self.num(*v)
                        ));
                    }
                }
            }
            cells.push((row.n, values));
            notes.push(row_notes);
        }
        let pooled = format!("laplace_{groups}n");
        let headers = [
            "n",
            "laplace_n",
            pooled.as_str(),
            "cmpe_groups",
            "dpe_margin",
        ];
        let mut table_rows: Vec<Vec<String>> = cells
            .iter()
            .map(|(n, vs)| {
                std::iter::once(n.to_string())
                    .chain(vs.iter().map(|v| self.num(*v)))
                    .collect()
            })
            .collect();
        let stdout = match self.format {
            OutputFormat::Table => {
                let mut marks = 0;
                for (row, row_notes) in table_rows.iter_mut().zip(&notes) {
                    for _ in row_notes {
                        marks += 1;
                        row[0].push_str(&format!(" [{marks}]"));
                    }
                }
                let mut text = output::table(&headers, &table_rows);
                let all: Vec<&String> = notes.iter().flatten().collect();
                if !all.is_empty() {
                    text.push_str("\nNotes:\n");
                    for (i, (n, note)) in rows
                        .iter()
                        .zip(&notes)
                        .flat_map(|(r, ns)| ns.iter().map(move |note| (r.n, note)))
                        .enumerate()
                    {
                        text.push_str(&format!("  [{}] n={n}, {note}\n", i + 1));
                    }
                }
                text
            }
            OutputFormat::Csv => {
                for (row, row_notes) in table_rows.iter_mut().zip(&notes) {
                    row.push(row_notes.join("; "));
                }
                let mut headers = headers.to_vec();
                headers.push("notes");
                output::csv(&headers, &table_rows)
            }
            OutputFormat::Json => json_text(&object([
                ("mode", Value::String(self.mode.name().into())),
                ("groups", Value::from(groups)),
                (
                    "rows",
                    cells
                        .iter()
                        .zip(&notes)
                        .map(|((n, vs), ns)| {
                            object([
                                ("n", Value::from(*n)),
                                ("laplace_n", self.json(vs[0])),
                                ("laplace_pooled", self.json(vs[1])),
                                ("cmpe_groups", self.json(vs[2])),
                                ("dpe_margin", self.json(vs[3])),
                                ("notes", ns.iter().cloned().map(Value::String).collect()),
                            ])
                        })
                        .collect(),
                ),
            ])),
        };
        Outcome::ok(stdout)
    }

    fn curve(&self, delta: &str, step: f64) -> Outcome {
        let delta = match Probability::parse_decimal(delta.trim()) {
            Ok(p) => p.to_mode(self.mode),
            Err(e) => return Outcome::error(EXIT_USAGE, format!("error: --delta: {e}\n")),
        };
        if !(step > 0.0 && step < 1.0) {
            return Outcome::error(
                EXIT_USAGE,
                format!("error: --step {step} is not in (0, 1)\n"),
            );
        }
        let points = match nonlinear_add_curve(&delta, step) {
            Ok(points) => points,
            Err(e) => return Outcome::error(EXIT_EVAL, format!("error[{}]: {e}\n", variant(&e))),
        };
        let rows: Vec<Vec<String>> = points
            .iter()
            .map(|pt| vec![self.num(pt.x.value()), self.num(pt.y.value())])
            .collect();
        Outcome::ok(self.render(&["x", "y"], &rows, || {
            object([
                ("delta", self.json(delta.value())),
                (
                    "points",
                    points
                        .iter()
                        .map(|pt| {
                            object([
                                ("x", self.json(pt.x.value())),
                                ("y", self.json(pt.y.value())),
                            ])
                        })
                        .collect(),
                ),
            ])
        }))
    }

    fn examples(&self) -> Outcome {
        let outcomes: Vec<_> = catalog::examples()
            .iter()
            .map(|e| e.run(self.mode, self.tolerance))
            .collect();
        let (regression, errata): (Vec<_>, Vec<_>) = outcomes
            .iter()
            .partition(|o| o.section == Section::Regression);
        let failed = regression.iter().filter(|o| !o.passed).count();
        let status = |o: &catalog::Outcome| match (o.section, o.passed) {
            (Section::Regression, true) => "PASS",
            (Section::Regression, false) => "FAIL",
            (Section::Erratum, false) => "ERRATUM",
            (Section::Erratum, true) => "MATCHES",
        };
        let value = |o: &catalog::Outcome| o.value.map_or_else(|| "-".into(), |v| self.num(v));
        let row = |o: &&catalog::Outcome| {
            vec![
                status(o).to_string(),
                o.name.to_string(),
                value(o),
                o.expected.clone(),
                o.detail.clone().unwrap_or_default(),
            ]
        };
        let headers = ["status", "example", "computed", "published", "detail"];
        let summary = format!(
            "{} passed, {failed} failed, {} errata\n",
            regression.len() - failed,
            errata.len()
        );
        let stdout = match self.format {
            OutputFormat::Table => format!(
                "{}\nERRATA\n{}\n{summary}",
                output::table(&headers, &regression.iter().map(row).collect::<Vec<_>>()),
                output::table(&headers, &errata.iter().map(row).collect::<Vec<_>>()),
            ),
            OutputFormat::Csv => {
                let rows: Vec<Vec<String>> = outcomes.iter().map(|o| row(&o)).collect();
                output::csv(&headers, &rows)
            }
            OutputFormat::Json => {
                let entry = |o: &&catalog::Outcome| {
                    object([
                        ("status", Value::String(status(o).into())),
                        ("example", Value::String(o.name.into())),
                        ("computed", o.value.map_or(Value::Null, |v| self.json(v))),
                        ("published", Value::String(o.expected.clone())),
                        (
                            "detail",
                            o.detail.clone().map_or(Value::Null, Value::String),
                        ),
                    ])
                };
                json_text(&object([
                    ("mode", Value::String(self.mode.name().into())),
                    ("passed", Value::from(regression.len() - failed)),
                    ("failed", Value::from(failed)),
                    ("examples", regression.iter().map(entry).collect()),
                    ("errata", errata.iter().map(entry).collect()),
                ]))
            }
        };
        Outcome {
            code: if failed == 0 { EXIT_OK } else { EXIT_VERIFY },
            stdout,
            stderr: String::new(),
        }
    }

    fn verify(&self, seed: u64, cases: usize) -> Outcome {
        let summary = random_property_battery(seed, cases);
        let code = if summary.all_passed() {
            EXIT_OK
        } else {
            EXIT_VERIFY
        };
        let stdout = match self.format {
            OutputFormat::Json => json_text(&serde_json::to_value(&summary).expect("serializable")),
            OutputFormat::Table | OutputFormat::Csv => {
                let mut text = match self.format {
                    OutputFormat::Csv => output::csv(
                        &["seed", "cases", "passed"],
                        &[vec![
                            seed.to_string(),
                            cases.to_string(),
                            summary.passed.to_string(),
                        ]],
                    ),
                    _ => format!("seed {seed}: {}/{cases} cases passed\n", summary.passed),
                };
                if let Some(c) = &summary.first_counterexample {
                    text.push_str(&format!(
                        "counterexample in case {}: {}\n  operands: {}\n  expected: {}\n  actual:   {}\n",
                        c.case,
                        c.check.describe(),
                        c.operands.join(", "),
                        c.expected,
                        c.actual
                    ));
                }
                text
            }
        };
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }
}
