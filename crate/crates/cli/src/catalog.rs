//! Published values the commands are checked against.

use consilience::diagnostics::{
    broad_chain, cohen_complementarity_check, implied_evidence_comparison,
};
use consilience::evidence::{combine_document, EvidenceDocument};
use consilience::{
    bayes_posterior, cmpe_add, complement, dpe_sub, expansion_identity, laplace_succession,
    mpe_error_product, nonlinear_add_curve, support_transfer, CombineError, Probability,
    RepresentationMode, SupportContribution,
};

/// Whether `value` agrees with a value printed as decimal text, at the
/// printed number of decimals, either rounded or truncated.
///
/// Spaces used as digit grouping (`.999 9`) and trailing ellipsis dots
/// (`.857..`) are ignored.
pub fn matches_printed(value: f64, printed: &str) -> bool {
    let text: String = printed.chars().filter(|c| !c.is_whitespace()).collect();
    let text = text.trim_end_matches("..");
    let Ok(reference) = text.parse::<f64>() else {
        return false;
    };
    let decimals = text.split_once('.').map_or(0, |(_, frac)| frac.len()) as i32;
    let scale = 10f64.powi(decimals);
    let target = (reference * scale).round();
    let scaled = value * scale;
    (scaled.round() - target).abs() < 0.5 || ((scaled + 1e-9).floor() - target).abs() < 0.5
}

/// Cells of the published comparison table: `n` and columns 2 to 5.
pub const TABLE1_PRINTED: [(u64, [&str; 4]); 5] = [
    (5, [".857..", ".917", ".979", ".253"]),
    (10, [".917", ".955", ".993", ".286"]),
    (50, [".98", ".990", ".996", ".96"]),
    (100, [".99", ".995", ".999 9", ".98"]),
    (1000, [".999", ".999 5", ".999 999", ".998"]),
];

pub fn table1_printed(n: u64) -> Option<&'static [&'static str; 4]> {
    TABLE1_PRINTED
        .iter()
        .find(|(row, _)| *row == n)
        .map(|(_, cells)| cells)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Section {
    Regression,
    Erratum,
}

/// How a computed value is compared with its printed counterpart.
#[derive(Debug, Clone, Copy)]
pub enum Expect {
    /// Decimal text compared at its own precision.
    Printed(&'static str),
    /// Relative error within the run's tolerance.
    Relative(f64),
}

impl Expect {
    pub fn describe(&self) -> String {
        match self {
            Expect::Printed(text) => text.to_string(),
            Expect::Relative(v) => format!("{v:e}"),
        }
    }
}

pub struct Reading {
    pub value: f64,
    /// Extra condition beyond the value, with its description.
    pub condition: Option<(bool, String)>,
}

impl From<Probability> for Reading {
    fn from(p: Probability) -> Self {
        Reading {
            value: p.value(),
            condition: None,
        }
    }
}

type Compute = fn(RepresentationMode) -> Result<Reading, String>;

pub struct Example {
    pub name: &'static str,
    pub expect: Expect,
    pub section: Section,
    pub compute: Compute,
}

pub struct Outcome {
    pub name: &'static str,
    pub section: Section,
    pub expected: String,
    pub value: Option<f64>,
    pub detail: Option<String>,
    pub passed: bool,
}

impl Example {
    pub fn run(&self, mode: RepresentationMode, tolerance: f64) -> Outcome {
        let (value, detail, passed) = match (self.compute)(mode) {
            Ok(reading) => {
                let value_ok = match self.expect {
                    Expect::Printed(text) => matches_printed(reading.value, text),
                    Expect::Relative(v) => ((reading.value - v) / v).abs() <= tolerance,
                };
                let (condition_ok, detail) = match reading.condition {
                    Some((ok, what)) => (ok, Some(what)),
                    None => (true, None),
                };
                (Some(reading.value), detail, value_ok && condition_ok)
            }
            Err(message) => (None, Some(message), false),
        };
        Outcome {
            name: self.name,
            section: self.section,
            expected: self.expect.describe(),
            value,
            detail,
            passed,
        }
    }
}

fn q(text: &str, mode: RepresentationMode) -> Probability {
    Probability::parse_decimal(text)
        .expect("catalog literal")
        .to_mode(mode)
}

fn qs(texts: &[&str], mode: RepresentationMode) -> Vec<Probability> {
    texts.iter().map(|t| q(t, mode)).collect()
}

fn fail(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn ok(p: Result<Probability, CombineError>) -> Result<Reading, String> {
    p.map(Reading::from).map_err(fail)
}

const THUNDERSTORM: &str = r#"{
  "hypothesis": "thunderstorm",
  "prior": 0.6,
  "evidence": [
    {"id": "temperature", "p": 0.4, "kind": "weight", "tags": ["temperature"]},
    {"id": "humidity", "p": 0.5, "kind": "weight", "tags": ["humidity"]}
  ]
}"#;

const ENTERITIS: &str = r#"{
  "hypothesis": "arsenic poisoning",
  "prior": 0.4,
  "evidence": [
    {"id": "enteritis", "p": 0.5, "kind": "weight", "tags": ["symptoms"]}
  ]
}"#;

fn document(text: &str, mode: RepresentationMode) -> Result<Reading, String> {
    let doc = EvidenceDocument::from_json(text).map_err(fail)?;
    combine_document(&doc, mode)
        .map(|r| r.value.into())
        .map_err(fail)
}

pub fn examples() -> Vec<Example> {
    use Expect::{Printed, Relative};
    use Section::{Erratum, Regression};
    vec![
        Example {
            name: "Bayes posterior, overlap .3 in evidence .7",
            expect: Printed(".43"),
            section: Regression,
            compute: |m| ok(bayes_posterior(&q(".5", m), &q(".6", m), &q(".8", m))),
        },
        Example {
            name: "Bayes posterior, overlap .2 in evidence .7",
            expect: Printed(".29"),
            section: Regression,
            compute: |m| ok(bayes_posterior(&q(".5", m), &q(".4", m), &q("1", m))),
        },
        Example {
            name: "cMPE .4 (+) .7",
            expect: Printed(".82"),
            section: Regression,
            compute: |m| ok(cmpe_add(&qs(&[".4", ".7"], m))),
        },
        Example {
            name: "cMPE .4 (+) .7 (+) .3",
            expect: Printed(".874"),
            section: Regression,
            compute: |m| ok(cmpe_add(&qs(&[".4", ".7", ".3"], m))),
        },
        Example {
            name: "support through carriers .6 x .5 and .8 x .4",
            expect: Printed(".524"),
            section: Regression,
            compute: |m| {
                ok(support_transfer(&[
                    SupportContribution::new(q(".6", m), q(".5", m)),
                    SupportContribution::new(q(".8", m), q(".4", m)),
                ]))
            },
        },
        Example {
            name: "expansion identity a=.3 b=.8, expanded side",
            expect: Printed(".86"),
            section: Regression,
            compute: |m| {
                expansion_identity(&q(".3", m), &q(".8", m))
                    .map(|(l, _)| l.into())
                    .map_err(fail)
            },
        },
        Example {
            name: "expansion identity a=.3 b=.8, complement side",
            expect: Printed(".86"),
            section: Regression,
            compute: |m| {
                expansion_identity(&q(".3", m), &q(".8", m))
                    .map(|(_, r)| r.into())
                    .map_err(fail)
            },
        },
        Example {
            name: "complement of testimony .25",
            expect: Printed(".75"),
            section: Regression,
            compute: |m| Ok(complement(&q(".25", m)).into()),
        },
        Example {
            name: "two testimonies .25, favored side",
            expect: Printed(".94"),
            section: Regression,
            compute: |m| {
                cohen_complementarity_check(&qs(&[".25", ".25"], m), false)
                    .map(|c| Reading {
                        value: c.opposite.value(),
                        condition: Some((c.report.valid, "sides complementary".to_string())),
                    })
                    .map_err(fail)
            },
        },
        Example {
            name: "two testimonies .25, disfavored side",
            expect: Printed(".06"),
            section: Regression,
            compute: |m| {
                cohen_complementarity_check(&qs(&[".25", ".25"], m), false)
                    .map(|c| Reading {
                        value: c.testified.value(),
                        condition: Some((c.report.valid, "sides complementary".to_string())),
                    })
                    .map_err(fail)
            },
        },
        Example {
            name: "two testimonies .25, both sides by cMPE",
            expect: Printed(".44"),
            section: Regression,
            compute: |m| {
                cohen_complementarity_check(&qs(&[".25", ".25"], m), true)
                    .map(|c| Reading {
                        value: c.testified.value(),
                        condition: Some((!c.report.valid, "flagged not complementary".to_string())),
                    })
                    .map_err(fail)
            },
        },
        Example {
            name: "thunderstorm forecast document",
            expect: Printed(".88"),
            section: Regression,
            compute: |m| document(THUNDERSTORM, m),
        },
        Example {
            name: "DPE .5 (-) .1",
            expect: Printed(".444"),
            section: Regression,
            compute: |m| ok(dpe_sub(&q(".5", m), &[q(".1", m)])),
        },
        Example {
            name: "DPE .6 (-) .2",
            expect: Printed(".5"),
            section: Regression,
            compute: |m| ok(dpe_sub(&q(".6", m), &[q(".2", m)])),
        },
        Example {
            name: "old evidence .99 (+) .999",
            expect: Printed(".99999"),
            section: Regression,
            compute: |m| ok(cmpe_add(&qs(&[".99", ".999"], m))),
        },
        Example {
            name: "old evidence round trip .99999 (-) .999",
            expect: Printed(".99"),
            section: Regression,
            compute: |m| {
                let sum = cmpe_add(&qs(&[".99", ".999"], m)).map_err(fail)?;
                ok(dpe_sub(&sum, &[q(".999", m)]))
            },
        },
        Example {
            name: "succession after 50 of 50 birds",
            expect: Printed(".98"),
            section: Regression,
            compute: |m| ok(laplace_succession(50, 50, m)),
        },
        Example {
            name: "two bird groups of 50, cMPE",
            expect: Printed(".9996"),
            section: Regression,
            compute: |m| {
                let group = laplace_succession(50, 50, m).map_err(fail)?;
                ok(cmpe_add(&[group.clone(), group]))
            },
        },
        Example {
            name: "two bird groups against one, DPE .9996 (-) .99",
            expect: Printed(".96"),
            section: Regression,
            compute: |m| ok(dpe_sub(&q(".9996", m), &[q(".99", m)])),
        },
        Example {
            name: "arsenic poisoning with enteritis, cMPE",
            expect: Printed(".7"),
            section: Regression,
            compute: |m| document(ENTERITIS, m),
        },
        Example {
            name: "arsenic poisoning with enteritis, implied P(H)/P(E)",
            expect: Printed(".44"),
            section: Regression,
            compute: |m| {
                implied_evidence_comparison(&q(".4", m), &q(".5", m), &q(".9", m))
                    .map(|r| r.bayes_reading.into())
                    .map_err(fail)
            },
        },
        Example {
            name: "tuberculosis chain .5 / .8^4",
            expect: Printed("1.2"),
            section: Regression,
            compute: |m| {
                broad_chain(&q(".5", m), &qs(&[".8"; 4], m))
                    .map(|r| Reading {
                        value: r.raw_value,
                        condition: Some((
                            !r.valid && r.overflow_index == Some(4),
                            "flagged invalid".to_string(),
                        )),
                    })
                    .map_err(fail)
            },
        },
        Example {
            name: "nonlinear addition of .4 at x=0",
            expect: Printed(".4"),
            section: Regression,
            compute: |m| {
                nonlinear_add_curve(&q(".4", m), 0.1)
                    .map(|c| c[0].y.clone().into())
                    .map_err(fail)
            },
        },
        Example {
            name: "three channels with error 1e-15 each",
            expect: Relative(1e-45),
            section: Regression,
            compute: |m| ok(mpe_error_product(&qs(&["1e-15"; 3], m))),
        },
        Example {
            name: "apple seen, touched and smelled",
            expect: Relative(1e-7),
            section: Erratum,
            compute: |m| ok(mpe_error_product(&qs(&["1e-3", "1e-2", "1e-3"], m))),
        },
        Example {
            name: "comparison table column 5, rows 5 and 10",
            expect: Printed(".253"),
            section: Erratum,
            compute: |m| {
                let rows = consilience::evidence::laplace_vs_cmpe(&[5, 10], m).map_err(fail)?;
                Ok(Reading {
                    value: rows[0].dpe_margin.value(),
                    condition: Some((
                        matches_printed(rows[1].dpe_margin.value(), ".286"),
                        format!(
                            "row 10 gives {:.6}, printed .286",
                            rows[1].dpe_margin.value()
                        ),
                    )),
                })
            },
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_precision() {
        assert!(matches_printed(3.0 / 7.0, ".43"));
        assert!(matches_printed(0.874, ".874"));
        assert!(matches_printed(0.999904, ".999 9"));
        assert!(matches_printed(6.0 / 7.0, ".857.."));
        assert!(matches_printed(0.9795918, ".979"));
        assert!(matches_printed(0.9795918, ".980"));
        assert!(matches_printed(1.220703125, "1.2"));
        assert!(!matches_printed(0.99963, ".996"));
        assert!(!matches_printed(0.755102, ".253"));
        assert!(!matches_printed(0.5, "x"));
    }

    #[test]
    fn catalog_outcomes() {
        for mode in [
            RepresentationMode::Floating,
            RepresentationMode::LogComplement,
            RepresentationMode::ExactRational,
        ] {
            for example in examples() {
                let outcome = example.run(mode, 1e-9);
                let expected = example.section == Section::Regression;
                assert_eq!(
                    outcome.passed, expected,
                    "{} in {:?}: {:?}",
                    example.name, mode, outcome.value
                );
            }
        }
    }
}
