//! Report rows and their text, JSON and CSV renderings.

use std::io::Write;

use anyhow::Result;
use serde::Serialize;
use ysys::identities::VerificationReport;
use ysys::ExactRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Debug)]
pub struct Row {
    pub command: &'static str,
    /// Leading tag of the text line, e.g. `cf` or `solve`.
    pub tag: String,
    pub instance: String,
    pub computed: f64,
    pub expected: Option<ExactRational>,
    pub deviation: f64,
    pub passed: bool,
    pub detail: String,
}

impl Row {
    pub fn from_report(r: &VerificationReport) -> Row {
        Row {
            command: "verify",
            tag: r.kind.to_string(),
            instance: r.instance.clone(),
            computed: r.computed,
            expected: Some(r.expected.clone()),
            deviation: r.deviation,
            passed: r.passed,
            detail: r.detail.clone(),
        }
    }

    /// A row for a check that could not run at all.
    pub fn failure(
        command: &'static str,
        tag: impl Into<String>,
        instance: String,
        err: impl ToString,
    ) -> Row {
        Row {
            command,
            tag: tag.into(),
            instance,
            computed: f64::NAN,
            expected: None,
            deviation: f64::INFINITY,
            passed: false,
            detail: format!("error: {}", err.to_string()),
        }
    }

    fn to_line(&self) -> String {
        let expected = self
            .expected
            .as_ref()
            .map_or_else(|| "-".to_string(), |e| e.to_string());
        let mut line = format!(
            "{} {} {} computed={:.12} expected={} deviation={:.3e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.tag,
            self.instance,
            self.computed,
            expected,
            self.deviation
        );
        if !self.detail.is_empty() {
            line.push_str(" ; ");
            line.push_str(&self.detail);
        }
        line
    }

    fn record(&self) -> Record<'_> {
        let (num, den) = match &self.expected {
            Some(e) => (Some(e.numer().to_string()), Some(e.denom().to_string())),
            None => (None, None),
        };
        Record {
            instance: &self.instance,
            command: self.command,
            computed: self.computed,
            expected_num: num,
            expected_den: den,
            deviation: self.deviation,
            passed: self.passed,
        }
    }
}

/// Numerators and denominators are decimal strings so big values survive.
#[derive(Serialize)]
struct Record<'a> {
    instance: &'a str,
    command: &'a str,
    computed: f64,
    expected_num: Option<String>,
    expected_den: Option<String>,
    deviation: f64,
    passed: bool,
}

pub fn write_rows(out: &mut impl Write, rows: &[Row], format: Format) -> Result<()> {
    match format {
        Format::Text => {
            for row in rows {
                writeln!(out, "{}", row.to_line())?;
            }
            let failed = rows.iter().filter(|r| !r.passed).count();
            writeln!(
                out,
                "{} rows, {} passed, {} failed",
                rows.len(),
                rows.len() - failed,
                failed
            )?;
        }
        Format::Json => {
            let records: Vec<_> = rows.iter().map(Row::record).collect();
            serde_json::to_writer_pretty(&mut *out, &records)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            for row in rows {
                w.serialize(row.record())?;
            }
            // Keep the header even with no rows.
            if rows.is_empty() {
                w.write_record([
                    "instance",
                    "command",
                    "computed",
                    "expected_num",
                    "expected_den",
                    "deviation",
                    "passed",
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
