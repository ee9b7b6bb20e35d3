//! Run metadata, verification ledgers, and their JSON / CSV / pretty forms.
//!
//! JSON goes through `serde_json::Value`, whose maps are ordered, so keys come
//! out sorted and output is byte-stable for a fixed input. Exact big integers
//! are written as decimal strings.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cyclotomy::CycloCtx;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, ModulusSource};
use crate::ledger::{Check, VerifySuiteResult};
use crate::linalg::IntMatrix;

pub const TOOL_NAME: &str = "cyclo";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldMeta {
    pub p: u64,
    pub n: u32,
    pub q: u64,
    /// Monic modulus, coefficients low to high.
    pub modulus: Vec<u64>,
    pub modulus_source: ModulusSource,
    /// Generator as its canonical index `Σ c_i p^i`.
    pub generator: u64,
}

impl From<&FieldCtx> for FieldMeta {
    fn from(f: &FieldCtx) -> Self {
        FieldMeta {
            p: f.p(),
            n: f.n(),
            q: f.q(),
            modulus: f.modulus().to_vec(),
            modulus_source: f.modulus_source(),
            generator: f.generator().0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub tool: String,
    pub version: String,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldMeta>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Meta {
    pub fn new(command: &str) -> Self {
        Meta {
            tool: TOOL_NAME.to_string(),
            version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            field: None,
            ell: None,
            seed: None,
        }
    }

    pub fn for_context(command: &str, ctx: &CycloCtx) -> Self {
        Meta {
            field: Some(ctx.field().into()),
            ell: Some(ctx.ell()),
            ..Self::new(command)
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ledger {
    pub meta: Meta,
    pub checks: Vec<Check>,
}

impl Ledger {
    pub fn new(meta: Meta, suite: VerifySuiteResult) -> Self {
        Ledger {
            meta,
            checks: suite.checks,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Sorted-key JSON. Compact output is a single line.
pub fn to_json<T: Serialize>(value: &T, pretty: bool) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Io(e.to_string()))?;
    let s = if pretty {
        serde_json::to_string_pretty(&v)
    } else {
        serde_json::to_string(&v)
    };
    s.map_err(|e| Error::Io(e.to_string()))
}

pub fn from_json<T: DeserializeOwned>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Io(e.to_string()))
}

fn csv_string(write: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .flexible(true)
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    write(&mut w).map_err(|e| Error::Io(e.to_string()))?;
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

/// One record per row.
pub fn matrix_csv(m: &IntMatrix) -> Result<String> {
    csv_string(|w| {
        for row in m.to_string_rows() {
            w.write_record(&row)?;
        }
        Ok(())
    })
}

/// Each matrix preceded by a one-field record holding its name.
pub fn named_matrices_csv(mats: &[(String, IntMatrix)]) -> Result<String> {
    csv_string(|w| {
        for (name, m) in mats {
            w.write_record([name])?;
            for row in m.to_string_rows() {
                w.write_record(&row)?;
            }
        }
        Ok(())
    })
}

/// Columns `check,pass,params,counterexample`; the last two hold JSON.
pub fn checks_csv(checks: &[Check]) -> Result<String> {
    csv_string(|w| {
        w.write_record(["check", "pass", "params", "counterexample"])?;
        for c in checks {
            let params = serde_json::to_string(&c.params).expect("plain data");
            let ce = c
                .counterexample
                .as_ref()
                .map(|v| serde_json::to_string(v).expect("plain data"))
                .unwrap_or_default();
            w.write_record([c.check.as_str(), &c.pass.to_string(), &params, &ce])?;
        }
        Ok(())
    })
}

pub fn named_matrices_pretty(mats: &[(String, IntMatrix)]) -> String {
    let mut out = String::new();
    for (i, (name, m)) in mats.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("{name} =\n{m}\n"));
    }
    out
}

pub fn checks_pretty(checks: &[Check]) -> String {
    let width = checks.iter().map(|c| c.check.len()).max().unwrap_or(0);
    let mut out = String::new();
    for c in checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        let params = serde_json::to_string(&c.params).expect("plain data");
        out.push_str(&format!("{status}  {:<width$}  {params}\n", c.check));
        if let Some(ce) = &c.counterexample {
            out.push_str(&format!("      counterexample: {ce}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn empty_ledger() {
        let l = Ledger::new(Meta::new("verify"), VerifySuiteResult::new());
        let s = to_json(&l, false).unwrap();
        assert!(s.starts_with(r#"{"checks":[],"meta":{"#), "{s}");
        assert_eq!(from_json::<Ledger>(&s).unwrap(), l);
    }

    #[test]
    fn keys_sorted() {
        let c = Check::new("z")
            .param("b", 1)
            .param("a", 2)
            .expect(false, || json!({"y": 1, "x": 2}));
        assert_eq!(
            to_json(&c, false).unwrap(),
            r#"{"check":"z","counterexample":{"x":2,"y":1},"params":{"a":2,"b":1},"pass":false}"#
        );
    }

    #[test]
    fn csv_quotes_fields() {
        let c = Check::new("demo").param("q", 7);
        let s = checks_csv(&[c]).unwrap();
        assert_eq!(
            s,
            "check,pass,params,counterexample\r\ndemo,true,\"{\"\"q\"\":7}\",\r\n"
        );
        let m = IntMatrix::from_rows(&[vec![1, -2], vec![30, 4]]).unwrap();
        assert_eq!(matrix_csv(&m).unwrap(), "1,-2\r\n30,4\r\n");
    }
}
