use std::fmt::Write;

use serde::Serialize;
use sha2::{Digest, Sha256};

use matlen::bounds::BoundsReport;
use matlen::exact_linalg::FieldSpec;
use matlen::pbw::{PbwReport, PbwVerdict};
use matlen::span_engine::{Filtration, GeneratorSet};

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

#[derive(Debug, Serialize)]
pub struct Timings {
    pub filtration_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pbw_ms: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub input_digest: String,
    pub n: usize,
    pub t: usize,
    pub field: FieldSpec,
    pub ranks: Vec<usize>,
    /// The rank sequence reached its plateau.
    pub complete: bool,
    pub c: Option<usize>,
    pub r_star: Option<usize>,
    pub lie_closed: Option<bool>,
    pub bounds: Option<BoundsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pbw: Option<PbwReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl RunReport {
    pub fn truncated(
        command: Vec<String>,
        input_digest: String,
        g: &GeneratorSet,
        f: &Filtration,
    ) -> Self {
        RunReport {
            command,
            input_digest,
            n: g.n(),
            t: g.t(),
            field: g.field(),
            ranks: f.ranks().to_vec(),
            complete: false,
            c: None,
            r_star: None,
            lie_closed: None,
            bounds: None,
            pbw: None,
            timings: None,
        }
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let ranks: Vec<String> = self.ranks.iter().map(|r| r.to_string()).collect();
        writeln!(s, "ranks: {}", ranks.join(" ")).unwrap();
        if let (Some(c), Some(r)) = (self.c, self.r_star) {
            writeln!(s, "c = {c}").unwrap();
            writeln!(s, "r* = {r} of n^2 = {}", self.n * self.n).unwrap();
        }
        if let Some(lie) = self.lie_closed {
            writeln!(s, "commutator-closed: {}", yes_no(lie)).unwrap();
        }
        if let Some(pbw) = &self.pbw {
            let verdict = match pbw.verdict {
                PbwVerdict::Holds => "holds".to_string(),
                PbwVerdict::Fails => format!(
                    "fails at {}",
                    pbw.counterexample.as_ref().map_or(String::new(), |c| c.word.to_string())
                ),
                PbwVerdict::Truncated => "not decided (word cap)".to_string(),
            };
            writeln!(s, "ordered rewriting up to {}: {verdict}", pbw.checked_up_to).unwrap();
        }
        if let Some(b) = &self.bounds {
            for check in &b.checks {
                let status = match (check.applies, check.satisfied) {
                    (false, _) => "n/a",
                    (true, true) => "ok",
                    (true, false) => "VIOLATED",
                };
                writeln!(s, "bound {:<17} c <= {:<3} {status}", check.name, check.bound).unwrap();
            }
            writeln!(s, "consistent: {}", yes_no(b.consistent)).unwrap();
        }
        if let Some(t) = &self.timings {
            writeln!(s, "filtration: {:.1} ms", t.filtration_ms).unwrap();
            if let Some(p) = t.pbw_ms {
                writeln!(s, "ordered rewriting: {p:.1} ms").unwrap();
            }
        }
        s
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
