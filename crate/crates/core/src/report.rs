//! Serialized command output. Both renderings are deterministic for a fixed
//! input and configuration.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::extension::{
    BoundCertificate, ExtensionReport, FindimEstimate, GldimCertificate, Outcome, QuotientBifinite, ResolutionTable,
};
use crate::field::FieldSpec;
use crate::module::PdStatus;
use crate::verify::AcceptanceRow;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub input: Option<String>,
    pub field: FieldSpec,
    pub cutoff: usize,
    pub seed: u64,
    pub probes: u64,
    pub adjoin_unit: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub which: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSummary {
    pub name: String,
    pub dim: usize,
    pub radical_dim: usize,
    pub vertices: Vec<String>,
    /// Known only for algebras given by a quiver with relations.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub monomial: Option<bool>,
    /// Only set for the bound quiver algebra itself.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub admissible: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedResolution {
    pub module: String,
    pub table: ResolutionTable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalDimensions {
    pub a: PdStatus,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub b: Option<PdStatus>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Ok,
    /// Some status hit the cutoff, so a claim could not be settled.
    Inconclusive,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub schema: u32,
    pub command: String,
    pub config: ConfigEcho,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub algebras: Vec<AlgebraSummary>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub extension: Option<ExtensionReport>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub resolutions: Vec<NamedResolution>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub global_dimensions: Option<GlobalDimensions>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub findim: Option<FindimEstimate>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub certificates: Vec<BoundCertificate>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gldim_certificate: Option<GldimCertificate>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub acceptance: Vec<AcceptanceRow>,
    pub verdict: Verdict,
}

impl ReportDocument {
    pub fn new(command: &str, config: ConfigEcho) -> Self {
        ReportDocument {
            tool: "bifinite".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            schema: SCHEMA_VERSION,
            command: command.into(),
            config,
            algebras: Vec::new(),
            extension: None,
            resolutions: Vec::new(),
            global_dimensions: None,
            findim: None,
            certificates: Vec::new(),
            gldim_certificate: None,
            acceptance: Vec::new(),
            verdict: Verdict::Ok,
        }
    }

    /// Recomputes the verdict from the contents.
    pub fn settle(&mut self) {
        let mut failed = false;
        let mut open = false;
        if let Some(ext) = &self.extension {
            failed |= !ext.ordering_holds() || !ext.bimodule.exact;
            open |= matches!(ext.quotient_bifinite, QuotientBifinite::Unknown(_));
        }
        for r in &self.resolutions {
            failed |= !r.table.exact;
            open |= !r.table.status.is_determined();
        }
        if let Some(g) = &self.global_dimensions {
            open |= !g.a.is_determined() || g.b.is_some_and(|b| !b.is_determined());
        }
        for c in &self.certificates {
            failed |= c.outcome == Outcome::Failed;
            open |= c.outcome == Outcome::Vacuous;
        }
        if let Some(c) = &self.gldim_certificate {
            failed |= c.outcome == Outcome::Failed;
        }
        failed |= self.acceptance.iter().any(|r| !r.passed);
        self.verdict = if failed {
            Verdict::Failed
        } else if open {
            Verdict::Inconclusive
        } else {
            Verdict::Ok
        };
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        let _ = writeln!(out, "{} {} {}", self.tool, self.version, self.command);
        if let Some(input) = &c.input {
            let _ = writeln!(out, "input: {input}");
        }
        let _ = writeln!(out, "field: {}  cutoff: {}  seed: {}  probes: {}", c.field, c.cutoff, c.seed, c.probes);
        for a in &self.algebras {
            let _ = writeln!(
                out,
                "algebra {}: dim {}, radical dim {}, vertices [{}]{}{}",
                a.name,
                a.dim,
                a.radical_dim,
                a.vertices.join(", "),
                a.monomial.map(|x| format!(", monomial {}", yes_no(x))).unwrap_or_default(),
                a.admissible.map(|x| format!(", admissible {}", yes_no(x))).unwrap_or_default()
            );
        }
        if let Some(e) = &self.extension {
            let _ = writeln!(out, "dim A = {}, dim B = {}, dim A/B = {}", e.dim_a, e.dim_b, e.dim_quotient);
            let _ = writeln!(out, "pd A/B: left {}, right {}, bimodule {}", e.n_l, e.n_r, e.n_b);
            let _ = writeln!(out, "pd A: as left B-module {}, as right B-module {}", e.pd_b_a, e.pd_a_b);
            let q = match e.quotient_bifinite {
                QuotientBifinite::Yes(n) => format!("yes (n_b = {n})"),
                QuotientBifinite::Unknown(c) => format!("unknown (cutoff {c})"),
            };
            let _ = writeln!(out, "quotient bifinite: {q}");
            write_table(&mut out, "bimodule resolution of A/B", &e.bimodule);
            for o in &e.ordering {
                let h = match o.holds {
                    Some(true) => "holds",
                    Some(false) => "VIOLATED",
                    None => "undecided",
                };
                let _ = writeln!(out, "check {}: {h}", o.relation);
            }
        }
        for r in &self.resolutions {
            write_table(&mut out, &format!("resolution of {}", r.module), &r.table);
        }
        if let Some(g) = &self.global_dimensions {
            let _ = writeln!(out, "gl.dim A = {}", g.a);
            if let Some(b) = g.b {
                let _ = writeln!(out, "gl.dim B = {b}");
            }
        }
        if let Some(c) = &self.gldim_certificate {
            let bound = c.bound.map(|b| b.to_string()).unwrap_or_else(|| "n/a".into());
            let _ = writeln!(out, "gl.dim bound 2 n_b + gl.dim A = {bound}: {}", outcome_name(c.outcome));
            if let Some(note) = &c.converse_note {
                let _ = writeln!(out, "note: {note}");
            }
        }
        if let Some(f) = &self.findim {
            let _ = match f {
                FindimEstimate::ExactViaGldim { value } => writeln!(out, "fin.dim A = {value} (equals gl.dim)"),
                FindimEstimate::LowerBound { value, cutoff, probes } => {
                    writeln!(out, "fin.dim A >= {value} (lower bound from {probes} probes, cutoff {cutoff})")
                }
            };
        }
        if !self.certificates.is_empty() {
            let count = |o| self.certificates.iter().filter(|c| c.outcome == o).count();
            let _ = writeln!(
                out,
                "certificates: {} total, {} verified, {} vacuous, {} failed",
                self.certificates.len(),
                count(Outcome::Verified),
                count(Outcome::Vacuous),
                count(Outcome::Failed)
            );
            for c in &self.certificates {
                let bounds = match (c.sharp_bound, c.coarse_bound) {
                    (Some(s), Some(k)) => format!("sharp {s}, coarse {k}"),
                    _ => "no bound".into(),
                };
                let _ = writeln!(
                    out,
                    "  seed {:>4}: dim {:>3}, pd {}, {bounds}: {}{}",
                    c.seed,
                    c.module_dim,
                    c.pd_b_m,
                    outcome_name(c.outcome),
                    c.reason.as_ref().map(|r| format!(" ({r})")).unwrap_or_default()
                );
            }
        }
        if !self.acceptance.is_empty() {
            let width = self.acceptance.iter().map(|r| r.id.len()).max().unwrap_or(0);
            for r in &self.acceptance {
                let _ = writeln!(out, "{} {:width$}  {}", if r.passed { "PASS" } else { "FAIL" }, r.id, r.detail);
            }
        }
        let _ = writeln!(out, "verdict: {}", verdict_name(self.verdict));
        out
    }
}

fn write_table(out: &mut String, title: &str, t: &ResolutionTable) {
    let _ = writeln!(out, "{title}: pd {}", t.status);
    for (k, terms) in t.terms.iter().enumerate() {
        let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        let _ = writeln!(out, "  P{k}: {body}");
    }
    let _ = writeln!(out, "  exact {}, minimal {}", yes_no(t.exact), yes_no(t.minimal));
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn outcome_name(o: Outcome) -> &'static str {
    match o {
        Outcome::Verified => "verified",
        Outcome::Vacuous => "vacuous",
        Outcome::Failed => "FAILED",
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Ok => "ok",
        Verdict::Inconclusive => "inconclusive",
        Verdict::Failed => "FAILED",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc() -> ReportDocument {
        let config = ConfigEcho {
            input: None,
            field: FieldSpec::Rationals,
            cutoff: 4,
            seed: 0,
            probes: 1,
            adjoin_unit: false,
            which: None,
        };
        ReportDocument::new("test", config)
    }

    #[test]
    fn verdict_follows_contents() {
        let mut d = doc();
        d.settle();
        assert_eq!(d.verdict, Verdict::Ok);

        d.global_dimensions = Some(GlobalDimensions { a: PdStatus::AtLeast(4), b: Some(PdStatus::Finite(0)) });
        d.settle();
        assert_eq!(d.verdict, Verdict::Inconclusive);

        d.acceptance.push(AcceptanceRow { id: "x".into(), passed: false, detail: String::new() });
        d.settle();
        assert_eq!(d.verdict, Verdict::Failed);
        assert!(d.to_text().ends_with("verdict: FAILED\n"));
    }

    #[test]
    fn json_round_trips() {
        let mut d = doc();
        d.global_dimensions = Some(GlobalDimensions { a: PdStatus::Finite(2), b: None });
        d.settle();
        let back: ReportDocument = serde_json::from_str(&d.to_json()).unwrap();
        assert_eq!(back, d);
    }
}
