//! Reproduction table for the built-in examples: the two worked extensions,
//! the dual-numbers counterexample, bound certificates, property suites,
//! cross-field agreement and the monomial dimension oracle.

use serde::{Deserialize, Serialize};

use crate::corpus::{builtin, load_algebra, load_extension, BUILTINS};
use crate::error::LoadError;
use crate::extension::{
    bound_certificates, check_quotient_bifinite, findim_estimate, global_dimension, verify_gldim_bound,
    ExtensionReport, Outcome, QuotientBifinite,
};
use crate::field::{Field, FieldSpec, PrimeField, Rationals};
use crate::module::PdStatus;
use crate::suite::{monomial_path_count, run_suites, suite_corpus, SuiteConfig};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcceptanceRow {
    pub id: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub field: FieldSpec,
    pub cutoff: usize,
    pub seed: u64,
    pub probes: u64,
    pub suite_instances: u64,
    pub suite_cutoff: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            field: FieldSpec::PrimeField { characteristic: 1009 },
            cutoff: 30,
            seed: 0,
            probes: 100,
            suite_instances: 200,
            suite_cutoff: 8,
        }
    }
}

/// Expected bimodule resolution terms of the two worked extensions.
pub const EX1_TERMS: [&[&str]; 3] = [&["X(2,3)"], &["X(1,3)", "X(2,4)"], &["X(1,4)"]];
pub const EX2_TERMS: [&[&str]; 3] = [&["X(2,4)", "X(3,4)"], &["X(1,4)", "X(2,5)", "X(3,5)"], &["X(1,5)"]];

pub fn run_acceptance(cfg: VerifyConfig) -> Result<Vec<AcceptanceRow>, LoadError> {
    let mut rows = match cfg.field {
        FieldSpec::PrimeField { characteristic } => field_rows(&PrimeField::new(characteristic)?, cfg)?,
        FieldSpec::Rationals => field_rows(&Rationals, cfg)?,
    };
    rows.push(cross_field_row(cfg.cutoff)?);
    rows.push(oracle_row(cfg.cutoff)?);
    Ok(rows)
}

fn row(id: &str, passed: bool, detail: String) -> AcceptanceRow {
    AcceptanceRow { id: id.into(), passed, detail }
}

fn sorted(terms: &[Vec<String>]) -> Vec<Vec<String>> {
    terms
        .iter()
        .map(|t| {
            let mut t = t.clone();
            t.sort();
            t
        })
        .collect()
}

fn example_row(id: &str, rep: &ExtensionReport, dim_quotient: usize, expected: &[&[&str]]) -> AcceptanceRow {
    let want: Vec<Vec<String>> = expected.iter().map(|t| t.iter().map(|s| s.to_string()).collect()).collect();
    let got = sorted(&rep.bimodule.terms);
    let passed = rep.quotient_bifinite == QuotientBifinite::Yes(2)
        && rep.n_b == PdStatus::Finite(2)
        && rep.dim_quotient == dim_quotient
        && got == sorted(&want)
        && rep.bimodule.exact
        && rep.bimodule.minimal;
    row(
        id,
        passed,
        format!(
            "n_b = {}, dim A/B = {}, terms {:?}, exact {}, minimal {}",
            rep.n_b, rep.dim_quotient, got, rep.bimodule.exact, rep.bimodule.minimal
        ),
    )
}

fn field_rows<F: Field>(f: &F, cfg: VerifyConfig) -> Result<Vec<AcceptanceRow>, LoadError> {
    let mut rows = Vec::new();
    let ex = |name: &str| load_extension(f, builtin(name).expect("built-in"), false);

    let ex1 = ex("ex1")?;
    let rep1 = check_quotient_bifinite(&ex1.rings, cfg.cutoff)?;
    rows.push(example_row("ex1-bimodule-resolution", &rep1, 1, &EX1_TERMS));
    let ex2 = ex("ex2")?;
    let rep2 = check_quotient_bifinite(&ex2.rings, cfg.cutoff)?;
    rows.push(example_row("ex2-bimodule-resolution", &rep2, 4, &EX2_TERMS));

    let kx2 = ex("kx2")?;
    let rep = check_quotient_bifinite(&kx2.rings, cfg.cutoff)?;
    let gl = verify_gldim_bound(&kx2.rings, rep.n_b, cfg.cutoff)?;
    rows.push(row(
        "dual-numbers-converse",
        rep.n_b == PdStatus::Finite(0)
            && gl.gldim_b == PdStatus::Finite(0)
            && gl.gldim_a == PdStatus::AtLeast(cfg.cutoff)
            && gl.outcome != Outcome::Failed
            && gl.converse_note.is_some(),
        format!("n_b = {}, gl.dim B = {}, gl.dim A = {}", rep.n_b, gl.gldim_b, gl.gldim_a),
    ));

    for (name, ext, rep) in [("ex1", &ex1, &rep1), ("ex2", &ex2, &rep2)] {
        let fd = findim_estimate(&ext.rings.a, cfg.cutoff, cfg.probes, cfg.seed)?;
        let certs = bound_certificates(&ext.rings, rep, fd, cfg.seed, cfg.probes)?;
        rows.push(bound_row(&format!("{name}-bound-certificates"), &certs, false));
    }
    for name in ["a3", "cyc2"] {
        let ext = ex(name)?;
        let rep = check_quotient_bifinite(&ext.rings, cfg.cutoff)?;
        let fd = findim_estimate(&ext.rings.a, cfg.cutoff, cfg.probes, cfg.seed)?;
        let certs = bound_certificates(&ext.rings, &rep, fd, cfg.seed, cfg.probes)?;
        rows.push(bound_row(&format!("{name}-bound-certificates"), &certs, true));
    }

    let mut gl_failed = Vec::new();
    for (name, text) in BUILTINS {
        let ext = load_extension(f, text, false)?;
        let rep = check_quotient_bifinite(&ext.rings, cfg.cutoff)?;
        if verify_gldim_bound(&ext.rings, rep.n_b, cfg.cutoff)?.outcome == Outcome::Failed {
            gl_failed.push(*name);
        }
    }
    rows.push(row("gldim-bound", gl_failed.is_empty(), format!("failed on {gl_failed:?}")));

    let corpus = suite_corpus(f, cfg.suite_cutoff)?;
    let suite_cfg = SuiteConfig { instances: cfg.suite_instances, seed: cfg.seed, cutoff: cfg.suite_cutoff };
    for s in run_suites(&corpus, suite_cfg)? {
        rows.push(row(
            &format!("suite-{}", s.name),
            s.passed() && s.checked > 0,
            format!(
                "checked {}, skipped {} ({:.1}%), violations {}{}",
                s.checked,
                s.skipped,
                100.0 * s.skip_rate(),
                s.violation_count,
                s.violations.first().map(|v| format!(": {v}")).unwrap_or_default()
            ),
        ));
    }
    Ok(rows)
}

/// No certificate failed and the sharp bound never exceeds the coarse one;
/// with `need_verified`, at least one certificate must be verified.
fn bound_row(id: &str, certs: &[crate::extension::BoundCertificate], need_verified: bool) -> AcceptanceRow {
    let count = |o| certs.iter().filter(|c| c.outcome == o).count();
    let (v, vac, failed) = (count(Outcome::Verified), count(Outcome::Vacuous), count(Outcome::Failed));
    let ordered = certs
        .iter()
        .filter(|c| c.outcome == Outcome::Verified)
        .all(|c| matches!((c.sharp_bound, c.coarse_bound), (Some(s), Some(k)) if s <= k));
    let passed = failed == 0 && ordered && (!need_verified || v > 0);
    let first_failure = certs.iter().find(|c| c.outcome == Outcome::Failed).and_then(|c| c.reason.clone());
    row(
        id,
        passed,
        format!(
            "{} certificates: {v} verified, {vac} vacuous, {failed} failed{}",
            certs.len(),
            first_failure.map(|r| format!(" ({r})")).unwrap_or_default()
        ),
    )
}

/// Statuses and multiplicity tables that must not depend on the field.
#[derive(Debug, PartialEq, Eq)]
struct Fingerprint {
    statuses: Vec<PdStatus>,
    tables: Vec<Vec<Vec<usize>>>,
}

fn fingerprints<F: Field>(f: &F, cutoff: usize) -> Result<Vec<Fingerprint>, LoadError> {
    let mut out = Vec::new();
    for name in ["ex1", "ex2", "kx2"] {
        let ext = load_extension(f, builtin(name).expect("built-in"), false)?;
        let rep = check_quotient_bifinite(&ext.rings, cutoff)?;
        let mut statuses = vec![rep.n_l, rep.n_r, rep.n_b, rep.pd_b_a, rep.pd_a_b];
        if name == "kx2" {
            statuses.push(global_dimension(&ext.rings.a, cutoff)?);
            statuses.push(global_dimension(&ext.rings.b, cutoff)?);
        }
        let tables = vec![rep.left.multiplicities, rep.right.multiplicities, rep.bimodule.multiplicities];
        out.push(Fingerprint { statuses, tables });
    }
    Ok(out)
}

fn cross_field_row(cutoff: usize) -> Result<AcceptanceRow, LoadError> {
    let gf = fingerprints(&PrimeField::new(1009)?, cutoff)?;
    let q = fingerprints(&Rationals, cutoff)?;
    let mismatched: Vec<&str> =
        ["ex1", "ex2", "kx2"].iter().zip(gf.iter().zip(&q)).filter(|(_, (a, b))| a != b).map(|(n, _)| *n).collect();
    Ok(row(
        "cross-field-gf1009-vs-q",
        mismatched.is_empty(),
        if mismatched.is_empty() { "identical statuses and multiplicities".into() } else { format!("differ on {mismatched:?}") },
    ))
}

fn oracle_row(cutoff: usize) -> Result<AcceptanceRow, LoadError> {
    let f = PrimeField::new(1009)?;
    let mut problems = Vec::new();
    let mut monomial = 0;
    for (name, text) in BUILTINS {
        let (pres, alg) = load_algebra(&f, text)?;
        if let Some(count) = monomial_path_count(&pres) {
            monomial += 1;
            if count != alg.dim() {
                problems.push(format!("{name}: dim {} but {count} paths", alg.dim()));
            }
        }
        let ext = load_extension(&f, text, false)?;
        let rep = check_quotient_bifinite(&ext.rings, cutoff)?;
        for (which, t) in [("left", &rep.left), ("right", &rep.right), ("bimodule", &rep.bimodule)] {
            if !t.exact {
                problems.push(format!("{name}: {which} resolution not exact"));
            }
        }
    }
    Ok(row(
        "monomial-oracle-and-exactness",
        problems.is_empty() && monomial > 0,
        if problems.is_empty() { format!("{monomial} monomial algebras agree; all resolutions exact") } else { problems.join("; ") },
    ))
}
