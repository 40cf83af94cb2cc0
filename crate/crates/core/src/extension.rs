//! Quotient bifiniteness of an extension `B ⊆ A` and the finitistic and
//! global dimension bounds that follow from it.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;
use crate::field::Field;
use crate::module::{
    minimal_resolution_bounded, nth_syzygy, projective_dimension, random_module, random_submodule, ExtensionRings, LeftModule,
    PdStatus, RandomBounds, Resolution, Ring, DEFAULT_MAX_SYZYGY_DIM,
};
use crate::tensor::shift_sequence;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "value", rename_all = "kebab-case")]
pub enum QuotientBifinite {
    /// `A/B` has finite projective dimension as a bimodule.
    Yes(usize),
    /// The bimodule resolution reached the cutoff.
    Unknown(usize),
}

/// Terms of a minimal resolution, by homological degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionTable {
    pub status: PdStatus,
    pub vertex_labels: Vec<String>,
    /// Summand labels per degree, e.g. `[["X(2,3)"], ["X(1,3)", "X(2,4)"]]`.
    pub terms: Vec<Vec<String>>,
    pub multiplicities: Vec<Vec<usize>>,
    pub exact: bool,
    pub minimal: bool,
}

impl ResolutionTable {
    pub fn from_resolution<F: Field>(res: &Resolution<F>) -> Result<Self, AlgebraError> {
        Ok(ResolutionTable {
            status: res.status,
            vertex_labels: res.target.ring().vertex_labels()?,
            terms: res.labelled_terms()?,
            multiplicities: res.multiplicities(),
            exact: res.exactness().is_exact(),
            minimal: res.is_minimal(),
        })
    }
}

/// A comparison `lhs <= rhs` between two statuses; `holds` is `None` when
/// the cutoff leaves it undecided.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderingCheck {
    pub relation: String,
    pub holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionReport {
    pub dim_a: usize,
    pub dim_b: usize,
    pub dim_quotient: usize,
    /// `A/B` as a left `B`-module.
    pub n_l: PdStatus,
    /// `A/B` as a right `B`-module.
    pub n_r: PdStatus,
    /// `A/B` as a `B`-bimodule.
    pub n_b: PdStatus,
    /// `A` as a left `B`-module.
    pub pd_b_a: PdStatus,
    /// `A` as a right `B`-module.
    pub pd_a_b: PdStatus,
    pub quotient_bifinite: QuotientBifinite,
    pub left: ResolutionTable,
    pub right: ResolutionTable,
    pub bimodule: ResolutionTable,
    pub ordering: Vec<OrderingCheck>,
    pub cutoff: usize,
}

impl ExtensionReport {
    /// No ordering check is decidably false.
    pub fn ordering_holds(&self) -> bool {
        self.ordering.iter().all(|c| c.holds != Some(false))
    }
}

pub fn check_quotient_bifinite<F: Field>(
    rings: &ExtensionRings<F>,
    cutoff: usize,
) -> Result<ExtensionReport, AlgebraError> {
    let q = rings.quotient_bimodule();
    let bi = minimal_resolution_bounded(&q, cutoff, DEFAULT_MAX_SYZYGY_DIM)?;
    let left = minimal_resolution_bounded(&q.left_part(), cutoff, DEFAULT_MAX_SYZYGY_DIM)?;
    let right = minimal_resolution_bounded(&q.right_part(), cutoff, DEFAULT_MAX_SYZYGY_DIM)?;
    let pd_b_a = projective_dimension(&rings.a_left(), cutoff)?;
    let pd_a_b = projective_dimension(&rings.a_right(), cutoff)?;
    let (n_l, n_r, n_b) = (left.status, right.status, bi.status);
    let check = |relation: &str, lhs: PdStatus, rhs: PdStatus| OrderingCheck { relation: relation.into(), holds: lhs.le(rhs) };
    let ordering = vec![
        check("n_l <= n_b", n_l, n_b),
        check("n_r <= n_b", n_r, n_b),
        // From 0 -> B -> A -> A/B -> 0 with B projective: the sup with 0
        // matters only when A = B.
        check("pd_B(A) <= sup(0, n_l)", pd_b_a, n_l.max(PdStatus::Finite(0))),
        check("pd(A_B) <= sup(0, n_r)", pd_a_b, n_r.max(PdStatus::Finite(0))),
    ];
    let quotient_bifinite = match n_b.value() {
        Some(n) => QuotientBifinite::Yes(n),
        None => QuotientBifinite::Unknown(cutoff),
    };
    Ok(ExtensionReport {
        dim_a: rings.embedding.big.dim(),
        dim_b: rings.embedding.small.dim(),
        dim_quotient: q.dim(),
        n_l,
        n_r,
        n_b,
        pd_b_a,
        pd_a_b,
        quotient_bifinite,
        left: ResolutionTable::from_resolution(&left)?,
        right: ResolutionTable::from_resolution(&right)?,
        bimodule: ResolutionTable::from_resolution(&bi)?,
        ordering,
        cutoff,
    })
}

/// Maximum projective dimension of the simple modules.
pub fn global_dimension<F: Field>(ring: &Arc<Ring<F>>, cutoff: usize) -> Result<PdStatus, AlgebraError> {
    let n = ring.vertex_count()?;
    let pds = (0..n)
        .into_par_iter()
        .map(|v| projective_dimension(&LeftModule::simple(ring, v)?, cutoff))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(pds.into_iter().fold(PdStatus::Zero, PdStatus::max))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FindimEstimate {
    /// Global dimension is finite, so the finitistic dimension equals it.
    ExactViaGldim { value: usize },
    /// Largest finite projective dimension seen among the probes.
    LowerBound { value: usize, cutoff: usize, probes: u64 },
}

impl FindimEstimate {
    pub fn exact(self) -> Option<usize> {
        match self {
            FindimEstimate::ExactViaGldim { value } => Some(value),
            FindimEstimate::LowerBound { .. } => None,
        }
    }

    pub fn value(self) -> usize {
        match self {
            FindimEstimate::ExactViaGldim { value } | FindimEstimate::LowerBound { value, .. } => value,
        }
    }
}

/// Probe modules for seed `s`: a random module, its syzygy and a random
/// quotient of it.
fn findim_probes<F: Field>(ring: &Arc<Ring<F>>, seed: u64) -> Result<Vec<LeftModule<F>>, AlgebraError> {
    let m = random_module(ring, seed, RandomBounds::default())?;
    let sub = random_submodule(&m, seed ^ 0x5eed, 2);
    let omega = nth_syzygy(&m, 1)?;
    let quot = m.quotient(&sub);
    Ok(vec![m, omega, quot])
}

pub fn findim_estimate<F: Field>(
    ring: &Arc<Ring<F>>,
    cutoff: usize,
    probes: u64,
    seed: u64,
) -> Result<FindimEstimate, AlgebraError> {
    if let Some(g) = global_dimension(ring, cutoff)?.value() {
        return Ok(FindimEstimate::ExactViaGldim { value: g });
    }
    let best = (seed..seed + probes)
        .into_par_iter()
        .map(|s| -> Result<usize, AlgebraError> {
            let mut best = 0;
            for m in findim_probes(ring, s)? {
                if let Some(n) = projective_dimension(&m, cutoff)?.value() {
                    best = best.max(n);
                }
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FindimEstimate::LowerBound { value: best.into_iter().max().unwrap_or(0), cutoff, probes })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Verified,
    /// A needed quantity is infinite or hit the cutoff.
    Vacuous,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub seed: u64,
    pub module_dim: usize,
    pub pd_b_m: PdStatus,
    pub n_r: PdStatus,
    pub n_b: PdStatus,
    pub pd_b_a: PdStatus,
    pub findim_a: FindimEstimate,
    /// `n_r + max(fin.dim A + pd_B(A), n_b - 1)`.
    pub sharp_bound: Option<usize>,
    /// `2 n_b + fin.dim A`.
    pub coarse_bound: Option<usize>,
    /// `0 -> Ω^{n_r} M -> A ⊗_B Ω^{n_r} M -> (A/B) ⊗_B Ω^{n_r} M -> 0` is exact.
    pub shift_exact: Option<bool>,
    /// pd of `(A/B) ⊗_B Ω^{n_r} M`, which must not exceed `n_b`.
    pub pd_quotient_tensor: Option<PdStatus>,
    pub outcome: Outcome,
    pub reason: Option<String>,
}

/// The probe module used for `seed`: a random `B`-module shifted by up to
/// `seed % 3` syzygies, stopping before the shift reaches zero.
pub fn probe_module<F: Field>(rings: &ExtensionRings<F>, seed: u64) -> Result<LeftModule<F>, AlgebraError> {
    let mut m = random_module(&rings.b, seed, RandomBounds::default())?;
    for _ in 0..seed % 3 {
        let next = crate::module::syzygy(&m)?;
        if next.is_zero() {
            break;
        }
        m = next;
    }
    Ok(m)
}

pub fn sharp_bound(n_r: usize, n_b: usize, findim: usize, pd_b_a: usize) -> usize {
    n_r + (findim + pd_b_a).max(n_b.saturating_sub(1))
}

pub fn coarse_bound(n_b: usize, findim: usize) -> usize {
    2 * n_b + findim
}

pub fn verify_theorem_bound<F: Field>(
    rings: &ExtensionRings<F>,
    report: &ExtensionReport,
    findim_a: FindimEstimate,
    seed: u64,
    m: &LeftModule<F>,
) -> Result<BoundCertificate, AlgebraError> {
    let cutoff = report.cutoff;
    let pd_b_m = projective_dimension(m, cutoff)?;
    let mut cert = BoundCertificate {
        seed,
        module_dim: m.dim(),
        pd_b_m,
        n_r: report.n_r,
        n_b: report.n_b,
        pd_b_a: report.pd_b_a,
        findim_a,
        sharp_bound: None,
        coarse_bound: None,
        shift_exact: None,
        pd_quotient_tensor: None,
        outcome: Outcome::Vacuous,
        reason: None,
    };
    let mut failures = Vec::new();
    if let (Some(n_r), Some(n_b)) = (report.n_r.value(), report.n_b.value()) {
        let omega = nth_syzygy(m, n_r)?;
        let exact = shift_sequence(rings, &omega)?.is_exact();
        cert.shift_exact = Some(exact);
        if !exact {
            failures.push(format!("shift sequence on the {n_r}-th syzygy is not exact"));
        }
        let qt = crate::tensor::tensor_module(&rings.quotient_bimodule(), &omega)?;
        let pd_qt = projective_dimension(&qt, cutoff)?;
        cert.pd_quotient_tensor = Some(pd_qt);
        if pd_qt.le(PdStatus::Finite(n_b)) == Some(false) {
            failures.push(format!("pd of the quotient tensor is {pd_qt}, above n_b = {n_b}"));
        }
    }
    let components = (report.n_r.value(), report.n_b.value(), report.pd_b_a.value(), findim_a.exact());
    if let (Some(n_r), Some(n_b), Some(pd_b_a), Some(f)) = components {
        let (sharp, coarse) = (sharp_bound(n_r, n_b, f, pd_b_a), coarse_bound(n_b, f));
        cert.sharp_bound = Some(sharp);
        cert.coarse_bound = Some(coarse);
        if sharp > coarse {
            failures.push(format!("sharp bound {sharp} exceeds coarse bound {coarse}"));
        }
        match pd_b_m {
            PdStatus::AtLeast(c) => cert.reason = Some(format!("pd_B(M) reached the cutoff {c}")),
            _ => {
                let pd = pd_b_m.value().unwrap_or(0);
                if pd > sharp {
                    failures.push(format!("pd_B(M) = {pd} exceeds the sharp bound {sharp}"));
                }
                if pd > coarse {
                    failures.push(format!("pd_B(M) = {pd} exceeds the coarse bound {coarse}"));
                }
                if failures.is_empty() {
                    cert.outcome = Outcome::Verified;
                }
            }
        }
    } else {
        let mut missing = Vec::new();
        for (name, s) in [("n_r", report.n_r), ("n_b", report.n_b), ("pd_B(A)", report.pd_b_a)] {
            if !s.is_determined() {
                missing.push(format!("{name} = {s}"));
            }
        }
        if findim_a.exact().is_none() {
            missing.push(format!("fin.dim A only bounded below by {}", findim_a.value()));
        }
        cert.reason = Some(missing.join("; "));
    }
    if !failures.is_empty() {
        cert.outcome = Outcome::Failed;
        cert.reason = Some(failures.join("; "));
    }
    Ok(cert)
}

/// Certificates for seeds `seed..seed + probes`, in seed order.
pub fn bound_certificates<F: Field>(
    rings: &ExtensionRings<F>,
    report: &ExtensionReport,
    findim_a: FindimEstimate,
    seed: u64,
    probes: u64,
) -> Result<Vec<BoundCertificate>, AlgebraError> {
    (seed..seed + probes)
        .into_par_iter()
        .map(|s| verify_theorem_bound(rings, report, findim_a, s, &probe_module(rings, s)?))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GldimCertificate {
    pub n_b: PdStatus,
    pub gldim_a: PdStatus,
    pub gldim_b: PdStatus,
    /// `2 n_b + gl.dim A`.
    pub bound: Option<usize>,
    pub outcome: Outcome,
    /// Set when `gl.dim B` is finite while `gl.dim A` is not known to be.
    pub converse_note: Option<String>,
}

pub fn verify_gldim_bound<F: Field>(
    rings: &ExtensionRings<F>,
    n_b: PdStatus,
    cutoff: usize,
) -> Result<GldimCertificate, AlgebraError> {
    let gldim_a = global_dimension(&rings.a, cutoff)?;
    let gldim_b = global_dimension(&rings.b, cutoff)?;
    let bound = match (n_b.value(), gldim_a.value()) {
        (Some(n), Some(g)) => Some(coarse_bound(n, g)),
        _ => None,
    };
    let outcome = match bound {
        Some(b) => match gldim_b.le(PdStatus::Finite(b)) {
            Some(true) => Outcome::Verified,
            // `AtLeast(c)` with `c > bound` is already a contradiction.
            Some(false) => Outcome::Failed,
            None => Outcome::Vacuous,
        },
        None => Outcome::Vacuous,
    };
    let converse_note = match (gldim_b, gldim_a) {
        (b, PdStatus::AtLeast(c)) if b.is_determined() => Some(format!(
            "converse not implied: gl.dim B = {b} is finite while gl.dim A is at least {c}"
        )),
        _ => None,
    };
    Ok(GldimCertificate { n_b, gldim_a, gldim_b, bound, outcome, converse_note })
}
