//! Condition checkers. Each returns a [`Verdict`] — HOLDS, FAILS, DISPROVED
//! or INCONCLUSIVE — with an exact rational certificate, plus the
//! direction-space stratification engine that discharges the "for every
//! direction" quantifiers for affine constraint maps.
//!
//! Verdict semantics: the implemented conditions are sufficient (sometimes
//! conditionally necessary), so FAILS means the checked condition is
//! violated with a witness, while DISPROVED is only issued when the stated
//! necessity prerequisites are themselves certified.

mod aubin;
mod common;
mod metreg;
mod nondegen;
mod socic;
mod stratify;

pub use aubin::{check_rel_aubin, DsBranch, RelAubin};
pub use metreg::check_metreg_m_dir;
pub use nondegen::{
    check_assumption1, check_f_dirmetreg, check_nondegen_all, check_nondegen_dir,
    check_nondegen_sys_dir, check_robinson_cq,
};
pub use socic::{check_isolated_calmness, check_socic, check_socic_dir};
pub use stratify::{stratify_directions, Cell, Stratification};

use serde_json::{json, Value};

use crate::exact::{rat_to_string, Rat};
use crate::poly::FaceId;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
    Disproved,
    Inconclusive,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Holds => "HOLDS",
            Status::Fails => "FAILS",
            Status::Disproved => "DISPROVED",
            Status::Inconclusive => "INCONCLUSIVE",
        }
    }

    /// CLI exit code contract: 0 HOLDS, 1 FAILS/DISPROVED, 2 INCONCLUSIVE.
    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Holds => 0,
            Status::Fails | Status::Disproved => 1,
            Status::Inconclusive => 2,
        }
    }
}

/// Exact certificate attached to a verdict. FAILS and DISPROVED always
/// carry one that re-verifies by substitution.
#[derive(Clone, Debug)]
pub enum Certificate {
    /// Nonzero multiplier violating a kernel-triviality condition.
    Multiplier { mu: Vec<Rat> },
    /// Kernel multiplier violating a face condition.
    KernelOnFace { face: FaceId, mu: Vec<Rat> },
    /// A direction (with multiplier data) witnessing a failed second-order
    /// or coverage condition.
    Direction {
        cell: String,
        point: Vec<Rat>,
        lambda: Option<Vec<Rat>>,
        eta: Option<Vec<Rat>>,
    },
    /// Face-pair witness of a failed directional metric regularity or
    /// relative-Aubin condition.
    FacePairWitness {
        cell: Option<String>,
        direction: Vec<Rat>,
        lambda: Vec<Rat>,
        eta: Vec<Rat>,
        f1: FaceId,
        f2: FaceId,
        w: Vec<Rat>,
    },
    /// A parameter direction not covered by any solution branch.
    CoverageGap { cell: String, q: Vec<Rat> },
}

#[derive(Clone, Debug)]
pub struct StratumReport {
    pub id: String,
    pub description: String,
    pub representative: Option<Vec<Rat>>,
    pub status: Status,
    pub witness: Option<Value>,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub condition: String,
    pub status: Status,
    pub certificate: Option<Certificate>,
    pub strata: Vec<StratumReport>,
    pub prerequisites: Vec<Verdict>,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn new(condition: &str, status: Status) -> Self {
        Self {
            condition: condition.to_string(),
            status,
            certificate: None,
            strata: vec![],
            prerequisites: vec![],
            notes: vec![],
        }
    }

    pub fn with_certificate(mut self, c: Certificate) -> Self {
        self.certificate = Some(c);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn with_prerequisite(mut self, v: Verdict) -> Self {
        self.prerequisites.push(v);
        self
    }

    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }

    /// Report JSON: {"condition", "status", "certificate", "strata",
    /// "prerequisites", "notes"} with rationals as strings.
    pub fn to_json(&self) -> Value {
        json!({
            "condition": self.condition,
            "status": self.status.as_str(),
            "certificate": self.certificate.as_ref().map(certificate_json),
            "strata": self.strata.iter().map(stratum_json).collect::<Vec<_>>(),
            "prerequisites": self.prerequisites.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
            "notes": self.notes,
        })
    }
}

pub(crate) fn vec_json(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(rat_to_string(x))).collect())
}

fn face_json(f: &FaceId) -> Value {
    Value::Array(f.0.iter().map(|&i| json!(i)).collect())
}

fn certificate_json(c: &Certificate) -> Value {
    match c {
        Certificate::Multiplier { mu } => json!({"kind": "multiplier", "mu": vec_json(mu)}),
        Certificate::KernelOnFace { face, mu } => {
            json!({"kind": "kernel-on-face", "face": face_json(face), "mu": vec_json(mu)})
        }
        Certificate::Direction {
            cell,
            point,
            lambda,
            eta,
        } => json!({
            "kind": "direction",
            "cell": cell,
            "point": vec_json(point),
            "lambda": lambda.as_ref().map(|v| vec_json(v)),
            "eta": eta.as_ref().map(|v| vec_json(v)),
        }),
        Certificate::FacePairWitness {
            cell,
            direction,
            lambda,
            eta,
            f1,
            f2,
            w,
        } => json!({
            "kind": "face-pair",
            "cell": cell,
            "direction": vec_json(direction),
            "lambda": vec_json(lambda),
            "eta": vec_json(eta),
            "f1": face_json(f1),
            "f2": face_json(f2),
            "w": vec_json(w),
        }),
        Certificate::CoverageGap { cell, q } => {
            json!({"kind": "coverage-gap", "cell": cell, "q": vec_json(q)})
        }
    }
}

fn stratum_json(s: &StratumReport) -> Value {
    json!({
        "id": s.id,
        "description": s.description,
        "representative": s.representative.as_ref().map(|v| vec_json(v)),
        "status": s.status.as_str(),
        "witness": s.witness,
    })
}

#[cfg(test)]
pub(crate) mod tests;
