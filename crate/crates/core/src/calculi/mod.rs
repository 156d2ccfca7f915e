//! Proof engines and decision procedures.
//!
//! * [`decide_ipc_box`] decides `IPC_□` completely.
//! * [`prove_bounded`] runs budgeted Hilbert saturation for the modal
//!   calculi and falls back to countermodel search where frame conditions
//!   are declared.
//! * [`decide_ihstar_sigma`] reduces the starred calculus to `iGLC` via
//!   `(A^□)⁺`.

mod certificate;
mod hilbert;
mod ipc;
mod modal;
mod reduce;

pub use certificate::{check_certificate, Certificate, CertificateError, Justification, Line};
pub use hilbert::{prove_bounded, prove_certificate};
pub use ipc::{decide_ipc_box, ipc_provable, IpcProver};
pub use modal::{prove_modal, prove_modal_cancellable};
pub use reduce::{decide, decide_ihsigma, decide_ihstar_sigma, Reduction};

use crate::formula::Formula;
use crate::logic::LogicId;
use crate::models::BirelationalModel;
use crate::pres::PresVariant;
use crate::rewrite::replace_subformula;
use crate::schema::AxiomSchema;
use serde::{Deserialize, Serialize};

/// Search limits. Exhausting any of them yields [`Verdict::Unknown`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Box-nesting added on top of the goal's subformulas when building the
    /// instantiation pool.
    pub depth: usize,
    pub max_lines: usize,
    pub max_worlds: usize,
    /// Derivation depth for streamed preservativity axioms.
    pub pres_depth: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            depth: 2,
            max_lines: 10_000,
            max_worlds: 6,
            pres_depth: 2,
        }
    }
}

/// A refuting model. For `IPC_□` the model interprets the abstracted
/// language; `bindings` name the boxed formula each fresh atom stands for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Countermodel {
    pub model: BirelationalModel,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bindings: Vec<(String, Formula)>,
}

impl Countermodel {
    pub fn plain(model: BirelationalModel) -> Countermodel {
        Countermodel {
            model,
            bindings: Vec::new(),
        }
    }

    /// `goal` with each bound boxed formula replaced by its atom.
    pub fn abstracted(&self, goal: &Formula) -> Formula {
        self.bindings.iter().fold(goal.clone(), |acc, (p, b)| {
            replace_subformula(&acc, b, &Formula::atom(p.clone()))
        })
    }

    /// Whether the model is a frame of `logic` and falsifies `goal`.
    pub fn refutes(&self, logic: LogicId, goal: &Formula) -> bool {
        self.model.is_frame_for(logic) && !self.model.valid_on(&self.abstracted(goal))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub reason: String,
    pub lines: usize,
    pub worlds: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Provable { certificate: Certificate },
    Refuted { countermodel: Countermodel },
    Unknown { report: BoundsReport },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Provable { .. } => "provable",
            Verdict::Refuted { .. } => "refuted",
            Verdict::Unknown { .. } => "unknown",
        }
    }

    pub fn is_provable(&self) -> bool {
        matches!(self, Verdict::Provable { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub nodes: u64,
    pub frames: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub verdict: Verdict,
    pub stats: Stats,
}

/// Axiom schemata, rules and preservativity family of each logic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Calculus {
    pub schemata: Vec<AxiomSchema>,
    pub necessitation: bool,
    pub pres: Option<PresVariant>,
}

pub fn calculus(logic: LogicId) -> Calculus {
    use AxiomSchema::*;
    let igl = vec![K, Four, L];
    let (schemata, pres) = match logic {
        LogicId::Ipc | LogicId::IpcBox => (vec![], None),
        LogicId::IK4 => (vec![K, Four], None),
        LogicId::IGL => (igl, None),
        LogicId::IGLC => ([igl, vec![CP]].concat(), None),
        LogicId::H => ([igl, vec![CP, TP]].concat(), None),
        LogicId::LLe => ([igl, vec![Le]].concat(), None),
        LogicId::LLePlus => ([igl, vec![LePlus, CPa]].concat(), None),
        LogicId::IHSigma => ([igl, vec![CPa, LePlus]].concat(), Some(PresVariant::Ha)),
        LogicId::IHStarSigma => ([igl, vec![CP]].concat(), Some(PresVariant::Star)),
        LogicId::IHStarConj => ([igl, vec![CP]].concat(), Some(PresVariant::Alpha)),
    };
    let necessitation = !schemata.contains(&CP) && !matches!(logic, LogicId::Ipc | LogicId::IpcBox);
    Calculus {
        schemata,
        necessitation,
        pres,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn necessitation_dropped_exactly_with_full_cp() {
        for l in [LogicId::IGLC, LogicId::H, LogicId::IHStarSigma, LogicId::IHStarConj] {
            assert!(!calculus(l).necessitation, "{l}");
        }
        for l in [LogicId::IK4, LogicId::IGL, LogicId::LLe, LogicId::LLePlus, LogicId::IHSigma] {
            assert!(calculus(l).necessitation, "{l}");
        }
    }
}
