//! Identifiers for the supported logics.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LogicId {
    /// Intuitionistic propositional logic.
    Ipc,
    /// IPC over the modal language, boxed formulas read as atoms.
    IpcBox,
    /// `IPC_□ + K + 4 + Nec`.
    IK4,
    /// `iK4 + L`.
    IGL,
    /// `iGL + CP`, without necessitation.
    IGLC,
    /// Propositional logic of the ▸ rules applied to the modal language.
    H,
    /// `iGL + Le`.
    LLe,
    /// `iGL + Le⁺`.
    LLePlus,
    /// `iGLC + TP` with the ▸ axioms of Heyting arithmetic.
    IHSigma,
    /// `iGLC` with the ▸ axioms of the starred calculus.
    IHStarSigma,
    /// `iGLC` with the ▸ axioms of the conjunctive calculus.
    IHStarConj,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown logic `{0}`; expected one of {names}", names = LogicId::ALL.map(|l| l.name()).join(", "))]
pub struct UnknownLogic(pub String);

impl LogicId {
    pub const ALL: [LogicId; 11] = [
        LogicId::Ipc,
        LogicId::IpcBox,
        LogicId::IK4,
        LogicId::IGL,
        LogicId::IGLC,
        LogicId::H,
        LogicId::LLe,
        LogicId::LLePlus,
        LogicId::IHSigma,
        LogicId::IHStarSigma,
        LogicId::IHStarConj,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LogicId::Ipc => "ipc",
            LogicId::IpcBox => "ipc_box",
            LogicId::IK4 => "ik4",
            LogicId::IGL => "igl",
            LogicId::IGLC => "iglc",
            LogicId::H => "h",
            LogicId::LLe => "lle",
            LogicId::LLePlus => "lleplus",
            LogicId::IHSigma => "ihsigma",
            LogicId::IHStarSigma => "ihstar_sigma",
            LogicId::IHStarConj => "ihstar_conj",
        }
    }

    /// Whether the logic has declared frame conditions, and thus may issue
    /// refutations.
    pub fn has_frame_conditions(self) -> bool {
        matches!(
            self,
            LogicId::Ipc | LogicId::IpcBox | LogicId::IK4 | LogicId::IGL | LogicId::IGLC
        )
    }
}

impl fmt::Display for LogicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LogicId {
    type Err = UnknownLogic;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.to_ascii_lowercase().replace(['-', '*'], "_");
        LogicId::ALL
            .into_iter()
            .find(|l| l.name() == key || l.name().replace('_', "") == key.replace('_', ""))
            .ok_or_else(|| UnknownLogic(s.to_string()))
    }
}
