//! Hilbert-style certificates and their independent checker.

use super::calculus;
use super::ipc::ipc_provable;
use crate::formula::Formula;
use crate::logic::LogicId;
use crate::pres::{verify_derivation, DerivationTree};
use crate::schema::{instantiate, AxiomSchema};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Justification {
    Axiom { schema: AxiomSchema, args: Vec<Formula> },
    /// The line is a theorem of `IPC_□`, confirmed by the sequent prover.
    Ipc,
    /// From line `minor` (`A`) and line `major` (`A → B`), both 1-based.
    Mp { minor: usize, major: usize },
    Nec { premise: usize },
    /// `□A → □B` from a preservativity derivation of `A ▸ B`.
    Pres { derivation: Box<DerivationTree> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Line {
    pub formula: Formula,
    pub by: Justification,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub lines: Vec<Line>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("certificate is empty")]
    Empty,
    #[error("line {line}: {reason}")]
    BadLine { line: usize, reason: String },
    #[error("last line proves {found}, not the goal {goal}")]
    WrongConclusion { found: Formula, goal: Formula },
}

impl Certificate {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    /// Plain text, one `n  formula  justification` line per step.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Axiom { schema, args } => {
                write!(f, "axiom {schema}")?;
                for a in args {
                    write!(f, " [{a}]")?;
                }
                Ok(())
            }
            Justification::Ipc => f.write_str("ipc"),
            Justification::Mp { minor, major } => write!(f, "MP {minor} {major}"),
            Justification::Nec { premise } => write!(f, "NEC {premise}"),
            Justification::Pres { derivation } => write!(f, "pres {}", derivation.variant),
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.lines.iter().enumerate() {
            writeln!(f, "{:>4}  {}  {}", i + 1, l.formula, l.by)?;
        }
        Ok(())
    }
}

fn check_line(logic: LogicId, lines: &[Line], k: usize) -> Result<(), String> {
    let calc = calculus(logic);
    let line = &lines[k];
    let earlier = |i: usize| -> Result<&Formula, String> {
        if i == 0 || i > k {
            Err(format!("reference to line {i} is not an earlier line"))
        } else {
            Ok(&lines[i - 1].formula)
        }
    };
    match &line.by {
        Justification::Axiom { schema, args } => {
            if !calc.schemata.contains(schema) {
                return Err(format!("{schema} is not an axiom of {logic}"));
            }
            let inst = instantiate(*schema, args).map_err(|e| e.to_string())?;
            if inst != line.formula {
                return Err(format!("{} is not the {schema} instance {inst}", line.formula));
            }
        }
        Justification::Ipc => {
            if logic == LogicId::Ipc && !line.formula.is_box_free() {
                return Err("IPC lines must be box-free".into());
            }
            if !ipc_provable(&line.formula) {
                return Err(format!("{} is not an IPC_box theorem", line.formula));
            }
        }
        Justification::Mp { minor, major } => {
            let a = earlier(*minor)?;
            let ab = earlier(*major)?;
            if *ab != Formula::imp(a.clone(), line.formula.clone()) {
                return Err(format!("line {major} is not {a} -> {}", line.formula));
            }
        }
        Justification::Nec { premise } => {
            if !calc.necessitation {
                return Err(format!("{logic} has no necessitation rule"));
            }
            let a = earlier(*premise)?;
            if line.formula != Formula::boxed(a.clone()) {
                return Err(format!("{} is not the box of line {premise}", line.formula));
            }
        }
        Justification::Pres { derivation } => {
            if calc.pres != Some(derivation.variant) {
                return Err(format!("{logic} has no {} preservativity axioms", derivation.variant));
            }
            verify_derivation(derivation).map_err(|e| e.to_string())?;
            let (a, b) = derivation.conclusion();
            let expected = Formula::imp(Formula::boxed(a.clone()), Formula::boxed(b.clone()));
            if line.formula != expected {
                return Err(format!("derivation yields {expected}, not {}", line.formula));
            }
        }
    }
    Ok(())
}

/// Verify `cert` line by line as a derivation of `goal` in `logic`.
pub fn check_certificate(cert: &Certificate, logic: LogicId, goal: &Formula) -> Result<(), CertificateError> {
    if cert.lines.is_empty() {
        return Err(CertificateError::Empty);
    }
    for k in 0..cert.lines.len() {
        check_line(logic, &cert.lines, k).map_err(|reason| CertificateError::BadLine { line: k + 1, reason })?;
    }
    let found = cert.conclusion().expect("nonempty");
    if found != goal {
        return Err(CertificateError::WrongConclusion {
            found: found.clone(),
            goal: goal.clone(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn mp_chain() -> Certificate {
        Certificate {
            lines: vec![
                Line {
                    formula: f("(#p -> #p) -> #(#p -> #p)"),
                    by: Justification::Axiom {
                        schema: AxiomSchema::CP,
                        args: vec![f("#p -> #p")],
                    },
                },
                Line {
                    formula: f("#p -> #p"),
                    by: Justification::Ipc,
                },
                Line {
                    formula: f("#(#p -> #p)"),
                    by: Justification::Mp { minor: 2, major: 1 },
                },
            ],
        }
    }

    #[test]
    fn valid_mp_chain() {
        assert_eq!(check_certificate(&mp_chain(), LogicId::IGLC, &f("#(#p -> #p)")), Ok(()));
    }

    #[test]
    fn non_axiom_line_is_rejected() {
        let mut cert = mp_chain();
        cert.lines[1].formula = f("#p -> p");
        let err = check_certificate(&cert, LogicId::IGLC, &f("#(#p -> #p)")).unwrap_err();
        assert!(matches!(err, CertificateError::BadLine { line: 2, .. }));
        // CP is not an iGL axiom.
        assert!(check_certificate(&mp_chain(), LogicId::IGL, &f("#(#p -> #p)")).is_err());
    }

    #[test]
    fn wrong_goal_is_rejected() {
        let err = check_certificate(&mp_chain(), LogicId::IGLC, &f("#p")).unwrap_err();
        assert!(matches!(err, CertificateError::WrongConclusion { .. }));
    }

    #[test]
    fn necessitation_only_where_available() {
        let cert = Certificate {
            lines: vec![
                Line { formula: f("p -> p"), by: Justification::Ipc },
                Line { formula: f("#(p -> p)"), by: Justification::Nec { premise: 1 } },
            ],
        };
        assert!(check_certificate(&cert, LogicId::IK4, &f("#(p -> p)")).is_ok());
        assert!(check_certificate(&cert, LogicId::IGLC, &f("#(p -> p)")).is_err());
    }

    #[test]
    fn json_round_trip() {
        let cert = mp_chain();
        let text = serde_json::to_string(&cert).unwrap();
        let back: Certificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cert);
        assert!(cert.to_text().contains("MP 2 1"));
    }
}
