//! Modal axiom schemata and their instantiation.

use crate::formula::Formula;
use crate::translate::leivant_translate;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AxiomSchema {
    /// `□(A → B) → (□A → □B)`
    K,
    /// `□A → □□A`
    Four,
    /// Löb: `□(□A → A) → □A`
    L,
    /// Completeness principle: `A → □A`
    CP,
    /// Completeness principle for atoms: `p → □p`
    CPa,
    /// Leivant: `□(B ∨ C) → □(□B ∨ C)`
    Le,
    /// Extended Leivant: `□A → □A^l`
    LePlus,
    /// Trace principle: `□(A → B) → (A ∨ (A → B))`
    TP,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("schema {schema} takes {expected} argument(s), got {got}")]
    Arity {
        schema: AxiomSchema,
        expected: usize,
        got: usize,
    },
    #[error("schema CPa needs an atom, got {0}")]
    NotAtomic(Formula),
    #[error("unknown axiom schema `{0}`")]
    Unknown(String),
}

impl AxiomSchema {
    pub const ALL: [AxiomSchema; 8] = [
        AxiomSchema::K,
        AxiomSchema::Four,
        AxiomSchema::L,
        AxiomSchema::CP,
        AxiomSchema::CPa,
        AxiomSchema::Le,
        AxiomSchema::LePlus,
        AxiomSchema::TP,
    ];

    pub fn arity(self) -> usize {
        match self {
            AxiomSchema::K | AxiomSchema::Le | AxiomSchema::TP => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AxiomSchema::K => "K",
            AxiomSchema::Four => "4",
            AxiomSchema::L => "L",
            AxiomSchema::CP => "CP",
            AxiomSchema::CPa => "CPa",
            AxiomSchema::Le => "Le",
            AxiomSchema::LePlus => "Le+",
            AxiomSchema::TP => "TP",
        }
    }
}

impl fmt::Display for AxiomSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxiomSchema {
    type Err = SchemaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AxiomSchema::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s) || format!("{a:?}").eq_ignore_ascii_case(s))
            .ok_or_else(|| SchemaError::Unknown(s.to_string()))
    }
}

/// Substitute `args` for the schematic letters of `schema`.
pub fn instantiate(schema: AxiomSchema, args: &[Formula]) -> Result<Formula, SchemaError> {
    if args.len() != schema.arity() {
        return Err(SchemaError::Arity {
            schema,
            expected: schema.arity(),
            got: args.len(),
        });
    }
    let a = args[0].clone();
    let bx = Formula::boxed;
    Ok(match schema {
        AxiomSchema::K => {
            let b = args[1].clone();
            Formula::imp(
                bx(Formula::imp(a.clone(), b.clone())),
                Formula::imp(bx(a), bx(b)),
            )
        }
        AxiomSchema::Four => Formula::imp(bx(a.clone()), bx(bx(a))),
        AxiomSchema::L => Formula::imp(bx(Formula::imp(bx(a.clone()), a.clone())), bx(a)),
        AxiomSchema::CP => Formula::imp(a.clone(), bx(a)),
        AxiomSchema::CPa => {
            if !a.is_atom() {
                return Err(SchemaError::NotAtomic(a));
            }
            Formula::imp(a.clone(), bx(a))
        }
        AxiomSchema::Le => {
            let c = args[1].clone();
            Formula::imp(
                bx(Formula::or(a.clone(), c.clone())),
                bx(Formula::or(bx(a), c)),
            )
        }
        AxiomSchema::LePlus => Formula::imp(bx(a.clone()), bx(leivant_translate(&a))),
        AxiomSchema::TP => {
            let b = args[1].clone();
            let ab = Formula::imp(a.clone(), b);
            Formula::imp(bx(ab.clone()), Formula::or(a, ab))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn instances() {
        assert_eq!(instantiate(AxiomSchema::L, &[f("p")]).unwrap(), f("#(#p -> p) -> #p"));
        assert_eq!(instantiate(AxiomSchema::CP, &[f("q")]).unwrap(), f("q -> #q"));
        assert_eq!(
            instantiate(AxiomSchema::Le, &[f("p"), f("q")]).unwrap(),
            f("#(p | q) -> #(#p | q)")
        );
        assert_eq!(
            instantiate(AxiomSchema::TP, &[f("p"), f("q")]).unwrap(),
            f("#(p -> q) -> p | (p -> q)")
        );
        assert_eq!(
            instantiate(AxiomSchema::K, &[f("p"), f("q")]).unwrap(),
            f("#(p -> q) -> #p -> #q")
        );
    }

    #[test]
    fn arity_mismatch() {
        let err = instantiate(AxiomSchema::K, &[f("p")]).unwrap_err();
        assert!(matches!(err, SchemaError::Arity { expected: 2, got: 1, .. }));
        assert!(instantiate(AxiomSchema::CPa, &[f("p & q")]).is_err());
    }

    #[test]
    fn names_round_trip() {
        for s in AxiomSchema::ALL {
            assert_eq!(s.name().parse::<AxiomSchema>().unwrap(), s);
        }
    }
}
