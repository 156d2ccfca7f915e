//! Workbench for intuitionistic modal provability logics.
//!
//! The crate parses modal propositional formulas, computes NNIL and TNNIL
//! approximations with an audited termination measure, decides `IPC_□`,
//! enumerates finite birelational Kripke models, runs bounded Hilbert-style
//! proof search for the modal calculi, and builds preservativity
//! derivations.
//!
//! ```
//! use imodal::{parse, tnnil_plus};
//! let a = parse("~~p").unwrap();
//! let plus = tnnil_plus(&a).unwrap();
//! assert!(imodal::classes::is_tnnil(&plus));
//! ```

pub mod approx;
pub mod calculi;
pub mod classes;
pub mod corpus;
pub mod formula;
pub mod logic;
pub mod measure;
pub mod models;
pub mod parse;
pub mod pres;
pub mod rewrite;
pub mod schema;
pub mod translate;

pub use calculi::{decide, decide_ihstar_sigma, decide_ipc_box, prove_bounded, Budget, Verdict};
pub use approx::{nnil_star, tnnil_dagger, tnnil_minus, tnnil_plus, ApproxError, RewriteTrace};
pub use formula::Formula;
pub use logic::LogicId;
pub use measure::{measure, MeasureTuple};
pub use parse::{parse, ParseError};
pub use pres::{derive_pres, verify_derivation, DerivationTree, PresVariant};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/formulas.md")]
    mod formulas {}
    #[doc = include_str!("../../../book/src/translations.md")]
    mod translations {}
    #[doc = include_str!("../../../book/src/approximations.md")]
    mod approximations {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/calculi.md")]
    mod calculi {}
    #[doc = include_str!("../../../book/src/preservativity.md")]
    mod preservativity {}
    #[doc = include_str!("../../../book/src/corpus.md")]
    mod corpus {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
