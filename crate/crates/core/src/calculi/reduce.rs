//! Decision by reduction to `iGLC`.
//!
//! `iH*σ ⊢ A` holds exactly when `iGLC ⊢ (A^□)⁺`: the soundness half goes
//! through `iH*σ ⊢ A ↔ A^□` and `iH*σ ⊢ B ↔ B⁺` for box-translated `B`, the
//! completeness half through the arithmetical completeness of `iH*σ` for
//! Σ₁-substitutions, which forces `iGLC ⊬ (A^□)⁺` whenever `iH*σ ⊬ A`.

use super::{decide_ipc_box, prove_bounded, BoundsReport, Budget, Outcome, Stats, Verdict};
use crate::approx::tnnil_plus;
use crate::formula::Formula;
use crate::logic::LogicId;
use crate::translate::box_translate;
use serde::{Deserialize, Serialize};

/// Outcome of deciding the reduced goal in `iGLC`. Certificates and
/// countermodels refer to `reduced`, not to the original formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    pub reduced: Formula,
    pub outcome: Outcome,
}

fn reduce_to_iglc(g: Result<Formula, crate::approx::ApproxError>, budget: Budget) -> Reduction {
    match g {
        Ok(reduced) => {
            let outcome = prove_bounded(LogicId::IGLC, &reduced, budget);
            Reduction { reduced, outcome }
        }
        Err(e) => Reduction {
            reduced: Formula::Top,
            outcome: Outcome {
                verdict: Verdict::Unknown {
                    report: BoundsReport {
                        reason: e.to_string(),
                        lines: 0,
                        worlds: 0,
                    },
                },
                stats: Stats::default(),
            },
        },
    }
}

/// Decide `iH*σ ⊢ a` through `iGLC ⊢ (a^□)⁺`.
pub fn decide_ihstar_sigma(a: &Formula, budget: Budget) -> Reduction {
    reduce_to_iglc(tnnil_plus(&box_translate(a)), budget)
}

/// Experimental: decides `iGLC ⊢ a⁺`. Meant for box-translated inputs,
/// where it must agree with [`decide_ihstar_sigma`].
pub fn decide_ihsigma(a: &Formula, budget: Budget) -> Reduction {
    reduce_to_iglc(tnnil_plus(a), budget)
}

/// Front door used by the CLI and the corpus runner.
pub fn decide(logic: LogicId, a: &Formula, budget: Budget) -> Reduction {
    match logic {
        LogicId::Ipc | LogicId::IpcBox => Reduction {
            reduced: a.clone(),
            outcome: decide_ipc_box(a),
        },
        LogicId::IHStarSigma => decide_ihstar_sigma(a, budget),
        _ => Reduction {
            reduced: a.clone(),
            outcome: prove_bounded(logic, a, budget),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculi::check_certificate;
    use crate::parse::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn bottom_is_refuted_by_one_world() {
        let r = decide_ihstar_sigma(&Formula::Bot, Budget::default());
        assert_eq!(r.reduced, Formula::Bot);
        let Verdict::Refuted { countermodel } = r.outcome.verdict else { panic!() };
        assert_eq!(countermodel.model.worlds(), 1);
        assert!(decide_ihsigma(&Formula::Bot, Budget::default()).outcome.verdict.is_refuted());
    }

    #[test]
    fn top_and_cpa() {
        assert!(decide_ihsigma(&Formula::Top, Budget::default()).outcome.verdict.is_provable());
        let r = decide_ihsigma(&f("p -> #p"), Budget::default());
        let Verdict::Provable { certificate } = &r.outcome.verdict else { panic!() };
        check_certificate(certificate, LogicId::IGLC, &r.reduced).unwrap();
    }

    #[test]
    fn completeness_principle() {
        let r = decide_ihstar_sigma(&f("p -> #p"), Budget::default());
        assert!(r.outcome.verdict.is_provable(), "{}", r.reduced);
    }
}
