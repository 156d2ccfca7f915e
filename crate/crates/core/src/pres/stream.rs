//! Enumerating preservativity axioms `□A → □B`.

use super::search::{PresBudget, Searcher};
use super::{DerivationTree, Node, PresRule, PresVariant};
use crate::calculi::{ipc_provable, Certificate, Justification, Line};
use crate::formula::{enumerate_formulas, Formula};
use std::collections::BTreeSet;

fn ipc_leaf(a: &Formula, b: &Formula) -> Option<Node> {
    let goal = Formula::imp(a.clone(), b.clone());
    ipc_provable(&goal).then(|| {
        Node::a1(
            a.clone(),
            b.clone(),
            Certificate {
                lines: vec![Line { formula: goal, by: Justification::Ipc }],
            },
        )
    })
}

/// Seed derivations: A1 leaves between small formulas (IPC-provable
/// implications only) followed by every B2-family instance whose parts
/// are small formulas.
fn seeds(variant: PresVariant, base: Vec<Formula>) -> impl Iterator<Item = Node> {
    let pairs = {
        let base = base.clone();
        (0..base.len() * base.len()).filter_map(move |k| {
            let (a, b) = (&base[k / base.len()], &base[k % base.len()]);
            if a == b {
                return None;
            }
            ipc_leaf(a, b)
        })
    };
    let searcher = Searcher::new(variant, PresBudget::default());
    let b2 = {
        let antecedents: Vec<Formula> = base.iter().filter(|f| f.is_imp()).cloned().collect();
        let small: Vec<Formula> = base.iter().filter(|f| f.size() == 1).cloned().collect();
        antecedents
            .into_iter()
            .flat_map(move |b| small.clone().into_iter().map(move |c| (b.clone(), c)))
            .filter_map(move |(b, c)| searcher.b2_node(&b, &c))
    };
    pairs.chain(b2)
}

/// One round of lifting: A4 and B3 with atomic guards.
fn lift(variant: PresVariant, vocabulary: &[String], prev: &[Node]) -> Vec<Node> {
    let mut out = Vec::new();
    for n in prev {
        out.push(Node::new(
            Formula::boxed(n.lhs.clone()),
            Formula::boxed(n.rhs.clone()),
            PresRule::A4,
            vec![n.clone()],
        ));
        let guards: Vec<Formula> = match variant {
            PresVariant::Alpha => vocabulary.iter().map(|p| Formula::boxed(Formula::atom(p.clone()))).collect(),
            _ => vocabulary.iter().map(|p| Formula::atom(p.clone())).collect(),
        };
        let rule = if variant == PresVariant::Alpha { PresRule::B3Alpha } else { PresRule::B3 };
        for p in guards {
            out.push(Node::new(
                Formula::imp(p.clone(), n.lhs.clone()),
                Formula::imp(p, n.rhs.clone()),
                rule,
                vec![n.clone()],
            ));
        }
    }
    out
}

/// Derivations within `depth` rounds: round one holds the seeds over
/// formulas of size at most 3, each later round applies A4 and B3 to the
/// previous one. Each item's conclusion `(A, B)` stands for the axiom
/// `□A → □B`.
pub fn stream_pres_axioms(variant: PresVariant, vocabulary: &[String], depth: usize) -> impl Iterator<Item = DerivationTree> {
    let base: Vec<Formula> = enumerate_formulas(vocabulary, 3, true).into_iter().flatten().collect();
    let vocabulary = vocabulary.to_vec();
    let mut first = Some(seeds(variant, base));
    let mut round = 1;
    let mut prev: Vec<Node> = Vec::new();
    let mut queue: std::vec::IntoIter<Node> = Vec::new().into_iter();
    std::iter::from_fn(move || loop {
        if depth == 0 {
            return None;
        }
        if let Some(seeds) = first.as_mut() {
            match seeds.next() {
                Some(n) => {
                    prev.push(n.clone());
                    return Some(n);
                }
                None => first = None,
            }
        }
        if let Some(n) = queue.next() {
            prev.push(n.clone());
            return Some(n);
        }
        if round >= depth || prev.is_empty() {
            return None;
        }
        round += 1;
        queue = lift(variant, &vocabulary, &std::mem::take(&mut prev)).into_iter();
    })
    .map(move |root| DerivationTree { variant, root })
}

/// Derivations of `A ▸ B` for distinct `A`, `B` drawn from `insides`.
/// A1 leaves are limited to IPC-provable implications; everything else
/// comes from the structural rules and B2.
pub fn pres_axioms_for_pool(variant: PresVariant, insides: &BTreeSet<Formula>, budget: PresBudget) -> Vec<DerivationTree> {
    let mut searcher = Searcher::new(variant, budget).ipc_only();
    let mut out = Vec::new();
    for a in insides {
        for b in insides {
            if a == b {
                continue;
            }
            if let Some(root) = searcher.search(a, b, budget.max_depth) {
                out.push(DerivationTree { variant, root });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;
    use crate::pres::verify_derivation;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn conclusions(v: PresVariant, vocab: &[&str], depth: usize) -> Vec<(Formula, Formula)> {
        let vocab: Vec<String> = vocab.iter().map(|s| s.to_string()).collect();
        stream_pres_axioms(v, &vocab, depth)
            .map(|t| {
                verify_derivation(&t).unwrap();
                (t.root.lhs, t.root.rhs)
            })
            .collect()
    }

    #[test]
    fn depth_one_has_a1_pairs() {
        let cs = conclusions(PresVariant::Star, &["p"], 1);
        assert!(cs.contains(&(f("p & p"), f("p"))));
    }

    #[test]
    fn depth_two_lifts_by_a4() {
        let cs = conclusions(PresVariant::Star, &["p"], 2);
        assert!(cs.contains(&(f("#(p & p)"), f("#p"))));
    }

    #[test]
    fn b2_instances_are_streamed() {
        let cs = conclusions(PresVariant::Star, &["p", "q", "r"], 1);
        assert!(cs.contains(&(f("((p -> q) -> r) & #(p -> q)"), f("p | r"))));
    }

    #[test]
    fn zero_depth_is_empty() {
        assert_eq!(conclusions(PresVariant::Star, &["p"], 0).len(), 0);
    }

    #[test]
    fn pool_axioms_verify() {
        let insides: BTreeSet<Formula> = [f("(p -> q) -> r"), f("p | r"), f("p")].into_iter().collect();
        let trees = pres_axioms_for_pool(PresVariant::Ha, &insides, PresBudget { max_depth: 1, ..Default::default() });
        assert!(trees.iter().any(|t| t.root.rule == PresRule::B2Prime));
        for t in &trees {
            verify_derivation(t).unwrap();
        }
    }
}
