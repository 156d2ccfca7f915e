//! Countermodel search by ascending world count.

use super::frames::{frames_cancellable, Frame, FrameClass};
use super::{BirelationalModel, WorldSet};
use crate::formula::Formula;
use crate::logic::LogicId;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Frames whose valuations were examined.
    pub frames: u64,
    /// Largest world count searched.
    pub worlds_searched: usize,
    /// Whether `max_worlds` was lowered to what the class can enumerate.
    pub capped: bool,
}

fn refute_on_frame(frame: &Frame, atoms: &[String], a: &Formula) -> Option<BirelationalModel> {
    let ups = frame.up_sets();
    let k = atoms.len();
    let mut idx = vec![0usize; k];
    loop {
        let val: BTreeMap<String, WorldSet> = atoms
            .iter()
            .zip(&idx)
            .filter(|(_, &i)| ups[i] != 0)
            .map(|(p, &i)| (p.clone(), ups[i]))
            .collect();
        let m = BirelationalModel::from_frame(frame, val);
        if !m.valid_on(a) {
            return Some(m);
        }
        // mixed-radix increment
        let mut pos = 0;
        loop {
            if pos == k {
                return None;
            }
            idx[pos] += 1;
            if idx[pos] < ups.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Search the frames of `class` with up to `max_worlds` worlds. Among
/// frames of the smallest successful size, the first in enumeration order
/// is returned, independently of thread scheduling.
pub fn find_countermodel_with(
    class: FrameClass,
    a: &Formula,
    max_worlds: usize,
    prune: bool,
) -> (Option<BirelationalModel>, SearchStats) {
    search(class, a, max_worlds, prune, &AtomicBool::new(false))
}

/// Pruned search that gives up once `stop` is set.
pub fn find_countermodel_cancellable(
    class: FrameClass,
    a: &Formula,
    max_worlds: usize,
    stop: &AtomicBool,
) -> (Option<BirelationalModel>, SearchStats) {
    search(class, a, max_worlds, true, stop)
}

fn search(
    class: FrameClass,
    a: &Formula,
    max_worlds: usize,
    prune: bool,
    stop: &AtomicBool,
) -> (Option<BirelationalModel>, SearchStats) {
    let mut stats = SearchStats::default();
    let bound = max_worlds.min(class.max_enumerable());
    stats.capped = bound < max_worlds;
    let atoms: Vec<String> = a.atoms().into_iter().collect();
    let examined = AtomicU64::new(0);
    for n in 1..=bound {
        stats.worlds_searched = n;
        let Some(frames) = frames_cancellable(class, n, prune, stop) else {
            break;
        };
        let found = frames.par_iter().find_map_first(|f| {
            if stop.load(Ordering::Relaxed) {
                return None;
            }
            examined.fetch_add(1, Ordering::Relaxed);
            refute_on_frame(f, &atoms, a)
        });
        if found.is_some() || stop.load(Ordering::Relaxed) {
            stats.frames = examined.load(Ordering::Relaxed);
            return (found, stats);
        }
    }
    stats.frames = examined.load(Ordering::Relaxed);
    (None, stats)
}

/// A model of `logic`'s frame class, with at most `max_worlds` worlds,
/// falsifying `a`. `None` means only that the bounded search failed.
/// Logics without declared frame conditions always give `None`.
pub fn find_countermodel(logic: LogicId, a: &Formula, max_worlds: usize) -> Option<BirelationalModel> {
    let class = FrameClass::of(logic)?;
    find_countermodel_with(class, a, max_worlds, true).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;
    use crate::schema::{instantiate, AxiomSchema};

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn excluded_middle_has_two_world_countermodel() {
        let m = find_countermodel(LogicId::Ipc, &f("p | ~p"), 2).unwrap();
        assert_eq!(m.worlds(), 2);
        assert!(m.is_frame_for(LogicId::Ipc));
        assert!(!m.valid_on(&f("p | ~p")));
    }

    #[test]
    fn completeness_principle_holds_on_strict_frames() {
        let cp = instantiate(AxiomSchema::CP, &[f("p")]).unwrap();
        assert!(find_countermodel(LogicId::IGLC, &cp, 4).is_none());
        assert!(find_countermodel(LogicId::IGL, &cp, 2).is_some());
    }

    #[test]
    fn negated_box_example_is_refuted() {
        let a = f("~~p -> (#~p -> p)");
        let m = find_countermodel(LogicId::IGLC, &a, 6).unwrap();
        assert!(m.is_frame_for(LogicId::IGLC));
        assert!(!m.valid_on(&a));
    }

    #[test]
    fn undeclared_logics_give_nothing() {
        assert!(find_countermodel(LogicId::IHStarSigma, &Formula::Bot, 3).is_none());
    }

    #[test]
    fn cyclic_classes_are_capped() {
        let (_, stats) = find_countermodel_with(FrameClass::K4, &f("p -> p"), 6, true);
        assert!(stats.capped);
        assert_eq!(stats.worlds_searched, 4);
    }
}
