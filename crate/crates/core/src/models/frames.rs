//! Frame classes and exhaustive frame enumeration.

use super::{bits, WorldSet};
use crate::logic::LogicId;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FrameClass {
    /// `R = ∅`.
    Ipc,
    /// Any relation satisfying persistence.
    Any,
    /// `R` transitive.
    K4,
    /// `R` transitive and irreflexive.
    Gl,
    /// `R` transitive, irreflexive and contained in `≤`.
    Glc,
}

impl FrameClass {
    pub fn of(logic: LogicId) -> Option<FrameClass> {
        match logic {
            LogicId::Ipc => Some(FrameClass::Ipc),
            LogicId::IpcBox => Some(FrameClass::Any),
            LogicId::IK4 => Some(FrameClass::K4),
            LogicId::IGL => Some(FrameClass::Gl),
            LogicId::IGLC => Some(FrameClass::Glc),
            _ => None,
        }
    }

    /// Largest world count that [`enumerate_frames`] handles. Classes that
    /// allow `R`-cycles are enumerated by brute force over all relations.
    pub fn max_enumerable(self) -> usize {
        match self {
            FrameClass::K4 | FrameClass::Any => 4,
            _ => 7,
        }
    }

    fn acyclic(self) -> bool {
        matches!(self, FrameClass::Ipc | FrameClass::Gl | FrameClass::Glc)
    }
}

/// A frame: worlds `0..n`, `up[w] = {v | w ≤ v}`, `r[w] = {v | w R v}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Frame {
    pub n: usize,
    pub up: Vec<WorldSet>,
    pub r: Vec<WorldSet>,
}

impl Frame {
    /// Partial order, persistence and the class condition.
    pub fn satisfies(&self, class: FrameClass) -> bool {
        let n = self.n;
        for w in 0..n {
            if self.up[w] >> w & 1 == 0 {
                return false;
            }
            for v in bits(self.up[w]) {
                if v >= n || self.up[v] & !self.up[w] != 0 {
                    return false;
                }
                if v != w && self.up[v] >> w & 1 == 1 {
                    return false;
                }
                if self.r[v] & !self.r[w] != 0 {
                    return false;
                }
            }
        }
        let transitive = (0..n).all(|w| bits(self.r[w]).all(|v| self.r[v] & !self.r[w] == 0));
        let irreflexive = (0..n).all(|w| self.r[w] >> w & 1 == 0);
        match class {
            FrameClass::Ipc => self.r.iter().all(|&r| r == 0),
            FrameClass::Any => true,
            FrameClass::K4 => transitive,
            FrameClass::Gl => transitive && irreflexive,
            FrameClass::Glc => {
                transitive && irreflexive && (0..n).all(|w| self.r[w] & !self.up[w] == 0)
            }
        }
    }

    /// Up-sets of the order, including `∅` and the full set.
    pub fn up_sets(&self) -> Vec<WorldSet> {
        let full: u64 = (1u64 << self.n) - 1;
        (0..=full)
            .filter(|&s| bits(s).all(|w| self.up[w] & !s == 0))
            .collect()
    }

    fn code_under(&self, perm: &[usize]) -> u128 {
        let mut code = 0u128;
        for w in 0..self.n {
            for v in 0..self.n {
                let pw = perm[w];
                let pv = perm[v];
                let bit = 2 * (pw * self.n + pv);
                if self.up[w] >> v & 1 == 1 {
                    code |= 1 << bit;
                }
                if self.r[w] >> v & 1 == 1 {
                    code |= 1 << (bit + 1);
                }
            }
        }
        code
    }

    /// Isomorphism invariant: the least code over all relabellings.
    pub fn canonical_code(&self, perms: &[Vec<usize>]) -> u128 {
        perms.iter().map(|p| self.code_under(p)).min().unwrap_or(0)
    }

    fn degrees(&self, w: usize) -> (u32, u32, u32, u32) {
        let down = (0..self.n).filter(|&v| self.up[v] >> w & 1 == 1).count() as u32;
        let rin = (0..self.n).filter(|&v| self.r[v] >> w & 1 == 1).count() as u32;
        (self.up[w].count_ones(), down, self.r[w].count_ones(), rin)
    }

    /// Least code over the relabellings that sort worlds by their degrees.
    /// Isomorphic frames, and only those, share this value.
    pub fn canonical_form(&self) -> u128 {
        let mut order: Vec<usize> = (0..self.n).collect();
        let deg: Vec<_> = (0..self.n).map(|w| self.degrees(w)).collect();
        order.sort_by_key(|&w| deg[w]);
        // Blocks of worlds with equal degrees occupy consecutive positions.
        let mut blocks: Vec<(usize, Vec<usize>)> = Vec::new();
        for (pos, &w) in order.iter().enumerate() {
            match blocks.last_mut() {
                Some((_, ws)) if deg[ws[0]] == deg[w] => ws.push(w),
                _ => blocks.push((pos, vec![w])),
            }
        }
        let mut perm = vec![0usize; self.n];
        let mut best = u128::MAX;
        fn go(frame: &Frame, blocks: &[(usize, Vec<usize>)], perm: &mut Vec<usize>, best: &mut u128) {
            let Some(((start, ws), rest)) = blocks.split_first() else {
                *best = (*best).min(frame.code_under(perm));
                return;
            };
            for p in permutations(ws.len()) {
                for (k, &w) in ws.iter().enumerate() {
                    perm[w] = start + p[k];
                }
                go(frame, rest, perm, best);
            }
        }
        go(self, &blocks, &mut perm, &mut best);
        best
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn go(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            go(k + 1, cur, out);
            cur.swap(k, i);
        }
    }
    go(0, &mut cur, &mut out);
    out
}

/// Subsets of `universe` (bitset) closed under `pred` (`pred[i]` lists the
/// elements that must accompany `i`).
fn closed_subsets(universe: WorldSet, pred: &[WorldSet]) -> Vec<WorldSet> {
    let elems: Vec<usize> = bits(universe).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1 << elems.len()) {
        let s = elems
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .fold(0, |acc, (_, &e)| acc | 1 << e);
        if bits(s).all(|i| pred[i] & !s == 0) {
            out.push(s);
        }
    }
    out
}

/// Frames whose order and relation both increase with the labels. This
/// covers every frame of an acyclic class up to isomorphism.
fn acyclic_frames(class: FrameClass, n: usize, stop: &AtomicBool) -> Vec<Frame> {
    // down[j] = {i | i ≤ j}, rin[j] = {i | i R j}, built world by world.
    let mut out = Vec::new();
    let mut down = vec![0u64; n];
    let mut rin = vec![0u64; n];
    fn go(
        j: usize,
        n: usize,
        class: FrameClass,
        down: &mut Vec<WorldSet>,
        rin: &mut Vec<WorldSet>,
        out: &mut Vec<Frame>,
        stop: &AtomicBool,
    ) {
        if stop.load(Ordering::Relaxed) {
            return;
        }
        if j == n {
            let mut up = vec![0u64; n];
            let mut r = vec![0u64; n];
            for v in 0..n {
                for w in bits(down[v]) {
                    up[w] |= 1 << v;
                }
                for w in bits(rin[v]) {
                    r[w] |= 1 << v;
                }
            }
            out.push(Frame { n, up, r });
            return;
        }
        let earlier: WorldSet = (1u64 << j) - 1;
        let strict_down: Vec<WorldSet> = (0..n).map(|i| down[i] & !(1 << i)).collect();
        for d in closed_subsets(earlier, &strict_down) {
            down[j] = d | 1 << j;
            let r_choices = match class {
                FrameClass::Ipc => vec![0],
                _ => {
                    // Closed under R-predecessors (transitivity) and
                    // ≤-predecessors (persistence).
                    let pred: Vec<WorldSet> = (0..n).map(|i| rin[i] | strict_down[i]).collect();
                    let universe = if class == FrameClass::Glc { d } else { earlier };
                    closed_subsets(universe, &pred)
                }
            };
            for p in r_choices {
                rin[j] = p;
                go(j + 1, n, class, down, rin, out, stop);
            }
            rin[j] = 0;
        }
        down[j] = 0;
    }
    go(0, n, class, &mut down, &mut rin, &mut out, stop);
    out
}

/// All relations on `n` worlds over every naturally labelled order, kept if
/// the class condition holds.
fn brute_force_frames(class: FrameClass, n: usize, stop: &AtomicBool) -> Vec<Frame> {
    let orders = acyclic_frames(FrameClass::Ipc, n, stop);
    let pairs = n * n;
    let mut out = Vec::new();
    for order in orders {
        if stop.load(Ordering::Relaxed) {
            break;
        }
        for mask in 0u64..(1u64 << pairs) {
            let r: Vec<WorldSet> = (0..n).map(|w| (mask >> (w * n)) & ((1 << n) - 1)).collect();
            let frame = Frame {
                n,
                up: order.up.clone(),
                r,
            };
            if frame.satisfies(class) {
                out.push(frame);
            }
        }
    }
    out
}

type CacheKey = (FrameClass, usize, bool);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<Vec<Frame>>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<Vec<Frame>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn generate(class: FrameClass, n: usize, prune: bool, stop: &AtomicBool) -> Vec<Frame> {
    let raw = if class.acyclic() {
        acyclic_frames(class, n, stop)
    } else {
        brute_force_frames(class, n, stop)
    };
    if !prune || stop.load(Ordering::Relaxed) {
        return raw;
    }
    let codes: Vec<u128> = raw.par_iter().map(Frame::canonical_form).collect();
    let mut seen = HashSet::new();
    raw.into_iter()
        .zip(codes)
        .filter(|(_, c)| seen.insert(*c))
        .map(|(f, _)| f)
        .collect()
}

/// Cached enumeration; `None` if `stop` was raised before it finished.
pub(crate) fn frames_cancellable(class: FrameClass, n: usize, prune: bool, stop: &AtomicBool) -> Option<Arc<Vec<Frame>>> {
    assert!(n >= 1 && n <= class.max_enumerable(), "cannot enumerate {n}-world {class:?} frames");
    if let Some(f) = cache().lock().unwrap().get(&(class, n, prune)) {
        return Some(f.clone());
    }
    let frames = generate(class, n, prune, stop);
    if stop.load(Ordering::Relaxed) {
        return None;
    }
    let frames = Arc::new(frames);
    cache().lock().unwrap().insert((class, n, prune), frames.clone());
    Some(frames)
}

/// Every frame of `class` with exactly `n` worlds. With `prune`, one
/// representative per isomorphism class is kept. Results are cached.
///
/// # Panics
/// If `n` is 0 or above [`FrameClass::max_enumerable`].
pub fn enumerate_frames(class: FrameClass, n: usize, prune: bool) -> Arc<Vec<Frame>> {
    frames_cancellable(class, n, prune, &AtomicBool::new(false)).expect("never stopped")
}
