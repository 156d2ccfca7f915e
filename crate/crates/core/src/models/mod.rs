//! Finite birelational Kripke models.
//!
//! Worlds are `0..n` with `n ≤ 64`; relations and truth sets are `u64`
//! bitsets. Forcing is computed bottom-up as the set of worlds where a
//! formula holds.

mod frames;
mod search;

pub use frames::{enumerate_frames, FrameClass, Frame};
pub use search::{find_countermodel, find_countermodel_cancellable, find_countermodel_with, SearchStats};

use crate::formula::Formula;
use crate::logic::LogicId;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use thiserror::Error;

pub type WorldSet = u64;

pub const MAX_WORLDS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("world {0} out of range for a model with {1} worlds")]
    UnknownWorld(usize, usize),
    #[error("models have between 1 and {MAX_WORLDS} worlds, got {0}")]
    Size(usize),
    #[error("order is not {0}")]
    Order(&'static str),
    #[error("valuation of `{0}` is not monotone")]
    Valuation(String),
    #[error("persistence fails: {0} <= {1} R {2} but not {0} R {2}")]
    Persistence(usize, usize, usize),
}

/// A finite birelational model. Constructed only through validating
/// constructors, so every value satisfies the type invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BirelationalModel {
    n: usize,
    /// `up[w] = {v | w ≤ v}`
    up: Vec<WorldSet>,
    /// `r[w] = {v | w R v}`
    r: Vec<WorldSet>,
    /// atom ↦ worlds where it holds
    val: BTreeMap<String, WorldSet>,
}

fn bits(set: WorldSet) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| set >> i & 1 == 1)
}

impl BirelationalModel {
    /// Build from explicit relations. `leq` is closed reflexively; everything
    /// else must already hold.
    pub fn new(
        n: usize,
        leq: &[(usize, usize)],
        r: &[(usize, usize)],
        val: &BTreeMap<usize, BTreeSet<String>>,
    ) -> Result<BirelationalModel, ModelError> {
        if n == 0 || n > MAX_WORLDS {
            return Err(ModelError::Size(n));
        }
        let check = |w: usize| if w < n { Ok(()) } else { Err(ModelError::UnknownWorld(w, n)) };
        let mut up: Vec<WorldSet> = (0..n).map(|w| 1 << w).collect();
        for &(a, b) in leq {
            check(a)?;
            check(b)?;
            up[a] |= 1 << b;
        }
        let mut rr = vec![0; n];
        for &(a, b) in r {
            check(a)?;
            check(b)?;
            rr[a] |= 1 << b;
        }
        let mut atoms: BTreeMap<String, WorldSet> = BTreeMap::new();
        for (&w, ps) in val {
            check(w)?;
            for p in ps {
                *atoms.entry(p.clone()).or_default() |= 1 << w;
            }
        }
        let m = BirelationalModel { n, up, r: rr, val: atoms };
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn from_frame(frame: &Frame, val: BTreeMap<String, WorldSet>) -> BirelationalModel {
        BirelationalModel {
            n: frame.n,
            up: frame.up.clone(),
            r: frame.r.clone(),
            val,
        }
    }

    fn validate(&self) -> Result<(), ModelError> {
        let n = self.n;
        for w in 0..n {
            for v in bits(self.up[w]) {
                if self.up[v] & !self.up[w] != 0 {
                    return Err(ModelError::Order("transitive"));
                }
                if v != w && self.up[v] >> w & 1 == 1 {
                    return Err(ModelError::Order("antisymmetric"));
                }
                for u in bits(self.r[v]) {
                    if self.r[w] >> u & 1 == 0 {
                        return Err(ModelError::Persistence(w, v, u));
                    }
                }
            }
        }
        for (p, &set) in &self.val {
            if bits(set).any(|w| self.up[w] & !set != 0) {
                return Err(ModelError::Valuation(p.clone()));
            }
        }
        Ok(())
    }

    pub fn worlds(&self) -> usize {
        self.n
    }

    pub fn leq(&self, w: usize, v: usize) -> bool {
        self.up[w] >> v & 1 == 1
    }

    pub fn rel(&self, w: usize, v: usize) -> bool {
        self.r[w] >> v & 1 == 1
    }

    pub fn frame(&self) -> Frame {
        Frame {
            n: self.n,
            up: self.up.clone(),
            r: self.r.clone(),
        }
    }

    pub fn atoms_at(&self, w: usize) -> BTreeSet<String> {
        self.val
            .iter()
            .filter(|(_, &s)| s >> w & 1 == 1)
            .map(|(p, _)| p.clone())
            .collect()
    }

    fn all(&self) -> WorldSet {
        if self.n == 64 {
            u64::MAX
        } else {
            (1 << self.n) - 1
        }
    }

    /// The set of worlds forcing `a`.
    pub fn truth_set(&self, a: &Formula) -> WorldSet {
        self.truth_memo(a, &mut HashMap::new())
    }

    fn truth_memo(&self, a: &Formula, memo: &mut HashMap<*const Formula, WorldSet>) -> WorldSet {
        let key = a as *const Formula;
        if let Some(&s) = memo.get(&key) {
            return s;
        }
        let s = match a {
            Formula::Atom(p) => self.val.get(p).copied().unwrap_or(0),
            Formula::Bot => 0,
            Formula::Top => self.all(),
            Formula::And(l, r) => self.truth_memo(l, memo) & self.truth_memo(r, memo),
            Formula::Or(l, r) => self.truth_memo(l, memo) | self.truth_memo(r, memo),
            Formula::Imp(l, r) => {
                let bad = self.truth_memo(l, memo) & !self.truth_memo(r, memo);
                (0..self.n)
                    .filter(|&w| self.up[w] & bad == 0)
                    .fold(0, |acc, w| acc | 1 << w)
            }
            Formula::Box(inner) => {
                let ok = self.truth_memo(inner, memo);
                (0..self.n)
                    .filter(|&w| self.r[w] & !ok == 0)
                    .fold(0, |acc, w| acc | 1 << w)
            }
        };
        memo.insert(key, s);
        s
    }

    pub fn forces(&self, w: usize, a: &Formula) -> Result<bool, ModelError> {
        if w >= self.n {
            return Err(ModelError::UnknownWorld(w, self.n));
        }
        Ok(self.truth_set(a) >> w & 1 == 1)
    }

    pub fn valid_on(&self, a: &Formula) -> bool {
        self.truth_set(a) == self.all()
    }

    pub fn is_frame_for(&self, logic: LogicId) -> bool {
        match FrameClass::of(logic) {
            Some(class) => self.frame().satisfies(class),
            None => false,
        }
    }

    /// Worlds where `a` fails.
    pub fn refuting_worlds(&self, a: &Formula) -> Vec<usize> {
        bits(self.all() & !self.truth_set(a)).collect()
    }

    pub fn to_json(&self) -> ModelJson {
        let mut leq = Vec::new();
        let mut r = Vec::new();
        for w in 0..self.n {
            leq.extend(bits(self.up[w]).map(|v| (w, v)));
            r.extend(bits(self.r[w]).map(|v| (w, v)));
        }
        let val = (0..self.n).map(|w| (w.to_string(), self.atoms_at(w))).collect();
        ModelJson {
            worlds: self.n,
            leq,
            r,
            val,
        }
    }

    pub fn from_json(json: &ModelJson) -> Result<BirelationalModel, ModelError> {
        let mut val = BTreeMap::new();
        for (w, ps) in &json.val {
            let w: usize = w.parse().map_err(|_| ModelError::UnknownWorld(usize::MAX, json.worlds))?;
            val.insert(w, ps.clone());
        }
        BirelationalModel::new(json.worlds, &json.leq, &json.r, &val)
    }
}

/// Wire format: `{worlds, leq, R, val}` with `val` keyed by world index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelJson {
    pub worlds: usize,
    pub leq: Vec<(usize, usize)>,
    #[serde(rename = "R")]
    pub r: Vec<(usize, usize)>,
    pub val: BTreeMap<String, BTreeSet<String>>,
}

impl Serialize for BirelationalModel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BirelationalModel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let json = ModelJson::deserialize(d)?;
        BirelationalModel::from_json(&json).map_err(serde::de::Error::custom)
    }
}

impl std::fmt::Display for BirelationalModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "worlds: {}", self.n)?;
        for w in 0..self.n {
            let ups: Vec<String> = bits(self.up[w] & !(1 << w)).map(|v| v.to_string()).collect();
            let rs: Vec<String> = bits(self.r[w]).map(|v| v.to_string()).collect();
            let ps: Vec<String> = self.atoms_at(w).into_iter().collect();
            writeln!(
                f,
                "  w{w}: atoms {{{}}}  above {{{}}}  R {{{}}}",
                ps.join(", "),
                ups.join(", "),
                rs.join(", ")
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn chain_with_p_on_top() -> BirelationalModel {
        let val = BTreeMap::from([(1, BTreeSet::from(["p".to_string()]))]);
        BirelationalModel::new(2, &[(0, 1)], &[], &val).unwrap()
    }

    #[test]
    fn single_world_examples() {
        let m = BirelationalModel::new(1, &[], &[], &BTreeMap::new()).unwrap();
        assert!(!m.forces(0, &f("p")).unwrap());
        assert!(m.forces(0, &f("p -> p")).unwrap());
        assert!(m.valid_on(&Formula::Top));
        assert!(m.forces(1, &f("p")).is_err());
    }

    #[test]
    fn excluded_middle_fails_at_root() {
        let m = chain_with_p_on_top();
        assert!(!m.forces(0, &f("p | ~p")).unwrap());
        assert!(m.forces(1, &f("p | ~p")).unwrap());
        assert!(m.is_frame_for(LogicId::Ipc));
        assert!(m.is_frame_for(LogicId::IGLC));
    }

    #[test]
    fn frame_condition_examples() {
        let refl = BirelationalModel::new(1, &[], &[(0, 0)], &BTreeMap::new()).unwrap();
        assert!(!refl.is_frame_for(LogicId::IGL));
        assert!(refl.is_frame_for(LogicId::IK4));
        // R goes sideways, not along the order.
        let side = BirelationalModel::new(2, &[], &[(0, 1)], &BTreeMap::new()).unwrap();
        assert!(side.is_frame_for(LogicId::IGL));
        assert!(!side.is_frame_for(LogicId::IGLC));
        assert!(!side.is_frame_for(LogicId::H));
    }

    #[test]
    fn invariants_are_enforced() {
        let val = BTreeMap::from([(0, BTreeSet::from(["p".to_string()]))]);
        assert!(matches!(
            BirelationalModel::new(2, &[(0, 1)], &[], &val),
            Err(ModelError::Valuation(_))
        ));
        assert!(matches!(
            BirelationalModel::new(3, &[(0, 1)], &[(1, 2)], &BTreeMap::new()),
            Err(ModelError::Persistence(0, 1, 2))
        ));
        assert!(BirelationalModel::new(2, &[(0, 1), (1, 0)], &[], &BTreeMap::new()).is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = chain_with_p_on_top();
        let text = serde_json::to_string(&m).unwrap();
        assert!(text.contains("\"R\":[]"));
        let back: BirelationalModel = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }
}
