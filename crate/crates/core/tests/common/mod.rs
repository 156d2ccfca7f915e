#![allow(dead_code)]

use imodal::models::{enumerate_frames, BirelationalModel, FrameClass};
use imodal::{parse, Formula};
use proptest::prelude::*;
use std::collections::{BTreeMap, BTreeSet};

pub fn f(s: &str) -> Formula {
    parse(s).unwrap()
}

/// Formulas over `p`, `q`, `r` with at most `max_size` nodes.
pub fn formula(max_size: usize, with_box: bool) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        4 => prop::sample::select(vec!["p", "q", "r"]).prop_map(Formula::atom),
        1 => Just(Formula::Bot),
        1 => Just(Formula::Top),
    ];
    leaf.prop_recursive(6, max_size as u32, 2, move |inner| {
        let binary = prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
        ];
        if with_box {
            prop_oneof![3 => binary, 1 => inner.prop_map(Formula::boxed)].boxed()
        } else {
            binary.boxed()
        }
    })
    .prop_filter("size bound", move |a| a.size() <= max_size)
}

/// A model on an enumerated frame of `class` with a random valuation of
/// `p`, `q`, `r`.
pub fn model(class: FrameClass, max_worlds: usize) -> impl Strategy<Value = BirelationalModel> {
    (1..=max_worlds, any::<prop::sample::Index>(), any::<[prop::sample::Index; 3]>()).prop_map(
        move |(n, fi, vi)| {
            let frames = enumerate_frames(class, n, true);
            let frame = &frames[fi.index(frames.len())];
            let ups = frame.up_sets();
            let leq: Vec<(usize, usize)> = (0..n)
                .flat_map(|w| (0..n).filter(move |v| frame.up[w] >> v & 1 == 1).map(move |v| (w, v)))
                .collect();
            let r: Vec<(usize, usize)> = (0..n)
                .flat_map(|w| (0..n).filter(move |v| frame.r[w] >> v & 1 == 1).map(move |v| (w, v)))
                .collect();
            let mut val: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
            for (atom, i) in ["p", "q", "r"].iter().zip(vi) {
                let set = ups[i.index(ups.len())];
                for w in 0..n {
                    if set >> w & 1 == 1 {
                        val.entry(w).or_default().insert(atom.to_string());
                    }
                }
            }
            BirelationalModel::new(n, &leq, &r, &val).expect("enumerated frames are valid")
        },
    )
}
