//! Brute-force pullback of the Basilica lamination under angle doubling,
//! on an integer grid. Shared by the oracle tests and the acceptance run.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use tb_core::circle::Angle;
use tb_core::lamination::Arc;

pub const MAX_LEVEL: u32 = 7;
/// Points are multiples of 1/D.
pub const D: u64 = 3 << 10;

pub type Leaf = (u64, u64);

pub fn leaf(a: u64, b: u64) -> Leaf {
    (a.min(b), a.max(b))
}

/// Level from the length of the short side, which is 2/(3*2^n).
pub fn level(l: Leaf) -> Option<u32> {
    let s = (l.1 - l.0).min(D - (l.1 - l.0));
    if !s.is_power_of_two() {
        return None;
    }
    let n = 11i64 - s.trailing_zeros() as i64;
    (n >= 1).then_some(n as u32)
}

fn strictly_inside(x: u64, l: Leaf) -> bool {
    l.0 < x && x < l.1
}

pub fn compatible(p: Leaf, q: Leaf) -> bool {
    if p.0 == q.0 || p.0 == q.1 || p.1 == q.0 || p.1 == q.1 {
        return false;
    }
    strictly_inside(q.0, p) == strictly_inside(q.1, p)
}

fn preimages(x: u64) -> [u64; 2] {
    assert_eq!(x % 2, 0);
    [x / 2, x / 2 + D / 2]
}

/// Leaves up to `MAX_LEVEL`, grown from `{1/3, 2/3}` by taking every pairing
/// of preimages that stays disjoint from the leaves already present.
pub fn pullback_oracle() -> BTreeSet<Leaf> {
    let seed = leaf(D / 3, 2 * D / 3);
    let mut accepted: BTreeSet<Leaf> = BTreeSet::from([seed]);
    let mut queue: BTreeMap<u32, Vec<Leaf>> = BTreeMap::from([(1, vec![seed])]);
    while let Some((_, batch)) = queue.pop_first() {
        for l in batch {
            let [a1, a2] = preimages(l.0);
            let [b1, b2] = preimages(l.1);
            for cand in [leaf(a1, b1), leaf(a2, b2), leaf(a1, b2), leaf(a2, b1)] {
                let Some(n) = level(cand) else { continue };
                if n > MAX_LEVEL || accepted.contains(&cand) {
                    continue;
                }
                if accepted.iter().all(|&m| compatible(m, cand)) {
                    accepted.insert(cand);
                    queue.entry(n).or_default().push(cand);
                }
            }
        }
    }
    accepted
}

pub fn grid(t: &Angle) -> u64 {
    let den: u64 = t.denominator().try_into().unwrap();
    let num: u64 = t.numerator().try_into().unwrap();
    num * (D / den)
}

pub fn as_leaf(arc: &Arc) -> Leaf {
    let (a, b) = arc.endpoints();
    leaf(grid(&a), grid(&b))
}
