use std::time::Instant;

use fixedbitset::FixedBitSet;

use super::{ElementRef, Identity, PropertyId, Route, Verdict, Witness};
use crate::semigroup::{idempotents, is_locally_idempotent, reorder_zero_subsemigroups, Semigroup, Side};

fn element<S: Semigroup + ?Sized>(s: &S, x: usize) -> ElementRef {
    ElementRef {
        index: Some(x),
        word: s.element_word(x).cloned(),
    }
}

fn finish(mut v: Verdict, order: usize, start: Instant) -> Verdict {
    v.stats.semigroup_order = Some(order);
    v.stats.elapsed_us = start.elapsed().as_micros() as u64;
    v
}

fn loc_idem_witness<S: Semigroup + ?Sized>(s: &S) -> Option<Witness> {
    is_locally_idempotent(s).err().map(|(e, x)| Witness::SemigroupIdentity {
        identity: Identity::Idempotent,
        e: element(s, e),
        x: element(s, x),
        y: None,
    })
}

pub fn decide_loc_idem_semigroup<S: Semigroup + ?Sized>(s: &S) -> Verdict {
    let start = Instant::now();
    let v = Verdict::new(PropertyId::LocallyIdempotent, Route::Semigroup, loc_idem_witness(s));
    finish(v, s.order(), start)
}

/// First `(e, i, f)` with `e ≠ i` in one maximal side-zero subsemigroup and
/// `f` a side unit of both (`e·f = e` for right, `f·e = e` for left).
///
/// Units are tried in ascending order; for each unit the reordered
/// idempotent chain is walked once, comparing each unit-fixed idempotent
/// with the previous one, so the scan is `O(k·|E|)`. With
/// `idempotent_units_only` only idempotent `f` are tried.
pub fn shared_unit<S: Semigroup + ?Sized>(
    s: &S,
    side: Side,
    idempotent_units_only: bool,
) -> Option<(usize, usize, usize)> {
    let chain = reorder_zero_subsemigroups(s, side);
    let interval = chain.interval_of_positions();
    let units: Vec<usize> = if idempotent_units_only {
        idempotents(s)
    } else {
        (0..s.order()).collect()
    };
    for f in units {
        let mut previous: Option<usize> = None;
        for (pos, &i) in chain.members.iter().enumerate() {
            let fixed = match side {
                Side::Right => s.mul(i, f) == i,
                Side::Left => s.mul(f, i) == i,
            };
            if !fixed {
                continue;
            }
            if let Some(prev) = previous {
                if interval[prev] == interval[pos] {
                    return Some((chain.members[prev], i, f));
                }
            }
            previous = Some(pos);
        }
    }
    None
}

fn lt_semigroup<S: Semigroup + ?Sized>(s: &S, side: Side) -> Verdict {
    let start = Instant::now();
    let property = match side {
        Side::Right => PropertyId::RightLT,
        Side::Left => PropertyId::LeftLT,
    };
    let witness = loc_idem_witness(s).or_else(|| {
        shared_unit(s, side, false).map(|(e, i, f)| Witness::UnitSharing {
            side,
            e: element(s, e),
            i: element(s, i),
            f: element(s, f),
        })
    });
    finish(Verdict::new(property, Route::Semigroup, witness), s.order(), start)
}

pub fn decide_right_lt_semigroup<S: Semigroup + ?Sized>(s: &S) -> Verdict {
    lt_semigroup(s, Side::Right)
}

pub fn decide_left_lt_semigroup<S: Semigroup + ?Sized>(s: &S) -> Verdict {
    lt_semigroup(s, Side::Left)
}

pub fn decide_semigroup<S: Semigroup + ?Sized>(s: &S, property: PropertyId) -> Verdict {
    match property {
        PropertyId::LocallyIdempotent => decide_loc_idem_semigroup(s),
        PropertyId::RightLT => decide_right_lt_semigroup(s),
        PropertyId::LeftLT => decide_left_lt_semigroup(s),
    }
}

/// Brute force over the defining identities: every `eSe` must be
/// idempotent, and for the testability properties satisfy `xyx = xy`
/// (right) or `xyx = yx` (left).
pub fn oracle<S: Semigroup + ?Sized>(s: &S, property: PropertyId) -> Verdict {
    let start = Instant::now();
    let k = s.order();
    let es = idempotents(s);
    let mut witness = None;

    'idem: for &e in &es {
        for x in 0..k {
            let y = s.mul3(e, x, e);
            if s.mul(y, y) != y {
                witness = Some(Witness::SemigroupIdentity {
                    identity: Identity::Idempotent,
                    e: element(s, e),
                    x: element(s, x),
                    y: None,
                });
                break 'idem;
            }
        }
    }

    if witness.is_none() && property != PropertyId::LocallyIdempotent {
        let identity = if property == PropertyId::RightLT {
            Identity::RightLocal
        } else {
            Identity::LeftLocal
        };
        'local: for &e in &es {
            // eSe = { e·a·e : a ∈ S }, deduplicated
            let mut seen = FixedBitSet::with_capacity(k);
            let mut local = Vec::new();
            for a in 0..k {
                let x = s.mul3(e, a, e);
                if !seen.put(x) {
                    local.push(x);
                }
            }
            for &x in &local {
                for &y in &local {
                    let xy = s.mul(x, y);
                    let xyx = s.mul(xy, x);
                    let rhs = match identity {
                        Identity::RightLocal => xy,
                        _ => s.mul(y, x),
                    };
                    if xyx != rhs {
                        witness = Some(Witness::SemigroupIdentity {
                            identity,
                            e: element(s, e),
                            x: element(s, x),
                            y: Some(element(s, y)),
                        });
                        break 'local;
                    }
                }
            }
        }
    }
    finish(Verdict::new(property, Route::Oracle, witness), k, start)
}
