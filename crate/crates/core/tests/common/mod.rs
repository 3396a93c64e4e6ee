//! Family enumeration shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use grk::sampling::Sampler;
use grk::solutions::{
    admissible, rat_class, trig_class, C4Mode, Family, FamilyParams, IiSlot, RatClass, TrigClass,
};
use grk::{GradingProfile, C64};

/// Gradings used for the fermionic and diagonal sweeps.
pub const SMALL: [(usize, usize); 6] = [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1), (3, 2)];

/// Every (m, n) with m, n ≤ 4 and m + n ≥ 1.
pub fn up_to_four() -> Vec<(usize, usize)> {
    (0..=4)
        .flat_map(|m| (0..=4).map(move |n| (m, n)))
        .filter(|&(m, n)| m + n >= 1)
        .collect()
}

fn pr(m: usize, n: usize) -> GradingProfile {
    GradingProfile::new(m, n).unwrap()
}

/// Five free parameters away from the Ξ poles.
pub fn draw_c5(s: &mut Sampler) -> [C64; 5] {
    loop {
        let c = [s.param(), s.param(), s.param(), s.param(), s.param()];
        let (a, b) = (c[1] * c[2], c[3] * c[4]);
        if (a - b).norm() > 0.1 {
            return c;
        }
    }
}

pub fn draw_c4(s: &mut Sampler) -> [C64; 4] {
    [s.param(), s.param(), s.param(), s.param()]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Switches {
    pub c4_mode: C4Mode,
    pub slot: IiSlot,
}

impl Default for Switches {
    fn default() -> Self {
        Self {
            c4_mode: C4Mode::C0,
            slot: IiSlot::Slot,
        }
    }
}

/// One labelled family instance.
#[derive(Clone, Debug)]
pub struct Case {
    pub label: String,
    pub params: FamilyParams,
}

fn case(label: String, m: usize, n: usize, family: Family) -> Case {
    Case {
        label,
        params: FamilyParams::new(m, n, family),
    }
}

pub fn diagonal_cases(draw: u64) -> Vec<Case> {
    let mut s = Sampler::new(100 + draw);
    let mut out = Vec::new();
    for (m, n) in SMALL {
        let d = m + n;
        out.push(case(
            format!("trivial {m},{n}"),
            m,
            n,
            Family::Trivial { c0: s.param() },
        ));
        for q1 in 0..=d {
            for q2 in q1..=d {
                out.push(case(
                    format!("diag_rat {m},{n} q=({q1},{q2})"),
                    m,
                    n,
                    Family::DiagRat {
                        q1,
                        q2,
                        c0: s.param(),
                    },
                ));
            }
        }
        for q in 0..=d {
            out.push(case(
                format!("diag_trig {m},{n} q={q}"),
                m,
                n,
                Family::DiagTrig { q, c0: s.param() },
            ));
        }
    }
    out
}

pub fn nd_rat_cases(draw: u64, sw: Switches) -> Vec<Case> {
    let mut s = Sampler::new(200 + draw);
    let mut out = Vec::new();
    for (m, n) in up_to_four() {
        for (variant, side, bound, shift) in admissible(pr(m, n)) {
            let c = draw_c5(&mut s);
            out.push(case(
                format!("nd_rat {m},{n} {variant:?}{side:?} bound={bound} shift={shift}"),
                m,
                n,
                Family::NdRat {
                    variant,
                    side,
                    bound,
                    shift,
                    c,
                    slot: sw.slot,
                },
            ));
        }
    }
    out
}

pub fn nd_trig_cases(draw: u64, sw: Switches) -> Vec<Case> {
    let mut s = Sampler::new(300 + draw);
    let mut out = Vec::new();
    for (m, n) in up_to_four() {
        for (variant, side, bound, shift) in admissible(pr(m, n)) {
            let c = draw_c4(&mut s);
            let branch = if draw.is_multiple_of(2) { 1 } else { -1 };
            out.push(case(
                format!("nd_trig {m},{n} {variant:?}{side:?} bound={bound} shift={shift} branch={branch}"),
                m,
                n,
                Family::NdTrig {
                    variant,
                    side,
                    bound,
                    shift,
                    c,
                    c4_mode: sw.c4_mode,
                    branch,
                },
            ));
        }
    }
    out
}

pub fn ferm_rat_cases(draw: u64) -> Vec<Case> {
    let mut s = Sampler::new(400 + draw);
    let mut out = Vec::new();
    for (m, n) in SMALL {
        let d = m + n;
        for q1 in 0..=d {
            for q2 in q1..=d {
                let class = rat_class(pr(m, n), q1, q2);
                let flags: &[bool] = match class {
                    RatClass::ThreeOne | RatClass::ThreeTwo => &[false, true],
                    _ => &[false],
                };
                for &upper_right in flags {
                    out.push(case(
                        format!("ferm_rat {m},{n} q=({q1},{q2}) {class:?} ur={upper_right}"),
                        m,
                        n,
                        Family::FermRat {
                            q1,
                            q2,
                            c0: s.param(),
                            upper_right,
                            coeffs: BTreeMap::new(),
                        },
                    ));
                }
            }
        }
    }
    out
}

pub fn ferm_trig_cases(draw: u64) -> Vec<Case> {
    let mut s = Sampler::new(500 + draw);
    let mut out = Vec::new();
    for (m, n) in SMALL {
        for q in 0..=m + n {
            let class: TrigClass = trig_class(pr(m, n), q);
            out.push(case(
                format!("ferm_trig {m},{n} q={q} {class:?}"),
                m,
                n,
                Family::FermTrig {
                    q,
                    c0: s.param(),
                    coeffs: BTreeMap::new(),
                },
            ));
        }
    }
    out
}

pub fn ferm_nd_cases(draw: u64) -> Vec<Case> {
    let mut s = Sampler::new(600 + draw);
    let mut out = Vec::new();
    for (m, n) in [
        (2, 1),
        (3, 1),
        (3, 2),
        (4, 1),
        (2, 2),
        (1, 2),
        (1, 3),
        (2, 3),
    ] {
        for (variant, side, bound, shift) in admissible(pr(m, n)) {
            let c = loop {
                let c = draw_c5(&mut s);
                if c[3].norm() > 0.2 && c[4].norm() > 0.2 {
                    break c;
                }
            };
            out.push(case(
                format!("ferm_rat_nondiag {m},{n} {variant:?}{side:?} bound={bound} shift={shift}"),
                m,
                n,
                Family::FermRatNondiag {
                    variant,
                    side,
                    bound,
                    shift,
                    c,
                    coeffs: BTreeMap::new(),
                },
            ));
        }
    }
    out
}

/// Everything criterion-3 style sweeps cover, for one parameter draw.
pub fn all_cases(draw: u64, sw: Switches) -> Vec<Case> {
    let mut v = diagonal_cases(draw);
    v.extend(nd_rat_cases(draw, sw));
    v.extend(nd_trig_cases(draw, sw));
    v.extend(ferm_rat_cases(draw));
    v.extend(ferm_trig_cases(draw));
    v.extend(ferm_nd_cases(draw));
    v
}
