//! Worked examples with known answers, and alternative readings of the
//! formulas that must fail.

use std::collections::BTreeMap;

use grk::reflection::{
    full_sector_sweep, k_plus, k_plus_with, reflection_residual, second_reflection_residual,
    sector_residual, simplified_block_residual, KMatrixSpec, SectorData, SectorId, SectorTag,
};
use grk::rmatrix::{
    crossing_matrix, eval_r, r21, rational_limit_residual, ybe_residual, Kind, RMatrixSpec,
    WeightSlot,
};
use grk::sampling::Sampler;
use grk::solutions::{
    build_k, family_layout, pairwise_ideal, shape, xi, C4Mode, ConstraintIdeal, Family,
    FamilyParams, IiSlot, Layout, Side, Variant,
};
use grk::verify::reflection_sweep;
use grk::{
    gen, gmul, gnorm, GeneratorRegistry, GradingProfile, GrassmannElement, SuperMatrix, C64,
};

const ETA: C64 = C64 { re: 0.37, im: 0.0 };

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn pr(m: usize, n: usize) -> GradingProfile {
    GradingProfile::new(m, n).unwrap()
}

fn trig(m: usize, n: usize) -> RMatrixSpec {
    RMatrixSpec::new(Kind::Trigonometric, pr(m, n), ETA).unwrap()
}

fn rat(m: usize, n: usize) -> RMatrixSpec {
    RMatrixSpec::rational(pr(m, n))
}

fn scalar(x: &SuperMatrix, r: usize, col: usize) -> C64 {
    x.get(r, col).scalar_part()
}

// ---- Grassmann algebra ----

#[test]
fn generator_lookup() {
    let mut reg = GeneratorRegistry::new();
    reg.register("G_1").unwrap();
    reg.register("G_3_1").unwrap();
    let g = gen(&reg, "G_3_1").unwrap();
    assert_eq!(g.terms(), &[(0b10, c(1.0, 0.0))]);
    assert!(gmul(&g, &g).is_zero());
    assert!(gen(&GeneratorRegistry::new(), "θ").is_err());
}

// ---- supermatrices ----

fn e(p: GradingProfile, a: usize, b: usize) -> SuperMatrix {
    SuperMatrix::unit(p, a, b).unwrap()
}

#[test]
fn gkron_of_identities_and_diagonals() {
    let p = pr(1, 1);
    let one = SuperMatrix::identity(p, 1);
    assert_eq!(one.gkron(&one).unwrap(), SuperMatrix::identity(p, 2));
    let x = e(p, 1, 1).gkron(&e(p, 2, 2)).unwrap();
    let nz: Vec<_> = x
        .entries()
        .filter(|(_, _, v)| !v.is_zero())
        .map(|(r, c, v)| (r, c, v.scalar_part()))
        .collect();
    assert_eq!(nz, vec![(1, 1, c(1.0, 0.0))]);
}

#[test]
fn permutation_is_an_involution() {
    for (m, n) in [(1, 0), (1, 1), (2, 1), (1, 2), (2, 2)] {
        let p = SuperMatrix::graded_permutation(pr(m, n));
        assert_eq!(
            p.matmul(&p).unwrap(),
            SuperMatrix::identity(pr(m, n), 2),
            "({m},{n})"
        );
    }
    let p10 = SuperMatrix::graded_permutation(pr(1, 0));
    assert_eq!(scalar(&p10, 0, 0), c(1.0, 0.0));
}

#[test]
fn supertranspose_of_bosonic_is_transpose() {
    let p = pr(3, 0);
    let mut s = Sampler::new(1);
    let data: Vec<C64> = (0..9).map(|_| s.point()).collect();
    let x = SuperMatrix::from_scalars(p, 1, &data);
    let t = x.supertranspose().unwrap();
    for a in 0..3 {
        for b in 0..3 {
            assert_eq!(scalar(&t, a, b), scalar(&x, b, a));
        }
    }
}

#[test]
fn double_supertranspose_signs() {
    let p = pr(2, 2);
    let mut s = Sampler::new(2);
    let data: Vec<C64> = (0..16).map(|_| s.point()).collect();
    let x = SuperMatrix::from_scalars(p, 1, &data);
    let tt = x.supertranspose().unwrap().supertranspose().unwrap();
    for a in 0..4 {
        for b in 0..4 {
            let sign = if (p.p(a) + p.p(b)) % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            assert_eq!(scalar(&tt, a, b), scalar(&x, a, b) * sign);
        }
    }
}

/// (e_AB⊗e_CD)(e_IJ⊗e_KL) = (−1)^{[p(C)+p(D)][p(I)+p(J)]} e_AB e_IJ ⊗ e_CD e_KL.
#[test]
fn entrywise_gkron_matches_basis_rule() {
    for (m, n) in [(1, 1), (2, 1), (1, 2), (3, 0), (0, 3)] {
        let p = pr(m, n);
        let d = p.dim();
        let idx: Vec<(usize, usize)> = (1..=d).flat_map(|a| (1..=d).map(move |b| (a, b))).collect();
        for &(a, b) in &idx {
            for &(cc, dd) in &idx {
                let left = e(p, a, b).gkron(&e(p, cc, dd)).unwrap();
                for &(i, j) in &idx {
                    for &(k, l) in &idx {
                        let right = e(p, i, j).gkron(&e(p, k, l)).unwrap();
                        let got = left.matmul(&right).unwrap();
                        let par = |x: usize| p.p(x - 1) as usize;
                        let sign = if ((par(cc) + par(dd)) * (par(i) + par(j))) % 2 == 1 {
                            -1.0
                        } else {
                            1.0
                        };
                        let want = e(p, a, b)
                            .matmul(&e(p, i, j))
                            .unwrap()
                            .gkron(&e(p, cc, dd).matmul(&e(p, k, l)).unwrap())
                            .unwrap()
                            .mscale(c(sign, 0.0));
                        assert_eq!(got, want);
                    }
                }
            }
        }
    }
}

// ---- R-matrix ----

#[test]
fn rational_examples() {
    let s = rat(2, 1);
    let mut sampler = Sampler::new(3);
    for _ in 0..5 {
        let (l, m) = sampler.pair(Kind::Rational, ETA);
        assert!(ybe_residual(&s, l, m) < 1e-12);
    }
    let bad = trig(1, 1).with_perturbation(WeightSlot::F(0, 0), c(0.1, 0.0));
    let (l, m) = sampler.pair(Kind::Trigonometric, ETA);
    assert!(ybe_residual(&trig(1, 1), l, m) < 1e-12);
    assert!(ybe_residual(&bad, l, m) > 1e-3);
}

#[test]
fn rational_limit() {
    for (m, n) in [(1, 1), (2, 1), (1, 2)] {
        assert!(rational_limit_residual(pr(m, n), 1e-4, c(0.3, 0.2)) < 1e-3);
    }
}

/// The limit (1/sinh iη)·R_trig(iηλ′) does not approach R_rat(λ′).
#[test]
fn imaginary_rotated_limit_fails() {
    let p = pr(1, 1);
    let eta = 1e-4;
    let i = c(0.0, 1.0);
    let l = c(0.3, 0.2);
    let t = eval_r(
        &RMatrixSpec::new(Kind::Trigonometric, p, c(eta, 0.0)).unwrap(),
        i * eta * l,
    );
    let scaled = t.mscale(C64::new(1.0, 0.0) / (i * eta).sinh());
    let r = eval_r(&rat(1, 1), l);
    assert!(scaled.msub(&r).unwrap().mnorm() / r.mnorm() > 0.1);
}

/// st₂ without the first-factor grading term breaks PT symmetry.
#[test]
fn naive_second_supertranspose_breaks_pt() {
    let p = pr(1, 1);
    let d = p.dim();
    let r = eval_r(&trig(1, 1), c(0.3, 0.1));
    let naive_st2 = |x: &SuperMatrix| {
        let mut out = SuperMatrix::zeros(p, 2);
        for a in 0..d {
            for b in 0..d {
                for cc in 0..d {
                    for dd in 0..d {
                        let (pc, pd) = (p.p(cc), p.p(dd));
                        let s = if (pc + pc * pd) % 2 == 1 { -1.0 } else { 1.0 };
                        let v = x.get(a * d + cc, b * d + dd).scalar_part() * s;
                        out.set(a * d + dd, b * d + cc, GrassmannElement::scalar(v));
                    }
                }
            }
        }
        out
    };
    let good = r.st1().unwrap().st2().unwrap();
    let naive = naive_st2(&r.st1().unwrap());
    let lhs = r21(&r);
    assert!(lhs.msub(&good).unwrap().mnorm() < 1e-14);
    assert!(lhs.msub(&naive).unwrap().mnorm() > 1e-2);
}

// ---- reflection ----

fn trivial(m: usize, n: usize) -> KMatrixSpec {
    let p = pr(m, n);
    KMatrixSpec::new(p, "one", move |_| SuperMatrix::identity(p, 1))
}

#[test]
fn trivial_boundary() {
    let mut s = Sampler::new(4);
    for (m, n) in [(1, 1), (2, 1), (2, 2)] {
        let k = trivial(m, n);
        for r in [rat(m, n), trig(m, n)] {
            let (l, mu) = s.pair(r.kind, ETA);
            assert!(reflection_residual(&r, &k, l, mu).unwrap().relative() < 1e-14);
            // K⁺ of the identity is M
            let kp = k_plus(&k, &r);
            assert_eq!(kp.eval(l), crossing_matrix(&r));
            assert!(
                second_reflection_residual(&r, &kp, l, mu)
                    .unwrap()
                    .relative()
                    < 1e-12
            );
        }
    }
}

#[test]
fn corrupted_crossing_matrix_fails() {
    let r = trig(2, 1);
    let p = FamilyParams::new(
        2,
        1,
        Family::DiagTrig {
            q: 1,
            c0: c(1.0, 0.3),
        },
    );
    let k = build_k(&p, 1).unwrap();
    let bad_m = crossing_matrix(&r)
        .matmul(
            &SuperMatrix::diagonal(r.profile, &[c(1.3, 0.0), c(1.0, 0.0), c(1.0, 0.0)]).unwrap(),
        )
        .unwrap();
    let kp = k_plus_with(&k.spec, &r, bad_m);
    let (l, mu) = Sampler::new(5).pair(Kind::Trigonometric, ETA);
    assert!(
        second_reflection_residual(&r, &kp, l, mu)
            .unwrap()
            .relative()
            > 1e-3
    );
}

#[test]
fn rational_diagonal_families() {
    let mut s = Sampler::new(6);
    for m in 0..=3 {
        for n in 0..=3 {
            if m + n == 0 {
                continue;
            }
            let d = m + n;
            for q1 in 0..=d {
                for q2 in q1..=d {
                    let p = FamilyParams::new(
                        m,
                        n,
                        Family::DiagRat {
                            q1,
                            q2,
                            c0: s.param(),
                        },
                    );
                    let k = build_k(&p, 0).unwrap();
                    let (l, mu) = s.pair(Kind::Rational, ETA);
                    assert!(
                        reflection_residual(&rat(m, n), &k.spec, l, mu)
                            .unwrap()
                            .relative()
                            < 1e-10
                    );
                }
            }
        }
    }
}

#[test]
fn class_one_needs_the_ideal() {
    let p = FamilyParams::new(
        2,
        1,
        Family::FermRat {
            q1: 0,
            q2: 0,
            c0: c(0.7, 0.1),
            upper_right: false,
            coeffs: BTreeMap::new(),
        },
    );
    let k = build_k(&p, 9).unwrap();
    let (l, mu) = Sampler::new(7).pair(Kind::Rational, ETA);
    let res = reflection_residual(&rat(2, 1), &k.spec, l, mu).unwrap();
    assert!(res.relative() > 1e-4);
    assert!(res.reduced(&k.ideal).relative() < 1e-10);
}

#[test]
fn sector_examples() {
    let mut s = Sampler::new(8);
    // diagonal K: λλγγ vanishes and fermion-carrying sectors are identically zero
    let p = FamilyParams::new(
        2,
        1,
        Family::DiagTrig {
            q: 1,
            c0: c(0.8, 0.0),
        },
    );
    let k = build_k(&p, 0).unwrap();
    let r = trig(2, 1);
    let (l, mu) = s.pair(Kind::Trigonometric, ETA);
    let data = SectorData::new(&r, &k.spec, l, mu).unwrap();
    let tag: SectorTag = "λλγγ".parse().unwrap();
    let v = sector_residual(
        SectorId {
            tag,
            indices: [0, 1, 2, 2],
        },
        &data,
    )
    .unwrap();
    assert!(gnorm(&v) < 1e-14);
    let bad = sector_residual(
        SectorId {
            tag,
            indices: [2, 1, 2, 2],
        },
        &data,
    );
    assert!(bad.is_err());
    let sweep = full_sector_sweep(&k.spec, &r, l, mu, None).unwrap();
    assert!(sweep.per_sector.values().all(|&x| x < 1e-14));

    // trig class 1: λγγλ nonzero before reduction, zero after
    let p = FamilyParams::new(
        1,
        1,
        Family::FermTrig {
            q: 0,
            c0: c(0.8, 0.2),
            coeffs: BTreeMap::new(),
        },
    );
    let k = build_k(&p, 4).unwrap();
    let r = trig(1, 1);
    let raw = full_sector_sweep(&k.spec, &r, l, mu, None).unwrap();
    let red = full_sector_sweep(&k.spec, &r, l, mu, Some(&k.ideal)).unwrap();
    assert!(raw.per_sector["λγγλ"] > 1e-6);
    assert!(red.per_sector["λγγλ"] < 1e-12);
    assert!(red.reassembly < 1e-12);
}

#[test]
fn simplified_bosonic_conditions() {
    let p = FamilyParams::new(
        4,
        1,
        Family::NdRat {
            variant: Variant::I,
            side: Side::Bos,
            bound: 2,
            shift: 0,
            c: [
                c(0.7, 0.1),
                c(1.1, 0.0),
                c(-0.5, 0.3),
                c(0.9, -0.2),
                c(0.4, 0.6),
            ],
            slot: IiSlot::Slot,
        },
    );
    let k = build_k(&p, 0).unwrap();
    let (l, mu) = Sampler::new(9).pair(Kind::Rational, ETA);
    assert!(simplified_block_residual(&k.spec, l, mu, false).unwrap() < 1e-12);
    assert!(simplified_block_residual(&k.spec, l, mu, true).unwrap() < 1e-12);
}

#[test]
fn residual_is_scale_free() {
    let p = FamilyParams::new(
        2,
        1,
        Family::DiagTrig {
            q: 2,
            c0: c(1.0, 0.0),
        },
    );
    let k = build_k(&p, 0).unwrap();
    let inner = k.spec.clone();
    let scaled = KMatrixSpec::new(pr(2, 1), "scaled", move |l| {
        inner.eval(l).mscale(c(7.5, -3.0))
    });
    let (l, mu) = Sampler::new(10).pair(Kind::Trigonometric, ETA);
    let a = reflection_residual(&trig(2, 1), &k.spec, l, mu)
        .unwrap()
        .relative();
    let b = reflection_residual(&trig(2, 1), &scaled, l, mu)
        .unwrap()
        .relative();
    assert!(a < 1e-13 && b < 1e-13);
}

// ---- constructors ----

#[test]
fn diag_trig_one_one() {
    let c0 = c(1.3, 0.0);
    let k = build_k(&FamilyParams::new(1, 1, Family::DiagTrig { q: 1, c0 }), 0).unwrap();
    let l = c(0.2, -0.4);
    let x = k.eval(l);
    assert_eq!(scalar(&x, 0, 0), c0 * l.exp());
    assert_eq!(scalar(&x, 1, 1), c0 * (-l).exp());
    assert!(x.get(0, 1).is_zero() && x.get(1, 0).is_zero());
}

#[test]
fn diagonal_block_sizes() {
    let d = 5;
    for q1 in 0..=d {
        for q2 in q1..=d {
            let k = build_k(
                &FamilyParams::new(
                    3,
                    2,
                    Family::DiagRat {
                        q1,
                        q2,
                        c0: c(0.5, 0.0),
                    },
                ),
                0,
            )
            .unwrap();
            let l = c(0.25, 0.0);
            let x = k.eval(l);
            let plus = (0..d)
                .filter(|&a| (scalar(&x, a, a) - c(0.75, 0.0)).norm() < 1e-15)
                .count();
            assert_eq!(plus, q2 - q1);
        }
    }
}

#[test]
fn upper_right_rows_are_constant() {
    for q in [0, 1, 2, 4] {
        let p = FamilyParams::new(
            2,
            2,
            Family::FermTrig {
                q,
                c0: c(1.0, 0.0),
                coeffs: BTreeMap::new(),
            },
        );
        let k = build_k(&p, 3).unwrap();
        let x = k.eval(c(0.3, 0.1));
        for row in 0..2 {
            assert_eq!(x.get(row, 2), x.get(row, 3), "q={q} row={row}");
        }
    }
}

#[test]
fn constraint_ideal_examples() {
    // (2,1) rational (q₁,q₂) = (1,2): one upper-right and one lower-left slot
    let p = FamilyParams::new(
        2,
        1,
        Family::FermRat {
            q1: 1,
            q2: 2,
            c0: c(1.0, 0.0),
            upper_right: false,
            coeffs: BTreeMap::new(),
        },
    );
    let k = build_k(&p, 0).unwrap();
    assert_eq!(
        k.registry.labels(),
        &["G_2".to_string(), "H_3_2".to_string()]
    );
    let want = k.registry.mask_of("G_2").unwrap() | k.registry.mask_of("H_3_2").unwrap();
    for g in k.ideal.generators() {
        assert_eq!(g.terms().len(), 1);
        assert_eq!(g.terms()[0].0, want);
    }
    // no odd parameters, no constraints
    let p = FamilyParams::new(
        2,
        1,
        Family::DiagRat {
            q1: 0,
            q2: 1,
            c0: c(1.0, 0.0),
        },
    );
    assert!(build_k(&p, 0).unwrap().ideal.is_empty());
}

#[test]
fn two_one_rational_q12_shape() {
    let p = FamilyParams::new(
        2,
        1,
        Family::FermRat {
            q1: 1,
            q2: 2,
            c0: c(0.4, 0.0),
            upper_right: false,
            coeffs: BTreeMap::new(),
        },
    );
    let k = build_k(&p, 0).unwrap();
    let l = c(0.3, 0.0);
    let x = k.eval(l);
    assert!((scalar(&x, 0, 0) - c(0.1, 0.0)).norm() < 1e-15);
    assert!((scalar(&x, 1, 1) - c(0.7, 0.0)).norm() < 1e-15);
    assert!((scalar(&x, 2, 2) - c(0.1, 0.0)).norm() < 1e-15);
    let odd: Vec<(usize, usize)> = x
        .entries()
        .filter(|(a, b, v)| a != b && !v.is_zero())
        .map(|(a, b, _)| (a, b))
        .collect();
    assert_eq!(odd, vec![(1, 2), (2, 1)]);
}

#[test]
fn parameter_errors() {
    let bad = FamilyParams::new(
        2,
        1,
        Family::DiagRat {
            q1: 2,
            q2: 1,
            c0: c(1.0, 0.0),
        },
    );
    assert!(matches!(build_k(&bad, 0), Err(grk::Error::Params(_))));
    let bad = FamilyParams::new(
        2,
        1,
        Family::DiagTrig {
            q: 4,
            c0: c(1.0, 0.0),
        },
    );
    assert!(matches!(build_k(&bad, 0), Err(grk::Error::Params(_))));
    let out_of_range = FamilyParams::new(
        4,
        0,
        Family::NdRat {
            variant: Variant::I,
            side: Side::Bos,
            bound: 3,
            shift: 0,
            c: ND,
            slot: IiSlot::Slot,
        },
    );
    assert!(matches!(
        build_k(&out_of_range, 0),
        Err(grk::Error::Params(_))
    ));
    // c₁ = c₄ and c₂ = c₃ put c₁c₂ = c₃c₄
    let singular = FamilyParams::new(
        2,
        0,
        Family::NdRat {
            variant: Variant::I,
            side: Side::Bos,
            bound: 1,
            shift: 0,
            c: [
                c(0.3, 0.0),
                c(0.7, 0.0),
                c(0.2, 0.1),
                c(0.2, 0.1),
                c(0.7, 0.0),
            ],
            slot: IiSlot::Slot,
        },
    );
    assert!(matches!(
        build_k(&singular, 0),
        Err(grk::Error::Singular(_))
    ));
}

#[test]
fn vanishing_c1_c2_gives_a_diagonal_matrix() {
    let p = FamilyParams::new(
        4,
        1,
        Family::NdRat {
            variant: Variant::I,
            side: Side::Bos,
            bound: 2,
            shift: 0,
            c: [
                c(0.3, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.6, 0.2),
                c(0.9, 0.0),
            ],
            slot: IiSlot::Slot,
        },
    );
    let x = build_k(&p, 0).unwrap().eval(c(0.2, 0.1));
    assert!(x
        .entries()
        .all(|(a, b, v)| a == b || v.is_zero() || gnorm(v) < 1e-15));
}

#[test]
fn xi_identity() {
    let cs = [
        c(0.3, 0.1),
        c(0.7, 0.0),
        c(0.2, 0.5),
        c(-0.4, 0.1),
        c(0.9, 0.3),
    ];
    let l = c(0.6, -0.2);
    let x = xi(&cs, l);
    assert!((x.plus_ll + x.minus_ll - cs[0] * 2.0).norm() < 1e-15);
    let lhs = x.plus_ll * x.minus_ll - x.x14 * x.x23;
    assert!((lhs - x.plus_gg * x.minus_gg).norm() < 1e-14);
}

// ---- printed alternatives that the residual rules out ----

fn sweep_layout(lay: Layout, r: &RMatrixSpec, seed: u64) -> f64 {
    let mut coeffs = BTreeMap::new();
    let (spec, _, ideal, _) = lay.build(&mut coeffs, seed, "variant".into()).unwrap();
    reflection_sweep(r, &spec, Some(&ideal), 5, seed).unwrap()
}

fn layout(m: usize, n: usize, family: Family) -> Layout {
    family_layout(&FamilyParams::new(m, n, family)).unwrap().0
}

fn ferm_trig(q: usize) -> Family {
    Family::FermTrig {
        q,
        c0: c(0.9, 0.3),
        coeffs: BTreeMap::new(),
    }
}

#[test]
fn trig_class_one_profile_is_not_mirrored() {
    // shipped: q = 0 ↦ e^{−λ} sinh 2λ, q = m+n ↦ e^{λ} sinh 2λ
    for (m, n) in [(1, 1), (2, 1), (2, 2)] {
        let r = trig(m, n);
        assert!(sweep_layout(layout(m, n, ferm_trig(0)), &r, 1) < 1e-12);
        assert!(sweep_layout(layout(m, n, ferm_trig(m + n)), &r, 1) < 1e-12);
        let mut lay = layout(m, n, ferm_trig(0));
        lay.odd_shape = shape(|l| l.exp() * (2.0 * l).sinh());
        assert!(sweep_layout(lay, &r, 1) > 1e-3, "({m},{n}) q=0 printed");
        let mut lay = layout(m, n, ferm_trig(m + n));
        lay.odd_shape = shape(|l| (-l).exp() * (2.0 * l).sinh());
        assert!(sweep_layout(lay, &r, 1) > 1e-3, "({m},{n}) q=m+n printed");
    }
}

#[test]
fn trig_class_three_profile_is_sinh() {
    let mut lay = layout(2, 2, ferm_trig(3));
    lay.odd_shape = shape(|l| l.exp() * (2.0 * l).sinh());
    assert!(sweep_layout(lay, &trig(2, 2), 2) > 1e-3);
}

#[test]
fn upper_times_lower_ideal_is_too_small() {
    let p = FamilyParams::new(2, 1, ferm_trig(0));
    let k = build_k(&p, 5).unwrap();
    let reg = &k.registry;
    let upper: Vec<u64> = reg
        .labels()
        .iter()
        .filter(|s| s.starts_with('G'))
        .map(|s| reg.mask_of(s).unwrap())
        .collect();
    let lower: Vec<u64> = reg
        .labels()
        .iter()
        .filter(|s| s.starts_with('H'))
        .map(|s| reg.mask_of(s).unwrap())
        .collect();
    let small = ConstraintIdeal::new(upper.iter().flat_map(|&u| {
        lower
            .iter()
            .map(move |&h| GrassmannElement::monomial(u | h, c(1.0, 0.0)))
    }));
    let r = trig(2, 1);
    assert!(reflection_sweep(&r, &k.spec, Some(&small), 5, 5).unwrap() > 1e-3);
    assert!(reflection_sweep(&r, &k.spec, Some(&pairwise_ideal(reg)), 5, 5).unwrap() < 1e-12);
}

const ND: [C64; 5] = [
    C64 { re: 0.7, im: 0.2 },
    C64 { re: 1.1, im: 0.0 },
    C64 { re: -0.6, im: 0.3 },
    C64 { re: 0.9, im: -0.4 },
    C64 { re: 0.5, im: 0.8 },
];

#[test]
fn xi14_uses_c1_c4() {
    let fam = Family::NdRat {
        variant: Variant::I,
        side: Side::Bos,
        bound: 1,
        shift: 0,
        c: ND,
        slot: IiSlot::Slot,
    };
    let r = rat(2, 1);
    assert!(sweep_layout(layout(2, 1, fam.clone()), &r, 3) < 1e-12);
    let mut lay = layout(2, 1, fam);
    let [_, c1, c2, c3, c4] = ND;
    for entry in lay.even.iter_mut().filter(|e| (e.0, e.1) == (0, 1)) {
        entry.2 = shape(move |l| 2.0 * l * c2 * c4 / (c1 * c2 - c3 * c4));
    }
    assert!(sweep_layout(lay, &r, 3) > 1e-3);
}

fn ferm_nd(bound: usize) -> Family {
    Family::FermRatNondiag {
        variant: Variant::I,
        side: Side::Bos,
        bound,
        shift: 0,
        c: ND,
        coeffs: BTreeMap::new(),
    }
}

#[test]
fn mirror_scalings_are_swapped() {
    let [_, c1, c2, c3, c4] = ND;
    for (m, n, bound) in [(2, 1, 1), (3, 2, 1), (4, 1, 1), (4, 1, 2)] {
        let r = rat(m, n);
        assert!(sweep_layout(layout(m, n, ferm_nd(bound)), &r, 4) < 1e-12);
        let mut lay = layout(m, n, ferm_nd(bound));
        for s in lay.odd.iter_mut() {
            if s.ratio == c2 / c4 {
                s.ratio = -c1 / c3;
            } else if s.ratio == -c1 / c3 {
                s.ratio = c2 / c4;
            }
        }
        assert!(sweep_layout(lay, &r, 4) > 1e-3, "({m},{n}) L={bound}");
    }
}

#[test]
fn mirror_entries_are_not_independent() {
    let mut lay = layout(2, 1, ferm_nd(1));
    for s in lay.odd.iter_mut() {
        match (s.a, s.b) {
            (1, 2) => s.label = "G_2".into(),
            (2, 1) => s.label = "H_3_2".into(),
            _ => continue,
        }
        s.ratio = c(1.0, 0.0);
    }
    assert!(sweep_layout(lay, &rat(2, 1), 5) > 1e-3);
}

#[test]
fn gamma_family_bosonic_block_carries_e4l() {
    let cs = [c(0.8, 0.1), c(0.6, -0.3), c(0.5, 0.4), c(-0.7, 0.2)];
    let fam = Family::NdTrig {
        variant: Variant::I,
        side: Side::Ferm,
        bound: 2,
        shift: 0,
        c: cs,
        c4_mode: C4Mode::C0,
        branch: 1,
    };
    let r = trig(1, 2);
    assert!(sweep_layout(layout(1, 2, fam.clone()), &r, 6) < 1e-12);
    let [c0, c1, c2, c3] = cs;
    let c4 = -c0 + (c0 * c0 + c2 * c3).sqrt();
    let mut lay = layout(1, 2, fam);
    for entry in lay.even.iter_mut().filter(|e| (e.0, e.1) == (0, 0)) {
        entry.2 = shape(move |l| c0 + (2.0 * l).exp() * (c1 + c4 * (2.0 * l).sinh()));
    }
    assert!(sweep_layout(lay, &r, 6) > 1e-3);
}

#[test]
fn both_square_root_branches_pass() {
    for branch in [1, -1] {
        let fam = Family::NdTrig {
            variant: Variant::II,
            side: Side::Bos,
            bound: 1,
            shift: 1,
            c: [c(0.8, 0.1), c(0.6, -0.3), c(0.5, 0.4), c(-0.7, 0.2)],
            c4_mode: C4Mode::C0,
            branch,
        };
        assert!(sweep_layout(layout(3, 1, fam), &trig(3, 1), 7) < 1e-12);
    }
}
