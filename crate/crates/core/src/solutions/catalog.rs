//! Explicit small-(m,n) reflection matrices, written out by hand entry by
//! entry and checked against the general constructors.

use std::collections::BTreeMap;

use super::{build_k, BuiltK, Family, FamilyParams, Side, Variant};
use crate::grassmann::{GrassmannElement, C64};
use crate::supermatrix::SuperMatrix;
use crate::Error;

/// Seed used to draw the catalog's 𝒞 coefficients.
pub const CATALOG_SEED: u64 = 42;

/// One written entry, 1-based, with an optional odd generator label.
#[derive(Clone, Debug)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
    pub gen: Option<String>,
    pub value: C64,
}

/// Scalars a transcription may refer to.
pub struct Ctx {
    pub c: Vec<C64>,
    pub coeffs: BTreeMap<String, C64>,
}

impl Ctx {
    fn k(&self, label: &str) -> C64 {
        self.coeffs[label]
    }
}

type Transcription = fn(&Ctx, C64) -> Vec<Cell>;

#[derive(Clone)]
pub struct CatalogItem {
    pub id: &'static str,
    pub params: FamilyParams,
    expected: Transcription,
}

impl std::fmt::Debug for CatalogItem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CatalogItem({})", self.id)
    }
}

const RAT_C0: C64 = C64 { re: 0.8, im: 0.3 };
const TRIG_C0: C64 = C64 { re: 1.1, im: -0.4 };
const ND_C: [C64; 5] = [
    C64 { re: 0.7, im: 0.2 },
    C64 { re: 1.1, im: 0.0 },
    C64 { re: -0.6, im: 0.3 },
    C64 { re: 0.9, im: -0.4 },
    C64 { re: 0.5, im: 0.8 },
];

fn even(row: usize, col: usize, value: C64) -> Cell {
    Cell {
        row,
        col,
        gen: None,
        value,
    }
}

fn odd(row: usize, col: usize, gen: &str, value: C64) -> Cell {
    Cell {
        row,
        col,
        gen: Some(gen.to_string()),
        value,
    }
}

/// Diagonal from a sign pattern such as "+-|--": '+' is c₀+λ, '-' is c₀−λ
/// (rational) or c₀e^{λ}, c₀e^{−λ} (trigonometric).
fn diag(pattern: &str, plus: C64, minus: C64) -> Vec<Cell> {
    pattern
        .chars()
        .filter(|&ch| ch != '|')
        .enumerate()
        .map(|(i, ch)| even(i + 1, i + 1, if ch == '+' { plus } else { minus }))
        .collect()
}

fn rat_diag(x: &Ctx, l: C64, pattern: &str) -> Vec<Cell> {
    diag(pattern, x.c[0] + l, x.c[0] - l)
}

fn trig_diag(x: &Ctx, l: C64, pattern: &str) -> Vec<Cell> {
    diag(pattern, x.c[0] * l.exp(), x.c[0] * (-l).exp())
}

/// Odd cells (row, col, label) sharing the λ-profile `w`.
fn odds(x: &Ctx, w: C64, cells: &[(usize, usize, &str)]) -> Vec<Cell> {
    cells
        .iter()
        .map(|&(r, c, g)| odd(r, c, g, x.k(g) * w))
        .collect()
}

fn with(mut a: Vec<Cell>, b: Vec<Cell>) -> Vec<Cell> {
    a.extend(b);
    a
}

// ---- rational, diagonal bosonic part ----

fn rat_1_1_q0_0(x: &Ctx, l: C64) -> Vec<Cell> {
    let w = l * (l - x.c[0]);
    with(
        rat_diag(x, l, "-|-"),
        odds(x, w, &[(1, 2, "G_1"), (2, 1, "H_2_1")]),
    )
}

fn rat_1_1_q0_2(x: &Ctx, l: C64) -> Vec<Cell> {
    let w = l * (l + x.c[0]);
    with(
        rat_diag(x, l, "+|+"),
        odds(x, w, &[(1, 2, "G_1"), (2, 1, "H_2_1")]),
    )
}

fn rat_1_1_q1_2(x: &Ctx, l: C64) -> Vec<Cell> {
    with(
        rat_diag(x, l, "-|+"),
        odds(x, l, &[(1, 2, "G_1"), (2, 1, "H_2_1")]),
    )
}

const FULL_2_1: [(usize, usize, &str); 4] = [
    (1, 3, "G_1"),
    (2, 3, "G_2"),
    (3, 1, "H_3_1"),
    (3, 2, "H_3_2"),
];

fn rat_2_1_q0_0(x: &Ctx, l: C64) -> Vec<Cell> {
    with(rat_diag(x, l, "--|-"), odds(x, l * (l - x.c[0]), &FULL_2_1))
}

fn rat_2_1_q0_1(x: &Ctx, l: C64) -> Vec<Cell> {
    with(
        rat_diag(x, l, "+-|-"),
        odds(x, l, &[(1, 3, "G_1"), (3, 1, "H_3_1")]),
    )
}

fn rat_2_1_q0_2(x: &Ctx, l: C64) -> Vec<Cell> {
    with(rat_diag(x, l, "++|-"), odds(x, l, &FULL_2_1))
}

fn rat_2_1_q0_3(x: &Ctx, l: C64) -> Vec<Cell> {
    with(rat_diag(x, l, "++|+"), odds(x, l * (l + x.c[0]), &FULL_2_1))
}

fn rat_2_1_q1_2(x: &Ctx, l: C64) -> Vec<Cell> {
    with(
        rat_diag(x, l, "-+|-"),
        odds(x, l, &[(2, 3, "G_2"), (3, 2, "H_3_2")]),
    )
}

const FULL_2_2: [(usize, usize, &str); 8] = [
    (1, 3, "G_1"),
    (1, 4, "G_1"),
    (2, 3, "G_2"),
    (2, 4, "G_2"),
    (3, 1, "H_3_1"),
    (3, 2, "H_3_2"),
    (4, 1, "H_4_1"),
    (4, 2, "H_4_2"),
];

fn rat_2_2_q0_0(x: &Ctx, l: C64) -> Vec<Cell> {
    with(
        rat_diag(x, l, "--|--"),
        odds(x, l * (l - x.c[0]), &FULL_2_2),
    )
}

fn rat_2_2_q0_1(x: &Ctx, l: C64) -> Vec<Cell> {
    let cells = [
        (1, 3, "G_1"),
        (1, 4, "G_1"),
        (3, 1, "H_3_1"),
        (4, 1, "H_4_1"),
    ];
    with(rat_diag(x, l, "+-|--"), odds(x, l, &cells))
}

fn rat_2_2_q0_2(x: &Ctx, l: C64) -> Vec<Cell> {
    with(rat_diag(x, l, "++|--"), odds(x, l, &FULL_2_2))
}

fn rat_2_2_q0_3(x: &Ctx, l: C64) -> Vec<Cell> {
    let cells = [
        (1, 4, "G_1"),
        (2, 4, "G_2"),
        (4, 1, "H_4_1"),
        (4, 2, "H_4_2"),
    ];
    with(rat_diag(x, l, "++|+-"), odds(x, l, &cells))
}

fn rat_2_2_q0_4(x: &Ctx, l: C64) -> Vec<Cell> {
    with(
        rat_diag(x, l, "++|++"),
        odds(x, l * (l + x.c[0]), &FULL_2_2),
    )
}

fn rat_2_2_q1_2(x: &Ctx, l: C64) -> Vec<Cell> {
    let cells = [
        (2, 3, "G_2"),
        (2, 4, "G_2"),
        (3, 2, "H_3_2"),
        (4, 2, "H_4_2"),
    ];
    with(rat_diag(x, l, "-+|--"), odds(x, l, &cells))
}

fn rat_2_2_q1_3(x: &Ctx, l: C64) -> Vec<Cell> {
    let cells = [
        (1, 3, "G_1"),
        (2, 4, "G_2"),
        (3, 1, "H_3_1"),
        (4, 2, "H_4_2"),
    ];
    with(rat_diag(x, l, "-+|+-"), odds(x, l, &cells))
}

fn rat_2_2_q2_3(x: &Ctx, l: C64) -> Vec<Cell> {
    with(
        rat_diag(x, l, "--|+-"),
        odds(x, l, &[(3, 1, "H_3_1"), (3, 2, "H_3_2")]),
    )
}

fn rat_2_2_q3_4(x: &Ctx, l: C64) -> Vec<Cell> {
    with(
        rat_diag(x, l, "--|-+"),
        odds(x, l, &[(4, 1, "H_4_1"), (4, 2, "H_4_2")]),
    )
}

// ---- rational, nondiagonal bosonic part ----

struct XiVals {
    pll: C64,
    mll: C64,
    mgg: C64,
    x14: C64,
    x23: C64,
    up: C64,
    low: C64,
}

fn xi_vals(x: &Ctx, l: C64) -> XiVals {
    let (c0, c1, c2, c3, c4) = (x.c[0], x.c[1], x.c[2], x.c[3], x.c[4]);
    let q = l * (c1 * c2 + c3 * c4) / (c3 * c4 - c1 * c2);
    XiVals {
        pll: c0 + q,
        mll: c0 - q,
        mgg: c0 - l,
        x14: 2.0 * l * c1 * c4 / (c1 * c2 - c3 * c4),
        x23: 2.0 * l * c2 * c3 / (c3 * c4 - c1 * c2),
        up: c2 / c4,
        low: -c1 / c3,
    }
}

fn ratnd_2_1(x: &Ctx, l: C64) -> Vec<Cell> {
    let v = xi_vals(x, l);
    let (g, h) = (x.k("G_1") * l, x.k("H_3_1") * l);
    vec![
        even(1, 1, v.pll),
        even(1, 2, v.x14),
        odd(1, 3, "G_1", g),
        even(2, 1, v.x23),
        even(2, 2, v.mll),
        odd(2, 3, "G_1", v.up * g),
        odd(3, 1, "H_3_1", h),
        odd(3, 2, "H_3_1", v.low * h),
        even(3, 3, v.mgg),
    ]
}

fn ratnd_3_2(x: &Ctx, l: C64) -> Vec<Cell> {
    let v = xi_vals(x, l);
    let g = x.k("G_1") * l;
    let (h4, h5) = (x.k("H_4_1") * l, x.k("H_5_1") * l);
    vec![
        even(1, 1, v.pll),
        even(1, 3, v.x14),
        odd(1, 4, "G_1", g),
        odd(1, 5, "G_1", g),
        even(2, 2, v.mgg),
        even(3, 1, v.x23),
        even(3, 3, v.mll),
        odd(3, 4, "G_1", v.up * g),
        odd(3, 5, "G_1", v.up * g),
        odd(4, 1, "H_4_1", h4),
        odd(4, 3, "H_4_1", v.low * h4),
        even(4, 4, v.mgg),
        odd(5, 1, "H_5_1", h5),
        odd(5, 3, "H_5_1", v.low * h5),
        even(5, 5, v.mgg),
    ]
}

fn ratnd_4_1_a(x: &Ctx, l: C64) -> Vec<Cell> {
    let v = xi_vals(x, l);
    let (g, h) = (x.k("G_1") * l, x.k("H_5_1") * l);
    vec![
        even(1, 1, v.pll),
        even(1, 4, v.x14),
        odd(1, 5, "G_1", g),
        even(2, 2, v.mgg),
        even(3, 3, v.mgg),
        even(4, 1, v.x23),
        even(4, 4, v.mll),
        odd(4, 5, "G_1", v.up * g),
        odd(5, 1, "H_5_1", h),
        odd(5, 4, "H_5_1", v.low * h),
        even(5, 5, v.mgg),
    ]
}

fn ratnd_4_1_b(x: &Ctx, l: C64) -> Vec<Cell> {
    let v = xi_vals(x, l);
    let (g1, g2) = (x.k("G_1") * l, x.k("G_2") * l);
    let (h1, h2) = (x.k("H_5_1") * l, x.k("H_5_2") * l);
    vec![
        even(1, 1, v.pll),
        even(1, 4, v.x14),
        odd(1, 5, "G_1", g1),
        even(2, 2, v.pll),
        even(2, 3, v.x14),
        odd(2, 5, "G_2", g2),
        even(3, 2, v.x23),
        even(3, 3, v.mll),
        odd(3, 5, "G_2", v.up * g2),
        even(4, 1, v.x23),
        even(4, 4, v.mll),
        odd(4, 5, "G_1", v.up * g1),
        odd(5, 1, "H_5_1", h1),
        odd(5, 2, "H_5_2", h2),
        odd(5, 3, "H_5_2", v.low * h2),
        odd(5, 4, "H_5_1", v.low * h1),
        even(5, 5, v.mgg),
    ]
}

// ---- trigonometric, diagonal bosonic part ----

fn e_minus_s2(l: C64) -> C64 {
    (-l).exp() * (2.0 * l).sinh()
}

fn e_plus_s2(l: C64) -> C64 {
    l.exp() * (2.0 * l).sinh()
}

fn trig_1_1_q0(x: &Ctx, l: C64) -> Vec<Cell> {
    with(
        trig_diag(x, l, "-|-"),
        odds(x, e_minus_s2(l), &[(1, 2, "G_1"), (2, 1, "H_2_1")]),
    )
}

fn trig_1_1_q1(x: &Ctx, l: C64) -> Vec<Cell> {
    with(
        trig_diag(x, l, "+|-"),
        odds(x, l.sinh(), &[(1, 2, "G_1"), (2, 1, "H_2_1")]),
    )
}

fn trig_1_1_q2(x: &Ctx, l: C64) -> Vec<Cell> {
    with(
        trig_diag(x, l, "+|+"),
        odds(x, e_plus_s2(l), &[(1, 2, "G_1"), (2, 1, "H_2_1")]),
    )
}

fn trig_2_1_q0(x: &Ctx, l: C64) -> Vec<Cell> {
    with(trig_diag(x, l, "--|-"), odds(x, e_minus_s2(l), &FULL_2_1))
}

fn trig_2_1_q1(x: &Ctx, l: C64) -> Vec<Cell> {
    with(
        trig_diag(x, l, "+-|-"),
        odds(x, l.sinh(), &[(1, 3, "G_1"), (3, 1, "H_3_1")]),
    )
}

fn trig_2_1_q2(x: &Ctx, l: C64) -> Vec<Cell> {
    with(trig_diag(x, l, "++|-"), odds(x, l.sinh(), &FULL_2_1))
}

fn trig_2_1_q3(x: &Ctx, l: C64) -> Vec<Cell> {
    with(trig_diag(x, l, "++|+"), odds(x, e_plus_s2(l), &FULL_2_1))
}

fn trig_2_2_q0(x: &Ctx, l: C64) -> Vec<Cell> {
    with(trig_diag(x, l, "--|--"), odds(x, e_minus_s2(l), &FULL_2_2))
}

fn trig_2_2_q1(x: &Ctx, l: C64) -> Vec<Cell> {
    let cells = [
        (1, 3, "G_1"),
        (1, 4, "G_1"),
        (3, 1, "H_3_1"),
        (4, 1, "H_4_1"),
    ];
    with(trig_diag(x, l, "+-|--"), odds(x, l.sinh(), &cells))
}

fn trig_2_2_q2(x: &Ctx, l: C64) -> Vec<Cell> {
    with(trig_diag(x, l, "++|--"), odds(x, l.sinh(), &FULL_2_2))
}

fn trig_2_2_q3(x: &Ctx, l: C64) -> Vec<Cell> {
    with(
        trig_diag(x, l, "++|+-"),
        odds(x, l.sinh(), &[(4, 1, "H_4_1"), (4, 2, "H_4_2")]),
    )
}

fn trig_2_2_q4(x: &Ctx, l: C64) -> Vec<Cell> {
    with(trig_diag(x, l, "++|++"), odds(x, e_plus_s2(l), &FULL_2_2))
}

fn ferm_rat(m: usize, n: usize, q1: usize, q2: usize, upper_right: bool) -> FamilyParams {
    FamilyParams::new(
        m,
        n,
        Family::FermRat {
            q1,
            q2,
            c0: RAT_C0,
            upper_right,
            coeffs: BTreeMap::new(),
        },
    )
}

fn ferm_trig(m: usize, n: usize, q: usize) -> FamilyParams {
    FamilyParams::new(
        m,
        n,
        Family::FermTrig {
            q,
            c0: TRIG_C0,
            coeffs: BTreeMap::new(),
        },
    )
}

fn ferm_nd(m: usize, n: usize, bound: usize) -> FamilyParams {
    FamilyParams::new(
        m,
        n,
        Family::FermRatNondiag {
            variant: Variant::I,
            side: Side::Bos,
            bound,
            shift: 0,
            c: ND_C,
            coeffs: BTreeMap::new(),
        },
    )
}

/// Every catalog entry.
pub fn catalog() -> Vec<CatalogItem> {
    let item = |id, params, expected: Transcription| CatalogItem {
        id,
        params,
        expected,
    };
    vec![
        item("rat.1_1.q0_0", ferm_rat(1, 1, 0, 0, false), rat_1_1_q0_0),
        item("rat.1_1.q1_1", ferm_rat(1, 1, 1, 1, false), rat_1_1_q0_0),
        item("rat.1_1.q0_2", ferm_rat(1, 1, 0, 2, false), rat_1_1_q0_2),
        item("rat.1_1.q1_2", ferm_rat(1, 1, 1, 2, false), rat_1_1_q1_2),
        item("rat.2_1.q0_0", ferm_rat(2, 1, 0, 0, false), rat_2_1_q0_0),
        item("rat.2_1.q1_1", ferm_rat(2, 1, 1, 1, false), rat_2_1_q0_0),
        item("rat.2_1.q0_1", ferm_rat(2, 1, 0, 1, false), rat_2_1_q0_1),
        item("rat.2_1.q0_2", ferm_rat(2, 1, 0, 2, false), rat_2_1_q0_2),
        item("rat.2_1.q0_3", ferm_rat(2, 1, 0, 3, false), rat_2_1_q0_3),
        item("rat.2_1.q1_2", ferm_rat(2, 1, 1, 2, false), rat_2_1_q1_2),
        item("rat.2_2.q0_0", ferm_rat(2, 2, 0, 0, false), rat_2_2_q0_0),
        item("rat.2_2.q1_1", ferm_rat(2, 2, 1, 1, false), rat_2_2_q0_0),
        item("rat.2_2.q2_2", ferm_rat(2, 2, 2, 2, false), rat_2_2_q0_0),
        item("rat.2_2.q0_1", ferm_rat(2, 2, 0, 1, false), rat_2_2_q0_1),
        item("rat.2_2.q0_2", ferm_rat(2, 2, 0, 2, false), rat_2_2_q0_2),
        item("rat.2_2.q0_3", ferm_rat(2, 2, 0, 3, true), rat_2_2_q0_3),
        item("rat.2_2.q0_4", ferm_rat(2, 2, 0, 4, false), rat_2_2_q0_4),
        item("rat.2_2.q1_2", ferm_rat(2, 2, 1, 2, false), rat_2_2_q1_2),
        item("rat.2_2.q1_3", ferm_rat(2, 2, 1, 3, true), rat_2_2_q1_3),
        item("rat.2_2.q2_3", ferm_rat(2, 2, 2, 3, false), rat_2_2_q2_3),
        item("rat.2_2.q3_4", ferm_rat(2, 2, 3, 4, false), rat_2_2_q3_4),
        item("ratnd.2_1", ferm_nd(2, 1, 1), ratnd_2_1),
        item("ratnd.3_2", ferm_nd(3, 2, 1), ratnd_3_2),
        item("ratnd.4_1.a", ferm_nd(4, 1, 1), ratnd_4_1_a),
        item("ratnd.4_1.b", ferm_nd(4, 1, 2), ratnd_4_1_b),
        item("trig.1_1.q0", ferm_trig(1, 1, 0), trig_1_1_q0),
        item("trig.1_1.q1", ferm_trig(1, 1, 1), trig_1_1_q1),
        item("trig.1_1.q2", ferm_trig(1, 1, 2), trig_1_1_q2),
        item("trig.2_1.q0", ferm_trig(2, 1, 0), trig_2_1_q0),
        item("trig.2_1.q1", ferm_trig(2, 1, 1), trig_2_1_q1),
        item("trig.2_1.q2", ferm_trig(2, 1, 2), trig_2_1_q2),
        item("trig.2_1.q3", ferm_trig(2, 1, 3), trig_2_1_q3),
        item("trig.2_2.q0", ferm_trig(2, 2, 0), trig_2_2_q0),
        item("trig.2_2.q1", ferm_trig(2, 2, 1), trig_2_2_q1),
        item("trig.2_2.q2", ferm_trig(2, 2, 2), trig_2_2_q2),
        item("trig.2_2.q3", ferm_trig(2, 2, 3), trig_2_2_q3),
        item("trig.2_2.q4", ferm_trig(2, 2, 4), trig_2_2_q4),
    ]
}

pub fn catalog_item(id: &str) -> Option<CatalogItem> {
    catalog().into_iter().find(|it| it.id == id)
}

impl CatalogItem {
    pub fn build(&self) -> Result<BuiltK, Error> {
        build_k(&self.params, CATALOG_SEED)
    }

    /// The hand-written matrix at λ, using the 𝒞's the constructor drew.
    pub fn expected(&self, built: &BuiltK, l: C64) -> Result<SuperMatrix, Error> {
        let (c, coeffs) = match &built.params.family {
            Family::FermRat { c0, coeffs, .. } | Family::FermTrig { c0, coeffs, .. } => {
                (vec![*c0], coeffs.clone())
            }
            Family::FermRatNondiag { c, coeffs, .. } => (c.to_vec(), coeffs.clone()),
            _ => {
                return Err(Error::Params(format!(
                    "{} is not a fermionic catalog entry",
                    self.id
                )))
            }
        };
        let ctx = Ctx { c, coeffs };
        let pr = built.params.profile()?;
        let mut entries = Vec::new();
        for cell in (self.expected)(&ctx, l) {
            let mask = match &cell.gen {
                Some(g) => built.registry.mask_of(g)?,
                None => 0,
            };
            entries.push((
                cell.row - 1,
                cell.col - 1,
                GrassmannElement::monomial(mask, cell.value),
            ));
        }
        SuperMatrix::from_written(pr, entries)
    }

    /// Largest coefficient difference between constructor and transcription
    /// at λ, relative to max(1, |coefficient|).
    pub fn mismatch(&self, l: C64) -> Result<f64, Error> {
        let built = self.build()?;
        let want = self.expected(&built, l)?;
        let got = built.eval(l);
        let mut worst = 0.0f64;
        for ((_, _, a), (_, _, b)) in got.entries().zip(want.entries()) {
            let masks: std::collections::BTreeSet<u64> =
                a.terms().iter().chain(b.terms()).map(|t| t.0).collect();
            for k in masks {
                let (x, y) = (a.coeff(k), b.coeff(k));
                worst = worst.max((x - y).norm() / y.norm().max(1.0));
            }
        }
        Ok(worst)
    }
}
