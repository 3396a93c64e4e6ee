//! Constructors for the reflection-matrix families, their constraint
//! ideals, and the catalog of small explicit matrices.

mod catalog;
mod conj;
mod ideal;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::grassmann::{gmul, GeneratorRegistry, GrassmannElement, C64};
use crate::reflection::KMatrixSpec;
use crate::rmatrix::Kind;
use crate::sampling::Sampler;
use crate::supermatrix::{GradingProfile, SuperMatrix};
use crate::Error;

pub use catalog::{catalog, catalog_item, CatalogItem};
pub use conj::{
    admissible, bound_range, conj_index, gen_conj_index, pairing, Pairing, Side, Sign, Variant,
};
pub use ideal::{reduce_mod_ideal, ConstraintIdeal};

/// Which c₄ enters the trigonometric nondiagonal families:
/// −c₀+(c₀²+c₂c₃)^½ or −c₁+(c₁²+c₂c₃)^½.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum C4Mode {
    #[default]
    C0,
    C1,
}

/// Where Ξ₂₃ sits in the II λ rational family: the mirror slot (j̄, j) or
/// the diagonal slot (j, j).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IiSlot {
    #[default]
    Slot,
    Literal,
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn plus_one() -> i8 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Trivial {
        #[serde(default = "one")]
        c0: C64,
    },
    DiagRat {
        q1: usize,
        q2: usize,
        c0: C64,
    },
    DiagTrig {
        q: usize,
        c0: C64,
    },
    /// `bound` is L (bosonic side) or Λ (fermionic side), `shift` is ℓ or ξ.
    NdRat {
        variant: Variant,
        side: Side,
        bound: usize,
        #[serde(default)]
        shift: usize,
        c: [C64; 5],
        #[serde(default)]
        slot: IiSlot,
    },
    NdTrig {
        variant: Variant,
        side: Side,
        bound: usize,
        #[serde(default)]
        shift: usize,
        c: [C64; 4],
        #[serde(default)]
        c4_mode: C4Mode,
        #[serde(default = "plus_one")]
        branch: i8,
    },
    FermRat {
        q1: usize,
        q2: usize,
        c0: C64,
        #[serde(default)]
        upper_right: bool,
        #[serde(default)]
        coeffs: BTreeMap<String, C64>,
    },
    FermTrig {
        q: usize,
        c0: C64,
        #[serde(default)]
        coeffs: BTreeMap<String, C64>,
    },
    FermRatNondiag {
        variant: Variant,
        side: Side,
        bound: usize,
        #[serde(default)]
        shift: usize,
        c: [C64; 5],
        #[serde(default)]
        coeffs: BTreeMap<String, C64>,
    },
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::Trivial { .. } => "trivial",
            Family::DiagRat { .. } => "diag_rat",
            Family::DiagTrig { .. } => "diag_trig",
            Family::NdRat { .. } => "nd_rat",
            Family::NdTrig { .. } => "nd_trig",
            Family::FermRat { .. } => "ferm_rat",
            Family::FermTrig { .. } => "ferm_trig",
            Family::FermRatNondiag { .. } => "ferm_rat_nondiag",
        }
    }

    /// R-matrix kind the family solves against; `None` for the trivial
    /// boundary, which solves both.
    pub fn kind(&self) -> Option<Kind> {
        match self {
            Family::Trivial { .. } => None,
            Family::DiagRat { .. }
            | Family::NdRat { .. }
            | Family::FermRat { .. }
            | Family::FermRatNondiag { .. } => Some(Kind::Rational),
            Family::DiagTrig { .. } | Family::NdTrig { .. } | Family::FermTrig { .. } => {
                Some(Kind::Trigonometric)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub m: usize,
    pub n: usize,
    #[serde(flatten)]
    pub family: Family,
}

impl FamilyParams {
    pub fn new(m: usize, n: usize, family: Family) -> Self {
        Self { m, n, family }
    }

    pub fn profile(&self) -> Result<GradingProfile, Error> {
        GradingProfile::new(self.m, self.n)
    }
}

/// Ξ functions of the rational nondiagonal families.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Xi {
    pub plus_ll: C64,
    pub minus_ll: C64,
    pub plus_gg: C64,
    pub minus_gg: C64,
    pub x14: C64,
    pub x23: C64,
}

pub fn xi(c: &[C64; 5], l: C64) -> Xi {
    let [c0, c1, c2, c3, c4] = *c;
    let den = c3 * c4 - c1 * c2;
    let ratio = (c1 * c2 + c3 * c4) / den;
    Xi {
        plus_ll: c0 + l * ratio,
        minus_ll: c0 - l * ratio,
        plus_gg: c0 + l,
        minus_gg: c0 - l,
        x14: 2.0 * l * c1 * c4 / (c1 * c2 - c3 * c4),
        x23: 2.0 * l * c2 * c3 / den,
    }
}

fn check_xi_poles(c: &[C64; 5]) -> Result<(), Error> {
    let (a, b) = (c[1] * c[2], c[3] * c[4]);
    if (a - b).norm() / a.norm().max(b.norm()).max(1.0) < 1e-12 {
        return Err(Error::Singular("c₁c₂ = c₃c₄ puts a pole in Ξ".into()));
    }
    Ok(())
}

/// K-matrix evaluator, registry, ideal, and odd slots of a built layout.
pub type Built = (
    KMatrixSpec,
    GeneratorRegistry,
    ConstraintIdeal,
    Vec<(usize, usize, u64, C64)>,
);

pub type Shape = Arc<dyn Fn(C64) -> C64 + Send + Sync>;

pub fn shape(f: impl Fn(C64) -> C64 + Send + Sync + 'static) -> Shape {
    Arc::new(f)
}

/// One Grassmann-odd slot: entry (a, b) = 𝒞[label]·ratio·θ_label·φ(λ)W(λ).
#[derive(Clone, Debug, PartialEq)]
pub struct OddSlot {
    pub a: usize,
    pub b: usize,
    pub label: String,
    pub ratio: C64,
}

/// Generic K-matrix shape: scalar entries plus odd slots sharing one
/// λ-profile.
#[derive(Clone)]
pub struct Layout {
    pub kind: Kind,
    pub profile: GradingProfile,
    pub even: Vec<(usize, usize, Shape)>,
    pub odd: Vec<OddSlot>,
    /// φ(λ)W(λ) multiplying every odd slot.
    pub odd_shape: Shape,
}

/// Labels of the odd generators: 𝒢_b for upper-right row b, ℋ_γb for a
/// lower-left slot, 1-based.
pub fn upper_label(b: usize) -> String {
    format!("G_{}", b + 1)
}

pub fn lower_label(g: usize, b: usize) -> String {
    format!("H_{}_{}", g + 1, b + 1)
}

/// A constructed K-matrix with its generators and constraints.
#[derive(Clone, Debug)]
pub struct BuiltK {
    /// Parameters with every 𝒞 filled in.
    pub params: FamilyParams,
    pub kind: Option<Kind>,
    pub registry: GeneratorRegistry,
    pub ideal: ConstraintIdeal,
    pub spec: KMatrixSpec,
    /// Odd slots as (row, col, generator mask, coefficient without λ).
    pub odd: Vec<(usize, usize, u64, C64)>,
}

impl BuiltK {
    pub fn eval(&self, l: C64) -> SuperMatrix {
        self.spec.eval(l)
    }
}

impl Layout {
    pub fn new(kind: Kind, profile: GradingProfile) -> Self {
        Self {
            kind,
            profile,
            even: Vec::new(),
            odd: Vec::new(),
            odd_shape: shape(|_| C64::new(0.0, 0.0)),
        }
    }

    /// Registers generators in slot order, fills missing 𝒞's from `seed`,
    /// and derives the constraint ideal.
    pub fn build(
        self,
        coeffs: &mut BTreeMap<String, C64>,
        seed: u64,
        label: String,
    ) -> Result<Built, Error> {
        let mut reg = GeneratorRegistry::new();
        let mut sampler = Sampler::new(seed);
        for s in &self.odd {
            if reg.index_of(&s.label).is_none() {
                reg.register(&s.label)?;
                // draw even when supplied so later labels do not shift
                let v = sampler.param();
                coeffs.entry(s.label.clone()).or_insert(v);
            }
        }
        for k in coeffs.keys() {
            if reg.index_of(k).is_none() {
                return Err(Error::Params(format!(
                    "coefficient {k} names no generator of this family"
                )));
            }
        }
        let odd: Vec<(usize, usize, u64, C64)> = self
            .odd
            .iter()
            .map(|s| {
                (
                    s.a,
                    s.b,
                    reg.mask_of(&s.label).expect("registered"),
                    coeffs[&s.label] * s.ratio,
                )
            })
            .collect();
        let ideal = match self.kind {
            Kind::Trigonometric => pairwise_ideal(&reg),
            Kind::Rational => block_product_ideal(self.profile, &odd),
        };
        let pr = self.profile;
        let even = self.even;
        let odd_e = odd.clone();
        let odd_shape = self.odd_shape;
        let spec =
            KMatrixSpec::new(pr, label, move |l| {
                let w = odd_shape(l);
                let entries =
                    even.iter()
                        .map(|(a, b, f)| (*a, *b, GrassmannElement::scalar(f(l))))
                        .chain(odd_e.iter().map(|&(a, b, mask, c)| {
                            (a, b, GrassmannElement::monomial(mask, c * w))
                        }));
                SuperMatrix::from_written(pr, entries).expect("slots inside the matrix")
            });
        Ok((spec, reg, ideal, odd))
    }
}

/// All pairwise products of the generators.
pub fn pairwise_ideal(reg: &GeneratorRegistry) -> ConstraintIdeal {
    let n = reg.count();
    let mut gens = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            gens.push(GrassmannElement::monomial(
                (1 << i) | (1 << j),
                C64::new(1.0, 0.0),
            ));
        }
    }
    ConstraintIdeal::new(gens)
}

/// Entries of UR·LL and LL·UR built from the coefficient content of the
/// odd blocks.
pub fn block_product_ideal(
    pr: GradingProfile,
    odd: &[(usize, usize, u64, C64)],
) -> ConstraintIdeal {
    let d = pr.dim();
    let mut slot: Vec<GrassmannElement> = vec![GrassmannElement::zero(); d * d];
    for &(a, b, mask, c) in odd {
        slot[a * d + b] = GrassmannElement::monomial(mask, c);
    }
    let at = |a: usize, b: usize| &slot[a * d + b];
    let mut gens = Vec::new();
    let mut sum = |pairs: Vec<(&GrassmannElement, &GrassmannElement)>| {
        let terms: Vec<(u64, C64)> = pairs
            .into_iter()
            .flat_map(|(x, y)| gmul(x, y).terms().to_vec())
            .collect();
        gens.push(GrassmannElement::from_terms(terms));
    };
    for c in 0..pr.m {
        for b in 0..pr.m {
            sum((pr.m..d).map(|s| (at(c, s), at(s, b))).collect());
        }
    }
    for g in pr.m..d {
        for s in pr.m..d {
            sum((0..pr.m).map(|b| (at(g, b), at(b, s))).collect());
        }
    }
    ConstraintIdeal::new(gens)
}

fn check_q(what: &str, q: usize, max: usize) -> Result<(), Error> {
    if q > max {
        return Err(Error::Params(format!(
            "{what} needs 0 ≤ {what} ≤ {max}, got {q}"
        )));
    }
    Ok(())
}

/// Fermionic structure of the rational families with diagonal bosonic
/// part, keyed by (q₁, q₂).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RatClass {
    /// Full odd blocks; W = λ−c₀, 1 or λ+c₀.
    One,
    Two,
    ThreeOne,
    ThreeTwo,
}

pub fn rat_class(pr: GradingProfile, q1: usize, q2: usize) -> RatClass {
    let (m, d) = (pr.m, pr.dim());
    if q1 == q2 || (q1 == 0 && q2 == d) || (q1 == m && q2 == d) {
        RatClass::One
    } else if q2 <= m {
        RatClass::Two
    } else if q1 > m {
        RatClass::ThreeOne
    } else {
        RatClass::ThreeTwo
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrigClass {
    One,
    Two,
    Three,
}

pub fn trig_class(pr: GradingProfile, q: usize) -> TrigClass {
    if q == 0 || q == pr.m || q == pr.dim() {
        TrigClass::One
    } else if q < pr.m {
        TrigClass::Two
    } else {
        TrigClass::Three
    }
}

fn rat_diag(q1: usize, q2: usize, c0: C64, a: usize) -> Shape {
    if (q1..q2).contains(&a) {
        shape(move |l| c0 + l)
    } else {
        shape(move |l| c0 - l)
    }
}

fn trig_diag(q: usize, c0: C64, a: usize) -> Shape {
    if a < q {
        shape(move |l| c0 * l.exp())
    } else {
        shape(move |l| c0 * (-l).exp())
    }
}

/// Upper-right slots, one generator per row, and lower-left slots.
fn push_blocks(lay: &mut Layout, upper: &[(usize, usize)], lower: &[(usize, usize)]) {
    for &(b, s) in upper {
        lay.odd.push(OddSlot {
            a: b,
            b: s,
            label: upper_label(b),
            ratio: one(),
        });
    }
    for &(g, b) in lower {
        lay.odd.push(OddSlot {
            a: g,
            b,
            label: lower_label(g, b),
            ratio: one(),
        });
    }
}

/// Rational fermionic layout with diagonal bosonic part.
pub fn ferm_rat_layout(
    pr: GradingProfile,
    q1: usize,
    q2: usize,
    c0: C64,
    upper_right: bool,
) -> Result<Layout, Error> {
    let (m, d) = (pr.m, pr.dim());
    if m == 0 || pr.n == 0 {
        return Err(Error::Params(
            "fermionic families need m ≥ 1 and n ≥ 1".into(),
        ));
    }
    check_q("q2", q2, d)?;
    if q1 > q2 {
        return Err(Error::Params(format!("need 0 ≤ q1 ≤ q2, got ({q1},{q2})")));
    }
    let class = rat_class(pr, q1, q2);
    if upper_right && !matches!(class, RatClass::ThreeOne | RatClass::ThreeTwo) {
        return Err(Error::Params("upper_right only applies to class 3".into()));
    }
    let mut lay = Layout::new(Kind::Rational, pr);
    for a in 0..d {
        lay.even.push((a, a, rat_diag(q1, q2, c0, a)));
    }
    let plus = |a: usize| (q1..q2).contains(&a);
    let (upper, lower): (Vec<_>, Vec<_>) = if class == RatClass::One {
        (
            (0..m).flat_map(|b| (m..d).map(move |s| (b, s))).collect(),
            (m..d).flat_map(|g| (0..m).map(move |b| (g, b))).collect(),
        )
    } else {
        let with_upper = class == RatClass::Two || upper_right;
        (
            (0..m)
                .flat_map(|b| (m..d).map(move |s| (b, s)))
                .filter(|&(b, s)| with_upper && plus(b) != plus(s))
                .collect(),
            (m..d)
                .flat_map(|g| (0..m).map(move |b| (g, b)))
                .filter(|&(g, b)| plus(g) != plus(b))
                .collect(),
        )
    };
    push_blocks(&mut lay, &upper, &lower);
    lay.odd_shape = if class != RatClass::One || (q1 == m && q2 == d && q1 != q2) {
        shape(|l| l)
    } else if q1 == q2 {
        shape(move |l| l * (l - c0))
    } else {
        shape(move |l| l * (l + c0))
    };
    Ok(lay)
}

/// Trigonometric fermionic layout with diagonal bosonic part.
pub fn ferm_trig_layout(pr: GradingProfile, q: usize, c0: C64) -> Result<Layout, Error> {
    let (m, d) = (pr.m, pr.dim());
    if m == 0 || pr.n == 0 {
        return Err(Error::Params(
            "fermionic families need m ≥ 1 and n ≥ 1".into(),
        ));
    }
    check_q("q", q, d)?;
    let mut lay = Layout::new(Kind::Trigonometric, pr);
    for a in 0..d {
        lay.even.push((a, a, trig_diag(q, c0, a)));
    }
    let full_upper: Vec<(usize, usize)> =
        (0..m).flat_map(|b| (m..d).map(move |s| (b, s))).collect();
    let full_lower: Vec<(usize, usize)> =
        (m..d).flat_map(|g| (0..m).map(move |b| (g, b))).collect();
    let (upper, lower): (Vec<_>, Vec<_>) = match trig_class(pr, q) {
        TrigClass::One => (full_upper, full_lower),
        TrigClass::Two => (
            full_upper.into_iter().filter(|&(b, _)| b < q).collect(),
            full_lower.into_iter().filter(|&(_, b)| b < q).collect(),
        ),
        TrigClass::Three => (
            Vec::new(),
            full_lower.into_iter().filter(|&(g, _)| g >= q).collect(),
        ),
    };
    push_blocks(&mut lay, &upper, &lower);
    lay.odd_shape = if q == 0 && q != m {
        shape(|l| l.sinh() * 2.0 * (-l).exp() * l.cosh())
    } else if q == d && q != m {
        shape(|l| l.sinh() * 2.0 * l.exp() * l.cosh())
    } else {
        shape(|l| l.sinh())
    };
    Ok(lay)
}

/// Bosonic part of the rational nondiagonal families.
fn nd_rat_layout(pr: GradingProfile, pairing: &Pairing, c: [C64; 5], slot: IiSlot) -> Layout {
    let mut lay = Layout::new(Kind::Rational, pr);
    let paired: Vec<usize> = pairing.pairs.iter().flat_map(|&(j, jb)| [j, jb]).collect();
    for a in 0..pr.dim() {
        if !paired.contains(&a) {
            lay.even.push((a, a, shape(move |l| xi(&c, l).minus_gg)));
        }
    }
    for &(j, jb) in &pairing.pairs {
        lay.even.push((jb, jb, shape(move |l| xi(&c, l).minus_ll)));
        lay.even.push((j, jb, shape(move |l| xi(&c, l).x14)));
        match slot {
            IiSlot::Slot => {
                lay.even.push((j, j, shape(move |l| xi(&c, l).plus_ll)));
                lay.even.push((jb, j, shape(move |l| xi(&c, l).x23)));
            }
            IiSlot::Literal => lay.even.push((j, j, shape(move |l| xi(&c, l).x23))),
        }
    }
    lay
}

fn nd_trig_layout(
    pr: GradingProfile,
    side: Side,
    v: Variant,
    pairing: &Pairing,
    c: [C64; 4],
    mode: C4Mode,
    branch: i8,
) -> Layout {
    let [c0, c1, c2, c3] = c;
    let br = if branch < 0 { -1.0 } else { 1.0 };
    let r = br * (c1 * c1 + c2 * c3).sqrt();
    let c4 = match mode {
        C4Mode::C0 => -c0 + br * (c0 * c0 + c2 * c3).sqrt(),
        C4Mode::C1 => -c1 + r,
    };
    let ol = move |l: C64| c0 + (-2.0 * l).exp() * (c1 + c4 * (2.0 * l).sinh());
    let x = move |l: C64| c0 * (4.0 * l).exp() + (2.0 * l).exp() * (c1 + c4 * (2.0 * l).sinh());
    let s = move |l: C64| c0 + c1 * (2.0 * l).cosh() + r * (2.0 * l).sinh();
    let (m, d) = (pr.m, pr.dim());
    let block = if side == Side::Bos { 0..m } else { m..d };
    let paired: Vec<usize> = pairing.pairs.iter().flat_map(|&(j, jb)| [j, jb]).collect();
    let mut lay = Layout::new(Kind::Trigonometric, pr);
    for a in 0..d {
        if paired.contains(&a) {
            continue;
        }
        let f = if !block.contains(&a) {
            if side == Side::Bos {
                shape(ol)
            } else {
                shape(x)
            }
        } else if pairing.reach.contains(&a) {
            shape(s)
        } else if v == Variant::III {
            shape(x)
        } else {
            shape(ol)
        };
        lay.even.push((a, a, f));
    }
    for &(j, jb) in &pairing.pairs {
        lay.even
            .push((j, j, shape(move |l| c0 + c1 * (2.0 * l).exp())));
        lay.even
            .push((jb, jb, shape(move |l| c0 + c1 * (-2.0 * l).exp())));
        lay.even
            .push((j, jb, shape(move |l| c2 * (2.0 * l).sinh())));
        lay.even
            .push((jb, j, shape(move |l| c3 * (2.0 * l).sinh())));
    }
    lay
}

/// The layout of a family before generators are registered, with any
/// user-supplied 𝒞 coefficients.
pub fn family_layout(params: &FamilyParams) -> Result<(Layout, BTreeMap<String, C64>), Error> {
    let pr = params.profile()?;
    let d = pr.dim();
    let empty = || BTreeMap::new();
    Ok(match &params.family {
        Family::Trivial { c0 } => {
            let c0 = *c0;
            let mut lay = Layout::new(Kind::Rational, pr);
            lay.even = (0..d).map(|a| (a, a, shape(move |_| c0))).collect();
            (lay, empty())
        }
        Family::DiagRat { q1, q2, c0 } => {
            check_q("q2", *q2, d)?;
            if q1 > q2 {
                return Err(Error::Params(format!("need 0 ≤ q1 ≤ q2, got ({q1},{q2})")));
            }
            let mut lay = Layout::new(Kind::Rational, pr);
            lay.even = (0..d).map(|a| (a, a, rat_diag(*q1, *q2, *c0, a))).collect();
            (lay, empty())
        }
        Family::DiagTrig { q, c0 } => {
            check_q("q", *q, d)?;
            let mut lay = Layout::new(Kind::Trigonometric, pr);
            lay.even = (0..d).map(|a| (a, a, trig_diag(*q, *c0, a))).collect();
            (lay, empty())
        }
        Family::NdRat {
            variant,
            side,
            bound,
            shift,
            c,
            slot,
        } => {
            check_xi_poles(c)?;
            let p = pairing(pr, *variant, *side, *bound, *shift)?;
            // only the II λ family has two readings
            let slot = if (*variant, *side) == (Variant::II, Side::Bos) {
                *slot
            } else {
                IiSlot::Slot
            };
            (nd_rat_layout(pr, &p, *c, slot), empty())
        }
        Family::NdTrig {
            variant,
            side,
            bound,
            shift,
            c,
            c4_mode,
            branch,
        } => {
            let p = pairing(pr, *variant, *side, *bound, *shift)?;
            (
                nd_trig_layout(pr, *side, *variant, &p, *c, *c4_mode, *branch),
                empty(),
            )
        }
        Family::FermRat {
            q1,
            q2,
            c0,
            upper_right,
            coeffs,
        } => (
            ferm_rat_layout(pr, *q1, *q2, *c0, *upper_right)?,
            coeffs.clone(),
        ),
        Family::FermTrig { q, c0, coeffs } => (ferm_trig_layout(pr, *q, *c0)?, coeffs.clone()),
        Family::FermRatNondiag {
            variant,
            side,
            bound,
            shift,
            c,
            coeffs,
        } => {
            if pr.m == 0 || pr.n == 0 {
                return Err(Error::Params(
                    "fermionic families need m ≥ 1 and n ≥ 1".into(),
                ));
            }
            check_xi_poles(c)?;
            if c[3].norm() < 1e-12 || c[4].norm() < 1e-12 {
                return Err(Error::Singular(
                    "mirror ratios need c₃ ≠ 0 and c₄ ≠ 0".into(),
                ));
            }
            let p = pairing(pr, *variant, *side, *bound, *shift)?;
            let mut lay = nd_rat_layout(pr, &p, *c, IiSlot::Slot);
            let up = c[2] / c[4];
            let low = -c[1] / c[3];
            let (m, d) = (pr.m, pr.dim());
            for &(j, jb) in &p.pairs {
                match side {
                    Side::Bos => {
                        for (row, ratio) in [(j, one()), (jb, up)] {
                            for s in m..d {
                                lay.odd.push(OddSlot {
                                    a: row,
                                    b: s,
                                    label: upper_label(j),
                                    ratio,
                                });
                            }
                        }
                        for g in m..d {
                            for (col, ratio) in [(j, one()), (jb, low)] {
                                lay.odd.push(OddSlot {
                                    a: g,
                                    b: col,
                                    label: lower_label(g, j),
                                    ratio,
                                });
                            }
                        }
                    }
                    Side::Ferm => {
                        for (row, ratio) in [(j, one()), (jb, up)] {
                            for b in 0..m {
                                lay.odd.push(OddSlot {
                                    a: row,
                                    b,
                                    label: lower_label(j, b),
                                    ratio,
                                });
                            }
                        }
                    }
                }
            }
            lay.odd_shape = shape(|l| l);
            (lay, coeffs.clone())
        }
    })
}

/// Constructs the K-matrix of a family. Missing 𝒞 coefficients are drawn
/// from a generator seeded with `seed`, in generator order.
pub fn build_k(params: &FamilyParams, seed: u64) -> Result<BuiltK, Error> {
    let (lay, mut coeffs) = family_layout(params)?;
    let mut params = params.clone();
    let label = params.family.tag().to_string();
    let kind = params.family.kind();
    let (spec, registry, ideal, odd) = lay.build(&mut coeffs, seed, label)?;
    match &mut params.family {
        Family::FermRat { coeffs: c, .. }
        | Family::FermTrig { coeffs: c, .. }
        | Family::FermRatNondiag { coeffs: c, .. } => *c = coeffs,
        _ => {}
    }
    Ok(BuiltK {
        params,
        kind,
        registry,
        ideal,
        spec,
        odd,
    })
}

/// Generic constraint ideal of a family without building its evaluator.
pub fn constraint_ideal(params: &FamilyParams, seed: u64) -> Result<ConstraintIdeal, Error> {
    Ok(build_k(params, seed)?.ideal)
}
