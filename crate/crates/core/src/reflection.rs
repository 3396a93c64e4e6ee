//! Graded reflection algebra, its second (K⁺) form, and the per-sector
//! regrouping of the reflection equation.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::grassmann::{gmul, gnorm, gparity, gsub, GrassmannElement, Parity, C64};
use crate::rmatrix::{crossing_matrix, diagonal_inverse, eval_r, r21, RMatrixSpec};
use crate::solutions::ConstraintIdeal;
use crate::supermatrix::{GradingProfile, SuperMatrix};
use crate::Error;

type Eval = dyn Fn(C64) -> SuperMatrix + Send + Sync;

/// λ ↦ K(λ), an order-1 Grassmann-valued matrix.
#[derive(Clone)]
pub struct KMatrixSpec {
    pub profile: GradingProfile,
    pub label: String,
    eval: Arc<Eval>,
}

impl fmt::Debug for KMatrixSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "KMatrixSpec({}, m={}, n={})",
            self.label, self.profile.m, self.profile.n
        )
    }
}

impl KMatrixSpec {
    pub fn new(
        profile: GradingProfile,
        label: impl Into<String>,
        eval: impl Fn(C64) -> SuperMatrix + Send + Sync + 'static,
    ) -> Self {
        Self {
            profile,
            label: label.into(),
            eval: Arc::new(eval),
        }
    }

    pub fn eval(&self, l: C64) -> SuperMatrix {
        (self.eval)(l)
    }

    /// Checks that every entry has the parity of its slot.
    pub fn grading_violations(&self, l: C64) -> Vec<(usize, usize)> {
        let k = self.eval(l);
        let pr = self.profile;
        k.entries()
            .filter(|(a, b, e)| {
                let want = if pr.p(*a) ^ pr.p(*b) == 0 {
                    Parity::Even
                } else {
                    Parity::Odd
                };
                let got = gparity(e);
                got != Parity::Zero && got != want
            })
            .map(|(a, b, _)| (a, b))
            .collect()
    }
}

/// Unnormalised residual matrix together with its scale.
#[derive(Clone, Debug)]
pub struct Residual {
    pub matrix: SuperMatrix,
    pub scale: f64,
}

impl Residual {
    pub fn relative(&self) -> f64 {
        self.matrix.mnorm() / self.scale
    }

    pub fn reduced(&self, ideal: &ConstraintIdeal) -> Residual {
        Residual {
            matrix: ideal.reduce_matrix(&self.matrix),
            scale: self.scale,
        }
    }
}

fn check_profiles(r: &RMatrixSpec, k: &KMatrixSpec) -> Result<(), Error> {
    if r.profile != k.profile {
        return Err(Error::Profile(format!(
            "R on ({},{}) with K on ({},{})",
            r.profile.m, r.profile.n, k.profile.m, k.profile.n
        )));
    }
    Ok(())
}

/// R₁₂(λ−μ)K₁(λ)R₂₁(λ+μ)K₂(μ) − K₂(μ)R₁₂(λ+μ)K₁(λ)R₂₁(λ−μ).
pub fn reflection_residual(
    r: &RMatrixSpec,
    k: &KMatrixSpec,
    l: C64,
    m: C64,
) -> Result<Residual, Error> {
    check_profiles(r, k)?;
    let one = SuperMatrix::identity(k.profile, 1);
    let (kl, km) = (k.eval(l), k.eval(m));
    let k1 = kl.gkron(&one)?;
    let k2 = one.gkron(&km)?;
    let rm = eval_r(r, l - m);
    let rp = eval_r(r, l + m);
    let lhs = SuperMatrix::chain(&[&rm, &k1, &r21(&rp), &k2])?;
    let rhs = SuperMatrix::chain(&[&k2, &rp, &k1, &r21(&rm)])?;
    let scale = rm.mnorm() * kl.mnorm() * rp.mnorm() * km.mnorm();
    Ok(Residual {
        matrix: lhs.msub(&rhs)?,
        scale: nonzero(scale),
    })
}

fn nonzero(s: f64) -> f64 {
    if s > 0.0 {
        s
    } else {
        1.0
    }
}

/// K⁺(λ) = K⁻(−λ−s)·M with the crossing shift s and matrix M of `r`.
pub fn k_plus(k_minus: &KMatrixSpec, r: &RMatrixSpec) -> KMatrixSpec {
    k_plus_with(k_minus, r, crossing_matrix(r))
}

/// As [`k_plus`] but with an explicit right factor in place of M.
pub fn k_plus_with(k_minus: &KMatrixSpec, r: &RMatrixSpec, m: SuperMatrix) -> KMatrixSpec {
    let shift = r.crossing_shift();
    let km = k_minus.clone();
    KMatrixSpec::new(k_minus.profile, format!("{}+", k_minus.label), move |l| {
        km.eval(-l - shift).matmul(&m).expect("same grading")
    })
}

/// R₁₂(−λ+μ)K₁⁺(λ)M₁⁻¹R₂₁(−λ−μ−2s)M₁K₂⁺(μ)
///   − K₂⁺(μ)M₁R₁₂(−λ−μ−2s)M₁⁻¹K₁⁺(λ)R₂₁(−λ+μ).
pub fn second_reflection_residual(
    r: &RMatrixSpec,
    kp: &KMatrixSpec,
    l: C64,
    m: C64,
) -> Result<Residual, Error> {
    check_profiles(r, kp)?;
    let one = SuperMatrix::identity(kp.profile, 1);
    let s2 = r.crossing_shift() * 2.0;
    let cm = crossing_matrix(r);
    let m1 = cm.gkron(&one)?;
    let m1i = diagonal_inverse(&cm)?.gkron(&one)?;
    let (kl, km) = (kp.eval(l), kp.eval(m));
    let k1 = kl.gkron(&one)?;
    let k2 = one.gkron(&km)?;
    let ra = eval_r(r, -l + m);
    let rb = eval_r(r, -l - m - s2);
    let lhs = SuperMatrix::chain(&[&ra, &k1, &m1i, &r21(&rb), &m1, &k2])?;
    let rhs = SuperMatrix::chain(&[&k2, &m1, &rb, &m1i, &k1, &r21(&ra)])?;
    let scale = ra.mnorm() * kl.mnorm() * rb.mnorm() * km.mnorm();
    Ok(Residual {
        matrix: lhs.msub(&rhs)?,
        scale: nonzero(scale),
    })
}

/// Parity pattern (p(A), p(B), p(C), p(D)) of a residual entry
/// ((A,C),(B,D)), written with λ for bosonic and γ for fermionic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SectorTag(pub [u8; 4]);

impl SectorTag {
    pub fn all() -> Vec<SectorTag> {
        (0..16u8)
            .map(|i| SectorTag([i >> 3 & 1, i >> 2 & 1, i >> 1 & 1, i & 1]))
            .collect()
    }

    /// Number of fermionic letters; odd counts are the mixed h·χ sectors.
    pub fn fermionic_letters(&self) -> u8 {
        self.0.iter().sum()
    }
}

impl fmt::Display for SectorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            write!(f, "{}", if b == 0 { 'λ' } else { 'γ' })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for SectorTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let v: Vec<u8> = s
            .chars()
            .map(|c| match c {
                'λ' | 'l' | 'b' => Ok(0),
                'γ' | 'g' | 'f' => Ok(1),
                _ => Err(Error::Params(format!("bad sector letter {c:?} in {s}"))),
            })
            .collect::<Result<_, _>>()?;
        if v.len() != 4 {
            return Err(Error::Params(format!("sector tag {s} needs four letters")));
        }
        Ok(SectorTag([v[0], v[1], v[2], v[3]]))
    }
}

/// A sector together with its free indices (A, B, C, D), 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SectorId {
    pub tag: SectorTag,
    pub indices: [usize; 4],
}

/// Everything the component formula needs at one (λ, μ).
pub struct SectorData {
    profile: GradingProfile,
    kl: SuperMatrix,
    km: SuperMatrix,
    rm: Vec<C64>,
    rp: Vec<C64>,
    r21m: Vec<C64>,
    r21p: Vec<C64>,
    pub scale: f64,
}

fn dense(x: &SuperMatrix) -> Vec<C64> {
    x.entries().map(|(_, _, e)| e.scalar_part()).collect()
}

impl SectorData {
    pub fn new(r: &RMatrixSpec, k: &KMatrixSpec, l: C64, m: C64) -> Result<Self, Error> {
        check_profiles(r, k)?;
        let rm = eval_r(r, l - m);
        let rp = eval_r(r, l + m);
        let kl = k.eval(l);
        let km = k.eval(m);
        let scale = nonzero(rm.mnorm() * kl.mnorm() * rp.mnorm() * km.mnorm());
        Ok(Self {
            profile: k.profile,
            r21m: dense(&r21(&rm)),
            r21p: dense(&r21(&rp)),
            rm: dense(&rm),
            rp: dense(&rp),
            kl,
            km,
            scale,
        })
    }

    /// Residual entry ((A,C),(B,D)) summed index by index, without building
    /// the embedded K₁, K₂.
    pub fn entry(&self, a: usize, b: usize, c: usize, d: usize) -> GrassmannElement {
        let pr = self.profile;
        let n = pr.dim();
        let nn = n * n;
        let sg = |e: u8| if e & 1 == 1 { -1.0 } else { 1.0 };
        let mut terms: Vec<(u64, C64)> = Vec::new();
        let mut push = |w: C64, x: &GrassmannElement, y: &GrassmannElement| {
            if w.norm() == 0.0 || x.is_zero() || y.is_zero() {
                return;
            }
            for &(k, c) in gmul(x, y).terms() {
                terms.push((k, w * c));
            }
        };
        // R⁻ K^λ₁ R₂₁⁺ K^μ₂
        for x in 0..n {
            for xp in 0..n {
                let kx = self.kl.get(x, xp);
                if kx.is_zero() {
                    continue;
                }
                for v in 0..n {
                    let mut w = C64::new(0.0, 0.0);
                    for y in 0..n {
                        w += self.rm[(a * n + c) * nn + x * n + y]
                            * self.r21p[(xp * n + y) * nn + b * n + v];
                    }
                    let s = sg(pr.p(b) & (pr.p(v) ^ pr.p(d)));
                    push(w * s, kx, self.km.get(v, d));
                }
            }
        }
        // K^μ₂ R⁺ K^λ₁ R₂₁⁻
        for cp in 0..n {
            let kc = self.km.get(c, cp);
            if kc.is_zero() {
                continue;
            }
            let s = sg(pr.p(a) & (pr.p(c) ^ pr.p(cp)));
            for x in 0..n {
                for xp in 0..n {
                    let mut w = C64::new(0.0, 0.0);
                    for y in 0..n {
                        w += self.rp[(a * n + cp) * nn + x * n + y]
                            * self.r21m[(xp * n + y) * nn + b * n + d];
                    }
                    push(-w * s, kc, self.kl.get(x, xp));
                }
            }
        }
        GrassmannElement::from_terms(terms)
    }
}

/// Residual of one sector at its free indices.
pub fn sector_residual(sector: SectorId, data: &SectorData) -> Result<GrassmannElement, Error> {
    let pr = data.profile;
    let [a, b, c, d] = sector.indices;
    if [a, b, c, d].iter().any(|&i| i >= pr.dim()) {
        return Err(Error::Index(format!(
            "sector {} indices {:?}",
            sector.tag, sector.indices
        )));
    }
    let got = [pr.p(a), pr.p(b), pr.p(c), pr.p(d)];
    if got != sector.tag.0 {
        return Err(Error::Params(format!(
            "indices {:?} do not belong to sector {}",
            sector.indices, sector.tag
        )));
    }
    Ok(data.entry(a, b, c, d))
}

#[derive(Clone, Debug, Serialize)]
pub struct SectorSweep {
    /// Worst relative residual per sector tag.
    pub per_sector: BTreeMap<String, f64>,
    /// Worst relative difference between the reassembled sectors and the
    /// matrix-product residual.
    pub reassembly: f64,
}

/// Evaluates every sector entry, reduces it modulo `ideal` if given, and
/// compares the reassembled matrix with [`reflection_residual`].
pub fn full_sector_sweep(
    k: &KMatrixSpec,
    r: &RMatrixSpec,
    l: C64,
    m: C64,
    ideal: Option<&ConstraintIdeal>,
) -> Result<SectorSweep, Error> {
    let data = SectorData::new(r, k, l, m)?;
    let full = reflection_residual(r, k, l, m)?;
    let pr = k.profile;
    let n = pr.dim();
    let mut per: BTreeMap<String, f64> = SectorTag::all()
        .into_iter()
        .map(|t| (t.to_string(), 0.0))
        .collect();
    let mut reassembly = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let tag = SectorTag([pr.p(a), pr.p(b), pr.p(c), pr.p(d)]);
                    let e = data.entry(a, b, c, d);
                    let diff = gsub(&e, full.matrix.get(a * n + c, b * n + d));
                    reassembly = reassembly.max(gnorm(&diff) / data.scale);
                    let e = match ideal {
                        Some(id) => id.reduce(&e),
                        None => e,
                    };
                    let slot = per.get_mut(&tag.to_string()).expect("all tags present");
                    *slot = slot.max(gnorm(&e) / data.scale);
                }
            }
        }
    }
    Ok(SectorSweep {
        per_sector: per,
        reassembly,
    })
}

/// Block-restricted commutator Σ_d (h^μ_dj h^λ_kd − h^λ_dj h^μ_kd) over the
/// bosonic (`fermionic = false`) or fermionic diagonal block, for purely
/// even K. Returns the worst relative value.
pub fn simplified_block_residual(
    k: &KMatrixSpec,
    l: C64,
    m: C64,
    fermionic: bool,
) -> Result<f64, Error> {
    let pr = k.profile;
    let (kl, km) = (k.eval(l), k.eval(m));
    if !kl.is_scalar() || !km.is_scalar() {
        return Err(Error::Params(
            "simplified conditions need a K without Grassmann parts".into(),
        ));
    }
    let block: Vec<usize> = (0..pr.dim())
        .filter(|&i| (pr.p(i) == 1) == fermionic)
        .collect();
    let h = |x: &SuperMatrix, i: usize, j: usize| x.get(i, j).scalar_part();
    let mut worst = 0.0f64;
    for &kk in &block {
        for &j in &block {
            let mut s = C64::new(0.0, 0.0);
            for &d in &block {
                s += h(&km, d, j) * h(&kl, kk, d) - h(&kl, d, j) * h(&km, kk, d);
            }
            worst = worst.max(s.norm());
        }
    }
    Ok(worst / nonzero(kl.mnorm() * km.mnorm()))
}
