//! Conjugate and generalized conjugate indices (1-based labels), and the
//! index pairs of the nondiagonal families.

use serde::{Deserialize, Serialize};

use crate::supermatrix::GradingProfile;
use crate::Error;

/// ā = m+1−a on the bosonic block, ρ̄ = 2m+n+1−ρ on the fermionic one.
pub fn conj_index(pr: GradingProfile, a: usize) -> Result<usize, Error> {
    let (m, n) = (pr.m, pr.n);
    match a {
        a if (1..=m).contains(&a) => Ok(m + 1 - a),
        a if (m + 1..=m + n).contains(&a) => Ok(2 * m + n + 1 - a),
        _ => Err(Error::Index(format!("index {a} outside 1..={}", m + n))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Minus,
    Plus,
}

/// a_ℓ^∓ = m+1∓ℓ−a and ρ_ξ^∓ = 2m+n+1∓ξ−ρ, or `None` outside their domain.
pub fn gen_conj_index(pr: GradingProfile, a: usize, shift: usize, sign: Sign) -> Option<usize> {
    let (m, n) = (pr.m, pr.n);
    if (1..=m).contains(&a) {
        match sign {
            Sign::Minus if a + shift <= m => Some(m + 1 - shift - a),
            Sign::Plus if a > shift => Some(m + 1 + shift - a),
            _ => None,
        }
    } else if (m + 1..=m + n).contains(&a) {
        match sign {
            Sign::Minus if a + shift <= m + n => Some(2 * m + n + 1 - shift - a),
            Sign::Plus if a > m + shift => Some(2 * m + n + 1 + shift - a),
            _ => None,
        }
    } else {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    I,
    II,
    III,
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "I" | "1" => Ok(Variant::I),
            "II" | "2" => Ok(Variant::II),
            "III" | "3" => Ok(Variant::III),
            _ => Err(Error::Params(format!("unknown variant {s}"))),
        }
    }
}

/// Block carrying the antidiagonal: bosonic (λ families) or fermionic (γ).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Bos,
    Ferm,
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "bos" | "lambda" | "λ" => Ok(Side::Bos),
            "ferm" | "gamma" | "γ" => Ok(Side::Ferm),
            _ => Err(Error::Params(format!("unknown side {s}"))),
        }
    }
}

/// Antidiagonal pairs (j, j̄) with j < j̄, and the rows the antidiagonal
/// reaches, all 0-based.
#[derive(Clone, Debug, PartialEq)]
pub struct Pairing {
    pub pairs: Vec<(usize, usize)>,
    pub reach: std::ops::Range<usize>,
}

/// Inclusive range of the bound (L or Λ) for a family, or `None` when the
/// shift is inadmissible.
pub fn bound_range(
    pr: GradingProfile,
    v: Variant,
    side: Side,
    shift: usize,
) -> Option<(usize, usize)> {
    let (m, n) = (pr.m, pr.n);
    let r = match (side, v) {
        (Side::Bos, Variant::I) if shift == 0 => (1, m / 2),
        (Side::Bos, Variant::II) if shift >= 1 && shift < m => (1, (m - shift) / 2),
        (Side::Bos, Variant::III) if shift >= 1 && shift < m => (shift + 1, (m + shift) / 2),
        (Side::Ferm, Variant::I) if shift == 0 => (m + 1, m + n / 2),
        (Side::Ferm, Variant::II) if shift >= 1 && shift < n => (m + 1, m + (n - shift) / 2),
        (Side::Ferm, Variant::III) if shift >= 1 && shift < n => {
            (m + shift + 1, m + (n + shift) / 2)
        }
        _ => return None,
    };
    (r.0 <= r.1).then_some(r)
}

pub fn pairing(
    pr: GradingProfile,
    v: Variant,
    side: Side,
    bound: usize,
    shift: usize,
) -> Result<Pairing, Error> {
    let (m, n) = (pr.m, pr.n);
    let (lo, hi) = bound_range(pr, v, side, shift).ok_or_else(|| {
        Error::Params(format!(
            "{v:?} {side:?} family has no admissible bound for shift {shift} on ({m},{n})"
        ))
    })?;
    if bound < lo || bound > hi {
        return Err(Error::Params(format!(
            "{v:?} {side:?} family needs {lo} ≤ bound ≤ {hi}, got {bound}"
        )));
    }
    let (first, sign) = match (side, v) {
        (Side::Bos, Variant::III) => (shift + 1, Sign::Plus),
        (Side::Bos, _) => (1, Sign::Minus),
        (Side::Ferm, Variant::III) => (m + shift + 1, Sign::Plus),
        (Side::Ferm, _) => (m + 1, Sign::Minus),
    };
    let mut pairs = Vec::new();
    for j in first..=bound {
        let jb = gen_conj_index(pr, j, shift, sign).expect("bound range keeps indices in domain");
        debug_assert!(j < jb);
        pairs.push((j - 1, jb - 1));
    }
    let reach = match (side, v) {
        (Side::Bos, Variant::I) => 0..m,
        (Side::Bos, Variant::II) => 0..m - shift,
        (Side::Bos, Variant::III) => shift..m,
        (Side::Ferm, Variant::I) => m..m + n,
        (Side::Ferm, Variant::II) => m..m + n - shift,
        (Side::Ferm, Variant::III) => m + shift..m + n,
    };
    Ok(Pairing { pairs, reach })
}

/// Every admissible (variant, side, bound, shift) on a grading.
pub fn admissible(pr: GradingProfile) -> Vec<(Variant, Side, usize, usize)> {
    let mut out = Vec::new();
    for side in [Side::Bos, Side::Ferm] {
        let block = if side == Side::Bos { pr.m } else { pr.n };
        for v in [Variant::I, Variant::II, Variant::III] {
            let shifts: Vec<usize> = if v == Variant::I {
                vec![0]
            } else {
                (1..block.max(1)).collect()
            };
            for s in shifts {
                if let Some((lo, hi)) = bound_range(pr, v, side, s) {
                    for b in lo..=hi {
                        out.push((v, side, b, s));
                    }
                }
            }
        }
    }
    out
}
