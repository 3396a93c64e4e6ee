//! Complex exterior algebra over at most 64 odd generators.
//!
//! A monomial is a bitmask over generator indices; an element is a sorted
//! list of `(mask, coefficient)` pairs with no zero coefficients.

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::Error;

pub type C64 = Complex64;

/// Terms smaller than this fraction of the element norm are dropped after
/// every arithmetic operation.
pub const PRUNE_REL: f64 = 1e-14;

/// Sign picked up when reordering `θ^a θ^b` into canonical order, or 0 if the
/// monomials share a generator.
#[inline]
pub fn msign(a: u64, b: u64) -> i32 {
    if a & b != 0 {
        return 0;
    }
    // count pairs (i in a, j in b) with i > j
    let mut crossings = 0u32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        crossings += if j == 63 {
            0
        } else {
            (a >> (j + 1)).count_ones()
        };
        bb &= bb - 1;
    }
    if crossings & 1 == 1 {
        -1
    } else {
        1
    }
}

#[inline]
pub fn degree(mask: u64) -> u32 {
    mask.count_ones()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Zero,
    Even,
    Odd,
    Mixed,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct GrassmannElement {
    terms: Vec<(u64, C64)>,
}

impl GrassmannElement {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn scalar(c: C64) -> Self {
        Self::monomial(0, c)
    }

    pub fn one() -> Self {
        Self::scalar(C64::new(1.0, 0.0))
    }

    pub fn monomial(mask: u64, c: C64) -> Self {
        if c == C64::new(0.0, 0.0) {
            Self::zero()
        } else {
            Self {
                terms: vec![(mask, c)],
            }
        }
    }

    /// Builds an element from arbitrary terms, merging repeated masks.
    pub fn from_terms<I: IntoIterator<Item = (u64, C64)>>(terms: I) -> Self {
        let mut v: Vec<(u64, C64)> = terms.into_iter().collect();
        Self::canonical(&mut v);
        Self { terms: v }
    }

    fn canonical(v: &mut Vec<(u64, C64)>) {
        v.sort_unstable_by_key(|t| t.0);
        let mut out: Vec<(u64, C64)> = Vec::with_capacity(v.len());
        for &(k, c) in v.iter() {
            match out.last_mut() {
                Some(last) if last.0 == k => last.1 += c,
                _ => out.push((k, c)),
            }
        }
        let norm = out.iter().map(|t| t.1.norm_sqr()).sum::<f64>().sqrt();
        let cut = PRUNE_REL * norm;
        out.retain(|t| t.1.norm() > cut && t.1 != C64::new(0.0, 0.0));
        *v = out;
    }

    pub fn terms(&self) -> &[(u64, C64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the empty monomial.
    pub fn scalar_part(&self) -> C64 {
        match self.terms.first() {
            Some(&(0, c)) => c,
            _ => C64::new(0.0, 0.0),
        }
    }

    pub fn coeff(&self, mask: u64) -> C64 {
        match self.terms.binary_search_by_key(&mask, |t| t.0) {
            Ok(i) => self.terms[i].1,
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.iter().map(|t| degree(t.0)).max().unwrap_or(0)
    }

    pub fn support(&self) -> u64 {
        self.terms.iter().fold(0, |acc, t| acc | t.0)
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|&(k, c)| (k, -c)).collect(),
        }
    }

    /// Drops every term below `rel` times the element norm.
    pub fn pruned(&self, rel: f64) -> Self {
        let cut = rel * gnorm(self);
        Self {
            terms: self
                .terms
                .iter()
                .copied()
                .filter(|t| t.1.norm() > cut)
                .collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|&(k, c)| {
                    let gens: Vec<u32> = (0..64).filter(|i| k >> i & 1 == 1).collect();
                    json!({ "gens": gens, "re": c.re, "im": c.im })
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self, Error> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Format("element must be a list of terms".into()))?;
        let mut terms = Vec::with_capacity(arr.len());
        for t in arr {
            let gens = t["gens"]
                .as_array()
                .ok_or_else(|| Error::Format("term without \"gens\"".into()))?;
            let mut mask = 0u64;
            for g in gens {
                let i = g
                    .as_u64()
                    .filter(|&i| i < 64)
                    .ok_or_else(|| Error::Format("generator index out of range".into()))?;
                if mask >> i & 1 == 1 {
                    return Err(Error::Format("repeated generator in a term".into()));
                }
                mask |= 1 << i;
            }
            let re = t["re"]
                .as_f64()
                .ok_or_else(|| Error::Format("term without \"re\"".into()))?;
            let im = t["im"]
                .as_f64()
                .ok_or_else(|| Error::Format("term without \"im\"".into()))?;
            terms.push((mask, C64::new(re, im)));
        }
        Ok(Self::from_terms(terms))
    }
}

impl fmt::Display for GrassmannElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, &(k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.6}{:+.6}i)", c.re, c.im)?;
            for g in (0..64).filter(|g| k >> g & 1 == 1) {
                write!(f, "·θ{g}")?;
            }
        }
        Ok(())
    }
}

pub fn gmul(a: &GrassmannElement, b: &GrassmannElement) -> GrassmannElement {
    let mut out = Vec::with_capacity(a.terms.len() * b.terms.len());
    for &(ka, ca) in &a.terms {
        for &(kb, cb) in &b.terms {
            let s = msign(ka, kb);
            if s != 0 {
                out.push((ka | kb, ca * cb * s as f64));
            }
        }
    }
    GrassmannElement::from_terms(out)
}

pub fn gadd(a: &GrassmannElement, b: &GrassmannElement) -> GrassmannElement {
    GrassmannElement::from_terms(a.terms.iter().chain(b.terms.iter()).copied())
}

pub fn gsub(a: &GrassmannElement, b: &GrassmannElement) -> GrassmannElement {
    GrassmannElement::from_terms(
        a.terms
            .iter()
            .copied()
            .chain(b.terms.iter().map(|&(k, c)| (k, -c))),
    )
}

pub fn gscale(a: &GrassmannElement, c: C64) -> GrassmannElement {
    GrassmannElement::from_terms(a.terms.iter().map(|&(k, x)| (k, x * c)))
}

pub fn gparity(a: &GrassmannElement) -> Parity {
    let mut even = false;
    let mut odd = false;
    for &(k, _) in &a.terms {
        if degree(k).is_multiple_of(2) {
            even = true;
        } else {
            odd = true;
        }
    }
    match (even, odd) {
        (false, false) => Parity::Zero,
        (true, false) => Parity::Even,
        (false, true) => Parity::Odd,
        (true, true) => Parity::Mixed,
    }
}

pub fn gnorm(a: &GrassmannElement) -> f64 {
    // fold from +0: an empty float sum is −0
    a.terms
        .iter()
        .map(|t| t.1.norm_sqr())
        .fold(0.0, |x, y| x + y)
        .sqrt()
}

/// Ordered list of generator labels. Write once, then read only.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GeneratorRegistry {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl GeneratorRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, label: &str) -> Result<usize, Error> {
        if self.index.contains_key(label) {
            return Err(Error::Registry(format!(
                "duplicate generator label {label}"
            )));
        }
        if self.labels.len() >= 64 {
            return Err(Error::Registry("more than 64 generators".into()));
        }
        let i = self.labels.len();
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), i);
        Ok(i)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn label(&self, i: usize) -> Option<&str> {
        self.labels.get(i).map(|s| s.as_str())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn count(&self) -> usize {
        self.labels.len()
    }

    pub fn mask_of(&self, label: &str) -> Result<u64, Error> {
        self.index_of(label)
            .map(|i| 1u64 << i)
            .ok_or_else(|| Error::Registry(format!("unregistered generator {label}")))
    }

    /// Human-readable form of a monomial, e.g. `G_1·H_2_1`.
    pub fn describe(&self, mask: u64) -> String {
        if mask == 0 {
            return "1".into();
        }
        (0..64)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.label(i).map(str::to_string).unwrap_or(format!("θ{i}")))
            .collect::<Vec<_>>()
            .join("·")
    }
}

/// Degree-one monomial of a registered generator.
pub fn gen(registry: &GeneratorRegistry, label: &str) -> Result<GrassmannElement, Error> {
    Ok(GrassmannElement::monomial(
        registry.mask_of(label)?,
        C64::new(1.0, 0.0),
    ))
}
