//! Z2-graded matrices with Grassmann-valued entries.
//!
//! Composite indices are row-major: on an order-k space the basis vector
//! (A1,...,Ak) sits at A1·d^(k-1) + ... + Ak with d = m+n.
//!
//! Entries are kept in the convention where matrix products are plain
//! row-by-column products. An entry h of Grassmann degree δ written at slot
//! (A,B) is stored as (−1)^(δ·p(A)) h; [`SuperMatrix::from_written`] does the
//! conversion.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::grassmann::{degree, gnorm, msign, GrassmannElement, C64};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct GradingProfile {
    pub m: usize,
    pub n: usize,
}

impl GradingProfile {
    pub fn new(m: usize, n: usize) -> Result<Self, Error> {
        if m + n == 0 {
            return Err(Error::Params("m+n must be at least 1".into()));
        }
        Ok(Self { m, n })
    }

    pub fn dim(&self) -> usize {
        self.m + self.n
    }

    /// Parity of a 0-based index.
    #[inline]
    pub fn p(&self, a: usize) -> u8 {
        u8::from(a >= self.m)
    }

    pub fn delta(&self) -> i64 {
        self.m as i64 - self.n as i64
    }

    /// Parity of a composite index on the order-k space.
    pub fn composite_parity(&self, idx: usize, order: u32) -> u8 {
        let d = self.dim();
        let mut i = idx;
        let mut s = 0;
        for _ in 0..order {
            s ^= self.p(i % d);
            i /= d;
        }
        s
    }

    fn parities(&self, order: u32) -> Vec<u8> {
        let size = self.dim().pow(order);
        (0..size).map(|i| self.composite_parity(i, order)).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuperMatrix {
    profile: GradingProfile,
    order: u32,
    size: usize,
    entries: Vec<GrassmannElement>,
}

#[inline]
fn sgn(e: u8) -> f64 {
    if e & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

impl SuperMatrix {
    pub fn zeros(profile: GradingProfile, order: u32) -> Self {
        let size = profile.dim().pow(order);
        Self {
            profile,
            order,
            size,
            entries: vec![GrassmannElement::zero(); size * size],
        }
    }

    pub fn identity(profile: GradingProfile, order: u32) -> Self {
        let mut x = Self::zeros(profile, order);
        for i in 0..x.size {
            x.entries[i * x.size + i] = GrassmannElement::one();
        }
        x
    }

    /// Order-1 diagonal matrix with scalar entries.
    pub fn diagonal(profile: GradingProfile, values: &[C64]) -> Result<Self, Error> {
        if values.len() != profile.dim() {
            return Err(Error::Index(format!(
                "{} diagonal values for dimension {}",
                values.len(),
                profile.dim()
            )));
        }
        let mut x = Self::zeros(profile, 1);
        for (i, &v) in values.iter().enumerate() {
            x.set(i, i, GrassmannElement::scalar(v));
        }
        Ok(x)
    }

    /// Scalar-valued matrix from a dense row-major array.
    pub fn from_scalars(profile: GradingProfile, order: u32, data: &[C64]) -> Self {
        let mut x = Self::zeros(profile, order);
        assert_eq!(data.len(), x.size * x.size);
        for (e, &c) in x.entries.iter_mut().zip(data) {
            *e = GrassmannElement::scalar(c);
        }
        x
    }

    /// Order-1 matrix from entries in written form, converting odd
    /// coefficients in fermionic rows to the stored sign.
    pub fn from_written(
        profile: GradingProfile,
        entries: impl IntoIterator<Item = (usize, usize, GrassmannElement)>,
    ) -> Result<Self, Error> {
        let mut x = Self::zeros(profile, 1);
        let d = profile.dim();
        let mut acc: Vec<Vec<(u64, C64)>> = vec![Vec::new(); d * d];
        for (a, b, h) in entries {
            if a >= d || b >= d {
                return Err(Error::Index(format!(
                    "slot ({a},{b}) outside dimension {d}"
                )));
            }
            for &(k, c) in h.terms() {
                let s = sgn(degree(k) as u8 & profile.p(a));
                acc[a * d + b].push((k, c * s));
            }
        }
        for (e, t) in x.entries.iter_mut().zip(acc) {
            *e = GrassmannElement::from_terms(t);
        }
        Ok(x)
    }

    /// Inverse of [`SuperMatrix::from_written`] for order-1 matrices.
    pub fn written(&self, a: usize, b: usize) -> GrassmannElement {
        let pa = self.profile.p(a);
        GrassmannElement::from_terms(
            self.get(a, b)
                .terms()
                .iter()
                .map(|&(k, c)| (k, c * sgn(degree(k) as u8 & pa))),
        )
    }

    /// Elementary matrix e_AB with 1-based labels.
    pub fn unit(profile: GradingProfile, a: usize, b: usize) -> Result<Self, Error> {
        let d = profile.dim();
        if a == 0 || b == 0 || a > d || b > d {
            return Err(Error::Index(format!("unit({a},{b}) with m+n={d}")));
        }
        let mut x = Self::zeros(profile, 1);
        x.set(a - 1, b - 1, GrassmannElement::one());
        Ok(x)
    }

    pub fn profile(&self) -> GradingProfile {
        self.profile
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, r: usize, c: usize) -> &GrassmannElement {
        &self.entries[r * self.size + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: GrassmannElement) {
        self.entries[r * self.size + c] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &GrassmannElement)> {
        let s = self.size;
        self.entries
            .iter()
            .enumerate()
            .map(move |(i, e)| (i / s, i % s, e))
    }

    pub fn map(&self, f: impl Fn(&GrassmannElement) -> GrassmannElement) -> Self {
        Self {
            profile: self.profile,
            order: self.order,
            size: self.size,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn is_scalar(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.terms().iter().all(|t| t.0 == 0))
    }

    fn check_same(&self, o: &Self, what: &str) -> Result<(), Error> {
        if self.profile != o.profile || self.order != o.order {
            return Err(Error::Profile(format!(
                "{what}: ({},{}) order {} vs ({},{}) order {}",
                self.profile.m, self.profile.n, self.order, o.profile.m, o.profile.n, o.order
            )));
        }
        Ok(())
    }

    /// Splits into one dense complex matrix per monomial.
    fn slices(&self) -> BTreeMap<u64, Vec<C64>> {
        let mut out: BTreeMap<u64, Vec<C64>> = BTreeMap::new();
        let n2 = self.size * self.size;
        for (i, e) in self.entries.iter().enumerate() {
            for &(k, c) in e.terms() {
                out.entry(k).or_insert_with(|| vec![C64::new(0.0, 0.0); n2])[i] = c;
            }
        }
        out
    }

    fn from_slices(
        profile: GradingProfile,
        order: u32,
        size: usize,
        s: BTreeMap<u64, Vec<C64>>,
    ) -> Self {
        let mut terms: Vec<Vec<(u64, C64)>> = vec![Vec::new(); size * size];
        for (k, m) in s {
            for (i, c) in m.into_iter().enumerate() {
                if c != C64::new(0.0, 0.0) {
                    terms[i].push((k, c));
                }
            }
        }
        Self {
            profile,
            order,
            size,
            entries: terms
                .into_iter()
                .map(GrassmannElement::from_terms)
                .collect(),
        }
    }

    pub fn matmul(&self, o: &Self) -> Result<Self, Error> {
        self.check_same(o, "matmul")?;
        let n = self.size;
        let a = self.slices();
        let b = o.slices();
        let mut acc: BTreeMap<u64, Vec<C64>> = BTreeMap::new();
        for (&ka, xa) in &a {
            for (&kb, yb) in &b {
                let s = msign(ka, kb);
                if s == 0 {
                    continue;
                }
                let out = acc
                    .entry(ka | kb)
                    .or_insert_with(|| vec![C64::new(0.0, 0.0); n * n]);
                let s = s as f64;
                for i in 0..n {
                    for k in 0..n {
                        let x = xa[i * n + k];
                        if x.re == 0.0 && x.im == 0.0 {
                            continue;
                        }
                        let x = x * s;
                        let row = &yb[k * n..(k + 1) * n];
                        let dst = &mut out[i * n..(i + 1) * n];
                        for (d, y) in dst.iter_mut().zip(row) {
                            *d += x * y;
                        }
                    }
                }
            }
        }
        Ok(Self::from_slices(self.profile, self.order, n, acc))
    }

    /// Product of a chain of matrices, left to right.
    pub fn chain(ms: &[&Self]) -> Result<Self, Error> {
        let mut it = ms.iter();
        let mut acc = (*it.next().expect("empty product")).clone();
        for m in it {
            acc = acc.matmul(m)?;
        }
        Ok(acc)
    }

    fn zip(&self, o: &Self, f: impl Fn(C64) -> C64) -> Self {
        let entries = self
            .entries
            .iter()
            .zip(&o.entries)
            .map(|(x, y)| {
                GrassmannElement::from_terms(
                    x.terms()
                        .iter()
                        .copied()
                        .chain(y.terms().iter().map(|&(k, c)| (k, f(c)))),
                )
            })
            .collect();
        Self {
            profile: self.profile,
            order: self.order,
            size: self.size,
            entries,
        }
    }

    pub fn msub(&self, o: &Self) -> Result<Self, Error> {
        self.check_same(o, "msub")?;
        Ok(self.zip(o, |c| -c))
    }

    pub fn madd(&self, o: &Self) -> Result<Self, Error> {
        self.check_same(o, "madd")?;
        Ok(self.zip(o, |c| c))
    }

    pub fn mscale(&self, s: C64) -> Self {
        self.map(|e| crate::grassmann::gscale(e, s))
    }

    /// Largest entry norm.
    pub fn mnorm(&self) -> f64 {
        self.entries.iter().map(gnorm).fold(0.0, f64::max)
    }

    /// Graded tensor product; orders add.
    pub fn gkron(&self, o: &Self) -> Result<Self, Error> {
        if self.profile != o.profile {
            return Err(Error::Profile("gkron factors on different gradings".into()));
        }
        let (nx, ny) = (self.size, o.size);
        let n = nx * ny;
        let px = self.profile.parities(self.order);
        let py = o.profile.parities(o.order);
        let mut out = Self::zeros(self.profile, self.order + o.order);
        for a in 0..nx {
            for b in 0..nx {
                let x = self.get(a, b);
                if x.is_zero() {
                    continue;
                }
                for c in 0..ny {
                    for d in 0..ny {
                        let y = o.get(c, d);
                        if y.is_zero() {
                            continue;
                        }
                        let mut terms = Vec::new();
                        for &(kx, cx) in x.terms() {
                            for &(ky, cy) in y.terms() {
                                let s = msign(kx, ky);
                                if s == 0 {
                                    continue;
                                }
                                let dx = degree(kx) as u8 & 1;
                                let dy = degree(ky) as u8 & 1;
                                let e = (dy & px[b]) ^ (py[c] & (px[a] ^ px[b] ^ dx));
                                terms.push((kx | ky, cx * cy * (s as f64 * sgn(e))));
                            }
                        }
                        out.entries[(a * ny + c) * n + b * ny + d] =
                            GrassmannElement::from_terms(terms);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Graded permutation on the order-2 space.
    pub fn graded_permutation(profile: GradingProfile) -> Self {
        let d = profile.dim();
        let mut x = Self::zeros(profile, 2);
        for a in 0..d {
            for b in 0..d {
                let s = sgn(profile.p(a) & profile.p(b));
                x.set(
                    a * d + b,
                    b * d + a,
                    GrassmannElement::scalar(C64::new(s, 0.0)),
                );
            }
        }
        x
    }

    /// Same as [`SuperMatrix::graded_permutation`] without the grading signs.
    pub fn plain_permutation(profile: GradingProfile) -> Self {
        let d = profile.dim();
        let mut x = Self::zeros(profile, 2);
        for a in 0..d {
            for b in 0..d {
                x.set(a * d + b, b * d + a, GrassmannElement::one());
            }
        }
        x
    }

    pub fn supertranspose(&self) -> Result<Self, Error> {
        if self.order != 1 {
            return Err(Error::Profile(
                "supertranspose needs an order-1 matrix".into(),
            ));
        }
        let p = &self.profile;
        let mut out = Self::zeros(*p, 1);
        for b in 0..self.size {
            for c in 0..self.size {
                let s = sgn(p.p(b) ^ (p.p(b) & p.p(c)));
                out.set(c, b, self.get(b, c).map_scale(s));
            }
        }
        Ok(out)
    }

    /// Partial supertranspose in the first factor of an order-2 matrix.
    pub fn st1(&self) -> Result<Self, Error> {
        self.partial_st(true)
    }

    /// Partial supertranspose in the second factor of an order-2 matrix.
    pub fn st2(&self) -> Result<Self, Error> {
        self.partial_st(false)
    }

    fn partial_st(&self, first: bool) -> Result<Self, Error> {
        if self.order != 2 {
            return Err(Error::Profile(
                "partial supertranspose needs an order-2 matrix".into(),
            ));
        }
        let pr = self.profile;
        let d = pr.dim();
        let mut out = Self::zeros(pr, 2);
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for dd in 0..d {
                        let x = self.get(a * d + c, b * d + dd);
                        if x.is_zero() {
                            continue;
                        }
                        let (pa, pb, pc, pd) = (pr.p(a), pr.p(b), pr.p(c), pr.p(dd));
                        if first {
                            let e = pa ^ (pa & pb);
                            out.set(b * d + c, a * d + dd, x.map_scale(sgn(e)));
                        } else {
                            // the factor-2 transpose also moves past the
                            // grading of the first factor
                            let e = pc ^ (pc & pd) ^ (pc & (pa ^ pb)) ^ (pd & (pa ^ pb));
                            out.set(a * d + dd, b * d + c, x.map_scale(sgn(e)));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries()
            .filter(|(_, _, e)| !e.is_zero())
            .map(|(r, c, e)| json!({ "row": r, "col": c, "terms": e.to_json() }))
            .collect();
        json!({
            "m": self.profile.m,
            "n": self.profile.n,
            "order": self.order,
            "entries": entries,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, Error> {
        let field = |k: &str| {
            v[k].as_u64()
                .ok_or_else(|| Error::Format(format!("matrix without integer \"{k}\"")))
        };
        let profile = GradingProfile::new(field("m")? as usize, field("n")? as usize)?;
        let order = field("order")? as u32;
        if !(1..=4).contains(&order) {
            return Err(Error::Format(format!("unsupported order {order}")));
        }
        let mut x = Self::zeros(profile, order);
        let entries = v["entries"]
            .as_array()
            .ok_or_else(|| Error::Format("matrix without \"entries\"".into()))?;
        for e in entries {
            let r = e["row"]
                .as_u64()
                .ok_or_else(|| Error::Format("entry without row".into()))?
                as usize;
            let c = e["col"]
                .as_u64()
                .ok_or_else(|| Error::Format("entry without col".into()))?
                as usize;
            if r >= x.size || c >= x.size {
                return Err(Error::Index(format!(
                    "entry ({r},{c}) outside size {}",
                    x.size
                )));
            }
            x.set(r, c, GrassmannElement::from_json(&e["terms"])?);
        }
        Ok(x)
    }
}

impl GrassmannElement {
    fn map_scale(&self, s: f64) -> GrassmannElement {
        if s == 1.0 {
            self.clone()
        } else {
            self.neg()
        }
    }
}
