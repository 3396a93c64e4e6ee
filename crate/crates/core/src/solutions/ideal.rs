//! Two-sided ideals of boundary-parameter constraints and reduction modulo
//! them by orthogonal projection in coefficient space.

use crate::grassmann::{degree, gmul, gnorm, GrassmannElement, C64};
use crate::supermatrix::SuperMatrix;

/// Vectors whose norm drops below this fraction of their original norm
/// during orthogonalisation are treated as dependent.
const DEPENDENT: f64 = 1e-10;

/// Cap on multiplier monomials per generator.
const MAX_MULTIPLIERS: usize = 20_000;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConstraintIdeal {
    generators: Vec<GrassmannElement>,
}

fn dot(q: &GrassmannElement, x: &GrassmannElement) -> C64 {
    // sorted merge join, conjugating q
    let (a, b) = (q.terms(), x.terms());
    let (mut i, mut j) = (0, 0);
    let mut s = C64::new(0.0, 0.0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                s += a[i].1.conj() * b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    s
}

fn axpy(x: &GrassmannElement, a: C64, q: &GrassmannElement) -> GrassmannElement {
    GrassmannElement::from_terms(
        x.terms()
            .iter()
            .copied()
            .chain(q.terms().iter().map(|&(k, c)| (k, -a * c))),
    )
}

/// Monomials over the bits of `support` with degree at most `k`.
fn monomials(support: u64, k: u32) -> Vec<u64> {
    let bits: Vec<u64> = (0..64)
        .filter(|i| support >> i & 1 == 1)
        .map(|i| 1u64 << i)
        .collect();
    let mut out = vec![0u64];
    let mut frontier = vec![(0u64, 0usize)];
    for _ in 0..k {
        let mut next = Vec::new();
        for &(mask, start) in &frontier {
            for (i, &b) in bits.iter().enumerate().skip(start) {
                next.push((mask | b, i + 1));
                if out.len() + next.len() >= MAX_MULTIPLIERS {
                    break;
                }
            }
        }
        out.extend(next.iter().map(|t| t.0));
        frontier = next;
        if out.len() >= MAX_MULTIPLIERS {
            break;
        }
    }
    out
}

impl ConstraintIdeal {
    pub fn new(generators: impl IntoIterator<Item = GrassmannElement>) -> Self {
        Self {
            generators: generators.into_iter().filter(|g| !g.is_zero()).collect(),
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn generators(&self) -> &[GrassmannElement] {
        &self.generators
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    fn support(&self) -> u64 {
        self.generators.iter().fold(0, |s, g| s | g.support())
    }

    /// Orthonormal basis of span{g·μ, μ·g} truncated at `max_degree`, with μ
    /// running over monomials in the generators of `support`.
    pub fn basis(&self, max_degree: u32, support: u64) -> Vec<GrassmannElement> {
        let support = support | self.support();
        let mut basis: Vec<GrassmannElement> = Vec::new();
        for g in &self.generators {
            let low = g.terms().iter().map(|t| degree(t.0)).min().unwrap_or(0);
            if low > max_degree {
                continue;
            }
            for mu in monomials(support, max_degree - low) {
                let mu = GrassmannElement::monomial(mu, C64::new(1.0, 0.0));
                for v in [gmul(g, &mu), gmul(&mu, g)] {
                    let v = GrassmannElement::from_terms(
                        v.terms()
                            .iter()
                            .copied()
                            .filter(|t| degree(t.0) <= max_degree),
                    );
                    let n0 = gnorm(&v);
                    if n0 == 0.0 {
                        continue;
                    }
                    let mut w = v;
                    for _ in 0..2 {
                        for q in &basis {
                            w = axpy(&w, dot(q, &w), q);
                        }
                    }
                    let n1 = gnorm(&w);
                    if n1 > DEPENDENT * n0 {
                        basis.push(
                            w.terms()
                                .iter()
                                .map(|&(k, c)| (k, c / n1))
                                .collect::<Vec<_>>()
                                .into(),
                        );
                    }
                }
            }
        }
        basis
    }

    /// Dimension of the span of the generators themselves.
    pub fn rank(&self) -> usize {
        self.generator_basis().len()
    }

    /// Orthonormal basis of the span of the generators alone.
    pub fn generator_basis(&self) -> Vec<GrassmannElement> {
        let mut basis: Vec<GrassmannElement> = Vec::new();
        for g in &self.generators {
            let n0 = gnorm(g);
            let mut w = g.clone();
            for _ in 0..2 {
                for q in &basis {
                    w = axpy(&w, dot(q, &w), q);
                }
            }
            let n1 = gnorm(&w);
            if n1 > DEPENDENT * n0 {
                basis.push(
                    w.terms()
                        .iter()
                        .map(|&(k, c)| (k, c / n1))
                        .collect::<Vec<_>>()
                        .into(),
                );
            }
        }
        basis
    }

    /// Remainder of `x` after projecting out the ideal.
    pub fn reduce(&self, x: &GrassmannElement) -> GrassmannElement {
        if self.is_empty() || x.is_zero() {
            return x.clone();
        }
        let basis = self.basis(x.max_degree(), x.support());
        project(x, &basis)
    }

    /// Entrywise reduction sharing one projection basis.
    pub fn reduce_matrix(&self, m: &SuperMatrix) -> SuperMatrix {
        if self.is_empty() {
            return m.clone();
        }
        let deg = m
            .entries()
            .map(|(_, _, e)| e.max_degree())
            .max()
            .unwrap_or(0);
        let sup = m.entries().fold(0, |s, (_, _, e)| s | e.support());
        let basis = self.basis(deg, sup);
        m.map(|e| project(e, &basis))
    }

    /// Whether `x` lies in the ideal up to `tol` relative to its norm.
    pub fn contains(&self, x: &GrassmannElement, tol: f64) -> bool {
        gnorm(&self.reduce(x)) <= tol * gnorm(x).max(f64::MIN_POSITIVE)
    }
}

fn project(x: &GrassmannElement, basis: &[GrassmannElement]) -> GrassmannElement {
    let mut r = x.clone();
    for q in basis {
        let a = dot(q, &r);
        if a.norm() != 0.0 {
            r = axpy(&r, a, q);
        }
    }
    r
}

impl From<Vec<(u64, C64)>> for GrassmannElement {
    fn from(v: Vec<(u64, C64)>) -> Self {
        GrassmannElement::from_terms(v)
    }
}

/// Free-function form of [`ConstraintIdeal::reduce`].
pub fn reduce_mod_ideal(x: &GrassmannElement, ideal: &ConstraintIdeal) -> GrassmannElement {
    ideal.reduce(x)
}
