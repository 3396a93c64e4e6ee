//! Rational and trigonometric graded R-matrices and their defining
//! properties.

use serde::{Deserialize, Serialize};

use crate::grassmann::C64;
use crate::sampling::Sampler;
use crate::supermatrix::{GradingProfile, SuperMatrix};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Rational,
    #[serde(alias = "trig")]
    Trigonometric,
}

impl std::str::FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "rational" | "rat" => Ok(Kind::Rational),
            "trig" | "trigonometric" => Ok(Kind::Trigonometric),
            _ => Err(Error::Params(format!("unknown kind {s}"))),
        }
    }
}

/// Which Boltzmann weight a perturbation hits (0-based indices).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WeightSlot {
    F(usize, usize),
    G(usize, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RMatrixSpec {
    pub kind: Kind,
    pub profile: GradingProfile,
    pub eta: C64,
    /// Adds a constant to one weight; only used for negative controls.
    pub perturb: Option<(WeightSlot, C64)>,
}

const I: C64 = C64 { re: 0.0, im: 1.0 };

impl RMatrixSpec {
    pub fn new(kind: Kind, profile: GradingProfile, eta: C64) -> Result<Self, Error> {
        if kind == Kind::Trigonometric && (I * eta).sinh().norm() < 1e-12 {
            return Err(Error::Singular("sinh(iη) vanishes".into()));
        }
        Ok(Self {
            kind,
            profile,
            eta,
            perturb: None,
        })
    }

    pub fn rational(profile: GradingProfile) -> Self {
        Self {
            kind: Kind::Rational,
            profile,
            eta: C64::new(0.0, 0.0),
            perturb: None,
        }
    }

    pub fn with_perturbation(mut self, slot: WeightSlot, delta: C64) -> Self {
        self.perturb = Some((slot, delta));
        self
    }

    /// Shift s entering crossing and the second reflection algebra:
    /// iΔη (trigonometric) or iΔ (rational).
    pub fn crossing_shift(&self) -> C64 {
        let d = self.profile.delta() as f64;
        match self.kind {
            Kind::Trigonometric => I * d * self.eta,
            Kind::Rational => I * d,
        }
    }

    /// f_AB(λ) and g_AB(λ) as dense d×d arrays (g_AA = 0).
    pub fn weights(&self, l: C64) -> (Vec<C64>, Vec<C64>) {
        let pr = self.profile;
        let d = pr.dim();
        let mut f = vec![C64::new(0.0, 0.0); d * d];
        let mut g = vec![C64::new(0.0, 0.0); d * d];
        for a in 0..d {
            for b in 0..d {
                let pa = pr.p(a) as f64;
                let pb = if pr.p(b) == 1 { -1.0 } else { 1.0 };
                match self.kind {
                    Kind::Trigonometric => {
                        if a == b {
                            f[a * d + b] = (l + I * self.eta - 2.0 * I * self.eta * pa).sinh();
                        } else {
                            f[a * d + b] = l.sinh();
                            let e = if b > a { l } else { -l };
                            g[a * d + b] = pb * (I * self.eta).sinh() * e.exp();
                        }
                    }
                    Kind::Rational => {
                        if a == b {
                            f[a * d + b] = l + I * (1.0 - 2.0 * pa);
                        } else {
                            f[a * d + b] = l;
                            g[a * d + b] = I * pb;
                        }
                    }
                }
            }
        }
        if let Some((slot, delta)) = self.perturb {
            match slot {
                WeightSlot::F(a, b) => f[a * d + b] += delta,
                WeightSlot::G(a, b) => g[a * d + b] += delta,
            }
        }
        (f, g)
    }

    /// Scalar factor of R₁₂(λ)R₂₁(−λ).
    pub fn unitarity_scalar(&self, l: C64) -> C64 {
        match self.kind {
            Kind::Trigonometric => (l + I * self.eta).sinh() * (-l + I * self.eta).sinh(),
            Kind::Rational => (l + I) * (-l + I),
        }
    }

    /// Scalar factor of the cross-unitarity relation.
    pub fn cross_unitarity_scalar(&self, l: C64) -> C64 {
        let s = self.crossing_shift();
        match self.kind {
            Kind::Trigonometric => l.sinh() * (-l - s).sinh(),
            Kind::Rational => l * (-l - s),
        }
    }
}

/// R(λ) on the order-2 space.
pub fn eval_r(spec: &RMatrixSpec, l: C64) -> SuperMatrix {
    let pr = spec.profile;
    let d = pr.dim();
    let (f, g) = spec.weights(l);
    let mut data = vec![C64::new(0.0, 0.0); d * d * d * d];
    let n = d * d;
    for a in 0..d {
        for b in 0..d {
            data[(a * d + b) * n + a * d + b] += f[a * d + b];
            if a != b {
                let s = if pr.p(b) & (pr.p(a) ^ pr.p(b)) == 1 {
                    -1.0
                } else {
                    1.0
                };
                data[(a * d + b) * n + b * d + a] += s * g[a * d + b];
            }
        }
    }
    SuperMatrix::from_scalars(pr, 2, &data)
}

/// Diagonal crossing matrix M.
pub fn crossing_matrix(spec: &RMatrixSpec) -> SuperMatrix {
    let pr = spec.profile;
    let vals: Vec<C64> = (1..=pr.dim())
        .map(|a| match spec.kind {
            Kind::Trigonometric if a <= pr.m => (2.0 * I * spec.eta * (1.0 - a as f64)).exp(),
            Kind::Trigonometric => -(2.0 * I * spec.eta * (a as f64 - 2.0 * pr.m as f64)).exp(),
            Kind::Rational if a <= pr.m => C64::new(1.0, 0.0),
            Kind::Rational => C64::new(-1.0, 0.0),
        })
        .collect();
    SuperMatrix::diagonal(pr, &vals).expect("dimension matches")
}

/// Inverse of a diagonal scalar matrix.
pub fn diagonal_inverse(m: &SuperMatrix) -> Result<SuperMatrix, Error> {
    let vals: Result<Vec<C64>, Error> = (0..m.size())
        .map(|i| {
            let v = m.get(i, i).scalar_part();
            if v.norm() == 0.0 {
                Err(Error::Singular("crossing matrix has a zero entry".into()))
            } else {
                Ok(v.inv())
            }
        })
        .collect();
    SuperMatrix::diagonal(m.profile(), &vals?)
}

/// R₂₁ = P R₁₂ P.
pub fn r21(r: &SuperMatrix) -> SuperMatrix {
    let p = SuperMatrix::graded_permutation(r.profile());
    SuperMatrix::chain(&[&p, r, &p]).expect("same grading")
}

/// YBE residual with an explicit choice of permutation used to build R₁₃.
pub fn ybe_residual_with(spec: &RMatrixSpec, perm: &SuperMatrix, l: C64, m: C64) -> f64 {
    let pr = spec.profile;
    let one = SuperMatrix::identity(pr, 1);
    let rl = eval_r(spec, l);
    let rlm = eval_r(spec, l + m);
    let rm = eval_r(spec, m);
    let r12 = rl.gkron(&one).unwrap();
    let i_p = one.gkron(perm).unwrap();
    let r13 = SuperMatrix::chain(&[&i_p, &rlm.gkron(&one).unwrap(), &i_p]).unwrap();
    let r23 = one.gkron(&rm).unwrap();
    let lhs = SuperMatrix::chain(&[&r12, &r13, &r23]).unwrap();
    let rhs = SuperMatrix::chain(&[&r23, &r13, &r12]).unwrap();
    let scale = r12.mnorm().max(r13.mnorm()).max(r23.mnorm()).powi(3);
    lhs.msub(&rhs).unwrap().mnorm() / scale
}

/// Relative graded Yang-Baxter residual at (λ, μ).
pub fn ybe_residual(spec: &RMatrixSpec, l: C64, m: C64) -> f64 {
    ybe_residual_with(spec, &SuperMatrix::graded_permutation(spec.profile), l, m)
}

/// Relative norm of [R(λ), M⊗M].
pub fn crossing_symmetry_residual(spec: &RMatrixSpec, l: C64) -> f64 {
    let r = eval_r(spec, l);
    let m = crossing_matrix(spec);
    let mm = m.gkron(&m).unwrap();
    let c = r
        .matmul(&mm)
        .unwrap()
        .msub(&mm.matmul(&r).unwrap())
        .unwrap();
    c.mnorm() / (r.mnorm() * mm.mnorm())
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct PropertyReport {
    pub unitarity: f64,
    pub pt_symmetry: f64,
    pub cross_unitarity: f64,
    /// Only meaningful for the trigonometric kind.
    pub crossing_symmetry: Option<f64>,
}

pub fn unitarity_residual(spec: &RMatrixSpec, l: C64) -> f64 {
    let pr = spec.profile;
    let a = eval_r(spec, l);
    let b = r21(&eval_r(spec, -l));
    let prod = a.matmul(&b).unwrap();
    let rhs = SuperMatrix::identity(pr, 2).mscale(spec.unitarity_scalar(l));
    prod.msub(&rhs).unwrap().mnorm() / (a.mnorm() * b.mnorm())
}

pub fn pt_residual(spec: &RMatrixSpec, l: C64) -> f64 {
    let r = eval_r(spec, l);
    let lhs = r21(&r);
    let rhs = r.st1().unwrap().st2().unwrap();
    lhs.msub(&rhs).unwrap().mnorm() / r.mnorm()
}

pub fn cross_unitarity_residual(spec: &RMatrixSpec, l: C64) -> f64 {
    let pr = spec.profile;
    let one = SuperMatrix::identity(pr, 1);
    let m = crossing_matrix(spec);
    let m1 = m.gkron(&one).unwrap();
    let m1i = diagonal_inverse(&m).unwrap().gkron(&one).unwrap();
    let a = eval_r(spec, l).st1().unwrap();
    let b = eval_r(spec, -l - spec.crossing_shift()).st2().unwrap();
    let prod = SuperMatrix::chain(&[&a, &m1, &b, &m1i]).unwrap();
    let rhs = SuperMatrix::identity(pr, 2).mscale(spec.cross_unitarity_scalar(l));
    prod.msub(&rhs).unwrap().mnorm() / (a.mnorm() * b.mnorm() * m1.mnorm() * m1i.mnorm())
}

/// Worst relative residual of each property over `samples` seeded points.
pub fn property_suite(spec: &RMatrixSpec, sampler: &mut Sampler, samples: usize) -> PropertyReport {
    let mut rep = PropertyReport::default();
    let mut sym = 0.0f64;
    for _ in 0..samples {
        let l = sampler.single(spec.kind, spec.eta);
        rep.unitarity = rep.unitarity.max(unitarity_residual(spec, l));
        rep.pt_symmetry = rep.pt_symmetry.max(pt_residual(spec, l));
        rep.cross_unitarity = rep.cross_unitarity.max(cross_unitarity_residual(spec, l));
        sym = sym.max(crossing_symmetry_residual(spec, l));
    }
    if spec.kind == Kind::Trigonometric {
        rep.crossing_symmetry = Some(sym);
    }
    rep
}

/// Relative distance between (1/η)·R_trig(ηλ′) and R_rat(λ′).
pub fn rational_limit_residual(profile: GradingProfile, eta: f64, l: C64) -> f64 {
    let trig = RMatrixSpec {
        kind: Kind::Trigonometric,
        profile,
        eta: C64::new(eta, 0.0),
        perturb: None,
    };
    let scaled = eval_r(&trig, l * eta).mscale(C64::new(1.0 / eta, 0.0));
    let rat = eval_r(&RMatrixSpec::rational(profile), l);
    scaled.msub(&rat).unwrap().mnorm() / rat.mnorm()
}
