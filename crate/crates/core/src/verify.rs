//! Verification sweeps over seeded samples and the reports they produce.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::grassmann::C64;
use crate::reflection::{
    full_sector_sweep, k_plus, reflection_residual, second_reflection_residual, KMatrixSpec,
};
use crate::rmatrix::{
    cross_unitarity_residual, crossing_symmetry_residual, pt_residual, unitarity_residual,
    ybe_residual, Kind, RMatrixSpec,
};
use crate::sampling::Sampler;
use crate::solutions::{build_k, xi, ConstraintIdeal, Family, FamilyParams};
use crate::Error;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_SAMPLES: usize = 5;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_ETA: C64 = C64 { re: 0.37, im: 0.0 };

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sector: Option<String>,
    pub samples: usize,
    pub max_residual: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(
        id: impl Into<String>,
        sector: Option<String>,
        samples: usize,
        max_residual: f64,
        tol: f64,
    ) -> Self {
        Self {
            id: id.into(),
            sector,
            samples,
            max_residual,
            pass: max_residual <= tol,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Environment {
    pub seed: u64,
    pub tol: f64,
    pub params: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub environment: Environment,
    pub pass: bool,
}

impl VerifyReport {
    pub fn new(checks: Vec<Check>, environment: Environment) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self {
            checks,
            environment,
            pass,
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// Fixed-width table for terminals.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{:<28} {:<8} {:>7} {:>12}  {}\n",
            "check", "sector", "samples", "max_resid", "pass"
        );
        for c in &self.checks {
            s.push_str(&format!(
                "{:<28} {:<8} {:>7} {:>12.3e}  {}\n",
                c.id,
                c.sector.as_deref().unwrap_or("-"),
                c.samples,
                c.max_residual,
                if c.pass { "ok" } else { "FAIL" }
            ));
        }
        s.push_str(&format!(
            "seed {}  tol {:e}  overall {}\n",
            self.environment.seed,
            self.environment.tol,
            if self.pass { "PASS" } else { "FAIL" }
        ));
        s
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub eta: C64,
    pub sectors: bool,
    /// Reduce residuals modulo the family's constraint ideal.
    pub reduce: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            tol: DEFAULT_TOL,
            eta: DEFAULT_ETA,
            sectors: false,
            reduce: true,
        }
    }
}

fn kind_name(kind: Kind) -> &'static str {
    match kind {
        Kind::Rational => "rational",
        Kind::Trigonometric => "trig",
    }
}

/// Worst reduced reflection residual of `k` over seeded pairs.
pub fn reflection_sweep(
    r: &RMatrixSpec,
    k: &KMatrixSpec,
    ideal: Option<&ConstraintIdeal>,
    samples: usize,
    seed: u64,
) -> Result<f64, Error> {
    let mut sampler = Sampler::new(seed);
    let pairs: Vec<(C64, C64)> = (0..samples).map(|_| sampler.pair(r.kind, r.eta)).collect();
    let vals: Result<Vec<f64>, Error> = pairs
        .par_iter()
        .map(|&(l, m)| {
            let res = reflection_residual(r, k, l, m)?;
            Ok(match ideal {
                Some(id) => res.reduced(id).relative(),
                None => res.relative(),
            })
        })
        .collect();
    Ok(vals?.into_iter().fold(0.0, f64::max))
}

/// Worst reduced second-algebra residual of K⁺ = k_plus(k).
pub fn second_reflection_sweep(
    r: &RMatrixSpec,
    k_minus: &KMatrixSpec,
    ideal: Option<&ConstraintIdeal>,
    samples: usize,
    seed: u64,
) -> Result<f64, Error> {
    let kp = k_plus(k_minus, r);
    second_sweep_of(r, &kp, ideal, samples, seed)
}

pub fn second_sweep_of(
    r: &RMatrixSpec,
    kp: &KMatrixSpec,
    ideal: Option<&ConstraintIdeal>,
    samples: usize,
    seed: u64,
) -> Result<f64, Error> {
    let mut sampler = Sampler::new(seed);
    let pairs: Vec<(C64, C64)> = (0..samples).map(|_| sampler.pair(r.kind, r.eta)).collect();
    let vals: Result<Vec<f64>, Error> = pairs
        .par_iter()
        .map(|&(l, m)| {
            let res = second_reflection_residual(r, kp, l, m)?;
            Ok(match ideal {
                Some(id) => res.reduced(id).relative(),
                None => res.relative(),
            })
        })
        .collect();
    Ok(vals?.into_iter().fold(0.0, f64::max))
}

/// R-matrix spec a family is checked against.
pub fn r_for(kind: Kind, params: &FamilyParams, eta: C64) -> Result<RMatrixSpec, Error> {
    let pr = params.profile()?;
    match kind {
        Kind::Rational => Ok(RMatrixSpec::rational(pr)),
        Kind::Trigonometric => RMatrixSpec::new(kind, pr, eta),
    }
}

/// Builds the family and runs every applicable check.
pub fn verify_family(params: &FamilyParams, opts: &VerifyOptions) -> Result<VerifyReport, Error> {
    let built = build_k(params, opts.seed)?;
    let kinds: Vec<Kind> = match built.kind {
        Some(k) => vec![k],
        None => vec![Kind::Rational, Kind::Trigonometric],
    };
    let ideal = opts.reduce.then_some(&built.ideal);
    let n = opts.samples;
    let mut checks = Vec::new();

    let mut probe = Sampler::new(opts.seed);
    let violations = (0..n.max(1))
        .map(|_| built.spec.grading_violations(probe.point()).len())
        .max()
        .unwrap_or(0);
    checks.push(Check::new(
        "grading",
        None,
        n.max(1),
        violations as f64,
        0.0,
    ));

    for &kind in &kinds {
        let r = r_for(kind, params, opts.eta)?;
        let name = kind_name(kind);
        let refl = reflection_sweep(&r, &built.spec, ideal, n, opts.seed)?;
        checks.push(Check::new(
            format!("reflection.{name}"),
            None,
            n,
            refl,
            opts.tol,
        ));
        let second = second_reflection_sweep(&r, &built.spec, ideal, n, opts.seed)?;
        checks.push(Check::new(
            format!("second_reflection.{name}"),
            None,
            n,
            second,
            opts.tol,
        ));
        if opts.sectors {
            let mut sampler = Sampler::new(opts.seed);
            let pairs: Vec<(C64, C64)> = (0..n).map(|_| sampler.pair(kind, r.eta)).collect();
            let sweeps: Result<Vec<_>, Error> = pairs
                .par_iter()
                .map(|&(l, m)| full_sector_sweep(&built.spec, &r, l, m, ideal))
                .collect();
            let sweeps = sweeps?;
            let first = &sweeps[0];
            for tag in first.per_sector.keys() {
                let worst = sweeps.iter().map(|s| s.per_sector[tag]).fold(0.0, f64::max);
                checks.push(Check::new(
                    format!("sector.{name}"),
                    Some(tag.clone()),
                    n,
                    worst,
                    opts.tol,
                ));
            }
            let re = sweeps.iter().map(|s| s.reassembly).fold(0.0, f64::max);
            checks.push(Check::new(
                format!("sector_reassembly.{name}"),
                None,
                n,
                re,
                1e-12,
            ));
        }
    }

    if let Family::NdRat { c, .. } | Family::FermRatNondiag { c, .. } = &params.family {
        let mut s = Sampler::new(opts.seed);
        let worst = (0..n)
            .map(|_| {
                let x = xi(c, s.point());
                let lhs = x.plus_ll * x.minus_ll - x.x14 * x.x23;
                let rhs = x.plus_gg * x.minus_gg;
                (lhs - rhs).norm() / rhs.norm().max(1.0)
            })
            .fold(0.0, f64::max);
        checks.push(Check::new("xi_determinant", None, n, worst, opts.tol));
    }

    let env = Environment {
        seed: opts.seed,
        tol: opts.tol,
        params: serde_json::to_value(&built.params)?,
    };
    Ok(VerifyReport::new(checks, env))
}

/// YBE and the R-matrix properties at seeded points.
pub fn check_r(spec: &RMatrixSpec, samples: usize, seed: u64, tol: f64) -> VerifyReport {
    let mut sampler = Sampler::new(seed);
    let pairs: Vec<(C64, C64)> = (0..samples)
        .map(|_| sampler.pair(spec.kind, spec.eta))
        .collect();
    let worst = |f: &(dyn Fn(C64, C64) -> f64 + Sync)| {
        pairs
            .par_iter()
            .map(|&(l, m)| f(l, m))
            .reduce(|| 0.0, f64::max)
    };
    let mut checks = vec![
        Check::new(
            "ybe",
            None,
            samples,
            worst(&|l, m| ybe_residual(spec, l, m)),
            tol,
        ),
        Check::new(
            "unitarity",
            None,
            samples,
            worst(&|l, _| unitarity_residual(spec, l)),
            tol,
        ),
        Check::new(
            "pt_symmetry",
            None,
            samples,
            worst(&|l, _| pt_residual(spec, l)),
            tol,
        ),
        Check::new(
            "cross_unitarity",
            None,
            samples,
            worst(&|l, _| cross_unitarity_residual(spec, l)),
            tol,
        ),
    ];
    if spec.kind == Kind::Trigonometric {
        let sym = worst(&|l, _| crossing_symmetry_residual(spec, l));
        checks.push(Check::new("crossing_symmetry", None, samples, sym, tol));
    }
    let env = Environment {
        seed,
        tol,
        params: serde_json::json!({
            "kind": kind_name(spec.kind),
            "m": spec.profile.m,
            "n": spec.profile.n,
            "eta": [spec.eta.re, spec.eta.im],
        }),
    };
    VerifyReport::new(checks, env)
}
