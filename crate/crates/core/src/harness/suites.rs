//! Invariant suites executed by `verify`.
//!
//! Every suite runs its per-instance checks in parallel and collects the
//! outcomes in instance order, so reports do not depend on scheduling.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generator::{contour_point, z_grid, InstanceGenerator};
use crate::boundary::{boundary_im_closed, boundary_im_numeric, density_moment, segments};
use crate::contour::{cauchy_eval, line_integrands, ContourSpec};
use crate::error::Result;
use crate::means::{
    self, arithmetic_mean, f_n_minus_mean, geometric_mean, h_n, principal_gmean, Sequence,
};
use crate::quadrature::{integrate, integrate_real, kronrod15, QuadratureSpec};
use crate::representation::{
    am_gm_gap, evaluate_scaled, h_via_representation, remainder, stieltjes_sum,
};

/// Failures kept per suite; the full count is in `failure_count`.
const MAX_RECORDED_FAILURES: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub cases: usize,
    pub quad: QuadratureSpec,
    /// Relative perturbation of the densities in the representation path
    /// of the equivalence suite. Zero disables fault injection.
    pub perturb_density: f64,
    /// Used as instance 0 when present.
    pub sequence: Option<Sequence>,
    /// Instances used by the (expensive) contour suites.
    pub contour_cases: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            cases: 200,
            quad: QuadratureSpec::default(),
            perturb_density: 0.0,
            sequence: None,
            contour_cases: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub case: usize,
    pub inputs: String,
    pub contract: String,
    pub observed: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases_run: usize,
    pub checks: usize,
    pub passed: bool,
    pub max_error: f64,
    pub failure_count: usize,
    pub failures: Vec<Failure>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub cases: usize,
    pub perturb_density: f64,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn suite(&self, name: &str) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.suite == name)
    }

    /// Fixed-width text summary, one line per suite.
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "verify seed={} cases={} perturb_density={:e}\n{:<44} {:>6} {:>8} {:>10} {:>12}\n",
            self.seed,
            self.cases,
            self.perturb_density,
            "suite",
            "status",
            "cases",
            "failures",
            "max_error"
        );
        for s in &self.suites {
            out.push_str(&format!(
                "{:<44} {:>6} {:>8} {:>10} {:>12.3e}\n",
                s.suite,
                if s.passed { "PASS" } else { "FAIL" },
                s.cases_run,
                s.failure_count,
                s.max_error
            ));
        }
        out.push_str(if self.passed {
            "overall: PASS\n"
        } else {
            "overall: FAIL\n"
        });
        out
    }
}

/// Checks recorded for one instance.
#[derive(Debug, Default)]
struct Checker {
    case: usize,
    checks: usize,
    max_error: f64,
    failures: Vec<Failure>,
    /// Aggregate counters for fraction-style contracts: (hits, total).
    tally: (usize, usize),
}

impl Checker {
    fn new(case: usize) -> Self {
        Self {
            case,
            ..Self::default()
        }
    }

    /// Records `error` and fails with `contract` when `ok` is false.
    fn check(&mut self, ok: bool, error: f64, contract: &str, inputs: impl FnOnce() -> String) {
        self.checks += 1;
        if error.is_finite() {
            self.max_error = self.max_error.max(error);
        } else {
            self.max_error = f64::INFINITY;
        }
        if !ok {
            self.failures.push(Failure {
                case: self.case,
                inputs: inputs(),
                contract: contract.to_string(),
                observed: format!("{error:e}"),
            });
        }
    }

    fn error(&mut self, contract: &str, inputs: String, err: crate::Error) {
        self.checks += 1;
        self.max_error = f64::INFINITY;
        self.failures.push(Failure {
            case: self.case,
            inputs,
            contract: contract.to_string(),
            observed: err.to_string(),
        });
    }
}

fn case_rng(seed: u64, case: usize, salt: u64) -> ChaCha8Rng {
    let mixed = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((case as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9))
        .wrapping_add(salt.wrapping_mul(0x94D0_49BB_1331_11EB));
    ChaCha8Rng::seed_from_u64(mixed)
}

/// Runs `body` over `instances` in parallel and folds outcomes in order.
fn run_suite<F>(name: &str, instances: &[Sequence], body: F) -> (SuiteReport, (usize, usize))
where
    F: Fn(&mut Checker, &Sequence) -> Result<()> + Sync,
{
    let outcomes: Vec<Checker> = instances
        .par_iter()
        .enumerate()
        .map(|(case, a)| {
            let mut c = Checker::new(case);
            if let Err(e) = body(&mut c, a) {
                c.error("evaluation succeeds", format!("a = [{a}]"), e);
            }
            c
        })
        .collect();
    let mut report = SuiteReport {
        suite: name.to_string(),
        cases_run: instances.len(),
        checks: 0,
        passed: true,
        max_error: 0.0,
        failure_count: 0,
        failures: Vec::new(),
    };
    let mut tally = (0, 0);
    for c in outcomes {
        report.checks += c.checks;
        report.max_error = report.max_error.max(c.max_error);
        report.failure_count += c.failures.len();
        for f in c.failures {
            if report.failures.len() < MAX_RECORDED_FAILURES {
                report.failures.push(f);
            }
        }
        tally.0 += c.tally.0;
        tally.1 += c.tally.1;
    }
    report.passed = report.failure_count == 0;
    (report, tally)
}

/// Adds a suite-level fraction contract `hits / total >= min_fraction`.
fn require_fraction(
    report: &mut SuiteReport,
    tally: (usize, usize),
    min_fraction: f64,
    contract: &str,
) {
    let fraction = if tally.1 == 0 {
        1.0
    } else {
        tally.0 as f64 / tally.1 as f64
    };
    report.checks += 1;
    if fraction < min_fraction {
        report.passed = false;
        report.failure_count += 1;
        report.failures.push(Failure {
            case: usize::MAX,
            inputs: format!("{} of {} pairs", tally.0, tally.1),
            contract: contract.to_string(),
            observed: format!("{fraction}"),
        });
    }
}

fn half_variance(a: &Sequence) -> f64 {
    // Offsets keep the subtraction well conditioned.
    let d = a.offsets();
    let mean = means::offset_mean(&d);
    d.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (2.0 * d.len() as f64)
}

fn fmt_z(z: Complex64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

/// Runs every suite. Deterministic for a given config.
pub fn run_verify(config: &VerifyConfig) -> VerifyReport {
    let mut generator = InstanceGenerator::new(config.seed);
    let mut instances: Vec<Sequence> = (0..config.cases.max(1))
        .map(|_| generator.next_sequence())
        .collect();
    if let Some(fixed) = &config.sequence {
        instances[0] = fixed.clone();
    }
    let contour_instances = &instances[..config.contour_cases.clamp(1, instances.len())];
    let seed = config.seed;
    let quad = config.quad;
    let mut suites = Vec::new();

    // mean_core
    suites.push(
        run_suite("mean_core.branch_consistency", &instances, |c, a| {
            for z in z_grid(a.min()) {
                let g = principal_gmean(a, z)?;
                let product = a
                    .values()
                    .iter()
                    .fold(Complex64::new(1.0, 0.0), |p, &v| p * (z + v));
                let rel = (g.powu(a.len() as u32) - product).norm() / product.norm();
                c.check(
                    rel <= 1e-12,
                    rel,
                    "|G^n - prod(a_k+z)| <= 1e-12 |prod|",
                    || format!("a = [{a}], z = {}", fmt_z(z)),
                );
            }
            Ok(())
        })
        .0,
    );
    suites.push(
        run_suite("mean_core.real_positivity", &instances, |c, a| {
            for z in [-a.min() + 0.05, 0.0, 1.0, 10.0, 1e3] {
                let g = principal_gmean(a, z)?;
                let ok = g.im.abs() <= 1e-14 * g.re.abs() && g.re > 0.0;
                c.check(
                    ok,
                    g.im.abs(),
                    "real z > -a_1 gives real positive G",
                    || format!("a = [{a}], z = {z}"),
                );
            }
            Ok(())
        })
        .0,
    );
    suites.push(
        run_suite("mean_core.schwarz_reflection", &instances, |c, a| {
            for z in z_grid(0.0) {
                let h = h_n(a, z)?;
                let reflected = h_n(a, z.conj())?;
                let err = (reflected - h.conj()).norm();
                c.check(
                    err <= 1e-14 * h.norm(),
                    err,
                    "h(conj z) = conj h(z) within 1e-14 relative",
                    || format!("a = [{a}], z = {}", fmt_z(z)),
                );
            }
            Ok(())
        })
        .0,
    );
    suites.push(
        run_suite("mean_core.small_z_vanishing", &instances, |c, a| {
            let m: Vec<f64> = [1e-2, 1e-4, 1e-6]
                .iter()
                .map(|&z| h_n(a, z).map(|h| z * h.norm()))
                .collect::<Result<_>>()?;
            let all_zero = m.iter().all(|&v| v == 0.0);
            let ok = all_zero || (m[1] < m[0] && m[2] < m[1]);
            c.check(
                ok,
                m[2],
                "|z h(z)| strictly decreasing on z = 1e-2, 1e-4, 1e-6",
                || format!("a = [{a}], values = {m:?}"),
            );
            Ok(())
        })
        .0,
    );
    suites.push(
        run_suite("mean_core.homogeneity", &instances, |c, a| {
            for lambda in [0.37, 4.2] {
                let scaled = a.scaled(lambda)?;
                for z in z_grid(a.min()).into_iter().step_by(4) {
                    let lhs = principal_gmean(&scaled, z * lambda)?;
                    let rhs = principal_gmean(a, z)? * lambda;
                    let rel = (lhs - rhs).norm() / rhs.norm();
                    c.check(
                        rel <= 1e-12,
                        rel,
                        "G(la, lz) = l G(a, z) within 1e-12 relative",
                        || format!("a = [{a}], z = {}, lambda = {lambda}", fmt_z(z)),
                    );
                }
            }
            Ok(())
        })
        .0,
    );
    suites.push(
        run_suite("mean_core.permutation_invariance", &instances, |c, a| {
            let mut rng = case_rng(seed, c.case, 1);
            let mut g = InstanceGenerator::new(rng.gen());
            let permuted = Sequence::new(g.shuffled(a.values()))?;
            let ok = arithmetic_mean(&permuted) == arithmetic_mean(a)
                && geometric_mean(&permuted) == geometric_mean(a);
            let err = (arithmetic_mean(&permuted) - arithmetic_mean(a)).abs()
                + (geometric_mean(&permuted) - geometric_mean(a)).abs();
            c.check(ok, err, "A and G unchanged by reordering", || {
                format!("a = [{a}]")
            });
            Ok(())
        })
        .0,
    );

    // boundary
    {
        let (mut report, tally) =
            run_suite("boundary.closed_numeric_agreement", &instances, |c, a| {
                let mut rng = case_rng(seed, c.case, 2);
                let d = a.offsets();
                let top = d[d.len() - 1] + 1.0;
                let mut pairs = 0;
                while pairs < 50 {
                    let t: f64 = rng.gen_range(0.01..top);
                    if d.iter().any(|dk| (dk - t).abs() < 1e-2) {
                        continue;
                    }
                    pairs += 1;
                    let closed = boundary_im_closed(a, t)?;
                    let err6 = (boundary_im_numeric(a, t, 1e-6)? - closed).abs();
                    let err8 = (boundary_im_numeric(a, t, 1e-8)? - closed).abs();
                    c.check(
                        err6 <= 1e-3,
                        err6,
                        "|numeric(1e-6) - closed| <= 1e-3",
                        || format!("a = [{a}], t = {t}"),
                    );
                    c.tally.1 += 1;
                    if err8 < err6 || err8 == 0.0 {
                        c.tally.0 += 1;
                    }
                }
                Ok(())
            });
        require_fraction(
            &mut report,
            tally,
            0.95,
            "error at eps=1e-8 below eps=1e-6 in >= 95% of pairs",
        );
        suites.push(report);
    }
    suites.push(
        run_suite("boundary.density_endpoints", &instances, |c, a| {
            for s in segments(a) {
                let (lo, hi) = (s.density(s.lo), s.density(s.hi));
                c.check(
                    lo == 0.0 && hi == 0.0,
                    lo.max(hi),
                    "density(lo) = density(hi) = 0",
                    || format!("a = [{a}], segment {}", s.index),
                );
            }
            Ok(())
        })
        .0,
    );
    suites.push(
        run_suite("boundary.nonnegativity", &instances, |c, a| {
            let d = a.offsets();
            let top = d[d.len() - 1] + 1.0;
            let mut ts: Vec<f64> = d.iter().copied().filter(|&x| x > 0.0).collect();
            ts.extend((1..=40).map(|k| top * k as f64 / 40.0));
            for t in ts {
                let v = boundary_im_closed(a, t)?;
                c.check(
                    v >= 0.0,
                    (-v).max(0.0),
                    "closed boundary value >= 0",
                    || format!("a = [{a}], t = {t}"),
                );
            }
            Ok(())
        })
        .0,
    );
    suites.push(
        run_suite("boundary.mass_identity", &instances, |c, a| {
            let m0 = density_moment(a, 0, &quad)?;
            let target = half_variance(a);
            let err = (m0 - target).abs();
            let tol = 10.0 * quad.tolerance_for(target);
            c.check(
                err <= tol,
                err,
                "moment_0 = Var/2 within 10x quadrature tolerance",
                || format!("a = [{a}]"),
            );
            // Large-z series: z (A - f(z)) -> Var/2, Richardson in 1/z.
            let g = |z: f64| f_n_minus_mean(a, z).map(|v| -z * v.re);
            let (g6, g7) = (g(1e6)?, g(1e7)?);
            let extrapolated = g7 + (g7 - g6) / 9.0;
            let err = (extrapolated - target).abs();
            c.check(
                err <= 1e-6 * target.max(1.0),
                err,
                "large-z series agrees with Var/2",
                || format!("a = [{a}], extrapolated = {extrapolated}"),
            );
            Ok(())
        })
        .0,
    );
    suites.push(
        run_suite("boundary.scaling_covariance", &instances, |c, a| {
            for lambda in [0.3, 2.5] {
                let scaled = a.scaled(lambda)?;
                let (s0, s1) = (segments(a), segments(&scaled));
                let same = s0.len() == s1.len()
                    && s0.iter().zip(&s1).all(|(x, y)| {
                        x.index == y.index
                            && x.lo * lambda == y.lo
                            && x.hi * lambda == y.hi
                            && x.weight == y.weight
                    });
                c.check(
                    same,
                    0.0,
                    "segments of la are la-scaled segments of a",
                    || format!("a = [{a}], lambda = {lambda}"),
                );
                let d = a.offsets();
                let top = d[d.len() - 1] + 1.0;
                // Near a junction the root amplifies the rounding of the
                // scaled offsets, so keep the same margin as the limit suite.
                let ts = (1..=20)
                    .map(|k| top * k as f64 / 20.5)
                    .filter(|t| d.iter().all(|dk| (dk - t).abs() >= 1e-2));
                for t in ts {
                    let lhs = boundary_im_closed(&scaled, lambda * t)?;
                    let rhs = lambda * boundary_im_closed(a, t)?;
                    let err = (lhs - rhs).abs();
                    c.check(
                        err <= 1e-12 * rhs.abs(),
                        err,
                        "closed(la, lt) = l closed(a, t)",
                        || format!("a = [{a}], t = {t}, lambda = {lambda}"),
                    );
                }
            }
            Ok(())
        })
        .0,
    );

    // quadrature
    suites.push(
        run_suite(
            "quadrature.polynomial_exactness",
            &instances[..1],
            |c, _| {
                for k in 0..=22 {
                    let (v, _, _) = kronrod15(&|t: f64| Complex64::new(t.powi(k), 0.0), 0.0, 1.0);
                    let want = 1.0 / (k as f64 + 1.0);
                    let rel = (v.re - want).abs() / want;
                    c.check(rel <= 1e-13, rel, "K15 exact to degree 22 on [0,1]", || {
                        format!("degree {k}")
                    });
                }
                Ok(())
            },
        )
        .0,
    );
    {
        let loose = QuadratureSpec {
            abs_tol: 1e-6,
            rel_tol: 1e-6,
            ..quad
        };
        let tight = QuadratureSpec {
            abs_tol: 1e-7,
            rel_tol: 1e-7,
            ..quad
        };
        // At least 200 integrands over the instances that have segments.
        let with_segments = instances.iter().filter(|a| !segments(a).is_empty()).count();
        let per_instance = 200usize.div_ceil(with_segments.max(1));
        let (mut report, tally) =
            run_suite("quadrature.error_estimate_honesty", &instances, |c, a| {
                let segs = segments(a);
                let grid = z_grid(a.min());
                for (k, s) in segs
                    .iter()
                    .cycle()
                    .take(if segs.is_empty() { 0 } else { per_instance })
                    .enumerate()
                {
                    let z = grid[(c.case + k) % grid.len()];
                    let f = |t: f64| (z + t).inv() * s.density(t);
                    let rough = integrate(f, s.lo, s.hi, &loose)?;
                    let fine = integrate(f, s.lo, s.hi, &tight)?;
                    let truth = (rough.value - fine.value).norm();
                    c.tally.1 += 1;
                    if truth <= 10.0 * rough.error_estimate {
                        c.tally.0 += 1;
                    }
                    c.check(true, truth, "", String::new);
                }
                Ok(())
            });
        require_fraction(
            &mut report,
            tally,
            0.95,
            "true error <= 10 x estimate in >= 95% of integrands",
        );
        suites.push(report);
    }
    suites.push(
        run_suite("quadrature.additivity", &instances, |c, a| {
            let mut rng = case_rng(seed, c.case, 3);
            for s in segments(a).iter().take(2) {
                let m = rng.gen_range(s.lo..s.hi);
                let f = |t: f64| s.density(t);
                let whole = integrate_real(f, s.lo, s.hi, &quad)?;
                let left = integrate_real(f, s.lo, m, &quad)?;
                let right = integrate_real(f, m, s.hi, &quad)?;
                let err = (whole.value - left.value - right.value).abs();
                let budget = whole.error_estimate + left.error_estimate + right.error_estimate;
                c.check(
                    err <= budget,
                    err,
                    "I[lo,hi] = I[lo,m] + I[m,hi] within estimates",
                    || format!("a = [{a}], segment {}, m = {m}", s.index),
                );
            }
            Ok(())
        })
        .0,
    );
    suites.push(
        run_suite("quadrature.affine_covariance", &instances, |c, a| {
            let (alpha, beta) = (2.5, -0.3);
            for s in segments(a).iter().take(2) {
                let direct = integrate_real(|t| s.density(t), s.lo, s.hi, &quad)?;
                let mapped = integrate_real(
                    |u| alpha * s.density(alpha * u + beta),
                    (s.lo - beta) / alpha,
                    (s.hi - beta) / alpha,
                    &quad,
                )?;
                let err = (direct.value - mapped.value).abs();
                let budget = direct.error_estimate + mapped.error_estimate;
                c.check(
                    err <= budget,
                    err,
                    "t = 2.5 s - 0.3 reproduces the integral",
                    || format!("a = [{a}], segment {}", s.index),
                );
            }
            Ok(())
        })
        .0,
    );

    // representation
    let scale = 1.0 + config.perturb_density;
    suites.push(
        run_suite("representation.oracle_equivalence", &instances, |c, a| {
            for z in z_grid(a.min()) {
                let r = evaluate_scaled(a, z, &quad, scale)?;
                let tol = 1e-8f64.max(1e-8 * r.direct_value.norm());
                c.check(
                    r.abs_error <= tol,
                    r.abs_error,
                    "|repr - direct| <= max(1e-8, 1e-8 |G|)",
                    || format!("a = [{a}], z = {}", fmt_z(z)),
                );
            }
            Ok(())
        })
        .0,
    );
    suites.push(
        run_suite("representation.am_gm", &instances, |c, a| {
            let gap = am_gm_gap(a, &quad)?;
            let direct = arithmetic_mean(a) - geometric_mean(a);
            let inputs = || format!("a = [{a}], gap = {gap}");
            c.check(gap >= -1e-10, (-gap).max(0.0), "gap >= -1e-10", inputs);
            if a.is_constant() {
                c.check(
                    gap.abs() <= 1e-9,
                    gap.abs(),
                    "constant sequence: gap = 0 +- 1e-9",
                    inputs,
                );
            }
            if a.max() / a.min() >= 1.1 {
                c.check(gap > 1e-6, 0.0, "max/min >= 1.1: gap > 1e-6", inputs);
            }
            let err = (gap - direct).abs();
            c.check(
                err <= 1e-9,
                err,
                "gap_direct = gap_repr within 1e-9",
                inputs,
            );
            Ok(())
        })
        .0,
    );
    suites.push(
        run_suite("representation.herglotz", &instances, |c, a| {
            let mut g = InstanceGenerator::new(case_rng(seed, c.case, 4).gen());
            for _ in 0..5 {
                let z = g.upper_half_plane_point();
                let h = h_n(a, z)?;
                c.check(
                    h.im >= -1e-10,
                    (-h.im).max(0.0),
                    "im h(z) >= -1e-10 for im z > 0",
                    || format!("a = [{a}], z = {}", fmt_z(z)),
                );
                let via = h_via_representation(a, z, &quad)?;
                let err = (via - h).norm();
                c.check(
                    err <= 1e-8f64.max(1e-8 * h.norm()),
                    err,
                    "direct h agrees with representation",
                    || format!("a = [{a}], z = {}", fmt_z(z)),
                );
            }
            Ok(())
        })
        .0,
    );
    {
        let remainder_grid = |a: &Sequence| -> Result<Vec<[f64; 5]>> {
            let start = 0.1f64;
            let ratio = ((1e3 + a.min()) / start).powf(1.0 / 11.0);
            (0..12)
                .map(|j| {
                    let base = -a.min() + start * ratio.powi(j);
                    let mut row = [0.0; 5];
                    for (k, slot) in row.iter_mut().enumerate() {
                        *slot = remainder(a, base + 0.1 * k as f64, &quad)?.value.re;
                    }
                    Ok(row)
                })
                .collect()
        };
        suites.push(
            run_suite(
                "representation.complete_monotonicity",
                &instances,
                |c, a| {
                    for row in remainder_grid(a)? {
                        let mut diffs = row.to_vec();
                        for m in 0..5 {
                            let signed = if m % 2 == 0 { diffs[0] } else { -diffs[0] };
                            c.check(
                                signed >= -1e-8,
                                (-signed).max(0.0),
                                "(-1)^m D^m R >= -1e-8, m <= 4",
                                || format!("a = [{a}], m = {m}, row = {row:?}"),
                            );
                            diffs = diffs.windows(2).map(|w| w[1] - w[0]).collect();
                        }
                    }
                    Ok(())
                },
            )
            .0,
        );
        suites.push(
            run_suite("representation.monotone_decrease", &instances, |c, a| {
                // Ascending in z within a row, and row starts are ascending.
                let rows = remainder_grid(a)?;
                let starts: Vec<f64> = rows.iter().map(|row| row[0]).collect();
                for seq in rows
                    .iter()
                    .map(|row| row.as_slice())
                    .chain([starts.as_slice()])
                {
                    for w in seq.windows(2) {
                        let step = w[1] - w[0];
                        c.check(
                            step < 1e-10,
                            step.max(0.0),
                            "R(z2) < R(z1) + 1e-10 for z2 > z1",
                            || format!("a = [{a}], values = {seq:?}"),
                        );
                    }
                }
                Ok(())
            })
            .0,
        );
    }
    suites.push(
        run_suite("representation.large_z_decay", &instances, |c, a| {
            let m0 = density_moment(a, 0, &quad)?;
            for big in [1e3, 1e4, 1e5] {
                let dev = f_n_minus_mean(a, big)?.norm();
                c.check(
                    dev <= m0 / big * (1.0 + 1e-2),
                    dev,
                    "|f(R) - A| <= M0/R (1 + 1e-2)",
                    || format!("a = [{a}], R = {big}"),
                );
            }
            let scaled = 1e5 * f_n_minus_mean(a, 1e5)?.norm();
            let err = (scaled - m0).abs();
            c.check(
                err <= 1e-2 * m0,
                err,
                "R |f(R) - A| within 1% of M0 at R = 1e5",
                || format!("a = [{a}], M0 = {m0}, R|f-A| = {scaled}"),
            );
            Ok(())
        })
        .0,
    );

    // contour
    let coarse = ContourSpec::new(1e-3, 1e3).expect("valid contour");
    let fine = ContourSpec::new(5e-4, 2e3).expect("valid contour");
    suites.push(
        run_suite(
            "contour.decomposition_identity",
            contour_instances,
            |c, a| {
                let z = contour_point(&mut case_rng(seed, c.case, 5));
                let b = cauchy_eval(a, z, &coarse)?;
                let ok = b.small_arc + b.outer_arc + b.upper_line + b.lower_line == b.total;
                c.check(ok, 0.0, "small + outer + upper + lower = total", || {
                    format!("a = [{a}], z = {}", fmt_z(z))
                });
                Ok(())
            },
        )
        .0,
    );
    suites.push(
        run_suite(
            "contour.cauchy_reconstruction",
            contour_instances,
            |c, a| {
                let z = contour_point(&mut case_rng(seed, c.case, 5));
                let h = h_n(a, z)?;
                let err_coarse = (cauchy_eval(a, z, &coarse)?.total - h).norm();
                let err_fine = (cauchy_eval(a, z, &fine)?.total - h).norm();
                let inputs = || {
                    format!(
                        "a = [{a}], z = {}, errors = ({err_coarse:e}, {err_fine:e})",
                        fmt_z(z)
                    )
                };
                c.check(
                    err_coarse <= 1e-3,
                    err_coarse,
                    "|total - h(z)| <= 1e-3 at eps=1e-3, r=1e3",
                    inputs,
                );
                let decreased = err_fine < err_coarse || err_coarse <= 1e-12;
                c.check(
                    decreased,
                    err_fine,
                    "error decreases when eps halves and r doubles",
                    inputs,
                );
                Ok(())
            },
        )
        .0,
    );
    suites.push(
        run_suite("contour.line_reflection", contour_instances, |c, a| {
            let z = Complex64::new(contour_point(&mut case_rng(seed, c.case, 5)).norm(), 0.0);
            for k in 0..20 {
                let x = -coarse.r * (k as f64 / 19.0).powi(3);
                let (up, down) = line_integrands(a, z, coarse.eps, x);
                let err = (down - up.conj()).norm();
                c.check(
                    err <= 1e-12 * up.norm().max(1.0),
                    err,
                    "lower integrand = conj(upper) for real z",
                    || format!("a = [{a}], z = {}, x = {x}", fmt_z(z)),
                );
            }
            Ok(())
        })
        .0,
    );
    suites.push(
        run_suite("contour.limit_attribution", contour_instances, |c, a| {
            let z = contour_point(&mut case_rng(seed, c.case, 5));
            let b = cauchy_eval(a, z, &coarse)?;
            let offsets = a.offsets();
            let inputs = || format!("a = [{a}], z = {}", fmt_z(z));
            let err = (b.outer_arc - means::offset_mean(&offsets)).norm();
            c.check(err <= 1e-3, err, "outer arc -> A(a - a_1)", inputs);
            let lines = b.upper_line + b.lower_line;
            let limit = -stieltjes_sum(&offsets, z, &quad, 1.0)?.value;
            let err = (lines - limit).norm();
            c.check(
                err <= 1e-3,
                err,
                "lines -> -(1/pi) sum sin(l pi/n) int ... /(t+z)",
                inputs,
            );
            let err = b.small_arc.norm();
            c.check(err <= 1e-3, err, "small arc -> 0", inputs);
            Ok(())
        })
        .0,
    );

    let passed = suites.iter().all(|s| s.passed);
    VerifyReport {
        seed: config.seed,
        cases: instances.len(),
        perturb_density: config.perturb_density,
        passed,
        suites,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(cases: usize) -> VerifyConfig {
        VerifyConfig {
            cases,
            contour_cases: 2,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn constant_sequence_passes_everything() {
        let config = VerifyConfig {
            sequence: Some(Sequence::constant(5.0, 3).unwrap()),
            ..small(1)
        };
        let report = run_verify(&config);
        assert!(report.passed, "{}", report.to_table());
        assert_eq!(report.suite("representation.am_gm").unwrap().max_error, 0.0);
    }

    #[test]
    fn small_random_corpus_passes() {
        let report = run_verify(&small(6));
        assert!(
            report.passed,
            "{}\n{:#?}",
            report.to_table(),
            report
                .suites
                .iter()
                .filter(|s| !s.passed)
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn perturbed_density_is_caught() {
        let config = VerifyConfig {
            perturb_density: 1e-3,
            sequence: Some(Sequence::new(vec![1.0, 2.0, 3.0]).unwrap()),
            ..small(2)
        };
        let report = run_verify(&config);
        assert!(!report.passed);
        assert!(
            !report
                .suite("representation.oracle_equivalence")
                .unwrap()
                .passed
        );
    }
}
