use super::{Check, Suite, VerifyConfig};
use crate::error::Result;
use crate::fan::fan_grid;
use crate::linalg::{C64, ONE};
use crate::mh::audit::{builtin_corpus, norm_transform_audit, STABILITY_LIMIT};
use crate::mh::fan_ext::{build_fan_multiplier, AngleCutoff};
use crate::mh::nu::{nu_estimate_audit, NuGrid, NuId};
use crate::mh::sloc::{mh_sloc_norm, sloc_norm_fn, windowed_derivative_sloc, Derivatives, SlocParams};
use crate::multiplier::MultiplierSpec;

/// `sup` at `4N` over `sup` at `N` for the jump multiplier at `τ = 1`.
pub fn jump_growth(resolution: usize) -> Result<f64> {
    let m = MultiplierSpec::jump(1.5)?;
    let p = SlocParams { resolution, ..SlocParams::new(1.0) };
    let coarse = mh_sloc_norm(&m, &p)?.sup;
    let fine = mh_sloc_norm(&m, &SlocParams { resolution: 4 * resolution, ..p })?.sup;
    Ok(fine / coarse)
}

/// Fitted `C = max_u ‖s^{iu}‖/(1+u)^τ` over `u ∈ {1, 2, 4}`, and whether the
/// norms increase with `u`.
pub fn imaginary_power_fit(tau: f64, j_max: i32, resolution: usize) -> Result<(f64, bool)> {
    let mut c = 0.0f64;
    let mut last = 0.0;
    let mut increasing = true;
    for u in [1.0, 2.0, 4.0] {
        let v = mh_sloc_norm(&MultiplierSpec::imaginary_power(u)?, &SlocParams { j_max, resolution, ..SlocParams::new(tau) })?.sup;
        increasing &= v > last;
        last = v;
        c = c.max(v / (1.0 + u).powf(tau));
    }
    Ok((c, increasing))
}

/// Worst two-grid stability of each `ν` audit over `i ≤ 1`, `j ≤ 3` on
/// `ξ > (n+1)|λ|`.
pub fn nu_stability(id: NuId, n: usize) -> Result<f64> {
    let grid = NuGrid::new(n as f64 + 1.0);
    let mut worst = 1.0f64;
    for i in 0..=1 {
        for j in 0..=3 {
            let a = nu_estimate_audit(id, n, i, j, &grid)?;
            let b = nu_estimate_audit(id, n, i, j, &grid.refined())?;
            let r = if a == 0.0 && b == 0.0 { 1.0 } else { a.max(b) / a.min(b) };
            worst = worst.max(r);
        }
    }
    Ok(worst)
}

pub(super) fn run(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let su = Suite::MhNorms;
    let base = SlocParams { j_max: cfg.j_max, resolution: cfg.resolution, ..SlocParams::new(cfg.tau) };
    let mut out = Vec::new();

    let one = mh_sloc_norm(&MultiplierSpec::constant(ONE), &SlocParams { tau: 2.0, ..base })?;
    out.push(Check::at_most(su, "constant-scale-free", "mh-norm-definition", one.spread() - 1.0, 1e-12));

    let heat = MultiplierSpec::heat(1.0)?;
    let a = mh_sloc_norm(&heat, &base)?.sup;
    let b = mh_sloc_norm(&heat, &SlocParams { resolution: 2 * cfg.resolution, ..base })?.sup;
    out.push(Check::at_most(su, "heat-refinement", "mh-norm-definition", (b / a - 1.0).abs(), 0.02));

    let (c1, inc1) = imaginary_power_fit(cfg.tau, cfg.j_max, cfg.resolution)?;
    let (c2, inc2) = imaginary_power_fit(cfg.tau, cfg.j_max + 2, cfg.resolution)?;
    out.push(Check::at_most(su, "imaginary-power-fit-stability", "mh-norm-definition", c1.max(c2) / c1.min(c2), STABILITY_LIMIT));
    out.push(Check::at_most(su, "imaginary-power-increasing", "mh-norm-definition", f64::from(u8::from(!(inc1 && inc2))), 0.0));

    // divergence under refinement; the growth is of square-root type, see the README
    out.push(Check::at_least(su, "jump-norm-grows", "mh-norm-smoothness-threshold", jump_growth(cfg.resolution)?, 1.5));

    let bump = MultiplierSpec::dyadic_bump(0);
    let x = mh_sloc_norm(&bump, &base)?.sup;
    let y = sloc_norm_fn(&|s| bump.eval(4.0 * s), &base)?.sup;
    out.push(Check::at_most(su, "dyadic-scale-consistency", "mh-norm-definition", (x - y).abs() / x, 0.0));

    let mut mono = 0.0f64;
    let mut last = 0.0;
    for tau in [0.0, 0.5, 1.0, 1.5, 2.0] {
        let v = mh_sloc_norm(&heat, &SlocParams { tau, ..base })?.sup;
        mono = mono.max(last - v);
        last = v;
    }
    out.push(Check::at_most(su, "tau-monotone", "mh-norm-definition", mono.max(0.0), 0.0));

    for case in builtin_corpus() {
        let r = norm_transform_audit(&case)?;
        out.push(Check::at_most(su, &format!("audit-{}", r.label), "norm-transform-equivalence", r.stability, STABILITY_LIMIT));
    }

    let mut ext = 0.0f64;
    let mut cut = 0.0f64;
    for &n in &cfg.n_values {
        let alpha = 0.5 * n as f64;
        let mu = build_fan_multiplier(&heat, alpha, 0.25, n)?;
        let psi = AngleCutoff::new(0.5, n)?;
        for p in fan_grid(n, &cfg.fan_lambdas, cfg.fan_m_max)? {
            let want = heat.eval(p.xi + p.lambda * p.lambda - alpha * p.lambda)?;
            ext = ext.max((mu.eval(p.lambda, p.xi)? - want).norm());
            cut = cut.max((psi.eval(p.lambda, p.xi) - 1.0).abs());
        }
        cut = cut.max(psi.eval(1.0, (n as f64 - 0.5) * 0.9));
    }
    let mu = build_fan_multiplier(&heat, 0.5, 0.25, 1)?;
    ext = ext.max((mu.eval(1.0, 1.0)? - C64::from((-1.5f64).exp())).norm());
    out.push(Check::at_most(su, "fan-extension-on-fan", "fan-multiplier-extension", ext, 1e-12));
    out.push(Check::at_most(su, "angle-cutoff-support", "angle-cutoff", cut, 0.0));

    // windowed-derivative characterisation, finite differences against closed forms
    let f = |l: f64, x: f64| Ok(C64::from((-0.5 * l - x / 3.0).exp()));
    let exact = |i: usize, j: usize, l: f64, x: f64| (-0.5f64).powi(i as i32) * (-1.0f64 / 3.0).powi(j as i32) * (-0.5 * l - x / 3.0).exp();
    let mut wd = 0.0f64;
    for (i, j) in crate::mh::sampled::derivative_orders(2, 1) {
        let a = windowed_derivative_sloc(&Derivatives::FiniteDifference(&f), i, j, crate::mh::sloc::MIN_J, 48)?;
        let b = windowed_derivative_sloc(&Derivatives::Exact(&exact), i, j, crate::mh::sloc::MIN_J, 48)?;
        wd = wd.max((a / b - 1.0).abs());
    }
    out.push(Check::at_most(su, "windowed-derivatives", "windowed-derivative-norm", wd, 0.05));

    for &n in &cfg.n_values {
        for id in NuId::all() {
            out.push(Check::at_most(
                su,
                &format!("nu-{}-n{n}", id.label()),
                "nu-pointwise-estimates",
                nu_stability(id, n)?,
                STABILITY_LIMIT,
            ));
        }
    }
    let env = NuId::all()
        .into_iter()
        .filter(|id| matches!(id, NuId::Nu0 { .. }))
        .map(|id| nu_estimate_audit(id, 1, 0, 0, &NuGrid::new(2.0)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    out.push(Check::at_most(su, "nu0-envelope", "nu-pointwise-estimates", env, 3f64.sqrt()));
    Ok(out)
}
