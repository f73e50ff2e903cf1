use std::f64::consts::{PI, TAU};
use std::path::Path;

use spinon_core::dcf::{self, GridSpec, COMPONENT_FACTOR};
use spinon_core::ed::{self, ChainSpec, MomentumConvention};
use spinon_core::formfactor::QuadratureSpec;
use spinon_core::kinematics::{band_boundaries, spinon_energy, spinon_momentum, KinematicPoint, Rapidity};
use spinon_core::table::{format_float, Table, Value};
use spinon_core::xxz::{self, SpectralParam};

use crate::config::{DispersionOpts, EdOpts, GridOpts, LimitOpts, Model, SumruleOpts};
use crate::{CliError, Context};

const NORMALIZATION_NOTE: &str =
    "raw two-spinon values; no per-site or 2pi factor applied; s_xx = s_yy = s_zz = 4 s_pm; S = 0 on both band edges";

fn fmt(x: f64) -> String {
    format_float(x).unwrap_or_else(|| "nan".into())
}

fn stamp(t: &mut Table, command: &str) {
    t.meta("tool", format!("spinon {}", env!("CARGO_PKG_VERSION")))
        .meta("command", command);
}

fn stamp_quadrature(t: &mut Table, spec: &QuadratureSpec) {
    t.meta("rel_tol", fmt(spec.rel_tol))
        .meta("abs_tol", fmt(spec.abs_tol))
        .meta("split_point", fmt(spec.split_point))
        .meta("max_subdivisions", spec.max_subdivisions);
}

fn write(ctx: &Context, table: &Table, path: &Path) -> Result<(), CliError> {
    table
        .write(path, ctx.format)
        .map_err(|e| CliError::Compute(format!("writing {}: {e}", path.display())))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn positive_count(n: usize, name: &str) -> Result<usize, CliError> {
    if n < 2 {
        return Err(CliError::Usage(format!("{name} must be at least 2, got {n}")));
    }
    Ok(n)
}

pub fn dispersion(ctx: &Context, o: DispersionOpts) -> Result<(), CliError> {
    let model = o.model.unwrap_or(Model::Xxx);
    let (lo, hi) = (o.min.unwrap_or(-5.0), o.max.unwrap_or(5.0));
    let n = positive_count(o.points.unwrap_or(101), "points")?;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(CliError::Usage(format!("need finite min < max, got [{lo}, {hi}]")));
    }
    let grid = dcf::linspace(lo, hi, n);
    let table = match model {
        Model::Xxx => {
            let mut t = Table::new("spinon.dispersion.xxx", &["beta", "e", "p"]);
            stamp(&mut t, "dispersion");
            t.meta("model", "xxx").meta("e", "pi/cosh(beta)").meta("p", "-pi/2 - atan(sinh(beta))");
            for b in grid {
                let r = Rapidity::new(b)?;
                t.push(vec![b.into(), spinon_energy(r).into(), spinon_momentum(r).into()]);
            }
            t
        }
        Model::Xxz => {
            let q = o
                .q
                .ok_or_else(|| CliError::Usage("xxz needs --q in the interval (-1, 0)".into()))?;
            let aniso = xxz::solve_nome(q)?;
            let mut t = Table::new("spinon.dispersion.xxz", &["alpha", "e", "p", "tau_abs"]);
            stamp(&mut t, "dispersion");
            t.meta("model", "xxz")
                .meta("q", fmt(q))
                .meta("delta", fmt(aniso.delta()))
                .meta("epsilon", fmt(aniso.epsilon))
                .meta("m", fmt(aniso.m))
                .meta("m1", fmt(aniso.m1))
                .meta("K", fmt(aniso.k))
                .meta("K_prime", fmt(aniso.k_prime))
                .meta("tau_phase", "arg tau + p = pi (mod 2pi)");
            for alpha in grid {
                let tau = xxz::tau(SpectralParam { alpha }, &aniso)?;
                t.push(vec![
                    alpha.into(),
                    xxz::xxz_energy(alpha, &aniso).into(),
                    xxz::xxz_momentum(alpha, &aniso).into(),
                    tau.norm().into(),
                ]);
            }
            t
        }
    };
    let stem = match model {
        Model::Xxx => "dispersion_xxx",
        Model::Xxz => "dispersion_xxz",
    };
    write(ctx, &table, &ctx.output_path(o.output, stem))
}

/// One `key=value` line for `(w, k)`.
pub fn dcf_point_line(w: f64, k: f64, spec: &QuadratureSpec) -> Result<String, CliError> {
    let v = dcf::s2_pm(KinematicPoint::new(w, k)?, spec)?;
    let mut line = format!(
        "w={} k={} s_pm={} s_xx={} in_band={}",
        fmt(w),
        fmt(k),
        fmt(v.s_pm),
        fmt(COMPONENT_FACTOR * v.s_pm),
        v.in_band
    );
    if let Some(pair) = v.pair {
        line.push_str(&format!(" beta1={} beta2={}", fmt(pair.beta1().value()), fmt(pair.beta2().value())));
    }
    Ok(line)
}

pub fn dcf_point(ctx: &Context, w: f64, k: f64) -> Result<(), CliError> {
    let spec = ctx.quadrature.spec()?;
    println!("{}", dcf_point_line(w, k, &spec)?);
    Ok(())
}

pub fn dcf_grid(ctx: &Context, o: GridOpts) -> Result<(), CliError> {
    let spec = ctx.quadrature.spec()?;
    let grid = GridSpec {
        k_min: o.k_min.unwrap_or(0.0),
        k_max: o.k_max.unwrap_or(TAU),
        n_k: o.n_k.unwrap_or(200),
        w_min: o.w_min.unwrap_or(0.0),
        w_max: o.w_max.unwrap_or(TAU),
        n_w: o.n_w.unwrap_or(200),
    };
    grid.validate()?;
    if o.workers == Some(0) {
        return Err(CliError::Usage("workers must be positive".into()));
    }
    let result = dcf::evaluate_grid(&grid, &spec, o.workers)?;
    let mut t = Table::new("spinon.dcf.grid", &["k", "w", "s_pm", "s_xx"]);
    stamp(&mut t, "dcf-grid");
    stamp_quadrature(&mut t, &spec);
    t.meta("k_range", format!("{} {} {}", fmt(grid.k_min), fmt(grid.k_max), grid.n_k))
        .meta("w_range", format!("{} {} {}", fmt(grid.w_min), fmt(grid.w_max), grid.n_w))
        .meta("normalization", NORMALIZATION_NOTE)
        .meta("row_order", "k-major")
        .meta("failures", result.failures.len());
    for r in &result.rows {
        t.push(vec![r.k.into(), r.w.into(), r.s_pm.into(), r.s_xx.into()]);
    }
    write(ctx, &t, &ctx.output_path(o.output, "dcf_grid"))?;
    if result.failures.is_empty() {
        Ok(())
    } else {
        for f in result.failures.iter().take(10) {
            eprintln!("failed at k={} w={}: {}", fmt(f.k), fmt(f.w), f.message);
        }
        Err(CliError::Compute(format!("{} grid points failed", result.failures.len())))
    }
}

pub fn sumrule(ctx: &Context, o: SumruleOpts) -> Result<(), CliError> {
    let spec = ctx.quadrature.spec()?;
    let ks = o.k.unwrap_or_else(|| vec![PI / 2.0]);
    if ks.is_empty() {
        return Err(CliError::Usage("need at least one k".into()));
    }
    let mut t = Table::new(
        "spinon.dcf.sumrule",
        &["k", "w_lower", "w_upper", "weight_pm", "abserr_pm", "weight_zz"],
    );
    stamp(&mut t, "sumrule");
    stamp_quadrature(&mut t, &spec);
    t.meta("outer_tolerance_factor", fmt(dcf::OUTER_TOLERANCE_FACTOR))
        .meta("weight", "integral of s over the open band at fixed k")
        .meta("normalization", NORMALIZATION_NOTE);
    if o.total.unwrap_or(false) {
        let rel = o.total_rel_tol.unwrap_or(1e-6);
        let z = dcf::zone_weight(&spec, rel)?;
        t.meta("total_weight_pm", fmt(z.value))
            .meta("total_weight_zz", fmt(COMPONENT_FACTOR * z.value))
            .meta("total_weight_abserr", fmt(z.abserr))
            .meta("total_weight_definition", "(1/2pi) integral over the zone of the fixed-k weight");
    }
    let mut divergent = Vec::new();
    for &k in &ks {
        let band = band_boundaries(k)?;
        let (weight, abserr) = match dcf::fixed_k_weight(k, &spec) {
            Ok(r) => (r.fixed_k_weight, r.abserr),
            Err(spinon_core::Error::DivergentWeight(_)) => {
                divergent.push(fmt(k));
                (f64::INFINITY, f64::NAN)
            }
            Err(e) => return Err(e.into()),
        };
        t.push(vec![
            k.into(),
            band.lower.into(),
            band.upper.into(),
            weight.into(),
            abserr.into(),
            (COMPONENT_FACTOR * weight).into(),
        ]);
    }
    if !divergent.is_empty() {
        t.meta("divergent_at", divergent.join(" "))
            .meta("divergence", "S ~ sqrt(ln(1/w))/w at k = pi; weight written as empty");
    }
    write(ctx, &t, &ctx.output_path(o.output, "sumrule"))
}

pub fn ed(ctx: &Context, o: EdOpts) -> Result<(), CliError> {
    let chain = ChainSpec::new(o.sites.unwrap_or(8), o.delta.unwrap_or(-1.0))?;
    let eta = o.eta.unwrap_or(ed::DEFAULT_ETA);
    let report = ed::band_support_report(&chain, eta)?;
    let n = chain.n_sites;
    let conv = report.convention;

    let common = |t: &mut Table| {
        stamp(t, "ed");
        t.meta("sites", n)
            .meta("delta", fmt(chain.delta))
            .meta("ground_energy", fmt(report.ground_energy))
            .meta("ground_k_index", report.ground_k_index)
            .meta("momentum_convention", conv.name())
            .meta("in_band_weight_direct", fmt(report.direct_in_band))
            .meta("in_band_weight_pi_shifted", fmt(report.shifted_in_band))
            .meta("window_tolerance", fmt(report.window_tolerance))
            .meta("operator", "sigma^-_k = N^(-1/2) sum_n exp(i k n) sigma^-_n");
    };

    let mut lines = Table::new(
        "spinon.ed.lines",
        &["k_index", "k", "omega", "weight", "w_lower", "w_upper"],
    );
    common(&mut lines);
    let mut curve = Table::new("spinon.ed.curve", &["k_index", "k", "omega", "s"]);
    common(&mut curve);
    curve.meta("eta", fmt(eta)).meta("lineshape", "unit-area Lorentzian per line");
    for s in &report.spectra {
        let k = conv.band_momentum(&chain, s.k_index);
        let band = band_boundaries(k)?;
        for l in &s.lines {
            lines.push(vec![
                s.k_index.into(),
                k.into(),
                l.omega.into(),
                l.weight.into(),
                band.lower.into(),
                band.upper.into(),
            ]);
        }
        for &(w, v) in &s.curve {
            curve.push(vec![s.k_index.into(), k.into(), w.into(), v.into()]);
        }
    }

    let analytic = o.analytic.unwrap_or(true) && chain.delta == -1.0;
    let spec = ctx.quadrature.spec()?;
    let mut summary = Table::new(
        "spinon.ed.band_support",
        &[
            "k_index",
            "k",
            "total_weight",
            "static_weight",
            "in_band_weight",
            "in_band_fraction",
            "lowest_excitation",
            "lowest_line",
            "analytic_weight",
            "ratio",
        ],
    );
    common(&mut summary);
    summary
        .meta("total_in_band_fraction", fmt(report.in_band_fraction()))
        .meta("ratio", "2pi * in_band_weight / analytic fixed-k weight of s_pm")
        .meta("analytic_weight_at_pi", "divergent (S ~ sqrt(ln(1/w))/w at w -> 0); written as empty");
    if analytic {
        stamp_quadrature(&mut summary, &spec);
    }
    for r in &report.rows {
        let weight = if analytic && r.k > 0.0 && r.k < TAU {
            match dcf::fixed_k_weight(r.k, &spec) {
                Ok(w) => w.fixed_k_weight,
                Err(spinon_core::Error::DivergentWeight(_)) => f64::INFINITY,
                Err(e) => return Err(e.into()),
            }
        } else {
            f64::NAN
        };
        let ratio = if weight.is_finite() {
            TAU * r.in_band_weight / weight
        } else {
            f64::NAN
        };
        summary.push(vec![
            r.k_index.into(),
            r.k.into(),
            r.total_weight.into(),
            r.static_weight.into(),
            r.in_band_weight.into(),
            r.in_band_fraction().into(),
            r.lowest_excitation.into(),
            r.lowest_line.into(),
            Value::Float(weight),
            Value::Float(ratio),
        ]);
    }
    let dir = &ctx.output_dir;
    write(ctx, &lines, &dir.join(format!("ed_n{n}_lines.{}", ctx.extension())))?;
    write(ctx, &curve, &dir.join(format!("ed_n{n}_curve.{}", ctx.extension())))?;
    write(ctx, &summary, &dir.join(format!("ed_n{n}_report.{}", ctx.extension())))?;
    if conv != MomentumConvention::PiShifted {
        eprintln!("note: momentum convention resolved to {}", conv.name());
    }
    Ok(())
}

pub fn limit_check(ctx: &Context, o: LimitOpts) -> Result<(), CliError> {
    let eps = o.eps.unwrap_or_else(|| vec![0.5, 0.2, 0.1, 0.05]);
    let betas = o.beta.unwrap_or_else(|| vec![0.0, 0.5, 1.0, 2.0]);
    let report = xxz::isotropic_limit_check(&eps, &betas)?;
    let mut t = Table::new(
        "spinon.xxz.limit",
        &[
            "epsilon",
            "beta",
            "energy",
            "energy_target",
            "energy_error",
            "momentum",
            "momentum_target",
            "momentum_error",
        ],
    );
    stamp(&mut t, "limit-check");
    t.meta("mapping", "q = -exp(-eps), alpha = -eps beta / pi")
        .meta("energy_scale", fmt(xxz::ISOTROPIC_ENERGY_SCALE))
        .meta("extrapolated_scale", fmt(report.extrapolated_scale));
    for s in &report.series {
        let orders: Vec<String> = s.observed_orders.iter().map(|x| fmt(*x)).collect();
        t.meta(&format!("beta={} monotone", fmt(s.beta)), s.monotone)
            .meta(&format!("beta={} observed_orders", fmt(s.beta)), orders.join(" "));
    }
    for s in &report.series {
        for p in &s.samples {
            t.push(vec![
                p.epsilon.into(),
                p.beta.into(),
                p.energy.into(),
                p.energy_target.into(),
                p.energy_error().into(),
                p.momentum.into(),
                p.momentum_target.into(),
                p.momentum_error().into(),
            ]);
        }
    }
    write(ctx, &t, &ctx.output_path(o.output, "limit_check"))
}
