//! File-producing drivers behind the command-line subcommands.

use std::path::{Path, PathBuf};

use crate::deriv_kernels::conformance_table;
use crate::design::ExperimentDesign;
use crate::estimator::EstimatorError;
use crate::laplace_kernel::RationalLaplaceKernel;
use crate::lrd_noise::{eigen_envelope, NoiseModel};

use super::config::ExperimentConfig;
use super::output::{fmt_f64, write_csv, write_csv_file, Metadata};
use super::risk::{
    fixed_bandwidth_oracle, lepski_tail_study, mc_risk, risk_decomposition, EstimatorSettings,
    RiskReport,
};
use super::scenario::Scenario;
use super::HarnessError;

const SUP_NOTE: &str =
    "risk evaluated at a fixed truth (lower envelope of the worst case over the smoothness class)";

/// `kernels check`: moment conformance table for `L ≤ max_order`.
pub fn kernel_check<W: std::io::Write>(max_order: usize, out: W) -> Result<(), HarnessError> {
    let rows = conformance_table(max_order).map_err(EstimatorError::from)?;
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|c| {
            vec![
                c.order.to_string(),
                c.j.to_string(),
                c.l.to_string(),
                fmt_f64(c.moment),
                fmt_f64(c.target),
                fmt_f64(c.abs_error),
            ]
        })
        .collect();
    let meta = Metadata::new(None, None).with("max_order", max_order);
    write_csv(
        out,
        &meta,
        &["L", "j", "l", "moment", "target", "abs_error"],
        &body,
    )
}

/// `noise eigs`: extreme eigenvalues of the fGn covariance and the log–log
/// slope of `λ_max`.
pub fn noise_eigs<W: std::io::Write>(
    alpha: f64,
    n_list: &[usize],
    out: W,
) -> Result<(), HarnessError> {
    let model = NoiseModel::fgn(alpha, 1.0)?;
    let env = eigen_envelope(&model, n_list)?;
    let body: Vec<Vec<String>> = env
        .rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                fmt_f64(r.lambda_min),
                fmt_f64(r.lambda_max),
                fmt_f64(env.slope),
            ]
        })
        .collect();
    let meta = Metadata::new(None, None)
        .with("alpha", alpha)
        .with("fitted_slope_se", fmt_f64(env.slope_se));
    write_csv(
        out,
        &meta,
        &["n", "lambda_min", "lambda_max", "fitted_slope"],
        &body,
    )
}

fn kernel_of(cfg: &ExperimentConfig) -> Result<RationalLaplaceKernel, HarnessError> {
    Ok(RationalLaplaceKernel::new(
        cfg.g.numer.clone(),
        cfg.g.denom.clone(),
    )?)
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("simulate");
    path.with_file_name(format!("{stem}_{suffix}.csv"))
}

/// `simulate`: one data set, its estimate and the Lepski diagnostics.
///
/// Writes `out` (observations), `<stem>_estimate.csv` and
/// `<stem>_lepski.csv`. Returns the paths written.
pub fn simulate_to_files(
    cfg: &ExperimentConfig,
    seed: u64,
    out: &Path,
) -> Result<Vec<PathBuf>, HarnessError> {
    let g = kernel_of(cfg)?;
    let truth = cfg.truth()?;
    let design = ExperimentDesign::new(cfg.design.n, cfg.design.horizon)?;
    design.check_regime(cfg.noise.alpha);
    let noise = cfg.noise_model(cfg.noise.alpha)?;
    let scenario = Scenario::new(g, truth, design, noise)?;
    let y = scenario.observe(seed, 0);
    let settings = EstimatorSettings::from_config(cfg);
    let est = settings.estimator(&scenario)?;
    let res = est.estimate(&y, &cfg.policy())?;
    let meta = Metadata::new(Some(seed), Some(&cfg.hash()));

    let obs: Vec<Vec<String>> = y
        .iter()
        .enumerate()
        .map(|(i, v)| {
            vec![
                (i + 1).to_string(),
                fmt_f64(design.time(i + 1)),
                fmt_f64(*v),
                fmt_f64(scenario.signal()[i]),
            ]
        })
        .collect();
    write_csv_file(out, &meta, &["i", "t", "y", "q"], &obs)?;

    let r = est.r();
    let mut header = vec!["t".to_string(), "f_true".into(), "f_hat".into()];
    header.extend((0..=r).map(|j| format!("q{j}_hat")));
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows: Vec<Vec<String>> = (0..=design.n())
        .map(|k| {
            let mut row = vec![
                fmt_f64(design.time(k)),
                fmt_f64(scenario.f_exact()[k]),
                fmt_f64(res.f_hat[k]),
            ];
            row.extend((0..=r).map(|j| fmt_f64(res.q_hat[j][k])));
            row
        })
        .collect();
    let lambdas = res
        .lambda_hat
        .iter()
        .map(|&l| fmt_f64(l))
        .collect::<Vec<_>>()
        .join(";");
    let est_path = sibling(out, "estimate");
    write_csv_file(
        &est_path,
        &meta.clone().with("lambda_hat", lambdas),
        &header_refs,
        &rows,
    )?;

    let diag: Vec<Vec<String>> = res
        .diagnostics
        .iter()
        .flatten()
        .map(|c| {
            vec![
                c.j.to_string(),
                fmt_f64(c.lambda),
                fmt_f64(c.lambda_prime),
                fmt_f64(c.stat),
                fmt_f64(c.threshold),
                c.accepted.to_string(),
            ]
        })
        .collect();
    let diag_path = sibling(out, "lepski");
    write_csv_file(
        &diag_path,
        &meta,
        &[
            "j",
            "lambda",
            "lambda_prime",
            "stat",
            "threshold",
            "accepted",
        ],
        &diag,
    )?;
    Ok(vec![out.to_path_buf(), est_path, diag_path])
}

/// `rate-study`: per-α risk curves and exponent fits, the α-monotonicity
/// table and the risk decomposition. Returns the per-α reports.
pub fn rate_study(cfg: &ExperimentConfig, out_dir: &Path) -> Result<Vec<RiskReport>, HarnessError> {
    std::fs::create_dir_all(out_dir)?;
    let g = kernel_of(cfg)?;
    let truth = cfg.truth()?;
    let settings = EstimatorSettings::from_config(cfg);
    let policy = cfg.policy();
    let meta = Metadata::new(Some(cfg.seed), Some(&cfg.hash())).with("note", SUP_NOTE);
    let r = g.r();

    let mut reports = Vec::new();
    for &alpha in &cfg.noise.alpha_list {
        let noise = cfg.noise_model(alpha)?;
        reports.push(mc_risk(
            &truth,
            &g,
            cfg.design.horizon,
            &cfg.design.n_list,
            &noise,
            &policy,
            &settings,
            cfg.mc.replicates,
            cfg.seed,
        )?);
    }

    let mut header = vec![
        "alpha",
        "n",
        "mean_ise",
        "se",
        "median_ise",
        "replicates",
        "mean_ise_full_flagged",
    ]
    .into_iter()
    .map(String::from)
    .collect::<Vec<_>>();
    header.extend((0..=r).map(|j| format!("mean_lambda{j}")));
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut rows = Vec::new();
    for rep in &reports {
        for row in &rep.rows {
            let mut v = vec![
                fmt_f64(rep.alpha),
                row.n.to_string(),
                fmt_f64(row.mean_ise),
                fmt_f64(row.se),
                fmt_f64(row.median_ise),
                row.replicates.to_string(),
                fmt_f64(row.mean_ise_full),
            ];
            v.extend(row.mean_lambda.iter().map(|&l| fmt_f64(l)));
            rows.push(v);
        }
    }
    write_csv_file(&out_dir.join("rate_study.csv"), &meta, &header_refs, &rows)?;

    let fits: Vec<Vec<String>> = reports
        .iter()
        .map(|rep| {
            let (slope, se) = rep
                .fit
                .map_or((f64::NAN, f64::NAN), |f| (f.slope, f.slope_se));
            vec![
                fmt_f64(rep.alpha),
                rep.truth.clone(),
                fmt_f64(rep.m),
                rep.r.to_string(),
                fmt_f64(slope),
                fmt_f64(se),
                fmt_f64(rep.theoretical_exponent),
                rep.exponent_consistent(0.15).to_string(),
            ]
        })
        .collect();
    write_csv_file(
        &out_dir.join("rate_fits.csv"),
        &meta,
        &[
            "alpha",
            "truth",
            "m",
            "r",
            "fitted_exponent",
            "slope_se",
            "theoretical_exponent",
            "within_tolerance",
        ],
        &fits,
    )?;

    // α-monotonicity at one sample size.
    let mut mono = Vec::new();
    for &alpha in &cfg.noise.monotone_alphas {
        let noise = cfg.noise_model(alpha)?;
        let rep = mc_risk(
            &truth,
            &g,
            cfg.design.horizon,
            &[cfg.noise.monotone_n],
            &noise,
            &policy,
            &settings,
            cfg.mc.replicates,
            cfg.seed,
        )?;
        let row = &rep.rows[0];
        mono.push(vec![
            row.n.to_string(),
            fmt_f64(alpha),
            fmt_f64(row.mean_ise),
            fmt_f64(row.se),
        ]);
    }
    write_csv_file(
        &out_dir.join("alpha_monotonicity.csv"),
        &meta,
        &["n", "alpha", "mean_ise", "se"],
        &mono,
    )?;

    let design = ExperimentDesign::new(cfg.design.n, cfg.design.horizon)?;
    let mut dec_rows = Vec::new();
    for &alpha in &cfg.noise.alpha_list {
        let noise = cfg.noise_model(alpha)?;
        let scenario = Scenario::new(g.clone(), truth.clone(), design, noise)?;
        let dec = risk_decomposition(&scenario, &settings, &policy, cfg.mc.replicates, cfg.seed)?;
        dec_rows.push(vec![
            fmt_f64(alpha),
            design.n().to_string(),
            fmt_f64(dec.r1),
            fmt_f64(dec.r2),
            fmt_f64(dec.r3),
            fmt_f64(dec.total),
            fmt_f64(dec.bound),
            dec.holds(0.0).to_string(),
        ]);
    }
    write_csv_file(
        &out_dir.join("decomposition.csv"),
        &meta,
        &[
            "alpha",
            "n",
            "r1",
            "r2",
            "r3",
            "total",
            "bound",
            "bound_holds",
        ],
        &dec_rows,
    )?;
    Ok(reports)
}

/// `lepski-study`: pure-noise exceedance frequencies and the comparison of
/// Lepski against the best fixed bandwidths.
pub fn lepski_study(cfg: &ExperimentConfig, out_dir: &Path) -> Result<(), HarnessError> {
    std::fs::create_dir_all(out_dir)?;
    let g = kernel_of(cfg)?;
    let settings = EstimatorSettings::from_config(cfg);
    let meta = Metadata::new(Some(cfg.seed), Some(&cfg.hash()));

    let noise = cfg.noise_model(cfg.noise.alpha)?;
    let tail = lepski_tail_study(
        &g,
        cfg.design.horizon,
        &cfg.tail.n_list,
        &noise,
        &cfg.tail.orders,
        cfg.tail.m,
        cfg.tail.oracle_c,
        &settings,
        cfg.tail.replicates,
        cfg.seed,
    )?;
    let rows: Vec<Vec<String>> = tail
        .iter()
        .map(|t| {
            vec![
                fmt_f64(noise.alpha()),
                t.n.to_string(),
                t.j.to_string(),
                fmt_f64(t.lambda),
                fmt_f64(t.lambda_o),
                fmt_f64(t.threshold),
                fmt_f64(t.exceedance),
                fmt_f64(t.mean_ratio),
                t.replicates.to_string(),
            ]
        })
        .collect();
    write_csv_file(
        &out_dir.join("lepski_tail.csv"),
        &meta,
        &[
            "alpha",
            "n",
            "j",
            "lambda",
            "lambda_o",
            "threshold",
            "exceedance",
            "mean_ratio",
            "replicates",
        ],
        &rows,
    )?;

    let truth = cfg.truth()?;
    let design = ExperimentDesign::new(cfg.design.n, cfg.design.horizon)?;
    let mut oracle_rows = Vec::new();
    for &alpha in &cfg.noise.alpha_list {
        let noise = cfg.noise_model(alpha)?;
        let scenario = Scenario::new(g.clone(), truth.clone(), design, noise)?;
        let rep = fixed_bandwidth_oracle(&scenario, &settings, cfg.mc.replicates, cfg.seed)?;
        oracle_rows.push(vec![
            fmt_f64(alpha),
            rep.n.to_string(),
            fmt_f64(rep.lepski_median),
            fmt_f64(rep.best_median),
            fmt_f64(rep.ratio()),
            rep.best_bandwidths
                .iter()
                .map(|&l| fmt_f64(l))
                .collect::<Vec<_>>()
                .join(";"),
            rep.combinations.to_string(),
        ]);
    }
    write_csv_file(
        &out_dir.join("lepski_oracle.csv"),
        &meta,
        &[
            "alpha",
            "n",
            "lepski_median_ise",
            "best_fixed_median_ise",
            "ratio",
            "best_bandwidths",
            "combinations",
        ],
        &oracle_rows,
    )?;
    Ok(())
}
