//! Dispatch of a validated [`RunConfig`] to the numerical modules.

use freezelab_core::ensemble::with_workers;
use freezelab_core::extremes::{
    extreme_samples, histogram, ks_statistic, mean_and_variance, normalize_to_target_variance, recenter,
    RecenteringParams,
};
use freezelab_core::rng::ALGORITHM_ID;
use freezelab_core::thermo::{fisher_hartwig_ratio, freeze_scan, moment_estimate, partition_samples, FreezeCurve};
use freezelab_core::zetaline::{covariance_scan, table1_experiment, zeta_freeze_scan};
use freezelab_core::FieldSource;

use crate::config::{Experiment, Format, Model, RunConfig};
use crate::error::HarnessError;
use crate::output::{write_atomic, Cell, OutputRecord, BUILD_ID, SCHEMA_VERSION};

fn source(model: Model) -> FieldSource {
    match model {
        Model::Cue => FieldSource::Cue,
        Model::Fourier => FieldSource::Fourier,
        Model::Zeta => FieldSource::ZetaSurrogate,
    }
}

fn summary(pairs: Vec<(&str, Cell)>) -> Vec<(String, Cell)> {
    pairs.into_iter().map(|(k, v)| (k.to_owned(), v)).collect()
}

fn curve_rows(curve: &FreezeCurve) -> Vec<Vec<Cell>> {
    (0..curve.betas.len())
        .map(|j| {
            let b = curve.betas[j];
            vec![b.into(), curve.minus_f[j].into(), curve.stderr[j].into(), FreezeCurve::predicted(b).into()]
        })
        .collect()
}

/// Runs the experiment on the calling thread's pool. Random stream `i` of
/// every experiment is `child_stream(seed, experiment name, i)`.
pub fn run_experiment(config: &RunConfig) -> Result<OutputRecord, HarnessError> {
    let name = config.experiment.as_str();
    let num = HarnessError::numeric(name);
    let model = source(config.model);
    let (summary, columns, rows) = match config.experiment {
        Experiment::Extremes => {
            let samples = extreme_samples(model, config.n, config.samples, config.grid_factor, config.seed, name)
                .map_err(&num)?;
            let params = RecenteringParams::new(config.n, config.c).map_err(&num)?;
            let xs = recenter(&samples, &params).map_err(&num)?;
            let (mean, var) = mean_and_variance(&xs);
            let normalized = normalize_to_target_variance(&xs).map_err(&num)?;
            let ks = ks_statistic(&normalized).map_err(&num)?;
            let rows = histogram(&normalized)
                .iter()
                .map(|b| vec![b.centre.into(), b.density.into(), b.target.into()])
                .collect();
            (
                summary(vec![
                    ("a", params.a.into()),
                    ("b", params.b.into()),
                    ("recentered_mean", mean.into()),
                    ("recentered_variance", var.into()),
                    ("ks_distance", ks.into()),
                ]),
                vec!["x", "density", "target"],
                rows,
            )
        }
        Experiment::Freeze => {
            let curve = freeze_scan(
                model,
                config.n,
                &config.betas,
                config.samples,
                config.grid_factor,
                config.seed,
                name,
            )
            .map_err(&num)?;
            (
                summary(vec![("n_param", curve.n_param.into())]),
                vec!["beta", "minus_f", "stderr", "predicted"],
                curve_rows(&curve),
            )
        }
        Experiment::Moments => {
            let table = partition_samples(
                model,
                config.n,
                &config.betas,
                config.samples,
                config.grid_factor,
                config.seed,
                name,
            )
            .map_err(&num)?;
            let mut rows = Vec::with_capacity(config.betas.len());
            for j in 0..config.betas.len() {
                let column: Vec<_> = table.iter().map(|r| r[j]).collect();
                let r = moment_estimate(&column, config.k).map_err(&num)?;
                rows.push(vec![
                    r.beta.into(),
                    r.estimate.into(),
                    r.error_bar.into(),
                    r.plain_mean.into(),
                    r.plain_stderr.into(),
                    r.exact_small_n.into(),
                    r.asymptotic.into(),
                ]);
            }
            (
                summary(vec![("k", config.k.into()), ("n_param", config.n.into())]),
                vec!["beta", "estimate", "error_bar", "plain_mean", "plain_stderr", "exact_small_n", "asymptotic"],
                rows,
            )
        }
        Experiment::FhRatio => {
            let mut rows = Vec::new();
            for &b in &config.betas {
                for &n in &config.sizes {
                    let ratio = fisher_hartwig_ratio(n, b).map_err(&num)?;
                    rows.push(vec![b.into(), n.into(), ratio.into()]);
                }
            }
            (Vec::new(), vec!["beta", "n", "ratio"], rows)
        }
        Experiment::Table1 => {
            let row = table1_experiment(config.t_center, config.samples).map_err(&num)?;
            (
                summary(vec![("n_assoc", row.n_assoc.into()), ("intervals", row.intervals.into())]),
                vec!["quantity", "value"],
                vec![
                    vec!["data_mean".into(), row.data_mean.into()],
                    vec!["ratio_c32".into(), row.ratio_c32.into()],
                    vec!["ratio_c12".into(), row.ratio_c12.into()],
                ],
            )
        }
        Experiment::ZetaFreeze => {
            let curve = zeta_freeze_scan(config.t_center, config.samples, &config.betas).map_err(&num)?;
            (
                summary(vec![("n_param", curve.n_param.into())]),
                vec!["beta", "minus_f", "stderr", "predicted"],
                curve_rows(&curve),
            )
        }
        Experiment::Covariance => {
            let pts = covariance_scan(config.t_center, config.window, &config.separations).map_err(&num)?;
            let rows = pts
                .iter()
                .map(|p| vec![p.separation.into(), p.estimate.into(), p.stderr.into()])
                .collect();
            (Vec::new(), vec!["separation", "estimate", "stderr"], rows)
        }
    };
    let mut metadata: Vec<(String, String)> =
        config.echo().into_iter().map(|(k, v)| (k.to_owned(), v)).collect();
    metadata.push(("build".into(), BUILD_ID.into()));
    metadata.push(("rng".into(), ALGORITHM_ID.into()));
    Ok(OutputRecord {
        schema_version: SCHEMA_VERSION,
        metadata,
        summary,
        columns,
        rows,
    })
}

/// Encodes the record in the configured format.
pub fn render(config: &RunConfig, record: &OutputRecord) -> String {
    match config.format {
        Format::Csv => record.to_csv(),
        Format::Json => record.to_json(),
    }
}

/// Runs on `config.workers` threads and writes the output, or returns it
/// when no output path is set.
pub fn execute(config: &RunConfig) -> Result<Option<String>, HarnessError> {
    let record = with_workers(config.workers, || run_experiment(config))?;
    let text = render(config, &record);
    match &config.out_path {
        Some(path) => {
            write_atomic(path, &text)?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}
