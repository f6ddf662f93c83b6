use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::{summarize, ExperimentConfig, SampleSummary};
use crate::error::Result;
use crate::fields::{mix_words, RngSpec};

/// One replica's statistic, written as a JSON line
/// `{experiment, n, replica, value, seed}`.
#[derive(Debug, Clone, Serialize)]
pub struct ReplicaRecord {
    pub experiment: String,
    pub n: u32,
    pub replica: u32,
    pub value: f64,
    pub seed: u64,
}

/// One ladder point: the summary plus its reference value.
#[derive(Debug, Clone)]
pub struct LadderPoint {
    pub summary: SampleSummary,
    pub ref_value: f64,
}

#[derive(Debug, Clone)]
pub struct LadderResult {
    pub experiment: String,
    pub points: Vec<LadderPoint>,
    pub records: Vec<ReplicaRecord>,
}

impl LadderResult {
    /// Write all replica records as JSON lines.
    pub fn write_records<W: std::io::Write>(&self, out: &mut W) -> Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut *out, r).map_err(std::io::Error::other)?;
            writeln!(out)?;
        }
        Ok(())
    }

    /// Write per-n summaries as CSV with the fixed schema
    /// `n,replicas,mean,se,median,exceedance,ref_value`.
    pub fn write_summary_csv<W: std::io::Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "n,replicas,mean,se,median,exceedance,ref_value")?;
        for p in &self.points {
            let s = &p.summary;
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                s.n, s.replicas, s.mean, s.se, s.median, s.exceedance, p.ref_value
            )?;
        }
        Ok(())
    }
}

/// Stream id of replica `r` at ladder point `n` of a named experiment.
///
/// Purely a function of `(experiment tag, n, r)`, so ladders are
/// embarrassingly parallel and replayable from the master seed alone.
pub fn replica_stream(experiment: &str, n: u32, replica: u32) -> u64 {
    let tag = experiment.bytes().fold(0u64, |h, b| h.wrapping_mul(131).wrapping_add(b as u64));
    mix_words(&[tag, n as u64, replica as u64])
}

/// Field seed material for one replica.
pub fn replica_field_rng(cfg: &ExperimentConfig, experiment: &str, n: u32, replica: u32) -> RngSpec {
    RngSpec::new(cfg.master_seed, replica_stream(experiment, n, replica))
}

/// Run `sample` over the whole ladder. Replicas execute in parallel; the
/// fold happens in replica-index order so the result does not depend on the
/// worker count.
pub(crate) fn run_ladder<F>(
    cfg: &ExperimentConfig,
    experiment: &str,
    ref_value: impl Fn(u32) -> f64,
    sample: F,
) -> Result<LadderResult>
where
    F: Fn(u32, u32, RngSpec) -> Result<f64> + Sync,
{
    cfg.validate()?;
    let mut points = Vec::with_capacity(cfg.sizes.len());
    let mut records = Vec::with_capacity(cfg.sizes.len() * cfg.replicas as usize);
    for &n in &cfg.sizes {
        let started = Instant::now();
        let values: Vec<f64> = (0..cfg.replicas)
            .into_par_iter()
            .map(|r| sample(n, r, replica_field_rng(cfg, experiment, n, r)))
            .collect::<Result<_>>()?;
        let summary = summarize(n, &values, cfg.epsilon, started.elapsed())?;
        points.push(LadderPoint { summary, ref_value: ref_value(n) });
        records.extend(values.into_iter().enumerate().map(|(r, value)| ReplicaRecord {
            experiment: experiment.to_string(),
            n,
            replica: r as u32,
            value,
            seed: replica_stream(experiment, n, r as u32),
        }));
    }
    Ok(LadderResult { experiment: experiment.to_string(), points, records })
}
