//! Corpus survey: one pipeline per entry, a CSV table, SVG scatter plots
//! and a JSON footer with the rank correlations.

use rayon::prelude::*;
use renormlab::verify::{spearman, trend_sigma_vs_pe};
use serde::{Deserialize, Serialize};

use crate::plot::{scatter_svg, Panel};
use crate::{run_pipeline, CliError, CorpusEntry, PipelineReport, RunConfig};

pub const SCHEMA: u32 = 1;

pub const CSV_COLUMNS: [&str; 12] = [
    "c",
    "label",
    "p",
    "p_e",
    "sigma",
    "d_max",
    "cascade_max_len",
    "C_measured_max",
    "c_min_quad",
    "julia_diam_ratio",
    "sector_theta",
    "modulus_proxy",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub c: f64,
    pub label: String,
    pub p: Option<usize>,
    pub p_e: Option<usize>,
    pub sigma: Option<f64>,
    pub d_max: Option<usize>,
    pub cascade_max_len: Option<usize>,
    #[serde(rename = "C_measured_max")]
    pub c_measured_max: Option<f64>,
    pub c_min_quad: Option<f64>,
    pub julia_diam_ratio: Option<f64>,
    pub sector_theta: Option<f64>,
    pub modulus_proxy: Option<f64>,
}

impl SurveyRow {
    pub fn from_report(label: &str, r: &PipelineReport) -> Self {
        let first = r.checks.iter().find(|c| c.k == 1);
        let julia = first.and_then(|c| c.julia.as_ref());
        Self {
            c: r.c,
            label: label.to_string(),
            p: r.period,
            p_e: r.p_e,
            sigma: r.sigma,
            d_max: r.cascades.iter().map(|c| c.depth).max(),
            cascade_max_len: r.cascades.iter().map(|c| c.length).max(),
            c_measured_max: first
                .and_then(|c| c.contraction.as_ref())
                .filter(|s| s.samples > s.errors.len())
                .map(|s| s.c_max),
            c_min_quad: first.and_then(|c| c.c_min_quad),
            julia_diam_ratio: julia.map(|j| j.diam_ratio),
            sector_theta: julia.map(|j| j.sample.sector_theta),
            modulus_proxy: julia.map(|j| j.sample.modulus_proxy),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Footer {
    pub schema: u32,
    pub rows: usize,
    /// Rows with `p_e`, `sigma` and `modulus_proxy` all present.
    pub trend_rows: usize,
    pub rho_sigma_pe: Option<f64>,
    pub rho_modulus_pe: Option<f64>,
    pub note: Option<String>,
}

#[derive(Debug, Clone)]
pub struct SurveyOutput {
    pub rows: Vec<SurveyRow>,
    pub reports: Vec<PipelineReport>,
    pub csv: String,
    pub footer: Footer,
    pub footer_json: String,
    /// `None` for an empty corpus.
    pub svg: Option<String>,
}

pub fn rows_to_csv(rows: &[SurveyRow]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(CSV_COLUMNS)
        .map_err(|e| CliError::Io(e.into()))?;
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Io(e.into()))?;
    }
    let body = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    let body = String::from_utf8(body).map_err(|e| CliError::Invariant(e.to_string()))?;
    Ok(format!("# schema={SCHEMA}\n{body}"))
}

pub fn footer_for(rows: &[SurveyRow]) -> Footer {
    let trend: Vec<(f64, f64, f64)> = rows
        .iter()
        .filter_map(|r| Some((r.p_e? as f64, r.sigma?, r.modulus_proxy?)))
        .collect();
    let mut f = Footer {
        schema: SCHEMA,
        rows: rows.len(),
        trend_rows: trend.len(),
        rho_sigma_pe: None,
        rho_modulus_pe: None,
        note: None,
    };
    match trend_sigma_vs_pe(&trend) {
        Ok(t) => {
            f.rho_sigma_pe = t.rho_sigma;
            f.rho_modulus_pe = t.rho_modulus;
            if t.rho_sigma.is_none() {
                f.note = Some("degenerate ranks: correlation undefined".into());
            }
        }
        Err(e) => {
            // still report what the ranks give, flagged
            let pe: Vec<f64> = trend.iter().map(|t| t.0).collect();
            let s: Vec<f64> = trend.iter().map(|t| t.1).collect();
            let m: Vec<f64> = trend.iter().map(|t| t.2).collect();
            f.rho_sigma_pe = spearman(&s, &pe);
            f.rho_modulus_pe = spearman(&m, &pe);
            f.note = Some(e.to_string());
        }
    }
    f
}

fn svg_for(rows: &[SurveyRow]) -> String {
    let pts = |g: fn(&SurveyRow) -> Option<f64>| -> Vec<(f64, f64)> {
        rows.iter()
            .filter_map(|r| Some((r.p_e? as f64, g(r)?)))
            .collect()
    };
    scatter_svg(&[
        Panel {
            title: "sigma vs essential period",
            xlabel: "p_e",
            ylabel: "sigma",
            log_y: true,
            points: pts(|r| r.sigma),
        },
        Panel {
            title: "modulus proxy vs essential period",
            xlabel: "p_e",
            ylabel: "modulus proxy",
            log_y: false,
            points: pts(|r| r.modulus_proxy),
        },
    ])
}

/// Runs every entry (in parallel) and assembles the outputs in input order.
pub fn run_survey(entries: &[CorpusEntry], cfg: &RunConfig) -> Result<SurveyOutput, CliError> {
    let mut cfg = cfg.clone();
    // rows only read level 1
    cfg.verify_levels = cfg.verify_levels.min(1);
    let reports = entries
        .par_iter()
        .map(|e| run_pipeline(e.c, &cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<SurveyRow> = entries
        .iter()
        .zip(&reports)
        .map(|(e, r)| SurveyRow::from_report(&e.label, r))
        .collect();
    let csv = rows_to_csv(&rows)?;
    let footer = footer_for(&rows);
    let footer_json = serde_json::to_string_pretty(&footer)? + "\n";
    let svg = (!rows.is_empty()).then(|| svg_for(&rows));
    Ok(SurveyOutput {
        rows,
        reports,
        csv,
        footer,
        footer_json,
        svg,
    })
}
