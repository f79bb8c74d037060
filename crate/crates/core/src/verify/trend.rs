use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Average ranks, ties sharing the mean of their positions (1-based).
fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut out = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &t in &idx[i..=j] {
            out[t] = r;
        }
        i = j + 1;
    }
    out
}

/// Spearman rank correlation; `None` when either sample has constant ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let rx = ranks(x);
    let ry = ranks(y);
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendReport {
    pub n: usize,
    pub rho_sigma: Option<f64>,
    pub rho_modulus: Option<f64>,
    /// `(p_e, sigma, modulus_proxy)` per entry, input order.
    pub scatter: Vec<(f64, f64, f64)>,
}

/// Rank correlations of `σ` and of the modulus proxy against `p_e`.
pub fn trend_sigma_vs_pe(rows: &[(f64, f64, f64)]) -> Result<TrendReport> {
    if rows.len() < 10 {
        return Err(Error::InsufficientData(format!(
            "{} corpus entries, need at least 10",
            rows.len()
        )));
    }
    let pe: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let sigma: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let modulus: Vec<f64> = rows.iter().map(|r| r.2).collect();
    Ok(TrendReport {
        n: rows.len(),
        rho_sigma: spearman(&sigma, &pe),
        rho_modulus: spearman(&modulus, &pe),
        scatter: rows.to_vec(),
    })
}
