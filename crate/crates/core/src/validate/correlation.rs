use serde::{Deserialize, Serialize};

use crate::error::{ChannelError, Result};
use crate::types::LspRecord;

/// Large-scale parameters entering the correlation matrix, in matrix order.
pub const LSP_NAMES: [&str; 6] = ["DS", "ASD", "ASA", "ZSA", "SF", "K"];

/// Pearson correlation matrix over [`LSP_NAMES`]. Spreads enter as `log10`,
/// shadow fading and K-factor in dB. Entries are `None` where fewer than 3
/// paired values exist or one side has no variance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub names: Vec<String>,
    pub values: Vec<Vec<Option<f64>>>,
    /// Parameters whose column is degenerate (too few values or constant).
    pub undefined: Vec<bool>,
}

impl CorrelationMatrix {
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.names.iter().position(|n| n == a)?;
        let j = self.names.iter().position(|n| n == b)?;
        self.values[i][j]
    }
}

fn column(r: &LspRecord, k: usize) -> Option<f64> {
    let log = |v: Option<f64>| v.filter(|x| *x > 0.0 && x.is_finite()).map(f64::log10);
    let lin = |v: Option<f64>| v.filter(|x| x.is_finite());
    match k {
        0 => log(r.rms_ds_ns),
        1 => log(r.asd_deg),
        2 => log(r.asa_deg),
        3 => log(r.zsa_deg),
        4 => lin(r.sf_db),
        _ => lin(r.k_factor_db),
    }
}

fn pearson(pairs: &[(f64, f64)]) -> Option<f64> {
    if pairs.len() < 3 {
        return None;
    }
    let n = pairs.len() as f64;
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (x, y) in pairs {
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
        sxy += (x - mx) * (y - my);
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Pairwise-complete correlation matrix of the records' large-scale
/// parameters.
pub fn lsp_correlation_matrix(records: &[LspRecord]) -> Result<CorrelationMatrix> {
    if records.len() < 3 {
        return Err(ChannelError::invalid(format!("need at least 3 records, got {}", records.len())));
    }
    let cols: Vec<Vec<Option<f64>>> =
        (0..LSP_NAMES.len()).map(|k| records.iter().map(|r| column(r, k)).collect()).collect();
    let m = LSP_NAMES.len();
    let undefined: Vec<bool> = cols
        .iter()
        .map(|c| {
            let v: Vec<(f64, f64)> = c.iter().flatten().map(|&x| (x, x)).collect();
            pearson(&v).is_none()
        })
        .collect();
    let mut values = vec![vec![None; m]; m];
    for i in 0..m {
        if undefined[i] {
            continue;
        }
        values[i][i] = Some(1.0);
        for j in (i + 1)..m {
            if undefined[j] {
                continue;
            }
            let pairs: Vec<(f64, f64)> =
                cols[i].iter().zip(&cols[j]).filter_map(|(a, b)| Some(((*a)?, (*b)?))).collect();
            let r = pearson(&pairs);
            values[i][j] = r;
            values[j][i] = r;
        }
    }
    Ok(CorrelationMatrix { names: LSP_NAMES.iter().map(|s| s.to_string()).collect(), values, undefined })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(ds: f64, asd: f64, asa: f64, sf: f64) -> LspRecord {
        LspRecord {
            location_id: String::new(),
            tr_separation_m: None,
            asd_deg: Some(asd),
            asa_deg: Some(asa),
            zsa_deg: None,
            rms_ds_ns: Some(ds),
            sf_db: Some(sf),
            k_factor_db: None,
        }
    }

    #[test]
    fn planted_and_degenerate() {
        let recs: Vec<LspRecord> = (0..10)
            .map(|i| {
                let sf = i as f64 - 4.5;
                rec(10f64.powf(1.0 + 0.1 * i as f64), 20.0, 10f64.powf(1.5 - 0.05 * sf), sf)
            })
            .collect();
        let m = lsp_correlation_matrix(&recs).unwrap();
        assert!((m.get("ASA", "SF").unwrap() + 1.0).abs() < 1e-12);
        assert!((m.get("DS", "SF").unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(m.get("DS", "DS"), Some(1.0));
        assert!(m.undefined[1] && m.undefined[3] && m.undefined[5]);
        assert_eq!(m.get("ASD", "DS"), None);
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(m.values[i][j], m.values[j][i]);
            }
        }
        assert!(lsp_correlation_matrix(&recs[..2]).is_err());
    }
}
