use serde::{Deserialize, Serialize};

use crate::error::{ChannelError, Result};

/// Least-squares fit of the local-mean model `y = max(a·d + b, c)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZsaFit {
    /// Slope per metre.
    pub a: f64,
    /// Intercept.
    pub b: f64,
    /// Floor.
    pub c: f64,
    /// RMS residual of the fit.
    pub residual_rms: f64,
    /// False when the best fit never reaches the floor inside the data range;
    /// `c` is then only an upper bound and is reported as the lowest value of
    /// the fitted line over the data.
    pub floor_identified: bool,
}

#[derive(Clone, Copy)]
struct Candidate {
    a: f64,
    b: f64,
    c: f64,
    sse: f64,
    floor_identified: bool,
}

/// Global least-squares fit of `max(a·d + b, c)` to `(d, y)` records.
///
/// The model is a hinge: linear on one side of the knot `x* = (c − b)/a`
/// and constant on the other. Every optimum is one of
/// * a pure constant or a pure line,
/// * a hinge whose knot lies strictly between two adjacent distinct
///   distances (separate OLS on each side, kept if self-consistent), or
/// * a hinge whose knot sits on a data distance (OLS on `{1, (d − x*)±}`),
///
/// so enumerating them gives the exact global minimum.
pub fn fit_zsa_local_mean(records: &[(f64, f64)]) -> Result<ZsaFit> {
    if records.len() < 3 {
        return Err(ChannelError::invalid("need at least 3 records"));
    }
    if records.iter().any(|(d, y)| !(d.is_finite() && y.is_finite())) {
        return Err(ChannelError::invalid("records must be finite"));
    }
    let mut pts = records.to_vec();
    pts.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut distinct: Vec<f64> = pts.iter().map(|p| p.0).collect();
    distinct.dedup();
    let m = distinct.len();
    if m < 2 {
        return Err(ChannelError::invalid("records span fewer than 2 distinct distances"));
    }
    // first point index of each distinct distance, plus a sentinel
    let mut starts = Vec::with_capacity(m + 1);
    for (i, p) in pts.iter().enumerate() {
        if i == 0 || p.0 != pts[i - 1].0 {
            starts.push(i);
        }
    }
    starts.push(pts.len());

    let mut cands: Vec<Candidate> = Vec::new();

    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    cands.push(Candidate {
        a: 0.0,
        b: mean,
        c: mean,
        sse: ys.iter().map(|y| (y - mean).powi(2)).sum(),
        floor_identified: true,
    });

    if let Some((a, b, sse)) = ols(&pts) {
        let c = (a * distinct[0] + b).min(a * distinct[m - 1] + b);
        cands.push(Candidate { a, b, c, sse, floor_identified: false });
    }

    for s in 1..m {
        let (left, right) = pts.split_at(starts[s]);
        // linear on the left, floor on the right
        if s >= 2 {
            if let Some((a, b, sse_l)) = ols(left) {
                let (c, sse_r) = mean_sse(right);
                if a < 0.0 {
                    let knot = (c - b) / a;
                    if knot >= distinct[s - 1] && knot <= distinct[s] {
                        cands.push(Candidate { a, b, c, sse: sse_l + sse_r, floor_identified: true });
                    }
                }
            }
        }
        // floor on the left, linear on the right
        if m - s >= 2 {
            if let Some((a, b, sse_r)) = ols(right) {
                let (c, sse_l) = mean_sse(left);
                if a > 0.0 {
                    let knot = (c - b) / a;
                    if knot >= distinct[s - 1] && knot <= distinct[s] {
                        cands.push(Candidate { a, b, c, sse: sse_l + sse_r, floor_identified: true });
                    }
                }
            }
        }
    }

    for (k, &knot) in distinct.iter().enumerate() {
        if k >= 1 {
            if let Some(c) = hinge_at(&pts, knot, true) {
                cands.push(c);
            }
        }
        if k + 1 < m {
            if let Some(c) = hinge_at(&pts, knot, false) {
                cands.push(c);
            }
        }
    }

    let scale: f64 = ys.iter().map(|y| y * y).sum::<f64>().max(f64::MIN_POSITIVE);
    let best_sse = cands.iter().map(|c| c.sse).fold(f64::INFINITY, f64::min);
    let tol = 1e-13 * scale;
    let best = cands
        .iter()
        .find(|c| c.sse <= best_sse + tol)
        .copied()
        .expect("constant candidate always exists");
    Ok(ZsaFit {
        a: best.a,
        b: best.b,
        c: best.c,
        residual_rms: (best.sse.max(0.0) / pts.len() as f64).sqrt(),
        floor_identified: best.floor_identified,
    })
}

/// Hinge with the knot fixed at `knot`; `linear_left` puts the sloped branch
/// at distances below the knot.
fn hinge_at(pts: &[(f64, f64)], knot: f64, linear_left: bool) -> Option<Candidate> {
    let z: Vec<(f64, f64)> = pts
        .iter()
        .map(|&(d, y)| {
            let u = if linear_left { (d - knot).min(0.0) } else { (d - knot).max(0.0) };
            (u, y)
        })
        .collect();
    let (a, c, sse) = ols(&z)?;
    let consistent = if linear_left { a <= 0.0 } else { a >= 0.0 };
    if !consistent || a == 0.0 {
        return None;
    }
    Some(Candidate { a, b: c - a * knot, c, sse, floor_identified: true })
}

/// Ordinary least squares `y = a·x + b`; `None` when x has no spread.
fn ols(pts: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return None;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let a = sxy / sxx;
    let b = my - a * mx;
    let sse = pts.iter().map(|p| (p.1 - (a * p.0 + b)).powi(2)).sum();
    Some((a, b, sse))
}

fn mean_sse(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let m = pts.iter().map(|p| p.1).sum::<f64>() / n;
    (m, pts.iter().map(|p| (p.1 - m).powi(2)).sum())
}
