use crate::error::{ChannelError, Result};

/// Pearson correlation coefficient of paired samples.
pub fn cross_correlation(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(ChannelError::invalid("sequences differ in length"));
    }
    if x.len() < 3 {
        return Err(ChannelError::invalid("need at least 3 paired samples"));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(ChannelError::invalid("samples must be finite"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(ChannelError::invalid("zero variance input"));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let x = [1.0, 2.0, 4.0, 7.0];
        assert!((cross_correlation(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((cross_correlation(&x, &neg).unwrap() + 1.0).abs() < 1e-15);
        // centered x and a centered vector orthogonal to it
        let a = [-1.0, 0.0, 1.0];
        let b = [1.0, -2.0, 1.0];
        assert!(cross_correlation(&a, &b).unwrap().abs() < 1e-12);
        assert!(cross_correlation(&[1.0, 1.0, 1.0], &a).is_err());
    }

    proptest::proptest! {
        #[test]
        fn affine_gives_sign(
            x in proptest::collection::vec(-100.0f64..100.0, 3..30),
            a in prop_oneof_nonzero(),
            b in -50.0f64..50.0,
        ) {
            let spread = x.iter().cloned().fold(f64::MIN, f64::max) - x.iter().cloned().fold(f64::MAX, f64::min);
            proptest::prop_assume!(spread > 1e-3);
            let y: Vec<f64> = x.iter().map(|v| a * v + b).collect();
            let r = cross_correlation(&x, &y).unwrap();
            proptest::prop_assert!((r - a.signum()).abs() < 1e-9);
        }
    }

    fn prop_oneof_nonzero() -> impl proptest::strategy::Strategy<Value = f64> {
        proptest::prop_oneof![-10.0f64..-0.1, 0.1f64..10.0]
    }
}
