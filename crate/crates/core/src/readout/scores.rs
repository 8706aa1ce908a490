use crate::error::{Error, Result};

/// NCE symbol alphabet.
pub const SYMBOLS: [f64; 4] = [-3.0, -1.0, 1.0, 3.0];

fn check_lengths(a: usize, b: usize, min: usize) -> Result<()> {
    if a != b {
        return Err(Error::LengthMismatch {
            what: "score series",
            expected: a,
            actual: b,
        });
    }
    if a < min {
        return Err(Error::InvalidArgument(format!("score needs at least {min} points, got {a}")));
    }
    Ok(())
}

/// `sum (y - yhat)^2 / sum (y - mean(y))^2`.
pub fn nmse(y: &[f64], yhat: &[f64]) -> Result<f64> {
    check_lengths(y.len(), yhat.len(), 2)?;
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let den: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    if den == 0.0 {
        return Err(Error::Numerical("NMSE undefined for a constant target".into()));
    }
    let num: f64 = y.iter().zip(yhat).map(|(a, b)| (a - b).powi(2)).sum();
    Ok(num / den)
}

/// Fraction of points whose side of `threshold` differs between labels and
/// predictions.
pub fn classification_error(labels: &[f64], yhat: &[f64], threshold: f64) -> Result<f64> {
    check_lengths(labels.len(), yhat.len(), 1)?;
    let wrong = labels
        .iter()
        .zip(yhat)
        .filter(|(l, p)| (**l > threshold) != (**p > threshold))
        .count();
    Ok(wrong as f64 / labels.len() as f64)
}

/// Nearest symbol of the alphabet; ties go to the smaller symbol.
pub fn decode_symbol(y: f64) -> f64 {
    let mut best = SYMBOLS[0];
    for &s in &SYMBOLS[1..] {
        if (y - s).abs() < (y - best).abs() {
            best = s;
        }
    }
    best
}

/// Symbol error rate of the decoded estimates against the sent symbols.
pub fn ser(symbols: &[f64], estimates: &[f64]) -> Result<f64> {
    check_lengths(symbols.len(), estimates.len(), 1)?;
    let wrong = symbols
        .iter()
        .zip(estimates)
        .filter(|(s, e)| decode_symbol(**e) != **s)
        .count();
    Ok(wrong as f64 / symbols.len() as f64)
}
