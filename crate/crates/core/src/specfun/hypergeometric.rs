use crate::{Error, Result};

const INTEGER_TOL: f64 = 1e-12;

fn nonpositive_integer(x: f64) -> Option<u32> {
    let r = libm::round(x);
    if (x - r).abs() <= INTEGER_TOL && r <= 0.0 {
        Some((-r) as u32)
    } else {
        None
    }
}

/// ₃F₂(a1, a2, a3; b1, b2; 1) for a terminating series, `a3` a nonpositive integer.
///
/// The series has `−a3 + 1` terms. A lower parameter that is a nonpositive
/// integer reached before termination makes a term's denominator vanish and is
/// rejected.
pub fn hyp3f2_terminating(a1: f64, a2: f64, a3: f64, b1: f64, b2: f64) -> Result<f64> {
    let terms = nonpositive_integer(a3).ok_or(Error::NonTerminating)?;
    for b in [b1, b2] {
        if let Some(m) = nonpositive_integer(b) {
            if m < terms {
                return Err(Error::InvalidArgument(alloc::format!(
                    "lower parameter {b} vanishes before the series terminates"
                )));
            }
        }
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..terms {
        let kf = k as f64;
        term *= (a1 + kf) * (a2 + kf) * (a3 + kf) / ((b1 + kf) * (b2 + kf) * (kf + 1.0));
        sum += term;
    }
    Ok(sum)
}
