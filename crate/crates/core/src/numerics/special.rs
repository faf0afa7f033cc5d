//! Gamma function and modified Bessel functions of integer order.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(x: f64) -> f64 {
    // x = z - 1
    let mut sum = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (x + i as f64);
    }
    sum
}

/// Γ(z) for z > 0.
pub fn gamma(z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::Domain(format!("gamma requires z > 0, got {z}")));
    }
    if z < 0.5 {
        // Reflection keeps the Lanczos sum in its accurate range.
        return Ok(PI / ((PI * z).sin() * gamma(1.0 - z)?));
    }
    if z > 171.62 {
        return Err(Error::Overflow(format!("gamma({z}) exceeds f64 range")));
    }
    let x = z - 1.0;
    let t = x + LANCZOS_G + 0.5;
    Ok((2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * lanczos_sum(x))
}

/// ln Γ(z) for z > 0.
pub fn ln_gamma(z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::Domain(format!("ln_gamma requires z > 0, got {z}")));
    }
    if z < 0.5 {
        return Ok((PI / (PI * z).sin()).ln() - ln_gamma(1.0 - z)?);
    }
    let x = z - 1.0;
    let t = x + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + lanczos_sum(x).ln())
}

/// Exponentially scaled modified Bessel function `e^{-z} I_m(z)` for integer
/// `m` (negative orders use `I_{-m} = I_m`) and `z ≥ 0`.
pub fn bessel_i_scaled(m: i64, z: f64) -> Result<f64> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("bessel_i requires finite z >= 0, got {z}")));
    }
    let m = m.unsigned_abs();
    if z == 0.0 {
        return Ok(if m == 0 { 1.0 } else { 0.0 });
    }
    if z < 2.0 * (m as f64 + 1.0) {
        Ok(ascending_series_scaled(m, z))
    } else {
        Ok(miller_scaled(m, z))
    }
}

/// Modified Bessel function `I_m(z)`.
pub fn bessel_i(m: i64, z: f64) -> Result<f64> {
    let scaled = bessel_i_scaled(m, z)?;
    if z > 709.0 {
        return Err(Error::Overflow(format!("I_m({z}) exceeds f64 range")));
    }
    Ok(scaled * z.exp())
}

fn ascending_series_scaled(m: u64, z: f64) -> f64 {
    let half = 0.5 * z;
    // Leading term (z/2)^m / m! e^{-z}, formed in log space.
    let log_lead = m as f64 * half.ln() - ln_gamma(m as f64 + 1.0).unwrap() - z;
    let lead = log_lead.exp();
    if lead == 0.0 {
        return 0.0;
    }
    let q = half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0u64;
    loop {
        k += 1;
        term *= q / (k as f64 * (k + m) as f64);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    lead * sum
}

/// Backward (Miller) recurrence normalised by `e^{-z}(I_0 + 2 Σ I_k) = 1`.
fn miller_scaled(m: u64, z: f64) -> f64 {
    let start = m as usize + 30 + (14.0 * z.sqrt()) as usize;
    let two_over_z = 2.0 / z;
    let mut ip1 = 0.0; // I_{k+1}
    let mut ik = 1e-280; // I_k
    let mut norm = 0.0;
    let mut wanted = 0.0;
    for k in (1..=start).rev() {
        let im1 = ip1 + k as f64 * two_over_z * ik;
        ip1 = ik;
        ik = im1;
        // ik now holds I_{k-1}
        if k - 1 >= 1 {
            norm += 2.0 * ik;
        }
        if k - 1 == m as usize {
            wanted = ik;
        }
        if ik.abs() > 1e250 {
            ik *= 1e-250;
            ip1 *= 1e-250;
            norm *= 1e-250;
            wanted *= 1e-250;
        }
    }
    norm += ik; // I_0
    if m == 0 {
        wanted = ik;
    }
    wanted / norm
}
