#![allow(dead_code)]
//! Closed-form expressions used as independent oracles.

use num_complex::Complex64;

/// Wigner function of the symmetric family state (`r₁ = r₂ = r`).
pub fn w_family(n: usize, r: f64, x: &[f64], p: &[f64]) -> f64 {
    let nf = n as f64;
    let sx: f64 = x.iter().sum();
    let sp: f64 = p.iter().sum();
    let mut dx = 0.0;
    let mut dp = 0.0;
    for i in 0..n {
        for j in 0..n {
            dx += (x[i] - x[j]).powi(2);
            dp += (p[i] - p[j]).powi(2);
        }
    }
    let e = -(-2.0 * r).exp() * (2.0 / nf * sx * sx + dp / nf)
        - (2.0 * r).exp() * (2.0 / nf * sp * sp + dx / nf);
    (2.0 / std::f64::consts::PI).powi(n as i32) * e.exp()
}

/// Wigner function of the `(M+1)`-mode telecloning channel.
pub fn w_mqc(m: usize, theta0: f64, x: &[f64], p: &[f64]) -> f64 {
    let mf = m as f64;
    let (s, c) = theta0.sin_cos();
    let sm = mf.sqrt();
    let e2r1 = (sm * s + c) / (sm * s - c);
    let e2r2 = (sm * c + s) / (sm * c - s);
    let sx: f64 = x[1..].iter().sum();
    let sp: f64 = p[1..].iter().sum();
    let mut d = 0.0;
    for i in 1..=m {
        for j in 1..=m {
            d += (x[i] - x[j]).powi(2) + (p[i] - p[j]).powi(2);
        }
    }
    let e = -2.0 / e2r1 * (s * x[0] + c / sm * sx).powi(2)
        - 2.0 * e2r1 * (s * p[0] + c / sm * sp).powi(2)
        - 2.0 * e2r2 * (c * x[0] - s / sm * sx).powi(2)
        - 2.0 / e2r2 * (c * p[0] - s / sm * sp).powi(2)
        - d / mf;
    (2.0 / std::f64::consts::PI).powi(m as i32 + 1) * e.exp()
}

/// Displaced parity of the symmetric family state.
pub fn parity_family(r: f64, alpha: &[Complex64]) -> f64 {
    let nf = alpha.len() as f64;
    let norm: f64 = alpha.iter().map(|a| a.norm_sqr()).sum();
    let s: Complex64 = alpha.iter().sum();
    let sq: Complex64 = alpha.iter().map(|a| a * a).sum();
    let bracket = 2.0 / nf * 2.0 * (s * s).re - 2.0 * sq.re;
    (-2.0 * (2.0 * r).cosh() * norm + (2.0 * r).sinh() * bracket).exp()
}

pub fn b2(r: f64, j: f64) -> f64 {
    let ch = (2.0 * r).cosh();
    1.0 + 2.0 * (-2.0 * j * ch).exp() - (-4.0 * j * (2.0 * r).exp()).exp()
}

pub fn b3(r: f64, j: f64) -> f64 {
    let (ch, sh) = ((2.0 * r).cosh(), (2.0 * r).sinh());
    3.0 * (-2.0 * j * ch + 2.0 * j * sh / 3.0).exp() - (-6.0 * j * (2.0 * r).exp()).exp()
}

/// Three-party value for arbitrary phases `φᵢ`.
pub fn b3_phases(r: f64, j: f64, phi: [f64; 3]) -> f64 {
    let (ch, sh) = ((2.0 * r).cosh(), (2.0 * r).sinh());
    let pos: f64 = phi
        .iter()
        .map(|f| (-2.0 * j * ch - 2.0 / 3.0 * j * sh * (2.0 * f).cos()).exp())
        .sum();
    let mut cross = 0.0;
    for i in 0..3 {
        for k in 0..3 {
            if i != k {
                cross += (2.0 * phi[i]).cos() - 4.0 * (phi[i] + phi[k]).cos();
            }
        }
    }
    pos - (-6.0 * j * ch - j * sh * cross / 3.0).exp()
}

pub fn b4(r: f64, j: f64) -> f64 {
    let (ch, sh) = ((2.0 * r).cosh(), (2.0 * r).sinh());
    2.0 * (-2.0 * j * ch + j * sh).exp() - 2.0 * (-6.0 * j * ch - 3.0 * j * sh).exp()
        + 3.0 * (-4.0 * j * ch).exp()
        - 0.5 * (-8.0 * j * (2.0 * r).exp()).exp()
        - 0.5
}

pub fn b5(r: f64, j: f64) -> f64 {
    let (ch, sh) = ((2.0 * r).cosh(), (2.0 * r).sinh());
    5.0 * (-4.0 * j * ch + 4.0 * j * sh / 5.0).exp()
        - 2.5 * (-8.0 * j * ch - 24.0 * j * sh / 5.0).exp()
        - 0.5
}

/// Covariance of modes 2 and 3 of the symmetric three-mode family state.
pub fn traced_pair_cov(r: f64) -> [[f64; 4]; 4] {
    let (ep, em, sh) = ((2.0 * r).exp(), (-2.0 * r).exp(), (2.0 * r).sinh());
    let a = (ep + 2.0 * em) / 12.0;
    let b = (em + 2.0 * ep) / 12.0;
    let c = 2.0 * sh / 12.0;
    [
        [a, 0.0, c, 0.0],
        [0.0, b, 0.0, -c],
        [c, 0.0, a, 0.0],
        [0.0, -c, 0.0, b],
    ]
}

/// Entanglement entropy of a two-mode squeezed vacuum in bits.
pub fn tmsv_entropy(r: f64) -> f64 {
    let c2 = r.cosh().powi(2);
    let s2 = r.sinh().powi(2);
    if s2 == 0.0 {
        return 0.0;
    }
    c2 * c2.log2() - s2 * s2.log2()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
