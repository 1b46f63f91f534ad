use super::point::{reduce_gamma0_plus, reduce_to_fundamental_domain, UpperHalfPoint};
use crate::arith;
use crate::coeff::io::{parse_rows, read_meta};
use crate::coeff::CoefficientTable;
use crate::error::{Error, Result};
use crate::quad::composite_gl;
use crate::shift::BumpFunction;
use crate::special::{kappa_bessel, kappa_holomorphic, scattering, xi};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::path::Path;

/// Smallest N past the peak of (ny)^{w} e^{-2 pi n y} whose geometric tail
/// `scale * sum_{n > N} n^{w} e^{-2 pi n y}` is at most `tol`.
fn geometric_cutoff(y: f64, w: f64, scale: f64, tol: f64, start: u64) -> u64 {
    let log_term = |n: f64| w * n.ln() - 2.0 * PI * n * y;
    let mut n = start.max((w / (2.0 * PI * y)).ceil() as u64 + 1);
    loop {
        let n1 = (n + 1) as f64;
        let rho = ((n1 + 1.0) / n1).powf(w) * (-2.0 * PI * y).exp();
        if rho < 1.0 {
            let tail = scale * log_term(n1).exp() / (1.0 - rho);
            if tail <= tol {
                return n;
            }
        }
        n += 1;
    }
}

/// y^{k/2} f(z) from the Fourier expansion at z itself (no reduction), with the
/// number of terms needed so that the resulting |.|^2 is within `tol`.
pub fn newform_partial_sum(table: &CoefficientTable, z: UpperHalfPoint, tol: f64) -> Result<(Complex64, u64)> {
    let k = table.weight();
    let kf = k as f64;
    let spec_n = ((0.5 * kf + (1.0 / tol).ln()) / (2.0 * PI * z.y)).ceil().max(1.0) as u64;
    // |lambda(n)|/sqrt(n) <= 2, so |term| <= 2 y^{k/2} n^{k/2} e^{-2 pi n y}; the mass
    // error is at most 2|S| T + T^2 with |S| <= 2 sum of the same envelope.
    let env_scale = 2.0 * z.y.powf(0.5 * kf);
    let total = {
        let n_all = geometric_cutoff(z.y, 0.5 * kf, env_scale, 1e-300, 1);
        (1..=n_all).map(|n| env_scale * (0.5 * kf * (n as f64).ln() - 2.0 * PI * n as f64 * z.y).exp()).sum::<f64>()
    };
    let t_allowed = tol / (2.0 * total + 1.0);
    let n = geometric_cutoff(z.y, 0.5 * kf, env_scale, t_allowed, spec_n);
    if n > table.n_max() {
        return Err(Error::InsufficientRange { required: n, available: table.n_max() });
    }
    let mut s = Complex64::new(0.0, 0.0);
    for m in 1..=n {
        let lam = table.lambda(m);
        if lam == 0.0 {
            continue;
        }
        let mf = m as f64;
        let amp = lam / mf.sqrt() * kappa_holomorphic(k, mf * z.y);
        let ph = 2.0 * PI * mf * z.x;
        s += Complex64::new(amp * ph.cos(), amp * ph.sin());
    }
    Ok((s, n))
}

/// y^k |f(z)|^2 from the expansion at z itself.
pub fn newform_mass_fourier(table: &CoefficientTable, z: UpperHalfPoint, tol: f64) -> Result<f64> {
    Ok(newform_partial_sum(table, z, tol)?.0.norm_sqr())
}

/// y^k |f(z)|^2 after moving z as high as possible under Gamma_0(q) and the Atkin-Lehner involutions.
pub fn eval_newform_mass(table: &CoefficientTable, z: UpperHalfPoint, tol: f64) -> Result<f64> {
    let (w, _) = reduce_gamma0_plus(z, table.level())?;
    newform_mass_fourier(table, w, tol)
}

/// lambda_nu(n) = sum_{ab = n} (a/b)^nu.
pub fn divisor_lambda(nu: Complex64, n: u64) -> Complex64 {
    let nf = n as f64;
    arith::divisors(n).iter().map(|&a| ((a as f64).powi(2) / nf).ln() * nu).map(|e| e.exp()).sum()
}

fn check_eisenstein_s(s: Complex64) -> Result<()> {
    if (s - 1.0).norm() < 1e-15 {
        return Err(Error::Pole("E(s, z) has a pole at s = 1".into()));
    }
    if s.re <= 0.5 {
        return Err(Error::Domain(format!("E(s, z) implemented only for Re(s) > 1/2, got {s}")));
    }
    Ok(())
}

/// E(s, z) from its Fourier expansion at z itself (no reduction).
pub fn eisenstein_fourier(s: Complex64, z: UpperHalfPoint, tol: f64) -> Result<Complex64> {
    check_eisenstein_s(s)?;
    let y = z.y;
    let nu = s - 0.5;
    let sigma = nu.re.abs();
    let xi2 = xi(2.0 * s)?;
    let mut e = Complex64::new(y, 0.0).powc(s) + scattering(s)? * Complex64::new(y, 0.0).powc(1.0 - s);
    // |lambda_nu(n)|/sqrt(n) <= 2 n^{sigma}, |kappa_nu(ny)| <= exp(-2 pi n y + sigma^2/(4 pi n y)).
    let scale = 4.0 / xi2.norm() * (sigma * sigma / (4.0 * PI * y)).exp();
    let n = geometric_cutoff(y, sigma, scale, tol, 1);
    let mut sum = Complex64::new(0.0, 0.0);
    for m in 1..=n {
        let mf = m as f64;
        sum += divisor_lambda(nu, m) / mf.sqrt() * kappa_bessel(nu, mf * y) * (2.0 * (2.0 * PI * mf * z.x).cos());
    }
    e += sum / xi2;
    Ok(e)
}

/// E(s, z) for Re(s) > 1/2, s != 1, evaluated at the SL2(Z)-reduction of z.
pub fn eval_eisenstein(s: Complex64, z: UpperHalfPoint, tol: f64) -> Result<Complex64> {
    check_eisenstein_s(s)?;
    eisenstein_fourier(s, reduce_to_fundamental_domain(z).0, tol)
}

/// delta E(1 + delta, z), which tends to the residue 3/pi.
pub fn eisenstein_residue_check(z: UpperHalfPoint, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta <= 0.1) {
        return Err(Error::Domain(format!("delta must lie in (0, 0.1], got {delta}")));
    }
    Ok(delta * eval_eisenstein(Complex64::new(1.0 + delta, 0.0), z, 1e-13)?.re)
}

/// Level-one Maass cusp form given by its spectral parameter, T_{-1} parity and coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct MaassFormData {
    pub r: f64,
    pub parity: i8,
    pub lambda: Vec<f64>,
}

impl MaassFormData {
    pub fn new(r: f64, parity: i8, lambda: Vec<f64>) -> Result<Self> {
        if parity != 1 && parity != -1 {
            return Err(Error::Domain(format!("parity must be +1 or -1, got {parity}")));
        }
        if lambda.first() != Some(&1.0) {
            return Err(Error::Validation { invariant: "λ(1) = 1".into(), witness: 1 });
        }
        Ok(MaassFormData { r, parity, lambda })
    }

    /// CSV `n,a_n` of real values with a sidecar carrying `spectral_r` and `parity`.
    pub fn ingest(path: &Path) -> Result<Self> {
        let meta = read_meta(path)?;
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let lambda = parse_rows(&text, &["n,a_n", "n,lambda_n"], |v| v.trim().parse::<f64>().ok())?;
        let r = meta.spectral_r.ok_or_else(|| Error::Parse { line: 0, msg: "sidecar lacks spectral_r".into() })?;
        let parity = meta.parity.ok_or_else(|| Error::Parse { line: 0, msg: "sidecar lacks parity".into() })?;
        MaassFormData::new(r, parity, lambda)
    }

    pub fn n_max(&self) -> u64 {
        self.lambda.len() as u64
    }

    /// max_{x <= N} x^{-1} sum_{n <= x} lambda(n)^2.
    pub fn rankin_selberg_constant(&self) -> f64 {
        let mut acc = 0.0;
        let mut worst: f64 = 0.0;
        for (i, l) in self.lambda.iter().enumerate() {
            acc += l * l;
            worst = worst.max(acc / (i + 1) as f64);
        }
        worst
    }

    /// 2 sum lambda(n)/sqrt(n) kappa_{ir}(ny) cos(2 pi n x) (even) or sin (odd), at z itself.
    pub fn fourier_at(&self, z: UpperHalfPoint, tol: f64) -> Result<f64> {
        // |lambda(n)| <= tau(n) n^{7/64} <= 2 n^{1/2 + 7/64}; |kappa_{ir}(y)| <= exp(-2 pi y).
        let n = geometric_cutoff(z.y, 7.0 / 64.0, 4.0, tol, 1);
        if n > self.n_max() {
            return Err(Error::InsufficientRange { required: n, available: self.n_max() });
        }
        let nu = Complex64::new(0.0, self.r);
        let mut sum = 0.0;
        for m in 1..=n {
            let mf = m as f64;
            let ph = 2.0 * PI * mf * z.x;
            let trig = if self.parity == 1 { ph.cos() } else { ph.sin() };
            sum += 2.0 * self.lambda[m as usize - 1] / mf.sqrt() * kappa_bessel(nu, mf * z.y).re * trig;
        }
        Ok(sum)
    }
}

pub fn eval_maass(phi: &MaassFormData, z: UpperHalfPoint, tol: f64) -> Result<f64> {
    phi.fourier_at(reduce_to_fundamental_domain(z).0, tol)
}

/// E(Psi, z) = sum over coprime (c, d) modulo sign of Psi(y / |cz + d|^2).
pub fn eval_incomplete_eisenstein(psi: &BumpFunction, z: UpperHalfPoint) -> f64 {
    let (y0, _) = psi.support();
    let mut total = psi.eval(z.y);
    let cmax = (1.0 / (z.y * y0).sqrt()).floor() as i64;
    for c in 1..=cmax {
        let cf = c as f64;
        let rem = z.y / y0 - (cf * z.y).powi(2);
        if rem < 0.0 {
            continue;
        }
        let r = rem.sqrt();
        let centre = -cf * z.x;
        for d in (centre - r).floor() as i64..=(centre + r).ceil() as i64 {
            if arith::gcd_i64(c, d) != 1 {
                continue;
            }
            let den = (cf * z.x + d as f64).powi(2) + (cf * z.y).powi(2);
            total += psi.eval(z.y / den);
        }
    }
    total
}

fn mobius(n: u64) -> i64 {
    let f = arith::factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Ramanujan sum c_c(n) = sum_{d | gcd(c, n)} mu(c/d) d.
pub fn ramanujan_sum(c: u64, n: u64) -> i64 {
    let g = if n == 0 { c } else { arith::gcd(c, n) };
    arith::divisors(g).iter().map(|&d| mobius(c / d) * d as i64).sum()
}

/// Fourier coefficient phi_n(y) of E(Psi, .) by unfolding over c >= 1:
/// delta_{n0} Psi(y) + sum_c c_c(n) int_R Psi(y / (c^2 (t^2 + y^2))) e(-nt) dt.
pub fn incomplete_eisenstein_coefficient(psi: &BumpFunction, n: u64, y: f64) -> Result<f64> {
    let (y0, y1) = psi.support();
    let mut total = if n == 0 { psi.eval(y) } else { 0.0 };
    let cmax = (1.0 / (y * y0).sqrt()).floor() as u64;
    for c in 1..=cmax {
        let cf = c as f64;
        let hi2 = y / (cf * cf * y0) - y * y;
        if hi2 <= 0.0 {
            continue;
        }
        let lo2 = (y / (cf * cf * y1) - y * y).max(0.0);
        let (lo, hi) = (lo2.sqrt(), hi2.sqrt());
        let f = |t: f64| psi.eval(y / (cf * cf * (t * t + y * y))) * (2.0 * PI * n as f64 * t).cos();
        let panels = 32 + (4.0 * n as f64 * (hi - lo)).ceil() as usize;
        let j = 2.0 * composite_gl(lo, hi, panels, 16).into_iter().map(|(t, w)| w * f(t)).sum::<f64>();
        total += ramanujan_sum(c, n) as f64 * j;
    }
    Ok(total)
}

/// E(Psi, z) synthesized from its Fourier coefficients.
pub fn incomplete_eisenstein_fourier(psi: &BumpFunction, z: UpperHalfPoint) -> Result<f64> {
    let mut total = incomplete_eisenstein_coefficient(psi, 0, z.y)?;
    let floor = 1e-14 * total.abs().max(1.0);
    let mut small = 0;
    for n in 1..=2000u64 {
        let c = incomplete_eisenstein_coefficient(psi, n, z.y)?;
        total += 2.0 * c * (2.0 * PI * n as f64 * z.x).cos();
        small = if c.abs() < floor { small + 1 } else { 0 };
        if small >= 8 {
            return Ok(total);
        }
    }
    Err(Error::Consistency("Fourier series of E(Psi, z) did not settle by n = 2000".into()))
}

/// phi_0(y) = int_{(2)} Psi^(s) (y^s + M(s) y^{1-s}) ds / 2 pi i, the constant
/// term read off the expansion of E(s, z) on Re(s) = 2.
pub fn incomplete_eisenstein_constant_contour(psi: &BumpFunction, y: f64) -> Result<f64> {
    let sigma = 2.0;
    let integrand = |t: f64| -> f64 {
        let s = Complex64::new(sigma, t);
        let yc = Complex64::new(y, 0.0);
        let m = scattering(s).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        let v = psi.mellin(s).unwrap_or(Complex64::new(f64::NAN, f64::NAN)) * (yc.powc(s) + m * yc.powc(1.0 - s));
        v.re / PI
    };
    // Real part is even in t; integrate over [0, T] in blocks until the blocks vanish.
    let mut total = 0.0;
    let mut a = 0.0;
    let block = 25.0;
    let mut quiet = 0;
    while a < 5000.0 {
        let v: f64 = composite_gl(a, a + block, 10, 16).into_iter().map(|(t, w)| w * integrand(t)).sum();
        if !v.is_finite() {
            return Err(Error::Quadrature("non-finite contour integrand".into()));
        }
        total += v;
        quiet = if v.abs() < 1e-13 { quiet + 1 } else { 0 };
        if quiet >= 3 {
            return Ok(total);
        }
        a += block;
    }
    Err(Error::Quadrature("contour integral did not settle by |t| = 5000".into()))
}
