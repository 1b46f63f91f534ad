use equi_core::quad::{composite_gl, gauss_legendre, integrate};
use equi_core::special::*;
use num_complex::Complex64;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

// Reference values computed offline with mpmath at 30 digits.
#[test]
fn bessel_k_matches_reference_values() {
    let cases = [
        (c(0.0, 0.0), 1.0, c(0.421024438240708333335627379213, 0.0)),
        (c(1.0, 0.0), 1.0, c(0.601907230197234574737540001536, 0.0)),
        (c(0.3, 0.0), 0.05, c(3.81196633676911069858530174625, 0.0)),
        (c(0.49, 0.0), 2.0, c(0.119692988246005540167087420429, 0.0)),
        (c(0.0, 0.2), 0.1, c(2.27195275673207093207006114155, 0.0)),
        (c(0.0, 5.0), 1.0, c(0.000380461827997563728049666415226, 0.0)),
        (c(0.0, 5.0), 10.0, c(0.00000527812176514912199330220504073, 0.0)),
        (c(2.5, 0.0), 0.7, c(8.48634159280138499813831359641, 0.0)),
        (c(0.3, 2.0), 1.5, c(0.0672546983852805838170488772126, 0.0254217882151881426376418666413)),
    ];
    for (nu, x, want) in cases {
        let got = bessel_k(nu, x);
        assert!(rel(got, want) < 1e-10, "K_{nu}({x}) = {got}, want {want}");
    }
}

// Large imaginary order: the integral cancels to ~e^{-pi r/2}, so only absolute accuracy is available.
#[test]
fn bessel_k_large_imaginary_order_absolute() {
    let cases = [
        (13.77975135189073894424, 5.5, -9.32438766230378e-11),
        (9.533695261353557554344, 1.0, 1.27799282151198e-7),
        (13.77975135189073894424, 0.3, -2.22392558068111e-10),
    ];
    for (r, x, want) in cases {
        let got = bessel_k(c(0.0, r), x);
        assert!((got.re - want).abs() < 1e-14 && got.im.abs() < 1e-14, "K_{r}i({x}) = {got}, want {want}");
    }
}

#[test]
fn bessel_k_half_order_closed_form() {
    for &x in &[0.05, 0.3, 1.0, 4.0, 25.0] {
        let want = (PI / (2.0 * x)).sqrt() * (-x).exp();
        let got = bessel_k_real(0.5, x);
        assert!((got - want).abs() / want < 1e-12, "x = {x}: {got} vs {want}");
    }
}

#[test]
fn bessel_k_zero_small_argument_series() {
    // K_0(x) = -(ln(x/2) + gamma) I_0(x) + sum_{k>=1} H_k (x^2/4)^k / (k!)^2
    let euler_gamma = 0.577_215_664_901_532_9;
    for &x in &[0.05, 0.2, 0.8] {
        let q: f64 = x * x / 4.0;
        let (mut i0, mut tail, mut term, mut h) = (1.0, 0.0, 1.0, 0.0);
        for k in 1..40 {
            term *= q / (k * k) as f64;
            h += 1.0 / k as f64;
            i0 += term;
            tail += h * term;
        }
        let want = -((x / 2.0).ln() + euler_gamma) * i0 + tail;
        let got = bessel_k_real(0.0, x);
        assert!((got - want).abs() / want < 1e-11, "x = {x}: {got} vs {want}");
    }
}

#[test]
fn bessel_k_respects_bound() {
    for &nu in &[c(0.0, 0.0), c(0.3, 0.0), c(0.49, 0.0), c(0.0, 5.0), c(0.0, 9.5)] {
        for &x in &[0.05, 0.5, 2.0, 10.0, 40.0] {
            let v = bessel_k(nu, x).norm();
            assert!(v <= bessel_k_bound(nu, x) * (1.0 + 1e-12), "nu {nu} x {x}");
        }
    }
}

#[test]
fn kappa_bessel_is_bounded_by_one() {
    let orders = [c(0.0, 0.0), c(0.3, 0.0), c(-0.3, 0.0), c(0.49, 0.0), c(0.0, 0.2), c(0.0, 5.0)];
    let mut y: f64 = 0.05;
    while y <= 50.0 {
        for &s in &orders {
            let k = kappa_bessel(s, y).norm();
            assert!(k <= 1.0, "kappa_{s}({y}) = {k}");
        }
        y *= 1.3;
    }
}

#[test]
fn zeta_matches_reference_values() {
    let cases = [
        (c(2.0, 0.0), c(1.64493406684822643647241516665, 0.0)),
        (c(3.0, 7.0), c(1.01420036897111593208635248401, 0.0961253958580224324978600488294)),
        (c(1.001, 0.0), c(1000.57728847601162684806668989, 0.0)),
        (c(-0.5, 2.0), c(0.228094971716526329804961136618, -0.144529171733713596419890337627)),
        (c(3.0, 400.0), c(1.11779361268867359990592822516, -0.0936553505231769393980250189318)),
    ];
    for (s, want) in cases {
        let got = zeta(s).unwrap();
        assert!(rel(got, want) < 1e-12, "zeta({s}) = {got}, want {want}");
    }
    let z = zeta(c(0.5, 14.134725141734693790)).unwrap();
    assert!(z.norm() < 1e-12);
    assert!(zeta(c(1.0, 0.0)).is_err());
}

#[test]
fn gamma_matches_reference_values() {
    let cases = [
        (c(0.5, 0.0), c(1.77245385090551602729816748334, 0.0)),
        (c(5.5, 0.0), c(52.3427777845535201811490084924, 0.0)),
        (c(0.25, 3.0), c(0.0170503239342441192726886789378, -0.00159687742038133589103939354277)),
        (c(-2.5, 1.0), c(-0.0417366258078936137447601383098, -0.086369107369763484694186279347)),
    ];
    for (z, want) in cases {
        assert!(rel(gamma(z), want) < 1e-13, "gamma({z})");
        assert!(rel(ln_gamma(z).exp(), want) < 1e-13, "exp ln_gamma({z})");
    }
    assert!((ln_gamma_real(11.0) - 3628800f64.ln()).abs() < 1e-12);
}

#[test]
fn incomplete_gamma_integer_order() {
    // Gamma(n, 0) = (n-1)!
    assert!((upper_incomplete_gamma_int(5, 0.0) - 24.0).abs() < 1e-12);
    // Gamma(1, x) = e^{-x}
    assert!((upper_incomplete_gamma_int(1, 2.0) - (-2.0f64).exp()).abs() < 1e-15);
    let q = integrate(|t: f64| t.powi(10) * (-t).exp(), 3.0, 80.0, 1e-13, 0.0).unwrap();
    assert!((upper_incomplete_gamma_int(11, 3.0) - q.value).abs() / q.value < 1e-11);
}

#[test]
fn scattering_matches_definition() {
    let s = c(1.3, 0.4);
    let direct = xi(2.0 * s - 1.0).unwrap() / xi(2.0 * s).unwrap();
    assert!(rel(scattering(s).unwrap(), direct) < 1e-12);
    // M(s) M(1-s) = 1 via the functional equation xi(s) = xi(1-s).
    let s = c(0.8, 2.0);
    let m = scattering(s).unwrap() * (xi(1.0 - 2.0 * s).unwrap() / xi(2.0 - 2.0 * s).unwrap());
    assert!((m - 1.0).norm() < 1e-10);
}

#[test]
fn gauss_legendre_integrates_polynomials_exactly() {
    for n in [1usize, 2, 5, 12, 40] {
        let (xs, ws) = gauss_legendre(n);
        for deg in 0..(2 * n) {
            let got: f64 = xs.iter().zip(&ws).map(|(x, w)| w * x.powi(deg as i32)).sum();
            let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((got - want).abs() < 1e-13, "n {n} deg {deg}");
        }
    }
    let s: f64 = composite_gl(0.0, PI, 4, 10).iter().map(|(x, w)| w * x.sin()).sum();
    assert!((s - 2.0).abs() < 1e-14);
}

#[test]
fn adaptive_quadrature_handles_peaks() {
    let r = integrate(|x: f64| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-12, 0.0).unwrap();
    let want = 2.0 / 1e-2 * (1.0f64 / 1e-2).atan();
    assert!((r.value - want).abs() / want < 1e-11);
}
