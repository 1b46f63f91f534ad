use crate::error::Result;
use crate::quad::composite_gl;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Smooth bump h(y) = A exp(-1/(1-u^2)), u = (ln y - c)/w, supported on
/// [e^{c-w}, e^{c+w}].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BumpFunction {
    pub center: f64,
    pub width: f64,
    pub amplitude: f64,
}

fn bump(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - u * u)).exp()
    }
}

impl BumpFunction {
    /// Default test function: c = 0, w = 1/2, scaled so that h^(1) = pi/3.
    pub fn standard() -> Self {
        BumpFunction::normalized(0.0, 0.5, PI / 3.0).expect("standard bump normalizes")
    }

    /// Bump on [y0, y1] with peak value amplitude * e^{-1}.
    pub fn on_support(y0: f64, y1: f64, amplitude: f64) -> Self {
        assert!(0.0 < y0 && y0 < y1);
        let (a, b) = (y0.ln(), y1.ln());
        BumpFunction { center: 0.5 * (a + b), width: 0.5 * (b - a), amplitude }
    }

    /// Chooses the amplitude so that the Mellin transform at s = 1 equals `target`.
    pub fn normalized(center: f64, width: f64, target: f64) -> Result<Self> {
        let unit = BumpFunction { center, width, amplitude: 1.0 };
        let m = unit.mellin(Complex64::new(1.0, 0.0))?.re;
        Ok(BumpFunction { amplitude: target / m, ..unit })
    }

    pub fn support(&self) -> (f64, f64) {
        ((self.center - self.width).exp(), (self.center + self.width).exp())
    }

    pub fn eval(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        self.amplitude * bump((y.ln() - self.center) / self.width)
    }

    /// sup h = A e^{-1}.
    pub fn sup(&self) -> f64 {
        self.amplitude * (-1.0f64).exp()
    }

    /// y -> h(Y y).
    pub fn dilate(&self, big_y: f64) -> Self {
        BumpFunction { center: self.center - big_y.ln(), ..*self }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        BumpFunction { amplitude: self.amplitude * factor, ..*self }
    }

    /// h^(s) = int h(y) y^{-s-1} dy = A w e^{-sc} int_{-1}^{1} b(u) e^{-swu} du.
    pub fn mellin(&self, s: Complex64) -> Result<Complex64> {
        let (c, w) = (self.center, self.width);
        let panels = 16 + (0.5 * s.norm() * w).ceil() as usize;
        let q: Complex64 = composite_gl(-1.0, 1.0, panels, 20)
            .into_iter()
            .map(|(u, wt)| wt * bump(u) * (-s * w * u).exp())
            .sum();
        Ok(self.amplitude * w * (-s * c).exp() * q)
    }
}
