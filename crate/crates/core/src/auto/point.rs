use crate::arith;
use crate::error::{Error, Result};
use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpperHalfPoint {
    pub x: f64,
    pub y: f64,
}

impl UpperHalfPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && y > 0.0) {
            return Err(Error::Domain(format!("({x}, {y}) is not in the upper half-plane")));
        }
        Ok(UpperHalfPoint { x, y })
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn from_complex(z: Complex64) -> Self {
        UpperHalfPoint { x: z.re, y: z.im }
    }
}

/// Integer 2x2 matrix acting by Mobius transformations (positive determinant).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { a: 1, b: 0, c: 0, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// Inverse up to the determinant (adjugate); exact inverse when det = 1.
    pub fn adjugate(&self) -> Mat2 {
        Mat2 { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn act(&self, z: UpperHalfPoint) -> UpperHalfPoint {
        let zc = z.to_complex();
        let w = (zc * self.a as f64 + self.b as f64) / (zc * self.c as f64 + self.d as f64);
        UpperHalfPoint { x: w.re, y: w.im }
    }

    /// Im(gz) computed directly, det(g) y / |cz + d|^2.
    pub fn height(&self, z: UpperHalfPoint) -> f64 {
        let (cx, cy) = (self.c as f64 * z.x + self.d as f64, self.c as f64 * z.y);
        self.det() as f64 * z.y / (cx * cx + cy * cy)
    }
}

const MAX_STEPS: usize = 10_000;

/// Reduces z into {|Re| <= 1/2, |z| >= 1}; returns the reduced point and g with g z = z_reduced.
pub fn reduce_to_fundamental_domain(z: UpperHalfPoint) -> (UpperHalfPoint, Mat2) {
    let mut g = Mat2::IDENTITY;
    let mut w = z;
    for _ in 0..MAX_STEPS {
        let n = (w.x + 0.5).floor();
        if n != 0.0 {
            let t = Mat2::new(1, -(n as i64), 0, 1);
            g = t.mul(&g);
            w = UpperHalfPoint { x: w.x - n, y: w.y };
        }
        let r2 = w.x * w.x + w.y * w.y;
        if r2 >= 1.0 - 1e-14 {
            break;
        }
        let s = Mat2::new(0, -1, 1, 0);
        g = s.mul(&g);
        w = UpperHalfPoint { x: -w.x / r2, y: w.y / r2 };
    }
    (w, g)
}

/// Maximizes Im over Gamma_0(q) extended by the Atkin-Lehner involutions (q squarefree),
/// then translates into |Re| <= 1/2. The returned matrix has determinant Q for some Q | q.
pub fn reduce_gamma0_plus(z: UpperHalfPoint, q: u64) -> Result<(UpperHalfPoint, Mat2)> {
    if q == 1 {
        return Ok(reduce_to_fundamental_domain(z));
    }
    if !arith::is_squarefree(q) {
        return Err(Error::Domain(format!("level {q} is not squarefree")));
    }
    let qi = q as i64;
    let divs: Vec<i64> = arith::divisors(q).into_iter().map(|d| d as i64).collect();
    let mut g = Mat2::IDENTITY;
    let mut w = z;
    for _ in 0..MAX_STEPS {
        let n = (w.x + 0.5).floor();
        if n != 0.0 {
            g = Mat2::new(1, -(n as i64), 0, 1).mul(&g);
            w = UpperHalfPoint { x: w.x - n, y: w.y };
        }
        // Candidate rows (qc, Qd) with Q |(q/Q) c z + d|^2 < 1 raise the height.
        let mut best: Option<(f64, Mat2)> = None;
        for &big_q in &divs {
            let m = qi / big_q;
            let qf = big_q as f64;
            let cmax = (1.0 / (m as f64 * w.y * qf.sqrt())).floor() as i64;
            for c in 1..=cmax {
                if arith::gcd_i64(big_q, c) != 1 {
                    continue;
                }
                let mc = (m * c) as f64;
                let rem = 1.0 / qf - (mc * w.y).powi(2);
                if rem <= 0.0 {
                    continue;
                }
                let r = rem.sqrt();
                let centre = -mc * w.x;
                for d in (centre - r).ceil() as i64..=(centre + r).floor() as i64 {
                    if arith::gcd_i64(d, m * c) != 1 {
                        continue;
                    }
                    let len = qf * ((mc * w.x + d as f64).powi(2) + (mc * w.y).powi(2));
                    if len >= 1.0 - 1e-12 {
                        continue;
                    }
                    // Q a d - m b c = 1.
                    let (_, a, t) = arith::ext_gcd(big_q * d, m * c);
                    let b = -t;
                    let mat = Mat2::new(big_q * a, b, qi * c, big_q * d);
                    if best.is_none_or(|(l, _)| len < l) {
                        best = Some((len, mat));
                    }
                }
            }
        }
        match best {
            Some((_, mat)) => {
                w = mat.act(w);
                g = mat.mul(&g);
            }
            None => break,
        }
    }
    Ok((w, g))
}
