use super::cosets::{coset_representatives, cusp_chart};
use super::forms::{eval_incomplete_eisenstein, eval_newform_mass, newform_partial_sum, MaassFormData};
use super::point::{Mat2, UpperHalfPoint};
use crate::arith;
use crate::coeff::{adjoint_l_at_1, AdjointL, CoefficientTable};
use crate::error::{Error, Result};
use crate::quad::{composite_gl, integrate};
use crate::shift::{weight_factor, BumpFunction};
use crate::special::{kappa_holomorphic, upper_incomplete_gamma_int};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Tensor Gauss-Legendre grid on the standard domain below y_cut.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub x_panels: usize,
    pub y_panels: usize,
    pub order: usize,
    pub y_cut: f64,
    /// Absolute tolerance for each pointwise evaluation.
    pub eval_tol: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { x_panels: 8, y_panels: 8, order: 12, y_cut: 3.0, eval_tol: 1e-16 }
    }
}

impl GridSpec {
    pub fn refined(&self) -> Self {
        GridSpec { x_panels: 2 * self.x_panels, y_panels: 2 * self.y_panels, ..*self }
    }

    fn validate(&self) -> Result<()> {
        if self.x_panels == 0 || self.y_panels == 0 || self.order == 0 || self.y_cut < 1.0 {
            return Err(Error::Domain(format!("invalid grid {self:?}")));
        }
        Ok(())
    }
}

/// int_F g(z) dx dy / y^2 over F cut at y_cut; columns are evaluated in parallel and
/// summed in x order.
pub fn integrate_over_domain<G>(grid: &GridSpec, g: G) -> Result<f64>
where
    G: Fn(UpperHalfPoint) -> Result<f64> + Sync,
{
    grid.validate()?;
    let xs = composite_gl(-0.5, 0.5, grid.x_panels, grid.order);
    let columns: Vec<Result<f64>> = xs
        .par_iter()
        .map(|&(x, wx)| {
            let ylo = (1.0 - x * x).sqrt();
            let mut col = 0.0;
            for (y, wy) in composite_gl(ylo, grid.y_cut, grid.y_panels, grid.order) {
                col += wy * g(UpperHalfPoint { x, y })? / (y * y);
            }
            Ok(wx * col)
        })
        .collect();
    let mut total = 0.0;
    for c in columns {
        total += c?;
    }
    Ok(total)
}

/// int_Y^inf sum_n lambda(n)^2/n kappa_f(ny)^2 dy/y^2 = (4pi)^{1-k} sum lambda(n)^2 Gamma(k-1, 4 pi n Y).
pub fn cusp_tail(table: &CoefficientTable, big_y: f64) -> Result<f64> {
    let k = table.weight();
    let mut total: f64 = 0.0;
    let mut n = 1u64;
    loop {
        // lambda(n)^2 <= tau(n)^2 <= 4n; stop once the rest is negligible.
        let g = upper_incomplete_gamma_int(k - 1, 4.0 * PI * n as f64 * big_y);
        if 4.0 * n as f64 * g < 1e-18 * total.max(1e-300) || g == 0.0 {
            break;
        }
        table.require(n)?;
        total += table.lambda(n).powi(2) * g;
        n += 1;
    }
    Ok(total * (4.0 * PI).powf(1.0 - k as f64))
}

/// Coset data: representative, cusp chart, and the chart's contribution to the cusp tail.
struct Coset {
    gamma: Mat2,
    chart: Mat2,
}

fn cosets(q: u64) -> Result<Vec<Coset>> {
    Ok(coset_representatives(q)?
        .into_iter()
        .map(|gamma| Coset { gamma, chart: cusp_chart(&gamma, q) })
        .collect())
}

/// sum_i y^k |f|^2(gamma_i z).
fn lifted_mass(table: &CoefficientTable, cos: &[Coset], z: UpperHalfPoint, tol: f64) -> Result<f64> {
    let mut s = 0.0;
    for c in cos {
        s += eval_newform_mass(table, c.gamma.act(z), tol)?;
    }
    Ok(s)
}

/// sum_i (A_i/D_i) T((A_i/D_i) y_cut): the part of mu_f(1) above the cut.
fn lifted_tail(table: &CoefficientTable, cos: &[Coset], y_cut: f64) -> Result<f64> {
    let mut total = 0.0;
    for c in cos {
        let ratio = c.chart.a as f64 / c.chart.d as f64;
        total += ratio * cusp_tail(table, ratio * y_cut)?;
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeterssonResult {
    pub numeric: f64,
    pub formula: f64,
    pub rel_err: f64,
    pub adjoint: AdjointL,
}

/// q Gamma(k-1)/(4pi)^{k-1} (k-1)/(2 pi^2) L(ad f, 1).
pub fn petersson_formula(q: u64, k: u32, adjoint_value: f64) -> f64 {
    q as f64 * weight_factor(k) * (k as f64 - 1.0) / (2.0 * PI * PI) * adjoint_value
}

/// mu_f(1) by quadrature over the coset images of F, with the cusp tail added analytically.
pub fn petersson_numeric(table: &CoefficientTable, grid: &GridSpec) -> Result<f64> {
    let cos = cosets(table.level())?;
    let body = integrate_over_domain(grid, |z| lifted_mass(table, &cos, z, grid.eval_tol))?;
    Ok(body + lifted_tail(table, &cos, grid.y_cut)?)
}

pub fn petersson_norm(table: &CoefficientTable, euler_cutoff: u64, grid: &GridSpec) -> Result<PeterssonResult> {
    let numeric = petersson_numeric(table, grid)?;
    if !(numeric > 0.0) {
        return Err(Error::Quadrature(format!("non-positive Petersson quadrature {numeric}")));
    }
    let adjoint = adjoint_l_at_1(table, euler_cutoff)?;
    let formula = petersson_formula(table.level(), table.weight(), adjoint.value);
    Ok(PeterssonResult { numeric, formula, rel_err: (numeric - formula).abs() / formula, adjoint })
}

/// Level-one test function pulled back to the modular curve.
#[derive(Clone, Debug, PartialEq)]
pub enum PeriodTest {
    Maass(MaassFormData),
    Incomplete(BumpFunction),
}

impl PeriodTest {
    /// mu(phi)/mu(1): Psi^(1)/(pi/3) for an incomplete Eisenstein series, 0 for a cusp form.
    pub fn expected_ratio(&self) -> Result<f64> {
        match self {
            PeriodTest::Maass(_) => Ok(0.0),
            PeriodTest::Incomplete(psi) => Ok(psi.mellin(Complex64::new(1.0, 0.0))?.re / (PI / 3.0)),
        }
    }

    fn eval(&self, z: UpperHalfPoint, tol: f64) -> Result<f64> {
        match self {
            PeriodTest::Maass(phi) => phi.fourier_at(z, tol),
            PeriodTest::Incomplete(psi) => Ok(eval_incomplete_eisenstein(psi, z)),
        }
    }

    /// Height above which phi vanishes on F (incomplete) or is below `tol` (cusp form).
    fn quiet_height(&self, tol: f64) -> f64 {
        match self {
            PeriodTest::Incomplete(psi) => {
                let (y0, y1) = psi.support();
                y1.max(1.0 / y0)
            }
            // |phi| <= sum 4 n^{7/64} e^{-2 pi n y} < 8 e^{-2 pi y} once y >= 1.
            PeriodTest::Maass(_) => (8.0 / tol).ln() / (2.0 * PI),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeylPeriod {
    pub period: f64,
    pub mass: f64,
    pub period_ratio: f64,
    pub expected_ratio: f64,
    pub discrepancy: f64,
}

/// mu_f(phi)/mu_f(1) and the discrepancy against mu(phi)/mu(1).
pub fn weyl_period(table: &CoefficientTable, phi: &PeriodTest, grid: &GridSpec) -> Result<WeylPeriod> {
    let grid = GridSpec { y_cut: grid.y_cut.max(phi.quiet_height(1e-14) + 1e-9), ..*grid };
    let cos = cosets(table.level())?;
    let pairs = integrate_pair(&grid, |z| {
        let m = lifted_mass(table, &cos, z, grid.eval_tol)?;
        Ok((m * phi.eval(z, 1e-16)?, m))
    })?;
    let period = pairs.0;
    let mass = pairs.1 + lifted_tail(table, &cos, grid.y_cut)?;
    let period_ratio = period / mass;
    let expected_ratio = phi.expected_ratio()?;
    Ok(WeylPeriod { period, mass, period_ratio, expected_ratio, discrepancy: period_ratio - expected_ratio })
}

fn integrate_pair<G>(grid: &GridSpec, g: G) -> Result<(f64, f64)>
where
    G: Fn(UpperHalfPoint) -> Result<(f64, f64)> + Sync,
{
    let xs = composite_gl(-0.5, 0.5, grid.x_panels, grid.order);
    let columns: Vec<Result<(f64, f64)>> = xs
        .par_iter()
        .map(|&(x, wx)| {
            let ylo = (1.0 - x * x).sqrt();
            let (mut a, mut b) = (0.0, 0.0);
            for (y, wy) in composite_gl(ylo, grid.y_cut, grid.y_panels, grid.order) {
                let (u, v) = g(UpperHalfPoint { x, y })?;
                a += wy * u / (y * y);
                b += wy * v / (y * y);
            }
            Ok((wx * a, wx * b))
        })
        .collect();
    let (mut a, mut b) = (0.0, 0.0);
    for c in columns {
        let (u, v) = c?;
        a += u;
        b += v;
    }
    Ok((a, b))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnfoldingResult {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
}

/// int_0^1 y^k |f(x + iy)|^2 dx by the trapezoid rule on 2N + 2 nodes, exact for the truncated series.
pub fn strip_mass(table: &CoefficientTable, y: f64, tol: f64) -> Result<f64> {
    let (_, n) = newform_partial_sum(table, UpperHalfPoint { x: 0.0, y }, tol)?;
    let k = table.weight();
    let coef: Vec<f64> = (1..=n)
        .map(|m| table.lambda(m) / (m as f64).sqrt() * kappa_holomorphic(k, m as f64 * y))
        .collect();
    let nodes = 2 * n as usize + 2;
    let mut total = 0.0;
    for j in 0..nodes {
        let theta = 2.0 * PI * j as f64 / nodes as f64;
        let step = Complex64::from_polar(1.0, theta);
        let mut phase = step;
        let mut s = Complex64::new(0.0, 0.0);
        for &c in &coef {
            s += phase * c;
            phase *= step;
        }
        total += s.norm_sqr();
    }
    Ok(total / nodes as f64)
}

/// mu_f(E(h_Y, .)) by coset quadrature against sum_{d | q} int h_Y(dy) int_0^1 y^k|f|^2 dx dy/y^2.
pub fn unfolding_check(table: &CoefficientTable, big_y: f64, h: &BumpFunction, grid: &GridSpec) -> Result<UnfoldingResult> {
    let q = table.level();
    if !arith::is_squarefree(q) {
        return Err(Error::Domain(format!("level {q} is not squarefree")));
    }
    let h_y = h.dilate(big_y);
    let lhs = weyl_period(table, &PeriodTest::Incomplete(h_y), grid)?.period;
    let (y0, y1) = h_y.support();
    let mut rhs = 0.0;
    for d in arith::divisors(q) {
        let df = d as f64;
        let f = |y: f64| -> f64 {
            match strip_mass(table, y, grid.eval_tol) {
                Ok(m) => h_y.eval(df * y) * m / (y * y),
                Err(_) => f64::NAN,
            }
        };
        let r = integrate(f, y0 / df, y1 / df, 1e-12, 1e-300)?;
        if !r.value.is_finite() {
            // Surface the underlying range error.
            strip_mass(table, y0 / df, grid.eval_tol)?;
            return Err(Error::Quadrature("non-finite strip integral".into()));
        }
        rhs += r.value;
    }
    Ok(UnfoldingResult { lhs, rhs, rel_err: (lhs - rhs).abs() / rhs.abs() })
}
