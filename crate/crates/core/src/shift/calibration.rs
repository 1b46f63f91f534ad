//! Empirical constants frozen from audited runs. Ratios above these fail the calibration checks.

/// max over the shifted-sum calibration grid of shifted_sum_exact / shifted_sum_bound.
pub const SHIFTED_SUM_RATIO_MAX: f64 = 0.69;
/// max |I_s| / lemma_bound over the integral grid.
pub const LEMMA_CONSTANT_MAX: f64 = 0.71;
/// sup of divisor_lemma_ratio over squarefree q <= 10^12, k in {2, 12}, eps in {0.1, 0.5}; attained at q = 6, k = 2, eps = 0.1.
pub const DIVISOR_RATIO_MAX: f64 = 3.21;
/// max |S_s| / corollary_bound over the weighted grid.
pub const WEIGHTED_RATIO_MAX: f64 = 0.0122;
