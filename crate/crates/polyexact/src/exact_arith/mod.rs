//! Exact scalars, truncated multivariate series, Bernoulli numbers and power sums.

mod bernoulli;
mod series;

pub use bernoulli::{bernoulli, bernoulli_table, faulhaber, faulhaber_polynomial, power_sum};
pub use series::{
    bernoulli_factor_series, exp_series, linear_series, residue_coeff, truncated_mul, TruncatedSeries,
};
