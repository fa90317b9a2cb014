//! Exact integration of powers of linear forms, polynomials and products of affine
//! functions over simplices, simplicial cones and polytopes.

mod affine;
mod plf;
mod polytope;

pub use affine::{integrate_affine_products_cone, integrate_affine_products_simplex, AffineProductTable};
pub use plf::{integrate_plf_cone, integrate_plf_simplex, simplex_pole_terms};
pub use polytope::{
    cone_vertex_terms, integrate_plf_polytope, integrate_polynomial, integrate_polynomial_box,
    integrate_polynomial_jobs, Decomposition, IntegrationResult, Method,
};
