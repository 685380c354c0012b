//! Exact computation of Massey triple products on smooth plane curves.
//!
//! Everything is polynomial arithmetic over the rationals plus linear algebra
//! on graded pieces of `Q[x0, x1, x2]`:
//!
//! * [`poly`] and [`parse`]: homogeneous polynomials and their text form.
//! * [`linalg`]: degree-by-degree ideal membership with canonical witnesses.
//! * [`jacobian`]: smoothness, Jacobian-ring dimensions and bases, pairing.
//! * [`massey`]: decompositions, the `A`/`B` polynomials and the residue.
//! * [`search`]: seeded random searches and vanishing-ratio experiments.

pub mod error;
pub mod fixtures;
pub mod jacobian;
pub mod json;
pub mod linalg;
pub mod massey;
pub mod parse;
pub mod poly;
pub mod search;

pub use error::{Error, Result};
pub use jacobian::{
    annihilator_space, build_context, cup_pairing, hessian_like_det, is_smooth, jacobian_ring_basis,
    jacobian_ring_dim, CurveContext, QuotientBasis,
};
pub use linalg::{
    from_coords, monomial_basis, solve_membership, solve_with_distinguished, to_coords,
    GradedSolveReport, IdealPiece, MonomialBasis,
};
pub use massey::{
    big_ideal_det, compute_ab, decompose_cup, massey_triple, massey_triple_with_witnesses,
    AVectors, DecompWitness, MasseyResult,
};
pub use parse::{format_poly, parse_poly};
pub use poly::{Coefficient, HomogeneousPoly, Monomial};
pub use search::{
    find_triple, m_counts, random_homogeneous_poly, vanishing_ratio_experiment, Ell, FoundTriple,
    RatioReport, SearchConfig,
};
