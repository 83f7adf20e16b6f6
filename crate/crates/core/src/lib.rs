//! Exact supergeometric calculus for (pre-)Courant algebroids on `A + A*`.
//!
//! The crate models the function algebra of `T*[2]A[1]` with polynomial
//! coefficients over exact rationals, its canonical degree -2 Poisson bracket
//! (the "big bracket"), pre-Courant structures as degree-3 functions, the
//! deformation / torsion / concomitant calculus of skew-symmetric
//! (1,1)-tensors, and a verification harness that checks an executable
//! catalog of hierarchy identities (T-01..T-21) on concrete instances.
//!
//! Everything is exact: all checks are polynomial identities over the
//! rationals, and "for all sections" statements are discharged on basis
//! sections (the operations involved are function-linear, so this suffices).
//! Coefficient functions are polynomials in the base coordinates; the smooth
//! (C-infinity) setting is modeled only through its polynomial subalgebra.

pub mod algebra;
pub mod bracket;
pub mod catalog;
pub mod courant;
pub mod defn;
pub mod error;
pub mod hierarchy;
pub mod identities;
pub mod report;
pub mod tensor;

pub use algebra::{format_rat, left_partial, rat, Bidegree, Generator, Monomial, Rat, Signature, SuperPolynomial};
pub use bracket::{bracket, bracket2};
pub use courant::{basis_sections, CourantDecomposition, PreCourant, Section};
pub use error::{Error, Result};
pub use hierarchy::{build_pn_hierarchy, compatibility_check, lambda_seq, theta_k, DeformationPath, LambdaSequence};
pub use identities::{verify_identity, Bounds, CheckStatus, IdentityReport, Instance, IDENTITY_IDS};
pub use tensor::{classify_pair, concomitant, deform_theta, deforming_eta, endo_of, func_of, is_nijenhuis, is_poisson, nijenhuis_concomitant, theta_path, torsion, torsion_function, BracketOp, Endomorphism, PairClass, PairClassification, Tensor, TensorFunction};

