//! `K_f`, the Hermite–Hadamard chain, the four bounds on `|K_f|` and the
//! corollaries derived from them, plus the record type every check produces.
//!
//! Left-hand sides come from Hadamard integrals of `f`; right-hand sides
//! come from `f′` and the constants module. The two never share code.

mod bounds;
mod kf;
pub mod remark;
mod statement;

pub use bounds::{
    bound, bound_thm5, bound_thm5_with, bound_thm6, bound_thm6_with, bound_thm7, bound_thm7_with, bound_thm8,
    bound_thm8_with, bound_with, derivative_sup, hypothesis_interval, DerivAbs, SUP_GRID_POINTS, SUP_SAFETY,
};
pub use kf::{
    fractional_integrals, hh_chain, kf_direct, kf_lhs, kf_rhs_identity, kf_rhs_parts, HhChain, IdentityParts,
    KfDecomposition, KfDirect,
};
pub use statement::{
    corollary, corollary_scale, evaluate, evaluate_values, Evaluation, Family, RecordParams, Statement, Verdict, VerificationRecord,
    IDENTITY_ABS_FLOOR, REMARK_AGREEMENT_TOL,
};
