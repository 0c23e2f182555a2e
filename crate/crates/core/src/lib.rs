pub mod asep;
pub mod composition;
pub mod error;
pub mod hecke;
pub mod koornwinder;
pub mod laurent;
pub mod limits;
pub mod matrix;
pub mod mpa;
pub mod params;
pub mod qkz;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod verify;

pub use composition::{box_partitions, dominance_leq, orbit, preceq, Composition};
pub use error::{Error, Result};
pub use hecke::HeckeContext;
pub use laurent::{orbit_sum, LaurentPolynomial, Substitution};
pub use matrix::Matrix;
pub use params::{ParameterPoint, Params, Rates, RatesF};
pub use report::{CheckEntry, Report, Verdict};
pub use scalar::{BigFloat, Jet, Rational, Real, Scalar};
pub use asep::{build_m, lambda0, u_gc, Lambda0};
pub use koornwinder::{nonsymmetric_e, symmetric_p, NonsymmetricE, SymmetricP};
pub use limits::{check_e_mu, check_f0_characterization, Backend, LimitConfig, LimitEstimate};
pub use mpa::{evaluate_fock, MpEvaluation};
pub use qkz::Side;
pub use verify::{run_all, CriterionOutcome, VerifyConfig};
