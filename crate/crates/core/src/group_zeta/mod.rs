//! Zetas attached to `SL_n`: the Weyl-sum period, residues toward the
//! parabolic `P_{n-1,1}`, clearing of zeta denominators and the `SL_2`,
//! `SL_3` closed forms.

mod closed;
mod matching;
mod period;
mod roots;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::artin::CurveError;

pub use closed::{
    palindromic, sl2_closed, sl3_alternative_display, sl3_closed, sl3_factor_check, sl3_numerator_display,
    sl3_quotient_display, uniformity_check, GroupZeta, Sl3FactorReport, UniformityVerdict,
};
pub use matching::{
    affine_match, functional_equation_shift, offset_candidates, period_match, run_pipeline, slope_candidates,
    AffineMatch, Confirmation, PeriodMatchRow, PipelineOutput, CONSTANT_EXPONENTS,
};
pub use period::{
    build_period, clear_zeta_denominators, concrete_zeta, substitute_concrete_zeta, take_residues,
    zeta_denominator_lcm, AffineForm, PeriodTerm,
};
pub use roots::{weyl_group, Root, RootSystemA, WeylElement, MAX_N};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupZetaError {
    #[error("n = {0} is outside 2..=5")]
    RankOutOfRange(usize),
    #[error("affine form {0} has non-integral coefficients")]
    NonIntegralForm(String),
    #[error("zeta pole at {0}")]
    ZetaPole(String),
    #[error("unexpected variable left after residues: {0}")]
    ResidualVariable(String),
    #[error("group zetas need an elliptic curve")]
    NotElliptic,
    #[error("no affine change of variable in the search space")]
    NoAffineMatch,
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
