//! Error type with stable machine-readable codes.

use std::fmt;

use ciani_core::ciani::CianiError;
use ciani_core::klein::KleinError;
use ciani_core::poly::FormParseError;
use ciani_core::resultant::ResultantError;
use ciani_core::symplectic::SymplecticError;
use ciani_core::theta::ThetaError;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    /// Dotted code such as `theta.not_positive_definite`.
    pub code: String,
    pub message: String,
    pub kind: ErrorKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad flags or unreadable input; exit code 2.
    Usage,
    /// The computation rejected the input; exit code 1.
    Domain,
}

impl CliError {
    pub fn usage(code: &str, message: impl Into<String>) -> Self {
        Self { code: format!("usage.{code}"), message: message.into(), kind: ErrorKind::Usage }
    }

    pub fn input(code: &str, message: impl Into<String>) -> Self {
        Self { code: format!("input.{code}"), message: message.into(), kind: ErrorKind::Usage }
    }

    pub fn domain(code: impl Into<String>, message: impl Into<String>) -> Self {
        Self { code: code.into(), message: message.into(), kind: ErrorKind::Domain }
    }

    pub fn exit_code(&self) -> u8 {
        match self.kind {
            ErrorKind::Usage => 2,
            ErrorKind::Domain => 1,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "error": { "code": self.code, "message": self.message } })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl std::error::Error for CliError {}

impl From<FormParseError> for CliError {
    fn from(e: FormParseError) -> Self {
        let code = match e {
            FormParseError::Syntax { .. } => "syntax",
            FormParseError::DivisionByZero { .. } => "division_by_zero",
            FormParseError::NonConstantDivisor { .. } => "non_constant_divisor",
            FormParseError::ExponentTooLarge { .. } => "exponent_too_large",
            FormParseError::Inhomogeneous { .. } => "inhomogeneous",
        };
        Self::input(&format!("form.{code}"), e.to_string())
    }
}

impl From<ResultantError> for CliError {
    fn from(e: ResultantError) -> Self {
        let code = match e {
            ResultantError::NotCubic(_) => "resultant.not_cubic",
            ResultantError::NotQuartic(_) => "resultant.not_quartic",
        };
        Self::domain(code, e.to_string())
    }
}

impl From<CianiError> for CliError {
    fn from(e: CianiError) -> Self {
        let code = match e {
            CianiError::NotInS => "ciani.not_in_s",
            CianiError::Singular => "ciani.singular",
            CianiError::NotSymmetric => "ciani.not_symmetric",
            CianiError::SingularCurve(_) => "ciani.singular_curve",
            CianiError::RhoMismatch => "ciani.rho_mismatch",
            CianiError::RootProductMismatch => "ciani.root_product_mismatch",
            CianiError::NotCiani => "ciani.not_ciani",
        };
        Self::domain(code, e.to_string())
    }
}

impl From<SymplecticError> for CliError {
    fn from(e: SymplecticError) -> Self {
        let code = match e {
            SymplecticError::BadShape { .. } => "symplectic.bad_shape",
            SymplecticError::NotSymplectic => "symplectic.not_symplectic",
            SymplecticError::NotInSubgroup(_) => "symplectic.not_in_subgroup",
            SymplecticError::GenusOutOfRange(_) => "symplectic.genus_out_of_range",
            SymplecticError::NotMaximalIsotropic => "symplectic.not_maximal_isotropic",
            SymplecticError::Overflow => "symplectic.overflow",
        };
        Self::domain(code, e.to_string())
    }
}

impl From<ThetaError> for CliError {
    fn from(e: ThetaError) -> Self {
        let code = match e {
            ThetaError::NotPositiveDefinite => "theta.not_positive_definite",
            ThetaError::NotSymmetric(_) => "theta.not_symmetric",
            ThetaError::NotSquare => "theta.not_square",
            ThetaError::PrecisionTooLow(_) => "theta.precision_too_low",
            ThetaError::UnsupportedGenus(_) => "theta.unsupported_genus",
            ThetaError::GenusMismatch { .. } => "theta.genus_mismatch",
            ThetaError::Singular => "theta.singular",
            ThetaError::RiemannConditions => "theta.riemann_conditions",
            ThetaError::NotInSubgroup(_) => "theta.not_in_subgroup",
        };
        Self::domain(code, e.to_string())
    }
}

impl From<KleinError> for CliError {
    fn from(e: KleinError) -> Self {
        let code = match &e {
            KleinError::Theta(inner) => return inner.clone().into(),
            KleinError::NotInUpperHalfPlane(_) => "klein.not_in_upper_half_plane",
            KleinError::DegenerateLattice(_) => "klein.degenerate_lattice",
            KleinError::Inconsistent { .. } => "klein.inconsistent",
            KleinError::RiemannConditions => "klein.riemann_conditions",
            KleinError::DegenerateIdentities => "klein.degenerate_identities",
            KleinError::AgmNoConvergence => "klein.agm_no_convergence",
            KleinError::Unsupported(_) => "klein.unsupported",
            KleinError::NotInSTimes => "klein.not_in_s_times",
            KleinError::NoBracket => "klein.no_bracket",
        };
        Self::domain(code, e.to_string())
    }
}
