#ifndef TRANSONIC_ERRORS_HPP
#define TRANSONIC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace transonic {

// Error hierarchy. Three broad groups so the CLI can map them to exit codes:
//   ConfigError      -> bad user input (exit 2)
//   ConvergenceError -> an iteration failed to converge (exit 3)
//   CertificateError -> a certified property failed to verify (exit 4)

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : Error { using Error::Error; };
struct ConvergenceError : Error { using Error::Error; };
struct CertificateError : Error { using Error::Error; };

// config / input
struct ParseError : ConfigError { using ConfigError::ConfigError; };
struct ValidationError : ConfigError { using ConfigError::ConfigError; };
struct DimensionMismatch : ConfigError { using ConfigError::ConfigError; };
struct InsufficientResolution : ConfigError { using ConfigError::ConfigError; };
struct PreconditionViolation : ConfigError { using ConfigError::ConfigError; };

// iteration failures
struct NoRoot : ConvergenceError { using ConvergenceError::ConvergenceError; };
struct ConvergenceFailure : ConvergenceError { using ConvergenceError::ConvergenceError; };
struct NewtonDivergence : ConvergenceError { using ConvergenceError::ConvergenceError; };
struct RootBracketFailure : ConvergenceError { using ConvergenceError::ConvergenceError; };
struct SingularMatrix : ConvergenceError { using ConvergenceError::ConvergenceError; };
struct SingularAssembly : ConvergenceError { using ConvergenceError::ConvergenceError; };
struct NoSigmaConvergence : ConvergenceError { using ConvergenceError::ConvergenceError; };
struct NoContraction : ConvergenceError { using ConvergenceError::ConvergenceError; };

// certified-property failures
struct SignPatternViolation : CertificateError { using CertificateError::CertificateError; };
struct Infeasible : CertificateError { using CertificateError::CertificateError; };
struct ClassificationMismatch : CertificateError { using CertificateError::CertificateError; };
struct Unclassifiable : CertificateError { using CertificateError::CertificateError; };
struct NoCertificate : CertificateError { using CertificateError::CertificateError; };
struct ExtensionFailure : CertificateError { using CertificateError::CertificateError; };
struct DenominatorDegeneracy : CertificateError { using CertificateError::CertificateError; };
struct GateViolation : CertificateError { using CertificateError::CertificateError; };
struct MultipleCrossings : CertificateError { using CertificateError::CertificateError; };
struct CompatibilityViolation : CertificateError { using CertificateError::CertificateError; };

struct IOError : Error { using Error::Error; };

} // namespace transonic

#endif
