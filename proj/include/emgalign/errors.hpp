#pragma once

#include <stdexcept>
#include <string>

namespace emgalign {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shape mismatch between operands (rows/cols/lengths).
struct DimensionError : Error { using Error::Error; };

/// An argument is outside its documented domain.
struct ParameterError : Error { using Error::Error; };

/// A matrix that must be (numerically) invertible is not.
struct SingularityError : Error { using Error::Error; };

/// An iterative routine failed to converge within its iteration cap.
struct NumericalError : Error { using Error::Error; };

/// Two sequences that must pair column-for-column cannot.
struct PairingError : Error { using Error::Error; };

/// Calibration data does not cover every gesture with enough repetitions.
struct CoverageError : Error { using Error::Error; };

/// Training preconditions violated (e.g. single-class data).
struct TrainingError : Error { using Error::Error; };

/// Data values violate an invariant (NaN/Inf where finite is required).
struct DataError : Error { using Error::Error; };

/// A file being ingested is malformed; message carries the row number.
struct IngestError : Error { using Error::Error; };

/// Experiment configuration is invalid.
struct ConfigError : Error { using Error::Error; };

/// Filesystem-level failure (unwritable directory, missing file).
struct IoError : Error { using Error::Error; };

}  // namespace emgalign
