#pragma once

#include <stdexcept>
#include <string>

namespace mapshrink {

/// Base class for every failure this library raises on purpose. Callers that
/// only care about "the estimator could not be formed on this data" can catch
/// this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Beta vector whose cross-sectional mean is zero (relative to its largest
/// entry), so the normalised profile beta/mean is undefined.
class ZeroMeanError : public Error {
 public:
  using Error::Error;
};

/// Dispersion of a beta vector is zero, so a pointwise correlation that
/// divides by it is undefined.
class ZeroDispersionError : public Error {
 public:
  using Error::Error;
};

/// Sample covariance has no positive leading eigenvalue (all-zero returns).
class DegenerateSpectrumError : public Error {
 public:
  using Error::Error;
};

/// Leading eigenvalue does not exceed the bulk level, so the spike scale
/// estimate s2 - l2 is not positive.
class NoGapError : public Error {
 public:
  using Error::Error;
};

/// Every candidate direction fell below the rank tolerance; the requested
/// span is empty.
class EmptySpanError : public Error {
 public:
  using Error::Error;
};

/// A random basis draw failed to reach full rank even after a redraw.
class RankDeficientError : public Error {
 public:
  using Error::Error;
};

/// The shrinkage combination tau*h + proj(h) is numerically zero, or the
/// spectral ratio psi has reached 1 so the shrinkage weight is undefined.
class DegenerateShrinkageError : public Error {
 public:
  using Error::Error;
};

/// Projecting the target direction onto the augmented anchor span produced a
/// numerically zero vector, so the oracle direction is undefined.
class DegenerateProjectionError : public Error {
 public:
  using Error::Error;
};

/// A direction coincides with the equal-weight direction, so a bias ratio
/// that divides by 1 - (v,q)^2 is undefined.
class CollinearAnchorError : public Error {
 public:
  using Error::Error;
};

/// Model unit vector is orthogonal to the equal-weight direction, so the
/// minimum-variance weights are undefined.
class OrthogonalToQError : public Error {
 public:
  using Error::Error;
};

/// A summary statistic was requested over zero recorded values.
class EmptySampleError : public Error {
 public:
  using Error::Error;
};

/// Problem with a configuration file or with command-line usage.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Problem with an input data file (missing, malformed, or inconsistent).
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace mapshrink
