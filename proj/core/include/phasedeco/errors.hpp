#pragma once

#include <stdexcept>
#include <string>

namespace phasedeco {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotHermitianError : public Error {
 public:
  NotHermitianError(const std::string& what, int row, int col, double deviation)
      : Error(what), row_(row), col_(col), deviation_(deviation) {}
  int row() const { return row_; }
  int col() const { return col_; }
  double deviation() const { return deviation_; }

 private:
  int row_;
  int col_;
  double deviation_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  /// Off-diagonal Frobenius norm left when the sweep cap was hit.
  double residual() const { return residual_; }

 private:
  double residual_;
};

class NotPositiveSemidefiniteError : public Error {
 public:
  NotPositiveSemidefiniteError(const std::string& what, double eigenvalue)
      : Error(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const { return eigenvalue_; }

 private:
  double eigenvalue_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class StateValidationError : public Error {
 public:
  using Error::Error;
};

/// The state has weight outside the subspace an extraction projects onto.
class SubspaceLeakError : public Error {
 public:
  SubspaceLeakError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double time, double trace_drift)
      : Error(what), time_(time), trace_drift_(trace_drift) {}
  double time() const { return time_; }
  double trace_drift() const { return trace_drift_; }

 private:
  double time_;
  double trace_drift_;
};

class NoStationaryStateError : public Error {
 public:
  using Error::Error;
};

}  // namespace phasedeco
