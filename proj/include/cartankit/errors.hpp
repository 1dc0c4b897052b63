#pragma once

#include <stdexcept>
#include <string>

namespace cartankit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NotNormal : public Error {
 public:
  using Error::Error;
};

class NotSkewHermitian : public Error {
 public:
  using Error::Error;
};

/// A unitary had an eigenvalue too close to -1 for the principal branch.
class BranchCut : public Error {
 public:
  BranchCut(const std::string& what, double eigenphase)
      : Error(what), eigenphase_(eigenphase) {}
  double eigenphase() const noexcept { return eigenphase_; }

 private:
  double eigenphase_;
};

/// The symmetry squares to something other than a phase times the identity.
class NotCartan : public Error {
 public:
  using Error::Error;
};

class NotInvolutive : public Error {
 public:
  using Error::Error;
};

/// A factor's generator landed outside the eigenspace it must belong to.
class MembershipFailure : public Error {
 public:
  using Error::Error;
};

class RealizationFailure : public Error {
 public:
  using Error::Error;
};

class UnclassifiableInvolution : public Error {
 public:
  using Error::Error;
};

}  // namespace cartankit
