#pragma once

#include "ieig/types.hpp"

namespace ieig {

/// "Apply to a vector" contract shared by system operators and preconditioners.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual Index size() const = 0;
  /// y = Op(x). y is resized as needed and must not alias x.
  virtual void apply(const Vector& x, Vector& y) const = 0;

  Vector operator()(const Vector& x) const {
    Vector y;
    apply(x, y);
    return y;
  }
};

class IdentityOperator final : public LinearOperator {
 public:
  explicit IdentityOperator(Index n) : n_(n) {}
  Index size() const override { return n_; }
  void apply(const Vector& x, Vector& y) const override { y = x; }

 private:
  Index n_;
};

}  // namespace ieig
