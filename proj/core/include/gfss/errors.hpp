#pragma once

#include <stdexcept>

namespace gfss {

// The dense symmetric eigensolver did not converge.
struct EigensolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// No cluster satisfies the cut-sparsity constraint, so the exhaustive scan
// has nothing to maximize over.
struct EmptyClassError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An iterative solver failed to meet its residual tolerance; the message
// carries the final residuals and bracket.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gfss
