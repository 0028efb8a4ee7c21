#pragma once

#include <cstdint>
#include <vector>

#include "soilab/kernels.hpp"

namespace soilab {

/// Real symmetric tridiagonal matrix: diag has n entries, off has n - 1.
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const { return diag.size(); }
};

/// Eigenvalues strictly below `upper`, ascending, by Sturm-count multisection
/// (four shifts per sweep through the kernel layer).
std::vector<double> eigenvalues_below(const SymTridiagonal& t, double upper,
                                      const kernels::KernelTable& table = kernels::active());

/// Number of eigenvalues strictly below x.
std::int64_t count_below(const SymTridiagonal& t, double x, const kernels::KernelTable& table = kernels::active());

/// Unit eigenvector for a (simple) eigenvalue by inverse iteration with a
/// partially pivoted tridiagonal LU. Sign fixed so the first significant
/// component is positive. Throws NumericalFailure if the residual stays large.
std::vector<double> eigenvector(const SymTridiagonal& t, double lambda);

}  // namespace soilab
