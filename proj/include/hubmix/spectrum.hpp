#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hubmix/types.hpp"

namespace hubmix {

struct EigenvalueCluster {
  Complex value;
  i64 multiplicity = 1;
};

enum class SpectrumMethod { structured, dense };

struct Spectrum {
  std::vector<EigenvalueCluster> eigenvalues;
  i64 node_count = 0;  // sum of multiplicities
  SpectrumMethod method = SpectrumMethod::structured;
  double max_residual = 0.0;
};

class SpectrumError : public std::runtime_error {
 public:
  explicit SpectrumError(const std::string& what) : std::runtime_error(what) {}
};

// Greedy merge of values within `tol` of a cluster representative; cluster
// value is the mean of its members.
std::vector<EigenvalueCluster> cluster_values(std::span<const Complex> values,
                                              double tol = 1e-8);

// min over mu != 1 of 1 - |mu|, clamped to [0, 1]. Exactly one eigenvalue is
// excluded as the stationary one; it must lie within 1e-8 of 1 or a
// SpectrumError is thrown. A multiplicity >= 2 cluster at 1 therefore
// yields a rate of (numerically) zero.
double mixing_rate(const Spectrum& spectrum);

// Same exclusion rule applied to a flat eigenvalue list.
double mixing_rate_from_values(std::span<const Complex> values);

}  // namespace hubmix
