#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hubmix/arc_model.hpp"
#include "hubmix/spectrum.hpp"
#include "hubmix/types.hpp"

namespace hubmix {

// The eigenvalue condition sum_i z^(-L_i) = k cleared of denominators:
// p(z) = sum_i z^(M - L_i) - k z^M with M = max_i L_i. Integer
// coefficients; the coefficients sum to zero, so p(1) = 0 always, and
// p'(1) = -n makes 1 a simple root.
struct HubPolynomial {
  std::vector<i64> coefficients;                 // c_0 .. c_M
  std::vector<std::pair<i64, i64>> terms;        // (exponent M - L_i, count)

  i64 degree() const { return static_cast<i64>(coefficients.size()) - 1; }
};

// sum_i z^(-L_i), inverse powers by binary exponentiation. z = 0 is a pole.
Complex eval_hub_sum(const ArcSystem& arcs, Complex z);

HubPolynomial char_polynomial(const ArcSystem& arcs);

struct RootFinderOptions {
  int max_iterations = 200;
  double correction_tol = 1e-13;  // max Newton correction at convergence
  double residual_tol = 1e-10;    // accepted relative residual per root
  double cluster_tol = 1e-8;      // merge radius for multiplicities
  double start_radius = 0.9;      // roots of interest lie in the unit disk
};

// Carries the last iterate so callers can fall back to the dense solver.
class RootFinderError : public std::runtime_error {
 public:
  RootFinderError(const std::string& what, std::vector<Complex> estimates)
      : std::runtime_error(what), estimates_(std::move(estimates)) {}
  const std::vector<Complex>& estimates() const { return estimates_; }

 private:
  std::vector<Complex> estimates_;
};

// All roots of a real-coefficient polynomial (coefficients low to high) by
// the Aberth-Ehrlich simultaneous iteration, evaluated with compensated
// Horner sums. Throws RootFinderError when the iteration fails to settle.
std::vector<Complex> polynomial_roots(std::span<const double> coeffs,
                                      const RootFinderOptions& opts = {});

struct RootSet {
  std::vector<EigenvalueCluster> clusters;
  double max_residual = 0.0;
};

// The M nonzero eigenvalues of the pure drift chain: the exact root at 1 is
// deflated by integer synthetic division, the remaining M-1 roots come from
// the simultaneous iteration, every root is residual-checked, and close
// roots merge into multiplicity clusters.
RootSet solve_hub_roots(const ArcSystem& arcs, const RootFinderOptions& opts = {});

std::vector<EigenvalueCluster> nonzero_eigenvalues(const ArcSystem& arcs,
                                                   const RootFinderOptions& opts = {});

// Nonzero eigenvalues plus 0 with multiplicity n - M.
Spectrum full_spectrum(const ArcSystem& arcs, const RootFinderOptions& opts = {});

}  // namespace hubmix
