#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hubmix/chain_matrix.hpp"
#include "hubmix/spectrum.hpp"
#include "hubmix/types.hpp"

namespace hubmix {

class EigenSolverError : public std::runtime_error {
 public:
  EigenSolverError(const std::string& what, i64 stuck_index)
      : std::runtime_error(what), stuck_index_(stuck_index) {}
  i64 stuck_index() const { return stuck_index_; }

 private:
  i64 stuck_index_ = -1;
};

struct DenseOptions {
  // Peel exact kernel levels (orthogonal staircase deflation) before the QR
  // pass. A defective zero eigenvalue otherwise splits like eps^(1/j) for a
  // Jordan block of size j, which lands far outside any useful pairing
  // tolerance; with the staircase the zeros are reported exactly. Costs an
  // extra O(n^3) rank factorization, so it stays off in the sweep paths.
  bool deflate_exact_kernel = false;
  double kernel_tol = 1e-12;    // relative rank threshold
  double symmetry_tol = 1e-14;  // entrywise test for the symmetric fast path
};

// All n eigenvalues of the matrix. Symmetric inputs (entrywise within
// symmetry_tol) take tridiagonalization plus implicit-shift iteration and
// come back real; everything else goes through balancing, Householder
// Hessenberg reduction and double-shift QR. n is capped at 4000.
std::vector<Complex> dense_eigenvalues(const TransitionMatrix& p,
                                       const DenseOptions& opts = {});

// Mixing rate from the dense spectrum. The eigenvalue excluded as the
// stationary one must lie within 1e-8 of 1.
double mixing_rate_general(const TransitionMatrix& p);

namespace dense_detail {

// Row-major n x n buffers throughout. Exposed for tests on general matrices.

bool is_symmetric(const std::vector<double>& a, i64 n, double tol);

struct BalanceRange {
  i64 lo = 0;
  i64 hi = 0;  // inclusive; rows outside [lo, hi] hold isolated eigenvalues
};

BalanceRange balance_in_place(std::vector<double>& a, i64 n);

void hessenberg_in_place(std::vector<double>& a, i64 n, i64 lo, i64 hi);

// Francis double-shift QR on a Hessenberg matrix; appends all n eigenvalues.
std::vector<Complex> hessenberg_qr_eigenvalues(std::vector<double>& a, i64 n,
                                               i64 lo, i64 hi);

// Symmetric path: blocked Householder tridiagonalization + implicit-shift QL.
std::vector<double> symmetric_eigenvalues(std::vector<double> a, i64 n);

// Full pipeline on a raw buffer (consumed).
std::vector<Complex> general_eigenvalues(std::vector<double> a, i64 n,
                                         const DenseOptions& opts = {});

// Orthogonal staircase deflation: repeatedly splits off the numerical kernel
// via column-pivoted QR until the core is nonsingular. Returns the number of
// exact-zero eigenvalues peeled; `a` shrinks to the (n - zeros)^2 core.
i64 deflate_kernel_staircase(std::vector<double>& a, i64& n, double rel_tol);

}  // namespace dense_detail

}  // namespace hubmix
