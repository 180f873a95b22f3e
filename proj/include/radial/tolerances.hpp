#pragma once

#include <cstddef>

namespace radial {

/// Central record of every numerical threshold used by the library.
///
/// Relative thresholds are multiplied by (1 + ||A||) or by the quantity
/// named next to them. The CLI can override any field from a JSON file.
struct Tolerances {
  // Hermitian eigensolver (cyclic Jacobi).
  double jacobi_offdiag = 1e-13;    // off(H)_F <= jacobi_offdiag * ||H||_F
  int jacobi_max_sweeps = 30;

  // Complex Schur (Hessenberg + shifted QR).
  double schur_deflation = 1e-13;   // |h(k+1,k)| <= schur_deflation * (|h(k,k)| + |h(k+1,k+1)|)
  int schur_iterations_per_row = 40;

  // Numerical radius / range sampling.
  std::size_t radius_grid = 720;
  double radius_angle_width = 1e-12;
  std::size_t radius_refine_candidates = 4;
  double range_membership = 1e-8;

  // Product containment (scalar multiple of PSD).
  std::size_t containment_grid = 2000;
  double containment_floor = 1e-12;  // times the largest eigenvalue of P
  double normality = 1e-10;          // ||A*A - AA*|| <= normality * ||A||^2
  double collinearity = 1e-8;        // times ||A||

  // Gate.
  double cluster = 1e-7;             // times (1 + ||A||)
  double gate = 1e-8;                // ||A/mu - I/2|| <= 1/2 + gate
  double boundary_flag = 1e-6;
  double split = 1e-6;               // times (1 + ||A||)
  double reassembly = 1e-8;          // times (1 + ||A||)
  double inverse_real_part = 1e-6;   // lambda_min(Re(C^-1)) >= 1 - inverse_real_part
  double equivalence_band = 2e-6;

  // Generators.
  double generator_reject = 1e-3;    // resample K if dist(1, sigma(K)) < generator_reject

  // Witness verification.
  double witness_ratio = 1e-8;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

}  // namespace radial
