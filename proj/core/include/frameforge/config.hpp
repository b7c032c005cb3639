#pragma once

#include <cstddef>
#include <cstdint>

namespace frameforge {

/// Numerical tolerances shared by every module.
struct Tolerances {
  double hermitian = 1e-14;      // |a_ij - conj(a_ji)|, absolute
  double parseval = 1e-10;       // ||sum v v* - I||
  double equal_norm = 1e-10;     // relative spread of row norms
  double singular_gap = 1e-12;   // minimum distance of a shift from the spectrum
  double spectral_bound = 1e-9;  // slack on sparsifier eigenvalue bounds
  int max_jacobi_sweeps = 100;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

/// Randomized weight quantizer settings.
struct QuantizerConfig {
  std::size_t trials = 8;
  std::uint64_t seed = 1;
  /// Geometric step of the `a` search grid.
  double grid_ratio = 1.189207115002721;  // 2^(1/4)
};

}  // namespace frameforge
