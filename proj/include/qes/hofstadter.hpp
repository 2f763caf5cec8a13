#pragma once

// The midband Hofstadter problem at rational flux 4 pi S/N: the real
// symmetric tridiagonal H, the non-Hermitian M with H = (M - M*)/i, and the
// flux sweep behind butterfly plots.

#include <iosfwd>
#include <string>
#include <vector>

#include "qes/eigensolver_extended.hpp"
#include "qes/tridiagonal.hpp"

namespace qes::hofstadter {

/// Largest N accepted by the sweep; matches the oracle's dimension limit.
inline constexpr int kMaxFluxDenominator = 63;

struct FluxSpec {
  int N = 1;
  int S = 1;

  /// N odd and positive, S positive and coprime to N.
  bool is_valid() const;
  void validate() const;
  /// exp(2 pi i S/N).
  Complex q() const;
};

/// Zero diagonal, H(n, n+1) = H(n+1, n) = -2 sin(2 pi S (n+1)/N).
TridiagonalOperator build_H(const FluxSpec& f);

/// Zero diagonal, M(n, n+1) = M(n+1, n) = 1 - q^{n+1}. Both closing
/// entries, 1 - q^0 and 1 - q^N, fall outside the N x N block.
TridiagonalOperator build_M_hofstadter(const FluxSpec& f);
/// The same matrix with entries formed in quad precision.
eig::ExtendedTridiagonal build_M_extended(const FluxSpec& f);

/// max |H - (M - M*)/i| over all entries.
double verify_H_identity(const FluxSpec& f);

/// {2 sin(2 pi k/N) : k = 0..N-1}.
std::vector<double> m_spectrum_closed_form(const FluxSpec& f);
/// Eigenvalues of M, refined in quad precision (M is far from normal).
std::vector<Complex> m_spectrum(const FluxSpec& f);

struct ButterflyPoint {
  int S = 1;
  int N = 1;
  double eigenvalue = 0.0;

  int flux_numerator() const { return 2 * S; }
  int flux_denominator() const { return N; }
  double flux_value() const { return 2.0 * S / N; }
};

struct SweepFailure {
  int N = 0;
  int S = 0;
  std::string message;
};

struct ButterflySweep {
  std::vector<ButterflyPoint> points;  // sorted by flux, then eigenvalue
  std::vector<SweepFailure> failures;
};

/// Every odd N <= N_max and every S in 1..N-1 coprime to N (S = 1 for N = 1),
/// with the eigenvalues of build_H from the bisection path. A failing point
/// is recorded and the sweep continues.
ButterflySweep butterfly_sweep(int N_max);

inline constexpr const char* kButterflyHeader = "flux_numerator,flux_denominator,flux_value,eigenvalue";

/// Header line plus one row per point, LF endings, %.17g floats.
void write_butterfly_csv(const std::vector<ButterflyPoint>& points, std::ostream& out);

}  // namespace qes::hofstadter
