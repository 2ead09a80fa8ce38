#pragma once

// Holonomic qubit on the Kerr ground space: the coherent-squeezed operator
// O(alpha, beta) = V(beta) U(alpha), the isospectral family O H0 O^dag, the
// connection A = O^dag dO restricted to span{|0>, |1>}, its curvature, and
// path-ordered products of exp(A du) around closed loops.
//
// Coordinates are indexed 0..3 as (Re alpha, Im alpha, Re beta, Im beta).

#include <array>
#include <vector>

#include "fockgeom/fock_core.hpp"
#include "fockgeom/su11.hpp"

namespace fockgeom {

/// Dense V(beta) U(alpha). Columns 0 and 1 are tail-checked.
CMatrix cs_operator(Complex alpha, Complex beta, const OperatorSet& ops,
                    const TailGuard& guard = {});

/// hbar omega N(N - 1): diagonal, kernel span{|0>, |1>}.
CMatrix kerr_hamiltonian(const OperatorSet& ops);

/// O H0 O^dag.
CMatrix hamiltonian_family(Complex alpha, Complex beta, const OperatorSet& ops,
                           const TailGuard& guard = {});

/// Columns O|0>, O|1> of the coherent-squeezed operator (the qubit frame).
Eigen::MatrixX2cd qubit_frame(Complex alpha, Complex beta, const OperatorSet& ops,
                              const TailGuard& guard = {});

struct ConnectionSample {
  std::array<Matrix2c, 4> components;

  /// max_u ||A_u + A_u^dag||.
  double anti_hermitian_defect() const;
  /// sum_u A_u du_u.
  Matrix2c contract(const std::array<double, 4>& du) const;
};

inline constexpr double kDefaultConnectionStep = 1e-5;
inline constexpr double kDefaultCurvatureStep = 1e-4;

/// A_u = frame^dag d(frame)/du by central differences. Step in [1e-6, 1e-3].
ConnectionSample connection_at(Complex alpha, Complex beta, double step, const OperatorSet& ops,
                               const TailGuard& guard = {});

/// F_uv on the six coordinate planes (01, 02, 03, 12, 13, 23).
struct CurvatureSample {
  std::array<Matrix2c, 6> planes;

  /// F_uv for any u != v; F_vu = -F_uv. Zero when u == v.
  Matrix2c component(int u, int v) const;
};

/// F_uv = d_u A_v - d_v A_u + [A_u, A_v] with A from connection_at and the
/// outer derivatives by central differences of width `step`.
CurvatureSample curvature_at(Complex alpha, Complex beta, double step, const OperatorSet& ops,
                             const TailGuard& guard = {});

struct LoopPoint {
  Complex alpha;
  Complex beta;
};

/// Sampled path in (alpha, beta). At least three samples; every coordinate
/// changes by at most 0.1 between neighbours; a closed path returns to its
/// first sample.
class LoopPath {
public:
  static constexpr double kMaxStep = 0.1;
  static constexpr double kClosureTolerance = 1e-12;

  LoopPath(std::vector<LoopPoint> samples, bool closed);

  /// Counter-clockwise circle of the given radius in the plane of
  /// coordinates (u, v) around `center`, with `steps` segments.
  static LoopPath circle(const LoopPoint& center, int u, int v, double radius, int steps);

  const std::vector<LoopPoint>& samples() const { return samples_; }
  bool closed() const { return closed_; }
  int segments() const { return static_cast<int>(samples_.size()) - 1; }

  /// Same samples in the opposite order.
  LoopPath reversed() const;
  /// This path followed by `next` (which must start where this one ends).
  LoopPath then(const LoopPath& next) const;

private:
  std::vector<LoopPoint> samples_;
  bool closed_;
};

struct HolonomyResult {
  Matrix2c gate;
  double unitarity_defect = 0.0;
  int steps = 0;
};

/// Ordered product of exp(A(midpoint) du) over the segments, the earliest
/// segment leftmost, so that a small loop of oriented area S in the (u, v)
/// plane gives I + F_uv S + O(S^{3/2}). Throws on an open path.
HolonomyResult holonomy(const LoopPath& path, const OperatorSet& ops, const TailGuard& guard = {},
                        double step = kDefaultConnectionStep);

} // namespace fockgeom
