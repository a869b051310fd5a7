#pragma once

// Small-dimension dense complex linear algebra shared by every protocol:
// modular index arithmetic, tensor products, partial traces, subsystem
// permutations and (simultaneous) diagonalization of unitaries.
//
// Matrices are Eigen dense complex matrices. Equality of matrices is always
// measured with the max-abs-entry metric.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "locc/error.hpp"

namespace locc {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using StateVector = CVector;

inline constexpr double kPi = 3.14159265358979323846;

struct Tolerance {
  double eps = 1e-9;

  // Throws PreconditionViolation unless 0 < eps < 1e-3.
  static Tolerance checked(double eps);
};

/// Dense unitary with its unitarity verified at construction.
class Unitary {
 public:
  explicit Unitary(CMatrix mat, Tolerance tol = {});

  static Unitary identity(int dim);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const CMatrix& matrix() const { return mat_; }
  Unitary adjoint() const;

  friend Unitary operator*(const Unitary& a, const Unitary& b);

 private:
  struct Unchecked {};
  Unitary(CMatrix mat, Unchecked) : mat_(std::move(mat)) {}

  CMatrix mat_;
};

struct Spectrum {
  CVector eigenvalues;
  CMatrix eigenvectors;  // columns, unitary
};

/// Result of a simultaneous diagonalization: basis^dagger * U_j * basis is
/// diagonal with entries diagonals[j].
struct CommonEigenbasis {
  CMatrix basis;
  std::vector<CVector> diagonals;
};

/// Non-negative remainder of k modulo d.
inline int mod(long long k, int d) {
  long long r = k % d;
  return static_cast<int>(r < 0 ? r + d : r);
}

/// exp(2 pi i k / D).
Complex omega(int dim, long long k);

double max_abs(const CMatrix& m);
double max_abs_diff(const CMatrix& a, const CMatrix& b);

bool is_unitary(const CMatrix& m, double eps);
bool is_hermitian(const CMatrix& m, double eps);

CMatrix kron(const CMatrix& a, const CMatrix& b);
CVector kron(const CVector& a, const CVector& b);

/// Reduced matrix on the subsystems listed in `keep` (0-based, any order;
/// the result keeps the original relative order of the kept factors).
CMatrix partial_trace(const CMatrix& rho, std::span<const int> dims, std::span<const int> keep);

/// Reorders tensor factors: factor t of the output is factor perm[t] of the
/// input.
CVector permute_subsystems(const CVector& v, std::span<const int> dims, std::span<const int> perm);
CMatrix permute_subsystems(const CMatrix& m, std::span<const int> dims, std::span<const int> perm);

/// Eigendecomposition of a unitary through its complex Schur form. Throws
/// PreconditionViolation when the input is not unitary within tol.
Spectrum eig_unitary(const CMatrix& u, Tolerance tol = {});
inline Spectrum eig_unitary(const Unitary& u, Tolerance tol = {}) { return eig_unitary(u.matrix(), tol); }

/// Common eigenbasis of pairwise commuting unitaries. Degenerate eigenvalue
/// clusters (threshold 1e-7) are refined block by block with the next
/// operator. Throws NotSimultaneouslyDiagonalizable naming the first pair
/// whose commutator exceeds eps.
CommonEigenbasis simultaneous_diagonalize(std::span<const CMatrix> us, Tolerance tol = {});

/// Angle of z mapped into [0, 2 pi).
double phase_angle(Complex z);

/// Distance between two angles on the circle.
double angle_distance(double a, double b);

}  // namespace locc
