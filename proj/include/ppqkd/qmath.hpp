// Dense complex linear algebra for two- and four-dimensional quantum states:
// tensor products, projector application, Hermitian eigendecomposition and the
// trace norm. Dimensions are fixed to 2 or 4 by construction; everything is a
// plain value type and safe to use from concurrent workers.

#pragma once

#include <complex>
#include <vector>

namespace ppqkd {

using Complex = std::complex<double>;

// Central tolerance table; all tolerance-driven checks in the library and the
// test suites read from here.
namespace tol {
inline constexpr double hermitian = 1e-12;        // conjugate-symmetry slack
inline constexpr double eig_off_diag = 1e-13;     // Jacobi convergence threshold
inline constexpr double probability = 1e-10;      // probability bookkeeping slack
inline constexpr double abl_denominator = 1e-14;  // below this an ABL conditional is undefined
inline constexpr double fidelity_denominator = 1e-12;
inline constexpr double fidelity_range = 1e-9;    // rounding slack before rejecting F outside [0,1]
}  // namespace tol

// Complex amplitude vector of dimension 2 or 4. Components are validated to be
// finite on construction. Vectors are not forced to unit norm: sub-normalized
// states (projected branches, probe states) are first-class values.
class StateVector {
 public:
  explicit StateVector(std::vector<Complex> amps);

  // Computational basis vector |index> of the given dimension.
  static StateVector basis(int dim, int index);
  static StateVector zero(int dim);

  int dim() const { return static_cast<int>(amps_.size()); }
  const Complex& operator[](int k) const { return amps_[k]; }

  double norm_sq() const;
  double norm() const;
  bool is_normalized(double eps = tol::hermitian) const;
  StateVector normalized() const;  // throws on (numerically) zero vectors

 private:
  std::vector<Complex> amps_;
};

StateVector operator+(const StateVector& u, const StateVector& v);
StateVector operator-(const StateVector& u, const StateVector& v);
StateVector operator*(const Complex& c, const StateVector& v);

// <u|v>, conjugate-linear in the first argument. Dimensions must match.
Complex inner_product(const StateVector& u, const StateVector& v);

// Tensor product of two qubit states. Component (j,k) of the result sits at
// index 2j+k: the first factor is the left-hand subsystem. This ordering is
// the single flattening convention used across the whole toolkit.
StateVector tensor_product(const StateVector& v, const StateVector& w);

// Square complex matrix of dimension 2 or 4, row-major.
class ComplexMatrix {
 public:
  explicit ComplexMatrix(int dim);  // zero-filled
  static ComplexMatrix identity(int dim);
  static ComplexMatrix from_rows(std::vector<std::vector<Complex>> rows);

  int dim() const { return dim_; }
  const Complex& at(int r, int c) const { return entries_[r * dim_ + c]; }
  void set(int r, int c, const Complex& value);

  Complex trace() const;
  ComplexMatrix dagger() const;
  bool is_hermitian(double eps = tol::hermitian) const;

 private:
  int dim_;
  std::vector<Complex> entries_;
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const Complex& c, const ComplexMatrix& a);

// Standard matrix-vector product. Dimensions must match.
StateVector apply(const ComplexMatrix& m, const StateVector& v);

// |v><v|
ComplexMatrix outer_product(const StateVector& v);

// Kronecker product of two 2x2 matrices under the 2j+k index convention.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

// Square complex matrix with the conjugate-symmetry invariant enforced on
// construction (within tol::hermitian).
class HermitianOperator {
 public:
  explicit HermitianOperator(ComplexMatrix m);
  const ComplexMatrix& matrix() const { return matrix_; }
  int dim() const { return matrix_.dim(); }

 private:
  ComplexMatrix matrix_;
};

struct HermitianEigen {
  std::vector<double> values;        // descending
  std::vector<StateVector> vectors;  // unit norm, values[k] <-> vectors[k]
};

// Eigendecomposition of a complex Hermitian matrix via cyclic Jacobi rotations
// on the real-symmetric embedding [[Re H, -Im H], [Im H, Re H]]; the doubled
// spectrum is deduplicated after sorting. Converges when the largest
// off-diagonal magnitude drops below tol::eig_off_diag (hard cap 100 sweeps).
// Under degeneracy the returned vectors are valid eigenvectors but not
// guaranteed mutually orthogonal.
HermitianEigen hermitian_eigensystem(const HermitianOperator& h);

// Eigenvalues only, descending.
std::vector<double> hermitian_eigenvalues(const HermitianOperator& h);

// Trace norm of a Hermitian matrix: the sum of absolute eigenvalues. The
// general singular-value path is out of scope; non-Hermitian input is
// rejected.
double trace_norm(const ComplexMatrix& m);

}  // namespace ppqkd
