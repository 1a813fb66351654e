#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace cdqaoa::dense {

using Complex = std::complex<double>;

/// coeff * X^x Z^z, the X factors standing to the left; site i is bit i.
/// Y_i is represented as i * X_i Z_i.
struct PauliTerm {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  Complex coeff{0.0, 0.0};
};

/// Weighted sum of Pauli strings, kept sorted by (x, z) with like terms merged.
/// Closed under products, so commutators of spin Hamiltonians are exact.
class PauliSum {
 public:
  PauliSum() = default;
  explicit PauliSum(int n_qubits) : n_(n_qubits) {}

  static PauliSum identity(int n_qubits, Complex c = 1.0);
  static PauliSum x(int n_qubits, int site, Complex c = 1.0);
  static PauliSum y(int n_qubits, int site, Complex c = 1.0);
  static PauliSum z(int n_qubits, int site, Complex c = 1.0);

  int n_qubits() const noexcept { return n_; }
  const std::vector<PauliTerm>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  void add_term(std::uint64_t x, std::uint64_t z, Complex c);

  PauliSum& operator+=(const PauliSum& other);
  PauliSum& operator-=(const PauliSum& other);
  PauliSum& operator*=(Complex c);

  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
  friend PauliSum operator*(PauliSum a, Complex c) { return a *= c; }
  friend PauliSum operator*(Complex c, PauliSum a) { return a *= c; }
  friend PauliSum operator*(const PauliSum& a, const PauliSum& b);

  PauliSum adjoint() const;
  /// Drops terms with |coeff| <= tol.
  PauliSum pruned(double tol) const;
  /// Largest |coeff| of (this - other).
  double max_coeff_difference(const PauliSum& other) const;
  /// Sum of |coeff|, an upper bound on the operator norm.
  double coeff_norm() const;

  /// 2^n x 2^n matrix in the computational (Z) basis; n <= 12.
  Eigen::MatrixXcd to_dense() const;

 private:
  void canonicalize();

  int n_ = 0;
  std::vector<PauliTerm> terms_;
};

PauliSum commutator(const PauliSum& a, const PauliSum& b);

}  // namespace cdqaoa::dense
