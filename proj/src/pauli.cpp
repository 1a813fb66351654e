#include "cdqaoa/pauli.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace cdqaoa::dense {
namespace {

constexpr double kMergeTolerance = 0.0;

bool term_less(const PauliTerm& a, const PauliTerm& b) {
  return a.x != b.x ? a.x < b.x : a.z < b.z;
}

void check_same_size(const PauliSum& a, const PauliSum& b) {
  if (a.n_qubits() != b.n_qubits()) throw std::invalid_argument("Pauli sums on different registers");
}

}  // namespace

PauliSum PauliSum::identity(int n_qubits, Complex c) {
  PauliSum s(n_qubits);
  s.add_term(0, 0, c);
  return s;
}

PauliSum PauliSum::x(int n_qubits, int site, Complex c) {
  PauliSum s(n_qubits);
  s.add_term(std::uint64_t{1} << site, 0, c);
  return s;
}

PauliSum PauliSum::y(int n_qubits, int site, Complex c) {
  PauliSum s(n_qubits);
  const std::uint64_t bit = std::uint64_t{1} << site;
  s.add_term(bit, bit, Complex(0.0, 1.0) * c);
  return s;
}

PauliSum PauliSum::z(int n_qubits, int site, Complex c) {
  PauliSum s(n_qubits);
  s.add_term(0, std::uint64_t{1} << site, c);
  return s;
}

void PauliSum::add_term(std::uint64_t x, std::uint64_t z, Complex c) {
  terms_.push_back({x, z, c});
  canonicalize();
}

void PauliSum::canonicalize() {
  std::sort(terms_.begin(), terms_.end(), term_less);
  std::vector<PauliTerm> merged;
  merged.reserve(terms_.size());
  for (const PauliTerm& t : terms_) {
    if (!merged.empty() && merged.back().x == t.x && merged.back().z == t.z) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const PauliTerm& t) { return std::abs(t.coeff) <= kMergeTolerance; });
  terms_ = std::move(merged);
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  check_same_size(*this, other);
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  canonicalize();
  return *this;
}

PauliSum& PauliSum::operator-=(const PauliSum& other) {
  check_same_size(*this, other);
  for (PauliTerm t : other.terms_) {
    t.coeff = -t.coeff;
    terms_.push_back(t);
  }
  canonicalize();
  return *this;
}

PauliSum& PauliSum::operator*=(Complex c) {
  for (PauliTerm& t : terms_) t.coeff *= c;
  canonicalize();
  return *this;
}

PauliSum operator*(const PauliSum& a, const PauliSum& b) {
  check_same_size(a, b);
  PauliSum out(a.n_qubits());
  out.terms_.reserve(a.terms_.size() * b.terms_.size());
  for (const PauliTerm& s : a.terms_) {
    for (const PauliTerm& t : b.terms_) {
      // X^a Z^b X^c Z^d = (-1)^{|b & c|} X^{a^c} Z^{b^d}
      const double sign = (std::popcount(s.z & t.x) & 1) ? -1.0 : 1.0;
      out.terms_.push_back({s.x ^ t.x, s.z ^ t.z, sign * s.coeff * t.coeff});
    }
  }
  out.canonicalize();
  return out;
}

PauliSum PauliSum::adjoint() const {
  PauliSum out(n_);
  out.terms_ = terms_;
  for (PauliTerm& t : out.terms_) {
    // (X^x Z^z)^dag = Z^z X^x = (-1)^{|x & z|} X^x Z^z
    const double sign = (std::popcount(t.x & t.z) & 1) ? -1.0 : 1.0;
    t.coeff = sign * std::conj(t.coeff);
  }
  out.canonicalize();
  return out;
}

PauliSum PauliSum::pruned(double tol) const {
  PauliSum out(n_);
  for (const PauliTerm& t : terms_) {
    if (std::abs(t.coeff) > tol) out.terms_.push_back(t);
  }
  return out;
}

double PauliSum::max_coeff_difference(const PauliSum& other) const {
  const PauliSum d = *this - other;
  double m = 0.0;
  for (const PauliTerm& t : d.terms_) m = std::max(m, std::abs(t.coeff));
  return m;
}

double PauliSum::coeff_norm() const {
  double s = 0.0;
  for (const PauliTerm& t : terms_) s += std::abs(t.coeff);
  return s;
}

Eigen::MatrixXcd PauliSum::to_dense() const {
  if (n_ > 12) throw std::invalid_argument("dense matrix limited to 12 qubits");
  const std::uint64_t dim = std::uint64_t{1} << n_;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const PauliTerm& t : terms_) {
    for (std::uint64_t b = 0; b < dim; ++b) {
      const double sign = (std::popcount(t.z & b) & 1) ? -1.0 : 1.0;
      m(static_cast<Eigen::Index>(b ^ t.x), static_cast<Eigen::Index>(b)) += sign * t.coeff;
    }
  }
  return m;
}

PauliSum commutator(const PauliSum& a, const PauliSum& b) { return a * b - b * a; }

}  // namespace cdqaoa::dense
