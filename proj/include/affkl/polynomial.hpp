#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace affkl {

/// Dense polynomial in q with exact integer coefficients. Coefficient k is
/// the coefficient of q^k; trailing zeros are never stored, so the zero
/// polynomial has no coefficients.
class IntPolynomial {
 public:
  using Coefficient = std::int64_t;

  IntPolynomial() = default;
  IntPolynomial(std::initializer_list<Coefficient> coeffs) : coeffs_(coeffs) { normalize(); }
  explicit IntPolynomial(std::vector<Coefficient> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

  static IntPolynomial zero() { return {}; }
  static IntPolynomial one() { return {1}; }

  /// c q^k.
  static IntPolynomial monomial(Coefficient c, int k) {
    std::vector<Coefficient> v(static_cast<std::size_t>(k) + 1, 0);
    v.back() = c;
    return IntPolynomial(std::move(v));
  }

  bool is_zero() const noexcept { return coeffs_.empty(); }

  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }

  Coefficient coefficient(int k) const noexcept {
    if (k < 0 || k >= static_cast<int>(coeffs_.size())) return 0;
    return coeffs_[static_cast<std::size_t>(k)];
  }

  const std::vector<Coefficient>& coefficients() const noexcept { return coeffs_; }

  bool has_nonnegative_coefficients() const noexcept {
    for (Coefficient c : coeffs_)
      if (c < 0) return false;
    return true;
  }

  /// this * q^k, k >= 0.
  IntPolynomial shifted(int k) const {
    if (is_zero()) return {};
    std::vector<Coefficient> v(static_cast<std::size_t>(k), 0);
    v.insert(v.end(), coeffs_.begin(), coeffs_.end());
    return IntPolynomial(std::move(v));
  }

  IntPolynomial& operator+=(const IntPolynomial& other) {
    if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0);
    for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
    normalize();
    return *this;
  }

  IntPolynomial& operator-=(const IntPolynomial& other) {
    if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0);
    for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
    normalize();
    return *this;
  }

  IntPolynomial& operator*=(Coefficient c) {
    for (Coefficient& x : coeffs_) x *= c;
    normalize();
    return *this;
  }

  friend IntPolynomial operator+(IntPolynomial a, const IntPolynomial& b) { return a += b; }
  friend IntPolynomial operator-(IntPolynomial a, const IntPolynomial& b) { return a -= b; }
  friend IntPolynomial operator*(IntPolynomial a, Coefficient c) { return a *= c; }
  friend IntPolynomial operator*(Coefficient c, IntPolynomial a) { return a *= c; }

  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Coefficient> v(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return IntPolynomial(std::move(v));
  }

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

  /// e.g. "1 + q + 2q^3"; "0" for zero.
  std::string to_string() const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      Coefficient c = coeffs_[k];
      if (c == 0) continue;
      if (!out.empty()) {
        out += c < 0 ? " - " : " + ";
        c = c < 0 ? -c : c;
      } else if (c < 0) {
        out += "-";
        c = -c;
      }
      if (k == 0 || c != 1) out += std::to_string(c);
      if (k >= 1) out += "q";
      if (k >= 2) out += "^" + std::to_string(k);
    }
    return out;
  }

 private:
  void normalize() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  std::vector<Coefficient> coeffs_;
};

}  // namespace affkl
