#pragma once

#include <cmath>
#include <ostream>

namespace minfinity {

/**
 * Forward-mode dual number x + x' e with e^2 = 0.
 *
 * Only the primitives the shipped fields and the augmented loss need are
 * lifted. Each one carries its exact derivative in the tangent slot, so a
 * single pass with a unit tangent yields one exact directional derivative.
 */
template <typename T>
class Dual {
 public:
  constexpr Dual() = default;
  constexpr Dual(T primal) : primal_(primal) {}  // NOLINT: constants promote implicitly
  constexpr Dual(T primal, T tangent) : primal_(primal), tangent_(tangent) {}

  static constexpr Dual variable(T x) { return Dual(x, T(1)); }

  constexpr T primal() const { return primal_; }
  constexpr T tangent() const { return tangent_; }

  constexpr Dual operator-() const { return Dual(-primal_, -tangent_); }
  constexpr Dual operator+() const { return *this; }

  constexpr Dual& operator+=(const Dual& o) {
    primal_ += o.primal_;
    tangent_ += o.tangent_;
    return *this;
  }
  constexpr Dual& operator-=(const Dual& o) {
    primal_ -= o.primal_;
    tangent_ -= o.tangent_;
    return *this;
  }
  constexpr Dual& operator*=(const Dual& o) {
    tangent_ = primal_ * o.tangent_ + tangent_ * o.primal_;
    primal_ *= o.primal_;
    return *this;
  }
  constexpr Dual& operator/=(const Dual& o) {
    tangent_ = (tangent_ * o.primal_ - primal_ * o.tangent_) / (o.primal_ * o.primal_);
    primal_ /= o.primal_;
    return *this;
  }

  friend constexpr Dual operator+(Dual x, const Dual& y) { return x += y; }
  friend constexpr Dual operator-(Dual x, const Dual& y) { return x -= y; }
  friend constexpr Dual operator*(Dual x, const Dual& y) { return x *= y; }
  friend constexpr Dual operator/(Dual x, const Dual& y) { return x /= y; }

  friend constexpr bool operator==(const Dual& x, const Dual& y) { return x.primal_ == y.primal_; }
  friend constexpr auto operator<=>(const Dual& x, const Dual& y) { return x.primal_ <=> y.primal_; }

  friend Dual exp(const Dual& x) {
    const T e = std::exp(x.primal_);
    return Dual(e, e * x.tangent_);
  }
  friend Dual expm1(const Dual& x) {
    return Dual(std::expm1(x.primal_), std::exp(x.primal_) * x.tangent_);
  }
  friend Dual log(const Dual& x) { return Dual(std::log(x.primal_), x.tangent_ / x.primal_); }
  friend Dual sin(const Dual& x) {
    return Dual(std::sin(x.primal_), std::cos(x.primal_) * x.tangent_);
  }
  friend Dual cos(const Dual& x) {
    return Dual(std::cos(x.primal_), -std::sin(x.primal_) * x.tangent_);
  }
  friend Dual sqrt(const Dual& x) {
    const T s = std::sqrt(x.primal_);
    return Dual(s, x.tangent_ / (T(2) * s));
  }
  friend Dual pow(const Dual& x, T p) {
    return Dual(std::pow(x.primal_, p), p * std::pow(x.primal_, p - T(1)) * x.tangent_);
  }
  friend Dual abs(const Dual& x) { return x.primal_ < T(0) ? -x : x; }

  friend std::ostream& operator<<(std::ostream& os, const Dual& x) {
    return os << x.primal_ << " + " << x.tangent_ << "e";
  }

 private:
  T primal_{};
  T tangent_{};
};

using DualScalar = Dual<double>;

}  // namespace minfinity
