#pragma once

#include <cstddef>
#include <initializer_list>
#include <map>
#include <utility>

namespace lethargy {

/// Coordinate index; coordinates start at 1.
using Index = std::size_t;

/// Finitely supported real sequence. Zero coefficients are never stored.
class Vector {
 public:
  using Storage = std::map<Index, double>;
  using const_iterator = Storage::const_iterator;

  Vector() = default;
  Vector(std::initializer_list<std::pair<const Index, double>> entries);

  static Vector unit(Index i, double coefficient = 1.0);

  double operator[](Index i) const;
  void set(Index i, double value);

  std::size_t support_size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  /// Largest index in the support, 0 for the zero vector.
  Index max_index() const noexcept;

  const_iterator begin() const noexcept { return entries_.begin(); }
  const_iterator end() const noexcept { return entries_.end(); }

  /// Coordinates j <= cut kept; the rest zeroed.
  Vector head(Index cut) const;
  /// Coordinates j <= cut zeroed.
  Vector tail(Index cut) const;

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(double t);

  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator*(double t, Vector a) { return a *= t; }
  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  Storage entries_;
};

}  // namespace lethargy
