#include "lethargy/vector.hpp"

#include "lethargy/errors.hpp"

#include <string>

namespace lethargy {

Vector::Vector(std::initializer_list<std::pair<const Index, double>> entries) {
  for (const auto& [i, v] : entries) set(i, v);
}

Vector Vector::unit(Index i, double coefficient) {
  Vector v;
  v.set(i, coefficient);
  return v;
}

double Vector::operator[](Index i) const {
  const auto it = entries_.find(i);
  return it == entries_.end() ? 0.0 : it->second;
}

void Vector::set(Index i, double value) {
  if (i == 0) throw InvalidSpec("coordinate indices start at 1");
  if (value == 0.0) {
    entries_.erase(i);
  } else {
    entries_[i] = value;
  }
}

Index Vector::max_index() const noexcept { return entries_.empty() ? 0 : entries_.rbegin()->first; }

Vector Vector::head(Index cut) const {
  Vector out;
  out.entries_.insert(entries_.begin(), entries_.upper_bound(cut));
  return out;
}

Vector Vector::tail(Index cut) const {
  Vector out;
  out.entries_.insert(entries_.upper_bound(cut), entries_.end());
  return out;
}

Vector& Vector::operator+=(const Vector& other) {
  for (const auto& [i, v] : other) set(i, (*this)[i] + v);
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  for (const auto& [i, v] : other) set(i, (*this)[i] - v);
  return *this;
}

Vector& Vector::operator*=(double t) {
  if (t == 0.0) {
    entries_.clear();
    return *this;
  }
  for (auto it = entries_.begin(); it != entries_.end();) {
    it->second *= t;
    if (it->second == 0.0) {
      it = entries_.erase(it);  // underflow
    } else {
      ++it;
    }
  }
  return *this;
}

}  // namespace lethargy
