#pragma once
// Finite linear combinations with CoeffScalar coefficients.

#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <utility>

#include "sdh/ffmod.hpp"

namespace sdh {

template <class Key>
struct LinComb {
  std::map<Key, CoeffScalar> terms;

  LinComb() = default;
  LinComb(const Key& k, const CoeffScalar& c) { add(k, c); }

  void add(const Key& k, const CoeffScalar& c) {
    if (c.is_zero()) return;
    auto it = terms.find(k);
    if (it == terms.end()) {
      terms.emplace(k, c);
      return;
    }
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }

  LinComb& operator+=(const LinComb& o) {
    for (const auto& [k, c] : o.terms) add(k, c);
    return *this;
  }
  LinComb& operator-=(const LinComb& o) {
    for (const auto& [k, c] : o.terms) add(k, -c);
    return *this;
  }
  LinComb& operator*=(const CoeffScalar& s) {
    if (s.is_zero()) {
      terms.clear();
      return *this;
    }
    for (auto& [k, c] : terms) c *= s;
    return *this;
  }

  friend LinComb operator+(LinComb a, const LinComb& b) { return a += b; }
  friend LinComb operator-(LinComb a, const LinComb& b) { return a -= b; }
  friend LinComb operator*(const CoeffScalar& s, LinComb a) { return a *= s; }
  friend LinComb operator*(LinComb a, const CoeffScalar& s) { return a *= s; }
  friend bool operator==(const LinComb& a, const LinComb& b) { return a.terms == b.terms; }
  friend bool operator!=(const LinComb& a, const LinComb& b) { return !(a == b); }

  bool is_zero() const { return terms.empty(); }
  size_t size() const { return terms.size(); }

  std::string str(const std::function<std::string(const Key&)>& label) const {
    if (terms.empty()) return "0";
    std::string s;
    for (const auto& [k, c] : terms) {
      if (!s.empty()) s += " + ";
      s += "(" + c.str() + ")*" + label(k);
    }
    return s;
  }
};

template <class Key>
std::ostream& operator<<(std::ostream& os, const LinComb<Key>& x) {
  if (x.terms.empty()) return os << "0";
  bool first = true;
  for (const auto& [k, c] : x.terms) {
    os << (first ? "" : " + ") << "(" << c << ")*" << k;
    first = false;
  }
  return os;
}

/// Bilinear extension of a product on basis keys.
template <class Key>
LinComb<Key> bilinear(const LinComb<Key>& x, const LinComb<Key>& y,
                      const std::function<LinComb<Key>(const Key&, const Key&)>& basis_product) {
  LinComb<Key> out;
  for (const auto& [kx, cx] : x.terms)
    for (const auto& [ky, cy] : y.terms) {
      auto p = basis_product(kx, ky);
      p *= cx * cy;
      out += p;
    }
  return out;
}

}  // namespace sdh
