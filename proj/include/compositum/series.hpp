#pragma once

// Truncated power series a_0 + a_1 w + ... + a_K w^K over an exact field.
// Every routine takes the truncation degree K explicitly and returns a
// vector of length K + 1.

#include <cstddef>
#include <vector>

#include "compositum/cyclo.hpp"
#include "compositum/errors.hpp"

namespace compositum::series {

template <class T>
using Series = std::vector<T>;

template <class T>
T coeff(const Series<T>& s, std::size_t i) {
  return i < s.size() ? s[i] : T();
}

template <class T>
Series<T> resized(Series<T> s, std::size_t k) {
  s.resize(k + 1);
  return s;
}

template <class T>
bool is_zero_beyond(const Series<T>& s, std::size_t from) {
  for (std::size_t i = from; i < s.size(); ++i)
    if (!s[i].is_zero()) return false;
  return true;
}

template <class T>
Series<T> mul(const Series<T>& a, const Series<T>& b, std::size_t k) {
  Series<T> out(k + 1);
  const std::size_t na = std::min(a.size(), k + 1);
  for (std::size_t i = 0; i < na; ++i) {
    if (a[i].is_zero()) continue;
    const std::size_t nb = std::min(b.size(), k + 1 - i);
    for (std::size_t j = 0; j < nb; ++j)
      if (!b[j].is_zero()) out[i + j] += a[i] * b[j];
  }
  return out;
}

/// Multiplicative inverse; requires a_0 != 0.
template <class T>
Series<T> inverse(const Series<T>& a, std::size_t k) {
  if (a.empty() || a[0].is_zero()) throw DivisionByZero();
  Series<T> out(k + 1);
  const T inv0 = a[0].inverse();
  out[0] = inv0;
  for (std::size_t n = 1; n <= k; ++n) {
    T acc;
    const std::size_t top = std::min(n, a.size() - 1);
    for (std::size_t j = 1; j <= top; ++j)
      if (!a[j].is_zero()) acc += a[j] * out[n - j];
    out[n] = -(acc * inv0);
  }
  return out;
}

/// a^alpha for a_0 = 1 and rational alpha, via k F_k = sum_j (alpha j - (k - j)) a_j F_{k-j}.
template <class T>
Series<T> rational_power(const Series<T>& a, const Rational& alpha, std::size_t k) {
  if (a.empty() || !a[0].is_one()) throw InputError("rational_power: constant term must be 1");
  Series<T> out(k + 1);
  out[0] = T(1);
  for (std::size_t n = 1; n <= k; ++n) {
    T acc;
    const std::size_t top = std::min(n, a.size() - 1);
    for (std::size_t j = 1; j <= top; ++j) {
      if (a[j].is_zero()) continue;
      Rational w = alpha * Rational(static_cast<long>(j)) - Rational(static_cast<long>(n - j));
      if (sgn(w) == 0) continue;
      acc += (a[j] * out[n - j]).scaled(w);
    }
    out[n] = acc.scaled(Rational(1) / Rational(static_cast<long>(n)));
  }
  return out;
}

/// outer(inner(w)) for inner_0 = 0, by Horner with shrinking truncation.
template <class T>
Series<T> compose(const Series<T>& outer, const Series<T>& inner, std::size_t k) {
  if (!inner.empty() && !inner[0].is_zero())
    throw InputError("series compose: inner series must have zero constant term");
  std::size_t top = std::min(outer.size(), k + 1);
  while (top > 0 && outer[top - 1].is_zero()) --top;
  if (top == 0) return Series<T>(k + 1);
  Series<T> acc{outer[top - 1]};
  for (std::size_t j = top - 1; j-- > 0;) {
    // acc = acc * inner + outer[j], needed only up to degree k - j
    acc = mul(acc, inner, k - j);
    acc[0] += outer[j];
  }
  return resized(acc, k);
}

template <class T>
Series<T> power(const Series<T>& a, long e, std::size_t k) {
  Series<T> result(k + 1);
  result[0] = T(1);
  for (long i = 0; i < e; ++i) result = mul(result, a, k);
  return result;
}

}  // namespace compositum::series
