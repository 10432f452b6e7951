//
// Copyright 2026 The pfbandit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pfb {

// Dense decision/gradient vector. Dimension is fixed per experiment.
using Point = std::vector<double>;

inline Point zeros(int n) { return Point(static_cast<std::size_t>(n), 0.0); }

inline void check_same_dim(const Point& a, const Point& b, const char* where) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(where) + ": dimension mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  }
}

inline double dot(const Point& a, const Point& b) {
  check_same_dim(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }

inline double norm1(const Point& a) {
  double s = 0.0;
  for (double v : a) s += std::abs(v);
  return s;
}

inline Point add(const Point& a, const Point& b) {
  check_same_dim(a, b, "add");
  Point out(a);
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

inline Point sub(const Point& a, const Point& b) {
  check_same_dim(a, b, "sub");
  Point out(a);
  for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  return out;
}

inline Point scaled(const Point& a, double s) {
  Point out(a);
  for (double& v : out) v *= s;
  return out;
}

inline void add_in_place(Point& a, const Point& b) {
  check_same_dim(a, b, "add_in_place");
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
}

// a += s * b
inline void axpy_in_place(Point& a, double s, const Point& b) {
  check_same_dim(a, b, "axpy_in_place");
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += s * b[i];
}

inline double distance(const Point& a, const Point& b) { return norm(sub(a, b)); }

inline bool all_finite(const Point& a) {
  for (double v : a) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace pfb
