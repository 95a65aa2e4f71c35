#pragma once

// Independent reference computations shared by the test suites. Nothing
// here calls into the library's numerical routines.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

constexpr double pi = 3.14159265358979323846;

/// Composite midpoint rule with n nodes.
inline double midpoint(const std::function<double(double)>& f, double a, double b,
                       std::size_t n) {
  const double h = (b - a) / static_cast<double>(n);
  double s = 0.0;
  double c = 0.0;  // Kahan compensation
  for (std::size_t i = 0; i < n; ++i) {
    const double y = f(a + (i + 0.5) * h) * h - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

/// Sign changes of f(., y) on a uniform scan of [0, 2pi).
inline int sign_changes(const std::function<double(double, double)>& f, double y,
                        int n = 20000) {
  int count = 0;
  double prev = f(0.0, y);
  for (int i = 1; i <= n; ++i) {
    const double cur = f(2.0 * pi * i / n, y);
    if ((prev < 0.0) != (cur < 0.0)) ++count;
    prev = cur;
  }
  return count;
}

/// Classic fixed-step RK4 for a planar field; returns the end point.
template <typename F>
std::pair<double, double> rk4(F&& field, double x, double y, double T, int n) {
  const double h = T / n;
  for (int i = 0; i < n; ++i) {
    auto [a1, b1] = field(x, y);
    auto [a2, b2] = field(x + 0.5 * h * a1, y + 0.5 * h * b1);
    auto [a3, b3] = field(x + 0.5 * h * a2, y + 0.5 * h * b2);
    auto [a4, b4] = field(x + h * a3, y + h * b3);
    x += h / 6.0 * (a1 + 2 * a2 + 2 * a3 + a4);
    y += h / 6.0 * (b1 + 2 * b2 + 2 * b3 + b4);
  }
  return {x, y};
}

/// Union-find over integer ids.
struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace oracle
