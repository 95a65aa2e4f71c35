#include <sftorus/knots.hpp>

#include <algorithm>
#include <numeric>
#include <string>

namespace sftorus {
namespace {

void require_valid(const SignedPair& p) {
  if (p.k == 0 && p.l == 0) return;
  if (std::gcd(p.k, p.l) != 1)
    throw Error(ErrorCode::InvalidArgument,
                "winding pair (" + std::to_string(p.k) + "," + std::to_string(p.l) +
                    ") is not coprime");
}

}  // namespace

SignedPair isotopy_key(SignedPair p) {
  require_valid(p);
  if (p.k < 0 || (p.k == 0 && p.l < 0)) p = {-p.k, -p.l};
  if (p.k > 0 && p.l > 0 && p.l > p.k) std::swap(p.k, p.l);
  return p;
}

bool is_ambient_isotopic(SignedPair a, SignedPair b) {
  return isotopy_key(a) == isotopy_key(b);
}

KnotClass homeo_class(SignedPair p) {
  require_valid(p);
  return {p, !(p.k == 0 && p.l == 0)};
}

bool link_consistent(const std::vector<ClosedCurve>& curves) {
  std::vector<CurveIndex> idx;
  idx.reserve(curves.size());
  for (const auto& c : curves) idx.emplace_back(c);
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = i + 1; j < idx.size(); ++j)
      if (!(idx[i].distance(idx[j]) > 1e-12))
        throw Error(ErrorCode::Intersecting,
                    "curves " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
  if (curves.empty()) return true;
  const WindingPair w0 = winding(curves.front());
  return std::all_of(curves.begin(), curves.end(),
                     [&](const ClosedCurve& c) { return winding(c) == w0; });
}

}  // namespace sftorus
