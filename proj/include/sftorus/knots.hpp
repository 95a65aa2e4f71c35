#pragma once

// Classification of torus knots by winding pairs: ambient isotopy and the
// two homeomorphism classes of simple closed curves on the torus.

#include <sftorus/torus.hpp>

#include <vector>

namespace sftorus {

/// Signed winding pair; unlike WindingPair::normalized() nothing is flipped.
struct SignedPair {
  int k = 0;
  int l = 0;
  friend bool operator==(const SignedPair&, const SignedPair&) = default;
};

struct KnotClass {
  SignedPair pair;
  /// False only for the contractible class (0,0).
  bool essential = false;
};

/// Representative of the ambient-isotopy class: sign fixed so that the
/// first nonzero entry is positive, positive pairs sorted descending.
/// Throws InvalidArgument for a non-coprime pair other than (0,0).
SignedPair isotopy_key(SignedPair p);

bool is_ambient_isotopic(SignedPair a, SignedPair b);

KnotClass homeo_class(SignedPair p);

/// All windings equal. Throws Intersecting when two curves meet.
bool link_consistent(const std::vector<ClosedCurve>& curves);

}  // namespace sftorus
