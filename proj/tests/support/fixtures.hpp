#pragma once

#include "conelyap/process.hpp"

namespace testsupport {

using conelyap::ConvexProcess;
using conelyap::Mat;
using conelyap::PolyCone;
using conelyap::Vec;

/// H(x) = -x/2 + {0} x R_- on {x2 >= 0}.
inline ConvexProcess example3() {
  Mat a(2, 4), e(1, 4);
  a << 0, -1, 0, 0,
       0, 0.5, 0, 1;
  e << 0.5, 0, 1, 0;
  return ConvexProcess(2, PolyCone::from_constraints(a, e));
}

/// H(x) = diag(0, 1/2) x + R x {0} on cone{(1,0), (2,1)}.
inline ConvexProcess example2() {
  Mat a(2, 4), e(1, 4);
  a << -1, 2, 0, 0,
       0, -1, 0, 0;
  e << 0, -0.5, 0, 1;
  return ConvexProcess(2, PolyCone::from_constraints(a, e));
}

/// H(x) = diag(1/2, 1/3) x + R_+ (1, 1), a strict process.
inline ConvexProcess strict_diag() {
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = 0.5;
  a(1, 1) = 1.0 / 3.0;
  return ConvexProcess::affine_cone(a, PolyCone::from_generators(Mat::Ones(1, 2)), PolyCone::whole_space(2));
}

inline ConvexProcess linear_diag() {
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = 0.5;
  a(1, 1) = 1.0 / 3.0;
  return ConvexProcess::linear_map(a);
}

}  // namespace testsupport
