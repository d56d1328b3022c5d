#pragma once

// Head-locked avatar placement and gaze-to-target hit testing. The avatar is an
// angular disc; the boundary is inclusive.

#include "gaze/core.hpp"

namespace gaze {

struct HitResult {
    bool hit = false;
    double offset = 180.0;  // degrees from gaze to target center
};

/// Peripheral region above the line of sight: center (yaw 0, pitch +18), radius 5.
TargetRegion default_avatar_target();

HitResult hit_test(const Vec3& dir, const TargetRegion& target);

}  // namespace gaze
