#include "gaze/geometry.hpp"

namespace gaze {

TargetRegion default_avatar_target() { return {{0.0, 18.0}, 5.0}; }

HitResult hit_test(const Vec3& dir, const TargetRegion& target) {
    const double offset = angular_distance(dir, dir_from_angles(target.center));
    return {offset <= target.radius, offset};
}

}  // namespace gaze
