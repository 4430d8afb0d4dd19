#pragma once

#include "cadseq/geom/profile.hpp"

namespace cadseq::geom {

// True iff the profile self-intersects: any two non-adjacent curves (within
// or across loops) meet, or two adjacent curves overlap or cross beyond their
// shared endpoint(s). Tolerance 1e-9 in sketch units.
bool check_self_intersection(const Profile& pr);

}  // namespace cadseq::geom
