#pragma once

#include <chrono>

namespace amc::detail {

using WallClock = std::chrono::steady_clock;

inline double seconds_between(WallClock::time_point a, WallClock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

}  // namespace amc::detail
