#pragma once

#include <chrono>

namespace hometunnel::simnet {

/// Simulated time and durations, in milliseconds.
using Millis = std::chrono::duration<double, std::milli>;

}  // namespace hometunnel::simnet
