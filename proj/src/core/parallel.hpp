#pragma once

#include <cstddef>
#include <functional>

namespace jmcurv {

/// Caps worker threads for internal loops; 0 restores the hardware default.
void set_max_threads(unsigned n);
unsigned max_threads();

/// Runs body(i) for i in [0, count). Each index must write only its own output.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace jmcurv
