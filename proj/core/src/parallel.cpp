#include "qdioph/parallel.hpp"

#include <cstdlib>
#include <string>

namespace qdioph {

unsigned default_threads() {
  if (const char* env = std::getenv("COUNT_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace qdioph
