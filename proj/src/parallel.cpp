#include "pointerlab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace pointerlab {

void configure_threads_from_env() {
  const char* env = std::getenv("POINTERLAB_THREADS");
  if (env == nullptr) return;
  try {
    const int n = std::stoi(env);
    if (n > 0) set_threads(n);
  } catch (...) {
  }
}

}  // namespace pointerlab
