#include "diffuse/threading.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace diffuse {

int configure_threads_from_env() {
#ifdef _OPENMP
  const char* env = std::getenv("DIFFUSE_THREADS");
  if (env != nullptr) {
    int cap = 0;
    try {
      cap = std::stoi(env);
    } catch (...) {
      cap = 0;
    }
    if (cap > 0) {
      omp_set_num_threads(cap);
      return cap;
    }
  }
  return omp_get_max_threads();
#else
  return 1;
#endif
}

} // namespace diffuse
