#include "ablmini/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace ablmini::kern {

const Table& scalar_table();
const Table* avx2_table();

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Table* select() {
  if (const char* env = std::getenv("ABLMINI_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return &scalar_table();
    if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2() && avx2_table())
      return avx2_table();
    return &scalar_table();
  }
  if (cpu_has_avx2() && avx2_table()) return avx2_table();
  return &scalar_table();
}

} // namespace

const Table& active() {
  static const Table* t = select();
  return *t;
}

const Table* find(const char* name) {
  if (std::strcmp(name, "scalar") == 0) return &scalar_table();
  if (std::strcmp(name, "avx2") == 0)
    return cpu_has_avx2() ? avx2_table() : nullptr;
  return nullptr;
}

} // namespace ablmini::kern
