#include <cstdlib>
#include <string>

#include "freqgate/simd/kernels.hpp"

namespace freqgate::simd {

#ifndef FREQGATE_HAVE_AVX2
namespace detail {
const KernelTable* avx2_table_if_built() { return nullptr; }
}  // namespace detail
#endif

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* avx2_kernels() {
  if (!cpu_supports_avx2()) return nullptr;
  return detail::avx2_table_if_built();
}

const KernelTable& active_kernels() {
  static const KernelTable& table = [] () -> const KernelTable& {
    if (const char* env = std::getenv("FREQGATE_SIMD"); env && std::string(env) == "scalar") {
      return scalar_kernels();
    }
    if (const KernelTable* t = avx2_kernels()) return *t;
    return scalar_kernels();
  }();
  return table;
}

}  // namespace freqgate::simd
