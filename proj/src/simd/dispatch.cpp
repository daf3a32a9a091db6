#include <atomic>
#include <cstdlib>
#include <string>

#include "bogo/simd/kernels.hpp"

namespace bogo::simd {
namespace {

bool cpu_has_avx2() {
#if defined(BOGO_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect() {
  if (const char* env = std::getenv("BOGOCHANNEL_SIMD")) {
    if (std::string(env) == "scalar") return Isa::scalar;
  }
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<int>& selected() {
  static std::atomic<int> isa{static_cast<int>(detect())};
  return isa;
}

}  // namespace

bool isa_available(Isa isa) { return isa == Isa::scalar || cpu_has_avx2(); }

Isa active_isa() { return static_cast<Isa>(selected().load(std::memory_order_relaxed)); }

void set_isa(Isa isa) {
  if (!isa_available(isa)) isa = Isa::scalar;
  selected().store(static_cast<int>(isa), std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

const KernelTable& table() {
#if defined(BOGO_HAVE_AVX2_TU)
  if (active_isa() == Isa::avx2) return avx2_table();
#endif
  return scalar_table();
}

}  // namespace bogo::simd
