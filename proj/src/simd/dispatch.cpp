#include <atomic>
#include <cstdlib>
#include <string>

#include "qlens/simd/kernels.hpp"

namespace qlens::simd {

namespace detail {
#ifndef QLENS_HAVE_AVX2_TU
const KernelTable* avx2_table() { return nullptr; }
#endif
#ifndef QLENS_HAVE_NEON_TU
const KernelTable* neon_table() { return nullptr; }
#endif
}  // namespace detail

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* select_default() {
  if (const char* env = std::getenv("QLENS_SIMD")) {
    if (auto isa = parse_isa(env)) {
      if (const KernelTable* t = kernels_for(*isa)) return t;
    }
  }
  if (const KernelTable* t = kernels_for(Isa::avx2)) return t;
  if (const KernelTable* t = kernels_for(Isa::neon)) return t;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{select_default()};
  return slot;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

std::optional<Isa> parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::scalar;
  if (name == "avx2") return Isa::avx2;
  if (name == "neon") return Isa::neon;
  return std::nullopt;
}

const KernelTable* kernels_for(Isa isa) {
  switch (isa) {
    case Isa::scalar: return &scalar_kernels();
    case Isa::avx2: return cpu_has_avx2() ? detail::avx2_table() : nullptr;
    case Isa::neon: return detail::neon_table();
  }
  return nullptr;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
    if (kernels_for(isa)) out.push_back(isa);
  }
  return out;
}

const KernelTable& kernels() { return *active_slot().load(std::memory_order_acquire); }

Isa active_isa() { return kernels().isa; }

bool set_active_isa(Isa isa) {
  const KernelTable* t = kernels_for(isa);
  if (!t) return false;
  active_slot().store(t, std::memory_order_release);
  return true;
}

}  // namespace qlens::simd
