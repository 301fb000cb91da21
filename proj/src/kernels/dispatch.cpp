#include <cstdlib>
#include <string>

#include "mrpeval/error.hpp"
#include "mrpeval/kernels.hpp"

namespace mrpeval::kernels {

namespace {

constexpr KernelTable kScalarTable{scalar::dot, scalar::centered_square_dot, scalar::sub_scaled,
                                   scalar::max_abs_diff};

#if defined(MRPEVAL_HAVE_AVX2)
constexpr KernelTable kAvx2Table{avx2::dot, avx2::centered_square_dot, avx2::sub_scaled,
                                 avx2::max_abs_diff};
#endif

Isa detect() noexcept {
  if (const char* forced = std::getenv("MRPEVAL_ISA"); forced != nullptr && std::string(forced) == "scalar") {
    return Isa::scalar;
  }
  if (isa_supported(Isa::avx2)) return Isa::avx2;
  return Isa::scalar;
}

}  // namespace

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(MRPEVAL_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

std::string_view isa_name(Isa isa) noexcept {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

const KernelTable& table(Isa isa) {
  if (!isa_supported(isa)) {
    throw Error("kernels.isa_unsupported", "ISA not supported: " + std::string(isa_name(isa)));
  }
#if defined(MRPEVAL_HAVE_AVX2)
  if (isa == Isa::avx2) return kAvx2Table;
#endif
  return kScalarTable;
}

Isa active_isa() noexcept {
  static const Isa isa = detect();
  return isa;
}

const KernelTable& active() noexcept {
  static const KernelTable& t = table(active_isa());
  return t;
}

}  // namespace mrpeval::kernels
