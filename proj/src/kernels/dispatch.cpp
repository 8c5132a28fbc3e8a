#include <atomic>
#include <cstdlib>
#include <cstring>

#include "cmaeig/error.hpp"
#include "cmaeig/kernels.hpp"
#include "kernels_impl.hpp"

namespace cmaeig::kernels {

namespace {

const KernelTable* choose() {
    const char* env = std::getenv("CMAEIG_KERNELS");
    if (env && std::strcmp(env, "scalar") == 0) return &scalar_table();
    const KernelTable* v = avx2_table();
    if (v && cpu_has_avx2()) return v;
    return &scalar_table();
}

std::atomic<const KernelTable*>& slot() {
    static std::atomic<const KernelTable*> s{choose()};
    return s;
}

}  // namespace

const KernelTable* avx2_table() { return avx2_table_impl(); }

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

void force_backend(Backend b) {
    if (b == Backend::scalar) {
        slot().store(&scalar_table(), std::memory_order_release);
        return;
    }
    const KernelTable* v = avx2_table();
    if (!v || !cpu_has_avx2()) throw InvalidArgument("AVX2 kernels are not available on this machine");
    slot().store(v, std::memory_order_release);
}

const char* backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

}  // namespace cmaeig::kernels
