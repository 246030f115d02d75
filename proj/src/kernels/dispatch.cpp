#include "expou/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace expou::kern {

namespace {
KernelKind g_override = KernelKind::Auto;

KernelKind env_kind() {
    const char* e = std::getenv("EXPOU_KERNEL");
    if (!e) return KernelKind::Auto;
    if (std::strcmp(e, "scalar") == 0) return KernelKind::Scalar;
    if (std::strcmp(e, "avx2") == 0) return KernelKind::Avx2;
    return KernelKind::Auto;
}
}  // namespace

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

void set_kernel_override(KernelKind kind) { g_override = kind; }

const KernelOps& kernel_ops() {
    KernelKind k = g_override;
    if (k == KernelKind::Auto) k = env_kind();
    if (k == KernelKind::Auto)
        k = avx2_supported() ? KernelKind::Avx2 : KernelKind::Scalar;
    if (k == KernelKind::Avx2 && avx2_supported()) return avx2_ops();
    return scalar_ops();
}

}  // namespace expou::kern
