#include <cstdio>
#include <strings.h>

extern "C" char* openblas_get_corename(void);

// Prints the OpenBLAS core type worth forcing when the library fell back to
// its generic kernels on a CPU it did not recognize, or nothing.
int main() {
    if (strcasecmp(openblas_get_corename(), "Prescott") != 0) return 0;
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx512f"))
        std::printf("SkylakeX");
    else if (__builtin_cpu_supports("avx2"))
        std::printf("Haswell");
    return 0;
}
