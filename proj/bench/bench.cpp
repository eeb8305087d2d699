// Serial-versus-parallel comparison of the exhaustive kernels. Each kernel
// keeps a plain serial reference used by the tests; this binary times both
// and cross-checks the results.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "primpoint/charsum.hpp"
#include "primpoint/count.hpp"
#include "primpoint/fermat.hpp"
#include "primpoint/field.hpp"
#include "primpoint/poly.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace primpoint;

namespace {

template <class F>
double time_s(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const char* name, double serial, double parallel, bool equal) {
    std::printf("%-34s %10.3f s %10.3f s %8.2fx   %s\n", name, serial, parallel,
                parallel > 0 ? serial / parallel : 0.0, equal ? "results equal" : "RESULTS DIFFER");
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled: both columns run serial code\n\n");
#endif
    std::printf("%-34s %12s %12s %9s\n", "kernel", "serial", "parallel", "speedup");

    {
        FieldCtx f(101, 1);
        MultiPoly poly = parse_poly("x1^3+x2^3+x3^3-1", f);
        uint64_t a = 0, b = 0;
        double ts = time_s([&] { a = count_points_serial(poly); });
        double tp = time_s([&] { b = count_points(poly); });
        row("count_points, q=101, s=3", ts, tp, a == b);
    }
    {
        FieldCtx f(509, 1);
        MultiPoly poly = parse_poly("x1^2+3*x2^2+x1*x2-1", f);
        std::vector<uint64_t> r{3, 2};
        MultiPoly tw = poly.twist(r);
        uint64_t a = 0, b = 0;
        double ts = time_s([&] { a = count_points_nonzero_serial(tw); });
        double tp = time_s([&] { b = count_points_nonzero(tw); });
        row("count_points_nonzero, q=509 twist", ts, tp, a == b);
    }
    {
        FieldCtx f(1009, 1);
        MultiPoly sphere = parse_poly("x1^2+x2^2+x3^2-1", f);
        uint64_t a = 0, b = 0;
        double ts = time_s([&] { a = count_primitive_brute_serial(sphere); });
        double tp = time_s([&] { b = count_primitive_brute(sphere); });
        row("count_primitive_brute, q=1009", ts, tp, a == b);
    }
    {
        FieldCtx f(243 == 243 ? 3 : 3, 5);  // GF(243)
        CharTable tbl(f);
        MultiPoly poly = parse_poly("x1^4+x2^4+x1", f);
        std::vector<MulCharacter> chars{{&f, 7}, {&f, 11}};
        Cplx a, b;
        double ts = time_s([&] { a = mixed_char_sum_serial(tbl, poly, chars); });
        double tp = time_s([&] { b = mixed_char_sum(tbl, poly, chars); });
        row("mixed_char_sum, q=243, s=2", ts, tp, std::abs(a - b) < 1e-6 * 243);
    }
    {
        SphereScanResult a, b;
        double ts = time_s([&] { a = sphere_scan_serial(18602); });
        double tp = time_s([&] { b = sphere_scan(18602, 0); });
        row("sphere_scan to 18602", ts, tp, a.exceptional == b.exceptional);
    }
    return 0;
}
