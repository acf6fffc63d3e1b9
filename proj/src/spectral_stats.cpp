#include "rydfloq/spectral_stats.hpp"

#include "rydfloq/error.hpp"
#include "rydfloq/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rydfloq {

namespace {

// Gaps this small are rounding noise on phases in [0, 2 pi).
constexpr double kZeroGap = 1e-12;

}  // namespace

RStatistics level_spacing_ratios(const VectorXd& phases) {
    const Index n = phases.size();
    if (n < 3) throw InvalidArgument("level_spacing_ratios: need at least 3 phases");
    RStatistics out;
    out.ratios.reserve(static_cast<std::size_t>(n - 2));
    double sum = 0.0;
    for (Index i = 0; i + 2 < n; ++i) {
        const double d1 = phases[i + 1] - phases[i];
        const double d2 = phases[i + 2] - phases[i + 1];
        if (d1 < 0.0 || d2 < 0.0) throw InvalidArgument("level_spacing_ratios: phases are not sorted");
        const double hi = std::max(d1, d2);
        if (hi <= kZeroGap)
            throw NumericalError("level_spacing_ratios: two consecutive zero gaps at index " +
                                 std::to_string(i) + " (exact degeneracy)");
        const double r = std::min(d1, d2) / hi;
        out.ratios.push_back(r);
        sum += r;
    }
    out.count = static_cast<Index>(out.ratios.size());
    out.mean_r = sum / static_cast<double>(out.count);
    return out;
}

std::vector<ScanRow> mean_r_scan(const std::vector<DriveParams>& grid, Sector sector, int workers) {
    if (grid.empty()) throw InvalidArgument("mean_r_scan: empty grid");
    return parallel_map<ScanRow>(grid.size(), workers, [&](std::size_t i) {
        const DriveParams& p = grid[i];
        ScanRow row;
        row.delta0 = p.shifted_detuning();
        row.tau = p.half_period;
        row.sector = sector;
        try {
            const auto spec = floquet_spectrum(p, sector, false);
            const auto r = level_spacing_ratios(spec.phases);
            row.mean_r = r.mean_r;
            row.count = r.count;
        } catch (const std::exception& e) {
            row.mean_r = std::nan("");
            row.error = e.what();
        }
        return row;
    });
}

double inverse_participation_ratio(const MatrixXcd& v) {
    if (v.size() == 0) throw InvalidArgument("inverse_participation_ratio: no eigenvectors");
    return v.cwiseAbs2().array().square().sum() / static_cast<double>(v.cols());
}

double inverse_participation_ratio(const FloquetSpectrum& spec) {
    if (!spec.has_vectors()) throw InvalidArgument("inverse_participation_ratio: spectrum has no eigenvectors");
    double t = 0.0;
    spec.vectors.for_each_block(256, [&](Index, const MatrixXcd& blk) {
        t += blk.cwiseAbs2().array().square().sum();
    });
    return t / static_cast<double>(spec.vectors.cols());
}

}  // namespace rydfloq
