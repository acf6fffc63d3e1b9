#pragma once

#include "rydfloq/basis.hpp"
#include "rydfloq/floquet.hpp"
#include "rydfloq/model.hpp"

#include <string>
#include <vector>

namespace rydfloq {

struct RStatistics {
    std::vector<double> ratios;
    double mean_r = 0.0;
    Index count = 0;
};

// Reference values of the mean gap ratio.
struct EnsembleConstants {
    static constexpr double coe_mean_r = 0.527;
    static constexpr double poisson_mean_r = 0.386;
};

// r_n = min(d_n, d_{n+1}) / max(d_n, d_{n+1}) over consecutive gaps of the
// sorted phases; the wrap-around gap is not used. Two consecutive zero gaps
// (below 1e-12) leave the ratio undefined and raise NumericalError.
RStatistics level_spacing_ratios(const VectorXd& sorted_phases);

struct ScanRow {
    double delta0 = 0.0;
    double tau = 0.0;
    Sector sector = Sector::even;
    double mean_r = 0.0;
    Index count = 0;
    std::string error;  // empty when the point succeeded

    bool ok() const { return error.empty(); }
};

// Mean gap ratio per grid point, in grid order. A failing point yields a row
// with `error` set; the others are unaffected.
std::vector<ScanRow> mean_r_scan(const std::vector<DriveParams>& grid, Sector sector, int workers = 1);

// T_I / D with T_I = sum_{k,n} |<k|theta_n>|^4, in the basis the
// eigenvectors are expressed in.
double inverse_participation_ratio(const FloquetSpectrum& spec);
double inverse_participation_ratio(const MatrixXcd& vectors);

}  // namespace rydfloq
