#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "qnoise/grid.hpp"
#include "qnoise/kernels.hpp"

namespace qnoise {

struct CovarianceMatrix {
    TimeGrid grid;
    Eigen::MatrixXd m;
    std::string units = "N^2";
    std::vector<std::string> provenance;
};

struct SamplingFactor {
    TimeGrid grid;
    Eigen::MatrixXd L;  // lower triangular, L L^T = C + jitter I
    double jitter = 0.0;
    double lambda_min = 0.0;
    double max_diag = 0.0;
    std::string units = "N";
};

// check_resolution = false skips the dt <= 0.1 * 2 pi / omega_max guard, for
// tiny exact-arithmetic fixtures that sample a kernel at a few points.
CovarianceMatrix assemble_covariance(const std::vector<KernelDecomposition>& kernels, const TimeGrid& grid,
                                     int threads = 1, bool check_resolution = true);

SamplingFactor factorize(const CovarianceMatrix& C);

std::vector<SamplePath> sample_paths(const SamplingFactor& factor, std::size_t count, std::uint64_t seed,
                                     int threads = 1, std::uint32_t tag = 0);

// White thermal force with <eta eta> = 2 Gamma_m k_B T delta, Gamma_m = 2 m gamma_m.
std::vector<SamplePath> sample_thermal_white(const PhysicalConstants& k, const OscillatorParams& osc,
                                             const TimeGrid& grid, std::size_t count, std::uint64_t seed,
                                             int threads = 1);

// QNCOV001 header followed by row-major little-endian float64.
void dump_covariance(const CovarianceMatrix& C, const std::string& path);
Eigen::MatrixXd load_covariance(const std::string& path);

}  // namespace qnoise
