#include "qnoise/sampler.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "qnoise/parallel.hpp"
#include "qnoise/rng.hpp"

namespace qnoise {

namespace {

constexpr std::size_t kPathChunk = 64;
constexpr char kMagic[8] = {'Q', 'N', 'C', 'O', 'V', '0', '0', '1'};

std::array<double, 2> normal_pair(std::uint64_t seed, std::uint32_t tag, std::uint64_t path, std::uint64_t pair) {
    Philox4x32 gen(seed ^ (std::uint64_t{tag} * 0x9E3779B97F4A7C15ull));
    auto w = gen({static_cast<std::uint32_t>(pair), static_cast<std::uint32_t>(pair >> 32),
                  static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32)});
    auto unit = [](std::uint32_t hi, std::uint32_t lo) {
        std::uint64_t bits = ((std::uint64_t{hi} << 32) | lo) >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    };
    double u1 = unit(w[0], w[1]), u2 = unit(w[2], w[3]);
    double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2)};
}

void fill_normals(double* out, std::size_t n, std::uint64_t seed, std::uint32_t tag, std::uint64_t path) {
    for (std::size_t i = 0; i < n; i += 2) {
        auto z = normal_pair(seed, tag, path, i / 2);
        out[i] = z[0];
        if (i + 1 < n) out[i + 1] = z[1];
    }
}

}  // namespace

double philox_normal(std::uint64_t seed, std::uint32_t tag, std::uint64_t path, std::uint64_t index) {
    return normal_pair(seed, tag, path, index / 2)[index % 2];
}

void TimeGrid::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("grid.dt must be > 0");
    if (n_steps == 0) throw ValidationError("grid needs at least one point");
    if (!std::isfinite(t_start)) throw ValidationError("grid.t_start must be finite");
}

TimeGrid TimeGrid::spanning(double t0, double span, std::size_t n) {
    if (n < 2 || !(span > 0.0)) throw ValidationError("grid needs >= 2 points over a positive span");
    return {t0, span / static_cast<double>(n - 1), n};
}

CovarianceMatrix assemble_covariance(const std::vector<KernelDecomposition>& kernels, const TimeGrid& grid,
                                     int threads, bool check_resolution) {
    grid.validate();
    CovarianceMatrix C;
    C.grid = grid;
    bool have_units = false;
    double wmax = 0.0;
    for (const auto& k : kernels) {
        if (k.empty()) continue;
        if (have_units && k.units != C.units) throw UnitMismatch("kernels in " + C.units + " and " + k.units);
        C.units = k.units;
        have_units = true;
        wmax = std::max(wmax, k.max_frequency());
        C.provenance.insert(C.provenance.end(), k.provenance.begin(), k.provenance.end());
    }
    if (check_resolution && wmax > 0.0 && grid.dt > 0.1 * kTwoPi / wmax)
        throw GridTooCoarse("dt = " + std::to_string(grid.dt) + " s does not resolve " + std::to_string(wmax) +
                            " rad/s");

    const std::size_t n = grid.n_steps;
    const double dt = grid.dt;
    // Toeplitz part from |i-j|, Hankel part from i+j.
    std::vector<double> toe(n, 0.0), han(2 * n - 1, 0.0);
    double dcoef = 0.0, d2coef = 0.0;
    for (const auto& k : kernels) {
        dcoef += k.delta_coeff;
        d2coef += k.delta2_coeff;
        for (std::size_t d = 0; d < n; ++d) toe[d] += k.smooth_tau(static_cast<double>(d) * dt);
        if (!k.sum_terms.empty()) {
            for (std::size_t s = 0; s < 2 * n - 1; ++s) {
                double S = 2.0 * grid.t_start + static_cast<double>(s) * dt;
                for (const auto& term : k.sum_terms) han[s] += term.eval(S);
            }
        }
    }
    toe[0] += dcoef / dt;
    // delta'' -> (1, -2, 1)/dt^3, truncated at the boundary rows
    double d2 = d2coef / (dt * dt * dt);
    toe[0] += -2.0 * d2;
    if (n > 1) toe[1] += d2;

    C.m.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    parallel_for(n, threads, [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t d = i > j ? i - j : j - i;
            C.m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = toe[d] + han[i + j];
        }
    });
    return C;
}

SamplingFactor factorize(const CovarianceMatrix& C) {
    const Eigen::Index n = C.m.rows();
    if (n == 0 || C.m.cols() != n) throw ValidationError("covariance must be square and non-empty");
    double asym = (C.m - C.m.transpose()).cwiseAbs().maxCoeff();
    double maxdiag = C.m.diagonal().cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(maxdiag, 1e-300)) throw FactorizationFailure("covariance is not symmetric");
    if (!(maxdiag > 0.0)) throw FactorizationFailure("covariance has an empty diagonal");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C.m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw FactorizationFailure("eigenvalue solver did not converge");
    SamplingFactor f;
    f.grid = C.grid;
    f.max_diag = maxdiag;
    f.lambda_min = es.eigenvalues().minCoeff();
    double jitter = std::max(0.0, -f.lambda_min) + 1e-12 * maxdiag;
    const double cap = 1e-6 * maxdiag;
    if (C.units == "N^2") f.units = "N";
    while (true) {
        if (jitter > cap)
            throw FactorizationFailure("jitter " + std::to_string(jitter / maxdiag) +
                                       " x max(diag) exceeds 1e-6; kernel is badly discretized");
        Eigen::MatrixXd A = C.m;
        A.diagonal().array() += jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(A);
        if (llt.info() == Eigen::Success) {
            f.L = llt.matrixL();
            f.jitter = jitter;
            return f;
        }
        jitter *= 10.0;
    }
}

std::vector<SamplePath> sample_paths(const SamplingFactor& factor, std::size_t count, std::uint64_t seed,
                                     int threads, std::uint32_t tag) {
    if (count == 0) throw ValidationError("sample count must be >= 1");
    const std::size_t n = factor.grid.n_steps;
    std::vector<SamplePath> out(count);
    std::size_t chunks = (count + kPathChunk - 1) / kPathChunk;
    parallel_for(chunks, threads, [&](std::size_t c) {
        std::size_t p0 = c * kPathChunk;
        std::size_t m = std::min(kPathChunk, count - p0);
        Eigen::MatrixXd Z(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
        for (std::size_t j = 0; j < m; ++j) fill_normals(Z.col(static_cast<Eigen::Index>(j)).data(), n, seed, tag, p0 + j);
        Eigen::MatrixXd X = factor.L.triangularView<Eigen::Lower>() * Z;
        for (std::size_t j = 0; j < m; ++j) {
            auto& p = out[p0 + j];
            p.grid = factor.grid;
            p.units = factor.units;
            p.values.assign(X.col(static_cast<Eigen::Index>(j)).data(), X.col(static_cast<Eigen::Index>(j)).data() + n);
        }
    });
    return out;
}

std::vector<SamplePath> sample_thermal_white(const PhysicalConstants& k, const OscillatorParams& osc,
                                             const TimeGrid& grid, std::size_t count, std::uint64_t seed,
                                             int threads) {
    grid.validate();
    if (count == 0) throw ValidationError("sample count must be >= 1");
    double gm = osc.damping_rate.value(), T = osc.bath_temperature.value();
    if (gm < 0.0 || T < 0.0) throw ValidationError("damping and temperature must be >= 0");
    double Gamma = 2.0 * osc.mass.value() * gm;
    double sd = std::sqrt(2.0 * Gamma * k.kB.value() * T / grid.dt);
    std::vector<SamplePath> out(count);
    parallel_for(count, threads, [&](std::size_t p) {
        auto& path = out[p];
        path.grid = grid;
        path.values.assign(grid.n_steps, 0.0);
        if (sd == 0.0) return;
        fill_normals(path.values.data(), grid.n_steps, seed, 1u, p);
        for (auto& v : path.values) v *= sd;
    });
    return out;
}

void dump_covariance(const CovarianceMatrix& C, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path + " for writing");
    os.write(kMagic, 8);
    const Eigen::Index n = C.m.rows();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            double v = C.m(i, j);
            unsigned char b[8];
            std::uint64_t bits;
            std::memcpy(&bits, &v, 8);
            for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(bits >> (8 * k));
            os.write(reinterpret_cast<const char*>(b), 8);
        }
    if (!os) throw IoError("write failed for " + path);
}

Eigen::MatrixXd load_covariance(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0) throw IoError(path + " is not a QNCOV001 file");
    std::vector<unsigned char> raw((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    std::size_t count = raw.size() / 8;
    auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(count))));
    if (raw.size() % 8 != 0 || static_cast<std::size_t>(n * n) != count) throw IoError(path + " has a bad payload size");
    Eigen::MatrixXd m(n, n);
    for (std::size_t idx = 0; idx < count; ++idx) {
        std::uint64_t bits = 0;
        for (int k = 0; k < 8; ++k) bits |= std::uint64_t{raw[8 * idx + k]} << (8 * k);
        double v;
        std::memcpy(&v, &bits, 8);
        m(static_cast<Eigen::Index>(idx) / n, static_cast<Eigen::Index>(idx) % n) = v;
    }
    return m;
}

}  // namespace qnoise
