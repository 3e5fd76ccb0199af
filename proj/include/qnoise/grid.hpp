#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace qnoise {

struct TimeGrid {
    double t_start = 0.0;
    double dt = 0.0;
    std::size_t n_steps = 0;  // number of grid points

    double time(std::size_t i) const { return t_start + static_cast<double>(i) * dt; }
    double t_end() const { return n_steps ? time(n_steps - 1) : t_start; }
    void validate() const;

    // n points covering [t0, t0 + span] inclusive.
    static TimeGrid spanning(double t0, double span, std::size_t n);
};

struct SamplePath {
    TimeGrid grid;
    std::vector<double> values;
    std::string units = "N";
};

}  // namespace qnoise
