#pragma once
// Compile-time SI dimensions. Exponents are (kg, m, s, A, K).

#include <cmath>
#include <string>

namespace qnoise {

template <int M, int L, int T, int I, int K>
struct Quantity {
    double v = 0.0;

    constexpr Quantity() = default;
    constexpr explicit Quantity(double x) : v(x) {}
    constexpr double value() const { return v; }

    constexpr Quantity operator+(Quantity o) const { return Quantity(v + o.v); }
    constexpr Quantity operator-(Quantity o) const { return Quantity(v - o.v); }
    constexpr Quantity operator-() const { return Quantity(-v); }
    constexpr Quantity operator*(double s) const { return Quantity(v * s); }
    constexpr Quantity operator/(double s) const { return Quantity(v / s); }
    constexpr bool operator<(Quantity o) const { return v < o.v; }
    constexpr bool operator>(Quantity o) const { return v > o.v; }
    constexpr bool operator<=(Quantity o) const { return v <= o.v; }
    constexpr bool operator>=(Quantity o) const { return v >= o.v; }
    constexpr bool operator==(Quantity o) const { return v == o.v; }
};

template <int M, int L, int T, int I, int K>
constexpr Quantity<M, L, T, I, K> operator*(double s, Quantity<M, L, T, I, K> q) {
    return Quantity<M, L, T, I, K>(s * q.v);
}

template <int M1, int L1, int T1, int I1, int K1, int M2, int L2, int T2, int I2, int K2>
constexpr auto operator*(Quantity<M1, L1, T1, I1, K1> a, Quantity<M2, L2, T2, I2, K2> b) {
    return Quantity<M1 + M2, L1 + L2, T1 + T2, I1 + I2, K1 + K2>(a.v * b.v);
}

template <int M1, int L1, int T1, int I1, int K1, int M2, int L2, int T2, int I2, int K2>
constexpr auto operator/(Quantity<M1, L1, T1, I1, K1> a, Quantity<M2, L2, T2, I2, K2> b) {
    return Quantity<M1 - M2, L1 - L2, T1 - T2, I1 - I2, K1 - K2>(a.v / b.v);
}

// Square root is only defined when every exponent is even.
template <int M, int L, int T, int I, int K>
auto sqrt(Quantity<M, L, T, I, K> q) {
    static_assert(M % 2 == 0 && L % 2 == 0 && T % 2 == 0 && I % 2 == 0 && K % 2 == 0,
                  "sqrt of a quantity with odd dimension exponent");
    return Quantity<M / 2, L / 2, T / 2, I / 2, K / 2>(std::sqrt(q.v));
}

using Dimensionless   = Quantity<0, 0, 0, 0, 0>;
using Mass            = Quantity<1, 0, 0, 0, 0>;
using Length          = Quantity<0, 1, 0, 0, 0>;
using Time            = Quantity<0, 0, 1, 0, 0>;
using Temperature     = Quantity<0, 0, 0, 0, 1>;
using Rate            = Quantity<0, 0, -1, 0, 0>;  // rad/s and 1/s
using Speed           = Quantity<0, 1, -1, 0, 0>;
using Force           = Quantity<1, 1, -2, 0, 0>;
using Energy          = Quantity<1, 2, -2, 0, 0>;
using Action          = Quantity<1, 2, -1, 0, 0>;
using Charge          = Quantity<0, 0, 1, 1, 0>;
using Volume          = Quantity<0, 3, 0, 0, 0>;
using EField          = Quantity<1, 1, -3, -1, 0>;    // V/m
using Permittivity    = Quantity<-1, -3, 4, 2, 0>;    // F/m
using Polarizability  = Quantity<-1, 0, 4, 2, 0>;     // C m^2 / V
using EntropyUnit     = Quantity<1, 2, -2, 0, -1>;    // J/K
using GravityConstant = Quantity<-1, 3, -2, 0, 0>;    // m^3 kg^-1 s^-2
using ForceSq         = Quantity<2, 2, -4, 0, 0>;     // N^2
using AreaSq          = Quantity<0, 2, 0, 0, 0>;      // m^2

template <class Q>
struct Dim;
template <int M, int L, int T, int I, int K>
struct Dim<Quantity<M, L, T, I, K>> {
    static std::string str() {
        std::string out;
        auto add = [&](const char* sym, int e) {
            if (e == 0) return;
            if (!out.empty()) out += ' ';
            out += sym;
            if (e != 1) out += '^' + std::to_string(e);
        };
        add("kg", M);
        add("m", L);
        add("s", T);
        add("A", I);
        add("K", K);
        return out.empty() ? "1" : out;
    }
};

template <class Q>
std::string dimension_of(const Q&) { return Dim<Q>::str(); }

}  // namespace qnoise
