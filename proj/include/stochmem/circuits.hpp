#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stochmem/bitstream.hpp"
#include "stochmem/error.hpp"

namespace stochmem {

enum class GateKind { And, Or, Xor, Not, Mux };

enum class AppKind { Robert, Median, Frame, Gamma, Kde };

inline constexpr std::array<AppKind, 5> kAllApps = {AppKind::Robert, AppKind::Median, AppKind::Frame,
                                                    AppKind::Gamma, AppKind::Kde};

inline std::string_view app_name(AppKind app) {
    switch (app) {
    case AppKind::Robert: return "robert";
    case AppKind::Median: return "median";
    case AppKind::Frame: return "frame";
    case AppKind::Gamma: return "gamma";
    case AppKind::Kde: return "kde";
    }
    return "?";
}

inline std::optional<AppKind> parse_app(std::string_view name) {
    for (auto app : kAllApps)
        if (app_name(app) == name) return app;
    return std::nullopt;
}

/// Frame and KDE produce a foreground/background decision per pixel.
inline bool is_decision_app(AppKind app) { return app == AppKind::Frame || app == AppKind::Kde; }

namespace detail {

inline void require_same_length(const Bitstream& a, const Bitstream& b) {
    if (a.length() != b.length()) throw DomainError("bitstream length mismatch");
}

template <class Op>
Bitstream combine(const Bitstream& a, const Bitstream& b, Op op) {
    require_same_length(a, b);
    Bitstream out(a.length(), a.encoding());
    auto o = out.mutable_words();
    auto x = a.words();
    auto y = b.words();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = op(x[i], y[i]);
    out.clear_tail();
    return out;
}

} // namespace detail

inline Bitstream gate_and(const Bitstream& a, const Bitstream& b) {
    return detail::combine(a, b, [](std::uint64_t x, std::uint64_t y) { return x & y; });
}

inline Bitstream gate_or(const Bitstream& a, const Bitstream& b) {
    return detail::combine(a, b, [](std::uint64_t x, std::uint64_t y) { return x | y; });
}

inline Bitstream gate_xor(const Bitstream& a, const Bitstream& b) {
    return detail::combine(a, b, [](std::uint64_t x, std::uint64_t y) { return x ^ y; });
}

inline Bitstream gate_not(const Bitstream& a) {
    Bitstream out(a.length(), a.encoding());
    auto o = out.mutable_words();
    auto x = a.words();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = ~x[i];
    out.clear_tail();
    return out;
}

/// select = 1 passes `a`, select = 0 passes `b`.
inline Bitstream gate_mux(const Bitstream& a, const Bitstream& b, const Bitstream& select) {
    detail::require_same_length(a, b);
    detail::require_same_length(a, select);
    Bitstream out(a.length(), a.encoding());
    auto o = out.mutable_words();
    auto x = a.words();
    auto y = b.words();
    auto s = select.words();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = (s[i] & x[i]) | (~s[i] & y[i]);
    return out;
}

/// Dispatching form. Arity: Not 1; And/Or/Xor 2; Mux 3 as (a, b, select).
inline Bitstream gate_eval(GateKind kind, std::initializer_list<std::reference_wrapper<const Bitstream>> in) {
    const auto arg = [&](std::size_t i) -> const Bitstream& { return (in.begin() + i)->get(); };
    const std::size_t want = kind == GateKind::Not ? 1 : kind == GateKind::Mux ? 3 : 2;
    if (in.size() != want) throw DomainError("wrong number of gate inputs");
    switch (kind) {
    case GateKind::And: return gate_and(arg(0), arg(1));
    case GateKind::Or: return gate_or(arg(0), arg(1));
    case GateKind::Xor: return gate_xor(arg(0), arg(1));
    case GateKind::Not: return gate_not(arg(0));
    case GateKind::Mux: return gate_mux(arg(0), arg(1), arg(2));
    }
    throw DomainError("unknown gate");
}

// ---------------------------------------------------------------------------
// Robert's cross: two correlated XORs (absolute differences along each
// diagonal) averaged by a MUX with an independent 0.5 select.

inline Bitstream robert_eval(const Bitstream& p00, const Bitstream& p01, const Bitstream& p10,
                             const Bitstream& p11, const Bitstream& select) {
    return gate_mux(gate_xor(p00, p11), gate_xor(p01, p10), select);
}

inline double robert_golden(double p00, double p01, double p10, double p11) {
    return 0.5 * (std::abs(p00 - p11) + std::abs(p01 - p10));
}

// ---------------------------------------------------------------------------
// Median of nine: 19 compare-exchange network. With correlated inputs AND is
// min and OR is max, so each exchange is one AND plus one OR.

inline constexpr std::array<std::array<int, 2>, 19> kMedian9Network = {{
    {1, 2}, {4, 5}, {7, 8}, {0, 1}, {3, 4}, {6, 7}, {1, 2}, {4, 5}, {7, 8}, {0, 3},
    {5, 8}, {4, 7}, {3, 6}, {1, 4}, {2, 5}, {4, 7}, {4, 2}, {6, 4}, {4, 2},
}};
inline constexpr int kMedian9Output = 4;

/// Runs the median network on any ordered type given min/max operations.
template <class T, class Min, class Max>
T median9_network(std::array<T, 9> v, Min&& lo, Max&& hi) {
    for (const auto& [i, j] : kMedian9Network) {
        T a = lo(v[i], v[j]);
        T b = hi(v[i], v[j]);
        v[i] = std::move(a);
        v[j] = std::move(b);
    }
    return std::move(v[kMedian9Output]);
}

inline Bitstream median_eval(std::span<const Bitstream, 9> p) {
    for (const auto& s : p) detail::require_same_length(p[0], s);
    std::array<Bitstream, 9> v = {p[0], p[1], p[2], p[3], p[4], p[5], p[6], p[7], p[8]};
    return median9_network(std::move(v), gate_and, gate_or);
}

inline double median_golden(std::span<const double, 9> values) {
    std::array<double, 9> v;
    std::copy(values.begin(), values.end(), v.begin());
    std::nth_element(v.begin(), v.begin() + 4, v.end());
    return v[4];
}

// ---------------------------------------------------------------------------
// Frame difference: foreground when the correlated XOR exceeds theta.

inline bool frame_diff_eval(const Bitstream& cur, const Bitstream& prev, double theta) {
    const auto diff = gate_xor(cur, prev);
    return static_cast<double>(diff.ones_count()) > theta * static_cast<double>(diff.length());
}

inline bool frame_golden(double cur, double prev, double theta) { return std::abs(cur - prev) > theta; }

// ---------------------------------------------------------------------------
// ReSC gamma correction. Per cycle, the number of ones among the six x-bits
// selects which coefficient stream drives the output, so the output
// expectation is the Bernstein polynomial sum_k C(6,k) x^k (1-x)^(6-k) b_k.

inline constexpr std::size_t kGammaDegree = 6;

inline Bitstream gamma_eval(std::span<const Bitstream> x_streams, std::span<const Bitstream> coeff_streams) {
    if (x_streams.empty() || x_streams.size() > 7)
        throw DomainError("ReSC needs between 1 and 7 x streams");
    if (coeff_streams.size() != x_streams.size() + 1)
        throw DomainError("ReSC needs degree + 1 coefficient streams");
    const Bitstream& ref = x_streams[0];
    for (const auto& s : x_streams) detail::require_same_length(ref, s);
    for (const auto& s : coeff_streams) detail::require_same_length(ref, s);

    Bitstream out(ref.length());
    auto o = out.mutable_words();
    for (std::size_t w = 0; w < o.size(); ++w) {
        // Bit-sliced 3-bit counter of the ones across the x lanes.
        std::uint64_t s0 = 0, s1 = 0, s2 = 0;
        for (const auto& x : x_streams) {
            const std::uint64_t b = x.words()[w];
            const std::uint64_t c0 = s0 & b;
            s0 ^= b;
            const std::uint64_t c1 = s1 & c0;
            s1 ^= c0;
            s2 ^= c1;
        }
        std::uint64_t acc = 0;
        for (std::size_t k = 0; k < coeff_streams.size(); ++k) {
            const std::uint64_t m0 = (k & 1) ? s0 : ~s0;
            const std::uint64_t m1 = (k & 2) ? s1 : ~s1;
            const std::uint64_t m2 = (k & 4) ? s2 : ~s2;
            acc |= m0 & m1 & m2 & coeff_streams[k].words()[w];
        }
        o[w] = acc;
    }
    out.clear_tail();
    return out;
}

inline double gamma_golden(double x, double exponent = 0.45) { return std::pow(x, exponent); }

// ---------------------------------------------------------------------------
// KDE segmentation with a box kernel over 32 history frames.

inline constexpr std::size_t kKdeHistory = 32;

struct KdeParams {
    double delta = 0.1;
    double theta = 0.25;
};

/// Fraction of history streams whose XOR distance to `cur` is within delta.
inline double kde_density(const Bitstream& cur, std::span<const Bitstream> hist, double delta) {
    if (hist.size() != kKdeHistory) throw DomainError("KDE needs exactly 32 history streams");
    const double limit = delta * static_cast<double>(cur.length());
    std::size_t near = 0;
    for (const auto& h : hist) {
        detail::require_same_length(cur, h);
        std::size_t dist = 0;
        for (std::size_t w = 0; w < cur.words().size(); ++w)
            dist += static_cast<std::size_t>(std::popcount(cur.words()[w] ^ h.words()[w]));
        if (static_cast<double>(dist) <= limit) ++near;
    }
    return static_cast<double>(near) / kKdeHistory;
}

/// true = foreground (density below theta).
inline bool kde_eval(const Bitstream& cur, std::span<const Bitstream> hist, KdeParams params = {}) {
    return kde_density(cur, hist, params.delta) < params.theta;
}

inline double kde_golden_density(double cur, std::span<const double> hist, double delta) {
    if (hist.size() != kKdeHistory) throw DomainError("KDE needs exactly 32 history values");
    std::size_t near = 0;
    for (double h : hist)
        if (std::abs(cur - h) <= delta) ++near;
    return static_cast<double>(near) / kKdeHistory;
}

inline bool kde_golden(double cur, std::span<const double> hist, KdeParams params = {}) {
    return kde_golden_density(cur, hist, params.delta) < params.theta;
}

} // namespace stochmem
