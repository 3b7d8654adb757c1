// Test-side oracles: brute-force and direct-formula evaluators kept
// independent of the closed-form optimizer implementations they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "locboost/loss.hpp"
#include "locboost/rng.hpp"

namespace locboost::test {

// ---- direct loss-formula evaluators -------------------------------------

// V e^s + b * sum over bg0 of max{0, e^(H - s) - 1}
inline double direct_shift_loss(const LossPartition& p, double b, double s) {
    double loss = 0.0;
    for (double h : p.fg_zero_h) loss += std::exp(-h) * std::exp(s);
    for (double h : p.bg_zero_h) loss += b * std::max(0.0, std::exp(h) * std::exp(-s) - 1.0);
    return loss;
}

// sum over fg+ of e^(-H - alpha f) + b * sum over bg+ of max{0, e^(H + alpha f) - 1}
inline double direct_alpha_loss(const LossPartition& p, double b, double alpha) {
    double loss = 0.0;
    for (const PixelTerm& t : p.fg_pos) loss += std::exp(-t.h - alpha * t.f);
    for (const PixelTerm& t : p.bg_pos) {
        loss += b * std::max(0.0, std::exp(t.h + alpha * t.f) - 1.0);
    }
    return loss;
}

// The linearized overestimate: exp(+-alpha f) -> 1 - f + f exp(+-alpha),
// with a background term active once e^(H + alpha f) would exceed 1.
inline double direct_alpha_overestimate(const LossPartition& p, double b, double alpha) {
    double loss = 0.0;
    for (const PixelTerm& t : p.fg_pos) {
        loss += std::exp(-t.h) * (1.0 - t.f + t.f * std::exp(-alpha));
    }
    for (const PixelTerm& t : p.bg_pos) {
        const bool active = t.h >= 0.0 || alpha > -t.h / t.f;
        if (active) {
            loss += b * (std::exp(t.h) * (1.0 - t.f + t.f * std::exp(alpha)) - 1.0);
        }
    }
    return loss;
}

// ---- grid searches --------------------------------------------------------

struct GridMinimum {
    double argmin = 0.0;
    double loss = 0.0;
};

// Exhaustive minimum of the shift loss on [0, s_max] with the given step.
// Exponentials are factored per pixel and per grid point, so the scan is
// multiplies only; it is still a literal evaluation of the loss formula.
inline GridMinimum grid_shift_loss(const LossPartition& p, double b, double s_max,
                                   double step) {
    std::vector<double> exp_h;
    exp_h.reserve(p.bg_zero_h.size());
    for (double h : p.bg_zero_h) exp_h.push_back(std::exp(h));
    double v = 0.0;
    for (double h : p.fg_zero_h) v += std::exp(-h);

    GridMinimum best;
    best.loss = std::numeric_limits<double>::infinity();
    const auto steps = static_cast<long>(std::llround(s_max / step));
    for (long i = 0; i <= steps; ++i) {
        const double s = static_cast<double>(i) * step;
        const double es = std::exp(s);
        const double ens = 1.0 / es;
        double loss = v * es;
        for (double eh : exp_h) {
            const double excess = eh * ens - 1.0;
            if (excess > 0.0) loss += b * excess;
        }
        if (loss < best.loss) best = {s, loss};
    }
    return best;
}

// Exhaustive minimum of the exact flat-kernel alpha loss on [0, alpha_max].
inline GridMinimum grid_alpha_loss_flat(const LossPartition& p, double b, double alpha_max,
                                        double step) {
    std::vector<double> exp_h;
    exp_h.reserve(p.bg_pos.size());
    for (const PixelTerm& t : p.bg_pos) exp_h.push_back(std::exp(t.h));
    double f_sum = 0.0;
    for (const PixelTerm& t : p.fg_pos) f_sum += std::exp(-t.h);

    GridMinimum best;
    best.loss = std::numeric_limits<double>::infinity();
    const auto steps = static_cast<long>(std::llround(alpha_max / step));
    for (long i = 0; i <= steps; ++i) {
        const double a = static_cast<double>(i) * step;
        const double ea = std::exp(a);
        double loss = f_sum / ea;
        for (double eh : exp_h) {
            const double excess = eh * ea - 1.0;
            if (excess > 0.0) loss += b * excess;
        }
        if (loss < best.loss) best = {a, loss};
    }
    return best;
}

// ---- random instances -----------------------------------------------------

// Randomized zero-set partition (criterion protocol: sizes in [0, 20] and
// [0, 50], H uniform in [-3, 3]).
inline LossPartition random_zero_partition(Rng& rng, int max_fg = 20, int max_bg = 50) {
    LossPartition p;
    const int nfg = rng.next_int(0, max_fg);
    const int nbg = rng.next_int(0, max_bg);
    for (int i = 0; i < nfg; ++i) p.fg_zero_h.push_back(rng.next_real(-3.0, 3.0));
    for (int i = 0; i < nbg; ++i) p.bg_zero_h.push_back(rng.next_real(-3.0, 3.0));
    p.refresh_v();
    return p;
}

// Randomized positive-set partition; flat instances use f = 1, otherwise f
// is uniform in (0, 1].
inline LossPartition random_positive_partition(Rng& rng, bool flat, int max_fg = 20,
                                               int max_bg = 50) {
    LossPartition p;
    const int nfg = rng.next_int(0, max_fg);
    const int nbg = rng.next_int(0, max_bg);
    for (int i = 0; i < nfg; ++i) {
        const double f = flat ? 1.0 : 1.0 - rng.next_real01();
        p.fg_pos.push_back({rng.next_real(-3.0, 3.0), f});
    }
    for (int i = 0; i < nbg; ++i) {
        const double f = flat ? 1.0 : 1.0 - rng.next_real01();
        p.bg_pos.push_back({rng.next_real(-3.0, 3.0), f});
    }
    p.refresh_v();
    return p;
}

inline double pick_discount(Rng& rng) {
    switch (rng.next_int(0, 2)) {
    case 0: return 0.01;
    case 1: return 0.1;
    default: return 1.0;
    }
}

inline bool close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

inline bool close_abs(double a, double b, double tol) { return std::abs(a - b) <= tol; }

} // namespace locboost::test
