#include "locboost/loss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "locboost/numeric.hpp"

namespace locboost {

TrainingMask make_training_mask(int width, int height, std::span<const Location> centers,
                                double dont_care_radius,
                                std::optional<double> discount_override) {
    if (dont_care_radius < 0.0) {
        throw std::invalid_argument("don't-care radius must be non-negative");
    }
    TrainingMask mask;
    mask.labels = Raster<PixelLabel>(width, height, PixelLabel::Background);
    mask.dont_care_radius = dont_care_radius;

    for (const Location& c : centers) {
        if (!mask.labels.contains(c.x, c.y)) {
            throw std::invalid_argument("object center outside image extent");
        }
    }

    // Don't-care disc around each center; the centers themselves are painted
    // Object afterwards and override it.
    const int bound = static_cast<int>(std::floor(dont_care_radius));
    const double radius_sq = dont_care_radius * dont_care_radius;
    for (const Location& c : centers) {
        const int y0 = std::max(0, c.y - bound);
        const int y1 = std::min(height - 1, c.y + bound);
        const int x0 = std::max(0, c.x - bound);
        const int x1 = std::min(width - 1, c.x + bound);
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                if (static_cast<double>(squared_distance({x, y}, c)) <= radius_sq) {
                    mask.labels.at(x, y) = PixelLabel::DontCare;
                }
            }
        }
    }
    for (const Location& c : centers) {
        if (mask.labels.at(c.x, c.y) != PixelLabel::Object) {
            mask.labels.at(c.x, c.y) = PixelLabel::Object;
            mask.centers.push_back(c);
        }
    }

    mask.object_count = mask.centers.size();
    std::size_t bg = 0;
    for (PixelLabel label : mask.labels.cells()) {
        if (label == PixelLabel::Background) ++bg;
    }
    mask.background_count = bg;

    if (discount_override) {
        if (!(*discount_override > 0.0)) {
            throw std::invalid_argument("background discount must be positive");
        }
        mask.discount = *discount_override;
    } else if (bg == 0) {
        mask.discount = 1.0; // no background, the discount is never used
    } else {
        mask.discount = static_cast<double>(mask.object_count) / static_cast<double>(bg);
    }
    return mask;
}

namespace {

void require_same_extent(const ObjectnessField& field, const TrainingMask& mask) {
    if (field.width() != mask.width() || field.height() != mask.height()) {
        throw std::invalid_argument("field and mask extents differ");
    }
}

} // namespace

double foreground_loss(const ObjectnessField& field, const TrainingMask& mask) {
    require_same_extent(field, mask);
    CompensatedSum sum;
    for (const Location& c : mask.centers) {
        sum.add(std::exp(-field.at(c.x, c.y)));
    }
    return sum.value();
}

double background_loss(const ObjectnessField& field, const TrainingMask& mask) {
    require_same_extent(field, mask);
    CompensatedSum sum;
    const auto& labels = mask.labels.cells();
    const auto& values = field.values.cells();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != PixelLabel::Background) continue;
        const double excess = std::exp(values[i]) - 1.0;
        if (excess > 0.0) sum.add(excess);
    }
    return mask.discount * sum.value();
}

double smooth_loss(const ObjectnessField& field, const TrainingMask& mask) {
    require_same_extent(field, mask);
    CompensatedSum bg;
    const auto& labels = mask.labels.cells();
    const auto& values = field.values.cells();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == PixelLabel::Background) bg.add(std::exp(values[i]));
    }
    return foreground_loss(field, mask) + mask.discount * bg.value();
}

void LossPartition::refresh_v() {
    CompensatedSum sum;
    for (double h : fg_zero_h) sum.add(std::exp(-h));
    v = fg_zero_h.empty() ? 0.0 : sum.value();
}

LossPartition build_partition(const ObjectnessField& field, const EvidenceField& evidence,
                              const TrainingMask& mask) {
    require_same_extent(field, mask);
    LossPartition p;
    const auto& labels = mask.labels.cells();
    const auto& values = field.values.cells();
    const int w = mask.width();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const PixelLabel label = labels[i];
        if (label == PixelLabel::DontCare) continue;
        const double h = values[i];
        const double f = evidence.at(static_cast<int>(i % w), static_cast<int>(i / w));
        if (label == PixelLabel::Object) {
            if (f > 0.0) {
                p.fg_pos.push_back({h, f});
            } else {
                p.fg_zero_h.push_back(h);
            }
        } else {
            if (f > 0.0) {
                p.bg_pos.push_back({h, f});
            } else {
                p.bg_zero_h.push_back(h);
            }
        }
    }
    p.refresh_v();
    return p;
}

namespace detail {

ShiftResult shift_walk(std::span<const WalkBin> bins, double v, double discount) {
    // Top segment [k_n, inf): no hinge active, V e^s is increasing.
    ShiftResult best;
    best.shift = bins.empty() ? 0.0 : bins.back().key;
    best.loss = v * std::exp(best.shift);
    double suffix_weighted = 0.0;
    double suffix_count = 0.0;
    for (std::size_t j = bins.size(); j-- > 0;) {
        suffix_weighted += bins[j].weighted;
        suffix_count += bins[j].count;
        const double lo = j > 0 ? bins[j - 1].key : 0.0;
        const double hi = bins[j].key;
        const double unconstrained = 0.5 * std::log(discount * suffix_weighted / v);
        const double s = clamp_to(unconstrained, lo, hi);
        const double loss =
            v * std::exp(s) + discount * (suffix_weighted * std::exp(-s) - suffix_count);
        if (loss < best.loss) best = {s, loss};
    }
    return best;
}

AlphaResult alpha_walk(std::span<const WalkBin> cells, double a0_weighted, double a0_plain,
                       double a0_count, double fg_weighted, double fg_plain, double discount,
                       double alpha_max) {
    AlphaResult best;
    best.loss = std::numeric_limits<double>::infinity();
    double pre_weighted = a0_weighted;
    double pre_plain = a0_plain;
    double pre_count = a0_count;
    for (std::size_t j = 0; j <= cells.size(); ++j) {
        if (j > 0) {
            pre_weighted += cells[j - 1].weighted;
            pre_plain += cells[j - 1].plain;
            pre_count += cells[j - 1].count;
        }
        const double lo = j == 0 ? 0.0 : cells[j - 1].key;
        if (lo >= alpha_max && j > 0) break;
        const double hi = j < cells.size() ? std::min(cells[j].key, alpha_max) : alpha_max;
        double a;
        if (pre_weighted > 0.0) {
            a = clamp_to(0.5 * std::log(fg_weighted / (discount * pre_weighted)), lo, hi);
        } else {
            a = hi; // no active background terms yet, objective still decreasing
        }
        const double loss = fg_plain + fg_weighted * std::exp(-a) +
                            discount * (pre_plain + pre_weighted * std::exp(a) - pre_count);
        if (loss < best.loss) best = {a, loss};
    }
    return best;
}

AlphaResult alpha_flat_walk(std::span<const WalkBin> bins, double a0_weighted, double a0_count,
                            double fg_sum, double discount, double alpha_max) {
    AlphaResult best;
    best.loss = std::numeric_limits<double>::infinity();
    double pre_weighted = a0_weighted;
    double pre_count = a0_count;
    for (std::size_t j = 0; j <= bins.size(); ++j) {
        if (j > 0) {
            pre_weighted += bins[j - 1].weighted;
            pre_count += bins[j - 1].count;
        }
        const double lo = j == 0 ? 0.0 : bins[j - 1].key;
        if (lo >= alpha_max && j > 0) break;
        const double hi = j < bins.size() ? std::min(bins[j].key, alpha_max) : alpha_max;
        double a;
        if (pre_weighted > 0.0) {
            a = clamp_to(0.5 * std::log(fg_sum / (discount * pre_weighted)), lo, hi);
        } else {
            a = hi;
        }
        const double loss =
            fg_sum * std::exp(-a) + discount * (pre_weighted * std::exp(a) - pre_count);
        if (loss < best.loss) best = {a, loss};
    }
    return best;
}

} // namespace detail

namespace {

// Groups sorted (key, weighted, plain) triples into distinct-key bins.
template <typename Extract>
std::vector<detail::WalkBin> group_bins(std::vector<std::pair<double, PixelTerm>>& entries,
                                        Extract extract) {
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<detail::WalkBin> bins;
    for (const auto& [key, term] : entries) {
        if (bins.empty() || bins.back().key != key) {
            bins.push_back({key, 0.0, 0.0, 0.0});
        }
        const auto [weighted, plain] = extract(term);
        bins.back().weighted += weighted;
        bins.back().plain += plain;
        bins.back().count += 1.0;
    }
    return bins;
}

} // namespace

ShiftResult optimize_shift(const LossPartition& partition, double discount) {
    if (partition.fg_zero_h.empty()) {
        // No false negatives: the loss is exactly zero once the shift clears
        // every uncovered background value.
        double s = 0.0;
        for (double h : partition.bg_zero_h) s = std::max(s, h);
        return {s, 0.0};
    }
    const double v = partition.v;
    // Distinct non-negative background values; hinges at negative values are
    // inactive for every s >= 0.
    std::vector<double> keys;
    keys.reserve(partition.bg_zero_h.size());
    for (double h : partition.bg_zero_h) {
        if (h >= 0.0) keys.push_back(h);
    }
    if (keys.empty()) return {0.0, v};
    std::sort(keys.begin(), keys.end());
    std::vector<detail::WalkBin> bins;
    for (double k : keys) {
        if (bins.empty() || bins.back().key != k) bins.push_back({k, 0.0, 0.0, 0.0});
        bins.back().count += 1.0;
    }
    for (auto& bin : bins) bin.weighted = bin.count * std::exp(bin.key);
    return detail::shift_walk(bins, v, discount);
}

AlphaResult optimize_alpha(const LossPartition& partition, double discount, double alpha_max) {
    if (!(alpha_max > 0.0)) throw std::invalid_argument("alpha_max must be positive");
    if (partition.fg_pos.empty()) {
        // Hits bring no benefit; the loss at alpha = 0 counts only the
        // already-active background terms.
        CompensatedSum loss0;
        for (const PixelTerm& t : partition.bg_pos) {
            if (t.h >= 0.0) loss0.add(std::exp(t.h) - 1.0);
        }
        return {0.0, discount * loss0.value()};
    }
    CompensatedSum fg_weighted;
    CompensatedSum fg_plain;
    for (const PixelTerm& t : partition.fg_pos) {
        const double e = std::exp(-t.h);
        fg_weighted.add(e * t.f);
        fg_plain.add(e * (1.0 - t.f));
    }
    if (partition.bg_pos.empty()) {
        const double loss = fg_plain.value() + fg_weighted.value() * std::exp(-alpha_max);
        return {alpha_max, loss};
    }
    double a0_weighted = 0.0;
    double a0_plain = 0.0;
    double a0_count = 0.0;
    std::vector<std::pair<double, PixelTerm>> negatives;
    for (const PixelTerm& t : partition.bg_pos) {
        if (t.h >= 0.0) {
            const double e = std::exp(t.h);
            a0_weighted += e * t.f;
            a0_plain += e * (1.0 - t.f);
            a0_count += 1.0;
        } else {
            negatives.emplace_back(-t.h / t.f, t);
        }
    }
    const std::vector<detail::WalkBin> cells = group_bins(negatives, [](const PixelTerm& t) {
        const double e = std::exp(t.h);
        return std::pair<double, double>{e * t.f, e * (1.0 - t.f)};
    });
    return detail::alpha_walk(cells, a0_weighted, a0_plain, a0_count, fg_weighted.value(),
                              fg_plain.value(), discount, alpha_max);
}

AlphaResult optimize_alpha_flat(const LossPartition& partition, double discount,
                                double alpha_max) {
    if (!(alpha_max > 0.0)) throw std::invalid_argument("alpha_max must be positive");
    for (const PixelTerm& t : partition.fg_pos) {
        if (t.f != 1.0) throw std::invalid_argument("flat alpha optimizer needs f in {0, 1}");
    }
    for (const PixelTerm& t : partition.bg_pos) {
        if (t.f != 1.0) throw std::invalid_argument("flat alpha optimizer needs f in {0, 1}");
    }
    if (partition.fg_pos.empty()) {
        CompensatedSum loss0;
        for (const PixelTerm& t : partition.bg_pos) {
            if (t.h >= 0.0) loss0.add(std::exp(t.h) - 1.0);
        }
        return {0.0, discount * loss0.value()};
    }
    CompensatedSum fg_sum;
    for (const PixelTerm& t : partition.fg_pos) fg_sum.add(std::exp(-t.h));
    if (partition.bg_pos.empty()) {
        return {alpha_max, fg_sum.value() * std::exp(-alpha_max)};
    }
    double a0_weighted = 0.0;
    double a0_count = 0.0;
    std::vector<std::pair<double, PixelTerm>> negatives;
    for (const PixelTerm& t : partition.bg_pos) {
        if (t.h >= 0.0) {
            a0_weighted += std::exp(t.h);
            a0_count += 1.0;
        } else {
            negatives.emplace_back(-t.h, t);
        }
    }
    const std::vector<detail::WalkBin> bins = group_bins(negatives, [](const PixelTerm& t) {
        return std::pair<double, double>{std::exp(t.h), 0.0};
    });
    return detail::alpha_flat_walk(bins, a0_weighted, a0_count, fg_sum.value(), discount,
                                   alpha_max);
}

double shift_loss_at(const LossPartition& partition, double discount, double shift) {
    CompensatedSum hinge;
    for (double h : partition.bg_zero_h) {
        const double excess = std::exp(h - shift) - 1.0;
        if (excess > 0.0) hinge.add(excess);
    }
    return partition.v * std::exp(shift) + discount * hinge.value();
}

double true_alpha_loss_at(const LossPartition& partition, double discount, double alpha) {
    CompensatedSum fg;
    for (const PixelTerm& t : partition.fg_pos) fg.add(std::exp(-t.h - alpha * t.f));
    CompensatedSum bg;
    for (const PixelTerm& t : partition.bg_pos) {
        const double excess = std::exp(t.h + alpha * t.f) - 1.0;
        if (excess > 0.0) bg.add(excess);
    }
    return fg.value() + discount * bg.value();
}

double smooth_shift_loss_at(const LossPartition& partition, double discount, double shift) {
    CompensatedSum bg;
    for (double h : partition.bg_zero_h) bg.add(std::exp(h - shift));
    return partition.v * std::exp(shift) + discount * bg.value();
}

double smooth_alpha_loss_at(const LossPartition& partition, double discount, double alpha) {
    CompensatedSum fg;
    for (const PixelTerm& t : partition.fg_pos) fg.add(std::exp(-t.h - alpha * t.f));
    CompensatedSum bg;
    for (const PixelTerm& t : partition.bg_pos) bg.add(std::exp(t.h + alpha * t.f));
    return fg.value() + discount * bg.value();
}

} // namespace locboost
