#include "locboost/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace locboost {

ThresholdSweep::ThresholdSweep(std::vector<SweepImageView> images, SweepOptions options)
    : views_(std::move(images)), options_(options) {
    if (views_.empty()) throw std::invalid_argument("sweep needs at least one image");

    // Kernel stencil: offsets with strictly positive correlation, in the
    // same traversal order the batched evidence field uses.
    const int bound = options_.kernel.support_bound();
    for (int dy = -bound; dy <= bound; ++dy) {
        for (int dx = -bound; dx <= bound; ++dx) {
            const double c = options_.kernel.value_at_squared_distance(
                static_cast<std::int64_t>(dx) * dx + static_cast<std::int64_t>(dy) * dy);
            if (c > 0.0) stencil_.push_back({dx, dy, c});
        }
    }

    // Pooled histogram of H over every background pixel, and the cached
    // exponentials the incremental updates need.
    std::vector<double> bg_values;
    CompensatedSum v_all;
    CompensatedSum w_all;
    images_.resize(views_.size());
    for (std::size_t i = 0; i < views_.size(); ++i) {
        const SweepImageView& view = views_[i];
        if (view.field == nullptr || view.mask == nullptr) {
            throw std::invalid_argument("sweep image view is incomplete");
        }
        if (view.field->width() != view.mask->width() ||
            view.field->height() != view.mask->height()) {
            throw std::invalid_argument("sweep field and mask extents differ");
        }
        ImageContext& img = images_[i];
        img.width = view.field->width();
        img.height = view.field->height();
        img.h = view.field->values.cells().data();
        img.labels = view.mask->labels.cells().data();
        const std::size_t n = view.field->values.size();
        img.exp_h.resize(n);
        img.exp_neg_h.resize(n);
        img.bin_index.assign(n, -1);
        img.raw.assign(n, 0.0);
        img.epoch.assign(n, 0);
        for (std::size_t p = 0; p < n; ++p) {
            img.exp_h[p] = std::exp(img.h[p]);
            img.exp_neg_h[p] = std::exp(-img.h[p]);
            switch (img.labels[p]) {
            case PixelLabel::Background:
                bg_values.push_back(img.h[p]);
                w_all.add(img.exp_h[p]);
                ++total_background_;
                break;
            case PixelLabel::Object:
                v_all.add(img.exp_neg_h[p]);
                ++total_objects_;
                break;
            case PixelLabel::DontCare:
                break;
            }
        }
    }
    v_all_ = v_all.value();
    w_all_ = w_all.value();

    std::sort(bg_values.begin(), bg_values.end());
    for (double h : bg_values) {
        if (bin_key_.empty() || bin_key_.back() != h) {
            bin_key_.push_back(h);
            bin_count_.push_back(0.0);
        }
        bin_count_.back() += 1.0;
    }
    bin_exp_.resize(bin_key_.size());
    for (std::size_t i = 0; i < bin_key_.size(); ++i) bin_exp_[i] = std::exp(bin_key_[i]);
    first_nonneg_bin_ =
        std::lower_bound(bin_key_.begin(), bin_key_.end(), 0.0) - bin_key_.begin();
    removed_.assign(bin_key_.size(), 0.0);

    for (std::size_t i = 0; i < views_.size(); ++i) {
        ImageContext& img = images_[i];
        const std::size_t n = img.exp_h.size();
        for (std::size_t p = 0; p < n; ++p) {
            if (img.labels[p] == PixelLabel::Background) {
                img.bin_index[p] = static_cast<std::int32_t>(
                    std::lower_bound(bin_key_.begin(), bin_key_.end(), img.h[p]) -
                    bin_key_.begin());
            }
        }
    }
}

void ThresholdSweep::reset_candidate_state() {
    ++epoch_;
    pooled_.clear();
    for (std::size_t bin : touched_bins_) removed_[bin] = 0.0;
    touched_bins_.clear();
    cells_.clear();
    v_cur_.reset();
    v_cur_.add(v_all_);
    fg_weighted_.reset();
    fg_plain_.reset();
    a0_weighted_.reset();
    a0_plain_.reset();
    a0_count_ = 0.0;
    fg_pos_count_ = 0;
    bg_pos_count_ = 0;
    removed_w_.reset();
    smooth_bg_weighted_.reset();
    smooth_bg_plain_.reset();
}

void ThresholdSweep::apply_delta(ImageContext& img, std::size_t idx, PixelLabel label,
                                 double old_f, double new_f) {
    const bool entered = old_f == 0.0;
    if (label == PixelLabel::Object) {
        const double e = img.exp_neg_h[idx];
        if (entered) {
            ++fg_pos_count_;
            v_cur_.subtract(e);
            fg_weighted_.add(e * new_f);
            fg_plain_.add(e * (1.0 - new_f));
        } else {
            fg_weighted_.add(e * (new_f - old_f));
            fg_plain_.subtract(e * (new_f - old_f));
        }
        return;
    }
    const double e = img.exp_h[idx];
    const double h = img.h[idx];
    if (options_.loss_mode == LossMode::Smooth) {
        if (entered) {
            ++bg_pos_count_;
            removed_w_.add(e);
            smooth_bg_weighted_.add(e * new_f);
            smooth_bg_plain_.add(e * (1.0 - new_f));
        } else {
            smooth_bg_weighted_.add(e * (new_f - old_f));
            smooth_bg_plain_.subtract(e * (new_f - old_f));
        }
        return;
    }
    if (entered) {
        ++bg_pos_count_;
        const auto bin = static_cast<std::size_t>(img.bin_index[idx]);
        if (removed_[bin] == 0.0) touched_bins_.push_back(bin);
        removed_[bin] += 1.0;
        if (h >= 0.0) {
            a0_weighted_.add(e * new_f);
            a0_plain_.add(e * (1.0 - new_f));
            a0_count_ += 1.0;
        } else {
            AlphaCell& cell = cells_[-h / new_f];
            cell.weighted += e * new_f;
            cell.plain += e * (1.0 - new_f);
            cell.count += 1.0;
        }
    } else {
        if (h >= 0.0) {
            a0_weighted_.add(e * (new_f - old_f));
            a0_plain_.subtract(e * (new_f - old_f));
        } else {
            auto it = cells_.find(-h / old_f);
            it->second.weighted -= e * old_f;
            it->second.plain -= e * (1.0 - old_f);
            it->second.count -= 1.0;
            if (it->second.count <= 0.0) cells_.erase(it);
            AlphaCell& cell = cells_[-h / new_f];
            cell.weighted += e * new_f;
            cell.plain += e * (1.0 - new_f);
            cell.count += 1.0;
        }
    }
}

void ThresholdSweep::admit(int image, int x, int y) {
    ImageContext& img = images_[static_cast<std::size_t>(image)];
    const bool capped = options_.mode == EvidenceMode::Capped;
    for (const StencilEntry& s : stencil_) {
        const int px = x + s.dx;
        const int py = y + s.dy;
        if (px < 0 || px >= img.width || py < 0 || py >= img.height) continue;
        const std::size_t idx =
            static_cast<std::size_t>(py) * static_cast<std::size_t>(img.width) + px;
        const PixelLabel label = img.labels[idx];
        if (label == PixelLabel::DontCare) continue;
        if (img.epoch[idx] != epoch_) {
            img.epoch[idx] = epoch_;
            img.raw[idx] = 0.0;
        }
        const double old_raw = img.raw[idx];
        const double old_f = capped ? std::min(1.0, old_raw) : old_raw;
        const double new_raw = capped ? old_raw + s.c : std::max(old_raw, s.c);
        const double new_f = capped ? std::min(1.0, new_raw) : new_raw;
        img.raw[idx] = new_raw;
        if (new_f == old_f) continue;
        apply_delta(img, idx, label, old_f, new_f);
    }
}

SweepStep ThresholdSweep::evaluate(double theta) {
    SweepStep step;
    step.theta = theta;
    const double b = options_.discount;
    const std::size_t fg_zero_count = total_objects_ - fg_pos_count_;
    const std::size_t bg_zero_count = total_background_ - bg_pos_count_;

    if (options_.loss_mode == LossMode::Smooth) {
        const double v = fg_zero_count == 0 ? 0.0 : v_cur_.value();
        const double w = bg_zero_count == 0 ? 0.0 : w_all_ - removed_w_.value();
        double s = 0.0;
        if (v > 0.0 && w > 0.0) {
            s = clamp_to(0.5 * std::log(b * w / v), 0.0, options_.shift_max);
        } else if (w > 0.0) {
            s = options_.shift_max;
        }
        step.shift = s;
        step.shift_loss = v * std::exp(s) + b * w * std::exp(-s);

        const double fg_w = fg_weighted_.value();
        const double fg_p = fg_plain_.value();
        const double bg_w = smooth_bg_weighted_.value();
        const double bg_p = smooth_bg_plain_.value();
        if (fg_pos_count_ == 0) {
            step.alpha = 0.0;
            step.alpha_loss = b * (bg_w + bg_p);
        } else if (bg_pos_count_ == 0) {
            step.alpha = options_.alpha_max;
            step.alpha_loss = fg_p + fg_w * std::exp(-options_.alpha_max);
        } else {
            step.alpha = clamp_to(0.5 * std::log(fg_w / (b * bg_w)), 0.0, options_.alpha_max);
            step.alpha_loss = fg_p + fg_w * std::exp(-step.alpha) +
                              b * (bg_p + bg_w * std::exp(step.alpha));
        }
        step.bound = step.shift_loss + step.alpha_loss;
        return step;
    }

    // shift: either the exact-zero case or a segment walk over the
    // effective (not yet admitted) background bins
    if (fg_zero_count == 0) {
        double s = 0.0;
        for (std::size_t i = bin_key_.size(); i-- > 0;) {
            if (bin_count_[i] - removed_[i] > 0.0) {
                s = std::max(0.0, bin_key_[i]);
                break;
            }
        }
        step.shift = s;
        step.shift_loss = 0.0;
    } else {
        walk_scratch_.clear();
        for (std::size_t i = first_nonneg_bin_; i < bin_key_.size(); ++i) {
            const double count = bin_count_[i] - removed_[i];
            if (count > 0.0) {
                walk_scratch_.push_back({bin_key_[i], count * bin_exp_[i], 0.0, count});
            }
        }
        const ShiftResult r = detail::shift_walk(walk_scratch_, v_cur_.value(), b);
        step.shift = r.shift;
        step.shift_loss = r.loss;
    }

    // alpha: special cases mirror the standalone optimizer
    if (fg_pos_count_ == 0) {
        step.alpha = 0.0;
        step.alpha_loss = b * (a0_weighted_.value() + a0_plain_.value() - a0_count_);
    } else if (bg_pos_count_ == 0) {
        step.alpha = options_.alpha_max;
        step.alpha_loss =
            fg_plain_.value() + fg_weighted_.value() * std::exp(-options_.alpha_max);
    } else {
        walk_scratch_.clear();
        for (const auto& [key, cell] : cells_) {
            walk_scratch_.push_back({key, cell.weighted, cell.plain, cell.count});
        }
        const AlphaResult r = detail::alpha_walk(
            walk_scratch_, a0_weighted_.value(), a0_plain_.value(), a0_count_,
            fg_weighted_.value(), fg_plain_.value(), b, options_.alpha_max);
        step.alpha = r.alpha;
        step.alpha_loss = r.loss;
    }
    step.bound = step.shift_loss + step.alpha_loss;
    return step;
}

SweepResult ThresholdSweep::run(std::span<const std::vector<ScoredLocation>> detections,
                                std::vector<SweepStep>* trace) {
    if (detections.size() != images_.size()) {
        throw std::invalid_argument("sweep: detection list count differs from image count");
    }
    reset_candidate_state();
    for (std::size_t i = 0; i < detections.size(); ++i) {
        const ImageContext& img = images_[i];
        for (const ScoredLocation& d : detections[i]) {
            if (d.x < 0 || d.x >= img.width || d.y < 0 || d.y >= img.height) {
                throw std::invalid_argument("sweep: detection outside image extent");
            }
            pooled_.push_back({d.confidence, static_cast<int>(i), d.y, d.x});
        }
    }
    std::sort(pooled_.begin(), pooled_.end(), [](const PooledDetection& a,
                                                 const PooledDetection& b) {
        if (a.confidence != b.confidence) return a.confidence > b.confidence;
        if (a.image != b.image) return a.image < b.image;
        if (a.y != b.y) return a.y < b.y;
        return a.x < b.x;
    });

    // theta above every confidence: nothing admitted, shift-only hypothesis
    SweepStep best_step = evaluate(std::numeric_limits<double>::infinity());
    if (trace) trace->push_back(best_step);

    std::size_t i = 0;
    while (i < pooled_.size()) {
        const double level = pooled_[i].confidence;
        // Equal confidences enter simultaneously.
        while (i < pooled_.size() && pooled_[i].confidence == level) {
            admit(pooled_[i].image, pooled_[i].x, pooled_[i].y);
            ++i;
        }
        const SweepStep step = evaluate(level);
        if (trace) trace->push_back(step);
        if (step.bound < best_step.bound) best_step = step;
    }

    return {best_step.theta, best_step.alpha, best_step.shift, best_step.bound};
}

SweepResult sweep_thresholds(std::span<const ScoredLocation> detections,
                             const ObjectnessField& field, const TrainingMask& mask,
                             const SweepOptions& options, std::vector<SweepStep>* trace) {
    ThresholdSweep sweep({{&field, &mask}}, options);
    std::vector<std::vector<ScoredLocation>> lists(1);
    lists[0].assign(detections.begin(), detections.end());
    return sweep.run(lists, trace);
}

} // namespace locboost
