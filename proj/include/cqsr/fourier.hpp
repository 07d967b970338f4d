#pragma once

#include <vector>

#include "cqsr/types.hpp"

namespace cqsr::fourier {

// One additive sinusoidal term: a frequency 2-vector (half-cycles per local
// cell unit) plus cosine/sine RGB amplitude 3-vectors.
struct FourierComponent {
    Vec2 freq{0.0, 0.0};
    Vec3 amp_cos{0.0, 0.0, 0.0};
    Vec3 amp_sin{0.0, 0.0, 0.0};
};

// Ordered component list plus a DC color term. Order is prediction order:
// recurrence-major, then within-step slot index.
struct ComponentSet {
    std::vector<FourierComponent> components;
    Vec3 dc{0.0, 0.0, 0.0};
};

// The K frequency vectors emitted at one recurrence step.
struct FrequencyGroup {
    std::vector<Vec2> freqs;
};

inline constexpr double kAlignEps = 1e-8;

// dc + sum_t [ amp_cos_t * cos(pi f_t . delta) + amp_sin_t * sin(pi f_t . delta) ].
// Output is not clamped; rejects non-finite inputs naming the offending field.
Vec3 reconstruct_rgb(const ComponentSet& set, const Vec2& offset);

// Shared component set evaluated at many offsets.
std::vector<Vec3> reconstruct_batch(const ComponentSet& set, const std::vector<Vec2>& offsets);

// One component set per offset; lengths must match.
std::vector<Vec3> reconstruct_batch(const std::vector<ComponentSet>& sets, const std::vector<Vec2>& offsets);

// Keeps the min(T, N) components with largest ||(amp_cos, amp_sin)||_2, ties
// broken by original index (earlier wins). Output is in descending-magnitude
// order; dc is retained unchanged.
ComponentSet truncate_top_t(const ComponentSet& set, int t);

double component_magnitude(const FourierComponent& c);

// Eq.-style negative mean pairwise cosine similarity among the frequencies of
// each group, averaged over groups. Groups of size 1 contribute 0. Empty
// input returns 0. With `use_abs`, |cos| is used instead of the signed cosine.
double alignment_loss(const std::vector<FrequencyGroup>& groups, bool use_abs = false, double eps = kAlignEps);

// Centered log(1 + |DFT|) magnitude of a single-channel image.
Plane amplitude_spectrum(const Plane& image);

// Centered raw |DFT| magnitudes (no log); Parseval-consistent with the input.
Plane amplitude_spectrum_raw(const Plane& image);

// ---- gradients (analytic; consumed by the training loop) ----

struct ComponentGrad {
    Vec2 freq{0.0, 0.0};
    Vec3 amp_cos{0.0, 0.0, 0.0};
    Vec3 amp_sin{0.0, 0.0, 0.0};
};

struct ComponentSetGrad {
    std::vector<ComponentGrad> components;
    Vec3 dc{0.0, 0.0, 0.0};
};

// Accumulates d(loss)/d(set fields) given d(loss)/d(rgb) at one offset.
// `grad` must be pre-sized to match `set`.
void reconstruct_rgb_backward(const ComponentSet& set, const Vec2& offset, const Vec3& d_rgb,
                              ComponentSetGrad& grad);

// Accumulates d(scale * alignment_loss)/d(freqs) into `grad_freqs`, which must
// mirror the shape of `groups`.
void alignment_loss_backward(const std::vector<FrequencyGroup>& groups, double scale,
                             std::vector<std::vector<Vec2>>& grad_freqs, bool use_abs = false,
                             double eps = kAlignEps);

}  // namespace cqsr::fourier
