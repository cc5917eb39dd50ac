#pragma once

#include <cstdint>
#include <vector>

#include "opuc/measures.hpp"

namespace opuc {

struct PointSample {
    std::vector<double> angles;  // sorted, exactly n entries
    std::uint64_t seed = 0;
    std::int64_t sample_index = 0;
    struct Diagnostics {
        int grid = 0;                 // grid cells actually used (after refinement)
        int renormalizations = 0;     // draws whose residual mass needed renormalizing
        double max_mass_deviation = 0.0;
    } diagnostics;
};

/// Exact sequential sampling of the n-point orthogonal polynomial ensemble
/// (projection DPP with the CD kernel). Each 1-D draw uses grid inverse-CDF
/// over the residual density (K_n(t,t) - sum_i |<f(t), e_i>|^2) w(t)/(n-k),
/// with one refinement pass splitting the 64 highest-mass cells. Atoms of the
/// measure enter as exact point cells. grid = 0 selects a resolution adapted
/// to n (the kernel oscillates on the scale 1/n).
PointSample sample_ope(const CircleMeasure& mu, const VerblunskySequence& seq, std::int64_t n,
                       std::uint64_t seed, std::int64_t sample_index, int grid = 0);

/// count independent samples; sample i uses stream(seed, i). Output identical
/// for any worker count.
std::vector<PointSample> batch_sample(const CircleMeasure& mu, const VerblunskySequence& seq,
                                      std::int64_t n, std::uint64_t seed, std::int64_t count,
                                      int workers = 0, int grid = 0);

}  // namespace opuc
