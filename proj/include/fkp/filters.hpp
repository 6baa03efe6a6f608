#ifndef FKP_FILTERS_HPP
#define FKP_FILTERS_HPP

#include "fkp/image.hpp"

namespace fkp {

// Thresholded long-offset Sobel variant. d is the neighbor offset in pixels
// (classical Sobel would use d near 1), t the minimum luminance difference
// for a pixel to be marked.
struct SobelParams {
    int d = 4;
    int t = 8;

    bool operator==(const SobelParams&) const = default;
};

// Windowed popcount eraser: a set pixel survives only if its
// (2*ax+1) x (2*ay+1) neighborhood contains strictly more than t set pixels.
struct NoiseParams {
    int t = 13;
    int ax = 10;
    int ay = 10;

    bool operator==(const NoiseParams&) const = default;
};

struct PipelineParams {
    SobelParams shadow_sobel{4, 8};
    SobelParams light_sobel{4, 5};
    NoiseParams shadow_noise{13, 10, 10};
    NoiseParams light_noise{7, 5, 5};

    bool operator==(const PipelineParams&) const = default;
};

// Marks pixels whose four axis neighbors at offset d are all brighter than the
// center by more than t: dark valleys. Pixels closer than d to any border are
// never marked.
BinaryImage shadow_sobel(const GrayImage& img, const SobelParams& p);

// Mirror of shadow_sobel: center brighter than all four offset neighbors by
// more than t. Detects enlightened ridges. Same border rule.
BinaryImage light_sobel(const GrayImage& img, const SobelParams& p);

// One erosion pass of the windowed popcount test. Windows are clipped to the
// image bounds; output is always a pixelwise subset of the input.
BinaryImage noise_reduce_once(const BinaryImage& img, const NoiseParams& p);

// Chained passes with half-extents shrinking one step per pass until both
// reach 1; each pass consumes the previous output. The threshold is rescaled
// to the current window area so the required neighbor density stays the one
// implied by the initial (t, ax, ay).
BinaryImage noise_reduce_adaptive(const BinaryImage& img, const NoiseParams& p);

// Threshold used by noise_reduce_adaptive for the pass with extents (ax, ay):
// max(1, round(t * area(ax, ay) / area(initial))).
int adaptive_pass_threshold(const NoiseParams& initial, int ax, int ay);

// Runs both detectors plus their noise reduction independently; the two
// channels are never fused.
TemplatePair preprocess(const GrayImage& img, const PipelineParams& p);

// v -> 255 - v. Swaps the roles of the shadow and light detectors.
GrayImage invert(const GrayImage& img);

}  // namespace fkp

#endif
