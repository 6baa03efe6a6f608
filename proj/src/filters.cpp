#include "fkp/filters.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fkp {
namespace {

void check(const SobelParams& p) {
    if (p.d < 1) throw InvalidArgument("SobelParams: d must be >= 1 (got " + std::to_string(p.d) + ")");
    if (p.t < 0) throw InvalidArgument("SobelParams: t must be >= 0 (got " + std::to_string(p.t) + ")");
}

void check(const NoiseParams& p) {
    if (p.t < 1) throw InvalidArgument("NoiseParams: t must be >= 1 (got " + std::to_string(p.t) + ")");
    if (p.ax < 1 || p.ay < 1)
        throw InvalidArgument("NoiseParams: window half-extents must be >= 1");
}

enum class Valley { kDark, kBright };

// Shared core of the two detectors; only the sign of the comparison differs.
BinaryImage sobel_variant(const GrayImage& img, const SobelParams& p, Valley kind) {
    check(p);
    const int w = img.width(), h = img.height();
    const int d = p.d, t = p.t;
    BinaryImage out(w, h);
    for (int i = d; i + d < h; ++i) {
        for (int j = d; j + d < w; ++j) {
            const int c = img(i, j);
            const int up = img(i - d, j), down = img(i + d, j);
            const int left = img(i, j - d), right = img(i, j + d);
            bool hit;
            if (kind == Valley::kDark)
                hit = up - c > t && down - c > t && left - c > t && right - c > t;
            else
                hit = c - up > t && c - down > t && c - left > t && c - right > t;
            if (hit) out.set(i, j, true);
        }
    }
    return out;
}

// Inclusive-prefix table: sat[(i+1)*(w+1) + (j+1)] = set pixels in rows 0..i, cols 0..j.
std::vector<std::uint32_t> summed_area(const BinaryImage& img) {
    const int w = img.width(), h = img.height();
    std::vector<std::uint32_t> sat(static_cast<std::size_t>(w + 1) * (h + 1), 0);
    for (int i = 0; i < h; ++i) {
        std::uint32_t row_sum = 0;
        const std::size_t above = static_cast<std::size_t>(i) * (w + 1);
        const std::size_t here = static_cast<std::size_t>(i + 1) * (w + 1);
        for (int j = 0; j < w; ++j) {
            row_sum += img.get(i, j);
            sat[here + j + 1] = sat[above + j + 1] + row_sum;
        }
    }
    return sat;
}

}  // namespace

BinaryImage shadow_sobel(const GrayImage& img, const SobelParams& p) {
    return sobel_variant(img, p, Valley::kDark);
}

BinaryImage light_sobel(const GrayImage& img, const SobelParams& p) {
    return sobel_variant(img, p, Valley::kBright);
}

BinaryImage noise_reduce_once(const BinaryImage& img, const NoiseParams& p) {
    check(p);
    const int w = img.width(), h = img.height();
    const auto sat = summed_area(img);
    const std::size_t stride = static_cast<std::size_t>(w) + 1;
    BinaryImage out(w, h);
    img.for_each_set([&](int i, int j) {
        const int i0 = std::max(0, i - p.ay), i1 = std::min(h - 1, i + p.ay);
        const int j0 = std::max(0, j - p.ax), j1 = std::min(w - 1, j + p.ax);
        const std::uint32_t count = sat[(i1 + 1) * stride + (j1 + 1)] - sat[i0 * stride + (j1 + 1)] -
                                    sat[(i1 + 1) * stride + j0] + sat[i0 * stride + j0];
        if (count > static_cast<std::uint32_t>(p.t)) out.set(i, j, true);
    });
    return out;
}

int adaptive_pass_threshold(const NoiseParams& initial, int ax, int ay) {
    const double area0 = (2.0 * initial.ax + 1) * (2.0 * initial.ay + 1);
    const double area = (2.0 * ax + 1) * (2.0 * ay + 1);
    return static_cast<int>(std::max<long>(1, std::lround(initial.t * area / area0)));
}

BinaryImage noise_reduce_adaptive(const BinaryImage& img, const NoiseParams& p) {
    check(p);
    BinaryImage out = img;
    int ax = p.ax, ay = p.ay;
    for (;;) {
        out = noise_reduce_once(out, NoiseParams{adaptive_pass_threshold(p, ax, ay), ax, ay});
        if (ax == 1 && ay == 1) break;
        ax = std::max(1, ax - 1);
        ay = std::max(1, ay - 1);
    }
    return out;
}

TemplatePair preprocess(const GrayImage& img, const PipelineParams& p) {
    return TemplatePair{
        noise_reduce_adaptive(shadow_sobel(img, p.shadow_sobel), p.shadow_noise),
        noise_reduce_adaptive(light_sobel(img, p.light_sobel), p.light_noise),
    };
}

GrayImage invert(const GrayImage& img) {
    GrayImage out = img;
    for (auto& v : out.pixels()) v = static_cast<std::uint8_t>(255 - v);
    return out;
}

}  // namespace fkp
