// Naive reference implementations used as independent oracles. These stay
// deliberately close to the defining formulas (per-pixel loops, pairwise point
// scans) and share no code with the optimized library paths they check.
#ifndef FKP_TESTS_ORACLES_HPP
#define FKP_TESTS_ORACLES_HPP

#include "fkp/filters.hpp"
#include "fkp/image.hpp"
#include "fkp/similarity.hpp"

namespace fkp::oracle {

BinaryImage shadow_sobel(const GrayImage& img, const SobelParams& p);
BinaryImage light_sobel(const GrayImage& img, const SobelParams& p);

// Direct windowed count, O(w*h*window).
BinaryImage noise_reduce_once(const BinaryImage& img, const NoiseParams& p);
BinaryImage noise_reduce_adaptive(const BinaryImage& img, const NoiseParams& p);

// O(w*h*n) nearest-set-pixel scan.
DistanceField distance_transform(const BinaryImage& img);

// O(n1*n2) pairwise point-set measures, no distance transform involved.
double hausdorff(const BinaryImage& a, const BinaryImage& b);
double chamfer(const BinaryImage& a, const BinaryImage& b, double tau);

// Per-pixel absolute-difference loop.
double mean_absolute(const BinaryImage& a, const BinaryImage& b);

}  // namespace fkp::oracle

#endif
