#ifndef FKP_ROI_HPP
#define FKP_ROI_HPP

#include <optional>

#include "fkp/image.hpp"

namespace fkp {

// Crop rectangle. When the offsets are absent the crop is centered in the
// source image.
struct RoiSpec {
    int width = 220;
    int height = 110;
    std::optional<int> offset_x;  // columns from the left
    std::optional<int> offset_y;  // rows from the top

    bool operator==(const RoiSpec&) const = default;
};

struct ResolvedRoi {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;
};

// Computes concrete offsets for a source image, centering when unspecified.
// Throws InvalidArgument when the rectangle does not fit.
ResolvedRoi resolve_roi(const RoiSpec& spec, int src_width, int src_height);

// Pixel (i, j) of the output equals pixel (offset_y + i, offset_x + j) of the input.
GrayImage extract_roi(const GrayImage& img, const RoiSpec& spec);
BinaryImage extract_roi(const BinaryImage& img, const RoiSpec& spec);

}  // namespace fkp

#endif
