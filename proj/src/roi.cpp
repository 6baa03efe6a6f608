#include "fkp/roi.hpp"

#include <string>

namespace fkp {

ResolvedRoi resolve_roi(const RoiSpec& spec, int src_width, int src_height) {
    if (spec.width < 1 || spec.height < 1)
        throw InvalidArgument("RoiSpec: width and height must be >= 1");
    ResolvedRoi r;
    r.width = spec.width;
    r.height = spec.height;
    r.x = spec.offset_x.value_or((src_width - spec.width) / 2);
    r.y = spec.offset_y.value_or((src_height - spec.height) / 2);
    if (r.x < 0 || r.y < 0 || r.x + r.width > src_width || r.y + r.height > src_height)
        throw InvalidArgument("RoiSpec: " + std::to_string(r.width) + "x" + std::to_string(r.height) +
                              "+" + std::to_string(r.x) + "+" + std::to_string(r.y) +
                              " exceeds source bounds " + std::to_string(src_width) + "x" +
                              std::to_string(src_height));
    return r;
}

GrayImage extract_roi(const GrayImage& img, const RoiSpec& spec) {
    const ResolvedRoi r = resolve_roi(spec, img.width(), img.height());
    GrayImage out(r.width, r.height);
    for (int i = 0; i < r.height; ++i)
        for (int j = 0; j < r.width; ++j) out(i, j) = img(r.y + i, r.x + j);
    return out;
}

BinaryImage extract_roi(const BinaryImage& img, const RoiSpec& spec) {
    const ResolvedRoi r = resolve_roi(spec, img.width(), img.height());
    BinaryImage out(r.width, r.height);
    for (int i = 0; i < r.height; ++i)
        for (int j = 0; j < r.width; ++j)
            if (img.get(r.y + i, r.x + j)) out.set(i, j, true);
    return out;
}

}  // namespace fkp
