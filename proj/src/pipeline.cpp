#include "fkp/pipeline.hpp"

namespace fkp {
namespace {

bool roi_sized(int w, int h, const RoiSpec& roi) { return w == roi.width && h == roi.height; }

}  // namespace

TemplatePair make_template(const GrayImage& src, const PipelineParams& pipeline, const RoiSpec& roi,
                           bool roi_first) {
    if (roi_first) {
        const GrayImage cropped =
            roi_sized(src.width(), src.height(), roi) ? src : extract_roi(src, roi);
        return preprocess(cropped, pipeline);
    }
    TemplatePair full = preprocess(src, pipeline);
    if (roi_sized(full.shadow.width(), full.shadow.height(), roi)) return full;
    return TemplatePair{extract_roi(full.shadow, roi), extract_roi(full.light, roi)};
}

}  // namespace fkp
