#ifndef FKP_PIPELINE_HPP
#define FKP_PIPELINE_HPP

#include "fkp/filters.hpp"
#include "fkp/roi.hpp"

namespace fkp {

// Full raw-image-to-template path: detectors, noise reduction, ROI crop.
//
// With roi_first the crop happens on the gray input and the detectors run on
// the cropped image; otherwise the detectors run first and their outputs are
// cropped. Sources whose dimensions already equal the ROI size are taken
// as-is (pre-cut dataset images).
TemplatePair make_template(const GrayImage& src, const PipelineParams& pipeline, const RoiSpec& roi,
                           bool roi_first = false);

}  // namespace fkp

#endif
