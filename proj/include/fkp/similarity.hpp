#ifndef FKP_SIMILARITY_HPP
#define FKP_SIMILARITY_HPP

#include <optional>
#include <string_view>
#include <vector>

#include "fkp/image.hpp"

namespace fkp {

// Per-pixel Euclidean distance to the nearest set pixel of a source image.
// All values are +infinity when the source has no set pixels.
class DistanceField {
public:
    DistanceField() = default;
    DistanceField(int width, int height, double fill);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    double operator()(int row, int col) const {
        return values_[static_cast<std::size_t>(row) * width_ + col];
    }
    double& operator()(int row, int col) {
        return values_[static_cast<std::size_t>(row) * width_ + col];
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> values_;
};

// Exact Euclidean distance transform via the two-pass lower-envelope method
// on squared distances. Linear in the pixel count.
DistanceField distance_transform(const BinaryImage& img);

struct ChamferParams {
    double tau = 2.0;  // per-point distance cap
};

// Normalized per-pixel absolute difference; on binary images this is the
// Hamming distance divided by the pixel count. Result in [0, 1].
double mean_absolute(const BinaryImage& a, const BinaryImage& b);

// max over set pixels of a of the distance to the nearest set pixel of b.
// a must be nonempty; +infinity when b is empty.
double directed_hausdorff(const BinaryImage& a, const DistanceField& dt_b);

// Symmetric Hausdorff distance between the two point sets. Zero when both are
// empty; one empty and one not is incomparable and throws.
double hausdorff(const BinaryImage& a, const BinaryImage& b);
double hausdorff(const BinaryImage& a, const BinaryImage& b, const DistanceField& dt_a,
                 const DistanceField& dt_b);

// Mean over a's set pixels of the tau-capped distance to b's nearest set
// pixel. Asymmetric by design. a must be nonempty; an empty b yields tau.
double chamfer(const BinaryImage& a, const BinaryImage& b, const ChamferParams& p = {});
double chamfer(const BinaryImage& a, const DistanceField& dt_b, const ChamferParams& p = {});

enum class Measure { kMeanAbsolute, kHausdorff, kChamfer };

std::string_view measure_name(Measure m);                     // "ma" | "hd" | "cd"
std::optional<Measure> parse_measure(std::string_view name);  // inverse of measure_name

// Distance fields for both channels of one template.
struct TemplateDistanceFields {
    DistanceField shadow;
    DistanceField light;
};

TemplateDistanceFields make_distance_fields(const TemplatePair& tpl);

// Sum of the per-channel distances: measure(shadow, shadow) + measure(light,
// light). Lower is more similar.
double pair_score(const TemplatePair& probe, const TemplatePair& candidate, Measure m,
                  const ChamferParams& p = {});

// Scores one fixed probe against many candidates. Precomputes the probe's
// distance fields when the measure needs them; candidate fields may be passed
// in when cached by the caller. Results are identical to pair_score.
class PairScorer {
public:
    PairScorer(const TemplatePair& probe, Measure m, const ChamferParams& p = {});

    double score(const TemplatePair& candidate) const;
    double score(const TemplatePair& candidate, const TemplateDistanceFields& candidate_fields) const;

private:
    const TemplatePair* probe_;
    Measure measure_;
    ChamferParams params_;
    std::optional<TemplateDistanceFields> probe_fields_;
};

}  // namespace fkp

#endif
