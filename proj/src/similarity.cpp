#include "fkp/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fkp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Stand-in for "no source pixel" while running the envelope passes. Finite so
// parabola intersections stay well-defined, large enough to lose against any
// real squared distance, and small enough that all intermediate sums remain
// exactly representable integers in a double.
constexpr double kFarSquared = 1e15;

// 1-D squared-distance transform: d[q] = min_p ((q - p)^2 + f[p]).
// Lower envelope of parabolas; v = parabola sites, z = envelope boundaries.
void envelope_pass(const double* f, int n, double* d, int* v, double* z) {
    int k = 0;
    v[0] = 0;
    z[0] = -kInf;
    z[1] = kInf;
    for (int q = 1; q < n; ++q) {
        double s;
        for (;;) {
            const double qq = static_cast<double>(q) * q;
            const double vv = static_cast<double>(v[k]) * v[k];
            s = ((f[q] + qq) - (f[v[k]] + vv)) / (2.0 * (q - v[k]));
            if (s <= z[k] && k > 0)
                --k;
            else
                break;
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kInf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = static_cast<double>(q - v[k]);
        d[q] = dq * dq + f[v[k]];
    }
}

void require_same_dims(const BinaryImage& a, const BinaryImage& b, const char* op) {
    if (a.width() != b.width() || a.height() != b.height())
        throw InvalidArgument(std::string(op) + ": image dimensions differ");
}

void require_field_dims(const BinaryImage& a, const DistanceField& dt, const char* op) {
    if (a.width() != dt.width() || a.height() != dt.height())
        throw InvalidArgument(std::string(op) + ": distance field dimensions differ from image");
}

}  // namespace

DistanceField::DistanceField(int width, int height, double fill) : width_(width), height_(height) {
    if (width < 1 || height < 1)
        throw InvalidArgument("DistanceField: dimensions must be at least 1x1");
    values_.assign(static_cast<std::size_t>(width) * height, fill);
}

DistanceField distance_transform(const BinaryImage& img) {
    const int w = img.width(), h = img.height();
    if (!img.any()) return DistanceField(w, h, kInf);

    std::vector<double> sq(static_cast<std::size_t>(w) * h, kFarSquared);
    img.for_each_set([&](int i, int j) { sq[static_cast<std::size_t>(i) * w + j] = 0.0; });

    const int n = std::max(w, h);
    std::vector<double> f(n), d(n), z(n + 1);
    std::vector<int> v(n);

    // Columns first, then rows; the squared metric is separable.
    for (int j = 0; j < w; ++j) {
        for (int i = 0; i < h; ++i) f[i] = sq[static_cast<std::size_t>(i) * w + j];
        envelope_pass(f.data(), h, d.data(), v.data(), z.data());
        for (int i = 0; i < h; ++i) sq[static_cast<std::size_t>(i) * w + j] = d[i];
    }
    for (int i = 0; i < h; ++i) {
        double* row = sq.data() + static_cast<std::size_t>(i) * w;
        std::copy(row, row + w, f.begin());
        envelope_pass(f.data(), w, d.data(), v.data(), z.data());
        std::copy(d.begin(), d.begin() + w, row);
    }

    DistanceField out(w, h, 0.0);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) out(i, j) = std::sqrt(sq[static_cast<std::size_t>(i) * w + j]);
    return out;
}

double mean_absolute(const BinaryImage& a, const BinaryImage& b) {
    require_same_dims(a, b, "mean_absolute");
    return static_cast<double>(hamming_distance(a, b)) /
           (static_cast<double>(a.width()) * a.height());
}

double directed_hausdorff(const BinaryImage& a, const DistanceField& dt_b) {
    require_field_dims(a, dt_b, "directed_hausdorff");
    if (!a.any()) throw InvalidArgument("directed_hausdorff: source image has no set pixels");
    double worst = 0.0;
    a.for_each_set([&](int i, int j) { worst = std::max(worst, dt_b(i, j)); });
    return worst;
}

double hausdorff(const BinaryImage& a, const BinaryImage& b, const DistanceField& dt_a,
                 const DistanceField& dt_b) {
    require_same_dims(a, b, "hausdorff");
    const bool ea = !a.any(), eb = !b.any();
    if (ea && eb) return 0.0;
    if (ea || eb)
        throw InvalidArgument("hausdorff: one image is empty and the other is not; incomparable");
    return std::max(directed_hausdorff(a, dt_b), directed_hausdorff(b, dt_a));
}

double hausdorff(const BinaryImage& a, const BinaryImage& b) {
    require_same_dims(a, b, "hausdorff");
    const bool ea = !a.any(), eb = !b.any();
    if (ea && eb) return 0.0;
    if (ea || eb)
        throw InvalidArgument("hausdorff: one image is empty and the other is not; incomparable");
    return hausdorff(a, b, distance_transform(a), distance_transform(b));
}

double chamfer(const BinaryImage& a, const DistanceField& dt_b, const ChamferParams& p) {
    require_field_dims(a, dt_b, "chamfer");
    if (p.tau < 0) throw InvalidArgument("chamfer: tau must be >= 0");
    const std::int64_t n = a.popcount();
    if (n == 0) throw InvalidArgument("chamfer: first point set is empty");
    double sum = 0.0;
    a.for_each_set([&](int i, int j) { sum += std::min(dt_b(i, j), p.tau); });
    return sum / static_cast<double>(n);
}

double chamfer(const BinaryImage& a, const BinaryImage& b, const ChamferParams& p) {
    require_same_dims(a, b, "chamfer");
    return chamfer(a, distance_transform(b), p);
}

std::string_view measure_name(Measure m) {
    switch (m) {
        case Measure::kMeanAbsolute: return "ma";
        case Measure::kHausdorff: return "hd";
        case Measure::kChamfer: return "cd";
    }
    return "?";
}

std::optional<Measure> parse_measure(std::string_view name) {
    if (name == "ma") return Measure::kMeanAbsolute;
    if (name == "hd") return Measure::kHausdorff;
    if (name == "cd") return Measure::kChamfer;
    return std::nullopt;
}

TemplateDistanceFields make_distance_fields(const TemplatePair& tpl) {
    return TemplateDistanceFields{distance_transform(tpl.shadow), distance_transform(tpl.light)};
}

double pair_score(const TemplatePair& probe, const TemplatePair& candidate, Measure m,
                  const ChamferParams& p) {
    return PairScorer(probe, m, p).score(candidate);
}

PairScorer::PairScorer(const TemplatePair& probe, Measure m, const ChamferParams& p)
    : probe_(&probe), measure_(m), params_(p) {
    if (m == Measure::kHausdorff) probe_fields_ = make_distance_fields(probe);
}

double PairScorer::score(const TemplatePair& candidate) const {
    if (measure_ == Measure::kMeanAbsolute)
        return mean_absolute(probe_->shadow, candidate.shadow) +
               mean_absolute(probe_->light, candidate.light);
    return score(candidate, make_distance_fields(candidate));
}

double PairScorer::score(const TemplatePair& candidate,
                         const TemplateDistanceFields& candidate_fields) const {
    switch (measure_) {
        case Measure::kMeanAbsolute:
            return mean_absolute(probe_->shadow, candidate.shadow) +
                   mean_absolute(probe_->light, candidate.light);
        case Measure::kHausdorff:
            return hausdorff(probe_->shadow, candidate.shadow, probe_fields_->shadow,
                             candidate_fields.shadow) +
                   hausdorff(probe_->light, candidate.light, probe_fields_->light,
                             candidate_fields.light);
        case Measure::kChamfer:
            return chamfer(probe_->shadow, candidate_fields.shadow, params_) +
                   chamfer(probe_->light, candidate_fields.light, params_);
    }
    throw InvalidArgument("PairScorer: unknown measure");
}

}  // namespace fkp
