#ifndef FKP_GALLERY_HPP
#define FKP_GALLERY_HPP

#include <array>
#include <compare>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fkp/pipeline.hpp"
#include "fkp/similarity.hpp"

namespace fkp {

enum class FingerLabel { kLeftIndex, kLeftMiddle, kRightIndex, kRightMiddle };

inline constexpr std::array<FingerLabel, 4> kAllFingers = {
    FingerLabel::kLeftIndex,
    FingerLabel::kLeftMiddle,
    FingerLabel::kRightIndex,
    FingerLabel::kRightMiddle,
};

std::string_view finger_name(FingerLabel f);                      // "left-index" ...
std::optional<FingerLabel> parse_finger(std::string_view name);  // inverse of finger_name

// Unique identity of one enrolled sample. Comparison order (subject, finger,
// session) is also the tie-break order during identification.
struct EntryKey {
    std::string subject;
    FingerLabel finger = FingerLabel::kLeftIndex;
    int session = 1;

    auto operator<=>(const EntryKey&) const = default;
};

std::string to_string(const EntryKey& key);

struct GalleryEntry {
    EntryKey key;
    TemplatePair tpl;
};

// Everything needed to preprocess a probe exactly like the enrolled samples.
struct GalleryParams {
    PipelineParams pipeline;
    RoiSpec roi;
    bool roi_first = false;

    bool operator==(const GalleryParams&) const = default;
};

// Ranking over gallery entries, ascending by (score, key).
struct MatchResult {
    std::vector<std::pair<std::size_t, double>> ranked;  // (entry index, score)

    std::size_t best_index() const { return ranked.front().first; }
    double best_score() const { return ranked.front().second; }
};

// Enrollment store plus 1:N linear-scan identification. Immutable while
// identify() runs; concurrent identifications over one gallery are safe.
class Gallery {
public:
    Gallery() = default;
    explicit Gallery(GalleryParams params) : params_(std::move(params)) {}

    const GalleryParams& params() const noexcept { return params_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const std::vector<GalleryEntry>& entries() const noexcept { return entries_; }
    const GalleryEntry* find(const EntryKey& key) const;

    // Preprocesses the raw image with the gallery's parameters and appends the
    // result. Throws on duplicate keys, invalid subject ids, and template
    // dimensions differing from already-enrolled entries.
    void enroll(const GrayImage& raw, EntryKey key);

    // Appends an already-built template under the same checks.
    void enroll_template(EntryKey key, TemplatePair tpl);

    // Scores every entry (minus the excluded key) against the probe and
    // returns the full ascending ranking. Ties are broken by entry key, making
    // the ordering total and the result deterministic. When dt_cache is given
    // it must be index-aligned with entries().
    MatchResult identify(const TemplatePair& probe, Measure m, const ChamferParams& p = {},
                         const std::optional<EntryKey>& exclude = std::nullopt,
                         const std::vector<TemplateDistanceFields>* dt_cache = nullptr) const;

    // Distance fields per entry, index-aligned with entries(). Computing them
    // once lets many identify() calls share the per-entry work.
    std::vector<TemplateDistanceFields> build_distance_fields() const;

    // Directory layout: one P4 file per channel named
    // <subject>_<finger>_<session>_{shadow|light}.pbm plus a manifest.csv
    // listing keys, file names, and the pipeline parameters.
    void save(const std::filesystem::path& dir) const;
    static Gallery load(const std::filesystem::path& dir,
                        std::vector<std::string>* warnings = nullptr);

private:
    void check_new_entry(const EntryKey& key, const TemplatePair& tpl) const;

    GalleryParams params_;
    std::vector<GalleryEntry> entries_;
};

}  // namespace fkp

#endif
