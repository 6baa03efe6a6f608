#include "fkp/gallery.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "fkp/pnm.hpp"

namespace fkp {
namespace {

constexpr std::string_view kManifestName = "manifest.csv";
constexpr std::string_view kManifestMagic = "fkp-gallery";
constexpr int kManifestVersion = 1;

// Subject ids end up in file names and CSV fields, so keep them to a safe
// alphabet; underscores are excluded to keep template file names unambiguous.
bool valid_subject(const std::string& s) {
    if (s.empty()) return false;
    for (const char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-') return false;
    return true;
}

std::string template_file_name(const EntryKey& key, const char* channel) {
    return key.subject + "_" + std::string(finger_name(key.finger)) + "_" +
           std::to_string(key.session) + "_" + channel + ".pbm";
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (const char c : line) {
        if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else if (c != '\r') {
            current.push_back(c);
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

int parse_int_field(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw FormatError("manifest: bad integer '" + s + "' for " + what);
    }
}

struct ParamSink {
    GalleryParams params;

    void apply(const std::string& name, const std::string& value) {
        auto as_int = [&] { return parse_int_field(value, name); };
        auto as_offset = [&]() -> std::optional<int> {
            if (value == "centered") return std::nullopt;
            return parse_int_field(value, name);
        };
        if (name == "shadow_sobel_d") params.pipeline.shadow_sobel.d = as_int();
        else if (name == "shadow_sobel_t") params.pipeline.shadow_sobel.t = as_int();
        else if (name == "light_sobel_d") params.pipeline.light_sobel.d = as_int();
        else if (name == "light_sobel_t") params.pipeline.light_sobel.t = as_int();
        else if (name == "shadow_nr_t") params.pipeline.shadow_noise.t = as_int();
        else if (name == "shadow_nr_ax") params.pipeline.shadow_noise.ax = as_int();
        else if (name == "shadow_nr_ay") params.pipeline.shadow_noise.ay = as_int();
        else if (name == "light_nr_t") params.pipeline.light_noise.t = as_int();
        else if (name == "light_nr_ax") params.pipeline.light_noise.ax = as_int();
        else if (name == "light_nr_ay") params.pipeline.light_noise.ay = as_int();
        else if (name == "roi_w") params.roi.width = as_int();
        else if (name == "roi_h") params.roi.height = as_int();
        else if (name == "roi_x") params.roi.offset_x = as_offset();
        else if (name == "roi_y") params.roi.offset_y = as_offset();
        else if (name == "roi_first") params.roi_first = as_int() != 0;
        else throw FormatError("manifest: unknown parameter '" + name + "'");
    }
};

std::string offset_string(const std::optional<int>& v) {
    return v ? std::to_string(*v) : "centered";
}

}  // namespace

std::string_view finger_name(FingerLabel f) {
    switch (f) {
        case FingerLabel::kLeftIndex: return "left-index";
        case FingerLabel::kLeftMiddle: return "left-middle";
        case FingerLabel::kRightIndex: return "right-index";
        case FingerLabel::kRightMiddle: return "right-middle";
    }
    return "?";
}

std::optional<FingerLabel> parse_finger(std::string_view name) {
    for (const FingerLabel f : kAllFingers)
        if (finger_name(f) == name) return f;
    return std::nullopt;
}

std::string to_string(const EntryKey& key) {
    return key.subject + "/" + std::string(finger_name(key.finger)) + "/" +
           std::to_string(key.session);
}

const GalleryEntry* Gallery::find(const EntryKey& key) const {
    for (const auto& e : entries_)
        if (e.key == key) return &e;
    return nullptr;
}

void Gallery::check_new_entry(const EntryKey& key, const TemplatePair& tpl) const {
    if (!valid_subject(key.subject))
        throw GalleryError("enroll: invalid subject id '" + key.subject +
                           "' (allowed: letters, digits, '.', '-')");
    if (key.session < 1)
        throw GalleryError("enroll: session must be >= 1 for " + to_string(key));
    if (find(key)) throw GalleryError("enroll: duplicate key " + to_string(key));
    if (!entries_.empty()) {
        const TemplatePair& first = entries_.front().tpl;
        if (tpl.shadow.width() != first.shadow.width() ||
            tpl.shadow.height() != first.shadow.height() ||
            tpl.light.width() != first.light.width() ||
            tpl.light.height() != first.light.height())
            throw GalleryError("enroll: template dimensions differ from existing entries for " +
                               to_string(key));
    }
}

void Gallery::enroll(const GrayImage& raw, EntryKey key) {
    TemplatePair tpl = make_template(raw, params_.pipeline, params_.roi, params_.roi_first);
    enroll_template(std::move(key), std::move(tpl));
}

void Gallery::enroll_template(EntryKey key, TemplatePair tpl) {
    check_new_entry(key, tpl);
    entries_.push_back(GalleryEntry{std::move(key), std::move(tpl)});
}

MatchResult Gallery::identify(const TemplatePair& probe, Measure m, const ChamferParams& p,
                              const std::optional<EntryKey>& exclude,
                              const std::vector<TemplateDistanceFields>* dt_cache) const {
    if (entries_.empty()) throw GalleryError("identify: gallery is empty");
    if (dt_cache && dt_cache->size() != entries_.size())
        throw InvalidArgument("identify: distance-field cache size differs from gallery size");
    const TemplatePair& first = entries_.front().tpl;
    if (probe.shadow.width() != first.shadow.width() ||
        probe.shadow.height() != first.shadow.height() ||
        probe.light.width() != first.light.width() || probe.light.height() != first.light.height())
        throw InvalidArgument("identify: probe dimensions differ from gallery templates");

    const PairScorer scorer(probe, m, p);
    MatchResult result;
    result.ranked.reserve(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (exclude && entries_[i].key == *exclude) continue;
        const double s =
            dt_cache ? scorer.score(entries_[i].tpl, (*dt_cache)[i]) : scorer.score(entries_[i].tpl);
        result.ranked.emplace_back(i, s);
    }
    if (result.ranked.empty())
        throw GalleryError("identify: gallery is empty after excluding " + to_string(*exclude));

    std::sort(result.ranked.begin(), result.ranked.end(),
              [this](const auto& a, const auto& b) {
                  if (a.second != b.second) return a.second < b.second;
                  return entries_[a.first].key < entries_[b.first].key;
              });
    return result;
}

std::vector<TemplateDistanceFields> Gallery::build_distance_fields() const {
    std::vector<TemplateDistanceFields> fields;
    fields.reserve(entries_.size());
    for (const auto& e : entries_) fields.push_back(make_distance_fields(e.tpl));
    return fields;
}

void Gallery::save(const std::filesystem::path& dir) const {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("save: cannot create directory '" + dir.string() + "': " + ec.message());

    std::ofstream manifest(dir / kManifestName, std::ios::trunc);
    if (!manifest) throw IoError("save: cannot write manifest in '" + dir.string() + "'");
    manifest << kManifestMagic << "," << kManifestVersion << "\n";
    const PipelineParams& pp = params_.pipeline;
    manifest << "param,shadow_sobel_d," << pp.shadow_sobel.d << "\n"
             << "param,shadow_sobel_t," << pp.shadow_sobel.t << "\n"
             << "param,light_sobel_d," << pp.light_sobel.d << "\n"
             << "param,light_sobel_t," << pp.light_sobel.t << "\n"
             << "param,shadow_nr_t," << pp.shadow_noise.t << "\n"
             << "param,shadow_nr_ax," << pp.shadow_noise.ax << "\n"
             << "param,shadow_nr_ay," << pp.shadow_noise.ay << "\n"
             << "param,light_nr_t," << pp.light_noise.t << "\n"
             << "param,light_nr_ax," << pp.light_noise.ax << "\n"
             << "param,light_nr_ay," << pp.light_noise.ay << "\n"
             << "param,roi_w," << params_.roi.width << "\n"
             << "param,roi_h," << params_.roi.height << "\n"
             << "param,roi_x," << offset_string(params_.roi.offset_x) << "\n"
             << "param,roi_y," << offset_string(params_.roi.offset_y) << "\n"
             << "param,roi_first," << (params_.roi_first ? 1 : 0) << "\n";
    for (const auto& e : entries_) {
        const std::string shadow_file = template_file_name(e.key, "shadow");
        const std::string light_file = template_file_name(e.key, "light");
        write_binary(e.tpl.shadow, dir / shadow_file);
        write_binary(e.tpl.light, dir / light_file);
        manifest << "entry," << e.key.subject << "," << finger_name(e.key.finger) << ","
                 << e.key.session << "," << shadow_file << "," << light_file << "\n";
    }
    if (!manifest) throw IoError("save: manifest write failed in '" + dir.string() + "'");
}

Gallery Gallery::load(const std::filesystem::path& dir, std::vector<std::string>* warnings) {
    const std::filesystem::path manifest_path = dir / kManifestName;
    if (!std::filesystem::exists(manifest_path))
        throw IoError("load: missing manifest '" + manifest_path.string() + "'");
    std::ifstream manifest(manifest_path);
    if (!manifest) throw IoError("load: cannot open manifest '" + manifest_path.string() + "'");

    std::string line;
    if (!std::getline(manifest, line))
        throw FormatError("load: empty manifest '" + manifest_path.string() + "'");
    {
        const auto magic = split_csv_line(line);
        if (magic.size() != 2 || magic[0] != kManifestMagic ||
            parse_int_field(magic[1], "manifest version") != kManifestVersion)
            throw FormatError("load: unrecognized manifest header '" + line + "'");
    }

    ParamSink sink;
    struct PendingEntry {
        EntryKey key;
        std::string shadow_file, light_file;
    };
    std::vector<PendingEntry> pending;
    int line_no = 1;
    while (std::getline(manifest, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields[0] == "param") {
            if (fields.size() != 3)
                throw FormatError("load: malformed param line " + std::to_string(line_no));
            sink.apply(fields[1], fields[2]);
        } else if (fields[0] == "entry") {
            if (fields.size() != 6)
                throw FormatError("load: malformed entry line " + std::to_string(line_no));
            const auto finger = parse_finger(fields[2]);
            if (!finger)
                throw FormatError("load: unknown finger label '" + fields[2] + "' on line " +
                                  std::to_string(line_no));
            pending.push_back(PendingEntry{
                EntryKey{fields[1], *finger, parse_int_field(fields[3], "session")},
                fields[4], fields[5]});
        } else {
            throw FormatError("load: unknown record '" + fields[0] + "' on line " +
                              std::to_string(line_no));
        }
    }

    Gallery g(sink.params);
    for (auto& p : pending) {
        for (const std::string* file : {&p.shadow_file, &p.light_file})
            if (!std::filesystem::exists(dir / *file))
                throw IoError("load: entry " + to_string(p.key) + " references missing file '" +
                              (dir / *file).string() + "'");
        TemplatePair tpl{read_binary(dir / p.shadow_file), read_binary(dir / p.light_file)};
        if (warnings &&
            (tpl.shadow.width() != sink.params.roi.width ||
             tpl.shadow.height() != sink.params.roi.height))
            warnings->push_back("entry " + to_string(p.key) + ": template size " +
                                std::to_string(tpl.shadow.width()) + "x" +
                                std::to_string(tpl.shadow.height()) +
                                " does not match manifest ROI " +
                                std::to_string(sink.params.roi.width) + "x" +
                                std::to_string(sink.params.roi.height));
        g.enroll_template(std::move(p.key), std::move(tpl));
    }
    return g;
}

}  // namespace fkp
