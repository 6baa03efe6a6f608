#include "fkp/pnm.hpp"

#include <cctype>
#include <fstream>
#include <string>

namespace fkp {
namespace {

std::string where(const std::filesystem::path& path) { return "'" + path.string() + "'"; }

// Skips PNM whitespace and '#' comment lines, then reads one decimal field.
// Returns -1 if the stream ends or the field is not a number.
long read_header_field(std::istream& in) {
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    if (c == EOF || !std::isdigit(c)) return -1;
    long value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        if (value > 1 << 30) return -1;
        c = in.get();
    }
    if (c != EOF) in.unget();
    return value;
}

// Reads the "Pn w h [maxval]" header. After the last field exactly one
// whitespace byte separates the header from the raster.
void read_magic(std::istream& in, char expected, const std::filesystem::path& path) {
    const int p = in.get();
    const int n = in.get();
    if (p != 'P' || n != expected)
        throw FormatError("malformed header (expected P" + std::string(1, expected) + ") in " + where(path));
}

void consume_raster_separator(std::istream& in, const std::filesystem::path& path) {
    const int c = in.get();
    if (c == EOF || !std::isspace(c))
        throw FormatError("malformed header (missing raster separator) in " + where(path));
}

std::ifstream open_input(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path))
        throw IoError("missing file " + where(path));
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + where(path));
    return in;
}

}  // namespace

GrayImage read_gray(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    read_magic(in, '5', path);
    const long w = read_header_field(in);
    const long h = read_header_field(in);
    const long maxval = read_header_field(in);
    if (w < 1 || h < 1)
        throw FormatError("malformed header (bad dimensions) in " + where(path));
    if (maxval < 0)
        throw FormatError("malformed header (bad maxval) in " + where(path));
    if (maxval != 255)
        throw FormatError("unsupported maxval " + std::to_string(maxval) + " (only 255) in " + where(path));
    consume_raster_separator(in, path);

    GrayImage img(static_cast<int>(w), static_cast<int>(h));
    auto px = img.pixels();
    in.read(reinterpret_cast<char*>(px.data()), static_cast<std::streamsize>(px.size()));
    if (static_cast<std::size_t>(in.gcount()) != px.size())
        throw FormatError("truncated payload (got " + std::to_string(in.gcount()) + " of " +
                          std::to_string(px.size()) + " bytes) in " + where(path));
    return img;
}

void write_gray(const GrayImage& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open for writing " + where(path));
    out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
    auto px = img.pixels();
    out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
    if (!out)
        throw IoError("write failed for " + where(path));
}

BinaryImage read_binary(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    read_magic(in, '4', path);
    const long w = read_header_field(in);
    const long h = read_header_field(in);
    if (w < 1 || h < 1)
        throw FormatError("malformed header (bad dimensions) in " + where(path));
    consume_raster_separator(in, path);

    const std::size_t row_bytes = (static_cast<std::size_t>(w) + 7) / 8;
    std::vector<char> row(row_bytes);
    BinaryImage img(static_cast<int>(w), static_cast<int>(h));
    for (long i = 0; i < h; ++i) {
        in.read(row.data(), static_cast<std::streamsize>(row_bytes));
        if (static_cast<std::size_t>(in.gcount()) != row_bytes)
            throw FormatError("truncated payload (row " + std::to_string(i) + ") in " + where(path));
        for (long j = 0; j < w; ++j) {
            const unsigned byte = static_cast<unsigned char>(row[j >> 3]);
            // P4 packs pixels MSB-first; 1 is black/foreground.
            if ((byte >> (7 - (j & 7))) & 1u) img.set(static_cast<int>(i), static_cast<int>(j), true);
        }
    }
    return img;
}

void write_binary(const BinaryImage& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open for writing " + where(path));
    out << "P4\n" << img.width() << " " << img.height() << "\n";
    const std::size_t row_bytes = (static_cast<std::size_t>(img.width()) + 7) / 8;
    std::vector<char> row(row_bytes);
    for (int i = 0; i < img.height(); ++i) {
        std::fill(row.begin(), row.end(), 0);
        for (int j = 0; j < img.width(); ++j)
            if (img.get(i, j)) row[j >> 3] |= static_cast<char>(1u << (7 - (j & 7)));
        out.write(row.data(), static_cast<std::streamsize>(row_bytes));
    }
    if (!out)
        throw IoError("write failed for " + where(path));
}

}  // namespace fkp
