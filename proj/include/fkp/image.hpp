#ifndef FKP_IMAGE_HPP
#define FKP_IMAGE_HPP

#include <bit>
#include <cassert>
#include <cstdint>
#include <span>
#include <vector>

#include "fkp/errors.hpp"

namespace fkp {

// Pixel coordinates are (row, col) throughout the library: row i grows
// downward, column j grows to the right.

// 8-bit luminance raster, row-major.
class GrayImage {
public:
    GrayImage() = default;

    GrayImage(int width, int height, std::uint8_t fill = 0)
        : width_(width), height_(height) {
        if (width < 1 || height < 1)
            throw InvalidArgument("GrayImage: dimensions must be at least 1x1");
        pixels_.assign(static_cast<std::size_t>(width) * height, fill);
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    std::uint8_t operator()(int row, int col) const {
        assert(row >= 0 && row < height_ && col >= 0 && col < width_);
        return pixels_[static_cast<std::size_t>(row) * width_ + col];
    }
    std::uint8_t& operator()(int row, int col) {
        assert(row >= 0 && row < height_ && col >= 0 && col < width_);
        return pixels_[static_cast<std::size_t>(row) * width_ + col];
    }

    std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
    std::span<std::uint8_t> pixels() noexcept { return pixels_; }

    bool operator==(const GrayImage&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

// One bit per pixel, row-major. Each row is packed into 64-bit words
// independently (LSB-first within a word); the unused tail bits of the last
// word in every row are kept zero, so whole-word operations (XOR/AND/popcount)
// are valid without masking.
class BinaryImage {
public:
    BinaryImage() = default;

    BinaryImage(int width, int height) : width_(width), height_(height) {
        if (width < 1 || height < 1)
            throw InvalidArgument("BinaryImage: dimensions must be at least 1x1");
        words_per_row_ = (width + 63) / 64;
        words_.assign(static_cast<std::size_t>(words_per_row_) * height, 0);
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int words_per_row() const noexcept { return words_per_row_; }

    bool get(int row, int col) const {
        assert(row >= 0 && row < height_ && col >= 0 && col < width_);
        const std::uint64_t word = words_[word_index(row, col)];
        return (word >> (col & 63)) & 1u;
    }

    void set(int row, int col, bool value) {
        assert(row >= 0 && row < height_ && col >= 0 && col < width_);
        const std::uint64_t mask = std::uint64_t{1} << (col & 63);
        if (value)
            words_[word_index(row, col)] |= mask;
        else
            words_[word_index(row, col)] &= ~mask;
    }

    std::int64_t popcount() const noexcept {
        std::int64_t n = 0;
        for (std::uint64_t w : words_) n += std::popcount(w);
        return n;
    }

    bool any() const noexcept {
        for (std::uint64_t w : words_)
            if (w) return true;
        return false;
    }

    std::span<const std::uint64_t> words() const noexcept { return words_; }

    std::span<const std::uint64_t> row_words(int row) const {
        assert(row >= 0 && row < height_);
        return {words_.data() + static_cast<std::size_t>(row) * words_per_row_,
                static_cast<std::size_t>(words_per_row_)};
    }

    // Calls f(row, col) for every set pixel, in row-major order.
    template <typename F>
    void for_each_set(F&& f) const {
        for (int i = 0; i < height_; ++i) {
            const std::uint64_t* row = words_.data() + static_cast<std::size_t>(i) * words_per_row_;
            for (int k = 0; k < words_per_row_; ++k) {
                std::uint64_t bits = row[k];
                while (bits) {
                    const int b = std::countr_zero(bits);
                    f(i, k * 64 + b);
                    bits &= bits - 1;
                }
            }
        }
    }

    bool is_subset_of(const BinaryImage& other) const {
        if (width_ != other.width_ || height_ != other.height_) return false;
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k] & ~other.words_[k]) return false;
        return true;
    }

    bool operator==(const BinaryImage&) const = default;

private:
    std::size_t word_index(int row, int col) const {
        return static_cast<std::size_t>(row) * words_per_row_ + (col >> 6);
    }

    int width_ = 0;
    int height_ = 0;
    int words_per_row_ = 0;
    std::vector<std::uint64_t> words_;
};

// Number of differing pixels. Both images must have identical dimensions.
inline std::int64_t hamming_distance(const BinaryImage& a, const BinaryImage& b) {
    if (a.width() != b.width() || a.height() != b.height())
        throw InvalidArgument("hamming_distance: image dimensions differ");
    std::int64_t n = 0;
    const auto wa = a.words(), wb = b.words();
    for (std::size_t k = 0; k < wa.size(); ++k) n += std::popcount(wa[k] ^ wb[k]);
    return n;
}

// The (shadow, light) binary pair describing one finger sample. Before ROI
// extraction the members are full-size edge maps; after it they are the ROIs.
struct TemplatePair {
    BinaryImage shadow;
    BinaryImage light;

    bool operator==(const TemplatePair&) const = default;
};

}  // namespace fkp

#endif
