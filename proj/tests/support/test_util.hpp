#ifndef FKP_TESTS_TEST_UTIL_HPP
#define FKP_TESTS_TEST_UTIL_HPP

#include <atomic>
#include <filesystem>
#include <random>
#include <string>

#include "fkp/image.hpp"

namespace fkp::testutil {

inline GrayImage random_gray(int w, int h, std::mt19937& rng) {
    GrayImage img(w, h);
    std::uniform_int_distribution<int> pick(0, 255);
    for (auto& v : img.pixels()) v = static_cast<std::uint8_t>(pick(rng));
    return img;
}

inline BinaryImage random_binary(int w, int h, double density, std::mt19937& rng) {
    BinaryImage img(w, h);
    std::bernoulli_distribution pick(density);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j)
            if (pick(rng)) img.set(i, j, true);
    return img;
}

// Unique scratch directory, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("fkp_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace fkp::testutil

#endif
