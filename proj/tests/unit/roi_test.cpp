#include <doctest.h>

#include <random>

#include "fkp/roi.hpp"
#include "support/test_util.hpp"

using namespace fkp;

TEST_CASE("default roi centers 220x110 in a 384x288 source") {
    const ResolvedRoi r = resolve_roi(RoiSpec{}, 384, 288);
    CHECK(r.x == 82);
    CHECK(r.y == 89);
    CHECK(r.width == 220);
    CHECK(r.height == 110);

    std::mt19937 rng(41);
    const GrayImage img = testutil::random_gray(384, 288, rng);
    const GrayImage roi = extract_roi(img, RoiSpec{});
    CHECK(roi.width() == 220);
    CHECK(roi.height() == 110);
    CHECK(roi(0, 0) == img(89, 82));
    CHECK(roi(109, 219) == img(198, 301));
}

TEST_CASE("full-bounds spec is the identity crop") {
    std::mt19937 rng(42);
    const GrayImage img = testutil::random_gray(33, 17, rng);
    CHECK(extract_roi(img, RoiSpec{33, 17, 0, 0}) == img);

    const BinaryImage bin = testutil::random_binary(33, 17, 0.4, rng);
    CHECK(extract_roi(bin, RoiSpec{33, 17, 0, 0}) == bin);
}

TEST_CASE("1x1 crop picks the addressed pixel") {
    GrayImage img(4, 4, 9);
    img(0, 0) = 3;
    const GrayImage out = extract_roi(img, RoiSpec{1, 1, 0, 0});
    CHECK(out.width() == 1);
    CHECK(out(0, 0) == 3);
}

TEST_CASE("out-of-bounds specs are rejected") {
    const GrayImage img(10, 10, 0);
    CHECK_THROWS_AS(extract_roi(img, RoiSpec{11, 5, 0, 0}), InvalidArgument);
    CHECK_THROWS_AS(extract_roi(img, RoiSpec{5, 5, 6, 0}), InvalidArgument);
    CHECK_THROWS_AS(extract_roi(img, RoiSpec{5, 5, 0, -1}), InvalidArgument);
    CHECK_THROWS_AS(extract_roi(img, RoiSpec{220, 110}), InvalidArgument);  // centered, too big
    CHECK_THROWS_AS(resolve_roi(RoiSpec{0, 5, 0, 0}, 10, 10), InvalidArgument);
}

TEST_CASE("cropping commutes with the subset relation and never adds pixels") {
    std::mt19937 rng(43);
    for (int iter = 0; iter < 100; ++iter) {
        const int w = 8 + static_cast<int>(rng() % 40);
        const int h = 8 + static_cast<int>(rng() % 40);
        const BinaryImage big = testutil::random_binary(w, h, 0.4, rng);
        BinaryImage small(w, h);
        big.for_each_set([&](int i, int j) {
            if (rng() % 2) small.set(i, j, true);
        });
        const RoiSpec spec{1 + static_cast<int>(rng() % (w / 2)),
                           1 + static_cast<int>(rng() % (h / 2))};
        const BinaryImage big_roi = extract_roi(big, spec);
        const BinaryImage small_roi = extract_roi(small, spec);
        CHECK(small_roi.is_subset_of(big_roi));
        CHECK(big_roi.popcount() <= big.popcount());
    }
}
