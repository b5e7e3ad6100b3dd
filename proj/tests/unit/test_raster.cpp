#include <doctest.h>

#include <fstream>

#include "support.hpp"
#include "trailroute/error.hpp"
#include "trailroute/raster.hpp"

using namespace trailroute;
using trailroute::testing::Rng;

TEST_CASE("colour threshold selects pixels within the RGB distance") {
    MapImage img(4, 4, {255, 255, 255});
    img.set(0, 0, {170, 79, 55});
    img.set(1, 1, {170 + 17, 79 + 17, 55 + 17});  // distance 29.4
    img.set(2, 2, {170 + 18, 79 + 18, 55 + 18});  // distance 31.2
    const TrailMask m = threshold_by_color(img, {170, 79, 55}, 30);
    CHECK(m.at(0, 0));
    CHECK(m.at(1, 1));
    CHECK_FALSE(m.at(2, 2));
    CHECK(m.count() == 2);
}

TEST_CASE("segmentation of a solid trail-coloured image keeps everything") {
    const MapImage img(12, 12, {170, 79, 55});
    CHECK(segment_by_color(img, {170, 79, 55}).count() == 144);
    CHECK(segment_by_color(MapImage(12, 12, {0, 0, 255}), {170, 79, 55}).empty());
}

TEST_CASE("small components are dropped and one-pixel gaps are closed") {
    MapImage img(20, 40, {255, 255, 255});
    for (int c = 2; c < 38; ++c) {
        for (int r = 8; r < 11; ++r) {
            if (c != 20) img.set(r, c, {0, 0, 0});
        }
    }
    img.set(2, 2, {0, 0, 0});
    const TrailMask raw = threshold_by_color(img, {0, 0, 0}, 10);
    CHECK(count_components(raw) == 3);
    const TrailMask m = segment_by_color(img, {0, 0, 0}, {10, 50, true});
    CHECK_FALSE(m.at(2, 2));
    CHECK(m.at(9, 20));
    CHECK(count_components(m) == 1);
    const TrailMask open = segment_by_color(img, {0, 0, 0}, {10, 50, false});
    CHECK(count_components(open) == 2);
}

TEST_CASE("morphology treats the border as foreground for erosion") {
    BinaryRaster full(5, 5);
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 5; ++c) full.set(r, c, true);
    CHECK(erode3x3(full).count() == 25);
    BinaryRaster dot(5, 5);
    dot.set(2, 2, true);
    CHECK(dilate3x3(dot).count() == 9);
    CHECK(erode3x3(dot).count() == 0);
}

TEST_CASE("component labelling uses 8-connectivity") {
    BinaryRaster m(3, 3);
    m.set(0, 0, true);
    m.set(1, 1, true);
    m.set(2, 0, true);
    m.set(0, 2, true);
    CHECK(count_components(m) == 1);
    m.set(1, 1, false);
    CHECK(count_components(m) == 3);
}

TEST_CASE("PNG round trips for images and masks") {
    const auto dir = testing::temp_dir("raster");
    MapImage img(7, 9);
    for (int r = 0; r < 7; ++r)
        for (int c = 0; c < 9; ++c)
            img.set(r, c, {static_cast<std::uint8_t>(r * 30), static_cast<std::uint8_t>(c * 25), 77});
    save_image(img, dir / "img.png");
    CHECK(load_image(dir / "img.png") == img);

    BinaryRaster m(6, 5);
    m.set(0, 0, true);
    m.set(5, 4, true);
    m.set(3, 2, true);
    save_mask(m, dir / "mask.png");
    const TrailMask back = load_mask(dir / "mask.png");
    CHECK(back.height() == 6);
    CHECK(back.width() == 5);
    CHECK(back.foreground() == m.foreground());

    // An RGB image read as a mask thresholds luminance at 127.
    MapImage lum(1, 3);
    lum.set(0, 0, {128, 128, 128});
    lum.set(0, 1, {127, 127, 127});
    lum.set(0, 2, {255, 0, 0});  // luma 76
    save_image(lum, dir / "lum.png");
    const TrailMask lm = load_mask(dir / "lum.png");
    CHECK(lm.at(0, 0));
    CHECK_FALSE(lm.at(0, 1));
    CHECK_FALSE(lm.at(0, 2));

    CHECK_THROWS_AS(load_image(dir / "nope.png"), IoError);
    {
        std::ofstream bad(dir / "bad.png");
        bad << "not a png";
    }
    CHECK_THROWS_AS(load_image(dir / "bad.png"), MalformedImage);
}

TEST_CASE("thinning a bar gives a one-pixel centreline") {
    // Reference (skimage): 37 pixels on rows 6-7, cols 7..43.
    BinaryRaster bar(15, 50);
    for (int r = 5; r < 10; ++r)
        for (int c = 5; c < 45; ++c) bar.set(r, c, true);
    const Skeleton sk = skeletonize(bar);
    const auto px = sk.foreground();
    REQUIRE_FALSE(px.empty());
    CHECK(count_components(sk) == 1);
    CHECK_FALSE(testing::has_2x2_block(sk));
    int min_col = 99, max_col = -1;
    for (Pixel p : px) {
        CHECK(p.row >= 6);
        CHECK(p.row <= 8);
        min_col = std::min(min_col, p.col);
        max_col = std::max(max_col, p.col);
    }
    CHECK(std::abs(min_col - 5) <= 2);
    CHECK(std::abs(max_col - 44) <= 2);
    // Path: exactly two endpoints, every other pixel has two neighbours.
    const DenseGraph g = build_dense_graph(sk);
    int ends = 0;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        const auto deg = g.neighbours(static_cast<int>(i)).size();
        CHECK(deg <= 2);
        ends += deg == 1;
    }
    CHECK(ends == 2);
}

TEST_CASE("thinning edge cases") {
    CHECK(skeletonize(BinaryRaster(4, 4)).empty());
    BinaryRaster dot(3, 3);
    dot.set(1, 1, true);
    CHECK(skeletonize(dot).foreground() == dot.foreground());
    BinaryRaster block(2, 2);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) block.set(r, c, true);
    const Skeleton s = skeletonize(block);
    CHECK(s.count() >= 1);
    CHECK_FALSE(testing::has_2x2_block(s));
}

TEST_CASE("property: thinning is idempotent, thin, and preserves components") {
    Rng rng(2024);
    for (int k = 0; k < 150; ++k) {
        const BinaryRaster m = testing::random_mask(rng, 48);
        const Skeleton s = skeletonize(m);
        CAPTURE(k);
        CHECK(skeletonize(s).foreground() == s.foreground());
        CHECK_FALSE(testing::has_2x2_block(s));
        CHECK(count_components(s) == count_components(m));
    }
}
