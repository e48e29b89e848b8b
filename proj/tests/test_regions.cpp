#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fxc/regions.hpp"
#include "fxc/rng.hpp"

using namespace fxc;

namespace {

EdgeMap empty_edges(int w = 85, int h = 85) {
    EdgeMap e;
    e.width = w;
    e.height = h;
    e.edges.assign(static_cast<std::size_t>(w) * h, 0);
    return e;
}

void plant_blob(EdgeMap& e, int cx, int cy, int radius = 1) {
    for (int y = cy - radius; y <= cy + radius; ++y)
        for (int x = cx - radius; x <= cx + radius; ++x)
            e.edges[static_cast<std::size_t>(y) * e.width + x] = 1;
}

} // namespace

TEST_SUITE("regions") {

TEST_CASE("default layout is in bounds with the fixed patch sizes") {
    RegionLayout layout = default_layout();
    CHECK_NOTHROW(layout.validate());
    int total = 0;
    for (const RegionSpec& r : layout.regions) total += r.patch_w * r.patch_h;
    CHECK(total == 1664);
    CHECK(layout.regions[0].patch_w * layout.regions[0].patch_h == 288);
    CHECK(layout.regions[4].patch_w * layout.regions[4].patch_h == 512);
}

TEST_CASE("locate centers a region on its edge centroid") {
    RegionLayout layout = default_layout();
    EdgeMap edges = empty_edges();
    plant_blob(edges, 25, 20); // inside the left-eyebrow window
    auto rects = locate_regions(edges, layout);
    const Rect& brow = rects[0];
    CHECK(brow.w == 24);
    CHECK(brow.h == 12);
    CHECK(brow.x + brow.w / 2 == 25);
    CHECK(brow.y + brow.h / 2 == 20);
}

TEST_CASE("locate falls back to window centers on an empty map") {
    RegionLayout layout = default_layout();
    auto rects = locate_regions(empty_edges(), layout);
    for (int i = 0; i < kRegionCount; ++i) {
        const RegionSpec& spec = layout.regions[i];
        double cx = spec.window.x + (spec.window.w - 1) / 2.0;
        double cy = spec.window.y + (spec.window.h - 1) / 2.0;
        CHECK(rects[i].x == static_cast<int>(std::lround(cx)) - spec.patch_w / 2);
        CHECK(rects[i].y == static_cast<int>(std::lround(cy)) - spec.patch_h / 2);
    }
}

TEST_CASE("locate clamps rects to the image") {
    RegionLayout layout = default_layout();
    EdgeMap edges = empty_edges();
    // blob in the left-eyebrow window's top-left corner
    plant_blob(edges, 7, 13);
    auto rects = locate_regions(edges, layout);
    CHECK(rects[0].x >= 0);
    CHECK(rects[0].y >= 0);
    CHECK(rects[0].x + rects[0].w <= edges.width);
    CHECK(rects[0].y + rects[0].h <= edges.height);
}

TEST_CASE("locate shifts with the blob (translation consistency)") {
    RegionLayout layout = default_layout();
    EdgeMap a = empty_edges();
    EdgeMap b = empty_edges();
    plant_blob(a, 22, 20, 2);
    plant_blob(b, 25, 22, 2); // shifted by (3, 2), still inside the window
    auto ra = locate_regions(a, layout);
    auto rb = locate_regions(b, layout);
    CHECK(rb[0].x - ra[0].x == 3);
    CHECK(rb[0].y - ra[0].y == 2);
}

TEST_CASE("locate rejects windows outside the edge map") {
    RegionLayout layout = default_layout();
    CHECK_THROWS_AS(locate_regions(empty_edges(40, 40), layout),
                    std::invalid_argument);
}

TEST_CASE("patch extraction with matching sizes is the raw sub-image") {
    Rng rng(3);
    GrayImage img(30, 30);
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng.next_below(256));
    Rect rect{4, 6, 8, 5};
    RegionPatch patch = extract_patch(img, rect, 8, 5);
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 8; ++x)
            CHECK(patch.values[y * 8 + x] ==
                  doctest::Approx(img.at(rect.x + x, rect.y + y)));
}

TEST_CASE("patch extraction of a constant area is constant") {
    GrayImage img(20, 20, 42);
    RegionPatch patch = extract_patch(img, Rect{2, 2, 7, 9}, 24, 12);
    for (double v : patch.values) CHECK(v == doctest::Approx(42.0));
}

TEST_CASE("bilinear upsample of a checkerboard") {
    GrayImage img(2, 2);
    img.pixels = {0, 255, 255, 0};
    RegionPatch patch = extract_patch(img, Rect{0, 0, 2, 2}, 3, 3);
    CHECK(patch.values[4] == doctest::Approx(127.5)); // center at (0.5, 0.5)
    CHECK(patch.values[0] == doctest::Approx(0.0));
    CHECK(patch.values[2] == doctest::Approx(255.0));
    CHECK(patch.values[1] == doctest::Approx(127.5));
}

TEST_CASE("patch extraction validates its inputs") {
    GrayImage img(20, 20, 0);
    CHECK_THROWS_AS(extract_patch(img, Rect{15, 15, 10, 10}, 4, 4),
                    std::invalid_argument);
    CHECK_THROWS_AS(extract_patch(img, Rect{0, 0, 5, 5}, 0, 4),
                    std::invalid_argument);
}

TEST_CASE("extract_all produces the five fixed-length patches in order") {
    Rng rng(8);
    GrayImage img(85, 85);
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng.next_below(256));
    EdgeMap edges = empty_edges();
    plant_blob(edges, 25, 20);
    plant_blob(edges, 60, 20);
    plant_blob(edges, 25, 40);
    plant_blob(edges, 60, 40);
    plant_blob(edges, 42, 66);

    RegionSet set = extract_all(img, edges, default_layout());
    CHECK(set.patches[0].values.size() == 288);
    CHECK(set.patches[1].values.size() == 288);
    CHECK(set.patches[2].values.size() == 288);
    CHECK(set.patches[3].values.size() == 288);
    CHECK(set.patches[4].values.size() == 512);
    CHECK(set.patches[0].name == "left_eyebrow");
    CHECK(set.patches[4].name == "mouth");
    for (const RegionPatch& p : set.patches)
        for (double v : p.values) {
            CHECK(v >= 0.0);
            CHECK(v <= 255.0);
        }

    RegionSet again = extract_all(img, edges, default_layout());
    CHECK(set == again);
}

TEST_CASE("extract_all rejects mismatched dimensions") {
    GrayImage img(85, 85, 0);
    CHECK_THROWS_AS(extract_all(img, empty_edges(84, 85), default_layout()),
                    std::invalid_argument);
}

TEST_CASE("patches render back to clamped rasters") {
    RegionPatch patch;
    patch.width = 2;
    patch.height = 2;
    patch.values = {-3.0, 12.4, 12.6, 300.0};
    GrayImage img = patch_to_image(patch);
    CHECK(img.pixels == std::vector<std::uint8_t>{0, 12, 13, 255});
}

TEST_CASE("planted mouth is located within 3 pixels") {
    RegionLayout layout = default_layout();
    GrayImage img(85, 85, 200);
    // high-contrast bar at the planted mouth center (40, 64)
    for (int y = 62; y <= 66; ++y)
        for (int x = 30; x <= 50; ++x) img.at(x, y) = 20;
    EdgeMap edges = canny(img, {});
    auto rects = locate_regions(edges, layout);
    int cx = rects[4].x + rects[4].w / 2;
    int cy = rects[4].y + rects[4].h / 2;
    CHECK(std::abs(cx - 40) <= 3);
    CHECK(std::abs(cy - 64) <= 3);
}

} // TEST_SUITE
