#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "rgf/radar_proposals.hpp"
#include "rgf/random.hpp"

using rgf::PixelPoint;
using rgf::ProposalConfig;
using rgf::RoiProposal;

namespace {

constexpr int kWidth = 1600;
constexpr int kHeight = 900;

// Clamp-shift oracle for the x placement: max(0, min(cx - size/2, width - size)).
int clamp_shift_oracle(int center, int roi_size, int extent) {
  return std::max(0, std::min(center - roi_size / 2, extent - roi_size));
}

// Greedy dedup re-derived from the contract, kept separate from the
// implementation under test.
std::vector<RoiProposal> dedup_oracle(const std::vector<RoiProposal>& in, double threshold) {
  std::vector<RoiProposal> kept;
  for (const auto& p : in) {
    bool drop = false;
    for (const auto& k : kept) {
      const double inter = rgf::intersection_area(p.box(), k.box());
      const double uni = rgf::area(p.box()) + rgf::area(k.box()) - inter;
      if (uni > 0.0 && inter / uni >= threshold) drop = true;
    }
    if (!drop) kept.push_back(p);
  }
  return kept;
}

}  // namespace

TEST_CASE("interior point yields centered fixed-size ROI") {
  const auto rois = make_proposals({{800.0, 450.0}}, kWidth, kHeight, ProposalConfig{});
  REQUIRE(rois.size() == 1);
  CHECK(rois[0] == RoiProposal{680, 330, 920, 570, 0});
}

TEST_CASE("edge point shifts inside without shrinking") {
  const auto rois = make_proposals({{10.0, 450.0}}, kWidth, kHeight, ProposalConfig{});
  REQUIRE(rois.size() == 1);
  CHECK(rois[0] == RoiProposal{0, 330, 240, 570, 0});
  CHECK(rois[0].x1 - rois[0].x0 == 240);

  // Cross-check against the clamp-shift oracle for a spread of x positions.
  for (int x : {0, 10, 119, 120, 121, 800, 1479, 1480, 1481, 1599, 1600}) {
    const auto r = make_proposals({{static_cast<double>(x), 450.0}}, kWidth, kHeight,
                                  ProposalConfig{});
    REQUIRE(r.size() == 1);
    CHECK(r[0].x0 == clamp_shift_oracle(x, 240, kWidth));
    CHECK(r[0].x1 == r[0].x0 + 240);
  }
}

TEST_CASE("out-of-image points are dropped") {
  const std::vector<PixelPoint> points = {{-5.0, 100.0}, {200.0, -1.0}, {1601.0, 450.0},
                                          {800.0, 901.0}, {800.0, 450.0}};
  const auto rois = make_proposals(points, kWidth, kHeight, ProposalConfig{});
  REQUIRE(rois.size() == 1);
  CHECK(rois[0].source_point_index == 4);
}

TEST_CASE("truncation keeps the first max_proposals in input order") {
  std::vector<PixelPoint> points;
  for (int i = 0; i < 70; ++i) points.push_back({100.0 + 20.0 * i, 450.0});
  const auto rois = make_proposals(points, kWidth, kHeight, ProposalConfig{});
  REQUIRE(rois.size() == 64);
  for (int i = 0; i < 64; ++i) CHECK(rois[i].source_point_index == i);
}

TEST_CASE("ROI larger than the image clips to the image") {
  ProposalConfig cfg;
  cfg.roi_size = 1000;
  const auto rois = make_proposals({{400.0, 300.0}}, 800, 600, cfg);
  REQUIRE(rois.size() == 1);
  CHECK(rois[0] == RoiProposal{0, 0, 800, 600, 0});
}

TEST_CASE("empty input yields empty output") {
  CHECK(make_proposals({}, kWidth, kHeight, ProposalConfig{}).empty());
}

TEST_CASE("dedup keeps one of two identical ROIs") {
  const std::vector<RoiProposal> rois = {{100, 100, 340, 340, 0}, {100, 100, 340, 340, 1}};
  const auto kept = dedup_proposals(rois, 0.9);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].source_point_index == 0);
}

TEST_CASE("dedup keeps disjoint ROIs") {
  const std::vector<RoiProposal> rois = {{0, 0, 240, 240, 0}, {500, 500, 740, 740, 1}};
  CHECK(dedup_proposals(rois, 0.5).size() == 2);
}

TEST_CASE("dedup matches exhaustive pairwise oracle on random sets") {
  rgf::KeyedStream stream({11});
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<RoiProposal> rois;
    for (int i = 0; i < 10; ++i) {
      const int x0 = static_cast<int>(stream.uniform_int(0, kWidth - 240));
      const int y0 = static_cast<int>(stream.uniform_int(0, kHeight - 240));
      rois.push_back({x0, y0, x0 + 240, y0 + 240, i});
    }
    const double threshold = stream.uniform(0.1, 0.9);
    CHECK(dedup_proposals(rois, threshold) == dedup_oracle(rois, threshold));
  }
}

TEST_CASE("proposals always lie inside the image and preserve size") {
  rgf::KeyedStream stream({12});
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<PixelPoint> points;
    const int n = static_cast<int>(stream.uniform_int(0, 80));
    for (int i = 0; i < n; ++i) {
      points.push_back({stream.uniform(-100, kWidth + 100), stream.uniform(-100, kHeight + 100)});
    }
    ProposalConfig cfg;
    cfg.roi_size = static_cast<int>(stream.uniform_int(16, 1000));
    const auto rois = make_proposals(points, kWidth, kHeight, cfg);

    int in_image = 0;
    for (const auto& p : points) {
      if (p.cx >= 0 && p.cx <= kWidth && p.cy >= 0 && p.cy <= kHeight) ++in_image;
    }
    CHECK(static_cast<int>(rois.size()) == std::min(in_image, cfg.max_proposals));

    for (const auto& r : rois) {
      CHECK(r.x0 >= 0);
      CHECK(r.y0 >= 0);
      CHECK(r.x1 <= kWidth);
      CHECK(r.y1 <= kHeight);
      CHECK(r.x1 - r.x0 == std::min(cfg.roi_size, kWidth));
      CHECK(r.y1 - r.y0 == std::min(cfg.roi_size, kHeight));
    }
  }
}
