#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "enclosure/geometry.hpp"

using namespace enclosure;

namespace {

const std::vector<Vec2> kSquare{{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}};
const std::vector<Vec2> kLshape{{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.0},
                                {0.0, 0.0},   {0.0, 0.5},  {-0.5, 0.5}};

}  // namespace

TEST_CASE("support function sees only the convex hull") {
  CHECK(support_function(kSquare, {1.0, 0.0}) == Catch::Approx(0.5));
  CHECK(support_function(kSquare, unit_vector(kPi / 4.0)) ==
        Catch::Approx(std::sqrt(2.0) / 2.0));
  const auto hull = convex_hull(kLshape);
  CHECK(hull.size() == 5);  // the reentrant corner drops out
  for (int j = 0; j < 40; ++j) {
    const Vec2 w = unit_vector(2.0 * kPi * j / 40.0 + 0.013);
    CHECK(support_function(kLshape, w) == Catch::Approx(support_function(hull, w)).margin(1e-14));
  }
  CHECK_THROWS_AS(support_function({}, {1.0, 0.0}), DegeneratePolygon);
}

TEST_CASE("regular directions have a unique supporting vertex") {
  CHECK_FALSE(is_regular_direction(kSquare, {1.0, 0.0}));
  CHECK_FALSE(is_regular_direction(kSquare, {0.0, -1.0}));
  CHECK(is_regular_direction(kSquare, unit_vector(kPi / 4.0)));
  CHECK(is_regular_direction(kSquare, unit_vector(kPi / 6.0)));
  // The margin is an absolute gap: at 30 degrees the two leading projections
  // differ by exactly 0.5 on the unit square.
  CHECK(is_regular_direction(kSquare, unit_vector(kPi / 6.0), 0.4));
  CHECK_FALSE(is_regular_direction(kSquare, unit_vector(kPi / 6.0), 0.6));
  // A tie split by less than the margin counts as non-regular.
  CHECK_FALSE(is_regular_direction(kSquare, unit_vector(1e-13)));
}

TEST_CASE("corner frame data at the supporting vertex") {
  SECTION("symmetric square corner") {
    const VertexData vd = vertex_data(kSquare, unit_vector(kPi / 4.0));
    CHECK(vd.p.x1 == Catch::Approx(0.5));
    CHECK(vd.p.x2 == Catch::Approx(0.5));
    CHECK(vd.f == Catch::Approx(1.0));
    CHECK(vd.g == Catch::Approx(-1.0));
    CHECK(std::abs(vd.amplitude - Complex{1.0, 0.0}) <= 1e-14);
  }
  SECTION("tilted corner slopes measured in the probe frame") {
    const std::vector<Vec2> tri{{0.0, 1.0}, {-0.3, 0.0}, {0.8, -0.2}};
    const VertexData vd = vertex_data(tri, {0.0, 1.0});
    CHECK(vd.p.x2 == Catch::Approx(1.0));
    CHECK(vd.f == Catch::Approx(0.3));
    CHECK(vd.g == Catch::Approx(-0.8 / 1.2));
    const Complex i{0.0, 1.0};
    const Complex expected = (vd.f - vd.g) / ((1.0 - i * vd.f) * (1.0 - i * vd.g));
    CHECK(std::abs(vd.amplitude - expected) <= 1e-15);
  }
  SECTION("failure modes") {
    CHECK_THROWS_AS(vertex_data(kSquare, {1.0, 0.0}), NonRegularDirection);
    const std::vector<Vec2> flat{{0.0, 1.0}, {0.25, 0.75}, {0.0, 0.0}, {0.5, 0.5}};
    CHECK_THROWS_AS(vertex_data(flat, {0.0, 1.0}), DegenerateCone);
  }
}

TEST_CASE("convex hull drops interior and collinear points") {
  std::vector<Vec2> pts = kSquare;
  pts.push_back({0.0, 0.0});
  pts.push_back({0.1, -0.2});
  pts.push_back({0.0, -0.5});  // midpoint of the bottom edge
  pts.push_back({0.5, 0.0});   // midpoint of the right edge
  const auto hull = convex_hull(pts);
  REQUIRE(hull.size() == 4);
  CHECK(hull[0].x1 == -0.5);  // canonical: lexicographically smallest first
  CHECK(hull[0].x2 == -0.5);
  CHECK(polygon_area(hull) == Catch::Approx(1.0));

  CHECK_THROWS_AS(convex_hull({{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}, {3.0, 3.0}}), CollinearInput);
  CHECK_THROWS_AS(convex_hull({{0.0, 0.0}, {1.0, 1.0}, {1.0, 1.0}}), CollinearInput);
}

TEST_CASE("convex hull of random clouds is convex and tight") {
  std::mt19937 gen(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Vec2> pts;
    for (int i = 0; i < 200; ++i) pts.push_back({u(gen), u(gen)});
    const auto hull = convex_hull(pts);
    CHECK(polygon_area(hull) > 0.0);
    for (std::size_t i = 0; i < hull.size(); ++i) {
      const Vec2 a = hull[i];
      const Vec2 b = hull[(i + 1) % hull.size()];
      const Vec2 c = hull[(i + 2) % hull.size()];
      CHECK(cross(b - a, c - b) > 0.0);
    }
    for (int j = 0; j < 16; ++j) {
      const Vec2 w = unit_vector(2.0 * kPi * j / 16.0);
      double hp = -1e300;
      for (const Vec2& p : pts) hp = std::max(hp, dot(p, w));
      CHECK(support_function(hull, w) == Catch::Approx(hp).margin(1e-12));
    }
  }
}

TEST_CASE("half-plane intersection recovers inscribed polygons") {
  SECTION("regular octagon from eight tangent lines") {
    std::vector<HalfPlane> planes;
    for (int j = 0; j < 8; ++j) planes.push_back({unit_vector(2.0 * kPi * j / 8.0), 1.0});
    const auto poly = halfplane_hull(planes, {-3.0, -3.0}, {3.0, 3.0});
    REQUIRE(poly.size() == 8);
    CHECK(polygon_area(poly) == Catch::Approx(8.0 * std::tan(kPi / 8.0)).epsilon(1e-12));
    for (const Vec2& v : poly) CHECK(norm(v) == Catch::Approx(1.0 / std::cos(kPi / 8.0)));
  }
  SECTION("support planes of a square reproduce it exactly") {
    std::vector<HalfPlane> planes;
    for (int j = 0; j < 72; ++j) {
      const Vec2 w = unit_vector(2.0 * kPi * j / 72.0);
      planes.push_back({w, support_function(kSquare, w)});
    }
    const auto poly = halfplane_hull(planes, {-2.0, -2.0}, {2.0, 2.0});
    CHECK(hausdorff_distance(poly, kSquare) <= 1e-9);
  }
  SECTION("bounding box participates in the clipping") {
    std::vector<HalfPlane> planes;
    for (int j = 0; j < 4; ++j) planes.push_back({unit_vector(2.0 * kPi * j / 4.0), 10.0});
    const auto poly = halfplane_hull(planes, {-0.5, -0.5}, {0.5, 0.5});
    CHECK(polygon_area(poly) == Catch::Approx(1.0));
  }
  SECTION("failure modes") {
    CHECK_THROWS_AS(halfplane_hull({{{1.0, 0.0}, 1.0}, {{0.0, 1.0}, 1.0}}, {-2.0, -2.0},
                                   {2.0, 2.0}),
                    InsufficientDirections);
    const std::vector<HalfPlane> contradictory{
        {{1.0, 0.0}, -10.0}, {{-1.0, 0.0}, -10.0}, {{0.0, 1.0}, 1.0}};
    CHECK_THROWS_AS(halfplane_hull(contradictory, {-2.0, -2.0}, {2.0, 2.0}), EmptyIntersection);
  }
}

TEST_CASE("point and polygon metric helpers") {
  CHECK(point_segment_distance({0.0, 1.0}, {-1.0, 0.0}, {1.0, 0.0}) == Catch::Approx(1.0));
  CHECK(point_segment_distance({3.0, 0.0}, {-1.0, 0.0}, {1.0, 0.0}) == Catch::Approx(2.0));
  CHECK(point_segment_distance({2.0, 2.0}, {1.0, 1.0}, {1.0, 1.0}) ==
        Catch::Approx(std::sqrt(2.0)));
  CHECK(distance_to_polygon(kSquare, {0.0, 0.0}) == Catch::Approx(0.5));
  CHECK(distance_to_polygon(kSquare, {1.0, 0.0}) == Catch::Approx(0.5));
  CHECK(point_in_polygon(kSquare, {0.0, 0.0}));
  CHECK_FALSE(point_in_polygon(kSquare, {2.0, 0.0}));
  CHECK(point_in_polygon(kLshape, {-0.25, 0.25}));
  CHECK(point_in_polygon(kLshape, {0.25, -0.25}));
  CHECK_FALSE(point_in_polygon(kLshape, {0.25, 0.25}));  // the notch
}

TEST_CASE("hausdorff distance between convex polygons") {
  CHECK(hausdorff_distance(kSquare, kSquare) == 0.0);
  std::vector<Vec2> shifted;
  for (const Vec2& v : kSquare) shifted.push_back(v + Vec2{0.1, 0.0});
  CHECK(hausdorff_distance(kSquare, shifted) == Catch::Approx(0.1));
  std::vector<Vec2> inflated;
  for (const Vec2& v : kSquare) inflated.push_back(v * 1.2);
  CHECK(hausdorff_distance(kSquare, inflated) == Catch::Approx(0.1 * std::sqrt(2.0)));
  CHECK_THROWS_AS(hausdorff_distance(kSquare, {{0.0, 0.0}, {1.0, 0.0}}), DegeneratePolygon);
}
