#include <random>

#include <gtest/gtest.h>

#include "mixsdg/mixsdg.hpp"

using namespace mixsdg;

TEST(Rescale, IdentityWindow) {
  const std::vector<Point> p{{0.5, 0.5}};
  EXPECT_EQ(rescale_unit_square(p, Window::unit())[0], (Point{0.5, 0.5}));
}

TEST(Rescale, LinearMap) {
  const std::vector<Point> p{{5, 10}, {10, 20}, {0, 0}};
  const auto r = rescale_unit_square(p, {0, 0, 10, 20});
  EXPECT_EQ(r[0], (Point{0.5, 0.5}));
  EXPECT_EQ(r[1], (Point{1.0, 1.0}));
  EXPECT_EQ(r[2], (Point{0.0, 0.0}));
}

TEST(Rescale, RejectsPointsOutsideWindow) {
  const std::vector<Point> p{{11, 0}};
  EXPECT_THROW(rescale_unit_square(p, {0, 0, 10, 20}), Error);
}

TEST(Rescale, IdempotentOnUnitSquare) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 8.0);
  const Window w{-3, -3, 8, 8};
  std::vector<Point> p;
  for (int k = 0; k < 100; ++k) p.push_back({u(rng), u(rng)});
  const auto once = rescale_unit_square(p, w);
  const auto twice = rescale_unit_square(once, Window::unit());
  for (std::size_t k = 0; k < p.size(); ++k) {
    EXPECT_EQ(once[k], twice[k]);
    EXPECT_GE(once[k].x, 0.0);
    EXPECT_LE(once[k].y, 1.0);
  }
}

TEST(Standardize, ScalesByCountOverSide) {
  EXPECT_EQ(standardize_coords(std::vector<Point>{{1, 1}}, 2, 2, 2)[0], (Point{1, 1}));
  EXPECT_EQ(standardize_coords(std::vector<Point>{{1, 2}}, 10, 5, 5)[0], (Point{2, 4}));
  EXPECT_EQ(standardize_coords(std::vector<Point>{{0, 0}}, 1, 3, 7)[0], (Point{0, 0}));
}

TEST(Demean, Examples) {
  EXPECT_EQ(demean(std::vector<double>{3, 3, 3}), (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(demean(std::vector<double>{1, 2, 3}), (std::vector<double>{-1, 0, 1}));
  try {
    demean(std::vector<double>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("empty"), std::string::npos);
  }
}

TEST(Demean, IdempotentAndZeroSum) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> z(5.0, 3.0);
  std::vector<double> v(257);
  for (auto& x : v) x = z(rng);
  const auto a = demean(v);
  const auto b = demean(a);
  double s = 0.0, abs = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_NEAR(a[k], b[k], 1e-12);
    s += a[k];
    abs += std::abs(a[k]);
  }
  EXPECT_LE(std::abs(s), 1e-9 * abs);
}

TEST(PolygonCentroid, Examples) {
  const Polygon square{{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}}, {}};
  const auto c = polygon_centroid(square);
  EXPECT_NEAR(c.x, 0.5, 1e-15);
  EXPECT_NEAR(c.y, 0.5, 1e-15);

  const Polygon tri{{{0, 0}, {1, 0}, {0, 1}, {0, 0}}, {}};
  const auto t = polygon_centroid(tri);
  EXPECT_NEAR(t.x, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(t.y, 1.0 / 3.0, 1e-15);

  const Polygon holed{{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}},
                      {{{0.25, 0.25}, {0.25, 0.75}, {0.75, 0.75}, {0.75, 0.25}, {0.25, 0.25}}}};
  const auto h = polygon_centroid(holed);
  EXPECT_NEAR(h.x, 0.5, 1e-15);
  EXPECT_NEAR(h.y, 0.5, 1e-15);
}

TEST(PolygonCentroid, OrientationAndTranslation) {
  const Polygon cw{{{0, 0}, {0, 2}, {3, 2}, {3, 0}, {0, 0}}, {}};
  const auto c = polygon_centroid(cw);
  EXPECT_NEAR(c.x, 1.5, 1e-12);
  EXPECT_NEAR(c.y, 1.0, 1e-12);
  const Polygon far{{{1e6, 1e6}, {1e6 + 3, 1e6}, {1e6 + 3, 1e6 + 2}, {1e6, 1e6 + 2}, {1e6, 1e6}}, {}};
  const auto f = polygon_centroid(far);
  EXPECT_NEAR(f.x, 1e6 + 1.5, 1e-6);
  EXPECT_NEAR(f.y, 1e6 + 1.0, 1e-6);
}

TEST(PolygonCentroid, MultiPartIsAreaWeighted) {
  const std::vector<Polygon> parts{{{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}}, {}},
                                   {{{2, 0}, {4, 0}, {4, 1}, {2, 1}, {2, 0}}, {}}};
  const auto c = polygon_centroid(parts);
  EXPECT_NEAR(c.x, (0.5 * 1 + 3.0 * 2) / 3.0, 1e-12);
  EXPECT_NEAR(c.y, 0.5, 1e-12);
}

TEST(PolygonCentroid, ZeroAreaThrows) {
  const Polygon line{{{0, 0}, {1, 1}, {2, 2}, {0, 0}}, {}};
  EXPECT_THROW(polygon_centroid(line), Error);
}

TEST(ToMarkedPattern, PointComponentHasUnitMarks) {
  const PointComponent pc{"p", {{1, 2}, {3, 4}, {5, 6}}};
  const auto m = to_marked_pattern(pc, {0, 0, 10, 10});
  ASSERT_EQ(m.points.size(), 3u);
  EXPECT_EQ(m.kind, PatternKind::point_derived);
  for (const auto& p : m.points) EXPECT_EQ(p.mark, 1.0);
  EXPECT_DOUBLE_EQ(m.points[2].x, 0.5);
}

TEST(ToMarkedPattern, LatticeMarksAreDemeaned) {
  LatticeComponent lc{"l", {{"a", {0.25, 0.5}, 2.0, {}}, {"b", {0.75, 0.5}, 4.0, {}}}, {}};
  const auto m = to_marked_pattern(lc, Window::unit());
  EXPECT_EQ(m.kind, PatternKind::lattice_derived);
  EXPECT_EQ(m.points[0].mark, -1.0);
  EXPECT_EQ(m.points[1].mark, 1.0);
  EXPECT_EQ(m.points[0].x, 0.25);
}

TEST(ToMarkedPattern, RegularGridUsesCellCentres) {
  const auto lc = make_regular_lattice("g", 2, 2, std::vector<double>{1, 2, 3, 4}, Window::unit());
  const auto m = to_marked_pattern(lc, Window::unit());
  ASSERT_EQ(m.points.size(), 4u);
  EXPECT_EQ(m.points[0].x, 0.25);
  EXPECT_EQ(m.points[0].y, 0.25);
  EXPECT_EQ(m.points[3].x, 0.75);
  EXPECT_EQ(m.points[3].y, 0.75);
  EXPECT_NO_THROW(m.check());
}
