#include <gtest/gtest.h>

#include "mixsdg/mixsdg.hpp"
#include "scratch.hpp"

using namespace mixsdg;
using testing_util::ScratchDir;

namespace {

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

const char* kSquares = R"({
  "type": "FeatureCollection",
  "features": [
    {"type": "Feature", "properties": {"id": "a", "value": 1},
     "geometry": {"type": "Polygon", "coordinates": [[[0,0],[1,0],[1,1],[0,1],[0,0]]]}},
    {"type": "Feature", "properties": {"id": "b", "value": 2},
     "geometry": {"type": "Polygon", "coordinates": [[[1,0],[2,0],[2,1],[1,1],[1,0]]]}},
    {"type": "Feature", "properties": {"id": "c", "value": 3},
     "geometry": {"type": "Polygon", "coordinates": [[[0,1],[1,1],[1,2],[0,2],[0,1]]]}},
    {"type": "Feature", "id": 7, "properties": {"value": 4.5},
     "geometry": {"type": "MultiPolygon", "coordinates": [[[[1,1],[2,1],[2,2],[1,2],[1,1]]]]}}
  ]
})";

}  // namespace

TEST(Manifest, TwoComponentHappyPath) {
  ScratchDir dir("io_happy");
  dir.write("pts.csv", "name,x,y\nburglary,0.1,0.2\nburglary,0.3,0.4\nother,0.5,0.5\n");
  dir.write("lat.csv", "id,x,y,value\nw1,0.25,0.25,3\nw2,0.75,0.75,5\n");
  const auto m = dir.write("m.json", R"({"window": [0, 0, 1, 1], "components": [
    {"name": "burglary", "kind": "points", "file": "pts.csv"},
    {"name": "wards", "kind": "lattice", "file": "lat.csv"}]})");
  const auto ds = read_manifest(m);
  ASSERT_EQ(ds.dimension(), 2u);
  EXPECT_EQ(ds.names(), (std::vector<std::string>{"burglary", "wards"}));
  EXPECT_EQ(component_size(ds.components[0]), 2u);
  EXPECT_EQ(std::get<LatticeComponent>(ds.components[1]).sites[1].value, 5.0);
  EXPECT_EQ(ds.window, Window::unit());
  EXPECT_TRUE(validate(ds).accepted());
}

TEST(Manifest, FilterSelectsRows) {
  ScratchDir dir("io_filter");
  dir.write("pts.csv", "name,x,y\na,0.1,0.2\nb,0.3,0.4\nb,0.5,0.5\n");
  const auto m = dir.write("m.json", R"({"components": [
    {"name": "first", "kind": "points", "file": "pts.csv", "filter": "b"},
    {"name": "all", "kind": "points", "file": "pts.csv", "filter": "*"}]})");
  const auto ds = read_manifest(m);
  EXPECT_EQ(component_size(ds.components[0]), 2u);
  EXPECT_EQ(component_size(ds.components[1]), 3u);
  EXPECT_EQ(ds.window, (Window{0.1, 0.2, 0.5, 0.5}));
}

TEST(Manifest, MissingValueColumnIsNamed) {
  ScratchDir dir("io_missing");
  dir.write("lat.csv", "id,x,y\nw1,0.25,0.25\n");
  dir.write("pts.csv", "name,x,y\np,0.1,0.2\n");
  const auto m = dir.write("m.json", R"({"components": [
    {"name": "p", "kind": "points", "file": "pts.csv"},
    {"name": "l", "kind": "lattice", "file": "lat.csv"}]})");
  EXPECT_NE(message_of([&] { read_manifest(m); }).find("'value'"), std::string::npos);
}

TEST(Manifest, MalformedRowReportsLine) {
  ScratchDir dir("io_malformed");
  dir.write("pts.csv", "name,x,y\np,0.1,0.2\np,0.3\n");
  const auto m = dir.write("m.json", R"({"components": [{"name": "p", "kind": "points", "file": "pts.csv"}]})");
  const auto msg = message_of([&] { read_manifest(m); });
  EXPECT_NE(msg.find(":3:"), std::string::npos) << msg;
  EXPECT_NE(msg.find("malformed row"), std::string::npos);
  dir.write("pts.csv", "name,x,y\np,0.1,abc\n");
  EXPECT_NE(message_of([&] { read_manifest(m); }).find(":2"), std::string::npos);
}

TEST(Manifest, MixedWindowsRejected) {
  ScratchDir dir("io_windows");
  dir.write("pts.csv", "name,x,y\np,0.1,0.2\nq,0.1,0.2\n");
  const auto m = dir.write("m.json", R"({"components": [
    {"name": "p", "kind": "points", "file": "pts.csv", "window": [0, 0, 1, 1]},
    {"name": "q", "kind": "points", "file": "pts.csv", "window": [0, 0, 2, 2]}]})");
  EXPECT_NE(message_of([&] { read_manifest(m); }).find("mixed windows"), std::string::npos);
}

TEST(Manifest, UnknownKindRejected) {
  ScratchDir dir("io_kind");
  dir.write("pts.csv", "name,x,y\np,0.1,0.2\n");
  const auto m = dir.write("m.json", R"({"components": [{"name": "p", "kind": "raster", "file": "pts.csv"}]})");
  EXPECT_NE(message_of([&] { read_manifest(m); }).find("unknown kind"), std::string::npos);
}

TEST(Manifest, PolygonCollectionGivesCentroidSites) {
  ScratchDir dir("io_poly");
  dir.write("wards.geojson", kSquares);
  const auto sites = read_polygons_geojson(dir / "wards.geojson");
  ASSERT_EQ(sites.size(), 4u);
  EXPECT_EQ(sites[0].id, "a");
  EXPECT_EQ(sites[3].id, "7");
  EXPECT_NEAR(sites[0].centroid.x, 0.5, 1e-15);
  EXPECT_NEAR(sites[3].centroid.x, 1.5, 1e-15);
  EXPECT_NEAR(sites[3].centroid.y, 1.5, 1e-15);
  EXPECT_EQ(sites[3].value, 4.5);

  dir.write("pts.csv", "name,x,y\np,0.1,0.2\n");
  const auto m = dir.write("m.json", R"({"window": {"x_min": 0, "y_min": 0, "x_max": 2, "y_max": 2},
    "components": [{"name": "p", "kind": "points", "file": "pts.csv"},
                   {"name": "wards", "kind": "polygons", "file": "wards.geojson"}]})");
  const auto ds = read_manifest(m);
  EXPECT_EQ(component_size(ds.components[1]), 4u);
  EXPECT_EQ(component_kind(ds.components[1]), ComponentKind::lattice);
}

TEST(Manifest, PolygonWithoutValueRejected) {
  ScratchDir dir("io_poly_bad");
  dir.write("w.geojson", R"({"type": "FeatureCollection", "features": [
    {"type": "Feature", "properties": {}, "geometry": {"type": "Polygon", "coordinates": [[[0,0],[1,0],[1,1],[0,0]]]}}]})");
  EXPECT_NE(message_of([&] { read_polygons_geojson(dir / "w.geojson"); }).find("value"), std::string::npos);
}

TEST(Manifest, RegularLatticeCellsFromCentroids) {
  ScratchDir dir("io_regular");
  dir.write("lat.csv", "id,x,y,value\nc,1.5,0.5,3\nd,1.5,1.5,4\na,0.5,0.5,1\nb,0.5,1.5,2\n");
  dir.write("pts.csv", "name,x,y\np,0.1,0.2\n");
  const auto m = dir.write("m.json", R"({"window": [0, 0, 2, 2], "components": [
    {"name": "p", "kind": "points", "file": "pts.csv"},
    {"name": "l", "kind": "lattice", "file": "lat.csv", "regular": [2, 2]}]})");
  const auto ds = read_manifest(m);
  const auto& lc = std::get<LatticeComponent>(ds.components[1]);
  ASSERT_TRUE(lc.regular);
  EXPECT_EQ(*lc.sites[0].cell, (CellIndex{1, 0}));
  EXPECT_EQ(*lc.sites[3].cell, (CellIndex{0, 1}));
  EXPECT_TRUE(validate(ds).accepted());
  EXPECT_NO_THROW(dft_lattice(LatticeComponent{lc.name, [&] {
                                                 auto s = lc.sites;
                                                 for (auto& x : s) x.value -= 2.5;
                                                 return s;
                                               }(),
                                               lc.regular}));
}

TEST(WriteDataset, RoundTripIsExactAndOrdered) {
  ScratchDir dir("io_roundtrip");
  HybridDataset ds{{-1.5, 2.0, 3.25, 7.0}, {}};
  ds.components.push_back(sim_poisson(30, ds.window, 1, "zeta"));
  ds.components.push_back(sim_white_noise_lattice(regular_layout("alpha", 3, 4, ds.window), 2.0, 2));
  ds.components.push_back(sim_poisson(20, ds.window, 3, "mid"));
  write_dataset(dir / "out" / "manifest.json", ds);
  const auto back = read_manifest(dir / "out" / "manifest.json");
  EXPECT_EQ(back.window, ds.window);
  EXPECT_EQ(back.names(), ds.names());
  EXPECT_EQ(std::get<PointComponent>(back.components[0]).locations, std::get<PointComponent>(ds.components[0]).locations);
  const auto& a = std::get<LatticeComponent>(ds.components[1]);
  const auto& b = std::get<LatticeComponent>(back.components[1]);
  ASSERT_TRUE(b.regular);
  EXPECT_EQ(b.regular->l1, 3);
  for (std::size_t k = 0; k < a.sites.size(); ++k) {
    EXPECT_EQ(a.sites[k].id, b.sites[k].id);
    EXPECT_EQ(a.sites[k].value, b.sites[k].value);
    EXPECT_EQ(a.sites[k].centroid, b.sites[k].centroid);
    EXPECT_EQ(*a.sites[k].cell, *b.sites[k].cell);
  }
}

TEST(Format, DataAndDisplayPrecision) {
  EXPECT_EQ(fmt_data(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(fmt_data(1.0 / 3.0)), 1.0 / 3.0);
  EXPECT_EQ(fmt_display(1.0 / 3.0), "0.33333");
  EXPECT_EQ(fmt_data(std::nan("")), "NaN");
}
