#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "corrsim/channels.hpp"
#include "corrsim/errors.hpp"
#include "corrsim/linalg.hpp"
#include "corrsim/rng.hpp"
#include "corrsim/serialize.hpp"
#include "corrsim/states.hpp"
#include "test_helpers.hpp"

using namespace corrsim;
namespace th = test_helpers;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("corrsim_test_" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_SUITE("serialize") {

TEST_CASE("matrix json round trip") {
  RngStream rng(500);
  const ComplexMatrix m = th::random_matrix(3, 2, rng);
  const ComplexMatrix back = matrix_from_json(matrix_to_json(m));
  CHECK(back.rows() == 3);
  CHECK(back.cols() == 2);
  CHECK(th::approx_equal(back, m, 1e-15));
}

TEST_CASE("matrix json rejects malformed input") {
  CHECK_THROWS_AS(matrix_from_json("not json"), IoError);
  CHECK_THROWS_AS(matrix_from_json("{}"), IoError);
  CHECK_THROWS_AS(matrix_from_json(R"({"rows":2,"cols":2,"entries":[[1,0]]})"),
                  IoError);
  CHECK_THROWS_AS(
      matrix_from_json(R"({"rows":1,"cols":1,"entries":[[1,0,0]]})"), IoError);
  CHECK_THROWS_AS(matrix_from_json(R"({"rows":-1,"cols":1,"entries":[]})"),
                  IoError);
}

TEST_CASE("channel json round trip keeps structure and behavior") {
  RngStream rng(501);
  const MixedUnitaryChannel ch = MixedUnitaryChannel::colur(
      {0.25, 0.75}, {random_unitary(2, rng), random_unitary(2, rng)},
      {random_unitary(3, rng), random_unitary(3, rng)});
  const MixedUnitaryChannel back = channel_from_json(channel_to_json(ch));
  CHECK(back.locality() == Locality::Colur);
  CHECK(back.size() == 2);
  CHECK(back.dim_a() == 2);
  CHECK(back.dim_b() == 3);
  const DensityMatrix rho = random_induced_mixed(DimList{2, 3}, 0, rng);
  CHECK(th::approx_equal(back.apply(rho).matrix(), ch.apply(rho).matrix(),
                         1e-12));
}

TEST_CASE("general channel round trip") {
  RngStream rng(502);
  const MixedUnitaryChannel ch = MixedUnitaryChannel::general(
      {0.5, 0.5}, {random_unitary(4, rng), random_unitary(4, rng)}, 2, 2);
  const MixedUnitaryChannel back = channel_from_json(channel_to_json(ch));
  CHECK(back.locality() == Locality::GeneralUnitary);
  const DensityMatrix rho = random_induced_mixed(DimList{2, 2}, 0, rng);
  CHECK(th::approx_equal(back.apply(rho).matrix(), ch.apply(rho).matrix(),
                         1e-12));
}

TEST_CASE("channel json rejects malformed and invalid input") {
  CHECK_THROWS_AS(channel_from_json("nope"), IoError);
  CHECK_THROWS_AS(channel_from_json("{}"), IoError);
  // Valid JSON carrying an invalid ensemble (probabilities sum to 2).
  const std::string bad = R"({
    "locality": "a_lur", "dimA": 2, "dimB": 2, "n": 1,
    "ensemble": [
      {"p": 1.0, "uA": {"rows":2,"cols":2,"entries":[[1,0],[0,0],[0,0],[1,0]]}},
      {"p": 1.0, "uA": {"rows":2,"cols":2,"entries":[[1,0],[0,0],[0,0],[1,0]]}}
    ]})";
  CHECK_THROWS(channel_from_json(bad));
  // Unknown locality string.
  const std::string loc = R"({
    "locality": "sideways", "dimA": 2, "dimB": 2, "n": 1,
    "ensemble": [
      {"p": 1.0, "uA": {"rows":2,"cols":2,"entries":[[1,0],[0,0],[0,0],[1,0]]}}
    ]})";
  CHECK_THROWS_AS(channel_from_json(loc), IoError);
}

TEST_CASE("file round trips") {
  TempDir tmp;
  RngStream rng(503);
  const ComplexMatrix m = th::random_matrix(2, 2, rng);
  const std::string mpath = (tmp.path / "m.json").string();
  save_matrix(mpath, m);
  CHECK(th::approx_equal(load_matrix(mpath), m, 1e-15));

  const MixedUnitaryChannel ch = MixedUnitaryChannel::a_lur(
      {1.0}, {random_unitary(2, rng)}, 2);
  const std::string cpath = (tmp.path / "c.json").string();
  save_channel(cpath, ch);
  const MixedUnitaryChannel back = load_channel(cpath);
  CHECK(back.locality() == Locality::ALur);

  CHECK_THROWS_AS(load_matrix((tmp.path / "missing.json").string()), IoError);
}

TEST_CASE("atomic writes leave no temporary behind") {
  TempDir tmp;
  const std::string path = (tmp.path / "out.txt").string();
  write_text_atomic(path, "payload");
  CHECK(read_text(path) == "payload");
  CHECK_FALSE(fs::exists(path + ".tmp"));
  // Overwrite works.
  write_text_atomic(path, "second");
  CHECK(read_text(path) == "second");
}

TEST_CASE("sweep csv is stable") {
  std::vector<SweepRow> rows;
  rows.push_back(SweepRow{7, 4.0, 0.5, 2.0, 2.0, 1.5});
  rows.push_back(SweepRow{8, 4.0, 0.25, 2.0, 1.0, 0.5});
  const std::string csv = sweep_to_csv(rows);
  CHECK(csv ==
        "seed,param,achieved_eps,log_n,shannon,entropy_exchange\n"
        "7,4,0.5,2,2,1.5\n"
        "8,4,0.25,2,1,0.5\n");
}

}  // TEST_SUITE
