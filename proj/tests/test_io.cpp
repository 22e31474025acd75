#include <doctest.h>

#include "qgs/analytic.hpp"
#include "qgs/config.hpp"
#include "qgs/numeric.hpp"

#include <filesystem>
#include <fstream>
#include <random>

using namespace qgs;

TEST_CASE("experiment rows survive the CSV round trip losslessly") {
  std::vector<ExperimentRow> rows;
  ExperimentRow a;
  a.x = 1234.5;
  a.ell = -3;
  a.beta = BetaClass::OnePlusLambda3;
  a.u = 17;
  a.value = ComplexVal{{0.1234567890123456789, -9.87e-5}, 3.25e-13};
  a.normalized = {0.317, -1.0 / 3.0};
  rows.push_back(a);
  ExperimentRow b;
  b.x = 1e6;
  b.ell = 0;
  b.beta = BetaClass::One;
  b.value = ComplexVal{{-4.0, 0.0}, 0.0};
  b.normalized = {-4.0 / 31622.7766, 0.0};
  rows.push_back(b);

  std::string csv = rows_to_csv(rows);
  auto parsed = rows_from_csv(csv);
  REQUIRE(parsed.size() == rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(parsed[i].x == rows[i].x);
    CHECK(parsed[i].ell == rows[i].ell);
    CHECK(parsed[i].beta == rows[i].beta);
    CHECK(parsed[i].u == rows[i].u);
    CHECK(parsed[i].value.v == rows[i].value.v);
    CHECK(parsed[i].value.err == rows[i].value.err);
    CHECK(parsed[i].normalized == rows[i].normalized);
  }

  CHECK(csv.rfind(kRowSchemaHeader, 0) == 0);
  CHECK_THROWS_AS(rows_from_csv("nonsense"), std::invalid_argument);

  std::string json = rows_to_json(rows);
  CHECK(json.find("\"schema\": \"qgs-rows v1\"") != std::string::npos);
  CHECK(json.find("\"u\": 17") != std::string::npos);
}

TEST_CASE("run config files") {
  std::string path = (std::filesystem::temp_directory_path() / "qgs_test.cfg").string();
  {
    std::ofstream out(path);
    out << "# comment\n";
    out << "x_max = 5000\n";
    out << "beta = 1+l3\n";
    out << "threads = 3\n";
    out << "format = json\n";
    out << "precision = dd\n";
  }
  RunConfig cfg = RunConfig::from_file(path);
  CHECK(cfg.x_max == 5000);
  CHECK(cfg.beta == BetaClass::OnePlusLambda3);
  CHECK(cfg.threads == 3);
  CHECK(cfg.format == RunConfig::Format::Json);
  CHECK(cfg.precision == Precision::DoubleDouble);
  cfg.validate();

  {
    std::ofstream out(path);
    out << "no_such_key = 1\n";
  }
  CHECK_THROWS_AS(RunConfig::from_file(path), std::invalid_argument);
  std::filesystem::remove(path);

  RunConfig bad;
  bad.x_max = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("geometric grids") {
  auto g = parse_grid("1e3:1e5:geometric8");
  REQUIRE(g.size() == 8);
  CHECK(g.front() == doctest::Approx(1000.0));
  CHECK(g.back() == doctest::Approx(100000.0));
  for (size_t i = 1; i < g.size(); ++i)
    CHECK(g[i] / g[i - 1] == doctest::Approx(g[1] / g[0]));
  CHECK(parse_grid("512").size() == 1);
  CHECK_THROWS_AS(parse_grid("10:5:geometric3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid("1:10:linear5"), std::invalid_argument);
}

TEST_CASE("deterministic reducer properties") {
  // the blocked pairwise tree is insensitive to where block boundaries fall,
  // because the term order is fixed; summing the same stream twice is equal
  SumAccumulator a, b;
  std::mt19937_64 rng(5);
  std::vector<Cplx> terms;
  for (int t = 0; t < 10000; ++t) {
    double x = static_cast<double>(rng() % 1000000) / 997.0 - 500.0;
    double y = static_cast<double>(rng() % 1000000) / 991.0 - 500.0;
    terms.emplace_back(x, y);
  }
  for (const Cplx& t : terms) a.add(t);
  for (const Cplx& t : terms) b.add(t);
  CHECK(a.result().v == b.result().v);

  // the error bound is honest against a compensated reference
  SumAccumulator comp(Precision::DoubleDouble);
  for (const Cplx& t : terms) comp.add(t);
  CHECK(std::abs(a.result().v - comp.result().v) <= a.result().err);

  // combine_blocks in block order matches a straight accumulation
  std::vector<ComplexVal> blocks;
  SumAccumulator whole;
  for (int bidx = 0; bidx < 10; ++bidx) {
    SumAccumulator part;
    for (int j = 0; j < 1000; ++j) {
      part.add(terms[bidx * 1000 + j]);
      whole.add(terms[bidx * 1000 + j]);
    }
    blocks.push_back(part.result());
  }
  Cplx combined = combine_blocks(blocks).v;
  CHECK(std::abs(combined - whole.result().v) < 1e-9);
}
