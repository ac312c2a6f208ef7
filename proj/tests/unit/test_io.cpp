#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "solitonlab/error.hpp"
#include "solitonlab/io.hpp"
#include "support.hpp"

using namespace solitonlab;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::Domain;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("number formatting keeps 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(-1.5e-300) == "-1.5000000000000001e-300");
  for (double x : {1.0 / 3.0, std::numbers::pi, -7.25e12, 5e-324}) {
    CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
  }
}

TEST_CASE("empty series is a header-only file") {
  std::ostringstream out;
  write_series_csv(out, {});
  CHECK(out.str() == std::string(kSeriesHeader) + "\n");
  std::istringstream in(out.str());
  CHECK(read_series_csv(in).empty());
}

TEST_CASE("series round trip is exact") {
  std::vector<SeriesRow> rows;
  rows.push_back({0.0, {{-3.0, 1.0 / 3.0, 0.1, 1.0}, {3.0, -2.0, 6.0, 1.7}}, 1e-9, 2.5e-13, 4});
  rows.push_back({0.05, {{-2.9, 1.0 / 7.0, 0.2, 1.0}}, 0.0, 0.0, 0});
  std::ostringstream out;
  write_series_csv(out, rows);
  const auto text = out.str();
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.substr(text.find('\n') + 1, 4) == "0,-3");
  std::istringstream in(text);
  const auto back = read_series_csv(in);
  REQUIRE(back.size() == 2);
  CHECK(back[0].solitons == rows[0].solitons);
  CHECK(back[0].w_l2 == rows[0].w_l2);
  CHECK(back[0].residual == rows[0].residual);
  CHECK(back[0].iterations == 4);
  CHECK(back[1].solitons.size() == 1);
  CHECK(back[1].solitons[0] == rows[1].solitons[0]);
  CHECK(back[1].t == 0.05);
}

TEST_CASE("malformed series is a format error") {
  std::istringstream bad_header("t,a1\n1,2\n");
  CHECK(kind_of([&] { read_series_csv(bad_header); }) == ErrorKind::Format);
  std::istringstream short_row(std::string(kSeriesHeader) + "\n1,2,3\n");
  CHECK(kind_of([&] { read_series_csv(short_row); }) == ErrorKind::Format);
}

TEST_CASE("checkpoint round trip is bit exact") {
  const Grid g(40.0, 256);
  auto psi = testing::random_smooth(g, 5);
  psi.time = 1.0 / 3.0;
  psi.samples[7] = {-0.0, std::numeric_limits<double>::denorm_min()};
  std::stringstream buf;
  write_checkpoint(buf, psi, "abc123");
  CheckpointHeader h;
  const auto back = read_checkpoint(buf, &h);
  CHECK(h.dim == 1);
  CHECK(h.length == 40.0);
  CHECK(h.points == 256);
  CHECK(h.time == psi.time);
  CHECK(h.spec_hash == "abc123");
  CHECK(back.time == psi.time);
  CHECK(std::memcmp(back.samples.data(), psi.samples.data(), 256 * sizeof(cplx)) == 0);
}

TEST_CASE("checkpoint payload is little-endian pairs after one header line") {
  const Grid g(10.0, 16);
  auto psi = WaveField::zeros(g);
  psi.samples[0] = {1.0, -2.0};
  std::stringstream buf;
  write_checkpoint(buf, psi, "h");
  const auto text = buf.str();
  const auto nl = text.find('\n');
  REQUIRE(nl != std::string::npos);
  CHECK(text.size() == nl + 1 + 16 * 16);
  const unsigned char* p = reinterpret_cast<const unsigned char*>(text.data() + nl + 1);
  // 1.0 = 0x3FF0000000000000 stored low byte first.
  CHECK(p[6] == 0xF0);
  CHECK(p[7] == 0x3F);
  CHECK(p[15] == 0xC0);
}

TEST_CASE("truncated or padded checkpoints are rejected") {
  const Grid g(10.0, 16);
  std::stringstream buf;
  write_checkpoint(buf, testing::random_smooth(g, 1), "h");
  const auto text = buf.str();
  std::istringstream truncated(text.substr(0, text.size() - 3));
  CHECK(kind_of([&] { read_checkpoint(truncated); }) == ErrorKind::Format);
  std::istringstream padded(text + "x");
  CHECK(kind_of([&] { read_checkpoint(padded); }) == ErrorKind::Format);
  std::istringstream garbage("not json\n");
  CHECK(kind_of([&] { read_checkpoint(garbage); }) == ErrorKind::Format);
  std::istringstream empty("");
  CHECK(kind_of([&] { read_checkpoint(empty); }) == ErrorKind::Format);
}

}  // TEST_SUITE
