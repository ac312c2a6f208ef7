#include "solitonlab/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "solitonlab/error.hpp"

namespace solitonlab {

namespace {

std::uint64_t to_le(std::uint64_t x) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r = (r << 8) | ((x >> (8 * i)) & 0xffu);
    return r;
  }
  return x;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(std::move(cur));
  return cells;
}

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    throw Error(ErrorKind::Format, fmt::format("not a number: '{}'", s));
  }
}

}  // namespace

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

void write_series_csv(std::ostream& out, const std::vector<SeriesRow>& rows) {
  out << kSeriesHeader << '\n';
  for (const auto& r : rows) {
    out << format_double(r.t);
    for (std::size_t i = 0; i < 2; ++i) {
      if (i < r.solitons.size()) {
        const auto& s = r.solitons[i];
        out << ',' << format_double(s.a) << ',' << format_double(s.v) << ','
            << format_double(s.gamma) << ',' << format_double(s.mu);
      } else {
        out << ",,,,";
      }
    }
    out << ',' << format_double(r.w_l2) << ',' << format_double(r.residual) << ','
        << r.iterations << '\n';
  }
}

std::vector<SeriesRow> read_series_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSeriesHeader) {
    throw Error(ErrorKind::Format, "missing or unexpected series CSV header");
  }
  std::vector<SeriesRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 12) {
      throw Error(ErrorKind::Format, fmt::format("expected 12 columns, got {}", cells.size()));
    }
    SeriesRow r;
    r.t = parse_double(cells[0]);
    for (std::size_t i = 0; i < 2; ++i) {
      const std::size_t base = 1 + 4 * i;
      if (cells[base].empty()) continue;
      r.solitons.push_back({parse_double(cells[base]), parse_double(cells[base + 1]),
                            parse_double(cells[base + 2]), parse_double(cells[base + 3])});
    }
    r.w_l2 = parse_double(cells[9]);
    r.residual = parse_double(cells[10]);
    r.iterations = static_cast<int>(parse_double(cells[11]));
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_checkpoint(std::ostream& out, const WaveField& psi, const std::string& spec_hash) {
  const nlohmann::json header = {{"dim", psi.grid.dim},
                                 {"L", psi.grid.length},
                                 {"n", psi.grid.points},
                                 {"t", psi.time},
                                 {"spec_hash", spec_hash}};
  out << header.dump() << '\n';
  std::vector<std::uint64_t> raw(2 * psi.size());
  for (std::size_t j = 0; j < psi.size(); ++j) {
    raw[2 * j] = to_le(std::bit_cast<std::uint64_t>(psi.samples[j].real()));
    raw[2 * j + 1] = to_le(std::bit_cast<std::uint64_t>(psi.samples[j].imag()));
  }
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size() * sizeof(std::uint64_t)));
  if (!out) throw Error(ErrorKind::Io, "failed to write checkpoint");
}

void write_checkpoint(const std::filesystem::path& path, const WaveField& psi,
                      const std::string& spec_hash) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, fmt::format("cannot open {} for writing", path.string()));
  write_checkpoint(out, psi, spec_hash);
}

WaveField read_checkpoint(std::istream& in, CheckpointHeader* header) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Format, "empty checkpoint");
  CheckpointHeader h;
  try {
    const auto j = nlohmann::json::parse(line);
    h.dim = j.at("dim").get<int>();
    h.length = j.at("L").get<double>();
    h.points = j.at("n").get<std::size_t>();
    h.time = j.at("t").get<double>();
    h.spec_hash = j.at("spec_hash").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, fmt::format("bad checkpoint header: {}", e.what()));
  }
  if (h.dim != 1) throw Error(ErrorKind::Format, fmt::format("unsupported dim {}", h.dim));
  Grid grid;
  try {
    grid = Grid(h.length, h.points);
  } catch (const Error& e) {
    throw Error(ErrorKind::Format, fmt::format("bad checkpoint grid: {}", e.what()));
  }
  std::vector<std::uint64_t> raw(2 * h.points);
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(raw.size() * sizeof(std::uint64_t)));
  if (in.gcount() != static_cast<std::streamsize>(raw.size() * sizeof(std::uint64_t))) {
    throw Error(ErrorKind::Format, "truncated checkpoint payload");
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorKind::Format, "trailing bytes after checkpoint payload");
  }
  std::vector<cplx> s(h.points);
  for (std::size_t j = 0; j < h.points; ++j) {
    s[j] = {std::bit_cast<double>(to_le(raw[2 * j])), std::bit_cast<double>(to_le(raw[2 * j + 1]))};
  }
  if (header != nullptr) *header = h;
  return WaveField(grid, std::move(s), h.time);
}

WaveField read_checkpoint(const std::filesystem::path& path, CheckpointHeader* header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, fmt::format("cannot open {}", path.string()));
  return read_checkpoint(in, header);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, fmt::format("cannot open {} for writing", path.string()));
  out << text;
  if (!out) throw Error(ErrorKind::Io, fmt::format("failed writing {}", path.string()));
}

}  // namespace solitonlab
