#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "solitonlab/field.hpp"

namespace solitonlab {

/// One line of a parameter time series. Missing solitons leave their columns empty.
struct SeriesRow {
  double t = 0.0;
  std::vector<SolitonParams> solitons;
  double w_l2 = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

inline constexpr const char* kSeriesHeader =
    "t,a1,v1,gamma1,mu1,a2,v2,gamma2,mu2,w_l2,residual,iterations";

/// 17 significant digits, shortest "%g"-style form.
std::string format_double(double x);

/// RFC-4180 with LF line endings.
void write_series_csv(std::ostream& out, const std::vector<SeriesRow>& rows);
std::vector<SeriesRow> read_series_csv(std::istream& in);

struct CheckpointHeader {
  int dim = 1;
  double length = 0.0;
  std::size_t points = 0;
  double time = 0.0;
  std::string spec_hash;
};

/// One JSON header line {dim, L, n, t, spec_hash}, then n little-endian
/// IEEE-754 (Re, Im) pairs in grid order.
void write_checkpoint(std::ostream& out, const WaveField& psi, const std::string& spec_hash);
void write_checkpoint(const std::filesystem::path& path, const WaveField& psi,
                      const std::string& spec_hash);
/// Throws Error(Format) on a malformed or truncated file.
WaveField read_checkpoint(std::istream& in, CheckpointHeader* header = nullptr);
WaveField read_checkpoint(const std::filesystem::path& path, CheckpointHeader* header = nullptr);

/// Writes text to path, creating parent directories. Throws Error(Io).
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace solitonlab
