#pragma once

#include <filesystem>
#include <string>

#include "corrsim/channels.hpp"
#include "corrsim/linalg.hpp"

namespace corrsim {

// Matrix literal: { "rows": n, "cols": m, "entries": [[re, im], ...] },
// entries row-major. Round-trips exactly (shortest-representation doubles).
std::string matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const std::string& text);

// Channel description: { "locality": ..., "dimA": ..., "dimB": ..., "n": ...,
// "ensemble": [{"p": x, "uA": matrix, "uB": matrix, "u": matrix}, ...] } with
// absent factors omitted per element.
std::string channel_to_json(const MixedUnitaryChannel& channel);
MixedUnitaryChannel channel_from_json(const std::string& text);

// File-level helpers; malformed content or stream failure throws IoError.
ComplexMatrix load_matrix(const std::filesystem::path& path);
void save_matrix(const std::filesystem::path& path, const ComplexMatrix& m);
MixedUnitaryChannel load_channel(const std::filesystem::path& path);
void save_channel(const std::filesystem::path& path,
                  const MixedUnitaryChannel& channel);

std::string read_text(const std::filesystem::path& path);

// Writes to a sibling temp file, then renames over the target.
void write_text_atomic(const std::filesystem::path& path,
                       const std::string& text);

// One sweep observation; serialized as CSV with a fixed header
// seed,param,achieved_eps,log_n,shannon,entropy_exchange.
struct SweepRow {
  std::uint64_t seed;
  double param;
  double achieved_eps;
  double log_n;
  double shannon;
  double entropy_exchange;
};

std::string sweep_to_csv(const std::vector<SweepRow>& rows);

}  // namespace corrsim
