#include "corrsim/serialize.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "corrsim/errors.hpp"

namespace corrsim {

namespace {

using nlohmann::json;

json matrix_to_value(const ComplexMatrix& m) {
  json entries = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      entries.push_back({m(r, c).real(), m(r, c).imag()});
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

ComplexMatrix matrix_from_value(const json& v, const std::string& where) {
  if (!v.is_object() || !v.contains("rows") || !v.contains("cols") ||
      !v.contains("entries"))
    throw IoError(where + ": matrix literal needs rows, cols, entries");
  const auto rows = v.at("rows").get<long long>();
  const auto cols = v.at("cols").get<long long>();
  if (rows < 0 || cols < 0)
    throw IoError(where + ": matrix dimensions must be nonnegative");
  const json& entries = v.at("entries");
  if (!entries.is_array() ||
      static_cast<long long>(entries.size()) != rows * cols)
    throw IoError(where + ": entries must hold rows*cols [re, im] pairs");
  ComplexMatrix m(rows, cols);
  long long i = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c, ++i) {
      const json& e = entries.at(static_cast<std::size_t>(i));
      if (!e.is_array() || e.size() != 2)
        throw IoError(where + ": each entry must be an [re, im] pair");
      m(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    }
  return m;
}

json parse_or_throw(const std::string& text, const std::string& where) {
  json v = json::parse(text, nullptr, false);
  if (v.is_discarded()) throw IoError(where + ": malformed JSON");
  return v;
}

}  // namespace

std::string matrix_to_json(const ComplexMatrix& m) {
  return matrix_to_value(m).dump();
}

ComplexMatrix matrix_from_json(const std::string& text) {
  return matrix_from_value(parse_or_throw(text, "matrix_from_json"),
                           "matrix_from_json");
}

std::string channel_to_json(const MixedUnitaryChannel& channel) {
  json ensemble = json::array();
  for (const ChannelElement& e : channel.elements()) {
    json item{{"p", e.p}};
    if (e.u_a.size()) item["uA"] = matrix_to_value(e.u_a);
    if (e.u_b.size()) item["uB"] = matrix_to_value(e.u_b);
    if (e.u_full.size()) item["u"] = matrix_to_value(e.u_full);
    ensemble.push_back(std::move(item));
  }
  return json{{"locality", to_string(channel.locality())},
              {"dimA", channel.dim_a()},
              {"dimB", channel.dim_b()},
              {"n", channel.n_label()},
              {"ensemble", ensemble}}
      .dump();
}

MixedUnitaryChannel channel_from_json(const std::string& text) {
  const json v = parse_or_throw(text, "channel_from_json");
  if (!v.is_object() || !v.contains("locality") || !v.contains("dimA") ||
      !v.contains("dimB") || !v.contains("ensemble"))
    throw IoError(
        "channel_from_json: needs locality, dimA, dimB, ensemble fields");
  Locality locality;
  try {
    locality = locality_from_string(v.at("locality").get<std::string>());
  } catch (const Error& e) {
    throw IoError(std::string("channel_from_json: ") + e.what());
  }
  const int dim_a = v.at("dimA").get<int>();
  const int dim_b = v.at("dimB").get<int>();
  const int n_label = v.contains("n") ? v.at("n").get<int>() : 1;
  const json& ensemble = v.at("ensemble");
  if (!ensemble.is_array() || ensemble.empty())
    throw IoError("channel_from_json: ensemble must be a nonempty array");

  std::vector<ChannelElement> elements;
  elements.reserve(ensemble.size());
  for (const json& item : ensemble) {
    if (!item.is_object() || !item.contains("p"))
      throw IoError("channel_from_json: each ensemble item needs p");
    ChannelElement e;
    e.p = item.at("p").get<double>();
    if (item.contains("uA"))
      e.u_a = matrix_from_value(item.at("uA"), "channel_from_json");
    if (item.contains("uB"))
      e.u_b = matrix_from_value(item.at("uB"), "channel_from_json");
    if (item.contains("u"))
      e.u_full = matrix_from_value(item.at("u"), "channel_from_json");
    elements.push_back(std::move(e));
  }
  return MixedUnitaryChannel(locality, std::move(elements), dim_a, dim_b,
                             n_label);
}

ComplexMatrix load_matrix(const std::filesystem::path& path) {
  return matrix_from_json(read_text(path));
}

void save_matrix(const std::filesystem::path& path, const ComplexMatrix& m) {
  write_text_atomic(path, matrix_to_json(m) + "\n");
}

MixedUnitaryChannel load_channel(const std::filesystem::path& path) {
  return channel_from_json(read_text(path));
}

void save_channel(const std::filesystem::path& path,
                  const MixedUnitaryChannel& channel) {
  write_text_atomic(path, channel_to_json(channel) + "\n");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("read_text: cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read_text: read failure on " + path.string());
  return buf.str();
}

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("write_text_atomic: cannot open " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw IoError("write_text_atomic: write failure on " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    throw IoError("write_text_atomic: rename to " + path.string() +
                  " failed: " + ec.message());
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "seed,param,achieved_eps,log_n,shannon,entropy_exchange\n";
  out.precision(17);
  for (const SweepRow& r : rows)
    out << r.seed << ',' << r.param << ',' << r.achieved_eps << ',' << r.log_n
        << ',' << r.shannon << ',' << r.entropy_exchange << '\n';
  return out.str();
}

}  // namespace corrsim
