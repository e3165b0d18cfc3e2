#include "corrsim_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "corrsim/channels.hpp"
#include "corrsim/dims.hpp"
#include "corrsim/errors.hpp"
#include "corrsim/linalg.hpp"
#include "corrsim/protocols.hpp"
#include "corrsim/serialize.hpp"
#include "corrsim/states.hpp"
#include "corrsim/typicality.hpp"

namespace corrsim_cli {

namespace {

namespace cs = corrsim;
using nlohmann::json;

constexpr const char* kToolVersion = "1.0.0";
constexpr const char* kKnownStateIds =
    "bell, bell_dephased, ghz3, werner:p, haar:dA,dB:seed, diag:p1,p2,...";
constexpr const char* kKnownPureIds = "bell, ghz3, haar:dA,dB:seed";

std::string iso_timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json base_report(const std::string& protocol, std::uint64_t seed,
                 json config) {
  json j;
  j["schema"] = "corrsim-report/1";
  j["tool"] = json{{"name", "corrsim"}, {"version", kToolVersion}};
  j["protocol"] = protocol;
  j["units"] = "bits";
  j["timestamp"] = iso_timestamp_utc();
  j["seed"] = seed;
  j["config"] = std::move(config);
  return j;
}

void emit(const std::string& out_path, const json& report, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (out_path == "-")
    out << text;
  else
    cs::write_text_atomic(out_path, text);
}

cs::DimList parse_dims(const std::string& csv) {
  std::vector<int> factors;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      const int v = std::stoi(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      factors.push_back(v);
    } catch (const std::exception&) {
      throw cs::PreconditionError("cannot parse dims entry '" + item + "'");
    }
  }
  if (factors.empty())
    throw cs::PreconditionError("dims list '" + csv + "' is empty");
  return cs::DimList(factors);
}

std::vector<int> parse_int_list(const std::string& csv, const char* what) {
  std::vector<int> values;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      const int v = std::stoi(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      values.push_back(v);
    } catch (const std::exception&) {
      throw cs::PreconditionError(std::string("cannot parse ") + what +
                                  " entry '" + item + "'");
    }
  }
  if (values.empty())
    throw cs::PreconditionError(std::string(what) + " list is empty");
  return values;
}

// "k|m": the first k factors against the next m; both sides nonempty.
std::pair<int, int> parse_cut(const std::string& cut) {
  const auto bar = cut.find('|');
  if (bar == std::string::npos)
    throw cs::PreconditionError("cut must look like k|m, got '" + cut + "'");
  try {
    size_t pos = 0;
    const int a = std::stoi(cut.substr(0, bar), &pos);
    if (pos != bar) throw std::invalid_argument(cut);
    const int b = std::stoi(cut.substr(bar + 1), &pos);
    if (pos != cut.size() - bar - 1) throw std::invalid_argument(cut);
    if (a < 1 || b < 1)
      throw cs::PreconditionError("cut sides must be >= 1 factors");
    return {a, b};
  } catch (const std::invalid_argument&) {
    throw cs::PreconditionError("cut must look like k|m, got '" + cut + "'");
  } catch (const std::out_of_range&) {
    throw cs::PreconditionError("cut must look like k|m, got '" + cut + "'");
  }
}

// Regroups an arbitrary k|m cut into a two-factor state.
cs::DensityMatrix with_cut(const cs::DensityMatrix& rho,
                           const std::string& cut) {
  const auto [k, m] = parse_cut(cut);
  if (k + m != static_cast<int>(rho.dims().size()))
    throw cs::PreconditionError("cut " + cut + " does not match " +
                                rho.dims().to_string());
  std::vector<int> left;
  for (int i = 0; i < k; ++i) left.push_back(i);
  const int da = static_cast<int>(rho.dims().total_of(left));
  const int db = static_cast<int>(rho.dims().total() / da);
  return rho.with_dims(cs::DimList({da, db}));
}

cs::DensityMatrix resolve_state(const std::string& id, const std::string& file,
                                const std::string& dims_csv) {
  if (!file.empty()) {
    const cs::ComplexMatrix m = cs::load_matrix(file);
    const cs::DimList dims = dims_csv.empty()
                                 ? cs::DimList({static_cast<int>(m.rows())})
                                 : parse_dims(dims_csv);
    return cs::DensityMatrix(m, dims);
  }
  return cs::make_state(id);
}

json matrix_json(const cs::ComplexMatrix& m) {
  return json::parse(cs::matrix_to_json(m));
}

json vector_json(const cs::ComplexVector& v) {
  return matrix_json(cs::ComplexMatrix(v));
}

json snapshot_json(const cs::CorrelationSnapshot& s) {
  return json{{"s_total", s.s_total},
              {"s_a", s.s_a},
              {"s_b", s.s_b},
              {"mutual_information", s.mutual_information}};
}

json cost_json(double log_n, double shannon, double entropy_exchange) {
  return json{{"log_n", log_n},
              {"shannon", shannon},
              {"entropy_exchange", entropy_exchange}};
}

json erasure_json(const cs::ErasureReport& r) {
  json steps = json::array();
  for (const cs::ErasureStep& st : r.steps) {
    steps.push_back(json{{"label", st.label},
                         {"locality", cs::to_string(st.locality)},
                         {"cost", cost_json(st.log_n, st.shannon,
                                            st.entropy_exchange)},
                         {"achieved_eps", st.achieved_eps},
                         {"is_ppt", st.is_ppt},
                         {"ppt_min_eig", st.ppt_min_eig},
                         {"certified", st.certified},
                         {"before", snapshot_json(st.before)},
                         {"after", snapshot_json(st.after)}});
  }
  return json{{"initial", snapshot_json(r.initial)},
              {"steps", steps},
              {"totals", cost_json(r.total_log_n, r.total_shannon,
                                   r.total_entropy_exchange)},
              {"final_state", matrix_json(r.final_state.matrix())}};
}

// Options shared by every subcommand.
struct CommonOpts {
  std::string out = "-";
  bool validate = false;
};

void add_common(CLI::App* sub, const std::shared_ptr<CommonOpts>& opts) {
  sub->add_option("--out", opts->out,
                  "Report destination path; '-' streams to stdout");
  sub->add_flag("--validate", opts->validate,
                "Dry-run: check the configuration and emit diagnostics only");
}

void emit_diagnostics(const std::string& protocol, std::uint64_t seed,
                      const json& config, const json& diagnostics,
                      std::ostream& out) {
  json report = base_report(protocol, seed, config);
  report["diagnostics"] = diagnostics;
  // Dry runs never write files, whatever --out says.
  emit("-", report, out);
}

void check_state_id(const std::string& id, bool pure, json& diags) {
  try {
    if (pure)
      cs::make_pure_state(id);
    else
      cs::make_state(id);
  } catch (const cs::UnknownStateError& e) {
    diags.push_back(std::string(e.what()) + "; known ids: " +
                    (pure ? kKnownPureIds : kKnownStateIds));
  }
}

void check_dims_cap(const std::string& dims_csv, json& diags) {
  try {
    const cs::DimList dims = parse_dims(dims_csv);
    if (dims.total() > cs::dim_cap()) {
      std::ostringstream os;
      os << "dims product " << dims.total() << " exceeds the dimension cap "
         << cs::dim_cap();
      diags.push_back(os.str());
    }
  } catch (const cs::Error& e) {
    diags.push_back(e.what());
  }
}

void check_positive(long long v, const char* name, json& diags) {
  if (v < 1)
    diags.push_back(std::string(name) + " must be >= 1, got " +
                    std::to_string(v));
}

void check_positive_real(double v, const char* name, json& diags) {
  if (!(v > 0))
    diags.push_back(std::string(name) + " must be > 0, got " +
                    std::to_string(v));
}

void check_file_exists(const std::string& path, const char* name,
                       json& diags) {
  if (!path.empty() && !std::filesystem::exists(path))
    diags.push_back(std::string(name) + " '" + path + "' does not exist");
}

long long checked_pow_ll(int base, int exp) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > (1LL << 40)) return r;  // saturate well above any cap
    r *= base;
  }
  return r;
}

// ---------------------------------------------------------------- entropy --

struct EntropyOpts {
  CommonOpts common;
  std::string state = "bell";
  std::string state_file;
  std::string dims;
  std::string cut;
};

void run_entropy(const EntropyOpts& o, std::ostream& out) {
  json config{{"state", o.state},     {"state_file", o.state_file},
              {"dims", o.dims},       {"cut", o.cut},
              {"out", o.common.out}};
  if (o.common.validate) {
    json diags = json::array();
    if (o.state_file.empty()) check_state_id(o.state, false, diags);
    check_file_exists(o.state_file, "--state-file", diags);
    if (!o.dims.empty()) check_dims_cap(o.dims, diags);
    emit_diagnostics("entropy", 0, config, diags, out);
    return;
  }
  const cs::DensityMatrix rho = resolve_state(o.state, o.state_file, o.dims);
  json result{{"entropy", cs::von_neumann_entropy(rho)},
              {"dims", rho.dims().to_string()}};
  if (!o.cut.empty()) {
    const cs::DensityMatrix cut_state = with_cut(rho, o.cut);
    const cs::CorrelationSnapshot snap = cs::snapshot_of(cut_state);
    result["cut"] = o.cut;
    result["s_a"] = snap.s_a;
    result["s_b"] = snap.s_b;
    result["mutual_information"] = snap.mutual_information;
  }
  json report = base_report("entropy", 0, config);
  report["result"] = std::move(result);
  emit(o.common.out, report, out);
}

// ------------------------------------------------------------- erase-bell --

struct EraseBellOpts {
  CommonOpts common;
  bool swap_order = false;
};

void run_erase_bell(const EraseBellOpts& o, std::ostream& out) {
  json config{{"swap", o.swap_order}, {"out", o.common.out}};
  if (o.common.validate) {
    emit_diagnostics("bell-erasure", 0, config, json::array(), out);
    return;
  }
  const cs::ErasureReport r = cs::bell_erasure_demo(o.swap_order);
  json report = base_report(r.protocol, 0, config);
  report["result"] = erasure_json(r);
  emit(o.common.out, report, out);
}

// ------------------------------------------------------------ decorrelate --

struct DecorrelateOpts {
  CommonOpts common;
  std::string state = "bell_dephased";
  std::string state_file;
  std::string dims;
  int n = 4;
  double eps = 0.1;
  int n_unitaries = 16;
  std::uint64_t seed = 1;
  bool debug = false;
  double eps_typical = 0;
  double eps_cut = 0;
  double eps_interval = 0;
  std::string sweep;
  int sweep_seeds = 20;
  std::string csv;
  std::string emit_channel;
};

cs::Prop2Knobs knobs_of(const DecorrelateOpts& o) {
  const bool any_role =
      o.eps_typical != 0 || o.eps_cut != 0 || o.eps_interval != 0;
  if (any_role && !o.debug)
    throw cs::PreconditionError(
        "pass --debug to set the eps roles independently");
  cs::Prop2Knobs knobs = cs::Prop2Knobs::from_single(o.eps);
  if (o.eps_typical != 0) knobs.eps_typical = o.eps_typical;
  if (o.eps_cut != 0) knobs.eps_cut = o.eps_cut;
  if (o.eps_interval != 0) knobs.eps_interval = o.eps_interval;
  return knobs;
}

json prop2_json(const cs::Prop2Result& r) {
  return json{{"achieved_eps", r.achieved_eps},
              {"rate", r.rate},
              {"n", r.n},
              {"n_unitaries", r.n_unitaries},
              {"i_single", r.i_single},
              {"cost", cost_json(r.cost.log_n, r.cost.shannon,
                                 r.cost.entropy_exchange)},
              {"rank_joint", r.rank_joint},
              {"rank_a", r.rank_a},
              {"rank_b", r.rank_b},
              {"rank_b_cut", r.rank_b_cut},
              {"rho_tilde_trace", r.rho_tilde_trace},
              {"interval_ok", r.interval_ok},
              {"knobs", json{{"eps_typical", r.knobs.eps_typical},
                             {"eps_cut", r.knobs.eps_cut},
                             {"eps_interval", r.knobs.eps_interval}}}};
}

void run_decorrelate(const DecorrelateOpts& o, std::ostream& out) {
  json config{{"state", o.state},
              {"state_file", o.state_file},
              {"dims", o.dims},
              {"n", o.n},
              {"eps", o.eps},
              {"n_unitaries", o.n_unitaries},
              {"seed", o.seed},
              {"debug", o.debug},
              {"eps_typical", o.eps_typical},
              {"eps_cut", o.eps_cut},
              {"eps_interval", o.eps_interval},
              {"sweep", o.sweep},
              {"sweep_seeds", o.sweep_seeds},
              {"csv", o.csv},
              {"emit_channel", o.emit_channel},
              {"out", o.common.out}};
  if (o.common.validate) {
    json diags = json::array();
    if (o.state_file.empty()) check_state_id(o.state, false, diags);
    check_file_exists(o.state_file, "--state-file", diags);
    if (!o.dims.empty()) check_dims_cap(o.dims, diags);
    check_positive(o.n, "--n", diags);
    check_positive(o.n_unitaries, "--n-unitaries", diags);
    check_positive_real(o.eps, "--eps", diags);
    if (!o.sweep.empty()) check_positive(o.sweep_seeds, "--sweep-seeds", diags);
    try {
      const cs::DensityMatrix rho =
          resolve_state(o.state, o.state_file, o.dims);
      const long long ambient =
          checked_pow_ll(static_cast<int>(rho.dims().total()), o.n);
      if (ambient > cs::dim_cap()) {
        std::ostringstream os;
        os << "d^n = " << ambient << " exceeds the dimension cap "
           << cs::dim_cap();
        diags.push_back(os.str());
      }
    } catch (const cs::Error&) {
      // Already reported above.
    }
    emit_diagnostics("block-decorrelation", o.seed, config, diags, out);
    return;
  }

  const cs::DensityMatrix rho = resolve_state(o.state, o.state_file, o.dims);
  const cs::Prop2Knobs knobs = knobs_of(o);
  json report = base_report("block-decorrelation", o.seed, config);

  if (o.sweep.empty()) {
    const cs::Prop2Result r =
        cs::decorrelate_prop2(rho, o.n, knobs, o.n_unitaries, o.seed);
    report["result"] = prop2_json(r);
    if (!o.emit_channel.empty()) cs::save_channel(o.emit_channel, r.channel);
    emit(o.common.out, report, out);
    return;
  }

  const std::vector<int> ns = parse_int_list(o.sweep, "sweep");
  std::vector<cs::SweepRow> rows;
  json medians = json::array();
  for (const int big_n : ns) {
    std::vector<double> eps_values;
    for (int s = 0; s < o.sweep_seeds; ++s) {
      const cs::Prop2Result r =
          cs::decorrelate_prop2(rho, o.n, knobs, big_n, o.seed + s);
      rows.push_back(cs::SweepRow{o.seed + s, static_cast<double>(big_n),
                                  r.achieved_eps, r.cost.log_n,
                                  r.cost.shannon, r.cost.entropy_exchange});
      eps_values.push_back(r.achieved_eps);
    }
    std::sort(eps_values.begin(), eps_values.end());
    const std::size_t mid = eps_values.size() / 2;
    const double median = eps_values.size() % 2
                              ? eps_values[mid]
                              : 0.5 * (eps_values[mid - 1] + eps_values[mid]);
    medians.push_back(json{{"n_unitaries", big_n}, {"median_eps", median}});
  }
  report["result"] = json{{"sweep_medians", medians},
                          {"rows", rows.size()}};
  if (!o.csv.empty()) cs::write_text_atomic(o.csv, cs::sweep_to_csv(rows));
  emit(o.common.out, report, out);
}

// ---------------------------------------------- disentangle / classical ----

struct PureCutOpts {
  CommonOpts common;
  std::string state = "bell";
  std::string cut = "1|1";
};

std::vector<int> side_a_of(const cs::PureState& psi, const std::string& cut) {
  const auto [k, m] = parse_cut(cut);
  if (k + m != static_cast<int>(psi.dims().size()))
    throw cs::PreconditionError("cut " + cut + " does not match " +
                                psi.dims().to_string());
  std::vector<int> side;
  for (int i = 0; i < k; ++i) side.push_back(i);
  return side;
}

void run_disentangle(const PureCutOpts& o, std::ostream& out) {
  json config{{"state", o.state}, {"cut", o.cut}, {"out", o.common.out}};
  if (o.common.validate) {
    json diags = json::array();
    check_state_id(o.state, true, diags);
    emit_diagnostics("schmidt-disentangle", 0, config, diags, out);
    return;
  }
  const cs::PureState psi = cs::make_pure_state(o.state);
  const cs::DisentangleReport r =
      cs::disentangle_pure(psi, side_a_of(psi, o.cut));
  json coeffs = json::array();
  for (int i = 0; i < r.schmidt_coefficients.size(); ++i)
    coeffs.push_back(r.schmidt_coefficients(i));
  json report = base_report("schmidt-disentangle", 0, config);
  report["result"] =
      json{{"schmidt_rank", r.schmidt_rank},
           {"schmidt_coefficients", coeffs},
           {"cost", cost_json(r.cost.log_n, r.cost.shannon,
                              r.cost.entropy_exchange)},
           {"is_ppt", r.is_ppt},
           {"ppt_min_eig", r.ppt_min_eig},
           {"certified", r.certified},
           {"entanglement", r.entanglement},
           {"dephasing_residual", r.dephasing_residual},
           {"output", matrix_json(r.output.matrix())}};
  emit(o.common.out, report, out);
}

void run_classical(const PureCutOpts& o, std::ostream& out) {
  json config{{"state", o.state}, {"cut", o.cut}, {"out", o.common.out}};
  if (o.common.validate) {
    json diags = json::array();
    check_state_id(o.state, true, diags);
    emit_diagnostics("classical-extraction", 0, config, diags, out);
    return;
  }
  const cs::PureState psi = cs::make_pure_state(o.state);
  const cs::ClassicalizationReport r =
      cs::classical_correlation_dephasing(psi, side_a_of(psi, o.cut));
  json report = base_report("classical-extraction", 0, config);
  report["result"] = json{{"i_classical", r.i_classical},
                          {"entanglement", r.entanglement},
                          {"sigma", matrix_json(r.sigma.matrix())}};
  emit(o.common.out, report, out);
}

// --------------------------------------------------------------- two-step --

struct TwoStepOpts {
  CommonOpts common;
  std::string state = "bell";
  std::string state_file;
  std::string dims;
  std::string channel_file;
};

void run_two_step(const TwoStepOpts& o, std::ostream& out) {
  json config{{"state", o.state},
              {"state_file", o.state_file},
              {"dims", o.dims},
              {"channel_file", o.channel_file},
              {"out", o.common.out}};
  if (o.common.validate) {
    json diags = json::array();
    if (o.state_file.empty()) check_state_id(o.state, false, diags);
    check_file_exists(o.state_file, "--state-file", diags);
    if (o.channel_file.empty())
      diags.push_back("--channel-file is required");
    else
      check_file_exists(o.channel_file, "--channel-file", diags);
    if (!o.dims.empty()) check_dims_cap(o.dims, diags);
    emit_diagnostics("two-step-comparison", 0, config, diags, out);
    return;
  }
  if (o.channel_file.empty())
    throw cs::PreconditionError("two-step: --channel-file is required");
  const cs::DensityMatrix rho = resolve_state(o.state, o.state_file, o.dims);
  const cs::MixedUnitaryChannel channel = cs::load_channel(o.channel_file);
  const cs::TwoStepReport r = cs::two_step_cost_comparison(rho, channel);
  json report = base_report("two-step-comparison", 0, config);
  report["result"] = json{{"two_step", r.two_step},
                          {"one_shot", r.one_shot},
                          {"gap", r.gap},
                          {"locally_unital", r.locally_unital},
                          {"gap_ok", r.gap_ok},
                          {"is_ppt", r.is_ppt},
                          {"ppt_min_eig", r.ppt_min_eig},
                          {"certified", r.certified}};
  emit(o.common.out, report, out);
}

// ------------------------------------------------------------- multiparty --

struct MultipartyOpts {
  CommonOpts common;
  std::string state = "ghz3";
  std::string state_file;
  std::string dims;
};

void run_multiparty(const MultipartyOpts& o, std::ostream& out) {
  json config{{"state", o.state},
              {"state_file", o.state_file},
              {"dims", o.dims},
              {"out", o.common.out}};
  if (o.common.validate) {
    json diags = json::array();
    if (o.state_file.empty()) check_state_id(o.state, false, diags);
    check_file_exists(o.state_file, "--state-file", diags);
    if (!o.dims.empty()) check_dims_cap(o.dims, diags);
    emit_diagnostics("multiparty-erasure", 0, config, diags, out);
    return;
  }
  const cs::DensityMatrix rho = resolve_state(o.state, o.state_file, o.dims);
  const cs::MultipartiteReport r = cs::multipartite_erasure(rho);
  json report = base_report("multiparty-erasure", 0, config);
  report["result"] = json{{"c_er", r.c_er},
                          {"sequential", r.sequential},
                          {"telescoping_residual", r.telescoping_residual}};
  emit(o.common.out, report, out);
}

// --------------------------------------------------------------- ssa-scan --

struct SsaOpts {
  CommonOpts common;
  int count = 1000;
  std::string dims = "2,2,2";
  std::uint64_t seed = 42;
};

void run_ssa_scan(const SsaOpts& o, std::ostream& out) {
  json config{{"count", o.count},
              {"dims", o.dims},
              {"seed", o.seed},
              {"out", o.common.out}};
  if (o.common.validate) {
    json diags = json::array();
    check_positive(o.count, "--count", diags);
    check_dims_cap(o.dims, diags);
    try {
      if (parse_dims(o.dims).size() != 3)
        diags.push_back("--dims must name exactly three factors");
    } catch (const cs::Error&) {
      // Already reported above.
    }
    emit_diagnostics("ssa-scan", o.seed, config, diags, out);
    return;
  }
  const cs::SsaScanResult r = cs::ssa_scan(o.count, parse_dims(o.dims), o.seed);
  json report = base_report("ssa-scan", o.seed, config);
  report["result"] = json{{"min_value", r.min_value},
                          {"violations", r.violations},
                          {"count", r.count}};
  emit(o.common.out, report, out);
}

// -------------------------------------------------------- conjecture-scan --

struct ConjectureOpts {
  CommonOpts common;
  int count = 10000;
  std::string dims = "2,2";
  std::uint64_t seed = 7;
  std::string family = "schmidt_dephasing";
};

void run_conjecture_scan(const ConjectureOpts& o, std::ostream& out) {
  json config{{"count", o.count},
              {"dims", o.dims},
              {"seed", o.seed},
              {"family", o.family},
              {"out", o.common.out}};
  if (o.common.validate) {
    json diags = json::array();
    check_positive(o.count, "--count", diags);
    check_dims_cap(o.dims, diags);
    try {
      const cs::DimList dims = parse_dims(o.dims);
      if (dims.size() != 2)
        diags.push_back("--dims must name exactly two factors");
      else if (dims.total() > 6)
        diags.push_back(
            "--dims product must be <= 6 for a certified separability check");
    } catch (const cs::Error&) {
      // Already reported above.
    }
    try {
      cs::dephasing_family_from_string(o.family);
    } catch (const cs::Error& e) {
      diags.push_back(e.what());
    }
    emit_diagnostics("conjecture-scan", o.seed, config, diags, out);
    return;
  }
  const cs::ConjectureScanResult r = cs::conjecture_scan(
      o.count, parse_dims(o.dims), o.seed,
      cs::dephasing_family_from_string(o.family));
  json witnesses = json::array();
  for (const cs::ConjectureWitness& w : r.witnesses)
    witnesses.push_back(json{{"trial", w.trial},
                             {"excess", w.excess},
                             {"i_sigma", w.i_sigma},
                             {"entanglement", w.entanglement},
                             {"psi", vector_json(w.psi)}});
  json report = base_report("conjecture-scan", o.seed, config);
  report["result"] = json{{"max_excess", r.max_excess},
                          {"witness_count", witnesses.size()},
                          {"witnesses", witnesses},
                          {"family", cs::to_string(r.family)},
                          {"count", r.count}};
  emit(o.common.out, report, out);
}

// --------------------------------------------------------------- chernoff --

struct ChernoffOpts {
  CommonOpts common;
  std::string sampler = "weyl";
  std::string state = "bell_dephased";
  int n = 2;
  double knob_eps = 0.2;
  double mu = 0.5;
  int dim = 0;
  int n_samples = 64;
  double eps = 0.5;
  int trials = 200;
  std::uint64_t seed = 7;
};

void run_chernoff(const ChernoffOpts& o, std::ostream& out) {
  json config{{"sampler", o.sampler}, {"state", o.state},
              {"n", o.n},             {"knob_eps", o.knob_eps},
              {"mu", o.mu},           {"dim", o.dim},
              {"n_samples", o.n_samples}, {"eps", o.eps},
              {"trials", o.trials},   {"seed", o.seed},
              {"out", o.common.out}};
  if (o.common.validate) {
    json diags = json::array();
    if (o.sampler != "weyl" && o.sampler != "bernoulli")
      diags.push_back("--sampler must be weyl or bernoulli");
    if (o.sampler == "weyl") check_state_id(o.state, false, diags);
    if (o.sampler == "bernoulli" && !(o.mu > 0 && o.mu <= 1))
      diags.push_back("--mu must lie in (0, 1]");
    check_positive(o.n, "--n", diags);
    check_positive(o.n_samples, "--n-samples", diags);
    check_positive(o.trials, "--trials", diags);
    check_positive_real(o.eps, "--eps", diags);
    emit_diagnostics("chernoff-bench", o.seed, config, diags, out);
    return;
  }

  cs::OperatorSampler sampler;
  if (o.sampler == "weyl") {
    sampler = cs::prop2_sampler(cs::make_state(o.state), o.n, o.knob_eps);
  } else if (o.sampler == "bernoulli") {
    sampler = cs::bernoulli_sampler(o.mu);
  } else {
    throw cs::PreconditionError("chernoff: --sampler must be weyl or bernoulli");
  }
  if (o.dim != 0 && o.dim != sampler.dim)
    throw cs::PreconditionError(
        "chernoff: --dim " + std::to_string(o.dim) +
        " does not match the sampler dimension " + std::to_string(sampler.dim));

  const cs::ChernoffResult r =
      cs::chernoff_trial(sampler, o.n_samples, o.eps, o.trials, o.seed);
  json report = base_report("chernoff-bench", o.seed, config);
  report["result"] = json{{"violation_rate", r.violation_rate},
                          {"bound", r.bound},
                          {"ok", r.ok},
                          {"trials", r.trials},
                          {"violations", r.violations},
                          {"sampler", json{{"name", sampler.name},
                                           {"dim", sampler.dim},
                                           {"mu", sampler.mu}}}};
  emit(o.common.out, report, out);
}

// -------------------------------------------------------------- typicality --

struct TypicalityOpts {
  CommonOpts common;
  std::string state = "diag:0.9,0.1";
  int n = 10;
  double eps = 0.2;
  std::string mode = "auto";
};

void run_typicality(const TypicalityOpts& o, std::ostream& out) {
  json config{{"state", o.state}, {"n", o.n},         {"eps", o.eps},
              {"mode", o.mode},   {"out", o.common.out}};
  if (o.common.validate) {
    json diags = json::array();
    check_state_id(o.state, false, diags);
    check_positive(o.n, "--n", diags);
    check_positive_real(o.eps, "--eps", diags);
    if (o.mode != "auto" && o.mode != "dense" && o.mode != "counting")
      diags.push_back("--mode must be auto, dense, or counting");
    emit_diagnostics("typicality", 0, config, diags, out);
    return;
  }
  const cs::DensityMatrix rho = cs::make_state(o.state);
  std::string mode = o.mode;
  if (mode == "auto") {
    const long long ambient =
        checked_pow_ll(static_cast<int>(rho.dims().total()), o.n);
    mode = ambient <= cs::dim_cap() ? "dense" : "counting";
  }
  cs::TypicalityReport r;
  if (mode == "dense") {
    const cs::TypicalProjector tp = cs::typical_projector(rho, o.n, o.eps);
    r = cs::typicality_report(tp, rho, o.n, o.eps);
  } else if (mode == "counting") {
    r = cs::typicality_report_counting(rho, o.n, o.eps);
  } else {
    throw cs::PreconditionError("typicality: --mode must be auto, dense, or counting");
  }
  json report = base_report("typicality", 0, config);
  report["result"] = json{{"mass", r.mass},
                          {"dim", r.dim},
                          {"log2_dim", r.log2_dim},
                          {"sandwich_ok", r.sandwich_ok},
                          {"dim_upper_ok", r.dim_upper_ok},
                          {"dim_lower_checked", r.dim_lower_checked},
                          {"dim_lower_ok", r.dim_lower_ok},
                          {"converged", r.converged},
                          {"boundary_flag", r.boundary_flag},
                          {"degenerate_flag", r.degenerate_flag},
                          {"entropy", r.entropy},
                          {"mode", mode}};
  emit(o.common.out, report, out);
}

// ------------------------------------------------------------------ gentle --

struct GentleOpts {
  CommonOpts common;
  std::string state = "diag:0.9,0.1";
  int n = 10;
  double eps = 0.4;
  std::string state_file;
  std::string x_file;
};

void run_gentle(const GentleOpts& o, std::ostream& out) {
  json config{{"state", o.state},           {"n", o.n},
              {"eps", o.eps},               {"state_file", o.state_file},
              {"x_file", o.x_file},         {"out", o.common.out}};
  if (o.common.validate) {
    json diags = json::array();
    if (o.state_file.empty()) {
      check_state_id(o.state, false, diags);
      check_positive(o.n, "--n", diags);
      check_positive_real(o.eps, "--eps", diags);
    } else {
      check_file_exists(o.state_file, "--state-file", diags);
      if (o.x_file.empty())
        diags.push_back("--x-file is required with --state-file");
      else
        check_file_exists(o.x_file, "--x-file", diags);
    }
    emit_diagnostics("gentle-measurement", 0, config, diags, out);
    return;
  }
  cs::GentleResult r;
  if (!o.state_file.empty()) {
    if (o.x_file.empty())
      throw cs::PreconditionError("gentle: --x-file is required with --state-file");
    r = cs::gentle_measurement_check(cs::load_matrix(o.state_file),
                                     cs::load_matrix(o.x_file));
  } else {
    const cs::DensityMatrix rho = cs::make_state(o.state);
    cs::ComplexMatrix power = rho.matrix();
    for (int i = 1; i < o.n; ++i) power = cs::tensor(power, rho.matrix());
    const cs::TypicalProjector tp = cs::typical_projector(rho, o.n, o.eps);
    r = cs::gentle_measurement_check(power, tp.projector);
  }
  json report = base_report("gentle-measurement", 0, config);
  report["result"] = json{
      {"delta", r.delta}, {"lhs", r.lhs}, {"bound", r.bound}, {"ok", r.ok}};
  emit(o.common.out, report, out);
}

std::string error_type_name(const cs::Error& e) {
  if (dynamic_cast<const cs::IndexError*>(&e)) return "index";
  if (dynamic_cast<const cs::PreconditionError*>(&e)) return "precondition";
  if (dynamic_cast<const cs::DimensionCapError*>(&e)) return "dimension_cap";
  if (dynamic_cast<const cs::UnknownStateError*>(&e)) return "unknown_state";
  if (dynamic_cast<const cs::ContractViolation*>(&e)) return "contract";
  if (dynamic_cast<const cs::IoError*>(&e)) return "io";
  if (dynamic_cast<const cs::ProtocolError*>(&e)) return "protocol";
  return "error";
}

void emit_error(std::ostream& err, const std::string& type,
                const std::string& message) {
  err << json{{"error", json{{"type", type}, {"message", message}}}}.dump()
      << "\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  try {
    if (const char* cap = std::getenv("CORRSIM_DIM_CAP")) {
      try {
        size_t pos = 0;
        const long long v = std::stoll(cap, &pos);
        if (pos != std::string(cap).size() || v < 2 ||
            v > std::numeric_limits<int>::max())
          throw std::invalid_argument(cap);
        cs::set_dim_cap(static_cast<int>(v));
      } catch (const std::exception&) {
        throw cs::PreconditionError(
            std::string("CORRSIM_DIM_CAP must be an integer >= 2, got '") +
            cap + "'");
      }
    }

    CLI::App app{"correlation-erasure workbench"};
    app.require_subcommand(1);

    auto entropy = std::make_shared<EntropyOpts>();
    {
      CLI::App* sub = app.add_subcommand(
          "entropy", "Entropies and mutual information of a state");
      sub->add_option("--state", entropy->state, "Named state id");
      sub->add_option("--state-file", entropy->state_file,
                      "Matrix literal JSON file");
      sub->add_option("--dims", entropy->dims,
                      "Comma-separated factor dims for --state-file");
      sub->add_option("--cut", entropy->cut, "Bipartition k|m by factor counts");
      add_common(sub, std::shared_ptr<CommonOpts>(entropy, &entropy->common));
      sub->callback([entropy, &out]() { run_entropy(*entropy, out); });
    }

    auto erase_bell = std::make_shared<EraseBellOpts>();
    {
      CLI::App* sub = app.add_subcommand(
          "erase-bell", "Two-step randomization of a Bell pair");
      sub->add_flag("--swap", erase_bell->swap_order,
                    "Run the X twirl before the Z twirl");
      add_common(sub,
                 std::shared_ptr<CommonOpts>(erase_bell, &erase_bell->common));
      sub->callback([erase_bell, &out]() { run_erase_bell(*erase_bell, out); });
    }

    auto decorrelate = std::make_shared<DecorrelateOpts>();
    {
      CLI::App* sub = app.add_subcommand(
          "decorrelate", "Block-typicality decorrelation construction");
      sub->add_option("--state", decorrelate->state, "Named state id");
      sub->add_option("--state-file", decorrelate->state_file,
                      "Matrix literal JSON file");
      sub->add_option("--dims", decorrelate->dims,
                      "Comma-separated factor dims for --state-file");
      sub->add_option("--n", decorrelate->n, "Number of copies");
      sub->add_option("--eps", decorrelate->eps, "Tolerance knob");
      sub->add_option("--n-unitaries", decorrelate->n_unitaries,
                      "Ensemble size N");
      sub->add_option("--seed", decorrelate->seed, "Master seed");
      sub->add_flag("--debug", decorrelate->debug,
                    "Unlock the per-role eps overrides");
      sub->add_option("--eps-typical", decorrelate->eps_typical,
                      "Override the typicality window (needs --debug)");
      sub->add_option("--eps-cut", decorrelate->eps_cut,
                      "Override the B-marginal floor (needs --debug)");
      sub->add_option("--eps-interval", decorrelate->eps_interval,
                      "Override the interval diagnostic width (needs --debug)");
      sub->add_option("--sweep", decorrelate->sweep,
                      "Comma-separated N values to sweep instead");
      sub->add_option("--sweep-seeds", decorrelate->sweep_seeds,
                      "Seeds per sweep point");
      sub->add_option("--csv", decorrelate->csv, "CSV output path for sweeps");
      sub->add_option("--emit-channel", decorrelate->emit_channel,
                      "Write the constructed channel to this path");
      add_common(sub, std::shared_ptr<CommonOpts>(decorrelate,
                                                  &decorrelate->common));
      sub->callback(
          [decorrelate, &out]() { run_decorrelate(*decorrelate, out); });
    }

    auto disentangle = std::make_shared<PureCutOpts>();
    {
      CLI::App* sub = app.add_subcommand(
          "disentangle", "Schmidt-basis phase randomization of a pure state");
      sub->add_option("--state", disentangle->state, "Named pure state id");
      sub->add_option("--cut", disentangle->cut,
                      "Bipartition k|m by factor counts");
      add_common(sub, std::shared_ptr<CommonOpts>(disentangle,
                                                  &disentangle->common));
      sub->callback(
          [disentangle, &out]() { run_disentangle(*disentangle, out); });
    }

    auto classical = std::make_shared<PureCutOpts>();
    {
      CLI::App* sub = app.add_subcommand(
          "classical", "Classical correlations extracted by Schmidt dephasing");
      sub->add_option("--state", classical->state, "Named pure state id");
      sub->add_option("--cut", classical->cut,
                      "Bipartition k|m by factor counts");
      add_common(sub,
                 std::shared_ptr<CommonOpts>(classical, &classical->common));
      sub->callback([classical, &out]() { run_classical(*classical, out); });
    }

    auto two_step = std::make_shared<TwoStepOpts>();
    {
      CLI::App* sub = app.add_subcommand(
          "two-step", "Disentangle-then-erase cost versus direct erasure");
      sub->add_option("--state", two_step->state, "Named state id");
      sub->add_option("--state-file", two_step->state_file,
                      "Matrix literal JSON file");
      sub->add_option("--dims", two_step->dims,
                      "Comma-separated factor dims for --state-file");
      sub->add_option("--channel-file", two_step->channel_file,
                      "Channel description JSON file");
      add_common(sub,
                 std::shared_ptr<CommonOpts>(two_step, &two_step->common));
      sub->callback([two_step, &out]() { run_two_step(*two_step, out); });
    }

    auto multiparty = std::make_shared<MultipartyOpts>();
    {
      CLI::App* sub = app.add_subcommand(
          "multiparty", "Total erasure cost of a multiparty state");
      sub->add_option("--state", multiparty->state, "Named state id");
      sub->add_option("--state-file", multiparty->state_file,
                      "Matrix literal JSON file");
      sub->add_option("--dims", multiparty->dims,
                      "Comma-separated factor dims for --state-file");
      add_common(sub,
                 std::shared_ptr<CommonOpts>(multiparty, &multiparty->common));
      sub->callback([multiparty, &out]() { run_multiparty(*multiparty, out); });
    }

    auto ssa = std::make_shared<SsaOpts>();
    {
      CLI::App* sub = app.add_subcommand(
          "ssa-scan", "Conditional mutual information scan on random states");
      sub->add_option("--count", ssa->count, "Number of trials");
      sub->add_option("--dims", ssa->dims, "Tripartite dims, e.g. 2,2,2");
      sub->add_option("--seed", ssa->seed, "Master seed");
      add_common(sub, std::shared_ptr<CommonOpts>(ssa, &ssa->common));
      sub->callback([ssa, &out]() { run_ssa_scan(*ssa, out); });
    }

    auto conjecture = std::make_shared<ConjectureOpts>();
    {
      CLI::App* sub = app.add_subcommand(
          "conjecture-scan",
          "Search for classical correlations exceeding the entanglement");
      sub->add_option("--count", conjecture->count, "Number of trials");
      sub->add_option("--dims", conjecture->dims, "Bipartite dims, e.g. 2,2");
      sub->add_option("--seed", conjecture->seed, "Master seed");
      sub->add_option("--family", conjecture->family,
                      "schmidt_dephasing, random_local, or trace_replace");
      add_common(sub,
                 std::shared_ptr<CommonOpts>(conjecture, &conjecture->common));
      sub->callback(
          [conjecture, &out]() { run_conjecture_scan(*conjecture, out); });
    }

    auto chernoff = std::make_shared<ChernoffOpts>();
    {
      CLI::App* sub = app.add_subcommand(
          "chernoff", "Empirical check of the operator concentration bound");
      sub->add_option("--sampler", chernoff->sampler, "weyl or bernoulli");
      sub->add_option("--state", chernoff->state,
                      "Named state id for the weyl sampler");
      sub->add_option("--n", chernoff->n, "Copies for the weyl sampler");
      sub->add_option("--knob-eps", chernoff->knob_eps,
                      "Construction tolerance for the weyl sampler");
      sub->add_option("--mu", chernoff->mu,
                      "Success probability for the bernoulli sampler");
      sub->add_option("--dim", chernoff->dim,
                      "Expected sampler dimension (0 = accept computed)");
      sub->add_option("--n-samples", chernoff->n_samples,
                      "Samples averaged per trial");
      sub->add_option("--eps", chernoff->eps, "Interval half-width");
      sub->add_option("--trials", chernoff->trials, "Number of trials");
      sub->add_option("--seed", chernoff->seed, "Master seed");
      add_common(sub,
                 std::shared_ptr<CommonOpts>(chernoff, &chernoff->common));
      sub->callback([chernoff, &out]() { run_chernoff(*chernoff, out); });
    }

    auto typicality = std::make_shared<TypicalityOpts>();
    {
      CLI::App* sub = app.add_subcommand(
          "typicality", "Typical-subspace mass, dimension, and sandwich checks");
      sub->add_option("--state", typicality->state, "Named state id");
      sub->add_option("--n", typicality->n, "Number of copies");
      sub->add_option("--eps", typicality->eps, "Typicality window");
      sub->add_option("--mode", typicality->mode, "auto, dense, or counting");
      add_common(sub,
                 std::shared_ptr<CommonOpts>(typicality, &typicality->common));
      sub->callback([typicality, &out]() { run_typicality(*typicality, out); });
    }

    auto gentle = std::make_shared<GentleOpts>();
    {
      CLI::App* sub = app.add_subcommand(
          "gentle", "Gentle-measurement bound on a typical projector");
      sub->add_option("--state", gentle->state, "Named state id");
      sub->add_option("--n", gentle->n, "Number of copies");
      sub->add_option("--eps", gentle->eps, "Typicality window");
      sub->add_option("--state-file", gentle->state_file,
                      "Matrix literal JSON file (needs --x-file)");
      sub->add_option("--x-file", gentle->x_file,
                      "Matrix literal JSON file with the measured operator");
      add_common(sub, std::shared_ptr<CommonOpts>(gentle, &gentle->common));
      sub->callback([gentle, &out]() { run_gentle(*gentle, out); });
    }

    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
      return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
      app.exit(e, out, err);
      return 2;
    }
    return 0;
  } catch (const cs::UnknownStateError& e) {
    emit_error(err, "unknown_state", e.what());
    return 3;
  } catch (const cs::DimensionCapError& e) {
    emit_error(err, "dimension_cap", e.what());
    return 4;
  } catch (const cs::Error& e) {
    emit_error(err, error_type_name(e), e.what());
    return 2;
  } catch (const std::exception& e) {
    emit_error(err, "internal", e.what());
    return 1;
  }
}

}  // namespace corrsim_cli
