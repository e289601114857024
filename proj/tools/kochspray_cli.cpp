// kochspray command-line front end.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kochspray/constants.hpp"
#include "kochspray/errors.hpp"
#include "kochspray/expansion.hpp"
#include "kochspray/gamma_kernel.hpp"
#include "kochspray/ifs.hpp"
#include "kochspray/oracle.hpp"
#include "kochspray/report.hpp"
#include "kochspray/snowflake_volume.hpp"
#include "kochspray/spectral_zeros.hpp"
#include "kochspray/validation.hpp"

namespace ks = kochspray;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

const char* const kOutputDirEnv = "KOCHSPRAY_OUTPUT_DIR";

struct Common {
  std::string format{"json"};
  std::string output;
  std::string gamma_table;
  bool gamma_direct{false};
};

// Thrown when a result cannot be written.
struct OutputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path p(path);
  const char* dir = std::getenv(kOutputDirEnv);
  if (p.is_relative() && dir && *dir) p = std::filesystem::path(dir) / p;
  return p;
}

void emit(const Common& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    return;
  }
  const auto path = resolve_output(c.output);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw OutputError("cannot open " + path.string() + " for writing");
  f << text;
  f.close();
  if (!f) throw OutputError("write to " + path.string() + " failed");
}

std::string json_text(const json& j) {
  std::ostringstream s;
  ks::write_json(s, j);
  return s.str();
}

std::unique_ptr<ks::GammaTable> g_table;

ks::GammaOptions gamma_options(const Common& c) {
  ks::GammaOptions g;
  g.direct = c.gamma_direct;
  if (!c.gamma_table.empty()) {
    if (!g_table) {
      std::ifstream f(c.gamma_table);
      if (!f) throw ks::DomainError("cannot read gamma table " + c.gamma_table);
      g_table = std::make_unique<ks::GammaTable>(ks::GammaTable::from_csv(f));
    }
    g.table = g_table.get();
  }
  return g;
}

std::vector<std::pair<int, int>> configs_or_reference(const std::optional<int>& k1, const std::optional<int>& k2) {
  if (k1 || k2) return {{k1.value_or(0), k2.value_or(0)}};
  return {{0, 0}, {0, 6}, {6, 6}};
}

std::string format_zero(ks::cplx z) {
  std::ostringstream s;
  s.precision(6);
  s << z.real();
  if (std::abs(z.imag()) > 1e-12) s << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return s.str();
}

// ---------------------------------------------------------------------------

struct ZerosArgs {
  int k1{0}, k2{0};
  std::string kind{"C"};
  double tol{1e-12};
};

int run_zeros(const Common& c, const ZerosArgs& a) {
  std::vector<ks::ZeroKind> kinds;
  if (a.kind == "both") {
    kinds = {ks::ZeroKind::C, ks::ZeroKind::P};
  } else {
    kinds = {ks::parse_zero_kind(a.kind)};
  }
  std::vector<ks::ZeroSet> sets;
  for (auto k : kinds) sets.push_back(ks::zero_set(a.k1, a.k2, k, a.tol));

  if (c.format == "csv") {
    std::ostringstream s;
    ks::CsvWriter w(s, {"k1", "k2", "kind", "re", "im", "folded_im", "conjugate_pair", "residual"});
    for (const auto& zs : sets) {
      const auto f = zs.folded();
      for (std::size_t i = 0; i < zs.zeros.size(); ++i) {
        const auto& z = zs.zeros[i];
        w << a.k1 << a.k2 << ks::to_string(zs.kind) << z.z.real() << z.z.imag() << f[i].imag()
          << (z.is_conjugate_pair ? "true" : "false") << z.residual;
        w.end_row();
      }
    }
    emit(c, s.str());
    return kExitOk;
  }
  json j;
  j["command"] = "zeros";
  j["k1"] = a.k1;
  j["k2"] = a.k2;
  j["sets"] = json::array();
  for (const auto& zs : sets) j["sets"].push_back(ks::to_json(zs));
  if (sets.size() == 2) {
    const auto rep = ks::correspondence_check(sets[0], sets[1]);
    j["correspondence"] = {{"bijective", rep.bijective}, {"max_distance", rep.max_distance}, {"message", rep.message}};
  }
  emit(c, json_text(j));
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct VolumeArgs {
  double epsilon{0.0};
  double base{1.0};
  std::optional<int> k1, k2;
  std::string mode{"snowflake"};
};

int run_volume(const Common& c, const VolumeArgs& a) {
  const auto g = gamma_options(c);
  ks::VolumeValue v;
  const ks::SprayConfig cfg{a.k1.value_or(0), a.k2.value_or(0), a.base};
  if (a.mode == "snowflake") {
    v = ks::snowflake_parallel_volume(a.epsilon, a.base, g);
  } else if (a.mode == "generator") {
    v = ks::generator_parallel_volume(cfg, a.epsilon, g);
  } else {
    v = ks::spray_parallel_volume_exact(cfg, a.epsilon, g);
  }
  const int vcase = ks::snowflake_volume_case(a.epsilon / a.base);

  if (c.format == "csv") {
    std::ostringstream s;
    ks::CsvWriter w(s, {"mode", "k1", "k2", "epsilon", "base_length", "case", "area", "error"});
    w << a.mode << cfg.k1 << cfg.k2 << a.epsilon << a.base << vcase << v.area << v.error;
    w.end_row();
    emit(c, s.str());
    return kExitOk;
  }
  json j;
  j["command"] = "volume";
  j["mode"] = a.mode;
  if (a.mode != "snowflake") {
    j["k1"] = cfg.k1;
    j["k2"] = cfg.k2;
  }
  j["epsilon"] = a.epsilon;
  j["base_length"] = a.base;
  j["case"] = vcase;
  j["area"] = v.area;
  j["error"] = v.error;
  emit(c, json_text(j));
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ExpandArgs {
  int k1{0}, k2{0};
  int ell_min{5}, ell_max{9};
  std::vector<double> betas{0.0};
  std::string reference{"oracle"};
  long long budget{200000};
  std::uint64_t seed{1};
  double depth_divisor{200.0};
  int nu_max{12};
  int workers{1};
  bool displayed_r2{false};
  bool alternating_poles{false};
};

int run_expand(const Common& c, const ExpandArgs& a) {
  if (a.ell_min < 0 || a.ell_max < a.ell_min) throw ks::DomainError("expand: need 0 <= ell-min <= ell-max");
  const ks::SprayConfig cfg{a.k1, a.k2, 1.0};
  ks::ExpansionOptions eo;
  eo.gamma = gamma_options(c);
  eo.displayed_r2 = a.displayed_r2;
  eo.alternating_poles = a.alternating_poles;
  ks::OracleOptions oo;
  oo.budget = a.budget;
  oo.seed = a.seed;
  oo.depth_divisor = a.depth_divisor;
  oo.workers = a.workers;
  ks::OracleCache cache;

  struct Row {
    int ell;
    double beta, predicted, predicted_error, reference, bound;
  };
  std::vector<Row> rows;
  for (double beta : a.betas) {
    const auto coeffs = ks::volume_coefficients(cfg, beta, eo);
    for (int ell = a.ell_min; ell <= a.ell_max; ++ell) {
      const auto p = ks::volume_expansion(coeffs, ell);
      const double eps = std::exp(-(ks::kLatticeConstant * ell + beta));
      Row r{ell, beta, p.value, p.error, 0.0, 0.0};
      if (a.reference == "oracle") {
        const auto o = ks::spray_parallel_volume_estimate(cfg, eps, a.nu_max, oo, &cache);
        r.reference = o.value;
        r.bound = o.total_bound();
      } else {
        const auto x = ks::spray_parallel_volume_exact(cfg, eps, eo.gamma);
        r.reference = x.area;
        r.bound = x.error;
      }
      rows.push_back(r);
    }
  }

  if (c.format == "csv") {
    std::ostringstream s;
    ks::CsvWriter w(s, {"ell", "beta", "predicted", "oracle", "abs_err"});
    for (const auto& r : rows) {
      w << r.ell << r.beta << r.predicted << r.reference << std::abs(r.predicted - r.reference);
      w.end_row();
    }
    emit(c, s.str());
    return kExitOk;
  }
  json j;
  j["command"] = "expand";
  j["k1"] = a.k1;
  j["k2"] = a.k2;
  j["reference"] = a.reference;
  j["rows"] = json::array();
  for (const auto& r : rows) {
    json e;
    e["ell"] = r.ell;
    e["beta"] = r.beta;
    e["epsilon"] = std::exp(-(ks::kLatticeConstant * r.ell + r.beta));
    e["predicted"] = r.predicted;
    e["predicted_error"] = r.predicted_error;
    e["oracle"] = r.reference;
    e["oracle_bound"] = r.bound;
    e["abs_err"] = std::abs(r.predicted - r.reference);
    j["rows"].push_back(std::move(e));
  }
  emit(c, json_text(j));
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct BoundsArgs {
  std::optional<int> k1, k2;
  std::optional<int> ell0;
  std::optional<double> beta;
  int beta_grid{64};
};

int run_bounds(const Common& c, const BoundsArgs& a) {
  ks::BoundConstants bc;
  bc.ell0 = a.ell0;
  bc.beta_grid = a.beta_grid;
  const int ell0 = a.ell0.value_or(ks::faber_krahn_ell0());

  struct Row {
    int k1, k2;
    ks::CountingBound b;
    double published;
  };
  std::vector<Row> rows;
  for (auto [k1, k2] : configs_or_reference(a.k1, a.k2)) {
    const ks::SprayConfig cfg{k1, k2, 1.0};
    std::vector<double> pub;
    for (const auto& p : ks::published_bounds()) {
      if (p.k1 == k1 && p.k2 == k2) pub = p.bounds;
    }
    std::size_t i = 0;
    for (const auto& z : ks::zero_set(k1, k2, ks::ZeroKind::C).zeros) {
      if (!(z.z.real() < -0.5 * ks::kKochDimension) || z.z.imag() < -1e-12) continue;
      const auto b = a.beta ? ks::counting_bound(cfg, z.z, *a.beta, bc) : ks::counting_bound_sup(cfg, z.z, bc);
      rows.push_back({k1, k2, b, i < pub.size() && !a.beta ? pub[i] : std::nan("")});
      ++i;
    }
  }
  const std::string conventions =
      "ell0 = " + std::to_string(ell0) +
      (a.ell0 ? " (override)" : " (Faber-Krahn: floor(log_3(pi j01^2 / vol K)))") + "; " +
      (a.beta ? "pointwise at beta" : "supremum over a " + std::to_string(a.beta_grid) + "-point beta grid on [0, 2a)") +
      "; conjugate pairs reported once (Im >= 0)";

  if (c.format == "csv") {
    std::ostringstream s;
    ks::CsvWriter w(s, {"k1", "k2", "zero", "re", "im", "bound", "beta", "published", "ratio"});
    for (const auto& r : rows) {
      w << r.k1 << r.k2 << format_zero(r.b.z) << r.b.z.real() << r.b.z.imag() << r.b.bound << r.b.beta
        << r.published << r.b.bound / r.published;
      w.end_row();
    }
    emit(c, s.str());
    return kExitOk;
  }
  json j;
  j["command"] = "bounds";
  j["conventions"] = conventions;
  j["ell0"] = ell0;
  j["rows"] = json::array();
  for (const auto& r : rows) {
    json e;
    e["k1"] = r.k1;
    e["k2"] = r.k2;
    e["zero"] = format_zero(r.b.z);
    auto b = ks::to_json(r.b);
    for (auto it = b.begin(); it != b.end(); ++it) e[it.key()] = it.value();
    if (!std::isnan(r.published)) {
      e["published"] = r.published;
      e["ratio"] = r.b.bound / r.published;
    }
    j["rows"].push_back(std::move(e));
  }
  emit(c, json_text(j));
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct CoeffsArgs {
  std::optional<int> k1, k2;
  double beta{0.0};
  bool displayed_r2{false};
  bool alternating_poles{false};
};

int run_coeffs(const Common& c, const CoeffsArgs& a) {
  ks::ExpansionOptions eo;
  eo.gamma = gamma_options(c);
  eo.displayed_r2 = a.displayed_r2;
  eo.alternating_poles = a.alternating_poles;
  std::vector<std::pair<std::pair<int, int>, ks::VolumeCoefficients>> rows;
  for (auto [k1, k2] : configs_or_reference(a.k1, a.k2)) {
    rows.push_back({{k1, k2}, ks::volume_coefficients({k1, k2, 1.0}, a.beta, eo)});
  }
  if (c.format == "csv") {
    std::ostringstream s;
    ks::CsvWriter w(s, {"k1", "k2", "beta", "r2_prefactor", "r2_prefactor_exact", "r_delta_prefactor",
                        "r_delta_prefactor_exact", "component_factor", "r2", "r_delta"});
    for (const auto& [k, v] : rows) {
      w << k.first << k.second << v.beta << v.r2_prefactor << ks::to_string(ks::r2_prefactor_exact(k.first, k.second))
        << v.r_delta_prefactor << ks::to_string(ks::r_delta_prefactor_exact(k.first, k.second))
        << v.component_factor << v.r2 << v.r_delta;
      w.end_row();
    }
    emit(c, s.str());
    return kExitOk;
  }
  json j;
  j["command"] = "coeffs";
  j["rows"] = json::array();
  for (const auto& [k, v] : rows) {
    json e = ks::to_json(v);
    e["r2_prefactor_exact"] = ks::to_string(ks::r2_prefactor_exact(k.first, k.second));
    e["r_delta_prefactor_exact"] = ks::to_string(ks::r_delta_prefactor_exact(k.first, k.second));
    e["r2_prefactor_from_count"] = ks::r2_prefactor_from_count(k.first, k.second);
    e["r_delta_prefactor_from_histogram"] = ks::r_delta_prefactor_from_histogram(k.first, k.second);
    j["rows"].push_back(std::move(e));
  }
  emit(c, json_text(j));
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct OracleArgs {
  double epsilon{0.0};
  double base{1.0};
  int k1{0}, k2{0};
  std::string mode{"snowflake"};
  long long budget{200000};
  std::uint64_t seed{1};
  int depth{-1};
  double depth_divisor{200.0};
  int workers{1};
  int nu_max{12};
  double tol{0.0};
};

int run_oracle(const Common& c, const OracleArgs& a) {
  ks::OracleOptions o;
  o.budget = a.budget;
  o.seed = a.seed;
  o.depth = a.depth;
  o.depth_divisor = a.depth_divisor;
  o.workers = a.workers;
  o.tolerance = a.tol;
  const ks::SprayConfig cfg{a.k1, a.k2, a.base};
  const auto g = gamma_options(c);
  ks::OracleEstimate est;
  ks::VolumeValue closed;
  if (a.mode == "snowflake") {
    est = ks::parallel_volume_estimate(a.epsilon, a.base, o);
    closed = ks::snowflake_parallel_volume(a.epsilon, a.base, g);
  } else if (a.mode == "generator") {
    est = ks::generator_parallel_volume_estimate(cfg, a.epsilon, o);
    closed = ks::generator_parallel_volume(cfg, a.epsilon, g);
  } else {
    ks::OracleCache cache;
    est = ks::spray_parallel_volume_estimate(cfg, a.epsilon, a.nu_max, o, &cache);
    closed = ks::spray_parallel_volume_exact(cfg, a.epsilon, g);
  }
  if (c.format == "csv") {
    std::ostringstream s;
    ks::CsvWriter w(s, {"mode", "epsilon", "value", "deterministic_bound", "stochastic_bound", "samples", "depth",
                        "closed_form", "abs_err"});
    w << a.mode << a.epsilon << est.value << est.deterministic_bound << est.stochastic_bound << est.samples
      << est.depth << closed.area << std::abs(est.value - closed.area);
    w.end_row();
    emit(c, s.str());
    return kExitOk;
  }
  json j;
  j["command"] = "oracle";
  j["mode"] = a.mode;
  j["epsilon"] = a.epsilon;
  j["seed"] = a.seed;
  j["estimate"] = ks::to_json(est);
  j["closed_form"] = closed.area;
  j["closed_form_error"] = closed.error;
  j["abs_err"] = std::abs(est.value - closed.area);
  emit(c, json_text(j));
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ValidateArgs {
  std::string suite{"all"};
  double tol{0.01};
  std::uint64_t seed{1};
  long long budget{200000};
};

int run_validate(const Common& c, const ValidateArgs& a) {
  ks::ValidationOptions vo;
  vo.tolerance = a.tol;
  vo.seed = a.seed;
  vo.budget = a.budget;
  const auto results = ks::run_validation(a.suite, vo);
  bool ok = true;
  for (const auto& r : results) {
    ok = ok && r.passed;
    if (!r.passed) std::cerr << "FAIL [" << r.suite << "] " << r.name << ": " << r.detail << "\n";
  }
  if (c.format == "csv") {
    std::ostringstream s;
    ks::CsvWriter w(s, {"suite", "name", "passed", "detail"});
    for (const auto& r : results) {
      w << r.suite << r.name << (r.passed ? "true" : "false") << r.detail;
      w.end_row();
    }
    emit(c, s.str());
  } else {
    json j;
    j["command"] = "validate";
    j["suite"] = a.suite;
    j["passed"] = ok;
    j["checks"] = json::array();
    for (const auto& r : results) j["checks"].push_back(ks::to_json(r));
    emit(c, json_text(j));
  }
  return ok ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------------------

struct GammaTableArgs {
  bool build{false};
  double interp_tol{2e-10};
};

int run_gamma_table(const Common& c, const GammaTableArgs& a) {
  ks::GammaTable built;
  const ks::GammaTable* t = nullptr;
  if (a.build) {
    built = ks::GammaTable::build(a.interp_tol, {}, [](std::size_t n) {
      if (n % 50 == 0) std::cerr << "gamma-table: " << n << " evaluations\n";
    });
    t = &built;
  } else {
    const auto g = gamma_options(c);
    t = g.table ? g.table : &ks::GammaTable::builtin();
  }
  if (c.format == "json") {
    json j;
    j["command"] = "gamma-table";
    j["max_error"] = t->max_error();
    j["nodes"] = json::array();
    for (const auto& n : t->nodes()) j["nodes"].push_back({{"eps", n.eps}, {"value", n.value}, {"error", n.error}});
    emit(c, json_text(j));
  } else {
    std::ostringstream s;
    t->to_csv(s);
    emit(c, s.str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Koch snowflake spray volumes, pole sets and expansion coefficients"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with the same keys as the flags");

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--output,-o", common.output,
                    std::string("Output file (relative paths resolve against $") + kOutputDirEnv + ")");
    sub->add_option("--gamma-table", common.gamma_table, "CSV gamma table to use instead of the built-in one");
    sub->add_flag("--gamma-direct", common.gamma_direct, "Evaluate the gamma kernel by direct quadrature");
  };
  const auto krange = CLI::Range(0, 6);

  ZerosArgs za;
  auto* zeros = app.add_subcommand("zeros", "Pole sets Z_C / Z_P");
  zeros->add_option("--k1", za.k1)->check(krange);
  zeros->add_option("--k2", za.k2)->check(krange);
  zeros->add_option("--kind", za.kind)->check(CLI::IsMember({"C", "P", "both"}));
  zeros->add_option("--tol", za.tol, "Polynomial residual tolerance")->check(CLI::PositiveNumber);
  add_common(zeros);

  VolumeArgs va;
  auto* volume = app.add_subcommand("volume", "Inner parallel volume of a snowflake, generator or spray");
  volume->add_option("--epsilon,-e", va.epsilon)->required()->check(CLI::PositiveNumber);
  volume->add_option("--base", va.base)->check(CLI::PositiveNumber);
  volume->add_option("--k1", va.k1)->check(krange);
  volume->add_option("--k2", va.k2)->check(krange);
  volume->add_option("--mode", va.mode)->check(CLI::IsMember({"snowflake", "generator", "spray"}));
  add_common(volume);

  ExpandArgs ea;
  auto* expand = app.add_subcommand("expand", "Volume expansion sweep against a reference");
  expand->add_option("--k1", ea.k1)->check(krange);
  expand->add_option("--k2", ea.k2)->check(krange);
  expand->add_option("--ell-min", ea.ell_min);
  expand->add_option("--ell-max", ea.ell_max);
  expand->add_option("--beta", ea.betas, "One or more beta in [0, a)");
  expand->add_option("--reference", ea.reference, "oracle: geometric estimate; exact: lattice sum of closed forms")
      ->check(CLI::IsMember({"oracle", "exact"}));
  expand->add_option("--budget", ea.budget)->check(CLI::PositiveNumber);
  expand->add_option("--seed", ea.seed);
  expand->add_option("--depth-divisor", ea.depth_divisor)->check(CLI::PositiveNumber);
  expand->add_option("--nu-max", ea.nu_max)->check(CLI::NonNegativeNumber);
  expand->add_option("--workers", ea.workers)->check(CLI::PositiveNumber);
  expand->add_flag("--displayed-r2", ea.displayed_r2, "Omit the factor 1 + k1 + k2 in R(2)");
  expand->add_flag("--alternating-poles", ea.alternating_poles,
                  "Include the (-1)^ell terms from the poles at 2 + i pi/a and 2 - delta + i pi/a");
  add_common(expand);

  BoundsArgs ba;
  auto* bounds = app.add_subcommand("bounds", "Counting-coefficient bounds at the zeros with Re z < -delta/2");
  bounds->add_option("--k1", ba.k1)->check(krange);
  bounds->add_option("--k2", ba.k2)->check(krange);
  bounds->add_option("--ell0", ba.ell0, "Override the Faber-Krahn ell0");
  bounds->add_option("--beta", ba.beta, "Pointwise bound at this beta instead of the supremum");
  bounds->add_option("--beta-grid", ba.beta_grid)->check(CLI::PositiveNumber);
  add_common(bounds);

  CoeffsArgs ca;
  auto* coeffs = app.add_subcommand("coeffs", "Volume expansion coefficients and prefactors");
  coeffs->add_option("--k1", ca.k1)->check(krange);
  coeffs->add_option("--k2", ca.k2)->check(krange);
  coeffs->add_option("--beta", ca.beta);
  coeffs->add_flag("--displayed-r2", ca.displayed_r2, "Omit the factor 1 + k1 + k2 in R(2)");
  coeffs->add_flag("--alternating-poles", ca.alternating_poles,
                  "Include the (-1)^ell terms from the poles at 2 + i pi/a and 2 - delta + i pi/a");
  add_common(coeffs);

  OracleArgs oa;
  auto* oracle = app.add_subcommand("oracle", "Geometric Monte Carlo estimate of the parallel volume");
  oracle->add_option("--epsilon,-e", oa.epsilon)->required()->check(CLI::PositiveNumber);
  oracle->add_option("--base", oa.base)->check(CLI::PositiveNumber);
  oracle->add_option("--k1", oa.k1)->check(krange);
  oracle->add_option("--k2", oa.k2)->check(krange);
  oracle->add_option("--mode", oa.mode)->check(CLI::IsMember({"snowflake", "generator", "spray"}));
  oracle->add_option("--budget", oa.budget)->check(CLI::PositiveNumber);
  oracle->add_option("--seed", oa.seed);
  oracle->add_option("--depth", oa.depth, "Prefractal depth (default from --depth-divisor)");
  oracle->add_option("--depth-divisor", oa.depth_divisor)->check(CLI::PositiveNumber);
  oracle->add_option("--workers", oa.workers)->check(CLI::PositiveNumber);
  oracle->add_option("--nu-max", oa.nu_max)->check(CLI::NonNegativeNumber);
  oracle->add_option("--tol", oa.tol, "Fail if the stochastic bound exceeds this")->check(CLI::NonNegativeNumber);
  add_common(oracle);

  ValidateArgs vla;
  auto* validate = app.add_subcommand("validate", "Run the invariant suites");
  std::vector<std::string> suites = ks::validation_suites();
  suites.push_back("all");
  validate->add_option("--suite", vla.suite)->check(CLI::IsMember(suites));
  validate->add_option("--tol", vla.tol, "Relative oracle tolerance")->check(CLI::PositiveNumber);
  validate->add_option("--seed", vla.seed);
  validate->add_option("--budget", vla.budget)->check(CLI::PositiveNumber);
  add_common(validate);

  GammaTableArgs ga;
  auto* gtable = app.add_subcommand("gamma-table", "Export (default) or rebuild the gamma interpolation table");
  gtable->add_flag("--build", ga.build, "Rebuild from quadrature (slow)");
  gtable->add_option("--interp-tol", ga.interp_tol)->check(CLI::PositiveNumber);
  add_common(gtable);
  common.format = "json";

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e, std::cerr, std::cerr);
    return kExitUsage;
  }
  if (gtable->parsed() && gtable->count("--format") == 0) common.format = "csv";

  try {
    if (zeros->parsed()) return run_zeros(common, za);
    if (volume->parsed()) return run_volume(common, va);
    if (expand->parsed()) return run_expand(common, ea);
    if (bounds->parsed()) return run_bounds(common, ba);
    if (coeffs->parsed()) return run_coeffs(common, ca);
    if (oracle->parsed()) return run_oracle(common, oa);
    if (validate->parsed()) return run_validate(common, vla);
    if (gtable->parsed()) return run_gamma_table(common, ga);
  } catch (const ks::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
