#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cbforms/error.hpp"
#include "cbforms/forms.hpp"
#include "cbforms/freecomb.hpp"
#include "cbforms/io.hpp"
#include "cbforms/quantum.hpp"
#include "cbforms/simulate.hpp"
#include "cbforms/witness.hpp"

namespace cbforms::cli {
namespace {

using io::Json;
namespace fs = std::filesystem;

struct RunConfig {
  std::uint64_t seed = 1;
  int dim = 0;
  std::vector<int> schedule;
  int trials = 1000;
  double eps = 0.1;
  double delta = 0.1;
  int budget = 16;
  std::string format = "table";
  int cap = 0;
  std::string out;
  bool timing = false;

  // Subcommand parameters.
  std::string input;
  std::string method = "polar-homogeneous";
  std::string side = "first";
  int d = 2;
  int n = 4;
  int s = 1;
  int k = 2;
  int terms = 8;
  bool homogeneous = false;
  int m = 1;
  bool list = false;
};

// A command result. `rows` names the array of objects that becomes the CSV
// body; when empty the top-level scalars form a single CSV row.
struct Payload {
  Json json;
  std::string rows;
  int exit_code = kExitOk;
};

std::string scalar_text(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) return io::format_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

bool is_table(const Json& v) { return v.is_array() && !v.empty() && v.front().is_object(); }

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, Json>>& scalars,
             std::vector<std::pair<std::string, const Json*>>& tables) {
  for (const auto& [key, v] : j.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (v.is_object())
      flatten(v, name, scalars, tables);
    else if (is_table(v))
      tables.emplace_back(name, &v);
    else
      scalars.emplace_back(name, v);
  }
}

std::string render_table(const Json& j) {
  std::vector<std::pair<std::string, Json>> scalars;
  std::vector<std::pair<std::string, const Json*>> tables;
  flatten(j, "", scalars, tables);
  std::ostringstream os;
  std::size_t width = 0;
  for (const auto& [k, v] : scalars) width = std::max(width, k.size());
  for (const auto& [k, v] : scalars)
    os << std::left << std::setw(static_cast<int>(width)) << k << "  " << scalar_text(v) << "\n";
  for (const auto& [name, rows] : tables) {
    os << "\n" << name << ":\n";
    std::vector<std::string> header;
    for (const auto& [k, v] : rows->front().items()) header.push_back(k);
    std::vector<std::vector<std::string>> cells;
    std::vector<std::size_t> widths;
    for (const auto& h : header) widths.push_back(h.size());
    for (const Json& r : *rows) {
      std::vector<std::string> line;
      for (std::size_t c = 0; c < header.size(); ++c) {
        line.push_back(r.contains(header[c]) ? scalar_text(r.at(header[c])) : "");
        widths[c] = std::max(widths[c], line.back().size());
      }
      cells.push_back(std::move(line));
    }
    auto emit = [&](const std::vector<std::string>& line) {
      for (std::size_t c = 0; c < line.size(); ++c) {
        if (c) os << "  ";
        if (c + 1 == line.size())
          os << line[c];
        else
          os << std::left << std::setw(static_cast<int>(widths[c])) << line[c];
      }
      os << "\n";
    };
    emit(header);
    for (const auto& line : cells) emit(line);
  }
  return os.str();
}

std::string render_csv(const Payload& p) {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  if (!p.rows.empty()) {
    const Json& arr = p.json.at(p.rows);
    if (!arr.empty()) {
      for (const auto& [k, v] : arr.front().items()) header.push_back(k);
      for (const Json& r : arr) {
        std::vector<std::string> line;
        for (const auto& h : header) line.push_back(r.contains(h) ? scalar_text(r.at(h)) : "");
        rows.push_back(std::move(line));
      }
    }
  } else {
    std::vector<std::pair<std::string, Json>> scalars;
    std::vector<std::pair<std::string, const Json*>> tables;
    flatten(p.json, "", scalars, tables);
    std::vector<std::string> line;
    for (const auto& [k, v] : scalars) {
      header.push_back(k);
      line.push_back(scalar_text(v));
    }
    rows.push_back(std::move(line));
  }
  return io::csv_table(header, rows);
}

std::string render(const Payload& p, const std::string& format) {
  if (format == "json") return io::dump(p.json);
  if (format == "csv") return render_csv(p);
  return render_table(p.json);
}

std::string resolve_output(const std::string& path) {
  const char* dir = std::getenv("CBFORMS_OUT_DIR");
  if (!dir || !*dir || fs::path(path).is_absolute()) return path;
  return (fs::path(dir) / path).string();
}

void emit(const std::string& text, const RunConfig& cfg, std::ostream& out) {
  if (cfg.out.empty())
    out << text;
  else
    io::write_file_atomic(resolve_output(cfg.out), text);
}

Json max_influence_json(const forms::BlockMultilinearForm& f) {
  const auto mi = forms::max_influence(f);
  Json j;
  j["block"] = mi.variable.block + 1;
  j["index"] = mi.variable.index + 1;
  j["value"] = mi.value;
  return j;
}

Json form_summary(const forms::BlockMultilinearForm& f) {
  Json j;
  j["d"] = f.d();
  j["n"] = f.n();
  j["terms"] = f.terms().size();
  j["variance"] = forms::variance(f);
  j["max_influence"] = max_influence_json(f);
  return j;
}

forms::BlockMultilinearForm load_form(const std::string& path) {
  const Json j = io::read_json_file(path);
  if (io::is_circuit_json(j)) return quantum::extract_form(io::circuit_from_json(j));
  return io::form_from_json(j);
}

// gen writes the artifact to -o (or stdout) and prints a summary.
int finish_gen(const Json& artifact, const forms::BlockMultilinearForm& f, const std::string& kind,
               const RunConfig& cfg, std::ostream& out) {
  if (cfg.out.empty()) {
    out << io::dump(artifact);
    return kExitOk;
  }
  io::write_file_atomic(resolve_output(cfg.out), io::dump(artifact));
  Payload p;
  p.json["kind"] = kind;
  p.json["file"] = cfg.out;
  const Json summary = form_summary(f);
  for (const auto& [k, v] : summary.items()) p.json[k] = v;
  out << render(p, cfg.format);
  return kExitOk;
}

int cmd_gen(const std::string& kind, const RunConfig& cfg, std::ostream& out) {
  if (kind == "address") {
    const auto f = quantum::gen_address_form(cfg.d);
    return finish_gen(io::form_to_json(f), f, kind, cfg, out);
  }
  if (kind == "random-form") {
    const auto f = forms::random_form(cfg.d, cfg.n, cfg.terms, cfg.homogeneous, Seed(cfg.seed));
    return finish_gen(io::form_to_json(f), f, kind, cfg, out);
  }
  const quantum::QuantumQueryCircuit c = kind == "forrelation"
                                             ? quantum::gen_forrelation_circuit(cfg.n, cfg.k)
                                             : quantum::gen_random_circuit(cfg.n, cfg.s, cfg.d, Seed(cfg.seed));
  c.validate();
  return finish_gen(io::circuit_to_json(c), quantum::extract_form(c), kind, cfg, out);
}

Payload cmd_influence(const RunConfig& cfg) {
  const auto f = load_form(cfg.input);
  Payload p;
  p.json = form_summary(f);
  Json rows = Json::array();
  const auto table = forms::influence_table(f);
  for (int b = 0; b < f.d(); ++b)
    for (int i = 0; i < f.n(); ++i) {
      Json r;
      r["block"] = b + 1;
      r["index"] = i + 1;
      r["influence"] = table[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)];
      rows.push_back(std::move(r));
    }
  p.json["influences"] = std::move(rows);
  p.rows = "influences";
  return p;
}

witness::WitnessReport scalar_phase(const forms::BlockMultilinearForm& f) {
  const int d = f.d() - 1;
  if (d >= 1 && d <= 20 && f.n() == (1 << d) && f == quantum::gen_address_form(d))
    return witness::scalar_phase_witness_address(d);
  // Generic fallback: the address-form phase pattern on every block but
  // the last. No target is known for arbitrary forms.
  if (f.n() < 2) throw InvalidInput("scalar-phase witness needs n >= 2");
  std::vector<std::vector<matnum::Complex>> phases(
      static_cast<std::size_t>(std::max(f.d() - 1, 0)),
      std::vector<matnum::Complex>(static_cast<std::size_t>(f.n()), matnum::Complex(1.0, 0.0)));
  for (auto& row : phases) row[1] = matnum::Complex(0.0, 1.0);
  witness::WitnessReport r;
  r.method = witness::WitnessMethod::kScalarPhase;
  r.achieved = witness::scalar_phase_align_last(f, phases);
  r.selected_block = f.d() - 1;
  return r;
}

Payload cmd_witness(const RunConfig& cfg) {
  const auto f = load_form(cfg.input);
  const auto method = witness::witness_method_from_string(cfg.method);
  std::vector<int> schedule = witness::kDefaultSchedule;
  if (!cfg.schedule.empty()) schedule = cfg.schedule;
  if (cfg.dim > 0) schedule = {cfg.dim};
  const Seed seed(cfg.seed);
  const auto start = std::chrono::steady_clock::now();
  witness::WitnessReport r;
  switch (method) {
    case witness::WitnessMethod::kSignBaseline:
      r = witness::sign_baseline(f, cfg.trials, seed);
      break;
    case witness::WitnessMethod::kScalarPhase:
      r = scalar_phase(f);
      r.seed = seed;
      break;
    case witness::WitnessMethod::kPolarHomogeneous:
      r = witness::root_influence_witness(f, cfg.side == "last" ? witness::Side::kLast : witness::Side::kFirst,
                                          schedule, seed);
      break;
    case witness::WitnessMethod::kPolarGeneral:
      r = witness::aa_witness(f, schedule, seed);
      break;
  }
  if (cfg.timing)
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Payload p;
  p.json = io::report_to_json(r);
  return p;
}

Payload cmd_simulate(const RunConfig& cfg) {
  const auto f = load_form(cfg.input);
  const auto policy = simulate::SimulationPolicy::chebyshev(cfg.eps, cfg.delta, cfg.budget);
  const int cap = cfg.cap > 0 ? cfg.cap : simulate::kDefaultProfileCap;
  std::vector<int> budgets;
  for (int b = 1; b < cfg.budget; b *= 2) budgets.push_back(b);
  budgets.push_back(cfg.budget);
  Payload p;
  p.json["epsilon"] = policy.epsilon;
  p.json["delta"] = policy.delta;
  p.json["variance_threshold"] = policy.variance_threshold;
  p.json["budget"] = policy.query_budget;
  p.json["reference_query_bound"] = simulate::reference_query_bound(f.d(), policy.epsilon, policy.delta);
  p.json["profile"] = io::profile_to_json(simulate::error_profile(f, policy, cap));
  p.json["sweep"] = io::budget_rows_to_json(simulate::budget_sweep(f, policy, budgets, cap));
  p.rows = "sweep";
  return p;
}

bool moment_le(const freecomb::MomentValue& a, const freecomb::MomentValue& b) {
  if (a.exact && b.exact) return a.integer <= b.integer;
  return a.value() <= b.value() * (1.0 + 1e-12) + 1e-12;
}

Payload cmd_trace(const RunConfig& cfg) {
  const ncpoly::NCPolynomial poly = fs::is_regular_file(cfg.input)
                                        ? io::nc_from_json(io::read_json_file(cfg.input))
                                        : io::parse_nc_polynomial(cfg.input);
  const auto cap = cfg.cap > 0 ? static_cast<std::uint64_t>(cfg.cap) : freecomb::kDefaultMomentCap;
  const auto moment = freecomb::trace_moment_exact(poly, cfg.m, cap);
  Payload p;
  p.json["polynomial"] = io::nc_to_json(poly);
  p.json["m"] = cfg.m;
  p.json["degree"] = poly.degree();
  p.json["homogeneous"] = poly.is_homogeneous();
  p.json["exact"] = moment.exact;
  p.json["norm_squared"] = io::moment_to_json(freecomb::trace_inner_product(poly, poly));
  p.json["moment"] = io::moment_to_json(moment);
  if (poly.is_homogeneous() && !poly.terms().empty()) {
    const auto bound = freecomb::moment_upper_bound(poly, cfg.m);
    const bool holds = moment_le(moment, bound);
    p.json["fuss_catalan"] = freecomb::fuss_catalan(poly.degree(), cfg.m);
    p.json["bound"] = io::moment_to_json(bound);
    p.json["holds"] = holds;
    if (!holds) p.exit_code = kExitViolation;
  } else {
    p.json["fuss_catalan"] = nullptr;
    p.json["bound"] = nullptr;
    p.json["holds"] = nullptr;
  }
  return p;
}

int cmd_pairings(const RunConfig& cfg, std::ostream& out) {
  const int cap = cfg.cap > 0 ? cfg.cap : freecomb::kDefaultPairingCap;
  Json j;
  std::vector<freecomb::StarPairing> listed;
  if (cfg.list) {
    listed = freecomb::enumerate_star_pairings(cfg.d, cfg.m, cap);
    j = io::pairings_to_json(cfg.d, cfg.m, listed);
  } else {
    j["d"] = cfg.d;
    j["m"] = cfg.m;
    j["count"] = freecomb::count_star_pairings(cfg.d, cfg.m, cap);
  }
  j["fuss_catalan"] = freecomb::fuss_catalan(cfg.d, cfg.m);

  std::string text;
  if (cfg.format == "json") {
    text = io::dump(j);
  } else if (cfg.format == "csv") {
    std::vector<std::vector<std::string>> rows;
    if (j.contains("pairings")) {
      std::size_t k = 0;
      for (const Json& pairing : j.at("pairings")) rows.push_back({std::to_string(++k), pairing.dump()});
    }
    text = io::csv_table({"pairing", "pairs"}, rows);
  } else {
    text = scalar_text(j.at("count")) + "\n";
    if (j.contains("pairings"))
      for (const Json& pairing : j.at("pairings")) {
        std::string line;
        for (const Json& pr : pairing) {
          if (!line.empty()) line += ' ';
          line += "(" + scalar_text(pr[0]) + "," + scalar_text(pr[1]) + ")";
        }
        text += line + "\n";
      }
  }
  emit(text, cfg, out);
  return kExitOk;
}

Payload cmd_check(const RunConfig& cfg) {
  const auto f = load_form(cfg.input);
  const bool holds = witness::aa_inequality_holds(f);
  Payload p;
  p.json = form_summary(f);
  p.json["bound"] = witness::aa_influence_bound(f);
  p.json["holds"] = holds;
  if (!holds) p.exit_code = kExitViolation;
  return p;
}

void add_common(CLI::App* app, RunConfig& cfg) {
  app->add_option("--seed", cfg.seed, "Master seed");
  app->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv", "table"}));
  app->add_option("--cap", cfg.cap, "Override the enumeration cap");
  app->add_option("-o,--output", cfg.out, "Output file (relative to $CBFORMS_OUT_DIR when set)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Block-multilinear forms, cb-norm witnesses and free moments", "cbforms"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "Generate a form or circuit");
  gen->require_subcommand(1);
  auto* gen_address = gen->add_subcommand("address", "Address form of degree d+1");
  gen_address->add_option("--d", cfg.d, "Address bits")->required();
  auto* gen_forr = gen->add_subcommand("forrelation", "k-fold Forrelation circuit");
  gen_forr->add_option("--n", cfg.n, "Oracle dimension (power of two)")->required();
  gen_forr->add_option("--k", cfg.k, "Number of queries");
  auto* gen_form = gen->add_subcommand("random-form", "Random block-multilinear form");
  gen_form->add_option("--d", cfg.d, "Blocks")->required();
  gen_form->add_option("--n", cfg.n, "Variables per block")->required();
  gen_form->add_option("--terms", cfg.terms, "Number of monomials");
  gen_form->add_flag("--homogeneous", cfg.homogeneous, "Full-degree monomials only");
  auto* gen_circ = gen->add_subcommand("random-circuit", "Random real query circuit");
  gen_circ->add_option("--n", cfg.n, "Oracle dimension")->required();
  gen_circ->add_option("--s", cfg.s, "Workspace multiplier");
  gen_circ->add_option("--d", cfg.d, "Queries")->required();
  for (auto* sub : {gen_address, gen_forr, gen_form, gen_circ}) add_common(sub, cfg);

  auto* influence = app.add_subcommand("influence", "Influence table of a form or circuit");
  influence->add_option("file", cfg.input, "Form or circuit JSON")->required();

  auto* wit = app.add_subcommand("witness", "cb-norm lower bound witness");
  wit->add_option("file", cfg.input, "Form or circuit JSON")->required();
  wit->add_option("--method", cfg.method, "Witness method")
      ->check(CLI::IsMember({"sign-baseline", "scalar-phase", "polar-homogeneous", "polar-general"}));
  wit->add_option("--side", cfg.side, "Pulled-out block for polar-homogeneous")
      ->check(CLI::IsMember({"first", "last"}));
  wit->add_option("--dim", cfg.dim, "Single matrix dimension N");
  wit->add_option("--schedule", cfg.schedule, "Comma-separated dimensions")->delimiter(',');
  wit->add_option("--trials", cfg.trials, "Monte Carlo trials for the sign baseline");
  wit->add_flag("--timing", cfg.timing, "Record wall-clock seconds (breaks byte-identical reruns)");

  auto* sim = app.add_subcommand("simulate", "Exhaustive error profile of the greedy decision tree");
  sim->add_option("file", cfg.input, "Form or circuit JSON")->required();
  sim->add_option("--eps", cfg.eps, "Error tolerance");
  sim->add_option("--delta", cfg.delta, "Failure fraction");
  sim->add_option("--budget", cfg.budget, "Query budget");

  auto* trace = app.add_subcommand("trace", "Exact free moment phi((p p*)^m)");
  trace->add_option("polynomial", cfg.input, "Polynomial such as \"u1 u2 + 2*u2 u1\", or a JSON file")->required();
  trace->add_option("m", cfg.m, "Moment order")->required();

  auto* pairings = app.add_subcommand("pairings", "Count non-crossing star pairings");
  pairings->add_option("d", cfg.d, "Degree")->required();
  pairings->add_option("m", cfg.m, "Moment order")->required();
  pairings->add_flag("--list", cfg.list, "List every pairing");

  auto* check = app.add_subcommand("check", "Verify MaxInf >= Var^2 / (e (d+1)^4)");
  check->add_option("file", cfg.input, "Form or circuit JSON")->required();

  for (auto* sub : {influence, wit, sim, trace, pairings, check}) add_common(sub, cfg);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (gen->parsed()) {
      for (auto* sub : gen->get_subcommands())
        return cmd_gen(sub->get_name(), cfg, out);
    }
    if (pairings->parsed()) return cmd_pairings(cfg, out);
    Payload p;
    if (influence->parsed())
      p = cmd_influence(cfg);
    else if (wit->parsed())
      p = cmd_witness(cfg);
    else if (sim->parsed())
      p = cmd_simulate(cfg);
    else if (trace->parsed())
      p = cmd_trace(cfg);
    else
      p = cmd_check(cfg);
    emit(render(p, cfg.format), cfg, out);
    if (p.exit_code == kExitViolation) err << "violation: checked inequality does not hold\n";
    return p.exit_code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace cbforms::cli
