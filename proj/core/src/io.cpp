#include "cbforms/io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cbforms/error.hpp"

namespace cbforms::io {
namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing field '") + key + "'");
  return j.at(key);
}

int int_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) throw InvalidInput(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

double number(const Json& v, const char* what) {
  if (!v.is_number()) throw InvalidInput(std::string(what) + " must be a number");
  return v.get<double>();
}

Eigen::VectorXd vector_from(const Json& j, const char* key) {
  const Json& a = field(j, key);
  if (!a.is_array()) throw InvalidInput(std::string("field '") + key + "' must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(a[i], key);
  return v;
}

Json vector_to(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

class PolyParser {
 public:
  explicit PolyParser(const std::string& s) : s_(s) {}

  ncpoly::NCPolynomial parse(int num_variables) {
    std::vector<std::pair<ncpoly::NCPolynomial::Word, double>> terms;
    double constant = 0.0;
    int max_var = 0;
    skip();
    bool first = true;
    while (pos_ < s_.size()) {
      double sign = 1.0;
      if (peek() == '+' || peek() == '-') {
        sign = get() == '-' ? -1.0 : 1.0;
        skip();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      double coeff = 1.0;
      bool have_coeff = false;
      if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
        coeff = parse_number();
        have_coeff = true;
        skip();
        if (peek() == '*') {
          get();
          skip();
        }
      }
      ncpoly::NCPolynomial::Word word;
      while (peek() == 'u') {
        get();
        const int k = parse_index();
        max_var = std::max(max_var, k);
        word.push_back(k - 1);
        skip();
        if (peek() == '*') {
          get();
          skip();
        }
      }
      if (word.empty() && !have_coeff) fail("empty term");
      if (word.empty())
        constant += sign * coeff;
      else
        terms.emplace_back(std::move(word), sign * coeff);
    }
    if (first) fail("empty polynomial");
    ncpoly::NCPolynomial p(std::max(num_variables, max_var), constant);
    for (const auto& [w, c] : terms) p.add_term(w, c);
    return p;
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  char get() { return s_[pos_++]; }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw InvalidInput("polynomial '" + s_ + "': " + what + " at offset " + std::to_string(pos_));
  }
  double parse_number() {
    double v = 0.0;
    const char* begin = s_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(begin, s_.data() + s_.size(), v);
    if (ec != std::errc()) fail("bad number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }
  int parse_index() {
    int v = 0;
    const char* begin = s_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(begin, s_.data() + s_.size(), v);
    if (ec != std::errc() || v < 1) fail("variable index must be a positive integer");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Json form_to_json(const forms::BlockMultilinearForm& f) {
  Json j;
  j["d"] = f.d();
  j["n"] = f.n();
  j["constant"] = f.constant();
  Json terms = Json::array();
  // std::map order on (blocks, indices) is the canonical lexicographic order.
  for (const auto& [m, c] : f.terms()) {
    Json t;
    Json blocks = Json::array();
    Json indices = Json::array();
    for (int k = 0; k < m.degree(); ++k) {
      blocks.push_back(m.blocks[static_cast<std::size_t>(k)] + 1);
      indices.push_back(m.indices[static_cast<std::size_t>(k)] + 1);
    }
    t["blocks"] = std::move(blocks);
    t["indices"] = std::move(indices);
    t["coeff"] = c;
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  return j;
}

forms::BlockMultilinearForm form_from_json(const Json& j) {
  const int d = int_field(j, "d");
  const int n = int_field(j, "n");
  const double constant = j.contains("constant") ? number(j.at("constant"), "constant") : 0.0;
  forms::BlockMultilinearForm f(d, n, constant);
  const Json& terms = field(j, "terms");
  if (!terms.is_array()) throw InvalidInput("field 'terms' must be an array");
  for (const Json& t : terms) {
    const Json& blocks = field(t, "blocks");
    const Json& indices = field(t, "indices");
    if (!blocks.is_array() || !indices.is_array() || blocks.size() != indices.size())
      throw InvalidInput("term needs equally long 'blocks' and 'indices' arrays");
    forms::Monomial m;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      if (!blocks[k].is_number_integer() || !indices[k].is_number_integer())
        throw InvalidInput("blocks and indices must be integers");
      m.blocks.push_back(blocks[k].get<int>() - 1);
      m.indices.push_back(indices[k].get<int>() - 1);
    }
    const double c = number(field(t, "coeff"), "coeff");
    if (f.terms().contains(m)) throw InvalidInput("duplicate term in form file");
    f.add_term(m, c);
  }
  return f;
}

Json circuit_to_json(const quantum::QuantumQueryCircuit& c) {
  Json j;
  j["n"] = c.n;
  j["s"] = c.s;
  j["d"] = c.d;
  j["u"] = vector_to(c.u);
  j["v"] = vector_to(c.v);
  Json us = Json::array();
  for (const auto& U : c.unitaries) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < U.rows(); ++r) {
      Json row = Json::array();
      for (Eigen::Index col = 0; col < U.cols(); ++col) row.push_back(U(r, col));
      rows.push_back(std::move(row));
    }
    us.push_back(std::move(rows));
  }
  j["unitaries"] = std::move(us);
  return j;
}

quantum::QuantumQueryCircuit circuit_from_json(const Json& j) {
  quantum::QuantumQueryCircuit c;
  c.n = int_field(j, "n");
  c.s = int_field(j, "s");
  c.d = int_field(j, "d");
  c.u = vector_from(j, "u");
  c.v = vector_from(j, "v");
  const Json& us = field(j, "unitaries");
  if (!us.is_array()) throw InvalidInput("field 'unitaries' must be an array");
  for (const Json& rows : us) {
    if (!rows.is_array()) throw InvalidInput("unitary must be an array of rows");
    const auto dim = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd U(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
      const Json& row = rows[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim)
        throw InvalidInput("unitary must be square");
      for (Eigen::Index col = 0; col < dim; ++col) U(r, col) = number(row[static_cast<std::size_t>(col)], "matrix entry");
    }
    c.unitaries.push_back(std::move(U));
  }
  c.validate();
  return c;
}

bool is_circuit_json(const Json& j) { return j.is_object() && j.contains("unitaries"); }

Json nc_to_json(const ncpoly::NCPolynomial& p) {
  Json j;
  j["t"] = p.num_variables();
  j["constant"] = p.constant();
  Json terms = Json::array();
  for (const auto& [w, c] : p.terms()) {
    Json word = Json::array();
    for (int v : w) word.push_back(v + 1);
    Json t;
    t["word"] = std::move(word);
    t["coeff"] = c;
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  return j;
}

ncpoly::NCPolynomial nc_from_json(const Json& j) {
  const double constant = j.contains("constant") ? number(j.at("constant"), "constant") : 0.0;
  ncpoly::NCPolynomial p(int_field(j, "t"), constant);
  for (const Json& t : field(j, "terms")) {
    ncpoly::NCPolynomial::Word w;
    for (const Json& v : field(t, "word")) {
      if (!v.is_number_integer()) throw InvalidInput("word letters must be integers");
      w.push_back(v.get<int>() - 1);
    }
    p.add_term(w, number(field(t, "coeff"), "coeff"));
  }
  return p;
}

ncpoly::NCPolynomial parse_nc_polynomial(const std::string& text, int num_variables) {
  return PolyParser(text).parse(num_variables);
}

Json seed_to_json(const Seed& s) {
  Json j;
  j["master"] = s.master();
  j["path"] = s.path();
  return j;
}

Json report_to_json(const witness::WitnessReport& r) {
  Json j;
  j["method"] = witness::to_string(r.method);
  j["achieved"] = r.achieved;
  j["target"] = r.target;
  j["ratio"] = r.target > 0.0 ? Json(r.achieved / r.target) : Json(nullptr);
  j["N"] = r.N;
  j["seed"] = seed_to_json(r.seed);
  j["unitarity_residual"] = r.unitarity_residual;
  j["selected_block"] = r.selected_block ? Json(*r.selected_block + 1) : Json(nullptr);
  Json sched = Json::array();
  for (const auto& [N, a] : r.schedule_results) {
    Json row;
    row["N"] = N;
    row["achieved"] = a;
    sched.push_back(std::move(row));
  }
  j["schedule"] = std::move(sched);
  if (r.seconds) j["seconds"] = *r.seconds;
  return j;
}

Json pairings_to_json(int d, int m, const std::vector<freecomb::StarPairing>& pairings) {
  Json j;
  j["d"] = d;
  j["m"] = m;
  j["count"] = pairings.size();
  Json list = Json::array();
  for (const auto& p : pairings) {
    auto pairs = p.pairs;
    std::sort(pairs.begin(), pairs.end());
    Json a = Json::array();
    for (const auto& [x, y] : pairs) a.push_back(Json::array({x + 1, y + 1}));
    list.push_back(std::move(a));
  }
  j["pairings"] = std::move(list);
  return j;
}

Json moment_to_json(const freecomb::MomentValue& v) {
  if (v.exact) return Json(v.integer);
  return Json(v.real);
}

Json profile_to_json(const simulate::ErrorProfile& p) {
  Json j;
  j["inputs"] = p.inputs;
  j["failing_fraction"] = p.failing_fraction;
  j["mean_queries"] = p.mean_queries;
  j["max_error"] = p.max_error;
  j["budget_exhausted_fraction"] = p.budget_exhausted_fraction;
  Json hist = Json::array();
  for (const auto& [err, count] : p.histogram) {
    Json row;
    row["error"] = err;
    row["count"] = count;
    hist.push_back(std::move(row));
  }
  j["histogram"] = std::move(hist);
  return j;
}

Json budget_rows_to_json(const std::vector<simulate::BudgetRow>& rows) {
  Json a = Json::array();
  for (const auto& r : rows) {
    Json row;
    row["budget"] = r.budget;
    row["epsilon"] = r.epsilon;
    row["achieved_failing_fraction"] = r.achieved_failing_fraction;
    row["mean_queries"] = r.mean_queries;
    a.push_back(std::move(row));
  }
  return a;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += csv_field(cells[i]);
    }
    out += "\r\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw Error("cannot format number");
  return std::string(buf, ptr);
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("malformed JSON in '" + path + "': " + e.what());
  }
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw Error("write to '" + tmp.string() + "' failed");
    }
  }
  fs::rename(tmp, target);
}

}  // namespace cbforms::io
