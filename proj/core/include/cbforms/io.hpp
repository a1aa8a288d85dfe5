#pragma once

// JSON and CSV serialization. Every public index is 1-based on disk and
// 0-based in memory. Objects keep insertion order so that a dump is a pure
// function of its input.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cbforms/forms.hpp"
#include "cbforms/freecomb.hpp"
#include "cbforms/ncpoly.hpp"
#include "cbforms/quantum.hpp"
#include "cbforms/simulate.hpp"
#include "cbforms/witness.hpp"

namespace cbforms::io {

using Json = nlohmann::ordered_json;

Json form_to_json(const forms::BlockMultilinearForm& f);
forms::BlockMultilinearForm form_from_json(const Json& j);

Json circuit_to_json(const quantum::QuantumQueryCircuit& c);
/// Validates orthogonality and norms before returning.
quantum::QuantumQueryCircuit circuit_from_json(const Json& j);

/// True when the object looks like a circuit rather than a form.
bool is_circuit_json(const Json& j);

Json nc_to_json(const ncpoly::NCPolynomial& p);
ncpoly::NCPolynomial nc_from_json(const Json& j);

/// Parses "u1 u2 + 2*u2 u1 - 0.5*u3 + 1". Letters are u1..ut (1-based);
/// t is the largest index that appears unless `num_variables` is larger.
ncpoly::NCPolynomial parse_nc_polynomial(const std::string& text, int num_variables = 0);

Json seed_to_json(const Seed& s);
Json report_to_json(const witness::WitnessReport& r);

Json pairings_to_json(int d, int m, const std::vector<freecomb::StarPairing>& pairings);
Json moment_to_json(const freecomb::MomentValue& v);

Json profile_to_json(const simulate::ErrorProfile& p);
Json budget_rows_to_json(const std::vector<simulate::BudgetRow>& rows);

/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

/// RFC 4180 field quoting: fields with a comma, quote, CR or LF are quoted
/// and embedded quotes doubled.
std::string csv_field(const std::string& s);
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows);
/// Shortest decimal form that reads back to the same double.
std::string format_double(double x);

Json read_json_file(const std::string& path);
/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace cbforms::io
