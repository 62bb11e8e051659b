#include "spsys/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace spsys {

namespace {

std::string degree_path(Degree d) { return "fiber " + to_string(d); }

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw ParseError("schema error at " + path + ": " + what);
}

const Json& require(const Json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) schema_error(path, std::string("missing key \"") + key + "\"");
  return *it;
}

int require_int(const Json& j, const char* key, const std::string& path, int min_value) {
  const Json& v = require(j, key, path);
  const std::string p = path + "." + key;
  if (!v.is_number_integer()) schema_error(p, "expected an integer");
  const auto x = v.get<long long>();
  if (x < min_value) schema_error(p, "must be at least " + std::to_string(min_value));
  if (x > 64) schema_error(p, "value too large");
  return static_cast<int>(x);
}

Complex complex_from_json(const Json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  schema_error(path, "expected a number or [re, im]");
}

ComplexVector vector_from_json(const Json& j, std::size_t expected, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array");
  if (j.size() != expected)
    schema_error(path, "expected " + std::to_string(expected) + " entries, got " +
                           std::to_string(j.size()));
  ComplexVector v(static_cast<Eigen::Index>(expected));
  for (std::size_t k = 0; k < expected; ++k)
    v(static_cast<Eigen::Index>(k)) = complex_from_json(j[k], path + "[" + std::to_string(k) + "]");
  return v;
}

ComplexMatrix matrix_from_json(const Json& j, std::size_t rows, std::size_t cols,
                               const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array of rows");
  if (j.size() != rows)
    schema_error(path, "expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
  ComplexMatrix a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const ComplexVector row = vector_from_json(j[r], cols, path + "[" + std::to_string(r) + "]");
    a.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return a;
}

void read_header(const Json& j, int& schema_version, int& m, int& n, int& truncation,
                 ComplexMatrix& u, Json& metadata) {
  if (!j.is_object()) schema_error("$", "expected an object");
  schema_version = require_int(j, "schema_version", "$", 1);
  if (schema_version > kSchemaVersion)
    schema_error("$.schema_version", "unsupported version " + std::to_string(schema_version));
  m = require_int(j, "m", "$", 0);
  n = require_int(j, "n", "$", 0);
  if (m + n == 0) schema_error("$", "m + n must be positive");
  truncation = require_int(j, "D", "$", 0);
  const auto mn = static_cast<std::size_t>(m) * static_cast<std::size_t>(n);
  u = matrix_from_json(require(j, "u", "$"), mn, mn, "$.u");
  if (auto it = j.find("metadata"); it != j.end()) metadata = *it;
}

void write_header(Json& j, int schema_version, int m, int n, int truncation,
                  const ComplexMatrix& u) {
  j["schema_version"] = schema_version;
  j["m"] = m;
  j["n"] = n;
  j["D"] = truncation;
  j["u"] = matrix_to_json(u);
}

std::string line_of(const std::string& text, std::size_t byte, std::size_t& line,
                    std::size_t& column) {
  line = 1;
  std::size_t start = 0;
  const std::size_t stop = std::min(byte == 0 ? 0 : byte - 1, text.size());
  for (std::size_t k = 0; k < stop; ++k) {
    if (text[k] == '\n') {
      ++line;
      start = k + 1;
    }
  }
  column = stop - start + 1;
  std::size_t end = text.find('\n', start);
  if (end == std::string::npos) end = text.size();
  return text.substr(start, end - start);
}

double parse_real(const std::string& s, const std::string& whole, bool unit_sign = false) {
  if (unit_sign && (s.empty() || s == "+")) return 1.0;
  if (unit_sign && s == "-") return -1.0;
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(x))
    throw ParseError("invalid complex number \"" + whole + "\"");
  return x;
}

}  // namespace

double stable_number(double x) {
  if (!std::isfinite(x)) return x;
  if (std::abs(x) < 1e-13) return 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

Json complex_to_json(Complex c) {
  return Json::array({stable_number(c.real()), stable_number(c.imag())});
}

Json vector_to_json(const ComplexVector& v) {
  Json j = Json::array();
  for (const Complex& c : v) j.push_back(complex_to_json(c));
  return j;
}

Json matrix_to_json(const ComplexMatrix& a) {
  Json j = Json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back(complex_to_json(a(r, c)));
    j.push_back(std::move(row));
  }
  return j;
}

Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 0;
    std::size_t column = 0;
    const std::string context = line_of(text, e.byte, line, column);
    std::string reason = e.what();
    if (auto col = reason.find("column"); col != std::string::npos) {
      if (auto colon = reason.find(": ", col); colon != std::string::npos)
        reason = reason.substr(colon + 2);
    }
    std::ostringstream os;
    os << source << ":" << line << ":" << column << ": " << reason << "\n  " << context << "\n  "
       << std::string(column > 0 ? column - 1 : 0, ' ') << "^";
    throw ParseError(os.str());
  }
}

CommutationRelation SystemDocument::relation() const {
  try {
    return CommutationRelation(m, n, u);
  } catch (const Error& e) {
    schema_error("$.u", e.what());
  }
}

std::map<Degree, ComplexMatrix> SystemDocument::listed_projections() const {
  std::map<Degree, ComplexMatrix> out;
  for (const auto& [d, vs] : fibers) {
    const std::size_t dim = fiber_dim(m, n, d);
    out.emplace(d, projection_onto_span(std::span<const ComplexVector>(vs), dim));
  }
  return out;
}

std::vector<ComplexVector> SystemDocument::vectors(Degree d) const {
  if (auto it = fibers.find(d); it != fibers.end()) return it->second;
  if (d.total() > 1 || d.i < 0 || d.j < 0) throw Error("fiber " + to_string(d) + " is not listed");
  const std::size_t dim = fiber_dim(m, n, d);
  std::vector<ComplexVector> out;
  const ComplexMatrix id = identity(dim);
  for (std::size_t k = 0; k < dim; ++k) out.push_back(id.col(static_cast<Eigen::Index>(k)));
  return out;
}

SystemDocument system_document_from_json(const Json& j) {
  SystemDocument doc;
  read_header(j, doc.schema_version, doc.m, doc.n, doc.truncation, doc.u, doc.metadata);
  const Json& fibers = require(j, "fibers", "$");
  if (!fibers.is_array()) schema_error("$.fibers", "expected an array");
  for (std::size_t k = 0; k < fibers.size(); ++k) {
    const std::string path = "$.fibers[" + std::to_string(k) + "]";
    const Json& f = fibers[k];
    if (!f.is_object()) schema_error(path, "expected an object");
    const Degree d{require_int(f, "i", path, 0), require_int(f, "j", path, 0)};
    if (d.total() > doc.truncation)
      schema_error(path, "degree " + to_string(d) + " exceeds D = " + std::to_string(doc.truncation));
    if (doc.fibers.contains(d)) schema_error(path, "duplicate " + degree_path(d));
    const Json& basis = require(f, "basis", path);
    if (!basis.is_array()) schema_error(path + ".basis", "expected an array of vectors");
    const std::size_t dim = fiber_dim(doc.m, doc.n, d);
    std::vector<ComplexVector> vs;
    for (std::size_t b = 0; b < basis.size(); ++b)
      vs.push_back(vector_from_json(basis[b], dim, path + ".basis[" + std::to_string(b) + "]"));
    doc.fibers.emplace(d, std::move(vs));
  }
  return doc;
}

SystemDocument parse_system_document(const std::string& text, const std::string& source) {
  return system_document_from_json(parse_json_text(text, source));
}

Json to_json(const SystemDocument& doc) {
  Json j = Json::object();
  write_header(j, doc.schema_version, doc.m, doc.n, doc.truncation, doc.u);
  Json fibers = Json::array();
  for (Degree d : degrees_up_to(doc.truncation)) {
    auto it = doc.fibers.find(d);
    if (it == doc.fibers.end()) continue;
    Json basis = Json::array();
    for (const ComplexVector& v : it->second) basis.push_back(vector_to_json(v));
    fibers.push_back(Json{{"i", d.i}, {"j", d.j}, {"basis", std::move(basis)}});
  }
  j["fibers"] = std::move(fibers);
  j["metadata"] = doc.metadata;
  return j;
}

namespace {

bool is_flat(const Json& j) {
  if (j.is_primitive()) return true;
  if (!j.is_array()) return false;
  return std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
}

bool is_inline(const Json& j) {
  if (j.is_primitive()) return true;
  if (j.is_object())
    return j.size() <= 6 &&
           std::all_of(j.begin(), j.end(), [](const Json& e) { return is_flat(e); });
  return std::all_of(j.begin(), j.end(), [](const Json& e) { return is_flat(e); });
}

void write_inline(const Json& j, std::string& out) {
  if (j.is_object()) {
    out += "{";
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it != j.begin()) out += ", ";
      out += Json(it.key()).dump() + ": ";
      write_inline(it.value(), out);
    }
    out += "}";
    return;
  }
  if (!j.is_array()) {
    out += j.dump();
    return;
  }
  out += "[";
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (k > 0) out += ", ";
    write_inline(j[k], out);
  }
  out += "]";
}

void write_pretty(const Json& j, int indent, std::string& out) {
  if (is_inline(j)) {
    write_inline(j, out);
    return;
  }
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  if (j.is_array()) {
    out += "[\n";
    for (std::size_t k = 0; k < j.size(); ++k) {
      out += pad;
      write_pretty(j[k], indent + 2, out);
      out += k + 1 < j.size() ? ",\n" : "\n";
    }
  } else {
    out += "{\n";
    std::size_t k = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++k) {
      out += pad + Json(it.key()).dump() + ": ";
      write_pretty(it.value(), indent + 2, out);
      out += k + 1 < j.size() ? ",\n" : "\n";
    }
  }
  out += std::string(static_cast<std::size_t>(indent), ' ') + (j.is_array() ? "]" : "}");
}

}  // namespace

std::string serialize(const Json& j) {
  std::string out;
  write_pretty(j, 0, out);
  return out + "\n";
}

SubproductSystem system_from_document(const SystemDocument& doc) {
  const CommutationRelation cr = doc.relation();
  std::map<Degree, ComplexMatrix> proj = doc.listed_projections();
  for (Degree d : degrees_up_to(doc.truncation)) {
    if (proj.contains(d)) continue;
    if (d.total() > 1)
      schema_error("$.fibers", "missing " + degree_path(d) + " inside the staircase i + j <= " +
                                   std::to_string(doc.truncation));
    proj.emplace(d, identity(fiber_dim(doc.m, doc.n, d)));
  }
  return SubproductSystem(cr, doc.truncation, std::move(proj));
}

SystemDocument document_from_system(const SubproductSystem& sps, Json metadata) {
  SystemDocument doc;
  doc.m = sps.m();
  doc.n = sps.n();
  doc.truncation = sps.truncation();
  doc.u = sps.relation().matrix();
  doc.metadata = std::move(metadata);
  for (Degree d : degrees_up_to(sps.truncation())) {
    const ComplexMatrix b = sps.fiber_basis(d);
    std::vector<ComplexVector> vs;
    for (Eigen::Index c = 0; c < b.cols(); ++c) vs.push_back(b.col(c));
    doc.fibers.emplace(d, std::move(vs));
  }
  return doc;
}

Json ncpoly_to_json(const NCPolynomial& p) {
  Json j = Json::array();
  for (const auto& [word, c] : p.terms())
    j.push_back(Json{{"word", word_to_string(word)}, {"coeff", complex_to_json(c)}});
  return j;
}

NCPolynomial ncpoly_from_json(const Json& j, int m, int n, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array of {word, coeff} terms");
  NCPolynomial p;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string tp = path + "[" + std::to_string(k) + "]";
    const Json& t = j[k];
    if (!t.is_object()) schema_error(tp, "expected an object");
    const Json& w = require(t, "word", tp);
    if (!w.is_string()) schema_error(tp + ".word", "expected a string");
    Word word;
    try {
      word = parse_word(w.get<std::string>(), m, n);
    } catch (const Error& e) {
      schema_error(tp + ".word", e.what());
    }
    p.add_term(word, complex_from_json(require(t, "coeff", tp), tp + ".coeff"));
  }
  return p;
}

IdealDocument parse_ideal_document(const std::string& text, const std::string& source) {
  const Json j = parse_json_text(text, source);
  IdealDocument doc;
  read_header(j, doc.schema_version, doc.m, doc.n, doc.truncation, doc.u, doc.metadata);
  const Json& gens = require(j, "generators", "$");
  if (!gens.is_array()) schema_error("$.generators", "expected an array of polynomials");
  for (std::size_t k = 0; k < gens.size(); ++k)
    doc.generators.push_back(
        ncpoly_from_json(gens[k], doc.m, doc.n, "$.generators[" + std::to_string(k) + "]"));
  return doc;
}

Json to_json(const IdealDocument& doc) {
  Json j = Json::object();
  write_header(j, doc.schema_version, doc.m, doc.n, doc.truncation, doc.u);
  Json gens = Json::array();
  for (const NCPolynomial& p : doc.generators) gens.push_back(ncpoly_to_json(p));
  j["generators"] = std::move(gens);
  j["metadata"] = doc.metadata;
  return j;
}

Complex parse_complex(const std::string& raw) {
  std::string s;
  for (char ch : raw)
    if (ch != ' ') s += ch;
  if (s.empty()) throw ParseError("empty complex number");
  if (s.back() != 'i') return {parse_real(s, raw), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) return {0.0, parse_real(body, raw, true)};
  return {parse_real(body.substr(0, split), raw), parse_real(body.substr(split), raw, true)};
}

ComplexVector parse_complex_list(const std::string& s) {
  std::vector<Complex> values;
  if (!s.empty()) {
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = s.find(',', start);
      values.push_back(parse_complex(s.substr(start, comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  ComplexVector v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t k = 0; k < values.size(); ++k) v(static_cast<Eigen::Index>(k)) = values[k];
  return v;
}

}  // namespace spsys
