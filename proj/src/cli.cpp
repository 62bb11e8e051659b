#include "spsys/cli.hpp"

#include "spsys/expr.hpp"
#include "spsys/fock.hpp"
#include "spsys/invariants.hpp"
#include "spsys/io.hpp"
#include "spsys/ncpoly.hpp"
#include "spsys/subproduct.hpp"
#include "spsys/variety.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>

namespace spsys {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

/// A domain refutation that still produces a report.
class Refutation : public Error {
 public:
  Refutation(const std::string& what, Json findings) : Error(what), findings(std::move(findings)) {}
  Json findings;
};

struct Tolerances {
  double rank = kDefaultRankTol;
  double member = kDefaultMemberTol;
  double iso = 1e-6;
};

struct Input {
  std::string name;
  std::string text;
};

struct Outcome {
  Json findings = Json::object();
  int exit_code = kExitOk;
  std::string summary;
};

struct Context {
  std::istream& in;
  Tolerances tol;
  std::uint64_t seed = 0;
  bool stdin_used = false;
  std::vector<Input> inputs;

  const Input& read(const std::string& path) {
    Input input;
    if (path == "-") {
      if (stdin_used) throw UsageError("stdin (\"-\") can only be read once");
      stdin_used = true;
      std::ostringstream os;
      os << in.rdbuf();
      input = {"<stdin>", os.str()};
    } else {
      std::ifstream f(path, std::ios::binary);
      if (!f) throw UsageError("cannot read " + path);
      std::ostringstream os;
      os << f.rdbuf();
      input = {path, os.str()};
    }
    inputs.push_back(std::move(input));
    return inputs.back();
  }

  SystemDocument read_system(const std::string& path) {
    const Input& input = read(path);
    return parse_system_document(input.text, input.name);
  }
};

double num(double x) { return stable_number(x); }

Json degree_json(Degree d) { return Json::array({d.i, d.j}); }

Json profile_json(const SubproductSystem& sps) {
  Json out = Json::array();
  const auto profile = dimension_profile(sps);
  for (Degree d : degrees_up_to(sps.truncation()))
    out.push_back(Json{{"i", d.i}, {"j", d.j}, {"dim", profile.at(d)}});
  return out;
}

Json violations_json(const ValidationReport& report) {
  Json out = Json::array();
  for (const Violation& v : report.violations) {
    Json j{{"kind", to_string(v.kind)}, {"degree", degree_json(v.degree)}};
    if (v.kind == Violation::Kind::kLeftInequality || v.kind == Violation::Kind::kRightInequality)
      j["split"] = Json::array({degree_json(v.left), degree_json(v.right)});
    j["defect"] = num(v.defect);
    j["message"] = v.message;
    out.push_back(std::move(j));
  }
  return out;
}

SubproductSystem valid_system(const SystemDocument& doc, const Tolerances& tol) {
  SubproductSystem sps = system_from_document(doc);
  const ValidationReport report = validate(sps, tol.rank);
  if (!report.ok())
    throw Refutation("input system is invalid",
                     Json{{"valid", false}, {"violations", violations_json(report)}});
  return sps;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
  if (!f) throw UsageError("cannot write " + path);
}

/// Writes `doc` to `out_path` if given, otherwise embeds it under `key`.
void emit_document(Json& findings, const std::string& key, const Json& doc,
                   const std::string& out_path) {
  if (out_path.empty()) {
    findings[key] = doc;
  } else {
    write_file(out_path, serialize(doc));
    findings["output"] = out_path;
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t k = s.find(sep, start);
    out.push_back(s.substr(start, k - start));
    if (k == std::string::npos) break;
    start = k + 1;
  }
  return out;
}

int parse_int(const std::string& s, const std::string& what) {
  std::string t;
  for (char ch : s)
    if (ch != ' ') t += ch;
  if (t.empty() || t.size() > 6 || !std::all_of(t.begin(), t.end(), ::isdigit))
    throw UsageError("bad " + what + " \"" + s + "\"");
  return std::stoi(t);
}

StaircaseSet parse_staircase(const std::string& spec, const SystemDocument& doc) {
  StaircaseSet out;
  if (spec == "given" || spec == "axes") {
    for (const auto& [d, vs] : doc.fibers)
      if (spec == "given" || d.i == 0 || d.j == 0) out.insert(d);
    return out;
  }
  for (const std::string& item : split(spec, ';')) {
    const auto parts = split(item, ',');
    if (parts.size() != 2) throw UsageError("bad staircase entry \"" + item + "\"; expected i,j");
    const Degree d{parse_int(parts[0], "staircase degree"), parse_int(parts[1], "staircase degree")};
    if (d.total() > doc.truncation)
      throw UsageError("staircase degree " + to_string(d) + " exceeds D");
    if (!doc.fibers.contains(d) && d.total() > 1)
      throw UsageError("staircase degree " + to_string(d) + " is not listed in the document");
    out.insert(d);
  }
  return out;
}

PolyballPoint parse_point(const std::string& s, int m, int n) {
  const auto parts = split(s, ';');
  if (parts.size() != 2) throw UsageError("point must be \"z1,..,zm;w1,..,wn\"");
  PolyballPoint pt;
  try {
    pt.z = parse_complex_list(parts[0]);
    pt.w = parse_complex_list(parts[1]);
  } catch (const ParseError& e) {
    throw UsageError(std::string("point: ") + e.what());
  }
  if (pt.z.size() != m || pt.w.size() != n)
    throw UsageError("point needs " + std::to_string(m) + " z and " + std::to_string(n) +
                     " w coordinates");
  return pt;
}

FiberVectorLookup lookup_for(const SystemDocument& doc) {
  return [&doc](Degree d, int k) {
    const std::vector<ComplexVector> vs = doc.vectors(d);
    if (k < 1 || static_cast<std::size_t>(k) > vs.size())
      throw Error("fiber " + to_string(d) + " lists " + std::to_string(vs.size()) + " vectors");
    return vs[static_cast<std::size_t>(k - 1)];
  };
}

ExprNode parse_expr_flag(const std::string& s) {
  try {
    return parse_expression(s);
  } catch (const ParseError& e) {
    throw UsageError(e.what());
  }
}

Json strings_json(const std::vector<CommutativePolynomial>& ps) {
  Json out = Json::array();
  for (const auto& p : ps) out.push_back(p.to_string());
  return out;
}

Json k_x_json(const InvariantPair& inv) {
  return inv.k_x ? Json(*inv.k_x) : Json(inv.k_x_string());
}

// Commands.

Outcome cmd_validate(Context& ctx, const std::string& path) {
  const SystemDocument doc = ctx.read_system(path);
  const SubproductSystem sps = system_from_document(doc);
  const ValidationReport report = validate(sps, ctx.tol.rank);
  Outcome o;
  o.findings["valid"] = report.ok();
  o.findings["truncation"] = report.truncation;
  o.findings["violations"] = violations_json(report);
  o.exit_code = report.ok() ? kExitOk : kExitRefuted;
  o.summary = report.ok() ? "valid" : "invalid: " + std::to_string(report.violations.size()) +
                                          " violation(s), first: " +
                                          report.violations.front().message;
  return o;
}

Outcome cmd_complete(Context& ctx, const std::string& path, const std::string& staircase_spec,
                     const std::string& out_path) {
  const SystemDocument doc = ctx.read_system(path);
  const CommutationRelation cr = doc.relation();
  StaircaseSet staircase = parse_staircase(staircase_spec, doc);
  for (Degree d : {Degree{0, 0}, Degree{1, 0}, Degree{0, 1}})
    if (d.total() <= doc.truncation) staircase.insert(d);
  if (!is_downward_closed(staircase)) throw UsageError("staircase is not downward closed");

  std::map<Degree, ComplexMatrix> partial;
  const auto listed = doc.listed_projections();
  for (Degree d : staircase) {
    if (auto it = listed.find(d); it != listed.end()) partial.emplace(d, it->second);
    else partial.emplace(d, identity(fiber_dim(doc.m, doc.n, d)));
  }
  const ValidationReport pre = validate_partial(cr, partial, ctx.tol.rank);
  if (!pre.ok())
    throw Refutation("partial data on the staircase is invalid",
                     Json{{"valid", false}, {"violations", violations_json(pre)}});

  const SubproductSystem sps = maximal_completion(cr, partial, doc.truncation, ctx.tol.rank);
  const ValidationReport post = validate(sps, ctx.tol.rank);
  bool formula = true;
  Json completed = Json::array();
  for (Degree d : degrees_up_to(doc.truncation)) {
    if (staircase.contains(d)) continue;
    completed.push_back(degree_json(d));
    formula = formula && fiber_formula_check(sps, d, staircase, ctx.tol.rank);
  }
  Json stair = Json::array();
  for (Degree d : degrees_up_to(doc.truncation))
    if (staircase.contains(d)) stair.push_back(degree_json(d));

  Outcome o;
  o.findings["staircase"] = std::move(stair);
  o.findings["completed_degrees"] = std::move(completed);
  o.findings["revalidated"] = post.ok();
  o.findings["fiber_formula_holds"] = formula;
  o.findings["dimension_profile"] = profile_json(sps);
  // Fibers on the staircase are input data and are written back as given.
  SystemDocument result = document_from_system(sps, doc.metadata);
  for (Degree d : staircase)
    if (auto it = doc.fibers.find(d); it != doc.fibers.end()) result.fibers[d] = it->second;
  emit_document(o.findings, "system", to_json(result), out_path);
  o.exit_code = post.ok() && formula ? kExitOk : kExitRefuted;
  o.summary = "completed " + std::to_string(o.findings["completed_degrees"].size()) +
              " degree(s); revalidated: " + (post.ok() ? "yes" : "no");
  return o;
}

Outcome cmd_ideal(Context& ctx, const std::string& path, const std::string& direction,
                  const std::string& out_path) {
  Outcome o;
  o.findings["direction"] = direction;
  if (direction == "to-ideal") {
    const SystemDocument doc = ctx.read_system(path);
    const SubproductSystem sps = valid_system(doc, ctx.tol);
    IdealDocument ideal;
    ideal.m = doc.m;
    ideal.n = doc.n;
    ideal.truncation = doc.truncation;
    ideal.u = doc.u;
    ideal.metadata = doc.metadata;
    ideal.generators = subproduct_to_ideal(sps);
    o.findings["generator_count"] = ideal.generators.size();
    emit_document(o.findings, "ideal", to_json(ideal), out_path);
    o.summary = std::to_string(ideal.generators.size()) + " generator(s)";
    return o;
  }
  const Input& input = ctx.read(path);
  const IdealDocument ideal = parse_ideal_document(input.text, input.name);
  const CommutationRelation cr = [&] {
    try {
      return CommutationRelation(ideal.m, ideal.n, ideal.u);
    } catch (const Error& e) {
      throw ParseError(std::string("schema error at $.u: ") + e.what());
    }
  }();
  const IdealSystem result = [&] {
    try {
      return ideal_to_subproduct(ideal.generators, cr, ideal.truncation, ctx.tol.rank);
    } catch (const Error& e) {
      throw Refutation(e.what(), Json{{"error", e.what()}});
    }
  }();
  o.findings["commutation_generators_added"] = result.commutation_generators_added;
  o.findings["dimension_profile"] = profile_json(result.system);
  emit_document(o.findings, "system", to_json(document_from_system(result.system, ideal.metadata)),
                out_path);
  o.summary = "system with D = " + std::to_string(ideal.truncation) +
              (result.commutation_generators_added ? " (commutation generators added)" : "");
  return o;
}

Outcome cmd_invariants(Context& ctx, const std::string& path, const std::string& zeta_s,
                       int order, const std::string& expr_s) {
  const SystemDocument doc = ctx.read_system(path);
  const SubproductSystem sps = valid_system(doc, ctx.tol);
  const InvariantPair inv = compute_invariants(sps, ctx.tol.rank);
  const auto gens = variety_generators(sps, ctx.tol.rank);
  Outcome o;
  o.findings["m"] = inv.m;
  o.findings["n"] = inv.n;
  o.findings["dim_sum"] = inv.dim_sum;
  o.findings["k_x"] = k_x_json(inv);
  o.findings["truncation"] = inv.truncation;
  o.findings["good"] = is_good(gens);
  o.findings["variety_generators"] = strings_json(gens);
  o.findings["dimension_profile"] = profile_json(sps);
  o.summary = "(m_X + n_X, k_X) = (" + std::to_string(inv.dim_sum) + ", " + inv.k_x_string() + ")";
  if (expr_s.empty()) {
    if (!zeta_s.empty() || order >= 0) throw UsageError("--zeta and --order require --expr");
    return o;
  }
  if (zeta_s.empty()) throw UsageError("--expr requires --zeta");
  ComplexVector zeta;
  try {
    zeta = parse_complex_list(zeta_s);
  } catch (const ParseError& e) {
    throw UsageError(std::string("zeta: ") + e.what());
  }
  if (zeta.size() != inv.m + inv.n)
    throw UsageError("zeta needs m + n = " + std::to_string(inv.m + inv.n) + " entries");
  const int k = order >= 0 ? order : inv.k_x.value_or(inv.truncation + 1);
  const ExprNode expr = parse_expr_flag(expr_s);
  const NCPolynomial t = [&] {
    try {
      return evaluate_polynomial(expr, inv.m, inv.n, lookup_for(doc));
    } catch (const ParseError& e) {
      throw UsageError(e.what());
    }
  }();
  Json beta = Json::object();
  beta["expression"] = to_string(expr);
  beta["order"] = k;
  try {
    const TruncatedPolynomial b = beta_homomorphism(inv, zeta, k, t);
    Json coeffs = Json::array();
    for (const Complex& c : b.coefficients()) coeffs.push_back(complex_to_json(c));
    beta["coefficients"] = std::move(coeffs);
  } catch (const Error& e) {
    o.findings["beta"] = beta;
    throw Refutation(e.what(), o.findings);
  }
  o.findings["beta"] = std::move(beta);
  return o;
}

Outcome cmd_variety(Context& ctx, const std::string& path, const std::string& point_s,
                    int samples) {
  const SystemDocument doc = ctx.read_system(path);
  const SubproductSystem sps = valid_system(doc, ctx.tol);
  const auto gens = variety_generators(sps, ctx.tol.rank);
  Outcome o;
  o.findings["generators"] = strings_json(gens);
  o.findings["good"] = is_good(gens);
  o.summary = std::to_string(gens.size()) + " generator(s), good: " + (is_good(gens) ? "yes" : "no");
  if (!point_s.empty()) {
    const PolyballPoint pt = parse_point(point_s, doc.m, doc.n);
    Json values = Json::array();
    for (const auto& g : gens) values.push_back(num(std::abs(g.normalized().evaluate(pt.joined()))));
    const bool member = polyball_membership(pt, gens, ctx.tol.member);
    o.findings["point"] = Json{{"z", vector_to_json(pt.z)},
                               {"w", vector_to_json(pt.w)},
                               {"polyball_norm", num(polyball_norm(pt))},
                               {"in_variety", member},
                               {"in_c_set", in_c_set(pt, ctx.tol.member)},
                               {"generator_moduli", std::move(values)}};
    o.summary += "; point " + std::string(member ? "in" : "not in") + " the variety";
  }
  if (samples > 0) {
    std::mt19937_64 rng(ctx.seed);
    int member = 0;
    int cross = 0;
    int member_off_cross = 0;
    for (int s = 0; s < samples; ++s) {
      const PolyballPoint pt = sample_polyball(doc.m, doc.n, rng);
      const bool in_v = polyball_membership(pt, gens, ctx.tol.member);
      const bool in_c = in_c_set(pt, ctx.tol.member);
      member += in_v;
      cross += in_c;
      member_off_cross += in_v && !in_c;
    }
    const bool contained = c_set_contained(gens, doc.m, doc.n, samples, rng, ctx.tol.member);
    o.findings["sampling"] = Json{{"samples", samples},
                                  {"seed", ctx.seed},
                                  {"in_variety", member},
                                  {"in_c_set", cross},
                                  {"in_variety_outside_c_set", member_off_cross},
                                  {"c_set_contained", contained}};
    o.summary += "; " + std::to_string(member) + "/" + std::to_string(samples) +
                 " samples in the variety";
  }
  return o;
}

Outcome cmd_fourier(Context& ctx, const std::string& path, const std::string& expr_s, int cesaro) {
  const SystemDocument doc = ctx.read_system(path);
  const SubproductSystem sps = valid_system(doc, ctx.tol);
  const ExprNode expr = parse_expr_flag(expr_s);
  auto fock = std::make_shared<const TruncatedFock>(sps);
  const FockOperator t = evaluate_operator(expr, fock, lookup_for(doc));
  const double norm = operator_norm(t.matrix());
  const int top = sps.truncation();
  Json coeffs = Json::array();
  FockOperator sum = FockOperator::zero(fock);
  for (int i = -top; i <= top; ++i) {
    for (int j = -top; j <= top; ++j) {
      const FockOperator phi = fourier_coefficient(t, {i, j});
      sum = sum + phi;
      const double pn = operator_norm(phi.matrix());
      if (pn > ctx.tol.rank * std::max(1.0, norm))
        coeffs.push_back(Json{{"i", i}, {"j", j}, {"norm", num(pn)}});
    }
  }
  Outcome o;
  o.findings["expression"] = to_string(expr);
  o.findings["fock_dim"] = fock->total_dim();
  o.findings["operator_norm"] = num(norm);
  o.findings["coefficients"] = std::move(coeffs);
  o.findings["reconstruction_error"] = num(max_abs(sum.matrix() - t.matrix()));
  o.findings["vacuum_character"] = complex_to_json(vacuum_character(t));
  if (cesaro > 0) {
    const FockOperator c = cesaro_reconstruct(t, cesaro);
    o.findings["cesaro"] = Json{{"order", cesaro}, {"error", num(max_abs(c.matrix() - t.matrix()))}};
  }
  o.summary = std::to_string(o.findings["coefficients"].size()) + " nonzero Fourier coefficient(s)";
  return o;
}

Outcome cmd_fock_norms(Context& ctx, const std::string& path, const std::string& expr_s) {
  const SystemDocument doc = ctx.read_system(path);
  const SubproductSystem sps = valid_system(doc, ctx.tol);
  auto fock = std::make_shared<const TruncatedFock>(sps);
  Json rows = Json::array();
  double worst = 0.0;
  for (Degree d : degrees_up_to(sps.truncation())) {
    if (d.total() == 0) continue;
    const auto vs = doc.vectors(d);
    for (std::size_t k = 0; k < vs.size(); ++k) {
      const auto [op, vec] = op_norm_check(fock, d, vs[k]);
      const double rel = std::abs(op - vec) / std::max(vec, 1e-300);
      worst = std::max(worst, rel);
      rows.push_back(Json{{"i", d.i},
                          {"j", d.j},
                          {"k", k + 1},
                          {"operator_norm", num(op)},
                          {"vector_norm", num(vec)},
                          {"relative_error", num(rel)}});
    }
  }
  Outcome o;
  o.findings["fock_dim"] = fock->total_dim();
  o.findings["creation_norms"] = std::move(rows);
  o.findings["max_relative_error"] = num(worst);
  std::ostringstream summary;
  summary << "max relative |‖L_x‖ - ‖x‖| = " << std::setprecision(3) << worst;
  o.summary = summary.str();
  if (!expr_s.empty()) {
    const ExprNode expr = parse_expr_flag(expr_s);
    const FockOperator t = evaluate_operator(expr, fock, lookup_for(doc));
    o.findings["expression"] = Json{{"expression", to_string(expr)},
                                    {"operator_norm", num(operator_norm(t.matrix()))}};
  }
  return o;
}

Outcome cmd_iso(Context& ctx, const std::string& path_x, const std::string& path_y, int budget,
                int iterations) {
  const SystemDocument dx = ctx.read_system(path_x);
  const SystemDocument dy = ctx.read_system(path_y);
  if (dx.truncation != dy.truncation)
    throw UsageError("systems are truncated at different degrees (" +
                     std::to_string(dx.truncation) + " vs " + std::to_string(dy.truncation) +
                     "); comparison refused");
  const SubproductSystem x = valid_system(dx, ctx.tol);
  const SubproductSystem y = valid_system(dy, ctx.tol);
  IsoOptions options;
  options.tol = ctx.tol.iso;
  options.restarts = budget;
  options.iterations = iterations;
  options.seed = ctx.seed;
  const IsoResult r = iso_search(x, y, options);

  auto inv_json = [&](const SubproductSystem& s) {
    const InvariantPair inv = compute_invariants(s, ctx.tol.rank);
    return Json{{"dim_sum", inv.dim_sum}, {"k_x", k_x_json(inv)}};
  };
  Json branches = Json::array();
  for (const IsoBranch& b : r.branches) {
    Json j{{"pi", b.switched ? "switch" : "id"}, {"refuted", b.refuted}};
    j["mismatch"] = b.mismatch ? degree_json(*b.mismatch) : Json(nullptr);
    j["best_residual"] = b.best_residual ? Json(num(*b.best_residual)) : Json(nullptr);
    branches.push_back(std::move(j));
  }
  Outcome o;
  o.findings["outcome"] = to_string(r.outcome);
  o.findings["invariants"] = Json{{"x", inv_json(x)}, {"y", inv_json(y)}};
  o.findings["branches"] = std::move(branches);
  if (r.witness) {
    o.findings["witness"] = Json{{"pi", r.witness->switched ? "switch" : "id"},
                                 {"b", matrix_to_json(r.witness->b)},
                                 {"c", matrix_to_json(r.witness->c)},
                                 {"residual", num(r.witness->residual)}};
  } else {
    o.findings["witness"] = nullptr;
  }
  o.findings["search"] = Json{{"restarts", budget}, {"iterations", iterations}, {"seed", ctx.seed}};
  o.exit_code = r.outcome == IsoResult::Outcome::kRefuted ? kExitRefuted : kExitOk;
  o.summary = to_string(r.outcome);
  return o;
}

std::string digest(const std::vector<Input>& inputs) {
  std::string bytes;
  for (const Input& i : inputs) bytes += std::to_string(i.text.size()) + ":" + i.text;
  return sha256_hex(bytes);
}

Json report(const std::string& command, const Context& ctx, Json findings) {
  Json r = Json::object();
  r["command"] = command;
  r["inputs_digest"] = digest(ctx.inputs);
  r["findings"] = std::move(findings);
  r["tolerances"] = Json{{"rank", ctx.tol.rank}, {"member", ctx.tol.member}, {"iso", ctx.tol.iso}};
  return r;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 failed");
  std::ostringstream os;
  for (unsigned int k = 0; k < len; ++k)
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[k]);
  return os.str();
}

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Subproduct systems over N x N: validation, completion, ideals, Fock-space "
               "operators and isomorphism invariants.",
               "spsys"};
  app.require_subcommand(1);
  app.fallthrough();

  Context ctx{in, {}, 0, false, {}};
  app.add_option("--tol-rank", ctx.tol.rank, "relative singular-value cutoff for ranks")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--tol-member", ctx.tol.member, "absolute tolerance for variety membership")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--tol-iso", ctx.tol.iso, "residual accepted as an isomorphism witness")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", ctx.seed, "seed for sampling and search restarts")->capture_default_str();

  std::string path;
  std::string path_y;
  std::string out_path;
  std::string staircase = "given";
  std::string direction;
  std::string expr;
  std::string zeta;
  std::string point;
  int order = -1;
  int samples = 0;
  int cesaro = 0;
  int budget = 50;
  int iterations = 200;

  auto doc_arg = [&](CLI::App* sub) {
    sub->add_option("system", path, "system document (\"-\" for stdin)")->required();
  };

  auto* validate_cmd = app.add_subcommand("validate", "check a system document");
  doc_arg(validate_cmd);

  auto* complete_cmd = app.add_subcommand("complete", "maximal completion from a staircase");
  doc_arg(complete_cmd);
  complete_cmd
      ->add_option("--staircase", staircase,
                   "given | axes | \"i,j;i,j;...\": the degrees whose fibers are kept")
      ->capture_default_str();
  complete_cmd->add_option("--out", out_path, "write the completed document here");

  auto* ideal_cmd = app.add_subcommand("ideal", "convert between systems and ideals");
  ideal_cmd->add_option("document", path, "system or ideal document (\"-\" for stdin)")->required();
  ideal_cmd->add_option("--direction", direction, "to-ideal | to-system")
      ->required()
      ->check(CLI::IsMember({"to-ideal", "to-system"}));
  ideal_cmd->add_option("--out", out_path, "write the converted document here");

  auto* invariants_cmd = app.add_subcommand("invariants", "the pair (m_X + n_X, k_X)");
  doc_arg(invariants_cmd);
  invariants_cmd->add_option("--expr", expr, "expression to send through beta");
  invariants_cmd->add_option("--zeta", zeta, "zeta for beta: m + n complex numbers, comma separated");
  invariants_cmd->add_option("--order", order, "order k of C_k[t] (default k_X)")
      ->check(CLI::NonNegativeNumber);

  auto* variety_cmd = app.add_subcommand("variety", "character variety in the polyball");
  doc_arg(variety_cmd);
  variety_cmd->add_option("--point", point, "\"z1,..,zm;w1,..,wn\"");
  variety_cmd->add_option("--sample", samples, "number of uniform polyball samples")
      ->check(CLI::NonNegativeNumber);

  auto* fourier_cmd = app.add_subcommand("fourier", "Fourier coefficients of an operator");
  doc_arg(fourier_cmd);
  fourier_cmd->add_option("--expr", expr, "operator expression")->required();
  fourier_cmd->add_option("--cesaro", cesaro, "also report the Cesaro mean of this order")
      ->check(CLI::PositiveNumber);

  auto* norms_cmd = app.add_subcommand("fock-norms", "creation operator norms");
  doc_arg(norms_cmd);
  norms_cmd->add_option("--expr", expr, "also report the norm of this operator");

  auto* iso_cmd = app.add_subcommand("iso", "search for an isomorphism X -> Y");
  iso_cmd->add_option("x", path, "first system document")->required();
  iso_cmd->add_option("y", path_y, "second system document")->required();
  iso_cmd->add_option("--budget", budget, "number of restarts")->capture_default_str()->check(
      CLI::PositiveNumber);
  iso_cmd->add_option("--iterations", iterations, "iterations per restart")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  Outcome o;
  try {
    if (command == "validate") o = cmd_validate(ctx, path);
    else if (command == "complete") o = cmd_complete(ctx, path, staircase, out_path);
    else if (command == "ideal") o = cmd_ideal(ctx, path, direction, out_path);
    else if (command == "invariants") o = cmd_invariants(ctx, path, zeta, order, expr);
    else if (command == "variety") o = cmd_variety(ctx, path, point, samples);
    else if (command == "fourier") o = cmd_fourier(ctx, path, expr, cesaro);
    else if (command == "fock-norms") o = cmd_fock_norms(ctx, path, expr);
    else if (command == "iso") o = cmd_iso(ctx, path, path_y, budget, iterations);
  } catch (const UsageError& e) {
    err << "spsys " << command << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "spsys " << command << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const Refutation& e) {
    out << serialize(report(command, ctx, e.findings));
    err << "spsys " << command << ": " << e.what() << "\n";
    return kExitRefuted;
  } catch (const Error& e) {
    out << serialize(report(command, ctx, Json{{"error", e.what()}}));
    err << "spsys " << command << ": " << e.what() << "\n";
    return kExitRefuted;
  }
  out << serialize(report(command, ctx, std::move(o.findings)));
  err << "spsys " << command << ": " << o.summary << "\n";
  return o.exit_code;
}

}  // namespace spsys
