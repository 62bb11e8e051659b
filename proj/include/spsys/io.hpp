#pragma once

#include "spsys/ncpoly.hpp"
#include "spsys/subproduct.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace spsys {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Malformed input: JSON syntax (with line context) or schema violations
/// (with a path such as `fibers[2].basis[0]`).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// The on-disk form of a (possibly partial) standard subproduct system.
struct SystemDocument {
  int schema_version = kSchemaVersion;
  int m = 0;
  int n = 0;
  int truncation = 0;
  ComplexMatrix u;
  /// Spanning vectors of each listed fiber, in document order.
  std::map<Degree, std::vector<ComplexVector>> fibers;
  Json metadata = Json::object();

  CommutationRelation relation() const;
  /// Projection onto the span of the listed vectors of every listed degree.
  std::map<Degree, ComplexMatrix> listed_projections() const;
  /// The listed vectors of `d`, or the standard basis for an unlisted degree
  /// of total degree ≤ 1.
  std::vector<ComplexVector> vectors(Degree d) const;
};

/// Rounds to 12 significant digits and snaps |x| < 1e-13 to 0, so that
/// serialized output is stable under round trips.
double stable_number(double x);
Json complex_to_json(Complex c);
Json vector_to_json(const ComplexVector& v);
Json matrix_to_json(const ComplexMatrix& a);

/// Parses JSON text; syntax errors report line, column and the offending line.
Json parse_json_text(const std::string& text, const std::string& source);

SystemDocument parse_system_document(const std::string& text, const std::string& source = "input");
SystemDocument system_document_from_json(const Json& j);
Json to_json(const SystemDocument& doc);
/// Pretty-printed JSON with a trailing newline.
std::string serialize(const Json& j);

/// Every degree ≤ D must be listed except (0,0), (1,0), (0,1), which default
/// to the full space.
SubproductSystem system_from_document(const SystemDocument& doc);
/// A document listing an orthonormal basis of every fiber.
SystemDocument document_from_system(const SubproductSystem& sps, Json metadata = Json::object());

/// [{word, coeff: [re, im]}, ...] with words over z1..zm, w1..wn.
Json ncpoly_to_json(const NCPolynomial& p);
NCPolynomial ncpoly_from_json(const Json& j, int m, int n, const std::string& path = "polynomial");

/// A generating set of a homogeneous ideal together with the data of the
/// product system it lives over.
struct IdealDocument {
  int schema_version = kSchemaVersion;
  int m = 0;
  int n = 0;
  int truncation = 0;
  ComplexMatrix u;
  std::vector<NCPolynomial> generators;
  Json metadata = Json::object();
};

IdealDocument parse_ideal_document(const std::string& text, const std::string& source = "input");
Json to_json(const IdealDocument& doc);

/// A complex scalar in text form: "1.5", "-2i", "i", "0.5-0.25i", "1e-3+2e-1i".
Complex parse_complex(const std::string& s);
/// Comma-separated complex scalars.
ComplexVector parse_complex_list(const std::string& s);

}  // namespace spsys
