#pragma once

#include "quadrep/defrep.hpp"
#include "quadrep/solver.hpp"
#include "quadrep/spinor.hpp"

#include "json.hpp"

namespace quadrep {

using Json = nlohmann::ordered_json;

/// Malformed input; `what()` carries the JSON path.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Rational rational_from_json(const Json& j, const std::string& path);
Vec vec_from_json(const Json& j, const std::string& path);
Mat mat_from_json(const Json& j, const std::string& path);
Integer integer_from_json(const Json& j, const std::string& path);

Json to_json(const Rational& x);
Json to_json(const Vec& v);
Json to_json(const Mat& m);

/// {"gram": [[..]], "basis": [[..], ..] (rows are basis vectors, default Z^n), "u0": [..]}
LatticeCoset coset_from_json(const Json& j);
Json coset_to_json(const LatticeCoset& C);

/// {"gram": [[..]], "poly": [c0, c1, ..], "domain": "Z" | "Q"}
WatsonInstance watson_from_json(const Json& j);
Json watson_to_json(const WatsonInstance& W);

Json to_json(const LocalCertificate& c);
Json to_json(const RepDecision& d);
Json to_json(const SolverVerdict& v);
Json to_json(const SpinorCount& c);
Json to_json(const SpinorDecision& d);
Json to_json(const ClassSet& s);
Json to_json(const ArithisoData& a);
Json to_json(const LTReport& r);

}  // namespace quadrep
