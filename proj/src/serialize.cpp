#include "quadrep/serialize.hpp"

namespace quadrep {

Rational rational_from_json(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(Integer(j.dump()));
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw SchemaError(path + ": expected a rational (integer or \"a/b\" string)");
}

Integer integer_from_json(const Json& j, const std::string& path) {
  Rational r = rational_from_json(j, path);
  if (r.get_den() != 1) throw SchemaError(path + ": expected an integer");
  return r.get_num();
}

Vec vec_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path + ": expected an array");
  Vec v;
  for (size_t i = 0; i < j.size(); ++i) v.push_back(rational_from_json(j[i], path + "[" + std::to_string(i) + "]"));
  return v;
}

Mat mat_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw SchemaError(path + ": expected a nonempty array of rows");
  Mat m;
  for (size_t i = 0; i < j.size(); ++i) {
    m.push_back(vec_from_json(j[i], path + "[" + std::to_string(i) + "]"));
    if (m.back().size() != m.front().size()) throw SchemaError(path + "[" + std::to_string(i) + "]: ragged row");
  }
  return m;
}

Json to_json(const Rational& x) { return rational_to_string(x); }

Json to_json(const Vec& v) {
  Json a = Json::array();
  for (auto& x : v) a.push_back(to_json(x));
  return a;
}

Json to_json(const Mat& m) {
  Json a = Json::array();
  for (auto& r : m) a.push_back(to_json(r));
  return a;
}

namespace {

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path + ": expected an object");
  if (!j.contains(key)) throw SchemaError(path + "." + key + ": missing");
  return j.at(key);
}

Mat square_gram(const Json& j, const std::string& path) {
  Mat g = mat_from_json(j, path);
  if (g.size() != g[0].size()) throw SchemaError(path + ": Gram matrix must be square");
  for (size_t i = 0; i < g.size(); ++i)
    for (size_t k = 0; k < i; ++k)
      if (g[i][k] != g[k][i]) throw SchemaError(path + ": Gram matrix must be symmetric");
  if (det(g) == 0) throw SchemaError(path + ": Gram matrix must be nondegenerate");
  return g;
}

}  // namespace

LatticeCoset coset_from_json(const Json& j) {
  Mat g = square_gram(field(j, "gram", "$"), "$.gram");
  size_t n = g.size();
  QuadSpace V(g);
  Mat basis = identity(n);
  if (j.contains("basis")) {
    Mat rows = mat_from_json(j.at("basis"), "$.basis");
    if (rows.size() != n || rows[0].size() != n) throw SchemaError("$.basis: expected n vectors of length n");
    if (det(rows) == 0) throw SchemaError("$.basis: vectors are dependent");
    basis = transpose(rows);
  }
  Vec u0(n, 0);
  if (j.contains("u0")) {
    u0 = vec_from_json(j.at("u0"), "$.u0");
    if (u0.size() != n) throw SchemaError("$.u0: length must match the Gram matrix");
  }
  return LatticeCoset(Lattice(V, basis), u0);
}

Json coset_to_json(const LatticeCoset& C) {
  Json j;
  j["gram"] = to_json(C.space().gram());
  j["basis"] = to_json(transpose(C.lattice().basis()));
  j["u0"] = to_json(C.u0());
  return j;
}

WatsonInstance watson_from_json(const Json& j) {
  WatsonInstance W;
  Mat g = square_gram(field(j, "gram", "$"), "$.gram");
  if (!is_integral(g)) throw SchemaError("$.gram: entries must be integers");
  if (g.size() < 3) throw SchemaError("$.gram: n >= 3 required");
  W.form = QuadSpace(g);
  W.poly = Polynomial(vec_from_json(field(j, "poly", "$"), "$.poly"));
  W.poly.normalize();
  if (W.poly.is_zero()) throw SchemaError("$.poly: polynomial must be nonzero");
  std::string dom = j.value("domain", "Z");
  if (dom == "Z") W.domain = Domain::Integers;
  else if (dom == "Q") W.domain = Domain::Rationals;
  else throw SchemaError("$.domain: expected \"Z\" or \"Q\"");
  return W;
}

Json watson_to_json(const WatsonInstance& W) {
  Json j;
  j["gram"] = to_json(W.form.gram());
  j["poly"] = to_json(W.poly.c);
  j["domain"] = W.domain == Domain::Integers ? "Z" : "Q";
  return j;
}

Json to_json(const LocalCertificate& c) {
  Json j;
  j["place"] = c.place.is_real() ? Json("real") : Json(c.place.p.get_str());
  j["exponent"] = c.exponent;
  if (!c.place.is_real()) j["modulus"] = ipow(c.place.p, static_cast<unsigned long>(c.exponent)).get_str();
  j["primitive"] = c.primitive;
  j["reason"] = c.reason;
  return j;
}

Json to_json(const RepDecision& d) {
  Json j;
  j["verdict"] = verdict_name(d.verdict);
  j["witness"] = d.witness ? to_json(*d.witness) : Json(nullptr);
  if (d.witness) j["witness_precision"] = d.witness_precision == kInfinity ? Json("exact") : Json(d.witness_precision);
  j["certificate"] = d.certificate ? to_json(*d.certificate) : Json(nullptr);
  j["reason"] = d.reason;
  return j;
}

Json to_json(const SolverVerdict& v) {
  Json j;
  j["status"] = status_name(v.status);
  if (v.witness) {
    Json w;
    w["x"] = to_json(v.witness->x);
    w["t"] = to_json(v.witness->t);
    j["witness"] = w;
  } else {
    j["witness"] = nullptr;
  }
  j["witness_pending"] = v.witness_pending;
  j["budget_exhausted"] = v.budget_exhausted;
  j["certificate"] = v.certificate ? to_json(*v.certificate) : Json(nullptr);
  j["reason"] = v.reason;
  return j;
}

Json to_json(const SpinorCount& c) {
  Json j;
  j["count"] = c.count ? Json(*c.count) : Json("unknown");
  j["upper_bound"] = c.upper_bound;
  j["reason"] = c.reason;
  return j;
}

Json to_json(const SpinorDecision& d) {
  Json j = to_json(d.decision);
  j["relative"] = d.relative == RelativeSpinor::Full ? "full" : d.relative == RelativeSpinor::IndexTwo ? "index_two" : "unknown";
  if (d.relative == RelativeSpinor::IndexTwo) j["kernel_field"] = to_json(d.kernel_field);
  Json chain = Json::array();
  for (auto& n : d.chain) chain.push_back({{"op", n.op}, {"inputs", n.inputs}, {"verdict", n.verdict}, {"note", n.note}});
  j["chain"] = chain;
  return j;
}

Json to_json(const ClassSet& s) {
  Json j;
  Json reps = Json::array();
  for (auto& r : s.representatives) reps.push_back(coset_to_json(r));
  j["class_count"] = s.representatives.size();
  j["representatives"] = reps;
  j["cell_count"] = s.spinor_partition.size();
  j["spinor_partition"] = s.spinor_partition;
  Json wp = Json::array();
  for (auto& p : s.walk_primes) wp.push_back(p.get_str());
  j["walk_primes"] = wp;
  return j;
}

Json to_json(const ArithisoData& a) {
  Json j;
  j["h"] = a.h ? Json(*a.h) : Json("unknown");
  j["reason"] = a.reason;
  j["v0"] = a.v0.get_str();
  j["h0"] = a.h0;
  j["h1"] = a.h1;
  j["t1"] = a.t1.get_str();
  j["cell_size"] = a.reps.size();
  j["l"] = a.l;
  return j;
}

Json to_json(const LTReport& r) {
  Json j;
  j["alpha_bound"] = to_json(r.alpha_bound);
  j["admissible"] = r.admissible_count;
  j["failures"] = to_json(r.failures);
  j["c_hat"] = to_json(r.c_hat);
  Json ws = Json::array();
  for (auto& [a, x] : r.witness_samples) ws.push_back({{"alpha", to_json(a)}, {"x", to_json(x)}});
  j["witness_samples"] = ws;
  j["budget_exhausted"] = r.budget_exhausted;
  return j;
}

}  // namespace quadrep
