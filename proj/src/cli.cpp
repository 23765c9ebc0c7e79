#include "quadrep/cli.hpp"

#include "quadrep/genusenum.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

namespace quadrep {

namespace {

int exit_for(Verdict v) {
  switch (v) {
    case Verdict::Yes: return kExitOk;
    case Verdict::No: return kExitNo;
    default: return kExitUnknown;
  }
}

Integer prime_arg(const Json& args, const char* key) {
  if (!args.contains(key)) throw SchemaError(std::string("$.args.") + key + ": missing");
  Integer p = integer_from_json(args.at(key), std::string("$.args.") + key);
  if (!is_prime(p)) throw SchemaError(std::string("$.args.") + key + ": expected a prime");
  return p;
}

Rational rational_arg(const Json& args, const char* key) {
  if (!args.contains(key)) throw SchemaError(std::string("$.args.") + key + ": missing");
  return rational_from_json(args.at(key), std::string("$.args.") + key);
}

std::set<Integer> prime_set_arg(const Json& args, const char* key) {
  std::set<Integer> out;
  if (!args.contains(key)) return out;
  const Json& a = args.at(key);
  std::string path = std::string("$.args.") + key;
  if (!a.is_array()) throw SchemaError(path + ": expected an array of primes");
  for (size_t i = 0; i < a.size(); ++i) {
    Integer p = integer_from_json(a[i], path + "[" + std::to_string(i) + "]");
    if (!is_prime(p)) throw SchemaError(path + "[" + std::to_string(i) + "]: expected a prime");
    out.insert(p);
  }
  return out;
}

Json primes_json(const std::set<Integer>& s) {
  Json a = Json::array();
  for (auto& p : s) a.push_back(p.get_str());
  return a;
}

SearchBudget budget_from(const Json& args, unsigned jobs) {
  SearchBudget b;
  b.t_range = args.value("t_range", b.t_range);
  b.nodes_per_t = args.value("nodes_per_t", b.nodes_per_t);
  b.box_cells = args.value("box_cells", b.box_cells);
  b.max_depth = args.value("max_depth", b.max_depth);
  b.prime_bound = args.value("prime_bound", b.prime_bound);
  b.jobs = std::max(1u, jobs);
  return b;
}

TaskResult dispatch(const std::string& kind, const Json& input, const Json& args, const RunOptions& opt) {
  if (kind == "decide") {
    WatsonInstance W = watson_from_json(input);
    SolverVerdict v = decide_watson(W, budget_from(args, opt.jobs));
    int code = kExitOk;
    if (v.status == SolverStatus::LocallyObstructed || v.status == SolverStatus::Unsolvable) code = kExitNo;
    if (v.status == SolverStatus::Unknown) code = v.budget_exhausted ? kExitBudget : kExitUnknown;
    return {to_json(v), code};
  }
  LatticeCoset C = coset_from_json(input);
  if (kind == "localrep") {
    RepDecision d = local_represents(C, prime_arg(args, "prime"), rational_arg(args, "alpha"),
                                     args.value("primitive", false));
    return {to_json(d), exit_for(d.verdict)};
  }
  Primitivity prim = args.contains("primitive_off") ? Primitivity::outside(prime_set_arg(args, "primitive_off"))
                                                    : Primitivity::none();
  if (kind == "genus") {
    RepDecision d = genus_represents(C, rational_arg(args, "alpha"), prim);
    return {to_json(d), exit_for(d.verdict)};
  }
  if (kind == "spn") {
    Rational alpha = rational_arg(args, "alpha");
    RepDecision g = genus_represents(C, alpha, prim);
    if (g.verdict != Verdict::Yes) return {to_json(g), exit_for(g.verdict)};
    SpinorDecision d = spn_represents(C, alpha, prim);
    return {to_json(d), exit_for(d.decision.verdict)};
  }
  if (kind == "spinor-count") {
    SpinorCount c = count_spinor_genera(C);
    return {to_json(c), c.count ? kExitOk : kExitUnknown};
  }
  if (kind == "classes") {
    std::optional<Integer> wp;
    if (args.contains("walk_prime")) wp = prime_arg(args, "walk_prime");
    if (!C.space().is_definite()) throw std::invalid_argument("classes: definite coset required");
    return {to_json(enumerate_genus_classes(C, wp)), kExitOk};
  }
  if (kind == "threshold") {
    Integer v0 = prime_arg(args, "v0");
    ArithisoData a = arithiso_threshold(C, v0, prime_set_arg(args, "T"));
    return {to_json(a), a.h ? kExitOk : kExitUnknown};
  }
  if (kind == "verify-lt") {
    std::set<Integer> T = prime_set_arg(args, "T");
    LTReport r = verify_lt(C, T, rational_arg(args, "bound"), args.value("nodes_per_alpha", 0L));
    Json j = to_json(r);
    j["T"] = primes_json(T);
    return {j, r.budget_exhausted ? kExitBudget : kExitOk};
  }
  throw SchemaError("$.kind: unknown task '" + kind + "'");
}

}  // namespace

TaskResult run_task(const std::string& kind, const Json& input, const Json& args, const RunOptions& opt) {
  auto fail = [](const std::string& type, const std::string& what, int code) {
    return TaskResult{Json{{"error", type}, {"message", what}}, code};
  };
  try {
    return dispatch(kind, input, args.is_null() ? Json::object() : args, opt);
  } catch (const SchemaError& e) {
    return fail("schema", e.what(), kExitInput);
  } catch (const BudgetError& e) {
    return fail("budget", e.what(), kExitBudget);
  } catch (const PrecisionError& e) {
    return fail("precision", e.what(), kExitBudget);
  } catch (const std::invalid_argument& e) {
    return fail("input", e.what(), kExitInput);
  } catch (const nlohmann::json::exception& e) {
    return fail("schema", e.what(), kExitInput);
  }
}

Json json_at(const Json& j, const std::string& path) {
  const Json* cur = &j;
  std::stringstream ss(path);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (cur->is_object() && cur->contains(part)) {
      cur = &cur->at(part);
    } else if (cur->is_array() && !part.empty() && std::all_of(part.begin(), part.end(), ::isdigit) &&
               std::stoul(part) < cur->size()) {
      cur = &(*cur)[std::stoul(part)];
    } else {
      return nullptr;
    }
  }
  return *cur;
}

std::vector<CorpusEntry> load_corpus(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<CorpusEntry> out;
  for (auto& f : files) {
    std::ifstream in(f);
    Json doc;
    try {
      doc = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(f.filename().string() + ": " + e.what());
    }
    if (!doc.is_array()) throw SchemaError(f.filename().string() + ": $: expected an array of entries");
    for (size_t i = 0; i < doc.size(); ++i) {
      const Json& e = doc[i];
      std::string path = f.filename().string() + ": $[" + std::to_string(i) + "]";
      for (const char* key : {"id", "kind", "input", "expected", "provenance"})
        if (!e.contains(key)) throw SchemaError(path + "." + key + ": missing");
      const Json& pv = e.at("provenance");
      std::string pk = pv.value("kind", "");
      if (pk != "derived" && pk != "trivial") throw SchemaError(path + ".provenance.kind: expected derived or trivial");
      if (pk == "derived" && pv.value("oracle", "").empty()) throw SchemaError(path + ".provenance.oracle: missing");
      out.push_back({e.at("id").get<std::string>(), e.at("kind").get<std::string>(), e.at("input"),
                     e.value("args", Json::object()), e.at("expected"), pv});
    }
  }
  return out;
}

size_t verify_corpus(const std::vector<CorpusEntry>& entries, const RunOptions& opt, std::ostream& out) {
  std::vector<std::string> lines(entries.size());
  std::vector<char> pass(entries.size(), 0);
  std::atomic<size_t> next{0};
  RunOptions inner = opt;
  inner.jobs = 1;
  auto worker = [&] {
    for (size_t i; (i = next++) < entries.size();) {
      const CorpusEntry& e = entries[i];
      TaskResult r = run_task(e.kind, e.input, e.args, inner);
      std::string mismatch;
      if (e.expected.contains("exit_code") && e.expected.at("exit_code") != r.exit_code)
        mismatch = "exit_code=" + std::to_string(r.exit_code);
      for (auto& [path, want] : e.expected.items()) {
        if (path == "exit_code" || !mismatch.empty()) continue;
        Json got = json_at(r.output, path);
        if (got != want) mismatch = path + "=" + got.dump();
      }
      pass[i] = mismatch.empty();
      std::ostringstream line;
      line << std::left << std::setw(34) << e.id << std::setw(14) << e.kind << (pass[i] ? "PASS" : "FAIL");
      if (!pass[i]) line << "  got " << mismatch;
      lines[i] = line.str();
    }
  };
  unsigned jobs = std::max(1u, opt.jobs);
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < jobs; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  out << "seed " << opt.seed << "\n";
  out << std::left << std::setw(34) << "id" << std::setw(14) << "kind" << "result\n";
  size_t failed = 0;
  for (size_t i = 0; i < lines.size(); ++i) {
    out << lines[i] << "\n";
    failed += !pass[i];
  }
  out << entries.size() - failed << " passed, " << failed << " failed\n";
  return failed;
}

}  // namespace quadrep
