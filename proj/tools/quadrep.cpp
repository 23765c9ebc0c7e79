#include "quadrep/cli.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

using namespace quadrep;

namespace {

Json read_json(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw SchemaError(file + ": cannot open");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(file + ": $: " + e.what());
  }
}

Json primes_json(const std::vector<std::string>& v) {
  Json a = Json::array();
  for (auto& s : v) a.push_back(s);
  return a;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Representation questions for quadratic forms and lattice cosets"};
  app.require_subcommand(1);
  RunOptions opt;
  app.add_option("--seed", opt.seed, "seed for randomised search (default 0)");
  app.add_option("--jobs", opt.jobs, "worker threads")->check(CLI::PositiveNumber);

  std::string file, alpha, prime, v0, bound, dir;
  std::vector<std::string> T, off;
  bool primitive = false;
  long t_range = -1;

  auto decide = app.add_subcommand("decide", "solvability of q(x) = p(t) over Z or Q");
  decide->add_option("instance", file, "instance JSON")->required();
  decide->add_option("--t-range", t_range, "sweep |t| up to this bound");

  auto localrep = app.add_subcommand("localrep", "local representation at one prime");
  localrep->add_option("coset", file)->required();
  localrep->add_option("--prime", prime)->required();
  localrep->add_option("--alpha", alpha)->required();
  localrep->add_flag("--primitive", primitive);

  auto genus = app.add_subcommand("genus", "representation by the genus");
  genus->add_option("coset", file)->required();
  genus->add_option("--alpha", alpha)->required();
  auto off_opt = genus->add_option("--primitive-off", off, "demand primitivity outside these primes");

  auto spinor = app.add_subcommand("spinor-count", "number of proper spinor genera in the genus");
  spinor->add_option("coset", file)->required();

  auto classes = app.add_subcommand("classes", "class representatives of the genus");
  classes->add_option("coset", file)->required();
  classes->add_option("--walk-prime", prime);

  auto threshold = app.add_subcommand("threshold", "arithmetic isotropy threshold");
  threshold->add_option("coset", file)->required();
  threshold->add_option("--v0", v0)->required();
  threshold->add_option("--T", T);

  auto vlt = app.add_subcommand("verify-lt", "sweep large values with primitivity off T");
  vlt->add_option("coset", file)->required();
  vlt->add_option("--T", T)->required();
  vlt->add_option("--bound", bound)->required();

  auto corpus = app.add_subcommand("verify-corpus", "run the corpus and print a pass/fail table");
  corpus->add_option("dir", dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (corpus->parsed()) {
      size_t failed = verify_corpus(load_corpus(dir), opt, std::cout);
      return failed == 0 ? kExitOk : 1;
    }
    Json input = read_json(file);
    Json args = Json::object();
    std::string kind;
    if (decide->parsed()) {
      kind = "decide";
      if (t_range >= 0) args["t_range"] = t_range;
    } else if (localrep->parsed()) {
      kind = "localrep";
      args = {{"prime", prime}, {"alpha", alpha}, {"primitive", primitive}};
    } else if (genus->parsed()) {
      kind = "genus";
      args["alpha"] = alpha;
      if (off_opt->count() > 0) args["primitive_off"] = primes_json(off);
    } else if (spinor->parsed()) {
      kind = "spinor-count";
    } else if (classes->parsed()) {
      kind = "classes";
      if (!prime.empty()) args["walk_prime"] = prime;
    } else if (threshold->parsed()) {
      kind = "threshold";
      args = {{"v0", v0}, {"T", primes_json(T)}};
    } else {
      kind = "verify-lt";
      args = {{"T", primes_json(T)}, {"bound", bound}};
    }
    TaskResult r = run_task(kind, input, args, opt);
    (r.exit_code == kExitInput ? std::cerr : std::cout) << r.output.dump(2) << "\n";
    return r.exit_code;
  } catch (const SchemaError& e) {
    std::cerr << Json{{"error", "schema"}, {"message", e.what()}}.dump(2) << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", "input"}, {"message", e.what()}}.dump(2) << "\n";
    return kExitInput;
  }
}
