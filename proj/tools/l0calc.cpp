// l0calc: command-line front end for the l0 library.
//
//   l0calc analyze --input phi.json
//   l0calc kappa --input phi.json [--verify cert.json]
//   l0calc kelley --input phi.json --order 0,1,2
//   l0calc christensen --input phi.json --epsilon 1/2
//   l0calc group --input script.l0
//   l0calc lift --input lift.json
//   l0calc generate random_cover 4 6 1/2 --seed 7
//   l0calc selftest --level 1
//
// Exit codes: 0 ok, 2 input, 3 precondition, 4 assertion, 5 verification.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "l0/l0.hpp"

namespace {

using namespace l0;

// Suites draw all randomness from this seed unless --seed is given.
constexpr Seed kSelfTestSeed = 20240601;

struct Options {
  std::string input;
  std::string output = "text";
  std::optional<Seed> seed;
  std::optional<std::string> epsilon;
  std::optional<int> max_n;
  std::optional<std::string> verify;
  std::optional<std::string> order;
  int level = 1;
  std::vector<std::string> generate_args;
};

std::string read_file(const std::string& path) {
  if (path.empty()) throw InputError("--input is required");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string digest(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << "fnv1a64:" << std::hex << h;
  return out.str();
}

bool structured(const Options& o) { return o.output == "structured"; }

SetFunc load_setfunc(const Options& o, const std::string& bytes) {
  SetFunc phi = setfunc_from_json(parse_json(bytes, o.input), o.input, nullptr, o.seed);
  const int n = phi.algebra()->size();
  if (o.max_n && n > *o.max_n) {
    throw CapacityError("input has " + std::to_string(n) + " atoms, above --max-n " + std::to_string(*o.max_n));
  }
  if (n > kMaxExhaustivePairAtoms && !o.seed) {
    throw InputError("algebras above " + std::to_string(kMaxExhaustivePairAtoms) +
                     " atoms use sampled checks and need --seed");
  }
  return phi;
}

Rational require_epsilon(const Options& o) {
  if (!o.epsilon) throw InputError("--epsilon is required");
  return parse_rational(*o.epsilon);
}

void emit(const Options& o, const Json& record, const std::string& text) {
  if (structured(o)) {
    std::cout << canonical(record);
  } else {
    std::cout << text;
  }
}

std::string flag(bool b) { return b ? "yes" : "no"; }

Json violation_json(const AlgebraPtr& alg, const Violation& v) {
  return Json{{"A", elem_to_json(alg, v.a)}, {"B", elem_to_json(alg, v.b)}, {"lhs", to_json(v.lhs)}, {"rhs", to_json(v.rhs)}};
}

// ---------------------------------------------------------------------------

int cmd_analyze(const Options& o) {
  const std::string bytes = read_file(o.input);
  SetFunc phi = load_setfunc(o, bytes);
  const auto& alg = phi.algebra();
  PropertyReport rep = classify(phi, o.seed);

  Json record{{"subcommand", "analyze"}, {"input_digest", digest(bytes)}, {"atoms", alg->atoms()}, {"kind", kind_name(phi.kind())}};
  Json flags{{"monotone", rep.monotone},   {"subadditive", rep.subadditive},
             {"submodular", rep.submodular}, {"additive", rep.additive},
             {"strictly_positive", rep.strictly_positive}, {"sampled", rep.sampled}};
  record["properties"] = flags;
  Json ce = Json::object();
  for (const auto& v : rep.counterexamples) ce[v.property] = violation_json(alg, v);
  record["counterexamples"] = ce;
  const std::string verdict = rep.is_measure() ? "measure" : rep.is_submeasure() ? "submeasure" : "not a submeasure";
  record["verdict"] = verdict;

  std::ostringstream text;
  text << "set function: " << kind_name(phi.kind()) << " on " << alg->size() << " atoms\n";
  text << "  monotone           " << flag(rep.monotone) << "\n";
  text << "  subadditive        " << flag(rep.subadditive) << "\n";
  text << "  submodular         " << flag(rep.submodular) << "\n";
  text << "  additive           " << flag(rep.additive) << "\n";
  text << "  strictly positive  " << flag(rep.strictly_positive) << "\n";
  if (rep.sampled) text << "  (pairs sampled with seed " << *o.seed << ")\n";
  for (const auto& v : rep.counterexamples) {
    text << "  " << v.property << " fails at A=" << Elem(alg, v.a).to_string() << " B=" << Elem(alg, v.b).to_string()
         << ": " << to_string(v.lhs) << " vs " << to_string(v.rhs) << "\n";
  }
  text << "verdict: " << verdict << "\n";

  if (rep.monotone && alg->size() <= kMaxPartitionAtoms) {
    Diffuseness d = diffuseness(phi);
    TwoValuedDomination t = two_valued_domination(phi);
    record["diffuseness"] = to_json(d.value);
    record["two_valued_domination"] = to_json(t.value);
    text << "diffuseness: " << to_string(d.value) << "\n";
    text << "two-valued domination: " << to_string(t.value) << " (atom " << alg->atom(t.atom) << ")\n";
  } else {
    record["diffuseness"] = nullptr;
    record["two_valued_domination"] = nullptr;
  }
  if (rep.is_submeasure() && !rep.sampled && alg->size() <= kMaxLpAtoms && sgn(phi.top_value()) > 0) {
    Rational k = kappa(phi);
    record["kappa"] = to_json(k);
    text << "kappa: " << to_string(k) << "\n";
  } else {
    record["kappa"] = nullptr;
  }
  emit(o, record, text.str());
  return 0;
}

int cmd_kappa(const Options& o) {
  const std::string bytes = read_file(o.input);
  SetFunc phi = load_setfunc(o, bytes);
  if (o.verify) {
    DominationCertificate c = certificate_from_json(phi, read_json_file(*o.verify), *o.verify);
    std::string err = verify_certificate(phi, c);
    Json record{{"subcommand", "kappa"}, {"input_digest", digest(bytes)}, {"verified", err.empty()}};
    if (!err.empty()) record["reason"] = err;
    emit(o, record, err.empty() ? "certificate verified\n" : "certificate rejected: " + err + "\n");
    return err.empty() ? 0 : 5;
  }
  DominationCertificate c = max_dominated_measure(phi);
  const bool verified = verify_certificate(phi, c).empty();
  Json record = certificate_to_json(phi, c, verified);
  record["subcommand"] = "kappa";
  record["input_digest"] = digest(bytes);

  std::ostringstream text;
  const auto& alg = phi.algebra();
  text << "M = " << to_string(c.value) << "\n";
  if (sgn(phi.top_value()) > 0) text << "kappa = " << to_string(c.value / phi.top_value()) << "\n";
  text << "primal:";
  for (int i = 0; i < alg->size(); ++i) text << " " << alg->atom(i) << "=" << to_string(c.primal[static_cast<std::size_t>(i)]);
  text << "\ndual:\n";
  for (const auto& d : c.dual) text << "  y" << Elem(alg, d.set).to_string() << " = " << to_string(d.weight) << "\n";
  text << "verified: " << (verified ? "true" : "false") << "\n";
  emit(o, record, text.str());
  return verified ? 0 : 5;
}

std::vector<int> parse_order(const AlgebraPtr& alg, const std::string& text) {
  std::vector<int> order;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) throw InputError("--order has an empty entry");
    order.push_back(alg->atom_index(item));
  }
  return order;
}

int cmd_kelley(const Options& o) {
  const std::string bytes = read_file(o.input);
  SetFunc phi = load_setfunc(o, bytes);
  const auto& alg = phi.algebra();
  if (o.verify) {
    KelleyMeasure k = kelley_from_json(phi, read_json_file(*o.verify), *o.verify);
    std::string err = verify_kelley(phi, k);
    Json record{{"subcommand", "kelley"}, {"input_digest", digest(bytes)}, {"verified", err.empty()}};
    if (!err.empty()) record["reason"] = err;
    emit(o, record, err.empty() ? "greedy measure verified\n" : "greedy measure rejected: " + err + "\n");
    return err.empty() ? 0 : 5;
  }
  std::vector<int> order = o.order ? parse_order(alg, *o.order) : identity_order(alg->size());
  KelleyMeasure k = kelley_greedy(phi, order);
  const bool verified = verify_kelley(phi, k).empty();
  Json record = kelley_to_json(phi, k, verified);
  record["subcommand"] = "kelley";
  record["input_digest"] = digest(bytes);
  std::ostringstream text;
  text << "order:";
  for (int i : order) text << " " << alg->atom(i);
  text << "\nnu:";
  for (int i = 0; i < alg->size(); ++i) text << " " << alg->atom(i) << "=" << to_string(k.weights[static_cast<std::size_t>(i)]);
  text << "\nverified: " << (verified ? "true" : "false") << "\n";
  emit(o, record, text.str());
  return verified ? 0 : 5;
}

int cmd_christensen(const Options& o) {
  const std::string bytes = read_file(o.input);
  SetFunc phi = load_setfunc(o, bytes);
  if (o.verify) {
    Json cert = read_json_file(*o.verify);
    const Json& w = cert.contains("witness") ? cert["witness"] : cert;
    if (w.is_null()) throw InputError(*o.verify + ": record holds no witness to verify");
    ChristensenWitness wit = witness_from_json(phi, w, *o.verify);
    std::string err = verify_witness(phi, wit);
    if (err.empty()) witness_mass_bound(phi, wit);
    Json record{{"subcommand", "christensen"}, {"input_digest", digest(bytes)}, {"verified", err.empty()}};
    if (!err.empty()) record["reason"] = err;
    emit(o, record, err.empty() ? "witness verified\n" : "witness rejected: " + err + "\n");
    return err.empty() ? 0 : 5;
  }
  const Rational eps = require_epsilon(o);
  auto w = christensen_witness(phi, eps);
  Json record{{"subcommand", "christensen"}, {"input_digest", digest(bytes)}, {"epsilon", to_json(eps)}};
  std::ostringstream text;
  text << "epsilon = " << to_string(eps) << "\n";
  if (!w) {
    record["witness"] = nullptr;
    record["verified"] = true;
    text << "no witness\n";
  } else {
    MassBound b = witness_mass_bound(phi, *w);
    record["witness"] = witness_to_json(phi, *w);
    record["mass_bound"] = Json{{"M", to_json(b.mass)}, {"bound", to_json(b.bound)}};
    record["verified"] = true;
    const auto& alg = phi.algebra();
    text << "m = " << w->m.get_str() << ", min coverage = " << w->min_coverage.get_str() << "\n";
    for (const auto& [s, mult] : w->sets) text << "  " << Elem(alg, s).to_string() << " x" << mult.get_str() << "\n";
    text << "M = " << to_string(b.mass) << " <= " << to_string(b.bound) << "\n";
  }
  emit(o, record, text.str());
  return 0;
}

int cmd_group(const Options& o) {
  const std::string script = read_file(o.input);
  std::ostringstream transcript;
  ScriptRunner runner(transcript);
  int asserts = 0;
  try {
    asserts = runner.run(script);
  } catch (...) {
    std::cout << transcript.str();
    throw;
  }
  if (structured(o)) {
    Json lines = Json::array();
    std::istringstream in(transcript.str());
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    std::cout << canonical(Json{{"subcommand", "group"}, {"input_digest", digest(script)},
                                {"transcript", lines}, {"assertions", asserts}});
  } else {
    std::cout << transcript.str() << asserts << " assertion(s) passed\n";
  }
  return 0;
}

int cmd_lift(const Options& o) {
  const std::string bytes = read_file(o.input);
  Json j = parse_json(bytes, o.input);
  AlgebraPtr alg = algebra_from_json(j, o.input);
  GroupPtr G = group_from_json(field(j, "group", o.input), o.input + ".group");
  const Json& fv = field(j, "f", o.input);
  if (!fv.is_array()) throw InputError(o.input + ".f: expected an array of values, one per element");
  std::vector<Complex> values;
  for (std::size_t i = 0; i < fv.size(); ++i) {
    try {
      values.push_back(parse_complex(as_string(fv[i], o.input + ".f")));
    } catch (const InputError& e) {
      throw InputError(o.input + ".f[" + std::to_string(i) + "]: " + e.what());
    }
  }
  PosTypeFn f(G, values);
  SetFunc mu = setfunc_from_json(field(j, "mu", o.input), o.input + ".mu", alg);
  PUFunc a = pufunc_from_json(field(j, "a", o.input), alg, o.input + ".a", G);
  Complex v = pos_type_lift(f, mu, a);
  Json record{{"subcommand", "lift"}, {"input_digest", digest(bytes)}, {"value", to_string(v)},
              {"f_e", to_string(f(G->identity()))}, {"verified", true}};
  emit(o, record, "f'(a) = " + to_string(v) + "\nverified: true\n");
  return 0;
}

int cmd_generate(const Options& o) {
  const auto& a = o.generate_args;
  if (a.empty()) throw InputError("generate needs a kind");
  auto integer = [&](std::size_t i, const char* what) {
    if (i >= a.size()) throw InputError(std::string("generate ") + a[0] + ": missing " + what);
    Rational r = parse_rational(a[i]);
    if (r.get_den() != 1 || !r.get_num().fits_sint_p()) throw InputError(std::string(what) + " must be an integer");
    return static_cast<int>(r.get_num().get_si());
  };
  auto arity = [&](std::size_t n) {
    if (a.size() != n) throw InputError("generate " + a[0] + " takes " + std::to_string(n - 1) + " parameter(s)");
  };
  const std::string& kind = a[0];
  std::optional<SetFunc> phi;
  if (kind == "copoints") {
    arity(2);
    phi = generate_copoints(integer(1, "N"));
  } else if (kind == "ell_subsets_cover") {
    arity(3);
    phi = generate_ell_subsets_cover(integer(1, "N"), integer(2, "ell"));
  } else if (kind == "random_cover") {
    arity(4);
    if (!o.seed) throw InputError("random_cover needs --seed");
    phi = generate_random_cover(integer(1, "N"), integer(2, "m"), parse_rational(a[3]), *o.seed);
  } else if (kind == "concave_cardinality") {
    arity(3);
    std::vector<Rational> f;
    std::stringstream ss(a[2]);
    for (std::string item; std::getline(ss, item, ',');) f.push_back(parse_rational(item));
    phi = generate_concave_cardinality(integer(1, "N"), f);
  } else {
    throw InputError("unknown generator '" + kind + "' (copoints, ell_subsets_cover, random_cover, concave_cardinality)");
  }
  if (o.max_n && phi->algebra()->size() > *o.max_n) throw CapacityError("generated instance exceeds --max-n");
  std::cout << canonical(setfunc_to_json(*phi));
  return 0;
}

int cmd_selftest(const Options& o) {
  if (o.level != 1 && o.level != 2) throw InputError("--level must be 1 or 2");
  return run_selftest(o.level, o.seed.value_or(kSelfTestSeed), std::cout) == 0 ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact submeasure and L0-group calculator"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  std::string seed_text, max_n_text, epsilon_text, verify_text, order_text;
  app.add_option("--input", o.input, "input record or script");
  app.add_option("--output", o.output, "text or structured")->check(CLI::IsMember({"text", "structured"}));
  auto* seed_opt = app.add_option("--seed", seed_text, "64-bit seed for sampled checks");
  auto* eps_opt = app.add_option("--epsilon", epsilon_text, "exact rational such as 1/3");
  auto* max_opt = app.add_option("--max-n", max_n_text, "cap on atom count");
  auto* verify_opt = app.add_option("--verify", verify_text, "replay a previously emitted certificate");
  auto* order_opt = app.add_option("--order", order_text, "comma-separated atom order for kelley");

  auto* analyze = app.add_subcommand("analyze", "classify a set function");
  auto* kappa_cmd = app.add_subcommand("kappa", "maximal dominated measure with LP certificate");
  auto* kelley = app.add_subcommand("kelley", "greedy measure for a submodular function");
  auto* christensen = app.add_subcommand("christensen", "covering witness at tolerance epsilon");
  auto* group = app.add_subcommand("group", "run a labeled-partition script");
  auto* lift = app.add_subcommand("lift", "lift a positive-type function");
  auto* generate = app.add_subcommand("generate", "emit a benchmark set function");
  generate->add_option("args", o.generate_args, "kind and parameters")->expected(-1);
  auto* selftest = app.add_subcommand("selftest", "run the built-in invariant suites");
  selftest->add_option("--level", o.level, "1 exhaustive smalls, 2 adds seeded volume");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*seed_opt) {
      Rational s = parse_rational(seed_text);
      if (s.get_den() != 1 || sgn(s) < 0 || !mpz_fits_ulong_p(s.get_num_mpz_t())) {
        throw InputError("--seed must be an unsigned 64-bit integer");
      }
      o.seed = static_cast<Seed>(s.get_num().get_ui());
    }
    if (*eps_opt) o.epsilon = epsilon_text;
    if (*verify_opt) o.verify = verify_text;
    if (*order_opt) o.order = order_text;
    if (*max_opt) {
      Rational m = parse_rational(max_n_text);
      if (m.get_den() != 1 || sgn(m) <= 0 || m > kMaxAtoms) {
        throw InputError("--max-n must be an integer in [1, " + std::to_string(kMaxAtoms) + "]");
      }
      o.max_n = static_cast<int>(m.get_num().get_si());
    }
    if (*analyze) return cmd_analyze(o);
    if (*kappa_cmd) return cmd_kappa(o);
    if (*kelley) return cmd_kelley(o);
    if (*christensen) return cmd_christensen(o);
    if (*group) return cmd_group(o);
    if (*lift) return cmd_lift(o);
    if (*generate) return cmd_generate(o);
    if (*selftest) return cmd_selftest(o);
  } catch (const l0::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 5;
  }
  return 2;
}
