// Command-line front end: one verb per library operation family, JSON in and
// out. Exit codes: 0 success, 1 definite negative or rejected precondition,
// 2 budget exhausted, 64 usage or malformed input.
#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>

#include "cstruct/error.hpp"
#include "cstruct/json_io.hpp"

#ifndef CSTRUCT_VERSION
#define CSTRUCT_VERSION "0.0.0"
#endif

using namespace cstruct;
namespace fs = std::filesystem;

namespace {

constexpr int kUsage = 64;

// Every flag of every verb; each subcommand binds the ones it uses.
struct Options {
  std::string out;
  std::string sig, s, m, n, p, q, phi, psi, pair, base, x, y;
  std::string relation, mode = "canonical";
  std::size_t arg = 0, rounds = 10, size_cap = 1, ext_m = 1, max_size = 0, budget = 0;
  bool partial = false;
  // action
  std::string a, b, gamma_on_m, lambda_on_n, inclusion, mu, tau, pi, kappa, ef, pq, gh, rs;
};

void write(const Options& o, const Json& j) {
  if (o.out.empty()) {
    std::cout << dump(j);
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw ParseError("cannot write '" + o.out + "'");
  f << dump(j);
}

Json read(const std::string& path) { return load_json(path); }
fs::path dir_of(const std::string& path) { return fs::path(path).parent_path(); }
FinStructure read_structure(const std::string& path) { return structure_from_json(read(path), dir_of(path)); }
PartialStructure read_partial(const std::string& path) { return partial_from_json(read(path), dir_of(path)); }
Action read_action(const std::string& path) { return action_from_json(read(path), dir_of(path)); }
ValuePair read_pair(const std::string& path) { return value_pair_from_json(read(path)); }
std::vector<Rational> delta_of(const std::string& pair) { return pair.empty() ? std::vector<Rational>{} : read_pair(pair).delta; }

using Handler = std::function<int()>;

CLI::Option* file(CLI::App* sub, const std::string& name, std::string& target, const std::string& help) {
  return sub->add_option(name, target, help)->required()->check(CLI::ExistingFile);
}

int classify_cmd(const Options& o) {
  SignaturePtr s = signature_from_json(read(o.sig));
  write(o, to_json(classify(*s), *s));
  return 0;
}

int validate_cmd(const Options& o) {
  if (o.partial) {
    auto problem = check_partial(read_partial(o.s));
    write(o, {{"valid", !problem}, {"violations", problem ? Json::array({*problem}) : Json::array()}});
    return problem ? 1 : 0;
  }
  FinStructure st = read_structure(o.s);
  auto vs = validate(st);
  write(o, {{"valid", vs.empty()}, {"violations", violations_to_json(st, vs)}});
  return vs.empty() ? 0 : 1;
}

int du_cmd(const Options& o, bool one_argument) {
  FinStructure st = read_structure(o.s);
  const Signature& sig = st.signature();
  Json all = Json::array();
  for (std::size_t r = 0; r < sig.size(); ++r) {
    if (!o.relation.empty() && sig[r].name != o.relation) continue;
    for (std::size_t i = 0; i < sig[r].arity; ++i) {
      if (one_argument && i != o.arg) continue;
      all.push_back({{"relation", sig[r].name},
                     {"argument", i},
                     {"du", to_json(induced_du(st.size(), st.dist_matrix(), sig.modulus(r, i)))}});
    }
  }
  if (!o.relation.empty() && all.empty()) throw ParseError("no such relation argument: " + o.relation);
  write(o, {{"points", st.points()}, {"matrices", all}});
  return 0;
}

int extend_cmd(const Options& o) {
  write(o, to_json(conservative_extension(read_partial(o.s))));
  return 0;
}

int amalgamate_cmd(const Options& o) {
  FinStructure m = read_structure(o.m), p = read_structure(o.p), q = read_structure(o.q);
  Embedding phi = embedding_from_json(read(o.phi), m, p), psi = embedding_from_json(read(o.psi), m, q);
  write(o, to_json(strong_amalgam(m, p, q, phi, psi, delta_of(o.pair)), p, q));
  return 0;
}

int jep_cmd(const Options& o) {
  FinStructure m = read_structure(o.m), n = read_structure(o.n);
  write(o, to_json(joint_embed(m, n, delta_of(o.pair)), m, n));
  return 0;
}

int fraisse_build_cmd(const Options& o) {
  SignaturePtr sig = signature_from_json(read(o.sig));
  ValuePair vp = read_pair(o.pair);
  LimitOptions lo;
  lo.size_cap = o.size_cap;
  if (o.mode == "saturating") lo.mode = Realization::Saturating;
  if (o.budget) lo.catalog_budget = o.budget;
  LimitApprox st(sig, vp, lo);
  std::size_t done = 0;
  while (done < o.rounds && st.step()) ++done;
  write(o, {{"structure", to_json(st.current())},
            {"rounds", done},
            {"pending", st.pending().size()},
            {"valued", is_valued(st.current(), vp)}});
  return 0;
}

int fraisse_check_cmd(const Options& o) {
  FinStructure s = read_structure(o.s);
  ValuePair vp = read_pair(o.pair);
  ExtensionReport r = o.budget ? check_extension_property(s, vp, o.ext_m, o.budget) : check_extension_property(s, vp, o.ext_m);
  write(o, to_json(r, s));
  return r.all_satisfied() ? 0 : 1;
}

int fraisse_pair_cmd(const Options& o) {
  FinStructure s = read_structure(o.s);
  ValuePair vp = value_pair_for(s);
  write(o, {{"pair", to_json(vp)}, {"good", is_good_value_pair(vp, s.signature())}});
  return 0;
}

int katetov_de_cmd(const Options& o) {
  FinStructure base = read_structure(o.base);
  OnePointExt x = one_point_ext_from(base, read_structure(o.x)), y = one_point_ext_from(base, read_structure(o.y));
  Json j = to_json(dE(x, y));
  j["equivalent"] = equivalent(x, y);
  write(o, j);
  return 0;
}

int katetov_amalgam_cmd(const Options& o) {
  FinStructure base = read_structure(o.base);
  OnePointExt x = one_point_ext_from(base, read_structure(o.x)), y = one_point_ext_from(base, read_structure(o.y));
  write(o, to_json(two_point_amalgam(x, y)));
  return 0;
}

int eppa_search_cmd(const Options& o) {
  FinStructure m = read_structure(o.m);
  ValuePair vp = read_pair(o.pair);
  std::size_t max_size = o.max_size ? o.max_size : m.size() + 1;
  EppaSearchResult r = o.budget ? eppa_bruteforce(m, vp, max_size, o.budget) : eppa_bruteforce(m, vp, max_size);
  write(o, to_json(r, m));
  switch (r.status) {
    case EppaSearchResult::Status::Found: return 0;
    case EppaSearchResult::Status::Exhausted: return 1;
    case EppaSearchResult::Status::BudgetExceeded: return 2;
  }
  return 2;
}

int eppa_reduce_cmd(const Options& o) {
  FinStructure m = read_structure(o.m);
  ClassicalReduction red = o.budget ? classical_reduction(m, o.budget) : classical_reduction(m);
  write(o, to_json(red));
  return 0;
}

int action_validate_cmd(const Options& o) {
  ActionReport r = validate_action(read_action(o.a));
  write(o, to_json(r));
  return r.ok() ? 0 : 1;
}

int action_extend_cmd(const Options& o) {
  Action gm = read_action(o.gamma_on_m), ln = read_action(o.lambda_on_n);
  // {"group_map": Lambda -> Gamma, "map": M -> N}
  Json inc = read(o.inclusion);
  std::vector<std::size_t> e = group_map_from_json(inc, ln.group, gm.group);
  Embedding f = embedding_from_json(inc, gm.structure, ln.structure);
  ActionExtension x = extend_action(gm, ln, e, f);
  write(o, {{"action", to_json(x.action)}, {"phi", embedding_to_json(x.phi, ln.structure, x.action.structure)}});
  return 0;
}

int action_jep_cmd(const Options& o) {
  Action a = read_action(o.a), b = read_action(o.b);
  ActionJointEmbedding j = joint_embed_actions(a, b, delta_of(o.pair));
  write(o, {{"action", to_json(j.action)},
            {"left", action_embedding_to_json(j.left, a, j.action)},
            {"right", action_embedding_to_json(j.right, b, j.action)},
            {"delta", to_json(j.delta)}});
  return 0;
}

int action_verify_cmd(const Options& o) {
  Action mu = read_action(o.mu), tau = read_action(o.tau), pi = read_action(o.pi), kappa = read_action(o.kappa);
  ActionReport r = verify_action_amalgam(mu, tau, pi, action_embedding_from_json(read(o.ef), mu, tau),
                                         action_embedding_from_json(read(o.pq), mu, pi), kappa,
                                         action_embedding_from_json(read(o.gh), tau, kappa),
                                         action_embedding_from_json(read(o.rs), pi, kappa));
  write(o, to_json(r));
  return r.ok() ? 0 : 1;
}

void error_json(const char* kind, const std::string& message) {
  std::cerr << dump(Json{{"error", {{"kind", kind}, {"message", message}}}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite continuous structures: classification, amalgamation, Katetov extensions, EPPA, actions"};
  app.set_version_flag("--version", CSTRUCT_VERSION);
  app.require_subcommand(1);
  app.fallthrough();  // --out may follow the verb
  Options o;
  app.add_option("--out", o.out, "Write the JSON result here instead of standard output");
  std::vector<std::pair<CLI::App*, Handler>> verbs;
  auto verb = [&](CLI::App* parent, const std::string& name, const std::string& help, Handler h) {
    CLI::App* sub = parent->add_subcommand(name, help);
    verbs.emplace_back(sub, std::move(h));
    return sub;
  };

  auto* c = verb(&app, "classify", "Classify a signature", [&] { return classify_cmd(o); });
  file(c, "--sig", o.sig, "Signature JSON");

  auto* v = verb(&app, "validate", "Validate a structure; exit 1 when invalid", [&] { return validate_cmd(o); });
  file(v, "--s", o.s, "Structure JSON");
  v->add_flag("--partial", o.partial, "Unlisted tuples are undefined; check the 1-Lipschitz condition");

  CLI::Option* arg_opt = nullptr;
  auto* du = verb(&app, "du", "Induced pseudo-metrics d_u", [&] { return du_cmd(o, arg_opt->count() > 0); });
  file(du, "--s", o.s, "Structure JSON");
  auto* rel_opt = du->add_option("--relation", o.relation, "Only this relation");
  arg_opt = du->add_option("--arg", o.arg, "Only this argument (0-based)")->needs(rel_opt);

  auto* ex = verb(&app, "extend", "Conservative extension of a partial structure", [&] { return extend_cmd(o); });
  file(ex, "--s", o.s, "Partial structure JSON");

  auto* am = verb(&app, "amalgamate", "Canonical strong amalgam", [&] { return amalgamate_cmd(o); });
  file(am, "--m", o.m, "Base structure");
  file(am, "--p", o.p, "First extension");
  file(am, "--q", o.q, "Second extension");
  file(am, "--phi", o.phi, "Embedding M -> P");
  file(am, "--psi", o.psi, "Embedding M -> Q");
  am->add_option("--pair", o.pair, "Value pair; cross distances are capped at max delta")->check(CLI::ExistingFile);

  auto* jep = verb(&app, "jep", "Joint embedding of two structures", [&] { return jep_cmd(o); });
  file(jep, "--m", o.m, "First structure");
  file(jep, "--n", o.n, "Second structure");
  jep->add_option("--pair", o.pair, "Value pair restricting the cross distance")->check(CLI::ExistingFile);

  auto* fr = app.add_subcommand("fraisse", "Fraisse limit approximation");
  fr->require_subcommand(1);
  auto* fb = verb(fr, "build", "Run the approximation for a number of rounds", [&] { return fraisse_build_cmd(o); });
  file(fb, "--sig", o.sig, "Signature JSON");
  file(fb, "--pair", o.pair, "Good value pair JSON");
  fb->add_option("--rounds", o.rounds, "Tasks to process")->capture_default_str();
  fb->add_option("--size-cap", o.size_cap, "Largest base of a task")->capture_default_str();
  fb->add_option("--mode", o.mode, "canonical or saturating")
      ->check(CLI::IsMember({"canonical", "saturating"}))
      ->capture_default_str();
  fb->add_option("--budget", o.budget, "Catalog budget per base");
  auto* fc = verb(fr, "check", "Extension property over small bases; exit 1 when a task is unmet",
                  [&] { return fraisse_check_cmd(o); });
  file(fc, "--s", o.s, "Structure JSON");
  file(fc, "--pair", o.pair, "Value pair JSON");
  fc->add_option("--m", o.ext_m, "Largest base size")->capture_default_str();
  fc->add_option("--budget", o.budget, "Catalog budget per base");
  auto* fp = verb(fr, "pair", "Good value pair generated by a structure", [&] { return fraisse_pair_cmd(o); });
  file(fp, "--s", o.s, "Structure JSON");

  auto* ka = app.add_subcommand("katetov", "One-point extensions");
  ka->require_subcommand(1);
  for (auto [name, help, fn] : {std::tuple{"de", "Distance dE between two one-point extensions", &katetov_de_cmd},
                                {"amalgam", "Two-point amalgam at distance dE", &katetov_amalgam_cmd}}) {
    auto* k = verb(ka, name, help, [&o, fn] { return fn(o); });
    file(k, "--base", o.base, "Base structure");
    file(k, "--x", o.x, "First extension (base points plus one)");
    file(k, "--y", o.y, "Second extension");
  }

  auto* ep = app.add_subcommand("eppa", "Coherent EPPA");
  ep->require_subcommand(1);
  auto* es = verb(ep, "search", "Brute-force witness search; exit 1 exhausted, 2 budget", [&] { return eppa_search_cmd(o); });
  file(es, "--m", o.m, "Structure JSON");
  file(es, "--pair", o.pair, "Value pair JSON");
  es->add_option("--max-size", o.max_size, "Largest candidate (default |M| + 1)");
  es->add_option("--budget", o.budget, "Candidate budget");
  auto* er = verb(ep, "reduce", "Classical signature, forbidden catalog and M*", [&] { return eppa_reduce_cmd(o); });
  file(er, "--m", o.m, "Structure JSON");
  er->add_option("--budget", o.budget, "Catalog budget");

  auto* ac = app.add_subcommand("action", "Finite group actions by automorphisms");
  ac->require_subcommand(1);
  auto* av = verb(ac, "validate", "Check an action; exit 1 on violations", [&] { return action_validate_cmd(o); });
  file(av, "--a", o.a, "Action JSON");
  auto* ae = verb(ac, "extend", "Coset-quotient extension of compatible actions", [&] { return action_extend_cmd(o); });
  file(ae, "--gamma-on-m", o.gamma_on_m, "Action of Gamma on M");
  file(ae, "--lambda-on-n", o.lambda_on_n, "Action of Lambda on N");
  file(ae, "--inclusion", o.inclusion, "{\"group_map\": Lambda -> Gamma, \"map\": M -> N}");
  auto* aj = verb(ac, "jep", "Joint embedding of two actions", [&] { return action_jep_cmd(o); });
  file(aj, "--a", o.a, "First action");
  file(aj, "--b", o.b, "Second action");
  aj->add_option("--pair", o.pair, "Value pair restricting the cross distance")->check(CLI::ExistingFile);
  auto* avf = verb(ac, "verify", "Commuting squares of an action amalgam; exit 1 on violations",
                   [&] { return action_verify_cmd(o); });
  for (auto [flag, target] : {std::pair{"--mu", &o.mu}, {"--tau", &o.tau}, {"--pi", &o.pi}, {"--kappa", &o.kappa},
                              {"--ef", &o.ef}, {"--pq", &o.pq}, {"--gh", &o.gh}, {"--rs", &o.rs}}) {
    file(avf, flag, *target, "Action or action embedding JSON");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    for (auto& [sub, handler] : verbs) {
      if (sub->parsed()) return handler();
    }
    std::cerr << app.help();
    return kUsage;
  } catch (const ParseError& e) {
    error_json("input", e.what());
    return kUsage;
  } catch (const BudgetExceeded& e) {
    error_json("budget", e.what());
    return 2;
  } catch (const PreconditionError& e) {
    error_json("precondition", e.what());
    return 1;
  } catch (const std::exception& e) {
    error_json("internal", e.what());
    return 70;
  }
}
