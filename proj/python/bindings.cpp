// JSON-text bridge: every function takes and returns JSON documents as
// strings. Path references inside documents are not resolved; inline them.
#include <pybind11/pybind11.h>

#include "cstruct/error.hpp"
#include "cstruct/json_io.hpp"

namespace py = pybind11;
using namespace cstruct;

namespace {

Json in(const std::string& text) { return parse_json(text); }
std::string out(const Json& j) { return j.dump(); }

FinStructure structure(const std::string& t) { return structure_from_json(in(t)); }
std::vector<Rational> delta_of(const std::string& pair) {
  return pair.empty() ? std::vector<Rational>{} : value_pair_from_json(in(pair)).delta;
}

}  // namespace

PYBIND11_MODULE(_cstruct, mod) {
  mod.attr("__version__") = CSTRUCT_VERSION;

  auto base = py::register_exception<Error>(mod, "Error");
  py::register_exception<ParseError>(mod, "ParseError", base);
  py::register_exception<PreconditionError>(mod, "PreconditionError", base);
  py::register_exception<BudgetExceeded>(mod, "BudgetExceeded", base);

  mod.def("classify", [](const std::string& sig) {
    SignaturePtr s = signature_from_json(in(sig));
    return out(to_json(classify(*s), *s));
  });
  mod.def("validate", [](const std::string& s) {
    FinStructure st = structure(s);
    auto vs = validate(st);
    return out({{"valid", vs.empty()}, {"violations", violations_to_json(st, vs)}});
  });
  mod.def("check_partial", [](const std::string& s) {
    auto problem = check_partial(partial_from_json(in(s)));
    return out({{"valid", !problem}, {"violations", problem ? Json::array({*problem}) : Json::array()}});
  });
  mod.def("induced_du", [](const std::string& s, const std::string& relation, std::size_t arg) {
    FinStructure st = structure(s);
    auto r = st.signature().find(relation);
    if (!r || arg >= st.signature()[*r].arity) throw ParseError("no such relation argument: " + relation);
    return out(to_json(induced_du(st.size(), st.dist_matrix(), st.signature().modulus(*r, arg))));
  });
  mod.def("conservative_extension", [](const std::string& s) { return out(to_json(conservative_extension(partial_from_json(in(s))))); });
  mod.def(
      "strong_amalgam",
      [](const std::string& m, const std::string& p, const std::string& q, const std::string& phi,
         const std::string& psi, const std::string& pair) {
        FinStructure sm = structure(m), sp = structure(p), sq = structure(q);
        Embedding e = embedding_from_json(in(phi), sm, sp), f = embedding_from_json(in(psi), sm, sq);
        return out(to_json(strong_amalgam(sm, sp, sq, e, f, delta_of(pair)), sp, sq));
      },
      py::arg("m"), py::arg("p"), py::arg("q"), py::arg("phi"), py::arg("psi"), py::arg("pair") = "");
  mod.def(
      "joint_embed",
      [](const std::string& m, const std::string& n, const std::string& pair) {
        FinStructure a = structure(m), b = structure(n);
        return out(to_json(joint_embed(a, b, delta_of(pair)), a, b));
      },
      py::arg("m"), py::arg("n"), py::arg("pair") = "");
  mod.def("value_pair_for", [](const std::string& s) {
    FinStructure st = structure(s);
    ValuePair vp = value_pair_for(st);
    return out({{"pair", to_json(vp)}, {"good", is_good_value_pair(vp, st.signature())}});
  });
  mod.def(
      "fraisse_build",
      [](const std::string& sig, const std::string& pair, std::size_t rounds, std::size_t size_cap, bool saturating) {
        LimitOptions lo;
        lo.size_cap = size_cap;
        if (saturating) lo.mode = Realization::Saturating;
        ValuePair vp = value_pair_from_json(in(pair));
        LimitApprox st(signature_from_json(in(sig)), vp, lo);
        std::size_t done = 0;
        {
          py::gil_scoped_release release;
          while (done < rounds && st.step()) ++done;
        }
        return out({{"structure", to_json(st.current())},
                    {"rounds", done},
                    {"pending", st.pending().size()},
                    {"valued", is_valued(st.current(), vp)}});
      },
      py::arg("sig"), py::arg("pair"), py::arg("rounds"), py::arg("size_cap") = 1, py::arg("saturating") = false);
  mod.def(
      "check_extension_property",
      [](const std::string& s, const std::string& pair, std::size_t m) {
        FinStructure st = structure(s);
        return out(to_json(check_extension_property(st, value_pair_from_json(in(pair)), m), st));
      },
      py::arg("s"), py::arg("pair"), py::arg("m") = 1);
  mod.def("katetov_de", [](const std::string& base, const std::string& x, const std::string& y) {
    FinStructure b = structure(base);
    OnePointExt ex = one_point_ext_from(b, structure(x)), ey = one_point_ext_from(b, structure(y));
    Json j = to_json(dE(ex, ey));
    j["equivalent"] = equivalent(ex, ey);
    return out(j);
  });
  mod.def("katetov_amalgam", [](const std::string& base, const std::string& x, const std::string& y) {
    FinStructure b = structure(base);
    return out(to_json(two_point_amalgam(one_point_ext_from(b, structure(x)), one_point_ext_from(b, structure(y)))));
  });
  mod.def(
      "eppa_search",
      [](const std::string& m, const std::string& pair, std::size_t max_size, std::size_t budget) {
        FinStructure st = structure(m);
        ValuePair vp = value_pair_from_json(in(pair));
        return out(to_json(eppa_bruteforce(st, vp, max_size ? max_size : st.size() + 1, budget), st));
      },
      py::arg("m"), py::arg("pair"), py::arg("max_size") = 0, py::arg("budget") = 100'000);
  mod.def("classical_reduction", [](const std::string& m) { return out(to_json(classical_reduction(structure(m)))); });
  mod.def("validate_action", [](const std::string& a) { return out(to_json(validate_action(action_from_json(in(a))))); });
  mod.def("extend_action", [](const std::string& gm, const std::string& ln, const std::string& inclusion) {
    Action g = action_from_json(in(gm)), l = action_from_json(in(ln));
    Json inc = in(inclusion);
    ActionExtension x = extend_action(g, l, group_map_from_json(inc, l.group, g.group),
                                      embedding_from_json(inc, g.structure, l.structure));
    return out({{"action", to_json(x.action)}, {"phi", embedding_to_json(x.phi, l.structure, x.action.structure)}});
  });
  mod.def(
      "joint_embed_actions",
      [](const std::string& a, const std::string& b, const std::string& pair) {
        Action x = action_from_json(in(a)), y = action_from_json(in(b));
        ActionJointEmbedding j = joint_embed_actions(x, y, delta_of(pair));
        return out({{"action", to_json(j.action)},
                    {"left", action_embedding_to_json(j.left, x, j.action)},
                    {"right", action_embedding_to_json(j.right, y, j.action)},
                    {"delta", to_json(j.delta)}});
      },
      py::arg("a"), py::arg("b"), py::arg("pair") = "");
}
