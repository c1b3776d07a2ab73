#include "stratisat/json_io.hpp"

#include "stratisat/errors.hpp"
#include "stratisat/parser.hpp"

namespace stratisat {

using nlohmann::json;

namespace {

json mask_to_list(Mask s) {
    json out = json::array();
    for (int u = 0; u < kMaxDomain; ++u)
        if ((s >> u) & 1u)
            out.push_back(u);
    return out;
}

Mask mask_from_list(const json& j, int m) {
    Mask out = 0;
    for (const auto& e : j) {
        int u = e.get<int>();
        if (u < 0 || u >= m)
            throw EvalError("model JSON: element " + std::to_string(u) + " out of domain");
        out |= Mask{1} << u;
    }
    return out;
}

} // namespace

json model_to_json(const Interpretation& M) {
    json j;
    j["m"] = M.m;
    j["sort0"] = json::object();
    for (const auto& [name, v] : M.assign0)
        j["sort0"][name] = v;
    j["sort1"] = json::object();
    for (const auto& [name, s] : M.assign1)
        j["sort1"][name] = mask_to_list(s);
    j["sort2"] = json::object();
    for (const auto& [name, collection] : M.assign2) {
        json list = json::array();
        for (Mask s : collection)
            list.push_back(mask_to_list(s));
        j["sort2"][name] = list;
    }
    return j;
}

Interpretation model_from_json(const json& j) {
    Interpretation M;
    M.m = j.at("m").get<int>();
    if (M.m < 1 || M.m > kMaxDomain)
        throw EvalError("model JSON: m out of range");
    if (j.contains("sort0"))
        for (const auto& [name, v] : j.at("sort0").items()) {
            int u = v.get<int>();
            if (u < 0 || u >= M.m)
                throw EvalError("model JSON: value of '" + name + "' out of domain");
            M.assign0[name] = u;
        }
    if (j.contains("sort1"))
        for (const auto& [name, v] : j.at("sort1").items())
            M.assign1[name] = mask_from_list(v, M.m);
    if (j.contains("sort2"))
        for (const auto& [name, v] : j.at("sort2").items()) {
            std::set<Mask> collection;
            for (const auto& sub : v)
                collection.insert(mask_from_list(sub, M.m));
            M.assign2[name] = std::move(collection);
        }
    return M;
}

json result_to_json(const SatResult& r) {
    json j;
    switch (r.kind) {
    case SatResult::Kind::Sat:
        j["result"] = "sat";
        j["m"] = r.m;
        j["model"] = model_to_json(*r.model);
        break;
    case SatResult::Kind::Unsat:
        j["result"] = "unsat";
        j["complete"] = r.bound_complete;
        break;
    case SatResult::Kind::ResourceLimit:
        j["result"] = "resource-limit";
        j["stage"] = r.stage;
        j["detail"] = r.detail;
        break;
    }
    return j;
}

json fragment_report_to_json(const FragmentReport& r) {
    json j;
    j["in_fragment"] = r.in_fragment;
    j["resource_limited"] = r.resource_limited;
    if (!r.note.empty())
        j["note"] = r.note;
    json obs = json::array();
    for (const auto& o : r.obligations) {
        json e;
        e["universal"] = render_formula(o.universal);
        json names = json::array();
        for (const auto& Z : o.enclosing)
            names.push_back(Z.name);
        e["enclosing"] = names;
        e["obligation"] = render_formula(o.obligation);
        e["method"] = o.method == ObligationCheck::Method::Syntactic ? "syntactic" : "semantic";
        e["valid"] = o.valid;
        e["phase"] = o.phase;
        if (o.resource_limited)
            e["resource_limited"] = true;
        if (o.method == ObligationCheck::Method::Semantic)
            e["bound"] = o.bound_used;
        if (o.counterexample)
            e["counterexample"] = model_to_json(*o.counterexample);
        obs.push_back(std::move(e));
    }
    j["obligations"] = std::move(obs);
    return j;
}

json universe_report_to_json(const UniverseReport& r) {
    json j;
    j["dstar"] = json(r.dstar);
    j["base"] = json(r.base);
    j["d0"] = json(r.d0);
    j["d1"] = json(r.d1);
    json ws = json::array();
    for (const auto& w : r.witnesses) {
        json e;
        e["component"] = render_formula(w.component);
        e["substitution"] = json(w.substitution);
        e["elements"] = json(w.elements);
        ws.push_back(std::move(e));
    }
    j["witnesses"] = std::move(ws);
    j["anchor"] = r.anchor;
    j["l"] = r.l;
    j["bound"] = r.bound_used;
    return j;
}

} // namespace stratisat
