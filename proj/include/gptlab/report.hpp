#pragma once

#include <chrono>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gptlab/self_duality.hpp"
#include "gptlab/space_io.hpp"
#include "gptlab/tensor.hpp"

namespace gptlab {

// JSON reports carry a top-level "schema": 1 and embed re-checkable
// certificates (witness effects, offending rays, orbit representatives) next
// to every boolean verdict.

namespace detail {

template <class B>
nlohmann::json scalar_json(const typename B::Value& v) {
    if constexpr (B::is_exact)
        return format_rational(v);
    else
        return v;
}

template <class B>
nlohmann::json vec_json(const Vec<B>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(scalar_json<B>(v(i)));
    return a;
}

template <class B>
nlohmann::json mat_json(const Mat<B>& m) {
    nlohmann::json a = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i) a.push_back(vec_json<B>(Vec<B>(m.row(i))));
    return a;
}

class StageTimer {
  public:
    void record(nlohmann::json& timings, const std::string& stage) {
        auto now = std::chrono::steady_clock::now();
        timings[stage] = std::chrono::duration<double>(now - last_).count();
        last_ = now;
    }

  private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

// the matrix-level pipeline is skipped for groups this large (memory is
// linear in the group order)
constexpr size_t kMaxMaterializedGroup = 20000;

}  // namespace detail

template <class B>
nlohmann::json analysis_report(const StateSpace<B>& s, int jobs = 1) {
    nlohmann::json r;
    nlohmann::json timings;
    detail::StageTimer timer;
    r["schema"] = 1;
    r["report"] = "analyze";
    r["space"] = {{"name", s.name},
                  {"dimension", s.dim},
                  {"vertexCount", s.vertices.rows()},
                  {"backend", B::is_exact ? "exact" : "float"}};

    auto pg = symmetry_permutations(s);
    timer.record(timings, "symmetryGroup");
    r["group"] = {{"order", pg.order()}, {"generatorCount", pg.generators.size()}};
    bool transitive = is_transitive_on_vertices(s, pg);
    r["transitive"] = transitive;

    auto verdict = is_bit_symmetric(s, pg, jobs);
    timer.record(timings, "bitSymmetry");
    nlohmann::json reps = nlohmann::json::array();
    for (const auto& p : verdict.orbit_representatives)
        reps.push_back(
            {{"i", p.i}, {"j", p.j}, {"witness", detail::vec_json<B>(p.witness.covector)}});
    r["bitSymmetric"] = {{"value", verdict.is_bit_symmetric},
                         {"orbitCount", verdict.orbit_count},
                         {"degenerate", verdict.degenerate},
                         {"orbitRepresentatives", reps}};

    std::string skip;
    if (!transitive)
        skip = "group is not transitive on pure states";
    else if (s.degenerate || s.vertices.rows() < 2)
        skip = "single-point space";
    else if (pg.order() > detail::kMaxMaterializedGroup)
        skip = "group too large to materialize matrices";
    if (!skip.empty()) {
        r["selfDual"] = nullptr;
        r["innerProduct"] = nullptr;
        r["statements"] = nullptr;
        r["pipelineSkipped"] = skip;
        r["timings"] = timings;
        return r;
    }

    auto g = automorphism_group(s);
    auto form = invariant_inner_product(s, g);
    timer.record(timings, "innerProduct");
    r["innerProduct"] = {{"c", detail::scalar_json<B>(form.c)},
                         {"lambda", detail::scalar_json<B>(form.lambda)},
                         {"uniqueUpToScale", form.unique_up_to_scale},
                         {"positiveDefinite", is_positive_definite(s.backend, form.full_form)},
                         {"invariant", is_invariant_form(s, g, form)},
                         {"fullForm", detail::mat_json<B>(form.full_form)}};

    auto cert = verify_self_dual(s, form);
    timer.record(timings, "selfDuality");
    nlohmann::json sd = {{"value", cert.is_self_dual}};
    if (cert.offending_effect) sd["offendingEffect"] = detail::vec_json<B>(*cert.offending_effect);
    if (cert.offending_vertex) sd["offendingVertex"] = *cert.offending_vertex;
    r["selfDual"] = sd;

    auto stm = check_statements(s, g, form, jobs);
    timer.record(timings, "statements");
    r["statements"] = {{"advisory", stm.advisory},
                       {"overlapsInRange", stm.overlaps_in_range},
                       {"minimalOverlapDistinguishes", stm.minimal_overlap_distinguishes},
                       {"distinguishableHaveMinimalOverlap", stm.distinguishable_have_minimal_overlap},
                       {"unitNormOnVertices", stm.unit_norm_on_vertices},
                       {"zeroOnDistinguishable", stm.zero_on_distinguishable},
                       {"nonnegativeOnStates", stm.nonnegative_on_states},
                       {"cAttained", stm.c_attained}};
    r["timings"] = timings;
    return r;
}

inline std::string theorem2_verdict_name(Theorem2Verdict v) {
    switch (v) {
        case Theorem2Verdict::NoConstraint: return "no-constraint";
        case Theorem2Verdict::ConsistentChecked: return "consistent-checked";
        case Theorem2Verdict::PredictedNotBitSymmetric: return "predicted-not-bit-symmetric";
        case Theorem2Verdict::Inconsistent: return "inconsistent";
    }
    return "unknown";
}

template <class B>
nlohmann::json tensor_report(const StateSpace<B>& fa, const StateSpace<B>& fb, bool classify,
                             bool chsh, bool check_theorem2, int budget = 16,
                             int vertex_guard = 30, int jobs = 1) {
    nlohmann::json r;
    nlohmann::json timings;
    detail::StageTimer timer;
    r["schema"] = 1;
    r["report"] = "tensor";
    r["factors"] = {{{"name", fa.name}, {"dimension", fa.dim}},
                    {{"name", fb.name}, {"dimension", fb.dim}}};
    auto t = max_tensor(fa, fb, budget, jobs);
    timer.record(timings, "maxTensor");
    r["composite"] = {{"name", t.composite.name},
                      {"dimension", t.composite.dim},
                      {"vertexCount", t.composite.vertices.rows()},
                      {"productCount", t.product_count},
                      {"entangledCount", t.entangled_count}};
    if (classify) {
        nlohmann::json tags = nlohmann::json::array();
        for (const auto& c : t.classes) tags.push_back(c.entangled ? "entangled" : "product");
        r["vertexClasses"] = tags;
    }
    if (chsh) {
        auto setup = default_chsh_setup(fa, fb);
        auto [best, arg] = chsh_max(t, setup);
        timer.record(timings, "chsh");
        r["chsh"] = {{"max", detail::scalar_json<B>(best)},
                     {"argmaxVertex", arg},
                     {"argmaxEntangled", t.classes[arg].entangled},
                     {"setup",
                      {{"a0", detail::vec_json<B>(setup.a0.covector)},
                       {"a1", detail::vec_json<B>(setup.a1.covector)},
                       {"b0", detail::vec_json<B>(setup.b0.covector)},
                       {"b1", detail::vec_json<B>(setup.b1.covector)}}}};
    }
    if (check_theorem2) {
        auto rep = theorem2_check(t, vertex_guard, jobs);
        timer.record(timings, "theorem2");
        r["theorem2"] = {{"verdict", theorem2_verdict_name(rep.verdict)},
                         {"productCount", rep.product_count},
                         {"entangledCount", rep.entangled_count}};
    }
    r["timings"] = timings;
    return r;
}

template <class B>
nlohmann::json distinguish_report(const StateSpace<B>& s, int i, int j) {
    nlohmann::json r;
    r["schema"] = 1;
    r["report"] = "distinguish";
    r["space"] = {{"name", s.name},
                  {"dimension", s.dim},
                  {"vertexCount", s.vertices.rows()},
                  {"backend", B::is_exact ? "exact" : "float"}};
    r["pair"] = {{"i", i}, {"j", j}};
    auto witness = distinguishing_effect(s, i, j);
    r["distinguishable"] = witness.has_value();
    r["witness"] = witness ? detail::vec_json<B>(witness->covector) : nlohmann::json();
    return r;
}

inline nlohmann::json catalog_report() {
    nlohmann::json r;
    r["schema"] = 1;
    r["report"] = "catalog";
    r["entries"] = nlohmann::json::array(
        {{{"spec", "square"}, {"description", "square state space, exact arithmetic"}},
         {{"spec", "ngon:N"},
          {"description",
           "regular N-gon, N >= 3; exact for N = 4 (diamond coordinates), float otherwise"}},
         {{"spec", "simplex:N"}, {"description", "classical N-outcome system, exact"}},
         {{"spec", "cube:N"}, {"description", "N-dimensional hypercube state space, exact"}},
         {{"spec", "<path>"},
          {"description", "JSON file {name, dimension, arithmetic, unit, vertices}"}}});
    return r;
}

// ---- text rendering (same verdict values as the JSON) ----

namespace detail {

inline std::string scalar_text(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    std::ostringstream os;
    os.precision(10);
    os << v.get<double>();
    return os.str();
}

inline std::string yesno(bool b) { return b ? "yes" : "no"; }

}  // namespace detail

inline std::string render_text(const nlohmann::json& r) {
    std::ostringstream os;
    const std::string kind = r.at("report");
    if (kind == "analyze") {
        const auto& sp = r.at("space");
        os << "space: " << sp.at("name").get<std::string>() << " (dimension "
           << sp.at("dimension").get<int>() << ", " << sp.at("vertexCount").get<int>()
           << " vertices, " << sp.at("backend").get<std::string>() << " arithmetic)\n";
        os << "group order: " << r.at("group").at("order").get<size_t>() << "\n";
        os << "transitive: " << detail::yesno(r.at("transitive").get<bool>()) << "\n";
        const auto& bs = r.at("bitSymmetric");
        os << "bit-symmetric: " << detail::yesno(bs.at("value").get<bool>()) << " ("
           << bs.at("orbitCount").get<int>() << " orbit(s) of distinguishable pairs"
           << (bs.at("degenerate").get<bool>() ? "; degenerate space, vacuous" : "") << ")\n";
        if (r.at("selfDual").is_null()) {
            os << "theorem-1 pipeline skipped: " << r.at("pipelineSkipped").get<std::string>()
               << "\n";
        } else {
            os << "self-dual: " << detail::yesno(r.at("selfDual").at("value").get<bool>()) << "\n";
            const auto& ip = r.at("innerProduct");
            os << "c = " << detail::scalar_text(ip.at("c"))
               << ", lambda = " << detail::scalar_text(ip.at("lambda"))
               << (ip.at("uniqueUpToScale").get<bool>() ? " (form unique up to scale)"
                                                        : " (form not unique)")
               << "\n";
            const auto& st = r.at("statements");
            os << "statements: (i) " << (st.at("overlapsInRange").get<bool>() ? "pass" : "FAIL")
               << "  (ii) " << (st.at("minimalOverlapDistinguishes").get<bool>() ? "pass" : "FAIL")
               << "  (iii) "
               << (st.at("distinguishableHaveMinimalOverlap").get<bool>() ? "pass" : "FAIL")
               << (st.at("advisory").get<bool>() ? "  [advisory: space is not bit-symmetric]" : "")
               << "\n";
        }
    } else if (kind == "tensor") {
        const auto& c = r.at("composite");
        os << "composite: " << c.at("name").get<std::string>() << " (dimension "
           << c.at("dimension").get<int>() << ")\n";
        os << "vertices: " << c.at("vertexCount").get<int>() << " ("
           << c.at("productCount").get<int>() << " product, " << c.at("entangledCount").get<int>()
           << " entangled)\n";
        if (r.contains("chsh"))
            os << "CHSH max: " << detail::scalar_text(r.at("chsh").at("max")) << " at vertex "
               << r.at("chsh").at("argmaxVertex").get<int>()
               << (r.at("chsh").at("argmaxEntangled").get<bool>() ? " (entangled)" : " (product)")
               << "\n";
        if (r.contains("theorem2"))
            os << "theorem-2 verdict: " << r.at("theorem2").at("verdict").get<std::string>()
               << "\n";
    } else if (kind == "distinguish") {
        const auto& p = r.at("pair");
        if (r.at("distinguishable").get<bool>()) {
            os << "vertices " << p.at("i").get<int>() << " and " << p.at("j").get<int>()
               << " are perfectly distinguishable\nwitness effect:";
            for (const auto& v : r.at("witness")) os << " " << detail::scalar_text(v);
            os << "\n";
        } else {
            os << "vertices " << p.at("i").get<int>() << " and " << p.at("j").get<int>()
               << " are not distinguishable\n";
        }
    } else if (kind == "catalog") {
        for (const auto& e : r.at("entries"))
            os << e.at("spec").get<std::string>() << "\t"
               << e.at("description").get<std::string>() << "\n";
    }
    return os.str();
}

}  // namespace gptlab
