#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gptlab/report.hpp"

namespace {

struct CommonFlags {
    std::string format = "text";
    double tolerance = 1e-9;
    int jobs = 1;
    int budget = 16;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--format", f.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    cmd->add_option("--tolerance", f.tolerance, "Comparison tolerance for float-backend spaces")
        ->capture_default_str();
    cmd->add_option("--jobs", f.jobs, "Worker thread cap")->capture_default_str();
    cmd->add_option("--budget", f.budget, "Maximum composite dimension for tensor products")
        ->capture_default_str();
}

void emit(const nlohmann::json& report, const CommonFlags& f) {
    if (f.format == "json")
        std::cout << report.dump(2) << "\n";
    else
        std::cout << gptlab::render_text(report);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Workbench for polytopal state spaces: symmetry, bit symmetry, "
                 "self-duality, maximal tensor products, CHSH"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string space_spec, spec_a, spec_b;
    int pair_i = 0, pair_j = 0;
    bool opt_classify = false, opt_chsh = false, opt_theorem2 = false;

    auto* analyze = app.add_subcommand("analyze", "Full analysis of one state space");
    analyze->add_option("space", space_spec, "Catalog spec or file path")->required();
    add_common(analyze, flags);

    auto* tensor = app.add_subcommand("tensor", "Maximal tensor product of two state spaces");
    tensor->add_option("space-a", spec_a, "First factor")->required();
    tensor->add_option("space-b", spec_b, "Second factor")->required();
    tensor->add_flag("--classify", opt_classify, "Tag each composite vertex product/entangled");
    tensor->add_flag("--chsh", opt_chsh, "Maximize CHSH with the default setup");
    tensor->add_flag("--check-theorem2", opt_theorem2, "Run the theorem-2 consistency check");
    add_common(tensor, flags);

    auto* distinguish = app.add_subcommand("distinguish", "Distinguishability of a vertex pair");
    distinguish->add_option("space", space_spec, "Catalog spec or file path")->required();
    distinguish->add_option("i", pair_i, "First vertex index")->required();
    distinguish->add_option("j", pair_j, "Second vertex index")->required();
    add_common(distinguish, flags);

    auto* catalog = app.add_subcommand("catalog", "List built-in state spaces");
    add_common(catalog, flags);

    CLI11_PARSE(app, argc, argv);

    using namespace gptlab;
    try {
        if (analyze->parsed()) {
            auto space = resolve_space(space_spec, flags.tolerance);
            std::visit([&](const auto& s) { emit(analysis_report(s, flags.jobs), flags); }, space);
        } else if (tensor->parsed()) {
            AnySpace a = resolve_space(spec_a, flags.tolerance);
            AnySpace b = resolve_space(spec_b, flags.tolerance);
            // mixed backends fall back to float arithmetic
            if (a.index() != b.index()) {
                if (auto* e = std::get_if<StateSpace<Exact>>(&a))
                    a = to_approx(*e, flags.tolerance);
                if (auto* e = std::get_if<StateSpace<Exact>>(&b))
                    b = to_approx(*e, flags.tolerance);
            }
            std::visit(
                [&](const auto& fa) {
                    const auto& fb = std::get<std::decay_t<decltype(fa)>>(b);
                    emit(tensor_report(fa, fb, opt_classify, opt_chsh, opt_theorem2, flags.budget,
                                       30, flags.jobs),
                         flags);
                },
                a);
        } else if (distinguish->parsed()) {
            auto space = resolve_space(space_spec, flags.tolerance);
            std::visit([&](const auto& s) { emit(distinguish_report(s, pair_i, pair_j), flags); },
                       space);
        } else if (catalog->parsed()) {
            emit(catalog_report(), flags);
        }
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
