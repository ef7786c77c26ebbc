#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cemb/certificate.hpp"
#include "cemb/complex.hpp"
#include "cemb/gadget.hpp"
#include "cemb/graph.hpp"
#include "cemb/pipeline.hpp"

using namespace cemb;

namespace {

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitBudget = 2;
constexpr int kExitInput = 3;

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

struct Inputs {
    MultiGraph graph;
    SimplicialComplex2 complex;
};

Inputs load_instance(const std::string& complex_path,
                     const std::string& graph_path, int trace) {
    Inputs in;
    auto cr = parse_complex_text(slurp(complex_path));
    auto gr = parse_graph_text(slurp(graph_path));
    if (trace >= 1)
        for (const auto& w : cr.warnings) std::cerr << "complex: " << w << "\n";
    if (trace >= 1)
        for (const auto& w : gr.warnings) std::cerr << "graph: " << w << "\n";
    in.complex = cr.complex;
    in.graph = gr.graph;
    in.complex.validate();
    in.graph.validate();
    return in;
}

int run_decide(const std::string& complex_path, const std::string& graph_path,
               const std::string& cert_path, long long steps, double seconds,
               int trace) {
    Inputs in;
    try {
        in = load_instance(complex_path, graph_path, trace);
    } catch (const std::exception& e) {
        std::cerr << "decide: " << e.what() << "\n";
        return kExitInput;
    }
    BudgetLimits lim;
    lim.steps = steps;
    lim.seconds = seconds;
    PipelineRun run = run_pipeline(in.graph, in.complex, lim);
    if (trace >= 1)
        std::cerr << "steps " << run.steps_used << "\n";
    if (trace >= 2 && run.answer == Answer::YES) {
        if (run.three_book) {
            std::cerr << "3-book at " << run.book_witness << "\n";
        } else {
            std::cerr << "guess " << run.guess_index << " placement "
                      << run.placement_index << "\n";
            for (const auto& [node, vtx] : run.assignment)
                std::cerr << "  " << node << " -> "
                          << (vtx.empty() ? "(unclaimed)" : vtx) << "\n";
        }
    }
    switch (run.answer) {
        case Answer::YES: {
            std::cout << "YES\n";
            if (!cert_path.empty()) {
                std::ofstream f(cert_path);
                if (!f) {
                    std::cerr << "decide: cannot write " << cert_path << "\n";
                    return kExitInput;
                }
                f << certificate_to_text(make_certificate(run));
            }
            return kExitYes;
        }
        case Answer::NO:
            std::cout << "NO\n";
            return kExitNo;
        case Answer::BUDGET_EXCEEDED:
            std::cout << "BUDGET\n";
            return kExitBudget;
    }
    return kExitInput;
}

int run_verify(const std::string& complex_path, const std::string& graph_path,
               const std::string& cert_path) {
    Inputs in;
    Certificate cert;
    try {
        in = load_instance(complex_path, graph_path, 0);
        cert = parse_certificate_text(slurp(cert_path));
    } catch (const std::exception& e) {
        std::cerr << "verify: " << e.what() << "\n";
        return kExitInput;
    }
    if (verify_certificate(in.graph, in.complex, cert)) {
        std::cout << "VALID\n";
        return kExitYes;
    }
    std::cout << "INVALID\n";
    return kExitNo;
}

int run_gadget(const std::string& kind, const std::vector<long long>& params,
               const std::string& out_path) {
    SimplicialComplex2 c;
    try {
        if (kind == "surface") {
            if (params.size() != 2)
                throw std::runtime_error("surface wants: genus orientable");
            c = surface_gadget(static_cast<int>(params[0]), params[1] != 0);
        } else if (kind == "book") {
            if (params.size() != 1)
                throw std::runtime_error("book wants: pages");
            c = book_gadget(static_cast<int>(params[0]));
        } else if (kind == "crossing") {
            if (params.size() != 2)
                throw std::runtime_error("crossing wants: k genus");
            c = crossing_gadget(static_cast<int>(params[0]),
                                static_cast<int>(params[1]));
        } else {
            throw std::runtime_error("unknown kind " + kind);
        }
    } catch (const std::exception& e) {
        std::cerr << "gadget: " << e.what() << "\n";
        return kExitInput;
    }
    std::ofstream f(out_path);
    if (!f) {
        std::cerr << "gadget: cannot write " << out_path << "\n";
        return kExitInput;
    }
    f << c.to_text();
    return kExitYes;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"decides whether a graph embeds into a 2-complex"};
    app.require_subcommand(1);

    std::string complex_path, graph_path, cert_path, kind, out_path;
    long long steps = -1;
    double seconds = -1;
    int jobs = 1, trace = 0;
    std::vector<long long> params;

    auto* decide = app.add_subcommand("decide", "decide embeddability");
    decide->add_option("--complex", complex_path)->required();
    decide->add_option("--graph", graph_path)->required();
    decide->add_option("--certificate", cert_path);
    decide->add_option("--budget-steps", steps);
    decide->add_option("--budget-seconds", seconds);
    // accepted for interface compatibility; the search runs sequentially
    decide->add_option("--jobs", jobs);
    decide->add_option("--trace", trace)->check(CLI::Range(0, 2));

    auto* verify = app.add_subcommand("verify", "check a certificate");
    verify->add_option("--complex", complex_path)->required();
    verify->add_option("--graph", graph_path)->required();
    verify->add_option("--certificate", cert_path)->required();

    auto* gadget = app.add_subcommand("gadget", "write a gadget complex");
    gadget->add_option("--kind", kind)->required();
    gadget->add_option("--params", params)->expected(-1);
    gadget->add_option("--out", out_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int r = app.exit(e);
        return r == 0 ? 0 : kExitInput;
    }

    if (decide->parsed())
        return run_decide(complex_path, graph_path, cert_path, steps, seconds,
                          trace);
    if (verify->parsed()) return run_verify(complex_path, graph_path, cert_path);
    return run_gadget(kind, params, out_path);
}
