#include "cirsolve/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cirsolve/engine.hpp"
#include "cirsolve/errors.hpp"
#include "cirsolve/exact_solvers.hpp"
#include "cirsolve/fd_theory.hpp"
#include "cirsolve/gadgets.hpp"
#include "cirsolve/io.hpp"
#include "cirsolve/sampler.hpp"

namespace cirsolve {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

struct Options {
    std::string input;
    std::string fds;
    std::string solver = "auto";
    std::string format = "table";
    std::uint64_t budget = 1u << 20;
    std::uint64_t seed = 0;
    std::uint64_t count = 1;
    std::string gadget;
    std::string output;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Instance {
    Cir cir;
    FdSet fds;
    std::string fd_text;
};

Instance load(const Options& opt) {
    CirDocument doc = parse_document(read_file(opt.input));
    std::string text = opt.fds;
    if (text.empty()) {
        if (!doc.fds) throw UsageError("no FDs: pass --fds or add an \"fds\" field to the document");
        text = *doc.fds;
    }
    FdSet fds = parse_fds(text, doc.cir.schema());
    return {std::move(doc.cir), std::move(fds), text};
}

SolveOptions solve_options(const Options& opt) {
    auto solver = parse_solver(opt.solver);
    if (!solver) throw UsageError("unknown solver '" + opt.solver + "'");
    SolveOptions so;
    so.solver = *solver;
    so.world_budget = opt.budget;
    return so;
}

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

Json verdict_json(const Verdict& v) {
    return {{"complexity", name(v.complexity)}, {"theorem", name(v.theorem)}, {"citation", citation(v.theorem)}};
}

std::string verdict_text(const Verdict& v) {
    return std::string(name(v.complexity)) + "(" + std::string(name(v.theorem)) + ")";
}

Json relation_json(const Relation& r) {
    Json tuples = Json::array();
    for (const auto& [tid, row] : r.rows()) {
        Json values = Json::object();
        for (std::size_t i = 0; i < row.size(); ++i) values[r.schema().attributes()[i]] = row[i].text;
        tuples.push_back({{"id", tid}, {"values", std::move(values)}});
    }
    return tuples;
}

void print_relation(std::ostream& out, const Relation& r) {
    std::vector<std::vector<std::string>> table;
    std::vector<std::string> header{"id"};
    for (const auto& a : r.schema().attributes()) header.push_back(a);
    table.push_back(std::move(header));
    for (const auto& [tid, row] : r.rows()) {
        std::vector<std::string> line{tid};
        for (const auto& v : row) line.push_back(v.text);
        table.push_back(std::move(line));
    }
    std::vector<std::size_t> width(table.front().size(), 0);
    for (const auto& line : table)
        for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
    for (const auto& line : table) {
        out << " ";
        for (std::size_t i = 0; i < line.size(); ++i) {
            out << " " << line[i];
            if (i + 1 < line.size()) out << std::string(width[i] - line[i].size(), ' ') << " |";
        }
        out << "\n";
    }
}

std::string fds_of(const FdSet& f) {
    const std::string text = format_fds(f);
    return text.empty() ? "(none)" : text;
}

int cmd_classify(const Options& opt, std::ostream& out) {
    const auto start = Clock::now();
    Instance inst = load(opt);
    const Classification cls = classify(inst.fds);
    const double ms = elapsed_ms(start);
    if (opt.format == "json") {
        Json plan = Json::array();
        for (const auto& pc : cls.components) {
            Json c = {{"fds", format_fds(pc.fds)},
                      {"plan", name(pc.kind)},
                      {"possibility", verdict_json(pc.possibility)},
                      {"mpd", verdict_json(pc.mpd)},
                      {"probability", verdict_json(pc.probability)}};
            if (pc.kind == PlanKind::Matching) {
                c["certain_side"] = pc.certain_side;
                c["other_side"] = pc.other_side;
            }
            plan.push_back(std::move(c));
        }
        Json report = {{"command", "classify"},
                       {"fds", format_fds(cls.normalized)},
                       {"possibility", verdict_json(cls.possibility)},
                       {"mpd", verdict_json(cls.mpd)},
                       {"probability", verdict_json(cls.probability)},
                       {"components", std::move(plan)},
                       {"free_attributes", cls.free_attributes},
                       {"timing_ms", ms}};
        out << report.dump(2) << "\n";
        return kExitYes;
    }
    out << "FDs: " << fds_of(cls.normalized) << "\n";
    out << "Possibility: " << verdict_text(cls.possibility) << "\n";
    out << "MPD: " << verdict_text(cls.mpd) << "\n";
    out << "Probability: " << verdict_text(cls.probability) << "\n";
    out << "Plan:\n";
    for (std::size_t i = 0; i < cls.components.size(); ++i) {
        const auto& pc = cls.components[i];
        out << "  " << i + 1 << ". " << name(pc.kind) << ": " << fds_of(pc.fds) << "\n";
    }
    out << "Free attributes: " << to_string(cls.free_attributes) << "\n";
    return kExitYes;
}

int cmd_check(const Options& opt, std::ostream& out) {
    const auto start = Clock::now();
    Instance inst = load(opt);
    const MpdResult res = solve_mpd(inst.cir, inst.fds, solve_options(opt));
    const Classification cls = classify(inst.fds);
    const double ms = elapsed_ms(start);
    if (opt.format == "json") {
        Json report = {{"command", "check"},     {"consistent", res.feasible},
                       {"solver", res.solver},   {"theorem", name(cls.possibility.theorem)},
                       {"complexity", name(cls.possibility.complexity)}, {"timing_ms", ms}};
        out << report.dump(2) << "\n";
    } else {
        out << "possibly consistent: " << (res.feasible ? "yes" : "no") << "\n";
        out << "solver: " << res.solver << "\n";
    }
    return res.feasible ? kExitYes : kExitNo;
}

int cmd_mpd(const Options& opt, std::ostream& out) {
    const auto start = Clock::now();
    Instance inst = load(opt);
    const MpdResult res = solve_mpd(inst.cir, inst.fds, solve_options(opt));
    const Classification cls = classify(inst.fds);
    const double ms = elapsed_ms(start);
    if (opt.format == "json") {
        Json report = {{"command", "mpd"},
                       {"feasible", res.feasible},
                       {"probability", res.probability.str()},
                       {"decimal", res.probability.decimal()},
                       {"solver", res.solver},
                       {"theorem", name(cls.mpd.theorem)},
                       {"complexity", name(cls.mpd.complexity)},
                       {"sample", res.sample ? relation_json(*res.sample) : Json(nullptr)},
                       {"timing_ms", ms}};
        out << report.dump(2) << "\n";
    } else if (res.feasible) {
        out << "probability: " << res.probability << " (" << res.probability.decimal() << ")\n";
        out << "solver: " << res.solver << "\n";
        print_relation(out, *res.sample);
    } else {
        out << "no consistent sample\n";
        out << "solver: " << res.solver << "\n";
    }
    return res.feasible ? kExitYes : kExitNo;
}

int cmd_prob(const Options& opt, std::ostream& out) {
    const auto start = Clock::now();
    Instance inst = load(opt);
    const ProbabilityResult res = solve_probability(inst.cir, inst.fds, solve_options(opt));
    const Classification cls = classify(inst.fds);
    const double ms = elapsed_ms(start);
    if (opt.format == "json") {
        Json report = {{"command", "prob"},
                       {"probability", res.probability.str()},
                       {"decimal", res.probability.decimal()},
                       {"solver", res.solver},
                       {"theorem", name(cls.probability.theorem)},
                       {"complexity", name(cls.probability.complexity)},
                       {"timing_ms", ms}};
        out << report.dump(2) << "\n";
    } else {
        out << res.probability << "\n";
        out << "decimal: " << res.probability.decimal() << "\n";
        out << "solver: " << res.solver << "\n";
    }
    return kExitYes;
}

int cmd_sample(const Options& opt, std::ostream& out) {
    const auto start = Clock::now();
    Instance inst = load(opt);
    const SolveOptions so = solve_options(opt);
    const ProbabilityBackend backend = [&](const Cir& c, const FdSet& f) {
        return solve_probability(c, f, so).probability;
    };
    std::vector<Relation> draws;
    for (std::uint64_t i = 0; i < opt.count; ++i)
        draws.push_back(conditional_sample(inst.cir, inst.fds, backend, batch_seed(opt.seed, i)));
    const double ms = elapsed_ms(start);
    if (opt.format == "json") {
        Json list = Json::array();
        for (std::size_t i = 0; i < draws.size(); ++i)
            list.push_back({{"draw", i},
                            {"probability", sample_probability(inst.cir, draws[i]).str()},
                            {"sample", relation_json(draws[i])}});
        Json report = {{"command", "sample"}, {"seed", opt.seed},     {"count", opt.count},
                       {"backend", name(so.solver)}, {"draws", std::move(list)}, {"timing_ms", ms}};
        out << report.dump(2) << "\n";
    } else {
        for (std::size_t i = 0; i < draws.size(); ++i) {
            out << "draw " << i + 1 << " (Pr = " << sample_probability(inst.cir, draws[i]) << ")\n";
            print_relation(out, draws[i]);
        }
    }
    return kExitYes;
}

int cmd_oracle(const Options& opt, std::ostream& out) {
    const auto start = Clock::now();
    Instance inst = load(opt);
    const OracleResult res = oracle_enumerate(inst.cir, inst.fds, opt.budget);
    const double ms = elapsed_ms(start);
    if (opt.format == "json") {
        Json report = {{"command", "oracle"},
                       {"worlds", res.worlds},
                       {"consistent", res.consistent},
                       {"probability", res.total.str()},
                       {"decimal", res.total.decimal()},
                       {"solver", "oracle"},
                       {"mpd_probability", res.best ? Json(res.best->second.str()) : Json(nullptr)},
                       {"mpd", res.best ? relation_json(res.best->first) : Json(nullptr)},
                       {"timing_ms", ms}};
        out << report.dump(2) << "\n";
    } else {
        out << "worlds: " << res.worlds << "\n";
        out << "consistent: " << res.consistent << "\n";
        out << "probability: " << res.total << " (" << res.total.decimal() << ")\n";
        if (res.best) {
            out << "mpd probability: " << res.best->second << "\n";
            print_relation(out, res.best->first);
        }
    }
    return res.consistent > 0 ? kExitYes : kExitNo;
}

int cmd_gadget(const Options& opt, std::ostream& out) {
    const std::string text = read_file(opt.input);
    Gadget g;
    if (opt.gadget == "nm-sat")
        g = gadget_nm_sat(parse_dimacs(text));
    else if (opt.gadget == "sat-matching")
        g = gadget_sat_matching(parse_dimacs(text));
    else
        g = gadget_perfect_matching(parse_edge_list(text));
    CirDocument doc{g.cir, format_fds(g.fds), Json{{"gadget", opt.gadget}, {"scale", g.scale.get_str()}}.dump()};
    const std::string serialized = serialize_document(doc);
    if (opt.output.empty()) {
        out << serialized;
    } else {
        std::ofstream file(opt.output, std::ios::binary);
        if (!(file << serialized)) throw UsageError("cannot write '" + opt.output + "'");
    }
    return kExitYes;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact solvers for consistency problems on cell-independent relations", "cirsolve"};
    app.require_subcommand(1);
    Options opt;

    auto add_instance = [&](CLI::App* sub) {
        sub->add_option("-i,--input", opt.input, "CIR document (JSON)")->required();
        sub->add_option("-f,--fds", opt.fds, "FD text, overriding the document's \"fds\" field");
        sub->add_option("--format", opt.format, "report format")->check(CLI::IsMember({"table", "json"}));
    };
    auto add_solver = [&](CLI::App* sub) {
        sub->add_option("-s,--solver", opt.solver, "auto | poly | exact | oracle")
            ->check(CLI::IsMember({"auto", "poly", "exact", "oracle"}));
        sub->add_option("-b,--budget", opt.budget, "largest sample space exponential solvers may explore");
    };

    auto* classify_cmd = app.add_subcommand("classify", "complexity verdicts and solver plan");
    add_instance(classify_cmd);
    auto* check_cmd = app.add_subcommand("check", "possible consistency (exit 0 yes, 1 no)");
    add_instance(check_cmd);
    add_solver(check_cmd);
    auto* mpd_cmd = app.add_subcommand("mpd", "most probable consistent sample");
    add_instance(mpd_cmd);
    add_solver(mpd_cmd);
    auto* prob_cmd = app.add_subcommand("prob", "exact probability of consistency");
    add_instance(prob_cmd);
    add_solver(prob_cmd);
    auto* sample_cmd = app.add_subcommand("sample", "draw consistent samples conditioned on the FDs");
    add_instance(sample_cmd);
    add_solver(sample_cmd);
    sample_cmd->add_option("-n,--count", opt.count, "number of draws");
    sample_cmd->add_option("--seed", opt.seed, "random seed");
    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force enumeration report");
    add_instance(oracle_cmd);
    oracle_cmd->add_option("-b,--budget", opt.budget, "largest sample space to enumerate");
    auto* gadget_cmd = app.add_subcommand("gadget", "encode a CNF or bipartite graph as a CIR document");
    gadget_cmd->add_option("kind", opt.gadget, "nm-sat | pm-count | sat-matching")
        ->required()
        ->check(CLI::IsMember({"nm-sat", "pm-count", "sat-matching"}));
    gadget_cmd->add_option("-i,--input", opt.input, "DIMACS CNF or edge list")->required();
    gadget_cmd->add_option("-o,--output", opt.output, "output file (default: standard output)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitYes;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (classify_cmd->parsed()) return cmd_classify(opt, out);
        if (check_cmd->parsed()) return cmd_check(opt, out);
        if (mpd_cmd->parsed()) return cmd_mpd(opt, out);
        if (prob_cmd->parsed()) return cmd_prob(opt, out);
        if (sample_cmd->parsed()) return cmd_sample(opt, out);
        if (oracle_cmd->parsed()) return cmd_oracle(opt, out);
        if (gadget_cmd->parsed()) return cmd_gadget(opt, out);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const StructuralError& e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitParse;
    } catch (const ResourceError& e) {
        err << "budget exceeded: " << e.what() << "\n";
        return kExitBudget;
    } catch (const InfeasibleError& e) {
        err << "infeasible: " << e.what() << "\n";
        return kExitNo;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const MisuseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace cirsolve
