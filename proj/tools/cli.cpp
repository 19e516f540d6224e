#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <set>
#include <sstream>

#include "coherent/errors.hpp"
#include "coherent/serialize.hpp"

namespace coherent {

namespace {

constexpr int exit_pass = 0;
constexpr int exit_property = 1;
constexpr int exit_invalid = 2;

std::vector<Rational> parse_rational_list(const std::string& text) {
    std::vector<Rational> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) throw InvalidParameter("empty entry in list '" + text + "'");
        out.push_back(parse_rational(item));
    }
    if (out.empty()) throw InvalidParameter("empty list");
    return out;
}

void emit(std::ostream& out, const std::string& path, const std::string& text) {
    if (path.empty()) {
        out << text;
    } else {
        write_file_atomic(path, text);
    }
}

int cmd_extremal(long n, const std::string& delta_text, const std::string& out_path,
                 std::ostream& out, std::ostream& err) {
    const Rational delta = parse_rational(delta_text);
    const ExtremalCertificate cert = certify_extremal(n, delta);
    if (!out_path.empty()) write_file_atomic(out_path, dump(model_to_json(cert.model)));
    out << dump(extremal_certificate_to_json(cert));
    if (!cert.attained) {
        err << "extremal: tail " << to_string(cert.tail) << " does not attain "
            << to_string(cert.bound) << "\n";
        return exit_property;
    }
    return exit_pass;
}

int cmd_pipeline(long n, const std::string& delta_text, int depth, const std::string& model_path,
                 const std::string& out_path, std::ostream& out, std::ostream& err) {
    const Rational delta = parse_rational(delta_text);
    const PipelineReport report =
        model_path.empty() ? run_pipeline(n, delta, depth)
                           : run_pipeline(model_from_json(parse_json(read_file(model_path))), delta, depth);
    emit(out, out_path, dump(pipeline_report_to_json(report)));
    if (!report.passed()) {
        err << "pipeline: stage '" << report.failing_stage() << "' failed\n";
        return exit_property;
    }
    return exit_pass;
}

int cmd_bounds(long n_max, const std::string& deltas_text, const std::string& csv_path,
               std::ostream& out) {
    if (n_max < 2) throw InvalidParameter("--n-max must be at least 2");
    const std::vector<Rational> deltas = parse_rational_list(deltas_text);
    for (const auto& d : deltas) require_threshold(d);
    std::ostringstream csv;
    csv << "n,delta,bound,decimal\n";
    for (long n = 2; n <= n_max; ++n) {
        for (const auto& d : deltas) {
            const Rational b = bound_formula(n, d);
            csv << n << ',' << to_string(d) << ',' << to_string(b) << ',' << to_decimal(b) << '\n';
        }
    }
    emit(out, csv_path, csv.str());
    return exit_pass;
}

int cmd_bellman(const std::string& delta_text, const std::string& step_text, int horizon,
                const std::string& csv_path, std::ostream& out, std::ostream& err) {
    const Rational delta = parse_rational(delta_text);
    const Rational step = parse_rational(step_text);
    const BellmanTable table = dp_upper(delta, step, horizon);
    const TableCheck check = check_table(table);
    std::ostringstream csv;
    write_bellman_csv(csv, table);
    Json summary;
    summary["delta"] = rational_json(delta);
    summary["grid_step"] = rational_json(step);
    summary["horizon"] = horizon;
    summary["grid_points"] = table.grid.size();
    summary["below_candidate"] = check.below_candidate;
    summary["monotone"] = check.monotone;
    summary["max_deficiency"] = rational_json(check.max_deficiency);
    summary["max_deficiency_decimal"] = to_decimal(check.max_deficiency);
    summary["max_deficiency_approx"] = check.max_deficiency.get_d();
    summary["worst_point"] = rational_json(check.worst_point);
    if (csv_path.empty()) {
        out << csv.str();
        err << summary.dump() << "\n";
    } else {
        write_file_atomic(csv_path, csv.str());
        out << dump(summary);
    }
    if (!check.below_candidate) {
        err << "bellman: Phi_m exceeds Psi on the grid\n";
        return exit_property;
    }
    return exit_pass;
}

int cmd_search(const std::string& config_path, const std::string& out_path, std::ostream& out,
               std::ostream& err) {
    const SearchConfig config = search_config_from_json(parse_json(read_file(config_path)));
    const auto start = std::chrono::steady_clock::now();
    const SearchResult result = run_search(config, &err);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    err << "search: " << result.examined << " structures in " << seconds << " s\n";
    const SearchCertificate cert = certify(result, config);
    Json doc;
    doc["config"] = search_config_to_json(config);
    doc["result"] = search_result_to_json(result);
    doc["certificate"] = search_certificate_to_json(cert);
    emit(out, out_path, dump(doc));
    if (result.violation || !cert.passed) {
        err << "search: value " << to_string(result.best_value) << " exceeds the ceiling\n";
        return exit_property;
    }
    return exit_pass;
}

int cmd_check(const std::string& model_path, const std::string& delta_text,
              const std::string& emit_path, const std::string& expect_tail, std::ostream& out,
              std::ostream& err) {
    const Rational delta = parse_rational(delta_text);
    require_threshold(delta);
    const CoherentModel model = model_from_json(parse_json(read_file(model_path)));
    if (!emit_path.empty()) write_file_atomic(emit_path, dump(model_to_json(model)));

    bool ok = true;
    Json identities = Json::array();
    const OpinionMatrix& x = model.opinions();
    for (std::size_t i = 0; i < model.agents(); ++i) {
        std::set<Rational> levels(x[i].begin(), x[i].end());
        for (const auto& y : levels) {
            if (y <= 0) continue;
            const ConditionalIdentityReport r = check_conditional_identity(model, i, y);
            ok = ok && r.holds;
            identities.push_back({{"agent", i},
                                  {"level", rational_json(y)},
                                  {"lhs", rational_json(r.lhs)},
                                  {"rhs", rational_json(r.rhs)},
                                  {"holds", r.holds}});
        }
    }

    Json doc;
    doc["atoms"] = model.atoms();
    doc["agents"] = model.agents();
    doc["delta"] = rational_json(delta);
    doc["prob_A"] = rational_json(model.space().mass_of(model.event()));
    doc["opinions"] = opinions_to_json(x);
    doc["conditional_identity"] = std::move(identities);
    doc["cprime"] = cprime_report_to_json(check_cprime(model));
    const Rational tail = tail_prob(model, delta);
    doc["tail"] = rational_json(tail);
    doc["tail_on_A"] = rational_json(tail_prob_on_A(model, delta));
    doc["expected_max_gap"] = rational_json(expected_max_gap(model));
    if (model.agents() >= 2) {
        const Rational bound = bound_formula(static_cast<long>(model.agents()), delta);
        doc["bound"] = rational_json(bound);
        if (tail > bound) {
            ok = false;
            err << "check: tail " << to_string(tail) << " exceeds " << to_string(bound) << "\n";
        }
    }
    if (!expect_tail.empty()) {
        const Rational expected = parse_rational(expect_tail);
        doc["expected_tail"] = rational_json(expected);
        if (tail != expected) {
            ok = false;
            err << "check: tail " << to_string(tail) << " differs from expected " << to_string(expected)
                << "\n";
        }
    }
    doc["passed"] = ok;
    out << dump(doc);
    if (!ok) {
        err << "check: property failure\n";
        return exit_property;
    }
    return exit_pass;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact computations for opinion gaps of coherent agents"};
    app.require_subcommand(1);

    long n = 2;
    long n_max = 6;
    int depth = 6;
    int horizon = 60;
    std::string delta;
    std::string deltas = "51/100,3/5,2/3,7/10,3/4,4/5,9/10,1";
    std::string step = "1/1000";
    std::string out_path;
    std::string model_path;
    std::string csv_path;
    std::string config_path;
    std::string emit_path;
    std::string expect_tail;

    auto* extremal = app.add_subcommand("extremal", "Build the extremal model and certify attainment");
    extremal->add_option("--n", n, "number of agents")->required();
    extremal->add_option("--delta", delta, "threshold p/q")->required();
    extremal->add_option("--out", out_path, "write the model JSON here");

    auto* pipeline = app.add_subcommand("pipeline", "Run the reduction chain on a model");
    pipeline->add_option("--n", n, "number of agents");
    pipeline->add_option("--delta", delta, "threshold p/q")->required();
    pipeline->add_option("--depth", depth, "forest depth limit");
    pipeline->add_option("--model", model_path, "model JSON instead of the extremal model");
    pipeline->add_option("--out", out_path, "write the report here");

    auto* bounds = app.add_subcommand("bounds", "Tabulate the closed-form bound");
    bounds->add_option("--n-max", n_max, "largest number of agents");
    bounds->add_option("--deltas", deltas, "comma separated thresholds p/q");
    bounds->add_option("--csv", csv_path, "write the CSV here");

    auto* bellman = app.add_subcommand("bellman", "Value iteration for the Bellman function");
    bellman->add_option("--delta", delta, "threshold p/q")->required();
    bellman->add_option("--grid", step, "grid step p/q");
    bellman->add_option("--horizon", horizon, "number of iterations");
    bellman->add_option("--csv", csv_path, "write the table here");

    auto* search = app.add_subcommand("search", "Enumerate or hill-climb small models");
    search->add_option("config", config_path, "search config JSON")->required();
    search->add_option("--out", out_path, "write the result here");

    auto* check = app.add_subcommand("check", "Validate a model JSON file");
    check->add_option("model", model_path, "model JSON")->required();
    check->add_option("--delta", delta, "threshold p/q")->required();
    check->add_option("--emit-model", emit_path, "re-serialize the parsed model here");
    check->add_option("--expect-tail", expect_tail, "fail unless the tail probability equals this");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_pass : exit_invalid;
    }

    try {
        if (*extremal) return cmd_extremal(n, delta, out_path, out, err);
        if (*pipeline) return cmd_pipeline(n, delta, depth, model_path, out_path, out, err);
        if (*bounds) return cmd_bounds(n_max, deltas, csv_path, out);
        if (*bellman) return cmd_bellman(delta, step, horizon, csv_path, out, err);
        if (*search) return cmd_search(config_path, out_path, out, err);
        if (*check) return cmd_check(model_path, delta, emit_path, expect_tail, out, err);
    } catch (const InternalInvariant& e) {
        err << "error: " << e.what() << "\n";
        return exit_property;
    } catch (const NotInCprime& e) {
        err << "error: " << e.what() << "\n";
        return exit_property;
    } catch (const NotInLambda& e) {
        err << "error: " << e.what() << "\n";
        return exit_property;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_invalid;
    }
    return exit_invalid;
}

}  // namespace coherent
