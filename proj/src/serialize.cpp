#include "coherent/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "coherent/errors.hpp"

namespace coherent {

namespace {

const Json& require_key(const Json& doc, const char* key) {
    if (!doc.is_object() || !doc.contains(key)) {
        throw InvalidParameter(std::string("missing key '") + key + "'");
    }
    return doc.at(key);
}

std::size_t index_from_json(const Json& value, const char* what) {
    if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<long long>() >= 0)) {
        throw InvalidParameter(std::string(what) + ": expected a non-negative integer");
    }
    return value.get<std::size_t>();
}

AtomSet atoms_from_json(const Json& value, const char* what) {
    if (!value.is_array()) throw InvalidParameter(std::string(what) + ": expected an array");
    AtomSet out;
    for (const auto& v : value) out.push_back(index_from_json(v, what));
    return out;
}

Json atoms_json(const AtomSet& atoms) {
    Json arr = Json::array();
    for (AtomId a : atoms) arr.push_back(a);
    return arr;
}

Json interval_json(const ForestNode& node) {
    return Json::array({rational_json(node.from), rational_json(node.to)});
}

Json surd_json(const Surd& value) {
    Json out;
    out["exact"] = to_string(value);
    out["decimal"] = to_double(value);
    return out;
}

}  // namespace

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidParameter(std::string("malformed JSON: ") + e.what());
    }
}

Json rational_json(const Rational& value) { return to_string(value); }

Rational rational_from_json(const Json& value) {
    if (value.is_string()) return parse_rational(value.get<std::string>());
    if (value.is_number_integer()) return Rational(value.get<long>());
    throw InvalidParameter("expected a rational string \"p/q\"");
}

Json model_to_json(const CoherentModel& model) {
    Json doc;
    Json masses = Json::array();
    for (const auto& m : model.space().masses()) masses.push_back(rational_json(m));
    doc["masses"] = std::move(masses);
    doc["event_A"] = atoms_json(model.event());
    Json partitions = Json::array();
    for (const auto& p : model.partitions()) {
        Json blocks = Json::array();
        for (const auto& b : p.blocks()) blocks.push_back(atoms_json(b));
        partitions.push_back(std::move(blocks));
    }
    doc["partitions"] = std::move(partitions);
    return doc;
}

CoherentModel model_from_json(const Json& doc) {
    try {
        const Json& masses_json = require_key(doc, "masses");
        if (!masses_json.is_array()) throw InvalidParameter("'masses' must be an array");
        std::vector<Rational> masses;
        for (const auto& m : masses_json) masses.push_back(rational_from_json(m));
        const std::size_t atoms = masses.size();
        AtomSet event = atoms_from_json(require_key(doc, "event_A"), "event_A");
        const Json& parts_json = require_key(doc, "partitions");
        if (!parts_json.is_array()) throw InvalidParameter("'partitions' must be an array");
        std::vector<Partition> partitions;
        for (const auto& p : parts_json) {
            if (!p.is_array()) throw InvalidParameter("each partition must be an array of blocks");
            std::vector<AtomSet> blocks;
            for (const auto& b : p) blocks.push_back(atoms_from_json(b, "partition block"));
            partitions.emplace_back(std::move(blocks), atoms);
        }
        return CoherentModel(FiniteSpace(std::move(masses)), std::move(event), std::move(partitions));
    } catch (const nlohmann::json::exception& e) {
        throw InvalidParameter(std::string("malformed model JSON: ") + e.what());
    }
}

Json opinions_to_json(const OpinionMatrix& opinions) {
    Json rows = Json::array();
    for (const auto& row : opinions) {
        Json r = Json::array();
        for (const auto& v : row) r.push_back(rational_json(v));
        rows.push_back(std::move(r));
    }
    return rows;
}

Json step_pair_to_json(const StepPair& pair) {
    Json doc;
    Json segs = Json::array();
    for (const auto& s : pair.segments()) {
        Json seg;
        seg["from"] = rational_json(s.from);
        seg["H"] = rational_json(s.high);
        seg["L"] = rational_json(s.low);
        segs.push_back(std::move(seg));
    }
    doc["segments"] = std::move(segs);
    doc["tail_from"] = rational_json(pair.tail_from());
    return doc;
}

StepPair step_pair_from_json(const Json& doc) {
    try {
        const Json& segs = require_key(doc, "segments");
        if (!segs.is_array()) throw InvalidParameter("'segments' must be an array");
        std::vector<Segment> out;
        for (const auto& s : segs) {
            out.push_back({rational_from_json(require_key(s, "from")),
                           rational_from_json(require_key(s, "H")),
                           rational_from_json(require_key(s, "L"))});
        }
        return StepPair(std::move(out), rational_from_json(require_key(doc, "tail_from")));
    } catch (const nlohmann::json::exception& e) {
        throw InvalidParameter(std::string("malformed step pair JSON: ") + e.what());
    }
}

Json lambda_report_to_json(const LambdaReport& report) {
    Json doc;
    doc["bounds"] = report.bounds;
    doc["step"] = report.step;
    doc["budget"] = report.budget;
    doc["balance"] = report.balance;
    doc["no_gap_values"] = report.no_gap_values;
    doc["gap_matches_low"] = report.gap_matches_low;
    doc["in_lambda"] = report.in_lambda();
    doc["in_lambda_delta"] = report.in_lambda_delta();
    doc["measure_H_above_half"] = rational_json(report.high_measure);
    doc["measure_L_below_half"] = rational_json(report.low_measure);
    Json failures = Json::array();
    for (const auto& f : report.balance_failures) {
        failures.push_back({{"level", rational_json(f.level)},
                            {"lhs", rational_json(f.lhs)},
                            {"rhs", rational_json(f.rhs)}});
    }
    doc["balance_failures"] = std::move(failures);
    doc["value_witnesses"] = report.value_witnesses;
    doc["gap_witnesses"] = report.gap_witnesses;
    return doc;
}

Json cprime_report_to_json(const CprimeReport& report) {
    Json doc;
    doc["prob_A"] = rational_json(report.prob_A);
    doc["half_mass"] = report.half_mass;
    doc["balanced"] = report.balanced;
    doc["passed"] = report.passed();
    Json levels = Json::array();
    for (const auto& l : report.levels) levels.push_back(rational_json(l));
    doc["levels"] = std::move(levels);
    Json failures = Json::array();
    for (const auto& f : report.failures) {
        failures.push_back({{"level", rational_json(f.level)},
                            {"lhs", rational_json(f.lhs)},
                            {"rhs", rational_json(f.rhs)}});
    }
    doc["failures"] = std::move(failures);
    return doc;
}

Json symmetry_report_to_json(const SymmetryReport& report) {
    Json doc;
    doc["half_mass"] = report.half_mass;
    doc["opinions_mixed"] = report.opinions_mixed;
    doc["joint_reflection"] = report.joint_reflection;
    doc["level_balance"] = report.level_balance;
    doc["tail_doubling"] = report.tail_doubling;
    doc["tail_original"] = rational_json(report.tail_original);
    doc["tail_symmetrized_on_A"] = rational_json(report.tail_symmetrized_on_A);
    doc["passed"] = report.passed();
    return doc;
}

Json extremal_certificate_to_json(const ExtremalCertificate& cert) {
    Json doc;
    doc["n"] = cert.spec.n;
    doc["delta"] = rational_json(cert.spec.delta);
    doc["delta_eff"] = rational_json(cert.spec.delta_eff);
    doc["core_mass"] = rational_json(cert.spec.core_mass);
    doc["side_mass"] = rational_json(cert.spec.side_mass);
    doc["opinions"] = opinions_to_json(cert.model.opinions());
    doc["tail"] = rational_json(cert.tail);
    doc["bound"] = rational_json(cert.bound);
    doc["value"] = rational_json(cert.tail);
    doc["attained"] = cert.attained;
    return doc;
}

Json forest_to_json(const Forest& forest) {
    std::function<Json(std::size_t)> node_json = [&](std::size_t idx) {
        const ForestNode& node = forest.nodes[idx];
        Json doc;
        doc["from"] = rational_json(node.from);
        doc["to"] = rational_json(node.to);
        doc["H"] = rational_json(node.high);
        doc["depth"] = node.depth;
        doc["expanded"] = node.expanded;
        Json kids = Json::array();
        for (std::size_t c : node.children) kids.push_back(node_json(c));
        doc["children"] = std::move(kids);
        return doc;
    };
    Json doc;
    doc["delta"] = rational_json(forest.delta);
    doc["depth_limit"] = forest.depth_limit;
    doc["residual_bound"] = rational_json(forest.residual_bound);
    Json roots = Json::array();
    for (std::size_t r : forest.roots) roots.push_back(node_json(r));
    doc["roots"] = std::move(roots);
    return doc;
}

Json forest_edges_to_json(const Forest& forest) {
    Json edges = Json::array();
    for (const auto& node : forest.nodes) {
        if (node.parent == ForestNode::no_parent) continue;
        edges.push_back({{"parent", interval_json(forest.nodes[node.parent])},
                         {"child", interval_json(node)}});
    }
    return edges;
}

Json forest_report_to_json(const ForestReport& report) {
    Json doc;
    doc["disjoint"] = report.disjoint;
    doc["constant_high"] = report.constant_high;
    doc["above_threshold"] = report.above_threshold;
    doc["low_matches_parent"] = report.low_matches_parent;
    doc["child_lengths"] = report.child_lengths;
    doc["covering"] = report.covering;
    doc["residual_geometric"] = report.residual_geometric;
    doc["level_identity"] = report.level_identity;
    doc["passed"] = report.passed();
    doc["measure_H_above_half"] = rational_json(report.high_measure);
    doc["materialized"] = rational_json(report.materialized);
    doc["defect"] = rational_json(report.defect);
    doc["residual_bound"] = rational_json(report.residual_bound);
    doc["failures"] = report.failures;
    return doc;
}

SearchConfig search_config_from_json(const Json& doc) {
    try {
        SearchConfig config;
        if (!doc.is_object()) throw InvalidParameter("search config must be a JSON object");
        config.n = require_key(doc, "n").get<long>();
        config.atoms = index_from_json(require_key(doc, "atoms"), "atoms");
        config.delta = rational_from_json(require_key(doc, "delta"));
        config.mass_grid_denominator = require_key(doc, "mass_grid_denominator").get<long>();
        if (doc.contains("seed")) config.seed = doc.at("seed").get<std::uint64_t>();
        if (doc.contains("restarts")) config.restarts = doc.at("restarts").get<int>();
        if (doc.contains("objective")) {
            const auto obj = doc.at("objective").get<std::string>();
            if (obj == "tail") {
                config.objective = Objective::tail;
            } else if (obj == "expected-gap") {
                config.objective = Objective::expected_gap;
            } else {
                throw InvalidParameter("objective must be 'tail' or 'expected-gap'");
            }
        }
        if (doc.contains("mode")) {
            const auto mode = doc.at("mode").get<std::string>();
            if (mode == "enumerate") {
                config.mode = SearchMode::enumerate;
            } else if (mode == "random") {
                config.mode = SearchMode::random;
            } else {
                throw InvalidParameter("mode must be 'enumerate' or 'random'");
            }
        }
        if (doc.contains("planted")) config.planted = model_from_json(doc.at("planted"));
        validate(config);
        return config;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidParameter(std::string("malformed search config: ") + e.what());
    }
}

Json search_config_to_json(const SearchConfig& config) {
    Json doc;
    doc["mode"] = config.mode == SearchMode::enumerate ? "enumerate" : "random";
    doc["n"] = config.n;
    doc["atoms"] = config.atoms;
    doc["delta"] = rational_json(config.delta);
    doc["mass_grid_denominator"] = config.mass_grid_denominator;
    doc["seed"] = config.seed;
    doc["restarts"] = config.restarts;
    doc["objective"] = config.objective == Objective::tail ? "tail" : "expected-gap";
    if (config.planted) doc["planted"] = model_to_json(*config.planted);
    return doc;
}

Json search_result_to_json(const SearchResult& result) {
    Json doc;
    doc["best_value"] = rational_json(result.best_value);
    doc["best_value_decimal"] = to_decimal(result.best_value);
    doc["structures_examined"] = result.examined;
    doc["violation"] = result.violation;
    if (result.best_restart >= 0) doc["best_restart"] = result.best_restart;
    doc["best_model"] = model_to_json(result.best_model);
    return doc;
}

Json search_certificate_to_json(const SearchCertificate& cert) {
    Json doc;
    doc["value"] = rational_json(cert.value);
    doc["ceiling"] = surd_json(cert.ceiling);
    doc["slack"] = surd_json(cert.slack);
    doc["passed"] = cert.passed;
    return doc;
}

Json pipeline_report_to_json(const PipelineReport& report) {
    Json doc;
    doc["n"] = report.n;
    doc["delta"] = rational_json(report.delta);
    doc["depth"] = report.depth;
    doc["source"] = report.extremal ? "extremal" : "model";
    doc["passed"] = report.passed();
    if (!report.passed()) doc["failing_stage"] = report.failing_stage();
    Json stages = Json::array();
    for (const auto& s : report.stages) {
        Json st;
        st["stage"] = s.name;
        st["passed"] = s.passed;
        if (!s.detail.empty()) st["detail"] = s.detail;
        stages.push_back(std::move(st));
    }
    doc["stages"] = std::move(stages);
    doc["tail"] = rational_json(report.tail);
    doc["bound"] = rational_json(report.bound);
    doc["symmetrized"] = report.symmetrized;
    doc["degenerate"] = report.degenerate;
    if (report.symmetry) doc["symmetry"] = symmetry_report_to_json(*report.symmetry);
    if (report.cprime) doc["cprime"] = cprime_report_to_json(*report.cprime);
    if (report.pair) {
        doc["step_pair"] = step_pair_to_json(*report.pair);
        doc["step_pair_membership"] = lambda_report_to_json(*report.pair_membership);
        doc["gap_measure"] = rational_json(report.pair_gap);
        doc["tail_on_A"] = rational_json(report.tail_on_A);
    }
    if (report.reduced) {
        doc["reduced_pair"] = step_pair_to_json(*report.reduced);
        doc["reduced_membership"] = lambda_report_to_json(*report.reduced_membership);
        doc["reduced_gap_measure"] = rational_json(report.reduced_gap);
    }
    if (report.forest) doc["forest"] = forest_report_to_json(*report.forest);
    if (report.tree_ratio) {
        doc["best_tree_ratio"] = {{"lower", rational_json(report.tree_ratio->lower)},
                                  {"upper", rational_json(report.tree_ratio->upper)}};
    }
    doc["phi_ratio"] = report.phi ? rational_json(*report.phi) : Json(nullptr);
    doc["phi_ceiling"] = rational_json(report.phi_ceiling);
    if (report.recombined) doc["recombined_bound"] = rational_json(*report.recombined);
    return doc;
}

void write_bellman_csv(std::ostream& out, const BellmanTable& table) {
    out << "x,phi_m,psi,deficiency,x_decimal,phi_m_decimal,psi_decimal,deficiency_decimal\n";
    for (std::size_t i = 0; i < table.grid.size(); ++i) {
        const Rational& x = table.grid[i];
        const Rational& phi = table.last()[i];
        const Rational candidate = psi(x, table.delta);
        const Rational deficiency = candidate - phi;
        out << to_string(x) << ',' << to_string(phi) << ',' << to_string(candidate) << ','
            << to_string(deficiency) << ',' << to_decimal(x) << ',' << to_decimal(phi) << ','
            << to_decimal(candidate) << ',' << to_decimal(deficiency) << '\n';
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidParameter("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InvalidParameter("cannot write '" + tmp + "'");
        out << contents;
        if (!out.flush()) throw InvalidParameter("write to '" + tmp + "' failed");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw InvalidParameter("cannot move '" + tmp + "' onto '" + path + "'");
    }
}

}  // namespace coherent
