#pragma once

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "fseries/verify.hpp"

namespace fseries {

// Exit codes: 0 ok, 1 verify failure, 2 configuration, 3 breakdown-related
// construction failure, 4 arithmetic guard.
struct RunConfig {
    std::string subcommand;
    std::string hydra_command;
    std::string spec_path;
    std::string frame_path;
    std::string eval_path;
    std::vector<long> index;
    long tmax = 2;
    long nmax = 6;
    std::string point;
    std::string place;
    std::string format = "json";
    std::string suite;
    std::uint64_t seed = 0;
    long precision = 128;
    std::string q_value;
    std::string start;
    long max_steps = 100000;
    std::string magnitude_bound = "1000000000000";
};

namespace cli_detail {

inline ProductSpec load_spec(const RunConfig& cfg) {
    if (cfg.spec_path.empty()) throw arithmetic_error("--spec is required");
    ProductSpec spec = product_spec_from_json(read_json_file(cfg.spec_path));
    if (!cfg.eval_path.empty())
        spec = apply_evaluation(spec, evaluation_from_json(read_json_file(cfg.eval_path)));
    return spec;
}

inline MultiIndex load_index(const RunConfig& cfg, const ProductSpec& spec) {
    MultiIndex n = cfg.index.empty() ? MultiIndex{1} : MultiIndex(cfg.index.begin(), cfg.index.end());
    if (static_cast<long>(n.size()) != spec.dimension())
        throw arithmetic_error("--index dimension must match the spec");
    return n;
}

}  // namespace cli_detail

inline int cmd_transform(const RunConfig& cfg, std::ostream& out) {
    ProductSpec spec = cli_detail::load_spec(cfg);
    MultiIndex n = cli_detail::load_index(cfg, spec);
    TransformLattice lat(spec, n);
    FourierTable table = tabulate(*lat.entry(n), cfg.tmax);
    if (cfg.format == "csv") {
        out << table_to_csv(table);
        return 0;
    }
    Json j;
    j["index"] = n;
    for (const auto& meta : lat.manifest())
        if (meta.index == n) {
            j["alpha0"] = meta.alpha0.str();
            j["branch"] = meta.branch;
        }
    j["table"] = table_to_json(table);
    out << j.dump(2) << "\n";
    return 0;
}

inline int cmd_product(const RunConfig& cfg, std::ostream& out) {
    ProductSpec spec = cli_detail::load_spec(cfg);
    MultiIndex n = cli_detail::load_index(cfg, spec);
    TransformLattice lat(spec, n);
    Json j;
    j["manifest"] = lattice_manifest_to_json(lat);
    Json tables = Json::array();
    for (const auto& m : indices_below(n)) {
        Json one;
        one["index"] = m;
        one["table"] = table_to_json(tabulate(*lat.entry(m), cfg.tmax));
        tables.push_back(std::move(one));
    }
    j["tables"] = std::move(tables);
    out << j.dump(2) << "\n";
    return 0;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    std::vector<std::string> names =
        cfg.suite.empty() || cfg.suite == "all" ? all_suites() : std::vector<std::string>{cfg.suite};
    bool all_ok = true;
    for (const auto& name : names) {
        SuiteResult r = run_suite(name, cfg.seed);
        out << "suite " << r.suite << ": " << (r.passed ? "pass" : "FAIL") << "\n";
        for (const auto& line : r.lines)
            if (!r.passed || line.rfind("  FAIL", 0) == 0) out << line << "\n";
        all_ok = all_ok && r.passed;
    }
    return all_ok ? 0 : 1;
}

inline int cmd_breakdown(const RunConfig& cfg, std::ostream& out) {
    ProductSpec spec = cli_detail::load_spec(cfg);
    auto reports = breakdown_scan(spec, cfg.nmax);
    if (cfg.format == "csv") {
        out << "index,alpha0,verdict\n";
        for (const auto& r : reports)
            out << index_str(r.index) << "," << r.alpha0.str() << ","
                << (r.relation ? *r.relation : (r.on_variety ? "on-variety" : "off-variety")) << "\n";
        return 0;
    }
    Json arr = Json::array();
    for (const auto& r : reports) arr.push_back(breakdown_report_to_json(r));
    out << arr.dump(2) << "\n";
    return 0;
}

inline int cmd_converge(const RunConfig& cfg, std::ostream& out) {
    ProductSpec spec = cli_detail::load_spec(cfg);
    if (spec.dimension() != 1) throw arithmetic_error("converge expects a single series");
    if (cfg.frame_path.empty() && cfg.place.empty())
        throw arithmetic_error("converge needs --frame or --place");
    const FSeriesSpec& s = spec.series()[0];
    PAdicInt z = PAdicInt::parse(s.base(), cfg.point);
    DigitalFrame frame =
        !cfg.frame_path.empty()
            ? frame_from_json(read_json_file(cfg.frame_path))
            : DigitalFrame(s.base(), std::vector<Place>(static_cast<std::size_t>(s.base()),
                                                        Place::parse(cfg.place)));
    ConvergenceTable table = convergence_demo(s, frame, z, cfg.nmax, cfg.precision);
    Json j;
    j["point"] = z.str();
    j["place"] = frame.place_at(z).str();
    j["two-paths-agree"] = table.two_paths_agree;
    j["trend"] = table.trend;
    Json rows = Json::array();
    for (const auto& r : table.rows) {
        Json row;
        row["N"] = r.level;
        row["delta"] = r.delta.str();
        row["size"] = r.size;
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    out << j.dump(2) << "\n";
    return 0;
}

inline int cmd_hydra(const RunConfig& cfg, std::ostream& out) {
    if (cfg.hydra_command == "orbit") {
        BigInt q(cfg.q_value.empty() ? "3" : cfg.q_value);
        HydraMapZ map = HydraMapZ::shortened_qx_plus_one(q);
        OrbitRecord<BigInt> rec =
            map.iterate(BigInt(cfg.start.empty() ? "1" : cfg.start), cfg.max_steps,
                        BigInt(cfg.magnitude_bound));
        out << orbit_to_json(rec).dump(2) << "\n";
        return 0;
    }
    if (cfg.hydra_command == "numen") {
        BigInt q(cfg.q_value.empty() ? "3" : cfg.q_value);
        HydraMapZ map = HydraMapZ::shortened_qx_plus_one(q);
        FSeriesSpec numen = map.numen();
        Json j;
        j["spec"] = spec_to_json(numen);
        Json vals = Json::array();
        for (long m = 0; m <= cfg.nmax; ++m) vals.push_back(numen.eval_at_nat(m).str());
        j["values"] = std::move(vals);
        out << j.dump(2) << "\n";
        return 0;
    }
    if (cfg.hydra_command == "poles") {
        std::optional<ExactScalar> q;
        if (!cfg.q_value.empty()) q = parse_scalar(cfg.q_value);
        PoleReport rep = pole_report(q);
        Json j;
        j["breakdown-condition"] = rep.breakdown_condition;
        j["denominator-at-zero"] = rep.denominator_at_zero;
        j["denominator-generic"] = rep.denominator_generic;
        if (!rep.classification.empty()) j["classification"] = rep.classification;
        out << j.dump(2) << "\n";
        return 0;
    }
    throw arithmetic_error("hydra subcommand must be orbit, numen, or poles");
}

inline int run_cli(const RunConfig& cfg, std::ostream& out) {
    try {
        if (cfg.subcommand == "transform") return cmd_transform(cfg, out);
        if (cfg.subcommand == "product") return cmd_product(cfg, out);
        if (cfg.subcommand == "verify") return cmd_verify(cfg, out);
        if (cfg.subcommand == "breakdown") return cmd_breakdown(cfg, out);
        if (cfg.subcommand == "converge") return cmd_converge(cfg, out);
        if (cfg.subcommand == "hydra") return cmd_hydra(cfg, out);
        std::cerr << "unknown subcommand: " << cfg.subcommand << "\n";
        return 2;
    } catch (const no_solution& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const affine_solution_family& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const on_breakdown_variety& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const breakdown_hit& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const arithmetic_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace fseries
