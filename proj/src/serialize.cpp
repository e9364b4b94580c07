#include "sfols/serialize.hpp"

#include <charconv>
#include <fstream>

#include "sfols/planner.hpp"

namespace sfols {

using nlohmann::json;

namespace {

json vector_to_json(const Vector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Vector vector_from_json(const json& j) {
    if (!j.is_array())
        throw PreconditionError("serialize: expected a numeric array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    Eigen::Index i = 0;
    for (const auto& x : j) v[i++] = x.get<double>();
    return v;
}

void write_line(std::ofstream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) out << ',';
        out << cells[i];
    }
    out << '\n';
}

std::ofstream open_csv(const std::string& path, std::uint64_t seed) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path);
    out << "# seed=" << seed << '\n';
    return out;
}

std::vector<std::string> weight_header(const char* stem, Eigen::Index d) {
    std::vector<std::string> cols;
    for (Eigen::Index i = 0; i < d; ++i)
        cols.push_back(std::string(stem) + std::to_string(i));
    return cols;
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

json momdp_to_json(const TabularMOMDP& m) {
    json j;
    j["num_states"] = m.num_states;
    j["num_actions"] = m.num_actions;
    j["d"] = m.d;
    j["gamma"] = m.gamma;
    j["initial_dist"] = vector_to_json(m.initial_dist);
    json term = json::array();
    for (const auto t : m.terminal) term.push_back(static_cast<int>(t));
    j["terminal"] = term;
    json rows = json::array();
    for (const auto& row : m.rows) {
        json outs = json::array();
        for (const Outcome& o : row)
            outs.push_back({{"next", o.next},
                            {"prob", o.prob},
                            {"phi", vector_to_json(o.phi)}});
        rows.push_back(std::move(outs));
    }
    j["rows"] = rows;
    return j;
}

TabularMOMDP momdp_from_json(const json& j) {
    TabularMOMDP m;
    m.num_states = j.at("num_states").get<int>();
    m.num_actions = j.at("num_actions").get<int>();
    m.d = j.at("d").get<int>();
    m.gamma = j.at("gamma").get<double>();
    m.initial_dist = vector_from_json(j.at("initial_dist"));
    for (const auto& t : j.at("terminal"))
        m.terminal.push_back(static_cast<std::uint8_t>(t.get<int>()));
    for (const auto& row : j.at("rows")) {
        std::vector<Outcome> outs;
        for (const auto& o : row)
            outs.push_back({o.at("next").get<int>(),
                            o.at("prob").get<double>(),
                            vector_from_json(o.at("phi"))});
        m.rows.push_back(std::move(outs));
    }
    validate_momdp(m);
    return m;
}

json sf_set_to_json(const SFSet& set, bool include_tables) {
    json entries = json::array();
    for (std::size_t i = 0; i < set.size(); ++i) {
        const PolicyEntry& e = set[i];
        json je;
        je["source_weight"] = vector_to_json(e.source_weight);
        je["expected_sf"] = vector_to_json(e.expected_sf);
        je["solver_tag"] = to_string(e.tag);
        if (include_tables) {
            json t;
            t["num_states"] = e.sf_table.num_states;
            t["num_actions"] = e.sf_table.num_actions;
            t["d"] = e.sf_table.d;
            json psi = json::array();
            for (Eigen::Index r = 0; r < e.sf_table.psi.rows(); ++r)
                for (Eigen::Index c = 0; c < e.sf_table.psi.cols(); ++c)
                    psi.push_back(e.sf_table.psi(r, c));
            t["psi"] = std::move(psi);
            je["sf_table"] = std::move(t);
        }
        entries.push_back(std::move(je));
    }
    return entries;
}

SFSet sf_set_from_json(const json& j, const TabularMOMDP& m, double tol) {
    if (!j.is_array())
        throw PreconditionError("sf_set_from_json: expected an array of "
                                "entries");
    SFSet set;
    for (const auto& je : j) {
        PolicyEntry e;
        e.source_weight = vector_from_json(je.at("source_weight"));
        e.tag = solver_tag_from_string(je.at("solver_tag").get<std::string>());
        if (je.contains("sf_table")) {
            const auto& t = je.at("sf_table");
            e.sf_table.num_states = t.at("num_states").get<int>();
            e.sf_table.num_actions = t.at("num_actions").get<int>();
            e.sf_table.d = t.at("d").get<int>();
            const auto& psi = t.at("psi");
            const Eigen::Index rows =
                static_cast<Eigen::Index>(e.sf_table.num_states) *
                e.sf_table.num_actions;
            if (static_cast<Eigen::Index>(psi.size()) != rows * e.sf_table.d)
                throw PreconditionError("sf_set_from_json: table size does "
                                        "not match its dimensions");
            e.sf_table.psi.resize(rows, e.sf_table.d);
            Eigen::Index k = 0;
            for (const auto& x : psi) {
                e.sf_table.psi(k / e.sf_table.d, k % e.sf_table.d) =
                    x.get<double>();
                ++k;
            }
            e.expected_sf = vector_from_json(je.at("expected_sf"));
            // Greedy one-step reconstruction; exact for planner entries.
            e.policy.resize(static_cast<std::size_t>(m.num_states), 0);
            for (int s = 0; s < m.num_states; ++s) {
                double best = -kInf;
                for (int a = 0; a < m.num_actions; ++a) {
                    const double q =
                        e.sf_table.row(s, a).dot(e.source_weight);
                    if (q > best) {
                        best = q;
                        e.policy[static_cast<std::size_t>(s)] = a;
                    }
                }
            }
        } else {
            const auto vi = value_iteration(m, e.source_weight, tol);
            e.policy = vi.policy;
            e.sf_table = policy_sf_evaluation(m, e.policy, tol);
            e.expected_sf = expected_sf(m, e.sf_table, e.policy);
            e.tag = SolverTag::Planner;
        }
        if (!set.contains(e.expected_sf)) set.insert(std::move(e));
    }
    return set;
}

void write_iterations_csv(const std::string& path, const RunResult& res,
                          std::uint64_t seed, int d) {
    std::ofstream out = open_csv(path, seed);
    std::vector<std::string> header{"iteration"};
    for (auto& c : weight_header("w", d)) header.push_back(c);
    for (const char* c : {"psi_size", "mean_v_smp", "mean_v_gpi",
                          "hypervolume", "max_queue_priority"})
        header.push_back(c);
    write_line(out, header);
    for (const IterationRow& row : res.iterations) {
        std::vector<std::string> cells{std::to_string(row.iteration)};
        for (Eigen::Index i = 0; i < row.solved_weight.size(); ++i)
            cells.push_back(format_double(row.solved_weight[i]));
        cells.push_back(std::to_string(row.psi_size));
        cells.push_back(format_double(row.mean_v_smp));
        cells.push_back(format_double(row.mean_v_gpi));
        cells.push_back(format_double(row.hypervolume));
        cells.push_back(format_double(row.max_queue_priority));
        write_line(out, cells);
    }
}

void write_eval_csv(const std::string& path, const EvaluationReport& rep,
                    std::uint64_t seed, int d) {
    std::ofstream out = open_csv(path, seed);
    std::vector<std::string> header = weight_header("w", d);
    for (const char* c :
         {"v_smp", "v_gpi", "v_star", "gap_smp", "gap_gpi"})
        header.push_back(c);
    write_line(out, header);
    for (const EvalRow& row : rep.rows) {
        std::vector<std::string> cells;
        for (Eigen::Index i = 0; i < row.w.size(); ++i)
            cells.push_back(format_double(row.w[i]));
        cells.push_back(format_double(row.v_smp));
        cells.push_back(format_double(row.v_gpi));
        cells.push_back(format_double(row.v_star));
        cells.push_back(format_double(row.gap_smp));
        cells.push_back(format_double(row.gap_gpi));
        write_line(out, cells);
    }
}

void write_lifelong_csv(const std::string& path,
                        const std::vector<LifelongPhase>& trace,
                        std::uint64_t seed, int d) {
    std::ofstream out = open_csv(path, seed);
    std::vector<std::string> header{"phase"};
    for (auto& c : weight_header("w", d)) header.push_back(c);
    for (const char* c : {"mean_return", "stderr", "v_gpi_exact"})
        header.push_back(c);
    write_line(out, header);
    for (const LifelongPhase& ph : trace) {
        std::vector<std::string> cells{std::to_string(ph.phase)};
        for (Eigen::Index i = 0; i < ph.weight.size(); ++i)
            cells.push_back(format_double(ph.weight[i]));
        cells.push_back(format_double(ph.mean_return));
        cells.push_back(format_double(ph.std_error));
        cells.push_back(format_double(ph.v_gpi));
        write_line(out, cells);
    }
}

} // namespace sfols
