#include "radoforge/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include <json.hpp>

namespace radoforge {

namespace {

using nlohmann::json;

json parse_or_keep(const std::string& s) {
    json j = json::parse(s, nullptr, false);
    if (j.is_discarded()) return json(s);
    return j;
}

json int_str(const Int& v) { return json(to_string(v)); }

} // namespace

std::string fmt_double(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    // a value that rounds to zero keeps no sign
    if (buf[0] == '-' && std::strtod(buf, nullptr) == 0.0) return buf + 1;
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_field(fields[i]);
    }
    out += "\r\n";
    return out;
}

std::string csv_table(const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    for (const auto& row : rows) out += csv_row(row);
    return out;
}

std::string text_table(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size() && i < width.size(); ++i)
            width[i] = std::max(width[i], row[i].size());

    auto emit = [&](const std::vector<std::string>& row, std::string& out) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += "  ";
            out += row[i];
            if (i + 1 < row.size()) out.append(width[i] - row[i].size(), ' ');
        }
        out += '\n';
    };

    std::string out;
    emit(header, out);
    std::vector<std::string> rule(header.size());
    for (std::size_t i = 0; i < header.size(); ++i) rule[i].assign(width[i], '-');
    emit(rule, out);
    for (const auto& row : rows) emit(row, out);
    return out;
}

std::string edge_list_text(const FiniteGraph& g) {
    std::string out;
    for (const auto& [u, v] : g.edges())
        out += std::to_string(u) + " " + std::to_string(v) + "\n";
    return out;
}

std::string arc_list_text(const Tournament& t) {
    std::string out;
    for (const auto& row : arc_rows(t)) out += row[0] + " " + row[1] + "\n";
    return out;
}

std::string adjacency_matrix_text(const FiniteGraph& g) {
    std::string out;
    for (std::uint32_t u = 0; u < g.n(); ++u) {
        for (std::uint32_t v = 0; v < g.n(); ++v)
            out += (u != v && g.adjacent(u, v)) ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::string adjacency_matrix_csv(const FiniteGraph& g) {
    std::string out;
    std::vector<std::string> row(g.n());
    for (std::uint32_t u = 0; u < g.n(); ++u) {
        for (std::uint32_t v = 0; v < g.n(); ++v)
            row[v] = (u != v && g.adjacent(u, v)) ? "1" : "0";
        out += csv_row(row);
    }
    return out;
}

std::vector<std::vector<std::string>> edge_rows(const FiniteGraph& g) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(g.edge_count());
    for (const auto& [u, v] : g.edges())
        rows.push_back({std::to_string(u), std::to_string(v)});
    return rows;
}

std::vector<std::vector<std::string>> arc_rows(const Tournament& t) {
    std::vector<std::vector<std::string>> rows;
    for (std::uint32_t u = 0; u < t.n(); ++u)
        for (std::uint32_t v = u + 1; v < t.n(); ++v) {
            if (t.arc(u, v))
                rows.push_back({std::to_string(u), std::to_string(v)});
            else
                rows.push_back({std::to_string(v), std::to_string(u)});
        }
    return rows;
}

std::string graph_json(const FiniteGraph& g) {
    json j;
    j["n"] = g.n();
    j["edge_count"] = g.edge_count();
    j["edges"] = json::array();
    for (const auto& [u, v] : g.edges()) j["edges"].push_back({u, v});
    if (g.has_labels()) {
        j["labels"] = json::array();
        for (const auto& l : g.labels()) j["labels"].push_back(l.str());
    }
    return j.dump(2);
}

std::string tournament_json(const Tournament& t) {
    json j;
    j["n"] = t.n();
    j["arcs"] = json::array();
    for (const auto& row : arc_rows(t))
        j["arcs"].push_back({std::stoul(row[0]), std::stoul(row[1])});
    if (t.has_labels()) {
        j["labels"] = json::array();
        for (const auto& l : t.labels()) j["labels"].push_back(l.str());
    }
    return j.dump(2);
}

std::string srg_json(const SrgParams& s) {
    json j;
    j["v"] = s.v;
    j["k"] = s.k;
    j["lambda"] = s.lambda;
    j["mu"] = s.mu;
    return j.dump(2);
}

std::string witness_report_json(const WitnessReport& r, const BTReport* bt) {
    json j;
    j["p"] = r.p;
    j["e"] = r.e;
    j["d"] = r.d;
    j["n"] = r.n;
    j["q"] = int_str(r.q);
    j["S_count"] = int_str(r.S_count);
    j["s"] = int_str(r.s);
    j["t"] = int_str(r.t);
    j["t_minus_s"] = int_str(r.t - r.s);
    if (r.witness) {
        j["witness"] = {{"index", int_str(r.witness->index())},
                        {"value", r.witness->str()}};
    } else {
        j["witness"] = nullptr;
    }
    if (bt) {
        j["bt"] = {{"expected", bt->expected},
                   {"deviation", bt->deviation},
                   {"bound", bt->bound},
                   {"holds", bt->holds}};
    }
    return j.dump(2);
}

std::string asymmetry_report_json(const AsymmetryReport& r) {
    json j;
    j["n"] = r.n;
    j["delta_min"] = r.delta_min;
    j["bound"] = r.bound;
    j["a_of_g"] = r.a_of_g ? json(*r.a_of_g) : json(nullptr);
    j["is_delta_graph"] = r.is_delta_graph;
    return j.dump(2);
}

std::string partial_iso_json(const PartialIso& iso, const std::string& left_descriptor,
                             const std::string& right_descriptor, bool verified) {
    json j;
    j["left"] = parse_or_keep(left_descriptor);
    j["right"] = parse_or_keep(right_descriptor);
    j["steps_completed"] = iso.steps_completed;
    j["stopped_reason"] = iso.stopped_reason.empty() ? json(nullptr) : json(iso.stopped_reason);
    j["pairs"] = json::array();
    for (const auto& [l, r] : iso.pairs) j["pairs"].push_back({int_str(l), int_str(r)});
    j["forth"] = json::array();
    for (bool f : iso.forth) j["forth"].push_back(f);
    j["verified"] = verified;
    return j.dump(2);
}

std::string weil_sweep_json(const WeilSweep& sweep) {
    json j;
    j["rows"] = json::array();
    for (const auto& r : sweep.rows) {
        j["rows"].push_back({{"q", r.q},
                             {"p", r.p},
                             {"e", r.e},
                             {"d", r.d},
                             {"k", r.k},
                             {"sets", r.sets},
                             {"max_sum_abs", r.max_sum_abs},
                             {"bound", r.bound},
                             {"min_slack", r.min_slack},
                             {"violations", r.violations}});
    }
    j["sets_checked"] = sweep.sets_checked;
    j["violations"] = sweep.violations;
    return j.dump(2);
}

std::string asymptotic_rows_json(const std::vector<AsymptoticRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back({{"e", r.e},
                       {"q", int_str(r.q)},
                       {"S_count", int_str(r.S_count)},
                       {"t_minus_s", int_str(r.t_minus_s)},
                       {"ratio", r.ratio}});
    }
    return arr.dump(2);
}

std::vector<std::string> weil_header() {
    return {"q", "p", "e", "d", "k", "sets", "max_sum_abs", "bound", "min_slack", "violations"};
}

std::vector<std::string> weil_row_fields(const WeilRow& r) {
    return {std::to_string(r.q),
            std::to_string(r.p),
            std::to_string(r.e),
            std::to_string(r.d),
            std::to_string(r.k),
            std::to_string(r.sets),
            fmt_double(r.max_sum_abs),
            fmt_double(r.bound),
            fmt_double(r.min_slack),
            std::to_string(r.violations)};
}

std::vector<std::string> witness_header(bool with_bt) {
    std::vector<std::string> h = {"p", "e", "d", "n", "q", "S_count", "s", "t", "witness"};
    if (with_bt) {
        h.insert(h.end(), {"bt_expected", "bt_deviation", "bt_bound", "bt_holds"});
    }
    return h;
}

std::vector<std::string> witness_row_fields(const WitnessReport& r, const BTReport* bt) {
    std::vector<std::string> row = {std::to_string(r.p),
                                    std::to_string(r.e),
                                    std::to_string(r.d),
                                    std::to_string(r.n),
                                    to_string(r.q),
                                    to_string(r.S_count),
                                    to_string(r.s),
                                    to_string(r.t),
                                    r.witness ? to_string(r.witness->index()) : "none"};
    if (bt) {
        row.push_back(fmt_double(bt->expected));
        row.push_back(fmt_double(bt->deviation));
        row.push_back(fmt_double(bt->bound));
        row.push_back(bt->holds ? "true" : "false");
    }
    return row;
}

std::vector<std::string> asymmetry_header() {
    return {"n", "delta_min", "bound", "a_of_g", "is_delta_graph"};
}

std::vector<std::string> asymmetry_row_fields(const AsymmetryReport& r) {
    return {std::to_string(r.n), std::to_string(r.delta_min), std::to_string(r.bound),
            r.a_of_g ? std::to_string(*r.a_of_g) : "none",
            r.is_delta_graph ? "true" : "false"};
}

std::vector<std::string> asymptotic_header() {
    return {"e", "q", "S_count", "t_minus_s", "ratio"};
}

std::vector<std::string> asymptotic_row_fields(const AsymptoticRow& r) {
    return {std::to_string(r.e), to_string(r.q), to_string(r.S_count), to_string(r.t_minus_s),
            fmt_double(r.ratio)};
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::fwrite(content.data(), 1, content.size(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot open output file: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DomainError("failed writing output file: " + path);
}

} // namespace radoforge
