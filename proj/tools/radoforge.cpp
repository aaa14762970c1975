#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "radoforge/io.hpp"

using namespace radoforge;

namespace {

std::uint64_t parse_u64(const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw DomainError("not a nonnegative integer: '" + s + "'");
    try {
        return std::stoull(s);
    } catch (const std::out_of_range&) {
        throw DomainError("integer out of range: '" + s + "'");
    }
}

Int parse_int(const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw DomainError("not a nonnegative integer: '" + s + "'");
    return Int(s);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = text.find(sep, start);
        if (end == std::string::npos) {
            parts.push_back(text.substr(start));
            break;
        }
        parts.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return parts;
}

// Accepts repeated flags and comma-separated values; "--A 5,13 --A 17" is
// the list [5, 13, 17]. An absent flag is the empty list.
std::vector<Int> parse_int_list(const std::vector<std::string>& args) {
    std::vector<Int> out;
    for (const auto& arg : args)
        for (const auto& piece : split(arg, ','))
            if (!piece.empty()) out.push_back(parse_int(piece));
    return out;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& text) {
    std::vector<std::uint64_t> out;
    if (text.empty() || text == "none") return out;
    for (const auto& piece : split(text, ','))
        if (!piece.empty()) out.push_back(parse_u64(piece));
    return out;
}

// RADO_FORGE_CAP overrides the enumeration cap; a --cap value overrides both.
SizeCaps make_caps(std::uint64_t cap_flag) {
    SizeCaps caps;
    if (const char* env = std::getenv("RADO_FORGE_CAP")) caps.max_enum = parse_u64(env);
    if (cap_flag) caps.max_enum = cap_flag;
    return caps;
}

// Model specs: "rado", "prime-qr:+1", "prime-qr:-1", "seeded:7",
// "seeded-tournament:7", "paley:p=5,E=3^inf,d=2", "paley-tournament:p=7,E=3^inf".
// A seeded spec without an explicit seed takes fallback_seed.
OraclePtr parse_model(const std::string& spec, std::uint64_t fallback_seed, const SizeCaps& caps) {
    const std::size_t colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);

    if (name == "rado") {
        if (!rest.empty()) throw DomainError("model rado takes no parameters");
        return rado_binary();
    }
    if (name == "prime-qr") {
        if (rest.empty() || rest == "+1") return prime_qr(+1);
        if (rest == "-1") return prime_qr(-1);
        throw DomainError("prime-qr sign must be +1 or -1, got '" + rest + "'");
    }
    if (name == "seeded" || name == "seeded-tournament") {
        const std::uint64_t seed = rest.empty() ? fallback_seed : parse_u64(rest);
        return seeded_random(seed, name == "seeded-tournament");
    }
    if (name == "paley" || name == "paley-tournament") {
        std::uint64_t p = 0, d = 2;
        std::string e_text;
        std::string* open_value = nullptr; // exponent sets may contain commas
        for (const auto& piece : split(rest, ',')) {
            const std::size_t eq = piece.find('=');
            if (eq == std::string::npos) {
                if (!open_value) throw DomainError("expected key=value, got '" + piece + "'");
                *open_value += "," + piece;
                continue;
            }
            const std::string key = piece.substr(0, eq);
            const std::string val = piece.substr(eq + 1);
            open_value = nullptr;
            if (key == "p") {
                p = parse_u64(val);
            } else if (key == "E") {
                e_text = val;
                open_value = &e_text;
            } else if (key == "d") {
                d = parse_u64(val);
            } else {
                throw DomainError("unknown model parameter '" + key + "'");
            }
        }
        if (p == 0) throw DomainError("paley model requires p=<prime>");
        if (e_text.empty()) throw DomainError("paley model requires E=<exponent set>");
        return infinite_paley(p, ExponentSet::parse(e_text), d, name == "paley-tournament", caps);
    }
    throw DomainError("unknown model '" + name +
                      "'; expected rado, prime-qr, seeded, seeded-tournament, paley or "
                      "paley-tournament");
}

std::pair<std::uint64_t, std::uint32_t> prime_power_split(std::uint64_t q) {
    if (q < 2) throw DomainError("q must be a prime power, got " + std::to_string(q));
    const auto factors = factorize_u64(q);
    if (factors.size() != 1)
        throw DomainError("q must be a prime power, got " + std::to_string(q));
    return {factors[0].first, factors[0].second};
}

struct OutputOpts {
    std::string format = "text";
    std::string out;
};

void add_output_opts(CLI::App* cmd, OutputOpts& o) {
    cmd->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"text", "csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--out", o.out, "Write to this file instead of stdout");
}

struct BudgetOpts {
    SearchBudget budget;
};

void add_budget_opts(CLI::App* cmd, BudgetOpts& b) {
    cmd->add_option("--max-candidates", b.budget.max_candidates,
                    "Vertices scanned per witness search")
        ->capture_default_str();
    cmd->add_option("--max-level", b.budget.max_level, "Highest tower level a scan may enter")
        ->capture_default_str();
    cmd->add_option("--max-bits", b.budget.max_bits, "Bit-size cap for constructed witnesses")
        ->capture_default_str();
}

int cmd_graph(std::uint64_t p, std::uint32_t e, std::uint64_t d, bool tournament, bool matrix,
              const OutputOpts& o, std::uint64_t cap) {
    const SizeCaps caps = make_caps(cap);
    const FieldCtxPtr ctx = field_create(p, e, caps);
    std::string content;
    if (tournament) {
        if (d != 2) throw DomainError("tournaments require d = 2");
        const Tournament t = paley_tournament(ctx);
        if (o.format == "json") {
            content = tournament_json(t);
            content += '\n';
        } else if (o.format == "csv") {
            std::vector<std::vector<std::string>> rows = {{"from", "to"}};
            for (auto& row : arc_rows(t)) rows.push_back(std::move(row));
            content = csv_table(rows);
        } else {
            content = arc_list_text(t);
        }
    } else {
        const FiniteGraph g = d == 2 ? paley_graph(ctx) : gen_paley_graph(ctx, d);
        if (o.format == "json") {
            content = graph_json(g);
            content += '\n';
        } else if (o.format == "csv") {
            if (matrix) {
                content = adjacency_matrix_csv(g);
            } else {
                std::vector<std::vector<std::string>> rows = {{"u", "v"}};
                for (auto& row : edge_rows(g)) rows.push_back(std::move(row));
                content = csv_table(rows);
            }
        } else {
            content = matrix ? adjacency_matrix_text(g) : edge_list_text(g);
        }
    }
    write_output(o.out, content);
    return 0;
}

int cmd_weil(std::uint64_t q_max, std::uint32_t k_min, std::uint32_t k_max,
             const std::string& d_text, unsigned threads, const OutputOpts& o,
             std::uint64_t cap) {
    const SizeCaps caps = make_caps(cap);
    const std::vector<std::uint64_t> d_set = parse_u64_list(d_text);

    WeilSweep sweep = weil_sweep(q_max, k_max, d_set, threads, caps);

    // The module sweeps k >= 2; a requested k = 1 adds the zero-sum rows.
    // Every 1-element root set is affine-equivalent to {0}, and the full
    // character sum over GF(q) vanishes, so each (q, d) gets one row with
    // sum 0 against the bound (k-1) sqrt(q) = 0.
    if (k_min <= 1 && k_max >= 1) {
        for (const auto& [q, e] : prime_powers_upto(q_max)) {
            const std::uint64_t p = factorize_u64(q)[0].first;
            FieldCtxPtr ctx;
            for (const std::uint64_t d : d_set) {
                if (d < 2 || (q - 1) % d != 0) continue;
                if (!ctx) ctx = field_create(p, e, caps);
                const Character chi(ctx, d);
                const CyclotomicSum sum = char_sum(chi, {ctx->zero()});
                const BoundReport br = weil_check(sum, 1, ctx->size().q);
                sweep.rows.push_back({q, p, e, d, 1, 1, sum.abs(), br.bound, br.slack,
                                      br.holds ? 0u : 1u});
                sweep.sets_checked += 1;
                if (!br.holds) sweep.violations += 1;
            }
        }
        std::stable_sort(sweep.rows.begin(), sweep.rows.end(),
                         [](const WeilRow& a, const WeilRow& b) {
                             return std::tie(a.q, a.d, a.k) < std::tie(b.q, b.d, b.k);
                         });
    }

    std::string content;
    if (o.format == "json") {
        content = weil_sweep_json(sweep);
        content += '\n';
    } else if (o.format == "csv") {
        std::vector<std::vector<std::string>> rows = {weil_header()};
        for (const auto& r : sweep.rows) rows.push_back(weil_row_fields(r));
        content = csv_table(rows);
    } else {
        std::vector<std::vector<std::string>> rows;
        rows.reserve(sweep.rows.size());
        for (const auto& r : sweep.rows) rows.push_back(weil_row_fields(r));
        content = text_table(weil_header(), rows);
        content += "sets_checked: " + std::to_string(sweep.sets_checked) + "\n";
        content += "violations: " + std::to_string(sweep.violations) + "\n";
    }
    write_output(o.out, content);
    return sweep.violations ? 1 : 0;
}

int cmd_isomorphism(const std::string& left_spec, const std::string& right_spec,
                    std::uint32_t steps, const SearchBudget& budget, std::uint64_t seed,
                    const OutputOpts& o, std::uint64_t cap) {
    const SizeCaps caps = make_caps(cap);
    const OraclePtr left = parse_model(left_spec, seed, caps);
    const OraclePtr right = parse_model(right_spec, seed, caps);

    const PartialIso iso = build_iso_partial(*left, *right, steps, budget);
    verify_iso(*left, *right, iso); // CheckFailure propagates as exit 1

    std::string content;
    if (o.format == "json") {
        content = partial_iso_json(iso, left->descriptor(), right->descriptor(), true);
        content += '\n';
    } else {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < iso.pairs.size(); ++i) {
            rows.push_back({std::to_string(i + 1), iso.forth[i] ? "forth" : "back",
                            to_string(iso.pairs[i].first), to_string(iso.pairs[i].second)});
        }
        const std::vector<std::string> header = {"step", "direction", "left", "right"};
        if (o.format == "csv") {
            std::vector<std::vector<std::string>> all = {header};
            all.insert(all.end(), rows.begin(), rows.end());
            content = csv_table(all);
        } else {
            content = text_table(header, rows);
            content += "steps_completed: " + std::to_string(iso.steps_completed) + " of " +
                       std::to_string(steps) + "\n";
            content += "verified: true\n";
            if (!iso.stopped_reason.empty()) content += "stopped: " + iso.stopped_reason + "\n";
        }
    }
    write_output(o.out, content);
    return iso.stopped_reason.empty() ? 0 : 2;
}

int cmd_witness(const std::string& model_spec, const std::vector<std::string>& a_args,
                const std::vector<std::string>& b_args, const SearchBudget& budget,
                std::uint64_t seed, const OutputOpts& o, std::uint64_t cap) {
    const SizeCaps caps = make_caps(cap);
    const OraclePtr model = parse_model(model_spec, seed, caps);
    ExtensionQuery query;
    query.A = parse_int_list(a_args);
    query.B = parse_int_list(b_args);
    const Int w = find_witness(*model, query, budget);

    std::string content;
    if (o.format == "json") {
        nlohmann::json j;
        j["model"] = nlohmann::json::parse(model->descriptor(), nullptr, false);
        j["A"] = nlohmann::json::array();
        for (const auto& a : query.A) j["A"].push_back(to_string(a));
        j["B"] = nlohmann::json::array();
        for (const auto& b : query.B) j["B"].push_back(to_string(b));
        j["witness"] = to_string(w);
        j["decoded"] = model->decode(w);
        content = j.dump(2);
        content += '\n';
    } else if (o.format == "csv") {
        content = csv_row({"witness"}) + csv_row({to_string(w)});
    } else {
        content = to_string(w) + "\n";
    }
    write_output(o.out, content);
    return 0;
}

int cmd_counts(std::uint64_t p, std::uint32_t e, std::uint64_t d,
               const std::vector<std::string>& a_args, const std::vector<std::string>& b_args,
               const std::string& levels_text, const OutputOpts& o, std::uint64_t cap) {
    const SizeCaps caps = make_caps(cap);
    const std::vector<Int> a_idx = parse_int_list(a_args);
    const std::vector<Int> b_idx = parse_int_list(b_args);
    std::string content;

    const std::vector<std::uint64_t> levels64 = parse_u64_list(levels_text);
    if (!levels64.empty()) {
        EmbeddingLattice lattice(p, caps);
        std::vector<std::uint32_t> levels;
        levels.reserve(levels64.size());
        for (const std::uint64_t l : levels64) levels.push_back(static_cast<std::uint32_t>(l));
        const auto rows = asymptotic_check(lattice, d, a_idx, b_idx, levels);
        if (o.format == "json") {
            content = asymptotic_rows_json(rows);
            content += '\n';
        } else {
            std::vector<std::vector<std::string>> out_rows;
            for (const auto& r : rows) out_rows.push_back(asymptotic_row_fields(r));
            if (o.format == "csv") {
                std::vector<std::vector<std::string>> all = {asymptotic_header()};
                all.insert(all.end(), out_rows.begin(), out_rows.end());
                content = csv_table(all);
            } else {
                content = text_table(asymptotic_header(), out_rows);
            }
        }
        write_output(o.out, content);
        return 0;
    }

    const FieldCtxPtr ctx = field_create(p, e, caps);
    std::vector<FieldElem> A, B;
    for (const auto& i : a_idx) A.push_back(ctx->element_at(i));
    for (const auto& i : b_idx) B.push_back(ctx->element_at(i));
    const WitnessReport report = count_witnesses(ctx, d, A, B);
    const bool with_bt = d == 2;
    BTReport bt;
    if (with_bt) bt = bt_check(report);

    if (o.format == "json") {
        content = witness_report_json(report, with_bt ? &bt : nullptr);
        content += '\n';
    } else if (o.format == "csv") {
        content = csv_table({witness_header(with_bt),
                             witness_row_fields(report, with_bt ? &bt : nullptr)});
    } else {
        content = text_table(witness_header(with_bt),
                             {witness_row_fields(report, with_bt ? &bt : nullptr)});
    }
    write_output(o.out, content);
    return 0;
}

int cmd_symmetry(std::uint64_t q, bool with_a, bool with_aut, std::uint32_t aut_cap,
                 const OutputOpts& o, std::uint64_t cap) {
    const SizeCaps caps = make_caps(cap);
    const auto [p, e] = prime_power_split(q);
    const FieldCtxPtr ctx = field_create(p, e, caps);
    const FiniteGraph g = paley_graph(ctx);
    const AsymmetryReport report = min_delta_bound_check(g, with_a);

    Int aut_count, group_order;
    if (with_aut) {
        aut_count = aut_bruteforce(g, aut_cap);
        group_order = adl1_order(ctx);
        if (aut_count != group_order)
            throw CheckFailure("backtracking found " + to_string(aut_count) +
                               " automorphisms but the affine semilinear group has order " +
                               to_string(group_order));
    }

    std::string content;
    if (o.format == "json") {
        nlohmann::json j = nlohmann::json::parse(asymmetry_report_json(report));
        j["q"] = q;
        if (with_aut) {
            j["aut_order"] = to_string(aut_count);
            j["adl1_order"] = to_string(group_order);
        }
        content = j.dump(2);
        content += '\n';
    } else {
        std::vector<std::string> header = asymmetry_header();
        std::vector<std::string> row = asymmetry_row_fields(report);
        if (with_aut) {
            header.insert(header.end(), {"aut_order", "adl1_order"});
            row.push_back(to_string(aut_count));
            row.push_back(to_string(group_order));
        }
        if (o.format == "csv")
            content = csv_table({header, row});
        else
            content = text_table(header, {row});
    }
    write_output(o.out, content);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Paley graphs, character sums and countable adjacency models"};
    app.set_version_flag("--version", "radoforge 0.1.0");
    app.require_subcommand(1);
    int code = 0;

    // graph
    auto* graph = app.add_subcommand("graph", "Emit a (generalised) Paley graph or tournament");
    struct {
        std::uint64_t p = 0;
        std::uint32_t e = 1;
        std::uint64_t d = 2;
        bool tournament = false;
        bool matrix = false;
        std::uint64_t cap = 0;
        OutputOpts out;
    } g_opt;
    graph->add_option("--p", g_opt.p, "Field characteristic")->required();
    graph->add_option("--e", g_opt.e, "Extension degree")->capture_default_str();
    graph->add_option("--d", g_opt.d, "Power-residue order")->capture_default_str();
    graph->add_flag("--tournament", g_opt.tournament, "Paley tournament (q = 3 mod 4, d = 2)");
    graph->add_flag("--matrix", g_opt.matrix, "Adjacency matrix instead of an edge list");
    graph->add_option("--cap", g_opt.cap, "Override the field enumeration cap");
    add_output_opts(graph, g_opt.out);
    graph->callback([&] {
        code = cmd_graph(g_opt.p, g_opt.e, g_opt.d, g_opt.tournament, g_opt.matrix, g_opt.out,
                         g_opt.cap);
    });

    // weil-sweep
    auto* weil = app.add_subcommand("weil-sweep",
                                    "Check |sum chi(x-c_1)...chi(x-c_k)| <= (k-1) sqrt(q)");
    struct {
        std::uint64_t q_max = 343;
        std::uint32_t k_min = 2;
        std::uint32_t k_max = 4;
        std::string d_set = "2";
        unsigned threads = 1;
        std::uint64_t cap = 0;
        OutputOpts out;
    } w_opt;
    weil->add_option("--q-max", w_opt.q_max, "Largest prime power")->capture_default_str();
    weil->add_option("--k-min", w_opt.k_min, "Smallest root-set size")->capture_default_str();
    weil->add_option("--k-max", w_opt.k_max, "Largest root-set size")->capture_default_str();
    weil->add_option("--d", w_opt.d_set, "Character orders, comma-separated ('none' for empty)")
        ->capture_default_str();
    weil->add_option("--threads", w_opt.threads, "Worker threads")->capture_default_str();
    weil->add_option("--cap", w_opt.cap, "Override the field enumeration cap");
    add_output_opts(weil, w_opt.out);
    weil->callback([&] {
        code = cmd_weil(w_opt.q_max, w_opt.k_min, w_opt.k_max, w_opt.d_set, w_opt.threads,
                        w_opt.out, w_opt.cap);
    });

    // isomorphism
    auto* iso = app.add_subcommand("isomorphism",
                                   "Back-and-forth partial isomorphism between two models");
    struct {
        std::string left, right;
        std::uint32_t steps = 20;
        std::uint64_t seed = 0;
        std::uint64_t cap = 0;
        BudgetOpts budget;
        OutputOpts out;
    } i_opt;
    iso->add_option("left", i_opt.left, "Left model spec")->required();
    iso->add_option("right", i_opt.right, "Right model spec")->required();
    iso->add_option("--steps", i_opt.steps, "Extension steps")->capture_default_str();
    iso->add_option("--seed", i_opt.seed, "Seed for 'seeded' specs without one")
        ->capture_default_str();
    iso->add_option("--cap", i_opt.cap, "Override the field enumeration cap");
    add_budget_opts(iso, i_opt.budget);
    add_output_opts(iso, i_opt.out);
    iso->callback([&] {
        code = cmd_isomorphism(i_opt.left, i_opt.right, i_opt.steps, i_opt.budget.budget,
                               i_opt.seed, i_opt.out, i_opt.cap);
    });

    // witness
    auto* wit = app.add_subcommand("witness", "One extension step inside a countable model");
    struct {
        std::string model;
        std::vector<std::string> A, B;
        std::uint64_t seed = 0;
        std::uint64_t cap = 0;
        BudgetOpts budget;
        OutputOpts out;
    } wit_opt;
    wit->add_option("--model", wit_opt.model, "Model spec")->required();
    wit->add_option("--A", wit_opt.A, "Required neighbours (handles, comma-separated)");
    wit->add_option("--B", wit_opt.B, "Required non-neighbours (handles, comma-separated)");
    wit->add_option("--seed", wit_opt.seed, "Seed for 'seeded' specs without one")
        ->capture_default_str();
    wit->add_option("--cap", wit_opt.cap, "Override the field enumeration cap");
    add_budget_opts(wit, wit_opt.budget);
    add_output_opts(wit, wit_opt.out);
    wit->callback([&] {
        code = cmd_witness(wit_opt.model, wit_opt.A, wit_opt.B, wit_opt.budget.budget,
                           wit_opt.seed, wit_opt.out, wit_opt.cap);
    });

    // counts
    auto* counts = app.add_subcommand("counts",
                                      "Witness census over one finite field, with the "
                                      "Bollobas-Thomason bracket at d = 2");
    struct {
        std::uint64_t p = 0;
        std::uint32_t e = 1;
        std::uint64_t d = 2;
        std::vector<std::string> A, B;
        std::string levels;
        std::uint64_t cap = 0;
        OutputOpts out;
    } c_opt;
    counts->add_option("--p", c_opt.p, "Field characteristic")->required();
    counts->add_option("--e", c_opt.e, "Extension degree")->capture_default_str();
    counts->add_option("--d", c_opt.d, "Power-residue order")->capture_default_str();
    counts->add_option("--A", c_opt.A, "Neighbour constraints (element indices)");
    counts->add_option("--B", c_opt.B, "Non-neighbour constraints (element indices)");
    counts->add_option("--levels", c_opt.levels,
                       "Recount across these tower levels (base elements embedded upward)");
    counts->add_option("--cap", c_opt.cap, "Override the field enumeration cap");
    add_output_opts(counts, c_opt.out);
    counts->callback([&] {
        code = cmd_counts(c_opt.p, c_opt.e, c_opt.d, c_opt.A, c_opt.B, c_opt.levels, c_opt.out,
                          c_opt.cap);
    });

    // symmetry
    auto* sym = app.add_subcommand("symmetry", "Neighbourhood-difference report for P(q)");
    struct {
        std::uint64_t q = 0;
        bool with_a = false;
        bool with_aut = false;
        std::uint32_t aut_cap = 40;
        std::uint64_t cap = 0;
        OutputOpts out;
    } s_opt;
    sym->add_option("--paley", s_opt.q, "Prime power q = 1 mod 4")->required();
    sym->add_flag("--with-a", s_opt.with_a, "Also compute the exact edge-change distance A(G)");
    sym->add_flag("--aut", s_opt.with_aut,
                  "Cross-check |Aut| by backtracking against the affine semilinear order");
    sym->add_option("--aut-cap", s_opt.aut_cap, "Vertex cap for the backtracking search")
        ->capture_default_str();
    sym->add_option("--cap", s_opt.cap, "Override the field enumeration cap");
    add_output_opts(sym, s_opt.out);
    sym->callback([&] {
        code = cmd_symmetry(s_opt.q, s_opt.with_a, s_opt.with_aut, s_opt.aut_cap, s_opt.out,
                            s_opt.cap);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const CheckFailure& e) {
        std::fprintf(stderr, "check failed: %s\n", e.what());
        return 1;
    } catch (const BudgetError& e) {
        std::fprintf(stderr, "budget exhausted: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return code;
}
