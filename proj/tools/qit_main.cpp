#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qit/json_io.hpp"
#include "qit/measures.hpp"
#include "qit/protocol.hpp"
#include "qit/tomography.hpp"
#include "qit/version.hpp"

namespace {

using nlohmann::ordered_json;
using namespace qit;

// Exit codes: 0 success, 2 usage or malformed input, 3 unphysical state,
// 4 numerical failure (singular system, undefined collapse, ...).
constexpr int kExitUsage = 2;
constexpr int kExitUnphysical = 3;
constexpr int kExitNumerical = 4;

struct RunConfig {
    std::string out_path;   // empty = stdout
    std::string format = "json";
};

void write_output(const RunConfig& cfg, const std::string& content) {
    if (cfg.out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream f(cfg.out_path, std::ios::binary);
    if (!f) throw FormatError("cannot open output file: " + cfg.out_path);
    f << content;
    if (!f) throw FormatError("failed writing output file: " + cfg.out_path);
}

ordered_json metadata(const std::string& command) {
    ordered_json m;
    m["tool"] = kToolName;
    m["version"] = kVersion;
    m["command"] = command;
    m["tolerances"] = tolerance_metadata();
    return m;
}

ordered_json vec3_json(const Vector3& v) { return ordered_json::array({v[0], v[1], v[2]}); }

ordered_json vec4_json(const std::array<double, 4>& v) {
    return ordered_json::array({v[0], v[1], v[2], v[3]});
}

ordered_json mat3_json(const Matrix3& m) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : m) rows.push_back(ordered_json::array({r[0], r[1], r[2]}));
    return rows;
}

ordered_json mat4_json(const RealMatrix4& m) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < 4; ++i) {
        rows.push_back(
            ordered_json::array({m.at(i, 0), m.at(i, 1), m.at(i, 2), m.at(i, 3)}));
    }
    return rows;
}

const char* status_name(OutcomeStatus s) {
    switch (s) {
        case OutcomeStatus::ok: return "ok";
        case OutcomeStatus::zero_probability: return "zero_probability";
        default: return "rank_deficient";
    }
}

// Largest disagreement (inf norm) between recovered inputs of any two ok
// outcomes; they must all equal the sender's state.
double recovery_disagreement(const TransmissionRecord& rec) {
    double worst = 0.0;
    for (const OutcomeRecord& a : rec.outcomes) {
        if (a.status != OutcomeStatus::ok) continue;
        for (const OutcomeRecord& b : rec.outcomes) {
            if (b.status != OutcomeStatus::ok) continue;
            for (std::size_t k = 1; k < 4; ++k) {
                worst = std::max(worst, std::abs(a.reconstruction->c.c(k) -
                                                 b.reconstruction->c.c(k)));
            }
        }
    }
    return worst;
}

std::string csv_cell(double v) { return format_double(v); }

constexpr const char* kUndefined = "undefined";

std::string transmit_csv(const TransmissionRecord& rec) {
    std::string out;
    out += std::string("# tool: ") + kToolName + " " + kVersion + "\n";
    out += "# command: transmit\n";
    out += "# det_r: " + format_double(rec.det_r) + "\n";
    out += "# rank: " + std::to_string(rec.rank) + "\n";
    out += "# probability_sum: " + format_double(rec.probability_sum) + "\n";
    out += "m,n,status,probability,s1,s2,s3,c1,c2,c3,cond,noise_amplification,det_t,"
           "det_identity_residual\n";
    for (const OutcomeRecord& o : rec.outcomes) {
        std::vector<std::string> cells;
        cells.push_back(std::to_string(o.outcome.m));
        cells.push_back(std::to_string(o.outcome.n));
        cells.push_back(status_name(o.status));
        cells.push_back(csv_cell(o.probability));
        for (std::size_t k = 0; k < 3; ++k) {
            cells.push_back(o.collapse ? csv_cell(o.collapse->s[k]) : kUndefined);
        }
        for (std::size_t k = 1; k < 4; ++k) {
            cells.push_back(o.reconstruction ? csv_cell(o.reconstruction->c.c(k)) : kUndefined);
        }
        cells.push_back(o.reconstruction ? csv_cell(o.reconstruction->cond) : kUndefined);
        cells.push_back(o.reconstruction ? csv_cell(o.reconstruction->noise_amplification)
                                         : kUndefined);
        cells.push_back(o.det_t ? csv_cell(*o.det_t) : kUndefined);
        cells.push_back(o.det_identity_residual ? csv_cell(*o.det_identity_residual)
                                                : kUndefined);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ",";
            out += cells[i];
        }
        out += "\n";
    }
    return out;
}

ordered_json transmit_json(const TransmissionRecord& rec, const PauliVector& c,
                           const CorrelationMatrix& r, bool security) {
    ordered_json doc;
    doc["metadata"] = metadata("transmit");
    doc["input"]["c"] = ordered_json::array({1.0, c.c(1), c.c(2), c.c(3)});
    doc["channel"]["r"] = mat4_json(r.matrix());
    doc["channel"]["rank"] = rec.rank;
    doc["channel"]["det_r"] = rec.det_r;
    doc["channel"]["security_form"] = security;
    ordered_json outcomes = ordered_json::array();
    for (const OutcomeRecord& o : rec.outcomes) {
        ordered_json j;
        j["m"] = o.outcome.m;
        j["n"] = o.outcome.n;
        j["status"] = status_name(o.status);
        j["probability"] = o.probability;
        if (o.collapse) j["s"] = vec3_json(o.collapse->s);
        if (o.reconstruction) {
            j["c_recovered"] = vec3_json(o.reconstruction->c.bloch());
            j["cond"] = o.reconstruction->cond;
            j["noise_amplification"] = o.reconstruction->noise_amplification;
        }
        if (o.status == OutcomeStatus::rank_deficient) {
            if (o.min_norm_solution) j["min_norm_solution"] = vec3_json(*o.min_norm_solution);
            ordered_json cands = ordered_json::array();
            for (const Vector3& cand : o.unit_norm_candidates) cands.push_back(vec3_json(cand));
            j["unit_norm_candidates"] = cands;
        }
        if (o.det_t) j["det_t"] = *o.det_t;
        if (o.det_identity_residual) j["det_identity_residual"] = *o.det_identity_residual;
        outcomes.push_back(j);
    }
    doc["outcomes"] = outcomes;
    doc["probability_sum"] = rec.probability_sum;
    doc["max_recovery_disagreement"] = recovery_disagreement(rec);
    return doc;
}

int cmd_transmit(const std::string& input_path, const std::string& channel_path,
                 const RunConfig& cfg) {
    const DensityState rho_c = load_state_file(input_path, 1);
    const DensityState rho_ab = load_state_file(channel_path, 2);
    const TransmissionRecord rec = transmit(rho_c, rho_ab);

    if (cfg.format == "csv") {
        write_output(cfg, transmit_csv(rec));
    } else {
        const CorrelationMatrix r = correlation_from_channel(rho_ab);
        const PauliVector c = bloch_from_state(rho_c);
        write_output(cfg, dump_json(transmit_json(rec, c, r, is_security_form(rho_ab))));
    }
    return 0;
}

int cmd_sweep_werner(int points, const std::string& input_path, const RunConfig& cfg) {
    PauliVector c(0.3, -0.4, 0.5);
    if (!input_path.empty()) c = bloch_from_state(load_state_file(input_path, 1));
    const DensityState rho_c = qubit_from_bloch(c.c(1), c.c(2), c.c(3));

    std::string out;
    out += std::string("# tool: ") + kToolName + " " + kVersion + "\n";
    out += "# command: sweep-werner\n";
    out += "# points: " + std::to_string(points) + "\n";
    out += "# input_c: [" + format_double(c.c(1)) + ", " + format_double(c.c(2)) + ", " +
           format_double(c.c(3)) + "]\n";
    out += "x,rank,discord,concurrence,reconstruction_error,cond,equal_prob_flag\n";

    for (int i = 0; i < points; ++i) {
        const double x = static_cast<double>(i) / (points - 1);
        const DensityState rho_ab = werner(x);
        const CorrelationMatrix r = correlation_from_channel(rho_ab);

        const RankClassification cls = rank_classify(r);
        const DiscordResult disc = discord(rho_ab);
        const ConcurrenceResult conc = concurrence(rho_ab);
        const TransmissionRecord rec = transmit(rho_c, rho_ab);

        double err = 0.0;
        bool any_ok = false;
        for (const OutcomeRecord& o : rec.outcomes) {
            if (o.status != OutcomeStatus::ok) continue;
            any_ok = true;
            for (std::size_t k = 1; k < 4; ++k) {
                err = std::max(err, std::abs(o.reconstruction->c.c(k) - c.c(k)));
            }
        }
        const OutcomeRecord& first = rec.outcomes[0];

        out += format_double(x) + "," + std::to_string(cls.rank) + "," +
               format_double(disc.discord) + "," + format_double(conc.concurrence) + ",";
        out += any_ok ? format_double(err) : kUndefined;
        out += ",";
        out += first.reconstruction ? format_double(first.reconstruction->cond) : kUndefined;
        out += ",";
        out += is_security_form(rho_ab) ? "1" : "0";
        out += "\n";
    }
    write_output(cfg, out);
    return 0;
}

int cmd_discord(const std::string& channel_path, const std::string& side, const RunConfig& cfg) {
    const DensityState rho_ab = load_state_file(channel_path, 2);
    const DiscordResult d =
        discord(rho_ab, side == "B" ? MeasuredSide::B : MeasuredSide::A);
    const ConcurrenceResult conc = concurrence(rho_ab);

    ordered_json doc;
    doc["metadata"] = metadata("discord");
    doc["channel"]["r"] = mat4_json(correlation_from_channel(rho_ab).matrix());
    doc["side"] = side;
    doc["discord"] = d.discord;
    doc["classical_correlation"] = d.classical_correlation;
    doc["mutual_information"] = d.mutual_information;
    doc["joint_entropy"] = entropy(rho_ab);
    doc["concurrence"] = conc.concurrence;
    doc["spin_flip_eigs"] = vec4_json(conc.spin_flip_eigs);
    doc["optimal_direction"]["theta"] = d.theta;
    doc["optimal_direction"]["phi"] = d.phi;
    doc["optimizer_evals"] = d.optimizer_evals;
    write_output(cfg, dump_json(doc));
    return 0;
}

int cmd_rank(const std::string& channel_path, const RunConfig& cfg) {
    const DensityState rho_ab = load_state_file(channel_path, 2);
    const RankClassification cls = rank_classify(correlation_from_channel(rho_ab));

    ordered_json doc;
    doc["metadata"] = metadata("rank");
    doc["rank"] = cls.rank;
    doc["affine_dim"] = cls.affine_dim;
    doc["singular_values"] = vec4_json(cls.singular_values);
    ordered_json terms = ordered_json::array();
    for (const PseudoMixtureTerm& t : cls.basis.terms) {
        ordered_json j;
        j["singular_value"] = t.singular_value;
        j["weight"] = t.weight;
        j["theta_a"] = vec4_json(t.theta_a);
        j["theta_b"] = vec4_json(t.theta_b);
        j["normalized"] = t.normalized;
        j["physical_a"] = t.physical_a;
        j["physical_b"] = t.physical_b;
        terms.push_back(j);
    }
    doc["pseudo_mixture"]["weight_sum"] = cls.basis.weight_sum();
    doc["pseudo_mixture"]["raw_terms"] = cls.basis.raw_terms;
    doc["pseudo_mixture"]["terms"] = terms;
    write_output(cfg, dump_json(doc));
    return 0;
}

int cmd_security(const std::string& channel_path, const RunConfig& cfg) {
    const DensityState rho_ab = load_state_file(channel_path, 2);
    const CorrelationMatrix r = correlation_from_channel(rho_ab);

    Vector3 pol;
    double worst = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
        pol[j] = r.at(j + 1, 0);
        worst = std::max(worst, std::abs(pol[j]));
    }
    ordered_json doc;
    doc["metadata"] = metadata("security");
    doc["security_form"] = is_security_form(rho_ab);
    doc["local_polarization"] = vec3_json(pol);
    doc["max_abs_polarization"] = worst;
    write_output(cfg, dump_json(doc));
    return 0;
}

int cmd_tomography(const std::string& input_path, const std::string& channel_path,
                   const std::string& outcome_str, std::uint64_t shots, std::uint64_t seed,
                   const RunConfig& cfg) {
    const DensityState rho_c = load_state_file(input_path, 1);
    const DensityState rho_ab = load_state_file(channel_path, 2);
    const BellOutcome outcome{outcome_str[0] - '0', outcome_str[1] - '0'};

    const TomographyEstimate est = remote_tomography(rho_c, rho_ab, outcome, shots, seed);

    ordered_json doc;
    doc["metadata"] = metadata("tomography");
    doc["metadata"]["rng"] = kRngVersion;
    doc["metadata"]["seed"] = seed;
    doc["outcome"]["m"] = outcome.m;
    doc["outcome"]["n"] = outcome.n;
    doc["probability"] = est.probability;
    doc["shots_total"] = shots;
    ordered_json recs = ordered_json::array();
    for (const ShotRecord& rec : est.records) {
        ordered_json j;
        j["axis"] = rec.axis;
        j["shots"] = rec.shots;
        j["plus_counts"] = rec.plus_counts;
        recs.push_back(j);
    }
    doc["records"] = recs;
    doc["s_hat"] = vec3_json(est.s_hat);
    doc["s_stderr"] = vec3_json(est.s_stderr);
    doc["c_hat"] = vec3_json(est.c_hat);
    doc["c_cov"] = mat3_json(est.c_cov);
    doc["cond"] = est.cond;
    write_output(cfg, dump_json(doc));
    return 0;
}

template <typename F>
int run_guarded(F&& f) {
    try {
        return f();
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const UnphysicalStateError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnphysical;
    } catch (const NonHermitianError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnphysical;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnphysical;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kToolName) +
                 " - exact simulator of single-qubit transmission through correlated "
                 "two-qubit channels"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);

    std::string input_path, channel_path, side = "A", outcome = "00";
    RunConfig cfg;
    int points = 21;
    std::uint64_t shots = 10000, seed = 12345;

    CLI::App* t = app.add_subcommand("transmit", "Run all four outcomes of the protocol");
    t->add_option("--input", input_path, "JSON file with the single-qubit input state")
        ->required();
    t->add_option("--channel", channel_path, "JSON file with the two-qubit channel state")
        ->required();
    t->add_option("--out", cfg.out_path, "Output file (default: stdout)");
    t->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));

    CLI::App* sw = app.add_subcommand(
        "sweep-werner", "Tabulate protocol and correlation measures over the Werner family");
    sw->add_option("--points", points, "Grid points over x in [0, 1]")
        ->check(CLI::Range(2, 100000));
    sw->add_option("--input", input_path,
                   "Optional JSON input state (default Bloch vector [0.3, -0.4, 0.5])");
    sw->add_option("--out", cfg.out_path, "Output file (default: stdout)");

    CLI::App* d = app.add_subcommand("discord", "Correlation measures of a two-qubit channel");
    d->add_option("--channel", channel_path, "JSON file with the two-qubit channel state")
        ->required();
    d->add_option("--side", side, "Measured side")->check(CLI::IsMember({"A", "B"}));
    d->add_option("--out", cfg.out_path, "Output file (default: stdout)");

    CLI::App* rk = app.add_subcommand("rank", "Correlation rank and pseudo-mixture expansion");
    rk->add_option("--channel", channel_path, "JSON file with the two-qubit channel state")
        ->required();
    rk->add_option("--out", cfg.out_path, "Output file (default: stdout)");

    CLI::App* sec = app.add_subcommand("security", "Check the equal-probability channel form");
    sec->add_option("--channel", channel_path, "JSON file with the two-qubit channel state")
        ->required();
    sec->add_option("--out", cfg.out_path, "Output file (default: stdout)");

    CLI::App* tomo = app.add_subcommand("tomography",
                                        "Finite-shot remote state estimation with error bars");
    tomo->add_option("--input", input_path, "JSON file with the single-qubit input state")
        ->required();
    tomo->add_option("--channel", channel_path, "JSON file with the two-qubit channel state")
        ->required();
    tomo->add_option("--outcome", outcome, "Conditioning outcome mn")
        ->check(CLI::IsMember({"00", "01", "10", "11"}));
    tomo->add_option("--shots", shots, "Total measurement shots")
        ->check(CLI::Range(std::uint64_t{3}, std::uint64_t{1000000000}));
    tomo->add_option("--seed", seed, "Random seed");
    tomo->add_option("--out", cfg.out_path, "Output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    if (*t) return run_guarded([&] { return cmd_transmit(input_path, channel_path, cfg); });
    if (*sw) return run_guarded([&] { return cmd_sweep_werner(points, input_path, cfg); });
    if (*d) return run_guarded([&] { return cmd_discord(channel_path, side, cfg); });
    if (*rk) return run_guarded([&] { return cmd_rank(channel_path, cfg); });
    if (*sec) return run_guarded([&] { return cmd_security(channel_path, cfg); });
    if (*tomo) {
        return run_guarded(
            [&] { return cmd_tomography(input_path, channel_path, outcome, shots, seed, cfg); });
    }
    return kExitUsage;
}
