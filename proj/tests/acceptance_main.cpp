// Acceptance suite: one line per criterion, exit code = number of failures.
// argv[1] must be the path to the command-line binary (used by criterion 9).

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qit/measures.hpp"
#include "qit/protocol.hpp"
#include "qit/states.hpp"
#include "qit/tomography.hpp"
#include "support/random_states.hpp"

using namespace qit;
namespace ts = qit::testsupport;

namespace {

struct Checker {
    bool ok = true;
    std::string notes;

    void expect(bool cond, const std::string& what) {
        if (cond) return;
        ok = false;
        if (!notes.empty()) notes += "; ";
        notes += what;
    }
};

int g_failures = 0;

template <typename F>
void criterion(int id, const std::string& label, F&& body, double budget_secs = 0.0) {
    Checker c;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.expect(false, std::string("unexpected exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (budget_secs > 0.0) {
        c.expect(secs < budget_secs, "exceeded the " + std::to_string(budget_secs) +
                                         "s time budget");
    }
    char timing[32];
    std::snprintf(timing, sizeof(timing), "%.2fs", secs);
    if (c.ok) {
        std::cout << "[PASS] criterion " << id << ": " << label << " (" << timing << ")\n";
    } else {
        ++g_failures;
        std::cout << "[FAIL] criterion " << id << ": " << label << " (" << timing
                  << "): " << c.notes << "\n";
    }
    std::cout.flush();
}

double max_recovery_error(const TransmissionRecord& rec, const PauliVector& c, Checker& ck,
                          const std::string& ctx) {
    double worst = 0.0;
    for (const OutcomeRecord& o : rec.outcomes) {
        ck.expect(o.status == OutcomeStatus::ok, ctx + ": outcome not ok");
        if (o.status != OutcomeStatus::ok) continue;
        for (std::size_t k = 1; k < 4; ++k) {
            worst = std::max(worst, std::abs(o.reconstruction->c.c(k) - c.c(k)));
        }
    }
    return worst;
}

DensityState bell_diagonal_state(double t1, double t2, double t3) {
    RealMatrix4 r;
    r.at(0, 0) = 1.0;
    r.at(1, 1) = t1;
    r.at(2, 2) = t2;
    r.at(3, 3) = t3;
    return channel_from_correlation(CorrelationMatrix(r));
}

double tomography_rms(const DensityState& channel, const PauliVector& input,
                      std::uint64_t shots, int trials, std::uint64_t seed_base) {
    const DensityState rho_c = qubit_from_bloch(input.c(1), input.c(2), input.c(3));
    const BellOutcome outcome{0, 0};
    double sum_sq = 0.0;
    for (int t = 0; t < trials; ++t) {
        const TomographyEstimate est =
            remote_tomography(rho_c, channel, outcome, shots, seed_base + t);
        for (std::size_t k = 0; k < 3; ++k) {
            const double d = est.c_hat[k] - input.c(k + 1);
            sum_sq += d * d;
        }
    }
    return std::sqrt(sum_sq / trials);
}

std::string g_cli_path;

int run_cli(const std::string& args) {
    const std::string cmd = g_cli_path + " " + args + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

bool write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    f << content;
    return f.good();
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

void criterion_1(Checker& ck) {
    // A maximally entangled channel transmits every pure input exactly.
    SplitMix64 g(7);
    const DensityState ch = werner(1.0);
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        // uniform direction normalized to the sphere: a Haar-random pure qubit
        Vector3 b = ts::random_bloch(g, 1.0);
        const double n = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
        for (double& v : b) v /= n;
        const PauliVector c(b[0], b[1], b[2]);
        const TransmissionRecord rec = transmit(qubit_from_bloch(b[0], b[1], b[2]), ch);
        worst = std::max(worst, max_recovery_error(rec, c, ck, "pure channel"));
        ck.expect(std::abs(rec.probability_sum - 1.0) < 1e-12, "probabilities do not sum to 1");
    }
    ck.expect(worst < 1e-9, "recovery error " + std::to_string(worst) + " exceeds 1e-9");
}

void criterion_2(Checker& ck) {
    // Unentangled but discordant channels still transmit faithfully.
    SplitMix64 g(11);
    for (double x : {0.05, 0.15, 0.25, 1.0 / 3.0}) {
        const DensityState ch = werner(x);
        ck.expect(concurrence(ch).concurrence == 0.0,
                  "x=" + std::to_string(x) + ": channel is entangled");
        const double d = discord(ch).discord;
        ck.expect(d > 1e-3, "x=" + std::to_string(x) + ": discord " + std::to_string(d) +
                                " not above 1e-3");
        double worst = 0.0;
        for (int rep = 0; rep < 20; ++rep) {
            const Vector3 b = ts::random_bloch(g);
            const PauliVector c(b[0], b[1], b[2]);
            const TransmissionRecord rec = transmit(qubit_from_bloch(b[0], b[1], b[2]), ch);
            worst = std::max(worst, max_recovery_error(rec, c, ck, "werner"));
        }
        ck.expect(worst < 1e-8, "x=" + std::to_string(x) + ": recovery error " +
                                    std::to_string(worst));
    }
}

void criterion_3(Checker& ck) {
    // Family endpoints: no information at x = 0, exact transfer at x = 1,
    // and the entanglement threshold sits at x = 1/3.
    const TransmissionRecord at0 =
        transmit(qubit_from_bloch(0.3, -0.4, 0.5), werner(0.0));
    ck.expect(at0.rank == 1, "x=0 channel rank is not 1");
    for (const OutcomeRecord& o : at0.outcomes) {
        ck.expect(o.status == OutcomeStatus::rank_deficient, "x=0 outcome not rank_deficient");
        ck.expect(!o.reconstruction.has_value(), "x=0 outcome carries a reconstruction");
    }

    const PauliVector c(0.3, -0.4, 0.5);
    const TransmissionRecord at1 = transmit(qubit_from_bloch(0.3, -0.4, 0.5), werner(1.0));
    ck.expect(max_recovery_error(at1, c, ck, "x=1") < 1e-9, "x=1 recovery is not exact");

    const double d1 = discord(werner(1.0)).discord;
    ck.expect(std::abs(d1 - 1.0) < 1e-3, "discord at x=1 is " + std::to_string(d1));
    const double c1 = concurrence(werner(1.0)).concurrence;
    ck.expect(std::abs(c1 - 1.0) < 1e-9, "concurrence at x=1 is " + std::to_string(c1));
    const double d0 = discord(werner(0.0)).discord;
    ck.expect(d0 < 1e-4, "discord at x=0 is " + std::to_string(d0));
    ck.expect(concurrence(werner(0.0)).concurrence == 0.0, "concurrence at x=0 is nonzero");

    for (int i = 0; i <= 20; ++i) {
        const double x = i / 20.0;
        const double expect = std::max(0.0, (3.0 * x - 1.0) / 2.0);
        const double got = concurrence(werner(x)).concurrence;
        ck.expect(std::abs(got - expect) < 1e-9,
                  "concurrence mismatch at x=" + std::to_string(x));
    }
}

void criterion_4(Checker& ck) {
    // The closed-form conditional state equals the direct 8x8 projection.
    SplitMix64 g(17);
    double worst = 0.0;
    int evaluated = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        const DensityState ch = ts::random_channel(g);
        const Vector3 b = ts::random_bloch(g);
        const PauliVector c(b[0], b[1], b[2]);
        const BellOutcome o = BellOutcome::from_index(static_cast<int>(g.next() % 4));
        try {
            const CollapseResult col = collapse(qubit_from_bloch(b[0], b[1], b[2]), ch, o);
            const Vector3 s = s_vector_analytic(correlation_from_channel(ch), c, o);
            for (std::size_t k = 0; k < 3; ++k) {
                worst = std::max(worst, std::abs(col.s[k] - s[k]));
            }
            ++evaluated;
        } catch (const UndefinedCollapseError&) {
            // vanishing outcome: nothing to compare
        }
    }
    ck.expect(evaluated >= 900, "too many vanishing outcomes");
    ck.expect(worst < 1e-10, "worst deviation " + std::to_string(worst));

    // scaling anchor: through werner(x) the conditional state is x times the
    // input at outcome (0, 0)
    for (double x : {0.3, 0.7, 1.0}) {
        const PauliVector c(0.3, -0.4, 0.5);
        const CollapseResult col =
            collapse(qubit_from_bloch(0.3, -0.4, 0.5), werner(x), BellOutcome{0, 0});
        for (std::size_t k = 0; k < 3; ++k) {
            ck.expect(std::abs(col.s[k] - x * c.c(k + 1)) < 1e-10,
                      "werner anchor failed at x=" + std::to_string(x));
        }
    }
}

void criterion_5(Checker& ck) {
    // The reachable conditional states of a rank-k channel fill a
    // (k-1)-dimensional region.
    SplitMix64 g(23);
    struct Case {
        DensityState ch;
        int rank;
    };
    const Case cases[] = {{ts::random_product_channel(g), 1},
                          {bell_diagonal_state(0.8, 0.0, 0.0), 2},
                          {bell_diagonal_state(0.5, -0.3, 0.0), 3},
                          {werner(0.6), 4}};
    for (const Case& cs : cases) {
        const CorrelationMatrix r = correlation_from_channel(cs.ch);
        const RankClassification cls = rank_classify(r);
        ck.expect(cls.rank == cs.rank, "expected rank " + std::to_string(cs.rank) + ", got " +
                                           std::to_string(cls.rank));
        ck.expect(cls.affine_dim == cs.rank - 1, "affine dimension mismatch");

        const int n = 500;
        std::vector<Vector3> cloud;
        cloud.reserve(n);
        Vector3 mean{};
        for (int i = 0; i < n; ++i) {
            const Vector3 b = ts::random_bloch(g);
            const Vector3 s = s_vector_analytic(r, PauliVector(b[0], b[1], b[2]),
                                                BellOutcome{0, 0});
            cloud.push_back(s);
            for (std::size_t k = 0; k < 3; ++k) mean[k] += s[k] / n;
        }
        Matrix3 scatter{};
        for (const Vector3& s : cloud) {
            for (std::size_t i = 0; i < 3; ++i) {
                for (std::size_t j = 0; j < 3; ++j) {
                    scatter[i][j] += (s[i] - mean[i]) * (s[j] - mean[j]) / n;
                }
            }
        }
        const Svd3 sv = svd3(scatter);
        int spread_dims = 0;
        for (double d : sv.d) {
            if (d > 1e-8) ++spread_dims;
        }
        ck.expect(spread_dims == cs.rank - 1,
                  "rank " + std::to_string(cs.rank) + " channel: cloud spans " +
                      std::to_string(spread_dims) + " dims");
    }
}

void criterion_6(Checker& ck) {
    // (4 p) det T = -det R for every channel, input, and outcome; in
    // particular the product is independent of the input.
    SplitMix64 g(29);
    double worst_residual = 0.0;
    double worst_drift = 0.0;
    for (int chan = 0; chan < 100; ++chan) {
        const DensityState ch = ts::random_full_rank_channel(g);
        const CorrelationMatrix r = correlation_from_channel(ch);
        const double det_r = det4(r.matrix());
        double first_lhs = 0.0;
        for (int rep = 0; rep < 100; ++rep) {
            const Vector3 b = ts::random_bloch(g);
            const PauliVector c(b[0], b[1], b[2]);
            const BellOutcome o = BellOutcome::from_index(rep % 4);
            const Vector3 eps = bell_signs(o);
            double denom = 1.0;
            for (std::size_t j = 0; j < 3; ++j) denom += eps[j] * r.at(j + 1, 0) * c.c(j + 1);
            const Vector3 s = s_vector_analytic(r, c, o);
            const double lhs = denom * det3(coefficient_matrix(r, s, o));
            const double residual =
                std::abs(lhs + det_r) / std::max({std::abs(det_r), std::abs(lhs), 1e-3});
            worst_residual = std::max(worst_residual, residual);
            if (rep == 0) {
                first_lhs = lhs;
            } else if (o.index() == 0 && rep % 4 == 0) {
                worst_drift = std::max(worst_drift,
                                       std::abs(lhs - first_lhs) /
                                           std::max(std::abs(first_lhs), 1e-3));
            }
        }
    }
    ck.expect(worst_residual <= 1e-8, "worst residual " + std::to_string(worst_residual));
    ck.expect(worst_drift <= 1e-8, "product depends on the input: drift " +
                                       std::to_string(worst_drift));
}

void criterion_7(Checker& ck) {
    // Unpolarized channels hide the input: every outcome is equally likely.
    SplitMix64 g(31);
    for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const DensityState ch = werner(x);
        ck.expect(is_security_form(ch), "werner channel not recognized");
        for (int rep = 0; rep < 100; ++rep) {
            const Vector3 b = ts::random_bloch(g);
            const TransmissionRecord rec = transmit(qubit_from_bloch(b[0], b[1], b[2]), ch);
            for (const OutcomeRecord& o : rec.outcomes) {
                ck.expect(std::abs(o.probability - 0.25) < 1e-10,
                          "outcome probability deviates from 1/4");
            }
        }
    }

    // a locally polarized channel leaks: outcome statistics shift with the input
    RealMatrix4 rb;
    rb.at(0, 0) = 1.0;
    rb.at(0, 2) = 0.4;   // receiver marginal (0, 0.4, 0)
    rb.at(1, 0) = 0.3;   // sender marginal (0.3, 0, 0)
    rb.at(1, 2) = 0.12;
    const DensityState biased = channel_from_correlation(CorrelationMatrix(rb));
    ck.expect(!is_security_form(biased), "polarized channel passed the predicate");
    const TransmissionRecord rec = transmit(qubit_from_bloch(0.3, -0.4, 0.5), biased);
    double max_dev = 0.0;
    for (const OutcomeRecord& o : rec.outcomes) {
        max_dev = std::max(max_dev, std::abs(o.probability - 0.25));
    }
    ck.expect(max_dev > 0.01, "biased channel shows no probability shift");
    ck.expect(std::abs(rec.probability_sum - 1.0) < 1e-12, "probabilities do not sum to 1");
}

void criterion_8(Checker& ck) {
    // Finite-shot estimation: error scales as 1/sqrt(shots) and inversely
    // with the channel parameter.
    const PauliVector c(0.3, -0.4, 0.5);
    const int trials = 100;
    const double r3 = tomography_rms(werner(1.0), c, 1000, trials, 9000);
    const double r4 = tomography_rms(werner(1.0), c, 10000, trials, 9200);
    const double r5 = tomography_rms(werner(1.0), c, 100000, trials, 9400);
    const double ratio34 = r3 / r4;
    const double ratio45 = r4 / r5;
    const double root10 = std::sqrt(10.0);
    ck.expect(ratio34 > root10 / 1.3 && ratio34 < root10 * 1.3,
              "1e3/1e4 ratio " + std::to_string(ratio34) + " not near sqrt(10)");
    ck.expect(ratio45 > root10 / 1.3 && ratio45 < root10 * 1.3,
              "1e4/1e5 ratio " + std::to_string(ratio45) + " not near sqrt(10)");

    const double noisy = tomography_rms(werner(0.25), c, 10000, trials, 9600);
    const double inflation = noisy / r4;
    ck.expect(inflation > 3.2 && inflation < 5.2,
              "noise inflation " + std::to_string(inflation) + " not near 4");
}

void criterion_9(Checker& ck) {
    // End-to-end reproducibility of the command-line tool.
    if (g_cli_path.empty()) {
        ck.expect(false, "no CLI path on the command line");
        return;
    }
    ck.expect(write_file("acc_input.json", R"({"kind": "pauli", "c": [1, 0.3, -0.4, 0.5]})"),
              "cannot write temp file");
    ck.expect(write_file("acc_channel.json", R"({"kind": "werner", "x": 0.7})"),
              "cannot write temp file");

    const std::string tomo =
        "tomography --input acc_input.json --channel acc_channel.json "
        "--outcome 00 --shots 20000 --seed 4242 --out ";
    ck.expect(run_cli(tomo + "acc_t1.json") == 0, "tomography run 1 failed");
    ck.expect(run_cli(tomo + "acc_t2.json") == 0, "tomography run 2 failed");
    const std::string t1 = read_file("acc_t1.json");
    ck.expect(!t1.empty() && t1 == read_file("acc_t2.json"),
              "tomography outputs are not byte-identical");

    ck.expect(run_cli("sweep-werner --points 11 --out acc_s1.csv") == 0, "sweep run 1 failed");
    ck.expect(run_cli("sweep-werner --points 11 --out acc_s2.csv") == 0, "sweep run 2 failed");
    const std::string s1 = read_file("acc_s1.csv");
    ck.expect(!s1.empty() && s1 == read_file("acc_s2.csv"),
              "sweep outputs are not byte-identical");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli_path = argv[1];

    criterion(1, "maximally entangled channel recovers every input exactly", criterion_1, 1.0);
    criterion(2, "discordant unentangled channels transmit faithfully", criterion_2, 30.0);
    criterion(3, "family endpoints and the entanglement threshold", criterion_3);
    criterion(4, "closed-form conditional state matches the projection", criterion_4);
    criterion(5, "channel rank fixes the dimension of the reachable set", criterion_5);
    criterion(6, "determinant identity holds and is input-independent", criterion_6);
    criterion(7, "unpolarized channels equalize the outcome probabilities", criterion_7);
    criterion(8, "estimation error scales with shots and channel noise", criterion_8, 60.0);
    criterion(9, "command-line runs are byte-for-byte reproducible", criterion_9);

    std::cout << "acceptance: " << (9 - g_failures) << "/9 criteria passed\n";
    return g_failures;
}
