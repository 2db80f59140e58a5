#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qit/measures.hpp"
#include "qit/protocol.hpp"
#include "support/random_states.hpp"

using namespace qit;
namespace ts = qit::testsupport;

namespace {

// Discord of the werner family, frozen from an independent closed-form
// evaluation cross-checked against a brute-force measurement scan.
struct WernerDiscordGolden {
    double x;
    double discord;
};
constexpr WernerDiscordGolden kWernerDiscord[] = {
    {0.05, 0.0034401998503936039}, {0.15, 0.028555839766659616},
    {0.2, 0.049022499567306291},   {0.25, 0.074193187980817114},
    {1.0 / 3.0, 0.12581458369391142}, {0.5, 0.26248318376373433},
    {0.7, 0.48403091304112650},    {1.0, 1.0},
};

constexpr double kWernerHalfEntropy = 1.5487949406953985;

DensityState bell_diagonal_state(double t1, double t2, double t3) {
    RealMatrix4 r;
    r.at(0, 0) = 1.0;
    r.at(1, 1) = t1;
    r.at(2, 2) = t2;
    r.at(3, 3) = t3;
    return channel_from_correlation(CorrelationMatrix(r));
}

}  // namespace

TEST_CASE("entropy anchors") {
    CHECK(entropy(qubit_from_bloch(0.0, 0.0, 1.0)) == doctest::Approx(0.0));
    CHECK(entropy(qubit_from_bloch(0.0, 0.0, 0.0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(entropy(DensityState(0.25 * ComplexMatrix::identity(4), 2)) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(entropy(werner(0.5)) == doctest::Approx(kWernerHalfEntropy).epsilon(1e-12));
    CHECK(entropy(werner(1.0)) == doctest::Approx(0.0));
}

TEST_CASE("mutual information anchors") {
    CHECK(mutual_information(bell_state({0, 0})) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(mutual_information(werner(0.5)) ==
          doctest::Approx(2.0 - kWernerHalfEntropy).epsilon(1e-10));

    SplitMix64 g(301);
    for (int rep = 0; rep < 20; ++rep) {
        CHECK(std::abs(mutual_information(ts::random_product_channel(g))) < 1e-10);
    }
}

TEST_CASE("concurrence of the werner family") {
    // the factored route keeps full precision even at the pure endpoint
    CHECK(concurrence(werner(1.0)).concurrence == doctest::Approx(1.0).epsilon(1e-12));
    // separability boundary
    CHECK(concurrence(werner(1.0 / 3.0)).concurrence == doctest::Approx(0.0));

    for (int i = 0; i <= 20; ++i) {
        const double x = i / 20.0;
        const double expect = std::max(0.0, (3.0 * x - 1.0) / 2.0);
        CHECK(concurrence(werner(x)).concurrence == doctest::Approx(expect).epsilon(1e-12));
    }

    // below the boundary the larger lambdas cancel and the max clamps to 0
    CHECK(concurrence(werner(0.2)).concurrence == 0.0);
}

TEST_CASE("concurrence reports descending spin-flip eigenvalues") {
    SplitMix64 g(307);
    for (int rep = 0; rep < 50; ++rep) {
        const ConcurrenceResult r = concurrence(ts::random_channel(g));
        for (std::size_t i = 1; i < 4; ++i) CHECK(r.spin_flip_eigs[i - 1] >= r.spin_flip_eigs[i]);
        CHECK(r.spin_flip_eigs[3] >= 0.0);
    }
}

TEST_CASE("product states carry no entanglement") {
    SplitMix64 g(311);
    for (int rep = 0; rep < 100; ++rep) {
        CHECK(concurrence(ts::random_product_channel(g)).concurrence == 0.0);
    }
}

TEST_CASE("discord matches the frozen werner values") {
    for (const WernerDiscordGolden& golden : kWernerDiscord) {
        const DiscordResult d = discord(werner(golden.x));
        CHECK(d.discord == doctest::Approx(golden.discord).epsilon(1e-9));
        CHECK(d.optimizer_evals <= 64 * 32 + 200);
    }
    CHECK(discord(werner(0.0)).discord == doctest::Approx(0.0));
}

TEST_CASE("discord is monotone on the werner family") {
    double prev = -1.0;
    for (int i = 0; i <= 20; ++i) {
        const double d = discord(werner(i / 20.0)).discord;
        CHECK(d >= prev - tol::opt);
        prev = d;
    }
}

TEST_CASE("discord components are consistent") {
    SplitMix64 g(313);
    for (int rep = 0; rep < 30; ++rep) {
        const DensityState rho = ts::random_channel(g);
        const DiscordResult d = discord(rho);
        CHECK(d.discord + d.classical_correlation ==
              doctest::Approx(d.mutual_information).epsilon(1e-9));
        CHECK(d.discord >= 0.0);
        CHECK(d.classical_correlation >= -1e-12);
        CHECK(d.discord <= d.mutual_information + tol::opt);
        CHECK(d.mutual_information ==
              doctest::Approx(mutual_information(rho)).epsilon(1e-9));
    }
}

TEST_CASE("product states carry no discord") {
    SplitMix64 g(317);
    for (int rep = 0; rep < 100; ++rep) {
        CHECK(discord(ts::random_product_channel(g)).discord <= tol::opt);
    }
}

TEST_CASE("separable states can still be discordant") {
    // werner states below the separability boundary
    int exhibits = 0;
    for (double x : {0.04, 0.08, 0.12, 0.16, 0.2, 0.24, 0.28, 0.32}) {
        if (concurrence(werner(x)).concurrence == 0.0 && discord(werner(x)).discord > tol::opt) {
            ++exhibits;
        }
    }
    // plus mixed-sign diagonal channels inside the separable region
    const double diags[4][3] = {
        {0.3, -0.25, 0.2}, {-0.35, 0.3, 0.2}, {0.2, 0.2, 0.2}, {0.45, -0.25, 0.15}};
    for (const auto& t : diags) {
        const DensityState rho = bell_diagonal_state(t[0], t[1], t[2]);
        if (concurrence(rho).concurrence == 0.0 && discord(rho).discord > tol::opt) {
            ++exhibits;
        }
    }
    CHECK(exhibits >= 10);
}

TEST_CASE("discord is invariant under local unitaries") {
    SplitMix64 g(331);
    for (int rep = 0; rep < 10; ++rep) {
        const DensityState rho = ts::random_channel(g);
        const ComplexMatrix u = kron(ts::random_unitary2(g), ts::random_unitary2(g));
        const DensityState rotated(u * rho.matrix() * u.adjoint(), 2);

        const double d0 = discord(rho).discord;
        const double d1 = discord(rotated).discord;
        CHECK(std::abs(d0 - d1) < 5.0 * tol::opt);
    }
}

TEST_CASE("discord of either side") {
    // werner states are symmetric under swapping the qubits
    const double da = discord(werner(0.5), MeasuredSide::A).discord;
    const double db = discord(werner(0.5), MeasuredSide::B).discord;
    CHECK(da == doctest::Approx(db).epsilon(1e-9));

    // asymmetric channel: both sides still satisfy the basic bounds
    ComplexMatrix m(4);
    m.at(0, 0) = 0.35;
    m.at(0, 3) = 0.35;
    m.at(3, 0) = 0.35;
    m.at(3, 3) = 0.35;
    m.at(1, 1) = 0.3;
    const DensityState rho(m, 2);
    for (MeasuredSide side : {MeasuredSide::A, MeasuredSide::B}) {
        const DiscordResult d = discord(rho, side);
        CHECK(d.discord >= 0.0);
        CHECK(d.discord <= d.mutual_information + tol::opt);
        CHECK(d.discord + d.classical_correlation ==
              doctest::Approx(d.mutual_information).epsilon(1e-9));
    }
}

TEST_CASE("full-rank channels are never discord-free") {
    SplitMix64 g(337);
    for (int rep = 0; rep < 10; ++rep) {
        const DensityState rho = ts::random_full_rank_channel(g);
        CHECK(discord(rho).discord > tol::opt);
    }
    // rank-3 examples
    CHECK(discord(bell_diagonal_state(0.5, -0.3, 0.0)).discord > tol::opt);
    CHECK(discord(bell_diagonal_state(0.4, 0.0, 0.35)).discord > tol::opt);
}
