#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "simkern/boolnet.hpp"
#include "simkern/rng.hpp"

using namespace simkern;

namespace {

// Independent attractor oracle: follow the exhaustively precomputed
// successor table until a state repeats.
struct OracleResult {
    std::size_t transient;
    std::vector<BooleanNetwork::State> cycle;
};

OracleResult oracle_attractor(const BooleanNetwork& net, BooleanNetwork::State initial) {
    const std::size_t n_states = std::size_t{1} << net.node_count();
    std::vector<BooleanNetwork::State> succ(n_states);
    for (BooleanNetwork::State s = 0; s < n_states; ++s) succ[s] = step_boolean(net, s);

    std::vector<std::ptrdiff_t> when(n_states, -1);
    std::vector<BooleanNetwork::State> orbit;
    BooleanNetwork::State s = initial;
    while (when[s] < 0) {
        when[s] = static_cast<std::ptrdiff_t>(orbit.size());
        orbit.push_back(s);
        s = succ[s];
    }
    OracleResult out;
    out.transient = static_cast<std::size_t>(when[s]);
    out.cycle.assign(orbit.begin() + when[s], orbit.end());
    return out;
}

// Random rule text over `n` nodes for fuzzing both parser and dynamics.
std::string random_network_text(int n, Rng& rng) {
    std::string text;
    for (int i = 0; i < n; ++i) {
        auto var = [&] { return "n" + std::to_string(rng.index(static_cast<std::size_t>(n))); };
        std::string expr;
        switch (rng.index(5)) {
            case 0: expr = var(); break;
            case 1: expr = "!" + var(); break;
            case 2: expr = var() + " & " + (rng.bernoulli(0.5) ? "!" : "") + var(); break;
            case 3: expr = var() + " | (" + var() + " & !" + var() + ")"; break;
            default: expr = rng.bernoulli(0.5) ? "1" : "0";
        }
        text += "n" + std::to_string(i) + " = " + expr + "\n";
    }
    return text;
}

}  // namespace

TEST_CASE("two-node swap oscillates with period 2") {
    BooleanNetwork net = parse_boolean_network("A = B\nB = A\n");
    AttractorResult res = find_attractor(net, 0b01, 16);
    CHECK(res.transient_length == 0);
    REQUIRE(res.cycle_states.size() == 2);
    CHECK(res.cycle_states[0] == 0b01);
    CHECK(res.cycle_states[1] == 0b10);
    CHECK(res.steady_state(0) == std::vector<bool>{true, false});
    CHECK(res.steady_state(1) == std::vector<bool>{false, true});
}

TEST_CASE("constant rules reach a fixed point") {
    BooleanNetwork net = parse_boolean_network("A = 1\nB = A & !A\nC = A | B\n");
    AttractorResult res = find_attractor(net, 0, 16);
    REQUIRE(res.cycle_states.size() == 1);
    CHECK(res.cycle_states[0] == 0b101);  // A=1, B=0, C=1
}

TEST_CASE("parser understands precedence and parentheses") {
    BooleanNetwork net = parse_boolean_network("A = B | C & D\nB = (A | C) & D\nC = !A & !D\nD = 1\n");
    // at state D=1, others 0: A' = 0 | (0 & 1) = 0; B' = (0|0)&1 = 0; C' = 1 & 0 = 0
    CHECK(step_boolean(net, 0b1000) == 0b1000);
    // C=1, D=1: A' = 0 | 1&1 = 1
    CHECK((step_boolean(net, 0b1100) & 1u) == 1u);
}

TEST_CASE("parser rejects malformed input") {
    CHECK_THROWS_AS(parse_boolean_network("A = B\n"), MalformedToken);      // undeclared node
    CHECK_THROWS_AS(parse_boolean_network("A = (A\n"), MalformedToken);     // missing )
    CHECK_THROWS_AS(parse_boolean_network("A = A A\n"), MalformedToken);    // trailing tokens
    CHECK_THROWS_AS(parse_boolean_network("A = A\nA = 1\n"), DuplicateName);
    CHECK_THROWS_AS(parse_boolean_network("just text\n"), MalformedToken);
    CHECK_THROWS_AS(parse_boolean_network(" = 1\n"), MalformedToken);
    CHECK_THROWS_AS(parse_boolean_network("A = 2\n"), MalformedToken);
}

TEST_CASE("comments and blank lines are skipped; node_index works") {
    BooleanNetwork net = parse_boolean_network("# fate net\n\nA = 1\n  B = A\n");
    CHECK(net.node_count() == 2);
    CHECK(net.node_index("B") == 1);
    CHECK_THROWS_AS(net.node_index("C"), MissingEntity);
}

TEST_CASE("attractor search agrees with exhaustive enumeration on 100 random nets") {
    for (int trial = 0; trial < 100; ++trial) {
        Rng rng(static_cast<std::uint64_t>(trial) + 500);
        int n = 2 + static_cast<int>(rng.index(11));  // up to 12 nodes
        BooleanNetwork net = parse_boolean_network(random_network_text(n, rng));
        const std::size_t n_states = std::size_t{1} << n;
        for (int probe = 0; probe < 5; ++probe) {
            BooleanNetwork::State init = rng.next_u64() & (n_states - 1);
            AttractorResult got = find_attractor(net, init, n_states);
            OracleResult want = oracle_attractor(net, init);
            CHECK(got.transient_length == want.transient);
            CHECK(got.cycle_states == want.cycle);
        }
    }
}

TEST_CASE("budget exhaustion throws") {
    BooleanNetwork net = parse_boolean_network("A = !A\nB = !A\nC = A & B\n");
    CHECK_THROWS_AS(find_attractor(net, 0, 0), NoAttractorWithinBudget);
}

TEST_CASE("fate classification follows the cycle-wide rules") {
    AttractorResult fixed;
    fixed.cycle_states = {0b01};  // apoptosis bit 0 on
    CHECK(classify_boolean(fixed, 0, 1) == 1);

    AttractorResult meta;
    meta.cycle_states = {0b10};
    CHECK(classify_boolean(meta, 0, 1) == 2);

    AttractorResult both;  // apoptosis wins when both are always on
    both.cycle_states = {0b11};
    CHECK(classify_boolean(both, 0, 1) == 1);

    AttractorResult cyc;  // apoptosis on only half the cycle -> not class 1
    cyc.cycle_states = {0b01, 0b10};
    CHECK(classify_boolean(cyc, 0, 1) == 3);

    AttractorResult neither;
    neither.cycle_states = {0b00};
    CHECK(classify_boolean(neither, 0, 1) == 3);
}
