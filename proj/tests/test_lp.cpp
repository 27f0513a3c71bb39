#include "windh2/lp.hpp"

#include <doctest.h>

#include <cstring>
#include <random>
#include <sstream>

#include "oracles.hpp"

using namespace windh2;

namespace {

LinearProgram make_lp(int n) {
    LinearProgram lp;
    lp.objective = Vec::Zero(n);
    lp.lower = Vec::Constant(n, -std::numeric_limits<double>::infinity());
    lp.upper = Vec::Constant(n, std::numeric_limits<double>::infinity());
    return lp;
}

void add_row(LinearProgram& lp, std::initializer_list<double> coeffs, Relation rel, double rhs) {
    Constraint c;
    c.coeffs = Vec(static_cast<int>(coeffs.size()));
    int i = 0;
    for (double v : coeffs) c.coeffs[i++] = v;
    c.rel = rel;
    c.rhs = rhs;
    lp.constraints.push_back(std::move(c));
}

}  // namespace

TEST_SUITE("lp") {

TEST_CASE("single variable box") {
    LinearProgram lp = make_lp(1);
    lp.objective << 1.0;
    add_row(lp, {1.0}, Relation::LessEq, 3.0);
    add_row(lp, {1.0}, Relation::GreaterEq, 0.0);
    LpSolution s = solve_lp(lp);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.x[0] == doctest::Approx(3.0));
    CHECK(s.objective_value == doctest::Approx(3.0));
}

TEST_CASE("degenerate optimum resolves to the lowest index") {
    LinearProgram lp = make_lp(2);
    lp.objective << 1.0, 1.0;
    lp.lower << 0.0, 0.0;
    add_row(lp, {1.0, 1.0}, Relation::LessEq, 1.0);
    LpSolution s = solve_lp(lp);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.objective_value == doctest::Approx(1.0));
    CHECK(s.x[0] == doctest::Approx(1.0));
    CHECK(s.x[1] == doctest::Approx(0.0));
}

TEST_CASE("two-variable polytope") {
    LinearProgram lp = make_lp(2);
    lp.objective << 2.0, 1.0;
    lp.lower << 0.0, 0.0;
    add_row(lp, {1.0, 0.0}, Relation::LessEq, 2.0);
    add_row(lp, {0.0, 1.0}, Relation::LessEq, 3.0);
    add_row(lp, {1.0, 1.0}, Relation::LessEq, 4.0);
    LpSolution s = solve_lp(lp);
    REQUIRE(s.status == SolveStatus::Optimal);
    // cross-checked by enumerating the polytope's vertices: max of 2x+y over
    // {(0,0),(2,0),(0,3),(1,3),(2,2)} is 6 at (2,2)
    oracle::VertexBest v = oracle::enumerate_vertices(lp);
    REQUIRE(v.feasible);
    CHECK(v.objective == doctest::Approx(6.0));
    CHECK(s.objective_value == doctest::Approx(6.0));
    CHECK(s.x[0] == doctest::Approx(2.0));
    CHECK(s.x[1] == doctest::Approx(2.0));
}

TEST_CASE("infeasible and unbounded statuses") {
    LinearProgram lp = make_lp(1);
    lp.objective << 1.0;
    add_row(lp, {1.0}, Relation::LessEq, 1.0);
    add_row(lp, {1.0}, Relation::GreaterEq, 2.0);
    CHECK(solve_lp(lp).status == SolveStatus::Infeasible);

    LinearProgram ub = make_lp(1);
    ub.objective << 1.0;
    ub.lower << 0.0;
    CHECK(solve_lp(ub).status == SolveStatus::Unbounded);
}

TEST_CASE("malformed input throws") {
    LinearProgram lp = make_lp(2);
    lp.objective << 1.0, 1.0;
    add_row(lp, {1.0}, Relation::LessEq, 1.0);  // dimension mismatch
    CHECK_THROWS_AS(solve_lp(lp), std::invalid_argument);

    LinearProgram lp2 = make_lp(1);
    lp2.objective << 1.0;
    lp2.lower << 2.0;
    lp2.upper << 1.0;
    CHECK_THROWS_AS(solve_lp(lp2), std::invalid_argument);
}

TEST_CASE("milp: forced rounding down") {
    LinearProgram lp = make_lp(1);
    lp.objective << 1.0;
    lp.lower << 0.0;
    lp.upper << 1.0;
    lp.integrality = {0};
    add_row(lp, {1.0}, Relation::LessEq, 0.7);
    LpSolution s = solve_milp(lp);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.x[0] == doctest::Approx(0.0));
    CHECK(s.objective_value == doctest::Approx(0.0));
}

TEST_CASE("milp: mixed binary and continuous") {
    LinearProgram lp = make_lp(2);
    lp.objective << 1.0, 1.0;
    lp.lower << 0.0, 0.0;
    lp.upper << 1.0, std::numeric_limits<double>::infinity();
    lp.integrality = {0};
    add_row(lp, {1.0, 2.0}, Relation::LessEq, 2.0);
    LpSolution s = solve_milp(lp);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.x[0] == doctest::Approx(1.0));
    CHECK(s.x[1] == doctest::Approx(0.5));
    CHECK(s.objective_value == doctest::Approx(1.5));
}

TEST_CASE("milp with empty integrality reduces to solve_lp") {
    LinearProgram lp = make_lp(2);
    lp.objective << 2.0, 1.0;
    lp.lower << 0.0, 0.0;
    add_row(lp, {1.0, 1.0}, Relation::LessEq, 4.0);
    add_row(lp, {1.0, 0.0}, Relation::LessEq, 2.0);
    LpSolution a = solve_lp(lp);
    LpSolution b = solve_milp(lp);
    REQUIRE(a.status == SolveStatus::Optimal);
    REQUIRE(b.status == SolveStatus::Optimal);
    CHECK(std::memcmp(a.x.data(), b.x.data(), sizeof(double) * a.x.size()) == 0);
    CHECK(a.objective_value == b.objective_value);
}

TEST_CASE("determinism: resolving yields bit-identical solutions") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> coeff(-4, 4);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 3;
        LinearProgram lp = make_lp(n);
        for (int j = 0; j < n; ++j) {
            lp.objective[j] = coeff(rng);
            lp.lower[j] = 0.0;
            lp.upper[j] = 5.0;
        }
        for (int i = 0; i < 4; ++i) {
            Constraint c;
            c.coeffs = Vec(n);
            for (int j = 0; j < n; ++j) c.coeffs[j] = coeff(rng);
            c.rel = Relation::LessEq;
            c.rhs = std::abs(coeff(rng)) + 1.0;
            lp.constraints.push_back(c);
        }
        LpSolution a = solve_lp(lp);
        LpSolution b = solve_lp(lp);
        REQUIRE(a.status == b.status);
        if (a.status == SolveStatus::Optimal) {
            CHECK(std::memcmp(a.x.data(), b.x.data(), sizeof(double) * a.x.size()) == 0);
            CHECK(std::memcmp(&a.objective_value, &b.objective_value, sizeof(double)) == 0);
        }
    }
}

TEST_CASE("random small LPs match vertex enumeration") {
    std::mt19937 rng(42);
    std::uniform_int_distribution<int> ncase(1, 4);
    std::uniform_int_distribution<int> mcase(0, 6);
    std::uniform_int_distribution<int> coeff(-4, 4);
    std::uniform_int_distribution<int> relpick(0, 2);
    std::uniform_int_distribution<int> up(1, 8);

    int optimal_seen = 0;
    for (int rep = 0; rep < 250; ++rep) {
        const int n = ncase(rng);
        const int m = mcase(rng);
        LinearProgram lp = make_lp(n);
        for (int j = 0; j < n; ++j) {
            lp.objective[j] = coeff(rng);
            lp.lower[j] = 0.0;
            lp.upper[j] = up(rng);
        }
        for (int i = 0; i < m; ++i) {
            Constraint c;
            c.coeffs = Vec(n);
            bool nonzero = false;
            for (int j = 0; j < n; ++j) {
                c.coeffs[j] = coeff(rng);
                nonzero |= c.coeffs[j] != 0.0;
            }
            if (!nonzero) c.coeffs[0] = 1.0;
            c.rel = static_cast<Relation>(relpick(rng));
            c.rhs = coeff(rng);
            lp.constraints.push_back(c);
        }
        LpSolution s = solve_lp(lp);
        oracle::VertexBest v = oracle::enumerate_vertices(lp);
        if (s.status == SolveStatus::Optimal) {
            ++optimal_seen;
            REQUIRE(v.feasible);
            CHECK(std::abs(s.objective_value - v.objective) <=
                  1e-6 * (1.0 + std::abs(v.objective)));
        } else {
            REQUIRE(s.status == SolveStatus::Infeasible);
            CHECK_FALSE(v.feasible);
        }
    }
    CHECK(optimal_seen > 100);  // the generator must actually exercise the solver
}

TEST_CASE("random milps match exhaustive binary enumeration") {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> ncase(2, 6);
    std::uniform_int_distribution<int> coeff(-4, 4);
    std::uniform_int_distribution<int> up(1, 6);

    int optimal_seen = 0;
    for (int rep = 0; rep < 60; ++rep) {
        const int n = ncase(rng);
        LinearProgram lp = make_lp(n);
        for (int j = 0; j < n; ++j) {
            lp.objective[j] = coeff(rng);
            lp.lower[j] = 0.0;
            lp.upper[j] = up(rng);
        }
        const int nbin = std::min(n, 1 + rep % 5);
        for (int j = 0; j < nbin; ++j) lp.integrality.push_back(j);
        const int m = 2 + rep % 4;
        for (int i = 0; i < m; ++i) {
            Constraint c;
            c.coeffs = Vec(n);
            bool nonzero = false;
            for (int j = 0; j < n; ++j) {
                c.coeffs[j] = coeff(rng);
                nonzero |= c.coeffs[j] != 0.0;
            }
            if (!nonzero) c.coeffs[0] = 1.0;
            c.rel = (i % 3 == 2) ? Relation::GreaterEq : Relation::LessEq;
            c.rhs = coeff(rng) + (c.rel == Relation::LessEq ? 2.0 : -2.0);
            lp.constraints.push_back(c);
        }
        LpSolution s = solve_milp(lp);
        LpSolution ref = oracle::enumerate_binaries(lp);
        REQUIRE(s.status == ref.status);
        if (s.status == SolveStatus::Optimal) {
            ++optimal_seen;
            CHECK(std::abs(s.objective_value - ref.objective_value) <=
                  1e-6 * (1.0 + std::abs(ref.objective_value)));
            for (int j : lp.integrality)
                CHECK(std::abs(s.x[j] - std::round(s.x[j])) <= 1e-6);
        }
    }
    CHECK(optimal_seen > 25);
}

TEST_CASE("ranged rows: paired inequalities behave like an interval") {
    LinearProgram lp = make_lp(2);
    lp.objective << 1.0, -1.0;
    add_row(lp, {1.0, 1.0}, Relation::LessEq, 5.0);
    add_row(lp, {1.0, 1.0}, Relation::GreaterEq, 2.0);
    add_row(lp, {1.0, -1.0}, Relation::LessEq, 1.0);
    add_row(lp, {1.0, -1.0}, Relation::GreaterEq, -1.0);
    LpSolution s = solve_lp(lp);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.objective_value == doctest::Approx(1.0));
}

TEST_CASE("dump format") {
    LinearProgram lp = make_lp(2);
    lp.objective << 2.0, 1.0;
    lp.lower << 0.0, 0.0;
    lp.upper << 10.0, std::numeric_limits<double>::infinity();
    lp.integrality = {1};
    add_row(lp, {1.0, 1.0}, Relation::LessEq, 4.0);
    std::ostringstream os;
    dump_lp(lp, os);
    const std::string text = os.str();
    CHECK(text.find("max: 2 x0 + 1 x1") != std::string::npos);
    CHECK(text.find("c0: 1 x0 + 1 x1 <= 4") != std::string::npos);
    CHECK(text.find("bounds: 0 <= x0 <= 10") != std::string::npos);
    CHECK(text.find("binary: x1") != std::string::npos);
}

}  // TEST_SUITE
