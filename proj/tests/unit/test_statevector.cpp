#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "pqm/errors.hpp"
#include "pqm/statevector.hpp"

using namespace pqm;
using pqm::testing::Gen;

namespace {

QuantumState random_state(Gen& g, int n) {
    std::vector<Complex> amps(std::size_t{1} << n);
    double norm = 0.0;
    for (auto& v : amps) {
        v = {g.real(-1, 1), g.real(-1, 1)};
        norm += std::norm(v);
    }
    for (auto& v : amps) {
        v /= std::sqrt(norm);
    }
    return QuantumState::from_amplitudes(std::move(amps));
}

GateOp random_op(Gen& g, int n) {
    std::vector<int> qs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        qs[static_cast<std::size_t>(i)] = i;
    }
    std::shuffle(qs.begin(), qs.end(), g.engine());
    const int t = qs[0];
    switch (g.index(0, 5)) {
        case 0: return GateOp::x(t);
        case 1: return GateOp::h(t);
        case 2: {
            const std::size_t k = g.index(1, static_cast<std::size_t>(n - 1));
            return GateOp::mcx({qs.begin() + 1, qs.begin() + 1 + static_cast<std::ptrdiff_t>(k)}, t);
        }
        case 3: return GateOp::diag_phase(t, g.real(-4, 4));
        case 4: return GateOp::ctrl_diag_phase(qs[1], t, g.real(-4, 4));
        default: return GateOp::cs(qs[1], t, static_cast<std::uint32_t>(g.index(1, 9)));
    }
}

double distance(const QuantumState& a, const QuantumState& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

}  // namespace

TEST_CASE("new state is |0...0>") {
    const auto s = new_state(3);
    CHECK(s.dimension() == 8);
    CHECK(s[0] == Complex(1.0, 0.0));
    CHECK(s.norm_squared() == 1.0);
}

TEST_CASE("qubit 0 is the least significant index bit") {
    auto s = new_state(3);
    s.apply(GateOp::x(0));
    CHECK(std::abs(s[1]) == 1.0);
    s.apply(GateOp::x(2));
    CHECK(std::abs(s[5]) == 1.0);
}

TEST_CASE("single-qubit gate matrices") {
    auto s = new_state(1);
    s.apply(GateOp::h(0));
    CHECK(s[0].real() == doctest::Approx(std::sqrt(0.5)));
    CHECK(s[1].real() == doctest::Approx(std::sqrt(0.5)));

    // diag(e^{i t}, 1): phase on |0>, identity on |1>
    auto z = new_state(1);
    z.apply(GateOp::diag_phase(0, 0.7));
    CHECK(std::arg(z[0]) == doctest::Approx(0.7));
    auto o = QuantumState::basis(1, 1);
    o.apply(GateOp::diag_phase(0, 0.7));
    CHECK(o[1] == Complex(1.0, 0.0));
}

TEST_CASE("controlled phase acts only when the control is 1") {
    auto s = QuantumState::basis(2, 0b00);
    s.apply(GateOp::ctrl_diag_phase(1, 0, 0.4));
    CHECK(s[0] == Complex(1.0, 0.0));
    auto t = QuantumState::basis(2, 0b10);
    t.apply(GateOp::ctrl_diag_phase(1, 0, 0.4));
    CHECK(std::arg(t[2]) == doctest::Approx(0.4));
    auto u = QuantumState::basis(2, 0b11);
    u.apply(GateOp::ctrl_diag_phase(1, 0, 0.4));
    CHECK(u[3] == Complex(1.0, 0.0));
}

TEST_CASE("MCX flips the target only when all controls are set") {
    for (std::uint64_t i = 0; i < 16; ++i) {
        auto s = QuantumState::basis(4, i);
        s.apply(GateOp::mcx({0, 1, 2}, 3));
        const std::uint64_t expect = (i & 7u) == 7u ? i ^ 8u : i;
        CHECK(std::abs(s[expect]) == 1.0);
    }
    CHECK(GateOp::mcx({}, 2).kind == GateKind::X);
    CHECK(GateOp::cnot(0, 1).controls.size() == 1);
}

TEST_CASE("CS block is the unitary S^j") {
    for (std::uint32_t j = 1; j <= 20; ++j) {
        const CsBlock b = cs_block(j);
        CHECK(b.diag * b.diag + b.off * b.off == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(b.off == doctest::Approx(1.0 / std::sqrt(static_cast<double>(j))));
        // S^j |1> with control set: amplitude sqrt((j-1)/j) stays, 1/sqrt(j) moves to |0>
        auto s = QuantumState::basis(2, 0b11);
        s.apply(GateOp::cs(1, 0, j));
        CHECK(s[3].real() == doctest::Approx(b.diag));
        CHECK(s[2].real() == doctest::Approx(b.off));
    }
    CHECK_THROWS_AS(cs_block(0), DomainError);
    CHECK_THROWS_AS(GateOp::cs(0, 1, 0), DomainError);
}

TEST_CASE("apply rejects bad qubits and collisions") {
    auto s = new_state(2);
    CHECK_THROWS_AS(s.apply(GateOp::x(2)), DomainError);
    CHECK_THROWS_AS(s.apply(GateOp::cnot(1, 1)), DomainError);
    CHECK_THROWS_AS(s.apply(GateOp::mcx({0, 0}, 1)), DomainError);
    CHECK_THROWS_AS(s.apply(GateOp::measure({0})), DomainError);
    CHECK_THROWS_AS(GateOp::measure({0}).inverse(), DomainError);
}

TEST_CASE("qubit cap raises a resource error naming the requirement") {
    try {
        (void)new_state(12, 10);
        FAIL("expected ResourceError");
    } catch (const ResourceError& e) {
        CHECK(e.required() == 12);
        CHECK(e.cap() == 10);
    }
    CHECK_THROWS_AS(new_state(0), DomainError);
}

TEST_CASE("from_amplitudes validates shape and norm") {
    CHECK_THROWS_AS(QuantumState::from_amplitudes({1.0, 0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(QuantumState::from_amplitudes({1.0, 1.0}), DomainError);
}

TEST_CASE("property: every gate preserves the norm") {
    Gen g(21);
    for (int it = 0; it < 200; ++it) {
        const int n = static_cast<int>(g.index(2, 6));
        auto s = random_state(g, n);
        for (int k = 0; k < 10; ++k) {
            s.apply(random_op(g, n));
        }
        CHECK(s.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("property: op followed by its inverse is the identity") {
    Gen g(22);
    for (int it = 0; it < 300; ++it) {
        const int n = static_cast<int>(g.index(2, 5));
        const auto s0 = random_state(g, n);
        const GateOp op = random_op(g, n);
        auto s = s0;
        s.apply(op);
        s.apply(op.inverse());
        CHECK(distance(s, s0) < 1e-12);
    }
}

TEST_CASE("marginals and single-qubit probabilities agree") {
    Gen g(23);
    for (int it = 0; it < 50; ++it) {
        const auto s = random_state(g, 4);
        const std::vector<int> qs{2, 0};
        const auto m = s.marginal(qs);
        double total = 0.0;
        for (double p : m) {
            total += p;
        }
        CHECK(total == doctest::Approx(1.0));
        CHECK(m[1] + m[3] == doctest::Approx(s.probability(2, 1)));
        CHECK(m[2] + m[3] == doctest::Approx(s.probability(0, 1)));
    }
    const std::vector<int> dup{1, 1};
    CHECK_THROWS_AS(new_state(2).marginal(dup), DomainError);
}

TEST_CASE("measurement collapses and is reproducible under a seed") {
    auto s = new_state(2);
    s.apply(GateOp::h(0));
    s.apply(GateOp::cnot(0, 1));
    const std::vector<int> qs{0};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto r1 = measure(s, qs, seed);
        const auto r2 = measure(s, qs, seed);
        CHECK(r1.bits == r2.bits);
        const int b = r1.bits[0];
        // Bell pair: the partner qubit follows the measured one.
        CHECK(r1.state.probability(1, b) == doctest::Approx(1.0));
        CHECK(r1.state.norm_squared() == doctest::Approx(1.0));
    }
}

TEST_CASE("sampled frequencies follow the Born rule") {
    auto s = new_state(1);
    s.apply(GateOp::h(0));
    s.apply(GateOp::diag_phase(0, 1.1));
    s.apply(GateOp::h(0));
    const double p1 = s.probability(0, 1);
    CHECK(p1 == doctest::Approx(std::pow(std::sin(0.55), 2)));
    Rng rng(5);
    const std::vector<int> qs{0};
    int ones = 0;
    const int shots = 20000;
    for (int k = 0; k < shots; ++k) {
        ones += measure(s, qs, rng).bits[0];
    }
    const double sigma = std::sqrt(p1 * (1 - p1) / shots);
    CHECK(std::abs(ones / static_cast<double>(shots) - p1) < 4 * sigma + 1e-12);
}
