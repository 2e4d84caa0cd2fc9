#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "wvsim/error.hpp"
#include "wvsim/qstate.hpp"

using namespace wvsim;

namespace {

const cplx I{0.0, 1.0};

std::vector<Label> range_labels(int lo, int n) {
    std::vector<Label> l;
    for (int k = 0; k < n; ++k) l.push_back(lo + k);
    return l;
}

SystemState to_state(const std::vector<Label>& labels, const std::vector<cplx>& v) {
    Eigen::VectorXcd a(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) a(static_cast<Eigen::Index>(i)) = v[i];
    return SystemState::from_vector(labels, a);
}

Observable random_hermitian(std::mt19937_64& rng, const std::vector<Label>& labels) {
    std::normal_distribution<double> n(0.0, 1.0);
    const auto d = static_cast<Eigen::Index>(labels.size());
    Eigen::MatrixXcd m(d, d);
    for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c) m(r, c) = cplx(n(rng), n(rng));
    return Observable::from_matrix(labels, m + m.adjoint());
}

}  // namespace

TEST_CASE("make_state normalizes and sorts") {
    SUBCASE("two-state pre-selection") {
        auto s = SystemState::from_pairs({{-1, 1.0}, {0, 1.0}});
        CHECK(s.labels() == std::vector<Label>{-1, 0});
        CHECK(std::abs(s.amplitude(-1) - 1.0 / std::sqrt(2.0)) < 1e-15);
        CHECK(std::abs(s.amplitude(0) - 1.0 / std::sqrt(2.0)) < 1e-15);
    }
    SUBCASE("single term") {
        auto s = SystemState::from_pairs({{1, 5.0}});
        CHECK(s.amplitude(1) == cplx(1.0, 0.0));
    }
    SUBCASE("phase preserved") {
        auto s = SystemState::from_pairs({{1, I}, {0, 1.0}});
        CHECK(std::abs(s.amplitude(0) - 1.0 / std::sqrt(2.0)) < 1e-15);
        CHECK(std::abs(s.amplitude(1) - I / std::sqrt(2.0)) < 1e-15);
    }
    SUBCASE("absent label reads as zero") {
        auto s = SystemState::from_pairs({{1, 1.0}});
        CHECK(s.amplitude(7) == cplx(0.0, 0.0));
    }
}

TEST_CASE("make_state errors") {
    auto kind_of = [](auto&& f) {
        try {
            f();
        } catch (const Error& e) {
            return e.kind();
        }
        FAIL("no error raised");
        return ErrorKind::InvalidData;
    };
    CHECK(kind_of([] { SystemState::from_pairs({{0, 0.0}, {1, 0.0}}); }) == ErrorKind::ZeroVector);
    CHECK(kind_of([] { SystemState::from_pairs({{0, 1.0}, {0, 2.0}}); }) == ErrorKind::DuplicateLabel);
    CHECK(kind_of([] { SystemState::from_pairs({}); }) == ErrorKind::ZeroVector);
}

TEST_CASE("inner product") {
    auto ket = SystemState::from_pairs({{-1, 1.0}, {0, 1.0}});
    auto bra = SystemState::from_pairs({{-1, 1.0}, {0, -2.0}});
    CHECK(std::abs(inner(bra, ket) - (-1.0 / std::sqrt(10.0))) < 1e-15);
    CHECK(std::abs(inner(ket, ket) - 1.0) < 1e-15);

    const std::vector<Label> labels{0, 1};
    CHECK(inner(SystemState::basis(labels, 0), SystemState::basis(labels, 1)) == cplx(0.0, 0.0));

    auto other = SystemState::from_pairs({{0, 1.0}, {1, 1.0}});
    CHECK_THROWS_AS(inner(ket, other), Error);
}

TEST_CASE("apply") {
    auto a = Observable::integer_spin({-1, 0});
    auto s = SystemState::from_pairs({{-1, 1.0}, {0, 1.0}});
    const Eigen::VectorXcd v = apply(a, s);
    CHECK(std::abs(v(0) - (-1.0 / std::sqrt(2.0))) < 1e-15);
    CHECK(v(1) == cplx(0.0, 0.0));

    const Eigen::VectorXcd same = apply(Observable::identity({-1, 0}), s);
    CHECK((same - s.amplitudes()).norm() == 0.0);

    // sigma_z |+x> = |-x>, with |+-x> = (|+1> +- |-1>)/sqrt2. Labels sort as
    // (-1, +1), so the hand-multiplied 2x2 product is diag(-1, 1)(1, 1)/sqrt2.
    auto up_x = SystemState::from_pairs({{1, 1.0}, {-1, 1.0}});
    const Eigen::VectorXcd flipped = apply(Observable::sigma_z(), up_x);
    CHECK(std::abs(flipped(0) - (-1.0 / std::sqrt(2.0))) < 1e-15);  // label -1
    CHECK(std::abs(flipped(1) - (1.0 / std::sqrt(2.0))) < 1e-15);   // label +1
}

TEST_CASE("expectation") {
    auto a = Observable::integer_spin({0, 1, 2});
    CHECK(expectation(a, SystemState::from_pairs({{0, 1.0}, {1, 0.0}, {2, 1.0}})) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(expectation(a, SystemState::basis({0, 1, 2}, 1)) == 1.0);
    auto sym = SystemState::from_pairs({{-1, 1.0}, {0, 0.0}, {1, 1.0}});
    CHECK(std::abs(expectation(Observable::integer_spin({-1, 0, 1}), sym)) < 1e-15);
}

TEST_CASE("observable construction") {
    auto d = Observable::integer_spin({-2, 0, 3});
    CHECK(d.is_diagonal());
    CHECK(d.matrix()(0, 1) == cplx(0.0, 0.0));
    CHECK(d.matrix()(2, 2) == cplx(3.0, 0.0));

    Eigen::MatrixXcd m(2, 2);
    m << 1.0, cplx(0.0, 1.0), cplx(0.0, 1.0), 1.0;  // not Hermitian
    try {
        Observable::from_matrix({0, 1}, m);
        FAIL("expected NotHermitian");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotHermitian);
    }
    CHECK_THROWS_AS(Observable::projector({0, 1}, 5), Error);
}

TEST_CASE("eigenpairs of a non-diagonal observable") {
    Eigen::MatrixXcd sx(2, 2);
    sx << 0.0, 1.0, 1.0, 0.0;
    auto x = Observable::from_matrix({-1, 1}, sx);
    auto pairs = x.eigenpairs();
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].value == doctest::Approx(-1.0));
    CHECK(pairs[1].value == doctest::Approx(1.0));
    for (const auto& p : pairs) CHECK((sx * p.vector - p.value * p.vector).norm() < 1e-12);
}

TEST_CASE("qstate properties on random inputs") {
    std::mt19937_64 rng(20240611);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t dim = 1 + trial % 16;
        const auto labels = range_labels(-3, static_cast<int>(dim));
        const auto va = oracle::random_state(rng, dim);
        const auto vb = oracle::random_state(rng, dim);
        const auto a = to_state(labels, va);
        const auto b = to_state(labels, vb);

        const cplx ab = inner(a, b);
        CHECK(std::abs(ab - std::conj(inner(b, a))) < 1e-14);
        CHECK(std::abs(ab) <= 1.0 + 1e-12);
        CHECK(std::abs(ab - oracle::dot(va, vb)) < 1e-13);

        const auto obs = random_hermitian(rng, labels);
        CHECK_NOTHROW(expectation(obs, a));

        for (const auto& [value, vec] : obs.eigenpairs()) {
            Eigen::VectorXcd amps = vec;
            const auto eig = SystemState::from_vector(labels, amps);
            CHECK((apply(obs, eig) - value * eig.amplitudes()).norm() < 1e-12 * std::max(1.0, std::abs(value)));
        }
    }
}
