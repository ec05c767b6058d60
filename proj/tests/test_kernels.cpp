#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "q3/kernels.hpp"

using namespace q3;
using namespace q3::kernels;

namespace {

void check_all_kernels(const std::vector<BigInt>& a, const std::vector<BigInt>& b, std::size_t limit) {
    auto ref = oracle::naive_convolution(a, b);
    if (limit < ref.size()) ref.resize(limit);
    const auto s = mul_schoolbook(a, b, limit);
    const auto p = mul_sparse(a, b, limit);
    const auto k = mul_kronecker(a, b, limit);
    const auto m = mul(a, b, limit);
    REQUIRE(s.size() == ref.size());
    CHECK(s == ref);
    CHECK(p == ref);
    CHECK(k == ref);
    CHECK(m == ref);
}

}  // namespace

TEST_CASE("kernels agree on random signed inputs") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 200; ++t) {
        const auto a = oracle::random_vector(rng, 1 + rng() % 60, 1 + static_cast<int>(rng() % 200));
        const auto b = oracle::random_vector(rng, 1 + rng() % 60, 1 + static_cast<int>(rng() % 200));
        check_all_kernels(a, b, kNoLimit);
        check_all_kernels(a, b, 1 + rng() % (a.size() + b.size()));
    }
}

TEST_CASE("kernels agree on sparse and zero-heavy inputs") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 100; ++t) {
        const auto a = oracle::random_vector(rng, 1 + rng() % 120, 8, 0.9);
        const auto b = oracle::random_vector(rng, 1 + rng() % 120, 400, 0.3);
        check_all_kernels(a, b, kNoLimit);
        check_all_kernels(a, b, 1 + rng() % 100);
    }
}

TEST_CASE("kronecker handles borrow chains") {
    // All -1 against all +1 forces a negative digit in every slot.
    std::vector<BigInt> a(50, BigInt(-1)), b(50, BigInt(1));
    check_all_kernels(a, b, kNoLimit);
    std::vector<BigInt> c(40);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = (i % 2 ? -1 : 1) * pow3(static_cast<unsigned>(i * 7));
    check_all_kernels(c, c, kNoLimit);
    check_all_kernels(c, a, 30);
}

TEST_CASE("squaring uses the same operand") {
    std::mt19937_64 rng(3);
    const auto a = oracle::random_vector(rng, 70, 500);
    CHECK(mul_kronecker(a, a) == oracle::naive_convolution(a, a));
}

TEST_CASE("degenerate shapes") {
    std::vector<BigInt> empty;
    std::vector<BigInt> one = {BigInt(7)};
    std::vector<BigInt> zeros(10);
    CHECK(mul(empty, one).empty());
    CHECK(mul_kronecker(zeros, zeros) == std::vector<BigInt>(19));
    CHECK(mul(one, one) == std::vector<BigInt>{BigInt(49)});
    CHECK(mul(one, zeros, 0).empty());
}

TEST_CASE("kernel choice follows operand shape") {
    std::vector<BigInt> short_v(5, BigInt(1));
    std::vector<BigInt> dense(100, BigInt(3));
    std::vector<BigInt> sparse(100);
    sparse[0] = 1;
    sparse[50] = -2;
    CHECK(choose_kernel(short_v, dense, kNoLimit) == Kernel::schoolbook);
    CHECK(choose_kernel(sparse, dense, kNoLimit) == Kernel::sparse);
    CHECK(choose_kernel(dense, dense, kNoLimit) == Kernel::kronecker);
    CHECK(count_nonzero(sparse) == 2);
}
