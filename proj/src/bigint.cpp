#include "q3/bigint.hpp"

#include <algorithm>
#include <mutex>
#include <vector>

#include "q3/errors.hpp"

namespace q3 {

std::string to_decimal(const BigInt& x) { return x.get_str(10); }

BigInt from_decimal(std::string_view text) {
    std::size_t start = (!text.empty() && text.front() == '-') ? 1 : 0;
    if (text.size() == start) throw UsageError("empty integer literal");
    for (std::size_t i = start; i < text.size(); ++i) {
        if (text[i] < '0' || text[i] > '9')
            throw UsageError("malformed integer literal: " + std::string(text.substr(0, 32)));
    }
    BigInt out;
    out.set_str(std::string(text), 10);
    return out;
}

std::size_t decimal_digits(const BigInt& x) {
    if (x == 0) return 1;
    std::string s = x.get_str(10);
    return s.size() - (s.front() == '-' ? 1 : 0);
}

std::string elide_decimal(const BigInt& x, std::size_t max_digits) {
    std::string s = x.get_str(10);
    const bool neg = !s.empty() && s.front() == '-';
    const std::size_t digits = s.size() - (neg ? 1 : 0);
    if (digits <= max_digits || max_digits < 8) return s;
    const std::size_t keep = max_digits / 2;
    std::string body = s.substr(neg ? 1 : 0);
    return (neg ? "-" : "") + body.substr(0, keep) + "..." + body.substr(body.size() - keep) +
           " (" + std::to_string(digits) + " digits)";
}

const BigInt& pow3(unsigned e) {
    static std::mutex mu;
    static std::vector<BigInt> table{BigInt(1)};
    std::lock_guard lock(mu);
    // deque-like growth would invalidate references; reserve generously up front.
    if (table.capacity() < 4096) table.reserve(4096);
    if (e >= table.capacity()) {
        thread_local BigInt big;
        mpz_ui_pow_ui(big.get_mpz_t(), 3, e);
        return big;
    }
    while (table.size() <= e) table.push_back(table.back() * 3);
    return table[e];
}

std::int64_t Nu3::value() const {
    if (infinite_) throw UsageError("valuation of zero is infinite");
    return value_;
}

std::string Nu3::to_string() const { return infinite_ ? "inf" : std::to_string(value_); }

Nu3 nu3(const BigInt& x) {
    if (x == 0) return Nu3::infinity();
    BigInt rest;
    mp_bitcnt_t v = mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), BigInt(3).get_mpz_t());
    return Nu3(static_cast<std::int64_t>(v));
}

bool divisible_by_pow3(const BigInt& x, unsigned e) {
    if (e == 0 || x == 0) return true;
    if (e < 4096) return mpz_divisible_p(x.get_mpz_t(), pow3(e).get_mpz_t()) != 0;
    BigInt p;
    mpz_ui_pow_ui(p.get_mpz_t(), 3, e);
    return mpz_divisible_p(x.get_mpz_t(), p.get_mpz_t()) != 0;
}

std::size_t max_bit_length(std::span<const BigInt> xs) {
    std::size_t best = 0;
    for (const auto& x : xs) {
        if (x != 0) best = std::max<std::size_t>(best, mpz_sizeinbase(x.get_mpz_t(), 2));
    }
    return best;
}

}  // namespace q3
