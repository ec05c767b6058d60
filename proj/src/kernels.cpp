#include "q3/kernels.hpp"

#include <algorithm>
#include <cstring>

namespace q3::kernels {
namespace {

std::size_t product_length(std::size_t na, std::size_t nb, std::size_t limit) {
    if (na == 0 || nb == 0) return 0;
    return std::min(na + nb - 1, limit);
}

void addmul(BigInt& acc, const BigInt& x, const BigInt& y) {
    if (x.fits_slong_p()) {
        long s = x.get_si();
        if (s >= 0)
            mpz_addmul_ui(acc.get_mpz_t(), y.get_mpz_t(), static_cast<unsigned long>(s));
        else
            mpz_submul_ui(acc.get_mpz_t(), y.get_mpz_t(), static_cast<unsigned long>(-(s + 1)) + 1);
    } else {
        mpz_addmul(acc.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    }
}

// Writes sum a[i] * 2^(64*w*i) into out. Slot width w is in limbs.
void pack(std::span<const BigInt> a, std::size_t w, mpz_t out) {
    const std::size_t total = a.size() * w;
    mpz_t neg;
    mpz_init(neg);
    mp_limb_t* pos_limbs = mpz_limbs_write(out, static_cast<mp_size_t>(total));
    std::memset(pos_limbs, 0, total * sizeof(mp_limb_t));
    mp_limb_t* neg_limbs = nullptr;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const mpz_srcptr c = a[i].get_mpz_t();
        const int sgn = mpz_sgn(c);
        if (sgn == 0) continue;
        const std::size_t n = mpz_size(c);
        const mp_limb_t* src = mpz_limbs_read(c);
        if (sgn > 0) {
            std::memcpy(pos_limbs + i * w, src, n * sizeof(mp_limb_t));
        } else {
            if (neg_limbs == nullptr) {
                neg_limbs = mpz_limbs_write(neg, static_cast<mp_size_t>(total));
                std::memset(neg_limbs, 0, total * sizeof(mp_limb_t));
            }
            std::memcpy(neg_limbs + i * w, src, n * sizeof(mp_limb_t));
        }
    }
    mpz_limbs_finish(out, static_cast<mp_size_t>(total));
    if (neg_limbs != nullptr) {
        mpz_limbs_finish(neg, static_cast<mp_size_t>(total));
        mpz_sub(out, out, neg);
    }
    mpz_clear(neg);
}

// Inverse of pack for a value whose balanced base-2^(64w) digits are the coefficients.
std::vector<BigInt> unpack(mpz_srcptr packed, std::size_t w, std::size_t count) {
    std::vector<BigInt> out(count);
    const int sign = mpz_sgn(packed);
    if (sign == 0) return out;
    const std::size_t size = mpz_size(packed);
    const mp_limb_t* limbs = mpz_limbs_read(packed);
    const mp_bitcnt_t width_bits = static_cast<mp_bitcnt_t>(w) * GMP_NUMB_BITS;

    BigInt slot_base;
    mpz_setbit(slot_base.get_mpz_t(), width_bits);
    BigInt t;
    bool carry = false;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t lo = i * w;
        if (lo < size) {
            const std::size_t avail = std::min(w, size - lo);
            mp_limb_t* dst = mpz_limbs_write(t.get_mpz_t(), static_cast<mp_size_t>(avail));
            std::memcpy(dst, limbs + lo, avail * sizeof(mp_limb_t));
            mpz_limbs_finish(t.get_mpz_t(), static_cast<mp_size_t>(avail));
        } else {
            t = 0;
        }
        if (carry) t += 1;
        // t >= 2^(W-1) means the digit is negative in balanced form.
        if (t != 0 && mpz_sizeinbase(t.get_mpz_t(), 2) >= width_bits) {
            mpz_sub(out[i].get_mpz_t(), t.get_mpz_t(), slot_base.get_mpz_t());
            carry = true;
        } else {
            mpz_swap(out[i].get_mpz_t(), t.get_mpz_t());
            carry = false;
        }
        if (sign < 0) mpz_neg(out[i].get_mpz_t(), out[i].get_mpz_t());
    }
    return out;
}

std::size_t ceil_log2(std::size_t n) {
    std::size_t r = 0;
    while ((std::size_t{1} << r) < n) ++r;
    return r;
}

}  // namespace

std::size_t count_nonzero(std::span<const BigInt> a) {
    return static_cast<std::size_t>(
        std::count_if(a.begin(), a.end(), [](const BigInt& x) { return x != 0; }));
}

std::vector<BigInt> mul_schoolbook(std::span<const BigInt> a, std::span<const BigInt> b,
                                   std::size_t limit) {
    const std::size_t n = product_length(a.size(), b.size(), limit);
    std::vector<BigInt> r(n);
    for (std::size_t i = 0; i < a.size() && i < n; ++i) {
        if (a[i] == 0) continue;
        const std::size_t jmax = std::min(b.size(), n - i);
        for (std::size_t j = 0; j < jmax; ++j) {
            mpz_addmul(r[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
        }
    }
    return r;
}

std::vector<BigInt> mul_sparse(std::span<const BigInt> a, std::span<const BigInt> b,
                               std::size_t limit) {
    const std::size_t n = product_length(a.size(), b.size(), limit);
    std::vector<BigInt> r(n);
    if (n == 0) return r;
    // Iterate over the nonzeros of whichever side has fewer.
    const bool a_sparser = count_nonzero(a) <= count_nonzero(b);
    std::span<const BigInt> s = a_sparser ? a : b;
    std::span<const BigInt> d = a_sparser ? b : a;
    for (std::size_t i = 0; i < s.size() && i < n; ++i) {
        if (s[i] == 0) continue;
        const std::size_t jmax = std::min(d.size(), n - i);
        for (std::size_t j = 0; j < jmax; ++j) {
            if (d[j] != 0) addmul(r[i + j], s[i], d[j]);
        }
    }
    return r;
}

std::vector<BigInt> mul_kronecker(std::span<const BigInt> a, std::span<const BigInt> b,
                                  std::size_t limit) {
    const std::size_t n = product_length(a.size(), b.size(), limit);
    if (n == 0) return {};
    // Entries past the limit never contribute.
    a = a.first(std::min(a.size(), n));
    b = b.first(std::min(b.size(), n));
    const std::size_t ba = max_bit_length(a);
    const std::size_t bb = max_bit_length(b);
    if (ba == 0 || bb == 0) return std::vector<BigInt>(n);

    // |r[k]| < min(|a|,|b|) * 2^(ba+bb); one more bit for the balanced sign.
    const std::size_t need = ba + bb + ceil_log2(std::min(a.size(), b.size())) + 2;
    const std::size_t w = (need + GMP_NUMB_BITS - 1) / GMP_NUMB_BITS;

    mpz_t pa, pb;
    mpz_init(pa);
    mpz_init(pb);
    pack(a, w, pa);
    const bool same = a.data() == b.data() && a.size() == b.size();
    if (same)
        mpz_mul(pa, pa, pa);
    else {
        pack(b, w, pb);
        mpz_mul(pa, pa, pb);
    }
    mpz_clear(pb);
    std::vector<BigInt> r = unpack(pa, w, n);
    mpz_clear(pa);
    return r;
}

Kernel choose_kernel(std::span<const BigInt> a, std::span<const BigInt> b, std::size_t limit) {
    const std::size_t la = std::min(a.size(), limit);
    const std::size_t lb = std::min(b.size(), limit);
    if (la == 0 || lb == 0) return Kernel::schoolbook;
    if (std::min(la, lb) <= 12) return Kernel::schoolbook;
    const std::size_t nz = std::min(count_nonzero(a.first(la)), count_nonzero(b.first(lb)));
    // Theta-type factors: a handful of +-1, +-2 entries.
    if (nz <= 48) return Kernel::sparse;
    return Kernel::kronecker;
}

std::vector<BigInt> mul(std::span<const BigInt> a, std::span<const BigInt> b, std::size_t limit,
                        Kernel kernel) {
    if (kernel == Kernel::automatic) kernel = choose_kernel(a, b, limit);
    switch (kernel) {
        case Kernel::schoolbook: return mul_schoolbook(a, b, limit);
        case Kernel::sparse: return mul_sparse(a, b, limit);
        case Kernel::kronecker: return mul_kronecker(a, b, limit);
        case Kernel::automatic: break;
    }
    return mul_schoolbook(a, b, limit);
}

}  // namespace q3::kernels
