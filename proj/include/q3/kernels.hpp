#ifndef Q3_KERNELS_HPP
#define Q3_KERNELS_HPP

// Coefficient-array products shared by series and polynomial arithmetic.
//
// Three interchangeable kernels compute the same truncated convolution
//   r[k] = sum_{i+j=k} a[i] * b[j],  0 <= k < limit
// and must agree bit for bit:
//   * schoolbook  - the reference, O(|a| |b|) multiply-adds;
//   * sparse      - skips zero entries of the sparser operand (theta series
//                   have O(sqrt N) nonzero terms);
//   * kronecker   - packs each operand into one integer (slot width chosen so
//                   no coefficient can overflow), does a single GMP product and
//                   unpacks with signed-digit borrow handling.
// mul() picks a kernel from operand shape.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "q3/bigint.hpp"

namespace q3::kernels {

inline constexpr std::size_t kNoLimit = std::numeric_limits<std::size_t>::max();

enum class Kernel { automatic, schoolbook, sparse, kronecker };

std::vector<BigInt> mul_schoolbook(std::span<const BigInt> a, std::span<const BigInt> b,
                                   std::size_t limit = kNoLimit);
std::vector<BigInt> mul_sparse(std::span<const BigInt> a, std::span<const BigInt> b,
                               std::size_t limit = kNoLimit);
std::vector<BigInt> mul_kronecker(std::span<const BigInt> a, std::span<const BigInt> b,
                                  std::size_t limit = kNoLimit);

Kernel choose_kernel(std::span<const BigInt> a, std::span<const BigInt> b, std::size_t limit);

std::vector<BigInt> mul(std::span<const BigInt> a, std::span<const BigInt> b,
                        std::size_t limit = kNoLimit, Kernel kernel = Kernel::automatic);

std::size_t count_nonzero(std::span<const BigInt> a);

}  // namespace q3::kernels

#endif
