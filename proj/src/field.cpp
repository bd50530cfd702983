#include "alloysim/field.hpp"

namespace alloysim {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL}) {
    if (n % p == 0) return n == p;
  }
  // trial division by 6k±1; moduli are < 2^32 so this stays cheap
  for (std::uint64_t d = 11; d * d <= n; d += 6) {
    if (n % d == 0 || n % (d + 2) == 0) return false;
  }
  return true;
}

}  // namespace alloysim
