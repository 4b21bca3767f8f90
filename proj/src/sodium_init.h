#ifndef CFU_SRC_SODIUM_INIT_H_
#define CFU_SRC_SODIUM_INIT_H_

#include <sodium.h>

namespace cfu::internal {

inline void EnsureSodium() {
  static const bool ready = sodium_init() >= 0;
  (void)ready;
}

}  // namespace cfu::internal

#endif  // CFU_SRC_SODIUM_INIT_H_
