#include "pencil_lab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace pencil_lab {

namespace {
std::atomic<bool> g_serial{false};
}

void set_serial(bool serial) { g_serial = serial; }

bool serial_mode() { return g_serial; }

int worker_count() {
  if (g_serial) return 1;
  if (const char* env = std::getenv("PENCIL_LAB_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace pencil_lab
