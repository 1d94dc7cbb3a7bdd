#include <cstdio>

#include "crossfv/mesh.hpp"

int main() {
  std::puts("crossfv: CLI under construction");
  return 0;
}
